fn main() {
    std::process::exit(snob::cli::run(std::env::args_os()));
}
