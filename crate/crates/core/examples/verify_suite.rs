//! Runs one verification suite in-process and prints its verdicts.

use snob::verify::{run_suite, Suite, VerifyConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let name = std::env::args().nth(1).unwrap_or_else(|| "semigroup".into());
    let suite: Suite = name.parse()?;
    let cfg = VerifyConfig {
        n_paths: 20_000,
        ..VerifyConfig::default()
    };
    let report = run_suite(suite, &cfg)?;
    for v in &report.verdicts {
        println!("{} {:<40} stat {:+.3} threshold {:.3}", if v.pass { "PASS" } else { "FAIL" }, v.name, v.statistic, v.threshold);
    }
    println!("{suite}: {}", if report.pass { "pass" } else { "fail" });
    Ok(())
}
