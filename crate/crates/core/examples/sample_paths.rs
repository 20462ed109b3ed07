//! A few trajectories started next to the barrier, printed as text.

use snob::random::StreamFactory;
use snob::sim::snob_path;
use snob::{GPoint, SnobParams, TimeGrid};

fn main() -> snob::Result<()> {
    let params = SnobParams::new(2.0)?;
    let grid = TimeGrid::new(0.05, 20)?;
    let streams = StreamFactory::new(42);
    for id in 0..4 {
        let path = snob_path(&mut streams.stream(id), GPoint::plus(0.1), &grid, &params)?;
        let line: String = path.points().iter().map(|p| format!("{:+.2} ", p.embed())).collect();
        println!("path {id}: {line}");
        println!(
            "        side changes {}, local time {:.3}",
            path.flip_count(),
            path.cumulative_local_time().last().unwrap()
        );
    }
    Ok(())
}
