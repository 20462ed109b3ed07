//! What a single step does: crossing test, contact time, local time and
//! the side decision.

use snob::random::{bridge_crossing_prob, bridge_hit_time, localtime_position, RandomStream};
use snob::sim::{snob_step, StepConfig};
use snob::{GPoint, SnobParams};

fn main() -> snob::Result<()> {
    let mut s = RandomStream::new(2024, 0);
    let (x, y, dt) = (0.1, 0.05, 0.01);
    println!("bridge {x} -> {y} over {dt}: touches 0 with probability {:.4}", bridge_crossing_prob(x, y, dt));
    let z = bridge_hit_time(&mut s, x, y, dt)?;
    println!("  sampled first contact at {z:.5}");
    let d = localtime_position(&mut s, dt - z)?;
    println!("  then local time {:.5} and distance {:.5}", d.local_time, d.magnitude);

    let cfg = StepConfig::new(dt, SnobParams::new(5.0)?)?;
    for _ in 0..5 {
        let r = snob_step(&mut s, GPoint::plus(0.05), &cfg);
        println!(
            "step from +0.05: crossed {:<5} contact {:?} local time {:.4} -> {}",
            r.crossed, r.hit_time, r.local_time, r.endpoint
        );
    }
    Ok(())
}
