//! Pilot for cause-effect accuracy on synthetic heteroskedastic pairs.
//!
//!     cargo run --release -p c2st --example causal_pilot -- [instances] [noise] [ensemble] [base_seed]
//!
//! About half of the instances have their columns swapped, so the true
//! direction is Y->X there.

use c2st::causal::{cause_effect, synthetic_benchmark, CausalConfig, BENCH_NOISE};
use c2st::numerics::Rng;

fn main() {
    let arg = |i: usize| std::env::args().nth(i);
    let instances: usize = arg(1).map_or(20, |s| s.parse().unwrap());
    let noise: f64 = arg(2).map_or(BENCH_NOISE, |s| s.parse().unwrap());
    let ensemble: usize = arg(3).map_or(10, |s| s.parse().unwrap());
    let base: u64 = arg(4).map_or(2016, |s| s.parse().unwrap());

    let problems = synthetic_benchmark(base, instances, 500, noise).unwrap();
    let mut correct = 0;
    for (i, (pairs, truth)) in problems.iter().enumerate() {
        let mut cfg = CausalConfig::new(Rng::new(base).child(i as u64).child(2).seed());
        cfg.ensemble = ensemble;
        let t = std::time::Instant::now();
        let v = cause_effect(pairs, &cfg).unwrap();
        let ok = v.direction == *truth;
        correct += usize::from(ok);
        println!(
            "{i}\ttruth {truth}\tverdict {}\tt_xy {:.4}\tt_yx {:.4}\t{}\t{:.1?}",
            v.direction,
            v.t_xy,
            v.t_yx,
            if ok { "ok" } else { "WRONG" },
            t.elapsed()
        );
    }
    println!("accuracy {correct}/{instances}");
}
