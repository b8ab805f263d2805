//! Pilot runs behind the type-II thresholds used in the acceptance suite.
//!
//!     cargo run --release -p c2st --example pilot -- [base_seed]
//!
//! Prints the error tables of the Gaussian-versus-Student sweep and the
//! sinusoid noise sweep at the acceptance settings.

use c2st::experiments::{run_gauss_student, run_sinusoid_independence, ExperimentKind, TrialGrid};
use c2st::TestKind;

fn main() {
    let seed: u64 = std::env::args()
        .nth(1)
        .map(|s| s.parse().expect("base seed must be an integer"))
        .unwrap_or(2016);

    let mut gs = TrialGrid::defaults(ExperimentKind::GaussStudent, seed);
    gs.n = vec![100, 2000];
    let t = std::time::Instant::now();
    print!("{}", run_gauss_student(&gs).unwrap().to_tsv());
    eprintln!("gauss-student: {:.1?}", t.elapsed());

    let mut sin = TrialGrid::defaults(ExperimentKind::Sinusoid, seed);
    sin.n = vec![2000];
    sin.gamma = vec![0.25, 1.0, 2.0, 4.0];
    sin.tests = TestKind::MULTIVARIATE.to_vec();
    let t = std::time::Instant::now();
    print!("{}", run_sinusoid_independence(&sin).unwrap().to_tsv());
    eprintln!("sinusoid: {:.1?}", t.elapsed());
}
