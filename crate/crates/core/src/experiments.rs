//! Seeded Monte Carlo studies: type-I control, Gaussian versus Student-t,
//! and independence testing on sinusoids.
//!
//! Every trial seed is a function of the base seed, the experiment, the
//! cell coordinates and the trial index only, so a cell's numbers do not
//! depend on which other cells are in the grid or on thread scheduling.

use std::fmt;
use std::fmt::Write as _;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{mix_seed, sample_normal, sample_sinusoid, sample_student_t, standardize, Rng};
use crate::outcome::{TestKind, TestOutcome};
use crate::sample::Sample;
use crate::two_sample::{run_test, TestOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ExperimentKind {
    #[serde(rename = "type1")]
    Type1,
    #[serde(rename = "gauss-student")]
    GaussStudent,
    #[serde(rename = "sinusoid")]
    Sinusoid,
}

impl ExperimentKind {
    pub fn name(&self) -> &'static str {
        match self {
            ExperimentKind::Type1 => "type1",
            ExperimentKind::GaussStudent => "gauss-student",
            ExperimentKind::Sinusoid => "sinusoid",
        }
    }

    /// Whether the samples differ, i.e. whether acceptances are errors.
    pub fn alternative_true(&self) -> bool {
        !matches!(self, ExperimentKind::Type1)
    }

    fn id(&self) -> u64 {
        match self {
            ExperimentKind::Type1 => 1,
            ExperimentKind::GaussStudent => 2,
            ExperimentKind::Sinusoid => 3,
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExperimentKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "type1" => Ok(ExperimentKind::Type1),
            "gauss-student" => Ok(ExperimentKind::GaussStudent),
            "sinusoid" => Ok(ExperimentKind::Sinusoid),
            _ => Err(format!(
                "unknown experiment '{s}' (expected type1, gauss-student or sinusoid)"
            )),
        }
    }
}

pub const TYPE1_SIZES: [usize; 7] = [25, 50, 100, 500, 1000, 5000, 10000];
pub const SWEEP_SIZES: [usize; 7] = [25, 50, 100, 500, 1000, 2000, 5000];
pub const FIXED_N: usize = 2000;
pub const FIXED_NU: f64 = 3.0;
pub const FIXED_DELTA: f64 = 1.0;
pub const FIXED_GAMMA: f64 = 0.25;

/// The parameter grid of one study. Cells are the cartesian product of the
/// lists that apply to the experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialGrid {
    pub experiment: ExperimentKind,
    pub n: Vec<usize>,
    #[serde(default)]
    pub nu: Vec<f64>,
    #[serde(default)]
    pub delta: Vec<f64>,
    #[serde(default)]
    pub gamma: Vec<f64>,
    pub trials: usize,
    pub base_seed: u64,
    pub tests: Vec<TestKind>,
    pub alpha: f64,
    #[serde(default)]
    pub options: TestOptions,
    /// Test hook: pair each sinusoid sample with itself instead of a
    /// permuted copy.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub identity_permutation: bool,
}

impl TrialGrid {
    /// Sample-size sweep with the other parameters at their fixed values,
    /// 100 trials, α = 0.05 and every applicable test.
    pub fn defaults(experiment: ExperimentKind, base_seed: u64) -> Self {
        let (n, nu, delta, gamma, tests) = match experiment {
            ExperimentKind::Type1 => (TYPE1_SIZES.to_vec(), vec![], vec![], vec![], TestKind::ALL.to_vec()),
            ExperimentKind::GaussStudent => (
                SWEEP_SIZES.to_vec(),
                vec![FIXED_NU],
                vec![],
                vec![],
                TestKind::ALL.to_vec(),
            ),
            ExperimentKind::Sinusoid => (
                SWEEP_SIZES.to_vec(),
                vec![],
                vec![FIXED_DELTA],
                vec![FIXED_GAMMA],
                TestKind::MULTIVARIATE.to_vec(),
            ),
        };
        Self {
            experiment,
            n,
            nu,
            delta,
            gamma,
            trials: 100,
            base_seed,
            tests,
            alpha: 0.05,
            options: TestOptions::default(),
            identity_permutation: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        if self.tests.is_empty() {
            return Err(Error::Config("no tests selected".into()));
        }
        if self.n.is_empty() {
            return Err(Error::Config("sample-size list is empty".into()));
        }
        if let Some(&n) = self.n.iter().find(|&&n| n < 4) {
            return Err(Error::Config(format!("sample size {n} is below the minimum of 4")));
        }
        if !(0.0..=1.0).contains(&self.alpha) {
            return Err(Error::Domain {
                what: "significance level",
                value: self.alpha,
                expected: "0 <= alpha <= 1",
            });
        }
        match self.experiment {
            ExperimentKind::Type1 => {}
            ExperimentKind::GaussStudent => {
                if self.nu.is_empty() {
                    return Err(Error::Config("degrees-of-freedom list is empty".into()));
                }
                if let Some(&nu) = self.nu.iter().find(|&&v| !(v > 0.0 && v.is_finite())) {
                    return Err(Error::Domain {
                        what: "degrees of freedom",
                        value: nu,
                        expected: "nu > 0",
                    });
                }
            }
            ExperimentKind::Sinusoid => {
                if self.delta.is_empty() || self.gamma.is_empty() {
                    return Err(Error::Config("frequency and noise lists must be nonempty".into()));
                }
                if let Some(&d) = self.delta.iter().find(|v| !v.is_finite()) {
                    return Err(Error::Domain {
                        what: "frequency",
                        value: d,
                        expected: "finite",
                    });
                }
                if let Some(&g) = self.gamma.iter().find(|&&v| !(v >= 0.0 && v.is_finite())) {
                    return Err(Error::Domain {
                        what: "noise level",
                        value: g,
                        expected: "gamma >= 0",
                    });
                }
                if let Some(t) = self.tests.iter().find(|t| t.univariate_only()) {
                    return Err(Error::NotUnivariate { test: t.name(), dim: 2 });
                }
            }
        }
        Ok(())
    }

    /// Grid cells in a fixed order (n outermost).
    pub fn cells(&self) -> Vec<Cell> {
        let opt = |v: &[f64]| -> Vec<Option<f64>> {
            if v.is_empty() {
                vec![None]
            } else {
                v.iter().copied().map(Some).collect()
            }
        };
        let (nu, delta, gamma) = match self.experiment {
            ExperimentKind::Type1 => (vec![None], vec![None], vec![None]),
            ExperimentKind::GaussStudent => (opt(&self.nu), vec![None], vec![None]),
            ExperimentKind::Sinusoid => (vec![None], opt(&self.delta), opt(&self.gamma)),
        };
        let mut cells = Vec::new();
        for &n in &self.n {
            for &nu in &nu {
                for &delta in &delta {
                    for &gamma in &gamma {
                        cells.push(Cell { n, nu, delta, gamma });
                    }
                }
            }
        }
        cells
    }

    /// Seed of trial `trial` in `cell`.
    pub fn trial_seed(&self, cell: &Cell, trial: usize) -> u64 {
        let code = |v: Option<f64>| v.map_or(u64::MAX, f64::to_bits);
        let mut s = mix_seed(self.base_seed, self.experiment.id());
        s = mix_seed(s, cell.n as u64);
        s = mix_seed(s, code(cell.nu));
        s = mix_seed(s, code(cell.delta));
        s = mix_seed(s, code(cell.gamma));
        mix_seed(s, trial as u64)
    }
}

/// Coordinates of one grid cell.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nu: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
}

/// All test results of one trial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub cell: Cell,
    pub trial: usize,
    pub seed: u64,
    /// One entry per selected test, in grid order; `None` when the test
    /// could not be run on this draw.
    pub outcomes: Vec<(TestKind, Option<TestOutcome>)>,
}

/// Draws the two samples of one trial.
pub fn trial_samples(grid: &TrialGrid, cell: &Cell, rng: &mut Rng) -> Result<(Sample, Sample)> {
    let n = cell.n;
    match grid.experiment {
        ExperimentKind::Type1 => Ok((sample_normal(rng, n, 0.0, 1.0)?, sample_normal(rng, n, 0.0, 1.0)?)),
        ExperimentKind::GaussStudent => {
            let nu = cell.nu.unwrap_or(FIXED_NU);
            let a = standardize(&sample_normal(rng, n, 0.0, 1.0)?)?;
            let b = standardize(&sample_student_t(rng, n, nu)?)?;
            Ok((a, b))
        }
        ExperimentKind::Sinusoid => {
            let delta = cell.delta.unwrap_or(FIXED_DELTA);
            let gamma = cell.gamma.unwrap_or(FIXED_GAMMA);
            let pairs = sample_sinusoid(rng, n, delta, gamma)?;
            let mut sigma: Vec<usize> = (0..n).collect();
            if !grid.identity_permutation {
                sigma.shuffle(rng);
            }
            let x = pairs.column(0);
            let y = pairs.column(1);
            let y_perm: Vec<f64> = sigma.iter().map(|&i| y[i]).collect();
            let permuted = Sample::from_columns(&x, &y_perm)?;
            Ok((pairs, permuted))
        }
    }
}

/// Runs one trial: data from child stream 0 of the trial seed, each test
/// seeded from its own stream.
pub fn run_trial(grid: &TrialGrid, cell: &Cell, trial: usize) -> Result<TrialRecord> {
    let seed = grid.trial_seed(cell, trial);
    let root = Rng::new(seed);
    let (a, b) = trial_samples(grid, cell, &mut root.child(0))?;
    let outcomes = grid
        .tests
        .iter()
        .map(|&t| {
            let test_seed = mix_seed(seed, 100 + t.stream_id());
            (t, run_test(t, &a, &b, grid.alpha, test_seed, &grid.options).ok())
        })
        .collect();
    Ok(TrialRecord {
        cell: *cell,
        trial,
        seed,
        outcomes,
    })
}

/// Every trial of every cell, in (cell, trial) order, computed in parallel.
pub fn run_trials(grid: &TrialGrid) -> Result<Vec<TrialRecord>> {
    grid.validate()?;
    let jobs: Vec<(Cell, usize)> = grid
        .cells()
        .into_iter()
        .flat_map(|c| (0..grid.trials).map(move |t| (c, t)))
        .collect();
    jobs.par_iter()
        .map(|(cell, trial)| run_trial(grid, cell, *trial))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorKind {
    TypeI,
    TypeII,
}

impl ErrorKind {
    pub fn name(&self) -> &'static str {
        match self {
            ErrorKind::TypeI => "type1",
            ErrorKind::TypeII => "type2",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub experiment: ExperimentKind,
    pub test: TestKind,
    #[serde(flatten)]
    pub cell: Cell,
    pub trials: usize,
    pub rejections: usize,
    /// Trials on which the test raised an error; excluded from the rate.
    pub failed: usize,
    pub error: ErrorKind,
    /// Rejection fraction for type-I rows, acceptance fraction for type-II;
    /// absent when every trial failed.
    pub rate: Option<f64>,
}

impl TableRow {
    pub fn completed(&self) -> usize {
        self.trials - self.failed
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorTable {
    pub grid: TrialGrid,
    pub rows: Vec<TableRow>,
}

impl ErrorTable {
    /// Tallies the records; rows are ordered by cell, then by test.
    pub fn from_records(grid: &TrialGrid, records: &[TrialRecord]) -> Self {
        let error = if grid.experiment.alternative_true() {
            ErrorKind::TypeII
        } else {
            ErrorKind::TypeI
        };
        let mut rows = Vec::new();
        for cell in grid.cells() {
            let in_cell: Vec<&TrialRecord> = records.iter().filter(|r| r.cell == cell).collect();
            for (ti, &test) in grid.tests.iter().enumerate() {
                let mut rejections = 0;
                let mut failed = 0;
                for r in &in_cell {
                    match &r.outcomes[ti].1 {
                        Some(o) if o.reject => rejections += 1,
                        Some(_) => {}
                        None => failed += 1,
                    }
                }
                let done = in_cell.len() - failed;
                let rate = if done == 0 {
                    None
                } else if error == ErrorKind::TypeI {
                    Some(rejections as f64 / done as f64)
                } else {
                    Some((done - rejections) as f64 / done as f64)
                };
                rows.push(TableRow {
                    experiment: grid.experiment,
                    test,
                    cell,
                    trials: in_cell.len(),
                    rejections,
                    failed,
                    error,
                    rate,
                });
            }
        }
        Self {
            grid: grid.clone(),
            rows,
        }
    }

    pub fn row(&self, test: TestKind, cell: &Cell) -> Option<&TableRow> {
        self.rows.iter().find(|r| r.test == test && r.cell == *cell)
    }

    /// Tab-separated form with a header line; absent parameters print as `-`.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("experiment\ttest\tn\tnu\tdelta\tgamma\ttrials\trejections\tfailed\terror\trate\n");
        let opt = |v: Option<f64>| v.map_or_else(|| "-".to_string(), |x| x.to_string());
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
                r.experiment,
                r.test,
                r.cell.n,
                opt(r.cell.nu),
                opt(r.cell.delta),
                opt(r.cell.gamma),
                r.trials,
                r.rejections,
                r.failed,
                r.error.name(),
                opt(r.rate)
            );
        }
        out
    }
}

/// Runs the grid and tallies it.
pub fn run_grid(grid: &TrialGrid) -> Result<ErrorTable> {
    let records = run_trials(grid)?;
    Ok(ErrorTable::from_records(grid, &records))
}

/// Both samples from `N(0, 1)`; rates are rejection fractions.
pub fn run_type1(grid: &TrialGrid) -> Result<ErrorTable> {
    expect_kind(grid, ExperimentKind::Type1)?;
    run_grid(grid)
}

/// `N(0, 1)` against a Student-t(ν) sample, both standardized with their
/// empirical moments; rates are acceptance fractions.
pub fn run_gauss_student(grid: &TrialGrid) -> Result<ErrorTable> {
    expect_kind(grid, ExperimentKind::GaussStudent)?;
    run_grid(grid)
}

/// Sinusoid pairs `(x, cos(δx) + γε)` against a copy with the second column
/// permuted by one fresh permutation per trial; rates are acceptance
/// fractions.
pub fn run_sinusoid_independence(grid: &TrialGrid) -> Result<ErrorTable> {
    expect_kind(grid, ExperimentKind::Sinusoid)?;
    run_grid(grid)
}

fn expect_kind(grid: &TrialGrid, kind: ExperimentKind) -> Result<()> {
    if grid.experiment != kind {
        return Err(Error::Config(format!(
            "grid is for {}, expected {kind}",
            grid.experiment
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn tiny(kind: ExperimentKind) -> TrialGrid {
        let mut g = TrialGrid::defaults(kind, 11);
        g.n = vec![30, 60];
        g.trials = 4;
        g
    }

    #[test]
    fn defaults_mirror_the_sweeps() {
        let g = TrialGrid::defaults(ExperimentKind::Type1, 0);
        assert_eq!(g.cells().len(), 7);
        assert_eq!(g.tests.len(), 6);
        let s = TrialGrid::defaults(ExperimentKind::Sinusoid, 0);
        assert_eq!(s.tests, TestKind::MULTIVARIATE.to_vec());
        assert_eq!(s.cells()[0].gamma, Some(0.25));
        s.validate().unwrap();
    }

    #[test]
    fn validation_errors() {
        let mut g = tiny(ExperimentKind::GaussStudent);
        g.nu = vec![0.0];
        assert!(g.validate().is_err());
        let mut g = tiny(ExperimentKind::Sinusoid);
        g.tests.push(TestKind::Ks);
        assert!(g.validate().is_err());
        let mut g = tiny(ExperimentKind::Type1);
        g.trials = 0;
        assert!(g.validate().is_err());
        assert!(run_gauss_student(&tiny(ExperimentKind::Type1)).is_err());
    }

    #[test]
    fn tables_are_reproducible_and_consistent() {
        let g = tiny(ExperimentKind::Type1);
        let a = run_type1(&g).unwrap();
        let b = run_type1(&g).unwrap();
        assert_eq!(a.to_tsv(), b.to_tsv());
        assert_eq!(a.rows.len(), 2 * 6);
        for r in &a.rows {
            assert!(r.rejections + r.failed <= r.trials);
            assert!((0.0..=1.0).contains(&r.rate.unwrap()));
        }
    }

    #[test]
    fn zero_alpha_never_rejects() {
        let mut g = tiny(ExperimentKind::Type1);
        g.alpha = 0.0;
        let t = run_type1(&g).unwrap();
        assert!(t.rows.iter().all(|r| r.rejections == 0));
    }

    #[test]
    fn cells_do_not_depend_on_the_rest_of_the_grid() {
        let g = tiny(ExperimentKind::GaussStudent);
        let mut single = g.clone();
        single.n = vec![60];
        let full = run_gauss_student(&g).unwrap();
        let part = run_gauss_student(&single).unwrap();
        let cell = single.cells()[0];
        for t in &g.tests {
            assert_eq!(full.row(*t, &cell), part.row(*t, &cell));
        }
    }

    #[test]
    fn trial_seeds_are_distinct() {
        let mut g = TrialGrid::defaults(ExperimentKind::Sinusoid, 5);
        g.gamma = vec![0.25, 1.0, 2.0, 4.0];
        let mut seen = HashSet::new();
        for c in g.cells() {
            for t in 0..g.trials {
                assert!(seen.insert(g.trial_seed(&c, t)));
            }
        }
    }

    #[test]
    fn identity_permutation_gives_identical_samples() {
        let mut g = tiny(ExperimentKind::Sinusoid);
        g.identity_permutation = true;
        let cell = g.cells()[0];
        let (a, b) = trial_samples(&g, &cell, &mut Rng::new(1)).unwrap();
        assert_eq!(a, b);
        g.identity_permutation = false;
        let (a, b) = trial_samples(&g, &cell, &mut Rng::new(1)).unwrap();
        assert_eq!(a.column(0), b.column(0));
        assert_ne!(a.column(1), b.column(1));
        let mut sa = a.column(1);
        let mut sb = b.column(1);
        sa.sort_by(f64::total_cmp);
        sb.sort_by(f64::total_cmp);
        assert_eq!(sa, sb);
    }

    #[test]
    fn tsv_layout() {
        let g = tiny(ExperimentKind::Sinusoid);
        let t = run_sinusoid_independence(&g).unwrap();
        let tsv = t.to_tsv();
        let lines: Vec<&str> = tsv.lines().collect();
        assert_eq!(lines.len(), 1 + t.rows.len());
        assert!(lines[1].starts_with("sinusoid\tc2st-nn\t30\t-\t1\t0.25\t4\t"));
        assert_eq!(lines[1].split('\t').count(), 11);
    }
}
