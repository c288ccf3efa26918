//! Experiment drivers. Each takes a resolved config and returns a report;
//! verdicts are data, not errors.

mod disjointness;
mod example1;
mod example2;
mod joint;
mod recurrence;
mod spectral;
mod weyl;
mod zinfty;

pub use disjointness::run_bernoulli_disjointness;
pub use example1::run_example1;
pub use example2::run_example2;
pub use joint::run_joint_ergodicity_demo;
pub use recurrence::run_recurrence;
pub use spectral::run_spectral_classify;
pub use weyl::run_weyl_vdc;
pub use zinfty::run_zinfty_counterexample;

use folner_core::Angle;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::config::{ExperimentConfig, ExperimentKind};
use crate::error::{config_err, LabError, Result};
use crate::report::ExperimentReport;

pub fn run(config: &ExperimentConfig) -> Result<ExperimentReport> {
    match config.kind() {
        ExperimentKind::Example1 => run_example1(config),
        ExperimentKind::Example2 => run_example2(config),
        ExperimentKind::ZinftyCounterexample => run_zinfty_counterexample(config),
        ExperimentKind::WeylVdc => run_weyl_vdc(config),
        ExperimentKind::BernoulliDisjointness => run_bernoulli_disjointness(config),
        ExperimentKind::Recurrence => run_recurrence(config),
        ExperimentKind::JointErgodicityDemo => run_joint_ergodicity_demo(config),
        ExperimentKind::SpectralClassify => run_spectral_classify(config),
    }
}

fn rng(config: &ExperimentConfig) -> Result<ChaCha8Rng> {
    Ok(ChaCha8Rng::seed_from_u64(config.seed()?))
}

fn angle(config: &ExperimentConfig, key: &str) -> Result<Angle> {
    let raw = config.raw(key)?;
    raw.parse().map_err(|e: folner_core::Error| config_err!("{key}: {e}"))
}

/// Fails before any computation when `size` exceeds the budget.
fn within_budget(config: &ExperimentConfig, what: &'static str, size: u128) -> Result<()> {
    let budget = config.budget()? as u128;
    if size > budget {
        return Err(LabError::Core(folner_core::Error::SizeLimit { what, size, budget }));
    }
    Ok(())
}
