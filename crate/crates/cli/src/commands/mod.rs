pub mod analyze;
pub mod entropy;
pub mod simulate;
pub mod verify;

pub use analyze::cmd_analyze;
pub use entropy::{cmd_entropy, EntropyOutcome};
pub use simulate::cmd_simulate;
pub use verify::{cmd_verify, run_repro_case, SuiteResult, VerifyReport};
