//! Manufactured solutions, error norms and refinement studies.

pub mod checks;
pub mod data;
pub mod fields;
pub mod runs;
pub mod sample;
pub mod table;

pub use data::{
    error_norms, manufactured_data, pointwise_error, solution_errors, ErrorNorm, FieldErrors, SolutionErrors,
};
pub use fields::{cylindrical_wave, smooth_step, smooth_step_integral, ExactFields, FrequencyCase, TimeCase};
pub use runs::{run_freq_convergence, run_time_convergence, FreqStudy, LevelFailure, TimeStudy};
pub use sample::{pentagon, run_sample_simulation, sample_problem, Pulse, SampleConfig, SampleRun, Snapshot};
pub use table::{ecr, ConvergenceTable, TableRow};
