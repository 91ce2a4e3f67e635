//! Library side of the `koszul` command-line tool: input schemas, commands,
//! reports and the verification suite.

pub mod commands;
pub mod report;
pub mod schema;
pub mod suite;

pub use commands::{execute, run, Command, WindowSpec};
pub use schema::{load, parse_input, InputFile};
pub use suite::{run_suite, CriterionResult};
