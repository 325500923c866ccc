//! The scripting front end: parse a workbench script, evaluate it statement
//! by statement and emit a `key=value` report.

pub mod ast;
pub mod eval;
pub mod parser;
pub mod report;

pub use ast::Script;
pub use eval::{run, run_text, Config};
pub use parser::{parse, ParseError};
pub use report::{Record, Report, Status};
