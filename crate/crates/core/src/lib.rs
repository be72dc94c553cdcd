//! Free Kan fibrations on 01-substitution sets, as an executable term
//! algebra, with randomised checkers for the laws they satisfy.

pub mod bridge;
pub mod enumerate;
pub mod error;
pub mod free;
pub mod generators;
pub mod json;
pub mod kan;
pub mod laws;
pub mod mutation;
pub mod nominal;
pub mod path;
pub mod report;
pub mod sample;
pub mod value;
pub mod zsub;

pub use error::{Error, Result};
pub use free::{make_free_fibration, FreeFibration};
pub use kan::{make_open_box, BoxKind, FibrationStructure, FillingOperator, OpenBox};
pub use laws::{run_suite, Suite};
pub use nominal::{fresh_name, Abstraction, Name, NameSet, Nominal, Perm};
pub use report::LawReport;
pub use sample::GenConfig;
pub use value::{CubePoint, CubeVal, KTerm, Node, Value};
pub use zsub::{Bit, ZMorphism, ZObject};
