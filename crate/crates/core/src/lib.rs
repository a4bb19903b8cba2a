pub mod bench;
pub mod constraints;
pub mod context;
pub mod driver;
pub mod eval;
pub mod oracle;
pub mod parser;
pub mod prelude;
pub mod pretty;
pub mod program;
pub mod syntax;
pub mod synth;
pub mod typecheck;
pub mod types;
pub mod value;
