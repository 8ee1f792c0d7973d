//! Tooling around the lambda-delta core: concrete syntax, definition
//! files, random well-typed term generation, the lemma property suite and
//! the command-line interface.

pub mod cli;
pub mod deffile;
pub mod gen;
pub mod suite;
pub mod syntax;
