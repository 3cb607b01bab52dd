//! File formats, command-line front end and parallel driver for
//! [`itemcp_core`].

pub mod bench;
pub mod catfile;
pub mod cli;
pub mod fimi;
pub mod queryfile;
pub mod random;
pub mod run;
pub mod synth;

pub use itemcp_core as core;
