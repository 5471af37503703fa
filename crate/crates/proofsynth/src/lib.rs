//! File formats, the guide process protocol, reports and the command-line
//! front end for `proofsynth-core`.

pub mod bench;
pub mod cli;
pub mod dataset;
pub mod eval;
pub mod guide;
