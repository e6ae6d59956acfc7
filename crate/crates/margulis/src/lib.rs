//! File formats, seeded generators and the command-line front end for
//! [`margulis_core`].

pub mod cli;
pub mod format;
pub mod par;
pub mod random;
