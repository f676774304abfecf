//! File formats, the command-line front end, thread-parallel drivers and the
//! cross-route verification suite built on [`carfima_core`].

pub use carfima_core as core;

pub mod cli;
pub mod io;
pub mod parallel;
pub mod verify;
