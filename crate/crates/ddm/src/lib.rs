//! File formats and command-line front end for [`ddm_core`].
//!
//! * [`io`]: schedule documents (JSON), batch tables (CSV) and result rendering.
//! * [`cli`]: the `ddm` command and its subcommands.

pub mod cli;
pub mod io;
