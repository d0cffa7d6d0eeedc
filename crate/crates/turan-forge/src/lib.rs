//! File formats, verification reports and the `turan-forge` command line built on
//! [`turan_forge_core`].

pub mod cli;
pub mod formats;
pub mod report;

pub use cli::run;
pub use report::{furedi_bound, kst_leading_bound, verify, ReportOptions, VerificationReport};
