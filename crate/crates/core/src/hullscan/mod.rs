//! Hull membership estimators.

pub mod classify;
pub mod disk_opt;
pub mod gram;
pub mod kernel;
pub mod lp;
pub mod theorem3;
