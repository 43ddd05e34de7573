//! Command-line verification of the catalog of totally umbilical immersions.

pub mod config;
pub mod json;
pub mod record;
pub mod verify;
