//! Checks shared by the focused test targets and the acceptance target.
#![allow(dead_code)]

pub mod battery;
pub mod properties;
