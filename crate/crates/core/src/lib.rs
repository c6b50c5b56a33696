// Reference values are written with every digit of the computation that froze
// them, which trips clippy's excessive_precision heuristic.
#![allow(clippy::excessive_precision)]

pub mod bounds;
pub mod calculus;
pub mod cli;
pub mod constants;
pub mod parental;
pub mod polyalg;
pub mod records;
pub mod tube;
pub mod verification;
