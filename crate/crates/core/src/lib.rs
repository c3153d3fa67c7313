pub mod actions;
pub mod cli;
pub mod coefficients;
pub mod error;
pub mod markov;
pub mod oracles;
pub mod partitions;
pub mod rational;
pub mod simulate;

pub use actions::{parse_action, ActionSpec, State};
pub use error::{Error, Result};
pub use partitions::{LatticePoint, Partition};
pub use rational::Rational;
