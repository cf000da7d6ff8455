//! Exact joint cumulants and the combinatorics behind them: set partitions,
//! cyclically arranged partitions, nested objects, expectation oracles and a
//! sign-reversing involution checker.

pub mod counts;
pub mod cumulant;
pub mod cyclic;
pub mod die;
pub mod dist;
pub mod error;
pub mod exec;
pub mod oracle;
pub mod partition;
pub mod poly;
pub mod value;

pub use cumulant::{kappa, kappa_exec, kappa_of_partition, kappa_via_cyclic, VerificationReport};
pub use cyclic::{CyclicPartition, GObject, NestedObject};
pub use die::{build_instance, check_die, DieInstance, DieReport, TheoremParams};
pub use dist::{ConditionalOracle, FiniteDistribution, VarSelection};
pub use error::{Error, Result};
pub use exec::Exec;
pub use oracle::ExpectationOracle;
pub use partition::{Block, Element, GridShape, Partition};
pub use poly::MomentPolynomial;
pub use value::{Rational, Sign, Value};
