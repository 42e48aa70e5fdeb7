//! Exact arithmetic for subgroup growth of Fuchsian groups.
//!
//! The crate is `no_std` with `alloc`. Everything here is a pure function of
//! its inputs: integer partitions and symmetric-group characters, homomorphism
//! counts from Fuchsian groups into `S_n` and the transitive sieve giving
//! subgroup counts, the covolume formula for maximal arithmetic lattices in
//! `PSL_2(R)`, and a harness that checks the character inequalities these
//! counts are bounded by.
//!
//! Real numbers never appear as floats in a decision. Transcendental
//! quantities are carried as [`Interval`]s with rational endpoints rounded
//! outward, and covolumes are rational multiples of pi wherever possible.
//!
//! The `parallel` feature (implies `std`) evaluates character columns, class
//! sums and census branches on the rayon pool and provides
//! [`SharedCache`](character::SharedCache).

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod borel;
pub mod bounds;
pub mod character;
mod error;
pub mod fuchsian;
pub mod hom;
pub mod interval;
pub mod partition;

pub use error::{Error, Result};
pub use interval::{Interval, RealContext};
pub use partition::{CycleType, Partition};
