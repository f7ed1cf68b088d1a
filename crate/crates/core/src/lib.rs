//! Exactness theory for finite strict 2-categories.
//!
//! The crate validates 2-ideals, computes 2-kernels and 2-cokernels by
//! exhaustive search over universal properties, checks Grandis and Puppe
//! 2-exactness (strict and weak), and builds both directions of the
//! correspondence between exact 2-ideals and proper factorization systems.
//! Every check returns a [`Certificate`].

pub mod cert;
pub mod closure;
pub mod core2;
pub mod error;
pub mod exact;
pub mod factor;
pub mod gen;
pub mod onecat;
pub mod ideal;
pub mod io;
pub mod idealeq;
pub mod limits;
pub mod par;
pub mod pseudo;
pub mod sweep;

pub use cert::{Caps, Certificate, Status};
pub use core2::{Cell, Mor, Ob, TwoCategory};
pub use error::{Error, Result};
