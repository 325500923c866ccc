//! Symbolic workbench for schemic and simplicial motivic integration.
//!
//! The crate computes arc spaces of affine schemes over fat points by Weil
//! restriction, evaluates sieves and simplicial sieves on finite fat points,
//! rewrites their classes in the Grothendieck ring, and evaluates finite,
//! limit and lax motivic measures. Every identity it claims is checked on
//! concrete finite instances.

pub mod algebra;
pub mod arc;
pub mod battery;
pub mod config;
pub mod error;
pub mod fatpt;
pub mod field;
pub mod groebner;
pub mod kring;
pub mod measure;
pub mod poly;
pub mod scheme;
pub mod sieve;
pub mod topo;

pub use arc::{adjunction_check, weil_restrict, AdjunctionVerdict, ArcScheme};
pub use config::Caps;
pub use error::{Error, Result};
pub use fatpt::{FatPoint, FatPointRef, FunctorTag, PointSystem, SimplicialFatPoint};
pub use field::{Field, Scalar};
pub use groebner::Ideal;
pub use kring::{KClass, SimplicialClass};
pub use measure::{LaxRule, MeasureQuery, MeasureReport, Verdict};
pub use poly::{Poly, Ring, RingRef};
pub use scheme::{AffineScheme, Morphism, SchemeRef, SimplicialScheme};
pub use sieve::{LimitSieve, MemberRule, RelativeSieve, SieveExpr, SieveNode, SimplicialSieve};
pub use topo::{FiniteSimplicialSet, RealizationInvariants};
