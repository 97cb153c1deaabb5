//! Lattice-theoretic analysis of GCD and LCM matrix singularity.
//!
//! The library works with GCD-closed sets of positive integers and the meet
//! semilattices they form under divisibility. Around that core it provides:
//!
//! - Möbius functions of finite posets and the Ψ values whose vanishing makes
//!   a power LCM matrix singular ([`matrices`]),
//! - exact rational meet/join matrices and fraction-free determinants,
//! - enumeration of all meet semilattices of a given size up to isomorphism,
//!   with the cover/Möbius filtering pipeline that isolates the eight-element
//!   structures supporting singular LCM matrices ([`enumeration`]),
//! - squarefree integer realizations of abstract semilattices and prime-power
//!   inflations ([`intsets`]),
//! - certified interval evaluation of Ψ over real exponents and bisection to
//!   a singular exponent α₀ ([`alpha`], [`certified`]),
//! - text/DOT/JSON formats shared with the command line tool ([`formats`]).
//!
//! All set arithmetic is exact (big integers and rationals); real-exponent
//! evaluation uses directed rounding so every reported sign is certified.

pub mod alpha;
mod bits;
pub mod certified;
pub mod corpus;
pub mod enumeration;
pub mod formats;
pub mod intsets;
pub mod matrices;
pub mod poset;

pub use poset::{MobiusTable, Poset};
