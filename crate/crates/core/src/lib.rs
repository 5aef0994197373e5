//! Exact-arithmetic verification engine for the line configuration on the
//! Maschke octic surface.
//!
//! The engine reproduces, without any computer-algebra-system dependency,
//! the computational facts behind the configuration: the octic invariant of
//! the complex reflection group G₃₁ defines a smooth surface in P³, the
//! surface carries 352 lines split into group orbits of sizes 160 and 192,
//! and the 192-orbit contains a family of 96 pairwise disjoint lines, which
//! meets Miyaoka's bound 2d(d−2) for d = 8.
//!
//! Everything is computed over `K = Q(i, √3, √5)` with exact rational
//! coordinates ([`exactfield`]); smoothness is certified by an exhaustive
//! scan of a finite-field reduction ([`certify::smoothness`]).

pub mod certify;
pub mod exactfield;
pub mod geom;
pub mod groupcore;
pub mod polyalg;

/// Version stamp embedded in certificate reports.
pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");
