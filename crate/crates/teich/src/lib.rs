//! Finite-type hyperbolic surfaces from Fenchel-Nielsen data: holonomy
//! representations, simple length spectra for the one-holed torus and the
//! four-holed sphere, classical length-identity families, and desk-scale
//! reconstruction of low-complexity surfaces from their unmarked spectra.
//!
//! The geometry kernel is generic over the scalar type through
//! [`real::Real`]; the aliases below pin everything to `f64`, which is what
//! the CLI and the file formats use.

pub mod curves;
pub mod graph;
pub mod moebius;
pub mod pants;
pub mod real;
pub mod surface;

pub use curves::{Slope, SurfaceKind};
pub use graph::{Gluing, PantsGraph, Slot};
pub use real::Real;

/// f64 concrete aliases.
pub type Moebius64 = moebius::MoebiusMatrix<f64>;
pub type Pants64 = pants::PantsGeometry<f64>;
pub type FNPoint64 = surface::FNPoint<f64>;
pub type Surface64 = surface::MarkedSurface<f64>;
