//! Cohomological obstructions for locally variational field equations on
//! closed oriented simplicial 3-manifolds.
//!
//! The crate covers the whole pipeline: simplicial complexes and their
//! coboundaries, integer and real cohomology via Smith normal form,
//! Alexander–Whitney cup products and the Poincaré pairing, discrete U(1)
//! bundles with the flatness equation `F = dA + 2πc = 0` and the Chern–Simons
//! functional, the obstruction class `[γ ∪ F]` with the sharpness verdict, and
//! the Čech–de Rham connecting map on the vertex-star cover.

pub mod bundle;
pub mod cech;
pub mod cochain;
pub mod complex;
pub mod cup;
pub mod error;
pub mod homology;
pub mod io;
pub mod lsq;
pub mod manifolds;
pub mod matrix;
pub mod obstruction;
pub mod snf;
pub mod tolerance;

pub use cochain::{Chain, Cochain, Coefficient, IntCochain, RealCochain, Ring};
pub use complex::{Simplex, SimplicialComplex, Star};
pub use error::{Error, Result};
pub use tolerance::Tolerance;
