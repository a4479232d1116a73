//! Stable Kneser graphs `SG(n,2)`, their neighborhood complexes, and
//! machine-checked collapses onto dihedrally invariant polytopal 2-spheres.
//!
//! Geometry is generic over [`num_traits::Float`]; homology is generic over
//! the integer type, with [`num_bigint::BigInt`] used for exact results.

pub mod equivariant;
pub mod error;
pub mod export;
pub mod kneser;
pub mod morse;
pub mod pipeline;
pub mod planar;
pub mod realize;
pub mod ring;
pub mod simplicial;

pub use error::{Error, Result};
pub use kneser::{build_graph, SchrijverGraph, StableSet};
pub use simplicial::{Complex, VertexLabel};

/// Double-precision realization, used by the pipeline and OFF export.
pub type Realization = realize::PolytopeRealization<f64>;
/// Single-precision realization; only meaningful at loose tolerances.
pub type Realization32 = realize::PolytopeRealization<f32>;
/// Integral homology with arbitrary-precision torsion coefficients.
pub type ExactHomology = simplicial::HomologyProfile<num_bigint::BigInt>;
/// Integral homology over `i64`, for small complexes.
pub type Homology64 = simplicial::HomologyProfile<i64>;
/// The neighborhood complex and its subdivisions.
pub type LabeledComplex = Complex<VertexLabel>;
