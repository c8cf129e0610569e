//! Exact computations with Poisson vector bundles in polynomial trivializations.
//!
//! A Poisson vector bundle over a Poisson manifold `(P, π)` is a
//! representation of the cotangent Lie algebroid `T*P`. In a fixed
//! trivialization it is described by a `gl(m)`-valued vector field `Ξ`
//! satisfying a Maurer–Cartan equation. This crate works with polynomial
//! Poisson structures and polynomial `Ξ` over ℚ or ℚ(i), and provides
//!
//! * exact scalar, polynomial and multivector arithmetic ([`scalar`], [`poly`],
//!   [`polymatrix`], [`multivector`], [`linalg`]);
//! * Lie algebras, modules and Chevalley–Eilenberg cohomology ([`lie`]);
//! * Poisson structures, the cotangent bracket and the Lichnerowicz differential ([`poisson`]);
//! * bundle data and its invariants: flatness, characteristic classes, modular
//!   class, isotropy representations, homogeneity witnesses ([`pvb`]);
//! * gauge transformations, the dilation homotopy and formal normalization ([`normalize`]).
//!
//! # Sign conventions
//!
//! * `{f, g} = π(df, dg)` and the anchor is `π♯(df) = X_f = {f, ·}`.
//! * The cotangent bracket is `[α, β] = L_{π♯α}β − L_{π♯β}α − dπ(α, β)`, so `[df, dg] = d{f, g}`.
//! * `d_π` is minus the algebroid differential with anchor `π♯`; on functions
//!   `d_π f = X_f`, on scalar multivectors `d_π T = −[π, T]`.
//! * A bundle acts by `[α, s] = L_{π♯α}s + Ξ(α)s`, and gauge transformations act by
//!   `Φ·Ξ = ΦΞΦ⁻¹ + (d_πΦ)Φ⁻¹`.

pub mod error;
pub mod linalg;
pub mod lie;
pub mod literal;
pub mod multivector;
pub mod normalize;
pub mod poisson;
pub mod poly;
pub mod polymatrix;
pub mod pvb;
pub mod scalar;

pub use error::{CoreError, Error};
pub use linalg::Matrix;
pub use lie::{CECochain, LieAlgebra, LieModule};
pub use multivector::{MatrixMultivector, MultiVector, Multivector, Truncate};
pub use poisson::{OneForm, PoissonStructure};
pub use poly::{Monomial, Poly};
pub use polymatrix::PolyMatrix;
pub use pvb::{ConnectionData, GlCocycle, Section};
pub use normalize::GaugeTransform;
pub use scalar::Scalar;
