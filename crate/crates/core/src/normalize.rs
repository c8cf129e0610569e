//! Gauge transformations, the dilation homotopy and formal normalization.

use std::sync::Arc;

use itertools::Itertools;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::lie::{solve_coboundary, CECochain, LieError, LieModule};
use crate::linalg::Matrix;
use crate::multivector::{apply_field, Multivector};
use crate::poisson::{d_pi, find_primitive, PoissonError, PoissonStructure};
use crate::poly::{Monomial, Poly};
use crate::polymatrix::{min_cap, PolyMatrix};
use crate::pvb::{is_unitary, mc_residual, ConnectionData, PvbError};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NormalizeError {
    #[error("gauge transform has a non-invertible constant term")]
    NonInvertibleConstantTerm,
    #[error("gauge inverse needs a degree cap")]
    CapRequired,
    #[error("operation requires a linear Poisson structure")]
    NonLinearStructure,
    #[error("underlying Lie algebra is not semisimple (Killing determinant {determinant})")]
    NotSemisimple { determinant: Box<Scalar> },
    #[error("degree-{r} part is not a cocycle (witness pair {witness:?})")]
    NotACocycle { r: u32, witness: Vec<usize> },
    #[error("degree-{r} part is a nontrivial cohomology class")]
    ObstructionFound { r: u32, cocycle: CECochain },
    #[error("degree-{r} part cannot be removed by a unitary gauge")]
    UnitaryObstruction { r: u32 },
    #[error("internal consistency failure: {0}")]
    Internal(String),
    #[error(transparent)]
    Pvb(#[from] PvbError),
    #[error(transparent)]
    Poisson(#[from] PoissonError),
    #[error(transparent)]
    Lie(#[from] LieError),
}

/// Invertible polynomial matrix `Φ` with its inverse modulo the cap.
#[derive(Debug, Clone, PartialEq)]
pub struct GaugeTransform {
    phi: PolyMatrix,
    inverse: PolyMatrix,
}

impl GaugeTransform {
    /// Uncapped `Φ` must have a polynomial inverse (unipotent non-constant part).
    pub fn new(phi: PolyMatrix) -> Result<Self, NormalizeError> {
        if phi.constant_part().inverse().is_none() {
            return Err(NormalizeError::NonInvertibleConstantTerm);
        }
        let inverse = phi.inverse().ok_or(NormalizeError::CapRequired)?;
        Ok(GaugeTransform { phi, inverse })
    }

    pub fn identity(rank: usize, nvars: usize) -> Self {
        let id = PolyMatrix::identity(rank, nvars);
        GaugeTransform { phi: id.clone(), inverse: id }
    }

    pub fn matrix(&self) -> &PolyMatrix {
        &self.phi
    }

    pub fn inverse(&self) -> &PolyMatrix {
        &self.inverse
    }

    pub fn cap(&self) -> Option<u32> {
        self.phi.cap()
    }

    /// `self ∘ first`, i.e. the matrix product `Φ_self Φ_first`.
    pub fn after(&self, first: &GaugeTransform) -> GaugeTransform {
        GaugeTransform { phi: self.phi.mul(&first.phi), inverse: first.inverse.mul(&self.inverse) }
    }
}

/// `(Φ·Ξ)^i = ΦΞ^iΦ⁻¹ − (L_{X_i}Φ)Φ⁻¹`, truncated at the combined cap.
pub fn gauge_transform(xi: &ConnectionData, phi: &GaugeTransform) -> Result<ConnectionData, NormalizeError> {
    let n = xi.nvars();
    if phi.phi.size() != xi.rank() || phi.phi.nvars() != n {
        return Err(PvbError::ShapeMismatch { expected: n, rank: xi.rank(), got: phi.phi.size() }.into());
    }
    let cap = min_cap(xi.cap(), phi.cap());
    let p = phi.phi.clone().with_cap(cap);
    let inv = phi.inverse.clone().with_cap(cap);
    let comps = xi
        .components()
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let c = c.clone().with_cap(cap);
            let conj = p.mul(&c).mul(&inv);
            let drift = apply_field(xi.poisson().anchor(i), &p).mul(&inv);
            conj.sub(&drift)
        })
        .collect();
    Ok(ConnectionData::new(xi.poisson().clone(), xi.rank(), comps, cap)?)
}

/// `Ξ^(0), …, Ξ^(d)` where `d` is the top degree.
pub fn homogeneous_parts(xi: &ConnectionData) -> Vec<ConnectionData> {
    let top = xi.degree().unwrap_or(0);
    (0..=top)
        .map(|r| {
            let comps = xi.components().iter().map(|c| c.homogeneous_part(r)).collect();
            ConnectionData::new(xi.poisson().clone(), xi.rank(), comps, xi.cap()).expect("same shape")
        })
        .collect()
}

/// Parameter of the dilation homotopy.
#[derive(Debug, Clone, PartialEq)]
pub enum Dilation {
    Value(Scalar),
    /// `t` becomes an extra last variable, Casimir for the extended structure.
    Symbolic,
}

/// `Ξ_t = Σ_r t^r Ξ^(r)` over a linear Poisson structure.
///
/// The symbolic form lives on `n + 1` variables; with input cap `D` its cap is `2D`.
pub fn dilation_homotopy(xi: &ConnectionData, t: &Dilation) -> Result<ConnectionData, NormalizeError> {
    if !xi.poisson().is_linear() {
        return Err(NormalizeError::NonLinearStructure);
    }
    xi.require_flat()?;
    match t {
        Dilation::Value(t) => {
            let comps = xi.components().iter().map(|c| c.map(|p| p.scale_by_degree(|d| t.pow(d)))).collect();
            Ok(ConnectionData::new(xi.poisson().clone(), xi.rank(), comps, xi.cap())?)
        }
        Dilation::Symbolic => {
            let n = xi.nvars();
            let pi = xi.poisson().bivector().embed(n + 1, 0);
            let poisson = Arc::new(PoissonStructure::new(pi)?);
            let tvar = |d: u32| {
                let mut exps = vec![0; n + 1];
                exps[n] = d;
                Monomial::new(exps)
            };
            let lift = |p: &Poly| {
                let mut out = Poly::zero(n + 1);
                for (mono, c) in p.terms() {
                    let m = Monomial::new(mono.exps().iter().copied().chain([0]).collect()).mul(&tvar(mono.degree()));
                    out.add_term(m, c);
                }
                out
            };
            let mut comps: Vec<PolyMatrix> = xi
                .components()
                .iter()
                .map(|c| PolyMatrix::from_entries(c.size(), n + 1, c.entries().iter().map(lift).collect()))
                .collect();
            comps.push(PolyMatrix::zero(xi.rank(), n + 1));
            Ok(ConnectionData::new(poisson, xi.rank(), comps, xi.cap().map(|d| 2 * d))?)
        }
    }
}

/// Result of [`formal_normalize`].
#[derive(Debug, Clone, PartialEq)]
pub struct Normalization {
    pub phi: GaugeTransform,
    pub xi0: Vec<Matrix>,
    pub module: LieModule,
    /// Degrees whose part was nonzero and had to be removed.
    pub degrees_solved: Vec<u32>,
    pub unitary: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct NormalizeOptions {
    /// Skip the semisimplicity gate.
    pub force: bool,
}

/// Coordinates of a homogeneous degree-`r` matrix in the basis `x^μ E_ab`.
struct HomogeneousBasis {
    monos: Vec<Monomial>,
    rank: usize,
}

impl HomogeneousBasis {
    fn dim(&self) -> usize {
        self.monos.len() * self.rank * self.rank
    }

    fn element(&self, k: usize, nvars: usize, cap: Option<u32>) -> PolyMatrix {
        let m2 = self.rank * self.rank;
        let (mono, ab) = (k / m2, k % m2);
        let mut out = PolyMatrix::zero(self.rank, nvars).with_cap(cap);
        out.set(ab / self.rank, ab % self.rank, Poly::monomial(nvars, self.monos[mono].clone(), Scalar::one()));
        out
    }

    fn coords(&self, m: &PolyMatrix) -> Vec<Scalar> {
        let m2 = self.rank * self.rank;
        let mut out = vec![Scalar::zero(); self.dim()];
        for (mi, mono) in self.monos.iter().enumerate() {
            for a in 0..self.rank {
                for b in 0..self.rank {
                    out[mi * m2 + a * self.rank + b] = m.get(a, b).coeff(mono);
                }
            }
        }
        out
    }

    fn assemble(&self, coords: &[Scalar], nvars: usize, cap: Option<u32>) -> PolyMatrix {
        let mut out = PolyMatrix::zero(self.rank, nvars).with_cap(cap);
        for (k, c) in coords.iter().enumerate() {
            if !c.is_zero() {
                out = out.add(&self.element(k, nvars, cap).scale(c));
            }
        }
        out
    }
}

/// Real basis of skew-Hermitian (or, for real data, skew-symmetric) matrices.
fn skew_basis(m: usize, complex: bool) -> Vec<Matrix> {
    let mut out = Vec::new();
    for a in 0..m {
        for b in a + 1..m {
            out.push(Matrix::unit(m, a, b).sub(&Matrix::unit(m, b, a)));
            if complex {
                out.push(Matrix::unit(m, a, b).add(&Matrix::unit(m, b, a)).scale(&Scalar::i()));
            }
        }
        if complex {
            out.push(Matrix::unit(m, a, a).scale(&Scalar::i()));
        }
    }
    out
}

/// Gauges away the degree `1…D` parts of `Ξ` over a linear Poisson structure.
///
/// Step `r` solves `dA = Ξ_r` in the CE complex of the algebra with values in
/// degree-`r` matrices, `e_i·A = L_{X_i}A + [Ξ_0^i, A]`, and applies
/// `Φ_r = I + A` (or `exp A` for unitary data, keeping `A` skew).
pub fn formal_normalize(xi: &ConnectionData, cap: u32, options: NormalizeOptions) -> Result<Normalization, NormalizeError> {
    let pi = xi.poisson().clone();
    if !pi.is_linear() {
        return Err(NormalizeError::NonLinearStructure);
    }
    let algebra = pi.lie_algebra()?;
    if !options.force {
        let killing = algebra.killing_form();
        if !killing.is_semisimple {
            return Err(NormalizeError::NotSemisimple { determinant: Box::new(killing.determinant) });
        }
    }
    let n = xi.nvars();
    let m = xi.rank();
    let capped = xi.clone().with_cap(Some(cap));
    capped.require_flat()?;
    let xi0 = capped.constant_part();
    let module = LieModule::new(algebra.clone(), xi0.clone())
        .map_err(|_| NormalizeError::Internal("constant part is not a representation".into()))?;
    let unitary = is_unitary(&capped);
    let real = capped.components().iter().all(|c| c.entries().iter().all(Poly::is_real));
    let cap_opt = Some(cap);

    let mut current = capped.clone();
    let mut phi = GaugeTransform::identity(m, n);
    let mut degrees_solved = Vec::new();
    for r in 1..=cap {
        let parts: Vec<PolyMatrix> = current.components().iter().map(|c| c.homogeneous_part(r)).collect();
        if parts.iter().all(PolyMatrix::is_zero) {
            continue;
        }
        let basis = HomogeneousBasis { monos: Monomial::all_of_degree(n, r), rank: m };
        let dim = basis.dim();
        let action: Vec<Matrix> = (0..n)
            .map(|i| {
                let c0 = PolyMatrix::from_constant(&xi0[i], n);
                let mut mat = Matrix::zeros(dim, dim);
                for k in 0..dim {
                    let e = basis.element(k, n, None);
                    let img = apply_field(pi.anchor(i), &e).add(&c0.commutator(&e));
                    for (row, v) in basis.coords(&img).into_iter().enumerate() {
                        if !v.is_zero() {
                            mat.set(row, k, v);
                        }
                    }
                }
                mat
            })
            .collect();
        let module_r = Arc::new(LieModule::new_unchecked(algebra.clone(), dim, action));
        let target = CECochain::from_values(module_r.clone(), 1, parts.iter().map(|p| basis.coords(p)).collect());
        let a = match solve_coboundary(&target) {
            Ok(a) => basis.assemble(&a.flatten(), n, cap_opt),
            Err(LieError::NotACocycle { witness, .. }) => return Err(NormalizeError::NotACocycle { r, witness }),
            Err(LieError::ObstructionFound { representative }) => {
                return Err(NormalizeError::ObstructionFound { r, cocycle: representative })
            }
            Err(e) => return Err(e.into()),
        };
        let step = if unitary {
            let skew = skew_basis(m, !real);
            let skew_elems: Vec<PolyMatrix> = basis
                .monos
                .iter()
                .cartesian_product(&skew)
                .map(|(mono, b)| PolyMatrix::poly_times_constant(&Poly::monomial(n, mono.clone(), Scalar::one()), b))
                .collect();
            // real unknowns: split each equation into real and imaginary rows
            let d0 = Matrix::stack(module_r.action());
            let rhs = target.flatten();
            let cols: Vec<Vec<Scalar>> = skew_elems.iter().map(|e| d0.mul_vec(&basis.coords(e))).collect();
            let rows = rhs.len();
            let mut sys = Matrix::zeros(2 * rows, cols.len());
            let mut b = Vec::with_capacity(2 * rows);
            for row in 0..rows {
                for (c, col) in cols.iter().enumerate() {
                    sys.set(2 * row, c, Scalar::from_rational(col[row].re().clone()));
                    sys.set(2 * row + 1, c, Scalar::from_rational(col[row].im().clone()));
                }
                b.push(Scalar::from_rational(rhs[row].re().clone()));
                b.push(Scalar::from_rational(rhs[row].im().clone()));
            }
            let sol = sys.solve(&b).ok_or(NormalizeError::UnitaryObstruction { r })?;
            let mut skew_a = PolyMatrix::zero(m, n).with_cap(cap_opt);
            for (c, e) in sol.iter().zip(&skew_elems) {
                if !c.is_zero() {
                    skew_a = skew_a.add(&e.scale(c));
                }
            }
            GaugeTransform::new(skew_a.exp_truncated(cap))?
        } else {
            GaugeTransform::new(PolyMatrix::identity(m, n).with_cap(cap_opt).add(&a))?
        };
        let next = gauge_transform(&current, &step)?;
        for d in 0..r {
            let before: Vec<PolyMatrix> = current.components().iter().map(|c| c.homogeneous_part(d)).collect();
            let after: Vec<PolyMatrix> = next.components().iter().map(|c| c.homogeneous_part(d)).collect();
            if before != after {
                return Err(NormalizeError::Internal(format!("step {r} disturbed degree {d}")));
            }
        }
        if next.components().iter().any(|c| !c.homogeneous_part(r).is_zero()) {
            return Err(NormalizeError::Internal(format!("step {r} left a degree-{r} remainder")));
        }
        current = next;
        phi = step.after(&phi);
        degrees_solved.push(r);
    }
    Ok(Normalization { phi, xi0, module, degrees_solved, unitary })
}

/// Matrix form `c(e_i)` of a degree-`r` obstruction cocycle, one matrix per coordinate.
pub fn obstruction_components(cocycle: &CECochain, r: u32, rank: usize, nvars: usize) -> Vec<PolyMatrix> {
    let basis = HomogeneousBasis { monos: Monomial::all_of_degree(nvars, r), rank };
    cocycle.values().iter().map(|v| basis.assemble(v, nvars, None)).collect()
}

/// Sorted traces of all words of length `1…max_len` in the matrices.
pub fn trace_word_invariants(matrices: &[Matrix], max_len: usize) -> Vec<Scalar> {
    let mut out = Vec::new();
    let mut words: Vec<Matrix> = matrices.to_vec();
    for len in 1..=max_len {
        out.extend(words.iter().map(Matrix::trace));
        if len < max_len {
            words = words.iter().cartesian_product(matrices).map(|(w, m)| w.mul(m)).collect();
        }
    }
    out.sort();
    out
}

/// Flat rank-one data modulo gauge, with coefficients of degree `≤ cap`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LineBundleModuli {
    /// Dimension of the space of flat `Ξ` (kernel of the linearized MC map).
    pub flat_dim: usize,
    /// Rank of the infinitesimal gauge action `g ↦ Φ = exp g`.
    pub gauge_rank: usize,
}

impl LineBundleModuli {
    pub fn quotient_dim(&self) -> usize {
        self.flat_dim - self.gauge_rank
    }
}

/// Rank-one bundles: the MC map is linear, and gauging by `exp g` shifts `Ξ` by `d_π g`.
pub fn line_bundle_moduli(pi: &Arc<PoissonStructure>, cap: u32) -> Result<LineBundleModuli, NormalizeError> {
    if !pi.is_linear() {
        return Err(NormalizeError::NonLinearStructure);
    }
    let n = pi.nvars();
    let monos = Monomial::all_up_to(n, cap);
    let unit = |i: usize, mono: &Monomial| -> ConnectionData {
        let mut comps = vec![PolyMatrix::zero(1, n); n];
        comps[i] = PolyMatrix::from_entries(1, n, vec![Poly::monomial(n, mono.clone(), Scalar::one())]);
        ConnectionData::new(pi.clone(), 1, comps, Some(cap)).expect("rank one")
    };
    let flat_coords = |xi: &ConnectionData| -> Vec<Scalar> {
        let res = mc_residual(xi);
        (0..n)
            .tuple_combinations()
            .flat_map(|(i, j)| {
                let p = res.component(&[i, j]).get(0, 0).clone();
                monos.iter().map(move |mono| p.coeff(mono)).collect::<Vec<_>>()
            })
            .collect()
    };
    let xi_coords = |xi: &ConnectionData| -> Vec<Scalar> {
        (0..n).flat_map(|i| monos.iter().map(move |mono| xi.component(i).get(0, 0).coeff(mono))).collect()
    };
    let mut columns = Vec::new();
    for i in 0..n {
        for mono in &monos {
            columns.push(flat_coords(&unit(i, mono)));
        }
    }
    let mc = columns_to_matrix(&columns);
    let flat_dim = columns.len() - mc.rank();
    let zero = ConnectionData::trivial(pi.clone(), 1).with_cap(Some(cap));
    let mut gauge_cols = Vec::new();
    for mono in monos.iter().filter(|m| m.degree() > 0) {
        let g = PolyMatrix::from_entries(1, n, vec![Poly::monomial(n, mono.clone(), Scalar::one())]);
        let phi = GaugeTransform::new(g.exp_truncated(cap).with_cap(Some(cap)))?;
        gauge_cols.push(xi_coords(&gauge_transform(&zero, &phi)?));
    }
    let gauge_rank = if gauge_cols.is_empty() { 0 } else { columns_to_matrix(&gauge_cols).rank() };
    Ok(LineBundleModuli { flat_dim, gauge_rank })
}

fn columns_to_matrix(columns: &[Vec<Scalar>]) -> Matrix {
    let rows = columns.first().map_or(0, Vec::len);
    let mut m = Matrix::zeros(rows, columns.len());
    for (c, col) in columns.iter().enumerate() {
        for (r, v) in col.iter().enumerate() {
            if !v.is_zero() {
                m.set(r, c, v.clone());
            }
        }
    }
    m
}

/// A function `g` with `gauge(a, exp g) = b` for flat rank-one data, if the difference is exact.
pub fn rank_one_gauge(a: &ConnectionData, b: &ConnectionData, cap: u32) -> Option<Poly> {
    assert!(a.rank() == 1 && b.rank() == 1, "rank-one data expected");
    let n = a.nvars();
    let diff = Multivector::vector_field((0..n).map(|i| b.component(i).get(0, 0).sub(a.component(i).get(0, 0))).collect());
    let g = find_primitive(a.poisson(), &diff, cap)?;
    let g = g.component(&[]);
    // the constant term of g acts trivially
    let g = g.sub(&Poly::constant(n, g.constant_term()));
    debug_assert_eq!(d_pi(a.poisson(), &Multivector::function(g.clone())), diff);
    Some(g)
}
