//! Poisson vector bundles in a fixed trivialization.
//!
//! A bundle of rank `m` over `(ℝⁿ, π)` is given by matrices `Ξ^1, …, Ξ^n`
//! with `Ξ(Σ a_i dx_i) = Σ a_i Ξ^i`, acting on sections by
//! `[α, s] = L_{π♯α}s + Ξ(α)s`.

use std::sync::Arc;

use itertools::Itertools;
use num_traits::Zero;
use thiserror::Error;

use crate::lie::{LieAlgebra, LieError, LieModule};
use crate::linalg::Matrix;
use crate::multivector::{
    apply_field, index_sets, lie_derivative, schouten_bracket, sort_with_sign, MatrixMultivector, MultiVector,
    Multivector, Truncate,
};
use crate::poisson::{d_pi, find_primitive, one_form_bracket, product_poisson, OneForm, PoissonError, PoissonStructure};
use crate::poly::Poly;
use crate::polymatrix::{min_cap, PolyMatrix};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PvbError {
    #[error("Maurer–Cartan residual is nonzero on (dx_{i}, dx_{j})")]
    NotFlat { i: usize, j: usize },
    #[error("representation algebra does not match the Poisson structure")]
    AlgebraMismatch,
    #[error("expected {expected} components of size {rank}, got {got}")]
    ShapeMismatch { expected: usize, rank: usize, got: usize },
    #[error("variable-count mismatch: {0} vs {1}")]
    VarCountMismatch(usize, usize),
    #[error("vector field is not Poisson: [π, X] ≠ 0")]
    NotPoissonField,
    #[error("witness identity fails on dx_{index}")]
    WitnessFails { index: usize },
    #[error("d_π b = −L_X Ξ_c fails although the witness identity holds")]
    IdentityFails,
    #[error("internal consistency failure: {0}")]
    Internal(String),
    #[error(transparent)]
    Poisson(#[from] PoissonError),
    #[error(transparent)]
    Lie(#[from] LieError),
}

/// The bundle datum `Ξ` together with its base Poisson structure.
#[derive(Clone, PartialEq)]
pub struct ConnectionData {
    poisson: Arc<PoissonStructure>,
    rank: usize,
    xi: Vec<PolyMatrix>,
    cap: Option<u32>,
}

impl std::fmt::Debug for ConnectionData {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ConnectionData").field("rank", &self.rank).field("cap", &self.cap).field("xi", &self.xi).finish()
    }
}

impl ConnectionData {
    /// Components are truncated at `cap` when one is given.
    pub fn new(poisson: Arc<PoissonStructure>, rank: usize, xi: Vec<PolyMatrix>, cap: Option<u32>) -> Result<Self, PvbError> {
        let n = poisson.nvars();
        if xi.len() != n || xi.iter().any(|m| m.size() != rank) {
            return Err(PvbError::ShapeMismatch { expected: n, rank, got: xi.len() });
        }
        if let Some(m) = xi.iter().find(|m| m.nvars() != n) {
            return Err(PvbError::VarCountMismatch(m.nvars(), n));
        }
        let xi = xi.into_iter().map(|m| m.with_cap(cap)).collect();
        Ok(ConnectionData { poisson, rank, xi, cap })
    }

    /// `Ξ^i = ρ_i` over the Lie–Poisson structure of `ρ`'s algebra.
    pub fn from_representation(poisson: Arc<PoissonStructure>, module: &LieModule) -> Result<Self, PvbError> {
        let alg = module.algebra();
        let n = poisson.nvars();
        let matches = poisson.is_linear()
            && n == alg.dim()
            && poisson.lie_algebra().is_ok_and(|own| {
                (0..n).all(|i| (i + 1..n).all(|j| own.bracket_basis(i, j) == alg.bracket_basis(i, j)))
            });
        if !matches {
            return Err(PvbError::AlgebraMismatch);
        }
        let xi = module.action().iter().map(|m| PolyMatrix::from_constant(m, n)).collect();
        ConnectionData::new(poisson, module.dim(), xi, None)
    }

    /// `Ξ = 0`.
    pub fn trivial(poisson: Arc<PoissonStructure>, rank: usize) -> Self {
        let n = poisson.nvars();
        ConnectionData { xi: vec![PolyMatrix::zero(rank, n); n], poisson, rank, cap: None }
    }

    pub fn poisson(&self) -> &Arc<PoissonStructure> {
        &self.poisson
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn nvars(&self) -> usize {
        self.poisson.nvars()
    }

    pub fn cap(&self) -> Option<u32> {
        self.cap
    }

    pub fn components(&self) -> &[PolyMatrix] {
        &self.xi
    }

    pub fn component(&self, i: usize) -> &PolyMatrix {
        &self.xi[i]
    }

    pub fn with_cap(self, cap: Option<u32>) -> Self {
        let cap = min_cap(self.cap, cap);
        ConnectionData { xi: self.xi.into_iter().map(|m| m.with_cap(cap)).collect(), cap, ..self }
    }

    /// Same components over another Poisson structure on the same variables.
    pub(crate) fn rebase(&self, poisson: Arc<PoissonStructure>, xi: Vec<PolyMatrix>, cap: Option<u32>) -> Self {
        ConnectionData { poisson, rank: self.rank, xi: xi.into_iter().map(|m| m.with_cap(cap)).collect(), cap }
    }

    /// `Ξ(α) = Σ α_i Ξ^i`.
    pub fn evaluate(&self, a: &OneForm) -> PolyMatrix {
        let mut out = PolyMatrix::zero(self.rank, self.nvars()).with_cap(self.cap);
        for (ai, m) in a.components().iter().zip(&self.xi) {
            if !ai.is_zero() {
                out = out.add(&m.scale_poly(ai));
            }
        }
        out
    }

    /// `Ξ` as a `gl(m)`-valued vector field.
    pub fn as_multivector(&self) -> MatrixMultivector {
        MultiVector::from_components(1, self.nvars(), self.rank, self.xi.iter().enumerate().map(|(i, m)| (vec![i], m.clone())))
    }

    pub fn constant_part(&self) -> Vec<Matrix> {
        self.xi.iter().map(PolyMatrix::constant_part).collect()
    }

    pub fn is_constant(&self) -> bool {
        self.xi.iter().all(|m| m.degree().unwrap_or(0) == 0)
    }

    pub fn degree(&self) -> Option<u32> {
        self.xi.iter().filter_map(PolyMatrix::degree).max()
    }

    pub fn is_flat(&self) -> bool {
        mc_residual(self).is_zero()
    }

    pub fn require_flat(&self) -> Result<(), PvbError> {
        match mc_residual(self).components().next() {
            None => Ok(()),
            Some((idx, _)) => Err(PvbError::NotFlat { i: idx[0], j: idx[1] }),
        }
    }
}

/// `F_ij = X_i(Ξ^j) − X_j(Ξ^i) − Ξ([dx_i, dx_j]) + [Ξ^i, Ξ^j]`, truncated at the cap.
pub fn mc_residual(xi: &ConnectionData) -> MatrixMultivector {
    let pi = xi.poisson();
    let n = xi.nvars();
    let mut out = MultiVector::zero(2, n, xi.rank);
    for i in 0..n {
        for j in i + 1..n {
            let mut f = apply_field(pi.anchor(i), &xi.xi[j])
                .sub(&apply_field(pi.anchor(j), &xi.xi[i]))
                .add(&xi.xi[i].commutator(&xi.xi[j]));
            let pij = pi.entry(i, j);
            for (m, xm) in xi.xi.iter().enumerate() {
                let d = pij.derivative(m);
                if !d.is_zero() {
                    f = f.sub(&xm.scale_poly(&d));
                }
            }
            let f = match xi.cap {
                Some(c) => f.truncate(c),
                None => f,
            };
            out.add_component(&[i, j], &f);
        }
    }
    out
}

/// Section of the trivial bundle: a column of polynomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Section {
    comps: Vec<Poly>,
}

impl Section {
    pub fn new(comps: Vec<Poly>) -> Self {
        Section { comps }
    }

    /// Constant `k`-th basis vector.
    pub fn basis(rank: usize, nvars: usize, k: usize) -> Self {
        let mut comps = vec![Poly::zero(nvars); rank];
        comps[k] = Poly::one(nvars);
        Section { comps }
    }

    pub fn components(&self) -> &[Poly] {
        &self.comps
    }

    pub fn scale_poly(&self, f: &Poly) -> Section {
        Section { comps: self.comps.iter().map(|c| c.mul(f)).collect() }
    }

    pub fn add(&self, other: &Section) -> Section {
        Section { comps: self.comps.iter().zip(&other.comps).map(|(a, b)| a.add(b)).collect() }
    }

    pub fn sub(&self, other: &Section) -> Section {
        Section { comps: self.comps.iter().zip(&other.comps).map(|(a, b)| a.sub(b)).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(Poly::is_zero)
    }

    fn truncate(self, cap: Option<u32>) -> Section {
        match cap {
            Some(c) => Section { comps: self.comps.iter().map(|p| p.truncate(c)).collect() },
            None => self,
        }
    }
}

/// `[α, s] = L_{π♯α}s + Ξ(α)s`.
pub fn action(xi: &ConnectionData, a: &OneForm, s: &Section) -> Section {
    let field = crate::poisson::sharp(xi.poisson(), a);
    let m = xi.evaluate(a);
    let comps = (0..xi.rank)
        .map(|r| {
            let mut v = apply_field(&field, &s.comps[r]);
            for (k, sk) in s.comps.iter().enumerate() {
                let e = m.get(r, k);
                if !e.is_zero() && !sk.is_zero() {
                    v = v.add(&e.mul(sk));
                }
            }
            v
        })
        .collect();
    Section { comps }.truncate(xi.cap)
}

/// `{f, s} = [df, s]`.
pub fn bracket(xi: &ConnectionData, f: &Poly, s: &Section) -> Section {
    action(xi, &OneForm::exact(f), s)
}

/// Representation of the conormal Lie algebra `ker π♯|_p` on the fiber at `p`.
#[derive(Debug, Clone, PartialEq)]
pub struct IsotropyRepresentation {
    pub point: Vec<Scalar>,
    /// Basis covectors of `ker π♯|_p`.
    pub conormal: Vec<Vec<Scalar>>,
    pub algebra: Arc<LieAlgebra>,
    /// `Ξ(α)(p)` for each basis covector.
    pub matrices: Vec<Matrix>,
}

pub fn isotropy_representation(xi: &ConnectionData, point: &[Scalar]) -> Result<IsotropyRepresentation, PvbError> {
    let n = xi.nvars();
    if point.len() != n {
        return Err(PvbError::VarCountMismatch(point.len(), n));
    }
    xi.require_flat()?;
    let pi = xi.poisson();
    let conormal = pi.at(point).transpose().kernel();
    let k = conormal.len();
    let forms: Vec<OneForm> = conormal
        .iter()
        .map(|v| OneForm::new(v.iter().map(|c| Poly::constant(n, c.clone())).collect()))
        .collect();
    // conormal coordinates of a covector lying in the span of the basis
    let basis_cols = Matrix::from_rows(conormal.clone()).transpose();
    let mut table = Vec::new();
    for a in 0..k {
        for b in a + 1..k {
            let value = one_form_bracket(pi, &forms[a], &forms[b]).eval(point);
            let coords = basis_cols
                .solve(&value)
                .ok_or_else(|| PvbError::Internal("conormal bracket leaves the conormal space".into()))?;
            table.push((a, b, coords.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).collect()));
        }
    }
    let algebra = Arc::new(LieAlgebra::new("conormal", k, &table)?);
    let matrices: Vec<Matrix> = forms.iter().map(|f| xi.evaluate(f).eval(point)).collect();
    LieModule::new(algebra.clone(), matrices.clone())
        .map_err(|_| PvbError::Internal("isotropy matrices are not a representation".into()))?;
    Ok(IsotropyRepresentation { point: point.to_vec(), conormal, algebra, matrices })
}

/// Antisymmetrized trace cocycle `c(ξ_1, …, ξ_p) = Σ_σ sgn σ tr(ξ_σ(1) ⋯ ξ_σ(p))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GlCocycle {
    arity: usize,
    name: String,
}

impl GlCocycle {
    /// `u_k`, of arity `2k − 1`.
    pub fn u(k: usize) -> Self {
        assert!(k >= 1, "u_k needs k ≥ 1");
        let name = if k == 1 { "tr".to_string() } else { format!("u{k}") };
        GlCocycle { arity: 2 * k - 1, name }
    }

    pub fn trace() -> Self {
        GlCocycle::u(1)
    }

    pub fn u2() -> Self {
        GlCocycle::u(2)
    }

    /// `tr`, `u1`, `u2`, `u3`, ….
    pub fn by_name(name: &str) -> Option<Self> {
        if name == "tr" {
            return Some(GlCocycle::trace());
        }
        let k: usize = name.strip_prefix('u')?.parse().ok()?;
        (k >= 1).then(|| GlCocycle::u(k))
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    fn signed_permutations(&self) -> Vec<(Vec<usize>, i64)> {
        (0..self.arity)
            .permutations(self.arity)
            .map(|p| {
                let sign = sort_with_sign(&p).expect("permutation").1;
                (p, sign)
            })
            .collect()
    }

    pub fn evaluate(&self, args: &[Matrix]) -> Scalar {
        assert_eq!(args.len(), self.arity, "wrong number of cocycle arguments");
        let mut total = Scalar::zero();
        for (perm, sign) in self.signed_permutations() {
            let mut prod = args[perm[0]].clone();
            for &p in &perm[1..] {
                prod = prod.mul(&args[p]);
            }
            let t = prod.trace();
            total = if sign > 0 { total + t } else { total - t };
        }
        total
    }

    /// Pointwise evaluation on polynomial matrices, truncated at their common cap.
    pub fn evaluate_poly(&self, args: &[PolyMatrix]) -> Poly {
        assert_eq!(args.len(), self.arity, "wrong number of cocycle arguments");
        let mut total = Poly::zero(args[0].nvars());
        for (perm, sign) in self.signed_permutations() {
            let mut prod = args[perm[0]].clone();
            for &p in &perm[1..] {
                prod = prod.mul(&args[p]);
            }
            total.add_scaled(&prod.trace(), &Scalar::from_int(sign));
        }
        total
    }

    /// Checks the CE cocycle condition on `gl(m)` with trivial coefficients on all basis tuples.
    pub fn verify_cocycle(&self, m: usize) -> bool {
        let basis: Vec<Matrix> = (0..m * m).map(|k| Matrix::unit(m, k / m, k % m)).collect();
        let p = self.arity;
        index_sets(basis.len(), p + 1).into_iter().all(|set| {
            let mut total = Scalar::zero();
            for a in 0..=p {
                for b in a + 1..=p {
                    let mut args = vec![basis[set[a]].commutator(&basis[set[b]])];
                    args.extend(set.iter().enumerate().filter(|&(q, _)| q != a && q != b).map(|(_, &s)| basis[s].clone()));
                    let v = self.evaluate(&args);
                    total = if (a + b) % 2 == 0 { total + v } else { total - v };
                }
            }
            total.is_zero()
        })
    }
}

/// The class `Ξ_c = c ∘ Ξ` and what is known about it.
#[derive(Debug, Clone, PartialEq)]
pub struct CharacteristicClass {
    pub class: Multivector,
    pub closed: bool,
    /// Primitive of degree `≤ exactness cap`, if one exists.
    pub primitive: Option<Multivector>,
}

impl CharacteristicClass {
    pub fn exact_up_to_cap(&self) -> bool {
        self.primitive.is_some()
    }
}

/// `Ξ_c` with components `c(Ξ^{i_1}, …, Ξ^{i_p})`.
pub fn class_multivector(xi: &ConnectionData, c: &GlCocycle) -> Multivector {
    let n = xi.nvars();
    let mut out = Multivector::zero(c.arity(), n, ());
    for set in index_sets(n, c.arity()) {
        let args: Vec<PolyMatrix> = set.iter().map(|&i| xi.xi[i].clone()).collect();
        out.add_component(&set, &c.evaluate_poly(&args));
    }
    out
}

/// Secondary characteristic class, its closedness, and a bounded exactness search.
pub fn characteristic_class(xi: &ConnectionData, c: &GlCocycle, exactness_cap: u32) -> Result<CharacteristicClass, PvbError> {
    xi.require_flat()?;
    let class = class_multivector(xi, c);
    let dc = d_pi(xi.poisson(), &class);
    let closed = match xi.cap {
        Some(cap) => dc.truncate(cap).is_zero(),
        None => dc.is_zero(),
    };
    let primitive = if class.is_zero() {
        Some(Multivector::zero(c.arity() - 1, xi.nvars(), ()))
    } else {
        find_primitive(xi.poisson(), &class, exactness_cap)
    };
    Ok(CharacteristicClass { class, closed, primitive })
}

/// Canonical line bundle in the coordinate-volume trivialization: `Ξ^i = div(π♯ dx_i)`.
pub fn canonical_bundle(pi: Arc<PoissonStructure>) -> ConnectionData {
    canonical_bundle_with_density(pi, &Poly::zero(0))
}

/// Canonical line bundle for the volume `e^g dx_1 ∧ ⋯ ∧ dx_n`.
///
/// Passing a zero polynomial (of any variable count) gives the coordinate volume.
pub fn canonical_bundle_with_density(pi: Arc<PoissonStructure>, g: &Poly) -> ConnectionData {
    let n = pi.nvars();
    let xi = (0..n)
        .map(|i| {
            let field = pi.anchor(i).field_components();
            let mut div = Poly::zero(n);
            for (j, f) in field.iter().enumerate() {
                div = div.add(&f.derivative(j));
            }
            if !g.is_zero() {
                div = div.add(&apply_field(pi.anchor(i), g));
            }
            PolyMatrix::from_entries(1, n, vec![div])
        })
        .collect();
    ConnectionData { poisson: pi, rank: 1, xi, cap: None }
}

/// Outcome of a homogeneity witness check.
#[derive(Debug, Clone, PartialEq)]
pub struct HomogeneityReport {
    /// `b(α_1, …) = c(A, Ξ(α_1), …)`.
    pub b: Multivector,
    pub d_pi_b: Multivector,
    /// `L_X Ξ_c`.
    pub lie_derivative_class: Multivector,
}

/// Verifies `(L_XΞ)(dx_j) = L_{X_j}A + [Ξ^j, A]` and then `d_π b = −L_X Ξ_c`.
pub fn homogeneity_check(
    xi: &ConnectionData,
    field: &Multivector,
    a: &PolyMatrix,
    c: &GlCocycle,
) -> Result<HomogeneityReport, PvbError> {
    let pi = xi.poisson();
    let n = xi.nvars();
    if field.nvars() != n || a.nvars() != n {
        return Err(PvbError::VarCountMismatch(field.nvars(), n));
    }
    if a.size() != xi.rank {
        return Err(PvbError::ShapeMismatch { expected: n, rank: xi.rank, got: a.size() });
    }
    if !schouten_bracket(pi.bivector(), field).expect("same variable count").is_zero() {
        return Err(PvbError::NotPoissonField);
    }
    xi.require_flat()?;
    let a = a.clone().with_cap(xi.cap);
    let cut = |m: PolyMatrix| match xi.cap {
        Some(c) => m.truncate(c),
        None => m,
    };
    let lxi = lie_derivative(field, &xi.as_multivector());
    for j in 0..n {
        let lhs = cut(lxi.component(&[j]));
        let rhs = cut(apply_field(pi.anchor(j), &a).add(&xi.xi[j].commutator(&a)));
        if lhs != rhs {
            return Err(PvbError::WitnessFails { index: j });
        }
    }
    let p = c.arity();
    let mut b = Multivector::zero(p - 1, n, ());
    for set in index_sets(n, p - 1) {
        let mut args = vec![a.clone()];
        args.extend(set.iter().map(|&i| xi.xi[i].clone()));
        b.add_component(&set, &c.evaluate_poly(&args));
    }
    let cut_mv = |m: Multivector| match xi.cap {
        Some(c) => m.truncate(c),
        None => m,
    };
    let d_pi_b = cut_mv(d_pi(pi, &b));
    let lie_derivative_class = cut_mv(lie_derivative(field, &class_multivector(xi, c)));
    if d_pi_b != lie_derivative_class.neg() {
        return Err(PvbError::IdentityFails);
    }
    Ok(HomogeneityReport { b, d_pi_b, lie_derivative_class })
}

/// Every `Ξ^i` skew-Hermitian coefficientwise (skew-symmetric for real data).
pub fn is_unitary(xi: &ConnectionData) -> bool {
    xi.xi.iter().all(PolyMatrix::is_skew_hermitian)
}

/// `(Ξ^1, …, Ξ^n, 0, …, 0)` over `π ⊕ Σ ∂_{u_l} ∧ ∂_{v_l}`.
pub fn product_extension(xi: &ConnectionData, m: usize) -> Result<ConnectionData, PvbError> {
    xi.require_flat()?;
    let n = xi.nvars();
    let total = n + 2 * m;
    let poisson = Arc::new(product_poisson(xi.poisson(), m));
    let mut comps: Vec<PolyMatrix> = xi.xi.iter().map(|c| c.embed(total, 0)).collect();
    comps.extend((0..2 * m).map(|_| PolyMatrix::zero(xi.rank, total)));
    Ok(xi.rebase(poisson, comps, xi.cap))
}

/// Sets the fiber coordinates to zero and drops the fiber components.
pub fn restrict_to_base(xi: &ConnectionData, base: Arc<PoissonStructure>) -> Result<ConnectionData, PvbError> {
    let n = base.nvars();
    if n > xi.nvars() {
        return Err(PvbError::VarCountMismatch(n, xi.nvars()));
    }
    let comps = xi.xi[..n].iter().map(|c| c.restrict_leading(n)).collect();
    Ok(xi.rebase(base, comps, xi.cap))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: i64) -> Scalar {
        Scalar::from_int(v)
    }

    fn lie_poisson(name: &str) -> (Arc<LieAlgebra>, Arc<PoissonStructure>) {
        let alg = Arc::new(LieAlgebra::preset(name).unwrap());
        let pi = Arc::new(PoissonStructure::from_lie_algebra(alg.clone()));
        (alg, pi)
    }

    fn bundle(name: &str, kind: &str) -> ConnectionData {
        let (alg, pi) = lie_poisson(name);
        let module = LieModule::preset(alg, kind).unwrap();
        ConnectionData::from_representation(pi, &module).unwrap()
    }

    fn constant_bundle(pi: Arc<PoissonStructure>, mats: &[Matrix]) -> ConnectionData {
        let n = pi.nvars();
        let m = mats[0].rows();
        ConnectionData::new(pi, m, mats.iter().map(|x| PolyMatrix::from_constant(x, n)).collect(), None).unwrap()
    }

    #[test]
    fn representations_are_flat() {
        let xi = bundle("sl2", "adjoint");
        let alg = LieAlgebra::preset("sl2").unwrap();
        assert_eq!(xi.constant_part(), (0..3).map(|i| alg.ad(i)).collect::<Vec<_>>());
        assert!(xi.is_flat());
        let triv = bundle("sl2", "trivial");
        assert!(triv.components().iter().all(PolyMatrix::is_zero));
    }

    #[test]
    fn representation_must_match_structure() {
        let (_, pi) = lie_poisson("so3");
        let module = LieModule::adjoint(Arc::new(LieAlgebra::preset("sl2").unwrap()));
        assert_eq!(ConnectionData::from_representation(pi, &module), Err(PvbError::AlgebraMismatch));
    }

    #[test]
    fn residual_with_zero_structure() {
        let pi = Arc::new(PoissonStructure::zero(2));
        let xi = constant_bundle(pi.clone(), &[Matrix::unit(2, 0, 1), Matrix::unit(2, 1, 0)]);
        let f = mc_residual(&xi);
        assert_eq!(f.component(&[0, 1]), PolyMatrix::from_constant(&Matrix::diagonal(&[s(1), s(-1)]), 2));
        let commuting = constant_bundle(pi, &[Matrix::unit(2, 0, 1), Matrix::unit(2, 0, 1).scale(&s(3))]);
        assert!(commuting.is_flat());
    }

    #[test]
    fn action_examples() {
        let xi = bundle("sl2", "adjoint");
        let e = Section::basis(3, 3, 1);
        let out = action(&xi, &OneForm::coordinate(3, 0), &e);
        assert_eq!(out, e.scale_poly(&Poly::constant(3, s(2))));
        assert!(bracket(&xi, &Poly::one(3), &e).is_zero());
        let y = Poly::var(3, 1);
        let out = bracket(&xi, &Poly::var(3, 0), &e.scale_poly(&y));
        assert_eq!(out, e.scale_poly(&y.scale(&s(4))));
    }

    #[test]
    fn leibniz_identity() {
        let xi = bundle("sl2", "standard");
        let f = Poly::var(3, 0).mul(&Poly::var(3, 2));
        let h = Poly::var(3, 1).add(&Poly::one(3));
        let sec = Section::new(vec![Poly::var(3, 2), Poly::one(3)]);
        let lhs = bracket(&xi, &f, &sec.scale_poly(&h));
        let rhs = sec
            .scale_poly(&crate::poisson::poisson_bracket(xi.poisson(), &f, &h))
            .add(&bracket(&xi, &f, &sec).scale_poly(&h));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn flatness_matches_module_axiom() {
        // [α,[β,s]] − [β,[α,s]] = [[α,β],s] on coordinate forms
        let check = |xi: &ConnectionData| -> bool {
            let n = xi.nvars();
            let pi = xi.poisson();
            (0..n).all(|i| {
                (0..n).all(|j| {
                    (0..xi.rank()).all(|k| {
                        let sec = Section::basis(xi.rank(), n, k).scale_poly(&Poly::var(n, 0));
                        let (a, b) = (OneForm::coordinate(n, i), OneForm::coordinate(n, j));
                        let lhs = action(xi, &a, &action(xi, &b, &sec)).sub(&action(xi, &b, &action(xi, &a, &sec)));
                        lhs == action(xi, &one_form_bracket(pi, &a, &b), &sec)
                    })
                })
            })
        };
        for (name, kind) in [("sl2", "standard"), ("so3", "adjoint"), ("h3", "standard")] {
            let xi = bundle(name, kind);
            assert!(xi.is_flat() && check(&xi));
        }
        let pi = Arc::new(PoissonStructure::zero(2));
        let bad = constant_bundle(pi, &[Matrix::unit(2, 0, 1), Matrix::unit(2, 1, 0)]);
        assert!(!bad.is_flat() && !check(&bad));
    }

    #[test]
    fn isotropy_examples() {
        let xi = bundle("sl2", "standard");
        let iso = isotropy_representation(&xi, &[s(0), s(0), s(0)]).unwrap();
        assert_eq!(iso.conormal.len(), 3);
        let (_, aff) = lie_poisson("aff1");
        let can = canonical_bundle(aff);
        let iso = isotropy_representation(&can, &[s(5), s(0)]).unwrap();
        assert_eq!(iso.conormal.len(), 2);
        let total: Vec<Matrix> = iso.matrices.clone();
        // conormal basis covectors combine dx and dy; the dx-coefficient carries the weight
        let weights: Vec<Scalar> = iso.conormal.iter().map(|v| v[0].clone()).collect();
        for (m, w) in total.iter().zip(&weights) {
            assert_eq!(m.get(0, 0), w);
        }
        let symp = isotropy_representation(&can, &[s(0), s(1)]).unwrap();
        assert!(symp.conormal.is_empty() && symp.matrices.is_empty());
    }

    #[test]
    fn isotropy_requires_flatness() {
        let pi = Arc::new(PoissonStructure::zero(2));
        let bad = constant_bundle(pi, &[Matrix::unit(2, 0, 1), Matrix::unit(2, 1, 0)]);
        assert!(matches!(isotropy_representation(&bad, &[s(0), s(0)]), Err(PvbError::NotFlat { .. })));
    }

    #[test]
    fn cocycles() {
        let std = LieModule::standard(Arc::new(LieAlgebra::preset("sl2").unwrap())).unwrap();
        let rho = std.action();
        assert_eq!(GlCocycle::u2().evaluate(rho), s(6));
        assert!(GlCocycle::trace().verify_cocycle(2));
        assert!(GlCocycle::u2().verify_cocycle(2));
        assert_eq!(GlCocycle::by_name("u2"), Some(GlCocycle::u2()));
        assert_eq!(GlCocycle::by_name("nope"), None);
    }

    #[test]
    fn characteristic_class_examples() {
        let xi = bundle("sl2", "standard");
        let tr = characteristic_class(&xi, &GlCocycle::trace(), 2).unwrap();
        assert!(tr.class.is_zero() && tr.closed);
        let u2 = characteristic_class(&xi, &GlCocycle::u2(), 2).unwrap();
        assert_eq!(u2.class.component(&[0, 1, 2]), Poly::constant(3, s(6)));
        assert!(u2.closed);
        let pi = Arc::new(PoissonStructure::zero(2));
        let flat = constant_bundle(pi, &[Matrix::unit(2, 0, 1), Matrix::identity(2)]);
        let c = characteristic_class(&flat, &GlCocycle::trace(), 1).unwrap();
        assert_eq!(c.class.component(&[1]), Poly::constant(2, s(2)));
        assert!(c.closed && !c.exact_up_to_cap());
    }

    #[test]
    fn modular_classes() {
        let (_, aff) = lie_poisson("aff1");
        let can = canonical_bundle(aff);
        assert!(can.is_flat());
        assert_eq!(can.constant_part(), vec![Matrix::from_int_rows(&[&[1]]), Matrix::from_int_rows(&[&[0]])]);
        let cls = characteristic_class(&can, &GlCocycle::trace(), 6).unwrap();
        assert!(!cls.class.is_zero() && cls.closed && !cls.exact_up_to_cap());
        for name in ["sl2", "so3", "h3"] {
            let (alg, pi) = lie_poisson(name);
            let can = canonical_bundle(pi);
            for i in 0..alg.dim() {
                assert_eq!(can.component(i).constant_part().get(0, 0), &alg.ad(i).trace());
                assert!(can.component(i).is_zero());
            }
        }
    }

    #[test]
    fn volume_change_is_exact() {
        let (_, aff) = lie_poisson("aff1");
        let g = Poly::var(2, 0).mul(&Poly::var(2, 1)).add(&Poly::var(2, 1));
        let a = canonical_bundle(aff.clone());
        let b = canonical_bundle_with_density(aff.clone(), &g);
        assert!(b.is_flat());
        let diff = Multivector::vector_field((0..2).map(|i| b.component(i).get(0, 0).sub(a.component(i).get(0, 0))).collect());
        assert_eq!(d_pi(&aff, &Multivector::function(g)).neg(), diff);
    }

    #[test]
    fn homogeneity_examples() {
        let xi = bundle("sl2", "standard");
        let zero_field = Multivector::zero(1, 3, ());
        let zero = PolyMatrix::zero(2, 3);
        let r = homogeneity_check(&xi, &zero_field, &zero, &GlCocycle::trace()).unwrap();
        assert!(r.d_pi_b.is_zero());
        let x = xi.poisson().anchor(0).clone();
        for c in [GlCocycle::trace(), GlCocycle::u2()] {
            homogeneity_check(&xi, &x, xi.component(0), &c).unwrap();
        }
        // wrong witness
        let err = homogeneity_check(&xi, &x, xi.component(1), &GlCocycle::trace());
        assert!(matches!(err, Err(PvbError::WitnessFails { .. })));
        let not_poisson = Multivector::vector_field(vec![Poly::var(3, 0), Poly::zero(3), Poly::zero(3)]);
        assert_eq!(homogeneity_check(&xi, &not_poisson, &zero, &GlCocycle::trace()), Err(PvbError::NotPoissonField));
    }

    #[test]
    fn unitarity() {
        assert!(is_unitary(&bundle("so3", "adjoint")));
        assert!(!is_unitary(&bundle("sl2", "standard")));
        let pi = Arc::new(PoissonStructure::zero(1));
        let jordan = constant_bundle(pi, &[Matrix::unit(2, 0, 1).add(&Matrix::identity(2))]);
        assert!(!is_unitary(&jordan));
    }

    #[test]
    fn product_round_trip() {
        let xi = bundle("sl2", "adjoint");
        let ext = product_extension(&xi, 1).unwrap();
        assert_eq!(ext.nvars(), 5);
        assert!(ext.is_flat());
        assert_eq!(restrict_to_base(&ext, xi.poisson().clone()).unwrap(), xi);
        let triv = ConnectionData::trivial(xi.poisson().clone(), 2);
        assert!(product_extension(&triv, 1).unwrap().components().iter().all(PolyMatrix::is_zero));
    }
}
