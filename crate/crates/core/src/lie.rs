//! Lie algebras given by structure constants, their finite-dimensional
//! modules, and Chevalley–Eilenberg cohomology.
//!
//! The CE differential is
//!
//! ```text
//! dφ(a_0, …, a_k) = Σ_i (−1)^i a_i·φ(…, â_i, …)
//!                 + Σ_{i<j} (−1)^{i+j} φ([a_i, a_j], …, â_i, …, â_j, …)
//! ```

use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::linalg::Matrix;
use crate::multivector::{index_sets, sort_with_sign};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LieError {
    #[error("Jacobi identity fails on basis triple ({i}, {j}, {k}); Jacobiator {jacobiator:?}")]
    JacobiViolation { i: usize, j: usize, k: usize, jacobiator: Vec<Scalar> },
    #[error("invalid structure constants: {0}")]
    InvalidConstants(String),
    #[error("unknown Lie algebra preset `{0}`")]
    UnknownPreset(String),
    #[error("no standard module is defined for algebra `{0}`")]
    NoStandardModule(String),
    #[error("expected {expected} action matrices of size {size}, got {got}")]
    ActionShape { expected: usize, size: usize, got: usize },
    #[error("action matrices violate ρ([e_{i}, e_{j}]) = [ρ_{i}, ρ_{j}]")]
    NotARepresentation { i: usize, j: usize },
    #[error("cochain degree {got} where degree {expected} is required")]
    WrongDegree { expected: usize, got: usize },
    #[error("target is not a cocycle: d(target) is nonzero on {witness:?}")]
    NotACocycle { witness: Vec<usize>, value: Vec<Scalar> },
    #[error("closed cochain is not exact")]
    ObstructionFound { representative: CECochain },
}

/// Finite-dimensional Lie algebra with validated structure constants.
#[derive(Clone, PartialEq, Eq)]
pub struct LieAlgebra {
    name: String,
    dim: usize,
    basis: Vec<String>,
    // c[(i*dim + j)*dim + k] = c_{ij}^k
    consts: Vec<Scalar>,
}

/// Bracket table entry `[e_i, e_j] = Σ coeff·e_k`, as read from input.
pub type BracketEntry = (usize, usize, Vec<(usize, Scalar)>);

#[derive(Debug, Clone, PartialEq)]
pub struct KillingForm {
    pub matrix: Matrix,
    pub determinant: Scalar,
    pub is_semisimple: bool,
}

impl LieAlgebra {
    /// Validates raw constants: antisymmetry is implied, Jacobi is checked.
    pub fn new(name: &str, dim: usize, brackets: &[BracketEntry]) -> Result<Self, LieError> {
        let mut consts = vec![Scalar::zero(); dim * dim * dim];
        for (i, j, terms) in brackets {
            let (i, j) = (*i, *j);
            if i >= dim || j >= dim {
                return Err(LieError::InvalidConstants(format!("basis index out of range in [{i}, {j}]")));
            }
            for (k, c) in terms {
                if *k >= dim {
                    return Err(LieError::InvalidConstants(format!("output index {k} out of range")));
                }
                if i == j {
                    if !c.is_zero() {
                        return Err(LieError::InvalidConstants(format!("[e_{i}, e_{i}] must vanish")));
                    }
                    continue;
                }
                consts[(i * dim + j) * dim + k] += c;
                consts[(j * dim + i) * dim + k] -= c;
            }
        }
        let alg = LieAlgebra {
            name: name.to_string(),
            dim,
            basis: (1..=dim).map(|i| format!("e{i}")).collect(),
            consts,
        };
        alg.check_jacobi()?;
        Ok(alg)
    }

    pub fn with_basis_names(mut self, names: &[&str]) -> Self {
        assert_eq!(names.len(), self.dim, "wrong number of basis names");
        self.basis = names.iter().map(|s| s.to_string()).collect();
        self
    }

    fn check_jacobi(&self) -> Result<(), LieError> {
        let n = self.dim;
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let jac: Vec<Scalar> = (0..n)
                        .map(|m| {
                            (0..n)
                                .map(|l| {
                                    self.c(j, k, l) * self.c(i, l, m)
                                        + self.c(k, i, l) * self.c(j, l, m)
                                        + self.c(i, j, l) * self.c(k, l, m)
                                })
                                .sum()
                        })
                        .collect();
                    if jac.iter().any(|v| !v.is_zero()) {
                        return Err(LieError::JacobiViolation { i, j, k, jacobiator: jac });
                    }
                }
            }
        }
        Ok(())
    }

    /// Preset catalog: `sl2`, `so3`, `h3`, `aff1`, `abelian:n`.
    pub fn preset(name: &str) -> Result<Self, LieError> {
        let s = |v: i64| Scalar::from_int(v);
        let alg = match name {
            // [h,e]=2e, [h,f]=−2f, [e,f]=h
            "sl2" => LieAlgebra::new(
                "sl2",
                3,
                &[(0, 1, vec![(1, s(2))]), (0, 2, vec![(2, s(-2))]), (1, 2, vec![(0, s(1))])],
            )?
            .with_basis_names(&["h", "e", "f"]),
            // [e1,e2]=e3, [e2,e3]=e1, [e3,e1]=e2
            "so3" => LieAlgebra::new(
                "so3",
                3,
                &[(0, 1, vec![(2, s(1))]), (1, 2, vec![(0, s(1))]), (2, 0, vec![(1, s(1))])],
            )?,
            "h3" => LieAlgebra::new("h3", 3, &[(0, 1, vec![(2, s(1))])])?,
            "aff1" => LieAlgebra::new("aff1", 2, &[(0, 1, vec![(1, s(1))])])?,
            other => {
                let dim = other
                    .strip_prefix("abelian:")
                    .and_then(|d| d.parse::<usize>().ok())
                    .ok_or_else(|| LieError::UnknownPreset(other.to_string()))?;
                LieAlgebra::new(other, dim, &[])?
            }
        };
        Ok(alg)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis_names(&self) -> &[String] {
        &self.basis
    }

    fn c(&self, i: usize, j: usize, k: usize) -> &Scalar {
        &self.consts[(i * self.dim + j) * self.dim + k]
    }

    /// `c_{ij}^k`.
    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> Scalar {
        self.c(i, j, k).clone()
    }

    /// Coordinates of `[e_i, e_j]`.
    pub fn bracket_basis(&self, i: usize, j: usize) -> Vec<Scalar> {
        (0..self.dim).map(|k| self.c(i, j, k).clone()).collect()
    }

    pub fn bracket(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let n = self.dim;
        let mut out = vec![Scalar::zero(); n];
        for i in 0..n {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if y[j].is_zero() {
                    continue;
                }
                let xy = &x[i] * &y[j];
                for (k, o) in out.iter_mut().enumerate() {
                    let c = self.c(i, j, k);
                    if !c.is_zero() {
                        *o += &(&xy * c);
                    }
                }
            }
        }
        out
    }

    /// Nonzero bracket table entries with `i < j`.
    pub fn brackets(&self) -> Vec<BracketEntry> {
        let n = self.dim;
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let terms: Vec<(usize, Scalar)> = (0..n)
                    .filter(|&k| !self.c(i, j, k).is_zero())
                    .map(|k| (k, self.c(i, j, k).clone()))
                    .collect();
                if !terms.is_empty() {
                    out.push((i, j, terms));
                }
            }
        }
        out
    }

    pub fn is_abelian(&self) -> bool {
        self.consts.iter().all(Scalar::is_zero)
    }

    /// Matrix of `ad_{e_i}`; column `j` holds `[e_i, e_j]`.
    pub fn ad(&self, i: usize) -> Matrix {
        let n = self.dim;
        let mut m = Matrix::zeros(n, n);
        for j in 0..n {
            for k in 0..n {
                m.set(k, j, self.c(i, j, k).clone());
            }
        }
        m
    }

    /// `K_{ij} = tr(ad_i ∘ ad_j)`; semisimple iff `det K ≠ 0`.
    pub fn killing_form(&self) -> KillingForm {
        let n = self.dim;
        let ads: Vec<Matrix> = (0..n).map(|i| self.ad(i)).collect();
        let mut k = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                k.set(i, j, ads[i].mul(&ads[j]).trace());
            }
        }
        let determinant = if n == 0 { Scalar::one() } else { k.det() };
        let is_semisimple = n > 0 && !determinant.is_zero();
        KillingForm { matrix: k, determinant, is_semisimple }
    }
}

impl fmt::Debug for LieAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LieAlgebra({}, dim {})", self.name, self.dim)
    }
}

/// Finite-dimensional module: one action matrix per basis element.
#[derive(Clone, PartialEq, Eq)]
pub struct LieModule {
    algebra: Arc<LieAlgebra>,
    dim: usize,
    action: Vec<Matrix>,
}

impl LieModule {
    /// Validates `ρ([e_i, e_j]) = [ρ_i, ρ_j]` for all `i < j`.
    pub fn new(algebra: Arc<LieAlgebra>, action: Vec<Matrix>) -> Result<Self, LieError> {
        let module = LieModule::from_parts(algebra, action)?;
        module.check_representation()?;
        Ok(module)
    }

    fn from_parts(algebra: Arc<LieAlgebra>, action: Vec<Matrix>) -> Result<Self, LieError> {
        let dim = action.first().map_or(0, Matrix::rows);
        if action.len() != algebra.dim() || action.iter().any(|m| m.rows() != dim || m.cols() != dim) {
            return Err(LieError::ActionShape { expected: algebra.dim(), size: dim, got: action.len() });
        }
        Ok(LieModule { algebra, dim, action })
    }

    /// Skips the representation check; callers build the action from one.
    pub(crate) fn new_unchecked(algebra: Arc<LieAlgebra>, dim: usize, action: Vec<Matrix>) -> Self {
        debug_assert_eq!(action.len(), algebra.dim());
        LieModule { algebra, dim, action }
    }

    fn check_representation(&self) -> Result<(), LieError> {
        let n = self.algebra.dim();
        for i in 0..n {
            for j in i + 1..n {
                let lhs = self.combination(&self.algebra.bracket_basis(i, j));
                let rhs = self.action[i].commutator(&self.action[j]);
                if lhs != rhs {
                    return Err(LieError::NotARepresentation { i, j });
                }
            }
        }
        Ok(())
    }

    /// One-dimensional module with zero action.
    pub fn trivial(algebra: Arc<LieAlgebra>) -> Self {
        let action = vec![Matrix::zeros(1, 1); algebra.dim()];
        LieModule { algebra, dim: 1, action }
    }

    pub fn adjoint(algebra: Arc<LieAlgebra>) -> Self {
        let action = (0..algebra.dim()).map(|i| algebra.ad(i)).collect();
        let dim = algebra.dim();
        LieModule { algebra, dim, action }
    }

    /// Defining representation of a preset algebra.
    pub fn standard(algebra: Arc<LieAlgebra>) -> Result<Self, LieError> {
        let unit = |n, i, j| Matrix::unit(n, i, j);
        let action = match algebra.name() {
            "sl2" => vec![
                Matrix::diagonal(&[Scalar::one(), -Scalar::one()]),
                unit(2, 0, 1),
                unit(2, 1, 0),
            ],
            // infinitesimal rotations about the coordinate axes
            "so3" => vec![
                unit(3, 2, 1).sub(&unit(3, 1, 2)),
                unit(3, 0, 2).sub(&unit(3, 2, 0)),
                unit(3, 1, 0).sub(&unit(3, 0, 1)),
            ],
            "h3" => vec![unit(3, 0, 1), unit(3, 1, 2), unit(3, 0, 2)],
            "aff1" => vec![unit(2, 0, 0), unit(2, 0, 1)],
            name if name.starts_with("abelian:") => {
                let n = algebra.dim();
                (0..n).map(|i| unit(n.max(1), i, i)).collect()
            }
            other => return Err(LieError::NoStandardModule(other.to_string())),
        };
        LieModule::new(algebra, action)
    }

    /// `trivial`, `standard` or `adjoint`.
    pub fn preset(algebra: Arc<LieAlgebra>, kind: &str) -> Result<Self, LieError> {
        match kind {
            "trivial" => Ok(LieModule::trivial(algebra)),
            "adjoint" => Ok(LieModule::adjoint(algebra)),
            "standard" => LieModule::standard(algebra),
            other => Err(LieError::InvalidConstants(format!("unknown module kind `{other}`"))),
        }
    }

    pub fn algebra(&self) -> &Arc<LieAlgebra> {
        &self.algebra
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn action(&self) -> &[Matrix] {
        &self.action
    }

    /// `ρ(Σ x_i e_i)`.
    pub fn combination(&self, x: &[Scalar]) -> Matrix {
        let mut out = Matrix::zeros(self.dim, self.dim);
        for (xi, m) in x.iter().zip(&self.action) {
            if !xi.is_zero() {
                out = out.add(&m.scale(xi));
            }
        }
        out
    }

    pub fn act(&self, i: usize, v: &[Scalar]) -> Vec<Scalar> {
        self.action[i].mul_vec(v)
    }
}

impl fmt::Debug for LieModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LieModule({}, dim {})", self.algebra.name(), self.dim)
    }
}

/// CE cochain: one module vector per increasing index set, in lexicographic order.
#[derive(Clone, PartialEq)]
pub struct CECochain {
    degree: usize,
    module: Arc<LieModule>,
    values: Vec<Vec<Scalar>>,
}

impl CECochain {
    pub fn zero(module: Arc<LieModule>, degree: usize) -> Self {
        let count = index_sets(module.algebra.dim(), degree).len();
        let values = vec![vec![Scalar::zero(); module.dim]; count];
        CECochain { degree, module, values }
    }

    /// Values listed in the order of [`index_sets`].
    pub fn from_values(module: Arc<LieModule>, degree: usize, values: Vec<Vec<Scalar>>) -> Self {
        assert_eq!(values.len(), index_sets(module.algebra.dim(), degree).len(), "wrong component count");
        assert!(values.iter().all(|v| v.len() == module.dim), "wrong module vector length");
        CECochain { degree, module, values }
    }

    pub fn from_flat(module: Arc<LieModule>, degree: usize, flat: &[Scalar]) -> Self {
        let m = module.dim;
        let values = flat.chunks(m.max(1)).map(|c| c.to_vec()).collect();
        if m == 0 {
            return CECochain::zero(module, degree);
        }
        CECochain::from_values(module, degree, values)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn module(&self) -> &Arc<LieModule> {
        &self.module
    }

    pub fn values(&self) -> &[Vec<Scalar>] {
        &self.values
    }

    pub fn index_sets(&self) -> Vec<Vec<usize>> {
        index_sets(self.module.algebra.dim(), self.degree)
    }

    pub fn flatten(&self) -> Vec<Scalar> {
        self.values.iter().flatten().cloned().collect()
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().flatten().all(Scalar::is_zero)
    }

    /// `φ(e_{i_1}, …, e_{i_k})` for any index tuple.
    pub fn eval(&self, indices: &[usize]) -> Vec<Scalar> {
        let m = self.module.dim;
        let Some((sorted, sign)) = sort_with_sign(indices) else {
            return vec![Scalar::zero(); m];
        };
        let pos = self.position(&sorted);
        if sign > 0 {
            self.values[pos].clone()
        } else {
            self.values[pos].iter().map(|v| -v).collect()
        }
    }

    fn position(&self, sorted: &[usize]) -> usize {
        // rank of a k-subset in lexicographic order
        let n = self.module.algebra.dim();
        let k = sorted.len();
        let mut rank = 0;
        let mut prev = 0;
        for (slot, &s) in sorted.iter().enumerate() {
            for skipped in prev..s {
                rank += binomial(n - skipped - 1, k - slot - 1);
            }
            prev = s + 1;
        }
        rank
    }

    pub fn add(&self, other: &CECochain) -> CECochain {
        assert_eq!(self.degree, other.degree, "cochain degree mismatch");
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect())
            .collect();
        CECochain { degree: self.degree, module: self.module.clone(), values }
    }

    pub fn scale(&self, factor: &Scalar) -> CECochain {
        let values = self.values.iter().map(|v| v.iter().map(|x| x * factor).collect()).collect();
        CECochain { degree: self.degree, module: self.module.clone(), values }
    }
}

impl fmt::Debug for CECochain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CECochain(degree {}, {:?})", self.degree, self.values)
    }
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn axpy(acc: &mut [Scalar], factor: &Scalar, v: &[Scalar]) {
    if factor.is_zero() {
        return;
    }
    for (a, x) in acc.iter_mut().zip(v) {
        if !x.is_zero() {
            *a += &(factor * x);
        }
    }
}

/// CE differential `C^k → C^{k+1}`.
pub fn ce_differential(phi: &CECochain) -> CECochain {
    let module = &phi.module;
    let alg = &module.algebra;
    let n = alg.dim();
    let m = module.dim;
    let k = phi.degree;
    let sets = index_sets(n, k + 1);
    let mut values = Vec::with_capacity(sets.len());
    for set in &sets {
        let mut acc = vec![Scalar::zero(); m];
        for i in 0..=k {
            let rest: Vec<usize> = set.iter().enumerate().filter(|&(p, _)| p != i).map(|(_, &s)| s).collect();
            let sign = if i % 2 == 0 { Scalar::one() } else { -Scalar::one() };
            axpy(&mut acc, &sign, &module.act(set[i], &phi.eval(&rest)));
        }
        for i in 0..=k {
            for j in i + 1..=k {
                let sign = if (i + j) % 2 == 0 { Scalar::one() } else { -Scalar::one() };
                let rest: Vec<usize> =
                    set.iter().enumerate().filter(|&(p, _)| p != i && p != j).map(|(_, &s)| s).collect();
                for l in 0..n {
                    let c = alg.c(set[i], set[j], l);
                    if c.is_zero() {
                        continue;
                    }
                    let mut args = Vec::with_capacity(k);
                    args.push(l);
                    args.extend_from_slice(&rest);
                    axpy(&mut acc, &(&sign * c), &phi.eval(&args));
                }
            }
        }
        values.push(acc);
    }
    CECochain { degree: k + 1, module: module.clone(), values }
}

/// Matrix of `d: C^k → C^{k+1}` in the flattened (index set, module basis) coordinates.
pub fn ce_differential_matrix(module: &Arc<LieModule>, degree: usize) -> Matrix {
    let n = module.algebra.dim();
    let m = module.dim;
    let rows = index_sets(n, degree + 1).len() * m;
    let cols = index_sets(n, degree).len() * m;
    if degree == 0 {
        return Matrix::stack(module.action());
    }
    let mut mat = Matrix::zeros(rows, cols);
    for col in 0..cols {
        let mut flat = vec![Scalar::zero(); cols];
        flat[col] = Scalar::one();
        let image = ce_differential(&CECochain::from_flat(module.clone(), degree, &flat)).flatten();
        for (row, v) in image.into_iter().enumerate() {
            if !v.is_zero() {
                mat.set(row, col, v);
            }
        }
    }
    mat
}

/// `dim H^k = dim ker d_k − rank d_{k−1}` for each requested degree.
pub fn ce_cohomology_dims(module: &Arc<LieModule>, degrees: &[usize]) -> Vec<usize> {
    let n = module.algebra.dim();
    let m = module.dim;
    let rank = |k: usize| -> usize {
        if k >= n || m == 0 {
            0
        } else {
            ce_differential_matrix(module, k).rank()
        }
    };
    degrees
        .iter()
        .map(|&k| {
            if k > n {
                return 0;
            }
            let dim_ck = index_sets(n, k).len() * m;
            let below = if k == 0 { 0 } else { rank(k - 1) };
            dim_ck - rank(k) - below
        })
        .collect()
}

/// Finds `A ∈ C^0` with `dA = target` for a degree-1 target.
///
/// Errors with `NotACocycle` (witness pair from `d(target)`) or with
/// `ObstructionFound` carrying the target when it is closed but not exact.
pub fn solve_coboundary(target: &CECochain) -> Result<CECochain, LieError> {
    if target.degree != 1 {
        return Err(LieError::WrongDegree { expected: 1, got: target.degree });
    }
    let d_target = ce_differential(target);
    if let Some((set, value)) = d_target
        .index_sets()
        .into_iter()
        .zip(d_target.values.iter())
        .find(|(_, v)| v.iter().any(|x| !x.is_zero()))
    {
        return Err(LieError::NotACocycle { witness: set, value: value.clone() });
    }
    let d0 = ce_differential_matrix(&target.module, 0);
    match d0.solve(&target.flatten()) {
        Some(a) => Ok(CECochain::from_flat(target.module.clone(), 0, &a)),
        None => Err(LieError::ObstructionFound { representative: target.clone() }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: i64) -> Scalar {
        Scalar::from_int(v)
    }

    fn alg(name: &str) -> Arc<LieAlgebra> {
        Arc::new(LieAlgebra::preset(name).unwrap())
    }

    /// Jacobiator straight from the definition with vector brackets.
    fn jacobiator_oracle(a: &LieAlgebra) -> bool {
        let n = a.dim();
        let e = |i: usize| (0..n).map(|k| if k == i { s(1) } else { s(0) }).collect::<Vec<_>>();
        (0..n).all(|i| {
            (0..n).all(|j| {
                (0..n).all(|k| {
                    let t1 = a.bracket(&e(i), &a.bracket(&e(j), &e(k)));
                    let t2 = a.bracket(&e(j), &a.bracket(&e(k), &e(i)));
                    let t3 = a.bracket(&e(k), &a.bracket(&e(i), &e(j)));
                    (0..n).all(|m| (&(&t1[m] + &t2[m]) + &t3[m]).is_zero())
                })
            })
        })
    }

    #[test]
    fn presets_are_valid() {
        for name in ["sl2", "so3", "h3", "aff1", "abelian:3"] {
            let a = LieAlgebra::preset(name).unwrap();
            assert!(jacobiator_oracle(&a), "{name}");
        }
        assert!(matches!(LieAlgebra::preset("e8"), Err(LieError::UnknownPreset(_))));
    }

    #[test]
    fn corrupted_sl2_constants() {
        // [e,f] = 2h is a rescaling of h, so Jacobi still holds
        let rescaled = LieAlgebra::new(
            "rescaled",
            3,
            &[(0, 1, vec![(1, s(2))]), (0, 2, vec![(2, s(-2))]), (1, 2, vec![(0, s(2))])],
        )
        .unwrap();
        assert!(jacobiator_oracle(&rescaled));
        // [h,f] = +2f breaks it
        let broken = LieAlgebra::new(
            "bad",
            3,
            &[(0, 1, vec![(1, s(2))]), (0, 2, vec![(2, s(2))]), (1, 2, vec![(0, s(1))])],
        );
        match broken {
            Err(LieError::JacobiViolation { i: 0, j: 1, k: 2, jacobiator }) => {
                assert_eq!(jacobiator, vec![s(-4), s(0), s(0)]);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn killing_forms() {
        let k = alg("sl2").killing_form();
        assert_eq!(k.matrix, Matrix::from_int_rows(&[&[8, 0, 0], &[0, 0, 4], &[0, 4, 0]]));
        assert_eq!(k.determinant, s(-128));
        assert!(k.is_semisimple);
        let h3 = alg("h3").killing_form();
        assert!(h3.matrix.is_zero());
        assert!(!h3.is_semisimple);
        assert!(!alg("abelian:2").killing_form().is_semisimple);
        assert!(alg("so3").killing_form().is_semisimple);
        assert!(!alg("aff1").killing_form().is_semisimple);
    }

    #[test]
    fn killing_form_is_invariant() {
        for name in ["sl2", "so3", "h3", "aff1"] {
            let a = alg(name);
            let k = a.killing_form().matrix;
            assert_eq!(k, k.transpose());
            let n = a.dim();
            let kf = |x: &[Scalar], y: &[Scalar]| -> Scalar {
                (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| &(&x[i] * &y[j]) * k.get(i, j)).sum()
            };
            let e = |i: usize| (0..n).map(|k| if k == i { s(1) } else { s(0) }).collect::<Vec<_>>();
            for x in 0..n {
                for y in 0..n {
                    for z in 0..n {
                        let lhs = kf(&a.bracket(&e(x), &e(y)), &e(z));
                        let rhs = kf(&e(y), &a.bracket(&e(x), &e(z)));
                        assert!((&lhs + &rhs).is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn modules_are_representations() {
        for name in ["sl2", "so3", "h3", "aff1", "abelian:3"] {
            let a = alg(name);
            let adj = LieModule::adjoint(a.clone());
            LieModule::new(a.clone(), adj.action().to_vec()).unwrap();
            LieModule::standard(a.clone()).unwrap();
        }
        let a = alg("sl2");
        let bad = vec![Matrix::identity(2), Matrix::unit(2, 0, 1), Matrix::unit(2, 1, 0)];
        assert!(matches!(LieModule::new(a, bad), Err(LieError::NotARepresentation { .. })));
    }

    #[test]
    fn differential_examples() {
        let a = alg("sl2");
        let triv = Arc::new(LieModule::trivial(a.clone()));
        let c0 = CECochain::from_values(triv.clone(), 0, vec![vec![s(5)]]);
        assert!(ce_differential(&c0).is_zero());
        let phi = CECochain::from_values(triv.clone(), 1, vec![vec![s(1)], vec![s(0)], vec![s(0)]]);
        let dphi = ce_differential(&phi);
        assert_eq!(dphi.eval(&[1, 2]), vec![s(-1)]);
    }

    #[test]
    fn d_squared_vanishes() {
        for name in ["sl2", "so3", "h3", "aff1", "abelian:3"] {
            let a = alg(name);
            for kind in ["trivial", "standard", "adjoint"] {
                let module = Arc::new(LieModule::preset(a.clone(), kind).unwrap());
                for k in 0..a.dim() {
                    let d1 = ce_differential_matrix(&module, k);
                    let d2 = ce_differential_matrix(&module, k + 1);
                    if d2.rows() > 0 && d1.rows() > 0 {
                        assert!(d2.mul(&d1).is_zero(), "{name} {kind} degree {k}");
                    }
                }
            }
        }
    }

    #[test]
    fn cohomology_dims() {
        let h1 = |name: &str, kind: &str| {
            let module = Arc::new(LieModule::preset(alg(name), kind).unwrap());
            ce_cohomology_dims(&module, &[1])[0]
        };
        assert_eq!(h1("sl2", "trivial"), 0);
        assert_eq!(h1("sl2", "standard"), 0);
        assert_eq!(h1("sl2", "adjoint"), 0);
        assert_eq!(h1("aff1", "trivial"), 1);
        assert_eq!(h1("h3", "trivial"), 2);
        // Euler characteristic of the trivial complex vanishes
        let m = Arc::new(LieModule::trivial(alg("h3")));
        let dims = ce_cohomology_dims(&m, &[0, 1, 2, 3]);
        assert_eq!(dims, vec![1, 2, 2, 1]);
    }

    #[test]
    fn coboundary_solver_paths() {
        let a = alg("sl2");
        let adj = Arc::new(LieModule::adjoint(a.clone()));
        let a0 = CECochain::from_values(adj.clone(), 0, vec![vec![s(3), s(-1), s(2)]]);
        let target = ce_differential(&a0);
        let sol = solve_coboundary(&target).unwrap();
        assert_eq!(ce_differential(&sol), target);

        let ab = alg("abelian:2");
        let triv = Arc::new(LieModule::trivial(ab));
        let e1 = CECochain::from_values(triv, 1, vec![vec![s(1)], vec![s(0)]]);
        assert!(matches!(solve_coboundary(&e1), Err(LieError::ObstructionFound { .. })));

        let striv = Arc::new(LieModule::trivial(a));
        let h_star = CECochain::from_values(striv, 1, vec![vec![s(1)], vec![s(0)], vec![s(0)]]);
        match solve_coboundary(&h_star) {
            Err(LieError::NotACocycle { witness, .. }) => assert_eq!(witness, vec![1, 2]),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn subset_positions() {
        let a = alg("abelian:5");
        let m = Arc::new(LieModule::trivial(a));
        let c = CECochain::zero(m, 3);
        for (p, set) in c.index_sets().iter().enumerate() {
            assert_eq!(c.position(set), p);
        }
    }
}
