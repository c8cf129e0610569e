//! Alternating multivector fields with polynomial (or polynomial-matrix) coefficients.
//!
//! A grade-`k` multivector is stored through its components on strictly
//! increasing index sets `i_1 < … < i_k`; `T(dx_{i_1}, …, dx_{i_k})` is the
//! component on that set. Antisymmetry is therefore structural. Only nonzero
//! components are kept.

use std::collections::BTreeMap;
use std::fmt;


use crate::error::CoreError;
use crate::poly::Poly;
use crate::polymatrix::PolyMatrix;
use crate::scalar::Scalar;

/// Degree truncation of polynomial-coefficient objects.
pub trait Truncate {
    /// Drops every monomial of total degree above `cap`.
    fn truncate(&self, cap: u32) -> Self;
}

impl Truncate for Poly {
    fn truncate(&self, cap: u32) -> Self {
        Poly::truncate(self, cap)
    }
}

impl Truncate for PolyMatrix {
    fn truncate(&self, cap: u32) -> Self {
        PolyMatrix::truncate(self, cap)
    }
}

/// Coefficient ring of a multivector: scalar polynomials or polynomial matrices.
pub trait Coefficient: Clone + PartialEq + fmt::Debug + Truncate {
    type Shape: Clone + PartialEq + fmt::Debug;

    fn shape(&self) -> Self::Shape;
    fn zero_of(nvars: usize, shape: &Self::Shape) -> Self;
    fn nvars(&self) -> usize;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn scale(&self, factor: &Scalar) -> Self;
    fn scale_poly(&self, p: &Poly) -> Self;
    fn derivative(&self, var: usize) -> Self;
    fn degree(&self) -> Option<u32>;

    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }
}

impl Coefficient for Poly {
    type Shape = ();

    fn shape(&self) {}
    fn zero_of(nvars: usize, _: &()) -> Self {
        Poly::zero(nvars)
    }
    fn nvars(&self) -> usize {
        Poly::nvars(self)
    }
    fn is_zero(&self) -> bool {
        Poly::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        Poly::add(self, other)
    }
    fn neg(&self) -> Self {
        Poly::neg(self)
    }
    fn scale(&self, factor: &Scalar) -> Self {
        Poly::scale(self, factor)
    }
    fn scale_poly(&self, p: &Poly) -> Self {
        self.mul(p)
    }
    fn derivative(&self, var: usize) -> Self {
        Poly::derivative(self, var)
    }
    fn degree(&self) -> Option<u32> {
        Poly::degree(self)
    }
}

impl Coefficient for PolyMatrix {
    type Shape = usize;

    fn shape(&self) -> usize {
        self.size()
    }
    fn zero_of(nvars: usize, size: &usize) -> Self {
        PolyMatrix::zero(*size, nvars)
    }
    fn nvars(&self) -> usize {
        PolyMatrix::nvars(self)
    }
    fn is_zero(&self) -> bool {
        PolyMatrix::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        PolyMatrix::add(self, other)
    }
    fn neg(&self) -> Self {
        PolyMatrix::neg(self)
    }
    fn scale(&self, factor: &Scalar) -> Self {
        PolyMatrix::scale(self, factor)
    }
    fn scale_poly(&self, p: &Poly) -> Self {
        PolyMatrix::scale_poly(self, p)
    }
    fn derivative(&self, var: usize) -> Self {
        PolyMatrix::derivative(self, var)
    }
    fn degree(&self) -> Option<u32> {
        PolyMatrix::degree(self)
    }
}

/// Sorts distinct indices, returning the permutation sign; `None` on a repeat.
pub fn sort_with_sign(indices: &[usize]) -> Option<(Vec<usize>, i64)> {
    let mut v = indices.to_vec();
    let mut sign = 1;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
        if j > 0 && v[j - 1] == v[j] {
            return None;
        }
    }
    Some((v, sign))
}

/// Strictly increasing `k`-subsets of `0..n` in lexicographic order.
pub fn index_sets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        rec(0, n, k, &mut Vec::with_capacity(k), &mut out);
    }
    out
}

#[derive(Clone, PartialEq)]
pub struct MultiVector<C: Coefficient> {
    grade: usize,
    nvars: usize,
    shape: C::Shape,
    comps: BTreeMap<Vec<usize>, C>,
}

/// Scalar-valued multivector field.
pub type Multivector = MultiVector<Poly>;
/// `gl(m)`-valued multivector field.
pub type MatrixMultivector = MultiVector<PolyMatrix>;

impl<C: Coefficient> MultiVector<C> {
    pub fn zero(grade: usize, nvars: usize, shape: C::Shape) -> Self {
        MultiVector { grade, nvars, shape, comps: BTreeMap::new() }
    }

    /// Collects components on arbitrary (unsorted) index tuples, antisymmetrizing.
    pub fn from_components<I>(grade: usize, nvars: usize, shape: C::Shape, comps: I) -> Self
    where
        I: IntoIterator<Item = (Vec<usize>, C)>,
    {
        let mut mv = MultiVector::zero(grade, nvars, shape);
        for (idx, c) in comps {
            mv.add_component(&idx, &c);
        }
        mv
    }

    pub fn grade(&self) -> usize {
        self.grade
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn shape(&self) -> &C::Shape {
        &self.shape
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn components(&self) -> impl Iterator<Item = (&Vec<usize>, &C)> {
        self.comps.iter()
    }

    pub fn zero_coefficient(&self) -> C {
        C::zero_of(self.nvars, &self.shape)
    }

    /// `T(dx_{i_1}, …, dx_{i_k})` for any index tuple.
    pub fn component(&self, indices: &[usize]) -> C {
        assert_eq!(indices.len(), self.grade, "wrong number of indices");
        match sort_with_sign(indices) {
            None => self.zero_coefficient(),
            Some((sorted, sign)) => match self.comps.get(&sorted) {
                None => self.zero_coefficient(),
                Some(c) if sign > 0 => c.clone(),
                Some(c) => c.neg(),
            },
        }
    }

    /// Adds `c` on the (possibly unsorted) index tuple.
    pub fn add_component(&mut self, indices: &[usize], c: &C) {
        assert_eq!(indices.len(), self.grade, "wrong number of indices");
        assert!(indices.iter().all(|&i| i < self.nvars), "index out of range");
        if c.is_zero() {
            return;
        }
        let Some((sorted, sign)) = sort_with_sign(indices) else {
            return;
        };
        let c = if sign > 0 { c.clone() } else { c.neg() };
        let updated = match self.comps.remove(&sorted) {
            Some(old) => old.add(&c),
            None => c,
        };
        if !updated.is_zero() {
            self.comps.insert(sorted, updated);
        }
    }

    pub fn map(&self, f: impl Fn(&C) -> C) -> Self {
        let mut out = MultiVector::zero(self.grade, self.nvars, self.shape.clone());
        for (idx, c) in &self.comps {
            out.add_component(idx, &f(c));
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check(other);
        let mut out = self.clone();
        for (idx, c) in &other.comps {
            out.add_component(idx, c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.map(C::neg)
    }

    pub fn scale(&self, factor: &Scalar) -> Self {
        self.map(|c| c.scale(factor))
    }

    pub fn scale_poly(&self, p: &Poly) -> Self {
        self.map(|c| c.scale_poly(p))
    }

    pub fn degree(&self) -> Option<u32> {
        self.comps.values().filter_map(C::degree).max()
    }

    /// `X(c) = Σ_j X^j ∂_j c` applied to every component.
    pub fn directional(&self, field: &Multivector) -> Self {
        self.map(|c| apply_field(field, c))
    }

    fn check(&self, other: &Self) {
        assert_eq!(self.grade, other.grade, "multivector grade mismatch");
        assert_eq!(self.nvars, other.nvars, "multivector variable-count mismatch");
    }
}

impl<C: Coefficient> Truncate for MultiVector<C> {
    fn truncate(&self, cap: u32) -> Self {
        self.map(|c| c.truncate(cap))
    }
}

impl<C: Coefficient> fmt::Debug for MultiVector<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiVector<grade {}>", self.grade)?;
        f.debug_map().entries(self.comps.iter()).finish()
    }
}

impl Multivector {
    pub fn function(f: Poly) -> Self {
        let n = f.nvars();
        MultiVector::from_components(0, n, (), [(Vec::new(), f)])
    }

    /// Vector field `Σ_j v_j ∂_j`.
    pub fn vector_field(components: Vec<Poly>) -> Self {
        let n = components.len();
        MultiVector::from_components(1, n, (), components.into_iter().enumerate().map(|(j, p)| (vec![j], p)))
    }

    /// Components `[v_1, …, v_n]` of a grade-1 field.
    pub fn field_components(&self) -> Vec<Poly> {
        assert_eq!(self.grade, 1, "not a vector field");
        (0..self.nvars).map(|j| self.component(&[j])).collect()
    }

    pub fn is_real(&self) -> bool {
        self.comps.values().all(Poly::is_real)
    }

    /// Re-indexes into `nvars` variables starting at `offset`.
    pub fn embed(&self, nvars: usize, offset: usize) -> Self {
        MultiVector::from_components(
            self.grade,
            nvars,
            (),
            self.comps
                .iter()
                .map(|(idx, p)| (idx.iter().map(|i| i + offset).collect(), p.embed(nvars, offset))),
        )
    }
}

/// `X(c)` for a vector field `X`.
pub fn apply_field<C: Coefficient>(field: &Multivector, c: &C) -> C {
    let mut acc = C::zero_of(c.nvars(), &c.shape());
    for (idx, xj) in field.components() {
        let d = c.derivative(idx[0]);
        if !d.is_zero() {
            acc = acc.add(&d.scale_poly(xj));
        }
    }
    acc
}

/// Schouten–Nijenhuis bracket of scalar multivector fields.
///
/// Normalized by `[X, f] = X(f)` and `[X, Y] = XY − YX` for vector fields;
/// the grade of the result is `p + q − 1` (two functions bracket to zero).
pub fn schouten_bracket(a: &Multivector, b: &Multivector) -> Result<Multivector, CoreError> {
    if a.nvars != b.nvars {
        return Err(CoreError::VarCountMismatch(a.nvars, b.nvars));
    }
    let n = a.nvars;
    let (p, q) = (a.grade, b.grade);
    if p + q == 0 {
        return Ok(MultiVector::zero(0, n, ()));
    }
    let mut out = MultiVector::zero(p + q - 1, n, ());
    for (ia, ca) in &a.comps {
        for (jb, cb) in &b.comps {
            for var in 0..n {
                // right derivative of θ_I by θ_var, then ∂_var of the second factor
                if let Some(pos) = ia.iter().position(|&i| i == var) {
                    let db = cb.derivative(var);
                    if !db.is_zero() {
                        let sign = if (p - 1 - pos) % 2 == 0 { 1 } else { -1 };
                        let mut idx: Vec<usize> = ia.iter().copied().filter(|&i| i != var).collect();
                        idx.extend_from_slice(jb);
                        out.add_component(&idx, &ca.mul(&db).scale(&Scalar::from_int(sign)));
                    }
                }
                // ∂_var of the first factor, left derivative of θ_J by θ_var
                if let Some(pos) = jb.iter().position(|&j| j == var) {
                    let da = ca.derivative(var);
                    if !da.is_zero() {
                        let sign = if pos % 2 == 0 { -1 } else { 1 };
                        let mut idx = ia.clone();
                        idx.extend(jb.iter().copied().filter(|&j| j != var));
                        out.add_component(&idx, &da.mul(cb).scale(&Scalar::from_int(sign)));
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Lie derivative of a (scalar or matrix valued) multivector along a vector field.
pub fn lie_derivative<C: Coefficient>(field: &Multivector, t: &MultiVector<C>) -> MultiVector<C> {
    assert_eq!(field.grade, 1, "Lie derivative along a non-vector field");
    assert_eq!(field.nvars, t.nvars, "variable-count mismatch");
    let xs = field.field_components();
    let mut out = t.directional(field);
    // L_X ∂_i = −Σ_j (∂_i X^j) ∂_j
    for (idx, c) in &t.comps {
        for (pos, &i) in idx.iter().enumerate() {
            for (j, xj) in xs.iter().enumerate() {
                let d = xj.derivative(i);
                if d.is_zero() {
                    continue;
                }
                let mut replaced = idx.clone();
                replaced[pos] = j;
                out.add_component(&replaced, &c.scale_poly(&d).neg());
            }
        }
    }
    out
}

/// `L_X f = X(f)` on functions.
pub fn lie_derivative_poly(field: &Multivector, f: &Poly) -> Poly {
    apply_field(field, f)
}

/// Entrywise `L_X` on a polynomial matrix.
pub fn lie_derivative_matrix(field: &Multivector, m: &PolyMatrix) -> PolyMatrix {
    apply_field(field, m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn x(n: usize, i: usize) -> Poly {
        Poly::var(n, i)
    }

    fn int(n: usize, v: i64) -> Poly {
        Poly::constant(n, Scalar::from_int(v))
    }

    fn bivector(n: usize, comps: Vec<(usize, usize, Poly)>) -> Multivector {
        MultiVector::from_components(2, n, (), comps.into_iter().map(|(i, j, p)| (vec![i, j], p)))
    }

    fn pi_sl2() -> Multivector {
        bivector(
            3,
            vec![
                (0, 1, x(3, 1).scale(&Scalar::from_int(2))),
                (0, 2, x(3, 2).scale(&Scalar::from_int(-2))),
                (1, 2, x(3, 0)),
            ],
        )
    }

    #[test]
    fn sort_sign() {
        assert_eq!(sort_with_sign(&[2, 0, 1]), Some((vec![0, 1, 2], 1)));
        assert_eq!(sort_with_sign(&[1, 0]), Some((vec![0, 1], -1)));
        assert_eq!(sort_with_sign(&[1, 1]), None);
        assert_eq!(index_sets(4, 2).len(), 6);
    }

    #[test]
    fn constant_fields_commute() {
        let dx = Multivector::vector_field(vec![int(2, 1), int(2, 0)]);
        let dy = Multivector::vector_field(vec![int(2, 0), int(2, 1)]);
        assert!(schouten_bracket(&dx, &dy).unwrap().is_zero());
    }

    #[test]
    fn vector_field_on_function_and_lie_bracket() {
        let n = 2;
        let xdx = Multivector::vector_field(vec![x(n, 0), Poly::zero(n)]);
        let f = Multivector::function(x(n, 0).pow(2).mul(&x(n, 1)));
        let bracket = schouten_bracket(&xdx, &f).unwrap();
        assert_eq!(bracket.component(&[]), x(n, 0).pow(2).mul(&x(n, 1)).scale(&Scalar::from_int(2)));
        // [x∂x, y∂x] = −y∂x
        let ydx = Multivector::vector_field(vec![x(n, 1), Poly::zero(n)]);
        let b = schouten_bracket(&xdx, &ydx).unwrap();
        assert_eq!(b, Multivector::vector_field(vec![x(n, 1).neg(), Poly::zero(n)]));
    }

    #[test]
    fn sl2_bivector_is_poisson() {
        assert!(schouten_bracket(&pi_sl2(), &pi_sl2()).unwrap().is_zero());
    }

    #[test]
    fn flipped_sl2_bivector_is_not_poisson() {
        let bad = bivector(
            3,
            vec![
                (0, 1, x(3, 1).scale(&Scalar::from_int(2))),
                (0, 2, x(3, 2).scale(&Scalar::from_int(2))),
                (1, 2, x(3, 0)),
            ],
        );
        assert!(!schouten_bracket(&bad, &bad).unwrap().is_zero());
    }

    #[test]
    fn lie_derivative_examples() {
        let dx = Multivector::vector_field(vec![Poly::one(1)]);
        assert_eq!(lie_derivative_poly(&dx, &x(1, 0).pow(2)), x(1, 0).scale(&Scalar::from_int(2)));
        let xdx = Multivector::vector_field(vec![x(1, 0)]);
        assert_eq!(lie_derivative(&dx, &xdx), dx);
    }

    #[test]
    fn mismatched_variable_counts_are_rejected() {
        let a = Multivector::vector_field(vec![Poly::one(1)]);
        let b = Multivector::vector_field(vec![Poly::one(2), Poly::one(2)]);
        assert_eq!(schouten_bracket(&a, &b), Err(CoreError::VarCountMismatch(1, 2)));
    }

    fn arb_poly(n: usize) -> impl Strategy<Value = Poly> {
        prop::collection::vec((prop::collection::vec(0u32..2, n), -3i64..4), 0..4).prop_map(move |t| {
            Poly::from_terms(n, t.into_iter().map(|(e, c)| (e, Scalar::from_int(c))))
        })
    }

    fn arb_mv(n: usize, grade: usize) -> impl Strategy<Value = Multivector> {
        let sets = index_sets(n, grade);
        prop::collection::vec(arb_poly(n), sets.len()).prop_map(move |coeffs| {
            MultiVector::from_components(grade, n, (), sets.clone().into_iter().zip(coeffs))
        })
    }

    fn arb_graded(n: usize) -> impl Strategy<Value = Multivector> {
        (0usize..3).prop_flat_map(move |g| arb_mv(n, g))
    }

    fn sign(e: usize) -> Scalar {
        if e.is_multiple_of(2) { Scalar::from_int(1) } else { -Scalar::from_int(1) }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn graded_antisymmetry(a in arb_graded(3), b in arb_graded(3)) {
            let (p, q) = (a.grade(), b.grade());
            prop_assume!(p + q > 0);
            let ab = schouten_bracket(&a, &b).unwrap();
            let ba = schouten_bracket(&b, &a).unwrap();
            // [a,b] = −(−1)^{(p−1)(q−1)} [b,a]
            let e = (p + 1) * (q + 1);
            prop_assert_eq!(ab, ba.scale(&-sign(e)));
        }

        #[test]
        fn graded_jacobi(a in arb_graded(3), b in arb_graded(3), c in arb_graded(3)) {
            let (p, q, r) = (a.grade(), b.grade(), c.grade());
            prop_assume!(p + q > 0 && q + r > 0 && r + p > 0);
            prop_assume!(p + q + r >= 2);
            // (−1)^{(p−1)(r−1)}[a,[b,c]] + cyclic = 0
            let t1 = schouten_bracket(&a, &schouten_bracket(&b, &c).unwrap()).unwrap()
                .scale(&sign((p + 1) * (r + 1)));
            let t2 = schouten_bracket(&b, &schouten_bracket(&c, &a).unwrap()).unwrap()
                .scale(&sign((q + 1) * (p + 1)));
            let t3 = schouten_bracket(&c, &schouten_bracket(&a, &b).unwrap()).unwrap()
                .scale(&sign((r + 1) * (q + 1)));
            prop_assert!(t1.add(&t2).add(&t3).is_zero());
        }

        #[test]
        fn lie_derivative_is_schouten_with_a_field(v in arb_mv(3, 1), t in arb_graded(3)) {
            prop_assert_eq!(lie_derivative(&v, &t), schouten_bracket(&v, &t).unwrap());
        }

        #[test]
        fn lie_derivative_leibniz(v in arb_mv(3, 1), f in arb_poly(3), t in arb_graded(3)) {
            let lhs = lie_derivative(&v, &t.scale_poly(&f));
            let rhs = t.scale_poly(&lie_derivative_poly(&v, &f)).add(&lie_derivative(&v, &t).scale_poly(&f));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn truncation_idempotent(t in arb_graded(3), cap in 0u32..3) {
            prop_assert_eq!(t.truncate(cap).truncate(cap), t.truncate(cap));
        }
    }
}
