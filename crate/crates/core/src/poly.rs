//! Sparse multivariate polynomials over [`Scalar`].

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::scalar::Scalar;

/// Exponent vector, ordered graded-lexicographically (x1 > x2 > … within a degree).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn new(exps: Vec<u32>) -> Self {
        Monomial(exps)
    }

    pub fn var(nvars: usize, var: usize) -> Self {
        let mut exps = vec![0; nvars];
        exps[var] = 1;
        Monomial(exps)
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// All monomials of total degree exactly `degree`, in ascending order.
    pub fn all_of_degree(nvars: usize, degree: u32) -> Vec<Monomial> {
        fn fill(prefix: &mut Vec<u32>, remaining: u32, slots: usize, out: &mut Vec<Monomial>) {
            if slots == 1 {
                prefix.push(remaining);
                out.push(Monomial(prefix.clone()));
                prefix.pop();
                return;
            }
            for e in 0..=remaining {
                prefix.push(e);
                fill(prefix, remaining - e, slots - 1, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        if nvars == 0 {
            if degree == 0 {
                out.push(Monomial(Vec::new()));
            }
            return out;
        }
        fill(&mut Vec::with_capacity(nvars), degree, nvars, &mut out);
        out.sort();
        out
    }

    /// All monomials of total degree at most `cap`.
    pub fn all_up_to(nvars: usize, cap: u32) -> Vec<Monomial> {
        (0..=cap).flat_map(|d| Monomial::all_of_degree(nvars, d)).collect()
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Polynomial in `nvars` variables; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Monomial, Scalar>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Poly::constant(nvars, Scalar::one())
    }

    pub fn constant(nvars: usize, c: Scalar) -> Self {
        Poly::monomial(nvars, Monomial::one(nvars), c)
    }

    pub fn var(nvars: usize, var: usize) -> Self {
        Poly::monomial(nvars, Monomial::var(nvars, var), Scalar::one())
    }

    pub fn monomial(nvars: usize, mono: Monomial, c: Scalar) -> Self {
        assert_eq!(mono.nvars(), nvars, "monomial arity mismatch");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(mono, c);
        }
        Poly { nvars, terms }
    }

    /// Builds from `(exponents, coefficient)` pairs, merging duplicates.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<u32>, Scalar)>,
    {
        let mut p = Poly::zero(nvars);
        for (exps, c) in terms {
            assert_eq!(exps.len(), nvars, "monomial arity mismatch");
            p.add_term(Monomial(exps), &c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, mono: &Monomial) -> Scalar {
        self.terms.get(mono).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn constant_term(&self) -> Scalar {
        self.coeff(&Monomial::one(self.nvars))
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    /// Lowest total degree among stored terms.
    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().next().map(Monomial::degree)
    }

    pub fn is_constant(&self) -> bool {
        self.degree().unwrap_or(0) == 0
    }

    pub fn is_homogeneous_of(&self, degree: u32) -> bool {
        self.terms.keys().all(|m| m.degree() == degree)
    }

    pub fn is_real(&self) -> bool {
        self.terms.values().all(Scalar::is_real)
    }

    pub fn add_term(&mut self, mono: Monomial, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(mono) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Poly, factor: &Scalar) {
        self.check(other);
        if factor.is_zero() {
            return;
        }
        for (m, c) in &other.terms {
            self.add_term(m.clone(), &(c * factor));
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        out.add_scaled(other, &Scalar::one());
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        out.add_scaled(other, &-Scalar::one());
        out
    }

    pub fn neg(&self) -> Poly {
        self.scale(&-Scalar::one())
    }

    pub fn scale(&self, factor: &Scalar) -> Poly {
        if factor.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * factor)).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        self.mul_truncated(other, None)
    }

    /// Product with all terms above `cap` dropped (never formed).
    pub fn mul_truncated(&self, other: &Poly, cap: Option<u32>) -> Poly {
        self.check(other);
        let mut out = Poly::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if let Some(cap) = cap {
                    if ma.degree() + mb.degree() > cap {
                        // terms are sorted by degree
                        break;
                    }
                }
                out.add_term(ma.mul(mb), &(ca * cb));
            }
        }
        out
    }

    pub fn pow(&self, exp: u32) -> Poly {
        let mut acc = Poly::one(self.nvars);
        for _ in 0..exp {
            acc = acc.mul(self);
        }
        acc
    }

    /// Partial derivative with respect to `var`.
    pub fn derivative(&self, var: usize) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[var];
            if e == 0 {
                continue;
            }
            let mut exps = m.0.clone();
            exps[var] -= 1;
            out.add_term(Monomial(exps), &(c * &Scalar::from_int(e as i64)));
        }
        out
    }

    /// Drops all monomials of total degree above `cap`.
    pub fn truncate(&self, cap: u32) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() <= cap)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn homogeneous_part(&self, degree: u32) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == degree)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Multiplies every degree-`r` term by `weight(r)`.
    pub fn scale_by_degree(&self, weight: impl Fn(u32) -> Scalar) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), &(c * &weight(m.degree())));
        }
        out
    }

    pub fn eval(&self, point: &[Scalar]) -> Scalar {
        assert_eq!(point.len(), self.nvars, "evaluation point arity mismatch");
        self.terms
            .iter()
            .map(|(m, c)| {
                let mut v = c.clone();
                for (x, &e) in point.iter().zip(&m.0) {
                    if e > 0 {
                        v *= &x.pow(e);
                    }
                }
                v
            })
            .sum()
    }

    /// Re-indexes into `nvars` variables, placing variable `i` at `offset + i`.
    pub fn embed(&self, nvars: usize, offset: usize) -> Poly {
        assert!(offset + self.nvars <= nvars, "embedding does not fit");
        let mut out = Poly::zero(nvars);
        for (m, c) in &self.terms {
            let mut exps = vec![0; nvars];
            exps[offset..offset + self.nvars].copy_from_slice(&m.0);
            out.add_term(Monomial(exps), c);
        }
        out
    }

    /// Keeps variables `0..nvars` and sets every later variable to zero.
    pub fn restrict_leading(&self, nvars: usize) -> Poly {
        let mut out = Poly::zero(nvars);
        for (m, c) in &self.terms {
            if m.0[nvars..].iter().all(|&e| e == 0) {
                out.add_term(Monomial(m.0[..nvars].to_vec()), c);
            }
        }
        out
    }

    pub fn conj(&self) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.conj())).collect(),
        }
    }

    fn check(&self, other: &Poly) {
        assert_eq!(self.nvars, other.nvars, "polynomial variable-count mismatch");
    }

    /// Canonical text with explicit variable names.
    pub fn display_with(&self, names: &[&str]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let mono: Vec<String> = m
                .0
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(v, &e)| {
                    let name = names.get(v).map(|s| s.to_string()).unwrap_or(format!("x{}", v + 1));
                    if e == 1 { name } else { format!("{name}^{e}") }
                })
                .collect();
            let negative = c.is_real() && c.re() < &num_rational::BigRational::zero();
            let magnitude = if negative { -c } else { c.clone() };
            let sep = match (idx, negative) {
                (0, false) => "",
                (0, true) => "-",
                (_, false) => " + ",
                (_, true) => " - ",
            };
            out.push_str(sep);
            let coeff_text = if magnitude.is_real() {
                magnitude.to_string()
            } else {
                format!("({magnitude})")
            };
            if mono.is_empty() {
                out.push_str(&coeff_text);
            } else if magnitude.is_one() {
                out.push_str(&mono.join("*"));
            } else {
                out.push_str(&format!("{coeff_text}*{}", mono.join("*")));
            }
        }
        out
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(&[]))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly[{}]({self})", self.nvars)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn x(n: usize, i: usize) -> Poly {
        Poly::var(n, i)
    }

    fn c(n: usize, v: i64) -> Poly {
        Poly::constant(n, Scalar::from_int(v))
    }

    #[test]
    fn truncate_examples() {
        let p = c(1, 1).add(&x(1, 0)).add(&x(1, 0).pow(5));
        assert_eq!(p.truncate(2), c(1, 1).add(&x(1, 0)));
        assert_eq!(p.truncate(2).truncate(2), p.truncate(2));
    }

    #[test]
    fn derivative_and_degree() {
        let p = x(2, 0).pow(2).mul(&x(2, 1)).scale(&Scalar::from_int(3));
        assert_eq!(p.derivative(0), x(2, 0).mul(&x(2, 1)).scale(&Scalar::from_int(6)));
        assert_eq!(p.degree(), Some(3));
        assert_eq!(Poly::zero(2).degree(), None);
    }

    #[test]
    fn canonical_display() {
        let p = x(3, 0).pow(2).add(&x(3, 1).mul(&x(3, 2)).scale(&Scalar::from_int(4))).sub(&c(3, 1));
        assert_eq!(p.to_string(), "x1^2 + 4*x2*x3 - 1");
        assert_eq!(p.display_with(&["x", "y", "z"]), "x^2 + 4*y*z - 1");
    }

    #[test]
    fn monomial_enumeration() {
        assert_eq!(Monomial::all_of_degree(3, 2).len(), 6);
        assert_eq!(Monomial::all_up_to(3, 2).len(), 10);
    }

    fn arb_poly(nvars: usize) -> impl Strategy<Value = Poly> {
        prop::collection::vec((prop::collection::vec(0u32..3, nvars), -5i64..5), 0..6)
            .prop_map(move |terms| {
                Poly::from_terms(nvars, terms.into_iter().map(|(e, c)| (e, Scalar::from_int(c))))
            })
    }

    proptest! {
        #[test]
        fn truncation_is_ring_morphism_mod_degree(p in arb_poly(2), q in arb_poly(2), cap in 0u32..5) {
            let lhs = p.mul(&q).truncate(cap);
            let rhs = p.truncate(cap).mul(&q.truncate(cap)).truncate(cap);
            prop_assert_eq!(&lhs, &rhs);
            prop_assert_eq!(p.mul_truncated(&q, Some(cap)), lhs);
        }

        #[test]
        fn degree_is_additive(p in arb_poly(3), q in arb_poly(3)) {
            if !p.is_zero() && !q.is_zero() {
                prop_assert_eq!(p.mul(&q).degree(), Some(p.degree().unwrap() + q.degree().unwrap()));
            }
        }

        #[test]
        fn product_rule(p in arb_poly(2), q in arb_poly(2)) {
            let lhs = p.mul(&q).derivative(1);
            let rhs = p.derivative(1).mul(&q).add(&p.mul(&q.derivative(1)));
            prop_assert_eq!(lhs, rhs);
        }
    }
}
