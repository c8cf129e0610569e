//! Square matrices with polynomial entries, optionally truncated at a degree cap.

use std::fmt;

use num_traits::One;

use crate::linalg::Matrix;
use crate::poly::Poly;
use crate::scalar::Scalar;

/// Combined cap of two operands: the smaller one, `None` meaning uncapped.
pub fn min_cap(a: Option<u32>, b: Option<u32>) -> Option<u32> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PolyMatrix {
    size: usize,
    nvars: usize,
    entries: Vec<Poly>,
    cap: Option<u32>,
}

impl PolyMatrix {
    pub fn zero(size: usize, nvars: usize) -> Self {
        PolyMatrix { size, nvars, entries: vec![Poly::zero(nvars); size * size], cap: None }
    }

    pub fn identity(size: usize, nvars: usize) -> Self {
        PolyMatrix::from_constant(&Matrix::identity(size), nvars)
    }

    pub fn from_constant(m: &Matrix, nvars: usize) -> Self {
        assert!(m.is_square(), "polynomial matrices are square");
        let size = m.rows();
        let entries = (0..size * size)
            .map(|k| Poly::constant(nvars, m.get(k / size, k % size).clone()))
            .collect();
        PolyMatrix { size, nvars, entries, cap: None }
    }

    /// Row-major entries.
    pub fn from_entries(size: usize, nvars: usize, entries: Vec<Poly>) -> Self {
        assert_eq!(entries.len(), size * size, "wrong number of matrix entries");
        assert!(entries.iter().all(|p| p.nvars() == nvars), "entry variable-count mismatch");
        PolyMatrix { size, nvars, entries, cap: None }
    }

    /// `p · m` for a constant matrix `m`.
    pub fn poly_times_constant(p: &Poly, m: &Matrix) -> Self {
        PolyMatrix::from_constant(m, p.nvars()).scale_poly(p)
    }

    /// Sets the cap and truncates accordingly.
    pub fn with_cap(mut self, cap: Option<u32>) -> Self {
        if let Some(c) = cap {
            for e in &mut self.entries {
                *e = e.truncate(c);
            }
        }
        self.cap = cap;
        self
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn cap(&self) -> Option<u32> {
        self.cap
    }

    pub fn get(&self, i: usize, j: usize) -> &Poly {
        &self.entries[i * self.size + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Poly) {
        assert_eq!(p.nvars(), self.nvars, "entry variable-count mismatch");
        self.entries[i * self.size + j] = p;
    }

    pub fn entries(&self) -> &[Poly] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Poly::is_zero)
    }

    pub fn degree(&self) -> Option<u32> {
        self.entries.iter().filter_map(Poly::degree).max()
    }

    pub fn map(&self, f: impl Fn(&Poly) -> Poly) -> PolyMatrix {
        PolyMatrix {
            size: self.size,
            nvars: self.nvars,
            entries: self.entries.iter().map(f).collect(),
            cap: self.cap,
        }
    }

    fn zip(&self, other: &PolyMatrix, f: impl Fn(&Poly, &Poly) -> Poly) -> PolyMatrix {
        self.check(other);
        PolyMatrix {
            size: self.size,
            nvars: self.nvars,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| f(a, b)).collect(),
            cap: min_cap(self.cap, other.cap),
        }
        .with_cap(min_cap(self.cap, other.cap))
    }

    pub fn add(&self, other: &PolyMatrix) -> PolyMatrix {
        self.zip(other, Poly::add)
    }

    pub fn sub(&self, other: &PolyMatrix) -> PolyMatrix {
        self.zip(other, Poly::sub)
    }

    pub fn neg(&self) -> PolyMatrix {
        self.map(Poly::neg)
    }

    pub fn scale(&self, factor: &Scalar) -> PolyMatrix {
        self.map(|p| p.scale(factor))
    }

    pub fn scale_poly(&self, p: &Poly) -> PolyMatrix {
        self.map(|e| e.mul_truncated(p, self.cap))
    }

    pub fn mul(&self, other: &PolyMatrix) -> PolyMatrix {
        self.check(other);
        let cap = min_cap(self.cap, other.cap);
        let n = self.size;
        let mut entries = vec![Poly::zero(self.nvars); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        entries[i * n + j].add_scaled(&a.mul_truncated(b, cap), &Scalar::one());
                    }
                }
            }
        }
        PolyMatrix { size: n, nvars: self.nvars, entries, cap }
    }

    /// `[self, other]_Lie`.
    pub fn commutator(&self, other: &PolyMatrix) -> PolyMatrix {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn trace(&self) -> Poly {
        let mut t = Poly::zero(self.nvars);
        for i in 0..self.size {
            t.add_scaled(self.get(i, i), &Scalar::one());
        }
        t
    }

    pub fn derivative(&self, var: usize) -> PolyMatrix {
        self.map(|p| p.derivative(var))
    }

    pub fn truncate(&self, cap: u32) -> PolyMatrix {
        let mut out = self.map(|p| p.truncate(cap));
        out.cap = min_cap(self.cap, Some(cap));
        out
    }

    pub fn homogeneous_part(&self, degree: u32) -> PolyMatrix {
        self.map(|p| p.homogeneous_part(degree))
    }

    pub fn constant_part(&self) -> Matrix {
        let n = self.size;
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, self.get(i, j).constant_term());
            }
        }
        m
    }

    pub fn eval(&self, point: &[Scalar]) -> Matrix {
        let n = self.size;
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, self.get(i, j).eval(point));
            }
        }
        m
    }

    pub fn conj_transpose(&self) -> PolyMatrix {
        let n = self.size;
        let mut out = self.clone();
        for i in 0..n {
            for j in 0..n {
                out.entries[j * n + i] = self.get(i, j).conj();
            }
        }
        out
    }

    /// Skew-Hermitian coefficientwise: `M* = −M` (skew-symmetric for real data).
    pub fn is_skew_hermitian(&self) -> bool {
        self.conj_transpose() == self.neg()
    }

    /// Inverse of a matrix with invertible constant term.
    ///
    /// With a cap the Neumann series is summed up to the cap. Without one the
    /// series must terminate, which happens exactly when the non-constant part
    /// `N` of `C⁻¹·M = I + N` is nilpotent; otherwise `None` is returned.
    pub fn inverse(&self) -> Option<PolyMatrix> {
        let c_inv = self.constant_part().inverse()?;
        let c_inv_poly = PolyMatrix::from_constant(&c_inv, self.nvars).with_cap(self.cap);
        let normalized = c_inv_poly.mul(self);
        let nil = normalized.sub(&PolyMatrix::identity(self.size, self.nvars));
        let neg_nil = nil.neg();
        let mut term = PolyMatrix::identity(self.size, self.nvars).with_cap(self.cap);
        let mut sum = term.clone();
        let max_terms = match self.cap {
            // each factor raises the minimal degree by at least one
            Some(cap) => cap as usize + 1,
            None => self.size + 1,
        };
        for _ in 0..max_terms {
            term = term.mul(&neg_nil);
            if term.is_zero() {
                return Some(sum.mul(&c_inv_poly));
            }
            sum = sum.add(&term);
        }
        if self.cap.is_some() {
            Some(sum.mul(&c_inv_poly))
        } else {
            None
        }
    }

    /// `exp(A)` summed up to degree `cap`; `A` must vanish at the origin.
    pub fn exp_truncated(&self, cap: u32) -> PolyMatrix {
        assert!(self.constant_part().is_zero(), "exponential needs a vanishing constant term");
        let a = self.clone().with_cap(Some(cap));
        let mut term = PolyMatrix::identity(self.size, self.nvars).with_cap(Some(cap));
        let mut sum = term.clone();
        for k in 1..=cap as i64 {
            term = term.mul(&a).scale(&Scalar::from_frac(1, k));
            if term.is_zero() {
                break;
            }
            sum = sum.add(&term);
        }
        sum
    }

    /// Re-indexes every entry into a larger variable set.
    pub fn embed(&self, nvars: usize, offset: usize) -> PolyMatrix {
        PolyMatrix {
            size: self.size,
            nvars,
            entries: self.entries.iter().map(|p| p.embed(nvars, offset)).collect(),
            cap: self.cap,
        }
    }

    pub fn restrict_leading(&self, nvars: usize) -> PolyMatrix {
        PolyMatrix {
            size: self.size,
            nvars,
            entries: self.entries.iter().map(|p| p.restrict_leading(nvars)).collect(),
            cap: self.cap,
        }
    }

    fn check(&self, other: &PolyMatrix) {
        assert_eq!(self.size, other.size, "matrix size mismatch");
        assert_eq!(self.nvars, other.nvars, "matrix variable-count mismatch");
    }
}

impl fmt::Debug for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> = (0..self.size)
            .map(|i| (0..self.size).map(|j| self.get(i, j).to_string()).collect())
            .collect();
        write!(f, "{rows:?}")?;
        if let Some(c) = self.cap {
            write!(f, " mod deg>{c}")?;
        }
        Ok(())
    }
}
