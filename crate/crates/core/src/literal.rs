//! JSON literal forms of the exact objects.
//!
//! A polynomial is a list of terms `{"coeff": "p/q", "exps": [a_1, …, a_n]}`,
//! a polynomial matrix is a list of rows of polynomials, and a constant
//! matrix is a list of rows of scalar strings.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lie::CECochain;
use crate::linalg::Matrix;
use crate::multivector::Multivector;
use crate::poly::{Monomial, Poly};
use crate::polymatrix::PolyMatrix;
use crate::scalar::{Scalar, ScalarParseError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LiteralError {
    #[error("bad scalar `{text}`: {source}")]
    Scalar { text: String, source: ScalarParseError },
    #[error("exponent vector has length {got}, expected {expected}")]
    ExponentLength { expected: usize, got: usize },
    #[error("matrix is not square")]
    NotSquare,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermLiteral {
    pub coeff: String,
    pub exps: Vec<u32>,
}

pub type PolyLiteral = Vec<TermLiteral>;
pub type PolyMatrixLiteral = Vec<Vec<PolyLiteral>>;
pub type MatrixLiteral = Vec<Vec<String>>;

pub fn parse_scalar(text: &str) -> Result<Scalar, LiteralError> {
    text.parse().map_err(|source| LiteralError::Scalar { text: text.to_string(), source })
}

pub fn poly_from_literal(lit: &[TermLiteral], nvars: usize) -> Result<Poly, LiteralError> {
    let mut p = Poly::zero(nvars);
    for t in lit {
        if t.exps.len() != nvars {
            return Err(LiteralError::ExponentLength { expected: nvars, got: t.exps.len() });
        }
        p.add_term(Monomial::new(t.exps.clone()), &parse_scalar(&t.coeff)?);
    }
    Ok(p)
}

/// Terms in increasing monomial order.
pub fn poly_to_literal(p: &Poly) -> PolyLiteral {
    p.terms().map(|(m, c)| TermLiteral { coeff: c.to_string(), exps: m.exps().to_vec() }).collect()
}

pub fn matrix_from_literal(lit: &[Vec<String>]) -> Result<Matrix, LiteralError> {
    let n = lit.len();
    if lit.iter().any(|r| r.len() != n) {
        return Err(LiteralError::NotSquare);
    }
    let rows = lit.iter().map(|r| r.iter().map(|s| parse_scalar(s)).collect()).collect::<Result<_, _>>()?;
    Ok(Matrix::from_rows(rows))
}

pub fn matrix_to_literal(m: &Matrix) -> MatrixLiteral {
    m.to_rows().iter().map(|r| r.iter().map(Scalar::to_string).collect()).collect()
}

pub fn polymatrix_from_literal(lit: &[Vec<PolyLiteral>], nvars: usize) -> Result<PolyMatrix, LiteralError> {
    let n = lit.len();
    if lit.iter().any(|r| r.len() != n) {
        return Err(LiteralError::NotSquare);
    }
    let entries = lit.iter().flatten().map(|p| poly_from_literal(p, nvars)).collect::<Result<_, _>>()?;
    Ok(PolyMatrix::from_entries(n, nvars, entries))
}

pub fn polymatrix_to_literal(m: &PolyMatrix) -> PolyMatrixLiteral {
    (0..m.size()).map(|i| (0..m.size()).map(|j| poly_to_literal(m.get(i, j))).collect()).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultivectorTermLiteral {
    pub indices: Vec<usize>,
    pub coeff: PolyLiteral,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultivectorLiteral {
    pub grade: usize,
    pub components: Vec<MultivectorTermLiteral>,
}

pub fn multivector_to_literal(t: &Multivector) -> MultivectorLiteral {
    MultivectorLiteral {
        grade: t.grade(),
        components: t
            .components()
            .map(|(idx, p)| MultivectorTermLiteral { indices: idx.clone(), coeff: poly_to_literal(p) })
            .collect(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CochainTermLiteral {
    pub indices: Vec<usize>,
    pub value: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CochainLiteral {
    pub degree: usize,
    pub module_dim: usize,
    /// Nonzero components only.
    pub components: Vec<CochainTermLiteral>,
}

pub fn cochain_to_literal(c: &CECochain) -> CochainLiteral {
    CochainLiteral {
        degree: c.degree(),
        module_dim: c.module().dim(),
        components: c
            .index_sets()
            .into_iter()
            .zip(c.values())
            .filter(|(_, v)| v.iter().any(|x| !num_traits::Zero::is_zero(x)))
            .map(|(indices, v)| CochainTermLiteral { indices, value: v.iter().map(Scalar::to_string).collect() })
            .collect(),
    }
}
