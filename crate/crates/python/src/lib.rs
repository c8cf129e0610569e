//! Python bindings. Polynomials travel as lists of `(coeff, exps)` tuples,
//! with coefficients as exact strings such as `"-3/4"` or `"1/2 i"`.

use std::sync::Arc;

use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;

use pvk_core::lie::{ce_cohomology_dims, LieAlgebra as CoreAlgebra, LieModule};
use pvk_core::literal::parse_scalar;
use pvk_core::normalize::{
    formal_normalize, gauge_transform, obstruction_components, trace_word_invariants as core_trace_words, GaugeTransform,
    NormalizeError, NormalizeOptions,
};
use pvk_core::poisson::{poisson_bracket, poisson_cohomology_dims, PoissonStructure as CorePoisson};
use pvk_core::pvb::{canonical_bundle, characteristic_class, mc_residual, ConnectionData, GlCocycle};
use pvk_core::{Matrix, Monomial, Poly, PolyMatrix};

create_exception!(pvk, PvkError, PyException);
create_exception!(pvk, ObstructionError, PvkError);

type Term = (String, Vec<u32>);
type PolyLit = Vec<Term>;
type PolyMatrixLit = Vec<Vec<PolyLit>>;
type BracketLit = (usize, usize, Vec<(usize, String)>);

fn err(e: impl std::fmt::Display) -> PyErr {
    PvkError::new_err(e.to_string())
}

fn poly_in(lit: &[Term], n: usize) -> PyResult<Poly> {
    let mut p = Poly::zero(n);
    for (coeff, exps) in lit {
        if exps.len() != n {
            return Err(err(format!("exponent vector {exps:?} has length {}, expected {n}", exps.len())));
        }
        p.add_term(Monomial::new(exps.clone()), &parse_scalar(coeff).map_err(err)?);
    }
    Ok(p)
}

fn poly_out(p: &Poly) -> PolyLit {
    p.terms().map(|(m, c)| (c.to_string(), m.exps().to_vec())).collect()
}

fn polymatrix_in(lit: &PolyMatrixLit, n: usize) -> PyResult<PolyMatrix> {
    let size = lit.len();
    if lit.iter().any(|r| r.len() != size) {
        return Err(err("matrix is not square"));
    }
    let entries = lit.iter().flatten().map(|p| poly_in(p, n)).collect::<PyResult<_>>()?;
    Ok(PolyMatrix::from_entries(size, n, entries))
}

fn polymatrix_out(m: &PolyMatrix) -> PolyMatrixLit {
    (0..m.size()).map(|i| (0..m.size()).map(|j| poly_out(m.get(i, j))).collect()).collect()
}

fn matrix_in(lit: &[Vec<String>]) -> PyResult<Matrix> {
    let rows = lit.iter().map(|r| r.iter().map(|s| parse_scalar(s).map_err(err)).collect()).collect::<PyResult<_>>()?;
    Ok(Matrix::from_rows(rows))
}

fn matrix_out(m: &Matrix) -> Vec<Vec<String>> {
    m.to_rows().iter().map(|r| r.iter().map(ToString::to_string).collect()).collect()
}

#[pyclass(frozen, name = "LieAlgebra")]
struct PyLieAlgebra {
    inner: Arc<CoreAlgebra>,
}

#[pymethods]
impl PyLieAlgebra {
    /// Preset algebra: sl2, so3, h3, aff1 or abelian:<n>.
    #[staticmethod]
    fn preset(name: &str) -> PyResult<Self> {
        Ok(PyLieAlgebra { inner: Arc::new(CoreAlgebra::preset(name).map_err(err)?) })
    }

    /// Algebra from `(i, j, [(k, coeff), ...])` entries meaning `[e_i, e_j] = Σ coeff e_k`.
    #[staticmethod]
    fn from_brackets(dim: usize, brackets: Vec<BracketLit>) -> PyResult<Self> {
        let entries = brackets
            .into_iter()
            .map(|(i, j, terms)| {
                let terms = terms.into_iter().map(|(k, c)| Ok((k, parse_scalar(&c).map_err(err)?))).collect::<PyResult<_>>()?;
                Ok((i, j, terms))
            })
            .collect::<PyResult<Vec<_>>>()?;
        Ok(PyLieAlgebra { inner: Arc::new(CoreAlgebra::new("custom", dim, &entries).map_err(err)?) })
    }

    #[getter]
    fn name(&self) -> String {
        self.inner.name().to_string()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn killing_determinant(&self) -> String {
        self.inner.killing_form().determinant.to_string()
    }

    fn is_semisimple(&self) -> bool {
        self.inner.killing_form().is_semisimple
    }

    /// Dimensions of `H^k(g; M)` for a preset module.
    fn ce_dims(&self, module: &str, degrees: Vec<usize>) -> PyResult<Vec<usize>> {
        let m = Arc::new(LieModule::preset(self.inner.clone(), module).map_err(err)?);
        Ok(ce_cohomology_dims(&m, &degrees))
    }

    fn __repr__(&self) -> String {
        format!("LieAlgebra({:?}, dim={})", self.inner.name(), self.inner.dim())
    }
}

#[pyclass(frozen, name = "PoissonStructure")]
struct PyPoisson {
    inner: Arc<CorePoisson>,
}

#[pymethods]
impl PyPoisson {
    #[staticmethod]
    fn lie_poisson(algebra: &PyLieAlgebra) -> Self {
        PyPoisson { inner: Arc::new(CorePoisson::from_lie_algebra(algebra.inner.clone())) }
    }

    #[getter]
    fn nvars(&self) -> usize {
        self.inner.nvars()
    }

    fn is_linear(&self) -> bool {
        self.inner.is_linear()
    }

    fn bracket(&self, f: PolyLit, g: PolyLit) -> PyResult<PolyLit> {
        let n = self.inner.nvars();
        Ok(poly_out(&poisson_bracket(&self.inner, &poly_in(&f, n)?, &poly_in(&g, n)?)))
    }

    fn cohomology_dims(&self, cap: u32, grades: Vec<usize>) -> PyResult<Vec<usize>> {
        poisson_cohomology_dims(&self.inner, cap, &grades).map_err(err)
    }

    /// Components of the modular vector field.
    fn modular_class(&self) -> Vec<PolyLit> {
        let xi = canonical_bundle(self.inner.clone());
        let class = pvk_core::pvb::class_multivector(&xi, &GlCocycle::trace());
        class.field_components().iter().map(poly_out).collect()
    }
}

#[pyclass(frozen, name = "Bundle")]
struct PyBundle {
    inner: ConnectionData,
}

#[pymethods]
impl PyBundle {
    /// Bundle of a preset module: trivial, standard or adjoint.
    #[staticmethod]
    fn from_representation(poisson: &PyPoisson, module: &str) -> PyResult<Self> {
        let alg = poisson.inner.lie_algebra().map_err(err)?;
        let m = LieModule::preset(alg, module).map_err(err)?;
        Ok(PyBundle { inner: ConnectionData::from_representation(poisson.inner.clone(), &m).map_err(err)? })
    }

    #[staticmethod]
    #[pyo3(signature = (poisson, xi, cap=None))]
    fn from_components(poisson: &PyPoisson, xi: Vec<PolyMatrixLit>, cap: Option<u32>) -> PyResult<Self> {
        let n = poisson.inner.nvars();
        let comps = xi.iter().map(|m| polymatrix_in(m, n)).collect::<PyResult<Vec<_>>>()?;
        let rank = comps.first().map_or(0, PolyMatrix::size);
        Ok(PyBundle { inner: ConnectionData::new(poisson.inner.clone(), rank, comps, cap).map_err(err)? })
    }

    #[getter]
    fn rank(&self) -> usize {
        self.inner.rank()
    }

    fn components(&self) -> Vec<PolyMatrixLit> {
        self.inner.components().iter().map(polymatrix_out).collect()
    }

    fn is_flat(&self) -> bool {
        mc_residual(&self.inner).is_zero()
    }

    /// `Φ·Ξ` for a polynomial matrix `Φ` with invertible constant part.
    #[pyo3(signature = (phi, cap=None))]
    fn gauge(&self, phi: PolyMatrixLit, cap: Option<u32>) -> PyResult<Self> {
        let phi = polymatrix_in(&phi, self.inner.nvars())?.with_cap(cap);
        let phi = GaugeTransform::new(phi).map_err(err)?;
        Ok(PyBundle { inner: gauge_transform(&self.inner, &phi).map_err(err)? })
    }

    /// Returns `(phi, xi0)`; raises `ObstructionError` carrying the degree and cocycle matrices.
    #[pyo3(signature = (cap, force=false))]
    fn normalize(&self, cap: u32, force: bool) -> PyResult<(PolyMatrixLit, Vec<Vec<Vec<String>>>)> {
        match formal_normalize(&self.inner, cap, NormalizeOptions { force }) {
            Ok(n) => Ok((polymatrix_out(n.phi.matrix()), n.xi0.iter().map(matrix_out).collect())),
            Err(NormalizeError::ObstructionFound { r, cocycle }) => {
                let comps: Vec<PolyMatrixLit> = obstruction_components(&cocycle, r, self.inner.rank(), self.inner.nvars())
                    .iter()
                    .map(polymatrix_out)
                    .collect();
                Err(ObstructionError::new_err((r, comps)))
            }
            Err(e) => Err(err(e)),
        }
    }

    /// `(closed, exact_up_to_cap)` for the class of a trace cocycle.
    #[pyo3(signature = (cocycle="tr", cap=3))]
    fn char_class(&self, cocycle: &str, cap: u32) -> PyResult<(bool, bool)> {
        let c = GlCocycle::by_name(cocycle).ok_or_else(|| err(format!("unknown cocycle `{cocycle}`")))?;
        let class = characteristic_class(&self.inner, &c, cap).map_err(err)?;
        Ok((class.closed, class.exact_up_to_cap()))
    }
}

/// Sorted traces of words of length up to `max_len`.
#[pyfunction]
fn trace_word_invariants(matrices: Vec<Vec<Vec<String>>>, max_len: usize) -> PyResult<Vec<String>> {
    let ms = matrices.iter().map(|m| matrix_in(m)).collect::<PyResult<Vec<_>>>()?;
    Ok(core_trace_words(&ms, max_len).iter().map(ToString::to_string).collect())
}

#[pymodule]
fn pvk(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyLieAlgebra>()?;
    m.add_class::<PyPoisson>()?;
    m.add_class::<PyBundle>()?;
    m.add_function(wrap_pyfunction!(trace_word_invariants, m)?)?;
    m.add("PvkError", m.py().get_type::<PvkError>())?;
    m.add("ObstructionError", m.py().get_type::<ObstructionError>())?;
    Ok(())
}
