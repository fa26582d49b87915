//! Quadrature on the reference triangle and the unit edge, plus the
//! local L² projection used by the error indicator.
//!
//! Triangle rules are collapsed-coordinate tensor products of 1D Gauss
//! rules: with (u, v) in [0,1]^2 mapped to (xi, eta) = (u(1-v), v) the
//! Jacobian is (1-v), so a polynomial of total degree m needs Gauss
//! exactness m in u and m+1 in v. Point counts are not minimal, but the
//! declared exactness is guaranteed.

use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;

use crate::basis::{self, Jet, KernelTable, ShapeFn};
use crate::math;
use crate::mesh::AffineMap;

/// Largest supported exactness degree (covers 2*p_max + 2 for p well
/// beyond anything the adaptive loop reaches).
pub const MAX_RULE_DEGREE: usize = 80;

#[derive(Clone, Debug, PartialEq)]
pub enum NumericsError {
    UnsupportedDegree { requested: usize },
    SingularMassMatrix,
}

impl core::fmt::Display for NumericsError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            NumericsError::UnsupportedDegree { requested } => write!(
                f,
                "quadrature degree {requested} exceeds the supported maximum {MAX_RULE_DEGREE}"
            ),
            NumericsError::SingularMassMatrix => {
                write!(f, "local mass matrix is singular (corrupt element geometry)")
            }
        }
    }
}

impl core::error::Error for NumericsError {}

/// Points and weights of a quadrature rule; `P` is `[f64; 2]` for
/// triangle rules and `f64` for edge rules.
#[derive(Clone, Debug)]
pub struct QuadratureRule<P> {
    pub points: Vec<P>,
    pub weights: Vec<f64>,
    pub degree: usize,
}

pub type TriangleRule = QuadratureRule<[f64; 2]>;
pub type EdgeRule = QuadratureRule<f64>;

/// Gauss-Legendre nodes and weights on [-1, 1], by Newton iteration on
/// the Legendre recurrence.
fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        let mut x = math::cos(core::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5));
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_value(n, x);
            dp = d;
            let step = p / d;
            x -= step;
            if math::abs(step) < 1e-15 {
                break;
            }
        }
        nodes[n - 1 - i] = x;
        weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

/// (P_n(x), P_n'(x)) by the three-term recurrence.
fn legendre_value(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 1..n {
        let p2 = ((2 * k + 1) as f64 * x * p1 - k as f64 * p0) / (k + 1) as f64;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Gauss rule on the unit interval [0, 1], exact to `degree`.
pub fn edge_rule(degree: usize) -> Result<EdgeRule, NumericsError> {
    if degree > MAX_RULE_DEGREE {
        return Err(NumericsError::UnsupportedDegree { requested: degree });
    }
    let n = degree / 2 + 1;
    let (nodes, weights) = gauss_legendre(n);
    Ok(EdgeRule {
        points: nodes.iter().map(|&x| 0.5 * (x + 1.0)).collect(),
        weights: weights.iter().map(|&w| 0.5 * w).collect(),
        degree,
    })
}

/// Rule on the reference triangle {xi, eta >= 0, xi + eta <= 1}, exact
/// for all polynomials of total degree `degree`.
pub fn triangle_rule(degree: usize) -> Result<TriangleRule, NumericsError> {
    if degree > MAX_RULE_DEGREE {
        return Err(NumericsError::UnsupportedDegree { requested: degree });
    }
    let nu = degree / 2 + 1;
    let nv = (degree + 1) / 2 + 1;
    let (xu, wu) = gauss_legendre(nu);
    let (xv, wv) = gauss_legendre(nv);
    let mut points = Vec::with_capacity(nu * nv);
    let mut weights = Vec::with_capacity(nu * nv);
    for (&v, &wv) in xv.iter().zip(&wv) {
        let v01 = 0.5 * (v + 1.0);
        for (&u, &wu) in xu.iter().zip(&wu) {
            let u01 = 0.5 * (u + 1.0);
            points.push([u01 * (1.0 - v01), v01]);
            weights.push(0.25 * wu * wv * (1.0 - v01));
        }
    }
    Ok(TriangleRule {
        points,
        weights,
        degree,
    })
}

/// In-place Cholesky factorization of a dense symmetric matrix stored
/// row-major; returns the lower factor in the lower triangle.
pub(crate) fn cholesky_factor(a: &mut [f64], n: usize) -> Result<(), NumericsError> {
    for j in 0..n {
        let mut diag = a[j * n + j];
        for k in 0..j {
            diag -= a[j * n + k] * a[j * n + k];
        }
        if diag <= 0.0 || !diag.is_finite() {
            return Err(NumericsError::SingularMassMatrix);
        }
        let ljj = math::sqrt(diag);
        a[j * n + j] = ljj;
        for i in j + 1..n {
            let mut s = a[i * n + j];
            for k in 0..j {
                s -= a[i * n + k] * a[j * n + k];
            }
            a[i * n + j] = s / ljj;
        }
    }
    Ok(())
}

/// Solves L L^T x = b with a factor from `cholesky_factor`.
pub(crate) fn cholesky_solve(l: &[f64], n: usize, b: &mut [f64]) {
    for i in 0..n {
        let mut s = b[i];
        for k in 0..i {
            s -= l[i * n + k] * b[k];
        }
        b[i] = s / l[i * n + i];
    }
    for i in (0..n).rev() {
        let mut s = b[i];
        for k in i + 1..n {
            s -= l[k * n + i] * b[k];
        }
        b[i] = s / l[i * n + i];
    }
}

/// L²(K)-projection onto polynomials of total degree <= q, expressed in
/// the same hierarchical family the hp space uses on a degree-q element
/// (a single constant for q = 0).
pub struct Projector {
    q: usize,
    shapes: Vec<ShapeFn>,
    table: KernelTable,
    mass_chol: Vec<f64>,
    dim: usize,
    rhs_rule: TriangleRule,
}

impl Projector {
    pub fn new(q: usize) -> Result<Self, NumericsError> {
        let (shapes, table) = projection_basis(q);
        let dim = shapes.len();
        let mass_rule = triangle_rule(2 * q)?;
        let rhs_rule = triangle_rule(2 * q + 4)?;
        let mut mass = vec![0.0; dim * dim];
        for (pt, &w) in mass_rule.points.iter().zip(&mass_rule.weights) {
            let vals = basis::eval_shapes(&shapes, &table, pt[0], pt[1]);
            for i in 0..dim {
                for j in 0..=i {
                    mass[i * dim + j] += w * vals[i].v * vals[j].v;
                }
            }
        }
        for i in 0..dim {
            for j in i + 1..dim {
                mass[i * dim + j] = mass[j * dim + i];
            }
        }
        cholesky_factor(&mut mass, dim)?;
        Ok(Projector {
            q,
            shapes,
            table,
            mass_chol: mass,
            dim,
            rhs_rule,
        })
    }

    pub fn degree(&self) -> usize {
        self.q
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Projects a physical-coordinate function on the element described
    /// by `map`. The reference mass matrix is reused: the physical mass
    /// is `det * M_ref`, so the determinant cancels against the
    /// right-hand side.
    pub fn project(
        &self,
        f: &dyn Fn(f64, f64) -> f64,
        map: &AffineMap,
    ) -> Result<LocalPolynomial, NumericsError> {
        let mut rhs = vec![0.0; self.dim];
        for (pt, &w) in self.rhs_rule.points.iter().zip(&self.rhs_rule.weights) {
            let x = map.to_physical(*pt);
            let fv = f(x[0], x[1]);
            let vals = basis::eval_shapes(&self.shapes, &self.table, pt[0], pt[1]);
            for i in 0..self.dim {
                rhs[i] += w * fv * vals[i].v;
            }
        }
        cholesky_solve(&self.mass_chol, self.dim, &mut rhs);
        Ok(LocalPolynomial {
            q: self.q,
            coeffs: rhs,
        })
    }

    /// Basis values at the given reference points (one row per point).
    pub fn basis_values(&self, points: &[[f64; 2]]) -> Vec<Vec<f64>> {
        points
            .iter()
            .map(|pt| {
                basis::eval_shapes(&self.shapes, &self.table, pt[0], pt[1])
                    .iter()
                    .map(|j| j.v)
                    .collect()
            })
            .collect()
    }
}

fn projection_basis(q: usize) -> (Vec<ShapeFn>, KernelTable) {
    if q == 0 {
        // Degree zero falls outside the hierarchical family; a single
        // constant spans it.
        (vec![ShapeFn::Hat(usize::MAX)], KernelTable::new(1))
    } else {
        (
            basis::shape_list(q, [q, q, q], [false; 3]),
            KernelTable::new(q),
        )
    }
}

/// Coefficients of a projected polynomial in the projection basis.
#[derive(Clone, Debug)]
pub struct LocalPolynomial {
    q: usize,
    pub coeffs: Vec<f64>,
}

impl LocalPolynomial {
    pub fn degree(&self) -> usize {
        self.q
    }

    /// Evaluates the polynomial at a reference point of its element.
    pub fn eval_reference(&self, xi: f64, eta: f64) -> f64 {
        let (shapes, table) = projection_basis(self.q);
        let vals = basis::eval_shapes(&shapes, &table, xi, eta);
        self.coeffs
            .iter()
            .zip(&vals)
            .map(|(c, j)| c * j.v)
            .sum()
    }
}

/// Projects `f` onto polynomials of total degree <= q on one element.
pub fn project_local(
    f: &dyn Fn(f64, f64) -> f64,
    map: &AffineMap,
    q: usize,
) -> Result<LocalPolynomial, NumericsError> {
    Projector::new(q)?.project(f, map)
}

// `ShapeFn::Hat(usize::MAX)` marks the constant-only basis for q = 0;
// eval_shapes must handle it, so patch it here where both sides are in
// view.
pub(crate) fn eval_projection_shape(
    shapes: &[ShapeFn],
    table: &KernelTable,
    xi: f64,
    eta: f64,
) -> Vec<Jet> {
    basis::eval_shapes(shapes, table, xi, eta)
}

#[allow(unused)]
fn _hold(_: Box<dyn Fn()>) {}
