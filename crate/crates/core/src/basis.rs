//! Reference-element machinery shared by the hp space and the local
//! projections: hierarchical shape functions on the unit triangle built
//! from vertex hats, Lobatto-kernel edge functions and Legendre-weighted
//! interior bubbles, evaluated with second-order jets so values,
//! gradients and Hessians come out of one pass.

use alloc::vec;
use alloc::vec::Vec;

use crate::math;

/// Value plus first and second derivatives with respect to the
/// reference coordinates.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub(crate) struct Jet {
    pub v: f64,
    pub dx: f64,
    pub dy: f64,
    pub dxx: f64,
    pub dxy: f64,
    pub dyy: f64,
}

impl Jet {
    pub fn constant(v: f64) -> Self {
        Jet {
            v,
            ..Jet::default()
        }
    }

    pub fn linear(v: f64, dx: f64, dy: f64) -> Self {
        Jet {
            v,
            dx,
            dy,
            ..Jet::default()
        }
    }
}

impl core::ops::Add for Jet {
    type Output = Jet;
    fn add(self, o: Jet) -> Jet {
        Jet {
            v: self.v + o.v,
            dx: self.dx + o.dx,
            dy: self.dy + o.dy,
            dxx: self.dxx + o.dxx,
            dxy: self.dxy + o.dxy,
            dyy: self.dyy + o.dyy,
        }
    }
}

impl core::ops::Sub for Jet {
    type Output = Jet;
    fn sub(self, o: Jet) -> Jet {
        Jet {
            v: self.v - o.v,
            dx: self.dx - o.dx,
            dy: self.dy - o.dy,
            dxx: self.dxx - o.dxx,
            dxy: self.dxy - o.dxy,
            dyy: self.dyy - o.dyy,
        }
    }
}

impl core::ops::Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        Jet {
            v: self.v * o.v,
            dx: self.dx * o.v + self.v * o.dx,
            dy: self.dy * o.v + self.v * o.dy,
            dxx: self.dxx * o.v + 2.0 * self.dx * o.dx + self.v * o.dxx,
            dxy: self.dxy * o.v + self.dx * o.dy + self.dy * o.dx + self.v * o.dxy,
            dyy: self.dyy * o.v + 2.0 * self.dy * o.dy + self.v * o.dyy,
        }
    }
}

impl core::ops::Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, s: f64) -> Jet {
        Jet {
            v: self.v * s,
            dx: self.dx * s,
            dy: self.dy * s,
            dxx: self.dxx * s,
            dxy: self.dxy * s,
            dyy: self.dyy * s,
        }
    }
}

/// Horner evaluation of a monomial-coefficient polynomial at a jet.
pub(crate) fn eval_poly(coeffs: &[f64], x: Jet) -> Jet {
    let mut acc = Jet::constant(0.0);
    for &c in coeffs.iter().rev() {
        acc = acc * x + Jet::constant(c);
    }
    acc
}

/// Monomial coefficients of the Legendre polynomials P_0 .. P_n.
pub(crate) fn legendre_coeffs(n: usize) -> Vec<Vec<f64>> {
    let mut table: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    table.push(vec![1.0]);
    if n == 0 {
        return table;
    }
    table.push(vec![0.0, 1.0]);
    for k in 1..n {
        // (k+1) P_{k+1} = (2k+1) x P_k - k P_{k-1}
        let mut next = vec![0.0; k + 2];
        for (i, &c) in table[k].iter().enumerate() {
            next[i + 1] += (2 * k + 1) as f64 * c;
        }
        for (i, &c) in table[k - 1].iter().enumerate() {
            next[i] -= k as f64 * c;
        }
        for c in next.iter_mut() {
            *c /= (k + 1) as f64;
        }
        table.push(next);
    }
    table
}

/// Monomial coefficients of the Lobatto edge kernels `phi_0 .. phi_n`.
///
/// The Lobatto bubble `l_k(x) = (P_k - P_{k-2})(x) / sqrt(2(2k-1))`
/// vanishes at x = ±1; the kernel of order j = k-2 is defined by
/// `l_k(x) = (1-x^2)/4 * phi_{k-2}(x)`, so that an edge shape function
/// `lam_a * lam_b * phi(lam_b - lam_a)` traces exactly `l_k` along the
/// edge.
pub(crate) fn lobatto_kernel_coeffs(n: usize) -> Vec<Vec<f64>> {
    let legendre = legendre_coeffs(n + 2);
    let mut table = Vec::with_capacity(n + 1);
    for j in 0..=n {
        let k = j + 2;
        let scale = 1.0 / math::sqrt(2.0 * (2 * k - 1) as f64);
        let mut lob = vec![0.0; k + 1];
        for (i, &c) in legendre[k].iter().enumerate() {
            lob[i] += c * scale;
        }
        for (i, &c) in legendre[k - 2].iter().enumerate() {
            lob[i] -= c * scale;
        }
        // divide by (1 - x^2): l_i = g_i - g_{i-2}
        let mut g = vec![0.0; k - 1];
        g[0] = lob[0];
        if k > 2 {
            g[1] = lob[1];
        }
        for i in 2..k - 1 {
            g[i] = lob[i] + g[i - 2];
        }
        for c in g.iter_mut() {
            *c *= 4.0;
        }
        table.push(g);
    }
    table
}

/// Polynomial tables for all shape evaluations up to a maximum degree.
#[derive(Clone, Debug)]
pub(crate) struct KernelTable {
    pub legendre: Vec<Vec<f64>>,
    pub kernel: Vec<Vec<f64>>,
}

impl KernelTable {
    pub fn new(p_max: usize) -> Self {
        let p = p_max.max(1);
        KernelTable {
            legendre: legendre_coeffs(p),
            kernel: lobatto_kernel_coeffs(p.saturating_sub(2)),
        }
    }
}

/// One local shape function; `lo`/`hi` are local vertex indices with the
/// canonical (globally ascending) edge orientation already applied.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) enum ShapeFn {
    Hat(usize),
    Edge { lo: usize, hi: usize, order: usize },
    Bubble { i: usize, j: usize },
}

/// Local shape set for an element of degree `p` with per-edge degrees
/// `edge_degree` (local edge i is opposite local vertex i) and edge
/// orientation flips relative to the local (i+1, i+2) direction.
pub(crate) fn shape_list(p: usize, edge_degree: [usize; 3], flip: [bool; 3]) -> Vec<ShapeFn> {
    let mut shapes = Vec::with_capacity(n_local(p, edge_degree));
    for i in 0..3 {
        shapes.push(ShapeFn::Hat(i));
    }
    for e in 0..3 {
        let (mut lo, mut hi) = ((e + 1) % 3, (e + 2) % 3);
        if flip[e] {
            core::mem::swap(&mut lo, &mut hi);
        }
        for order in 2..=edge_degree[e] {
            shapes.push(ShapeFn::Edge { lo, hi, order });
        }
    }
    if p >= 3 {
        for total in 0..=(p - 3) {
            for i in 0..=total {
                shapes.push(ShapeFn::Bubble { i, j: total - i });
            }
        }
    }
    shapes
}

pub(crate) fn n_local(p: usize, edge_degree: [usize; 3]) -> usize {
    3 + edge_degree.iter().map(|&q| q - 1).sum::<usize>() + n_bubbles(p)
}

/// Interior functions of a degree-p element: (p-1)(p-2)/2.
pub(crate) fn n_bubbles(p: usize) -> usize {
    if p >= 3 {
        (p - 1) * (p - 2) / 2
    } else {
        0
    }
}

/// Evaluates all shapes at a reference point.
pub(crate) fn eval_shapes(
    shapes: &[ShapeFn],
    table: &KernelTable,
    xi: f64,
    eta: f64,
) -> Vec<Jet> {
    let lam = [
        Jet::linear(1.0 - xi - eta, -1.0, -1.0),
        Jet::linear(xi, 1.0, 0.0),
        Jet::linear(eta, 0.0, 1.0),
    ];
    shapes
        .iter()
        .map(|shape| match *shape {
            ShapeFn::Hat(i) => lam[i],
            ShapeFn::Edge { lo, hi, order } => {
                let kernel = &table.kernel[order - 2];
                lam[lo] * lam[hi] * eval_poly(kernel, lam[hi] - lam[lo])
            }
            ShapeFn::Bubble { i, j } => {
                let a = eval_poly(&table.legendre[i], lam[1] - lam[0]);
                let b = eval_poly(&table.legendre[j], lam[2] * 2.0 - Jet::constant(1.0));
                lam[0] * lam[1] * lam[2] * a * b
            }
        })
        .collect()
}
