//! Graph-chart geometry of Gr(k,n): the normalized invariant symplectic form,
//! circle-action moment maps, fixed points, and isotropy weights.
//!
//! A point of the chart is a complex (n-k) x k matrix B, standing for the
//! k-plane {(v, Bv)} in the splitting C^n = C^k + C^(n-k). The form is the
//! Kahler form of the potential K(B) = (1/2pi) log det(I + B'B), scaled so
//! that a projective line has area exactly one; [`coordinate_line_area`]
//! verifies that normalization numerically.
//!
//! Circles are parametrized with period one (a = e^(2 pi i t)), so isotropy
//! weights are integers and the moment map increments equal symplectic areas.
//! In these chart coordinates the form at B = 0 is 1/pi times the standard
//! one; the linear rescaling z = sqrt(pi) zeta makes it standard, and in the
//! rescaled coordinates the moment map of a weight-w entry starts as
//! pi w |zeta|^2, the flat normal form with all coefficients one.

use crate::numeric;
use crate::partition::BoxContext;
use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize, Serializer};
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GrassmannError {
    #[error("chart matrix must be {rows}x{cols} for {ctx}, got {got_rows}x{got_cols}")]
    ShapeMismatch {
        ctx: BoxContext,
        rows: usize,
        cols: usize,
        got_rows: usize,
        got_cols: usize,
    },
    #[error("weight vector must have length {expected}, got {got}")]
    ActionLength { expected: usize, got: usize },
    #[error("fixed point label {0:?} is not a strictly increasing k-subset of 1..=n")]
    BadSubset(Vec<u32>),
}

/// A k-plane in graph coordinates: the plane {(v, Bv) : v in C^k}.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphChartPoint {
    ctx: BoxContext,
    b: DMatrix<Complex64>,
}

impl GraphChartPoint {
    pub fn new(ctx: BoxContext, b: DMatrix<Complex64>) -> Result<Self, GrassmannError> {
        let (rows, cols) = (ctx.width() as usize, ctx.k as usize);
        if b.nrows() != rows || b.ncols() != cols {
            return Err(GrassmannError::ShapeMismatch {
                ctx,
                rows,
                cols,
                got_rows: b.nrows(),
                got_cols: b.ncols(),
            });
        }
        Ok(GraphChartPoint { ctx, b })
    }

    /// The chart center: the coordinate plane C^k x {0}.
    pub fn origin(ctx: BoxContext) -> Self {
        let b = DMatrix::zeros(ctx.width() as usize, ctx.k as usize);
        GraphChartPoint { ctx, b }
    }

    pub fn ctx(&self) -> BoxContext {
        self.ctx
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.b
    }

    /// Real chart coordinates, interleaved (x_0, y_0, x_1, y_1, ...) with the
    /// flat complex index a = row * k + col.
    pub fn coords(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(2 * self.b.len());
        for r in 0..self.b.nrows() {
            for c in 0..self.b.ncols() {
                out.push(self.b[(r, c)].re);
                out.push(self.b[(r, c)].im);
            }
        }
        out
    }

    pub fn from_coords(ctx: BoxContext, coords: &[f64]) -> Result<Self, GrassmannError> {
        let (rows, cols) = (ctx.width() as usize, ctx.k as usize);
        if coords.len() != 2 * rows * cols {
            return Err(GrassmannError::ShapeMismatch {
                ctx,
                rows,
                cols,
                got_rows: coords.len() / (2 * cols.max(1)),
                got_cols: cols,
            });
        }
        let b = DMatrix::from_fn(rows, cols, |r, c| {
            let a = r * cols + c;
            Complex64::new(coords[2 * a], coords[2 * a + 1])
        });
        Ok(GraphChartPoint { ctx, b })
    }
}

impl Serialize for GraphChartPoint {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let re: Vec<Vec<f64>> = (0..self.b.nrows())
            .map(|r| (0..self.b.ncols()).map(|c| self.b[(r, c)].re).collect())
            .collect();
        let im: Vec<Vec<f64>> = (0..self.b.nrows())
            .map(|r| (0..self.b.ncols()).map(|c| self.b[(r, c)].im).collect())
            .collect();
        let mut st = serializer.serialize_struct("GraphChartPoint", 4)?;
        st.serialize_field("k", &self.ctx.k)?;
        st.serialize_field("n", &self.ctx.n)?;
        st.serialize_field("B_re", &re)?;
        st.serialize_field("B_im", &im)?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for GraphChartPoint {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error as _;
        #[derive(Deserialize)]
        struct Raw {
            k: u32,
            n: u32,
            #[serde(rename = "B_re")]
            b_re: Vec<Vec<f64>>,
            #[serde(rename = "B_im")]
            b_im: Vec<Vec<f64>>,
        }
        let raw = Raw::deserialize(deserializer)?;
        let ctx = BoxContext::new(raw.k, raw.n).map_err(D::Error::custom)?;
        let (rows, cols) = (ctx.width() as usize, ctx.k as usize);
        let ok = raw.b_re.len() == rows
            && raw.b_im.len() == rows
            && raw.b_re.iter().all(|r| r.len() == cols)
            && raw.b_im.iter().all(|r| r.len() == cols);
        if !ok {
            return Err(D::Error::custom(format!(
                "B_re/B_im must be {rows}x{cols} for Gr({},{})",
                raw.k, raw.n
            )));
        }
        let b = DMatrix::from_fn(rows, cols, |r, c| {
            Complex64::new(raw.b_re[r][c], raw.b_im[r][c])
        });
        GraphChartPoint::new(ctx, b).map_err(D::Error::custom)
    }
}

/// A circle inside the diagonal torus: a . z = (a^m1 z_1, ..., a^mn z_n),
/// with the circle parametrized as a = e^(2 pi i t).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CircleActionSpec {
    pub ctx: BoxContext,
    pub m: Vec<i64>,
}

impl CircleActionSpec {
    pub fn new(ctx: BoxContext, m: Vec<i64>) -> Result<Self, GrassmannError> {
        if m.len() != ctx.n as usize {
            return Err(GrassmannError::ActionLength { expected: ctx.n as usize, got: m.len() });
        }
        Ok(CircleActionSpec { ctx, m })
    }

    /// The action fixing the chart center with all isotropy weights one:
    /// zeros on the first k coordinates, ones on the rest.
    pub fn standard(ctx: BoxContext) -> Self {
        let mut m = vec![0i64; ctx.n as usize];
        for w in m.iter_mut().skip(ctx.k as usize) {
            *w = 1;
        }
        CircleActionSpec { ctx, m }
    }

    /// Weight of the chart entry at (row, col): m_(k+row) - m_col.
    pub fn entry_weight(&self, row: usize, col: usize) -> i64 {
        self.m[self.ctx.k as usize + row] - self.m[col]
    }
}

/// A coordinate fixed point: the plane spanned by {e_i : i in S}, S given
/// 1-based and strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixedPointLabel {
    pub s: Vec<u32>,
}

impl FixedPointLabel {
    pub fn new(ctx: BoxContext, s: Vec<u32>) -> Result<Self, GrassmannError> {
        let increasing = s.windows(2).all(|w| w[0] < w[1]);
        let in_range = s.iter().all(|&i| 1 <= i && i <= ctx.n);
        if s.len() != ctx.k as usize || !increasing || !in_range {
            return Err(GrassmannError::BadSubset(s));
        }
        Ok(FixedPointLabel { s })
    }
}

/// Coefficient matrix of the normalized invariant form at a chart point, in
/// the interleaved real coordinates of [`GraphChartPoint::coords`]:
/// omega(u, v) = u^T W v with W antisymmetric of size 2k(n-k).
///
/// Computed from the closed-form complex Hessian of the potential,
/// H[(r,c),(s,d)] = (1/2pi) G[c,d] Ghat[s,r] with G = (I + B'B)^-1 and
/// Ghat = (I + BB')^-1.
pub fn symplectic_form_at(pt: &GraphChartPoint) -> DMatrix<f64> {
    let k = pt.ctx.k as usize;
    let q = pt.ctx.width() as usize;
    let m = k * q;
    let b = &pt.b;
    let g = (DMatrix::identity(k, k) + b.adjoint() * b)
        .try_inverse()
        .expect("I + B'B is positive definite");
    let ghat = (DMatrix::identity(q, q) + b * b.adjoint())
        .try_inverse()
        .expect("I + BB' is positive definite");
    let mut omega = DMatrix::zeros(2 * m, 2 * m);
    for r in 0..q {
        for c in 0..k {
            let a = r * k + c;
            for s in 0..q {
                for d in 0..k {
                    let bb = s * k + d;
                    let hab = g[(c, d)] * ghat[(s, r)] / (2.0 * PI);
                    omega[(2 * a, 2 * bb)] = -2.0 * hab.im;
                    omega[(2 * a + 1, 2 * bb + 1)] = -2.0 * hab.im;
                    omega[(2 * a, 2 * bb + 1)] = 2.0 * hab.re;
                    omega[(2 * a + 1, 2 * bb)] = -2.0 * hab.re;
                }
            }
        }
    }
    omega
}

/// Moment map of the circle action in the chart, normalized to vanish at the
/// chart center: sum over entries of w_rc Re(B_rc (G B')_cr).
pub fn moment_map_circle(pt: &GraphChartPoint, act: &CircleActionSpec) -> f64 {
    assert_eq!(pt.ctx, act.ctx, "point and action live on different Grassmannians");
    let k = pt.ctx.k as usize;
    let b = &pt.b;
    let g = (DMatrix::identity(k, k) + b.adjoint() * b)
        .try_inverse()
        .expect("I + B'B is positive definite");
    let gb = g * b.adjoint();
    let mut phi = 0.0;
    for r in 0..b.nrows() {
        for c in 0..b.ncols() {
            phi += act.entry_weight(r, c) as f64 * (b[(r, c)] * gb[(c, r)]).re;
        }
    }
    phi
}

/// The action at time t applied to a chart point: entry (r,c) rotates by
/// e^(2 pi i w_rc t).
pub fn act_on_chart(pt: &GraphChartPoint, act: &CircleActionSpec, t: f64) -> GraphChartPoint {
    assert_eq!(pt.ctx, act.ctx, "point and action live on different Grassmannians");
    let b = DMatrix::from_fn(pt.b.nrows(), pt.b.ncols(), |r, c| {
        let w = act.entry_weight(r, c) as f64;
        pt.b[(r, c)] * Complex64::from_polar(1.0, 2.0 * PI * w * t)
    });
    GraphChartPoint { ctx: pt.ctx, b }
}

/// Isotropy weights of the action on the tangent space at a coordinate fixed
/// point: the multiset {m_j - m_i : i in S, j not in S}, sorted ascending.
/// Always exactly k(n-k) integers.
pub fn isotropy_weights(fp: &FixedPointLabel, act: &CircleActionSpec) -> Vec<i64> {
    let n = act.ctx.n;
    let in_s = |j: u32| fp.s.binary_search(&j).is_ok();
    let mut weights = Vec::with_capacity(act.ctx.dim() as usize);
    for &i in &fp.s {
        for j in 1..=n {
            if !in_s(j) {
                weights.push(act.m[(j - 1) as usize] - act.m[(i - 1) as usize]);
            }
        }
    }
    weights.sort_unstable();
    weights
}

/// Residual of the moment-map equation i(xi)omega = -dPhi at a chart point:
/// the action field comes from central differences of the action curve, dPhi
/// from central differences of the moment map, both with step h; returns the
/// max-norm discrepancy, O(h^2) in h.
pub fn verify_moment_equation(pt: &GraphChartPoint, act: &CircleActionSpec, h: f64) -> f64 {
    assert!(h > 0.0, "step must be positive");
    let omega = symplectic_form_at(pt);
    let plus = act_on_chart(pt, act, h).coords();
    let minus = act_on_chart(pt, act, -h).coords();
    let xi: Vec<f64> = plus
        .iter()
        .zip(&minus)
        .map(|(p, m)| (p - m) / (2.0 * h))
        .collect();
    let x0 = pt.coords();
    let ctx = pt.ctx;
    let dphi = numeric::gradient_fd(
        |x| {
            let q = GraphChartPoint::from_coords(ctx, x).expect("same length");
            moment_map_circle(&q, act)
        },
        &x0,
        h,
    );
    let mut worst = 0.0f64;
    for beta in 0..x0.len() {
        let contraction: f64 = (0..x0.len()).map(|a| xi[a] * omega[(a, beta)]).sum();
        worst = worst.max((contraction + dphi[beta]).abs());
    }
    worst
}

/// Numerical area of the standard line {B = z E_00} in the chart: the radial
/// integral of the form coefficient, with r = u/(1-u) mapping [0,1) to the
/// whole chart. Equals one for every context under the normalization here.
pub fn coordinate_line_area(ctx: BoxContext) -> f64 {
    let (rows, cols) = (ctx.width() as usize, ctx.k as usize);
    let integrand = |u: f64| {
        if u >= 1.0 {
            return 0.0;
        }
        let r = u / (1.0 - u);
        let mut b = DMatrix::zeros(rows, cols);
        b[(0, 0)] = Complex64::new(r, 0.0);
        let pt = GraphChartPoint { ctx, b };
        let omega = symplectic_form_at(&pt);
        omega[(0, 1)] * 2.0 * PI * r / ((1.0 - u) * (1.0 - u))
    };
    numeric::simpson(integrand, 0.0, 1.0, 2048)
}
