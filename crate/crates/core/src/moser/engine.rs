//! Numerical construction of the embedding attached to a chart form.
//!
//! The pipeline composes three maps. The contraction flow integrates the
//! negative lifted Euler field, carrying the whole chart into the region
//! where the inner normalization applies while scaling the moment map by
//! e^{-t} on the nose. The Moser isotopy corrects the contraction so the
//! composite actually pulls the rescaled form back to the original one: its
//! generating field solves Omega_tau Y = d/dtau lambda_tau against the
//! pulled-back radial primitive. The inner normalization then identifies the
//! contracted picture with the standard chart, and a final e^{t/2} rescaling
//! restores the symplectic size.

use super::forms::{standard_matrix, ChartForm, InnerNormalization};
use super::{IntegrationGrid, MoserError};
use crate::numeric::{exterior_derivative_residual, gauss_legendre_unit, max_abs};
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Step for the centered differences that feed the variational equations.
const FD_H: f64 = 1e-5;

/// Block-diagonal rotation by theta in every complex coordinate.
fn rotation(m: usize, theta: f64) -> DMatrix<f64> {
    let (sin, cos) = theta.sin_cos();
    let mut r = DMatrix::zeros(2 * m, 2 * m);
    for b in 0..m {
        r[(2 * b, 2 * b)] = cos;
        r[(2 * b, 2 * b + 1)] = -sin;
        r[(2 * b + 1, 2 * b)] = sin;
        r[(2 * b + 1, 2 * b + 1)] = cos;
    }
    r
}

/// Primitive of the chart form along the radial contraction to the origin:
/// lambda(x)(v) = int_0^1 t omega_{tx}(x, v) dt, returned as a covector.
/// Satisfies d lambda = omega for any closed form and reduces to
/// (x dy - y dx)/2 for the standard one. Forms radial per complex block
/// take the closed-form route; only block-mixing forms integrate the ray.
pub fn radial_primitive(
    cf: &ChartForm,
    x: &DVector<f64>,
    grid: &IntegrationGrid,
) -> Result<DVector<f64>, MoserError> {
    if let Some(lambda) = cf.closed_primitive(x.as_slice()) {
        return Ok(lambda);
    }
    quadrature_primitive(cf, x, grid)
}

/// The ray integral behind [`radial_primitive`], valid for every form.
fn quadrature_primitive(
    cf: &ChartForm,
    x: &DVector<f64>,
    grid: &IntegrationGrid,
) -> Result<DVector<f64>, MoserError> {
    // Split the ray where it crosses a bump support boundary: the integrand
    // is only C^4 there, and quadrature error across a kink oscillates with
    // the node positions, which spatial differentiation of the primitive
    // amplifies. On each smooth segment Gauss-Legendre converges spectrally.
    let mut cuts = vec![0.0, 1.0];
    if let Some((lo, hi)) = cf.support_breaks() {
        let s = x.norm_squared();
        if s > 0.0 {
            for b in [lo / s, hi / s] {
                if b < 1.0 {
                    cuts.push(b.sqrt());
                }
            }
        }
    }
    cuts.sort_by(f64::total_cmp);
    let nodes = gauss_legendre_unit(grid.quad_nodes);
    let mut acc = DVector::zeros(x.len());
    let mut pt = vec![0.0; x.len()];
    for seg in cuts.windows(2) {
        let len = seg[1] - seg[0];
        if len < 1e-15 {
            continue;
        }
        for &(node, weight) in &nodes {
            let t = seg[0] + len * node;
            for (p, v) in pt.iter_mut().zip(x.iter()) {
                *p = v * t;
            }
            let phi = cf.phi(&pt);
            if phi >= cf.cap() {
                return Err(MoserError::Domain {
                    stage: "radial-primitive",
                    phi,
                    limit: cf.cap(),
                });
            }
            acc += cf.omega(&pt) * x * (t * weight * len);
        }
    }
    Ok(-acc)
}

/// The lifted Euler field: the unique-up-to-blending scaling generator with
/// dPhi(X) = Phi exactly. Inside the inner normalization's validity region it
/// is the normalization's pullback of the half-position field; outside it
/// follows the moment map's gradient; the quintic blend window sits inside
/// the region where both branches agree, so the scaling identity is never
/// compromised.
pub fn lift_euler(
    cf: &ChartForm,
    x: &DVector<f64>,
    grid: &IntegrationGrid,
) -> Result<DVector<f64>, MoserError> {
    let phi = cf.phi(x.as_slice());
    let blend_cap = match cf.inner() {
        InnerNormalization::Identity { valid_below } => valid_below,
        InnerNormalization::RadialArea => cf.cap(),
    };
    let chi = if blend_cap.is_finite() {
        let (lo, hi) = grid.cutoff;
        let v = ((phi / blend_cap - lo) / (hi - lo)).clamp(0.0, 1.0);
        v * v * v * (v * (v * 6.0 - 15.0) + 10.0)
    } else {
        0.0
    };
    let mut field = DVector::zeros(x.len());
    if chi < 1.0 {
        field += inner_field(cf, x, phi) * (1.0 - chi);
    }
    if chi > 0.0 {
        field += outer_field(cf, x, phi)? * chi;
    }
    Ok(field)
}

fn inner_field(cf: &ChartForm, x: &DVector<f64>, phi: f64) -> DVector<f64> {
    match cf.inner() {
        InnerNormalization::Identity { .. } => x * 0.5,
        InnerNormalization::RadialArea => {
            let s = x.norm_squared();
            if s < 1e-14 {
                return x * 0.5;
            }
            let f = cf
                .radial_f(s)
                .expect("radial-area normalization implies a radial density");
            x * (phi / (2.0 * std::f64::consts::PI * s * f))
        }
    }
}

fn outer_field(cf: &ChartForm, x: &DVector<f64>, phi: f64) -> Result<DVector<f64>, MoserError> {
    let grad = cf.phi_grad(x.as_slice());
    let norm2 = grad.norm_squared();
    if norm2 < 1e-14 {
        if x.norm() < 1e-7 {
            return Ok(x * 0.5);
        }
        return Err(MoserError::DegenerateGradient { radius: x.norm() });
    }
    Ok(grad * (phi / norm2))
}

fn steps_for(grid: &IntegrationGrid, len: f64) -> usize {
    ((len.abs() * grid.steps_per_unit_time as f64).ceil() as usize).max(1)
}

/// Classical fixed-step RK4 that propagates errors out of the right side.
fn rk4_fallible<F>(
    f: &F,
    mut y: DVector<f64>,
    t0: f64,
    t1: f64,
    steps: usize,
) -> Result<DVector<f64>, MoserError>
where
    F: Fn(f64, &DVector<f64>) -> Result<DVector<f64>, MoserError>,
{
    let h = (t1 - t0) / steps as f64;
    let mut t = t0;
    for _ in 0..steps {
        let k1 = f(t, &y)?;
        let k2 = f(t + 0.5 * h, &(&y + &k1 * (0.5 * h)))?;
        let k3 = f(t + 0.5 * h, &(&y + &k2 * (0.5 * h)))?;
        let k4 = f(t + h, &(&y + &k3 * h))?;
        y += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
        t += h;
    }
    Ok(y)
}

/// Adaptive RK4 for the contraction flow. The relative rate of the lifted
/// field grows like 1/(1 - phi) near a cap, so fixed steps sized for the
/// bulk of the chart lose accuracy exactly where capacity gets realized.
/// Each step is shortened until the leading `lead` components of the state
/// move by at most a small fraction of their own norm; away from a cap the
/// cap never binds and this reduces to the fixed-step scheme.
fn rk4_adaptive<F>(
    f: &F,
    mut y: DVector<f64>,
    lead: usize,
    t0: f64,
    t1: f64,
    h_base: f64,
) -> Result<DVector<f64>, MoserError>
where
    F: Fn(f64, &DVector<f64>) -> Result<DVector<f64>, MoserError>,
{
    const MAX_RELATIVE_MOTION: f64 = 0.02;
    let mut t = t0;
    let mut steps = 0usize;
    while t < t1 - 1e-13 * (1.0 + t1.abs()) {
        let k1 = f(t, &y)?;
        let rate = k1.rows(0, lead).norm() / (y.rows(0, lead).norm() + 1e-9);
        let h = (t1 - t)
            .min(h_base)
            .min(MAX_RELATIVE_MOTION / rate.max(1e-9));
        let k2 = f(t + 0.5 * h, &(&y + &k1 * (0.5 * h)))?;
        let k3 = f(t + 0.5 * h, &(&y + &k2 * (0.5 * h)))?;
        let k4 = f(t + h, &(&y + &k3 * h))?;
        y += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
        t += h;
        steps += 1;
        if steps > 1_000_000 {
            return Err(MoserError::NonFinite {
                stage: "contraction-flow",
            });
        }
    }
    Ok(y)
}

fn pack(y: &DVector<f64>, j: &DMatrix<f64>) -> DVector<f64> {
    let d = y.len();
    let mut out = DVector::zeros(d + d * d);
    out.as_mut_slice()[..d].copy_from_slice(y.as_slice());
    out.as_mut_slice()[d..].copy_from_slice(j.as_slice());
    out
}

fn unpack(state: &DVector<f64>, d: usize) -> (DVector<f64>, DMatrix<f64>) {
    (
        DVector::from_column_slice(&state.as_slice()[..d]),
        DMatrix::from_column_slice(d, d, &state.as_slice()[d..]),
    )
}

/// Central-difference Jacobian of a fallible vector field.
fn fd_jacobian<F>(f: &F, y: &DVector<f64>, d: usize) -> Result<DMatrix<f64>, MoserError>
where
    F: Fn(&DVector<f64>) -> Result<DVector<f64>, MoserError>,
{
    let mut out = DMatrix::zeros(d, d);
    let mut yp = y.clone();
    let mut ym = y.clone();
    for i in 0..d {
        yp[i] += FD_H;
        ym[i] -= FD_H;
        out.set_column(i, &((f(&yp)? - f(&ym)?) / (2.0 * FD_H)));
        yp[i] = y[i];
        ym[i] = y[i];
    }
    Ok(out)
}

/// Right side of the contraction flow with its variational equation:
/// ydot = -X(y), Jdot = -DX(y) J, the field differentiated numerically.
fn contraction_rhs(
    cf: &ChartForm,
    grid: &IntegrationGrid,
    state: &DVector<f64>,
) -> Result<DVector<f64>, MoserError> {
    let d = cf.dim();
    let (y, j) = unpack(state, d);
    let field = lift_euler(cf, &y, grid)?;
    let dfield = fd_jacobian(&|p| lift_euler(cf, p, grid), &y, d)?;
    let jdot = -(dfield * j);
    let mut out = DVector::zeros(d + d * d);
    out.as_mut_slice()[..d].copy_from_slice((-field).as_slice());
    out.as_mut_slice()[d..].copy_from_slice(jdot.as_slice());
    Ok(out)
}

/// Contraction flow evaluated at several times in a single chained pass,
/// carrying the variational Jacobian. Results come back in input order.
fn contraction_multi(
    cf: &ChartForm,
    x: &DVector<f64>,
    targets: &[f64],
    grid: &IntegrationGrid,
) -> Result<Vec<(DVector<f64>, DMatrix<f64>)>, MoserError> {
    let d = cf.dim();
    let mut order: Vec<usize> = (0..targets.len()).collect();
    order.sort_by(|a, b| targets[*a].total_cmp(&targets[*b]));
    let mut out: Vec<Option<(DVector<f64>, DMatrix<f64>)>> = vec![None; targets.len()];
    let mut state = pack(x, &DMatrix::identity(d, d));
    let mut now = 0.0;
    for i in order {
        let target = targets[i];
        if (target - now).abs() > 1e-15 {
            state = rk4_adaptive(
                &|_, s: &DVector<f64>| contraction_rhs(cf, grid, s),
                state,
                d,
                now,
                target,
                1.0 / grid.steps_per_unit_time as f64,
            )?;
        }
        now = target;
        let pair = unpack(&state, d);
        if !pair.0.iter().all(|v| v.is_finite()) || !pair.1.iter().all(|v| v.is_finite()) {
            return Err(MoserError::NonFinite {
                stage: "contraction-flow",
            });
        }
        out[i] = Some(pair);
    }
    Ok(out.into_iter().map(|o| o.expect("all targets visited")).collect())
}

/// Time-t map of the negative lifted Euler field. Scales the moment map by
/// e^{-t} up to integration error; positive times contract toward the
/// origin.
pub fn euler_flow(
    cf: &ChartForm,
    x: &DVector<f64>,
    t: f64,
    grid: &IntegrationGrid,
) -> Result<DVector<f64>, MoserError> {
    if !t.is_finite() {
        return Err(MoserError::InvalidTime(t));
    }
    if t == 0.0 {
        return Ok(x.clone());
    }
    let y = rk4_adaptive(
        &|_, y: &DVector<f64>| Ok(-lift_euler(cf, y, grid)?),
        x.clone(),
        x.len(),
        0.0,
        t,
        1.0 / grid.steps_per_unit_time as f64,
    )?;
    if !y.iter().all(|v| v.is_finite()) {
        return Err(MoserError::NonFinite {
            stage: "euler-flow",
        });
    }
    Ok(y)
}

fn solve_corrector(
    cf: &ChartForm,
    stop: &(DVector<f64>, DMatrix<f64>),
    tau: f64,
    beta: &DVector<f64>,
) -> Result<DVector<f64>, MoserError> {
    let (y, j) = stop;
    let omega_tau = j.transpose() * cf.omega(y.as_slice()) * j * tau.exp();
    omega_tau
        .lu()
        .solve(beta)
        .ok_or(MoserError::SingularSolve {
            stage: "moser-field",
            tau,
        })
}

/// The Moser corrector field at isotopy time tau: solves Omega_tau Y = beta
/// where beta = d/dtau lambda_tau is evaluated in closed form as a Lie
/// derivative at the contracted point,
///
///   beta = e^tau J^T (lambda - (DX)^T lambda - (Dlambda) X).
///
/// Differencing lambda_tau across nearby flow times instead would divide
/// quadrature and integration noise by the stencil width, and the solve for
/// Y then amplifies that noise by the reciprocal of the density, which is
/// nearly zero close to a cap. The local formula has no such amplifier.
pub(crate) fn moser_field(
    cf: &ChartForm,
    tau: f64,
    g: &DVector<f64>,
    grid: &IntegrationGrid,
) -> Result<DVector<f64>, MoserError> {
    let d = cf.dim();
    let stops = contraction_multi(cf, g, &[tau], grid)?;
    let (y, j) = &stops[0];
    let lambda = radial_primitive(cf, y, grid)?;
    let dlambda = fd_jacobian(&|p| radial_primitive(cf, p, grid), y, d)?;
    let field = lift_euler(cf, y, grid)?;
    let dfield = fd_jacobian(&|p| lift_euler(cf, p, grid), y, d)?;
    let rate = &lambda - dfield.transpose() * &lambda - dlambda * &field;
    let beta = j.transpose() * rate * tau.exp();
    solve_corrector(cf, &stops[0], tau, &beta)
}

/// Flow of the Moser corrector from 0 to t. Skipped outright when the
/// corrector provably vanishes; integrating a field that is zero up to
/// numerical noise would only add that noise to the composite.
fn moser_flow(
    cf: &ChartForm,
    x: &DVector<f64>,
    t: f64,
    grid: &IntegrationGrid,
) -> Result<DVector<f64>, MoserError> {
    if t == 0.0 || cf.corrector_vanishes() {
        return Ok(x.clone());
    }
    let g = rk4_fallible(
        &|tau, g: &DVector<f64>| moser_field(cf, tau, g, grid),
        x.clone(),
        0.0,
        t,
        steps_for(grid, t),
    )?;
    if !g.iter().all(|v| v.is_finite()) {
        return Err(MoserError::NonFinite {
            stage: "moser-flow",
        });
    }
    Ok(g)
}

/// Right side of the Moser flow with its variational equation, the corrector
/// differentiated numerically in space.
fn moser_rhs_with_jacobian(
    cf: &ChartForm,
    grid: &IntegrationGrid,
    tau: f64,
    state: &DVector<f64>,
) -> Result<DVector<f64>, MoserError> {
    let d = cf.dim();
    let (g, j) = unpack(state, d);
    let field = moser_field(cf, tau, &g, grid)?;
    let mut dfield = DMatrix::zeros(d, d);
    let mut gp = g.clone();
    let mut gm = g.clone();
    for i in 0..d {
        gp[i] += FD_H;
        gm[i] -= FD_H;
        let col = (moser_field(cf, tau, &gp, grid)? - moser_field(cf, tau, &gm, grid)?)
            / (2.0 * FD_H);
        dfield.set_column(i, &col);
        gp[i] = g[i];
        gm[i] = g[i];
    }
    let jdot = dfield * j;
    let mut out = DVector::zeros(d + d * d);
    out.as_mut_slice()[..d].copy_from_slice(field.as_slice());
    out.as_mut_slice()[d..].copy_from_slice(jdot.as_slice());
    Ok(out)
}

/// The inner normalization as a map into the standard chart.
fn normalize_point(cf: &ChartForm, y: &DVector<f64>) -> DVector<f64> {
    match cf.inner() {
        InnerNormalization::Identity { .. } => y.clone(),
        InnerNormalization::RadialArea => {
            let s = y.norm_squared();
            if s < 1e-16 {
                return y.clone();
            }
            let target = (cf.phi(y.as_slice()) / std::f64::consts::PI).sqrt();
            y * (target / s.sqrt())
        }
    }
}

fn normalize_jacobian(cf: &ChartForm, y: &DVector<f64>) -> DMatrix<f64> {
    let d = y.len();
    match cf.inner() {
        InnerNormalization::Identity { .. } => DMatrix::identity(d, d),
        InnerNormalization::RadialArea => {
            let s = y.norm_squared();
            if s < 1e-16 {
                return DMatrix::identity(d, d);
            }
            let r = s.sqrt();
            let target = (cf.phi(y.as_slice()) / std::f64::consts::PI).sqrt();
            let rho = target / r;
            let f = cf.radial_f(s).expect("radial density");
            let rho_prime = (s * f - target * target) / (target * s);
            DMatrix::identity(d, d) * rho + y * y.transpose() * (rho_prime / r)
        }
    }
}

/// A symplectic embedding produced by the deformation engine.
///
/// At flow time t the map sends the chart sublevel set admitted by
/// [`Embedding::domain_cap`] into the standard chart, pulling the standard
/// form back to the chart form and preserving the moment map on the nose, so
/// moment sublevel sets land on standard balls of equal capacity.
#[derive(Debug, Clone)]
pub struct Embedding {
    form: ChartForm,
    grid: IntegrationGrid,
    t_final: f64,
}

impl Embedding {
    pub fn form(&self) -> &ChartForm {
        &self.form
    }

    pub fn grid(&self) -> IntegrationGrid {
        self.grid
    }

    pub fn t_final(&self) -> f64 {
        self.t_final
    }

    pub fn dim(&self) -> usize {
        self.form.dim()
    }

    /// Supremum of moment-map values admitted at flow time t; the domain is
    /// the open sublevel set below it, and it converges to the form's cap as
    /// t grows.
    pub fn domain_cap(&self, t: f64) -> f64 {
        let inner_cap = match self.form.inner() {
            InnerNormalization::Identity { valid_below } => valid_below,
            InnerNormalization::RadialArea => f64::INFINITY,
        };
        (t.exp() * inner_cap).min(self.form.cap())
    }

    /// The embedding at the constructed flow horizon.
    pub fn evaluate(&self, x: &DVector<f64>) -> Result<DVector<f64>, MoserError> {
        self.evaluate_at(self.t_final, x)
    }

    /// The embedding at an intermediate flow time t in [0, t_final] (larger
    /// t is allowed and only enlarges the domain).
    pub fn evaluate_at(&self, t: f64, x: &DVector<f64>) -> Result<DVector<f64>, MoserError> {
        let y = self.chart_image(t, x)?;
        Ok(normalize_point(&self.form, &y) * (0.5 * t).exp())
    }

    /// Derivative of [`Embedding::evaluate_at`] in x, by the variational
    /// equations of both flows. The Moser leg differentiates the corrector
    /// field numerically, which is much more expensive than finite
    /// differences of the map itself; this exists to cross-check those.
    pub fn jacobian(&self, t: f64, x: &DVector<f64>) -> Result<DMatrix<f64>, MoserError> {
        self.check_time_and_domain(t, x)?;
        let d = self.dim();
        let mut state = pack(x, &DMatrix::identity(d, d));
        if t > 0.0 && !self.form.corrector_vanishes() {
            state = rk4_fallible(
                &|tau, s: &DVector<f64>| moser_rhs_with_jacobian(&self.form, &self.grid, tau, s),
                state,
                0.0,
                t,
                steps_for(&self.grid, t),
            )?;
        }
        let (g, j_moser) = unpack(&state, d);
        let stops = contraction_multi(&self.form, &g, &[t], &self.grid)?;
        let (y, j_contract) = &stops[0];
        self.check_compose(y)?;
        let j_norm = normalize_jacobian(&self.form, y);
        Ok(j_norm * j_contract * j_moser * (0.5 * t).exp())
    }

    fn chart_image(&self, t: f64, x: &DVector<f64>) -> Result<DVector<f64>, MoserError> {
        self.check_time_and_domain(t, x)?;
        let g = moser_flow(&self.form, x, t, &self.grid)?;
        let y = euler_flow(&self.form, &g, t, &self.grid)?;
        self.check_compose(&y)?;
        Ok(y)
    }

    fn check_time_and_domain(&self, t: f64, x: &DVector<f64>) -> Result<(), MoserError> {
        if !(t.is_finite() && t >= 0.0) {
            return Err(MoserError::InvalidTime(t));
        }
        assert_eq!(x.len(), self.dim(), "point dimension");
        let phi = self.form.phi(x.as_slice());
        let limit = self.domain_cap(t);
        if !(phi < limit) {
            return Err(MoserError::Domain {
                stage: "domain",
                phi,
                limit,
            });
        }
        Ok(())
    }

    fn check_compose(&self, y: &DVector<f64>) -> Result<(), MoserError> {
        if let InnerNormalization::Identity { valid_below } = self.form.inner() {
            let phi = self.form.phi(y.as_slice());
            if !(phi < valid_below) {
                return Err(MoserError::Domain {
                    stage: "compose",
                    phi,
                    limit: valid_below,
                });
            }
        }
        Ok(())
    }
}

/// Builds the embedding for a chart form at flow horizon t_final, after
/// numerically spot-checking the form's contract: standard at the origin,
/// closed, rotation invariant, nondegenerate, and satisfying the moment
/// identity against its exact gradient.
pub fn construct_embedding(
    form: &ChartForm,
    t_final: f64,
    grid: &IntegrationGrid,
) -> Result<Embedding, MoserError> {
    grid.validate()?;
    if !(t_final.is_finite() && t_final >= 0.0) {
        return Err(MoserError::InvalidTime(t_final));
    }
    let d = form.dim();
    let m = form.complex_dim();

    let origin = vec![0.0; d];
    if max_abs(&(form.omega(&origin) - standard_matrix(m))) > 1e-12 {
        return Err(MoserError::InvalidForm(
            "form is not standard at the origin".into(),
        ));
    }
    if form.phi(&origin).abs() > 1e-12 {
        return Err(MoserError::InvalidForm(
            "moment map does not vanish at the origin".into(),
        ));
    }

    for x in validation_samples(form, 12) {
        let xs = x.as_slice();
        let omega = form.omega(xs);

        let closed = exterior_derivative_residual(|p| form.omega(p), xs, 1e-4);
        if closed > 1e-5 {
            return Err(MoserError::InvalidForm(format!(
                "form is not closed: residual {closed:.3e}"
            )));
        }

        for k in [1usize, 3, 5] {
            let r = rotation(m, 2.0 * std::f64::consts::PI * k as f64 / 8.0);
            let rx = &r * &x;
            let defect = max_abs(&(r.transpose() * form.omega(rx.as_slice()) * &r - &omega));
            if defect > 1e-8 {
                return Err(MoserError::InvalidForm(format!(
                    "form is not rotation invariant: defect {defect:.3e}"
                )));
            }
        }

        let mut xi = DVector::zeros(d);
        for b in 0..m {
            xi[2 * b] = -2.0 * std::f64::consts::PI * x[2 * b + 1];
            xi[2 * b + 1] = 2.0 * std::f64::consts::PI * x[2 * b];
        }
        let moment = (omega.transpose() * xi + form.phi_grad(xs)).amax();
        if moment > 1e-6 {
            return Err(MoserError::InvalidForm(format!(
                "moment identity fails: residual {moment:.3e}"
            )));
        }

        // Relative: a decaying density like the sphere's scales every
        // singular value down together, which is fine; collapse of one
        // direction against the others is not.
        let sv = omega.svd(false, false).singular_values;
        let largest = sv.iter().fold(0.0f64, |a, &b| a.max(b));
        let tiny = sv.iter().fold(f64::INFINITY, |a, &b| a.min(b));
        if tiny < 1e-4 * largest {
            return Err(MoserError::InvalidForm(format!(
                "form degenerates: singular values range {tiny:.3e} to {largest:.3e}"
            )));
        }
    }

    Ok(Embedding {
        form: form.clone(),
        grid: *grid,
        t_final,
    })
}

fn validation_samples(form: &ChartForm, count: usize) -> Vec<DVector<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let d = form.dim();
    let mut out = Vec::with_capacity(count);
    let mut attempts = 0;
    while out.len() < count && attempts < 10_000 {
        attempts += 1;
        let x = DVector::from_fn(d, |_, _| rng.gen_range(-0.9..0.9));
        if form.phi(x.as_slice()) < 0.9 * form.cap() {
            out.push(x);
        }
    }
    out
}

/// Deterministic verification samples for an embedding: uniform draws from a
/// centered box sized by ray bisection to ninety percent of the admissible
/// moment sublevel set (a fixed box when that set is the whole chart),
/// rejecting the overshoot. The same seed always yields the same points.
pub fn sample_admissible(
    embedding: &Embedding,
    seed: u64,
    count: usize,
) -> Result<Vec<DVector<f64>>, MoserError> {
    let form = embedding.form();
    let d = form.dim();
    let bound = 0.9 * embedding.domain_cap(embedding.t_final());
    let half_width = if bound.is_finite() {
        ray_radius(form, bound)
    } else {
        1.5
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points = Vec::with_capacity(count);
    let mut attempts = 0usize;
    let budget = 1000 + count.saturating_mul(500);
    while points.len() < count && attempts < budget {
        attempts += 1;
        let x = DVector::from_fn(d, |_, _| rng.gen_range(-half_width..half_width));
        if !bound.is_finite() || form.phi(x.as_slice()) < bound {
            points.push(x);
        }
    }
    if points.len() < count {
        return Err(MoserError::Sampling {
            requested: count,
            drawn: points.len(),
        });
    }
    Ok(points)
}

/// Radius at which the moment map on the first-axis ray reaches `bound`, by
/// doubling then bisection; the admissible chart forms increase along rays.
fn ray_radius(form: &ChartForm, bound: f64) -> f64 {
    let phi_at = |u: f64| {
        let mut x = vec![0.0; form.dim()];
        x[0] = u;
        form.phi(&x)
    };
    let mut hi = 1.0;
    while phi_at(hi) < bound && hi < 1e6 {
        hi *= 2.0;
    }
    let mut lo = 0.0;
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if phi_at(mid) < bound {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

/// Measures how far a candidate map is from pulling the standard form back
/// to the chart form: the worst entry of J^T Omega_std J - Omega(x) over the
/// samples, with J the centered-difference Jacobian at step h. For the first
/// few samples the rotation-equivariance defect |map(R x) - R map(x)| is
/// folded into the same maximum.
pub fn verify_pullback<M>(
    map: M,
    cf: &ChartForm,
    samples: &[DVector<f64>],
    h: f64,
) -> Result<f64, MoserError>
where
    M: Fn(&DVector<f64>) -> Result<DVector<f64>, MoserError>,
{
    let d = cf.dim();
    let m = cf.complex_dim();
    let standard = standard_matrix(m);
    let mut worst = 0.0f64;
    for (index, x) in samples.iter().enumerate() {
        let mut jac = DMatrix::zeros(d, d);
        let mut xp = x.clone();
        let mut xm = x.clone();
        for i in 0..d {
            xp[i] += h;
            xm[i] -= h;
            let col = (map(&xp)? - map(&xm)?) / (2.0 * h);
            jac.set_column(i, &col);
            xp[i] = x[i];
            xm[i] = x[i];
        }
        let residual = jac.transpose() * &standard * jac - cf.omega(x.as_slice());
        worst = worst.max(max_abs(&residual));
        if index < 8 {
            let fx = map(x)?;
            for k in 1..=3 {
                let r = rotation(m, std::f64::consts::FRAC_PI_4 * k as f64);
                let defect = (map(&(&r * x))? - r * &fx).amax();
                worst = worst.max(defect);
            }
        }
    }
    Ok(worst)
}
