//! Built-in chart forms. Each one is standard at the origin (Darboux chart
//! already applied), invariant under the diagonal rotation with all weights
//! one, and carries its moment map and gradient in closed form, so the engine
//! only ever differentiates numerically where the construction itself is
//! numerical.

use super::MoserError;
use nalgebra::{DMatrix, DVector};

/// How the chart form is reduced to the standard form on an inner region.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InnerNormalization {
    /// The form literally equals the standard one on {Phi < valid_below};
    /// the normalizing map is the identity there.
    Identity { valid_below: f64 },
    /// Rotation-invariant form on the plane, normalized by the radial area
    /// map x -> sqrt(Phi(x)/pi)/|x| * x, valid on the whole domain.
    RadialArea,
}

#[derive(Debug, Clone, PartialEq)]
enum Kind {
    Standard { m: usize },
    Radial(Density),
    Annulus { amp: f64, lo: f64, hi: f64 },
}

/// Rotation-invariant densities f with omega = f(|x|^2) dx dy and f(0) = 1.
#[derive(Debug, Clone, PartialEq)]
enum Density {
    /// Unit-area sphere in its affine chart: f(s) = (1 + pi s)^{-2}.
    Cp1,
    /// f(s) = 1 + amp * s * exp(-s).
    Gauss { amp: f64 },
    /// f(s) = 1 + amp * (4u(1-u))^5 with u the position inside [lo, hi];
    /// standard both near the origin and far out.
    Bump { amp: f64, lo: f64, hi: f64 },
}

impl Density {
    fn f(&self, s: f64) -> f64 {
        match *self {
            Density::Cp1 => {
                let d = 1.0 + std::f64::consts::PI * s;
                1.0 / (d * d)
            }
            Density::Gauss { amp } => 1.0 + amp * s * (-s).exp(),
            Density::Bump { amp, lo, hi } => 1.0 + amp * bump5(unit_pos(s, lo, hi)),
        }
    }

    /// Exact antiderivative: int_0^s f(u) du.
    fn int_f(&self, s: f64) -> f64 {
        match *self {
            Density::Cp1 => s / (1.0 + std::f64::consts::PI * s),
            Density::Gauss { amp } => s + amp * (1.0 - (1.0 + s) * (-s).exp()),
            Density::Bump { amp, lo, hi } => {
                s + amp * (hi - lo) * bump5_antiderivative(unit_pos(s, lo, hi))
            }
        }
    }
}

/// (4u(1-u))^5 on (0,1), zero outside: a C^4 bump with unit peak.
fn bump5(u: f64) -> f64 {
    if u <= 0.0 || u >= 1.0 {
        return 0.0;
    }
    let b = 4.0 * u * (1.0 - u);
    b.powi(5)
}

/// d/du of bump5.
fn bump5_prime(u: f64) -> f64 {
    if u <= 0.0 || u >= 1.0 {
        return 0.0;
    }
    let b = 4.0 * u * (1.0 - u);
    20.0 * b.powi(4) * (1.0 - 2.0 * u)
}

/// int_0^u bump5, with u clamped to [0,1]; equals 256/693 at u = 1.
fn bump5_antiderivative(u: f64) -> f64 {
    let u = u.clamp(0.0, 1.0);
    let p = |k: i32| u.powi(k);
    1024.0
        * (p(6) / 6.0 - 5.0 * p(7) / 7.0 + 5.0 * p(8) / 4.0 - 10.0 * p(9) / 9.0 + p(10) / 2.0
            - p(11) / 11.0)
}

fn unit_pos(s: f64, lo: f64, hi: f64) -> f64 {
    (s - lo) / (hi - lo)
}

/// A symplectic form on a star-shaped chart of R^{2m}, standard at the
/// origin, with the moment map of the diagonal rotation action.
#[derive(Debug, Clone, PartialEq)]
pub struct ChartForm {
    name: String,
    kind: Kind,
    cap: f64,
    inner: InnerNormalization,
}

impl ChartForm {
    /// The standard form on R^{2m}, m = 1 or 2.
    pub fn standard(m: usize) -> Result<Self, MoserError> {
        if !(1..=2).contains(&m) {
            return Err(MoserError::InvalidForm(format!(
                "complex dimension must be 1 or 2, got {m}"
            )));
        }
        Ok(ChartForm {
            name: if m == 1 {
                "standard".into()
            } else {
                format!("standard:{m}")
            },
            kind: Kind::Standard { m },
            cap: f64::INFINITY,
            inner: InnerNormalization::Identity {
                valid_below: f64::INFINITY,
            },
        })
    }

    /// The unit-area sphere minus a point, in the chart where the form is
    /// standard at the origin: density (1 + pi r^2)^{-2}, moment map
    /// pi r^2 / (1 + pi r^2), capacity 1.
    pub fn cp1() -> Self {
        ChartForm {
            name: "cp1".into(),
            kind: Kind::Radial(Density::Cp1),
            cap: 1.0,
            inner: InnerNormalization::RadialArea,
        }
    }

    /// Rotation-invariant density 1 + amp * r^2 exp(-r^2) on the plane.
    pub fn gauss(amp: f64) -> Result<Self, MoserError> {
        if !amp.is_finite() || amp.abs() > 2.0 {
            return Err(MoserError::InvalidForm(format!(
                "gauss amplitude must lie in [-2, 2], got {amp}"
            )));
        }
        Ok(ChartForm {
            name: format!("radial:gauss:{amp}"),
            kind: Kind::Radial(Density::Gauss { amp }),
            cap: f64::INFINITY,
            inner: InnerNormalization::RadialArea,
        })
    }

    /// Rotation-invariant density perturbed by a compactly supported bump on
    /// lo <= r^2 <= hi; standard near the origin so the inner normalization
    /// is the identity.
    pub fn bump(amp: f64, lo: f64, hi: f64) -> Result<Self, MoserError> {
        if !(amp.is_finite() && amp > -0.95 && amp.abs() <= 2.0) {
            return Err(MoserError::InvalidForm(format!(
                "bump amplitude must lie in (-0.95, 2], got {amp}"
            )));
        }
        if !(lo.is_finite() && hi.is_finite() && 0.0 < lo && lo < hi) {
            return Err(MoserError::InvalidForm(format!(
                "bump support needs 0 < lo < hi, got [{lo}, {hi}]"
            )));
        }
        let margin = if amp >= 0.0 { 1.0 } else { 1.0 + amp };
        Ok(ChartForm {
            name: format!("radial:bump:{amp}:{lo}:{hi}"),
            kind: Kind::Radial(Density::Bump { amp, lo, hi }),
            cap: f64::INFINITY,
            inner: InnerNormalization::Identity {
                valid_below: std::f64::consts::PI * lo * margin,
            },
        })
    }

    /// Two complex dimensions: standard plus d(rho(s) alpha_1) with
    /// rho a bump in s = |z1|^2 + |z2|^2 and alpha_1 = x1 dy1 - y1 dx1.
    /// Rotation invariant but not radial, so the Moser corrector does real
    /// work.
    pub fn annulus(amp: f64, lo: f64, hi: f64) -> Result<Self, MoserError> {
        if !(amp.is_finite() && amp.abs() <= 0.2) {
            return Err(MoserError::InvalidForm(format!(
                "annulus amplitude must lie in [-0.2, 0.2], got {amp}"
            )));
        }
        if !(lo.is_finite() && hi.is_finite() && 0.0 < lo && lo < hi) {
            return Err(MoserError::InvalidForm(format!(
                "annulus support needs 0 < lo < hi, got [{lo}, {hi}]"
            )));
        }
        // The perturbation of the standard matrix is bounded in norm by
        // 2|amp| (1 + 2 sup|bump5'| hi / (hi - lo)), with sup|bump5'| < 4.2.
        // Keep it under 0.9 so the form stays nondegenerate on the support.
        if 2.0 * amp.abs() * (1.0 + 8.4 * hi / (hi - lo)) > 0.9 {
            return Err(MoserError::InvalidForm(format!(
                "annulus amplitude {amp} is too strong for support [{lo}, {hi}]: \
                 the form would degenerate"
            )));
        }
        let margin = (1.0 - 2.0 * amp.abs()).max(0.05);
        Ok(ChartForm {
            name: format!("annulus:{amp}:{lo}:{hi}"),
            kind: Kind::Annulus { amp, lo, hi },
            cap: f64::INFINITY,
            inner: InnerNormalization::Identity {
                valid_below: std::f64::consts::PI * lo * margin,
            },
        })
    }

    /// Parses "standard", "standard:2", "cp1", "radial:gauss[:amp]",
    /// "radial:bump[:amp[:lo[:hi]]]", or "annulus[:amp[:lo[:hi]]]".
    pub fn by_name(spec: &str) -> Result<Self, MoserError> {
        let parts: Vec<&str> = spec.split(':').collect();
        let num = |s: &str| -> Result<f64, MoserError> {
            s.parse::<f64>()
                .map_err(|_| MoserError::InvalidForm(format!("bad number '{s}' in '{spec}'")))
        };
        match parts[0] {
            "standard" => match parts.len() {
                1 => ChartForm::standard(1),
                2 => {
                    let m = parts[1].parse::<usize>().map_err(|_| {
                        MoserError::InvalidForm(format!("bad dimension '{}'", parts[1]))
                    })?;
                    ChartForm::standard(m)
                }
                _ => Err(MoserError::InvalidForm(format!(
                    "too many arguments in '{spec}'"
                ))),
            },
            "cp1" if parts.len() == 1 => Ok(ChartForm::cp1()),
            "radial" if parts.len() >= 2 => {
                let args: Result<Vec<f64>, _> = parts[2..].iter().map(|s| num(s)).collect();
                let args = args?;
                match (parts[1], args.len()) {
                    ("gauss", 0) => ChartForm::gauss(0.3),
                    ("gauss", 1) => ChartForm::gauss(args[0]),
                    ("bump", 0) => ChartForm::bump(0.3, 0.5, 1.5),
                    ("bump", 1) => ChartForm::bump(args[0], 0.5, 1.5),
                    ("bump", 3) => ChartForm::bump(args[0], args[1], args[2]),
                    _ => Err(MoserError::InvalidForm(format!(
                        "unknown radial form '{spec}'"
                    ))),
                }
            }
            "annulus" => {
                let args: Result<Vec<f64>, _> = parts[1..].iter().map(|s| num(s)).collect();
                let args = args?;
                match args.len() {
                    0 => ChartForm::annulus(0.02, 0.5, 1.5),
                    1 => ChartForm::annulus(args[0], 0.5, 1.5),
                    3 => ChartForm::annulus(args[0], args[1], args[2]),
                    _ => Err(MoserError::InvalidForm(format!(
                        "annulus takes 0, 1, or 3 arguments, got '{spec}'"
                    ))),
                }
            }
            _ => Err(MoserError::InvalidForm(format!("unknown form '{spec}'"))),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Complex dimension m; the chart lives in R^{2m}.
    pub fn complex_dim(&self) -> usize {
        match self.kind {
            Kind::Standard { m } => m,
            Kind::Radial(_) => 1,
            Kind::Annulus { .. } => 2,
        }
    }

    pub fn dim(&self) -> usize {
        2 * self.complex_dim()
    }

    /// Supremum of the moment map over the chart; the open ball
    /// {Phi_std < cap} is the embedding target at full size.
    pub fn cap(&self) -> f64 {
        self.cap
    }

    pub fn inner(&self) -> InnerNormalization {
        self.inner
    }

    /// Coefficient matrix of the form at x: omega(v, w) = v^T Omega(x) w in
    /// coordinates (x1, y1, x2, y2, ...).
    pub fn omega(&self, x: &[f64]) -> DMatrix<f64> {
        assert_eq!(x.len(), self.dim(), "point dimension");
        match &self.kind {
            Kind::Standard { m } => standard_matrix(*m),
            Kind::Radial(d) => {
                let s = x[0] * x[0] + x[1] * x[1];
                standard_matrix(1) * d.f(s)
            }
            Kind::Annulus { amp, lo, hi } => {
                let (x1, y1, x2, y2) = (x[0], x[1], x[2], x[3]);
                let s1 = x1 * x1 + y1 * y1;
                let s = s1 + x2 * x2 + y2 * y2;
                let u = unit_pos(s, *lo, *hi);
                let rho = amp * bump5(u);
                let rho_p = amp * bump5_prime(u) / (hi - lo);
                let mut w = DMatrix::zeros(4, 4);
                let d11 = 1.0 + 2.0 * rho + 2.0 * rho_p * s1;
                w[(0, 1)] = d11;
                w[(2, 3)] = 1.0;
                w[(0, 2)] = 2.0 * rho_p * y1 * x2;
                w[(1, 2)] = -2.0 * rho_p * x1 * x2;
                w[(0, 3)] = 2.0 * rho_p * y1 * y2;
                w[(1, 3)] = -2.0 * rho_p * x1 * y2;
                let upper = w.clone();
                w -= upper.transpose();
                w
            }
        }
    }

    /// Moment map of the diagonal rotation with all weights one, normalized
    /// by Phi(0) = 0 and iota(xi) omega = -dPhi for the period-one generator.
    pub fn phi(&self, x: &[f64]) -> f64 {
        assert_eq!(x.len(), self.dim(), "point dimension");
        let pi = std::f64::consts::PI;
        match &self.kind {
            Kind::Standard { .. } => pi * x.iter().map(|v| v * v).sum::<f64>(),
            Kind::Radial(d) => {
                let s = x[0] * x[0] + x[1] * x[1];
                pi * d.int_f(s)
            }
            Kind::Annulus { amp, lo, hi } => {
                let s1 = x[0] * x[0] + x[1] * x[1];
                let s = s1 + x[2] * x[2] + x[3] * x[3];
                let rho = amp * bump5(unit_pos(s, *lo, *hi));
                pi * s + 2.0 * pi * rho * s1
            }
        }
    }

    /// Exact gradient of the moment map.
    pub fn phi_grad(&self, x: &[f64]) -> DVector<f64> {
        assert_eq!(x.len(), self.dim(), "point dimension");
        let pi = std::f64::consts::PI;
        match &self.kind {
            Kind::Standard { .. } => DVector::from_iterator(x.len(), x.iter().map(|v| 2.0 * pi * v)),
            Kind::Radial(d) => {
                let s = x[0] * x[0] + x[1] * x[1];
                let c = 2.0 * pi * d.f(s);
                DVector::from_column_slice(&[c * x[0], c * x[1]])
            }
            Kind::Annulus { amp, lo, hi } => {
                let (x1, y1, x2, y2) = (x[0], x[1], x[2], x[3]);
                let s1 = x1 * x1 + y1 * y1;
                let s = s1 + x2 * x2 + y2 * y2;
                let u = unit_pos(s, *lo, *hi);
                let rho = amp * bump5(u);
                let rho_p = amp * bump5_prime(u) / (hi - lo);
                let inner = 2.0 * pi * (1.0 + 2.0 * rho_p * s1 + 2.0 * rho);
                let outer = 2.0 * pi * (1.0 + 2.0 * rho_p * s1);
                DVector::from_column_slice(&[inner * x1, inner * y1, outer * x2, outer * y2])
            }
        }
    }

    /// Density value f(s) for rotation-invariant single-block forms; None for
    /// the others. Used by the engine's closed-form inner Euler branch.
    pub(crate) fn radial_f(&self, s: f64) -> Option<f64> {
        match &self.kind {
            Kind::Standard { m: 1 } => Some(1.0),
            Kind::Radial(d) => Some(d.f(s)),
            _ => None,
        }
    }

    /// The s-interval where the form deviates from a globally smooth profile
    /// only piecewise: rays crossing it are split there for quadrature, since
    /// the bump is merely C^4 at its support boundary.
    pub(crate) fn support_breaks(&self) -> Option<(f64, f64)> {
        match &self.kind {
            Kind::Radial(Density::Bump { lo, hi, .. }) => Some((*lo, *hi)),
            Kind::Annulus { lo, hi, .. } => Some((*lo, *hi)),
            _ => None,
        }
    }

    /// Whether the Moser corrector vanishes identically for this form. For
    /// forms radial per complex block, both branches of the lifted Euler
    /// field reduce to a(s) x with a = A(s)/(2 s f(s)), which is exactly the
    /// coefficient making the Lie derivative of the primitive reproduce the
    /// primitive; the pulled-back primitive is then constant in flow time,
    /// so the corrector equation has the zero solution. Only the
    /// block-mixing annulus needs the numerical corrector.
    pub(crate) fn corrector_vanishes(&self) -> bool {
        !matches!(self.kind, Kind::Annulus { .. })
    }

    /// Exact radial homotopy primitive for forms radial in each complex
    /// coordinate: lambda = A(s)/(2s) (-y, x) per block, A the density's
    /// area integral, so d lambda = omega without quadrature. None when the
    /// form mixes blocks and only the ray integral is available. Decaying
    /// densities concentrate the ray integrand near the origin, so the
    /// closed form stays accurate at radii where quadrature degrades.
    pub(crate) fn closed_primitive(&self, x: &[f64]) -> Option<DVector<f64>> {
        match &self.kind {
            Kind::Standard { .. } => Some(DVector::from_iterator(
                x.len(),
                x.chunks_exact(2).flat_map(|p| [-0.5 * p[1], 0.5 * p[0]]),
            )),
            Kind::Radial(d) => {
                let s = x[0] * x[0] + x[1] * x[1];
                let h = if s == 0.0 { 0.5 } else { d.int_f(s) / (2.0 * s) };
                Some(DVector::from_column_slice(&[-h * x[1], h * x[0]]))
            }
            Kind::Annulus { .. } => None,
        }
    }
}

/// Block-diagonal standard coefficient matrix: omega(e_x, e_y) = 1 per block.
pub(crate) fn standard_matrix(m: usize) -> DMatrix<f64> {
    let mut w = DMatrix::zeros(2 * m, 2 * m);
    for b in 0..m {
        w[(2 * b, 2 * b + 1)] = 1.0;
        w[(2 * b + 1, 2 * b)] = -1.0;
    }
    w
}
