//! Shared numerical utilities: finite differences, Gauss-Legendre quadrature,
//! Simpson integration, and a fixed-step RK4 integrator.

use nalgebra::{DMatrix, DVector};

/// Central-difference gradient of a scalar function.
pub fn gradient_fd(f: impl Fn(&[f64]) -> f64, x: &[f64], h: f64) -> Vec<f64> {
    let mut xp = x.to_vec();
    let mut out = Vec::with_capacity(x.len());
    for i in 0..x.len() {
        xp[i] = x[i] + h;
        let up = f(&xp);
        xp[i] = x[i] - h;
        let dn = f(&xp);
        xp[i] = x[i];
        out.push((up - dn) / (2.0 * h));
    }
    out
}

/// Central-difference Jacobian of a vector-valued function; rows index the
/// output, columns the input.
pub fn jacobian_fd(f: impl Fn(&[f64]) -> Vec<f64>, x: &[f64], h: f64) -> DMatrix<f64> {
    let mut xp = x.to_vec();
    let probe = f(x);
    let rows = probe.len();
    let mut jac = DMatrix::zeros(rows, x.len());
    for j in 0..x.len() {
        xp[j] = x[j] + h;
        let up = f(&xp);
        xp[j] = x[j] - h;
        let dn = f(&xp);
        xp[j] = x[j];
        for i in 0..rows {
            jac[(i, j)] = (up[i] - dn[i]) / (2.0 * h);
        }
    }
    jac
}

/// Gauss-Legendre nodes and weights on [0,1].
///
/// Roots of the Legendre polynomial by Newton iteration from the Chebyshev
/// initial guess; exact for polynomials of degree 2n-1.
pub fn gauss_legendre_unit(n: usize) -> Vec<(f64, f64)> {
    assert!(n >= 1, "quadrature needs at least one node");
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-15 {
                let (_, d) = legendre_with_derivative(n, x);
                dp = d;
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out.push(((x + 1.0) / 2.0, w / 2.0));
    }
    out.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    out
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for j in 2..=n {
        let jf = j as f64;
        let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Composite Simpson rule on [a,b]; `intervals` is rounded up to even.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, intervals: usize) -> f64 {
    let n = if intervals % 2 == 0 { intervals.max(2) } else { intervals + 1 };
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + i as f64 * h);
    }
    acc * h / 3.0
}

/// Classical fixed-step fourth-order Runge-Kutta from t0 to t1.
pub fn rk4_integrate(
    f: impl Fn(f64, &DVector<f64>) -> DVector<f64>,
    t0: f64,
    y0: DVector<f64>,
    t1: f64,
    steps: usize,
) -> DVector<f64> {
    assert!(steps >= 1);
    let h = (t1 - t0) / steps as f64;
    let mut y = y0;
    let mut t = t0;
    for _ in 0..steps {
        y = rk4_step(&f, t, &y, h);
        t += h;
    }
    y
}

/// One RK4 step of size h.
pub fn rk4_step(
    f: &impl Fn(f64, &DVector<f64>) -> DVector<f64>,
    t: f64,
    y: &DVector<f64>,
    h: f64,
) -> DVector<f64> {
    let k1 = f(t, y);
    let k2 = f(t + h / 2.0, &(y + &k1 * (h / 2.0)));
    let k3 = f(t + h / 2.0, &(y + &k2 * (h / 2.0)));
    let k4 = f(t + h, &(y + &k3 * h));
    y + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0)
}

/// Largest absolute entry of a matrix.
pub fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0f64, |acc, v| acc.max(v.abs()))
}

/// Finite-difference closedness residual of a 2-form given by its coefficient
/// matrix field: the largest component of d-omega over all index triples,
/// with each partial taken by central differences of step h.
pub fn exterior_derivative_residual(
    omega: impl Fn(&[f64]) -> DMatrix<f64>,
    x: &[f64],
    h: f64,
) -> f64 {
    let dim = x.len();
    let mut partials = Vec::with_capacity(dim);
    let mut xp = x.to_vec();
    for a in 0..dim {
        xp[a] = x[a] + h;
        let up = omega(&xp);
        xp[a] = x[a] - h;
        let dn = omega(&xp);
        xp[a] = x[a];
        partials.push((up - dn) / (2.0 * h));
    }
    let mut worst = 0.0f64;
    for a in 0..dim {
        for b in (a + 1)..dim {
            for c in (b + 1)..dim {
                let v = partials[a][(b, c)] - partials[b][(a, c)] + partials[c][(a, b)];
                worst = worst.max(v.abs());
            }
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gradient_of_quadratic() {
        let f = |x: &[f64]| x[0] * x[0] + 3.0 * x[0] * x[1];
        let g = gradient_fd(f, &[2.0, 1.0], 1e-5);
        assert!((g[0] - 7.0).abs() < 1e-8);
        assert!((g[1] - 6.0).abs() < 1e-8);
    }

    #[test]
    fn jacobian_of_linear_map() {
        let f = |x: &[f64]| vec![2.0 * x[0] + x[1], -x[0] + 4.0 * x[1]];
        let j = jacobian_fd(f, &[0.3, -0.7], 1e-5);
        let expect = DMatrix::from_row_slice(2, 2, &[2.0, 1.0, -1.0, 4.0]);
        assert!(max_abs(&(j - expect)) < 1e-9);
    }

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        for n in [2usize, 5, 12, 24] {
            let rule = gauss_legendre_unit(n);
            let total: f64 = rule.iter().map(|(_, w)| w).sum();
            assert!((total - 1.0).abs() < 1e-13, "weights sum {total} at n={n}");
            // x^(2n-1) integrates to 1/(2n) exactly.
            let p = 2 * n as i32 - 1;
            let val: f64 = rule.iter().map(|(x, w)| w * x.powi(p)).sum();
            assert!(
                (val - 1.0 / (2.0 * n as f64)).abs() < 1e-12,
                "degree {p} at n={n}: {val}"
            );
        }
    }

    #[test]
    fn simpson_matches_smooth_integral() {
        let v = simpson(|x| (2.0 * x).sin(), 0.0, 1.0, 128);
        let exact = (1.0 - (2.0f64).cos()) / 2.0;
        assert!((v - exact).abs() < 1e-9);
    }

    #[test]
    fn rk4_solves_exponential_decay() {
        let y = rk4_integrate(|_, y| -y.clone(), 0.0, DVector::from_vec(vec![1.0]), 2.0, 200);
        assert!((y[0] - (-2.0f64).exp()).abs() < 1e-8);
    }
}
