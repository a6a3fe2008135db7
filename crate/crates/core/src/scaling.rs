//! Complex-scaling contours and the scaled Laplacian symbol.
//!
//! The contour `g : [0, ∞) → ℂ` is parametrised by arc length: `g′(t) = e^{iα(t)}`
//! with `α = arg(1 + iθ)` up to `t_inner`, `α = arg(1 + iφ)` from `t_outer` on,
//! and a quintic smoothstep in between. `g` itself is the integral of `g′`, so
//! `|g′| = 1` holds by construction. With `θ = √3` the inner piece is exactly
//! `t e^{iπ/3}`.
//!
//! The symbol of the scaled Laplacian at a point with Hessian `H = f″(x)` is
//! `p = ⟨(1 + iθH)^{−1}ξ, (1 + iθH)^{−1}ξ⟩` (bilinear pairing), which splits as
//! `a − ib` with `a = ⟨(1 − θ²H²)ξ̃, ξ̃⟩`, `b = 2θ⟨Hξ̃, ξ̃⟩`, `ξ̃ = (1 + θ²H²)^{−1}ξ`.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::linalg::{gauss_legendre, solve_dense};
use crate::{Error, Real, Result};

const QUAD_PANELS: usize = 8;
const QUAD_ORDER: usize = 16;

/// Arc-length contour with inner slope `θ` and far-field slope `φ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContourSpec<T> {
    pub theta: T,
    pub phi: T,
    pub t_inner: T,
    pub t_outer: T,
}

impl<T: Real> ContourSpec<T> {
    pub fn new(theta: T, phi: T, t_inner: T, t_outer: T) -> Result<Self> {
        let finite = [theta, phi, t_inner, t_outer].iter().all(|v| v.is_finite());
        if !finite || !(theta > T::zero()) {
            return Err(Error::InvalidInput(format!(
                "theta must be positive and finite, got {theta}"
            )));
        }
        if !(phi > T::zero() && phi <= theta) {
            return Err(Error::InvalidInput(format!("phi must lie in (0, theta], got {phi}")));
        }
        if !(t_inner > T::zero() && t_outer > t_inner) {
            return Err(Error::InvalidInput(format!(
                "need 0 < t_inner < t_outer, got {t_inner}, {t_outer}"
            )));
        }
        Ok(ContourSpec {
            theta,
            phi,
            t_inner,
            t_outer,
        })
    }

    /// Defaults for interval length `1/L`: `φ = θ/4`, `t_inner = 1/(2L)`,
    /// `t_outer = 2/L`.
    pub fn with_defaults(theta: T, l: T) -> Result<Self> {
        if !(l > T::zero()) {
            return Err(Error::InvalidInput(format!("L must be positive, got {l}")));
        }
        ContourSpec::new(theta, theta / T::lit(4.0), T::lit(0.5) / l, T::lit(2.0) / l)
    }

    /// The contour that equals `t e^{iπ/3}` near `0` (`θ = √3`).
    pub fn sixty_degree(l: T) -> Result<Self> {
        ContourSpec::with_defaults(T::lit(3.0).sqrt(), l)
    }

    pub fn inner_angle(&self) -> T {
        self.theta.atan()
    }

    pub fn outer_angle(&self) -> T {
        self.phi.atan()
    }

    /// `arg g′(t)`.
    pub fn angle(&self, t: T) -> T {
        let (a_in, a_out) = (self.inner_angle(), self.outer_angle());
        if t <= self.t_inner {
            a_in
        } else if t >= self.t_outer {
            a_out
        } else {
            let x = (t - self.t_inner) / (self.t_outer - self.t_inner);
            let s = x * x * x * (x * (x * T::lit(6.0) - T::lit(15.0)) + T::lit(10.0));
            a_in + (a_out - a_in) * s
        }
    }

    fn transition_integral(&self, t: T) -> Complex<T> {
        // ∫_{t_inner}^{t} e^{iα(s)} ds, composite Gauss–Legendre.
        let (x, w) = gauss_legendre::<T>(QUAD_ORDER);
        let width = (t - self.t_inner) / T::from_usize(QUAD_PANELS).unwrap();
        let half = width * T::lit(0.5);
        let mut acc = Complex::new(T::zero(), T::zero());
        for p in 0..QUAD_PANELS {
            let mid = self.t_inner + width * (T::from_usize(p).unwrap() + T::lit(0.5));
            for (xi, wi) in x.iter().zip(&w) {
                let s = mid + half * *xi;
                acc = acc + Complex::from_polar(*wi * half, self.angle(s));
            }
        }
        acc
    }

    /// `g(t_outer) − t_outer·e^{i arg(1+iφ)}`: the constant offset of the far
    /// field `g(t) = t (1+iφ)/|1+iφ| + offset`.
    pub fn far_offset(&self) -> Complex<T> {
        let g_out = Complex::from_polar(self.t_inner, self.inner_angle()) + self.transition_integral(self.t_outer);
        g_out - Complex::from_polar(self.t_outer, self.outer_angle())
    }
}

/// `(g(t), g′(t))`.
pub fn contour_g<T: Real>(spec: &ContourSpec<T>, t: T) -> Result<(Complex<T>, Complex<T>)> {
    if !(t >= T::zero()) || !t.is_finite() {
        return Err(Error::InvalidInput(format!("contour parameter must be >= 0, got {t}")));
    }
    let gp = Complex::from_polar(T::one(), spec.angle(t));
    let g = if t <= spec.t_inner {
        Complex::from_polar(t, spec.inner_angle())
    } else if t >= spec.t_outer {
        Complex::from_polar(t, spec.outer_angle()) + spec.far_offset()
    } else {
        Complex::from_polar(spec.t_inner, spec.inner_angle()) + spec.transition_integral(t)
    };
    Ok((g, gp))
}

/// Result of sampling the contour invariants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContourCheck<T> {
    /// `max | |g′(t)| − 1 |`.
    pub max_speed_error: T,
    /// Largest violation of `arg(1+iφ) <= arg g(t) <= arg(1+iθ)` (`<= 0` if none).
    pub arg_g_violation: T,
    /// Largest violation of `arg g′(t) <= arg(1+iθ)` and `arg(1+iφ)/2 <= arg g′(t)`.
    pub arg_gp_violation: T,
}

/// Samples `n` points of `(0, t_max]` and measures the contour invariants.
pub fn check_contour<T: Real>(spec: &ContourSpec<T>, t_max: T, n: usize) -> Result<ContourCheck<T>> {
    let (lo, hi) = (spec.outer_angle(), spec.inner_angle());
    let mut out = ContourCheck {
        max_speed_error: T::zero(),
        arg_g_violation: T::neg_infinity(),
        arg_gp_violation: T::neg_infinity(),
    };
    for k in 1..=n {
        let t = t_max * T::from_usize(k).unwrap() / T::from_usize(n).unwrap();
        let (g, gp) = contour_g(spec, t)?;
        out.max_speed_error = out.max_speed_error.max((gp.norm() - T::one()).abs());
        let ag = g.arg();
        // Rounding slack: arg g equals the bounds exactly on the straight pieces.
        let slack = T::epsilon() * T::lit(64.0);
        out.arg_g_violation = out.arg_g_violation.max(lo - ag - slack).max(ag - hi - slack);
        let agp = gp.arg();
        out.arg_gp_violation = out
            .arg_gp_violation
            .max(lo * T::lit(0.5) - agp - slack)
            .max(agp - hi - slack);
    }
    Ok(out)
}

/// Symbol value and its real decomposition `p = a − ib`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymbolValue<T> {
    pub p: Complex<T>,
    pub a: T,
    pub b: T,
}

/// `p_θ(x, ξ)` for a symmetric Hessian `hess` (row-major, `n × n`).
pub fn symbol_p<T: Real>(theta: T, hess: &[Vec<T>], xi: &[T]) -> Result<SymbolValue<T>> {
    let n = xi.len();
    if hess.len() != n || hess.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidInput("hessian and covector dimensions differ".into()));
    }
    let cz = |v: T| Complex::new(v, T::zero());
    // v = (I + iθH)^{-1} ξ.
    let m: Vec<Vec<Complex<T>>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let d = if i == j { T::one() } else { T::zero() };
                    Complex::new(d, theta * hess[i][j])
                })
                .collect()
        })
        .collect();
    let v = solve_dense(m, xi.iter().map(|x| cz(*x)).collect())?;
    let p = v.iter().fold(cz(T::zero()), |acc, z| acc + *z * *z);

    // ξ̃ = (I + θ²H²)^{-1} ξ.
    let h2 = |i: usize, j: usize| (0..n).map(|k| hess[i][k] * hess[k][j]).sum::<T>();
    let t2 = theta * theta;
    let m2: Vec<Vec<Complex<T>>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let d = if i == j { T::one() } else { T::zero() };
                    cz(d + t2 * h2(i, j))
                })
                .collect()
        })
        .collect();
    let xt: Vec<T> = solve_dense(m2, xi.iter().map(|x| cz(*x)).collect())?
        .into_iter()
        .map(|z| z.re)
        .collect();
    let mut a = T::zero();
    let mut b = T::zero();
    for i in 0..n {
        for j in 0..n {
            let d = if i == j { T::one() } else { T::zero() };
            a = a + (d - t2 * h2(i, j)) * xt[i] * xt[j];
            b = b + T::lit(2.0) * theta * hess[i][j] * xt[i] * xt[j];
        }
    }
    Ok(SymbolValue { p, a, b })
}

/// Field `x ↦ f″(x)` outside an obstacle.
pub trait HessianField<T: Real>: Send + Sync {
    fn dim(&self) -> usize;
    fn hessian(&self, x: &[T]) -> Result<Vec<Vec<T>>>;
}

/// Hessian of `f = ½ d(x)²` outside the ball of radius `R` centred at the
/// origin: `ω̂ω̂ᵀ + (d/|x|)(I − ω̂ω̂ᵀ)` with `ω̂ = x/|x|`, `d = |x| − R`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BallDistanceHessian<T> {
    pub radius: T,
}

impl<T: Real> BallDistanceHessian<T> {
    pub fn new(radius: T) -> Result<Self> {
        if radius > T::zero() && radius.is_finite() {
            Ok(BallDistanceHessian { radius })
        } else {
            Err(Error::InvalidInput(format!(
                "ball radius must be positive, got {radius}"
            )))
        }
    }
}

impl<T: Real> HessianField<T> for BallDistanceHessian<T> {
    fn dim(&self) -> usize {
        3
    }

    fn hessian(&self, x: &[T]) -> Result<Vec<Vec<T>>> {
        let r = x.iter().map(|v| *v * *v).sum::<T>().sqrt();
        if x.len() != 3 || !(r >= self.radius) {
            return Err(Error::InvalidInput("point must lie outside the ball".into()));
        }
        let w: Vec<T> = x.iter().map(|v| *v / r).collect();
        let tang = (r - self.radius) / r;
        Ok((0..3)
            .map(|i| {
                (0..3)
                    .map(|j| {
                        let d = if i == j { T::one() } else { T::zero() };
                        w[i] * w[j] + tang * (d - w[i] * w[j])
                    })
                    .collect()
            })
            .collect())
    }
}

/// Where the argument window was tightest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindowReport<T> {
    /// Largest `ε` with `ε <= −arg p <= π − ε` on every sample.
    pub epsilon: T,
    /// Distance to the boundary of the worst sample.
    pub worst_t: T,
    pub worst_point: Vec<T>,
    pub worst_xi: Vec<T>,
}

fn fibonacci_sphere<T: Real>(n: usize) -> Vec<[T; 3]> {
    let golden = T::PI() * (T::lit(3.0) - T::lit(5.0).sqrt());
    (0..n)
        .map(|k| {
            let kf = T::from_usize(k).unwrap();
            let z = T::one() - T::lit(2.0) * (kf + T::lit(0.5)) / T::from_usize(n).unwrap();
            let rho = (T::one() - z * z).max(T::zero()).sqrt();
            let (s, c) = (golden * kf).sin_cos();
            [rho * c, rho * s, z]
        })
        .collect()
}

fn orthonormal_frame<T: Real>(w: [T; 3]) -> ([T; 3], [T; 3]) {
    let helper = if w[0].abs() < T::lit(0.9) {
        [T::one(), T::zero(), T::zero()]
    } else {
        [T::zero(), T::one(), T::zero()]
    };
    let d = w[0] * helper[0] + w[1] * helper[1] + w[2] * helper[2];
    let mut e1 = [helper[0] - d * w[0], helper[1] - d * w[1], helper[2] - d * w[2]];
    let n1 = (e1[0] * e1[0] + e1[1] * e1[1] + e1[2] * e1[2]).sqrt();
    for v in e1.iter_mut() {
        *v = *v / n1;
    }
    let e2 = [
        w[1] * e1[2] - w[2] * e1[1],
        w[2] * e1[0] - w[0] * e1[2],
        w[0] * e1[1] - w[1] * e1[0],
    ];
    (e1, e2)
}

/// Largest `ε` with `ε <= −arg p_θ <= π − ε` over samples of the exterior of a
/// ball with `θ = spec.theta`.
///
/// Distances `t` run geometrically over `[δ, max(4·t_outer, 10δ)]`
/// (`sample_n` values), boundary points over 4 fixed directions and
/// covectors over `sample_n` Fibonacci-sphere directions plus the normal and
/// two tangent directions at each point.
pub fn arg_window_check<T: Real>(
    spec: &ContourSpec<T>,
    field: &BallDistanceHessian<T>,
    delta: T,
    sample_n: usize,
) -> Result<WindowReport<T>> {
    if !(delta > T::zero()) {
        return Err(Error::InvalidInput(format!("delta must be positive, got {delta}")));
    }
    if sample_n < 2 {
        return Err(Error::InvalidInput("sample_n must be at least 2".into()));
    }
    let t_far = (spec.t_outer * T::lit(4.0)).max(delta * T::lit(10.0));
    let ratio = (t_far / delta).ln() / T::from_usize(sample_n - 1).unwrap();
    let points: Vec<[T; 3]> = fibonacci_sphere(4);
    let dirs: Vec<[T; 3]> = fibonacci_sphere(sample_n);
    let mut report = WindowReport {
        epsilon: T::infinity(),
        worst_t: delta,
        worst_point: vec![],
        worst_xi: vec![],
    };
    for k in 0..sample_n {
        let t = delta * (ratio * T::from_usize(k).unwrap()).exp();
        for w in &points {
            let x: Vec<T> = w.iter().map(|c| *c * (field.radius + t)).collect();
            let hess = field.hessian(&x)?;
            let (e1, e2) = orthonormal_frame(*w);
            let extra = [*w, e1, e2];
            for xi in dirs.iter().chain(extra.iter()) {
                let s = symbol_p(spec.theta, &hess, xi)?;
                let neg_arg = -s.p.arg();
                let eps = neg_arg.min(T::PI() - neg_arg);
                if eps < report.epsilon {
                    report = WindowReport {
                        epsilon: eps,
                        worst_t: t,
                        worst_point: x.clone(),
                        worst_xi: xi.to_vec(),
                    };
                }
            }
        }
    }
    Ok(report)
}
