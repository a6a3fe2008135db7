//! Parametric surfaces in ℝ³, principal curvatures and the barrier constant
//! `S = 2^{−1/3} cos(π/6) ζ₁′ (min K)^{2/3}`.
//!
//! Surfaces expose analytic second-order jets on a small atlas of charts;
//! curvatures are the eigenvalues of the second fundamental form with respect
//! to the first, with the second form taken against the outward normal so a
//! convex body has positive curvatures.

use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::roots::{find_zeros, Rect};
use crate::{csfun, Error, Real, Result};

/// Condition number of the first fundamental form beyond which a point is
/// treated as a coordinate singularity.
pub const MAX_METRIC_CONDITION: f64 = 1e12;

/// Position and first/second partial derivatives of a chart at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet<T> {
    pub r: [T; 3],
    pub ru: [T; 3],
    pub rv: [T; 3],
    pub ruu: [T; 3],
    pub ruv: [T; 3],
    pub rvv: [T; 3],
}

/// A point in a chart of a surface atlas.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChartPoint<T> {
    pub chart: usize,
    pub u: T,
    pub v: T,
}

/// Regular parametrised surface given by an atlas of charts whose images
/// together cover it. Chart orientation must make `r_u × r_v` point outward.
pub trait ParametricSurface<T: Real>: Send + Sync {
    fn chart_count(&self) -> usize;
    /// `((u_min, u_max), (v_min, v_max))` of a chart.
    fn domain(&self, chart: usize) -> ((T, T), (T, T));
    fn jet(&self, chart: usize, u: T, v: T) -> Jet<T>;
}

fn dot<T: Real>(a: [T; 3], b: [T; 3]) -> T {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross<T: Real>(a: [T; 3], b: [T; 3]) -> [T; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// Triaxial ellipsoid `x²/a² + y²/b² + z²/c² = 1`.
///
/// Two charts: chart 0 uses the polar angle about the z-axis, chart 1 about
/// the x-axis; each polar angle is restricted to `[π/4 − m, 3π/4 + m]` so
/// neither chart reaches its poles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Ellipsoid<T> {
    pub a: T,
    pub b: T,
    pub c: T,
}

impl<T: Real> Ellipsoid<T> {
    pub fn new(a: T, b: T, c: T) -> Result<Self> {
        if [a, b, c].iter().all(|x| x.is_finite() && *x > T::zero()) {
            Ok(Ellipsoid { a, b, c })
        } else {
            Err(Error::InvalidInput(format!(
                "ellipsoid semi-axes must be positive, got ({a}, {b}, {c})"
            )))
        }
    }

    /// Chart point of the pole `(0, 0, c)` direction approached in chart 1
    /// (`θ = π/2`, `φ = π/2`).
    pub fn north_pole() -> ChartPoint<T> {
        ChartPoint {
            chart: 1,
            u: T::FRAC_PI_2(),
            v: T::FRAC_PI_2(),
        }
    }
}

const POLAR_MARGIN: f64 = 0.05;

impl<T: Real> ParametricSurface<T> for Ellipsoid<T> {
    fn chart_count(&self) -> usize {
        2
    }

    fn domain(&self, _chart: usize) -> ((T, T), (T, T)) {
        let m = T::lit(POLAR_MARGIN);
        (
            (T::FRAC_PI_4() - m, T::lit(3.0) * T::FRAC_PI_4() + m),
            (T::zero(), T::TAU()),
        )
    }

    fn jet(&self, chart: usize, u: T, v: T) -> Jet<T> {
        // Chart 0 is the z-polar form; chart 1 is the same form for the
        // semi-axes (b, c, a) followed by the cyclic relabelling
        // (x, y, z) ↦ (z, x, y), a rotation, so orientation is preserved.
        let (a, b, c) = if chart == 0 {
            (self.a, self.b, self.c)
        } else {
            (self.b, self.c, self.a)
        };
        let (st, ct) = u.sin_cos();
        let (sp, cp) = v.sin_cos();
        let jet = Jet {
            r: [a * st * cp, b * st * sp, c * ct],
            ru: [a * ct * cp, b * ct * sp, -c * st],
            rv: [-a * st * sp, b * st * cp, T::zero()],
            ruu: [-a * st * cp, -b * st * sp, -c * ct],
            ruv: [-a * ct * sp, b * ct * cp, T::zero()],
            rvv: [-a * st * cp, -b * st * sp, T::zero()],
        };
        if chart == 0 {
            jet
        } else {
            let p = |x: [T; 3]| [x[2], x[0], x[1]];
            Jet {
                r: p(jet.r),
                ru: p(jet.ru),
                rv: p(jet.rv),
                ruu: p(jet.ruu),
                ruv: p(jet.ruv),
                rvv: p(jet.rvv),
            }
        }
    }
}

/// Sphere of radius `R`, realised as the ellipsoid `(R, R, R)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sphere<T> {
    pub radius: T,
}

impl<T: Real> Sphere<T> {
    pub fn new(radius: T) -> Result<Self> {
        if radius.is_finite() && radius > T::zero() {
            Ok(Sphere { radius })
        } else {
            Err(Error::InvalidInput(format!(
                "sphere radius must be positive, got {radius}"
            )))
        }
    }

    fn as_ellipsoid(&self) -> Ellipsoid<T> {
        Ellipsoid {
            a: self.radius,
            b: self.radius,
            c: self.radius,
        }
    }
}

impl<T: Real> ParametricSurface<T> for Sphere<T> {
    fn chart_count(&self) -> usize {
        2
    }

    fn domain(&self, chart: usize) -> ((T, T), (T, T)) {
        self.as_ellipsoid().domain(chart)
    }

    fn jet(&self, chart: usize, u: T, v: T) -> Jet<T> {
        self.as_ellipsoid().jet(chart, u, v)
    }
}

/// Image of a surface under the rigid motion `x ↦ Q x + t` with `Q` a
/// rotation.
#[derive(Debug, Clone)]
pub struct Transformed<S, T> {
    pub inner: S,
    pub rotation: [[T; 3]; 3],
    pub translation: [T; 3],
}

impl<S, T: Real> Transformed<S, T> {
    /// Rotation by `angle` about the (normalised) `axis`, Rodrigues' formula.
    pub fn rotated(inner: S, axis: [T; 3], angle: T, translation: [T; 3]) -> Self {
        let n = dot(axis, axis).sqrt();
        let k = [axis[0] / n, axis[1] / n, axis[2] / n];
        let (s, c) = angle.sin_cos();
        let one_c = T::one() - c;
        let rotation = [
            [
                c + k[0] * k[0] * one_c,
                k[0] * k[1] * one_c - k[2] * s,
                k[0] * k[2] * one_c + k[1] * s,
            ],
            [
                k[1] * k[0] * one_c + k[2] * s,
                c + k[1] * k[1] * one_c,
                k[1] * k[2] * one_c - k[0] * s,
            ],
            [
                k[2] * k[0] * one_c - k[1] * s,
                k[2] * k[1] * one_c + k[0] * s,
                c + k[2] * k[2] * one_c,
            ],
        ];
        Transformed {
            inner,
            rotation,
            translation,
        }
    }

    fn apply(&self, x: [T; 3]) -> [T; 3] {
        let q = &self.rotation;
        [dot(q[0], x), dot(q[1], x), dot(q[2], x)]
    }
}

impl<S: ParametricSurface<T>, T: Real> ParametricSurface<T> for Transformed<S, T> {
    fn chart_count(&self) -> usize {
        self.inner.chart_count()
    }

    fn domain(&self, chart: usize) -> ((T, T), (T, T)) {
        self.inner.domain(chart)
    }

    fn jet(&self, chart: usize, u: T, v: T) -> Jet<T> {
        let j = self.inner.jet(chart, u, v);
        let mut r = self.apply(j.r);
        for (ri, ti) in r.iter_mut().zip(self.translation) {
            *ri = *ri + ti;
        }
        Jet {
            r,
            ru: self.apply(j.ru),
            rv: self.apply(j.rv),
            ruu: self.apply(j.ruu),
            ruv: self.apply(j.ruv),
            rvv: self.apply(j.rvv),
        }
    }
}

/// First `(E, F, G)` and second `(L, M, N)` fundamental forms at a point,
/// the second against the outward normal `−(r_u × r_v)/|r_u × r_v|`-oriented
/// so that convex surfaces have positive forms.
pub fn fundamental_forms<T: Real, S: ParametricSurface<T> + ?Sized>(
    surface: &S,
    at: ChartPoint<T>,
) -> Result<([T; 3], [T; 3])> {
    let j = surface.jet(at.chart, at.u, at.v);
    let e = dot(j.ru, j.ru);
    let f = dot(j.ru, j.rv);
    let g = dot(j.rv, j.rv);
    let tr = e + g;
    let det = e * g - f * f;
    let disc = ((e - g) * (e - g) + T::lit(4.0) * f * f).sqrt();
    let lmax = (tr + disc) * T::lit(0.5);
    let lmin = det / lmax;
    let cond = lmax / lmin;
    if !(lmin > T::zero()) || !(cond <= T::lit(MAX_METRIC_CONDITION)) {
        return Err(Error::DegenerateMetric {
            cond: cond.to_f64_lossy(),
        });
    }
    let nvec = cross(j.ru, j.rv);
    let nn = dot(nvec, nvec).sqrt();
    let n = [nvec[0] / nn, nvec[1] / nn, nvec[2] / nn];
    let l = -dot(j.ruu, n);
    let m = -dot(j.ruv, n);
    let nn2 = -dot(j.rvv, n);
    Ok(([e, f, g], [l, m, nn2]))
}

/// Principal curvatures at a chart point, ascending.
pub fn principal_curvatures<T: Real, S: ParametricSurface<T> + ?Sized>(
    surface: &S,
    at: ChartPoint<T>,
) -> Result<[T; 2]> {
    let ([e, f, g], [l, m, n]) = fundamental_forms(surface, at)?;
    // Shape operator I⁻¹·II; its discriminant is formed from entry
    // differences so umbilic points do not lose half the digits.
    let det1 = e * g - f * f;
    let a11 = (g * l - f * m) / det1;
    let a12 = (g * m - f * n) / det1;
    let a21 = (e * m - f * l) / det1;
    let a22 = (e * n - f * m) / det1;
    let mean = (a11 + a22) * T::lit(0.5);
    let half_diff = (a11 - a22) * T::lit(0.5);
    let root = (half_diff * half_diff + a12 * a21).max(T::zero()).sqrt();
    Ok([mean - root, mean + root])
}

/// One sample of a curvature sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvatureSample<T> {
    pub at: ChartPoint<T>,
    pub k1: T,
    pub k2: T,
}

/// Principal curvatures on a chart grid plus the refined global minimum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvatureReport<T> {
    pub grid_n: usize,
    pub samples: Vec<CurvatureSample<T>>,
    /// Smallest sampled curvature.
    pub grid_min: T,
    /// `min(grid_min, local descent result)`.
    pub min_k: T,
    pub argmin: ChartPoint<T>,
}

impl<T: Real> CurvatureReport<T> {
    /// `true` when every sampled principal curvature is positive.
    pub fn strictly_convex(&self) -> bool {
        self.samples.iter().all(|s| s.k1 > T::zero())
    }
}

fn grid_points<T: Real>(domain: ((T, T), (T, T)), grid_n: usize) -> Vec<(T, T)> {
    let ((u0, u1), (v0, v1)) = domain;
    let n = T::from_usize(grid_n).unwrap();
    let du = (u1 - u0) / n;
    let dv = (v1 - v0) / n;
    let mut out = Vec::with_capacity(grid_n * grid_n);
    for i in 0..grid_n {
        for k in 0..grid_n {
            out.push((u0 + du * T::from_usize(i).unwrap(), v0 + dv * T::from_usize(k).unwrap()));
        }
    }
    out
}

/// Samples every chart on a `grid_n × grid_n` left-endpoint grid (so grids for
/// `n` and `2n` are nested), then refines the smallest curvature by compass
/// search.
pub fn curvature_report<T: Real, S: ParametricSurface<T> + ?Sized>(
    surface: &S,
    grid_n: usize,
) -> Result<CurvatureReport<T>> {
    if grid_n < 8 {
        return Err(Error::InvalidInput(format!("grid_n must be at least 8, got {grid_n}")));
    }
    let mut points = Vec::new();
    for chart in 0..surface.chart_count() {
        for (u, v) in grid_points(surface.domain(chart), grid_n) {
            points.push(ChartPoint { chart, u, v });
        }
    }
    let samples = points
        .par_iter()
        .map(|&at| principal_curvatures(surface, at).map(|[k1, k2]| CurvatureSample { at, k1, k2 }))
        .collect::<Result<Vec<_>>>()?;
    let best = samples
        .iter()
        .fold(None::<&CurvatureSample<T>>, |acc, s| match acc {
            Some(b) if b.k1 <= s.k1 => Some(b),
            _ => Some(s),
        })
        .expect("non-empty grid");
    let grid_min = best.k1;
    let ((u0, u1), (v0, v1)) = surface.domain(best.at.chart);
    let n = T::from_usize(grid_n).unwrap();
    let (argmin, refined) = compass_search(
        |u, v| {
            principal_curvatures(
                surface,
                ChartPoint {
                    chart: best.at.chart,
                    u,
                    v,
                },
            )
            .map(|k| k[0])
        },
        best.at,
        grid_min,
        ((u0, u1), (v0, v1)),
        ((u1 - u0) / n, (v1 - v0) / n),
    )?;
    Ok(CurvatureReport {
        grid_n,
        samples,
        grid_min,
        min_k: refined.min(grid_min),
        argmin,
    })
}

fn compass_search<T: Real>(
    f: impl Fn(T, T) -> Result<T>,
    start: ChartPoint<T>,
    start_val: T,
    domain: ((T, T), (T, T)),
    steps: (T, T),
) -> Result<(ChartPoint<T>, T)> {
    let ((u0, u1), (v0, v1)) = domain;
    let (mut su, mut sv) = steps;
    let mut at = start;
    let mut best = start_val;
    let floor = T::lit(1e-12);
    for _ in 0..10_000 {
        if su < floor * (u1 - u0) && sv < floor * (v1 - v0) {
            break;
        }
        let mut improved = false;
        for (du, dv) in [(su, T::zero()), (-su, T::zero()), (T::zero(), sv), (T::zero(), -sv)] {
            let u = at.u + du;
            let v = at.v + dv;
            if u < u0 || u > u1 || v < v0 || v > v1 {
                continue;
            }
            let val = f(u, v)?;
            if val < best {
                best = val;
                at = ChartPoint { chart: at.chart, u, v };
                improved = true;
                break;
            }
        }
        if !improved {
            su = su * T::lit(0.5);
            sv = sv * T::lit(0.5);
        }
    }
    Ok((at, best))
}

/// `min_{y ∈ ∂O, i} K_i(y)` over a `grid_n × grid_n` grid per chart with local
/// refinement.
pub fn min_curvature<T: Real, S: ParametricSurface<T> + ?Sized>(surface: &S, grid_n: usize) -> Result<T> {
    curvature_report(surface, grid_n).map(|r| r.min_k)
}

/// First zero `−ζ₁′` of `Ai′`, returned as the positive `ζ₁′`.
pub fn airy_prime_first_zero<T: Real>() -> Result<T> {
    first_real_zero(csfun::airy_ai_prime, |z| Ok(z * csfun::airy_ai(z)?), -1.5, -0.5)
}

/// First zero `−ζ₁` of `Ai`, returned as the positive `ζ₁`.
pub fn airy_first_zero<T: Real>() -> Result<T> {
    first_real_zero(csfun::airy_ai, csfun::airy_ai_prime, -3.0, -2.0)
}

fn first_real_zero<T: Real>(
    f: fn(Complex<T>) -> Result<Complex<T>>,
    fp: impl Fn(Complex<T>) -> Result<Complex<T>>,
    lo: f64,
    hi: f64,
) -> Result<T> {
    let nan = Complex::new(T::nan(), T::nan());
    let rect = Rect::new(T::lit(lo), T::lit(hi), T::lit(-0.5), T::lit(0.5))?;
    let tol = T::epsilon() * T::lit(16.0);
    let zs = find_zeros(|z| f(z).unwrap_or(nan), |z| fp(z).unwrap_or(nan), &rect, tol)?;
    match zs.locations().as_slice() {
        [z] => Ok(-z.re),
        other => Err(Error::NonConvergence(format!(
            "expected one Airy zero in [{lo}, {hi}], found {}",
            other.len()
        ))),
    }
}

fn cubic_barrier<T: Real>(zeta: T, min_k: T) -> Result<T> {
    if !(min_k > T::zero()) || !min_k.is_finite() {
        return Err(Error::NonPositiveCurvature(min_k.to_f64_lossy()));
    }
    let pref = T::lit(2.0).powf(T::lit(-1.0 / 3.0)) * (T::PI() / T::lit(6.0)).cos() * zeta;
    Ok(pref * min_k.powf(T::lit(2.0 / 3.0)))
}

/// `S = 2^{−1/3} cos(π/6) ζ₁′ min_k^{2/3}`.
pub fn barrier_constant<T: Real>(min_k: T) -> Result<T> {
    cubic_barrier(airy_prime_first_zero()?, min_k)
}

/// The Dirichlet analogue `2^{−1/3} cos(π/6) ζ₁ min_k^{2/3}`.
pub fn barrier_constant_dirichlet<T: Real>(min_k: T) -> Result<T> {
    cubic_barrier(airy_first_zero()?, min_k)
}
