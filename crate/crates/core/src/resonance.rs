//! Scattering resonances of the ball of radius `R` in ℝ³ and the cubic
//! barrier `Im ζ <= −S|ζ|^{1/3} + C`.
//!
//! For angular mode `l` the resonances are the zeros of
//!
//! * Dirichlet: `W_l(ζ) = h_l(ζR)`,
//! * Neumann: `W_l(ζ) = ζ h_l′(ζR)`,
//! * Robin `∂_ν u + γu = 0`: `W_l(ζ) = ζ h_l′(ζR) + γ h_l(ζR)`,
//!
//! with `h_l = h_l^{(1)}` the spherical Hankel function. `W_l` has a pole of
//! order `l + 1` at the origin; windows touching `0` are searched with the
//! entire function `(ζR)^{l+1} W_l(ζ)/(2l−1)!!`, generated by an overflow-free
//! recurrence.

use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::airy_model::{BcKind, BoundaryCondition};
use crate::csfun::{sph_hankel1, MAX_HANKEL_ORDER};
use crate::geometry::{barrier_constant, barrier_constant_dirichlet};
use crate::roots::{find_zeros_with, local_residual, Rect, RootOptions};
use crate::{is_finite_c, Error, Real, Result};

/// Zeros closer than this to the origin are artefacts of the rescaling (the
/// rescaled function vanishes at `0` only in the degenerate case `γR = l+1`).
const ORIGIN_EXCLUSION: f64 = 1e-8;

/// Scale of the residual contract `residual <= tol · RESIDUAL_SCALE`. The
/// residual is normalised on a circle of radius `10⁻²·max(1, |ζ|)`, so this
/// bound corresponds to a location error of about `tol·max(1, |ζ|)`.
pub const RESIDUAL_SCALE: f64 = 100.0;

/// Which modes to search, where, and how accurately.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResonanceQuery<T> {
    pub radius: T,
    pub bc: BoundaryCondition<T>,
    pub l_min: usize,
    pub l_max: usize,
    /// Search window in the `ζ` plane; `None` sizes one per mode with
    /// [`auto_window`].
    pub window: Option<Rect<T>>,
    /// Newton tolerance; residuals are bounded by `tol·`[`RESIDUAL_SCALE`].
    pub tol: T,
}

impl<T: Real> ResonanceQuery<T> {
    /// Query with automatic windows and `tol = 10⁻¹²`.
    pub fn new(radius: T, bc: BoundaryCondition<T>, l_min: usize, l_max: usize) -> Self {
        ResonanceQuery {
            radius,
            bc,
            l_min,
            l_max,
            window: None,
            tol: T::lit(1e-12),
        }
    }

    pub fn with_window(mut self, window: Rect<T>) -> Self {
        self.window = Some(window);
        self
    }

    pub fn with_tol(mut self, tol: T) -> Self {
        self.tol = tol;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.radius > T::zero() && self.radius.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "radius must be positive, got {}",
                self.radius
            )));
        }
        self.bc.validate()?;
        if self.bc.scaled_phase.is_some() {
            return Err(Error::InvalidInput(
                "the ball problem takes an unscaled boundary condition".into(),
            ));
        }
        if self.l_min > self.l_max {
            return Err(Error::InvalidInput(format!(
                "l_min = {} exceeds l_max = {}",
                self.l_min, self.l_max
            )));
        }
        if self.l_max > MAX_HANKEL_ORDER {
            return Err(Error::OrderOverflow {
                l: self.l_max,
                max: MAX_HANKEL_ORDER,
            });
        }
        if !(self.tol > T::zero() && self.tol <= T::lit(1e-3)) {
            return Err(Error::InvalidInput(format!(
                "tol must lie in (0, 1e-3], got {}",
                self.tol
            )));
        }
        if let Some(w) = &self.window {
            let symmetric = (w.re_min + w.re_max).abs() <= T::lit(1e-12) * w.width();
            if !(w.re_min >= T::zero() || symmetric) {
                return Err(Error::InvalidInput(
                    "window must lie in Re >= 0 or be symmetric about the imaginary axis".into(),
                ));
            }
        }
        Ok(())
    }

    /// Barrier constant of the sphere of this radius for the boundary
    /// condition (`ζ₁′` for Neumann/Robin, `ζ₁` for Dirichlet).
    pub fn sphere_barrier(&self) -> Result<T> {
        let k = T::one() / self.radius;
        match self.bc.kind {
            BcKind::Dirichlet => barrier_constant_dirichlet(k),
            _ => barrier_constant(k),
        }
    }
}

/// Search window for mode `l` around the first strings:
/// `Re ζ ∈ [(0.5l − 0.25)/R, 2.5(l+1)/R]`,
/// `Im ζ ∈ [−3S(l/R)^{1/3} − 5, 0.25/R + max(γ, 0)]`. The upper edge sits
/// above the real axis so that the pole at `0` and Robin bound states are
/// inside rather than on the boundary; a window crossing `Re ζ = 0` is made
/// symmetric.
pub fn auto_window<T: Real>(l: usize, radius: T, gamma: T, s: T) -> Result<Rect<T>> {
    let lf = T::from_usize(l).unwrap();
    let quarter = T::lit(0.25) / radius;
    let re_max = T::lit(2.5) * (lf + T::one()) / radius;
    let mut re_min = T::lit(0.5) * lf / radius - quarter;
    if re_min < T::zero() {
        re_min = -re_max;
    }
    let im_min = -(T::lit(3.0) * s * (lf / radius).cbrt()) - T::lit(5.0);
    let im_max = quarter + gamma.max(T::zero());
    Rect::new(re_min, re_max, im_min, im_max)
}

/// `W_l(ζ)` of the module documentation.
pub fn resonance_condition<T: Real>(
    l: usize,
    zeta: Complex<T>,
    radius: T,
    bc: &BoundaryCondition<T>,
) -> Result<Complex<T>> {
    Ok(condition_with_derivative(l, zeta, radius, bc)?.0)
}

/// `(W_l(ζ), W_l′(ζ))`.
pub fn condition_with_derivative<T: Real>(
    l: usize,
    zeta: Complex<T>,
    radius: T,
    bc: &BoundaryCondition<T>,
) -> Result<(Complex<T>, Complex<T>)> {
    if zeta == Complex::new(T::zero(), T::zero()) {
        return Err(Error::Pole);
    }
    let z = zeta * radius;
    let (h, hp) = sph_hankel1(l, z)?;
    let lf = T::from_usize(l).unwrap();
    // z²h″ + 2zh′ + (z² − l(l+1))h = 0.
    let hpp = -(hp * T::lit(2.0)) / z
        - h * (Complex::new(T::one(), T::zero()) - Complex::new(lf * (lf + T::one()), T::zero()) / (z * z));
    let out = match bc.kind {
        BcKind::Dirichlet => (h, hp * radius),
        BcKind::Neumann => (zeta * hp, hp + zeta * hpp * radius),
        BcKind::Robin => (
            zeta * hp + h * bc.gamma,
            hp + zeta * hpp * radius + hp * (bc.gamma * radius),
        ),
    };
    if !is_finite_c(out.0) || !is_finite_c(out.1) {
        return Err(Error::NonFinite {
            context: "resonance condition",
        });
    }
    Ok(out)
}

/// `g_l(z) = z^{l+1}h_l(z)/(2l−1)!!` and `g_l′(z)`, together with
/// `k_l(z) = z^{l+2}h_l′(z)/(2l−1)!!` and `k_l′(z)`, by the upward recurrence
/// `g_{m+1} = g_m − z² g_{m−1}/((2m+1)(2m−1))`.
fn scaled_hankel<T: Real>(l: usize, z: Complex<T>) -> [Complex<T>; 4] {
    let i = Complex::new(T::zero(), T::one());
    let e = (i * z).exp();
    let odd = |k: usize| T::from_usize(2 * k - 1).unwrap();
    // g₀ = −i e^{iz}, g₁ = −e^{iz}(z + i); g_l′ = z g_{l−1}/(2l−1), g₀′ = e^{iz}.
    let g0 = -(i * e);
    if l == 0 {
        // k₀ = e^{iz}(z + i), k₀′ = iz e^{iz}.
        return [g0, e, e * (z + i), i * z * e];
    }
    let z2 = z * z;
    let mut prev = g0; // g_{m−1}
    let mut cur = -(e * (z + i)); // g_m
    let mut prev_d = e; // g_{m−1}′
    let mut cur_d = z * g0; // g₁′ = z g₀
    for m in 1..l {
        // g_{m+1} = g_m − z² g_{m−1}/((2m+1)(2m−1)).
        let next = cur - z2 * prev / (odd(m + 1) * odd(m));
        let next_d = z * cur / odd(m + 1);
        prev = cur;
        cur = next;
        prev_d = cur_d;
        cur_d = next_d;
    }
    // k_l = z² g_{l−1}/(2l−1) − (l+1) g_l.
    let lp1 = T::from_usize(l + 1).unwrap();
    let k = z2 * prev / odd(l) - cur * lp1;
    let k_d = (z * prev * T::lit(2.0) + z2 * prev_d) / odd(l) - cur_d * lp1;
    [cur, cur_d, k, k_d]
}

/// `(ζR)^{l+1} W_l(ζ)/(2l−1)!!` and its `ζ`-derivative; entire in `ζ`.
///
/// For `|ζR| <= max(1, (l+1)/2)`, where `h_l` is dominated by `y_l` and the
/// recurrence is stable, the scaled functions are generated directly; further
/// out `W_l` is evaluated and multiplied by the scale factor.
pub fn scaled_condition<T: Real>(
    l: usize,
    zeta: Complex<T>,
    radius: T,
    bc: &BoundaryCondition<T>,
) -> (Complex<T>, Complex<T>) {
    let z = zeta * radius;
    let inner = T::one().max(T::from_usize(l + 1).unwrap() * T::lit(0.5));
    if z.norm() > inner {
        let nan = Complex::new(T::nan(), T::nan());
        let Ok((w, wp)) = condition_with_derivative(l, zeta, radius, bc) else {
            return (nan, nan);
        };
        let log_dfact: T = (1..=l).map(|k| T::from_usize(2 * k - 1).unwrap().ln()).sum();
        let scale = (z.ln() * T::from_usize(l + 1).unwrap() - log_dfact).exp();
        let dscale = scale * T::from_usize(l + 1).unwrap() / zeta;
        return (w * scale, wp * scale + w * dscale);
    }
    let [g, gd, k, kd] = scaled_hankel(l, z);
    match bc.kind {
        BcKind::Dirichlet => (g, gd * radius),
        BcKind::Neumann => (k / radius, kd),
        BcKind::Robin => (k / radius + g * bc.gamma, kd + gd * (bc.gamma * radius)),
    }
}

/// Classification of a zero by the sign of `Im ζ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ZeroClass {
    /// `Im ζ < 0`: a scattering resonance.
    Resonance,
    /// `Im ζ >= 0`: `ζ²` is an eigenvalue of the exterior Robin problem.
    BoundState,
}

impl ZeroClass {
    pub fn of<T: Real>(zeta: Complex<T>) -> Self {
        if zeta.im < T::zero() {
            ZeroClass::Resonance
        } else {
            ZeroClass::BoundState
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            ZeroClass::Resonance => "resonance",
            ZeroClass::BoundState => "bound-state",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "resonance" => Ok(ZeroClass::Resonance),
            "bound-state" => Ok(ZeroClass::BoundState),
            _ => Err(Error::InvalidInput(format!("unknown zero class '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResonanceEntry<T> {
    pub l: usize,
    pub zeta: Complex<T>,
    pub residual: T,
    pub class: ZeroClass,
}

/// Zeros of all requested modes, ascending in `l`, then by `(Re, Im)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResonanceSet<T> {
    pub entries: Vec<ResonanceEntry<T>>,
    pub query: ResonanceQuery<T>,
}

impl<T: Real> ResonanceSet<T> {
    pub fn resonances(&self) -> impl Iterator<Item = &ResonanceEntry<T>> {
        self.entries.iter().filter(|e| e.class == ZeroClass::Resonance)
    }

    /// Per mode, the resonance with the largest `Im ζ`.
    pub fn first_string(&self) -> Vec<ResonanceEntry<T>> {
        let mut out: Vec<ResonanceEntry<T>> = Vec::new();
        for e in self.resonances() {
            match out.last_mut() {
                Some(last) if last.l == e.l => {
                    if e.zeta.im > last.zeta.im {
                        *last = *e;
                    }
                }
                _ => out.push(*e),
            }
        }
        out
    }
}

fn mode_zeros<T: Real>(query: &ResonanceQuery<T>, l: usize, s: T) -> Result<Vec<ResonanceEntry<T>>> {
    let r = query.radius;
    let bc = query.bc;
    let base = match &query.window {
        Some(w) => *w,
        None => auto_window(l, r, bc.gamma, s)?,
    };
    let zero = Complex::new(T::zero(), T::zero());
    let opts = RootOptions::new(query.tol);
    // A window whose boundary carries a zero is retried slightly enlarged.
    let mut last_err = None;
    for attempt in 0..4 {
        let window = if attempt == 0 {
            base
        } else {
            base.inflate(base.diag() * T::lit(1e-3 * f64::from(1 << attempt)))
        };
        let near_origin = window.inflate(T::lit(1e-6) * window.diag()).contains(zero);
        let f = |z: Complex<T>| -> Complex<T> {
            if near_origin {
                scaled_condition(l, z, r, &bc).0
            } else {
                condition_with_derivative(l, z, r, &bc)
                    .map(|v| v.0)
                    .unwrap_or(Complex::new(T::nan(), T::nan()))
            }
        };
        let fp = |z: Complex<T>| -> Complex<T> {
            if near_origin {
                scaled_condition(l, z, r, &bc).1
            } else {
                condition_with_derivative(l, z, r, &bc)
                    .map(|v| v.1)
                    .unwrap_or(Complex::new(T::nan(), T::nan()))
            }
        };
        let found = match find_zeros_with(f, fp, &window, &opts) {
            Ok(found) => found,
            Err(e @ Error::BoundaryZero { .. }) if query.window.is_none() => {
                last_err = Some(e);
                continue;
            }
            Err(e) => return Err(tag_mode(l, e)),
        };
        let mut locs: Vec<(Complex<T>, T)> = found
            .zeros
            .iter()
            .filter(|z| z.location.norm() >= T::lit(ORIGIN_EXCLUSION))
            .flat_map(|z| std::iter::repeat_n((z.location, z.residual), z.multiplicity))
            .collect();
        complete_mirrors(&mut locs, &window, query.tol, &f, &fp);
        let mut entries = Vec::with_capacity(locs.len());
        for (zeta, residual) in locs {
            if !(residual <= query.tol * T::lit(RESIDUAL_SCALE)) {
                return Err(tag_mode(
                    l,
                    Error::NonConvergence(format!("zero {zeta} has residual {residual}")),
                ));
            }
            entries.push(ResonanceEntry {
                l,
                zeta,
                residual,
                class: ZeroClass::of(zeta),
            });
        }
        entries.sort_by(|a, b| (a.zeta.re, a.zeta.im).partial_cmp(&(b.zeta.re, b.zeta.im)).unwrap());
        return Ok(entries);
    }
    Err(tag_mode(l, last_err.unwrap()))
}

/// For real `γ` zeros come in pairs `ζ, −conj ζ`; adds any partner that lies
/// in `window` but was not returned by the search.
fn complete_mirrors<T: Real, F, G>(locs: &mut Vec<(Complex<T>, T)>, window: &Rect<T>, tol: T, f: &F, fp: &G)
where
    F: Fn(Complex<T>) -> Complex<T>,
    G: Fn(Complex<T>) -> Complex<T>,
{
    let originals: Vec<Complex<T>> = locs.iter().map(|p| p.0).collect();
    for z in originals {
        let m = -z.conj();
        if !window.contains(m) {
            continue;
        }
        let same = T::lit(1e-6) * z.norm().max(T::one());
        if locs.iter().any(|p| (p.0 - m).norm() <= same) {
            continue;
        }
        let mut w = m;
        for _ in 0..50 {
            let step = f(w) / fp(w);
            if !is_finite_c(step) {
                break;
            }
            w = w - step;
            if step.norm() <= tol * w.norm().max(T::one()) {
                break;
            }
        }
        locs.push((w, local_residual(f, w)));
    }
}

fn tag_mode(l: usize, e: Error) -> Error {
    if e.is_numerical() {
        Error::NonConvergence(format!("mode l = {l}: {e}"))
    } else {
        e
    }
}

/// All zeros of `W_l` in the query windows for `l_min ..= l_max`. Modes are
/// searched in parallel and assembled in ascending order.
pub fn ball_resonances<T: Real>(query: &ResonanceQuery<T>) -> Result<ResonanceSet<T>> {
    query.validate()?;
    let s = query.sphere_barrier()?;
    let per_mode: Vec<Result<Vec<ResonanceEntry<T>>>> = (query.l_min..=query.l_max)
        .into_par_iter()
        .map(|l| mode_zeros(query, l, s))
        .collect();
    let mut entries = Vec::new();
    for r in per_mode {
        entries.extend(r?);
    }
    Ok(ResonanceSet {
        entries,
        query: query.clone(),
    })
}

/// Comparison of a resonance set with the cubic barrier
/// `Im ζ = −S|ζ|^{1/3} + C`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BarrierReport<T> {
    #[serde(rename = "S")]
    pub s: T,
    /// `max (Im ζ + S|ζ|^{1/3})` over resonance-class entries.
    #[serde(rename = "C_fit")]
    pub c_fit: T,
    /// Entries above the candidate barrier, if a candidate `C` was given.
    #[serde(skip)]
    pub violations: Vec<ResonanceEntry<T>>,
    /// Slope fit over the whole mode range, when it spans at least 21 modes.
    #[serde(rename = "S_fit")]
    pub s_fit: Option<T>,
    pub stderr: Option<T>,
    pub n_entries: usize,
    pub l_range: (usize, usize),
}

/// Smallest `C` with `Im ζ <= −S|ζ|^{1/3} + C` for every resonance, and the
/// entries violating the candidate `c`.
pub fn verify_barrier<T: Real>(set: &ResonanceSet<T>, s: T, c: Option<T>) -> Result<BarrierReport<T>> {
    if !(s >= T::zero() && s.is_finite()) {
        return Err(Error::InvalidInput(format!("S must be non-negative, got {s}")));
    }
    let height = |e: &ResonanceEntry<T>| e.zeta.im + s * e.zeta.norm().cbrt();
    let res: Vec<&ResonanceEntry<T>> = set.resonances().collect();
    if res.is_empty() {
        return Err(Error::EmptySet);
    }
    let c_fit = res.iter().map(|e| height(e)).fold(T::neg_infinity(), T::max);
    let violations = match c {
        Some(c) => res.iter().filter(|e| height(e) > c).map(|e| **e).collect(),
        None => vec![],
    };
    let l_lo = res.iter().map(|e| e.l).min().unwrap();
    let l_hi = res.iter().map(|e| e.l).max().unwrap();
    let (s_fit, stderr) = if l_hi - l_lo >= 20 {
        match fit_cubic_slope(set, l_lo, l_hi) {
            Ok((a, b)) => (Some(a), Some(b)),
            Err(Error::MissingModes(_)) => (None, None),
            Err(e) => return Err(e),
        }
    } else {
        (None, None)
    };
    Ok(BarrierReport {
        s,
        c_fit,
        violations,
        s_fit,
        stderr,
        n_entries: res.len(),
        l_range: (l_lo, l_hi),
    })
}

/// Least-squares slope of `−Im ζ` against `|ζ|^{1/3}` (with intercept) over
/// the first string for `l_lo ..= l_hi`, and its standard error.
pub fn fit_cubic_slope<T: Real>(set: &ResonanceSet<T>, l_lo: usize, l_hi: usize) -> Result<(T, T)> {
    if l_hi < l_lo + 20 {
        return Err(Error::InvalidInput(format!(
            "fit range [{l_lo}, {l_hi}] must span at least 21 modes"
        )));
    }
    let string = set.first_string();
    let mut pts = Vec::new();
    let mut missing = Vec::new();
    for l in l_lo..=l_hi {
        match string.iter().find(|e| e.l == l) {
            Some(e) => pts.push((e.zeta.norm().cbrt(), -e.zeta.im)),
            None => missing.push(l),
        }
    }
    if !missing.is_empty() {
        return Err(Error::MissingModes(missing));
    }
    let n = T::from_usize(pts.len()).unwrap();
    let mx = pts.iter().map(|p| p.0).sum::<T>() / n;
    let my = pts.iter().map(|p| p.1).sum::<T>() / n;
    let sxx: T = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: T = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let icpt = my - slope * mx;
    let ssr: T = pts
        .iter()
        .map(|p| {
            let r = p.1 - icpt - slope * p.0;
            r * r
        })
        .sum();
    let stderr = (ssr / (n - T::lit(2.0)) / sxx).sqrt();
    Ok((slope, stderr))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::C64;

    #[test]
    fn scaled_condition_matches_direct() {
        for bc in [
            BoundaryCondition::dirichlet(),
            BoundaryCondition::neumann(),
            BoundaryCondition::robin(0.7),
        ] {
            for l in [0usize, 1, 2, 5, 17] {
                for zeta in [C64::new(0.8, -0.3), C64::new(-1.7, 0.4), C64::new(3.0, -2.0)] {
                    let r = 1.3;
                    let (w, wp) = condition_with_derivative(l, zeta, r, &bc).unwrap();
                    let dfact: f64 = (1..=l).map(|k| (2 * k - 1) as f64).product();
                    let zr = zeta * r;
                    let scale = zr.powi(l as i32 + 1) / dfact;
                    let dscale = zr.powi(l as i32) * ((l + 1) as f64 * r) / dfact;
                    let (f, fp) = scaled_condition(l, zeta, r, &bc);
                    let want = w * scale;
                    let want_p = wp * scale + w * dscale;
                    assert!((f - want).norm() <= 1e-12 * want.norm().max(1.0), "{bc:?} l={l}");
                    assert!((fp - want_p).norm() <= 1e-11 * want_p.norm().max(1.0), "{bc:?} l={l}");
                }
            }
        }
    }

    #[test]
    fn scaled_condition_limit_at_origin() {
        let z0 = C64::new(0.0, 0.0);
        let r = 2.0;
        let (d, _) = scaled_condition(3, z0, r, &BoundaryCondition::dirichlet());
        assert!((d - C64::new(0.0, -1.0)).norm() < 1e-15);
        let (n, _) = scaled_condition(3, z0, r, &BoundaryCondition::neumann());
        assert!((n - C64::new(0.0, 4.0 / r)).norm() < 1e-15);
        let (ro, _) = scaled_condition(3, z0, r, &BoundaryCondition::robin(0.5));
        assert!((ro - C64::new(0.0, 4.0 / r - 0.5)).norm() < 1e-15);
    }

    #[test]
    fn origin_is_a_pole() {
        assert!(matches!(
            resonance_condition(0, C64::new(0.0, 0.0), 1.0, &BoundaryCondition::neumann()),
            Err(Error::Pole)
        ));
    }

    #[test]
    fn auto_window_is_symmetric_for_low_modes() {
        let w = auto_window(0, 1.0, 2.0, 0.7).unwrap();
        assert_eq!(w.re_min, -w.re_max);
        assert!(w.im_max > 2.0);
        let w = auto_window(10, 1.0, 0.0, 0.7).unwrap();
        assert!(w.re_min > 0.0);
    }

    #[test]
    fn verify_barrier_single_entry() {
        let q = ResonanceQuery::new(1.0, BoundaryCondition::neumann(), 0, 0);
        let set = ResonanceSet {
            entries: vec![ResonanceEntry {
                l: 0,
                zeta: C64::new(0.0, -1.0),
                residual: 0.0,
                class: ZeroClass::Resonance,
            }],
            query: q,
        };
        let r = verify_barrier(&set, 0.7003, None).unwrap();
        assert!((r.c_fit + 0.2997).abs() < 1e-12);
        assert!(r.s_fit.is_none());
        let r = verify_barrier(&set, 0.7003, Some(-0.5)).unwrap();
        assert_eq!(r.violations.len(), 1);
        let empty = ResonanceSet {
            entries: vec![],
            query: set.query.clone(),
        };
        assert!(matches!(verify_barrier(&empty, 0.7, None), Err(Error::EmptySet)));
    }
}
