//! Discretised Airy-type model operators on `[0, T]` and numerical checks of
//! their lower bounds.
//!
//! # Discretisation
//!
//! Uniform grid, fourth-order centred stencils
//! `u″ ≈ (−u₋₂ + 16u₋₁ − 30u₀ + 16u₁ − u₂)/(12Δt²)` and
//! `u′ ≈ (u₋₂ − 8u₋₁ + 8u₁ − u₂)/(12Δt)`. The truncation at `t = T` is a
//! Dirichlet row with odd reflection. At `t = 0`:
//!
//! * Dirichlet: unknowns at `t = Δt, …, nΔt`, ghosts by odd reflection
//!   `u(−s) = −u(s)`.
//! * Neumann/Robin: unknowns at `t = 0, …, (n−1)Δt`, ghosts from the Taylor
//!   expansion `u(−s) = u(s) − 2s u′(0) − (s³/3) u‴(0)`, with
//!   `u′(0) = β u(0)` from the boundary condition and, differentiating
//!   `−u″ + V u = λu`, `u‴(0) = κ u(0) + β u″(0)` with `κ = V′(0)` for the
//!   normalised operator `−u″ + V u`; `u″(0)` enters through the one-sided
//!   stencil `(2u₀ − 5u₁ + 4u₂ − u₃)/Δt²`. First-order terms are left out of
//!   the closure.
//!
//! Norms use the trapezoid weights of the grid (`Δt/2` at a Neumann/Robin
//! endpoint, `Δt` elsewhere); the Neumann matrix is symmetric in that inner
//! product up to the `κ` correction.
//!
//! Matrices are banded (two sub- and three superdiagonals, the third only in
//! the Robin rows); [`DiscretizedOperator::to_dense`]
//! gives the dense form.

use std::collections::BTreeMap;

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::geometry::{airy_first_zero, airy_prime_first_zero};
use crate::linalg::{eigs_near, gauss_legendre, pencil_min_eig, Banded};
use crate::{Error, Real, Result};

/// Which condition holds at `t = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BcKind {
    Dirichlet,
    Neumann,
    Robin,
}

/// Boundary condition at `t = 0`: `u = 0`, `∂_t u = 0`, or
/// `k ∂_t u + γ u = 0` with `k = scaled_phase` (default `1`). Here `t` is the
/// distance to the obstacle, so `∂_t` is the derivative along the exterior
/// normal of the obstacle and Robin reads `∂_ν u + γ u = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryCondition<T> {
    pub kind: BcKind,
    pub gamma: T,
    pub scaled_phase: Option<Complex<T>>,
}

impl<T: Real> BoundaryCondition<T> {
    pub fn dirichlet() -> Self {
        BoundaryCondition {
            kind: BcKind::Dirichlet,
            gamma: T::zero(),
            scaled_phase: None,
        }
    }

    pub fn neumann() -> Self {
        BoundaryCondition {
            kind: BcKind::Neumann,
            gamma: T::zero(),
            scaled_phase: None,
        }
    }

    pub fn robin(gamma: T) -> Self {
        BoundaryCondition {
            kind: BcKind::Robin,
            gamma,
            scaled_phase: None,
        }
    }

    /// The condition `e^{−πi/3} ∂_t u + γ u = 0` on the scaled contour.
    pub fn scaled_robin(gamma: T) -> Self {
        BoundaryCondition {
            kind: BcKind::Robin,
            gamma,
            scaled_phase: Some(Complex::from_polar(T::one(), -T::FRAC_PI_3())),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.gamma.is_finite() {
            return Err(Error::InvalidInput(format!("gamma must be finite, got {}", self.gamma)));
        }
        if let Some(k) = self.scaled_phase {
            if !((k.norm() - T::one()).abs() <= T::lit(1e-12)) {
                return Err(Error::InvalidInput(format!(
                    "scaled phase must have unit modulus, got {k}"
                )));
            }
        }
        Ok(())
    }

    /// Robin parameter of the condition written as `u′(0) = β u(0)`.
    pub fn beta(&self) -> Complex<T> {
        match self.kind {
            BcKind::Robin => {
                let k = self.scaled_phase.unwrap_or(Complex::new(T::one(), T::zero()));
                -(Complex::new(self.gamma, T::zero()) / k)
            }
            _ => Complex::new(T::zero(), T::zero()),
        }
    }
}

/// Explicit representatives of the lower-order terms
/// `c_d h (hD_t) + (c₀ h + c₁ h^{1/2} t + c₂ t²)⟨η⟩²`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct LowerOrder<T> {
    pub c_d: T,
    pub c_0: T,
    pub c_1: T,
    pub c_2: T,
}

/// Frozen model operator
/// `phase·((hD_t)² + 2tQ) + R + (c₀h + c₁h^{1/2}t + c₂t²)⟨η⟩² + c_d h (hD_t)` on `[0, T]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelOperatorSpec<T> {
    pub h: T,
    pub t_max: T,
    pub r_val: T,
    pub q_val: T,
    pub eta_weight: T,
    pub lower_order: LowerOrder<T>,
    pub phase: Complex<T>,
    pub bc: BoundaryCondition<T>,
}

impl<T: Real> ModelOperatorSpec<T> {
    /// Spec with `R = 0`, `⟨η⟩ = 1`, no lower-order terms and the default
    /// phase `e^{−2πi/3}`.
    pub fn new(h: T, t_max: T, q_val: T, bc: BoundaryCondition<T>) -> Self {
        ModelOperatorSpec {
            h,
            t_max,
            r_val: T::zero(),
            q_val,
            eta_weight: T::one(),
            lower_order: LowerOrder::default(),
            phase: Complex::from_polar(T::one(), T::lit(-2.0) * T::FRAC_PI_3()),
            bc,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.bc.validate()?;
        let lo = &self.lower_order;
        let finite = [
            self.h,
            self.t_max,
            self.r_val,
            self.q_val,
            self.eta_weight,
            lo.c_d,
            lo.c_0,
            lo.c_1,
            lo.c_2,
            self.phase.re,
            self.phase.im,
        ]
        .iter()
        .all(|v| v.is_finite());
        if !finite {
            return Err(Error::InvalidInput("operator coefficients must be finite".into()));
        }
        if !(self.h > T::zero()) || !(self.t_max > T::zero()) {
            return Err(Error::InvalidInput("h and T must be positive".into()));
        }
        // The Airy scale h^{2/3} must fit in [0, T], i.e. h² <= T³.
        if self.h * self.h > self.t_max.powi(3) {
            return Err(Error::InvalidInput(format!(
                "Airy scale h^(2/3) = {} exceeds T = {}",
                self.h.powf(T::lit(2.0 / 3.0)),
                self.t_max
            )));
        }
        if self.r_val < T::zero() || !(self.q_val > T::zero()) || self.eta_weight < T::one() {
            return Err(Error::InvalidInput("need R >= 0, Q > 0 and <eta> >= 1".into()));
        }
        Ok(())
    }
}

/// A discretised model operator.
#[derive(Debug, Clone)]
pub struct DiscretizedOperator<T> {
    pub n: usize,
    pub dt: T,
    /// Grid point of each unknown.
    pub grid: Vec<T>,
    /// Quadrature weights of the discrete inner product.
    pub weights: Vec<T>,
    pub matrix: Banded<T>,
    pub spec: ModelOperatorSpec<T>,
    pub bc_note: String,
}

impl<T: Real> DiscretizedOperator<T> {
    pub fn to_dense(&self) -> Vec<Vec<Complex<T>>> {
        self.matrix.to_dense()
    }

    /// The same operator at a different resolution.
    pub fn refined(&self, n: usize) -> Result<Self> {
        frozen_operator(&self.spec, n)
    }

    /// `count` eigenvalues nearest `shift`, by shift-invert Arnoldi.
    pub fn eigenvalues_near(&self, shift: Complex<T>, count: usize) -> Result<Vec<Complex<T>>> {
        eigs_near(&self.matrix, shift, count, T::lit(1e-12))
    }
}

const STENCIL2: [f64; 5] = [-1.0, 16.0, -30.0, 16.0, -1.0];
const STENCIL1: [f64; 5] = [1.0, -8.0, 0.0, 8.0, -1.0];

/// Builds `a·(−h²∂²) + b(t) + d·∂_t` with the boundary closure described in
/// the module documentation.
#[allow(clippy::too_many_arguments)]
fn assemble<T: Real>(
    n: usize,
    t_max: T,
    h: T,
    a: Complex<T>,
    b: impl Fn(T) -> Complex<T>,
    d: Complex<T>,
    kappa: Complex<T>,
    bc: &BoundaryCondition<T>,
) -> (Banded<T>, T, Vec<T>, Vec<T>) {
    let dirichlet = bc.kind == BcKind::Dirichlet;
    let beta = bc.beta();
    let nf = T::from_usize(n).unwrap();
    let dt = if dirichlet { t_max / (nf + T::one()) } else { t_max / nf };
    // Grid index of unknown 0.
    let offset: i64 = if dirichlet { 1 } else { 0 };
    let last = n as i64 - 1 + offset; // grid index of the last unknown
                                      // Virtual grid value as a combination of unknowns.
    let resolve = |g: i64| -> Vec<(usize, Complex<T>)> {
        let one = Complex::new(T::one(), T::zero());
        if g > last + 1 {
            // Odd reflection about t = T.
            let m = 2 * (last + 1) - g;
            vec![((m - offset) as usize, -one)]
        } else if g == last + 1 {
            vec![]
        } else if dirichlet {
            match g {
                0 => vec![],
                g if g < 0 => vec![((-g - offset) as usize, -one)],
                g => vec![((g - offset) as usize, one)],
            }
        } else if g < 0 {
            let k = T::from_i64(-g).unwrap();
            let s = k * dt;
            let c0 = beta * (T::lit(2.0) * s) + kappa * (s * s * s / T::lit(3.0));
            // β u″(0) part of u‴(0), one-sided second-order u″(0).
            let c3 = beta * (s * s * s / (T::lit(3.0) * dt * dt));
            let mut v = vec![((-g) as usize, one), (0, -c0)];
            if beta != Complex::new(T::zero(), T::zero()) {
                for (j, w) in [2.0, -5.0, 4.0, -1.0].iter().enumerate() {
                    v.push((j, -(c3 * T::lit(*w))));
                }
            }
            v
        } else {
            vec![(g as usize, one)]
        }
    };
    let mut m = Banded::zeros(n, 2, 3);
    let c2 = a * (h * h) / (T::lit(12.0) * dt * dt);
    let c1 = d / (T::lit(12.0) * dt);
    let mut grid = Vec::with_capacity(n);
    for i in 0..n {
        let gi = i as i64 + offset;
        let t = T::from_i64(gi).unwrap() * dt;
        grid.push(t);
        m.add(i, i, b(t));
        for (s, off) in (-2i64..=2).enumerate() {
            let coeff = -(c2 * T::lit(STENCIL2[s])) + c1 * T::lit(STENCIL1[s]);
            for (j, w) in resolve(gi + off) {
                m.add(i, j, coeff * w);
            }
        }
    }
    let mut weights = vec![dt; n];
    if !dirichlet {
        weights[0] = dt * T::lit(0.5);
    }
    (m, dt, grid, weights)
}

/// Discretises the frozen operator of `spec` on `n` unknowns.
pub fn frozen_operator<T: Real>(spec: &ModelOperatorSpec<T>, n: usize) -> Result<DiscretizedOperator<T>> {
    spec.validate()?;
    if n < 8 {
        return Err(Error::InvalidInput(format!("need at least 8 grid points, got {n}")));
    }
    let s = *spec;
    let eta2 = s.eta_weight * s.eta_weight;
    let lo = s.lower_order;
    let sqrt_h = s.h.sqrt();
    let b = move |t: T| {
        s.phase * (T::lit(2.0) * t * s.q_val)
            + Complex::new(
                s.r_val + (lo.c_0 * s.h + lo.c_1 * sqrt_h * t + lo.c_2 * t * t) * eta2,
                T::zero(),
            )
    };
    // c_d h (hD_t) = c_d h (−i h ∂_t).
    let d = Complex::new(T::zero(), -(lo.c_d * s.h * s.h));
    let kappa =
        (s.phase * (T::lit(2.0) * s.q_val) + Complex::new(lo.c_1 * sqrt_h * eta2, T::zero())) / (s.phase * s.h * s.h);
    let (matrix, dt, grid, weights) = assemble(n, s.t_max, s.h, s.phase, b, d, kappa, &s.bc);
    let bc_note = match s.bc.kind {
        BcKind::Dirichlet => "u(0) = 0 by odd reflection; u(T) = 0".to_string(),
        BcKind::Neumann => "u'(0) = 0 by Taylor ghost with V'(0) correction; u(T) = 0".to_string(),
        BcKind::Robin => format!("u'(0) = ({})u(0) by Taylor ghost (second order); u(T) = 0", s.bc.beta()),
    };
    Ok(DiscretizedOperator {
        n,
        dt,
        grid,
        weights,
        matrix,
        spec: s,
        bc_note,
    })
}

/// Interval length used for the Airy realisation `D_s² + s`.
pub const AIRY_INTERVAL: f64 = 40.0;

fn airy_spec<T: Real>(bc: BoundaryCondition<T>) -> ModelOperatorSpec<T> {
    let mut spec = ModelOperatorSpec::new(T::one(), T::lit(AIRY_INTERVAL), T::lit(0.5), bc);
    spec.phase = Complex::new(T::one(), T::zero());
    spec
}

fn lowest_real_eigs<T: Real>(op: &DiscretizedOperator<T>, count: usize) -> Result<Vec<T>> {
    let bc = op.spec.bc;
    let shift = if bc.kind == BcKind::Robin && bc.gamma > T::zero() {
        -(bc.gamma * bc.gamma) - T::one()
    } else {
        T::zero()
    };
    let mut ev: Vec<T> = op
        .eigenvalues_near(Complex::new(shift, T::zero()), count)?
        .into_iter()
        .map(|z| z.re)
        .collect();
    ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(ev)
}

/// The first `count` eigenvalues of `D_s² + s` on `[0, 40]` with `bc` at
/// `s = 0`, computed on `n` and `2n` points; returns the `2n` values.
///
/// Fails with a non-convergence error when the Richardson error estimate
/// `|λ_{2n} − λ_n|/15` exceeds `10⁻⁶`.
pub fn airy_realization_eigs<T: Real>(bc: BoundaryCondition<T>, count: usize, n: usize) -> Result<Vec<T>> {
    if count == 0 || count > 10 {
        return Err(Error::InvalidInput(format!("count must be in 1..=10, got {count}")));
    }
    if n < 500 {
        return Err(Error::InvalidInput(format!("n must be at least 500, got {n}")));
    }
    let spec = airy_spec(bc);
    let coarse = lowest_real_eigs(&frozen_operator(&spec, n)?, count)?;
    let fine = lowest_real_eigs(&frozen_operator(&spec, 2 * n)?, count)?;
    let denom = T::lit(15.0);
    for (k, (a, b)) in coarse.iter().zip(&fine).enumerate() {
        let est = (*b - *a).abs() / denom;
        if est > T::lit(1e-6) {
            return Err(Error::NonConvergence(format!(
                "eigenvalue {}: Richardson estimate {est} exceeds 1e-6",
                k + 1
            )));
        }
    }
    Ok(fine)
}

/// Minimum over unit `u` satisfying `bc` of
/// `Re⟨((hD_t)² + t)u, u⟩ + c_d0 h²|D_t u(0)|² + c_00 h²|u(0)|²`, as the
/// smallest eigenvalue of the symmetrised penalised form.
///
/// The grid is `[0, 40 h^{2/3}]` with `n` points, so results are exactly
/// covariant under `t = h^{2/3}s`.
pub fn min_rayleigh<T: Real>(bc: BoundaryCondition<T>, h: T, penalty: (T, T), n: usize) -> Result<T> {
    if !(h >= T::lit(1e-6) && h <= T::lit(1e-1)) {
        return Err(Error::InvalidInput(format!("h must lie in [1e-6, 1e-1], got {h}")));
    }
    let airy = h.powf(T::lit(2.0 / 3.0));
    let t_max = T::lit(AIRY_INTERVAL) * airy;
    let dt = t_max / T::from_usize(n).unwrap();
    if dt > airy / T::lit(20.0) {
        return Err(Error::Resolution(format!(
            "grid spacing {dt} exceeds h^(2/3)/20 = {}",
            airy / T::lit(20.0)
        )));
    }
    let mut spec = ModelOperatorSpec::new(h, t_max, T::lit(0.5), bc);
    spec.phase = Complex::new(T::one(), T::zero());
    let op = frozen_operator(&spec, n)?;
    let w = &op.weights;
    let (c_d0, c_00) = penalty;

    // (W A + Aᴴ W)/2 plus the rank-one penalties.
    let mut form = Banded::zeros(n, 4, 4);
    for i in 0..n {
        for j in op.matrix.row_range(i) {
            let v = op.matrix.get(i, j) * w[i] * T::lit(0.5);
            form.add(i, j, v);
            form.add(j, i, v.conj());
        }
    }
    let dt = op.dt;
    let du0: Vec<(usize, Complex<T>)> = match bc.kind {
        BcKind::Dirichlet => [48.0, -36.0, 16.0, -3.0]
            .iter()
            .enumerate()
            .map(|(k, c)| (k, Complex::new(T::lit(*c) / (T::lit(12.0) * dt), T::zero())))
            .collect(),
        BcKind::Neumann => vec![],
        BcKind::Robin => vec![(0, bc.beta())],
    };
    let h2 = h * h;
    for &(i, di) in &du0 {
        for &(j, dj) in &du0 {
            form.add(i, j, di.conj() * dj * (c_d0 * h2));
        }
    }
    if bc.kind != BcKind::Dirichlet {
        form.add(0, 0, Complex::new(c_00 * h2, T::zero()));
    }
    pencil_min_eig(&form, w, T::lit(1e-13))
}

/// Relative change accepted between the `n` and `2n` values of [`sigma_min`].
pub const SIGMA_CONVERGENCE: f64 = 5e-4;

/// Smallest singular value of `op − ω₀` in the weighted norm, at one
/// resolution.
pub fn sigma_min_at<T: Real>(op: &DiscretizedOperator<T>, omega0: Complex<T>) -> Result<T> {
    let mut b = op.matrix.clone();
    b.shift_diagonal(-omega0);
    let normal = b.weighted_normal(&op.weights);
    let lam = pencil_min_eig(&normal, &op.weights, T::lit(1e-12))?;
    Ok(lam.max(T::zero()).sqrt())
}

/// Smallest singular value of `op − ω₀`, computed at `op.n` and `2·op.n`
/// and required to agree to three significant digits; returns the finer value.
pub fn sigma_min<T: Real>(op: &DiscretizedOperator<T>, omega0: Complex<T>) -> Result<T> {
    let arg = omega0.arg();
    if !(arg > -T::PI() / T::lit(6.0) && arg < T::lit(5.0) * T::PI() / T::lit(6.0)) {
        return Err(Error::InvalidInput(format!(
            "arg omega0 = {arg} outside (-pi/6, 5pi/6)"
        )));
    }
    let coarse = sigma_min_at(op, omega0)?;
    let fine = sigma_min_at(&op.refined(2 * op.n)?, omega0)?;
    if (fine - coarse).abs() > T::lit(SIGMA_CONVERGENCE) * fine.abs() {
        return Err(Error::NonConvergence(format!(
            "sigma_min changed from {coarse} to {fine} between n = {} and {}",
            op.n,
            2 * op.n
        )));
    }
    Ok(fine)
}

// ---------------------------------------------------------------------------
// Inequality suites on random trial functions.

/// The inequalities of the Airy-model analysis that can be checked on trial
/// functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Suite {
    /// `⟨Au,u⟩ >= ζ₁ h^{2/3}‖u‖²`, `u(0) = 0`.
    EiDh0,
    /// `⟨Au,u⟩ >= ζ₁′ h^{2/3}‖u‖²`, `u′(0) = 0`.
    EiNh0,
    /// `⟨Au,u⟩ >= ‖hD_t u‖²` (Dirichlet or Neumann).
    EiDnh1,
    /// `⟨Au,u⟩ >= ‖t^{1/2}u‖²` (Dirichlet or Neumann).
    EiDnht,
    /// `‖Au‖ >= ζ₁ h^{2/3}‖u‖`, `u(0) = 0`.
    EoDh0,
    /// `‖Au‖ >= ζ₁^{1/2} h^{1/3}‖hD_t u‖`, `u(0) = 0`.
    EoDh1,
    /// `‖Au‖ >= ζ₁′ h^{2/3}‖u‖`, `u′(0) = 0`.
    EoNh0,
    /// `‖Au‖ >= ζ₁′^{1/2} h^{1/3}‖hD_t u‖`, `u′(0) = 0`.
    EoNh1,
    /// `‖Au‖² >= ‖(hD_t)²u‖² + ‖tu‖²` (Dirichlet or Neumann).
    EoDnh2,
    /// `‖Au‖² >= ‖(hD_t)²u‖² − h²|u(0)|²`, general `u`.
    EoH2,
    /// `Re⟨Au,u⟩ >= ‖hD_t u‖² − h²|D_t u(0)||u(0)|`, general `u`.
    EiH1,
    /// `Re⟨Au,u⟩ >= ζ₁′h^{2/3}(1 − C h^{2/3})‖u‖² − C h²|D_t u(0)|²`.
    EirH0,
    /// `|Im⟨Au,u⟩| <= C h^{2/3} Re⟨Au,u⟩ + C h²|D_t u(0)|²`.
    EiiH0,
    /// On `[0, 1/L]`: `Re⟨Au,u⟩ >= (ζ₁′h^{2/3} − C hL)‖u‖² − C h²|D_t u(0)|² + (L/2)‖tu‖²`.
    EirSi,
}

/// Family of trial functions a suite draws from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TrialFamily {
    Dirichlet,
    Neumann,
    /// Alternates Dirichlet (even trials) and Neumann (odd trials).
    Both,
    General,
}

/// `L` of the small-interval suite.
pub const SMALL_INTERVAL_L: f64 = 2.0;

impl Suite {
    pub const ALL: [Suite; 14] = [
        Suite::EiDh0,
        Suite::EiNh0,
        Suite::EiDnh1,
        Suite::EiDnht,
        Suite::EoDh0,
        Suite::EoDh1,
        Suite::EoNh0,
        Suite::EoNh1,
        Suite::EoDnh2,
        Suite::EoH2,
        Suite::EiH1,
        Suite::EirH0,
        Suite::EiiH0,
        Suite::EirSi,
    ];

    pub fn id(&self) -> &'static str {
        match self {
            Suite::EiDh0 => "ei:dh0",
            Suite::EiNh0 => "ei:nh0",
            Suite::EiDnh1 => "ei:dnh1",
            Suite::EiDnht => "ei:dnht",
            Suite::EoDh0 => "eo:dh0",
            Suite::EoDh1 => "eo:dh1",
            Suite::EoNh0 => "eo:nh0",
            Suite::EoNh1 => "eo:nh1",
            Suite::EoDnh2 => "eo:dnh2",
            Suite::EoH2 => "eo:h2",
            Suite::EiH1 => "ei:h1",
            Suite::EirH0 => "eir:h0",
            Suite::EiiH0 => "eii:h0",
            Suite::EirSi => "eir:si",
        }
    }

    pub fn parse(id: &str) -> Result<Suite> {
        Suite::ALL
            .iter()
            .copied()
            .find(|s| s.id() == id)
            .ok_or_else(|| Error::InvalidInput(format!("unknown inequality suite '{id}'")))
    }

    /// `true` for inequalities with explicit constants.
    pub fn is_exact(&self) -> bool {
        !matches!(self, Suite::EirH0 | Suite::EiiH0 | Suite::EirSi)
    }

    pub fn family(&self) -> TrialFamily {
        match self {
            Suite::EiDh0 | Suite::EoDh0 | Suite::EoDh1 => TrialFamily::Dirichlet,
            Suite::EiNh0 | Suite::EoNh0 | Suite::EoNh1 => TrialFamily::Neumann,
            Suite::EiDnh1 | Suite::EiDnht | Suite::EoDnh2 => TrialFamily::Both,
            _ => TrialFamily::General,
        }
    }
}

/// `u(t) = χ(t/T) Σ_k (a_k sin(kπt/T) + b_k cos(kπt/T))` with `χ = 1` on
/// `[0, 0.45]` and a septic smoothstep down to `0` at `0.9`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialFunction<T> {
    pub t_max: T,
    /// `a_k` for `k = 1, 2, …`.
    pub sin_coeffs: Vec<Complex<T>>,
    /// `b_k` for `k = 0, 1, …`.
    pub cos_coeffs: Vec<Complex<T>>,
}

/// Number of series terms of random trial functions.
pub const TRIAL_TERMS: usize = 64;

impl<T: Real> TrialFunction<T> {
    /// Support of the trial function, `[0, 0.9 T]`.
    pub fn support(&self) -> T {
        self.t_max * T::lit(0.9)
    }

    fn cutoff(&self, t: T) -> (T, T, T) {
        let t0 = self.t_max * T::lit(0.45);
        if t <= t0 {
            return (T::one(), T::zero(), T::zero());
        }
        if t >= self.t_max * T::lit(0.9) {
            return (T::zero(), T::zero(), T::zero());
        }
        let y = (t - t0) / t0;
        let y2 = y * y;
        let y3 = y2 * y;
        let s = y2 * y2 * (T::lit(35.0) - T::lit(84.0) * y + T::lit(70.0) * y2 - T::lit(20.0) * y3);
        let one_y = T::one() - y;
        let ds = T::lit(140.0) * y3 * one_y * one_y * one_y;
        let d2s = T::lit(420.0) * y2 * one_y * one_y * (T::one() - T::lit(2.0) * y);
        (T::one() - s, -ds / t0, -d2s / (t0 * t0))
    }

    /// `(u, u′, u″)` at `t`.
    pub fn eval(&self, t: T) -> (Complex<T>, Complex<T>, Complex<T>) {
        let w = T::PI() / self.t_max;
        let rot = Complex::from_polar(T::one(), w * t);
        let zero = Complex::new(T::zero(), T::zero());
        let (mut s, mut s1, mut s2) = (zero, zero, zero);
        let mut e = Complex::new(T::one(), T::zero()); // e^{ikwt}
        let terms = self.sin_coeffs.len().max(self.cos_coeffs.len().saturating_sub(1));
        for k in 0..=terms {
            let kw = T::from_usize(k).unwrap() * w;
            let (sn, cs) = (e.im, e.re);
            if k >= 1 {
                if let Some(a) = self.sin_coeffs.get(k - 1) {
                    s = s + *a * sn;
                    s1 = s1 + *a * (kw * cs);
                    s2 = s2 - *a * (kw * kw * sn);
                }
            }
            if let Some(b) = self.cos_coeffs.get(k) {
                s = s + *b * cs;
                s1 = s1 - *b * (kw * sn);
                s2 = s2 - *b * (kw * kw * cs);
            }
            e = e * rot;
        }
        let (c, c1, c2) = self.cutoff(t);
        (s * c, s1 * c + s * c1, s2 * c + s1 * (c1 * T::lit(2.0)) + s * c2)
    }

    /// Random trial of the given family: complex normal coefficients scaled
    /// by `(1+k)^{−3/2}`.
    pub fn random<R: Rng>(rng: &mut R, family: TrialFamily, t_max: T) -> Self {
        let mut draw = |k: usize| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            let scale = (1.0 + k as f64).powf(-1.5);
            Complex::new(T::lit(re * scale), T::lit(im * scale))
        };
        let sin = matches!(family, TrialFamily::Dirichlet | TrialFamily::General);
        let cos = matches!(family, TrialFamily::Neumann | TrialFamily::General);
        let sin_coeffs = if sin {
            (1..=TRIAL_TERMS).map(&mut draw).collect()
        } else {
            vec![]
        };
        let cos_coeffs = if cos {
            (0..TRIAL_TERMS).map(&mut draw).collect()
        } else {
            vec![]
        };
        TrialFunction {
            t_max,
            sin_coeffs,
            cos_coeffs,
        }
    }
}

/// Quadratic quantities of one trial function for `A = (hD_t)² + t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrialQuantities<T> {
    /// `‖u‖²`
    pub norm2: T,
    /// `‖hD_t u‖²`
    pub hd2: T,
    /// `‖(hD_t)²u‖²`
    pub hdd2: T,
    /// `‖t u‖²`
    pub tu2: T,
    /// `‖t^{1/2} u‖²`
    pub sqrt_tu2: T,
    /// `⟨Au, u⟩`
    pub form: Complex<T>,
    /// `‖Au‖²`
    pub au2: T,
    /// `|u(0)|`
    pub u0: T,
    /// `|D_t u(0)|`
    pub du0: T,
}

const QUAD_PANELS: usize = 48;
const QUAD_NODES: usize = 16;

fn integrate<T: Real>(u: &TrialFunction<T>, h: T, panels: usize) -> TrialQuantities<T> {
    let (x, w) = gauss_legendre::<T>(QUAD_NODES);
    let mut q = TrialQuantities {
        norm2: T::zero(),
        hd2: T::zero(),
        hdd2: T::zero(),
        tu2: T::zero(),
        sqrt_tu2: T::zero(),
        form: Complex::new(T::zero(), T::zero()),
        au2: T::zero(),
        u0: T::zero(),
        du0: T::zero(),
    };
    let h2 = h * h;
    // Two pieces aligned with the cutoff breakpoints 0.45T and 0.9T.
    let pieces = [
        (T::zero(), u.t_max * T::lit(0.45)),
        (u.t_max * T::lit(0.45), u.support()),
    ];
    for (a, b) in pieces {
        let width = (b - a) / T::from_usize(panels).unwrap();
        let half = width * T::lit(0.5);
        for p in 0..panels {
            let mid = a + width * (T::from_usize(p).unwrap() + T::lit(0.5));
            for (xi, wi) in x.iter().zip(&w) {
                let t = mid + half * *xi;
                let wt = *wi * half;
                let (v, v1, v2) = u.eval(t);
                let au = v * t - v2 * h2;
                q.norm2 = q.norm2 + v.norm_sqr() * wt;
                q.hd2 = q.hd2 + v1.norm_sqr() * h2 * wt;
                q.hdd2 = q.hdd2 + v2.norm_sqr() * h2 * h2 * wt;
                q.tu2 = q.tu2 + v.norm_sqr() * t * t * wt;
                q.sqrt_tu2 = q.sqrt_tu2 + v.norm_sqr() * t * wt;
                q.form = q.form + au * v.conj() * wt;
                q.au2 = q.au2 + au.norm_sqr() * wt;
            }
        }
    }
    let (v0, v10, _) = u.eval(T::zero());
    q.u0 = v0.norm();
    q.du0 = v10.norm();
    q
}

/// Quadrature of the trial quantities, cross-checked against a rule with half
/// as many panels.
pub fn trial_quantities<T: Real>(u: &TrialFunction<T>, h: T) -> Result<TrialQuantities<T>> {
    let fine = integrate(u, h, QUAD_PANELS);
    let coarse = integrate(u, h, QUAD_PANELS / 2);
    let pairs = [
        (fine.norm2, coarse.norm2),
        (fine.hdd2, coarse.hdd2),
        (fine.au2, coarse.au2),
    ];
    for (f, c) in pairs {
        if (f - c).abs() > T::lit(1e-11) * f.abs() {
            return Err(Error::Resolution(format!(
                "quadrature not resolved: {f} vs {c} at half the panels"
            )));
        }
    }
    Ok(fine)
}

/// Airy zeros used by the suites.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AiryConstants<T> {
    pub zeta1: T,
    pub zeta1_prime: T,
}

impl<T: Real> AiryConstants<T> {
    pub fn compute() -> Result<Self> {
        Ok(AiryConstants {
            zeta1: airy_first_zero()?,
            zeta1_prime: airy_prime_first_zero()?,
        })
    }
}

/// `(lhs, rhs)` of an exact suite, or the constant implied by one trial for an
/// asymptotic suite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Evaluation<T> {
    Exact { lhs: T, rhs: T },
    Constant(T),
}

/// Evaluates `suite` on one trial.
pub fn evaluate_trial<T: Real>(suite: Suite, h: T, q: &TrialQuantities<T>, k: &AiryConstants<T>) -> Evaluation<T> {
    let h23 = h.powf(T::lit(2.0 / 3.0));
    let h2 = h * h;
    let re = q.form.re;
    let du0_2 = q.du0 * q.du0;
    let ex = |lhs, rhs| Evaluation::Exact { lhs, rhs };
    match suite {
        Suite::EiDh0 => ex(re, k.zeta1 * h23 * q.norm2),
        Suite::EiNh0 => ex(re, k.zeta1_prime * h23 * q.norm2),
        Suite::EiDnh1 => ex(re, q.hd2),
        Suite::EiDnht => ex(re, q.sqrt_tu2),
        Suite::EoDh0 => ex(q.au2, k.zeta1 * k.zeta1 * h23 * h23 * q.norm2),
        Suite::EoDh1 => ex(q.au2, k.zeta1 * h23 * q.hd2),
        Suite::EoNh0 => ex(q.au2, k.zeta1_prime * k.zeta1_prime * h23 * h23 * q.norm2),
        Suite::EoNh1 => ex(q.au2, k.zeta1_prime * h23 * q.hd2),
        Suite::EoDnh2 => ex(q.au2, q.hdd2 + q.tu2),
        Suite::EoH2 => ex(q.au2, q.hdd2 - h2 * q.u0 * q.u0),
        Suite::EiH1 => ex(re, q.hd2 - h2 * q.du0 * q.u0),
        Suite::EirH0 => Evaluation::Constant(
            (k.zeta1_prime * h23 * q.norm2 - re) / (k.zeta1_prime * h23 * h23 * q.norm2 + h2 * du0_2),
        ),
        Suite::EiiH0 => Evaluation::Constant(q.form.im.abs() / (h23 * re + h2 * du0_2)),
        Suite::EirSi => {
            let l = T::lit(SMALL_INTERVAL_L);
            Evaluation::Constant(
                (k.zeta1_prime * h23 * q.norm2 + l * T::lit(0.5) * q.tu2 - re) / (h * l * q.norm2 + h2 * du0_2),
            )
        }
    }
}

/// Outcome of a suite over seeded random trials.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub suite: String,
    pub h: f64,
    /// Number of trials.
    pub n: usize,
    pub seed: u64,
    /// Smallest `lhs − rhs` (exact suites) or minus the largest implied
    /// constant (asymptotic suites).
    pub worst_margin: f64,
    /// Worst margin divided by `max(|lhs|, |rhs|)` (exact suites only).
    pub worst_relative_margin: f64,
    pub argmin_trial: usize,
    /// Constants fitted as the maximum over trials (asymptotic suites only).
    pub fitted_constants: BTreeMap<String, f64>,
    pub exact: bool,
    /// Exact suites: every margin `>= −10⁻⁹·scale`. Asymptotic suites: the
    /// fitted constant is finite.
    pub passed: bool,
}

/// Relative tolerance of the exact suites.
pub const EXACT_TOLERANCE: f64 = 1e-9;

/// Interval length of trial `i`: random on the Airy scale
/// `[8, 40]·h^{2/3}`, or `1/L` for the small-interval suite.
fn trial_interval<T: Real, R: Rng>(suite: Suite, h: T, rng: &mut R) -> T {
    if suite == Suite::EirSi {
        T::one() / T::lit(SMALL_INTERVAL_L)
    } else {
        let f: f64 = rng.random_range(8.0..40.0);
        T::lit(f) * h.powf(T::lit(2.0 / 3.0))
    }
}

/// Runs `suite` at `h` on `trials` seeded random trial functions.
pub fn check_inequalities<T: Real>(suite: Suite, h: T, trials: usize, seed: u64) -> Result<InequalityReport> {
    if trials < 100 {
        return Err(Error::InvalidInput(format!("need at least 100 trials, got {trials}")));
    }
    if !(h > T::zero() && h < T::one()) {
        return Err(Error::InvalidInput(format!("h must lie in (0, 1), got {h}")));
    }
    let consts = AiryConstants::<T>::compute()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = f64::INFINITY;
    let mut worst_rel = f64::INFINITY;
    let mut argmin = 0;
    let mut c_max = f64::NEG_INFINITY;
    for i in 0..trials {
        let family = match suite.family() {
            TrialFamily::Both if i % 2 == 0 => TrialFamily::Dirichlet,
            TrialFamily::Both => TrialFamily::Neumann,
            f => f,
        };
        let t_max = trial_interval(suite, h, &mut rng);
        let u = TrialFunction::random(&mut rng, family, t_max);
        let q = trial_quantities(&u, h)?;
        match evaluate_trial(suite, h, &q, &consts) {
            Evaluation::Exact { lhs, rhs } => {
                let margin = (lhs - rhs).to_f64_lossy();
                let scale = lhs.abs().max(rhs.abs()).to_f64_lossy();
                let rel = if scale > 0.0 { margin / scale } else { margin };
                if rel < worst_rel {
                    worst_rel = rel;
                    worst = margin;
                    argmin = i;
                }
            }
            Evaluation::Constant(c) => {
                let c = c.to_f64_lossy();
                if c > c_max {
                    c_max = c;
                    worst = -c;
                    argmin = i;
                }
            }
        }
    }
    let mut fitted_constants = BTreeMap::new();
    let passed = if suite.is_exact() {
        worst_rel >= -EXACT_TOLERANCE
    } else {
        fitted_constants.insert("C".to_string(), c_max);
        worst_rel = f64::NAN;
        c_max.is_finite()
    };
    Ok(InequalityReport {
        suite: suite.id().to_string(),
        h: h.to_f64_lossy(),
        n: trials,
        seed,
        worst_margin: worst,
        worst_relative_margin: worst_rel,
        argmin_trial: argmin,
        fitted_constants,
        exact: suite.is_exact(),
        passed,
    })
}
