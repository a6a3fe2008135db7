//! Scattering resonances of balls with Robin boundary conditions, the cubic
//! resonance-free barrier `Im ζ = −S|ζ|^{1/3} + C`, and numerical checks of
//! the Airy-model operator bounds that underpin it.
//!
//! All numerics are generic over the real scalar [`Real`] (`f32` or `f64`);
//! the aliases at the bottom of this file pin the common `f64` instances.
//!
//! Module map:
//!
//! * [`csfun`]: Airy `Ai`, `Ai′` and spherical Hankel functions of the first kind.
//! * [`roots`]: argument-principle zero counting and subdivision root finding.
//! * [`geometry`]: parametric convex surfaces, principal curvatures, barrier constant.
//! * [`scaling`]: complex-scaling contours and the scaled Laplacian symbol.
//! * [`airy_model`]: discretised Airy-type model operators and their lower bounds.
//! * [`resonance`]: ball resonances and barrier verification.
//! * [`linalg`]: the dense and banded complex linear algebra the above rely on.

// `!(x > 0)` is used on purpose so that NaN inputs fail the guards, and the
// numerical kernels index several arrays in lockstep.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod airy_model;
pub mod csfun;
pub mod error;
pub mod geometry;
pub mod linalg;
pub mod resonance;
pub mod roots;
pub mod scaling;

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

pub use error::{Error, Result};
pub use num_complex::Complex;

/// Real scalar the numerics are written against.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Sum + Send + Sync + 'static
{
    /// Converts an `f64` literal; every implementor represents all finite `f64`
    /// values up to rounding.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// `true` when both components are finite.
#[inline]
pub fn is_finite_c<T: Real>(z: Complex<T>) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

pub type C64 = Complex<f64>;
pub type C32 = Complex<f32>;

pub type Rect64 = roots::Rect<f64>;
pub type ZeroList64 = roots::ZeroList<f64>;
pub type BoundaryCondition64 = airy_model::BoundaryCondition<f64>;
pub type ModelOperatorSpec64 = airy_model::ModelOperatorSpec<f64>;
pub type DiscretizedOperator64 = airy_model::DiscretizedOperator<f64>;
pub type ContourSpec64 = scaling::ContourSpec<f64>;
pub type ResonanceQuery64 = resonance::ResonanceQuery<f64>;
pub type ResonanceSet64 = resonance::ResonanceSet<f64>;
pub type BarrierReport64 = resonance::BarrierReport<f64>;
pub type CurvatureReport64 = geometry::CurvatureReport<f64>;
