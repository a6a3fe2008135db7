//! Zeros of holomorphic functions in axis-aligned rectangles.
//!
//! [`winding_count`] evaluates the argument principle by unwrapping the phase
//! of `f` along the boundary, bisecting any boundary segment whose phase jump
//! is `>= π/2`. [`find_zeros`] splits a rectangle into quadrants until every
//! cell holds one zero (or a cluster below the cluster radius) and polishes
//! each with Newton's method started at the cell centre.
//!
//! Cells are visited in a fixed order (south-west, south-east, north-west,
//! north-east) and split points are perturbed by a fixed sequence when a zero
//! lies on a split line, so results do not depend on scheduling.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::{is_finite_c, Error, Real, Result};

/// Closed rectangle `[re_min, re_max] × [im_min, im_max]` in the complex plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect<T> {
    pub re_min: T,
    pub re_max: T,
    pub im_min: T,
    pub im_max: T,
}

impl<T: Real> Rect<T> {
    pub fn new(re_min: T, re_max: T, im_min: T, im_max: T) -> Result<Self> {
        let finite = [re_min, re_max, im_min, im_max].iter().all(|v| v.is_finite());
        if !finite || re_min >= re_max || im_min >= im_max {
            return Err(Error::InvalidInput(format!(
                "degenerate rectangle [{re_min}, {re_max}] x [{im_min}, {im_max}]"
            )));
        }
        Ok(Rect {
            re_min,
            re_max,
            im_min,
            im_max,
        })
    }

    /// Square of half-width `r` centred on `z`.
    pub fn around(z: Complex<T>, r: T) -> Result<Self> {
        Rect::new(z.re - r, z.re + r, z.im - r, z.im + r)
    }

    pub fn width(&self) -> T {
        self.re_max - self.re_min
    }

    pub fn height(&self) -> T {
        self.im_max - self.im_min
    }

    pub fn diag(&self) -> T {
        self.width().hypot(self.height())
    }

    pub fn center(&self) -> Complex<T> {
        let half = T::lit(0.5);
        Complex::new((self.re_min + self.re_max) * half, (self.im_min + self.im_max) * half)
    }

    pub fn contains(&self, z: Complex<T>) -> bool {
        z.re >= self.re_min && z.re <= self.re_max && z.im >= self.im_min && z.im <= self.im_max
    }

    /// `self` grown by `margin` on every side.
    pub fn inflate(&self, margin: T) -> Self {
        Rect {
            re_min: self.re_min - margin,
            re_max: self.re_max + margin,
            im_min: self.im_min - margin,
            im_max: self.im_max + margin,
        }
    }

    /// Corners in counter-clockwise order starting at the south-west corner.
    fn corners(&self) -> [Complex<T>; 4] {
        [
            Complex::new(self.re_min, self.im_min),
            Complex::new(self.re_max, self.im_min),
            Complex::new(self.re_max, self.im_max),
            Complex::new(self.re_min, self.im_max),
        ]
    }

    /// Quadrants around `split` in the order SW, SE, NW, NE.
    pub fn quadrants(&self, split: Complex<T>) -> [Rect<T>; 4] {
        let (x, y) = (split.re, split.im);
        [
            Rect {
                re_min: self.re_min,
                re_max: x,
                im_min: self.im_min,
                im_max: y,
            },
            Rect {
                re_min: x,
                re_max: self.re_max,
                im_min: self.im_min,
                im_max: y,
            },
            Rect {
                re_min: self.re_min,
                re_max: x,
                im_min: y,
                im_max: self.im_max,
            },
            Rect {
                re_min: x,
                re_max: self.re_max,
                im_min: y,
                im_max: self.im_max,
            },
        ]
    }
}

/// One polished zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Zero<T> {
    pub location: Complex<T>,
    /// `|f(z)|` divided by the largest `|f|` on a small circle around `z`.
    pub residual: T,
    pub newton_iters: usize,
    /// Winding number of the cell that produced this zero; `1` for simple zeros.
    pub multiplicity: usize,
}

/// Zeros found in a rectangle, ordered by real then imaginary part.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ZeroList<T> {
    pub zeros: Vec<Zero<T>>,
}

impl<T: Real> ZeroList<T> {
    pub fn len(&self) -> usize {
        self.zeros.len()
    }

    pub fn is_empty(&self) -> bool {
        self.zeros.is_empty()
    }

    pub fn locations(&self) -> Vec<Complex<T>> {
        self.zeros.iter().map(|z| z.location).collect()
    }

    /// Total count with multiplicity; equals the winding number of the search
    /// rectangle.
    pub fn total_multiplicity(&self) -> usize {
        self.zeros.iter().map(|z| z.multiplicity).sum()
    }
}

/// Tuning knobs for [`find_zeros_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootOptions<T> {
    /// Newton stops once `|Δz| <= tol · max(1, |z|)`.
    pub tol: T,
    pub max_depth: usize,
    pub max_newton: usize,
    /// Initial boundary samples for the whole rectangle.
    pub n_samples: usize,
    /// Cluster radius as a fraction of the rectangle diagonal.
    pub cluster_fraction: T,
}

impl<T: Real> RootOptions<T> {
    pub fn new(tol: T) -> Self {
        RootOptions {
            tol,
            max_depth: 40,
            max_newton: 100,
            n_samples: 64,
            cluster_fraction: T::lit(1e-8),
        }
    }
}

const MAX_BISECTIONS: usize = 48;
const EVAL_BUDGET: usize = 1 << 22;
const SPLIT_OFFSETS: [(f64, f64); 6] = [
    (0.0, 0.0),
    (0.0137, 0.0071),
    (-0.0213, 0.0119),
    (0.0311, -0.0267),
    (-0.0419, -0.0353),
    (0.0557, 0.0461),
];

/// A boundary sample: point, value and logarithmic derivative (`0` when no
/// derivative is available).
#[derive(Clone, Copy)]
struct Sample<T> {
    z: Complex<T>,
    f: Complex<T>,
    log_d: Complex<T>,
}

struct Counter<'a, T, F> {
    f: &'a F,
    /// Derivative of `f`; enables the phase-increment consistency test.
    fp: Option<&'a dyn Fn(Complex<T>) -> Complex<T>>,
    evals: usize,
}

impl<'a, T: Real, F: Fn(Complex<T>) -> Complex<T>> Counter<'a, T, F> {
    fn new(f: &'a F, fp: Option<&'a dyn Fn(Complex<T>) -> Complex<T>>) -> Self {
        Counter { f, fp, evals: 0 }
    }

    fn eval(&mut self, z: Complex<T>) -> Result<Sample<T>> {
        self.evals += 1;
        if self.evals > EVAL_BUDGET {
            return Err(Error::Resolution(format!(
                "more than {EVAL_BUDGET} boundary evaluations"
            )));
        }
        let v = (self.f)(z);
        if !is_finite_c(v) {
            return Err(Error::NonFinite {
                context: "root-finding target",
            });
        }
        if v.re == T::zero() && v.im == T::zero() {
            return Err(boundary_zero(z));
        }
        let log_d = match self.fp {
            Some(fp) => fp(z) / v,
            None => Complex::new(T::zero(), T::zero()),
        };
        Ok(Sample { z, f: v, log_d })
    }

    /// Phase change of `f` from `a` to `b`, refining until every jump is
    /// below `π/2`. When the derivative is known a segment must also satisfy
    /// `|b − a|·max(|f′/f(a)|, |f′/f(b)|) <= 1` and agree with the trapezoid
    /// estimate `Im[(b − a)(f′/f(a) + f′/f(b))/2]` to within `π/4`; a zero at
    /// distance `d` from an endpoint makes `|f′/f| ≳ 1/d`, so segments shrink
    /// to the local zero spacing before their increment is trusted. Without
    /// the derivative, increments aliased by multiples of `2π` go unnoticed.
    fn segment(&mut self, a: Sample<T>, b: Sample<T>, depth: usize) -> Result<T> {
        let jump = (b.f / a.f).arg();
        let consistent = self.fp.is_none() || {
            let len = (b.z - a.z).norm();
            let predicted = ((b.z - a.z) * (a.log_d + b.log_d) * T::lit(0.5)).im;
            let rate = a.log_d.norm().max(b.log_d.norm());
            // A non-finite estimate cannot veto the sample.
            !(predicted.is_finite() && rate.is_finite())
                || (len * rate <= T::one() && (predicted - jump).abs() <= T::FRAC_PI_4())
        };
        if jump.abs() < T::FRAC_PI_2() && consistent {
            return Ok(jump);
        }
        let m = (a.z + b.z) * T::lit(0.5);
        if depth >= MAX_BISECTIONS || m == a.z || m == b.z {
            return Err(boundary_zero(m));
        }
        let sm = self.eval(m)?;
        Ok(self.segment(a, sm, depth + 1)? + self.segment(sm, b, depth + 1)?)
    }

    fn winding(&mut self, rect: &Rect<T>, n_samples: usize) -> Result<i64> {
        let corners = rect.corners();
        let per_edge = (n_samples / 4).max(2);
        let mut total = T::zero();
        let first = self.eval(corners[0])?;
        let mut prev = first;
        for e in 0..4 {
            let (a, b) = (corners[e], corners[(e + 1) % 4]);
            for k in 1..=per_edge {
                let next = if e == 3 && k == per_edge {
                    first
                } else if k == per_edge {
                    self.eval(b)?
                } else {
                    self.eval(a + (b - a) * T::from_usize(k).unwrap() / T::from_usize(per_edge).unwrap())?
                };
                total = total + self.segment(prev, next, 0)?;
                prev = next;
            }
        }
        let turns = total / T::TAU();
        let rounded = turns.round();
        if (turns - rounded).abs() > T::lit(1e-3) {
            return Err(Error::Resolution(format!("non-integral winding {turns}")));
        }
        Ok(rounded.to_i64().unwrap_or(0))
    }
}

fn boundary_zero<T: Real>(z: Complex<T>) -> Error {
    Error::BoundaryZero {
        re: z.re.to_f64_lossy(),
        im: z.im.to_f64_lossy(),
    }
}

/// Number of zeros minus poles of `f` inside `rect`, from the argument
/// principle with `n_samples` initial boundary samples.
pub fn winding_count<T, F>(f: F, rect: &Rect<T>, n_samples: usize) -> Result<i64>
where
    T: Real,
    F: Fn(Complex<T>) -> Complex<T>,
{
    Counter::new(&f, None).winding(rect, n_samples)
}

/// [`winding_count`] with the derivative `f_prime` available, which lets the
/// phase tracking detect increments aliased by multiples of `2π`.
pub fn winding_count_checked<T, F, G>(f: F, f_prime: G, rect: &Rect<T>, n_samples: usize) -> Result<i64>
where
    T: Real,
    F: Fn(Complex<T>) -> Complex<T>,
    G: Fn(Complex<T>) -> Complex<T>,
{
    Counter::new(&f, Some(&f_prime)).winding(rect, n_samples)
}

/// All zeros of the holomorphic `f` in `rect`, polished to `tol`.
pub fn find_zeros<T, F, G>(f: F, f_prime: G, rect: &Rect<T>, tol: T) -> Result<ZeroList<T>>
where
    T: Real,
    F: Fn(Complex<T>) -> Complex<T>,
    G: Fn(Complex<T>) -> Complex<T>,
{
    find_zeros_with(f, f_prime, rect, &RootOptions::new(tol))
}

/// [`find_zeros`] with explicit options.
pub fn find_zeros_with<T, F, G>(f: F, f_prime: G, rect: &Rect<T>, opts: &RootOptions<T>) -> Result<ZeroList<T>>
where
    T: Real,
    F: Fn(Complex<T>) -> Complex<T>,
    G: Fn(Complex<T>) -> Complex<T>,
{
    let mut search = Search {
        counter: Counter::new(&f, Some(&f_prime)),
        fp: &f_prime,
        opts,
        cluster: rect.diag() * opts.cluster_fraction,
        found: Vec::new(),
    };
    let count = search.counter.winding(rect, opts.n_samples)?;
    if count < 0 {
        return Err(Error::InvalidInput(format!(
            "negative winding number {count}: the target has poles in the rectangle"
        )));
    }
    search.solve(*rect, count as usize, 0)?;

    let mut zeros = search.found;
    zeros.sort_by(|a, b| {
        a.location
            .re
            .partial_cmp(&b.location.re)
            .unwrap()
            .then(a.location.im.partial_cmp(&b.location.im).unwrap())
    });
    let total: usize = zeros.iter().map(|z| z.multiplicity).sum();
    if total != count as usize {
        return Err(Error::NonConvergence(format!(
            "found {total} zeros, winding number is {count}"
        )));
    }
    for z in zeros.iter_mut() {
        z.residual = local_residual(&f, z.location);
    }
    Ok(ZeroList { zeros })
}

struct Search<'a, T, F, G> {
    counter: Counter<'a, T, F>,
    fp: &'a G,
    opts: &'a RootOptions<T>,
    cluster: T,
    found: Vec<Zero<T>>,
}

impl<'a, T, F, G> Search<'a, T, F, G>
where
    T: Real,
    F: Fn(Complex<T>) -> Complex<T>,
    G: Fn(Complex<T>) -> Complex<T>,
{
    fn solve(&mut self, cell: Rect<T>, count: usize, depth: usize) -> Result<()> {
        if count == 0 {
            return Ok(());
        }
        let tiny = cell.diag() <= self.cluster;
        if count == 1 || tiny {
            if let Some((z, iters)) = self.newton(cell.center(), count)? {
                let slack = cell.diag() * T::lit(1e-6);
                if cell.inflate(slack).contains(z) && !self.duplicate(z) {
                    self.found.push(Zero {
                        location: z,
                        residual: T::zero(),
                        newton_iters: iters,
                        multiplicity: count,
                    });
                    return Ok(());
                }
            }
            if tiny {
                // A cluster this small is reported at the centre.
                self.found.push(Zero {
                    location: cell.center(),
                    residual: T::zero(),
                    newton_iters: self.opts.max_newton,
                    multiplicity: count,
                });
                return Ok(());
            }
        }
        if depth >= self.opts.max_depth {
            return Err(Error::NonConvergence(format!(
                "subdivision depth {} reached with {count} zeros near {}",
                self.opts.max_depth,
                cell.center()
            )));
        }
        let (quads, counts) = self.split(&cell, count)?;
        for (q, c) in quads.into_iter().zip(counts) {
            self.solve(q, c, depth + 1)?;
        }
        Ok(())
    }

    fn split(&mut self, cell: &Rect<T>, count: usize) -> Result<([Rect<T>; 4], [usize; 4])> {
        let samples = (self.opts.n_samples / 2).max(16);
        let mut last_err = None;
        for (dx, dy) in SPLIT_OFFSETS {
            let split = cell.center() + Complex::new(cell.width() * T::lit(dx), cell.height() * T::lit(dy));
            let quads = cell.quadrants(split);
            let mut counts = [0usize; 4];
            let mut ok = true;
            for (i, q) in quads.iter().enumerate() {
                match self.counter.winding(q, samples) {
                    Ok(c) if c >= 0 => counts[i] = c as usize,
                    Ok(c) => {
                        return Err(Error::InvalidInput(format!(
                            "negative winding number {c}: the target has poles in the rectangle"
                        )))
                    }
                    Err(e @ (Error::BoundaryZero { .. } | Error::Resolution(_))) => {
                        last_err = Some(e);
                        ok = false;
                        break;
                    }
                    Err(e) => return Err(e),
                }
            }
            if ok && counts.iter().sum::<usize>() == count {
                return Ok((quads, counts));
            }
        }
        Err(last_err.unwrap_or_else(|| Error::Resolution(format!("quadrant counts do not add up to {count}"))))
    }

    fn newton(&mut self, start: Complex<T>, multiplicity: usize) -> Result<Option<(Complex<T>, usize)>> {
        let m = T::from_usize(multiplicity.max(1)).unwrap();
        let mut z = start;
        for it in 1..=self.opts.max_newton {
            let fz = (self.counter.f)(z);
            let dfz = (self.fp)(z);
            if !is_finite_c(fz) || !is_finite_c(dfz) {
                return Ok(None);
            }
            if fz.re == T::zero() && fz.im == T::zero() {
                return Ok(Some((z, it)));
            }
            if dfz.re == T::zero() && dfz.im == T::zero() {
                return Ok(None);
            }
            let dz = fz / dfz * m;
            z = z - dz;
            if !is_finite_c(z) {
                return Ok(None);
            }
            if dz.norm() <= self.opts.tol * z.norm().max(T::one()) {
                return Ok(Some((z, it)));
            }
        }
        Ok(None)
    }

    fn duplicate(&self, z: Complex<T>) -> bool {
        self.found.iter().any(|w| (w.location - z).norm() <= self.cluster)
    }
}

/// `|f(z)| / max_{|w−z| = ρ} |f(w)|` with `ρ = 10⁻²·max(1, |z|)`.
pub fn local_residual<T, F>(f: &F, z: Complex<T>) -> T
where
    T: Real,
    F: Fn(Complex<T>) -> Complex<T>,
{
    let rho = T::lit(1e-2) * z.norm().max(T::one());
    let n = 16;
    let scale = (0..n)
        .map(|k| {
            let w = z + Complex::from_polar(rho, T::TAU() * T::from_usize(k).unwrap() / T::from_usize(n).unwrap());
            f(w).norm()
        })
        .fold(T::zero(), |a, b| if b > a { b } else { a });
    let v = f(z).norm();
    if scale > T::zero() {
        v / scale
    } else {
        v
    }
}
