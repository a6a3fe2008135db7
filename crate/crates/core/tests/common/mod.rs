//! Independent reference evaluators used only by the test suites.
//!
//! * Airy functions from their Maclaurin series in 320-bit fixed-point
//!   integer arithmetic, seeded with 45-digit values of `Ai(0)`, `Ai′(0)`.
//! * Spherical `j_l` from its power series and `h_l^{(1)}` from the
//!   terminating closed form, both in plain `f64`.
//! * Bisection on a bracketing interval.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_complex::Complex64 as C64;

const BITS: u32 = 320;

/// 45 significant digits of `Ai(0)` and `−Ai′(0)`.
const AI0: &str = "355028053887817239260063186004183176397979174";
const MINUS_AIP0: &str = "258819403792806798405183560189203963479091138";

fn one() -> BigInt {
    BigInt::from(1) << BITS
}

fn decimal_fraction(digits: &str) -> BigInt {
    let num: BigInt = digits.parse().unwrap();
    (num << BITS) / BigInt::from(10).pow(digits.len() as u32)
}

fn from_f64(x: f64) -> BigInt {
    if x == 0.0 {
        return BigInt::from(0);
    }
    let bits = x.to_bits();
    let sign = if bits >> 63 == 1 { -1 } else { 1 };
    let exp = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    let (mant, e) = if exp == 0 {
        (frac, -1074)
    } else {
        (frac | (1u64 << 52), exp - 1075)
    };
    let m = BigInt::from(mant) * sign;
    let shift = e + BITS as i64;
    if shift >= 0 {
        m << shift as usize
    } else {
        m >> (-shift) as usize
    }
}

fn to_f64(x: &BigInt) -> f64 {
    // Keep 64 significant bits before the final rounding to f64.
    let bits = x.bits() as i64;
    let drop = (bits - 64).max(0);
    let top = x >> drop as usize;
    let v: f64 = top.to_string().parse().unwrap();
    v * 2f64.powi((drop - BITS as i64) as i32)
}

#[derive(Clone)]
struct Fx {
    re: BigInt,
    im: BigInt,
}

impl Fx {
    fn from_c(z: C64) -> Fx {
        Fx {
            re: from_f64(z.re),
            im: from_f64(z.im),
        }
    }
    fn real(r: BigInt) -> Fx {
        Fx {
            re: r,
            im: BigInt::from(0),
        }
    }
    fn mul(&self, o: &Fx) -> Fx {
        Fx {
            re: (&self.re * &o.re - &self.im * &o.im) >> BITS,
            im: (&self.re * &o.im + &self.im * &o.re) >> BITS,
        }
    }
    fn add(&self, o: &Fx) -> Fx {
        Fx {
            re: &self.re + &o.re,
            im: &self.im + &o.im,
        }
    }
    fn sub(&self, o: &Fx) -> Fx {
        Fx {
            re: &self.re - &o.re,
            im: &self.im - &o.im,
        }
    }
    fn div_int(&self, d: i64) -> Fx {
        Fx {
            re: &self.re / d,
            im: &self.im / d,
        }
    }
    fn negligible(&self) -> bool {
        let tiny = BigInt::from(1) << (BITS - 280);
        self.re.magnitude() < tiny.magnitude() && self.im.magnitude() < tiny.magnitude()
    }
    fn to_c(&self) -> C64 {
        C64::new(to_f64(&self.re), to_f64(&self.im))
    }
}

/// `(Ai(z), Ai′(z))` by the Maclaurin series `Ai = Ai(0) f + Ai′(0) g` in
/// high-precision fixed point. Intended for `|z| <= 8`.
pub fn airy_oracle(z: C64) -> (C64, C64) {
    assert!(z.norm() <= 8.0, "oracle range is |z| <= 8");
    let zf = Fx::from_c(z);
    let z3 = zf.mul(&zf).mul(&zf);
    // f = Σ t_k, t_k/t_{k−1} = z³/((3k−1)3k);  f′ = Σ t′_k, t′_k/t′_{k−1} = z³/((3k−3)(3k−1))
    // g = Σ u_k, u_k/u_{k−1} = z³/(3k(3k+1));  g′ = Σ u′_k, u′_k/u′_{k−1} = z³/((3k−2)3k)
    let mut t = Fx::real(one());
    let mut f = t.clone();
    let mut tp = zf.mul(&zf).div_int(2);
    let mut fp = tp.clone();
    let mut u = zf.clone();
    let mut g = u.clone();
    let mut up = Fx::real(one());
    let mut gp = up.clone();
    for k in 1i64.. {
        t = t.mul(&z3).div_int((3 * k - 1) * (3 * k));
        u = u.mul(&z3).div_int(3 * k * (3 * k + 1));
        up = up.mul(&z3).div_int((3 * k - 2) * (3 * k));
        f = f.add(&t);
        g = g.add(&u);
        gp = gp.add(&up);
        if k >= 2 {
            tp = tp.mul(&z3).div_int((3 * k - 3) * (3 * k - 1));
            fp = fp.add(&tp);
        }
        if k > 4 && t.negligible() && u.negligible() && up.negligible() && tp.negligible() {
            break;
        }
    }
    let c1 = Fx::real(decimal_fraction(AI0));
    let c2 = Fx::real(decimal_fraction(MINUS_AIP0));
    let ai = c1.mul(&f).sub(&c2.mul(&g));
    let aip = c1.mul(&fp).sub(&c2.mul(&gp));
    (ai.to_c(), aip.to_c())
}

/// Real `Ai(x)` from the oracle.
pub fn ai_real(x: f64) -> f64 {
    airy_oracle(C64::new(x, 0.0)).0.re
}

/// Real `Ai′(x)` from the oracle.
pub fn ai_prime_real(x: f64) -> f64 {
    airy_oracle(C64::new(x, 0.0)).1.re
}

/// Root of `f` in `[a, b]` by bisection; `f(a)` and `f(b)` must differ in sign.
pub fn bisect(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let mut fa = f(a);
    assert!(fa * f(b) < 0.0, "no sign change on [{a}, {b}]");
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if (fm < 0.0) == (fa < 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// `k`-th zero (`k >= 1`) of `Ai` (`prime = false`) or `Ai′`, as a positive
/// magnitude, by bracketing on a grid of step 0.05 and bisection.
pub fn airy_zero_oracle(k: usize, prime: bool) -> f64 {
    let f = |x: f64| if prime { ai_prime_real(-x) } else { ai_real(-x) };
    let mut found = 0;
    let mut x = 0.0;
    let mut fx = f(x);
    loop {
        let y = x + 0.05;
        let fy = f(y);
        if fx * fy < 0.0 {
            found += 1;
            if found == k {
                return bisect(f, x, y);
            }
        }
        x = y;
        fx = fy;
        assert!(x < 8.0, "zero {k} outside oracle range");
    }
}

/// `(j_l(z), j_l′(z))` from the power series
/// `j_l = z^l/(2l+1)!! Σ_k (−z²/2)^k / (k! (2l+3)(2l+5)…(2l+2k+1))`.
pub fn sph_j_series(l: usize, z: C64) -> (C64, C64) {
    let mut dfact = 1.0;
    for m in (1..=2 * l + 1).step_by(2) {
        dfact *= m as f64;
    }
    let zl = if l == 0 { C64::new(1.0, 0.0) } else { z.powu(l as u32) };
    let lead = zl / dfact;
    let w = -z * z * 0.5;
    let mut term = C64::new(1.0, 0.0);
    let mut s = term;
    // Derivative of z^{l+2k}: (l+2k) z^{l+2k−1}.
    let mut sd = term * l as f64;
    for k in 1..400 {
        term = term * w / (k as f64 * (2 * l + 2 * k + 1) as f64);
        s += term;
        sd += term * (l + 2 * k) as f64;
        if term.norm() < 1e-18 * s.norm().max(1e-300) && k > 4 {
            break;
        }
    }
    (lead * s, lead * sd / z)
}

/// `h_l^{(1)}(z)` from the terminating sum
/// `(−i)^{l+1} e^{iz}/z Σ_{k<=l} i^k (l+k)! / (k!(l−k)!(2z)^k)`.
pub fn sph_h1_closed(l: usize, z: C64) -> C64 {
    let i = C64::new(0.0, 1.0);
    let mut sum = C64::new(0.0, 0.0);
    let mut coef = 1.0; // (l+k)!/(k!(l−k)!)
    let mut ik = C64::new(1.0, 0.0);
    let mut zk = C64::new(1.0, 0.0);
    for k in 0..=l {
        if k > 0 {
            coef *= ((l + k) * (l - k + 1)) as f64 / k as f64;
            ik *= i;
            zk *= z * 2.0;
        }
        sum += ik * coef / zk;
    }
    (-i).powu(l as u32 + 1) * (i * z).exp() / z * sum
}

/// Relative distance `|a − b| / max(|b|, floor)`.
pub fn rel(a: C64, b: C64, floor: f64) -> f64 {
    (a - b).norm() / b.norm().max(floor)
}
