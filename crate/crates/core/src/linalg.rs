//! Complex linear algebra for the model operators: banded storage, banded LU,
//! definiteness tests for banded Hermitian pencils, dense Hessenberg–QR
//! eigenvalues and shift-invert Arnoldi.

use num_complex::Complex;

use crate::{is_finite_c, Error, Real, Result};

fn zero<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::zero())
}

/// Square banded matrix with `kl` sub- and `ku` super-diagonals, stored
/// row-wise: row `i` holds columns `i − kl ..= i + ku`.
#[derive(Debug, Clone, PartialEq)]
pub struct Banded<T> {
    n: usize,
    kl: usize,
    ku: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> Banded<T> {
    pub fn zeros(n: usize, kl: usize, ku: usize) -> Self {
        Banded {
            n,
            kl,
            ku,
            data: vec![zero(); n * (kl + ku + 1)],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn lower_bandwidth(&self) -> usize {
        self.kl
    }

    pub fn upper_bandwidth(&self) -> usize {
        self.ku
    }

    #[inline]
    fn in_band(&self, i: usize, j: usize) -> bool {
        i < self.n && j < self.n && j + self.kl >= i && j <= i + self.ku
    }

    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        i * (self.kl + self.ku + 1) + (j + self.kl - i)
    }

    /// Entry `(i, j)`; zero outside the band.
    pub fn get(&self, i: usize, j: usize) -> Complex<T> {
        if self.in_band(i, j) {
            self.data[self.idx(i, j)]
        } else {
            zero()
        }
    }

    /// Sets entry `(i, j)`.
    ///
    /// # Panics
    /// When `(i, j)` lies outside the band.
    pub fn set(&mut self, i: usize, j: usize, v: Complex<T>) {
        assert!(self.in_band(i, j), "({i}, {j}) outside the band");
        let k = self.idx(i, j);
        self.data[k] = v;
    }

    /// Adds `v` to entry `(i, j)`.
    pub fn add(&mut self, i: usize, j: usize, v: Complex<T>) {
        assert!(self.in_band(i, j), "({i}, {j}) outside the band");
        let k = self.idx(i, j);
        self.data[k] = self.data[k] + v;
    }

    /// Column range stored for row `i`.
    pub fn row_range(&self, i: usize) -> std::ops::Range<usize> {
        i.saturating_sub(self.kl)..(i + self.ku + 1).min(self.n)
    }

    pub fn matvec(&self, x: &[Complex<T>]) -> Vec<Complex<T>> {
        (0..self.n)
            .map(|i| self.row_range(i).fold(zero(), |acc, j| acc + self.get(i, j) * x[j]))
            .collect()
    }

    /// `Aᴴ x`.
    pub fn adjoint_matvec(&self, x: &[Complex<T>]) -> Vec<Complex<T>> {
        let mut y = vec![zero(); self.n];
        for i in 0..self.n {
            for j in self.row_range(i) {
                y[j] = y[j] + self.get(i, j).conj() * x[i];
            }
        }
        y
    }

    /// Adds `v` to every diagonal entry.
    pub fn shift_diagonal(&mut self, v: Complex<T>) {
        for i in 0..self.n {
            self.add(i, i, v);
        }
    }

    /// `Aᴴ diag(w) A`, banded with half-bandwidth `kl + ku`.
    pub fn weighted_normal(&self, w: &[T]) -> Banded<T> {
        let p = self.kl + self.ku;
        let mut out = Banded::zeros(self.n, p, p);
        for k in 0..self.n {
            let cols = self.row_range(k);
            for i in cols.clone() {
                let aki = self.get(k, i).conj() * w[k];
                for j in cols.clone() {
                    out.add(i, j, aki * self.get(k, j));
                }
            }
        }
        out
    }

    /// Row-major dense copy.
    pub fn to_dense(&self) -> Vec<Vec<Complex<T>>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j)).collect())
            .collect()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| is_finite_c(*z))
    }
}

/// LU factorisation `P A = L U` of a banded matrix with partial pivoting.
#[derive(Debug, Clone)]
pub struct BandedLu<T> {
    n: usize,
    kl: usize,
    width: usize,
    data: Vec<Complex<T>>,
    piv: Vec<usize>,
}

impl<T: Real> BandedLu<T> {
    pub fn factor(a: &Banded<T>) -> Result<Self> {
        let (n, kl, ku) = (a.n, a.kl, a.ku);
        // Row i stores columns i − kl ..= i + kl + ku to make room for fill.
        let width = 2 * kl + ku + 1;
        let mut lu = BandedLu {
            n,
            kl,
            width,
            data: vec![zero(); n * width],
            piv: vec![0; n],
        };
        for i in 0..n {
            for j in a.row_range(i) {
                let k = lu.idx(i, j);
                lu.data[k] = a.get(i, j);
            }
        }
        let scale = a
            .data
            .iter()
            .fold(T::zero(), |m, z| if z.norm() > m { z.norm() } else { m });
        for k in 0..n {
            let last_row = (k + kl).min(n - 1);
            let mut p = k;
            let mut best = lu.at(k, k).norm();
            for i in k + 1..=last_row {
                let v = lu.at(i, k).norm();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if best <= T::epsilon() * T::epsilon() * scale || best == T::zero() {
                return Err(Error::Singular(k));
            }
            lu.piv[k] = p;
            let last_col = (k + kl + ku).min(n - 1);
            if p != k {
                for j in k..=last_col {
                    let (a_idx, b_idx) = (lu.idx(k, j), lu.idx(p, j));
                    lu.data.swap(a_idx, b_idx);
                }
            }
            let pivot = lu.at(k, k);
            for i in k + 1..=last_row {
                let l = lu.at(i, k) / pivot;
                let li = lu.idx(i, k);
                lu.data[li] = l;
                if l.re == T::zero() && l.im == T::zero() {
                    continue;
                }
                for j in k + 1..=last_col {
                    let u = lu.at(k, j);
                    let ij = lu.idx(i, j);
                    lu.data[ij] = lu.data[ij] - l * u;
                }
            }
        }
        Ok(lu)
    }

    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        i * self.width + (j + self.kl - i)
    }

    #[inline]
    fn at(&self, i: usize, j: usize) -> Complex<T> {
        self.data[self.idx(i, j)]
    }

    fn upper_end(&self, i: usize) -> usize {
        (i + self.width - self.kl).min(self.n)
    }

    /// Solves `A x = b`.
    pub fn solve(&self, b: &[Complex<T>]) -> Vec<Complex<T>> {
        let n = self.n;
        let mut x = b.to_vec();
        for k in 0..n {
            x.swap(k, self.piv[k]);
            for i in k + 1..=(k + self.kl).min(n - 1) {
                x[i] = x[i] - self.at(i, k) * x[k];
            }
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for j in i + 1..self.upper_end(i) {
                s = s - self.at(i, j) * x[j];
            }
            x[i] = s / self.at(i, i);
        }
        x
    }

    /// Solves `Aᴴ x = b`.
    pub fn solve_adjoint(&self, b: &[Complex<T>]) -> Vec<Complex<T>> {
        let n = self.n;
        let mut y = b.to_vec();
        // Uᴴ z = b.
        for i in 0..n {
            let s = y[i] / self.at(i, i).conj();
            y[i] = s;
            for j in i + 1..self.upper_end(i) {
                y[j] = y[j] - self.at(i, j).conj() * s;
            }
        }
        // Undo the elimination steps in reverse.
        for k in (0..n).rev() {
            for i in k + 1..=(k + self.kl).min(n - 1) {
                y[k] = y[k] - self.at(i, k).conj() * y[i];
            }
            y.swap(k, self.piv[k]);
        }
        y
    }
}

/// `true` when the Hermitian banded `h − λ·diag(w)` is positive definite.
///
/// Only the lower band of `h` is read.
pub fn is_positive_definite_shifted<T: Real>(h: &Banded<T>, w: &[T], lambda: T) -> bool {
    let n = h.n;
    let p = h.kl;
    // l[i][k] for k in i−p..=i, stored as i*(p+1) + (k + p − i).
    let mut l = vec![zero::<T>(); n * (p + 1)];
    let at = |i: usize, k: usize| i * (p + 1) + (k + p - i);
    for j in 0..n {
        let lo = j.saturating_sub(p);
        let mut d = h.get(j, j).re - lambda * w[j];
        for k in lo..j {
            d = d - l[at(j, k)].norm_sqr();
        }
        if !(d > T::zero()) {
            return false;
        }
        let djj = d.sqrt();
        l[at(j, j)] = Complex::new(djj, T::zero());
        for i in j + 1..=(j + p).min(n - 1) {
            let mut s = h.get(i, j);
            for k in i.saturating_sub(p).max(lo)..j {
                s = s - l[at(i, k)] * l[at(j, k)].conj();
            }
            l[at(i, j)] = s / djj;
        }
    }
    true
}

/// Smallest eigenvalue of the Hermitian pencil `(h, diag(w))`, `w > 0`, by
/// bisection on positive definiteness of `h − λ diag(w)`.
///
/// The result is within `rel_tol · max(|λ|, spread)` of the true value, where
/// `spread` is the initial bracket width.
pub fn pencil_min_eig<T: Real>(h: &Banded<T>, w: &[T], rel_tol: T) -> Result<T> {
    let n = h.n;
    if n == 0 || w.len() != n || w.iter().any(|v| !(*v > T::zero())) {
        return Err(Error::InvalidInput("pencil weights must be positive".into()));
    }
    if !h.is_finite() {
        return Err(Error::NonFinite {
            context: "pencil matrix",
        });
    }
    let mut lo = T::infinity();
    let mut hi = T::infinity();
    for i in 0..n {
        let radius: T = h.row_range(i).filter(|&j| j != i).map(|j| h.get(i, j).norm()).sum();
        let d = h.get(i, i).re;
        lo = lo.min((d - radius) / w[i]);
        hi = hi.min(d / w[i]);
    }
    let spread = (hi - lo).abs();
    for _ in 0..200 {
        let tol = rel_tol * lo.abs().max(hi.abs()).max(T::min_positive_value());
        if hi - lo <= tol || hi - lo <= spread * T::epsilon() {
            break;
        }
        let mid = lo + (hi - lo) * T::lit(0.5);
        if is_positive_definite_shifted(h, w, mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo + (hi - lo) * T::lit(0.5))
}

/// Solves the dense system `a x = b` (row-major `a`) by Gaussian elimination
/// with partial pivoting.
pub fn solve_dense<T: Real>(mut a: Vec<Vec<Complex<T>>>, mut b: Vec<Complex<T>>) -> Result<Vec<Complex<T>>> {
    let n = b.len();
    for k in 0..n {
        let p = (k..n)
            .max_by(|&i, &j| a[i][k].norm().partial_cmp(&a[j][k].norm()).unwrap())
            .unwrap();
        if a[p][k].norm() == T::zero() {
            return Err(Error::Singular(k));
        }
        a.swap(k, p);
        b.swap(k, p);
        for i in k + 1..n {
            let l = a[i][k] / a[k][k];
            for j in k..n {
                let v = a[k][j];
                a[i][j] = a[i][j] - l * v;
            }
            let v = b[k];
            b[i] = b[i] - l * v;
        }
    }
    for i in (0..n).rev() {
        let mut s = b[i];
        for j in i + 1..n {
            s = s - a[i][j] * b[j];
        }
        b[i] = s / a[i][i];
    }
    Ok(b)
}

/// Eigenvalues of a dense complex matrix (row-major), via Householder
/// reduction to Hessenberg form and single-shift QR with Wilkinson shifts.
///
/// Returned in the order they deflate; callers sort as needed.
pub fn eigenvalues_dense<T: Real>(a: &[Vec<Complex<T>>]) -> Result<Vec<Complex<T>>> {
    let n = a.len();
    let mut h: Vec<Vec<Complex<T>>> = a.to_vec();
    if h.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidInput("matrix is not square".into()));
    }
    if h.iter().flatten().any(|z| !is_finite_c(*z)) {
        return Err(Error::NonFinite {
            context: "eigenvalue input",
        });
    }
    hessenberg(&mut h);
    hessenberg_qr(&mut h)
}

fn hessenberg<T: Real>(a: &mut [Vec<Complex<T>>]) {
    let n = a.len();
    for k in 0..n.saturating_sub(2) {
        let norm = (k + 1..n).map(|i| a[i][k].norm_sqr()).sum::<T>().sqrt();
        if norm == T::zero() {
            continue;
        }
        let x0 = a[k + 1][k];
        let phase = if x0.norm() == T::zero() {
            Complex::new(T::one(), T::zero())
        } else {
            x0 / x0.norm()
        };
        let alpha = -(phase * norm);
        let mut v: Vec<Complex<T>> = (k + 1..n).map(|i| a[i][k]).collect();
        v[0] = v[0] - alpha;
        let vn = v.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
        if vn == T::zero() {
            continue;
        }
        for z in v.iter_mut() {
            *z = *z / vn;
        }
        // A ← (I − 2vvᴴ) A
        for j in 0..n {
            let s = v
                .iter()
                .enumerate()
                .fold(zero::<T>(), |acc, (r, vr)| acc + vr.conj() * a[k + 1 + r][j]);
            let s2 = s * T::lit(2.0);
            for (r, vr) in v.iter().enumerate() {
                a[k + 1 + r][j] = a[k + 1 + r][j] - *vr * s2;
            }
        }
        // A ← A (I − 2vvᴴ)
        for row in a.iter_mut() {
            let s = v
                .iter()
                .enumerate()
                .fold(zero::<T>(), |acc, (r, vr)| acc + row[k + 1 + r] * *vr);
            let s2 = s * T::lit(2.0);
            for (r, vr) in v.iter().enumerate() {
                row[k + 1 + r] = row[k + 1 + r] - s2 * vr.conj();
            }
        }
        for i in k + 2..n {
            a[i][k] = zero();
        }
    }
}

fn hessenberg_qr<T: Real>(h: &mut [Vec<Complex<T>>]) -> Result<Vec<Complex<T>>> {
    let n = h.len();
    let mut eig = Vec::with_capacity(n);
    if n == 0 {
        return Ok(eig);
    }
    let eps = T::epsilon();
    let mut hi = n - 1;
    let mut iter = 0usize;
    let mut total = 0usize;
    loop {
        if hi == 0 {
            eig.push(h[0][0]);
            break;
        }
        // Locate the active block l..=hi.
        let mut l = hi;
        while l > 0 {
            let s = h[l][l].norm() + h[l - 1][l - 1].norm();
            let s = if s == T::zero() { T::one() } else { s };
            if h[l][l - 1].norm() <= eps * s {
                h[l][l - 1] = zero();
                break;
            }
            l -= 1;
        }
        if l == hi {
            eig.push(h[hi][hi]);
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        total += 1;
        if total > 60 * n {
            return Err(Error::NonConvergence("Hessenberg QR iteration limit".into()));
        }
        let mu = if iter % 11 == 10 {
            // Exceptional shift to break cycles.
            h[hi][hi] + Complex::new(h[hi][hi - 1].norm() * T::lit(0.75), h[hi][hi - 1].norm() * T::lit(0.43))
        } else {
            wilkinson(h[hi - 1][hi - 1], h[hi - 1][hi], h[hi][hi - 1], h[hi][hi])
        };
        for k in l..=hi {
            h[k][k] = h[k][k] - mu;
        }
        let mut rots = Vec::with_capacity(hi - l);
        for k in l..hi {
            let (a, b) = (h[k][k], h[k + 1][k]);
            let r = a.norm().hypot(b.norm());
            let (c, s) = if r == T::zero() {
                (Complex::new(T::one(), T::zero()), zero())
            } else {
                (a / r, b / r)
            };
            for j in k..=hi {
                let (x, y) = (h[k][j], h[k + 1][j]);
                h[k][j] = c.conj() * x + s.conj() * y;
                h[k + 1][j] = -s * x + c * y;
            }
            rots.push((c, s));
        }
        for (idx, (c, s)) in rots.into_iter().enumerate() {
            let k = l + idx;
            for row in h.iter_mut().take((k + 2).min(hi) + 1).skip(l) {
                let (x, y) = (row[k], row[k + 1]);
                row[k] = x * c + y * s;
                row[k + 1] = -(x * s.conj()) + y * c.conj();
            }
        }
        for k in l..=hi {
            h[k][k] = h[k][k] + mu;
        }
    }
    Ok(eig)
}

fn wilkinson<T: Real>(a: Complex<T>, b: Complex<T>, c: Complex<T>, d: Complex<T>) -> Complex<T> {
    let half = T::lit(0.5);
    let tr = (a + d) * half;
    let disc = ((a - d) * half * ((a - d) * half) + b * c).sqrt();
    let (l1, l2) = (tr + disc, tr - disc);
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// The `count` eigenvalues of the banded `a` nearest to `shift`, by
/// shift-invert Arnoldi, ordered by distance to `shift`.
///
/// The Krylov dimension grows until the selected Ritz values agree to
/// `rel_tol` between successive sizes.
pub fn eigs_near<T: Real>(a: &Banded<T>, shift: Complex<T>, count: usize, rel_tol: T) -> Result<Vec<Complex<T>>> {
    let n = a.n;
    if count == 0 || count > n {
        return Err(Error::InvalidInput(format!(
            "cannot extract {count} of {n} eigenvalues"
        )));
    }
    let mut shifted = a.clone();
    shifted.shift_diagonal(-shift);
    let lu = BandedLu::factor(&shifted)?;

    let m_max = n.min(300);
    let first_check = (4 * count + 20).min(m_max);
    // Deterministic, non-degenerate start vector.
    let mut v0: Vec<Complex<T>> = (0..n)
        .map(|i| {
            let x = T::from_usize(i + 1).unwrap();
            Complex::new(
                T::one() + (x * T::lit(0.618_033_988_749_895)).fract(),
                (x * T::lit(0.414_213_562_373_095)).fract(),
            )
        })
        .collect();
    normalize(&mut v0);
    let mut basis = vec![v0];
    let mut hm = vec![vec![zero::<T>(); m_max]; m_max + 1];
    let mut previous: Option<Vec<Complex<T>>> = None;
    for j in 0..m_max {
        let mut w = lu.solve(&basis[j]);
        for _pass in 0..2 {
            for (i, q) in basis.iter().enumerate() {
                let c = dot(q, &w);
                hm[i][j] = hm[i][j] + c;
                for (wk, qk) in w.iter_mut().zip(q) {
                    *wk = *wk - c * *qk;
                }
            }
        }
        let beta = norm(&w);
        hm[j + 1][j] = Complex::new(beta, T::zero());
        let m = j + 1;
        let exhausted = beta <= T::epsilon() * T::lit(1e3) * hm[j][j].norm().max(T::one());
        if m >= first_check && (m % 10 == 0 || exhausted || m == m_max) {
            let small: Vec<Vec<Complex<T>>> = (0..m).map(|r| hm[r][..m].to_vec()).collect();
            let mut theta = eigenvalues_dense(&small)?;
            theta.sort_by(|x, y| y.norm().partial_cmp(&x.norm()).unwrap());
            let lambdas: Vec<Complex<T>> = theta.iter().take(count).map(|t| shift + t.inv()).collect();
            if lambdas.len() == count {
                if let Some(prev) = &previous {
                    let settled = lambdas
                        .iter()
                        .zip(prev)
                        .all(|(x, y)| (*x - *y).norm() <= rel_tol * x.norm().max(T::one()));
                    if settled || exhausted {
                        return Ok(lambdas);
                    }
                }
                if exhausted {
                    return Ok(lambdas);
                }
                previous = Some(lambdas);
            }
        }
        if exhausted {
            break;
        }
        for x in w.iter_mut() {
            *x = *x / beta;
        }
        basis.push(w);
    }
    Err(Error::NonConvergence(format!(
        "Arnoldi: Ritz values not settled at Krylov dimension {m_max}"
    )))
}

fn dot<T: Real>(a: &[Complex<T>], b: &[Complex<T>]) -> Complex<T> {
    a.iter().zip(b).fold(zero(), |acc, (x, y)| acc + x.conj() * *y)
}

fn norm<T: Real>(a: &[Complex<T>]) -> T {
    a.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
}

fn normalize<T: Real>(a: &mut [Complex<T>]) {
    let s = norm(a);
    for z in a.iter_mut() {
        *z = *z / s;
    }
}

/// Gauss–Legendre nodes and weights on `[−1, 1]`, from Newton iteration on
/// the Legendre recurrence.
pub fn gauss_legendre<T: Real>(n: usize) -> (Vec<T>, Vec<T>) {
    let mut nodes = vec![T::zero(); n];
    let mut weights = vec![T::zero(); n];
    let nf = T::from_usize(n).unwrap();
    for i in 0..n.div_ceil(2) {
        let mut x = (T::PI() * (T::from_usize(i).unwrap() + T::lit(0.75)) / (nf + T::lit(0.5))).cos();
        let mut dp = T::one();
        for _ in 0..100 {
            let (mut p0, mut p1) = (T::one(), x);
            for k in 2..=n {
                let kf = T::from_usize(k).unwrap();
                let p2 = ((T::lit(2.0) * kf - T::one()) * x * p1 - (kf - T::one()) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 1 { x } else { p1 };
            let pm = if n == 1 { T::one() } else { p0 };
            dp = nf * (x * pn - pm) / (x * x - T::one());
            let dx = pn / dp;
            x = x - dx;
            if dx.abs() <= T::epsilon() {
                break;
            }
        }
        let w = T::lit(2.0) / ((T::one() - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::C64;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn tridiag(n: usize) -> Banded<f64> {
        // 1-D Dirichlet Laplacian scaled so eigenvalues are 2 − 2cos(kπ/(n+1)).
        let mut a = Banded::zeros(n, 1, 1);
        for i in 0..n {
            a.set(i, i, c(2.0, 0.0));
            if i + 1 < n {
                a.set(i, i + 1, c(-1.0, 0.0));
                a.set(i + 1, i, c(-1.0, 0.0));
            }
        }
        a
    }

    #[test]
    fn banded_lu_solves_and_adjoint_solves() {
        let n = 30;
        let mut a = Banded::zeros(n, 2, 1);
        for i in 0..n {
            for j in a.row_range(i) {
                let v = c(((i * 7 + j * 3) % 5) as f64 - 2.0, ((i + 2 * j) % 3) as f64 - 1.0);
                a.set(i, j, v);
            }
            a.add(i, i, c(0.1, 0.0));
        }
        let x: Vec<C64> = (0..n).map(|k| c(k as f64, 1.0 - k as f64 * 0.5)).collect();
        let b = a.matvec(&x);
        let lu = BandedLu::factor(&a).unwrap();
        let y = lu.solve(&b);
        let bh = a.adjoint_matvec(&x);
        let yh = lu.solve_adjoint(&bh);
        for k in 0..n {
            assert!((y[k] - x[k]).norm() < 1e-9 * (1.0 + x[k].norm()), "solve {k}");
            assert!((yh[k] - x[k]).norm() < 1e-9 * (1.0 + x[k].norm()), "adjoint {k}");
        }
    }

    #[test]
    fn singular_band_is_reported() {
        let a = Banded::<f64>::zeros(4, 1, 1);
        assert!(matches!(BandedLu::factor(&a), Err(Error::Singular(0))));
    }

    #[test]
    fn pencil_bisection_matches_closed_form() {
        let n = 50;
        let a = tridiag(n);
        let w = vec![1.0; n];
        let lam = pencil_min_eig(&a, &w, 1e-14).unwrap();
        let exact = 2.0 - 2.0 * (std::f64::consts::PI / (n as f64 + 1.0)).cos();
        assert!((lam - exact).abs() < 1e-13, "{lam} vs {exact}");
        let w2 = vec![2.0; n];
        let lam2 = pencil_min_eig(&a, &w2, 1e-14).unwrap();
        assert!((lam2 - exact / 2.0).abs() < 1e-13);
    }

    #[test]
    fn dense_eigenvalues_of_known_matrices() {
        let n = 20;
        let a = tridiag(n).to_dense();
        let mut ev: Vec<f64> = eigenvalues_dense(&a).unwrap().iter().map(|z| z.re).collect();
        ev.sort_by(|x, y| x.partial_cmp(y).unwrap());
        for (k, v) in ev.iter().enumerate() {
            let exact = 2.0 - 2.0 * ((k + 1) as f64 * std::f64::consts::PI / (n as f64 + 1.0)).cos();
            assert!((v - exact).abs() < 1e-12);
        }
        // Upper triangular: eigenvalues are the diagonal.
        let t = vec![
            vec![c(1.0, 1.0), c(2.0, 0.0), c(0.0, 3.0)],
            vec![c(0.0, 0.0), c(-1.0, 0.5), c(1.0, 1.0)],
            vec![c(0.0, 0.0), c(0.0, 0.0), c(4.0, -2.0)],
        ];
        let ev = eigenvalues_dense(&t).unwrap();
        for d in [c(1.0, 1.0), c(-1.0, 0.5), c(4.0, -2.0)] {
            assert!(ev.iter().any(|z| (*z - d).norm() < 1e-12));
        }
        // Rotation: ±i.
        let r = vec![vec![c(0.0, 0.0), c(-1.0, 0.0)], vec![c(1.0, 0.0), c(0.0, 0.0)]];
        let ev = eigenvalues_dense(&r).unwrap();
        assert!(ev.iter().any(|z| (*z - c(0.0, 1.0)).norm() < 1e-12));
        assert!(ev.iter().any(|z| (*z - c(0.0, -1.0)).norm() < 1e-12));
    }

    #[test]
    fn arnoldi_finds_lowest_eigenvalues() {
        let n = 400;
        let a = tridiag(n);
        let ev = eigs_near(&a, c(0.0, 0.0), 3, 1e-12).unwrap();
        for (k, v) in ev.iter().enumerate() {
            let exact = 2.0 - 2.0 * ((k + 1) as f64 * std::f64::consts::PI / (n as f64 + 1.0)).cos();
            assert!((v.re - exact).abs() < 1e-10 * exact, "{k}: {v} vs {exact}");
        }
    }

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let (x, w) = gauss_legendre::<f64>(8);
        let sum: f64 = w.iter().sum();
        assert!((sum - 2.0).abs() < 1e-14);
        let i14: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(14)).sum();
        assert!((i14 - 2.0 / 15.0).abs() < 1e-14);
        let (x, w) = gauss_legendre::<f64>(1);
        assert_eq!((x[0], w[0]), (0.0, 2.0));
    }

    #[test]
    fn dense_solve() {
        let a = vec![vec![c(0.0, 1.0), c(1.0, 0.0)], vec![c(2.0, 0.0), c(0.0, -1.0)]];
        let x = [c(1.0, 2.0), c(-3.0, 0.5)];
        let b = vec![a[0][0] * x[0] + a[0][1] * x[1], a[1][0] * x[0] + a[1][1] * x[1]];
        let y = solve_dense(a, b).unwrap();
        assert!((y[0] - x[0]).norm() < 1e-14 && (y[1] - x[1]).norm() < 1e-14);
    }
}
