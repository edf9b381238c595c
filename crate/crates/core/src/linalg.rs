//! Hermitian positive definite storage and direct Cholesky solvers.
//!
//! The per-mode thickness systems couple only neighbouring nodes, so they are
//! stored in lower band form and factored with a band Cholesky. Band storage
//! and factorization are generic over the real type so that the same code runs
//! in `f64` and in double-double arithmetic ([`DD`]). A plain dense variant is
//! kept for small systems and cross-checks.

use std::fmt::Debug;

use num_complex::{Complex, Complex64};
use num_traits::{Float, NumAssign, NumCast};

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Double-double real (about 32 significant digits).
pub type DD = twofloat::TwoFloat;

/// Real scalar usable in the band solver.
pub trait Real: Float + NumAssign + Debug + Send + Sync + 'static {
    fn from_f64(x: f64) -> Self {
        <Self as NumCast>::from(x).expect("every f64 is representable")
    }
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl<T: Float + NumAssign + Debug + Send + Sync + 'static> Real for T {}

/// `a / b` with one Newton correction. The double-double division of the
/// `twofloat` crate drops the low word of the quotient; its products and sums
/// are exact enough to repair it.
#[inline]
pub fn div<R: Real>(a: R, b: R) -> R {
    let q = a / b;
    q + (a - q * b) / b
}

/// `sqrt(x)` with one Newton correction (see [`div`]).
#[inline]
pub fn sqrt<R: Real>(x: R) -> R {
    let s = x.sqrt();
    if s == R::zero() {
        return s;
    }
    s + div(x - s * s, s + s)
}

#[inline]
fn cdiv<R: Real>(z: Complex<R>, b: R) -> Complex<R> {
    Complex::new(div(z.re, b), div(z.im, b))
}

pub fn lift<R: Real>(z: C64) -> Complex<R> {
    Complex::new(R::from_f64(z.re), R::from_f64(z.im))
}

pub fn round<R: Real>(z: Complex<R>) -> C64 {
    C64::new(z.re.to_f64_lossy(), z.im.to_f64_lossy())
}

/// Lower band storage of a Hermitian matrix: `data[j * (kd + 1) + d]` holds
/// `A[j + d][j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianBand<R: Real = f64> {
    n: usize,
    kd: usize,
    data: Vec<Complex<R>>,
}

impl<R: Real> HermitianBand<R> {
    pub fn zeros(n: usize, kd: usize) -> Self {
        HermitianBand {
            n,
            kd,
            data: vec![Complex::new(R::zero(), R::zero()); n * (kd + 1)],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn bandwidth(&self) -> usize {
        self.kd
    }

    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        debug_assert!(i >= j && i - j <= self.kd);
        j * (self.kd + 1) + (i - j)
    }

    /// Entry `A[i][j]` for any `i, j`.
    pub fn get(&self, i: usize, j: usize) -> Complex<R> {
        let (r, c, conj) = if i >= j { (i, j, false) } else { (j, i, true) };
        if r - c > self.kd {
            return Complex::new(R::zero(), R::zero());
        }
        let v = self.data[self.idx(r, c)];
        if conj {
            v.conj()
        } else {
            v
        }
    }

    /// Adds `v` to `A[i][j]` for `i >= j`. Entries above the diagonal are
    /// implied by symmetry and must not be passed.
    pub fn add_lower(&mut self, i: usize, j: usize, v: Complex<R>) {
        assert!(i >= j, "upper entry ({i}, {j}) passed to lower band storage");
        assert!(i - j <= self.kd, "entry ({i}, {j}) outside bandwidth {}", self.kd);
        let k = self.idx(i, j);
        self.data[k] += v;
    }

    pub fn diagonal(&self) -> Vec<Complex<R>> {
        (0..self.n).map(|j| self.data[self.idx(j, j)]).collect()
    }

    pub fn matvec(&self, x: &[Complex<R>]) -> Vec<Complex<R>> {
        assert_eq!(x.len(), self.n);
        let mut y = vec![Complex::new(R::zero(), R::zero()); self.n];
        for j in 0..self.n {
            let col = &self.data[j * (self.kd + 1)..(j + 1) * (self.kd + 1)];
            y[j] += col[0] * x[j];
            for d in 1..=self.kd {
                let i = j + d;
                if i >= self.n {
                    break;
                }
                y[i] += col[d] * x[j];
                y[j] += col[d].conj() * x[i];
            }
        }
        y
    }

    /// Row-sum norm.
    pub fn norm_inf(&self) -> f64 {
        (0..self.n)
            .map(|i| {
                let lo = i.saturating_sub(self.kd);
                let hi = (i + self.kd).min(self.n - 1);
                (lo..=hi).map(|j| round(self.get(i, j)).norm()).sum::<f64>()
            })
            .fold(0.0, f64::max)
    }

    /// Largest imaginary part on the diagonal (zero for a Hermitian matrix).
    pub fn diagonal_imag_max(&self) -> f64 {
        self.diagonal()
            .iter()
            .map(|d| d.im.to_f64_lossy().abs())
            .fold(0.0, f64::max)
    }

    /// Entrywise rounding to `f64`.
    pub fn rounded(&self) -> HermitianBand<f64> {
        HermitianBand {
            n: self.n,
            kd: self.kd,
            data: self.data.iter().map(|z| round(*z)).collect(),
        }
    }

    pub fn to_dense(&self) -> DenseHermitian {
        let mut a = DenseHermitian::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                a.set(i, j, round(self.get(i, j)));
            }
        }
        a
    }

    /// `D A D` for a real diagonal `D`.
    fn scaled(&self, d: &[R]) -> HermitianBand<R> {
        let mut out = self.clone();
        for j in 0..self.n {
            for k in 0..=self.kd {
                let i = j + k;
                if i >= self.n {
                    break;
                }
                let idx = self.idx(i, j);
                out.data[idx] = out.data[idx] * (d[i] * d[j]);
            }
        }
        out
    }
}

/// Band Cholesky factor `A = L L^H`.
#[derive(Debug, Clone)]
pub struct BandCholesky<R: Real = f64> {
    n: usize,
    kd: usize,
    l: Vec<Complex<R>>,
}

impl<R: Real> BandCholesky<R> {
    pub fn factor(a: &HermitianBand<R>) -> Result<Self> {
        let (n, kd) = (a.n, a.kd);
        let w = kd + 1;
        let mut l = a.data.clone();
        for j in 0..n {
            let lo = j.saturating_sub(kd);
            let mut d = l[j * w].re;
            for k in lo..j {
                d -= l[k * w + (j - k)].norm_sqr();
            }
            if !(d > R::zero() && d.is_finite()) {
                return Err(Error::NotPositiveDefinite { pivot: j });
            }
            let djj = sqrt(d);
            l[j * w] = Complex::new(djj, R::zero());
            for i in (j + 1)..(j + w).min(n) {
                let mut s = l[j * w + (i - j)];
                let lo_i = i.saturating_sub(kd);
                for k in lo_i.max(lo)..j {
                    s -= l[k * w + (i - k)] * l[k * w + (j - k)].conj();
                }
                l[j * w + (i - j)] = cdiv(s, djj);
            }
        }
        Ok(BandCholesky { n, kd, l })
    }

    pub fn solve(&self, b: &[Complex<R>]) -> Vec<Complex<R>> {
        let (n, kd, w) = (self.n, self.kd, self.kd + 1);
        let mut y = b.to_vec();
        // L y = b
        for j in 0..n {
            y[j] = cdiv(y[j], self.l[j * w].re);
            let yj = y[j];
            for i in (j + 1)..(j + w).min(n) {
                y[i] -= self.l[j * w + (i - j)] * yj;
            }
        }
        // L^H x = y
        for j in (0..n).rev() {
            let mut s = y[j];
            for i in (j + 1)..(j + kd + 1).min(n) {
                s -= self.l[j * w + (i - j)].conj() * y[i];
            }
            y[j] = cdiv(s, self.l[j * w].re);
        }
        y
    }
}

/// Dense Hermitian matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseHermitian {
    n: usize,
    data: Vec<C64>,
}

impl DenseHermitian {
    pub fn zeros(n: usize) -> Self {
        DenseHermitian {
            n,
            data: vec![C64::new(0.0, 0.0); n * n],
        }
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Self {
        let n = rows.len();
        let mut a = Self::zeros(n);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), n);
            for (j, v) in r.iter().enumerate() {
                a.set(i, j, *v);
            }
        }
        a
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        self.data[i * self.n + j] = v;
    }

    pub fn add(&mut self, i: usize, j: usize, v: C64) {
        self.data[i * self.n + j] += v;
    }

    pub fn matvec(&self, x: &[C64]) -> Vec<C64> {
        (0..self.n)
            .map(|i| {
                self.data[i * self.n..(i + 1) * self.n]
                    .iter()
                    .zip(x)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    pub fn hermitian_defect(&self) -> f64 {
        let mut m = 0.0f64;
        for i in 0..self.n {
            for j in 0..=i {
                m = m.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        m
    }
}

/// Dense Cholesky factor `A = L L^H`, lower triangle row-major.
#[derive(Debug, Clone)]
pub struct DenseCholesky {
    n: usize,
    l: Vec<C64>,
}

impl DenseCholesky {
    pub fn factor(a: &DenseHermitian) -> Result<Self> {
        let n = a.n;
        let mut l = vec![C64::new(0.0, 0.0); n * n];
        for j in 0..n {
            let mut d = a.get(j, j).re;
            for k in 0..j {
                d -= l[j * n + k].norm_sqr();
            }
            if !(d > 0.0 && d.is_finite()) {
                return Err(Error::NotPositiveDefinite { pivot: j });
            }
            let djj = d.sqrt();
            l[j * n + j] = C64::new(djj, 0.0);
            for i in (j + 1)..n {
                let mut s = a.get(i, j);
                for k in 0..j {
                    s -= l[i * n + k] * l[j * n + k].conj();
                }
                l[i * n + j] = s / djj;
            }
        }
        Ok(DenseCholesky { n, l })
    }

    pub fn solve(&self, b: &[C64]) -> Vec<C64> {
        let n = self.n;
        let mut y = b.to_vec();
        for i in 0..n {
            let mut s = y[i];
            for k in 0..i {
                s -= self.l[i * n + k] * y[k];
            }
            y[i] = s / self.l[i * n + i].re;
        }
        for i in (0..n).rev() {
            let mut s = y[i];
            for k in (i + 1)..n {
                s -= self.l[k * n + i].conj() * y[k];
            }
            y[i] = s / self.l[i * n + i].re;
        }
        y
    }
}

pub fn norm2(x: &[C64]) -> f64 {
    x.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}

pub fn norm_inf(x: &[C64]) -> f64 {
    x.iter().map(|v| v.norm()).fold(0.0, f64::max)
}

/// Solves a banded Hermitian positive definite system by symmetric diagonal
/// equilibration, band Cholesky and iterative refinement, all in the
/// arithmetic of `R`.
pub fn solve_hpd_band<R: Real>(a: &HermitianBand<R>, b: &[Complex<R>]) -> Result<Vec<Complex<R>>> {
    let n = a.dim();
    let zero = Complex::new(R::zero(), R::zero());
    if b.len() != n {
        return Err(Error::Numerical(format!(
            "right-hand side has length {}, matrix has dimension {n}",
            b.len()
        )));
    }
    if b.iter().all(|v| *v == zero) {
        return Ok(vec![zero; n]);
    }
    let diag = a.diagonal();
    let mut d = Vec::with_capacity(n);
    for (j, v) in diag.iter().enumerate() {
        if !(v.re > R::zero() && v.re.is_finite()) {
            return Err(Error::NotPositiveDefinite { pivot: j });
        }
        d.push(div(R::one(), sqrt(v.re)));
    }
    let chol = BandCholesky::factor(&a.scaled(&d))?;
    let solve_scaled = |r: &[Complex<R>]| -> Vec<Complex<R>> {
        let rs: Vec<Complex<R>> = r.iter().zip(&d).map(|(v, s)| *v * *s).collect();
        chol.solve(&rs)
            .into_iter()
            .zip(&d)
            .map(|(v, s)| v * *s)
            .collect()
    };
    let rnorm = |r: &[Complex<R>]| r.iter().map(|v| round(*v).norm_sqr()).sum::<f64>().sqrt();

    let mut x = solve_scaled(b);
    let mut res = residual(a, &x, b);
    let mut rn = rnorm(&res);
    for _ in 0..4 {
        if rn == 0.0 {
            break;
        }
        let dx = solve_scaled(&res);
        let cand: Vec<Complex<R>> = x.iter().zip(&dx).map(|(a, b)| *a + *b).collect();
        let cres = residual(a, &cand, b);
        let cn = rnorm(&cres);
        if cn < rn {
            x = cand;
            res = cres;
            let improved = cn < 0.5 * rn;
            rn = cn;
            if !improved {
                break;
            }
        } else {
            break;
        }
    }
    if x.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
        return Err(Error::Numerical("non-finite solution".into()));
    }
    Ok(x)
}

fn residual<R: Real>(a: &HermitianBand<R>, x: &[Complex<R>], b: &[Complex<R>]) -> Vec<Complex<R>> {
    a.matvec(x)
        .into_iter()
        .zip(b)
        .map(|(ax, bi)| *bi - ax)
        .collect()
}
