//! Reference ground energies: dense diagonalization for small registers,
//! restarted Lanczos with deflation for larger ones, and the closed form for
//! the complete-graph model.

use std::fmt::Debug;
use std::ops::Neg;

use nalgebra::DMatrix;
use num_complex::Complex;
use num_traits::NumAssign;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hamiltonian::Hamiltonian;
use crate::operator::PauliOperator;

/// Largest register the dense path accepts.
pub const DENSE_MAX_QUBITS: usize = 14;

/// Registers at least this large use the magnetization sector by default.
pub const SECTOR_AUTO_QUBITS: usize = 22;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpectrumMethod {
    Dense,
    Lanczos,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumResult {
    /// Lowest eigenvalues, ascending.
    pub eigenvalues: Vec<f64>,
    pub n_qubits: usize,
    pub method: SpectrumMethod,
    /// `||H v - lambda v||` per eigenvalue; empty for the dense path.
    pub residuals: Vec<f64>,
    /// Popcount of the basis states kept, when restricted to one sector.
    pub sector: Option<usize>,
    pub matvecs: usize,
}

impl SpectrumResult {
    pub fn ground_energy(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn per_spin(&self) -> Vec<f64> {
        self.eigenvalues.iter().map(|e| e / self.n_qubits as f64).collect()
    }
}

/// `3(a - N)/2` with `a = N mod 2`.
pub fn mean_field_exact(n: usize) -> f64 {
    let a = (n % 2) as f64;
    1.5 * (a - n as f64)
}

/// Lowest `n_eigenvalues` eigenvalues by full diagonalization.
pub fn dense_ground_energy(h: &Hamiltonian<f64>, n_eigenvalues: usize) -> Result<SpectrumResult> {
    let n = h.n_qubits();
    if n > DENSE_MAX_QUBITS {
        return Err(Error::capacity(format!(
            "{n} qubits exceeds the dense budget of {DENSE_MAX_QUBITS}; use the Lanczos solver"
        )));
    }
    let dim = 1usize << n;
    if n_eigenvalues == 0 || n_eigenvalues > dim {
        return Err(Error::argument(format!("cannot take {n_eigenvalues} eigenvalues of a {dim}-dimensional space")));
    }
    let op = PauliOperator::new(h);
    let mut values: Vec<f64> = if op.is_real() {
        let mut m = DMatrix::<f64>::zeros(dim, dim);
        for b in 0..dim {
            m[(b, b)] += op.diagonal_element(b);
            for (b2, w) in op.off_diagonal(b) {
                m[(b2, b)] += w.re;
            }
        }
        m.symmetric_eigenvalues().iter().copied().collect()
    } else {
        let mut m = DMatrix::<Complex<f64>>::zeros(dim, dim);
        for b in 0..dim {
            m[(b, b)] += Complex::new(op.diagonal_element(b), 0.0);
            for (b2, w) in op.off_diagonal(b) {
                m[(b2, b)] += w;
            }
        }
        m.symmetric_eigenvalues().iter().copied().collect()
    };
    values.sort_by(f64::total_cmp);
    values.truncate(n_eigenvalues);
    Ok(SpectrumResult {
        eigenvalues: values,
        n_qubits: n,
        method: SpectrumMethod::Dense,
        residuals: Vec::new(),
        sector: None,
        matvecs: 0,
    })
}

/// Ground energy by the cheapest adequate method, or `None` above
/// `max_qubits`.
pub fn oracle_ground_energy(h: &Hamiltonian<f64>, max_qubits: usize) -> Result<Option<f64>> {
    let n = h.n_qubits();
    if n > max_qubits {
        Ok(None)
    } else if n <= 8 {
        Ok(Some(dense_ground_energy(h, 1)?.ground_energy()))
    } else {
        Ok(Some(lanczos_ground_energy(h, 1, &LanczosConfig::default())?.ground_energy()))
    }
}

/// Scalars the Lanczos iteration runs over.
pub trait Field: Copy + Default + Debug + NumAssign + Neg<Output = Self> + Send + Sync + 'static {
    fn conj(self) -> Self;
    fn re(self) -> f64;
    fn norm_sqr(self) -> f64;
    fn from_real(r: f64) -> Self;
    fn from_complex(c: Complex<f64>) -> Self;
}

impl Field for f64 {
    fn conj(self) -> Self {
        self
    }
    fn re(self) -> f64 {
        self
    }
    fn norm_sqr(self) -> f64 {
        self * self
    }
    fn from_real(r: f64) -> Self {
        r
    }
    fn from_complex(c: Complex<f64>) -> Self {
        c.re
    }
}

impl Field for Complex<f64> {
    fn conj(self) -> Self {
        Complex::conj(&self)
    }
    fn re(self) -> f64 {
        self.re
    }
    fn norm_sqr(self) -> f64 {
        Complex::norm_sqr(&self)
    }
    fn from_real(r: f64) -> Self {
        Complex::new(r, 0.0)
    }
    fn from_complex(c: Complex<f64>) -> Self {
        c
    }
}

/// A Hermitian operator known only through its action on vectors.
pub trait LinearOperator<S: Field> {
    fn dim(&self) -> usize;
    /// `y <- A x`.
    fn apply(&self, x: &[S], y: &mut [S]);
}

/// `H` on the full `2^N` space.
pub struct FullSpace<'a> {
    op: &'a PauliOperator<f64>,
}

impl<'a> FullSpace<'a> {
    pub fn new(op: &'a PauliOperator<f64>) -> Self {
        Self { op }
    }
}

impl<S: Field> LinearOperator<S> for FullSpace<'_> {
    fn dim(&self) -> usize {
        self.op.dim()
    }

    fn apply(&self, x: &[S], y: &mut [S]) {
        for (b, (o, &a)) in y.iter_mut().zip(x).enumerate() {
            *o = S::from_real(self.op.diagonal_element(b)) * a;
        }
        for (flip, weight) in self.op.blocks() {
            for (b, &a) in x.iter().enumerate() {
                y[b ^ flip] += S::from_complex(weight(b)) * a;
            }
        }
    }
}

/// `H` restricted to basis states with a fixed number of set bits.
pub struct Sector<'a> {
    op: &'a PauliOperator<f64>,
    popcount: usize,
    basis: Vec<usize>,
    /// `binom[n][k]` for ranking.
    binom: Vec<Vec<usize>>,
}

impl<'a> Sector<'a> {
    pub fn new(op: &'a PauliOperator<f64>, popcount: usize) -> Result<Self> {
        let n = op.n_qubits();
        if popcount > n {
            return Err(Error::argument(format!("popcount {popcount} exceeds {n} qubits")));
        }
        if !op.conserves_magnetization() {
            return Err(Error::argument("operator does not conserve magnetization"));
        }
        let mut binom = vec![vec![0usize; n + 2]; n + 1];
        for i in 0..=n {
            binom[i][0] = 1;
            for k in 1..=i {
                binom[i][k] = binom[i - 1][k - 1] + if k < i { binom[i - 1][k] } else { 0 };
            }
        }
        let size = binom[n][popcount];
        let mut basis = Vec::with_capacity(size);
        if popcount == 0 {
            basis.push(0);
        } else {
            let mut v: usize = (1 << popcount) - 1;
            while v < 1 << n {
                basis.push(v);
                let t = v | (v - 1);
                v = (t + 1) | (((!t & (t + 1)) - 1) >> (v.trailing_zeros() + 1));
            }
        }
        debug_assert_eq!(basis.len(), size);
        Ok(Self { op, popcount, basis, binom })
    }

    pub fn popcount(&self) -> usize {
        self.popcount
    }

    pub fn basis(&self) -> &[usize] {
        &self.basis
    }

    /// Position of `b` in the ascending basis.
    #[inline]
    fn rank(&self, mut b: usize) -> usize {
        let mut r = 0;
        let mut i = 1;
        while b != 0 {
            let p = b.trailing_zeros() as usize;
            r += self.binom[p][i];
            b &= b - 1;
            i += 1;
        }
        r
    }
}

impl<S: Field> LinearOperator<S> for Sector<'_> {
    fn dim(&self) -> usize {
        self.basis.len()
    }

    fn apply(&self, x: &[S], y: &mut [S]) {
        for ((o, &a), &b) in y.iter_mut().zip(x).zip(&self.basis) {
            *o = S::from_real(self.op.diagonal_element(b)) * a;
        }
        for (flip, weight) in self.op.blocks() {
            for (&a, &b) in x.iter().zip(&self.basis) {
                let b2 = b ^ flip;
                if b2.count_ones() as usize == self.popcount {
                    let w = weight(b);
                    if w.re != 0.0 || w.im != 0.0 {
                        y[self.rank(b2)] += S::from_complex(w) * a;
                    }
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SectorChoice {
    /// Restrict to the lowest-magnetization sector for large conserving
    /// operators.
    #[default]
    Auto,
    Full,
    /// Basis states with `floor(N/2)` set bits.
    ZeroMagnetization,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LanczosConfig {
    pub krylov_dim: usize,
    /// Ritz residual estimate required to lock an eigenpair.
    pub tolerance: f64,
    pub max_restarts: usize,
    /// Bound on memory for Krylov and locked vectors.
    pub memory_budget_bytes: usize,
    pub seed: u64,
    pub sector: SectorChoice,
}

impl Default for LanczosConfig {
    fn default() -> Self {
        Self {
            krylov_dim: 64,
            tolerance: 1e-10,
            max_restarts: 500,
            memory_budget_bytes: 2 << 30,
            seed: 0,
            sector: SectorChoice::Auto,
        }
    }
}

/// Lowest `n_eigenvalues` eigenvalues by restarted Lanczos.
pub fn lanczos_ground_energy(
    h: &Hamiltonian<f64>,
    n_eigenvalues: usize,
    config: &LanczosConfig,
) -> Result<SpectrumResult> {
    let op = PauliOperator::new(h);
    let n = op.n_qubits();
    let use_sector = match config.sector {
        SectorChoice::Full => false,
        SectorChoice::ZeroMagnetization => true,
        SectorChoice::Auto => n >= SECTOR_AUTO_QUBITS && op.conserves_magnetization(),
    };
    let (values, residuals, matvecs, sector) = if use_sector {
        let s = Sector::new(&op, n / 2)?;
        let (v, r, m) = if op.is_real() {
            lanczos::<f64, _>(&s, n_eigenvalues, config)?
        } else {
            lanczos::<Complex<f64>, _>(&s, n_eigenvalues, config)?
        };
        (v, r, m, Some(s.popcount()))
    } else {
        let s = FullSpace::new(&op);
        let (v, r, m) = if op.is_real() {
            lanczos::<f64, _>(&s, n_eigenvalues, config)?
        } else {
            lanczos::<Complex<f64>, _>(&s, n_eigenvalues, config)?
        };
        (v, r, m, None)
    };
    Ok(SpectrumResult {
        eigenvalues: values,
        n_qubits: n,
        method: SpectrumMethod::Lanczos,
        residuals,
        sector,
        matvecs,
    })
}

fn dot<S: Field>(a: &[S], b: &[S]) -> S {
    a.iter().zip(b).fold(S::zero(), |acc, (&x, &y)| acc + x.conj() * y)
}

fn norm<S: Field>(a: &[S]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

fn axpy<S: Field>(alpha: S, x: &[S], y: &mut [S]) {
    for (yi, &xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

fn scale<S: Field>(alpha: f64, x: &mut [S]) {
    let a = S::from_real(alpha);
    for xi in x {
        *xi *= a;
    }
}

/// Removes the components of `w` along every vector in `basis`, twice.
fn orthogonalize<S: Field>(w: &mut [S], basis: &[Vec<S>]) {
    for _ in 0..2 {
        for v in basis {
            let c = dot(v, w);
            axpy(-c, v, w);
        }
    }
}

/// Lowest eigenpair of the symmetric tridiagonal matrix, as `(value, vector)`.
fn tridiagonal_lowest(alphas: &[f64], betas: &[f64]) -> (f64, Vec<f64>) {
    let k = alphas.len();
    let mut t = DMatrix::<f64>::zeros(k, k);
    for i in 0..k {
        t[(i, i)] = alphas[i];
        if i + 1 < k {
            t[(i, i + 1)] = betas[i];
            t[(i + 1, i)] = betas[i];
        }
    }
    let eig = t.symmetric_eigen();
    let (idx, &val) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("non-empty tridiagonal");
    (val, eig.eigenvectors.column(idx).iter().copied().collect())
}

/// Eigenvalues, true residuals and the number of matrix-vector products.
pub fn lanczos<S: Field, A: LinearOperator<S> + ?Sized>(
    a: &A,
    n_eigenvalues: usize,
    config: &LanczosConfig,
) -> Result<(Vec<f64>, Vec<f64>, usize)> {
    let dim = a.dim();
    if n_eigenvalues == 0 || n_eigenvalues > dim {
        return Err(Error::argument(format!("cannot take {n_eigenvalues} eigenvalues of a {dim}-dimensional space")));
    }
    let bytes = dim * std::mem::size_of::<S>();
    let fit = config.memory_budget_bytes / bytes.max(1);
    let reserved = n_eigenvalues + 2;
    if fit < reserved + 4 {
        return Err(Error::capacity(format!(
            "{dim}-dimensional Lanczos needs more than {} bytes",
            config.memory_budget_bytes
        )));
    }
    let m = config.krylov_dim.min(fit - reserved).min(dim).max(2);
    let check_every = 5;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut locked: Vec<Vec<S>> = Vec::new();
    let mut values = Vec::new();
    let mut residuals = Vec::new();
    let mut matvecs = 0usize;
    let mut w = vec![S::zero(); dim];

    for _ in 0..n_eigenvalues {
        let mut start: Vec<S> = (0..dim)
            .map(|_| S::from_complex(Complex::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)))
            .collect();
        orthogonalize(&mut start, &locked);
        let mut last_residual = f64::INFINITY;
        let mut found = None;
        for _ in 0..config.max_restarts {
            let nrm = norm(&start);
            if nrm == 0.0 {
                return Err(Error::NoConvergence {
                    message: "start vector lies in the locked subspace".into(),
                    residuals: residuals.clone(),
                });
            }
            scale(1.0 / nrm, &mut start);
            let mut basis: Vec<Vec<S>> = vec![start.clone()];
            let mut alphas: Vec<f64> = Vec::new();
            let mut betas: Vec<f64> = Vec::new();
            let (ritz, estimate) = loop {
                let j = basis.len() - 1;
                a.apply(&basis[j], &mut w);
                matvecs += 1;
                let alpha = dot(&basis[j], &w).re();
                axpy(S::from_real(-alpha), &basis[j], &mut w);
                if j > 0 {
                    axpy(S::from_real(-betas[j - 1]), &basis[j - 1], &mut w);
                }
                orthogonalize(&mut w, &locked);
                orthogonalize(&mut w, &basis);
                alphas.push(alpha);
                let beta = norm(&w);
                let exhausted = beta <= 1e-12 * alpha.abs().max(1.0) || basis.len() + locked.len() >= dim;
                let full = basis.len() >= m;
                if exhausted || full || alphas.len() % check_every == 0 {
                    let ritz = tridiagonal_lowest(&alphas, &betas);
                    let estimate = if exhausted { 0.0 } else { beta * ritz.1.last().unwrap().abs() };
                    if exhausted || full || estimate < config.tolerance {
                        break (ritz, estimate);
                    }
                }
                betas.push(beta);
                let mut next = w.clone();
                scale(1.0 / beta, &mut next);
                basis.push(next);
            };
            let mut y = vec![S::zero(); dim];
            for (v, &c) in basis.iter().zip(&ritz.1) {
                axpy(S::from_real(c), v, &mut y);
            }
            orthogonalize(&mut y, &locked);
            scale(1.0 / norm(&y), &mut y);
            a.apply(&y, &mut w);
            matvecs += 1;
            let theta = dot(&y, &w).re();
            axpy(S::from_real(-theta), &y, &mut w);
            last_residual = norm(&w);
            if estimate < config.tolerance && last_residual < 100.0 * config.tolerance.max(1e-12) {
                found = Some((theta, y));
                break;
            }
            start = y;
        }
        let Some((theta, y)) = found else {
            residuals.push(last_residual);
            return Err(Error::NoConvergence {
                message: format!("Lanczos did not converge after {} restarts", config.max_restarts),
                residuals,
            });
        };
        values.push(theta);
        residuals.push(last_residual);
        locked.push(y);
    }
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
    Ok((
        order.iter().map(|&i| values[i]).collect(),
        order.iter().map(|&i| residuals[i]).collect(),
        matvecs,
    ))
}
