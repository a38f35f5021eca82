//! Discrete Blahut-Arimoto for the Lagrangian rate-distortion objective.
//!
//! For a source `p(e)`, distortion `d(e, ã)` and multiplier `β ≥ 0` (bits per
//! distortion unit) the solver alternates
//!
//! ```text
//! q(ã)   = Σ_e p(e) p(ã|e)
//! p(ã|e) ∝ q(ã) · 2^(−β d(e, ã))
//! ```
//!
//! starting from a uniform marginal. Each half-step can only lower
//! `J(channel, q) = KL(p ⊗ channel ‖ p × q) + β E[d]`, so the change in `J`
//! over one full iteration is the stopping signal. The channel update runs in
//! the log domain so `β` in the millions does not underflow.

use crate::error::{Error, Result};
use crate::info::{entropy, mutual_information, Distribution, JointDistribution};
use crate::matrix::Matrix;
use crate::scalar::Scalar;

/// Nonnegative finite distortion `d(e, ã)`: rows are environments, columns targets.
#[derive(Debug, Clone, PartialEq)]
pub struct DistortionMatrix<T> {
    row_labels: Vec<String>,
    col_labels: Vec<String>,
    d: Matrix<T>,
}

impl<T: Scalar> DistortionMatrix<T> {
    pub fn new(row_labels: Vec<String>, col_labels: Vec<String>, d: Matrix<T>) -> Result<Self> {
        if d.rows() != row_labels.len() || d.cols() != col_labels.len() {
            return Err(Error::ShapeMismatch {
                expected: format!("{}x{}", row_labels.len(), col_labels.len()),
                got: format!("{}x{}", d.rows(), d.cols()),
            });
        }
        if d.cols() == 0 {
            return Err(Error::Empty("distortion columns"));
        }
        if let Some(bad) = d.as_slice().iter().find(|v| !v.is_finite() || **v < T::zero()) {
            return Err(Error::param("distortion", format!("entries must be finite and >= 0, found {bad}")));
        }
        Ok(Self { row_labels, col_labels, d })
    }

    /// Matrix labeled by index on both axes.
    pub fn from_matrix(d: Matrix<T>) -> Result<Self> {
        let rows = (0..d.rows()).map(|i| i.to_string()).collect();
        let cols = (0..d.cols()).map(|i| i.to_string()).collect();
        Self::new(rows, cols, d)
    }

    /// Hamming distortion on an `n`-letter alphabet.
    pub fn hamming(n: usize) -> Result<Self> {
        let mut d = Matrix::filled(n, n, T::one());
        for i in 0..n {
            d.set(i, i, T::zero());
        }
        Self::from_matrix(d)
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.d
    }

    pub fn row_labels(&self) -> &[String] {
        &self.row_labels
    }

    pub fn col_labels(&self) -> &[String] {
        &self.col_labels
    }

    pub fn n_rows(&self) -> usize {
        self.d.rows()
    }

    pub fn n_cols(&self) -> usize {
        self.d.cols()
    }
}

/// Iteration budget and stopping rule.
#[derive(Debug, Clone, PartialEq)]
pub struct BaConfig<T> {
    pub max_iters: usize,
    /// Stop once `|J_k − J_{k−1}|` falls below this many bits.
    pub tol: T,
    /// Starting marginal over targets; uniform when `None`.
    pub init_marginal: Option<Distribution<T>>,
}

impl<T: Scalar> Default for BaConfig<T> {
    fn default() -> Self {
        Self { max_iters: 10_000, tol: T::lit(1e-9), init_marginal: None }
    }
}

impl<T: Scalar> BaConfig<T> {
    pub fn validate(&self) -> Result<()> {
        if self.max_iters == 0 {
            return Err(Error::param("max_iters", "must be >= 1"));
        }
        if !(self.tol > T::zero()) {
            return Err(Error::param("tol", "must be > 0"));
        }
        Ok(())
    }
}

/// Converged (or budget-exhausted) solver output.
#[derive(Debug, Clone, PartialEq)]
pub struct BaSolution<T> {
    /// Row-stochastic `p(ã|e)`.
    pub channel: Matrix<T>,
    /// Induced marginal `q(ã)` of the final channel.
    pub marginal: Distribution<T>,
    /// Mutual information of `p(e) p(ã|e)`, bits.
    pub rate: T,
    pub distortion: T,
    pub beta: T,
    pub iterations: usize,
    pub converged: bool,
}

impl<T: Scalar> BaSolution<T> {
    /// Lagrangian value `rate + β · distortion`.
    pub fn objective(&self) -> T {
        self.rate + self.beta * self.distortion
    }
}

fn check_source<T: Scalar>(source: &Distribution<T>, d: &DistortionMatrix<T>) -> Result<()> {
    if source.labels() != d.row_labels() {
        return Err(Error::AlphabetMismatch(format!(
            "source has {} labels, distortion has {} rows (labels must match in order)",
            source.len(),
            d.n_rows()
        )));
    }
    Ok(())
}

fn check_beta<T: Scalar>(beta: T) -> Result<()> {
    if !beta.is_finite() || beta < T::zero() {
        return Err(Error::param("beta", format!("must be finite and >= 0, got {beta}")));
    }
    Ok(())
}

/// `J(channel, q) = KL(source ⊗ channel ‖ source × q) + β E[d]`, in bits.
///
/// Returns `+inf` when `q` vanishes where the joint has mass.
pub fn objective_j<T: Scalar>(
    source: &Distribution<T>,
    channel: &Matrix<T>,
    q: &Distribution<T>,
    d: &DistortionMatrix<T>,
    beta: T,
) -> Result<T> {
    check_source(source, d)?;
    if channel.rows() != d.n_rows() || channel.cols() != d.n_cols() || q.len() != d.n_cols() {
        return Err(Error::ShapeMismatch {
            expected: format!("{}x{} channel and {} marginal", d.n_rows(), d.n_cols(), d.n_cols()),
            got: format!("{}x{} channel and {} marginal", channel.rows(), channel.cols(), q.len()),
        });
    }
    Ok(objective_unchecked(source.probs(), channel, q.probs(), d.matrix(), beta))
}

fn objective_unchecked<T: Scalar>(source: &[T], channel: &Matrix<T>, q: &[T], d: &Matrix<T>, beta: T) -> T {
    let mut kl = T::zero();
    let mut dist = T::zero();
    for (e, &pe) in source.iter().enumerate() {
        if pe <= T::zero() {
            continue;
        }
        let row = channel.row(e);
        let drow = d.row(e);
        for (a, &pa) in row.iter().enumerate() {
            let w = pe * pa;
            if w <= T::zero() {
                continue;
            }
            if q[a] <= T::zero() {
                return T::infinity();
            }
            kl += w * (pa / q[a]).log2();
            dist += w * drow[a];
        }
    }
    kl + beta * dist
}

/// Rate (bits) and expected distortion of an arbitrary channel.
pub fn evaluate_channel<T: Scalar>(
    source: &Distribution<T>,
    channel: &Matrix<T>,
    d: &DistortionMatrix<T>,
) -> Result<(T, T)> {
    check_source(source, d)?;
    let joint = JointDistribution::from_channel(source, channel, d.col_labels().to_vec())?;
    let mut dist = T::zero();
    for (m, &dv) in joint.mass().as_slice().iter().zip(d.matrix().as_slice()) {
        dist += *m * dv;
    }
    Ok((mutual_information(&joint), dist))
}

/// Alternating-minimization state, exposed so callers can observe every half-step.
#[derive(Debug, Clone)]
pub struct BlahutArimoto<'a, T> {
    source: &'a Distribution<T>,
    d: &'a DistortionMatrix<T>,
    beta: T,
    channel: Matrix<T>,
    /// Natural log of `channel`, kept from the update so `J` needs no per-entry logarithm.
    log_channel: Matrix<T>,
    marginal: Vec<T>,
    scratch: Vec<T>,
}

impl<'a, T: Scalar> BlahutArimoto<'a, T> {
    pub fn new(
        source: &'a Distribution<T>,
        d: &'a DistortionMatrix<T>,
        beta: T,
        init_marginal: Option<&Distribution<T>>,
    ) -> Result<Self> {
        check_source(source, d)?;
        check_beta(beta)?;
        let n = d.n_cols();
        let marginal = match init_marginal {
            Some(q) => {
                if q.labels() != d.col_labels() {
                    return Err(Error::AlphabetMismatch("initial marginal vs distortion columns".into()));
                }
                q.probs().to_vec()
            }
            None => vec![T::one() / T::count(n); n],
        };
        let channel = Matrix::filled(d.n_rows(), n, T::one() / T::count(n));
        let log_channel = Matrix::filled(d.n_rows(), n, -T::count(n).ln());
        Ok(Self { source, d, beta, channel, log_channel, marginal, scratch: vec![T::zero(); n] })
    }

    /// `p(ã|e) ∝ q(ã) 2^(−β d(e,ã))` for every row.
    pub fn update_channel(&mut self) {
        let scale = self.beta * T::LN_2();
        let log_q: Vec<T> = self.marginal.iter().map(|&q| if q > T::zero() { q.ln() } else { T::neg_infinity() }).collect();
        for e in 0..self.d.n_rows() {
            let drow = self.d.matrix().row(e);
            for ((s, &lq), &dv) in self.scratch.iter_mut().zip(&log_q).zip(drow) {
                *s = if lq == T::neg_infinity() { lq } else { lq - scale * dv };
            }
            // q has positive mass somewhere, so the row maximum is finite and the
            // shifted sum is at least one.
            let m = self.scratch.iter().copied().fold(T::neg_infinity(), T::max);
            let row = self.channel.row_mut(e);
            let mut z = T::zero();
            for (p, &s) in row.iter_mut().zip(&self.scratch) {
                *p = (s - m).exp();
                z += *p;
            }
            row.iter_mut().for_each(|p| *p /= z);
            let shift = m + z.ln();
            for (lp, &s) in self.log_channel.row_mut(e).iter_mut().zip(&self.scratch) {
                *lp = s - shift;
            }
        }
    }

    /// `q(ã) = Σ_e p(e) p(ã|e)`.
    pub fn update_marginal(&mut self) {
        self.marginal.iter_mut().for_each(|q| *q = T::zero());
        for (e, &pe) in self.source.probs().iter().enumerate() {
            for (q, &p) in self.marginal.iter_mut().zip(self.channel.row(e)) {
                *q += pe * p;
            }
        }
    }

    /// `J` at the current (channel, marginal) pair.
    pub fn objective(&self) -> T {
        let log_q: Vec<T> = self.marginal.iter().map(|&q| q.ln()).collect();
        let mut kl = T::zero();
        let mut dist = T::zero();
        for (e, &pe) in self.source.probs().iter().enumerate() {
            if pe <= T::zero() {
                continue;
            }
            let rows = self.channel.row(e).iter().zip(self.log_channel.row(e)).zip(self.d.matrix().row(e));
            for (((&pa, &lp), &dv), &lq) in rows.zip(&log_q) {
                // Joint masses that underflow to zero may leave q at zero too.
                let w = pe * pa;
                if w <= T::zero() {
                    continue;
                }
                if lq == T::neg_infinity() {
                    return T::infinity();
                }
                kl += w * (lp - lq);
                dist += w * dv;
            }
        }
        kl / T::LN_2() + self.beta * dist
    }

    pub fn channel(&self) -> &Matrix<T> {
        &self.channel
    }

    pub fn marginal(&self) -> &[T] {
        &self.marginal
    }

    fn finish(self, iterations: usize, converged: bool) -> Result<BaSolution<T>> {
        let (rate, distortion) = evaluate_channel(self.source, &self.channel, self.d)?;
        let marginal = Distribution::new(self.d.col_labels().to_vec(), self.marginal)?;
        Ok(BaSolution { channel: self.channel, marginal, rate, distortion, beta: self.beta, iterations, converged })
    }
}

/// Runs Blahut-Arimoto and also returns `J` after every half-step
/// (channel update, then marginal update), in order.
pub fn blahut_arimoto_traced<T: Scalar>(
    source: &Distribution<T>,
    d: &DistortionMatrix<T>,
    beta: T,
    cfg: &BaConfig<T>,
) -> Result<(BaSolution<T>, Vec<T>)> {
    run(source, d, beta, cfg, true)
}

/// Runs Blahut-Arimoto at multiplier `beta` until `J` stabilizes.
pub fn blahut_arimoto<T: Scalar>(
    source: &Distribution<T>,
    d: &DistortionMatrix<T>,
    beta: T,
    cfg: &BaConfig<T>,
) -> Result<BaSolution<T>> {
    run(source, d, beta, cfg, false).map(|(s, _)| s)
}

fn run<T: Scalar>(
    source: &Distribution<T>,
    d: &DistortionMatrix<T>,
    beta: T,
    cfg: &BaConfig<T>,
    trace: bool,
) -> Result<(BaSolution<T>, Vec<T>)> {
    cfg.validate()?;
    let mut ba = BlahutArimoto::new(source, d, beta, cfg.init_marginal.as_ref())?;
    let mut history = Vec::new();
    let mut prev = T::infinity();
    for k in 1..=cfg.max_iters {
        ba.update_channel();
        if trace {
            history.push(ba.objective());
        }
        ba.update_marginal();
        let j = ba.objective();
        if trace {
            history.push(j);
        }
        if (j - prev).abs() < cfg.tol {
            return Ok((ba.finish(k, true)?, history));
        }
        prev = j;
    }
    Ok((ba.finish(cfg.max_iters, false)?, history))
}

/// One point of a traced rate-distortion curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint<T> {
    pub beta: T,
    pub distortion: T,
    pub rate: T,
}

/// Solves once per multiplier, in the order given. Each solve starts from
/// `cfg.init_marginal` (uniform by default), so repeated betas give identical points.
pub fn rd_curve<T: Scalar>(
    source: &Distribution<T>,
    d: &DistortionMatrix<T>,
    betas: &[T],
    cfg: &BaConfig<T>,
) -> Result<Vec<CurvePoint<T>>> {
    if betas.is_empty() {
        return Err(Error::Empty("beta list"));
    }
    betas
        .iter()
        .map(|&beta| {
            let s = blahut_arimoto(source, d, beta, cfg)?;
            Ok(CurvePoint { beta, distortion: s.distortion, rate: s.rate })
        })
        .collect()
}

/// Rate of the deterministic channel sending each row to its first minimum.
pub fn argmin_channel_rate<T: Scalar>(source: &Distribution<T>, d: &DistortionMatrix<T>) -> Result<T> {
    check_source(source, d)?;
    let mut q = vec![T::zero(); d.n_cols()];
    for (row, &pe) in d.matrix().iter_rows().zip(source.probs()) {
        let mut best = 0;
        for (j, &v) in row.iter().enumerate() {
            if v < row[best] {
                best = j;
            }
        }
        q[best] += pe;
    }
    Ok(entropy(&Distribution::from_probs(q)?))
}
