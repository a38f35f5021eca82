//! Regret, information gain and information-ratio minimization against a target channel.
//!
//! A target channel is any [`BaSolution`]: either a Blahut-Arimoto solve over
//! posterior samples or the optimal-action channel from
//! [`optimal_action_solution`]. Samples are rows of arm means, weighted
//! uniformly.

use crate::error::{Error, Result};
use crate::info::{entropy, Distribution};
use crate::matrix::Matrix;
use crate::rd::BaSolution;
use crate::scalar::Scalar;

/// Probability of playing each arm.
#[derive(Debug, Clone, PartialEq)]
pub struct ActionDistribution<T = f64> {
    probs: Vec<T>,
}

impl<T: Scalar> ActionDistribution<T> {
    pub fn new(probs: Vec<T>) -> Result<Self> {
        Distribution::from_probs(probs.clone())?;
        Ok(Self { probs })
    }

    pub fn point_mass(n_arms: usize, arm: usize) -> Self {
        let mut probs = vec![T::zero(); n_arms];
        probs[arm] = T::one();
        Self { probs }
    }

    pub fn probs(&self) -> &[T] {
        &self.probs
    }

    pub fn support_size(&self) -> usize {
        self.probs.iter().filter(|&&p| p > T::zero()).count()
    }

    /// Total-variation distance to `other`.
    pub fn total_variation(&self, other: &Self) -> T {
        let s: T = self.probs.iter().zip(&other.probs).map(|(&a, &b)| (a - b).abs()).sum();
        s * T::lit(0.5)
    }

    /// Inverse-CDF draw from a single uniform.
    pub fn sample<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let u: f64 = rng.random();
        let mut acc = 0.0;
        let mut last = 0;
        for (i, p) in self.probs.iter().enumerate() {
            let p = p.to_f64().unwrap_or(0.0);
            if p <= 0.0 {
                continue;
            }
            last = i;
            acc += p;
            if u < acc {
                return i;
            }
        }
        last
    }
}

/// Minimizer output: the policy and its ratio `(E_π Δ)² / E_π v`.
#[derive(Debug, Clone, PartialEq)]
pub struct IdsSolution<T = f64> {
    pub distribution: ActionDistribution<T>,
    pub ratio: T,
}

fn check_samples<T: Scalar, S: AsRef<[T]>>(samples: &[S], channel: &Matrix<T>) -> Result<usize> {
    if samples.is_empty() {
        return Err(Error::Empty("posterior samples"));
    }
    let n_arms = samples[0].as_ref().len();
    if samples.iter().any(|s| s.as_ref().len() != n_arms) || channel.rows() != samples.len() || channel.cols() != n_arms {
        return Err(Error::ShapeMismatch {
            expected: format!("{} samples x {} arms", samples.len(), n_arms),
            got: format!("{}x{} channel", channel.rows(), channel.cols()),
        });
    }
    Ok(n_arms)
}

/// Channel that sends every sample to its optimal arm (lowest index on ties):
/// the infinite-multiplier limit of Blahut-Arimoto under squared-regret distortion.
pub fn optimal_action_solution<T: Scalar, S: AsRef<[T]>>(samples: &[S]) -> Result<BaSolution<T>> {
    if samples.is_empty() {
        return Err(Error::Empty("posterior samples"));
    }
    let n_arms = samples[0].as_ref().len();
    if n_arms == 0 {
        return Err(Error::Empty("arms"));
    }
    let z = samples.len();
    let mut channel = Matrix::filled(z, n_arms, T::zero());
    let mut counts = vec![0usize; n_arms];
    for (e, s) in samples.iter().enumerate() {
        let s = s.as_ref();
        if s.len() != n_arms {
            return Err(Error::ShapeMismatch { expected: format!("{n_arms} arms"), got: format!("{} in sample {e}", s.len()) });
        }
        let mut best = 0;
        for (a, &m) in s.iter().enumerate() {
            if m > s[best] {
                best = a;
            }
        }
        channel.set(e, best, T::one());
        counts[best] += 1;
    }
    let marginal = Distribution::from_probs_exact(counts.iter().map(|&c| T::count(c) / T::count(z)).collect())?;
    Ok(BaSolution {
        channel,
        rate: entropy(&marginal),
        marginal,
        distortion: T::zero(),
        beta: T::infinity(),
        iterations: 0,
        converged: true,
    })
}

/// `target − mean(a)` before clamping, where `target = (1/z) Σ_e Σ_ã p(ã|e) mean_e(ã)`.
pub fn raw_shortfall<T: Scalar, S: AsRef<[T]>>(samples: &[S], ba: &BaSolution<T>) -> Result<Vec<T>> {
    let n_arms = check_samples(samples, &ba.channel)?;
    let z = T::count(samples.len());
    let mut target = T::zero();
    let mut avg = vec![T::zero(); n_arms];
    for (e, s) in samples.iter().enumerate() {
        let s = s.as_ref();
        for ((&p, &m), acc) in ba.channel.row(e).iter().zip(s).zip(avg.iter_mut()) {
            target += p * m;
            *acc += m;
        }
    }
    target /= z;
    Ok(avg.into_iter().map(|m| target - m / z).collect())
}

/// `Δ(a) = max(0, E[R̄(χ)] − E[R̄(a)])` under the target channel.
pub fn expected_regret_vector<T: Scalar, S: AsRef<[T]>>(samples: &[S], ba: &BaSolution<T>) -> Result<Vec<T>> {
    Ok(raw_shortfall(samples, ba)?.into_iter().map(|x| x.max(T::zero())).collect())
}

/// `v(a) = Σ_ã q(ã) (E[R̄(a) | χ = ã] − E[R̄(a)])²`, skipping targets with `q(ã) = 0`.
pub fn variance_info_gain<T: Scalar, S: AsRef<[T]>>(samples: &[S], ba: &BaSolution<T>) -> Result<Vec<T>> {
    let n_arms = check_samples(samples, &ba.channel)?;
    let z = T::count(samples.len());
    let q = ba.marginal.probs();
    let mut avg = vec![T::zero(); n_arms];
    for s in samples {
        for (acc, &m) in avg.iter_mut().zip(s.as_ref()) {
            *acc += m;
        }
    }
    avg.iter_mut().for_each(|m| *m /= z);

    let mut v = vec![T::zero(); n_arms];
    let mut cond = vec![T::zero(); n_arms];
    for (t, &qt) in q.iter().enumerate() {
        if qt <= T::zero() {
            continue;
        }
        cond.iter_mut().for_each(|c| *c = T::zero());
        for (e, s) in samples.iter().enumerate() {
            let w = ba.channel.get(e, t) / qt;
            if w == T::zero() {
                continue;
            }
            for (c, &m) in cond.iter_mut().zip(s.as_ref()) {
                *c += w * m;
            }
        }
        for ((vi, &c), &mu) in v.iter_mut().zip(&cond).zip(&avg) {
            let diff = c / z - mu;
            *vi += qt * diff * diff;
        }
    }
    Ok(v)
}

fn mixture_ratio<T: Scalar>(pi: T, (di, vi): (T, T), (dj, vj): (T, T)) -> T {
    let num = pi * di + (T::one() - pi) * dj;
    let num = num * num;
    let den = pi * vi + (T::one() - pi) * vj;
    if num == T::zero() {
        T::zero()
    } else if den <= T::zero() {
        T::infinity()
    } else {
        num / den
    }
}

/// Minimizes `(Σ π_a Δ_a)² / Σ π_a v_a` over policies supported on at most two arms.
///
/// For a pair the objective is a square of an affine function over a positive
/// affine function of the mixing weight, which is convex, so the optimum is an
/// endpoint or the single stationary point. An arm with zero expected regret
/// has ratio zero. When every `v` is zero the point mass on the first argmin of
/// `Δ` is returned, provided that minimum is zero; otherwise
/// [`Error::DegenerateInformation`].
pub fn minimize_information_ratio<T: Scalar>(delta: &[T], v: &[T]) -> Result<IdsSolution<T>> {
    let n = delta.len();
    if n == 0 {
        return Err(Error::Empty("arms"));
    }
    if v.len() != n {
        return Err(Error::ShapeMismatch { expected: format!("{n} information gains"), got: format!("{}", v.len()) });
    }
    if delta.iter().chain(v).any(|x| !x.is_finite()) || v.iter().any(|&x| x < T::zero()) {
        return Err(Error::param("information ratio inputs", "Δ must be finite and v finite and >= 0"));
    }

    if v.iter().all(|&x| x == T::zero()) {
        let mut best = 0;
        for (a, &d) in delta.iter().enumerate() {
            if d < delta[best] {
                best = a;
            }
        }
        if delta[best] != T::zero() {
            return Err(Error::DegenerateInformation);
        }
        return Ok(IdsSolution { distribution: ActionDistribution::point_mass(n, best), ratio: T::zero() });
    }

    // (arm i, arm j, weight on i)
    let mut best = (0usize, 0usize, T::one());
    let mut best_ratio = T::infinity();
    for i in 0..n {
        let r = mixture_ratio(T::one(), (delta[i], v[i]), (delta[i], v[i]));
        if r < best_ratio {
            best_ratio = r;
            best = (i, i, T::one());
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let a = delta[i] - delta[j];
            let b = delta[j];
            let c = v[i] - v[j];
            let d = v[j];
            let mut candidates = [None, None];
            if a != T::zero() && c != T::zero() {
                candidates[0] = Some(b / a - T::lit(2.0) * d / c);
            }
            if a != T::zero() {
                candidates[1] = Some(-b / a);
            }
            for pi in candidates.into_iter().flatten() {
                if !(pi > T::zero() && pi < T::one()) {
                    continue;
                }
                let r = mixture_ratio(pi, (delta[i], v[i]), (delta[j], v[j]));
                if r < best_ratio {
                    best_ratio = r;
                    best = (i, j, pi);
                }
            }
        }
    }

    let (i, j, pi) = best;
    let mut probs = vec![T::zero(); n];
    probs[i] += pi;
    probs[j] += T::one() - pi;
    Ok(IdsSolution { distribution: ActionDistribution { probs }, ratio: best_ratio })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid_pair_min(delta: &[f64], v: &[f64], steps: usize) -> f64 {
        let mut best = f64::INFINITY;
        for i in 0..delta.len() {
            for j in 0..delta.len() {
                for k in 0..=steps {
                    let pi = k as f64 / steps as f64;
                    best = best.min(mixture_ratio(pi, (delta[i], v[i]), (delta[j], v[j])));
                }
            }
        }
        best
    }

    #[test]
    fn equal_regret_prefers_more_information() {
        let s = minimize_information_ratio(&[1.0_f64, 1.0], &[1.0, 2.0]).unwrap();
        assert_eq!(s.distribution.probs(), &[0.0, 1.0]);
        assert!((s.ratio - 0.5).abs() < 1e-12);
        assert!(s.ratio <= grid_pair_min(&[1.0, 1.0], &[1.0, 2.0], 1000) + 1e-9);
    }

    #[test]
    fn two_arm_mixture() {
        let s = minimize_information_ratio(&[1.0_f64, 2.0], &[1.0, 9.0]).unwrap();
        let p = s.distribution.probs();
        assert!((p[0] - 0.25).abs() < 1e-12 && (p[1] - 0.75).abs() < 1e-12);
        assert!((s.ratio - 0.4375).abs() < 1e-12);
        assert!((grid_pair_min(&[1.0, 2.0], &[1.0, 9.0], 1000) - 0.4375).abs() < 1e-9);
    }

    #[test]
    fn zero_regret_arm_wins() {
        let s = minimize_information_ratio(&[0.5, 0.0, 0.2], &[1.0, 0.3, 2.0]).unwrap();
        assert_eq!(s.ratio, 0.0);
        assert_eq!(s.distribution.probs(), &[0.0, 1.0, 0.0]);
    }

    #[test]
    fn all_zero_information() {
        let s = minimize_information_ratio(&[0.3, 0.0, 0.0], &[0.0; 3]).unwrap();
        assert_eq!(s.distribution.probs(), &[0.0, 1.0, 0.0]);
        assert!(matches!(minimize_information_ratio(&[0.3, 0.1], &[0.0, 0.0]), Err(Error::DegenerateInformation)));
        assert!(minimize_information_ratio::<f64>(&[], &[]).is_err());
        assert!(minimize_information_ratio(&[0.1], &[-1.0]).is_err());
    }

    #[test]
    fn optimal_channel_partition() {
        let samples = vec![vec![0.9, 0.1, 0.5], vec![0.2, 0.8, 0.1], vec![0.7, 0.3, 0.6], vec![0.1, 0.2, 0.3]];
        let s = optimal_action_solution::<f64, _>(&samples).unwrap();
        assert_eq!(s.marginal.probs(), &[0.5, 0.25, 0.25]);
        assert!((s.rate - 1.5).abs() < 1e-12);
        for (e, row) in s.channel.iter_rows().enumerate() {
            let best = [0, 1, 0, 2][e];
            assert_eq!(row[best], 1.0);
            assert_eq!(row.iter().sum::<f64>(), 1.0);
        }
    }

    #[test]
    fn regret_vector_degenerate_posterior() {
        let samples = vec![vec![0.3, 0.9, 0.5]];
        let s = optimal_action_solution::<f64, _>(&samples).unwrap();
        let d = expected_regret_vector(&samples, &s).unwrap();
        assert_eq!(d, vec![0.9 - 0.3, 0.0, 0.9 - 0.5]);
        let v = variance_info_gain(&samples, &s).unwrap();
        assert_eq!(v, vec![0.0; 3]);
    }

    #[test]
    fn action_distribution_sampling() {
        use rand::SeedableRng;
        let d = ActionDistribution::new(vec![0.0, 0.25, 0.75]).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let n = 40_000;
        let ones = (0..n).filter(|_| d.sample(&mut rng) == 1).count() as f64 / n as f64;
        assert!((ones - 0.25).abs() < 0.01);
        assert!(ActionDistribution::new(vec![0.5, 0.6]).is_err());
    }
}
