//! Sample-complexity tools for the plug-in rate-distortion estimator.
//!
//! Running Blahut-Arimoto on the empirical distribution of `z` posterior
//! samples instead of the posterior itself perturbs the rate by at most
//! `(7 / D) ‖P − P̂‖₁ log2(|Σ||Ξ| / ‖P − P̂‖₁)` once `‖P − P̂‖₁ ≤ D / 4`, where `D` is
//! the smallest positive distortion on the posterior support. Inverting that
//! bound gives the number of samples needed for an `ε`-accurate estimate with
//! probability `1 − δ`.

use crate::error::{Error, Result};
use crate::info::Distribution;
use crate::rd::DistortionMatrix;
use crate::scalar::Scalar;

/// `|Σ|` environments and `|Ξ|` targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AlphabetSizes {
    pub n_env: usize,
    pub n_target: usize,
}

impl AlphabetSizes {
    pub fn new(n_env: usize, n_target: usize) -> Result<Self> {
        if n_env == 0 || n_target == 0 {
            return Err(Error::param("alphabet sizes", "both must be >= 1"));
        }
        Ok(Self { n_env, n_target })
    }

    fn product<T: Scalar>(&self) -> T {
        T::count(self.n_env) * T::count(self.n_target)
    }
}

/// Smallest positive distortion over environments with positive source mass.
pub fn min_positive_distortion<T: Scalar>(source: &Distribution<T>, d: &DistortionMatrix<T>) -> Result<T> {
    if source.labels() != d.row_labels() {
        return Err(Error::AlphabetMismatch("source labels vs distortion rows".into()));
    }
    source
        .probs()
        .iter()
        .zip(d.matrix().iter_rows())
        .filter(|(&p, _)| p > T::zero())
        .flat_map(|(_, row)| row.iter().copied().filter(|&v| v > T::zero()))
        .fold(None, |acc: Option<T>, v| Some(acc.map_or(v, |m| m.min(v))))
        .ok_or(Error::DegenerateInstance("every distortion on the source support is zero"))
}

/// `φ(t) = t log2(|Σ||Ξ| / t)`, with `φ(0) = 0`.
pub fn phi<T: Scalar>(t: T, sizes: AlphabetSizes) -> T {
    if t <= T::zero() {
        T::zero()
    } else {
        t * (sizes.product::<T>() / t).log2()
    }
}

/// Inverse of [`phi`] on `[0, 1/2]`, by bisection to `1e-12` (or the type's resolution).
pub fn phi_inverse<T: Scalar>(y: T, sizes: AlphabetSizes) -> Result<T> {
    let half = T::lit(0.5);
    if sizes.n_env * sizes.n_target < 2 {
        return Err(Error::param("sizes", "|Σ||Ξ| must be >= 2 for φ to be invertible on [0, 1/2]"));
    }
    let top = phi(half, sizes);
    if !(y >= T::zero() && y <= top) {
        return Err(Error::param("y", format!("must lie in [0, {top}], got {y}")));
    }
    if y == T::zero() {
        return Ok(T::zero());
    }
    let (mut lo, mut hi) = (T::zero(), half);
    let width = T::lit(1e-12);
    for _ in 0..200 {
        if hi - lo <= width {
            break;
        }
        let mid = (lo + hi) * half;
        if mid <= lo || mid >= hi {
            break;
        }
        if phi(mid, sizes) < y {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo + hi) * half)
}

/// Upper bound on `|R(D) − R̂(D)|` in bits for an empirical source at L1 distance `l1`.
///
/// Only claimed for `l1 ≤ d_min / 4`; `l1 = 0` returns the limit value 0.
pub fn rate_deviation_bound<T: Scalar>(l1: T, d_min: T, sizes: AlphabetSizes) -> Result<T> {
    if !(d_min > T::zero()) || !d_min.is_finite() {
        return Err(Error::param("d_min", format!("must be positive and finite, got {d_min}")));
    }
    if !(l1 >= T::zero()) || l1 > d_min / T::lit(4.0) {
        return Err(Error::param("l1", format!("bound requires 0 <= l1 <= d_min/4 = {}, got {l1}", d_min / T::lit(4.0))));
    }
    Ok(T::lit(7.0) / d_min * phi(l1, sizes))
}

/// Smallest `z` with `z ≥ 2 / φ⁻¹(ε d_min / 7)² · (ln(1/δ) + |Σ| ln 2)`.
///
/// `δ = 1` is accepted as a boundary probe where the `δ` term vanishes.
pub fn required_samples<T: Scalar>(epsilon: T, delta: T, d_min: T, sizes: AlphabetSizes) -> Result<u64> {
    if !(delta > T::zero() && delta <= T::one()) {
        return Err(Error::param("delta", format!("must lie in (0, 1], got {delta}")));
    }
    let eps_max = T::count(sizes.n_env).log2();
    if !(epsilon > T::zero() && epsilon < eps_max) {
        return Err(Error::param("epsilon", format!("must lie in (0, log2|Σ| = {eps_max}), got {epsilon}")));
    }
    if !(d_min > T::zero()) || !d_min.is_finite() {
        return Err(Error::param("d_min", format!("must be positive and finite, got {d_min}")));
    }
    let t = phi_inverse(epsilon * d_min / T::lit(7.0), sizes)?;
    if t <= T::zero() {
        return Err(Error::param("epsilon", "φ⁻¹(ε d_min / 7) underflowed to zero"));
    }
    let log_term = (T::one() / delta).ln() + T::count(sizes.n_env) * T::LN_2();
    let z = (T::lit(2.0) / (t * t) * log_term).ceil();
    z.to_u64().ok_or_else(|| Error::param("epsilon", format!("required sample count {z} overflows")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::Matrix;

    fn sizes(a: usize, b: usize) -> AlphabetSizes {
        AlphabetSizes::new(a, b).unwrap()
    }

    #[test]
    fn hamming_gap_is_one() {
        let d = DistortionMatrix::<f64>::hamming(2).unwrap();
        let src = Distribution::from_probs(vec![0.3, 0.7]).unwrap();
        assert_eq!(min_positive_distortion(&src, &d).unwrap(), 1.0);
    }

    #[test]
    fn gap_over_support_only() {
        let d = DistortionMatrix::from_matrix(
            Matrix::from_rows(&[vec![0.0, 0.04, 0.25], vec![0.0, 0.01, 0.5]]).unwrap(),
        )
        .unwrap();
        let src = Distribution::from_probs(vec![1.0, 0.0]).unwrap();
        assert_eq!(min_positive_distortion(&src, &d).unwrap(), 0.04);
        let both = Distribution::from_probs(vec![0.5, 0.5]).unwrap();
        assert_eq!(min_positive_distortion(&both, &d).unwrap(), 0.01);
    }

    #[test]
    fn degenerate_gap() {
        let d = DistortionMatrix::from_matrix(Matrix::from_rows(&[vec![0.0, 0.0], vec![0.0, 1.0]]).unwrap()).unwrap();
        let src = Distribution::from_probs(vec![1.0, 0.0]).unwrap();
        assert!(matches!(min_positive_distortion(&src, &d), Err(Error::DegenerateInstance(_))));
    }

    #[test]
    fn phi_inverse_examples() {
        assert_eq!(phi_inverse(0.0, sizes(2, 2)).unwrap(), 0.0);
        assert!((phi_inverse(1.5_f64, sizes(2, 2)).unwrap() - 0.5).abs() < 1e-11);
        assert!(phi_inverse(1.6, sizes(2, 2)).is_err());
        assert!(phi_inverse(-0.1, sizes(2, 2)).is_err());
        assert!(phi_inverse(0.1, sizes(1, 1)).is_err());
    }

    #[test]
    fn deviation_bound_examples() {
        let s = sizes(2, 2);
        assert!((rate_deviation_bound(0.25_f64, 1.0, s).unwrap() - 7.0).abs() < 1e-12);
        assert!(rate_deviation_bound(1e-12, 1.0, s).unwrap() < 1e-9);
        let a = rate_deviation_bound(0.1_f64, 1.0, s).unwrap();
        let b = rate_deviation_bound(0.1, 2.0, s).unwrap();
        assert!((a - 2.0 * b).abs() < 1e-12);
        assert!(rate_deviation_bound(0.3, 1.0, s).is_err());
        assert!(rate_deviation_bound(0.1, 0.0, s).is_err());
    }

    #[test]
    fn sample_bound_delta_one() {
        let s = sizes(4, 4);
        let t = phi_inverse(0.7 / 7.0, s).unwrap();
        let want = (2.0 * 4.0 * std::f64::consts::LN_2 / (t * t)).ceil() as u64;
        assert_eq!(required_samples(0.7, 1.0, 1.0, s).unwrap(), want);
    }

    #[test]
    fn sample_bound_monotone() {
        let s = sizes(4, 4);
        let mut last = u64::MAX;
        for eps in [0.1, 0.3, 0.7, 1.2, 1.9] {
            let z = required_samples(eps, 0.1, 1.0, s).unwrap();
            assert!(z <= last);
            last = z;
        }
        let mut last = 0;
        for delta in [0.5, 0.1, 0.01, 1e-4] {
            let z = required_samples(0.7, delta, 1.0, s).unwrap();
            assert!(z >= last);
            last = z;
        }
    }

    #[test]
    fn sample_bound_preconditions() {
        let s = sizes(4, 4);
        assert!(required_samples(0.7, 0.0, 1.0, s).is_err());
        assert!(required_samples(0.7, 1.5, 1.0, s).is_err());
        assert!(required_samples(2.0, 0.1, 1.0, s).is_err());
        assert!(required_samples(0.0, 0.1, 1.0, s).is_err());
        assert!(required_samples(0.7, 0.1, -1.0, s).is_err());
    }
}
