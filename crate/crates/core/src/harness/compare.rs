//! Blahut-Arimoto targets versus the hand-crafted satisficing target.

use crate::agents::satisficing_arm;
use crate::bandit::{empirical_source, sample_environment, squared_regret_distortion, BanditSpec, EnvironmentRealization};
use crate::error::{Error, Result};
use crate::harness::records::{RdPoint, TargetMethod};
use crate::matrix::Matrix;
use crate::rd::{evaluate_channel, rd_curve, BaConfig};
use crate::streams::{stream, Purpose};

/// Draws `z` prior samples once and evaluates both target families on them.
///
/// BA points come from a curve trace over `betas`; each STS point is the
/// deterministic channel `e ↦ min{a : mean_e(a) ≥ max_e − ε}`.
pub fn compare_targets(
    spec: &BanditSpec,
    betas: &[f64],
    epsilons: &[f64],
    z: usize,
    seed: u64,
    ba: &BaConfig<f64>,
) -> Result<Vec<RdPoint>> {
    if z < 2 {
        return Err(Error::param("z", format!("must be >= 2, got {z}")));
    }
    if let Some(e) = epsilons.iter().find(|e| !(**e >= 0.0)) {
        return Err(Error::param("epsilon", format!("must be >= 0, got {e}")));
    }
    let mut rng = stream(seed, 0, Purpose::Targets);
    let samples = (0..z).map(|_| sample_environment(spec, &mut rng)).collect::<Result<Vec<_>>>()?;
    compare_on_samples(&samples, betas, epsilons, ba)
}

/// [`compare_targets`] on a fixed sample set.
pub fn compare_on_samples(
    samples: &[EnvironmentRealization],
    betas: &[f64],
    epsilons: &[f64],
    ba: &BaConfig<f64>,
) -> Result<Vec<RdPoint>> {
    let n_arms = samples.first().map_or(0, EnvironmentRealization::n_arms);
    let actions: Vec<usize> = (0..n_arms).collect();
    let d = squared_regret_distortion(samples, &actions)?;
    let source = empirical_source(samples.len())?;

    let mut points = Vec::with_capacity(betas.len() + epsilons.len());
    if !betas.is_empty() {
        for p in rd_curve(&source, &d, betas, ba)? {
            points.push(RdPoint { method: TargetMethod::Ba, param: p.beta, rate: p.rate, distortion: p.distortion });
        }
    }
    for &eps in epsilons {
        let mut channel = Matrix::filled(samples.len(), n_arms, 0.0);
        for (e, s) in samples.iter().enumerate() {
            channel.set(e, satisficing_arm(s, eps), 1.0);
        }
        let (rate, distortion) = evaluate_channel(&source, &channel, &d)?;
        points.push(RdPoint { method: TargetMethod::Sts, param: eps, rate, distortion });
    }
    Ok(points)
}

/// Piecewise-linear interpolation of the BA points' rate at `distortion`.
///
/// Outside the traced range the nearest endpoint's rate is used. Returns
/// `None` when there are no BA points.
pub fn interpolate_ba_rate(points: &[RdPoint], distortion: f64) -> Option<f64> {
    let mut curve: Vec<(f64, f64)> =
        points.iter().filter(|p| p.method == TargetMethod::Ba).map(|p| (p.distortion, p.rate)).collect();
    if curve.is_empty() {
        return None;
    }
    curve.sort_by(|a, b| a.0.total_cmp(&b.0).then(b.1.total_cmp(&a.1)));
    let (first, last) = (curve[0], curve[curve.len() - 1]);
    if distortion <= first.0 {
        return Some(first.1);
    }
    if distortion >= last.0 {
        return Some(last.1);
    }
    let k = curve.partition_point(|p| p.0 < distortion);
    let (d0, r0) = curve[k - 1];
    let (d1, r1) = curve[k];
    if d1 == d0 {
        return Some(r0.min(r1));
    }
    Some(r0 + (r1 - r0) * (distortion - d0) / (d1 - d0))
}

/// For each STS point: `(ε, STS rate, interpolated BA rate at its distortion)`.
pub fn dominance_table(points: &[RdPoint]) -> Vec<(f64, f64, f64)> {
    points
        .iter()
        .filter(|p| p.method == TargetMethod::Sts)
        .filter_map(|p| interpolate_ba_rate(points, p.distortion).map(|ba| (p.param, p.rate, ba)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::info::{entropy, Distribution};

    fn env(m: &[f64]) -> EnvironmentRealization {
        EnvironmentRealization::new(m.to_vec())
    }

    #[test]
    fn sts_endpoints() {
        let samples = vec![env(&[0.9, 0.1, 0.5]), env(&[0.2, 0.8, 0.1]), env(&[0.3, 0.4, 0.7]), env(&[0.6, 0.5, 0.1])];
        let pts = compare_on_samples(&samples, &[], &[0.0, 10.0], &BaConfig::default()).unwrap();
        let opt = entropy(&Distribution::from_probs(vec![0.5, 0.25, 0.25]).unwrap());
        assert_eq!(pts[0].distortion, 0.0);
        assert!((pts[0].rate - opt).abs() < 1e-12);
        assert!(pts[1].rate.abs() < 1e-12);
        assert!(pts[1].distortion > 0.0);
    }

    #[test]
    fn interpolation() {
        let ba = |d, r| RdPoint { method: TargetMethod::Ba, param: 0.0, rate: r, distortion: d };
        let pts = vec![ba(0.0, 2.0), ba(0.2, 0.0), ba(0.1, 0.5)];
        assert_eq!(interpolate_ba_rate(&pts, 0.05), Some(1.25));
        assert!((interpolate_ba_rate(&pts, 0.15).unwrap() - 0.25).abs() < 1e-15);
        assert_eq!(interpolate_ba_rate(&pts, 0.5), Some(0.0));
        assert_eq!(interpolate_ba_rate(&[], 0.5), None);
    }

    #[test]
    fn needs_two_samples() {
        let spec = BanditSpec::bernoulli(3, 1.0, 1.0).unwrap();
        assert!(compare_targets(&spec, &[1.0], &[0.0], 1, 0, &BaConfig::default()).is_err());
    }
}
