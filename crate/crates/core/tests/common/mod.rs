#![allow(dead_code)]

use blaids::bandit::EnvironmentRealization;
use blaids::info::Distribution;
use blaids::matrix::Matrix;
use blaids::rd::DistortionMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random point on the simplex with every coordinate positive.
pub fn simplex(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    let w: Vec<f64> = (0..n).map(|_| -(1.0 - rng.random::<f64>()).ln() + 1e-3).collect();
    let s: f64 = w.iter().sum();
    w.into_iter().map(|x| x / s).collect()
}

/// Random source and distortion with entries in [0, 1), sizes in `2..=max`.
pub fn instance(rng: &mut impl Rng, max: usize) -> (Distribution<f64>, DistortionMatrix<f64>) {
    let rows = rng.random_range(2..=max);
    let cols = rng.random_range(2..=max);
    let src = Distribution::from_probs(simplex(rng, rows)).unwrap();
    let d: Vec<f64> = (0..rows * cols).map(|_| rng.random()).collect();
    (src, DistortionMatrix::from_matrix(Matrix::from_vec(rows, cols, d).unwrap()).unwrap())
}

pub fn h2(x: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        0.0
    } else {
        -x * x.log2() - (1.0 - x) * (1.0 - x).log2()
    }
}

pub fn ratio(pi: &[f64], delta: &[f64], v: &[f64]) -> f64 {
    let num: f64 = pi.iter().zip(delta).map(|(p, d)| p * d).sum();
    let den: f64 = pi.iter().zip(v).map(|(p, x)| p * x).sum();
    if num == 0.0 {
        0.0
    } else if den <= 0.0 {
        f64::INFINITY
    } else {
        num * num / den
    }
}

/// Minimum ratio over every pair of arms on a grid of mixing weights `k / steps`.
pub fn grid_pair_min(delta: &[f64], v: &[f64], steps: usize) -> f64 {
    let n = delta.len();
    let mut best = f64::INFINITY;
    let mut pi = vec![0.0; n];
    for i in 0..n {
        for j in i..n {
            for k in 0..=steps {
                let w = k as f64 / steps as f64;
                pi.iter_mut().for_each(|p| *p = 0.0);
                pi[i] += w;
                pi[j] += 1.0 - w;
                best = best.min(ratio(&pi, delta, v));
            }
        }
    }
    best
}

pub fn random_samples(rng: &mut impl Rng, z: usize, arms: usize) -> Vec<EnvironmentRealization> {
    (0..z).map(|_| EnvironmentRealization::new((0..arms).map(|_| rng.random()).collect())).collect()
}

/// Plain linear-domain Blahut-Arimoto, written independently of the library.
pub fn reference_ba(p: &[f64], d: &[Vec<f64>], beta: f64, iters: usize) -> (Vec<Vec<f64>>, Vec<f64>) {
    let m = d[0].len();
    let mut q = vec![1.0 / m as f64; m];
    let mut ch = vec![vec![0.0; m]; p.len()];
    for _ in 0..iters {
        for (e, row) in ch.iter_mut().enumerate() {
            let w: Vec<f64> = (0..m).map(|a| q[a] * (-beta * d[e][a]).exp2()).collect();
            let z: f64 = w.iter().sum();
            for a in 0..m {
                row[a] = w[a] / z;
            }
        }
        for a in 0..m {
            q[a] = (0..p.len()).map(|e| p[e] * ch[e][a]).sum();
        }
    }
    (ch, q)
}
