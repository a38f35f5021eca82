//! Finite-alphabet information measures in bits.
//!
//! | Function | Quantity |
//! |----------|----------|
//! | [`entropy`] | H(p) = -Σ p log2 p |
//! | [`kl_divergence`] | KL(p‖q) = Σ p log2(p/q), +inf off support |
//! | [`mutual_information`] | I(X;Y) = KL(P_XY ‖ P_X × P_Y) |
//! | [`log_sum_exp`] | log Σ exp(v), shifted by the max |
//!
//! Probabilities are validated once, when a [`Distribution`] or
//! [`JointDistribution`] is built; every measure afterwards is infallible
//! except where two alphabets have to agree.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::{plogp_neg, Scalar};

/// Probability vector over a labeled finite alphabet.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution<T> {
    labels: Vec<String>,
    probs: Vec<T>,
}

fn check_labels(labels: &[String]) -> Result<()> {
    let mut seen = HashSet::with_capacity(labels.len());
    for l in labels {
        if !seen.insert(l.as_str()) {
            return Err(Error::InvalidDistribution(format!("duplicate label `{l}`")));
        }
    }
    Ok(())
}

/// Validates nonnegativity and total mass, then rescales to sum exactly one.
fn normalize_mass<T: Scalar>(mass: &mut [T]) -> Result<()> {
    if mass.is_empty() {
        return Err(Error::Empty("probability vector"));
    }
    let mut total = T::zero();
    for (i, &p) in mass.iter().enumerate() {
        if !p.is_finite() || p < T::zero() {
            return Err(Error::InvalidDistribution(format!("entry {i} is {p}")));
        }
        total += p;
    }
    if (total - T::one()).abs() > T::mass_tolerance(mass.len()) {
        return Err(Error::InvalidDistribution(format!("mass sums to {total}, not 1")));
    }
    if total != T::one() {
        for p in mass.iter_mut() {
            *p /= total;
        }
    }
    Ok(())
}

fn index_labels(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

impl<T: Scalar> Distribution<T> {
    pub fn new(labels: Vec<String>, mut probs: Vec<T>) -> Result<Self> {
        if labels.len() != probs.len() {
            return Err(Error::ShapeMismatch {
                expected: format!("{} probabilities", labels.len()),
                got: format!("{}", probs.len()),
            });
        }
        check_labels(&labels)?;
        normalize_mass(&mut probs)?;
        Ok(Self { labels, probs })
    }

    /// Validates like [`Distribution::new`] but keeps the entries as given.
    pub(crate) fn from_probs_exact(probs: Vec<T>) -> Result<Self> {
        let mut scratch = probs.clone();
        normalize_mass(&mut scratch)?;
        Ok(Self { labels: index_labels(probs.len()), probs })
    }

    /// Distribution labeled `0..n`.
    pub fn from_probs(probs: Vec<T>) -> Result<Self> {
        Self::new(index_labels(probs.len()), probs)
    }

    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Empty("alphabet"));
        }
        Ok(Self { labels: index_labels(n), probs: vec![T::one() / T::count(n); n] })
    }

    pub fn uniform_labeled(labels: Vec<String>) -> Result<Self> {
        let n = labels.len();
        Self::new(labels, vec![T::one() / T::count(n.max(1)); n])
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn probs(&self) -> &[T] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    /// ‖self − other‖₁ over identical alphabets.
    pub fn l1_distance(&self, other: &Self) -> Result<T> {
        same_alphabet(&self.labels, &other.labels)?;
        Ok(self.probs.iter().zip(&other.probs).map(|(&a, &b)| (a - b).abs()).sum())
    }
}

fn same_alphabet(a: &[String], b: &[String]) -> Result<()> {
    if a != b {
        return Err(Error::AlphabetMismatch(format!(
            "{} labels vs {} labels (or differing order)",
            a.len(),
            b.len()
        )));
    }
    Ok(())
}

/// Joint probability mass over (row, column) label pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDistribution<T> {
    row_labels: Vec<String>,
    col_labels: Vec<String>,
    mass: Matrix<T>,
}

impl<T: Scalar> JointDistribution<T> {
    pub fn new(row_labels: Vec<String>, col_labels: Vec<String>, mass: Matrix<T>) -> Result<Self> {
        if mass.rows() != row_labels.len() || mass.cols() != col_labels.len() {
            return Err(Error::ShapeMismatch {
                expected: format!("{}x{}", row_labels.len(), col_labels.len()),
                got: format!("{}x{}", mass.rows(), mass.cols()),
            });
        }
        check_labels(&row_labels)?;
        check_labels(&col_labels)?;
        let mut data = mass.as_slice().to_vec();
        normalize_mass(&mut data)?;
        let mass = Matrix::from_vec(mass.rows(), mass.cols(), data)?;
        Ok(Self { row_labels, col_labels, mass })
    }

    /// Joint labeled by row and column index.
    pub fn from_matrix(mass: Matrix<T>) -> Result<Self> {
        Self::new(index_labels(mass.rows()), index_labels(mass.cols()), mass)
    }

    /// `source(e) · channel(ã|e)`; rows of `channel` must be conditional distributions.
    pub fn from_channel(source: &Distribution<T>, channel: &Matrix<T>, col_labels: Vec<String>) -> Result<Self> {
        if channel.rows() != source.len() {
            return Err(Error::ShapeMismatch {
                expected: format!("{} channel rows", source.len()),
                got: format!("{}", channel.rows()),
            });
        }
        let mut mass = channel.clone();
        for (i, &p) in source.probs().iter().enumerate() {
            for v in mass.row_mut(i) {
                *v *= p;
            }
        }
        Self::new(source.labels().to_vec(), col_labels, mass)
    }

    /// Product measure `row × col`.
    pub fn product(row: &Distribution<T>, col: &Distribution<T>) -> Self {
        let mut mass = Matrix::filled(row.len(), col.len(), T::zero());
        for (i, &p) in row.probs().iter().enumerate() {
            for (j, &q) in col.probs().iter().enumerate() {
                mass.set(i, j, p * q);
            }
        }
        Self { row_labels: row.labels().to_vec(), col_labels: col.labels().to_vec(), mass }
    }

    pub fn mass(&self) -> &Matrix<T> {
        &self.mass
    }

    pub fn row_labels(&self) -> &[String] {
        &self.row_labels
    }

    pub fn col_labels(&self) -> &[String] {
        &self.col_labels
    }

    pub fn row_marginal(&self) -> Distribution<T> {
        let probs = self.mass.iter_rows().map(|r| r.iter().copied().sum()).collect();
        Distribution { labels: self.row_labels.clone(), probs }
    }

    pub fn col_marginal(&self) -> Distribution<T> {
        let mut probs = vec![T::zero(); self.mass.cols()];
        for r in self.mass.iter_rows() {
            for (acc, &v) in probs.iter_mut().zip(r) {
                *acc += v;
            }
        }
        Distribution { labels: self.col_labels.clone(), probs }
    }

    pub fn transpose(&self) -> Self {
        Self {
            row_labels: self.col_labels.clone(),
            col_labels: self.row_labels.clone(),
            mass: self.mass.transpose(),
        }
    }

    /// Entropy of the joint, treating each cell as one outcome.
    pub fn joint_entropy(&self) -> T {
        self.mass.as_slice().iter().map(|&p| plogp_neg(p)).sum()
    }
}

/// Shannon entropy in bits, `0 log 0 = 0`.
pub fn entropy<T: Scalar>(p: &Distribution<T>) -> T {
    p.probs.iter().map(|&x| plogp_neg(x)).sum()
}

/// `Σ p log2(p/q)` over raw slices; +inf when `p > 0` meets `q = 0`.
pub(crate) fn kl_slices<T: Scalar>(p: &[T], q: &[T]) -> T {
    let mut acc = T::zero();
    for (&pi, &qi) in p.iter().zip(q) {
        if pi <= T::zero() {
            continue;
        }
        if qi <= T::zero() {
            return T::infinity();
        }
        acc += pi * (pi / qi).log2();
    }
    acc
}

/// KL(p‖q) in bits. Returns `+inf` when p is not absolutely continuous w.r.t. q.
pub fn kl_divergence<T: Scalar>(p: &Distribution<T>, q: &Distribution<T>) -> Result<T> {
    same_alphabet(&p.labels, &q.labels)?;
    Ok(kl_slices(&p.probs, &q.probs))
}

/// KL between two joints on the same pair of alphabets.
pub fn joint_kl_divergence<T: Scalar>(p: &JointDistribution<T>, q: &JointDistribution<T>) -> Result<T> {
    same_alphabet(&p.row_labels, &q.row_labels)?;
    same_alphabet(&p.col_labels, &q.col_labels)?;
    Ok(kl_slices(p.mass.as_slice(), q.mass.as_slice()))
}

/// I(X;Y) = KL(P_XY ‖ P_X × P_Y), in bits.
pub fn mutual_information<T: Scalar>(j: &JointDistribution<T>) -> T {
    let row = j.row_marginal();
    let col = j.col_marginal();
    let mut acc = T::zero();
    for (i, r) in j.mass.iter_rows().enumerate() {
        for (k, &m) in r.iter().enumerate() {
            if m > T::zero() {
                acc += m * (m / row.probs[i] / col.probs[k]).log2();
            }
        }
    }
    // Rounding can leave a tiny negative for independent joints.
    acc.max(T::zero())
}

/// `ln Σ exp(vᵢ)`, stable for large-magnitude inputs.
pub fn log_sum_exp<T: Scalar>(values: &[T]) -> Result<T> {
    let m = values.iter().copied().fold(T::neg_infinity(), T::max);
    if values.is_empty() {
        return Err(Error::Empty("log_sum_exp input"));
    }
    if values.len() == 1 {
        return Ok(values[0]);
    }
    if m == T::neg_infinity() || m == T::infinity() {
        return Ok(m);
    }
    let s: T = values.iter().map(|&v| (v - m).exp()).sum();
    Ok(m + s.ln())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(p: &[f64]) -> Distribution<f64> {
        Distribution::from_probs(p.to_vec()).unwrap()
    }

    #[test]
    fn entropy_examples() {
        assert_eq!(entropy(&d(&[0.5, 0.5])), 1.0);
        assert_eq!(entropy(&d(&[0.0, 1.0, 0.0])), 0.0);
        // -(0.25 log2 0.25 + 0.75 log2 0.75) = 0.5 + 0.75 * 0.415037499...
        assert!((entropy(&d(&[0.25, 0.75])) - 0.811_278_124_459_132_9).abs() < 1e-12);
    }

    #[test]
    fn rejects_invalid_mass() {
        assert!(matches!(Distribution::from_probs(vec![0.6, 0.6]), Err(Error::InvalidDistribution(_))));
        assert!(matches!(Distribution::from_probs(vec![1.2, -0.2]), Err(Error::InvalidDistribution(_))));
        assert!(Distribution::<f64>::from_probs(vec![]).is_err());
        let dup = Distribution::new(vec!["a".into(), "a".into()], vec![0.5, 0.5]);
        assert!(matches!(dup, Err(Error::InvalidDistribution(_))));
    }

    #[test]
    fn renormalizes_within_tolerance() {
        let p = d(&[0.5 + 4e-10, 0.5]);
        let s: f64 = p.probs().iter().sum();
        assert!((s - 1.0).abs() < 1e-15);
    }

    #[test]
    fn kl_examples() {
        let p = d(&[0.3, 0.7]);
        assert_eq!(kl_divergence(&p, &p).unwrap(), 0.0);
        assert!((kl_divergence(&d(&[1.0, 0.0]), &d(&[0.5, 0.5])).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(kl_divergence(&d(&[0.5, 0.5]), &d(&[1.0, 0.0])).unwrap(), f64::INFINITY);
    }

    #[test]
    fn kl_alphabet_mismatch() {
        let q = Distribution::new(vec!["x".into(), "y".into()], vec![0.5, 0.5]).unwrap();
        assert!(matches!(kl_divergence(&d(&[0.5, 0.5]), &q), Err(Error::AlphabetMismatch(_))));
        assert!(kl_divergence(&d(&[0.5, 0.5]), &d(&[0.2, 0.3, 0.5])).is_err());
    }

    #[test]
    fn mutual_information_examples() {
        let indep = JointDistribution::product(&d(&[0.2, 0.8]), &d(&[0.6, 0.4]));
        assert!(mutual_information(&indep).abs() < 1e-12);

        let diag = JointDistribution::from_matrix(Matrix::from_rows(&[vec![0.5_f64, 0.0], vec![0.0, 0.5]]).unwrap()).unwrap();
        assert!((mutual_information(&diag) - 1.0).abs() < 1e-15);

        let j = JointDistribution::from_matrix(Matrix::from_rows(&[vec![0.4, 0.1], vec![0.1, 0.4]]).unwrap()).unwrap();
        // H(X) + H(Y) - H(X,Y) with uniform marginals: 2 - H(0.4,0.1,0.1,0.4)
        let h_joint = -(2.0 * 0.4 * 0.4f64.log2() + 2.0 * 0.1 * 0.1f64.log2());
        let oracle = 2.0 - h_joint;
        assert!((mutual_information(&j) - oracle).abs() < 1e-12);
        assert!((oracle - 0.278_071_905_112_638_3).abs() < 1e-12);
    }

    #[test]
    fn invalid_joint_rejected() {
        let m = Matrix::from_rows(&[vec![0.4, 0.4], vec![0.4, 0.4]]).unwrap();
        assert!(JointDistribution::<f64>::from_matrix(m).is_err());
        let neg = Matrix::from_rows(&[vec![0.6, -0.1], vec![0.25, 0.25]]).unwrap();
        assert!(JointDistribution::<f64>::from_matrix(neg).is_err());
    }

    #[test]
    fn log_sum_exp_examples() {
        assert_eq!(log_sum_exp(&[0.0f64]).unwrap(), 0.0);
        let x = 3.7f64;
        assert!((log_sum_exp(&[x, x]).unwrap() - (x + 2f64.ln())).abs() < 1e-15);
        let v = log_sum_exp(&[-1000.0f64, -1001.0]).unwrap();
        assert!(v.is_finite());
        assert!((v - (-1000.0 + (1.0 + (-1.0f64).exp()).ln())).abs() < 1e-12);
        assert!(log_sum_exp::<f64>(&[]).is_err());
        assert_eq!(log_sum_exp(&[f64::NEG_INFINITY, f64::NEG_INFINITY]).unwrap(), f64::NEG_INFINITY);
    }

    #[test]
    fn works_in_single_precision() {
        let p = Distribution::<f32>::from_probs(vec![0.25, 0.75]).unwrap();
        assert!((entropy(&p) - 0.811_278_1).abs() < 1e-6);
    }
}
