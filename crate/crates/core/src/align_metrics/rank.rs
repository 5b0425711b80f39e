//! Rank correlation over aligned reference positions, rescaled to `[0, 1]`.

use crate::error::{Error, Result};

fn check(positions: &[usize]) -> Result<()> {
    if positions.len() < 2 {
        return Err(Error::UndefinedRank(format!(
            "need at least 2 aligned positions, got {}",
            positions.len()
        )));
    }
    let mut sorted = positions.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::UndefinedRank("aligned positions must be distinct".into()));
    }
    Ok(())
}

/// Kendall's τ: (concordant − discordant) / (n(n−1)/2).
pub fn kendall_tau(positions: &[usize]) -> Result<f64> {
    check(positions)?;
    let n = positions.len();
    let mut concordant = 0i64;
    let mut discordant = 0i64;
    for i in 0..n {
        for j in i + 1..n {
            if positions[i] < positions[j] {
                concordant += 1;
            } else {
                discordant += 1;
            }
        }
    }
    let pairs = (n * (n - 1) / 2) as f64;
    Ok((concordant - discordant) as f64 / pairs)
}

/// Spearman's ρ = 1 − 6Σd²/(n(n²−1)), with d the difference between a
/// position's rank among the aligned positions and its index.
pub fn spearman_rho(positions: &[usize]) -> Result<f64> {
    check(positions)?;
    let n = positions.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_unstable_by_key(|&i| positions[i]);
    let mut d2 = 0u64;
    for (rank, &i) in order.iter().enumerate() {
        let d = rank.abs_diff(i) as u64;
        d2 += d * d;
    }
    let n = n as f64;
    Ok(1.0 - 6.0 * d2 as f64 / (n * (n * n - 1.0)))
}

/// Normalized Kendall's τ, `(τ + 1) / 2`.
pub fn kendall_nkt(positions: &[usize]) -> Result<f64> {
    Ok((kendall_tau(positions)? + 1.0) / 2.0)
}

/// Normalized Spearman's ρ, `(ρ + 1) / 2`.
pub fn spearman_nsr(positions: &[usize]) -> Result<f64> {
    Ok((spearman_rho(positions)? + 1.0) / 2.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kendall_examples() {
        assert_eq!(kendall_nkt(&[1, 2, 3, 4]).unwrap(), 1.0);
        assert_eq!(kendall_nkt(&[4, 3, 2, 1]).unwrap(), 0.0);
        assert_eq!(kendall_tau(&[1, 2, 4, 3]).unwrap(), 4.0 / 6.0);
        assert!((kendall_nkt(&[1, 2, 4, 3]).unwrap() - 5.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn spearman_examples() {
        assert_eq!(spearman_nsr(&[1, 2, 3]).unwrap(), 1.0);
        assert_eq!(spearman_nsr(&[3, 2, 1]).unwrap(), 0.0);
        assert!((spearman_rho(&[1, 3, 2, 4]).unwrap() - 0.8).abs() < 1e-15);
        assert!((spearman_nsr(&[1, 3, 2, 4]).unwrap() - 0.9).abs() < 1e-15);
    }

    #[test]
    fn undefined_inputs() {
        assert!(matches!(kendall_nkt(&[1]), Err(Error::UndefinedRank(_))));
        assert!(matches!(spearman_nsr(&[]), Err(Error::UndefinedRank(_))));
        assert!(matches!(kendall_nkt(&[2, 2]), Err(Error::UndefinedRank(_))));
    }

    #[test]
    fn positions_need_not_be_dense() {
        assert_eq!(kendall_nkt(&[10, 40, 70]).unwrap(), 1.0);
        assert_eq!(spearman_nsr(&[0, 5, 9]).unwrap(), 1.0);
    }
}
