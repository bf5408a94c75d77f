use super::special::{chi_square_sf, normal_sf};
use super::{check_finite, StatsError, TestMethod, TestResult};

/// Largest pooled size for which Mann-Whitney uses the exact null
/// distribution (only when there are no ties).
pub const MWU_EXACT_MAX_N: usize = 16;

/// Largest number of non-zero differences for which the signed-rank test
/// uses the exact null distribution.
pub const WILCOXON_EXACT_MAX_N: usize = 12;

/// Midranks (1-based) and the sizes of all tie groups.
pub fn midranks(values: &[f64]) -> (Vec<f64>, Vec<usize>) {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut ties = Vec::new();
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        // positions i..=j share the average of ranks i+1..=j+1
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &k in &order[i..=j] {
            ranks[k] = avg;
        }
        if j > i {
            ties.push(j - i + 1);
        }
        i = j + 1;
    }
    (ranks, ties)
}

fn tie_term(ties: &[usize]) -> f64 {
    ties.iter()
        .map(|&t| {
            let t = t as f64;
            t * t * t - t
        })
        .sum()
}

/// `(U1, U2)` with midrank tie handling; `U1` counts wins of `a` over `b`.
pub fn u_statistics(a: &[f64], b: &[f64]) -> Result<(f64, f64), StatsError> {
    if a.is_empty() || b.is_empty() {
        return Err(StatsError::EmptySample);
    }
    check_finite(a)?;
    check_finite(b)?;
    let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    let (ranks, _) = midranks(&pooled);
    let n1 = a.len() as f64;
    let r1: f64 = ranks[..a.len()].iter().sum();
    let u1 = r1 - n1 * (n1 + 1.0) / 2.0;
    Ok((u1, n1 * b.len() as f64 - u1))
}

/// Number of rank assignments giving each value of `U1` (0..=n1*n2).
fn mwu_null_counts(n1: usize, n2: usize) -> Vec<u128> {
    // counts[i][j] = distribution for i first-sample and j second-sample items
    let max = n1 * n2;
    let mut table = vec![vec![Vec::<u128>::new(); n2 + 1]; n1 + 1];
    for i in 0..=n1 {
        for j in 0..=n2 {
            let mut dist = vec![0u128; i * j + 1];
            if i == 0 || j == 0 {
                dist[0] = 1;
            } else {
                // the largest pooled value belongs to sample one (beats all j)
                // or to sample two
                for (u, c) in table[i - 1][j].iter().enumerate() {
                    dist[u + j] += c;
                }
                for (u, c) in table[i][j - 1].iter().enumerate() {
                    dist[u] += c;
                }
            }
            table[i][j] = dist;
        }
    }
    let out = std::mem::take(&mut table[n1][n2]);
    debug_assert_eq!(out.len(), max + 1);
    out
}

fn mwu_exact_p(n1: usize, n2: usize, u1: f64) -> f64 {
    let counts = mwu_null_counts(n1, n2);
    let mn = (n1 * n2) as i64;
    let obs = (2.0 * u1).round() as i64 - mn;
    let total: u128 = counts.iter().sum();
    let extreme: u128 = counts
        .iter()
        .enumerate()
        .filter(|&(u, _)| (2 * u as i64 - mn).abs() >= obs.abs())
        .map(|(_, c)| c)
        .sum();
    extreme as f64 / total as f64
}

/// Mann-Whitney U test. Reports `min(U1, U2)`. Uses the exact null
/// distribution for tie-free samples with `n1 + n2 <= 16`, otherwise the
/// normal approximation with tie-corrected variance and continuity
/// correction. An all-tied pool has no evidence either way and yields p = 1.
pub fn mann_whitney_u(a: &[f64], b: &[f64]) -> Result<TestResult, StatsError> {
    let (u1, u2) = u_statistics(a, b)?;
    let (n1, n2) = (a.len(), b.len());
    let n = n1 + n2;
    let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    let (_, ties) = midranks(&pooled);
    let statistic = u1.min(u2);

    let p = if ties.is_empty() && n <= MWU_EXACT_MAX_N {
        mwu_exact_p(n1, n2, u1)
    } else {
        let (n1f, n2f, nf) = (n1 as f64, n2 as f64, n as f64);
        let mean = n1f * n2f / 2.0;
        let var = n1f * n2f / 12.0 * ((nf + 1.0) - tie_term(&ties) / (nf * (nf - 1.0)));
        if var <= 0.0 {
            1.0
        } else {
            let z = ((u1 - mean).abs() - 0.5).max(0.0) / var.sqrt();
            2.0 * normal_sf(z)
        }
    };
    Ok(TestResult::new(TestMethod::MannWhitney, statistic, p, vec![n1, n2]))
}

/// Kruskal-Wallis H with tie correction; p from chi-square with `k - 1` dof.
pub fn kruskal_wallis<G: AsRef<[f64]>>(groups: &[G]) -> Result<TestResult, StatsError> {
    let k = groups.len();
    if k < 2 {
        return Err(StatsError::TooFewObservations { needed: 2, got: k });
    }
    if groups.iter().any(|g| g.as_ref().is_empty()) {
        return Err(StatsError::EmptySample);
    }
    let sizes: Vec<usize> = groups.iter().map(|g| g.as_ref().len()).collect();
    let n: usize = sizes.iter().sum();
    if n < 5 {
        return Err(StatsError::TooFewObservations { needed: 5, got: n });
    }
    let pooled: Vec<f64> = groups.iter().flat_map(|g| g.as_ref().iter().copied()).collect();
    check_finite(&pooled)?;
    let (ranks, ties) = midranks(&pooled);
    let nf = n as f64;
    let correction = 1.0 - tie_term(&ties) / (nf * nf * nf - nf);
    if correction <= 0.0 {
        return Err(StatsError::AllTied);
    }
    let mut offset = 0;
    let mut sum = 0.0;
    for &size in &sizes {
        let r: f64 = ranks[offset..offset + size].iter().sum();
        sum += r * r / size as f64;
        offset += size;
    }
    let h = (12.0 / (nf * (nf + 1.0)) * sum - 3.0 * (nf + 1.0)) / correction;
    let h = h.max(0.0);
    let p = chi_square_sf(h, (k - 1) as f64)?;
    Ok(TestResult::new(TestMethod::KruskalWallis, h, p, sizes))
}

/// Counts of `W+` over all sign assignments, indexed by doubled rank sum.
fn signed_rank_null_counts(doubled_ranks: &[u64]) -> Vec<u64> {
    let total: u64 = doubled_ranks.iter().sum();
    let mut counts = vec![0u64; total as usize + 1];
    counts[0] = 1;
    let mut reach = 0usize;
    for &r in doubled_ranks {
        let r = r as usize;
        for s in (0..=reach).rev() {
            if counts[s] > 0 {
                counts[s + r] += counts[s];
            }
        }
        reach += r;
    }
    counts
}

/// Wilcoxon signed-rank test on `first - second`. Zero differences are
/// dropped; at least five non-zero differences are required. Reports
/// `min(W+, W-)`; exact for up to 12 non-zero differences (ties included),
/// normal approximation with continuity correction above.
pub fn wilcoxon_signed_rank(pairs: &[(f64, f64)]) -> Result<TestResult, StatsError> {
    let diffs: Vec<f64> = pairs.iter().map(|(a, b)| a - b).collect();
    check_finite(&diffs)?;
    let nonzero: Vec<f64> = diffs.into_iter().filter(|d| *d != 0.0).collect();
    if nonzero.is_empty() {
        return Err(StatsError::AllZeroDifferences);
    }
    let n = nonzero.len();
    if n < 5 {
        return Err(StatsError::TooFewObservations { needed: 5, got: n });
    }
    let abs: Vec<f64> = nonzero.iter().map(|d| d.abs()).collect();
    let (ranks, ties) = midranks(&abs);
    let w_plus: f64 = ranks
        .iter()
        .zip(&nonzero)
        .filter(|(_, d)| **d > 0.0)
        .map(|(r, _)| r)
        .sum();
    let nf = n as f64;
    let total = nf * (nf + 1.0) / 2.0;
    let statistic = w_plus.min(total - w_plus);

    let p = if n <= WILCOXON_EXACT_MAX_N {
        // midranks are multiples of 1/2, so doubled ranks are integers
        let doubled: Vec<u64> = ranks.iter().map(|r| (2.0 * r).round() as u64).collect();
        let counts = signed_rank_null_counts(&doubled);
        let total2: i64 = doubled.iter().sum::<u64>() as i64;
        let obs = ((2.0 * w_plus).round() as i64 * 2 - total2).abs();
        let all: u64 = counts.iter().sum();
        let extreme: u64 = counts
            .iter()
            .enumerate()
            .filter(|&(s, _)| (2 * s as i64 - total2).abs() >= obs)
            .map(|(_, c)| c)
            .sum();
        extreme as f64 / all as f64
    } else {
        let mean = total / 2.0;
        let var = nf * (nf + 1.0) * (2.0 * nf + 1.0) / 24.0 - tie_term(&ties) / 48.0;
        let z = ((w_plus - mean).abs() - 0.5).max(0.0) / var.sqrt();
        2.0 * normal_sf(z)
    };
    Ok(TestResult::new(TestMethod::WilcoxonSignedRank, statistic, p, vec![n]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn midranks_average_ties() {
        let (r, t) = midranks(&[3.0, 1.0, 3.0, 2.0]);
        assert_eq!(r, vec![3.5, 1.0, 3.5, 2.0]);
        assert_eq!(t, vec![2]);
    }

    #[test]
    fn mwu_complete_overlap() {
        let r = mann_whitney_u(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(r.statistic, 4.5);
        assert_eq!(r.p_value, 1.0);
    }

    #[test]
    fn mwu_complete_separation() {
        let r = mann_whitney_u(&[1.0, 2.0], &[3.0, 4.0]).unwrap();
        assert_eq!(r.statistic, 0.0);
        // exact: 2 of the 6 assignments are as extreme
        assert!((r.p_value - 2.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn mwu_all_tied_pool_is_uninformative() {
        let r = mann_whitney_u(&[0.0; 20], &[0.0; 20]).unwrap();
        assert_eq!(r.p_value, 1.0);
    }

    #[test]
    fn mwu_empty_sample() {
        assert_eq!(mann_whitney_u(&[], &[1.0]), Err(StatsError::EmptySample));
    }

    #[test]
    fn mwu_null_counts_sum_to_binomial() {
        let c = mwu_null_counts(4, 6);
        assert_eq!(c.iter().sum::<u128>(), 210);
        assert_eq!(c.len(), 25);
        assert!(c.iter().zip(c.iter().rev()).all(|(a, b)| a == b));
    }

    #[test]
    fn kruskal_wallis_hand_value() {
        let r = kruskal_wallis(&[[1.0, 2.0, 3.0], [4.0, 5.0, 6.0], [7.0, 8.0, 9.0]]).unwrap();
        assert!((r.statistic - 7.2).abs() < 1e-9);
        assert!((r.p_value - (-3.6f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn kruskal_wallis_identical_groups() {
        let r = kruskal_wallis(&[vec![1.0, 5.0, 2.0], vec![2.0, 1.0, 5.0]]).unwrap();
        assert!(r.statistic.abs() < 1e-12);
        assert!((r.p_value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn kruskal_wallis_errors() {
        assert_eq!(kruskal_wallis(&[vec![2.0; 3], vec![2.0; 3]]), Err(StatsError::AllTied));
        assert!(kruskal_wallis(&[vec![1.0, 2.0, 3.0, 4.0, 5.0]]).is_err());
        assert!(kruskal_wallis(&[vec![1.0, 2.0], vec![3.0, 4.0]]).is_err());
        assert_eq!(
            kruskal_wallis(&[vec![1.0, 2.0, 3.0, 4.0], vec![]]),
            Err(StatsError::EmptySample)
        );
    }

    #[test]
    fn wilcoxon_symmetric_differences() {
        let pairs: Vec<(f64, f64)> = [1.0, -1.0, 2.0, -2.0, 3.0, -3.0].iter().map(|d| (*d, 0.0)).collect();
        assert_eq!(wilcoxon_signed_rank(&pairs).unwrap().p_value, 1.0);
    }

    #[test]
    fn wilcoxon_all_positive_six() {
        let pairs: Vec<(f64, f64)> = (1..=6).map(|d| (d as f64 + 10.0, 10.0)).collect();
        let r = wilcoxon_signed_rank(&pairs).unwrap();
        assert_eq!(r.statistic, 0.0);
        assert_eq!(r.p_value, 2.0 / 64.0);
    }

    #[test]
    fn wilcoxon_errors() {
        let zeros = vec![(1.0, 1.0); 8];
        assert_eq!(wilcoxon_signed_rank(&zeros), Err(StatsError::AllZeroDifferences));
        let four = vec![(2.0, 1.0), (3.0, 1.0), (1.0, 2.0), (5.0, 1.0), (1.0, 1.0)];
        assert_eq!(
            wilcoxon_signed_rank(&four),
            Err(StatsError::TooFewObservations { needed: 5, got: 4 })
        );
    }
}
