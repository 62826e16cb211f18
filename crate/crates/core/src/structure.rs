//! Decides the two structural conditions on a coupling matrix that the
//! interaction-induced Lee-Yang bounds require.
//!
//! Condition (i): a perfect matching (dimer covering) of the sites whose
//! matched couplings are all >= some ϰ > 0. We report the best possible ϰ,
//! i.e. the maximum over perfect matchings of the minimum matched entry,
//! found by binary search over entry values with a bitmask-DP feasibility
//! check.
//!
//! Condition (ii): a pair partition such that both members of each pair
//! couple identically to every outside site. Found by backtracking over the
//! pair-compatibility graph.
//!
//! The two conditions need not be witnessed by the same partition; the report
//! also carries a joint partition satisfying both at once (with its own
//! bottleneck value) when one exists, since the condition-(ii) branch of the
//! theorem draws its ϰ from such a partition.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::models::CouplingMatrix;

/// Bitmask-DP cap; 2^24 subset table is the practical memory/time limit.
pub const MATCHING_DP_MAX_SITES: usize = 24;

/// Absolute tolerance for the exact column equality of condition (ii); only
/// absorbs parse round-trip noise, generators produce exact entries.
pub const CONDITION_II_TOL: f64 = 1e-12;

/// A pair partition witnessing both conditions simultaneously.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct JointPartition {
    pub pairs: Vec<(usize, usize)>,
    /// Minimum matched entry, maximized over qualifying partitions.
    pub kappa: f64,
}

/// Outcome of the structural checks. Site indices are 0-based.
#[derive(Clone, Debug, Serialize)]
pub struct MatchingReport {
    pub has_perfect_matching: bool,
    /// Maximum over perfect matchings of the minimum matched entry; 0 when no
    /// perfect matching on positive entries exists.
    pub bottleneck_kappa: f64,
    /// Lexicographically smallest optimal matching (empty when none exists).
    pub matching: Vec<(usize, usize)>,
    /// A partition with identical external coupling columns, when one exists.
    pub condition_ii_partition: Option<Vec<(usize, usize)>>,
    /// Partition satisfying both conditions at once, when one exists.
    pub joint: Option<JointPartition>,
}

/// Full structural report for condition (i) and (ii).
pub fn bottleneck_matching(k: &CouplingMatrix) -> Result<MatchingReport> {
    let n = k.n();
    if n > MATCHING_DP_MAX_SITES {
        return Err(Error::MatchingTooLarge {
            n,
            cap: MATCHING_DP_MAX_SITES,
        });
    }
    let mut report = MatchingReport {
        has_perfect_matching: false,
        bottleneck_kappa: 0.0,
        matching: Vec::new(),
        condition_ii_partition: None,
        joint: None,
    };
    if !n.is_multiple_of(2) {
        return Ok(report);
    }

    if let Some((pairs, kappa)) = max_min_matching(n, |i, j| k.get(i, j)) {
        report.has_perfect_matching = true;
        report.bottleneck_kappa = kappa;
        report.matching = pairs;
    }

    let compat = compatibility(k);
    report.condition_ii_partition = find_compat_partition(n, &compat);
    if report.condition_ii_partition.is_some() {
        // restrict the bottleneck search to compatible pairs
        report.joint = max_min_matching(n, |i, j| {
            if compat[i] >> j & 1 == 1 {
                k.get(i, j)
            } else {
                0.0
            }
        })
        .map(|(pairs, kappa)| JointPartition { pairs, kappa });
    }
    Ok(report)
}

/// A pair partition satisfying condition (ii), or None. Deterministic:
/// returns the lexicographically smallest one.
pub fn pair_partition_condition_ii(k: &CouplingMatrix) -> Option<Vec<(usize, usize)>> {
    let n = k.n();
    if !n.is_multiple_of(2) || n > MATCHING_DP_MAX_SITES {
        return None;
    }
    find_compat_partition(n, &compatibility(k))
}

/// Independent re-verification of a condition-(ii) partition over all (pair,
/// outside-site) combinations.
pub fn verify_condition_ii(k: &CouplingMatrix, pairs: &[(usize, usize)]) -> bool {
    let n = k.n();
    let mut seen = vec![false; n];
    for &(i, j) in pairs {
        if i >= n || j >= n || i == j || seen[i] || seen[j] {
            return false;
        }
        seen[i] = true;
        seen[j] = true;
        for s in 0..n {
            if s != i && s != j && (k.get(s, i) - k.get(s, j)).abs() > CONDITION_II_TOL {
                return false;
            }
        }
    }
    seen.iter().all(|&s| s)
}

/// Pair-compatibility bitmasks: bit j of row i set when rows i and j agree
/// off {i, j}.
fn compatibility(k: &CouplingMatrix) -> Vec<u32> {
    let n = k.n();
    let mut compat = vec![0u32; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let ok = (0..n)
                .filter(|&s| s != i && s != j)
                .all(|s| (k.get(s, i) - k.get(s, j)).abs() <= CONDITION_II_TOL);
            if ok {
                compat[i] |= 1 << j;
                compat[j] |= 1 << i;
            }
        }
    }
    compat
}

/// Backtracking perfect matching on an adjacency bitmask graph; always pairs
/// the lowest free vertex first, so the first hit is lexicographically
/// smallest.
fn find_compat_partition(n: usize, adj: &[u32]) -> Option<Vec<(usize, usize)>> {
    fn rec(free: u32, adj: &[u32], out: &mut Vec<(usize, usize)>) -> bool {
        if free == 0 {
            return true;
        }
        let i = free.trailing_zeros() as usize;
        let mut candidates = adj[i] & free & !(1 << i);
        while candidates != 0 {
            let j = candidates.trailing_zeros() as usize;
            candidates &= candidates - 1;
            out.push((i, j));
            if rec(free & !(1 << i) & !(1 << j), adj, out) {
                return true;
            }
            out.pop();
        }
        false
    }
    let mut out = Vec::with_capacity(n / 2);
    rec((1u32 << n) - 1, adj, &mut out).then_some(out)
}

/// Maximum over perfect matchings of the minimum matched weight, over edges
/// with weight > 0. Returns the lexicographically smallest optimal matching.
fn max_min_matching(
    n: usize,
    weight: impl Fn(usize, usize) -> f64,
) -> Option<(Vec<(usize, usize)>, f64)> {
    let mut values: Vec<f64> = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let w = weight(i, j);
            if w > 0.0 {
                values.push(w);
            }
        }
    }
    values.sort_by(f64::total_cmp);
    values.dedup();
    if values.is_empty() {
        return None;
    }

    let adj_at = |t: f64| -> Vec<u32> {
        let mut adj = vec![0u32; n];
        for i in 0..n {
            for j in (i + 1)..n {
                if weight(i, j) >= t {
                    adj[i] |= 1 << j;
                    adj[j] |= 1 << i;
                }
            }
        }
        adj
    };

    if !perfect_matching_dp(n, &adj_at(values[0])).0 {
        return None;
    }
    // largest feasible threshold by bisection over distinct values
    let (mut lo, mut hi) = (0usize, values.len() - 1);
    while lo < hi {
        let mid = (lo + hi).div_ceil(2);
        if perfect_matching_dp(n, &adj_at(values[mid])).0 {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    let kappa = values[lo];
    let adj = adj_at(kappa);
    let (feasible, dp) = perfect_matching_dp(n, &adj);
    debug_assert!(feasible);

    // lexicographically smallest matching achieving the bottleneck
    let mut pairs = Vec::with_capacity(n / 2);
    let mut mask = (1u32 << n) - 1;
    while mask != 0 {
        let i = mask.trailing_zeros() as usize;
        let mut candidates = adj[i] & mask & !(1 << i);
        let mut advanced = false;
        while candidates != 0 {
            let j = candidates.trailing_zeros() as usize;
            candidates &= candidates - 1;
            let rest = mask & !(1 << i) & !(1 << j);
            if dp[rest as usize] {
                pairs.push((i, j));
                mask = rest;
                advanced = true;
                break;
            }
        }
        debug_assert!(advanced, "dp table inconsistent");
        if !advanced {
            return None;
        }
    }
    Some((pairs, kappa))
}

/// Subset DP for perfect-matching existence; dp[mask] is true when the
/// vertices of `mask` can be perfectly matched.
fn perfect_matching_dp(n: usize, adj: &[u32]) -> (bool, Vec<bool>) {
    let full = (1u32 << n) as usize;
    let mut dp = vec![false; full];
    dp[0] = true;
    for mask in 1..full {
        let i = (mask as u32).trailing_zeros() as usize;
        let mut candidates = adj[i] & mask as u32 & !(1 << i);
        while candidates != 0 {
            let j = candidates.trailing_zeros() as usize;
            candidates &= candidates - 1;
            if dp[mask & !(1 << i) & !(1usize << j)] {
                dp[mask] = true;
                break;
            }
        }
    }
    (dp[full - 1], dp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::HierarchySpec;

    #[test]
    fn chain4_bottleneck() {
        let k = CouplingMatrix::chain(4, 1.0, false).unwrap();
        let r = bottleneck_matching(&k).unwrap();
        assert!(r.has_perfect_matching);
        assert_eq!(r.bottleneck_kappa, 1.0);
        // the open 4-path has exactly one perfect matching
        assert_eq!(r.matching, vec![(0, 1), (2, 3)]);
        // nearest-neighbor chains fail condition (ii)
        assert_eq!(r.condition_ii_partition, None);
        assert_eq!(r.joint, None);

        let k = CouplingMatrix::chain(4, 0.5, false).unwrap();
        let r = bottleneck_matching(&k).unwrap();
        assert_eq!(r.bottleneck_kappa, 0.5);
        assert_eq!(r.matching, vec![(0, 1), (2, 3)]);
    }

    #[test]
    fn zero_entries_are_non_edges() {
        let k = CouplingMatrix::new(2, vec![0.0; 4]).unwrap();
        let r = bottleneck_matching(&k).unwrap();
        assert!(!r.has_perfect_matching);
        assert_eq!(r.bottleneck_kappa, 0.0);
        // condition (ii) is vacuous for a single pair, so a partition exists
        assert_eq!(r.condition_ii_partition, Some(vec![(0, 1)]));
        // ... but no joint partition, since the matched entry is 0
        assert_eq!(r.joint, None);
    }

    #[test]
    fn odd_site_count() {
        let k = CouplingMatrix::chain(3, 1.0, false).unwrap();
        let r = bottleneck_matching(&k).unwrap();
        assert!(!r.has_perfect_matching);
        assert_eq!(r.matching, vec![]);
        assert_eq!(pair_partition_condition_ii(&k), None);
    }

    #[test]
    fn hierarchical_bottleneck_prefers_stronger_level() {
        let spec = HierarchySpec::new(vec![2.0, 1.0]).unwrap();
        let k = CouplingMatrix::hierarchical(&spec);
        let r = bottleneck_matching(&k).unwrap();
        assert_eq!(r.bottleneck_kappa, 2.0);
        assert_eq!(r.matching, vec![(0, 1), (2, 3)]);

        // inverted levels: the cross pairing wins the bottleneck, but the
        // condition-(ii) partition is still the dyadic one
        let spec = HierarchySpec::new(vec![1.0, 2.0]).unwrap();
        let k = CouplingMatrix::hierarchical(&spec);
        let r = bottleneck_matching(&k).unwrap();
        assert_eq!(r.bottleneck_kappa, 2.0);
        assert_eq!(r.matching, vec![(0, 2), (1, 3)]);
        assert_eq!(r.condition_ii_partition, Some(vec![(0, 1), (2, 3)]));
        let joint = r.joint.unwrap();
        assert_eq!(joint.pairs, vec![(0, 1), (2, 3)]);
        assert_eq!(joint.kappa, 1.0);
    }

    #[test]
    fn hierarchical_satisfies_condition_ii() {
        for levels in [vec![1.0], vec![0.5, 0.25], vec![1.0, 0.8, 0.6]] {
            let spec = HierarchySpec::new(levels).unwrap();
            let k = CouplingMatrix::hierarchical(&spec);
            let pairs = pair_partition_condition_ii(&k).expect("dyadic partition");
            assert!(verify_condition_ii(&k, &pairs));
            let expected: Vec<(usize, usize)> =
                (0..k.n() / 2).map(|b| (2 * b, 2 * b + 1)).collect();
            assert_eq!(pairs, expected);
        }
    }

    #[test]
    fn chain_fails_condition_ii() {
        // rows 0 and 1 differ at column 2: K[2][0] = 0 != K[2][1] = 1
        for n in [4usize, 6, 8] {
            let k = CouplingMatrix::chain(n, 1.0, false).unwrap();
            assert_eq!(pair_partition_condition_ii(&k), None);
        }
    }

    #[test]
    fn curie_weiss_any_pairing_works() {
        let c = 0.3;
        let n = 4;
        let mut e = vec![c; n * n];
        for i in 0..n {
            e[i * n + i] = 0.0;
        }
        let k = CouplingMatrix::new(n, e).unwrap();
        let pairs = pair_partition_condition_ii(&k).unwrap();
        assert_eq!(pairs, vec![(0, 1), (2, 3)]);
        assert!(verify_condition_ii(&k, &pairs));
        let r = bottleneck_matching(&k).unwrap();
        assert_eq!(r.bottleneck_kappa, c);
        assert_eq!(r.joint.unwrap().kappa, c);
    }

    #[test]
    fn dp_cap() {
        let k = CouplingMatrix::zeros(MATCHING_DP_MAX_SITES + 2);
        assert!(matches!(
            bottleneck_matching(&k),
            Err(Error::MatchingTooLarge { .. })
        ));
    }

    #[test]
    fn verify_rejects_bad_partitions() {
        let spec = HierarchySpec::new(vec![1.0, 0.5]).unwrap();
        let k = CouplingMatrix::hierarchical(&spec);
        assert!(!verify_condition_ii(&k, &[(0, 2), (1, 3)]));
        assert!(!verify_condition_ii(&k, &[(0, 1)]));
        assert!(!verify_condition_ii(&k, &[(0, 1), (0, 2)]));
    }
}
