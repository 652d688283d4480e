//! The block-cycle family that forces three next-best queries per agent.
//!
//! With `n = 2k + 1`, block `i < k` owns agents `2i`, `2i + 1` and houses
//! `2i` (shared first choice) and `2i + 1` (the block's private house).
//! Agent `2i + 1` ranks its own private house second, agent `2i` ranks the
//! private house of the preceding block second. Agent `2k` copies the first
//! two choices of agent `2k - 1`. House `2k` is last for everyone except one
//! special agent, who ranks it third.

use alloc::vec;
use alloc::vec::Vec;

use super::FamilyAdversary;
use crate::combinat::permutations;
use crate::error::{Error, Result};
use crate::types::{AgentId, PreferenceProfile};

/// Largest `k` for which the hybrid and set-compare families are enumerated.
pub const BLOCK_FAMILY_MAX_K: usize = 6;

/// The profile with blocks chained in index order.
pub fn block_cycle_profile(k: usize, special: AgentId) -> Result<PreferenceProfile> {
    let pred: Vec<usize> = (0..k).map(|i| (i + k - 1) % k.max(1)).collect();
    block_cycle_profile_with(k, special, &pred)
}

/// Block `i`'s first agent ranks the private house of block `pred[i]` second.
/// `pred` must be a single cycle through all blocks.
pub fn block_cycle_profile_with(k: usize, special: AgentId, pred: &[usize]) -> Result<PreferenceProfile> {
    if k < 2 {
        return Err(Error::InvalidParameter("block count must be at least 2"));
    }
    let n = 2 * k + 1;
    if special.0 >= n {
        return Err(Error::UnknownAgent(special.0));
    }
    if !is_single_cycle(pred, k) {
        return Err(Error::InvalidParameter("block order must be one cycle"));
    }
    let last = 2 * k;
    let mut rows = Vec::with_capacity(n);
    for a in 0..n {
        let (first, second) = if a == last {
            (2 * k - 2, 2 * k - 1)
        } else if a % 2 == 1 {
            (a - 1, a)
        } else {
            (a, 2 * pred[a / 2] + 1)
        };
        let mut row = vec![first, second];
        if a == special.0 {
            row.push(last);
        }
        row.extend((0..last).filter(|&h| h != first && h != second));
        if a != special.0 {
            row.push(last);
        }
        rows.push(row);
    }
    PreferenceProfile::new(rows)
}

fn is_single_cycle(pred: &[usize], k: usize) -> bool {
    if pred.len() != k || pred.iter().any(|&p| p >= k) {
        return false;
    }
    let mut seen = vec![false; k];
    let mut i = 0;
    for _ in 0..k {
        if seen[i] {
            return false;
        }
        seen[i] = true;
        i = pred[i];
    }
    i == 0
}

/// Every member: each choice of special agent, and with `permute_blocks` also
/// every cyclic chaining of the blocks.
pub fn block_cycle_family(k: usize, permute_blocks: bool) -> Result<Vec<PreferenceProfile>> {
    if permute_blocks && k > BLOCK_FAMILY_MAX_K {
        return Err(Error::InvalidParameter("block family too large to enumerate"));
    }
    let default: Vec<usize> = (0..k).map(|i| (i + k - 1) % k.max(1)).collect();
    let mut chains: Vec<Vec<usize>> = if permute_blocks {
        let idx: Vec<usize> = (0..k).collect();
        permutations(&idx).into_iter().filter(|p| is_single_cycle(p, k)).collect()
    } else {
        vec![default.clone()]
    };
    chains.sort_by_key(|p| *p != default);
    let mut out = Vec::new();
    // the last agent as special and the default chain come first, so ties commit to the canonical profile
    for special in (0..2 * k + 1).rev() {
        for pred in &chains {
            out.push(block_cycle_profile_with(k, AgentId(special), pred)?);
        }
    }
    Ok(out)
}

/// Next-best adversary: the special agent stays undecided until every other
/// agent has revealed a third choice.
pub fn nextbest_block_adversary(k: usize) -> Result<FamilyAdversary> {
    FamilyAdversary::new(block_cycle_family(k, false)?)
}

/// Hybrid adversary: additionally hides how the blocks are chained.
pub fn hybrid_block_adversary(k: usize) -> Result<FamilyAdversary> {
    FamilyAdversary::new(block_cycle_family(k, true)?)
}

/// Set-compare adversary over the same family as the hybrid one.
pub fn setcompare_block_adversary(k: usize) -> Result<FamilyAdversary> {
    hybrid_block_adversary(k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optima::rank_maximal;
    use crate::types::{HouseId, Signature};

    #[test]
    fn two_blocks() {
        let p = block_cycle_profile(2, AgentId(4)).unwrap();
        assert_eq!(
            p.rows(),
            vec![
                vec![0, 3, 1, 2, 4],
                vec![0, 1, 2, 3, 4],
                vec![2, 1, 0, 3, 4],
                vec![2, 3, 0, 1, 4],
                vec![2, 3, 4, 0, 1],
            ]
        );
        assert_eq!(rank_maximal(&p).1, Signature(vec![2, 2, 1, 0, 0]));
    }

    #[test]
    fn non_special_agents_rank_spare_house_last() {
        for k in 2..7 {
            let n = 2 * k + 1;
            for s in 0..n {
                let p = block_cycle_profile(k, AgentId(s)).unwrap();
                for a in 0..n {
                    let r = p.rank(AgentId(a), HouseId(2 * k));
                    assert_eq!(r, if a == s { 3 } else { n });
                }
            }
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(block_cycle_profile(1, AgentId(0)).is_err());
        assert!(block_cycle_profile(2, AgentId(5)).is_err());
        assert!(block_cycle_profile_with(3, AgentId(0), &[0, 2, 1]).is_err());
        assert!(block_cycle_family(7, true).is_err());
    }

    #[test]
    fn family_sizes() {
        assert_eq!(block_cycle_family(3, false).unwrap().len(), 7);
        // (k-1)! cyclic chainings
        assert_eq!(block_cycle_family(4, true).unwrap().len(), 9 * 6);
    }
}
