//! Fewest queries an algorithm that already knows the profile needs before it
//! can name a necessarily optimal matching.
//!
//! Only the final revealed state matters, so the search runs over states by
//! increasing total size and stops at the first one that admits a necessarily
//! optimal matching.

use alloc::vec;
use alloc::vec::Vec;

use num_rational::Ratio;

use crate::combinat::{factorial, permutations};
use crate::error::{Error, Result};
use crate::knowledge::{HybridKnowledge, NextBestKnowledge, PartialKnowledge};
use crate::necessity::{is_npo_hybrid, nrm_exists_hybrid, Criterion};
use crate::optima::rank_maximal_run;
use crate::optima::RankTable;
use crate::types::{agents, houses, AgentId, HouseId, Matching, PreferenceProfile};

pub const DEFAULT_STATE_LIMIT: u64 = 20_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OptConfig {
    /// Refuse once this many states have been checked.
    pub state_limit: u64,
    /// Skip states that provably cannot work (per-agent lower bounds).
    pub prune: bool,
}

impl Default for OptConfig {
    fn default() -> Self {
        OptConfig { state_limit: DEFAULT_STATE_LIMIT, prune: true }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OptResult {
    pub queries: usize,
    /// A cheapest revealed state.
    pub knowledge: PartialKnowledge,
    /// A necessarily optimal matching for that state.
    pub matching: Matching,
    /// States checked during the search.
    pub explored: u64,
}

struct Budget {
    explored: u64,
    limit: u64,
}

impl Budget {
    fn tick(&mut self) -> Result<()> {
        self.explored += 1;
        if self.explored > self.limit {
            return Err(Error::BoundExceeded { estimate: self.explored as u128, limit: self.limit as u128 });
        }
        Ok(())
    }
}

/// Calls `f` on every vector `v` with `lo[i] <= v[i] <= hi[i]` and sum `total`
/// until `f` returns true.
fn vectors_with_sum(
    lo: &[usize],
    hi: &[usize],
    total: usize,
    f: &mut dyn FnMut(&[usize]) -> Result<bool>,
) -> Result<bool> {
    let n = lo.len();
    let mut min_rest = vec![0; n + 1];
    let mut max_rest = vec![0; n + 1];
    for i in (0..n).rev() {
        min_rest[i] = min_rest[i + 1] + lo[i];
        max_rest[i] = max_rest[i + 1] + hi[i];
    }
    if total < min_rest[0] || total > max_rest[0] {
        return Ok(false);
    }
    let mut v = vec![0; n];
    fn go(
        i: usize,
        left: usize,
        lo: &[usize],
        hi: &[usize],
        min_rest: &[usize],
        max_rest: &[usize],
        v: &mut Vec<usize>,
        f: &mut dyn FnMut(&[usize]) -> Result<bool>,
    ) -> Result<bool> {
        if i == lo.len() {
            return f(v);
        }
        let from = lo[i].max(left.saturating_sub(max_rest[i + 1]));
        let to = hi[i].min(left - min_rest[i + 1]);
        for x in from..=to {
            v[i] = x;
            if go(i + 1, left - x, lo, hi, min_rest, max_rest, v, f)? {
                return Ok(true);
            }
        }
        Ok(false)
    }
    go(0, total, lo, hi, &min_rest, &max_rest, &mut v, f)
}

/// A perfect matching with at most one agent on an unrevealed house that is
/// Pareto optimal in every completion. Two agents on unrevealed houses could
/// always prefer each other's, so nothing else can work.
fn npo_exists_nextbest(k: &HybridKnowledge, budget: &mut Budget) -> Result<Option<Matching>> {
    let n = k.n();
    let mut m = Matching::empty(n, n);
    fn go(
        a: usize,
        blind_used: bool,
        k: &HybridKnowledge,
        m: &mut Matching,
        budget: &mut Budget,
    ) -> Result<bool> {
        let n = k.n();
        if a == n {
            budget.tick()?;
            return is_npo_hybrid(k, m);
        }
        let agent = AgentId(a);
        for h in houses(n) {
            if m.agent_of(h).is_some() {
                continue;
            }
            let blind = !k.is_revealed(agent, h);
            if blind && blind_used {
                continue;
            }
            m.insert(agent, h)?;
            if go(a + 1, blind_used || blind, k, m, budget)? {
                return Ok(true);
            }
            m.unmatch_agent(agent);
        }
        Ok(false)
    }
    let k = k.closed();
    Ok(if go(0, false, &k, &mut m, budget)? { Some(m) } else { None })
}

/// Cheapest top-k state of `profile` under next-best queries.
pub fn opt_nextbest(profile: &PreferenceProfile, criterion: Criterion) -> Result<OptResult> {
    opt_nextbest_with(profile, criterion, &OptConfig::default())
}

/// [`opt_nextbest`] with an explicit state limit and pruning switch.
///
/// With pruning, an agent matched to a revealed house in a necessarily
/// rank-maximal state has revealed at least `max(r_a - 1, 1)` houses, where
/// `r_a` is the round it stops being even in the rank-maximal algorithm, and
/// at most one agent can sit on an unrevealed house. For Pareto optimality at
/// most one agent may stay unqueried. Either way at most one agent falls
/// below its bound.
pub fn opt_nextbest_with(profile: &PreferenceProfile, criterion: Criterion, cfg: &OptConfig) -> Result<OptResult> {
    let n = profile.n();
    let top = n.saturating_sub(1);
    let mut budget = Budget { explored: 0, limit: cfg.state_limit };

    let lo: Vec<usize> = if !cfg.prune {
        vec![0; n]
    } else {
        match criterion {
            Criterion::Nrm if n > 2 => {
                let run = rank_maximal_run(&RankTable::from_profile(profile))?;
                agents(n).map(|a| (run.leave_round(a).saturating_sub(1)).clamp(1, top)).collect()
            }
            Criterion::Nrm => vec![0; n],
            Criterion::Npo => vec![1.min(top); n],
        }
    };
    let hi = vec![top; n];

    let check = |ks: &[usize], budget: &mut Budget| -> Result<Option<Matching>> {
        let nb = NextBestKnowledge::from_profile(profile, ks);
        match criterion {
            Criterion::Nrm => {
                budget.tick()?;
                nrm_exists_hybrid(&nb.to_hybrid())
            }
            Criterion::Npo => npo_exists_nextbest(&nb.to_hybrid(), budget),
        }
    };

    for total in 0..=n * top {
        let mut found: Option<(Vec<usize>, Matching)> = None;
        vectors_with_sum(&lo, &hi, total, &mut |ks| {
            Ok(check(ks, &mut budget)?.map(|m| found = Some((ks.to_vec(), m))).is_some())
        })?;
        // one agent below its bound
        if found.is_none() && cfg.prune {
            for e in 0..n {
                let mut elo = lo.clone();
                let mut ehi = hi.clone();
                if lo[e] == 0 {
                    continue;
                }
                elo[e] = 0;
                ehi[e] = lo[e] - 1;
                vectors_with_sum(&elo, &ehi, total, &mut |ks| {
                    Ok(check(ks, &mut budget)?.map(|m| found = Some((ks.to_vec(), m))).is_some())
                })?;
                if found.is_some() {
                    break;
                }
            }
        }
        if let Some((ks, m)) = found {
            return Ok(OptResult {
                queries: total,
                knowledge: PartialKnowledge::NextBest(NextBestKnowledge::from_profile(profile, &ks)),
                matching: m,
                explored: budget.explored,
            });
        }
    }
    unreachable!("full knowledge always admits an optimal matching")
}

/// Cheapest hybrid state of `profile`: every agent reveals some set of rank
/// positions. Revealing `n - 1` positions already fixes the last one.
pub fn opt_hybrid(profile: &PreferenceProfile, criterion: Criterion) -> Result<OptResult> {
    opt_hybrid_with(profile, criterion, &OptConfig::default())
}

pub fn opt_hybrid_with(profile: &PreferenceProfile, criterion: Criterion, cfg: &OptConfig) -> Result<OptResult> {
    let n = profile.n();
    let top = n.saturating_sub(1);
    let per_agent = (1u128 << n.min(100)) - 1;
    let estimate = per_agent.saturating_pow(n as u32);
    if estimate > cfg.state_limit as u128 {
        return Err(Error::BoundExceeded { estimate, limit: cfg.state_limit as u128 });
    }
    let mut budget = Budget { explored: 0, limit: cfg.state_limit };

    // position subsets by size
    let mut by_size: Vec<Vec<Vec<usize>>> = vec![Vec::new(); top + 1];
    for mask in 0u32..(1 << n) {
        let size = mask.count_ones() as usize;
        if size <= top {
            by_size[size].push((0..n).filter(|i| mask & (1 << i) != 0).map(|i| i + 1).collect());
        }
    }
    let all_matchings: Vec<Matching> = if criterion == Criterion::Npo {
        debug_assert!(factorial(n) <= 40_320);
        let hs: Vec<HouseId> = houses(n).collect();
        permutations(&hs)
            .into_iter()
            .map(|p| Matching::from_pairs(n, n, agents(n).zip(p)).expect("permutation"))
            .collect()
    } else {
        Vec::new()
    };

    let check = |ranks: &[Vec<usize>], budget: &mut Budget| -> Result<Option<Matching>> {
        budget.tick()?;
        let k = HybridKnowledge::from_profile(profile, ranks).closed();
        match criterion {
            Criterion::Nrm => nrm_exists_hybrid(&k),
            Criterion::Npo => {
                for m in &all_matchings {
                    if is_npo_hybrid(&k, m)? {
                        return Ok(Some(m.clone()));
                    }
                }
                Ok(None)
            }
        }
    };

    let lo = vec![0; n];
    let hi = vec![top; n];
    for total in 0..=n * top {
        let mut found = None;
        vectors_with_sum(&lo, &hi, total, &mut |sizes| {
            // odometer over the subsets of the chosen sizes
            let mut idx = vec![0usize; n];
            loop {
                let ranks: Vec<Vec<usize>> = (0..n).map(|a| by_size[sizes[a]][idx[a]].clone()).collect();
                if let Some(m) = check(&ranks, &mut budget)? {
                    found = Some((ranks, m));
                    return Ok(true);
                }
                let mut a = 0;
                while a < n {
                    idx[a] += 1;
                    if idx[a] < by_size[sizes[a]].len() {
                        break;
                    }
                    idx[a] = 0;
                    a += 1;
                }
                if a == n {
                    return Ok(false);
                }
            }
        })?;
        if let Some((ranks, m)) = found {
            return Ok(OptResult {
                queries: total,
                knowledge: PartialKnowledge::Hybrid(HybridKnowledge::from_profile(profile, &ranks)),
                matching: m,
                explored: budget.explored,
            });
        }
    }
    unreachable!("full knowledge always admits an optimal matching")
}

/// `queries / opt` in lowest terms; `0 / 0` counts as 1.
pub fn competitive_ratio(queries: usize, opt: &OptResult) -> Result<Ratio<u64>> {
    match (queries, opt.queries) {
        (0, 0) => Ok(Ratio::from_integer(1)),
        (_, 0) => Err(Error::UndefinedRatio),
        (q, o) => Ok(Ratio::new(q as u64, o as u64)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adversary::{block_cycle_profile, random_profile};
    use crate::necessity::is_necessarily_optimal;

    fn distinct_first(n: usize) -> PreferenceProfile {
        PreferenceProfile::new((0..n).map(|a| (0..n).map(|j| (a + j) % n).collect()).collect()).unwrap()
    }

    #[test]
    fn distinct_first_choices() {
        for n in 2..6 {
            let r = opt_nextbest(&distinct_first(n), Criterion::Npo).unwrap();
            assert_eq!(r.queries, n - 1);
        }
        let r = opt_hybrid(&distinct_first(3), Criterion::Npo).unwrap();
        assert_eq!(r.queries, 2);
    }

    #[test]
    fn block_cycle_nrm() {
        let p = block_cycle_profile(2, AgentId(4)).unwrap();
        let r = opt_nextbest(&p, Criterion::Nrm).unwrap();
        assert_eq!(r.queries, 11);
        assert!(is_necessarily_optimal(&r.knowledge, &r.matching, Criterion::Nrm).unwrap());
        assert_eq!(competitive_ratio(15, &r).unwrap(), Ratio::new(15, 11));
    }

    #[test]
    fn two_agents_need_one_query() {
        for rows in [[[0, 1], [0, 1]], [[0, 1], [1, 0]], [[1, 0], [0, 1]], [[1, 0], [1, 0]]] {
            let p = PreferenceProfile::new(rows.iter().map(|r| r.to_vec()).collect()).unwrap();
            assert_eq!(opt_nextbest(&p, Criterion::Nrm).unwrap().queries, 1);
            assert_eq!(opt_nextbest(&p, Criterion::Npo).unwrap().queries, 1);
        }
    }

    #[test]
    fn single_agent_is_free() {
        let p = PreferenceProfile::identity(1);
        for c in [Criterion::Npo, Criterion::Nrm] {
            assert_eq!(opt_nextbest(&p, c).unwrap().queries, 0);
            assert_eq!(opt_hybrid(&p, c).unwrap().queries, 0);
        }
    }

    #[test]
    fn pruning_keeps_the_minimum() {
        let plain = OptConfig { prune: false, ..OptConfig::default() };
        for seed in 0..200 {
            let p = random_profile(3 + (seed % 2) as usize, seed);
            for c in [Criterion::Npo, Criterion::Nrm] {
                let a = opt_nextbest(&p, c).unwrap();
                let b = opt_nextbest_with(&p, c, &plain).unwrap();
                assert_eq!(a.queries, b.queries, "seed {seed} {c:?}");
                let h = opt_hybrid(&p, c).unwrap();
                assert!(h.queries <= a.queries);
            }
        }
    }

    #[test]
    fn ratio_edge_cases() {
        let r = opt_nextbest(&PreferenceProfile::identity(1), Criterion::Nrm).unwrap();
        assert_eq!(competitive_ratio(0, &r).unwrap(), Ratio::from_integer(1));
        assert_eq!(competitive_ratio(2, &r), Err(Error::UndefinedRatio));
    }

    #[test]
    fn refuses_large_hybrid_search() {
        assert!(matches!(opt_hybrid(&random_profile(5, 0), Criterion::Nrm), Err(Error::BoundExceeded { .. })));
        let tiny = OptConfig { state_limit: 0, prune: true };
        assert!(matches!(
            opt_nextbest_with(&random_profile(4, 1), Criterion::Nrm, &tiny),
            Err(Error::BoundExceeded { .. })
        ));
    }
}
