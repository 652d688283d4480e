//! Deciding whether a matching stays optimal under every completion of
//! partially revealed preferences, plus exhaustive oracles for small instances.

use alloc::vec;
use alloc::vec::Vec;

use crate::combinat::{factorial, next_permutation, permutations};
use crate::digraph::Digraph;
use crate::error::{Error, Result};
use crate::knowledge::{HybridKnowledge, PartialKnowledge, SetCompareKnowledge};
use crate::optima::{is_pareto_optimal, is_rank_maximal, rank_maximal_run, RankTable};
use crate::types::{agents, houses, AgentId, HouseId, Matching, Permutation, PreferenceProfile};

/// Which notion of optimality must hold in every completion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Criterion {
    /// Pareto optimal.
    Npo,
    /// Rank-maximal.
    Nrm,
}

/// Default agent bound for completion enumeration.
pub const DEFAULT_AGENT_BOUND: usize = 6;
/// Default cap on the number of enumerated completions.
pub const DEFAULT_COMPLETION_LIMIT: u128 = 10_000_000;
/// Agent bound for the per-agent exhaustive checks (they enumerate all matchings).
pub const FACTORED_AGENT_BOUND: usize = 7;

fn check_size(n: usize, m: &Matching) -> Result<()> {
    if m.agent_count() != n {
        return Err(Error::SizeMismatch { expected: n, found: m.agent_count() });
    }
    if m.house_count() != n {
        return Err(Error::SizeMismatch { expected: n, found: m.house_count() });
    }
    Ok(())
}

fn check_perfect(n: usize, m: &Matching) -> Result<()> {
    check_size(n, m)?;
    if !m.is_perfect() {
        return Err(Error::NotPerfect);
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// hybrid and next-best: envy digraph

/// How much is known about the two houses when asking whether agent `a`
/// may prefer `other` (someone else's house) to `own`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArcCase {
    /// Both ranks revealed.
    BothRevealed { own: usize, other: usize },
    /// Only the rank of `own` is revealed.
    OwnRevealed { own: usize },
    /// Only the rank of `other` is revealed.
    OtherRevealed { other: usize },
    /// Neither rank is revealed.
    NeitherRevealed,
}

impl ArcCase {
    pub fn of(k: &HybridKnowledge, a: AgentId, own: HouseId, other: HouseId) -> Self {
        match (k.rank_of(a, own), k.rank_of(a, other)) {
            (Some(own), Some(other)) => ArcCase::BothRevealed { own, other },
            (Some(own), None) => ArcCase::OwnRevealed { own },
            (None, Some(other)) => ArcCase::OtherRevealed { other },
            (None, None) => ArcCase::NeitherRevealed,
        }
    }

    /// Whether some completion makes `a` strictly prefer `other` to `own`.
    pub fn may_envy(self, k: &HybridKnowledge, a: AgentId) -> bool {
        match self {
            ArcCase::BothRevealed { own, other } => other < own,
            // `other` can take any open rank
            ArcCase::OwnRevealed { own } => k.has_open_rank_below(a, own),
            // `own` can take any open rank
            ArcCase::OtherRevealed { other } => k.has_open_rank_above(a, other),
            // two distinct unrevealed houses: two open ranks, either order works
            ArcCase::NeitherRevealed => true,
        }
    }
}

/// Arc `a -> b` when some completion makes `a` prefer the house of `b` to its own.
pub fn hybrid_envy_digraph(k: &HybridKnowledge, m: &Matching) -> Result<Digraph> {
    let n = k.n();
    check_perfect(n, m)?;
    let mut g = Digraph::new(n);
    for a in agents(n) {
        let own = m.house_of(a).expect("perfect");
        for b in agents(n) {
            if a == b {
                continue;
            }
            let other = m.house_of(b).expect("perfect");
            if ArcCase::of(k, a, own, other).may_envy(k, a) {
                g.add_arc(a.0, b.0);
            }
        }
    }
    Ok(g)
}

/// Whether the perfect matching `m` is Pareto optimal in every completion of `k`.
pub fn is_npo_hybrid(k: &HybridKnowledge, m: &Matching) -> Result<bool> {
    Ok(hybrid_envy_digraph(k, m)?.is_acyclic())
}

/// An order `σ` with `m = SD(σ)` in every completion, or `None` when `m` is not
/// necessarily Pareto optimal.
///
/// Agents that nobody can envy go last, so each agent picks while every house
/// it might prefer is already gone.
pub fn sd_certificate(k: &HybridKnowledge, m: &Matching) -> Result<Option<Permutation>> {
    let g = hybrid_envy_digraph(k, m)?;
    Ok(g.topological_order().map(|mut order| {
        order.reverse();
        Permutation::new(order.into_iter().map(AgentId).collect()).expect("topological order is a permutation")
    }))
}

/// Lower bound on the queries any algorithm needs before it can output `m`:
/// the agent picking `i`-th in a certificate order must have revealed at least
/// `min(rank of its house, n - i)` entries.
///
/// The rank is the revealed one, or the first open rank when unrevealed.
pub fn min_queries_lower_bound_po(k: &HybridKnowledge, m: &Matching) -> Result<usize> {
    let sigma = sd_certificate(k, m)?.ok_or(Error::NotNecessarilyOptimal)?;
    let n = k.n();
    Ok(sigma
        .order()
        .iter()
        .enumerate()
        .map(|(i, &a)| {
            let h = m.house_of(a).expect("perfect");
            let r = k.known_rank(a, h).or_else(|| k.first_open_rank(a)).expect("unrevealed implies open");
            r.min(n - (i + 1))
        })
        .sum())
}

// ---------------------------------------------------------------------------
// hybrid and next-best: rank-maximality

/// Whether `m` is rank-maximal in every completion of `k`.
///
/// For a fixed rival matching the adversary's choices are independent per
/// agent and the lexicographic order is compatible with addition, so the worst
/// case puts every unrevealed own house at the last open rank and every other
/// unrevealed house at the first open rank. `m` is necessarily rank-maximal iff
/// it is rank-maximal under that single rank table.
pub fn is_nrm_hybrid(k: &HybridKnowledge, m: &Matching) -> Result<bool> {
    let n = k.n();
    check_size(n, m)?;
    if !m.is_perfect() {
        return Ok(false);
    }
    let k = k.closed();
    let mut t = RankTable::new(n, n, n);
    for a in agents(n) {
        let own = m.house_of(a).expect("perfect");
        for h in houses(n) {
            let r = match k.rank_of(a, h) {
                Some(r) => r,
                None if h == own => k.last_open_rank(a).expect("unrevealed implies open"),
                None => k.first_open_rank(a).expect("unrevealed implies open"),
            };
            t.set(a, h, r)?;
        }
    }
    let best = rank_maximal_run(&t)?.signature;
    Ok(t.signature(m)? == best)
}

/// Worst possible rank of every house: revealed ranks verbatim, unrevealed
/// houses at the last open rank.
pub fn max_rank_table(k: &HybridKnowledge) -> RankTable {
    let n = k.n();
    let mut t = RankTable::new(n, n, n);
    for a in agents(n) {
        for h in houses(n) {
            let r = k
                .rank_of(a, h)
                .unwrap_or_else(|| k.last_open_rank(a).expect("unrevealed implies open"));
            t.set(a, h, r).expect("ranks are in range");
        }
    }
    t
}

/// A necessarily rank-maximal matching for `k`, or `None` if there is none.
///
/// Works on the worst-rank table: an agent can sit on an unrevealed house only
/// if both stay even up to the round before its last open rank. Those pairs
/// are fixed, the rest is matched rank-maximally over revealed edges, and the
/// result is verified.
pub fn nrm_exists_hybrid(k: &HybridKnowledge) -> Result<Option<Matching>> {
    let n = k.n();
    let k = k.closed();
    let run = rank_maximal_run(&max_rank_table(&k))?;

    let mut m = Matching::empty(n, n);
    for a in agents(n) {
        let Some(l) = k.last_open_rank(a) else { continue };
        let mut picks = k
            .unrevealed_houses(a)
            .filter(|&h| run.agent_even_after(a, l - 1) && run.house_even_after(h, l - 1));
        match (picks.next(), picks.next()) {
            (Some(h), None) => {
                if m.agent_of(h).is_some() {
                    return Ok(None);
                }
                m.insert(a, h)?;
            }
            (None, _) => {}
            (Some(_), Some(_)) => return Ok(None),
        }
    }

    let mut rest = RankTable::new(n, n, n);
    for a in agents(n).filter(|&a| m.house_of(a).is_none()) {
        for h in houses(n).filter(|&h| m.agent_of(h).is_none()) {
            if let Some(r) = k.rank_of(a, h) {
                rest.set(a, h, r)?;
            }
        }
    }
    for (a, h) in rank_maximal_run(&rest)?.matching.pairs() {
        m.insert(a, h)?;
    }
    if m.is_perfect() && is_nrm_hybrid(&k, &m)? {
        Ok(Some(m))
    } else {
        Ok(None)
    }
}

// ---------------------------------------------------------------------------
// set-compare

/// Arc `a -> b` unless the answers of `a` already force its own house above the house of `b`.
pub fn setcompare_envy_digraph(k: &SetCompareKnowledge, m: &Matching) -> Result<Digraph> {
    let n = k.n();
    check_perfect(n, m)?;
    let mut g = Digraph::new(n);
    for a in agents(n) {
        let order = k.order(a)?;
        let own = m.house_of(a).expect("perfect");
        for b in agents(n) {
            if a != b && !order.better(own, m.house_of(b).expect("perfect")) {
                g.add_arc(a.0, b.0);
            }
        }
    }
    Ok(g)
}

pub fn is_npo_setcompare(k: &SetCompareKnowledge, m: &Matching) -> Result<bool> {
    Ok(setcompare_envy_digraph(k, m)?.is_acyclic())
}

// ---------------------------------------------------------------------------
// model-independent entry points

/// Polynomial check where one exists; set-compare rank-maximality falls back to exhaustive search.
pub fn is_necessarily_optimal(pk: &PartialKnowledge, m: &Matching, criterion: Criterion) -> Result<bool> {
    match (pk, criterion) {
        (PartialKnowledge::SetCompare(k), Criterion::Npo) => is_npo_setcompare(k, m),
        (PartialKnowledge::SetCompare(_), Criterion::Nrm) => nrm_bruteforce(pk, m),
        (_, Criterion::Npo) => is_npo_hybrid(&pk.as_hybrid().expect("not set-compare"), m),
        (_, Criterion::Nrm) => is_nrm_hybrid(&pk.as_hybrid().expect("not set-compare"), m),
    }
}

// ---------------------------------------------------------------------------
// completions

/// Every list of `a` consistent with `pk`.
pub fn consistent_lists(pk: &PartialKnowledge, a: AgentId) -> Vec<Vec<HouseId>> {
    let n = pk.n();
    match pk.as_hybrid() {
        Some(k) => {
            let open: Vec<usize> = k.unrevealed_ranks(a).collect();
            let free: Vec<HouseId> = k.unrevealed_houses(a).collect();
            permutations(&free)
                .into_iter()
                .map(|fill| {
                    let mut list: Vec<HouseId> =
                        (1..=n).map(|r| k.house_at(a, r).unwrap_or(HouseId(usize::MAX))).collect();
                    for (&r, h) in open.iter().zip(fill) {
                        list[r - 1] = h;
                    }
                    list
                })
                .collect()
        }
        None => {
            let mut list: Vec<HouseId> = houses(n).collect();
            let mut out = Vec::new();
            loop {
                if pk.admits_list(a, &list) {
                    out.push(list.clone());
                }
                if !next_permutation(&mut list) {
                    break;
                }
            }
            out
        }
    }
}

/// Number of completions of `pk` (saturating).
pub fn completion_count(pk: &PartialKnowledge) -> u128 {
    let n = pk.n();
    match pk.as_hybrid() {
        Some(k) => agents(n).fold(1u128, |acc, a| acc.saturating_mul(factorial(k.unrevealed_ranks(a).count()))),
        None if n <= 8 => agents(n).fold(1u128, |acc, a| acc.saturating_mul(consistent_lists(pk, a).len() as u128)),
        None => factorial(n).saturating_pow(n as u32),
    }
}

/// Stream of all profiles consistent with some partial knowledge.
#[derive(Clone, Debug)]
pub struct Completions {
    lists: Vec<Vec<Vec<HouseId>>>,
    cursor: Vec<usize>,
    done: bool,
}

impl Iterator for Completions {
    type Item = PreferenceProfile;

    fn next(&mut self) -> Option<PreferenceProfile> {
        if self.done {
            return None;
        }
        let rows = self
            .cursor
            .iter()
            .zip(&self.lists)
            .map(|(&i, l)| l[i].iter().map(|h| h.0).collect())
            .collect();
        let out = PreferenceProfile::new(rows).expect("completions are permutations");
        // odometer, last agent fastest
        self.done = true;
        for a in (0..self.cursor.len()).rev() {
            self.cursor[a] += 1;
            if self.cursor[a] < self.lists[a].len() {
                self.done = false;
                break;
            }
            self.cursor[a] = 0;
        }
        Some(out)
    }
}

/// All completions of `pk` with the default bounds.
pub fn enumerate_completions(pk: &PartialKnowledge) -> Result<Completions> {
    enumerate_completions_bounded(pk, DEFAULT_AGENT_BOUND, DEFAULT_COMPLETION_LIMIT)
}

/// All completions of `pk`; refuses above `max_agents` agents or `limit` completions.
pub fn enumerate_completions_bounded(pk: &PartialKnowledge, max_agents: usize, limit: u128) -> Result<Completions> {
    let n = pk.n();
    let estimate = completion_count(pk);
    if n > max_agents || estimate > limit {
        return Err(Error::BoundExceeded { estimate, limit });
    }
    let lists: Vec<_> = agents(n).map(|a| consistent_lists(pk, a)).collect();
    let done = lists.iter().any(|l| l.is_empty());
    Ok(Completions { cursor: vec![0; n], lists, done })
}

/// `m` is Pareto optimal in every enumerated completion.
pub fn npo_by_enumeration(pk: &PartialKnowledge, m: &Matching) -> Result<bool> {
    check_perfect(pk.n(), m)?;
    for p in enumerate_completions(pk)? {
        if !is_pareto_optimal(&p, m)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `m` is rank-maximal in every enumerated completion.
pub fn nrm_by_enumeration(pk: &PartialKnowledge, m: &Matching) -> Result<bool> {
    check_size(pk.n(), m)?;
    for p in enumerate_completions(pk)? {
        if !is_rank_maximal(&p, m)? {
            return Ok(false);
        }
    }
    Ok(true)
}

// ---------------------------------------------------------------------------
// exhaustive checks organised per agent

fn positions(lists: &[Vec<HouseId>], n: usize) -> Vec<Vec<usize>> {
    lists
        .iter()
        .map(|l| {
            let mut pos = vec![0; n];
            for (i, h) in l.iter().enumerate() {
                pos[h.0] = i;
            }
            pos
        })
        .collect()
}

fn factored_views(pk: &PartialKnowledge) -> Result<Vec<Vec<Vec<usize>>>> {
    let n = pk.n();
    if n > FACTORED_AGENT_BOUND {
        return Err(Error::BoundExceeded { estimate: n as u128, limit: FACTORED_AGENT_BOUND as u128 });
    }
    Ok(agents(n).map(|a| positions(&consistent_lists(pk, a), n)).collect())
}

/// Whether the perfect matching `m` is Pareto optimal in every completion of `pk`.
///
/// Completions are products of per-agent lists and domination by a fixed
/// matching is a conjunction of per-agent conditions, so this searches every
/// perfect matching `m'` and asks each moved agent separately whether one of
/// its consistent lists prefers the new house.
pub fn npo_bruteforce(pk: &PartialKnowledge, m: &Matching) -> Result<bool> {
    let n = pk.n();
    check_perfect(n, m)?;
    let views = factored_views(pk)?;
    // can_prefer[a][x][y]
    let mut can_prefer = vec![vec![vec![false; n]; n]; n];
    for (a, view) in views.iter().enumerate() {
        for pos in view {
            for x in 0..n {
                for y in 0..n {
                    if pos[x] < pos[y] {
                        can_prefer[a][x][y] = true;
                    }
                }
            }
        }
    }
    let own: Vec<usize> = agents(n).map(|a| m.house_of(a).expect("perfect").0).collect();
    let mut alt: Vec<usize> = (0..n).collect();
    loop {
        if alt != own && (0..n).all(|a| alt[a] == own[a] || can_prefer[a][alt[a]][own[a]]) {
            return Ok(false);
        }
        if !next_permutation(&mut alt) {
            return Ok(true);
        }
    }
}

fn lex_positive(v: &[i64]) -> bool {
    v.iter().find(|&&x| x != 0).is_some_and(|&x| x > 0)
}

/// Whether `m` is rank-maximal in every completion of `pk`.
///
/// For a fixed rival `m'` the signature gap is a sum of per-agent terms, each
/// depending only on that agent's list, and the lexicographic order on integer
/// vectors is translation invariant; so the largest gap over all completions
/// is the sum of per-agent maxima. Every matching `m'`, perfect or not, is tried.
pub fn nrm_bruteforce(pk: &PartialKnowledge, m: &Matching) -> Result<bool> {
    let n = pk.n();
    check_size(n, m)?;
    let views = factored_views(pk)?;
    let own: Vec<Option<usize>> = agents(n).map(|a| m.house_of(a).map(|h| h.0)).collect();

    // gain[a][x] = lexicographically largest e_{rank x} - e_{rank own(a)}, x = n meaning unmatched
    let mut gain = vec![vec![vec![0i64; n]; n + 1]; n];
    for a in 0..n {
        for x in 0..=n {
            let xo = (x < n).then_some(x);
            if xo == own[a] {
                continue;
            }
            let mut best: Option<Vec<i64>> = None;
            for pos in &views[a] {
                let mut d = vec![0i64; n];
                if let Some(x) = xo {
                    d[pos[x]] += 1;
                }
                if let Some(y) = own[a] {
                    d[pos[y]] -= 1;
                }
                if best.as_ref().is_none_or(|b| d > *b) {
                    best = Some(d);
                }
            }
            gain[a][x] = best.expect("consistent knowledge has a completion");
        }
    }

    fn search(a: usize, n: usize, used: &mut [bool], sum: &mut [i64], gain: &[Vec<Vec<i64>>]) -> bool {
        if a == n {
            return lex_positive(sum);
        }
        for x in 0..=n {
            if x < n && used[x] {
                continue;
            }
            if x < n {
                used[x] = true;
            }
            for (s, g) in sum.iter_mut().zip(&gain[a][x]) {
                *s += g;
            }
            let hit = search(a + 1, n, used, sum, gain);
            for (s, g) in sum.iter_mut().zip(&gain[a][x]) {
                *s -= g;
            }
            if x < n {
                used[x] = false;
            }
            if hit {
                return true;
            }
        }
        false
    }

    let mut used = vec![false; n];
    let mut sum = vec![0i64; n];
    Ok(!search(0, n, &mut used, &mut sum, &gain))
}

/// Exhaustive counterpart of [`is_necessarily_optimal`].
pub fn bruteforce(pk: &PartialKnowledge, m: &Matching, criterion: Criterion) -> Result<bool> {
    match criterion {
        Criterion::Npo => npo_bruteforce(pk, m),
        Criterion::Nrm => nrm_bruteforce(pk, m),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::knowledge::{Model, NextBestKnowledge};
    use crate::optima::{rank_maximal, serial_dictatorship};

    fn p(rows: &[&[usize]]) -> PreferenceProfile {
        PreferenceProfile::new(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    fn m(n: usize, pairs: &[(usize, usize)]) -> Matching {
        Matching::from_pairs(n, n, pairs.iter().map(|&(a, h)| (AgentId(a), HouseId(h)))).unwrap()
    }

    fn hk(n: usize, facts: &[(usize, usize, usize)]) -> HybridKnowledge {
        let mut k = HybridKnowledge::new(n);
        for &(a, r, h) in facts {
            k.reveal(AgentId(a), r, HouseId(h)).unwrap();
        }
        k
    }

    #[test]
    fn arc_table() {
        // a0 knows rank 2 -> h1 and rank 4 -> h3; open ranks 1 and 3
        let k = hk(4, &[(0, 2, 1), (0, 4, 3)]);
        let a = AgentId(0);
        let case = |own, other| ArcCase::of(&k, a, HouseId(own), HouseId(other));

        assert_eq!(case(3, 1), ArcCase::BothRevealed { own: 4, other: 2 });
        assert!(case(3, 1).may_envy(&k, a));
        assert!(!case(1, 3).may_envy(&k, a));

        // own at 2: open rank 1 lies below, an unrevealed house may beat it
        assert_eq!(case(1, 0), ArcCase::OwnRevealed { own: 2 });
        assert!(case(1, 0).may_envy(&k, a));
        let k2 = hk(4, &[(0, 1, 1)]);
        assert!(!ArcCase::of(&k2, a, HouseId(1), HouseId(0)).may_envy(&k2, a));

        // other at 2: open rank 3 lies above, own may sit there
        assert_eq!(case(0, 1), ArcCase::OtherRevealed { other: 2 });
        assert!(case(0, 1).may_envy(&k, a));
        let k3 = hk(4, &[(0, 4, 1), (0, 3, 2)]);
        assert!(!ArcCase::of(&k3, a, HouseId(0), HouseId(1)).may_envy(&k3, a));

        assert_eq!(case(0, 2), ArcCase::NeitherRevealed);
        assert!(case(0, 2).may_envy(&k, a));
    }

    #[test]
    fn npo_two_agents() {
        let mm = m(2, &[(0, 0), (1, 1)]);
        let k = hk(2, &[(0, 1, 0)]);
        assert!(is_npo_hybrid(&k, &mm).unwrap());
        let pk = PartialKnowledge::Hybrid(k.clone());
        assert!(npo_by_enumeration(&pk, &mm).unwrap());
        assert!(npo_bruteforce(&pk, &mm).unwrap());

        let empty = HybridKnowledge::new(2);
        for mm in [m(2, &[(0, 0), (1, 1)]), m(2, &[(0, 1), (1, 0)])] {
            assert!(!is_npo_hybrid(&empty, &mm).unwrap());
            assert!(!npo_bruteforce(&PartialKnowledge::Hybrid(empty.clone()), &mm).unwrap());
        }
    }

    #[test]
    fn certificate_lets_envied_agent_pick_first() {
        let mm = m(2, &[(0, 0), (1, 1)]);
        let k = hk(2, &[(0, 1, 0)]);
        let sigma = sd_certificate(&k, &mm).unwrap().unwrap();
        assert_eq!(sigma.order(), &[AgentId(0), AgentId(1)]);
        for prof in enumerate_completions(&PartialKnowledge::Hybrid(k)).unwrap() {
            assert_eq!(serial_dictatorship(&prof, &sigma).unwrap(), mm);
        }
        assert_eq!(sd_certificate(&HybridKnowledge::new(2), &mm).unwrap(), None);
    }

    #[test]
    fn certificate_on_full_knowledge() {
        let prof = p(&[&[0, 1, 2], &[0, 2, 1], &[1, 0, 2]]);
        let mm = serial_dictatorship(&prof, &Permutation::identity(3)).unwrap();
        let k = HybridKnowledge::full(&prof);
        let sigma = sd_certificate(&k, &mm).unwrap().unwrap();
        assert_eq!(serial_dictatorship(&prof, &sigma).unwrap(), mm);
    }

    #[test]
    fn lower_bound_examples() {
        let n = 5;
        let prof = PreferenceProfile::new((0..n).map(|a| (0..n).map(|j| (a + j) % n).collect()).collect()).unwrap();
        let mm = m(n, &[(0, 0), (1, 1), (2, 2), (3, 3), (4, 4)]);
        assert_eq!(min_queries_lower_bound_po(&HybridKnowledge::full(&prof), &mm).unwrap(), n - 1);
        let one = HybridKnowledge::new(1);
        assert_eq!(min_queries_lower_bound_po(&one, &m(1, &[(0, 0)])).unwrap(), 0);
        assert_eq!(
            min_queries_lower_bound_po(&HybridKnowledge::new(2), &m(2, &[(0, 0), (1, 1)])),
            Err(Error::NotNecessarilyOptimal)
        );
    }

    #[test]
    fn completion_counts() {
        let empty = PartialKnowledge::empty(Model::Hybrid, 2);
        assert_eq!(enumerate_completions(&empty).unwrap().count(), 4);
        let k = PartialKnowledge::Hybrid(hk(3, &[(0, 1, 0)]));
        assert_eq!(enumerate_completions(&k).unwrap().count(), 72);
        let prof = p(&[&[2, 0, 1], &[1, 0, 2], &[0, 2, 1]]);
        let full = PartialKnowledge::NextBest(NextBestKnowledge::from_profile(&prof, &[3, 3, 3]));
        let all: Vec<_> = enumerate_completions(&full).unwrap().collect();
        assert_eq!(all, vec![prof]);
        let sc = PartialKnowledge::empty(Model::SetCompare, 3);
        assert_eq!(enumerate_completions(&sc).unwrap().count(), 216);
        let big = PartialKnowledge::empty(Model::Hybrid, 7);
        assert!(matches!(enumerate_completions(&big), Err(Error::BoundExceeded { .. })));
    }

    #[test]
    fn nrm_two_agents_empty() {
        let pk = PartialKnowledge::empty(Model::Hybrid, 2);
        let k = pk.as_hybrid().unwrap();
        for mm in [m(2, &[(0, 0), (1, 1)]), m(2, &[(0, 1), (1, 0)])] {
            assert!(!nrm_by_enumeration(&pk, &mm).unwrap());
            assert!(!nrm_bruteforce(&pk, &mm).unwrap());
            assert!(!is_nrm_hybrid(&k, &mm).unwrap());
        }
        assert_eq!(nrm_exists_hybrid(&k).unwrap(), None);
    }

    #[test]
    fn nrm_full_knowledge_is_rank_maximal() {
        let prof = p(&[&[0, 1, 2, 3], &[0, 2, 1, 3], &[1, 0, 3, 2], &[1, 3, 2, 0]]);
        let k = HybridKnowledge::full(&prof);
        let found = nrm_exists_hybrid(&k).unwrap().unwrap();
        let (_, sig) = rank_maximal(&prof);
        assert_eq!(crate::types::signature(&prof, &found).unwrap(), sig);
        assert!(is_nrm_hybrid(&k, &found).unwrap());
    }

    #[test]
    fn forced_last_house_counts_as_known() {
        // a0 revealed ranks 1 and 2 out of 3; h2 is forced to rank 3
        let k = hk(3, &[(0, 1, 0), (0, 2, 1)]);
        assert_eq!(k.known_rank(AgentId(0), HouseId(2)), Some(3));
        let c = k.closed();
        assert_eq!(c.rank_of(AgentId(0), HouseId(2)), Some(3));
        assert_eq!(c.known_house_at(AgentId(1), 1), None);
    }

    #[test]
    fn partial_matching_is_never_nrm() {
        let prof = p(&[&[0, 1], &[1, 0]]);
        let k = HybridKnowledge::full(&prof);
        assert!(!is_nrm_hybrid(&k, &m(2, &[(0, 0)])).unwrap());
        assert!(!nrm_bruteforce(&PartialKnowledge::Hybrid(k), &m(2, &[(0, 0)])).unwrap());
    }

    #[test]
    fn setcompare_checks() {
        let mut k = SetCompareKnowledge::new(3);
        k.record(AgentId(0), vec![HouseId(0), HouseId(1), HouseId(2)], HouseId(0)).unwrap();
        k.record(AgentId(1), vec![HouseId(1), HouseId(2)], HouseId(1)).unwrap();
        let mm = m(3, &[(0, 0), (1, 1), (2, 2)]);
        assert!(is_npo_setcompare(&k, &mm).unwrap());
        let pk = PartialKnowledge::SetCompare(k.clone());
        assert!(npo_bruteforce(&pk, &mm).unwrap());
        assert!(npo_by_enumeration(&pk, &mm).unwrap());
        let empty = SetCompareKnowledge::new(3);
        assert!(!is_npo_setcompare(&empty, &mm).unwrap());
    }
}
