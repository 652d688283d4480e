//! Offline optimality under full preferences: serial dictatorship, Pareto
//! optimality, and the iterative rank-maximal matching algorithm.

use alloc::vec;
use alloc::vec::Vec;

use crate::digraph::Digraph;
use crate::error::{Error, Result};
use crate::graph::{dm_decompose, max_matching, BipartiteGraph, DmClass, DmDecomposition};
use crate::types::{agents, houses, signature, AgentId, HouseId, Matching, Permutation, PreferenceProfile, Signature};

/// Each agent of `sigma` in turn takes its favourite house among those still free.
pub fn serial_dictatorship(profile: &PreferenceProfile, sigma: &Permutation) -> Result<Matching> {
    let n = profile.n();
    if sigma.len() != n {
        return Err(Error::SizeMismatch { expected: n, found: sigma.len() });
    }
    let mut m = Matching::empty(n, n);
    for &a in sigma.order() {
        let h = profile
            .list(a)
            .iter()
            .copied()
            .find(|&h| m.agent_of(h).is_none())
            .expect("n agents, n houses");
        m.insert(a, h)?;
    }
    Ok(m)
}

/// Arc `a -> b` whenever `a` strictly prefers the house of `b` to its own.
pub fn envy_digraph(profile: &PreferenceProfile, m: &Matching) -> Result<Digraph> {
    let n = profile.n();
    if m.agent_count() != n || m.house_count() != n {
        return Err(Error::SizeMismatch { expected: n, found: m.agent_count() });
    }
    if !m.is_perfect() {
        return Err(Error::NotPerfect);
    }
    let mut g = Digraph::new(n);
    for a in agents(n) {
        let own = m.house_of(a).expect("perfect");
        for b in agents(n) {
            let other = m.house_of(b).expect("perfect");
            if profile.prefers(a, other, own) {
                g.add_arc(a.0, b.0);
            }
        }
    }
    Ok(g)
}

/// Whether no matching dominates the perfect matching `m`.
///
/// With strict preferences a perfect matching is dominated exactly when some
/// agents can trade houses around a cycle, i.e. when the envy digraph has a cycle.
pub fn is_pareto_optimal(profile: &PreferenceProfile, m: &Matching) -> Result<bool> {
    Ok(envy_digraph(profile, m)?.is_acyclic())
}

/// Edge ranks of a bipartite instance; an agent may give several houses the same rank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankTable {
    agents: usize,
    houses: usize,
    max_rank: usize,
    rank: Vec<Vec<Option<usize>>>,
}

impl RankTable {
    pub fn new(agents: usize, houses: usize, max_rank: usize) -> Self {
        RankTable { agents, houses, max_rank, rank: vec![vec![None; houses]; agents] }
    }

    pub fn from_profile(profile: &PreferenceProfile) -> Self {
        let n = profile.n();
        let mut t = Self::new(n, n, n);
        for a in agents(n) {
            for h in houses(n) {
                t.rank[a.0][h.0] = Some(profile.rank(a, h));
            }
        }
        t
    }

    /// Makes `(a, h)` an edge of the given 1-based rank.
    pub fn set(&mut self, a: AgentId, h: HouseId, rank: usize) -> Result<()> {
        if a.0 >= self.agents {
            return Err(Error::UnknownAgent(a.0));
        }
        if h.0 >= self.houses {
            return Err(Error::UnknownHouse(h.0));
        }
        if rank == 0 || rank > self.max_rank {
            return Err(Error::RankOutOfRange(rank));
        }
        self.rank[a.0][h.0] = Some(rank);
        Ok(())
    }

    pub fn clear(&mut self, a: AgentId, h: HouseId) {
        self.rank[a.0][h.0] = None;
    }

    pub fn get(&self, a: AgentId, h: HouseId) -> Option<usize> {
        self.rank[a.0][h.0]
    }

    pub fn agents(&self) -> usize {
        self.agents
    }

    pub fn houses(&self) -> usize {
        self.houses
    }

    pub fn max_rank(&self) -> usize {
        self.max_rank
    }

    /// Signature of `m` under these ranks; every matched pair must be an edge.
    pub fn signature(&self, m: &Matching) -> Result<Signature> {
        let mut counts = vec![0; self.max_rank];
        for (a, h) in m.pairs() {
            let r = self
                .rank
                .get(a.0)
                .and_then(|row| row.get(h.0).copied().flatten())
                .ok_or(Error::MissingEdge { agent: a.0, house: h.0 })?;
            counts[r - 1] += 1;
        }
        Ok(Signature(counts))
    }
}

/// State after one round of the rank-maximal algorithm.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RmRound {
    /// Ranks `1..=rank` have been added.
    pub rank: usize,
    pub graph: BipartiteGraph,
    pub matching: Matching,
    pub decomposition: DmDecomposition,
}

/// Full history of the rank-maximal algorithm on one instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RmRun {
    pub rounds: Vec<RmRound>,
    /// `deleted[a][h]`: the edge was removed and never re-enters.
    pub deleted: Vec<Vec<bool>>,
    pub matching: Matching,
    pub signature: Signature,
}

impl RmRun {
    /// Decomposition after round `i`; round 0 is the edgeless graph (all even).
    pub fn decomposition(&self, i: usize) -> DmDecomposition {
        if i == 0 {
            let g = &self.rounds[0].graph;
            DmDecomposition::all_even(g.left(), g.right())
        } else {
            self.rounds[i - 1].decomposition.clone()
        }
    }

    pub fn agent_even_after(&self, a: AgentId, i: usize) -> bool {
        i == 0 || self.rounds[i - 1].decomposition.agent(a) == DmClass::Even
    }

    pub fn house_even_after(&self, h: HouseId, i: usize) -> bool {
        i == 0 || self.rounds[i - 1].decomposition.house(h) == DmClass::Even
    }

    /// `min { i : a not even after round i }`, or `rounds + 1` when `a` stays even.
    pub fn leave_round(&self, a: AgentId) -> usize {
        (1..=self.rounds.len())
            .find(|&i| !self.agent_even_after(a, i))
            .unwrap_or(self.rounds.len() + 1)
    }
}

/// Runs the iterative rank-maximal algorithm for every rank `1..=max_rank`.
///
/// Round `i` adds the surviving rank-`i` edges, augments the previous
/// matching to a maximum one, decomposes, then deletes every edge of rank
/// above `i` touching an odd or unreachable vertex together with all
/// odd-odd and odd-unreachable edges.
pub fn rank_maximal_run(table: &RankTable) -> Result<RmRun> {
    let (na, nh) = (table.agents, table.houses);
    let mut g = BipartiteGraph::new(na, nh);
    let mut m = Matching::empty(na, nh);
    let mut deleted = vec![vec![false; nh]; na];
    let mut rounds = Vec::with_capacity(table.max_rank);

    for i in 1..=table.max_rank {
        for a in 0..na {
            for h in 0..nh {
                if table.rank[a][h] == Some(i) && !deleted[a][h] {
                    g.add_edge(AgentId(a), HouseId(h))?;
                }
            }
        }
        m = max_matching(&g, &m)?;
        let dm = dm_decompose(&g, &m)?;

        let fixed_agent = |a: usize| dm.agent(AgentId(a)) != DmClass::Even;
        let fixed_house = |h: usize| dm.house(HouseId(h)) != DmClass::Even;
        for a in 0..na {
            for h in 0..nh {
                let Some(r) = table.rank[a][h] else { continue };
                if r > i && (fixed_agent(a) || fixed_house(h)) {
                    deleted[a][h] = true;
                }
            }
        }
        let bad_pair = |x: DmClass, y: DmClass| {
            matches!(
                (x, y),
                (DmClass::Odd, DmClass::Odd)
                    | (DmClass::Odd, DmClass::Unreachable)
                    | (DmClass::Unreachable, DmClass::Odd)
            )
        };
        let doomed: Vec<_> = g
            .edges()
            .filter(|&(a, h)| bad_pair(dm.agent(a), dm.house(h)))
            .collect();
        for (a, h) in doomed {
            // maximum matchings only use E-O and U-U edges
            debug_assert!(!m.contains(a, h));
            g.remove_edge(a, h);
            deleted[a.0][h.0] = true;
        }

        rounds.push(RmRound { rank: i, graph: g.clone(), matching: m.clone(), decomposition: dm });
    }

    let signature = table.signature(&m)?;
    Ok(RmRun { rounds, deleted, matching: m, signature })
}

/// A rank-maximal matching of `profile` and its signature.
pub fn rank_maximal(profile: &PreferenceProfile) -> (Matching, Signature) {
    let run = rank_maximal_run(&RankTable::from_profile(profile)).expect("profile tables are complete");
    (run.matching, run.signature)
}

/// Whether `m` attains the rank-maximal signature of `profile`.
pub fn is_rank_maximal(profile: &PreferenceProfile, m: &Matching) -> Result<bool> {
    let s = signature(profile, m)?;
    Ok(s == rank_maximal(profile).1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(rows: &[&[usize]]) -> PreferenceProfile {
        PreferenceProfile::new(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    fn m(n: usize, pairs: &[(usize, usize)]) -> Matching {
        Matching::from_pairs(n, n, pairs.iter().map(|&(a, h)| (AgentId(a), HouseId(h)))).unwrap()
    }

    fn distinct_first(n: usize) -> PreferenceProfile {
        PreferenceProfile::new((0..n).map(|a| (0..n).map(|j| (a + j) % n).collect()).collect()).unwrap()
    }

    #[test]
    fn sd_without_contention() {
        let prof = distinct_first(4);
        let sigma = Permutation::new(vec![AgentId(2), AgentId(0), AgentId(3), AgentId(1)]).unwrap();
        assert_eq!(serial_dictatorship(&prof, &sigma).unwrap(), m(4, &[(0, 0), (1, 1), (2, 2), (3, 3)]));
    }

    #[test]
    fn sd_dictator_takes_contested_house() {
        let prof = p(&[&[0, 1], &[0, 1]]);
        let fwd = Permutation::identity(2);
        let back = Permutation::new(vec![AgentId(1), AgentId(0)]).unwrap();
        assert_eq!(serial_dictatorship(&prof, &fwd).unwrap(), m(2, &[(0, 0), (1, 1)]));
        assert_eq!(serial_dictatorship(&prof, &back).unwrap(), m(2, &[(1, 0), (0, 1)]));
    }

    #[test]
    fn pareto_examples() {
        let prof = distinct_first(3);
        assert!(is_pareto_optimal(&prof, &m(3, &[(0, 0), (1, 1), (2, 2)])).unwrap());
        let swap = p(&[&[1, 0], &[0, 1]]);
        assert!(!is_pareto_optimal(&swap, &m(2, &[(0, 0), (1, 1)])).unwrap());
        assert_eq!(is_pareto_optimal(&swap, &m(2, &[(0, 0)])), Err(Error::NotPerfect));
    }

    #[test]
    fn rank_maximal_distinct_first() {
        let (mm, s) = rank_maximal(&distinct_first(5));
        assert_eq!(s, Signature(vec![5, 0, 0, 0, 0]));
        assert!(mm.is_perfect());
    }

    #[test]
    fn rank_maximal_single_agent() {
        let prof = PreferenceProfile::identity(1);
        let (mm, s) = rank_maximal(&prof);
        assert_eq!(s, Signature(vec![1]));
        assert!(is_rank_maximal(&prof, &mm).unwrap());
    }

    #[test]
    fn rank_maximal_all_identical_lists() {
        // everyone h0 > h1 > h2: any perfect matching has signature (1,1,1)
        let prof = PreferenceProfile::identity(3);
        let run = rank_maximal_run(&RankTable::from_profile(&prof)).unwrap();
        assert_eq!(run.signature, Signature(vec![1, 1, 1]));
        // all agents stay even while one agent is left without any listed house
        assert_eq!(run.leave_round(AgentId(0)), 3);
    }

    #[test]
    fn ties_are_supported() {
        // a0 likes h0,h1 equally (rank 1); a1 only h0 at rank 1
        let mut t = RankTable::new(2, 2, 2);
        t.set(AgentId(0), HouseId(0), 1).unwrap();
        t.set(AgentId(0), HouseId(1), 1).unwrap();
        t.set(AgentId(1), HouseId(0), 1).unwrap();
        t.set(AgentId(1), HouseId(1), 2).unwrap();
        let run = rank_maximal_run(&t).unwrap();
        assert_eq!(run.signature, Signature(vec![2, 0]));
    }
}
