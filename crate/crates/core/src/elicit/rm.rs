//! Elicitation of necessarily rank-maximal matchings by simulating the
//! iterative rank-maximal algorithm one rank per round.

use alloc::vec;
use alloc::vec::Vec;

use super::{Algorithm, ElicitTrace, QueryOracle, Responder};
use crate::error::Result;
use crate::graph::{dm_decompose, max_matching, BipartiteGraph, DmClass};
use crate::optima::{rank_maximal_run, RankTable};
use crate::types::{agents, houses, AgentId, HouseId, Matching};

/// Unfinished agents, available houses, current edges, matching and forbidden edges.
struct RmState {
    unfinished: Vec<bool>,
    available: Vec<bool>,
    edges: BipartiteGraph,
    matching: Matching,
    forbidden: Vec<Vec<bool>>,
}

impl RmState {
    fn new(n: usize) -> Self {
        RmState {
            unfinished: vec![true; n],
            available: vec![true; n],
            edges: BipartiteGraph::new(n, n),
            matching: Matching::empty(n, n),
            forbidden: vec![vec![false; n]; n],
        }
    }

    fn unfinished(&self) -> Vec<AgentId> {
        agents(self.unfinished.len()).filter(|a| self.unfinished[a.0]).collect()
    }

    fn available_count(&self) -> usize {
        self.available.iter().filter(|&&v| v).count()
    }

    fn offer(&mut self, a: AgentId, h: HouseId) -> Result<()> {
        if self.available[h.0] && !self.forbidden[a.0][h.0] {
            self.edges.add_edge(a, h)?;
        }
        Ok(())
    }

    fn augment(&mut self) -> Result<()> {
        self.matching = max_matching(&self.edges, &self.matching)?;
        Ok(())
    }

    /// Retires odd and unreachable vertices and forbids odd-odd and odd-unreachable edges.
    fn settle(&mut self) -> Result<()> {
        let dm = dm_decompose(&self.edges, &self.matching)?;
        for a in agents(self.unfinished.len()) {
            if dm.agent(a) != DmClass::Even {
                self.unfinished[a.0] = false;
            }
        }
        for h in houses(self.available.len()) {
            if dm.house(h) != DmClass::Even {
                self.available[h.0] = false;
            }
        }
        let doomed: Vec<_> = self
            .edges
            .edges()
            .filter(|&(a, h)| {
                matches!(
                    (dm.agent(a), dm.house(h)),
                    (DmClass::Odd, DmClass::Odd) | (DmClass::Odd, DmClass::Unreachable) | (DmClass::Unreachable, DmClass::Odd)
                )
            })
            .collect();
        for (a, h) in doomed {
            self.edges.remove_edge(a, h);
            self.forbidden[a.0][h.0] = true;
        }
        Ok(())
    }
}

fn two_agents(first: HouseId) -> Result<Matching> {
    let mut m = Matching::empty(2, 2);
    m.insert(AgentId(0), first)?;
    m.insert(AgentId(1), HouseId(1 - first.0))?;
    Ok(m)
}

/// Next-best queries, one per unfinished agent and round.
///
/// An agent that survives `n - 1` rounds has its last house determined, so
/// the final round adds that edge without asking. Each agent is therefore
/// asked `min(r_a, n - 1)` times, where `r_a` is the first round it stops
/// being even.
pub fn elicit_rm_nextbest<R: Responder>(o: &mut QueryOracle<R>) -> Result<ElicitTrace> {
    let n = o.n();
    if n == 2 {
        let h = o.next_best(AgentId(0))?;
        return Ok(o.finish(Algorithm::RmNextBest, two_agents(h)?));
    }
    let mut st = RmState::new(n);
    for _round in 1..n {
        for a in st.unfinished() {
            let h = o.next_best(a)?;
            st.offer(a, h)?;
        }
        st.augment()?;
        st.settle()?;
    }
    let crate::knowledge::PartialKnowledge::NextBest(k) = o.knowledge().clone() else { unreachable!() };
    for a in st.unfinished() {
        let last = houses(n).find(|h| !k.prefix(a).contains(h)).expect("one house left");
        st.offer(a, last)?;
    }
    st.augment()?;
    Ok(o.finish(Algorithm::RmNextBest, st.matching))
}

/// Rank queries per round like [`elicit_rm_nextbest`], with a counter of
/// rounds whose matching uses no edge of that round's rank. Once the counter
/// reaches the number of available houses, the remaining agents learn the rank
/// of every available house by house queries and the matching is recomputed.
pub fn elicit_rm_hybrid<R: Responder>(o: &mut QueryOracle<R>) -> Result<ElicitTrace> {
    let n = o.n();
    if n == 2 {
        let h = o.rank(AgentId(0), 1)?;
        return Ok(o.finish(Algorithm::RmHybrid, two_agents(h)?));
    }
    let mut st = RmState::new(n);
    let mut stale = 0;
    for i in 1..n {
        for a in st.unfinished() {
            let h = match o.known_house_at(a, i) {
                Some(h) => h,
                None => o.rank(a, i)?,
            };
            st.offer(a, h)?;
        }
        st.augment()?;
        if !st.matching.pairs().any(|(a, h)| o.known_rank(a, h) == Some(i)) {
            stale += 1;
        }
        if stale >= st.available_count() {
            break;
        }
        st.settle()?;
    }

    let left = st.unfinished();
    if left.is_empty() && n != 1 {
        return Ok(o.finish(Algorithm::RmHybrid, st.matching));
    }
    let open: Vec<HouseId> = houses(n).filter(|h| st.available[h.0]).collect();
    for &a in &left {
        for &h in &open {
            if o.known_rank(a, h).is_none() {
                o.house(a, h)?;
            }
        }
    }
    let mut table = RankTable::new(n, n, n);
    for (a, h) in st.edges.edges() {
        table.set(a, h, o.known_rank(a, h).expect("edges come from answers"))?;
    }
    for &a in &left {
        for &h in &open {
            if !st.forbidden[a.0][h.0] {
                table.set(a, h, o.known_rank(a, h).expect("just asked"))?;
            }
        }
    }
    let m = rank_maximal_run(&table)?.matching;
    Ok(o.finish(Algorithm::RmHybrid, m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elicit::Truthful;
    use crate::necessity::is_nrm_hybrid;
    use crate::optima::rank_maximal;
    use crate::types::{signature, PreferenceProfile, Signature};

    fn distinct_first(n: usize) -> PreferenceProfile {
        PreferenceProfile::new((0..n).map(|a| (0..n).map(|j| (a + j) % n).collect()).collect()).unwrap()
    }

    #[test]
    fn nextbest_distinct_first_choices() {
        let prof = distinct_first(5);
        let (t, _) = Algorithm::RmNextBest.run(Truthful::new(prof.clone())).unwrap();
        assert_eq!(t.queries, 5);
        assert_eq!(signature(&prof, &t.matching).unwrap(), Signature(vec![5, 0, 0, 0, 0]));
    }

    #[test]
    fn small_cases() {
        let (t, _) = Algorithm::RmNextBest.run(Truthful::new(PreferenceProfile::identity(1))).unwrap();
        assert_eq!((t.queries, t.matching.len()), (0, 1));
        let (t, _) = Algorithm::RmHybrid.run(Truthful::new(PreferenceProfile::identity(1))).unwrap();
        assert_eq!((t.queries, t.matching.len()), (0, 1));
        let prof = PreferenceProfile::new(vec![vec![1, 0], vec![1, 0]]).unwrap();
        for alg in [Algorithm::RmNextBest, Algorithm::RmHybrid] {
            let (t, _) = alg.run(Truthful::new(prof.clone())).unwrap();
            assert_eq!(t.queries, 1);
            assert_eq!(t.matching.house_of(AgentId(0)), Some(HouseId(1)));
        }
    }

    #[test]
    fn identical_lists() {
        // everyone h0 > h1 > h2 > h3
        let prof = PreferenceProfile::identity(4);
        let (t, _) = Algorithm::RmNextBest.run(Truthful::new(prof.clone())).unwrap();
        assert_eq!(signature(&prof, &t.matching).unwrap(), rank_maximal(&prof).1);
        assert_eq!(t.per_agent, vec![3, 3, 3, 3]);
        let (t, _) = Algorithm::RmHybrid.run(Truthful::new(prof.clone())).unwrap();
        assert_eq!(signature(&prof, &t.matching).unwrap(), rank_maximal(&prof).1);
        let k = t.knowledge.as_hybrid().unwrap();
        assert!(is_nrm_hybrid(&k, &t.matching).unwrap());
    }

    #[test]
    fn hybrid_distinct_first_choices() {
        let prof = distinct_first(6);
        let (t, _) = Algorithm::RmHybrid.run(Truthful::new(prof)).unwrap();
        assert_eq!(t.queries, 6);
        assert!(t.transcript.iter().all(|e| matches!(e.query, crate::elicit::Query::Rank { rank: 1, .. })));
    }
}
