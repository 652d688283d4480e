//! What an elicitation run has learned so far, in each of the three query models.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::types::{agents, houses, AgentId, HouseId, PreferenceProfile};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Model {
    NextBest,
    Hybrid,
    SetCompare,
}

/// Top-k prefixes revealed by next-best queries.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NextBestKnowledge {
    prefixes: Vec<Vec<HouseId>>,
}

impl NextBestKnowledge {
    pub fn new(n: usize) -> Self {
        NextBestKnowledge { prefixes: vec![Vec::new(); n] }
    }

    pub fn from_prefixes(n: usize, prefixes: Vec<Vec<usize>>) -> Result<Self> {
        if prefixes.len() != n {
            return Err(Error::SizeMismatch { expected: n, found: prefixes.len() });
        }
        let mut k = Self::new(n);
        for (a, row) in prefixes.into_iter().enumerate() {
            for h in row {
                k.push(AgentId(a), HouseId(h))?;
            }
        }
        Ok(k)
    }

    /// The knowledge left by revealing the top `lens[a]` houses of each agent.
    pub fn from_profile(profile: &PreferenceProfile, lens: &[usize]) -> Self {
        NextBestKnowledge {
            prefixes: agents(profile.n())
                .zip(lens)
                .map(|(a, &len)| profile.list(a)[..len].to_vec())
                .collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.prefixes.len()
    }

    pub fn push(&mut self, a: AgentId, h: HouseId) -> Result<()> {
        let n = self.n();
        let prefix = self.prefixes.get_mut(a.0).ok_or(Error::UnknownAgent(a.0))?;
        if h.0 >= n {
            return Err(Error::UnknownHouse(h.0));
        }
        if prefix.contains(&h) {
            return Err(Error::Inconsistent("house revealed twice in a prefix"));
        }
        prefix.push(h);
        Ok(())
    }

    pub fn prefix(&self, a: AgentId) -> &[HouseId] {
        &self.prefixes[a.0]
    }

    pub fn revealed_count(&self, a: AgentId) -> usize {
        self.prefixes[a.0].len()
    }

    pub fn total_revealed(&self) -> usize {
        self.prefixes.iter().map(Vec::len).sum()
    }

    /// Same information expressed as revealed ranks `1..=k`.
    pub fn to_hybrid(&self) -> HybridKnowledge {
        let mut k = HybridKnowledge::new(self.n());
        for a in agents(self.n()) {
            for (p, &h) in self.prefix(a).iter().enumerate() {
                k.reveal(a, p + 1, h).expect("prefixes are duplicate-free");
            }
        }
        k
    }
}

/// Revealed `(rank, house)` facts from rank and house queries.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HybridKnowledge {
    // house_at[a][r - 1]
    house_at: Vec<Vec<Option<HouseId>>>,
    // rank_of[a][h], 1-based
    rank_of: Vec<Vec<Option<usize>>>,
}

impl HybridKnowledge {
    pub fn new(n: usize) -> Self {
        HybridKnowledge { house_at: vec![vec![None; n]; n], rank_of: vec![vec![None; n]; n] }
    }

    /// The knowledge left by revealing the given 1-based ranks of each agent.
    pub fn from_profile(profile: &PreferenceProfile, ranks: &[Vec<usize>]) -> Self {
        let mut k = Self::new(profile.n());
        for (a, rs) in agents(profile.n()).zip(ranks) {
            for &r in rs {
                k.reveal(a, r, profile.house_at(a, r)).expect("facts come from one profile");
            }
        }
        k
    }

    /// Every rank of every agent revealed.
    pub fn full(profile: &PreferenceProfile) -> Self {
        let all: Vec<Vec<usize>> = (0..profile.n()).map(|_| (1..=profile.n()).collect()).collect();
        Self::from_profile(profile, &all)
    }

    pub fn n(&self) -> usize {
        self.house_at.len()
    }

    /// Records that `a` ranks `h` at `rank`. Returns `false` when the fact was already known.
    pub fn reveal(&mut self, a: AgentId, rank: usize, h: HouseId) -> Result<bool> {
        let n = self.n();
        if a.0 >= n {
            return Err(Error::UnknownAgent(a.0));
        }
        if h.0 >= n {
            return Err(Error::UnknownHouse(h.0));
        }
        if rank == 0 || rank > n {
            return Err(Error::RankOutOfRange(rank));
        }
        match (self.house_at[a.0][rank - 1], self.rank_of[a.0][h.0]) {
            (Some(x), Some(r)) if x == h && r == rank => Ok(false),
            (None, None) => {
                self.house_at[a.0][rank - 1] = Some(h);
                self.rank_of[a.0][h.0] = Some(rank);
                Ok(true)
            }
            _ => Err(Error::Inconsistent("rank or house already revealed differently")),
        }
    }

    pub fn house_at(&self, a: AgentId, rank: usize) -> Option<HouseId> {
        self.house_at[a.0][rank - 1]
    }

    pub fn rank_of(&self, a: AgentId, h: HouseId) -> Option<usize> {
        self.rank_of[a.0][h.0]
    }

    pub fn is_revealed(&self, a: AgentId, h: HouseId) -> bool {
        self.rank_of[a.0][h.0].is_some()
    }

    pub fn revealed_count(&self, a: AgentId) -> usize {
        self.rank_of[a.0].iter().filter(|r| r.is_some()).count()
    }

    pub fn total_revealed(&self) -> usize {
        agents(self.n()).map(|a| self.revealed_count(a)).sum()
    }

    /// Ranks of `a` with no revealed house, ascending.
    pub fn unrevealed_ranks(&self, a: AgentId) -> impl Iterator<Item = usize> + '_ {
        self.house_at[a.0].iter().enumerate().filter(|(_, h)| h.is_none()).map(|(r, _)| r + 1)
    }

    pub fn unrevealed_houses(&self, a: AgentId) -> impl Iterator<Item = HouseId> + '_ {
        houses(self.n()).filter(move |&h| !self.is_revealed(a, h))
    }

    /// First rank with no revealed house (`k_a`); `None` when everything is revealed.
    pub fn first_open_rank(&self, a: AgentId) -> Option<usize> {
        self.unrevealed_ranks(a).next()
    }

    /// Last rank with no revealed house (`ℓ_a`); `None` when everything is revealed.
    pub fn last_open_rank(&self, a: AgentId) -> Option<usize> {
        self.unrevealed_ranks(a).last()
    }

    /// Whether some rank strictly below `rank` (better) is still open.
    pub fn has_open_rank_below(&self, a: AgentId, rank: usize) -> bool {
        self.first_open_rank(a).is_some_and(|k| k < rank)
    }

    /// Whether some rank strictly above `rank` (worse) is still open.
    pub fn has_open_rank_above(&self, a: AgentId, rank: usize) -> bool {
        self.last_open_rank(a).is_some_and(|l| l > rank)
    }

    /// Rank of `h` for `a` if it is revealed or forced by all other ranks being revealed.
    pub fn known_rank(&self, a: AgentId, h: HouseId) -> Option<usize> {
        if let Some(r) = self.rank_of(a, h) {
            return Some(r);
        }
        let mut open = self.unrevealed_ranks(a);
        match (open.next(), open.next()) {
            (Some(r), None) => Some(r),
            _ => None,
        }
    }

    /// House at `rank` for `a` if revealed or forced.
    pub fn known_house_at(&self, a: AgentId, rank: usize) -> Option<HouseId> {
        if let Some(h) = self.house_at(a, rank) {
            return Some(h);
        }
        let mut open = self.unrevealed_houses(a);
        match (open.next(), open.next(), self.first_open_rank(a)) {
            (Some(h), None, Some(r)) if r == rank => Some(h),
            _ => None,
        }
    }

    /// Same completions, with every forced fact revealed explicitly.
    pub fn closed(&self) -> Self {
        let mut k = self.clone();
        for a in agents(self.n()) {
            let forced = {
                let mut open = k.unrevealed_ranks(a);
                match (open.next(), open.next()) {
                    (Some(r), None) => Some((r, k.unrevealed_houses(a).next().expect("one open rank, one open house"))),
                    _ => None,
                }
            };
            if let Some((r, h)) = forced {
                k.reveal(a, r, h).expect("forced fact is fresh");
            }
        }
        k
    }
}

/// Raw set-compare answers; the induced strict partial order is derived on demand.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SetCompareKnowledge {
    n: usize,
    answers: Vec<Vec<(Vec<HouseId>, HouseId)>>,
}

/// Transitively closed strict order over houses for one agent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrictOrder {
    n: usize,
    better: Vec<bool>,
}

impl StrictOrder {
    /// Whether `x` is known to beat `y`.
    pub fn better(&self, x: HouseId, y: HouseId) -> bool {
        self.better[x.0 * self.n + y.0]
    }
}

impl SetCompareKnowledge {
    pub fn new(n: usize) -> Self {
        SetCompareKnowledge { n, answers: vec![Vec::new(); n] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Records that `winner` is the favourite of `a` within `set`.
    pub fn record(&mut self, a: AgentId, set: Vec<HouseId>, winner: HouseId) -> Result<()> {
        if a.0 >= self.n {
            return Err(Error::UnknownAgent(a.0));
        }
        if let Some(h) = set.iter().find(|h| h.0 >= self.n) {
            return Err(Error::UnknownHouse(h.0));
        }
        if !set.contains(&winner) {
            return Err(Error::Inconsistent("winner not in its query set"));
        }
        self.answers[a.0].push((set, winner));
        Ok(())
    }

    pub fn answers(&self, a: AgentId) -> &[(Vec<HouseId>, HouseId)] {
        &self.answers[a.0]
    }

    pub fn total_answers(&self) -> usize {
        self.answers.iter().map(Vec::len).sum()
    }

    /// Transitive closure of the answers of `a`; errors when they are cyclic.
    pub fn order(&self, a: AgentId) -> Result<StrictOrder> {
        let n = self.n;
        let mut better = vec![false; n * n];
        for (set, w) in &self.answers[a.0] {
            for h in set {
                if h != w {
                    better[w.0 * n + h.0] = true;
                }
            }
        }
        for k in 0..n {
            for i in 0..n {
                if better[i * n + k] {
                    for j in 0..n {
                        if better[k * n + j] {
                            better[i * n + j] = true;
                        }
                    }
                }
            }
        }
        if (0..n).any(|i| better[i * n + i]) {
            return Err(Error::Inconsistent("set-compare answers are cyclic"));
        }
        Ok(StrictOrder { n, better })
    }

    /// Whether the given list respects every recorded answer of `a`.
    pub fn admits(&self, a: AgentId, list: &[HouseId]) -> bool {
        let mut pos = vec![0usize; self.n];
        for (p, h) in list.iter().enumerate() {
            pos[h.0] = p;
        }
        self.answers[a.0]
            .iter()
            .all(|(set, w)| set.iter().all(|h| pos[w.0] <= pos[h.0]))
    }
}

/// Everything revealed so far, tagged by query model.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum PartialKnowledge {
    NextBest(NextBestKnowledge),
    Hybrid(HybridKnowledge),
    SetCompare(SetCompareKnowledge),
}

impl PartialKnowledge {
    pub fn empty(model: Model, n: usize) -> Self {
        match model {
            Model::NextBest => PartialKnowledge::NextBest(NextBestKnowledge::new(n)),
            Model::Hybrid => PartialKnowledge::Hybrid(HybridKnowledge::new(n)),
            Model::SetCompare => PartialKnowledge::SetCompare(SetCompareKnowledge::new(n)),
        }
    }

    pub fn n(&self) -> usize {
        match self {
            PartialKnowledge::NextBest(k) => k.n(),
            PartialKnowledge::Hybrid(k) => k.n(),
            PartialKnowledge::SetCompare(k) => k.n(),
        }
    }

    pub fn model(&self) -> Model {
        match self {
            PartialKnowledge::NextBest(_) => Model::NextBest,
            PartialKnowledge::Hybrid(_) => Model::Hybrid,
            PartialKnowledge::SetCompare(_) => Model::SetCompare,
        }
    }

    /// Houses `a` has said something about (`rev(a)`).
    pub fn revealed(&self, a: AgentId) -> BTreeSet<HouseId> {
        match self {
            PartialKnowledge::NextBest(k) => k.prefix(a).iter().copied().collect(),
            PartialKnowledge::Hybrid(k) => houses(k.n()).filter(|&h| k.is_revealed(a, h)).collect(),
            PartialKnowledge::SetCompare(k) => {
                k.answers(a).iter().flat_map(|(s, _)| s.iter().copied()).collect()
            }
        }
    }

    /// Whether the list of `a` in some profile agrees with everything known about `a`.
    pub fn admits_list(&self, a: AgentId, list: &[HouseId]) -> bool {
        match self {
            PartialKnowledge::NextBest(k) => list.starts_with(k.prefix(a)),
            PartialKnowledge::Hybrid(k) => {
                list.iter().enumerate().all(|(p, &h)| k.house_at(a, p + 1).is_none_or(|x| x == h))
            }
            PartialKnowledge::SetCompare(k) => k.admits(a, list),
        }
    }

    /// Whether `profile` would have produced every recorded answer.
    pub fn is_consistent(&self, profile: &PreferenceProfile) -> bool {
        self.n() == profile.n() && agents(self.n()).all(|a| self.admits_list(a, profile.list(a)))
    }

    /// Hybrid view of next-best or hybrid knowledge (same set of completions).
    pub fn as_hybrid(&self) -> Option<HybridKnowledge> {
        match self {
            PartialKnowledge::NextBest(k) => Some(k.to_hybrid()),
            PartialKnowledge::Hybrid(k) => Some(k.clone()),
            PartialKnowledge::SetCompare(_) => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(rows: &[&[usize]]) -> PreferenceProfile {
        PreferenceProfile::new(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn empty_knowledge_is_consistent_with_anything() {
        let prof = p(&[&[1, 0, 2], &[2, 1, 0], &[0, 1, 2]]);
        for model in [Model::NextBest, Model::Hybrid, Model::SetCompare] {
            assert!(PartialKnowledge::empty(model, 3).is_consistent(&prof));
        }
    }

    #[test]
    fn next_best_prefix_consistency() {
        let prof = p(&[&[2, 0, 1], &[0, 1, 2], &[0, 1, 2]]);
        let mut k = NextBestKnowledge::new(3);
        k.push(AgentId(0), HouseId(2)).unwrap();
        assert!(PartialKnowledge::NextBest(k.clone()).is_consistent(&prof));
        k.push(AgentId(0), HouseId(1)).unwrap();
        assert!(!PartialKnowledge::NextBest(k.clone()).is_consistent(&prof));
        assert!(k.push(AgentId(0), HouseId(1)).is_err());
    }

    #[test]
    fn hybrid_rank_mismatch_is_inconsistent() {
        // a_0 ranks h_2 third, knowledge claims second
        let prof = p(&[&[0, 1, 2], &[0, 1, 2], &[0, 1, 2]]);
        let mut k = HybridKnowledge::new(3);
        k.reveal(AgentId(0), 2, HouseId(2)).unwrap();
        assert!(!PartialKnowledge::Hybrid(k).is_consistent(&prof));
    }

    #[test]
    fn hybrid_is_injective_both_ways() {
        let mut k = HybridKnowledge::new(3);
        assert_eq!(k.reveal(AgentId(0), 1, HouseId(2)), Ok(true));
        assert_eq!(k.reveal(AgentId(0), 1, HouseId(2)), Ok(false));
        assert!(k.reveal(AgentId(0), 2, HouseId(2)).is_err());
        assert!(k.reveal(AgentId(0), 1, HouseId(1)).is_err());
        assert!(k.reveal(AgentId(0), 4, HouseId(1)).is_err());
        assert_eq!(k.first_open_rank(AgentId(0)), Some(2));
        assert_eq!(k.last_open_rank(AgentId(0)), Some(3));
        k.reveal(AgentId(0), 3, HouseId(0)).unwrap();
        assert_eq!(k.known_rank(AgentId(0), HouseId(1)), Some(2));
        assert_eq!(k.known_rank(AgentId(1), HouseId(1)), None);
    }

    #[test]
    fn set_compare_closure_and_cycles() {
        let mut k = SetCompareKnowledge::new(3);
        let a = AgentId(0);
        k.record(a, vec![HouseId(0), HouseId(1)], HouseId(0)).unwrap();
        k.record(a, vec![HouseId(1), HouseId(2)], HouseId(1)).unwrap();
        let ord = k.order(a).unwrap();
        assert!(ord.better(HouseId(0), HouseId(2)));
        assert!(!ord.better(HouseId(2), HouseId(0)));
        k.record(a, vec![HouseId(2), HouseId(0)], HouseId(2)).unwrap();
        assert!(k.order(a).is_err());
        assert!(k.record(a, vec![HouseId(0)], HouseId(1)).is_err());
    }

    #[test]
    fn next_best_to_hybrid_keeps_prefix() {
        let k = NextBestKnowledge::from_prefixes(2, vec![vec![1], vec![]]).unwrap();
        let h = k.to_hybrid();
        assert_eq!(h.house_at(AgentId(0), 1), Some(HouseId(1)));
        assert_eq!(h.revealed_count(AgentId(1)), 0);
    }
}
