//! Agents, houses, preference profiles, matchings and their rank signatures.
//!
//! Ranks are 1-based at every public boundary (`rank(a, h) == 1` is the top
//! choice); positions inside preference lists are 0-based.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AgentId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HouseId(pub usize);

impl AgentId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl HouseId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for AgentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a{}", self.0)
    }
}

impl fmt::Display for HouseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "h{}", self.0)
    }
}

/// Iterator over all agent ids of an instance of size `n`.
pub fn agents(n: usize) -> impl Iterator<Item = AgentId> + Clone {
    (0..n).map(AgentId)
}

/// Iterator over all house ids of an instance of size `n`.
pub fn houses(n: usize) -> impl Iterator<Item = HouseId> + Clone {
    (0..n).map(HouseId)
}

/// Complete strict rankings of all `n` houses by each of the `n` agents.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PreferenceProfile {
    lists: Vec<Vec<HouseId>>,
    // position[a][h] is the 0-based position of h in a's list
    position: Vec<Vec<usize>>,
}

impl PreferenceProfile {
    /// Builds a profile from raw rows of house indices, best first.
    pub fn new(rows: Vec<Vec<usize>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidParameter("instance must have at least one agent"));
        }
        let mut lists = Vec::with_capacity(n);
        let mut position = Vec::with_capacity(n);
        for (a, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidPreferences { agent: a });
            }
            let mut pos = vec![usize::MAX; n];
            for (p, &h) in row.iter().enumerate() {
                if h >= n || pos[h] != usize::MAX {
                    return Err(Error::InvalidPreferences { agent: a });
                }
                pos[h] = p;
            }
            lists.push(row.into_iter().map(HouseId).collect());
            position.push(pos);
        }
        Ok(PreferenceProfile { lists, position })
    }

    /// Every agent ranks houses in index order.
    pub fn identity(n: usize) -> Self {
        Self::new((0..n).map(|_| (0..n).collect()).collect()).expect("identity rows are permutations")
    }

    pub fn n(&self) -> usize {
        self.lists.len()
    }

    pub fn list(&self, a: AgentId) -> &[HouseId] {
        &self.lists[a.0]
    }

    /// 1-based rank of `h` in the list of `a`.
    pub fn rank(&self, a: AgentId, h: HouseId) -> usize {
        self.position[a.0][h.0] + 1
    }

    /// House at 1-based `rank` in the list of `a`.
    pub fn house_at(&self, a: AgentId, rank: usize) -> HouseId {
        self.lists[a.0][rank - 1]
    }

    /// Whether `a` strictly prefers `x` to `y`.
    pub fn prefers(&self, a: AgentId, x: HouseId, y: HouseId) -> bool {
        self.position[a.0][x.0] < self.position[a.0][y.0]
    }

    /// The house of `set` that `a` likes best.
    pub fn best_of(&self, a: AgentId, set: &[HouseId]) -> Option<HouseId> {
        set.iter().copied().min_by_key(|h| self.position[a.0][h.0])
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.lists.iter().map(|l| l.iter().map(|h| h.0).collect()).collect()
    }

}

/// A partial injection from agents to houses.
///
/// The two sides may differ in size so the same type serves general
/// bipartite graphs; allocation instances always use `n` on both sides.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matching {
    of_agent: Vec<Option<HouseId>>,
    of_house: Vec<Option<AgentId>>,
    size: usize,
}

impl Matching {
    pub fn empty(agents: usize, houses: usize) -> Self {
        Matching { of_agent: vec![None; agents], of_house: vec![None; houses], size: 0 }
    }

    pub fn from_pairs(
        agents: usize,
        houses: usize,
        pairs: impl IntoIterator<Item = (AgentId, HouseId)>,
    ) -> Result<Self> {
        let mut m = Self::empty(agents, houses);
        for (a, h) in pairs {
            m.insert(a, h)?;
        }
        Ok(m)
    }

    /// Adds `(a, h)`; both endpoints must currently be free.
    pub fn insert(&mut self, a: AgentId, h: HouseId) -> Result<()> {
        if a.0 >= self.of_agent.len() {
            return Err(Error::UnknownAgent(a.0));
        }
        if h.0 >= self.of_house.len() {
            return Err(Error::UnknownHouse(h.0));
        }
        if self.of_agent[a.0].is_some() || self.of_house[h.0].is_some() {
            return Err(Error::NotAMatching);
        }
        self.of_agent[a.0] = Some(h);
        self.of_house[h.0] = Some(a);
        self.size += 1;
        Ok(())
    }

    /// Removes whatever pair `a` belongs to, returning the house.
    pub fn unmatch_agent(&mut self, a: AgentId) -> Option<HouseId> {
        let h = self.of_agent.get_mut(a.0)?.take()?;
        self.of_house[h.0] = None;
        self.size -= 1;
        Some(h)
    }

    pub fn house_of(&self, a: AgentId) -> Option<HouseId> {
        self.of_agent.get(a.0).copied().flatten()
    }

    pub fn agent_of(&self, h: HouseId) -> Option<AgentId> {
        self.of_house.get(h.0).copied().flatten()
    }

    pub fn contains(&self, a: AgentId, h: HouseId) -> bool {
        self.house_of(a) == Some(h)
    }

    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    pub fn agent_count(&self) -> usize {
        self.of_agent.len()
    }

    pub fn house_count(&self) -> usize {
        self.of_house.len()
    }

    /// Every agent and every house matched.
    pub fn is_perfect(&self) -> bool {
        self.size == self.of_agent.len() && self.size == self.of_house.len()
    }

    /// Pairs in ascending agent order.
    pub fn pairs(&self) -> impl Iterator<Item = (AgentId, HouseId)> + '_ {
        self.of_agent.iter().enumerate().filter_map(|(a, h)| h.map(|h| (AgentId(a), h)))
    }
}

/// Rank counts of a matching: `counts[l - 1]` agents are matched to their `l`-th choice.
///
/// The derived ordering is lexicographic, which is exactly rank dominance
/// for signatures of equal length.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Signature(pub Vec<usize>);

impl Signature {
    pub fn zeros(len: usize) -> Self {
        Signature(vec![0; len])
    }

    pub fn counts(&self) -> &[usize] {
        &self.0
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

/// Rank signature of `m` under `profile`.
pub fn signature(profile: &PreferenceProfile, m: &Matching) -> Result<Signature> {
    let n = profile.n();
    if m.agent_count() != n || m.house_count() != n {
        return Err(Error::SizeMismatch { expected: n, found: m.agent_count().max(m.house_count()) });
    }
    let mut counts = vec![0; n];
    for (a, h) in m.pairs() {
        counts[profile.rank(a, h) - 1] += 1;
    }
    Ok(Signature(counts))
}

/// Whether `s1` is strictly lexicographically greater than `s2`.
pub fn rank_dominates(s1: &Signature, s2: &Signature) -> Result<bool> {
    if s1.0.len() != s2.0.len() {
        return Err(Error::SizeMismatch { expected: s1.0.len(), found: s2.0.len() });
    }
    Ok(s1.cmp(s2) == Ordering::Greater)
}

/// An ordering of all agents, used as the picking order of serial dictatorship.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation(Vec<AgentId>);

impl Permutation {
    pub fn new(order: Vec<AgentId>) -> Result<Self> {
        let mut seen = vec![false; order.len()];
        for a in &order {
            if a.0 >= order.len() || seen[a.0] {
                return Err(Error::InvalidPermutation);
            }
            seen[a.0] = true;
        }
        Ok(Permutation(order))
    }

    pub fn identity(n: usize) -> Self {
        Permutation(agents(n).collect())
    }

    pub fn order(&self) -> &[AgentId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn distinct_first(n: usize) -> PreferenceProfile {
        PreferenceProfile::new((0..n).map(|a| (0..n).map(|j| (a + j) % n).collect()).collect())
            .unwrap()
    }

    #[test]
    fn profile_rejects_non_permutations() {
        assert_eq!(
            PreferenceProfile::new(vec![vec![0, 0], vec![0, 1]]),
            Err(Error::InvalidPreferences { agent: 0 })
        );
        assert_eq!(
            PreferenceProfile::new(vec![vec![0, 1], vec![1]]),
            Err(Error::InvalidPreferences { agent: 1 })
        );
        assert!(PreferenceProfile::new(vec![]).is_err());
    }

    #[test]
    fn ranks_are_one_based() {
        let p = PreferenceProfile::new(vec![vec![2, 0, 1], vec![0, 1, 2], vec![1, 2, 0]]).unwrap();
        assert_eq!(p.rank(AgentId(0), HouseId(2)), 1);
        assert_eq!(p.rank(AgentId(0), HouseId(1)), 3);
        assert_eq!(p.house_at(AgentId(2), 2), HouseId(2));
        assert!(p.prefers(AgentId(0), HouseId(0), HouseId(1)));
        assert_eq!(p.best_of(AgentId(2), &[HouseId(0), HouseId(2)]), Some(HouseId(2)));
    }

    #[test]
    fn all_first_choices_signature() {
        let p = distinct_first(3);
        let m = Matching::from_pairs(3, 3, (0..3).map(|i| (AgentId(i), HouseId(i)))).unwrap();
        assert_eq!(signature(&p, &m).unwrap(), Signature(vec![3, 0, 0]));
    }

    #[test]
    fn matching_rejects_reuse() {
        let mut m = Matching::empty(2, 2);
        m.insert(AgentId(0), HouseId(1)).unwrap();
        assert_eq!(m.insert(AgentId(1), HouseId(1)), Err(Error::NotAMatching));
        assert_eq!(m.insert(AgentId(0), HouseId(0)), Err(Error::NotAMatching));
        assert_eq!(m.insert(AgentId(2), HouseId(0)), Err(Error::UnknownAgent(2)));
        assert_eq!(m.unmatch_agent(AgentId(0)), Some(HouseId(1)));
        assert!(m.is_empty());
    }

    #[test]
    fn dominance_examples() {
        let s = |v: &[usize]| Signature(v.to_vec());
        assert!(!rank_dominates(&s(&[2, 2, 1]), &s(&[2, 2, 1])).unwrap());
        assert!(rank_dominates(&s(&[2, 0, 0]), &s(&[0, 2, 0])).unwrap());
        assert!(rank_dominates(&s(&[1]), &s(&[1, 0])).is_err());
    }

    #[test]
    fn permutation_validation() {
        assert!(Permutation::new(vec![AgentId(1), AgentId(0)]).is_ok());
        assert_eq!(Permutation::new(vec![AgentId(0), AgentId(0)]), Err(Error::InvalidPermutation));
        assert_eq!(Permutation::new(vec![AgentId(2), AgentId(0)]), Err(Error::InvalidPermutation));
    }
}
