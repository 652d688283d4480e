//! Instance families, adaptive adversaries and random profiles.

mod block_cycle;
mod special_house;

pub use block_cycle::{
    block_cycle_family, block_cycle_profile, block_cycle_profile_with, nextbest_block_adversary,
    hybrid_block_adversary, setcompare_block_adversary, BLOCK_FAMILY_MAX_K,
};
pub use special_house::{special_house_profile, SpecialHouseAdversary, SpecialHouseRoles};

use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::elicit::{truthful_answer, Answer, Query, Responder};
use crate::error::{Error, Result};
use crate::types::PreferenceProfile;

/// One uniformly random list per agent, drawn from ChaCha8 seeded with `seed`.
pub fn random_profile(n: usize, seed: u64) -> PreferenceProfile {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows = (0..n)
        .map(|_| {
            let mut l: Vec<usize> = (0..n).collect();
            l.shuffle(&mut rng);
            l
        })
        .collect();
    PreferenceProfile::new(rows).expect("permutations")
}

pub(crate) fn check_query(n: usize, q: &Query) -> Result<()> {
    let a = q.agent();
    if a.0 >= n {
        return Err(Error::UnknownAgent(a.0));
    }
    match q {
        Query::NextBest { rank, .. } | Query::Rank { rank, .. } if *rank == 0 || *rank > n => {
            Err(Error::RankOutOfRange(*rank))
        }
        Query::House { house, .. } if house.0 >= n => Err(Error::UnknownHouse(house.0)),
        Query::SetCompare { set, .. } => {
            if set.is_empty() {
                return Err(Error::InvalidParameter("empty comparison set"));
            }
            match set.iter().find(|h| h.0 >= n) {
                Some(h) => Err(Error::UnknownHouse(h.0)),
                None => Ok(()),
            }
        }
        _ => Ok(()),
    }
}

/// Adversary over an explicit list of profiles.
///
/// Each query gets the answer shared by the most surviving profiles (ties go
/// to the smallest answer) and the profiles disagreeing with it are dropped.
/// The survivors are always consistent with every answer given, so the first
/// of them is a valid commitment at any time.
#[derive(Clone, Debug)]
pub struct FamilyAdversary {
    n: usize,
    candidates: Vec<PreferenceProfile>,
}

impl FamilyAdversary {
    pub fn new(candidates: Vec<PreferenceProfile>) -> Result<Self> {
        let n = candidates.first().ok_or(Error::InvalidParameter("empty family"))?.n();
        if let Some(p) = candidates.iter().find(|p| p.n() != n) {
            return Err(Error::SizeMismatch { expected: n, found: p.n() });
        }
        Ok(FamilyAdversary { n, candidates })
    }

    pub fn candidates(&self) -> &[PreferenceProfile] {
        &self.candidates
    }

    /// The profile the adversary would reveal if asked everything from now on.
    pub fn committed(&self) -> &PreferenceProfile {
        &self.candidates[0]
    }
}

impl Responder for FamilyAdversary {
    fn n(&self) -> usize {
        self.n
    }

    fn respond(&mut self, q: &Query) -> Result<Answer> {
        check_query(self.n, q)?;
        let answers: Vec<Answer> = self.candidates.iter().map(|p| truthful_answer(p, q)).collect();
        let mut sorted = answers.clone();
        sorted.sort();
        let mut best = (0, sorted[0]);
        let mut i = 0;
        while i < sorted.len() {
            let j = sorted[i..].iter().position(|x| *x != sorted[i]).map_or(sorted.len(), |d| i + d);
            if j - i > best.0 {
                best = (j - i, sorted[i]);
            }
            i = j;
        }
        let pick = best.1;
        let mut keep = answers.iter().map(|x| *x == pick);
        self.candidates.retain(|_| keep.next().unwrap());
        Ok(pick)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::{AgentId, HouseId};
    use alloc::vec;

    #[test]
    fn random_is_deterministic() {
        assert_eq!(random_profile(6, 9), random_profile(6, 9));
        assert_ne!(random_profile(6, 9), random_profile(6, 10));
        assert_eq!(random_profile(1, 3), PreferenceProfile::identity(1));
    }

    #[test]
    fn first_choice_marginal() {
        let mut count = [0usize; 3];
        for seed in 0..10_000 {
            count[random_profile(3, seed).house_at(AgentId(0), 1).0] += 1;
        }
        for c in count {
            let f = c as f64 / 10_000.0;
            assert!((f - 1.0 / 3.0).abs() <= 0.02, "{f}");
        }
    }

    #[test]
    fn majority_answer_and_filtering() {
        let fam = vec![
            PreferenceProfile::new(vec![vec![0, 1], vec![0, 1]]).unwrap(),
            PreferenceProfile::new(vec![vec![1, 0], vec![0, 1]]).unwrap(),
            PreferenceProfile::new(vec![vec![1, 0], vec![1, 0]]).unwrap(),
        ];
        let mut adv = FamilyAdversary::new(fam).unwrap();
        let a = adv.respond(&Query::Rank { agent: AgentId(0), rank: 1 }).unwrap();
        assert_eq!(a, Answer::House(HouseId(1)));
        assert_eq!(adv.candidates().len(), 2);
        // tie between the two survivors goes to the smaller answer
        let a = adv.respond(&Query::House { agent: AgentId(1), house: HouseId(0) }).unwrap();
        assert_eq!(a, Answer::Rank(1));
        assert_eq!(adv.candidates().len(), 1);
        assert!(adv.respond(&Query::Rank { agent: AgentId(2), rank: 1 }).is_err());
        assert!(adv.respond(&Query::SetCompare { agent: AgentId(0), set: vec![] }).is_err());
    }
}
