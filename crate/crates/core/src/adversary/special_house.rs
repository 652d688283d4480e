//! Profiles where a few special houses hide inside short windows, and an
//! adversary that keeps them hidden for as long as answers allow.
//!
//! With `n = t^3` and `s = t^2`, agents split into `n - 2s` first-choice
//! agents, `s` second-choice agents and `s` special agents; houses split into
//! `n - s` first-choice houses and `s` special houses. Special agent `j` ranks
//! special house `j` somewhere in ranks `2..=t` and the other special houses in
//! the last `s` ranks. Second-choice agent `j` shares its first choice with
//! special agent `j + 1 (mod s)` and ranks special agent `j`'s first choice in
//! ranks `2..=t`. Everyone else ranks all special houses last.

use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::check_query;
use crate::elicit::{Answer, Query, Responder};
use crate::error::{Error, Result};
use crate::graph::{max_matching, BipartiteGraph};
use crate::types::{agents, AgentId, HouseId, Matching, PreferenceProfile};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecialHouseRoles {
    n: usize,
    t: usize,
    pub first_choice_agents: Vec<AgentId>,
    pub second_choice_agents: Vec<AgentId>,
    pub special_agents: Vec<AgentId>,
    pub first_choice_houses: Vec<HouseId>,
    pub special_houses: Vec<HouseId>,
    first: Vec<HouseId>,
    /// Per agent, the house confined to ranks `2..=t`, if any.
    windowed: Vec<Option<HouseId>>,
    is_special: Vec<bool>,
}

fn cube_root(n: usize) -> Option<usize> {
    (1..=n).take_while(|t| t * t * t <= n).find(|t| t * t * t == n)
}

impl SpecialHouseRoles {
    /// Assigns roles to agents and houses by shuffling with `seed`.
    pub fn new(n: usize, seed: u64) -> Result<Self> {
        let t = cube_root(n).ok_or(Error::InvalidParameter("agent count must be a cube"))?;
        if t < 2 {
            return Err(Error::InvalidParameter("agent count must be at least 8"));
        }
        let s = t * t;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut ag: Vec<usize> = (0..n).collect();
        let mut ho: Vec<usize> = (0..n).collect();
        ag.shuffle(&mut rng);
        ho.shuffle(&mut rng);
        let ag: Vec<AgentId> = ag.into_iter().map(AgentId).collect();
        let ho: Vec<HouseId> = ho.into_iter().map(HouseId).collect();
        let (a1, rest) = ag.split_at(n - 2 * s);
        let (a2, asp) = rest.split_at(s);
        let (h1, h2) = ho.split_at(n - s);

        let mut first = vec![HouseId(0); n];
        let mut windowed = vec![None; n];
        for (i, a) in a1.iter().enumerate() {
            first[a.0] = h1[i];
        }
        for (j, a) in asp.iter().enumerate() {
            first[a.0] = h1[n - 2 * s + j];
            windowed[a.0] = Some(h2[j]);
        }
        for (j, a) in a2.iter().enumerate() {
            first[a.0] = first[asp[(j + 1) % s].0];
            windowed[a.0] = Some(first[asp[j].0]);
        }
        let mut is_special = vec![false; n];
        for h in h2 {
            is_special[h.0] = true;
        }
        Ok(SpecialHouseRoles {
            n,
            t,
            first_choice_agents: a1.to_vec(),
            second_choice_agents: a2.to_vec(),
            special_agents: asp.to_vec(),
            first_choice_houses: h1.to_vec(),
            special_houses: h2.to_vec(),
            first,
            windowed,
            is_special,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Width of the early window, `n^(1/3)`.
    pub fn window(&self) -> usize {
        self.t
    }

    /// Number of special houses, `n^(2/3)`.
    pub fn special_count(&self) -> usize {
        self.t * self.t
    }

    pub fn first_choice(&self, a: AgentId) -> HouseId {
        self.first[a.0]
    }

    pub fn windowed_house(&self, a: AgentId) -> Option<HouseId> {
        self.windowed[a.0]
    }

    pub fn is_special_house(&self, h: HouseId) -> bool {
        self.is_special[h.0]
    }

    /// Whether agent `a` may rank `h` at 1-based `rank`.
    pub fn allows(&self, a: AgentId, h: HouseId, rank: usize) -> bool {
        let (n, s, t) = (self.n, self.special_count(), self.t);
        let in_window = (2..=t).contains(&rank);
        let in_tail = rank > n - s;
        if h == self.first[a.0] {
            return rank == 1;
        }
        if rank == 1 {
            return false;
        }
        if Some(h) == self.windowed[a.0] {
            return in_window;
        }
        if self.is_special[h.0] {
            return in_tail;
        }
        // special agents keep one tail slot for a non-special house
        self.special_agents.contains(&a) || !in_tail
    }

    /// Whether `profile` belongs to the family under these roles.
    pub fn admits(&self, profile: &PreferenceProfile) -> bool {
        profile.n() == self.n
            && agents(self.n).all(|a| profile.list(a).iter().enumerate().all(|(i, &h)| self.allows(a, h, i + 1)))
    }

    /// Whether some list for `a` respects both the roles and the fixed positions.
    fn feasible(&self, a: AgentId, fixed: &[Option<HouseId>]) -> bool {
        let n = self.n;
        let mut placed = vec![None; n];
        for (p, h) in fixed.iter().enumerate() {
            if let Some(h) = h {
                if !self.allows(a, *h, p + 1) {
                    return false;
                }
                placed[h.0] = Some(p);
            }
        }
        // houses on the left, positions on the right
        let mut g = BipartiteGraph::new(n, n);
        for h in 0..n {
            for p in 0..n {
                let ok = match (placed[h], fixed[p]) {
                    (Some(q), _) => q == p,
                    (None, Some(_)) => false,
                    (None, None) => self.allows(a, HouseId(h), p + 1),
                };
                if ok {
                    g.add_edge(AgentId(h), HouseId(p)).expect("in range");
                }
            }
        }
        max_matching(&g, &Matching::empty(n, n)).map_or(false, |m| m.len() == n)
    }

    /// Smallest house at each position, front to back, that keeps the list feasible.
    fn lexmin_list(&self, a: AgentId, fixed: &[Option<HouseId>]) -> Vec<HouseId> {
        let n = self.n;
        let mut fixed = fixed.to_vec();
        for p in 0..n {
            if fixed[p].is_some() {
                continue;
            }
            let used: Vec<HouseId> = fixed.iter().flatten().copied().collect();
            let h = (0..n)
                .map(HouseId)
                .filter(|h| !used.contains(h))
                .find(|&h| {
                    fixed[p] = Some(h);
                    let ok = self.feasible(a, &fixed);
                    fixed[p] = None;
                    ok
                })
                .expect("fixed positions stay feasible");
            fixed[p] = Some(h);
        }
        fixed.into_iter().map(|h| h.expect("filled")).collect()
    }
}

/// A member of the family: roles and window positions drawn from `seed`,
/// remaining positions filled with the smallest feasible house.
pub fn special_house_profile(n: usize, seed: u64) -> Result<PreferenceProfile> {
    let roles = SpecialHouseRoles::new(n, seed)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let rows = agents(n)
        .map(|a| {
            let mut fixed = vec![None; n];
            fixed[0] = Some(roles.first_choice(a));
            if let Some(h) = roles.windowed_house(a) {
                fixed[rng.gen_range(1..roles.window())] = Some(h);
            }
            roles.lexmin_list(a, &fixed).into_iter().map(|h| h.0).collect()
        })
        .collect();
    PreferenceProfile::new(rows)
}

/// Answers hybrid queries within the family, revealing first-choice houses in
/// early ranks and pushing special houses to the back while still consistent.
#[derive(Clone, Debug)]
pub struct SpecialHouseAdversary {
    roles: SpecialHouseRoles,
    fixed: Vec<Vec<Option<HouseId>>>,
}

impl SpecialHouseAdversary {
    pub fn new(n: usize, seed: u64) -> Result<Self> {
        let roles = SpecialHouseRoles::new(n, seed)?;
        Ok(SpecialHouseAdversary { fixed: vec![vec![None; n]; n], roles })
    }

    pub fn roles(&self) -> &SpecialHouseRoles {
        &self.roles
    }

    /// The lexicographically smallest member consistent with every answer so far.
    pub fn committed(&self) -> PreferenceProfile {
        let rows = agents(self.roles.n)
            .map(|a| self.roles.lexmin_list(a, &self.fixed[a.0]).into_iter().map(|h| h.0).collect())
            .collect();
        PreferenceProfile::new(rows).expect("feasible lists are permutations")
    }

    fn try_fix(&mut self, a: AgentId, h: HouseId, rank: usize) -> bool {
        let row = &mut self.fixed[a.0];
        if row[rank - 1].is_some() || row.contains(&Some(h)) {
            return false;
        }
        row[rank - 1] = Some(h);
        if self.roles.feasible(a, &self.fixed[a.0]) {
            true
        } else {
            self.fixed[a.0][rank - 1] = None;
            false
        }
    }

    fn answer_rank(&mut self, a: AgentId, rank: usize) -> HouseId {
        if let Some(h) = self.fixed[a.0][rank - 1] {
            return h;
        }
        let n = self.roles.n;
        let mut order: Vec<HouseId> = Vec::with_capacity(n);
        if (2..=self.roles.t).contains(&rank) {
            order.extend(self.roles.first_choice_houses.iter().copied());
            order.sort();
            order.extend((0..n).map(HouseId).filter(|h| self.roles.is_special_house(*h)));
        } else {
            order.extend((0..n).map(HouseId));
        }
        order.into_iter().find(|&h| self.try_fix(a, h, rank)).expect("some house fits every open rank")
    }

    fn answer_house(&mut self, a: AgentId, h: HouseId) -> usize {
        if let Some(p) = self.fixed[a.0].iter().position(|x| *x == Some(h)) {
            return p + 1;
        }
        let (n, t, s) = (self.roles.n, self.roles.t, self.roles.special_count());
        let order: Vec<usize> = if self.roles.is_special_house(h) {
            (n - s + 1..=n).chain((2..=t).rev()).chain(t + 1..=n - s).chain(1..2).collect()
        } else {
            (1..=n).collect()
        };
        order.into_iter().find(|&r| self.try_fix(a, h, r)).expect("every house fits some open rank")
    }
}

impl Responder for SpecialHouseAdversary {
    fn n(&self) -> usize {
        self.roles.n
    }

    fn respond(&mut self, q: &Query) -> Result<Answer> {
        check_query(self.roles.n, q)?;
        match *q {
            Query::Rank { agent, rank } | Query::NextBest { agent, rank } => Ok(Answer::House(self.answer_rank(agent, rank))),
            Query::House { agent, house } => Ok(Answer::Rank(self.answer_house(agent, house))),
            Query::SetCompare { .. } => Err(Error::WrongModel),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn role_sizes() {
        let r = SpecialHouseRoles::new(8, 1).unwrap();
        assert_eq!(
            (r.first_choice_agents.len(), r.second_choice_agents.len(), r.special_agents.len()),
            (0, 4, 4)
        );
        assert_eq!((r.first_choice_houses.len(), r.special_houses.len()), (4, 4));
        let r = SpecialHouseRoles::new(27, 1).unwrap();
        assert_eq!(r.first_choice_agents.len(), 9);
        assert!(SpecialHouseRoles::new(9, 0).is_err());
        assert!(SpecialHouseRoles::new(1, 0).is_err());
    }

    #[test]
    fn profiles_belong_to_family() {
        for seed in 0..5 {
            for n in [8, 27] {
                let p = special_house_profile(n, seed).unwrap();
                let r = SpecialHouseRoles::new(n, seed).unwrap();
                assert!(r.admits(&p));
                for (j, &a) in r.special_agents.iter().enumerate() {
                    assert!(p.rank(a, r.special_houses[j]) <= r.window());
                }
            }
        }
    }

    #[test]
    fn adversary_pushes_special_houses_back() {
        let mut adv = SpecialHouseAdversary::new(8, 3).unwrap();
        let a = adv.roles().special_agents[0];
        let h = adv.roles().special_houses[0];
        let r = adv.respond(&Query::House { agent: a, house: h }).unwrap();
        // its own special house must sit in the window
        assert_eq!(r, Answer::Rank(2));
        let b = adv.roles().second_choice_agents[0];
        let Answer::Rank(r) = adv.respond(&Query::House { agent: b, house: h }).unwrap() else { panic!() };
        assert_eq!(r, 5);
        assert!(adv.roles().admits(&adv.committed()));
        assert!(adv.respond(&Query::SetCompare { agent: a, set: vec![h] }).is_err());
    }
}
