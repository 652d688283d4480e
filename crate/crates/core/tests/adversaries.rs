use house_elicit::adversary::{
    block_cycle_family, block_cycle_profile, hybrid_block_adversary, nextbest_block_adversary, setcompare_block_adversary,
    special_house_profile, SpecialHouseRoles,
};
use house_elicit::elicit::{Answer, Query};
use house_elicit::necessity::is_necessarily_optimal;
use house_elicit::optima::rank_maximal;
use house_elicit::types::{signature, Signature};
use house_elicit::*;

/// Forwards to an inner responder and checks after every answer that the
/// surviving family still explains all answers.
struct Watched {
    inner: FamilyAdversary,
    log: Vec<(Query, Answer)>,
}

impl Responder for Watched {
    fn n(&self) -> usize {
        self.inner.n()
    }

    fn respond(&mut self, q: &Query) -> Result<Answer> {
        let a = self.inner.respond(q)?;
        self.log.push((q.clone(), a));
        assert!(!self.inner.candidates().is_empty());
        for p in self.inner.candidates() {
            for (q, a) in &self.log {
                assert_eq!(house_elicit::elicit::truthful_answer(p, q), *a);
            }
        }
        Ok(a)
    }
}

#[test]
fn nextbest_adversary_forces_three_per_agent() {
    for k in 2..=4 {
        let w = Watched { inner: nextbest_block_adversary(k).unwrap(), log: Vec::new() };
        let (t, w) = Algorithm::RmNextBest.run(w).unwrap();
        assert_eq!(t.queries, 3 * (2 * k + 1));
        assert!(t.per_agent.iter().all(|&q| q == 3));
        let committed = w.inner.committed();
        assert_eq!(committed, &block_cycle_profile(k, AgentId(2 * k)).unwrap());
        assert!(t.knowledge.is_consistent(committed));
    }
}

#[test]
fn hybrid_adversary_forces_three_per_agent() {
    for k in 2..=4 {
        let (t, adv) = Algorithm::RmHybrid.run(hybrid_block_adversary(k).unwrap()).unwrap();
        assert!(t.per_agent.iter().all(|&q| q >= 3), "k={k} {:?}", t.per_agent);
        let committed = adv.committed();
        assert!(block_cycle_family(k, true).unwrap().contains(committed));
        assert!(t.knowledge.is_consistent(committed));
        assert!(is_necessarily_optimal(&t.knowledge, &t.matching, Criterion::Nrm).unwrap());
    }
}

#[test]
fn setcompare_adversary_stays_consistent() {
    let (t, adv) = Algorithm::PoSetCompare.run(setcompare_block_adversary(2).unwrap()).unwrap();
    assert!(t.knowledge.is_consistent(adv.committed()));
    assert_eq!(t.queries, 4);
}

#[test]
fn block_profile_rank_maximal_signature() {
    let p = block_cycle_profile(2, AgentId(4)).unwrap();
    let (m, s) = rank_maximal(&p);
    assert_eq!(s, Signature(vec![2, 2, 1, 0, 0]));
    assert_eq!(signature(&p, &m).unwrap(), s);
    // top three of everyone revealed already pins it down
    let k = NextBestKnowledge::from_profile(&p, &[3; 5]);
    let pk = PartialKnowledge::NextBest(k);
    assert!(is_necessarily_optimal(&pk, &m, Criterion::Nrm).unwrap());
}

#[test]
fn special_house_profiles_are_deterministic() {
    assert_eq!(special_house_profile(8, 4).unwrap(), special_house_profile(8, 4).unwrap());
    assert!(special_house_profile(10, 0).is_err());
    let roles = SpecialHouseRoles::new(27, 2).unwrap();
    assert_eq!(roles.window(), 3);
    assert_eq!(roles.special_count(), 9);
}

#[test]
fn special_house_adversary_answers_stay_feasible() {
    // ask every fact of every agent in a scrambled order; the lists must stay permutations
    let n = 8;
    let mut adv = SpecialHouseAdversary::new(n, 11).unwrap();
    for step in 0..n * n {
        let a = AgentId((step * 5) % n);
        let q = if step % 2 == 0 {
            Query::Rank { agent: a, rank: 1 + (step * 3) % n }
        } else {
            Query::House { agent: a, house: HouseId((step * 7) % n) }
        };
        adv.respond(&q).unwrap();
    }
    let p = adv.committed();
    assert!(adv.roles().admits(&p));
}
