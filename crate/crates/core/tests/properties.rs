use proptest::prelude::*;

use house_elicit::knowledge::PartialKnowledge;
use house_elicit::necessity::{completion_count, is_npo_hybrid, sd_certificate};
use house_elicit::optima::{is_pareto_optimal, rank_maximal, rank_maximal_run, serial_dictatorship, RankTable};
use house_elicit::types::{agents, Permutation};
use house_elicit::*;

fn profile(max_n: usize) -> impl Strategy<Value = PreferenceProfile> {
    (1..=max_n, any::<u64>()).prop_map(|(n, seed)| random_profile(n, seed))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn serial_dictatorship_is_pareto_optimal(p in profile(7), seed in any::<u64>()) {
        let n = p.n();
        let order = random_profile(n, seed).list(AgentId(0)).iter().map(|h| AgentId(h.0)).collect();
        let m = serial_dictatorship(&p, &Permutation::new(order).unwrap()).unwrap();
        prop_assert!(m.is_perfect());
        prop_assert!(is_pareto_optimal(&p, &m).unwrap());
    }

    #[test]
    fn rank_maximal_is_perfect_and_pareto_optimal(p in profile(8)) {
        let (m, _) = rank_maximal(&p);
        prop_assert!(m.is_perfect());
        prop_assert!(is_pareto_optimal(&p, &m).unwrap());
    }

    #[test]
    fn nextbest_asks_each_agent_until_it_settles(p in profile(8)) {
        let n = p.n();
        let (t, _) = Algorithm::RmNextBest.run(Truthful::new(p.clone())).unwrap();
        prop_assert!(t.knowledge.is_consistent(&p));
        prop_assert_eq!(t.queries, t.transcript.len());
        prop_assert_eq!(t.wasted, 0);
        if n > 2 {
            let run = rank_maximal_run(&RankTable::from_profile(&p)).unwrap();
            for a in agents(n) {
                prop_assert_eq!(t.per_agent[a.0], run.leave_round(a).min(n - 1));
            }
        }
        prop_assert_eq!(t.matching.is_perfect(), true);
        prop_assert_eq!(house_elicit::types::signature(&p, &t.matching).unwrap(), rank_maximal(&p).1);
    }

    #[test]
    fn hybrid_outputs_are_certified(p in profile(9)) {
        for alg in [Algorithm::PoHybrid, Algorithm::RmHybrid] {
            let (t, _) = alg.run(Truthful::new(p.clone())).unwrap();
            prop_assert!(t.knowledge.is_consistent(&p));
            prop_assert!(t.matching.is_perfect());
            prop_assert!(house_elicit::necessity::is_necessarily_optimal(&t.knowledge, &t.matching, alg.criterion()).unwrap());
        }
    }

    #[test]
    fn certificate_reproduces_the_matching(p in profile(8)) {
        let (t, _) = Algorithm::PoHybrid.run(Truthful::new(p.clone())).unwrap();
        let k = t.knowledge.as_hybrid().unwrap();
        prop_assert!(is_npo_hybrid(&k, &t.matching).unwrap());
        let sigma = sd_certificate(&k, &t.matching).unwrap().unwrap();
        prop_assert_eq!(serial_dictatorship(&p, &sigma).unwrap(), t.matching);
    }

    #[test]
    fn closing_knowledge_keeps_completions(p in profile(5), ranks in proptest::collection::vec(proptest::collection::vec(1usize..=5, 0..5), 5)) {
        let n = p.n();
        let ranks: Vec<Vec<usize>> = ranks.into_iter().take(n).map(|r| r.into_iter().filter(|&x| x <= n).collect()).collect();
        let k = HybridKnowledge::from_profile(&p, &ranks);
        let before = completion_count(&PartialKnowledge::Hybrid(k.clone()));
        let after = completion_count(&PartialKnowledge::Hybrid(k.closed()));
        prop_assert_eq!(before, after);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn online_never_beats_offline(p in profile(4)) {
        let (t, _) = Algorithm::RmNextBest.run(Truthful::new(p.clone())).unwrap();
        let opt = opt_nextbest(&p, Criterion::Nrm).unwrap();
        prop_assert!(competitive_ratio(t.queries, &opt).unwrap() >= num_rational::Ratio::from_integer(1));
        let h = opt_hybrid(&p, Criterion::Nrm).unwrap();
        prop_assert!(h.queries <= opt.queries);
        let npo = opt_nextbest(&p, Criterion::Npo).unwrap();
        prop_assert!(npo.queries + 1 >= p.n());
        for r in [&opt, &h] {
            prop_assert!(house_elicit::necessity::bruteforce(&r.knowledge, &r.matching, Criterion::Nrm).unwrap());
        }
        prop_assert!(house_elicit::necessity::bruteforce(&npo.knowledge, &npo.matching, Criterion::Npo).unwrap());
    }
}
