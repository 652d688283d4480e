use std::collections::VecDeque;

use anyhow::bail;
use num_rational::Ratio;
use serde::Serialize;

use house_elicit::adversary::{
    block_cycle_profile, hybrid_block_adversary, nextbest_block_adversary, setcompare_block_adversary,
    special_house_profile,
};
use house_elicit::elicit::{Answer, Query};
use house_elicit::necessity::{bruteforce, is_necessarily_optimal};
use house_elicit::{
    random_profile, AgentId, Algorithm, Criterion, ElicitTrace, Model, OptConfig, OptResult, PoHybridConfig,
    PreferenceProfile, QueryOracle, Responder, SpecialHouseAdversary, Truthful,
};

use crate::format::{matching_from_file, AdversarySpec, Instance, TraceFile};
use crate::{usage, AlgOptions, FamilyArg};

pub fn generate(
    family: FamilyArg,
    n: Option<usize>,
    k: Option<usize>,
    special: Option<usize>,
    seed: u64,
) -> anyhow::Result<Instance> {
    Ok(match family {
        FamilyArg::Random => {
            let n = n.ok_or_else(|| usage("random instances need --n"))?;
            if n == 0 {
                bail!(usage("--n must be positive"));
            }
            Instance {
                family: family.name().into(),
                n,
                seed: Some(seed),
                k: None,
                adversary: None,
                preferences: random_profile(n, seed).rows(),
            }
        }
        FamilyArg::BlockCycle => {
            let k = k.ok_or_else(|| usage("block-cycle instances need --k"))?;
            let special = AgentId(special.unwrap_or(2 * k));
            let p = block_cycle_profile(k, special).map_err(|e| usage(e.to_string()))?;
            Instance {
                family: family.name().into(),
                n: p.n(),
                seed: None,
                k: Some(k),
                adversary: Some(AdversarySpec::BlockCycle { k }),
                preferences: p.rows(),
            }
        }
        FamilyArg::SpecialHouse => {
            let n = n.ok_or_else(|| usage("special-house instances need --n"))?;
            let p = special_house_profile(n, seed).map_err(|e| usage(e.to_string()))?;
            Instance {
                family: family.name().into(),
                n,
                seed: Some(seed),
                k: None,
                adversary: Some(AdversarySpec::SpecialHouse { n, seed }),
                preferences: p.rows(),
            }
        }
    })
}

fn config(opts: &AlgOptions) -> anyhow::Result<PoHybridConfig> {
    if opts.c0 * 3 <= Ratio::from_integer(1) || opts.c0 > Ratio::from_integer(1) {
        bail!(usage("--c0 must lie in (1/3, 1]"));
    }
    Ok(PoHybridConfig { c0: opts.c0, early_exit: opts.early_exit })
}

fn trace_file(alg: Algorithm, opts: &AlgOptions, t: &ElicitTrace, answered: &PreferenceProfile, adv: Option<AdversarySpec>) -> TraceFile {
    let mut f = TraceFile::new(t, answered);
    f.adversary = adv;
    if alg == Algorithm::PoHybrid {
        f.c0 = Some(opts.c0.to_string());
    }
    if let Algorithm::PoSetCompareK(k) = alg {
        f.set_size = Some(k);
    }
    f
}

/// Runs `alg` against the instance's adversary (unless `--truthful`) or its preferences.
pub fn run_instance(inst: &Instance, alg: Algorithm, opts: &AlgOptions) -> anyhow::Result<TraceFile> {
    let cfg = config(opts)?;
    let adversary = if opts.truthful { None } else { inst.adversary.clone() };
    let (t, answered) = match &adversary {
        None => {
            let p = inst.profile()?;
            let (t, _) = alg.run_with(Truthful::new(p.clone()), &cfg)?;
            (t, p)
        }
        Some(AdversarySpec::BlockCycle { k }) => {
            let adv = match alg.model() {
                Model::NextBest => nextbest_block_adversary(*k),
                Model::Hybrid => hybrid_block_adversary(*k),
                Model::SetCompare => setcompare_block_adversary(*k),
            }
            .map_err(|e| usage(e.to_string()))?;
            let (t, adv) = alg.run_with(adv, &cfg)?;
            (t, adv.committed().clone())
        }
        Some(AdversarySpec::SpecialHouse { n, seed }) => {
            if alg.model() == Model::SetCompare {
                bail!(usage("the special-house adversary answers next-best and hybrid queries only"));
            }
            let (t, adv) = alg.run_with(SpecialHouseAdversary::new(*n, *seed)?, &cfg)?;
            (t, adv.committed())
        }
    };
    Ok(trace_file(alg, opts, &t, &answered, adversary))
}

/// Hands out recorded answers in order and insists on the recorded questions.
struct Scripted {
    n: usize,
    script: VecDeque<(Query, Answer)>,
}

impl Responder for Scripted {
    fn n(&self) -> usize {
        self.n
    }

    fn respond(&mut self, q: &Query) -> house_elicit::Result<Answer> {
        match self.script.pop_front() {
            Some((want, a)) if want == *q => Ok(a),
            _ => Err(house_elicit::Error::Inconsistent("transcript does not match the replay")),
        }
    }
}

fn parse_model(s: &str) -> anyhow::Result<Model> {
    Ok(match s {
        "next-best" => Model::NextBest,
        "hybrid" => Model::Hybrid,
        "set-compare" => Model::SetCompare,
        _ => bail!(usage(format!("unknown model {s}"))),
    })
}

fn parse_criterion(s: &str) -> anyhow::Result<Criterion> {
    Ok(match s {
        "npo" => Criterion::Npo,
        "nrm" => Criterion::Nrm,
        _ => bail!(usage(format!("unknown criterion {s}"))),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct Verdict {
    pub certified: bool,
    pub replay_matches: bool,
    pub consistent_with_profile: bool,
    pub perfect: bool,
    pub necessarily_optimal: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bruteforce: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

/// Replays the transcript into fresh knowledge, compares it with the recorded
/// one, and checks the matching against it.
pub fn verify_trace(t: &TraceFile, with_bruteforce: bool) -> anyhow::Result<Verdict> {
    let model = parse_model(&t.model)?;
    let criterion = parse_criterion(&t.criterion)?;
    let knowledge = t.knowledge.to_knowledge()?;
    if knowledge.model() != model || knowledge.n() != t.n {
        bail!(usage("knowledge does not match the trace header"));
    }
    let m = matching_from_file(&t.matching)?;
    if m.agent_count() != t.n {
        bail!(usage("matching does not match the trace header"));
    }
    let script = t
        .transcript
        .iter()
        .filter(|e| !e.wasted)
        .map(|e| (e.query.to_query(), Answer::from(e.answer)))
        .collect();
    let mut oracle = QueryOracle::new(Scripted { n: t.n, script }, model);
    let mut replay_ok = true;
    for e in &t.transcript {
        let r = match e.query.to_query() {
            Query::NextBest { agent, .. } => oracle.next_best(agent).map(drop),
            Query::Rank { agent, rank } => oracle.rank(agent, rank).map(drop),
            Query::House { agent, house } => oracle.house(agent, house).map(drop),
            Query::SetCompare { agent, set } => oracle.best_of(agent, &set).map(drop),
        };
        if r.is_err() {
            replay_ok = false;
            break;
        }
    }
    let replay_matches = replay_ok
        && oracle.knowledge() == &knowledge
        && oracle.transcript().iter().map(|e| e.wasted).eq(t.transcript.iter().map(|e| e.wasted))
        && t.queries == t.transcript.len();
    let consistent = PreferenceProfile::new(t.profile.clone()).map(|p| knowledge.is_consistent(&p)).unwrap_or(false);
    let perfect = m.is_perfect();
    let necessary = perfect && is_necessarily_optimal(&knowledge, &m, criterion)?;
    let brute = if with_bruteforce { Some(perfect && bruteforce(&knowledge, &m, criterion)?) } else { None };
    let certified = replay_matches && consistent && necessary && brute.unwrap_or(true);
    let reason = (!certified).then(|| {
        [
            (!replay_matches).then_some("transcript replay differs"),
            (!consistent).then_some("knowledge contradicts the answering profile"),
            (!perfect).then_some("matching is not perfect"),
            (perfect && !necessary).then_some("matching is not necessarily optimal"),
            (brute == Some(false)).then_some("exhaustive check failed"),
        ]
        .into_iter()
        .flatten()
        .collect::<Vec<_>>()
        .join("; ")
    });
    Ok(Verdict {
        certified,
        replay_matches,
        consistent_with_profile: consistent,
        perfect,
        necessarily_optimal: necessary,
        bruteforce: brute,
        reason,
    })
}

pub fn optimum(p: &PreferenceProfile, model: Model, criterion: Criterion, state_limit: u64) -> anyhow::Result<OptResult> {
    let cfg = OptConfig { state_limit, ..OptConfig::default() };
    Ok(match model {
        Model::NextBest => house_elicit::baseline::opt_nextbest_with(p, criterion, &cfg)?,
        Model::Hybrid => house_elicit::baseline::opt_hybrid_with(p, criterion, &cfg)?,
        Model::SetCompare => bail!(usage("no offline optimum is computed for set-compare queries")),
    })
}

/// `p/q` and the same value to six decimals.
pub fn show_ratio(r: Ratio<u64>) -> (String, String) {
    let exact = format!("{}/{}", r.numer(), r.denom());
    // scale by 10^6 with rounding half up, in integers
    let scaled = (r.numer() * 1_000_000 * 2 + r.denom()) / (2 * r.denom());
    (exact, format!("{}.{:06}", scaled / 1_000_000, scaled % 1_000_000))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratio_text() {
        assert_eq!(show_ratio(Ratio::new(15, 11)), ("15/11".into(), "1.363636".into()));
        assert_eq!(show_ratio(Ratio::new(1, 1)), ("1/1".into(), "1.000000".into()));
        assert_eq!(show_ratio(Ratio::new(2, 3)), ("2/3".into(), "0.666667".into()));
    }
}
