//! Query oracles over hidden preferences and the online elicitation algorithms.

mod po;
mod rm;

pub use po::{
    checkpoint_schedule, elicit_po_hybrid, elicit_po_setcompare, elicit_po_setcompare_k, PoHybridConfig, Schedule,
};
pub use rm::{elicit_rm_hybrid, elicit_rm_nextbest};

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::knowledge::{Model, PartialKnowledge};
use crate::necessity::Criterion;
use crate::types::{AgentId, HouseId, Matching, PreferenceProfile};

/// A single question to one agent.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Query {
    /// Next house of the agent's list; `rank` is the position being revealed.
    NextBest { agent: AgentId, rank: usize },
    /// Which house sits at `rank`.
    Rank { agent: AgentId, rank: usize },
    /// At which rank sits `house`.
    House { agent: AgentId, house: HouseId },
    /// Favourite house within `set`.
    SetCompare { agent: AgentId, set: Vec<HouseId> },
}

impl Query {
    pub fn agent(&self) -> AgentId {
        match self {
            Query::NextBest { agent, .. }
            | Query::Rank { agent, .. }
            | Query::House { agent, .. }
            | Query::SetCompare { agent, .. } => *agent,
        }
    }

    pub fn model(&self) -> Model {
        match self {
            Query::NextBest { .. } => Model::NextBest,
            Query::Rank { .. } | Query::House { .. } => Model::Hybrid,
            Query::SetCompare { .. } => Model::SetCompare,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Answer {
    House(HouseId),
    Rank(usize),
}

/// Whoever answers queries: the truthful profile or an adversary.
pub trait Responder {
    fn n(&self) -> usize;
    fn respond(&mut self, q: &Query) -> Result<Answer>;
}

/// Answers from a fixed profile.
#[derive(Clone, Debug)]
pub struct Truthful {
    profile: PreferenceProfile,
}

impl Truthful {
    pub fn new(profile: PreferenceProfile) -> Self {
        Truthful { profile }
    }

    pub fn profile(&self) -> &PreferenceProfile {
        &self.profile
    }
}

/// What a profile answers to `q`.
pub fn truthful_answer(profile: &PreferenceProfile, q: &Query) -> Answer {
    match q {
        Query::NextBest { agent, rank } | Query::Rank { agent, rank } => Answer::House(profile.house_at(*agent, *rank)),
        Query::House { agent, house } => Answer::Rank(profile.rank(*agent, *house)),
        Query::SetCompare { agent, set } => Answer::House(profile.best_of(*agent, set).expect("nonempty set")),
    }
}

impl Responder for Truthful {
    fn n(&self) -> usize {
        self.profile.n()
    }

    fn respond(&mut self, q: &Query) -> Result<Answer> {
        Ok(truthful_answer(&self.profile, q))
    }
}

/// One question with its answer. `wasted` marks questions whose answer was already implied.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Exchange {
    pub query: Query,
    pub answer: Answer,
    pub wasted: bool,
}

/// Mediates between an algorithm and a responder, enforcing one query model
/// and recording everything revealed.
#[derive(Clone, Debug)]
pub struct QueryOracle<R> {
    responder: R,
    knowledge: PartialKnowledge,
    transcript: Vec<Exchange>,
    per_agent: Vec<usize>,
}

impl<R: Responder> QueryOracle<R> {
    pub fn new(responder: R, model: Model) -> Self {
        let n = responder.n();
        QueryOracle {
            responder,
            knowledge: PartialKnowledge::empty(model, n),
            transcript: Vec::new(),
            per_agent: vec![0; n],
        }
    }

    pub fn n(&self) -> usize {
        self.knowledge.n()
    }

    pub fn model(&self) -> Model {
        self.knowledge.model()
    }

    pub fn knowledge(&self) -> &PartialKnowledge {
        &self.knowledge
    }

    pub fn transcript(&self) -> &[Exchange] {
        &self.transcript
    }

    pub fn query_count(&self) -> usize {
        self.transcript.len()
    }

    pub fn per_agent(&self) -> &[usize] {
        &self.per_agent
    }

    pub fn responder(&self) -> &R {
        &self.responder
    }

    pub fn into_responder(self) -> R {
        self.responder
    }

    /// Rank of `h` for `a` if already implied by hybrid answers.
    pub fn known_rank(&self, a: AgentId, h: HouseId) -> Option<usize> {
        match &self.knowledge {
            PartialKnowledge::Hybrid(k) => k.known_rank(a, h),
            _ => None,
        }
    }

    /// House at `rank` for `a` if already implied by hybrid answers.
    pub fn known_house_at(&self, a: AgentId, rank: usize) -> Option<HouseId> {
        match &self.knowledge {
            PartialKnowledge::Hybrid(k) => k.known_house_at(a, rank),
            _ => None,
        }
    }

    fn check_agent(&self, a: AgentId) -> Result<()> {
        if a.0 >= self.n() {
            return Err(Error::UnknownAgent(a.0));
        }
        Ok(())
    }

    fn log(&mut self, query: Query, answer: Answer, wasted: bool) {
        self.per_agent[query.agent().0] += 1;
        self.transcript.push(Exchange { query, answer, wasted });
    }

    /// Next house in the list of `a`.
    pub fn next_best(&mut self, a: AgentId) -> Result<HouseId> {
        self.check_agent(a)?;
        let PartialKnowledge::NextBest(k) = &self.knowledge else { return Err(Error::WrongModel) };
        let rank = k.revealed_count(a) + 1;
        if rank > self.n() {
            return Err(Error::InvalidParameter("the whole list is already revealed"));
        }
        let q = Query::NextBest { agent: a, rank };
        let Answer::House(h) = self.responder.respond(&q)? else {
            return Err(Error::Inconsistent("next-best query answered with a rank"));
        };
        let PartialKnowledge::NextBest(k) = &mut self.knowledge else { unreachable!() };
        k.push(a, h)?;
        self.log(q, Answer::House(h), false);
        Ok(h)
    }

    /// House at `rank` for `a`.
    pub fn rank(&mut self, a: AgentId, rank: usize) -> Result<HouseId> {
        self.check_agent(a)?;
        if rank == 0 || rank > self.n() {
            return Err(Error::RankOutOfRange(rank));
        }
        let PartialKnowledge::Hybrid(k) = &self.knowledge else { return Err(Error::WrongModel) };
        let q = Query::Rank { agent: a, rank };
        if let Some(h) = k.known_house_at(a, rank) {
            self.log(q, Answer::House(h), true);
            return Ok(h);
        }
        let Answer::House(h) = self.responder.respond(&q)? else {
            return Err(Error::Inconsistent("rank query answered with a rank"));
        };
        let PartialKnowledge::Hybrid(k) = &mut self.knowledge else { unreachable!() };
        k.reveal(a, rank, h)?;
        self.log(q, Answer::House(h), false);
        Ok(h)
    }

    /// Rank of `h` for `a`.
    pub fn house(&mut self, a: AgentId, h: HouseId) -> Result<usize> {
        self.check_agent(a)?;
        if h.0 >= self.n() {
            return Err(Error::UnknownHouse(h.0));
        }
        let PartialKnowledge::Hybrid(k) = &self.knowledge else { return Err(Error::WrongModel) };
        let q = Query::House { agent: a, house: h };
        if let Some(r) = k.known_rank(a, h) {
            self.log(q, Answer::Rank(r), true);
            return Ok(r);
        }
        let Answer::Rank(r) = self.responder.respond(&q)? else {
            return Err(Error::Inconsistent("house query answered with a house"));
        };
        let PartialKnowledge::Hybrid(k) = &mut self.knowledge else { unreachable!() };
        k.reveal(a, r, h)?;
        self.log(q, Answer::Rank(r), false);
        Ok(r)
    }

    /// Favourite house of `a` within `set`.
    pub fn best_of(&mut self, a: AgentId, set: &[HouseId]) -> Result<HouseId> {
        self.check_agent(a)?;
        if set.is_empty() {
            return Err(Error::InvalidParameter("empty comparison set"));
        }
        if let Some(h) = set.iter().find(|h| h.0 >= self.n()) {
            return Err(Error::UnknownHouse(h.0));
        }
        let PartialKnowledge::SetCompare(k) = &self.knowledge else { return Err(Error::WrongModel) };
        let q = Query::SetCompare { agent: a, set: set.to_vec() };
        let order = k.order(a)?;
        if let Some(&w) = set.iter().find(|&&w| set.iter().all(|&x| x == w || order.better(w, x))) {
            self.log(q, Answer::House(w), true);
            return Ok(w);
        }
        let Answer::House(w) = self.responder.respond(&q)? else {
            return Err(Error::Inconsistent("comparison answered with a rank"));
        };
        let PartialKnowledge::SetCompare(k) = &mut self.knowledge else { unreachable!() };
        k.record(a, set.to_vec(), w)?;
        k.order(a)?;
        self.log(q, Answer::House(w), false);
        Ok(w)
    }

    /// Snapshot of the run so far, with `matching` as its output.
    pub fn finish(&self, algorithm: Algorithm, matching: Matching) -> ElicitTrace {
        ElicitTrace {
            algorithm,
            matching,
            queries: self.query_count(),
            per_agent: self.per_agent.clone(),
            wasted: self.transcript.iter().filter(|e| e.wasted).count(),
            knowledge: self.knowledge.clone(),
            transcript: self.transcript.clone(),
        }
    }
}

/// The shipped elicitation algorithms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    PoSetCompare,
    PoSetCompareK(usize),
    PoHybrid,
    RmNextBest,
    RmHybrid,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::PoSetCompare => "po-setcompare",
            Algorithm::PoSetCompareK(_) => "po-setcompare-k",
            Algorithm::PoHybrid => "po-hybrid",
            Algorithm::RmNextBest => "rm-nextbest",
            Algorithm::RmHybrid => "rm-hybrid",
        }
    }

    pub fn model(self) -> Model {
        match self {
            Algorithm::PoSetCompare | Algorithm::PoSetCompareK(_) => Model::SetCompare,
            Algorithm::PoHybrid | Algorithm::RmHybrid => Model::Hybrid,
            Algorithm::RmNextBest => Model::NextBest,
        }
    }

    pub fn criterion(self) -> Criterion {
        match self {
            Algorithm::PoSetCompare | Algorithm::PoSetCompareK(_) | Algorithm::PoHybrid => Criterion::Npo,
            Algorithm::RmNextBest | Algorithm::RmHybrid => Criterion::Nrm,
        }
    }

    /// Runs the algorithm against `responder` with default parameters.
    pub fn run<R: Responder>(self, responder: R) -> Result<(ElicitTrace, R)> {
        self.run_with(responder, &PoHybridConfig::default())
    }

    pub fn run_with<R: Responder>(self, responder: R, cfg: &PoHybridConfig) -> Result<(ElicitTrace, R)> {
        let mut oracle = QueryOracle::new(responder, self.model());
        let trace = match self {
            Algorithm::PoSetCompare => elicit_po_setcompare(&mut oracle)?,
            Algorithm::PoSetCompareK(k) => elicit_po_setcompare_k(&mut oracle, k)?,
            Algorithm::PoHybrid => elicit_po_hybrid(&mut oracle, cfg)?,
            Algorithm::RmNextBest => elicit_rm_nextbest(&mut oracle)?,
            Algorithm::RmHybrid => elicit_rm_hybrid(&mut oracle)?,
        };
        Ok((trace, oracle.into_responder()))
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Result of one elicitation run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElicitTrace {
    pub algorithm: Algorithm,
    pub matching: Matching,
    pub queries: usize,
    pub per_agent: Vec<usize>,
    pub wasted: usize,
    pub knowledge: PartialKnowledge,
    pub transcript: Vec<Exchange>,
}
