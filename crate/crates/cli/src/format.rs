//! JSON shapes for instances, knowledge, traces and baseline results.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use house_elicit::elicit::{Answer, Exchange, Query};
use house_elicit::types::agents;
use house_elicit::{
    AgentId, ElicitTrace, HouseId, HybridKnowledge, Matching, NextBestKnowledge, OptResult, PartialKnowledge,
    PreferenceProfile, SetCompareKnowledge,
};

/// Which adaptive adversary an instance family comes with.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum AdversarySpec {
    BlockCycle { k: usize },
    SpecialHouse { n: usize, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Instance {
    pub family: String,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub adversary: Option<AdversarySpec>,
    /// Row `a` lists agent `a`'s houses, best first.
    pub preferences: Vec<Vec<usize>>,
}

impl Instance {
    pub fn profile(&self) -> anyhow::Result<PreferenceProfile> {
        let p = PreferenceProfile::new(self.preferences.clone())?;
        if p.n() != self.n {
            bail!("instance says n = {} but has {} preference lists", self.n, p.n());
        }
        Ok(p)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetAnswer {
    pub set: Vec<usize>,
    pub winner: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "kebab-case")]
pub enum KnowledgeFile {
    NextBest { prefixes: Vec<Vec<usize>> },
    /// Per agent, the revealed `(rank, house)` pairs.
    Hybrid { revealed: Vec<Vec<(usize, usize)>> },
    SetCompare { answers: Vec<Vec<SetAnswer>> },
}

impl From<&PartialKnowledge> for KnowledgeFile {
    fn from(pk: &PartialKnowledge) -> Self {
        let n = pk.n();
        match pk {
            PartialKnowledge::NextBest(k) => KnowledgeFile::NextBest {
                prefixes: agents(n).map(|a| k.prefix(a).iter().map(|h| h.0).collect()).collect(),
            },
            PartialKnowledge::Hybrid(k) => KnowledgeFile::Hybrid {
                revealed: agents(n)
                    .map(|a| (1..=n).filter_map(|r| k.house_at(a, r).map(|h| (r, h.0))).collect())
                    .collect(),
            },
            PartialKnowledge::SetCompare(k) => KnowledgeFile::SetCompare {
                answers: agents(n)
                    .map(|a| {
                        k.answers(a)
                            .iter()
                            .map(|(set, w)| SetAnswer { set: set.iter().map(|h| h.0).collect(), winner: w.0 })
                            .collect()
                    })
                    .collect(),
            },
        }
    }
}

impl KnowledgeFile {
    pub fn to_knowledge(&self) -> anyhow::Result<PartialKnowledge> {
        Ok(match self {
            KnowledgeFile::NextBest { prefixes } => {
                PartialKnowledge::NextBest(NextBestKnowledge::from_prefixes(prefixes.len(), prefixes.clone())?)
            }
            KnowledgeFile::Hybrid { revealed } => {
                let mut k = HybridKnowledge::new(revealed.len());
                for (a, facts) in revealed.iter().enumerate() {
                    for &(r, h) in facts {
                        k.reveal(AgentId(a), r, HouseId(h))?;
                    }
                }
                PartialKnowledge::Hybrid(k)
            }
            KnowledgeFile::SetCompare { answers } => {
                let mut k = SetCompareKnowledge::new(answers.len());
                for (a, list) in answers.iter().enumerate() {
                    for ans in list {
                        k.record(AgentId(a), ans.set.iter().map(|&h| HouseId(h)).collect(), HouseId(ans.winner))?;
                    }
                }
                PartialKnowledge::SetCompare(k)
            }
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "query", rename_all = "kebab-case")]
pub enum QueryFile {
    NextBest { agent: usize, rank: usize },
    Rank { agent: usize, rank: usize },
    House { agent: usize, house: usize },
    SetCompare { agent: usize, set: Vec<usize> },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AnswerFile {
    House(usize),
    Rank(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExchangeFile {
    #[serde(flatten)]
    pub query: QueryFile,
    pub answer: AnswerFile,
    pub wasted: bool,
}

impl From<&Query> for QueryFile {
    fn from(q: &Query) -> Self {
        match q {
            Query::NextBest { agent, rank } => QueryFile::NextBest { agent: agent.0, rank: *rank },
            Query::Rank { agent, rank } => QueryFile::Rank { agent: agent.0, rank: *rank },
            Query::House { agent, house } => QueryFile::House { agent: agent.0, house: house.0 },
            Query::SetCompare { agent, set } => {
                QueryFile::SetCompare { agent: agent.0, set: set.iter().map(|h| h.0).collect() }
            }
        }
    }
}

impl QueryFile {
    pub fn to_query(&self) -> Query {
        match self {
            QueryFile::NextBest { agent, rank } => Query::NextBest { agent: AgentId(*agent), rank: *rank },
            QueryFile::Rank { agent, rank } => Query::Rank { agent: AgentId(*agent), rank: *rank },
            QueryFile::House { agent, house } => Query::House { agent: AgentId(*agent), house: HouseId(*house) },
            QueryFile::SetCompare { agent, set } => {
                Query::SetCompare { agent: AgentId(*agent), set: set.iter().map(|&h| HouseId(h)).collect() }
            }
        }
    }
}

impl From<Answer> for AnswerFile {
    fn from(a: Answer) -> Self {
        match a {
            Answer::House(h) => AnswerFile::House(h.0),
            Answer::Rank(r) => AnswerFile::Rank(r),
        }
    }
}

impl From<AnswerFile> for Answer {
    fn from(a: AnswerFile) -> Self {
        match a {
            AnswerFile::House(h) => Answer::House(HouseId(h)),
            AnswerFile::Rank(r) => Answer::Rank(r),
        }
    }
}

impl From<&Exchange> for ExchangeFile {
    fn from(e: &Exchange) -> Self {
        ExchangeFile { query: (&e.query).into(), answer: e.answer.into(), wasted: e.wasted }
    }
}

pub fn matching_to_file(m: &Matching) -> Vec<Option<usize>> {
    agents(m.agent_count()).map(|a| m.house_of(a).map(|h| h.0)).collect()
}

pub fn matching_from_file(v: &[Option<usize>]) -> anyhow::Result<Matching> {
    let n = v.len();
    Ok(Matching::from_pairs(n, n, v.iter().enumerate().filter_map(|(a, h)| h.map(|h| (AgentId(a), HouseId(h)))))?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceFile {
    pub algorithm: String,
    pub model: String,
    pub criterion: String,
    pub n: usize,
    pub queries: usize,
    pub wasted: usize,
    pub per_agent: Vec<usize>,
    pub matching: Vec<Option<usize>>,
    pub knowledge: KnowledgeFile,
    pub transcript: Vec<ExchangeFile>,
    /// The profile that answered: the instance itself, or what an adversary committed to.
    pub profile: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub adversary: Option<AdversarySpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c0: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub set_size: Option<usize>,
}

impl TraceFile {
    pub fn new(t: &ElicitTrace, profile: &PreferenceProfile) -> Self {
        TraceFile {
            algorithm: t.algorithm.name().to_string(),
            model: model_name(t.algorithm.model()).to_string(),
            criterion: criterion_name(t.algorithm.criterion()).to_string(),
            n: profile.n(),
            queries: t.queries,
            wasted: t.wasted,
            per_agent: t.per_agent.clone(),
            matching: matching_to_file(&t.matching),
            knowledge: (&t.knowledge).into(),
            transcript: t.transcript.iter().map(Into::into).collect(),
            profile: profile.rows(),
            adversary: None,
            c0: None,
            set_size: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OptFile {
    pub model: String,
    pub criterion: String,
    pub n: usize,
    pub opt_queries: usize,
    pub explored: u64,
    pub knowledge: KnowledgeFile,
    pub matching: Vec<Option<usize>>,
}

impl OptFile {
    pub fn new(r: &OptResult, criterion: house_elicit::Criterion) -> Self {
        OptFile {
            model: model_name(r.knowledge.model()).to_string(),
            criterion: criterion_name(criterion).to_string(),
            n: r.knowledge.n(),
            opt_queries: r.queries,
            explored: r.explored,
            knowledge: (&r.knowledge).into(),
            matching: matching_to_file(&r.matching),
        }
    }
}

pub fn model_name(m: house_elicit::Model) -> &'static str {
    match m {
        house_elicit::Model::NextBest => "next-best",
        house_elicit::Model::Hybrid => "hybrid",
        house_elicit::Model::SetCompare => "set-compare",
    }
}

pub fn criterion_name(c: house_elicit::Criterion) -> &'static str {
    match c {
        house_elicit::Criterion::Npo => "npo",
        house_elicit::Criterion::Nrm => "nrm",
    }
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> anyhow::Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

/// Pretty JSON with a trailing newline, to `path` or stdout.
pub fn write_json<T: Serialize>(value: &T, path: Option<&Path>) -> anyhow::Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use house_elicit::{random_profile, Algorithm, Truthful};

    #[test]
    fn knowledge_round_trips() {
        let p = random_profile(5, 3);
        for alg in [Algorithm::RmNextBest, Algorithm::RmHybrid, Algorithm::PoSetCompare] {
            let (t, _) = alg.run(Truthful::new(p.clone())).unwrap();
            let f = KnowledgeFile::from(&t.knowledge);
            let json = serde_json::to_string(&f).unwrap();
            let back: KnowledgeFile = serde_json::from_str(&json).unwrap();
            assert_eq!(back.to_knowledge().unwrap(), t.knowledge);
            for e in &t.transcript {
                let ef = ExchangeFile::from(e);
                let back: ExchangeFile = serde_json::from_str(&serde_json::to_string(&ef).unwrap()).unwrap();
                assert_eq!(back.query.to_query(), e.query);
                assert_eq!(Answer::from(back.answer), e.answer);
            }
        }
        let m = matching_from_file(&[Some(1), None, Some(0)]).unwrap();
        assert_eq!(matching_to_file(&m), vec![Some(1), None, Some(0)]);
    }
}
