//! Preference elicitation for one-sided matching (house allocation).
//!
//! Agents hold strict preferences over houses but reveal them only through
//! queries. The algorithms here ask few queries and return matchings that are
//! Pareto optimal or rank-maximal under every completion of the answers.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

mod combinat;
pub mod adversary;
pub mod baseline;
pub mod digraph;
pub mod elicit;
pub mod error;
pub mod graph;
pub mod knowledge;
pub mod necessity;
pub mod optima;
pub mod types;

pub use adversary::{random_profile, FamilyAdversary, SpecialHouseAdversary};
pub use baseline::{competitive_ratio, opt_hybrid, opt_nextbest, OptConfig, OptResult};
pub use elicit::{Algorithm, Answer, ElicitTrace, PoHybridConfig, Query, QueryOracle, Responder, Truthful};
pub use error::{Error, Result};
pub use necessity::Criterion;
pub use knowledge::{HybridKnowledge, Model, NextBestKnowledge, PartialKnowledge, SetCompareKnowledge};
pub use types::{AgentId, HouseId, Matching, Permutation, PreferenceProfile, Signature};
