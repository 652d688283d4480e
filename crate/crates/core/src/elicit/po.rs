//! Elicitation of necessarily Pareto optimal matchings.

use alloc::vec;
use alloc::vec::Vec;

use num_rational::Ratio;
use num_traits::{CheckedAdd, CheckedMul, CheckedSub};

use super::{Algorithm, ElicitTrace, QueryOracle, Responder};
use crate::digraph::Digraph;
use crate::error::{Error, Result};
use crate::graph::{max_matching, BipartiteGraph};
use crate::types::{agents, houses, AgentId, HouseId, Matching};

/// Serial dictatorship in index order: each agent names its favourite of the
/// houses still free. The last agent needs no query.
pub fn elicit_po_setcompare<R: Responder>(o: &mut QueryOracle<R>) -> Result<ElicitTrace> {
    let n = o.n();
    let mut m = Matching::empty(n, n);
    for a in agents(n) {
        let free: Vec<HouseId> = houses(n).filter(|&h| m.agent_of(h).is_none()).collect();
        let h = if free.len() == 1 { free[0] } else { o.best_of(a, &free)? };
        m.insert(a, h)?;
    }
    Ok(o.finish(Algorithm::PoSetCompare, m))
}

/// Serial dictatorship with comparison sets of at most `k` houses: a knockout
/// over the free houses that carries the running winner into each query.
pub fn elicit_po_setcompare_k<R: Responder>(o: &mut QueryOracle<R>, k: usize) -> Result<ElicitTrace> {
    if k < 2 {
        return Err(Error::InvalidParameter("comparison sets need room for two houses"));
    }
    let n = o.n();
    let mut m = Matching::empty(n, n);
    for a in agents(n) {
        let free: Vec<HouseId> = houses(n).filter(|&h| m.agent_of(h).is_none()).collect();
        let mut winner = free[0];
        for chunk in free[1..].chunks(k - 1) {
            let mut set = vec![winner];
            set.extend_from_slice(chunk);
            winner = o.best_of(a, &set)?;
        }
        m.insert(a, winner)?;
    }
    Ok(o.finish(Algorithm::PoSetCompareK(k), m))
}

/// Parameters of the rank-query algorithm for Pareto optimality.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PoHybridConfig {
    /// Growth parameter, must exceed 1/3.
    pub c0: Ratio<i64>,
    /// Stop rank queries as soon as the matching is perfect.
    pub early_exit: bool,
}

impl Default for PoHybridConfig {
    fn default() -> Self {
        PoHybridConfig { c0: Ratio::new(7, 20), early_exit: false }
    }
}

/// `⌈n^x⌉`, snapping values within 1e-9 of an integer to it.
fn ceil_pow(n: usize, x: Ratio<i128>) -> usize {
    let v = libm::pow(n as f64, *x.numer() as f64 / *x.denom() as f64);
    let r = libm::round(v);
    if libm::fabs(v - r) < 1e-9 {
        r as usize
    } else {
        libm::ceil(v) as usize
    }
}

/// Exponents `c_0, c_1, ...` with `c_{j+1} = (3 c_j + 1)/2 + c_0 - 1` and the
/// checkpoints `⌈n^{c_j}⌉` they induce.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Schedule {
    n: usize,
    c0: Ratio<i128>,
    // None once the exponent passes 1 (no checkpoint left) or arithmetic overflows
    c: Option<Ratio<i128>>,
}

impl Schedule {
    pub fn new(n: usize, c0: Ratio<i64>) -> Result<Self> {
        let c0 = Ratio::new(*c0.numer() as i128, *c0.denom() as i128);
        if c0 * 3 <= Ratio::from_integer(1) {
            return Err(Error::InvalidParameter("c0 must exceed 1/3"));
        }
        let c = (c0 <= Ratio::from_integer(1)).then_some(c0);
        Ok(Schedule { n, c0, c })
    }

    pub fn exponent(&self) -> Option<Ratio<i128>> {
        self.c
    }

    /// `⌈n^{c_j}⌉`.
    pub fn checkpoint(&self) -> Option<usize> {
        self.c.map(|c| ceil_pow(self.n, c))
    }

    /// `⌈n^{(c_j + 1)/2}⌉`: how many agents may stay unmatched when stopping here.
    pub fn slack(&self) -> Option<usize> {
        self.c.map(|c| ceil_pow(self.n, (c + 1) / 2))
    }

    fn step(&mut self) {
        let one = Ratio::from_integer(1);
        self.c = self.c.and_then(|c| {
            let next = c
                .checked_mul(&Ratio::from_integer(3))?
                .checked_add(&one)?
                .checked_mul(&Ratio::new(1, 2))?
                .checked_add(&self.c0)?
                .checked_sub(&one)?;
            (next <= one).then_some(next)
        });
    }

    /// Advances at least once, then until the checkpoint lies beyond round `i`.
    ///
    /// Consecutive exponents can share a ceiling; skipping them keeps the
    /// evaluated checkpoints strictly increasing.
    pub fn advance_past(&mut self, i: usize) {
        self.step();
        while self.checkpoint().is_some_and(|cp| cp <= i) {
            self.step();
        }
    }
}

/// Checkpoints visited by a run that never stops early.
pub fn checkpoint_schedule(n: usize, c0: Ratio<i64>) -> Result<Vec<usize>> {
    let mut s = Schedule::new(n, c0)?;
    let mut out = Vec::new();
    while let Some(cp) = s.checkpoint() {
        if cp > n {
            break;
        }
        out.push(cp);
        s.advance_past(cp);
    }
    Ok(out)
}

/// Removes improvements among matched agents over revealed edges: moves to
/// better free houses and trading cycles. Cardinality is preserved and the
/// total rank drops with every change.
fn pareto_improve(g: &BipartiteGraph, rank: &[Vec<Option<usize>>], mut m: Matching) -> Matching {
    let n = rank.len();
    let r = |a: AgentId, h: HouseId| rank[a.0][h.0].expect("edges carry ranks");
    loop {
        let mover = agents(n).find_map(|a| {
            let own = m.house_of(a)?;
            g.neighbors(a)
                .filter(|&h| m.agent_of(h).is_none() && r(a, h) < r(a, own))
                .min_by_key(|&h| r(a, h))
                .map(|h| (a, h))
        });
        if let Some((a, h)) = mover {
            m.unmatch_agent(a);
            m.insert(a, h).expect("house is free");
            continue;
        }

        let mut envy = Digraph::new(n);
        for a in agents(n) {
            let Some(own) = m.house_of(a) else { continue };
            for b in agents(n) {
                if let Some(other) = m.house_of(b) {
                    if a != b && g.has_edge(a, other) && r(a, other) < r(a, own) {
                        envy.add_arc(a.0, b.0);
                    }
                }
            }
        }
        let Some(cycle) = envy.find_cycle() else { return m };
        let next: Vec<HouseId> = (0..cycle.len())
            .map(|i| m.house_of(AgentId(cycle[(i + 1) % cycle.len()])).expect("matched"))
            .collect();
        for &a in &cycle {
            m.unmatch_agent(AgentId(a));
        }
        for (&a, h) in cycle.iter().zip(next) {
            m.insert(AgentId(a), h).expect("rotation frees every house it uses");
        }
    }
}

/// Rank queries in rounds while keeping a maximum matching that is Pareto
/// optimal on the revealed edges; at scheduled checkpoints stop once few
/// agents are left. Leftover agents then pick, in index order, their best
/// free house via house queries.
///
/// Facts already implied by earlier answers are never asked.
pub fn elicit_po_hybrid<R: Responder>(o: &mut QueryOracle<R>, cfg: &PoHybridConfig) -> Result<ElicitTrace> {
    let n = o.n();
    let mut sched = Schedule::new(n, cfg.c0)?;
    let mut g = BipartiteGraph::new(n, n);
    let mut rank = vec![vec![None; n]; n];
    let mut m = Matching::empty(n, n);

    for i in 1..=n {
        for a in agents(n) {
            let h = match o.known_house_at(a, i) {
                Some(h) => h,
                None => o.rank(a, i)?,
            };
            g.add_edge(a, h)?;
            rank[a.0][h.0] = Some(i);
        }
        m = pareto_improve(&g, &rank, max_matching(&g, &m)?);
        if cfg.early_exit && m.is_perfect() {
            break;
        }
        if sched.checkpoint() == Some(i) {
            if m.len() + sched.slack().expect("checkpoint implies slack") >= n {
                break;
            }
            sched.advance_past(i);
        }
    }

    for a in agents(n).filter(|&a| m.house_of(a).is_none()).collect::<Vec<_>>() {
        let free: Vec<HouseId> = houses(n).filter(|&h| m.agent_of(h).is_none()).collect();
        let pick = if free.len() == 1 {
            free[0]
        } else {
            let mut best = (usize::MAX, free[0]);
            for &h in &free {
                let r = match o.known_rank(a, h) {
                    Some(r) => r,
                    None => o.house(a, h)?,
                };
                best = best.min((r, h));
            }
            best.1
        };
        m.insert(a, pick)?;
    }
    Ok(o.finish(Algorithm::PoHybrid, m))
}
