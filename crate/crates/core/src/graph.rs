//! Bipartite graphs between agents and houses, maximum matchings by
//! augmenting paths, and the Dulmage-Mendelsohn (even/odd/unreachable) partition.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::types::{AgentId, HouseId, Matching};

/// Simple bipartite graph; agents on the left, houses on the right.
///
/// Adjacency lists are kept sorted so every search visits vertices in
/// ascending index order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BipartiteGraph {
    left: usize,
    right: usize,
    adj: Vec<Vec<usize>>,
}

impl BipartiteGraph {
    pub fn new(left: usize, right: usize) -> Self {
        BipartiteGraph { left, right, adj: vec![Vec::new(); left] }
    }

    pub fn from_edges(
        left: usize,
        right: usize,
        edges: impl IntoIterator<Item = (AgentId, HouseId)>,
    ) -> Result<Self> {
        let mut g = Self::new(left, right);
        for (a, h) in edges {
            g.add_edge(a, h)?;
        }
        Ok(g)
    }

    pub fn left(&self) -> usize {
        self.left
    }

    pub fn right(&self) -> usize {
        self.right
    }

    /// Inserts an edge; inserting an existing edge is a no-op.
    pub fn add_edge(&mut self, a: AgentId, h: HouseId) -> Result<()> {
        if a.0 >= self.left {
            return Err(Error::UnknownAgent(a.0));
        }
        if h.0 >= self.right {
            return Err(Error::UnknownHouse(h.0));
        }
        let row = &mut self.adj[a.0];
        if let Err(pos) = row.binary_search(&h.0) {
            row.insert(pos, h.0);
        }
        Ok(())
    }

    pub fn remove_edge(&mut self, a: AgentId, h: HouseId) -> bool {
        match self.adj.get_mut(a.0).map(|row| row.binary_search(&h.0)) {
            Some(Ok(pos)) => {
                self.adj[a.0].remove(pos);
                true
            }
            _ => false,
        }
    }

    pub fn has_edge(&self, a: AgentId, h: HouseId) -> bool {
        self.adj.get(a.0).is_some_and(|row| row.binary_search(&h.0).is_ok())
    }

    pub fn neighbors(&self, a: AgentId) -> impl Iterator<Item = HouseId> + '_ {
        self.adj[a.0].iter().map(|&h| HouseId(h))
    }

    pub fn edges(&self) -> impl Iterator<Item = (AgentId, HouseId)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(a, row)| row.iter().map(move |&h| (AgentId(a), HouseId(h))))
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum()
    }

    fn house_adjacency(&self) -> Vec<Vec<usize>> {
        let mut radj = vec![Vec::new(); self.right];
        for (a, row) in self.adj.iter().enumerate() {
            for &h in row {
                radj[h].push(a);
            }
        }
        radj
    }

    fn check_matching(&self, m: &Matching) -> Result<()> {
        if m.agent_count() != self.left {
            return Err(Error::SizeMismatch { expected: self.left, found: m.agent_count() });
        }
        if m.house_count() != self.right {
            return Err(Error::SizeMismatch { expected: self.right, found: m.house_count() });
        }
        for (a, h) in m.pairs() {
            if !self.has_edge(a, h) {
                return Err(Error::MissingEdge { agent: a.0, house: h.0 });
            }
        }
        Ok(())
    }
}

/// Grows `seed` into a maximum-cardinality matching of `g` by augmenting paths.
///
/// Free agents are processed in ascending order and each depth-first search
/// tries houses in ascending order, so the result is a deterministic function
/// of `g` and `seed`. Every agent matched in `seed` stays matched.
pub fn max_matching(g: &BipartiteGraph, seed: &Matching) -> Result<Matching> {
    g.check_matching(seed)?;
    let mut of_agent: Vec<Option<usize>> = (0..g.left).map(|a| seed.house_of(AgentId(a)).map(|h| h.0)).collect();
    let mut of_house: Vec<Option<usize>> =
        (0..g.right).map(|h| seed.agent_of(HouseId(h)).map(|a| a.0)).collect();

    let mut visited = vec![false; g.right];
    loop {
        let mut grew = false;
        for a in 0..g.left {
            if of_agent[a].is_some() {
                continue;
            }
            visited.iter_mut().for_each(|v| *v = false);
            if augment(g, a, &mut visited, &mut of_agent, &mut of_house) {
                grew = true;
            }
        }
        if !grew {
            break;
        }
    }

    let mut m = Matching::empty(g.left, g.right);
    for (a, h) in of_agent.iter().enumerate() {
        if let Some(h) = h {
            m.insert(AgentId(a), HouseId(*h))?;
        }
    }
    Ok(m)
}

fn augment(
    g: &BipartiteGraph,
    a: usize,
    visited: &mut [bool],
    of_agent: &mut [Option<usize>],
    of_house: &mut [Option<usize>],
) -> bool {
    // a directly free house beats a longer augmenting path
    if let Some(&h) = g.adj[a].iter().find(|&&h| of_house[h].is_none() && !visited[h]) {
        visited[h] = true;
        of_agent[a] = Some(h);
        of_house[h] = Some(a);
        return true;
    }
    for &h in &g.adj[a] {
        if visited[h] {
            continue;
        }
        visited[h] = true;
        let free = match of_house[h] {
            None => true,
            Some(b) => augment(g, b, visited, of_agent, of_house),
        };
        if free {
            of_agent[a] = Some(h);
            of_house[h] = Some(a);
            return true;
        }
    }
    false
}

/// Class of a vertex in the Dulmage-Mendelsohn partition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DmClass {
    /// Reachable from a free vertex by an even-length alternating path.
    Even,
    /// Reachable from a free vertex by an odd-length alternating path.
    Odd,
    /// Not reachable from any free vertex.
    Unreachable,
}

/// Partition of both sides of a bipartite graph into even, odd and unreachable vertices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DmDecomposition {
    agents: Vec<DmClass>,
    houses: Vec<DmClass>,
}

impl DmDecomposition {
    /// The partition of an edgeless graph: every vertex is free, hence even.
    pub fn all_even(left: usize, right: usize) -> Self {
        DmDecomposition { agents: vec![DmClass::Even; left], houses: vec![DmClass::Even; right] }
    }

    pub fn agent(&self, a: AgentId) -> DmClass {
        self.agents[a.0]
    }

    pub fn house(&self, h: HouseId) -> DmClass {
        self.houses[h.0]
    }

    pub fn agent_classes(&self) -> &[DmClass] {
        &self.agents
    }

    pub fn house_classes(&self) -> &[DmClass] {
        &self.houses
    }

    /// Number of vertices (both sides) in `class`.
    pub fn count(&self, class: DmClass) -> usize {
        self.agents.iter().chain(&self.houses).filter(|&&c| c == class).count()
    }
}

/// Computes the partition from one multi-source alternating BFS started at
/// every free vertex on both sides.
///
/// Fails with [`Error::NotMaximum`] when some vertex is reached at both
/// parities, which happens exactly when an augmenting path exists.
pub fn dm_decompose(g: &BipartiteGraph, m: &Matching) -> Result<DmDecomposition> {
    g.check_matching(m)?;
    let radj = g.house_adjacency();
    let (l, r) = (g.left, g.right);
    // parity flags: [even, odd]
    let mut agent_seen = vec![[false; 2]; l];
    let mut house_seen = vec![[false; 2]; r];

    #[derive(Clone, Copy)]
    enum V {
        Agent(usize),
        House(usize),
    }
    let mut queue = VecDeque::new();
    for a in 0..l {
        if m.house_of(AgentId(a)).is_none() {
            agent_seen[a][0] = true;
            queue.push_back(V::Agent(a));
        }
    }
    for h in 0..r {
        if m.agent_of(HouseId(h)).is_none() {
            house_seen[h][0] = true;
            queue.push_back(V::House(h));
        }
    }

    // Even vertices leave along non-matching edges; odd vertices along their matching edge.
    while let Some(v) = queue.pop_front() {
        match v {
            V::Agent(a) => {
                if agent_seen[a][0] {
                    let own = m.house_of(AgentId(a)).map(|h| h.0);
                    for &h in &g.adj[a] {
                        if Some(h) != own && !house_seen[h][1] {
                            house_seen[h][1] = true;
                            queue.push_back(V::House(h));
                        }
                    }
                }
                if agent_seen[a][1] {
                    if let Some(h) = m.house_of(AgentId(a)) {
                        if !house_seen[h.0][0] {
                            house_seen[h.0][0] = true;
                            queue.push_back(V::House(h.0));
                        }
                    }
                }
            }
            V::House(h) => {
                if house_seen[h][0] {
                    let own = m.agent_of(HouseId(h)).map(|a| a.0);
                    for &a in &radj[h] {
                        if Some(a) != own && !agent_seen[a][1] {
                            agent_seen[a][1] = true;
                            queue.push_back(V::Agent(a));
                        }
                    }
                }
                if house_seen[h][1] {
                    if let Some(a) = m.agent_of(HouseId(h)) {
                        if !agent_seen[a.0][0] {
                            agent_seen[a.0][0] = true;
                            queue.push_back(V::Agent(a.0));
                        }
                    }
                }
            }
        }
    }

    let classify = |seen: &[bool; 2]| -> Result<DmClass> {
        match seen {
            [true, true] => Err(Error::NotMaximum),
            [true, false] => Ok(DmClass::Even),
            [false, true] => Ok(DmClass::Odd),
            [false, false] => Ok(DmClass::Unreachable),
        }
    };
    Ok(DmDecomposition {
        agents: agent_seen.iter().map(classify).collect::<Result<_>>()?,
        houses: house_seen.iter().map(classify).collect::<Result<_>>()?,
    })
}
