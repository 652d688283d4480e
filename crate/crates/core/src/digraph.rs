use alloc::collections::BinaryHeap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Reverse;

/// Dense directed graph on `0..n`, used for envy relations between agents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Digraph {
    n: usize,
    arcs: Vec<bool>,
}

impl Digraph {
    pub fn new(n: usize) -> Self {
        Digraph { n, arcs: vec![false; n * n] }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn add_arc(&mut self, from: usize, to: usize) {
        self.arcs[from * self.n + to] = true;
    }

    pub fn has_arc(&self, from: usize, to: usize) -> bool {
        self.arcs[from * self.n + to]
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.iter().filter(|&&x| x).count()
    }

    /// Kahn's algorithm, smallest available vertex first; `None` on a cycle.
    pub fn topological_order(&self) -> Option<Vec<usize>> {
        let n = self.n;
        let mut indeg = vec![0usize; n];
        for u in 0..n {
            for v in 0..n {
                if self.has_arc(u, v) {
                    indeg[v] += 1;
                }
            }
        }
        let mut ready: BinaryHeap<Reverse<usize>> =
            (0..n).filter(|&v| indeg[v] == 0).map(Reverse).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(Reverse(u)) = ready.pop() {
            order.push(u);
            for v in 0..n {
                if self.has_arc(u, v) {
                    indeg[v] -= 1;
                    if indeg[v] == 0 {
                        ready.push(Reverse(v));
                    }
                }
            }
        }
        (order.len() == n).then_some(order)
    }

    pub fn is_acyclic(&self) -> bool {
        self.topological_order().is_some()
    }

    /// Some directed cycle as a vertex sequence (first vertex not repeated).
    pub fn find_cycle(&self) -> Option<Vec<usize>> {
        // 0 = unvisited, 1 = on stack, 2 = done
        let n = self.n;
        let mut state = vec![0u8; n];
        let mut parent = vec![usize::MAX; n];
        for root in 0..n {
            if state[root] != 0 {
                continue;
            }
            let mut stack = vec![(root, 0usize)];
            state[root] = 1;
            while let Some(&mut (u, ref mut next)) = stack.last_mut() {
                if *next == n {
                    state[u] = 2;
                    stack.pop();
                    continue;
                }
                let v = *next;
                *next += 1;
                if !self.has_arc(u, v) {
                    continue;
                }
                match state[v] {
                    0 => {
                        parent[v] = u;
                        state[v] = 1;
                        stack.push((v, 0));
                    }
                    1 => {
                        let mut cycle = vec![u];
                        let mut w = u;
                        while w != v {
                            w = parent[w];
                            cycle.push(w);
                        }
                        cycle.reverse();
                        return Some(cycle);
                    }
                    _ => {}
                }
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_and_cycles() {
        let mut g = Digraph::new(3);
        g.add_arc(2, 0);
        g.add_arc(0, 1);
        assert_eq!(g.topological_order(), Some(vec![2, 0, 1]));
        assert_eq!(g.find_cycle(), None);
        g.add_arc(1, 2);
        assert!(!g.is_acyclic());
        let c = g.find_cycle().unwrap();
        assert_eq!(c.len(), 3);
        for i in 0..c.len() {
            assert!(g.has_arc(c[i], c[(i + 1) % c.len()]));
        }
    }

    #[test]
    fn self_loop_is_cycle() {
        let mut g = Digraph::new(2);
        g.add_arc(1, 1);
        assert_eq!(g.find_cycle(), Some(vec![1]));
    }
}
