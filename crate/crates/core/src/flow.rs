//! Integral maximum flow (Edmonds-Karp) on small dense networks.

use std::collections::VecDeque;

pub(crate) struct FlowNetwork {
    // edge i and i ^ 1 are a forward/backward pair
    to: Vec<usize>,
    cap: Vec<u64>,
    adj: Vec<Vec<usize>>,
}

impl FlowNetwork {
    pub(crate) fn new(nodes: usize) -> Self {
        FlowNetwork {
            to: Vec::new(),
            cap: Vec::new(),
            adj: vec![Vec::new(); nodes],
        }
    }

    pub(crate) fn add_edge(&mut self, from: usize, to: usize, cap: u64) {
        let id = self.to.len();
        self.to.push(to);
        self.cap.push(cap);
        self.adj[from].push(id);
        self.to.push(from);
        self.cap.push(0);
        self.adj[to].push(id + 1);
    }

    pub(crate) fn max_flow(&mut self, source: usize, sink: usize) -> u64 {
        let mut total = 0;
        loop {
            let mut via = vec![usize::MAX; self.adj.len()];
            let mut queue = VecDeque::from([source]);
            let mut seen = vec![false; self.adj.len()];
            seen[source] = true;
            while let Some(u) = queue.pop_front() {
                for &edge in &self.adj[u] {
                    let v = self.to[edge];
                    if !seen[v] && self.cap[edge] > 0 {
                        seen[v] = true;
                        via[v] = edge;
                        queue.push_back(v);
                    }
                }
            }
            if !seen[sink] {
                return total;
            }
            let mut push = u64::MAX;
            let mut v = sink;
            while v != source {
                let edge = via[v];
                push = push.min(self.cap[edge]);
                v = self.to[edge ^ 1];
            }
            let mut v = sink;
            while v != source {
                let edge = via[v];
                self.cap[edge] -= push;
                self.cap[edge ^ 1] += push;
                v = self.to[edge ^ 1];
            }
            total += push;
        }
    }

    /// Nodes reachable from `source` in the residual network.
    pub(crate) fn residual_reachable(&self, source: usize) -> Vec<bool> {
        let mut seen = vec![false; self.adj.len()];
        seen[source] = true;
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            for &edge in &self.adj[u] {
                let v = self.to[edge];
                if !seen[v] && self.cap[edge] > 0 {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        seen
    }
}
