use std::cmp::Ordering;

use num::{BigUint, One, Zero};
use serde::{Deserialize, Serialize};

use super::delay::perturbed_delay_table;
use super::matroid_game::rosenthal_potential;
use super::CongestionError;
use crate::eps::{cmp_lex, EpsPoly, Rat};

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct Digraph {
    pub nodes: usize,
    pub edges: Vec<(usize, usize)>,
}

impl Digraph {
    fn validate(&self) -> Result<(), CongestionError> {
        if let Some(&(u, v)) = self.edges.iter().find(|&&(u, v)| u >= self.nodes || v >= self.nodes) {
            return Err(CongestionError::BadGraph(format!("edge ({u},{v}) leaves 0..{}", self.nodes)));
        }
        Ok(())
    }

    /// Vertices in topological order, or `None` if the graph has a cycle.
    pub fn topological_order(&self) -> Option<Vec<usize>> {
        let mut indeg = vec![0; self.nodes];
        for &(_, v) in &self.edges {
            indeg[v] += 1;
        }
        let mut stack: Vec<usize> = (0..self.nodes).rev().filter(|&v| indeg[v] == 0).collect();
        let mut out = Vec::with_capacity(self.nodes);
        while let Some(u) = stack.pop() {
            out.push(u);
            for &(a, b) in &self.edges {
                if a == u {
                    indeg[b] -= 1;
                    if indeg[b] == 0 {
                        stack.push(b);
                    }
                }
            }
        }
        (out.len() == self.nodes).then_some(out)
    }
}

/// Number of `s`–`t` paths and, per edge, the number of such paths using it.
pub fn dag_path_counts(g: &Digraph, s: usize, t: usize) -> Result<(BigUint, Vec<BigUint>), CongestionError> {
    g.validate()?;
    let order = g.topological_order().ok_or(CongestionError::PathCountsRequired)?;
    let mut from_s = vec![BigUint::zero(); g.nodes];
    from_s[s] = BigUint::one();
    for &u in &order {
        for &(a, b) in &g.edges {
            if a == u {
                let add = from_s[u].clone();
                from_s[b] += add;
            }
        }
    }
    let mut to_t = vec![BigUint::zero(); g.nodes];
    to_t[t] = BigUint::one();
    for &u in order.iter().rev() {
        for &(a, b) in &g.edges {
            if a == u {
                let add = to_t[b].clone();
                to_t[u] += add;
            }
        }
    }
    let per = g.edges.iter().map(|&(a, b)| &from_s[a] * &to_t[b]).collect();
    Ok((from_s[t].clone(), per))
}

/// All simple `s`–`t` paths as edge lists, in depth-first edge-index order.
pub fn enumerate_paths(g: &Digraph, s: usize, t: usize) -> Vec<Vec<usize>> {
    fn go(g: &Digraph, u: usize, t: usize, on: &mut Vec<bool>, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if u == t {
            out.push(cur.clone());
            return;
        }
        for (e, &(a, b)) in g.edges.iter().enumerate() {
            if a == u && !on[b] {
                on[b] = true;
                cur.push(e);
                go(g, b, t, on, cur, out);
                cur.pop();
                on[b] = false;
            }
        }
    }
    let mut on = vec![false; g.nodes];
    on[s] = true;
    let mut out = Vec::new();
    go(g, s, t, &mut on, &mut Vec::new(), &mut out);
    out
}

/// Lexicographically cheapest `s`–`t` path under `cost`, by Bellman–Ford.
/// Returns `None` when `t` is unreachable.
pub fn symbolic_shortest_path(
    g: &Digraph,
    s: usize,
    t: usize,
    cost: &[EpsPoly],
) -> Result<Option<(Vec<usize>, EpsPoly)>, CongestionError> {
    let arcs: Vec<(usize, usize, EpsPoly, usize)> =
        g.edges.iter().zip(cost).enumerate().map(|(e, (&(a, b), c))| (a, b, c.clone(), e)).collect();
    let (dist, pred) = bellman_ford(g.nodes, s, &arcs)?;
    let Some(d) = dist[t].clone() else {
        return Ok(None);
    };
    let mut path = Vec::new();
    let mut v = t;
    while v != s {
        let k = pred[v].expect("reachable vertex has a predecessor");
        path.push(arcs[k].3);
        v = arcs[k].0;
    }
    path.reverse();
    Ok(Some((path, d)))
}

type Arc = (usize, usize, EpsPoly, usize);

fn bellman_ford(
    nodes: usize,
    s: usize,
    arcs: &[Arc],
) -> Result<(Vec<Option<EpsPoly>>, Vec<Option<usize>>), CongestionError> {
    let mut dist: Vec<Option<EpsPoly>> = vec![None; nodes];
    let mut pred: Vec<Option<usize>> = vec![None; nodes];
    dist[s] = Some(EpsPoly::zero());
    for round in 0..nodes {
        let mut changed = false;
        for (k, (a, b, c, _)) in arcs.iter().enumerate() {
            let Some(da) = dist[*a].clone() else { continue };
            let cand = &da + c;
            let better = match &dist[*b] {
                None => true,
                Some(db) => cmp_lex(&cand, db) == Ordering::Less,
            };
            if better {
                dist[*b] = Some(cand);
                pred[*b] = Some(k);
                changed = true;
            }
        }
        if !changed {
            return Ok((dist, pred));
        }
        if round + 1 == nodes {
            return Err(CongestionError::NegativeSymbolicCost);
        }
    }
    Ok((dist, pred))
}

#[derive(Clone, Debug)]
pub struct NetworkCongestionGame {
    graph: Digraph,
    source: usize,
    sink: usize,
    n: usize,
    /// `delays[e][k-1] = d_e(k)`.
    delays: Vec<Vec<Rat>>,
    total: BigUint,
    per: Vec<BigUint>,
}

impl NetworkCongestionGame {
    /// `path_counts` may be omitted for acyclic graphs.
    pub fn new(
        graph: Digraph,
        source: usize,
        sink: usize,
        n: usize,
        delays: Vec<Vec<Rat>>,
        path_counts: Option<(BigUint, Vec<BigUint>)>,
    ) -> Result<Self, CongestionError> {
        graph.validate()?;
        if source >= graph.nodes || sink >= graph.nodes || source == sink {
            return Err(CongestionError::BadGraph("source and sink must be distinct vertices".into()));
        }
        if n == 0 {
            return Err(CongestionError::BadDelays("at least one player required".into()));
        }
        if delays.len() != graph.edges.len() {
            return Err(CongestionError::BadDelays(format!("{} delay tables for {} edges", delays.len(), graph.edges.len())));
        }
        for (e, d) in delays.iter().enumerate() {
            if d.len() != n || d.iter().any(|v| *v <= Rat::zero()) {
                return Err(CongestionError::BadDelays(format!("edge {e} needs {n} positive delays")));
            }
        }
        let (total, per) = match path_counts {
            Some(c) => c,
            None => dag_path_counts(&graph, source, sink)?,
        };
        if per.len() != graph.edges.len() {
            return Err(CongestionError::BadGraph("one path count per edge required".into()));
        }
        if total.is_zero() {
            return Err(CongestionError::Disconnected);
        }
        Ok(NetworkCongestionGame { graph, source, sink, n, delays, total, per })
    }

    pub fn graph(&self) -> &Digraph {
        &self.graph
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn sink(&self) -> usize {
        self.sink
    }

    pub fn num_players(&self) -> usize {
        self.n
    }

    pub fn delays(&self) -> &[Vec<Rat>] {
        &self.delays
    }

    pub fn path_counts(&self) -> (&BigUint, &[BigUint]) {
        (&self.total, &self.per)
    }

    /// `table[e][k] = d̃_e(k)` for `k = 0..=n`.
    pub fn perturbed_delays(&self) -> Result<Vec<Vec<EpsPoly>>, CongestionError> {
        (0..self.graph.edges.len())
            .map(|e| perturbed_delay_table(self.n, &self.total, &self.per[e], &self.delays[e]))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NetworkSolution {
    /// Units of flow on each edge.
    pub flow: Vec<usize>,
    /// One edge list per player.
    pub paths: Vec<Vec<usize>>,
    pub potential: EpsPoly,
}

/// Minimum-cost flow of value `n` where edge `e`'s `k`-th unit costs `d̃_e(k)`,
/// by successive shortest paths; the flow is then split into `n` paths.
pub fn solve_network(g: &NetworkCongestionGame) -> Result<NetworkSolution, CongestionError> {
    for (e, d) in g.delays.iter().enumerate() {
        if d.windows(2).any(|w| w[1] < w[0]) {
            return Err(CongestionError::NonConvexDelay(e));
        }
    }
    let table = g.perturbed_delays()?;
    let m = g.graph.edges.len();
    let mut flow = vec![0usize; m];
    for _ in 0..g.n {
        let mut arcs: Vec<Arc> = Vec::new();
        for (e, &(a, b)) in g.graph.edges.iter().enumerate() {
            if flow[e] < g.n {
                let c = table[e][flow[e] + 1].clone();
                if flow[e] > 0 && cmp_lex(&c, &table[e][flow[e]]) == Ordering::Less {
                    return Err(CongestionError::NonConvexDelay(e));
                }
                arcs.push((a, b, c, e));
            }
            if flow[e] > 0 {
                arcs.push((b, a, -&table[e][flow[e]], m + e));
            }
        }
        let (dist, pred) = bellman_ford(g.graph.nodes, g.source, &arcs)?;
        if dist[g.sink].is_none() {
            return Err(CongestionError::Disconnected);
        }
        let mut v = g.sink;
        while v != g.source {
            let k = pred[v].expect("reachable vertex has a predecessor");
            let (a, _, _, id) = &arcs[k];
            if *id < m {
                flow[*id] += 1;
            } else {
                flow[*id - m] -= 1;
            }
            v = *a;
        }
    }
    let potential = rosenthal_potential(&table, &flow);
    let paths = decompose(&g.graph, g.source, g.sink, &flow, g.n);
    Ok(NetworkSolution { flow, paths, potential })
}

fn decompose(g: &Digraph, s: usize, t: usize, flow: &[usize], n: usize) -> Vec<Vec<usize>> {
    let mut rest = flow.to_vec();
    let mut paths = Vec::with_capacity(n);
    while paths.len() < n {
        let mut path: Vec<usize> = Vec::new();
        let mut visited = vec![None; g.nodes];
        visited[s] = Some(0);
        let mut v = s;
        while v != t {
            let e = (0..g.edges.len())
                .find(|&e| rest[e] > 0 && g.edges[e].0 == v)
                .expect("conservation leaves an outgoing unit");
            path.push(e);
            v = g.edges[e].1;
            if let Some(at) = visited[v] {
                // drop a cycle of positive flow
                for &c in &path[at..] {
                    rest[c] -= 1;
                    visited[g.edges[c].1] = None;
                }
                path.truncate(at);
                visited[v] = Some(at);
            } else {
                visited[v] = Some(path.len());
            }
        }
        for &e in &path {
            rest[e] -= 1;
        }
        paths.push(path);
    }
    paths
}

/// Edge loads of a path profile.
pub fn path_loads(paths: &[Vec<usize>], edges: usize) -> Vec<usize> {
    let mut l = vec![0; edges];
    for &e in paths.iter().flatten() {
        l[e] += 1;
    }
    l
}
