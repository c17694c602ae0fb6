// SPDX-License-Identifier: Apache-2.0

//! Universality test for electron-only control: the drift must be strongly
//! regular and the graph of nonzero `S_x` elements between its eigenstates
//! must be connected.

use std::fmt;

use crate::spin_model::{
    build_secular_hamiltonian, eigensystem, transition_table, EigenStructure, DEFAULT_DEGENERACY_TOL_MHZ,
};
use crate::SpinSystem;

/// Default edge cutoff, relative to the largest `S_x` element.
pub const DEFAULT_EDGE_THRESHOLD: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    DegenerateLevels { j: usize, k: usize, gap_mhz: f64 },
    DegenerateTransitions { first: (usize, usize), second: (usize, usize), gap_mhz: f64 },
    Disconnected { components: Vec<Vec<usize>> },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DegenerateLevels { j, k, gap_mhz } => {
                write!(f, "degenerate levels {j} and {k} (gap {gap_mhz:.3e} MHz)")
            }
            Violation::DegenerateTransitions { first, second, gap_mhz } => write!(
                f,
                "degenerate transitions {}-{} and {}-{} (gap {gap_mhz:.3e} MHz)",
                first.0, first.1, second.0, second.1
            ),
            Violation::Disconnected { components } => {
                let parts: Vec<String> = components
                    .iter()
                    .map(|c| format!("{{{}}}", c.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(",")))
                    .collect();
                write!(f, "disconnected control graph: components {}", parts.join(" "))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ControlGraph {
    pub n_nodes: usize,
    /// Undirected edges `(j, k)` with `j < k` (1-based levels) and weight |⟨k|S_x|j⟩|.
    pub edges: Vec<(usize, usize, f64)>,
    /// Absolute cutoff that was applied.
    pub threshold: f64,
}

impl ControlGraph {
    pub fn has_edge(&self, j: usize, k: usize) -> bool {
        let (a, b) = if j < k { (j, k) } else { (k, j) };
        self.edges.iter().any(|&(x, y, _)| x == a && y == b)
    }

    /// Connected components as sorted level lists, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut uf = UnionFind::new(self.n_nodes);
        for &(j, k, _) in &self.edges {
            uf.union(j - 1, k - 1);
        }
        let mut groups: Vec<Vec<usize>> = Vec::new();
        let mut root_slot = vec![usize::MAX; self.n_nodes];
        for node in 0..self.n_nodes {
            let r = uf.find(node);
            if root_slot[r] == usize::MAX {
                root_slot[r] = groups.len();
                groups.push(Vec::new());
            }
            groups[root_slot[r]].push(node + 1);
        }
        groups
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// Graphviz `graph` listing, one edge per line.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph control {\n");
        for n in 1..=self.n_nodes {
            out.push_str(&format!("  {n};\n"));
        }
        for &(j, k, w) in &self.edges {
            out.push_str(&format!("  {j} -- {k} [weight={w:.6e}];\n"));
        }
        out.push_str("}\n");
        out
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // smaller root wins, keeps component roots deterministic
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

/// Strong regularity: pairwise-distinct energies and pairwise-distinct
/// transition frequencies over all `j < k` pairs.
pub fn check_strong_regularity(eigs: &EigenStructure, tol_mhz: f64) -> (bool, Vec<Violation>) {
    let dim = eigs.dim();
    let mut violations = Vec::new();
    for j in 1..=dim {
        for k in j + 1..=dim {
            let gap = eigs.transition_mhz(j, k);
            if gap < tol_mhz {
                violations.push(Violation::DegenerateLevels { j, k, gap_mhz: gap });
            }
        }
    }
    let mut transitions: Vec<((usize, usize), f64)> = Vec::new();
    for j in 1..=dim {
        for k in j + 1..=dim {
            transitions.push(((j, k), eigs.transition_mhz(j, k)));
        }
    }
    for a in 0..transitions.len() {
        for b in a + 1..transitions.len() {
            let gap = (transitions[a].1 - transitions[b].1).abs();
            if gap < tol_mhz {
                violations.push(Violation::DegenerateTransitions {
                    first: transitions[a].0,
                    second: transitions[b].0,
                    gap_mhz: gap,
                });
            }
        }
    }
    (violations.is_empty(), violations)
}

/// Nondegeneracy restricted to what the control couples: all energies
/// distinct, and the frequency of every graph edge distinct from every other
/// edge. The additive spectrum of several nuclei always produces coincident
/// nuclear transitions, but those carry no `S_x` element.
pub fn check_graph_regularity(eigs: &EigenStructure, graph: &ControlGraph, tol_mhz: f64) -> (bool, Vec<Violation>) {
    let dim = eigs.dim();
    let mut violations = Vec::new();
    for j in 1..=dim {
        for k in j + 1..=dim {
            let gap = eigs.transition_mhz(j, k);
            if gap < tol_mhz {
                violations.push(Violation::DegenerateLevels { j, k, gap_mhz: gap });
            }
        }
    }
    let edges: Vec<((usize, usize), f64)> =
        graph.edges.iter().map(|&(j, k, _)| ((j, k), eigs.transition_mhz(j, k))).collect();
    for a in 0..edges.len() {
        for b in a + 1..edges.len() {
            let gap = (edges[a].1 - edges[b].1).abs();
            if gap < tol_mhz {
                violations.push(Violation::DegenerateTransitions { first: edges[a].0, second: edges[b].0, gap_mhz: gap });
            }
        }
    }
    (violations.is_empty(), violations)
}

/// Edges where |⟨k|S_x|j⟩| exceeds `relative_threshold` times the largest element.
pub fn build_control_graph(eigs: &EigenStructure, relative_threshold: f64) -> ControlGraph {
    let table = transition_table(eigs);
    let max = table.iter().map(|t| t.sx_element).fold(0.0, f64::max);
    let threshold = relative_threshold * max;
    let edges = table
        .iter()
        .filter(|t| t.sx_element > threshold)
        .map(|t| (t.j, t.k, t.sx_element))
        .collect();
    ControlGraph { n_nodes: eigs.dim(), edges, threshold }
}

#[derive(Debug, Clone, PartialEq)]
pub struct UniversalityVerdict {
    /// All energies and all transition frequencies pairwise distinct.
    pub strongly_regular: bool,
    /// All energies distinct and all control-coupled transitions distinct.
    pub graph_regular: bool,
    pub connected: bool,
    /// `graph_regular && connected`.
    pub universal: bool,
    /// Violations that block universality.
    pub violations: Vec<Violation>,
    /// Coincident transition pairs that the control graph does not touch;
    /// informational only.
    pub uncoupled_degeneracies: usize,
    pub graph: ControlGraph,
}

impl UniversalityVerdict {
    /// One-line reason for a negative verdict.
    pub fn reasons(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if !self.connected {
            out.push("disconnected control graph");
        }
        if !self.graph_regular {
            out.push("degenerate levels or control-coupled transitions");
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub degeneracy_mhz: f64,
    pub edge_threshold: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { degeneracy_mhz: DEFAULT_DEGENERACY_TOL_MHZ, edge_threshold: DEFAULT_EDGE_THRESHOLD }
    }
}

pub fn is_universal(sys: &SpinSystem, tol: Tolerances) -> UniversalityVerdict {
    let eigs = eigensystem(&build_secular_hamiltonian(sys), sys);
    verdict_for(&eigs, tol)
}

pub fn verdict_for(eigs: &EigenStructure, tol: Tolerances) -> UniversalityVerdict {
    let (strongly_regular, all_pairs) = check_strong_regularity(eigs, tol.degeneracy_mhz);
    let graph = build_control_graph(eigs, tol.edge_threshold);
    let (graph_regular, mut violations) = check_graph_regularity(eigs, &graph, tol.degeneracy_mhz);
    let uncoupled_degeneracies = all_pairs.len() - violations.len();
    let components = graph.components();
    let connected = components.len() <= 1;
    if !connected {
        violations.push(Violation::Disconnected { components });
    }
    UniversalityVerdict {
        strongly_regular,
        graph_regular,
        connected,
        universal: graph_regular && connected,
        violations,
        uncoupled_degeneracies,
        graph,
    }
}
