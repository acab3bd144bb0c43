//! Agent/bundle preference graphs, maximum matchings and Hall violators.
//!
//! Left vertices are positions in the active agent list, right vertices are
//! bundle indices. Both are 0-based here.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::value::Ratio;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PreferenceGraph {
    right: usize,
    // sorted, deduplicated
    adj: Vec<Vec<usize>>,
}

impl PreferenceGraph {
    pub fn from_edges(left: usize, right: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut adj = vec![Vec::new(); left];
        for &(x, y) in edges {
            if x >= left || y >= right {
                return Err(Error::input(alloc::format!(
                    "edge ({x}, {y}) outside a {left} x {right} graph"
                )));
            }
            adj[x].push(y);
        }
        for a in &mut adj {
            a.sort_unstable();
            a.dedup();
        }
        Ok(PreferenceGraph { right, adj })
    }

    pub fn left(&self) -> usize {
        self.adj.len()
    }

    pub fn right(&self) -> usize {
        self.right
    }

    pub fn neighbors(&self, x: usize) -> &[usize] {
        &self.adj[x]
    }

    pub fn has_edge(&self, x: usize, y: usize) -> bool {
        self.adj[x].binary_search(&y).is_ok()
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(x, ys)| ys.iter().map(move |&y| (x, y)))
            .collect()
    }
}

/// Edge `(x, y)` iff agent `agents[x]` values `bundles[y]` at least `thresholds[x]`.
pub fn build_preference_graph(
    instance: &Instance,
    agents: &[usize],
    bundles: &[Vec<usize>],
    thresholds: &[Ratio],
) -> Result<PreferenceGraph> {
    if bundles.len() != agents.len() || thresholds.len() != agents.len() {
        return Err(Error::input(alloc::format!(
            "{} agents, {} bundles and {} thresholds",
            agents.len(),
            bundles.len(),
            thresholds.len()
        )));
    }
    let mut adj = Vec::with_capacity(agents.len());
    for (&agent, &threshold) in agents.iter().zip(thresholds) {
        instance.check_agent(agent)?;
        let mut ys = Vec::new();
        for (y, bundle) in bundles.iter().enumerate() {
            let v = crate::instance::bundle_value(instance, agent, bundle)?;
            if v.meets(threshold) {
                ys.push(y);
            }
        }
        adj.push(ys);
    }
    Ok(PreferenceGraph {
        right: bundles.len(),
        adj,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    left: Vec<Option<usize>>,
    right: Vec<Option<usize>>,
}

impl Matching {
    pub fn empty(left: usize, right: usize) -> Self {
        Matching {
            left: vec![None; left],
            right: vec![None; right],
        }
    }

    /// Builds a matching from pairs, rejecting pairs that share a vertex or
    /// are not edges of `graph`.
    pub fn from_pairs(graph: &PreferenceGraph, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut m = Matching::empty(graph.left(), graph.right());
        for &(x, y) in pairs {
            if x >= graph.left() || y >= graph.right() || !graph.has_edge(x, y) {
                return Err(Error::input(alloc::format!("({x}, {y}) is not an edge")));
            }
            if m.left[x].is_some() || m.right[y].is_some() {
                return Err(Error::input(alloc::format!("({x}, {y}) reuses a matched vertex")));
            }
            m.left[x] = Some(y);
            m.right[y] = Some(x);
        }
        Ok(m)
    }

    pub fn size(&self) -> usize {
        self.left.iter().flatten().count()
    }

    pub fn mate_of_left(&self, x: usize) -> Option<usize> {
        self.left[x]
    }

    pub fn mate_of_right(&self, y: usize) -> Option<usize> {
        self.right[y]
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.left
            .iter()
            .enumerate()
            .filter_map(|(x, y)| y.map(|y| (x, y)))
            .collect()
    }

    pub fn is_perfect(&self) -> bool {
        self.left.iter().all(Option::is_some)
    }

    fn augment_from(&mut self, graph: &PreferenceGraph, x: usize, seen: &mut [bool]) -> bool {
        for &y in graph.neighbors(x) {
            if seen[y] {
                continue;
            }
            seen[y] = true;
            let free = match self.right[y] {
                None => true,
                Some(other) => self.augment_from(graph, other, seen),
            };
            if free {
                self.left[x] = Some(y);
                self.right[y] = Some(x);
                return true;
            }
        }
        false
    }
}

/// Augmenting-path matching; left vertices in index order, neighbors ascending.
pub fn maximum_matching(graph: &PreferenceGraph) -> Matching {
    let mut m = Matching::empty(graph.left(), graph.right());
    let mut seen = vec![false; graph.right()];
    for x in 0..graph.left() {
        seen.iter_mut().for_each(|s| *s = false);
        m.augment_from(graph, x, &mut seen);
    }
    m
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XPlusDecomposition {
    /// Unmatched left vertices plus everything they reach by alternating paths.
    pub x_plus: Vec<usize>,
    /// Neighborhood of `x_plus` in the graph.
    pub gamma: Vec<usize>,
    /// Matching restricted to the left vertices outside `x_plus`.
    pub matching: Vec<(usize, usize)>,
}

/// Splits off the Hall violator of a maximum matching.
pub fn compute_x_plus(graph: &PreferenceGraph, matching: &Matching) -> Result<XPlusDecomposition> {
    if matching.left.len() != graph.left() || matching.right.len() != graph.right() {
        return Err(Error::input("matching does not fit the graph"));
    }
    let mut probe = matching.clone();
    let mut seen = vec![false; graph.right()];
    for x in (0..graph.left()).filter(|&x| matching.left[x].is_none()) {
        seen.iter_mut().for_each(|s| *s = false);
        if probe.augment_from(graph, x, &mut seen) {
            return Err(Error::invariant("matching is not maximum"));
        }
    }
    if matching.is_perfect() {
        return Ok(XPlusDecomposition {
            x_plus: Vec::new(),
            gamma: Vec::new(),
            matching: matching.pairs(),
        });
    }

    let mut in_x = vec![false; graph.left()];
    let mut stack: Vec<usize> = (0..graph.left())
        .filter(|&x| matching.left[x].is_none())
        .collect();
    for &x in &stack {
        in_x[x] = true;
    }
    while let Some(x) = stack.pop() {
        for &y in graph.neighbors(x) {
            if let Some(back) = matching.right[y] {
                if !in_x[back] {
                    in_x[back] = true;
                    stack.push(back);
                }
            }
        }
    }
    let x_plus: Vec<usize> = (0..graph.left()).filter(|&x| in_x[x]).collect();
    let mut in_gamma = vec![false; graph.right()];
    for &x in &x_plus {
        for &y in graph.neighbors(x) {
            in_gamma[y] = true;
        }
    }
    let gamma = (0..graph.right()).filter(|&y| in_gamma[y]).collect();
    let restricted = matching
        .pairs()
        .into_iter()
        .filter(|&(x, _)| !in_x[x])
        .collect();
    Ok(XPlusDecomposition {
        x_plus,
        gamma,
        matching: restricted,
    })
}
