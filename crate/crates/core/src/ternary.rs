//! Exact maximin share allocations when every value is 0, 1 or 2 units.
//!
//! Goods are ranked per agent (value descending, index ascending) and dealt
//! into `n` buckets row by row, position `p` going to bucket `p % n`. Each agent
//! sees the same matrix of positions, differing only in how many 2s and 1s
//! she has, so everything below works on those two counts. A few rows are
//! reversed so that at most half of the agents need a left bucket and fewer
//! than half need a right one; the sorted allocation is then lifted back to
//! the real goods.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::instance::{Allocation, Instance};
use crate::value::Value;

/// How one row of the bucket matrix looks to one agent.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowKind {
    Two,
    One,
    Zero,
    TwoOne,
    OneZero,
    /// 2s then 0s, only possible when the agent has no 1s.
    TwoZero,
    TwoOneZero,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowProfile {
    pub rows: Vec<RowKind>,
    pub two_one: Option<usize>,
    pub one_zero: Option<usize>,
}

/// An agent's ranked values, given as counts of 2s and 1s over `n * rows` positions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct View {
    twos: usize,
    ones: usize,
    n: usize,
}

impl View {
    fn at(&self, p: usize) -> u64 {
        if p < self.twos {
            2
        } else if p < self.twos + self.ones {
            1
        } else {
            0
        }
    }

    // positions below `x` that land in bucket `c`
    fn count(&self, c: usize, x: usize) -> usize {
        x / self.n + usize::from(c < x % self.n)
    }

    /// Bucket value before any reversal.
    fn bucket(&self, c: usize) -> u64 {
        let twos = self.count(c, self.twos);
        let upto_ones = self.count(c, self.twos + self.ones);
        (2 * twos + (upto_ones - twos)) as u64
    }

    fn gap(&self) -> u64 {
        self.bucket(0) - self.bucket(self.n - 1)
    }

    fn profile(&self, rows: usize) -> RowProfile {
        let n = self.n;
        let mut kinds = Vec::with_capacity(rows);
        let (mut two_one, mut one_zero) = (None, None);
        for r in 0..rows {
            let (first, last) = (self.at(r * n), self.at(r * n + n - 1));
            let kind = match (first, last) {
                (2, 2) => RowKind::Two,
                (1, 1) => RowKind::One,
                (0, 0) => RowKind::Zero,
                (2, 1) => RowKind::TwoOne,
                (1, 0) => RowKind::OneZero,
                _ => {
                    if (r * n..r * n + n).any(|p| self.at(p) == 1) {
                        RowKind::TwoOneZero
                    } else {
                        RowKind::TwoZero
                    }
                }
            };
            match kind {
                RowKind::TwoOne => two_one = Some(r),
                RowKind::OneZero => one_zero = Some(r),
                _ => {}
            }
            kinds.push(kind);
        }
        RowProfile {
            rows: kinds,
            two_one,
            one_zero,
        }
    }

    /// Value of bucket `c` after reversing the flagged rows.
    fn bucket_after(&self, c: usize, reversed: &[bool]) -> u64 {
        let n = self.n;
        reversed
            .iter()
            .enumerate()
            .map(|(r, &rev)| self.at(r * n + if rev { n - 1 - c } else { c }))
            .sum()
    }
}

fn view_of(row: &[Value], unit: u64, n: usize) -> View {
    let twos = row.iter().filter(|v| v.get() == 2 * unit).count();
    let ones = row.iter().filter(|v| v.get() == unit).count();
    View { twos, ones, n }
}

/// Row profile of `agent` in the bucket matrix of a {0,1,2} instance.
pub fn row_profile(instance: &Instance, agent: usize) -> Result<RowProfile> {
    check_ternary(instance)?;
    instance.check_agent(agent)?;
    let n = instance.agents();
    let rows = instance.goods().div_ceil(n);
    Ok(view_of(instance.row(agent), instance.scale(), n).profile(rows))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SortReduction {
    pub sorted: Instance,
    /// `permutations[i][p]` is the good at agent `i`'s rank `p`.
    pub permutations: Vec<Vec<usize>>,
}

/// Ranks each agent's goods (value descending, index ascending).
pub fn sort_reduce(instance: &Instance) -> SortReduction {
    let m = instance.goods();
    let mut permutations = Vec::with_capacity(instance.agents());
    let mut flat = Vec::with_capacity(instance.agents() * m);
    for row in instance.rows() {
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by(|&a, &b| row[b].cmp(&row[a]).then(a.cmp(&b)));
        flat.extend(order.iter().map(|&g| row[g]));
        permutations.push(order);
    }
    let sorted = Instance::from_flat(instance.agents(), m, flat, instance.scale())
        .expect("same shape as the input");
    SortReduction {
        sorted,
        permutations,
    }
}

/// Turns an allocation of ranks into one of real goods: ranks are visited
/// best first and their owner takes her favourite remaining good.
pub fn lift_allocation(
    original: &Instance,
    sorted_alloc: &Allocation,
    permutations: &[Vec<usize>],
) -> Result<Allocation> {
    let n = original.agents();
    let m = original.goods();
    sorted_alloc.validate(n, m)?;
    if permutations.len() != n || permutations.iter().any(|p| p.len() != m) {
        return Err(Error::input("one rank permutation per agent is required"));
    }
    let mut owner = vec![0usize; m];
    for (i, b) in sorted_alloc.bundles().iter().enumerate() {
        for &p in b {
            owner[p] = i;
        }
    }
    let mut taken = vec![false; m];
    let mut cursor = vec![0usize; n];
    let mut bundles = vec![Vec::new(); n];
    for &i in &owner {
        let perm = &permutations[i];
        while taken[perm[cursor[i]]] {
            cursor[i] += 1;
        }
        let g = perm[cursor[i]];
        taken[g] = true;
        bundles[i].push(g);
    }
    Ok(Allocation::new(bundles))
}

/// Red (`true`) marks rows to reverse. Rows touched by some edge turn red in
/// ascending order until at most half the edges have two blue ends.
pub fn color_rows(rows: usize, edges: &[(usize, usize)]) -> Vec<bool> {
    let mut adj = vec![Vec::new(); rows];
    for (e, &(a, b)) in edges.iter().enumerate() {
        adj[a].push(e);
        if b != a {
            adj[b].push(e);
        }
    }
    let mut red = vec![false; rows];
    let mut blue_blue = edges.len();
    for u in 0..rows {
        if 2 * blue_blue <= edges.len() {
            break;
        }
        if adj[u].is_empty() {
            continue;
        }
        red[u] = true;
        for &e in &adj[u] {
            let (a, b) = edges[e];
            let other = if a == u { b } else { a };
            if other == u || !red[other] {
                blue_blue -= 1;
            }
        }
    }
    red
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlayerClass {
    /// Any bucket works.
    Satisfied,
    /// Needs one of the leftmost buckets.
    Left,
    /// Needs one of the rightmost buckets.
    Right,
}

/// An agent whose buckets differ by 2, joining her 1/0-row and 2/1-row.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RowEdge {
    pub agent: usize,
    pub one_zero: usize,
    pub two_one: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TernaryRun {
    pub allocation: Allocation,
    pub rows: usize,
    pub edges: Vec<RowEdge>,
    pub reversed: Vec<usize>,
    pub classes: Vec<PlayerClass>,
    /// Bucket handed to each agent.
    pub buckets: Vec<usize>,
    pub lifted: bool,
}

fn check_ternary(instance: &Instance) -> Result<()> {
    let unit = instance.scale();
    for (i, row) in instance.rows().enumerate() {
        if let Some(g) = row.iter().position(|v| ![0, unit, 2 * unit].contains(&v.get())) {
            return Err(Error::input(alloc::format!(
                "agent {} values good {} outside {{0, 1, 2}}",
                i + 1,
                g + 1
            )));
        }
    }
    Ok(())
}

pub fn exact_mms_012(instance: &Instance) -> Result<Allocation> {
    exact_mms_012_traced(instance).map(|r| r.allocation)
}

pub fn exact_mms_012_traced(instance: &Instance) -> Result<TernaryRun> {
    check_ternary(instance)?;
    let n = instance.agents();
    let m = instance.goods();
    let rows = m.div_ceil(n);
    let views: Vec<View> = instance
        .rows()
        .map(|row| view_of(row, instance.scale(), n))
        .collect();

    let mut edges = Vec::new();
    let mut edge_of = vec![None; n];
    for (i, view) in views.iter().enumerate() {
        let profile = view.profile(rows);
        if let (Some(a), Some(b)) = (profile.one_zero, profile.two_one) {
            if view.gap() == 2 {
                edge_of[i] = Some(edges.len());
                edges.push((a, b));
            }
        }
    }
    let red = color_rows(rows, &edges);

    let classes: Vec<PlayerClass> = edge_of
        .iter()
        .map(|e| match e.map(|e| edges[e]) {
            Some((a, b)) if !red[a] && !red[b] => PlayerClass::Left,
            Some((a, b)) if red[a] && red[b] => PlayerClass::Right,
            _ => PlayerClass::Satisfied,
        })
        .collect();
    let left: Vec<usize> = (0..n).filter(|&i| classes[i] == PlayerClass::Left).collect();
    let right: Vec<usize> = (0..n).filter(|&i| classes[i] == PlayerClass::Right).collect();
    if left.len() + right.len() > n {
        return Err(Error::invariant("left and right groups overflow the buckets"));
    }
    let mut buckets = vec![usize::MAX; n];
    for (c, &i) in left.iter().enumerate() {
        buckets[i] = c;
    }
    for (c, &i) in (n - right.len()..n).zip(&right) {
        buckets[i] = c;
    }
    let mut spare = left.len()..n - right.len();
    for b in buckets.iter_mut().filter(|b| **b == usize::MAX) {
        *b = spare.next().expect("one bucket per agent");
    }

    for (i, view) in views.iter().enumerate() {
        let floor_share = (0..rows * n).map(|p| view.at(p)).sum::<u64>() / n as u64;
        let low = view.bucket(n - 1);
        let target = if edge_of[i].is_some() {
            (low + 1).min(floor_share)
        } else {
            low
        };
        if view.bucket_after(buckets[i], &red) < target {
            return Err(Error::invariant(alloc::format!(
                "agent {} ends below her share",
                i + 1
            )));
        }
    }

    // ranks held by each agent, real ranks only
    let mut ranks = vec![Vec::new(); n];
    for (i, &c) in buckets.iter().enumerate() {
        for (r, &rev) in red.iter().enumerate() {
            let p = r * n + if rev { n - 1 - c } else { c };
            if p < m {
                ranks[i].push(p);
            }
        }
    }
    let lifted = !instance.is_fully_correlated();
    let allocation = if lifted {
        lift_ternary(instance, &ranks)
    } else {
        Allocation::new(ranks)
    };
    Ok(TernaryRun {
        allocation,
        rows,
        edges: edge_of
            .iter()
            .enumerate()
            .filter_map(|(agent, e)| {
                e.map(|e| RowEdge {
                    agent,
                    one_zero: edges[e].0,
                    two_one: edges[e].1,
                })
            })
            .collect(),
        reversed: (0..rows).filter(|&r| red[r]).collect(),
        classes,
        buckets,
        lifted,
    })
}

/// Lift specialised to three value levels: one scan pointer per level per agent.
fn lift_ternary(instance: &Instance, ranks: &[Vec<usize>]) -> Allocation {
    let n = instance.agents();
    let m = instance.goods();
    let unit = instance.scale();
    let mut owner = vec![0usize; m];
    for (i, rs) in ranks.iter().enumerate() {
        for &p in rs {
            owner[p] = i;
        }
    }
    let mut taken = vec![false; m];
    let mut cursor = vec![[0usize; 3]; n];
    let mut bundles = vec![Vec::new(); n];
    for &i in &owner {
        let row = instance.row(i);
        let mut got = None;
        for level in [2u64, 1, 0] {
            let c = &mut cursor[i][level as usize];
            while *c < m && (taken[*c] || row[*c].get() != level * unit) {
                *c += 1;
            }
            if *c < m {
                got = Some(*c);
                break;
            }
        }
        let g = got.expect("a free good remains for every rank");
        taken[g] = true;
        bundles[i].push(g);
    }
    Allocation::new(bundles)
}
