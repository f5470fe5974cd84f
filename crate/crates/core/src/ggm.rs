//! Finite-volume marginals of gradient Gibbs measures on the Cayley tree
//! built from a height-periodic boundary law.
//!
//! Given the residue classes of the increments, increments are
//! independent with law `theta^|zeta| / S[class]`, so the joint law of the
//! classes is an exact finite object. Shells of the ball beyond the
//! observed edges are summed out by passing messages from the boundary
//! towards the root.

use crate::boundary_law::{class_sums, truncated_class_sums, BoundaryLaw, ClassSums};
use crate::error::{Error, Result};
use crate::exec::{self, Execution};

/// Largest supported ball radius.
pub const MAX_RADIUS: u32 = 8;
/// Largest number of table rows materialised.
pub const MAX_ROWS: u128 = 10_000_000;
const MAX_VERTICES: u128 = 50_000_000;

/// The ball of radius `R` around a root `w`, plus its outer boundary at
/// depth `R + 1`. Vertices are numbered breadth first from the root at 0;
/// edge `e` joins `parent(e + 1)` to vertex `e + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct TreeBall {
    k: u32,
    radius: u32,
    parent: Vec<usize>,
    depth: Vec<u32>,
    /// First vertex id at each depth `0..=R+2`.
    level_start: Vec<usize>,
}

pub fn build_ball(k: u32, radius: u32) -> Result<TreeBall> {
    if k < 2 {
        return Err(Error::InvalidOrder(k));
    }
    if radius > MAX_RADIUS {
        return Err(Error::RadiusTooLarge {
            radius,
            max: MAX_RADIUS,
        });
    }
    let mut level_sizes = vec![1u128];
    for d in 1..=radius as usize + 1 {
        let branching = if d == 1 { k + 1 } else { k } as u128;
        level_sizes.push(level_sizes[d - 1] * branching);
    }
    let total: u128 = level_sizes.iter().sum();
    if total > MAX_VERTICES {
        return Err(Error::Oversized {
            size: total,
            limit: MAX_VERTICES,
        });
    }
    let n = total as usize;
    let mut parent = vec![usize::MAX; n];
    let mut depth = vec![0u32; n];
    let mut level_start = vec![0usize];
    let mut next = 1;
    for d in 1..=radius as usize + 1 {
        let (lo, hi) = (level_start[d - 1], next);
        level_start.push(next);
        let branching = if d == 1 { k + 1 } else { k };
        for v in lo..hi {
            for _ in 0..branching {
                parent[next] = v;
                depth[next] = d as u32;
                next += 1;
            }
        }
    }
    level_start.push(next);
    Ok(TreeBall {
        k,
        radius,
        parent,
        depth,
        level_start,
    })
}

impl TreeBall {
    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn num_vertices(&self) -> usize {
        self.parent.len()
    }

    /// Vertices at depth `<= R`.
    pub fn interior(&self) -> std::ops::Range<usize> {
        0..self.level_start[self.radius as usize + 1]
    }

    /// Vertices at depth `R + 1`.
    pub fn boundary(&self) -> std::ops::Range<usize> {
        self.level_start[self.radius as usize + 1]..self.num_vertices()
    }

    pub fn depth(&self, v: usize) -> u32 {
        self.depth[v]
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        (v != 0).then(|| self.parent[v])
    }

    /// Edges meeting the ball, as `(parent, child)`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (1..self.num_vertices()).map(move |v| (self.parent[v], v))
    }

    pub fn num_edges(&self) -> usize {
        self.num_vertices() - 1
    }

    /// Number of edges of the sub-ball of radius `r <= R`.
    pub fn num_edges_within(&self, r: u32) -> usize {
        self.level_start[r.min(self.radius) as usize + 2] - 1
    }

    /// Edge ids on the path from the root to `v`, root side first.
    pub fn path(&self, v: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.depth[v] as usize);
        let mut cur = v;
        while cur != 0 {
            out.push(cur - 1);
            cur = self.parent[cur];
        }
        out.reverse();
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Exact joint law of the increment classes.
    ExactClass,
    /// Increments restricted to `[-R, R]`, enumerated directly.
    Truncated(u32),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pinning {
    /// The pinned measure with the root in height class `s`.
    Pinned(usize),
    /// Sum over all root classes.
    Mixed,
}

/// Probabilities of all assignments of alphabet values to the observed
/// edges, edge 0 being the most significant digit of the row index.
#[derive(Debug, Clone, PartialEq)]
pub struct MarginalTable {
    mode: Mode,
    q: usize,
    edges: usize,
    alphabet: Vec<i64>,
    probs: Vec<f64>,
}

impl MarginalTable {
    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// Period of the law the table was built from.
    pub fn q(&self) -> usize {
        self.q
    }

    pub fn num_edges(&self) -> usize {
        self.edges
    }

    /// Classes `0..q` or increments `-R..=R`.
    pub fn alphabet(&self) -> &[i64] {
        &self.alphabet
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn rows(&self) -> usize {
        self.probs.len()
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    /// Per-edge values of a row.
    pub fn assignment(&self, row: usize) -> Vec<i64> {
        let base = self.alphabet.len();
        let mut digits = vec![0; self.edges];
        let mut r = row;
        for e in (0..self.edges).rev() {
            digits[e] = self.alphabet[r % base];
            r /= base;
        }
        digits
    }

    /// Distribution of the value on edge `e`, indexed like the alphabet.
    pub fn edge_marginal(&self, e: usize) -> Vec<f64> {
        let base = self.alphabet.len();
        let stride = base.pow((self.edges - 1 - e) as u32);
        let mut out = vec![0.0; base];
        for (row, p) in self.probs.iter().enumerate() {
            out[(row / stride) % base] += p;
        }
        out
    }

    /// Marginal on the first `m` edges.
    pub fn project(&self, m: usize) -> MarginalTable {
        let base = self.alphabet.len();
        let stride = base.pow((self.edges - m) as u32);
        let mut probs = vec![0.0; base.pow(m as u32)];
        for (row, p) in self.probs.iter().enumerate() {
            probs[row / stride] += p;
        }
        MarginalTable {
            mode: self.mode,
            q: self.q,
            edges: m,
            alphabet: self.alphabet.clone(),
            probs,
        }
    }
}

fn check_ball(ball: &TreeBall, law: &BoundaryLaw) -> Result<()> {
    if ball.k() != law.params().k() {
        return Err(Error::InvalidArgument(format!(
            "ball has order {} but the law has k = {}",
            ball.k(),
            law.params().k()
        )));
    }
    Ok(())
}

fn edge_class_sums(law: &BoundaryLaw, mode: Mode) -> ClassSums {
    match mode {
        Mode::ExactClass => class_sums(law.params(), law.q()),
        Mode::Truncated(cut) => truncated_class_sums(law.params(), law.q(), cut),
    }
}

/// Message into a vertex at depth `d` from the shells below it, as a
/// function of the vertex's height class; equal to `z` at depth `R + 1`.
fn message(ball: &TreeBall, law: &BoundaryLaw, sums: &ClassSums, d: u32) -> Vec<f64> {
    let q = law.q();
    let k = ball.k() as i32;
    let mut m = law.z().to_vec();
    for _ in d..=ball.radius() {
        let mut next: Vec<f64> = (0..q)
            .map(|a| (0..q).map(|b| sums.s[b] * m[(a + b) % q]).sum::<f64>().powi(k))
            .collect();
        let top = next.iter().copied().fold(0.0, f64::max);
        next.iter_mut().for_each(|v| *v /= top);
        m = next;
    }
    m
}

/// Marginal of the pinned or mixed measure of `ball` on the edges of its
/// sub-ball of radius `observe <= R`.
pub fn observed_marginal(
    ball: &TreeBall,
    law: &BoundaryLaw,
    pinning: Pinning,
    mode: Mode,
    observe: u32,
) -> Result<MarginalTable> {
    observed_marginal_with(ball, law, pinning, mode, observe, Execution::default())
}

pub fn observed_marginal_with(
    ball: &TreeBall,
    law: &BoundaryLaw,
    pinning: Pinning,
    mode: Mode,
    observe: u32,
    exec: Execution,
) -> Result<MarginalTable> {
    check_ball(ball, law)?;
    let q = law.q();
    let observe = observe.min(ball.radius());
    let roots: Vec<usize> = match pinning {
        Pinning::Pinned(s) if s >= q => {
            return Err(Error::InvalidArgument(format!(
                "pinned class {s} is not in Z_{q}"
            )))
        }
        Pinning::Pinned(s) => vec![s],
        Pinning::Mixed => (0..q).collect(),
    };
    let alphabet: Vec<i64> = match mode {
        Mode::ExactClass => (0..q as i64).collect(),
        Mode::Truncated(cut) => (-(cut as i64)..=cut as i64).collect(),
    };
    let edges = ball.num_edges_within(observe);
    let base = alphabet.len();
    let rows = (base as u128).checked_pow(edges as u32).unwrap_or(u128::MAX);
    if rows > MAX_ROWS {
        return Err(Error::Oversized {
            size: rows,
            limit: MAX_ROWS,
        });
    }
    let rows = rows as usize;
    let sums = edge_class_sums(law, mode);
    let leaf_msg = message(ball, law, &sums, observe + 1);
    let weight: Vec<f64> = match mode {
        Mode::ExactClass => sums.s.clone(),
        Mode::Truncated(_) => alphabet.iter().map(|&z| law.params().q_weight(z)).collect(),
    };
    let parent = &ball.parent;
    let leaves = ball.level_start[observe as usize + 1]..edges + 1;
    let qi = q as i64;

    let row_weight = |row: usize| -> f64 {
        // digits and accumulated height offsets, breadth first
        let mut acc = vec![0i64; edges + 1];
        let mut w = 1.0;
        let mut r = row;
        let mut digits = vec![0usize; edges];
        for e in (0..edges).rev() {
            digits[e] = r % base;
            r /= base;
        }
        for e in 0..edges {
            let v = e + 1;
            acc[v] = acc[parent[v]] + alphabet[digits[e]];
            w *= weight[digits[e]];
        }
        let mix: f64 = roots
            .iter()
            .map(|&s| {
                leaves
                    .clone()
                    .map(|y| leaf_msg[(s as i64 + acc[y]).rem_euclid(qi) as usize])
                    .product::<f64>()
            })
            .sum();
        w * mix
    };
    let raw = exec::map_range(exec, rows, row_weight);
    let total = exec::sum_range(exec, rows, |i| raw[i]);
    if !(total > 0.0 && total.is_finite()) {
        return Err(Error::Internal(format!(
            "partition function {total} is not positive"
        )));
    }
    Ok(MarginalTable {
        mode,
        q,
        edges,
        alphabet,
        probs: raw.into_iter().map(|w| w / total).collect(),
    })
}

/// The pinned measure `nu_{w,s}` on all edges of the ball.
pub fn pinned_marginal(ball: &TreeBall, law: &BoundaryLaw, s: usize, mode: Mode) -> Result<MarginalTable> {
    observed_marginal(ball, law, Pinning::Pinned(s), mode, ball.radius())
}

/// The translation invariant mixture over root classes on all edges of
/// the ball.
pub fn mixed_marginal(ball: &TreeBall, law: &BoundaryLaw, mode: Mode) -> Result<MarginalTable> {
    observed_marginal(ball, law, Pinning::Mixed, mode, ball.radius())
}

/// Total variation distance of two tables over the same support.
pub fn tv_distance(a: &MarginalTable, b: &MarginalTable) -> Result<f64> {
    if a.alphabet != b.alphabet || a.edges != b.edges {
        return Err(Error::InvalidArgument("tables have different supports".into()));
    }
    Ok(0.5
        * a.probs
            .iter()
            .zip(&b.probs)
            .map(|(x, y)| (x - y).abs())
            .sum::<f64>())
}

/// Total variation distance, on increment configurations, between an
/// exact class table and a truncated table of the same edges. Mass of the
/// exact measure outside the truncation window counts fully.
pub fn tv_exact_truncated(exact: &MarginalTable, trunc: &MarginalTable, law: &BoundaryLaw) -> Result<f64> {
    if exact.mode != Mode::ExactClass || !matches!(trunc.mode, Mode::Truncated(_)) {
        return Err(Error::InvalidArgument(
            "expected an exact and a truncated table".into(),
        ));
    }
    if exact.edges != trunc.edges || exact.q != trunc.q {
        return Err(Error::InvalidArgument("tables cover different edges".into()));
    }
    let q = exact.q as i64;
    let sums = class_sums(law.params(), exact.q);
    let base = exact.alphabet.len();
    let mut diff = 0.0;
    let mut covered = 0.0;
    for (row, &pt) in trunc.probs.iter().enumerate() {
        let zeta = trunc.assignment(row);
        let mut class_row = 0usize;
        let mut cond = 1.0;
        for &z in &zeta {
            let c = z.rem_euclid(q) as usize;
            class_row = class_row * base + c;
            cond *= law.params().q_weight(z) / sums.s[c];
        }
        let pe = exact.probs[class_row] * cond;
        covered += pe;
        diff += (pe - pt).abs();
    }
    Ok(0.5 * (diff + (1.0 - covered).max(0.0)))
}

/// Bound on the exact-versus-truncated distance:
/// `(k+1) |edges| theta^{R+1} / (1 - theta)`.
pub fn tail_bound(ball: &TreeBall, theta: f64, cutoff: u32) -> f64 {
    (ball.k() as f64 + 1.0) * ball.num_edges() as f64 * theta.powi(cutoff as i32 + 1) / (1.0 - theta)
}

/// Distance between the marginal on the radius-`r_small` edges computed
/// on that ball directly and the one obtained from the radius-`r_large`
/// ball by summing out its outer shells.
pub fn consistency_check(law: &BoundaryLaw, k: u32, r_small: u32, r_large: u32, mode: Mode) -> Result<f64> {
    if r_small >= r_large || r_large > 3 {
        return Err(Error::InvalidArgument(format!(
            "need r_small < r_large <= 3, got {r_small} and {r_large}"
        )));
    }
    let small = build_ball(k, r_small)?;
    let large = build_ball(k, r_large)?;
    let direct = mixed_marginal(&small, law, mode)?;
    let summed = observed_marginal(&large, law, Pinning::Mixed, mode, r_small)?;
    tv_distance(&direct, &summed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::Params;

    #[test]
    fn ball_shapes() {
        let b = build_ball(2, 0).unwrap();
        assert_eq!((b.interior().len(), b.boundary().len(), b.num_edges()), (1, 3, 3));
        let b = build_ball(2, 1).unwrap();
        assert_eq!((b.interior().len(), b.boundary().len(), b.num_edges()), (4, 6, 9));
        let b = build_ball(3, 1).unwrap();
        assert_eq!(
            (b.interior().len(), b.boundary().len(), b.num_edges()),
            (5, 12, 16)
        );
        assert_eq!(b.path(7), vec![0, 6]);
        assert_eq!(b.num_edges_within(0), 4);
        assert!(matches!(build_ball(2, 9), Err(Error::RadiusTooLarge { .. })));
    }

    #[test]
    fn q1_law_gives_independent_geometric_edges() {
        let p = Params::new(2, 2.5).unwrap();
        let law = BoundaryLaw::new(vec![1.0], &p).unwrap();
        let ball = build_ball(2, 0).unwrap();
        let t = pinned_marginal(&ball, &law, 0, Mode::Truncated(30)).unwrap();
        let theta = p.theta();
        let norm: f64 = (-30i64..=30).map(|z| p.q_weight(z)).sum();
        for e in 0..3 {
            let m = t.edge_marginal(e);
            for (i, &z) in t.alphabet().iter().enumerate() {
                assert!((m[i] - theta.powi(z.abs() as i32) / norm).abs() < 1e-14);
            }
        }
        let row = t.assignment(5);
        let want: f64 = row.iter().map(|&z| p.q_weight(z) / norm).product();
        assert!((t.probs()[5] - want).abs() < 1e-15);
    }
}
