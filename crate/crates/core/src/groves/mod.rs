//! Groves: one diagonal per lozenge, forming a forest with prescribed
//! boundary connectivity.

pub mod cylinder;
pub mod strip;
pub mod uf;

use std::collections::{BTreeMap, HashMap};

use crate::error::{CubeError, Result};
use crate::lattice::{Vertex, E12, E23, E31};
use crate::laurent::{LaurentPoly, Monomial, Rational, VarId};
use uf::{RollbackUf, Union};

pub use cylinder::{coefficients_j, enumerate_cyl_groves, CylGrove};
pub use strip::{enumerate_strip_groves, f_less, StripGrove};

/// Direction from the red vertex of a lozenge to its blue vertex.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Axis {
    E12,
    E23,
    E31,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::E12, Axis::E23, Axis::E31];

    pub fn vector(self) -> Vertex {
        match self {
            Axis::E12 => E12,
            Axis::E23 => E23,
            Axis::E31 => E31,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Axis::E12 => "e12",
            Axis::E23 => "e23",
            Axis::E31 => "e31",
        }
    }
}

/// A face of the lozenge graph: a red vertex, a blue neighbor of it, and the
/// two green vertices adjacent to both.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Lozenge {
    pub red: Vertex,
    pub axis: Axis,
}

impl Lozenge {
    pub fn new(red: Vertex, axis: Axis) -> Self {
        debug_assert_eq!(red.color(), 0);
        Lozenge { red, axis }
    }

    pub fn blue(&self) -> Vertex {
        self.red + self.axis.vector()
    }

    /// The roles `[a, b, c, d]` of the network construction. Diagonals are
    /// always `{a, c}` and `{b, d}`.
    pub fn roles(&self) -> [Vertex; 4] {
        let r = self.red;
        match self.axis {
            Axis::E23 => [r - E31, r + E23, r - E12, r],
            Axis::E12 => [r - E31, r, r - E23, r + E12],
            Axis::E31 => [r, r - E12, r + E31, r - E23],
        }
    }

    pub fn vertices(&self) -> [Vertex; 4] {
        self.roles()
    }

    /// Whether `{a, c}` is the green diagonal.
    pub fn green_is_ac(&self) -> bool {
        self.axis != Axis::E31
    }

    /// The green diagonal if `green`, else the red-blue one.
    pub fn diagonal(&self, green: bool) -> (Vertex, Vertex) {
        let [a, b, c, d] = self.roles();
        if green == self.green_is_ac() {
            (a, c)
        } else {
            (b, d)
        }
    }

    pub fn green_diagonal(&self) -> (Vertex, Vertex) {
        self.diagonal(true)
    }

    /// Sum of the four vertices; a sort key and drawing anchor.
    pub fn center4(&self) -> Vertex {
        self.vertices().iter().fold(Vertex::default(), |s, v| s + *v)
    }

    /// The unique lozenge whose `d` role is `u`.
    pub fn owned_by(u: Vertex) -> Lozenge {
        match u.color() {
            0 => Lozenge::new(u, Axis::E23),
            2 => Lozenge::new(u - E12, Axis::E12),
            _ => Lozenge::new(u + E23, Axis::E31),
        }
    }
}

/// Barycentric test for the closed triangle with corners `v + t·e`.
pub fn in_triangle(v: Vertex, t: i64, u: Vertex) -> bool {
    let x = u - v;
    x.i - x.j >= -t && x.j - x.k >= -t && x.k - x.i >= -t
}

/// The lozenge graph `G(v,t)` with its boundary labeling.
#[derive(Clone, Debug)]
pub struct LozengeRegion {
    pub v: Vertex,
    pub t: i64,
    /// Sorted by center (row, then column).
    pub lozenges: Vec<Lozenge>,
    /// Sorted.
    pub vertices: Vec<Vertex>,
    index: HashMap<Vertex, usize>,
    /// `a[i-1] = a_i` for `1 ≤ i ≤ 2t-1`; likewise `b`, `c`.
    pub a: Vec<Vertex>,
    pub b: Vec<Vertex>,
    pub c: Vec<Vertex>,
    /// Distinct boundary vertices in cyclic order starting at `a_1`.
    pub boundary: Vec<Vertex>,
}

/// A choice of diagonal per lozenge: `true` picks the green one.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Forest {
    pub green: Vec<bool>,
}

/// A set partition of the boundary vertices, normalized.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct BoundaryPartition {
    pub blocks: Vec<Vec<Vertex>>,
}

impl BoundaryPartition {
    pub fn new(mut blocks: Vec<Vec<Vertex>>) -> Self {
        for b in blocks.iter_mut() {
            b.sort();
            b.dedup();
        }
        blocks.retain(|b| !b.is_empty());
        blocks.sort();
        BoundaryPartition { blocks }
    }

    /// Whether no two blocks cross with respect to a cyclic order.
    pub fn is_noncrossing(&self, cyclic: &[Vertex]) -> bool {
        let pos: HashMap<Vertex, usize> = cyclic.iter().enumerate().map(|(n, v)| (*v, n)).collect();
        let block_of: HashMap<Vertex, usize> = self
            .blocks
            .iter()
            .enumerate()
            .flat_map(|(n, b)| b.iter().map(move |v| (*v, n)))
            .collect();
        let mut seq: Vec<(usize, usize)> = block_of.iter().map(|(v, b)| (pos[v], *b)).collect();
        seq.sort();
        let labels: Vec<usize> = seq.into_iter().map(|(_, b)| b).collect();
        let n = labels.len();
        for p in 0..n {
            for q in p + 1..n {
                for r in q + 1..n {
                    for s in r + 1..n {
                        if labels[p] == labels[r]
                            && labels[q] == labels[s]
                            && labels[p] != labels[q]
                        {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }
}

impl LozengeRegion {
    /// `G(v,t)`: all lozenges inside the triangle with corners `v + t·e`.
    pub fn new(v: Vertex, t: i64) -> Result<Self> {
        if v.sum() != 0 {
            return Err(CubeError::OutOfRegion(v.to_string()));
        }
        if t < 2 || (t + 1 - v.color() as i64).rem_euclid(3) != 0 {
            return Err(CubeError::BadParity { vertex: v.to_string(), t });
        }
        let mut lozenges = Vec::new();
        for di in -t - 1..=t + 1 {
            for dj in -t - 1..=t + 1 {
                let r = v + Vertex::new(di, dj, -di - dj);
                if r.color() != 0 {
                    continue;
                }
                for ax in Axis::ALL {
                    let l = Lozenge::new(r, ax);
                    if l.vertices().iter().all(|u| in_triangle(v, t, *u)) {
                        lozenges.push(l);
                    }
                }
            }
        }
        lozenges.sort_by_key(|l| {
            let c = l.center4();
            (-c.i, c.j, l.axis)
        });
        let mut vertices: Vec<Vertex> = lozenges.iter().flat_map(|l| l.vertices()).collect();
        vertices.sort();
        vertices.dedup();
        let index = vertices.iter().enumerate().map(|(n, u)| (*u, n)).collect();
        let (mut a, mut b, mut c) = (Vec::new(), Vec::new(), Vec::new());
        for idx in 1..2 * t {
            let (q, odd) = (idx / 2, idx % 2 == 1);
            let (x, y) = if odd { (t - 1 - 2 * q, q - t + 1) } else { (t - 2 * q, q - t) };
            a.push(v + Vertex::new(q, x, y));
            b.push(v + Vertex::new(x, y, q));
            c.push(v + Vertex::new(y, q, x));
        }
        let mut boundary = Vec::new();
        for side in [&a, &b, &c] {
            for u in &side[..side.len() - 1] {
                boundary.push(*u);
            }
        }
        let region = LozengeRegion { v, t, lozenges, vertices, index, a, b, c, boundary };
        debug_assert!(region.boundary.iter().all(|u| region.index.contains_key(u)));
        Ok(region)
    }

    pub fn index_of(&self, u: Vertex) -> Option<usize> {
        self.index.get(&u).copied()
    }

    pub fn contains(&self, u: Vertex) -> bool {
        self.index.contains_key(&u)
    }

    /// `a_i` for `1 ≤ i ≤ 2t-1`.
    pub fn a(&self, i: i64) -> Vertex {
        self.a[(i - 1) as usize]
    }

    pub fn b(&self, i: i64) -> Vertex {
        self.b[(i - 1) as usize]
    }

    pub fn c(&self, i: i64) -> Vertex {
        self.c[(i - 1) as usize]
    }

    pub fn is_boundary(&self, u: Vertex) -> bool {
        self.boundary.contains(&u)
    }

    /// The boundary exponent shift: 2 at the corners `a_1, b_1, c_1`, 1 on
    /// the rest of the boundary, 0 inside.
    pub fn s(&self, u: Vertex) -> i32 {
        if u == self.a(1) || u == self.b(1) || u == self.c(1) {
            2
        } else if self.is_boundary(u) {
            1
        } else {
            0
        }
    }

    /// `Π_0`: `a_i ~ c_{2t-i}`, `b_i ~ a_{2t-i}`, `c_i ~ b_{2t-i}` for `i ≤ t`.
    pub fn pi0(&self) -> BoundaryPartition {
        let mut uf = RollbackUf::new(self.vertices.len());
        let t = self.t;
        for i in 1..=t {
            for (p, q) in [
                (self.a(i), self.c(2 * t - i)),
                (self.b(i), self.a(2 * t - i)),
                (self.c(i), self.b(2 * t - i)),
            ] {
                uf.union(self.index[&p], self.index[&q]);
            }
        }
        self.partition_by(|u| uf.find(self.index[&u]))
    }

    fn partition_by(&self, key: impl Fn(Vertex) -> usize) -> BoundaryPartition {
        let mut blocks: BTreeMap<usize, Vec<Vertex>> = BTreeMap::new();
        for u in &self.boundary {
            blocks.entry(key(*u)).or_default().push(*u);
        }
        BoundaryPartition::new(blocks.into_values().collect())
    }

    pub fn edges(&self, f: &Forest) -> Vec<(Vertex, Vertex)> {
        self.lozenges
            .iter()
            .zip(&f.green)
            .map(|(l, g)| l.diagonal(*g))
            .collect()
    }

    /// Union-find of the forest, or `None` if it has a cycle.
    fn components(&self, f: &Forest) -> Option<RollbackUf> {
        let mut uf = RollbackUf::new(self.vertices.len());
        for (p, q) in self.edges(f) {
            if uf.union(self.index[&p], self.index[&q]) != Union::Merged {
                return None;
            }
        }
        Some(uf)
    }

    pub fn is_forest(&self, f: &Forest) -> bool {
        self.components(f).is_some()
    }

    /// `Π_F`, the boundary connectivity of a forest.
    pub fn partition(&self, f: &Forest) -> Option<BoundaryPartition> {
        let uf = self.components(f)?;
        Some(self.partition_by(|u| uf.find(self.index[&u])))
    }

    pub fn is_grove(&self, f: &Forest) -> bool {
        self.partition(f).is_some_and(|p| p == self.pi0())
    }

    /// Exponent of every vertex in the grove weight, zero entries omitted.
    pub fn weight_exponents(&self, f: &Forest) -> BTreeMap<Vertex, i32> {
        let mut deg: HashMap<Vertex, i32> = HashMap::new();
        for (p, q) in self.edges(f) {
            *deg.entry(p).or_default() += 1;
            *deg.entry(q).or_default() += 1;
        }
        self.vertices
            .iter()
            .map(|u| (*u, deg.get(u).copied().unwrap_or(0) - 2 + self.s(*u)))
            .filter(|&(_, e)| e != 0)
            .collect()
    }

    /// `Π x_u^{deg(u) - 2 + s(u)}` over the plane variables.
    pub fn weight(&self, f: &Forest) -> LaurentPoly {
        let m = Monomial::from_pairs(
            self.weight_exponents(f)
                .into_iter()
                .map(|(u, e)| (VarId(u), e)),
        );
        LaurentPoly::term(m, Rational::from_integer(1.into()))
    }

    /// All diagonal choices that are forests.
    pub fn enumerate_forests(&self) -> Vec<Forest> {
        let mut out = Vec::new();
        let mut uf = RollbackUf::new(self.vertices.len());
        let mut choice = Vec::with_capacity(self.lozenges.len());
        self.forest_rec(&mut uf, &mut choice, &[], &mut |_, c| {
            out.push(Forest { green: c.to_vec() })
        });
        out
    }

    /// All groves, pruning on cycles and on merges across `Π_0` blocks.
    pub fn enumerate_groves(&self) -> Vec<Forest> {
        self.enumerate_groves_fixed(&vec![None; self.lozenges.len()])
    }

    /// Groves whose diagonals agree with `fixed` wherever it is `Some`.
    pub fn enumerate_groves_fixed(&self, fixed: &[Option<bool>]) -> Vec<Forest> {
        let pi0 = self.pi0();
        let mut labels = vec![None; self.vertices.len()];
        for (n, block) in pi0.blocks.iter().enumerate() {
            for u in block {
                labels[self.index[u]] = Some(n);
            }
        }
        let mut uf = RollbackUf::with_labels(labels);
        let mut out = Vec::new();
        let mut choice = Vec::with_capacity(self.lozenges.len());
        self.forest_rec(&mut uf, &mut choice, fixed, &mut |uf, c| {
            let whole = pi0.blocks.iter().all(|b| {
                let r = uf.find(self.index[&b[0]]);
                b.iter().all(|u| uf.find(self.index[u]) == r)
            });
            if whole {
                out.push(Forest { green: c.to_vec() });
            }
        });
        out
    }

    fn forest_rec(
        &self,
        uf: &mut RollbackUf,
        choice: &mut Vec<bool>,
        fixed: &[Option<bool>],
        emit: &mut dyn FnMut(&RollbackUf, &[bool]),
    ) {
        let n = choice.len();
        if n == self.lozenges.len() {
            emit(uf, choice);
            return;
        }
        let options: &[bool] = match fixed.get(n).copied().flatten() {
            Some(true) => &[true],
            Some(false) => &[false],
            None => &[true, false],
        };
        for &g in options {
            let (p, q) = self.lozenges[n].diagonal(g);
            let mark = uf.checkpoint();
            if uf.union(self.index[&p], self.index[&q]) == Union::Merged {
                choice.push(g);
                self.forest_rec(uf, choice, fixed, emit);
                choice.pop();
            }
            uf.rollback(mark);
        }
    }

    /// Σ wt(F) over all groves.
    pub fn grove_sum(&self) -> LaurentPoly {
        LaurentPoly::from_terms(self.enumerate_groves().iter().flat_map(|f| {
            self.weight(f).terms().map(|(m, c)| (m.clone(), c.clone())).collect::<Vec<_>>()
        }))
    }
}

/// Whether every component of `F` is monochrome: green, or red and blue.
pub fn components_monochrome(region: &LozengeRegion, f: &Forest) -> bool {
    let Some(uf) = region.components(f) else { return false };
    let mut kind: HashMap<usize, bool> = HashMap::new();
    for u in &region.vertices {
        let green = u.color() == 1;
        let r = uf.find(region.index[u]);
        if *kind.entry(r).or_insert(green) != green {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_vertex_owns_one_lozenge() {
        for u in [Vertex::new(0, 0, 0), Vertex::new(0, 1, -1), Vertex::new(0, 2, -2)] {
            let l = Lozenge::owned_by(u);
            assert_eq!(l.roles()[3], u);
            assert_eq!(l.blue().color(), 2);
            let [a, b, c, d] = l.roles();
            let mut cols = [a.color(), b.color(), c.color(), d.color()];
            cols.sort();
            assert_eq!(cols, [0, 1, 1, 2]);
        }
    }

    #[test]
    fn green_diagonal_is_green() {
        for ax in Axis::ALL {
            let l = Lozenge::new(Vertex::new(0, 0, 0), ax);
            let (p, q) = l.green_diagonal();
            assert_eq!((p.color(), q.color()), (1, 1));
            let (p, q) = l.diagonal(false);
            let mut c = [p.color(), q.color()];
            c.sort();
            assert_eq!(c, [0, 2]);
        }
    }

    #[test]
    fn smallest_region() {
        let g = LozengeRegion::new(Vertex::new(0, 0, 0), 2).unwrap();
        assert_eq!(g.lozenges.len(), 3);
        assert_eq!(g.vertices.len(), 7);
        assert_eq!(g.boundary.len(), 6);
        assert_eq!(g.a(3), g.b(1));
        assert_eq!(g.b(3), g.c(1));
        assert_eq!(g.c(3), g.a(1));
        assert!(g.boundary.iter().all(|u| u.color() != 0));
        assert!(LozengeRegion::new(Vertex::new(0, 0, 0), 3).is_err());
    }
}
