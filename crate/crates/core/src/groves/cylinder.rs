//! Shift-invariant groves of the strip `0 ≤ i ≤ m`, represented on one
//! period of the cylinder, and the coefficients `J_s` they define.

use std::collections::{BTreeMap, HashMap};

use super::uf::ShiftUf;
use super::{Axis, Lozenge};
use crate::error::{CubeError, Result};
use crate::lattice::{Region, Vertex, E23};
use crate::laurent::{LaurentPoly, Monomial, Rational, VarId};

/// One period of the strip graph: quotient vertices and lozenges.
#[derive(Clone, Debug)]
pub struct StripPeriod {
    pub n: i64,
    pub m: i64,
    pub vertices: Vec<Vertex>,
    index: HashMap<Vertex, usize>,
    /// Lozenges with canonical red vertex and all four vertices in the strip.
    pub lozenges: Vec<Lozenge>,
    /// Forced red-blue edges `(u, u + e23)` at red boundary vertices.
    pub mandatory: Vec<(Vertex, Vertex)>,
}

/// A (3n, m)-grove: a diagonal choice on one period.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CylGrove {
    pub n: i64,
    pub m: i64,
    pub green: Vec<bool>,
    pub h: i64,
    pub weight: LaurentPoly,
}

impl StripPeriod {
    pub fn new(n: i64, m: i64) -> Result<Self> {
        let region = Region::cylinder(n, m)?;
        let vertices = region.fundamental_domain().expect("finite");
        let index = vertices.iter().enumerate().map(|(k, v)| (*v, k)).collect();
        let mut lozenges = Vec::new();
        let mut mandatory = Vec::new();
        for v in &vertices {
            if v.color() != 0 {
                continue;
            }
            for ax in Axis::ALL {
                let l = Lozenge::new(*v, ax);
                if l.vertices().iter().all(|u| (0..=m).contains(&u.i)) {
                    lozenges.push(l);
                }
            }
            if v.i == 0 || v.i == m {
                mandatory.push((*v, *v + E23));
            }
        }
        Ok(StripPeriod { n, m, vertices, index, lozenges, mandatory })
    }

    /// Canonical index and period offset of a lifted vertex.
    pub fn locate(&self, v: Vertex) -> (usize, i64) {
        let p = 3 * self.n;
        let s = v.j.div_euclid(p);
        let c = v - s * Vertex::new(0, p, -p);
        (self.index[&c], s)
    }

    pub fn is_boundary(&self, v: Vertex) -> bool {
        v.i == 0 || v.i == self.m
    }

    fn edges(&self, green: &[bool]) -> Vec<(Vertex, Vertex)> {
        let mut e = self.mandatory.clone();
        e.extend(self.lozenges.iter().zip(green).map(|(l, g)| l.diagonal(*g)));
        e
    }

    /// Checks the definition and returns `h`, or `None` if `green` is not a grove.
    pub fn grove_h(&self, green: &[bool]) -> Option<i64> {
        let mut uf = ShiftUf::new(self.vertices.len());
        for (p, q) in self.edges(green) {
            let (a, sa) = self.locate(p);
            let (b, sb) = self.locate(q);
            if !uf.union(a, sa, b, sb) {
                return None;
            }
        }
        let mut low: HashMap<usize, Vec<i64>> = HashMap::new();
        let mut high: HashMap<usize, Vec<i64>> = HashMap::new();
        let mut green_roots: Vec<usize> = Vec::new();
        let p = 3 * self.n;
        for (k, v) in self.vertices.iter().enumerate() {
            let (r, s) = uf.find(k);
            // within the lift of r at translate 0 this vertex sits at translate -s
            let j = v.j - s * p;
            if v.i == 0 {
                low.entry(r).or_default();
            }
            if v.i == self.m {
                high.entry(r).or_default();
            }
            if v.color() == 1 {
                green_roots.push(r);
                if v.i == 0 {
                    low.get_mut(&r).unwrap().push(j);
                }
                if v.i == self.m {
                    high.get_mut(&r).unwrap().push(j);
                }
            }
        }
        for k in 0..self.vertices.len() {
            let r = uf.find(k).0;
            if !low.contains_key(&r) || !high.contains_key(&r) {
                return None;
            }
        }
        green_roots.sort();
        green_roots.dedup();
        let mut h = None;
        for r in green_roots {
            let (lo, hi) = (&low[&r], &high[&r]);
            if lo.len() != 1 || hi.len() != 1 {
                return None;
            }
            let d = hi[0] - lo[0] + 2 * self.m;
            if d.rem_euclid(3) != 0 {
                return None;
            }
            let this = d / 3;
            if *h.get_or_insert(this) != this {
                return None;
            }
        }
        h
    }

    /// `Π x_u^{deg(u) - 2}` over non-boundary vertices of one period.
    pub fn weight(&self, green: &[bool]) -> LaurentPoly {
        let mut deg: BTreeMap<Vertex, i32> = BTreeMap::new();
        for (p, q) in self.edges(green) {
            for u in [p, q] {
                let c = self.vertices[self.locate(u).0];
                *deg.entry(c).or_default() += 1;
            }
        }
        let pairs = self
            .vertices
            .iter()
            .filter(|v| !self.is_boundary(**v))
            .map(|v| (VarId(*v), deg.get(v).copied().unwrap_or(0) - 2));
        LaurentPoly::term(Monomial::from_pairs(pairs), Rational::from_integer(1.into()))
    }
}

/// Every (3n, m)-grove, by exhaustive search over one period.
pub fn enumerate_cyl_groves(n: i64, m: i64) -> Result<Vec<CylGrove>> {
    let period = StripPeriod::new(n, m)?;
    let l = period.lozenges.len();
    if l > 26 {
        return Err(CubeError::InvalidRegion(format!(
            "{l} lozenges per period is beyond exhaustive range"
        )));
    }
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << l) {
        let green: Vec<bool> = (0..l).map(|b| mask >> b & 1 == 1).collect();
        if let Some(h) = period.grove_h(&green) {
            let weight = period.weight(&green);
            out.push(CylGrove { n, m, green, h, weight });
        }
    }
    Ok(out)
}

/// `J_0, …, J_m`, where `J_s` sums the weights of groves with `h = s`.
pub fn coefficients_j(n: i64, m: i64) -> Result<Vec<LaurentPoly>> {
    let mut j = vec![LaurentPoly::zero(); (m + 1) as usize];
    for g in enumerate_cyl_groves(n, m)? {
        let s = g.h as usize;
        j[s] = j[s].add(&g.weight);
    }
    Ok(j)
}
