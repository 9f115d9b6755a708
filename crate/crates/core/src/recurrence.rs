//! Memoized exact evolution of the cube recurrence
//! `f_v(t+3) f_v(t) = Σ_e f_{v+e}(t+2) f_{v-e}(t+1)` in every geometry.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;

use crate::error::{CubeError, Result};
use crate::lattice::{Region, Vertex, AXES};
use crate::laurent::{LaurentPoly, Rational, VarId};

/// Which sequence to read off a cylinder.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SequenceMode {
    /// `f_v(ε_v + 3ℓ)`.
    FixedVertex,
    /// `f_{v+ℓg}(ε_v + 2ℓn)`.
    Shifted,
}

/// The evolution of one region from one initial assignment.
///
/// Initial values are the variables `x_v` of canonical vertices, except
/// where a rational value has been assigned.
#[derive(Clone, Debug)]
pub struct RecurrenceState {
    region: Region,
    assign: HashMap<VarId, Rational>,
    cache: HashMap<(Vertex, i64), LaurentPoly>,
}

impl RecurrenceState {
    pub fn new(region: Region) -> Self {
        RecurrenceState {
            region,
            assign: HashMap::new(),
            cache: HashMap::new(),
        }
    }

    /// A state whose assigned variables are replaced by rationals.
    ///
    /// Keys are canonicalized; assignments outside the region are rejected.
    pub fn with_assignment(region: Region, assign: &HashMap<VarId, Rational>) -> Result<Self> {
        let mut s = RecurrenceState::new(region);
        for (v, x) in assign {
            let c = region.canonicalize(v.0)?;
            s.assign.insert(VarId(c), x.clone());
        }
        Ok(s)
    }

    pub fn region(&self) -> &Region {
        &self.region
    }

    pub fn assignment(&self) -> &HashMap<VarId, Rational> {
        &self.assign
    }

    pub fn cache_len(&self) -> usize {
        self.cache.len()
    }

    fn check(&self, v: Vertex, t: i64) -> Result<Vertex> {
        let c = self.region.canonicalize(v)?;
        let e = v.color() as i64;
        if t < e || (t - e) % 3 != 0 {
            return Err(CubeError::BadParity { vertex: v.to_string(), t });
        }
        Ok(c)
    }

    fn initial(&self, c: Vertex) -> LaurentPoly {
        if self.region.is_boundary(c) {
            return LaurentPoly::one();
        }
        match self.assign.get(&VarId(c)) {
            Some(x) => LaurentPoly::constant(x.clone()),
            None => LaurentPoly::var(c),
        }
    }

    /// Values that need no recursion: boundary and initial slice.
    fn base(&self, c: Vertex, t: i64) -> Option<LaurentPoly> {
        if self.region.is_boundary(c) {
            Some(LaurentPoly::one())
        } else if t == c.color() as i64 {
            Some(self.initial(c))
        } else {
            None
        }
    }

    /// The dependencies of `f_c(t)`, canonicalized, in a fixed order:
    /// `(c, t-3)` first, then `(c+e, t-1), (c-e, t-2)` per axis.
    fn deps(&self, c: Vertex, t: i64) -> Result<[(Vertex, i64); 7]> {
        let r = &self.region;
        let mut out = [(c, t - 3); 7];
        for (n, e) in AXES.iter().enumerate() {
            out[1 + 2 * n] = (r.canonicalize(c + *e)?, t - 1);
            out[2 + 2 * n] = (r.canonicalize(c - *e)?, t - 2);
        }
        Ok(out)
    }

    fn lookup(&self, key: (Vertex, i64)) -> Option<LaurentPoly> {
        self.base(key.0, key.1).or_else(|| self.cache.get(&key).cloned())
    }

    fn step(&self, c: Vertex, t: i64, get: impl Fn((Vertex, i64)) -> LaurentPoly) -> Result<LaurentPoly> {
        let d = self.deps(c, t)?;
        let mut num = LaurentPoly::zero();
        for n in 0..3 {
            let p = get(d[1 + 2 * n]).mul(&get(d[2 + 2 * n]));
            num = num.add(&p);
        }
        num.div_exact(&get(d[0]))
    }

    /// `f_v(t)`, computed with an explicit work stack and memoized.
    pub fn value(&mut self, v: Vertex, t: i64) -> Result<LaurentPoly> {
        let c = self.check(v, t)?;
        if let Some(p) = self.lookup((c, t)) {
            return Ok(p);
        }
        let mut stack = vec![(c, t)];
        while let Some(&(u, s)) = stack.last() {
            if self.lookup((u, s)).is_some() {
                stack.pop();
                continue;
            }
            let missing: Vec<(Vertex, i64)> = self
                .deps(u, s)?
                .into_iter()
                .filter(|&k| self.lookup(k).is_none())
                .collect();
            if missing.is_empty() {
                let p = self.step(u, s, |k| self.lookup(k).expect("dependency computed"))?;
                self.cache.insert((u, s), p);
                stack.pop();
            } else {
                stack.extend(missing);
            }
        }
        Ok(self.lookup((c, t)).expect("value computed"))
    }

    /// All defined values with `t ≤ t_max` on the fundamental domain,
    /// computed slice by slice; cells of one slice are evaluated in parallel.
    pub fn evolve_slice(&mut self, t_max: i64) -> Result<BTreeMap<(Vertex, i64), LaurentPoly>> {
        let dom = self
            .region
            .fundamental_domain()
            .ok_or_else(|| CubeError::InvalidRegion("the plane has no finite slice".into()))?;
        let mut out = BTreeMap::new();
        for t in 0..=t_max {
            let cells: Vec<Vertex> = dom
                .iter()
                .copied()
                .filter(|v| v.color() as i64 <= t && (t - v.color() as i64) % 3 == 0)
                .collect();
            let todo: Vec<Vertex> = cells
                .iter()
                .copied()
                .filter(|&v| self.lookup((v, t)).is_none())
                .collect();
            let this = &*self;
            let fresh: Vec<(Vertex, LaurentPoly)> = todo
                .par_iter()
                .map(|&v| {
                    let p = this.step(v, t, |k| this.lookup(k).expect("earlier slice"))?;
                    Ok((v, p))
                })
                .collect::<Result<_>>()?;
            for (v, p) in fresh {
                self.cache.insert((v, t), p);
            }
            for v in cells {
                out.insert((v, t), self.lookup((v, t)).expect("slice computed"));
            }
        }
        Ok(out)
    }

    /// The first `len` entries of a cylinder sequence started at `v`.
    pub fn flatten_cylinder_sequence(
        &mut self,
        v: Vertex,
        mode: SequenceMode,
        len: usize,
    ) -> Result<Vec<LaurentPoly>> {
        let (n, _) = match self.region {
            Region::Cylinder { n, m } => (n, m),
            _ => return Err(CubeError::InvalidRegion("sequence needs a cylinder".into())),
        };
        let e = v.color() as i64;
        let g = n * crate::lattice::E23;
        (0..len as i64)
            .map(|l| match mode {
                SequenceMode::FixedVertex => self.value(v, e + 3 * l),
                SequenceMode::Shifted => self.value(v + l * g, e + 2 * l * n),
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unbounded_first_step() {
        let mut s = RecurrenceState::new(Region::Plane);
        let v = Vertex::new(0, 0, 0);
        let f3 = s.value(v, 3).unwrap();
        let x = LaurentPoly::var;
        let [p12, m12, p23, m23, p31, m31] = v.neighbors();
        let expect = (&(&(&x(p12) * &x(m12)) + &(&x(p23) * &x(m23))) + &(&x(p31) * &x(m31)))
            .div_exact(&x(v))
            .unwrap();
        assert_eq!(f3, expect);
        assert_eq!(f3.len(), 3);
    }

    #[test]
    fn parity_is_enforced() {
        let mut s = RecurrenceState::new(Region::Plane);
        assert!(matches!(
            s.value(Vertex::new(0, 0, 0), 4),
            Err(CubeError::BadParity { .. })
        ));
        assert!(s.value(Vertex::new(0, 1, -1), 1).is_err());
        assert!(s.value(Vertex::new(0, 1, -1), 2).is_ok());
    }

    #[test]
    fn initial_slice_only() {
        let mut s = RecurrenceState::new(Region::triangle(4).unwrap());
        let vals = s.evolve_slice(2).unwrap();
        for ((v, t), p) in &vals {
            assert_eq!(*t, v.color() as i64);
            if s.region().is_boundary(*v) {
                assert!(p.is_one());
            } else {
                assert_eq!(*p, LaurentPoly::var(*v));
            }
        }
        assert_eq!(vals.len(), 15);
    }

    #[test]
    fn boundary_streams_are_ones() {
        let mut s = RecurrenceState::new(Region::cylinder(1, 2).unwrap());
        let seq = s
            .flatten_cylinder_sequence(Vertex::new(0, 0, 0), SequenceMode::Shifted, 5)
            .unwrap();
        assert!(seq.iter().all(LaurentPoly::is_one));
    }

    #[test]
    fn cold_cache_agrees() {
        let r = Region::cylinder(1, 2).unwrap();
        let mut a = RecurrenceState::new(r);
        let mut b = RecurrenceState::new(r);
        let v = Vertex::new(1, 1, -2);
        a.evolve_slice(9).unwrap();
        assert_eq!(a.value(v, 9).unwrap(), b.value(v, 9).unwrap());
        assert_eq!(
            b.value(v, 9).unwrap(),
            b.value(v + Vertex::new(0, 3, -3), 9).unwrap()
        );
    }
}
