//! Groves of `G(v,t)` restricted to the strip `0 ≤ i ≤ m`.
//!
//! Lozenges that stick out of the strip are frozen to the reference forest
//! `F_<(v,t)`; a strip grove is a choice on the remaining lozenges whose
//! extension by `F_<` is a `G(v,t)`-grove.

use std::collections::BTreeMap;

use super::{Axis, Forest, LozengeRegion};
use crate::error::{CubeError, Result};
use crate::lattice::{Region, Vertex};
use crate::laurent::{LaurentPoly, Monomial, Rational, VarId};

/// A grove of `G_m(v,t)`, stored as its extension to all of `G(v,t)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct StripGrove {
    pub forest: Forest,
    pub weight: LaurentPoly,
}

/// `F_<(v,t)`: the green diagonal exactly on lozenges above `v` of axis
/// e12 and below `v` of axis e31.
pub fn f_less(region: &LozengeRegion) -> Forest {
    let vi = region.v.i;
    let green = region
        .lozenges
        .iter()
        .map(|l| {
            let vs = l.vertices();
            let above = vs.iter().all(|u| u.i >= vi);
            let below = vs.iter().all(|u| u.i <= vi);
            (above && l.axis == Axis::E12) || (below && l.axis == Axis::E31)
        })
        .collect();
    Forest { green }
}

/// The cylinder weight: exponents of strip-interior vertices, summed onto
/// their canonical variables; everything else is specialized to 1.
pub fn cylinder_weight(region: &LozengeRegion, f: &Forest, n: i64, m: i64) -> LaurentPoly {
    let cyl = Region::Cylinder { n, m };
    let mut exps: BTreeMap<VarId, i32> = BTreeMap::new();
    for (u, e) in region.weight_exponents(f) {
        if u.i > 0 && u.i < m {
            let c = cyl.canonicalize(u).expect("strip interior");
            *exps.entry(VarId(c)).or_default() += e;
        }
    }
    LaurentPoly::term(Monomial::from_pairs(exps), Rational::from_integer(1.into()))
}

/// All `G_m(v,t)`-groves with their cylinder weights.
pub fn enumerate_strip_groves(n: i64, m: i64, v: Vertex, t: i64) -> Result<Vec<StripGrove>> {
    let cyl = Region::cylinder(n, m)?;
    if !cyl.contains(v) || cyl.is_boundary(v) {
        return Err(CubeError::OutOfRegion(v.to_string()));
    }
    let region = LozengeRegion::new(v, t)?;
    let reference = f_less(&region);
    let fixed: Vec<Option<bool>> = region
        .lozenges
        .iter()
        .zip(&reference.green)
        .map(|(l, g)| {
            let inside = l.vertices().iter().all(|u| u.i >= 0 && u.i <= m);
            if inside {
                None
            } else {
                Some(*g)
            }
        })
        .collect();
    Ok(region
        .enumerate_groves_fixed(&fixed)
        .into_iter()
        .map(|f| {
            let weight = cylinder_weight(&region, &f, n, m);
            StripGrove { forest: f, weight }
        })
        .collect())
}

/// Σ wt over all strip groves.
pub fn strip_grove_sum(n: i64, m: i64, v: Vertex, t: i64) -> Result<LaurentPoly> {
    let groves = enumerate_strip_groves(n, m, v, t)?;
    Ok(LaurentPoly::from_terms(groves.into_iter().flat_map(|g| {
        g.weight
            .terms()
            .map(|(a, b)| (a.clone(), b.clone()))
            .collect::<Vec<_>>()
    })))
}
