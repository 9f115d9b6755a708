//! The bijection between rooted forests of `G(v,t)` and boundary path
//! families of `N_(v,t)`.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

use super::{CylNetwork, Node, Path, RPath};
use crate::error::{CubeError, Result};
use crate::groves::{Forest, LozengeRegion};
use crate::lattice::Vertex;
use crate::laurent::{LaurentPoly, Monomial, Rational, VarId};

/// A forest together with one root per component.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RootedForest {
    pub forest: Forest,
    /// Sorted.
    pub roots: Vec<Vertex>,
}

impl RootedForest {
    pub fn new(forest: Forest, mut roots: Vec<Vertex>) -> Self {
        roots.sort();
        roots.dedup();
        RootedForest { forest, roots }
    }
}

/// One oriented diagonal per lozenge, pointing towards the roots.
pub fn orient(region: &LozengeRegion, rf: &RootedForest) -> Result<Vec<(Vertex, Vertex)>> {
    let edges = region.edges(&rf.forest);
    let mut adj: HashMap<Vertex, Vec<(usize, Vertex)>> = HashMap::new();
    for (k, (p, q)) in edges.iter().enumerate() {
        adj.entry(*p).or_default().push((k, *q));
        adj.entry(*q).or_default().push((k, *p));
    }
    let mut oriented: Vec<Option<(Vertex, Vertex)>> = vec![None; edges.len()];
    let mut seen: HashSet<Vertex> = HashSet::new();
    for r in &rf.roots {
        if !region.is_boundary(*r) {
            return Err(CubeError::NotRooted(format!("root {r} is not on the boundary")));
        }
        if !seen.insert(*r) {
            return Err(CubeError::NotRooted(format!("two roots share the component of {r}")));
        }
        let mut queue = VecDeque::from([*r]);
        while let Some(x) = queue.pop_front() {
            for &(k, y) in adj.get(&x).map(Vec::as_slice).unwrap_or(&[]) {
                if oriented[k].is_some() {
                    continue;
                }
                if !seen.insert(y) {
                    return Err(CubeError::NotRooted(format!("cycle or second root near {y}")));
                }
                oriented[k] = Some((y, x));
                queue.push_back(y);
            }
        }
    }
    if seen.len() != region.vertices.len() {
        return Err(CubeError::NotRooted("some component has no root".into()));
    }
    Ok(oriented.into_iter().map(|e| e.expect("every edge reached")).collect())
}

/// `φ(F)`: per lozenge with oriented diagonal `u → w`, nothing if `u = d`,
/// otherwise the edges `u → e` and `e → d`.
pub fn phi(region: &LozengeRegion, net: &CylNetwork, rf: &RootedForest) -> Result<RPath> {
    let oriented = orient(region, rf)?;
    let mut chosen = Vec::new();
    for (l, (u, _)) in region.lozenges.iter().zip(&oriented) {
        let d = l.roles()[3];
        if *u == d {
            continue;
        }
        let ku = net.index_of(Node::V(*u)).expect("vertex node");
        let ke = net.index_of(Node::Center(*l)).expect("center node");
        let kd = net.index_of(Node::V(d)).expect("vertex node");
        chosen.push(net.find_edge(ku, ke).expect("edge into center"));
        chosen.push(net.find_edge(ke, kd).expect("edge out of center"));
    }
    assemble(region, net, &chosen)
}

/// Splits a set of edges into disjoint paths ordered along the boundary.
fn assemble(region: &LozengeRegion, net: &CylNetwork, chosen: &[usize]) -> Result<RPath> {
    let mut succ: HashMap<usize, usize> = HashMap::new();
    let mut has_pred: HashSet<usize> = HashSet::new();
    for &e in chosen {
        let (a, b) = (net.edges[e].from, net.edges[e].to);
        if succ.insert(a, e).is_some() || !has_pred.insert(b) {
            return Err(CubeError::OracleMismatch("image edges are not vertex-disjoint".into()));
        }
    }
    let mut starts: Vec<usize> = succ.keys().copied().filter(|a| !has_pred.contains(a)).collect();
    let pos: HashMap<Vertex, usize> =
        region.boundary.iter().enumerate().map(|(k, v)| (*v, k)).collect();
    let key = |k: &usize| match net.nodes[*k] {
        Node::V(v) => (pos.get(&v).copied().unwrap_or(usize::MAX), v),
        Node::Center(l) => (usize::MAX, l.red),
    };
    starts.sort_by_key(key);
    let mut used = 0;
    let mut paths = Vec::new();
    for s in starts {
        let mut p = Path { nodes: vec![s], edges: vec![] };
        let mut x = s;
        while let Some(&e) = succ.get(&x) {
            x = net.edges[e].to;
            p.nodes.push(x);
            p.edges.push(e);
            used += 1;
        }
        paths.push(p);
    }
    if used != chosen.len() {
        return Err(CubeError::OracleMismatch("image edges contain a cycle".into()));
    }
    Ok(RPath { paths })
}

/// `φ^{-1}`: inverts the local rule inside every lozenge.
pub fn phi_inv(region: &LozengeRegion, net: &CylNetwork, p: &RPath) -> Result<RootedForest> {
    let edges: HashSet<usize> = p.edge_set().into_iter().collect();
    let mut out_deg: HashMap<Vertex, usize> = HashMap::new();
    let mut green = Vec::with_capacity(region.lozenges.len());
    for l in &region.lozenges {
        let [a, b, c, d] = l.roles();
        let ke = net.index_of(Node::Center(*l)).expect("center node");
        let into = |x: Vertex| {
            let kx = net.index_of(Node::V(x)).expect("vertex node");
            net.find_edge(kx, ke).is_some_and(|e| edges.contains(&e))
        };
        let from = match (into(a), into(b), into(c)) {
            (false, false, false) => d,
            (true, false, false) => a,
            (false, true, false) => b,
            (false, false, true) => c,
            _ => return Err(CubeError::NotRooted("two path edges enter one center".into())),
        };
        *out_deg.entry(from).or_default() += 1;
        let ac = from == a || from == c;
        green.push(ac == l.green_is_ac());
    }
    if out_deg.values().any(|&k| k > 1) {
        return Err(CubeError::NotRooted("a vertex has two outgoing edges".into()));
    }
    let forest = Forest { green };
    if !region.is_forest(&forest) {
        return Err(CubeError::NotRooted("preimage has a cycle".into()));
    }
    let roots: Vec<Vertex> = region
        .vertices
        .iter()
        .copied()
        .filter(|u| !out_deg.contains_key(u))
        .collect();
    if let Some(r) = roots.iter().find(|r| !region.is_boundary(**r)) {
        return Err(CubeError::NotRooted(format!("interior sink {r}")));
    }
    Ok(RootedForest::new(forest, roots))
}

/// Every rooted forest: each forest with each choice of one boundary root
/// per component. Forests with a component missing the boundary are skipped.
pub fn rooted_forests(region: &LozengeRegion) -> Vec<RootedForest> {
    let mut out = Vec::new();
    for f in region.enumerate_forests() {
        let comps = boundary_components(region, &f);
        let Some(comps) = comps else { continue };
        let mut pick = vec![0usize; comps.len()];
        loop {
            let roots = comps.iter().zip(&pick).map(|(c, k)| c[*k]).collect();
            out.push(RootedForest::new(f.clone(), roots));
            let mut d = 0;
            while d < comps.len() {
                pick[d] += 1;
                if pick[d] < comps[d].len() {
                    break;
                }
                pick[d] = 0;
                d += 1;
            }
            if d == comps.len() {
                break;
            }
        }
    }
    out
}

/// The boundary vertices of every component, or `None` if some component
/// avoids the boundary.
pub fn boundary_components(region: &LozengeRegion, f: &Forest) -> Option<Vec<Vec<Vertex>>> {
    let mut adj: HashMap<Vertex, Vec<Vertex>> = HashMap::new();
    for (p, q) in region.edges(f) {
        adj.entry(p).or_default().push(q);
        adj.entry(q).or_default().push(p);
    }
    let mut seen: HashSet<Vertex> = HashSet::new();
    let mut comps = Vec::new();
    for u in &region.vertices {
        if seen.contains(u) {
            continue;
        }
        let mut stack = vec![*u];
        seen.insert(*u);
        let mut bd = Vec::new();
        while let Some(x) = stack.pop() {
            if region.is_boundary(x) {
                bd.push(x);
            }
            for y in adj.get(&x).map(Vec::as_slice).unwrap_or(&[]) {
                if seen.insert(*y) {
                    stack.push(*y);
                }
            }
        }
        if bd.is_empty() {
            return None;
        }
        bd.sort();
        comps.push(bd);
    }
    Some(comps)
}

/// `W_(v,t) = x_{a_1} x_{a_3} ⋯ x_{a_{2t-1}} / (x_{a_2} ⋯ x_{a_{2t-2}})`.
pub fn w_weight(region: &LozengeRegion) -> LaurentPoly {
    let pairs = (1..2 * region.t).map(|i| {
        let e = if i % 2 == 1 { 1 } else { -1 };
        (VarId(region.a(i)), e)
    });
    LaurentPoly::term(Monomial::from_pairs(pairs), Rational::from_integer(1.into()))
}

/// `R_0 = {c_1, …, c_{2t-1}, b_1, …, b_{t-1}}`.
pub fn canonical_roots(region: &LozengeRegion) -> Vec<Vertex> {
    let t = region.t;
    let mut r: Vec<Vertex> = (1..2 * t).map(|i| region.c(i)).chain((1..t).map(|i| region.b(i))).collect();
    r.sort();
    r.dedup();
    r
}

/// Roots a grove canonically: `c_i` when the component has one, else `b_i`.
pub fn canonical_rooting(region: &LozengeRegion, f: &Forest) -> Option<RootedForest> {
    let cs: HashSet<Vertex> = (1..2 * region.t).map(|i| region.c(i)).collect();
    let bs: HashSet<Vertex> = (1..region.t).map(|i| region.b(i)).collect();
    let comps = boundary_components(region, f)?;
    let mut roots = Vec::new();
    for comp in comps {
        let r = comp
            .iter()
            .find(|u| cs.contains(u))
            .or_else(|| comp.iter().find(|u| bs.contains(u)))?;
        roots.push(*r);
    }
    Some(RootedForest::new(f.clone(), roots))
}

/// For a forest whose every component holds exactly one vertex of `R_0`,
/// the map `∂F` from boundary vertices to that root. `None` otherwise.
pub fn boundary_map(region: &LozengeRegion, f: &Forest) -> Option<BTreeMap<Vertex, Vertex>> {
    let r0: HashSet<Vertex> = canonical_roots(region).into_iter().collect();
    let comps = boundary_components(region, f)?;
    let mut map = BTreeMap::new();
    for comp in comps {
        let roots: Vec<&Vertex> = comp.iter().filter(|u| r0.contains(u)).collect();
        if roots.len() != 1 {
            return None;
        }
        for u in &comp {
            map.insert(*u, *roots[0]);
        }
    }
    Some(map)
}

/// Start vertices `u = (a_2, a_4, …, a_{2t-2})` and ends `w = (b_{t-1}, …, b_1)`.
pub fn canonical_endpoints(region: &LozengeRegion) -> (Vec<Vertex>, Vec<Vertex>) {
    let t = region.t;
    let u = (1..t).map(|i| region.a(2 * i)).collect();
    let w = (1..t).rev().map(|i| region.b(i)).collect();
    (u, w)
}
