//! Weighted directed networks built from lozenges, and their families of
//! vertex-disjoint paths and cycles.

pub mod charpoly;
pub mod phi;

use std::collections::HashMap;
use std::fmt;

use crate::error::Result;
use crate::groves::{Axis, Lozenge, LozengeRegion};
use crate::lattice::{Region, Vertex, E23};
use crate::laurent::LaurentPoly;

pub use charpoly::{char_poly_plethysm, char_poly_q, checked_j, q_from_cycle_sums, q_from_j, recurrence_poly, CharPoly};
pub use phi::{phi, phi_inv, RootedForest};

/// A network node: a lattice vertex or the center of a lozenge.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Node {
    V(Vertex),
    Center(Lozenge),
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Node::V(v) => f.write_str(&v.var_name()),
            Node::Center(l) => write!(
                f,
                "e[{},{},{};{}]",
                l.red.i,
                l.red.j,
                l.red.k,
                l.axis.name()
            ),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub weight: LaurentPoly,
}

/// A finite weighted directed graph. Strip networks carry their shift.
#[derive(Clone, Debug, Default)]
pub struct CylNetwork {
    pub nodes: Vec<Node>,
    index: HashMap<Node, usize>,
    pub edges: Vec<Edge>,
    out: Vec<Vec<usize>>,
    inn: Vec<Vec<usize>>,
    pub shift: Option<Vertex>,
}

impl CylNetwork {
    fn node(&mut self, n: Node) -> usize {
        if let Some(&k) = self.index.get(&n) {
            return k;
        }
        let k = self.nodes.len();
        self.nodes.push(n);
        self.index.insert(n, k);
        self.out.push(Vec::new());
        self.inn.push(Vec::new());
        k
    }

    fn edge(&mut self, from: Node, to: Node, weight: LaurentPoly) {
        let (a, b) = (self.node(from), self.node(to));
        let k = self.edges.len();
        self.edges.push(Edge { from: a, to: b, weight });
        self.out[a].push(k);
        self.inn[b].push(k);
    }

    /// Adds the four edges of a lozenge with variables given by `x`.
    fn add_lozenge(&mut self, l: Lozenge, map: impl Fn(Vertex) -> Node, x: impl Fn(Vertex) -> LaurentPoly) {
        let [a, b, c, d] = l.roles();
        let alpha = x(a).mul(&x(c)).div_exact(&x(b).mul(&x(d))).expect("monomial divisor");
        let e = Node::Center(l);
        self.edge(map(a), e, alpha.clone());
        self.edge(map(b), e, LaurentPoly::one());
        self.edge(map(c), e, alpha);
        self.edge(e, map(d), LaurentPoly::one());
    }

    pub fn index_of(&self, n: Node) -> Option<usize> {
        self.index.get(&n).copied()
    }

    pub fn out_edges(&self, k: usize) -> &[usize] {
        &self.out[k]
    }

    pub fn in_edges(&self, k: usize) -> &[usize] {
        &self.inn[k]
    }

    /// The edge from `a` to `b`, if present.
    pub fn find_edge(&self, a: usize, b: usize) -> Option<usize> {
        self.out[a].iter().copied().find(|&e| self.edges[e].to == b)
    }

    /// Kahn's algorithm; `None` if there is a directed cycle.
    pub fn topological_order(&self) -> Option<Vec<usize>> {
        let mut indeg: Vec<usize> = self.inn.iter().map(Vec::len).collect();
        let mut ready: Vec<usize> = (0..self.nodes.len()).filter(|&k| indeg[k] == 0).collect();
        let mut order = Vec::with_capacity(self.nodes.len());
        while let Some(k) = ready.pop() {
            order.push(k);
            for &e in &self.out[k] {
                let t = self.edges[e].to;
                indeg[t] -= 1;
                if indeg[t] == 0 {
                    ready.push(t);
                }
            }
        }
        (order.len() == self.nodes.len()).then_some(order)
    }

    /// One line per edge: `src dst weight-json`.
    pub fn to_edge_list(&self) -> String {
        let mut lines: Vec<String> = self
            .edges
            .iter()
            .map(|e| {
                format!(
                    "{} {} {}",
                    self.nodes[e.from],
                    self.nodes[e.to],
                    serde_json::to_string(&e.weight.to_json()).expect("json")
                )
            })
            .collect();
        lines.sort();
        let mut s = lines.join("\n");
        s.push('\n');
        s
    }

    pub fn path_weight(&self, edges: &[usize]) -> LaurentPoly {
        edges
            .iter()
            .fold(LaurentPoly::one(), |acc, &e| acc.mul(&self.edges[e].weight))
    }
}

/// `N_(v,t)`: four edges per lozenge of `G(v,t)`, plane variables.
pub fn build_triangle_network(region: &LozengeRegion) -> CylNetwork {
    let mut net = CylNetwork::default();
    for u in &region.vertices {
        net.node(Node::V(*u));
    }
    for l in &region.lozenges {
        net.add_lozenge(*l, Node::V, LaurentPoly::var);
    }
    net
}

fn strip_var(n: i64, m: i64, u: Vertex) -> LaurentPoly {
    if u.i == 0 || u.i == m {
        LaurentPoly::one()
    } else {
        let c = Region::Cylinder { n, m }.canonicalize(u).expect("in strip");
        LaurentPoly::var(c)
    }
}

/// `N_{n,m}`: the strip network projected to one period of the cylinder.
///
/// Boundary edges `u + e23 → u` are added only for red `u`, mirroring the
/// forced red-blue edges of a (3n, m)-grove; with an edge at every boundary
/// vertex the boundary rows close into extra cycles of weight 1.
pub fn build_strip_network(n: i64, m: i64) -> Result<CylNetwork> {
    let cyl = Region::cylinder(n, m)?;
    let canon = |u: Vertex| cyl.canonicalize(u).expect("in strip");
    let mut net = CylNetwork { shift: cyl.shift(), ..Default::default() };
    let dom = cyl.fundamental_domain().expect("finite");
    for u in &dom {
        net.node(Node::V(*u));
    }
    for u in dom.iter().filter(|u| u.color() == 0) {
        for ax in Axis::ALL {
            let l = Lozenge::new(*u, ax);
            if l.vertices().iter().all(|w| (0..=m).contains(&w.i)) {
                net.add_lozenge(l, |w| Node::V(canon(w)), |w| strip_var(n, m, w));
            }
        }
        if u.i == 0 || u.i == m {
            net.edge(Node::V(canon(*u + E23)), Node::V(*u), LaurentPoly::one());
        }
    }
    Ok(net)
}

/// The strip network lifted to the window `j_lo ≤ j ≤ j_hi`, keeping only
/// lozenges and boundary edges that fit entirely inside.
pub fn build_strip_lift(n: i64, m: i64, j_lo: i64, j_hi: i64) -> Result<CylNetwork> {
    let cyl = Region::cylinder(n, m)?;
    let mut net = CylNetwork { shift: cyl.shift(), ..Default::default() };
    let inside = |w: &Vertex| (0..=m).contains(&w.i) && (j_lo..=j_hi).contains(&w.j);
    for i in 0..=m {
        for j in j_lo..=j_hi {
            net.node(Node::V(Vertex::new(i, j, -i - j)));
        }
    }
    for i in 0..=m {
        for j in j_lo..=j_hi {
            let u = Vertex::new(i, j, -i - j);
            if u.color() == 0 {
                for ax in Axis::ALL {
                    let l = Lozenge::new(u, ax);
                    if l.vertices().iter().all(inside) {
                        net.add_lozenge(l, Node::V, |w| strip_var(n, m, w));
                    }
                }
            }
            if (i == 0 || i == m) && u.color() == 0 && inside(&(u + E23)) {
                net.edge(Node::V(u + E23), Node::V(u), LaurentPoly::one());
            }
        }
    }
    Ok(net)
}

/// A single directed path: its nodes and the edges between them.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Path {
    pub nodes: Vec<usize>,
    pub edges: Vec<usize>,
}

/// An ordered family of pairwise vertex-disjoint paths.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct RPath {
    pub paths: Vec<Path>,
}

impl RPath {
    pub fn r(&self) -> usize {
        self.paths.len()
    }

    pub fn weight(&self, net: &CylNetwork) -> LaurentPoly {
        self.paths
            .iter()
            .fold(LaurentPoly::one(), |acc, p| acc.mul(&net.path_weight(&p.edges)))
    }

    pub fn edge_set(&self) -> Vec<usize> {
        let mut e: Vec<usize> = self.paths.iter().flat_map(|p| p.edges.iter().copied()).collect();
        e.sort();
        e
    }

    pub fn is_disjoint(&self) -> bool {
        let mut seen = std::collections::HashSet::new();
        self.paths.iter().flat_map(|p| &p.nodes).all(|n| seen.insert(*n))
    }
}

/// All families of vertex-disjoint paths with path `i` running from `u[i]`
/// to `w[i]`.
pub fn enumerate_rpaths(net: &CylNetwork, u: &[usize], w: &[usize]) -> Vec<RPath> {
    enumerate_rpaths_any(net, u, w)
        .into_iter()
        .filter(|(_, perm)| perm.iter().enumerate().all(|(i, p)| i == *p))
        .map(|(p, _)| p)
        .collect()
}

/// All vertex-disjoint families from `u` to `w` in any matching; each is
/// returned with the permutation `i -> π(i)` sending path `i` to `w[π(i)]`.
pub fn enumerate_rpaths_any(net: &CylNetwork, u: &[usize], w: &[usize]) -> Vec<(RPath, Vec<usize>)> {
    assert_eq!(u.len(), w.len());
    let mut used = vec![false; net.nodes.len()];
    let mut end_of: HashMap<usize, usize> = HashMap::new();
    for (k, x) in w.iter().enumerate() {
        end_of.insert(*x, k);
    }
    for x in u.iter().chain(w) {
        used[*x] = true;
    }
    let mut out = Vec::new();
    let mut state = PathSearch {
        net,
        u,
        end_of: &end_of,
        used,
        taken_end: vec![false; w.len()],
        family: Vec::new(),
        perm: Vec::new(),
    };
    state.next_path(&mut out);
    out
}

struct PathSearch<'a> {
    net: &'a CylNetwork,
    u: &'a [usize],
    end_of: &'a HashMap<usize, usize>,
    used: Vec<bool>,
    taken_end: Vec<bool>,
    family: Vec<Path>,
    perm: Vec<usize>,
}

impl PathSearch<'_> {
    fn next_path(&mut self, out: &mut Vec<(RPath, Vec<usize>)>) {
        let i = self.family.len();
        if i == self.u.len() {
            out.push((RPath { paths: self.family.clone() }, self.perm.clone()));
            return;
        }
        let start = self.u[i];
        // a path of length zero when a start is also an end
        if let Some(&k) = self.end_of.get(&start) {
            if !self.taken_end[k] {
                self.finish(Path { nodes: vec![start], edges: vec![] }, k, out);
            }
        }
        let mut path = Path { nodes: vec![start], edges: vec![] };
        self.extend(&mut path, out);
    }

    fn finish(&mut self, path: Path, k: usize, out: &mut Vec<(RPath, Vec<usize>)>) {
        self.taken_end[k] = true;
        self.family.push(path);
        self.perm.push(k);
        self.next_path(out);
        self.perm.pop();
        self.family.pop();
        self.taken_end[k] = false;
    }

    fn extend(&mut self, path: &mut Path, out: &mut Vec<(RPath, Vec<usize>)>) {
        let here = *path.nodes.last().unwrap();
        for &e in self.net.out_edges(here) {
            let next = self.net.edges[e].to;
            if let Some(&k) = self.end_of.get(&next) {
                if !self.taken_end[k] && !path.nodes.contains(&next) {
                    let mut done = path.clone();
                    done.nodes.push(next);
                    done.edges.push(e);
                    self.finish(done, k, out);
                }
                continue;
            }
            if self.used[next] {
                continue;
            }
            self.used[next] = true;
            path.nodes.push(next);
            path.edges.push(e);
            self.extend(path, out);
            path.edges.pop();
            path.nodes.pop();
            self.used[next] = false;
        }
    }
}

/// A simple directed cycle, rotated to start at its smallest node.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Cycle {
    pub nodes: Vec<usize>,
    pub edges: Vec<usize>,
}

/// A set of pairwise vertex-disjoint simple cycles.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct RCycle {
    pub cycles: Vec<Cycle>,
}

impl RCycle {
    pub fn weight(&self, net: &CylNetwork) -> LaurentPoly {
        self.cycles
            .iter()
            .fold(LaurentPoly::one(), |acc, c| acc.mul(&net.path_weight(&c.edges)))
    }
}

/// All simple cycles, each found once from its smallest node.
pub fn enumerate_simple_cycles(net: &CylNetwork) -> Vec<Cycle> {
    let mut out = Vec::new();
    let mut on_path = vec![false; net.nodes.len()];
    for s in 0..net.nodes.len() {
        let mut nodes = vec![s];
        let mut edges = Vec::new();
        on_path[s] = true;
        cycle_dfs(net, s, &mut nodes, &mut edges, &mut on_path, &mut out);
        on_path[s] = false;
    }
    out
}

fn cycle_dfs(
    net: &CylNetwork,
    s: usize,
    nodes: &mut Vec<usize>,
    edges: &mut Vec<usize>,
    on_path: &mut [bool],
    out: &mut Vec<Cycle>,
) {
    let here = *nodes.last().unwrap();
    for &e in net.out_edges(here) {
        let next = net.edges[e].to;
        if next == s {
            let mut es = edges.clone();
            es.push(e);
            out.push(Cycle { nodes: nodes.clone(), edges: es });
        } else if next > s && !on_path[next] {
            on_path[next] = true;
            nodes.push(next);
            edges.push(e);
            cycle_dfs(net, s, nodes, edges, on_path, out);
            edges.pop();
            nodes.pop();
            on_path[next] = false;
        }
    }
}

/// All families of `r` pairwise vertex-disjoint simple cycles.
pub fn enumerate_rcycles(net: &CylNetwork, r: usize) -> Vec<RCycle> {
    let cycles = enumerate_simple_cycles(net);
    rcycles_from(&cycles, net.nodes.len(), r)
}

fn rcycles_from(cycles: &[Cycle], n_nodes: usize, r: usize) -> Vec<RCycle> {
    let mut out = Vec::new();
    let mut used = vec![false; n_nodes];
    let mut pick = Vec::new();
    choose_cycles(cycles, 0, r, &mut used, &mut pick, &mut out);
    out
}

fn choose_cycles(
    cycles: &[Cycle],
    from: usize,
    r: usize,
    used: &mut [bool],
    pick: &mut Vec<usize>,
    out: &mut Vec<RCycle>,
) {
    if pick.len() == r {
        out.push(RCycle { cycles: pick.iter().map(|&k| cycles[k].clone()).collect() });
        return;
    }
    for k in from..cycles.len() {
        let c = &cycles[k];
        if c.nodes.iter().any(|&x| used[x]) {
            continue;
        }
        for &x in &c.nodes {
            used[x] = true;
        }
        pick.push(k);
        choose_cycles(cycles, k + 1, r, used, pick, out);
        pick.pop();
        for &x in &c.nodes {
            used[x] = false;
        }
    }
}

/// `Σ_{C ∈ 𝒞^r} wt(C)` for `r = 0, 1, …` up to the largest nonempty `r`.
pub fn cycle_sums(net: &CylNetwork) -> Vec<LaurentPoly> {
    let cycles = enumerate_simple_cycles(net);
    let mut sums = Vec::new();
    for r in 0.. {
        let fams = rcycles_from(&cycles, net.nodes.len(), r);
        if fams.is_empty() {
            break;
        }
        let total = fams
            .iter()
            .fold(LaurentPoly::zero(), |acc, f| acc.add(&f.weight(net)));
        sums.push(total);
    }
    sums
}

/// The statistic `h(v) = i + k = -j` on lattice nodes.
pub fn h_stat(v: Vertex) -> i64 {
    -v.j
}
