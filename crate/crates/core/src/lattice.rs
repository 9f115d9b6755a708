//! Triangular lattice geometry: vertices, colors, step vectors and the
//! four regions with their quotient canonicalization.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use crate::error::{CubeError, Result};

/// A point `(i, j, k)` of the plane `i + j + k = const`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Vertex {
    pub i: i64,
    pub j: i64,
    pub k: i64,
}

pub const E12: Vertex = Vertex { i: 1, j: -1, k: 0 };
pub const E23: Vertex = Vertex { i: 0, j: 1, k: -1 };
pub const E31: Vertex = Vertex { i: -1, j: 0, k: 1 };
pub const ORIGIN: Vertex = Vertex { i: 0, j: 0, k: 0 };

/// The three lattice axes, in the order used by the recurrence.
pub const AXES: [Vertex; 3] = [E12, E23, E31];

impl Vertex {
    pub const fn new(i: i64, j: i64, k: i64) -> Self {
        Vertex { i, j, k }
    }

    pub fn sum(&self) -> i64 {
        self.i + self.j + self.k
    }

    /// `(j - k) mod 3`: 0 red, 1 green, 2 blue.
    pub fn color(&self) -> u8 {
        (self.j - self.k).rem_euclid(3) as u8
    }

    /// The six neighbors in the order +e12, -e12, +e23, -e23, +e31, -e31.
    pub fn neighbors(&self) -> [Vertex; 6] {
        [
            *self + E12,
            *self - E12,
            *self + E23,
            *self - E23,
            *self + E31,
            *self - E31,
        ]
    }

    /// Rendering as a variable name, `x[i,j,k]`.
    pub fn var_name(&self) -> String {
        format!("x[{},{},{}]", self.i, self.j, self.k)
    }

    /// Parses `x[i,j,k]`.
    pub fn parse_var(s: &str) -> Result<Vertex> {
        let body = s
            .trim()
            .strip_prefix("x[")
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| CubeError::Parse(format!("expected x[i,j,k], got {s:?}")))?;
        body.parse()
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.i, self.j, self.k)
    }
}

/// Parses `i,j,k`, optionally wrapped in parentheses.
impl FromStr for Vertex {
    type Err = CubeError;
    fn from_str(s: &str) -> Result<Vertex> {
        let t = s.trim().trim_start_matches('(').trim_end_matches(')');
        let parts: Vec<&str> = t.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(CubeError::Parse(format!("expected three coordinates, got {s:?}")));
        }
        let mut c = [0i64; 3];
        for (slot, p) in c.iter_mut().zip(&parts) {
            *slot = p
                .parse()
                .map_err(|_| CubeError::Parse(format!("bad coordinate {p:?} in {s:?}")))?;
        }
        Ok(Vertex::new(c[0], c[1], c[2]))
    }
}

impl Add for Vertex {
    type Output = Vertex;
    fn add(self, o: Vertex) -> Vertex {
        Vertex::new(self.i + o.i, self.j + o.j, self.k + o.k)
    }
}

impl Sub for Vertex {
    type Output = Vertex;
    fn sub(self, o: Vertex) -> Vertex {
        Vertex::new(self.i - o.i, self.j - o.j, self.k - o.k)
    }
}

impl Neg for Vertex {
    type Output = Vertex;
    fn neg(self) -> Vertex {
        Vertex::new(-self.i, -self.j, -self.k)
    }
}

impl Mul<Vertex> for i64 {
    type Output = Vertex;
    fn mul(self, v: Vertex) -> Vertex {
        Vertex::new(self * v.i, self * v.j, self * v.k)
    }
}

/// The rotation `(i,j,k) -> (j,k,i)` of the triangle `Δ_m`.
pub fn rotate(m: i64, v: Vertex) -> Result<Vertex> {
    if v.sum() != m || v.i < 0 || v.j < 0 || v.k < 0 {
        return Err(CubeError::OutOfRegion(v.to_string()));
    }
    Ok(Vertex::new(v.j, v.k, v.i))
}

/// Reduction modulo the rank-two lattice spanned by two periods of a torus.
///
/// Vectors of the plane are written in the basis `(e12, e23)`, where
/// `(i,j,k) = i·e12 + (-k)·e23`. The period lattice is stored in a
/// triangular basis `{(u1, u2), (w1, 0)}` with `u2, w1 > 0`, so every class
/// has a unique representative with `0 ≤ q < u2` and `0 ≤ p < w1`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct TorusLattice {
    pub a: Vertex,
    pub b: Vertex,
    u: (i64, i64),
    w1: i64,
}

fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        if a < 0 {
            (-a, -1, 0)
        } else {
            (a, 1, 0)
        }
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        // a = b*q + r with r = a.rem_euclid(b)
        let q = (a - a.rem_euclid(b)) / b;
        (g, y, x - q * y)
    }
}

impl TorusLattice {
    pub fn new(a: Vertex, b: Vertex) -> Result<Self> {
        if a.sum() != 0 || b.sum() != 0 {
            return Err(CubeError::InvalidRegion("torus periods must lie in P_0".into()));
        }
        if a.color() != 0 || b.color() != 0 {
            return Err(CubeError::InvalidRegion(
                "torus periods must preserve colors".into(),
            ));
        }
        let (a1, a2) = (a.i, -a.k);
        let (b1, b2) = (b.i, -b.k);
        let det = a1 * b2 - a2 * b1;
        if det == 0 {
            return Err(CubeError::InvalidRegion("torus periods are dependent".into()));
        }
        let (g, s, t) = if a2 == 0 && b2 == 0 {
            unreachable!("det != 0 forces a nonzero second coordinate")
        } else {
            ext_gcd(a2, b2)
        };
        let u = (s * a1 + t * b1, s * a2 + t * b2);
        debug_assert_eq!(u.1, g);
        let w1 = ((b2 / g) * a1 - (a2 / g) * b1).abs();
        Ok(TorusLattice { a, b, u, w1 })
    }

    /// Number of classes, `|det(A, B)|`.
    pub fn index(&self) -> i64 {
        self.u.1 * self.w1
    }

    pub fn reduce(&self, v: Vertex) -> Vertex {
        let (mut p, mut q) = (v.i, -v.k);
        let c = q.div_euclid(self.u.1);
        p -= c * self.u.0;
        q -= c * self.u.1;
        p = p.rem_euclid(self.w1);
        Vertex::new(p, q - p, -q)
    }

    /// All canonical representatives, sorted.
    pub fn representatives(&self) -> Vec<Vertex> {
        let mut out = Vec::with_capacity(self.index() as usize);
        for q in 0..self.u.1 {
            for p in 0..self.w1 {
                out.push(Vertex::new(p, q - p, -q));
            }
        }
        out.sort();
        out
    }
}

/// The four geometries of the recurrence.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Region {
    Plane,
    Triangle { m: i64 },
    Cylinder { n: i64, m: i64 },
    Torus(TorusLattice),
}

impl Region {
    pub fn triangle(m: i64) -> Result<Region> {
        if m < 3 {
            return Err(CubeError::InvalidRegion(format!("triangle needs m >= 3, got {m}")));
        }
        Ok(Region::Triangle { m })
    }

    pub fn cylinder(n: i64, m: i64) -> Result<Region> {
        if n < 1 || m < 2 {
            return Err(CubeError::InvalidRegion(format!(
                "cylinder needs n >= 1 and m >= 2, got n={n}, m={m}"
            )));
        }
        Ok(Region::Cylinder { n, m })
    }

    pub fn torus(a: Vertex, b: Vertex) -> Result<Region> {
        Ok(Region::Torus(TorusLattice::new(a, b)?))
    }

    /// The constant `i + j + k` of member vertices.
    pub fn plane_index(&self) -> i64 {
        match self {
            Region::Triangle { m } => *m,
            _ => 0,
        }
    }

    pub fn contains(&self, v: Vertex) -> bool {
        if v.sum() != self.plane_index() {
            return false;
        }
        match self {
            Region::Plane | Region::Torus(_) => true,
            Region::Triangle { .. } => v.i >= 0 && v.j >= 0 && v.k >= 0,
            Region::Cylinder { m, .. } => (0..=*m).contains(&v.i),
        }
    }

    pub fn is_boundary(&self, v: Vertex) -> bool {
        match self {
            Region::Plane | Region::Torus(_) => false,
            Region::Triangle { .. } => v.i == 0 || v.j == 0 || v.k == 0,
            Region::Cylinder { m, .. } => v.i == 0 || v.i == *m,
        }
    }

    pub fn canonicalize(&self, v: Vertex) -> Result<Vertex> {
        if !self.contains(v) {
            return Err(CubeError::OutOfRegion(v.to_string()));
        }
        Ok(match self {
            Region::Plane | Region::Triangle { .. } => v,
            Region::Cylinder { n, .. } => {
                let period = 3 * n;
                let s = v.j.div_euclid(period);
                v - s * Vertex::new(0, period, -period)
            }
            Region::Torus(t) => t.reduce(v),
        })
    }

    /// The shift vector `ĝ = 3n·e23` of a cylinder.
    pub fn shift(&self) -> Option<Vertex> {
        match self {
            Region::Cylinder { n, .. } => Some(3 * n * E23),
            _ => None,
        }
    }

    /// Canonical representatives of a finite quotient, sorted; `None` for the plane.
    pub fn fundamental_domain(&self) -> Option<Vec<Vertex>> {
        match self {
            Region::Plane => None,
            Region::Triangle { m } => {
                let mut out = Vec::new();
                for i in 0..=*m {
                    for j in 0..=(*m - i) {
                        out.push(Vertex::new(i, j, *m - i - j));
                    }
                }
                Some(out)
            }
            Region::Cylinder { n, m } => {
                let mut out = Vec::new();
                for i in 0..=*m {
                    for j in 0..3 * n {
                        out.push(Vertex::new(i, j, -i - j));
                    }
                }
                Some(out)
            }
            Region::Torus(t) => Some(t.representatives()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn colors_and_steps() {
        assert_eq!(ORIGIN.color(), 0);
        assert_eq!(Vertex::new(1, 1, 3).color(), 1);
        assert_eq!(E12 + E23 + E31, ORIGIN);
        for v in [ORIGIN, Vertex::new(0, 1, -1), Vertex::new(0, 2, -2)] {
            for e in AXES {
                assert_eq!((v + e).color(), (v.color() + 2) % 3);
            }
            assert_eq!((v + 3 * E23).color(), v.color());
        }
    }

    #[test]
    fn neighbor_order() {
        let n = ORIGIN.neighbors();
        assert_eq!(n[0], Vertex::new(1, -1, 0));
        assert_eq!(n[1], Vertex::new(-1, 1, 0));
        assert_eq!(n[2], Vertex::new(0, 1, -1));
        assert_eq!(n[3], Vertex::new(0, -1, 1));
        assert_eq!(n[4], Vertex::new(-1, 0, 1));
        assert_eq!(n[5], Vertex::new(1, 0, -1));
        assert!(n.iter().all(|u| u.sum() == 0));
    }

    #[test]
    fn rotation() {
        assert_eq!(rotate(5, Vertex::new(1, 1, 3)).unwrap(), Vertex::new(1, 3, 1));
        let v = Vertex::new(0, 2, 3);
        let r = rotate(5, v).unwrap();
        assert_eq!(r, Vertex::new(2, 3, 0));
        let r3 = rotate(5, rotate(5, r).unwrap()).unwrap();
        assert_eq!(r3, v);
        assert!(rotate(5, Vertex::new(-1, 3, 3)).is_err());
    }

    #[test]
    fn cylinder_canonical() {
        let r = Region::cylinder(1, 2).unwrap();
        assert_eq!(r.canonicalize(Vertex::new(1, 3, -4)).unwrap(), Vertex::new(1, 0, -1));
        assert_eq!(r.canonicalize(Vertex::new(1, 0, -1)).unwrap(), Vertex::new(1, 0, -1));
        assert!(r.canonicalize(Vertex::new(3, 0, -3)).is_err());
    }

    #[test]
    fn torus_rejects_bad_periods() {
        assert!(Region::torus(Vertex::new(1, -1, 0), Vertex::new(0, 3, -3)).is_err());
        assert!(Region::torus(Vertex::new(3, -3, 0), Vertex::new(6, -6, 0)).is_err());
    }

    #[test]
    fn vertex_parsing() {
        assert_eq!("1,-2,1".parse::<Vertex>().unwrap(), Vertex::new(1, -2, 1));
        assert_eq!(Vertex::parse_var("x[1,3,1]").unwrap(), Vertex::new(1, 3, 1));
        assert!(Vertex::parse_var("y[1,3,1]").is_err());
        assert_eq!(Vertex::new(1, 3, 1).var_name(), "x[1,3,1]");
    }
}
