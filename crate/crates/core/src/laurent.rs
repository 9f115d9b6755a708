//! Sparse multivariate Laurent polynomials with exact rational coefficients.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::{CubeError, Result};
use crate::lattice::Vertex;

pub type Rational = BigRational;

/// An indeterminate, named by the canonical vertex it sits on.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct VarId(pub Vertex);

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.var_name())
    }
}

/// A monomial: variables sorted ascending, exponents never zero.
///
/// Ordered graded-lexicographically: total degree first, then the exponent
/// of the smallest variable, then the next one, and so on.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial(Vec<(VarId, i32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: VarId, e: i32) -> Self {
        if e == 0 {
            Monomial::one()
        } else {
            Monomial(vec![(v, e)])
        }
    }

    /// Builds a monomial from arbitrary (variable, exponent) pairs.
    pub fn from_pairs<I: IntoIterator<Item = (VarId, i32)>>(pairs: I) -> Self {
        let mut acc: BTreeMap<VarId, i32> = BTreeMap::new();
        for (v, e) in pairs {
            *acc.entry(v).or_insert(0) += e;
        }
        Monomial(acc.into_iter().filter(|&(_, e)| e != 0).collect())
    }

    pub fn exponents(&self) -> &[(VarId, i32)] {
        &self.0
    }

    pub fn exponent(&self, v: VarId) -> i32 {
        match self.0.binary_search_by(|(w, _)| w.cmp(&v)) {
            Ok(p) => self.0[p].1,
            Err(_) => 0,
        }
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().map(|&(_, e)| e as i64).sum()
    }

    pub fn l1(&self) -> i64 {
        self.0.iter().map(|&(_, e)| (e as i64).abs()).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        self.combine(o, 1)
    }

    pub fn div(&self, o: &Monomial) -> Monomial {
        self.combine(o, -1)
    }

    pub fn inv(&self) -> Monomial {
        Monomial(self.0.iter().map(|&(v, e)| (v, -e)).collect())
    }

    fn combine(&self, o: &Monomial, sign: i32) -> Monomial {
        let (a, b) = (&self.0, &o.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut x, mut y) = (0, 0);
        while x < a.len() || y < b.len() {
            let ord = match (a.get(x), b.get(y)) {
                (Some(p), Some(q)) => p.0.cmp(&q.0),
                (Some(_), None) => Ordering::Less,
                _ => Ordering::Greater,
            };
            match ord {
                Ordering::Less => {
                    out.push(a[x]);
                    x += 1;
                }
                Ordering::Greater => {
                    out.push((b[y].0, sign * b[y].1));
                    y += 1;
                }
                Ordering::Equal => {
                    let e = a[x].1 + sign * b[y].1;
                    if e != 0 {
                        out.push((a[x].0, e));
                    }
                    x += 1;
                    y += 1;
                }
            }
        }
        Monomial(out)
    }

    /// Whether every exponent of `self` is at least the matching one of `o`.
    fn dominates(&self, o: &Monomial) -> bool {
        o.0.iter().all(|&(v, e)| self.exponent(v) >= e)
    }

    fn lex_cmp(&self, o: &Monomial) -> Ordering {
        let (a, b) = (&self.0, &o.0);
        let (mut x, mut y) = (0, 0);
        loop {
            match (a.get(x), b.get(y)) {
                (None, None) => return Ordering::Equal,
                (Some(p), None) => return p.1.cmp(&0),
                (None, Some(q)) => return 0.cmp(&q.1),
                (Some(p), Some(q)) => match p.0.cmp(&q.0) {
                    Ordering::Less => return p.1.cmp(&0),
                    Ordering::Greater => return 0.cmp(&q.1),
                    Ordering::Equal => {
                        if p.1 != q.1 {
                            return p.1.cmp(&q.1);
                        }
                        x += 1;
                        y += 1;
                    }
                },
            }
        }
    }
}

impl Ord for Monomial {
    fn cmp(&self, o: &Self) -> Ordering {
        self.degree().cmp(&o.degree()).then_with(|| self.lex_cmp(o))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (n, (v, e)) in self.0.iter().enumerate() {
            if n > 0 {
                f.write_str("*")?;
            }
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

/// A Laurent polynomial in canonical form: no zero coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<Monomial, Rational>,
}

pub fn rational(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Parses `p/q` or `p`; decimals are rejected.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || CubeError::Parse(format!("not an exact rational: {s:?}"));
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s, "1"),
    };
    let p: BigInt = p.parse().map_err(|_| bad())?;
    let q: BigInt = q.parse().map_err(|_| bad())?;
    if q.is_zero() {
        return Err(CubeError::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Rational::new(p, q))
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly::default()
    }

    pub fn one() -> Self {
        LaurentPoly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        LaurentPoly::term(Monomial::one(), c)
    }

    pub fn int(n: i64) -> Self {
        LaurentPoly::constant(rational(n))
    }

    pub fn var(v: Vertex) -> Self {
        LaurentPoly::term(Monomial::var(VarId(v), 1), Rational::one())
    }

    pub fn term(m: Monomial, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        LaurentPoly { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rational)>>(it: I) -> Self {
        let mut acc: HashMap<Monomial, Rational> = HashMap::new();
        for (m, c) in it {
            *acc.entry(m).or_insert_with(Rational::zero) += c;
        }
        LaurentPoly {
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in increasing monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn leading(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn as_constant(&self) -> Option<&Rational> {
        match self.terms.len() {
            0 => None,
            1 => self.terms.get(&Monomial::one()),
            _ => None,
        }
    }

    /// The value when the polynomial is constant (zero included).
    pub fn constant_value(&self) -> Option<Rational> {
        if self.is_zero() {
            Some(Rational::zero())
        } else {
            self.as_constant().cloned()
        }
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn variables(&self) -> Vec<VarId> {
        let mut vs: Vec<VarId> = self
            .terms
            .keys()
            .flat_map(|m| m.0.iter().map(|&(v, _)| v))
            .collect();
        vs.sort();
        vs.dedup();
        vs
    }

    pub fn add(&self, o: &LaurentPoly) -> LaurentPoly {
        let (big, small) = if self.len() >= o.len() { (self, o) } else { (o, self) };
        let mut terms = big.terms.clone();
        for (m, c) in &small.terms {
            add_into(&mut terms, m, c);
        }
        LaurentPoly { terms }
    }

    pub fn neg(&self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, o: &LaurentPoly) -> LaurentPoly {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &Rational) -> LaurentPoly {
        if c.is_zero() {
            return LaurentPoly::zero();
        }
        LaurentPoly {
            terms: self.terms.iter().map(|(m, d)| (m.clone(), d * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Rational) -> LaurentPoly {
        if c.is_zero() {
            return LaurentPoly::zero();
        }
        LaurentPoly {
            terms: self.terms.iter().map(|(n, d)| (n.mul(m), d * c)).collect(),
        }
    }

    pub fn mul(&self, o: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() || o.is_zero() {
            return LaurentPoly::zero();
        }
        if let Some((m, c)) = single(o) {
            return self.mul_monomial(m, c);
        }
        if let Some((m, c)) = single(self) {
            return o.mul_monomial(m, c);
        }
        let mut acc: HashMap<Monomial, Rational> =
            HashMap::with_capacity(self.len().saturating_mul(o.len()).min(1 << 20));
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                let m = m1.mul(m2);
                let c = c1 * c2;
                match acc.get_mut(&m) {
                    Some(slot) => *slot += c,
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        LaurentPoly {
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> LaurentPoly {
        let mut out = LaurentPoly::one();
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Exact quotient `self / den` in the Laurent ring.
    ///
    /// Both sides are shifted by their monomial content so they become
    /// ordinary polynomials with no monomial factor; a Laurent quotient
    /// exists iff those polynomials divide, and polynomial long division
    /// under a well-order terminates.
    pub fn div_exact(&self, den: &LaurentPoly) -> Result<LaurentPoly> {
        if den.is_zero() {
            return Err(CubeError::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(LaurentPoly::zero());
        }
        if let Some((m, c)) = single(den) {
            return Ok(self.mul_monomial(&m.inv(), &c.recip()));
        }
        let alpha = den.content();
        let beta = self.content();
        let d0 = den.mul_monomial(&alpha.inv(), &Rational::one());
        let mut rem = self.mul_monomial(&beta.inv(), &Rational::one()).terms;
        let (lm_d, lc_d) = d0.leading().map(|(m, c)| (m.clone(), c.clone())).unwrap();
        let lc_inv = lc_d.recip();
        let mut quot: Vec<(Monomial, Rational)> = Vec::new();
        while let Some((lm, lc)) = rem.iter().next_back() {
            if !lm.dominates(&lm_d) {
                return Err(CubeError::NotDivisible);
            }
            let qm = lm.div(&lm_d);
            let qc = lc * &lc_inv;
            for (m, c) in &d0.terms {
                let t = m.mul(&qm);
                let delta = -(c * &qc);
                add_into(&mut rem, &t, &delta);
            }
            quot.push((qm, qc));
        }
        let shift = beta.div(&alpha);
        Ok(LaurentPoly {
            terms: quot.into_iter().map(|(m, c)| (m.mul(&shift), c)).collect(),
        })
    }

    /// The componentwise minimum exponent over all terms.
    fn content(&self) -> Monomial {
        let mut mins: BTreeMap<VarId, i32> = BTreeMap::new();
        for v in self.variables() {
            mins.insert(v, i32::MAX);
        }
        for m in self.terms.keys() {
            for (v, slot) in mins.iter_mut() {
                *slot = (*slot).min(m.exponent(*v));
            }
        }
        Monomial(mins.into_iter().filter(|&(_, e)| e != 0).collect())
    }

    /// Full evaluation at a rational point.
    pub fn substitute(&self, assign: &HashMap<VarId, Rational>) -> Result<Rational> {
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for &(v, e) in m.exponents() {
                let x = assign
                    .get(&v)
                    .ok_or_else(|| CubeError::MissingAssignment(v.to_string()))?;
                t *= rational_pow(x, e).ok_or_else(|| CubeError::ZeroSubstitution(v.to_string()))?;
            }
            total += t;
        }
        Ok(total)
    }

    /// Partial evaluation: assigned variables are replaced, the rest stay symbolic.
    pub fn specialize(&self, assign: &HashMap<VarId, Rational>) -> Result<LaurentPoly> {
        let mut out: Vec<(Monomial, Rational)> = Vec::with_capacity(self.len());
        for (m, c) in &self.terms {
            let mut t = c.clone();
            let mut rest = Vec::new();
            for &(v, e) in m.exponents() {
                match assign.get(&v) {
                    Some(x) => {
                        t *= rational_pow(x, e)
                            .ok_or_else(|| CubeError::ZeroSubstitution(v.to_string()))?
                    }
                    None => rest.push((v, e)),
                }
            }
            out.push((Monomial(rest), t));
        }
        Ok(LaurentPoly::from_terms(out))
    }

    /// Largest ℓ¹ exponent size over all monomials.
    pub fn degree_spread(&self) -> Result<i64> {
        self.terms.keys().map(Monomial::l1).max().ok_or(CubeError::ZeroPolynomial)
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mono: serde_json::Map<String, Value> =
                    m.0.iter().map(|(v, e)| (v.to_string(), json!(e))).collect();
                json!({ "coeff": c.to_string(), "monomial": mono })
            })
            .collect();
        json!({ "terms": terms })
    }

    pub fn from_json(v: &Value) -> Result<LaurentPoly> {
        let bad = |what: &str| CubeError::Parse(format!("Laurent polynomial JSON: {what}"));
        let terms = v
            .get("terms")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing terms array"))?;
        let mut out = Vec::with_capacity(terms.len());
        for t in terms {
            let c = t
                .get("coeff")
                .and_then(Value::as_str)
                .ok_or_else(|| bad("missing coeff string"))?;
            let mono = t
                .get("monomial")
                .and_then(Value::as_object)
                .ok_or_else(|| bad("missing monomial object"))?;
            let mut pairs = Vec::with_capacity(mono.len());
            for (name, e) in mono {
                let e = e
                    .as_i64()
                    .and_then(|e| i32::try_from(e).ok())
                    .ok_or_else(|| bad("exponent is not a small integer"))?;
                pairs.push((VarId(Vertex::parse_var(name)?), e));
            }
            out.push((Monomial::from_pairs(pairs), parse_rational(c)?));
        }
        Ok(LaurentPoly::from_terms(out))
    }
}

fn single(p: &LaurentPoly) -> Option<(&Monomial, &Rational)> {
    if p.terms.len() == 1 {
        p.terms.iter().next()
    } else {
        None
    }
}

fn add_into(terms: &mut BTreeMap<Monomial, Rational>, m: &Monomial, c: &Rational) {
    match terms.get_mut(m) {
        Some(slot) => {
            *slot += c;
            if slot.is_zero() {
                terms.remove(m);
            }
        }
        None => {
            if !c.is_zero() {
                terms.insert(m.clone(), c.clone());
            }
        }
    }
}

/// `x^e`, or `None` when `x = 0` and `e < 0`.
pub fn rational_pow(x: &Rational, e: i32) -> Option<Rational> {
    if e < 0 && x.is_zero() {
        return None;
    }
    let base = if e < 0 { x.recip() } else { x.clone() };
    Some(num_traits::pow(base, e.unsigned_abs() as usize))
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (n, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            match (n, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if m.is_one() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{a}*{m}")?;
            }
        }
        Ok(())
    }
}

impl std::ops::Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, o: &LaurentPoly) -> LaurentPoly {
        LaurentPoly::add(self, o)
    }
}

impl std::ops::Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, o: &LaurentPoly) -> LaurentPoly {
        LaurentPoly::sub(self, o)
    }
}

impl std::ops::Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, o: &LaurentPoly) -> LaurentPoly {
        LaurentPoly::mul(self, o)
    }
}

impl std::ops::Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly::neg(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(n: i64) -> LaurentPoly {
        LaurentPoly::var(Vertex::new(n, -n, 0))
    }

    #[test]
    fn basic_ring_identities() {
        assert!((&x(0) + &x(0).neg()).is_zero());
        assert_eq!(&LaurentPoly::int(1) + &LaurentPoly::int(2), LaurentPoly::int(3));
        let inv = LaurentPoly::term(Monomial::var(VarId(Vertex::new(0, 0, 0)), -1), rational(1));
        assert!((&x(0) * &inv).is_one());
        let a = &x(0) + &LaurentPoly::one();
        let b = &x(0) - &LaurentPoly::one();
        assert_eq!(&a * &b, &x(0).pow(2) - &LaurentPoly::one());
    }

    #[test]
    fn exact_division() {
        let num = &x(0).pow(2) - &LaurentPoly::one();
        let den = &x(0) - &LaurentPoly::one();
        assert_eq!(num.div_exact(&den).unwrap(), &x(0) + &LaurentPoly::one());
        let bad = &x(0) + &LaurentPoly::one();
        assert_eq!(bad.div_exact(&den), Err(CubeError::NotDivisible));
        assert_eq!(bad.div_exact(&LaurentPoly::zero()), Err(CubeError::DivisionByZero));
    }

    #[test]
    fn division_by_laurent_divisor() {
        // (x/y + 1) * (y^-2 + x) divided back
        let y = x(1);
        let yi = LaurentPoly::term(Monomial::var(VarId(Vertex::new(1, -1, 0)), -1), rational(1));
        let p = &(&x(0) * &yi) + &LaurentPoly::one();
        let q = &(&yi * &yi) + &x(0);
        let prod = &p * &q;
        assert_eq!(prod.div_exact(&q).unwrap(), p);
        assert_eq!(prod.div_exact(&p).unwrap(), q);
        let _ = y;
    }

    #[test]
    fn degree_spread_examples() {
        assert_eq!(LaurentPoly::int(5).degree_spread().unwrap(), 0);
        let m = Monomial::from_pairs([
            (VarId(Vertex::new(0, 1, -1)), 1),
            (VarId(Vertex::new(0, -1, 1)), 1),
            (VarId(Vertex::new(0, 0, 0)), -1),
        ]);
        assert_eq!(LaurentPoly::term(m, rational(1)).degree_spread().unwrap(), 3);
        assert_eq!(LaurentPoly::zero().degree_spread(), Err(CubeError::ZeroPolynomial));
    }

    #[test]
    fn substitution_errors() {
        let inv = LaurentPoly::term(Monomial::var(VarId(Vertex::new(0, 0, 0)), -1), rational(1));
        let mut a = HashMap::new();
        assert!(matches!(inv.substitute(&a), Err(CubeError::MissingAssignment(_))));
        a.insert(VarId(Vertex::new(0, 0, 0)), rational(0));
        assert!(matches!(inv.substitute(&a), Err(CubeError::ZeroSubstitution(_))));
        a.insert(VarId(Vertex::new(0, 0, 0)), ratio(2, 3));
        assert_eq!(inv.substitute(&a).unwrap(), ratio(3, 2));
    }

    #[test]
    fn rationals_parse_exactly() {
        assert_eq!(parse_rational("3").unwrap(), rational(3));
        assert_eq!(parse_rational("-6/4").unwrap(), ratio(-3, 2));
        assert!(parse_rational("1.5").is_err());
        assert!(parse_rational("1/0").is_err());
    }

    #[test]
    fn json_round_trip() {
        let p = &(&x(0).pow(2) * &LaurentPoly::constant(ratio(-3, 7))) + &x(2);
        let j = p.to_json();
        assert_eq!(LaurentPoly::from_json(&j).unwrap(), p);
        let s = serde_json::to_string(&j).unwrap();
        assert!(s.contains("\"coeff\":\"-3/7\""));
    }

    #[test]
    fn monomial_order_is_graded() {
        let a = Monomial::var(VarId(Vertex::new(0, 0, 0)), 2);
        let b = Monomial::var(VarId(Vertex::new(1, -1, 0)), 1);
        assert!(a > b);
        assert!(b > Monomial::one());
        assert!(Monomial::one() > b.inv());
    }
}
