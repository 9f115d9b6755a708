//! Characteristic polynomials with Laurent coefficients: `Q(t)` from grove
//! coefficients, `Q_N(t)` from cycle families, and `Q^⟨r⟩(t)` via exterior
//! powers of the companion matrix.

use std::collections::HashMap;

use serde_json::{json, Value};

use super::{build_strip_network, cycle_sums};
use crate::error::{CubeError, Result};
use crate::groves::coefficients_j;
use crate::laurent::{rational, LaurentPoly, Rational, VarId};

/// A polynomial in `t`; `coeffs[k]` multiplies `t^k`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CharPoly {
    pub coeffs: Vec<LaurentPoly>,
}

impl CharPoly {
    pub fn new(mut coeffs: Vec<LaurentPoly>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(LaurentPoly::is_zero) {
            coeffs.pop();
        }
        CharPoly { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(LaurentPoly::is_one)
    }

    pub fn to_json(&self) -> Value {
        json!({ "coeffs": self.coeffs.iter().map(LaurentPoly::to_json).collect::<Vec<_>>() })
    }

    pub fn from_json(v: &Value) -> Result<CharPoly> {
        let arr = v
            .get("coeffs")
            .and_then(Value::as_array)
            .ok_or_else(|| CubeError::Parse("CharPoly JSON: missing coeffs".into()))?;
        Ok(CharPoly::new(arr.iter().map(LaurentPoly::from_json).collect::<Result<_>>()?))
    }

    pub fn specialize(&self, assign: &HashMap<VarId, Rational>) -> Result<CharPoly> {
        Ok(CharPoly::new(
            self.coeffs.iter().map(|c| c.specialize(assign)).collect::<Result<_>>()?,
        ))
    }

    /// The reciprocal polynomial `t^d P(1/t)`.
    pub fn reversed(&self) -> CharPoly {
        CharPoly::new(self.coeffs.iter().rev().cloned().collect())
    }

    /// Scales by `-1` if the leading coefficient is `-1`.
    pub fn normalize_sign(&self) -> CharPoly {
        match self.coeffs.last() {
            Some(c) if c.neg().is_one() => CharPoly::new(self.coeffs.iter().map(LaurentPoly::neg).collect()),
            _ => self.clone(),
        }
    }

    /// Evaluates `Σ c_k y_{l+k}` for `l = 0, 1, …` while the window allows.
    pub fn residuals(&self, seq: &[LaurentPoly]) -> Vec<LaurentPoly> {
        let d = self.degree();
        if seq.len() <= d {
            return Vec::new();
        }
        (0..seq.len() - d)
            .map(|l| {
                self.coeffs
                    .iter()
                    .enumerate()
                    .fold(LaurentPoly::zero(), |acc, (k, c)| acc.add(&c.mul(&seq[l + k])))
            })
            .collect()
    }

    /// Coefficients as rationals, when all are constant.
    pub fn constants(&self) -> Option<Vec<Rational>> {
        self.coeffs.iter().map(LaurentPoly::constant_value).collect()
    }
}

fn sign(k: usize) -> Rational {
    if k.is_multiple_of(2) {
        rational(1)
    } else {
        rational(-1)
    }
}

/// `Q(t) = J_m t^m - J_{m-1} t^{m-1} + ⋯ + (-1)^m J_0`.
pub fn q_from_j(j: &[LaurentPoly]) -> CharPoly {
    let m = j.len() - 1;
    CharPoly::new(j.iter().enumerate().map(|(s, js)| js.scale(&sign(m - s))).collect())
}

/// `Q_N(t) = Σ_{r=0}^{d} (-t)^{d-r} Σ_{C ∈ 𝒞^r} wt(C)`, with `sums[r]` the
/// inner sums and `d = sums.len() - 1`.
pub fn q_from_cycle_sums(sums: &[LaurentPoly]) -> CharPoly {
    let d = sums.len() - 1;
    let mut coeffs = vec![LaurentPoly::zero(); d + 1];
    for (r, c) in sums.iter().enumerate() {
        coeffs[d - r] = c.scale(&sign(d - r));
    }
    CharPoly::new(coeffs)
}

/// `Q(t)` for the cylinder, from groves, cross-checked against cycle sums.
pub fn char_poly_q(n: i64, m: i64) -> Result<CharPoly> {
    Ok(q_from_j(&checked_j(n, m)?))
}

/// The characteristic polynomial of the shifted cylinder sequences: the
/// cycle polynomial `Q_N(t)` made monic. It is the reciprocal of `Q(t)` up
/// to sign and coincides with it exactly when `J_s = J_{m-s}` for all `s`.
pub fn recurrence_poly(n: i64, m: i64) -> Result<CharPoly> {
    Ok(q_from_cycle_sums(&checked_j(n, m)?).normalize_sign())
}

/// `J_0, …, J_m` from groves, checked against the cycle sums of `N_{n,m}`.
pub fn checked_j(n: i64, m: i64) -> Result<Vec<LaurentPoly>> {
    let j = coefficients_j(n, m)?;
    let net = build_strip_network(n, m)?;
    let sums = cycle_sums(&net);
    if sums.len() != j.len() {
        return Err(CubeError::OracleMismatch(format!(
            "largest cycle family has {} cycles, expected {m}",
            sums.len().saturating_sub(1)
        )));
    }
    for (r, (a, b)) in j.iter().zip(&sums).enumerate() {
        if a != b {
            return Err(CubeError::OracleMismatch(format!(
                "J_{r} from groves is {a} but the {r}-cycle sum is {b}"
            )));
        }
    }
    Ok(j)
}

type Matrix = Vec<Vec<LaurentPoly>>;

fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    let mut out = vec![vec![LaurentPoly::zero(); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                if !b[k][j].is_zero() {
                    out[i][j] = out[i][j].add(&a[i][k].mul(&b[k][j]));
                }
            }
        }
    }
    out
}

fn det(m: &Matrix) -> LaurentPoly {
    match m.len() {
        0 => LaurentPoly::one(),
        1 => m[0][0].clone(),
        n => {
            let mut total = LaurentPoly::zero();
            for c in 0..n {
                if m[0][c].is_zero() {
                    continue;
                }
                let minor: Matrix = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|(k, _)| *k != c)
                            .map(|(_, x)| x.clone())
                            .collect()
                    })
                    .collect();
                let term = m[0][c].mul(&det(&minor)).scale(&sign(c));
                total = total.add(&term);
            }
            total
        }
    }
}

fn subsets(m: usize, r: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, m: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for k in start..m {
            cur.push(k);
            go(k + 1, m, r, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, m, r, &mut Vec::new(), &mut out);
    out
}

/// Characteristic polynomial by Faddeev–LeVerrier; only integer divisions.
pub fn char_poly_of(a: &Matrix) -> CharPoly {
    let n = a.len();
    let mut c = vec![LaurentPoly::zero(); n + 1];
    c[n] = LaurentPoly::one();
    let mut mk: Matrix = vec![vec![LaurentPoly::zero(); n]; n];
    for k in 1..=n {
        let mut next = mat_mul(a, &mk);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] = row[i].add(&c[n - k + 1]);
        }
        mk = next;
        let am = mat_mul(a, &mk);
        let tr = (0..n).fold(LaurentPoly::zero(), |s, i| s.add(&am[i][i]));
        c[n - k] = tr.scale(&Rational::new((-1).into(), (k as i64).into()));
    }
    CharPoly::new(c)
}

/// `Q^⟨r⟩(t) = Π (t - γ_{i_1}⋯γ_{i_r})` over `r`-subsets of the roots of `Q`,
/// as the characteristic polynomial of `Λ^r` of the companion matrix.
pub fn char_poly_plethysm(q: &CharPoly, r: usize) -> Result<CharPoly> {
    if !q.is_monic() {
        return Err(CubeError::NotMonic);
    }
    let m = q.degree();
    if r == 0 || r > m {
        return Err(CubeError::InvalidRegion(format!("need 1 <= r <= {m}, got {r}")));
    }
    let mut comp: Matrix = vec![vec![LaurentPoly::zero(); m]; m];
    for i in 1..m {
        comp[i][i - 1] = LaurentPoly::one();
    }
    for (row, c) in comp.iter_mut().zip(&q.coeffs) {
        row[m - 1] = c.neg();
    }
    let idx = subsets(m, r);
    let ext: Matrix = idx
        .iter()
        .map(|rows| {
            idx.iter()
                .map(|cols| {
                    let sub: Matrix = rows
                        .iter()
                        .map(|&i| cols.iter().map(|&j| comp[i][j].clone()).collect())
                        .collect();
                    det(&sub)
                })
                .collect()
        })
        .collect();
    Ok(char_poly_of(&ext))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn constant_poly(c: &[i64]) -> CharPoly {
        CharPoly::new(c.iter().map(|&x| LaurentPoly::int(x)).collect())
    }

    #[test]
    fn companion_round_trip() {
        let q = constant_poly(&[1, -6, 1]);
        assert_eq!(char_poly_plethysm(&q, 1).unwrap(), q);
        assert_eq!(char_poly_plethysm(&q, 2).unwrap(), constant_poly(&[-1, 1]));
    }

    #[test]
    fn pairwise_products_of_known_roots() {
        // roots 1, 2, 3: pairwise products 2, 3, 6
        let q = constant_poly(&[-6, 11, -6, 1]);
        let p = char_poly_plethysm(&q, 2).unwrap();
        // (t-2)(t-3)(t-6) = t^3 - 11 t^2 + 36 t - 36
        assert_eq!(p, constant_poly(&[-36, 36, -11, 1]));
        assert_eq!(char_poly_plethysm(&q, 3).unwrap(), constant_poly(&[-6, 1]));
    }

    #[test]
    fn rejects_non_monic() {
        let q = constant_poly(&[2, 1]);
        assert_eq!(char_poly_plethysm(&q, 1).unwrap(), q);
        assert_eq!(char_poly_plethysm(&constant_poly(&[1, 2, 3]), 1), Err(CubeError::NotMonic));
    }

    #[test]
    fn reciprocal_and_sign() {
        let q = constant_poly(&[-1, 2, -3, 1]);
        assert_eq!(q.reversed(), constant_poly(&[1, -3, 2, -1]));
        assert_eq!(q.reversed().normalize_sign(), constant_poly(&[-1, 3, -2, 1]));
        let r = constant_poly(&[-1, 1]).residuals(&[1, 1, 1].map(LaurentPoly::int));
        assert!(r.iter().all(LaurentPoly::is_zero));
    }

    #[test]
    fn cycle_form_is_reciprocal() {
        let sums = vec![LaurentPoly::int(1), LaurentPoly::int(7), LaurentPoly::int(1)];
        assert_eq!(q_from_cycle_sums(&sums), constant_poly(&[1, -7, 1]));
        assert_eq!(q_from_j(&sums), constant_poly(&[1, -7, 1]));
    }
}
