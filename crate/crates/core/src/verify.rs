//! Certification drivers: periodicity in the triangle, linear recurrences in
//! the cylinder, grove oracles, and degree growth in the torus.
//!
//! Every pass is exact. A failure is reported as data with a witness; only
//! malformed input produces an error.

use std::collections::HashMap;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{CubeError, Result};
use crate::groves::{strip::strip_grove_sum, LozengeRegion};
use crate::lattice::{rotate, Region, Vertex};
use crate::laurent::{rational, LaurentPoly, Rational, VarId};
use crate::networks::{char_poly_plethysm, q_from_j, recurrence_poly, checked_j, CharPoly};
use crate::recurrence::{RecurrenceState, SequenceMode};

/// Default length of the certified window for cylinder recurrences.
pub const DEFAULT_LMAX: usize = 8;

/// Zero residuals required after the onset for a certificate to count.
pub const MIN_TAIL: usize = 3;

/// A rational in `p/q` with `p, q` uniform in `[1, 20]`.
pub fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    let p: i64 = rng.gen_range(1..=20);
    let q: i64 = rng.gen_range(1..=20);
    Rational::new(p.into(), q.into())
}

/// Random values for the non-boundary vertices of a finite region, in the
/// sorted order of its fundamental domain so that a seed fixes the result.
pub fn random_assignment(region: &Region, rng: &mut ChaCha8Rng) -> Result<HashMap<VarId, Rational>> {
    let dom = region
        .fundamental_domain()
        .ok_or_else(|| CubeError::InvalidRegion("random assignment needs a finite region".into()))?;
    Ok(dom
        .into_iter()
        .filter(|v| !region.is_boundary(*v))
        .map(|v| (VarId(v), random_rational(rng)))
        .collect())
}

/// `n` reproducible assignments derived from one seed.
pub fn seeded_assignments(region: &Region, seed: u64, n: usize) -> Result<Vec<HashMap<VarId, Rational>>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| random_assignment(region, &mut rng)).collect()
}

// ---------------------------------------------------------------------------
// periodicity

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PeriodicityMode {
    Symbolic,
    Numeric { seed: u64, trials: usize },
}

/// Which of the two identities failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PeriodIdentity {
    /// `f_{σv}(t + 2m) = f_v(t)`.
    Rotation,
    /// `f_v(t + 6m) = f_v(t)`.
    FullPeriod,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodicityReport {
    pub m: i64,
    pub mode: PeriodicityMode,
    /// Number of `(v, t, identity)` comparisons made.
    pub checked: usize,
    /// The first violation, with the trial index.
    pub witness: Option<(usize, Vertex, i64, PeriodIdentity)>,
}

impl PeriodicityReport {
    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }

    pub fn to_json(&self) -> Value {
        let mode = match &self.mode {
            PeriodicityMode::Symbolic => json!("symbolic"),
            PeriodicityMode::Numeric { seed, trials } => json!({ "seed": seed, "trials": trials }),
        };
        let witness = self.witness.map(|(trial, v, t, id)| {
            json!({ "trial": trial, "vertex": v.var_name(), "t": t, "identity": format!("{id:?}") })
        });
        json!({
            "check": "periodicity",
            "m": self.m,
            "mode": mode,
            "checked": self.checked,
            "passed": self.passed(),
            "witness": witness,
        })
    }
}

type Witness = (Vertex, i64, PeriodIdentity);

fn periodicity_one(m: i64, state: &mut RecurrenceState) -> Result<(usize, Option<Witness>)> {
    let verts = state.region().fundamental_domain().expect("finite");
    let mut checked = 0;
    for v in verts {
        let e = v.color() as i64;
        let sv = rotate(m, v)?;
        let mut t = e;
        while t <= e + 6 * m {
            let base = state.value(v, t)?;
            checked += 1;
            match state.value(sv, t + 2 * m) {
                Ok(x) if x == base => {}
                _ => return Ok((checked, Some((v, t, PeriodIdentity::Rotation)))),
            }
            checked += 1;
            if state.value(v, t + 6 * m)? != base {
                return Ok((checked, Some((v, t, PeriodIdentity::FullPeriod))));
            }
            t += 3;
        }
    }
    Ok((checked, None))
}

/// Checks `f_{σv}(t+2m) = f_v(t)` and `f_v(t+6m) = f_v(t)` for every
/// `v ∈ Δ_m` and every defined `t` in `[ε_v, ε_v + 6m]`.
pub fn check_periodicity(m: i64, mode: PeriodicityMode) -> Result<PeriodicityReport> {
    let region = Region::triangle(m)?;
    let states: Vec<RecurrenceState> = match &mode {
        PeriodicityMode::Symbolic => vec![RecurrenceState::new(region)],
        PeriodicityMode::Numeric { seed, trials } => seeded_assignments(&region, *seed, *trials)?
            .iter()
            .map(|a| RecurrenceState::with_assignment(region, a))
            .collect::<Result<_>>()?,
    };
    let results: Vec<_> = states
        .into_par_iter()
        .map(|mut s| periodicity_one(m, &mut s))
        .collect::<Result<_>>()?;
    let mut checked = 0;
    let mut witness = None;
    for (trial, (c, w)) in results.into_iter().enumerate() {
        checked += c;
        if witness.is_none() {
            witness = w.map(|(v, t, id)| (trial, v, t, id));
        }
    }
    Ok(PeriodicityReport { m, mode, checked, witness })
}

// ---------------------------------------------------------------------------
// linear recurrences

/// The outcome of testing a characteristic polynomial on a finite window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecurrenceCertificate {
    pub char_poly: CharPoly,
    /// The sequence runs over `ℓ ∈ [l_min, l_max]`; residual `ℓ` needs terms
    /// up to `ℓ + degree`, so residuals cover `[l_min, l_max - degree]`.
    pub l_min: usize,
    pub l_max: usize,
    /// First `ℓ` from which every residual through `l_max` vanishes.
    pub onset: Option<usize>,
    pub residuals: Vec<LaurentPoly>,
}

impl RecurrenceCertificate {
    /// Builds the certificate of `poly` on `seq`.
    pub fn from_sequence(poly: CharPoly, seq: &[LaurentPoly]) -> Self {
        let residuals = poly.residuals(seq);
        let tail = residuals.iter().rev().take_while(|r| r.is_zero()).count();
        let onset = (tail > 0).then(|| residuals.len() - tail);
        RecurrenceCertificate {
            char_poly: poly,
            l_min: 0,
            l_max: seq.len().saturating_sub(1),
            onset,
            residuals,
        }
    }

    /// Number of vanishing residuals from the onset on.
    pub fn zero_tail(&self) -> usize {
        self.onset.map_or(0, |o| self.residuals.len() - o)
    }

    /// Valid when the window shows at least [`MIN_TAIL`] zero residuals.
    pub fn is_valid(&self) -> bool {
        self.zero_tail() >= MIN_TAIL
    }

    /// `Ok(self)` if valid, `WindowTooSmall` otherwise.
    pub fn require(self) -> Result<Self> {
        if self.is_valid() {
            Ok(self)
        } else {
            Err(CubeError::WindowTooSmall(format!(
                "{} zero residuals after onset {:?} in a window of {}",
                self.zero_tail(),
                self.onset,
                self.residuals.len()
            )))
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "char_poly": self.char_poly.to_json(),
            "window": [self.l_min, self.l_max],
            "onset": self.onset,
            "valid": self.is_valid(),
            "residuals": self.residuals.iter().map(LaurentPoly::to_json).collect::<Vec<_>>(),
        })
    }
}

fn cylinder_state(n: i64, m: i64, assign: Option<&HashMap<VarId, Rational>>) -> Result<RecurrenceState> {
    let region = Region::cylinder(n, m)?;
    match assign {
        Some(a) => RecurrenceState::with_assignment(region, a),
        None => Ok(RecurrenceState::new(region)),
    }
}

fn specialize_poly(p: CharPoly, assign: Option<&HashMap<VarId, Rational>>) -> Result<CharPoly> {
    match assign {
        Some(a) => p.specialize(a),
        None => Ok(p),
    }
}

/// The boundary-adjacent recurrence for `v = (m-1, j, k)`: the shifted
/// sequence `f_{v+ℓg}(ε_v + 2ℓn)` for `ℓ = 0..=l_max` against the
/// characteristic polynomial built from `J_0, …, J_m`.
///
/// Symbolic when `assign` is `None`. The certificate is returned whether or
/// not it is valid; callers decide with [`RecurrenceCertificate::require`].
pub fn check_cylinder_recurrence(
    n: i64,
    m: i64,
    v: Vertex,
    l_max: usize,
    assign: Option<&HashMap<VarId, Rational>>,
) -> Result<RecurrenceCertificate> {
    let region = Region::cylinder(n, m)?;
    if !region.contains(v) || v.i != m - 1 {
        return Err(CubeError::OutOfRegion(format!("{v} is not adjacent to the top boundary")));
    }
    let poly = specialize_poly(recurrence_poly(n, m)?, assign)?;
    let mut state = cylinder_state(n, m, assign)?;
    let seq = state.flatten_cylinder_sequence(v, SequenceMode::Shifted, l_max + 1)?;
    Ok(RecurrenceCertificate::from_sequence(poly, &seq))
}

/// The sum `Σ_s (-1)^s J_s y_{ℓ+s}` with coefficients taken in the order of
/// the grove statistic `h`, i.e. `Q(t)` read lowest power first. It agrees
/// with [`check_cylinder_recurrence`] exactly when `J` is palindromic.
pub fn check_cylinder_recurrence_q(
    n: i64,
    m: i64,
    v: Vertex,
    l_max: usize,
    assign: Option<&HashMap<VarId, Rational>>,
) -> Result<RecurrenceCertificate> {
    let poly = specialize_poly(q_from_j(&checked_j(n, m)?), assign)?;
    let mut state = cylinder_state(n, m, assign)?;
    let seq = state.flatten_cylinder_sequence(v, SequenceMode::Shifted, l_max + 1)?;
    Ok(RecurrenceCertificate::from_sequence(poly, &seq))
}

/// The depth-`r` recurrence, `r = m - i`, with characteristic polynomial
/// `Q^⟨r⟩`.
pub fn check_plethysm_recurrence(
    n: i64,
    m: i64,
    v: Vertex,
    l_max: usize,
    assign: Option<&HashMap<VarId, Rational>>,
) -> Result<RecurrenceCertificate> {
    let region = Region::cylinder(n, m)?;
    if !region.contains(v) {
        return Err(CubeError::OutOfRegion(v.to_string()));
    }
    let r = (m - v.i) as usize;
    let poly = if r == 0 {
        // the bottom boundary is constant
        CharPoly::new(vec![LaurentPoly::int(-1), LaurentPoly::one()])
    } else {
        char_poly_plethysm(&recurrence_poly(n, m)?, r)?
    };
    let poly = specialize_poly(poly, assign)?;
    let mut state = cylinder_state(n, m, assign)?;
    let seq = state.flatten_cylinder_sequence(v, SequenceMode::Shifted, l_max + 1)?;
    Ok(RecurrenceCertificate::from_sequence(poly, &seq))
}

/// The smallest window that leaves [`MIN_TAIL`] residuals for `poly`.
pub fn default_lmax(degree: usize) -> usize {
    DEFAULT_LMAX.max(degree + MIN_TAIL + 2)
}

// ---------------------------------------------------------------------------
// grove oracles

/// One comparison of a grove sum with a recurrence value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleCase {
    /// Groves of `G(v,t)` against the unbounded `f_v(t+1)`.
    Plane { v: Vertex, t: i64 },
    /// Strip groves of `G_m(v,t)` against the cylinder `f_v(t+1)`.
    Cylinder { n: i64, m: i64, v: Vertex, t: i64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleOutcome {
    pub case: OracleCase,
    pub groves: usize,
    pub matched: bool,
}

impl OracleOutcome {
    pub fn to_json(&self) -> Value {
        let case = match &self.case {
            OracleCase::Plane { v, t } => json!({ "region": "plane", "v": v.var_name(), "t": t }),
            OracleCase::Cylinder { n, m, v, t } => {
                json!({ "region": "cylinder", "n": n, "m": m, "v": v.var_name(), "t": t })
            }
        };
        json!({ "case": case, "groves": self.groves, "matched": self.matched })
    }
}

/// Compares grove sums with recurrence values, exactly. With `assign`, both
/// sides are specialized before comparison.
pub fn cross_check_grove_oracle(
    scope: &[OracleCase],
    assign: Option<&HashMap<VarId, Rational>>,
) -> Result<Vec<OracleOutcome>> {
    scope
        .par_iter()
        .map(|case| {
            let (groves, sum, value) = match case {
                OracleCase::Plane { v, t } => {
                    let region = LozengeRegion::new(*v, *t)?;
                    let gs = region.enumerate_groves();
                    let sum = gs.iter().fold(LaurentPoly::zero(), |a, f| a.add(&region.weight(f)));
                    let value = RecurrenceState::new(Region::Plane).value(*v, t + 1)?;
                    (gs.len(), sum, value)
                }
                OracleCase::Cylinder { n, m, v, t } => {
                    let groves = crate::groves::enumerate_strip_groves(*n, *m, *v, *t)?;
                    let sum = strip_grove_sum(*n, *m, *v, *t)?;
                    let value = RecurrenceState::new(Region::cylinder(*n, *m)?).value(*v, t + 1)?;
                    (groves.len(), sum, value)
                }
            };
            let matched = match assign {
                None => sum == value,
                Some(a) => sum.specialize(a)? == value.specialize(a)?,
            };
            Ok(OracleOutcome { case: case.clone(), groves, matched })
        })
        .collect()
}

// ---------------------------------------------------------------------------
// degree growth

/// Support values `h(w) = max_{monomial} ⟨w, exponent⟩` for every sign
/// vector `w ∈ {±1}^N`, indexed by the bit pattern of `w`.
type Support = Vec<i64>;

/// `degree_spread(f_v(t))` on a torus for all `t ≤ t_max`, computed in the
/// max-plus semiring.
///
/// Values of the recurrence have positive coefficients, so the Newton
/// polytope of a sum is the hull of the union and that of a product is the
/// Minkowski sum; exact division subtracts support functions. The ℓ¹ size
/// of the widest monomial is the largest support value over sign vectors.
pub fn tropical_degrees(region: &Region, t_max: i64) -> Result<HashMap<(Vertex, i64), i64>> {
    let Region::Torus(_) = region else {
        return Err(CubeError::InvalidRegion("tropical degrees need a torus".into()));
    };
    let reps = region.fundamental_domain().expect("finite");
    let nvar = reps.len();
    if nvar > 16 {
        return Err(CubeError::InvalidRegion(format!("{nvar} variables is too many sign vectors")));
    }
    let index: HashMap<Vertex, usize> = reps.iter().enumerate().map(|(k, v)| (*v, k)).collect();
    let width = 1usize << nvar;
    let mut h: HashMap<(Vertex, i64), Support> = HashMap::new();
    for t in 0..=t_max {
        let slice: Vec<(Vertex, Support)> = reps
            .par_iter()
            .filter(|c| (t - c.color() as i64) >= 0 && (t - c.color() as i64) % 3 == 0)
            .map(|c| {
                if t == c.color() as i64 {
                    let k = index[c];
                    let s = (0..width).map(|w| if w >> k & 1 == 1 { 1 } else { -1 }).collect();
                    return Ok((*c, s));
                }
                let get = |u: Vertex, s: i64| -> Result<&Support> {
                    let u = region.canonicalize(u)?;
                    h.get(&(u, s)).ok_or_else(|| CubeError::BadParity { vertex: u.to_string(), t: s })
                };
                let prev = get(*c, t - 3)?;
                let mut terms = Vec::with_capacity(3);
                for e in crate::lattice::AXES {
                    terms.push((get(*c + e, t - 1)?, get(*c - e, t - 2)?));
                }
                let s = (0..width)
                    .map(|w| terms.iter().map(|(a, b)| a[w] + b[w]).max().expect("three axes") - prev[w])
                    .collect();
                Ok((*c, s))
            })
            .collect::<Result<_>>()?;
        h.extend(slice.into_iter().map(|(c, s)| ((c, t), s)));
    }
    Ok(h.into_iter().map(|(k, s)| (k, s.into_iter().max().expect("nonempty"))).collect())
}

/// Least-squares residual and coefficients of a polynomial fit of `degree`
/// to the points `(x, y)`, in exact rationals.
#[allow(clippy::needless_range_loop)]
pub fn least_squares(points: &[(i64, i64)], degree: usize) -> Option<(Vec<Rational>, Rational)> {
    let k = degree + 1;
    if points.len() < k {
        return None;
    }
    let pw = |x: i64, e: usize| Rational::from_integer(x.into()).pow(e as i32);
    let mut a = vec![vec![rational(0); k + 1]; k];
    for &(x, y) in points {
        for r in 0..k {
            for c in 0..k {
                a[r][c] += pw(x, r + c);
            }
            a[r][k] += pw(x, r) * rational(y);
        }
    }
    // Gauss–Jordan on the normal equations
    for col in 0..k {
        let piv = (col..k).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        let p = a[col][col].clone();
        for c in col..=k {
            a[col][c] = &a[col][c] / &p;
        }
        for r in 0..k {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in col..=k {
                    let d = &f * &a[col][c];
                    a[r][c] -= d;
                }
            }
        }
    }
    let coef: Vec<Rational> = a.iter().map(|row| row[k].clone()).collect();
    let rss = points.iter().fold(rational(0), |acc, &(x, y)| {
        let fit = coef.iter().enumerate().fold(rational(0), |s, (e, c)| s + c * pw(x, e));
        let d = rational(y) - fit;
        acc + &d * &d
    });
    Some((coef, rss))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrowthReport {
    pub v: Vertex,
    /// `d(T) = degree_spread(f_v(ε_v + 3T))` for `T = 0..=T_max`.
    pub degrees: Vec<i64>,
    pub second_differences: Vec<i64>,
    pub linear_rss: Rational,
    pub quadratic_rss: Rational,
    /// Leading coefficient of the quadratic fit on the full window and on
    /// its second half.
    pub quadratic_coeff: (Rational, Rational),
    /// `[c, 3c]` for the leading coefficient `c` of the full quadratic fit:
    /// a curvature `2c` allowed to drift by `c` either way.
    pub band: (Rational, Rational),
    /// `T` up to which the degrees were recomputed symbolically and agreed.
    pub symbolic_agreement: Option<usize>,
}

impl GrowthReport {
    pub fn nondecreasing(&self) -> bool {
        self.degrees.windows(2).all(|w| w[0] <= w[1])
    }

    pub fn quadratic_beats_linear(&self) -> bool {
        self.quadratic_rss < self.linear_rss
    }

    /// Every second difference lies in the band.
    pub fn band_holds(&self) -> bool {
        self.band.0 > rational(0)
            && self
                .second_differences
                .iter()
                .all(|d| self.band.0 <= rational(*d) && rational(*d) <= self.band.1)
    }

    pub fn passed(&self) -> bool {
        self.nondecreasing() && self.quadratic_beats_linear() && self.band_holds()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "check": "entropy",
            "v": self.v.var_name(),
            "degrees": self.degrees,
            "second_differences": self.second_differences,
            "linear_rss": self.linear_rss.to_string(),
            "quadratic_rss": self.quadratic_rss.to_string(),
            "quadratic_coeff": [self.quadratic_coeff.0.to_string(), self.quadratic_coeff.1.to_string()],
            "band": [self.band.0.to_string(), self.band.1.to_string()],
            "symbolic_agreement": self.symbolic_agreement,
            "nondecreasing": self.nondecreasing(),
            "quadratic_beats_linear": self.quadratic_beats_linear(),
            "band_holds": self.band_holds(),
            "passed": self.passed(),
        })
    }
}

/// Degree growth of `f_v(ε_v + 3T)` on the torus with periods `a, b`.
///
/// The tropical degrees are recomputed from explicit Laurent polynomials for
/// `T ≤ symbolic_upto`, and any disagreement is an `OracleMismatch`.
#[allow(clippy::needless_range_loop)]
pub fn measure_degree_growth(a: Vertex, b: Vertex, v: Vertex, t_max: usize, symbolic_upto: usize) -> Result<GrowthReport> {
    if t_max < 6 {
        return Err(CubeError::InvalidRegion(format!("need T_max >= 6, got {t_max}")));
    }
    let region = Region::torus(a, b)?;
    let c = region.canonicalize(v)?;
    let e = c.color() as i64;
    let tropical = tropical_degrees(&region, e + 3 * t_max as i64)?;
    let degrees: Vec<i64> = (0..=t_max as i64).map(|t| tropical[&(c, e + 3 * t)]).collect();

    let mut symbolic_agreement = None;
    if symbolic_upto > 0 {
        let mut state = RecurrenceState::new(region);
        for t in 0..=symbolic_upto.min(t_max) {
            let d = state.value(c, e + 3 * t as i64)?.degree_spread()?;
            if d != degrees[t] {
                return Err(CubeError::OracleMismatch(format!(
                    "tropical degree {} but symbolic {d} at T={t}",
                    degrees[t]
                )));
            }
        }
        symbolic_agreement = Some(symbolic_upto.min(t_max));
    }

    let second_differences: Vec<i64> = degrees.windows(3).map(|w| w[2] - 2 * w[1] + w[0]).collect();
    let points: Vec<(i64, i64)> = degrees.iter().enumerate().map(|(t, d)| (t as i64, *d)).collect();
    let (_, linear_rss) = least_squares(&points, 1).expect("enough points");
    let (q_full, quadratic_rss) = least_squares(&points, 2).expect("enough points");
    let (q_half, _) = least_squares(&points[points.len() / 2..], 2).expect("enough points");
    let lead = q_full[2].clone();
    let band = (lead.clone(), lead * rational(3));
    Ok(GrowthReport {
        v: c,
        degrees,
        second_differences,
        linear_rss,
        quadratic_rss,
        quadratic_coeff: (q_full[2].clone(), q_half[2].clone()),
        band,
        symbolic_agreement,
    })
}
