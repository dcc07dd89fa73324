//! Integer bounds on the complexity `c` of a link-pair.
//!
//! Every strict inequality `c > x` is turned into the closed bound
//! `c >= floor(x) + 1` by comparing integer powers, never by evaluating a
//! floating logarithm. Each [`Bound`] carries a tag, the expression it was
//! computed from, and a status; only certified bounds enter the interval
//! unless the caller admits the others explicitly.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use num_integer::Integer;

use crate::diagram::{braid_closure, BraidWord, LinkDiagram};
use crate::invariants::{
    continued_fraction, goeritz_matrix, torsion_order, torus_crossing_number, torus_det_minus_one, InvariantError,
    Shade,
};

/// Volume of the regular ideal tetrahedron.
pub const V3: f64 = 1.014_941_606_409_653_6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BoundError {
    #[error("certified lower bound {lower} exceeds certified upper bound {upper}")]
    Contradiction { lower: u64, upper: u64 },
    #[error("crossing number certificate is not exact")]
    NotExact,
    #[error("bound applies to knots only, got {0} components")]
    NotAKnot(usize),
    #[error("volume must be positive and finite, got {0}")]
    Volume(f64),
    #[error("tolerance must be positive and finite, got {0}")]
    Tolerance(f64),
    #[error("Turk's head parameter must be at least 2, got {0}")]
    TurksHead(u64),
    #[error(transparent)]
    Invariant(#[from] InvariantError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundKind {
    Lower,
    Upper,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundStatus {
    Certified,
    /// Holds only for sufficiently large members of a family.
    Asymptotic,
    /// Holds if the caller's primality / non-splitness assertion is true.
    Conditional,
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundKind::Lower => "lower",
            BoundKind::Upper => "upper",
        })
    }
}

impl fmt::Display for BoundStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundStatus::Certified => "certified",
            BoundStatus::Asymptotic => "asymptotic",
            BoundStatus::Conditional => "conditional",
        })
    }
}

/// One bound on `c` with its provenance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bound {
    pub tag: String,
    pub value: u64,
    pub kind: BoundKind,
    pub status: BoundStatus,
    pub expression: String,
}

impl Bound {
    pub fn lower(tag: &str, value: u64, status: BoundStatus, expression: impl Into<String>) -> Self {
        Bound { tag: tag.into(), value, kind: BoundKind::Lower, status, expression: expression.into() }
    }

    pub fn upper(tag: &str, value: u64, status: BoundStatus, expression: impl Into<String>) -> Self {
        Bound { tag: tag.into(), value, kind: BoundKind::Upper, status, expression: expression.into() }
    }
}

/// Which non-certified statuses may enter an interval.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Admit {
    pub conditional: bool,
    pub asymptotic: bool,
}

impl Admit {
    pub const CERTIFIED: Admit = Admit { conditional: false, asymptotic: false };

    pub fn admits(&self, status: BoundStatus) -> bool {
        match status {
            BoundStatus::Certified => true,
            BoundStatus::Conditional => self.conditional,
            BoundStatus::Asymptotic => self.asymptotic,
        }
    }
}

/// `lower <= c <= upper`, with `upper` unknown when no upper bound applies.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundInterval {
    pub lower: u64,
    pub upper: Option<u64>,
    #[serde(skip)]
    pub provenance: Vec<Bound>,
}

impl BoundInterval {
    pub fn exact(value: u64) -> Self {
        BoundInterval { lower: value, upper: Some(value), provenance: Vec::new() }
    }

    pub fn new(lower: u64, upper: Option<u64>) -> Result<Self, BoundError> {
        match upper {
            Some(u) if lower > u => Err(BoundError::Contradiction { lower, upper: u }),
            _ => Ok(BoundInterval { lower, upper, provenance: Vec::new() }),
        }
    }

    pub fn is_exact(&self) -> bool {
        self.upper == Some(self.lower)
    }

    pub fn contains(&self, c: u64) -> bool {
        self.lower <= c && self.upper.is_none_or(|u| c <= u)
    }
}

impl fmt::Display for BoundInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.upper {
            Some(u) if u == self.lower => write!(f, "{u}"),
            Some(u) => write!(f, "[{}, {u}]", self.lower),
            None => write!(f, "[{}, ?]", self.lower),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CrossingStatus {
    /// Number of crossings of a reduced alternating diagram.
    ExactReducedAlternating,
    /// Known closed form for the family.
    ExactClosedForm,
    /// Only the crossings of the given diagram.
    UpperOnly,
}

impl fmt::Display for CrossingStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CrossingStatus::ExactReducedAlternating => "exact_reduced_alternating",
            CrossingStatus::ExactClosedForm => "exact_closed_form",
            CrossingStatus::UpperOnly => "upper_only",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossingCertificate {
    pub value: u64,
    pub status: CrossingStatus,
}

impl CrossingCertificate {
    pub fn is_exact(&self) -> bool {
        self.status != CrossingStatus::UpperOnly
    }
}

pub fn crn_certificate(d: &LinkDiagram) -> CrossingCertificate {
    let status = if d.is_reduced() && d.is_alternating() {
        CrossingStatus::ExactReducedAlternating
    } else {
        CrossingStatus::UpperOnly
    };
    CrossingCertificate { value: d.crossing_count() as u64, status }
}

/// Certificate from `min{m(q-1), q(m-1)}` for torus knots and links.
pub fn torus_crn_certificate(m: u64, q: u64) -> Result<CrossingCertificate, BoundError> {
    let (value, _) = torus_crossing_number(m, q)?;
    Ok(CrossingCertificate { value, status: CrossingStatus::ExactClosedForm })
}

/// `4·crn + 2·#L - 1`. With a non-exact certificate this is still an upper
/// bound, since the diagram's crossings bound the crossing number above.
pub fn diagram_upper_bound(crn: CrossingCertificate, components: usize) -> u64 {
    4 * crn.value + 2 * components as u64 - 1
}

/// `2·(sum of partial quotients of m/q) - 3` for the torus knot `T(m,q)`.
/// The parameters may be given in either order.
pub fn torus_upper_bound(m: u64, q: u64) -> Result<u64, BoundError> {
    let (a, b) = (m.max(q), m.min(q));
    if b < 2 {
        return Err(InvariantError::TorusParameters(m, q).into());
    }
    let cf = continued_fraction(a, b).map_err(|_| InvariantError::TorusParameters(m, q))?;
    Ok(2 * cf.quotient_sum() - 3)
}

/// Result of turning `c > log5(x) - 1` into an integer bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Log5Bound {
    pub value: u64,
    /// `x = 0`: the inequality says nothing.
    pub vacuous: bool,
}

/// Least `k >= 0` with `5^(k+1) > x`.
pub fn strict_log5_lower(x: &BigUint) -> Log5Bound {
    if x.is_zero() {
        return Log5Bound { value: 0, vacuous: true };
    }
    let five = BigUint::from(5u8);
    let mut power = five.clone();
    let mut k = 0;
    while &power <= x {
        power *= &five;
        k += 1;
    }
    Log5Bound { value: k, vacuous: false }
}

/// Lower bound from the torsion of the first homology of the double branched
/// cover, presented by the Goeritz matrix. For a knot the torsion order is
/// the determinant. Conditional unless the caller asserts the link is prime
/// and non-split.
pub fn det_lower_bound(d: &LinkDiagram, prime_nonsplit: bool) -> Bound {
    let torsion = if d.crossing_count() == 0 || !d.is_connected() {
        crate::invariants::determinant(d)
    } else {
        let g = goeritz_matrix(d, Shade::White).expect("connected diagram with crossings");
        torsion_order(&g)
    };
    torsion_lower_bound(&torsion, prime_nonsplit)
}

pub(crate) fn torsion_lower_bound(torsion: &BigUint, prime_nonsplit: bool) -> Bound {
    let status = if prime_nonsplit { BoundStatus::Certified } else { BoundStatus::Conditional };
    let log = strict_log5_lower(torsion);
    let expression = if log.vacuous {
        "torsion 0: vacuous".to_string()
    } else {
        format!("least k with 5^(k+1) > |Tor H1| = {torsion}")
    };
    Bound::lower("det_lower", log.value, status, expression)
}

/// `c > log5(crn) - 1` for prime alternating knots.
pub fn alternating_crn_lower_bound(
    crn: CrossingCertificate,
    components: usize,
    prime: bool,
) -> Result<Bound, BoundError> {
    if crn.status != CrossingStatus::ExactReducedAlternating {
        return Err(BoundError::NotExact);
    }
    if components != 1 {
        return Err(BoundError::NotAKnot(components));
    }
    let status = if prime { BoundStatus::Certified } else { BoundStatus::Conditional };
    let value = strict_log5_lower(&BigUint::from(crn.value)).value;
    Ok(Bound::lower("alternating_crn_lower", value, status, format!("least k with 5^(k+1) > crn = {}", crn.value)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VolumeBound {
    pub value: u64,
    /// `vol / v3` was within tolerance of an integer and was snapped to it.
    pub boundary: bool,
}

/// Least integer strictly above `vol / v3`. A ratio within `tolerance` of an
/// integer `k` is read as exactly `k`, giving `k + 1`.
pub fn volume_lower_bound(vol: f64, tolerance: f64) -> Result<VolumeBound, BoundError> {
    if !(vol.is_finite() && vol > 0.0) {
        return Err(BoundError::Volume(vol));
    }
    if !(tolerance.is_finite() && tolerance > 0.0) {
        return Err(BoundError::Tolerance(tolerance));
    }
    let ratio = vol / V3;
    let nearest = ratio.round();
    if (ratio - nearest).abs() <= tolerance {
        return Ok(VolumeBound { value: nearest as u64 + 1, boundary: true });
    }
    Ok(VolumeBound { value: ratio.floor() as u64 + 1, boundary: false })
}

/// Half the crossing number of `Th_n`, valid only for large `n`.
pub fn turks_head_lower_bound(n: u64) -> Result<Bound, BoundError> {
    if n < 2 {
        return Err(BoundError::TurksHead(n));
    }
    Ok(Bound::lower("turks_head_lower", n, BoundStatus::Asymptotic, format!("crn/2 = {n} for large n")))
}

/// Largest torus closure whose determinant is computed from a diagram when
/// no closed form applies.
pub const TORUS_DIAGRAM_LIMIT: u64 = 120;

/// Certified bounds for the torus knot or link `T(m,q)` with `m, q >= 2`.
/// Torus links are prime and non-split, so no bound here is conditional.
pub fn torus_bounds(m: u64, q: u64) -> Result<Vec<Bound>, BoundError> {
    let crn = torus_crn_certificate(m, q)?;
    let (a, b) = (m.min(q), m.max(q));
    let components = a.gcd(&b) as usize;
    let mut out = vec![Bound::upper(
        "diagram_upper",
        diagram_upper_bound(crn, components),
        BoundStatus::Certified,
        format!("4*{} + 2*{} - 1", crn.value, components),
    )];
    if components == 1 {
        out.push(Bound::upper(
            "torus_cf_upper",
            torus_upper_bound(m, q)?,
            BoundStatus::Certified,
            format!("2*(sum of partial quotients of {b}/{a}) - 3"),
        ));
    }
    let small = (a - 1).checked_mul(b).is_some_and(|n| n <= TORUS_DIAGRAM_LIMIT);
    let closure = small.then(|| braid_closure(&torus_word(a, b)));
    match torus_det_minus_one(m, q) {
        Ok(det) => {
            let mut bound = torsion_lower_bound(&BigUint::from(det), true);
            bound.expression = format!("least k with 5^(k+1) > |Δ(-1)| = {det} (odd parameter)");
            out.push(bound);
        }
        Err(_) => {
            if let Some(d) = &closure {
                out.push(det_lower_bound(d, true));
            }
        }
    }
    if let (2, 1, Some(d)) = (a, components, &closure) {
        out.push(alternating_crn_lower_bound(crn_certificate(d), 1, true)?);
    }
    Ok(out)
}

/// `(σ1 σ2 … σ(m-1))^q` on `m` strands.
pub(crate) fn torus_word(m: u64, q: u64) -> BraidWord {
    let letters: Vec<i32> = (1..m as i32).collect();
    BraidWord::new(m as usize, letters).expect("m >= 2").pow(q as usize)
}

/// Max of admitted lowers (at least 0) and min of admitted uppers.
pub fn combine_with(bounds: &[Bound], admit: Admit) -> Result<BoundInterval, BoundError> {
    let used = bounds.iter().filter(|b| admit.admits(b.status));
    let lower = used.clone().filter(|b| b.kind == BoundKind::Lower).map(|b| b.value).max().unwrap_or(0);
    let upper = used.filter(|b| b.kind == BoundKind::Upper).map(|b| b.value).min();
    let mut interval = BoundInterval::new(lower, upper)?;
    interval.provenance = bounds.to_vec();
    Ok(interval)
}

/// [`combine_with`] admitting certified bounds only.
pub fn combine(bounds: &[Bound]) -> Result<BoundInterval, BoundError> {
    combine_with(bounds, Admit::CERTIFIED)
}

/// Interval for a `#0` sum, where complexity is additive.
pub fn sum_bounds_0(a: &BoundInterval, b: &BoundInterval) -> BoundInterval {
    BoundInterval {
        lower: a.lower + b.lower,
        upper: a.upper.zip(b.upper).map(|(x, y)| x + y),
        provenance: a.provenance.iter().chain(&b.provenance).cloned().collect(),
    }
}

/// Interval for a `#2` sum. Additive when neither side contains a 1-sphere;
/// otherwise only the upper bound survives.
pub fn sum_bounds_2(a: &BoundInterval, free_a: bool, b: &BoundInterval, free_b: bool) -> BoundInterval {
    let mut sum = sum_bounds_0(a, b);
    if !(free_a && free_b) {
        sum.lower = 0;
        sum.provenance.push(Bound::lower(
            "sum2_collapse",
            0,
            BoundStatus::Certified,
            "a summand contains a 1-sphere: a knot summed with D is D, so no lower bound survives",
        ));
    }
    sum
}

/// `true` when `crn < 5^(4n-2)`, i.e. `log5(crn)/2 - 2 < 2n - 3`.
pub fn fib_displayed_lower_holds(crn: &BigUint, n: u32) -> bool {
    if n == 0 {
        return false;
    }
    crn < &BigUint::from(5u8).pow(4 * n - 2)
}

/// `true` when `2^(n-1) <= f_n^2`, i.e. `n <= 2·log2(f_n) + 1`.
pub fn fib_log2_relation_holds(f_n: &BigUint, n: u32) -> bool {
    n >= 1 && (BigUint::one() << (n - 1)) <= f_n * f_n
}
