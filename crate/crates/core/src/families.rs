//! Generators for torus knots, Fibonacci torus knots, Turk's head links,
//! twist knots and the pairs `X_n`.
//!
//! Twist knots are indexed by their number of full twists: `twist_knot(n)`
//! is the alternating diagram of a clasp followed by `2n` half-twists, with
//! `2n + 2` crossings. `twist_knot(1)` is the figure-eight knot and the
//! determinant is `4n + 1`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::One;
use thiserror::Error;

use crate::bounds::{
    fib_displayed_lower_holds, fib_log2_relation_holds, strict_log5_lower, torus_upper_bound, torus_word,
};
use crate::diagram::tangle::Tangle;
use crate::diagram::{braid_closure, BraidWord, LinkDiagram};
use crate::invariants::{continued_fraction, fibonacci, torus_crossing_number, torus_det_minus_one};
use crate::roots::{Atom, PairExpression};

/// Largest `n` with `f_n` below `2^64`.
pub const FIB_MAX: u32 = 92;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("{family}({value}): {reason}")]
    Parameter { family: &'static str, value: String, reason: &'static str },
    #[error("cannot parse family spec `{0}`")]
    Parse(String),
    #[error("empty or malformed range `{0}`")]
    Range(String),
}

fn bad(family: &'static str, value: impl fmt::Display, reason: &'static str) -> FamilyError {
    FamilyError::Parameter { family, value: value.to_string(), reason }
}

/// `(σ1 σ2 … σ(m-1))^q` on `m` strands; its closure is `T(m,q)`.
pub fn torus_braid(m: u64, q: u64) -> Result<BraidWord, FamilyError> {
    if m < 2 || q < 1 || m > 64 || q > 4096 {
        return Err(bad("torus", format!("{m},{q}"), "need 2 <= m <= 64 and 1 <= q <= 4096"));
    }
    Ok(torus_word(m, q))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FibTorus {
    pub n: u32,
    pub m: u64,
    pub q: u64,
    /// `n >= 4` and `n ≡ 0, 2 (mod 3)`, exactly when one of `f_n`, `f_(n-1)` is even.
    pub valid: bool,
}

/// `(f_n, f_(n-1))` with `f_0 = f_1 = 1`.
pub fn fib_torus(n: u32) -> Result<FibTorus, FamilyError> {
    if n < 2 {
        return Err(bad("fib", n, "need n >= 2"));
    }
    if n > FIB_MAX {
        return Err(bad("fib", n, "f_n does not fit in 64 bits"));
    }
    let m: u64 = fibonacci(n).try_into().expect("n <= FIB_MAX");
    let q: u64 = fibonacci(n - 1).try_into().expect("n <= FIB_MAX");
    Ok(FibTorus { n, m, q, valid: n >= 4 && n % 3 != 1 })
}

/// Every quantity in the Fibonacci torus knot bound chain, computed with
/// exact integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FibChain {
    pub torus: FibTorus,
    /// `f_n (f_(n-1) - 1)`.
    pub crn: BigUint,
    /// `min{m(q-1), q(m-1)}` agrees with `crn` (when it fits in 64 bits).
    pub crn_formula_agrees: bool,
    pub quotient_sum: u64,
    /// `2n - 3`.
    pub upper: u64,
    /// `|Δ(-1)|`, the odd one of `f_n`, `f_(n-1)`.
    pub det: u64,
    /// Least `k` with `5^(k+1) > det`.
    pub lower: u64,
    /// Least `k` with `5^(k+1) > f_(n-1)`.
    pub lower_from_f_prev: u64,
    /// `log5(crn)/2 - 2 < 2n - 3`.
    pub displayed_lower_holds: bool,
    /// `n <= 2 log2(f_n) + 1`.
    pub log2_relation_holds: bool,
}

pub fn fib_chain(n: u32) -> Result<FibChain, FamilyError> {
    let torus = fib_torus(n)?;
    if !torus.valid {
        return Err(bad("fib", n, "need n >= 4 and n = 0, 2 mod 3"));
    }
    let (m, q) = (torus.m, torus.q);
    let crn = BigUint::from(m) * (BigUint::from(q) - BigUint::one());
    let crn_formula_agrees = match torus_crossing_number(m, q) {
        Ok((c, _)) => BigUint::from(c) == crn,
        Err(_) => true,
    };
    let quotient_sum = continued_fraction(m, q).expect("consecutive Fibonacci numbers are coprime").quotient_sum();
    let upper = torus_upper_bound(m, q).expect("valid torus parameters");
    let det = torus_det_minus_one(m, q).expect("one parameter is even");
    Ok(FibChain {
        torus,
        crn_formula_agrees,
        quotient_sum,
        upper,
        det,
        lower: strict_log5_lower(&BigUint::from(det)).value,
        lower_from_f_prev: strict_log5_lower(&BigUint::from(q)).value,
        displayed_lower_holds: fib_displayed_lower_holds(&crn, n),
        log2_relation_holds: fib_log2_relation_holds(&BigUint::from(m), n),
        crn,
    })
}

/// `(σ1 σ2^-1)^n` on 3 strands.
pub fn turks_head(n: u64) -> Result<BraidWord, FamilyError> {
    if !(2..=10_000).contains(&n) {
        return Err(bad("th", n, "need 2 <= n <= 10000"));
    }
    Ok(BraidWord::new(3, vec![1, -2]).expect("valid").pow(n as usize))
}

fn twist_tangle(n: u64, alternating: bool, half_twists: u64) -> Result<LinkDiagram, FamilyError> {
    if !(1..=5_000).contains(&n) {
        return Err(bad("twist", n, "need 1 <= n <= 5000"));
    }
    let mut t = Tangle::zero();
    t.twist_east(true);
    t.twist_east(true);
    for _ in 0..half_twists {
        t.twist_south(alternating);
    }
    Ok(t.denominator().expect("rational tangle closures are planar"))
}

/// Reduced alternating diagram: a clasp and `2n` half-twists, `2n + 2` crossings.
pub fn twist_knot(n: u64) -> Result<LinkDiagram, FamilyError> {
    twist_tangle(n, true, 2 * n)
}

/// The same knot drawn with `2n + 1` half-twists against the clasp, which is
/// not alternating and has `2n + 3` crossings.
pub fn twist_knot_usual(n: u64) -> Result<LinkDiagram, FamilyError> {
    twist_tangle(n, false, 2 * n + 1)
}

pub fn xn_pair(n: u64) -> Result<PairExpression, FamilyError> {
    let atom = Atom::xn(n).map_err(|_| bad("xn", n, "need n >= 1"))?;
    let mut e = PairExpression::new(vec![atom]);
    e.log.push(format!("X_{n}: pair in S2xS1 whose link is a knot"));
    Ok(e)
}

/// A member of one of the bundled families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FamilySpec {
    Torus(u64, u64),
    Fib(u32),
    TurksHead(u64),
    Twist(u64),
    Xn(u64),
}

impl FamilySpec {
    /// Diagram of the member, when it is a link in `S3` small enough to draw.
    pub fn diagram(&self) -> Result<Option<LinkDiagram>, FamilyError> {
        Ok(match *self {
            FamilySpec::Torus(m, q) => {
                let (a, b) = (m.min(q), m.max(q));
                if a <= 1 {
                    Some(LinkDiagram::unlink(1))
                } else {
                    Some(braid_closure(&torus_braid(a, b)?))
                }
            }
            FamilySpec::TurksHead(n) => Some(braid_closure(&turks_head(n)?)),
            FamilySpec::Twist(n) => Some(twist_knot(n)?),
            FamilySpec::Fib(_) | FamilySpec::Xn(_) => None,
        })
    }

    /// Members of these families are prime and non-split.
    pub fn is_prime(&self) -> bool {
        true
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilySpec::Torus(m, q) => write!(f, "torus({m},{q})"),
            FamilySpec::Fib(n) => write!(f, "fib({n})"),
            FamilySpec::TurksHead(n) => write!(f, "th({n})"),
            FamilySpec::Twist(n) => write!(f, "twist({n})"),
            FamilySpec::Xn(n) => write!(f, "xn({n})"),
        }
    }
}

/// Splits `name(a,b,...)` into the name and raw argument strings.
fn split_call(s: &str) -> Option<(String, Vec<String>)> {
    let s = s.trim();
    let open = s.find('(')?;
    let inner = s[open + 1..].strip_suffix(')')?;
    let name = s[..open].trim().to_ascii_lowercase();
    let args = inner.split(',').map(|a| a.trim().to_string()).collect();
    Some((name, args))
}

fn canonical_name(name: &str) -> Option<&'static str> {
    Some(match name {
        "torus" | "t" => "torus",
        "fib" | "fib_torus" => "fib",
        "th" | "turks_head" => "th",
        "twist" | "twist_knot" => "twist",
        "xn" => "xn",
        _ => return None,
    })
}

fn arity(name: &str) -> usize {
    if name == "torus" {
        2
    } else {
        1
    }
}

fn build(name: &str, args: &[u64]) -> Result<FamilySpec, FamilyError> {
    let spec = match (name, args) {
        ("torus", &[m, q]) => FamilySpec::Torus(m, q),
        ("fib", &[n]) => FamilySpec::Fib(u32::try_from(n).map_err(|_| bad("fib", n, "too large"))?),
        ("th", &[n]) => FamilySpec::TurksHead(n),
        ("twist", &[n]) => FamilySpec::Twist(n),
        ("xn", &[n]) => FamilySpec::Xn(n),
        _ => return Err(FamilyError::Parse(format!("{name}{args:?}"))),
    };
    spec.validate()?;
    Ok(spec)
}

impl FamilySpec {
    fn validate(&self) -> Result<(), FamilyError> {
        match *self {
            FamilySpec::Torus(m, q) if m == 0 || q == 0 => Err(bad("torus", format!("{m},{q}"), "need m, q >= 1")),
            FamilySpec::Torus(m, q) if m.min(q) > 1 => torus_braid(m.min(q), m.max(q)).map(drop),
            FamilySpec::Torus(..) => Ok(()),
            FamilySpec::Fib(n) => fib_torus(n).map(drop),
            FamilySpec::TurksHead(n) => turks_head(n).map(drop),
            FamilySpec::Twist(n) if !(1..=5_000).contains(&n) => Err(bad("twist", n, "need 1 <= n <= 5000")),
            FamilySpec::Twist(_) => Ok(()),
            FamilySpec::Xn(n) => xn_pair(n).map(drop),
        }
    }
}

impl FromStr for FamilySpec {
    type Err = FamilyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let fail = || FamilyError::Parse(s.trim().to_string());
        let (name, args) = split_call(s).ok_or_else(fail)?;
        let name = canonical_name(&name).ok_or_else(fail)?;
        if args.len() != arity(name) {
            return Err(fail());
        }
        let args: Vec<u64> = args.iter().map(|a| a.parse().map_err(|_| fail())).collect::<Result<_, _>>()?;
        build(name, &args)
    }
}

/// A family with one free parameter, e.g. `fib`, `th(_)` or `torus(2,_)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyPattern {
    name: &'static str,
    /// Fixed arguments; `None` marks the free one.
    args: Vec<Option<u64>>,
}

impl FamilyPattern {
    pub fn instantiate(&self, k: u64) -> Result<FamilySpec, FamilyError> {
        let args: Vec<u64> = self.args.iter().map(|a| a.unwrap_or(k)).collect();
        build(self.name, &args)
    }

    pub fn name(&self) -> &'static str {
        self.name
    }
}

impl FromStr for FamilyPattern {
    type Err = FamilyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let fail = || FamilyError::Parse(s.trim().to_string());
        let (name, raw) = match split_call(s) {
            Some((name, args)) => (name, Some(args)),
            None => (s.trim().to_ascii_lowercase(), None),
        };
        let name = canonical_name(&name).ok_or_else(fail)?;
        let args: Vec<Option<u64>> = match raw {
            None if arity(name) == 1 => vec![None],
            None => return Err(fail()),
            Some(raw) => raw
                .iter()
                .map(|a| if a == "_" { Ok(None) } else { a.parse().map(Some).map_err(|_| fail()) })
                .collect::<Result<_, _>>()?,
        };
        if args.len() != arity(name) || args.iter().filter(|a| a.is_none()).count() != 1 {
            return Err(fail());
        }
        Ok(FamilyPattern { name, args })
    }
}

/// Inclusive range `a..b` or `a..=b` with `a <= b`.
pub fn parse_range(s: &str) -> Result<std::ops::RangeInclusive<u64>, FamilyError> {
    let fail = || FamilyError::Range(s.to_string());
    let (a, b) = s.trim().split_once("..").ok_or_else(fail)?;
    let b = b.strip_prefix('=').unwrap_or(b);
    let (a, b): (u64, u64) = (a.trim().parse().map_err(|_| fail())?, b.trim().parse().map_err(|_| fail())?);
    if a > b {
        return Err(fail());
    }
    Ok(a..=b)
}
