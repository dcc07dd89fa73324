//! Formal connected sums of link-pairs and their (0,2)-root normal form.
//!
//! An expression is a multiset of atoms joined by `#0`. Complexity adds over
//! `#0` exactly, and every rewrite in [`normalize`] preserves it. Sums along
//! 2-spheres (`#2`) are additive only when neither targeted summand meets a
//! 1-sphere; the remaining cases are handled by [`sum2`].

mod expr;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_integer::Integer;
use thiserror::Error;

use crate::bounds::{combine, torus_bounds, torus_word, BoundInterval};
use crate::diagram::braid_closure;
use crate::invariants::{determinant, torus_crossing_number};

pub use expr::{parse_expression, ParseError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RootError {
    #[error("atom index {index} out of range for an expression with {len} atoms")]
    Target { index: usize, len: usize },
    #[error("#2 target {0} has an empty link")]
    EmptyLink(String),
    #[error("no atom with a nonempty link to use as a #2 target")]
    NoTarget,
    #[error("Xn needs n >= 1, got {0}")]
    XnParameter(u64),
    #[error("torus pair needs positive parameters, got ({0}, {1})")]
    TorusParameters(u64, u64),
}

/// Complexity as a closed interval; `upper = None` means unknown.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Complexity {
    pub lower: u64,
    pub upper: Option<u64>,
}

impl Complexity {
    pub const ZERO: Complexity = Complexity { lower: 0, upper: Some(0) };
    pub const UNKNOWN: Complexity = Complexity { lower: 0, upper: None };

    pub fn exact(c: u64) -> Self {
        Complexity { lower: c, upper: Some(c) }
    }

    pub fn is_exact(&self) -> bool {
        self.upper == Some(self.lower)
    }

    pub fn to_interval(self) -> BoundInterval {
        BoundInterval { lower: self.lower, upper: self.upper, provenance: Vec::new() }
    }
}

impl std::ops::Add for Complexity {
    type Output = Complexity;

    fn add(self, o: Complexity) -> Complexity {
        Complexity { lower: self.lower + o.lower, upper: self.upper.zip(o.upper).map(|(a, b)| a + b) }
    }
}

impl std::iter::Sum for Complexity {
    fn sum<I: Iterator<Item = Complexity>>(iter: I) -> Complexity {
        iter.fold(Complexity::ZERO, |a, b| a + b)
    }
}

impl fmt::Display for Complexity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.lower, self.upper) {
            (l, Some(u)) if l == u => write!(f, "{l}"),
            (l, Some(u)) => write!(f, "[{l},{u}]"),
            (0, None) => f.write_str("?"),
            (l, None) => write!(f, "[{l},?]"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ambient {
    S3,
    Other,
}

/// The six complexity-zero (0,1,2)-irreducible pairs: `S3`, `RP3` and
/// `L(3,1)`, each either empty or with the core of a Heegaard torus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Exceptional {
    S3Empty,
    S3Core,
    P3Empty,
    P3Core,
    L31Empty,
    L31Core,
}

impl Exceptional {
    pub const ALL: [Exceptional; 6] = [
        Exceptional::S3Empty,
        Exceptional::S3Core,
        Exceptional::P3Empty,
        Exceptional::P3Core,
        Exceptional::L31Empty,
        Exceptional::L31Core,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Exceptional::S3Empty => "S3",
            Exceptional::S3Core => "S3core",
            Exceptional::P3Empty => "P3",
            Exceptional::P3Core => "P3core",
            Exceptional::L31Empty => "L31",
            Exceptional::L31Core => "L31core",
        }
    }

    fn has_core(self) -> bool {
        matches!(self, Exceptional::S3Core | Exceptional::P3Core | Exceptional::L31Core)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AtomKind {
    /// A (0,1,2)-irreducible pair, as declared by the caller.
    Prime {
        label: String,
        complexity: Complexity,
        ambient: Ambient,
    },
    /// `(S3, ∅)`.
    Trivial0,
    /// `(S3, unknot)`.
    Trivial2,
    /// `(S2×S1, {*}×S1)`.
    D,
    /// `(S2×S1, ∅)`.
    Handle,
    Exceptional(Exceptional),
    /// The pair in `S2×S1` whose root is `(S3, T(2,n))`.
    Xn(u64),
    TorusPair(u64, u64),
    /// Known complexity range, unknown prime structure.
    Opaque {
        label: String,
        complexity: Complexity,
    },
}

/// An atom together with the number of components of its link.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom {
    pub kind: AtomKind,
    pub components: usize,
}

impl Atom {
    pub fn prime(label: &str, complexity: Complexity) -> Atom {
        Atom { kind: AtomKind::Prime { label: label.into(), complexity, ambient: Ambient::S3 }, components: 1 }
    }

    pub fn opaque(label: &str, complexity: Complexity, components: usize) -> Atom {
        Atom { kind: AtomKind::Opaque { label: label.into(), complexity }, components }
    }

    pub fn trivial0() -> Atom {
        Atom { kind: AtomKind::Trivial0, components: 0 }
    }

    pub fn trivial2() -> Atom {
        Atom { kind: AtomKind::Trivial2, components: 1 }
    }

    pub fn d() -> Atom {
        Atom { kind: AtomKind::D, components: 1 }
    }

    pub fn handle() -> Atom {
        Atom { kind: AtomKind::Handle, components: 0 }
    }

    pub fn exceptional(e: Exceptional) -> Atom {
        Atom { kind: AtomKind::Exceptional(e), components: usize::from(e.has_core()) }
    }

    pub fn xn(n: u64) -> Result<Atom, RootError> {
        if n == 0 {
            return Err(RootError::XnParameter(n));
        }
        Ok(Atom { kind: AtomKind::Xn(n), components: 1 })
    }

    pub fn torus(m: u64, q: u64) -> Result<Atom, RootError> {
        if m == 0 || q == 0 {
            return Err(RootError::TorusParameters(m, q));
        }
        Ok(Atom { kind: AtomKind::TorusPair(m, q), components: m.gcd(&q) as usize })
    }

    pub fn complexity(&self) -> Complexity {
        match &self.kind {
            AtomKind::Prime { complexity, .. } | AtomKind::Opaque { complexity, .. } => *complexity,
            AtomKind::Xn(n) => torus_pair_complexity(2, *n),
            AtomKind::TorusPair(m, q) => torus_pair_complexity(*m, *q),
            _ => Complexity::ZERO,
        }
    }

    /// `(S3, unknot)`, the identity for `#2`.
    pub fn is_trivial2(&self) -> bool {
        matches!(self.kind, AtomKind::Trivial2 | AtomKind::Exceptional(Exceptional::S3Core))
    }

    pub fn is_d(&self) -> bool {
        self.kind == AtomKind::D
    }

    /// A knot in `S3`, the summand that `#2 D` absorbs.
    pub fn is_s3_knot(&self) -> bool {
        self.components == 1
            && match &self.kind {
                AtomKind::Prime { ambient, .. } => *ambient == Ambient::S3,
                AtomKind::TorusPair(..) | AtomKind::Trivial2 => true,
                AtomKind::Exceptional(e) => *e == Exceptional::S3Core,
                _ => false,
            }
    }

    /// No sphere meets the link of this summand in exactly one point.
    fn one_sphere_free(&self) -> bool {
        matches!(
            self.kind,
            AtomKind::Prime { .. } | AtomKind::TorusPair(..) | AtomKind::Xn(_) | AtomKind::Exceptional(_)
        )
    }

    fn ambient(&self) -> Ambient {
        match &self.kind {
            AtomKind::Prime { ambient, .. } => *ambient,
            AtomKind::TorusPair(..) | AtomKind::Trivial0 | AtomKind::Trivial2 => Ambient::S3,
            AtomKind::Exceptional(Exceptional::S3Empty | Exceptional::S3Core) => Ambient::S3,
            _ => Ambient::Other,
        }
    }
}

/// Certified complexity interval of `(S3, T(m,q))`. Parameter 1 gives the
/// unknot, a trivial pair.
pub fn torus_pair_complexity(m: u64, q: u64) -> Complexity {
    static CACHE: OnceLock<Mutex<HashMap<(u64, u64), Complexity>>> = OnceLock::new();
    let (m, q) = (m.min(q), m.max(q));
    if m <= 1 {
        return Complexity::ZERO;
    }
    let cache = CACHE.get_or_init(Default::default);
    if let Some(&c) = cache.lock().expect("cache lock").get(&(m, q)) {
        return c;
    }
    let i = torus_bounds(m, q).and_then(|b| combine(&b)).expect("torus bounds are consistent");
    let c = Complexity { lower: i.lower, upper: i.upper };
    cache.lock().expect("cache lock").insert((m, q), c);
    c
}

/// Formal `#0` sum of atoms with a log of the operations that built it.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PairExpression {
    pub atoms: Vec<Atom>,
    pub log: Vec<String>,
}

impl PairExpression {
    pub fn new(atoms: Vec<Atom>) -> Self {
        PairExpression { atoms, log: Vec::new() }
    }

    pub fn empty() -> Self {
        PairExpression::default()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Atoms in canonical order, for multiset comparison.
    pub fn sorted_atoms(&self) -> Vec<Atom> {
        let mut a = self.atoms.clone();
        a.sort();
        a
    }

    pub fn same_atoms(&self, other: &PairExpression) -> bool {
        self.sorted_atoms() == other.sorted_atoms()
    }

    pub fn components(&self) -> usize {
        self.atoms.iter().map(|a| a.components).sum()
    }

    pub fn contains_d(&self) -> bool {
        self.atoms.iter().any(Atom::is_d)
    }
}

impl fmt::Display for PairExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&expr::serialize(self))
    }
}

impl std::str::FromStr for PairExpression {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_expression(s)
    }
}

pub fn complexity(e: &PairExpression) -> Complexity {
    e.atoms.iter().map(Atom::complexity).sum()
}

pub fn sum0(e1: &PairExpression, e2: &PairExpression) -> PairExpression {
    let mut atoms = e1.atoms.clone();
    atoms.extend(e2.atoms.iter().cloned());
    let mut log = e1.log.clone();
    log.extend(e2.log.iter().cloned());
    log.push(format!("#0 of {} and {} atoms", e1.atoms.len(), e2.atoms.len()));
    PairExpression { atoms, log }
}

/// `#2` along components of atoms `t1` of `e1` and `t2` of `e2`.
///
/// * a trivial 2-pair is the identity;
/// * two 1-sphere-free summands fuse into one prime whose complexity is the sum;
/// * `D #2 D` has complexity 0 and unknown structure;
/// * a knot in `S3` summed with `D` is `D`;
/// * anything else keeps only the upper bound of the sum.
pub fn sum2(e1: &PairExpression, t1: usize, e2: &PairExpression, t2: usize) -> Result<PairExpression, RootError> {
    let a = e1.atoms.get(t1).ok_or(RootError::Target { index: t1, len: e1.atoms.len() })?;
    let b = e2.atoms.get(t2).ok_or(RootError::Target { index: t2, len: e2.atoms.len() })?;
    for x in [a, b] {
        if x.components == 0 {
            return Err(RootError::EmptyLink(expr::serialize_atom(x)));
        }
    }
    let (sa, sb) = (expr::serialize_atom(a), expr::serialize_atom(b));
    let (result, note): (Vec<Atom>, String) = if a.is_trivial2() {
        (vec![b.clone()], "trivial 2-pair is the identity".into())
    } else if b.is_trivial2() {
        (vec![a.clone()], "trivial 2-pair is the identity".into())
    } else if a.is_d() && b.is_d() {
        (vec![Atom::opaque("D#2D", Complexity::ZERO, 1)], "D #2 D has complexity 0".into())
    } else if a.is_d() && b.is_s3_knot() || b.is_d() && a.is_s3_knot() {
        (vec![Atom::d()], "a knot in S3 summed with D is D".into())
    } else if a.one_sphere_free() && b.one_sphere_free() {
        let ambient =
            if a.ambient() == Ambient::S3 && b.ambient() == Ambient::S3 { Ambient::S3 } else { Ambient::Other };
        let fused = Atom {
            kind: AtomKind::Prime {
                label: format!("{}#2{}", label(a), label(b)),
                complexity: a.complexity() + b.complexity(),
                ambient,
            },
            components: a.components + b.components - 1,
        };
        (vec![fused], "no 1-spheres: complexity adds".into())
    } else {
        let sum = a.complexity() + b.complexity();
        let bound = Complexity { lower: 0, upper: sum.upper };
        let opaque = Atom::opaque(&format!("{}#2{}", label(a), label(b)), bound, a.components + b.components - 1);
        (vec![opaque], "1-sphere present: only the upper bound survives".into())
    };
    let mut atoms: Vec<Atom> = e1.atoms.iter().enumerate().filter(|&(i, _)| i != t1).map(|(_, x)| x.clone()).collect();
    atoms.extend(result);
    atoms.extend(e2.atoms.iter().enumerate().filter(|&(i, _)| i != t2).map(|(_, x)| x.clone()));
    let mut log = e1.log.clone();
    log.extend(e2.log.iter().cloned());
    log.push(format!("#2[{t1},{t2}] {sa} with {sb}: {note}"));
    Ok(PairExpression { atoms, log })
}

fn label(a: &Atom) -> String {
    match &a.kind {
        AtomKind::Prime { label, .. } | AtomKind::Opaque { label, .. } => label.clone(),
        _ => expr::serialize_atom(a),
    }
}

/// One rewrite applied to a single atom; `None` when the atom is in normal
/// form. `Some(vec![])` removes the atom.
pub fn rewrite_step(a: &Atom) -> Option<(Vec<Atom>, String)> {
    let drop = |why: &str| Some((Vec::new(), why.to_string()));
    match &a.kind {
        AtomKind::Trivial0 | AtomKind::Exceptional(Exceptional::S3Empty) => drop("drop trivial 0-pair"),
        AtomKind::Trivial2 | AtomKind::Exceptional(Exceptional::S3Core) => drop("drop trivial 2-pair"),
        AtomKind::Handle => drop("root of S2xS1 is trivial"),
        AtomKind::Xn(1) => Some((vec![Atom::trivial2()], "Xn(1): root T(2,1) is the unknot (degenerate)".into())),
        AtomKind::Xn(n) => {
            Some((vec![torus_prime(2, *n)], format!("Xn({n}): surgery on S2x{{*}} gives (S3, T(2,{n}))")))
        }
        &AtomKind::TorusPair(m, q) if m > q => {
            Some((vec![Atom::torus(q, m).expect("positive")], format!("T({m},{q}) = T({q},{m})")))
        }
        AtomKind::TorusPair(1, q) => Some((vec![Atom::trivial2()], format!("T(1,{q}) is the unknot"))),
        AtomKind::TorusPair(2, q) => Some((vec![torus_prime(2, *q)], format!("T(2,{q}) as a prime atom"))),
        _ => None,
    }
}

fn torus_prime(m: u64, q: u64) -> Atom {
    Atom {
        kind: AtomKind::Prime {
            label: format!("T({m},{q})"),
            complexity: torus_pair_complexity(m, q),
            ambient: Ambient::S3,
        },
        components: m.gcd(&q) as usize,
    }
}

/// Applies [`rewrite_step`] until no atom changes, then sorts the atoms.
pub fn normalize(e: &PairExpression) -> PairExpression {
    normalize_by(e, |_| 0)
}

/// [`normalize`] with the caller choosing which reducible atom to rewrite
/// next (`pick(k)` returns an index below `k`). The normal form does not
/// depend on the choices.
pub fn normalize_by(e: &PairExpression, mut pick: impl FnMut(usize) -> usize) -> PairExpression {
    let mut atoms = e.atoms.clone();
    let mut log = e.log.clone();
    loop {
        let reducible: Vec<usize> = (0..atoms.len()).filter(|&i| rewrite_step(&atoms[i]).is_some()).collect();
        if reducible.is_empty() {
            break;
        }
        let i = reducible[pick(reducible.len()) % reducible.len()];
        let (replacement, why) = rewrite_step(&atoms[i]).expect("reducible");
        log.push(why);
        atoms.splice(i..=i, replacement);
    }
    atoms.sort();
    PairExpression { atoms, log }
}

/// Splits off the `D` summands: `e = Y #0 k·D` with `Y` free of `D`.
pub fn extract_d_factors(e: &PairExpression) -> (PairExpression, usize) {
    let (ds, rest): (Vec<Atom>, Vec<Atom>) = e.atoms.iter().cloned().partition(Atom::is_d);
    let mut log = e.log.clone();
    log.push(format!("extracted {} copies of D", ds.len()));
    (PairExpression { atoms: rest, log }, ds.len())
}

/// Facts about the pair `X_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XnFacts {
    pub n: u64,
    pub root: Atom,
    pub root_components: usize,
    pub zero_one_irreducible: bool,
    pub separating_spheres_trivial: bool,
    pub has_essential_separating_2sphere: bool,
    pub link_is_knot: bool,
    /// `(crossing number, components, determinant)` of the root link.
    pub root_invariants: (u64, usize, u64),
}

pub fn xn_facts(n: u64) -> Result<XnFacts, RootError> {
    let atom = Atom::xn(n)?;
    let root = normalize(&PairExpression::new(vec![atom])).atoms.pop().unwrap_or_else(Atom::trivial2);
    let root_components = root.components;
    let root_invariants = if n == 1 {
        (0, 1, 1)
    } else {
        let (crn, _) = torus_crossing_number(2, n).expect("n >= 2");
        let closure = braid_closure(&torus_word(2, n));
        let det = determinant(&closure).try_into().expect("small determinant");
        (crn, closure.component_count(), det)
    };
    Ok(XnFacts {
        n,
        root,
        root_components,
        zero_one_irreducible: n.is_multiple_of(2),
        separating_spheres_trivial: n.is_multiple_of(2),
        has_essential_separating_2sphere: n % 2 == 1 && n >= 3,
        link_is_knot: true,
        root_invariants,
    })
}

/// `X_n` and `X_m` are different pairs: their efficient roots differ.
pub fn xn_distinct(n: u64, m: u64) -> Result<bool, RootError> {
    Ok(xn_facts(n)?.root_invariants != xn_facts(m)?.root_invariants)
}

#[cfg(test)]
mod tests;
