//! Bound reports for diagrams, braids and family members.

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bounds::{
    alternating_crn_lower_bound, combine_with, crn_certificate, det_lower_bound, diagram_upper_bound, torus_bounds,
    torus_crn_certificate, turks_head_lower_bound, volume_lower_bound, Admit, Bound, BoundError, BoundKind,
    BoundStatus, CrossingCertificate, CrossingStatus, TORUS_DIAGRAM_LIMIT,
};
use crate::diagram::{parse_pd, BraidWord, DiagramError, LinkDiagram};
use crate::families::{fib_torus, FamilyError, FamilySpec};
use crate::invariants::{determinant, torus_det_minus_one};
use crate::roots::torus_pair_complexity;

/// Diagrams with more crossings than this get no determinant.
pub const DETERMINANT_CROSSING_LIMIT: usize = 240;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ReportError {
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Bound(#[from] BoundError),
}

impl ReportError {
    /// A certified lower bound above a certified upper bound.
    pub fn is_contradiction(&self) -> bool {
        matches!(self, ReportError::Bound(BoundError::Contradiction { .. }))
    }
}

/// A parsed command-line input.
#[derive(Debug, Clone)]
pub enum Input {
    Family(FamilySpec),
    Braid(BraidWord),
    Diagram(LinkDiagram),
}

/// Family spec if it looks like `name(...)`, braid if it starts with
/// `strands=`, PD text otherwise. The empty string is the unknot.
pub fn parse_input(text: &str) -> Result<Input, ReportError> {
    let t = text.trim();
    let looks_like_call = t.find('(').is_some_and(|i| {
        let name = &t[..i];
        !name.is_empty() && name.trim().chars().all(|c| c.is_ascii_alphabetic() || c == '_')
    });
    if looks_like_call && !t.starts_with('X') {
        return Ok(Input::Family(t.parse()?));
    }
    if t.starts_with("strands=") {
        return t.parse::<BraidWord>().map(Input::Braid).map_err(ReportError::Diagram);
    }
    Ok(Input::Diagram(parse_pd(t)?))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VolumeInput {
    pub value: f64,
    pub source: String,
    pub tolerance: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ReportOptions {
    /// The caller asserts the link is prime and non-split.
    pub assume_prime: bool,
    pub include_asymptotic: bool,
    pub volume: Option<VolumeInput>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrnEntry {
    pub value: u64,
    pub status: CrossingStatus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Interval {
    pub lower: u64,
    pub upper: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub input: String,
    pub crn: Option<CrnEntry>,
    pub determinant: Option<u64>,
    pub components: usize,
    pub bounds: Vec<Bound>,
    pub interval: Interval,
    pub warnings: Vec<String>,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("reports serialize")
    }

    pub fn from_json(s: &str) -> Result<Report, serde_json::Error> {
        serde_json::from_str(s)
    }

    pub fn bound(&self, tag: &str) -> Option<&Bound> {
        self.bounds.iter().find(|b| b.tag == tag)
    }
}

struct Builder {
    input: String,
    crn: Option<CrnEntry>,
    determinant: Option<u64>,
    components: usize,
    bounds: Vec<Bound>,
    warnings: Vec<String>,
}

impl Builder {
    fn new(input: &str, components: usize) -> Self {
        Builder {
            input: input.to_string(),
            crn: None,
            determinant: None,
            components,
            bounds: Vec::new(),
            warnings: Vec::new(),
        }
    }

    fn volume(&mut self, opts: &ReportOptions, hyperbolic_possible: bool) -> Result<(), ReportError> {
        let Some(v) = &opts.volume else { return Ok(()) };
        if !hyperbolic_possible {
            self.warnings.push("volume ignored: this exterior is not hyperbolic".into());
            return Ok(());
        }
        let vb = volume_lower_bound(v.value, v.tolerance)?;
        self.bounds.push(Bound::lower(
            "volume_lower",
            vb.value,
            BoundStatus::Certified,
            format!("least integer > vol/v3, vol = {} ({})", v.value, v.source),
        ));
        if vb.boundary {
            self.warnings.push(format!(
                "boundary: vol/v3 is within {} of {}, read as exact",
                v.tolerance,
                vb.value - 1
            ));
        }
        Ok(())
    }

    fn finish(mut self, opts: &ReportOptions) -> Result<Report, ReportError> {
        let admit = Admit { conditional: false, asymptotic: opts.include_asymptotic };
        for b in &self.bounds {
            if !admit.admits(b.status) {
                let kind = if b.kind == BoundKind::Lower { "lower" } else { "upper" };
                let hint = match b.status {
                    BoundStatus::Conditional => "needs a prime non-split link (--assume-prime)",
                    _ => "holds for sufficiently large n (--include-asymptotic)",
                };
                self.warnings.push(format!("excluded {kind} bound {} = {}: {hint}", b.tag, b.value));
            }
        }
        let interval = combine_with(&self.bounds, admit)?;
        Ok(Report {
            input: self.input,
            crn: self.crn,
            determinant: self.determinant,
            components: self.components,
            bounds: self.bounds,
            interval: Interval { lower: interval.lower, upper: interval.upper },
            warnings: self.warnings,
        })
    }
}

fn small_determinant(x: BigUint, warnings: &mut Vec<String>) -> Option<u64> {
    match u64::try_from(&x) {
        Ok(v) => Some(v),
        Err(_) => {
            warnings.push(format!("determinant {x} exceeds 64 bits; omitted from the report"));
            None
        }
    }
}

/// Report for a diagram. `prime` is the caller's primality assertion.
pub fn report_diagram(input: &str, d: &LinkDiagram, prime: bool, opts: &ReportOptions) -> Result<Report, ReportError> {
    let prime = prime || opts.assume_prime;
    let mut b = Builder::new(input, d.component_count());
    let cert = crn_certificate(d);
    b.crn = Some(CrnEntry { value: cert.value, status: cert.status });
    let note = if cert.is_exact() { "" } else { " (crossings of this diagram)" };
    b.bounds.push(Bound::upper(
        "diagram_upper",
        diagram_upper_bound(cert, b.components),
        BoundStatus::Certified,
        format!("4*{} + 2*{} - 1{note}", cert.value, b.components),
    ));
    let split = d.crossing_count() == 0 && d.unknots() > 1 || d.crossing_count() > 0 && !d.is_connected();
    if d.crossing_count() > DETERMINANT_CROSSING_LIMIT {
        b.warnings.push(format!("more than {DETERMINANT_CROSSING_LIMIT} crossings: determinant skipped"));
    } else {
        b.determinant = small_determinant(determinant(d), &mut b.warnings);
        if split {
            b.warnings.push("split diagram: no homology lower bound".into());
        } else {
            b.bounds.push(det_lower_bound(d, prime));
        }
    }
    if cert.status == CrossingStatus::ExactReducedAlternating && b.components == 1 && d.crossing_count() > 0 {
        b.bounds.push(alternating_crn_lower_bound(cert, 1, prime)?);
    }
    if !cert.is_exact() {
        b.warnings.push("diagram is not reduced alternating: crossing number is only bounded above".into());
    }
    b.volume(opts, d.crossing_count() > 0 && !split)?;
    b.finish(opts)
}

fn report_torus(input: &str, m: u64, q: u64, opts: &ReportOptions) -> Result<Report, ReportError> {
    let (a, c) = (m.min(q), m.max(q));
    if a <= 1 {
        let mut r = report_diagram(input, &LinkDiagram::unlink(1), true, opts)?;
        r.warnings.push(format!("T({m},{q}) is the unknot"));
        return Ok(r);
    }
    let cert: CrossingCertificate = torus_crn_certificate(m, q)?;
    let components = num_integer::gcd(a, c) as usize;
    let mut b = Builder::new(input, components);
    b.crn = Some(CrnEntry { value: cert.value, status: cert.status });
    b.bounds = torus_bounds(m, q)?;
    b.determinant = match torus_det_minus_one(m, q) {
        Ok(det) => Some(det),
        Err(_) if (a - 1).saturating_mul(c) <= TORUS_DIAGRAM_LIMIT => {
            let d = FamilySpec::Torus(a, c).diagram()?.expect("torus diagram");
            small_determinant(determinant(&d), &mut b.warnings)
        }
        Err(_) => {
            b.warnings.push("no closed form for the determinant and the diagram is too large".into());
            None
        }
    };
    b.volume(opts, false)?;
    b.finish(opts)
}

/// Report for a member of a bundled family. Family members are prime.
pub fn report_family(spec: FamilySpec, opts: &ReportOptions) -> Result<Report, ReportError> {
    let input = spec.to_string();
    match spec {
        FamilySpec::Torus(m, q) => report_torus(&input, m, q, opts),
        FamilySpec::Fib(n) => {
            let f = fib_torus(n)?;
            let mut r = report_torus(&input, f.m, f.q, opts).map_err(|e| match e {
                ReportError::Bound(BoundError::Invariant(_)) => {
                    ReportError::Input(format!("fib({n}): crossing number exceeds 64 bits"))
                }
                e => e,
            })?;
            r.warnings.insert(0, format!("T({},{})", f.m, f.q));
            if !f.valid {
                r.warnings.push(format!("fib({n}) is outside n >= 4, n = 0, 2 mod 3"));
            }
            Ok(r)
        }
        FamilySpec::TurksHead(n) => {
            let d = spec.diagram()?.expect("Turk's head diagram");
            let mut r = report_diagram(&input, &d, true, opts)?;
            let lower = turks_head_lower_bound(n)?;
            let mut bounds = r.bounds.clone();
            bounds.push(lower);
            let fresh = Builder { bounds, warnings: Vec::new(), ..Builder::new(&input, r.components) };
            let redone = Builder { crn: r.crn, determinant: r.determinant, ..fresh }.finish(opts)?;
            r.warnings.extend(redone.warnings);
            r.bounds = redone.bounds;
            r.interval = redone.interval;
            Ok(r)
        }
        FamilySpec::Twist(_) => {
            let d = spec.diagram()?.expect("twist knot diagram");
            report_diagram(&input, &d, true, opts)
        }
        FamilySpec::Xn(n) => {
            let c = torus_pair_complexity(2, n);
            let mut b = Builder::new(&input, 1);
            let root = if n == 1 { "the trivial 2-pair".to_string() } else { format!("(S3, T(2,{n}))") };
            b.bounds.push(Bound::lower("root_lower", c.lower, BoundStatus::Certified, format!("root {root}")));
            if let Some(u) = c.upper {
                b.bounds.push(Bound::upper("root_upper", u, BoundStatus::Certified, format!("root {root}")));
            }
            b.warnings.push(format!("X_{n} has the complexity of its root {root}"));
            b.volume(opts, false)?;
            b.finish(opts)
        }
    }
}

/// Parses and reports any accepted input.
pub fn report(text: &str, opts: &ReportOptions) -> Result<Report, ReportError> {
    match parse_input(text)? {
        Input::Family(spec) => report_family(spec, opts),
        Input::Braid(w) => report_diagram(text.trim(), &crate::diagram::braid_closure(&w), false, opts),
        Input::Diagram(d) => report_diagram(text.trim(), &d, false, opts),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn interval(text: &str, opts: &ReportOptions) -> (u64, Option<u64>) {
        let r = report(text, opts).unwrap();
        (r.interval.lower, r.interval.upper)
    }

    #[test]
    fn headline_examples() {
        let o = ReportOptions::default();
        assert_eq!(interval("th(2)", &o), (1, Some(17)));
        assert_eq!(interval("torus(3,2)", &o), (0, Some(3)));
        assert_eq!(interval("", &o), (0, Some(1)));
        let r = report("", &o).unwrap();
        assert_eq!(r.determinant, Some(1));
    }

    #[test]
    fn conditional_bounds_need_assumption() {
        let fig8 = "strands=3 : 1 -2 1 -2";
        let o = ReportOptions::default();
        assert_eq!(interval(fig8, &o), (0, Some(17)));
        let r = report(fig8, &o).unwrap();
        assert_eq!(r.bound("det_lower").unwrap().status, BoundStatus::Conditional);
        assert!(r.warnings.iter().any(|w| w.contains("--assume-prime")));
        let o = ReportOptions { assume_prime: true, ..Default::default() };
        assert_eq!(interval(fig8, &o), (1, Some(17)));
    }

    #[test]
    fn volume_enters_the_interval() {
        let o = ReportOptions {
            volume: Some(VolumeInput { value: 2.02988, source: "test".into(), tolerance: 1e-4 }),
            ..Default::default()
        };
        assert_eq!(interval("twist(1)", &o), (3, Some(17)));
        let r = report("torus(2,3)", &o).unwrap();
        assert!(r.warnings.iter().any(|w| w.contains("not hyperbolic")));
    }

    #[test]
    fn asymptotic_turks_head_bound() {
        let o = ReportOptions::default();
        let r = report("th(5)", &o).unwrap();
        assert_eq!(r.bound("turks_head_lower").unwrap().status, BoundStatus::Asymptotic);
        assert!(r.interval.lower < 5);
        let o = ReportOptions { include_asymptotic: true, ..Default::default() };
        assert_eq!(report("th(5)", &o).unwrap().interval.lower, 5);
    }

    #[test]
    fn families_and_inputs() {
        let o = ReportOptions::default();
        let r = report("fib(5)", &o).unwrap();
        assert_eq!(r.crn.unwrap().value, 32);
        assert_eq!(r.bound("torus_cf_upper").unwrap().value, 7);
        assert_eq!(r.bound("det_lower").unwrap().value, 1);
        assert!(report("fib(4)", &o).unwrap().warnings.iter().any(|w| w.contains("outside")));
        assert_eq!(interval("xn(1)", &o), (0, Some(0)));
        assert_eq!(interval("xn(5)", &o), (1, Some(5)));
        assert_eq!(interval("torus(1,5)", &o), (0, Some(1)));
        assert!(report("X[1,2", &o).is_err());
        assert!(report("th(1)", &o).is_err());
        assert!(report("strands=2 : 3", &o).is_err());
        let r = report("X[1,4,2,3] X[3,2,4,1]", &o).unwrap();
        assert_eq!((r.components, r.determinant), (2, Some(2)));
        let r = report("unknots=2", &o).unwrap();
        assert!(r.warnings.iter().any(|w| w.contains("split")));
    }

    #[test]
    fn json_round_trip() {
        let r = report("th(3)", &ReportOptions::default()).unwrap();
        let json = r.to_json();
        for key in ["\"input\"", "\"crn\"", "\"determinant\"", "\"bounds\"", "\"interval\"", "\"kind\":\"upper\""] {
            assert!(json.contains(key), "{key} in {json}");
        }
        assert_eq!(Report::from_json(&json).unwrap(), r);
    }
}
