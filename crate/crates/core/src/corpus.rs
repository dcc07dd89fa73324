//! Bundled PD corpus and the self-test run over it.

use std::path::Path;

use num_bigint::BigUint;
use serde::Serialize;

use crate::bounds::{fib_log2_relation_holds, strict_log5_lower, volume_lower_bound, V3};
use crate::diagram::{parse_pd, LinkDiagram};
use crate::families::{fib_chain, fib_torus, twist_knot, FamilySpec, FIB_MAX};
use crate::invariants::{alexander_minus_one_oracle, determinant, fibonacci, goeritz_matrix, Shade};
use crate::report::{report_diagram, ReportOptions, VolumeInput};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusEntry {
    pub name: String,
    pub text: String,
    /// Known prime and non-split.
    pub prime: bool,
    /// Determinant known independently of this crate.
    pub expected_det: Option<u64>,
}

macro_rules! bundled {
    ($(($file:literal, $prime:expr, $det:expr)),* $(,)?) => {
        vec![$(CorpusEntry {
            name: concat!($file, ".pd").to_string(),
            text: include_str!(concat!("../corpus/", $file, ".pd")).to_string(),
            prime: $prime,
            expected_det: $det,
        }),*]
    };
}

/// Torus closures `T(2,q)`, Turk's heads, twist knots and connected sums,
/// all with at most 12 crossings.
pub fn bundled() -> Vec<CorpusEntry> {
    bundled![
        ("unknot", false, Some(1)),
        ("unlink2", false, Some(0)),
        ("kink", false, Some(1)),
        ("t2_2", true, Some(2)),
        ("t2_3", true, Some(3)),
        ("t2_4", true, Some(4)),
        ("t2_5", true, Some(5)),
        ("t2_6", true, Some(6)),
        ("t2_7", true, Some(7)),
        ("t2_8", true, Some(8)),
        ("t2_9", true, Some(9)),
        ("t3_4", true, Some(3)),
        ("th2", true, Some(5)),
        ("th3", true, Some(16)),
        ("th4", true, Some(45)),
        ("th5", true, Some(121)),
        ("th6", true, Some(320)),
        ("twist1", true, Some(5)),
        ("twist2", true, Some(9)),
        ("twist3", true, Some(13)),
        ("twist4", true, Some(17)),
        ("twist5", true, Some(21)),
        ("sum_t2_2_t2_3", false, Some(6)),
        ("sum_t2_3_t2_3", false, Some(9)),
        ("sum_t2_3_mirror", false, Some(9)),
        ("sum_t2_3_th2", false, Some(15)),
        ("sum_th2_th2", false, Some(25)),
        ("sum_t2_5_th2", false, Some(25)),
        ("sum_twist2_t2_3", false, Some(27)),
    ]
}

/// Hyperbolic volumes of bundled knots, with their source.
pub const VOLUMES: &[(&str, f64, &str)] = &[
    ("th2.pd", 2.029_883_212_819_307, "figure-eight exterior, SnapPy census manifold m004"),
    ("twist1.pd", 2.029_883_212_819_307, "figure-eight exterior, SnapPy census manifold m004"),
    ("twist2.pd", 3.163_963_228_883_143, "6_1 exterior, SnapPy knot table"),
    ("twist3.pd", 3.427_205_246_274_8, "8_1 exterior, SnapPy knot table"),
];

/// Every `*.pd` file in `dir`, sorted by name. Nothing is assumed about them.
pub fn load_dir(dir: &Path) -> std::io::Result<Vec<CorpusEntry>> {
    let mut out = Vec::new();
    for entry in std::fs::read_dir(dir)? {
        let path = entry?.path();
        if path.extension().is_some_and(|e| e == "pd") {
            out.push(CorpusEntry {
                name: path.file_name().unwrap_or_default().to_string_lossy().into_owned(),
                text: std::fs::read_to_string(&path)?,
                prime: false,
                expected_det: None,
            });
        }
    }
    out.sort_by(|a, b| a.name.cmp(&b.name));
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check { name: name.into(), passed, detail: detail.into() }
    }
}

/// Largest diagram checked under `quick`.
pub const QUICK_CROSSINGS: usize = 8;

fn diagram_checks(name: &str, d: &LinkDiagram, e: &CorpusEntry, out: &mut Vec<Check>) {
    let det = determinant(d);
    if let Some(x) = e.expected_det {
        out.push(Check::new(format!("{name}: determinant"), det == BigUint::from(x), format!("{det}, expected {x}")));
    }
    if d.crossing_count() > 0 && d.is_connected() {
        let faces = d.faces().len();
        out.push(Check::new(
            format!("{name}: faces"),
            faces == d.crossing_count() + 2,
            format!("{faces} faces, {} crossings", d.crossing_count()),
        ));
        match alexander_minus_one_oracle(d) {
            Ok(o) => out.push(Check::new(format!("{name}: coloring oracle"), o == det, format!("{o} vs {det}"))),
            Err(err) => out.push(Check::new(format!("{name}: coloring oracle"), false, err.to_string())),
        }
        let black = goeritz_matrix(d, Shade::Black).and_then(|g| g.determinant()).map(|x| x.magnitude().clone());
        out.push(Check::new(
            format!("{name}: both checkerboard colours"),
            black.as_ref() == Ok(&det),
            format!("{black:?} vs {det}"),
        ));
    }
    let mirrored = determinant(&d.mirror());
    out.push(Check::new(format!("{name}: mirror"), mirrored == det, format!("{mirrored} vs {det}")));
    let reparsed = parse_pd(&d.to_pd_string()).map(|r| determinant(&r));
    out.push(Check::new(format!("{name}: text round trip"), reparsed.as_ref() == Ok(&det), format!("{reparsed:?}")));
    let volume = VOLUMES.iter().find(|v| v.0 == name).map(|&(_, value, source)| VolumeInput {
        value,
        source: source.to_string(),
        tolerance: 1e-4,
    });
    let opts = ReportOptions { assume_prime: e.prime, include_asymptotic: false, volume };
    match report_diagram(name, d, e.prime, &opts) {
        Ok(r) => {
            out.push(Check::new(format!("{name}: bounds consistent"), true, format!("{:?}", r.interval)));
            if let (Some(a), Some(b)) = (r.bound("alternating_crn_lower"), r.bound("det_lower")) {
                out.push(Check::new(
                    format!("{name}: crossing bound below determinant bound"),
                    a.value <= b.value,
                    format!("{} vs {}", a.value, b.value),
                ));
            }
        }
        Err(err) => out.push(Check::new(format!("{name}: bounds consistent"), false, err.to_string())),
    }
}

/// Checks for one corpus file. A file that does not parse fails by name.
pub fn check_entry(e: &CorpusEntry, quick: bool) -> Vec<Check> {
    let mut out = Vec::new();
    match parse_pd(&e.text) {
        Err(err) => out.push(Check::new(format!("{}: parse", e.name), false, err.to_string())),
        Ok(d) if quick && d.crossing_count() > QUICK_CROSSINGS => {}
        Ok(d) => diagram_checks(&e.name, &d, e, &mut out),
    }
    out
}

/// Closed forms of the families against their diagrams.
pub fn family_checks(quick: bool) -> Vec<Check> {
    let mut out = Vec::new();
    let qmax = if quick { 7 } else { 15 };
    for q in 3..=qmax {
        let d = FamilySpec::Torus(2, q).diagram().ok().flatten();
        let det = d.as_ref().map(determinant);
        out.push(Check::new(format!("T(2,{q}) determinant"), det == Some(BigUint::from(q)), format!("{det:?}")));
    }
    let nmax = if quick { 3 } else { 8 };
    for n in 1..=nmax {
        let r = twist_knot(n).map(|d| (determinant(&d), d.twist_number().ok()));
        out.push(Check::new(
            format!("twist({n}) determinant and twist number"),
            r.as_ref().is_ok_and(|(det, tw)| *det == BigUint::from(4 * n + 1) && *tw == Some(2)),
            format!("{r:?}"),
        ));
    }
    let fmax = if quick { 16 } else { 40 };
    for n in (4..=fmax).filter(|n| fib_torus(*n).is_ok_and(|f| f.valid)) {
        match fib_chain(n) {
            Ok(c) => out.push(Check::new(
                format!("fib({n}) chain"),
                c.crn_formula_agrees && c.displayed_lower_holds && c.log2_relation_holds,
                format!("crn {} upper {} det {} lower {}", c.crn, c.upper, c.det, c.lower),
            )),
            Err(err) => out.push(Check::new(format!("fib({n}) chain"), false, err.to_string())),
        }
    }
    let log2_ok = (1..=FIB_MAX).all(|n| fib_log2_relation_holds(&fibonacci(n), n));
    out.push(Check::new("Fibonacci log2 relation", log2_ok, format!("n <= {FIB_MAX}")));
    let limit: u64 = if quick { 10_000 } else { 1_000_000 };
    let log5_ok = (1..=limit).all(|x| {
        let k = strict_log5_lower(&BigUint::from(x)).value as u32;
        5u64.pow(k + 1) > x && (k == 0 || 5u64.pow(k) <= x)
    });
    out.push(Check::new("strict log5 bound", log5_ok, format!("x <= {limit}")));
    let at = volume_lower_bound(2.0 * V3, 1e-9);
    out.push(Check::new(
        "volume at an exact multiple",
        at.as_ref().is_ok_and(|v| v.value == 3 && v.boundary),
        format!("{at:?}"),
    ));
    out
}

/// Corpus checks followed by the family checks.
pub fn selftest(entries: &[CorpusEntry], quick: bool) -> Vec<Check> {
    let mut out: Vec<Check> = entries.iter().flat_map(|e| check_entry(e, quick)).collect();
    out.extend(family_checks(quick));
    out
}
