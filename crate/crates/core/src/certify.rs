//! Unknot certificates for banded diagrams and family-wide verification reports.

use std::fmt::Write as _;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::diagram::{Orientation, PlanarDiagram};
use crate::error::InvariantError;
use crate::family::{
    build_pattern, build_satellite, family_band, predict_components, winding_per_mark, FamilyParams,
};
use crate::invariants::{alexander, dbc_homology, determinant, jones, DEFAULT_BRACKET_CUTOFF};
use crate::simplify::{replay, simplify, Move, SearchBudget};
use crate::surgery::apply_band;
use crate::tangle::{fraction_of_tangle, h1_fraction, h1_word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    ReducedToZero,
    InvariantEvidence,
    NontrivialWitness,
    Inconclusive,
}

impl Verdict {
    pub fn is_trivial(self) -> bool {
        matches!(self, Verdict::ReducedToZero | Verdict::InvariantEvidence)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Evidence {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub determinant: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alexander: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub jones: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct UnknotCertificate {
    pub verdict: Verdict,
    pub crossings: usize,
    pub simplified_crossings: usize,
    pub move_trace: Vec<Move>,
    pub evidence: Evidence,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl UnknotCertificate {
    /// Replays the move trace from `d`; true when a ReducedToZero trace ends crossingless.
    pub fn check_trace(&self, d: &PlanarDiagram) -> bool {
        self.verdict == Verdict::ReducedToZero
            && replay(d, &self.move_trace).is_ok_and(|e| e.crossing_count() == 0)
    }
}

/// Simplifies `d`; without a full reduction, looks for a nontrivial invariant.
pub fn certify_unknot(
    d: &PlanarDiagram,
    budget: &SearchBudget,
    bracket_cutoff: usize,
) -> Result<UnknotCertificate, InvariantError> {
    let k = d.count_components()?;
    if k != 1 {
        return Err(InvariantError::NotAKnot(k));
    }
    let s = simplify(d, budget)?;
    let mut cert = UnknotCertificate {
        verdict: Verdict::Inconclusive,
        crossings: d.crossing_count(),
        simplified_crossings: s.diagram.crossing_count(),
        move_trace: Vec::new(),
        evidence: Evidence::default(),
        witness: None,
    };
    if s.diagram.crossing_count() == 0 {
        cert.verdict = Verdict::ReducedToZero;
        cert.move_trace = s.trace;
        return Ok(cert);
    }
    let e = &s.diagram;
    let det = determinant(e)?;
    cert.evidence.determinant = Some(det.to_string());
    if !det.is_one() {
        cert.verdict = Verdict::NontrivialWitness;
        cert.witness = Some(format!("determinant {det}"));
        return Ok(cert);
    }
    let a = alexander(e)?;
    cert.evidence.alexander = Some(a.to_string());
    if !a.is_one() {
        cert.verdict = Verdict::NontrivialWitness;
        cert.witness = Some(format!("alexander {a}"));
        return Ok(cert);
    }
    match jones(e, &Orientation::default(), bracket_cutoff) {
        Ok(j) => {
            cert.evidence.jones = Some(j.to_string());
            if !j.is_one() {
                cert.verdict = Verdict::NontrivialWitness;
                cert.witness = Some(format!("jones {j}"));
                return Ok(cert);
            }
        }
        Err(InvariantError::TooLarge { .. }) => {}
        Err(err) => return Err(err),
    }
    cert.verdict = Verdict::InvariantEvidence;
    Ok(cert)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub status: Status,
    pub detail: String,
}

impl Check {
    fn of(ok: bool, detail: String) -> Self {
        Self { status: if ok { Status::Pass } else { Status::Fail }, detail }
    }

    fn skipped(detail: &str) -> Self {
        Self { status: Status::Skipped, detail: detail.into() }
    }

    pub fn failed(&self) -> bool {
        self.status == Status::Fail
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct KbCheck {
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<Verdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<UnknotCertificate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub homology: Option<String>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Checks {
    pub parity: Check,
    pub winding: Check,
    pub fraction: Check,
    pub k_nontrivial: Check,
    pub kb_trivial: KbCheck,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TupleRecord {
    pub params: FamilyParams,
    pub components: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub winding: Option<i64>,
    pub checks: Checks,
    pub ms: u64,
}

impl TupleRecord {
    pub fn passed(&self) -> bool {
        let c = &self.checks;
        ![&c.parity, &c.winding, &c.fraction, &c.k_nontrivial].iter().any(|x| x.failed())
            && c.kb_trivial.status != Status::Fail
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct FamilyReport {
    pub tuples: Vec<TupleRecord>,
}

impl FamilyReport {
    pub fn all_pass(&self) -> bool {
        self.tuples.iter().all(|t| t.passed())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_table(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "{:<16} {:>5} {:>7}  {:<7} {:<7} {:<8} {:<11} {:<18} {:>8}",
            "(m,n,p;q)", "comp", "winding", "parity", "winding", "fraction", "K nontriv", "K_b", "ms"
        );
        for t in &self.tuples {
            let c = &t.checks;
            let kb = match (c.kb_trivial.status, c.kb_trivial.verdict) {
                (_, Some(v)) => format!("{v:?}"),
                (Status::Skipped, None) => "skipped".to_string(),
                _ => "fail".to_string(),
            };
            let _ = writeln!(
                s,
                "{:<16} {:>5} {:>7}  {:<7} {:<7} {:<8} {:<11} {:<18} {:>8}",
                t.params.to_string(),
                t.components,
                t.winding.map_or("-".to_string(), |w| w.to_string()),
                status_word(c.parity.status),
                status_word(c.winding.status),
                status_word(c.fraction.status),
                status_word(c.k_nontrivial.status),
                kb,
                t.ms
            );
        }
        let pass = self.tuples.iter().filter(|t| t.passed()).count();
        let _ = writeln!(s, "{pass}/{} tuples pass", self.tuples.len());
        s
    }
}

fn status_word(s: Status) -> &'static str {
    match s {
        Status::Pass => "pass",
        Status::Fail => "FAIL",
        Status::Skipped => "skip",
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Grid {
    pub m: Vec<i64>,
    pub n: Vec<i64>,
    pub p: Vec<i64>,
    pub q: Vec<i64>,
}

impl Grid {
    /// Parses `"m=-2..2,n=-2..2,p=-2..2,q=3,5"`: each key takes ranges `a..b` (inclusive)
    /// and single values; a bare value continues the previous key.
    pub fn parse(s: &str) -> Result<Self, String> {
        let mut g = Grid { m: vec![], n: vec![], p: vec![], q: vec![] };
        let mut key: Option<char> = None;
        for tok in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let value = match tok.split_once('=') {
                Some((k, v)) => {
                    let k = k.trim();
                    key = match k {
                        "m" | "n" | "p" | "q" => k.chars().next(),
                        _ => return Err(format!("unknown grid key '{k}'")),
                    };
                    v.trim()
                }
                None => tok,
            };
            let Some(k) = key else {
                return Err(format!("value '{tok}' before any key"));
            };
            let vals: Vec<i64> = match value.split_once("..") {
                Some((a, b)) => {
                    let a: i64 = a.trim().parse().map_err(|_| format!("bad number in '{tok}'"))?;
                    let b: i64 = b.trim().parse().map_err(|_| format!("bad number in '{tok}'"))?;
                    (a..=b).collect()
                }
                None => vec![value.parse().map_err(|_| format!("bad number in '{tok}'"))?],
            };
            let slot = match k {
                'm' => &mut g.m,
                'n' => &mut g.n,
                'p' => &mut g.p,
                _ => &mut g.q,
            };
            slot.extend(vals);
        }
        for (name, v) in [("m", &g.m), ("n", &g.n), ("p", &g.p), ("q", &g.q)] {
            if v.is_empty() {
                return Err(format!("grid has no values for {name}"));
            }
        }
        Ok(g)
    }

    /// Valid parameter tuples in `q, m, n, p` order; invalid combinations are left out.
    pub fn tuples(&self) -> Vec<FamilyParams> {
        let mut out = Vec::new();
        for &q in &self.q {
            for &m in &self.m {
                for &n in &self.n {
                    for &p in &self.p {
                        if let Ok(f) = FamilyParams::new(m, n, p, q) {
                            out.push(f);
                        }
                    }
                }
            }
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VerifyOptions {
    pub budget: SearchBudget,
    pub bracket_cutoff: usize,
    pub jobs: Option<usize>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self { budget: SearchBudget::default(), bracket_cutoff: DEFAULT_BRACKET_CUTOFF, jobs: None }
    }
}

/// Expected absolute winding number of a knotted pattern.
pub fn expected_winding(m: i64, n: i64, p: i64) -> i64 {
    if m % 2 != 0 && n % 2 != 0 && p % 2 == 0 {
        3
    } else {
        1
    }
}

/// Runs every check for each tuple; failures are recorded, not raised.
pub fn verify_family(tuples: &[FamilyParams], opts: &VerifyOptions) -> FamilyReport {
    let run = || tuples.par_iter().map(|t| verify_tuple(t, opts)).collect::<Vec<_>>();
    let records = match opts.jobs {
        Some(j) => match rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build() {
            Ok(pool) => pool.install(run),
            Err(_) => run(),
        },
        None => run(),
    };
    FamilyReport { tuples: records }
}

pub fn verify_tuple(t: &FamilyParams, opts: &VerifyOptions) -> TupleRecord {
    let start = Instant::now();
    let (mut components, mut winding) = (0, None);

    let parity = match build_pattern(t) {
        Ok(pat) => match pat.diagram.count_components() {
            Ok(c) => {
                components = c;
                let predicted = predict_components(t.m, t.n, t.p);
                Check::of(c == predicted, format!("{c} components, predicted {predicted}"))
            }
            Err(e) => Check::of(false, e.to_string()),
        },
        Err(e) => Check::of(false, e.to_string()),
    };
    let knot = components == 1;

    let winding_check = if !knot {
        Check::skipped("link case")
    } else {
        match build_pattern(t) {
            Ok(pat) => {
                let per_mark = winding_per_mark(&pat);
                let crossings: Vec<usize> = pat.mark_intersections();
                winding = per_mark.first().copied();
                let w = winding.unwrap_or(0);
                let expected = expected_winding(t.m, t.n, t.p);
                let ok = w.abs() == expected && per_mark.iter().all(|&x| x == w) && crossings.iter().all(|&c| c == 3);
                Check::of(ok, format!("winding {w} at every mark, expected |w| = {expected}, mark intersections {crossings:?}"))
            }
            Err(e) => Check::of(false, e.to_string()),
        }
    };

    let fraction = fraction_check(t);

    let (k_nontrivial, kb_trivial) = if !knot {
        let skip = KbCheck {
            status: Status::Skipped,
            verdict: None,
            certificate: None,
            homology: None,
            detail: "link case, band checks skipped".into(),
        };
        (Check::skipped("link case, band checks skipped"), skip)
    } else {
        band_checks(t, opts)
    };

    TupleRecord {
        params: *t,
        components,
        winding,
        checks: Checks { parity, winding: winding_check, fraction, k_nontrivial, kb_trivial },
        ms: start.elapsed().as_millis() as u64,
    }
}

/// The closed formula against the twist word, and the word's realized closures against
/// the numerator and denominator.
fn fraction_check(t: &FamilyParams) -> Check {
    let word = h1_word(t.n, t.p, t.q);
    let from_word = fraction_of_tangle(&word);
    let formula = match h1_fraction(t.n, t.p, t.q) {
        Ok(f) => f,
        Err(e) => return Check::of(false, e.to_string()),
    };
    let num = determinant(&word.numerator_closure());
    let den = determinant(&word.denominator_closure());
    let closures_ok = match (num, den) {
        (Ok(a), Ok(b)) => a == BigInt::from(formula.num().abs()) && b == BigInt::from(formula.den().abs()),
        _ => false,
    };
    Check::of(
        from_word == formula && closures_ok,
        format!("formula {formula}, word {} gives {from_word}", word.word_string()),
    )
}

fn band_checks(t: &FamilyParams, opts: &VerifyOptions) -> (Check, KbCheck) {
    let fail = |detail: String| KbCheck { status: Status::Fail, verdict: None, certificate: None, homology: None, detail };
    let sat = match build_satellite(t) {
        Ok(s) => s,
        Err(e) => return (Check::of(false, e.to_string()), fail(e.to_string())),
    };
    let k_nontrivial = match determinant(&sat) {
        Ok(det) if !det.is_one() => {
            let divisible = (&det % BigInt::from(t.q.abs())).is_zero();
            Check::of(true, format!("determinant {det}; divisible by |q|: {divisible}"))
        }
        Ok(det) => match alexander(&sat) {
            Ok(a) if !a.is_one() => Check::of(true, format!("determinant {det}, alexander {a}")),
            Ok(_) => Check::of(false, "determinant and alexander both trivial".into()),
            Err(e) => Check::of(false, e.to_string()),
        },
        Err(e) => Check::of(false, e.to_string()),
    };
    let band = match family_band(t) {
        Ok(b) => b,
        Err(e) => return (k_nontrivial, fail(e.to_string())),
    };
    let kb = match apply_band(&sat, &band) {
        Ok(k) => k,
        Err(e) => return (k_nontrivial, fail(e.to_string())),
    };
    let cert = match certify_unknot(&kb, &opts.budget, opts.bracket_cutoff) {
        Ok(c) => c,
        Err(e) => return (k_nontrivial, fail(e.to_string())),
    };
    let homology = dbc_homology(&kb).map(|h| h.to_string());
    let hom_ok = homology.as_ref().is_ok_and(|h| h == "0");
    let trace_ok = cert.verdict != Verdict::ReducedToZero || cert.check_trace(&kb);
    let ok = cert.verdict.is_trivial() && hom_ok && trace_ok;
    let detail = format!(
        "{} crossings -> {} after simplification; branched double cover homology {}",
        cert.crossings,
        cert.simplified_crossings,
        homology.as_deref().unwrap_or("unavailable")
    );
    let kb_check = KbCheck {
        status: if ok { Status::Pass } else { Status::Fail },
        verdict: Some(cert.verdict),
        homology: homology.ok(),
        certificate: Some(cert),
        detail,
    };
    (k_nontrivial, kb_check)
}
