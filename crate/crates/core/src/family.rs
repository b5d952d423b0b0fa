//! The pattern knots K'(m,n,p;q) in a solid torus, their satellites along the (2, -q)
//! torus knot, the family band, and the pattern with N twist-box pairs.

use serde::{Deserialize, Serialize};

use crate::diagram::{Orientation, PlanarDiagram};
use crate::error::{DiagramError, ParamError};
use crate::morse::{Built, Closure, Event, Morse, ProbeRecord};
use crate::surgery::{Attachment, BandSpec, Side};
use crate::tangle::{h1_word, integer_tangle, RationalTangle};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FamilyParams {
    pub m: i64,
    pub n: i64,
    pub p: i64,
    pub q: i64,
}

fn check_q(q: i64) -> Result<(), ParamError> {
    if q % 2 == 0 {
        return Err(ParamError::QEven);
    }
    if q.abs() < 3 {
        return Err(ParamError::QSmall);
    }
    Ok(())
}

impl FamilyParams {
    pub fn new(m: i64, n: i64, p: i64, q: i64) -> Result<Self, ParamError> {
        let f = Self { m, n, p, q };
        f.validate()?;
        Ok(f)
    }

    pub fn validate(&self) -> Result<(), ParamError> {
        if self.m == 0 {
            return Err(ParamError::MZero);
        }
        if self.n == 0 {
            return Err(ParamError::NZero);
        }
        check_q(self.q)
    }

    pub fn is_knot(&self) -> bool {
        predict_components(self.m, self.n, self.p) == 1
    }
}

impl std::fmt::Display for FamilyParams {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{},{};{})", self.m, self.n, self.p, self.q)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GeneralizedParams {
    pub a: Vec<i64>,
    pub p: i64,
    pub q: i64,
}

impl GeneralizedParams {
    pub fn new(a: Vec<i64>, p: i64, q: i64) -> Result<Self, ParamError> {
        let g = Self { a, p, q };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<(), ParamError> {
        if self.a.is_empty() {
            return Err(ParamError::NEmpty);
        }
        if let Some(i) = self.a.iter().position(|&x| x == 0) {
            return Err(ParamError::AZero(i + 1));
        }
        if self.a.len() % 2 == 1 {
            return Err(ParamError::NOdd(self.a.len()));
        }
        check_q(self.q)
    }
}

/// A pattern in the standard solid torus: the closed strand column with its meridian
/// marks (horizontal cross-sections of the column) and the column's boundary lines.
#[derive(Clone, Debug, PartialEq)]
pub struct PatternDiagram {
    pub diagram: PlanarDiagram,
    pub meridian_marks: Vec<ProbeRecord>,
    pub seam: Vec<[[f64; 2]; 2]>,
}

impl PatternDiagram {
    /// Number of strands crossing each meridian mark.
    pub fn mark_intersections(&self) -> Vec<usize> {
        self.meridian_marks.iter().map(|m| m.strands.len()).collect()
    }
}

/// The pattern is a knot in exactly the four parity cases.
pub fn predict_components(m: i64, n: i64, p: i64) -> usize {
    let (mo, no, pe) = (m % 2 != 0, n % 2 != 0, p % 2 == 0);
    let knot = (mo && no && pe) || (mo && !no && pe) || (!mo && no && pe) || (!mo && !no && pe);
    if knot {
        1
    } else {
        2
    }
}

/// A 2-tangle dropped into a width-`width` column at `offset`, inside a labelled box.
fn region(tangle: &Morse, offset: usize, width: usize, label: String) -> Morse {
    let mut m = Morse::new(width);
    m.push(Event::BoxOpen { label, lo: offset, width: 2 });
    m.append_at(tangle, offset);
    m.push(Event::BoxClose);
    m
}

/// The regions met on the first and second passes of the pattern through the column.
fn pattern_laps(a: &[i64], p: i64, q: i64) -> (Vec<Morse>, Vec<Morse>) {
    let big_n = a.len();
    let width = big_n + 1;
    let mut lap1 = Vec::with_capacity(big_n);
    let mut lap2 = Vec::with_capacity(big_n);
    for i in 1..=big_n {
        let k = a[big_n - i];
        let first = if i == 1 {
            let label = format!("[{p}] [{q}] [{k}]");
            region(&h1_word(k, p, q).morse(), 0, width, label)
        } else {
            region(&integer_tangle(k), i - 1, width, format!("[{k}]"))
        };
        lap1.push(first);
        lap2.push(region(&integer_tangle(-k), i - 1, width, format!("[{}]", -k)));
    }
    (lap1, lap2)
}

fn pattern_morse(a: &[i64], p: i64, q: i64) -> Morse {
    let (lap1, lap2) = pattern_laps(a, p, q);
    let mut m = Morse::new(a.len() + 1);
    for (i, r) in lap1.iter().chain(lap2.iter()).enumerate() {
        m.push(Event::Probe { name: format!("D{}", i + 1) });
        m.append_at(r, 0);
    }
    m
}

fn pattern_from(m: &Morse) -> PatternDiagram {
    let Built { mut diagram, probes } = m.build(Closure::Braid);
    let top = probes.iter().map(|p| p.y).fold(0.0, f64::max) + (m.events.len() as f64).max(1.0);
    let right = m.width_in as f64 - 0.5;
    let seam = vec![[[-0.5, 0.0], [-0.5, top]], [[right, 0.0], [right, top]]];
    if let Some(g) = diagram.geometry.as_mut() {
        g.seams = seam.clone();
    }
    PatternDiagram { diagram, meridian_marks: probes, seam }
}

/// The twist boxes [p], [q], [n] (one rational region), [m], [-n], [-m]
/// on three strands, closed around the solid torus.
pub fn build_pattern(params: &FamilyParams) -> Result<PatternDiagram, ParamError> {
    params.validate()?;
    Ok(pattern_from(&pattern_morse(&[params.m, params.n], params.p, params.q)))
}

/// N twist-box pairs on N + 1 strands.
pub fn build_generalized(params: &GeneralizedParams) -> Result<PatternDiagram, ParamError> {
    params.validate()?;
    Ok(pattern_from(&pattern_morse(&params.a, params.p, params.q)))
}

/// Crossings of the pattern diagram: `2|m| + 2|n| + |p| + |q|`.
pub fn pattern_crossings(params: &FamilyParams) -> usize {
    (2 * params.m.abs() + 2 * params.n.abs() + params.p.abs() + params.q.abs()) as usize
}

/// Signed count of strands crossing the first meridian mark upwards.
pub fn winding_number(pat: &PatternDiagram, o: &Orientation) -> Result<i64, DiagramError> {
    let k = pat.diagram.count_components()?;
    if k != 1 {
        return Err(DiagramError::NotAKnot(k));
    }
    let mark = pat.meridian_marks.first().ok_or(DiagramError::NoGeometry)?;
    let w: i64 = mark.strands.iter().map(|s| if s.up { 1 } else { -1 }).sum();
    Ok(if o.is_reversed(0) { -w } else { w })
}

/// Signed counts at every mark.
pub fn winding_per_mark(pat: &PatternDiagram) -> Vec<i64> {
    pat.meridian_marks
        .iter()
        .map(|m| m.strands.iter().map(|s| if s.up { 1 } else { -1 }).sum())
        .collect()
}

/// Half twist of three strands, `σ1 σ2 σ1` with the given crossing type.
fn half_twist(m: &mut Morse, lo: usize, slash_over: bool) {
    for pos in [lo, lo + 1, lo] {
        m.push(Event::Cross { pos, slash_over });
    }
}

pub const BAND_PROBE: &str = "band";

/// Strip of two parallel 3-strand ribbons carrying the pattern, then `|q|` layers of a
/// ribbon crossing plus one half twist on each ribbon (the framing correction).
fn satellite_morse(params: &FamilyParams) -> Morse {
    let (lap1, lap2) = pattern_laps(&[params.m, params.n], params.p, params.q);
    let mut m = Morse::new(6);
    for (left, right) in lap1.iter().zip(lap2.iter()) {
        m.append_at(left, 0);
        m.append_turned(right, 3);
    }
    m.push(Event::Probe { name: BAND_PROBE.into() });
    // companion crossings are negative for q > 0
    let slash = params.q < 0;
    for _ in 0..params.q.abs() {
        for s in 0..3 {
            for k in (0..3).rev() {
                m.push(Event::Cross { pos: s + k, slash_over: slash });
            }
        }
        half_twist(&mut m, 0, slash);
        half_twist(&mut m, 3, slash);
    }
    m
}

/// A satellite diagram together with the level where the family band sits.
#[derive(Clone, Debug, PartialEq)]
pub struct SatelliteDiagram {
    pub diagram: PlanarDiagram,
    pub band_level: ProbeRecord,
}

/// 9|q| ribbon crossings, 6|q| framing crossings and the pattern.
pub fn build_satellite(params: &FamilyParams) -> Result<PlanarDiagram, ParamError> {
    Ok(build_satellite_with_band_level(params)?.diagram)
}

pub fn build_satellite_with_band_level(params: &FamilyParams) -> Result<SatelliteDiagram, ParamError> {
    params.validate()?;
    if !params.is_knot() {
        return Err(ParamError::PatternIsLink);
    }
    let Built { mut diagram, probes } = satellite_morse(params).build(Closure::Braid);
    let band_level = probes.into_iter().find(|p| p.name == BAND_PROBE).expect("band probe");
    if let Some(g) = diagram.geometry.as_mut() {
        let y = band_level.y;
        g.seams = vec![[[2.4, 0.0], [2.4, y + 0.5]], [[2.6, 0.0], [2.6, y + 0.5]]];
        g.band_core = Some(vec![[2.0, y], [3.0, y]]);
    }
    Ok(SatelliteDiagram { diagram, band_level })
}

/// A flat band joining the inner strands of the two ribbons just above the
/// pattern regions.
pub fn family_band(params: &FamilyParams) -> Result<BandSpec, ParamError> {
    let sat = build_satellite_with_band_level(params)?;
    Ok(band_at_level(&sat.band_level))
}

fn band_at_level(level: &ProbeRecord) -> BandSpec {
    let at = |pos: usize, east: bool| {
        let s = level.strands.iter().find(|s| s.pos == pos).expect("strand at band level");
        let side = if s.up == east { Side::Right } else { Side::Left };
        Attachment::arc(s.arc, s.along, side)
    };
    BandSpec { attach_a: at(2, true), attach_b: at(3, false), path: Vec::new(), half_twists: 0 }
}

/// Companion: closure of the 2-braid with `q` negative crossings.
pub fn companion(q: i64) -> PlanarDiagram {
    let mut m = Morse::new(2);
    for _ in 0..q.abs() {
        m.push(Event::Cross { pos: 0, slash_over: q < 0 });
    }
    m.build(Closure::Braid).diagram
}

/// The pattern closed in the standard solid torus after adding the `-2q` full twists
/// that match the satellite's framing; this closed knot enters the satellite formula.
pub fn framed_pattern_closure(params: &FamilyParams) -> Result<PlanarDiagram, ParamError> {
    params.validate()?;
    let mut m = pattern_morse(&[params.m, params.n], params.p, params.q);
    for _ in 0..4 * params.q.abs() {
        half_twist(&mut m, 0, params.q < 0);
    }
    Ok(m.build(Closure::Braid).diagram)
}

/// The rational tangle of the first region.
pub fn first_region_tangle(params: &FamilyParams) -> RationalTangle {
    h1_word(params.n, params.p, params.q)
}
