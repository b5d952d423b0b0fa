//! Planar diagrams as PD codes: parsing, validation, orientation, components, writhe.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::DiagramError;

/// Four arc labels counterclockwise, starting at the incoming under-strand.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Crossing {
    pub arcs: [u32; 4],
}

/// Crossing sign convention. Looking along the under-strand (slot 0 to slot 2), a
/// positive crossing has the over-strand travelling from slot 3 to slot 1, i.e. from
/// right to left: `(over direction x under direction)` points towards the viewer.
pub const POSITIVE_OVER_ENTRY_SLOT: usize = 3;
pub const NEGATIVE_OVER_ENTRY_SLOT: usize = 1;

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Mark {
    pub name: String,
    pub y: f64,
    pub x0: f64,
    pub x1: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct BoxLabel {
    pub label: String,
    pub x0: f64,
    pub y0: f64,
    pub x1: f64,
    pub y1: f64,
}

/// Drawing data carried by template-built diagrams. Polylines follow arc direction.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Geometry {
    pub arcs: BTreeMap<u32, Vec<[f64; 2]>>,
    pub loops: Vec<Vec<[f64; 2]>>,
    pub crossings: Vec<[f64; 2]>,
    pub marks: Vec<Mark>,
    pub seams: Vec<[[f64; 2]; 2]>,
    pub boxes: Vec<BoxLabel>,
    pub band_core: Option<Vec<[f64; 2]>>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PlanarDiagram {
    pub crossings: Vec<Crossing>,
    pub loops: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub geometry: Option<Geometry>,
}

/// One endpoint of an arc: crossing index and slot.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Port {
    pub crossing: usize,
    pub slot: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ArcEnds {
    pub tail: Port,
    pub head: Port,
}

/// Oriented combinatorics of a valid diagram.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Structure {
    pub arcs: BTreeMap<u32, ArcEnds>,
    /// Arc labels of each crossing-bearing component in traversal order.
    pub components: Vec<Vec<u32>>,
    /// Slot (1 or 3) at which the over-strand enters each crossing.
    pub over_entry: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub kind: String,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Per-component direction choice: `true` reverses the component's default direction.
/// Components are indexed as in [`Structure::components`]; free loops need no choice.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Orientation {
    pub reversed: Vec<bool>,
}

impl Orientation {
    pub fn is_reversed(&self, component: usize) -> bool {
        self.reversed.get(component).copied().unwrap_or(false)
    }
}

impl PlanarDiagram {
    pub fn new(crossings: Vec<[u32; 4]>, loops: usize) -> Self {
        Self {
            crossings: crossings.into_iter().map(|arcs| Crossing { arcs }).collect(),
            loops,
            geometry: None,
        }
    }

    /// `loops` crossingless circles.
    pub fn unlink(loops: usize) -> Self {
        Self::new(vec![], loops)
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn arc_count(&self) -> usize {
        self.crossings.len() * 2
    }

    fn positions(&self) -> BTreeMap<u32, Vec<Port>> {
        let mut pos: BTreeMap<u32, Vec<Port>> = BTreeMap::new();
        for (c, x) in self.crossings.iter().enumerate() {
            for (s, &a) in x.arcs.iter().enumerate() {
                pos.entry(a).or_default().push(Port { crossing: c, slot: s });
            }
        }
        pos
    }

    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        let pos = self.positions();
        for (a, ps) in &pos {
            if *a == 0 {
                violations.push(Violation { kind: "arc label".into(), detail: "arc labels must be positive".into() });
            }
            if ps.len() != 2 {
                violations.push(Violation {
                    kind: "arc multiplicity".into(),
                    detail: format!("arc {a} appears {} times, expected 2", ps.len()),
                });
            }
        }
        if violations.is_empty() {
            if let Err(e) = self.structure() {
                violations.push(Violation { kind: "traversal".into(), detail: e.to_string() });
            }
        }
        ValidationReport { violations }
    }

    /// Orients every component and records arc endpoints.
    pub fn structure(&self) -> Result<Structure, DiagramError> {
        let pos = self.positions();
        let n = self.crossings.len();
        let mut other = vec![usize::MAX; 4 * n];
        for (a, ps) in &pos {
            if ps.len() != 2 {
                return Err(DiagramError::ArcMultiplicity { arc: *a, count: ps.len() });
            }
            let (p, q) = (ps[0].crossing * 4 + ps[0].slot, ps[1].crossing * 4 + ps[1].slot);
            other[p] = q;
            other[q] = p;
        }
        let label = |p: usize| self.crossings[p / 4].arcs[p % 4];
        let pass = |p: usize| (p & !3) | ((p + 2) & 3);

        // arrival ports of each cycle, in traversal order
        let mut seen = vec![false; 4 * n];
        let mut cycles: Vec<Vec<usize>> = Vec::new();
        for start in 0..4 * n {
            if seen[start] {
                continue;
            }
            let mut cyc = Vec::new();
            let mut p = start;
            loop {
                seen[p] = true;
                seen[pass(p)] = true;
                cyc.push(p);
                p = other[pass(p)];
                if p == start {
                    break;
                }
                if seen[p] {
                    return Err(DiagramError::Traversal("strand traversal revisits a slot".into()));
                }
            }
            cycles.push(cyc);
        }

        let mut arcs = BTreeMap::new();
        let mut components = Vec::new();
        let mut over_entry = vec![0usize; n];
        for cyc in cycles {
            let (mut fwd, mut bwd) = (0, 0);
            for &p in &cyc {
                match p % 4 {
                    0 => fwd += 1,
                    2 => bwd += 1,
                    _ => {}
                }
            }
            if fwd > 0 && bwd > 0 {
                return Err(DiagramError::Traversal(format!(
                    "component through arc {} enters under-crossings from both ends",
                    label(cyc[0])
                )));
            }
            let forward = if fwd + bwd > 0 {
                fwd > 0
            } else {
                // only over-crossings: follow increasing labels from the smallest arc
                let lo = cyc.iter().map(|&p| label(p)).min().unwrap();
                let p = cyc.iter().copied().find(|&p| label(p) == lo).unwrap();
                label(pass(p)) == lo + 1
            };
            let arrivals: Vec<usize> = if forward {
                cyc
            } else {
                // reversed traversal arrives at the pass-through ports, in reverse order
                cyc.iter().rev().map(|&p| pass(p)).collect()
            };
            let mut comp = Vec::with_capacity(arrivals.len());
            for (i, &p) in arrivals.iter().enumerate() {
                let dep = pass(p);
                let next = arrivals[(i + 1) % arrivals.len()];
                let a = label(dep);
                arcs.insert(
                    a,
                    ArcEnds {
                        tail: Port { crossing: dep / 4, slot: dep % 4 },
                        head: Port { crossing: next / 4, slot: next % 4 },
                    },
                );
                comp.push(a);
                if p % 2 == 1 {
                    over_entry[p / 4] = p % 4;
                }
            }
            components.push(comp);
        }
        // order components by their smallest arc label
        components.sort_by_key(|c| *c.iter().min().unwrap());
        for c in &mut components {
            let k = c.iter().enumerate().min_by_key(|(_, a)| **a).map(|(i, _)| i).unwrap();
            c.rotate_left(k);
        }
        Ok(Structure { arcs, components, over_entry })
    }

    /// Number of link components, free loops included.
    pub fn count_components(&self) -> Result<usize, DiagramError> {
        Ok(self.structure()?.components.len() + self.loops)
    }

    /// Crossing signs in the default orientation.
    pub fn signs(&self) -> Result<Vec<i32>, DiagramError> {
        self.signs_oriented(&Orientation::default())
    }

    pub fn signs_oriented(&self, o: &Orientation) -> Result<Vec<i32>, DiagramError> {
        let st = self.structure()?;
        let comp_of = component_of_arcs(&st);
        Ok((0..self.crossings.len())
            .map(|c| {
                let x = &self.crossings[c].arcs;
                let under_rev = o.is_reversed(comp_of[&x[0]]);
                let over_rev = o.is_reversed(comp_of[&x[1]]);
                let base = if st.over_entry[c] == POSITIVE_OVER_ENTRY_SLOT { 1 } else { -1 };
                if under_rev != over_rev {
                    -base
                } else {
                    base
                }
            })
            .collect())
    }

    pub fn writhe(&self, o: &Orientation) -> Result<i64, DiagramError> {
        Ok(self.signs_oriented(o)?.iter().map(|&s| s as i64).sum())
    }

    /// Mirror image: every crossing changes over/under. Requires a valid diagram.
    pub fn mirror(&self) -> Self {
        let st = self.structure().expect("mirror of an invalid diagram");
        let crossings = self
            .crossings
            .iter()
            .enumerate()
            .map(|(c, x)| {
                let a = x.arcs;
                // the old over-strand becomes the under-strand; start at its incoming arc
                if st.over_entry[c] == 1 {
                    Crossing { arcs: [a[1], a[2], a[3], a[0]] }
                } else {
                    Crossing { arcs: [a[3], a[0], a[1], a[2]] }
                }
            })
            .collect();
        Self { crossings, loops: self.loops, geometry: None }
    }

    /// Signed Gauss code: `O3+` means passing over crossing 3, which is positive.
    pub fn gauss_code(&self) -> Result<String, DiagramError> {
        let st = self.structure()?;
        let signs = self.signs()?;
        let mut parts = Vec::new();
        for comp in &st.components {
            let toks: Vec<String> = comp
                .iter()
                .map(|a| {
                    let h = st.arcs[a].head;
                    let ou = if h.slot % 2 == 0 { 'U' } else { 'O' };
                    let s = if signs[h.crossing] > 0 { '+' } else { '-' };
                    format!("{ou}{}{s}", h.crossing + 1)
                })
                .collect();
            parts.push(toks.join(" "));
        }
        for _ in 0..self.loops {
            parts.push(String::new());
        }
        Ok(parts.join(" | "))
    }

    pub fn parse_pd(text: &str) -> Result<Self, DiagramError> {
        parse_pd(text)
    }

    pub fn to_pd(&self) -> String {
        let xs: Vec<String> = self
            .crossings
            .iter()
            .map(|x| format!("X({},{},{},{})", x.arcs[0], x.arcs[1], x.arcs[2], x.arcs[3]))
            .collect();
        if self.loops > 0 {
            format!("PD[{}; loops={}]", xs.join(", "), self.loops)
        } else {
            format!("PD[{}]", xs.join(", "))
        }
    }

    /// Same diagram with arcs renumbered 1.. in order of first appearance.
    pub fn relabeled(&self) -> Self {
        let mut map = BTreeMap::new();
        for x in &self.crossings {
            for a in x.arcs {
                let next = map.len() as u32 + 1;
                map.entry(a).or_insert(next);
            }
        }
        Self {
            crossings: self.crossings.iter().map(|x| Crossing { arcs: x.arcs.map(|a| map[&a]) }).collect(),
            loops: self.loops,
            geometry: None,
        }
    }
}

pub(crate) fn component_of_arcs(st: &Structure) -> BTreeMap<u32, usize> {
    let mut m = BTreeMap::new();
    for (i, c) in st.components.iter().enumerate() {
        for a in c {
            m.insert(*a, i);
        }
    }
    m
}

impl fmt::Display for PlanarDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_pd())
    }
}

fn parse_pd(text: &str) -> Result<PlanarDiagram, DiagramError> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let err = |pos: usize, msg: &str| DiagramError::Parse { pos, msg: msg.to_string() };
    let body = s
        .strip_prefix("PD[")
        .and_then(|b| b.strip_suffix(']'))
        .ok_or_else(|| err(0, "expected PD[...]"))?;
    let (xs, loops_part) = match body.split_once(';') {
        Some((a, b)) => (a, Some(b)),
        None => (body, None),
    };
    let loops = match loops_part {
        None => 0,
        Some(l) => l
            .strip_prefix("loops=")
            .and_then(|v| v.parse::<usize>().ok())
            .ok_or_else(|| err(3 + xs.len() + 1, "expected loops=<count>"))?,
    };
    let mut crossings = Vec::new();
    let mut offset = 3;
    let mut rest = xs;
    while !rest.is_empty() {
        let tok_end = rest.find(')').ok_or_else(|| err(offset, "unterminated crossing"))?;
        let tok = &rest[..=tok_end];
        let inner = tok
            .strip_prefix("X(")
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(|| err(offset, &format!("malformed token '{tok}'")))?;
        let nums: Vec<&str> = inner.split(',').collect();
        if nums.len() != 4 {
            return Err(err(offset, &format!("crossing '{tok}' has {} entries, expected 4", nums.len())));
        }
        let mut arcs = [0u32; 4];
        for (i, v) in nums.iter().enumerate() {
            arcs[i] = v
                .parse::<u32>()
                .ok()
                .filter(|&a| a > 0)
                .ok_or_else(|| err(offset, &format!("bad arc label '{v}' in '{tok}'")))?;
        }
        crossings.push(arcs);
        offset += tok.len();
        rest = &rest[tok_end + 1..];
        if let Some(r) = rest.strip_prefix(',') {
            rest = r;
            offset += 1;
        } else if !rest.is_empty() {
            return Err(err(offset, "expected ',' between crossings"));
        }
    }
    let d = PlanarDiagram::new(crossings, loops);
    let pos = d.positions();
    if let Some((a, ps)) = pos.iter().find(|(_, ps)| ps.len() != 2) {
        return Err(DiagramError::ArcMultiplicity { arc: *a, count: ps.len() });
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn left_trefoil() -> PlanarDiagram {
        // closure of three negative 2-braid crossings
        PlanarDiagram::parse_pd("PD[X(1,4,2,5), X(3,6,4,1), X(5,2,6,3)]").unwrap()
    }

    #[test]
    fn trefoil_parses() {
        let d = left_trefoil();
        assert_eq!(d.crossing_count(), 3);
        assert_eq!(d.count_components().unwrap(), 1);
        assert!(d.validate().is_valid());
    }

    #[test]
    fn empty_diagram_with_loop_is_valid() {
        let d = PlanarDiagram::unlink(1);
        assert!(d.validate().is_valid());
        assert_eq!(d.count_components().unwrap(), 1);
        assert_eq!(d.writhe(&Orientation::default()).unwrap(), 0);
    }

    #[test]
    fn arc_multiplicity_violation() {
        let d = PlanarDiagram::new(vec![[1, 7, 2, 7], [7, 2, 3, 1]], 0);
        let rep = d.validate();
        assert!(rep.violations.iter().any(|v| v.kind == "arc multiplicity"));
    }

    #[test]
    fn five_tuple_is_parse_error() {
        let e = PlanarDiagram::parse_pd("PD[X(1,2,3,4,5)]").unwrap_err();
        assert!(matches!(e, DiagramError::Parse { pos: 3, .. }), "{e}");
    }

    #[test]
    fn round_trip_text() {
        let d = PlanarDiagram::parse_pd("PD[ X(1, 4,2,5),X(3,6,4,1), X(5,2,6,3) ; loops=2]").unwrap();
        assert_eq!(d.loops, 2);
        let e = PlanarDiagram::parse_pd(&d.to_pd()).unwrap();
        assert_eq!(d, e);
    }

    #[test]
    fn hopf_link_two_components() {
        let d = PlanarDiagram::parse_pd("PD[X(4,1,3,2), X(2,3,1,4)]").unwrap();
        assert_eq!(d.count_components().unwrap(), 2);
    }

    #[test]
    fn mirror_involution_and_writhe() {
        let d = left_trefoil();
        let o = Orientation::default();
        let w = d.writhe(&o).unwrap();
        assert_eq!(d.mirror().writhe(&o).unwrap(), -w);
        assert_eq!(d.mirror().mirror(), d);
    }

    #[test]
    fn gauss_code_alternates() {
        let g = left_trefoil().gauss_code().unwrap();
        assert_eq!(g.split(' ').count(), 6);
        assert!(g.contains('O') && g.contains('U'));
    }
}
