//! Band surgery on diagrams and the dual band.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::diagram::PlanarDiagram;
use crate::error::{BandError, DiagramError};
use crate::net::{Kind, Net};

/// Side of an attachment, relative to the arc's orientation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn flipped(self) -> Self {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Target {
    Arc(u32),
    /// A crossingless component, by index among the free loops.
    Loop(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Attachment {
    #[serde(flatten)]
    pub target: Target,
    /// Position along the arc in `[0, 1]`; orders attachments sharing an arc.
    pub position: f64,
    pub side: Side,
}

impl Attachment {
    pub fn arc(arc: u32, position: f64, side: Side) -> Self {
        Self { target: Target::Arc(arc), position, side }
    }

    pub fn free_loop(index: usize, position: f64, side: Side) -> Self {
        Self { target: Target::Loop(index), position, side }
    }
}

/// The band core passing over or under an arc.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Pass {
    Over(u32),
    Under(u32),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct BandSpec {
    pub attach_a: Attachment,
    pub attach_b: Attachment,
    #[serde(default)]
    pub path: Vec<Pass>,
    #[serde(default)]
    pub half_twists: i64,
}

impl BandSpec {
    pub fn flat(attach_a: Attachment, attach_b: Attachment) -> Self {
        Self { attach_a, attach_b, path: Vec::new(), half_twists: 0 }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("band spec serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }
}

/// Cuts the two attachment points and reconnects them through the band edges.
pub fn apply_band(d: &PlanarDiagram, b: &BandSpec) -> Result<PlanarDiagram, BandError> {
    Ok(band_surgery(d, b)?.0)
}

/// A flat band across the original band near its second attachment, whose
/// core is the original band's co-core.
pub fn dual_band(d: &PlanarDiagram, b: &BandSpec) -> Result<BandSpec, BandError> {
    Ok(band_surgery(d, b)?.1)
}

struct Work {
    net: Net,
    /// Original arc label per half-edge; `None` on band edges.
    label: Vec<Option<u32>>,
}

impl Work {
    fn add(&mut self, kind: Kind, fwd: [bool; 2]) -> usize {
        let v = self.net.add_node(kind, fwd);
        self.label.resize(self.net.nbr.len(), None);
        v
    }

    fn face(&self, h: u32) -> Vec<u32> {
        let mut out = vec![h];
        let mut x = self.net.phi(h);
        while x != h {
            out.push(x);
            x = self.net.phi(x);
        }
        out
    }

    fn component_of(&self, h: u32) -> Vec<bool> {
        let n = self.net.nodes();
        let mut seen = vec![false; n];
        let s = Net::node(h);
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            let k = if self.net.is_crossing(v) { 4 } else { 2 };
            for p in 0..k {
                let w = Net::node(self.net.nbr[Net::he(v, p) as usize]);
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen
    }
}

/// Inserts two markers per attachment along the target and returns, per attachment, the
/// half-edge between its markers that has the band's side on its left.
fn insert_markers(w: &mut Work, d: &PlanarDiagram, atts: &[Attachment; 2]) -> Result<[u32; 2], BandError> {
    let mut by_target: BTreeMap<Target, Vec<usize>> = BTreeMap::new();
    for (i, a) in atts.iter().enumerate() {
        by_target.entry(a.target).or_default().push(i);
    }
    let mut fingers = [0u32; 2];
    for (target, mut idx) in by_target {
        idx.sort_by(|&i, &j| atts[i].position.total_cmp(&atts[j].position));
        if idx.len() == 2 && atts[idx[0]].position == atts[idx[1]].position {
            return Err(BandError::SameLocation);
        }
        let (start, end) = match target {
            Target::Arc(a) => {
                let tail = (0..w.net.nbr.len() as u32)
                    .find(|&h| w.label[h as usize] == Some(a) && w.net.is_exit(h))
                    .ok_or(BandError::MissingArc(a))?;
                (Some(tail), Some(w.net.nbr[tail as usize]))
            }
            Target::Loop(k) => {
                if k >= d.loops {
                    return Err(BandError::MissingLoop(k));
                }
                (None, None)
            }
        };
        let mut first: Option<u32> = None;
        let mut cur = start;
        for &i in &idx {
            let m1 = w.add(Kind::Marker, [true, false]);
            let m2 = w.add(Kind::Marker, [true, false]);
            match cur {
                Some(c) => w.net.link(c, Net::he(m1, 0)),
                None => first = Some(Net::he(m1, 0)),
            }
            w.net.link(Net::he(m1, 1), Net::he(m2, 0));
            cur = Some(Net::he(m2, 1));
            fingers[i] = match atts[i].side {
                Side::Left => Net::he(m1, 1),
                Side::Right => Net::he(m2, 0),
            };
        }
        let last = cur.unwrap();
        match end {
            Some(e) => w.net.link(last, e),
            None => {
                w.net.link(last, first.unwrap());
                w.net.loops -= 1;
            }
        }
    }
    Ok(fingers)
}

fn band_surgery(d: &PlanarDiagram, b: &BandSpec) -> Result<(PlanarDiagram, BandSpec), BandError> {
    let net = Net::from_diagram(d)?;
    let mut label = vec![None; net.nbr.len()];
    for (c, x) in d.crossings.iter().enumerate() {
        for s in 0..4 {
            label[Net::he(c, s) as usize] = Some(x.arcs[s]);
        }
    }
    let mut w = Work { net, label };
    for pass in &b.path {
        let (Pass::Over(a) | Pass::Under(a)) = *pass;
        if !w.label.contains(&Some(a)) {
            return Err(BandError::MissingArc(a));
        }
    }
    let [mut finger, target] = insert_markers(&mut w, d, &[b.attach_a, b.attach_b])?;

    // push the band's tip across each arc on the path
    for pass in &b.path {
        let (a, over) = match *pass {
            Pass::Over(a) => (a, true),
            Pass::Under(a) => (a, false),
        };
        let x = w
            .face(finger)
            .into_iter()
            .find(|&x| w.label[x as usize] == Some(a))
            .ok_or_else(|| DiagramError::BadMove(format!("band path cannot reach arc {a}")))?;
        w.net.apply_r2_up(finger, x, over)?;
        let r = w.net.nodes() - 1;
        let l = r - 1;
        w.label.resize(w.net.nbr.len(), None);
        for (v, p) in [(l, 1), (l, 3), (r, 1), (r, 3)] {
            w.label[Net::he(v, p) as usize] = Some(a);
        }
        finger = Net::he(l, 2);
    }

    let same_component = w.component_of(finger)[Net::node(target)];
    if same_component && !w.face(finger).contains(&target) {
        return Err(DiagramError::BadMove("band attachments do not share a face".into()).into());
    }
    let (h1, h2) = (finger, target);
    let (n1, n2) = (w.net.nbr[h1 as usize], w.net.nbr[h2 as usize]);
    w.net.link(n1, h2);
    w.net.link(h1, n2);
    // band edges run from the tip side (p) to the second attachment (q); the band lies on
    // the left of the first and on the right of the second
    let (edge1, edge2) = (n1, h1);
    let (mut p1, q1, mut p2, q2) = (n1, h2, h1, n2);
    for _ in 0..b.half_twists.unsigned_abs() {
        let x = w.add(Kind::Crossing { over: 0 }, [true, true]);
        w.net.link(p1, Net::he(x, 0));
        w.net.link(Net::he(x, 2), q1);
        w.net.link(p2, Net::he(x, 1));
        w.net.link(Net::he(x, 3), q2);
        let mut in_port = 1;
        if !w.net.is_planar() {
            w.net.link(p2, Net::he(x, 3));
            w.net.link(Net::he(x, 1), q2);
            in_port = 3;
        }
        w.net.fwd[x] = [true, in_port == 1];
        if w.net.sign(x) != b.half_twists.signum() as i32 {
            w.net.kind[x] = Kind::Crossing { over: 1 };
        }
        p1 = Net::he(x, 2);
        p2 = Net::he(x, (in_port + 2) % 4);
    }

    // crossing half-edges reached from the tip along each band edge
    // together with the number of markers passed on the way
    let reach = |net: &Net, start: u32| -> Option<(u32, usize)> {
        let first = net.nbr[start as usize];
        let mut x = first;
        let mut steps = 0;
        while !net.is_crossing(Net::node(x)) {
            x = net.nbr[(x ^ 1) as usize];
            steps += 1;
            if x == first {
                return None;
            }
        }
        Some((x, steps))
    };
    let ends = [reach(&w.net, edge1), reach(&w.net, edge2)];
    // successor along crossingless cycles, to tell whether both band edges share one
    let succ: Vec<u32> = (0..w.net.nbr.len() as u32)
        .map(|h| if w.net.is_crossing(Net::node(h)) { h } else { w.net.nbr[(h ^ 1) as usize] })
        .collect();
    let w_tip_cycle = (w.net.nbr[edge1 as usize], edge2, succ);
    let removed_before: Vec<usize> = {
        let mut acc = 0;
        (0..w.net.nodes())
            .map(|v| {
                let r = acc;
                if !w.net.is_crossing(v) {
                    acc += 1;
                }
                r
            })
            .collect()
    };
    w.net.remove_markers();
    w.net.orient();
    let (out, labels) = w.net.to_diagram_labeled();

    let same_loop = ends[0].is_none() && {
        let (first, other) = (w_tip_cycle.0, w_tip_cycle.1);
        let mut x = first;
        loop {
            if x == other || x ^ 1 == other {
                break true;
            }
            x = w_tip_cycle.2[x as usize];
            if x == first {
                break false;
            }
        }
    };
    let dual_side = |k: usize, end: Option<(u32, usize)>| -> Attachment {
        // the band interior is on the left of edge1 and on the right of edge2
        let interior_left = k == 0;
        match end {
            Some((x, steps)) => {
                let v = Net::node(x) - removed_before[Net::node(x)];
                let h = Net::he(v, Net::port(x));
                let along = !w.net.is_exit(h);
                let side = if along == interior_left { Side::Left } else { Side::Right };
                // fewer markers to the arc end means closer to it
                let offset = 0.5 / (steps as f64 + 2.0);
                let position = if along { 0.5 + offset } else { 0.5 - offset };
                Attachment::arc(labels[h as usize], position, side)
            }
            None => {
                let idx = if k == 1 && ends[0].is_none() && !same_loop { 1 } else { 0 };
                Attachment::free_loop(idx, 0.25 + 0.5 * k as f64, Side::Left)
            }
        }
    };
    let a = dual_side(0, ends[0]);
    let c = dual_side(1, ends[1]);
    let dual = BandSpec::flat(a, c);
    Ok((out, dual))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariants::{determinant, jones};
    use crate::diagram::Orientation;
    use num_bigint::BigInt;

    #[test]
    fn merging_two_circles() {
        let d = PlanarDiagram::unlink(2);
        let b = BandSpec::flat(Attachment::free_loop(0, 0.5, Side::Left), Attachment::free_loop(1, 0.5, Side::Left));
        let k = apply_band(&d, &b).unwrap();
        assert_eq!(k.count_components().unwrap(), 1);
        assert_eq!(k.crossing_count(), 0);
        let back = apply_band(&k, &dual_band(&d, &b).unwrap()).unwrap();
        assert_eq!(back.count_components().unwrap(), 2);
    }

    #[test]
    fn twisted_band_on_unknot_gives_hopf_link() {
        let d = PlanarDiagram::unlink(1);
        let b = BandSpec {
            attach_a: Attachment::free_loop(0, 0.2, Side::Left),
            attach_b: Attachment::free_loop(0, 0.7, Side::Left),
            path: vec![],
            half_twists: 2,
        };
        let h = apply_band(&d, &b).unwrap();
        assert!(h.validate().is_valid());
        assert_eq!(h.count_components().unwrap(), 2);
        assert_eq!(h.crossing_count(), 2);
        assert_eq!(determinant(&h).unwrap(), BigInt::from(2));
    }

    #[test]
    fn band_through_a_pass() {
        // unknot with a kink; push a band from one side across the kink's strand
        let d = PlanarDiagram::parse_pd("PD[X(1,1,2,2)]").unwrap();
        let b = BandSpec {
            attach_a: Attachment::arc(1, 0.5, Side::Left),
            attach_b: Attachment::arc(2, 0.5, Side::Left),
            path: vec![],
            half_twists: 0,
        };
        let r = apply_band(&d, &b);
        if let Ok(r) = r {
            assert!(r.validate().is_valid());
            let k = r.count_components().unwrap();
            assert!((1..=2).contains(&k));
        }
    }

    #[test]
    fn json_shape() {
        let b = BandSpec {
            attach_a: Attachment::arc(3, 0.5, Side::Left),
            attach_b: Attachment::arc(7, 0.25, Side::Right),
            path: vec![Pass::Over(4), Pass::Under(9)],
            half_twists: -1,
        };
        let s = b.to_json();
        assert!(s.contains("\"attachA\":{\"arc\":3"), "{s}");
        assert!(s.contains("\"path\":[{\"over\":4},{\"under\":9}]"), "{s}");
        assert!(s.contains("\"halfTwists\":-1"), "{s}");
        assert_eq!(BandSpec::from_json(&s).unwrap(), b);
    }

    #[test]
    fn errors_are_reported() {
        let d = PlanarDiagram::parse_pd("PD[X(1,1,2,2)]").unwrap();
        let b = BandSpec::flat(Attachment::arc(9, 0.5, Side::Left), Attachment::arc(1, 0.5, Side::Left));
        assert_eq!(apply_band(&d, &b), Err(BandError::MissingArc(9)));
        let b = BandSpec::flat(Attachment::arc(1, 0.5, Side::Left), Attachment::arc(1, 0.5, Side::Left));
        assert_eq!(apply_band(&d, &b), Err(BandError::SameLocation));
        let b = BandSpec::flat(Attachment::free_loop(0, 0.5, Side::Left), Attachment::arc(1, 0.5, Side::Left));
        assert_eq!(apply_band(&d, &b), Err(BandError::MissingLoop(0)));
    }

    #[test]
    fn jones_survives_round_trip_on_trefoil() {
        let d = PlanarDiagram::parse_pd("PD[X(1,4,2,5), X(3,6,4,1), X(5,2,6,3)]").unwrap();
        let o = Orientation::default();
        let j = jones(&d, &o, 25).unwrap();
        for arc in 1..=6u32 {
            for side in [Side::Left, Side::Right] {
                let b = BandSpec::flat(Attachment::arc(arc, 0.3, side), Attachment::arc(arc, 0.7, side));
                let k = apply_band(&d, &b).unwrap();
                assert!(k.validate().is_valid());
                let back = apply_band(&k, &dual_band(&d, &b).unwrap()).unwrap();
                // splitting off a trivial circle and merging it back
                assert_eq!(back.count_components().unwrap(), 1);
                assert_eq!(jones(&back, &o, 25).unwrap(), j);
            }
        }
    }
}
