//! Diagrams described as a bottom-to-top sequence of elementary events on a row of
//! strands (crossings, local minima and maxima), turned into PD codes with geometry.

use std::collections::VecDeque;

use crate::diagram::{BoxLabel, Geometry, Mark, PlanarDiagram};
use crate::net::{Kind, Net};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Event {
    /// Crossing of the strands at `pos` and `pos + 1`. With `slash_over` the strand
    /// running from lower left to upper right is on top (a positive crossing when
    /// both strands run upwards).
    Cross { pos: usize, slash_over: bool },
    /// Local minimum: two new strands appear at `pos`, `pos + 1`.
    Birth { pos: usize },
    /// Local maximum: the strands at `pos`, `pos + 1` are joined.
    Death { pos: usize },
    /// Records the strands crossing this level.
    Probe { name: String },
    /// Opens a labelled box over positions `lo..lo + width`.
    BoxOpen { label: String, lo: usize, width: usize },
    BoxClose,
}

/// A strand diagram of given input width.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Morse {
    pub width_in: usize,
    pub events: Vec<Event>,
}

impl Morse {
    pub fn new(width_in: usize) -> Self {
        Self { width_in, events: Vec::new() }
    }

    pub fn width_out(&self) -> usize {
        let mut w = self.width_in as isize;
        for e in &self.events {
            match e {
                Event::Birth { .. } => w += 2,
                Event::Death { .. } => w -= 2,
                _ => {}
            }
        }
        w as usize
    }

    pub fn crossings(&self) -> usize {
        self.events.iter().filter(|e| matches!(e, Event::Cross { .. })).count()
    }

    pub fn push(&mut self, e: Event) {
        self.events.push(e);
    }

    /// Appends `other`, acting on the strands starting at position `offset`.
    pub fn append_at(&mut self, other: &Morse, offset: usize) {
        for e in &other.events {
            self.events.push(shift_event(e, offset));
        }
    }

    /// Appends `other` with positions reflected inside a block `lo..lo + width_in(other)`,
    /// keeping crossing types (the block is turned over about the vertical axis).
    pub fn append_turned(&mut self, other: &Morse, offset: usize) {
        let mut w = other.width_in;
        for e in &other.events {
            let r = match e {
                Event::Cross { pos, slash_over } => Event::Cross { pos: w - 2 - pos, slash_over: *slash_over },
                Event::Birth { pos } => Event::Birth { pos: w - pos },
                Event::Death { pos } => Event::Death { pos: w - 2 - pos },
                Event::BoxOpen { label, lo, width } => Event::BoxOpen { label: label.clone(), lo: w - lo - width, width: *width },
                other => other.clone(),
            };
            match e {
                Event::Birth { .. } => w += 2,
                Event::Death { .. } => w -= 2,
                _ => {}
            }
            self.events.push(shift_event(&r, offset));
        }
    }
}

fn shift_event(e: &Event, k: usize) -> Event {
    match e {
        Event::Cross { pos, slash_over } => Event::Cross { pos: pos + k, slash_over: *slash_over },
        Event::Birth { pos } => Event::Birth { pos: pos + k },
        Event::Death { pos } => Event::Death { pos: pos + k },
        Event::BoxOpen { label, lo, width } => Event::BoxOpen { label: label.clone(), lo: lo + k, width: *width },
        other => other.clone(),
    }
}

/// How the ends of a strand diagram are joined.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Closure {
    /// Input and output width are both zero.
    None,
    /// Top position `j` joined to bottom position `j` around the right-hand side.
    Braid,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProbeStrand {
    pub pos: usize,
    pub arc: u32,
    /// Whether the oriented strand runs upwards through the probe level.
    pub up: bool,
    /// Position along the arc polyline, in `[0, 1]`.
    pub along: f64,
    pub x: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProbeRecord {
    pub name: String,
    pub y: f64,
    pub x0: f64,
    pub x1: f64,
    pub strands: Vec<ProbeStrand>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Built {
    pub diagram: PlanarDiagram,
    pub probes: Vec<ProbeRecord>,
}

impl Built {
    pub fn probe(&self, name: &str) -> Option<&ProbeRecord> {
        self.probes.iter().find(|p| p.name == name)
    }
}

#[derive(Clone, Copy, Debug)]
struct Pt {
    x: f64,
    y: f64,
    tag: Option<(usize, usize)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum End {
    Open,
    Port(u32),
}

#[derive(Clone, Debug)]
struct Wire {
    pts: VecDeque<Pt>,
    start: End,
    end: End,
    alive: bool,
}

/// (wire, true if the wire's `end` side is the open end)
type OpenEnd = (usize, bool);

struct Builder {
    wires: Vec<Wire>,
    row: Vec<OpenEnd>,
    bottom: Vec<OpenEnd>,
    net: Net,
    centers: Vec<[f64; 2]>,
    loops: Vec<Vec<[f64; 2]>>,
}

const DX: f64 = 1.0;

impl Builder {
    fn extend(&mut self, e: OpenEnd, p: Pt) {
        let w = &mut self.wires[e.0];
        if e.1 {
            w.pts.push_back(p);
        } else {
            w.pts.push_front(p);
        }
    }

    fn close(&mut self, e: OpenEnd, port: u32) {
        let w = &mut self.wires[e.0];
        if e.1 {
            w.end = End::Port(port);
        } else {
            w.start = End::Port(port);
        }
    }

    fn new_wire(&mut self, pts: Vec<Pt>, start: End, end: End) -> usize {
        self.wires.push(Wire { pts: pts.into(), start, end, alive: true });
        self.wires.len() - 1
    }

    /// Joins two open ends through `via` (listed from `a` to `b`).
    fn join(&mut self, a: OpenEnd, b: OpenEnd, via: Vec<Pt>) {
        if a.0 == b.0 {
            let w = &mut self.wires[a.0];
            w.alive = false;
            let mut pts: Vec<[f64; 2]> = w.pts.iter().map(|p| [p.x, p.y]).collect();
            pts.extend(via.iter().map(|p| [p.x, p.y]));
            if let Some(f) = pts.first().copied() {
                pts.push(f);
            }
            self.loops.push(pts);
            return;
        }
        let wa = self.wires[a.0].clone();
        let wb = self.wires[b.0].clone();
        let (mut seq, far_a) = if a.1 { (Vec::from(wa.pts), wa.start) } else { (wa.pts.into_iter().rev().collect(), wa.end) };
        seq.extend(via);
        let (seq_b, far_b): (Vec<Pt>, End) = if b.1 { (wb.pts.into_iter().rev().collect(), wb.start) } else { (Vec::from(wb.pts), wb.end) };
        seq.extend(seq_b);
        self.wires[a.0].alive = false;
        self.wires[b.0].alive = false;
        let nw = self.new_wire(seq, far_a, far_b);
        // the far ends may still be open: repoint them
        let fix = |e: &mut OpenEnd| {
            if e.0 == a.0 && e.1 != a.1 {
                *e = (nw, false);
            } else if e.0 == b.0 && e.1 != b.1 {
                *e = (nw, true);
            }
        };
        self.row.iter_mut().for_each(fix);
        self.bottom.iter_mut().for_each(fix);
    }
}

fn pt(x: f64, y: f64) -> Pt {
    Pt { x, y, tag: None }
}

impl Morse {
    /// Builds the PD code, orienting each component upwards at its lowest crossing.
    pub fn build(&self, closure: Closure) -> Built {
        let mut b = Builder {
            wires: Vec::new(),
            row: Vec::new(),
            bottom: Vec::new(),
            net: Net { nbr: Vec::new(), kind: Vec::new(), fwd: Vec::new(), loops: 0 },
            centers: Vec::new(),
            loops: Vec::new(),
        };
        for j in 0..self.width_in {
            let w = b.new_wire(vec![pt(j as f64 * DX, 0.0)], End::Open, End::Open);
            b.row.push((w, true));
            b.bottom.push((w, false));
        }
        let mut y = 0.0f64;
        let mut probe_meta: Vec<(String, f64, usize)> = Vec::new();
        let mut boxes: Vec<BoxLabel> = Vec::new();
        let mut box_stack: Vec<(String, usize, usize, f64, usize, usize)> = Vec::new();
        let mut max_width = self.width_in;
        for e in &self.events {
            let x = |p: usize| p as f64 * DX;
            match e {
                Event::Probe { name } => {
                    let id = probe_meta.len();
                    probe_meta.push((name.clone(), y, b.row.len()));
                    for j in 0..b.row.len() {
                        let oe = b.row[j];
                        b.extend(oe, Pt { x: x(j), y, tag: Some((id, j)) });
                    }
                    continue;
                }
                Event::BoxOpen { label, lo, width } => {
                    box_stack.push((label.clone(), *lo, *width, y, b.row.len(), b.row.len()));
                    continue;
                }
                Event::BoxClose => {
                    if let Some((label, lo, width, y0, w0, wmax)) = box_stack.pop() {
                        let extra = wmax - w0;
                        boxes.push(BoxLabel {
                            label,
                            x0: x(lo) - 0.35,
                            y0,
                            x1: x(lo + width - 1 + extra) + 0.35,
                            y1: y,
                        });
                    }
                    continue;
                }
                _ => {}
            }
            for j in 0..b.row.len() {
                let oe = b.row[j];
                b.extend(oe, pt(x(j), y));
            }
            match *e {
                Event::Cross { pos, slash_over } => {
                    let c = b.net.add_node(Kind::Crossing { over: if slash_over { 0 } else { 1 } }, [true, true]);
                    let center = [x(pos) + DX / 2.0, y + 0.5];
                    b.centers.push(center);
                    let (l, r) = (b.row[pos], b.row[pos + 1]);
                    b.extend(l, pt(center[0], center[1]));
                    b.extend(r, pt(center[0], center[1]));
                    b.close(l, Net::he(c, 0));
                    b.close(r, Net::he(c, 1));
                    let tl = b.new_wire(vec![pt(center[0], center[1])], End::Port(Net::he(c, 3)), End::Open);
                    let tr = b.new_wire(vec![pt(center[0], center[1])], End::Port(Net::he(c, 2)), End::Open);
                    b.row[pos] = (tl, true);
                    b.row[pos + 1] = (tr, true);
                }
                Event::Birth { pos } => {
                    let cx = if pos < b.row.len() { x(pos) } else { x(pos.max(1) - 1) + DX };
                    let w = b.new_wire(vec![pt(cx, y + 1.0), pt(cx + DX / 2.0, y + 0.5), pt(cx + DX, y + 1.0)], End::Open, End::Open);
                    b.row.insert(pos, (w, false));
                    b.row.insert(pos + 1, (w, true));
                }
                Event::Death { pos } => {
                    let (l, r) = (b.row[pos], b.row[pos + 1]);
                    b.row.drain(pos..pos + 2);
                    b.join(l, r, vec![pt(x(pos) + DX / 2.0, y + 0.5)]);
                }
                _ => unreachable!(),
            }
            max_width = max_width.max(b.row.len());
            for entry in box_stack.iter_mut() {
                entry.5 = entry.5.max(b.row.len());
            }
            y += 1.0;
            for j in 0..b.row.len() {
                let oe = b.row[j];
                let last = {
                    let w = &b.wires[oe.0];
                    if oe.1 { *w.pts.back().unwrap() } else { *w.pts.front().unwrap() }
                };
                if (last.y - y).abs() > 1e-9 || (last.x - x(j)).abs() > 1e-9 {
                    b.extend(oe, pt(x(j), y));
                }
            }
        }
        let top = y;
        match closure {
            Closure::None => assert!(b.row.is_empty() && b.bottom.is_empty(), "open strands without closure"),
            Closure::Braid => {
                let w = b.row.len();
                assert_eq!(w, b.bottom.len(), "braid closure needs equal widths");
                let right = max_width as f64 * DX;
                for j in (0..w).rev() {
                    let k = (w - j) as f64 * 0.5;
                    let xj = j as f64 * DX;
                    let via = vec![
                        pt(xj, top + k),
                        pt(right + k, top + k),
                        pt(right + k, -k),
                        pt(xj, -k),
                    ];
                    let (t, bt) = (b.row[j], b.bottom[j]);
                    b.join(t, bt, via);
                }
                b.row.clear();
                b.bottom.clear();
            }
        }

        // wire ends become net edges
        let mut net = b.net;
        for w in b.wires.iter().filter(|w| w.alive) {
            let (End::Port(p), End::Port(q)) = (w.start, w.end) else {
                panic!("dangling strand end");
            };
            net.link(p, q);
        }
        net.loops = b.loops.len();
        net.orient();
        let (mut diagram, label) = net.to_diagram_labeled();

        let mut geom = Geometry { crossings: b.centers, loops: b.loops, ..Default::default() };
        let mut probes: Vec<ProbeRecord> = probe_meta
            .iter()
            .map(|(name, py, w)| ProbeRecord {
                name: name.clone(),
                y: *py,
                x0: -0.5,
                x1: (*w as f64 - 0.5) * DX,
                strands: Vec::new(),
            })
            .collect();
        for w in b.wires.iter().filter(|w| w.alive) {
            let End::Port(p) = w.start else { unreachable!() };
            let arc = label[p as usize];
            let forward = net.is_exit(p);
            let mut pts: Vec<Pt> = w.pts.iter().copied().collect();
            if !forward {
                pts.reverse();
            }
            let n = pts.len();
            for (k, q) in pts.iter().enumerate() {
                if let Some((id, pos)) = q.tag {
                    let before = pts[..k].iter().rev().find(|r| (r.y - q.y).abs() > 1e-9);
                    let after = pts[k + 1..].iter().find(|r| (r.y - q.y).abs() > 1e-9);
                    let up = match (before, after) {
                        (_, Some(a)) => a.y > q.y,
                        (Some(bf), None) => bf.y < q.y,
                        _ => true,
                    };
                    probes[id].strands.push(ProbeStrand { pos, arc, up, along: k as f64 / (n.max(2) - 1) as f64, x: q.x });
                }
            }
            geom.arcs.insert(arc, pts.iter().map(|q| [q.x, q.y]).collect());
        }
        for p in &mut probes {
            p.strands.sort_by_key(|s| s.pos);
            geom.marks.push(Mark { name: p.name.clone(), y: p.y, x0: p.x0, x1: p.x1 });
        }
        geom.boxes = boxes;
        diagram.geometry = Some(geom);
        Built { diagram, probes }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn braid(word: &[(usize, bool)], width: usize) -> Morse {
        let mut m = Morse::new(width);
        for &(pos, slash_over) in word {
            m.push(Event::Cross { pos, slash_over });
        }
        m
    }

    #[test]
    fn positive_braid_crossing_is_positive() {
        let d = braid(&[(0, true), (0, true), (0, true)], 2).build(Closure::Braid).diagram;
        assert!(d.validate().is_valid());
        assert_eq!(d.count_components().unwrap(), 1);
        assert_eq!(d.signs().unwrap(), vec![1, 1, 1]);
        let d = braid(&[(0, false), (0, false)], 2).build(Closure::Braid).diagram;
        assert_eq!(d.count_components().unwrap(), 2);
        assert_eq!(d.signs().unwrap(), vec![-1, -1]);
    }

    #[test]
    fn crossingless_closure_gives_free_loops() {
        let d = Morse::new(3).build(Closure::Braid).diagram;
        assert_eq!(d.crossing_count(), 0);
        assert_eq!(d.loops, 3);
        let mut m = Morse::new(0);
        m.push(Event::Birth { pos: 0 });
        m.push(Event::Death { pos: 0 });
        assert_eq!(m.build(Closure::None).diagram.loops, 1);
    }

    #[test]
    fn probe_sees_every_strand() {
        let mut m = braid(&[(0, true), (1, false)], 3);
        m.push(Event::Probe { name: "top".into() });
        let b = m.build(Closure::Braid);
        let p = b.probe("top").unwrap();
        assert_eq!(p.strands.len(), 3);
        assert!(p.strands.iter().all(|s| s.up));
        let g = b.diagram.geometry.as_ref().unwrap();
        assert_eq!(g.arcs.len(), b.diagram.arc_count());
    }

    #[test]
    fn turned_block_reflects_positions() {
        let mut src = Morse::new(3);
        src.push(Event::Cross { pos: 0, slash_over: true });
        src.push(Event::Birth { pos: 3 });
        src.push(Event::Death { pos: 1 });
        let mut m = Morse::new(3);
        m.append_turned(&src, 0);
        assert_eq!(
            m.events,
            vec![
                Event::Cross { pos: 1, slash_over: true },
                Event::Birth { pos: 0 },
                Event::Death { pos: 2 },
            ]
        );
    }
}
