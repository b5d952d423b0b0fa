//! Reidemeister-move simplification with replayable move traces.
//!
//! Every move is addressed on the diagram obtained by converting the previous diagram
//! to the half-edge form (crossing `i` is node `i`, slot `s` is port `s`), applying the
//! move, and converting back; [`replay`] repeats exactly that.

use std::cmp::Reverse;
use std::collections::hash_map::DefaultHasher;
use std::collections::{BinaryHeap, HashSet};
use std::hash::{Hash, Hasher};

use serde::{Deserialize, Serialize};

use crate::diagram::PlanarDiagram;
use crate::error::DiagramError;
use crate::net::Net;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "move", rename_all = "lowercase")]
pub enum Move {
    /// Remove the kink at a crossing.
    R1 { crossing: usize },
    /// Add a kink on the edge leaving `half_edge`.
    #[serde(rename = "r1up")]
    R1Up { half_edge: u32, loop_right: bool, over: bool },
    /// Remove the bigon between two crossings.
    R2 { first: usize, second: usize },
    /// Slide a strand across the triangle whose face starts at `half_edge`
    /// (`4 * crossing + slot`).
    R3 { half_edge: u32 },
    /// Push the edge leaving `from` across the edge leaving `across`, creating a bigon.
    #[serde(rename = "r2up")]
    R2Up { from: u32, across: u32, over: bool },
}

impl Move {
    pub fn crossing_change(&self) -> i64 {
        match self {
            Move::R1 { .. } => -1,
            Move::R2 { .. } => -2,
            Move::R1Up { .. } => 1,
            Move::R3 { .. } => 0,
            Move::R2Up { .. } => 2,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SearchBudget {
    /// Diagrams expanded by the search before giving up.
    pub max_nodes: usize,
    /// Largest number of crossings above the best diagram that the search may visit.
    pub max_increase: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        Self { max_nodes: 20_000, max_increase: 2 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Simplified {
    pub diagram: PlanarDiagram,
    pub trace: Vec<Move>,
    pub explored: usize,
}

pub fn apply_move(d: &PlanarDiagram, mv: &Move) -> Result<PlanarDiagram, DiagramError> {
    let mut net = Net::from_diagram(d)?;
    match *mv {
        Move::R1 { crossing } => net.apply_r1(crossing)?,
        Move::R2 { first, second } => net.apply_r2(first, second)?,
        Move::R1Up { half_edge, loop_right, over } => net.apply_r1_up(half_edge, loop_right, over)?,
        Move::R3 { half_edge } => net.apply_r3(half_edge)?,
        Move::R2Up { from, across, over } => net.apply_r2_up(from, across, over)?,
    }
    Ok(net.to_diagram())
}

/// Replays a trace from `d`, failing on the first move that does not apply.
pub fn replay(d: &PlanarDiagram, trace: &[Move]) -> Result<PlanarDiagram, DiagramError> {
    let mut cur = d.clone();
    cur.geometry = None;
    for (i, mv) in trace.iter().enumerate() {
        cur = apply_move(&cur, mv).map_err(|e| DiagramError::BadMove(format!("step {i}: {e}")))?;
    }
    Ok(cur)
}

/// Removes kinks and bigons (lowest index first) until none is left.
pub fn greedy(d: &PlanarDiagram) -> Result<(PlanarDiagram, Vec<Move>), DiagramError> {
    let mut cur = d.clone();
    cur.geometry = None;
    let mut trace = Vec::new();
    loop {
        let mut net = Net::from_diagram(&cur)?;
        let mv = if let Some(&v) = net.r1_sites().first() {
            net.apply_r1(v)?;
            Move::R1 { crossing: v }
        } else if let Some(&(a, b)) = net.r2_sites().first() {
            net.apply_r2(a, b)?;
            Move::R2 { first: a, second: b }
        } else {
            return Ok((cur, trace));
        };
        trace.push(mv);
        cur = net.to_diagram();
    }
}

/// Relabelling-invariant hash: the least Gauss-style code over all starting points and
/// both directions, together with the number of free loops.
pub fn fingerprint(d: &PlanarDiagram) -> u64 {
    let mut h = DefaultHasher::new();
    canonical_code(d).hash(&mut h);
    h.finish()
}

fn canonical_code(d: &PlanarDiagram) -> Vec<u32> {
    let Ok(net) = Net::from_diagram(d) else {
        return vec![u32::MAX];
    };
    let n = net.nodes();
    let mut best: Option<Vec<u32>> = None;
    // walk the 4-valent graph from every half-edge, numbering crossings on first visit;
    // the code records the rotation structure so that mirror images are distinguished
    for start in 0..4 * n as u32 {
        let mut code = Vec::with_capacity(8 * n + 2);
        code.push(d.loops as u32);
        let mut order = vec![u32::MAX; n];
        let mut next = 0u32;
        let mut queue = std::collections::VecDeque::new();
        let mut entry = vec![0u32; n];
        let s = Net::node(start);
        order[s] = next;
        next += 1;
        entry[s] = start;
        queue.push_back(s);
        while let Some(v) = queue.pop_front() {
            let base = entry[v];
            for k in 0..4u32 {
                let h = (base & !3) | ((base + k) & 3);
                let t = net.nbr[h as usize];
                let u = Net::node(t);
                if order[u] == u32::MAX {
                    order[u] = next;
                    next += 1;
                    entry[u] = t;
                    queue.push_back(u);
                }
                let rel = (Net::port(t) as u32 + 4 - (entry[u] & 3)) % 4;
                code.push(order[u] * 8 + rel * 2 + net.is_over(h) as u32);
            }
            if let Some(b) = &best {
                if code.as_slice() > &b[..code.len().min(b.len())] {
                    break;
                }
            }
        }
        if next as usize != n {
            // split diagrams: fall back to sorted per-crossing data
            code.push(u32::MAX);
        }
        if best.as_ref().is_none_or(|b| code < *b) {
            best = Some(code);
        }
    }
    best.unwrap_or_else(|| vec![d.loops as u32])
}

#[derive(PartialEq, Eq)]
struct Entry {
    key: (usize, usize, u64),
    index: usize,
    /// Expand by bigon creation instead of third moves; queued at the raised count so
    /// that it only runs once cheaper diagrams are exhausted.
    up: bool,
}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        Reverse(self.key).cmp(&Reverse(other.key))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

fn r3_moves(net: &Net) -> Vec<Move> {
    net.r3_sites().into_iter().map(|h| Move::R3 { half_edge: h }).collect()
}

fn r2_up_moves(net: &Net) -> Vec<Move> {
    let mut out = Vec::new();
    {
        for f in net.faces() {
            for (i, &a) in f.iter().enumerate() {
                for &b in &f[i + 1..] {
                    if net.r2_up_ok(a, b) {
                        for over in [true, false] {
                            out.push(Move::R2Up { from: a, across: b, over });
                        }
                    }
                }
            }
        }
    }
    out
}

/// Every move applicable to `d` that does not lower the crossing count: kinks and
/// bigons added anywhere, and third moves.
pub fn perturbation_moves(d: &PlanarDiagram) -> Result<Vec<Move>, DiagramError> {
    let net = Net::from_diagram(d)?;
    let mut out = r3_moves(&net);
    out.extend(r2_up_moves(&net));
    for h in net.half_edges() {
        for (loop_right, over) in [(false, false), (false, true), (true, false), (true, true)] {
            out.push(Move::R1Up { half_edge: h, loop_right, over });
        }
    }
    Ok(out)
}

/// Greedy reduction, then a best-first search over third moves and bigon
/// creations (each followed by greedy reduction), fewest crossings first.
pub fn simplify(d: &PlanarDiagram, budget: &SearchBudget) -> Result<Simplified, DiagramError> {
    let (start, trace) = greedy(d)?;
    let mut states: Vec<(PlanarDiagram, Vec<Move>)> = vec![(start.clone(), trace)];
    let mut best = 0usize;
    let mut seen: HashSet<u64> = HashSet::new();
    seen.insert(fingerprint(&start));
    let mut heap = BinaryHeap::new();
    heap.push(Entry { key: (start.crossing_count(), 0, 0), index: 0, up: false });
    let mut explored = 0usize;
    let mut counter = 0u64;
    while let Some(Entry { index, up, .. }) = heap.pop() {
        if states[best].0.crossing_count() == 0 || explored >= budget.max_nodes {
            break;
        }
        let (cur, trace) = states[index].clone();
        let floor = states[best].0.crossing_count();
        let allow_up = cur.crossing_count() + 2 <= floor + budget.max_increase;
        if up && !allow_up {
            continue;
        }
        explored += 1;
        let net = Net::from_diagram(&cur)?;
        let moves = if up { r2_up_moves(&net) } else { r3_moves(&net) };
        if !up && allow_up {
            counter += 1;
            heap.push(Entry { key: (cur.crossing_count() + 2, trace.len(), counter), index, up: true });
        }
        for mv in moves {
            let Ok(next) = apply_move(&cur, &mv) else { continue };
            let (next, more) = greedy(&next)?;
            if !seen.insert(fingerprint(&next)) {
                continue;
            }
            let mut t = trace.clone();
            t.push(mv);
            t.extend(more);
            let c = next.crossing_count();
            let depth = t.len();
            states.push((next, t));
            let id = states.len() - 1;
            if c < states[best].0.crossing_count() {
                best = id;
            }
            if c == 0 {
                break;
            }
            counter += 1;
            heap.push(Entry { key: (c, depth, counter), index: id, up: false });
        }
    }
    let (diagram, trace) = states.swap_remove(best);
    Ok(Simplified { diagram, trace, explored })
}
