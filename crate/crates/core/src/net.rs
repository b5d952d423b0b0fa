//! Half-edge representation used for rewriting. Node ports are numbered counterclockwise;
//! a crossing has four ports, a marker (a degree-2 point on a strand) uses ports 0 and 1.

use crate::diagram::{Crossing, PlanarDiagram};
use crate::error::DiagramError;

pub(crate) const NONE: u32 = u32::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub(crate) enum Kind {
    /// `over` is the port pair (0: ports 0,2; 1: ports 1,3) on top.
    Crossing { over: u8 },
    Marker,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Net {
    pub nbr: Vec<u32>,
    pub kind: Vec<Kind>,
    /// Per node and pair: `true` if the strand travels from port k to port k+2
    /// (for markers, pair 0 travels 0 -> 1 when `true`).
    pub fwd: Vec<[bool; 2]>,
    pub loops: usize,
}

impl Net {
    pub fn nodes(&self) -> usize {
        self.kind.len()
    }

    pub fn is_crossing(&self, v: usize) -> bool {
        matches!(self.kind[v], Kind::Crossing { .. })
    }

    #[cfg(test)]
    pub fn crossing_count(&self) -> usize {
        (0..self.nodes()).filter(|&v| self.is_crossing(v)).count()
    }

    pub fn he(v: usize, p: usize) -> u32 {
        (v * 4 + p) as u32
    }

    pub fn node(h: u32) -> usize {
        h as usize / 4
    }

    pub fn port(h: u32) -> usize {
        h as usize % 4
    }

    pub fn opp(&self, h: u32) -> u32 {
        if self.is_crossing(Self::node(h)) {
            (h & !3) | ((h + 2) & 3)
        } else {
            h ^ 1
        }
    }

    pub fn prev(&self, h: u32) -> u32 {
        if self.is_crossing(Self::node(h)) {
            (h & !3) | ((h + 3) & 3)
        } else {
            h ^ 1
        }
    }

    /// Next half-edge around the face on the left of `h`.
    pub fn phi(&self, h: u32) -> u32 {
        self.prev(self.nbr[h as usize])
    }

    /// Whether the strand leaves the node through `h`.
    pub fn is_exit(&self, h: u32) -> bool {
        let (v, p) = (Self::node(h), Self::port(h));
        match self.kind[v] {
            Kind::Crossing { .. } => {
                let k = p % 2;
                if self.fwd[v][k] {
                    p == k + 2
                } else {
                    p == k
                }
            }
            Kind::Marker => (p == 1) == self.fwd[v][0],
        }
    }

    pub fn is_over(&self, h: u32) -> bool {
        match self.kind[Self::node(h)] {
            Kind::Crossing { over } => Self::port(h) % 2 == over as usize,
            Kind::Marker => false,
        }
    }

    pub fn half_edges(&self) -> impl Iterator<Item = u32> + '_ {
        (0..self.nodes()).flat_map(move |v| {
            let k = if self.is_crossing(v) { 4 } else { 2 };
            (0..k).map(move |p| Self::he(v, p))
        })
    }

    pub fn link(&mut self, a: u32, b: u32) {
        self.nbr[a as usize] = b;
        self.nbr[b as usize] = a;
    }

    pub fn add_node(&mut self, kind: Kind, fwd: [bool; 2]) -> usize {
        self.kind.push(kind);
        self.fwd.push(fwd);
        self.nbr.extend([NONE; 4]);
        self.kind.len() - 1
    }

    /// Sign of a crossing node under the current directions.
    pub fn sign(&self, v: usize) -> i32 {
        let Kind::Crossing { over } = self.kind[v] else { return 0 };
        let under = 1 - over as usize;
        let u_in = if self.fwd[v][under] { under } else { under + 2 };
        let o = over as usize;
        let o_in = if self.fwd[v][o] { o } else { o + 2 };
        if (o_in + 4 - u_in) % 4 == crate::diagram::POSITIVE_OVER_ENTRY_SLOT {
            1
        } else {
            -1
        }
    }

    pub fn from_diagram(d: &PlanarDiagram) -> Result<Self, DiagramError> {
        let st = d.structure()?;
        let n = d.crossings.len();
        let mut net = Net { nbr: vec![NONE; 4 * n], kind: Vec::with_capacity(n), fwd: Vec::with_capacity(n), loops: d.loops };
        for c in 0..n {
            net.kind.push(Kind::Crossing { over: 1 });
            // slot 0 is the incoming under-strand; over enters at slot 1 or 3
            net.fwd.push([true, st.over_entry[c] == 1]);
        }
        for ends in st.arcs.values() {
            let a = Self::he(ends.tail.crossing, ends.tail.slot);
            let b = Self::he(ends.head.crossing, ends.head.slot);
            net.link(a, b);
        }
        Ok(net)
    }

    /// Converts back to PD, labelling arcs consecutively along components. Markers must be
    /// absent. Returns the diagram and the arc label at every half-edge.
    pub fn to_diagram_labeled(&self) -> (PlanarDiagram, Vec<u32>) {
        debug_assert!((0..self.nodes()).all(|v| self.is_crossing(v)), "markers left in net");
        let mut label = vec![0u32; self.nbr.len()];
        let mut next_label = 1u32;
        for v in 0..self.nodes() {
            for p in 0..4 {
                let start = Self::he(v, p);
                if label[start as usize] != 0 || !self.is_exit(start) {
                    continue;
                }
                let mut h = start;
                loop {
                    let t = self.nbr[h as usize];
                    label[h as usize] = next_label;
                    label[t as usize] = next_label;
                    next_label += 1;
                    h = self.opp(t);
                    if h == start {
                        break;
                    }
                }
            }
        }
        let crossings = (0..self.nodes())
            .map(|v| {
                let Kind::Crossing { over } = self.kind[v] else { unreachable!() };
                let under = 1 - over as usize;
                let u_in = if self.fwd[v][under] { under } else { under + 2 };
                Crossing { arcs: [0, 1, 2, 3].map(|i| label[Self::he(v, (u_in + i) % 4) as usize]) }
            })
            .collect();
        (PlanarDiagram { crossings, loops: self.loops, geometry: None }, label)
    }

    pub fn to_diagram(&self) -> PlanarDiagram {
        self.to_diagram_labeled().0
    }

    /// Deletes the given nodes, joining the strands that ran through them. Closed strands
    /// lying entirely inside the deleted set become free loops.
    pub fn splice(&mut self, del: &[usize]) {
        let mut gone = vec![false; self.nodes()];
        for &v in del {
            gone[v] = true;
        }
        let mut visited = vec![false; self.nbr.len()];
        let hes: Vec<u32> = self.half_edges().collect();
        for &h in &hes {
            if gone[Self::node(h)] {
                continue;
            }
            let mut x = self.nbr[h as usize];
            if !gone[Self::node(x)] {
                continue;
            }
            loop {
                visited[x as usize] = true;
                let y = self.opp(x);
                visited[y as usize] = true;
                let z = self.nbr[y as usize];
                if !gone[Self::node(z)] {
                    self.nbr[h as usize] = z;
                    break;
                }
                x = z;
            }
        }
        for &h in &hes {
            if !gone[Self::node(h)] || visited[h as usize] {
                continue;
            }
            let mut x = h;
            loop {
                visited[x as usize] = true;
                let y = self.opp(x);
                visited[y as usize] = true;
                x = self.nbr[y as usize];
                if x == h {
                    break;
                }
            }
            self.loops += 1;
        }
        self.compact(&gone);
    }

    fn compact(&mut self, gone: &[bool]) {
        let mut map = vec![usize::MAX; self.nodes()];
        let mut k = 0;
        for v in 0..self.nodes() {
            if !gone[v] {
                map[v] = k;
                k += 1;
            }
        }
        let mut nbr = vec![NONE; 4 * k];
        let mut kind = Vec::with_capacity(k);
        let mut fwd = Vec::with_capacity(k);
        for v in 0..self.nodes() {
            if gone[v] {
                continue;
            }
            let nv = map[v];
            kind.push(self.kind[v]);
            fwd.push(self.fwd[v]);
            for p in 0..4 {
                let t = self.nbr[Self::he(v, p) as usize];
                if t != NONE {
                    nbr[Self::he(nv, p) as usize] = Self::he(map[Self::node(t)], Self::port(t));
                }
            }
        }
        self.nbr = nbr;
        self.kind = kind;
        self.fwd = fwd;
    }

    pub fn remove_markers(&mut self) {
        let del: Vec<usize> = (0..self.nodes()).filter(|&v| !self.is_crossing(v)).collect();
        if !del.is_empty() {
            self.splice(&del);
        }
    }

    /// Faces as orbits of [`Net::phi`].
    pub fn faces(&self) -> Vec<Vec<u32>> {
        let mut seen = vec![false; self.nbr.len()];
        let mut faces = Vec::new();
        for h in self.half_edges() {
            if seen[h as usize] {
                continue;
            }
            let mut f = Vec::new();
            let mut x = h;
            while !seen[x as usize] {
                seen[x as usize] = true;
                f.push(x);
                x = self.phi(x);
            }
            faces.push(f);
        }
        faces
    }

    /// Connected components of the underlying 4-valent graph.
    pub fn graph_components(&self) -> usize {
        let n = self.nodes();
        let mut comp = vec![usize::MAX; n];
        let mut count = 0;
        for s in 0..n {
            if comp[s] != usize::MAX {
                continue;
            }
            let mut stack = vec![s];
            comp[s] = count;
            while let Some(v) = stack.pop() {
                let k = if self.is_crossing(v) { 4 } else { 2 };
                for p in 0..k {
                    let w = Self::node(self.nbr[Self::he(v, p) as usize]);
                    if comp[w] == usize::MAX {
                        comp[w] = count;
                        stack.push(w);
                    }
                }
            }
            count += 1;
        }
        count
    }

    /// Euler characteristic test for a spherical embedding of the rotation system.
    pub fn is_planar(&self) -> bool {
        let v = self.nodes() as i64;
        if v == 0 {
            return true;
        }
        let e = self.half_edges().count() as i64 / 2;
        let f = self.faces().len() as i64;
        v - e + f == 1 + self.graph_components() as i64
    }

    /// Consistency of the neighbour involution and of strand directions.
    #[cfg(test)]
    pub fn check(&self) -> Result<(), String> {
        for h in self.half_edges() {
            let t = self.nbr[h as usize];
            if t == NONE || self.nbr[t as usize] != h {
                return Err(format!("half-edge {h} badly linked"));
            }
            if self.is_exit(h) == self.is_exit(t) {
                return Err(format!("edge {h}-{t} has inconsistent direction"));
            }
        }
        Ok(())
    }

    /// Gives every component a direction, running upwards through the lowest-numbered
    /// crossing it meets (on that crossing's first pair). Markers must be absent.
    pub fn orient(&mut self) {
        let n = self.nodes();
        let mut done = vec![[false; 2]; n];
        for v in 0..n {
            for k in 0..2 {
                if done[v][k] {
                    continue;
                }
                self.fwd[v][k] = true;
                done[v][k] = true;
                let mut exit = Self::he(v, k + 2);
                loop {
                    let t = self.nbr[exit as usize];
                    debug_assert_ne!(t, NONE);
                    let (u, pt) = (Self::node(t), Self::port(t));
                    let kp = pt % 2;
                    if done[u][kp] {
                        break;
                    }
                    done[u][kp] = true;
                    self.fwd[u][kp] = pt == kp;
                    exit = self.opp(t);
                }
            }
        }
    }

    // --- Reidemeister moves -------------------------------------------------------

    /// Crossings carrying a monogon face, ascending.
    pub fn r1_sites(&self) -> Vec<usize> {
        (0..self.nodes())
            .filter(|&v| self.is_crossing(v) && (0..4).any(|p| self.phi(Self::he(v, p)) == Self::he(v, p)))
            .collect()
    }

    pub fn apply_r1(&mut self, v: usize) -> Result<(), DiagramError> {
        if v >= self.nodes() || !self.is_crossing(v) || !(0..4).any(|p| self.phi(Self::he(v, p)) == Self::he(v, p)) {
            return Err(DiagramError::BadMove(format!("no kink at crossing {v}")));
        }
        self.splice(&[v]);
        Ok(())
    }

    /// Removable bigons as crossing pairs `(a, b)` with `a < b`, ascending.
    pub fn r2_sites(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for h in self.half_edges() {
            if let Some(pair) = self.bigon_at(h) {
                if !out.contains(&pair) {
                    out.push(pair);
                }
            }
        }
        out.sort();
        out
    }

    fn bigon_at(&self, h1: u32) -> Option<(usize, usize)> {
        let h2 = self.phi(h1);
        if self.phi(h2) != h1 || h1 == h2 {
            return None;
        }
        let (a, b) = (Self::node(h1), Self::node(h2));
        if a == b || !self.is_crossing(a) || !self.is_crossing(b) {
            return None;
        }
        let far = self.nbr[h1 as usize];
        if self.is_over(h1) == self.is_over(far) {
            Some((a.min(b), a.max(b)))
        } else {
            None
        }
    }

    pub fn apply_r2(&mut self, a: usize, b: usize) -> Result<(), DiagramError> {
        let ok = self.half_edges().any(|h| self.bigon_at(h) == Some((a.min(b), a.max(b))));
        if !ok || a == b {
            return Err(DiagramError::BadMove(format!("no removable bigon between {a} and {b}")));
        }
        self.splice(&[a, b]);
        Ok(())
    }

    /// Triangle faces admitting a third move, named by the half-edge that starts the face
    /// at its lowest-numbered corner.
    pub fn r3_sites(&self) -> Vec<u32> {
        let mut out = Vec::new();
        for f in self.faces() {
            if f.len() != 3 {
                continue;
            }
            let h = *f.iter().min().unwrap();
            if self.r3_plan(h).is_some() {
                out.push(h);
            }
        }
        out.sort();
        out
    }

    /// New neighbour pairs realizing the third move on the triangle containing `h1`.
    fn r3_plan(&self, h1: u32) -> Option<Vec<(u32, u32)>> {
        let h2 = self.phi(h1);
        let h3 = self.phi(h2);
        if self.phi(h3) != h1 {
            return None;
        }
        let nodes = [Self::node(h1), Self::node(h2), Self::node(h3)];
        if nodes[0] == nodes[1] || nodes[1] == nodes[2] || nodes[0] == nodes[2] {
            return None;
        }
        if !nodes.iter().all(|&v| self.is_crossing(v)) {
            return None;
        }
        let strands = [(h1, self.nbr[h1 as usize]), (h2, self.nbr[h2 as usize]), (h3, self.nbr[h3 as usize])];
        if !strands.iter().any(|&(p, q)| self.is_over(p) && self.is_over(q)) {
            return None;
        }
        let mut plan = Vec::new();
        for &(p_int, q_int) in &strands {
            let p_ext = self.opp(p_int);
            let q_ext = self.opp(q_int);
            let e1 = self.nbr[p_ext as usize];
            let e2 = self.nbr[q_ext as usize];
            if nodes.contains(&Self::node(e1)) || nodes.contains(&Self::node(e2)) {
                return None;
            }
            plan.push((e1, q_int));
            plan.push((q_ext, p_ext));
            plan.push((p_int, e2));
        }
        Some(plan)
    }

    pub fn apply_r3(&mut self, h: u32) -> Result<(), DiagramError> {
        if h as usize >= self.nbr.len() {
            return Err(DiagramError::BadMove(format!("no face at half-edge {h}")));
        }
        let plan = self.r3_plan(h).ok_or_else(|| DiagramError::BadMove(format!("no third-move triangle at half-edge {h}")))?;
        for (a, b) in plan {
            self.link(a, b);
        }
        Ok(())
    }

    /// Adds a kink on the edge leaving `h`; `loop_right` puts the new monogon on the
    /// right of the strand direction from `h`.
    pub fn apply_r1_up(&mut self, h: u32, loop_right: bool, over: bool) -> Result<(), DiagramError> {
        if h as usize >= self.nbr.len() || self.nbr[h as usize] == NONE {
            return Err(DiagramError::BadMove(format!("no edge at half-edge {h}")));
        }
        let t = self.nbr[h as usize];
        let f = self.is_exit(h);
        let v = self.add_node(Kind::Crossing { over: over as u8 }, [f, if loop_right { !f } else { f }]);
        self.link(h, Self::he(v, 0));
        if loop_right {
            self.link(Self::he(v, 2), Self::he(v, 3));
            self.link(Self::he(v, 1), t);
        } else {
            self.link(Self::he(v, 2), Self::he(v, 1));
            self.link(Self::he(v, 3), t);
        }
        Ok(())
    }

    /// Whether a bigon can be created by pushing the edge leaving `h1` across the edge leaving `h2`.
    pub fn r2_up_ok(&self, h1: u32, h2: u32) -> bool {
        let n = self.nbr.len() as u32;
        if h1 >= n || h2 >= n || h1 == h2 || self.nbr[h1 as usize] == h2 || self.nbr[h1 as usize] == NONE {
            return false;
        }
        let mut x = self.phi(h1);
        while x != h1 {
            if x == h2 {
                return true;
            }
            x = self.phi(x);
        }
        false
    }

    /// Pushes a finger of the edge leaving `h1` across the edge leaving `h2` (both on the
    /// same face), creating two crossings; `first_over` puts the first edge on top.
    pub fn apply_r2_up(&mut self, h1: u32, h2: u32, first_over: bool) -> Result<(), DiagramError> {
        if !self.r2_up_ok(h1, h2) {
            return Err(DiagramError::BadMove(format!("edges at {h1} and {h2} do not share a face")));
        }
        let t1 = self.nbr[h1 as usize];
        let t2 = self.nbr[h2 as usize];
        let f1 = self.is_exit(h1);
        let f2 = self.is_exit(h2);
        let over = if first_over { 0 } else { 1 };
        let l = self.add_node(Kind::Crossing { over }, [f1, f2]);
        let r = self.add_node(Kind::Crossing { over }, [f1, !f2]);
        self.link(h1, Self::he(l, 0));
        self.link(Self::he(l, 1), Self::he(r, 1));
        self.link(Self::he(l, 2), Self::he(r, 0));
        self.link(Self::he(l, 3), t2);
        self.link(Self::he(r, 2), t1);
        self.link(Self::he(r, 3), h2);
        Ok(())
    }
}
