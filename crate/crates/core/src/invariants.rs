//! Kauffman bracket, Jones and Alexander polynomials, Goeritz matrices, determinants and
//! the first homology of the double branched cover.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Serialize, Serializer};

use crate::diagram::{Orientation, PlanarDiagram, POSITIVE_OVER_ENTRY_SLOT};
use crate::error::InvariantError;
use crate::matrix::{poly_det, smith_normal_form, AbelianGroupInvariants, IntegerMatrix, PolyMatrix};
use crate::net::Net;
use crate::poly::LaurentPolynomial;

pub const DEFAULT_BRACKET_CUTOFF: usize = 25;

/// `d = -A^2 - A^-2`
fn loop_value() -> LaurentPolynomial {
    LaurentPolynomial::from_terms([(2, -1), (-2, -1)])
}

/// Order in which the sweep absorbs crossings: each next crossing shares as many arcs as
/// possible with those already taken (lowest index on ties).
fn sweep_order(d: &PlanarDiagram) -> Vec<usize> {
    let n = d.crossings.len();
    let mut taken = vec![false; n];
    let mut open: HashMap<u32, usize> = HashMap::new();
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let best = (0..n)
            .filter(|&c| !taken[c])
            .max_by_key(|&c| {
                let shared = d.crossings[c].arcs.iter().filter(|a| open.contains_key(a)).count();
                (shared, std::cmp::Reverse(c))
            })
            .unwrap();
        taken[best] = true;
        order.push(best);
        for a in d.crossings[best].arcs {
            *open.entry(a).or_insert(0) += 1;
            if open[&a] == 2 {
                open.remove(&a);
            }
        }
    }
    order
}

/// Kauffman bracket, normalized so that the crossingless unknot is 1.
pub fn kauffman_bracket(d: &PlanarDiagram, cutoff: usize) -> Result<LaurentPolynomial, InvariantError> {
    let n = d.crossings.len();
    if n > cutoff {
        return Err(InvariantError::TooLarge { crossings: n, cutoff });
    }
    d.structure()?;
    let dv = loop_value();
    // state: sorted list of matched frontier arc pairs -> sum over partial states of A^(a-b) d^loops
    let mut states: HashMap<Vec<(u32, u32)>, LaurentPolynomial> = HashMap::new();
    states.insert(Vec::new(), LaurentPolynomial::one());
    for c in sweep_order(d) {
        let arcs = d.crossings[c].arcs;
        let mut next: HashMap<Vec<(u32, u32)>, LaurentPolynomial> = HashMap::new();
        for (matching, poly) in states {
            for (smoothing, weight) in [([(0usize, 1usize), (2, 3)], 1i64), ([(0, 3), (1, 2)], -1)] {
                let (new_matching, loops) = absorb(&matching, &arcs, &smoothing);
                let mut term = poly.shift(weight);
                for _ in 0..loops {
                    term = &term * &dv;
                }
                let slot = next.entry(new_matching).or_default();
                *slot = &*slot + &term;
            }
        }
        next.retain(|_, p| !p.is_zero());
        states = next;
    }
    let mut total = states.remove(&Vec::new()).unwrap_or_default();
    for _ in 0..d.loops {
        total = &total * &dv;
    }
    if n == 0 && d.loops == 0 {
        return Ok(LaurentPolynomial::one());
    }
    Ok(total.div_exact(&dv).expect("bracket divisible by the loop value"))
}

/// Joins the arc ends at one crossing according to a smoothing.
fn absorb(matching: &[(u32, u32)], arcs: &[u32; 4], smoothing: &[(usize, usize); 2]) -> (Vec<(u32, u32)>, usize) {
    // multigraph on arc labels; every arc end processed so far is one edge endpoint
    let mut edges: Vec<(u32, u32)> = matching.to_vec();
    for &(i, j) in smoothing {
        edges.push((arcs[i], arcs[j]));
    }
    let mut adj: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
    for (k, &(a, b)) in edges.iter().enumerate() {
        adj.entry(a).or_default().push(k);
        adj.entry(b).or_default().push(k);
    }
    let mut used = vec![false; edges.len()];
    let mut out = Vec::new();
    let ends: Vec<u32> = adj.iter().filter(|(_, es)| es.len() == 1).map(|(a, _)| *a).collect();
    for &start in &ends {
        let first = adj[&start][0];
        if used[first] {
            continue;
        }
        let (mut at, mut e) = (start, first);
        loop {
            used[e] = true;
            let (a, b) = edges[e];
            let other = if a == at { b } else { a };
            let es = &adj[&other];
            match es.iter().find(|&&k| !used[k]) {
                Some(&k) if es.len() == 2 => {
                    at = other;
                    e = k;
                }
                _ => {
                    out.push((start.min(other), start.max(other)));
                    break;
                }
            }
        }
    }
    let mut loops = 0;
    for k in 0..edges.len() {
        if used[k] {
            continue;
        }
        loops += 1;
        let mut e = k;
        let mut at = edges[k].0;
        loop {
            used[e] = true;
            let (a, b) = edges[e];
            let other = if a == at { b } else { a };
            match adj[&other].iter().find(|&&j| !used[j]) {
                Some(&j) => {
                    at = other;
                    e = j;
                }
                None => break,
            }
        }
    }
    out.sort_unstable();
    (out, loops)
}

/// Jones polynomial stored in powers of `t^(1/2)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JonesPolynomial {
    pub half_powers: LaurentPolynomial,
}

impl JonesPolynomial {
    /// The polynomial in `t`, when all powers are integral.
    pub fn integral(&self) -> Option<LaurentPolynomial> {
        self.half_powers.divide_exponents(2)
    }

    pub fn is_one(&self) -> bool {
        self.half_powers.is_one()
    }

    /// `V(t) -> V(1/t)`
    pub fn inverted(&self) -> Self {
        Self { half_powers: self.half_powers.substitute_power(-1) }
    }
}

impl fmt::Display for JonesPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.half_powers.render("t", 2))
    }
}

impl Serialize for JonesPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// `(-A^3)^(-w) <D>` with `A = t^(-1/4)`.
pub fn jones(d: &PlanarDiagram, o: &Orientation, cutoff: usize) -> Result<JonesPolynomial, InvariantError> {
    let bracket = kauffman_bracket(d, cutoff)?;
    let w = d.writhe(o)?;
    let sign = if w % 2 == 0 { 1 } else { -1 };
    let normalized = LaurentPolynomial::monomial(sign, -3 * w) * bracket;
    let mut half = LaurentPolynomial::zero();
    for (e, c) in normalized.terms() {
        debug_assert_eq!(e % 2, 0, "bracket exponents are even after normalization");
        half = &half + &LaurentPolynomial::monomial(c.clone(), -e / 2);
    }
    Ok(JonesPolynomial { half_powers: half })
}

/// Wirtinger generators: PD arcs merged across over-passes.
fn overarc_classes(d: &PlanarDiagram) -> BTreeMap<u32, usize> {
    let mut parent: BTreeMap<u32, u32> = BTreeMap::new();
    fn find(p: &mut BTreeMap<u32, u32>, a: u32) -> u32 {
        let q = *p.get(&a).unwrap_or(&a);
        if q == a {
            return a;
        }
        let r = find(p, q);
        p.insert(a, r);
        r
    }
    for x in &d.crossings {
        for a in x.arcs {
            parent.entry(a).or_insert(a);
        }
        let (a, b) = (find(&mut parent, x.arcs[1]), find(&mut parent, x.arcs[3]));
        if a != b {
            parent.insert(a, b);
        }
    }
    let labels: Vec<u32> = parent.keys().copied().collect();
    let mut index: BTreeMap<u32, usize> = BTreeMap::new();
    let mut out = BTreeMap::new();
    for a in labels {
        let r = find(&mut parent, a);
        let k = index.len();
        let i = *index.entry(r).or_insert(k);
        out.insert(a, i);
    }
    out
}

/// The Alexander matrix from Fox derivatives of the Wirtinger relations (one row per crossing).
pub fn alexander_matrix(d: &PlanarDiagram) -> Result<PolyMatrix, InvariantError> {
    let st = d.structure()?;
    let classes = overarc_classes(d);
    let g = classes.values().max().map_or(0, |m| m + 1);
    let t = |e: i64, c: i64| LaurentPolynomial::monomial(c, e);
    let mut m: PolyMatrix = vec![vec![LaurentPolynomial::zero(); g]; d.crossings.len()];
    for (c, x) in d.crossings.iter().enumerate() {
        let (i, j, k) = (classes[&x.arcs[0]], classes[&x.arcs[2]], classes[&x.arcs[1]]);
        let positive = st.over_entry[c] == POSITIVE_OVER_ENTRY_SLOT;
        let (ek, ei, ej) = if positive {
            (&t(0, 1) - &t(1, 1), t(1, 1), t(0, -1))
        } else {
            (&t(1, 1) - &t(0, 1), t(0, 1), t(1, -1))
        };
        m[c][k] = &m[c][k] + &ek;
        m[c][i] = &m[c][i] + &ei;
        m[c][j] = &m[c][j] + &ej;
    }
    Ok(m)
}

fn require_knot(d: &PlanarDiagram) -> Result<(), InvariantError> {
    let k = d.count_components()?;
    if k != 1 {
        return Err(InvariantError::NotAKnot(k));
    }
    Ok(())
}

/// Alexander polynomial of a knot, normalized to lowest exponent 0 and positive leading coefficient.
/// The orientation does not affect the normalized result for knots.
pub fn alexander(d: &PlanarDiagram) -> Result<LaurentPolynomial, InvariantError> {
    require_knot(d)?;
    if d.crossings.is_empty() {
        return Ok(LaurentPolynomial::one());
    }
    let m = alexander_matrix(d)?;
    let n = m.len();
    let minor: PolyMatrix = m[..n - 1].iter().map(|row| row[..n - 1].to_vec()).collect();
    Ok(poly_det(&minor).normalized())
}

/// Checkerboard colouring; `true` marks the white faces. The face at the corner between
/// slots 0 and 1 of crossing 0 is white.
fn checkerboard(net: &Net) -> (Vec<Vec<u32>>, Vec<usize>, Vec<bool>) {
    let faces = net.faces();
    let mut face_of = vec![usize::MAX; net.nbr.len()];
    for (i, f) in faces.iter().enumerate() {
        for &h in f {
            face_of[h as usize] = i;
        }
    }
    let mut color: Vec<Option<bool>> = vec![None; faces.len()];
    for seed in 0..faces.len() {
        if color[seed].is_some() {
            continue;
        }
        color[seed] = Some(true);
        let mut stack = vec![seed];
        while let Some(f) = stack.pop() {
            let c = color[f].unwrap();
            for &h in &faces[f] {
                let g = face_of[net.nbr[h as usize] as usize];
                if color[g].is_none() {
                    color[g] = Some(!c);
                    stack.push(g);
                }
            }
        }
    }
    (faces, face_of, color.into_iter().map(|c| c.unwrap()).collect())
}

/// The Goeritz form on the white regions with the last one deleted.
pub fn goeritz_matrix(d: &PlanarDiagram) -> Result<IntegerMatrix, InvariantError> {
    let net = Net::from_diagram(d)?;
    if net.graph_components() > 1 || (d.loops > 0 && !d.crossings.is_empty()) {
        return Err(InvariantError::Diagram(crate::error::DiagramError::Traversal(
            "goeritz matrix needs a connected diagram".into(),
        )));
    }
    if d.crossings.is_empty() {
        return Ok(IntegerMatrix::zeros(0, 0));
    }
    let (_, face_of, white) = checkerboard(&net);
    let mut index = BTreeMap::new();
    for (f, &w) in white.iter().enumerate() {
        if w {
            let k = index.len();
            index.insert(f, k);
        }
    }
    let r = index.len();
    let mut g = IntegerMatrix::zeros(r, r);
    for c in 0..d.crossings.len() {
        let corner = |s: usize| face_of[Net::he(c, s) as usize];
        let (wa, wb, eta) = if white[corner(1)] { (corner(1), corner(3), 1) } else { (corner(0), corner(2), -1) };
        let (i, j) = (index[&wa], index[&wb]);
        if i == j {
            continue;
        }
        g.add_to(i, j, -eta);
        g.add_to(j, i, -eta);
        g.add_to(i, i, eta);
        g.add_to(j, j, eta);
    }
    Ok(g.minor(r - 1, r - 1))
}

/// Diagrams of the split pieces: one per connected crossing graph, plus the free loops.
fn split_pieces(d: &PlanarDiagram) -> Result<Vec<PlanarDiagram>, InvariantError> {
    let net = Net::from_diagram(d)?;
    let n = net.nodes();
    let mut comp = vec![usize::MAX; n];
    let mut count = 0;
    for s in 0..n {
        if comp[s] != usize::MAX {
            continue;
        }
        let mut stack = vec![s];
        comp[s] = count;
        while let Some(v) = stack.pop() {
            for p in 0..4 {
                let w = Net::node(net.nbr[Net::he(v, p) as usize]);
                if comp[w] == usize::MAX {
                    comp[w] = count;
                    stack.push(w);
                }
            }
        }
        count += 1;
    }
    let mut pieces: Vec<PlanarDiagram> = (0..count)
        .map(|k| PlanarDiagram {
            crossings: d.crossings.iter().enumerate().filter(|(c, _)| comp[*c] == k).map(|(_, x)| *x).collect(),
            loops: 0,
            geometry: None,
        })
        .collect();
    for _ in 0..d.loops {
        pieces.push(PlanarDiagram::unlink(1));
    }
    Ok(pieces)
}

/// Absolute determinant of the Goeritz matrix; 0 for split diagrams.
pub fn determinant(d: &PlanarDiagram) -> Result<BigInt, InvariantError> {
    let pieces = split_pieces(d)?;
    if pieces.len() > 1 {
        return Ok(BigInt::zero());
    }
    if d.crossings.is_empty() {
        return Ok(BigInt::from(1));
    }
    Ok(goeritz_matrix(d)?.determinant().abs())
}

/// First homology of the double branched cover, unit factors dropped.
/// Split pieces contribute a direct sum plus one free summand per extra piece.
pub fn dbc_homology(d: &PlanarDiagram) -> Result<AbelianGroupInvariants, InvariantError> {
    let pieces = split_pieces(d)?;
    let mut factors = Vec::new();
    for p in &pieces {
        if p.crossings.is_empty() {
            continue;
        }
        factors.extend(smith_normal_form(&goeritz_matrix(p)?).without_units().factors);
    }
    factors.extend(std::iter::repeat_n(BigInt::zero(), pieces.len().saturating_sub(1)));
    Ok(normalize_group(factors))
}

/// Recombine arbitrary cyclic factors into a divisibility chain.
fn normalize_group(factors: Vec<BigInt>) -> AbelianGroupInvariants {
    let n = factors.len();
    let mut m = IntegerMatrix::zeros(n, n);
    for (i, f) in factors.into_iter().enumerate() {
        m.set(i, i, f);
    }
    smith_normal_form(&m).without_units()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pd(s: &str) -> PlanarDiagram {
        PlanarDiagram::parse_pd(s).unwrap()
    }

    fn lp(t: &[(i64, i64)]) -> LaurentPolynomial {
        LaurentPolynomial::from_terms(t.iter().copied())
    }

    fn left_trefoil() -> PlanarDiagram {
        pd("PD[X(1,4,2,5), X(3,6,4,1), X(5,2,6,3)]")
    }

    #[test]
    fn bracket_small_cases() {
        let c = DEFAULT_BRACKET_CUTOFF;
        assert!(kauffman_bracket(&PlanarDiagram::unlink(1), c).unwrap().is_one());
        let kink = pd("PD[X(1,1,2,2)]");
        let b = kauffman_bracket(&kink, c).unwrap();
        assert!(b == lp(&[(3, -1)]) || b == lp(&[(-3, -1)]), "{b}");
        let hopf = pd("PD[X(4,1,3,2), X(2,3,1,4)]");
        assert_eq!(kauffman_bracket(&hopf, c).unwrap(), lp(&[(4, -1), (-4, -1)]));
    }

    #[test]
    fn positive_kink_bracket() {
        // the positive kink has writhe +1, bracket -A^3
        let kink = pd("PD[X(1,1,2,2)]");
        let w = kink.writhe(&Orientation::default()).unwrap();
        let b = kauffman_bracket(&kink, 25).unwrap();
        assert_eq!(b, lp(&[(3 * w, -1)]));
    }

    #[test]
    fn jones_of_left_trefoil() {
        let d = left_trefoil();
        assert_eq!(d.writhe(&Orientation::default()).unwrap(), -3);
        let j = jones(&d, &Orientation::default(), 25).unwrap().integral().unwrap();
        assert_eq!(j, lp(&[(-4, -1), (-3, 1), (-1, 1)]));
        let jm = jones(&d.mirror(), &Orientation::default(), 25).unwrap();
        assert_eq!(jm, jones(&d, &Orientation::default(), 25).unwrap().inverted());
    }

    #[test]
    fn cutoff_is_explicit() {
        let e = kauffman_bracket(&left_trefoil(), 2).unwrap_err();
        assert!(matches!(e, InvariantError::TooLarge { crossings: 3, cutoff: 2 }));
    }

    #[test]
    fn alexander_examples() {
        assert!(alexander(&PlanarDiagram::unlink(1)).unwrap().is_one());
        assert_eq!(alexander(&left_trefoil()).unwrap(), lp(&[(0, 1), (1, -1), (2, 1)]));
        let hopf = pd("PD[X(4,1,3,2), X(2,3,1,4)]");
        assert!(matches!(alexander(&hopf), Err(InvariantError::NotAKnot(2))));
    }

    #[test]
    fn goeritz_and_homology_of_trefoil() {
        let d = left_trefoil();
        assert_eq!(determinant(&d).unwrap(), BigInt::from(3));
        let h = dbc_homology(&d).unwrap();
        assert_eq!(h.to_string(), "Z/3");
        assert!(dbc_homology(&PlanarDiagram::unlink(1)).unwrap().is_trivial());
        let kink = pd("PD[X(1,1,2,2)]");
        assert_eq!(determinant(&kink).unwrap(), BigInt::from(1));
        assert!(goeritz_matrix(&kink).unwrap().rows() <= 1);
    }

    #[test]
    fn split_link_has_zero_determinant() {
        let d = pd("PD[X(1,1,2,2); loops=1]");
        assert_eq!(determinant(&d).unwrap(), BigInt::zero());
        assert_eq!(dbc_homology(&d).unwrap().to_string(), "Z");
    }
}
