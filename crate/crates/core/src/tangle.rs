//! Rational 2-string tangles as twist words with exact fractions.

use std::fmt;

use num_integer::Integer;
use serde::{Serialize, Serializer};

use crate::diagram::PlanarDiagram;
use crate::error::TangleError;
use crate::morse::{Closure, Event, Morse};

/// A reduced fraction `num/den` with `den >= 0`; `1/0` is the infinity tangle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Fraction {
    num: i64,
    den: i64,
}

impl Fraction {
    pub fn new(num: i64, den: i64) -> Result<Self, TangleError> {
        if num == 0 && den == 0 {
            return Err(TangleError::Indeterminate);
        }
        let g = num.gcd(&den);
        let (mut n, mut d) = (num / g, den / g);
        if d < 0 || (d == 0 && n < 0) {
            n = -n;
            d = -d;
        }
        Ok(Self { num: n, den: d })
    }

    pub fn integer(k: i64) -> Self {
        Self { num: k, den: 1 }
    }

    pub fn infinity() -> Self {
        Self { num: 1, den: 0 }
    }

    pub fn num(&self) -> i64 {
        self.num
    }

    pub fn den(&self) -> i64 {
        self.den
    }

    pub fn is_infinite(&self) -> bool {
        self.den == 0
    }

    pub fn add_integer(self, k: i64) -> Self {
        if self.is_infinite() {
            self
        } else {
            Self::new(self.num + k * self.den, self.den).unwrap()
        }
    }

    pub fn recip(self) -> Self {
        Self::new(self.den, self.num).unwrap()
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl Serialize for Fraction {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TwistOp {
    /// Horizontal twists on the right-hand ends: `f -> f + k`.
    H(i64),
    /// Vertical twists on the top ends: `f -> 1/(k + 1/f)`.
    V(i64),
    /// Replace the starting 0-tangle by the infinity tangle; only meaningful first.
    Infinity,
}

impl fmt::Display for TwistOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TwistOp::H(k) => write!(f, "H({k})"),
            TwistOp::V(k) => write!(f, "V({k})"),
            TwistOp::Infinity => f.write_str("INF"),
        }
    }
}

/// Endpoints, used when placing tangles.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Endpoint {
    NW,
    NE,
    SW,
    SE,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalTangle {
    word: Vec<TwistOp>,
    fraction: Fraction,
}

pub fn apply_op(f: Fraction, op: TwistOp) -> Fraction {
    match op {
        TwistOp::H(k) => f.add_integer(k),
        TwistOp::V(k) => f.recip().add_integer(k).recip(),
        TwistOp::Infinity => Fraction::infinity(),
    }
}

impl RationalTangle {
    pub fn zero() -> Self {
        Self { word: vec![], fraction: Fraction::integer(0) }
    }

    pub fn from_word(word: Vec<TwistOp>) -> Self {
        let fraction = word.iter().fold(Fraction::integer(0), |f, op| apply_op(f, *op));
        Self { word, fraction }
    }

    pub fn then(mut self, op: TwistOp) -> Self {
        self.fraction = apply_op(self.fraction, op);
        self.word.push(op);
        self
    }

    pub fn word(&self) -> &[TwistOp] {
        &self.word
    }

    pub fn fraction(&self) -> Fraction {
        self.fraction
    }

    pub fn crossing_count(&self) -> usize {
        self.word
            .iter()
            .map(|op| match op {
                TwistOp::H(k) | TwistOp::V(k) => k.unsigned_abs() as usize,
                TwistOp::Infinity => 0,
            })
            .sum()
    }

    pub fn word_string(&self) -> String {
        self.word.iter().map(|o| o.to_string()).collect::<Vec<_>>().join(" ")
    }

    /// Strand diagram from (SW, SE) at the bottom to (NW, NE) at the top.
    pub fn morse(&self) -> Morse {
        realize(&self.word)
    }

    /// Joins NW to NE and SW to SE.
    pub fn numerator_closure(&self) -> PlanarDiagram {
        let mut m = Morse::new(0);
        m.push(Event::Birth { pos: 0 });
        m.append_at(&self.morse(), 0);
        m.push(Event::Death { pos: 0 });
        m.build(Closure::None).diagram
    }

    /// Joins NW to SW and NE to SE.
    pub fn denominator_closure(&self) -> PlanarDiagram {
        self.morse().build(Closure::Braid).diagram
    }
}

/// Evaluates the word from the 0-tangle.
pub fn fraction_of_tangle(t: &RationalTangle) -> Fraction {
    t.word.iter().fold(Fraction::integer(0), |f, op| apply_op(f, *op))
}

/// Integer tangle `[k]` as a plat: `k` crossings joined alternately by minima and maxima.
pub fn integer_tangle(k: i64) -> Morse {
    let mut m = Morse::new(2);
    if k == 0 {
        m.push(Event::Death { pos: 0 });
        m.push(Event::Birth { pos: 0 });
        return m;
    }
    let n = k.unsigned_abs() as usize;
    for i in 0..n - 1 {
        m.push(Event::Birth { pos: 2 * i + 1 });
    }
    for i in 0..n {
        m.push(Event::Cross { pos: 2 * i, slash_over: k > 0 });
    }
    for _ in 0..n - 1 {
        m.push(Event::Death { pos: 1 });
    }
    m
}

fn realize(word: &[TwistOp]) -> Morse {
    let mut ops = word.iter().peekable();
    let mut cur = match ops.peek() {
        Some(TwistOp::Infinity) => {
            ops.next();
            Morse::new(2)
        }
        Some(TwistOp::H(k)) => {
            let k = *k;
            ops.next();
            integer_tangle(k)
        }
        _ => integer_tangle(0),
    };
    for op in ops {
        match *op {
            TwistOp::H(k) => {
                let mut m = Morse::new(2);
                m.push(Event::Birth { pos: 1 });
                m.append_at(&cur, 0);
                m.append_at(&integer_tangle(k), 2);
                m.push(Event::Death { pos: 1 });
                cur = m;
            }
            TwistOp::V(k) => {
                for _ in 0..k.unsigned_abs() {
                    cur.push(Event::Cross { pos: 0, slash_over: k > 0 });
                }
            }
            TwistOp::Infinity => {
                cur = Morse::new(2);
            }
        }
    }
    cur
}

/// Regular continued fraction with all quotients of the sign of `f`.
pub fn tangle_from_fraction(f: Fraction) -> RationalTangle {
    if f.is_infinite() {
        return RationalTangle::from_word(vec![TwistOp::Infinity]);
    }
    if f.num() == 0 {
        return RationalTangle::zero();
    }
    let sign = f.num().signum();
    let (mut p, mut q) = (f.num().abs(), f.den());
    let mut quotients = Vec::new();
    while q != 0 {
        quotients.push(p / q);
        let r = p % q;
        p = q;
        q = r;
    }
    // the outermost operation must be horizontal: make the length odd
    if quotients.len() % 2 == 0 {
        let last = quotients.pop().unwrap();
        quotients.push(last - 1);
        quotients.push(1);
    }
    let k = quotients.len();
    let mut word = Vec::with_capacity(k);
    for (i, a) in quotients.iter().enumerate().rev() {
        // innermost quotient is horizontal on the 0-tangle, then alternate
        let op = if (k - 1 - i) % 2 == 0 { TwistOp::H(sign * a) } else { TwistOp::V(sign * a) };
        word.push(op);
    }
    if word.len() > 1 && word.last() == Some(&TwistOp::H(0)) {
        word.pop();
    }
    let t = RationalTangle::from_word(word);
    debug_assert_eq!(t.fraction(), f);
    t
}

/// `(npq + n + p)/(pq + 1)`; the infinity fraction when only the denominator vanishes.
pub fn h1_fraction(n: i64, p: i64, q: i64) -> Result<Fraction, TangleError> {
    Fraction::new(n * p * q + n + p, p * q + 1)
}

/// The twist word of the region combining the `p`, `q` and `n` boxes.
pub fn h1_word(n: i64, p: i64, q: i64) -> RationalTangle {
    RationalTangle::from_word(vec![TwistOp::H(p), TwistOp::V(q), TwistOp::H(n)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariants::determinant;
    use proptest::prelude::*;

    fn fr(a: i64, b: i64) -> Fraction {
        Fraction::new(a, b).unwrap()
    }

    #[test]
    fn integer_and_zero_tangles() {
        let t = tangle_from_fraction(fr(3, 1));
        assert_eq!(t.word(), &[TwistOp::H(3)]);
        assert_eq!(t.fraction(), fr(3, 1));
        assert!(tangle_from_fraction(fr(0, 1)).word().is_empty());
        assert_eq!(fraction_of_tangle(&RationalTangle::zero()), fr(0, 1));
    }

    #[test]
    fn five_quarters() {
        let t = tangle_from_fraction(fr(5, 4));
        assert_eq!(fraction_of_tangle(&t), fr(5, 4));
        assert_eq!(t.word_string(), "H(1) V(3) H(1)");
    }

    #[test]
    fn h1_fraction_values() {
        assert_eq!(h1_fraction(1, 0, 3).unwrap(), fr(1, 1));
        assert_eq!(h1_fraction(1, 1, 3).unwrap(), fr(5, 4));
        assert_eq!(h1_fraction(-1, 1, -3).unwrap(), fr(-3, 2));
        assert_eq!(h1_fraction(2, 1, -1).unwrap(), Fraction::infinity());
        assert_eq!(h1_fraction(0, 1, -1).unwrap(), Fraction::infinity());
        assert_eq!(Fraction::new(0, 0), Err(TangleError::Indeterminate));
    }

    #[test]
    fn closures_of_integer_tangles() {
        let z = RationalTangle::zero();
        let n = z.numerator_closure();
        assert_eq!(n.count_components().unwrap(), 2);
        assert_eq!(determinant(&n).unwrap(), 0u32.into());
        let three = tangle_from_fraction(fr(3, 1));
        assert_eq!(determinant(&three.numerator_closure()).unwrap(), 3u32.into());
        let d = three.denominator_closure();
        assert_eq!(d.count_components().unwrap(), 1);
        assert_eq!(determinant(&d).unwrap(), 1u32.into());
        assert_eq!(three.numerator_closure().crossing_count(), 3);
    }

    #[test]
    fn render_word() {
        let t = RationalTangle::from_word(vec![TwistOp::H(3), TwistOp::V(-2), TwistOp::H(1)]);
        assert_eq!(t.word_string(), "H(3) V(-2) H(1)");
        assert_eq!(t.fraction().to_string(), "2/5");
    }

    proptest! {
        #[test]
        fn round_trip_fraction(a in -50i64..=50, b in 0i64..=50) {
            prop_assume!(a != 0 || b != 0);
            let f = fr(a, b);
            let t = tangle_from_fraction(f);
            prop_assert_eq!(fraction_of_tangle(&t), f);
        }

        #[test]
        fn closure_determinants_match_fraction(ops in proptest::collection::vec((any::<bool>(), -3i64..=3), 1..5)) {
            let word: Vec<TwistOp> = ops.iter().map(|&(h, k)| if h { TwistOp::H(k) } else { TwistOp::V(k) }).collect();
            let t = RationalTangle::from_word(word);
            let f = t.fraction();
            let n = t.numerator_closure();
            let d = t.denominator_closure();
            prop_assert_eq!(n.crossing_count(), t.crossing_count());
            prop_assert_eq!(determinant(&n).unwrap(), (f.num().unsigned_abs()).into());
            prop_assert_eq!(determinant(&d).unwrap(), (f.den().unsigned_abs()).into());
        }
    }
}
