//! Exact Laurent polynomials with big-integer coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

/// A Laurent polynomial in one variable. Zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LaurentPolynomial {
    terms: BTreeMap<i64, BigInt>,
}

impl LaurentPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    /// `c * x^e`
    pub fn monomial(c: impl Into<BigInt>, e: i64) -> Self {
        let mut p = Self::zero();
        p.add_term(e, c.into());
        p
    }

    /// Builds from `(exponent, coefficient)` pairs; repeated exponents are summed.
    pub fn from_terms<C: Into<BigInt>>(terms: impl IntoIterator<Item = (i64, C)>) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c.into());
        }
        p
    }

    fn add_term(&mut self, e: i64, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e).or_insert_with(BigInt::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(|c| c.is_one())
    }

    pub fn coeff(&self, e: i64) -> BigInt {
        self.terms.get(&e).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// Multiply by `x^k`.
    pub fn shift(&self, k: i64) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    /// Substitute `x -> x^k` (k may be negative).
    pub fn substitute_power(&self, k: i64) -> Self {
        let mut p = Self::zero();
        for (e, c) in &self.terms {
            p.add_term(e * k, c.clone());
        }
        p
    }

    /// Scale all exponents down by `k`; `None` if some exponent is not divisible.
    pub fn divide_exponents(&self, k: i64) -> Option<Self> {
        if self.terms.keys().any(|e| e % k != 0) {
            return None;
        }
        Some(Self {
            terms: self.terms.iter().map(|(e, c)| (e / k, c.clone())).collect(),
        })
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Value at `x = -1`.
    pub fn eval_minus_one(&self) -> BigInt {
        self.terms
            .iter()
            .map(|(e, c)| if e.rem_euclid(2) == 0 { c.clone() } else { -c })
            .sum()
    }

    /// Value at an integer point; `None` when a negative power makes it non-integral.
    pub fn eval(&self, x: &BigInt) -> Option<BigInt> {
        if x.is_zero() && self.min_exp().is_some_and(|e| e < 0) {
            return None;
        }
        let mut num = BigInt::zero();
        let lo = self.min_exp().unwrap_or(0).min(0);
        // sum c x^(e - lo), then divide by x^(-lo)
        for (e, c) in &self.terms {
            num += c * num_traits::pow(x.clone(), (e - lo) as usize);
        }
        let den = num_traits::pow(x.clone(), (-lo) as usize);
        if (&num % &den).is_zero() {
            Some(num / den)
        } else {
            None
        }
    }

    /// Canonical representative up to units `±x^k`: lowest exponent 0, leading coefficient positive.
    pub fn normalized(&self) -> Self {
        let Some(lo) = self.min_exp() else {
            return Self::zero();
        };
        let mut p = self.shift(-lo);
        if p.terms.values().next_back().is_some_and(|c| c.is_negative()) {
            p = -p;
        }
        p
    }

    /// Equality up to multiplication by `±x^k`.
    pub fn eq_up_to_units(&self, other: &Self) -> bool {
        self.normalized() == other.normalized()
    }

    /// Exact quotient, `None` if `divisor` does not divide `self` in the Laurent ring.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        let (dlo, dhi) = (divisor.min_exp()?, divisor.max_exp()?);
        let lead = divisor.coeff(dhi);
        let mut rem = self.clone();
        let mut quot = Self::zero();
        while let Some(hi) = rem.max_exp() {
            if hi - dhi < rem.min_exp().unwrap() - dlo {
                return None;
            }
            let c = rem.coeff(hi);
            if !(&c % &lead).is_zero() {
                return None;
            }
            let term = Self::monomial(c / &lead, hi - dhi);
            rem = &rem - &(&term * divisor);
            quot = &quot + &term;
        }
        Some(quot)
    }

    /// Sum of absolute coefficient values.
    pub fn l1_norm(&self) -> BigInt {
        self.terms.values().map(|c| c.abs()).sum()
    }

    /// Render with a named variable; exponents are divided by `denom` (use 2 for half-integer powers).
    pub fn render(&self, var: &str, denom: i64) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (e, c)) in self.terms.iter().enumerate() {
            let exp = if denom == 1 || e % denom == 0 {
                format!("{}", e / denom)
            } else {
                format!("({}/{})", e, denom)
            };
            if i == 0 {
                out.push_str(&format!("{c}*{var}^{exp}"));
            } else if c.is_negative() {
                out.push_str(&format!(" - {}*{var}^{exp}", -c));
            } else {
                out.push_str(&format!(" + {c}*{var}^{exp}"));
            }
        }
        out
    }
}

impl fmt::Display for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render("t", 1))
    }
}

impl Serialize for LaurentPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl Add<&LaurentPolynomial> for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn add(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        let mut p = self.clone();
        for (e, c) in &rhs.terms {
            p.add_term(*e, c.clone());
        }
        p
    }
}

impl Add for LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn add(self, rhs: LaurentPolynomial) -> LaurentPolynomial {
        &self + &rhs
    }
}

impl Sub<&LaurentPolynomial> for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn sub(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        let mut p = self.clone();
        for (e, c) in &rhs.terms {
            p.add_term(*e, -c);
        }
        p
    }
}

impl Sub for LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn sub(self, rhs: LaurentPolynomial) -> LaurentPolynomial {
        &self - &rhs
    }
}

impl Mul<&LaurentPolynomial> for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn mul(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        let mut p = LaurentPolynomial::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                p.add_term(e1 + e2, c1 * c2);
            }
        }
        p
    }
}

impl Mul for LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn mul(self, rhs: LaurentPolynomial) -> LaurentPolynomial {
        &self * &rhs
    }
}

impl Neg for LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn neg(self) -> LaurentPolynomial {
        LaurentPolynomial {
            terms: self.terms.into_iter().map(|(e, c)| (e, -c)).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(terms: &[(i64, i64)]) -> LaurentPolynomial {
        LaurentPolynomial::from_terms(terms.iter().copied())
    }

    #[test]
    fn cancellation_removes_terms() {
        let a = p(&[(1, 2), (-1, 1)]);
        let b = p(&[(1, -2)]);
        assert_eq!(&a + &b, p(&[(-1, 1)]));
        assert!((&a - &a).is_zero());
    }

    #[test]
    fn product_and_eval() {
        let a = p(&[(0, 1), (1, -1), (2, 1)]);
        let b = p(&[(0, 1), (1, 1)]);
        assert_eq!(&a * &b, p(&[(0, 1), (3, 1)]));
        assert_eq!(a.eval_minus_one(), BigInt::from(3));
        assert_eq!(p(&[(-2, 4)]).eval(&BigInt::from(2)), Some(BigInt::from(1)));
        assert_eq!(p(&[(-1, 1)]).eval(&BigInt::from(2)), None);
        let prod = &a * &p(&[(-2, 1), (2, 1)]);
        assert_eq!(prod.div_exact(&p(&[(-2, 1), (2, 1)])), Some(a.clone()));
        assert_eq!(a.div_exact(&b), None);
    }

    #[test]
    fn normalization() {
        let a = p(&[(-3, -1), (-2, 1), (-1, -1)]);
        assert_eq!(a.normalized(), p(&[(0, 1), (1, -1), (2, 1)]));
        assert_eq!(a.render("t", 1), "-1*t^-3 + 1*t^-2 - 1*t^-1");
        assert_eq!(p(&[(1, 1)]).render("t", 2), "1*t^(1/2)");
        assert_eq!(p(&[(0, 2), (1, -3), (2, 1)]).to_string(), "2*t^0 - 3*t^1 + 1*t^2");
        assert_eq!(LaurentPolynomial::zero().to_string(), "0");
    }

    proptest! {
        #[test]
        fn ring_laws(a in proptest::collection::vec((-5i64..5, -9i64..9), 0..6),
                     b in proptest::collection::vec((-5i64..5, -9i64..9), 0..6),
                     c in proptest::collection::vec((-5i64..5, -9i64..9), 0..6)) {
            let (a, b, c) = (p(&a), p(&b), p(&c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!((&a * &b).eval_minus_one(), a.eval_minus_one() * b.eval_minus_one());
        }
    }
}
