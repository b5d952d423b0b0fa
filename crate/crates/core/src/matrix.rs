//! Integer matrices, Smith normal form, and exact determinants of Laurent-polynomial matrices.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::poly::LaurentPolynomial;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntegerMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged matrix");
            for (j, v) in row.iter().enumerate() {
                m.set(i, j, BigInt::from(*v));
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn add_to(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.cols + j] += v;
    }

    /// Copy with row `r` and column `c` removed.
    pub fn minor(&self, r: usize, c: usize) -> Self {
        let mut m = Self::zeros(self.rows - 1, self.cols - 1);
        for i in 0..self.rows {
            if i == r {
                continue;
            }
            for j in 0..self.cols {
                if j == c {
                    continue;
                }
                let (ii, jj) = (i - (i > r) as usize, j - (j > c) as usize);
                m.set(ii, jj, self.get(i, j).clone());
            }
        }
        m
    }

    /// Determinant by fraction-free (Bareiss) elimination. The empty matrix has determinant 1.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        let mut a: Vec<Vec<BigInt>> = (0..n).map(|i| self.data[i * n..(i + 1) * n].to_vec()).collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        if n == 0 {
            return BigInt::one();
        }
        sign * &a[n - 1][n - 1]
    }
}

impl fmt::Display for IntegerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}

impl Serialize for IntegerMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).to_string()).collect())
            .collect();
        rows.serialize(s)
    }
}

/// Invariant factors `d1 | d2 | ... | dk` of a finitely generated abelian group; 0 stands for a free summand.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianGroupInvariants {
    pub factors: Vec<BigInt>,
}

impl AbelianGroupInvariants {
    /// Drop unit factors (they contribute trivial summands).
    pub fn without_units(&self) -> Self {
        Self { factors: self.factors.iter().filter(|d| !d.is_one()).cloned().collect() }
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.iter().all(|d| d.is_one())
    }

    /// Group order, `None` when infinite.
    pub fn order(&self) -> Option<BigInt> {
        if self.factors.iter().any(|d| d.is_zero()) {
            None
        } else {
            Some(self.factors.iter().product())
        }
    }

    pub fn divisibility_chain_holds(&self) -> bool {
        self.factors.windows(2).all(|w| {
            if w[0].is_zero() {
                w[1].is_zero()
            } else {
                (&w[1] % &w[0]).is_zero()
            }
        })
    }
}

impl fmt::Display for AbelianGroupInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .factors
            .iter()
            .filter(|d| !d.is_one())
            .map(|d| if d.is_zero() { "Z".to_string() } else { format!("Z/{d}") })
            .collect();
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

impl Serialize for AbelianGroupInvariants {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Smith normal form by row/column reduction, pivoting on the smallest nonzero entry.
/// Returns `min(rows, cols)` diagonal entries (nonnegative) in divisibility order,
/// plus one 0 per missing column when `cols > rows`.
pub fn smith_normal_form(m: &IntegerMatrix) -> AbelianGroupInvariants {
    let (r, c) = (m.rows, m.cols);
    let mut a: Vec<Vec<BigInt>> = (0..r).map(|i| m.data[i * c..(i + 1) * c].to_vec()).collect();
    let mut diag = Vec::new();
    let mut t = 0;
    while t < r.min(c) {
        // smallest nonzero entry in the remaining block
        let mut best: Option<(usize, usize)> = None;
        for i in t..r {
            for j in t..c {
                if !a[i][j].is_zero() && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        let mut done = true;
        for i in t + 1..r {
            if a[i][t].is_zero() {
                continue;
            }
            let q = a[i][t].div_floor(&a[t][t]);
            for j in t..c {
                let v = &q * &a[t][j];
                a[i][j] -= v;
            }
            if !a[i][t].is_zero() {
                done = false;
            }
        }
        for j in t + 1..c {
            if a[t][j].is_zero() {
                continue;
            }
            let q = a[t][j].div_floor(&a[t][t]);
            for row in a.iter_mut().skip(t) {
                let v = &q * &row[t];
                row[j] -= v;
            }
            if !a[t][j].is_zero() {
                done = false;
            }
        }
        if !done {
            continue;
        }
        // pivot must divide the rest of the block
        let bad = (t + 1..r).flat_map(|i| (t + 1..c).map(move |j| (i, j))).find(|&(i, j)| !(&a[i][j] % &a[t][t]).is_zero());
        if let Some((i, _)) = bad {
            for j in t..c {
                let v = a[i][j].clone();
                a[t][j] += v;
            }
            continue;
        }
        diag.push(a[t][t].abs());
        t += 1;
    }
    while diag.len() < r.min(c) {
        diag.push(BigInt::zero());
    }
    for _ in r..c {
        diag.push(BigInt::zero());
    }
    AbelianGroupInvariants { factors: diag }
}

/// Square matrix with Laurent polynomial entries.
pub type PolyMatrix = Vec<Vec<LaurentPolynomial>>;

/// Symbolic determinant by cofactor expansion. Exponential; intended for small matrices and testing.
pub fn poly_det_cofactor(m: &PolyMatrix) -> LaurentPolynomial {
    let n = m.len();
    if n == 0 {
        return LaurentPolynomial::one();
    }
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = LaurentPolynomial::zero();
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let sub: PolyMatrix = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, v)| v.clone()).collect())
            .collect();
        let term = &m[0][j] * &poly_det_cofactor(&sub);
        acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    acc
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    r
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for sp in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(sp) {
            return n == sp;
        }
    }
    let (mut d, mut s) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'bases: for a in [2u64, 325, 9375, 28178, 450775, 9780504, 1795265022] {
        let a = a % n;
        if a == 0 {
            continue;
        }
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// Primes just below 2^61, in decreasing order.
fn primes(count: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(count);
    let mut c = (1u64 << 61) - 1;
    while out.len() < count {
        if is_prime_u64(c) {
            out.push(c);
        }
        c -= 2;
    }
    out
}

fn det_mod(mut a: Vec<Vec<u64>>, p: u64) -> u64 {
    let n = a.len();
    let mut det = 1u64;
    for k in 0..n {
        let Some(piv) = (k..n).find(|&i| a[i][k] != 0) else { return 0 };
        if piv != k {
            a.swap(piv, k);
            det = (p - det) % p;
        }
        det = mul_mod(det, a[k][k], p);
        let inv = pow_mod(a[k][k], p - 2, p);
        for i in k + 1..n {
            if a[i][k] == 0 {
                continue;
            }
            let f = mul_mod(a[i][k], inv, p);
            for j in k..n {
                let sub = mul_mod(f, a[k][j], p);
                a[i][j] = (a[i][j] + p - sub) % p;
            }
        }
    }
    det
}

fn residue(c: &BigInt, p: u64) -> u64 {
    c.mod_floor(&BigInt::from(p)).to_u64().expect("residue fits")
}

/// Interpolate the polynomial of degree <= xs.len()-1 through `(xs, ys)` mod p (Newton form),
/// returning ascending coefficients.
fn interpolate_mod(xs: &[u64], ys: &[u64], p: u64) -> Vec<u64> {
    let n = xs.len();
    let mut coef = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            let num = (coef[i] + p - coef[i - 1]) % p;
            let den = (xs[i] + p - xs[i - j]) % p;
            coef[i] = mul_mod(num, pow_mod(den, p - 2, p), p);
        }
    }
    // expand Newton basis into monomials
    let mut out = vec![0u64; n];
    for k in (0..n).rev() {
        // out = out * (x - xs[k]) + coef[k]
        let mut next = vec![0u64; n];
        for d in 0..n {
            if out[d] == 0 {
                continue;
            }
            if d + 1 < n {
                next[d + 1] = (next[d + 1] + out[d]) % p;
            }
            next[d] = (next[d] + p - mul_mod(out[d], xs[k] % p, p)) % p;
        }
        next[0] = (next[0] + coef[k]) % p;
        out = next;
    }
    out
}

/// Exact determinant of a square Laurent-polynomial matrix by evaluation and interpolation
/// modulo several large primes, recombined by the Chinese remainder theorem.
///
/// Each row is first shifted to a plain polynomial; the number of primes is chosen from a
/// Hadamard-type bound on the coefficients, so the result is exact.
pub fn poly_det(m: &PolyMatrix) -> LaurentPolynomial {
    let n = m.len();
    if n == 0 {
        return LaurentPolynomial::one();
    }
    let mut shift_total = 0i64;
    let mut rows: Vec<Vec<LaurentPolynomial>> = Vec::with_capacity(n);
    let mut degree = 0i64;
    let mut log2_bound = 0f64;
    for row in m {
        assert_eq!(row.len(), n, "poly_det needs a square matrix");
        let lo = row.iter().filter_map(|e| e.min_exp()).min();
        let Some(lo) = lo else { return LaurentPolynomial::zero() };
        let shifted: Vec<LaurentPolynomial> = row.iter().map(|e| e.shift(-lo)).collect();
        degree += shifted.iter().filter_map(|e| e.max_exp()).max().unwrap_or(0);
        shift_total += lo;
        // |det coefficients| <= prod_i ||row_i||_2 with entries bounded by their l1 norms on |x|=1
        let sq: BigInt = shifted.iter().map(|e| e.l1_norm().pow(2)).sum();
        log2_bound += (sq.bits().max(1) as f64) / 2.0 + 0.5;
        rows.push(shifted);
    }
    let npts = degree as usize + 1;
    let need_bits = log2_bound + 2.0;
    let nprimes = (need_bits / 60.0).ceil().max(1.0) as usize;
    let ps = primes(nprimes);

    let per_prime: Vec<Vec<u64>> = ps
        .par_iter()
        .map(|&p| {
            let reduced: Vec<Vec<Vec<(u64, u64)>>> = rows
                .iter()
                .map(|row| row.iter().map(|e| e.terms().map(|(k, c)| (k as u64, residue(c, p))).collect()).collect())
                .collect();
            let xs: Vec<u64> = (1..=npts as u64).collect();
            let ys: Vec<u64> = xs
                .iter()
                .map(|&x| {
                    let a: Vec<Vec<u64>> = reduced
                        .iter()
                        .map(|row| {
                            row.iter()
                                .map(|terms| terms.iter().fold(0u64, |s, &(k, c)| (s + mul_mod(c, pow_mod(x, k, p), p)) % p))
                                .collect()
                        })
                        .collect();
                    det_mod(a, p)
                })
                .collect();
            interpolate_mod(&xs, &ys, p)
        })
        .collect();

    // CRT recombination with symmetric residues
    let mut modulus = BigInt::one();
    let mut coeffs = vec![BigInt::zero(); npts];
    for (idx, &p) in ps.iter().enumerate() {
        let pb = BigInt::from(p);
        for d in 0..npts {
            let r = BigInt::from(per_prime[idx][d]);
            // x = coeffs[d] mod modulus, x = r mod p
            let cur = coeffs[d].mod_floor(&pb);
            let diff = (r - cur).mod_floor(&pb);
            let inv = BigInt::from(pow_mod(residue(&modulus, p), p - 2, p));
            let k = (diff * inv).mod_floor(&pb);
            coeffs[d] = &coeffs[d] + &modulus * k;
        }
        modulus *= pb;
    }
    let half = &modulus / 2;
    let terms = coeffs.into_iter().enumerate().map(|(d, c)| {
        let c = c.mod_floor(&modulus);
        let c = if c > half { c - &modulus } else { c };
        (d as i64 + shift_total, c)
    });
    LaurentPolynomial::from_terms(terms)
}
