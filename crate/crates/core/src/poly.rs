//! Exact integer polynomials and the generating-function identities behind the
//! reverse inequalities.
//!
//! A linear combination `Σ c_i W_i` is encoded as the polynomial `Σ c_i x^i`. The
//! consecutive deficit `W_l - 2W_{l+1} + W_{l+2}` becomes `x^l (1-x)^2`, so writing
//! a triple combination as a nonnegative sum of deficits amounts to dividing its
//! polynomial by `(1-x)^2` and checking the quotient's signs.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn constant(c: i64) -> Self {
        Self::new(vec![BigInt::from(c)])
    }

    /// `c·x^deg`.
    pub fn monomial(deg: usize, c: impl Into<BigInt>) -> Self {
        let mut coeffs = vec![BigInt::zero(); deg + 1];
        coeffs[deg] = c.into();
        Self::new(coeffs)
    }

    pub fn x() -> Self {
        Self::monomial(1, 1)
    }

    pub fn new(coeffs: Vec<BigInt>) -> Self {
        let mut p = IntPolynomial { coeffs };
        p.normalise();
        p
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    fn normalise(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    /// Degree, with `-1` for the zero polynomial.
    pub fn degree(&self) -> isize {
        self.coeffs.len() as isize - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn pow(&self, m: u32) -> Self {
        let mut out = Self::one();
        let mut base = self.clone();
        let mut e = m;
        while e > 0 {
            if e & 1 == 1 {
                out = &out * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        out
    }

    /// `(a + b x)^m`.
    pub fn binomial_expand(a: i64, b: i64, m: u32) -> Self {
        Self::from_i64(&[a, b]).pow(m)
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|v| v * c).collect())
    }

    /// Applies the combination to a value sequence: `Σ c_i values[i]`.
    pub fn apply(&self, values: &[f64]) -> f64 {
        use num_traits::ToPrimitive;
        self.coeffs
            .iter()
            .zip(values)
            .map(|(c, v)| c.to_f64().unwrap_or(f64::NAN) * v)
            .sum()
    }
}

impl Add for &IntPolynomial {
    type Output = IntPolynomial;
    fn add(self, rhs: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPolynomial::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &IntPolynomial {
    type Output = IntPolynomial;
    fn sub(self, rhs: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPolynomial::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &IntPolynomial {
    type Output = IntPolynomial;
    fn mul(self, rhs: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return IntPolynomial::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPolynomial::new(out)
    }
}

impl Neg for &IntPolynomial {
    type Output = IntPolynomial;
    fn neg(self) -> IntPolynomial {
        IntPolynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for IntPolynomial {
            type Output = IntPolynomial;
            fn $f(self, rhs: IntPolynomial) -> IntPolynomial {
                (&self).$f(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for IntPolynomial {
    type Output = IntPolynomial;
    fn neg(self) -> IntPolynomial {
        -(&self)
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            match (i, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (1, true) => write!(f, "x")?,
                (1, false) => write!(f, "{a}x")?,
                (_, true) => write!(f, "x^{i}")?,
                (_, false) => write!(f, "{a}x^{i}")?,
            }
        }
        Ok(())
    }
}

/// Exact binomial coefficient.
pub fn binomial_big(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

fn one_minus_x_pow(m: usize) -> IntPolynomial {
    IntPolynomial::binomial_expand(1, -1, m as u32)
}

/// Checks `Σ_{q=0}^{n-2} C(n-2, q) x^q (1-x)^{n+1-q} = (1-x)^3`.
pub fn verify_generating_identity(n: usize) -> Result<bool> {
    if n < 2 {
        return Err(Error::invalid(format!("generating identity needs n >= 2, got {n}")));
    }
    let mut lhs = IntPolynomial::zero();
    for q in 0..=n - 2 {
        let term = &IntPolynomial::monomial(q, binomial_big(n - 2, q)) * &one_minus_x_pow(n + 1 - q);
        lhs = &lhs + &term;
    }
    Ok(lhs == IntPolynomial::from_i64(&[1, -3, 3, -1]))
}

/// `x^q (1-x)^{d-q}`, the generating polynomial of `W_q(K ⊖ B)` in terms of `W(K)`.
pub fn inner_parallel_coefficients(d: usize, q: usize) -> Result<IntPolynomial> {
    if q > d {
        return Err(Error::IndexOutOfRange(format!("q = {q} exceeds d = {d}")));
    }
    Ok(&IntPolynomial::monomial(q, 1) * &one_minus_x_pow(d - q))
}

/// Checks `Σ_{q=0}^{m} C(m, q) x^q (1-x)^{d-q} = (1-x)^{d-m}`.
pub fn verify_collapse_identity(d: usize, m: usize) -> Result<bool> {
    if m > d {
        return Err(Error::IndexOutOfRange(format!("m = {m} exceeds d = {d}")));
    }
    let mut lhs = IntPolynomial::zero();
    for q in 0..=m {
        lhs = &lhs + &inner_parallel_coefficients(d, q)?.scale(&binomial_big(m, q));
    }
    Ok(lhs == one_minus_x_pow(d - m))
}

/// `(k-j) x^i + (i-k) x^j + (j-i) x^k`.
pub fn triple_polynomial(i: usize, j: usize, k: usize) -> IntPolynomial {
    let (a, b, c) = (i as i64, j as i64, k as i64);
    let mut p = IntPolynomial::monomial(i, c - b);
    p = &p + &IntPolynomial::monomial(j, a - c);
    &p + &IntPolynomial::monomial(k, b - a)
}

/// Multipliers `m_l` with `triple(i,j,k) = Σ_l m_l x^l (1-x)^2`, i.e. the triple
/// combination as a sum of consecutive deficits `E_l`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TripleCertificate {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    /// `(l, m_l)` for `l = i ..= k-2`.
    pub multipliers: Vec<(usize, BigInt)>,
}

impl TripleCertificate {
    /// Re-expands the multipliers and compares with the target polynomial exactly.
    pub fn verify(&self) -> bool {
        let deficit = one_minus_x_pow(2);
        let mut sum = IntPolynomial::zero();
        for (l, m) in &self.multipliers {
            sum = &sum + &(&IntPolynomial::monomial(*l, m.clone()) * &deficit);
        }
        self.multipliers.iter().all(|(_, m)| !m.is_negative())
            && sum == triple_polynomial(self.i, self.j, self.k)
    }
}

/// Divides the triple polynomial by `(1-x)^2` through the unit-diagonal triangular
/// system `q_n = t_n + 2 q_{n-1} - q_{n-2}`; the quotient coefficients are the
/// multipliers, and they come out as integers.
pub fn triple_from_consecutive(i: usize, j: usize, k: usize, d: usize) -> Result<TripleCertificate> {
    if !(i < j && j < k && k <= d) {
        return Err(Error::IndexOutOfRange(format!(
            "need 0 <= i < j < k <= d, got ({i}, {j}, {k}) with d = {d}"
        )));
    }
    let t = triple_polynomial(i, j, k);
    let mut q: Vec<BigInt> = Vec::with_capacity(k - 1);
    for n in 0..=k - 2 {
        let prev1 = if n >= 1 { q[n - 1].clone() } else { BigInt::zero() };
        let prev2 = if n >= 2 { q[n - 2].clone() } else { BigInt::zero() };
        q.push(t.coeff(n) + BigInt::from(2) * prev1 - prev2);
    }
    let cert = TripleCertificate {
        i,
        j,
        k,
        multipliers: (i..=k - 2).map(|l| (l, q[l].clone())).collect(),
    };
    if q[..i].iter().any(|c| !c.is_zero()) || !cert.verify() {
        return Err(Error::NoCertificate { i, j, k });
    }
    Ok(cert)
}

/// `(c_ijk, c_jki, c_kij)` with `c_pqr = (r - q)(p + 1)`.
pub fn bokowski_heil_coefficients(i: usize, j: usize, k: usize) -> [i64; 3] {
    let c = |p: usize, q: usize, r: usize| (r as i64 - q as i64) * (p as i64 + 1);
    [c(i, j, k), c(j, k, i), c(k, i, j)]
}

/// Exact `c_ijk + c_jki + c_kij`; vanishes for every triple.
pub fn bokowski_heil_coefficient_sum(i: usize, j: usize, k: usize) -> BigInt {
    bokowski_heil_coefficients(i, j, k)
        .iter()
        .map(|&c| BigInt::from(c))
        .sum()
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct IdentityCheck {
    pub name: String,
    pub passed: bool,
}

/// Runs the full identity suite: generating identity for `2 <= n <= n_max`,
/// coefficient formulas and collapse sums for `d <= 10`, triple certificates and
/// Bokowski-Heil coefficient sums for `d <= 8`.
pub fn symbolic_suite(n_max: usize) -> Vec<IdentityCheck> {
    let mut out = Vec::new();
    let mut push = |name: String, passed: bool| out.push(IdentityCheck { name, passed });
    for n in 2..=n_max {
        push(
            format!("generating_identity n={n}"),
            verify_generating_identity(n).unwrap_or(false),
        );
    }
    for d in 1..=10 {
        for q in 0..=d {
            let ok = inner_parallel_coefficients(d, q).is_ok_and(|p| {
                (0..=d - q).all(|i| {
                    let sign = if i % 2 == 0 { 1 } else { -1 };
                    p.coeff(q + i) == BigInt::from(sign) * binomial_big(d - q, i)
                }) && p.degree() == d as isize
            });
            push(format!("inner_parallel_coefficients d={d} q={q}"), ok);
        }
        for m in 0..=d {
            push(
                format!("collapse_identity d={d} m={m}"),
                verify_collapse_identity(d, m).unwrap_or(false),
            );
        }
    }
    for d in 2..=8 {
        for i in 0..=d {
            for j in i + 1..=d {
                for k in j + 1..=d {
                    let cert = triple_from_consecutive(i, j, k, d);
                    push(
                        format!("triple_certificate d={d} ({i},{j},{k})"),
                        cert.is_ok_and(|c| c.verify()),
                    );
                    push(
                        format!("bokowski_heil_sum d={d} ({i},{j},{k})"),
                        bokowski_heil_coefficient_sum(i, j, k).is_zero(),
                    );
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic() {
        let one_minus = IntPolynomial::from_i64(&[1, -1]);
        let one_plus = IntPolynomial::from_i64(&[1, 1]);
        assert_eq!(&one_minus * &one_plus, IntPolynomial::from_i64(&[1, 0, -1]));
        assert_eq!(
            IntPolynomial::binomial_expand(1, -1, 3),
            IntPolynomial::from_i64(&[1, -3, 3, -1])
        );
        // (x + (1 - x))^m collapses to 1
        let s = &IntPolynomial::x() + &one_minus;
        assert_eq!(s.pow(17), IntPolynomial::one());
        assert_eq!(IntPolynomial::zero().degree(), -1);
        assert_eq!((&one_plus - &one_plus).degree(), -1);
        assert_eq!((-one_plus).to_string(), "-1 - x");
        assert_eq!(IntPolynomial::from_i64(&[0, 2, 0, -1]).to_string(), "2x - x^3");
    }

    #[test]
    fn generating_identity() {
        assert!(verify_generating_identity(2).unwrap());
        assert!(verify_generating_identity(5).unwrap());
        assert!(verify_generating_identity(30).unwrap());
        assert!(verify_generating_identity(1).is_err());
    }

    #[test]
    fn inner_parallel_polynomials() {
        assert_eq!(
            inner_parallel_coefficients(2, 0).unwrap(),
            IntPolynomial::from_i64(&[1, -2, 1])
        );
        assert_eq!(
            inner_parallel_coefficients(3, 1).unwrap(),
            IntPolynomial::from_i64(&[0, 1, -2, 1])
        );
        assert_eq!(
            inner_parallel_coefficients(6, 6).unwrap(),
            IntPolynomial::monomial(6, 1)
        );
        assert!(inner_parallel_coefficients(3, 4).is_err());
    }

    #[test]
    fn certificates() {
        let c = triple_from_consecutive(2, 3, 4, 5).unwrap();
        assert_eq!(c.multipliers, vec![(2, BigInt::from(1))]);
        let c = triple_from_consecutive(0, 1, 3, 3).unwrap();
        assert_eq!(c.multipliers, vec![(0, BigInt::from(2)), (1, BigInt::from(1))]);
        let c = triple_from_consecutive(0, 2, 4, 4).unwrap();
        assert!(c.verify());
        assert!(triple_from_consecutive(1, 1, 2, 3).is_err());
        assert!(triple_from_consecutive(0, 1, 4, 3).is_err());
    }

    #[test]
    fn big_binomials() {
        assert_eq!(binomial_big(64, 32).to_string(), "1832624140942590534");
        assert_eq!(binomial_big(5, 7), BigInt::zero());
    }

    #[test]
    fn bokowski_heil() {
        assert_eq!(bokowski_heil_coefficients(0, 1, 3), [2, -6, 4]);
        for d in 2..=8 {
            for i in 0..d {
                for j in i + 1..d {
                    for k in j + 1..=d {
                        assert!(bokowski_heil_coefficient_sum(i, j, k).is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn isoperimetric_combination_is_a_scaled_triple() {
        // (d-1)·[W_0 - d W_1/(d-1) + W_d/(d-1)] is the (0, 1, d) combination.
        for d in 2..=8 {
            let mut iso = IntPolynomial::monomial(0, d as i64 - 1);
            iso = &iso + &IntPolynomial::monomial(1, -(d as i64));
            iso = &iso + &IntPolynomial::monomial(d, 1);
            assert_eq!(iso, triple_polynomial(0, 1, d));
        }
    }

    #[test]
    fn suite_passes() {
        let checks = symbolic_suite(16);
        assert!(checks.iter().all(|c| c.passed));
        assert!(checks.len() > 100);
    }
}
