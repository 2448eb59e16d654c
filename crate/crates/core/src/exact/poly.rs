//! Dense univariate polynomials over the integers and the rationals.
//!
//! Coefficients are stored in ascending order and trailing zeros are always
//! trimmed, so the zero polynomial has an empty coefficient vector.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::serial::JsonInt;
use crate::error::{Error, Result};

/// Polynomial with integer coefficients, ascending order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<JsonInt>", into = "Vec<JsonInt>")]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

/// Polynomial with rational coefficients, ascending order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatPoly {
    coeffs: Vec<BigRational>,
}

fn trim<T: Zero>(v: &mut Vec<T>) {
    while v.last().map_or(false, |c| c.is_zero()) {
        v.pop();
    }
}

impl TryFrom<Vec<JsonInt>> for IntPoly {
    type Error = String;

    fn try_from(v: Vec<JsonInt>) -> std::result::Result<Self, String> {
        Ok(IntPoly::new(v.into_iter().map(BigInt::try_from).collect::<std::result::Result<_, _>>()?))
    }
}

impl From<IntPoly> for Vec<JsonInt> {
    fn from(p: IntPoly) -> Self {
        p.coeffs.into_iter().map(JsonInt::from).collect()
    }
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        trim(&mut coeffs);
        IntPoly { coeffs }
    }

    pub fn from_i64(c: &[i64]) -> Self {
        IntPoly::new(c.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: BigInt) -> Self {
        IntPoly::new(vec![c])
    }

    /// `c * t^k`
    pub fn monomial(c: BigInt, k: usize) -> Self {
        let mut v = vec![BigInt::zero(); k + 1];
        v[k] = c;
        IntPoly::new(v)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.lead().map_or(false, |c| c.is_one())
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_rat(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + BigRational::from_integer(c.clone());
        }
        acc
    }

    /// Sign of the value at a rational point, computed without rational
    /// normalisation: `d^n p(n/d)` has the same sign as `p(n/d)` for `d > 0`.
    pub fn sign_at(&self, x: &BigRational) -> Ordering {
        let n = x.numer();
        let d = x.denom();
        let mut acc = BigInt::zero();
        let mut dpow = BigInt::one();
        // Horner on the homogenised form.
        let mut terms = Vec::with_capacity(self.coeffs.len());
        for _ in 0..self.coeffs.len() {
            terms.push(dpow.clone());
            dpow *= d;
        }
        let deg = self.coeffs.len();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            acc = acc * n + c * &terms[deg - 1 - i];
        }
        acc.cmp(&BigInt::zero())
    }

    /// Non-negative gcd of the coefficients (zero for the zero polynomial).
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Divides out the content and makes the leading coefficient positive.
    pub fn primitive_part(&self) -> IntPoly {
        if self.is_zero() {
            return IntPoly::zero();
        }
        let mut g = self.content();
        if self.lead().map_or(false, |c| c.is_negative()) {
            g = -g;
        }
        IntPoly::new(self.coeffs.iter().map(|c| c / &g).collect())
    }

    pub fn derivative(&self) -> IntPoly {
        IntPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn to_rat(&self) -> RatPoly {
        RatPoly::new(
            self.coeffs
                .iter()
                .map(|c| BigRational::from_integer(c.clone()))
                .collect(),
        )
    }

    /// `t^deg p(1/t)`
    pub fn reversed(&self) -> IntPoly {
        let mut v = self.coeffs.clone();
        v.reverse();
        IntPoly::new(v)
    }

    /// `p(-t)`
    pub fn reflected(&self) -> IntPoly {
        IntPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() })
                .collect(),
        )
    }

    pub fn scale(&self, k: &BigInt) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn pow(&self, k: u32) -> IntPoly {
        let mut acc = IntPoly::constant(BigInt::one());
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Exact quotient in `Z[t]`, if `d` divides `self`.
    pub fn div_exact(&self, d: &IntPoly) -> Option<IntPoly> {
        let dd = d.degree()?;
        if self.is_zero() {
            return Some(IntPoly::zero());
        }
        let n = self.degree()?;
        if n < dd {
            return None;
        }
        let lead = d.lead()?;
        let mut r = self.coeffs.clone();
        let mut q = vec![BigInt::zero(); n - dd + 1];
        for k in (0..=n - dd).rev() {
            let c = &r[k + dd];
            if c.is_zero() {
                continue;
            }
            let (qc, rem) = c.div_rem(lead);
            if !rem.is_zero() {
                return None;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                r[k + j] -= &qc * dc;
            }
            q[k] = qc;
        }
        if r.iter().all(|c| c.is_zero()) {
            Some(IntPoly::new(q))
        } else {
            None
        }
    }

    /// Number of sign changes in the coefficient sequence, zeros skipped.
    pub fn sign_variations(&self) -> usize {
        let mut last = 0i8;
        let mut count = 0;
        for c in &self.coeffs {
            let s = match c.sign() {
                num_bigint::Sign::Plus => 1,
                num_bigint::Sign::Minus => -1,
                num_bigint::Sign::NoSign => 0,
            };
            if s != 0 {
                if last != 0 && s != last {
                    count += 1;
                }
                last = s;
            }
        }
        count
    }

    /// `p(t + 1)` via repeated synthetic division.
    pub fn taylor_shift_one(&self) -> IntPoly {
        let mut a = self.coeffs.clone();
        let n = a.len();
        for i in 0..n {
            for j in (i..n.saturating_sub(1)).rev() {
                let t = a[j + 1].clone();
                a[j] += t;
            }
        }
        IntPoly::new(a)
    }

    /// `2^deg p(t / 2)`, which stays integral.
    pub fn halve_argument(&self) -> IntPoly {
        let n = self.coeffs.len();
        IntPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| c << (n - 1 - i))
                .collect(),
        )
    }

    /// `p(2^e t)`
    pub fn scale_argument_pow2(&self, e: u32) -> IntPoly {
        IntPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| c << (i as u64 * e as u64))
                .collect(),
        )
    }

    /// Coefficients as `i64` when all of them fit.
    pub fn to_i64_vec(&self) -> Option<Vec<i64>> {
        use num_traits::ToPrimitive;
        self.coeffs.iter().map(|c| c.to_i64()).collect()
    }

    /// Square-free primitive part.
    pub fn square_free(&self) -> IntPoly {
        self.to_rat().square_free().to_primitive()
    }
}

impl RatPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        trim(&mut coeffs);
        RatPoly { coeffs }
    }

    pub fn zero() -> Self {
        RatPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: BigRational) -> Self {
        RatPoly::new(vec![c])
    }

    pub fn monomial(c: BigRational, k: usize) -> Self {
        let mut v = vec![BigRational::zero(); k + 1];
        v[k] = c;
        RatPoly::new(v)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn scale(&self, k: &BigRational) -> RatPoly {
        RatPoly::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn monic(&self) -> RatPoly {
        match self.lead() {
            Some(l) => {
                let inv = l.recip();
                self.scale(&inv)
            }
            None => RatPoly::zero(),
        }
    }

    pub fn derivative(&self) -> RatPoly {
        RatPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    /// Euclidean division; fails on a zero divisor.
    pub fn divmod(&self, d: &RatPoly) -> Result<(RatPoly, RatPoly)> {
        let dd = d.degree().ok_or(Error::ZeroDivisor)?;
        let lead_inv = d.lead().ok_or(Error::ZeroDivisor)?.recip();
        let n = match self.degree() {
            Some(n) if n >= dd => n,
            _ => return Ok((RatPoly::zero(), self.clone())),
        };
        let mut r = self.coeffs.clone();
        let mut q = vec![BigRational::zero(); n - dd + 1];
        for k in (0..=n - dd).rev() {
            let c = &r[k + dd];
            if c.is_zero() {
                continue;
            }
            let qc = c * &lead_inv;
            for (j, dc) in d.coeffs.iter().enumerate() {
                r[k + j] -= &qc * dc;
            }
            q[k] = qc;
        }
        r.truncate(dd);
        Ok((RatPoly::new(q), RatPoly::new(r)))
    }

    pub fn rem(&self, d: &RatPoly) -> Result<RatPoly> {
        Ok(self.divmod(d)?.1)
    }

    /// Monic gcd over the rationals (zero if both inputs vanish).
    pub fn gcd(&self, other: &RatPoly) -> RatPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor");
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// Returns `(g, s)` with `g = gcd(self, m)` monic and `s * self = g mod m`.
    pub fn gcd_ext(&self, m: &RatPoly) -> (RatPoly, RatPoly) {
        let (mut r0, mut r1) = (m.clone(), self.rem(m).unwrap_or_else(|_| self.clone()));
        let (mut s0, mut s1) = (RatPoly::zero(), RatPoly::constant(BigRational::one()));
        while !r1.is_zero() {
            let (q, r) = r0.divmod(&r1).expect("nonzero divisor");
            let s = &s0 - &(&q * &s1);
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
        }
        match r0.lead().cloned() {
            Some(l) => {
                let inv = l.recip();
                (r0.scale(&inv), s0.scale(&inv))
            }
            None => (RatPoly::zero(), RatPoly::zero()),
        }
    }

    /// `p / gcd(p, p')`, monic.
    pub fn square_free(&self) -> RatPoly {
        if self.degree().map_or(true, |d| d == 0) {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.divmod(&g).expect("nonzero gcd").0.monic()
    }

    /// Positive rational multiple with coprime integer coefficients.
    pub fn to_primitive(&self) -> IntPoly {
        let mut l = BigInt::one();
        for c in &self.coeffs {
            l = l.lcm(c.denom());
        }
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * BigRational::from_integer(l.clone())).to_integer())
            .collect();
        IntPoly::new(ints).primitive_part()
    }

    /// `(c * self, c)` for the least positive `c` clearing denominators.
    pub fn integer_form(&self) -> (IntPoly, BigInt) {
        let mut l = BigInt::one();
        for c in &self.coeffs {
            l = l.lcm(c.denom());
        }
        let p = IntPoly::new(
            self.coeffs
                .iter()
                .map(|c| (c * BigRational::from_integer(l.clone())).to_integer())
                .collect(),
        );
        (p, l)
    }

    /// Positive integer multiple; values keep their sign.
    pub fn clear_denominators(&self) -> IntPoly {
        self.integer_form().0
    }
}

macro_rules! impl_ring_ops {
    ($t:ident, $c:ty) => {
        impl<'a> Add<&'a $t> for &'a $t {
            type Output = $t;
            fn add(self, o: &$t) -> $t {
                let n = self.coeffs.len().max(o.coeffs.len());
                let mut v: Vec<$c> = Vec::with_capacity(n);
                for i in 0..n {
                    let a = self.coeffs.get(i);
                    let b = o.coeffs.get(i);
                    v.push(match (a, b) {
                        (Some(a), Some(b)) => a + b,
                        (Some(a), None) => a.clone(),
                        (None, Some(b)) => b.clone(),
                        (None, None) => <$c>::zero(),
                    });
                }
                $t::new(v)
            }
        }
        impl<'a> Sub<&'a $t> for &'a $t {
            type Output = $t;
            fn sub(self, o: &$t) -> $t {
                self + &(-o)
            }
        }
        impl<'a> Neg for &'a $t {
            type Output = $t;
            fn neg(self) -> $t {
                $t::new(self.coeffs.iter().map(|c| -c).collect())
            }
        }
        impl<'a> Mul<&'a $t> for &'a $t {
            type Output = $t;
            fn mul(self, o: &$t) -> $t {
                if self.is_zero() || o.is_zero() {
                    return $t::zero();
                }
                let mut v: Vec<$c> = vec![<$c>::zero(); self.coeffs.len() + o.coeffs.len() - 1];
                for (i, a) in self.coeffs.iter().enumerate() {
                    if a.is_zero() {
                        continue;
                    }
                    for (j, b) in o.coeffs.iter().enumerate() {
                        v[i + j] += a * b;
                    }
                }
                $t::new(v)
            }
        }
        impl Add for $t {
            type Output = $t;
            fn add(self, o: $t) -> $t {
                &self + &o
            }
        }
        impl Sub for $t {
            type Output = $t;
            fn sub(self, o: $t) -> $t {
                &self - &o
            }
        }
        impl Mul for $t {
            type Output = $t;
            fn mul(self, o: $t) -> $t {
                &self * &o
            }
        }
        impl Neg for $t {
            type Output = $t;
            fn neg(self) -> $t {
                -&self
            }
        }
    };
}

impl_ring_ops!(IntPoly, BigInt);
impl_ring_ops!(RatPoly, BigRational);

fn write_terms<T: fmt::Display + Signed + One + PartialEq>(
    f: &mut fmt::Formatter<'_>,
    coeffs: &[T],
) -> fmt::Result {
    if coeffs.is_empty() {
        return write!(f, "0");
    }
    let mut first = true;
    for (i, c) in coeffs.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        let a = c.abs();
        if first {
            if neg {
                write!(f, "-")?;
            }
        } else {
            write!(f, " {} ", if neg { '-' } else { '+' })?;
        }
        first = false;
        let unit = a.is_one();
        match i {
            0 => write!(f, "{}", a)?,
            1 if unit => write!(f, "t")?,
            1 => write!(f, "{}t", a)?,
            _ if unit => write!(f, "t^{}", i)?,
            _ => write!(f, "{}t^{}", a, i)?,
        }
    }
    Ok(())
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, &self.coeffs)
    }
}

impl fmt::Display for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, &self.coeffs)
    }
}

/// Parses `"1,-3,1"` (ascending coefficients) into a polynomial.
impl std::str::FromStr for IntPoly {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let mut v = Vec::new();
        for part in s.split(',') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            let c: BigInt = part
                .parse()
                .map_err(|_| Error::InvalidInput(format!("bad coefficient {part:?}")))?;
            v.push(c);
        }
        let p = IntPoly::new(v);
        if p.is_zero() {
            return Err(Error::InvalidInput("zero polynomial".into()));
        }
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ip(c: &[i64]) -> IntPoly {
        IntPoly::from_i64(c)
    }

    #[test]
    fn multiply_and_divide_back() {
        let a = ip(&[1, -1, 1]);
        let b = ip(&[-1, 0, 2, 3]);
        let p = &a * &b;
        assert_eq!(p.div_exact(&a), Some(b.clone()));
        let (q, r) = p.to_rat().divmod(&b.to_rat()).unwrap();
        assert!(r.is_zero());
        assert_eq!(q, a.to_rat());
    }

    #[test]
    fn div_exact_rejects_non_divisor() {
        assert_eq!(ip(&[1, 0, 1]).div_exact(&ip(&[1, 1])), None);
        assert_eq!(ip(&[2, 2]).div_exact(&ip(&[0, 2])), None);
    }

    #[test]
    fn gcd_is_monic() {
        let a = &ip(&[-1, 1]) * &ip(&[2, 0, 1]);
        let b = &ip(&[-1, 1]) * &ip(&[5, 3]);
        let g = a.to_rat().gcd(&b.to_rat());
        assert_eq!(g, ip(&[-1, 1]).to_rat());
    }

    #[test]
    fn square_free_drops_repeats() {
        let p = &ip(&[-1, 1]).pow(3) * &ip(&[1, 1]);
        assert_eq!(p.square_free(), ip(&[-1, 0, 1]));
    }

    #[test]
    fn content_and_primitive() {
        let p = ip(&[6, -4, -2]);
        assert_eq!(p.content(), BigInt::from(2));
        assert_eq!(p.primitive_part(), ip(&[-3, 2, 1]));
    }

    #[test]
    fn taylor_shift_matches_evaluation() {
        let p = ip(&[3, -2, 0, 5, 1]);
        let s = p.taylor_shift_one();
        for x in -4..5 {
            assert_eq!(s.eval(&BigInt::from(x)), p.eval(&BigInt::from(x + 1)));
        }
    }

    #[test]
    fn sign_at_matches_rational_eval() {
        let p = ip(&[1, -3, 0, 1]);
        for (n, d) in [(1, 3), (-7, 2), (5, 4), (1, 1)] {
            let x = BigRational::new(BigInt::from(n), BigInt::from(d));
            let v = p.eval_rat(&x);
            assert_eq!(p.sign_at(&x), v.cmp(&BigRational::zero()));
        }
    }

    #[test]
    fn display_and_parse() {
        let p: IntPoly = "1,-3,1".parse().unwrap();
        assert_eq!(p.to_string(), "t^2 - 3t + 1");
        assert_eq!(ip(&[1, 0, -2, 1]).to_string(), "t^3 - 2t^2 + 1");
    }

    #[test]
    fn extended_gcd_inverts() {
        let m = ip(&[1, -3, 1]).to_rat();
        let a = ip(&[2, 1]).to_rat();
        let (g, s) = a.gcd_ext(&m);
        assert_eq!(g, RatPoly::constant(BigRational::one()));
        let prod = (&s * &a).rem(&m).unwrap();
        assert_eq!(prod, RatPoly::constant(BigRational::one()));
    }
}
