//! Sturm sequences, real root isolation and real algebraic numbers.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::poly::IntPoly;
use crate::error::{Error, Result};

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn pow2(e: i64) -> BigRational {
    if e >= 0 {
        BigRational::from_integer(BigInt::one() << e as usize)
    } else {
        BigRational::new(BigInt::one(), BigInt::one() << (-e) as usize)
    }
}

/// Sturm chain of a polynomial, stored as primitive integer polynomials.
/// Each entry is a positive multiple of the classical remainder, so sign
/// counts are unaffected.
#[derive(Clone, Debug)]
pub struct SturmChain {
    chain: Vec<IntPoly>,
}

impl SturmChain {
    pub fn new(p: &IntPoly) -> SturmChain {
        let mut chain = vec![p.clone()];
        let d = p.derivative();
        if d.is_zero() {
            return SturmChain { chain };
        }
        chain.push(d);
        loop {
            let n = chain.len();
            let a = chain[n - 2].to_rat();
            let b = chain[n - 1].to_rat();
            let r = a.rem(&b).expect("nonzero");
            if r.is_zero() {
                break;
            }
            // -r scaled by a positive rational
            chain.push(positive_multiple(&(-&r)));
        }
        SturmChain { chain }
    }

    fn variations_at(&self, x: &BigRational) -> usize {
        let mut last = Ordering::Equal;
        let mut v = 0;
        for p in &self.chain {
            let s = p.sign_at(x);
            if s != Ordering::Equal {
                if last != Ordering::Equal && s != last {
                    v += 1;
                }
                last = s;
            }
        }
        v
    }

    fn variations_at_infinity(&self, positive: bool) -> usize {
        let mut last = Ordering::Equal;
        let mut v = 0;
        for p in &self.chain {
            let lead = p.lead().cloned().unwrap_or_default();
            let deg = p.degree().unwrap_or(0);
            let mut s = lead.sign();
            if !positive && deg % 2 == 1 {
                s = -s;
            }
            let s = match s {
                num_bigint::Sign::Plus => Ordering::Greater,
                num_bigint::Sign::Minus => Ordering::Less,
                num_bigint::Sign::NoSign => Ordering::Equal,
            };
            if s != Ordering::Equal {
                if last != Ordering::Equal && s != last {
                    v += 1;
                }
                last = s;
            }
        }
        v
    }

    /// Distinct real roots in `(a, b)`; endpoints must not be roots.
    pub fn count(&self, a: &BigRational, b: &BigRational) -> Result<usize> {
        let p = &self.chain[0];
        if p.sign_at(a) == Ordering::Equal || p.sign_at(b) == Ordering::Equal {
            return Err(Error::EndpointRoot(p.to_string()));
        }
        if a >= b {
            return Ok(0);
        }
        Ok(self.variations_at(a).saturating_sub(self.variations_at(b)))
    }

    /// Distinct real roots on the whole line.
    pub fn count_all(&self) -> usize {
        self.variations_at_infinity(false)
            .saturating_sub(self.variations_at_infinity(true))
    }
}

fn positive_multiple(r: &super::poly::RatPoly) -> IntPoly {
    // to_primitive normalises the leading sign; undo that if needed.
    let prim = r.to_primitive();
    let flip = match (r.lead(), prim.lead()) {
        (Some(a), Some(b)) => a.is_negative() != b.is_negative(),
        _ => false,
    };
    if flip {
        -&prim
    } else {
        prim
    }
}

/// Number of distinct real roots of `p` in `(a, b)`.
pub fn sturm_count(p: &IntPoly, a: &BigRational, b: &BigRational) -> Result<usize> {
    if p.is_zero() {
        return Err(Error::InvalidInput("zero polynomial".into()));
    }
    SturmChain::new(p).count(a, b)
}

/// Cauchy bound `1 + max |c_i / c_n|`, rounded up to a power of two.
pub fn cauchy_exponent(p: &IntPoly) -> u32 {
    let lead = p.lead().expect("nonzero").abs();
    let mx = p.coeffs().iter().map(|c| c.abs()).max().unwrap_or_default();
    let bound = BigRational::one() + BigRational::new(mx, lead);
    let mut e = 0u32;
    while pow2(e as i64) < bound {
        e += 1;
    }
    e
}

/// Cauchy root bound as a rational.
pub fn cauchy_bound(p: &IntPoly) -> BigRational {
    pow2(cauchy_exponent(p) as i64)
}

/// Vincent-Collins-Akritas bisection on `(0, 1)` for an integer polynomial
/// with no root at 0. Returns isolating intervals `(c / 2^k, (c + 1) / 2^k)`
/// and exact dyadic roots.
fn vca_unit(q: &IntPoly) -> (Vec<(BigInt, u32)>, Vec<(BigInt, u32)>) {
    let mut intervals = Vec::new();
    let mut exact = Vec::new();
    let mut stack = vec![(q.clone(), BigInt::zero(), 0u32)];
    while let Some((p, c, k)) = stack.pop() {
        let v = p.reversed().taylor_shift_one().sign_variations();
        if v == 0 {
            continue;
        }
        if v == 1 {
            intervals.push((c, k));
            continue;
        }
        let left = p.halve_argument();
        let right = left.taylor_shift_one();
        // Root exactly at the midpoint shows up as a zero constant term of
        // the right child.
        let mut right = right;
        if right.coeff(0).is_zero() {
            exact.push((&c * 2 + 1, k + 1));
            right = IntPoly::new(right.coeffs()[1..].to_vec());
            // p(x) has a root at 1/2: divide it out of the left child too.
            let lin = IntPoly::from_i64(&[-1, 1]);
            let l = left.div_exact(&lin).expect("midpoint root");
            stack.push((right, &c * 2 + 1, k + 1));
            stack.push((l, &c * 2, k + 1));
            continue;
        }
        stack.push((right, &c * 2 + 1, k + 1));
        stack.push((left, &c * 2, k + 1));
    }
    (intervals, exact)
}

/// A real algebraic number: a square-free primitive defining polynomial and
/// a rational interval `(lo, hi)` containing exactly one of its roots, with
/// the polynomial nonzero at both endpoints. A rational number may also be
/// held exactly with `lo == hi`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraicReal {
    poly: IntPoly,
    #[serde(with = "super::serial::rat")]
    lo: BigRational,
    #[serde(with = "super::serial::rat")]
    hi: BigRational,
}

impl AlgebraicReal {
    /// Checks that `(lo, hi)` isolates exactly one root of `poly`.
    pub fn new(poly: IntPoly, lo: BigRational, hi: BigRational) -> Result<AlgebraicReal> {
        let poly = poly.square_free();
        if lo == hi {
            if poly.sign_at(&lo) != Ordering::Equal {
                return Err(Error::InvalidInput("degenerate interval is not a root".into()));
            }
            return Ok(AlgebraicReal { poly, lo, hi });
        }
        if lo > hi {
            return Err(Error::InvalidInput("empty isolating interval".into()));
        }
        let n = sturm_count(&poly, &lo, &hi)?;
        if n != 1 {
            return Err(Error::InvalidInput(format!(
                "interval contains {n} roots of {poly}"
            )));
        }
        Ok(AlgebraicReal { poly, lo, hi })
    }

    pub fn from_rational(r: BigRational) -> AlgebraicReal {
        let poly = IntPoly::new(vec![-r.numer().clone(), r.denom().clone()]);
        AlgebraicReal {
            poly,
            lo: r.clone(),
            hi: r,
        }
    }

    pub fn from_integer(n: i64) -> AlgebraicReal {
        AlgebraicReal::from_rational(rat(n))
    }

    pub fn poly(&self) -> &IntPoly {
        &self.poly
    }

    pub fn lo(&self) -> &BigRational {
        &self.lo
    }

    pub fn hi(&self) -> &BigRational {
        &self.hi
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    /// One bisection step; returns a new, narrower value.
    pub fn refine(&self) -> AlgebraicReal {
        if self.is_exact() {
            return self.clone();
        }
        let mid = (&self.lo + &self.hi) / rat(2);
        let sm = self.poly.sign_at(&mid);
        if sm == Ordering::Equal {
            return AlgebraicReal {
                poly: self.poly.clone(),
                lo: mid.clone(),
                hi: mid,
            };
        }
        let sl = self.poly.sign_at(&self.lo);
        if sl == sm {
            AlgebraicReal {
                poly: self.poly.clone(),
                lo: mid,
                hi: self.hi.clone(),
            }
        } else {
            AlgebraicReal {
                poly: self.poly.clone(),
                lo: self.lo.clone(),
                hi: mid,
            }
        }
    }

    /// `k` bisection steps.
    pub fn refine_n(&self, k: usize) -> AlgebraicReal {
        if self.is_exact() || k == 0 {
            return self.clone();
        }
        let mut lo = self.lo.clone();
        let mut hi = self.hi.clone();
        let sl = self.poly.sign_at(&lo);
        for _ in 0..k {
            let mid = (&lo + &hi) / rat(2);
            let sm = self.poly.sign_at(&mid);
            if sm == Ordering::Equal {
                return AlgebraicReal {
                    poly: self.poly.clone(),
                    lo: mid.clone(),
                    hi: mid,
                };
            }
            if sm == sl {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        AlgebraicReal {
            poly: self.poly.clone(),
            lo,
            hi,
        }
    }

    /// Refines until the interval width is at most `2^-bits`.
    pub fn refine_to_bits(&self, bits: u32) -> AlgebraicReal {
        let target = pow2(-(bits as i64));
        let mut w = self.width();
        let mut steps = 0;
        while w > target {
            w /= rat(2);
            steps += 1;
        }
        self.refine_n(steps)
    }

    pub fn to_f64(&self) -> f64 {
        let r = self.refine_to_bits(60);
        let mid = (&r.lo + &r.hi) / rat(2);
        mid.to_f64().unwrap_or(f64::NAN)
    }

    /// Exact comparison with a rational.
    pub fn cmp_rational(&self, r: &BigRational) -> Ordering {
        // The interval holds a single root of poly.
        if &self.lo <= r && r <= &self.hi && self.poly.sign_at(r) == Ordering::Equal {
            return Ordering::Equal;
        }
        let mut cur = self.clone();
        loop {
            if r < &cur.lo {
                return Ordering::Greater;
            }
            if r > &cur.hi {
                return Ordering::Less;
            }
            if cur.is_exact() {
                return cur.lo.cmp(r);
            }
            cur = cur.refine_n(8);
        }
    }

    /// Exact comparison of two algebraic reals. Equality is decided through
    /// the gcd of the defining polynomials.
    pub fn cmp_exact(&self, other: &AlgebraicReal) -> Ordering {
        if self.is_exact() {
            return other.cmp_rational(&self.lo).reverse();
        }
        if other.is_exact() {
            return self.cmp_rational(&other.lo);
        }
        let g = self.poly.to_rat().gcd(&other.poly.to_rat()).to_primitive();
        let mut a = self.clone();
        let mut b = other.clone();
        let mut checked = g.degree().unwrap_or(0) == 0;
        loop {
            if a.hi < b.lo {
                return Ordering::Less;
            }
            if b.hi < a.lo {
                return Ordering::Greater;
            }
            if a.is_exact() || b.is_exact() {
                return a.cmp_exact(&b);
            }
            let lo = if a.lo > b.lo { &a.lo } else { &b.lo };
            let hi = if a.hi < b.hi { &a.hi } else { &b.hi };
            if !checked && lo < hi {
                // A common root inside both intervals is both values.
                checked = true;
                if sturm_count(&g, lo, hi).map_or(false, |n| n > 0) {
                    return Ordering::Equal;
                }
            }
            a = a.refine_n(4);
            b = b.refine_n(4);
        }
    }

    /// Sign of the value.
    pub fn signum(&self) -> Ordering {
        self.cmp_rational(&BigRational::zero())
    }
}

/// Isolates every real root of `p`, returned in increasing order.
pub fn isolate_real_roots(p: &IntPoly) -> Result<Vec<AlgebraicReal>> {
    if p.is_zero() {
        return Err(Error::InvalidInput("zero polynomial".into()));
    }
    let sf = p.square_free();
    if sf.degree() == Some(0) {
        return Ok(Vec::new());
    }
    let mut roots = Vec::new();
    // strip a root at zero
    let mut q = sf.clone();
    let has_zero = q.coeff(0).is_zero();
    if has_zero {
        q = IntPoly::new(q.coeffs()[1..].to_vec());
    }
    let e = cauchy_exponent(&q);
    let scale = pow2(e as i64);
    for positive in [false, true] {
        let base = if positive { q.clone() } else { q.reflected() };
        if base.degree().unwrap_or(0) == 0 {
            continue;
        }
        let unit = base.scale_argument_pow2(e);
        let (ivs, exact) = vca_unit(&unit);
        let sgn = if positive { rat(1) } else { rat(-1) };
        for (c, k) in ivs {
            let lo = BigRational::new(c.clone(), BigInt::one() << k as usize) * &scale;
            let hi = BigRational::new(c + 1, BigInt::one() << k as usize) * &scale;
            let (a, b) = if positive {
                (lo, hi)
            } else {
                (-hi, -lo)
            };
            roots.push(certify(&sf, a, b)?);
        }
        for (c, k) in exact {
            let r = BigRational::new(c, BigInt::one() << k as usize) * &scale * &sgn;
            roots.push(isolate_rational_root(&sf, r)?);
        }
    }
    if has_zero {
        roots.push(isolate_rational_root(&sf, BigRational::zero())?);
    }
    roots.sort_by(|a, b| a.cmp_exact(b));
    Ok(roots)
}

fn certify(p: &IntPoly, lo: BigRational, hi: BigRational) -> Result<AlgebraicReal> {
    // An endpoint may carry an exact root found elsewhere; pull it inward
    // until the open interval is clean.
    let w = &hi - &lo;
    let mut j = 1usize;
    loop {
        let shrink = BigRational::new(BigInt::one(), BigInt::one() << j) * &w;
        let a = if p.sign_at(&lo) == Ordering::Equal { &lo + &shrink } else { lo.clone() };
        let b = if p.sign_at(&hi) == Ordering::Equal { &hi - &shrink } else { hi.clone() };
        if p.sign_at(&a) != Ordering::Equal && p.sign_at(&b) != Ordering::Equal {
            let n = sturm_count(p, &a, &b)?;
            if n == 1 {
                return Ok(AlgebraicReal { poly: p.clone(), lo: a, hi: b });
            }
            if a == lo && b == hi {
                return Err(Error::Verification(format!(
                    "isolating interval holds {n} roots of {p}"
                )));
            }
        }
        j += 1;
        if j > 4096 {
            return Err(Error::Verification("could not certify root interval".into()));
        }
    }
}

/// Wraps an exact rational root `r` of `p` in a small isolating interval.
fn isolate_rational_root(p: &IntPoly, r: BigRational) -> Result<AlgebraicReal> {
    let mut w = BigRational::one();
    for _ in 0..4096 {
        let lo = &r - &w;
        let hi = &r + &w;
        if p.sign_at(&lo) != Ordering::Equal && p.sign_at(&hi) != Ordering::Equal {
            if sturm_count(p, &lo, &hi)? == 1 {
                return Ok(AlgebraicReal {
                    poly: p.clone(),
                    lo,
                    hi,
                });
            }
        }
        w /= rat(2);
    }
    Err(Error::Verification("could not isolate rational root".into()))
}

/// Largest real root, required to exceed 1.
pub fn perron_root(p: &IntPoly) -> Result<AlgebraicReal> {
    let roots = isolate_real_roots(p)?;
    match roots.last() {
        Some(r) if r.cmp_rational(&BigRational::one()) == Ordering::Greater => Ok(r.clone()),
        _ => Err(Error::NoExpandingRoot(p.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ip(c: &[i64]) -> IntPoly {
        IntPoly::from_i64(c)
    }

    // Independent oracle: count sign changes of p on a fine rational grid.
    fn grid_sign_changes(p: &IntPoly, a: i64, b: i64, steps: i64) -> usize {
        let mut last = Ordering::Equal;
        let mut n = 0;
        for i in 0..=steps {
            let x = BigRational::new(
                BigInt::from(a * steps + (b - a) * i),
                BigInt::from(steps),
            );
            let s = p.sign_at(&x);
            if s != Ordering::Equal {
                if last != Ordering::Equal && s != last {
                    n += 1;
                }
                last = s;
            }
        }
        n
    }

    #[test]
    fn golden_ratio_quadratic() {
        let p = ip(&[1, -3, 1]);
        assert_eq!(sturm_count(&p, &rat(0), &rat(3)).unwrap(), 2);
        let r = perron_root(&p).unwrap();
        assert!((r.to_f64() - 2.618033988749895).abs() < 1e-15);
    }

    #[test]
    fn endpoint_root_is_rejected() {
        let p = ip(&[-1, 1]);
        assert!(matches!(
            sturm_count(&p, &rat(1), &rat(2)),
            Err(Error::EndpointRoot(_))
        ));
    }

    #[test]
    fn isolation_agrees_with_grid_oracle() {
        let polys = [
            ip(&[1, -3, -3, -3, 1]),
            ip(&[1, 0, -2, 1]),
            ip(&[-1, 6, -1, -3, 1]),
            ip(&[0, -2, 0, 1]),
            ip(&[6, -5, -5, 5, -1, 1].map(|x| x)),
        ];
        for p in polys {
            let roots = isolate_real_roots(&p).unwrap();
            // roots of these examples are separated by more than 1/64
            let grid = grid_sign_changes(&p.square_free(), -8, 8, 16 * 256);
            assert_eq!(roots.len(), grid, "{p}");
            for w in roots.windows(2) {
                assert_eq!(w[0].cmp_exact(&w[1]), Ordering::Less);
            }
        }
    }

    #[test]
    fn exact_rational_roots() {
        // (t - 1/2)(t + 3)(t) scaled to integers
        let p = &(&ip(&[-1, 2]) * &ip(&[3, 1])) * &ip(&[0, 1]);
        let roots = isolate_real_roots(&p).unwrap();
        let vals: Vec<f64> = roots.iter().map(|r| r.to_f64()).collect();
        assert_eq!(vals, vec![-3.0, 0.0, 0.5]);
        assert_eq!(
            roots[2].cmp_rational(&BigRational::new(BigInt::from(1), BigInt::from(2))),
            Ordering::Equal
        );
    }

    #[test]
    fn refinement_only_shrinks() {
        let r = perron_root(&ip(&[1, -3, -3, -3, 1])).unwrap();
        let s = r.refine_n(20);
        assert!(s.lo() >= r.lo() && s.hi() <= r.hi());
        assert!(s.width() < r.width());
    }

    #[test]
    fn equal_algebraics_from_different_polys() {
        let a = perron_root(&ip(&[1, -3, 1])).unwrap();
        let b = perron_root(&(&ip(&[1, -3, 1]) * &ip(&[1, 1]))).unwrap();
        assert_eq!(a.cmp_exact(&b), Ordering::Equal);
        let c = perron_root(&ip(&[-1, -1, 1])).unwrap();
        assert_eq!(c.cmp_exact(&a), Ordering::Less);
    }

    #[test]
    fn no_expanding_root() {
        assert!(matches!(
            perron_root(&ip(&[1, 1])),
            Err(Error::NoExpandingRoot(_))
        ));
    }
}
