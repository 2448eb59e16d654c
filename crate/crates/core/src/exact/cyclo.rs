//! Cyclotomic polynomials, reciprocity and companion polynomials.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::poly::IntPoly;
use crate::error::{Error, Result};

fn euler_phi(mut n: u64) -> u64 {
    let mut r = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            r -= r / p;
        }
        p += 1;
    }
    if n > 1 {
        r -= r / n;
    }
    r
}

/// `Phi_1, ..., Phi_n` by dividing `t^k - 1` by the divisor terms.
pub fn cyclotomic_table(n: u64) -> Vec<IntPoly> {
    let mut table: Vec<IntPoly> = vec![IntPoly::zero()];
    for k in 1..=n {
        let mut p = IntPoly::monomial(BigInt::one(), k as usize);
        p = &p - &IntPoly::constant(BigInt::one());
        for d in 1..k {
            if k % d == 0 {
                p = p.div_exact(&table[d as usize]).expect("cyclotomic divisor");
            }
        }
        table.push(p);
    }
    table
}

pub fn cyclotomic(n: u64) -> IntPoly {
    cyclotomic_table(n).pop().expect("n >= 1")
}

/// Indices `n` with `phi(n) <= deg` and `n <= 2 deg^2`, increasing.
fn candidate_orders(deg: usize) -> Vec<u64> {
    let limit = (2 * deg * deg).max(2) as u64;
    (1..=limit).filter(|&n| euler_phi(n) as usize <= deg).collect()
}

/// Smallest `n` such that `Phi_n` divides `p`.
pub fn has_cyclotomic_factor(p: &IntPoly) -> Option<u64> {
    let deg = p.degree()?;
    if deg == 0 {
        return None;
    }
    let orders = candidate_orders(deg);
    let table = cyclotomic_table(*orders.last().unwrap_or(&1));
    orders
        .into_iter()
        .find(|&n| p.div_exact(&table[n as usize]).is_some())
}

/// Divides out every cyclotomic factor, with multiplicity.
pub fn strip_cyclotomic(p: &IntPoly) -> (IntPoly, Vec<u64>) {
    let mut cur = p.clone();
    let mut removed = Vec::new();
    let deg = match p.degree() {
        Some(d) if d > 0 => d,
        _ => return (cur, removed),
    };
    let orders = candidate_orders(deg);
    let table = cyclotomic_table(*orders.last().unwrap_or(&1));
    for n in orders {
        while let Some(q) = cur.div_exact(&table[n as usize]) {
            if q.degree().is_none() {
                break;
            }
            cur = q;
            removed.push(n);
        }
    }
    (cur, removed)
}

/// Palindromic coefficient sequence.
pub fn is_reciprocal(p: &IntPoly) -> bool {
    let c = p.coeffs();
    !c.is_empty() && c.iter().eq(c.iter().rev())
}

/// For reciprocal `p` of degree `2g`, the `q` of degree `g` with
/// `p(t) = t^g q(t + 1/t)`. Odd degree inputs must carry the factor `t + 1`,
/// which is removed first.
pub fn companion_polynomial(p: &IntPoly) -> Result<IntPoly> {
    let mut p = p.clone();
    let deg = p.degree().ok_or_else(|| Error::NotReciprocal("zero".into()))?;
    if deg % 2 == 1 {
        p = p
            .div_exact(&IntPoly::from_i64(&[1, 1]))
            .ok_or_else(|| Error::NotReciprocal(format!("{p} has odd degree without t+1")))?;
    }
    if !is_reciprocal(&p) {
        return Err(Error::NotReciprocal(p.to_string()));
    }
    let g = p.degree().unwrap_or(0) / 2;
    let mut r = p.clone();
    let mut q = vec![BigInt::zero(); g + 1];
    let t2p1 = IntPoly::from_i64(&[1, 0, 1]);
    for k in (0..=g).rev() {
        let a = r.coeff(g + k);
        if a.is_zero() {
            continue;
        }
        // t^(g-k) (t^2 + 1)^k
        let term = &IntPoly::monomial(a.clone(), g - k) * &t2p1.pow(k as u32);
        r = &r - &term;
        q[k] = a;
    }
    if !r.is_zero() {
        return Err(Error::Verification("companion reduction left a remainder".into()));
    }
    Ok(IntPoly::new(q))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ip(c: &[i64]) -> IntPoly {
        IntPoly::from_i64(c)
    }

    #[test]
    fn small_cyclotomics() {
        assert_eq!(cyclotomic(1), ip(&[-1, 1]));
        assert_eq!(cyclotomic(2), ip(&[1, 1]));
        assert_eq!(cyclotomic(6), ip(&[1, -1, 1]));
        assert_eq!(cyclotomic(12), ip(&[1, 0, -1, 0, 1]));
    }

    #[test]
    fn product_of_cyclotomics_over_divisors() {
        for n in 1..30u64 {
            let mut prod = IntPoly::constant(BigInt::one());
            for d in 1..=n {
                if n % d == 0 {
                    prod = &prod * &cyclotomic(d);
                }
            }
            let mut want = IntPoly::monomial(BigInt::one(), n as usize);
            want = &want - &IntPoly::constant(BigInt::one());
            assert_eq!(prod, want);
        }
    }

    #[test]
    fn detects_factor() {
        assert_eq!(has_cyclotomic_factor(&ip(&[1, -3, 1])), None);
        let p = &ip(&[1, -3, 1]) * &ip(&[1, 1]);
        assert_eq!(has_cyclotomic_factor(&p), Some(2));
        let (s, removed) = strip_cyclotomic(&p);
        assert_eq!(s, ip(&[1, -3, 1]));
        assert_eq!(removed, vec![2]);
    }

    #[test]
    fn companion_examples() {
        assert!(is_reciprocal(&ip(&[1, -3, 1])));
        assert_eq!(companion_polynomial(&ip(&[1, -3, 1])).unwrap(), ip(&[-3, 1]));
        assert_eq!(companion_polynomial(&ip(&[1, 0, 1])).unwrap(), ip(&[0, 1]));
        assert!(companion_polynomial(&ip(&[1, 2, 3])).is_err());
    }
}
