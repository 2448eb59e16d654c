//! Rational labels of standard zig-zags of pseudo-Anosov type.
//!
//! For modality `m >= 2` each reduced fraction `a/b` in `(0, 1)` determines
//! a cyclic permutation type `(n, k) = (b + 1, b + 1 - a)`, a digit
//! polynomial, and through its Perron root a standard zig-zag.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{perron_root, IntPoly};
use crate::perm::Permutation;
use crate::zigzag::{make_zigzag, PostcriticalData, Sign, ZigZagMap, DEFAULT_MAX_STEPS};

/// Reduced fraction `a/b` with `0 < a < b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FractionLabel {
    pub a: u64,
    pub b: u64,
}

impl FractionLabel {
    pub fn new(a: u64, b: u64) -> Result<FractionLabel> {
        if a == 0 || a >= b {
            return Err(Error::InvalidInput(format!("{a}/{b} is not in (0, 1)")));
        }
        if a.gcd(&b) != 1 {
            return Err(Error::InvalidInput(format!("{a}/{b} is not reduced")));
        }
        Ok(FractionLabel { a, b })
    }

    /// Permutation parameters `(n, k)`.
    pub fn type_params(&self) -> (usize, usize) {
        let n = self.b as usize + 1;
        (n, n - self.a as usize)
    }

    pub fn to_f64(&self) -> f64 {
        self.a as f64 / self.b as f64
    }

    pub fn to_decimal(&self, places: u32) -> String {
        crate::exact::decimal::fixed(&BigRational::new(self.a.into(), self.b.into()), places)
    }

    pub fn cmp_value(&self, o: &FractionLabel) -> Ordering {
        (self.a * o.b).cmp(&(o.a * self.b))
    }

    /// All reduced fractions in `(0, 1)` with denominator at most `bmax`,
    /// ordered by denominator then numerator.
    pub fn all_up_to(bmax: u64) -> Vec<FractionLabel> {
        let mut v = Vec::new();
        for b in 2..=bmax {
            for a in 1..b {
                if a.gcd(&b) == 1 {
                    v.push(FractionLabel { a, b });
                }
            }
        }
        v
    }
}

impl fmt::Display for FractionLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.a, self.b)
    }
}

impl FromStr for FractionLabel {
    type Err = Error;
    fn from_str(s: &str) -> Result<FractionLabel> {
        let (a, b) = s
            .split_once('/')
            .ok_or_else(|| Error::InvalidInput(format!("expected a/b, got {s:?}")))?;
        let a = a
            .trim()
            .parse()
            .map_err(|_| Error::InvalidInput(format!("bad numerator in {s:?}")))?;
        let b = b
            .trim()
            .parse()
            .map_err(|_| Error::InvalidInput(format!("bad denominator in {s:?}")))?;
        FractionLabel::new(a, b)
    }
}

fn check_nk(n: usize, k: usize) -> Result<()> {
    if n < 3 || k < 2 || k > n - 1 {
        return Err(Error::InvalidInput(format!("need n >= 3 and 2 <= k <= n-1, got ({n}, {k})")));
    }
    Ok(())
}

fn rho_e_fn(n: usize, k: usize, i: usize) -> usize {
    if i == 1 {
        n
    } else if i <= k - 1 {
        i + (n - k)
    } else {
        i - (k - 1)
    }
}

/// Permutation of `{1..n}` used for even `m >= 4`.
pub fn rho_e(n: usize, k: usize) -> Result<Permutation> {
    check_nk(n, k)?;
    Permutation::from_fn(1, n, |i| rho_e_fn(n, k, i))
}

/// Permutation of `{0..n}` used for odd `m >= 3`.
pub fn rho_o(n: usize, k: usize) -> Result<Permutation> {
    check_nk(n, k)?;
    Permutation::from_fn(0, n + 1, |i| match i {
        0 => n,
        1 => 0,
        _ => rho_e_fn(n, k, i),
    })
}

/// Permutation of `{1..n}` used for `m = 2`: `rho_e` conjugated by the
/// cycle `(1 2 ... k-1)`.
pub fn rho_2(n: usize, k: usize) -> Result<Permutation> {
    check_nk(n, k)?;
    let tau = Permutation::from_fn(1, n, |i| if i < k - 1 { i + 1 } else if i == k - 1 { 1 } else { i })?;
    let e = rho_e(n, k)?;
    Ok(tau.inverse().compose(&e.compose(&tau)))
}

pub fn rho_family(m: u32, n: usize, k: usize) -> Result<Permutation> {
    match m {
        0 | 1 => Err(Error::UnimodalRegime),
        2 => rho_2(n, k),
        _ if m % 2 == 0 => rho_e(n, k),
        _ => rho_o(n, k),
    }
}

/// Cycle criterion for the family: `gcd(n - k, n - 1) = 1`.
pub fn is_full_cycle(n: usize, k: usize) -> bool {
    (n - k).gcd(&(n - 1)) == 1
}

/// `D(t) = t^(b+1) + 1 - sum_i c_i t^(b+1-i)` with `c_i = m` when some
/// multiple of `b` lies in `[(i-1) a, i a]` and `c_i = m - 2` otherwise.
pub fn digit_poly_from_fraction(m: u32, q: FractionLabel) -> Result<IntPoly> {
    if m < 2 {
        return Err(Error::UnimodalRegime);
    }
    let (a, b) = (q.a, q.b);
    let mut c = vec![BigInt::from(0); b as usize + 2];
    c[0] = BigInt::from(1);
    c[b as usize + 1] = BigInt::from(1);
    for i in 1..=b {
        let lo = (i - 1) * a;
        let hi = i * a;
        // smallest multiple of b that is >= lo
        let j = lo.div_ceil(b);
        let digit = if j * b <= hi { m } else { m - 2 };
        c[(b + 1 - i) as usize] = -BigInt::from(digit);
    }
    Ok(IntPoly::new(c))
}

/// Location of a postcritical point relative to the branch intervals.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Tag {
    /// 0 or 1
    E,
    /// the first critical point
    C,
    /// interior of `I_{m-1}`
    R,
    /// interior of `I_{m-2}`
    #[serde(rename = "P_m-2")]
    PmMinus2,
    /// interior of `I_m`
    #[serde(rename = "P_m")]
    Pm,
    /// anywhere else
    Other,
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tag::E => "E",
            Tag::C => "C",
            Tag::R => "R",
            Tag::PmMinus2 => "P_{m-2}",
            Tag::Pm => "P_m",
            Tag::Other => "other",
        };
        f.write_str(s)
    }
}

/// Tag of every orbit point, indexed by sorted position.
pub fn taxonomy(f: &ZigZagMap, pcd: &PostcriticalData) -> Result<Vec<Tag>> {
    let m = f.modality() as usize;
    let c1 = f.critical_point(1);
    let mut tags = Vec::with_capacity(pcd.sorted.len());
    for x in &pcd.sorted {
        let tag = if x.is_zero()? || x.cmp_exact(&f.int(1))? == Ordering::Equal {
            Tag::E
        } else if x.cmp_exact(&c1)? == Ordering::Equal {
            Tag::C
        } else {
            let j = f.branch_index(x)?;
            let on_critical = j >= 1 && x.cmp_exact(&f.critical_point(j as u32))? == Ordering::Equal;
            if on_critical {
                Tag::Other
            } else if j + 1 == m {
                Tag::R
            } else if j + 2 == m {
                Tag::PmMinus2
            } else if j == m {
                Tag::Pm
            } else {
                Tag::Other
            }
        };
        tags.push(tag);
    }
    Ok(tags)
}

/// Standard zig-zag labelled by `(m, a/b)` together with its verified data.
#[derive(Clone, Debug)]
pub struct LabelledMap {
    pub m: u32,
    pub fraction: FractionLabel,
    pub map: ZigZagMap,
    pub digit_poly: IntPoly,
    pub postcritical: PostcriticalData,
    pub tags: Vec<Tag>,
}

/// Builds the standard zig-zag for `(m, a/b)` and checks its period,
/// permutation type, taxonomy and digit polynomial.
pub fn build_zigzag(m: u32, q: FractionLabel) -> Result<LabelledMap> {
    let d = digit_poly_from_fraction(m, q)?;
    let lambda = perron_root(&d)?;
    let f = make_zigzag(m, Sign::standard(m), &lambda)?;
    let pcd = f.orbit_of_one(DEFAULT_MAX_STEPS)?.periodic()?;
    let (n, k) = q.type_params();
    let want_period = if m % 2 == 1 { n + 1 } else { n };
    if pcd.period() != want_period {
        return Err(Error::Verification(format!(
            "period {} differs from expected {want_period}",
            pcd.period()
        )));
    }
    let rho = rho_family(m, n, k)?;
    if pcd.permutation != rho {
        return Err(Error::Verification(format!(
            "permutation {} differs from expected {}",
            pcd.permutation, rho
        )));
    }
    let tags = taxonomy(&f, &pcd)?;
    check_taxonomy(m, n, k, pcd.base, &tags)?;
    let df = f.digit_polynomial(DEFAULT_MAX_STEPS)?;
    if df != d {
        return Err(Error::Verification(format!(
            "digit polynomial {df} differs from closed form {d}"
        )));
    }
    Ok(LabelledMap {
        m,
        fraction: q,
        map: f,
        digit_poly: d,
        postcritical: pcd,
        tags,
    })
}

fn check_taxonomy(m: u32, n: usize, k: usize, base: usize, tags: &[Tag]) -> Result<()> {
    let c_label = if m == 2 { k - 1 } else { 1 };
    for (pos, &t) in tags.iter().enumerate() {
        let label = pos + base;
        let want_ok = if label == 0 || label == n {
            t == Tag::E
        } else if label == c_label {
            t == Tag::C
        } else if label == k {
            t == Tag::R
        } else {
            matches!(t, Tag::PmMinus2 | Tag::Pm)
        };
        if !want_ok {
            return Err(Error::Verification(format!("orbit point x_{label} has type {t}")));
        }
    }
    Ok(())
}

/// Recovers `a/b` from a standard zig-zag in the family.
pub fn phi(f: &ZigZagMap) -> Result<FractionLabel> {
    let m = f.modality();
    if m < 2 {
        return Err(Error::UnimodalRegime);
    }
    if !f.is_standard() {
        return Err(Error::NotInFamily("map is not standard".into()));
    }
    let pcd = f.orbit_of_one(DEFAULT_MAX_STEPS)?.periodic()?;
    let n = pcd.top_label();
    if n < 3 {
        return Err(Error::NotInFamily(format!("period {} is too short", pcd.period())));
    }
    for k in 2..n {
        if rho_family(m, n, k)? == pcd.permutation {
            return FractionLabel::new((n - k) as u64, (n - 1) as u64);
        }
    }
    Err(Error::NotInFamily(format!(
        "permutation {} matches no (n, k)",
        pcd.permutation
    )))
}

/// The non-standard map with slope the larger root of `t^2 - (m+1) t + 1`.
pub fn quad_nonstandard(m: u32) -> Result<ZigZagMap> {
    if m < 2 {
        return Err(Error::UnimodalRegime);
    }
    let p = IntPoly::from_i64(&[1, -(m as i64 + 1), 1]);
    let lambda = perron_root(&p)?;
    let f = make_zigzag(m, Sign::standard(m).flip(), &lambda)?;
    let pcd = f.orbit_of_one(16)?.periodic()?;
    let linv = f.lambda_inv();
    let ok = if m % 2 == 1 {
        pcd.period() == 2 && pcd.orbit[1] == *linv
    } else {
        pcd.period() == 3 && pcd.orbit[1] == *linv && pcd.orbit[2].is_zero()?
    };
    if !ok {
        return Err(Error::Verification("unexpected orbit of 1".into()));
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: u64, b: u64) -> FractionLabel {
        FractionLabel::new(a, b).unwrap()
    }

    // oracle: walk the cycle containing the first label
    fn brute_full_cycle(p: &Permutation) -> bool {
        let mut j = p.base();
        for step in 1..=p.len() {
            j = p.apply(j);
            if j == p.base() {
                return step == p.len();
            }
        }
        false
    }

    #[test]
    fn rho_e_examples() {
        assert_eq!(rho_e(7, 2).unwrap().images(), &[7, 1, 2, 3, 4, 5, 6]);
        assert_eq!(rho_e(7, 3).unwrap().images(), &[7, 6, 1, 2, 3, 4, 5]);
        assert_eq!(rho_e(7, 3).unwrap().cycle_string(), "(7,5,3,1)(6,4,2)");
        assert_eq!(rho_e(7, 6).unwrap().images(), &[7, 3, 4, 5, 6, 1, 2]);
    }

    #[test]
    fn rho_2_moves_k_and_k_minus_1() {
        for n in 3..15 {
            for k in 2..n {
                let p = rho_2(n, k).unwrap();
                assert_eq!(p.apply(k), k - 1);
                assert_eq!(p.apply(k - 1), n);
            }
        }
    }

    #[test]
    fn cycle_criterion_agrees_with_enumeration() {
        for n in 3..=40 {
            for k in 2..n {
                let want = is_full_cycle(n, k);
                assert_eq!((n - k).gcd(&(k - 1)) == 1, want);
                for m in [2, 3, 4] {
                    assert_eq!(brute_full_cycle(&rho_family(m, n, k).unwrap()), want, "{m} {n} {k}");
                }
            }
        }
    }

    #[test]
    fn closed_form_examples() {
        let d = digit_poly_from_fraction(2, q(1, 7)).unwrap();
        assert_eq!(d, IntPoly::from_i64(&[1, -2, 0, 0, 0, 0, 0, -2, 1]));
        let d = digit_poly_from_fraction(2, q(6, 7)).unwrap();
        assert_eq!(d, IntPoly::from_i64(&[1, -2, -2, -2, -2, -2, -2, -2, 1]));
        let d = digit_poly_from_fraction(7, q(4, 13)).unwrap();
        let mut want = vec![1, -7, -5, -5, -7, -5, -5, -7, -5, -5, -7, -5, -5, -7, 1];
        want.reverse();
        assert_eq!(d, IntPoly::from_i64(&want));
        let d = digit_poly_from_fraction(7, q(9, 13)).unwrap();
        let mut want = vec![1, -7, -7, -7, -5, -7, -7, -5, -7, -7, -5, -7, -7, -7, 1];
        want.reverse();
        assert_eq!(d, IntPoly::from_i64(&want));
    }

    #[test]
    fn markov_example_is_one_half() {
        let lm = build_zigzag(2, q(1, 2)).unwrap();
        assert_eq!(lm.digit_poly, IntPoly::from_i64(&[1, -2, -2, 1]));
        assert_eq!(lm.postcritical.permutation.images(), &[3, 1, 2]);
        assert_eq!(phi(&lm.map).unwrap(), q(1, 2));
    }

    #[test]
    fn negative_four_branch_is_two_thirds() {
        let lm = build_zigzag(3, q(2, 3)).unwrap();
        assert_eq!(lm.digit_poly, IntPoly::from_i64(&[1, -3, -3, -3, 1]));
        assert_eq!(lm.map.sign(), Sign::Negative);
    }

    #[test]
    fn quad_maps() {
        for m in 2..7 {
            let f = quad_nonstandard(m).unwrap();
            assert!(!f.is_standard());
        }
    }

    #[test]
    fn parse_fraction() {
        assert_eq!("3/7".parse::<FractionLabel>().unwrap(), q(3, 7));
        assert!("2/4".parse::<FractionLabel>().is_err());
        assert!("5/3".parse::<FractionLabel>().is_err());
    }
}
