//! Arithmetic in `Q(lambda)` for a real algebraic `lambda`.
//!
//! Elements are rational polynomials reduced modulo the defining polynomial
//! of the context. Signs are decided by interval evaluation over the
//! isolating interval of `lambda`, refined on demand; exact zeros that are
//! not visible in the representation (possible when the defining polynomial
//! is reducible) are detected through a gcd with the defining polynomial.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::cyclo::strip_cyclotomic;
use super::decimal;
use super::poly::{IntPoly, RatPoly};
use super::roots::{isolate_real_roots, sturm_count, AlgebraicReal};
use crate::error::{Error, Result};

/// Default cap on bisections spent deciding a single sign.
pub const DEFAULT_MAX_BISECTIONS: usize = 512;
/// Environment variable overriding [`DEFAULT_MAX_BISECTIONS`].
pub const MAX_BISECTIONS_ENV: &str = "ZZPA_MAX_BISECTIONS";

const WORKING_BITS: u32 = 256;

fn max_bisections_from_env() -> usize {
    std::env::var(MAX_BISECTIONS_ENV)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_BISECTIONS)
}

/// Shared description of `Q(lambda)`.
#[derive(Debug)]
pub struct FieldContext {
    minpoly: IntPoly,
    modulus: RatPoly,
    root: AlgebraicReal,
    fine: AlgebraicReal,
    max_bisections: usize,
}

impl PartialEq for FieldContext {
    fn eq(&self, o: &Self) -> bool {
        self.minpoly == o.minpoly && self.root.cmp_exact(&o.root) == Ordering::Equal
    }
}

impl FieldContext {
    /// Context for the root of `minpoly` equal to `root`.
    pub fn new(minpoly: &IntPoly, root: &AlgebraicReal) -> Result<Arc<FieldContext>> {
        let minpoly = minpoly.square_free();
        if minpoly.degree().unwrap_or(0) == 0 {
            return Err(Error::InvalidInput("constant defining polynomial".into()));
        }
        let own = isolate_real_roots(&minpoly)?
            .into_iter()
            .find(|r| r.cmp_exact(root) == Ordering::Equal)
            .ok_or_else(|| {
                Error::InvalidInput(format!("value is not a root of {minpoly}"))
            })?;
        Ok(Self::build(minpoly, own))
    }

    /// Context for an algebraic real; cyclotomic factors of its defining
    /// polynomial are removed first.
    pub fn for_root(root: &AlgebraicReal) -> Result<Arc<FieldContext>> {
        let (stripped, _) = strip_cyclotomic(root.poly());
        Self::new(&stripped, root)
    }

    fn build(minpoly: IntPoly, root: AlgebraicReal) -> Arc<FieldContext> {
        let modulus = minpoly.to_rat().monic();
        let fine = root.refine_to_bits(WORKING_BITS);
        Arc::new(FieldContext {
            minpoly,
            modulus,
            root,
            fine,
            max_bisections: max_bisections_from_env(),
        })
    }

    /// Copy with a different sign-decision cap.
    pub fn with_max_bisections(self: &Arc<Self>, cap: usize) -> Arc<FieldContext> {
        Arc::new(FieldContext {
            minpoly: self.minpoly.clone(),
            modulus: self.modulus.clone(),
            root: self.root.clone(),
            fine: self.fine.clone(),
            max_bisections: cap,
        })
    }

    pub fn minpoly(&self) -> &IntPoly {
        &self.minpoly
    }

    pub fn root(&self) -> &AlgebraicReal {
        &self.root
    }

    pub fn degree(&self) -> usize {
        self.minpoly.degree().unwrap_or(0)
    }

    pub fn max_bisections(&self) -> usize {
        self.max_bisections
    }

    fn reduce(&self, p: &RatPoly) -> RatPoly {
        match p.degree() {
            Some(d) if d >= self.degree() => p.rem(&self.modulus).expect("nonzero modulus"),
            _ => p.clone(),
        }
    }

    /// Whether the integer polynomial `n` vanishes at the root.
    fn vanishes(&self, n: &IntPoly) -> bool {
        let g = n.to_rat().gcd(&self.modulus).to_primitive();
        if g.degree().unwrap_or(0) == 0 {
            return false;
        }
        if self.root.is_exact() {
            return g.sign_at(self.root.lo()) == Ordering::Equal;
        }
        sturm_count(&g, self.root.lo(), self.root.hi()).map_or(false, |k| k > 0)
    }
}

/// Interval Horner evaluation over `[lo, hi]`; returns `(p, q, d)` with the
/// range enclosed by `[p / d, q / d]` and `d > 0`.
fn interval_eval(poly: &IntPoly, lo: &BigRational, hi: &BigRational) -> (BigInt, BigInt, BigInt) {
    let d = lo.denom().lcm(hi.denom());
    let a = lo.numer() * (&d / lo.denom());
    let b = hi.numer() * (&d / hi.denom());
    let c = poly.coeffs();
    let n = c.len();
    if n == 0 {
        return (BigInt::zero(), BigInt::zero(), BigInt::one());
    }
    let mut x = c[n - 1].clone();
    let mut y = c[n - 1].clone();
    let mut scale = BigInt::one();
    for i in (0..n - 1).rev() {
        let ps = [&x * &a, &x * &b, &y * &a, &y * &b];
        let mut mn = ps[0].clone();
        let mut mx = ps[0].clone();
        for p in &ps[1..] {
            if *p < mn {
                mn = p.clone();
            }
            if *p > mx {
                mx = p.clone();
            }
        }
        scale *= &d;
        let ci = &c[i] * &scale;
        x = mn + &ci;
        y = mx + ci;
    }
    (x, y, scale)
}

fn interval_sign(poly: &IntPoly, lo: &BigRational, hi: &BigRational) -> Option<Ordering> {
    let (x, y, _) = interval_eval(poly, lo, hi);
    if x.is_positive() {
        Some(Ordering::Greater)
    } else if y.is_negative() {
        Some(Ordering::Less)
    } else if x.is_zero() && y.is_zero() {
        Some(Ordering::Equal)
    } else {
        None
    }
}

/// Element of `Q(lambda)`.
#[derive(Clone)]
pub struct FieldElement {
    ctx: Arc<FieldContext>,
    num: RatPoly,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldElement({} ~ {})", self.num, self.to_f64())
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.num)
    }
}

impl FieldElement {
    pub fn from_poly(ctx: &Arc<FieldContext>, p: &RatPoly) -> FieldElement {
        FieldElement {
            num: ctx.reduce(p),
            ctx: ctx.clone(),
        }
    }

    pub fn from_rational(ctx: &Arc<FieldContext>, r: BigRational) -> FieldElement {
        FieldElement {
            num: RatPoly::constant(r),
            ctx: ctx.clone(),
        }
    }

    pub fn from_int(ctx: &Arc<FieldContext>, n: i64) -> FieldElement {
        Self::from_rational(ctx, BigRational::from_integer(BigInt::from(n)))
    }

    pub fn zero(ctx: &Arc<FieldContext>) -> FieldElement {
        FieldElement {
            num: RatPoly::zero(),
            ctx: ctx.clone(),
        }
    }

    pub fn one(ctx: &Arc<FieldContext>) -> FieldElement {
        Self::from_int(ctx, 1)
    }

    /// `lambda` itself.
    pub fn generator(ctx: &Arc<FieldContext>) -> FieldElement {
        Self::from_poly(ctx, &RatPoly::monomial(BigRational::one(), 1))
    }

    /// Evaluates an integer polynomial at this element.
    pub fn eval_poly(&self, p: &IntPoly) -> FieldElement {
        let mut acc = FieldElement::zero(&self.ctx);
        for c in p.coeffs().iter().rev() {
            acc = &(&acc * self) + &FieldElement::from_rational(&self.ctx, BigRational::from_integer(c.clone()));
        }
        acc
    }

    pub fn context(&self) -> &Arc<FieldContext> {
        &self.ctx
    }

    /// Reduced representative, in powers of `lambda`.
    pub fn repr(&self) -> &RatPoly {
        &self.num
    }

    /// Rational value when the representative is constant.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self.num.degree() {
            None => Some(BigRational::zero()),
            Some(0) => Some(self.num.coeff(0)),
            _ => None,
        }
    }

    fn same_field(&self, o: &FieldElement) {
        assert!(
            Arc::ptr_eq(&self.ctx, &o.ctx) || self.ctx.minpoly == o.ctx.minpoly,
            "{}",
            Error::FieldMismatch
        );
    }

    pub fn scale(&self, k: &BigRational) -> FieldElement {
        FieldElement {
            num: self.num.scale(k),
            ctx: self.ctx.clone(),
        }
    }

    pub fn scale_int(&self, k: i64) -> FieldElement {
        self.scale(&BigRational::from_integer(BigInt::from(k)))
    }

    pub fn pow(&self, k: u32) -> FieldElement {
        let mut acc = FieldElement::one(&self.ctx);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Multiplicative inverse; fails exactly when the value is zero.
    pub fn inverse(&self) -> Result<FieldElement> {
        if self.num.is_zero() {
            return Err(Error::ZeroDivisor);
        }
        let (g, s) = self.num.gcd_ext(&self.ctx.modulus);
        if g.degree() == Some(0) {
            return Ok(FieldElement::from_poly(&self.ctx, &s));
        }
        if self.ctx.vanishes(&g.to_primitive()) {
            return Err(Error::ZeroDivisor);
        }
        // Reducible modulus: invert modulo the cofactor that still has the root.
        let h = self.ctx.modulus.divmod(&g)?.0;
        let (g2, s2) = self.num.rem(&h)?.gcd_ext(&h);
        if g2.degree() != Some(0) {
            return Err(Error::ZeroDivisor);
        }
        Ok(FieldElement::from_poly(&self.ctx, &s2))
    }

    /// Exact sign of the value.
    pub fn sign(&self) -> Result<Ordering> {
        if let Some(r) = self.as_rational() {
            return Ok(r.cmp(&BigRational::zero()));
        }
        let n = self.num.clear_denominators();
        let mut root = self.ctx.fine.clone();
        if root.is_exact() {
            return Ok(n.sign_at(root.lo()));
        }
        let cap = self.ctx.max_bisections;
        let mut spent = 0usize;
        let mut zero_checked = false;
        loop {
            if let Some(s) = interval_sign(&n, root.lo(), root.hi()) {
                return Ok(s);
            }
            if !zero_checked {
                zero_checked = true;
                if self.ctx.vanishes(&n) {
                    return Ok(Ordering::Equal);
                }
            }
            if spent >= cap {
                return Err(Error::Undecided(spent));
            }
            let step = (cap - spent).min(32);
            root = root.refine_n(step);
            spent += step;
            if root.is_exact() {
                return Ok(n.sign_at(root.lo()));
            }
        }
    }

    pub fn is_zero(&self) -> Result<bool> {
        Ok(self.sign()? == Ordering::Equal)
    }

    pub fn cmp_exact(&self, o: &FieldElement) -> Result<Ordering> {
        (self - o).sign()
    }

    /// Rational enclosure of width at most `2^-bits` (best effort past the
    /// working precision).
    pub fn enclosure(&self, bits: u32) -> (BigRational, BigRational) {
        if let Some(r) = self.as_rational() {
            return (r.clone(), r);
        }
        let (n, l) = self.num.integer_form();
        let den = BigRational::from_integer(l);
        let target = BigRational::new(BigInt::one(), BigInt::one() << bits as usize);
        let mut root = self.ctx.fine.clone();
        for _ in 0..64 {
            let (p, q, d) = interval_eval(&n, root.lo(), root.hi());
            let lo = BigRational::new(p, d.clone()) / &den;
            let hi = BigRational::new(q, d) / &den;
            if &hi - &lo <= target || root.is_exact() {
                return (lo, hi);
            }
            root = root.refine_n(32);
        }
        let (p, q, d) = interval_eval(&n, root.lo(), root.hi());
        (BigRational::new(p, d.clone()) / &den, BigRational::new(q, d) / &den)
    }

    pub fn to_f64(&self) -> f64 {
        let (lo, hi) = self.enclosure(60);
        ((lo + hi) / BigRational::from_integer(BigInt::from(2)))
            .to_f64()
            .unwrap_or(f64::NAN)
    }

    /// Exact floor.
    pub fn floor(&self) -> Result<BigInt> {
        let (lo, hi) = self.enclosure(64);
        let a = lo.floor().to_integer();
        let b = hi.floor().to_integer();
        if a == b {
            return Ok(a);
        }
        // The value sits near an integer; decide against b.
        let diff = self - &FieldElement::from_rational(&self.ctx, BigRational::from_integer(b.clone()));
        Ok(match diff.sign()? {
            Ordering::Less => b - 1,
            _ => b,
        })
    }

    /// Decimal with `places` fractional digits, rounded half to even.
    pub fn to_decimal(&self, places: u32) -> String {
        if let Some(r) = self.as_rational() {
            return decimal::fixed(&r, places);
        }
        let mut bits = (places as f64 * 3.33) as u32 + 16;
        for _ in 0..16 {
            let (lo, hi) = self.enclosure(bits);
            let a = decimal::round_half_even(&lo, places);
            let b = decimal::round_half_even(&hi, places);
            if a == b {
                return decimal::format_scaled(&a, places);
            }
            bits += 64;
        }
        let (lo, hi) = self.enclosure(bits);
        decimal::fixed(&((lo + hi) / BigRational::from_integer(BigInt::from(2))), places)
    }
}

impl PartialEq for FieldElement {
    /// Exact equality of values; panics only if the sign cannot be decided.
    fn eq(&self, o: &Self) -> bool {
        self.cmp_exact(o).expect("decidable equality") == Ordering::Equal
    }
}

impl<'a> Add<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn add(self, o: &FieldElement) -> FieldElement {
        self.same_field(o);
        FieldElement {
            num: &self.num + &o.num,
            ctx: self.ctx.clone(),
        }
    }
}

impl<'a> Sub<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn sub(self, o: &FieldElement) -> FieldElement {
        self.same_field(o);
        FieldElement {
            num: &self.num - &o.num,
            ctx: self.ctx.clone(),
        }
    }
}

impl<'a> Mul<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn mul(self, o: &FieldElement) -> FieldElement {
        self.same_field(o);
        FieldElement {
            num: self.ctx.reduce(&(&self.num * &o.num)),
            ctx: self.ctx.clone(),
        }
    }
}

impl<'a> Neg for &'a FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement {
            num: -&self.num,
            ctx: self.ctx.clone(),
        }
    }
}

impl Add for FieldElement {
    type Output = FieldElement;
    fn add(self, o: FieldElement) -> FieldElement {
        &self + &o
    }
}

impl Sub for FieldElement {
    type Output = FieldElement;
    fn sub(self, o: FieldElement) -> FieldElement {
        &self - &o
    }
}

impl Mul for FieldElement {
    type Output = FieldElement;
    fn mul(self, o: FieldElement) -> FieldElement {
        &self * &o
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}
