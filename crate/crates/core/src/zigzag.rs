//! Uniformly expanding piecewise linear zig-zag maps of the unit interval.
//!
//! A zig-zag of modality `m` and slope `lambda` (with `floor(lambda) = m`)
//! has critical points `c_i = i / lambda`, `i = 1..m`, and branches
//! `f_j(x) = s_j lambda x + k_j` on `I_j = [c_j, c_{j+1})` (the last branch
//! is closed on both sides). The branch signs alternate; a positive map
//! fixes 0 and a negative map sends 0 to 1.

use std::cmp::Ordering;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{AlgebraicReal, FieldContext, FieldElement, IntPoly};
use crate::perm::Permutation;

/// Default iteration budget when following orbits.
pub const DEFAULT_MAX_STEPS: usize = 4096;

/// Orientation of the first branch.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "i8", try_from = "i8")]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Positive => 1,
            Sign::Negative => -1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
        }
    }

    /// Sign `(-1)^m`.
    pub fn standard(m: u32) -> Sign {
        if m % 2 == 0 {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }
}

impl From<Sign> for i8 {
    fn from(s: Sign) -> i8 {
        s.as_i8()
    }
}

impl TryFrom<i8> for Sign {
    type Error = Error;
    fn try_from(v: i8) -> Result<Sign> {
        match v {
            1 => Ok(Sign::Positive),
            -1 => Ok(Sign::Negative),
            _ => Err(Error::InvalidInput(format!("sign must be +1 or -1, got {v}"))),
        }
    }
}

/// Affine branch `x -> slope * lambda * x + constant`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Branch {
    pub slope: i8,
    pub constant: i64,
}

#[derive(Clone, Debug)]
pub struct ZigZagMap {
    m: u32,
    sign: Sign,
    lambda: AlgebraicReal,
    ctx: Arc<FieldContext>,
    lam: FieldElement,
    lam_inv: FieldElement,
}

/// Builds a zig-zag; requires `floor(lambda) = m >= 1`.
pub fn make_zigzag(m: u32, sign: Sign, lambda: &AlgebraicReal) -> Result<ZigZagMap> {
    let ctx = FieldContext::for_root(lambda)?;
    ZigZagMap::in_context(m, sign, &ctx)
}

impl ZigZagMap {
    /// Zig-zag whose slope is the generator of an existing context.
    pub fn in_context(m: u32, sign: Sign, ctx: &Arc<FieldContext>) -> Result<ZigZagMap> {
        if m == 0 {
            return Err(Error::InvalidInput("modality must be at least 1".into()));
        }
        let lam = FieldElement::generator(ctx);
        let fl = lam.floor()?;
        if fl != BigInt::from(m) {
            return Err(Error::ModalityMismatch {
                m,
                floor: fl.to_string(),
            });
        }
        let lam_inv = lam.inverse()?;
        Ok(ZigZagMap {
            m,
            sign,
            lambda: ctx.root().clone(),
            ctx: ctx.clone(),
            lam,
            lam_inv,
        })
    }

    pub fn modality(&self) -> u32 {
        self.m
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn lambda(&self) -> &AlgebraicReal {
        &self.lambda
    }

    pub fn context(&self) -> &Arc<FieldContext> {
        &self.ctx
    }

    pub fn lambda_elem(&self) -> &FieldElement {
        &self.lam
    }

    pub fn lambda_inv(&self) -> &FieldElement {
        &self.lam_inv
    }

    pub fn is_standard(&self) -> bool {
        self.sign == Sign::standard(self.m)
    }

    pub fn int(&self, n: i64) -> FieldElement {
        FieldElement::from_int(&self.ctx, n)
    }

    /// `c_i = i / lambda` for `i = 1..m`.
    pub fn critical_point(&self, i: u32) -> FieldElement {
        self.lam_inv.scale_int(i as i64)
    }

    pub fn critical_points(&self) -> Vec<FieldElement> {
        (1..=self.m).map(|i| self.critical_point(i)).collect()
    }

    pub fn branch(&self, j: usize) -> Branch {
        let j = j as i64;
        let even = j % 2 == 0;
        match (self.sign, even) {
            (Sign::Positive, true) | (Sign::Negative, false) => Branch {
                slope: 1,
                constant: -j,
            },
            (Sign::Positive, false) | (Sign::Negative, true) => Branch {
                slope: -1,
                constant: j + 1,
            },
        }
    }

    /// Index `j` with `x` in `I_j`.
    pub fn branch_index(&self, x: &FieldElement) -> Result<usize> {
        let y = &self.lam * x;
        let f = y.floor()?;
        let j = f.to_i64().unwrap_or(i64::MAX).clamp(0, self.m as i64);
        Ok(j as usize)
    }

    pub fn apply_branch(&self, j: usize, x: &FieldElement) -> FieldElement {
        let b = self.branch(j);
        let lx = &self.lam * x;
        let lx = if b.slope > 0 { lx } else { -&lx };
        &lx + &self.int(b.constant)
    }

    fn check_domain(&self, x: &FieldElement) -> Result<()> {
        if x.sign()? == Ordering::Less || x.cmp_exact(&self.int(1))? == Ordering::Greater {
            return Err(Error::InvalidInput(format!(
                "point {} outside the unit interval",
                x.to_decimal(6)
            )));
        }
        Ok(())
    }

    /// `f(x)` for `x` in `[0, 1]`.
    pub fn evaluate(&self, x: &FieldElement) -> Result<FieldElement> {
        self.check_domain(x)?;
        let j = self.branch_index(x)?;
        Ok(self.apply_branch(j, x))
    }

    /// Numeric evaluation for plotting.
    pub fn evaluate_f64(&self, x: f64) -> f64 {
        let l = self.lambda.to_f64();
        let j = ((l * x).floor().max(0.0) as usize).min(self.m as usize);
        let b = self.branch(j);
        b.slope as f64 * l * x + b.constant as f64
    }

    /// Follows the orbit of 1 until it returns to a point already visited.
    pub fn orbit_of_one(&self, max_steps: usize) -> Result<OrbitOutcome> {
        let one = self.int(1);
        let mut pts: Vec<FieldElement> = vec![one];
        let mut approx: Vec<f64> = vec![1.0];
        let mut branches = Vec::new();
        for _ in 0..max_steps {
            let x = pts.last().expect("nonempty");
            let j = self.branch_index(x)?;
            branches.push(j);
            let y = self.apply_branch(j, x);
            let ya = y.to_f64();
            let mut hit = None;
            for (i, p) in pts.iter().enumerate() {
                if (approx[i] - ya).abs() < 1e-6 && p.cmp_exact(&y)? == Ordering::Equal {
                    hit = Some(i);
                    break;
                }
            }
            if let Some(i) = hit {
                if i == 0 {
                    return Ok(OrbitOutcome::Periodic(PostcriticalData::new(self, pts, branches)?));
                }
                return Ok(OrbitOutcome::Preperiodic {
                    preperiod: i,
                    period: pts.len() - i,
                });
            }
            pts.push(y);
            approx.push(ya);
        }
        Ok(OrbitOutcome::Unresolved { steps: max_steps })
    }

    /// Monic integer polynomial `D_f` obtained by composing the branches
    /// symbolically along the orbit of 1 until it first meets 0 or 1.
    pub fn digit_polynomial(&self, max_steps: usize) -> Result<IntPoly> {
        let zero = self.int(0);
        let one = self.int(1);
        let mut x = one.clone();
        let mut sym = IntPoly::from_i64(&[1]);
        let t = IntPoly::from_i64(&[0, 1]);
        for _ in 0..max_steps {
            let j = self.branch_index(&x)?;
            let b = self.branch(j);
            let lt = if b.slope > 0 { t.clone() } else { -&t };
            sym = &(&lt * &sym) + &IntPoly::from_i64(&[b.constant]);
            x = self.apply_branch(j, &x);
            let end = if x.cmp_exact(&zero)? == Ordering::Equal {
                Some(0)
            } else if x.cmp_exact(&one)? == Ordering::Equal {
                Some(1)
            } else {
                None
            };
            if let Some(v) = end {
                let mut d = &sym - &IntPoly::from_i64(&[v]);
                if d.lead().map_or(false, |c| c < &BigInt::zero()) {
                    d = -&d;
                }
                if !FieldElement::generator(&self.ctx).eval_poly(&d).is_zero()? {
                    return Err(Error::Verification(format!("{d} does not vanish at lambda")));
                }
                return Ok(d);
            }
        }
        Err(Error::NotPcpBoundary(max_steps))
    }

    /// Orbit of 0 until it repeats.
    pub fn orbit_of_zero(&self, max_steps: usize) -> Result<Vec<FieldElement>> {
        let mut pts = vec![self.int(0)];
        for _ in 0..max_steps {
            let y = self.evaluate(pts.last().expect("nonempty"))?;
            for p in &pts {
                if p.cmp_exact(&y)? == Ordering::Equal {
                    return Ok(pts);
                }
            }
            pts.push(y);
        }
        Err(Error::NotPcpBoundary(max_steps))
    }
}

/// Result of following the orbit of 1.
#[derive(Clone, Debug)]
pub enum OrbitOutcome {
    Periodic(PostcriticalData),
    Preperiodic { preperiod: usize, period: usize },
    Unresolved { steps: usize },
}

impl OrbitOutcome {
    pub fn periodic(self) -> Result<PostcriticalData> {
        match self {
            OrbitOutcome::Periodic(p) => Ok(p),
            OrbitOutcome::Preperiodic { preperiod, period } => Err(Error::Verification(format!(
                "1 is not periodic (preperiod {preperiod}, period {period})"
            ))),
            OrbitOutcome::Unresolved { steps } => Err(Error::Verification(format!(
                "orbit of 1 did not close within {steps} steps"
            ))),
        }
    }
}

/// The periodic orbit of 1, its itinerary and its sorted labelling.
#[derive(Clone, Debug)]
pub struct PostcriticalData {
    /// `orbit[k] = f^k(1)`.
    pub orbit: Vec<FieldElement>,
    /// Branch index of each `orbit[k]`.
    pub itinerary: Vec<usize>,
    /// Orbit points in increasing order.
    pub sorted: Vec<FieldElement>,
    /// `rank[k]` is the position of `orbit[k]` in `sorted`.
    pub rank: Vec<usize>,
    /// Labels start at 0 when 0 is on the orbit, otherwise at 1.
    pub base: usize,
    pub permutation: Permutation,
}

impl PostcriticalData {
    fn new(_f: &ZigZagMap, orbit: Vec<FieldElement>, itinerary: Vec<usize>) -> Result<Self> {
        let n = orbit.len();
        let mut idx: Vec<usize> = (0..n).collect();
        let mut err = None;
        idx.sort_by(|&a, &b| {
            orbit[a].cmp_exact(&orbit[b]).unwrap_or_else(|e| {
                err = Some(e);
                Ordering::Equal
            })
        });
        if let Some(e) = err {
            return Err(e);
        }
        let sorted: Vec<FieldElement> = idx.iter().map(|&i| orbit[i].clone()).collect();
        let mut rank = vec![0; n];
        for (pos, &i) in idx.iter().enumerate() {
            rank[i] = pos;
        }
        let base = if sorted[0].sign()? == Ordering::Equal { 0 } else { 1 };
        let mut images = vec![0; n];
        for k in 0..n {
            images[rank[k]] = rank[(k + 1) % n] + base;
        }
        let permutation = Permutation::new(base, images)?;
        Ok(PostcriticalData {
            orbit,
            itinerary,
            sorted,
            rank,
            base,
            permutation,
        })
    }

    pub fn period(&self) -> usize {
        self.orbit.len()
    }

    /// Orbit point with the given label.
    pub fn point(&self, label: usize) -> &FieldElement {
        &self.sorted[label - self.base]
    }

    /// Largest label; for labels `0..n` or `1..n` this is `n`.
    pub fn top_label(&self) -> usize {
        self.base + self.sorted.len() - 1
    }
}

pub fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::perron_root;

    fn map(m: u32, sign: Sign, p: &[i64]) -> ZigZagMap {
        let p = IntPoly::from_i64(p);
        make_zigzag(m, sign, &perron_root(&p).unwrap()).unwrap()
    }

    #[test]
    fn golden_tent_digit_polynomial() {
        let f = map(1, Sign::Positive, &[-1, -1, 1]);
        assert_eq!(f.digit_polynomial(100).unwrap(), IntPoly::from_i64(&[1, 0, -2, 1]));
        let pcd = f.orbit_of_one(100).unwrap().periodic().unwrap();
        assert_eq!(pcd.period(), 3);
        let l = f.lambda_elem();
        let linv = f.lambda_inv();
        // f(1) = lambda^-2, f^2(1) = lambda^-1
        assert!(pcd.orbit[1] == linv * linv);
        assert!(pcd.orbit[2] == *linv);
        assert!(pcd.orbit[0] == (l * linv));
    }

    #[test]
    fn negative_four_branch_example() {
        let f = map(3, Sign::Negative, &[1, -3, -3, -3, 1]);
        let f1 = f.evaluate(&f.int(1)).unwrap();
        assert!(f1 == (f.lambda_elem() - &f.int(3)));
        let mut x = f.int(1);
        for _ in 0..4 {
            x = f.evaluate(&x).unwrap();
        }
        assert!(x.is_zero().unwrap());
        assert_eq!(
            f.digit_polynomial(100).unwrap(),
            IntPoly::from_i64(&[1, -3, -3, -3, 1])
        );
        let b: Vec<Branch> = (0..4).map(|j| f.branch(j)).collect();
        assert_eq!(b[0], Branch { slope: -1, constant: 1 });
        assert_eq!(b[1], Branch { slope: 1, constant: -1 });
        assert_eq!(b[2], Branch { slope: -1, constant: 3 });
        assert_eq!(b[3], Branch { slope: 1, constant: -3 });
    }

    #[test]
    fn modality_mismatch() {
        let p = IntPoly::from_i64(&[1, -3, 1]);
        let e = make_zigzag(3, Sign::Positive, &perron_root(&p).unwrap()).unwrap_err();
        assert!(matches!(e, Error::ModalityMismatch { m: 3, .. }));
    }

    #[test]
    fn continuity_at_critical_points() {
        let f = map(3, Sign::Negative, &[1, -3, -3, -3, 1]);
        for i in 1..=3u32 {
            let c = f.critical_point(i);
            let left = f.apply_branch(i as usize - 1, &c);
            let right = f.apply_branch(i as usize, &c);
            assert!(left == right);
            let v = left.as_rational().unwrap();
            assert!(v == rational(0, 1) || v == rational(1, 1));
        }
    }

    #[test]
    fn domain_is_checked() {
        let f = map(2, Sign::Positive, &[1, -3, 1]);
        assert!(f.evaluate(&f.int(2)).is_err());
        assert!(f.evaluate(&f.int(-1)).is_err());
    }

    #[test]
    fn gpa_orbit() {
        // lambda = 1 + sqrt 2: f(1) = c_1, f(c_1) = 1
        let f = map(2, Sign::Positive, &[-1, -2, 1]);
        let pcd = f.orbit_of_one(100).unwrap().periodic().unwrap();
        assert_eq!(pcd.period(), 2);
        assert!(pcd.orbit[1] == f.critical_point(1));
        assert_eq!(f.digit_polynomial(100).unwrap(), IntPoly::from_i64(&[-1, -2, 1]));
    }
}
