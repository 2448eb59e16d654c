//! The bimodal family `f_g` labelled by `1/(2g)` and its Salem growth rates.
//!
//! `D_g(t) = t^(2g+1) - 2t^(2g) - 2t + 1 = (t + 1) d_g(t)`, and `q_g` is the
//! companion polynomial of `d_g`. Unit-circle roots of `d_g` are counted
//! through the real roots of `q_g` in `(-2, 2)`; nothing here is complex.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::classify::{build_zigzag, digit_poly_from_fraction, FractionLabel};
use crate::error::{Error, Result};
use crate::exact::{
    cauchy_bound, companion_polynomial, has_cyclotomic_factor, is_reciprocal, isolate_real_roots, perron_root,
    sturm_count, AlgebraicReal, IntPoly,
};
use crate::galois::{singularity_report, SingularityReport};

fn check_g(g: u32) -> Result<()> {
    if g == 0 {
        return Err(Error::InvalidInput("g must be at least 1".into()));
    }
    Ok(())
}

fn label(g: u32) -> Result<FractionLabel> {
    FractionLabel::new(1, 2 * g as u64)
}

/// `D_g`, checked against the digit polynomial of the map labelled `1/(2g)`.
pub fn family_digit_poly(g: u32) -> Result<IntPoly> {
    check_g(g)?;
    let n = 2 * g as usize;
    let mut c = vec![BigInt::from(0); n + 2];
    c[0] = 1.into();
    c[1] = (-2).into();
    c[n] = (-2).into();
    c[n + 1] = 1.into();
    let d = IntPoly::new(c);
    let from_label = digit_poly_from_fraction(2, label(g)?)?;
    if from_label != d {
        return Err(Error::Verification(format!(
            "D_{g} = {d} but the label 1/{} gives {from_label}",
            2 * g
        )));
    }
    Ok(d)
}

/// `t^(2g) + 1 + 3 sum_{i=1}^{2g-1} (-1)^i t^i`.
pub fn d_poly_displayed(g: u32) -> IntPoly {
    let n = 2 * g as usize;
    let c = (0..=n)
        .map(|i| match i {
            0 => 1,
            i if i == n => 1,
            i if i % 2 == 1 => -3,
            _ => 3,
        })
        .collect::<Vec<i64>>();
    IntPoly::from_i64(&c)
}

/// `D_g / (t + 1)`, checked against the alternating form.
pub fn d_poly(g: u32) -> Result<IntPoly> {
    let big = family_digit_poly(g)?;
    let d = big
        .div_exact(&IntPoly::from_i64(&[1, 1]))
        .ok_or_else(|| Error::Verification(format!("t + 1 does not divide D_{g}")))?;
    if d != d_poly_displayed(g) {
        return Err(Error::Verification(format!("D_{g} / (t + 1) = {d} has the wrong pattern")));
    }
    Ok(d)
}

pub fn companion_q(g: u32) -> Result<IntPoly> {
    companion_polynomial(&d_poly(g)?)
}

/// `q_{g+2} = w q_{g+1} - q_g`.
pub fn check_recurrence(g: u32) -> Result<bool> {
    let w = IntPoly::from_i64(&[0, 1]);
    let lhs = companion_q(g + 2)?;
    let rhs = &(&w * &companion_q(g + 1)?) - &companion_q(g)?;
    Ok(lhs == rhs)
}

fn int(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn roots_between(p: &IntPoly, a: i64, b: i64) -> Result<Vec<AlgebraicReal>> {
    Ok(isolate_real_roots(p)?
        .into_iter()
        .filter(|r| r.cmp_rational(&int(a)) == Ordering::Greater && r.cmp_rational(&int(b)) == Ordering::Less)
        .collect())
}

/// The `g - 1` roots of `q_g` in `(-2, 2)` strictly alternate with the `g`
/// roots of `q_{g+1}` there, starting and ending with a root of `q_{g+1}`.
pub fn interlacing_check(g: u32) -> Result<bool> {
    let a = roots_between(&companion_q(g)?, -2, 2)?;
    let b = roots_between(&companion_q(g + 1)?, -2, 2)?;
    if a.len() + 1 != g as usize || b.len() != g as usize {
        return Err(Error::Verification(format!(
            "q_{g} has {} and q_{} has {} roots in (-2, 2)",
            a.len(),
            g + 1,
            b.len()
        )));
    }
    for i in 0..a.len() {
        if b[i].cmp_exact(&a[i]) != Ordering::Less || a[i].cmp_exact(&b[i + 1]) != Ordering::Less {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SalemReport {
    pub g: u32,
    pub digit_poly: IntPoly,
    pub d: IntPoly,
    pub q: IntPoly,
    pub reciprocal: bool,
    pub recurrence_ok: bool,
    pub q_at_2: i64,
    pub sign_q_at_minus2: i8,
    pub d_at_1: i64,
    pub d_at_minus1: i64,
    pub roots_in_critical_interval: usize,
    pub companion_roots_above_2: usize,
    pub unit_circle_roots: usize,
    pub real_roots_above_1: usize,
    pub real_roots_in_unit_interval: usize,
    pub interlaces_previous: Option<bool>,
    pub cyclotomic_free: bool,
    pub lambda: AlgebraicReal,
    pub lambda_decimal: String,
    pub is_salem: bool,
    /// degree 2, with no conjugate on the unit circle
    pub degenerate: bool,
    pub surface: Option<SingularityReport>,
    pub cross_check_vs_classify: bool,
    pub failures: Vec<String>,
}

fn small(n: &BigInt) -> i64 {
    n.to_i64().unwrap_or(if n.is_negative() { i64::MIN } else { i64::MAX })
}

/// Full report for `g`. Failing components are listed in `failures` and
/// clear `is_salem`; only malformed input is an error.
pub fn salem_report(g: u32) -> Result<SalemReport> {
    check_g(g)?;
    let mut failures = Vec::new();
    let big = family_digit_poly(g);
    let cross = big.is_ok();
    if let Err(e) = &big {
        failures.push(e.to_string());
    }
    let d = d_poly_displayed(g);
    let digit_poly = &d * &IntPoly::from_i64(&[1, 1]);
    let q = companion_polynomial(&d)?;
    let reciprocal = is_reciprocal(&d);
    let recurrence_ok = check_recurrence(g)?;
    let q_at_2 = small(&q.eval(&2.into()));
    let q_m2 = q.eval(&(-2).into());
    let sign_q_at_minus2 = match q_m2.sign() {
        num_bigint::Sign::Minus => -1,
        num_bigint::Sign::NoSign => 0,
        num_bigint::Sign::Plus => 1,
    };
    let d_at_1 = small(&d.eval(&1.into()));
    let d_at_minus1 = small(&d.eval(&(-1).into()));
    let crit = sturm_count(&q, &int(-2), &int(2))?;
    let above = sturm_count(&q, &int(2), &cauchy_bound(&q))?;
    let real_above_1 = sturm_count(&d, &int(1), &cauchy_bound(&d))?;
    let real_unit = sturm_count(&d, &int(0), &int(1))?;
    let interlaces_previous = if g >= 2 {
        Some(interlacing_check(g - 1).unwrap_or_else(|e| {
            failures.push(e.to_string());
            false
        }))
    } else {
        None
    };
    let cyclotomic_free = has_cyclotomic_factor(&d).is_none();
    let lambda = perron_root(&d)?;
    let lambda_decimal = crate::exact::FieldContext::for_root(&lambda)
        .map(|ctx| crate::exact::FieldElement::generator(&ctx).to_decimal(12))?;

    let mut need = |ok: bool, what: String| {
        if !ok {
            failures.push(what);
        }
    };
    need(reciprocal, format!("d_{g} is not reciprocal"));
    need(recurrence_ok, format!("recurrence fails at g = {g}"));
    need(q_at_2 == -1, format!("q_{g}(2) = {q_at_2}"));
    need(
        g < 2 || (if g % 2 == 0 { 1 } else { -1 }) * sign_q_at_minus2 > 0,
        format!("(-1)^g q_{g}(-2) is not positive"),
    );
    need(crit + 1 == g as usize, format!("q_{g} has {crit} roots in (-2, 2)"));
    need(above == 1, format!("q_{g} has {above} roots above 2"));
    need(real_above_1 == 1, format!("d_{g} has {real_above_1} roots above 1"));
    need(real_unit == 1, format!("d_{g} has {real_unit} roots in (0, 1)"));
    need(cyclotomic_free, format!("d_{g} has a cyclotomic factor"));
    need(d_at_minus1 == 6 * g as i64 - 1, format!("d_{g}(-1) = {d_at_minus1}"));
    need(interlaces_previous != Some(false), format!("q_{} and q_{g} do not interlace", g.saturating_sub(1)));

    let surface = match build_zigzag(2, label(g)?).and_then(|lm| singularity_report(&lm.map, &lm.postcritical)) {
        Ok(s) => {
            let want = 2 * g as usize + 2;
            if s.one_prongs != want || s.double_cover_genus != Some(g as usize) || s.trace_field_degree != g as usize
            {
                failures.push(format!("surface census for g = {g} is {s:?}"));
            }
            Some(s)
        }
        Err(e) => {
            failures.push(format!("galois: {e}"));
            None
        }
    };

    Ok(SalemReport {
        g,
        digit_poly,
        d,
        q,
        reciprocal,
        recurrence_ok,
        q_at_2,
        sign_q_at_minus2,
        d_at_1,
        d_at_minus1,
        roots_in_critical_interval: crit,
        companion_roots_above_2: above,
        unit_circle_roots: 2 * crit,
        real_roots_above_1: real_above_1,
        real_roots_in_unit_interval: real_unit,
        interlaces_previous,
        cyclotomic_free,
        lambda,
        lambda_decimal,
        is_salem: failures.is_empty(),
        degenerate: g == 1,
        surface,
        cross_check_vs_classify: cross,
        failures,
    })
}

/// One row per report: `g,lambda,polynomial,is_salem,genus`.
pub fn salem_csv(reports: &[SalemReport]) -> String {
    let mut s = String::from("g,lambda,polynomial,is_salem,genus\n");
    for r in reports {
        let genus = r
            .surface
            .as_ref()
            .and_then(|x| x.double_cover_genus)
            .map(|x| x.to_string())
            .unwrap_or_default();
        s.push_str(&format!("{},{},{},{},{}\n", r.g, r.lambda_decimal, r.d, r.is_salem, genus));
    }
    s
}
