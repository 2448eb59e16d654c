//! JSON report shapes. Polynomials are ascending coefficient arrays; every
//! decimal sits next to its exact form.

use serde::{Deserialize, Serialize};
use zzpa::classify::LabelledMap;
use zzpa::exact::serial::{parse_rat, rat_to_string};
use zzpa::exact::{FieldContext, FieldElement, IntPoly, RatPoly};
use zzpa::galois::{Alignment, LimitSet, LimitSetChecks, PaVerdict, SingularityReport};
use zzpa::salem::SalemReport;
use zzpa::zigzag::{PostcriticalData, ZigZagMap};
use zzpa::{Error, Result};

pub const SCHEMA_VERSION: &str = "1";
pub const DECIMALS: u32 = 12;

/// Element of `Q(lambda)`: rational coefficients in powers of `lambda`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Exact {
    pub coeffs: Vec<String>,
    pub decimal: String,
}

impl Exact {
    pub fn of(x: &FieldElement) -> Exact {
        Exact {
            coeffs: x.repr().coeffs().iter().map(rat_to_string).collect(),
            decimal: x.to_decimal(DECIMALS),
        }
    }

    pub fn to_element(&self, ctx: &std::sync::Arc<FieldContext>) -> Result<FieldElement> {
        let c = self
            .coeffs
            .iter()
            .map(|s| parse_rat(s).ok_or_else(|| Error::InvalidInput(format!("bad rational {s:?}"))))
            .collect::<Result<Vec<_>>>()?;
        Ok(FieldElement::from_poly(ctx, &RatPoly::new(c)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lambda {
    /// defining polynomial of the field, ascending
    pub minpoly: IntPoly,
    /// isolating interval `[lo, hi]` as rationals
    pub interval: [String; 2],
    pub decimal: String,
}

impl Lambda {
    pub fn of(f: &ZigZagMap) -> Lambda {
        let ctx = f.context();
        let r = ctx.root();
        Lambda {
            minpoly: ctx.minpoly().clone(),
            interval: [rat_to_string(r.lo()), rat_to_string(r.hi())],
            decimal: f.lambda_elem().to_decimal(DECIMALS),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Input {
    pub m: Option<u32>,
    pub fraction: Option<String>,
    pub sign: Option<i8>,
    pub poly: Option<IntPoly>,
    pub g: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Orbit {
    pub period: usize,
    /// label of the smallest orbit point
    pub base: usize,
    /// `permutation[i]` is the image of label `base + i`
    pub permutation: Vec<usize>,
    pub cycle: String,
    /// `f^k(1)` for `k = 0..period`
    pub points: Vec<Exact>,
    /// taxonomy tag of each label, `base` first
    pub tags: Option<Vec<String>>,
}

impl Orbit {
    pub fn of(pcd: &PostcriticalData, tags: Option<&[zzpa::classify::Tag]>) -> Orbit {
        Orbit {
            period: pcd.period(),
            base: pcd.base,
            permutation: pcd.permutation.images().to_vec(),
            cycle: pcd.permutation.cycle_string(),
            points: pcd.orbit.iter().map(Exact::of).collect(),
            tags: tags.map(|t| t.iter().map(|x| x.to_string()).collect()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub is_pa: bool,
    pub rectangular: bool,
    pub reason: String,
    /// `D_f(1/lambda)`
    pub witness: Exact,
}

impl Verdict {
    pub fn of(v: &PaVerdict) -> Verdict {
        Verdict {
            is_pa: v.is_pa,
            rectangular: v.rectangular,
            reason: v.reason.clone(),
            witness: Exact::of(&v.witness),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RectJson {
    pub x_lo: Exact,
    pub x_hi: Exact,
    pub y_lo: Exact,
    pub y_hi: Exact,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointJson {
    pub x: Exact,
    pub y: Exact,
    pub centered: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LimitSetJson {
    pub rectangular: bool,
    pub reason: Option<String>,
    pub rects: Vec<RectJson>,
    pub alignments: Vec<Alignment>,
    pub lifts: Vec<PointJson>,
    pub transition: Option<Vec<Vec<i64>>>,
    pub checks: Option<LimitSetChecks>,
    pub total_area: Option<Exact>,
}

impl LimitSetJson {
    pub fn of(ls: &LimitSet) -> LimitSetJson {
        LimitSetJson {
            rectangular: true,
            reason: None,
            rects: ls
                .rects
                .iter()
                .map(|r| RectJson {
                    x_lo: Exact::of(&r.x_lo),
                    x_hi: Exact::of(&r.x_hi),
                    y_lo: Exact::of(&r.y_lo),
                    y_hi: Exact::of(&r.y_hi),
                })
                .collect(),
            alignments: ls.alignments.clone(),
            lifts: ls
                .lifts
                .iter()
                .map(|l| PointJson {
                    x: Exact::of(&l.x),
                    y: Exact::of(&l.y),
                    centered: l.centered,
                })
                .collect(),
            transition: Some(ls.transition.rows().to_vec()),
            checks: Some(ls.checks),
            total_area: Some(Exact::of(&ls.total_area())),
        }
    }

    pub fn not_rectangular(reason: &str) -> LimitSetJson {
        LimitSetJson {
            rectangular: false,
            reason: Some(reason.to_string()),
            rects: Vec::new(),
            alignments: Vec::new(),
            lifts: Vec::new(),
            transition: None,
            checks: None,
            total_area: None,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: String,
    pub command: String,
    pub input: Option<Input>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub digit_poly: Option<IntPoly>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub closed_form_matches: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<Lambda>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub orbit: Option<Orbit>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<Verdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub limit_set: Option<LimitSetJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub singularities: Option<SingularityReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub salem: Option<SalemReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<std::collections::BTreeMap<String, f64>>,
}

impl Report {
    pub fn new(command: &str) -> Report {
        Report {
            schema_version: SCHEMA_VERSION.to_string(),
            command: command.to_string(),
            ..Default::default()
        }
    }

    pub fn for_map(command: &str, lm: &LabelledMap) -> Report {
        let mut r = Report::new(command);
        r.input = Some(Input {
            m: Some(lm.m),
            fraction: Some(lm.fraction.to_string()),
            sign: Some(lm.map.sign().as_i8()),
            poly: None,
            g: None,
        });
        r.digit_poly = Some(lm.digit_poly.clone());
        r.lambda = Some(Lambda::of(&lm.map));
        r.orbit = Some(Orbit::of(&lm.postcritical, Some(&lm.tags)));
        r
    }
}
