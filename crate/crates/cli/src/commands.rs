use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use zzpa::classify::{build_zigzag, digit_poly_from_fraction, FractionLabel};
use zzpa::exact::{perron_root, AlgebraicReal, FieldContext, IntPoly};
use zzpa::galois::{is_pA_type, limit_set_exact, singularity_report, LimitSetOutcome};
use zzpa::render::{render_limit_set_svg, render_zigzag_svg, FigureSpec};
use zzpa::salem::{salem_csv, salem_report, SalemReport};
use zzpa::zigzag::{make_zigzag, Sign, ZigZagMap};
use zzpa::{Error, Result};

use crate::report::{Exact, Input, Lambda, LimitSetJson, Orbit, Report, Verdict, DECIMALS};

/// A command's output and whether every check it ran passed.
pub struct Outcome {
    pub stdout: String,
    pub ok: bool,
}

struct Clock {
    on: bool,
    start: Instant,
    laps: BTreeMap<String, f64>,
}

impl Clock {
    fn new(on: bool) -> Clock {
        Clock {
            on,
            start: Instant::now(),
            laps: BTreeMap::new(),
        }
    }

    fn lap(&mut self, name: &str) {
        if self.on {
            let ms = self.start.elapsed().as_secs_f64() * 1e3;
            self.laps.insert(name.to_string(), (ms * 1e3).round() / 1e3);
            self.start = Instant::now();
        }
    }

    fn into_map(self) -> Option<BTreeMap<String, f64>> {
        self.on.then_some(self.laps)
    }
}

pub fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

fn write_file(path: &str, body: &str) -> Result<()> {
    std::fs::write(path, body).map_err(|e| Error::InvalidInput(format!("cannot write {path}: {e}")))
}

pub fn construct(m: u32, q: FractionLabel, svg: Option<&str>, timings: bool) -> Result<Outcome> {
    let mut clock = Clock::new(timings);
    let lm = build_zigzag(m, q)?;
    clock.lap("build");
    let mut r = Report::for_map("construct", &lm);
    r.closed_form_matches = Some(true);
    let v = is_pA_type(&lm.map)?;
    clock.lap("verdict");
    r.verdict = Some(Verdict::of(&v));
    r.limit_set = Some(match &v.limit_set {
        Some(ls) => LimitSetJson::of(ls),
        None => LimitSetJson::not_rectangular(&v.reason),
    });
    let mut ok = v.is_pa && v.limit_set.as_ref().map_or(false, |ls| ls.checks.all());
    if v.is_pa {
        let s = singularity_report(&lm.map, &lm.postcritical)?;
        ok &= s.euler_sum == 4;
        r.singularities = Some(s);
        clock.lap("singularities");
    }
    if let Some(path) = svg {
        write_file(path, &render_zigzag_svg(&lm.map, &lm.postcritical, &FigureSpec::default()))?;
    }
    r.timings_ms = clock.into_map();
    Ok(Outcome { stdout: to_json(&r), ok })
}

pub fn digit_poly(m: u32, q: FractionLabel) -> Result<Outcome> {
    let closed = digit_poly_from_fraction(m, q)?;
    // build_zigzag rejects a mismatch with the orbit-composed polynomial
    let lm = build_zigzag(m, q)?;
    let mut r = Report::for_map("digit-poly", &lm);
    let ok = lm.digit_poly == closed;
    r.closed_form_matches = Some(ok);
    r.orbit = None;
    Ok(Outcome { stdout: to_json(&r), ok })
}

fn pa_report(mut r: Report, f: &ZigZagMap, max_steps: usize) -> Result<Outcome> {
    let pcd = f.orbit_of_one(max_steps)?.periodic()?;
    r.digit_poly = Some(f.digit_polynomial(max_steps)?);
    r.lambda = Some(Lambda::of(f));
    if r.orbit.is_none() {
        r.orbit = Some(Orbit::of(&pcd, None));
    }
    let v = is_pA_type(f)?;
    r.verdict = Some(Verdict::of(&v));
    r.limit_set = Some(match &v.limit_set {
        Some(ls) => LimitSetJson::of(ls),
        None => LimitSetJson::not_rectangular(&v.reason),
    });
    if v.is_pa {
        r.singularities = Some(singularity_report(f, &pcd)?);
    }
    Ok(Outcome {
        stdout: to_json(&r),
        ok: true,
    })
}

pub fn check_pa_label(m: u32, q: FractionLabel, max_steps: usize) -> Result<Outcome> {
    let lm = build_zigzag(m, q)?;
    pa_report(Report::for_map("check-pa", &lm), &lm.map, max_steps)
}

pub fn check_pa_poly(poly: &IntPoly, m: u32, sign: Sign, max_steps: usize) -> Result<Outcome> {
    let lambda = perron_root(poly)?;
    let f = make_zigzag(m, sign, &lambda)?;
    let mut r = Report::new("check-pa");
    r.input = Some(Input {
        m: Some(m),
        fraction: None,
        sign: Some(sign.as_i8()),
        poly: Some(poly.clone()),
        g: None,
    });
    pa_report(r, &f, max_steps)
}

pub fn limit_set(m: u32, q: FractionLabel, svg: Option<&str>) -> Result<Outcome> {
    let lm = build_zigzag(m, q)?;
    let mut r = Report::for_map("limit-set", &lm);
    let out = limit_set_exact(&lm.map)?;
    let ok = match &out {
        LimitSetOutcome::Rectangular(ls) => {
            r.limit_set = Some(LimitSetJson::of(ls));
            ls.checks.all()
        }
        LimitSetOutcome::NotRectangular { reason, .. } => {
            r.limit_set = Some(LimitSetJson::not_rectangular(reason));
            false
        }
    };
    if let Some(path) = svg {
        write_file(path, &render_limit_set_svg(&out, &FigureSpec::default())?)?;
    }
    Ok(Outcome { stdout: to_json(&r), ok })
}

fn salem_one(g: u32) -> Result<Report> {
    let mut r = Report::new("salem");
    r.input = Some(Input {
        m: Some(2),
        fraction: Some(format!("1/{}", 2 * g)),
        sign: None,
        poly: None,
        g: Some(g),
    });
    r.salem = Some(salem_report(g)?);
    Ok(r)
}

pub fn salem(lo: u32, hi: u32, single: bool, csv: bool) -> Result<Outcome> {
    if lo == 0 || lo > hi {
        return Err(Error::InvalidInput(format!("bad range {lo}..{hi}")));
    }
    let reports = (lo..=hi).into_par_iter().map(salem_one).collect::<Result<Vec<_>>>()?;
    let ok = reports.iter().all(|r| r.salem.as_ref().map_or(false, |s| s.is_salem));
    let stdout = if csv {
        let s: Vec<SalemReport> = reports.into_iter().filter_map(|r| r.salem).collect();
        salem_csv(&s)
    } else if single {
        to_json(&reports[0])
    } else {
        to_json(&reports)
    };
    Ok(Outcome { stdout, ok })
}

#[derive(Serialize)]
struct ExperimentSummary {
    m: u32,
    bmax: u64,
    maps: usize,
    adjacent_pairs: usize,
    order_agreements: usize,
}

/// CSV of `lambda` against the label, in increasing label order; the
/// summary line goes to stderr.
pub fn experiment(m: u32, bmax: u64) -> Result<(Outcome, String)> {
    if bmax < 2 {
        return Err(Error::InvalidInput("bmax must be at least 2".into()));
    }
    let mut labels = FractionLabel::all_up_to(bmax);
    labels.sort_by(|a, b| a.cmp_value(b));
    let rows = labels
        .par_iter()
        .map(|&q| {
            let lm = build_zigzag(m, q)?;
            Ok((q, lm.map.lambda().clone(), lm.map.lambda_elem().to_decimal(DECIMALS), lm.digit_poly))
        })
        .collect::<Result<Vec<(FractionLabel, AlgebraicReal, String, IntPoly)>>>()?;
    let mut csv = String::from("m,q,q_decimal,lambda,digit_poly\n");
    for (q, _, dec, d) in &rows {
        let coeffs: Vec<String> = d.coeffs().iter().map(|c| c.to_string()).collect();
        csv.push_str(&format!(
            "{m},{q},{},{dec},\"[{}]\"\n",
            q.to_decimal(DECIMALS),
            coeffs.join(",")
        ));
    }
    let agree = rows
        .windows(2)
        .filter(|w| w[0].1.cmp_exact(&w[1].1) == Ordering::Less)
        .count();
    let summary = ExperimentSummary {
        m,
        bmax,
        maps: rows.len(),
        adjacent_pairs: rows.len().saturating_sub(1),
        order_agreements: agree,
    };
    let line = serde_json::to_string(&summary).expect("summary serializes");
    Ok((Outcome { stdout: csv, ok: true }, line))
}

fn recheck_exact(ctx: &std::sync::Arc<FieldContext>, e: &Exact) -> Result<bool> {
    let x = e.to_element(ctx)?;
    Ok(x.to_decimal(DECIMALS) == e.decimal)
}

/// Parses a saved report, rebuilds the field from its `lambda` block,
/// re-checks every exact value against its decimal, then recomputes the
/// report from its input and compares.
pub fn verify(text: &str) -> Result<Outcome> {
    let parse_err = |e: serde_json::Error| Error::InvalidInput(format!("not a report: {e}"));
    let value: serde_json::Value = serde_json::from_str(text).map_err(parse_err)?;
    let reports: Vec<Report> = if value.is_array() {
        serde_json::from_value(value).map_err(parse_err)?
    } else {
        vec![serde_json::from_value(value).map_err(parse_err)?]
    };
    let mut problems = Vec::new();
    for (i, rep) in reports.iter().enumerate() {
        if rep.schema_version != crate::report::SCHEMA_VERSION {
            problems.push(format!("report {i}: schema version {}", rep.schema_version));
            continue;
        }
        if let Some(l) = &rep.lambda {
            let lo = zzpa::exact::serial::parse_rat(&l.interval[0]);
            let hi = zzpa::exact::serial::parse_rat(&l.interval[1]);
            let (Some(lo), Some(hi)) = (lo, hi) else {
                problems.push(format!("report {i}: bad lambda interval"));
                continue;
            };
            let root = AlgebraicReal::new(l.minpoly.clone(), lo, hi)?;
            let ctx = FieldContext::new(&l.minpoly, &root)?;
            let mut exacts: Vec<&Exact> = Vec::new();
            if let Some(o) = &rep.orbit {
                exacts.extend(&o.points);
            }
            if let Some(v) = &rep.verdict {
                exacts.push(&v.witness);
            }
            if let Some(ls) = &rep.limit_set {
                for r in &ls.rects {
                    exacts.extend([&r.x_lo, &r.x_hi, &r.y_lo, &r.y_hi]);
                }
                for p in &ls.lifts {
                    exacts.extend([&p.x, &p.y]);
                }
            }
            for e in exacts {
                if !recheck_exact(&ctx, e)? {
                    problems.push(format!("report {i}: decimal {} does not match its exact value", e.decimal));
                }
            }
        }
        let fresh = recompute(rep)?;
        let mut want = rep.clone();
        want.timings_ms = None;
        if fresh != want {
            problems.push(format!("report {i}: recomputed {} report differs", rep.command));
        }
    }
    #[derive(Serialize)]
    struct VerifyOut {
        reports: usize,
        ok: bool,
        problems: Vec<String>,
    }
    let ok = problems.is_empty();
    Ok(Outcome {
        stdout: to_json(&VerifyOut {
            reports: reports.len(),
            ok,
            problems,
        }),
        ok,
    })
}

fn recompute(rep: &Report) -> Result<Report> {
    let input = rep
        .input
        .as_ref()
        .ok_or_else(|| Error::InvalidInput("report has no input".into()))?;
    let label = || -> Result<(u32, FractionLabel)> {
        let m = input.m.ok_or_else(|| Error::InvalidInput("input has no m".into()))?;
        let q = input
            .fraction
            .as_deref()
            .ok_or_else(|| Error::InvalidInput("input has no fraction".into()))?
            .parse()?;
        Ok((m, q))
    };
    let out = match rep.command.as_str() {
        "construct" => {
            let (m, q) = label()?;
            construct(m, q, None, false)?
        }
        "digit-poly" => {
            let (m, q) = label()?;
            digit_poly(m, q)?
        }
        "limit-set" => {
            let (m, q) = label()?;
            limit_set(m, q, None)?
        }
        "check-pa" => match (&input.poly, input.fraction.as_deref()) {
            (Some(p), _) => {
                let sign = if input.sign == Some(-1) { Sign::Negative } else { Sign::Positive };
                let m = input.m.ok_or_else(|| Error::InvalidInput("input has no m".into()))?;
                check_pa_poly(p, m, sign, zzpa::zigzag::DEFAULT_MAX_STEPS)?
            }
            (None, _) => {
                let (m, q) = label()?;
                check_pa_label(m, q, zzpa::zigzag::DEFAULT_MAX_STEPS)?
            }
        },
        "salem" => {
            let g = input.g.ok_or_else(|| Error::InvalidInput("input has no g".into()))?;
            return salem_one(g);
        }
        other => return Err(Error::InvalidInput(format!("cannot verify command {other:?}"))),
    };
    serde_json::from_str(&out.stdout).map_err(|e| Error::Verification(e.to_string()))
}
