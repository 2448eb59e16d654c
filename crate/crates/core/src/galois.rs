//! Galois lifts of zig-zags to the plane and their limit sets.
//!
//! The lift acts on `I x R` by `G_j(x, y) = (f_j(x), s_j y / lambda + k_j)`:
//! the vertical maps use the same signs and integer constants as the
//! branches, with `lambda` replaced by its inverse.
//!
//! Over the weak postcritical partition the fibers of the limit set solve a
//! graph-directed system `K_i = U_{j -> i} g_j(K_j)`. The exact routine finds
//! the convex hulls of the `K_i` (numerically first, to learn which branch
//! images realise each endpoint, then exactly in `Q(lambda)`), verifies the
//! hull system, and decides whether the images cover each hull; if they do,
//! the hulls are the fibers and the limit set is a union of rectangles.

use std::cmp::Ordering;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{companion_polynomial, FieldContext, FieldElement, IntPoly};
use crate::markov::{markov_partition, postcritical_set, transition_matrix, IntMatrix, MarkovPartition, PartitionKind};
use crate::zigzag::{PostcriticalData, ZigZagMap, DEFAULT_MAX_STEPS};

/// Per-fiber fragment cap for the numeric iteration.
pub const FRAGMENT_CAP: usize = 64;

#[derive(Clone, Debug)]
pub struct GaloisLift {
    map: ZigZagMap,
    lam_inv: f64,
}

impl GaloisLift {
    pub fn new(f: &ZigZagMap) -> GaloisLift {
        GaloisLift {
            map: f.clone(),
            lam_inv: 1.0 / f.lambda().to_f64(),
        }
    }

    pub fn map(&self) -> &ZigZagMap {
        &self.map
    }

    /// Vertical part of branch `j`.
    pub fn vertical(&self, j: usize, y: &FieldElement) -> FieldElement {
        let b = self.map.branch(j);
        let v = self.map.lambda_inv() * y;
        let v = if b.slope > 0 { v } else { -&v };
        &v + &self.map.int(b.constant)
    }

    pub fn vertical_f64(&self, j: usize, y: f64) -> f64 {
        let b = self.map.branch(j);
        b.slope as f64 * y * self.lam_inv + b.constant as f64
    }

    pub fn apply(&self, x: &FieldElement, y: &FieldElement) -> Result<(FieldElement, FieldElement)> {
        let j = self.map.branch_index(x)?;
        Ok((self.map.evaluate(x)?, self.vertical(j, y)))
    }
}

/// `y` with `(x, y)` periodic under the lift, for `x` periodic under `f`.
pub fn periodic_lift(f: &ZigZagMap, x: &FieldElement) -> Result<FieldElement> {
    // y -> a y + b along the orbit
    let mut a = f.int(1);
    let mut b = f.int(0);
    let mut cur = x.clone();
    for _ in 0..DEFAULT_MAX_STEPS {
        let j = f.branch_index(&cur)?;
        let br = f.branch(j);
        let s = if br.slope > 0 { f.lambda_inv().clone() } else { -f.lambda_inv() };
        a = &s * &a;
        b = &(&s * &b) + &f.int(br.constant);
        cur = f.evaluate(&cur)?;
        if cur.cmp_exact(x)? == Ordering::Equal {
            let denom = &f.int(1) - &a;
            return Ok(&b * &denom.inverse()?);
        }
    }
    Err(Error::Verification("point is not periodic".into()))
}

/// Periodic lifts `(x, y)` of every point on the orbit of 1.
pub fn periodic_lifts(f: &ZigZagMap, pcd: &PostcriticalData) -> Result<Vec<(FieldElement, FieldElement)>> {
    pcd.orbit
        .iter()
        .map(|x| Ok((x.clone(), periodic_lift(f, x)?)))
        .collect()
}

/// Cells of the weak partition with their branch and the transition edges.
struct CellGraph {
    part: MarkovPartition,
    matrix: IntMatrix,
    branch: Vec<usize>,
    /// `into[i]` lists the cells `j` with `f(P_j)` covering `P_i`.
    into: Vec<Vec<usize>>,
}

fn cell_graph(f: &ZigZagMap, pcd: &PostcriticalData) -> Result<CellGraph> {
    let part = markov_partition(f, pcd, PartitionKind::Weak)?;
    let matrix = transition_matrix(f, &part)?;
    let n = part.cells();
    let mut branch = Vec::with_capacity(n);
    for j in 0..n {
        branch.push(f.branch_index(&part.points[j])?);
    }
    let into = (0..n)
        .map(|i| (0..n).filter(|&j| matrix.get(i, j) > 0).collect())
        .collect();
    Ok(CellGraph {
        part,
        matrix,
        branch,
        into,
    })
}

/// Outcome of the numeric fiber iteration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NumericVerdict {
    /// every fiber converged to a single interval
    Rectangular,
    /// some fiber stayed a union of several intervals
    MultiInterval,
    /// a fiber exceeded the fragment cap
    Fragmented,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NumericLimitSet {
    pub verdict: NumericVerdict,
    pub iterations: usize,
    /// x-range of each cell
    pub cells: Vec<(f64, f64)>,
    /// fiber over each cell as a sorted union of intervals
    pub fibers: Vec<Vec<(f64, f64)>>,
}

fn merge(mut v: Vec<(f64, f64)>, eps: f64) -> Vec<(f64, f64)> {
    v.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut out: Vec<(f64, f64)> = Vec::new();
    for (a, b) in v {
        if let Some(last) = out.last_mut() {
            if a <= last.1 + eps {
                last.1 = last.1.max(b);
                continue;
            }
        }
        out.push((a, b));
    }
    out
}

fn fiber_distance(a: &[(f64, f64)], b: &[(f64, f64)]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    a.iter()
        .zip(b)
        .map(|(x, y)| (x.0 - y.0).abs().max((x.1 - y.1).abs()))
        .fold(0.0, f64::max)
}

struct FiberIteration {
    graph: CellGraph,
    lift: GaloisLift,
    cells: Vec<(f64, f64)>,
    fibers: Vec<Vec<(f64, f64)>>,
    eps: f64,
}

impl FiberIteration {
    fn new(f: &ZigZagMap, eps: f64) -> Result<FiberIteration> {
        let pcd = f.orbit_of_one(DEFAULT_MAX_STEPS)?.periodic()?;
        let graph = cell_graph(f, &pcd)?;
        let n = graph.part.cells();
        let lam = f.lambda().to_f64();
        let kmax = (0..=f.modality() as usize)
            .map(|j| f.branch(j).constant.abs())
            .max()
            .unwrap_or(0) as f64;
        // |y| <= r is absorbing: r / lambda + kmax <= r
        let r = kmax / (1.0 - 1.0 / lam) + 1.0;
        let cells = (0..n)
            .map(|i| (graph.part.points[i].to_f64(), graph.part.points[i + 1].to_f64()))
            .collect();
        Ok(FiberIteration {
            graph,
            lift: GaloisLift::new(f),
            cells,
            fibers: vec![vec![(-r, r)]; n],
            eps,
        })
    }

    /// One step; `None` when a fiber exceeds the fragment cap.
    fn step(&self) -> Option<Vec<Vec<(f64, f64)>>> {
        let g = &self.graph;
        let mut next = Vec::with_capacity(self.fibers.len());
        for i in 0..self.fibers.len() {
            let mut pieces = Vec::new();
            for &j in &g.into[i] {
                for &(a, b) in &self.fibers[j] {
                    let ya = self.lift.vertical_f64(g.branch[j], a);
                    let yb = self.lift.vertical_f64(g.branch[j], b);
                    pieces.push((ya.min(yb), ya.max(yb)));
                }
            }
            let merged = merge(pieces, self.eps);
            if merged.len() > FRAGMENT_CAP {
                return None;
            }
            next.push(merged);
        }
        Some(next)
    }

    fn snapshot(self, verdict: NumericVerdict, iterations: usize) -> NumericLimitSet {
        NumericLimitSet {
            verdict,
            iterations,
            cells: self.cells,
            fibers: self.fibers,
        }
    }
}

fn single_verdict(fibers: &[Vec<(f64, f64)>]) -> NumericVerdict {
    if fibers.iter().all(|v| v.len() == 1) {
        NumericVerdict::Rectangular
    } else {
        NumericVerdict::MultiInterval
    }
}

/// Fibers after exactly `steps` iterations of the absorbing box.
pub fn iterate_fibers(f: &ZigZagMap, steps: usize) -> Result<NumericLimitSet> {
    let mut it = FiberIteration::new(f, 1e-12)?;
    for k in 0..steps {
        match it.step() {
            Some(next) => it.fibers = next,
            None => return Ok(it.snapshot(NumericVerdict::Fragmented, k + 1)),
        }
    }
    let v = single_verdict(&it.fibers);
    Ok(it.snapshot(v, steps))
}

/// Iterates the absorbing box under the lift, tracking each fiber as a
/// union of intervals, until successive iterates agree within `tol`.
pub fn limit_set_numeric(f: &ZigZagMap, tol: f64) -> Result<NumericLimitSet> {
    if !(tol > 0.0) {
        return Err(Error::InvalidInput(format!("tolerance must be positive, got {tol}")));
    }
    let mut it = FiberIteration::new(f, (tol * 1e-3).max(1e-13))?;
    let max_iter = 20_000;
    for k in 1..=max_iter {
        let Some(next) = it.step() else {
            return Ok(it.snapshot(NumericVerdict::Fragmented, k));
        };
        let d = it
            .fibers
            .iter()
            .zip(&next)
            .map(|(a, b)| fiber_distance(a, b))
            .fold(0.0, f64::max);
        it.fibers = next;
        if d < tol {
            let v = single_verdict(&it.fibers);
            return Ok(it.snapshot(v, k));
        }
    }
    Err(Error::Undecided(max_iter))
}

/// Axis-parallel rectangle with exact corners.
#[derive(Clone, Debug)]
pub struct Rect {
    pub x_lo: FieldElement,
    pub x_hi: FieldElement,
    pub y_lo: FieldElement,
    pub y_hi: FieldElement,
}

impl Rect {
    pub fn width(&self) -> FieldElement {
        &self.x_hi - &self.x_lo
    }

    pub fn height(&self) -> FieldElement {
        &self.y_hi - &self.y_lo
    }

    pub fn area(&self) -> FieldElement {
        &self.width() * &self.height()
    }
}

/// How two neighbouring rectangles meet.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Alignment {
    Lower,
    Upper,
    Both,
    Neither,
}

/// Vertical segment of the boundary lying on a cut line.
#[derive(Clone, Debug)]
pub struct BoundaryComponent {
    pub x: FieldElement,
    pub y_lo: FieldElement,
    pub y_hi: FieldElement,
}

/// Periodic point of the lift over a postcritical point.
#[derive(Clone, Debug)]
pub struct PcLift {
    pub x: FieldElement,
    pub y: FieldElement,
    /// whether `y` is the midpoint of the boundary component over `x`
    pub centered: bool,
}

/// Result of each exact check on a rectangular limit set.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LimitSetChecks {
    /// branch images of the rectangles stay inside the union
    pub invariant: bool,
    /// branch images cover each fiber with zero-area overlaps
    pub tiles: bool,
    /// total area of the images equals the area of the union
    pub area_preserved: bool,
    /// heights form a right Perron vector of the transition matrix
    pub perron_heights: bool,
    /// neighbours share a top or a bottom edge
    pub aligned: bool,
    /// periodic lifts sit at the centers of their boundary components
    pub centered: bool,
}

impl LimitSetChecks {
    pub fn all(&self) -> bool {
        self.invariant
            && self.tiles
            && self.area_preserved
            && self.perron_heights
            && self.aligned
            && self.centered
    }
}

#[derive(Clone, Debug)]
pub struct LimitSet {
    pub context: Arc<FieldContext>,
    pub rects: Vec<Rect>,
    /// alignment of `rects[i]` and `rects[i + 1]`
    pub alignments: Vec<Alignment>,
    pub components: Vec<BoundaryComponent>,
    pub lifts: Vec<PcLift>,
    pub transition: IntMatrix,
    pub checks: LimitSetChecks,
}

impl LimitSet {
    pub fn total_area(&self) -> FieldElement {
        let mut s = FieldElement::zero(&self.context);
        for r in &self.rects {
            s = &s + &r.area();
        }
        s
    }
}

#[derive(Clone, Debug)]
pub enum LimitSetOutcome {
    Rectangular(LimitSet),
    NotRectangular {
        /// cell whose fiber fails, if the failure is local
        cell: Option<usize>,
        reason: String,
    },
}

impl LimitSetOutcome {
    pub fn is_rectangular(&self) -> bool {
        matches!(self, LimitSetOutcome::Rectangular(_))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum End {
    Lo,
    Hi,
}

/// Exact hull endpoints: `var(2 i) = lo_i`, `var(2 i + 1) = hi_i`, each
/// defined as the image of one endpoint of one preimage cell.
fn solve_hulls(
    f: &ZigZagMap,
    g: &CellGraph,
    choice: &[(usize, End)],
) -> Result<Vec<FieldElement>> {
    let nv = choice.len();
    let linv = f.lambda_inv();
    // var v = s * linv * var(w) + k
    let eq: Vec<(usize, FieldElement, FieldElement)> = (0..nv)
        .map(|v| {
            let (j, end) = choice[v];
            let br = f.branch(g.branch[j]);
            let w = 2 * j + if end == End::Lo { 0 } else { 1 };
            let s = if br.slope > 0 { linv.clone() } else { -linv };
            (w, s, f.int(br.constant))
        })
        .collect();
    let mut val: Vec<Option<FieldElement>> = vec![None; nv];
    for start in 0..nv {
        if val[start].is_some() {
            continue;
        }
        let mut path = Vec::new();
        let mut pos = vec![usize::MAX; nv];
        let mut v = start;
        while val[v].is_none() && pos[v] == usize::MAX {
            pos[v] = path.len();
            path.push(v);
            v = eq[v].0;
        }
        if val[v].is_none() {
            // cycle path[pos[v]..]; compose v -> a v + b around it
            let cyc = &path[pos[v]..];
            let mut a = f.int(1);
            let mut b = f.int(0);
            for &u in cyc.iter().rev() {
                // value(u) = s_u value(next) + k_u
                a = &eq[u].1 * &a;
                b = &(&eq[u].1 * &b) + &eq[u].2;
            }
            let x = &b * &(&f.int(1) - &a).inverse()?;
            val[v] = Some(x);
        }
        for &u in path.iter().rev() {
            if val[u].is_none() {
                let w = eq[u].0;
                let next = val[w].clone().expect("resolved");
                val[u] = Some(&(&eq[u].1 * &next) + &eq[u].2);
            }
        }
    }
    Ok(val.into_iter().map(|x| x.expect("resolved")).collect())
}

/// Numeric hull iteration returning which image realises each endpoint.
fn hull_pattern(f: &ZigZagMap, g: &CellGraph) -> Vec<(usize, End)> {
    let lift = GaloisLift::new(f);
    let n = g.part.cells();
    let mut lo = vec![-100.0f64; n];
    let mut hi = vec![100.0f64; n];
    let mut choice = vec![(0usize, End::Lo); 2 * n];
    let lam = f.lambda().to_f64();
    let iters = (60.0 / lam.log10()).ceil() as usize + 50;
    for _ in 0..iters {
        let mut nlo = vec![f64::INFINITY; n];
        let mut nhi = vec![f64::NEG_INFINITY; n];
        for i in 0..n {
            for &j in &g.into[i] {
                let a = lift.vertical_f64(g.branch[j], lo[j]);
                let b = lift.vertical_f64(g.branch[j], hi[j]);
                let (mn, mn_end, mx, mx_end) = if a <= b {
                    (a, End::Lo, b, End::Hi)
                } else {
                    (b, End::Hi, a, End::Lo)
                };
                if mn < nlo[i] {
                    nlo[i] = mn;
                    choice[2 * i] = (j, mn_end);
                }
                if mx > nhi[i] {
                    nhi[i] = mx;
                    choice[2 * i + 1] = (j, mx_end);
                }
            }
        }
        lo = nlo;
        hi = nhi;
    }
    choice
}

fn interval_image(
    lift: &GaloisLift,
    branch: usize,
    lo: &FieldElement,
    hi: &FieldElement,
) -> Result<(FieldElement, FieldElement)> {
    let a = lift.vertical(branch, lo);
    let b = lift.vertical(branch, hi);
    Ok(if a.cmp_exact(&b)? != Ordering::Greater {
        (a, b)
    } else {
        (b, a)
    })
}

fn alignment(a: &Rect, b: &Rect) -> Result<Alignment> {
    let lower = a.y_lo.cmp_exact(&b.y_lo)? == Ordering::Equal;
    let upper = a.y_hi.cmp_exact(&b.y_hi)? == Ordering::Equal;
    Ok(match (lower, upper) {
        (true, true) => Alignment::Both,
        (true, false) => Alignment::Lower,
        (false, true) => Alignment::Upper,
        (false, false) => Alignment::Neither,
    })
}

/// Exact limit set of the lift, decided over `Q(lambda)`.
pub fn limit_set_exact(f: &ZigZagMap) -> Result<LimitSetOutcome> {
    let pcd = f.orbit_of_one(DEFAULT_MAX_STEPS)?.periodic()?;
    let g = cell_graph(f, &pcd)?;
    let lift = GaloisLift::new(f);
    let n = g.part.cells();
    let choice = hull_pattern(f, &g);
    let vals = solve_hulls(f, &g, &choice)?;
    let lo: Vec<FieldElement> = (0..n).map(|i| vals[2 * i].clone()).collect();
    let hi: Vec<FieldElement> = (0..n).map(|i| vals[2 * i + 1].clone()).collect();

    // Hull system: every image lies within the hull of its target cell.
    let mut images: Vec<Vec<(FieldElement, FieldElement, usize)>> = vec![Vec::new(); n];
    for i in 0..n {
        if lo[i].cmp_exact(&hi[i])? != Ordering::Less {
            return Err(Error::Undecided(0));
        }
        for &j in &g.into[i] {
            let (a, b) = interval_image(&lift, g.branch[j], &lo[j], &hi[j])?;
            if a.cmp_exact(&lo[i])? == Ordering::Less || b.cmp_exact(&hi[i])? == Ordering::Greater {
                // the numeric pattern was wrong; nothing exact to report
                return Err(Error::Undecided(0));
            }
            images[i].push((a, b, j));
        }
    }

    // Covering: the images must fill each hull.
    let mut tiles = true;
    for i in 0..n {
        let v = &mut images[i];
        let mut err = None;
        v.sort_by(|x, y| {
            x.0.cmp_exact(&y.0).unwrap_or_else(|e| {
                err = Some(e);
                Ordering::Equal
            })
        });
        if let Some(e) = err {
            return Err(e);
        }
        let mut reach = v[0].1.clone();
        for w in v.iter().skip(1) {
            match w.0.cmp_exact(&reach)? {
                Ordering::Greater => {
                    return Ok(LimitSetOutcome::NotRectangular {
                        cell: Some(i),
                        reason: format!(
                            "fiber over cell {i} has a gap near y = {}",
                            reach.to_decimal(6)
                        ),
                    })
                }
                Ordering::Less => tiles = false,
                Ordering::Equal => {}
            }
            if w.1.cmp_exact(&reach)? == Ordering::Greater {
                reach = w.1.clone();
            }
        }
    }

    let rects: Vec<Rect> = (0..n)
        .map(|i| Rect {
            x_lo: g.part.points[i].clone(),
            x_hi: g.part.points[i + 1].clone(),
            y_lo: lo[i].clone(),
            y_hi: hi[i].clone(),
        })
        .collect();

    // Connected interior: neighbours overlap in a segment of positive length.
    for i in 0..n.saturating_sub(1) {
        let top = if hi[i].cmp_exact(&hi[i + 1])? == Ordering::Less { &hi[i] } else { &hi[i + 1] };
        let bot = if lo[i].cmp_exact(&lo[i + 1])? == Ordering::Greater { &lo[i] } else { &lo[i + 1] };
        if top.cmp_exact(bot)? != Ordering::Greater {
            return Ok(LimitSetOutcome::NotRectangular {
                cell: Some(i),
                reason: format!("cells {i} and {} meet in at most a point", i + 1),
            });
        }
    }

    let ctx = f.context().clone();
    let mut checks = LimitSetChecks {
        invariant: true,
        tiles,
        ..Default::default()
    };

    // Heights against the transition matrix: M h = lambda h.
    let heights: Vec<FieldElement> = rects.iter().map(|r| r.height()).collect();
    let lam = f.lambda_elem();
    let mut perron = true;
    for i in 0..n {
        let mut s = FieldElement::zero(&ctx);
        for j in 0..n {
            let mij = g.matrix.get(i, j);
            if mij != 0 {
                s = &s + &heights[j].scale_int(mij);
            }
        }
        if s.cmp_exact(&(lam * &heights[i]))? != Ordering::Equal {
            perron = false;
        }
    }
    checks.perron_heights = perron;

    // Area of the union against the area of the images, cell by cell.
    let widths = g.part.widths();
    let linv = f.lambda_inv();
    let mut area = FieldElement::zero(&ctx);
    let mut image_area = FieldElement::zero(&ctx);
    for i in 0..n {
        area = &area + &(&widths[i] * &heights[i]);
        for &j in &g.into[i] {
            image_area = &image_area + &(&widths[i] * &(linv * &heights[j]));
        }
    }
    checks.area_preserved = area.cmp_exact(&image_area)? == Ordering::Equal;

    let mut alignments = Vec::new();
    for i in 0..n.saturating_sub(1) {
        alignments.push(alignment(&rects[i], &rects[i + 1])?);
    }

    // Boundary components on cut lines and the lifts of postcritical points.
    let pc = postcritical_set(f, &pcd)?;
    let mut components = Vec::new();
    let mut lifts = Vec::new();
    let mut aligned = alignments.iter().all(|a| *a != Alignment::Neither);
    let mut centered = true;
    for (idx, x) in g.part.points.iter().enumerate() {
        let is_pc = pc.iter().any(|p| p.cmp_exact(x).map_or(false, |o| o == Ordering::Equal));
        let comp = if idx == 0 {
            Some((lo[0].clone(), hi[0].clone()))
        } else if idx == n {
            Some((lo[n - 1].clone(), hi[n - 1].clone()))
        } else {
            let (l, r) = (&rects[idx - 1], &rects[idx]);
            match alignments[idx - 1] {
                Alignment::Lower => Some(min_max(&l.y_hi, &r.y_hi)?),
                Alignment::Upper => Some(min_max(&l.y_lo, &r.y_lo)?),
                Alignment::Both => None,
                Alignment::Neither => None,
            }
        };
        if !is_pc {
            // a cut line that is not postcritical carries no boundary
            if comp.is_some() && idx != 0 && idx != n {
                aligned = false;
            }
            continue;
        }
        let y = periodic_lift(f, x)?;
        let c = match comp {
            Some((a, b)) => {
                let mid = (&a + &b).scale(&num_rational::BigRational::new(1.into(), 2.into()));
                let ok = y.cmp_exact(&mid)? == Ordering::Equal;
                components.push(BoundaryComponent {
                    x: x.clone(),
                    y_lo: a,
                    y_hi: b,
                });
                ok
            }
            None => false,
        };
        centered &= c;
        lifts.push(PcLift {
            x: x.clone(),
            y,
            centered: c,
        });
    }
    checks.aligned = aligned;
    checks.centered = centered;

    Ok(LimitSetOutcome::Rectangular(LimitSet {
        context: ctx,
        rects,
        alignments,
        components,
        lifts,
        transition: g.matrix,
        checks,
    }))
}

fn min_max(a: &FieldElement, b: &FieldElement) -> Result<(FieldElement, FieldElement)> {
    Ok(if a.cmp_exact(b)? == Ordering::Greater {
        (b.clone(), a.clone())
    } else {
        (a.clone(), b.clone())
    })
}

/// Verdict of the pseudo-Anosov test.
#[derive(Clone, Debug)]
pub struct PaVerdict {
    pub is_pa: bool,
    pub digit_poly: IntPoly,
    /// `D_f(1 / lambda)`
    pub witness: FieldElement,
    pub rectangular: bool,
    pub reason: String,
    pub limit_set: Option<LimitSet>,
}

/// `f` is of pseudo-Anosov type exactly when `D_f(1/lambda) = 0` and the
/// limit set of its lift is rectangular.
#[allow(non_snake_case)]
pub fn is_pA_type(f: &ZigZagMap) -> Result<PaVerdict> {
    let two = f.int(2);
    if f.lambda_elem().cmp_exact(&two)? != Ordering::Greater {
        return Err(Error::UnimodalRegime);
    }
    let d = f.digit_polynomial(DEFAULT_MAX_STEPS)?;
    let witness = f.lambda_inv().eval_poly(&d);
    let vanishes = witness.is_zero()?;
    let outcome = limit_set_exact(f)?;
    let (rectangular, reason, ls) = match outcome {
        LimitSetOutcome::Rectangular(ls) => (true, String::new(), Some(ls)),
        LimitSetOutcome::NotRectangular { reason, .. } => (false, reason, None),
    };
    let reason = match (vanishes, rectangular) {
        (true, true) => "digit polynomial vanishes at 1/lambda and the limit set is rectangular".to_string(),
        (false, _) => format!("D_f(λ⁻¹) ≠ 0 (value {})", witness.to_decimal(12)),
        (true, false) => reason,
    };
    Ok(PaVerdict {
        is_pa: vanishes && rectangular,
        digit_poly: d,
        witness,
        rectangular,
        reason,
        limit_set: ls,
    })
}

/// Invariants of the surface carried by a map of pseudo-Anosov type.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SingularityReport {
    pub one_prongs: usize,
    /// prongs at the point at infinity
    pub infinity_prongs: usize,
    /// `sum (2 - prongs)` over all singular points
    pub euler_sum: i64,
    /// genus of the quotient surface
    pub surface_genus: usize,
    /// marked points on the sphere
    pub punctures: usize,
    /// genus of the double cover branched at the one-pronged points
    pub double_cover_genus: Option<usize>,
    pub trace_field_degree: usize,
    pub note: Option<String>,
}

pub fn singularity_report(f: &ZigZagMap, pcd: &PostcriticalData) -> Result<SingularityReport> {
    let v = is_pA_type(f)?;
    if !v.is_pa {
        return Err(Error::Verification(format!("not of pseudo-Anosov type: {}", v.reason)));
    }
    let pc = postcritical_set(f, pcd)?.len();
    let infinity = pc - 2;
    let euler = pc as i64 + 2 - infinity as i64;
    // Riemann-Hurwitz for a double cover of the sphere branched at pc points
    let (genus, note) = if pc % 2 == 0 {
        (Some((pc - 2) / 2), None)
    } else {
        (None, Some(format!("{pc} one-pronged points: no branched double cover")))
    };
    let q = companion_polynomial(f.context().minpoly())?;
    Ok(SingularityReport {
        one_prongs: pc,
        infinity_prongs: infinity,
        euler_sum: euler,
        surface_genus: 0,
        punctures: pc,
        double_cover_genus: genus,
        trace_field_degree: q.degree().unwrap_or(0),
        note,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::{build_zigzag, FractionLabel};
    use crate::exact::perron_root;
    use crate::zigzag::{make_zigzag, Sign};

    fn q(a: u64, b: u64) -> FractionLabel {
        FractionLabel::new(a, b).unwrap()
    }

    #[test]
    fn lift_of_one_is_one_for_markov_example() {
        let lm = build_zigzag(2, q(1, 2)).unwrap();
        let y = periodic_lift(&lm.map, &lm.map.int(1)).unwrap();
        assert!(y == lm.map.int(1));
        let y0 = periodic_lift(&lm.map, &lm.map.int(0)).unwrap();
        assert!(y0.is_zero().unwrap());
    }

    #[test]
    fn markov_example_limit_set() {
        let lm = build_zigzag(2, q(1, 2)).unwrap();
        let out = limit_set_exact(&lm.map).unwrap();
        let LimitSetOutcome::Rectangular(ls) = out else { panic!("not rectangular") };
        assert_eq!(ls.rects.len(), 4);
        assert!(ls.checks.all(), "{:?}", ls.checks);
        let v = is_pA_type(&lm.map).unwrap();
        assert!(v.is_pa);
        let s = singularity_report(&lm.map, &lm.postcritical).unwrap();
        assert_eq!(s.one_prongs, 4);
        assert_eq!(s.infinity_prongs, 2);
        assert_eq!(s.euler_sum, 4);
        assert_eq!(s.double_cover_genus, Some(1));
        assert_eq!(s.trace_field_degree, 1);
    }

    #[test]
    fn generalized_example_is_not_pa() {
        let p = IntPoly::from_i64(&[-1, -2, 1]);
        let f = make_zigzag(2, Sign::Positive, &perron_root(&p).unwrap()).unwrap();
        let v = is_pA_type(&f).unwrap();
        assert!(!v.is_pa);
        // 4 - 4 sqrt 2 = 8 - 4 lambda
        let want = &f.int(8) - &f.lambda_elem().scale_int(4);
        assert!(v.witness == want);
        assert!(v.reason.contains("D_f(λ⁻¹) ≠ 0"));
        // the fibers over the weak partition are intervals, but the lift of
        // 1 is not centered on its boundary component
        let ls = v.limit_set.expect("rectangular");
        assert!(ls.checks.tiles && ls.checks.aligned);
        assert!(!ls.checks.centered);
        let y = periodic_lift(&f, &f.int(1)).unwrap();
        let linv = f.lambda_inv();
        let want = &(&f.int(2) + &linv.scale_int(2)) * &(&f.int(1) + &(linv * linv)).inverse().unwrap();
        assert!(y == want);
    }

    #[test]
    fn unimodal_is_refused() {
        let p = IntPoly::from_i64(&[-1, -1, 1]);
        let f = make_zigzag(1, Sign::Positive, &perron_root(&p).unwrap()).unwrap();
        assert_eq!(is_pA_type(&f).unwrap_err(), Error::UnimodalRegime);
    }

    #[test]
    fn numeric_agrees_with_exact() {
        let lm = build_zigzag(3, q(2, 5)).unwrap();
        let num = limit_set_numeric(&lm.map, 1e-10).unwrap();
        assert_eq!(num.verdict, NumericVerdict::Rectangular);
        let LimitSetOutcome::Rectangular(ls) = limit_set_exact(&lm.map).unwrap() else { panic!() };
        for (r, fib) in ls.rects.iter().zip(&num.fibers) {
            assert!((r.y_lo.to_f64() - fib[0].0).abs() < 1e-8);
            assert!((r.y_hi.to_f64() - fib[0].1).abs() < 1e-8);
        }
        assert!(ls.checks.all(), "{:?}", ls.checks);
    }

    #[test]
    fn vertical_branches() {
        let lm = build_zigzag(2, q(1, 2)).unwrap();
        let f = &lm.map;
        let lift = GaloisLift::new(f);
        let y = f.int(3);
        assert!(lift.vertical(0, &y) == f.lambda_inv() * &y);
        assert!(lift.vertical(1, &y) == &f.int(2) - &(f.lambda_inv() * &y));
    }

    #[test]
    fn lift_commutes_with_projection() {
        for (m, a, b) in [(2, 1, 3), (3, 2, 5)] {
            let lm = build_zigzag(m, q(a, b)).unwrap();
            let f = &lm.map;
            let lift = GaloisLift::new(f);
            for i in 0..500i64 {
                let x = FieldElement::from_rational(f.context(), num_rational::BigRational::new(i.into(), 499.into()));
                let y = f.int(i % 7 - 3);
                let (fx, _) = lift.apply(&x, &y).unwrap();
                assert!(fx == f.evaluate(&x).unwrap());
            }
        }
    }

    #[test]
    fn pa_examples() {
        for (m, a, b) in [(2, 1, 3), (3, 2, 5), (4, 1, 3)] {
            let lm = build_zigzag(m, q(a, b)).unwrap();
            let v = is_pA_type(&lm.map).unwrap();
            assert!(v.is_pa, "({m}, {a}/{b}): {}", v.reason);
            assert!(v.limit_set.unwrap().checks.all());
        }
        let quad = crate::classify::quad_nonstandard(3).unwrap();
        assert!(is_pA_type(&quad).unwrap().is_pa);
    }

    #[test]
    fn genus_two_member() {
        let lm = build_zigzag(2, q(1, 4)).unwrap();
        let s = singularity_report(&lm.map, &lm.postcritical).unwrap();
        assert_eq!(s.one_prongs, 6);
        assert_eq!(s.double_cover_genus, Some(2));
        assert_eq!(s.trace_field_degree, 2);
        let lifts = periodic_lifts(&lm.map, &lm.postcritical).unwrap();
        assert_eq!(lifts.len(), lm.postcritical.period());
    }

    #[test]
    fn zero_steps_is_the_box() {
        let lm = build_zigzag(2, q(1, 2)).unwrap();
        let n = iterate_fibers(&lm.map, 0).unwrap();
        let r = n.fibers[0][0].1;
        assert!(n.fibers.iter().all(|f| f.len() == 1 && f[0] == (-r, r)));
        assert!(limit_set_numeric(&lm.map, 0.0).is_err());
    }
}
