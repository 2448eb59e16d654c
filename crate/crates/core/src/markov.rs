//! Markov partitions, transition matrices and Perron eigendata.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{perron_root, AlgebraicReal, FieldContext, FieldElement, IntPoly};
use crate::zigzag::{PostcriticalData, ZigZagMap, DEFAULT_MAX_STEPS};

/// Which points cut the interval.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PartitionKind {
    /// Critical points, postcritical points and endpoints.
    Weak,
    /// Postcritical points and endpoints only.
    Postcritical,
}

/// Role of a cut point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointRole {
    pub postcritical: bool,
    /// `Some(i)` for the critical point `c_i`.
    pub critical: Option<u32>,
}

#[derive(Clone, Debug)]
pub struct MarkovPartition {
    pub kind: PartitionKind,
    pub points: Vec<FieldElement>,
    pub roles: Vec<PointRole>,
}

impl MarkovPartition {
    pub fn cells(&self) -> usize {
        self.points.len() - 1
    }

    pub fn widths(&self) -> Vec<FieldElement> {
        self.points.windows(2).map(|w| &w[1] - &w[0]).collect()
    }

    /// Index of an exact cut point.
    pub fn index_of(&self, x: &FieldElement) -> Result<Option<usize>> {
        let xa = x.to_f64();
        for (i, p) in self.points.iter().enumerate() {
            if (p.to_f64() - xa).abs() < 1e-6 && p.cmp_exact(x)? == Ordering::Equal {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }
}

fn sort_dedup(mut pts: Vec<(FieldElement, PointRole)>) -> Result<Vec<(FieldElement, PointRole)>> {
    let mut err = None;
    pts.sort_by(|a, b| {
        a.0.cmp_exact(&b.0).unwrap_or_else(|e| {
            err = Some(e);
            Ordering::Equal
        })
    });
    if let Some(e) = err {
        return Err(e);
    }
    let mut out: Vec<(FieldElement, PointRole)> = Vec::new();
    for (x, r) in pts {
        if let Some(last) = out.last_mut() {
            if last.0.cmp_exact(&x)? == Ordering::Equal {
                last.1.postcritical |= r.postcritical;
                last.1.critical = last.1.critical.or(r.critical);
                continue;
            }
        }
        out.push((x, r));
    }
    Ok(out)
}

/// Postcritical set: forward orbits of the critical values together with
/// both endpoints.
pub fn postcritical_set(f: &ZigZagMap, pcd: &PostcriticalData) -> Result<Vec<FieldElement>> {
    let mut pts: Vec<(FieldElement, PointRole)> = Vec::new();
    let role = PointRole {
        postcritical: true,
        critical: None,
    };
    for x in pcd.orbit.iter().chain(f.orbit_of_zero(DEFAULT_MAX_STEPS)?.iter()) {
        pts.push((x.clone(), role));
    }
    pts.push((f.int(0), role));
    pts.push((f.int(1), role));
    Ok(sort_dedup(pts)?.into_iter().map(|(x, _)| x).collect())
}

pub fn markov_partition(
    f: &ZigZagMap,
    pcd: &PostcriticalData,
    kind: PartitionKind,
) -> Result<MarkovPartition> {
    let mut pts: Vec<(FieldElement, PointRole)> = postcritical_set(f, pcd)?
        .into_iter()
        .map(|x| {
            (
                x,
                PointRole {
                    postcritical: true,
                    critical: None,
                },
            )
        })
        .collect();
    for i in 1..=f.modality() {
        let c = f.critical_point(i);
        match kind {
            PartitionKind::Weak => pts.push((
                c,
                PointRole {
                    postcritical: false,
                    critical: Some(i),
                },
            )),
            PartitionKind::Postcritical => {
                // keep the critical label on points that are postcritical anyway
                for p in pts.iter_mut() {
                    if p.0.cmp_exact(&c)? == Ordering::Equal {
                        p.1.critical = Some(i);
                    }
                }
            }
        }
    }
    let merged = sort_dedup(pts)?;
    Ok(MarkovPartition {
        kind,
        points: merged.iter().map(|p| p.0.clone()).collect(),
        roles: merged.iter().map(|p| p.1).collect(),
    })
}

/// Square matrix of non-negative integers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IntMatrix {
    rows: Vec<Vec<i64>>,
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rows {
            let v: Vec<String> = r.iter().map(|x| x.to_string()).collect();
            writeln!(f, "[{}]", v.join(" "))?;
        }
        Ok(())
    }
}

impl IntMatrix {
    pub fn new(rows: Vec<Vec<i64>>) -> Result<IntMatrix> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidInput("matrix must be square".into()));
        }
        Ok(IntMatrix { rows })
    }

    pub fn zeros(n: usize) -> IntMatrix {
        IntMatrix {
            rows: vec![vec![0; n]; n],
        }
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.rows[i][j]
    }

    pub fn mul(&self, o: &IntMatrix) -> IntMatrix {
        let n = self.size();
        let mut out = IntMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.rows[i][k];
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    out.rows[i][j] += a * o.rows[k][j];
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> IntMatrix {
        let n = self.size();
        IntMatrix {
            rows: (0..n).map(|i| (0..n).map(|j| self.rows[j][i]).collect()).collect(),
        }
    }

    /// Removes the listed rows and columns.
    pub fn minor(&self, drop: &[usize]) -> IntMatrix {
        let keep: Vec<usize> = (0..self.size()).filter(|i| !drop.contains(i)).collect();
        IntMatrix {
            rows: keep
                .iter()
                .map(|&i| keep.iter().map(|&j| self.rows[i][j]).collect())
                .collect(),
        }
    }

    /// `det(tI - M)` by the Faddeev-LeVerrier recursion.
    pub fn char_poly(&self) -> IntPoly {
        let n = self.size();
        let a: Vec<Vec<BigInt>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        let mut c = vec![BigInt::zero(); n + 1];
        c[n] = BigInt::from(1);
        let mut mk: Vec<Vec<BigInt>> = vec![vec![BigInt::zero(); n]; n];
        for k in 1..=n {
            // M_k = A M_{k-1} + c_{n-k+1} I
            let mut next = vec![vec![BigInt::zero(); n]; n];
            for i in 0..n {
                for l in 0..n {
                    if a[i][l].is_zero() {
                        continue;
                    }
                    for j in 0..n {
                        next[i][j] += &a[i][l] * &mk[l][j];
                    }
                }
                next[i][i] += &c[n - k + 1];
            }
            mk = next;
            let mut tr = BigInt::zero();
            for i in 0..n {
                for l in 0..n {
                    tr += &a[i][l] * &mk[l][i];
                }
            }
            c[n - k] = -tr / BigInt::from(k);
        }
        IntPoly::new(c)
    }

    /// Strongly connected components of the transition graph `j -> i`
    /// whenever `M[i][j] > 0`, in Tarjan order.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.size();
        let adj: Vec<Vec<usize>> = (0..n)
            .map(|j| (0..n).filter(|&i| self.rows[i][j] > 0).collect())
            .collect();
        tarjan(&adj)
    }

    /// Components that carry a cycle.
    pub fn recurrent_blocks(&self) -> Vec<Vec<usize>> {
        self.components()
            .into_iter()
            .filter(|c| c.len() > 1 || self.rows[c[0]][c[0]] > 0)
            .collect()
    }

    pub fn is_irreducible(&self) -> bool {
        self.components().len() == 1 && (self.size() > 1 || self.rows[0][0] > 0)
    }

    /// Smallest `k <= (d-1)^2 + 1` with `M^k > 0`.
    pub fn primitivity_exponent(&self) -> Option<usize> {
        let n = self.size();
        if n == 0 {
            return None;
        }
        let b: Vec<Vec<bool>> = self.rows.iter().map(|r| r.iter().map(|&x| x > 0).collect()).collect();
        let mut p = b.clone();
        let bound = (n - 1) * (n - 1) + 1;
        for k in 1..=bound {
            if p.iter().all(|r| r.iter().all(|&x| x)) {
                return Some(k);
            }
            let mut q = vec![vec![false; n]; n];
            for i in 0..n {
                for l in 0..n {
                    if p[i][l] {
                        for j in 0..n {
                            q[i][j] |= b[l][j];
                        }
                    }
                }
            }
            p = q;
        }
        None
    }

    pub fn is_primitive(&self) -> bool {
        self.primitivity_exponent().is_some()
    }
}

fn tarjan(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    struct St<'a> {
        adj: &'a [Vec<usize>],
        index: Vec<Option<usize>>,
        low: Vec<usize>,
        on: Vec<bool>,
        stack: Vec<usize>,
        next: usize,
        out: Vec<Vec<usize>>,
    }
    fn visit(s: &mut St, v: usize) {
        s.index[v] = Some(s.next);
        s.low[v] = s.next;
        s.next += 1;
        s.stack.push(v);
        s.on[v] = true;
        for k in 0..s.adj[v].len() {
            let w = s.adj[v][k];
            match s.index[w] {
                None => {
                    visit(s, w);
                    s.low[v] = s.low[v].min(s.low[w]);
                }
                Some(iw) if s.on[w] => s.low[v] = s.low[v].min(iw),
                _ => {}
            }
        }
        if Some(s.low[v]) == s.index[v] {
            let mut comp = Vec::new();
            while let Some(w) = s.stack.pop() {
                s.on[w] = false;
                comp.push(w);
                if w == v {
                    break;
                }
            }
            comp.sort_unstable();
            s.out.push(comp);
        }
    }
    let n = adj.len();
    let mut s = St {
        adj,
        index: vec![None; n],
        low: vec![0; n],
        on: vec![false; n],
        stack: Vec::new(),
        next: 0,
        out: Vec::new(),
    };
    for v in 0..n {
        if s.index[v].is_none() {
            visit(&mut s, v);
        }
    }
    s.out.sort();
    s.out
}

/// Monotone pieces of a cell: the cell split at interior critical points,
/// each with its branch index.
pub fn monotone_pieces(
    f: &ZigZagMap,
    a: &FieldElement,
    b: &FieldElement,
) -> Result<Vec<(FieldElement, FieldElement, usize)>> {
    let mut cuts = vec![a.clone()];
    for c in f.critical_points() {
        if c.cmp_exact(a)? == Ordering::Greater && c.cmp_exact(b)? == Ordering::Less {
            cuts.push(c);
        }
    }
    cuts.push(b.clone());
    let mut out = Vec::new();
    for w in cuts.windows(2) {
        let j = f.branch_index(&w[0])?;
        out.push((w[0].clone(), w[1].clone(), j));
    }
    Ok(out)
}

/// `M[i][j]` counts how many times `f(P_j)` covers `P_i`.
pub fn transition_matrix(f: &ZigZagMap, part: &MarkovPartition) -> Result<IntMatrix> {
    let n = part.cells();
    let mut m = IntMatrix::zeros(n);
    for j in 0..n {
        for (a, b, br) in monotone_pieces(f, &part.points[j], &part.points[j + 1])? {
            let ya = f.apply_branch(br, &a);
            let yb = f.apply_branch(br, &b);
            let ia = part.index_of(&ya)?;
            let ib = part.index_of(&yb)?;
            let (ia, ib) = match (ia, ib) {
                (Some(x), Some(y)) => (x.min(y), x.max(y)),
                _ => {
                    return Err(Error::Verification(
                        "partition is not Markov: image endpoint is not a cut point".into(),
                    ))
                }
            };
            for i in ia..ib {
                m.rows[i][j] += 1;
            }
        }
    }
    Ok(m)
}

/// Perron eigendata. `left` sums to 1 and `left . right = 1`.
#[derive(Clone, Debug)]
pub struct PerronData {
    pub lambda: AlgebraicReal,
    pub exact: Option<ExactEigen>,
    pub lambda_f64: f64,
    pub left_f64: Vec<f64>,
    pub right_f64: Vec<f64>,
}

#[derive(Clone, Debug)]
pub struct ExactEigen {
    pub context: Arc<FieldContext>,
    pub left: Vec<FieldElement>,
    pub right: Vec<FieldElement>,
}

/// Perron root and normalised eigenvectors of an irreducible matrix.
pub fn perron_data(m: &IntMatrix) -> Result<PerronData> {
    if !m.is_irreducible() {
        return Err(Error::ReducibleMatrix(m.recurrent_blocks()));
    }
    let chi = m.char_poly();
    let lambda = perron_root(&chi)?;
    let ctx = FieldContext::for_root(&lambda)?;
    let exact = eigenvectors_in(m, &ctx).ok();
    let (left_f64, right_f64) = match &exact {
        Some(e) => (
            e.left.iter().map(|x| x.to_f64()).collect(),
            e.right.iter().map(|x| x.to_f64()).collect(),
        ),
        None => {
            let (_, l, r) = power_iteration(m);
            (l, r)
        }
    };
    Ok(PerronData {
        lambda_f64: lambda.to_f64(),
        lambda,
        exact,
        left_f64,
        right_f64,
    })
}

/// Exact kernel vector of `M - lambda I` with the first free variable set to 1.
fn kernel_vector(m: &IntMatrix, ctx: &Arc<FieldContext>) -> Result<Vec<FieldElement>> {
    let n = m.size();
    let lam = FieldElement::generator(ctx);
    let mut a: Vec<Vec<FieldElement>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let v = FieldElement::from_int(ctx, m.get(i, j));
                    if i == j {
                        &v - &lam
                    } else {
                        v
                    }
                })
                .collect()
        })
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..n {
        let mut piv = None;
        for r in row..n {
            if !a[r][col].is_zero()? {
                piv = Some(r);
                break;
            }
        }
        let Some(p) = piv else { continue };
        a.swap(row, p);
        let inv = a[row][col].inverse()?;
        for j in col..n {
            a[row][j] = &a[row][j] * &inv;
        }
        for r in 0..n {
            if r != row && !a[r][col].repr().is_zero() {
                let fct = a[r][col].clone();
                for j in col..n {
                    let t = &fct * &a[row][j];
                    a[r][j] = &a[r][j] - &t;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == n {
            break;
        }
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    if free.len() != 1 {
        return Err(Error::Verification(format!(
            "eigenspace has dimension {}",
            free.len()
        )));
    }
    let fc = free[0];
    let mut v = vec![FieldElement::zero(ctx); n];
    v[fc] = FieldElement::one(ctx);
    for (r, &pc) in pivots.iter().enumerate() {
        v[pc] = -&a[r][fc];
    }
    Ok(v)
}

/// Exact left and right Perron vectors over the given field.
pub fn eigenvectors_in(m: &IntMatrix, ctx: &Arc<FieldContext>) -> Result<ExactEigen> {
    let lam = FieldElement::generator(ctx);
    if !lam.eval_poly(&m.char_poly()).is_zero()? {
        return Err(Error::Verification("lambda is not an eigenvalue".into()));
    }
    let mut right = kernel_vector(m, ctx)?;
    let mut left = kernel_vector(&m.transpose(), ctx)?;
    let mut s = FieldElement::zero(ctx);
    for x in &left {
        s = &s + x;
    }
    let sinv = s.inverse()?;
    left = left.iter().map(|x| x * &sinv).collect();
    let mut dot = FieldElement::zero(ctx);
    for (x, y) in left.iter().zip(&right) {
        dot = &dot + &(x * y);
    }
    let dinv = dot.inverse()?;
    right = right.iter().map(|x| x * &dinv).collect();
    for x in left.iter().chain(&right) {
        if x.sign()? != Ordering::Greater {
            return Err(Error::Verification("Perron vector is not positive".into()));
        }
    }
    Ok(ExactEigen {
        context: ctx.clone(),
        left,
        right,
    })
}

/// Floating point fallback; tolerance `1e-12`.
pub fn power_iteration(m: &IntMatrix) -> (f64, Vec<f64>, Vec<f64>) {
    let n = m.size();
    let iterate = |mat: &IntMatrix| -> (f64, Vec<f64>) {
        let mut v = vec![1.0 / n as f64; n];
        let mut lam = 0.0;
        for _ in 0..100_000 {
            // averaging with the identity kills periodic oscillation
            let mut w = v.clone();
            for i in 0..n {
                for j in 0..n {
                    w[i] += mat.get(i, j) as f64 * v[j];
                }
            }
            let s: f64 = w.iter().sum();
            for x in w.iter_mut() {
                *x /= s;
            }
            let diff: f64 = w.iter().zip(&v).map(|(a, b)| (a - b).abs()).sum();
            v = w;
            lam = s - 1.0;
            if diff < 1e-12 {
                break;
            }
        }
        (lam, v)
    };
    let (lam, right) = iterate(m);
    let (_, left) = iterate(&m.transpose());
    let dot: f64 = left.iter().zip(&right).map(|(a, b)| a * b).sum();
    let right = right.iter().map(|x| x / dot).collect();
    (lam, left, right)
}

pub fn to_u64_rows(m: &IntMatrix) -> Vec<Vec<u64>> {
    m.rows
        .iter()
        .map(|r| r.iter().map(|x| x.to_u64().unwrap_or(0)).collect())
        .collect()
}
