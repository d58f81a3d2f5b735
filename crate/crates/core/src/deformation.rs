//! Lifts of a module over `F_p[t]/(t^n)`: first-order cocycles, order-by-order
//! obstruction solving, polynomial lift certificates, and the deformation-ring
//! classifier.
//!
//! A lift of order `n` keeps the vertex idempotents fixed and deforms only the
//! arrow matrices: `X_ζ(t) = X_ζ + t X_ζ^{(1)} + ... + t^{n-1} X_ζ^{(n-1)}`.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::AlgebraTable;
use crate::homological::{omega, stable_end_dim, HomologicalError};
use crate::linalg::{DenseMatrix, PrimeField, RowSpace};
use crate::quiver::{canonical_name, Word};
use crate::rep::{is_isomorphic, IsoVerdict, Rep, RepError};
use crate::strings::{band_of, band_totals, Mu};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DeformationError {
    #[error(transparent)]
    Homological(#[from] HomologicalError),
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error("relation `{relation}` leaves a nonzero coefficient of t^{degree}")]
    RelationFailure { relation: String, degree: usize },
    #[error("the first-order term is a coboundary")]
    TrivialDirection,
    #[error("the reduction at t = 0 is not isomorphic to the module ({0})")]
    NotIsomorphic(String),
    #[error("bad certificate: {0}")]
    Certificate(String),
}

/// Flattened arrow-matrix tuples: arrow by arrow, row-major.
#[derive(Clone, Debug)]
struct Layout {
    shapes: Vec<(usize, usize)>,
    offsets: Vec<usize>,
    len: usize,
}

impl Layout {
    fn of(v: &Rep) -> Self {
        let shapes: Vec<(usize, usize)> = v.arrows().iter().map(|m| (m.rows(), m.cols())).collect();
        let mut offsets = Vec::new();
        let mut len = 0;
        for &(r, c) in &shapes {
            offsets.push(len);
            len += r * c;
        }
        Self { shapes, offsets, len }
    }

    fn flatten(&self, mats: &[DenseMatrix]) -> Vec<u32> {
        mats.iter().flat_map(|m| m.data().to_vec()).collect()
    }

    fn unflatten(&self, field: PrimeField, v: &[u32]) -> Vec<DenseMatrix> {
        self.shapes
            .iter()
            .zip(&self.offsets)
            .map(|(&(r, c), &o)| {
                let mut m = DenseMatrix::zeros(field, r, c);
                for i in 0..r {
                    for j in 0..c {
                        m.set(i, j, v[o + i * c + j]);
                    }
                }
                m
            })
            .collect()
    }
}

/// Tangent data of the deformation functor of `V`.
#[derive(Clone, Debug)]
pub struct FirstOrderSpace {
    pub module: Rep,
    /// Basis of arrow-matrix tuples `D` with every relation linear in `D` vanishing.
    pub cocycles: Vec<Vec<DenseMatrix>>,
    /// Independent spanning set of `{δ(B)}`.
    pub coboundaries: Vec<Vec<DenseMatrix>>,
    pub ext1: usize,
    /// Cocycles whose classes form a basis of `Ext¹(V, V)`.
    pub classes: Vec<Vec<DenseMatrix>>,
    linear: DenseMatrix,
    layout: Layout,
    cobound_space: RowSpace,
}

impl FirstOrderSpace {
    pub fn is_coboundary(&self, d: &[DenseMatrix]) -> bool {
        self.cobound_space.contains(&self.layout.flatten(d))
    }

    pub fn is_cocycle(&self, d: &[DenseMatrix]) -> bool {
        self.linear.mul_vec(&self.layout.flatten(d)).iter().all(|&x| x == 0)
    }

    /// `δ(B)_ζ = B_{e(ζ)} X_ζ − X_ζ B_{s(ζ)}`.
    pub fn coboundary_of(&self, b: &[DenseMatrix]) -> Vec<DenseMatrix> {
        coboundary(&self.module, b)
    }
}

fn coboundary(v: &Rep, b: &[DenseMatrix]) -> Vec<DenseMatrix> {
    let q = v.algebra().quiver();
    v.arrows()
        .iter()
        .enumerate()
        .map(|(a, x)| {
            let arr = q.arrow(a);
            b[arr.target].mul(x).sub(&x.mul(&b[arr.source]))
        })
        .collect()
}

/// Product of the truncated polynomial matrices `a · b` modulo `t^order`.
fn poly_mul(a: &[DenseMatrix], b: &[DenseMatrix], order: usize) -> Vec<DenseMatrix> {
    let f = a[0].field();
    let (r, c) = (a[0].rows(), b[0].cols());
    let mut out = vec![DenseMatrix::zeros(f, r, c); order];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            if i + j >= order || bj.is_zero() {
                continue;
            }
            out[i + j] = out[i + j].add(&ai.mul(bj));
        }
    }
    out
}

/// Coefficients of every relation evaluated on `coeffs` (degree-major) mod `t^order`.
fn eval_relations(v: &Rep, coeffs: &[Vec<DenseMatrix>], order: usize) -> Vec<(String, Vec<DenseMatrix>)> {
    let alg = v.algebra();
    let q = alg.quiver();
    let f = v.field();
    let dims = v.dims();
    let per_arrow: Vec<Vec<DenseMatrix>> = (0..q.num_arrows())
        .map(|a| (0..order).map(|i| coeffs.get(i).map_or_else(|| zeros_like(&coeffs[0][a]), |c| c[a].clone())).collect())
        .collect();
    alg.presentation()
        .relations
        .iter()
        .map(|rel| {
            let (s, t) = (rel.source(q), rel.target(q));
            let mut acc = vec![DenseMatrix::zeros(f, dims[t], dims[s]); order];
            for term in rel.terms() {
                let c = f.from_i64(term.coeff);
                if c == 0 {
                    continue;
                }
                let letters = term.path.letters();
                let mut prod = per_arrow[letters[0]].clone();
                for &a in &letters[1..] {
                    prod = poly_mul(&prod, &per_arrow[a], order);
                }
                for (x, y) in acc.iter_mut().zip(prod) {
                    *x = x.add(&y.scale(c));
                }
            }
            (rel.display(q), acc)
        })
        .collect()
}

fn zeros_like(m: &DenseMatrix) -> DenseMatrix {
    DenseMatrix::zeros(m.field(), m.rows(), m.cols())
}

/// Derivative of all relations at `V`, as a matrix acting on flattened tuples.
fn linearization(v: &Rep, layout: &Layout) -> DenseMatrix {
    let alg = v.algebra();
    let q = alg.quiver();
    let f = v.field();
    let dims = v.dims();
    let mut rows: Vec<Vec<u32>> = Vec::new();
    for rel in &alg.presentation().relations {
        let (s, t) = (rel.source(q), rel.target(q));
        let mut block = vec![vec![0u32; layout.len]; dims[t] * dims[s]];
        for term in rel.terms() {
            let c = f.from_i64(term.coeff);
            if c == 0 {
                continue;
            }
            let letters = term.path.letters();
            for k in 0..letters.len() {
                let a = letters[k];
                let arr = q.arrow(a);
                let pre = if k == 0 {
                    DenseMatrix::identity(f, dims[arr.target])
                } else {
                    v.path_matrix(&letters[..k])
                };
                let post = if k + 1 == letters.len() {
                    DenseMatrix::identity(f, dims[arr.source])
                } else {
                    v.path_matrix(&letters[k + 1..])
                };
                let (dr, dc) = layout.shapes[a];
                let off = layout.offsets[a];
                // (pre · D · post)[r, s'] = Σ pre[r, i] D[i, j] post[j, s'].
                for r in 0..dims[t] {
                    for i in 0..dr {
                        let pv = pre.get(r, i);
                        if pv == 0 {
                            continue;
                        }
                        let pc = f.mul(c, pv);
                        for j in 0..dc {
                            for sc in 0..dims[s] {
                                let qv = post.get(j, sc);
                                if qv != 0 {
                                    let cell = &mut block[r * dims[s] + sc][off + i * dc + j];
                                    *cell = f.add(*cell, f.mul(pc, qv));
                                }
                            }
                        }
                    }
                }
            }
        }
        rows.extend(block);
    }
    let mut m = DenseMatrix::zeros(f, rows.len(), layout.len);
    for (i, row) in rows.iter().enumerate() {
        for (j, &x) in row.iter().enumerate() {
            if x != 0 {
                m.set(i, j, x);
            }
        }
    }
    m
}

/// Cocycles, coboundaries and `Ext¹(V, V)` from the linearised relations.
pub fn first_order(v: &Rep) -> FirstOrderSpace {
    let f = v.field();
    let layout = Layout::of(v);
    let linear = linearization(v, &layout);
    let cocycle_vecs = if layout.len == 0 {
        Vec::new()
    } else if linear.rows() == 0 {
        (0..layout.len).map(|i| unit(layout.len, i)).collect()
    } else {
        linear.kernel_basis()
    };
    let mut cobound_space = RowSpace::new(f, layout.len);
    let mut coboundaries = Vec::new();
    let dims = v.dims().to_vec();
    for u in 0..dims.len() {
        for r in 0..dims[u] {
            for c in 0..dims[u] {
                let b: Vec<DenseMatrix> = dims
                    .iter()
                    .enumerate()
                    .map(|(w, &d)| {
                        if w == u {
                            DenseMatrix::unit(f, d, d, r, c)
                        } else {
                            DenseMatrix::zeros(f, d, d)
                        }
                    })
                    .collect();
                let db = coboundary(v, &b);
                if cobound_space.insert(&layout.flatten(&db)) {
                    coboundaries.push(db);
                }
            }
        }
    }
    let mut quotient = cobound_space.clone();
    let mut classes = Vec::new();
    for z in &cocycle_vecs {
        if quotient.insert(z) {
            classes.push(layout.unflatten(f, z));
        }
    }
    FirstOrderSpace {
        module: v.clone(),
        cocycles: cocycle_vecs.iter().map(|z| layout.unflatten(f, z)).collect(),
        ext1: cocycle_vecs.len() - coboundaries.len(),
        coboundaries,
        classes,
        linear,
        layout,
        cobound_space,
    }
}

fn unit(d: usize, i: usize) -> Vec<u32> {
    let mut v = vec![0u32; d];
    v[i] = 1;
    v
}

/// A lift over `F_p[t]/(t^order)`; `coeffs[i]` holds the `t^i` arrow coefficients.
#[derive(Clone, Debug)]
pub struct Lift {
    pub base: Rep,
    pub coeffs: Vec<Vec<DenseMatrix>>,
}

impl Lift {
    pub fn trivial(base: &Rep) -> Self {
        Self {
            base: base.clone(),
            coeffs: vec![base.arrows().to_vec()],
        }
    }

    /// `X + tD` over the dual numbers.
    pub fn first_order(base: &Rep, d: &[DenseMatrix]) -> Self {
        Self {
            base: base.clone(),
            coeffs: vec![base.arrows().to_vec(), d.to_vec()],
        }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    /// Whether every relation vanishes modulo `t^order`.
    pub fn is_valid(&self) -> bool {
        eval_relations(&self.base, &self.coeffs, self.order())
            .iter()
            .all(|(_, cs)| cs.iter().all(|m| m.is_zero()))
    }
}

/// Inconsistent system met when extending a lift.
#[derive(Clone, Debug)]
pub struct Obstruction {
    /// The lift could not be extended to `F_p[t]/(t^order)`.
    pub order: usize,
    /// The `t^{order-1}` coefficient of the relations with the new term set to zero.
    pub residual: Vec<u32>,
}

/// Coefficient of `t^n` in the relations when the new term is zero.
fn obstruction_vector(l: &Lift) -> Vec<u32> {
    let n = l.order();
    let evals = eval_relations(&l.base, &l.coeffs, n + 1);
    evals.iter().flat_map(|(_, cs)| cs[n].data().to_vec()).collect()
}

/// Solves for the next coefficient; all solutions are `particular + ker`.
fn extension_solutions(l: &Lift, fo: &FirstOrderSpace) -> Result<Vec<DenseMatrix>, Obstruction> {
    let f = l.base.field();
    let obs = obstruction_vector(l);
    let rhs: Vec<u32> = obs.iter().map(|&x| f.neg(x)).collect();
    if fo.layout.len == 0 || fo.linear.rows() == 0 {
        return if obs.iter().all(|&x| x == 0) {
            Ok(fo.layout.unflatten(f, &vec![0; fo.layout.len]))
        } else {
            Err(Obstruction {
                order: l.order() + 1,
                residual: obs,
            })
        };
    }
    match fo.linear.solve_affine(&rhs) {
        Some(sol) => Ok(fo.layout.unflatten(f, &sol.particular)),
        None => Err(Obstruction {
            order: l.order() + 1,
            residual: obs,
        }),
    }
}

/// Extends a lift of order `n` to order `n + 1`, or reports the obstruction.
pub fn extend_lift(l: &Lift) -> Result<Lift, Obstruction> {
    let fo = first_order(&l.base);
    extend_with(l, &fo)
}

fn extend_with(l: &Lift, fo: &FirstOrderSpace) -> Result<Lift, Obstruction> {
    let e = extension_solutions(l, fo)?;
    let mut next = l.clone();
    next.coeffs.push(e);
    Ok(next)
}

/// Result of pushing a one-parameter lift as far as the cap allows.
#[derive(Clone, Debug)]
pub struct LiftSearch {
    /// Highest order reached.
    pub reached: usize,
    /// Order at which every explored branch failed, if the cap was not reached.
    pub failed_at: Option<usize>,
    pub nodes: usize,
    pub lift: Lift,
}

const NODE_BUDGET: usize = 4096;

/// Depth-first search over `E_n + c·D₀` (`c ∈ F_p`) for lifts up to order `cap`.
pub fn search_lift(fo: &FirstOrderSpace, d0: &[DenseMatrix], cap: usize) -> LiftSearch {
    let start = Lift::first_order(&fo.module, d0);
    let mut nodes = 0;
    let mut best = start.clone();
    let mut deepest_fail = None;
    let found = dfs(fo, d0, start, cap, &mut nodes, &mut best, &mut deepest_fail);
    match found {
        Some(l) => LiftSearch {
            reached: l.order(),
            failed_at: None,
            nodes,
            lift: l,
        },
        None => LiftSearch {
            reached: best.order(),
            failed_at: Some(deepest_fail.unwrap_or(best.order() + 1)),
            nodes,
            lift: best,
        },
    }
}

fn dfs(
    fo: &FirstOrderSpace,
    d0: &[DenseMatrix],
    l: Lift,
    cap: usize,
    nodes: &mut usize,
    best: &mut Lift,
    deepest_fail: &mut Option<usize>,
) -> Option<Lift> {
    *nodes += 1;
    if l.order() > best.order() {
        *best = l.clone();
    }
    if l.order() >= cap {
        return Some(l);
    }
    let e = match extension_solutions(&l, fo) {
        Ok(e) => e,
        Err(obs) => {
            *deepest_fail = Some(deepest_fail.map_or(obs.order, |d: usize| d.max(obs.order)));
            return None;
        }
    };
    let f = l.base.field();
    // Degree-two choices cannot change the class; deeper levels branch over c.
    let branch = if l.order() >= 2 { f.p() } else { 1 };
    for c in 0..branch {
        if *nodes >= NODE_BUDGET {
            return None;
        }
        let ec: Vec<DenseMatrix> = e.iter().zip(d0).map(|(x, d)| x.add(&d.scale(c))).collect();
        let mut next = l.clone();
        next.coeffs.push(ec);
        if let Some(found) = dfs(fo, d0, next, cap, nodes, best, deepest_fail) {
            return Some(found);
        }
    }
    None
}

/// Whether `X + tD` extends to order 3.
pub fn extends_to_order_three(fo: &FirstOrderSpace, d: &[DenseMatrix]) -> bool {
    extend_with(&Lift::first_order(&fo.module, d), fo).is_ok()
}

/// A lift over `F_p[t]` given by polynomial arrow matrices.
#[derive(Clone, Debug)]
pub struct PolyLift {
    /// Reduction at `t = 0`.
    pub base: Rep,
    /// `coeffs[i][a]`: coefficient of `t^i` for arrow `a`.
    pub coeffs: Vec<Vec<DenseMatrix>>,
}

impl PolyLift {
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn truncate(&self, order: usize) -> Lift {
        let mut coeffs: Vec<Vec<DenseMatrix>> = self.coeffs.iter().take(order).cloned().collect();
        while coeffs.len() < order {
            coeffs.push(self.base.arrows().iter().map(zeros_like).collect());
        }
        Lift {
            base: self.base.clone(),
            coeffs,
        }
    }
}

/// Evidence that `R(Λ, V) ≅ k[[t]]`.
#[derive(Clone, Debug)]
pub struct LiftCertificate {
    pub max_degree_checked: usize,
    pub witness: Option<crate::rep::RepMap>,
}

/// Checks a polynomial lift: relations vanish identically in `F_p[t]`, the
/// reduction is isomorphic to `v`, and the `t`-coefficient is not a coboundary.
pub fn verify_poly_lift(v: &Rep, lift: &PolyLift) -> Result<LiftCertificate, DeformationError> {
    let longest = v
        .algebra()
        .presentation()
        .relations
        .iter()
        .map(|r| r.max_len())
        .max()
        .unwrap_or(1);
    let order = lift.degree() * longest + 1;
    for (rel, cs) in eval_relations(&lift.base, &lift.coeffs, order) {
        if let Some(degree) = cs.iter().position(|m| !m.is_zero()) {
            return Err(DeformationError::RelationFailure { relation: rel, degree });
        }
    }
    let iso = is_isomorphic(&lift.base, v)?;
    if iso.verdict != IsoVerdict::Yes {
        return Err(DeformationError::NotIsomorphic(iso.reason));
    }
    let d = match lift.coeffs.get(1) {
        Some(d) => d.clone(),
        None => return Err(DeformationError::TrivialDirection),
    };
    let fo = first_order(&lift.base);
    if fo.is_coboundary(&d) {
        return Err(DeformationError::TrivialDirection);
    }
    Ok(LiftCertificate {
        max_degree_checked: order - 1,
        witness: iso.witness,
    })
}

/// Isomorphism type of a deformation ring, without evidence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RingType {
    #[serde(rename = "k")]
    K,
    #[serde(rename = "k[[t]]/(t^2)")]
    DualNumbers,
    #[serde(rename = "k[[t]]")]
    PowerSeries,
    #[serde(rename = "regular")]
    RegularLambda,
    #[serde(rename = "versal-only")]
    VersalOnly,
    #[serde(rename = "unknown")]
    Unknown,
}

impl RingType {
    /// `Some(true)` for finite-dimensional rings, `None` when not classified.
    pub fn finite_dimensional(self) -> Option<bool> {
        match self {
            RingType::K | RingType::DualNumbers | RingType::RegularLambda => Some(true),
            RingType::PowerSeries => Some(false),
            RingType::VersalOnly | RingType::Unknown => None,
        }
    }
}

impl fmt::Display for RingType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RingType::K => "k",
            RingType::DualNumbers => "k[[t]]/(t^2)",
            RingType::PowerSeries => "k[[t]]",
            RingType::RegularLambda => "regular",
            RingType::VersalOnly => "versal-only",
            RingType::Unknown => "unknown",
        })
    }
}

/// How a `k[[t]]` verdict was reached.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum PowerSeriesEvidence {
    Certified { certificate: String },
    VerifiedToOrder { order: usize },
}

#[derive(Clone, Debug, Serialize)]
pub struct DefReport {
    pub ring: RingType,
    pub stable_end_dim: usize,
    pub ext1: Option<usize>,
    /// Order `n` such that the nontrivial first-order lift does not extend to `t^n`.
    pub obstruction_order: Option<usize>,
    pub power_series: Option<PowerSeriesEvidence>,
    /// `j` with `V ≅ Ω^j(top Λ)` (negative: `Ω^{-j}(V) ≅ top Λ`).
    pub regular_orbit_step: Option<i64>,
    pub notes: Vec<String>,
}

impl DefReport {
    pub fn verdict_label(&self) -> String {
        match (&self.ring, &self.power_series) {
            (RingType::PowerSeries, Some(PowerSeriesEvidence::Certified { .. })) => "k[[t]] (certified)".into(),
            (RingType::PowerSeries, Some(PowerSeriesEvidence::VerifiedToOrder { order })) => {
                format!("k[[t]] (verified to order {order})")
            }
            (r, _) => r.to_string(),
        }
    }
}

/// Upper bound on `j` when searching `Ω`-translates of the simple top.
const REGULAR_ORBIT_STEPS: usize = 8;

fn regular_orbit_step(v: &Rep) -> Result<Option<i64>, DeformationError> {
    let alg = v.algebra();
    if alg.num_vertices() != 1 || !is_commutative(alg) {
        return Ok(None);
    }
    let top = Rep::simple(alg.clone(), 0);
    let mut x = top.clone();
    let mut y = v.clone();
    for j in 0..=REGULAR_ORBIT_STEPS {
        if x.dims() == v.dims() && is_isomorphic(&x, v)?.verdict == IsoVerdict::Yes {
            return Ok(Some(j as i64));
        }
        if j > 0 && y.dims() == top.dims() && is_isomorphic(&y, &top)?.verdict == IsoVerdict::Yes {
            return Ok(Some(-(j as i64)));
        }
        if x.dim() > v.dim() && y.is_zero() {
            break;
        }
        x = omega(&x)?;
        if !y.is_zero() {
            y = omega(&y)?;
        }
    }
    Ok(None)
}

fn is_commutative(a: &AlgebraTable) -> bool {
    let d = a.dim();
    (0..d).all(|i| (0..d).all(|j| a.basis_product(i, j) == a.basis_product(j, i)))
}

/// Classifies `R(Λ, V)`; a certificate lift, when given and valid, settles `k[[t]]`.
pub fn classify_defring(v: &Rep, cap: usize, certificate: Option<(&str, &PolyLift)>) -> Result<DefReport, DeformationError> {
    let sed = stable_end_dim(v)?;
    let mut report = DefReport {
        ring: RingType::Unknown,
        stable_end_dim: sed,
        ext1: None,
        obstruction_order: None,
        power_series: None,
        regular_orbit_step: None,
        notes: Vec::new(),
    };
    if sed != 1 {
        report.ring = RingType::VersalOnly;
        report.notes.push(format!("stable End has dimension {sed}; only a versal deformation ring exists"));
        return Ok(report);
    }
    let fo = first_order(v);
    report.ext1 = Some(fo.ext1);
    match fo.ext1 {
        0 => report.ring = RingType::K,
        1 => {
            let d0 = &fo.classes[0];
            if !extends_to_order_three(&fo, d0) {
                report.ring = RingType::DualNumbers;
                report.obstruction_order = Some(3);
                return Ok(report);
            }
            if let Some((id, lift)) = certificate {
                match verify_poly_lift(v, lift) {
                    Ok(_) => {
                        report.ring = RingType::PowerSeries;
                        report.power_series = Some(PowerSeriesEvidence::Certified { certificate: id.to_string() });
                        return Ok(report);
                    }
                    Err(e) => report.notes.push(format!("certificate {id} rejected: {e}")),
                }
            }
            let search = search_lift(&fo, d0, cap.max(3));
            match search.failed_at {
                None => {
                    report.ring = RingType::PowerSeries;
                    report.power_series = Some(PowerSeriesEvidence::VerifiedToOrder { order: search.reached });
                }
                Some(m) => {
                    report.ring = RingType::Unknown;
                    report.obstruction_order = Some(m);
                    report.notes.push(format!(
                        "lift fails greedily at order {m}; k[[t]]/(t^{}) unconfirmed",
                        m - 1
                    ));
                }
            }
        }
        n => {
            if let Some(j) = regular_orbit_step(v)? {
                report.ring = RingType::RegularLambda;
                report.regular_orbit_step = Some(j);
                report.notes.push(format!("Ext^1 has dimension {n}; module lies in the Omega-orbit of the simple top"));
            } else {
                report.notes.push(format!("Ext^1 has dimension {n}; no classification rule applies"));
            }
        }
    }
    Ok(report)
}

/// A polynomial entry: integer coefficients, or `"mu"` for the band parameter.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coeff {
    Int(i64),
    Sym(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum CertModule {
    String { word: String },
    Band { m: usize },
}

/// Shipped lift over `k[[t]]` for an (algebra, module) pair.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CertificateFile {
    pub algebra: String,
    pub module: CertModule,
    pub basis_vertices: Vec<String>,
    pub arrows: serde_json::Map<String, serde_json::Value>,
}

impl CertificateFile {
    pub fn parse(text: &str) -> Result<Self, DeformationError> {
        serde_json::from_str(text).map_err(|e| DeformationError::Certificate(e.to_string()))
    }

    /// Instantiates the lift; `mu` replaces the `"mu"` placeholder.
    pub fn instantiate(&self, alg: &Arc<AlgebraTable>, mu: Option<u32>) -> Result<PolyLift, DeformationError> {
        let bad = |m: String| DeformationError::Certificate(m);
        let q = alg.quiver();
        let f = alg.field();
        let n = self.basis_vertices.len();
        let vertex_of: Vec<usize> = self
            .basis_vertices
            .iter()
            .map(|v| q.vertex_index(v).ok_or_else(|| bad(format!("unknown vertex {v}"))))
            .collect::<Result<_, _>>()?;
        let mut degree_mats: Vec<Vec<DenseMatrix>> = Vec::new();
        let ensure = |degree_mats: &mut Vec<Vec<DenseMatrix>>, d: usize| {
            while degree_mats.len() <= d {
                degree_mats.push(vec![DenseMatrix::zeros(f, n, n); q.num_arrows()]);
            }
        };
        ensure(&mut degree_mats, 0);
        for (name, rows) in &self.arrows {
            let a = q.arrow_index(name).ok_or_else(|| bad(format!("unknown arrow {name}")))?;
            let rows = rows.as_array().ok_or_else(|| bad("arrow entries must be arrays".into()))?;
            if rows.len() != n {
                return Err(bad(format!("arrow {name} has {} rows, expected {n}", rows.len())));
            }
            for (r, row) in rows.iter().enumerate() {
                let row = row.as_array().ok_or_else(|| bad("rows must be arrays".into()))?;
                if row.len() != n {
                    return Err(bad(format!("arrow {name} row {r} has wrong length")));
                }
                for (c, entry) in row.iter().enumerate() {
                    let coeffs: Vec<Coeff> =
                        serde_json::from_value(entry.clone()).map_err(|e| bad(format!("entry ({r},{c}) of {name}: {e}")))?;
                    for (d, coeff) in coeffs.iter().enumerate() {
                        let x = match coeff {
                            Coeff::Int(x) => f.from_i64(*x),
                            Coeff::Sym(s) if s == "mu" => mu.ok_or_else(|| bad("certificate needs mu".into()))?,
                            Coeff::Sym(s) => return Err(bad(format!("unknown symbol {s}"))),
                        };
                        if x != 0 {
                            ensure(&mut degree_mats, d);
                            degree_mats[d][a].set(r, c, x);
                        }
                    }
                }
            }
        }
        let mut coeffs = Vec::new();
        let mut base = None;
        for totals in &degree_mats {
            let r = Rep::from_graded(alg.clone(), &vertex_of, totals)?;
            coeffs.push(r.arrows().to_vec());
            if base.is_none() {
                base = Some(r);
            }
        }
        Ok(PolyLift {
            base: base.expect("degree zero present"),
            coeffs,
        })
    }
}

const CERTIFICATES: [(&str, &str); 18] = [
    ("d3a_2-t2", include_str!("../data/certificates/d3a_2-t2.json")),
    ("d3b_21-t2", include_str!("../data/certificates/d3b_21-t2.json")),
    ("d3b_22-t2", include_str!("../data/certificates/d3b_22-t2.json")),
    ("d3d_2-t2", include_str!("../data/certificates/d3d_2-t2.json")),
    ("d3l-t2", include_str!("../data/certificates/d3l-t2.json")),
    ("d3q-t2", include_str!("../data/certificates/d3q-t2.json")),
    ("d1_0-band", include_str!("../data/certificates/d1_0-band.json")),
    ("d1_1-band", include_str!("../data/certificates/d1_1-band.json")),
    ("d2a_0-band", include_str!("../data/certificates/d2a_0-band.json")),
    ("d2a_1-band", include_str!("../data/certificates/d2a_1-band.json")),
    ("d3a_1-band", include_str!("../data/certificates/d3a_1-band.json")),
    ("d3a_2-band", include_str!("../data/certificates/d3a_2-band.json")),
    ("d3b_21-band", include_str!("../data/certificates/d3b_21-band.json")),
    ("d3b_22-band", include_str!("../data/certificates/d3b_22-band.json")),
    ("d3d_2-band", include_str!("../data/certificates/d3d_2-band.json")),
    ("d3k-band", include_str!("../data/certificates/d3k-band.json")),
    ("d3l-band", include_str!("../data/certificates/d3l-band.json")),
    ("d3q-band", include_str!("../data/certificates/d3q-band.json")),
];

/// Identifiers and parsed contents of the shipped certificates.
pub fn certificate_store() -> Vec<(&'static str, CertificateFile)> {
    CERTIFICATES
        .iter()
        .map(|(id, text)| (*id, CertificateFile::parse(text).expect("shipped certificate parses")))
        .collect()
}

/// What a module was built from, for certificate lookup.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModuleOrigin {
    String(Word),
    Band { mu: Mu, m: usize },
    Other,
}

/// Shipped certificate matching the module, instantiated.
pub fn find_certificate(alg: &Arc<AlgebraTable>, origin: &ModuleOrigin) -> Option<(String, PolyLift)> {
    let name = canonical_name(alg.name())?;
    let q = alg.quiver();
    for (id, cert) in certificate_store() {
        if canonical_name(&cert.algebra) != Some(name) {
            continue;
        }
        match (&cert.module, origin) {
            (CertModule::String { word }, ModuleOrigin::String(w)) => {
                let Ok(cw) = Word::parse(word, q) else { continue };
                if &cw == w || cw.inverse() == *w {
                    if let Ok(l) = cert.instantiate(alg, None) {
                        return Some((id.to_string(), l));
                    }
                }
            }
            (CertModule::Band { m }, ModuleOrigin::Band { mu: Mu::Finite(mu), m: mm }) if m == mm => {
                if let Ok(l) = cert.instantiate(alg, Some(*mu)) {
                    return Some((id.to_string(), l));
                }
            }
            _ => {}
        }
    }
    None
}

/// The band module with `μ` replaced by `μ + t`, as certificate data.
pub fn band_template(alg: &AlgebraTable) -> Option<CertificateFile> {
    let spec = band_of(alg).ok()?;
    let q = alg.quiver();
    // Entries equal to the marker become `μ + t`; the marker is not a field element.
    let (vertex_of, totals) = band_totals(alg, &spec.word, 1, 1);
    let first = spec.word.letters()[0].arrow();
    let mut arrows = serde_json::Map::new();
    for (a, t) in totals.iter().enumerate() {
        let rows: Vec<Vec<serde_json::Value>> = (0..t.rows())
            .map(|r| {
                (0..t.cols())
                    .map(|c| {
                        let x = t.get(r, c);
                        if a == first && r == 0 && c == 1 && x != 0 {
                            serde_json::json!(["mu", 1])
                        } else if x == 0 {
                            serde_json::json!([])
                        } else {
                            serde_json::json!([x])
                        }
                    })
                    .collect()
            })
            .collect();
        arrows.insert(q.arrow(a).name.clone(), serde_json::json!(rows));
    }
    Some(CertificateFile {
        algebra: spec.algebra,
        module: CertModule::Band { m: 1 },
        basis_vertices: vertex_of.iter().map(|&v| q.vertex_name(v).to_string()).collect(),
        arrows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::build_algebra;
    use crate::homological::ext1_dim;
    use crate::quiver::catalog;
    use crate::strings::{band_module, string_module};

    fn alg(name: &str, p: u32) -> Arc<AlgebraTable> {
        Arc::new(build_algebra(&catalog(name, p).unwrap(), p).unwrap())
    }

    #[test]
    fn ext1_examples() {
        let a = alg("D(2A)_0", 5);
        assert_eq!(first_order(&Rep::simple(a.clone(), 1)).ext1, 0);
        let mb = string_module(&a, &Word::parse("beta", a.quiver()).unwrap()).unwrap();
        assert_eq!(first_order(&mb).ext1, 1);
        let d = alg("D(1)_0", 5);
        let s0 = Rep::simple(d.clone(), 0);
        assert_eq!(first_order(&s0).ext1, 2);
        assert_eq!(ext1_dim(&s0, &s0).unwrap(), 2);
    }

    #[test]
    fn coboundary_dimension_formula() {
        let a = alg("D(3Q)", 5);
        let m = string_module(&a, &Word::parse("delta*rho^-1*beta*alpha^-1", a.quiver()).unwrap()).unwrap();
        let fo = first_order(&m);
        let end = crate::homological::hom_space(&m, &m).unwrap().dim();
        let sq: usize = m.dims().iter().map(|d| d * d).sum();
        assert_eq!(fo.coboundaries.len(), sq - end);
    }

    #[test]
    fn trivial_extension() {
        let a = alg("D(3K)", 5);
        let s = Rep::simple(a, 0);
        let l = extend_lift(&Lift::trivial(&s)).unwrap();
        assert_eq!(l.order(), 2);
        assert!(l.coeffs[1].iter().all(|m| m.is_zero()));
    }

    #[test]
    fn simple_of_d2a_is_obstructed() {
        let a = alg("D(2A)_0", 5);
        let s0 = Rep::simple(a, 0);
        let fo = first_order(&s0);
        assert_eq!(fo.ext1, 1);
        let obs = extend_lift(&Lift::first_order(&s0, &fo.classes[0])).unwrap_err();
        assert_eq!(obs.order, 3);
        let r = classify_defring(&s0, 10, None).unwrap();
        assert_eq!(r.ring, RingType::DualNumbers);
    }

    #[test]
    fn local_simple_is_regular() {
        let a = alg("D(1)_0", 5);
        let r = classify_defring(&Rep::simple(a, 0), 10, None).unwrap();
        assert_eq!(r.ring, RingType::RegularLambda);
        assert_eq!(r.regular_orbit_step, Some(0));
    }

    #[test]
    fn zero_t_part_is_trivial_direction() {
        let a = alg("D(1)_0", 5);
        let m = band_module(&a, Mu::Finite(2), 1).unwrap().rep;
        let lift = PolyLift {
            base: m.clone(),
            coeffs: vec![m.arrows().to_vec(), m.arrows().iter().map(zeros_like).collect()],
        };
        assert!(matches!(verify_poly_lift(&m, &lift), Err(DeformationError::TrivialDirection)));
    }

    #[test]
    fn band_lift_d1() {
        let a = alg("D(1)_0", 5);
        let m = band_module(&a, Mu::Finite(2), 1).unwrap();
        let (id, lift) = find_certificate(&a, &ModuleOrigin::Band { mu: Mu::Finite(2), m: 1 }).unwrap();
        assert_eq!(id, "d1_0-band");
        verify_poly_lift(&m.rep, &lift).unwrap();
        let r = classify_defring(&m.rep, 10, Some((&id, &lift))).unwrap();
        assert_eq!(r.ring, RingType::PowerSeries);
    }
}
