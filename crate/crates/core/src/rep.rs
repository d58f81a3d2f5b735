//! Modules as quiver representations: a dimension vector and one block matrix
//! per arrow, of shape `d_{e(ζ)} × d_{s(ζ)}`.
//!
//! The total space is ordered vertex by vertex; `offset(u)` gives the start
//! of the block of vertex `u`.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::algebra::AlgebraTable;
use crate::homological::hom_space;
use crate::linalg::{DenseMatrix, PrimeField};
use crate::quiver::{ArrowId, VertexId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RepError {
    #[error("modules live over different algebras")]
    AlgebraMismatch,
    #[error("bad shape: {0}")]
    Shape(String),
    #[error("relation `{relation}` does not vanish")]
    RelationViolated { relation: String },
    #[error("bad module JSON: {0}")]
    Json(String),
}

/// A left `Λ`-module given by its representation.
#[derive(Clone, Debug)]
pub struct Rep {
    algebra: Arc<AlgebraTable>,
    dims: Vec<usize>,
    arrows: Vec<DenseMatrix>,
}

/// A module homomorphism, one block per vertex of shape `d'_u × d_u`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepMap {
    pub blocks: Vec<DenseMatrix>,
}

/// First relation that fails, with its evaluated matrix.
#[derive(Clone, Debug)]
pub struct Violation {
    pub relation: String,
    pub value: DenseMatrix,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IsoVerdict {
    Yes,
    No,
    Inconclusive,
}

#[derive(Clone, Debug)]
pub struct IsoResult {
    pub verdict: IsoVerdict,
    pub witness: Option<RepMap>,
    pub reason: String,
}

impl RepMap {
    pub fn compose(&self, first: &RepMap) -> RepMap {
        RepMap {
            blocks: self.blocks.iter().zip(&first.blocks).map(|(a, b)| a.mul(b)).collect(),
        }
    }

    pub fn is_invertible(&self) -> bool {
        self.blocks.iter().all(|b| b.is_invertible())
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.iter().all(|b| b.is_zero())
    }

    /// Flattened block entries, vertex by vertex in row-major order.
    pub fn to_vector(&self) -> Vec<u32> {
        self.blocks.iter().flat_map(|b| b.data().to_vec()).collect()
    }

    pub fn from_vector(field: PrimeField, src: &[usize], dst: &[usize], v: &[u32]) -> RepMap {
        let mut pos = 0;
        let blocks = src
            .iter()
            .zip(dst)
            .map(|(&ds, &dt)| {
                let mut b = DenseMatrix::zeros(field, dt, ds);
                for r in 0..dt {
                    for c in 0..ds {
                        b.set(r, c, v[pos]);
                        pos += 1;
                    }
                }
                b
            })
            .collect();
        RepMap { blocks }
    }

    /// The map as one matrix on the total spaces.
    pub fn total(&self) -> DenseMatrix {
        let field = self.blocks[0].field();
        let rows: usize = self.blocks.iter().map(|b| b.rows()).sum();
        let cols: usize = self.blocks.iter().map(|b| b.cols()).sum();
        let mut out = DenseMatrix::zeros(field, rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in &self.blocks {
            for r in 0..b.rows() {
                for c in 0..b.cols() {
                    out.set(r0 + r, c0 + c, b.get(r, c));
                }
            }
            r0 += b.rows();
            c0 += b.cols();
        }
        out
    }
}

impl Rep {
    /// Builds a representation from block matrices; checks shapes only.
    pub fn new(algebra: Arc<AlgebraTable>, dims: Vec<usize>, arrows: Vec<DenseMatrix>) -> Result<Self, RepError> {
        let q = algebra.quiver();
        if dims.len() != q.num_vertices() || arrows.len() != q.num_arrows() {
            return Err(RepError::Shape("wrong number of vertices or arrows".into()));
        }
        for (a, m) in arrows.iter().enumerate() {
            let arr = q.arrow(a);
            if m.rows() != dims[arr.target] || m.cols() != dims[arr.source] {
                return Err(RepError::Shape(format!(
                    "arrow {} must be {}x{}, got {}x{}",
                    arr.name,
                    dims[arr.target],
                    dims[arr.source],
                    m.rows(),
                    m.cols()
                )));
            }
            if m.field() != algebra.field() {
                return Err(RepError::Shape("field mismatch".into()));
            }
        }
        Ok(Self { algebra, dims, arrows })
    }

    /// Like `new`, additionally requiring every relation to vanish.
    pub fn checked(algebra: Arc<AlgebraTable>, dims: Vec<usize>, arrows: Vec<DenseMatrix>) -> Result<Self, RepError> {
        let r = Self::new(algebra, dims, arrows)?;
        match r.validate() {
            Ok(()) => Ok(r),
            Err(v) => Err(RepError::RelationViolated { relation: v.relation }),
        }
    }

    /// Builds a representation from total-space matrices and a vertex label
    /// for each basis vector; basis vectors keep their relative order within
    /// each vertex block.
    pub fn from_graded(algebra: Arc<AlgebraTable>, vertex_of: &[VertexId], totals: &[DenseMatrix]) -> Result<Self, RepError> {
        let nv = algebra.num_vertices();
        let field = algebra.field();
        let mut dims = vec![0usize; nv];
        let mut local = Vec::with_capacity(vertex_of.len());
        for &v in vertex_of {
            if v >= nv {
                return Err(RepError::Shape(format!("vertex {v} out of range")));
            }
            local.push(dims[v]);
            dims[v] += 1;
        }
        let q = algebra.quiver();
        let mut arrows = Vec::with_capacity(q.num_arrows());
        for (a, t) in totals.iter().enumerate() {
            let arr = q.arrow(a);
            let mut m = DenseMatrix::zeros(field, dims[arr.target], dims[arr.source]);
            for r in 0..t.rows() {
                for c in 0..t.cols() {
                    let x = t.get(r, c);
                    if x == 0 {
                        continue;
                    }
                    if vertex_of[r] != arr.target || vertex_of[c] != arr.source {
                        return Err(RepError::Shape(format!(
                            "arrow {} has an entry at ({r},{c}) outside its vertex block",
                            arr.name
                        )));
                    }
                    m.set(local[r], local[c], x);
                }
            }
            arrows.push(m);
        }
        Self::new(algebra, dims, arrows)
    }

    pub fn algebra(&self) -> &Arc<AlgebraTable> {
        &self.algebra
    }

    pub fn field(&self) -> PrimeField {
        self.algebra.field()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn arrow(&self, a: ArrowId) -> &DenseMatrix {
        &self.arrows[a]
    }

    pub fn arrows(&self) -> &[DenseMatrix] {
        &self.arrows
    }

    pub fn offset(&self, u: VertexId) -> usize {
        self.dims[..u].iter().sum()
    }

    pub fn same_algebra(&self, other: &Rep) -> bool {
        Arc::ptr_eq(&self.algebra, &other.algebra)
            || (self.algebra.name() == other.algebra.name()
                && self.algebra.field() == other.algebra.field()
                && self.algebra.presentation() == other.algebra.presentation())
    }

    fn check_same(&self, other: &Rep) -> Result<(), RepError> {
        if self.same_algebra(other) {
            Ok(())
        } else {
            Err(RepError::AlgebraMismatch)
        }
    }

    /// Block matrix of a nonempty path, `X_{w1} ... X_{wn}`.
    pub fn path_matrix(&self, letters: &[ArrowId]) -> DenseMatrix {
        let mut acc = self.arrows[letters[0]].clone();
        for &a in &letters[1..] {
            acc = acc.mul(&self.arrows[a]);
        }
        acc
    }

    /// Arrow action on the total space.
    pub fn total_arrow(&self, a: ArrowId) -> DenseMatrix {
        let arr = self.algebra.quiver().arrow(a);
        self.embed_block(arr.target, arr.source, &self.arrows[a])
    }

    fn embed_block(&self, tu: VertexId, su: VertexId, m: &DenseMatrix) -> DenseMatrix {
        let n = self.dim();
        let mut out = DenseMatrix::zeros(self.field(), n, n);
        let (r0, c0) = (self.offset(tu), self.offset(su));
        for r in 0..m.rows() {
            for c in 0..m.cols() {
                out.set(r0 + r, c0 + c, m.get(r, c));
            }
        }
        out
    }

    pub fn vertex_projector(&self, u: VertexId) -> DenseMatrix {
        let id = DenseMatrix::identity(self.field(), self.dims[u]);
        self.embed_block(u, u, &id)
    }

    /// Action of the algebra element `x` (coordinates in the path basis) on the total space.
    pub fn element_action(&self, x: &[u32]) -> DenseMatrix {
        let f = self.field();
        let n = self.dim();
        let mut out = DenseMatrix::zeros(f, n, n);
        for (i, &c) in x.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let b = &self.algebra.basis()[i];
            let m = if b.is_trivial() {
                self.vertex_projector(b.source)
            } else {
                self.embed_block(b.target, b.source, &self.path_matrix(&b.letters))
            };
            out = out.add(&m.scale(c));
        }
        out
    }

    /// Checks every relation; returns the first nonvanishing one.
    pub fn validate(&self) -> Result<(), Violation> {
        let f = self.field();
        let q = self.algebra.quiver();
        for rel in &self.algebra.presentation().relations {
            let s = rel.source(q);
            let t = rel.target(q);
            let mut acc = DenseMatrix::zeros(f, self.dims[t], self.dims[s]);
            for term in rel.terms() {
                let c = f.from_i64(term.coeff);
                if c != 0 {
                    acc = acc.add(&self.path_matrix(term.path.letters()).scale(c));
                }
            }
            if !acc.is_zero() {
                return Err(Violation {
                    relation: rel.display(q),
                    value: acc,
                });
            }
        }
        Ok(())
    }

    pub fn zero_module(algebra: Arc<AlgebraTable>) -> Rep {
        let nv = algebra.num_vertices();
        Self::with_zero_arrows(algebra, vec![0; nv])
    }

    fn with_zero_arrows(algebra: Arc<AlgebraTable>, dims: Vec<usize>) -> Rep {
        let f = algebra.field();
        let arrows = algebra
            .quiver()
            .arrows()
            .iter()
            .map(|a| DenseMatrix::zeros(f, dims[a.target], dims[a.source]))
            .collect();
        Rep { algebra, dims, arrows }
    }

    /// The simple module `S_u`.
    pub fn simple(algebra: Arc<AlgebraTable>, u: VertexId) -> Rep {
        let mut dims = vec![0; algebra.num_vertices()];
        dims[u] = 1;
        Self::with_zero_arrows(algebra, dims)
    }

    /// Left module spanned by the given basis indices of `Λ`, which must be
    /// closed under left multiplication (e.g. all paths starting at `u`).
    fn from_basis_subset(algebra: Arc<AlgebraTable>, members: &[usize]) -> Rep {
        let vertex_of: Vec<VertexId> = members.iter().map(|&i| algebra.basis()[i].target).collect();
        let pos = |i: usize| members.iter().position(|&m| m == i);
        let n = members.len();
        let f = algebra.field();
        let totals: Vec<DenseMatrix> = (0..algebra.quiver().num_arrows())
            .map(|a| {
                let mut m = DenseMatrix::zeros(f, n, n);
                for (c, &bi) in members.iter().enumerate() {
                    let prod = algebra.mul(algebra.arrow_element(a), &unit(algebra.dim(), bi));
                    for (j, &x) in prod.iter().enumerate() {
                        if x != 0 {
                            let r = pos(j).expect("subset closed under left multiplication");
                            m.set(r, c, x);
                        }
                    }
                }
                m
            })
            .collect();
        Self::from_graded(algebra, &vertex_of, &totals).expect("structure constants respect grading")
    }

    /// The indecomposable projective `P_u = Λe_u`.
    pub fn projective(algebra: Arc<AlgebraTable>, u: VertexId) -> Rep {
        let members: Vec<usize> = (0..algebra.dim()).filter(|&i| algebra.basis()[i].source == u).collect();
        Self::from_basis_subset(algebra, &members)
    }

    /// The regular module `Λ`, basis in path order.
    pub fn regular(algebra: Arc<AlgebraTable>) -> Rep {
        let members: Vec<usize> = (0..algebra.dim()).collect();
        Self::from_basis_subset(algebra, &members)
    }

    pub fn direct_sum(&self, other: &Rep) -> Result<Rep, RepError> {
        self.check_same(other)?;
        let f = self.field();
        let dims: Vec<usize> = self.dims.iter().zip(&other.dims).map(|(a, b)| a + b).collect();
        let arrows = self
            .arrows
            .iter()
            .zip(&other.arrows)
            .map(|(a, b)| {
                let top = a.hstack(&DenseMatrix::zeros(f, a.rows(), b.cols()));
                let bot = DenseMatrix::zeros(f, b.rows(), a.cols()).hstack(b);
                top.vstack(&bot)
            })
            .collect();
        Ok(Rep {
            algebra: self.algebra.clone(),
            dims,
            arrows,
        })
    }

    /// Submodule spanned per vertex by the columns of `bases[u]` (each of full
    /// column rank); `None` if the span is not invariant.
    pub fn subrep(&self, bases: &[DenseMatrix]) -> Option<Rep> {
        let f = self.field();
        let q = self.algebra.quiver();
        let lefts: Vec<DenseMatrix> = bases.iter().map(|b| b.left_inverse().expect("independent columns")).collect();
        let dims: Vec<usize> = bases.iter().map(|b| b.cols()).collect();
        let mut arrows = Vec::new();
        for (a, x) in self.arrows.iter().enumerate() {
            let arr = q.arrow(a);
            let img = x.mul(&bases[arr.source]);
            let coords = lefts[arr.target].mul(&img);
            if bases[arr.target].mul(&coords) != img {
                return None;
            }
            arrows.push(if dims[arr.target] == 0 || dims[arr.source] == 0 {
                DenseMatrix::zeros(f, dims[arr.target], dims[arr.source])
            } else {
                coords
            });
        }
        Some(Rep {
            algebra: self.algebra.clone(),
            dims,
            arrows,
        })
    }

    /// Quotient by the invariant subspace spanned by `bases[u]`, together with
    /// the projection blocks.
    pub fn quotient(&self, bases: &[DenseMatrix]) -> (Rep, RepMap) {
        let f = self.field();
        let q = self.algebra.quiver();
        // Complete each basis to the whole space; the complement columns index the quotient.
        let mut proj = Vec::new();
        for (u, b) in bases.iter().enumerate() {
            let d = self.dims[u];
            let full = b.hstack(&DenseMatrix::identity(f, d));
            let piv = full.independent_columns();
            let comp: Vec<usize> = piv.iter().copied().filter(|&c| c >= b.cols()).collect();
            let rows: Vec<usize> = (0..d).collect();
            let change = full.select(&rows, &piv);
            let inv = change.inverse().expect("completed basis");
            // Coordinates on the complement part give the projection.
            let k = b.cols();
            let prow: Vec<usize> = (k..d).collect();
            let cols: Vec<usize> = (0..d).collect();
            debug_assert_eq!(comp.len(), d - k);
            proj.push(inv.select(&prow, &cols));
        }
        let dims: Vec<usize> = proj.iter().map(|p| p.rows()).collect();
        let mut arrows = Vec::new();
        for (a, x) in self.arrows.iter().enumerate() {
            let arr = q.arrow(a);
            // Lift quotient basis vectors by right inverse of the projection.
            let lift = right_inverse(&proj[arr.source]);
            let m = proj[arr.target].mul(x).mul(&lift);
            arrows.push(if dims[arr.target] == 0 || dims[arr.source] == 0 {
                DenseMatrix::zeros(f, dims[arr.target], dims[arr.source])
            } else {
                m
            });
        }
        (
            Rep {
                algebra: self.algebra.clone(),
                dims,
                arrows,
            },
            RepMap { blocks: proj },
        )
    }

    /// Radical basis per vertex: column space of all arrows ending there.
    pub fn radical_bases(&self) -> Vec<DenseMatrix> {
        let f = self.field();
        let q = self.algebra.quiver();
        (0..self.dims.len())
            .map(|u| {
                let mut m = DenseMatrix::zeros(f, self.dims[u], 0);
                for (a, x) in self.arrows.iter().enumerate() {
                    if q.arrow(a).target == u {
                        m = m.hstack(x);
                    }
                }
                m.column_space()
            })
            .collect()
    }

    /// Top multiplicities and the radical as a submodule.
    pub fn top_and_radical(&self) -> (Vec<usize>, Rep) {
        let bases = self.radical_bases();
        let top = self.dims.iter().zip(&bases).map(|(d, b)| d - b.cols()).collect();
        let rad = self.subrep(&bases).expect("radical is a submodule");
        (top, rad)
    }

    /// Socle multiplicities: per vertex, the common kernel of all arrows leaving it.
    pub fn socle_multiplicities(&self) -> Vec<usize> {
        let f = self.field();
        let q = self.algebra.quiver();
        (0..self.dims.len())
            .map(|u| {
                let mut m = DenseMatrix::zeros(f, 0, self.dims[u]);
                for (a, x) in self.arrows.iter().enumerate() {
                    if q.arrow(a).source == u {
                        m = m.vstack(x);
                    }
                }
                self.dims[u] - m.rank()
            })
            .collect()
    }

    pub fn identity_map(&self) -> RepMap {
        RepMap {
            blocks: self.dims.iter().map(|&d| DenseMatrix::identity(self.field(), d)).collect(),
        }
    }

    /// Applies `φ` and checks it intertwines `self` and `other`.
    pub fn is_hom(&self, other: &Rep, phi: &RepMap) -> bool {
        let q = self.algebra.quiver();
        self.arrows.iter().enumerate().all(|(a, x)| {
            let arr = q.arrow(a);
            phi.blocks[arr.target].mul(x) == other.arrows[a].mul(&phi.blocks[arr.source])
        })
    }

    /// Transports the structure along invertible vertex blocks: `g X g⁻¹`.
    pub fn conjugate(&self, g: &RepMap) -> Rep {
        let q = self.algebra.quiver();
        let inv: Vec<DenseMatrix> = g.blocks.iter().map(|b| b.inverse().expect("invertible")).collect();
        let arrows = self
            .arrows
            .iter()
            .enumerate()
            .map(|(a, x)| {
                let arr = q.arrow(a);
                g.blocks[arr.target].mul(x).mul(&inv[arr.source])
            })
            .collect();
        Rep {
            algebra: self.algebra.clone(),
            dims: self.dims.clone(),
            arrows,
        }
    }

    /// `{algebra, p, dims: {vertex: n}, arrows: {name: [[...]]}}`.
    pub fn to_json(&self) -> Value {
        let q = self.algebra.quiver();
        let mut dims = Map::new();
        for (u, &d) in self.dims.iter().enumerate() {
            dims.insert(q.vertex_name(u).to_string(), json!(d));
        }
        let mut arrows = Map::new();
        for (a, x) in self.arrows.iter().enumerate() {
            arrows.insert(q.arrow(a).name.clone(), json!(x.to_rows()));
        }
        json!({
            "algebra": self.algebra.name(),
            "p": self.field().p(),
            "dims": dims,
            "arrows": arrows,
        })
    }

    pub fn from_json(algebra: Arc<AlgebraTable>, v: &Value) -> Result<Rep, RepError> {
        let err = |m: &str| RepError::Json(m.to_string());
        let q = algebra.quiver().clone();
        if let Some(name) = v.get("algebra").and_then(Value::as_str) {
            if crate::quiver::canonical_name(name).unwrap_or(name) != algebra.name() {
                return Err(RepError::AlgebraMismatch);
            }
        }
        let dims_obj = v.get("dims").and_then(Value::as_object).ok_or_else(|| err("missing dims"))?;
        let mut dims = vec![0usize; q.num_vertices()];
        for (k, d) in dims_obj {
            let u = q.vertex_index(k).ok_or_else(|| err(&format!("unknown vertex {k}")))?;
            dims[u] = d.as_u64().ok_or_else(|| err("dims must be integers"))? as usize;
        }
        let arrows_obj = v.get("arrows").and_then(Value::as_object).ok_or_else(|| err("missing arrows"))?;
        let f = algebra.field();
        let mut arrows = Vec::new();
        for (a, arr) in q.arrows().iter().enumerate() {
            let (r, c) = (dims[arr.target], dims[arr.source]);
            let mut m = DenseMatrix::zeros(f, r, c);
            if let Some(rows) = arrows_obj.get(&arr.name) {
                let rows = rows.as_array().ok_or_else(|| err("arrow entries must be arrays"))?;
                if rows.len() != r && !(r == 0 && rows.is_empty()) {
                    return Err(RepError::Shape(format!("arrow {} has {} rows, expected {r}", arr.name, rows.len())));
                }
                for (i, row) in rows.iter().enumerate() {
                    let row = row.as_array().ok_or_else(|| err("rows must be arrays"))?;
                    if row.len() != c {
                        return Err(RepError::Shape(format!("arrow {} row {i} has wrong length", arr.name)));
                    }
                    for (j, x) in row.iter().enumerate() {
                        let x = x.as_i64().ok_or_else(|| err("entries must be integers"))?;
                        m.set(i, j, f.from_i64(x));
                    }
                }
            }
            let _ = a;
            arrows.push(m);
        }
        Rep::checked(algebra, dims, arrows)
    }
}

fn unit(d: usize, i: usize) -> Vec<u32> {
    let mut v = vec![0u32; d];
    v[i] = 1;
    v
}

/// Right inverse of a full-row-rank matrix.
pub(crate) fn right_inverse(m: &DenseMatrix) -> DenseMatrix {
    m.transpose().left_inverse().expect("full row rank").transpose()
}

/// Whether two modules are isomorphic; `Yes` carries an invertible witness.
pub fn is_isomorphic(r1: &Rep, r2: &Rep) -> Result<IsoResult, RepError> {
    r1.check_same(r2)?;
    let no = |reason: String| IsoResult {
        verdict: IsoVerdict::No,
        witness: None,
        reason,
    };
    if r1.dims != r2.dims {
        return Ok(no("dimension vectors differ".into()));
    }
    if r1.dim() == 0 {
        return Ok(IsoResult {
            verdict: IsoVerdict::Yes,
            witness: Some(r1.identity_map()),
            reason: "zero modules".into(),
        });
    }
    // Rank profile of every basis path.
    let alg = r1.algebra.clone();
    for b in alg.basis() {
        if b.is_trivial() {
            continue;
        }
        if r1.path_matrix(&b.letters).rank() != r2.path_matrix(&b.letters).rank() {
            return Ok(no(format!("rank of {} differs", b.display(alg.quiver()))));
        }
    }
    let h12 = hom_space(r1, r2)?;
    let h21 = hom_space(r2, r1)?;
    let e1 = hom_space(r1, r1)?;
    let e2 = hom_space(r2, r2)?;
    let dims = [h12.dim(), h21.dim(), e1.dim(), e2.dim()];
    if dims.iter().any(|&d| d != dims[0]) {
        return Ok(no(format!("Hom dimensions differ: {dims:?}")));
    }
    let basis = &h12.basis;
    let f = r1.field();
    let combine = |coeffs: &[u32]| -> RepMap {
        let mut blocks: Vec<DenseMatrix> = basis[0].blocks.iter().map(|b| DenseMatrix::zeros(f, b.rows(), b.cols())).collect();
        for (c, m) in coeffs.iter().zip(basis) {
            if *c != 0 {
                for (acc, b) in blocks.iter_mut().zip(&m.blocks) {
                    *acc = acc.add(&b.scale(*c));
                }
            }
        }
        RepMap { blocks }
    };
    let yes = |w: RepMap, reason: &str| IsoResult {
        verdict: IsoVerdict::Yes,
        witness: Some(w),
        reason: reason.to_string(),
    };
    for m in basis {
        if m.is_invertible() {
            return Ok(yes(m.clone(), "invertible basis homomorphism"));
        }
    }
    let h = basis.len();
    let mut rng = ChaCha8Rng::seed_from_u64(0x150);
    for _ in 0..64 {
        let coeffs: Vec<u32> = (0..h).map(|_| rng.gen_range(0..f.p())).collect();
        let m = combine(&coeffs);
        if m.is_invertible() {
            return Ok(yes(m, "random combination"));
        }
    }
    let total = (f.p() as u128).checked_pow(h as u32).unwrap_or(u128::MAX);
    if total <= 1_000_000 {
        let mut coeffs = vec![0u32; h];
        loop {
            let m = combine(&coeffs);
            if m.is_invertible() {
                return Ok(yes(m, "exhaustive search"));
            }
            let mut i = 0;
            while i < h {
                coeffs[i] += 1;
                if coeffs[i] < f.p() {
                    break;
                }
                coeffs[i] = 0;
                i += 1;
            }
            if i == h {
                break;
            }
        }
        return Ok(no("exhaustive search found no invertible homomorphism".into()));
    }
    Ok(IsoResult {
        verdict: IsoVerdict::Inconclusive,
        witness: None,
        reason: format!("Hom dimension {h} too large for exhaustive search"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::build_algebra;
    use crate::quiver::catalog;

    fn alg(name: &str, p: u32) -> Arc<AlgebraTable> {
        Arc::new(build_algebra(&catalog(name, p).unwrap(), p).unwrap())
    }

    #[test]
    fn simple_and_projective_validate() {
        let a = alg("D(3K)", 5);
        for u in 0..3 {
            assert!(Rep::simple(a.clone(), u).validate().is_ok());
            let p = Rep::projective(a.clone(), u);
            assert!(p.validate().is_ok());
            let (top, rad) = p.top_and_radical();
            let mut ind = vec![0; 3];
            ind[u] = 1;
            assert_eq!(top, ind);
            assert_eq!(rad.dim(), p.dim() - 1);
            assert_eq!(p.socle_multiplicities(), ind);
        }
    }

    #[test]
    fn violation_reported() {
        let a = alg("D(1)_0", 5);
        let f = a.field();
        let one = DenseMatrix::identity(f, 1);
        let r = Rep::new(a, vec![1], vec![one.clone(), one]).unwrap();
        let v = r.validate().unwrap_err();
        assert_eq!(v.relation, "alpha*alpha");
    }

    #[test]
    fn local_projective_is_regular() {
        let a = alg("D(1)_0", 5);
        let p = Rep::projective(a.clone(), 0);
        assert_eq!(p.dim(), 4);
        let (top, rad) = p.top_and_radical();
        assert_eq!(top, vec![1]);
        assert_eq!(rad.dim(), 3);
    }

    #[test]
    fn direct_sum_of_projectives() {
        let a = alg("D(2A)_0", 5);
        let s = Rep::projective(a.clone(), 0).direct_sum(&Rep::projective(a.clone(), 1)).unwrap();
        assert_eq!(s.dim(), a.dim());
        assert!(is_isomorphic(&s, &Rep::regular(a)).unwrap().verdict == IsoVerdict::Yes);
    }

    #[test]
    fn iso_basic() {
        let a = alg("D(2A)_0", 5);
        let s0 = Rep::simple(a.clone(), 0);
        let s1 = Rep::simple(a.clone(), 1);
        assert_eq!(is_isomorphic(&s0, &s1).unwrap().verdict, IsoVerdict::No);
        let r = is_isomorphic(&s0, &s0).unwrap();
        assert_eq!(r.verdict, IsoVerdict::Yes);
        assert!(r.witness.unwrap().is_invertible());
    }

    #[test]
    fn quotient_by_radical_is_top() {
        let a = alg("D(3A)_1", 5);
        let p = Rep::projective(a, 1);
        let (q, pi) = p.quotient(&p.radical_bases());
        assert_eq!(q.dims(), &[0, 1, 0]);
        assert!(p.is_hom(&q, &pi));
    }

    #[test]
    fn json_round_trip() {
        let a = alg("D(3Q)", 13);
        let p = Rep::projective(a.clone(), 2);
        let back = Rep::from_json(a, &p.to_json()).unwrap();
        assert_eq!(back.dims(), p.dims());
        assert_eq!(back.arrows(), p.arrows());
    }
}
