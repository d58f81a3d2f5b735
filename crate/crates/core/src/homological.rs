//! Hom spaces, maps through projectives, stable End, syzygies, Ext¹ and
//! Ω-orbits.

use thiserror::Error;

use crate::linalg::{DenseMatrix, RowSpace};
use crate::rep::{is_isomorphic, IsoVerdict, Rep, RepError, RepMap};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HomologicalError {
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error("the zero module has no syzygy")]
    ZeroModule,
}

/// A basis of `Hom(M, N)`.
#[derive(Clone, Debug)]
pub struct HomBasis {
    pub src_dims: Vec<usize>,
    pub dst_dims: Vec<usize>,
    pub basis: Vec<RepMap>,
}

impl HomBasis {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// `Hom(M, N)` together with the subspace of maps through projectives.
#[derive(Clone, Debug)]
pub struct StableHom {
    pub hom: HomBasis,
    pub projective: Vec<RepMap>,
}

impl StableHom {
    pub fn stable_dim(&self) -> usize {
        self.hom.dim() - self.projective.len()
    }
}

/// Which projective object the factorisations are routed through.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PhomRoute {
    /// Compositions `M → Λ → N`.
    Regular,
    /// Compositions `M → P_u → N` over all vertices.
    ProjectiveSum,
    /// Compositions `M → P(N) → N` through the projective cover of `N`.
    Cover,
}

#[derive(Clone, Debug)]
pub struct SyzygyResult {
    pub omega: Rep,
    /// Inclusion `Ω(V) → P`.
    pub inclusion: RepMap,
    /// Projective cover `P → V`.
    pub cover: RepMap,
    pub cover_projective: Rep,
    pub top: Vec<usize>,
}

/// All intertwiners `f` with `f_{e(ζ)} X_ζ = X'_ζ f_{s(ζ)}`.
pub fn hom_space(m: &Rep, n: &Rep) -> Result<HomBasis, RepError> {
    if !m.same_algebra(n) {
        return Err(RepError::AlgebraMismatch);
    }
    let alg = m.algebra();
    let f = m.field();
    let q = alg.quiver();
    let (dm, dn) = (m.dims(), n.dims());
    let mut offs = Vec::with_capacity(dm.len());
    let mut total = 0;
    for u in 0..dm.len() {
        offs.push(total);
        total += dn[u] * dm[u];
    }
    let var = |u: usize, r: usize, c: usize| offs[u] + r * dm[u] + c;
    let mut rows: Vec<Vec<u32>> = Vec::new();
    for (a, arr) in q.arrows().iter().enumerate() {
        let (s, e) = (arr.source, arr.target);
        let x = m.arrow(a);
        let y = n.arrow(a);
        // (F_e X - Y F_s)[r, c] for r < dn[e], c < dm[s].
        for r in 0..dn[e] {
            for c in 0..dm[s] {
                let mut row = vec![0u32; total];
                for k in 0..dm[e] {
                    let v = x.get(k, c);
                    if v != 0 {
                        let i = var(e, r, k);
                        row[i] = f.add(row[i], v);
                    }
                }
                for k in 0..dn[s] {
                    let v = y.get(r, k);
                    if v != 0 {
                        let i = var(s, k, c);
                        row[i] = f.sub(row[i], v);
                    }
                }
                if row.iter().any(|&v| v != 0) {
                    rows.push(row);
                }
            }
        }
    }
    let kernel = if rows.is_empty() {
        (0..total).map(|i| unit(total, i)).collect()
    } else {
        let mut mat = DenseMatrix::zeros(f, rows.len(), total);
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                mat.set(i, j, v);
            }
        }
        mat.kernel_basis()
    };
    let basis = kernel.iter().map(|v| RepMap::from_vector(f, dm, dn, v)).collect();
    Ok(HomBasis {
        src_dims: dm.to_vec(),
        dst_dims: dn.to_vec(),
        basis,
    })
}

fn unit(d: usize, i: usize) -> Vec<u32> {
    let mut v = vec![0u32; d];
    v[i] = 1;
    v
}

/// Independent spanning subset of the given maps.
fn span_of(maps: impl IntoIterator<Item = RepMap>, len: usize, field: crate::linalg::PrimeField) -> Vec<RepMap> {
    let mut space = RowSpace::new(field, len);
    let mut out = Vec::new();
    for m in maps {
        if space.insert(&m.to_vector()) {
            out.push(m);
        }
    }
    out
}

fn compositions_through(m: &Rep, n: &Rep, mid: &Rep) -> Result<Vec<RepMap>, RepError> {
    let into = hom_space(m, mid)?;
    let out = hom_space(mid, n)?;
    let len: usize = m.dims().iter().zip(n.dims()).map(|(a, b)| a * b).sum();
    let comps = out
        .basis
        .iter()
        .flat_map(|g| into.basis.iter().map(move |h| g.compose(h)))
        .collect::<Vec<_>>();
    Ok(span_of(comps, len, m.field()))
}

/// Maps `M → N` factoring through a projective, computed along `route`.
pub fn projective_maps(m: &Rep, n: &Rep, route: PhomRoute) -> Result<Vec<RepMap>, HomologicalError> {
    if !m.same_algebra(n) {
        return Err(RepError::AlgebraMismatch.into());
    }
    let alg = m.algebra().clone();
    let len: usize = m.dims().iter().zip(n.dims()).map(|(a, b)| a * b).sum();
    if m.is_zero() || n.is_zero() {
        return Ok(Vec::new());
    }
    match route {
        PhomRoute::Regular => Ok(compositions_through(m, n, &Rep::regular(alg))?),
        PhomRoute::ProjectiveSum => {
            let mut all = Vec::new();
            for u in 0..alg.num_vertices() {
                all.extend(compositions_through(m, n, &Rep::projective(alg.clone(), u))?);
            }
            Ok(span_of(all, len, m.field()))
        }
        PhomRoute::Cover => {
            let cov = syzygy(n)?;
            let into = hom_space(m, &cov.cover_projective)?;
            let comps = into.basis.iter().map(|h| cov.cover.compose(h));
            Ok(span_of(comps, len, m.field()))
        }
    }
}

pub fn stable_hom(m: &Rep, n: &Rep) -> Result<StableHom, HomologicalError> {
    let hom = hom_space(m, n)?;
    let projective = projective_maps(m, n, PhomRoute::Regular)?;
    Ok(StableHom { hom, projective })
}

/// `dim End(V) - dim PHom(V, V)`.
pub fn stable_end_dim(v: &Rep) -> Result<usize, HomologicalError> {
    Ok(stable_hom(v, v)?.stable_dim())
}

/// Basis vectors of `V` projecting onto its top, vertex by vertex.
fn top_generators(v: &Rep) -> Vec<Vec<Vec<u32>>> {
    let f = v.field();
    v.radical_bases()
        .iter()
        .enumerate()
        .map(|(u, rad)| {
            let d = v.dims()[u];
            let full = rad.hstack(&DenseMatrix::identity(f, d));
            full.independent_columns()
                .into_iter()
                .filter(|&c| c >= rad.cols())
                .map(|c| unit(d, c - rad.cols()))
                .collect()
        })
        .collect()
}

/// Projective cover and syzygy `Ω(V) = ker(P(V) → V)`.
pub fn syzygy(v: &Rep) -> Result<SyzygyResult, HomologicalError> {
    if v.is_zero() {
        return Err(HomologicalError::ZeroModule);
    }
    let alg = v.algebra().clone();
    let f = v.field();
    let nv = alg.num_vertices();
    let gens = top_generators(v);
    let top: Vec<usize> = gens.iter().map(Vec::len).collect();

    let mut cover_projective = Rep::zero_module(alg.clone());
    // Columns of the cover blocks, per target vertex, in direct-sum order.
    let mut cols: Vec<Vec<Vec<u32>>> = vec![Vec::new(); nv];
    for (u, gens_u) in gens.iter().enumerate() {
        for x in gens_u {
            cover_projective = cover_projective.direct_sum(&Rep::projective(alg.clone(), u))?;
            for (w, col) in cols.iter_mut().enumerate() {
                for b in alg.basis().iter().filter(|b| b.source == u && b.target == w) {
                    let img = if b.is_trivial() {
                        x.clone()
                    } else {
                        v.path_matrix(&b.letters).mul_vec(x)
                    };
                    col.push(img);
                }
            }
        }
    }
    let blocks: Vec<DenseMatrix> = (0..nv)
        .map(|w| {
            if cols[w].is_empty() {
                DenseMatrix::zeros(f, v.dims()[w], 0)
            } else {
                DenseMatrix::from_columns(f, v.dims()[w], &cols[w])
            }
        })
        .collect();
    let cover = RepMap { blocks };
    debug_assert!(cover_projective.is_hom(v, &cover));
    let kernels: Vec<DenseMatrix> = cover
        .blocks
        .iter()
        .enumerate()
        .map(|(w, b)| {
            let dp = cover_projective.dims()[w];
            let k = if b.rows() == 0 {
                (0..dp).map(|i| unit(dp, i)).collect()
            } else {
                b.kernel_basis()
            };
            if k.is_empty() {
                DenseMatrix::zeros(f, dp, 0)
            } else {
                DenseMatrix::from_columns(f, dp, &k)
            }
        })
        .collect();
    let omega = cover_projective.subrep(&kernels).expect("kernel is a submodule");
    Ok(SyzygyResult {
        omega,
        inclusion: RepMap { blocks: kernels },
        cover,
        cover_projective,
        top,
    })
}

pub fn omega(v: &Rep) -> Result<Rep, HomologicalError> {
    if v.is_zero() {
        return Ok(v.clone());
    }
    Ok(syzygy(v)?.omega)
}

/// `Ext¹(M, N) = dim Hom(ΩM, N) - dim PHom(ΩM, N)`.
pub fn ext1_dim(m: &Rep, n: &Rep) -> Result<usize, HomologicalError> {
    if !m.same_algebra(n) {
        return Err(RepError::AlgebraMismatch.into());
    }
    if m.is_zero() || n.is_zero() {
        return Ok(0);
    }
    let om = omega(m)?;
    Ok(stable_hom(&om, n)?.stable_dim())
}

#[derive(Clone, Debug)]
pub struct OmegaOrbit {
    /// `V, ΩV, Ω²V, ...` as computed.
    pub modules: Vec<Rep>,
    /// Smallest `k > 0` with `Ω^k V ≅ V`, if found.
    pub period: Option<usize>,
    /// Some iterate became zero (V projective).
    pub reached_zero: bool,
}

/// Iterates `Ω` up to `max_steps` times, stopping at the first iterate
/// isomorphic to an earlier one.
pub fn omega_orbit(v: &Rep, max_steps: usize) -> Result<OmegaOrbit, HomologicalError> {
    let mut modules = vec![v.clone()];
    for _ in 0..max_steps {
        let last = modules.last().unwrap();
        if last.is_zero() {
            return Ok(OmegaOrbit {
                modules,
                period: None,
                reached_zero: true,
            });
        }
        let next = omega(last)?;
        if next.is_zero() {
            modules.push(next);
            return Ok(OmegaOrbit {
                modules,
                period: None,
                reached_zero: true,
            });
        }
        for (i, earlier) in modules.iter().enumerate() {
            if earlier.dims() == next.dims() && is_isomorphic(earlier, &next)?.verdict == IsoVerdict::Yes {
                let k = modules.len() - i;
                return Ok(OmegaOrbit {
                    modules,
                    period: if i == 0 { Some(k) } else { None },
                    reached_zero: false,
                });
            }
        }
        modules.push(next);
    }
    Ok(OmegaOrbit {
        modules,
        period: None,
        reached_zero: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::build_algebra;
    use crate::quiver::catalog;
    use std::sync::Arc;

    fn alg(name: &str, p: u32) -> Arc<crate::algebra::AlgebraTable> {
        Arc::new(build_algebra(&catalog(name, p).unwrap(), p).unwrap())
    }

    #[test]
    fn hom_from_regular_counts_dimension() {
        let a = alg("D(3K)", 5);
        let reg = Rep::regular(a.clone());
        for u in 0..3 {
            let s = Rep::simple(a.clone(), u);
            assert_eq!(hom_space(&reg, &s).unwrap().dim(), 1);
        }
    }

    #[test]
    fn simples_over_d2a() {
        let a = alg("D(2A)_0", 5);
        let s0 = Rep::simple(a.clone(), 0);
        let s1 = Rep::simple(a.clone(), 1);
        assert_eq!(hom_space(&s0, &s0).unwrap().dim(), 1);
        assert_eq!(hom_space(&s0, &s1).unwrap().dim(), 0);
        assert_eq!(stable_end_dim(&s1).unwrap(), 1);
        assert_eq!(ext1_dim(&s1, &s1).unwrap(), 0);
        assert_eq!(ext1_dim(&s0, &s0).unwrap(), 1);
        let p0 = Rep::projective(a.clone(), 0);
        assert_eq!(stable_end_dim(&p0).unwrap(), 0);
        assert_eq!(stable_end_dim(&s0.direct_sum(&p0).unwrap()).unwrap(), 1);
    }

    #[test]
    fn d1_simple_syzygy() {
        let a = alg("D(1)_0", 5);
        let s0 = Rep::simple(a.clone(), 0);
        let syz = syzygy(&s0).unwrap();
        assert_eq!(syz.omega.dim(), 3);
        assert_eq!(ext1_dim(&s0, &s0).unwrap(), 2);
        let p0 = Rep::projective(a, 0);
        assert!(omega(&p0).unwrap().is_zero());
    }

    #[test]
    fn phom_routes_agree() {
        let a = alg("D(3B)_{2,1}", 5);
        let p1 = Rep::projective(a.clone(), 1);
        let (_, rad) = p1.top_and_radical();
        for (m, n) in [(&rad, &rad), (&rad, &p1), (&p1, &rad)] {
            let r = projective_maps(m, n, PhomRoute::Regular).unwrap().len();
            assert_eq!(r, projective_maps(m, n, PhomRoute::ProjectiveSum).unwrap().len());
            assert_eq!(r, projective_maps(m, n, PhomRoute::Cover).unwrap().len());
        }
    }

    #[test]
    fn open_orbit_of_simple_in_3k() {
        let a = alg("D(3K)", 5);
        let orbit = omega_orbit(&Rep::simple(a.clone(), 1), 12).unwrap();
        // S1 sits in a non-periodic component: the orbit never closes up.
        assert!(orbit.period.is_none() && !orbit.reached_zero);
        assert_eq!(orbit.modules.len(), 13);
        for m in &orbit.modules {
            for u in [0, 2] {
                let s = Rep::simple(a.clone(), u);
                assert_ne!(is_isomorphic(m, &s).unwrap().verdict, IsoVerdict::Yes);
            }
        }
    }
}
