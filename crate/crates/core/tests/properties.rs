use std::sync::{Arc, OnceLock};

use proptest::prelude::*;

use dihedral_core::algebra::{build_algebra, AlgebraTable};
use dihedral_core::deformation::{
    extend_lift, extends_to_order_three, find_certificate, first_order, verify_poly_lift, Lift, ModuleOrigin,
};
use dihedral_core::homological::{ext1_dim, omega, stable_end_dim};
use dihedral_core::linalg::{DenseMatrix, PrimeField, TruncPoly};
use dihedral_core::quiver::{catalog, catalog_text, parse_presentation, Letter, Word, CATALOG_NAMES};
use dihedral_core::rep::{is_isomorphic, IsoVerdict, Rep, RepMap};
use dihedral_core::strings::{band_module, canonical, enumerate_strings, is_string, string_module, Mu};

fn field(p: u32) -> PrimeField {
    PrimeField::new(p).unwrap()
}

fn matrix(p: u32, max: usize) -> impl Strategy<Value = DenseMatrix> {
    (1..=max, 1..=max).prop_flat_map(move |(r, c)| {
        prop::collection::vec(0..p, r * c).prop_map(move |data| {
            let rows: Vec<Vec<i64>> = data.chunks(c).map(|ch| ch.iter().map(|&x| x as i64).collect()).collect();
            DenseMatrix::from_rows(field(p), &rows).unwrap()
        })
    })
}

fn poly(p: u32, order: usize) -> impl Strategy<Value = TruncPoly> {
    prop::collection::vec(0..p, order).prop_map(move |c| TruncPoly::new(field(p), order, &c))
}

/// Catalog algebras at their test characteristic, built once.
fn algebras() -> &'static Vec<Arc<AlgebraTable>> {
    static CELL: OnceLock<Vec<Arc<AlgebraTable>>> = OnceLock::new();
    CELL.get_or_init(|| {
        CATALOG_NAMES
            .iter()
            .map(|n| {
                let p = if catalog(n, 5).is_ok() { 5 } else { 2 };
                Arc::new(build_algebra(&catalog(n, p).unwrap(), p).unwrap())
            })
            .collect()
    })
}

fn strings_of(i: usize) -> &'static Vec<Word> {
    static CELL: OnceLock<Vec<Vec<Word>>> = OnceLock::new();
    &CELL.get_or_init(|| {
        algebras()
            .iter()
            .map(|a| enumerate_strings(a, 5).into_iter().filter(|w| !w.is_empty()).collect())
            .collect()
    })[i]
}

/// (algebra index, string module) over the catalog.
fn string_case() -> impl Strategy<Value = (usize, Word)> {
    (0..CATALOG_NAMES.len()).prop_flat_map(|i| {
        let words = strings_of(i).clone();
        (Just(i), prop::sample::select(words))
    })
}

fn random_word(a: &AlgebraTable, picks: &[usize]) -> Option<Word> {
    let q = a.quiver();
    let n = q.num_arrows();
    let mut letters: Vec<Letter> = Vec::new();
    for &k in picks {
        let l = if k % 2 == 0 { Letter::Direct(k / 2 % n) } else { Letter::Inverse(k / 2 % n) };
        if let Some(last) = letters.last() {
            if last.source(q) != l.target(q) {
                continue;
            }
        }
        letters.push(l);
    }
    (!letters.is_empty()).then(|| Word::from_letters(letters))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rank_plus_nullity(m in matrix(7, 6)) {
        prop_assert_eq!(m.rank() + m.kernel_basis().len(), m.cols());
        for k in m.kernel_basis() {
            prop_assert!(m.mul_vec(&k).iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn rref_is_idempotent(m in matrix(5, 6)) {
        let r = m.rref();
        let rr = r.matrix.rref();
        prop_assert_eq!(&rr.matrix, &r.matrix);
        prop_assert_eq!(rr.rank, r.rank);
        prop_assert_eq!(m.transpose().rank(), r.rank);
    }

    #[test]
    fn affine_solutions_solve(m in matrix(3, 5), seed in prop::collection::vec(0u32..3, 5)) {
        let x: Vec<u32> = seed.into_iter().take(m.cols()).chain(std::iter::repeat(0)).take(m.cols()).collect();
        let b = m.mul_vec(&x);
        let sol = m.solve_affine(&b).expect("consistent by construction");
        prop_assert_eq!(m.mul_vec(&sol.particular), b);
    }

    #[test]
    fn inverse_is_two_sided(m in matrix(13, 4)) {
        if let Some(inv) = m.inverse() {
            let n = m.rows();
            prop_assert_eq!(m.mul(&inv), DenseMatrix::identity(field(13), n));
            prop_assert_eq!(inv.mul(&m), DenseMatrix::identity(field(13), n));
        }
    }

    #[test]
    fn truncated_polynomials_form_a_commutative_ring(a in poly(5, 6), b in poly(5, 6), c in poly(5, 6)) {
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert!(a.add(&a.neg()).is_zero());
        prop_assert_eq!(a.mul(&b).reduce(3), a.reduce(3).mul(&b.reduce(3)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn words_round_trip_and_invert(i in 0..12usize, picks in prop::collection::vec(0usize..40, 1..9)) {
        let a = &algebras()[i];
        let q = a.quiver();
        if let Some(w) = random_word(a, &picks) {
            prop_assert_eq!(Word::parse(&w.display(q), q).unwrap(), w.clone());
            prop_assert_eq!(w.inverse().inverse(), w.clone());
            prop_assert_eq!(w.inverse().len(), w.len());
            prop_assert_eq!(canonical(&w), canonical(&w.inverse()));
            prop_assert_eq!(is_string(a, &w).is_ok(), is_string(a, &w.inverse()).is_ok());
        }
    }
}

#[test]
fn presentations_round_trip() {
    for name in CATALOG_NAMES {
        let pres = parse_presentation(catalog_text(name).unwrap()).unwrap();
        let again = parse_presentation(&pres.serialize()).unwrap();
        assert_eq!(again.serialize(), pres.serialize(), "{name}");
        assert_eq!(again.relations.len(), pres.relations.len());
    }
}

#[test]
fn enumerated_strings_are_valid_and_distinct() {
    for (i, a) in algebras().iter().enumerate() {
        let words = strings_of(i);
        for w in words {
            assert!(is_string(a, w).is_ok(), "{}", w.display(a.quiver()));
            assert_eq!(canonical(w), *w);
        }
        let distinct: std::collections::HashSet<&Word> = words.iter().collect();
        assert_eq!(distinct.len(), words.len());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn multiplication_is_associative_with_unit(i in 0..12usize, xs in prop::collection::vec(0u32..2, 66)) {
        let a = &algebras()[i];
        let d = a.dim();
        let p = a.field().p();
        let pick = |k: usize| -> Vec<u32> { (0..d).map(|j| xs[(k * 7 + j) % xs.len()] % p).collect() };
        let (x, y, z) = (pick(0), pick(1), pick(2));
        prop_assert_eq!(a.mul(&a.mul(&x, &y), &z), a.mul(&x, &a.mul(&y, &z)));
        prop_assert_eq!(a.mul(&a.one(), &x), x.clone());
        prop_assert_eq!(a.mul(&x, &a.one()), x);
    }

    #[test]
    fn strings_are_isomorphic_to_their_inverses((i, w) in string_case()) {
        let a = &algebras()[i];
        let m = string_module(a, &w).unwrap();
        let n = string_module(a, &w.inverse()).unwrap();
        prop_assert_eq!(is_isomorphic(&m, &n).unwrap().verdict, IsoVerdict::Yes);
        prop_assert!(m.validate().is_ok());
    }

    #[test]
    fn conjugation_preserves_isomorphism_type((i, w) in string_case(), seed in prop::collection::vec(0u32..5, 64)) {
        let a = &algebras()[i];
        let m = string_module(a, &w).unwrap();
        let f = a.field();
        // Unit lower-triangular blocks are always invertible.
        let mut k = 0;
        let blocks: Vec<DenseMatrix> = m.dims().iter().map(|&d| {
            let mut g = DenseMatrix::identity(f, d);
            for r in 0..d {
                for c in 0..r {
                    g.set(r, c, seed[k % seed.len()] % f.p());
                    k += 1;
                }
            }
            g
        }).collect();
        let c = m.conjugate(&RepMap { blocks });
        prop_assert_eq!(is_isomorphic(&m, &c).unwrap().verdict, IsoVerdict::Yes);
        prop_assert_eq!(stable_end_dim(&m).unwrap(), stable_end_dim(&c).unwrap());
    }

    #[test]
    fn omega_preserves_stable_end_and_ext((i, w) in string_case()) {
        let a = &algebras()[i];
        let m = string_module(a, &w).unwrap();
        let om = omega(&m).unwrap();
        prop_assert_eq!(stable_end_dim(&om).unwrap(), stable_end_dim(&m).unwrap());
        prop_assert_eq!(first_order(&m).ext1, ext1_dim(&m, &m).unwrap());
        prop_assert_eq!(ext1_dim(&om, &om).unwrap(), ext1_dim(&m, &m).unwrap());
    }

    #[test]
    fn obstruction_is_gauge_invariant((i, w) in string_case(), c in 1u32..5, seed in prop::collection::vec(0u32..5, 32)) {
        let a = &algebras()[i];
        let m = string_module(a, &w).unwrap();
        let fo = first_order(&m);
        prop_assume!(fo.ext1 == 1);
        let f = a.field();
        let c = c % f.p();
        prop_assume!(c != 0);
        let d0 = &fo.classes[0];
        let mut k = 0;
        let b: Vec<DenseMatrix> = m.dims().iter().map(|&d| {
            let mut g = DenseMatrix::zeros(f, d, d);
            for r in 0..d {
                for s in 0..d {
                    g.set(r, s, seed[k % seed.len()] % f.p());
                    k += 1;
                }
            }
            g
        }).collect();
        let db = fo.coboundary_of(&b);
        prop_assert!(fo.is_cocycle(&db) && fo.is_coboundary(&db));
        let shifted: Vec<DenseMatrix> = d0.iter().zip(&db).map(|(x, y)| x.scale(c).add(y)).collect();
        prop_assert_eq!(extends_to_order_three(&fo, &shifted), extends_to_order_three(&fo, d0));
    }
}

#[test]
fn certified_lifts_extend_at_every_order() {
    for (i, a) in algebras().iter().enumerate() {
        let name = CATALOG_NAMES[i];
        let p = a.field().p();
        let mu = if p == 2 { 1 } else { 2 };
        let m = band_module(a, Mu::Finite(mu), 1).unwrap().rep;
        if stable_end_dim(&m).unwrap() != 1 {
            continue;
        }
        let (_, lift) = find_certificate(a, &ModuleOrigin::Band { mu: Mu::Finite(mu), m: 1 }).unwrap();
        verify_poly_lift(&m, &lift).unwrap();
        for order in 1..=8 {
            let l = lift.truncate(order);
            assert!(l.is_valid(), "{name} order {order}");
            let next = extend_lift(&l).unwrap_or_else(|o| panic!("{name}: obstructed at {}", o.order));
            assert!(next.is_valid(), "{name} extension of order {order}");
        }
    }
}

#[test]
fn trivial_lift_is_valid() {
    let a = &algebras()[9];
    let s: Rep = Rep::simple(a.clone(), 1);
    assert!(Lift::trivial(&s).is_valid());
}
