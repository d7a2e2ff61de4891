mod common;

use evolalg::evolution::AlgebraElement;
use evolalg::fields::FieldError;
use evolalg::monomial::is_automorphism;
use evolalg::{
    algebra_isomorphism, build_algebra, rebase, recover_graph, EvolutionAlgebra, FieldDescriptor, FieldScalar,
    MonomialMap, ScalarMatrix, SimpleGraph,
};
use num_bigint::BigUint;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const PRIMES: [u32; 5] = [2, 3, 5, 7, 101];

fn field_strategy() -> impl Strategy<Value = FieldDescriptor> {
    prop_oneof![
        Just(FieldDescriptor::Rationals),
        prop::sample::select(PRIMES.to_vec()).prop_map(FieldDescriptor::Prime),
    ]
}

fn scalar(field: FieldDescriptor) -> impl Strategy<Value = FieldScalar> {
    (-50i64..50, 1i64..12).prop_map(move |(n, d)| match field {
        FieldDescriptor::Rationals => field.from_ratio(n, d),
        FieldDescriptor::Prime(_) => field.from_i64(n * d),
    })
}

fn field_and_scalars(k: usize) -> impl Strategy<Value = (FieldDescriptor, Vec<FieldScalar>)> {
    field_strategy().prop_flat_map(move |f| (Just(f), prop::collection::vec(scalar(f), k)))
}

fn matrix(field: FieldDescriptor, n: usize, rng: &mut ChaCha8Rng, density: f64) -> ScalarMatrix {
    ScalarMatrix::from_fn(field, n, n, |_, _| {
        if rng.gen_bool(density) {
            field.from_i64(rng.gen_range(-4..=4))
        } else {
            field.zero()
        }
    })
}

/// Determinant by the permutation expansion.
fn leibniz(m: &ScalarMatrix) -> FieldScalar {
    use itertools::Itertools;
    let n = m.rows();
    let f = m.field();
    (0..n).permutations(n).fold(f.zero(), |acc, p| {
        let inversions = (0..n).tuple_combinations().filter(|&(i, j)| p[i] > p[j]).count();
        let term = (0..n).fold(f.one(), |t, i| t * m.get(i, p[i]));
        if inversions % 2 == 0 {
            acc + term
        } else {
            acc - term
        }
    })
}

fn random_algebra(field: FieldDescriptor, n: usize, rng: &mut ChaCha8Rng) -> EvolutionAlgebra {
    EvolutionAlgebra::new(matrix(field, n, rng, 0.5), None).unwrap()
}

fn element(field: FieldDescriptor, n: usize, rng: &mut ChaCha8Rng) -> AlgebraElement {
    AlgebraElement { coords: (0..n).map(|_| field.from_i64(rng.gen_range(-6..=6))).collect() }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn field_axioms((f, s) in field_and_scalars(3)) {
        let (a, b, c) = (&s[0], &s[1], &s[2]);
        prop_assert_eq!(a + b, b + a);
        prop_assert_eq!(a * b, b * a);
        prop_assert_eq!(&(a + b) + c, a + &(b + c));
        prop_assert_eq!(&(a * b) * c, a * &(b * c));
        prop_assert_eq!(a * &(b + c), &(a * b) + &(a * c));
        prop_assert_eq!(a + &f.zero(), a.clone());
        prop_assert_eq!(a * &f.one(), a.clone());
        prop_assert!((a + &(-a)).is_zero());
        prop_assert_eq!(&(a - b) + b, a.clone());
        if a.is_zero() {
            prop_assert_eq!(a.inverse(), Err(FieldError::DivisionByZero));
        } else {
            prop_assert!((a * &a.inverse().unwrap()).is_one());
            prop_assert_eq!(&(b / a) * a, b.clone());
            if let FieldDescriptor::Prime(p) = f {
                prop_assert!(a.pow(&BigUint::from(p - 1)).is_one());
            }
        }
    }

    #[test]
    fn scalar_text_round_trip((f, s) in field_and_scalars(1)) {
        prop_assert_eq!(f.parse_scalar(&s[0].to_string()).unwrap(), s[0].clone());
    }

    #[test]
    fn determinant_matches_expansion_and_rank(f in field_strategy(), n in 0usize..5, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = matrix(f, n, &mut rng, 0.6);
        let det = m.determinant().unwrap();
        prop_assert_eq!(&det, &leibniz(&m));
        prop_assert_eq!(!det.is_zero(), m.rank() == n);
        let k = matrix(f, n, &mut rng, 0.6);
        prop_assert_eq!(m.mul_matrix(&k).unwrap().determinant().unwrap(), det * k.determinant().unwrap());
    }

    #[test]
    fn products_are_commutative_and_bilinear(f in field_strategy(), n in 1usize..6, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_algebra(f, n, &mut rng);
        let (u, v, w) = (element(f, n, &mut rng), element(f, n, &mut rng), element(f, n, &mut rng));
        let a = f.from_i64(rng.gen_range(-5..=5));
        prop_assert_eq!(x.multiply(&u, &v).unwrap(), x.multiply(&v, &u).unwrap());
        let lhs = x.multiply(&u.scale(&a).add(&v), &w).unwrap();
        let rhs = x.multiply(&u, &w).unwrap().scale(&a).add(&x.multiply(&v, &w).unwrap());
        prop_assert_eq!(lhs, rhs);
        for i in 0..n {
            for j in 0..n {
                let p = x.multiply(&AlgebraElement::basis(f, n, i), &AlgebraElement::basis(f, n, j)).unwrap();
                if i == j {
                    prop_assert_eq!(p.coords, x.matrix().column(i));
                } else {
                    prop_assert_eq!(p, AlgebraElement::zero(f, n));
                }
            }
        }
    }

    #[test]
    fn rebase_is_a_group_action(f in field_strategy(), n in 0usize..6, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_algebra(f, n, &mut rng);
        let m1 = common::random_monomial(&mut rng, n, f);
        let m2 = common::random_monomial(&mut rng, n, f);
        let twice = rebase(&rebase(&x, &m1).unwrap(), &m2).unwrap();
        prop_assert_eq!(&twice, &rebase(&x, &m1.compose(&m2)).unwrap());
        prop_assert_eq!(rebase(&x, &MonomialMap::identity(n, f)).unwrap(), x.clone());
        prop_assert_eq!(rebase(&rebase(&x, &m1).unwrap(), &m1.inverse()).unwrap(), x.clone());
        prop_assert_eq!(m1.compose(&m1.inverse()), MonomialMap::identity(n, f));
        prop_assert_eq!(rebase(&x, &m1).unwrap().is_regular(), x.is_regular());
    }

    #[test]
    fn automorphisms_fix_the_structure_matrix(f in field_strategy(), n in 0usize..5, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_algebra(f, n, &mut rng);
        let m = common::random_monomial(&mut rng, n, f);
        let fixed = rebase(&x, &m).unwrap().matrix() == x.matrix();
        prop_assert_eq!(is_automorphism(&x, &m).unwrap(), fixed);
    }

    #[test]
    fn rebased_algebras_are_isomorphic(f in field_strategy(), n in 0usize..7, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_algebra(f, n, &mut rng);
        prop_assume!(x.is_regular());
        let y = rebase(&x, &common::random_monomial(&mut rng, n, f)).unwrap();
        let w = algebra_isomorphism(&x, &y).unwrap().expect("rebased copy is isomorphic");
        let back = rebase(&x, &w).unwrap();
        prop_assert_eq!(back.matrix(), y.matrix());
    }

    #[test]
    fn functor_images_have_unit_determinant(seed in any::<u64>(), f in field_strategy()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = common::random_graph(&mut rng, 10);
        let x = build_algebra(&g, f);
        prop_assert_eq!(x.dim(), g.vertex_count() + g.edge_count());
        prop_assert!(x.matrix().determinant().unwrap().is_one());
        let (h, m) = recover_graph(&x).unwrap();
        prop_assert_eq!(h, g);
        prop_assert!(m.is_identity());
    }

    #[test]
    fn text_round_trips(seed in any::<u64>(), f in field_strategy()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = common::random_graph(&mut rng, 8);
        prop_assert_eq!(SimpleGraph::from_text(&g.to_text()).unwrap(), g.clone());
        let x = rebase(&build_algebra(&g, f), &common::random_monomial(&mut rng, g.vertex_count() + g.edge_count(), f)).unwrap();
        prop_assert_eq!(EvolutionAlgebra::from_text(&x.to_text()).unwrap(), x.clone());
        let m = common::random_monomial(&mut rng, 5, f);
        prop_assert_eq!(MonomialMap::from_text(&m.to_text(), f).unwrap(), m);
        let aut = evolalg::graph_automorphisms(&g);
        prop_assert_eq!(evolalg::PermGroup::from_text(&aut.to_text()).unwrap(), aut);
    }
}
