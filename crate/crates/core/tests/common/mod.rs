#![allow(dead_code)]

use std::collections::BTreeSet;

use evolalg::evolution::AlgebraElement;
use evolalg::{EvolutionAlgebra, FieldDescriptor, FieldScalar, MonomialMap, ScalarMatrix, SimpleGraph};
use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Smallest sorted edge list over all relabelings.
pub fn canonical_edges(n: usize, edges: &[(usize, usize)]) -> Vec<(usize, usize)> {
    (0..n)
        .permutations(n)
        .map(|p| {
            let mut e: Vec<(usize, usize)> = edges.iter().map(|&(u, v)| (p[u].min(p[v]), p[u].max(p[v]))).collect();
            e.sort_unstable();
            e
        })
        .min()
        .unwrap_or_default()
}

/// One representative per isomorphism class of graphs on exactly `n`
/// vertices, by exhaustive enumeration.
pub fn graph_classes(n: usize) -> Vec<SimpleGraph> {
    let pairs: Vec<(usize, usize)> = (0..n).tuple_combinations().collect();
    let mut seen = BTreeSet::new();
    for mask in 0u32..(1 << pairs.len()) {
        let edges: Vec<_> = (0..pairs.len()).filter(|&k| mask >> k & 1 == 1).map(|k| pairs[k]).collect();
        seen.insert(canonical_edges(n, &edges));
    }
    seen.into_iter().map(|e| SimpleGraph::new(n, &e).unwrap()).collect()
}

/// Classes on `0..=max` vertices.
pub fn classes_up_to(max: usize) -> Vec<SimpleGraph> {
    (0..=max).flat_map(graph_classes).collect()
}

pub fn random_graph(rng: &mut ChaCha8Rng, max_n: usize) -> SimpleGraph {
    let n = rng.gen_range(0..=max_n);
    let density: f64 = rng.gen_range(0.1..0.9);
    let edges: Vec<_> = (0..n).tuple_combinations().filter(|_| rng.gen_bool(density)).collect();
    SimpleGraph::new(n, &edges).unwrap()
}

pub fn random_monomial(rng: &mut ChaCha8Rng, n: usize, field: FieldDescriptor) -> MonomialMap {
    let mut sigma: Vec<usize> = (0..n).collect();
    sigma.shuffle(rng);
    let lambda = (0..n).map(|_| random_nonzero(rng, field)).collect();
    MonomialMap::new(sigma, lambda).unwrap()
}

pub fn random_nonzero(rng: &mut ChaCha8Rng, field: FieldDescriptor) -> FieldScalar {
    match field {
        FieldDescriptor::Prime(p) => field.from_i64(rng.gen_range(1..p as i64)),
        FieldDescriptor::Rationals => {
            let num = rng.gen_range(1..=9) * if rng.gen_bool(0.5) { 1 } else { -1 };
            field.from_ratio(num, rng.gen_range(1..=9))
        }
    }
}

pub fn preserves(g: &SimpleGraph, h: &SimpleGraph, p: &[usize]) -> bool {
    g.edge_count() == h.edge_count() && g.edges().iter().all(|&(u, v)| h.has_edge(p[u], p[v]))
}

/// All isomorphisms `g -> h` in lexicographic order.
pub fn isomorphisms(g: &SimpleGraph, h: &SimpleGraph) -> Vec<Vec<usize>> {
    let n = g.vertex_count();
    if n != h.vertex_count() {
        return Vec::new();
    }
    (0..n).permutations(n).filter(|p| preserves(g, h, p)).collect()
}

/// All automorphisms `(σ, λ)` of `x` over a prime field, by enumerating
/// every permutation and every scale vector and checking that the map
/// preserves each square `b_i²` through the algebra product.
pub fn enumerate_automorphisms(x: &EvolutionAlgebra) -> BTreeSet<(Vec<usize>, Vec<FieldScalar>)> {
    let f = x.field();
    let FieldDescriptor::Prime(p) = f else { panic!("prime field only") };
    let n = x.dim();
    let units: Vec<FieldScalar> = (1..p as i64).map(|v| f.from_i64(v)).collect();
    let image = |sigma: &[usize], lambda: &[FieldScalar], v: &AlgebraElement| {
        let mut out = AlgebraElement::zero(f, n);
        for i in 0..n {
            out.coords[sigma[i]] = &v.coords[i] * &lambda[i];
        }
        out
    };
    let mut out = BTreeSet::new();
    for sigma in (0..n).permutations(n) {
        for lambda in (0..n).map(|_| units.iter().cloned()).multi_cartesian_product() {
            let lambda: Vec<FieldScalar> = if n == 0 { Vec::new() } else { lambda };
            let ok = (0..n).all(|i| {
                let b = AlgebraElement::basis(f, n, i);
                let gb = image(&sigma, &lambda, &b);
                x.multiply(&gb, &gb).unwrap() == image(&sigma, &lambda, &x.multiply(&b, &b).unwrap())
            });
            if ok {
                out.insert((sigma.clone(), lambda));
            }
            if n == 0 {
                break;
            }
        }
    }
    if n == 0 {
        out.insert((Vec::new(), Vec::new()));
    }
    out
}

pub fn random_regular(rng: &mut ChaCha8Rng, field: FieldDescriptor, n: usize, density: f64) -> EvolutionAlgebra {
    let FieldDescriptor::Prime(p) = field else { unreachable!() };
    loop {
        let m = ScalarMatrix::from_fn(field, n, n, |_, _| {
            if rng.gen_bool(density) {
                field.from_i64(rng.gen_range(1..p as i64))
            } else {
                field.zero()
            }
        });
        let x = EvolutionAlgebra::new(m, None).unwrap();
        if x.is_regular() {
            return x;
        }
    }
}
