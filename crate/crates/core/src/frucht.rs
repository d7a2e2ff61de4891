//! Realizing a finite group as the automorphism group of a connected graph,
//! and through the functor as that of a regular evolution algebra.
//!
//! The Cayley digraph of the group on a greedy generating set is turned
//! into a simple graph by replacing each colored arc with a path carrying
//! two pendant tails of different lengths (the longer one nearer the head),
//! and each involution edge with a path carrying one tail. Tail lengths
//! encode the color. Every result is checked with the automorphism engine
//! before it is returned.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use thiserror::Error;

use crate::evolution::EvolutionAlgebra;
use crate::fields::{FieldDescriptor, FieldScalar};
use crate::functor::build_algebra;
use crate::graph::{graph_automorphisms, SimpleGraph};
use crate::groups::{
    cayley_digraph, group_from_permutations, group_isomorphic, minimal_generators, FiniteGroup, GroupError, CLOSURE_CAP,
};
use crate::monomial::{algebra_automorphisms, MonomialError, MonomialMap};

/// The first connected labeled graph on six vertices with trivial
/// automorphism group, ordered by edge count and then edge list.
pub const ASYMMETRIC6: &str = include_str!("../data/asymmetric6.graph");

/// Extra tail length tried once when a gadget graph fails verification.
pub const RETRY_OFFSET: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FruchtError {
    #[error("could not verify a realization of a group of order {order} (variants {variant} and {retry})")]
    RealizationFailed { order: usize, variant: usize, retry: usize },
    #[error("closure exceeds {0} elements")]
    ClosureTooLarge(usize),
    #[error("algebra is not regular")]
    NotRegular,
    #[error("more than {0} automorphisms")]
    GroupTooLarge(usize),
}

impl From<GroupError> for FruchtError {
    fn from(e: GroupError) -> Self {
        match e {
            GroupError::ClosureTooLarge(cap) => FruchtError::ClosureTooLarge(cap),
            GroupError::OrderTooLarge { cap, .. } => FruchtError::GroupTooLarge(cap),
            other => unreachable!("internally built groups are valid: {other}"),
        }
    }
}

impl From<MonomialError> for FruchtError {
    fn from(e: MonomialError) -> Self {
        match e {
            MonomialError::NotRegular => FruchtError::NotRegular,
            MonomialError::GroupTooLarge(cap) => FruchtError::GroupTooLarge(cap),
            other => unreachable!("automorphism search on a square algebra: {other}"),
        }
    }
}

/// A verified realization and the tail variant that produced it (which
/// differs from the requested one after a retry).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Realization {
    pub graph: SimpleGraph,
    pub variant: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub group_order: usize,
    pub aut_order: BigUint,
    pub isomorphic: bool,
    /// Distinct scales seen on automorphism generators and the kernel.
    pub scales: Vec<FieldScalar>,
    /// The automorphism group as an abstract table, when the orders agree.
    pub reconstructed: Option<FiniteGroup>,
}

pub fn asymmetric6() -> SimpleGraph {
    SimpleGraph::from_text(ASYMMETRIC6).expect("stored graph is valid")
}

struct Builder {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl Builder {
    fn vertex(&mut self) -> usize {
        self.n += 1;
        self.n - 1
    }

    fn edge(&mut self, u: usize, v: usize) {
        self.edges.push((u, v));
    }

    fn tail(&mut self, at: usize, len: usize) {
        let mut prev = at;
        for _ in 0..len {
            let x = self.vertex();
            self.edge(prev, x);
            prev = x;
        }
    }

    fn finish(self) -> SimpleGraph {
        SimpleGraph::new(self.n, &self.edges).expect("gadgets add fresh vertices only")
    }
}

/// The unverified candidate for variant `t`: group elements are vertices
/// `0..|G|`, gadget vertices follow in arc then edge order.
pub fn gadget_graph(g: &FiniteGroup, t: usize) -> SimpleGraph {
    if g.order() == 1 {
        let base = asymmetric6();
        let mut b = Builder { n: base.vertex_count(), edges: base.edges().to_vec() };
        b.tail(5, t);
        return b.finish();
    }
    let d = cayley_digraph(g, &minimal_generators(g)).expect("greedy set generates");
    let mut b = Builder { n: d.n, edges: Vec::new() };
    for &(from, to, color) in &d.arcs {
        let (x, y) = (b.vertex(), b.vertex());
        b.edge(from, x);
        b.edge(x, y);
        b.edge(y, to);
        b.tail(x, 2 * color + 1 + t);
        b.tail(y, 2 * color + 2 + t);
    }
    for &(u, v, color) in &d.edges {
        let c = b.vertex();
        b.edge(u, c);
        b.edge(c, v);
        b.tail(c, 2 * color + 1 + t);
    }
    b.finish()
}

fn verified(g: &FiniteGroup, h: &SimpleGraph) -> Result<bool, FruchtError> {
    if !h.is_connected() {
        return Ok(false);
    }
    let aut = graph_automorphisms(h);
    if *aut.order() != BigUint::from(g.order()) {
        return Ok(false);
    }
    let group = group_from_permutations(h.vertex_count(), aut.generators())?;
    Ok(group_isomorphic(&group, g)?)
}

/// A connected graph whose automorphism group is isomorphic to `g`. The
/// order-2 group at variant 0 is realized by a single edge.
pub fn realize(g: &FiniteGroup, t: usize) -> Result<Realization, FruchtError> {
    let candidate = |variant| {
        if g.order() == 2 && variant == 0 {
            SimpleGraph::new(2, &[(0, 1)]).expect("single edge")
        } else {
            gadget_graph(g, variant)
        }
    };
    for variant in [t, t + RETRY_OFFSET] {
        let graph = candidate(variant);
        if verified(g, &graph)? {
            return Ok(Realization { graph, variant });
        }
    }
    Err(FruchtError::RealizationFailed { order: g.order(), variant: t, retry: t + RETRY_OFFSET })
}

pub fn realize_graph(g: &FiniteGroup, t: usize) -> Result<SimpleGraph, FruchtError> {
    realize(g, t).map(|r| r.graph)
}

pub fn realize_algebra(g: &FiniteGroup, field: FieldDescriptor, t: usize) -> Result<EvolutionAlgebra, FruchtError> {
    Ok(build_algebra(&realize_graph(g, t)?, field))
}

/// Computes the automorphism group of `x` and compares it with `g` as an
/// abstract group. The table is rebuilt from permutation parts when the
/// rescaling kernel is trivial, and from the full monomial maps otherwise.
pub fn verify_realization(g: &FiniteGroup, x: &EvolutionAlgebra) -> Result<VerificationReport, FruchtError> {
    if !x.is_regular() {
        return Err(FruchtError::NotRegular);
    }
    let auts = algebra_automorphisms(x)?;
    let scales: Vec<FieldScalar> = auts
        .generators
        .iter()
        .chain(&auts.kernel)
        .flat_map(|m| m.lambda().iter().cloned())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let aut_order = auts.order().clone();
    let mut report =
        VerificationReport { group_order: g.order(), aut_order, isomorphic: false, scales, reconstructed: None };
    if report.aut_order != BigUint::from(g.order()) {
        return Ok(report);
    }
    let group = if auts.kernel.len() == 1 {
        group_from_permutations(x.dim(), auts.permutations.generators())?
    } else {
        table_of(&auts.elements(CLOSURE_CAP)?)
    };
    report.isomorphic = group_isomorphic(&group, g)?;
    report.reconstructed = Some(group);
    Ok(report)
}

/// Multiplication table of a closed list of monomial maps whose first
/// element is the identity.
fn table_of(elements: &[MonomialMap]) -> FiniteGroup {
    let index: std::collections::HashMap<&MonomialMap, usize> =
        elements.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let rows: Vec<Vec<usize>> =
        elements.iter().map(|a| elements.iter().map(|b| index[&a.compose(b)]).collect()).collect();
    FiniteGroup::from_table(&rows).expect("closed under composition")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evolution::EvolutionAlgebra;
    use crate::fields::ScalarMatrix;
    use crate::graph::brute_force_automorphisms;
    use crate::groups::{cyclic, direct_product, symmetric3};
    use itertools::Itertools;

    const Q: FieldDescriptor = FieldDescriptor::Rationals;

    #[test]
    fn stored_graph_is_first_asymmetric_connected_graph() {
        let all: Vec<(usize, usize)> = (0..6).tuple_combinations().collect();
        let first = (0..=all.len())
            .flat_map(|k| all.iter().copied().combinations(k))
            .map(|edges| SimpleGraph::new(6, &edges).unwrap())
            .find(|g| g.is_connected() && *brute_force_automorphisms(g).unwrap().order() == BigUint::from(1u32))
            .unwrap();
        assert_eq!(first, asymmetric6());
    }

    #[test]
    fn trivial_group() {
        let g = realize_graph(&cyclic(1), 0).unwrap();
        assert_eq!(g, asymmetric6());
        let x = realize_algebra(&cyclic(1), Q, 0).unwrap();
        assert_eq!(x.dim(), 12);
        let report = verify_realization(&cyclic(1), &x).unwrap();
        assert!(report.isomorphic);
        assert_eq!(report.aut_order, BigUint::from(1u32));
        let longer = realize_graph(&cyclic(1), 2).unwrap();
        assert_eq!(longer.vertex_count(), 8);
    }

    #[test]
    fn order_two() {
        let z2 = cyclic(2);
        assert_eq!(realize_graph(&z2, 0).unwrap(), SimpleGraph::new(2, &[(0, 1)]).unwrap());
        let x = realize_algebra(&z2, Q, 0).unwrap();
        assert_eq!(x.dim(), 3);
        assert!(verify_realization(&z2, &x).unwrap().isomorphic);
        // the raw gadget at variant 0 is a claw, with too many symmetries
        let claw = gadget_graph(&z2, 0);
        assert_eq!((claw.vertex_count(), claw.edge_count()), (4, 3));
        assert_eq!(*brute_force_automorphisms(&claw).unwrap().order(), BigUint::from(6u32));
        let r = realize(&z2, 1).unwrap();
        assert_eq!((r.variant, r.graph.vertex_count()), (1, 5));
    }

    #[test]
    fn cyclic_three() {
        let z3 = cyclic(3);
        let r = realize(&z3, 0).unwrap();
        assert_eq!(r.variant, 0);
        assert_eq!(r.graph.vertex_count(), 3 + 3 * 5);
        assert_eq!(*graph_automorphisms(&r.graph).order(), BigUint::from(3u32));
        let x = build_algebra(&r.graph, Q);
        assert!(x.matrix().determinant().unwrap().is_one());
        let report = verify_realization(&z3, &x).unwrap();
        assert!(report.isomorphic);
        assert_eq!(report.scales, vec![Q.one()]);
    }

    #[test]
    fn catalog_realizations() {
        let z2 = cyclic(2);
        let groups = [cyclic(4), cyclic(5), direct_product(&z2, &z2), symmetric3()];
        for g in &groups {
            for t in [0, 1] {
                let x = realize_algebra(g, Q, t).unwrap();
                assert!(x.is_regular());
                assert!(verify_realization(g, &x).unwrap().isomorphic, "order {} variant {t}", g.order());
            }
        }
    }

    #[test]
    fn family_dimensions_differ() {
        let z3 = cyclic(3);
        let dims: BTreeSet<usize> = (0..3).map(|t| realize_algebra(&z3, Q, t).unwrap().dim()).collect();
        assert_eq!(dims.len(), 3);
    }

    #[test]
    fn mismatched_verification() {
        let k3 = SimpleGraph::new(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let report = verify_realization(&cyclic(2), &build_algebra(&k3, Q)).unwrap();
        assert!(!report.isomorphic);
        assert_eq!(report.aut_order, BigUint::from(6u32));
        assert!(report.reconstructed.is_none());

        let single = build_algebra(&SimpleGraph::edgeless(1), Q);
        assert!(verify_realization(&cyclic(1), &single).unwrap().isomorphic);

        let z2 = cyclic(2);
        let v4 = direct_product(&z2, &z2);
        let z4_algebra = realize_algebra(&cyclic(4), Q, 0).unwrap();
        assert!(!verify_realization(&v4, &z4_algebra).unwrap().isomorphic);

        let singular = EvolutionAlgebra::new(ScalarMatrix::zeros(Q, 1, 1), None).unwrap();
        assert_eq!(verify_realization(&z2, &singular), Err(FruchtError::NotRegular));
    }

    #[test]
    fn rescaling_kernel_is_counted() {
        // over GF(7) the antidiagonal algebra has three scalings fixing the
        // basis, inverted by the swap
        let gf7 = FieldDescriptor::Prime(7);
        let x = EvolutionAlgebra::new(ScalarMatrix::from_i64_rows(gf7, &[&[0, 1], &[1, 0]]).unwrap(), None).unwrap();
        let report = verify_realization(&symmetric3(), &x).unwrap();
        assert!(report.isomorphic);
        assert_eq!(report.reconstructed.unwrap().order(), 6);
        assert!(!verify_realization(&cyclic(6), &x).unwrap().isomorphic);
    }
}
