//! The graph-to-algebra functor and its inverse on its image.
//!
//! A simple graph `(V, E)` becomes the evolution algebra with basis
//! `{b_v} ∪ {b_e}` where `b_v² = b_v` and `b_e² = b_e + b_u + b_w` for
//! `e = {u, w}`. Vertices take basis positions `0..|V|` and edges follow in
//! lexicographic order, which makes the structure matrix upper triangular
//! with unit diagonal.

use thiserror::Error;

use crate::evolution::EvolutionAlgebra;
use crate::fields::{FieldDescriptor, ScalarMatrix};
use crate::graph::{is_morphism, SimpleGraph, VertexMap};
use crate::monomial::MonomialMap;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FunctorError {
    #[error("vertex map is not a graph morphism")]
    NotAMorphism,
    #[error("algebra is not regular")]
    NotRegular,
    #[error("not in the image of the graph functor: {0}")]
    NotInImage(ImageViolation),
    #[error("monomial map of size {map} for algebra of dimension {dim}")]
    SizeMismatch { map: usize, dim: usize },
    #[error("monomial map scales are over {map}, algebra is over {algebra}")]
    FieldMismatch { map: FieldDescriptor, algebra: FieldDescriptor },
}

/// Which membership condition failed during graph recovery.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ImageViolation {
    #[error("column {column} has {count} nonzero entries (expected 1 or 3)")]
    BadNonzeroCount { column: usize, count: usize },
    #[error("column {column} has a single nonzero entry off the diagonal")]
    OffDiagonalVertex { column: usize },
    #[error("column {column} has a zero diagonal entry")]
    ZeroDiagonal { column: usize },
    #[error("column {column} has an off-diagonal entry in row {row}, which is not a vertex column")]
    OffDiagonalRowNotVertex { column: usize, row: usize },
    #[error("column {column}: entry in row {row} does not match the squared diagonal")]
    DiagonalMismatch { column: usize, row: usize },
    #[error("columns {first} and {second} describe the same edge")]
    DuplicateEdge { first: usize, second: usize },
}

/// Position of a basis element of a functor image.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FunctorBasisIndex {
    Vertex(usize),
    Edge(usize, usize),
}

impl FunctorBasisIndex {
    pub fn position(self, g: &SimpleGraph) -> Option<usize> {
        match self {
            FunctorBasisIndex::Vertex(v) => (v < g.vertex_count()).then_some(v),
            FunctorBasisIndex::Edge(u, v) => g.edge_index(u, v).map(|k| g.vertex_count() + k),
        }
    }

    pub fn at(g: &SimpleGraph, position: usize) -> Option<Self> {
        let n = g.vertex_count();
        if position < n {
            Some(FunctorBasisIndex::Vertex(position))
        } else {
            g.edges().get(position - n).map(|&(u, v)| FunctorBasisIndex::Edge(u, v))
        }
    }
}

pub fn build_algebra(g: &SimpleGraph, field: FieldDescriptor) -> EvolutionAlgebra {
    let n = g.vertex_count();
    let dim = n + g.edge_count();
    let mut m = ScalarMatrix::zeros(field, dim, dim);
    for i in 0..dim {
        m.set(i, i, field.one());
    }
    for (k, &(u, v)) in g.edges().iter().enumerate() {
        m.set(u, n + k, field.one());
        m.set(v, n + k, field.one());
    }
    let labels = (0..n).map(|v| format!("v{v}")).chain(g.edges().iter().map(|(u, v)| format!("e{u}_{v}"))).collect();
    EvolutionAlgebra::new(m, Some(labels)).expect("functor labels are distinct")
}

/// The 0/1 matrix of the algebra morphism induced by `f`, mapping the basis
/// of the image of `g1` (columns) into that of `g2` (rows).
pub fn map_morphism(
    f: &VertexMap,
    g1: &SimpleGraph,
    g2: &SimpleGraph,
    field: FieldDescriptor,
) -> Result<ScalarMatrix, FunctorError> {
    if !is_morphism(f, g1, g2) {
        return Err(FunctorError::NotAMorphism);
    }
    let (n1, n2) = (g1.vertex_count(), g2.vertex_count());
    let mut m = ScalarMatrix::zeros(field, n2 + g2.edge_count(), n1 + g1.edge_count());
    for v in 0..n1 {
        m.set(f.images[v], v, field.one());
    }
    for (k, &(u, v)) in g1.edges().iter().enumerate() {
        let target = g2.edge_index(f.images[u], f.images[v]).expect("morphism maps edges to edges");
        m.set(n2 + target, n1 + k, field.one());
    }
    Ok(m)
}

/// Structure matrix of `x` in the basis `b̂_i = λ_i · b_σ(i)`:
/// `ŵ_ki = (λ_i² / λ_k) · w_σ(k)σ(i)`. Labels follow their basis vectors.
pub fn rebase(x: &EvolutionAlgebra, m: &MonomialMap) -> Result<EvolutionAlgebra, FunctorError> {
    let n = x.dim();
    if m.len() != n {
        return Err(FunctorError::SizeMismatch { map: m.len(), dim: n });
    }
    if let Some(l) = m.lambda().first().filter(|l| l.field() != x.field()) {
        return Err(FunctorError::FieldMismatch { map: l.field(), algebra: x.field() });
    }
    let (sigma, lambda) = (m.sigma(), m.lambda());
    let inv: Vec<_> = lambda.iter().map(|l| l.inverse().expect("nonzero scale")).collect();
    let matrix = ScalarMatrix::from_fn(x.field(), n, n, |k, i| {
        let w = x.constant(sigma[k], sigma[i]);
        if w.is_zero() {
            w.clone()
        } else {
            &(&lambda[i].square() * &inv[k]) * w
        }
    });
    let labels = sigma.iter().map(|&s| x.labels()[s].clone()).collect();
    Ok(EvolutionAlgebra::new(matrix, Some(labels)).expect("permuted labels stay distinct"))
}

/// Recovers the graph behind an algebra monomially equivalent to a functor
/// image, together with a map `m` such that `rebase(x, m)` equals
/// `build_algebra(graph)`.
///
/// Columns with one nonzero entry (on the diagonal) are vertices, numbered
/// by column order. Columns with three nonzero entries are edges: a nonzero
/// diagonal `d` and two entries in vertex rows, each of which must equal
/// `d² / a` where `a` is that vertex's diagonal.
pub fn recover_graph(x: &EvolutionAlgebra) -> Result<(SimpleGraph, MonomialMap), FunctorError> {
    use ImageViolation::*;

    if !x.is_regular() {
        return Err(FunctorError::NotRegular);
    }
    let dim = x.dim();
    let violation = |v| FunctorError::NotInImage(v);

    let nonzero_rows: Vec<Vec<usize>> =
        (0..dim).map(|c| (0..dim).filter(|&r| !x.constant(r, c).is_zero()).collect()).collect();
    let mut vertex_of = vec![None; dim];
    let mut vertex_cols = Vec::new();
    for (c, rows) in nonzero_rows.iter().enumerate() {
        match rows.len() {
            1 if rows[0] == c => {
                vertex_of[c] = Some(vertex_cols.len());
                vertex_cols.push(c);
            }
            1 => return Err(violation(OffDiagonalVertex { column: c })),
            3 => {}
            count => return Err(violation(BadNonzeroCount { column: c, count })),
        }
    }

    // (u, v, column) for every edge column
    let mut edges: Vec<(usize, usize, usize)> = Vec::new();
    for (c, rows) in nonzero_rows.iter().enumerate() {
        if rows.len() != 3 {
            continue;
        }
        if !rows.contains(&c) {
            return Err(violation(ZeroDiagonal { column: c }));
        }
        let d_sq = x.constant(c, c).square();
        let mut ends = Vec::with_capacity(2);
        for &r in rows.iter().filter(|&&r| r != c) {
            let Some(v) = vertex_of[r] else {
                return Err(violation(OffDiagonalRowNotVertex { column: c, row: r }));
            };
            if x.constant(r, c) * x.constant(r, r) != d_sq {
                return Err(violation(DiagonalMismatch { column: c, row: r }));
            }
            ends.push(v);
        }
        edges.push((ends[0].min(ends[1]), ends[0].max(ends[1]), c));
    }
    edges.sort_unstable();
    if let Some(w) = edges.windows(2).find(|w| (w[0].0, w[0].1) == (w[1].0, w[1].1)) {
        let (a, b) = (w[0].2.min(w[1].2), w[0].2.max(w[1].2));
        return Err(violation(DuplicateEdge { first: a, second: b }));
    }

    let pairs: Vec<_> = edges.iter().map(|&(u, v, _)| (u, v)).collect();
    let g = SimpleGraph::new(vertex_cols.len(), &pairs).expect("distinct non-loop edges");
    let sigma: Vec<usize> = vertex_cols.iter().copied().chain(edges.iter().map(|e| e.2)).collect();
    let lambda = sigma.iter().map(|&c| x.constant(c, c).inverse().expect("nonzero diagonal")).collect();
    let m = MonomialMap::new(sigma, lambda).expect("columns are partitioned and scales nonzero");
    Ok((g, m))
}
