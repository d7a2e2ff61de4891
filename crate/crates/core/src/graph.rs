//! Finite simple graphs, injective edge-preserving vertex maps, and
//! automorphism / isomorphism computation.

use std::collections::{HashMap, HashSet, VecDeque};

use num_bigint::BigUint;
use num_traits::One;
use thiserror::Error;

use crate::search::{self, Checker, Pattern};
use crate::text::{join, FileKind, Lines, ReadError};

/// Default element cap for naive closures.
pub const DEFAULT_CLOSURE_CAP: usize = 1_000_000;

/// Largest vertex count accepted by the brute-force (all `n!` permutations)
/// automorphism oracle.
pub const BRUTE_FORCE_MAX: usize = 9;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("loop edge at vertex {0}")]
    LoopEdge(usize),
    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(usize, usize),
    #[error("vertex {vertex} out of range for {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("not a permutation of 0..{0}")]
    NotAPermutation(usize),
    #[error("group has more than {0} elements")]
    GroupTooLarge(usize),
    #[error("brute force limited to {BRUTE_FORCE_MAX} vertices, graph has {0}")]
    TooLargeForBruteForce(usize),
}

/// Vertices `0..n`, edges stored as sorted pairs `(u, v)` with `u < v`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SimpleGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl SimpleGraph {
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut normalized = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(GraphError::LoopEdge(u));
            }
            normalized.push((u.min(v), u.max(v)));
        }
        normalized.sort_unstable();
        if let Some(w) = normalized.windows(2).find(|w| w[0] == w[1]) {
            return Err(GraphError::DuplicateEdge(w[0].0, w[0].1));
        }
        Ok(SimpleGraph { n, edges: normalized })
    }

    pub fn edgeless(n: usize) -> Self {
        SimpleGraph { n, edges: Vec::new() }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edge_index(u, v).is_some()
    }

    /// Position of `{u, v}` in the sorted edge list.
    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        self.edges.binary_search(&(u.min(v), u.max(v))).ok()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        adj
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let adj = self.adjacency();
        let mut seen = vec![false; self.n];
        seen[0] = true;
        let mut queue = VecDeque::from([0]);
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// The image of the graph under a vertex permutation.
    pub fn relabel(&self, perm: &[usize]) -> SimpleGraph {
        let edges: Vec<_> = self.edges.iter().map(|&(u, v)| (perm[u], perm[v])).collect();
        SimpleGraph::new(self.n, &edges).expect("relabelling by a permutation")
    }

    fn pattern(&self) -> Pattern {
        Pattern::undirected(vec![0; self.n], &self.edges)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n{} {}\n", FileKind::Graph.header(), self.n, self.edges.len());
        for &(u, v) in &self.edges {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self, ReadError> {
        let mut lines = Lines::new(text);
        lines.expect_header(FileKind::Graph)?;
        let head = lines.usizes(2)?;
        let (n, m) = (head[0], head[1]);
        let mut edges = Vec::with_capacity(m);
        for _ in 0..m {
            let e = lines.usizes(2)?;
            edges.push((e[0], e[1]));
        }
        lines.finish()?;
        SimpleGraph::new(n, &edges).map_err(ReadError::invalid)
    }
}

/// An injective map from the vertices of one graph to those of another.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexMap {
    pub images: Vec<usize>,
}

impl VertexMap {
    pub fn identity(n: usize) -> Self {
        VertexMap { images: (0..n).collect() }
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = HashSet::new();
        self.images.iter().all(|v| seen.insert(*v))
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &VertexMap) -> VertexMap {
        VertexMap { images: other.images.iter().map(|&v| self.images[v]).collect() }
    }
}

/// `f` is injective and maps every edge of `g1` to an edge of `g2`.
pub fn is_morphism(f: &VertexMap, g1: &SimpleGraph, g2: &SimpleGraph) -> bool {
    f.images.len() == g1.n
        && f.images.iter().all(|&v| v < g2.n)
        && f.is_injective()
        && g1.edges.iter().all(|&(u, v)| g2.has_edge(f.images[u], f.images[v]))
}

pub(crate) fn is_permutation(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    p.iter().all(|&x| x < p.len() && !std::mem::replace(&mut seen[x], true))
}

/// `a ∘ b` on one-line image vectors.
pub(crate) fn compose(a: &[usize], b: &[usize]) -> Vec<usize> {
    b.iter().map(|&x| a[x]).collect()
}

/// A permutation group given by generators, with its exact order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Vec<usize>>,
    order: BigUint,
}

impl PermGroup {
    pub fn trivial(degree: usize) -> Self {
        PermGroup { degree, generators: Vec::new(), order: BigUint::one() }
    }

    /// Order by breadth-first closure of the generators, failing beyond `cap`
    /// elements.
    pub fn from_generators(degree: usize, generators: Vec<Vec<usize>>, cap: usize) -> Result<Self, GraphError> {
        for g in &generators {
            if g.len() != degree || !is_permutation(g) {
                return Err(GraphError::NotAPermutation(degree));
            }
        }
        let order = naive_closure(degree, &generators, cap)?.len();
        Ok(Self::with_order(degree, generators, BigUint::from(order)))
    }

    /// Trusts the caller's order. Identity generators are dropped and the
    /// rest sorted and deduplicated.
    pub(crate) fn with_order(degree: usize, mut generators: Vec<Vec<usize>>, order: BigUint) -> Self {
        generators.retain(|g| g.iter().enumerate().any(|(i, &x)| i != x));
        generators.sort();
        generators.dedup();
        PermGroup { degree, generators, order }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Vec<usize>] {
        &self.generators
    }

    pub fn order(&self) -> &BigUint {
        &self.order
    }

    /// Every element, identity first, in breadth-first discovery order.
    pub fn elements(&self, cap: usize) -> Result<Vec<Vec<usize>>, GraphError> {
        naive_closure(self.degree, &self.generators, cap)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n{} {}\n", FileKind::PermGroup.header(), self.degree, self.order);
        for g in &self.generators {
            out.push_str(&join(g));
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self, ReadError> {
        let mut lines = Lines::new(text);
        lines.expect_header(FileKind::PermGroup)?;
        let head = lines.tokens()?;
        if head.len() != 2 {
            return Err(lines.error("expected `degree order`").into());
        }
        let degree = crate::text::parse_usize(head[0]).ok_or_else(|| lines.error("bad degree"))?;
        let order: BigUint = head[1].parse().map_err(|_| lines.error("bad order"))?;
        let mut generators = Vec::new();
        while lines.finish().is_err() {
            let g = lines.usizes(degree)?;
            if !is_permutation(&g) {
                return Err(ReadError::invalid(GraphError::NotAPermutation(degree)));
            }
            generators.push(g);
        }
        Ok(PermGroup { degree, generators, order })
    }
}

/// All elements of the group generated by `generators`, identity first, in
/// breadth-first order (right multiplication by each generator in turn).
pub fn naive_closure(degree: usize, generators: &[Vec<usize>], cap: usize) -> Result<Vec<Vec<usize>>, GraphError> {
    let identity: Vec<usize> = (0..degree).collect();
    let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(identity.clone(), 0)]);
    let mut elements = vec![identity];
    let mut next = 0;
    while next < elements.len() {
        for g in generators {
            let y = compose(&elements[next], g);
            if !index.contains_key(&y) {
                if elements.len() >= cap {
                    return Err(GraphError::GroupTooLarge(cap));
                }
                index.insert(y.clone(), elements.len());
                elements.push(y);
            }
        }
        next += 1;
    }
    Ok(elements)
}

struct GraphChecker<'a> {
    from: &'a SimpleGraph,
    to: &'a SimpleGraph,
}

impl Checker for GraphChecker<'_> {
    fn accept(&mut self, map: &[usize]) -> bool {
        self.from.edges.iter().all(|&(u, v)| self.to.has_edge(map[u], map[v]))
    }
}

/// The full automorphism group: generators from individualization-refinement
/// search, order as the product of stabilizer-chain orbit lengths.
pub fn graph_automorphisms(g: &SimpleGraph) -> PermGroup {
    let res = search::automorphism_group(&g.pattern(), &mut GraphChecker { from: g, to: g });
    let order = res.orbit_sizes.iter().fold(BigUint::one(), |acc, &k| acc * k);
    PermGroup::with_order(g.n, res.generators, order)
}

/// The lexicographically least isomorphism `g1 -> g2`, if any.
pub fn graph_isomorphism(g1: &SimpleGraph, g2: &SimpleGraph) -> Option<VertexMap> {
    if g1.n != g2.n || g1.edges.len() != g2.edges.len() {
        return None;
    }
    let mut d1: Vec<usize> = (0..g1.n).map(|v| g1.degree(v)).collect();
    let mut d2: Vec<usize> = (0..g2.n).map(|v| g2.degree(v)).collect();
    d1.sort_unstable();
    d2.sort_unstable();
    if d1 != d2 {
        return None;
    }
    search::find_isomorphism(&g1.pattern(), &g2.pattern(), &mut GraphChecker { from: g1, to: g2 })
        .map(|images| VertexMap { images })
}

/// Steps `perm` to the next permutation in lexicographic order.
pub(crate) fn next_permutation(perm: &mut [usize]) -> bool {
    let n = perm.len();
    if n < 2 {
        return false;
    }
    let Some(i) = (0..n - 1).rev().find(|&i| perm[i] < perm[i + 1]) else {
        return false;
    };
    let j = (i + 1..n).rev().find(|&j| perm[j] > perm[i]).unwrap();
    perm.swap(i, j);
    perm[i + 1..].reverse();
    true
}

/// Greedy generating set for an explicitly listed group: walk the elements
/// in order, keep each one not already generated.
pub(crate) fn greedy_generators(degree: usize, elements: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut generated: HashSet<Vec<usize>> = HashSet::from([(0..degree).collect()]);
    let mut gens: Vec<Vec<usize>> = Vec::new();
    for e in elements {
        if generated.contains(e) {
            continue;
        }
        gens.push(e.clone());
        generated = naive_closure(degree, &gens, usize::MAX).expect("uncapped closure").into_iter().collect();
        if generated.len() == elements.len() {
            break;
        }
    }
    gens
}

/// Automorphisms by testing all `n!` vertex permutations.
pub fn brute_force_automorphisms(g: &SimpleGraph) -> Result<PermGroup, GraphError> {
    if g.n > BRUTE_FORCE_MAX {
        return Err(GraphError::TooLargeForBruteForce(g.n));
    }
    let mut perm: Vec<usize> = (0..g.n).collect();
    let mut elements = Vec::new();
    loop {
        if g.edges.iter().all(|&(u, v)| g.has_edge(perm[u], perm[v])) {
            elements.push(perm.clone());
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    let gens = greedy_generators(g.n, &elements);
    Ok(PermGroup::with_order(g.n, gens, BigUint::from(elements.len())))
}
