//! Individualization-refinement search over vertex-colored (di)graphs.
//!
//! Used for graph automorphisms and isomorphisms and, through the nonzero
//! pattern of a structure matrix, for the permutation part of evolution
//! algebra automorphisms. Candidate permutations found at the leaves are
//! judged by a [`Checker`], so the search can enumerate a subgroup of the
//! pattern's automorphism group (e.g. those permutations that admit a
//! consistent scaling).

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

/// Neighbour counts per cell index, out-going then in-coming.
type Signature = (Vec<(usize, u32)>, Vec<(usize, u32)>);

pub(crate) struct Pattern {
    n: usize,
    colors: Vec<u64>,
    out: Vec<Vec<usize>>,
    inn: Vec<Vec<usize>>,
    directed: bool,
}

impl Pattern {
    pub(crate) fn undirected(colors: Vec<u64>, edges: &[(usize, usize)]) -> Self {
        let n = colors.len();
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        Pattern { n, colors, out: adj, inn: Vec::new(), directed: false }
    }

    pub(crate) fn directed(colors: Vec<u64>, arcs: &[(usize, usize)]) -> Self {
        let n = colors.len();
        let mut out = vec![Vec::new(); n];
        let mut inn = vec![Vec::new(); n];
        for &(u, v) in arcs {
            out[u].push(v);
            inn[v].push(u);
        }
        Pattern { n, colors, out, inn, directed: true }
    }

    fn root(&self) -> (Partition, u64) {
        let mut order: Vec<usize> = (0..self.n).collect();
        order.sort_by_key(|&v| (self.colors[v], v));
        let mut cells: Vec<Vec<usize>> = Vec::new();
        let mut h = DefaultHasher::new();
        self.n.hash(&mut h);
        for v in order {
            match cells.last_mut() {
                Some(cell) if self.colors[cell[0]] == self.colors[v] => cell.push(v),
                _ => cells.push(vec![v]),
            }
        }
        for cell in &cells {
            (self.colors[cell[0]], cell.len()).hash(&mut h);
        }
        let mut part = Partition::from_cells(self.n, cells);
        self.refine(&mut part, &mut h);
        (part, h.finish())
    }

    fn child(&self, part: &Partition, v: usize) -> (Partition, u64) {
        let mut child = part.individualize(v);
        let mut h = DefaultHasher::new();
        part.cell_of[v].hash(&mut h);
        self.refine(&mut child, &mut h);
        (child, h.finish())
    }

    fn neighbour_counts(&self, list: &[usize], part: &Partition, buf: &mut Vec<usize>) -> Vec<(usize, u32)> {
        buf.clear();
        buf.extend(list.iter().map(|&u| part.cell_of[u]));
        buf.sort_unstable();
        let mut counts: Vec<(usize, u32)> = Vec::new();
        for &c in buf.iter() {
            match counts.last_mut() {
                Some((last, k)) if *last == c => *k += 1,
                _ => counts.push((c, 1)),
            }
        }
        counts
    }

    /// Splits cells by neighbour counts into every cell until stable. The
    /// split order depends only on cell indices, never on vertex numbers,
    /// so refinement commutes with relabelling.
    fn refine(&self, part: &mut Partition, h: &mut DefaultHasher) {
        let mut buf = Vec::new();
        loop {
            let before = part.cells.len();
            let mut next: Vec<Vec<usize>> = Vec::with_capacity(before);
            for (ci, cell) in part.cells.iter().enumerate() {
                if cell.len() == 1 {
                    next.push(cell.clone());
                    continue;
                }
                let mut keyed: Vec<(Signature, usize)> = cell
                    .iter()
                    .map(|&v| {
                        let outs = self.neighbour_counts(&self.out[v], part, &mut buf);
                        let ins = if self.directed {
                            self.neighbour_counts(&self.inn[v], part, &mut buf)
                        } else {
                            Vec::new()
                        };
                        ((outs, ins), v)
                    })
                    .collect();
                keyed.sort();
                let mut start = 0;
                while start < keyed.len() {
                    let mut end = start + 1;
                    while end < keyed.len() && keyed[end].0 == keyed[start].0 {
                        end += 1;
                    }
                    (ci, &keyed[start].0, end - start).hash(h);
                    next.push(keyed[start..end].iter().map(|(_, v)| *v).collect());
                    start = end;
                }
            }
            if next.len() == before {
                break;
            }
            *part = Partition::from_cells(self.n, next);
        }
        part.cells.len().hash(h);
    }
}

#[derive(Clone, Debug)]
struct Partition {
    cells: Vec<Vec<usize>>,
    cell_of: Vec<usize>,
}

impl Partition {
    fn from_cells(n: usize, cells: Vec<Vec<usize>>) -> Self {
        let mut cell_of = vec![0; n];
        for (i, cell) in cells.iter().enumerate() {
            for &v in cell {
                cell_of[v] = i;
            }
        }
        Partition { cells, cell_of }
    }

    fn is_discrete(&self) -> bool {
        self.cells.len() == self.cell_of.len()
    }

    /// First smallest non-singleton cell.
    fn target(&self) -> Option<usize> {
        self.cells.iter().enumerate().filter(|(_, c)| c.len() > 1).min_by_key(|(i, c)| (c.len(), *i)).map(|(i, _)| i)
    }

    fn individualize(&self, v: usize) -> Partition {
        let c = self.cell_of[v];
        let mut cells = Vec::with_capacity(self.cells.len() + 1);
        cells.extend_from_slice(&self.cells[..c]);
        cells.push(vec![v]);
        cells.push(self.cells[c].iter().copied().filter(|&u| u != v).collect());
        cells.extend_from_slice(&self.cells[c + 1..]);
        Partition::from_cells(self.cell_of.len(), cells)
    }

    fn labeling(&self) -> Vec<usize> {
        self.cells.iter().map(|c| c[0]).collect()
    }

    /// Correspondences forced by singleton cells when `self` is matched
    /// against `other` cell by cell.
    fn forced_pairs(&self, other: &Partition) -> Vec<(usize, usize)> {
        self.cells
            .iter()
            .zip(&other.cells)
            .filter(|(a, b)| a.len() == 1 && b.len() == 1)
            .map(|(a, b)| (a[0], b[0]))
            .collect()
    }
}

/// Judges candidate vertex maps produced by the search.
pub(crate) trait Checker {
    /// `map[v]` is the image of domain vertex `v`.
    fn accept(&mut self, map: &[usize]) -> bool;

    /// Early rejection from a partial map given as `(domain, image)` pairs.
    /// Must never reject a partial map that extends to an accepted one.
    fn viable(&mut self, _pairs: &[(usize, usize)]) -> bool {
        true
    }
}

pub(crate) struct GroupSearch {
    /// Generators of the accepted subgroup, sorted lexicographically.
    pub generators: Vec<Vec<usize>>,
    /// Orbit lengths along the stabilizer chain of the base; their product
    /// is the group order.
    pub orbit_sizes: Vec<usize>,
}

struct ChainSearch<'a, C: Checker> {
    pattern: &'a Pattern,
    checker: &'a mut C,
    path: Vec<Partition>,
    path_hash: Vec<u64>,
    leaf: Vec<usize>,
}

impl<C: Checker> ChainSearch<'_, C> {
    fn dfs(&mut self, node: &Partition, depth: usize) -> Option<Vec<usize>> {
        let pairs = self.path[depth].forced_pairs(node);
        if !self.checker.viable(&pairs) {
            return None;
        }
        if node.is_discrete() {
            let mut map = vec![0; self.pattern.n];
            for (&from, to) in self.leaf.iter().zip(node.labeling()) {
                map[from] = to;
            }
            return self.checker.accept(&map).then_some(map);
        }
        let t = node.target()?;
        if depth + 1 >= self.path.len() {
            return None;
        }
        for &w in &node.cells[t] {
            let (child, h) = self.pattern.child(node, w);
            if h != self.path_hash[depth + 1] {
                continue;
            }
            if let Some(found) = self.dfs(&child, depth + 1) {
                return Some(found);
            }
        }
        None
    }
}

fn orbit(point: usize, generators: &[Vec<usize>], n: usize) -> Vec<bool> {
    let mut seen = vec![false; n];
    seen[point] = true;
    let mut stack = vec![point];
    while let Some(x) = stack.pop() {
        for g in generators {
            let y = g[x];
            if !seen[y] {
                seen[y] = true;
                stack.push(y);
            }
        }
    }
    seen
}

/// Generators and stabilizer-chain orbit lengths for the group of pattern
/// automorphisms accepted by `checker`. The checker's accepted set must be
/// a subgroup of the pattern's automorphism group.
pub(crate) fn automorphism_group(pattern: &Pattern, checker: &mut impl Checker) -> GroupSearch {
    let (root, h0) = pattern.root();
    let mut path = vec![root];
    let mut path_hash = vec![h0];
    let mut base = Vec::new();
    while let Some(t) = path.last().unwrap().target() {
        let last = path.last().unwrap();
        let b = last.cells[t][0];
        let (child, h) = pattern.child(last, b);
        base.push(b);
        path.push(child);
        path_hash.push(h);
    }
    let leaf = path.last().unwrap().labeling();
    let mut search = ChainSearch { pattern, checker, path, path_hash, leaf };

    let mut generators: Vec<Vec<usize>> = Vec::new();
    let mut orbit_sizes = vec![1; base.len()];
    for level in (0..base.len()).rev() {
        let node = search.path[level].clone();
        let t = node.target().expect("non-discrete node on the base path");
        let b = base[level];
        let mut in_orbit = orbit(b, &generators, pattern.n);
        for &w in &node.cells[t] {
            if in_orbit[w] {
                continue;
            }
            let (child, h) = pattern.child(&node, w);
            if h != search.path_hash[level + 1] {
                continue;
            }
            if let Some(g) = search.dfs(&child, level + 1) {
                generators.push(g);
                in_orbit = orbit(b, &generators, pattern.n);
            }
        }
        orbit_sizes[level] = in_orbit.iter().filter(|&&x| x).count();
    }
    generators.sort();
    GroupSearch { generators, orbit_sizes }
}

struct LexSearch<'a, C: Checker> {
    dom: &'a Pattern,
    cod: &'a Pattern,
    checker: &'a mut C,
}

impl<C: Checker> LexSearch<'_, C> {
    fn dfs(&mut self, p1: &Partition, p2: &Partition) -> Option<Vec<usize>> {
        if !self.checker.viable(&p1.forced_pairs(p2)) {
            return None;
        }
        if p1.is_discrete() {
            let mut map = vec![0; self.dom.n];
            for (a, b) in p1.labeling().into_iter().zip(p2.labeling()) {
                map[a] = b;
            }
            return self.checker.accept(&map).then_some(map);
        }
        let i = (0..self.dom.n).find(|&v| p1.cells[p1.cell_of[v]].len() > 1)?;
        let (q1, h1) = self.dom.child(p1, i);
        let mut candidates = p2.cells[p1.cell_of[i]].clone();
        candidates.sort_unstable();
        for j in candidates {
            let (q2, h2) = self.cod.child(p2, j);
            if h1 != h2 {
                continue;
            }
            if let Some(found) = self.dfs(&q1, &q2) {
                return Some(found);
            }
        }
        None
    }
}

/// The lexicographically least accepted map `dom -> cod` (as an image
/// vector) that is an isomorphism of the patterns, if any.
pub(crate) fn find_isomorphism(dom: &Pattern, cod: &Pattern, checker: &mut impl Checker) -> Option<Vec<usize>> {
    if dom.n != cod.n || dom.directed != cod.directed {
        return None;
    }
    let (p1, h1) = dom.root();
    let (p2, h2) = cod.root();
    if h1 != h2 {
        return None;
    }
    LexSearch { dom, cod, checker }.dfs(&p1, &p2)
}

#[cfg(test)]
mod tests {
    use super::*;

    struct EdgeChecker {
        from: Vec<(usize, usize)>,
        to: Vec<(usize, usize)>,
    }

    impl EdgeChecker {
        fn auts(edges: &[(usize, usize)]) -> Self {
            EdgeChecker { from: edges.to_vec(), to: edges.to_vec() }
        }
    }

    impl Checker for EdgeChecker {
        fn accept(&mut self, map: &[usize]) -> bool {
            self.from.iter().all(|&(u, v)| {
                let (a, b) = (map[u].min(map[v]), map[u].max(map[v]));
                self.to.contains(&(a, b))
            })
        }
    }

    fn order(edges: &[(usize, usize)], n: usize) -> u64 {
        let p = Pattern::undirected(vec![0; n], edges);
        let res = automorphism_group(&p, &mut EdgeChecker::auts(edges));
        res.orbit_sizes.iter().map(|&k| k as u64).product()
    }

    #[test]
    fn small_orders() {
        assert_eq!(order(&[], 0), 1);
        assert_eq!(order(&[], 1), 1);
        assert_eq!(order(&[], 5), 120);
        assert_eq!(order(&[(0, 1), (0, 2), (1, 2)], 3), 6);
        assert_eq!(order(&[(0, 1), (1, 2)], 3), 2);
        assert_eq!(order(&[(0, 1), (0, 3), (1, 2), (2, 3)], 4), 8);
        // Petersen graph
        let petersen = [
            (0, 1),
            (0, 4),
            (0, 5),
            (1, 2),
            (1, 6),
            (2, 3),
            (2, 7),
            (3, 4),
            (3, 8),
            (4, 9),
            (5, 7),
            (5, 8),
            (6, 8),
            (6, 9),
            (7, 9),
        ];
        assert_eq!(order(&petersen, 10), 120);
    }

    #[test]
    fn directed_cycle_has_rotations_only() {
        let arcs = [(0, 1), (1, 2), (2, 3), (3, 0)];
        let p = Pattern::directed(vec![0; 4], &arcs);
        struct Arcs(Vec<(usize, usize)>);
        impl Checker for Arcs {
            fn accept(&mut self, map: &[usize]) -> bool {
                self.0.iter().all(|&(u, v)| self.0.contains(&(map[u], map[v])))
            }
        }
        let res = automorphism_group(&p, &mut Arcs(arcs.to_vec()));
        assert_eq!(res.orbit_sizes.iter().product::<usize>(), 4);
    }

    #[test]
    fn lex_least_isomorphism() {
        let path = [(0, 1), (1, 2)];
        let relabeled = [(0, 2), (1, 2)];
        let dom = Pattern::undirected(vec![0; 3], &path);
        let cod = Pattern::undirected(vec![0; 3], &relabeled);
        let map = find_isomorphism(&dom, &cod, &mut EdgeChecker { from: path.to_vec(), to: relabeled.to_vec() });
        assert_eq!(map, Some(vec![0, 2, 1]));
    }
}
