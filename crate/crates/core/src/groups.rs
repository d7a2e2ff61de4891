//! Finite groups as multiplication tables: closure of permutation
//! generators, abstract isomorphism testing and Cayley digraphs.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{compose, is_permutation};
use crate::text::{join, FileKind, Lines, ReadError};

/// Cap on the number of elements produced by closure.
pub const CLOSURE_CAP: usize = 10_000;
/// Cap on the order of groups handed to [`group_isomorphic`].
pub const ISOMORPHISM_CAP: usize = 10_000;

const EXHAUSTIVE_ASSOCIATIVITY_MAX: usize = 64;
const ASSOCIATIVITY_SAMPLES: usize = 100_000;
const ASSOCIATIVITY_SEED: u64 = 0x0065_766f_6c61_6c67;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("a group needs at least one element")]
    Empty,
    #[error("row {row} has {got} entries, expected {n}")]
    RowLength { row: usize, n: usize, got: usize },
    #[error("entry {value} out of range for order {n}")]
    EntryOutOfRange { value: usize, n: usize },
    #[error("row {0} is not a permutation")]
    RowNotLatin(usize),
    #[error("column {0} is not a permutation")]
    ColumnNotLatin(usize),
    #[error("element 0 is not the identity")]
    IdentityNotFirst,
    #[error("({0}*{1})*{2} != {0}*({1}*{2})")]
    NotAssociative(usize, usize, usize),
    #[error("generator {0} is not a permutation of the given degree")]
    NotAPermutation(usize),
    #[error("closure exceeds {0} elements")]
    ClosureTooLarge(usize),
    #[error("group order {order} exceeds the isomorphism cap {cap}")]
    OrderTooLarge { order: usize, cap: usize },
    #[error("generating set contains the identity, a duplicate, or does not generate")]
    NotGenerating,
}

/// A finite group given by its multiplication table; element 0 is the
/// identity.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteGroup {
    n: usize,
    table: Vec<u32>,
    inverses: Vec<u32>,
}

impl FiniteGroup {
    /// Validates a table given row by row: `rows[a][b]` is `a·b`.
    pub fn from_table(rows: &[Vec<usize>]) -> Result<Self, GroupError> {
        let n = rows.len();
        if n == 0 {
            return Err(GroupError::Empty);
        }
        let mut table = Vec::with_capacity(n * n);
        for (a, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(GroupError::RowLength { row: a, n, got: row.len() });
            }
            for &v in row {
                if v >= n {
                    return Err(GroupError::EntryOutOfRange { value: v, n });
                }
                table.push(v as u32);
            }
        }
        Self::validated(n, table)
    }

    fn validated(n: usize, table: Vec<u32>) -> Result<Self, GroupError> {
        let at = |a: usize, b: usize| table[a * n + b] as usize;
        for a in 0..n {
            if !is_permutation(&(0..n).map(|b| at(a, b)).collect::<Vec<_>>()) {
                return Err(GroupError::RowNotLatin(a));
            }
            if !is_permutation(&(0..n).map(|b| at(b, a)).collect::<Vec<_>>()) {
                return Err(GroupError::ColumnNotLatin(a));
            }
            if at(0, a) != a || at(a, 0) != a {
                return Err(GroupError::IdentityNotFirst);
            }
        }
        let assoc = |(a, b, c): (usize, usize, usize)| at(at(a, b), c) == at(a, at(b, c));
        if n <= EXHAUSTIVE_ASSOCIATIVITY_MAX {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        if !assoc((a, b, c)) {
                            return Err(GroupError::NotAssociative(a, b, c));
                        }
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(ASSOCIATIVITY_SEED);
            for _ in 0..ASSOCIATIVITY_SAMPLES {
                let t = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
                if !assoc(t) {
                    return Err(GroupError::NotAssociative(t.0, t.1, t.2));
                }
            }
        }
        let inverses = (0..n).map(|a| (0..n).find(|&b| at(a, b) == 0).expect("Latin row") as u32).collect();
        Ok(FiniteGroup { n, table, inverses })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.n + b] as usize
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverses[a] as usize
    }

    pub fn element_order(&self, a: usize) -> usize {
        let (mut x, mut k) = (a, 1);
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        (0..self.n).map(|a| (0..self.n).map(|b| self.mul(a, b)).collect()).collect()
    }

    fn element_order_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.n + 1];
        for a in 0..self.n {
            counts[self.element_order(a)] += 1;
        }
        counts
    }

    /// Elements of the subgroup generated by `gens`, identity first, in
    /// breadth-first order under right multiplication.
    fn closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.n];
        seen[0] = true;
        let mut out = vec![0];
        let mut next = 0;
        while next < out.len() {
            let x = out[next];
            for &s in gens {
                let y = self.mul(x, s);
                if !seen[y] {
                    seen[y] = true;
                    out.push(y);
                }
            }
            next += 1;
        }
        out
    }

    /// Writes the table form.
    pub fn to_text(&self) -> String {
        let mut out = format!("{}\ntable {}\n", FileKind::Group.header(), self.n);
        for row in self.rows() {
            out.push_str(&join(&row));
            out.push('\n');
        }
        out
    }

    /// Reads either `table n` followed by `n` rows, or `perm d k` followed by
    /// `k` generator lines of `d` images.
    pub fn from_text(text: &str) -> Result<Self, ReadError> {
        let mut lines = Lines::new(text);
        lines.expect_header(FileKind::Group)?;
        let head = lines.tokens()?;
        let nums: Vec<usize> = head[1.min(head.len())..]
            .iter()
            .map(|t| crate::text::parse_usize(t).ok_or_else(|| lines.error(format!("`{t}` is not a count"))))
            .collect::<Result<_, _>>()?;
        let group = match (head.first().copied(), nums.as_slice()) {
            (Some("table"), &[n]) => {
                let rows = (0..n).map(|_| lines.usizes(n)).collect::<Result<Vec<_>, _>>()?;
                lines.finish()?;
                FiniteGroup::from_table(&rows)
            }
            (Some("perm"), &[d, k]) => {
                let gens = (0..k).map(|_| lines.usizes(d)).collect::<Result<Vec<_>, _>>()?;
                lines.finish()?;
                group_from_permutations(d, &gens)
            }
            _ => return Err(lines.error("expected `table n` or `perm d k`").into()),
        };
        group.map_err(|e| match e {
            GroupError::ClosureTooLarge(_) => ReadError::TooLarge(e.to_string()),
            _ => ReadError::invalid(e),
        })
    }
}

/// A generating set: distinct non-identity elements whose closure is the
/// whole group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorSet {
    elements: Vec<usize>,
}

impl GeneratorSet {
    pub fn new(group: &FiniteGroup, elements: Vec<usize>) -> Result<Self, GroupError> {
        let mut sorted = elements.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != elements.len()
            || sorted.first() == Some(&0)
            || sorted.last().is_some_and(|&x| x >= group.order())
            || group.closure(&elements).len() != group.order()
        {
            return Err(GroupError::NotGenerating);
        }
        Ok(GeneratorSet { elements })
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

/// The group generated by permutations of `0..degree`, elements numbered in
/// breadth-first discovery order (identity first, generators applied by
/// right multiplication in the given order).
pub fn group_from_permutations(degree: usize, gens: &[Vec<usize>]) -> Result<FiniteGroup, GroupError> {
    for (i, g) in gens.iter().enumerate() {
        if g.len() != degree || !is_permutation(g) {
            return Err(GroupError::NotAPermutation(i));
        }
    }
    let identity: Vec<usize> = (0..degree).collect();
    let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(identity.clone(), 0)]);
    let mut elements = vec![identity];
    // parent[x] = (y, s) with x = y·gens[s]; right[x][s] = index of x·gens[s]
    let mut parent = vec![(0, 0)];
    let mut right: Vec<Vec<usize>> = Vec::new();
    let mut next = 0;
    while next < elements.len() {
        let mut row = Vec::with_capacity(gens.len());
        for (s, g) in gens.iter().enumerate() {
            let y = compose(&elements[next], g);
            let idx = match index.get(&y) {
                Some(&i) => i,
                None => {
                    if elements.len() >= CLOSURE_CAP {
                        return Err(GroupError::ClosureTooLarge(CLOSURE_CAP));
                    }
                    let i = elements.len();
                    index.insert(y.clone(), i);
                    elements.push(y);
                    parent.push((next, s));
                    i
                }
            };
            row.push(idx);
        }
        right.push(row);
        next += 1;
    }
    let n = elements.len();
    let mut table = vec![0u32; n * n];
    for a in 0..n {
        table[a * n] = a as u32;
        for b in 1..n {
            let (p, s) = parent[b];
            table[a * n + b] = right[table[a * n + p] as usize][s] as u32;
        }
    }
    FiniteGroup::validated(n, table)
}

/// Inclusion-greedy generating set: elements are scanned in ascending order
/// and kept when they enlarge the generated subgroup.
pub fn minimal_generators(g: &FiniteGroup) -> GeneratorSet {
    let mut gens = Vec::new();
    let mut inside = vec![false; g.order()];
    inside[0] = true;
    let mut size = 1;
    for a in 1..g.order() {
        if size == g.order() {
            break;
        }
        if !inside[a] {
            gens.push(a);
            let sub = g.closure(&gens);
            size = sub.len();
            for x in sub {
                inside[x] = true;
            }
        }
    }
    GeneratorSet { elements: gens }
}

/// Whether the two groups are isomorphic. Orders and element-order
/// multisets are compared first; then images of a greedy generating set of
/// `g1` are searched by backtracking.
pub fn group_isomorphic(g1: &FiniteGroup, g2: &FiniteGroup) -> Result<bool, GroupError> {
    for g in [g1, g2] {
        if g.order() > ISOMORPHISM_CAP {
            return Err(GroupError::OrderTooLarge { order: g.order(), cap: ISOMORPHISM_CAP });
        }
    }
    if g1.order() != g2.order() || g1.element_order_counts() != g2.element_order_counts() {
        return Ok(false);
    }
    let gens = minimal_generators(g1).elements;
    let candidates: Vec<Vec<usize>> = gens
        .iter()
        .map(|&s| (1..g2.order()).filter(|&x| g2.element_order(x) == g1.element_order(s)).collect())
        .collect();
    let mut images = Vec::with_capacity(gens.len());
    Ok(extend(g1, g2, &gens, &candidates, &mut images))
}

fn extend(
    g1: &FiniteGroup,
    g2: &FiniteGroup,
    gens: &[usize],
    candidates: &[Vec<usize>],
    images: &mut Vec<usize>,
) -> bool {
    let k = images.len();
    if k > 0 && !consistent(g1, g2, &gens[..k], images) {
        return false;
    }
    if k == gens.len() {
        return true;
    }
    for &x in &candidates[k] {
        images.push(x);
        if extend(g1, g2, gens, candidates, images) {
            return true;
        }
        images.pop();
    }
    false
}

/// Whether `gens[i] -> images[i]` extends to an injective homomorphism from
/// the subgroup generated by `gens`.
fn consistent(g1: &FiniteGroup, g2: &FiniteGroup, gens: &[usize], images: &[usize]) -> bool {
    const UNSET: usize = usize::MAX;
    let mut phi = vec![UNSET; g1.order()];
    let mut used = vec![false; g2.order()];
    phi[0] = 0;
    used[0] = true;
    let mut queue = vec![0];
    let mut next = 0;
    while next < queue.len() {
        let x = queue[next];
        next += 1;
        for (&s, &t) in gens.iter().zip(images) {
            let (y, img) = (g1.mul(x, s), g2.mul(phi[x], t));
            if phi[y] == UNSET {
                if used[img] {
                    return false;
                }
                phi[y] = img;
                used[img] = true;
                queue.push(y);
            } else if phi[y] != img {
                return false;
            }
        }
    }
    true
}

/// A digraph with colored arcs and colored undirected edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoredDigraph {
    pub n: usize,
    /// `(from, to, color)`
    pub arcs: Vec<(usize, usize, usize)>,
    /// `(u, v, color)` with `u < v`
    pub edges: Vec<(usize, usize, usize)>,
}

/// Arc `g -> g·s` of color `i` for the `i`-th generator `s`. Involutions give
/// one undirected edge `{g, g·s}` per pair instead of two arcs.
pub fn cayley_digraph(g: &FiniteGroup, s: &GeneratorSet) -> Result<ColoredDigraph, GroupError> {
    let s = GeneratorSet::new(g, s.elements.clone())?;
    let mut arcs = Vec::new();
    let mut edges = Vec::new();
    for (color, &x) in s.elements.iter().enumerate() {
        let involution = g.mul(x, x) == 0;
        for a in 0..g.order() {
            let b = g.mul(a, x);
            if !involution {
                arcs.push((a, b, color));
            } else if a < b {
                edges.push((a, b, color));
            }
        }
    }
    Ok(ColoredDigraph { n: g.order(), arcs, edges })
}

/// The cyclic group of order `n`, element `k` standing for `k mod n`.
pub fn cyclic(n: usize) -> FiniteGroup {
    let rows: Vec<Vec<usize>> = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
    FiniteGroup::from_table(&rows).expect("cyclic table")
}

/// `G × H` with `(g, h)` numbered `g·|H| + h`.
pub fn direct_product(g: &FiniteGroup, h: &FiniteGroup) -> FiniteGroup {
    let m = h.order();
    let rows: Vec<Vec<usize>> = (0..g.order() * m)
        .map(|a| (0..g.order() * m).map(|b| g.mul(a / m, b / m) * m + h.mul(a % m, b % m)).collect())
        .collect();
    FiniteGroup::from_table(&rows).expect("product of tables")
}

pub fn symmetric3() -> FiniteGroup {
    group_from_permutations(3, &[vec![1, 2, 0], vec![1, 0, 2]]).expect("S3")
}

/// Symmetries of a regular `n`-gon, of order `2n`.
pub fn dihedral(n: usize) -> FiniteGroup {
    let rotation: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
    let reflection: Vec<usize> = (0..n).map(|i| (n - i) % n).collect();
    group_from_permutations(n, &[rotation, reflection]).expect("dihedral")
}

/// Quaternion group `{±1, ±i, ±j, ±k}`, `2u + s` standing for `(-1)^s · u`
/// with units `u = 1, i, j, k`.
pub fn quaternion8() -> FiniteGroup {
    // UNITS[a][b] = (sign, unit) of a·b
    const UNITS: [[(usize, usize); 4]; 4] = [
        [(0, 0), (0, 1), (0, 2), (0, 3)],
        [(0, 1), (1, 0), (0, 3), (1, 2)],
        [(0, 2), (1, 3), (1, 0), (0, 1)],
        [(0, 3), (0, 2), (1, 1), (1, 0)],
    ];
    let rows: Vec<Vec<usize>> = (0..8)
        .map(|a| {
            (0..8)
                .map(|b| {
                    let (s, u) = UNITS[a / 2][b / 2];
                    2 * u + (s + a % 2 + b % 2) % 2
                })
                .collect()
        })
        .collect();
    FiniteGroup::from_table(&rows).expect("Q8")
}
