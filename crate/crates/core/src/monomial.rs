//! Automorphisms and isomorphisms of regular evolution algebras.
//!
//! In a regular evolution algebra every natural basis is a scaled
//! permutation of any other, so an isomorphism is a monomial map
//! `g(b_i) = λ_i b_σ(i)`. It preserves the algebra exactly when, for all
//! `i, j`,
//!
//! ```text
//! λ_i² · w'_{σ(j) σ(i)} = λ_j · w_{j i}
//! ```
//!
//! The search enumerates permutations `σ` through individualization
//! refinement on the nonzero pattern of the structure matrix and decides
//! each candidate by solving the scale system above exactly.

use std::collections::{HashMap, HashSet, VecDeque};

use num_bigint::BigUint;
use num_traits::One;
use thiserror::Error;

use crate::evolution::EvolutionAlgebra;
use crate::fields::{FieldDescriptor, FieldScalar, ScalarMatrix};
use crate::graph::{self, PermGroup};
use crate::search::{self, Checker, Pattern};
use crate::text::{join, FileKind, Lines, ReadError};

/// Default cap on enumerated automorphisms.
pub const DEFAULT_GROUP_CAP: usize = 1_000_000;

/// Largest dimension accepted by [`brute_force_automorphisms`].
pub const BRUTE_FORCE_MAX: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MonomialError {
    #[error("algebra is not regular")]
    NotRegular,
    #[error("more than {0} automorphisms")]
    GroupTooLarge(usize),
    #[error("monomial map has size {map}, algebra has dimension {dim}")]
    SizeMismatch { map: usize, dim: usize },
    #[error("algebras are over different fields ({0} vs {1})")]
    FieldMismatch(FieldDescriptor, FieldDescriptor),
    #[error("scale {0} is zero")]
    ZeroScale(usize),
    #[error("sigma is not a permutation")]
    NotAPermutation,
    #[error("brute force limited to dimension {BRUTE_FORCE_MAX}, algebra has dimension {0}")]
    TooLargeForBruteForce(usize),
}

/// `b_i ↦ λ_i · b_σ(i)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MonomialMap {
    sigma: Vec<usize>,
    lambda: Vec<FieldScalar>,
}

impl MonomialMap {
    pub fn new(sigma: Vec<usize>, lambda: Vec<FieldScalar>) -> Result<Self, MonomialError> {
        if sigma.len() != lambda.len() {
            return Err(MonomialError::SizeMismatch { map: lambda.len(), dim: sigma.len() });
        }
        if !graph::is_permutation(&sigma) {
            return Err(MonomialError::NotAPermutation);
        }
        if let Some(i) = lambda.iter().position(FieldScalar::is_zero) {
            return Err(MonomialError::ZeroScale(i));
        }
        if let (Some(first), Some(bad)) = (lambda.first(), lambda.iter().find(|l| l.field() != lambda[0].field())) {
            return Err(MonomialError::FieldMismatch(first.field(), bad.field()));
        }
        Ok(MonomialMap { sigma, lambda })
    }

    pub fn identity(n: usize, field: FieldDescriptor) -> Self {
        MonomialMap { sigma: (0..n).collect(), lambda: vec![field.one(); n] }
    }

    pub fn permutation(sigma: Vec<usize>, field: FieldDescriptor) -> Result<Self, MonomialError> {
        let n = sigma.len();
        Self::new(sigma, vec![field.one(); n])
    }

    pub fn len(&self) -> usize {
        self.sigma.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sigma.is_empty()
    }

    pub fn sigma(&self) -> &[usize] {
        &self.sigma
    }

    pub fn lambda(&self) -> &[FieldScalar] {
        &self.lambda
    }

    pub fn is_identity(&self) -> bool {
        self.sigma.iter().enumerate().all(|(i, &s)| i == s) && self.lambda.iter().all(FieldScalar::is_one)
    }

    /// `self ∘ other`: apply `other` first. The scale of the composite is
    /// `λ''_i = λ_other_i · λ_self_{σ_other(i)}`.
    pub fn compose(&self, other: &MonomialMap) -> MonomialMap {
        assert_eq!(self.len(), other.len());
        let sigma = graph::compose(&self.sigma, &other.sigma);
        let lambda = other.sigma.iter().zip(&other.lambda).map(|(&s, l)| l * &self.lambda[s]).collect();
        MonomialMap { sigma, lambda }
    }

    pub fn inverse(&self) -> MonomialMap {
        let n = self.len();
        let mut sigma = vec![0; n];
        for (i, &s) in self.sigma.iter().enumerate() {
            sigma[s] = i;
        }
        let lambda = sigma.iter().map(|&i| self.lambda[i].inverse().expect("nonzero scale")).collect();
        MonomialMap { sigma, lambda }
    }

    pub fn to_text(&self) -> String {
        format!("{}\n{}\n{}\n{}\n", FileKind::Monomial.header(), self.len(), join(&self.sigma), join(&self.lambda))
    }

    /// Scales are read in `field`; the format does not record it.
    pub fn from_text(text: &str, field: FieldDescriptor) -> Result<Self, ReadError> {
        let mut lines = Lines::new(text);
        lines.expect_header(FileKind::Monomial)?;
        let n = lines.usizes(1)?[0];
        let sigma = lines.usizes(n)?;
        let toks = lines.tokens()?;
        if toks.len() != n {
            return Err(lines.error(format!("expected {n} scales, found {}", toks.len())).into());
        }
        let lambda = toks
            .iter()
            .map(|t| field.parse_scalar(t).map_err(|e| lines.error(e.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        lines.finish()?;
        MonomialMap::new(sigma, lambda).map_err(ReadError::invalid)
    }
}

/// `λ_i² · w_{σ(j) σ(i)} = λ_j · w_{j i}` for every pair.
pub fn is_automorphism(x: &EvolutionAlgebra, m: &MonomialMap) -> Result<bool, MonomialError> {
    if m.len() != x.dim() {
        return Err(MonomialError::SizeMismatch { map: m.len(), dim: x.dim() });
    }
    if let Some(l) = m.lambda.first().filter(|l| l.field() != x.field()) {
        return Err(MonomialError::FieldMismatch(x.field(), l.field()));
    }
    Ok(satisfies(x.matrix(), x.matrix(), &m.sigma, &m.lambda))
}

/// `λ_k · target[k][i] = λ_i² · source[σ(k)][σ(i)]` for all `k, i`: the
/// basis `λ_i b_σ(i)` of the source algebra has structure matrix `target`.
fn satisfies(source: &ScalarMatrix, target: &ScalarMatrix, sigma: &[usize], lambda: &[FieldScalar]) -> bool {
    let n = sigma.len();
    (0..n).all(|i| {
        let sq = lambda[i].square();
        (0..n).all(|k| {
            let t = target.get(k, i);
            let s = source.get(sigma[k], sigma[i]);
            match (t.is_zero(), s.is_zero()) {
                (true, true) => true,
                (false, false) => &lambda[k] * t == &sq * s,
                _ => false,
            }
        })
    })
}

/// The scale system for a fixed permutation. Off-diagonal nonzero
/// constraints read `λ_k = c · λ_i²` (an arc `i -> k`); nonzero diagonal
/// constraints pin `λ_i` outright.
struct ScaleSystem {
    n: usize,
    arcs: Vec<Vec<(usize, FieldScalar)>>,
    preds: Vec<Vec<usize>>,
    pinned: Vec<Option<FieldScalar>>,
}

impl ScaleSystem {
    fn build(source: &ScalarMatrix, target: &ScalarMatrix, sigma: &[usize]) -> Option<Self> {
        let n = sigma.len();
        let mut arcs = vec![Vec::new(); n];
        let mut preds = vec![Vec::new(); n];
        let mut pinned = vec![None; n];
        for i in 0..n {
            for k in 0..n {
                let t = target.get(k, i);
                let s = source.get(sigma[k], sigma[i]);
                match (t.is_zero(), s.is_zero()) {
                    (true, true) => {}
                    (false, false) if k == i => pinned[i] = Some(t / s),
                    (false, false) => {
                        arcs[i].push((k, s / t));
                        preds[k].push(i);
                    }
                    _ => return None,
                }
            }
        }
        Some(ScaleSystem { n, arcs, preds, pinned })
    }

    /// Forward-propagates known scales; `false` on a contradiction.
    fn propagate(&self, vals: &mut [Option<FieldScalar>]) -> bool {
        let mut queue: VecDeque<usize> = (0..self.n).filter(|&i| vals[i].is_some()).collect();
        while let Some(i) = queue.pop_front() {
            let sq = vals[i].as_ref().unwrap().square();
            for (k, c) in &self.arcs[i] {
                let v = c * &sq;
                match &vals[*k] {
                    Some(existing) if *existing != v => return false,
                    Some(_) => {}
                    None => {
                        vals[*k] = Some(v);
                        queue.push_back(*k);
                    }
                }
            }
        }
        true
    }

    /// An unknown lying on a cycle of unknowns together with the one-variable
    /// equation `x^degree = value` its scale must satisfy.
    fn cycle_equation(&self, vals: &[Option<FieldScalar>]) -> Result<(usize, BigUint, FieldScalar), MonomialError> {
        let start = (0..self.n).find(|&i| vals[i].is_none()).unwrap();
        // Every unknown has an unknown predecessor (known ones would have
        // propagated), so walking predecessors must revisit a node.
        let mut seen = vec![false; self.n];
        let mut r = start;
        while !seen[r] {
            seen[r] = true;
            r = *self.preds[r].iter().find(|&&p| vals[p].is_none()).ok_or(MonomialError::NotRegular)?;
        }
        // Breadth-first from r: each reached unknown is coef * x^(2^depth).
        let one = self.arcs[r][0].1.field().one();
        let mut coef: HashMap<usize, (FieldScalar, usize)> = HashMap::from([(r, (one, 0))]);
        let mut queue = VecDeque::from([r]);
        let mut best: Option<(usize, FieldScalar)> = None;
        while let Some(i) = queue.pop_front() {
            let (ci, di) = coef[&i].clone();
            for (k, c) in &self.arcs[i] {
                if *k == r && best.as_ref().is_none_or(|(d, _)| di < *d) {
                    // x = c * (ci * x^(2^di))^2  =>  x^(2^(di+1) - 1) = 1 / (c * ci^2)
                    best = Some((di, (c * &ci.square()).inverse().unwrap()));
                }
                if vals[*k].is_none() && !coef.contains_key(k) {
                    coef.insert(*k, (c * &ci.square(), di + 1));
                    queue.push_back(*k);
                }
            }
        }
        let (depth, value) = best.expect("r lies on a cycle");
        let degree = (BigUint::one() << (depth + 1)) - BigUint::one();
        Ok((r, degree, value))
    }

    fn solve(
        &self,
        mut vals: Vec<Option<FieldScalar>>,
        limit: usize,
        out: &mut Vec<Vec<FieldScalar>>,
    ) -> Result<(), MonomialError> {
        if out.len() >= limit || !self.propagate(&mut vals) {
            return Ok(());
        }
        if vals.iter().all(Option::is_some) {
            out.push(vals.into_iter().map(Option::unwrap).collect());
            return Ok(());
        }
        let (r, degree, value) = self.cycle_equation(&vals)?;
        for root in value.nonzero_roots(&degree) {
            let mut next = vals.clone();
            next[r] = Some(root);
            self.solve(next, limit, out)?;
        }
        Ok(())
    }
}

/// Up to `limit` scale vectors `λ` making `(σ, λ)` carry the basis of
/// `source` to one with structure matrix `target`. Both matrices must be
/// regular for the solution set to be finite.
pub(crate) fn solve_scales(
    source: &ScalarMatrix,
    target: &ScalarMatrix,
    sigma: &[usize],
    limit: usize,
) -> Result<Vec<Vec<FieldScalar>>, MonomialError> {
    let Some(system) = ScaleSystem::build(source, target, sigma) else {
        return Ok(Vec::new());
    };
    let mut out = Vec::new();
    system.solve(system.pinned.clone(), limit, &mut out)?;
    out.retain(|l| satisfies(source, target, sigma, l));
    out.sort();
    Ok(out)
}

fn pattern(x: &ScalarMatrix) -> Pattern {
    let n = x.rows();
    let colors = (0..n).map(|i| u64::from(!x.get(i, i).is_zero())).collect();
    let mut arcs = Vec::new();
    for i in 0..n {
        for k in 0..n {
            if k != i && !x.get(k, i).is_zero() {
                arcs.push((i, k));
            }
        }
    }
    Pattern::directed(colors, &arcs)
}

struct ScaleChecker<'a> {
    source: &'a ScalarMatrix,
    target: &'a ScalarMatrix,
    /// Off-diagonal nonzero rows of each target column.
    target_arcs: Vec<Vec<usize>>,
}

impl<'a> ScaleChecker<'a> {
    fn new(source: &'a ScalarMatrix, target: &'a ScalarMatrix) -> Self {
        let n = target.rows();
        let target_arcs = (0..n).map(|i| (0..n).filter(|&k| k != i && !target.get(k, i).is_zero()).collect()).collect();
        ScaleChecker { source, target, target_arcs }
    }
}

impl Checker for ScaleChecker<'_> {
    fn accept(&mut self, map: &[usize]) -> bool {
        solve_scales(self.source, self.target, map, 1).is_ok_and(|s| !s.is_empty())
    }

    /// Scales pinned by diagonal entries, pushed along arcs between already
    /// matched indices, must agree.
    fn viable(&mut self, pairs: &[(usize, usize)]) -> bool {
        let sigma: HashMap<usize, usize> = pairs.iter().copied().collect();
        let mut vals: HashMap<usize, FieldScalar> = HashMap::new();
        for (&i, &si) in &sigma {
            let t = self.target.get(i, i);
            if !t.is_zero() {
                vals.insert(i, t / self.source.get(si, si));
            }
        }
        let mut queue: VecDeque<usize> = vals.keys().copied().collect();
        while let Some(i) = queue.pop_front() {
            let sq = vals[&i].square();
            for &k in &self.target_arcs[i] {
                let Some(&sk) = sigma.get(&k) else {
                    continue;
                };
                let t = self.target.get(k, i);
                let s = self.source.get(sk, sigma[&i]);
                if s.is_zero() {
                    return false;
                }
                let v = &(&sq * s) / t;
                match vals.get(&k) {
                    Some(existing) if *existing != v => return false,
                    Some(_) => {}
                    None => {
                        vals.insert(k, v);
                        queue.push_back(k);
                    }
                }
            }
        }
        true
    }
}

/// The automorphism group of a regular evolution algebra.
///
/// `permutations` is the image of the group in the symmetric group on basis
/// indices; `kernel` lists the automorphisms with trivial permutation part
/// (pure rescalings). The full order is their product.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraAutomorphisms {
    pub permutations: PermGroup,
    pub generators: Vec<MonomialMap>,
    pub kernel: Vec<MonomialMap>,
    order: BigUint,
}

impl AlgebraAutomorphisms {
    pub fn order(&self) -> &BigUint {
        &self.order
    }

    /// Every automorphism has all scales equal to one.
    pub fn all_scales_one(&self) -> bool {
        self.kernel.len() == 1 && self.generators.iter().all(|g| g.lambda.iter().all(FieldScalar::is_one))
    }

    /// All automorphisms by closure of the generators, identity first.
    pub fn elements(&self, cap: usize) -> Result<Vec<MonomialMap>, MonomialError> {
        let n = self.permutations.degree();
        let field = self.kernel.first().and_then(|k| k.lambda.first()).map(FieldScalar::field);
        let identity = match field {
            Some(f) => MonomialMap::identity(n, f),
            None => MonomialMap { sigma: Vec::new(), lambda: Vec::new() },
        };
        let mut seen: HashSet<MonomialMap> = HashSet::from([identity.clone()]);
        let mut elements = vec![identity];
        let mut next = 0;
        while next < elements.len() {
            for g in &self.generators {
                let y = elements[next].compose(g);
                if seen.insert(y.clone()) {
                    if elements.len() >= cap {
                        return Err(MonomialError::GroupTooLarge(cap));
                    }
                    elements.push(y);
                }
            }
            next += 1;
        }
        Ok(elements)
    }
}

pub fn algebra_automorphisms(x: &EvolutionAlgebra) -> Result<AlgebraAutomorphisms, MonomialError> {
    if !x.is_regular() {
        return Err(MonomialError::NotRegular);
    }
    let m = x.matrix();
    let n = x.dim();
    let identity: Vec<usize> = (0..n).collect();
    let kernel_scales = solve_scales(m, m, &identity, DEFAULT_GROUP_CAP + 1)?;
    if kernel_scales.len() > DEFAULT_GROUP_CAP {
        return Err(MonomialError::GroupTooLarge(DEFAULT_GROUP_CAP));
    }
    let kernel: Vec<MonomialMap> =
        kernel_scales.into_iter().map(|lambda| MonomialMap { sigma: identity.clone(), lambda }).collect();

    let found = search::automorphism_group(&pattern(m), &mut ScaleChecker::new(m, m));
    let perm_order = found.orbit_sizes.iter().fold(BigUint::one(), |acc, &k| acc * k);
    let permutations = PermGroup::with_order(n, found.generators, perm_order.clone());

    let mut generators = Vec::new();
    for sigma in permutations.generators() {
        let lambda = solve_scales(m, m, sigma, 1)?.pop().expect("accepted permutation has scales");
        generators.push(MonomialMap { sigma: sigma.clone(), lambda });
    }
    generators.extend(kernel.iter().filter(|k| !k.is_identity()).cloned());
    generators.sort();
    let order = perm_order * kernel.len();
    Ok(AlgebraAutomorphisms { permutations, generators, kernel, order })
}

/// A monomial map `m` with `rebase(x1, m) == x2` (as structure matrices),
/// choosing the lexicographically least permutation and then the least
/// scale vector.
pub fn algebra_isomorphism(x1: &EvolutionAlgebra, x2: &EvolutionAlgebra) -> Result<Option<MonomialMap>, MonomialError> {
    if x1.field() != x2.field() {
        return Err(MonomialError::FieldMismatch(x1.field(), x2.field()));
    }
    if !x1.is_regular() || !x2.is_regular() {
        return Err(MonomialError::NotRegular);
    }
    if x1.dim() != x2.dim() {
        return Ok(None);
    }
    let (source, target) = (x1.matrix(), x2.matrix());
    let Some(sigma) =
        search::find_isomorphism(&pattern(target), &pattern(source), &mut ScaleChecker::new(source, target))
    else {
        return Ok(None);
    };
    let lambda = solve_scales(source, target, &sigma, 1)?.remove(0);
    Ok(Some(MonomialMap { sigma, lambda }))
}

/// Every automorphism, found by trying all `n!` permutations and solving the
/// scale system of each. Sorted.
pub fn brute_force_automorphisms(x: &EvolutionAlgebra) -> Result<Vec<MonomialMap>, MonomialError> {
    if !x.is_regular() {
        return Err(MonomialError::NotRegular);
    }
    let n = x.dim();
    if n > BRUTE_FORCE_MAX {
        return Err(MonomialError::TooLargeForBruteForce(n));
    }
    let m = x.matrix();
    let mut sigma: Vec<usize> = (0..n).collect();
    let mut out = Vec::new();
    loop {
        for lambda in solve_scales(m, m, &sigma, DEFAULT_GROUP_CAP)? {
            out.push(MonomialMap { sigma: sigma.clone(), lambda });
            if out.len() > DEFAULT_GROUP_CAP {
                return Err(MonomialError::GroupTooLarge(DEFAULT_GROUP_CAP));
            }
        }
        if !graph::next_permutation(&mut sigma) {
            break;
        }
    }
    out.sort();
    Ok(out)
}

/// The permutation group of σ-parts of an explicit list of automorphisms.
pub fn permutation_image(n: usize, elements: &[MonomialMap]) -> PermGroup {
    let mut sigmas: Vec<Vec<usize>> = elements.iter().map(|e| e.sigma.clone()).collect();
    sigmas.sort();
    sigmas.dedup();
    let gens = graph::greedy_generators(n, &sigmas);
    PermGroup::with_order(n, gens, BigUint::from(sigmas.len()))
}
