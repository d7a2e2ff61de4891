//! Exact scalars over the rationals and prime fields, and the dense
//! elimination routines (determinant, rank) built on top of them.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields ({0} vs {1})")]
    FieldMismatch(FieldDescriptor, FieldDescriptor),
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("{0} is not a prime below 2^31")]
    NotPrime(u64),
    #[error("expected {expected} matrix entries, got {got}")]
    EntryCount { expected: usize, got: usize },
    #[error("invalid scalar `{0}`")]
    BadScalar(String),
    #[error("invalid field descriptor `{0}`")]
    BadDescriptor(String),
}

/// The ground field: the rationals or `GF(p)` for a prime `p < 2^31`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldDescriptor {
    Rationals,
    Prime(u32),
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl FieldDescriptor {
    pub fn prime(p: u64) -> Result<Self, FieldError> {
        if p >= 1 << 31 || !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(FieldDescriptor::Prime(p as u32))
    }

    pub fn zero(self) -> FieldScalar {
        self.from_i64(0)
    }

    pub fn one(self) -> FieldScalar {
        self.from_i64(1)
    }

    pub fn from_i64(self, v: i64) -> FieldScalar {
        match self {
            FieldDescriptor::Rationals => FieldScalar::Rational(BigRational::from_integer(v.into())),
            FieldDescriptor::Prime(p) => FieldScalar::Residue { value: v.rem_euclid(p as i64) as u32, modulus: p },
        }
    }

    /// `num/den` reduced into this field. Panics if `den` vanishes in the field.
    pub fn from_ratio(self, num: i64, den: i64) -> FieldScalar {
        self.from_i64(num) / self.from_i64(den)
    }

    /// Parse the scalar text syntax: `a` or `a/b` over Q, a decimal residue
    /// in `[0, p)` over GF(p).
    pub fn parse_scalar(self, text: &str) -> Result<FieldScalar, FieldError> {
        let bad = || FieldError::BadScalar(text.to_string());
        match self {
            FieldDescriptor::Rationals => {
                let (num, den) = match text.split_once('/') {
                    Some((n, d)) => (n, Some(d)),
                    None => (text, None),
                };
                let num = parse_signed(num).ok_or_else(bad)?;
                let den = match den {
                    Some(d) if d.bytes().all(|b| b.is_ascii_digit()) && !d.is_empty() => {
                        BigInt::from_str(d).map_err(|_| bad())?
                    }
                    Some(_) => return Err(bad()),
                    None => BigInt::one(),
                };
                if den.is_zero() {
                    return Err(bad());
                }
                Ok(FieldScalar::Rational(BigRational::new(num, den)))
            }
            FieldDescriptor::Prime(p) => {
                if text.is_empty() || !text.bytes().all(|b| b.is_ascii_digit()) {
                    return Err(bad());
                }
                let v: u64 = text.parse().map_err(|_| bad())?;
                if v >= p as u64 {
                    return Err(bad());
                }
                Ok(FieldScalar::Residue { value: v as u32, modulus: p })
            }
        }
    }
}

fn parse_signed(text: &str) -> Option<BigInt> {
    let digits = text.strip_prefix('-').unwrap_or(text);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    BigInt::from_str(text).ok()
}

impl fmt::Display for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldDescriptor::Rationals => write!(f, "Q"),
            FieldDescriptor::Prime(p) => write!(f, "GF:{p}"),
        }
    }
}

impl FromStr for FieldDescriptor {
    type Err = FieldError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "Q" {
            return Ok(FieldDescriptor::Rationals);
        }
        let digits = s
            .strip_prefix("GF:")
            .filter(|d| !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit()))
            .ok_or_else(|| FieldError::BadDescriptor(s.to_string()))?;
        let p: u64 = digits.parse().map_err(|_| FieldError::BadDescriptor(s.to_string()))?;
        FieldDescriptor::prime(p)
    }
}

/// An exact field element. Rationals are always kept reduced with a
/// positive denominator; residues always lie in `[0, p)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldScalar {
    Rational(BigRational),
    Residue { value: u32, modulus: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

pub fn scalar_arith(a: &FieldScalar, b: &FieldScalar, op: ArithOp) -> Result<FieldScalar, FieldError> {
    match op {
        ArithOp::Add => a.checked_add(b),
        ArithOp::Sub => a.checked_sub(b),
        ArithOp::Mul => a.checked_mul(b),
        ArithOp::Div => a.checked_div(b),
    }
}

fn mod_pow(base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    let mut b = base % p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        exp >>= 1;
    }
    acc
}

impl FieldScalar {
    pub fn field(&self) -> FieldDescriptor {
        match self {
            FieldScalar::Rational(_) => FieldDescriptor::Rationals,
            FieldScalar::Residue { modulus, .. } => FieldDescriptor::Prime(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldScalar::Rational(r) => r.is_zero(),
            FieldScalar::Residue { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            FieldScalar::Rational(r) => r.is_one(),
            FieldScalar::Residue { value, .. } => *value == 1,
        }
    }

    fn same_field(&self, other: &FieldScalar) -> Result<(), FieldError> {
        if self.field() == other.field() {
            Ok(())
        } else {
            Err(FieldError::FieldMismatch(self.field(), other.field()))
        }
    }

    pub fn checked_add(&self, other: &FieldScalar) -> Result<FieldScalar, FieldError> {
        self.same_field(other)?;
        Ok(match (self, other) {
            (FieldScalar::Rational(a), FieldScalar::Rational(b)) => FieldScalar::Rational(a + b),
            (FieldScalar::Residue { value: a, modulus }, FieldScalar::Residue { value: b, .. }) => {
                FieldScalar::Residue { value: ((*a as u64 + *b as u64) % *modulus as u64) as u32, modulus: *modulus }
            }
            _ => unreachable!(),
        })
    }

    pub fn checked_sub(&self, other: &FieldScalar) -> Result<FieldScalar, FieldError> {
        self.same_field(other)?;
        self.checked_add(&other.neg_ref())
    }

    pub fn checked_mul(&self, other: &FieldScalar) -> Result<FieldScalar, FieldError> {
        self.same_field(other)?;
        Ok(match (self, other) {
            (FieldScalar::Rational(a), FieldScalar::Rational(b)) => FieldScalar::Rational(a * b),
            (FieldScalar::Residue { value: a, modulus }, FieldScalar::Residue { value: b, .. }) => {
                FieldScalar::Residue { value: (*a as u64 * *b as u64 % *modulus as u64) as u32, modulus: *modulus }
            }
            _ => unreachable!(),
        })
    }

    pub fn checked_div(&self, other: &FieldScalar) -> Result<FieldScalar, FieldError> {
        self.same_field(other)?;
        self.checked_mul(&other.inverse()?)
    }

    pub fn inverse(&self) -> Result<FieldScalar, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(match self {
            FieldScalar::Rational(r) => FieldScalar::Rational(r.recip()),
            FieldScalar::Residue { value, modulus } => FieldScalar::Residue {
                value: mod_pow(*value as u64, *modulus as u64 - 2, *modulus as u64) as u32,
                modulus: *modulus,
            },
        })
    }

    fn neg_ref(&self) -> FieldScalar {
        match self {
            FieldScalar::Rational(r) => FieldScalar::Rational(-r),
            FieldScalar::Residue { value, modulus } => {
                FieldScalar::Residue { value: (*modulus - *value) % *modulus, modulus: *modulus }
            }
        }
    }

    pub fn square(&self) -> FieldScalar {
        self * self
    }

    pub fn pow(&self, exp: &BigUint) -> FieldScalar {
        match self {
            FieldScalar::Rational(r) => {
                if r.is_zero() || r.abs().is_one() {
                    let negative = r.is_negative() && exp.is_odd();
                    if exp.is_zero() {
                        return FieldScalar::Rational(BigRational::one());
                    }
                    return if negative {
                        FieldScalar::Rational(-BigRational::one())
                    } else {
                        FieldScalar::Rational(r.abs())
                    };
                }
                let e = exp.to_u32().expect("rational exponent too large");
                FieldScalar::Rational(num_traits::pow(r.clone(), e as usize))
            }
            FieldScalar::Residue { value, modulus } => {
                let p = *modulus as u64;
                let value = if *value == 0 {
                    if exp.is_zero() {
                        1
                    } else {
                        0
                    }
                } else {
                    let e = (exp % BigUint::from(p - 1)).to_u64().unwrap();
                    mod_pow(*value as u64, e, p)
                };
                FieldScalar::Residue { value: value as u32, modulus: *modulus }
            }
        }
    }

    /// All nonzero `x` in the field with `x^k = self`, in ascending order.
    /// `k` must be positive; over GF(p) the residues are scanned exhaustively.
    pub fn nonzero_roots(&self, k: &BigUint) -> Vec<FieldScalar> {
        assert!(!k.is_zero(), "root degree must be positive");
        match self {
            FieldScalar::Rational(c) => {
                if c.is_zero() {
                    return Vec::new();
                }
                let even = k.is_even();
                if c.abs().is_one() {
                    let one = BigRational::one();
                    return match (c.is_positive(), even) {
                        (true, true) => vec![FieldScalar::Rational(-one.clone()), FieldScalar::Rational(one)],
                        (true, false) => vec![FieldScalar::Rational(one)],
                        (false, true) => Vec::new(),
                        (false, false) => vec![FieldScalar::Rational(-one)],
                    };
                }
                // |x| != 1 forces |numer| or denom of c to be at least 2^k.
                let bits = c.numer().bits().max(c.denom().bits());
                let Some(k) = k.to_u32().filter(|&k| (k as u64) <= bits) else {
                    return Vec::new();
                };
                if c.is_negative() && even {
                    return Vec::new();
                }
                let num = c.numer().abs().nth_root(k);
                let den = c.denom().nth_root(k);
                let root = BigRational::new(num, den);
                let sign_root = if c.is_negative() { -root } else { root };
                if num_traits::pow(sign_root.clone(), k as usize) != *c {
                    return Vec::new();
                }
                if even {
                    let mut out = vec![FieldScalar::Rational(-sign_root.clone()), FieldScalar::Rational(sign_root)];
                    out.sort();
                    out
                } else {
                    vec![FieldScalar::Rational(sign_root)]
                }
            }
            FieldScalar::Residue { value, modulus } => {
                if *value == 0 {
                    return Vec::new();
                }
                let p = *modulus as u64;
                let e = (k % BigUint::from(p - 1)).to_u64().unwrap();
                (1..p)
                    .filter(|&x| mod_pow(x, e, p) == *value as u64)
                    .map(|x| FieldScalar::Residue { value: x as u32, modulus: *modulus })
                    .collect()
            }
        }
    }
}

impl fmt::Display for FieldScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldScalar::Rational(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            FieldScalar::Residue { value, .. } => write!(f, "{value}"),
        }
    }
}

// Operator forms panic on field mismatch or division by zero; the checked
// methods report those as errors instead.
macro_rules! forward_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&FieldScalar> for &FieldScalar {
            type Output = FieldScalar;
            fn $method(self, rhs: &FieldScalar) -> FieldScalar {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $tr<FieldScalar> for FieldScalar {
            type Output = FieldScalar;
            fn $method(self, rhs: FieldScalar) -> FieldScalar {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&FieldScalar> for FieldScalar {
            type Output = FieldScalar;
            fn $method(self, rhs: &FieldScalar) -> FieldScalar {
                (&self).$method(rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);
forward_binop!(Div, div, checked_div);

impl Neg for &FieldScalar {
    type Output = FieldScalar;
    fn neg(self) -> FieldScalar {
        self.neg_ref()
    }
}

impl Neg for FieldScalar {
    type Output = FieldScalar;
    fn neg(self) -> FieldScalar {
        self.neg_ref()
    }
}

/// Dense row-major matrix over a single field.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ScalarMatrix {
    field: FieldDescriptor,
    rows: usize,
    cols: usize,
    entries: Vec<FieldScalar>,
}

impl ScalarMatrix {
    pub fn new(
        field: FieldDescriptor,
        rows: usize,
        cols: usize,
        entries: Vec<FieldScalar>,
    ) -> Result<Self, FieldError> {
        if entries.len() != rows * cols {
            return Err(FieldError::EntryCount { expected: rows * cols, got: entries.len() });
        }
        if let Some(bad) = entries.iter().find(|e| e.field() != field) {
            return Err(FieldError::FieldMismatch(field, bad.field()));
        }
        Ok(ScalarMatrix { field, rows, cols, entries })
    }

    /// Builds a matrix from small integers, mostly for tests and fixtures.
    pub fn from_i64_rows(field: FieldDescriptor, rows: &[&[i64]]) -> Result<Self, FieldError> {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            if row.len() != cols {
                return Err(FieldError::EntryCount { expected: cols, got: row.len() });
            }
            entries.extend(row.iter().map(|&v| field.from_i64(v)));
        }
        Ok(ScalarMatrix { field, rows: rows.len(), cols, entries })
    }

    pub fn zeros(field: FieldDescriptor, rows: usize, cols: usize) -> Self {
        ScalarMatrix { field, rows, cols, entries: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: FieldDescriptor, n: usize) -> Self {
        Self::from_fn(field, n, n, |r, c| if r == c { field.one() } else { field.zero() })
    }

    pub fn from_fn(
        field: FieldDescriptor,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> FieldScalar,
    ) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                let v = f(r, c);
                debug_assert_eq!(v.field(), field);
                entries.push(v);
            }
        }
        ScalarMatrix { field, rows, cols, entries }
    }

    pub fn field(&self) -> FieldDescriptor {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &FieldScalar {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: FieldScalar) {
        assert_eq!(v.field(), self.field);
        self.entries[r * self.cols + c] = v;
    }

    pub fn entries(&self) -> &[FieldScalar] {
        &self.entries
    }

    pub fn column(&self, c: usize) -> Vec<FieldScalar> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn mul_matrix(&self, other: &ScalarMatrix) -> Result<ScalarMatrix, FieldError> {
        if self.field != other.field {
            return Err(FieldError::FieldMismatch(self.field, other.field));
        }
        if self.cols != other.rows {
            return Err(FieldError::EntryCount { expected: self.cols, got: other.rows });
        }
        let field = self.field;
        Ok(Self::from_fn(field, self.rows, other.cols, |r, c| {
            (0..self.cols).fold(field.zero(), |acc, k| {
                let a = self.get(r, k);
                let b = other.get(k, c);
                if a.is_zero() || b.is_zero() {
                    acc
                } else {
                    acc + a * b
                }
            })
        }))
    }

    pub fn determinant(&self) -> Result<FieldScalar, FieldError> {
        if !self.is_square() {
            return Err(FieldError::NotSquare { rows: self.rows, cols: self.cols });
        }
        if self.off_diagonal_acyclic() {
            let field = self.field;
            return Ok((0..self.rows).fold(field.one(), |acc, i| acc * self.get(i, i)));
        }
        Ok(match self.field {
            FieldDescriptor::Rationals => {
                let (mut ints, scale) = self.integer_rows();
                FieldScalar::Rational(BigRational::new(bareiss(&mut ints, true).0, scale))
            }
            FieldDescriptor::Prime(p) => {
                let mut rows = self.residue_rows();
                FieldScalar::Residue { value: mod_eliminate(&mut rows, p as u64).0 as u32, modulus: p }
            }
        })
    }

    pub fn rank(&self) -> usize {
        if self.is_square() && self.off_diagonal_acyclic() && (0..self.rows).all(|i| !self.get(i, i).is_zero()) {
            return self.rows;
        }
        match self.field {
            FieldDescriptor::Rationals => bareiss(&mut self.integer_rows().0, false).1,
            FieldDescriptor::Prime(p) => mod_eliminate(&mut self.residue_rows(), p as u64).1,
        }
    }

    /// True when the digraph with an arc `r -> c` for every nonzero
    /// off-diagonal entry has no cycle. Then the matrix is triangular up to a
    /// simultaneous permutation of rows and columns, and its determinant is
    /// the product of the diagonal.
    fn off_diagonal_acyclic(&self) -> bool {
        let n = self.rows;
        let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut indegree = vec![0usize; n];
        for (r, arcs) in out.iter_mut().enumerate() {
            for (c, deg) in indegree.iter_mut().enumerate() {
                if r != c && !self.get(r, c).is_zero() {
                    arcs.push(c);
                    *deg += 1;
                }
            }
        }
        let mut ready: Vec<usize> = (0..n).filter(|&v| indegree[v] == 0).collect();
        let mut seen = 0;
        while let Some(v) = ready.pop() {
            seen += 1;
            for &w in &out[v] {
                indegree[w] -= 1;
                if indegree[w] == 0 {
                    ready.push(w);
                }
            }
        }
        seen == n
    }

    /// Rows scaled to integers, together with the product of the scale
    /// factors (so `det(self) = det(ints) / scale`).
    fn integer_rows(&self) -> (Vec<Vec<BigInt>>, BigInt) {
        let mut scale = BigInt::one();
        let rows = (0..self.rows)
            .map(|r| {
                let row = &self.entries[r * self.cols..(r + 1) * self.cols];
                let lcm = row.iter().fold(BigInt::one(), |acc, e| match e {
                    FieldScalar::Rational(q) => acc.lcm(q.denom()),
                    _ => unreachable!(),
                });
                scale *= &lcm;
                row.iter()
                    .map(|e| match e {
                        FieldScalar::Rational(q) => q.numer() * (&lcm / q.denom()),
                        _ => unreachable!(),
                    })
                    .collect()
            })
            .collect();
        (rows, scale)
    }

    fn residue_rows(&self) -> Vec<Vec<u64>> {
        (0..self.rows)
            .map(|r| {
                self.entries[r * self.cols..(r + 1) * self.cols]
                    .iter()
                    .map(|e| match e {
                        FieldScalar::Residue { value, .. } => *value as u64,
                        _ => unreachable!(),
                    })
                    .collect()
            })
            .collect()
    }
}

/// Fraction-free (Bareiss) elimination on an integer matrix. Returns the
/// determinant (meaningful when square and `stop_on_singular` is set) and
/// the rank. Every intermediate division is exact.
fn bareiss(m: &mut [Vec<BigInt>], stop_on_singular: bool) -> (BigInt, usize) {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut prev = BigInt::one();
    let mut sign = 1i32;
    let mut rank = 0usize;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(pivot) = (rank..rows).find(|&r| !m[r][col].is_zero()) else {
            if stop_on_singular {
                return (BigInt::zero(), rank);
            }
            continue;
        };
        if pivot != rank {
            m.swap(pivot, rank);
            sign = -sign;
        }
        let support: Vec<usize> = (col + 1..cols).filter(|&c| !m[rank][c].is_zero()).collect();
        let (head, tail) = m.split_at_mut(rank + 1);
        let top = &head[rank];
        for row in tail.iter_mut() {
            if row[col].is_zero() {
                if top[col] != prev {
                    for v in row[col + 1..].iter_mut().filter(|v| !v.is_zero()) {
                        *v = &top[col] * &*v / &prev;
                    }
                }
                continue;
            }
            for v in row[col + 1..].iter_mut().filter(|v| !v.is_zero()) {
                *v *= &top[col];
            }
            let factor = std::mem::take(&mut row[col]);
            for &c in &support {
                row[c] -= &factor * &top[c];
            }
            for v in row[col + 1..].iter_mut().filter(|v| !v.is_zero()) {
                *v /= &prev;
            }
        }
        prev = m[rank][col].clone();
        rank += 1;
    }
    let det = if rank == rows && rows == cols {
        if rows == 0 {
            BigInt::one()
        } else {
            prev * sign
        }
    } else {
        BigInt::zero()
    };
    (det, rank)
}

/// Gaussian elimination modulo a prime. Returns (determinant, rank).
fn mod_eliminate(m: &mut [Vec<u64>], p: u64) -> (u64, usize) {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut det = 1u64;
    let mut rank = 0usize;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(pivot) = (rank..rows).find(|&r| m[r][col] != 0) else {
            det = 0;
            continue;
        };
        if pivot != rank {
            m.swap(pivot, rank);
            det = (p - det) % p;
        }
        let pv = m[rank][col];
        det = det * pv % p;
        let inv = mod_pow(pv, p - 2, p);
        for r in rank + 1..rows {
            let factor = m[r][col] * inv % p;
            if factor == 0 {
                continue;
            }
            let (top, bottom) = m.split_at_mut(r);
            for (x, &y) in bottom[0][col..cols].iter_mut().zip(&top[rank][col..cols]) {
                *x = (*x + p - factor * y % p) % p;
            }
        }
        rank += 1;
    }
    if rank < rows || rows != cols {
        det = 0;
    }
    (det, rank)
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: FieldDescriptor = FieldDescriptor::Rationals;

    fn q(n: i64, d: i64) -> FieldScalar {
        Q.from_ratio(n, d)
    }

    #[test]
    fn rational_sum_is_reduced() {
        assert_eq!(q(1, 2) + q(1, 3), q(5, 6));
        assert_eq!((q(1, 2) + q(1, 2)).to_string(), "1");
        assert_eq!(q(-2, 4).to_string(), "-1/2");
    }

    #[test]
    fn inverse_in_gf7() {
        let gf7 = FieldDescriptor::prime(7).unwrap();
        let x = gf7.one().checked_div(&gf7.from_i64(3)).unwrap();
        assert_eq!(x, gf7.from_i64(5));
    }

    #[test]
    fn subtraction_to_zero() {
        let a = q(-7, 3);
        assert!((&a - &a).is_zero());
        let gf2 = FieldDescriptor::prime(2).unwrap();
        assert!((gf2.one() - gf2.one()).is_zero());
    }

    #[test]
    fn arith_errors() {
        let gf5 = FieldDescriptor::prime(5).unwrap();
        assert_eq!(scalar_arith(&q(1, 1), &gf5.one(), ArithOp::Add), Err(FieldError::FieldMismatch(Q, gf5)));
        assert_eq!(scalar_arith(&q(1, 1), &Q.zero(), ArithOp::Div), Err(FieldError::DivisionByZero));
        assert_eq!(scalar_arith(&gf5.one(), &gf5.zero(), ArithOp::Div), Err(FieldError::DivisionByZero));
    }

    #[test]
    fn descriptors() {
        assert_eq!("Q".parse::<FieldDescriptor>().unwrap(), Q);
        assert_eq!("GF:7".parse::<FieldDescriptor>().unwrap(), FieldDescriptor::Prime(7));
        assert!(matches!("GF:8".parse::<FieldDescriptor>(), Err(FieldError::NotPrime(8))));
        assert!("GF:".parse::<FieldDescriptor>().is_err());
        assert!("R".parse::<FieldDescriptor>().is_err());
        assert!(FieldDescriptor::prime(1).is_err());
        assert_eq!(FieldDescriptor::Prime(101).to_string(), "GF:101");
    }

    #[test]
    fn scalar_syntax() {
        assert_eq!(Q.parse_scalar("-3/6").unwrap(), q(-1, 2));
        assert_eq!(Q.parse_scalar("12").unwrap(), q(12, 1));
        for bad in ["", "1/0", "1/-2", "+1", "a", "1/", "--1", "1.5"] {
            assert!(Q.parse_scalar(bad).is_err(), "{bad}");
        }
        let gf7 = FieldDescriptor::Prime(7);
        assert_eq!(gf7.parse_scalar("6").unwrap(), gf7.from_i64(6));
        assert!(gf7.parse_scalar("7").is_err());
        assert!(gf7.parse_scalar("-1").is_err());
    }

    #[test]
    fn triangular_shortcut_agrees_with_elimination() {
        // rows and columns of an upper triangular matrix permuted by (0 2 1)
        let m = ScalarMatrix::from_i64_rows(Q, &[&[3, 0, 0], &[5, -2, 7], &[1, 0, 4]]).unwrap();
        assert!(m.off_diagonal_acyclic());
        let (mut ints, scale) = m.integer_rows();
        let slow = FieldScalar::Rational(BigRational::new(bareiss(&mut ints, true).0, scale));
        assert_eq!(m.determinant().unwrap(), slow);
        assert_eq!(slow, q(-24, 1));
        let cyclic = ScalarMatrix::from_i64_rows(Q, &[&[1, 2], &[3, 4]]).unwrap();
        assert!(!cyclic.off_diagonal_acyclic());
        assert_eq!(cyclic.determinant().unwrap(), q(-2, 1));
    }

    #[test]
    fn determinant_examples() {
        assert!(ScalarMatrix::identity(Q, 4).determinant().unwrap().is_one());
        let p2 = ScalarMatrix::from_i64_rows(Q, &[&[1, 0, 1], &[0, 1, 1], &[0, 0, 1]]).unwrap();
        assert!(p2.determinant().unwrap().is_one());
        let rep = ScalarMatrix::from_i64_rows(Q, &[&[1, 1, 3], &[2, 2, 5], &[7, 7, 1]]).unwrap();
        assert!(rep.determinant().unwrap().is_zero());
        let rect = ScalarMatrix::zeros(Q, 2, 3);
        assert_eq!(rect.determinant(), Err(FieldError::NotSquare { rows: 2, cols: 3 }));
        assert!(ScalarMatrix::zeros(Q, 0, 0).determinant().unwrap().is_one());
    }

    #[test]
    fn determinant_with_fractions_and_swaps() {
        let m = ScalarMatrix::new(Q, 2, 2, vec![q(0, 1), q(1, 2), q(2, 3), q(5, 1)]).unwrap();
        // 0*5 - (1/2)(2/3) = -1/3
        assert_eq!(m.determinant().unwrap(), q(-1, 3));
        let gf5 = FieldDescriptor::Prime(5);
        let m = ScalarMatrix::from_i64_rows(gf5, &[&[0, 1], &[1, 0]]).unwrap();
        assert_eq!(m.determinant().unwrap(), gf5.from_i64(-1));
    }

    #[test]
    fn rank_examples() {
        assert_eq!(ScalarMatrix::zeros(Q, 3, 3).rank(), 0);
        let m = ScalarMatrix::from_i64_rows(Q, &[&[1, 2], &[2, 4]]).unwrap();
        assert_eq!(m.rank(), 1);
        let m = ScalarMatrix::from_i64_rows(FieldDescriptor::Prime(2), &[&[1, 1], &[1, 3]]).unwrap();
        assert_eq!(m.rank(), 1);
        let wide = ScalarMatrix::from_i64_rows(Q, &[&[0, 1, 2], &[0, 2, 5]]).unwrap();
        assert_eq!(wide.rank(), 2);
    }

    #[test]
    fn rational_roots() {
        let roots = q(8, 27).nonzero_roots(&BigUint::from(3u32));
        assert_eq!(roots, vec![q(2, 3)]);
        let roots = q(4, 1).nonzero_roots(&BigUint::from(2u32));
        assert_eq!(roots, vec![q(-2, 1), q(2, 1)]);
        assert!(q(-4, 1).nonzero_roots(&BigUint::from(2u32)).is_empty());
        assert_eq!(q(-8, 1).nonzero_roots(&BigUint::from(3u32)), vec![q(-2, 1)]);
        assert!(q(2, 1).nonzero_roots(&BigUint::from(2u32)).is_empty());
        let huge = BigUint::one() << 200;
        assert_eq!(q(1, 1).nonzero_roots(&huge), vec![q(-1, 1), q(1, 1)]);
        assert!(q(3, 1).nonzero_roots(&huge).is_empty());
    }

    #[test]
    fn residue_roots() {
        let gf7 = FieldDescriptor::Prime(7);
        let cube_roots: Vec<_> = gf7.one().nonzero_roots(&BigUint::from(3u32));
        assert_eq!(cube_roots, vec![gf7.from_i64(1), gf7.from_i64(2), gf7.from_i64(4)]);
        assert!(gf7.from_i64(3).nonzero_roots(&BigUint::from(2u32)).is_empty());
        // exponent divisible by p - 1 collapses to x^0 = 1
        assert_eq!(gf7.one().nonzero_roots(&BigUint::from(6u32)).len(), 6);
    }

    #[test]
    fn pow_matches_repeated_multiplication() {
        let gf5 = FieldDescriptor::Prime(5);
        let x = gf5.from_i64(3);
        assert_eq!(x.pow(&BigUint::from(3u32)), &(&x * &x) * &x);
        assert_eq!(q(-1, 1).pow(&(BigUint::one() << 100)), q(1, 1));
        assert_eq!(q(2, 3).pow(&BigUint::from(2u32)), q(4, 9));
    }
}
