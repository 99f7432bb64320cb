//! Upper unitriangular and strictly upper triangular matrices over `F_{q^k}`,
//! mirror posets, the anti-involutions `†`, and the two Springer maps.
//!
//! Row and column indices in the public API are 1-based, matching `e_{ij}`.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use thiserror::Error;

use crate::gf::{Fe, FieldTower};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TriError {
    #[error("matrix shapes differ ({0} vs {1})")]
    ShapeMismatch(usize, usize),
    #[error("matrices live over different field towers")]
    TowerMismatch,
    #[error("operation needs a unipotent matrix")]
    NotUnipotent,
    #[error("operation needs a nilpotent matrix")]
    NotNilpotent,
    #[error("position ({0},{1}) is not strictly upper triangular for n = {2}")]
    BadPosition(usize, usize, usize),
    #[error("expected {expected} entries, got {got}")]
    BadEntryCount { expected: usize, got: usize },
    #[error("entry {0} is not a field element encoding")]
    BadEntry(u32),
    #[error("truncated logarithm needs nilpotency degree at most p (nilpotency {nilpotency}, p = {p})")]
    LogUndefined { nilpotency: usize, p: u32 },
    #[error("invalid poset: {0}")]
    Poset(String),
    #[error("symplectic involution needs even n, got {0}")]
    OddSymplectic(usize),
    #[error("unitary involution needs k = 2, got k = {0}")]
    UnitaryDegree(u32),
}

/// `1 + x` (unipotent) or `x` (nilpotent), `x` strictly upper triangular.
#[derive(Clone)]
pub struct TriMatrix {
    n: usize,
    tower: Arc<FieldTower>,
    unipotent: bool,
    entries: Vec<Fe>,
}

/// Row-major offset of strict-upper position `(i, j)`, 0-based.
#[inline]
fn offset(n: usize, i: usize, j: usize) -> usize {
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

pub fn strict_upper_positions(n: usize) -> Vec<(usize, usize)> {
    (1..=n).flat_map(|i| (i + 1..=n).map(move |j| (i, j))).collect()
}

impl TriMatrix {
    pub fn zero(n: usize, tower: &Arc<FieldTower>) -> Self {
        TriMatrix { n, tower: tower.clone(), unipotent: false, entries: vec![Fe::ZERO; n * n.saturating_sub(1) / 2] }
    }

    pub fn identity(n: usize, tower: &Arc<FieldTower>) -> Self {
        TriMatrix { unipotent: true, ..Self::zero(n, tower) }
    }

    /// `a·e_{ij}` (nilpotent).
    pub fn elementary(n: usize, tower: &Arc<FieldTower>, i: usize, j: usize, a: Fe) -> Result<Self, TriError> {
        let mut x = Self::zero(n, tower);
        x.set(i, j, a)?;
        Ok(x)
    }

    /// `1 + a·e_{ij}`.
    pub fn root_element(n: usize, tower: &Arc<FieldTower>, i: usize, j: usize, a: Fe) -> Result<Self, TriError> {
        Ok(Self::elementary(n, tower, i, j, a)?.plus_one())
    }

    pub fn from_entries(n: usize, tower: &Arc<FieldTower>, unipotent: bool, enc: &[u32]) -> Result<Self, TriError> {
        let expected = n * n.saturating_sub(1) / 2;
        if enc.len() != expected {
            return Err(TriError::BadEntryCount { expected, got: enc.len() });
        }
        let entries =
            enc.iter().map(|&e| tower.element(e).map_err(|_| TriError::BadEntry(e))).collect::<Result<_, _>>()?;
        Ok(TriMatrix { n, tower: tower.clone(), unipotent, entries })
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn tower(&self) -> &Arc<FieldTower> {
        &self.tower
    }
    pub fn is_unipotent(&self) -> bool {
        self.unipotent
    }

    /// Strict-upper entries in row-major order.
    pub fn raw_entries(&self) -> &[Fe] {
        &self.entries
    }

    /// Serialized form: strict-upper entries, row-major, as field encodings.
    pub fn to_entries(&self) -> Vec<u32> {
        self.entries.iter().map(|e| e.encoding()).collect()
    }

    fn check_pos(&self, i: usize, j: usize) -> Result<usize, TriError> {
        if i >= 1 && i < j && j <= self.n {
            Ok(offset(self.n, i - 1, j - 1))
        } else {
            Err(TriError::BadPosition(i, j, self.n))
        }
    }

    /// Entry at `(i, j)`; diagonal entries of a unipotent matrix read as 1.
    pub fn entry(&self, i: usize, j: usize) -> Fe {
        if i == j && (1..=self.n).contains(&i) {
            return if self.unipotent { Fe::ONE } else { Fe::ZERO };
        }
        match self.check_pos(i, j) {
            Ok(o) => self.entries[o],
            Err(_) => Fe::ZERO,
        }
    }

    pub fn set(&mut self, i: usize, j: usize, a: Fe) -> Result<(), TriError> {
        let o = self.check_pos(i, j)?;
        self.entries[o] = a;
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        !self.unipotent && self.entries.iter().all(|e| e.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.unipotent && self.entries.iter().all(|e| e.is_zero())
    }

    /// `x ↦ 1 + x`.
    pub fn plus_one(mut self) -> Self {
        assert!(!self.unipotent, "plus_one on a unipotent matrix");
        self.unipotent = true;
        self
    }

    /// `1 + x ↦ x`.
    pub fn minus_one(mut self) -> Self {
        assert!(self.unipotent, "minus_one on a nilpotent matrix");
        self.unipotent = false;
        self
    }

    fn compatible(&self, other: &TriMatrix) -> Result<(), TriError> {
        if self.n != other.n {
            return Err(TriError::ShapeMismatch(self.n, other.n));
        }
        if !self.tower.same_as(&other.tower) {
            return Err(TriError::TowerMismatch);
        }
        Ok(())
    }

    fn zip_with(&self, other: &TriMatrix, f: impl Fn(Fe, Fe) -> Fe) -> Result<TriMatrix, TriError> {
        self.compatible(other)?;
        if self.unipotent || other.unipotent {
            return Err(TriError::NotNilpotent);
        }
        let entries = self.entries.iter().zip(&other.entries).map(|(&a, &b)| f(a, b)).collect();
        Ok(TriMatrix { entries, ..self.clone() })
    }

    /// Sum of nilpotent elements.
    pub fn add(&self, other: &TriMatrix) -> Result<TriMatrix, TriError> {
        self.zip_with(other, |a, b| self.tower.add(a, b))
    }

    pub fn sub(&self, other: &TriMatrix) -> Result<TriMatrix, TriError> {
        self.zip_with(other, |a, b| self.tower.sub(a, b))
    }

    /// Scalar multiple of a nilpotent element.
    pub fn scale(&self, a: Fe) -> Result<TriMatrix, TriError> {
        if self.unipotent {
            return Err(TriError::NotNilpotent);
        }
        let entries = self.entries.iter().map(|&e| self.tower.mul(a, e)).collect();
        Ok(TriMatrix { entries, ..self.clone() })
    }

    pub fn neg(&self) -> Result<TriMatrix, TriError> {
        self.scale(self.tower.neg(Fe::ONE))
    }

    /// Product of two strictly upper parts, `x·y`.
    fn strict_product(&self, other: &TriMatrix) -> Vec<Fe> {
        let n = self.n;
        let t = &*self.tower;
        let mut out = vec![Fe::ZERO; self.entries.len()];
        for i in 0..n {
            for k in i + 1..n {
                let a = self.entries[offset(n, i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in k + 1..n {
                    let b = other.entries[offset(n, k, j)];
                    if !b.is_zero() {
                        let o = offset(n, i, j);
                        out[o] = t.add(out[o], t.mul(a, b));
                    }
                }
            }
        }
        out
    }

    /// Product. Unipotent factors are read as `1 + x`; the result is unipotent
    /// exactly when both factors are.
    pub fn mul(&self, other: &TriMatrix) -> Result<TriMatrix, TriError> {
        self.compatible(other)?;
        let t = &*self.tower;
        let mut out = self.strict_product(other);
        if self.unipotent {
            for (o, &b) in out.iter_mut().zip(&other.entries) {
                *o = t.add(*o, b);
            }
        }
        if other.unipotent {
            for (o, &a) in out.iter_mut().zip(&self.entries) {
                *o = t.add(*o, a);
            }
        }
        Ok(TriMatrix {
            n: self.n,
            tower: self.tower.clone(),
            unipotent: self.unipotent && other.unipotent,
            entries: out,
        })
    }

    /// `(1+x)^{-1} = 1 + Σ (-x)^i`.
    pub fn inverse(&self) -> Result<TriMatrix, TriError> {
        if !self.unipotent {
            return Err(TriError::NotUnipotent);
        }
        let neg_x = self.clone().minus_one().neg()?;
        let mut acc = TriMatrix::identity(self.n, &self.tower);
        let mut power = neg_x.clone();
        while !power.is_zero() {
            acc.add_assign_strict(&power);
            power = power.mul(&neg_x)?;
        }
        Ok(acc)
    }

    fn add_assign_strict(&mut self, other: &TriMatrix) {
        for (a, &b) in self.entries.iter_mut().zip(&other.entries) {
            *a = self.tower.add(*a, b);
        }
    }

    /// `x^e` for a nilpotent `x` (`x^0` is the identity, unipotent).
    pub fn nil_pow(&self, e: usize) -> Result<TriMatrix, TriError> {
        if self.unipotent {
            return Err(TriError::NotNilpotent);
        }
        if e == 0 {
            return Ok(TriMatrix::identity(self.n, &self.tower));
        }
        let mut acc = self.clone();
        for _ in 1..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Dense `n × n` form including the diagonal.
    pub fn to_dense(&self) -> Vec<Vec<Fe>> {
        (1..=self.n).map(|i| (1..=self.n).map(|j| self.entry(i, j)).collect()).collect()
    }
}

impl PartialEq for TriMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
            && self.unipotent == other.unipotent
            && self.entries == other.entries
            && self.tower.same_as(&other.tower)
    }
}
impl Eq for TriMatrix {}

impl Hash for TriMatrix {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.n.hash(state);
        self.unipotent.hash(state);
        self.entries.hash(state);
    }
}

/// Canonical order: lexicographic on the serialized entries.
impl Ord for TriMatrix {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.n, self.unipotent, &self.entries).cmp(&(other.n, other.unipotent, &other.entries))
    }
}
impl PartialOrd for TriMatrix {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for TriMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:?}", if self.unipotent { "1+" } else { "" }, self.to_entries())
    }
}

/// A sub-order of the chain on `[n]` that is closed under `i ↦ n+1-i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MirrorPoset {
    n: usize,
    /// `rel[i*n + j]` for strict `i ≺ j`, 0-based.
    rel: Vec<bool>,
}

impl MirrorPoset {
    pub fn chain(n: usize) -> Self {
        let mut rel = vec![false; n * n];
        for i in 0..n {
            for j in i + 1..n {
                rel[i * n + j] = true;
            }
        }
        MirrorPoset { n, rel }
    }

    /// Transitive closure of the given strict relations (1-based), then mirror validation.
    pub fn from_generators(n: usize, pairs: &[(usize, usize)]) -> Result<Self, TriError> {
        let mut rel = vec![false; n * n];
        for &(i, j) in pairs {
            if !(1 <= i && i < j && j <= n) {
                return Err(TriError::Poset(format!("pair ({i},{j}) is not a strict relation i < j in [1,{n}]")));
            }
            rel[(i - 1) * n + (j - 1)] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if rel[i * n + k] {
                    for j in 0..n {
                        if rel[k * n + j] {
                            rel[i * n + j] = true;
                        }
                    }
                }
            }
        }
        let poset = MirrorPoset { n, rel };
        poset.validate()?;
        Ok(poset)
    }

    fn validate(&self) -> Result<(), TriError> {
        let n = self.n;
        for (i, j) in self.positions() {
            let (mi, mj) = (n + 1 - j, n + 1 - i);
            if !self.relates(mi, mj) {
                return Err(TriError::Poset(format!(
                    "not a mirror poset: ({i},{j}) is related but its mirror ({mi},{mj}) is not"
                )));
            }
        }
        Ok(())
    }

    /// On `[2m]`: every `i < j` except `(m, m+1)`.
    pub fn type_d_finer(n: usize) -> Result<Self, TriError> {
        if !n.is_multiple_of(2) || n < 2 {
            return Err(TriError::Poset(format!("type-D poset needs even n >= 2, got {n}")));
        }
        let m = n / 2;
        let pairs: Vec<_> = strict_upper_positions(n).into_iter().filter(|&p| p != (m, m + 1)).collect();
        Self::from_generators(n, &pairs)
    }

    /// On `[2m]`: `i ≼ j` iff `i ≤ j ≤ m` or `m+1 ≤ i ≤ j`.
    pub fn block(n: usize) -> Result<Self, TriError> {
        if !n.is_multiple_of(2) || n < 2 {
            return Err(TriError::Poset(format!("block poset needs even n >= 2, got {n}")));
        }
        let m = n / 2;
        let pairs: Vec<_> = strict_upper_positions(n).into_iter().filter(|&(i, j)| j <= m || i > m).collect();
        Self::from_generators(n, &pairs)
    }

    /// Poset file: first line `n`, then one `i j` generator per line.
    pub fn parse(text: &str) -> Result<Self, TriError> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let n: usize = lines
            .next()
            .ok_or_else(|| TriError::Poset("empty poset file".into()))?
            .parse()
            .map_err(|_| TriError::Poset("first line must be n".into()))?;
        let mut pairs = Vec::new();
        for line in lines {
            let nums: Vec<usize> = line
                .split_whitespace()
                .map(|t| t.parse().map_err(|_| TriError::Poset(format!("bad line {line:?}"))))
                .collect::<Result<_, _>>()?;
            match nums[..] {
                [i, j] => pairs.push((i, j)),
                _ => return Err(TriError::Poset(format!("bad line {line:?}: expected \"i j\""))),
            }
        }
        Self::from_generators(n, &pairs)
    }

    /// Generators of the closed relation as a poset file.
    pub fn to_file_string(&self) -> String {
        let mut s = format!("{}\n", self.n);
        for (i, j) in self.positions() {
            s.push_str(&format!("{i} {j}\n"));
        }
        s
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Strict `i ≺ j`, 1-based.
    pub fn relates(&self, i: usize, j: usize) -> bool {
        (1..=self.n).contains(&i) && (1..=self.n).contains(&j) && self.rel[(i - 1) * self.n + (j - 1)]
    }

    /// Admissible strict positions, row-major.
    pub fn positions(&self) -> Vec<(usize, usize)> {
        strict_upper_positions(self.n).into_iter().filter(|&(i, j)| self.relates(i, j)).collect()
    }

    /// Number of elements in a longest chain; `x^m = 0` on the pattern algebra for this `m`.
    pub fn nilpotency(&self) -> usize {
        let n = self.n;
        let mut longest = vec![1usize; n];
        for j in 0..n {
            for i in 0..j {
                if self.rel[i * n + j] {
                    longest[j] = longest[j].max(longest[i] + 1);
                }
            }
        }
        longest.into_iter().max().unwrap_or(0)
    }

    pub fn is_chain(&self) -> bool {
        *self == Self::chain(self.n)
    }
}

/// Admissible positions `(i, j)`, `i ≺ j`, of the pattern algebra.
pub fn pattern_space(poset: &MirrorPoset) -> Vec<(usize, usize)> {
    poset.positions()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum InvolutionKind {
    Orthogonal,
    Symplectic,
    Unitary,
}

/// `(x†)_{ij} = ε_{ij} σ(x_{j̄ī})`.
#[derive(Clone, Debug)]
pub struct Involution {
    kind: InvolutionKind,
    n: usize,
    tower: Arc<FieldTower>,
    /// 0-based `n × n` sign table.
    eps: Vec<i8>,
}

/// `Ω = [[0, -J], [J, 0]]` as a dense integer matrix.
fn omega(n: usize) -> Vec<Vec<i64>> {
    let m = n / 2;
    let mut w = vec![vec![0i64; n]; n];
    for (a, row) in w.iter_mut().enumerate() {
        row[n - 1 - a] = if a < m { -1 } else { 1 };
    }
    w
}

fn dense_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect()).collect()
}

impl Involution {
    pub fn new(kind: InvolutionKind, n: usize, tower: &Arc<FieldTower>) -> Result<Self, TriError> {
        let mut eps = vec![1i8; n * n];
        match kind {
            InvolutionKind::Orthogonal => {}
            InvolutionKind::Unitary => {
                if tower.k() != 2 {
                    return Err(TriError::UnitaryDegree(tower.k()));
                }
            }
            InvolutionKind::Symplectic => {
                if !n.is_multiple_of(2) {
                    return Err(TriError::OddSymplectic(n));
                }
                // Read ε_{ij} off -Ω e_{j̄ī}^t Ω = -Ω e_{īj̄} Ω at position (i, j).
                let w = omega(n);
                for i in 0..n {
                    for j in 0..n {
                        let mut e = vec![vec![0i64; n]; n];
                        e[n - 1 - i][n - 1 - j] = 1;
                        let v = -dense_mul(&dense_mul(&w, &e), &w)[i][j];
                        debug_assert!(v == 1 || v == -1);
                        eps[i * n + j] = v as i8;
                    }
                }
            }
        }
        Ok(Involution { kind, n, tower: tower.clone(), eps })
    }

    pub fn kind(&self) -> InvolutionKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Sign `ε_{ij}`, 1-based.
    pub fn eps(&self, i: usize, j: usize) -> i8 {
        self.eps[(i - 1) * self.n + (j - 1)]
    }

    #[inline]
    fn sigma(&self, a: Fe) -> Fe {
        match self.kind {
            InvolutionKind::Unitary => self.tower.frobenius_q(a),
            _ => a,
        }
    }

    /// `x†`; on unipotent input, `(1+x)† = 1 + x†`.
    pub fn dagger(&self, x: &TriMatrix) -> Result<TriMatrix, TriError> {
        if x.n != self.n {
            return Err(TriError::ShapeMismatch(x.n, self.n));
        }
        if !x.tower.same_as(&self.tower) {
            return Err(TriError::TowerMismatch);
        }
        let n = self.n;
        let mut out = vec![Fe::ZERO; x.entries.len()];
        for i in 0..n {
            for j in i + 1..n {
                let src = x.entries[offset(n, n - 1 - j, n - 1 - i)];
                let mut v = self.sigma(src);
                if self.eps[i * n + j] < 0 {
                    v = self.tower.neg(v);
                }
                out[offset(n, i, j)] = v;
            }
        }
        Ok(TriMatrix { entries: out, ..x.clone() })
    }
}

fn half_scaled(x: &TriMatrix, sign: i64) -> Result<TriMatrix, TriError> {
    let t = x.tower();
    x.scale(t.mul(t.half(), t.from_int(sign)))
}

/// Cayley map `1+x ↦ 2x(x+2)^{-1} = x(1 + x/2)^{-1}`.
pub fn cayley(g: &TriMatrix) -> Result<TriMatrix, TriError> {
    if !g.is_unipotent() {
        return Err(TriError::NotUnipotent);
    }
    let x = g.clone().minus_one();
    let denom_inv = half_scaled(&x, 1)?.plus_one().inverse()?;
    x.mul(&denom_inv)
}

/// Inverse of [`cayley`]: `z ↦ 1 + (1 - z/2)^{-1} z`.
pub fn cayley_inv(z: &TriMatrix) -> Result<TriMatrix, TriError> {
    if z.is_unipotent() {
        return Err(TriError::NotNilpotent);
    }
    let left = half_scaled(z, -1)?.plus_one().inverse()?;
    Ok(left.mul(z)?.plus_one())
}

fn check_log_bound(t: &FieldTower, nilpotency: usize) -> Result<(), TriError> {
    if nilpotency > t.p() as usize {
        Err(TriError::LogUndefined { nilpotency, p: t.p() })
    } else {
        Ok(())
    }
}

/// `1+x ↦ Σ_{i≥1} (-1)^{i+1} x^i / i` for algebras with `x^m = 0`, `m = nilpotency ≤ p`.
pub fn trunc_log(g: &TriMatrix, nilpotency: usize) -> Result<TriMatrix, TriError> {
    if !g.is_unipotent() {
        return Err(TriError::NotUnipotent);
    }
    let t = g.tower().clone();
    check_log_bound(&t, nilpotency)?;
    let x = g.clone().minus_one();
    let mut acc = TriMatrix::zero(g.n(), &t);
    let mut power = x.clone();
    for i in 1..nilpotency.max(1) {
        let sign = if i % 2 == 1 { 1 } else { -1 };
        let coeff = t.div(t.from_int(sign), t.from_int(i as i64)).expect("i < p is invertible");
        acc = acc.add(&power.scale(coeff)?)?;
        power = power.mul(&x)?;
    }
    debug_assert!(power.is_zero(), "nilpotency bound too small for this element");
    Ok(acc)
}

/// `x ↦ Σ_{i<m} x^i / i!`, inverse of [`trunc_log`] under the same bound.
pub fn trunc_exp(x: &TriMatrix, nilpotency: usize) -> Result<TriMatrix, TriError> {
    if x.is_unipotent() {
        return Err(TriError::NotNilpotent);
    }
    let t = x.tower().clone();
    check_log_bound(&t, nilpotency)?;
    let mut acc = TriMatrix::zero(x.n(), &t);
    let mut power = x.clone();
    let mut fact = Fe::ONE;
    for i in 1..nilpotency.max(1) {
        fact = t.mul(fact, t.from_int(i as i64));
        acc = acc.add(&power.scale(t.inv(fact).expect("i! invertible for i < p"))?)?;
        power = power.mul(x)?;
    }
    Ok(acc.plus_one())
}
