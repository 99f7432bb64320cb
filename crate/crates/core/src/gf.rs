//! Exact arithmetic in the field tower `F_p ⊆ F_q ⊆ F_{q^k}` for odd `p`.
//!
//! A [`FieldTower`] is built once by [`make_tower`] and is immutable
//! afterwards. Elements of the top field are small integers ([`Fe`]): the
//! canonical encoding of `c_0 + c_1 t + … + c_{d-1} t^{d-1}` is
//! `c_0 + c_1 p + … + c_{d-1} p^{d-1}`, constant coefficient least
//! significant. That encoding is the wire format used by every other module.
//!
//! Hot loops call the tower methods (`tower.mul(a, b)`) on raw [`Fe`]
//! values. [`FieldElement`] carries its tower and refuses to mix towers.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use thiserror::Error;

/// Largest supported top-field order; everything here is exhaustive.
pub const MAX_FIELD_ORDER: u64 = 1 << 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GfError {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("characteristic {0} is even; only odd characteristic is supported")]
    EvenCharacteristic(u32),
    #[error("extension degrees must be positive (e = {e}, k = {k})")]
    ZeroDegree { e: u32, k: u32 },
    #[error("field of order {p}^{degree} exceeds the exhaustive-enumeration limit 2^16")]
    TooLarge { p: u32, degree: u32 },
    #[error("encoding {0} is out of range for this field")]
    OutOfRange(u32),
    #[error("element {0} does not lie in the subfield F_q")]
    NotInSubfield(u32),
    #[error("operation requires k = 2, tower has k = {0}")]
    WrongDegree(u32),
    #[error("elements belong to different field towers")]
    TowerMismatch,
}

/// Raw element of the top field `F_{q^k}`, in canonical encoding.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fe(u16);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    #[inline]
    pub fn encoding(self) -> u32 {
        self.0 as u32
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Fe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Choice of the nontrivial additive character `θ: F_q → C^×`.
///
/// `Standard` is `a ↦ ζ_p^{Tr(a)}`; `Alternate` is `a ↦ ζ_p^{Tr(2a)}`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Theta {
    #[default]
    Standard,
    Alternate,
}

impl Theta {
    /// Scalar `c` with `θ(a) = ζ_p^{Tr(c·a)}`.
    pub fn scale(self) -> u32 {
        match self {
            Theta::Standard => 1,
            Theta::Alternate => 2,
        }
    }
}

#[derive(Debug)]
pub struct FieldTower {
    p: u32,
    e: u32,
    k: u32,
    q: u32,
    order: u32,
    modulus: Vec<u32>,
    add_table: Option<Vec<u16>>,
    neg: Vec<u16>,
    /// `exp[i] = ω^i` for `0 ≤ i < 2(order-1)`.
    exp: Vec<u16>,
    log: Vec<u32>,
    frob_q: Vec<u16>,
    fq_basis: Vec<Fe>,
    /// Digit index of each element of `F_q` against `fq_basis`, `u32::MAX` outside `F_q`.
    fq_index: Vec<u32>,
    fq_elems: Vec<Fe>,
    /// `Tr_{F_q/F_p}` for elements of `F_q`, `u32::MAX` outside.
    trace: Vec<u32>,
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

// Dense polynomials over F_p, constant coefficient first.

fn poly_trim(a: &mut Vec<u32>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    poly_trim(&mut r);
    let dm = m.len() - 1;
    let lead_inv = mod_inv(m[dm], p);
    while r.len() > dm {
        let shift = r.len() - 1 - dm;
        let c = (*r.last().unwrap() as u64 * lead_inv as u64 % p as u64) as u32;
        for (i, &mi) in m.iter().enumerate() {
            let sub = (c as u64 * mi as u64 % p as u64) as u32;
            r[shift + i] = (r[shift + i] + p - sub) % p;
        }
        poly_trim(&mut r);
    }
    r
}

fn poly_mulmod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        for (j, &bj) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + ai as u64 * bj as u64) % p as u64;
        }
    }
    let prod: Vec<u32> = prod.into_iter().map(|c| c as u32).collect();
    poly_rem(&prod, m, p)
}

fn mod_inv(a: u32, p: u32) -> u32 {
    mod_pow(a as u64, (p - 2) as u64, p as u64) as u32
}

fn mod_pow(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

fn digits_of(mut enc: u32, p: u32, d: usize) -> Vec<u32> {
    let mut out = vec![0; d];
    for c in out.iter_mut() {
        *c = enc % p;
        enc /= p;
    }
    out
}

fn encode_digits(c: &[u32], p: u32) -> u32 {
    c.iter().rev().fold(0, |acc, &ci| acc * p + ci)
}

/// Exhaustive irreducibility test: no monic factor of degree `1..=d/2`.
fn is_irreducible(m: &[u32], p: u32) -> bool {
    let d = m.len() - 1;
    if d <= 1 {
        return d == 1;
    }
    for fd in 1..=d / 2 {
        let count = (p as u64).pow(fd as u32);
        for low in 0..count {
            let mut f = digits_of(low as u32, p, fd);
            f.push(1);
            if poly_rem(m, &f, p).is_empty() {
                return false;
            }
        }
    }
    true
}

/// Lexicographically smallest monic irreducible of degree `d`, comparing
/// coefficient vectors constant-first.
fn smallest_irreducible(p: u32, d: usize) -> Vec<u32> {
    let count = (p as u64).pow(d as u32);
    // Enumerate with c_0 as the most significant position.
    for idx in 0..count {
        let mut c = vec![0u32; d];
        let mut rest = idx;
        for slot in (0..d).rev() {
            c[slot] = (rest % p as u64) as u32;
            rest /= p as u64;
        }
        c.push(1);
        if is_irreducible(&c, p) {
            return c;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

/// Builds the tower `F_p ⊆ F_{p^e} ⊆ F_{p^{e k}}`.
pub fn make_tower(p: u32, e: u32, k: u32) -> Result<Arc<FieldTower>, GfError> {
    if !is_prime(p) {
        return Err(GfError::NotPrime(p));
    }
    if p == 2 {
        return Err(GfError::EvenCharacteristic(p));
    }
    if e == 0 || k == 0 {
        return Err(GfError::ZeroDegree { e, k });
    }
    let degree = e * k;
    let order = (p as u64).checked_pow(degree).unwrap_or(u64::MAX);
    if order > MAX_FIELD_ORDER {
        return Err(GfError::TooLarge { p, degree });
    }
    Ok(Arc::new(FieldTower::build(p, e, k, order as u32)))
}

impl FieldTower {
    fn build(p: u32, e: u32, k: u32, order: u32) -> Self {
        let d = (e * k) as usize;
        let modulus = smallest_irreducible(p, d);
        let q = p.pow(e);
        let n_units = order - 1;

        let neg: Vec<u16> = (0..order)
            .map(|a| {
                let c: Vec<u32> = digits_of(a, p, d).iter().map(|&x| (p - x) % p).collect();
                encode_digits(&c, p) as u16
            })
            .collect();
        let add_table = (order <= 1024).then(|| {
            let mut t = vec![0u16; (order * order) as usize];
            for a in 0..order {
                let da = digits_of(a, p, d);
                for b in 0..order {
                    let db = digits_of(b, p, d);
                    let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                    t[(a * order + b) as usize] = encode_digits(&s, p) as u16;
                }
            }
            t
        });

        // Primitive element: smallest encoding whose multiplicative order is order-1.
        let factors = prime_factors(n_units as u64);
        let one = vec![1u32];
        let pow_poly = |base: &[u32], mut ex: u64| {
            let mut r = one.clone();
            let mut b = base.to_vec();
            while ex > 0 {
                if ex & 1 == 1 {
                    r = poly_mulmod(&r, &b, &modulus, p);
                }
                b = poly_mulmod(&b, &b, &modulus, p);
                ex >>= 1;
            }
            r
        };
        let generator = (1..order)
            .map(|enc| {
                let mut c = digits_of(enc, p, d);
                poly_trim(&mut c);
                c
            })
            .find(|c| factors.iter().all(|&r| pow_poly(c, n_units as u64 / r) != one))
            .expect("multiplicative group of a finite field is cyclic");

        let mut exp = vec![0u16; 2 * n_units as usize];
        let mut log = vec![0u32; order as usize];
        let mut cur = one.clone();
        for i in 0..n_units {
            let mut padded = cur.clone();
            padded.resize(d, 0);
            let enc = encode_digits(&padded, p);
            exp[i as usize] = enc as u16;
            exp[(i + n_units) as usize] = enc as u16;
            log[enc as usize] = i;
            cur = poly_mulmod(&cur, &generator, &modulus, p);
        }

        let frob_q: Vec<u16> = (0..order)
            .map(|a| {
                if a == 0 {
                    0
                } else {
                    let l = log[a as usize] as u64 * q as u64 % n_units as u64;
                    exp[l as usize]
                }
            })
            .collect();

        let mut tower = FieldTower {
            p,
            e,
            k,
            q,
            order,
            modulus,
            add_table,
            neg,
            exp,
            log,
            frob_q,
            fq_basis: Vec::new(),
            fq_index: Vec::new(),
            fq_elems: Vec::new(),
            trace: Vec::new(),
        };

        // γ = ω^{(q^k-1)/(q-1)} generates F_q^×, so 1, γ, …, γ^{e-1} is an F_p-basis of F_q.
        let gamma = tower.exp[(n_units / (q - 1)) as usize];
        let fq_basis: Vec<Fe> = (0..e).map(|s| tower.pow(Fe(gamma), s as u64)).collect();
        let mut fq_index = vec![u32::MAX; order as usize];
        let mut fq_elems = Vec::with_capacity(q as usize);
        for idx in 0..q {
            let dig = digits_of(idx, p, e as usize);
            let mut acc = Fe::ZERO;
            for (s, &ds) in dig.iter().enumerate() {
                acc = tower.add(acc, tower.mul(tower.from_int(ds as i64), fq_basis[s]));
            }
            fq_index[acc.0 as usize] = idx;
            fq_elems.push(acc);
        }
        let mut trace = vec![u32::MAX; order as usize];
        for &a in &fq_elems {
            let mut acc = Fe::ZERO;
            let mut conj = a;
            for _ in 0..e {
                acc = tower.add(acc, conj);
                conj = tower.pow(conj, p as u64);
            }
            debug_assert!(acc.encoding() < p);
            trace[a.0 as usize] = acc.encoding();
        }
        tower.fq_basis = fq_basis;
        tower.fq_index = fq_index;
        tower.fq_elems = fq_elems;
        tower.trace = trace;
        tower
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn e(&self) -> u32 {
        self.e
    }
    pub fn k(&self) -> u32 {
        self.k
    }
    /// Size of the scalar subfield `F_q`.
    pub fn q(&self) -> u32 {
        self.q
    }
    /// Size of the top field `F_{q^k}`.
    pub fn order(&self) -> u32 {
        self.order
    }
    /// `[F_{q^k} : F_p]`.
    pub fn degree(&self) -> usize {
        (self.e * self.k) as usize
    }
    /// Monic modulus defining the top field, constant coefficient first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn same_as(&self, other: &FieldTower) -> bool {
        std::ptr::eq(self, other) || (self.p, self.e, self.k) == (other.p, other.e, other.k)
    }

    pub fn element(&self, enc: u32) -> Result<Fe, GfError> {
        if enc < self.order {
            Ok(Fe(enc as u16))
        } else {
            Err(GfError::OutOfRange(enc))
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = Fe> {
        (0..self.order).map(|a| Fe(a as u16))
    }

    /// Image of an integer under `Z → F_p ⊆ F_{q^k}`.
    pub fn from_int(&self, v: i64) -> Fe {
        Fe(v.rem_euclid(self.p as i64) as u16)
    }

    pub fn digits(&self, a: Fe) -> Vec<u32> {
        digits_of(a.encoding(), self.p, self.degree())
    }

    pub fn from_digits(&self, c: &[u32]) -> Fe {
        debug_assert_eq!(c.len(), self.degree());
        Fe(encode_digits(c, self.p) as u16)
    }

    /// `t^r` for `r < e k`: the polynomial `F_p`-basis of the top field.
    pub fn fp_basis(&self) -> Vec<Fe> {
        (0..self.degree() as u32).map(|r| Fe(self.p.pow(r) as u16)).collect()
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        match &self.add_table {
            Some(t) => Fe(t[a.0 as usize * self.order as usize + b.0 as usize]),
            None => {
                let (mut x, mut y) = (a.encoding(), b.encoding());
                let (mut out, mut place) = (0u32, 1u32);
                while x > 0 || y > 0 {
                    out += ((x % self.p + y % self.p) % self.p) * place;
                    x /= self.p;
                    y /= self.p;
                    place *= self.p;
                }
                Fe(out as u16)
            }
        }
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        Fe(self.neg[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        if a.0 == 0 || b.0 == 0 {
            return Fe::ZERO;
        }
        Fe(self.exp[(self.log[a.0 as usize] + self.log[b.0 as usize]) as usize])
    }

    pub fn inv(&self, a: Fe) -> Option<Fe> {
        if a.0 == 0 {
            return None;
        }
        let n = self.order - 1;
        Some(Fe(self.exp[((n - self.log[a.0 as usize]) % n) as usize]))
    }

    pub fn div(&self, a: Fe, b: Fe) -> Option<Fe> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    pub fn pow(&self, a: Fe, ex: u64) -> Fe {
        if ex == 0 {
            return Fe::ONE;
        }
        if a.0 == 0 {
            return Fe::ZERO;
        }
        let n = (self.order - 1) as u64;
        Fe(self.exp[(self.log[a.0 as usize] as u64 * (ex % n) % n) as usize])
    }

    /// `a ↦ a^q`.
    #[inline]
    pub fn frobenius_q(&self, a: Fe) -> Fe {
        Fe(self.frob_q[a.0 as usize])
    }

    /// `a + a^q`, landing in `F_q`. Only meaningful for `k = 2`.
    pub fn herm_trace(&self, a: Fe) -> Result<Fe, GfError> {
        if self.k != 2 {
            return Err(GfError::WrongDegree(self.k));
        }
        Ok(self.add(a, self.frobenius_q(a)))
    }

    pub fn in_fq(&self, a: Fe) -> bool {
        self.fq_index[a.0 as usize] != u32::MAX
    }

    /// `F_p`-basis `1, γ, …, γ^{e-1}` of the scalar field `F_q`.
    pub fn fq_basis(&self) -> &[Fe] {
        &self.fq_basis
    }

    /// All elements of `F_q`, ordered by their digits against [`Self::fq_basis`].
    pub fn fq_elements(&self) -> &[Fe] {
        &self.fq_elems
    }

    /// Digits of `a ∈ F_q` against [`Self::fq_basis`].
    pub fn fq_digits(&self, a: Fe) -> Result<Vec<u32>, GfError> {
        match self.fq_index[a.0 as usize] {
            u32::MAX => Err(GfError::NotInSubfield(a.encoding())),
            idx => Ok(digits_of(idx, self.p, self.e as usize)),
        }
    }

    pub fn fq_from_digits(&self, c: &[u32]) -> Fe {
        self.fq_elems[encode_digits(c, self.p) as usize]
    }

    /// `Tr_{F_q/F_p}(a)` as an integer in `[0, p)`.
    pub fn trace_fq(&self, a: Fe) -> Result<u32, GfError> {
        match self.trace[a.0 as usize] {
            u32::MAX => Err(GfError::NotInSubfield(a.encoding())),
            t => Ok(t),
        }
    }

    /// Exponent `Tr(a)` of the standard additive character `θ(a) = ζ_p^{Tr(a)}`.
    pub fn additive_char_exponent(&self, a: Fe) -> Result<u32, GfError> {
        self.trace_fq(a)
    }

    /// Exponent of the chosen character: `Tr(c·a)` with `c` from [`Theta::scale`].
    pub fn char_exponent(&self, theta: Theta, a: Fe) -> Result<u32, GfError> {
        Ok(self.trace_fq(a)? * theta.scale() % self.p)
    }

    /// `2^{-1}` in the prime field.
    pub fn half(&self) -> Fe {
        self.from_int(self.p.div_ceil(2) as i64)
    }
}

/// A top-field element that knows its tower.
#[derive(Clone)]
pub struct FieldElement {
    tower: Arc<FieldTower>,
    value: Fe,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldElement({} in F_{})", self.value.0, self.tower.order)
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.tower.same_as(&other.tower) && self.value == other.value
    }
}
impl Eq for FieldElement {}

impl FieldElement {
    pub fn new(tower: &Arc<FieldTower>, enc: u32) -> Result<Self, GfError> {
        Ok(FieldElement { value: tower.element(enc)?, tower: tower.clone() })
    }

    pub fn from_raw(tower: &Arc<FieldTower>, value: Fe) -> Self {
        debug_assert!(value.encoding() < tower.order());
        FieldElement { tower: tower.clone(), value }
    }

    pub fn tower(&self) -> &Arc<FieldTower> {
        &self.tower
    }
    pub fn raw(&self) -> Fe {
        self.value
    }
    pub fn encode(&self) -> u32 {
        self.value.encoding()
    }

    fn check(&self, other: &FieldElement) -> Result<(), GfError> {
        if self.tower.same_as(&other.tower) {
            Ok(())
        } else {
            Err(GfError::TowerMismatch)
        }
    }

    pub fn try_add(&self, other: &FieldElement) -> Result<FieldElement, GfError> {
        self.check(other)?;
        Ok(self.with(self.tower.add(self.value, other.value)))
    }

    pub fn try_sub(&self, other: &FieldElement) -> Result<FieldElement, GfError> {
        self.check(other)?;
        Ok(self.with(self.tower.sub(self.value, other.value)))
    }

    pub fn try_mul(&self, other: &FieldElement) -> Result<FieldElement, GfError> {
        self.check(other)?;
        Ok(self.with(self.tower.mul(self.value, other.value)))
    }

    pub fn inv(&self) -> Option<FieldElement> {
        self.tower.inv(self.value).map(|v| self.with(v))
    }

    pub fn frobenius_q(&self) -> FieldElement {
        self.with(self.tower.frobenius_q(self.value))
    }

    pub fn herm_trace(&self) -> Result<FieldElement, GfError> {
        Ok(self.with(self.tower.herm_trace(self.value)?))
    }

    pub fn additive_char_exponent(&self) -> Result<u32, GfError> {
        self.tower.additive_char_exponent(self.value)
    }

    fn with(&self, value: Fe) -> FieldElement {
        FieldElement { tower: self.tower.clone(), value }
    }
}

macro_rules! checked_op {
    ($trait:ident, $method:ident, $try:ident) => {
        impl $trait for &FieldElement {
            type Output = FieldElement;
            /// Panics when the operands come from different towers.
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                self.$try(rhs).expect("cross-tower field arithmetic")
            }
        }
    };
}

checked_op!(Add, add, try_add);
checked_op!(Sub, sub, try_sub);
checked_op!(Mul, mul, try_mul);

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        self.with(self.tower.neg(self.value))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Square-and-multiply in F_p[t]/(m), written independently of the tables.
    fn naive_pow(a: u32, ex: u64, m: &[u32], p: u32) -> u32 {
        let d = m.len() - 1;
        let mut base = digits_of(a, p, d);
        poly_trim(&mut base);
        let mut r = vec![1u32];
        let mut ex = ex;
        while ex > 0 {
            if ex & 1 == 1 {
                r = poly_mulmod(&r, &base, m, p);
            }
            base = poly_mulmod(&base, &base, m, p);
            ex >>= 1;
        }
        r.resize(d, 0);
        encode_digits(&r, p)
    }

    #[test]
    fn f9_modulus_is_t_squared_plus_one() {
        // Monic degree-2 candidates with nonzero constant term in constant-first
        // lexicographic order: t^2+1, t^2+t+1, t^2+2t+1, ... The first has no root in F_3.
        let has_root = |c0: u32, c1: u32| (0..3).any(|x| (x * x + c1 * x + c0).is_multiple_of(3));
        assert!(!has_root(1, 0));
        assert!(has_root(1, 1) && has_root(1, 2));
        let t = make_tower(3, 1, 2).unwrap();
        assert_eq!(t.modulus(), &[1, 0, 1]);
        assert_eq!(t.order(), 9);
        assert_eq!(t.q(), 3);
    }

    #[test]
    fn prime_field_and_errors() {
        let t = make_tower(3, 1, 1).unwrap();
        assert_eq!(t.order(), 3);
        assert_eq!(t.modulus().len(), 2);
        assert_eq!(make_tower(2, 1, 1).unwrap_err(), GfError::EvenCharacteristic(2));
        assert_eq!(make_tower(9, 1, 1).unwrap_err(), GfError::NotPrime(9));
        assert!(matches!(make_tower(3, 11, 1), Err(GfError::TooLarge { .. })));
        assert!(matches!(make_tower(3, 0, 1), Err(GfError::ZeroDegree { .. })));
    }

    #[test]
    fn frobenius_examples() {
        let t = make_tower(3, 1, 2).unwrap();
        assert_eq!(t.frobenius_q(Fe::ZERO), Fe::ZERO);
        for a in 0..3 {
            assert_eq!(t.frobenius_q(Fe(a)), Fe(a));
        }
        // t encodes as 3; t^3 = -t = 2t encodes as 6.
        assert_eq!(naive_pow(3, 3, t.modulus(), 3), 6);
        assert_eq!(t.frobenius_q(Fe(3)), Fe(6));
    }

    #[test]
    fn herm_trace_examples() {
        let t = make_tower(3, 1, 2).unwrap();
        assert_eq!(t.herm_trace(Fe::ZERO).unwrap(), Fe::ZERO);
        assert_eq!(t.herm_trace(Fe(3)).unwrap(), Fe::ZERO);
        assert_eq!(t.herm_trace(Fe::ONE).unwrap(), Fe(2));
        let kernel = t.elements().filter(|&a| t.herm_trace(a).unwrap().is_zero()).count();
        assert_eq!(kernel, 3);
        let f3 = make_tower(3, 1, 1).unwrap();
        assert_eq!(f3.herm_trace(Fe::ONE), Err(GfError::WrongDegree(1)));
    }

    #[test]
    fn trace_examples() {
        let f3 = make_tower(3, 1, 1).unwrap();
        for a in 0..3 {
            assert_eq!(f3.additive_char_exponent(Fe(a)).unwrap(), a as u32);
        }
        // F_9 as F_q with e = 2: Tr(t) = t + t^3 = 0.
        let f9 = make_tower(3, 2, 1).unwrap();
        assert_eq!(f9.additive_char_exponent(Fe(3)).unwrap(), 0);
        assert_eq!(f9.additive_char_exponent(Fe::ZERO).unwrap(), 0);
        let f9k = make_tower(3, 1, 2).unwrap();
        assert_eq!(f9k.additive_char_exponent(Fe(3)), Err(GfError::NotInSubfield(3)));
    }

    #[test]
    fn tables_agree_with_naive_powering() {
        for (p, e, k) in [(3, 1, 2), (5, 1, 2), (3, 2, 2), (7, 1, 1), (3, 3, 1)] {
            let t = make_tower(p, e, k).unwrap();
            for a in t.elements() {
                assert_eq!(t.pow(a, 5).encoding(), naive_pow(a.encoding(), 5, t.modulus(), p));
                assert_eq!(t.frobenius_q(a).encoding(), naive_pow(a.encoding(), t.q() as u64, t.modulus(), p));
            }
        }
    }

    #[test]
    fn subfield_structure() {
        for (p, e, k) in [(3, 1, 2), (5, 1, 2), (3, 2, 2), (3, 2, 1)] {
            let t = make_tower(p, e, k).unwrap();
            let fixed: Vec<Fe> = t.elements().filter(|&a| t.frobenius_q(a) == a).collect();
            assert_eq!(fixed.len() as u32, t.q());
            assert!(fixed.iter().all(|&a| t.in_fq(a)));
            assert_eq!(t.fq_elements().len() as u32, t.q());
            if k == 2 {
                assert!(t.elements().all(|a| t.frobenius_q(t.frobenius_q(a)) == a));
                for a in t.elements() {
                    assert!(t.in_fq(t.herm_trace(a).unwrap()));
                }
                let kernel = t.elements().filter(|&a| t.herm_trace(a).unwrap().is_zero()).count();
                assert_eq!(kernel as u32, t.q());
            }
            // trace is an additive surjection onto Z/p
            let mut hit = vec![false; p as usize];
            for &a in t.fq_elements() {
                hit[t.trace_fq(a).unwrap() as usize] = true;
                for &b in t.fq_elements() {
                    let lhs = t.trace_fq(t.add(a, b)).unwrap();
                    assert_eq!(lhs, (t.trace_fq(a).unwrap() + t.trace_fq(b).unwrap()) % p);
                }
            }
            assert!(hit.iter().all(|&h| h));
            for &a in t.fq_elements() {
                assert_eq!(t.fq_from_digits(&t.fq_digits(a).unwrap()), a);
            }
        }
    }

    #[test]
    fn cross_tower_is_an_error() {
        let a = FieldElement::new(&make_tower(3, 1, 2).unwrap(), 1).unwrap();
        let b = FieldElement::new(&make_tower(5, 1, 1).unwrap(), 1).unwrap();
        assert_eq!(a.try_add(&b), Err(GfError::TowerMismatch));
        let c = FieldElement::new(&make_tower(3, 1, 2).unwrap(), 4).unwrap();
        assert_eq!((&a + &c).encode(), 5);
    }

    proptest! {
        #[test]
        fn encoding_round_trips(enc in 0u32..81) {
            let t = make_tower(3, 2, 2).unwrap();
            let a = t.element(enc).unwrap();
            prop_assert_eq!(t.from_digits(&t.digits(a)), a);
            prop_assert_eq!(a.encoding(), enc);
        }

        #[test]
        fn field_axioms_f25(a in 0u32..25, b in 0u32..25, c in 0u32..25) {
            let t = make_tower(5, 1, 2).unwrap();
            let (a, b, c) = (Fe(a as u16), Fe(b as u16), Fe(c as u16));
            prop_assert_eq!(t.mul(a, t.add(b, c)), t.add(t.mul(a, b), t.mul(a, c)));
            prop_assert_eq!(t.add(a, t.neg(a)), Fe::ZERO);
            if !a.is_zero() {
                prop_assert_eq!(t.mul(a, t.inv(a).unwrap()), Fe::ONE);
            }
            prop_assert_eq!(t.frobenius_q(t.mul(a, b)), t.mul(t.frobenius_q(a), t.frobenius_q(b)));
        }
    }
}
