//! Exact arithmetic in `Z[ζ_p]` and `Q(ζ_p)`.
//!
//! Values are stored in the power basis `1, ζ, …, ζ^{p-2}`; `ζ^{p-1}` is
//! rewritten as `-(1 + ζ + … + ζ^{p-2})`, so equality is a coefficient compare.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CycloError {
    #[error("root orders differ ({0} vs {1})")]
    OrderMismatch(u32, u32),
    #[error("class functions have {values} values but {sizes} class sizes")]
    SizeMismatch { values: usize, sizes: usize },
    #[error("class sizes sum to {sum}, expected group order {order}")]
    OrderSum { sum: BigInt, order: BigInt },
    #[error("coefficient vector has length {got}, expected {expected}")]
    BadLength { got: usize, expected: usize },
    #[error("zero denominator")]
    ZeroDenominator,
}

/// An element of `Z[ζ_p]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CycloValue {
    p: u32,
    coeffs: Vec<BigInt>,
}

impl CycloValue {
    pub fn zero(p: u32) -> Self {
        CycloValue { p, coeffs: vec![BigInt::zero(); (p - 1) as usize] }
    }

    pub fn one(p: u32) -> Self {
        Self::from_int(p, BigInt::one())
    }

    pub fn from_int(p: u32, v: impl Into<BigInt>) -> Self {
        let mut z = Self::zero(p);
        z.coeffs[0] = v.into();
        z
    }

    /// `ζ_p^exponent`.
    pub fn root_power(p: u32, exponent: i64) -> Self {
        let mut counts = vec![0i64; p as usize];
        counts[exponent.rem_euclid(p as i64) as usize] = 1;
        Self::from_exponent_counts(p, &counts)
    }

    /// `Σ_j counts[j] ζ^j` for `j < p`.
    pub fn from_exponent_counts(p: u32, counts: &[i64]) -> Self {
        assert_eq!(counts.len(), p as usize, "need one count per p-th root of unity");
        let top = counts[p as usize - 1];
        let coeffs = counts[..p as usize - 1].iter().map(|&c| BigInt::from(c - top)).collect();
        CycloValue { p, coeffs }
    }

    pub fn from_coeffs(p: u32, coeffs: Vec<BigInt>) -> Result<Self, CycloError> {
        if coeffs.len() != (p - 1) as usize {
            return Err(CycloError::BadLength { got: coeffs.len(), expected: (p - 1) as usize });
        }
        Ok(CycloValue { p, coeffs })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The value as a rational integer, when it is one.
    pub fn as_integer(&self) -> Option<&BigInt> {
        self.coeffs[1..].iter().all(Zero::is_zero).then(|| &self.coeffs[0])
    }

    fn check(&self, other: &CycloValue) {
        assert_eq!(self.p, other.p, "cyclotomic values with different root orders");
    }

    pub fn try_add(&self, other: &CycloValue) -> Result<CycloValue, CycloError> {
        if self.p != other.p {
            return Err(CycloError::OrderMismatch(self.p, other.p));
        }
        Ok(self + other)
    }

    pub fn scale(&self, s: &BigInt) -> CycloValue {
        CycloValue { p: self.p, coeffs: self.coeffs.iter().map(|c| c * s).collect() }
    }

    /// Exact division by a nonzero integer; `None` if some coefficient is not divisible.
    pub fn div_exact(&self, d: &BigInt) -> Option<CycloValue> {
        if d.is_zero() {
            return None;
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            let (quot, rem) = c.div_rem(d);
            if !rem.is_zero() {
                return None;
            }
            coeffs.push(quot);
        }
        Some(CycloValue { p: self.p, coeffs })
    }

    /// Expanded coefficients on all `p` roots, `ζ^{p-1}` slot zero.
    fn full(&self) -> Vec<BigInt> {
        let mut v = self.coeffs.clone();
        v.push(BigInt::zero());
        v
    }

    fn from_full(p: u32, mut v: Vec<BigInt>) -> Self {
        let top = v.pop().expect("p slots");
        if !top.is_zero() {
            for c in v.iter_mut() {
                *c -= &top;
            }
        }
        CycloValue { p, coeffs: v }
    }

    /// Galois automorphism `ζ ↦ ζ^a` for `a` prime to `p`.
    pub fn galois(&self, a: i64) -> CycloValue {
        let p = self.p as i64;
        assert!(a.rem_euclid(p) != 0, "Galois exponent must be a unit mod p");
        let full = self.full();
        let mut out = vec![BigInt::zero(); p as usize];
        for (j, c) in full.into_iter().enumerate() {
            out[(j as i64 * a).rem_euclid(p) as usize] += c;
        }
        Self::from_full(self.p, out)
    }

    /// Complex conjugation `ζ ↦ ζ^{-1}`.
    pub fn conjugate(&self) -> CycloValue {
        self.galois(-1)
    }

    /// Rendering `c0+c1·z+…+c_{p-2}·z^{p-2}`, every coefficient written out.
    pub fn to_poly_string(&self) -> String {
        let mut s = self.coeffs[0].to_string();
        for (i, c) in self.coeffs.iter().enumerate().skip(1) {
            let mon = if i == 1 { "z".to_string() } else { format!("z^{i}") };
            if c.is_negative() {
                s.push_str(&format!("-{}·{mon}", c.abs()));
            } else {
                s.push_str(&format!("+{c}·{mon}"));
            }
        }
        s
    }
}

impl fmt::Display for CycloValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_poly_string())
    }
}

impl Add for &CycloValue {
    type Output = CycloValue;
    fn add(self, rhs: &CycloValue) -> CycloValue {
        self.check(rhs);
        CycloValue { p: self.p, coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &CycloValue {
    type Output = CycloValue;
    fn sub(self, rhs: &CycloValue) -> CycloValue {
        self.check(rhs);
        CycloValue { p: self.p, coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect() }
    }
}

impl Neg for &CycloValue {
    type Output = CycloValue;
    fn neg(self) -> CycloValue {
        CycloValue { p: self.p, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Mul for &CycloValue {
    type Output = CycloValue;
    fn mul(self, rhs: &CycloValue) -> CycloValue {
        self.check(rhs);
        let p = self.p as usize;
        let mut out = vec![BigInt::zero(); p];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[(i + j) % p] += a * b;
                }
            }
        }
        CycloValue::from_full(self.p, out)
    }
}

/// An element of `Q(ζ_p)`: numerator over a positive integer denominator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CycloRational {
    num: CycloValue,
    den: BigInt,
}

impl CycloRational {
    pub fn new(num: CycloValue, den: impl Into<BigInt>) -> Result<Self, CycloError> {
        let den = den.into();
        if den.is_zero() {
            return Err(CycloError::ZeroDenominator);
        }
        let mut r = CycloRational { num, den };
        r.reduce();
        Ok(r)
    }

    pub fn from_value(v: CycloValue) -> Self {
        CycloRational { num: v, den: BigInt::one() }
    }

    fn reduce(&mut self) {
        if self.den.is_negative() {
            self.den = -&self.den;
            self.num = -&self.num;
        }
        let g = self.num.coeffs.iter().fold(self.den.clone(), |g, c| g.gcd(c));
        if !g.is_one() {
            self.num = self.num.div_exact(&g).expect("gcd divides every coefficient");
            self.den = &self.den / &g;
        }
    }

    pub fn numerator(&self) -> &CycloValue {
        &self.num
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The value as a rational integer, when it is one.
    pub fn as_integer(&self) -> Option<&BigInt> {
        if self.den.is_one() {
            self.num.as_integer()
        } else {
            None
        }
    }

    pub fn is_conjugation_fixed(&self) -> bool {
        self.num.conjugate() == self.num
    }
}

/// `(1/order) Σ_K |K| f(K) conj(g(K))`, exactly.
pub fn inner_product(
    f: &[CycloValue],
    g: &[CycloValue],
    sizes: &[BigInt],
    order: &BigInt,
) -> Result<CycloRational, CycloError> {
    if f.len() != sizes.len() || g.len() != sizes.len() {
        return Err(CycloError::SizeMismatch { values: f.len().max(g.len()), sizes: sizes.len() });
    }
    let sum: BigInt = sizes.iter().sum();
    if &sum != order {
        return Err(CycloError::OrderSum { sum, order: order.clone() });
    }
    let p = f.first().map_or(3, CycloValue::p);
    let mut acc = CycloValue::zero(p);
    for ((a, b), s) in f.iter().zip(g).zip(sizes) {
        if a.p != b.p || a.p != p {
            return Err(CycloError::OrderMismatch(a.p, b.p));
        }
        acc = &acc + &(a * &b.conjugate()).scale(s);
    }
    CycloRational::new(acc, order.clone())
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum WireInt {
    Small(i64),
    Big(String),
}

impl WireInt {
    fn from_big(b: &BigInt) -> Self {
        match b.to_i64() {
            Some(v) => WireInt::Small(v),
            None => WireInt::Big(b.to_string()),
        }
    }

    fn into_big<E: serde::de::Error>(self) -> Result<BigInt, E> {
        match self {
            WireInt::Small(v) => Ok(BigInt::from(v)),
            WireInt::Big(s) => s.parse().map_err(|_| E::custom(format!("bad integer {s:?}"))),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct WireValue {
    p: u32,
    coeffs: Vec<WireInt>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    den: Option<WireInt>,
}

impl Serialize for CycloValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        WireValue { p: self.p, coeffs: self.coeffs.iter().map(WireInt::from_big).collect(), den: None }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for CycloValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let w = WireValue::deserialize(d)?;
        if w.p < 3 || w.p % 2 == 0 {
            return Err(D::Error::custom(format!("unsupported root order {}", w.p)));
        }
        let coeffs = w.coeffs.into_iter().map(WireInt::into_big).collect::<Result<Vec<_>, _>>()?;
        CycloValue::from_coeffs(w.p, coeffs).map_err(D::Error::custom)
    }
}

impl Serialize for CycloRational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        WireValue {
            p: self.num.p,
            coeffs: self.num.coeffs.iter().map(WireInt::from_big).collect(),
            den: Some(WireInt::from_big(&self.den)),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CycloRational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let w = WireValue::deserialize(d)?;
        let coeffs = w.coeffs.into_iter().map(WireInt::into_big).collect::<Result<Vec<_>, _>>()?;
        let num = CycloValue::from_coeffs(w.p, coeffs).map_err(D::Error::custom)?;
        let den = w.den.map_or(Ok(BigInt::one()), WireInt::into_big)?;
        CycloRational::new(num, den).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cv(p: u32, c: &[i64]) -> CycloValue {
        CycloValue::from_coeffs(p, c.iter().map(|&x| BigInt::from(x)).collect()).unwrap()
    }

    #[test]
    fn root_powers() {
        assert_eq!(CycloValue::root_power(3, 0), CycloValue::one(3));
        assert_eq!(CycloValue::root_power(3, 1), cv(3, &[0, 1]));
        // ζ_3^2 = -1 - ζ in the basis {1, ζ}
        assert_eq!(CycloValue::root_power(3, 2), cv(3, &[-1, -1]));
        let s = (0..3).fold(CycloValue::zero(3), |acc, j| &acc + &CycloValue::root_power(3, j));
        assert!(s.is_zero());
        for p in [5u32, 7] {
            let s = (0..p as i64).fold(CycloValue::zero(p), |acc, j| &acc + &CycloValue::root_power(p, j));
            assert!(s.is_zero());
        }
    }

    #[test]
    fn conjugation_examples() {
        assert_eq!(CycloValue::one(3).conjugate(), CycloValue::one(3));
        assert_eq!(CycloValue::root_power(3, 1).conjugate(), CycloValue::root_power(3, 2));
        // 1 + ζ ↦ 1 + ζ^2 = -ζ
        assert_eq!(cv(3, &[1, 1]).conjugate(), cv(3, &[0, -1]));
    }

    #[test]
    fn inner_products() {
        let order = BigInt::from(3);
        let sizes = vec![BigInt::one(); 3];
        let triv = vec![CycloValue::one(3); 3];
        let ip = inner_product(&triv, &triv, &sizes, &order).unwrap();
        assert_eq!(ip.as_integer(), Some(&BigInt::one()));
        // Z/3: x ↦ ζ^{ax} are orthonormal
        for a in 0..3 {
            for b in 0..3 {
                let f: Vec<_> = (0..3).map(|x| CycloValue::root_power(3, a * x)).collect();
                let g: Vec<_> = (0..3).map(|x| CycloValue::root_power(3, b * x)).collect();
                let ip = inner_product(&f, &g, &sizes, &order).unwrap();
                let want = if a == b { BigInt::one() } else { BigInt::zero() };
                assert_eq!(ip.as_integer(), Some(&want));
            }
        }
        assert!(inner_product(&triv, &triv, &sizes[..2], &order).is_err());
        assert!(inner_product(&triv, &triv, &sizes, &BigInt::from(4)).is_err());
    }

    #[test]
    fn rational_reduction_and_exact_division() {
        let r = CycloRational::new(cv(3, &[4, -6]), 8).unwrap();
        assert_eq!(r.numerator(), &cv(3, &[2, -3]));
        assert_eq!(r.denominator(), &BigInt::from(4));
        let r = CycloRational::new(cv(3, &[3, 3]), -3).unwrap();
        assert_eq!(r.numerator(), &cv(3, &[-1, -1]));
        assert_eq!(r.denominator(), &BigInt::one());
        assert_eq!(cv(3, &[6, -9]).div_exact(&BigInt::from(3)), Some(cv(3, &[2, -3])));
        assert_eq!(cv(3, &[6, -8]).div_exact(&BigInt::from(3)), None);
    }

    #[test]
    fn json_round_trip() {
        let v = cv(5, &[1, -2, 0, 3]);
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(s, r#"{"p":5,"coeffs":[1,-2,0,3]}"#);
        assert_eq!(serde_json::from_str::<CycloValue>(&s).unwrap(), v);
        let big = CycloValue::from_int(3, BigInt::from(i64::MAX) * 4);
        let s = serde_json::to_string(&big).unwrap();
        assert!(s.contains('"'));
        assert_eq!(serde_json::from_str::<CycloValue>(&s).unwrap(), big);
        let r = CycloRational::new(cv(3, &[1, 1]), 2).unwrap();
        let s = serde_json::to_string(&r).unwrap();
        assert_eq!(s, r#"{"p":3,"coeffs":[1,1],"den":2}"#);
        assert_eq!(serde_json::from_str::<CycloRational>(&s).unwrap(), r);
        assert!(serde_json::from_str::<CycloValue>(r#"{"p":3,"coeffs":[1]}"#).is_err());
    }

    #[test]
    fn poly_string() {
        assert_eq!(cv(3, &[1, -2]).to_poly_string(), "1-2·z");
        assert_eq!(cv(5, &[0, 1, 0, 3]).to_poly_string(), "0+1·z+0·z^2+3·z^3");
    }

    #[test]
    fn distributivity_exhaustive_p3() {
        let range: Vec<i64> = (-2..=2).collect();
        let all: Vec<CycloValue> = range.iter().flat_map(|&a| range.iter().map(move |&b| cv(3, &[a, b]))).collect();
        for a in &all {
            for b in &all {
                for c in &all {
                    assert_eq!(a * &(b + c), &(a * b) + &(a * c));
                }
            }
        }
    }

    fn arb(p: u32) -> impl Strategy<Value = CycloValue> {
        prop::collection::vec(-50i64..50, (p - 1) as usize).prop_map(move |c| cv(p, &c))
    }

    proptest! {
        #[test]
        fn ring_axioms_p5(a in arb(5), b in arb(5), c in arb(5)) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a + &b) - &b, a.clone());
            prop_assert_eq!(&a * &CycloValue::one(5), a.clone());
        }

        #[test]
        fn conjugation_is_multiplicative_involution(a in arb(7), b in arb(7)) {
            prop_assert_eq!(a.conjugate().conjugate(), a.clone());
            prop_assert_eq!((&a * &b).conjugate(), &a.conjugate() * &b.conjugate());
        }

        #[test]
        fn norm_is_conjugation_fixed(f in prop::collection::vec(arb(5), 4)) {
            let sizes = vec![BigInt::one(); 4];
            let ip = inner_product(&f, &f, &sizes, &BigInt::from(4)).unwrap();
            prop_assert!(ip.is_conjugation_fixed());
        }
    }
}
