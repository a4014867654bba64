//! Arithmetic in GF(2^k) for `1 <= k <= 8`.
//!
//! Elements are stored in the power basis over GF(2) as a byte whose bit `i`
//! is the coefficient of `t^i`. Multiplication and inversion go through
//! log/antilog tables built once per [`FieldSpec`].

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest supported extension degree.
pub const MAX_DEGREE: u32 = 8;

const DEFAULT_MODULI: [u32; 9] = [
    0,
    0b11,        // t + 1
    0b111,       // t^2 + t + 1
    0b1011,      // t^3 + t + 1
    0b10011,     // t^4 + t + 1
    0b100101,    // t^5 + t^2 + 1
    0b1000011,   // t^6 + t + 1
    0b10000011,  // t^7 + t + 1
    0b100011011, // t^8 + t^4 + t^3 + t + 1
];

struct Tables {
    k: u32,
    modulus: u32,
    /// `exp[i] = g^i` for `i < 2 * (q - 1)`.
    exp: Vec<u8>,
    /// `log[a]` for `a != 0`.
    log: Vec<usize>,
}

/// A finite field GF(2^k) presented as GF(2)[t] modulo an irreducible polynomial.
#[derive(Clone)]
pub struct FieldSpec(Arc<Tables>);

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.k == other.0.k && self.0.modulus == other.0.modulus)
    }
}

impl Eq for FieldSpec {}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF(2^{}; {})", self.0.k, self.modulus_bits())
    }
}

/// Product of two GF(2)[t] polynomials reduced modulo `modulus` of degree `k`.
fn clmul_mod(mut a: u32, mut b: u32, modulus: u32, k: u32) -> u32 {
    let mut acc = 0u32;
    while b != 0 {
        if b & 1 == 1 {
            acc ^= a;
        }
        b >>= 1;
        a <<= 1;
        if a >> k & 1 == 1 {
            a ^= modulus;
        }
    }
    acc
}

fn poly_degree(p: u32) -> i32 {
    31 - p.leading_zeros() as i32
}

fn poly_rem(mut a: u32, b: u32) -> u32 {
    let db = poly_degree(b);
    while a != 0 && poly_degree(a) >= db {
        a ^= b << (poly_degree(a) - db);
    }
    a
}

/// Trial division by every polynomial of degree `1..=deg/2`.
pub fn is_irreducible(modulus: u32) -> bool {
    let deg = poly_degree(modulus);
    if deg < 1 {
        return false;
    }
    for d in 1..=deg / 2 {
        for low in 0..(1u32 << d) {
            if poly_rem(modulus, (1 << d) | low) == 0 {
                return false;
            }
        }
    }
    true
}

impl FieldSpec {
    /// Builds GF(2^k) from a modulus given as an integer whose bit `i` is the
    /// coefficient of `t^i`.
    pub fn new(k: u32, modulus: u32) -> Result<Self> {
        if k == 0 || k > MAX_DEGREE {
            return Err(Error::InvalidField(format!(
                "extension degree {k} outside 1..={MAX_DEGREE}"
            )));
        }
        if poly_degree(modulus) != k as i32 {
            return Err(Error::InvalidField(format!(
                "modulus has degree {}, expected {k}",
                poly_degree(modulus)
            )));
        }
        if !is_irreducible(modulus) {
            return Err(Error::InvalidField("modulus is reducible".into()));
        }
        let q = 1usize << k;
        let order = q - 1;
        let generator = (1..q as u32)
            .find(|&g| {
                let mut x = 1u32;
                for i in 1..=order {
                    x = clmul_mod(x, g, modulus, k);
                    if x == 1 {
                        return i == order;
                    }
                }
                false
            })
            .expect("multiplicative group of a field is cyclic");
        let mut exp = vec![0u8; 2 * order];
        let mut log = vec![0usize; q];
        let mut x = 1u32;
        for i in 0..order {
            exp[i] = x as u8;
            exp[i + order] = x as u8;
            log[x as usize] = i;
            x = clmul_mod(x, generator, modulus, k);
        }
        Ok(FieldSpec(Arc::new(Tables { k, modulus, exp, log })))
    }

    /// The fixed default modulus for each degree (`t^2+t+1`, `t^3+t+1`, `t^4+t+1`, ...).
    pub fn with_default_modulus(k: u32) -> Result<Self> {
        if k == 0 || k > MAX_DEGREE {
            return Err(Error::InvalidField(format!(
                "extension degree {k} outside 1..={MAX_DEGREE}"
            )));
        }
        Self::new(k, DEFAULT_MODULI[k as usize])
    }

    pub fn gf2() -> Self {
        Self::with_default_modulus(1).unwrap()
    }

    pub fn gf4() -> Self {
        Self::with_default_modulus(2).unwrap()
    }

    /// Parses a modulus written as `k+1` bits, constant term first (`"111"` is `t^2+t+1`).
    pub fn from_modulus_bits(bits: &str) -> Result<Self> {
        let bits = bits.trim();
        if bits.len() < 2 || bits.len() > MAX_DEGREE as usize + 1 {
            return Err(Error::InvalidField(format!("modulus bits `{bits}`")));
        }
        let mut modulus = 0u32;
        for (i, ch) in bits.chars().enumerate() {
            match ch {
                '0' => {}
                '1' => modulus |= 1 << i,
                _ => return Err(Error::InvalidField(format!("modulus bits `{bits}`"))),
            }
        }
        Self::new(bits.len() as u32 - 1, modulus)
    }

    pub fn degree(&self) -> u32 {
        self.0.k
    }

    pub fn size(&self) -> usize {
        1 << self.0.k
    }

    pub fn modulus(&self) -> u32 {
        self.0.modulus
    }

    /// Modulus as `k+1` bits, constant term first.
    pub fn modulus_bits(&self) -> String {
        (0..=self.0.k)
            .map(|i| if self.0.modulus >> i & 1 == 1 { '1' } else { '0' })
            .collect()
    }

    pub fn is_prime_field(&self) -> bool {
        self.0.k == 1
    }

    pub fn elem(&self, value: u32) -> Result<FieldElem> {
        if value as usize >= self.size() {
            return Err(Error::InvalidField(format!(
                "element {value} out of range for GF(2^{})",
                self.0.k
            )));
        }
        Ok(FieldElem {
            spec: self.clone(),
            value: value as u8,
        })
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem {
            spec: self.clone(),
            value: 0,
        }
    }

    pub fn one(&self) -> FieldElem {
        FieldElem {
            spec: self.clone(),
            value: 1,
        }
    }

    /// All `2^k` elements in power-basis lexicographic order.
    pub fn enumerate(&self) -> Vec<FieldElem> {
        (0..self.size())
            .map(|v| FieldElem {
                spec: self.clone(),
                value: v as u8,
            })
            .collect()
    }

    // Raw byte-level arithmetic shared by the polynomial and matrix layers.

    #[inline]
    pub(crate) fn mul_raw(&self, a: u8, b: u8) -> u8 {
        if a == 0 || b == 0 {
            return 0;
        }
        let t = &self.0;
        t.exp[t.log[a as usize] + t.log[b as usize]]
    }

    #[inline]
    pub(crate) fn inv_raw(&self, a: u8) -> Option<u8> {
        if a == 0 {
            return None;
        }
        let t = &self.0;
        let order = t.exp.len() / 2;
        Some(t.exp[(order - t.log[a as usize]) % order])
    }

    pub(crate) fn pow_raw(&self, a: u8, e: i64) -> Option<u8> {
        if a == 0 {
            return match e {
                0 => Some(1),
                e if e > 0 => Some(0),
                _ => None,
            };
        }
        let t = &self.0;
        let order = (t.exp.len() / 2) as i64;
        let idx = (t.log[a as usize] as i64 * e).rem_euclid(order);
        Some(t.exp[idx as usize])
    }

    #[inline]
    pub(crate) fn log_raw(&self, a: u8) -> usize {
        self.0.log[a as usize]
    }

    #[inline]
    pub(crate) fn exp_raw(&self, i: usize) -> u8 {
        self.0.exp[i]
    }

    /// Field embedding `self -> larger`, as a lookup table on raw values.
    ///
    /// The generator `t` of `self` is sent to the smallest root of `self`'s
    /// modulus in `larger`. Fails unless `self.degree()` divides `larger.degree()`.
    pub fn embedding_into(&self, larger: &FieldSpec) -> Result<Vec<u8>> {
        if self == larger {
            return Ok((0..self.size()).map(|v| v as u8).collect());
        }
        if !larger.degree().is_multiple_of(self.degree()) {
            return Err(Error::FieldMismatch);
        }
        let k = self.degree();
        let root = (0..larger.size() as u32)
            .map(|v| v as u8)
            .find(|&r| {
                let mut acc = 0u8;
                let mut power = 1u8;
                for i in 0..=k {
                    if self.0.modulus >> i & 1 == 1 {
                        acc ^= power;
                    }
                    power = larger.mul_raw(power, r);
                }
                acc == 0
            })
            .ok_or(Error::FieldMismatch)?;
        let mut powers = vec![1u8; k as usize];
        for i in 1..k as usize {
            powers[i] = larger.mul_raw(powers[i - 1], root);
        }
        Ok((0..self.size())
            .map(|v| {
                (0..k as usize)
                    .filter(|&i| v >> i & 1 == 1)
                    .fold(0u8, |acc, i| acc ^ powers[i])
            })
            .collect())
    }
}

/// An element of a [`FieldSpec`].
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElem {
    spec: FieldSpec,
    value: u8,
}

impl FieldElem {
    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    /// The serialization integer: bit `i` is the coefficient of `t^i`.
    pub fn value(&self) -> u32 {
        self.value as u32
    }

    pub(crate) fn raw(&self) -> u8 {
        self.value
    }

    pub(crate) fn from_raw(spec: &FieldSpec, value: u8) -> Self {
        FieldElem {
            spec: spec.clone(),
            value,
        }
    }

    /// Power-basis coordinates, constant term first.
    pub fn coeffs(&self) -> Vec<bool> {
        (0..self.spec.degree()).map(|i| self.value >> i & 1 == 1).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    pub fn is_one(&self) -> bool {
        self.value == 1
    }

    pub fn checked_add(&self, other: &FieldElem) -> Result<FieldElem> {
        if self.spec != other.spec {
            return Err(Error::FieldMismatch);
        }
        Ok(FieldElem::from_raw(&self.spec, self.value ^ other.value))
    }

    pub fn checked_mul(&self, other: &FieldElem) -> Result<FieldElem> {
        if self.spec != other.spec {
            return Err(Error::FieldMismatch);
        }
        Ok(FieldElem::from_raw(
            &self.spec,
            self.spec.mul_raw(self.value, other.value),
        ))
    }

    pub fn invert(&self) -> Result<FieldElem> {
        self.spec
            .inv_raw(self.value)
            .map(|v| FieldElem::from_raw(&self.spec, v))
            .ok_or(Error::DivisionByZero)
    }

    /// `self^e`; negative exponents invert.
    pub fn pow(&self, e: i64) -> Result<FieldElem> {
        self.spec
            .pow_raw(self.value, e)
            .map(|v| FieldElem::from_raw(&self.spec, v))
            .ok_or(Error::DivisionByZero)
    }
}

impl std::ops::Add for &FieldElem {
    type Output = FieldElem;

    /// Panics on mismatched fields; see [`FieldElem::checked_add`].
    fn add(self, rhs: &FieldElem) -> FieldElem {
        self.checked_add(rhs).expect("field mismatch")
    }
}

impl std::ops::Mul for &FieldElem {
    type Output = FieldElem;

    /// Panics on mismatched fields; see [`FieldElem::checked_mul`].
    fn mul(self, rhs: &FieldElem) -> FieldElem {
        self.checked_mul(rhs).expect("field mismatch")
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for FieldElem {
    /// GF(2) elements print as `0`/`1`; larger fields as `{n}`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.spec.is_prime_field() {
            write!(f, "{}", self.value)
        } else {
            write!(f, "{{{}}}", self.value)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_fields() -> Vec<FieldSpec> {
        (1..=4).map(|k| FieldSpec::with_default_modulus(k).unwrap()).collect()
    }

    #[test]
    fn char_two_addition() {
        let f = FieldSpec::gf2();
        assert!((&f.one() + &f.one()).is_zero());
        for f in all_fields() {
            for a in f.enumerate() {
                assert!((&a + &a).is_zero());
            }
        }
    }

    #[test]
    fn gf4_products_and_inverses() {
        let f = FieldSpec::gf4();
        let t = f.elem(2).unwrap();
        assert_eq!((&t * &t).value(), 3);
        assert_eq!(t.invert().unwrap().value(), 3);
        assert_eq!(f.one().invert().unwrap().value(), 1);
        assert_eq!(FieldSpec::gf2().one().invert().unwrap().value(), 1);
    }

    #[test]
    fn zero_has_no_inverse() {
        for f in all_fields() {
            assert_eq!(f.zero().invert(), Err(Error::DivisionByZero));
        }
    }

    #[test]
    fn mismatched_fields_are_rejected() {
        let a = FieldSpec::gf2().one();
        let b = FieldSpec::gf4().one();
        assert_eq!(a.checked_add(&b), Err(Error::FieldMismatch));
        assert_eq!(a.checked_mul(&b), Err(Error::FieldMismatch));
    }

    #[test]
    fn enumeration_order() {
        let vals: Vec<u32> = FieldSpec::gf4().enumerate().iter().map(|e| e.value()).collect();
        assert_eq!(vals, vec![0, 1, 2, 3]);
        assert_eq!(FieldSpec::gf2().enumerate().len(), 2);
        for f in all_fields() {
            assert_eq!(f.enumerate().len(), 1 << f.degree());
        }
    }

    #[test]
    fn field_axioms_exhaustive() {
        for f in all_fields() {
            let els = f.enumerate();
            for a in &els {
                for b in &els {
                    assert_eq!(a * b, b * a);
                    // Frobenius is additive in characteristic 2.
                    let s = a + b;
                    assert_eq!(&s * &s, &(a * a) + &(b * b));
                    for c in &els {
                        assert_eq!(&(a + b) + c, a + &(b + c));
                        assert_eq!(a * &(b + c), &(a * b) + &(a * c));
                        assert_eq!(&(a * b) * c, a * &(b * c));
                    }
                }
                if !a.is_zero() {
                    let inv = a.invert().unwrap();
                    assert!((a * &inv).is_one());
                    assert_eq!(inv.invert().unwrap(), *a);
                }
            }
        }
    }

    #[test]
    fn multiplication_matches_schoolbook() {
        for f in all_fields() {
            for a in 0..f.size() as u32 {
                for b in 0..f.size() as u32 {
                    let expect = clmul_mod(a, b, f.modulus(), f.degree());
                    assert_eq!(f.mul_raw(a as u8, b as u8) as u32, expect);
                }
            }
        }
    }

    #[test]
    fn reducible_modulus_rejected() {
        // t^2 + 1 = (t + 1)^2
        assert!(FieldSpec::new(2, 0b101).is_err());
        assert!(FieldSpec::from_modulus_bits("101").is_err());
        assert_eq!(FieldSpec::from_modulus_bits("111").unwrap(), FieldSpec::gf4());
        // A non-primitive irreducible modulus still gets working tables.
        let f = FieldSpec::new(4, 0b11111).unwrap();
        for a in f.enumerate().iter().skip(1) {
            assert!((a * &a.invert().unwrap()).is_one());
        }
    }

    #[test]
    fn embedding_is_a_ring_map() {
        let small = FieldSpec::gf4();
        let big = FieldSpec::with_default_modulus(4).unwrap();
        let emb = small.embedding_into(&big).unwrap();
        for a in 0..4u8 {
            for b in 0..4u8 {
                assert_eq!(emb[(a ^ b) as usize], emb[a as usize] ^ emb[b as usize]);
                assert_eq!(
                    emb[small.mul_raw(a, b) as usize],
                    big.mul_raw(emb[a as usize], emb[b as usize])
                );
            }
        }
        assert!(small
            .embedding_into(&FieldSpec::with_default_modulus(3).unwrap())
            .is_err());
    }

    #[test]
    fn display_uses_braces_above_gf2() {
        assert_eq!(FieldSpec::gf4().elem(3).unwrap().to_string(), "{3}");
        assert_eq!(FieldSpec::gf2().one().to_string(), "1");
    }
}
