//! Arithmetic in GF(2^b) for 1 <= b <= 32.
//!
//! Elements are `b`-bit polynomials over GF(2) reduced modulo a fixed
//! irreducible polynomial. Widths up to 16 bits get log/exp tables; wider
//! fields fall back to shift-and-xor.

use std::fmt;
use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};

/// Smallest irreducible polynomial of each degree with nonzero constant term,
/// indexed by `degree - 1`. Bit `i` is the coefficient of `x^i`.
pub const IRREDUCIBLE: [u64; 32] = [
    0x3,
    0x7,
    0xb,
    0x13,
    0x25,
    0x43,
    0x83,
    0x11b,
    0x203,
    0x409,
    0x805,
    0x1009,
    0x201b,
    0x4021,
    0x8003,
    0x1002b,
    0x20009,
    0x40009,
    0x80027,
    0x100009,
    0x200005,
    0x400003,
    0x800021,
    0x100001b,
    0x2000009,
    0x400001b,
    0x8000027,
    0x10000003,
    0x20000005,
    0x40000003,
    0x80000009,
    0x10000008d,
];

pub const MAX_FIELD_BITS: u32 = 32;
const TABLE_MAX_BITS: u32 = 16;

/// Field width used when the caller does not override it: `ceil(log2 k) + 5`.
pub fn default_field_bits(degree: usize) -> u32 {
    let degree = degree.max(1);
    let log = usize::BITS - (degree - 1).leading_zeros();
    (log + 5).min(MAX_FIELD_BITS)
}

/// An element of GF(2^b). Only meaningful together with its [`FieldContext`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FieldElement(pub u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    #[inline]
    pub fn value(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#x}", self.0)
    }
}

// addition in characteristic 2 is XOR
#[allow(clippy::suspicious_arithmetic_impl)]
impl std::ops::Add for FieldElement {
    type Output = FieldElement;
    #[inline]
    fn add(self, rhs: FieldElement) -> FieldElement {
        FieldElement(self.0 ^ rhs.0)
    }
}

#[allow(clippy::suspicious_op_assign_impl)]
impl std::ops::AddAssign for FieldElement {
    #[inline]
    fn add_assign(&mut self, rhs: FieldElement) {
        self.0 ^= rhs.0;
    }
}

struct Tables {
    // log(0) is the sentinel 2 * order, and exp is zero from index 2 * order
    // on, so exp[log a + log b] is the product for every pair, zero included.
    exp: Vec<u32>,
    log: Vec<u32>,
}

/// Immutable description of GF(2^b); cheap to clone.
#[derive(Clone)]
pub struct FieldContext {
    bits: u32,
    reduction_poly: u64,
    tables: Option<Arc<Tables>>,
}

impl fmt::Debug for FieldContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldContext")
            .field("bits", &self.bits)
            .field("reduction_poly", &format_args!("{:#x}", self.reduction_poly))
            .finish()
    }
}

impl PartialEq for FieldContext {
    fn eq(&self, other: &Self) -> bool {
        self.bits == other.bits && self.reduction_poly == other.reduction_poly
    }
}

impl Eq for FieldContext {}

impl FieldContext {
    pub fn new(bits: u32) -> Result<Self> {
        if bits == 0 || bits > MAX_FIELD_BITS {
            return Err(Error::UnsupportedFieldBits(bits));
        }
        let reduction_poly = IRREDUCIBLE[(bits - 1) as usize];
        let mut ctx = FieldContext {
            bits,
            reduction_poly,
            tables: None,
        };
        if bits <= TABLE_MAX_BITS {
            ctx.tables = Some(Arc::new(ctx.build_tables()));
        }
        Ok(ctx)
    }

    /// Field sized for a circuit of the given degree.
    pub fn for_degree(degree: usize) -> Result<Self> {
        Self::new(default_field_bits(degree))
    }

    #[inline]
    pub fn bits(&self) -> u32 {
        self.bits
    }

    #[inline]
    pub fn reduction_poly(&self) -> u64 {
        self.reduction_poly
    }

    #[inline]
    pub fn order(&self) -> u64 {
        1u64 << self.bits
    }

    #[inline]
    fn mask(&self) -> u32 {
        ((1u64 << self.bits) - 1) as u32
    }

    pub fn element(&self, value: u32) -> Result<FieldElement> {
        if u64::from(value) >= self.order() {
            return Err(Error::FieldValueOutOfRange {
                value,
                bits: self.bits,
            });
        }
        Ok(FieldElement(value))
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        a + b
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        match &self.tables {
            Some(t) => {
                let idx = t.log[a.0 as usize] + t.log[b.0 as usize];
                FieldElement(t.exp[idx as usize])
            }
            None => self.mul_schoolbook(a, b),
        }
    }

    /// Carry-less multiply followed by reduction; the table path is checked
    /// against this.
    pub fn mul_schoolbook(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let mut acc: u64 = 0;
        let a = u64::from(a.0);
        let mut b = b.0;
        let mut shift = 0;
        while b != 0 {
            if b & 1 == 1 {
                acc ^= a << shift;
            }
            b >>= 1;
            shift += 1;
        }
        FieldElement(self.reduce(acc))
    }

    fn reduce(&self, mut value: u64) -> u32 {
        let b = self.bits;
        for bit in (b..2 * b).rev() {
            if value >> bit & 1 == 1 {
                value ^= self.reduction_poly << (bit - b);
            }
        }
        value as u32
    }

    /// Uniform over all `2^b` elements, zero included.
    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElement {
        FieldElement(rng.gen::<u32>() & self.mask())
    }

    pub fn pow(&self, mut base: FieldElement, mut exp: u64) -> FieldElement {
        let mut acc = FieldElement::ONE;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    pub fn inverse(&self, a: FieldElement) -> Option<FieldElement> {
        if a.is_zero() {
            None
        } else {
            Some(self.pow(a, self.order() - 2))
        }
    }

    fn build_tables(&self) -> Tables {
        let order = (self.order() - 1) as usize;
        if order == 1 {
            return Tables {
                exp: vec![1, 1, 0, 0, 0],
                log: vec![2, 0],
            };
        }
        // The reduction polynomial need not be primitive, so search for a
        // generator of the multiplicative group.
        let factors = prime_factors(order as u64);
        let generator = (2..=order as u32)
            .map(FieldElement)
            .find(|&g| {
                factors
                    .iter()
                    .all(|&p| self.pow_slow(g, order as u64 / p) != FieldElement::ONE)
            })
            .expect("multiplicative group of a finite field is cyclic");

        let mut exp = vec![0u32; 4 * order + 1];
        let mut log = vec![0u32; order + 1];
        log[0] = 2 * order as u32;
        let mut x = FieldElement::ONE;
        for (i, slot) in exp.iter_mut().take(order).enumerate() {
            *slot = x.0;
            log[x.0 as usize] = i as u32;
            x = self.mul_schoolbook(x, generator);
        }
        for i in order..2 * order {
            exp[i] = exp[i - order];
        }
        Tables { exp, log }
    }

    /// `out[u ^ v] += a[u] * b[v]` for all index pairs; `out` must be at
    /// least as long as the larger operand rounded up to a power of two.
    pub(crate) fn xor_convolve(&self, a: &[FieldElement], b: &[FieldElement], out: &mut [FieldElement]) {
        let Some(t) = &self.tables else {
            for (u, &x) in a.iter().enumerate() {
                for (v, &y) in b.iter().enumerate() {
                    out[u ^ v] += self.mul_schoolbook(x, y);
                }
            }
            return;
        };
        let lb: Vec<u32> = b.iter().map(|y| t.log[y.0 as usize]).collect();
        for (u, x) in a.iter().enumerate() {
            let la = t.log[x.0 as usize];
            if x.0 == 0 {
                continue;
            }
            for (v, &l) in lb.iter().enumerate() {
                out[u ^ v].0 ^= t.exp[(la + l) as usize];
            }
        }
    }

    fn pow_slow(&self, mut base: FieldElement, mut exp: u64) -> FieldElement {
        let mut acc = FieldElement::ONE;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul_schoolbook(acc, base);
            }
            base = self.mul_schoolbook(base, base);
            exp >>= 1;
        }
        acc
    }
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn degree(p: u64) -> u32 {
        63 - p.leading_zeros()
    }

    fn poly_mod(mut a: u64, b: u64) -> u64 {
        let db = degree(b);
        while a != 0 && degree(a) >= db {
            a ^= b << (degree(a) - db);
        }
        a
    }

    // Trial division by every polynomial of degree 1..=deg/2.
    fn is_irreducible(p: u64) -> bool {
        let d = degree(p);
        (2u64..(1 << (d / 2 + 1))).all(|q| poly_mod(p, q) != 0)
    }

    #[test]
    fn table_is_irreducible_up_to_16_bits() {
        for bits in 1..=16u32 {
            let p = IRREDUCIBLE[(bits - 1) as usize];
            assert_eq!(degree(p), bits);
            assert!(is_irreducible(p), "bits={bits}");
        }
    }

    #[test]
    fn table_is_smallest_with_constant_term() {
        for bits in 2..=12u32 {
            let p = IRREDUCIBLE[(bits - 1) as usize];
            let smaller = ((1u64 << bits) | 1..p)
                .step_by(2)
                .find(|&q| is_irreducible(q));
            assert_eq!(smaller, None, "bits={bits}");
        }
    }

    #[test]
    fn known_moduli() {
        assert_eq!(FieldContext::new(4).unwrap().reduction_poly(), 0b10011);
        assert_eq!(FieldContext::new(1).unwrap().reduction_poly(), 0b11);
        assert_eq!(FieldContext::new(8).unwrap().reduction_poly(), 0x11b);
    }

    #[test]
    fn rejects_bad_widths() {
        assert!(matches!(
            FieldContext::new(0),
            Err(Error::UnsupportedFieldBits(0))
        ));
        assert!(FieldContext::new(33).is_err());
        assert!(FieldContext::new(32).is_ok());
    }

    #[test]
    fn default_bits() {
        assert_eq!(default_field_bits(1), 5);
        assert_eq!(default_field_bits(2), 6);
        assert_eq!(default_field_bits(6), 8);
        assert_eq!(default_field_bits(8), 8);
        assert_eq!(default_field_bits(9), 9);
    }

    #[test]
    fn add_examples() {
        let a = FieldElement(0xb);
        assert_eq!(a + a, FieldElement::ZERO);
        assert_eq!(a + FieldElement::ZERO, a);
        assert_eq!(FieldElement(0x3) + FieldElement(0x5), FieldElement(0x6));
    }

    #[test]
    fn mul_examples() {
        let f = FieldContext::new(4).unwrap();
        assert_eq!(f.mul(FieldElement(3), FieldElement(3)), FieldElement(5));
        for a in 0..16 {
            let a = FieldElement(a);
            assert_eq!(f.mul(a, FieldElement::ONE), a);
            assert_eq!(f.mul(a, FieldElement::ZERO), FieldElement::ZERO);
        }
    }

    #[test]
    fn field_axioms_exhaustive_small() {
        for bits in 1..=4 {
            let f = FieldContext::new(bits).unwrap();
            let all: Vec<_> = (0..1u32 << bits).map(FieldElement).collect();
            for &a in &all {
                assert_eq!(a + a, FieldElement::ZERO);
                if !a.is_zero() {
                    let inv = all.iter().find(|&&b| f.mul(a, b) == FieldElement::ONE);
                    assert!(inv.is_some(), "no inverse for {a:?} in GF(2^{bits})");
                    assert_eq!(f.inverse(a), inv.copied());
                }
                for &b in &all {
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for &c in &all {
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(f.mul(a, b + c), f.mul(a, b) + f.mul(a, c));
                    }
                }
            }
        }
    }

    #[test]
    fn tables_agree_with_schoolbook() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for bits in [2, 5, 8, 11, 16] {
            let f = FieldContext::new(bits).unwrap();
            for _ in 0..2000 {
                let a = f.random(&mut rng);
                let b = f.random(&mut rng);
                assert_eq!(f.mul(a, b), f.mul_schoolbook(a, b));
            }
        }
    }

    #[test]
    fn wide_field_inverse() {
        let f = FieldContext::new(32).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let a = f.random(&mut rng);
            if let Some(inv) = f.inverse(a) {
                assert_eq!(f.mul(a, inv), FieldElement::ONE);
            }
        }
    }

    #[test]
    fn random_is_uniform() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let f1 = FieldContext::new(1).unwrap();
        let ones = (0..10_000).filter(|_| f1.random(&mut rng).0 == 1).count();
        assert!((4_700..5_300).contains(&ones));

        let f8 = FieldContext::new(8).unwrap();
        let n = 100_000;
        let mean = (0..n).map(|_| f64::from(f8.random(&mut rng).0)).sum::<f64>() / n as f64;
        assert!((mean - 127.5).abs() < 3.0, "mean {mean}");

        // chi-square over 16 buckets, 15 dof; 0.999 quantile is 37.7
        let f4 = FieldContext::new(4).unwrap();
        let mut counts = [0u32; 16];
        let draws = 32_000;
        for _ in 0..draws {
            counts[f4.random(&mut rng).0 as usize] += 1;
        }
        let expected = draws as f64 / 16.0;
        let chi2: f64 = counts
            .iter()
            .map(|&c| (f64::from(c) - expected).powi(2) / expected)
            .sum();
        assert!(chi2 < 37.7, "chi2 {chi2}");
    }
}
