//! The group algebra R[Z2^k] over a characteristic-2 coefficient ring.
//!
//! An element is a dense array of `2^k` coefficients indexed by the bits of a
//! group vector. The group operation on Z2^k is XOR, so the product is the
//! XOR-convolution `(a*b)[w] = sum_u a[u] * b[u ^ w]`.
//!
//! Two coefficient rings are provided: the field itself ([`FieldContext`]) and
//! univariate polynomials in a free indeterminate `z`, truncated above a degree
//! cap ([`ZPolyRing`]).

use std::fmt::Debug;

use rand::Rng;

use crate::error::{Error, Result};
use crate::gf2m::{FieldContext, FieldElement};

/// Commutative ring of characteristic 2 with field-element scaling.
pub trait CoefficientRing: Clone + Send + Sync {
    type Elem: Copy + PartialEq + Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    fn mul(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: Self::Elem) -> bool;
    fn random<G: Rng + ?Sized>(&self, rng: &mut G) -> Self::Elem;
    /// Multiply by a constant from the underlying field.
    fn scale(&self, a: Self::Elem, s: FieldElement) -> Self::Elem;
    fn field(&self) -> &FieldContext;

    /// `out[u ^ v] += a[u] * b[v]` over all index pairs.
    fn xor_convolve(&self, a: &[Self::Elem], b: &[Self::Elem], out: &mut [Self::Elem]) {
        for (u, &x) in a.iter().enumerate() {
            if self.is_zero(x) {
                continue;
            }
            for (v, &y) in b.iter().enumerate() {
                out[u ^ v] = self.add(out[u ^ v], self.mul(x, y));
            }
        }
    }
}

impl CoefficientRing for FieldContext {
    type Elem = FieldElement;

    #[inline]
    fn zero(&self) -> FieldElement {
        FieldElement::ZERO
    }
    #[inline]
    fn one(&self) -> FieldElement {
        FieldElement::ONE
    }
    #[inline]
    fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        a + b
    }
    #[inline]
    fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldContext::mul(self, a, b)
    }
    #[inline]
    fn is_zero(&self, a: FieldElement) -> bool {
        a.is_zero()
    }
    fn random<G: Rng + ?Sized>(&self, rng: &mut G) -> FieldElement {
        FieldContext::random(self, rng)
    }
    #[inline]
    fn scale(&self, a: FieldElement, s: FieldElement) -> FieldElement {
        FieldContext::mul(self, a, s)
    }
    fn field(&self) -> &FieldContext {
        self
    }
    fn xor_convolve(&self, a: &[FieldElement], b: &[FieldElement], out: &mut [FieldElement]) {
        FieldContext::xor_convolve(self, a, b, out)
    }
}

/// Largest supported degree cap for [`ZPoly`].
pub const ZPOLY_MAX_DEGREE: usize = 15;

/// Polynomial in `z` over GF(2^b), stored densely up to [`ZPOLY_MAX_DEGREE`].
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct ZPoly {
    coeffs: [FieldElement; ZPOLY_MAX_DEGREE + 1],
}

impl ZPoly {
    pub const ZERO: ZPoly = ZPoly {
        coeffs: [FieldElement::ZERO; ZPOLY_MAX_DEGREE + 1],
    };

    pub fn constant(c: FieldElement) -> Self {
        Self::monomial(0, c)
    }

    /// `c * z^degree`.
    pub fn monomial(degree: usize, c: FieldElement) -> Self {
        assert!(degree <= ZPOLY_MAX_DEGREE, "z-degree {degree} out of range");
        let mut p = Self::ZERO;
        p.coeffs[degree] = c;
        p
    }

    pub fn from_coeffs(coeffs: &[FieldElement]) -> Self {
        assert!(coeffs.len() <= ZPOLY_MAX_DEGREE + 1);
        let mut p = Self::ZERO;
        p.coeffs[..coeffs.len()].copy_from_slice(coeffs);
        p
    }

    #[inline]
    pub fn coeff(&self, degree: usize) -> FieldElement {
        self.coeffs.get(degree).copied().unwrap_or(FieldElement::ZERO)
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Smallest `d` with a nonzero coefficient of `z^d`.
    pub fn min_nonzero_degree(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero())
    }
}

/// F[z] truncated above degree `cap`.
#[derive(Clone, Debug, PartialEq)]
pub struct ZPolyRing {
    field: FieldContext,
    cap: usize,
}

impl ZPolyRing {
    pub fn new(field: FieldContext, cap: usize) -> Result<Self> {
        if cap > ZPOLY_MAX_DEGREE {
            return Err(Error::ResourceGuard {
                what: "z-degree cap",
                value: cap,
                limit: ZPOLY_MAX_DEGREE,
            });
        }
        Ok(ZPolyRing { field, cap })
    }

    pub fn cap(&self) -> usize {
        self.cap
    }
}

impl CoefficientRing for ZPolyRing {
    type Elem = ZPoly;

    fn zero(&self) -> ZPoly {
        ZPoly::ZERO
    }
    fn one(&self) -> ZPoly {
        ZPoly::constant(FieldElement::ONE)
    }
    #[inline]
    fn add(&self, mut a: ZPoly, b: ZPoly) -> ZPoly {
        for (x, y) in a.coeffs[..=self.cap].iter_mut().zip(&b.coeffs[..=self.cap]) {
            *x += *y;
        }
        a
    }
    #[inline]
    fn mul(&self, a: ZPoly, b: ZPoly) -> ZPoly {
        let mut out = ZPoly::ZERO;
        for i in 0..=self.cap {
            let ai = a.coeffs[i];
            if ai.is_zero() {
                continue;
            }
            for j in 0..=self.cap - i {
                let bj = b.coeffs[j];
                if !bj.is_zero() {
                    out.coeffs[i + j] += self.field.mul(ai, bj);
                }
            }
        }
        out
    }
    #[inline]
    fn is_zero(&self, a: ZPoly) -> bool {
        a.coeffs[..=self.cap].iter().all(|c| c.is_zero())
    }
    fn random<G: Rng + ?Sized>(&self, rng: &mut G) -> ZPoly {
        let mut p = ZPoly::ZERO;
        for c in &mut p.coeffs[..=self.cap] {
            *c = self.field.random(rng);
        }
        p
    }
    #[inline]
    fn scale(&self, mut a: ZPoly, s: FieldElement) -> ZPoly {
        for c in &mut a.coeffs[..=self.cap] {
            *c = self.field.mul(*c, s);
        }
        a
    }
    fn field(&self) -> &FieldContext {
        &self.field
    }
}

/// A vector of Z2^dim packed into the low `dim` bits of a word.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct GroupVector {
    dim: usize,
    bits: u64,
}

impl GroupVector {
    pub fn new(dim: usize, bits: u64) -> Result<Self> {
        if dim > 63 || bits >> dim != 0 {
            return Err(Error::InvalidArgument(format!(
                "vector {bits:#b} does not fit in Z2^{dim}"
            )));
        }
        Ok(GroupVector { dim, bits })
    }

    pub fn zero(dim: usize) -> Self {
        GroupVector { dim, bits: 0 }
    }

    /// Standard basis vector `e_i`.
    pub fn unit(dim: usize, i: usize) -> Self {
        assert!(i < dim);
        GroupVector { dim, bits: 1 << i }
    }

    #[inline]
    pub fn dim(self) -> usize {
        self.dim
    }

    #[inline]
    pub fn bits(self) -> u64 {
        self.bits
    }

    #[inline]
    pub fn is_identity(self) -> bool {
        self.bits == 0
    }

    /// Group product (XOR).
    pub fn combine(self, other: GroupVector) -> GroupVector {
        debug_assert_eq!(self.dim, other.dim);
        GroupVector {
            dim: self.dim,
            bits: self.bits ^ other.bits,
        }
    }
}

#[derive(Clone, PartialEq, Debug)]
pub struct GaElement<E> {
    dim: usize,
    coeffs: Vec<E>,
}

impl<E: Copy> GaElement<E> {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coeffs(&self) -> &[E] {
        &self.coeffs
    }

    pub fn coeff(&self, v: GroupVector) -> E {
        self.coeffs[v.bits() as usize]
    }
}

/// Largest group dimension for which dense elements are allowed.
pub const MAX_GROUP_DIM: usize = 24;

/// R[Z2^dim]: the arithmetic context for [`GaElement`]s.
#[derive(Clone, Debug)]
pub struct GroupAlgebra<R> {
    ring: R,
    dim: usize,
}

const SCHOOLBOOK_MAX_LEN: usize = 16;

impl<R: CoefficientRing> GroupAlgebra<R> {
    pub fn new(ring: R, dim: usize) -> Result<Self> {
        if dim > MAX_GROUP_DIM {
            return Err(Error::ResourceGuard {
                what: "group dimension",
                value: dim,
                limit: MAX_GROUP_DIM,
            });
        }
        Ok(GroupAlgebra { ring, dim })
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of group elements, `2^dim`; never zero.
    #[inline]
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        1 << self.dim
    }

    pub fn zero(&self) -> GaElement<R::Elem> {
        GaElement {
            dim: self.dim,
            coeffs: vec![self.ring.zero(); self.len()],
        }
    }

    /// The group identity `v0` with coefficient one.
    pub fn identity(&self) -> GaElement<R::Elem> {
        self.monomial(GroupVector::zero(self.dim), self.ring.one())
    }

    /// `c * v`.
    pub fn monomial(&self, v: GroupVector, c: R::Elem) -> GaElement<R::Elem> {
        let mut e = self.zero();
        e.coeffs[v.bits() as usize] = c;
        e
    }

    pub fn from_coeffs(&self, coeffs: Vec<R::Elem>) -> Result<GaElement<R::Elem>> {
        if coeffs.len() != self.len() {
            return Err(Error::DimensionMismatch {
                left: self.len(),
                right: coeffs.len(),
            });
        }
        Ok(GaElement {
            dim: self.dim,
            coeffs,
        })
    }

    /// `v0 + v`. For `v = v0` the two terms cancel and the result is zero;
    /// callers that want a nonzero value must pass `v != v0`.
    pub fn from_pair(&self, v: GroupVector) -> Result<GaElement<R::Elem>> {
        self.check_vector(v)?;
        let one = self.ring.one();
        let mut e = self.zero();
        e.coeffs[0] = self.ring.add(e.coeffs[0], one);
        let idx = v.bits() as usize;
        e.coeffs[idx] = self.ring.add(e.coeffs[idx], one);
        Ok(e)
    }

    fn check_vector(&self, v: GroupVector) -> Result<()> {
        if v.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: v.dim(),
            });
        }
        Ok(())
    }

    fn check(&self, a: &GaElement<R::Elem>) -> Result<()> {
        if a.dim != self.dim || a.coeffs.len() != self.len() {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: a.dim,
            });
        }
        Ok(())
    }

    pub fn is_zero(&self, a: &GaElement<R::Elem>) -> bool {
        a.coeffs.iter().all(|&c| self.ring.is_zero(c))
    }

    pub fn nonzero_count(&self, a: &GaElement<R::Elem>) -> usize {
        a.coeffs.iter().filter(|&&c| !self.ring.is_zero(c)).count()
    }

    pub fn add(
        &self,
        a: &GaElement<R::Elem>,
        b: &GaElement<R::Elem>,
    ) -> Result<GaElement<R::Elem>> {
        let mut out = a.clone();
        self.add_assign(&mut out, b)?;
        Ok(out)
    }

    pub fn add_assign(&self, acc: &mut GaElement<R::Elem>, b: &GaElement<R::Elem>) -> Result<()> {
        self.check(acc)?;
        self.check(b)?;
        for (x, &y) in acc.coeffs.iter_mut().zip(&b.coeffs) {
            *x = self.ring.add(*x, y);
        }
        Ok(())
    }

    /// `acc += s * b` for a field constant `s`.
    pub fn add_scaled_assign(
        &self,
        acc: &mut GaElement<R::Elem>,
        b: &GaElement<R::Elem>,
        s: FieldElement,
    ) -> Result<()> {
        self.check(acc)?;
        self.check(b)?;
        if s.is_zero() {
            return Ok(());
        }
        for (x, &y) in acc.coeffs.iter_mut().zip(&b.coeffs) {
            if !self.ring.is_zero(y) {
                *x = self.ring.add(*x, self.ring.scale(y, s));
            }
        }
        Ok(())
    }

    pub fn scale(&self, a: &GaElement<R::Elem>, s: R::Elem) -> Result<GaElement<R::Elem>> {
        self.check(a)?;
        Ok(GaElement {
            dim: self.dim,
            coeffs: a.coeffs.iter().map(|&c| self.ring.mul(c, s)).collect(),
        })
    }

    /// Product, choosing between the sparse and the recursive dense kernel by
    /// the support size of the sparser operand.
    pub fn mul(
        &self,
        a: &GaElement<R::Elem>,
        b: &GaElement<R::Elem>,
    ) -> Result<GaElement<R::Elem>> {
        self.check(a)?;
        self.check(b)?;
        let na = self.nonzero_count(a);
        let nb = self.nonzero_count(b);
        let (sparse, dense, support) = if na <= nb { (a, b, na) } else { (b, a, nb) };
        if support == 0 {
            return Ok(self.zero());
        }
        // Sparse kernel costs support * 2^dim ring products, the dense one 3^dim.
        if (support as f64) <= 1.5f64.powi(self.dim as i32) {
            Ok(self.mul_sparse(sparse, dense))
        } else {
            Ok(self.mul_dense(a, b))
        }
    }

    /// `a * (v0 + v)` in O(2^k): `out[w] = a[w] + a[w ^ v]`.
    pub fn mul_by_pair(&self, a: &GaElement<R::Elem>, v: GroupVector) -> Result<GaElement<R::Elem>> {
        self.check(a)?;
        self.check_vector(v)?;
        let shift = v.bits() as usize;
        let coeffs = (0..self.len())
            .map(|w| self.ring.add(a.coeffs[w], a.coeffs[w ^ shift]))
            .collect();
        Ok(GaElement {
            dim: self.dim,
            coeffs,
        })
    }

    fn mul_sparse(&self, sparse: &GaElement<R::Elem>, dense: &GaElement<R::Elem>) -> GaElement<R::Elem> {
        let mut out = vec![self.ring.zero(); self.len()];
        for (u, &c) in sparse.coeffs.iter().enumerate() {
            if self.ring.is_zero(c) {
                continue;
            }
            for (w, &d) in dense.coeffs.iter().enumerate() {
                if !self.ring.is_zero(d) {
                    let slot = &mut out[u ^ w];
                    *slot = self.ring.add(*slot, self.ring.mul(c, d));
                }
            }
        }
        GaElement {
            dim: self.dim,
            coeffs: out,
        }
    }

    /// Dense product by splitting on the top coordinate `g`:
    /// `(a0 + a1 g)(b0 + b1 g) = (a0 b0 + a1 b1) + ((a0+a1)(b0+b1) + a0 b0 + a1 b1) g`,
    /// three half-size products per level.
    pub fn mul_dense(&self, a: &GaElement<R::Elem>, b: &GaElement<R::Elem>) -> GaElement<R::Elem> {
        let mut out = vec![self.ring.zero(); self.len()];
        self.karatsuba(&a.coeffs, &b.coeffs, &mut out);
        GaElement {
            dim: self.dim,
            coeffs: out,
        }
    }

    /// Quadratic reference product.
    pub fn mul_schoolbook(
        &self,
        a: &GaElement<R::Elem>,
        b: &GaElement<R::Elem>,
    ) -> Result<GaElement<R::Elem>> {
        self.check(a)?;
        self.check(b)?;
        let mut out = vec![self.ring.zero(); self.len()];
        schoolbook(&self.ring, &a.coeffs, &b.coeffs, &mut out);
        Ok(GaElement {
            dim: self.dim,
            coeffs: out,
        })
    }

    fn karatsuba(&self, a: &[R::Elem], b: &[R::Elem], out: &mut [R::Elem]) {
        let mut scratch = vec![self.ring.zero(); 3 * a.len()];
        karatsuba(&self.ring, a, b, out, &mut scratch);
    }
}

/// Writes `a * b` into `out`; `scratch` needs `3 * a.len()` slots.
fn karatsuba<R: CoefficientRing>(ring: &R, a: &[R::Elem], b: &[R::Elem], out: &mut [R::Elem], scratch: &mut [R::Elem]) {
    let n = a.len();
    out.iter_mut().for_each(|x| *x = ring.zero());
    if n <= SCHOOLBOOK_MAX_LEN {
        ring.xor_convolve(a, b, out);
        return;
    }
    let h = n / 2;
    let (a0, a1) = a.split_at(h);
    let (b0, b1) = b.split_at(h);
    let (lo, hi) = out.split_at_mut(h);
    let (sums, rest) = scratch.split_at_mut(2 * h);
    let (p3, rest) = rest.split_at_mut(h);
    karatsuba(ring, a0, b0, lo, rest);
    karatsuba(ring, a1, b1, hi, rest);
    let (sa, sb) = sums.split_at_mut(h);
    for i in 0..h {
        sa[i] = ring.add(a0[i], a1[i]);
        sb[i] = ring.add(b0[i], b1[i]);
    }
    karatsuba(ring, sa, sb, p3, rest);
    for i in 0..h {
        let low = ring.add(lo[i], hi[i]);
        lo[i] = low;
        hi[i] = ring.add(p3[i], low);
    }
}

fn schoolbook<R: CoefficientRing>(ring: &R, a: &[R::Elem], b: &[R::Elem], out: &mut [R::Elem]) {
    for (u, &x) in a.iter().enumerate() {
        if ring.is_zero(x) {
            continue;
        }
        for (v, &y) in b.iter().enumerate() {
            if !ring.is_zero(y) {
                out[u ^ v] = ring.add(out[u ^ v], ring.mul(x, y));
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn gf2_algebra(dim: usize) -> GroupAlgebra<FieldContext> {
        GroupAlgebra::new(FieldContext::new(1).unwrap(), dim).unwrap()
    }

    fn ones(alg: &GroupAlgebra<FieldContext>, bits: &[u32]) -> GaElement<FieldElement> {
        alg.from_coeffs(bits.iter().map(|&b| FieldElement(b)).collect())
            .unwrap()
    }

    fn random_element<R: CoefficientRing>(
        alg: &GroupAlgebra<R>,
        rng: &mut ChaCha8Rng,
    ) -> GaElement<R::Elem> {
        let coeffs = (0..alg.len()).map(|_| alg.ring().random(rng)).collect();
        alg.from_coeffs(coeffs).unwrap()
    }

    #[test]
    fn from_pair_examples() {
        let alg = gf2_algebra(2);
        let v = |b| GroupVector::new(2, b).unwrap();
        assert_eq!(alg.from_pair(v(0b01)).unwrap(), ones(&alg, &[1, 1, 0, 0]));
        assert_eq!(alg.from_pair(v(0b11)).unwrap(), ones(&alg, &[1, 0, 0, 1]));
        assert!(alg.is_zero(&alg.from_pair(v(0)).unwrap()));
        let alg1 = gf2_algebra(1);
        assert_eq!(
            alg1.from_pair(GroupVector::unit(1, 0)).unwrap(),
            ones(&alg1, &[1, 1])
        );
        assert!(!alg.is_zero(&alg.from_pair(v(0b10)).unwrap()));
    }

    #[test]
    fn pair_squares_to_zero() {
        let f = FieldContext::new(8).unwrap();
        for dim in 1..=4 {
            let alg = GroupAlgebra::new(f.clone(), dim).unwrap();
            for bits in 1..(1u64 << dim) {
                let x = alg.from_pair(GroupVector::new(dim, bits).unwrap()).unwrap();
                assert!(alg.is_zero(&alg.mul(&x, &x).unwrap()));
                assert!(alg.is_zero(&alg.mul_dense(&x, &x)));
            }
        }
    }

    #[test]
    fn product_over_unit_vectors_is_all_ones() {
        for dim in 1..=8 {
            let alg = gf2_algebra(dim);
            let mut acc = alg.identity();
            for i in 0..dim {
                acc = alg
                    .mul(&acc, &alg.from_pair(GroupVector::unit(dim, i)).unwrap())
                    .unwrap();
            }
            assert!(acc.coeffs().iter().all(|&c| c == FieldElement::ONE));
        }
    }

    #[test]
    fn identity_and_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let alg = GroupAlgebra::new(FieldContext::new(8).unwrap(), 5).unwrap();
        let a = random_element(&alg, &mut rng);
        assert_eq!(alg.mul(&a, &alg.identity()).unwrap(), a);
        assert!(alg.is_zero(&alg.add(&a, &a).unwrap()));
        assert!(alg.is_zero(&alg.scale(&a, FieldElement::ZERO).unwrap()));
    }

    #[test]
    fn dimension_mismatch() {
        let f = FieldContext::new(4).unwrap();
        let a2 = GroupAlgebra::new(f.clone(), 2).unwrap();
        let a3 = GroupAlgebra::new(f, 3).unwrap();
        let x = a2.identity();
        let y = a3.identity();
        assert!(matches!(a2.mul(&x, &y), Err(Error::DimensionMismatch { .. })));
        assert!(a2.add(&x, &y).is_err());
        assert!(a2.from_pair(GroupVector::unit(3, 0)).is_err());
    }

    #[test]
    fn kernels_agree_with_schoolbook() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for dim in 0..=9 {
            let alg = GroupAlgebra::new(FieldContext::new(8).unwrap(), dim).unwrap();
            for _ in 0..5 {
                let a = random_element(&alg, &mut rng);
                let b = random_element(&alg, &mut rng);
                let reference = alg.mul_schoolbook(&a, &b).unwrap();
                assert_eq!(alg.mul_dense(&a, &b), reference);
                assert_eq!(alg.mul(&a, &b).unwrap(), reference);
                assert_eq!(alg.mul_sparse(&a, &b), reference);
            }
        }
    }

    #[test]
    fn pair_fast_path_matches_general_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let alg = GroupAlgebra::new(FieldContext::new(6).unwrap(), 6).unwrap();
        for _ in 0..20 {
            let a = random_element(&alg, &mut rng);
            let v = GroupVector::new(6, rng.gen_range(1..64)).unwrap();
            let slow = alg.mul(&a, &alg.from_pair(v).unwrap()).unwrap();
            assert_eq!(alg.mul_by_pair(&a, v).unwrap(), slow);
        }
    }

    #[test]
    fn ring_axioms_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let alg = GroupAlgebra::new(FieldContext::new(5).unwrap(), 6).unwrap();
        for _ in 0..10 {
            let a = random_element(&alg, &mut rng);
            let b = random_element(&alg, &mut rng);
            let c = random_element(&alg, &mut rng);
            let ab_c = alg.mul(&alg.mul(&a, &b).unwrap(), &c).unwrap();
            let a_bc = alg.mul(&a, &alg.mul(&b, &c).unwrap()).unwrap();
            assert_eq!(ab_c, a_bc);
            assert_eq!(alg.mul(&a, &b).unwrap(), alg.mul(&b, &a).unwrap());
            let lhs = alg.mul(&a, &alg.add(&b, &c).unwrap()).unwrap();
            let rhs = alg
                .add(&alg.mul(&a, &b).unwrap(), &alg.mul(&a, &c).unwrap())
                .unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn zpoly_min_degree() {
        let one = FieldElement::ONE;
        let p = ZPoly::from_coeffs(&[FieldElement::ZERO, FieldElement::ZERO, one, one]);
        assert_eq!(p.min_nonzero_degree(), Some(2));
        assert_eq!(ZPoly::ZERO.min_nonzero_degree(), None);
        assert_eq!(ZPoly::constant(one).min_nonzero_degree(), Some(0));
    }

    #[test]
    fn zpoly_ring_truncates() {
        let ring = ZPolyRing::new(FieldContext::new(4).unwrap(), 3).unwrap();
        let one = FieldElement::ONE;
        let z2 = ZPoly::monomial(2, one);
        assert_eq!(ring.mul(z2, z2), ZPoly::ZERO);
        let z = ZPoly::monomial(1, one);
        assert_eq!(ring.mul(z, z2), ZPoly::monomial(3, one));
        // (1 + z)^2 = 1 + z^2 in characteristic 2
        let p = ring.add(ring.one(), z);
        assert_eq!(ring.mul(p, p), ring.add(ring.one(), z2));
        assert!(ZPolyRing::new(FieldContext::new(4).unwrap(), 16).is_err());
    }

    #[test]
    fn zpoly_algebra_kernels_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let ring = ZPolyRing::new(FieldContext::new(7).unwrap(), 4).unwrap();
        let alg = GroupAlgebra::new(ring, 5).unwrap();
        for _ in 0..4 {
            let a = random_element(&alg, &mut rng);
            let b = random_element(&alg, &mut rng);
            assert_eq!(alg.mul_dense(&a, &b), alg.mul_schoolbook(&a, &b).unwrap());
        }
    }
}
