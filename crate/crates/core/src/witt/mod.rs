//! Truncated Witt vectors over p-torsion-free rings, computed through ghost
//! components.
//!
//! Arithmetic maps both operands to ghost vectors, operates componentwise and
//! back-substitutes. That is exact whenever the coefficient ring has no
//! p-torsion, which holds for `Z` and `Z[x]`.

pub mod selftest;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// A p-torsion-free coefficient ring.
pub trait Coeff: Clone + PartialEq + fmt::Debug + Send + Sync {
    fn constant(c: BigInt) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn scale(&self, c: &BigInt) -> Self;
    /// `self / d`, if `d` divides every coefficient.
    fn div_exact(&self, d: &BigInt) -> Option<Self>;
    /// Coefficients reduced into `[0, m)`.
    fn reduce_mod(&self, m: &BigInt) -> Self;

    fn zero() -> Self {
        Self::constant(<BigInt as Zero>::zero())
    }

    fn one() -> Self {
        Self::constant(<BigInt as One>::one())
    }

    fn divisible_by(&self, d: &BigInt) -> bool {
        self.div_exact(d).is_some()
    }

    fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }
}

impl Coeff for BigInt {
    fn constant(c: BigInt) -> Self {
        c
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn add(&self, other: &Self) -> Self {
        self + other
    }

    fn sub(&self, other: &Self) -> Self {
        self - other
    }

    fn mul(&self, other: &Self) -> Self {
        self * other
    }

    fn scale(&self, c: &BigInt) -> Self {
        self * c
    }

    fn div_exact(&self, d: &BigInt) -> Option<Self> {
        let (q, r) = self.div_rem(d);
        Zero::is_zero(&r).then_some(q)
    }

    fn reduce_mod(&self, m: &BigInt) -> Self {
        self.mod_floor(m)
    }
}

/// Dense univariate integer polynomial, lowest degree first, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct IntPoly(Vec<BigInt>);

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPoly(coeffs)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.0
    }

    fn map(&self, f: impl Fn(&BigInt) -> BigInt) -> Self {
        IntPoly::new(self.0.iter().map(f).collect())
    }

    fn zip(&self, other: &Self, f: impl Fn(&BigInt, &BigInt) -> BigInt) -> Self {
        let zero = <BigInt as Zero>::zero();
        let len = self.0.len().max(other.0.len());
        IntPoly::new(
            (0..len)
                .map(|i| f(self.0.get(i).unwrap_or(&zero), other.0.get(i).unwrap_or(&zero)))
                .collect(),
        )
    }
}

impl Coeff for IntPoly {
    fn constant(c: BigInt) -> Self {
        IntPoly::new(vec![c])
    }

    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn add(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a + b)
    }

    fn sub(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a - b)
    }

    fn mul(&self, other: &Self) -> Self {
        if self.0.is_empty() || other.0.is_empty() {
            return IntPoly::default();
        }
        let mut out = vec![<BigInt as Zero>::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if Zero::is_zero(a) {
                continue;
            }
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }

    fn scale(&self, c: &BigInt) -> Self {
        self.map(|a| a * c)
    }

    fn div_exact(&self, d: &BigInt) -> Option<Self> {
        let mut out = Vec::with_capacity(self.0.len());
        for a in &self.0 {
            out.push(a.div_exact(d)?);
        }
        Some(IntPoly::new(out))
    }

    fn reduce_mod(&self, m: &BigInt) -> Self {
        self.map(|a| a.mod_floor(m))
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.0.iter().enumerate().rev() {
            if Zero::is_zero(c) {
                continue;
            }
            let sign = if c.is_negative() { "-" } else if first { "" } else { "+" };
            let mag = c.abs();
            write!(f, "{sign}")?;
            let coef = if mag.is_one() && i > 0 { String::new() } else { format!("{mag}") };
            let star = if coef.is_empty() { "" } else { "*" };
            match i {
                0 => write!(f, "{mag}")?,
                1 => write!(f, "{coef}{star}x")?,
                _ => write!(f, "{coef}{star}x^{i}")?,
            }
            first = false;
        }
        Ok(())
    }
}

/// `(a_0, ..., a_(n-1))` in `W_n(C)`.
#[derive(Clone, PartialEq, Debug)]
pub struct WittVector<C> {
    p: u64,
    entries: Vec<C>,
}

/// Ghost components `(w_0, ..., w_(n-1))`.
#[derive(Clone, PartialEq, Debug)]
pub struct GhostVector<C>(pub Vec<C>);

fn big(x: u64) -> BigInt {
    BigInt::from(x)
}

impl<C: Coeff> WittVector<C> {
    pub fn new(p: u64, entries: Vec<C>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidConfig("Witt vectors need length at least 1".into()));
        }
        if !crate::config::is_prime(p) {
            return Err(Error::InvalidConfig(format!("{p} is not prime")));
        }
        Ok(WittVector { p, entries })
    }

    pub fn zero(p: u64, n: usize) -> Self {
        WittVector { p, entries: vec![C::zero(); n] }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[C] {
        &self.entries
    }

    /// `w_r = sum_(s <= r) p^s a_s^(p^(r-s))`.
    pub fn ghost_component(&self, r: usize) -> C {
        let mut acc = C::zero();
        for (s, a) in self.entries[..=r].iter().enumerate() {
            let term = a.pow(self.p.pow((r - s) as u32)).scale(&big(self.p).pow(s as u32));
            acc = acc.add(&term);
        }
        acc
    }

    pub fn ghost(&self) -> GhostVector<C> {
        GhostVector((0..self.len()).map(|r| self.ghost_component(r)).collect())
    }

    /// Inverse of [`ghost`](Self::ghost) on its image.
    pub fn from_ghost(p: u64, g: &GhostVector<C>) -> Result<Self> {
        let mut entries: Vec<C> = Vec::with_capacity(g.0.len());
        for (r, w) in g.0.iter().enumerate() {
            let mut rest = w.clone();
            for (s, a) in entries.iter().enumerate() {
                let term = a.pow(p.pow((r - s) as u32)).scale(&big(p).pow(s as u32));
                rest = rest.sub(&term);
            }
            let a_r = rest.div_exact(&big(p).pow(r as u32)).ok_or(Error::NotInGhostImage { index: r })?;
            entries.push(a_r);
        }
        WittVector::new(p, entries)
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.p != other.p || self.len() != other.len() {
            return Err(Error::WittMismatch);
        }
        Ok(())
    }

    fn via_ghost(&self, other: &Self, op: impl Fn(&C, &C) -> C) -> Result<Self> {
        self.check_compatible(other)?;
        let (a, b) = (self.ghost(), other.ghost());
        let g = GhostVector(a.0.iter().zip(&b.0).map(|(x, y)| op(x, y)).collect());
        WittVector::from_ghost(self.p, &g)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.via_ghost(other, C::add)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.via_ghost(other, C::mul)
    }

    pub fn neg(&self) -> Result<Self> {
        let g = GhostVector(self.ghost().0.iter().map(|w| C::zero().sub(w)).collect());
        WittVector::from_ghost(self.p, &g)
    }

    /// Shift `V`: `(0, a_0, ..., a_(n-1))`, one longer.
    pub fn verschiebung(&self) -> Self {
        let mut entries = Vec::with_capacity(self.len() + 1);
        entries.push(C::zero());
        entries.extend(self.entries.iter().cloned());
        WittVector { p: self.p, entries }
    }

    /// Restriction `Res`: drops the last entry. Length 1 vectors are returned unchanged.
    pub fn restriction(&self) -> Self {
        let keep = self.len().saturating_sub(1).max(1);
        WittVector { p: self.p, entries: self.entries[..keep].to_vec() }
    }

    /// Teichmüller lift `[a] = (a, 0, ..., 0)`.
    pub fn teichmuller(p: u64, a: C, n: usize) -> Self {
        let mut entries = vec![C::zero(); n.max(1)];
        entries[0] = a;
        WittVector { p, entries }
    }

    pub fn reduce_entries(&self, m: &BigInt) -> Self {
        WittVector { p: self.p, entries: self.entries.iter().map(|a| a.reduce_mod(m)).collect() }
    }
}

/// The universal sum and product polynomials of `W_2`, written out.
pub fn add_len2<C: Coeff>(p: u64, a: (&C, &C), b: (&C, &C)) -> (C, C) {
    let s0 = a.0.add(b.0);
    let carry = a.0.pow(p).add(&b.0.pow(p)).sub(&s0.pow(p));
    let carry = carry.div_exact(&big(p)).expect("a^p + b^p - (a+b)^p is divisible by p");
    (s0, a.1.add(b.1).add(&carry))
}

pub fn mul_len2<C: Coeff>(p: u64, a: (&C, &C), b: (&C, &C)) -> (C, C) {
    let m0 = a.0.mul(b.0);
    let m1 = a.0.pow(p).mul(b.1).add(&b.0.pow(p).mul(a.1)).add(&a.1.mul(b.1).scale(&big(p)));
    (m0, m1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn wv(p: u64, xs: &[i64]) -> WittVector<BigInt> {
        WittVector::new(p, xs.iter().map(|&x| BigInt::from(x)).collect()).unwrap()
    }

    #[test]
    fn ghost_values() {
        assert_eq!(wv(2, &[3, 5]).ghost().0, vec![BigInt::from(3), BigInt::from(19)]);
        assert_eq!(wv(2, &[2, 2]).ghost().0, vec![BigInt::from(2), BigInt::from(8)]);
        assert_eq!(wv(3, &[0, 0, 0]).ghost().0, vec![<BigInt as Zero>::zero(); 3]);
        let t = WittVector::teichmuller(3, BigInt::from(2), 3);
        assert_eq!(t.ghost().0, vec![BigInt::from(2), BigInt::from(8), BigInt::from(512)]);
    }

    #[test]
    fn back_substitution() {
        let g = GhostVector(vec![BigInt::from(1), BigInt::from(3)]);
        assert_eq!(WittVector::from_ghost(2, &g).unwrap(), wv(2, &[1, 1]));
        let bad = GhostVector(vec![BigInt::from(0), BigInt::from(1)]);
        assert!(matches!(WittVector::<BigInt>::from_ghost(2, &bad), Err(Error::NotInGhostImage { index: 1 })));
    }

    #[test]
    fn one_plus_v_one() {
        let one = WittVector::teichmuller(2, <BigInt as One>::one(), 1);
        let a = WittVector::teichmuller(2, <BigInt as One>::one(), 2);
        let b = one.verschiebung();
        assert_eq!(a.add(&b).unwrap(), wv(2, &[1, 1]));
    }

    #[test]
    fn closed_forms_agree() {
        let a = wv(3, &[4, -7]);
        let b = wv(3, &[-2, 5]);
        let e = a.entries();
        let f = b.entries();
        let (s0, s1) = add_len2(3, (&e[0], &e[1]), (&f[0], &f[1]));
        assert_eq!(a.add(&b).unwrap().entries(), &[s0, s1]);
        let (m0, m1) = mul_len2(3, (&e[0], &e[1]), (&f[0], &f[1]));
        assert_eq!(a.mul(&b).unwrap().entries(), &[m0, m1]);
    }

    #[test]
    fn polynomial_entries() {
        let x = IntPoly::new(vec![<BigInt as Zero>::zero(), <BigInt as One>::one()]);
        let a = WittVector::new(2, vec![x.clone(), IntPoly::one()]).unwrap();
        let b = WittVector::new(2, vec![IntPoly::one(), x.clone()]).unwrap();
        let s = a.add(&b).unwrap();
        // carry = (x^2 + 1 - (x+1)^2)/2 = -x
        assert_eq!(s.entries()[1], IntPoly::one());
        assert_eq!(format!("{}", x.pow(3).sub(&IntPoly::constant(BigInt::from(2)))), "x^3-2");
        assert!(WittVector::<IntPoly>::new(4, vec![x]).is_err());
    }
}
