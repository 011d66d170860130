//! Sparse multivariate polynomials over `Z/p^prec`.
//!
//! A [`ModPoly`] carries a precision ledger `prec <= W`: its coefficients are
//! canonical residues in `[0, p^prec)`. Binary operations first reduce both
//! operands to the smaller precision. Operations that consume a p-adic digit
//! ([`ModPoly::divide_exact_by_p`]) lower the ledger by one.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::config::RingConfig;
use crate::error::{Error, Result};
use crate::monomial::Monomial;
use crate::par;

#[inline]
pub(crate) fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

#[inline]
pub(crate) fn addmod(a: u64, b: u64, m: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % m as u128) as u64
}

#[inline]
pub(crate) fn negmod(a: u64, m: u64) -> u64 {
    if a == 0 {
        0
    } else {
        m - a
    }
}

/// p-adic valuation of a nonzero residue, capped at `cap`.
#[inline]
pub(crate) fn valuation(mut a: u64, p: u64, cap: u32) -> u32 {
    if a == 0 {
        return cap;
    }
    let mut v = 0;
    while a.is_multiple_of(p) && v < cap {
        a /= p;
        v += 1;
    }
    v
}

/// Inverse of a unit modulo `m`.
pub(crate) fn inv_mod(a: u64, m: u64) -> u64 {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    debug_assert_eq!(r0, 1, "{a} is not a unit mod {m}");
    t0.rem_euclid(m as i128) as u64
}

/// A term `c * x^e` that escapes an ideal of the form `(m^[p], p^s)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Escape {
    pub monomial: Monomial,
    pub coefficient: u64,
}

#[derive(Clone)]
pub struct ModPoly {
    cfg: Arc<RingConfig>,
    prec: u32,
    terms: BTreeMap<Monomial, u64>,
}

impl ModPoly {
    pub fn zero(cfg: &Arc<RingConfig>) -> Self {
        Self::zero_with_prec(cfg, cfg.precision())
    }

    pub fn zero_with_prec(cfg: &Arc<RingConfig>, prec: u32) -> Self {
        assert!(prec >= 1 && prec <= cfg.precision(), "precision {prec} out of range");
        ModPoly { cfg: cfg.clone(), prec, terms: BTreeMap::new() }
    }

    pub fn one(cfg: &Arc<RingConfig>) -> Self {
        Self::constant(cfg, 1)
    }

    /// Integer constant reduced mod `p^W`; negative values map to `p^W - |c|`.
    pub fn constant(cfg: &Arc<RingConfig>, c: i64) -> Self {
        let m = cfg.modulus(cfg.precision());
        let r = (c as i128).rem_euclid(m as i128) as u64;
        Self::monomial(cfg, Monomial::one(cfg.nvars()), r)
    }

    pub fn monomial(cfg: &Arc<RingConfig>, mono: Monomial, coeff: u64) -> Self {
        Self::from_terms(cfg, cfg.precision(), [(mono, coeff)])
    }

    pub fn var(cfg: &Arc<RingConfig>, i: usize) -> Self {
        Self::monomial(cfg, Monomial::var(cfg.nvars(), i), 1)
    }

    /// Collects terms, summing duplicates and reducing mod `p^prec`.
    pub fn from_terms<I>(cfg: &Arc<RingConfig>, prec: u32, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, u64)>,
    {
        let mut out = Self::zero_with_prec(cfg, prec);
        let m = out.modulus();
        for (mono, c) in terms {
            assert_eq!(mono.nvars(), cfg.nvars(), "exponent vector length mismatch");
            let c = c % m;
            if c == 0 {
                continue;
            }
            let slot = out.terms.entry(mono).or_insert(0);
            *slot = addmod(*slot, c, m);
        }
        out.terms.retain(|_, c| *c != 0);
        out
    }

    pub(crate) fn from_sorted_map(cfg: &Arc<RingConfig>, prec: u32, terms: BTreeMap<Monomial, u64>) -> Self {
        debug_assert!(terms.values().all(|&c| c != 0 && c < cfg.modulus(prec)));
        ModPoly { cfg: cfg.clone(), prec, terms }
    }

    pub fn cfg(&self) -> &Arc<RingConfig> {
        &self.cfg
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn p(&self) -> u64 {
        self.cfg.p()
    }

    pub fn nvars(&self) -> usize {
        self.cfg.nvars()
    }

    pub fn modulus(&self) -> u64 {
        self.cfg.modulus(self.prec)
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, u64)> + ExactSizeIterator {
        self.terms.iter().map(|(m, c)| (m, *c))
    }

    pub fn coeff(&self, mono: &Monomial) -> u64 {
        self.terms.get(mono).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u64> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn leading_term(&self) -> Option<(&Monomial, u64)> {
        self.terms.iter().next_back().map(|(m, c)| (m, *c))
    }

    /// A single term with coefficient 1.
    pub fn as_monomial(&self) -> Option<&Monomial> {
        match self.terms.iter().next() {
            Some((m, 1)) if self.terms.len() == 1 => Some(m),
            _ => None,
        }
    }

    pub fn reduce_precision(&self, prec: u32) -> Result<ModPoly> {
        if prec == 0 || prec > self.prec {
            return Err(Error::InsufficientPrecision { needed: prec, have: self.prec });
        }
        if prec == self.prec {
            return Ok(self.clone());
        }
        let m = self.cfg.modulus(prec);
        let terms = self
            .terms
            .iter()
            .filter_map(|(mono, c)| {
                let c = c % m;
                (c != 0).then(|| (mono.clone(), c))
            })
            .collect();
        Ok(ModPoly { cfg: self.cfg.clone(), prec, terms })
    }

    fn check_compatible(&self, other: &ModPoly) -> Result<()> {
        if Arc::ptr_eq(&self.cfg, &other.cfg) || self.cfg.compatible(&other.cfg) {
            Ok(())
        } else {
            Err(Error::VariableMismatch)
        }
    }

    fn aligned(&self, other: &ModPoly) -> Result<(ModPoly, ModPoly)> {
        self.check_compatible(other)?;
        let prec = self.prec.min(other.prec);
        Ok((self.reduce_precision(prec)?, other.reduce_precision(prec)?))
    }

    pub fn try_add(&self, other: &ModPoly) -> Result<ModPoly> {
        let (mut a, b) = self.aligned(other)?;
        let m = a.modulus();
        for (mono, c) in b.terms {
            let slot = a.terms.entry(mono).or_insert(0);
            *slot = addmod(*slot, c, m);
        }
        a.terms.retain(|_, c| *c != 0);
        Ok(a)
    }

    pub fn try_sub(&self, other: &ModPoly) -> Result<ModPoly> {
        self.try_add(&other.neg())
    }

    pub fn neg(&self) -> ModPoly {
        let m = self.modulus();
        ModPoly {
            cfg: self.cfg.clone(),
            prec: self.prec,
            terms: self.terms.iter().map(|(k, c)| (k.clone(), negmod(*c, m))).collect(),
        }
    }

    /// Multiplies every coefficient by the integer `c`.
    pub fn scale(&self, c: u64) -> ModPoly {
        let m = self.modulus();
        let c = c % m;
        let terms = self
            .terms
            .iter()
            .filter_map(|(k, a)| {
                let v = mulmod(*a, c, m);
                (v != 0).then(|| (k.clone(), v))
            })
            .collect();
        ModPoly { cfg: self.cfg.clone(), prec: self.prec, terms }
    }

    pub fn mul_monomial(&self, mono: &Monomial) -> Result<ModPoly> {
        let terms = self
            .terms
            .iter()
            .map(|(k, c)| Ok((k.checked_mul(mono)?, *c)))
            .collect::<Result<BTreeMap<_, _>>>()?;
        Ok(ModPoly { cfg: self.cfg.clone(), prec: self.prec, terms })
    }

    pub fn try_mul(&self, other: &ModPoly) -> Result<ModPoly> {
        let (a, b) = self.aligned(other)?;
        let m = a.modulus();
        // iterate over the longer operand in the outer (parallel) loop
        let (big, small) = if a.terms.len() >= b.terms.len() { (&a, &b) } else { (&b, &a) };
        if small.terms.len() == 1 {
            let (mono, c) = small.terms.iter().next().unwrap();
            return Ok(big.mul_monomial(mono)?.scale(*c));
        }
        let small_terms: Vec<(&Monomial, u64)> = small.terms().collect();
        let big_terms: Vec<(&Monomial, u64)> = big.terms().collect();
        let work = big_terms.len() * small_terms.len();
        let chunk = if work > (1 << 16) {
            (big_terms.len() / (4 * par::current_threads()).max(1)).max(64)
        } else {
            big_terms.len().max(1)
        };
        let chunks: Vec<&[(&Monomial, u64)]> = big_terms.chunks(chunk).collect();
        let partials = par::map(&chunks, |chunk| -> Result<HashMap<Monomial, u64>> {
            let mut acc: HashMap<Monomial, u64> = HashMap::with_capacity(chunk.len() * small_terms.len());
            for (ma, ca) in chunk.iter() {
                for (mb, cb) in &small_terms {
                    let slot = acc.entry(ma.checked_mul(mb)?).or_insert(0);
                    *slot = addmod(*slot, mulmod(*ca, *cb, m), m);
                }
            }
            Ok(acc)
        });
        let mut terms: BTreeMap<Monomial, u64> = BTreeMap::new();
        for part in partials {
            for (k, c) in part? {
                let slot = terms.entry(k).or_insert(0);
                *slot = addmod(*slot, c, m);
            }
        }
        terms.retain(|_, c| *c != 0);
        Ok(ModPoly { cfg: a.cfg.clone(), prec: a.prec, terms })
    }

    fn square_and_multiply(&self, mut e: u64) -> Result<ModPoly> {
        let mut acc = ModPoly::one(&self.cfg).reduce_precision(self.prec)?;
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.try_mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.try_mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// `self^e`, with `self^0 = 1`.
    ///
    /// Exponentiation runs over the base-p digits of `e`. The powers
    /// `a^(p^j)` for `j >= prec` are obtained as `phi(a^(p^(j-1)))`, which is
    /// exact mod `p^prec` because `phi(b) = b^p mod p` lifts to
    /// `phi(b)^(p^(j-1)) = b^(p^j) mod p^j`. Digits are handled by
    /// square-and-multiply.
    pub fn pow(&self, e: u64) -> Result<ModPoly> {
        let p = self.p();
        let mut acc = ModPoly::one(&self.cfg).reduce_precision(self.prec)?;
        if e == 0 {
            return Ok(acc);
        }
        if self.terms.len() <= 1 {
            return self.square_and_multiply(e);
        }
        let mut digits = Vec::new();
        let mut rest = e;
        while rest > 0 {
            digits.push(rest % p);
            rest /= p;
        }
        // base holds a^(p^j)
        let mut base = self.clone();
        for (j, &d) in digits.iter().enumerate() {
            if d > 0 {
                acc = acc.try_mul(&base.square_and_multiply(d)?)?;
            }
            if j + 1 < digits.len() {
                base = if (j + 1) as u32 >= self.prec {
                    base.frobenius_lift()?
                } else {
                    base.square_and_multiply(p)?
                };
            }
        }
        Ok(acc)
    }

    /// The Frobenius lift `x_i -> x_i^p`, fixing coefficients.
    pub fn frobenius_lift(&self) -> Result<ModPoly> {
        let p = self.p();
        let terms = self
            .terms
            .iter()
            .map(|(k, c)| Ok((k.checked_scale(p)?, *c)))
            .collect::<Result<BTreeMap<_, _>>>()?;
        Ok(ModPoly { cfg: self.cfg.clone(), prec: self.prec, terms })
    }

    /// Divides every coefficient by `p`; the result has precision `prec - 1`.
    pub fn divide_exact_by_p(&self) -> Result<ModPoly> {
        if self.prec < 2 {
            return Err(Error::InsufficientPrecision { needed: 2, have: self.prec });
        }
        let p = self.p();
        let m = self.cfg.modulus(self.prec - 1);
        let mut terms = BTreeMap::new();
        for (k, c) in &self.terms {
            if c % p != 0 {
                return Err(Error::NotDivisible {
                    monomial: k.display(self.cfg.vars()).to_string(),
                });
            }
            let v = (c / p) % m;
            if v != 0 {
                terms.insert(k.clone(), v);
            }
        }
        Ok(ModPoly { cfg: self.cfg.clone(), prec: self.prec - 1, terms })
    }

    /// Membership in `(p^r)`: every coefficient divisible by `p^r`.
    pub fn in_pr_ideal(&self, r: u32) -> Result<bool> {
        if r >= self.prec {
            return Err(Error::InsufficientPrecision { needed: r + 1, have: self.prec });
        }
        let q = self.cfg.modulus(r);
        Ok(self.terms.values().all(|c| c % q == 0))
    }

    /// The graded-lex largest term outside `(m^[p], p^s)`, if any.
    pub fn escape_mp_plus_ps(&self, s: u32) -> Result<Option<Escape>> {
        if s > self.prec {
            return Err(Error::InsufficientPrecision { needed: s, have: self.prec });
        }
        let p = self.p();
        let q = self.cfg.modulus(s);
        Ok(self
            .terms
            .iter()
            .rev()
            .find(|(k, c)| !k.in_frobenius_power(p) && *c % q != 0)
            .map(|(k, c)| Escape { monomial: k.clone(), coefficient: *c }))
    }

    /// Membership in `(m^[p], p^s)` where `m^[p] = (x_1^p, ..., x_k^p)`.
    pub fn in_mp_plus_ps(&self, s: u32) -> Result<bool> {
        Ok(self.escape_mp_plus_ps(s)?.is_none())
    }

    /// Coefficient-wise residue as a signed representative in `(-m/2, m/2]`.
    pub fn signed_coeff(&self, mono: &Monomial) -> i128 {
        let m = self.modulus() as i128;
        let c = self.coeff(mono) as i128;
        if 2 * c > m {
            c - m
        } else {
            c
        }
    }
}

impl PartialEq for ModPoly {
    fn eq(&self, other: &Self) -> bool {
        self.cfg.compatible(&other.cfg) && self.prec == other.prec && self.terms == other.terms
    }
}

impl Eq for ModPoly {}

impl Hash for ModPoly {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.prec.hash(state);
        for (k, c) in &self.terms {
            k.hash(state);
            c.hash(state);
        }
    }
}

impl fmt::Debug for ModPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ModPoly[p^{}]({})", self.prec, crate::parse::format_poly(self))
    }
}

impl fmt::Display for ModPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::parse::format_poly(self))
    }
}

macro_rules! forward_op {
    ($tr:ident, $m:ident, $inner:ident) => {
        impl $tr<&ModPoly> for &ModPoly {
            type Output = ModPoly;
            fn $m(self, rhs: &ModPoly) -> ModPoly {
                self.$inner(rhs).expect("incompatible polynomial operands")
            }
        }
        impl $tr<ModPoly> for ModPoly {
            type Output = ModPoly;
            fn $m(self, rhs: ModPoly) -> ModPoly {
                (&self).$inner(&rhs).expect("incompatible polynomial operands")
            }
        }
    };
}

forward_op!(Add, add, try_add);
forward_op!(Sub, sub, try_sub);
forward_op!(Mul, mul, try_mul);

impl Neg for &ModPoly {
    type Output = ModPoly;
    fn neg(self) -> ModPoly {
        ModPoly::neg(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;

    fn ring(vars: &[&str], p: u64, w: u32) -> Arc<RingConfig> {
        RingConfig::new(vars, p, w).unwrap()
    }

    #[test]
    fn addition_doubles() {
        let cfg = ring(&["x", "y"], 2, 2);
        let a = parse_poly("x+y", &cfg).unwrap();
        assert_eq!(&a + &a, parse_poly("2*x+2*y", &cfg).unwrap());
        assert!((&(&a + &a) + &(&a + &a)).is_zero());
    }

    #[test]
    fn product_of_variables() {
        let cfg = ring(&["x", "y"], 3, 1);
        let xy = &ModPoly::var(&cfg, 0) * &ModPoly::var(&cfg, 1);
        assert_eq!(xy, ModPoly::monomial(&cfg, Monomial::new(vec![1, 1]), 1));
    }

    #[test]
    fn mixed_precision_reduces_to_minimum() {
        let cfg = ring(&["x"], 2, 3);
        let a = parse_poly("5*x", &cfg).unwrap();
        let b = a.reduce_precision(1).unwrap();
        let s = &a + &b;
        assert_eq!(s.prec(), 1);
        assert!(s.is_zero());
    }

    #[test]
    fn variable_mismatch() {
        let a = ModPoly::one(&ring(&["x"], 2, 2));
        let b = ModPoly::one(&ring(&["y"], 2, 2));
        assert_eq!(a.try_add(&b), Err(Error::VariableMismatch));
        assert_eq!(a.try_mul(&b), Err(Error::VariableMismatch));
    }

    #[test]
    fn binomial_square_mod_two() {
        let cfg = ring(&["x", "y"], 2, 1);
        let a = parse_poly("x+y", &cfg).unwrap();
        assert_eq!(a.pow(2).unwrap(), parse_poly("x^2+y^2", &cfg).unwrap());
    }

    #[test]
    fn pow_matches_repeated_multiplication() {
        let cfg = ring(&["x", "y", "z"], 2, 3);
        let f = parse_poly("z^2+x^3+y^2*z+3*x*y", &cfg).unwrap();
        let mut naive = ModPoly::one(&cfg);
        for e in 0..=20u64 {
            assert_eq!(f.pow(e).unwrap(), naive, "exponent {e}");
            naive = &naive * &f;
        }
        let cfg3 = ring(&["x", "y"], 3, 2);
        let g = parse_poly("x+2*y+1", &cfg3).unwrap();
        let mut naive = ModPoly::one(&cfg3);
        for e in 0..=30u64 {
            assert_eq!(g.pow(e).unwrap(), naive, "exponent {e}");
            naive = &naive * &g;
        }
    }

    #[test]
    fn pow_extreme_monomial() {
        let cfg = ring(&["x", "y", "z"], 2, 2);
        let f = parse_poly("z^2+x^3+y^2*z", &cfg).unwrap();
        let g = f.pow(127).unwrap();
        assert_eq!(g.degree(), Some(381));
        assert_eq!(g.coeff(&Monomial::new(vec![0, 0, 254])), 1);
        assert_eq!(g.coeff(&Monomial::new(vec![381, 0, 0])), 1);
    }

    #[test]
    fn frobenius_lift_substitutes() {
        let cfg = ring(&["x"], 2, 2);
        let a = parse_poly("x+3", &cfg).unwrap();
        assert_eq!(a.frobenius_lift().unwrap(), parse_poly("x^2+3", &cfg).unwrap());
    }

    #[test]
    fn divide_by_p() {
        let cfg = ring(&["x", "y"], 2, 2);
        let a = parse_poly("2*x+4*y", &cfg).unwrap();
        let cfg1 = ring(&["x", "y"], 2, 2);
        let d = a.divide_exact_by_p().unwrap();
        assert_eq!(d.prec(), 1);
        assert_eq!(d, parse_poly("x", &cfg1).unwrap().reduce_precision(1).unwrap());
        let x = parse_poly("x", &cfg).unwrap();
        assert!(matches!(x.divide_exact_by_p(), Err(Error::NotDivisible { monomial }) if monomial == "x"));
        assert!(matches!(d.divide_exact_by_p(), Err(Error::InsufficientPrecision { .. })));
    }

    #[test]
    fn pr_ideal_membership() {
        let cfg = ring(&["x", "y"], 2, 2);
        assert!(parse_poly("2*x+2*y", &cfg).unwrap().in_pr_ideal(1).unwrap());
        assert!(!parse_poly("2*x+y", &cfg).unwrap().in_pr_ideal(1).unwrap());
        assert!(parse_poly("x+y", &cfg).unwrap().in_pr_ideal(0).unwrap());
        assert!(parse_poly("x", &cfg).unwrap().in_pr_ideal(2).is_err());
    }

    #[test]
    fn frobenius_power_membership() {
        let cfg = ring(&["x", "y"], 2, 2);
        let a = parse_poly("x^2+2*y", &cfg).unwrap();
        let esc = a.escape_mp_plus_ps(2).unwrap().unwrap();
        assert_eq!(esc.monomial, Monomial::new(vec![0, 1]));
        assert_eq!(esc.coefficient, 2);
        assert!(a.in_mp_plus_ps(1).unwrap());
        assert!(a.in_mp_plus_ps(3).is_err());
    }

    #[test]
    fn inverse_mod() {
        for m in [4u64, 9, 27, 125] {
            for a in 1..m {
                if a % 2 != 0 && m == 4 || a % 3 != 0 && (m == 9 || m == 27) || a % 5 != 0 && m == 125 {
                    assert_eq!(mulmod(a, inv_mod(a, m), m), 1);
                }
            }
        }
    }
}
