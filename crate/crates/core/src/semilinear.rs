//! The semilinear operators the criteria are built from.
//!
//! With the Frobenius lift `phi(x_i) = x_i^p`, the monomials `x^r` for
//! `r in [0, p-1]^k` form a basis of `phi_* A` over `A`. Every `g` decomposes
//! uniquely as `g = sum_r phi(c_r) x^r`. The trace generator `u` is the dual
//! functional picking out `c_(p-1, ..., p-1)`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::monomial::Monomial;
use crate::poly::ModPoly;

/// Coordinates of `g` in the basis `{x^r : r in [0, p-1]^k}` of `phi_* A`.
#[derive(Debug, Clone, PartialEq)]
pub struct DigitDecomposition {
    pub parts: BTreeMap<Monomial, ModPoly>,
}

impl DigitDecomposition {
    /// The coordinate `c_r`, zero when absent.
    pub fn part(&self, r: &Monomial, like: &ModPoly) -> ModPoly {
        self.parts
            .get(r)
            .cloned()
            .unwrap_or_else(|| ModPoly::zero_with_prec(like.cfg(), like.prec()))
    }

    /// `sum_r phi(c_r) x^r`.
    pub fn reconstruct(&self, like: &ModPoly) -> Result<ModPoly> {
        let mut out = ModPoly::zero_with_prec(like.cfg(), like.prec());
        for (r, c) in &self.parts {
            out = out.try_add(&c.frobenius_lift()?.mul_monomial(r)?)?;
        }
        Ok(out)
    }
}

pub fn digit_decompose(g: &ModPoly) -> DigitDecomposition {
    let p = g.p();
    let mut buckets: BTreeMap<Monomial, Vec<(Monomial, u64)>> = BTreeMap::new();
    for (e, c) in g.terms() {
        let (q, r) = e.digit_split(p);
        buckets.entry(r).or_default().push((q, c));
    }
    let parts = buckets
        .into_iter()
        .map(|(r, terms)| (r, ModPoly::from_terms(g.cfg(), g.prec(), terms)))
        .collect();
    DigitDecomposition { parts }
}

/// `u^j`: keeps the terms whose exponents are all `= p^j - 1 mod p^j` and
/// maps `x^e` to `x^((e - (p^j - 1)) / p^j)`.
///
/// Iterating the single-digit extraction `j` times is the same as extracting
/// the lowest `j` base-p digits at once, which is what this does.
pub fn u_iter(g: &ModPoly, j: u32) -> ModPoly {
    if j == 0 {
        return g.clone();
    }
    let q = match g.p().checked_pow(j) {
        Some(q) if q <= u32::MAX as u64 + 1 => q,
        // every exponent is < p^j, so only the exponent (p^j - 1) could survive
        _ => return ModPoly::zero_with_prec(g.cfg(), g.prec()),
    };
    let terms: BTreeMap<Monomial, u64> = g
        .terms()
        .filter(|(e, _)| e.exps().iter().all(|&x| (x as u64 + 1).is_multiple_of(q)))
        .map(|(e, c)| {
            let exps = e.exps().iter().map(|&x| ((x as u64 + 1) / q - 1) as u32).collect();
            (Monomial::new(exps), c)
        })
        .collect();
    ModPoly::from_sorted_map(g.cfg(), g.prec(), terms)
}

/// The trace generator `u`: the `(p-1, ..., p-1)` coordinate of the digit decomposition.
pub fn u_op(g: &ModPoly) -> ModPoly {
    u_iter(g, 1)
}

/// Sign of the Witt correction; the criteria are invariant under the choice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DeltaSign {
    #[default]
    Plus,
    Minus,
}

/// `Delta_1(a) = (phi(a) - a^p) / p`, at precision `prec(a) - 1`.
pub fn delta1(a: &ModPoly) -> Result<ModPoly> {
    if a.prec() < 2 {
        return Err(Error::InsufficientPrecision { needed: 2, have: a.prec() });
    }
    let diff = a.frobenius_lift()?.try_sub(&a.pow(a.p())?)?;
    diff.divide_exact_by_p()
}

pub fn delta1_signed(a: &ModPoly, sign: DeltaSign) -> Result<ModPoly> {
    let d = delta1(a)?;
    Ok(match sign {
        DeltaSign::Plus => d,
        DeltaSign::Minus => d.neg(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::RingConfig;
    use crate::parse::parse_poly;
    use std::sync::Arc;

    fn ring(vars: &[&str], p: u64, w: u32) -> Arc<RingConfig> {
        RingConfig::new(vars, p, w).unwrap()
    }

    #[test]
    fn decompose_one_variable() {
        let cfg = ring(&["x"], 2, 2);
        let g = parse_poly("x^3", &cfg).unwrap();
        let d = digit_decompose(&g);
        assert_eq!(d.part(&Monomial::new(vec![1]), &g), parse_poly("x", &cfg).unwrap());
        assert!(d.part(&Monomial::new(vec![0]), &g).is_zero());

        let h = parse_poly("x^2+x", &cfg).unwrap();
        let d = digit_decompose(&h);
        assert_eq!(d.part(&Monomial::new(vec![0]), &h), parse_poly("x", &cfg).unwrap());
        assert_eq!(d.part(&Monomial::new(vec![1]), &h), parse_poly("1", &cfg).unwrap());
        assert_eq!(d.reconstruct(&h).unwrap(), h);
    }

    #[test]
    fn u_normalization() {
        for p in [2u64, 3, 5] {
            let cfg = ring(&["x", "y", "z"], p, 2);
            let s = format!("x^{0}*y^{0}*z^{0}", p - 1);
            assert_eq!(u_op(&parse_poly(&s, &cfg).unwrap()), ModPoly::one(&cfg));
        }
    }

    #[test]
    fn u_on_example_hypersurface() {
        let cfg = ring(&["x", "y", "z"], 2, 2);
        let g = parse_poly("x*y*z*(z^2+x^3+y^2*z)", &cfg).unwrap();
        assert_eq!(u_op(&g), parse_poly("z", &cfg).unwrap());
        assert!(u_op(&parse_poly("x^2*y*z", &cfg).unwrap()).is_zero());
    }

    #[test]
    fn u_iter_digits() {
        let cfg = ring(&["x"], 3, 1);
        assert_eq!(u_iter(&parse_poly("x^8", &cfg).unwrap(), 2), ModPoly::one(&cfg));
        let g = parse_poly("x^26 + x^17 + 2*x^8 + x", &cfg).unwrap();
        let mut it = g.clone();
        for j in 0..4 {
            assert_eq!(u_iter(&g, j), it, "j = {j}");
            it = u_op(&it);
        }
        assert!(u_iter(&g, 40).is_zero());
    }

    #[test]
    fn delta1_examples() {
        let cfg = ring(&["x", "y"], 2, 3);
        assert!(delta1(&ModPoly::one(&cfg)).unwrap().is_zero());
        assert!(delta1(&parse_poly("x^3*y", &cfg).unwrap()).unwrap().is_zero());
        let d = delta1(&parse_poly("x+y", &cfg).unwrap()).unwrap();
        assert_eq!(d.prec(), 2);
        // -xy mod 4
        assert_eq!(d, parse_poly("3*x*y", &cfg).unwrap().reduce_precision(2).unwrap());
        let d3 = delta1(&parse_poly("3", &cfg).unwrap()).unwrap();
        // (3 - 9) / 2 = -3 = 1 mod 4
        assert_eq!(d3, parse_poly("-3", &cfg).unwrap().reduce_precision(2).unwrap());
        let low = parse_poly("x", &cfg).unwrap().reduce_precision(1).unwrap();
        assert!(matches!(delta1(&low), Err(Error::InsufficientPrecision { .. })));
    }
}
