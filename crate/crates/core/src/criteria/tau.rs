//! Test-element discovery for `tau(R/fR)`.
//!
//! `tau` contains the Jacobian ideal and is stable under `a -> u(a f^(p-1))`,
//! so closing the partial derivatives under that step (after monomial
//! multiplication) produces elements of `tau`. Everything here is mod p.

use std::cmp::Ordering;
use std::collections::HashSet;

use crate::error::Result;
use crate::modlin::ideal_slice;
use crate::monomial::{monomials_up_to, Monomial};
use crate::par;
use crate::poly::{inv_mod, mulmod, ModPoly};
use crate::semilinear::u_op;

/// Default cap on the number of closure elements kept.
pub const DEFAULT_MAX_ELEMENTS: usize = 4096;

fn derivative(f: &ModPoly, i: usize) -> ModPoly {
    let terms = f.terms().filter(|(m, _)| m.exps()[i] > 0).map(|(m, c)| {
        let mut exps = m.exps().to_vec();
        let k = exps[i] as u64;
        exps[i] -= 1;
        (Monomial::new(exps), mulmod(c, k % f.modulus(), f.modulus()))
    });
    ModPoly::from_terms(f.cfg(), f.prec(), terms)
}

/// Scales so the leading coefficient is 1 (mod p).
fn monic(a: &ModPoly) -> ModPoly {
    match a.leading_term() {
        Some((_, c)) => a.scale(inv_mod(c, a.p())),
        None => a.clone(),
    }
}

/// Graded-lex comparison of the term lists, largest terms first.
fn cmp_elements(a: &ModPoly, b: &ModPoly) -> Ordering {
    a.terms().rev().cmp(b.terms().rev())
}

/// Nonzero partial derivatives mod p together with their pairwise products.
pub fn jacobian_seed(f: &ModPoly) -> Result<Vec<ModPoly>> {
    let f1 = f.reduce_precision(1)?;
    let partials: Vec<ModPoly> = (0..f.nvars())
        .map(|i| derivative(&f1, i))
        .filter(|d| !d.is_zero())
        .collect();
    let mut out = partials.clone();
    for i in 0..partials.len() {
        for j in i + 1..partials.len() {
            out.push(partials[i].try_mul(&partials[j])?);
        }
    }
    let mut seen = HashSet::new();
    out.retain(|a| seen.insert(monic(a)));
    Ok(out)
}

/// `u(a f^(p-1))` mod p.
pub fn cartier_step(a: &ModPoly, f: &ModPoly) -> Result<ModPoly> {
    let fp = f.reduce_precision(1)?.pow(f.p() - 1)?;
    let a1 = a.reduce_precision(1)?;
    Ok(u_op(&a1.try_mul(&fp)?))
}

/// Closes `seeds` under `s -> u(m s f^(p-1))` for monomials `m` of degree
/// at most `p k`, for up to `max_steps` rounds or until nothing new appears.
///
/// Elements are kept monic and returned smallest first; the search stops
/// adding once `max_elements` are known.
pub fn tau_closure(seeds: &[ModPoly], f: &ModPoly, max_steps: u32, max_elements: usize) -> Result<Vec<ModPoly>> {
    let fp = f.reduce_precision(1)?.pow(f.p() - 1)?;
    let multipliers = monomials_up_to(f.nvars(), f.p() as u32 * f.nvars() as u32);
    let mut known: HashSet<ModPoly> = HashSet::new();
    let mut frontier = Vec::new();
    for s in seeds {
        let s = monic(&s.reduce_precision(1)?);
        if !s.is_zero() && known.insert(s.clone()) {
            frontier.push(s);
        }
    }
    for _ in 0..max_steps {
        if frontier.is_empty() || known.len() >= max_elements {
            break;
        }
        frontier.sort_by(cmp_elements);
        let images = par::map(&frontier, |s| -> Result<Vec<ModPoly>> {
            let sf = s.try_mul(&fp)?;
            multipliers
                .iter()
                .map(|m| Ok(monic(&u_op(&sf.mul_monomial(m)?))))
                .filter(|r| r.as_ref().map_or(true, |a| !a.is_zero()))
                .collect()
        });
        let mut next = Vec::new();
        for batch in images {
            for a in batch? {
                if known.len() >= max_elements {
                    break;
                }
                if known.insert(a.clone()) {
                    next.push(a);
                }
            }
        }
        frontier = next;
    }
    let mut out: Vec<ModPoly> = known.into_iter().collect();
    out.sort_by(cmp_elements);
    Ok(out)
}

/// How a proposed `c` relates to a test element `t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TestElementCheck {
    /// `c in (t^4) + (f)` mod p, found on a degree slice (so `true` is exact).
    pub in_t4: bool,
    /// `c` is nonzero in `R/fR` mod p (exact: principal-ideal membership is
    /// decided by the slice at `deg(c)`).
    pub nonzero_mod_f: bool,
}

impl TestElementCheck {
    pub fn holds(&self) -> bool {
        self.in_t4 && self.nonzero_mod_f
    }
}

pub fn check_test_element(c: &ModPoly, t: &ModPoly, f: &ModPoly) -> Result<TestElementCheck> {
    let c1 = c.reduce_precision(1)?;
    let f1 = f.reduce_precision(1)?;
    let Some(deg) = c1.degree() else {
        return Ok(TestElementCheck { in_t4: true, nonzero_mod_f: false });
    };
    let deg = deg as u32;
    let cfg = f.cfg();
    let nonzero_mod_f = !ideal_slice(cfg, std::slice::from_ref(&f1), deg)?.member(&c1)?;
    let t4 = t.reduce_precision(1)?.pow(4)?;
    let in_t4 = ideal_slice(cfg, &[t4, f1], deg)?.member(&c1)?;
    Ok(TestElementCheck { in_t4, nonzero_mod_f })
}

/// The smallest closure element `t` for which `c` passes [`check_test_element`].
pub fn find_test_element(c: &ModPoly, closure: &[ModPoly], f: &ModPoly) -> Result<Option<ModPoly>> {
    for t in closure {
        if check_test_element(c, t, f)?.holds() {
            return Ok(Some(t.clone()));
        }
    }
    Ok(None)
}
