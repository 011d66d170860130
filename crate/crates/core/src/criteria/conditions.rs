//! The three conditions on an element `g in A/p^n`.
//!
//! * D1: `u^(e+r-1)(g) in (p^r)` for `1 <= r <= n-1`;
//! * D2: `g = g_0 + p g_1 + ... + p^(n-1) g_(n-1)` with
//!   `u^r(g_r) in (f^(p^(e+n-r-1) - 1))`;
//! * D3: `u^(e+n-2)(g)` is not in `(m^[p], p^n)`.
//!
//! Any `g` in the principal ideal `(f^(p^(e+n-1) - 1))` satisfies D2 with
//! `g_0 = g`, so the sufficient criteria only test D1 and D3.

use crate::error::{Error, Result};
use crate::modlin::ideal_slice;
use crate::poly::{Escape, ModPoly};
use crate::semilinear::u_iter;
use crate::verdict::IndexConvention;

fn require_prec(g: &ModPoly, n: u32) -> Result<()> {
    if g.prec() < n {
        return Err(Error::InsufficientPrecision { needed: n, have: g.prec() });
    }
    Ok(())
}

fn require_levels(e: u32, n: u32) -> Result<()> {
    if e == 0 || n == 0 {
        return Err(Error::Precondition("e and n must be at least 1".into()));
    }
    Ok(())
}

/// D1 at the given index convention; vacuous for `n = 1`.
pub fn check_d1_with(g: &ModPoly, e: u32, n: u32, conv: IndexConvention) -> Result<bool> {
    require_levels(e, n)?;
    require_prec(g, n)?;
    for r in 1..n {
        if !u_iter(g, e + r - 1 + conv.offset()).in_pr_ideal(r)? {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn check_d1(g: &ModPoly, e: u32, n: u32) -> Result<bool> {
    check_d1_with(g, e, n, IndexConvention::Standard)
}

/// Outcome of D3 at one power of `u`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct D3Check {
    pub u_power: u32,
    /// Largest escaping term; `Some` exactly when D3 holds.
    pub escape: Option<Escape>,
}

impl D3Check {
    pub fn holds(&self) -> bool {
        self.escape.is_some()
    }
}

/// D3 at both index conventions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct D3Report {
    pub standard: D3Check,
    pub shifted: D3Check,
}

pub fn check_d3_with(g: &ModPoly, e: u32, n: u32, conv: IndexConvention) -> Result<D3Check> {
    require_levels(e, n)?;
    require_prec(g, n)?;
    let u_power = e + n - 2 + conv.offset();
    let escape = u_iter(g, u_power).escape_mp_plus_ps(n)?;
    Ok(D3Check { u_power, escape })
}

pub fn check_d3(g: &ModPoly, e: u32, n: u32) -> Result<D3Report> {
    Ok(D3Report {
        standard: check_d3_with(g, e, n, IndexConvention::Standard)?,
        shifted: check_d3_with(g, e, n, IndexConvention::Shifted)?,
    })
}

/// A successful D1 + D3 evaluation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certification {
    pub convention: IndexConvention,
    pub d3: D3Check,
    pub shifted_also_holds: bool,
}

/// Checks D1 and D3 at the standard indices. The shifted indices are
/// evaluated as well and reported, but never certify on their own: at
/// `e = n = 1` they would accept rings that fail Fedder's criterion.
pub fn certify(g: &ModPoly, e: u32, n: u32) -> Result<Option<Certification>> {
    if !check_d1(g, e, n)? {
        return Ok(None);
    }
    let d3 = check_d3_with(g, e, n, IndexConvention::Standard)?;
    if !d3.holds() {
        return Ok(None);
    }
    let shifted_also_holds = check_d1_with(g, e, n, IndexConvention::Shifted)?
        && check_d3_with(g, e, n, IndexConvention::Shifted)?.holds();
    Ok(Some(Certification { convention: IndexConvention::Standard, d3, shifted_also_holds }))
}

/// Checks the D2 membership conditions for a given decomposition.
///
/// Membership in the principal ideal is tested on a degree slice, so `true`
/// is a certificate while `false` only means no quotient was found up to the
/// slice degree.
pub fn verify_d2_decomposition(parts: &[ModPoly], f: &ModPoly, e: u32, n: u32) -> Result<bool> {
    require_levels(e, n)?;
    if parts.len() != n as usize {
        return Err(Error::Precondition(format!("expected {n} parts, got {}", parts.len())));
    }
    let p = f.p();
    for (r, g_r) in parts.iter().enumerate() {
        let image = u_iter(g_r, r as u32);
        let Some(deg) = image.degree() else { continue };
        let exp = p
            .checked_pow(e + n - r as u32 - 1)
            .ok_or_else(|| Error::ExponentOverflow("D2 exponent".into()))?
            - 1;
        let target = f.pow(exp)?;
        let Some(tdeg) = target.degree() else { return Ok(false) };
        if tdeg > deg {
            return Ok(false);
        }
        let prec = image.prec().min(target.prec());
        let slice = ideal_slice(target.cfg(), &[target.reduce_precision(prec)?], deg as u32)?;
        if !slice.member(&image.reduce_precision(prec)?)? {
            return Ok(false);
        }
    }
    Ok(true)
}
