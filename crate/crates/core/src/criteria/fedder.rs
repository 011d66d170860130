use crate::error::{Error, Result};
use crate::poly::ModPoly;
use crate::verdict::{Certificate, Soundness, Verdict, VerdictKind};

/// Rejects `f` unless some coefficient is a unit mod p, which makes `f` a
/// non-zero-divisor of `A/p^n` in the polynomial model.
pub fn check_nonzerodivisor(f: &ModPoly) -> Result<()> {
    let p = f.p();
    if f.terms().any(|(_, c)| c % p != 0) {
        Ok(())
    } else {
        Err(Error::Precondition(
            "f must have a coefficient that is a unit mod p (f = 0 mod p is not supported)".into(),
        ))
    }
}

/// Fedder's criterion: `R/fR` is F-pure iff `f^(p-1)` is not in `(m^[p], p)`.
pub fn fedder_fpure(f: &ModPoly) -> Result<Verdict> {
    check_nonzerodivisor(f)?;
    let reduced = f.reduce_precision(1)?;
    let power = reduced.pow(f.p() - 1)?;
    let escape = power.escape_mp_plus_ps(1)?;
    let kind = if escape.is_some() { VerdictKind::FPure } else { VerdictKind::NotFPure };
    let certificate = Certificate { n: Some(1), e: Some(1), escape, ..Default::default() };
    Ok(Verdict::with(kind, Soundness::Exact, certificate))
}
