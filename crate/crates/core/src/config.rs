use std::sync::Arc;

use crate::error::{Error, Result};

/// Variables, characteristic and working precision of a polynomial ring
/// `Z/p^W[x_1, ..., x_k]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RingConfig {
    vars: Vec<String>,
    p: u64,
    w: u32,
}

pub(crate) fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl RingConfig {
    pub fn new<S: AsRef<str>>(vars: &[S], p: u64, w: u32) -> Result<Arc<Self>> {
        if !is_prime(p) {
            return Err(Error::InvalidConfig(format!("{p} is not prime")));
        }
        if w == 0 {
            return Err(Error::InvalidConfig("working precision must be >= 1".into()));
        }
        // p^W must fit in 63 bits
        let mut m: u64 = 1;
        for _ in 0..w {
            m = m
                .checked_mul(p)
                .filter(|m| *m < (1u64 << 63))
                .ok_or_else(|| Error::InvalidConfig(format!("{p}^{w} does not fit in 63 bits")))?;
        }
        let mut names: Vec<String> = Vec::with_capacity(vars.len());
        for v in vars {
            let v = v.as_ref().trim();
            let mut chars = v.chars();
            match chars.next() {
                Some(c) if c.is_ascii_alphabetic() => {}
                _ => {
                    return Err(Error::InvalidConfig(format!(
                        "variable name `{v}` must start with a letter"
                    )))
                }
            }
            if !chars.all(|c| c.is_ascii_alphanumeric() || c == '_') {
                return Err(Error::InvalidConfig(format!("invalid variable name `{v}`")));
            }
            if names.iter().any(|n| n == v) {
                return Err(Error::InvalidConfig(format!("duplicate variable `{v}`")));
            }
            names.push(v.to_string());
        }
        Ok(Arc::new(RingConfig { vars: names, p, w }))
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Working precision: coefficients live in `Z/p^W`.
    pub fn precision(&self) -> u32 {
        self.w
    }

    /// `p^prec`; `prec` is at most the working precision so this never overflows.
    pub fn modulus(&self, prec: u32) -> u64 {
        self.p.pow(prec)
    }

    /// Same variables and prime, different working precision.
    pub fn with_precision(&self, w: u32) -> Result<Arc<Self>> {
        RingConfig::new(&self.vars, self.p, w)
    }

    pub(crate) fn compatible(&self, other: &RingConfig) -> bool {
        self.p == other.p && self.vars == other.vars
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }
}
