use std::cmp::Ordering;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Exponent vector of a monomial, ordered graded-lexicographically:
/// total degree first, then lexicographic with the first variable largest.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        Monomial(exps)
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn checked_mul(&self, other: &Monomial) -> Result<Monomial> {
        debug_assert_eq!(self.0.len(), other.0.len());
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| {
                a.checked_add(*b)
                    .ok_or_else(|| Error::ExponentOverflow(format!("{a} + {b}")))
            })
            .collect::<Result<Vec<_>>>()
            .map(Monomial)
    }

    pub fn checked_scale(&self, m: u64) -> Result<Monomial> {
        self.0
            .iter()
            .map(|&a| {
                u32::try_from(a as u64 * m)
                    .map_err(|_| Error::ExponentOverflow(format!("{a} * {m}")))
            })
            .collect::<Result<Vec<_>>>()
            .map(Monomial)
    }

    /// Writes `e = p*q + r` componentwise with `0 <= r < p`.
    pub fn digit_split(&self, p: u64) -> (Monomial, Monomial) {
        let p = p as u32;
        let q = self.0.iter().map(|&e| e / p).collect();
        let r = self.0.iter().map(|&e| e % p).collect();
        (Monomial(q), Monomial(r))
    }

    /// True iff `self` divides `other`.
    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// Lies in `m^[p] = (x_1^p, ..., x_k^p)`.
    pub fn in_frobenius_power(&self, p: u64) -> bool {
        self.0.iter().any(|&e| e as u64 >= p)
    }

    /// Renders with variable names, `1` for the unit monomial.
    pub fn display<'a>(&'a self, vars: &'a [String]) -> MonomialDisplay<'a> {
        MonomialDisplay { m: self, vars }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Serialize for Monomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

pub struct MonomialDisplay<'a> {
    m: &'a Monomial,
    vars: &'a [String],
}

impl fmt::Display for MonomialDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, v) in self.m.0.iter().zip(self.vars) {
            if *e == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        if first {
            f.write_str("1")?;
        }
        Ok(())
    }
}

/// All monomials in `nvars` variables of total degree `<= max_degree`,
/// in ascending graded-lex order.
pub fn monomials_up_to(nvars: usize, max_degree: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    for d in 0..=max_degree {
        let mut of_degree = Vec::new();
        let mut cur = vec![0u32; nvars];
        fill_degree(&mut cur, 0, d, &mut of_degree);
        of_degree.sort();
        out.extend(of_degree);
    }
    out
}

fn fill_degree(cur: &mut Vec<u32>, i: usize, remaining: u32, out: &mut Vec<Monomial>) {
    let n = cur.len();
    if n == 0 {
        if remaining == 0 {
            out.push(Monomial(Vec::new()));
        }
        return;
    }
    if i == n - 1 {
        cur[i] = remaining;
        out.push(Monomial(cur.clone()));
        return;
    }
    for e in 0..=remaining {
        cur[i] = e;
        fill_degree(cur, i + 1, remaining - e, out);
    }
    cur[i] = 0;
}
