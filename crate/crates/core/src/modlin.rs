//! Linear algebra over `Z/p^W` on degree-truncated coefficient spaces.
//!
//! `Z/p^W` has zero divisors, so spans are kept in Howell normal form: rows
//! in echelon form over the graded-lex-descending column order, each pivot
//! normalized to a power `p^v`, entries above a pivot reduced into `[0, p^v)`,
//! and closed under the annihilator multiples `p^(W-v) * row`. With that
//! closure, leading-term reduction decides membership exactly.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use serde::Serialize;

use crate::config::RingConfig;
use crate::error::{Error, Result};
use crate::monomial::{monomials_up_to, Monomial};
use crate::par;
use crate::poly::{inv_mod, mulmod, negmod, valuation, ModPoly};
use crate::semilinear::u_op;

/// Sorted `(column, coefficient)` pairs, all coefficients nonzero.
type SparseRow = Vec<(u32, u64)>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Provenance {
    /// Truncation of an ideal: monomial multiples of generators up to the degree bound.
    IdealSlice,
    /// A sub-span with no ideal structure of its own.
    ModuleSlice,
}

/// A `Z/p^prec`-submodule of the polynomials of degree `<= degree_bound`.
#[derive(Debug, Clone)]
pub struct SpanBasis {
    cfg: Arc<RingConfig>,
    degree_bound: u32,
    prec: u32,
    /// Column `i` is the monomial `columns[i]`; columns descend in graded-lex order.
    columns: Vec<Monomial>,
    col_index: HashMap<Monomial, u32>,
    /// Howell rows, pivot columns strictly increasing.
    rows: Vec<SparseRow>,
    /// pivot column -> (row index, pivot valuation)
    pivots: HashMap<u32, (usize, u32)>,
    provenance: Provenance,
}

/// `a - k * b` over `Z/m`.
fn sub_scaled(a: &[(u32, u64)], k: u64, b: &[(u32, u64)], m: u64) -> SparseRow {
    let k = k % m;
    if k == 0 {
        return a.to_vec();
    }
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j == b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i == a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i]);
            i += 1;
        } else if take_b {
            let v = negmod(mulmod(k, b[j].1, m), m);
            if v != 0 {
                out.push((b[j].0, v));
            }
            j += 1;
        } else {
            let v = (a[i].1 + negmod(mulmod(k, b[j].1, m), m)) % m;
            if v != 0 {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

fn scale_row(a: &[(u32, u64)], k: u64, m: u64) -> SparseRow {
    a.iter()
        .filter_map(|&(c, x)| {
            let v = mulmod(x, k, m);
            (v != 0).then_some((c, v))
        })
        .collect()
}

fn entry(row: &[(u32, u64)], col: u32) -> u64 {
    row.binary_search_by_key(&col, |e| e.0).map(|i| row[i].1).unwrap_or(0)
}

/// Incremental Howell echelonization keyed by pivot column.
struct HowellBuilder {
    p: u64,
    prec: u32,
    m: u64,
    pivots: BTreeMap<u32, SparseRow>,
}

impl HowellBuilder {
    fn new(p: u64, prec: u32) -> Self {
        HowellBuilder { p, prec, m: p.pow(prec), pivots: BTreeMap::new() }
    }

    fn normalize(&self, v: &mut SparseRow) -> u32 {
        let x = v[0].1;
        let val = valuation(x, self.p, self.prec);
        let unit = x / self.p.pow(val);
        let inv = inv_mod(unit, self.m);
        for e in v.iter_mut() {
            e.1 = mulmod(e.1, inv, self.m);
        }
        val
    }

    fn insert(&mut self, v: SparseRow) {
        let mut work = vec![v];
        while let Some(mut v) = work.pop() {
            while let Some(&(c, x)) = v.first() {
                let val = valuation(x, self.p, self.prec);
                match self.pivots.get_mut(&c) {
                    None => {
                        let val = self.normalize(&mut v);
                        if val > 0 {
                            let ann = scale_row(&v, self.p.pow(self.prec - val), self.m);
                            if !ann.is_empty() {
                                work.push(ann);
                            }
                        }
                        self.pivots.insert(c, v);
                        break;
                    }
                    Some(row) => {
                        let pv = valuation(row[0].1, self.p, self.prec);
                        if val >= pv {
                            let k = x / self.p.pow(pv);
                            v = sub_scaled(&v, k, row, self.m);
                        } else {
                            // the new vector has the smaller valuation: it becomes the pivot
                            let p = self.p;
                            let (prec, m) = (self.prec, self.m);
                            let x = v[0].1;
                            let inv = inv_mod(x / p.pow(val), m);
                            for e in v.iter_mut() {
                                e.1 = mulmod(e.1, inv, m);
                            }
                            if val > 0 {
                                let ann = scale_row(&v, p.pow(prec - val), m);
                                if !ann.is_empty() {
                                    work.push(ann);
                                }
                            }
                            std::mem::swap(row, &mut v);
                        }
                    }
                }
            }
        }
    }

    /// Reduces entries above each pivot into `[0, p^v)`.
    fn finish(self) -> (Vec<SparseRow>, HashMap<u32, (usize, u32)>) {
        let (p, prec, m) = (self.p, self.prec, self.m);
        let mut rows: Vec<SparseRow> = self.pivots.into_values().collect();
        for j in 0..rows.len() {
            let (above, rest) = rows.split_at_mut(j);
            let pivot_row = &rest[0];
            let (col, lead) = pivot_row[0];
            let pivot = p.pow(valuation(lead, p, prec));
            par::for_each_mut(above, |row| {
                let x = entry(row, col);
                if x >= pivot {
                    *row = sub_scaled(row, x / pivot, pivot_row, m);
                }
            });
        }
        let pivots = rows
            .iter()
            .enumerate()
            .map(|(i, r)| (r[0].0, (i, valuation(r[0].1, p, prec))))
            .collect();
        (rows, pivots)
    }
}

impl SpanBasis {
    fn build(
        cfg: &Arc<RingConfig>,
        polys: &[ModPoly],
        degree_bound: u32,
        prec: u32,
        provenance: Provenance,
    ) -> Result<SpanBasis> {
        let mut support: BTreeSet<&Monomial> = BTreeSet::new();
        for g in polys {
            if g.cfg().vars() != cfg.vars() || g.p() != cfg.p() {
                return Err(Error::VariableMismatch);
            }
            if let Some(d) = g.degree() {
                if d > degree_bound as u64 {
                    return Err(Error::DegreeExceedsBound { degree: d as u32, bound: degree_bound });
                }
            }
            support.extend(g.terms().map(|(mono, _)| mono));
        }
        let columns: Vec<Monomial> = support.into_iter().rev().cloned().collect();
        let col_index: HashMap<Monomial, u32> =
            columns.iter().enumerate().map(|(i, mono)| (mono.clone(), i as u32)).collect();
        let m = cfg.modulus(prec);
        let mut builder = HowellBuilder::new(cfg.p(), prec);
        for g in polys {
            let mut row: SparseRow = g
                .terms()
                .filter_map(|(mono, c)| {
                    let c = c % m;
                    (c != 0).then(|| (col_index[mono], c))
                })
                .collect();
            row.sort_unstable_by_key(|e| e.0);
            if !row.is_empty() {
                builder.insert(row);
            }
        }
        let (rows, pivots) = builder.finish();
        Ok(SpanBasis {
            cfg: cfg.clone(),
            degree_bound,
            prec,
            columns,
            col_index,
            rows,
            pivots,
            provenance,
        })
    }

    pub fn cfg(&self) -> &Arc<RingConfig> {
        &self.cfg
    }

    pub fn degree_bound(&self) -> u32 {
        self.degree_bound
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    fn row_to_poly(&self, row: &[(u32, u64)]) -> ModPoly {
        ModPoly::from_terms(
            &self.cfg,
            self.prec,
            row.iter().map(|&(c, x)| (self.columns[c as usize].clone(), x)),
        )
    }

    /// The Howell rows, leading monomials strictly descending.
    pub fn rows(&self) -> Vec<ModPoly> {
        self.rows.iter().map(|r| self.row_to_poly(r)).collect()
    }

    /// Exact membership of `g` in the span.
    pub fn member(&self, g: &ModPoly) -> Result<bool> {
        if let Some(d) = g.degree() {
            if d > self.degree_bound as u64 {
                return Err(Error::DegreeExceedsBound { degree: d as u32, bound: self.degree_bound });
            }
        }
        if g.prec() < self.prec {
            return Err(Error::InsufficientPrecision { needed: self.prec, have: g.prec() });
        }
        let g = g.reduce_precision(self.prec)?;
        let mut v: SparseRow = Vec::with_capacity(g.num_terms());
        for (mono, c) in g.terms() {
            match self.col_index.get(mono) {
                Some(&col) => v.push((col, c)),
                None => return Ok(false),
            }
        }
        v.sort_unstable_by_key(|e| e.0);
        let (p, m) = (self.cfg.p(), self.cfg.modulus(self.prec));
        while let Some(&(c, x)) = v.first() {
            let Some(&(ri, pv)) = self.pivots.get(&c) else {
                return Ok(false);
            };
            let pivot = p.pow(pv);
            if x % pivot != 0 {
                return Ok(false);
            }
            v = sub_scaled(&v, x / pivot, &self.rows[ri], m);
        }
        Ok(true)
    }

    /// Every row of `other` lies in `self`.
    pub fn contains_span(&self, other: &SpanBasis) -> Result<bool> {
        for g in other.rows() {
            let g = if g.prec() > self.prec { g.reduce_precision(self.prec)? } else { g };
            if !self.member(&g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Canonical basis of the image of the span in `A / (m^[p], p)`,
    /// i.e. mod p with every monomial having some exponent `>= p` dropped.
    pub fn projection_mod_mp_p(&self) -> Result<SpanBasis> {
        let p = self.cfg.p();
        let projected: Vec<ModPoly> = self
            .rows()
            .iter()
            .map(|g| {
                let g = g.reduce_precision(1)?;
                Ok(ModPoly::from_terms(
                    &self.cfg,
                    1,
                    g.terms()
                        .filter(|(mono, _)| !mono.in_frobenius_power(p))
                        .map(|(mono, c)| (mono.clone(), c)),
                ))
            })
            .collect::<Result<_>>()?;
        SpanBasis::build(&self.cfg, &projected, self.degree_bound, 1, Provenance::ModuleSlice)
    }
}

impl PartialEq for SpanBasis {
    fn eq(&self, other: &Self) -> bool {
        self.prec == other.prec && self.cfg.vars() == other.cfg.vars() && self.rows() == other.rows()
    }
}

/// Howell normal form of the `Z/p^W`-span of `rows` (all of degree `<= degree_bound`).
pub fn howell_reduce(cfg: &Arc<RingConfig>, rows: &[ModPoly], degree_bound: u32) -> Result<SpanBasis> {
    let prec = rows.iter().map(ModPoly::prec).min().unwrap_or(cfg.precision());
    SpanBasis::build(cfg, rows, degree_bound, prec, Provenance::ModuleSlice)
}

/// The span of `{m * g : g a generator, m a monomial, deg(m * g) <= degree_bound}`.
///
/// This is contained in the degree-`<= D` part of the ideal; elements that
/// need higher-degree cancellation are not generated.
pub fn ideal_slice(cfg: &Arc<RingConfig>, generators: &[ModPoly], degree_bound: u32) -> Result<SpanBasis> {
    let prec = generators.iter().map(ModPoly::prec).min().unwrap_or(cfg.precision());
    let gens: Vec<&ModPoly> = generators
        .iter()
        .filter(|g| g.degree().is_some_and(|d| d <= degree_bound as u64))
        .collect();
    let mut cache: HashMap<u32, Vec<Monomial>> = HashMap::new();
    for g in &gens {
        let room = degree_bound - g.degree().unwrap() as u32;
        cache.entry(room).or_insert_with(|| monomials_up_to(cfg.nvars(), room));
    }
    let products = par::map(&gens, |g| -> Result<Vec<ModPoly>> {
        let room = degree_bound - g.degree().unwrap() as u32;
        let g = g.reduce_precision(prec)?;
        cache[&room].iter().map(|mono| g.mul_monomial(mono)).collect()
    });
    let mut rows = Vec::new();
    for part in products {
        rows.extend(part?);
    }
    SpanBasis::build(cfg, &rows, degree_bound, prec, Provenance::IdealSlice)
}

/// `{v in span(b) : u(v) = 0 mod p}`.
///
/// Only the coefficients of `v` on monomials with every exponent `= p-1 mod p`
/// feed into `u(v) mod p`, so this is a linear condition mod p. Gaussian
/// elimination mod p on those coefficients (applied to full rows over
/// `Z/p^W`) splits the basis into rows already in the kernel and pivot rows;
/// the kernel is spanned by the former together with `p` times the latter.
pub fn kernel_under_u_mod_p(b: &SpanBasis) -> Result<SpanBasis> {
    if b.prec < 2 {
        return Err(Error::InsufficientPrecision { needed: 2, have: b.prec });
    }
    let p = b.cfg.p();
    let m = b.cfg.modulus(b.prec);
    let constrained: Vec<bool> = b
        .columns
        .iter()
        .map(|mono| mono.exps().iter().all(|&e| e as u64 % p == p - 1))
        .collect();
    let first_live = |v: &SparseRow| v.iter().find(|&&(c, x)| constrained[c as usize] && x % p != 0).copied();

    let mut echelon: HashMap<u32, SparseRow> = HashMap::new();
    let mut kernel: Vec<SparseRow> = Vec::new();
    let mut order: Vec<u32> = Vec::new();
    for row in &b.rows {
        let mut v = row.clone();
        loop {
            match first_live(&v) {
                None => {
                    if !v.is_empty() {
                        kernel.push(v);
                    }
                    break;
                }
                Some((c, x)) => match echelon.get(&c) {
                    Some(piv) => {
                        let lead = entry(piv, c) % p;
                        let k = mulmod(x % p, inv_mod(lead, p), p);
                        v = sub_scaled(&v, k, piv, m);
                    }
                    None => {
                        echelon.insert(c, v);
                        order.push(c);
                        break;
                    }
                },
            }
        }
    }
    for c in order {
        let scaled = scale_row(&echelon[&c], p, m);
        if !scaled.is_empty() {
            kernel.push(scaled);
        }
    }
    let polys: Vec<ModPoly> = kernel.iter().map(|r| b.row_to_poly(r)).collect();
    debug_assert!(polys.iter().all(|g| u_op(g).in_pr_ideal(1).unwrap_or(false)));
    SpanBasis::build(&b.cfg, &polys, b.degree_bound, b.prec, Provenance::ModuleSlice)
}

/// Some element of the span outside `(m^[p], p)`, if one exists.
pub fn escapes_mp_p(b: &SpanBasis) -> Option<ModPoly> {
    let p = b.cfg.p();
    b.rows.iter().find_map(|row| {
        let escapes = row
            .iter()
            .any(|&(c, x)| x % p != 0 && !b.columns[c as usize].in_frobenius_power(p));
        escapes.then(|| b.row_to_poly(row))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;

    fn ring(vars: &[&str], p: u64, w: u32) -> Arc<RingConfig> {
        RingConfig::new(vars, p, w).unwrap()
    }

    fn polys(cfg: &Arc<RingConfig>, src: &[&str]) -> Vec<ModPoly> {
        src.iter().map(|s| parse_poly(s, cfg).unwrap()).collect()
    }

    #[test]
    fn howell_absorbs_multiples() {
        let cfg = ring(&["x", "y"], 2, 2);
        let b = howell_reduce(&cfg, &polys(&cfg, &["2*x", "x"]), 1).unwrap();
        assert_eq!(b.rows(), polys(&cfg, &["x"]));
    }

    #[test]
    fn howell_single_zero_divisor_row() {
        let cfg = ring(&["x", "y"], 2, 2);
        let b = howell_reduce(&cfg, &polys(&cfg, &["2*x"]), 1).unwrap();
        assert_eq!(b.rows(), polys(&cfg, &["2*x"]));
        assert!(!b.member(&parse_poly("x", &cfg).unwrap()).unwrap());
        assert!(b.member(&parse_poly("2*x", &cfg).unwrap()).unwrap());
    }

    #[test]
    fn howell_completion_row() {
        // span{x + 2y, 2x} over Z/4: 2x = 2(x + 2y), so one row suffices
        let cfg = ring(&["x", "y"], 2, 2);
        let b = howell_reduce(&cfg, &polys(&cfg, &["x+2*y", "2*x"]), 1).unwrap();
        assert_eq!(b.rows(), polys(&cfg, &["x+2*y"]));
        assert!(!b.member(&parse_poly("2*y", &cfg).unwrap()).unwrap());
        // span{2x + y}: 2(2x + y) = 2y must appear as its own row
        let c = howell_reduce(&cfg, &polys(&cfg, &["2*x+y"]), 1).unwrap();
        assert_eq!(c.rows(), polys(&cfg, &["2*x+y", "2*y"]));
        assert!(c.member(&parse_poly("2*y", &cfg).unwrap()).unwrap());
        assert!(!c.member(&parse_poly("y", &cfg).unwrap()).unwrap());
    }

    #[test]
    fn ideal_slice_of_variable() {
        let cfg = ring(&["x", "y"], 2, 2);
        let b = ideal_slice(&cfg, &polys(&cfg, &["x"]), 2).unwrap();
        assert_eq!(b.len(), 3);
        assert!(b.member(&parse_poly("x*y", &cfg).unwrap()).unwrap());
        assert!(!b.member(&parse_poly("y", &cfg).unwrap()).unwrap());
        assert!(b.member(&parse_poly("y^3", &cfg).unwrap()).is_err());
        let c = ideal_slice(&ring(&["x", "y"], 2, 1), &polys(&ring(&["x", "y"], 2, 1), &["x^2+y^2"]), 2).unwrap();
        assert_eq!(c.len(), 1);
    }

    #[test]
    fn kernel_examples() {
        let cfg = ring(&["x", "y", "z"], 2, 2);
        let b = howell_reduce(&cfg, &polys(&cfg, &["x", "x*y*z"]), 3).unwrap();
        let k = kernel_under_u_mod_p(&b).unwrap();
        assert!(k.member(&parse_poly("x", &cfg).unwrap()).unwrap());
        assert!(!k.member(&parse_poly("x*y*z", &cfg).unwrap()).unwrap());
        assert!(k.member(&parse_poly("2*x*y*z", &cfg).unwrap()).unwrap());
        assert_eq!(k.provenance(), Provenance::ModuleSlice);

        let b = howell_reduce(&cfg, &polys(&cfg, &["2*x*y*z"]), 3).unwrap();
        assert_eq!(kernel_under_u_mod_p(&b).unwrap(), b);

        let low = howell_reduce(&ring(&["x"], 2, 1), &[], 1).unwrap();
        assert!(kernel_under_u_mod_p(&low).is_err());
    }

    #[test]
    fn escape_examples() {
        let cfg = ring(&["x", "y"], 2, 2);
        let b = howell_reduce(&cfg, &polys(&cfg, &["x^2+y"]), 2).unwrap();
        assert_eq!(escapes_mp_p(&b), Some(parse_poly("x^2+y", &cfg).unwrap()));
        let b = howell_reduce(&cfg, &polys(&cfg, &["x^2", "2*y"]), 2).unwrap();
        assert_eq!(escapes_mp_p(&b), None);
        for p in [2u64, 3, 5] {
            let cfg = ring(&["x", "y"], p, 2);
            let f = parse_poly("x*y", &cfg).unwrap().pow(p - 1).unwrap();
            let d = 2 * (p as u32 - 1) + 2;
            let w = escapes_mp_p(&ideal_slice(&cfg, &[f], d).unwrap()).unwrap();
            assert!(!w.in_mp_plus_ps(1).unwrap());
        }
    }
}
