//! Independent reference implementations used as test oracles.
//!
//! Nothing here calls into the library's arithmetic: polynomials are plain
//! hash maps with `i128` or mod-p coefficients and linear algebra is dense.
#![allow(dead_code)]

use std::collections::HashMap;
use std::sync::Arc;

use qfsplit::{Monomial, ModPoly, RingConfig};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub type Exps = Vec<u32>;
pub type IntPoly = HashMap<Exps, i128>;

pub fn int_mul(a: &IntPoly, b: &IntPoly) -> IntPoly {
    let mut out = IntPoly::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: Exps = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            *out.entry(e).or_insert(0) += ca.checked_mul(*cb).expect("oracle overflow");
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

pub fn int_pow(a: &IntPoly, k: u32, nvars: usize) -> IntPoly {
    let mut acc: IntPoly = [(vec![0; nvars], 1)].into_iter().collect();
    for _ in 0..k {
        acc = int_mul(&acc, a);
    }
    acc
}

/// `(phi(a) - a^p) / p` over the integers.
pub fn int_delta1(a: &IntPoly, p: u64, nvars: usize) -> IntPoly {
    let mut out: IntPoly = a.iter().map(|(e, c)| (e.iter().map(|x| x * p as u32).collect(), *c)).collect();
    for (e, c) in int_pow(a, p as u32, nvars) {
        *out.entry(e).or_insert(0) -= c;
    }
    out.retain(|_, c| *c != 0);
    out.into_iter()
        .map(|(e, c)| {
            assert_eq!(c % p as i128, 0, "phi(a) - a^p must be divisible by p");
            (e, c / p as i128)
        })
        .collect()
}

pub fn to_int(f: &ModPoly) -> IntPoly {
    f.terms().map(|(m, c)| (m.exps().to_vec(), c as i128)).collect()
}

/// All exponent vectors of total degree `<= d`, in no particular order.
pub fn monomials(nvars: usize, d: u32) -> Vec<Exps> {
    fn rec(i: usize, nvars: usize, left: u32, cur: &mut Exps, out: &mut Vec<Exps>) {
        if i == nvars {
            out.push(cur.clone());
            return;
        }
        for e in 0..=left {
            cur.push(e);
            rec(i + 1, nvars, left - e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, nvars, d, &mut Vec::new(), &mut out);
    out
}

/// Dense F_p vectors over a fixed monomial basis.
pub struct FpSpace {
    pub p: u64,
    pub nvars: usize,
    pub degree: u32,
    pub cols: Vec<Exps>,
    pub index: HashMap<Exps, usize>,
}

impl FpSpace {
    pub fn new(p: u64, nvars: usize, degree: u32) -> Self {
        let cols = monomials(nvars, degree);
        let index = cols.iter().enumerate().map(|(i, e)| (e.clone(), i)).collect();
        FpSpace { p, nvars, degree, cols, index }
    }

    fn reduce(&self, c: i128) -> u64 {
        c.rem_euclid(self.p as i128) as u64
    }

    /// `m * g` as a dense vector, or `None` if it leaves the degree bound.
    pub fn shifted(&self, g: &IntPoly, m: &Exps) -> Option<Vec<u64>> {
        let mut v = vec![0u64; self.cols.len()];
        for (e, c) in g {
            let s: Exps = e.iter().zip(m).map(|(x, y)| x + y).collect();
            let &i = self.index.get(&s)?;
            v[i] = (v[i] + self.reduce(*c)) % self.p;
        }
        Some(v)
    }

    pub fn to_poly(&self, v: &[u64]) -> IntPoly {
        v.iter()
            .enumerate()
            .filter(|(_, c)| **c != 0)
            .map(|(i, c)| (self.cols[i].clone(), *c as i128))
            .collect()
    }

    /// Row-reduced basis of the span.
    pub fn echelon(&self, rows: Vec<Vec<u64>>) -> Vec<Vec<u64>> {
        let p = self.p;
        let mut basis: Vec<(usize, Vec<u64>)> = Vec::new();
        for mut v in rows {
            for (piv, b) in &basis {
                let x = v[*piv];
                if x != 0 {
                    for (vi, bi) in v.iter_mut().zip(b) {
                        *vi = (*vi + (p - x) * bi) % p;
                    }
                }
            }
            if let Some(piv) = v.iter().position(|&x| x != 0) {
                let inv = inv(v[piv], p);
                for x in v.iter_mut() {
                    *x = *x * inv % p;
                }
                for (_, b) in basis.iter_mut() {
                    let x = b[piv];
                    if x != 0 {
                        for (bi, vi) in b.iter_mut().zip(&v) {
                            *bi = (*bi + (p - x) * vi) % p;
                        }
                    }
                }
                basis.push((piv, v));
            }
        }
        basis.into_iter().map(|(_, v)| v).collect()
    }

    /// The F_p-span of `m * g` over generators `g` and monomials `m` within the bound.
    pub fn ideal(&self, gens: &[IntPoly]) -> Vec<Vec<u64>> {
        let mut rows = Vec::new();
        for g in gens {
            for m in &self.cols {
                if let Some(v) = self.shifted(g, m) {
                    if v.iter().any(|&x| x != 0) {
                        rows.push(v);
                    }
                }
            }
        }
        self.echelon(rows)
    }

    pub fn u(&self, g: &IntPoly) -> IntPoly {
        let p = self.p as u32;
        let mut out = IntPoly::new();
        for (e, c) in g {
            if e.iter().all(|x| x % p == p - 1) {
                let k: Exps = e.iter().map(|x| (x + 1) / p - 1).collect();
                *out.entry(k).or_insert(0) += c;
            }
        }
        out.retain(|_, c| *c % self.p as i128 != 0);
        out
    }

    /// Vectors of the span whose `u`-image vanishes mod p.
    pub fn kernel_of_u(&self, basis: &[Vec<u64>]) -> Vec<Vec<u64>> {
        let p = self.p;
        let r = basis.len();
        let images: Vec<Vec<u64>> = basis
            .iter()
            .map(|b| {
                let img = self.u(&self.to_poly(b));
                let mut v = vec![0u64; self.cols.len()];
                for (e, c) in img {
                    v[self.index[&e]] = self.reduce(c);
                }
                v
            })
            .collect();
        // eliminate on [image | identity]
        let mut rows: Vec<Vec<u64>> = images
            .into_iter()
            .enumerate()
            .map(|(i, mut v)| {
                v.extend((0..r).map(|j| (i == j) as u64));
                v
            })
            .collect();
        let width = self.cols.len();
        let mut lead = 0;
        for col in 0..width {
            let Some(k) = (lead..r).find(|&k| rows[k][col] != 0) else { continue };
            rows.swap(lead, k);
            let iv = inv(rows[lead][col], p);
            for x in rows[lead].iter_mut() {
                *x = *x * iv % p;
            }
            for k in 0..r {
                if k != lead && rows[k][col] != 0 {
                    let x = rows[k][col];
                    let piv = rows[lead].clone();
                    for (a, b) in rows[k].iter_mut().zip(&piv) {
                        *a = (*a + (p - x) * b) % p;
                    }
                }
            }
            lead += 1;
        }
        rows[lead..]
            .iter()
            .map(|row| {
                let mut v = vec![0u64; width];
                for (i, &c) in row[width..].iter().enumerate() {
                    if c != 0 {
                        for (a, b) in v.iter_mut().zip(&basis[i]) {
                            *a = (*a + c * b) % p;
                        }
                    }
                }
                v
            })
            .collect()
    }

    pub fn escapes(&self, basis: &[Vec<u64>]) -> bool {
        let p = self.p as u32;
        basis
            .iter()
            .any(|v| v.iter().enumerate().any(|(i, &c)| c != 0 && self.cols[i].iter().all(|&x| x < p)))
    }
}

fn inv(a: u64, p: u64) -> u64 {
    (1..p).find(|x| a * x % p == 1).expect("unit")
}

/// Brute-force `e = 1` recursion: the levels `1..=n_max` at which the ideal escapes.
pub fn oracle_escapes(f: &IntPoly, p: u64, nvars: usize, degree: u32, n_max: u32) -> Vec<bool> {
    let space = FpSpace::new(p, nvars, degree);
    let a = int_pow(f, p as u32 - 1, nvars);
    let delta = int_delta1(&a, p, nvars);
    let mut ideal = space.ideal(std::slice::from_ref(&a));
    let mut out = vec![space.escapes(&ideal)];
    for _ in 1..n_max {
        let kernel = space.kernel_of_u(&ideal);
        let mut gens: Vec<IntPoly> = kernel.iter().map(|s| space.u(&int_mul(&delta, &space.to_poly(s)))).collect();
        gens.push(a.clone());
        ideal = space.ideal(&gens);
        out.push(space.escapes(&ideal));
    }
    out
}

pub fn oracle_height(f: &IntPoly, p: u64, nvars: usize, degree: u32, n_max: u32) -> Option<u32> {
    oracle_escapes(f, p, nvars, degree, n_max).iter().position(|&b| b).map(|i| i as u32 + 1)
}

/// A random polynomial with up to `terms` terms of degree `<= max_deg`.
pub fn random_poly(rng: &mut ChaCha8Rng, cfg: &Arc<RingConfig>, max_deg: u32, terms: usize) -> ModPoly {
    let m = cfg.modulus(cfg.precision());
    let items: Vec<(Monomial, u64)> = (0..rng.gen_range(0..=terms))
        .map(|_| {
            let mut left = rng.gen_range(0..=max_deg);
            let exps = (0..cfg.nvars())
                .map(|_| {
                    let e = rng.gen_range(0..=left);
                    left -= e;
                    e
                })
                .collect();
            (Monomial::new(exps), rng.gen_range(0..m))
        })
        .collect();
    ModPoly::from_terms(cfg, cfg.precision(), items)
}

/// A random homogeneous form of degree `d` with coefficients in `[0, p)`, not identically zero.
pub fn random_form(rng: &mut ChaCha8Rng, cfg: &Arc<RingConfig>, d: u32) -> ModPoly {
    let p = cfg.p();
    let mons: Vec<Exps> = monomials(cfg.nvars(), d).into_iter().filter(|e| e.iter().sum::<u32>() == d).collect();
    loop {
        let mut items: Vec<(Monomial, u64)> = Vec::new();
        for e in &mons {
            if rng.gen_bool(0.4) {
                items.push((Monomial::new(e.clone()), rng.gen_range(1..p)));
            }
        }
        let f = ModPoly::from_terms(cfg, cfg.precision(), items);
        if !f.is_zero() {
            return f;
        }
    }
}
