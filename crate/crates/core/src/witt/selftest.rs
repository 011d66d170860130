//! Randomized checks of the ghost-component identities.
//!
//! Every trial draws from its own `ChaCha8Rng` seeded with `seed + index`, so
//! a report is reproducible from `(p, n, trials, seed)` whatever the thread
//! count. Even-indexed trials use integer entries, odd ones polynomials in `Z[x]`.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{add_len2, mul_len2, Coeff, GhostVector, IntPoly, WittVector};
use crate::par;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub p: u64,
    pub n: usize,
    pub trials: u64,
    pub passed: u64,
    pub failed: u64,
    pub seed: u64,
    pub first_counterexample: Option<String>,
}

impl CheckReport {
    pub fn ok(&self) -> bool {
        self.failed == 0
    }
}

type Outcome = std::result::Result<(), String>;

trait Sample: Coeff {
    fn sample(rng: &mut ChaCha8Rng) -> Self;
}

impl Sample for BigInt {
    fn sample(rng: &mut ChaCha8Rng) -> Self {
        BigInt::from(rng.gen_range(-40i64..=40))
    }
}

impl Sample for IntPoly {
    fn sample(rng: &mut ChaCha8Rng) -> Self {
        let deg = rng.gen_range(0..=2);
        IntPoly::new((0..=deg).map(|_| BigInt::from(rng.gen_range(-4i64..=4))).collect())
    }
}

fn vector<C: Sample>(rng: &mut ChaCha8Rng, p: u64, n: usize) -> WittVector<C> {
    WittVector::new(p, (0..n).map(|_| C::sample(rng)).collect()).expect("valid prime and length")
}

fn pow_big(p: u64, e: usize) -> BigInt {
    BigInt::from(p).pow(e as u32)
}

fn ensure(cond: bool, what: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(what())
    }
}

fn zip_ghost<C: Coeff>(a: &GhostVector<C>, b: &GhostVector<C>, op: impl Fn(&C, &C) -> C) -> GhostVector<C> {
    GhostVector(a.0.iter().zip(&b.0).map(|(x, y)| op(x, y)).collect())
}

fn run(
    name: &str,
    p: u64,
    n: usize,
    trials: u64,
    seed: u64,
    int: impl Fn(&mut ChaCha8Rng) -> Outcome + Sync,
    poly: impl Fn(&mut ChaCha8Rng) -> Outcome + Sync,
) -> CheckReport {
    let outcomes = par::map_range(0..trials, |i| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(i));
        let out = if i % 2 == 0 { int(&mut rng) } else { poly(&mut rng) };
        out.map_err(|msg| format!("trial {i}: {msg}"))
    });
    let failed = outcomes.iter().filter(|o| o.is_err()).count() as u64;
    CheckReport {
        name: name.to_string(),
        p,
        n,
        trials,
        passed: trials - failed,
        failed,
        seed,
        first_counterexample: outcomes.into_iter().find_map(Result::err),
    }
}

/// Ghost map is additive and multiplicative; length-2 sums and products
/// match the closed-form universal polynomials; Teichmüller lifts multiply.
fn ring_hom<C: Sample>(rng: &mut ChaCha8Rng, p: u64, n: usize) -> Outcome {
    let a: WittVector<C> = vector(rng, p, n);
    let b: WittVector<C> = vector(rng, p, n);
    let sum = a.add(&b).map_err(|e| e.to_string())?;
    let prod = a.mul(&b).map_err(|e| e.to_string())?;
    let (ga, gb) = (a.ghost(), b.ghost());
    ensure(sum.ghost() == zip_ghost(&ga, &gb, C::add), || format!("ghost(a+b) for a={a:?} b={b:?}"))?;
    ensure(prod.ghost() == zip_ghost(&ga, &gb, C::mul), || format!("ghost(ab) for a={a:?} b={b:?}"))?;
    if n >= 2 {
        let (x, y) = (a.entries(), b.entries());
        let (s0, s1) = add_len2(p, (&x[0], &x[1]), (&y[0], &y[1]));
        let (m0, m1) = mul_len2(p, (&x[0], &x[1]), (&y[0], &y[1]));
        ensure(sum.entries()[..2] == [s0, s1], || format!("closed-form sum for a={a:?} b={b:?}"))?;
        ensure(prod.entries()[..2] == [m0, m1], || format!("closed-form product for a={a:?} b={b:?}"))?;
    }
    let (s, t) = (C::sample(rng), C::sample(rng));
    let lhs = WittVector::teichmuller(p, s.clone(), n).mul(&WittVector::teichmuller(p, t.clone(), n));
    ensure(lhs.ok() == Some(WittVector::teichmuller(p, s.mul(&t), n)), || format!("[s][t] != [st] for s={s:?} t={t:?}"))
}

fn section<C: Sample>(rng: &mut ChaCha8Rng, p: u64, n: usize) -> Outcome {
    let a: WittVector<C> = vector(rng, p, n);
    let back = WittVector::from_ghost(p, &a.ghost()).map_err(|e| e.to_string())?;
    ensure(back == a, || format!("from_ghost(ghost(a)) != a for a={a:?}"))
}

/// `w_r(V a) = p w_(r-1)(a)` and `Res V = V Res`.
fn v_and_w<C: Sample>(rng: &mut ChaCha8Rng, p: u64, n: usize) -> Outcome {
    let a: WittVector<C> = vector(rng, p, n);
    let va = a.verschiebung();
    ensure(va.ghost_component(0).is_zero(), || format!("w_0(Va) != 0 for a={a:?}"))?;
    for r in 1..=n {
        let lhs = va.ghost_component(r);
        let rhs = a.ghost_component(r - 1).scale(&BigInt::from(p));
        ensure(lhs == rhs, || format!("w_{r}(Va) != p w_{}(a) for a={a:?}", r - 1))?;
    }
    if n >= 2 {
        ensure(va.restriction() == a.restriction().verschiebung(), || format!("Res V != V Res for a={a:?}"))?;
    }
    Ok(())
}

/// Ghost components of `W_n(p^m A)` are exactly `(p^m, p^(m+1), ..., p^(m+n-1))`-divisible.
fn topology<C: Sample>(rng: &mut ChaCha8Rng, p: u64, n: usize) -> Outcome {
    let m = rng.gen_range(1..=2usize);
    let pm = pow_big(p, m);
    let a = WittVector::new(p, (0..n).map(|_| C::sample(rng).scale(&pm)).collect()).map_err(|e| e.to_string())?;
    for (i, w) in a.ghost().0.iter().enumerate() {
        ensure(w.divisible_by(&pow_big(p, m + i)), || format!("m={m}: w_{i} not divisible for a={a:?}"))?;
    }
    let g = GhostVector((0..n).map(|i| C::sample(rng).scale(&pow_big(p, m + i))).collect());
    let back = WittVector::from_ghost(p, &g).map_err(|e| format!("m={m}: {e} for g={g:?}"))?;
    ensure(back.entries().iter().all(|x| x.divisible_by(&pm)), || format!("m={m}: entries not in p^m for g={g:?}"))
}

/// `w_(n-1)` mod `p^n` only sees entries mod p, and the induced map is a ring map.
fn well_defined<C: Sample>(rng: &mut ChaCha8Rng, p: u64, n: usize) -> Outcome {
    let modulus = pow_big(p, n);
    let pb = BigInt::from(p);
    let top = n - 1;
    let a: WittVector<C> = vector(rng, p, n);
    let shifted = WittVector::new(p, a.entries().iter().map(|x| x.add(&C::sample(rng).scale(&pb))).collect())
        .map_err(|e| e.to_string())?;
    let diff = a.ghost_component(top).sub(&shifted.ghost_component(top));
    ensure(diff.divisible_by(&modulus), || format!("perturbing {a:?} to {shifted:?} moved w_{top} mod p^{n}"))?;

    let b: WittVector<C> = vector(rng, p, n);
    let w = |v: &WittVector<C>| v.reduce_entries(&pb).ghost_component(top).reduce_mod(&modulus);
    let sum = a.add(&b).map_err(|e| e.to_string())?;
    let prod = a.mul(&b).map_err(|e| e.to_string())?;
    ensure(w(&sum) == w(&a).add(&w(&b)).reduce_mod(&modulus), || format!("induced map not additive on a={a:?} b={b:?}"))?;
    ensure(w(&prod) == w(&a).mul(&w(&b)).reduce_mod(&modulus), || format!("induced map not multiplicative on a={a:?} b={b:?}"))
}

pub const CHECKS: [&str; 5] = ["ghost_ring_hom", "from_ghost_section", "v_and_w", "topology", "well_defined_mod_pn"];

/// Runs one named check.
pub fn run_check(name: &str, p: u64, n: usize, trials: u64, seed: u64) -> Option<CheckReport> {
    macro_rules! both {
        ($f:ident) => {
            run(name, p, n, trials, seed, |r| $f::<BigInt>(r, p, n), |r| $f::<IntPoly>(r, p, n))
        };
    }
    Some(match name {
        "ghost_ring_hom" => both!(ring_hom),
        "from_ghost_section" => both!(section),
        "v_and_w" => both!(v_and_w),
        "topology" => both!(topology),
        "well_defined_mod_pn" => both!(well_defined),
        _ => return None,
    })
}

/// All checks at one `(p, n)`.
pub fn run_selftest(p: u64, n: usize, trials: u64, seed: u64) -> Vec<CheckReport> {
    CHECKS
        .iter()
        .filter_map(|name| run_check(name, p, n, trials, seed))
        .collect()
}
