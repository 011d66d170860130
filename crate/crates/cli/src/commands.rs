use std::ops::RangeInclusive;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use qfsplit::criteria::necessary::{default_degree_bound, necessary_qf2_non_fpure, NecessaryOptions};
use qfsplit::criteria::search::default_e_range;
use qfsplit::criteria::tau::{find_test_element, jacobian_seed, tau_closure};
use qfsplit::criteria::{fedder_fpure, necessary_qfe, qfs_height, sufficient_qfe, sufficient_qfr, SearchOptions};
use qfsplit::report::{Parameters, Report, SelfTestReport};
use qfsplit::witt::selftest::run_selftest;
use qfsplit::{format_poly, parse_poly, Certificate, ModPoly, RingConfig, Soundness, Verdict, VerdictKind};

use crate::{Command, Ring};

/// How many closure elements a `tau` report lists.
const LISTED_ELEMENTS: usize = 32;

pub struct Outcome {
    pub output: String,
    pub code: u8,
}

fn setup(ring: &Ring, needed: u32) -> Result<(Arc<RingConfig>, ModPoly)> {
    let w = ring.precision.unwrap_or(needed);
    if w < needed {
        bail!("--precision {w} is below the {needed} digits this command needs");
    }
    let cfg = RingConfig::new(&ring.vars, ring.p, w)?;
    let f = parse_poly(&ring.f, &cfg).with_context(|| format!("cannot parse f = {:?}", ring.f))?;
    Ok((cfg, f))
}

fn parse(cfg: &Arc<RingConfig>, text: &str, what: &str) -> Result<ModPoly> {
    parse_poly(text, cfg).with_context(|| format!("cannot parse {what} = {text:?}"))
}

fn finish(command: &str, ring: &Ring, f: &ModPoly, params: Parameters, verdict: &Verdict) -> Outcome {
    let report = Report::new(command, f, params, verdict);
    let mut output = if ring.json { report.to_json() } else { report.to_text() };
    if !output.ends_with('\n') {
        output.push('\n');
    }
    let code = if verdict.is_inconclusive() { 2 } else { 0 };
    Outcome { output, code }
}

fn parse_e_range(text: &str) -> Result<RangeInclusive<u32>> {
    let (a, b) = text
        .split_once("..")
        .ok_or_else(|| anyhow!("--e-range must look like A..B, got {text:?}"))?;
    let (a, b): (u32, u32) = (a.trim().parse()?, b.trim().trim_start_matches('=').parse()?);
    if a == 0 || a > b {
        bail!("--e-range needs 1 <= A <= B, got {text:?}");
    }
    Ok(a..=b)
}

pub fn run(command: &Command) -> Result<Outcome> {
    match command {
        Command::Fpure { ring } => {
            let (_, f) = setup(ring, 1)?;
            let v = fedder_fpure(&f)?;
            Ok(finish("fpure", ring, &f, Parameters::default(), &v))
        }
        Command::Height { ring, n, deg_bound } => {
            let (_, f) = setup(ring, n + 1)?;
            let opts = NecessaryOptions { degree_bound: *deg_bound, check_stability: true, ..Default::default() };
            let v = qfs_height(&f, *n, &opts)?;
            let params = Parameters { n: Some(*n), degree_bound: v.certificate.degree_bound, ..Default::default() };
            Ok(finish("height", ring, &f, params, &v))
        }
        Command::Qfe { ring, n, e, witness, deg_bound, search_bound } => {
            let (cfg, f) = setup(ring, n + 1)?;
            let multiplier = witness.as_deref().map(|w| parse(&cfg, w, "--witness")).transpose()?;
            let opts = SearchOptions { search_bound: *search_bound, multiplier: multiplier.clone() };
            let mut params = Parameters {
                n: Some(*n),
                e: Some(*e),
                witness: multiplier.as_ref().map(format_poly),
                search_bound: *search_bound,
                ..Default::default()
            };
            let v = sufficient_qfe(&f, *e, *n, &opts)?;
            if v.is_certified() {
                return Ok(finish("qfe", ring, &f, params, &v));
            }
            if multiplier.is_some() {
                eprintln!("witness does not certify: D1 or D3 fails");
                return Ok(finish("qfe", ring, &f, params, &v));
            }
            let nopts = NecessaryOptions { degree_bound: *deg_bound, check_stability: true, ..Default::default() };
            params.degree_bound = Some(deg_bound.unwrap_or_else(|| default_degree_bound(&f)));
            let mut v = necessary_qfe(&f, *e, *n, &nopts)?;
            if v.is_inconclusive() && *e == 2 && fedder_fpure(&f)?.kind == VerdictKind::NotFPure {
                let alt = necessary_qf2_non_fpure(&f, *n, &nopts)?;
                if !alt.is_inconclusive() {
                    v = alt;
                }
            }
            v.certificate.search_bound = params.search_bound.or(Some(qfsplit::criteria::search::default_search_bound(
                f.nvars(),
                f.p(),
            )));
            v.certificate.notes.insert(0, "no witness found up to the search bound".into());
            Ok(finish("qfe", ring, &f, params, &v))
        }
        Command::Qfr { ring, n, e, e_range, c, witness, search_bound, assume_test_element, tau_steps } => {
            let (cfg, f) = setup(ring, n + 1)?;
            let c = parse(&cfg, c, "--c")?;
            if c.reduce_precision(1)?.is_zero() {
                bail!("c must be nonzero mod p");
            }
            let range = match (e, e_range) {
                (Some(e), _) if *e >= 1 => *e..=*e,
                (Some(_), _) => bail!("--e must be at least 1"),
                (None, Some(text)) => parse_e_range(text)?,
                (None, None) => default_e_range(ring.p, *n),
            };
            let multiplier = witness.as_deref().map(|w| parse(&cfg, w, "--witness")).transpose()?;
            let params = Parameters {
                n: Some(*n),
                e: *e,
                e_range: Some(format!("{}..{}", range.start(), range.end())),
                c: Some(format_poly(&c)),
                witness: multiplier.as_ref().map(format_poly),
                search_bound: *search_bound,
                ..Default::default()
            };
            let test_element = if *assume_test_element {
                None
            } else {
                let closure = tau_closure(&jacobian_seed(&f)?, &f, *tau_steps, qfsplit::criteria::tau::DEFAULT_MAX_ELEMENTS)?;
                match find_test_element(&c, &closure, &f)? {
                    Some(t) => Some(t),
                    None => {
                        let mut cert = Certificate { n: Some(*n), c: Some(c.clone()), ..Default::default() };
                        cert.notes.push(format!(
                            "c is not in (t^4) + (f) for any of the {} test elements found; pass --assume-test-element to skip this check",
                            closure.len()
                        ));
                        let v = Verdict::with(VerdictKind::Inconclusive, Soundness::SoundOneSided, cert);
                        return Ok(finish("qfr", ring, &f, params, &v));
                    }
                }
            };
            let opts = SearchOptions { search_bound: *search_bound, multiplier: multiplier.clone() };
            let mut v = sufficient_qfr(&f, *n, &c, range, &opts)?;
            match test_element {
                Some(t) => v.certificate.test_element = Some(t),
                None => v.certificate.notes.push("c asserted by the user to be a multiple of t^4 for a test element t".into()),
            }
            if multiplier.is_some() && !v.is_certified() {
                eprintln!("witness does not certify: D1 or D3 fails for every e in the range");
            }
            Ok(finish("qfr", ring, &f, params, &v))
        }
        Command::Tau { ring, c, max_steps, max_elements } => {
            let (cfg, f) = setup(ring, 1)?;
            let c = c.as_deref().map(|c| parse(&cfg, c, "--c")).transpose()?;
            let closure = tau_closure(&jacobian_seed(&f)?, &f, *max_steps, *max_elements)?;
            let mut cert = Certificate { c: c.clone(), ..Default::default() };
            cert.notes.push(format!("{} elements found", closure.len()));
            if closure.len() > LISTED_ELEMENTS {
                cert.notes.push(format!("listing the {LISTED_ELEMENTS} smallest"));
            }
            if let Some(c) = &c {
                cert.test_element = find_test_element(c, &closure, &f)?;
                if cert.test_element.is_none() {
                    cert.notes.push("c is not in (t^4) + (f) for any element found".into());
                }
            }
            cert.elements = closure.into_iter().take(LISTED_ELEMENTS).collect();
            let v = Verdict::with(VerdictKind::TauElements, Soundness::Exact, cert);
            let params = Parameters { c: c.as_ref().map(format_poly), ..Default::default() };
            Ok(finish("tau", ring, &f, params, &v))
        }
        Command::WittSelftest { p, n, trials, seed, json, .. } => {
            if *n == 0 {
                bail!("--n must be at least 1");
            }
            RingConfig::new(&["x"], *p, 1)?;
            let report = SelfTestReport::new(*p, *n, *trials, *seed, run_selftest(*p, *n, *trials, *seed));
            let mut output = if *json { report.to_json() } else { report.to_text() };
            if !output.ends_with('\n') {
                output.push('\n');
            }
            Ok(Outcome { output, code: if report.passed { 0 } else { 2 } })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::parse_e_range;

    #[test]
    fn e_ranges() {
        assert_eq!(parse_e_range("1..8").unwrap(), 1..=8);
        assert_eq!(parse_e_range("2..=3").unwrap(), 2..=3);
        assert!(parse_e_range("0..2").is_err());
        assert!(parse_e_range("5..2").is_err());
        assert!(parse_e_range("7").is_err());
    }
}
