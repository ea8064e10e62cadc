//! The seeded property battery behind `covlab suite`.
//!
//! Case `i` of a family draws from its own ChaCha stream, so verdicts do
//! not depend on scheduling; results are merged in (family, case) order.

use std::path::{Path, PathBuf};

use covlab_core::covering::star_power;
use covlab_core::dynamics::{exact_mu, exact_omega};
use covlab_core::guards::Guards;
use covlab_core::matching::{
    compatible_matching, covering_graph, deficiency_bound, matching_number, refinement_injection,
    BipartiteGraph,
};
use covlab_core::oracle::{literal_mu, literal_omega};
use covlab_core::uniformity::{complexity, complexity_bruteforce};
use covlab_core::{sample, Covering, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{CliError, CliResult, Status};
use crate::instance::{covering_system_file, dynamical_file};
use crate::report::Report;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Hall,
    SetCover,
    Compatible,
    Injection,
    Quantifier,
    Inequalities,
}

impl Family {
    pub const ALL: [Family; 6] = [
        Family::Hall,
        Family::SetCover,
        Family::Compatible,
        Family::Injection,
        Family::Quantifier,
        Family::Inequalities,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Hall => "hall",
            Family::SetCover => "setcover",
            Family::Compatible => "compatible",
            Family::Injection => "injection",
            Family::Quantifier => "quantifier",
            Family::Inequalities => "inequalities",
        }
    }

    pub fn default_cases(self) -> usize {
        match self {
            Family::Hall | Family::Compatible => 1000,
            Family::SetCover => 500,
            Family::Injection | Family::Quantifier | Family::Inequalities => 200,
        }
    }

    pub fn default_ground(self) -> usize {
        match self {
            Family::Hall | Family::Compatible => 10,
            Family::SetCover | Family::Injection => 8,
            Family::Quantifier | Family::Inequalities => 4,
        }
    }

    /// Inequality cases reuse the quantifier instances.
    fn stream(self) -> u64 {
        match self {
            Family::Inequalities => Family::Quantifier as u64,
            f => f as u64,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub seed: u64,
    pub workers: usize,
    /// Overrides every family's case count.
    pub cases: Option<usize>,
    /// Caps every family's ground size.
    pub max_ground: Option<usize>,
    pub repro_dir: PathBuf,
    /// Test fixture: breaks the first Hall case.
    pub inject_fault: bool,
}

#[derive(Clone, Debug)]
pub struct CaseResult {
    pub family: Family,
    pub case: usize,
    pub failure: Option<(String, Value)>,
}

pub fn case_rng(seed: u64, family: Family, case: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(family.stream() << 32 | case as u64);
    rng
}

fn graph_json(g: &BipartiteGraph) -> Value {
    json!({ "left": g.left(), "right": g.right(), "edges": g.edges().collect::<Vec<_>>() })
}

fn fail(detail: impl Into<String>, instance: Value) -> Option<(String, Value)> {
    Some((detail.into(), instance))
}

fn error(e: covlab_core::Error, instance: Value) -> Option<(String, Value)> {
    fail(format!("error: {e}"), instance)
}

fn run_case(cfg: &SuiteConfig, family: Family, case: usize, guards: &Guards) -> CaseResult {
    let mut rng = case_rng(cfg.seed, family, case);
    let top = cfg
        .max_ground
        .map_or(family.default_ground(), |m| m.min(family.default_ground()))
        .max(1);
    let failure = match family {
        Family::Hall => {
            let (a, b) = (rng.gen_range(0..=top), rng.gen_range(0..=top));
            let p = rng.gen_range(0.05..0.6);
            let g = sample::bipartite_graph(&mut rng, a, b, p);
            let nu = matching_number(&g) + usize::from(cfg.inject_fault && case == 0);
            match deficiency_bound(&g, guards) {
                Ok(bound) if bound == nu => None,
                Ok(bound) => fail(
                    format!("matching number {nu} != deficiency bound {bound}"),
                    graph_json(&g),
                ),
                Err(e) => error(e, graph_json(&g)),
            }
        }
        Family::SetCover => {
            let n = rng.gen_range(1..=top);
            let s = sample::structure(&mut rng, n);
            let u = sample::admissible_covering(&mut rng, s.finest(), 6);
            let inst =
                json!({ "structure": covering_system_file(&s, None), "cover": u.to_lists() });
            match (complexity(&u, &s), complexity_bruteforce(&u, &s, guards)) {
                (Ok(a), Ok(b)) if a == b => None,
                (Ok(a), Ok(b)) => fail(format!("complexity {a} != brute force {b} for {u}"), inst),
                (Err(e), _) | (_, Err(e)) => error(e, inst),
            }
        }
        Family::Compatible => {
            let n = rng.gen_range(1..=top);
            let u = sample::covering(&mut rng, n, 4);
            let e = sample::subset(&mut rng, n, 0.5);
            let f = sample::subset(&mut rng, n, 0.5);
            let k = rng.gen_range(1..=4);
            let inst = json!({
                "ground": n, "cover": u.to_lists(), "e": e.iter().collect::<Vec<_>>(),
                "f": f.iter().collect::<Vec<_>>(), "n": k,
            });
            match compatible_matching(&u, &e, &f, k) {
                Ok(c) => {
                    let target = covering_graph(&(e - f), &(f - e), &star_power(&u, k - 1));
                    match target {
                        Ok(t)
                            if c.phi1.is_injective()
                                && t.is_matching(&c.phi1)
                                && c.bound_holds() =>
                        {
                            None
                        }
                        Ok(_) => fail(
                            format!("φ₁ = {} violates a compatible-matching clause", c.phi1),
                            inst,
                        ),
                        Err(e) => error(e, inst),
                    }
                }
                Err(e) => error(e, inst),
            }
        }
        Family::Injection => {
            let n = rng.gen_range(1..=top);
            match sample::refinement_injection_case(&mut rng, n) {
                Ok((s, u, v, w)) => {
                    let inst = json!({
                        "structure": covering_system_file(&s, None),
                        "u": u.to_lists(), "v": v.to_lists(), "w": w.to_lists(),
                    });
                    match refinement_injection(&u, &v, &w, &s) {
                        Ok(inj)
                            if inj.map.len() == inj.from.len()
                                && inj.pairs().all(|(a, b)| a.intersects(&b)) =>
                        {
                            None
                        }
                        Ok(inj) => fail(format!("injection {} is not perfect", inj.map), inst),
                        Err(e) => error(e, inst),
                    }
                }
                Err(e) => error(e, Value::Null),
            }
        }
        Family::Quantifier | Family::Inequalities => {
            let n = rng.gen_range(1..=top);
            match sample::dynamical_instance(&mut rng, n, 2, guards) {
                Ok(d) => {
                    let inst =
                        serde_json::to_value(dynamical_file(&d, None)).expect("serialisable");
                    match dynamics_case(&d, guards, family) {
                        Ok(None) => None,
                        Ok(Some(detail)) => fail(detail, inst),
                        Err(e) => error(e, inst),
                    }
                }
                Err(e) => error(e, Value::Null),
            }
        }
    };
    CaseResult {
        family,
        case,
        failure,
    }
}

fn dynamics_case(
    d: &covlab_core::dynamics::DynamicalInstance,
    guards: &Guards,
    family: Family,
) -> covlab_core::Result<Option<String>> {
    let mu = exact_mu(d, guards)?;
    let omega = exact_omega(d, guards)?;
    let one = Rational::from_integer(1);
    if family == Family::Quantifier {
        let lm = literal_mu(d)?;
        let lo = literal_omega(d)?;
        if mu.value != lm {
            return Ok(Some(format!("exact mu {} != literal {lm}", mu.value)));
        }
        if omega.value() != Some(lo) {
            return Ok(Some(format!(
                "exact omega {}..{} != literal {lo}",
                omega.lower, omega.upper
            )));
        }
        return Ok(None);
    }
    let w = omega.upper;
    if omega.lower < one || w > Rational::from_integer(2) {
        return Ok(Some(format!("omega {w} outside [1, 2]")));
    }
    if omega.lower < Rational::from_integer(2) - mu.value {
        return Ok(Some(format!(
            "omega {} < 2 - mu = {}",
            omega.lower,
            Rational::from_integer(2) - mu.value
        )));
    }
    let finest: &Covering = d.structure().finest();
    if finest.is_partition() && w != one {
        return Ok(Some(format!(
            "omega {w} != 1 on the invariant partition {finest}"
        )));
    }
    Ok(None)
}

pub struct SuiteOutcome {
    pub report: Report,
    pub results: Vec<CaseResult>,
    pub repro: Option<PathBuf>,
}

pub fn run(cfg: &SuiteConfig, guards: &Guards) -> CliResult<SuiteOutcome> {
    let jobs: Vec<(Family, usize)> = Family::ALL
        .iter()
        .flat_map(|&f| (0..cfg.cases.unwrap_or(f.default_cases())).map(move |i| (f, i)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers.max(1))
        .build()
        .map_err(|e| CliError::usage(format!("cannot start {} workers: {e}", cfg.workers)))?;
    let mut results: Vec<CaseResult> = pool.install(|| {
        jobs.par_iter()
            .map(|&(f, i)| run_case(cfg, f, i, guards))
            .collect()
    });
    results.sort_by_key(|r| (r.family as usize, r.case));

    let mut report = Report::new(&[
        "family",
        "cases",
        "passed",
        "failed",
        "max_ground",
        "first_failure",
    ]);
    for f in Family::ALL {
        let rs: Vec<&CaseResult> = results.iter().filter(|r| r.family == f).collect();
        let failed: Vec<&&CaseResult> = rs.iter().filter(|r| r.failure.is_some()).collect();
        let top = cfg
            .max_ground
            .map_or(f.default_ground(), |m| m.min(f.default_ground()))
            .max(1);
        report.row([
            f.name().to_string(),
            rs.len().to_string(),
            (rs.len() - failed.len()).to_string(),
            failed.len().to_string(),
            top.to_string(),
            failed
                .first()
                .map(|r| r.case.to_string())
                .unwrap_or_default(),
        ]);
    }
    let repro = match results.iter().find(|r| r.failure.is_some()) {
        Some(r) => Some(write_repro(cfg, r)?),
        None => None,
    };
    Ok(SuiteOutcome {
        report,
        results,
        repro,
    })
}

fn write_repro(cfg: &SuiteConfig, r: &CaseResult) -> CliResult<PathBuf> {
    let (detail, instance) = r.failure.as_ref().expect("failing case");
    let doc = json!({
        "seed": cfg.seed,
        "family": r.family.name(),
        "case": r.case,
        "stream": r.family.stream() << 32 | r.case as u64,
        "detail": detail,
        "instance": instance,
    });
    let path = cfg
        .repro_dir
        .join(format!("covlab-repro-{}-{}.json", r.family.name(), r.case));
    let mut text = serde_json::to_string_pretty(&doc).expect("json value serialises");
    text.push('\n');
    std::fs::write(&path, text)
        .map_err(|e| CliError::failure(format!("cannot write {}: {e}", path.display())))?;
    Ok(path)
}

pub fn status(outcome: &SuiteOutcome) -> Status {
    if outcome.repro.is_some() {
        Status::Failure
    } else {
        Status::Ok
    }
}

pub fn default_repro_dir(output: Option<&Path>) -> PathBuf {
    output
        .and_then(Path::parent)
        .filter(|p| !p.as_os_str().is_empty())
        .map(Path::to_path_buf)
        .unwrap_or_else(|| PathBuf::from("."))
}
