//! Acceptance battery: one PASS/FAIL line per criterion, non-zero exit if
//! any criterion fails.

use std::time::{Duration, Instant};

use covlab_core::covering::{star_power, Covering, GroundSet};
use covlab_core::dynamics::{exact_mu, exact_omega, DynamicalInstance};
use covlab_core::guards::Guards;
use covlab_core::matching::{
    compatible_matching, covering_graph, deficiency_bound, matching_number, refinement_injection,
};
use covlab_core::metric::{
    ball_cover, dimension_slope, gamma, thm82_replay, MetricSpace, RadiusGrid,
};
use covlab_core::oracle::{literal_mu, literal_omega};
use covlab_core::perm::Perm;
use covlab_core::symbolic::{
    entropy_estimate, generator_change_check, spectral_oracle, thm93_replay, SubshiftSpec,
};
use covlab_core::uniformity::{complexity, complexity_bruteforce};
use covlab_core::{sample, Rational, UniformStructure};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const HALL_CASES: usize = 1000;
const HALL_BUDGET: Duration = Duration::from_secs(10);
const SETCOVER_CASES: usize = 500;
const SETCOVER_BUDGET: Duration = Duration::from_secs(60);
const COMPATIBLE_CASES: usize = 1000;
const COMPATIBLE_BUDGET: Duration = Duration::from_secs(60);
const INJECTION_CASES: usize = 200;
const QUANTIFIER_CASES: usize = 200;
const QUANTIFIER_BUDGET: Duration = Duration::from_secs(300);
const CANTOR_SLOPE_TOL: f64 = 1e-3;
const CANTOR_BUDGET: Duration = Duration::from_secs(30);
const CIRCLE_SLOPE_TOL: f64 = 0.05;
const GOLDEN_ENTROPY: f64 = 1.38848;
const GOLDEN_ENTROPY_TOL: f64 = 0.05;
const GOLDEN_SPECTRAL: f64 = 0.694242;
const GOLDEN_SPECTRAL_TOL: f64 = 1e-6;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        detail: detail.into(),
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn hall_ore() -> Verdict {
    let start = Instant::now();
    let guards = Guards::default();
    let mut r = rng(101);
    let mut bad = 0;
    for _ in 0..HALL_CASES {
        let (a, b) = (r.gen_range(0..=10), r.gen_range(0..=10));
        let p = r.gen_range(0.05..0.6);
        let g = sample::bipartite_graph(&mut r, a, b, p);
        if deficiency_bound(&g, &guards).ok() != Some(matching_number(&g)) {
            bad += 1;
        }
    }
    let t = start.elapsed();
    verdict(
        bad == 0 && t < HALL_BUDGET,
        format!("{HALL_CASES} graphs, {bad} mismatches, {t:.2?}"),
    )
}

fn set_cover() -> Verdict {
    let start = Instant::now();
    let guards = Guards::default();
    let mut r = rng(102);
    let mut bad = 0;
    for _ in 0..SETCOVER_CASES {
        let n = r.gen_range(1..=8);
        let s = sample::structure(&mut r, n);
        let u = sample::admissible_covering(&mut r, s.finest(), 6);
        if complexity(&u, &s).ok() != complexity_bruteforce(&u, &s, &guards).ok() {
            bad += 1;
        }
    }
    let t = start.elapsed();
    verdict(
        bad == 0 && t < SETCOVER_BUDGET,
        format!("{SETCOVER_CASES} coverings, {bad} mismatches, {t:.2?}"),
    )
}

fn compatible() -> Verdict {
    let start = Instant::now();
    let mut r = rng(103);
    let mut bad = 0;
    for _ in 0..COMPATIBLE_CASES {
        let n = r.gen_range(1..=10);
        let u = sample::covering(&mut r, n, 4);
        let e = sample::subset(&mut r, n, 0.5);
        let f = sample::subset(&mut r, n, 0.5);
        let k = r.gen_range(1..=4);
        let ok = compatible_matching(&u, &e, &f, k).is_ok_and(|c| {
            let target =
                covering_graph(&(e - f), &(f - e), &star_power(&u, k - 1)).expect("same ground");
            c.phi1.is_injective() && target.is_matching(&c.phi1) && c.bound_holds()
        });
        bad += usize::from(!ok);
    }
    let t = start.elapsed();
    verdict(
        bad == 0 && t < COMPATIBLE_BUDGET,
        format!("{COMPATIBLE_CASES} cases, {bad} violations, {t:.2?}"),
    )
}

fn injection() -> Verdict {
    let mut r = rng(104);
    let mut bad = 0;
    for _ in 0..INJECTION_CASES {
        let n = r.gen_range(1..=8);
        let (s, u, v, w) = sample::refinement_injection_case(&mut r, n).expect("constructive case");
        let ok = refinement_injection(&u, &v, &w, &s).is_ok_and(|inj| {
            inj.map.len() == inj.from.len() && inj.pairs().all(|(a, b)| a.intersects(&b))
        });
        bad += usize::from(!ok);
    }
    verdict(
        bad == 0,
        format!("{INJECTION_CASES} cases, {bad} imperfect"),
    )
}

fn fixed_instances() -> Vec<DynamicalInstance> {
    let guards = Guards::default();
    let make = |n: usize, bases: &[&[&[usize]]], gens: &[&[usize]]| {
        let ground = GroundSet::new(n).unwrap();
        let bases = bases
            .iter()
            .map(|b| {
                Covering::from_lists(ground, &b.iter().map(|m| m.to_vec()).collect::<Vec<_>>())
                    .unwrap()
            })
            .collect();
        let gens = gens
            .iter()
            .map(|g| Perm::new(g.to_vec()).unwrap())
            .collect();
        DynamicalInstance::new(UniformStructure::new(bases).unwrap(), gens, &guards).unwrap()
    };
    vec![
        make(3, &[&[&[0, 1, 2]], &[&[0, 1], &[1, 2]]], &[&[2, 1, 0]]),
        make(2, &[&[&[0], &[1]]], &[&[1, 0]]),
        make(4, &[&[&[0, 1], &[2, 3]]], &[&[1, 0, 2, 3], &[2, 3, 0, 1]]),
        make(
            4,
            &[&[&[0], &[1], &[2], &[3]]],
            &[&[1, 0, 2, 3], &[1, 2, 3, 0]],
        ),
    ]
}

fn quantifier_instances() -> Vec<DynamicalInstance> {
    let guards = Guards::default();
    let mut r = rng(105);
    let mut out = fixed_instances();
    while out.len() < QUANTIFIER_CASES {
        let n = r.gen_range(1..=4);
        out.push(sample::dynamical_instance(&mut r, n, 2, &guards).expect("invariant structure"));
    }
    out
}

fn quantifier(instances: &[DynamicalInstance]) -> Verdict {
    let start = Instant::now();
    let guards = Guards::default();
    let mut bad = 0;
    let mut max_group = 0;
    for d in instances {
        max_group = max_group.max(d.group().len());
        let mu_ok = exact_mu(d, &guards).ok().map(|m| m.value) == literal_mu(d).ok();
        let omega_ok =
            exact_omega(d, &guards).ok().and_then(|o| o.value()) == literal_omega(d).ok();
        bad += usize::from(!(mu_ok && omega_ok));
    }
    let t = start.elapsed();
    verdict(
        bad == 0 && t < QUANTIFIER_BUDGET && max_group <= 24,
        format!(
            "{} instances (largest group {max_group}), {bad} disagreements, {t:.2?}",
            instances.len()
        ),
    )
}

fn inequalities(instances: &[DynamicalInstance]) -> Verdict {
    let guards = Guards::default();
    let one = Rational::from_integer(1);
    let two = Rational::from_integer(2);
    let mut bad = 0;
    let mut partitions = 0;
    for d in instances {
        let (Ok(mu), Ok(omega)) = (exact_mu(d, &guards), exact_omega(d, &guards)) else {
            bad += 1;
            continue;
        };
        let mut ok = omega.lower >= one && omega.upper <= two && omega.lower >= two - mu.value;
        if d.structure().finest().is_partition() {
            partitions += 1;
            ok &= omega.value() == Some(one);
        }
        bad += usize::from(!ok);
    }
    verdict(
        bad == 0,
        format!(
            "{} instances ({partitions} invariant partitions), {bad} violations",
            instances.len()
        ),
    )
}

fn cantor() -> Verdict {
    let start = Instant::now();
    let m = MetricSpace::cantor(8).expect("level 8");
    let mut exact = true;
    for j in 1..=5u32 {
        exact &= gamma(&m, &Rational::new(1, 3i64.pow(j))).ok() == Some(1usize << j);
    }
    let slope = dimension_slope(&m, &RadiusGrid::powers(3, 1, 5).unwrap())
        .expect("grid")
        .slope;
    let target = 2f64.log2() / 3f64.log2();
    let t = start.elapsed();
    verdict(
        exact && (slope - target).abs() <= CANTOR_SLOPE_TOL && t < CANTOR_BUDGET,
        format!(
            "gamma(3^-j) = 2^j for j = 1..5: {exact}; slope {slope:.6} vs {target:.6}; {t:.2?}"
        ),
    )
}

fn circle() -> MetricSpace {
    MetricSpace::circle(256, Rational::new(710, 113)).expect("circle")
}

fn circle_slope() -> Verdict {
    let slope = dimension_slope(&circle(), &RadiusGrid::powers(2, 2, 6).unwrap())
        .expect("grid")
        .slope;
    verdict(
        (slope - 1.0).abs() <= CIRCLE_SLOPE_TOL,
        format!("slope {slope:.6} over 2^-2..2^-6"),
    )
}

fn entropy() -> Verdict {
    let gm = SubshiftSpec::golden_mean();
    let est = entropy_estimate(&gm, 15).expect("n_max 15").estimate;
    let spec = spectral_oracle(&gm).expect("sft");
    let full = entropy_estimate(&SubshiftSpec::full_shift(2), 16).expect("n_max 16");
    let full_ok = full
        .trace
        .iter()
        .all(|p| p.h == (2 * p.n + 1) as f64 / p.n as f64);
    let est_ok = (est - GOLDEN_ENTROPY).abs() <= GOLDEN_ENTROPY_TOL;
    let spec_ok = (spec - GOLDEN_SPECTRAL).abs() <= GOLDEN_SPECTRAL_TOL;
    verdict(
        est_ok && spec_ok && full_ok,
        format!(
            "golden-mean h_15 = {est:.6} (|diff| {:.4}, tol {GOLDEN_ENTROPY_TOL}): {est_ok}; spectral {spec:.6}: {spec_ok}; full-shift h_n exact: {full_ok}",
            (est - GOLDEN_ENTROPY).abs()
        ),
    )
}

fn covlab<S: AsRef<std::ffi::OsStr>>(args: &[S]) -> i32 {
    let args = std::iter::once(std::ffi::OsString::from("covlab"))
        .chain(args.iter().map(|a| a.as_ref().to_owned()));
    covlab_cli::run(args)
}

fn data(name: &str) -> String {
    format!("{}/../../data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn thm93() -> Verdict {
    let eps = Rational::new(1, 5);
    let bound = BigRational::new(BigInt::from(6), BigInt::from(5));
    let p3 = thm93_replay(&SubshiftSpec::periodic(3), &eps, 20).expect("p3");
    let st = thm93_replay(&SubshiftSpec::sturmian(64), &eps, 20).expect("table");
    let full = thm93_replay(&SubshiftSpec::full_shift(2), &eps, 20).expect("full");
    let p3_ok = p3.n == Some(0) && p3.certified_ratio.as_ref().is_some_and(|r| *r <= bound);
    let st_ok =
        st.n.is_some_and(|n| n >= 4) && st.certified_ratio.as_ref().is_some_and(|r| *r <= bound);
    let dir = tempfile::tempdir().expect("temp dir");
    let out = dir.path().join("full2.csv");
    let input = data("full2.json");
    let code = covlab(&[
        "replay",
        "thm93",
        "--input",
        &input,
        "--eps",
        "1/5",
        "--output",
        &out.to_string_lossy(),
    ]);
    let full_ok = full.n.is_none() && code == 3;
    verdict(
        p3_ok && st_ok && full_ok,
        format!(
            "period-3 n = {:?}; table n = {:?}; full shift n = {:?}, exit {code}",
            p3.n, st.n, full.n
        ),
    )
}

fn thm82() -> Verdict {
    let m = circle();
    let gens = [Perm::rotation(256, 1), Perm::rotation(256, 64)];
    let u = ball_cover(&m, &Rational::new(1, 2)).expect("radius");
    let eps = Rational::new(1, 2);
    match thm82_replay(&m, &gens, &u, &eps) {
        Ok(rep) => {
            let n = rep.n.unwrap_or(0) as usize;
            let ok = rep.l == 0
                && rep.succeeded()
                && rep.u_refines_v
                && rep.n_v >= rep.gammas[n]
                && rep.max_ratio() <= Rational::new(3, 2);
            verdict(
                ok,
                format!(
                    "l = {}, m = {}, n = {:?}, N(V) = {}, gamma(2^-n) = {}, max ratio {}",
                    rep.l,
                    rep.m,
                    rep.n,
                    rep.n_v,
                    rep.gammas[n],
                    rep.max_ratio()
                ),
            )
        }
        Err(e) => verdict(false, format!("replay error: {e}")),
    }
}

fn generator_change() -> Verdict {
    let g = generator_change_check(&SubshiftSpec::golden_mean(), 1, 2, 15).expect("tails");
    verdict(
        g.holds(),
        format!(
            "eta_1 = {:.6}, eta_2 = {:.6}, m = {}, n = {}, slacks {:.6} / {:.6}",
            g.eta_a, g.eta_b, g.m, g.n, g.lower_slack, g.upper_slack
        ),
    )
}

fn determinism() -> Verdict {
    let dir = tempfile::tempdir().expect("temp dir");
    let run = |name: &str, workers: &str| {
        let path = dir.path().join(name);
        let code = covlab(&[
            "suite",
            "--seed",
            "42",
            "--workers",
            workers,
            "--output",
            &path.to_string_lossy(),
        ]);
        (code, std::fs::read(&path).unwrap_or_default())
    };
    let a = run("a.csv", "1");
    let b = run("b.csv", "1");
    let c = run("c.csv", "8");
    let ok = a.0 == 0 && !a.1.is_empty() && a == b && a == c;
    verdict(
        ok,
        format!(
            "seed 42: run twice identical {}, 1 vs 8 workers identical {}",
            a == b,
            a == c
        ),
    )
}

type Criterion<'a> = (&'static str, Box<dyn Fn() -> Verdict + 'a>);

fn main() {
    let instances = quantifier_instances();
    let criteria: Vec<Criterion> = vec![
        ("Hall/Ore identity", Box::new(hall_ore)),
        ("set-cover oracle", Box::new(set_cover)),
        ("compatible-matching lemma", Box::new(compatible)),
        ("refinement injection", Box::new(injection)),
        (
            "quantifier-reduction soundness",
            Box::new(|| quantifier(&instances)),
        ),
        ("main inequalities", Box::new(|| inequalities(&instances))),
        ("Cantor gamma", Box::new(cantor)),
        ("circle slope", Box::new(circle_slope)),
        ("entropy", Box::new(entropy)),
        ("stable-index replay on subshifts", Box::new(thm93)),
        ("dyadic-net replay on the circle", Box::new(thm82)),
        ("generator change", Box::new(generator_change)),
        ("determinism", Box::new(determinism)),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let v = check();
        failed += usize::from(!v.pass);
        println!(
            "[{}] {:>2} {name}: {}",
            if v.pass { "PASS" } else { "FAIL" },
            i + 1,
            v.detail
        );
    }
    println!(
        "acceptance: {} of {} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
