//! One function per subcommand. Each returns its report and exit status.

use covlab_core::covering::{star_power, Covering};
use covlab_core::dynamics::{
    check_inequalities, exact_mu, exact_omega, excised_candidate, free_product_ratio,
    mu_lower_bound, omega_upper_search, DynamicalInstance,
};
use covlab_core::guards::Guards;
use covlab_core::metric::{ball_cover, dimension_slope, gamma, thm82_replay, MetricSpace};
use covlab_core::perm::Perm;
use covlab_core::rational::to_f64;
use covlab_core::symbolic::{
    entropy_estimate, generator_change_check, spectral_oracle, thm93_replay, SubshiftSpec,
};
use covlab_core::uniformity::{complexity, zero_partition};
use covlab_core::{Error, Rational, Subset};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{CliError, CliResult, Status};
use crate::instance::{GridSpec, Instance};
use crate::report::{flag, float, rat, Report};

pub type Outcome = (Report, Status);

pub fn check(inst: &Instance) -> CliResult<Outcome> {
    let mut r = Report::new(&["field", "value"]);
    r.row(["kind", inst.kind()]);
    match inst {
        Instance::CoveringSystem { structure, .. } => {
            r.row(["ground".into(), structure.ground().size().to_string()]);
            r.row(["bases".into(), structure.bases().len().to_string()]);
            let zero = match zero_partition(structure) {
                Ok(p) => p.len().to_string(),
                Err(Error::ZeroClassesOverlap { point }) => format!("overlap at {point}"),
                Err(e) => return Err(e.into()),
            };
            r.row(["zero_classes".into(), zero]);
        }
        Instance::Dynamical { instance, .. } => {
            r.row(["ground".into(), instance.ground_size().to_string()]);
            r.row([
                "bases".into(),
                instance.structure().bases().len().to_string(),
            ]);
            r.row(["generators".into(), instance.generators().len().to_string()]);
            r.row(["group_order".into(), instance.group().len().to_string()]);
        }
        Instance::Metric {
            space, generators, ..
        } => {
            r.row(["points".into(), space.size().to_string()]);
            r.row(["diameter".into(), rat(&space.diameter())]);
            let mpd = space
                .min_positive_distance()
                .map(|d| rat(&d))
                .unwrap_or_default();
            r.row(["min_positive_distance".into(), mpd]);
            r.row(["generators".into(), generators.len().to_string()]);
        }
        Instance::Subshift { spec, .. } => match (spec.alphabet_size(), spec.max_len()) {
            (Some(k), _) => r.row(["alphabet".into(), k.to_string()]),
            (None, Some(l)) => r.row(["table_length".into(), l.to_string()]),
            (None, None) => unreachable!("a subshift has a matrix or a table"),
        },
    }
    r.row(["valid", "true"]);
    Ok((r, Status::Ok))
}

fn dynamical(inst: &Instance) -> CliResult<&DynamicalInstance> {
    match inst {
        Instance::Dynamical { instance, .. } => Ok(instance),
        other => Err(CliError::usage(format!(
            "expected a dynamical instance, got {}",
            other.kind()
        ))),
    }
}

type MetricParts<'a> = (
    &'a MetricSpace,
    &'a [Perm],
    Option<&'a Covering>,
    Option<GridSpec>,
);

fn metric(inst: &Instance) -> CliResult<MetricParts<'_>> {
    match inst {
        Instance::Metric {
            space,
            generators,
            cover,
            file,
        } => Ok((space, generators, cover.as_ref(), file.grid)),
        other => Err(CliError::usage(format!(
            "expected a metric instance, got {}",
            other.kind()
        ))),
    }
}

fn subshift(inst: &Instance) -> CliResult<&SubshiftSpec> {
    match inst {
        Instance::Subshift { spec, .. } => Ok(spec),
        other => Err(CliError::usage(format!(
            "expected a subshift instance, got {}",
            other.kind()
        ))),
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct InvariantFlags {
    pub mu: bool,
    pub omega: bool,
    pub ratio: bool,
    pub exact: bool,
}

fn mu_exceeds(d: &DynamicalInstance, g: &Guards) -> Option<String> {
    if d.ground_size() > g.mu_ground {
        return Some(format!(
            "ground {} exceeds the exact mu cap of {}",
            d.ground_size(),
            g.mu_ground
        ));
    }
    if d.group().len() > g.mu_group {
        return Some(format!(
            "group order {} exceeds the exact mu cap of {}",
            d.group().len(),
            g.mu_group
        ));
    }
    None
}

fn omega_exceeds(d: &DynamicalInstance, g: &Guards) -> Option<String> {
    (d.ground_size() > g.omega_ground).then(|| {
        format!(
            "ground {} exceeds the exact omega cap of {}",
            d.ground_size(),
            g.omega_ground
        )
    })
}

pub fn invariants(inst: &Instance, flags: InvariantFlags, guards: &Guards) -> CliResult<Outcome> {
    let d = dynamical(inst)?;
    let all = !(flags.mu || flags.omega || flags.ratio);
    let (want_mu, want_omega, want_ratio) =
        (all || flags.mu, all || flags.omega, all || flags.ratio);
    if flags.exact {
        let refusal = [
            want_mu.then(|| mu_exceeds(d, guards)).flatten(),
            want_omega.then(|| omega_exceeds(d, guards)).flatten(),
        ];
        if let Some(reason) = refusal.into_iter().flatten().next() {
            return Err(CliError::usage(format!("refusing --exact: {reason}")));
        }
    }
    let finest = d.structure().finest().clone();
    let mut r = Report::new(&["quantity", "value", "exact", "witness"]);
    let mut exact_both = true;
    if want_mu {
        if mu_exceeds(d, guards).is_none() {
            let m = exact_mu(d, guards)?;
            r.row([
                "mu".into(),
                rat(&m.value),
                flag(true),
                format!("F={}", m.witness_f),
            ]);
        } else {
            exact_both = false;
            let f = d.structure().ground().full();
            let v = mu_lower_bound(d, &f, d.group())?;
            r.row(["mu_witness".into(), rat(&v), flag(false), format!("F={f}")]);
        }
    }
    if want_omega {
        if omega_exceeds(d, guards).is_none() {
            let o = exact_omega(d, guards)?;
            match o.value() {
                Some(v) => r.row([
                    "omega".into(),
                    rat(&v),
                    flag(true),
                    format!("U={};V={}", o.witness_u, o.witness_v),
                ]),
                None => {
                    r.row([
                        "omega_lower".into(),
                        rat(&o.lower),
                        flag(true),
                        String::new(),
                    ]);
                    r.row([
                        "omega_upper".into(),
                        rat(&o.upper),
                        flag(true),
                        format!("V={}", o.witness_v),
                    ]);
                }
            }
        } else {
            exact_both = false;
            let (v, w) = omega_upper_search(d, d.group(), &finest, std::slice::from_ref(&finest))?;
            r.row([
                "omega_candidate".into(),
                rat(&v),
                flag(false),
                format!("V={w}"),
            ]);
        }
    }
    if want_ratio {
        let v = free_product_ratio(d, d.group(), &finest)?;
        r.row(["ratio".into(), rat(&v), flag(true), format!("V={finest}")]);
    }
    let mut status = Status::Ok;
    if want_mu && want_omega && exact_both {
        let rep = check_inequalities(d, guards)?;
        let holds = rep.holds();
        r.row([
            "inequalities".into(),
            if holds { "holds" } else { "violated" }.into(),
            flag(true),
            rep.verdict,
        ]);
        if !holds {
            status = Status::Failure;
        }
    }
    Ok((r, status))
}

fn grid_for(
    space: &MetricSpace,
    file_grid: Option<GridSpec>,
    flag_grid: Option<GridSpec>,
) -> GridSpec {
    flag_grid.or(file_grid).unwrap_or_else(|| {
        // From radius 1 down to just below the least positive distance.
        let to = match space.min_positive_distance() {
            None => 2,
            Some(d) => (0u32..30)
                .find(|&j| Rational::new(1, 1i64 << j) <= d)
                .unwrap_or(30)
                .max(2),
        };
        GridSpec {
            base: 2,
            from: 0,
            to,
        }
    })
}

pub fn gamma_sweep(inst: &Instance, grid: Option<GridSpec>) -> CliResult<Outcome> {
    let (space, _, _, file_grid) = metric(inst)?;
    let spec = grid_for(space, file_grid, grid);
    let radii = spec.grid()?;
    let mut r = Report::new(&["j", "radius", "gamma"]);
    for (i, radius) in radii.radii().iter().enumerate() {
        r.row([
            (spec.from as usize + i).to_string(),
            rat(radius),
            gamma(space, radius)?.to_string(),
        ]);
    }
    Ok((r, Status::Ok))
}

pub fn dimension(inst: &Instance, grid: Option<GridSpec>) -> CliResult<Outcome> {
    let (space, _, _, file_grid) = metric(inst)?;
    let spec = grid_for(space, file_grid, grid);
    let rep = dimension_slope(space, &spec.grid()?)?;
    let mut r = Report::new(&["j", "radius", "gamma", "ratio"]);
    for (i, p) in rep.points.iter().enumerate() {
        r.row([
            (spec.from as usize + i).to_string(),
            rat(&p.radius),
            p.gamma.to_string(),
            float(p.ratio),
        ]);
    }
    r.row([
        "slope".into(),
        String::new(),
        String::new(),
        float(rep.slope),
    ]);
    Ok((r, Status::Ok))
}

pub fn entropy(inst: &Instance, n_max: usize, radii: Option<(usize, usize)>) -> CliResult<Outcome> {
    let s = subshift(inst)?;
    let rep = entropy_estimate(s, n_max)?;
    let mut r = Report::new(&["quantity", "index", "value"]);
    for p in &rep.trace {
        r.row([
            "join_complexity".into(),
            p.n.to_string(),
            p.join_complexity.to_string(),
        ]);
        r.row(["h".into(), p.n.to_string(), float(p.h)]);
    }
    r.row(["estimate".into(), n_max.to_string(), float(rep.estimate)]);
    r.row([
        "per_symbol".into(),
        n_max.to_string(),
        float(rep.per_symbol),
    ]);
    if s.alphabet_size().is_some() {
        let lambda = spectral_oracle(s)?;
        r.row(["spectral_per_symbol".into(), String::new(), float(lambda)]);
        r.row(["spectral_eta".into(), String::new(), float(2.0 * lambda)]);
    }
    let mut status = Status::Ok;
    if let Some((a, b)) = radii {
        let g = generator_change_check(s, a, b, n_max)?;
        r.row(["eta_a".into(), a.to_string(), float(g.eta_a)]);
        r.row(["eta_b".into(), b.to_string(), float(g.eta_b)]);
        r.row(["m".into(), String::new(), g.m.to_string()]);
        r.row(["n".into(), String::new(), g.n.to_string()]);
        r.row(["lower_slack".into(), String::new(), float(g.lower_slack)]);
        r.row(["upper_slack".into(), String::new(), float(g.upper_slack)]);
        r.row([
            "generator_change_holds".into(),
            String::new(),
            flag(g.holds()),
        ]);
        if !g.holds() {
            status = Status::Failure;
        }
    }
    Ok((r, status))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Replay {
    Thm65,
    Thm82,
    Thm93,
}

pub struct ReplayArgs {
    pub eps: Option<Rational>,
    pub n_max: Option<usize>,
    pub seed: Option<u64>,
}

pub fn replay(inst: &Instance, which: Replay, args: &ReplayArgs) -> CliResult<Outcome> {
    match which {
        Replay::Thm65 => replay_thm65(inst, args.seed.or(inst.seed())),
        Replay::Thm82 => replay_thm82(inst, args.eps.unwrap_or(Rational::new(1, 2))),
        Replay::Thm93 => replay_thm93(
            inst,
            args.eps.unwrap_or(Rational::new(1, 5)),
            args.n_max.unwrap_or(20),
        ),
    }
}

/// Points meeting each finest member at most once, scanned in `order`.
fn separated_points(d: &DynamicalInstance, order: &[usize]) -> Subset {
    let finest = d.structure().finest().members();
    let mut f = Subset::empty();
    for &x in order {
        if finest.iter().all(|m| !m.contains(x) || !m.intersects(&f)) {
            f.insert(x);
        }
    }
    f
}

fn replay_thm65(inst: &Instance, seed: Option<u64>) -> CliResult<Outcome> {
    let d = dynamical(inst)?;
    let mut order: Vec<usize> = (0..d.ground_size()).collect();
    if let Some(seed) = seed {
        order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    }
    let u1 = d.structure().finest().clone();
    let u = star_power(&u1, 2).canonicalize();
    let f = separated_points(d, &order);
    let s = d.structure();
    let e = d.group();
    let mut r = Report::new(&["quantity", "index", "value"]);
    r.row(["u".into(), String::new(), u.to_string()]);
    r.row(["u1".into(), String::new(), u1.to_string()]);
    r.row(["f".into(), String::new(), f.to_string()]);
    r.row(["f_size".into(), String::new(), f.len().to_string()]);
    r.row(["group_order".into(), String::new(), e.len().to_string()]);
    let (base_ratio, _) = omega_upper_search(d, e, &u, std::slice::from_ref(&u1))?;
    r.row(["ratio_u1".into(), String::new(), rat(&base_ratio)]);
    let mut candidates = vec![u1.clone()];
    for depth in 1..=2 {
        match excised_candidate(d, &u1, &f, depth) {
            Ok(v) => {
                let (ratio, _) = omega_upper_search(d, e, &u, std::slice::from_ref(&v))?;
                r.row(["v".into(), depth.to_string(), v.to_string()]);
                r.row([
                    "n_v".into(),
                    depth.to_string(),
                    complexity(&v, s)?.to_string(),
                ]);
                r.row(["ratio_v".into(), depth.to_string(), rat(&ratio)]);
                candidates.push(v);
            }
            Err(Error::Inadmissible { covering }) => {
                r.row([
                    "v".into(),
                    depth.to_string(),
                    format!("inadmissible {covering}"),
                ]);
            }
            Err(e) => return Err(e.into()),
        }
    }
    let (best, witness) = omega_upper_search(d, e, &u, &candidates)?;
    r.row(["best_ratio".into(), String::new(), rat(&best)]);
    r.row(["witness_v".into(), String::new(), witness.to_string()]);
    Ok((r, Status::Ok))
}

fn replay_thm82(inst: &Instance, eps: Rational) -> CliResult<Outcome> {
    let (space, gens, cover, _) = metric(inst)?;
    let u = match cover {
        Some(c) => c.clone(),
        None => ball_cover(space, &Rational::new(1, 2))?,
    };
    let gens: Vec<Perm> = if gens.is_empty() {
        vec![Perm::identity(space.size())]
    } else {
        gens.to_vec()
    };
    let rep = thm82_replay(space, &gens, &u, &eps)?;
    let mut r = Report::new(&["quantity", "index", "value"]);
    r.row(["eps".into(), String::new(), rat(&rep.eps)]);
    r.row(["l".into(), String::new(), rep.l.to_string()]);
    r.row(["k".into(), String::new(), rep.k.to_string()]);
    r.row(["m".into(), String::new(), rep.m.to_string()]);
    r.row([
        "truncation".into(),
        String::new(),
        rep.truncation().to_string(),
    ]);
    for (j, g) in rep.gammas.iter().enumerate() {
        r.row(["gamma".into(), j.to_string(), g.to_string()]);
    }
    let Some(n) = rep.n else {
        r.row(["n", "", "not found"]);
        return Ok((r, Status::Inconclusive));
    };
    r.row(["n".into(), String::new(), n.to_string()]);
    r.row(["net_size".into(), String::new(), rep.net.len().to_string()]);
    r.row(["n_v".into(), String::new(), rep.n_v.to_string()]);
    r.row([
        "gamma_n".into(),
        String::new(),
        rep.gammas[n as usize].to_string(),
    ]);
    r.row(["u_refines_v".into(), String::new(), flag(rep.u_refines_v)]);
    for (i, step) in rep.steps.iter().enumerate() {
        r.row([
            "generator".into(),
            i.to_string(),
            step.generator.to_string(),
        ]);
        r.row([
            "join_complexity".into(),
            i.to_string(),
            step.join_complexity.to_string(),
        ]);
        r.row(["ratio".into(), i.to_string(), rat(&step.ratio)]);
    }
    r.row(["max_ratio".into(), String::new(), rat(&rep.max_ratio())]);
    r.row([
        "max_ratio_float".into(),
        String::new(),
        float(to_f64(&rep.max_ratio())),
    ]);
    let ok = rep.succeeded();
    r.row(["succeeded".into(), String::new(), flag(ok)]);
    Ok((r, if ok { Status::Ok } else { Status::Failure }))
}

fn replay_thm93(inst: &Instance, eps: Rational, n_max: usize) -> CliResult<Outcome> {
    let s = subshift(inst)?;
    let rep = thm93_replay(s, &eps, n_max)?;
    let mut r = Report::new(&["quantity", "index", "value"]);
    r.row(["eps".into(), String::new(), rat(&rep.eps)]);
    for (n, c) in rep.join_complexities.iter().enumerate() {
        r.row(["join_complexity".into(), n.to_string(), c.to_string()]);
    }
    let Some(n) = rep.n else {
        r.row(["n", "", "not found"]);
        return Ok((r, Status::Inconclusive));
    };
    let certified = rep.certified_ratio.as_ref().expect("set with n");
    let direct = rep.direct_ratio.as_ref().expect("set with n");
    r.row(["n".into(), String::new(), n.to_string()]);
    r.row([
        "certified_ratio".into(),
        String::new(),
        format!("{}/{}", certified.numer(), certified.denom()),
    ]);
    r.row([
        "direct_ratio".into(),
        String::new(),
        format!("{}/{}", direct.numer(), direct.denom()),
    ]);
    r.row([
        "witness_v".into(),
        String::new(),
        rep.witness().expect("set with n"),
    ]);
    Ok((r, Status::Ok))
}
