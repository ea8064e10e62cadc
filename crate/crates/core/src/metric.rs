//! Finite pseudo-metric spaces: open balls, covering numbers `γ(r)`,
//! grid estimates of entropic dimension, Lipschitz levels of point maps, and
//! the dyadic net construction showing `ω = 1` for slowly growing `γ`.
//!
//! Distances are exact rationals held as integer numerators over one common
//! denominator, so ball membership and the triangle inequality are integer
//! comparisons.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{CheckedDiv, One, Signed};

use crate::covering::{join, refines, Covering, GroundSet};
use crate::dynamics::image_cover;
use crate::error::{Error, Result};
use crate::guards::Guards;
use crate::perm::Perm;
use crate::rational::Rational;
use crate::setcover::min_cover;
use crate::subset::{Subset, MAX_GROUND};
use crate::uniformity::{complexity, is_admissible, UniformStructure};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MetricSpace {
    size: usize,
    scale: i64,
    // Row-major; d(x, y) = num[x * size + y] / scale.
    num: Vec<i64>,
}

impl MetricSpace {
    /// Validates zero diagonal, symmetry, non-negativity and the triangle
    /// inequality.
    pub fn new(table: &[Vec<Rational>]) -> Result<MetricSpace> {
        let n = table.len();
        if n == 0 {
            return Err(Error::EmptyGround);
        }
        if n > MAX_GROUND {
            return Err(Error::CapExceeded {
                what: "metric points",
                size: n,
                cap: MAX_GROUND,
            });
        }
        let mut scale: i64 = 1;
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidMetric(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            for d in row {
                let l = scale.lcm(d.denom());
                if l <= 0 || l > i64::MAX / (1 << 20) {
                    return Err(Error::InvalidMetric("common denominator too large".into()));
                }
                scale = l;
            }
        }
        let mut num = Vec::with_capacity(n * n);
        for row in table {
            for d in row {
                let v = (*d * Rational::from_integer(scale)).to_integer();
                num.push(v);
            }
        }
        MetricSpace::from_scaled(n, scale, num)
    }

    /// `d(x, y) = num[x * size + y] / scale`.
    pub fn from_scaled(size: usize, scale: i64, num: Vec<i64>) -> Result<MetricSpace> {
        if size == 0 {
            return Err(Error::EmptyGround);
        }
        if size > MAX_GROUND {
            return Err(Error::CapExceeded {
                what: "metric points",
                size,
                cap: MAX_GROUND,
            });
        }
        if num.len() != size * size || scale <= 0 {
            return Err(Error::InvalidMetric("malformed distance table".into()));
        }
        let m = MetricSpace { size, scale, num };
        for x in 0..size {
            if m.raw(x, x) != 0 {
                return Err(Error::InvalidMetric(format!("d({x},{x}) is not zero")));
            }
            for y in 0..size {
                let d = m.raw(x, y);
                if d < 0 {
                    return Err(Error::InvalidMetric(format!("d({x},{y}) is negative")));
                }
                if d != m.raw(y, x) {
                    return Err(Error::InvalidMetric(format!("d({x},{y}) != d({y},{x})")));
                }
            }
        }
        for y in 0..size {
            for x in 0..size {
                let dxy = m.raw(x, y) as i128;
                for z in 0..size {
                    if m.raw(x, z) as i128 > dxy + m.raw(y, z) as i128 {
                        return Err(Error::InvalidMetric(format!(
                            "triangle inequality fails for ({x},{y},{z})"
                        )));
                    }
                }
            }
        }
        Ok(m)
    }

    /// `2^level` points of the middle-thirds construction at depth
    /// `level`, at mutual distance `|a − b| / 3^level`.
    pub fn cantor(level: u32) -> Result<MetricSpace> {
        if level > 9 {
            return Err(Error::CapExceeded {
                what: "cantor level",
                size: level as usize,
                cap: 9,
            });
        }
        let n = 1usize << level;
        let pos: Vec<i64> = (0..n)
            .map(|i| {
                (0..level).fold(0i64, |acc, b| {
                    let digit = ((i >> (level - 1 - b)) & 1) as i64 * 2;
                    acc * 3 + digit
                })
            })
            .collect();
        let num = (0..n * n)
            .map(|k| (pos[k / n] - pos[k % n]).abs())
            .collect();
        MetricSpace::from_scaled(n, 3i64.pow(level), num)
    }

    /// `points` equally spaced points on a circle, arc-length metric.
    pub fn circle(points: usize, circumference: Rational) -> Result<MetricSpace> {
        if points == 0 {
            return Err(Error::EmptyGround);
        }
        if !circumference.is_positive() {
            return Err(Error::InvalidMetric(
                "circumference must be positive".into(),
            ));
        }
        if points > MAX_GROUND {
            return Err(Error::CapExceeded {
                what: "metric points",
                size: points,
                cap: MAX_GROUND,
            });
        }
        // d = min(k, n − k) · C / n = min(k, n − k) · p / (q n).
        let too_large = || Error::InvalidMetric("circumference too large to scale".into());
        let scale = circumference
            .denom()
            .checked_mul(points as i64)
            .ok_or_else(too_large)?;
        let p = *circumference.numer();
        let num = (0..points * points)
            .map(|k| {
                let step = (k / points).abs_diff(k % points);
                (step.min(points - step) as i64)
                    .checked_mul(p)
                    .ok_or_else(too_large)
            })
            .collect::<Result<Vec<_>>>()?;
        MetricSpace::from_scaled(points, scale, num)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn ground(&self) -> GroundSet {
        GroundSet::new(self.size).expect("validated size")
    }

    fn raw(&self, x: usize, y: usize) -> i64 {
        self.num[x * self.size + y]
    }

    pub fn dist(&self, x: usize, y: usize) -> Rational {
        Rational::new(self.raw(x, y), self.scale)
    }

    pub fn table(&self) -> Vec<Vec<Rational>> {
        (0..self.size)
            .map(|x| (0..self.size).map(|y| self.dist(x, y)).collect())
            .collect()
    }

    pub fn diameter(&self) -> Rational {
        Rational::new(self.num.iter().copied().max().unwrap_or(0), self.scale)
    }

    pub fn min_positive_distance(&self) -> Option<Rational> {
        self.num
            .iter()
            .copied()
            .filter(|&d| d > 0)
            .min()
            .map(|d| Rational::new(d, self.scale))
    }

    /// `d(x, y) < r`.
    fn closer_than(&self, x: usize, y: usize, r: &Rational) -> bool {
        (self.raw(x, y) as i128) * (*r.denom() as i128)
            < (*r.numer() as i128) * (self.scale as i128)
    }

    /// `B(x, r) = {y : d(x, y) < r}`.
    pub fn ball(&self, x: usize, r: &Rational) -> Subset {
        (0..self.size)
            .filter(|&y| self.closer_than(x, y, r))
            .collect()
    }

    /// Classes of the relation `d(x, y) = 0`.
    pub fn zero_classes(&self) -> Vec<Subset> {
        let mut seen = Subset::empty();
        let mut out = Vec::new();
        for x in 0..self.size {
            if seen.contains(x) {
                continue;
            }
            let c: Subset = (0..self.size).filter(|&y| self.raw(x, y) == 0).collect();
            seen = seen | c;
            out.push(c);
        }
        out
    }
}

fn check_radius(r: &Rational) -> Result<()> {
    if !r.is_positive() {
        return Err(Error::Precondition {
            precondition: "r > 0",
            detail: format!("r = {r}"),
        });
    }
    Ok(())
}

/// `{B(x, r) : x ∈ X}`, canonicalized.
pub fn ball_cover(m: &MetricSpace, r: &Rational) -> Result<Covering> {
    check_radius(r)?;
    Covering::canonical(m.ground(), (0..m.size).map(|x| m.ball(x, r)).collect())
}

/// The uniformity of a finite pseudo-metric space: the single base
/// partitioning points at distance zero.
pub fn metric_structure(m: &MetricSpace) -> UniformStructure {
    let base = Covering::canonical(m.ground(), m.zero_classes()).expect("classes cover");
    UniformStructure::new(vec![base]).expect("a single base is a chain")
}

/// Ball coverings along the grid, coarsest first. Consecutive radii must
/// shrink by a factor of at least 4.
pub fn grid_structure(m: &MetricSpace, grid: &RadiusGrid) -> Result<UniformStructure> {
    let quarter = Rational::new(1, 4);
    for w in grid.radii.windows(2) {
        if w[1] / w[0] > quarter {
            return Err(Error::Precondition {
                precondition: "grid factor",
                detail: format!("{} / {} exceeds 1/4", w[1], w[0]),
            });
        }
    }
    let bases = grid
        .radii
        .iter()
        .map(|r| ball_cover(m, r))
        .collect::<Result<Vec<_>>>()?;
    UniformStructure::new(bases)
}

/// Centres of a minimum covering by radius-`r` balls.
pub fn gamma_centres(m: &MetricSpace, r: &Rational) -> Result<Vec<usize>> {
    check_radius(r)?;
    let balls: Vec<Subset> = (0..m.size).map(|x| m.ball(x, r)).collect();
    min_cover(m.size, &balls).ok_or_else(|| Error::Assertion("balls always cover".into()))
}

/// `γ(r)`: least number of radius-`r` balls covering the space.
pub fn gamma(m: &MetricSpace, r: &Rational) -> Result<usize> {
    gamma_centres(m, r).map(|c| c.len())
}

/// `γ(r)` by enumerating centre sets in order of size.
pub fn gamma_bruteforce(m: &MetricSpace, r: &Rational, guards: &Guards) -> Result<usize> {
    check_radius(r)?;
    let n = m.size;
    if n > guards.bruteforce_ground {
        return Err(Error::CapExceeded {
            what: "brute-force ground",
            size: n,
            cap: guards.bruteforce_ground,
        });
    }
    let balls: Vec<Subset> = (0..n).map(|x| m.ball(x, r)).collect();
    let full = Subset::full(n);
    (1u64..1 << n)
        .filter(|mask| {
            (0..n)
                .filter(|i| mask & (1 << i) != 0)
                .fold(Subset::empty(), |a, i| a | balls[i])
                == full
        })
        .map(|mask| mask.count_ones() as usize)
        .min()
        .ok_or_else(|| Error::Assertion("balls always cover".into()))
}

fn overflow(base: i64, exp: usize) -> Error {
    Error::Precondition {
        precondition: "representable radius",
        detail: format!("{base}^-{exp} does not fit a 64-bit rational"),
    }
}

/// Strictly decreasing positive radii.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RadiusGrid {
    radii: Vec<Rational>,
}

impl RadiusGrid {
    pub fn new(radii: Vec<Rational>) -> Result<RadiusGrid> {
        if radii.is_empty() {
            return Err(Error::EmptyList);
        }
        for r in &radii {
            check_radius(r)?;
        }
        if radii.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::Precondition {
                precondition: "decreasing radii",
                detail: "radii must strictly decrease".into(),
            });
        }
        Ok(RadiusGrid { radii })
    }

    /// `r₀ · q^{-i}` for `i` in `0..count`.
    pub fn geometric(r0: Rational, q: i64, count: usize) -> Result<RadiusGrid> {
        if q < 2 {
            return Err(Error::Precondition {
                precondition: "factor >= 2",
                detail: format!("q = {q}"),
            });
        }
        let radii = (0..count)
            .map(|i| {
                let d = u32::try_from(i).ok().and_then(|i| q.checked_pow(i));
                d.and_then(|d| r0.checked_div(&Rational::from_integer(d)))
                    .ok_or_else(|| overflow(q, i))
            })
            .collect::<Result<Vec<_>>>()?;
        RadiusGrid::new(radii)
    }

    /// `base^{-from}, …, base^{-to}`.
    pub fn powers(base: i64, from: u32, to: u32) -> Result<RadiusGrid> {
        if base < 2 {
            return Err(Error::Precondition {
                precondition: "base >= 2",
                detail: format!("base = {base}"),
            });
        }
        let radii = (from..=to)
            .map(|j| {
                base.checked_pow(j)
                    .map(|d| Rational::new(1, d))
                    .ok_or_else(|| overflow(base, j as usize))
            })
            .collect::<Result<Vec<_>>>()?;
        RadiusGrid::new(radii)
    }

    pub fn radii(&self) -> &[Rational] {
        &self.radii
    }
}

/// One grid point of a slope estimate.
#[derive(Clone, Debug, PartialEq)]
pub struct SlopePoint {
    pub radius: Rational,
    pub gamma: usize,
    /// `−log₂ γ(r) / log₂ r`.
    pub ratio: f64,
}

/// Least-squares estimate of entropic dimension on a finite grid. Every
/// finite space has dimension zero; this is a slope, not a limit.
#[derive(Clone, Debug, PartialEq)]
pub struct SlopeReport {
    pub slope: f64,
    pub points: Vec<SlopePoint>,
}

/// Slope of `log₂ γ(r)` against `−log₂ r` over the grid.
pub fn dimension_slope(m: &MetricSpace, grid: &RadiusGrid) -> Result<SlopeReport> {
    if grid.radii.len() < 3 || grid.radii.iter().any(|r| *r >= Rational::one()) {
        return Err(Error::Precondition {
            precondition: "grid",
            detail: "need at least 3 radii, all below 1".into(),
        });
    }
    let mut points = Vec::with_capacity(grid.radii.len());
    for r in &grid.radii {
        let g = gamma(m, r)?;
        let x = -crate::rational::to_f64(r).log2();
        points.push(SlopePoint {
            radius: *r,
            gamma: g,
            ratio: (g as f64).log2() / x,
        });
    }
    let xs: Vec<f64> = points
        .iter()
        .map(|p| -crate::rational::to_f64(&p.radius).log2())
        .collect();
    let ys: Vec<f64> = points.iter().map(|p| (p.gamma as f64).log2()).collect();
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx == 0.0 {
        return Err(Error::Precondition {
            precondition: "grid",
            detail: "zero variance in radii".into(),
        });
    }
    Ok(SlopeReport {
        slope: sxy / sxx,
        points,
    })
}

/// Least `l` with `d(h(x), h(y)) ≤ 2^l d(x, y)` for `h = g` and `h = g⁻¹`.
pub fn lipschitz_level(m: &MetricSpace, g: &Perm) -> Result<u32> {
    if g.degree() != m.size {
        return Err(Error::InvalidPermutation(format!(
            "{g} does not act on {} points",
            m.size
        )));
    }
    let inv = g.inverse();
    let mut level = 0u32;
    for h in [g, &inv] {
        for x in 0..m.size {
            for y in 0..m.size {
                let (d, e) = (m.raw(x, y) as i128, m.raw(h.apply(x), h.apply(y)) as i128);
                if d == 0 {
                    if e != 0 {
                        return Err(Error::Precondition {
                            precondition: "lipschitz",
                            detail: format!("d({x},{y}) = 0 but its image is positive"),
                        });
                    }
                    continue;
                }
                while e > d << level {
                    level += 1;
                }
            }
        }
    }
    Ok(level)
}

/// Least `n` with `a_{n+k} ≤ (1 + eps) a_n`, or `None` within the list.
pub fn stable_index(a: &[BigRational], k: usize, eps: &Rational) -> Result<Option<usize>> {
    if !eps.is_positive() {
        return Err(Error::Precondition {
            precondition: "eps > 0",
            detail: format!("eps = {eps}"),
        });
    }
    if a.iter().any(|x| x < &BigRational::one()) {
        return Err(Error::Precondition {
            precondition: "terms >= 1",
            detail: "sequence has a term below 1".into(),
        });
    }
    let bound = BigRational::one()
        + BigRational::new(BigInt::from(*eps.numer()), BigInt::from(*eps.denom()));
    Ok((0..a.len().saturating_sub(k)).find(|&n| a[n + k] <= &a[n] * &bound))
}

pub fn stable_index_usize(a: &[usize], k: usize, eps: &Rational) -> Result<Option<usize>> {
    let big: Vec<BigRational> = a
        .iter()
        .map(|&x| BigRational::from_integer(BigInt::from(x)))
        .collect();
    stable_index(&big, k, eps)
}

/// `2^{-j}`.
pub fn dyadic(j: u32) -> Rational {
    Rational::new(1, 1i64 << j)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorStep {
    pub generator: Perm,
    /// `N(𝒱 ∨ g𝒱)`.
    pub join_complexity: usize,
    /// `N(𝒱 ∨ g𝒱) / N(𝒱)`.
    pub ratio: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Thm82Report {
    /// Largest Lipschitz level over the generators.
    pub l: u32,
    /// Least `m` with `𝒰 ⪯ {B(x, 2^{-m})}`.
    pub m: u32,
    /// Window `k = l + 2`.
    pub k: u32,
    pub eps: Rational,
    /// `γ(2^{-j})` for `j = 0..=truncation`.
    pub gammas: Vec<usize>,
    /// Least `n ≥ m` with `γ(2^{-(n+k)}) ≤ (1 + eps) γ(2^{-n})`.
    pub n: Option<u32>,
    /// `|F| = γ(2^{-(n+k)})`.
    pub net: Vec<usize>,
    /// `𝒱 = {B(x, 2^{-n}) : x ∈ F}`.
    pub v: Option<Covering>,
    pub n_v: usize,
    pub u_refines_v: bool,
    pub steps: Vec<GeneratorStep>,
}

impl Thm82Report {
    pub fn truncation(&self) -> usize {
        self.gammas.len() - 1
    }

    pub fn max_ratio(&self) -> Rational {
        self.steps
            .iter()
            .map(|s| s.ratio)
            .max()
            .unwrap_or_else(Rational::one)
    }

    /// Every proof step held and the ratio bound is met.
    pub fn succeeded(&self) -> bool {
        let Some(n) = self.n else { return false };
        let bound = Rational::one() + self.eps;
        let gamma_n = self.gammas[n as usize];
        let gamma_nk = self.gammas[(n + self.k) as usize];
        self.u_refines_v
            && self.n_v >= gamma_n
            && self
                .steps
                .iter()
                .all(|s| s.join_complexity <= gamma_nk && s.ratio <= bound)
    }
}

/// Replays the dyadic net construction: a minimal `2^{-(n+l+2)}`-net `F`
/// whose `2^{-n}` balls form `𝒱` with `N(𝒱 ∨ g𝒱) ≤ (1 + eps) N(𝒱)`.
pub fn thm82_replay(
    m: &MetricSpace,
    gens: &[Perm],
    u: &Covering,
    eps: &Rational,
) -> Result<Thm82Report> {
    let s = metric_structure(m);
    if !is_admissible(u, &s)? {
        return Err(Error::Inadmissible {
            covering: u.to_string(),
        });
    }
    let mut l = 0;
    for g in gens {
        l = l.max(lipschitz_level(m, g)?);
    }
    let k = l + 2;
    // Below the least positive distance balls are zero classes and γ is
    // constant, so the sequence is stable within `k` more steps.
    let floor = match m.min_positive_distance() {
        None => 0,
        Some(d) => (0..62).find(|&j| dyadic(j) <= d).unwrap_or(62),
    };
    let mut m_idx = None;
    for j in 0..=floor {
        if refines(u, &ball_cover(m, &dyadic(j))?)? {
            m_idx = Some(j);
            break;
        }
    }
    let m_idx =
        m_idx.ok_or_else(|| Error::Assertion(format!("no dyadic ball cover refines {u}")))?;
    let truncation = floor.max(m_idx) + k;
    if truncation > 62 {
        return Err(Error::CapExceeded {
            what: "dyadic depth",
            size: truncation as usize,
            cap: 62,
        });
    }
    let gammas = (0..=truncation)
        .map(|j| gamma(m, &dyadic(j)))
        .collect::<Result<Vec<_>>>()?;
    let tail = &gammas[m_idx as usize..];
    let n = stable_index_usize(tail, k as usize, eps)?.map(|i| m_idx + i as u32);
    let mut report = Thm82Report {
        l,
        m: m_idx,
        k,
        eps: *eps,
        gammas,
        n,
        net: Vec::new(),
        v: None,
        n_v: 0,
        u_refines_v: false,
        steps: Vec::new(),
    };
    let Some(n) = n else { return Ok(report) };
    let net = gamma_centres(m, &dyadic(n + k))?;
    let r = dyadic(n);
    let v = Covering::canonical(m.ground(), net.iter().map(|&x| m.ball(x, &r)).collect())?;
    let n_v = complexity(&v, &s)?;
    report.u_refines_v = refines(u, &v)?;
    for g in gens {
        let j = join(&[v.clone(), image_cover(g, &v)?])?;
        let nj = complexity(&j, &s)?;
        report.steps.push(GeneratorStep {
            generator: g.clone(),
            join_complexity: nj,
            ratio: Rational::new(nj as i64, n_v as i64),
        });
    }
    report.net = net;
    report.v = Some(v);
    report.n_v = n_v;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::parse_rational;
    use num_traits::Zero;

    fn q(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    fn equilateral() -> MetricSpace {
        let one = Rational::one();
        let z = Rational::zero();
        MetricSpace::new(&[vec![z, one, one], vec![one, z, one], vec![one, one, z]]).unwrap()
    }

    fn path3() -> MetricSpace {
        let t = |v: i64| Rational::from_integer(v);
        MetricSpace::new(&[
            vec![t(0), t(1), t(2)],
            vec![t(1), t(0), t(1)],
            vec![t(2), t(1), t(0)],
        ])
        .unwrap()
    }

    #[test]
    fn validation() {
        let z = Rational::zero();
        let one = Rational::one();
        assert!(MetricSpace::new(&[vec![one]]).is_err());
        assert!(MetricSpace::new(&[vec![z, one], vec![q("1/2"), z]]).is_err());
        let t = |v: i64| Rational::from_integer(v);
        let bad = [
            vec![t(0), t(1), t(5)],
            vec![t(1), t(0), t(1)],
            vec![t(5), t(1), t(0)],
        ];
        assert!(matches!(
            MetricSpace::new(&bad),
            Err(Error::InvalidMetric(_))
        ));
    }

    #[test]
    fn ball_cover_examples() {
        let m = equilateral();
        assert_eq!(ball_cover(&m, &q("2")).unwrap().to_string(), "{{0,1,2}}");
        assert_eq!(
            ball_cover(&m, &q("1")).unwrap(),
            Covering::singletons(m.ground())
        );
        assert_eq!(
            ball_cover(&path3(), &q("3/2")).unwrap().to_string(),
            "{{0,1,2}}"
        );
        assert!(ball_cover(&m, &q("0")).is_err());
    }

    #[test]
    fn gamma_examples() {
        let m = equilateral();
        assert_eq!(gamma(&m, &q("1/2")).unwrap(), 3);
        assert_eq!(gamma(&m, &q("3/2")).unwrap(), 1);
        assert_eq!(gamma(&path3(), &q("3/2")).unwrap(), 1);
        assert_eq!(gamma(&path3(), &q("1")).unwrap(), 3);
        assert_eq!(
            gamma_bruteforce(&path3(), &q("3/2"), &Guards::default()).unwrap(),
            1
        );
    }

    #[test]
    fn cantor_gamma_is_a_power_of_two() {
        let m = MetricSpace::cantor(8).unwrap();
        assert_eq!(m.size(), 256);
        for j in 1..=5u32 {
            let r = Rational::new(1, 3i64.pow(j));
            assert_eq!(gamma(&m, &r).unwrap(), 1 << j, "j = {j}");
        }
    }

    #[test]
    fn cantor_slope() {
        let m = MetricSpace::cantor(8).unwrap();
        let grid = RadiusGrid::powers(3, 1, 5).unwrap();
        let rep = dimension_slope(&m, &grid).unwrap();
        assert!((rep.slope - 1.0 / 3f64.log2()).abs() < 1e-9);
    }

    #[test]
    fn circle_gammas() {
        let m = MetricSpace::circle(256, q("710/113")).unwrap();
        let got: Vec<usize> = (0..=6).map(|j| gamma(&m, &dyadic(j)).unwrap()).collect();
        assert_eq!(got, vec![4, 7, 13, 24, 52, 86, 256]);
    }

    #[test]
    fn single_point() {
        let m = MetricSpace::new(&[vec![Rational::zero()]]).unwrap();
        let rep = dimension_slope(&m, &RadiusGrid::powers(2, 1, 4).unwrap()).unwrap();
        assert_eq!(rep.slope, 0.0);
        let id = Perm::identity(1);
        let rep = thm82_replay(&m, &[id], &Covering::whole(m.ground()), &q("1/2")).unwrap();
        assert!(rep.succeeded());
        assert_eq!(rep.max_ratio(), Rational::one());
    }

    #[test]
    fn grids() {
        assert!(RadiusGrid::new(vec![q("1/2"), q("1/2")]).is_err());
        assert!(RadiusGrid::new(vec![q("-1")]).is_err());
        let g = RadiusGrid::geometric(q("1"), 4, 3).unwrap();
        assert_eq!(g.radii(), &[q("1"), q("1/4"), q("1/16")]);
        let m = MetricSpace::cantor(4).unwrap();
        assert!(grid_structure(&m, &RadiusGrid::powers(4, 0, 3).unwrap()).is_ok());
        assert!(grid_structure(&m, &RadiusGrid::powers(2, 0, 3).unwrap()).is_err());
        assert!(RadiusGrid::powers(0, 1, 2).is_err());
        assert!(RadiusGrid::powers(1, 1, 2).is_err());
        assert!(RadiusGrid::powers(3, 1, 60).is_err());
        assert_eq!(
            RadiusGrid::powers(2, 62, 62).unwrap().radii(),
            &[Rational::new(1, 1 << 62)]
        );
        assert!(RadiusGrid::geometric(q("1"), 2, 70).is_err());
    }

    #[test]
    fn lipschitz_examples() {
        let m = MetricSpace::circle(8, q("8")).unwrap();
        assert_eq!(lipschitz_level(&m, &Perm::rotation(8, 3)).unwrap(), 0);
        assert_eq!(lipschitz_level(&m, &Perm::identity(8)).unwrap(), 0);
        let t = |v: i64| Rational::from_integer(v);
        // Points 0, 1, 3 on a line; swapping 0 and 1 turns d(1,3) = 2 into 3.
        let line = MetricSpace::new(&[
            vec![t(0), t(1), t(3)],
            vec![t(1), t(0), t(2)],
            vec![t(3), t(2), t(0)],
        ])
        .unwrap();
        let swap = Perm::from_cycles(3, &[&[0, 1]]).unwrap();
        assert_eq!(lipschitz_level(&line, &swap).unwrap(), 1);
    }

    #[test]
    fn stable_index_examples() {
        let eps = q("1/2");
        assert_eq!(stable_index_usize(&[3, 3, 3], 2, &eps).unwrap(), Some(0));
        // a_n = n + 1: (n + 2)/(n + 1) ≤ 3/2 first at n = 1.
        let lin: Vec<usize> = (1..=10).collect();
        assert_eq!(stable_index_usize(&lin, 1, &eps).unwrap(), Some(1));
        let exp: Vec<usize> = (0..20).map(|n| 1 << n).collect();
        assert_eq!(stable_index_usize(&exp, 1, &q("1/10")).unwrap(), None);
        assert_eq!(stable_index_usize(&[1], 1, &eps).unwrap(), None);
    }

    #[test]
    fn thm82_on_cantor_with_identity() {
        let m = MetricSpace::cantor(5).unwrap();
        let u = ball_cover(&m, &q("1/2")).unwrap();
        let rep = thm82_replay(&m, &[Perm::identity(32)], &u, &q("1/2")).unwrap();
        assert!(rep.succeeded());
        assert_eq!(rep.max_ratio(), Rational::one());
    }
}
