//! Shift spaces acted on by `⟨σ⟩`, with generator ball `E = {σ⁻¹, id, σ}`.
//!
//! The join of `g(𝒰)` over `g ∈ E^n`, for `𝒰` the partition into
//! 1-cylinders, is the partition into cylinders on the window `[−n, n]`.
//! Its cells are disjoint and non-empty, so every admissible covering
//! refining it has one member per cell, and `N` of the join is the number of
//! admissible words of length `2n + 1`. All complexities here are word
//! counts, exact as big integers.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::metric::stable_index;
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Allowed transitions between the symbols that survive trimming.
    Sft {
        matrix: Vec<Vec<bool>>,
        kept: Vec<usize>,
    },
    /// `counts[i] = W(i + 1)`.
    Table { counts: Vec<BigUint> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubshiftSpec {
    pub label: String,
    pub mode: Mode,
}

impl SubshiftSpec {
    /// A shift of finite type. Symbols with no predecessor or no successor
    /// are removed until none remain; an empty result has no bi-infinite
    /// path.
    pub fn sft(label: impl Into<String>, matrix: &[Vec<u8>]) -> Result<SubshiftSpec> {
        let k = matrix.len();
        if k == 0 {
            return Err(Error::InvalidSubshift("empty alphabet".into()));
        }
        for (i, row) in matrix.iter().enumerate() {
            if row.len() != k {
                return Err(Error::InvalidSubshift(format!(
                    "row {i} has {} entries, expected {k}",
                    row.len()
                )));
            }
            if let Some(v) = row.iter().find(|&&v| v > 1) {
                return Err(Error::InvalidSubshift(format!(
                    "row {i} has entry {v}, expected 0 or 1"
                )));
            }
        }
        let mut alive = vec![true; k];
        loop {
            let dead: Vec<usize> = (0..k)
                .filter(|&i| alive[i])
                .filter(|&i| {
                    let out = (0..k).any(|j| alive[j] && matrix[i][j] == 1);
                    let inc = (0..k).any(|j| alive[j] && matrix[j][i] == 1);
                    !(out && inc)
                })
                .collect();
            if dead.is_empty() {
                break;
            }
            for i in dead {
                alive[i] = false;
            }
        }
        let kept: Vec<usize> = (0..k).filter(|&i| alive[i]).collect();
        if kept.is_empty() {
            return Err(Error::InvalidSubshift("no bi-infinite path".into()));
        }
        let matrix = kept
            .iter()
            .map(|&i| kept.iter().map(|&j| matrix[i][j] == 1).collect())
            .collect();
        Ok(SubshiftSpec {
            label: label.into(),
            mode: Mode::Sft { matrix, kept },
        })
    }

    /// A word-count table `W(1), W(2), …`, taken as given.
    pub fn table(label: impl Into<String>, counts: Vec<BigUint>) -> Result<SubshiftSpec> {
        if counts.is_empty() {
            return Err(Error::InvalidSubshift("empty word-count table".into()));
        }
        if let Some(i) = counts.iter().position(|c| c.is_zero()) {
            return Err(Error::InvalidSubshift(format!("W({}) = 0", i + 1)));
        }
        Ok(SubshiftSpec {
            label: label.into(),
            mode: Mode::Table { counts },
        })
    }

    pub fn full_shift(k: usize) -> SubshiftSpec {
        SubshiftSpec::sft(format!("full {k}-shift"), &vec![vec![1; k]; k]).expect("non-empty")
    }

    pub fn golden_mean() -> SubshiftSpec {
        SubshiftSpec::sft("golden mean", &[vec![1, 1], vec![1, 0]]).expect("valid")
    }

    /// The cyclic permutation matrix on `k` symbols.
    pub fn periodic(k: usize) -> SubshiftSpec {
        let m: Vec<Vec<u8>> = (0..k)
            .map(|i| (0..k).map(|j| u8::from(j == (i + 1) % k)).collect())
            .collect();
        SubshiftSpec::sft(format!("period-{k} orbit"), &m).expect("valid")
    }

    /// `W(n) = n + 1` for `n ≤ len`.
    pub fn sturmian(len: usize) -> SubshiftSpec {
        SubshiftSpec::table(
            "sturmian",
            (1..=len).map(|n| BigUint::from(n + 1)).collect(),
        )
        .expect("positive")
    }

    /// Symbols after trimming; `None` for tables.
    pub fn alphabet_size(&self) -> Option<usize> {
        match &self.mode {
            Mode::Sft { matrix, .. } => Some(matrix.len()),
            Mode::Table { .. } => None,
        }
    }

    /// Longest word length with a known count.
    pub fn max_len(&self) -> Option<usize> {
        match &self.mode {
            Mode::Sft { .. } => None,
            Mode::Table { counts } => Some(counts.len()),
        }
    }
}

/// Number of admissible words of length `n` ending in each symbol.
pub fn word_count_vector(matrix: &[Vec<bool>], n: usize) -> Vec<BigUint> {
    let k = matrix.len();
    let mut v = vec![BigUint::one(); k];
    for _ in 1..n {
        v = (0..k)
            .map(|j| (0..k).filter(|&i| matrix[i][j]).map(|i| &v[i]).sum())
            .collect();
    }
    v
}

/// `W(n)`, the number of admissible words of length `n ≥ 1`.
pub fn count_words(s: &SubshiftSpec, n: usize) -> Result<BigUint> {
    if n == 0 {
        return Err(Error::Precondition {
            precondition: "n >= 1",
            detail: "word length 0".into(),
        });
    }
    match &s.mode {
        Mode::Sft { matrix, .. } => Ok(word_count_vector(matrix, n).into_iter().sum()),
        Mode::Table { counts } => counts.get(n - 1).cloned().ok_or(Error::TableExhausted {
            available: counts.len(),
            requested: n,
        }),
    }
}

/// `N(⋁_{g ∈ E^r} g(𝒰)) = W(2r + 1)`.
pub fn join_complexity(s: &SubshiftSpec, radius: usize) -> Result<BigUint> {
    count_words(s, 2 * radius + 1)
}

/// `log₂ x` for big integers.
pub fn log2_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().expect("fits").log2();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_u64().expect("64 bits");
    (top as f64).log2() + shift as f64
}

#[derive(Clone, Debug, PartialEq)]
pub struct EntropyPoint {
    pub n: usize,
    pub join_complexity: BigUint,
    /// `log₂ N(⋁_{E^n}) / n`.
    pub h: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EntropyReport {
    pub trace: Vec<EntropyPoint>,
    /// `h` at `n_max`, the tail estimate of `η_E`.
    pub estimate: f64,
    /// `estimate / 2`: entropy per symbol.
    pub per_symbol: f64,
}

/// `h_n = log₂ W(2n + 1)/n` for `n = 1..=n_max`.
pub fn entropy_estimate(s: &SubshiftSpec, n_max: usize) -> Result<EntropyReport> {
    radius_entropy(s, 1, n_max)
}

/// Tail trace for the ball `E_a` of radius `a`: `log₂ W(2an + 1)/n`.
fn radius_entropy(s: &SubshiftSpec, a: usize, n_max: usize) -> Result<EntropyReport> {
    if n_max < 4 {
        return Err(Error::Precondition {
            precondition: "n_max >= 4",
            detail: format!("n_max = {n_max}"),
        });
    }
    let trace = (1..=n_max)
        .map(|n| {
            let c = join_complexity(s, a * n)?;
            Ok(EntropyPoint {
                n,
                h: log2_big(&c) / n as f64,
                join_complexity: c,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let estimate = trace.last().expect("n_max >= 4").h;
    Ok(EntropyReport {
        trace,
        estimate,
        per_symbol: estimate / 2.0,
    })
}

/// `log₂ λ_max` of the transition matrix.
///
/// Power iteration runs on `M + I`, which has the same Perron vector and
/// no rival eigenvalue of equal modulus, so periodic matrices converge too.
pub fn spectral_oracle(s: &SubshiftSpec) -> Result<f64> {
    let Mode::Sft { matrix, .. } = &s.mode else {
        return Err(Error::InvalidSubshift(
            "spectral oracle needs a transition matrix".into(),
        ));
    };
    let k = matrix.len();
    let mut x = vec![1.0f64; k];
    let mut lambda = 0.0f64;
    for _ in 0..1_000_000 {
        let y: Vec<f64> = (0..k)
            .map(|j| x[j] + (0..k).filter(|&i| matrix[i][j]).map(|i| x[i]).sum::<f64>())
            .collect();
        let norm = y.iter().cloned().fold(0.0, f64::max);
        let (lo, hi) = (0..k)
            .filter(|&i| x[i] > 0.0)
            .map(|i| y[i] / x[i])
            .fold((f64::INFINITY, 0.0f64), |(a, b), r| (a.min(r), b.max(r)));
        x = y.iter().map(|v| v / norm).collect();
        let next = 0.5 * (lo + hi);
        if hi - lo <= 1e-12 * hi || (next - lambda).abs() <= 1e-13 * next {
            lambda = next;
            break;
        }
        lambda = next;
    }
    Ok((lambda - 1.0).log2())
}

#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorChangeReport {
    pub a: usize,
    pub b: usize,
    /// `m = ⌈b/a⌉`, least `k` with `E_b ⊆ E_a^k`.
    pub m: usize,
    /// `n = ⌈a/b⌉`, least `k` with `E_a ⊆ E_b^k`.
    pub n: usize,
    pub eta_a: f64,
    pub eta_b: f64,
    /// `η_a − η_b / m`.
    pub lower_slack: f64,
    /// `n η_b − η_a`.
    pub upper_slack: f64,
}

impl GeneratorChangeReport {
    pub fn holds(&self) -> bool {
        self.lower_slack >= 0.0 && self.upper_slack >= 0.0
    }
}

/// Compares tail estimates for the generator balls of radii `a` and `b`
/// against `η_b/m ≤ η_a ≤ n η_b`.
pub fn generator_change_check(
    s: &SubshiftSpec,
    a: usize,
    b: usize,
    n_max: usize,
) -> Result<GeneratorChangeReport> {
    if a == 0 || b == 0 {
        return Err(Error::Precondition {
            precondition: "radii >= 1",
            detail: format!("radii ({a},{b})"),
        });
    }
    let eta_a = radius_entropy(s, a, n_max)?.estimate;
    let eta_b = radius_entropy(s, b, n_max)?.estimate;
    let m = b.div_ceil(a);
    let n = a.div_ceil(b);
    Ok(GeneratorChangeReport {
        a,
        b,
        m,
        n,
        eta_a,
        eta_b,
        lower_slack: eta_a - eta_b / m as f64,
        upper_slack: n as f64 * eta_b - eta_a,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Thm93Report {
    pub eps: Rational,
    /// `N(⋁_{E^n})` for `n = 0..=n_max`.
    pub join_complexities: Vec<BigUint>,
    /// Least `n` with `N(⋁_{E^{n+1}}) ≤ (1 + eps) N(⋁_{E^n})`.
    pub n: Option<usize>,
    /// `N(⋁_{E^{n+1}}) / N(⋁_{E^n})`, bounding `N(𝒱 ∨ g𝒱)/N(𝒱)` for
    /// `g ∈ E` with `𝒱` the radius-`n` cylinders.
    pub certified_ratio: Option<BigRational>,
    /// `max_{g ∈ E} N(𝒱 ∨ g𝒱)/N(𝒱) = W(2n + 2)/W(2n + 1)`.
    pub direct_ratio: Option<BigRational>,
}

impl Thm93Report {
    pub fn witness(&self) -> Option<String> {
        self.n.map(|n| format!("cylinders of radius {n}"))
    }
}

fn ratio(a: &BigUint, b: &BigUint) -> BigRational {
    BigRational::new(BigInt::from(a.clone()), BigInt::from(b.clone()))
}

/// Searches the join complexities for a step of ratio at most `1 + eps`.
pub fn thm93_replay(s: &SubshiftSpec, eps: &Rational, n_max: usize) -> Result<Thm93Report> {
    let jc = (0..=n_max)
        .map(|n| join_complexity(s, n))
        .collect::<Result<Vec<_>>>()?;
    let seq: Vec<BigRational> = jc.iter().map(|c| ratio(c, &BigUint::one())).collect();
    let n = stable_index(&seq, 1, eps)?;
    let mut report = Thm93Report {
        eps: *eps,
        join_complexities: jc,
        n,
        certified_ratio: None,
        direct_ratio: None,
    };
    if let Some(n) = n {
        let certified = ratio(
            &report.join_complexities[n + 1],
            &report.join_complexities[n],
        );
        let recomputed = ratio(&count_words(s, 2 * n + 3)?, &count_words(s, 2 * n + 1)?);
        if certified != recomputed {
            return Err(Error::Assertion(format!(
                "certified ratio {certified} != {recomputed}"
            )));
        }
        let direct = ratio(&count_words(s, 2 * n + 2)?, &count_words(s, 2 * n + 1)?);
        if direct > certified {
            return Err(Error::Assertion(format!(
                "direct ratio {direct} exceeds {certified}"
            )));
        }
        report.certified_ratio = Some(certified);
        report.direct_ratio = Some(direct);
    }
    Ok(report)
}
