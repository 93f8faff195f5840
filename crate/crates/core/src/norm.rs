//! The integral-uniform norm ‖f‖_{m,∞} of a discrete function.
//!
//! ‖f‖_{m,∞} is the expectation of `max(|f(x_1)|, …, |f(x_m)|)` over m
//! independent points drawn from the probability space carrying f. It equals
//! ‖f‖₁ at m = 1 and increases to ‖f‖_∞ as m → ∞. For a function taking
//! finitely many values it has a closed form over the sorted distinct
//! absolute values, evaluated here in two algebraically equivalent ways plus
//! a Monte Carlo route for arbitrary samplers.

use std::io;
use std::path::Path;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::parallel_trials;
use crate::scalar::{mass_tolerance, real_u64, real_usize, Real};

/// One atom of a discrete function: a value carrying a probability mass.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom<T> {
    pub value: T,
    pub mass: T,
}

/// A function on a finite probability space, stored as value/mass atoms.
///
/// Masses are positive and sum to 1. Values may repeat; the norm routines
/// merge equal absolute values internally.
#[derive(Debug, Clone)]
pub struct DiscreteFunction<T> {
    atoms: Vec<Atom<T>>,
    description: Option<String>,
}

impl<T: Real> DiscreteFunction<T> {
    /// Builds a function from `(value, mass)` pairs, validating that masses
    /// are in (0, 1] and sum to 1.
    pub fn new(pairs: impl IntoIterator<Item = (T, T)>) -> Result<Self> {
        let atoms: Vec<Atom<T>> = pairs
            .into_iter()
            .map(|(value, mass)| Atom { value, mass })
            .collect();
        if atoms.is_empty() {
            return Err(Error::EmptyFunction);
        }
        let mut total = T::zero();
        for atom in &atoms {
            if !atom.value.is_finite() || !atom.mass.is_finite() {
                return Err(Error::NonFinite);
            }
            if atom.mass <= T::zero() || atom.mass > T::one() {
                return Err(Error::InvalidMass(atom.mass.to_f64().unwrap_or(f64::NAN)));
            }
            total = total + atom.mass;
        }
        if (total - T::one()).abs() > mass_tolerance::<T>() {
            return Err(Error::MassSum(total.to_f64().unwrap_or(f64::NAN)));
        }
        Ok(Self {
            atoms,
            description: None,
        })
    }

    /// Uniform masses 1/N over the given values. The mass-sum invariant holds
    /// by construction, so no float-accumulation check is applied.
    pub fn uniform(values: impl IntoIterator<Item = T>) -> Result<Self> {
        let values: Vec<T> = values.into_iter().collect();
        if values.is_empty() {
            return Err(Error::EmptyFunction);
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        let mass = T::one() / real_usize(values.len());
        Ok(Self {
            atoms: values
                .into_iter()
                .map(|value| Atom { value, mass })
                .collect(),
            description: None,
        })
    }

    pub fn with_description(mut self, description: impl Into<String>) -> Self {
        self.description = Some(description.into());
        self
    }

    pub fn atoms(&self) -> &[Atom<T>] {
        &self.atoms
    }

    pub fn description(&self) -> Option<&str> {
        self.description.as_deref()
    }

    /// Pointwise scaling f ↦ c·f (masses unchanged).
    pub fn scale(&self, c: T) -> Self {
        Self {
            atoms: self
                .atoms
                .iter()
                .map(|a| Atom {
                    value: a.value * c,
                    mass: a.mass,
                })
                .collect(),
            description: None,
        }
    }

    /// Largest absolute value, i.e. ‖f‖_∞ on the discrete space.
    pub fn max_abs(&self) -> T {
        self.atoms
            .iter()
            .map(|a| a.value.abs())
            .fold(T::zero(), T::max)
    }

    /// ‖f‖₁ = Σ |value|·mass.
    pub fn l1_norm(&self) -> T {
        self.atoms
            .iter()
            .map(|a| a.value.abs() * a.mass)
            .fold(T::zero(), |acc, x| acc + x)
    }

    /// Smallest atom mass; the finest set mass the atoms resolve exactly.
    pub fn min_mass(&self) -> T {
        self.atoms
            .iter()
            .map(|a| a.mass)
            .fold(T::infinity(), T::min)
    }

    /// Distribution function λ_f(t) = μ{ |f| > t } (strict inequality).
    pub fn tail_measure(&self, t: T) -> Result<T> {
        if t < T::zero() {
            return Err(Error::NegativeThreshold(t.to_f64().unwrap_or(f64::NAN)));
        }
        Ok(self
            .atoms
            .iter()
            .filter(|a| a.value.abs() > t)
            .map(|a| a.mass)
            .fold(T::zero(), |acc, x| acc + x))
    }

    /// Canonical view: distinct absolute values sorted descending, with the
    /// masses of equal |value| atoms merged.
    pub fn canonical_abs(&self) -> Vec<Atom<T>> {
        let mut atoms: Vec<Atom<T>> = self
            .atoms
            .iter()
            .map(|a| Atom {
                value: a.value.abs(),
                mass: a.mass,
            })
            .collect();
        atoms.sort_unstable_by(|a, b| b.value.partial_cmp(&a.value).expect("finite values"));
        let mut merged: Vec<Atom<T>> = Vec::with_capacity(atoms.len());
        for atom in atoms {
            match merged.last_mut() {
                Some(last) if last.value == atom.value => last.mass = last.mass + atom.mass,
                _ => merged.push(atom),
            }
        }
        merged
    }

    /// ‖f‖_{m,∞} via the sorted-level formula
    /// Σ_k u_k [(1−S_{k−1})^m − (1−S_k)^m], where u_1 > u_2 > … are the
    /// distinct absolute values and S_k = μ{ |f| ≥ u_k }.
    pub fn m_norm(&self, m: u64) -> Result<T> {
        if m == 0 {
            return Err(Error::ZeroSampleCount);
        }
        let mut cum = T::zero();
        let mut prev_pow = T::one();
        let mut total = T::zero();
        for atom in self.canonical_abs() {
            cum = cum + atom.mass;
            let pow = pow_one_minus(cum, m);
            total = total + atom.value * (prev_pow - pow);
            prev_pow = pow;
        }
        Ok(total)
    }

    /// ‖f‖_{m,∞} via the distribution-function integral
    /// ∫₀^∞ (1 − (1 − λ_f(t))^m) dt, summed exactly over the steps of λ_f.
    ///
    /// Algebraically identical to [`Self::m_norm`]; kept as an independent
    /// evaluation route.
    pub fn m_norm_from_distribution(&self, m: u64) -> Result<T> {
        if m == 0 {
            return Err(Error::ZeroSampleCount);
        }
        let levels = self.canonical_abs();
        let mut cum = T::zero();
        let mut total = T::zero();
        for (k, atom) in levels.iter().enumerate() {
            cum = cum + atom.mass;
            let next = levels.get(k + 1).map_or(T::zero(), |a| a.value);
            total = total + (atom.value - next) * one_minus_pow(cum, m);
        }
        Ok(total)
    }

    /// Average of |f| over the best (largest-|f|) set of measure exactly `p`,
    /// splitting the boundary atom fractionally:
    /// (1/p) · sup_{μe = p} ∫_e |f|.
    pub fn top_quantile_average(&self, p: T) -> Result<T> {
        if !(p > T::zero() && p <= T::one()) {
            return Err(Error::InvalidQuantile(p.to_f64().unwrap_or(f64::NAN)));
        }
        let mut remaining = p;
        let mut integral = T::zero();
        for atom in self.canonical_abs() {
            let take = atom.mass.min(remaining);
            integral = integral + atom.value * take;
            remaining = remaining - take;
            if remaining <= T::zero() {
                break;
            }
        }
        Ok(integral / p)
    }

    /// Lower bound for ‖f‖_{m,∞} from the average over a set of measure `p`:
    /// returns `(lhs, rhs)` with lhs = ‖f‖_{m,∞} and
    /// rhs = (1 − (1−p)^m) · (top-quantile average of |f| at mass p).
    /// The contract is lhs ≥ rhs, and the same holds with the average taken
    /// over any other set of measure p in place of the top-quantile one.
    pub fn set_average_lower_bound(&self, p: T, m: u64) -> Result<(T, T)> {
        let lhs = self.m_norm(m)?;
        let rhs = one_minus_pow(p, m) * self.top_quantile_average(p)?;
        Ok((lhs, rhs))
    }

    /// Sampler drawing values with the atoms' probabilities.
    pub fn sampler(&self) -> DiscreteSampler<T> {
        let mut cum = Vec::with_capacity(self.atoms.len());
        let mut acc = 0.0f64;
        for atom in &self.atoms {
            acc += atom.mass.to_f64().expect("finite mass");
            cum.push(acc);
        }
        DiscreteSampler {
            values: self.atoms.iter().map(|a| a.value).collect(),
            cum,
        }
    }

    /// Reads the `value,mass` CSV format; the `mass` column is optional and
    /// uniform masses are assumed when it is absent.
    pub fn from_csv_path(path: impl AsRef<Path>) -> Result<Self> {
        let file = std::fs::File::open(path)?;
        Self::from_csv_reader(file)
    }

    pub fn from_csv_reader(reader: impl io::Read) -> Result<Self> {
        let mut csv_reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .from_reader(reader);
        let headers = csv_reader.headers().map_err(csv_error)?.clone();
        let columns: Vec<&str> = headers.iter().map(str::trim).collect();
        let has_mass = match columns.as_slice() {
            ["value"] => false,
            ["value", "mass"] => true,
            _ => {
                return Err(Error::Csv {
                    line: 1,
                    message: format!(
                        "expected header `value` or `value,mass`, got `{}`",
                        columns.join(",")
                    ),
                })
            }
        };
        let mut values = Vec::new();
        let mut masses = Vec::new();
        for record in csv_reader.records() {
            let record = record.map_err(csv_error)?;
            let line = record.position().map_or(0, |p| p.line());
            let parse = |field: &str| -> Result<T> {
                field
                    .trim()
                    .parse::<f64>()
                    .ok()
                    .and_then(T::from_f64)
                    .ok_or_else(|| Error::Csv {
                        line,
                        message: format!("cannot parse `{field}` as a number"),
                    })
            };
            let expected = if has_mass { 2 } else { 1 };
            if record.len() != expected {
                return Err(Error::Csv {
                    line,
                    message: format!("expected {expected} fields, got {}", record.len()),
                });
            }
            values.push(parse(&record[0])?);
            if has_mass {
                masses.push(parse(&record[1])?);
            }
        }
        if has_mass {
            Self::new(values.into_iter().zip(masses))
        } else {
            Self::uniform(values)
        }
    }

    /// Writes the `value,mass` CSV format.
    pub fn write_csv(&self, writer: impl io::Write) -> Result<()> {
        let mut csv_writer = csv::Writer::from_writer(writer);
        csv_writer
            .write_record(["value", "mass"])
            .map_err(csv_error)?;
        for atom in &self.atoms {
            csv_writer
                .write_record([format!("{}", atom.value), format!("{}", atom.mass)])
                .map_err(csv_error)?;
        }
        csv_writer.flush()?;
        Ok(())
    }
}

pub(crate) fn csv_error(err: csv::Error) -> Error {
    let line = err.position().map_or(0, csv::Position::line);
    Error::Csv {
        line,
        message: err.to_string(),
    }
}

/// (1 − s)^m for s ∈ [0, 1], computed as exp(m·log1p(−s)) so that huge m
/// does not lose the small-s regime to direct powering.
pub(crate) fn pow_one_minus<T: Real>(s: T, m: u64) -> T {
    if s >= T::one() {
        T::zero()
    } else if s <= T::zero() {
        T::one()
    } else {
        (real_u64::<T>(m) * (-s).ln_1p()).exp()
    }
}

/// 1 − (1 − s)^m via expm1, accurate when s·m is small.
pub(crate) fn one_minus_pow<T: Real>(s: T, m: u64) -> T {
    if s >= T::one() {
        T::one()
    } else if s <= T::zero() {
        T::zero()
    } else {
        -(real_u64::<T>(m) * (-s).ln_1p()).exp_m1()
    }
}

/// ‖χ_Δ‖_{m,∞} = 1 − (1 − p)^m for an indicator of a set of measure p.
pub fn indicator_m_norm<T: Real>(p: T, m: u64) -> Result<T> {
    if m == 0 {
        return Err(Error::ZeroSampleCount);
    }
    if !(T::zero()..=T::one()).contains(&p) {
        return Err(Error::InvalidProbability(p.to_f64().unwrap_or(f64::NAN)));
    }
    Ok(one_minus_pow(p, m))
}

/// A source of values for Monte Carlo m-norm estimation.
pub trait ValueSampler<T>: Sync {
    fn sample(&self, rng: &mut ChaCha8Rng) -> T;
}

impl<T, F> ValueSampler<T> for F
where
    F: Fn(&mut ChaCha8Rng) -> T + Sync,
{
    fn sample(&self, rng: &mut ChaCha8Rng) -> T {
        self(rng)
    }
}

/// Samples the atoms of a [`DiscreteFunction`] with their masses.
#[derive(Debug, Clone)]
pub struct DiscreteSampler<T> {
    values: Vec<T>,
    cum: Vec<f64>,
}

impl<T: Real> ValueSampler<T> for DiscreteSampler<T> {
    fn sample(&self, rng: &mut ChaCha8Rng) -> T {
        let u: f64 = rng.random();
        let idx = self
            .cum
            .partition_point(|&c| c <= u)
            .min(self.values.len() - 1);
        self.values[idx]
    }
}

/// A Monte Carlo estimate with its CLT standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormEstimate<T> {
    pub mean: T,
    /// Sample standard deviation divided by √trials.
    pub std_error: T,
    pub trials: u64,
    pub seed: u64,
}

impl<T: Real> NormEstimate<T> {
    /// Mean and standard error of per-trial values. Summation is sequential
    /// in trial order, so the result is independent of how the trials were
    /// scheduled.
    pub fn from_samples(samples: &[T], seed: u64) -> Result<Self> {
        let trials = samples.len() as u64;
        if trials < 2 {
            return Err(Error::TooFewTrials(trials));
        }
        let count = real_usize::<T>(samples.len());
        let mean = samples.iter().fold(T::zero(), |acc, &x| acc + x) / count;
        let ss = samples
            .iter()
            .fold(T::zero(), |acc, &x| acc + (x - mean) * (x - mean));
        let variance = ss / (count - T::one());
        Ok(Self {
            mean,
            std_error: (variance / count).sqrt(),
            trials,
            seed,
        })
    }
}

/// Monte Carlo estimate of ‖f‖_{m,∞}: averages the maximum of m independent
/// |samples| over `trials` repetitions. Trial randomness is keyed by
/// `(seed, trial index)`, so results do not depend on scheduling.
pub fn m_norm_monte_carlo<T: Real>(
    sampler: &impl ValueSampler<T>,
    m: u64,
    trials: u64,
    seed: u64,
) -> Result<NormEstimate<T>> {
    if m == 0 {
        return Err(Error::ZeroSampleCount);
    }
    if trials < 2 {
        return Err(Error::TooFewTrials(trials));
    }
    let maxima = parallel_trials(trials, seed, |rng| {
        let mut best = T::zero();
        for _ in 0..m {
            best = best.max(sampler.sample(rng).abs());
        }
        best
    });
    NormEstimate::from_samples(&maxima, seed)
}
