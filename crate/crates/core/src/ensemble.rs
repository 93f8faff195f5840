//! Random polynomials Σ a_i ξ_i f_i over a sampled function system, the
//! effective-dimension statistic R of a coefficient vector, and the
//! lower/upper envelope scales their expected integral-uniform norms are
//! compared against.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::norm::NormEstimate;
use crate::rng::parallel_trials;
use crate::scalar::{real, real_u64, real_usize, Real};
use crate::trig::{NetVector, TrigPoly};

/// Distribution of the random signs/weights ξ_i. Both satisfy Eξ = 0 and
/// E|ξ|² = 1; heavier-tailed choices are not admitted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum XiKind {
    Rademacher,
    Gaussian,
}

impl XiKind {
    /// E|ξ|³ of the distribution (1 for Rademacher, 2√(2/π) for Gaussian).
    pub fn third_abs_moment(self) -> f64 {
        match self {
            XiKind::Rademacher => 1.0,
            XiKind::Gaussian => 2.0 * (2.0 / std::f64::consts::PI).sqrt(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            XiKind::Rademacher => "rademacher",
            XiKind::Gaussian => "gaussian",
        }
    }
}

impl std::str::FromStr for XiKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "rademacher" => Ok(XiKind::Rademacher),
            "gaussian" => Ok(XiKind::Gaussian),
            other => Err(format!("unknown distribution `{other}`")),
        }
    }
}

/// A validated ensemble: the ξ distribution together with the constant M
/// bounding its third absolute moment, E|ξ|³ ≤ M³.
#[derive(Debug, Clone, Copy)]
pub struct EnsembleSpec<T> {
    kind: XiKind,
    moment_bound: T,
}

impl<T: Real> EnsembleSpec<T> {
    pub fn new(kind: XiKind, moment_bound: T) -> Result<Self> {
        let min = kind.third_abs_moment().cbrt().max(1.0);
        let bound = moment_bound.to_f64().unwrap_or(f64::NAN);
        if bound.is_nan() || bound < min {
            return Err(Error::MomentBound { bound, min });
        }
        Ok(Self { kind, moment_bound })
    }

    pub fn kind(&self) -> XiKind {
        self.kind
    }

    pub fn moment_bound(&self) -> T {
        self.moment_bound
    }

    /// Draws n independent ξ values.
    pub fn sample(&self, n: usize, rng: &mut ChaCha8Rng) -> Vec<T>
    where
        StandardNormal: Distribution<T>,
    {
        match self.kind {
            XiKind::Rademacher => (0..n)
                .map(|_| {
                    if rng.random::<bool>() {
                        T::one()
                    } else {
                        -T::one()
                    }
                })
                .collect(),
            XiKind::Gaussian => (0..n).map(|_| rng.sample(StandardNormal)).collect(),
        }
    }
}

/// Coefficients a_1..a_n together with the statistic
/// R = (Σ a_i²)² / Σ a_i⁴ ∈ [1, n], the effective number of comparable
/// coefficients (n for flat vectors, 1 for a single spike).
#[derive(Debug, Clone)]
pub struct CoefficientVector<T> {
    values: Vec<T>,
    sum_squares: T,
    r_stat: T,
}

impl<T: Real> CoefficientVector<T> {
    pub fn new(values: Vec<T>) -> Result<Self> {
        if values.is_empty() || values.iter().any(|v| !v.is_finite()) {
            return Err(Error::ZeroCoefficients);
        }
        let sum_squares = values.iter().fold(T::zero(), |acc, &a| acc + a * a);
        let sum_fourth = values.iter().fold(T::zero(), |acc, &a| acc + a * a * a * a);
        if sum_fourth <= T::zero() {
            return Err(Error::ZeroCoefficients);
        }
        Ok(Self {
            values,
            sum_squares,
            r_stat: sum_squares * sum_squares / sum_fourth,
        })
    }

    /// The flat vector (1, …, 1) of length n, for which R = n.
    pub fn ones(n: usize) -> Self {
        Self::new(vec![T::one(); n]).expect("nonzero")
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn sum_squares(&self) -> T {
        self.sum_squares
    }

    pub fn r_stat(&self) -> T {
        self.r_stat
    }

    /// P = min(m, R) + 1, the argument of the logarithm in the lower scale.
    pub fn p_value(&self, m: u64) -> T {
        real_u64::<T>(m).min(self.r_stat) + T::one()
    }
}

/// A function system sampled on a uniform net: one row per basis function.
/// Net L¹/L²/L³/sup norms are computed once at construction.
#[derive(Debug, Clone)]
pub struct FunctionSystem<T> {
    rows: Vec<Vec<T>>,
    n_points: usize,
    l1: Vec<T>,
    l2: Vec<T>,
    l3: Vec<T>,
    sup: Vec<T>,
}

impl<T: Real> FunctionSystem<T> {
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let n_points = rows.first().map_or(0, Vec::len);
        if rows.is_empty() || n_points == 0 {
            return Err(Error::EmptyNet);
        }
        for row in &rows {
            if row.len() != n_points {
                return Err(Error::DimensionMismatch {
                    expected: n_points,
                    got: row.len(),
                });
            }
            if row.iter().any(|v| !v.is_finite()) {
                return Err(Error::NonFinite);
            }
        }
        let count = real_usize::<T>(n_points);
        let mean_pow = |row: &[T], p: i32| -> T {
            row.iter().fold(T::zero(), |acc, v| acc + v.abs().powi(p)) / count
        };
        let l1 = rows.iter().map(|r| mean_pow(r, 1)).collect();
        let l2 = rows.iter().map(|r| mean_pow(r, 2).sqrt()).collect();
        let l3 = rows
            .iter()
            .map(|r| mean_pow(r, 3).powf(T::one() / real(3.0)))
            .collect();
        let sup = rows
            .iter()
            .map(|r| r.iter().fold(T::zero(), |acc, v| acc.max(v.abs())))
            .collect();
        Ok(Self {
            rows,
            n_points,
            l1,
            l2,
            l3,
            sup,
        })
    }

    /// The system {√2 cos(ix)}, i = 1..n, on the uniform net of
    /// net_factor·n points. Each row has net L² norm exactly 1.
    pub fn cosine_unit_l2(n: usize, net_factor: usize) -> Result<Self> {
        Self::cosines(n, net_factor, |_, ell1| {
            debug_assert!(ell1 > T::zero());
            real::<T>(2.0).sqrt()
        })
    }

    /// The system {cos(ix)/‖cos(ix)‖₁}, i = 1..n, normalized by each row's
    /// own net L¹ norm so that ‖f_i‖₁ = 1 exactly on the net.
    pub fn cosine_unit_l1(n: usize, net_factor: usize) -> Result<Self> {
        Self::cosines(n, net_factor, |_, ell1| ell1.recip())
    }

    fn cosines(n: usize, net_factor: usize, scale: impl Fn(usize, T) -> T) -> Result<Self> {
        if n == 0 || net_factor == 0 {
            return Err(Error::EmptyNet);
        }
        let n_points = net_factor * n;
        let count = real_usize::<T>(n_points);
        let step = real::<T>(2.0) * T::PI() / count;
        let rows = (1..=n)
            .map(|i| {
                let raw: Vec<T> = (0..n_points)
                    .map(|k| (real_usize::<T>(i) * step * real_usize(k)).cos())
                    .collect();
                let ell1 = raw.iter().fold(T::zero(), |acc, v| acc + v.abs()) / count;
                let c = scale(i, ell1);
                raw.into_iter().map(|v| v * c).collect()
            })
            .collect();
        Self::from_rows(rows)
    }

    pub fn n_functions(&self) -> usize {
        self.rows.len()
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.rows[i]
    }

    pub fn l1_norms(&self) -> &[T] {
        &self.l1
    }

    pub fn l2_norms(&self) -> &[T] {
        &self.l2
    }

    /// max_i ‖f_i‖₃ (net norm).
    pub fn l3_bound(&self) -> T {
        self.l3.iter().copied().fold(T::zero(), T::max)
    }

    /// max_i ‖f_i‖_∞ (net sup).
    pub fn sup_bound(&self) -> T {
        self.sup.iter().copied().fold(T::zero(), T::max)
    }

    /// Gate for L²-normalized systems: |‖f_i‖₂ − 1| ≤ 0.02 and
    /// ‖f_i‖₃ ≤ moment_bound for every i.
    pub fn check_l2_gate(&self, moment_bound: T) -> Result<()> {
        for (i, (&l2, &l3)) in self.l2.iter().zip(&self.l3).enumerate() {
            if (l2 - T::one()).abs() > real(0.02) {
                return Err(Error::ConditionGate(format!(
                    "function {i}: net L2 norm {l2} is not within 2% of 1"
                )));
            }
            if l3 > moment_bound {
                return Err(Error::ConditionGate(format!(
                    "function {i}: net L3 norm {l3} exceeds the moment bound {moment_bound}"
                )));
            }
        }
        Ok(())
    }

    /// Gate for L¹-normalized systems: |‖f_i‖₁ − 1| ≤ tol for every i.
    pub fn check_l1_gate(&self, tol: T) -> Result<()> {
        for (i, &l1) in self.l1.iter().enumerate() {
            if (l1 - T::one()).abs() > tol {
                return Err(Error::ConditionGate(format!(
                    "function {i}: net L1 norm {l1} is not within tolerance of 1"
                )));
            }
        }
        Ok(())
    }

    /// One realization F(t_k) = Σ_i coeffs_i · xi_i · f_i(t_k).
    pub fn realize(&self, coeffs: &[T], xi: &[T]) -> Result<NetVector<T>> {
        if coeffs.len() != self.rows.len() {
            return Err(Error::DimensionMismatch {
                expected: self.rows.len(),
                got: coeffs.len(),
            });
        }
        if xi.len() != self.rows.len() {
            return Err(Error::DimensionMismatch {
                expected: self.rows.len(),
                got: xi.len(),
            });
        }
        let mut samples = vec![T::zero(); self.n_points];
        for ((row, &a), &x) in self.rows.iter().zip(coeffs).zip(xi) {
            let w = a * x;
            if w == T::zero() {
                continue;
            }
            for (s, &v) in samples.iter_mut().zip(row) {
                *s = *s + w * v;
            }
        }
        NetVector::new(samples)
    }

    /// The pointwise envelope g(t_k) = (Σ_i coeffs_i² f_i(t_k)²)^{1/2}.
    pub fn squared_envelope(&self, coeffs: &[T]) -> Result<NetVector<T>> {
        if coeffs.len() != self.rows.len() {
            return Err(Error::DimensionMismatch {
                expected: self.rows.len(),
                got: coeffs.len(),
            });
        }
        let mut samples = vec![T::zero(); self.n_points];
        for (row, &a) in self.rows.iter().zip(coeffs) {
            let w = a * a;
            for (s, &v) in samples.iter_mut().zip(row) {
                *s = *s + w * v * v;
            }
        }
        NetVector::new(samples.into_iter().map(T::sqrt).collect())
    }
}

/// One realization of the random polynomial on the system's net, with ξ
/// drawn from `trial_rng(seed, 0)`.
pub fn random_realization<T: Real>(
    spec: &EnsembleSpec<T>,
    coeffs: &CoefficientVector<T>,
    system: &FunctionSystem<T>,
    seed: u64,
) -> Result<NetVector<T>>
where
    StandardNormal: Distribution<T>,
{
    let mut rng = crate::rng::trial_rng(seed, 0);
    let xi = spec.sample(system.n_functions(), &mut rng);
    system.realize(coeffs.values(), &xi)
}

/// Monte Carlo estimate of E‖Σ a_i ξ_i f_i‖_{m,∞}: one exact net m-norm per
/// trial, averaged. Deterministic per seed and independent of scheduling.
pub fn expected_m_norm<T: Real>(
    spec: &EnsembleSpec<T>,
    coeffs: &CoefficientVector<T>,
    system: &FunctionSystem<T>,
    m: u64,
    trials: u64,
    seed: u64,
) -> Result<NormEstimate<T>>
where
    StandardNormal: Distribution<T>,
{
    expected_m_norms(spec, coeffs, system, &[m], trials, seed).map(|mut v| v.remove(0))
}

/// As [`expected_m_norm`] for several m at once, sharing the same trials
/// (the per-trial realization is sorted once and reused for every m).
pub fn expected_m_norms<T: Real>(
    spec: &EnsembleSpec<T>,
    coeffs: &CoefficientVector<T>,
    system: &FunctionSystem<T>,
    ms: &[u64],
    trials: u64,
    seed: u64,
) -> Result<Vec<NormEstimate<T>>>
where
    StandardNormal: Distribution<T>,
{
    if trials < 2 {
        return Err(Error::TooFewTrials(trials));
    }
    if ms.contains(&0) {
        return Err(Error::ZeroSampleCount);
    }
    if coeffs.len() != system.n_functions() {
        return Err(Error::DimensionMismatch {
            expected: system.n_functions(),
            got: coeffs.len(),
        });
    }
    let per_trial: Vec<Vec<T>> = parallel_trials(trials, seed, |rng| {
        let xi = spec.sample(system.n_functions(), rng);
        let net = system
            .realize(coeffs.values(), &xi)
            .expect("dimensions checked");
        let f = net.to_discrete();
        ms.iter()
            .map(|&m| f.m_norm(m).expect("m validated"))
            .collect()
    });
    (0..ms.len())
        .map(|j| {
            let samples: Vec<T> = per_trial.iter().map(|row| row[j]).collect();
            NormEstimate::from_samples(&samples, seed)
        })
        .collect()
}

/// Per-trial norms ‖Σ a_i ξ_i f_i‖_{m,∞} in trial order: the empirical
/// distribution behind [`expected_m_norm`], kept for quantile inspection of
/// the norm's concentration.
pub fn norm_distribution<T: Real>(
    spec: &EnsembleSpec<T>,
    coeffs: &CoefficientVector<T>,
    system: &FunctionSystem<T>,
    m: u64,
    trials: u64,
    seed: u64,
) -> Result<Vec<T>>
where
    StandardNormal: Distribution<T>,
{
    if trials == 0 {
        return Err(Error::TooFewTrials(0));
    }
    if m == 0 {
        return Err(Error::ZeroSampleCount);
    }
    if coeffs.len() != system.n_functions() {
        return Err(Error::DimensionMismatch {
            expected: system.n_functions(),
            got: coeffs.len(),
        });
    }
    Ok(parallel_trials(trials, seed, |rng| {
        let xi = spec.sample(system.n_functions(), rng);
        let net = system
            .realize(coeffs.values(), &xi)
            .expect("dimensions checked");
        net.to_discrete().m_norm(m).expect("m validated")
    }))
}

/// The scale √(Σ a_i² · ln P), P = min(m, R) + 1, that lower-bounds
/// E‖Σ a_i ξ_i f_i‖_{m,∞} up to an absolute constant (natural log; the
/// constant is left to the reported ratios).
pub fn lower_bound_scale<T: Real>(coeffs: &CoefficientVector<T>, m: u64) -> Result<T> {
    if m == 0 {
        return Err(Error::ZeroSampleCount);
    }
    Ok((coeffs.sum_squares() * coeffs.p_value(m).ln()).sqrt())
}

/// The envelope form of the upper scale:
/// ‖(Σ a_i² f_i²)^{1/2}‖_{m,∞} · √(1 + ln m).
pub fn envelope_upper_scale<T: Real>(
    system: &FunctionSystem<T>,
    coeffs: &CoefficientVector<T>,
    m: u64,
) -> Result<T> {
    if m == 0 {
        return Err(Error::ZeroSampleCount);
    }
    let g = system.squared_envelope(coeffs.values())?;
    Ok(g.m_norm(m)? * (T::one() + real_u64::<T>(m).ln()).sqrt())
}

/// The uniformly-bounded-system form of the upper scale:
/// max_i ‖f_i‖_∞ · √(Σ a_i²) · √(1 + ln m). Always at least the envelope
/// form, since ‖g‖_{m,∞} ≤ ‖g‖_∞.
pub fn uniform_upper_scale<T: Real>(
    system: &FunctionSystem<T>,
    coeffs: &CoefficientVector<T>,
    m: u64,
) -> Result<T> {
    if m == 0 {
        return Err(Error::ZeroSampleCount);
    }
    Ok(
        system.sup_bound()
            * coeffs.sum_squares().sqrt()
            * (T::one() + real_u64::<T>(m).ln()).sqrt(),
    )
}

/// Monte Carlo estimate of E‖Σ_{k=−n..n} r_k e^{ikt}‖_∞ / √(n ln n) with
/// independent Rademacher signs r_k, the sup norm taken as the max modulus
/// on the uniform 8n net.
pub fn salem_zygmund_ratio<T: Real>(n: usize, trials: u64, seed: u64) -> Result<NormEstimate<T>> {
    if n < 2 {
        return Err(Error::DegenerateLog);
    }
    if trials < 2 {
        return Err(Error::TooFewTrials(trials));
    }
    let denom = (real_usize::<T>(n) * real_usize::<T>(n).ln()).sqrt();
    let ratios = parallel_trials(trials, seed, |rng| {
        let coeffs: Vec<num_complex::Complex<T>> = (0..2 * n + 1)
            .map(|_| {
                let sign = if rng.random::<bool>() {
                    T::one()
                } else {
                    -T::one()
                };
                num_complex::Complex::new(sign, T::zero())
            })
            .collect();
        let poly = TrigPoly::new(coeffs).expect("odd length");
        let sup = poly.modulus_on_net(8 * n).expect("nonempty net").max_abs();
        sup / denom
    });
    NormEstimate::from_samples(&ratios, seed)
}

/// One experiment row: a Monte Carlo norm estimate against a theorem scale.
#[derive(Debug, Clone, Serialize)]
pub struct BoundReport<T> {
    pub n: usize,
    pub m: u64,
    pub r_stat: T,
    /// P = min(m, R) + 1.
    pub p_value: T,
    pub lhs: NormEstimate<T>,
    pub rhs: T,
    pub ratio: T,
    pub seed: u64,
}

impl<T: Real> BoundReport<T> {
    pub fn new(
        n: usize,
        m: u64,
        coeffs: &CoefficientVector<T>,
        lhs: NormEstimate<T>,
        rhs: T,
        seed: u64,
    ) -> Self {
        Self {
            n,
            m,
            r_stat: coeffs.r_stat(),
            p_value: coeffs.p_value(m),
            lhs,
            rhs,
            ratio: lhs.mean / rhs,
            seed,
        }
    }
}
