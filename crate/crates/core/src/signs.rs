//! Sign selection: searching for signs θ_i = ±1 making every dyadic tail
//! average of |Σ θ_i f_i| large, plus the dyadic-grouping bound that turns a
//! sign-sum seminorm estimate into a general-coefficient estimate.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::ensemble::FunctionSystem;
use crate::error::{Error, Result};
use crate::norm::DiscreteFunction;
use crate::rng::parallel_trials;
use crate::scalar::{real, real_usize, Real};

/// A ±1 sign assignment.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SignVector(Vec<i8>);

impl SignVector {
    pub fn new(signs: Vec<i8>) -> Result<Self> {
        if signs.is_empty() || signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::InvalidSign);
        }
        Ok(Self(signs))
    }

    pub fn sample(n: usize, rng: &mut ChaCha8Rng) -> Self {
        Self(
            (0..n)
                .map(|_| if rng.random::<bool>() { 1 } else { -1 })
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[i8] {
        &self.0
    }

    pub fn flip(&mut self, i: usize) {
        self.0[i] = -self.0[i];
    }

    pub fn to_scalars<T: Real>(&self) -> Vec<T> {
        self.0
            .iter()
            .map(|&s| if s == 1 { T::one() } else { -T::one() })
            .collect()
    }
}

/// The best average of |F| over a set of measure 2^{−k}:
/// 2^k · sup_{μe = 2^{−k}} ∫_e |F|, realized by the top-|F| level set with a
/// fractionally split boundary atom.
pub fn dyadic_tail_average<T: Real>(f: &DiscreteFunction<T>, k: u32) -> Result<T> {
    if k == 0 {
        return Err(Error::ZeroLevel);
    }
    let mass = real::<T>(0.5).powi(k as i32);
    let min_mass = f.min_mass();
    if mass < min_mass {
        return Err(Error::NetTooCoarse {
            mass: mass.to_f64().unwrap_or(f64::NAN),
            min_mass: min_mass.to_f64().unwrap_or(f64::NAN),
        });
    }
    f.top_quantile_average(mass)
}

/// One level of a sign certificate: the tail average at mass 2^{−k} against
/// its target c₀√(nk).
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct CertRow<T> {
    pub k: u32,
    pub lhs: T,
    pub target: T,
    pub pass: bool,
}

/// Rows of a tail certificate plus the bridge check
/// ‖F‖_{2^k,∞} ≤ 2·lhs_k for every level.
#[derive(Debug, Clone)]
pub struct TailReport<T> {
    pub rows: Vec<CertRow<T>>,
    /// ‖F‖_{2^k,∞} per level, in row order.
    pub m_norms: Vec<T>,
    pub bridge_ok: bool,
}

/// Evaluates the dyadic tail averages of |F| for k = 1..k_max against the
/// targets c₀√(nk), and verifies the bridge inequality relating them to the
/// integral-uniform norms ‖F‖_{2^k,∞}.
pub fn tail_certificate<T: Real>(
    f: &DiscreteFunction<T>,
    n: usize,
    k_max: u32,
    c0: T,
) -> Result<TailReport<T>> {
    if k_max == 0 {
        return Err(Error::ZeroLevel);
    }
    let max_level = max_level(n);
    if k_max > max_level {
        return Err(Error::LevelOutOfRange {
            got: k_max,
            max: max_level,
        });
    }
    let n_t = real_usize::<T>(n);
    let mut rows = Vec::with_capacity(k_max as usize);
    let mut m_norms = Vec::with_capacity(k_max as usize);
    let mut bridge_ok = true;
    for k in 1..=k_max {
        let lhs = dyadic_tail_average(f, k)?;
        let target = c0 * (n_t * real::<T>(f64::from(k))).sqrt();
        rows.push(CertRow {
            k,
            lhs,
            target,
            pass: lhs >= target,
        });
        let norm = f.m_norm(1u64 << k)?;
        bridge_ok &= bridge_holds(norm, lhs);
        m_norms.push(norm);
    }
    Ok(TailReport {
        rows,
        m_norms,
        bridge_ok,
    })
}

/// The bridge inequality ‖F‖_{2^k,∞} ≤ 2·lhs_k, with a relative float slack.
pub fn bridge_holds<T: Real>(m_norm: T, lhs: T) -> bool {
    let tol = real::<T>(1e-9) * (T::one() + m_norm.abs());
    m_norm <= real::<T>(2.0) * lhs + tol
}

/// log₂(n) rounded down, floored at 1: the deepest dyadic level the sign
/// search certifies.
pub fn max_level(n: usize) -> u32 {
    if n <= 1 {
        1
    } else {
        n.ilog2()
    }
}

/// Settings for [`search_signs`].
#[derive(Debug, Clone, Copy)]
pub struct SearchOptions<T> {
    pub attempts: u64,
    pub c0: T,
    pub seed: u64,
    /// Exponent δ of the reporting threshold ‖F^θ‖₁ ≥ n^{1/2+δ}.
    pub delta: T,
    /// Run a single greedy bit-flip improvement pass over the best draw.
    pub refine: bool,
}

/// A sign vector with its certificate rows and diagnostics.
#[derive(Debug, Clone, Serialize)]
pub struct Certificate<T> {
    pub theta: SignVector,
    pub rows: Vec<CertRow<T>>,
    /// ‖F^θ‖_{2^k,∞} per row (the bridge lhs values).
    pub m_norms: Vec<T>,
    /// min_k lhs_k / √(nk); the certificate passes at c₀ iff this ≥ c₀.
    pub min_ratio: T,
    pub l1_norm: T,
    /// Whether ‖F^θ‖₁ ≥ n^{1/2+δ} (the regime where level k ≲ n^δ passes
    /// outright from the L¹ norm alone).
    pub heavy_l1: bool,
    pub bridge_ok: bool,
    /// Index of the random attempt that produced θ (refinement keeps it).
    pub attempt: u64,
    pub seed: u64,
}

/// Outcome of a sign search.
#[derive(Debug, Clone)]
pub struct SearchReport<T> {
    pub best: Certificate<T>,
    pub attempts: u64,
    /// Bridge inequality held on every attempt examined.
    pub all_bridge_ok: bool,
}

/// Draws random sign vectors, scores each by min_k lhs_k/√(nk) over
/// k = 1..log₂(n), and returns the best (ties to the earliest attempt).
/// The system must be L¹-normalized within 2%.
pub fn search_signs<T: Real>(
    system: &FunctionSystem<T>,
    opts: &SearchOptions<T>,
) -> Result<SearchReport<T>> {
    if opts.attempts == 0 {
        return Err(Error::ZeroAttempts);
    }
    system.check_l1_gate(real(0.02))?;
    let n = system.n_functions();
    let k_max = max_level(n);

    let scored: Vec<(T, bool)> = parallel_trials(opts.attempts, opts.seed, |rng| {
        let theta = SignVector::sample(n, rng);
        let f = realize_signs(system, &theta).to_discrete();
        let report = tail_certificate(&f, n, k_max, opts.c0).expect("levels fit the net");
        (min_ratio(&report.rows, n), report.bridge_ok)
    });
    let all_bridge_ok = scored.iter().all(|&(_, ok)| ok);
    let mut best_idx = 0;
    for (i, &(score, _)) in scored.iter().enumerate() {
        if score > scored[best_idx].0 {
            best_idx = i;
        }
    }

    let mut theta = SignVector::sample(n, &mut crate::rng::trial_rng(opts.seed, best_idx as u64));
    if opts.refine {
        greedy_refine(system, &mut theta, k_max, opts.c0);
    }
    let f = realize_signs(system, &theta).to_discrete();
    let report = tail_certificate(&f, n, k_max, opts.c0)?;
    let l1 = f.l1_norm();
    let threshold = real_usize::<T>(n).powf(real::<T>(0.5) + opts.delta);
    Ok(SearchReport {
        best: Certificate {
            theta,
            min_ratio: min_ratio(&report.rows, n),
            rows: report.rows,
            m_norms: report.m_norms,
            l1_norm: l1,
            heavy_l1: l1 >= threshold,
            bridge_ok: report.bridge_ok,
            attempt: best_idx as u64,
            seed: opts.seed,
        },
        attempts: opts.attempts,
        all_bridge_ok,
    })
}

fn realize_signs<T: Real>(
    system: &FunctionSystem<T>,
    theta: &SignVector,
) -> crate::trig::NetVector<T> {
    let ones = vec![T::one(); system.n_functions()];
    system
        .realize(&ones, &theta.to_scalars())
        .expect("dimensions match by construction")
}

fn min_ratio<T: Real>(rows: &[CertRow<T>], n: usize) -> T {
    let n_t = real_usize::<T>(n);
    rows.iter()
        .map(|row| row.lhs / (n_t * real::<T>(f64::from(row.k))).sqrt())
        .fold(T::infinity(), T::min)
}

/// One pass of greedy bit flips: keep a flip iff it strictly improves the
/// score. Samples are updated incrementally.
fn greedy_refine<T: Real>(system: &FunctionSystem<T>, theta: &mut SignVector, k_max: u32, c0: T) {
    let n = system.n_functions();
    let mut samples: Vec<T> = realize_signs(system, theta).samples().to_vec();
    let score = |samples: &[T]| -> T {
        let f = DiscreteFunction::uniform(samples.iter().copied()).expect("nonempty");
        let report = tail_certificate(&f, n, k_max, c0).expect("levels fit the net");
        min_ratio(&report.rows, n)
    };
    let mut best = score(&samples);
    for i in 0..n {
        let sign = real::<T>(f64::from(theta.as_slice()[i]));
        let row = system.row(i);
        for (s, &v) in samples.iter_mut().zip(row) {
            *s = *s - real::<T>(2.0) * sign * v;
        }
        let candidate = score(&samples);
        if candidate > best {
            best = candidate;
            theta.flip(i);
        } else {
            for (s, &v) in samples.iter_mut().zip(row) {
                *s = *s + real::<T>(2.0) * sign * v;
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Dyadic grouping bound for seminorms with a sign-sum growth hypothesis.
// ---------------------------------------------------------------------------

/// A seminorm oracle on coefficient vectors (coordinates in a fixed basis
/// w_1..w_n with ‖w_i‖ = 1), hypothesized to satisfy
/// ‖Σ ±w_i‖ ≤ growth_const · n^{1/2+β} for all sign choices.
pub struct SeminormHypothesis<'a, T> {
    beta: T,
    growth_const: T,
    n: usize,
    seminorm: &'a (dyn Fn(&[T]) -> T + Sync),
}

impl<'a, T: Real> SeminormHypothesis<'a, T> {
    pub fn new(
        beta: T,
        growth_const: T,
        n: usize,
        seminorm: &'a (dyn Fn(&[T]) -> T + Sync),
    ) -> Result<Self> {
        if !(beta >= T::zero() && beta < real(0.5)) {
            return Err(Error::InvalidBeta(beta.to_f64().unwrap_or(f64::NAN)));
        }
        if n == 0 || growth_const <= T::zero() {
            return Err(Error::ZeroCoefficients);
        }
        Ok(Self {
            beta,
            growth_const,
            n,
            seminorm,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn beta(&self) -> T {
        self.beta
    }

    pub fn growth_const(&self) -> T {
        self.growth_const
    }

    pub fn evaluate(&self, coeffs: &[T]) -> T {
        (self.seminorm)(coeffs)
    }

    /// Spot-checks the seminorm axioms and the sign-sum growth hypothesis on
    /// random probe vectors: ‖w_i‖ = 1, absolute homogeneity, subadditivity,
    /// and ‖Σ ±w_i‖ ≤ growth_const·n^{1/2+β}.
    pub fn check_probes(&self, probes: u32, seed: u64) -> Result<()> {
        let n = self.n;
        let tol = real::<T>(1e-9);
        let mut rng = crate::rng::trial_rng(seed, 0);
        let mut unit = vec![T::zero(); n];
        for i in 0..n.min(16) {
            unit[i] = T::one();
            let norm = self.evaluate(&unit);
            unit[i] = T::zero();
            if (norm - T::one()).abs() > tol {
                return Err(Error::SeminormProbe(format!(
                    "basis vector {i} has seminorm {norm}, expected 1"
                )));
            }
        }
        let growth_cap = self.growth_const
            * real_usize::<T>(n).powf(real::<T>(0.5) + self.beta)
            * (T::one() + tol);
        for _ in 0..probes {
            let u: Vec<T> = (0..n)
                .map(|_| real::<T>(rng.random::<f64>() * 2.0 - 1.0))
                .collect();
            let v: Vec<T> = (0..n)
                .map(|_| real::<T>(rng.random::<f64>() * 2.0 - 1.0))
                .collect();
            let c = real::<T>(rng.random::<f64>() * 4.0 - 2.0);
            let norm_u = self.evaluate(&u);
            let norm_v = self.evaluate(&v);
            if norm_u < -tol || norm_v < -tol {
                return Err(Error::SeminormProbe("negative seminorm".into()));
            }
            let scaled: Vec<T> = u.iter().map(|&x| x * c).collect();
            if (self.evaluate(&scaled) - c.abs() * norm_u).abs() > tol * (T::one() + norm_u.abs()) {
                return Err(Error::SeminormProbe("homogeneity violated".into()));
            }
            let sum: Vec<T> = u.iter().zip(&v).map(|(&x, &y)| x + y).collect();
            if self.evaluate(&sum) > norm_u + norm_v + tol {
                return Err(Error::SeminormProbe("subadditivity violated".into()));
            }
            let signs: Vec<T> = (0..n)
                .map(|_| {
                    if rng.random::<bool>() {
                        T::one()
                    } else {
                        -T::one()
                    }
                })
                .collect();
            if self.evaluate(&signs) > growth_cap {
                return Err(Error::SeminormProbe(
                    "sign-sum growth hypothesis violated".into(),
                ));
            }
        }
        Ok(())
    }

    /// Constructive upper bound for ‖Σ a_i w_i‖: after normalizing to
    /// Σ a_i² = n, coefficients of magnitude below √n are grouped by dyadic
    /// bands σ_k = { j : 2^{−k}√n ≤ |a_j| < 2^{−k+1}√n } up to
    /// K = round((1/4 + β/2)·log₂ n); band sums obey the triangle
    /// inequality, the residual is absorbed through the sign-sum hypothesis,
    /// and |a_j| ≥ √n entries are peeled off by the triangle inequality
    /// beforehand. The returned bound is
    /// peel + √n·(2^{K+2} + growth_const·2^{−K}·n^{1/2+β}), rescaled back.
    pub fn dyadic_group_bound(&self, coeffs: &[T]) -> Result<DyadicBound<T>> {
        if coeffs.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: coeffs.len(),
            });
        }
        let sum_sq = coeffs.iter().fold(T::zero(), |acc, &a| acc + a * a);
        if coeffs.is_empty() || sum_sq <= T::zero() {
            return Err(Error::ZeroCoefficients);
        }
        let n = self.n;
        let n_t = real_usize::<T>(n);
        let scale = (n_t / sum_sq).sqrt();
        let root_n = n_t.sqrt();
        let log2_n = (n as f64).log2();
        let level_cap = (0.25 + 0.5 * self.beta.to_f64().unwrap_or(0.0)) * log2_n;
        let level_cap = level_cap.round().max(0.0) as u32;

        let mut groups: Vec<Vec<usize>> = vec![Vec::new(); level_cap as usize];
        let mut residual = Vec::new();
        let mut peeled = Vec::new();
        let mut peel_sum = T::zero();
        for (i, &a) in coeffs.iter().enumerate() {
            let mag = (a * scale).abs();
            if mag >= root_n {
                peel_sum = peel_sum + mag;
                peeled.push(i);
                continue;
            }
            if mag == T::zero() {
                residual.push(i);
                continue;
            }
            let band = (root_n / mag).log2().ceil().max(T::one());
            let band = band.to_f64().unwrap_or(f64::INFINITY);
            if band <= f64::from(level_cap) {
                groups[band as usize - 1].push(i);
            } else {
                residual.push(i);
            }
        }

        let two = real::<T>(2.0);
        let normalized = peel_sum
            + root_n
                * (two.powi(level_cap as i32 + 2)
                    + self.growth_const
                        * two.powi(-(level_cap as i32))
                        * n_t.powf(real::<T>(0.5) + self.beta));
        Ok(DyadicBound {
            bound: normalized / scale,
            level_cap,
            groups,
            residual,
            peeled,
        })
    }
}

impl<T: Real> std::fmt::Debug for SeminormHypothesis<'_, T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SeminormHypothesis")
            .field("beta", &self.beta)
            .field("growth_const", &self.growth_const)
            .field("n", &self.n)
            .finish_non_exhaustive()
    }
}

/// Output of [`SeminormHypothesis::dyadic_group_bound`].
#[derive(Debug, Clone)]
pub struct DyadicBound<T> {
    pub bound: T,
    /// K, the deepest dyadic band kept before the residual.
    pub level_cap: u32,
    /// Index sets σ_1..σ_K (of the original coefficient positions).
    pub groups: Vec<Vec<usize>>,
    /// Indices whose normalized magnitude fell below 2^{−K}√n.
    pub residual: Vec<usize>,
    /// Indices peeled off by the triangle inequality (|a_i| ≥ √n).
    pub peeled: Vec<usize>,
}

/// The extremal seminorm showing the n^{1/4+β/2} factor cannot be improved:
/// ‖Σ a_k w_k‖ = max(Σ_{k ≤ ⌊n^{1/2+β}⌋} |a_k|, max_{k > ⌊n^{1/2+β}⌋} |a_k|).
pub fn sharpness_seminorm<T: Real>(beta: T, n: usize, coeffs: &[T]) -> Result<T> {
    if !(beta >= T::zero() && beta < real(0.5)) {
        return Err(Error::InvalidBeta(beta.to_f64().unwrap_or(f64::NAN)));
    }
    if coeffs.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: coeffs.len(),
        });
    }
    let head = sharpness_head(beta, n);
    let head_sum = coeffs[..head.min(n)]
        .iter()
        .fold(T::zero(), |acc, &a| acc + a.abs());
    let tail_max = coeffs[head.min(n)..]
        .iter()
        .fold(T::zero(), |acc, &a| acc.max(a.abs()));
    Ok(head_sum.max(tail_max))
}

/// ⌊n^{1/2+β}⌋, the head length of the sharpness seminorm.
pub fn sharpness_head<T: Real>(beta: T, n: usize) -> usize {
    let exponent = 0.5 + beta.to_f64().unwrap_or(0.0);
    ((n as f64).powf(exponent).floor() as usize).max(1)
}

/// The witness W = Σ_{k ≤ ⌊n^{1/2+β}⌋} w_k on which the sharpness seminorm
/// attains the n^{1/4+β/2} order: returns its coefficient vector.
pub fn sharpness_witness<T: Real>(beta: T, n: usize) -> Result<Vec<T>> {
    if !(beta >= T::zero() && beta < real(0.5)) {
        return Err(Error::InvalidBeta(beta.to_f64().unwrap_or(f64::NAN)));
    }
    let head = sharpness_head(beta, n).min(n);
    let mut coeffs = vec![T::zero(); n];
    for c in coeffs.iter_mut().take(head) {
        *c = T::one();
    }
    Ok(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::trial_rng;

    type F = DiscreteFunction<f64>;

    fn random_function(rng: &mut ChaCha8Rng, atoms: usize) -> F {
        let pairs: Vec<(f64, f64)> = (0..atoms)
            .map(|_| (rng.random::<f64>() * 8.0 - 4.0, rng.random::<f64>() + 0.05))
            .collect();
        let total: f64 = pairs.iter().map(|&(_, w)| w).sum();
        F::new(pairs.into_iter().map(|(v, w)| (v, w / total))).unwrap()
    }

    #[test]
    fn sign_vector_validates() {
        assert!(SignVector::new(vec![1, -1, 1]).is_ok());
        assert!(SignVector::new(vec![1, 0]).is_err());
        assert!(SignVector::new(vec![]).is_err());
        let mut theta = SignVector::new(vec![1, -1]).unwrap();
        theta.flip(0);
        assert_eq!(theta.as_slice(), &[-1, -1]);
    }

    #[test]
    fn tail_average_examples() {
        let half = F::new([(1.0, 0.5), (0.0, 0.5)]).unwrap();
        assert!((dyadic_tail_average(&half, 1).unwrap() - 1.0).abs() < 1e-14);

        let quarters = F::uniform([4.0, 3.0, 2.0, 1.0]).unwrap();
        assert!((dyadic_tail_average(&quarters, 1).unwrap() - 3.5).abs() < 1e-14);
        assert!((dyadic_tail_average(&quarters, 2).unwrap() - 4.0).abs() < 1e-14);

        assert!(matches!(
            dyadic_tail_average(&quarters, 3),
            Err(Error::NetTooCoarse { .. })
        ));
        assert!(dyadic_tail_average(&quarters, 0).is_err());
    }

    #[test]
    fn tail_average_monotonicity() {
        let mut rng = trial_rng(2, 0);
        for _ in 0..50 {
            let f = random_function(&mut rng, 64);
            let mut prev_avg = 0.0;
            let mut prev_integral = f64::INFINITY;
            for k in 1..=5 {
                let avg = dyadic_tail_average(&f, k).unwrap();
                assert!(avg >= prev_avg - 1e-12);
                // mass · average = the integral over the level set, which
                // shrinks with the mass
                let integral = avg * 0.5f64.powi(k as i32);
                assert!(integral <= prev_integral + 1e-12);
                prev_avg = avg;
                prev_integral = integral;
            }
        }
    }

    #[test]
    fn certificate_constant_function() {
        // F ≡ √n: lhs_k = √n, target √(nk) passes only at k = 1 for c₀ = 1
        let n = 16;
        let f = F::uniform(vec![4.0; 64]).unwrap();
        let report = tail_certificate(&f, n, 4, 1.0).unwrap();
        for row in &report.rows {
            assert!((row.lhs - 4.0).abs() < 1e-12);
            assert_eq!(row.pass, row.k == 1);
        }
        assert!(report.bridge_ok);
    }

    #[test]
    fn certificate_zero_floor_passes_everything() {
        let f = F::uniform([1.0, 2.0, 3.0, 4.0]).unwrap();
        let report = tail_certificate(&f, 4, 2, 0.0).unwrap();
        assert!(report.rows.iter().all(|r| r.pass));
    }

    #[test]
    fn certificate_level_range() {
        let f = F::uniform(vec![1.0; 64]).unwrap();
        assert!(tail_certificate(&f, 16, 5, 0.1).is_err());
        assert!(tail_certificate(&f, 16, 0, 0.1).is_err());
        assert!(tail_certificate(&f, 16, 4, 0.1).is_ok());
    }

    #[test]
    fn bridge_holds_on_random_functions() {
        let mut rng = trial_rng(3, 0);
        for _ in 0..100 {
            let f = random_function(&mut rng, 128);
            let report = tail_certificate(&f, 64, 6, 0.0).unwrap();
            assert!(report.bridge_ok);
        }
    }

    fn l1_system(n: usize) -> FunctionSystem<f64> {
        FunctionSystem::cosine_unit_l1(n, 8).unwrap()
    }

    #[test]
    fn search_single_function() {
        let fs = l1_system(1);
        let opts = SearchOptions {
            attempts: 4,
            c0: 0.05,
            seed: 1,
            delta: 0.25,
            refine: false,
        };
        let report = search_signs(&fs, &opts).unwrap();
        assert_eq!(report.best.theta.len(), 1);
        // |F| = |f₁| regardless of the sign
        let plus = fs.realize(&[1.0], &[1.0]).unwrap().to_discrete();
        let expected = dyadic_tail_average(&plus, 1).unwrap();
        assert!((report.best.rows[0].lhs - expected).abs() < 1e-12);
    }

    #[test]
    fn search_dominates_fixed_signs() {
        let fs = l1_system(16);
        let opts = SearchOptions {
            attempts: 64,
            c0: 0.05,
            seed: 9,
            delta: 0.25,
            refine: false,
        };
        let report = search_signs(&fs, &opts).unwrap();
        // the optimizer's score is at least the score of each attempt it saw
        for i in 0..8u64 {
            let theta = SignVector::sample(16, &mut trial_rng(9, i));
            let f = fs
                .realize(&[1.0; 16], &theta.to_scalars())
                .unwrap()
                .to_discrete();
            let fixed = tail_certificate(&f, 16, 4, 0.05).unwrap();
            let fixed_score = fixed
                .rows
                .iter()
                .map(|r| r.lhs / (16.0 * f64::from(r.k)).sqrt())
                .fold(f64::INFINITY, f64::min);
            assert!(report.best.min_ratio >= fixed_score - 1e-12);
        }
        assert!(report.all_bridge_ok);
    }

    #[test]
    fn search_is_deterministic() {
        let fs = l1_system(8);
        let opts = SearchOptions {
            attempts: 32,
            c0: 0.05,
            seed: 13,
            delta: 0.25,
            refine: true,
        };
        let a = search_signs(&fs, &opts).unwrap();
        let b = search_signs(&fs, &opts).unwrap();
        assert_eq!(a.best.theta, b.best.theta);
        assert_eq!(a.best.min_ratio.to_bits(), b.best.min_ratio.to_bits());
    }

    #[test]
    fn refinement_never_hurts() {
        let fs = l1_system(12);
        let base = SearchOptions {
            attempts: 16,
            c0: 0.05,
            seed: 21,
            delta: 0.25,
            refine: false,
        };
        let refined = SearchOptions {
            refine: true,
            ..base
        };
        let plain = search_signs(&fs, &base).unwrap();
        let better = search_signs(&fs, &refined).unwrap();
        assert!(better.best.min_ratio >= plain.best.min_ratio - 1e-12);
    }

    #[test]
    fn search_rejects_bad_inputs() {
        let fs = l1_system(4);
        let opts = SearchOptions {
            attempts: 0,
            c0: 0.05,
            seed: 0,
            delta: 0.25,
            refine: false,
        };
        assert!(matches!(search_signs(&fs, &opts), Err(Error::ZeroAttempts)));

        // an L²-normalized system fails the L¹ gate
        let l2 = FunctionSystem::<f64>::cosine_unit_l2(4, 8).unwrap();
        let opts = SearchOptions {
            attempts: 4,
            ..opts
        };
        assert!(matches!(
            search_signs(&l2, &opts),
            Err(Error::ConditionGate(_))
        ));
    }

    fn euclidean(coeffs: &[f64]) -> f64 {
        coeffs.iter().map(|a| a * a).sum::<f64>().sqrt()
    }

    #[test]
    fn euclidean_seminorm_passes_probes() {
        let hyp = SeminormHypothesis::new(0.0, 1.0, 32, &euclidean).unwrap();
        hyp.check_probes(50, 7).unwrap();
    }

    #[test]
    fn probe_catches_violations() {
        // max-abs seminorm fails the unit-basis... no, it passes; use a
        // scaled basis instead: ‖w_i‖ = 2
        let doubled = |coeffs: &[f64]| 2.0 * euclidean(coeffs);
        let hyp = SeminormHypothesis::new(0.0, 1.0, 8, &doubled).unwrap();
        assert!(hyp.check_probes(10, 1).is_err());
    }

    #[test]
    fn dyadic_bound_dominates_euclidean() {
        let mut rng = trial_rng(31, 0);
        for &n in &[4usize, 16, 64, 256] {
            let hyp = SeminormHypothesis::new(0.0, 1.0, n, &euclidean).unwrap();
            for _ in 0..20 {
                let coeffs: Vec<f64> = (0..n).map(|_| rng.random::<f64>() * 6.0 - 3.0).collect();
                if euclidean(&coeffs) == 0.0 {
                    continue;
                }
                let out = hyp.dyadic_group_bound(&coeffs).unwrap();
                assert!(
                    out.bound >= euclidean(&coeffs),
                    "n={n}: bound {} < direct {}",
                    out.bound,
                    euclidean(&coeffs)
                );
            }
        }
    }

    #[test]
    fn dyadic_bound_group_counts() {
        let mut rng = trial_rng(37, 0);
        let n = 64;
        let hyp = SeminormHypothesis::new(0.25, 1.0, n, &euclidean).unwrap();
        for _ in 0..50 {
            let coeffs: Vec<f64> = (0..n).map(|_| rng.random::<f64>() * 4.0 - 2.0).collect();
            let out = hyp.dyadic_group_bound(&coeffs).unwrap();
            for (idx, group) in out.groups.iter().enumerate() {
                let k = idx as u32 + 1;
                assert!(
                    group.len() as u64 <= 1u64 << (2 * k),
                    "sigma_{k} has {} members",
                    group.len()
                );
            }
            let assigned: usize = out.groups.iter().map(Vec::len).sum::<usize>()
                + out.residual.len()
                + out.peeled.len();
            assert_eq!(assigned, n);
        }
    }

    #[test]
    fn dyadic_bound_flat_vector() {
        // n = 4: normalized ones have |â_i| = 1 ∈ [√n/2, √n), i.e. σ₁
        let hyp = SeminormHypothesis::new(0.0, 1.0, 4, &euclidean).unwrap();
        let out = hyp.dyadic_group_bound(&[1.0; 4]).unwrap();
        assert_eq!(out.level_cap, 1); // round(0.25·log₂4)
        assert_eq!(out.groups[0].len(), 4);
        assert!(out.residual.is_empty());
        let expected = 2.0 * (8.0 + 0.5 * 2.0);
        assert!((out.bound - expected).abs() < 1e-12);

        // larger flat vectors land in the single band at ceil(log₂√n)
        let n = 64;
        let hyp = SeminormHypothesis::new(0.0, 1.0, n, &euclidean).unwrap();
        let out = hyp.dyadic_group_bound(&vec![1.0; n]).unwrap();
        let occupied: Vec<usize> = out
            .groups
            .iter()
            .enumerate()
            .filter(|(_, g)| !g.is_empty())
            .map(|(i, _)| i + 1)
            .collect();
        let in_groups: usize = out.groups.iter().map(Vec::len).sum();
        assert!(occupied.len() <= 1);
        assert_eq!(in_groups + out.residual.len(), n);
    }

    #[test]
    fn dyadic_bound_scales_homogeneously() {
        let hyp = SeminormHypothesis::new(0.1, 2.0, 16, &euclidean).unwrap();
        let a: Vec<f64> = (1..=16).map(|i| i as f64 / 7.0).collect();
        let b: Vec<f64> = a.iter().map(|x| 3.0 * x).collect();
        let ba = hyp.dyadic_group_bound(&a).unwrap().bound;
        let bb = hyp.dyadic_group_bound(&b).unwrap().bound;
        assert!((bb - 3.0 * ba).abs() < 1e-9 * bb.abs());
    }

    #[test]
    fn dyadic_bound_peels_spikes() {
        // one dominant coefficient normalizes to exactly √n and is peeled
        let n = 16;
        let hyp = SeminormHypothesis::new(0.0, 1.0, n, &euclidean).unwrap();
        let mut coeffs = vec![0.0; n];
        coeffs[3] = 5.0;
        let out = hyp.dyadic_group_bound(&coeffs).unwrap();
        assert_eq!(out.peeled, vec![3]);
        assert!(out.bound >= euclidean(&coeffs));
    }

    #[test]
    fn sharpness_examples() {
        // unit basis vector
        let mut e1 = vec![0.0f64; 100];
        e1[0] = 1.0;
        assert!((sharpness_seminorm(0.0, 100, &e1).unwrap() - 1.0).abs() < 1e-14);

        // all-signs vector: head sum = ⌊n^{1/2+β}⌋
        let signs = vec![1.0; 100];
        let s = sharpness_head(0.0f64, 100);
        assert_eq!(s, 10);
        let value = sharpness_seminorm(0.0, 100, &signs).unwrap();
        assert!((value - s as f64).abs() < 1e-14);
        assert!(value <= 100.0f64.powf(0.5));

        // witness: ‖W‖ = 10 and n^{1/4}·√(Σa²) = √10·√10 = 10
        let witness = sharpness_witness(0.0f64, 100).unwrap();
        let norm = sharpness_seminorm(0.0, 100, &witness).unwrap();
        assert!((norm - 10.0).abs() < 1e-14);
        let l2: f64 = euclidean(&witness);
        let ratio = norm / (100.0f64.powf(0.25) * l2);
        assert!((ratio - 1.0).abs() < 1e-12);

        assert!(sharpness_seminorm(0.5, 100, &signs).is_err());
        assert!(sharpness_seminorm(-0.1, 100, &signs).is_err());
    }

    #[test]
    fn sharpness_seminorm_satisfies_growth_hypothesis() {
        // the displayed seminorm obeys the sign-sum hypothesis with C₁₁ = 1,
        // so the probe suite accepts it
        let n = 64;
        let beta = 0.25f64;
        let oracle = move |coeffs: &[f64]| sharpness_seminorm(beta, n, coeffs).unwrap();
        let hyp = SeminormHypothesis::new(beta, 1.0, n, &oracle).unwrap();
        hyp.check_probes(50, 11).unwrap();
    }
}
