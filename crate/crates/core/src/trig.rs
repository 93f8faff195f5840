//! Trigonometric polynomials on the circle with the normalized measure
//! dt/(2π), their kernels, derivatives, and uniform-net discretizations.
//!
//! A polynomial of order n is stored by its complex coefficients c_j,
//! j = −n..n. Evaluation on a uniform net uses an inverse FFT whenever the
//! net is fine enough to avoid aliasing, and direct summation otherwise.

use std::io;
use std::path::Path;

use num_complex::Complex;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::norm::{csv_error, DiscreteFunction};
use crate::scalar::{mass_tolerance, real, real_usize, Real};

/// Kernel families with closed-form coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KernelKind {
    /// c_j = 1 − |j|/(n+1); nonnegative, unit mean.
    Fejer,
    /// c_j = 1 for all |j| ≤ n.
    Dirichlet,
}

impl KernelKind {
    pub fn name(self) -> &'static str {
        match self {
            KernelKind::Fejer => "fejer",
            KernelKind::Dirichlet => "dirichlet",
        }
    }
}

impl std::str::FromStr for KernelKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "fejer" => Ok(KernelKind::Fejer),
            "dirichlet" => Ok(KernelKind::Dirichlet),
            other => Err(format!("unknown kernel kind `{other}`")),
        }
    }
}

/// A trigonometric polynomial Σ_{j=−n..n} c_j e^{ijx}.
#[derive(Debug, Clone)]
pub struct TrigPoly<T> {
    order: usize,
    /// c_j stored at index j + order.
    coeffs: Vec<Complex<T>>,
    real_valued: bool,
}

impl<T: Real> TrigPoly<T> {
    /// Builds a polynomial from coefficients c_{−n}, …, c_n (length 2n+1).
    /// Real-valuedness (c_{−j} = conj(c_j)) is detected automatically.
    pub fn new(coeffs: Vec<Complex<T>>) -> Result<Self> {
        if coeffs.is_empty() || coeffs.len().is_multiple_of(2) {
            return Err(Error::EvenCoefficientCount(coeffs.len()));
        }
        if coeffs
            .iter()
            .any(|c| !c.re.is_finite() || !c.im.is_finite())
        {
            return Err(Error::NonFinite);
        }
        let order = coeffs.len() / 2;
        let scale = coeffs.iter().fold(T::one(), |acc, c| acc + c.norm());
        let tol = mass_tolerance::<T>() * scale;
        let real_valued = (0..=order).all(|j| {
            let diff = coeffs[order - j] - coeffs[order + j].conj();
            diff.norm() <= tol
        });
        Ok(Self {
            order,
            coeffs,
            real_valued,
        })
    }

    /// The constant polynomial c₀ = c.
    pub fn constant(c: T) -> Self {
        Self {
            order: 0,
            coeffs: vec![Complex::new(c, T::zero())],
            real_valued: true,
        }
    }

    /// cos(kx), i.e. c_{±k} = 1/2 (k = 0 gives the constant 1).
    pub fn cosine(k: usize) -> Self {
        if k == 0 {
            return Self::constant(T::one());
        }
        let mut coeffs = vec![Complex::new(T::zero(), T::zero()); 2 * k + 1];
        coeffs[0] = Complex::new(real(0.5), T::zero());
        coeffs[2 * k] = Complex::new(real(0.5), T::zero());
        Self {
            order: k,
            coeffs,
            real_valued: true,
        }
    }

    /// A random real-valued polynomial of order n: c₀ standard normal, and
    /// independent complex Gaussian c_j (variance 1/2 per component) for
    /// j ≥ 1 mirrored to keep the polynomial real.
    pub fn random_real(n: usize, rng: &mut ChaCha8Rng) -> Self
    where
        StandardNormal: Distribution<T>,
    {
        let half = real::<T>(0.5).sqrt();
        let mut coeffs = vec![Complex::new(T::zero(), T::zero()); 2 * n + 1];
        coeffs[n] = Complex::new(rng.sample(StandardNormal), T::zero());
        for j in 1..=n {
            let re: T = rng.sample::<T, _>(StandardNormal) * half;
            let im: T = rng.sample::<T, _>(StandardNormal) * half;
            coeffs[n + j] = Complex::new(re, im);
            coeffs[n - j] = Complex::new(re, -im);
        }
        Self {
            order: n,
            coeffs,
            real_valued: true,
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Coefficient c_j; zero outside −n..n.
    pub fn coeff(&self, j: isize) -> Complex<T> {
        let order = self.order as isize;
        if j.abs() > order {
            Complex::new(T::zero(), T::zero())
        } else {
            self.coeffs[(j + order) as usize]
        }
    }

    pub fn coeffs(&self) -> &[Complex<T>] {
        &self.coeffs
    }

    pub fn is_real_valued(&self) -> bool {
        self.real_valued
    }

    /// Evaluates Σ c_j e^{ijx} by a phase recurrence in e^{ix}.
    pub fn eval(&self, x: T) -> Complex<T> {
        let w = Complex::from_polar(T::one(), x);
        let mut fwd = Complex::new(T::one(), T::zero());
        let mut acc = self.coeffs[self.order];
        for j in 1..=self.order {
            fwd = fwd * w;
            acc =
                acc + self.coeffs[self.order + j] * fwd + self.coeffs[self.order - j] * fwd.conj();
        }
        acc
    }

    /// Real evaluation for real-valued polynomials.
    pub fn eval_real(&self, x: T) -> T {
        self.eval(x).re
    }

    /// Values P(t_k) at t_k = 2πk/N, k = 0..N−1.
    ///
    /// Uses an inverse FFT when N ≥ 2n+1 (alias-free); direct summation
    /// otherwise, so the samples always equal pointwise evaluation.
    pub fn samples_complex(&self, n_points: usize) -> Result<Vec<Complex<T>>> {
        if n_points == 0 {
            return Err(Error::EmptyNet);
        }
        if n_points >= self.coeffs.len() {
            let mut buffer = vec![Complex::new(T::zero(), T::zero()); n_points];
            for (slot, &c) in buffer.iter_mut().zip(&self.coeffs[self.order..]) {
                *slot = c;
            }
            for j in 1..=self.order {
                buffer[n_points - j] = buffer[n_points - j] + self.coeffs[self.order - j];
            }
            FftPlanner::new()
                .plan_fft_inverse(n_points)
                .process(&mut buffer);
            Ok(buffer)
        } else {
            let step = real::<T>(2.0) * T::PI() / real_usize(n_points);
            Ok((0..n_points)
                .map(|k| self.eval(step * real_usize(k)))
                .collect())
        }
    }

    /// Samples of a real-valued polynomial on the uniform N-point net.
    pub fn sample_on_net(&self, n_points: usize) -> Result<NetVector<T>> {
        if !self.real_valued {
            return Err(Error::NotRealValued);
        }
        let samples = self.samples_complex(n_points)?;
        NetVector::new(samples.into_iter().map(|c| c.re).collect())
    }

    /// |P(t_k)| on the uniform N-point net, valid for any polynomial.
    pub fn modulus_on_net(&self, n_points: usize) -> Result<NetVector<T>> {
        let samples = self.samples_complex(n_points)?;
        NetVector::new(samples.into_iter().map(|c| c.norm()).collect())
    }

    /// The r-th derivative via the coefficient map c_j ↦ (ij)^r c_j.
    pub fn analytic_derivative(&self, r: u32) -> Self {
        let order = self.order as isize;
        let mut coeffs = self.coeffs.clone();
        for (idx, c) in coeffs.iter_mut().enumerate() {
            let j = idx as isize - order;
            let factor = Complex::new(T::zero(), real::<T>(j as f64));
            for _ in 0..r {
                *c = *c * factor;
            }
        }
        Self {
            order: self.order,
            coeffs,
            real_valued: self.real_valued,
        }
    }

    /// First derivative at `x` by the M. Riesz interpolation formula:
    /// P′(x) = Σ_{k=1}^{2n} (−1)^{k+1} λ_k P(x + x_k) with
    /// x_k = (2k−1)π/(2n) and λ_k = 1/(4n sin²(x_k/2)).
    pub fn riesz_derivative(&self, x: T) -> Result<T> {
        if self.order == 0 {
            return Err(Error::ZeroOrder);
        }
        if !self.real_valued {
            return Err(Error::NotRealValued);
        }
        let mut total = T::zero();
        for (node, weight) in riesz_nodes_weights::<T>(self.order) {
            total = total + weight * self.eval_real(x + node);
        }
        Ok(total)
    }

    /// max_k |P(t_k)| over the uniform 4n net. By the Bernstein-type net
    /// argument the true sup is between this value and value/(1 − π/4).
    pub fn uniform_norm_estimate(&self) -> T {
        let n_points = (4 * self.order).max(1);
        self.modulus_on_net(n_points)
            .expect("nonempty net")
            .max_abs()
    }

    /// Reads the `j,re,im` CSV coefficient format (rows for j = −n..n in any
    /// order, no gaps or duplicates).
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
        if columns != ["j", "re", "im"] {
            return Err(Error::Csv {
                line: 1,
                message: format!("expected header `j,re,im`, got `{}`", columns.join(",")),
            });
        }
        let mut rows: Vec<(isize, Complex<T>)> = Vec::new();
        for record in csv_reader.records() {
            let record = record.map_err(csv_error)?;
            let line = record.position().map_or(0, |p| p.line());
            if record.len() != 3 {
                return Err(Error::Csv {
                    line,
                    message: format!("expected 3 fields, got {}", record.len()),
                });
            }
            let j: isize = record[0].trim().parse().map_err(|_| Error::Csv {
                line,
                message: format!("cannot parse index `{}`", &record[0]),
            })?;
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
            rows.push((j, Complex::new(parse(&record[1])?, parse(&record[2])?)));
        }
        if rows.is_empty() {
            return Err(Error::Csv {
                line: 1,
                message: "no coefficient rows".into(),
            });
        }
        let order = rows.iter().map(|(j, _)| j.unsigned_abs()).max().unwrap();
        let mut coeffs = vec![None; 2 * order + 1];
        for (j, c) in rows {
            let idx = (j + order as isize) as usize;
            if coeffs[idx].replace(c).is_some() {
                return Err(Error::Csv {
                    line: 0,
                    message: format!("duplicate coefficient index {j}"),
                });
            }
        }
        let coeffs: Vec<Complex<T>> = coeffs
            .into_iter()
            .enumerate()
            .map(|(idx, c)| {
                c.ok_or_else(|| Error::Csv {
                    line: 0,
                    message: format!(
                        "missing coefficient index {}",
                        idx as isize - order as isize
                    ),
                })
            })
            .collect::<Result<_>>()?;
        Self::new(coeffs)
    }

    /// Writes the `j,re,im` CSV coefficient format.
    pub fn write_csv(&self, writer: impl io::Write) -> Result<()> {
        let mut csv_writer = csv::Writer::from_writer(writer);
        csv_writer
            .write_record(["j", "re", "im"])
            .map_err(csv_error)?;
        let order = self.order as isize;
        for j in -order..=order {
            let c = self.coeff(j);
            csv_writer
                .write_record([format!("{j}"), format!("{}", c.re), format!("{}", c.im)])
                .map_err(csv_error)?;
        }
        csv_writer.flush()?;
        Ok(())
    }
}

/// The (node, signed weight) pairs of the M. Riesz interpolation formula for
/// order n: node x_k = (2k−1)π/(2n), weight (−1)^{k+1}/(4n sin²(x_k/2)).
/// The unsigned weights sum to n.
pub fn riesz_nodes_weights<T: Real>(n: usize) -> Vec<(T, T)> {
    let n_t = real_usize::<T>(n);
    let four_n = real::<T>(4.0) * n_t;
    (1..=2 * n)
        .map(|k| {
            let node = real::<T>((2 * k - 1) as f64) * T::PI() / (real::<T>(2.0) * n_t);
            let sin_half = (node / real(2.0)).sin();
            let lambda = (four_n * sin_half * sin_half).recip();
            let weight = if k % 2 == 1 { lambda } else { -lambda };
            (node, weight)
        })
        .collect()
}

/// The Fejér or Dirichlet kernel of order n.
pub fn kernel<T: Real>(kind: KernelKind, n: usize) -> TrigPoly<T> {
    let coeffs = (0..=2 * n)
        .map(|idx| {
            let j = idx as isize - n as isize;
            let c = match kind {
                KernelKind::Fejer => {
                    T::one() - real::<T>(j.unsigned_abs() as f64) / real::<T>((n + 1) as f64)
                }
                KernelKind::Dirichlet => T::one(),
            };
            Complex::new(c, T::zero())
        })
        .collect();
    TrigPoly::new(coeffs).expect("kernel coefficients are valid")
}

/// Function samples on a uniform net of the circle, viewed as a discrete
/// function with masses 1/N.
#[derive(Debug, Clone)]
pub struct NetVector<T> {
    samples: Vec<T>,
    origin: T,
}

impl<T: Real> NetVector<T> {
    pub fn new(samples: Vec<T>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::EmptyNet);
        }
        if samples.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self {
            samples,
            origin: T::zero(),
        })
    }

    pub fn with_origin(mut self, origin: T) -> Self {
        self.origin = origin;
        self
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn samples(&self) -> &[T] {
        &self.samples
    }

    pub fn origin(&self) -> T {
        self.origin
    }

    /// Net point t_k = origin + k·2π/N (k zero-based).
    pub fn point(&self, k: usize) -> T {
        self.origin + real::<T>(2.0) * T::PI() * real_usize(k) / real_usize(self.samples.len())
    }

    /// The uniform-mass discrete function carried by the samples.
    pub fn to_discrete(&self) -> DiscreteFunction<T> {
        DiscreteFunction::uniform(self.samples.iter().copied()).expect("nonempty finite net")
    }

    /// ‖x‖_{m,∞} = N^{−m} Σ_{k_1..k_m} max_j |x_{k_j}|, computed through the
    /// sorted-level formula in O(N log N).
    pub fn m_norm(&self, m: u64) -> Result<T> {
        self.to_discrete().m_norm(m)
    }

    pub fn max_abs(&self) -> T {
        self.samples.iter().map(|v| v.abs()).fold(T::zero(), T::max)
    }

    /// Mean of |samples| (the net L¹ norm).
    pub fn l1_norm(&self) -> T {
        self.samples
            .iter()
            .map(|v| v.abs())
            .fold(T::zero(), |acc, x| acc + x)
            / real_usize(self.samples.len())
    }

    /// Writes the `k,t_k,value` CSV format (k one-based).
    pub fn write_csv(&self, writer: impl io::Write) -> Result<()> {
        let mut csv_writer = csv::Writer::from_writer(writer);
        csv_writer
            .write_record(["k", "t_k", "value"])
            .map_err(csv_error)?;
        for (k, value) in self.samples.iter().enumerate() {
            csv_writer
                .write_record([
                    format!("{}", k + 1),
                    format!("{}", self.point(k)),
                    format!("{value}"),
                ])
                .map_err(csv_error)?;
        }
        csv_writer.flush()?;
        Ok(())
    }
}

/// Comparison of the m-norm on the coarse 8n net against a fine-net proxy
/// for the continuous norm.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct DiscretizationGap<T> {
    /// m-norm on the fine (fine_factor·8n) net, standing in for ‖P‖_{m,∞}.
    pub continuous_approx: T,
    /// m-norm on the 8n net.
    pub net8n: T,
    /// |continuous_approx − net8n| / continuous_approx (0 for the zero poly).
    pub rel_gap: T,
}

/// Measures how well the canonical 8n net captures ‖P‖_{m,∞}. The net
/// argument bounds the relative gap by π/4.
pub fn discretization_gap<T: Real>(
    poly: &TrigPoly<T>,
    m: u64,
    fine_factor: usize,
) -> Result<DiscretizationGap<T>> {
    if fine_factor < 8 {
        return Err(Error::FineFactorTooSmall {
            min: 8,
            got: fine_factor,
        });
    }
    let n = poly.order().max(1);
    let coarse = poly.sample_on_net(8 * n)?.m_norm(m)?;
    let fine = poly.sample_on_net(fine_factor * 8 * n)?.m_norm(m)?;
    let rel_gap = if fine == T::zero() {
        T::zero()
    } else {
        (fine - coarse).abs() / fine
    };
    Ok(DiscretizationGap {
        continuous_approx: fine,
        net8n: coarse,
        rel_gap,
    })
}
