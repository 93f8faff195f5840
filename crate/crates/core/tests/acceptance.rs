//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line
//! (run with `--nocapture` to see them). Stochastic checks are seeded and
//! state their independent oracle next to the assertion.

// `ensure!(a <= b, ...)` negates the comparison so a NaN fails the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::time::Instant;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use iunorm_core::ensemble::{
    expected_m_norms, lower_bound_scale, salem_zygmund_ratio, uniform_upper_scale,
    CoefficientVector, EnsembleSpec, FunctionSystem, XiKind,
};
use iunorm_core::norm::{indicator_m_norm, DiscreteFunction};
use iunorm_core::rng::trial_rng;
use iunorm_core::signs::{
    search_signs, sharpness_head, sharpness_seminorm, sharpness_witness, SearchOptions,
    SeminormHypothesis,
};
use iunorm_core::trig::{discretization_gap, kernel, KernelKind, TrigPoly};

type F = DiscreteFunction<f64>;

fn criterion(id: u32, name: &str, check: impl FnOnce() -> Result<(), String>) {
    match check() {
        Ok(()) => println!("criterion {id:02} {name}: PASS"),
        Err(msg) => {
            println!("criterion {id:02} {name}: FAIL ({msg})");
            panic!("criterion {id:02} {name} failed: {msg}");
        }
    }
}

macro_rules! ensure {
    ($cond:expr, $($arg:tt)*) => {
        if !$cond {
            return Err(format!($($arg)*));
        }
    };
}

fn random_function(rng: &mut ChaCha8Rng, max_atoms: usize) -> F {
    let atoms = 1 + (rng.random::<u32>() as usize) % max_atoms;
    let pairs: Vec<(f64, f64)> = (0..atoms)
        .map(|_| (rng.random::<f64>() * 10.0 - 5.0, rng.random::<f64>() + 0.02))
        .collect();
    let total: f64 = pairs.iter().map(|&(_, w)| w).sum();
    F::new(pairs.into_iter().map(|(v, w)| (v, w / total))).unwrap()
}

/// Independent oracle: full enumeration of the |atoms|^m weighted outcome
/// tuples.
fn enumerated_m_norm(f: &F, m: u32) -> f64 {
    let atoms = f.atoms();
    let mut total = 0.0;
    let mut index = vec![0usize; m as usize];
    loop {
        let mut weight = 1.0;
        let mut max = 0.0f64;
        for &i in &index {
            weight *= atoms[i].mass;
            max = max.max(atoms[i].value.abs());
        }
        total += weight * max;
        let mut pos = 0;
        loop {
            if pos == index.len() {
                return total;
            }
            index[pos] += 1;
            if index[pos] < atoms.len() {
                break;
            }
            index[pos] = 0;
            pos += 1;
        }
    }
}

/// Average of |f| over a random fractional subset of mass exactly `p`.
fn random_set_average(f: &F, p: f64, rng: &mut ChaCha8Rng) -> f64 {
    let mut order: Vec<usize> = (0..f.atoms().len()).collect();
    for i in (1..order.len()).rev() {
        let j = rng.random_range(0..=i);
        order.swap(i, j);
    }
    let mut remaining = p;
    let mut integral = 0.0;
    for &i in &order {
        let atom = f.atoms()[i];
        let take = atom.mass.min(remaining);
        integral += atom.value.abs() * take;
        remaining -= take;
        if remaining <= 0.0 {
            break;
        }
    }
    integral / p
}

#[test]
fn criterion_01_oracle_equivalence() {
    criterion(1, "exact norm matches tuple enumeration", || {
        let start = Instant::now();
        let mut rng = trial_rng(101, 0);
        for case in 0..500 {
            let f = random_function(&mut rng, 5);
            for m in 1..=4u32 {
                let exact = f.m_norm(m as u64).unwrap();
                let oracle = enumerated_m_norm(&f, m);
                ensure!(
                    (exact - oracle).abs() <= 1e-12,
                    "case {case} m={m}: exact {exact} vs oracle {oracle}"
                );
            }
        }
        let elapsed = start.elapsed();
        ensure!(elapsed.as_secs_f64() < 5.0, "took {elapsed:?}, limit 5 s");
        Ok(())
    });
}

#[test]
fn criterion_02_indicator_closed_form() {
    criterion(2, "indicator norm matches the 2-atom function", || {
        let ps = [
            1e-6, 1e-5, 1e-4, 1e-3, 0.01, 0.1, 0.25, 0.5, 0.75, 0.9, 0.99, 0.999,
        ];
        let ms = [1u64, 2, 3, 10, 100, 1_000, 10_000, 100_000, 1_000_000];
        for &p in &ps {
            let f = F::new([(1.0, p), (0.0, 1.0 - p)]).unwrap();
            for &m in &ms {
                let closed = indicator_m_norm(p, m).unwrap();
                let exact = f.m_norm(m).unwrap();
                ensure!(
                    (closed - exact).abs() <= 1e-10,
                    "p={p} m={m}: {closed} vs {exact}"
                );
            }
        }
        Ok(())
    });
}

#[test]
fn criterion_03_distribution_route() {
    criterion(3, "distribution-function route agrees", || {
        let mut rng = trial_rng(103, 0);
        for case in 0..1000 {
            let f = random_function(&mut rng, 12);
            for m in [1u64, 2, 3, 17, 1000] {
                let a = f.m_norm(m).unwrap();
                let b = f.m_norm_from_distribution(m).unwrap();
                ensure!((a - b).abs() <= 1e-12, "case {case} m={m}: {a} vs {b}");
            }
        }
        Ok(())
    });
}

#[test]
fn criterion_04_doubling_and_monotonicity() {
    criterion(4, "doubling inequality and m-monotonicity", || {
        let mut rng = trial_rng(104, 0);
        for case in 0..1000 {
            let f = random_function(&mut rng, 10);
            let norms: Vec<f64> = (1..=64u64).map(|m| f.m_norm(m).unwrap()).collect();
            for i in 1..norms.len() {
                ensure!(
                    norms[i] >= norms[i - 1] - 1e-12,
                    "case {case}: not monotone at m={}",
                    i + 1
                );
            }
            for n in 2..=64usize {
                for m in 1..n {
                    let cap = (n as f64 / m as f64 + 1.0) * norms[m - 1];
                    ensure!(
                        norms[n - 1] <= cap + 1e-12,
                        "case {case}: m={m} n={n}: {} > {cap}",
                        norms[n - 1]
                    );
                }
            }
        }
        Ok(())
    });
}

#[test]
fn criterion_05_set_average_bound() {
    criterion(5, "set-average lower bound", || {
        let mut rng = trial_rng(105, 0);
        for case in 0..1000 {
            let f = random_function(&mut rng, 10);
            let p = rng.random::<f64>().max(0.01);
            let m = 1 + rng.random::<u32>() as u64 % 32;
            let (lhs, rhs) = f.set_average_lower_bound(p, m).unwrap();
            ensure!(
                lhs >= rhs - 1e-12,
                "case {case}: top set p={p} m={m}: lhs {lhs} < rhs {rhs}"
            );
            let scale = indicator_m_norm(p, m).unwrap();
            for _ in 0..50 {
                let weaker = scale * random_set_average(&f, p, &mut rng);
                ensure!(
                    lhs >= weaker - 1e-12,
                    "case {case}: random set p={p} m={m}: lhs {lhs} < rhs {weaker}"
                );
            }
        }
        Ok(())
    });
}

#[test]
fn criterion_06_riesz_interpolation() {
    criterion(6, "interpolation derivative matches coefficients", || {
        let mut rng = trial_rng(106, 0);
        for case in 0..100 {
            let n = 1 + rng.random::<u32>() as usize % 128;
            let p = TrigPoly::<f64>::random_real(n, &mut rng);
            let d = p.analytic_derivative(1);
            let tol = 1e-8 * n as f64 * p.uniform_norm_estimate().max(f64::MIN_POSITIVE);
            for _ in 0..32 {
                let x = rng.random::<f64>() * 2.0 * std::f64::consts::PI;
                let riesz = p.riesz_derivative(x).unwrap();
                let direct = d.eval_real(x);
                ensure!(
                    (riesz - direct).abs() <= tol,
                    "case {case} n={n} x={x}: {riesz} vs {direct}"
                );
            }
            let weight_sum: f64 = iunorm_core::trig::riesz_nodes_weights::<f64>(n)
                .iter()
                .map(|&(_, w)| w.abs())
                .sum();
            ensure!(
                (weight_sum - n as f64).abs() <= 1e-9 * n as f64,
                "case {case} n={n}: weights sum to {weight_sum}"
            );
        }
        Ok(())
    });
}

#[test]
fn criterion_07_derivative_norm_inequality() {
    criterion(7, "derivative m-norm bounded by n times the norm", || {
        let mut rng = trial_rng(107, 0);
        for case in 0..100 {
            let n = 1 + rng.random::<u32>() as usize % 128;
            let p = TrigPoly::<f64>::random_real(n, &mut rng);
            let d = p.analytic_derivative(1);
            let base = p.sample_on_net(64 * n).unwrap().to_discrete();
            let deriv = d.sample_on_net(64 * n).unwrap().to_discrete();
            for m in [1u64, 4, 16] {
                let lhs = deriv.m_norm(m).unwrap();
                let rhs = 1.02 * n as f64 * base.m_norm(m).unwrap();
                ensure!(lhs <= rhs, "case {case} n={n} m={m}: {lhs} > {rhs}");
            }
        }
        Ok(())
    });
}

#[test]
fn criterion_08_net_discretization() {
    criterion(8, "8n-net norm close to the fine-net norm", || {
        let mut rng = trial_rng(108, 0);
        for case in 0..100 {
            let n = 1 + rng.random::<u32>() as usize % 64;
            let p = TrigPoly::<f64>::random_real(n, &mut rng);
            for m in [1u64, 4, 16] {
                let gap = discretization_gap(&p, m, 64).unwrap();
                ensure!(
                    gap.rel_gap <= 0.8,
                    "case {case} n={n} m={m}: rel_gap {}",
                    gap.rel_gap
                );
            }
        }
        Ok(())
    });
}

#[test]
fn criterion_09_kernel_asymptotics() {
    criterion(9, "kernel m-norm growth rates", || {
        let start = Instant::now();
        let n = 1024usize;
        for kind in [KernelKind::Fejer, KernelKind::Dirichlet] {
            let net = kernel::<f64>(kind, n)
                .sample_on_net(8 * n)
                .unwrap()
                .to_discrete();
            let mut lo = f64::INFINITY;
            let mut hi = 0.0f64;
            let mut m = 2u64;
            while m <= 512 {
                let norm = net.m_norm(m).unwrap();
                let scale = match kind {
                    KernelKind::Fejer => m as f64,
                    KernelKind::Dirichlet => m as f64 * (1.0 + (n as f64 / m as f64).ln()),
                };
                let ratio = norm / scale;
                lo = lo.min(ratio);
                hi = hi.max(ratio);
                m *= 2;
            }
            ensure!(
                hi / lo <= 6.0,
                "{}: ratio spread {} exceeds 6",
                kind.name(),
                hi / lo
            );
        }
        let elapsed = start.elapsed();
        ensure!(
            elapsed.as_secs_f64() < 120.0,
            "took {elapsed:?}, limit 2 min"
        );
        Ok(())
    });
}

#[test]
fn criterion_10_salem_zygmund_flatness() {
    criterion(10, "sup-norm ratios flat in sqrt(n ln n)", || {
        let start = Instant::now();
        let mut ratios = Vec::new();
        for n in [64usize, 256, 1024, 4096] {
            let est = salem_zygmund_ratio::<f64>(n, 200, 42).unwrap();
            ratios.push(est.mean);
        }
        let lo = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = ratios.iter().cloned().fold(0.0f64, f64::max);
        ensure!(hi / lo <= 2.0, "ratios {ratios:?}: spread {}", hi / lo);
        let elapsed = start.elapsed();
        ensure!(
            elapsed.as_secs_f64() < 300.0,
            "took {elapsed:?}, limit 5 min"
        );
        Ok(())
    });
}

#[test]
fn criterion_11_norm_sandwich() {
    criterion(11, "expected norm between its two scales", || {
        let spec = EnsembleSpec::<f64>::new(XiKind::Rademacher, 1.0).unwrap();
        let ms = [4u64, 16, 64, 256];
        let mut low_ratios = Vec::new();
        for n in [64usize, 256, 1024] {
            let fs = FunctionSystem::<f64>::cosine_unit_l2(n, 8).unwrap();
            fs.check_l2_gate(2.0).map_err(|e| e.to_string())?;
            let a = CoefficientVector::<f64>::ones(n);
            let seed = 7 + n as u64;
            let ests = expected_m_norms(&spec, &a, &fs, &ms, 200, seed).unwrap();
            for (&m, est) in ms.iter().zip(&ests) {
                let low = est.mean / lower_bound_scale(&a, m).unwrap();
                let high = est.mean / uniform_upper_scale(&fs, &a, m).unwrap();
                ensure!(low > 0.0, "n={n} m={m}: ratio_low {low}");
                ensure!(high <= 1.0, "n={n} m={m}: ratio_high {high} > 1");
                low_ratios.push(low);
            }
        }
        let lo = low_ratios.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = low_ratios.iter().cloned().fold(0.0f64, f64::max);
        ensure!(
            hi / lo <= 8.0,
            "ratio_low window [{lo}, {hi}]: spread {}",
            hi / lo
        );
        Ok(())
    });
}

#[test]
fn criterion_12_sign_search_certificate() {
    criterion(12, "searched signs certify every dyadic level", || {
        for n in [64usize, 256] {
            let fs = FunctionSystem::<f64>::cosine_unit_l1(n, 8).unwrap();
            fs.check_l1_gate(0.02).map_err(|e| e.to_string())?;
            let opts = SearchOptions {
                attempts: 2000,
                c0: 0.05,
                seed: 11,
                delta: 0.25,
                refine: false,
            };
            let report = search_signs(&fs, &opts).unwrap();
            ensure!(
                report.best.min_ratio >= 0.05,
                "n={n}: min ratio {} below the 0.05 floor",
                report.best.min_ratio
            );
            ensure!(
                report.best.rows.len() as u32 == iunorm_core::signs::max_level(n),
                "n={n}: certificate misses levels"
            );
            ensure!(
                report.best.rows.iter().all(|r| r.pass),
                "n={n}: some level fails at c0 = 0.05"
            );
            ensure!(report.all_bridge_ok, "n={n}: bridge inequality violated");
        }
        Ok(())
    });
}

#[test]
fn criterion_13_grouping_bound() {
    criterion(13, "dyadic grouping bound sound and sharp", || {
        let euclidean = |coeffs: &[f64]| coeffs.iter().map(|a| a * a).sum::<f64>().sqrt();
        let mut rng = trial_rng(113, 0);
        for case in 0..200 {
            let n = 4 + rng.random::<u32>() as usize % 253;
            let hyp = SeminormHypothesis::new(0.0, 1.0, n, &euclidean).unwrap();
            let coeffs: Vec<f64> = (0..n).map(|_| rng.random::<f64>() * 6.0 - 3.0).collect();
            if euclidean(&coeffs) == 0.0 {
                continue;
            }
            let out = hyp.dyadic_group_bound(&coeffs).unwrap();
            let direct = euclidean(&coeffs);
            ensure!(
                out.bound >= direct,
                "case {case} n={n}: bound {} < direct {direct}",
                out.bound
            );
            for (idx, group) in out.groups.iter().enumerate() {
                let k = idx as u32 + 1;
                ensure!(
                    (group.len() as u64) <= 1u64 << (2 * k),
                    "case {case} n={n}: |sigma_{k}| = {}",
                    group.len()
                );
            }
        }
        for beta in [0.0, 0.1, 0.25] {
            for exp in [8u32, 10, 12, 14, 16] {
                let n = 1usize << exp;
                let witness = sharpness_witness::<f64>(beta, n).unwrap();
                let value = sharpness_seminorm(beta, n, &witness).unwrap();
                let head = sharpness_head(beta, n) as f64;
                ensure!(
                    (value - head).abs() < 1e-9,
                    "beta={beta} n={n}: witness norm {value} != {head}"
                );
                let l2 = witness.iter().map(|a| a * a).sum::<f64>().sqrt();
                let ratio = value / ((n as f64).powf(0.25 + beta / 2.0) * l2);
                ensure!(
                    (0.25..=4.0).contains(&ratio),
                    "beta={beta} n={n}: witness ratio {ratio}"
                );
            }
        }
        Ok(())
    });
}
