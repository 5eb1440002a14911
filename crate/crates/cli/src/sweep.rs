//! Randomized consistency suites over seeded samples.

use clap::ValueEnum;
use rayon::prelude::*;
use serde::Serialize;
use spectral_chart::exact::{GaussianRational, MatGR};
use spectral_chart::linebundle::petri_strongreg_crosscheck;
use spectral_chart::polymat::{mp_char_poly, QuadraticDatum};
use spectral_chart::realform::{conjugation_transport, gram_certificate, product_section};

use crate::gen;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Exact,
    ExactWithFloatCorroboration,
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub mode: Mode,
    pub seed: u64,
    pub samples: usize,
    pub ks: Vec<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SuiteCount {
    pub suite: &'static str,
    pub k: usize,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub suite: &'static str,
    pub k: usize,
    pub sample: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepReport {
    pub seed: u64,
    pub samples: usize,
    pub mode: Mode,
    pub suites: Vec<SuiteCount>,
    pub failures: Vec<Failure>,
    /// Largest `|det(ηI − A(ζ)) − P(ζ, η)|` seen in floating point; reported only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub float_residual: Option<f64>,
}

impl SweepReport {
    pub fn all_passed(&self) -> bool {
        self.failures.is_empty()
    }
}

pub const SUITES: [&str; 3] = ["petri-strongreg", "congruence", "gamma"];

#[derive(Clone, Copy, PartialEq, Eq)]
enum Check {
    Pass,
    Fail,
    Skip,
}

fn crosscheck(a: &QuadraticDatum) -> bool {
    petri_strongreg_crosscheck(a).map(|c| c.consistent).unwrap_or(false)
}

fn congruence(a: &QuadraticDatum, g: &MatGR) -> Check {
    if gram_certificate(a).is_err() {
        return Check::Skip;
    }
    match conjugation_transport(a, g) {
        Ok(t) if t.gram_matches && t.signature_preserved => Check::Pass,
        _ => Check::Fail,
    }
}

fn gamma(a: &QuadraticDatum) -> Check {
    let Ok(cert) = gram_certificate(a) else { return Check::Skip };
    let k = a.k();
    let e = |i: usize| (0..k).map(|j| if i == j { GaussianRational::one() } else { GaussianRational::zero() }).collect::<Vec<_>>();
    for s in 0..k {
        for t in 0..k {
            match product_section(a, &cert.gram, &e(s), &e(t)) {
                Ok(ps) if ps.gamma_ok && (ps.kappa == Some(1) || ps.b.is_zero()) => {}
                _ => return Check::Fail,
            }
        }
    }
    Check::Pass
}

/// `|det(ηI − A(ζ)) − P(ζ, η)|` at a few points, by Gaussian elimination in f64.
pub fn float_residual(a: &QuadraticDatum) -> f64 {
    let p = mp_char_poly(a);
    let k = a.k();
    let mut worst: f64 = 0.0;
    for (z, eta) in [((0.5, 0.25), (-0.75, 1.0)), ((-1.25, 0.5), (0.3, -0.6)), ((2.0, -1.0), (1.5, 0.5))] {
        let zg = to_gr(z);
        let eg = to_gr(eta);
        let exact = p.eval(&zg, &eg).to_f64_pair();
        let m = a.eval(&zg);
        let mut rows: Vec<Vec<(f64, f64)>> = (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| {
                        let (re, im) = m.get(i, j).to_f64_pair();
                        if i == j {
                            (eta.0 - re, eta.1 - im)
                        } else {
                            (-re, -im)
                        }
                    })
                    .collect()
            })
            .collect();
        let det = complex_det(&mut rows);
        worst = worst.max(((det.0 - exact.0).powi(2) + (det.1 - exact.1).powi(2)).sqrt());
    }
    worst
}

fn to_gr((re, im): (f64, f64)) -> GaussianRational {
    let q = |x: f64| ((x * 100.0).round() as i64, 100);
    let (a, b) = q(re);
    let (c, d) = q(im);
    GaussianRational::from_ratios(a, b, c, d)
}

fn complex_det(m: &mut [Vec<(f64, f64)>]) -> (f64, f64) {
    let n = m.len();
    let mul = |a: (f64, f64), b: (f64, f64)| (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0);
    let div = |a: (f64, f64), b: (f64, f64)| {
        let d = b.0 * b.0 + b.1 * b.1;
        ((a.0 * b.0 + a.1 * b.1) / d, (a.1 * b.0 - a.0 * b.1) / d)
    };
    let abs = |a: (f64, f64)| a.0.hypot(a.1);
    let mut det = (1.0, 0.0);
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| abs(m[i][c]).total_cmp(&abs(m[j][c]))).unwrap();
        if abs(m[p][c]) == 0.0 {
            return (0.0, 0.0);
        }
        if p != c {
            m.swap(p, c);
            det = (-det.0, -det.1);
        }
        det = mul(det, m[c][c]);
        for r in c + 1..n {
            let f = div(m[r][c], m[c][c]);
            for j in c..n {
                let t = mul(f, m[c][j]);
                m[r][j] = (m[r][j].0 - t.0, m[r][j].1 - t.1);
            }
        }
    }
    det
}

struct SampleResult {
    checks: [Check; 3],
    residual: f64,
}

fn run_sample(cfg: &RunConfig, k: usize, i: usize) -> SampleResult {
    let mut rng = gen::rng_for(cfg.seed, ((k as u64) << 32) | i as u64);
    let general = gen::quadratic(&mut rng, k);
    let nf = gen::normal_form(&mut rng, k);
    let fixture = gen::conjugated_fixture(&mut rng, k);
    let g = gen::invertible(&mut rng, k);

    let mut petri = crosscheck(&general) && crosscheck(&nf);
    let mut cong = congruence(&nf, &g);
    if let Some((_, f)) = &fixture {
        petri &= crosscheck(f);
        cong = match (cong, congruence(f, &g)) {
            (Check::Fail, _) | (_, Check::Fail) => Check::Fail,
            (Check::Skip, Check::Skip) => Check::Skip,
            _ => Check::Pass,
        };
    }
    let residual = match cfg.mode {
        Mode::Exact => 0.0,
        Mode::ExactWithFloatCorroboration => float_residual(&general).max(float_residual(&nf)),
    };
    SampleResult { checks: [if petri { Check::Pass } else { Check::Fail }, cong, gamma(&nf)], residual }
}

pub fn cmd_sweep(cfg: &RunConfig) -> SweepReport {
    let mut suites = Vec::new();
    let mut failures = Vec::new();
    let mut residual: f64 = 0.0;
    for &k in &cfg.ks {
        let results: Vec<SampleResult> = (0..cfg.samples).into_par_iter().map(|i| run_sample(cfg, k, i)).collect();
        for (s, name) in SUITES.iter().enumerate() {
            let mut count = SuiteCount { suite: name, k, ..Default::default() };
            for (i, r) in results.iter().enumerate() {
                match r.checks[s] {
                    Check::Pass => count.passed += 1,
                    Check::Skip => count.skipped += 1,
                    Check::Fail => {
                        count.failed += 1;
                        failures.push(Failure { suite: name, k, sample: i });
                    }
                }
            }
            suites.push(count);
        }
        residual = results.iter().fold(residual, |m, r| m.max(r.residual));
    }
    SweepReport {
        seed: cfg.seed,
        samples: cfg.samples,
        mode: cfg.mode,
        suites,
        failures,
        float_residual: (cfg.mode == Mode::ExactWithFloatCorroboration).then_some(residual),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use spectral_chart::fixtures;

    fn cfg(samples: usize) -> RunConfig {
        RunConfig { mode: Mode::ExactWithFloatCorroboration, seed: 5, samples, ks: vec![2, 3] }
    }

    #[test]
    fn empty_sweep() {
        let r = cmd_sweep(&cfg(0));
        assert!(r.all_passed() && r.failures.is_empty());
        assert!(r.suites.iter().all(|s| s.passed + s.failed + s.skipped == 0));
    }

    #[test]
    fn small_sweep_passes() {
        let r = cmd_sweep(&cfg(4));
        assert!(r.all_passed(), "{:?}", r.failures);
        assert_eq!(r.suites.len(), 2 * SUITES.len());
        assert!(r.float_residual.unwrap() < 1e-9);
    }

    #[test]
    fn residual_is_small() {
        for (_, a) in fixtures::all() {
            assert!(float_residual(&a) < 1e-9);
        }
    }
}
