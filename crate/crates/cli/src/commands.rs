//! One function per verb. Each returns the report and the exit code it implies.

use std::fs;

use serde::Serialize;
use serde_json::{json, Value};
use spectral_chart::fibers::{fiber_report, lemma_z_check};
use spectral_chart::fixtures;
use spectral_chart::io::from_json;
use spectral_chart::linebundle::{petri_strongreg_crosscheck, petri_matrix};
use spectral_chart::polymat::{Point, QuadraticDatum};
use spectral_chart::realform::{certify_chart, gram_certificate, Verdict};
use spectral_chart::spectral::{
    curve_from_datum, curve_invariants, curve_reality_check, datum_reality_check, regular_everywhere, strongly_regular,
};
use spectral_chart::triplecover::{
    algebra_invariants, derive_triple_from_quadratic, gen_gram, gen_petri_rank, module_check, real_binary_cubic,
    search_balanced_instance, CurveAlgebra, TripleInstance,
};
use spectral_chart::exact::PolyGR;
use spectral_chart::ChartError;

use crate::sweep::{cmd_sweep, RunConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_SUITE_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_INDEFINITE: i32 = 3;
pub const EXIT_REJECTED: i32 = 4;

pub struct Outcome {
    pub code: i32,
    pub report: Value,
    pub text: String,
}

impl Outcome {
    fn new(code: i32, report: impl Serialize, text: String) -> Self {
        Outcome { code, report: serde_json::to_value(report).expect("serializable report"), text }
    }

    fn input_error(msg: String) -> Self {
        Outcome { code: EXIT_INPUT, report: json!({ "error": msg }), text: format!("error: {msg}") }
    }

    fn failed(e: ChartError) -> Self {
        let text = format!("failed: {e}");
        match e {
            ChartError::BudgetExhausted(rep) => Outcome::new(EXIT_REJECTED, json!({ "error": text, "search": *rep }), text),
            ChartError::Parse(msg) => Outcome::input_error(msg),
            e => Outcome { code: EXIT_REJECTED, report: json!({ "error": e.to_string() }), text },
        }
    }
}

fn load<T: serde::de::DeserializeOwned>(path: &str) -> Result<T, Outcome> {
    let text = fs::read_to_string(path).map_err(|e| Outcome::input_error(format!("{path}: {e}")))?;
    from_json(&text).map_err(|e| Outcome::input_error(format!("{path}: {}", describe(&e))))
}

fn describe(e: &ChartError) -> String {
    match e {
        ChartError::Parse(msg) => msg.clone(),
        e => e.to_string(),
    }
}

fn with_datum(path: &str, f: impl FnOnce(&QuadraticDatum) -> Outcome) -> Outcome {
    match load::<QuadraticDatum>(path) {
        Ok(a) => f(&a),
        Err(o) => o,
    }
}

pub fn certify(path: &str) -> Outcome {
    with_datum(path, |a| {
        let cert = certify_chart(a);
        let (code, text) = match &cert.verdict {
            Verdict::ManifoldPoint { real_form } => (EXIT_OK, format!("manifold point, real form {real_form}")),
            Verdict::RealChartPoint { real_form } => (EXIT_INDEFINITE, format!("real chart point, indefinite form {real_form}")),
            Verdict::Rejected { stage } => (EXIT_REJECTED, format!("rejected at stage {stage}")),
        };
        let sig = cert.gram.as_ref().map(|g| format!("\nsignature {:?}", g.signature)).unwrap_or_default();
        Outcome::new(code, &cert, format!("{text}{sig}"))
    })
}

pub fn curve(path: &str) -> Outcome {
    with_datum(path, |a| {
        let c = match curve_from_datum(a) {
            Ok(c) => c,
            Err(e) => return Outcome::failed(e),
        };
        let inv = match curve_invariants(&c) {
            Ok(i) => i,
            Err(e) => return Outcome::failed(e),
        };
        let real = curve_reality_check(&c);
        let datum = datum_reality_check(a);
        let text = format!(
            "P = {}\ngenus {}\nbranch degree {}\nreduced {}\ncurve real {}\ndatum real {}",
            c.to_bipoly(),
            inv.genus.map_or("undefined".into(), |g| g.to_string()),
            inv.branch_degree.map_or("undefined".into(), |g| g.to_string()),
            inv.reduced,
            real,
            datum.verdict()
        );
        Outcome::new(EXIT_OK, json!({ "curve": c, "invariants": inv, "curve_real": real, "datum_reality": datum }), text)
    })
}

pub fn regular(path: &str) -> Outcome {
    with_datum(path, |a| match regular_everywhere(a) {
        Ok(cert) => {
            let bad: Vec<String> =
                cert.failures().map(|w| w.point.as_ref().map_or("generic point".into(), |p| p.to_string())).collect();
            let text = if cert.verdict {
                "regular everywhere".to_string()
            } else {
                format!("not regular at {}", bad.join(", "))
            };
            Outcome::new(EXIT_OK, &cert, text)
        }
        Err(e) => Outcome::failed(e),
    })
}

pub fn strongreg(path: &str) -> Outcome {
    with_datum(path, |a| {
        let s = strongly_regular(a);
        let text = format!("strongly regular {}\nrank {} of {}", s.verdict, s.definition_rank, a.k() * a.k());
        Outcome::new(EXIT_OK, &s, text)
    })
}

pub fn petri(path: &str) -> Outcome {
    with_datum(path, |a| match (petri_matrix(a), petri_strongreg_crosscheck(a)) {
        (Ok(p), Ok(c)) => {
            let text = format!("rank {}\nis_iso {}\nagrees with strong regularity {}", p.rank, p.is_iso, c.consistent);
            Outcome::new(EXIT_OK, json!({ "petri": p, "crosscheck": c }), text)
        }
        (Err(e), _) | (_, Err(e)) => Outcome::failed(e),
    })
}

pub fn gram(path: &str) -> Outcome {
    with_datum(path, |a| match gram_certificate(a) {
        Ok(g) => {
            let text = format!("H = {}\nsignature {:?}\nreal form {}", g.h, g.signature, g.real_form_label);
            Outcome::new(EXIT_OK, &g, text)
        }
        Err(e) => Outcome::failed(e),
    })
}

pub fn jordan(path: &str, zeta: &str) -> Outcome {
    let point: Point = match zeta.parse() {
        Ok(p) => p,
        Err(e) => return Outcome::input_error(format!("--zeta: {e}")),
    };
    with_datum(path, |a| match fiber_report(a, &point) {
        Ok(reps) => {
            let mut lines = Vec::new();
            for r in &reps {
                lines.push(format!(
                    "zeta {}: jordan_regular {}, stabilizer_dim {}, minimal {}",
                    r.zeta,
                    r.jordan_regular,
                    r.stabilizer_dim,
                    lemma_z_check(r, a.k())
                ));
                for p in &r.points {
                    lines.push(format!("  {} eigenvalue(s) of multiplicity {} with blocks {:?}", p.count, p.multiplicity, p.blocks));
                }
            }
            Outcome::new(EXIT_OK, &reps, lines.join("\n"))
        }
        Err(e) => Outcome::failed(e),
    })
}

fn with_instance(path: &str, f: impl FnOnce(&TripleInstance) -> Outcome) -> Outcome {
    match load::<TripleInstance>(path) {
        Ok(t) => f(&t),
        Err(o) => o,
    }
}

fn with_algebra(path: &str, f: impl FnOnce(&CurveAlgebra) -> Outcome) -> Outcome {
    match load::<CurveAlgebra>(path) {
        Ok(t) => f(&t),
        Err(o) => o,
    }
}

/// Accepts an algebra or an algebra with a module.
pub fn triple_validate(path: &str) -> Outcome {
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => return Outcome::input_error(format!("{path}: {e}")),
    };
    let (alg, module) = match from_json::<TripleInstance>(&text) {
        Ok(t) => (t.algebra, Some(t.module)),
        Err(_) => match from_json::<CurveAlgebra>(&text) {
            Ok(a) => (a, None),
            Err(e) => return Outcome::input_error(format!("{path}: {}", describe(&e))),
        },
    };
    let residuals: Vec<String> = alg
        .associativity_residuals()
        .into_iter()
        .filter(|(_, r)| r.iter().any(|p| !p.is_zero()))
        .map(|(name, _)| name)
        .collect();
    let reality = alg.reality().map(|_| alg.validate_reality().map_err(|e| e.to_string()));
    let check = module.as_ref().map(|m| module_check(&alg, m));
    let ok = residuals.is_empty() && reality.as_ref().is_none_or(|r| r.is_ok()) && check.as_ref().is_none_or(|c| c.valid());
    let mut lines = vec![format!("associative {}", residuals.is_empty())];
    if let Some(r) = &reality {
        lines.push(format!("reality datum {}", r.as_ref().map_or_else(|e| e.clone(), |_| "valid".into())));
    }
    if let Some(c) = &check {
        lines.push(format!("module valid {}", c.valid()));
    }
    let report = json!({
        "valid": ok,
        "nonzero_residuals": residuals,
        "reality": reality.map(|r| r.err().unwrap_or_else(|| "valid".into())),
        "module": check,
    });
    Outcome::new(if ok { EXIT_OK } else { EXIT_REJECTED }, report, lines.join("\n"))
}

pub fn triple_invariants(path: &str) -> Outcome {
    with_algebra(path, |alg| match algebra_invariants(alg) {
        Ok(inv) => {
            let text = format!(
                "splitting {:?}\ngenus {}\nh0(O(2)) {}\nembeddable {}\ndiscriminant degree {}",
                inv.splitting,
                inv.genus,
                inv.h0_o2,
                inv.embeddable,
                inv.disc_degree.map_or("undefined".into(), |d| d.to_string())
            );
            Outcome::new(EXIT_OK, &inv, text)
        }
        Err(e) => Outcome::failed(e),
    })
}

pub fn triple_derive(path: &str) -> Outcome {
    with_datum(path, |a| match derive_triple_from_quadratic(a) {
        Ok((algebra, module)) => {
            let text = format!("splitting {:?}\nU = {}\nV = {}", algebra.splitting(), module.u, module.v);
            Outcome::new(EXIT_OK, TripleInstance { algebra, module }, text)
        }
        Err(e) => Outcome::failed(e),
    })
}

pub fn triple_petri(path: &str) -> Outcome {
    with_instance(path, |t| match gen_petri_rank(&t.algebra, &t.module) {
        Ok(r) => Outcome::new(EXIT_OK, json!({ "rank": r, "is_iso": r == 9 }), format!("rank {r}\nis_iso {}", r == 9)),
        Err(e) => Outcome::failed(e),
    })
}

pub fn triple_gram(path: &str) -> Outcome {
    with_instance(path, |t| match gen_gram(&t.algebra, &t.module) {
        Ok(g) => {
            let text = format!("H = {}\nsignature {:?}\nreal form {}", g.h, g.signature, g.real_form_label);
            Outcome::new(EXIT_OK, &g, text)
        }
        Err(e) => Outcome::failed(e),
    })
}

pub fn triple_search(path: &str, budget: usize, seed: u64) -> Outcome {
    with_algebra(path, |alg| match search_balanced_instance(alg, budget, seed) {
        Ok(module) => {
            let text = format!("found\nU = {}\nV = {}", module.u, module.v);
            Outcome::new(EXIT_OK, TripleInstance { algebra: alg.clone(), module }, text)
        }
        Err(ChartError::BudgetExhausted(rep)) => {
            let mut lines = vec![format!("no instance within budget {}", rep.budget)];
            lines.extend(rep.attempts.iter().map(|a| format!("  seed {}: {}", a.seed, a.outcome)));
            Outcome::new(EXIT_REJECTED, json!({ "search": *rep }), lines.join("\n"))
        }
        Err(e) => Outcome::failed(e),
    })
}

pub const FIXTURE_NAMES: [&str; 9] = ["FIX1", "FIX2", "FIX3", "FIX4", "FIX5", "FIX6", "FIX7", "CUBIC33", "CONTROL7"];

/// The balanced real binary cubic shipped as an example.
pub fn cubic33() -> CurveAlgebra {
    real_binary_cubic(&PolyGR::from_ints(&[1, 1, 0, 2]), &PolyGR::from_ints(&[0, 1, 1])).expect("nondegenerate")
}

/// Writes a built-in example as a document.
pub fn fixture(name: &str) -> Outcome {
    let upper = name.to_ascii_uppercase();
    if let Some((_, a)) = fixtures::all().into_iter().find(|(n, _)| *n == upper) {
        return Outcome::new(EXIT_OK, &a, format!("{a}"));
    }
    match upper.as_str() {
        "CUBIC33" => Outcome::new(EXIT_OK, cubic33(), "balanced real binary cubic algebra".into()),
        "CONTROL7" => {
            let (algebra, module) = derive_triple_from_quadratic(&fixtures::fix7()).expect("FIX7 derives");
            Outcome::new(EXIT_OK, TripleInstance { algebra, module }, "control instance of FIX7".into())
        }
        _ => Outcome::input_error(format!("unknown fixture {name}; expected one of {}", FIXTURE_NAMES.join(", "))),
    }
}

pub fn sweep(cfg: &RunConfig) -> Outcome {
    if let Some(k) = cfg.ks.iter().find(|&&k| !(2..=6).contains(&k)) {
        return Outcome::input_error(format!("k = {k} outside 2..=6"));
    }
    let report = cmd_sweep(cfg);
    let mut lines: Vec<String> = report
        .suites
        .iter()
        .map(|s| format!("k={} {:<16} passed {:>4} failed {:>4} skipped {:>4}", s.k, s.suite, s.passed, s.failed, s.skipped))
        .collect();
    if let Some(r) = report.float_residual {
        lines.push(format!("float residual {r:.3e}"));
    }
    let code = if report.all_passed() { EXIT_OK } else { EXIT_SUITE_FAILED };
    Outcome::new(code, &report, lines.join("\n"))
}
