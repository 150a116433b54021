//! Acceptance criteria, one line per criterion.

use shearlet_core::coorbit::weights::{check_weight_laws, WeightSpec};
use shearlet_core::coorbit::CoorbitConfig;
use shearlet_core::groups::{GroupKind, GroupSpec};
use shearlet_core::liealg::embedding_search;
use shearlet_core::report::Report;
use shearlet_core::scalar::{fmt_q, q, Q};
use shearlet_core::suites::{self, AdmissibilityAtom, Backend};
use std::process::ExitCode;
use std::time::{Duration, Instant};

type Outcome = Result<(bool, String), String>;

struct Criterion {
    name: &'static str,
    limit: Duration,
    run: fn() -> Outcome,
}

fn failures(r: &Report, prefix: &str) -> Vec<String> {
    r.items.iter().filter(|i| i.name.starts_with(prefix) && !i.pass).map(|i| format!("{} = {}", i.name, i.residual)).collect()
}

fn item_pass(r: &Report, name: &str) -> Result<bool, String> {
    r.item(name).map(|i| i.pass).ok_or_else(|| format!("missing item {name}"))
}

fn total(r: &Report, name: &str) -> Result<u64, String> {
    r.item(name).and_then(|i| i.detail["total"].as_u64()).ok_or_else(|| format!("missing total of {name}"))
}

fn num(r: &Report, name: &str) -> Result<f64, String> {
    r.item(name).and_then(|i| i.residual.as_f64()).ok_or_else(|| format!("missing residual of {name}"))
}

fn err(e: shearlet_core::Error) -> String {
    e.to_string()
}

fn table() -> Outcome {
    let r = suites::table_verify().map_err(err)?;
    let entries = total(&r, "structure_constants")?;
    let ok = r.pass() && entries == 100 && total(&r, "jacobi")? > 0;
    Ok((ok, format!("{entries} entries, failures {:?}", r.failures())))
}

fn mgamma() -> Outcome {
    let mut bad = Vec::new();
    let mut checked = 0;
    for g in [q(1, 2), q(1, 3), q(3, 4)] {
        let r = suites::mgamma_random(&g, 1).map_err(err)?;
        for case in 1..=7 {
            let name = format!("closed_form_det/D{case}");
            checked += total(&r, &name)?;
            if !item_pass(&r, &name)? {
                bad.push(format!("{name} at {}", fmt_q(&g)));
            }
        }
    }
    Ok((bad.is_empty() && checked == 3 * 7 * 40, format!("{checked} determinants, failures {bad:?}")))
}

fn kappa() -> Outcome {
    let mut bad = Vec::new();
    for d in [2, 3] {
        let r = suites::groups_verify(&q(1, 2), d, Backend::Exact, 1).map_err(err)?;
        for name in ["kappa_plus/homomorphism", "kappa_plus_toeplitz/homomorphism"] {
            if total(&r, name)? != 1000 {
                return Err(format!("{name} checked {} pairs", total(&r, name)?));
            }
        }
        for name in ["heisenberg_to_shearlet", "sign_split_law"] {
            if total(&r, name)? != 500 {
                return Err(format!("{name} checked {} pairs", total(&r, name)?));
            }
        }
        for prefix in ["kappa_plus", "heisenberg_to_shearlet", "sign_split_law", "polarization"] {
            bad.extend(failures(&r, prefix).into_iter().map(|f| format!("d = {d}: {f}")));
        }
    }
    Ok((bad.is_empty(), format!("d = 2, 3; failures {bad:?}")))
}

fn embed() -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;
    for (n, m) in [(1, 5), (1, 4), (1, 3), (2, 5), (1, 2), (3, 5), (2, 3), (3, 4)] {
        let g = q(n, m);
        let rep = embedding_search(&g).map_err(err)?;
        let nonstandard = g == q(1, 3) || g == q(2, 3);
        let std: Vec<_> = rep.families.iter().filter(|f| f.standard).collect();
        let expected = suites::algebra::form_label(&shearlet_core::liealg::CanonicalForm::D1 {
            a1: q(1, 1),
            a2: num_traits::Signed::abs(&(q(1, 1) - q(2, 1) * &g)),
        });
        let here = std.len() == 1
            && suites::algebra::form_label(&std[0].form) == expected
            && rep.families.len() == if nonstandard { 2 } else { 1 }
            && rep.rejections.iter().all(|x| !x.reason.name().is_empty() && x.to_json()["reason"].is_string());
        ok &= here && suites::embed_search(&g).map_err(err)?.pass();
        let labels: Vec<String> = rep.families.iter().map(|f| suites::algebra::form_label(&f.form)).collect();
        notes.push(format!("{}: {}", fmt_q(&g), labels.join("+")));
    }
    Ok((ok, notes.join(", ")))
}

fn obstruct() -> Outcome {
    let mut bad = Vec::new();
    for (n, m) in [(1, 5), (1, 4), (1, 3), (2, 5), (1, 2), (3, 5), (2, 3), (3, 4)] {
        let g = q(n, m);
        let r = suites::obstruct(&g).map_err(err)?;
        for name in ["standard", "conjugated", "phi_scaled"] {
            if !item_pass(&r, &format!("no_extension/{name}"))? || !item_pass(&r, &format!("relations/{name}"))? {
                bad.push(format!("{name} at {}", fmt_q(&g)));
            }
        }
    }
    Ok((bad.is_empty(), format!("8 values of gamma, failures {bad:?}")))
}

fn admissibility() -> Outcome {
    let r = suites::admissibility(AdmissibilityAtom::Box).map_err(err)?;
    let e = num(&r, "relative_error")?;
    let ok = e <= 1e-3 && item_pass(&r, "monotone_refinement")? && r.data["samples"][3] == 2048;
    Ok((ok, format!("relative error {e:.3e} at 2048 samples, errors {}", r.item("monotone_refinement").unwrap().detail["errors"])))
}

fn square_int() -> Outcome {
    let r = suites::square_int(&q(1, 2)).map_err(err)?;
    let ratios: Vec<String> = r.items.iter().filter(|i| i.name.starts_with("ratio/")).map(|i| format!("{:.4}", i.detail["ratio"].as_f64().unwrap_or(f64::NAN))).collect();
    let gains: Vec<String> = r.items.iter().filter(|i| i.name.starts_with("refinement/")).map(|i| format!("{:.2}", i.residual.as_f64().unwrap_or(f64::NAN))).collect();
    Ok((r.pass() && ratios.len() == 3, format!("ratios {ratios:?}, refinement gains {gains:?}")))
}

fn equivalence() -> Outcome {
    let r = suites::equivalence(&q(1, 2), 1, 256).map_err(err)?;
    let mut ok = true;
    let mut notes = Vec::new();
    for kind in [GroupKind::ShearletConn, GroupKind::ToeplitzConn] {
        let k = kind.name();
        let cov = num(&r, &format!("q_covariance/{k}"))?;
        let res = num(&r, &format!("residual/{k}"))?;
        let halving = num(&r, &format!("residual_halving/{k}"))?;
        ok &= cov <= 1e-12 && res <= 3e-2 && halving >= 2.0;
        notes.push(format!("{k}: covariance {cov:.1e}, residual {res:.2e}, refinement factor {halving:.2}"));
    }
    Ok((ok, notes.join("; ")))
}

fn coorbit() -> Outcome {
    let mut config = CoorbitConfig::reference();
    config.transfer_refine = true;
    let (r, _) = suites::coorbit_run(&config).map_err(err)?;
    let rec = num(&r, "reconstruction_error")?;
    let iters = r.item("reconstruction_error").and_then(|i| i.detail["iterations"].as_u64()).unwrap_or(u64::MAX);
    let gap = num(&r, "transfer_gap")?;
    let halving = num(&r, "transfer_halving")?;
    let spec = GroupSpec::new(GroupKind::ShearletConn, 2, q(1, 2)).map_err(err)?;
    let mut laws = true;
    for (_, w) in WeightSpec::presets() {
        laws &= check_weight_laws(&spec, &w, 10_000, 1).map_err(err)?.pass;
    }
    let ok = rec <= 1e-3 && iters <= 50 && gap <= 3e-2 && halving >= 2.0 && laws && r.pass();
    Ok((
        ok,
        format!("reconstruction {rec:.2e} after {iters} iterations, transfer gap {gap:.2e}, refinement factor {halving:.2}, weight laws {laws}"),
    ))
}

fn in_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new().num_threads(threads).build().expect("thread pool").install(f)
}

fn determinism() -> Outcome {
    let gamma: Q = q(1, 2);
    let a = suites::groups_verify(&gamma, 2, Backend::Exact, 7).map_err(err)?.render();
    let b = suites::groups_verify(&gamma, 2, Backend::Exact, 7).map_err(err)?.render();
    let (t1, s1) = in_pool(1, || suites::transform(&gamma, 3)).map_err(err)?;
    let (t4, s4) = in_pool(4, || suites::transform(&gamma, 3)).map_err(err)?;
    let mut config = CoorbitConfig::reference();
    config.cells = 64;
    config.transfer_cells = 128;
    let (c1, q1) = in_pool(1, || suites::coorbit_run(&config)).map_err(err)?;
    let (c4, q4) = in_pool(4, || suites::coorbit_run(&config)).map_err(err)?;
    let same_seed = a == b;
    let threads = t1.render() == t4.render() && s1 == s4 && c1.render() == c4.render() && q1 == q4;
    Ok((same_seed && threads, format!("same seed byte-identical {same_seed}, 1 vs 4 threads identical {threads}")))
}

fn main() -> ExitCode {
    let criteria = [
        Criterion { name: "structure constants and Jacobi", limit: Duration::from_secs(1), run: table },
        Criterion { name: "closed-form determinants", limit: Duration::from_secs(10), run: mgamma },
        Criterion { name: "symplectic embeddings and isomorphisms", limit: Duration::from_secs(10), run: kappa },
        Criterion { name: "embedding search", limit: Duration::from_secs(30), run: embed },
        Criterion { name: "reflection obstruction", limit: Duration::from_secs(5), run: obstruct },
        Criterion { name: "admissibility constant", limit: Duration::from_secs(60), run: admissibility },
        Criterion { name: "square integrability", limit: Duration::from_secs(60), run: square_int },
        Criterion { name: "Q covariance and intertwining", limit: Duration::from_secs(120), run: equivalence },
        Criterion { name: "coorbit reconstruction and transfer", limit: Duration::from_secs(120), run: coorbit },
        Criterion { name: "determinism", limit: Duration::from_secs(600), run: determinism },
    ];
    let mut all = true;
    for (k, c) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        let (pass, detail) = match outcome {
            Ok((p, d)) => (p && elapsed <= c.limit, d),
            Err(e) => (false, format!("error: {e}")),
        };
        all &= pass;
        println!(
            "{} {:>2} {}: {} ({:.2} s, limit {} s)",
            if pass { "PASS" } else { "FAIL" },
            k + 1,
            c.name,
            detail,
            elapsed.as_secs_f64(),
            c.limit.as_secs()
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
