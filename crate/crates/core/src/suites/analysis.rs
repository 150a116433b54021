//! Representation and coorbit suites.

use crate::coorbit::{self, CoefficientSequence, CoorbitConfig};
use crate::error::{Error, Result};
use crate::groups::{compose, Element, GroupKind, GroupSpec};
use crate::report::{Item, Report};
use crate::repr::grid::{half_space_axes, reference_axes, shape, unflatten, Axis, Dft, HalfSpaceSignal, TimeSignal};
use crate::repr::ops::{jac_q, jac_q_inverse, pi_hat_sample, q_covariance_residual, q_inverse, q_map};
use crate::repr::spectrum::{Atom, Modulated, Spectrum};
use crate::repr::transform::{
    admissibility_constant, admissibility_constant_analytic, direct_coefficient, shearlet_image, shearlet_transform,
    square_integrability_ratio, AsQuadrature, GroupPoint,
};
use crate::repr::{equivalence_residual, metaplectic_apply, pi_hat_apply, pi_time_apply, psi_hat_apply, psi_hat_inverse, MetaKind};
use crate::scalar::{fmt_q, Q};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

/// Atoms of the admissibility suite.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AdmissibilityAtom {
    Box,
    Bump,
}

impl AdmissibilityAtom {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "box" => Ok(AdmissibilityAtom::Box),
            "bump" => Ok(AdmissibilityAtom::Bump),
            _ => Err(Error::Parse(format!("unknown atom {s:?}"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            AdmissibilityAtom::Box => "box",
            AdmissibilityAtom::Bump => "bump",
        }
    }
}

/// `xi_1` sample counts of the admissibility refinement study.
pub const ADMISSIBILITY_SAMPLES: [usize; 4] = [256, 512, 1024, 2048];
/// Relative error below which a refinement step counts as converged.
pub const CONVERGED: f64 = 1e-10;
/// Relative error allowed at the finest admissibility grid.
pub const ADMISSIBILITY_TOL: f64 = 1e-3;

fn admissibility_axes(n: usize) -> Result<Vec<Axis>> {
    Ok(vec![Axis::new(-8.0, 0.0, n)?, Axis::new(-8.0, 8.0, 64)?])
}

/// Refinement study of `C_psi` in `xi_1` against the analytic value.
pub fn admissibility(atom: AdmissibilityAtom) -> Result<Report> {
    let mut r = Report::new("repr admissibility");
    r.param("atom", atom.name());
    let (psi, exact) = match atom {
        AdmissibilityAtom::Box => (Atom::reference_box(), 0.5),
        AdmissibilityAtom::Bump => {
            let psi = Atom::reference_bump();
            let c = admissibility_constant_analytic(&psi, 4096)?;
            (psi, c)
        }
    };
    let mut values = Vec::new();
    let mut errors = Vec::new();
    for n in ADMISSIBILITY_SAMPLES {
        let axes = match atom {
            AdmissibilityAtom::Box => admissibility_axes(n)?,
            AdmissibilityAtom::Bump => vec![Axis::new(-8.0, 0.0, n)?, Axis::new(-8.0, 8.0, n)?],
        };
        let c = admissibility_constant(&HalfSpaceSignal::from_fn(axes, |xi| psi.eval(xi))?)?;
        values.push(c);
        errors.push((c - exact).abs() / exact);
    }
    let last = *errors.last().expect("non-empty");
    let k = values.len();
    let bound = (values[k - 1] - values[k - 2]).abs() / 3.0;
    let monotone = errors.windows(2).all(|w| w[1] <= w[0] || w[1] <= CONVERGED);
    r.push(Item::le("relative_error", last, ADMISSIBILITY_TOL).with(json!({ "samples": ADMISSIBILITY_SAMPLES[k - 1] })));
    r.push(Item::flag("monotone_refinement", monotone).with(json!({ "errors": errors })));
    r.data("c_psi", values[k - 1]);
    r.data("analytic", exact);
    r.data("error_bound", bound);
    r.data("samples", json!(ADMISSIBILITY_SAMPLES));
    r.data("values", json!(values));
    Ok(r)
}

fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    (rng.gen_range(lo.ln()..hi.ln())).exp()
}

/// Points drawn by the transform suite: half on the time grid, half off it.
fn transform_points(axes: &[Axis], rng: &mut ChaCha8Rng, count: usize) -> Result<Vec<GroupPoint>> {
    (0..count)
        .map(|i| {
            let a = log_uniform(rng, 0.5, 2.0);
            let s = vec![rng.gen_range(-1.0..1.0)];
            let t = if i % 2 == 0 {
                axes.iter().map(|ax| ax.time(ax.n / 2 + rng.gen_range(0..41) - 20)).collect()
            } else {
                axes.iter().map(|_| rng.gen_range(-1.0..1.0)).collect()
            };
            GroupPoint::new(a, s, t, 1.0)
        })
        .collect()
}

fn rel_max_gap(x: &[Complex64], y: &[Complex64]) -> f64 {
    let scale = y.iter().map(|v| v.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    x.iter().zip(y).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max) / scale
}

/// Points of the transform suite.
pub const TRANSFORM_POINTS: usize = 10;

/// FFT path against direct inner products, autocorrelation, translation covariance and linearity.
pub fn transform(gamma: &Q, seed: u64) -> Result<(Report, CoefficientSequence)> {
    let mut r = Report::new("repr transform");
    r.param("gamma", fmt_q(gamma)).param("seed", seed).param("cells", 256);
    let spec = GroupSpec::new(GroupKind::ShearletConn, 2, gamma.clone())?;
    let axes = reference_axes();
    let psi = Atom::reference_bump();
    let f = HalfSpaceSignal::from_fn(axes.clone(), |xi| psi.eval(xi))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points = transform_points(&axes, &mut rng, TRANSFORM_POINTS)?;
    let fast = shearlet_transform(&spec, &f, &psi, &points)?;
    let direct: Vec<Complex64> =
        points.iter().map(|p| direct_coefficient(&spec, &f, &psi, &p.element())).collect::<Result<_>>()?;
    r.push(Item::le("fft_vs_direct", rel_max_gap(&fast, &direct), 1e-6));

    let id = GroupPoint::new(1.0, vec![0.0], vec![0.0, 0.0], 1.0)?;
    let peak = shearlet_transform(&spec, &f, &psi, &[id])?[0];
    let nsq = f.norm_sq();
    r.push(Item::le("identity_autocorrelation", (peak - nsq).norm() / nsq, 1e-12));

    let dft = Dft::new(&axes);
    let shift = [3i64, -5];
    let x0: Vec<f64> = axes.iter().zip(shift).map(|(ax, k)| k as f64 * ax.time_step()).collect();
    let moved = Modulated { base: &f, scale: Complex64::new(1.0, 0.0), shift: x0 };
    let f_moved = HalfSpaceSignal::new(
        axes.clone(),
        (0..f.values.len()).map(|idx| moved.eval(&f.frequency(idx))).collect(),
    )?;
    let mut worst: f64 = 0.0;
    for (a, s) in [(1.0, 0.0), (1.5, 0.4)] {
        let base = shearlet_image(&spec, &f, &psi, &dft, a, &[s])?;
        let img = shearlet_image(&spec, &f_moved, &psi, &dft, a, &[s])?;
        let scale = base.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let (total, strides) = shape(&axes);
        for m in 0..total {
            let idx = unflatten(&axes, m);
            let src: Option<usize> = idx
                .iter()
                .zip(shift)
                .zip(&axes)
                .zip(&strides)
                .map(|(((&i, k), ax), st)| {
                    let j = i as i64 - k;
                    (j >= 0 && j < ax.n as i64).then(|| j as usize * st)
                })
                .sum();
            if let Some(src) = src {
                worst = worst.max((img[m] - base[src]).norm() / scale);
            }
        }
    }
    r.push(Item::le("translation_covariance", worst, 1e-8));

    let other = Atom::bump(&[-3.0, -1.0], &[-1.0, 1.5]);
    let g = HalfSpaceSignal::from_fn(axes.clone(), |xi| other.eval(xi))?;
    let (ca, cb) = (Complex64::new(0.7, -0.2), Complex64::new(-1.3, 0.5));
    let combo = f.scale(ca).add(&g.scale(cb))?;
    let lhs = shearlet_transform(&spec, &combo, &psi, &points)?;
    let cg = shearlet_transform(&spec, &g, &psi, &points)?;
    let rhs: Vec<Complex64> = fast.iter().zip(&cg).map(|(x, y)| ca * x + cb * y).collect();
    r.push(Item::le("linearity", rel_max_gap(&lhs, &rhs), 1e-12));

    let c_psi = admissibility_constant_analytic(&psi, 1024)?;
    r.push(Item::flag("admissible", c_psi.is_finite() && c_psi > 0.0).with(json!({ "c_psi": c_psi })));
    r.data(
        "coefficients",
        json!(points
            .iter()
            .zip(&fast)
            .map(|(p, c)| json!({ "a": p.a, "s": p.s, "t": p.t, "re": c.re, "im": c.im }))
            .collect::<Vec<_>>()),
    );
    let seq = CoefficientSequence::new(points, fast)?;
    Ok((r, seq))
}

/// Random draws of the pointwise identities.
pub const POINTWISE_DRAWS: usize = 1000;
/// Random group elements per kind in the grid-level checks.
pub const GRID_DRAWS: usize = 3;

fn random_g(rng: &mut ChaCha8Rng) -> Element<f64> {
    Element::new(
        log_uniform(rng, 0.5, 2.0),
        vec![rng.gen_range(-1.0..1.0)],
        vec![rng.gen_range(-0.25..0.25), rng.gen_range(-0.25..0.25)],
    )
}

fn random_xi(rng: &mut ChaCha8Rng) -> Vec<f64> {
    vec![rng.gen_range(-8.0..-0.125), rng.gen_range(-8.0..8.0)]
}

fn unit_gap(x: &HalfSpaceSignal, f: &HalfSpaceSignal) -> f64 {
    (x.norm() / f.norm() - 1.0).abs()
}

/// Grid-level measurements on one resolution, worst case over the draws.
#[derive(Clone, Copy, Debug, Default)]
struct GridStats {
    equivalence: f64,
    pi_unitarity: f64,
    meta_unitarity: f64,
    psi_unitarity: f64,
    psi_inverse: f64,
    composition: f64,
    time_domain: f64,
}

fn grid_stats(spec: &GroupSpec, cells: usize, draws: &[(Element<f64>, Element<f64>)]) -> Result<GridStats> {
    let axes = half_space_axes(2, cells, 8.0)?;
    let atom = Atom::reference_bump();
    let f = HalfSpaceSignal::from_fn(axes.clone(), |xi| atom.eval(xi))?;
    let kind = MetaKind::for_group(spec.kind)?;
    let dft = Dft::new(&axes);
    let ts = TimeSignal::from_spectrum(&dft, &f)?;
    let mut st = GridStats::default();
    let ps = psi_hat_apply(&f)?;
    st.psi_unitarity = unit_gap(&ps, &f);
    st.psi_inverse = psi_hat_inverse(&ps)?.relative_gap(&f)?;
    for (g, h) in draws {
        st.equivalence = st.equivalence.max(equivalence_residual(spec, g, &f)?);
        let pg = pi_hat_apply(spec, g, &f)?;
        st.pi_unitarity = st.pi_unitarity.max(unit_gap(&pg, &f));
        st.meta_unitarity = st.meta_unitarity.max(unit_gap(&metaplectic_apply(kind, spec, g, &f)?, &f));
        let two = pi_hat_apply(spec, g, &pi_hat_apply(spec, h, &f)?)?;
        let one = pi_hat_sample(spec, &compose(spec, g, h)?, &atom, &axes)?;
        st.composition = st.composition.max(two.relative_gap(&one)?);
        let pt = pi_time_apply(spec, g, &ts)?.to_spectrum(&dft)?;
        st.time_domain = st.time_domain.max(pt.relative_gap(&pg)?);
    }
    Ok(st)
}

/// Pointwise covariance and Jacobian identities, then the grid-level equivalence study at `cells` and `2 cells`.
pub fn equivalence(gamma: &Q, seed: u64, cells: usize) -> Result<Report> {
    let mut r = Report::new("repr equivalence");
    r.param("gamma", fmt_q(gamma)).param("seed", seed).param("cells", cells);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for kind in [GroupKind::ShearletConn, GroupKind::ToeplitzConn] {
        let spec = GroupSpec::new(kind, 2, gamma.clone())?;
        let mut worst: f64 = 0.0;
        for _ in 0..POINTWISE_DRAWS {
            let g = Element::new(log_uniform(&mut rng, 0.25, 4.0), vec![rng.gen_range(-2.0..2.0)], vec![0.0, 0.0]);
            worst = worst.max(q_covariance_residual(&spec, &g, &random_xi(&mut rng))?);
        }
        r.push(Item::le(format!("q_covariance/{}", kind.name()), worst, 1e-12));
    }
    let mut jac: f64 = 0.0;
    let mut round: f64 = 0.0;
    for _ in 0..POINTWISE_DRAWS {
        let xi = random_xi(&mut rng);
        let eta = q_map(&xi)?;
        jac = jac.max((jac_q(&xi) * jac_q_inverse(&eta) - 1.0).abs());
        let back = q_inverse(&eta)?;
        let scale = xi.iter().map(|v| v.abs()).fold(1.0, f64::max);
        round = round.max(xi.iter().zip(&back).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max) / scale);
    }
    r.push(Item::le("jacobian_identity", jac, 1e-12));
    r.push(Item::le("q_roundtrip", round, 1e-12));

    let mut data = serde_json::Map::new();
    let mut psi_done = false;
    for kind in [GroupKind::ShearletConn, GroupKind::ToeplitzConn] {
        let spec = GroupSpec::new(kind, 2, gamma.clone())?;
        let draws: Vec<(Element<f64>, Element<f64>)> =
            (0..GRID_DRAWS).map(|_| (random_g(&mut rng), random_g(&mut rng))).collect();
        let coarse = grid_stats(&spec, cells, &draws)?;
        let fine = grid_stats(&spec, 2 * cells, &draws)?;
        let k = kind.name();
        let factor = |c: f64, f: f64| if f > 0.0 { c / f } else { f64::INFINITY };
        r.push(Item::le(format!("residual/{k}"), coarse.equivalence, 3e-2));
        r.push(Item::ge(format!("residual_halving/{k}"), factor(coarse.equivalence, fine.equivalence), 2.0));
        r.push(Item::le(format!("pi_hat_unitarity/{k}"), coarse.pi_unitarity, 2e-2));
        r.push(Item::le(format!("metaplectic_unitarity/{k}"), coarse.meta_unitarity, 2e-2));
        r.push(Item::le(format!("composition/{k}"), coarse.composition, 5e-3));
        r.push(Item::ge(format!("composition_halving/{k}"), factor(coarse.composition, fine.composition), 2.0));
        r.push(Item::le(format!("time_domain/{k}"), coarse.time_domain, 1e-2));
        for (name, c, f) in [("pi_hat", coarse.pi_unitarity, fine.pi_unitarity), ("metaplectic", coarse.meta_unitarity, fine.meta_unitarity)] {
            r.push(Item::ge(format!("{name}_unitarity_refinement/{k}"), factor(c, f), 1.5).with(json!({ "coarse": c, "fine": f })));
        }
        if !psi_done {
            r.push(Item::le("psi_hat_unitarity", coarse.psi_unitarity, 2e-2));
            r.push(Item::ge("psi_hat_unitarity_refinement", factor(coarse.psi_unitarity, fine.psi_unitarity), 1.5));
            r.push(Item::le("psi_hat_inverse", coarse.psi_inverse, 1e-2));
            r.push(Item::ge("psi_hat_inverse_halving", factor(coarse.psi_inverse, fine.psi_inverse), 2.0));
            psi_done = true;
        }
        data.insert(
            k.to_string(),
            json!({
                "residual": [coarse.equivalence, fine.equivalence],
                "composition": [coarse.composition, fine.composition],
                "time_domain": [coarse.time_domain, fine.time_domain],
            }),
        );
    }
    r.data("grid", serde_json::Value::Object(data));
    Ok(r)
}

/// The three `(f, psi)` pairs of the square-integrability study.
pub fn square_int_pairs() -> Vec<(&'static str, Atom, Atom)> {
    let psi1 = Atom::bump(&[-2.0, -0.5], &[-1.0, 0.5]);
    vec![
        ("psi_psi", psi1.clone(), psi1.clone()),
        ("narrow_f", Atom::bump(&[-1.5, -0.25], &[-1.0, 0.5]), psi1),
        ("wide_psi", Atom::bump(&[-2.5, -0.25], &[-1.5, 0.25]), Atom::bump(&[-3.0, -0.5], &[-1.5, 0.5])),
    ]
}

/// Relative tolerance on the square-integrability ratio.
pub const SQUARE_INT_TOL: f64 = 5e-2;
/// Required error reduction under one refinement of the group quadrature.
pub const REFINEMENT_FACTOR: f64 = 1.5;

/// `int |<f, psi_g>|^2 dmu / (C_psi ||f||^2)` on the reference and refined quadratures.
pub fn square_int(gamma: &Q) -> Result<Report> {
    let mut r = Report::new("repr square-int");
    r.param("gamma", fmt_q(gamma)).param("cells", 256);
    let spec = GroupSpec::new(GroupKind::ShearletConn, 2, gamma.clone())?;
    let axes = reference_axes();
    let quad = AsQuadrature::reference();
    let mut data = serde_json::Map::new();
    for (name, f, psi) in square_int_pairs() {
        let c_psi = admissibility_constant_analytic(&psi, 1024)?;
        let coarse = square_integrability_ratio(&spec, &f, &psi, c_psi, &axes, &quad)?;
        let fine = square_integrability_ratio(&spec, &f, &psi, c_psi, &axes, &quad.refined())?;
        let (e1, e2) = ((coarse.ratio - 1.0).abs(), (fine.ratio - 1.0).abs());
        r.push(Item::le(format!("ratio/{name}"), e1, SQUARE_INT_TOL).with(json!({ "ratio": coarse.ratio })));
        r.push(Item::ge(format!("refinement/{name}"), e1 / e2, REFINEMENT_FACTOR).with(json!({ "refined_ratio": fine.ratio })));
        data.insert(
            name.to_string(),
            json!({ "f": f, "psi": psi, "c_psi": c_psi, "ratio": coarse.ratio, "refined_ratio": fine.ratio }),
        );
    }
    r.data("pairs", serde_json::Value::Object(data));
    r.data("quadrature", json!(quad));
    Ok(r)
}

/// Frame reconstruction, norms, weight laws and the transfer gap of one configuration.
pub fn coorbit_run(config: &CoorbitConfig) -> Result<(Report, CoefficientSequence)> {
    let run = coorbit::run(config)?;
    let mut r = Report::new("coorbit run");
    r.param("config", serde_json::to_value(config)?);
    r.push(Item::flag("weight_laws", run.weight_laws.pass).with(serde_json::to_value(&run.weight_laws)?));
    let b = run.frame_bounds_est;
    r.push(Item::ge("frame_lower_bound", b.lower / b.upper, coorbit::frame::FRAME_TOL));
    let hist = &run.residual_history;
    r.push(Item::le("reconstruction_error", run.reconstruction_error, 1e-3).with(json!({ "iterations": hist.len() })));
    r.push(Item::flag("residual_monotone", hist.windows(2).all(|w| w[1] <= w[0])));
    r.push(Item::le("transfer_gap", run.transfer_gap, 3e-2));
    let (n1, n2) = run.transfer_norms;
    r.push(Item::le("transfer_norms", (n1 - n2).abs() / n1.max(n2), 3e-2));
    if let Some(fine) = run.transfer_gap_refined {
        r.push(Item::ge("transfer_halving", run.transfer_gap / fine, 2.0).with(json!({ "refined_gap": fine })));
    }
    r.data("points", run.points);
    r.data("shear_blocks", run.shear_blocks);
    r.data("frame_bounds_est", json!({ "lower": b.lower, "upper": b.upper }));
    r.data("lambda", run.lambda);
    r.data("residual_history", json!(hist));
    r.data("reconstruction_error", run.reconstruction_error);
    r.data("norms", json!({ "lpm": run.norm_lpm, "group": run.norm_group }));
    r.data("transfer_gap", run.transfer_gap);
    r.data("transfer_norms", json!([n1, n2]));
    Ok((r, run.coefficients))
}
