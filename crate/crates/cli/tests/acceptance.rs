//! Acceptance criteria 1 to 10, one PASS/FAIL line each.
//!
//! Four criteria cannot hold as written because the identities they name are
//! false on the configurations they name. For those the harness checks the
//! specific reason and reports `FAIL (known)`; any other outcome, including
//! an unexpected pass, fails the run.

use std::path::PathBuf;
use std::process::Command;
use std::time::Instant;

use fgverify::battery::run_battery;
use fgverify::scenario::Tol;
use fgverify_core::ambient::{
    check_d_fundamental_form, check_f_structure, check_identities, check_kenmotsu, check_normal, christoffel,
    christoffel_central_difference, christoffel_symbols, example_1, flat_control, kenmotsu_f_model, random_metric,
    sectional_curvature, unit_sphere, Tolerances,
};
use fgverify_core::check::{CheckKind, CheckResult};
use fgverify_core::expr::{coordinate_jets, parse};
use fgverify_core::sample::sample_box;
use fgverify_core::subgeom::{
    check_slant_relations, check_submanifold_identities, example_2, example_3, induced_metric, PaperExample, SlantFrame,
};
use fgverify_core::warp::{
    check_lemma41, check_lemma42, check_lemma43, check_lemma44, check_reductions, product_config, random_warping,
    rotation_config, theorem51_gap, theorem61_gap, InequalityConfig, Order, Restriction,
};

enum Verdict {
    Pass,
    /// Fails as written; the reason was checked.
    Known(String),
    Fail(String),
}

struct Outcome {
    verdict: Verdict,
    details: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Outcome { verdict: Verdict::Pass, details: Vec::new() }
    }

    fn note(&mut self, s: impl Into<String>) {
        self.details.push(s.into());
    }

    /// Records a requirement; the first unmet one decides the verdict.
    fn require(&mut self, ok: bool, what: impl Into<String>) {
        let what = what.into();
        self.details.push(format!("{} {what}", if ok { "ok  " } else { "MISS" }));
        if !ok && matches!(self.verdict, Verdict::Pass | Verdict::Known(_)) {
            self.verdict = Verdict::Fail(what);
        }
    }

    /// Marks the criterion as failing for `reason`, provided nothing else failed.
    fn known(&mut self, reason: &str) {
        if matches!(self.verdict, Verdict::Pass) {
            self.verdict = Verdict::Known(reason.to_string());
        }
    }
}

fn all_pass(checks: &[CheckResult]) -> (bool, String) {
    let bad: Vec<String> = checks
        .iter()
        .filter(|c| c.kind != CheckKind::Info && !c.passed())
        .map(|c| format!("{} ({:.3e})", c.name, c.value))
        .collect();
    (bad.is_empty(), bad.join(", "))
}

fn find<'a>(checks: &'a [CheckResult], name: &str) -> &'a CheckResult {
    checks.iter().find(|c| c.name == name).unwrap_or_else(|| panic!("no record {name}"))
}

fn configs() -> Vec<InequalityConfig> {
    vec![
        rotation_config(1, 0.8, 1.5).unwrap(),
        rotation_config(2, 0.8, 1.5).unwrap(),
        product_config(1, 0.8, 1.2).unwrap(),
        product_config(2, 0.8, 1.2).unwrap(),
    ]
}

fn criterion1() -> Outcome {
    let mut o = Outcome::new();
    let start = Instant::now();
    let ex1 = example_1();
    o.require(ex1.dim() == 14, "model is fourteen-dimensional");
    let pts = sample_box(&ex1.chart.bounds, 100, 1);
    let f = check_f_structure(&ex1, &pts, 1e-9).unwrap();
    let (ok, bad) = all_pass(&f);
    o.require(ok, format!("f-structure axioms < 1e-9 at 100 points {bad}"));
    let d = check_d_fundamental_form(&ex1, &pts, 1e-8).unwrap();
    o.require(d.passed(), format!("dPhi = 2(eta1 + eta2) ^ Phi residual {:.3e} < 1e-8", d.value));
    let n = check_normal(&ex1, &pts, 1e-8).unwrap();
    o.require(n.passed(), format!("normality residual {:.3e} < 1e-8", n.value));
    let t = start.elapsed().as_secs_f64();
    o.require(t < 10.0, format!("runtime {t:.2} s < 10 s"));
    o
}

fn criterion2() -> Outcome {
    let mut o = Outcome::new();
    for (n, s) in [(2, 1), (2, 2), (6, 2)] {
        let m = kenmotsu_f_model(n, s).unwrap();
        let pts = sample_box(&m.chart.bounds, 30, 2);
        let k = check_kenmotsu(&m, &pts, 1e-8).unwrap();
        o.require(
            k[0].passed() && k[1].passed(),
            format!("model n={n} s={s}: kenmotsu {:.3e}, nearly {:.3e} < 1e-8", k[0].value, k[1].value),
        );
    }
    let flat = flat_control(2, 2).unwrap();
    let pts = sample_box(&flat.chart.bounds, 100, 2);
    let k = check_kenmotsu(&flat, &pts, 1e-8).unwrap();
    let frac = k[0].per_sample.iter().filter(|r| **r > 1e-2).count() as f64 / pts.len() as f64;
    o.require(frac >= 0.9, format!("flat control: kenmotsu residual > 1e-2 at {:.0}% of samples", frac * 100.0));
    o
}

fn criterion3() -> Outcome {
    let mut o = Outcome::new();
    let names = [
        "structure field derivative",
        "curvature xi-X-Y",
        "curvature X-Y-xi",
        "structure form derivative",
        "curvature eta projection",
    ];
    let m1 = kenmotsu_f_model(2, 1).unwrap();
    let pts = sample_box(&m1.chart.bounds, 50, 3);
    let ids = check_identities(&m1, &pts, 1e-7).unwrap();
    for name in names {
        let c = find(&ids, name);
        o.require(c.passed(), format!("model n=2 s=1 {name}: {:.3e} < 1e-7", c.value));
    }
    let m2 = kenmotsu_f_model(2, 2).unwrap();
    let ids = check_identities(&m2, &sample_box(&m2.chart.bounds, 50, 3), 1e-7).unwrap();
    for name in names {
        let c = find(&ids, name);
        o.note(format!(
            "     model n=2 s=2 {name}: {:.3e} ({})",
            c.value,
            if c.passed() { "holds" } else { "printed form fails for s >= 2" }
        ));
    }
    let sphere = unit_sphere();
    let mut worst = 0.0f64;
    for p in sample_box(&sphere.chart.bounds, 50, 3) {
        let st = sphere.at(&p).unwrap();
        let curv = christoffel(&st.g, 2).unwrap().curvature();
        worst = worst.max((sectional_curvature(&curv, &st.g_values(), &[1.0, 0.0], &[0.0, 1.0]) - 1.0).abs());
    }
    o.require(worst < 1e-6, format!("unit sphere |K - 1| = {worst:.3e} < 1e-6"));
    o
}

fn vectors(ex: &PaperExample, p: &[f64]) -> (fgverify_core::subgeom::PointGeometry, Vec<Vec<f64>>) {
    let geo = ex.immersion.geometry(p).unwrap();
    let all = ex.printed.iter().flat_map(|d| d.vectors(&geo).unwrap()).collect();
    (geo, all)
}

/// Largest deviation of the slant cosine from `cos` and the spread of the
/// cosines, over the slant fields and their sum.
fn slant_stats(ex: &PaperExample, pts: &[Vec<f64>], cos: f64) -> (f64, f64) {
    let (mut dev, mut lo, mut hi) = (0.0f64, f64::INFINITY, f64::NEG_INFINITY);
    for p in pts {
        let geo = ex.immersion.geometry(p).unwrap();
        let vs = ex.d_theta.vectors(&geo).unwrap();
        let frame = SlantFrame::from_geometry(&geo, &vs).unwrap();
        let sum: Vec<f64> = (0..geo.n).map(|k| vs.iter().map(|v| v[k]).sum()).collect();
        for x in vs.iter().chain([&sum]) {
            let c = frame.cos_angle(x).unwrap();
            dev = dev.max((c - cos).abs());
            lo = lo.min(c);
            hi = hi.max(c);
        }
    }
    (dev, hi - lo)
}

/// `cos` of the angle between `phi Z` and the span of every printed field.
fn against_tm(ex: &PaperExample, pts: &[Vec<f64>]) -> f64 {
    let mut worst = 0.0f64;
    for p in pts {
        let (geo, all) = vectors(ex, p);
        let tm = SlantFrame::from_geometry(&geo, &all).unwrap();
        for z in ex.d_perp.vectors(&geo).unwrap() {
            worst = worst.max(tm.cos_angle(&z).unwrap());
        }
    }
    worst
}

fn criterion4() -> Outcome {
    let mut o = Outcome::new();
    let ex2 = example_2().unwrap();
    let pts = sample_box(&ex2.immersion.domain.bounds, 20, 4);
    let (dev, spread) = slant_stats(&ex2, &pts, 1.0 / 3.0);
    o.require(dev < 1e-9, format!("example 2: |cos theta - 1/3| = {dev:.3e} < 1e-9"));
    o.require(spread < 1e-9, format!("example 2: constancy deviation {spread:.3e} < 1e-9"));
    let w3 = against_tm(&ex2, &pts);
    o.require(w3 < 1e-9, format!("example 2: W3 against TM, |cos| = {w3:.3e} < 1e-9"));
    let ex3 = example_3().unwrap();
    let pts = sample_box(&ex3.immersion.domain.bounds, 20, 4);
    let (dev, spread) = slant_stats(&ex3, &pts, 10f64.sqrt() / 20.0);
    o.require(dev < 1e-9, format!("example 3: |cos theta - sqrt(10)/20| = {dev:.3e} < 1e-9"));
    o.require(spread < 1e-9, format!("example 3: constancy deviation {spread:.3e} < 1e-9"));
    let z = against_tm(&ex3, &pts);
    o.note(format!("     example 3: Z against TM, cos = {z:.3e}, so theta(Z) is not pi/2"));
    // the reason: phi Z has components along the printed X and Y
    let mut reason = z > 1e-3;
    for p in &pts {
        let (geo, all) = vectors(&ex3, p);
        let pz = geo.phi(&all[2]);
        reason &= (geo.g(&pz, &all[0]) + 3.0).abs() < 1e-12 && (geo.g(&pz, &all[1]) + 2.0).abs() < 1e-12;
    }
    o.require(reason, "example 3: g(phi Z, X) = -3 and g(phi Z, Y) = -2 at every point");
    o.known("example 3's Z is not anti-invariant: g(phi Z, X) = -3, g(phi Z, Y) = -2");
    o
}

fn criterion5() -> Outcome {
    let mut o = Outcome::new();
    let ex3 = example_3().unwrap();
    let pts = sample_box(&ex3.immersion.domain.bounds, 20, 5);
    let (mut diag, mut off, mut off_vs_4vw) = (0.0f64, 0.0f64, 0.0f64);
    for p in &pts {
        let g = induced_metric(&ex3.immersion, p).unwrap();
        let (v, w) = (p[1], p[2]);
        let want = [w.powi(4) + v.powi(4), 8.0 * v * v, 8.0 * w * w, 1.0, 1.0];
        for (a, wa) in want.iter().enumerate() {
            diag = diag.max((g.get(a, a) - wa).abs());
            for b in 0..5 {
                if a != b {
                    off = off.max(g.get(a, b).abs());
                }
            }
        }
        off_vs_4vw = off_vs_4vw.max((g.get(1, 2) - 4.0 * v * w).abs());
    }
    o.require(diag < 1e-9, format!("example 3: diagonal matches w^4+v^4, 8v^2, 8w^2, 1, 1 ({diag:.3e})"));
    o.note(format!("     example 3: largest off-diagonal entry {off:.3e}, so the metric is not diag(...)"));
    o.require(off > 1e-3 && off_vs_4vw < 1e-12, format!("example 3: g_vw = 4vw ({off_vs_4vw:.3e})"));

    let ex2 = example_2().unwrap();
    let pts = sample_box(&ex2.immersion.domain.bounds, 20, 5);
    let (mut threes, mut u1) = (0.0f64, 0.0f64);
    for p in &pts {
        let g = induced_metric(&ex2.immersion, p).unwrap();
        threes = threes.max((g.get(1, 1) - 3.0).abs()).max((g.get(2, 2) - 3.0).abs());
        u1 = u1.max((g.get(0, 0) - (p[1] * p[1] + p[2] * p[2])).abs());
    }
    o.require(threes < 1e-9, format!("example 2: entries 3, 3 ({threes:.3e})"));
    o.require(u1 < 1e-9, format!("example 2: u1 entry = u2^2 + u3^2 ({u1:.3e})"));
    let report = run_battery(8, 1, Tol::default()).unwrap();
    let noted = report
        .iter()
        .any(|c| c.name == "example 2: printed u1 entry" && c.kind == CheckKind::Info && !c.notes.is_empty());
    o.require(noted, "report carries the example 2 u1-entry discrepancy note");
    o.known("example 3's immersion gives g_vw = 4vw, so the Jacobian metric is not diagonal");
    o
}

fn criterion6() -> Outcome {
    let mut o = Outcome::new();
    let literal = ["nabla T without ambient term", "nabla N without ambient term", "nabla t, n without ambient term"];
    let mut literal_fails = true;
    for cfg in configs() {
        let pts = sample_box(&cfg.immersion.domain.bounds, 30, 6);
        let ids = check_submanifold_identities(&cfg.immersion, &pts, Tolerances { algebraic: 1e-6, curvature: 1e-6 })
            .unwrap();
        let slant = check_slant_relations(&cfg.immersion, &cfg.d_theta, cfg.theta, &pts, 1e-6).unwrap();
        let (a, bad_a) = all_pass(&ids);
        let (b, bad_b) = all_pass(&slant);
        o.require(
            a && b,
            format!("{}: T, N, t, n identities with the ambient term, slant relations < 1e-6 {bad_a}{bad_b}", cfg.name),
        );
        let worst = literal.iter().map(|n| find(&ids, n).value).fold(f64::INFINITY, f64::min);
        o.note(format!(
            "     {}: smallest residual of the covariant-derivative forms without ambient term {worst:.3e}",
            cfg.name
        ));
        literal_fails &= worst > 1e-2;
    }
    o.require(
        literal_fails,
        "the covariant derivatives of T, N, t, n without the (nabla-bar phi) term fail on every configuration",
    );
    o.known("the printed covariant derivatives of T, N, t, n drop the (nabla-bar_X phi) term, which is nonzero on a Kenmotsu ambient");
    o
}

fn criterion7() -> Outcome {
    let mut o = Outcome::new();
    let mut worst = [0.0f64; 3];
    for k in 0..20 {
        let wp = random_warping(k).unwrap();
        let pts = sample_box(&wp.chart().unwrap().bounds, 20, k);
        for (w, c) in worst.iter_mut().zip(check_lemma41(&wp, &pts, 1e-7).unwrap()) {
            *w = w.max(c.value);
        }
    }
    o.require(
        worst.iter().all(|w| *w < 1e-7),
        format!("warped connection on 20 random warpings: {:.3e}, {:.3e}, {:.3e} < 1e-7", worst[0], worst[1], worst[2]),
    );
    let mut printed_ii_fails = true;
    for cfg in configs() {
        let pts = sample_box(&cfg.immersion.domain.bounds, 30, 7);
        let mut xi = 0.0f64;
        for p in &pts {
            let geo = cfg.immersion.geometry(p).unwrap();
            xi = xi.max((cfg.grad_ln_f(&geo, Restriction::Full).unwrap().xi_sum - cfg.s as f64).abs());
        }
        o.require(xi < 1e-9, format!("{}: |sum xi_k ln f - s| = {xi:.3e} < 1e-9", cfg.name));
        match cfg.order {
            Order::ThetaPerp => {
                let l = check_lemma42(&cfg, &pts, 1e-6).unwrap();
                o.require(
                    l[0].passed() && l[1].passed(),
                    format!(
                        "{}: theta-perp lemma with corrected brace and sign: {:.3e}, {:.3e}",
                        cfg.name, l[0].value, l[1].value
                    ),
                );
                o.note(format!(
                    "     {}: theta-perp lemma as printed: (i) {:.3e}, (ii) {:.3e}",
                    cfg.name, l[2].value, l[3].value
                ));
                printed_ii_fails &= l[3].value > 1e-2;
            }
            Order::PerpTheta => {
                let mut l = check_lemma43(&cfg, &pts, 1e-6).unwrap();
                l.extend(check_lemma44(&cfg, &pts, 1e-6).unwrap());
                let (ok, bad) = all_pass(&l);
                o.require(ok, format!("{}: perp-theta lemmas < 1e-6 {bad}", cfg.name));
            }
        }
    }
    o.require(
        printed_ii_fails,
        "theta-perp lemma (ii) as printed, with -(TX ln f), fails on every theta-perp configuration",
    );
    o.known(
        "theta-perp lemma as printed: the sign of (TX ln f)|Z|^2 is wrong, and the s-weighted brace fails for s >= 2",
    );
    o
}

fn criterion8() -> Outcome {
    let mut o = Outcome::new();
    let mut positive = 0;
    for cfg in configs() {
        let pts = sample_box(&cfg.immersion.domain.bounds, 30, 8);
        let g = match cfg.order {
            Order::PerpTheta => theorem51_gap(&cfg, &pts).unwrap(),
            Order::ThetaPerp => theorem61_gap(&cfg, &pts).unwrap(),
        };
        let checks = g.checks();
        if g.gated_count() == 0 {
            o.require(
                checks[0].notes.iter().any(|n| n.contains("gate failure")),
                format!("{}: gate-failure record present", cfg.name),
            );
        } else {
            o.require(
                checks[0].kind == CheckKind::Gap && checks[0].passed(),
                format!(
                    "{}: min gap {:.3e} >= -1e-6 over {} gated samples",
                    cfg.name,
                    checks[0].value,
                    g.gated_count()
                ),
            );
        }
        let pos = g.positive_bound_count();
        positive += pos;
        if pos == 0 {
            o.require(
                checks[4].notes.iter().any(|n| n.contains("no gated sample has a strictly positive right side")),
                format!("{}: report says no positive right side", cfg.name),
            );
        } else {
            o.note(format!("     {}: {pos} gated samples with a strictly positive right side", cfg.name));
        }
    }
    o.note(format!("     {positive} gated samples with a strictly positive right side in total"));
    let r = check_reductions(8, 200).unwrap();
    let (ok, bad) = all_pass(&r);
    o.require(ok, format!("s = 0 and s = 1 reductions to 1e-12 {bad}"));
    o
}

fn criterion9() -> Outcome {
    let mut o = Outcome::new();
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let mut reports = Vec::new();
    for k in 0..2 {
        let path = dir.join(format!("acceptance-determinism-{k}.json"));
        let status = Command::new(env!("CARGO_BIN_EXE_fgverify"))
            .args(["reproduce-paper", "--samples", "8", "--seed", "1", "--quiet", "--report"])
            .arg(&path)
            .status()
            .unwrap();
        o.require(status.success(), format!("run {} exits 0", k + 1));
        reports.push(std::fs::read(&path).unwrap());
    }
    o.require(reports[0] == reports[1], format!("two runs give byte-identical reports ({} bytes)", reports[0].len()));
    o
}

fn criterion10() -> Outcome {
    let mut o = Outcome::new();
    let mut worst = 0.0f64;
    for seed in 0..10u64 {
        let n = 3 + (seed as usize % 2);
        let names: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let g: Vec<_> = random_metric(seed, n).iter().map(|s| parse(s).unwrap().bind(&refs).unwrap()).collect();
        let values = |p: &[f64]| g.iter().map(|e| e.eval(p)).collect::<fgverify_core::Result<Vec<f64>>>();
        for p in sample_box(&vec![(-1.0, 1.0); n], 5, 100 + seed) {
            let jets: Vec<_> = g.iter().map(|e| e.eval_jet(&coordinate_jets(&p)).unwrap()).collect();
            let exact = christoffel_symbols(&jets, n).unwrap().gamma;
            let fd = christoffel_central_difference(values, &p, 1e-4).unwrap();
            let scale = exact.iter().fold(0.0f64, |m, x| m.max(x.abs())).max(1e-12);
            let err = exact.iter().zip(&fd).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
            worst = worst.max(err / scale);
        }
    }
    o.require(worst < 1e-5, format!("10 random metrics: relative error {worst:.3e} < 1e-5"));
    o
}

const TITLES: [&str; 10] = [
    "example 1 structure",
    "nearly Kenmotsu gate",
    "identity suite",
    "slant reproduction",
    "induced-metric reproduction",
    "submanifold identities",
    "lemma suite",
    "theorem gaps",
    "determinism",
    "oracle cross-check",
];

/// Criteria that fail as written, for a checked reason.
const KNOWN_RED: [usize; 4] = [4, 5, 6, 7];

fn main() {
    let runs: [fn() -> Outcome; 10] = [
        criterion1,
        criterion2,
        criterion3,
        criterion4,
        criterion5,
        criterion6,
        criterion7,
        criterion8,
        criterion9,
        criterion10,
    ];
    let mut unexpected = Vec::new();
    for (i, run) in runs.iter().enumerate() {
        let id = i + 1;
        let o = run();
        let line = match &o.verdict {
            Verdict::Pass => "PASS".to_string(),
            Verdict::Known(r) => format!("FAIL (known: {r})"),
            Verdict::Fail(r) => format!("FAIL ({r})"),
        };
        println!("criterion {id:>2} {:<28} {line}", TITLES[i]);
        for d in &o.details {
            println!("      {d}");
        }
        let expected = match o.verdict {
            Verdict::Pass => !KNOWN_RED.contains(&id),
            Verdict::Known(_) => KNOWN_RED.contains(&id),
            Verdict::Fail(_) => false,
        };
        if !expected {
            unexpected.push(id);
        }
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected outcome for criteria {unexpected:?}");
        std::process::exit(1);
    }
    println!("acceptance: criteria 1-3 and 8-10 pass; 4, 5, 6 and 7 fail as written for the reasons shown");
}
