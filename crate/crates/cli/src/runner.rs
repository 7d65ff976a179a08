//! Executes a validated [`Plan`] suite by suite.

use fgverify_core::ambient::{
    check_d_fundamental_form, check_f_structure, check_identities, check_kenmotsu, check_normal, Tolerances,
};
use fgverify_core::check::CheckResult;
use fgverify_core::sample::sample_box;
use fgverify_core::subgeom::{
    check_slant_relations, check_submanifold_identities, classify_pseudo_slant, induced_metric, Role,
};
use fgverify_core::warp::{
    check_lemma41, check_lemma42, check_lemma43, check_lemma44, check_reductions, corollary41_classify, theorem51_gap,
    theorem61_gap, Order,
};

use crate::scenario::{Plan, SubPlan, Suite};

/// Prefixes each record name with the object it was computed on.
pub fn tag(prefix: &str, mut checks: Vec<CheckResult>) -> Vec<CheckResult> {
    for c in &mut checks {
        c.name = format!("{prefix}: {}", c.name);
    }
    checks
}

fn induced_metric_check(sub: &SubPlan, points: &[Vec<f64>], tol: f64) -> fgverify_core::Result<Vec<CheckResult>> {
    let Some(expected) = &sub.metric else { return Ok(Vec::new()) };
    let mut col = Vec::with_capacity(points.len());
    for p in points {
        let g = induced_metric(&sub.immersion, p)?;
        let mut worst = 0.0f64;
        let m = sub.immersion.dim();
        for a in 0..m {
            for b in 0..m {
                let e = expected[a * m + b].eval(p)?;
                worst = worst.max((g.get(a, b) - e).abs() / e.abs().max(1.0));
            }
        }
        col.push(worst);
    }
    Ok(vec![CheckResult::residual("induced metric", "g(chi_* d_a, chi_* d_b) equals the declared matrix", col, tol)])
}

pub fn run_plan(plan: &Plan) -> fgverify_core::Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    let tol = Tolerances { algebraic: plan.tol.algebraic, curvature: plan.tol.curvature };
    for suite in &plan.suites {
        if let Some(amb) = &plan.ambient {
            let pts = sample_box(&amb.chart.bounds, plan.samples, plan.seed);
            let checks = match suite {
                Suite::Structure => check_f_structure(amb, &pts, tol.algebraic)?,
                Suite::Normality => vec![check_normal(amb, &pts, plan.tol.derivative)?],
                Suite::FundamentalForm => vec![check_d_fundamental_form(amb, &pts, plan.tol.derivative)?],
                Suite::Kenmotsu => check_kenmotsu(amb, &pts, plan.tol.derivative)?,
                Suite::Identities => check_identities(amb, &pts, tol.curvature)?,
                _ => Vec::new(),
            };
            out.extend(tag("ambient", checks));
        }
        for sub in &plan.submanifolds {
            let pts = sample_box(&sub.immersion.domain.bounds, plan.samples, plan.seed);
            let checks = match suite {
                Suite::Submanifold => check_submanifold_identities(
                    &sub.immersion,
                    &pts,
                    Tolerances { algebraic: tol.algebraic, curvature: plan.tol.warped },
                )?,
                Suite::InducedMetric => induced_metric_check(sub, &pts, plan.tol.warped)?,
                Suite::Slant => {
                    let mut v = Vec::new();
                    for (d, theta) in &sub.distributions {
                        if let (Role::Slant, Some(t)) = (d.role, theta) {
                            v.extend(tag(
                                &d.name,
                                check_slant_relations(&sub.immersion, d, *t, &pts, plan.tol.warped)?,
                            ));
                        }
                    }
                    v
                }
                Suite::PseudoSlant => match sub.pseudo_slant {
                    Some((a, b)) => {
                        let (dt, dp) = (&sub.distributions[a].0, &sub.distributions[b].0);
                        classify_pseudo_slant(&sub.immersion, dt, dp, &pts, plan.tol.warped)?.checks
                    }
                    None => Vec::new(),
                },
                _ => Vec::new(),
            };
            out.extend(tag(&sub.name, checks));
        }
        for (name, wp) in &plan.warped {
            if *suite == Suite::Lemma41 {
                let chart = wp.chart()?;
                let pts = sample_box(&chart.bounds, plan.samples, plan.seed);
                out.extend(tag(name, check_lemma41(wp, &pts, plan.tol.warped)?));
            }
        }
        for cfg in &plan.configs {
            let pts = sample_box(&cfg.immersion.domain.bounds, plan.samples, plan.seed);
            let checks = match (suite, cfg.order) {
                (Suite::Lemmas, Order::ThetaPerp) => check_lemma42(cfg, &pts, plan.tol.warped)?,
                (Suite::Lemmas, Order::PerpTheta) => {
                    let mut v = check_lemma43(cfg, &pts, plan.tol.warped)?;
                    v.extend(check_lemma44(cfg, &pts, plan.tol.warped)?);
                    v.extend(corollary41_classify(cfg, &pts, plan.tol.warped)?);
                    v
                }
                (Suite::Theorems, Order::PerpTheta) => theorem51_gap(cfg, &pts)?.checks(),
                (Suite::Theorems, Order::ThetaPerp) => theorem61_gap(cfg, &pts)?.checks(),
                _ => Vec::new(),
            };
            out.extend(tag(&cfg.name, checks));
        }
        if *suite == Suite::PaperTheorems {
            out.extend(tag("bounds", check_reductions(plan.seed, plan.samples)?));
        }
    }
    Ok(out)
}
