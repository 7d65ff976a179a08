//! Lower bounds for `|h|^2` on mixed totally geodesic warped pseudo-slant
//! submanifolds, evaluated as gaps `|h|^2 - bound` under explicit gates.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use rand::Rng;

use super::config::{InequalityConfig, Order, Restriction};
use crate::check::CheckResult;
use crate::error::{Error, Result};
use crate::expr::parse;
use crate::sample::rng;
use crate::subgeom::{PointGeometry, SecondFundamentalForm};

/// Gaps down to `-GAP_TOL` count as nonnegative.
pub const GAP_TOL: f64 = 1e-6;
/// Tolerance of each gate.
pub const GATE_TOL: f64 = 1e-6;

/// `(2 beta / 9) cos^2(theta) (|grad_perp ln f|^2 - s^2)`.
pub fn theorem51_bound(beta: usize, cos2: f64, grad_sq: f64, s: usize) -> f64 {
    let s = s as f64;
    2.0 * beta as f64 / 9.0 * cos2 * (grad_sq - s * s)
}

/// `alpha cot^2(theta) (|grad_theta ln f|^2 - s^2)`.
pub fn theorem61_bound(alpha: usize, cot2: f64, grad_sq: f64, s: usize) -> f64 {
    let s = s as f64;
    alpha as f64 * cot2 * (grad_sq - s * s)
}

#[derive(Debug, Clone)]
pub struct GapReport {
    pub config: String,
    pub order: Order,
    pub lhs: Vec<f64>,
    pub rhs: Vec<f64>,
    pub gap: Vec<f64>,
    pub mixed: Vec<f64>,
    pub slant: Vec<f64>,
    /// `|sum_k xi_k(ln f) - s|`.
    pub structure: Vec<f64>,
    /// Totally geodesic defect of the factor that is geodesic in the equality case.
    pub geodesic: Vec<f64>,
    /// Umbilicity defect of the other factor.
    pub umbilic: Vec<f64>,
}

impl GapReport {
    pub fn gated(&self, i: usize) -> bool {
        self.mixed[i] < GATE_TOL && self.slant[i] < GATE_TOL && self.structure[i] < GATE_TOL
    }

    pub fn gated_count(&self) -> usize {
        (0..self.gap.len()).filter(|&i| self.gated(i)).count()
    }

    pub fn positive_bound_count(&self) -> usize {
        (0..self.gap.len()).filter(|&i| self.gated(i) && self.rhs[i] > 1e-12).count()
    }

    pub fn checks(&self) -> Vec<CheckResult> {
        let (label, reference) = match self.order {
            Order::PerpTheta => ("perp-theta", "|h|^2 >= (2 beta/9) cos^2(theta) {|grad_perp ln f|^2 - s^2}"),
            Order::ThetaPerp => ("theta-perp", "|h|^2 >= alpha cot^2(theta) {|grad_theta ln f|^2 - s^2}"),
        };
        let gated: Vec<f64> = (0..self.gap.len()).filter(|&i| self.gated(i)).map(|i| self.gap[i]).collect();
        let name = format!("{label} inequality gap");
        let mut out = Vec::new();
        if gated.is_empty() {
            out.push(
                CheckResult::info(&name, reference, 0.0)
                    .with_note("gate failure: no sample passes the mixed, slant and structure gates"),
            );
        } else {
            let mut c = CheckResult::gap(&name, reference, gated, GAP_TOL);
            if self.gated_count() < self.gap.len() {
                c.notes.push(format!(
                    "{} of {} samples gated out",
                    self.gap.len() - self.gated_count(),
                    self.gap.len()
                ));
            }
            out.push(c);
        }
        let info = |n: &str, r: &str, v: &[f64]| {
            let mut c = CheckResult::info(&format!("{label} {n}"), r, v.iter().fold(0.0f64, |m, x| m.max(*x)));
            c.per_sample = v.to_vec();
            c
        };
        out.push(info("gate mixed", "max |h(X,Z)|, X on M_theta, Z on M_perp", &self.mixed));
        out.push(info("gate slant", "max |cos theta(X) - cos theta|", &self.slant));
        out.push(info("gate structure warping", "|sum_k xi_k(ln f) - s|", &self.structure));
        let mut pos = CheckResult::info(
            &format!("{label} positive bound"),
            "gated samples with a strictly positive right side",
            self.positive_bound_count() as f64,
        );
        if self.positive_bound_count() == 0 {
            pos.notes.push("no gated sample has a strictly positive right side".to_string());
        }
        out.push(pos);
        let (geo_name, umb_name) = match self.order {
            Order::PerpTheta => ("M_perp", "M_theta"),
            Order::ThetaPerp => ("M_theta", "M_perp"),
        };
        out.push(info(&format!("equality {geo_name} geodesic defect"), "max |h| on the factor", &self.geodesic));
        out.push(info(&format!("equality {umb_name} umbilicity defect"), "max |h(X,Y) - g(X,Y) H|", &self.umbilic));
        let closest = self.gap.iter().fold(f64::INFINITY, |m, x| m.min(x.abs()));
        out.push(CheckResult::info(&format!("{label} closest to equality"), "min |gap|", closest));
        out
    }
}

fn max_h(geo: &PointGeometry, sff: &SecondFundamentalForm, a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    let mut m = 0.0f64;
    for x in a {
        for y in b {
            m = m.max(geo.norm(&geo.h(sff, x, y)));
        }
    }
    m
}

fn umbilicity(geo: &PointGeometry, sff: &SecondFundamentalForm, frame: &[Vec<f64>]) -> f64 {
    if frame.is_empty() {
        return 0.0;
    }
    let mut mean = alloc::vec![0.0; geo.n];
    for e in frame {
        for (k, v) in geo.h(sff, e, e).iter().enumerate() {
            mean[k] += v / frame.len() as f64;
        }
    }
    let mut m = 0.0f64;
    for (i, x) in frame.iter().enumerate() {
        for (j, y) in frame.iter().enumerate() {
            let h = geo.h(sff, x, y);
            let d: Vec<f64> = h.iter().zip(&mean).map(|(a, b)| if i == j { a - b } else { *a }).collect();
            m = m.max(geo.norm(&d));
        }
    }
    m
}

fn gap_report(cfg: &InequalityConfig, points: &[Vec<f64>], order: Order) -> Result<GapReport> {
    if cfg.order != order {
        return Err(Error::Contract(format!("needs a configuration of type {}", order.label())));
    }
    let cos = libm::cos(cfg.theta);
    let (cos2, sin2) = (cos * cos, 1.0 - cos * cos);
    let mut r = GapReport {
        config: cfg.name.clone(),
        order,
        lhs: Vec::new(),
        rhs: Vec::new(),
        gap: Vec::new(),
        mixed: Vec::new(),
        slant: Vec::new(),
        structure: Vec::new(),
        geodesic: Vec::new(),
        umbilic: Vec::new(),
    };
    for p in points {
        let geo = cfg.immersion.geometry(p)?;
        let sff = geo.second_fundamental_form();
        let fr = cfg.frames(&geo)?;
        let (theta_block, perp_block) = (fr.theta_block(order), fr.perp_block(order));
        let lhs = sff.norm_squared();
        let rhs = match order {
            Order::PerpTheta => {
                let g = cfg.grad_ln_f(&geo, Restriction::Perp)?;
                theorem51_bound(cfg.beta, cos2, g.norm_squared, cfg.s)
            }
            Order::ThetaPerp => {
                if !(sin2 > 0.0 && cos2 > 0.0) {
                    return Err(Error::InvalidParameter("cot^2(theta) needs a proper slant angle".into()));
                }
                let g = cfg.grad_ln_f(&geo, Restriction::Theta)?;
                theorem61_bound(cfg.alpha, cos2 / sin2, g.norm_squared, cfg.s)
            }
        };
        let xi_sum = cfg.grad_ln_f(&geo, Restriction::Full)?.xi_sum;
        let mut sl = 0.0f64;
        for x in &fr.theta {
            sl = sl.max((fr.slant.cos_angle(x)? - cos).abs());
        }
        let (geod, umb) = match order {
            Order::PerpTheta => (max_h(&geo, &sff, &perp_block, &perp_block), umbilicity(&geo, &sff, &theta_block)),
            Order::ThetaPerp => (max_h(&geo, &sff, &theta_block, &theta_block), umbilicity(&geo, &sff, &perp_block)),
        };
        r.lhs.push(lhs);
        r.rhs.push(rhs);
        r.gap.push(lhs - rhs);
        r.mixed.push(max_h(&geo, &sff, &theta_block, &perp_block));
        r.slant.push(sl);
        r.structure.push((xi_sum - cfg.s as f64).abs());
        r.geodesic.push(geod);
        r.umbilic.push(umb);
    }
    Ok(r)
}

/// Gap for `M_perp x_f M_theta` with the structure fields on `M_perp`.
pub fn theorem51_gap(cfg: &InequalityConfig, points: &[Vec<f64>]) -> Result<GapReport> {
    gap_report(cfg, points, Order::PerpTheta)
}

/// Gap for `M_theta x_f M_perp` with the structure fields on `M_theta`.
pub fn theorem61_gap(cfg: &InequalityConfig, points: &[Vec<f64>]) -> Result<GapReport> {
    gap_report(cfg, points, Order::ThetaPerp)
}

/// The general bounds at `s = 0` and `s = 1` against the reduced bounds,
/// the latter evaluated from their written forms.
pub fn check_reductions(seed: u64, count: usize) -> Result<Vec<CheckResult>> {
    let forms = [
        ("perp-theta bound at s = 0", "(2*k/9)*c*g", 0usize, true),
        ("perp-theta bound at s = 1", "(2*k/9)*c*(g - 1)", 1, true),
        ("theta-perp bound at s = 0", "k*c*g", 0, false),
        ("theta-perp bound at s = 1", "k*c*(g - 1)", 1, false),
    ];
    let mut r = rng(seed);
    let mut out = Vec::new();
    for (name, written, s, perp) in forms {
        let e = parse(written)?.bind(&["k", "c", "g"])?;
        let mut res = Vec::with_capacity(count);
        for _ in 0..count {
            let k: usize = r.gen_range(1..6);
            let c: f64 = r.gen_range(0.01..10.0);
            let g: f64 = r.gen_range(0.0..10.0);
            let general = if perp { theorem51_bound(k, c, g, s) } else { theorem61_bound(k, c, g, s) };
            let reduced = e.eval(&[k as f64, c, g])?;
            res.push((general - reduced).abs() / reduced.abs().max(1.0));
        }
        out.push(CheckResult::residual(name, written, res, 1e-12));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::super::config::{product_config, rotation_config};
    use super::*;
    use crate::sample::sample_box;

    #[test]
    fn constant_warping_bounds_are_nonpositive() {
        assert!(theorem51_bound(2, 0.5, 0.0, 1) <= 0.0);
        assert!(theorem61_bound(2, 3.0, 0.0, 2) <= 0.0);
    }

    #[test]
    fn reductions_match() {
        for c in check_reductions(5, 50).unwrap() {
            assert!(c.passed(), "{}", c.name);
        }
    }

    #[test]
    fn rotation_gap_is_nonnegative_and_tight_for_one_structure_field() {
        for s in 1..=2 {
            let c = rotation_config(s, 0.8, 1.5).unwrap();
            let pts = sample_box(&c.immersion.domain.bounds, 10, 31);
            let g = theorem61_gap(&c, &pts).unwrap();
            assert_eq!(g.gated_count(), 10);
            let checks = g.checks();
            assert!(checks[0].passed(), "s={s}: {}", checks[0].value);
            if s == 1 {
                assert!(g.gap.iter().all(|x| x.abs() < 1e-9));
                assert_eq!(g.positive_bound_count(), 10);
            }
        }
    }

    #[test]
    fn product_gap_is_nonnegative() {
        let c = product_config(2, 0.8, 1.2).unwrap();
        let pts = sample_box(&c.immersion.domain.bounds, 10, 32);
        let g = theorem51_gap(&c, &pts).unwrap();
        let checks = g.checks();
        assert!(checks[0].passed());
        assert_eq!(g.positive_bound_count(), 0);
        assert!(checks[4].notes[0].contains("no gated sample"));
    }

    #[test]
    fn wrong_order_is_rejected() {
        let c = product_config(1, 0.8, 1.2).unwrap();
        assert!(theorem61_gap(&c, &[]).is_err());
    }
}
