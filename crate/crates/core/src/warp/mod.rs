//! Warped products `M1 x_f M2` with metric `g1 + f^2 g2`, the connection
//! identities they satisfy, and the inequality machinery for warped
//! pseudo-slant submanifolds of the Kenmotsu f-model.

mod config;
mod lemmas;
mod theorems;

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use rand::Rng;

use crate::ambient::{christoffel_symbols, Chart};
use crate::check::CheckResult;
use crate::error::{Error, Result};
use crate::expr::{coordinate_jets, parse, BoundExpr, Expr};
use crate::jet::Jet;
use crate::linalg::BilinearForm;
use crate::sample::{rng, sample_box};

pub use config::{product_config, rotation_config, Frames, GradLnF, InequalityConfig, Order, Restriction};
pub use lemmas::{check_lemma42, check_lemma43, check_lemma44, corollary41_classify};
pub use theorems::{
    check_reductions, theorem51_bound, theorem51_gap, theorem61_bound, theorem61_gap, GapReport, GAP_TOL,
};

#[derive(Debug, Clone)]
pub struct WarpedProduct {
    pub base: Chart,
    pub fiber: Chart,
    g_base: Vec<BoundExpr>,
    g_fiber: Vec<BoundExpr>,
    f: BoundExpr,
}

fn bind_square(rows: &[Vec<Expr>], chart: &Chart, what: &'static str) -> Result<Vec<BoundExpr>> {
    let n = chart.dim();
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(Error::Dimension { what, expected: n, found: rows.len() });
    }
    let names = chart.names();
    let mut out = Vec::with_capacity(n * n);
    for (i, r) in rows.iter().enumerate() {
        for (j, e) in r.iter().enumerate() {
            if e != &rows[j][i] {
                return Err(Error::Contract(format!("{what} is not symmetric at ({i}, {j})")));
            }
            out.push(e.bind(&names)?);
        }
    }
    Ok(out)
}

impl WarpedProduct {
    pub fn new(base: Chart, fiber: Chart, g_base: &[Vec<Expr>], g_fiber: &[Vec<Expr>], f: &Expr) -> Result<Self> {
        let gb = bind_square(g_base, &base, "base metric")?;
        let gf = bind_square(g_fiber, &fiber, "fiber metric")?;
        let f = f.bind(&base.names())?;
        for c in fiber.names() {
            if base.index_of(c).is_some() {
                return Err(Error::InvalidParameter(format!("coordinate `{c}` appears in both factors")));
            }
        }
        Ok(WarpedProduct { base, fiber, g_base: gb, g_fiber: gf, f })
    }

    pub fn from_strings(base: Chart, fiber: Chart, g_base: &[&[&str]], g_fiber: &[&[&str]], f: &str) -> Result<Self> {
        let rows = |m: &[&[&str]]| -> Result<Vec<Vec<Expr>>> {
            m.iter().map(|r| r.iter().map(|s| parse(s)).collect()).collect()
        };
        WarpedProduct::new(base, fiber, &rows(g_base)?, &rows(g_fiber)?, &parse(f)?)
    }

    pub fn dim(&self) -> usize {
        self.base.dim() + self.fiber.dim()
    }

    /// The product chart, base coordinates first.
    pub fn chart(&self) -> Result<Chart> {
        let mut names = self.base.names();
        names.extend(self.fiber.names());
        let mut bounds = self.base.bounds.clone();
        bounds.extend(self.fiber.bounds.iter().copied());
        Chart::new(&format!("{} x {}", self.base.name, self.fiber.name), &names, &bounds)
    }

    fn split<'a>(&self, p: &'a [f64]) -> Result<(&'a [f64], &'a [f64])> {
        if p.len() != self.dim() {
            return Err(Error::Dimension { what: "product point", expected: self.dim(), found: p.len() });
        }
        Ok(p.split_at(self.base.dim()))
    }

    /// Warping function as a jet over the base coordinates.
    pub fn f_jet(&self, base_point: &[f64]) -> Result<Jet> {
        let f = self.f.eval_jet(&coordinate_jets(base_point))?;
        if !(f.value() > 0.0) {
            return Err(Error::Domain {
                expr: self.f.source().to_string(),
                reason: "warping function must be positive",
            });
        }
        Ok(f)
    }

    /// Block metric `g1 (+) f^2 g2` as jets over the product coordinates.
    pub fn metric_at(&self, p: &[f64]) -> Result<Vec<Jet>> {
        self.split(p)?;
        let (m1, n) = (self.base.dim(), self.dim());
        let vars = coordinate_jets(p);
        let (bv, fv) = vars.split_at(m1);
        let f = self.f.eval_jet(bv)?;
        if !(f.value() > 0.0) {
            return Err(Error::Domain {
                expr: self.f.source().to_string(),
                reason: "warping function must be positive",
            });
        }
        let f2 = &f * &f;
        let mut g = alloc::vec![Jet::constant(0.0); n * n];
        for i in 0..m1 {
            for j in 0..m1 {
                g[i * n + j] = self.g_base[i * m1 + j].eval_jet(bv)?;
            }
        }
        let m2 = self.fiber.dim();
        for a in 0..m2 {
            for b in 0..m2 {
                g[(m1 + a) * n + m1 + b] = &f2 * &self.g_fiber[a * m2 + b].eval_jet(fv)?;
            }
        }
        Ok(g)
    }

    /// `grad ln f` in product coordinates and its squared norm.
    pub fn grad_ln_f(&self, p: &[f64]) -> Result<(Vec<f64>, f64)> {
        let (bp, _) = self.split(p)?;
        let f = self.f_jet(bp)?;
        let n = self.dim();
        let mut d = alloc::vec![0.0; n];
        for (i, di) in d.iter_mut().enumerate().take(self.base.dim()) {
            *di = f.d(i) / f.value();
        }
        let g = BilinearForm::new(n, self.metric_at(p)?.iter().map(Jet::value).collect())?;
        let grad = g.solve(&d)?;
        let sq = grad.iter().zip(&d).map(|(a, b)| a * b).sum();
        Ok((grad, sq))
    }
}

/// A warped product metric bound to its product chart.
#[derive(Debug, Clone)]
pub struct MetricField {
    pub chart: Chart,
    product: WarpedProduct,
}

impl MetricField {
    pub fn at(&self, p: &[f64]) -> Result<Vec<Jet>> {
        self.product.metric_at(p)
    }

    pub fn values(&self, p: &[f64]) -> Result<BilinearForm> {
        BilinearForm::new(self.chart.dim(), self.at(p)?.iter().map(Jet::value).collect())
    }
}

/// Builds the warped metric, checking positivity of `f` and definiteness of
/// the block metric at seeded samples of the product box.
pub fn warped_metric(wp: &WarpedProduct) -> Result<MetricField> {
    let chart = wp.chart()?;
    for p in sample_box(&chart.bounds, 32, 0) {
        let g = BilinearForm::new(chart.dim(), wp.metric_at(&p)?.iter().map(Jet::value).collect())?;
        if !g.is_positive_definite() {
            return Err(Error::Degenerate { what: "warped metric", index: 0 });
        }
    }
    Ok(MetricField { chart, product: wp.clone() })
}

/// Residuals at one product point: `[tangency of nabla_X Y to M1,
/// nabla_Z X - (X ln f) Z, nabla_Z W - nabla°_Z W + g(Z,W) grad ln f]`,
/// each the largest metric norm over coordinate fields.
pub fn lemma41_point(wp: &WarpedProduct, p: &[f64]) -> Result<[f64; 3]> {
    let (bp, fp) = wp.split(p)?;
    let (m1, m2, n) = (wp.base.dim(), wp.fiber.dim(), wp.dim());
    let g = wp.metric_at(p)?;
    let gv: Vec<f64> = g.iter().map(Jet::value).collect();
    let norm = |v: &[f64]| {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                s += gv[i * n + j] * v[i] * v[j];
            }
        }
        libm::sqrt(s.max(0.0))
    };
    let conn = christoffel_symbols(&g, n)?;
    let f = wp.f_jet(bp)?;
    let dln: Vec<f64> = (0..m1).map(|i| f.d(i) / f.value()).collect();
    let (grad, _) = wp.grad_ln_f(p)?;

    let mut r1 = 0.0f64;
    for i in 0..m1 {
        for j in 0..m1 {
            let v: Vec<f64> = (0..n).map(|k| if k < m1 { 0.0 } else { conn.get(k, i, j) }).collect();
            r1 = r1.max(norm(&v));
        }
    }
    let mut r2 = 0.0f64;
    for a in 0..m2 {
        for i in 0..m1 {
            for (x, y) in [(m1 + a, i), (i, m1 + a)] {
                let v: Vec<f64> = (0..n).map(|k| conn.get(k, x, y) - if k == m1 + a { dln[i] } else { 0.0 }).collect();
                r2 = r2.max(norm(&v));
            }
        }
    }
    let gf: Vec<Jet> = wp.g_fiber.iter().map(|e| e.eval_jet(&coordinate_jets(fp))).collect::<Result<_>>()?;
    let fiber_conn = christoffel_symbols(&gf, m2)?;
    let mut r3 = 0.0f64;
    for a in 0..m2 {
        for b in 0..m2 {
            let gab = gv[(m1 + a) * n + m1 + b];
            let v: Vec<f64> = (0..n)
                .map(|k| {
                    let flat = if k >= m1 { fiber_conn.get(k - m1, a, b) } else { 0.0 };
                    conn.get(k, m1 + a, m1 + b) - flat + gab * grad[k]
                })
                .collect();
            r3 = r3.max(norm(&v));
        }
    }
    Ok([r1, r2, r3])
}

pub fn check_lemma41(wp: &WarpedProduct, points: &[Vec<f64>], tol: f64) -> Result<Vec<CheckResult>> {
    let mut cols = [Vec::new(), Vec::new(), Vec::new()];
    for p in points {
        let r = lemma41_point(wp, p)?;
        for k in 0..3 {
            cols[k].push(r[k]);
        }
    }
    let [a, b, c] = cols;
    Ok(alloc::vec![
        CheckResult::residual("warped base geodesic", "nabla_X Y tangent to M1 for X, Y on M1", a, tol),
        CheckResult::residual("warped mixed derivative", "nabla_Z X = nabla_X Z = (X ln f) Z", b, tol),
        CheckResult::residual("warped fiber derivative", "nabla_Z W = nabla°_Z W - g(Z,W) grad ln f", c, tol),
    ])
}

fn poly3(r: &mut impl Rng, x: &str, y: &str, scale: f64) -> String {
    let monomials = [
        String::from("1"),
        x.to_string(),
        y.to_string(),
        format!("{x}^2"),
        format!("{x}*{y}"),
        format!("{y}^2"),
        format!("{x}^3"),
        format!("{x}^2*{y}"),
        format!("{x}*{y}^2"),
        format!("{y}^3"),
    ];
    let mut terms = Vec::new();
    for m in monomials.iter() {
        let c: f64 = r.gen_range(-scale..scale);
        terms.push(format!("({c:.6})*{m}"));
    }
    terms.join(" + ")
}

/// A seeded warped product on `(b1, b2) x (c1, c2)` over the unit boxes with
/// polynomial metric blocks of degree at most three and, alternately, an
/// exponential or a polynomial warping function.
pub fn random_warping(seed: u64) -> Result<WarpedProduct> {
    let mut r = rng(seed);
    let base = Chart::new("base", &["b1", "b2"], &[(-1.0, 1.0), (-1.0, 1.0)])?;
    let fiber = Chart::new("fiber", &["c1", "c2"], &[(-1.0, 1.0), (-1.0, 1.0)])?;
    let mut block = |x: &str, y: &str| -> Vec<Vec<String>> {
        // diagonally dominant on the unit box
        let d1 = format!("2 + {}", poly3(&mut r, x, y, 0.08));
        let d2 = format!("2 + {}", poly3(&mut r, x, y, 0.08));
        let off = poly3(&mut r, x, y, 0.08);
        alloc::vec![alloc::vec![d1, off.clone()], alloc::vec![off, d2]]
    };
    let gb = block("b1", "b2");
    let gf = block("c1", "c2");
    let f = if seed.is_multiple_of(2) {
        format!("exp({})", poly3(&mut r, "b1", "b2", 0.3))
    } else {
        format!("2 + {}", poly3(&mut r, "b1", "b2", 0.15))
    };
    let rows = |m: &[Vec<String>]| -> Result<Vec<Vec<Expr>>> {
        m.iter().map(|row| row.iter().map(|s| parse(s)).collect()).collect()
    };
    WarpedProduct::new(base, fiber, &rows(&gb)?, &rows(&gf)?, &parse(&f)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line_warp(f: &str) -> WarpedProduct {
        let base = Chart::new("z", &["z"], &[(-1.0, 1.0)]).unwrap();
        let fiber = Chart::new("x", &["x"], &[(-1.0, 1.0)]).unwrap();
        WarpedProduct::from_strings(base, fiber, &[&["1"]], &[&["1"]], f).unwrap()
    }

    #[test]
    fn exponential_warp_is_model_metric() {
        let wp = line_warp("exp(z)");
        let g = wp.metric_at(&[0.3, 0.1]).unwrap();
        assert_eq!(g[0].value(), 1.0);
        assert!((g[3].value() - libm::exp(0.6)).abs() < 1e-14);
        assert!(g[1].value() == 0.0 && g[2].value() == 0.0);
    }

    #[test]
    fn exponential_warp_mixed_christoffel() {
        let wp = line_warp("exp(z)");
        let conn = christoffel_symbols(&wp.metric_at(&[0.3, 0.1]).unwrap(), 2).unwrap();
        // Gamma^x_{xz} = 1, so nabla_Z d_z = Z
        assert!((conn.get(1, 1, 0) - 1.0).abs() < 1e-13);
        let r = lemma41_point(&wp, &[0.3, 0.1]).unwrap();
        assert!(r.iter().all(|x| *x < 1e-12));
    }

    #[test]
    fn constant_warp_has_flat_mixed_terms() {
        let wp = line_warp("3");
        let conn = christoffel_symbols(&wp.metric_at(&[0.2, 0.4]).unwrap(), 2).unwrap();
        assert_eq!(conn.get(1, 1, 0), 0.0);
        assert_eq!(wp.grad_ln_f(&[0.2, 0.4]).unwrap().1, 0.0);
    }

    #[test]
    fn nonpositive_warp_is_domain_error() {
        let wp = line_warp("z");
        assert!(matches!(wp.metric_at(&[-0.5, 0.0]), Err(Error::Domain { .. })));
        assert!(warped_metric(&wp).is_err());
    }

    #[test]
    fn radial_warp_gradient() {
        let base = Chart::new("b", &["u2", "u3"], &[(1.0, 5.0), (1.0, 5.0)]).unwrap();
        let fiber = Chart::new("f", &["u1"], &[(-1.0, 1.0)]).unwrap();
        let wp = WarpedProduct::from_strings(base, fiber, &[&["1", "0"], &["0", "1"]], &[&["1"]], "sqrt(u2^2 + u3^2)")
            .unwrap();
        let (_, sq) = wp.grad_ln_f(&[3.0, 4.0, 0.0]).unwrap();
        assert!((sq - 1.0 / 25.0).abs() < 1e-15);
    }

    #[test]
    fn random_warpings_satisfy_lemma() {
        for seed in 0..20 {
            let wp = random_warping(seed).unwrap();
            let mf = warped_metric(&wp).unwrap();
            let pts = sample_box(&mf.chart.bounds, 30, seed + 100);
            for c in check_lemma41(&wp, &pts, 1e-7).unwrap() {
                assert!(c.passed(), "seed {seed}: {} = {}", c.name, c.value);
            }
        }
    }
}
