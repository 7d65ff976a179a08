use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use rand::Rng;

use crate::ambient::{kenmotsu_f_model, Chart};
use crate::error::{Error, Result};
use crate::expr::{coordinate_jets, parse, BoundExpr, Expr};
use crate::jet::Jet;
use crate::linalg::gram_schmidt_with;
use crate::sample::rng;
use crate::subgeom::{Distribution, Immersion, PointGeometry, Role, SlantFrame, Span};

/// Which factor is the base of the warped product.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Order {
    /// `M_perp x_f M_theta`, structure fields tangent to `M_perp`.
    PerpTheta,
    /// `M_theta x_f M_perp`, structure fields tangent to `M_theta`.
    ThetaPerp,
}

impl Order {
    pub fn label(self) -> &'static str {
        match self {
            Order::PerpTheta => "M_perp x_f M_theta",
            Order::ThetaPerp => "M_theta x_f M_perp",
        }
    }
}

/// Where `grad ln f` is measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Restriction {
    Full,
    /// The `M_perp` factor, structure fields included when it carries them.
    Perp,
    /// The `M_theta` factor, structure fields included when it carries them.
    Theta,
}

#[derive(Debug, Clone)]
pub struct GradLnF {
    /// Gradient restricted to the chosen factor, as an ambient vector.
    pub vector: Vec<f64>,
    pub norm_squared: f64,
    /// `sum_k xi_k(ln f)`.
    pub xi_sum: f64,
}

/// A warped pseudo-slant submanifold with its declared distributions.
/// `d_theta` and `d_perp` exclude the structure fields; `alpha` and
/// `2 beta` are their ranks.
#[derive(Debug, Clone)]
pub struct InequalityConfig {
    pub name: String,
    pub order: Order,
    pub immersion: Immersion,
    pub d_theta: Distribution,
    pub d_perp: Distribution,
    warping: BoundExpr,
    /// Declared slant angle.
    pub theta: f64,
    pub alpha: usize,
    pub beta: usize,
    pub s: usize,
}

/// Orthonormal frames of the two factors at a point.
#[derive(Debug, Clone)]
pub struct Frames {
    pub theta: Vec<Vec<f64>>,
    pub perp: Vec<Vec<f64>>,
    pub xi: Vec<Vec<f64>>,
    pub slant: SlantFrame,
}

impl Frames {
    /// Frame of `M_theta`.
    pub fn theta_block(&self, order: Order) -> Vec<Vec<f64>> {
        let mut v = self.theta.clone();
        if order == Order::ThetaPerp {
            v.extend(self.xi.iter().cloned());
        }
        v
    }

    /// Frame of `M_perp`.
    pub fn perp_block(&self, order: Order) -> Vec<Vec<f64>> {
        let mut v = self.perp.clone();
        if order == Order::PerpTheta {
            v.extend(self.xi.iter().cloned());
        }
        v
    }
}

impl InequalityConfig {
    pub fn new(
        name: &str,
        order: Order,
        immersion: Immersion,
        d_theta: Distribution,
        d_perp: Distribution,
        warping: &Expr,
        theta: f64,
    ) -> Result<Self> {
        let s = immersion.ambient.rank();
        let (r_theta, alpha) = (d_theta.rank(), d_perp.rank());
        if r_theta % 2 != 0 {
            return Err(Error::InvalidParameter(format!("slant distribution rank {r_theta} is odd")));
        }
        let beta = r_theta / 2;
        let (d1, d2) = match order {
            Order::PerpTheta => (2 * beta, alpha + s),
            Order::ThetaPerp => (2 * beta + s, alpha),
        };
        if d1 + d2 != immersion.dim() {
            return Err(Error::Dimension {
                what: "factor dimensions d1 + d2",
                expected: immersion.dim(),
                found: d1 + d2,
            });
        }
        if !(theta > 0.0 && theta <= core::f64::consts::FRAC_PI_2) {
            return Err(Error::InvalidParameter("slant angle must lie in (0, pi/2]".into()));
        }
        let warping = warping.bind(&immersion.domain.names())?;
        Ok(InequalityConfig {
            name: name.to_string(),
            order,
            immersion,
            d_theta,
            d_perp,
            warping,
            theta,
            alpha,
            beta,
            s,
        })
    }

    /// `(d1, d2)`: dimensions of the slant and anti-invariant factors.
    pub fn dims(&self) -> (usize, usize) {
        match self.order {
            Order::PerpTheta => (2 * self.beta, self.alpha + self.s),
            Order::ThetaPerp => (2 * self.beta + self.s, self.alpha),
        }
    }

    pub fn warping(&self) -> &Expr {
        self.warping.source()
    }

    pub fn frames(&self, geo: &PointGeometry) -> Result<Frames> {
        let slant = SlantFrame::from_geometry(geo, &self.d_theta.vectors(geo)?)?;
        let perp = SlantFrame::from_geometry(geo, &self.d_perp.vectors(geo)?)?.frame;
        let xi_raw = geo.xi();
        let xi = if xi_raw.is_empty() { Vec::new() } else { gram_schmidt_with(&xi_raw, geo.metric())? };
        Ok(Frames { theta: slant.frame.clone(), perp, xi, slant })
    }

    fn dlnf(&self, p: &[f64]) -> Result<Vec<f64>> {
        let f: Jet = self.warping.eval_jet(&coordinate_jets(p))?;
        if !(f.value() > 0.0) {
            return Err(Error::Domain {
                expr: self.warping.source().to_string(),
                reason: "warping function must be positive",
            });
        }
        Ok((0..p.len()).map(|a| f.d(a) / f.value()).collect())
    }

    /// `v(ln f)` for a tangent vector `v`.
    pub fn derivative_ln_f(&self, geo: &PointGeometry, v: &[f64]) -> Result<f64> {
        let d = self.dlnf(&geo.point)?;
        Ok(geo.domain_direction(v).iter().zip(&d).map(|(a, b)| a * b).sum())
    }

    pub fn grad_ln_f(&self, geo: &PointGeometry, restriction: Restriction) -> Result<GradLnF> {
        let frame = match restriction {
            Restriction::Full => geo.tangent_frame(),
            Restriction::Perp => self.frames(geo)?.perp_block(self.order),
            Restriction::Theta => self.frames(geo)?.theta_block(self.order),
        };
        let mut vector = alloc::vec![0.0; geo.n];
        let mut norm_squared = 0.0;
        for e in &frame {
            let c = self.derivative_ln_f(geo, e)?;
            norm_squared += c * c;
            for k in 0..geo.n {
                vector[k] += c * e[k];
            }
        }
        let mut xi_sum = 0.0;
        for x in geo.xi() {
            xi_sum += self.derivative_ln_f(geo, &x)?;
        }
        Ok(GradLnF { vector, norm_squared, xi_sum })
    }

    /// Seeded unit vectors `(X, Z)` with `X` on `M_theta` and `Z` on `M_perp`.
    pub fn sample_pair(&self, frames: &Frames, seed: u64) -> (Vec<f64>, Vec<f64>) {
        let mut r = rng(seed);
        let mut combo = |frame: &[Vec<f64>]| {
            let c: Vec<f64> = frame.iter().map(|_| r.gen_range(-1.0..1.0)).collect();
            let len = libm::sqrt(c.iter().map(|x| x * x).sum::<f64>()).max(1e-300);
            let n = frame[0].len();
            (0..n).map(|k| frame.iter().zip(&c).map(|(e, a)| a * e[k]).sum::<f64>() / len).collect::<Vec<f64>>()
        };
        let x = combo(&frames.theta_block(self.order));
        let z = combo(&frames.perp_block(self.order));
        (x, z)
    }
}

fn joined(prefix: &str, s: usize, sep: &str) -> String {
    (1..=s).map(|k| format!("{prefix}{k}")).collect::<Vec<_>>().join(sep)
}

fn coordinate_field(i: usize, m: usize) -> Vec<&'static str> {
    (0..m).map(|j| if i == j { "1" } else { "0" }).collect()
}

fn domain_chart(name: &str, head: &[(&str, (f64, f64))], s: usize) -> Result<Chart> {
    let tail: Vec<String> = (1..=s).map(|k| format!("t{k}")).collect();
    let mut names: Vec<&str> = head.iter().map(|h| h.0).collect();
    names.extend(tail.iter().map(String::as_str));
    let mut bounds: Vec<(f64, f64)> = head.iter().map(|h| h.1).collect();
    bounds.extend(core::iter::repeat_n((-0.5, 0.5), s));
    Chart::new(name, &names, &bounds)
}

/// `M_theta x_F M_perp` in the model with three complex pairs: a slant
/// plane in `(x3, y3)` directions tilted into the `(x1, x2)` plane, rotated
/// about the `y3` axis by the fiber angle `psi`; `F = e^{t1+..+ts}(a0 + u1)`.
pub fn rotation_config(s: usize, theta: f64, a0: f64) -> Result<InequalityConfig> {
    let ambient = kenmotsu_f_model(3, s)?;
    let domain = domain_chart("rotation", &[("u1", (0.0, 1.0)), ("u2", (-1.0, 1.0)), ("psi", (-1.0, 1.0))], s)?;
    let (cot, csc) = (libm::cos(theta) / libm::sin(theta), 1.0 / libm::sin(theta));
    let mut map = alloc::vec![
        format!("sin(psi)*({a0:?} + u1)"),
        format!("cos(psi)*({a0:?} + u1)"),
        format!("{cot:?}*u1"),
        "0".to_string(),
        "0".to_string(),
        format!("{csc:?}*u2"),
    ];
    map.extend((1..=s).map(|k| format!("t{k}")));
    let refs: Vec<&str> = map.iter().map(String::as_str).collect();
    let n = ambient.dim();
    let imm = Immersion::from_strings(domain.clone(), ambient, &refs)?;
    let m = domain.dim();
    let d_theta = Distribution::from_strings(
        "D_theta",
        Role::Slant,
        Span::Domain,
        &[&coordinate_field(0, m), &coordinate_field(1, m)],
        &domain,
        n,
    )?;
    let d_perp = Distribution::from_strings(
        "D_perp",
        Role::AntiInvariant,
        Span::Domain,
        &[&coordinate_field(2, m)],
        &domain,
        n,
    )?;
    let f = parse(&format!("exp({})*({a0:?} + u1)", joined("t", s, " + ")))?;
    InequalityConfig::new(&format!("rotation s={s}"), Order::ThetaPerp, imm, d_theta, d_perp, &f, theta)
}

/// `M_perp x_f M_theta` in the model with three complex pairs: a circle of
/// radius `r` in the `(x3, y3)` plane times the structure directions, with
/// a slant plane in `(x1, y1, x2)` as fiber; `f = e^{t1+..+ts}`.
pub fn product_config(s: usize, theta: f64, r: f64) -> Result<InequalityConfig> {
    let ambient = kenmotsu_f_model(3, s)?;
    let domain = domain_chart("product", &[("v1", (-1.0, 1.0)), ("v2", (-1.0, 1.0)), ("w", (-1.5, 1.5))], s)?;
    let (c, sn) = (libm::cos(theta), libm::sin(theta));
    let mut map = alloc::vec![
        "v1".to_string(),
        format!("{sn:?}*v2"),
        format!("{r:?}*cos(w)"),
        format!("{c:?}*v2"),
        "0".to_string(),
        format!("{r:?}*sin(w)"),
    ];
    map.extend((1..=s).map(|k| format!("t{k}")));
    let refs: Vec<&str> = map.iter().map(String::as_str).collect();
    let n = ambient.dim();
    let imm = Immersion::from_strings(domain.clone(), ambient, &refs)?;
    let m = domain.dim();
    let d_theta = Distribution::from_strings(
        "D_theta",
        Role::Slant,
        Span::Domain,
        &[&coordinate_field(0, m), &coordinate_field(1, m)],
        &domain,
        n,
    )?;
    let d_perp = Distribution::from_strings(
        "D_perp",
        Role::AntiInvariant,
        Span::Domain,
        &[&coordinate_field(2, m)],
        &domain,
        n,
    )?;
    let f = parse(&format!("exp({})", joined("t", s, " + ")))?;
    InequalityConfig::new(&format!("product s={s}"), Order::PerpTheta, imm, d_theta, d_perp, &f, theta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample::sample_box;

    #[test]
    fn dimension_bookkeeping() {
        let c = rotation_config(2, 1.0, 1.5).unwrap();
        assert_eq!((c.alpha, c.beta, c.s), (1, 1, 2));
        assert_eq!(c.dims(), (4, 1));
        let c = product_config(2, 1.0, 1.0).unwrap();
        assert_eq!(c.dims(), (2, 3));
    }

    #[test]
    fn wrong_order_tag_is_rejected() {
        let c = rotation_config(1, 1.0, 1.5).unwrap();
        let f = parse("exp(t1)").unwrap();
        let bad = InequalityConfig::new(
            "bad",
            Order::PerpTheta,
            c.immersion.clone(),
            c.d_theta.clone(),
            c.d_theta.clone(),
            &f,
            1.0,
        );
        assert!(matches!(bad, Err(Error::Dimension { .. })));
    }

    #[test]
    fn structure_derivative_of_ln_f_is_s() {
        for s in 1..=3 {
            let c = product_config(s, 0.8, 1.0).unwrap();
            for p in sample_box(&c.immersion.domain.bounds, 5, 3) {
                let geo = c.immersion.geometry(&p).unwrap();
                let g = c.grad_ln_f(&geo, Restriction::Full).unwrap();
                assert!((g.xi_sum - s as f64).abs() < 1e-12);
                assert!((g.norm_squared - s as f64).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn restricted_gradients_split_the_full_one() {
        let c = rotation_config(2, 0.9, 1.5).unwrap();
        for p in sample_box(&c.immersion.domain.bounds, 10, 5) {
            let geo = c.immersion.geometry(&p).unwrap();
            let full = c.grad_ln_f(&geo, Restriction::Full).unwrap().norm_squared;
            let a = c.grad_ln_f(&geo, Restriction::Perp).unwrap().norm_squared;
            let b = c.grad_ln_f(&geo, Restriction::Theta).unwrap().norm_squared;
            assert!(a + b <= full + 1e-9);
            // the warping depends only on the base
            assert!(a < 1e-20 && (b - full).abs() < 1e-12);
        }
    }

    #[test]
    fn declared_angle_is_measured() {
        for c in [rotation_config(1, 0.7, 1.5).unwrap(), product_config(2, 0.7, 1.0).unwrap()] {
            for p in sample_box(&c.immersion.domain.bounds, 5, 9) {
                let geo = c.immersion.geometry(&p).unwrap();
                let fr = c.frames(&geo).unwrap();
                for x in &fr.theta {
                    assert!((fr.slant.cos_angle(x).unwrap() - libm::cos(0.7)).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn submanifold_identities_hold_on_synthesized_configs() {
        use crate::ambient::Tolerances;
        use crate::subgeom::check_submanifold_identities;
        for c in [
            rotation_config(1, 0.8, 1.5).unwrap(),
            rotation_config(2, 0.8, 1.5).unwrap(),
            product_config(2, 0.8, 1.2).unwrap(),
        ] {
            let pts = sample_box(&c.immersion.domain.bounds, 8, 41);
            let tol = Tolerances { algebraic: 1e-6, curvature: 1e-6 };
            for r in check_submanifold_identities(&c.immersion, &pts, tol).unwrap() {
                assert!(r.passed(), "{}: {} = {}", c.name, r.name, r.value);
            }
        }
    }
}
