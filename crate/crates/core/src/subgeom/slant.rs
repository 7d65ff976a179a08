//! Distributions on a submanifold, slant angles and pseudo-slant gates.
//!
//! The slant angle of `X` in a distribution `D` is measured against `D`
//! itself, with the structure directions removed:
//! `cos theta(X) = |P_D' phi X| / |phi X|`, where `D'` is the orthonormal
//! frame of `D` projected onto the orthogonal complement of the `xi_k`. The
//! same projection defines `T_D = P_D' o phi` and `N_D = phi - T_D` for the
//! slant relations. The Wirtinger angle instead projects onto the whole
//! tangent space.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::Immersion;
use super::PointGeometry;
use crate::ambient::{dense, Chart};
use crate::check::{max_abs, CheckResult};
use crate::error::{Error, Result};
use crate::expr::{BoundExpr, Expr};
use crate::linalg::gram_schmidt_with;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    Slant,
    AntiInvariant,
    Structure,
}

impl Role {
    pub fn name(self) -> &'static str {
        match self {
            Role::Slant => "slant",
            Role::AntiInvariant => "anti-invariant",
            Role::Structure => "structure",
        }
    }
}

/// How the spanning fields are given.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Span {
    /// Ambient coordinate components, as functions of the domain coordinates.
    Ambient,
    /// Domain coordinate components, pushed forward by the Jacobian.
    Domain,
}

#[derive(Debug, Clone)]
pub struct Distribution {
    pub name: String,
    pub role: Role,
    pub span: Span,
    fields: Vec<Vec<BoundExpr>>,
}

impl Distribution {
    pub fn new(
        name: &str,
        role: Role,
        span: Span,
        fields: Vec<Vec<Expr>>,
        domain: &Chart,
        ambient_dim: usize,
    ) -> Result<Self> {
        let width = match span {
            Span::Ambient => ambient_dim,
            Span::Domain => domain.dim(),
        };
        let names = domain.names();
        let fields = fields
            .iter()
            .map(|f| {
                if f.len() != width {
                    return Err(Error::Dimension { what: "distribution field", expected: width, found: f.len() });
                }
                f.iter().map(|e| e.bind(&names)).collect()
            })
            .collect::<Result<Vec<Vec<BoundExpr>>>>()?;
        if fields.is_empty() {
            return Err(Error::InvalidParameter("a distribution needs at least one spanning field".into()));
        }
        Ok(Distribution { name: name.to_string(), role, span, fields })
    }

    pub fn from_strings(
        name: &str,
        role: Role,
        span: Span,
        fields: &[&[&str]],
        domain: &Chart,
        ambient_dim: usize,
    ) -> Result<Self> {
        let f = fields
            .iter()
            .map(|r| r.iter().map(|s| crate::expr::parse(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Distribution::new(name, role, span, f, domain, ambient_dim)
    }

    pub fn rank(&self) -> usize {
        self.fields.len()
    }

    /// Spanning vectors at the geometry's point, as ambient vectors.
    pub fn vectors(&self, geo: &PointGeometry) -> Result<Vec<Vec<f64>>> {
        self.fields
            .iter()
            .map(|f| {
                let c = f.iter().map(|e| e.eval(&geo.point)).collect::<Result<Vec<f64>>>()?;
                Ok(match self.span {
                    Span::Ambient => c,
                    Span::Domain => (0..geo.n).map(|k| (0..geo.m).map(|b| geo.jac[b][k] * c[b]).sum()).collect(),
                })
            })
            .collect()
    }
}

/// The projection data for slant measurements at one ambient point.
#[derive(Debug, Clone)]
pub struct SlantFrame {
    n: usize,
    g: Vec<f64>,
    phi: Vec<f64>,
    xi: Vec<Vec<f64>>,
    eta: Vec<Vec<f64>>,
    /// Orthonormal frame of the distribution with structure directions removed.
    pub frame: Vec<Vec<f64>>,
}

fn project(g: &[f64], n: usize, frame: &[Vec<f64>], v: &[f64]) -> Vec<f64> {
    let mut out = alloc::vec![0.0; n];
    for f in frame {
        let c = dense::inner(g, v, f, n);
        for k in 0..n {
            out[k] += c * f[k];
        }
    }
    out
}

impl SlantFrame {
    pub fn new(g: &[f64], phi: &[f64], xi: &[Vec<f64>], eta: &[Vec<f64>], vectors: &[Vec<f64>]) -> Result<Self> {
        let n = libm::sqrt(g.len() as f64) as usize;
        let xi_frame = if xi.is_empty() { Vec::new() } else { gram_schmidt_with(xi, g)? };
        let mut reduced = Vec::new();
        for v in vectors {
            let p = project(g, n, &xi_frame, v);
            let r: Vec<f64> = v.iter().zip(&p).map(|(a, b)| a - b).collect();
            let len = libm::sqrt(dense::inner(g, v, v, n));
            // members of the structure span contribute nothing
            if libm::sqrt(dense::inner(g, &r, &r, n).max(0.0)) > 1e-12 * len.max(1.0) {
                reduced.push(r);
            }
        }
        let frame = gram_schmidt_with(&reduced, g)?;
        Ok(SlantFrame { n, g: g.to_vec(), phi: phi.to_vec(), xi: xi.to_vec(), eta: eta.to_vec(), frame })
    }

    pub fn from_geometry(geo: &PointGeometry, vectors: &[Vec<f64>]) -> Result<Self> {
        let phi: Vec<f64> = geo.structure.phi_values();
        SlantFrame::new(geo.metric(), &phi, &geo.xi(), &geo.eta(), vectors)
    }

    fn norm(&self, v: &[f64]) -> f64 {
        libm::sqrt(dense::inner(&self.g, v, v, self.n).max(0.0))
    }

    pub fn phi(&self, v: &[f64]) -> Vec<f64> {
        dense::mat_vec(&self.phi, v, self.n)
    }

    pub fn project(&self, v: &[f64]) -> Vec<f64> {
        project(&self.g, self.n, &self.frame, v)
    }

    /// `T_D X = P_D' phi X`.
    pub fn t(&self, v: &[f64]) -> Vec<f64> {
        self.project(&self.phi(v))
    }

    /// `N_D X = phi X - T_D X`.
    pub fn n(&self, v: &[f64]) -> Vec<f64> {
        let p = self.phi(v);
        let t = self.project(&p);
        p.iter().zip(&t).map(|(a, b)| a - b).collect()
    }

    pub fn cos_angle(&self, x: &[f64]) -> Result<f64> {
        let px = self.phi(x);
        let len = self.norm(&px);
        if !(len > 1e-12 * self.norm(x).max(1e-300)) {
            return Err(Error::InvalidParameter("slant angle undefined: phi X vanishes".into()));
        }
        Ok((self.norm(&self.project(&px)) / len).min(1.0))
    }

    fn eta_pair(&self, x: &[f64], y: &[f64]) -> f64 {
        self.eta.iter().map(|e| dense::dot(e, x) * dense::dot(e, y)).sum()
    }

    fn g(&self, x: &[f64], y: &[f64]) -> f64 {
        dense::inner(&self.g, x, y, self.n)
    }
}

pub fn slant_angle(geo: &PointGeometry, d: &Distribution, x: &[f64]) -> Result<f64> {
    let frame = SlantFrame::from_geometry(geo, &d.vectors(geo)?)?;
    Ok(libm::acos(frame.cos_angle(x)?))
}

/// Angle between `phi X` and the whole tangent space.
pub fn wirtinger_angle(geo: &PointGeometry, x: &[f64]) -> Result<f64> {
    let px = geo.phi(x);
    let len = geo.norm(&px);
    if !(len > 1e-12 * geo.norm(x)) {
        return Err(Error::InvalidParameter("slant angle undefined: phi X vanishes".into()));
    }
    Ok(libm::acos((geo.norm(&geo.tan(&px)) / len).min(1.0)))
}

/// Slant relations on `D` for the declared angle: constancy gate,
/// `T_D^2 = -cos^2(theta)(I - sum eta^k (x) xi_k)`, the two Gram identities
/// and the Pythagorean split of `|phi X|^2`.
pub fn check_slant_relations(
    imm: &Immersion,
    d: &Distribution,
    theta: f64,
    points: &[Vec<f64>],
    tol: f64,
) -> Result<Vec<CheckResult>> {
    let (c, s) = (libm::cos(theta), libm::sin(theta));
    let (c2, s2) = (c * c, s * s);
    let mut cols: [Vec<f64>; 5] = Default::default();
    for p in points {
        let geo = imm.geometry(p)?;
        let sf = SlantFrame::from_geometry(&geo, &d.vectors(&geo)?)?;
        let fr = sf.frame.clone();
        let mut probes = fr.clone();
        if fr.len() > 1 {
            let mut sum = alloc::vec![0.0; sf.n];
            for (i, f) in fr.iter().enumerate() {
                for k in 0..sf.n {
                    sum[k] += f[k] * (1.0 + i as f64);
                }
            }
            probes.push(sum);
        }
        let mut gate = 0.0f64;
        for x in &probes {
            gate = gate.max((sf.cos_angle(x)? - c).abs());
        }
        cols[0].push(gate);
        let mut r30 = 0.0f64;
        let mut r31 = 0.0f64;
        let mut r32 = 0.0f64;
        let mut pyth = 0.0f64;
        for x in &fr {
            let tt = sf.t(&sf.t(x));
            let mut rhs: Vec<f64> = x.clone();
            for (k, xi) in sf.xi.iter().enumerate() {
                let e = dense::dot(&sf.eta[k], x);
                for l in 0..sf.n {
                    rhs[l] -= e * xi[l];
                }
            }
            r30 = r30.max(max_abs(&tt.iter().zip(&rhs).map(|(a, b)| a + c2 * b).collect::<Vec<_>>()));
            for y in &fr {
                let base = sf.g(x, y) - sf.eta_pair(x, y);
                r31 = r31.max((sf.g(&sf.t(x), &sf.t(y)) - c2 * base).abs());
                r32 = r32.max((sf.g(&sf.n(x), &sf.n(y)) - s2 * base).abs());
            }
            let (t, nn, ph) = (sf.t(x), sf.n(x), sf.phi(x));
            pyth = pyth.max((sf.g(&t, &t) + sf.g(&nn, &nn) - sf.g(&ph, &ph)).abs());
        }
        cols[1].push(r30);
        cols[2].push(r31);
        cols[3].push(r32);
        cols[4].push(pyth);
    }
    let [c0, c1, c2_, c3, c4] = cols;
    Ok(alloc::vec![
        CheckResult::residual("slant constancy", "cos theta(X) is the same for all X in D and all points", c0, 1e-6),
        CheckResult::residual("slant T squared", "T^2 = -cos^2(theta) (I - sum eta^k (x) xi_k) on D", c1, tol),
        CheckResult::residual("slant T gram", "g(TX,TY) = cos^2(theta) { g(X,Y) - sum eta^k(X) eta^k(Y) }", c2_, tol),
        CheckResult::residual("slant N gram", "g(NX,NY) = sin^2(theta) { g(X,Y) - sum eta^k(X) eta^k(Y) }", c3, tol),
        CheckResult::residual("slant pythagoras", "|TX|^2 + |NX|^2 = |phiX|^2", c4, tol),
    ])
}

#[derive(Debug, Clone)]
pub struct Classification {
    pub checks: Vec<CheckResult>,
    /// Mean slant angle of `D_theta` over the samples.
    pub theta: f64,
    pub gates_pass: bool,
    /// Neither invariant nor anti-invariant.
    pub proper: bool,
}

/// Pseudo-slant gates for `TM = D_perp + D_theta (+ structure)`, measured
/// against the declared spanning fields; the tangency of those fields to the
/// immersion and the mixed totally geodesic defect are reported alongside.
pub fn classify_pseudo_slant(
    imm: &Immersion,
    d_theta: &Distribution,
    d_perp: &Distribution,
    points: &[Vec<f64>],
    tol: f64,
) -> Result<Classification> {
    let mut orth = Vec::new();
    let mut anti = Vec::new();
    let mut spread = Vec::new();
    let mut tangency = Vec::new();
    let mut mixed = Vec::new();
    let mut coss = Vec::new();
    for p in points {
        let geo = imm.geometry(p)?;
        let vt = d_theta.vectors(&geo)?;
        let vp = d_perp.vectors(&geo)?;
        let mut o = 0.0f64;
        for x in &vt {
            for z in &vp {
                o = o.max((geo.g(x, z) / (geo.norm(x) * geo.norm(z))).abs());
            }
        }
        orth.push(o);
        let mut declared = vt.clone();
        declared.extend(vp.iter().cloned());
        declared.extend(geo.xi());
        let tm = SlantFrame::from_geometry(&geo, &declared)?;
        let mut a = 0.0f64;
        for z in &vp {
            a = a.max(tm.cos_angle(z)?);
        }
        anti.push(a);
        let st = SlantFrame::from_geometry(&geo, &vt)?;
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for x in &st.frame {
            let cx = st.cos_angle(x)?;
            coss.push(cx);
            lo = lo.min(cx);
            hi = hi.max(cx);
        }
        spread.push(hi - lo);
        let mut tg = 0.0f64;
        for v in declared.iter() {
            tg = tg.max(geo.norm(&geo.nor(v)) / geo.norm(v));
        }
        tangency.push(tg);
        let sff = geo.second_fundamental_form();
        let mut mx = 0.0f64;
        for x in &vt {
            for z in &vp {
                mx = mx.max(geo.norm(&geo.h(&sff, x, z)));
            }
        }
        mixed.push(mx);
    }
    let mean_cos = coss.iter().sum::<f64>() / coss.len().max(1) as f64;
    let across = coss.iter().fold(0.0f64, |m, c| m.max((c - mean_cos).abs()));
    let theta = libm::acos(mean_cos.min(1.0));
    let tangency_max = tangency.iter().fold(0.0f64, |m, x| m.max(*x));
    let mut checks = alloc::vec![
        CheckResult::residual("distributions orthogonal", "g(D_theta, D_perp) = 0", orth, tol),
        CheckResult::residual("anti-invariant", "phi D_perp is orthogonal to TM", anti, tol),
        CheckResult::residual("slant within point", "cos theta constant over D_theta at each point", spread, 1e-6),
        CheckResult::info("slant across points", "max deviation of cos theta from its mean", across),
        CheckResult::info("slant angle", "theta of D_theta (radians)", theta),
        {
            let mut c = CheckResult::info(
                "declared fields tangent",
                "max |nor(V)|/|V| over declared spanning fields",
                tangency_max,
            );
            c.per_sample = tangency;
            c
        },
        {
            let v = mixed.iter().fold(0.0f64, |m, x| m.max(*x));
            let mut c =
                CheckResult::info("mixed totally geodesic defect", "max |h(X,Z)|, X in D_theta, Z in D_perp", v);
            c.per_sample = mixed;
            c
        },
    ];
    if tangency_max > 1e-8 {
        checks[5].notes.push("declared fields are not tangent to the immersion".to_string());
    }
    let gates_pass = checks[..3].iter().all(|c| c.passed()) && across < 1e-6;
    let proper = mean_cos > 1e-9 && mean_cos < 1.0 - 1e-9;
    Ok(Classification { checks, theta, gates_pass, proper })
}
