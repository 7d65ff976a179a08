//! Geometry of immersed submanifolds.
//!
//! An [`Immersion`] maps a domain chart into the ambient chart. At a domain
//! point every quantity is a jet over the domain coordinates: the immersion
//! itself, the ambient tensors composed with it, the Jacobian columns and the
//! orthonormal tangent and normal frames built from them. Differentiating
//! those jets gives the ambient covariant derivative along the immersion,
//!
//! ```text
//! (D_w V)^k = w^b d_b V^k + Gamma^k_ij(chi(p)) (J w)^i V^j,
//! ```
//!
//! from which the second fundamental form, shape operators and the
//! covariant derivatives of the tangent/normal parts of `phi` follow.

mod examples;
mod identities;
mod slant;

use alloc::format;
use alloc::string::ToString;
use alloc::vec::Vec;

use crate::ambient::dense;
use crate::ambient::{christoffel_symbols, Chart, Connection, FramedStructure, StructureAt};
use crate::error::{Error, Result};
use crate::expr::{coordinate_jets, parse, BoundExpr, Expr};
use crate::jet::Jet;
use crate::linalg::{axpy, gram_schmidt_with, inner, BilinearForm, DEGENERACY_TOL};

pub use examples::{example_2, example_2_ambient, example_3, PaperExample};
pub use identities::{check_submanifold_identities, submanifold_point_checks};
pub use slant::{
    check_slant_relations, classify_pseudo_slant, slant_angle, wirtinger_angle, Classification, Distribution, Role,
    SlantFrame, Span,
};

/// Candidates whose component off the span built so far is below this
/// fraction of their length are skipped during normal-frame completion.
pub const NORMAL_SKIP_TOL: f64 = 1e-3;

#[derive(Debug, Clone)]
pub struct Immersion {
    pub domain: Chart,
    pub ambient: FramedStructure,
    map: Vec<BoundExpr>,
}

impl Immersion {
    pub fn new(domain: Chart, ambient: FramedStructure, map: Vec<Expr>) -> Result<Immersion> {
        if map.len() != ambient.dim() {
            return Err(Error::Dimension { what: "immersion components", expected: ambient.dim(), found: map.len() });
        }
        if domain.dim() > ambient.dim() {
            return Err(Error::InvalidParameter("domain dimension exceeds ambient dimension".into()));
        }
        let names = domain.names();
        let map = map.iter().map(|e| e.bind(&names)).collect::<Result<_>>()?;
        Ok(Immersion { domain, ambient, map })
    }

    pub fn from_strings(domain: Chart, ambient: FramedStructure, map: &[&str]) -> Result<Immersion> {
        let exprs = map.iter().map(|s| parse(s)).collect::<Result<Vec<_>>>()?;
        Immersion::new(domain, ambient, exprs)
    }

    pub fn dim(&self) -> usize {
        self.domain.dim()
    }

    pub fn components(&self) -> Vec<&Expr> {
        self.map.iter().map(|b| b.source()).collect()
    }

    pub fn chi(&self, p: &[f64]) -> Result<Vec<f64>> {
        self.map.iter().map(|e| e.eval(p)).collect()
    }

    fn chi_jets(&self, p: &[f64]) -> Result<Vec<Jet>> {
        if p.len() != self.dim() {
            return Err(Error::Dimension { what: "domain point", expected: self.dim(), found: p.len() });
        }
        let u = coordinate_jets(p);
        self.map.iter().map(|e| e.eval_jet(&u)).collect()
    }

    /// Jacobian columns `d_a chi` as ambient vectors.
    pub fn jacobian(&self, p: &[f64]) -> Result<Vec<Vec<f64>>> {
        let chi = self.chi_jets(p)?;
        Ok((0..self.dim()).map(|a| chi.iter().map(|c| c.d(a)).collect()).collect())
    }

    pub fn geometry(&self, p: &[f64]) -> Result<PointGeometry> {
        PointGeometry::new(self, p)
    }
}

/// The induced metric `G_ab = g(d_a chi, d_b chi)` at a domain point.
pub fn induced_metric(imm: &Immersion, p: &[f64]) -> Result<BilinearForm> {
    let chi = imm.chi_jets(p)?;
    let vals: Vec<f64> = chi.iter().map(Jet::value).collect();
    let g = imm.ambient.at(&vals)?.g_values();
    let n = imm.ambient.dim();
    let jac = imm.jacobian(p)?;
    let m = imm.dim();
    let mut data = Vec::with_capacity(m * m);
    for a in 0..m {
        for b in 0..m {
            data.push(dense::inner(&g, &jac[a], &jac[b], n));
        }
    }
    let form = BilinearForm::new(m, data)?;
    // Pivots are compared with the diagonal so rounding cannot mask a rank drop.
    let l = form.cholesky().map_err(|_| Error::Degenerate { what: "immersion Jacobian", index: 0 })?;
    for a in 0..m {
        if l[a * m + a] * l[a * m + a] < DEGENERACY_TOL * form.get(a, a) {
            return Err(Error::Degenerate { what: "immersion Jacobian", index: a });
        }
    }
    Ok(form)
}

/// Everything about the submanifold at one domain point. Vector-valued
/// results are ambient coordinate vectors.
#[derive(Debug, Clone)]
pub struct PointGeometry {
    pub m: usize,
    pub n: usize,
    pub point: Vec<f64>,
    pub chi: Vec<f64>,
    /// Jacobian columns.
    pub jac: Vec<Vec<f64>>,
    /// Ambient tensors along the immersion, as jets over the domain.
    pub structure: StructureAt,
    /// Ambient Christoffel symbols at `chi(p)`.
    pub conn: Connection,
    /// Orthonormal tangent frame in domain coordinates.
    pub tangent_domain: Vec<Vec<Jet>>,
    pub tangent: Vec<Vec<Jet>>,
    pub normal: Vec<Vec<Jet>>,
    chi_jets: Vec<Jet>,
    g: Vec<f64>,
    phi: Vec<f64>,
}

fn constant_jets(v: &[f64]) -> Vec<Jet> {
    v.iter().map(|&c| Jet::constant(c)).collect()
}

fn values(v: &[Jet]) -> Vec<f64> {
    v.iter().map(Jet::value).collect()
}

impl PointGeometry {
    fn new(imm: &Immersion, p: &[f64]) -> Result<PointGeometry> {
        let (m, n) = (imm.dim(), imm.ambient.dim());
        let chi_jets = imm.chi_jets(p)?;
        let chi = values(&chi_jets);
        let structure = imm.ambient.eval_with(&chi_jets)?;
        let at_chi = imm.ambient.at(&chi)?;
        let conn = christoffel_symbols(&at_chi.g, n)?;

        // Jacobian columns as first-order jets over the domain.
        let jac_jets: Vec<Vec<Jet>> = (0..m)
            .map(|a| chi_jets.iter().map(|c| Jet::first_order(c.d(a), (0..m).map(|b| c.dd(a, b)).collect())).collect())
            .collect();
        let jac: Vec<Vec<f64>> = jac_jets.iter().map(|c| values(c)).collect();

        let gj = &structure.g;
        let mut big_g = Vec::with_capacity(m * m);
        for a in 0..m {
            for b in 0..m {
                big_g.push(inner(gj, &jac_jets[a], &jac_jets[b]));
            }
        }
        let domain_basis: Vec<Vec<Jet>> = (0..m).map(|a| constant_jets(&dense::basis(a, m))).collect();
        let tangent_domain = gram_schmidt_with(&domain_basis, &big_g).map_err(|e| match e {
            Error::Degenerate { index, .. } => Error::Degenerate { what: "immersion Jacobian", index },
            other => other,
        })?;
        let tangent: Vec<Vec<Jet>> = tangent_domain
            .iter()
            .map(|w| {
                let mut acc = constant_jets(&alloc::vec![0.0; n]);
                for b in 0..m {
                    acc = axpy(&acc, &w[b], &jac_jets[b]);
                }
                acc
            })
            .collect();

        let mut normal: Vec<Vec<Jet>> = Vec::new();
        for k in 0..n {
            if normal.len() + m == n {
                break;
            }
            let cand = constant_jets(&dense::basis(k, n));
            let len = libm::sqrt(inner(gj, &cand, &cand).value());
            let mut w = cand;
            for _pass in 0..2 {
                for f in tangent.iter().chain(normal.iter()) {
                    let c = inner(gj, &w, f);
                    w = axpy(&w, &(-c), f);
                }
            }
            let nsq = inner(gj, &w, &w);
            if libm::sqrt(nsq.value().max(0.0)) < NORMAL_SKIP_TOL * len {
                continue;
            }
            let inv = Jet::constant(1.0) / nsq.sqrt();
            normal.push(w.iter().map(|x| x * &inv).collect());
        }
        if normal.len() + m != n {
            return Err(Error::Degenerate { what: "normal frame", index: normal.len() });
        }

        let g = at_chi.g_values();
        let phi = at_chi.phi_values();
        Ok(PointGeometry {
            m,
            n,
            point: p.to_vec(),
            chi,
            jac,
            structure,
            conn,
            tangent_domain,
            tangent,
            normal,
            chi_jets,
            g,
            phi,
        })
    }

    /// Ambient metric values at `chi(p)`, row-major.
    pub fn metric(&self) -> &[f64] {
        &self.g
    }

    pub fn g(&self, v: &[f64], w: &[f64]) -> f64 {
        dense::inner(&self.g, v, w, self.n)
    }

    pub fn norm(&self, v: &[f64]) -> f64 {
        libm::sqrt(self.g(v, v).max(0.0))
    }

    pub fn tangent_frame(&self) -> Vec<Vec<f64>> {
        self.tangent.iter().map(|v| values(v)).collect()
    }

    pub fn normal_frame(&self) -> Vec<Vec<f64>> {
        self.normal.iter().map(|v| values(v)).collect()
    }

    pub fn xi(&self) -> Vec<Vec<f64>> {
        self.structure.xi_values()
    }

    pub fn eta(&self) -> Vec<Vec<f64>> {
        self.structure.eta_values()
    }

    /// Coefficients of `v` against the tangent frame.
    pub fn tangent_coeffs(&self, v: &[f64]) -> Vec<f64> {
        self.tangent.iter().map(|e| self.g(v, &values(e))).collect()
    }

    pub fn normal_coeffs(&self, v: &[f64]) -> Vec<f64> {
        self.normal.iter().map(|e| self.g(v, &values(e))).collect()
    }

    pub fn tan(&self, v: &[f64]) -> Vec<f64> {
        let mut out = alloc::vec![0.0; self.n];
        for (c, e) in self.tangent_coeffs(v).iter().zip(&self.tangent) {
            for k in 0..self.n {
                out[k] += c * e[k].value();
            }
        }
        out
    }

    pub fn nor(&self, v: &[f64]) -> Vec<f64> {
        let t = self.tan(v);
        v.iter().zip(&t).map(|(a, b)| a - b).collect()
    }

    pub fn phi(&self, v: &[f64]) -> Vec<f64> {
        dense::mat_vec(&self.phi, v, self.n)
    }

    /// `T X = tan(phi X)`.
    pub fn big_t(&self, v: &[f64]) -> Vec<f64> {
        self.tan(&self.phi(v))
    }

    /// `N X = nor(phi X)`.
    pub fn big_n(&self, v: &[f64]) -> Vec<f64> {
        self.nor(&self.phi(v))
    }

    /// Domain direction `w` with `J w = v` for a tangent vector `v`.
    pub fn domain_direction(&self, v: &[f64]) -> Vec<f64> {
        let mut w = alloc::vec![0.0; self.m];
        for (c, e) in self.tangent_coeffs(v).iter().zip(&self.tangent_domain) {
            for b in 0..self.m {
                w[b] += c * e[b].value();
            }
        }
        w
    }

    /// Ambient covariant derivative of the jet field `v` along the tangent vector `x`.
    pub fn derivative(&self, x: &[f64], v: &[Jet]) -> Vec<f64> {
        let w = self.domain_direction(x);
        let jw: Vec<f64> = (0..self.n).map(|k| (0..self.m).map(|b| self.jac[b][k] * w[b]).sum()).collect();
        let gam = self.conn.apply(&jw, &values(v));
        (0..self.n).map(|k| gam[k] + (0..self.m).map(|b| w[b] * v[k].d(b)).sum::<f64>()).collect()
    }

    pub fn g_jet(&self, v: &[Jet], w: &[Jet]) -> Jet {
        inner(&self.structure.g, v, w)
    }

    pub fn phi_jet(&self, v: &[Jet]) -> Vec<Jet> {
        let n = self.n;
        (0..n)
            .map(|k| {
                let mut acc = Jet::constant(0.0);
                for j in 0..n {
                    acc = acc + &self.structure.phi[k * n + j] * &v[j];
                }
                acc
            })
            .collect()
    }

    pub fn tan_jet(&self, v: &[Jet]) -> Vec<Jet> {
        let mut out = constant_jets(&alloc::vec![0.0; self.n]);
        for e in &self.tangent {
            let c = self.g_jet(v, e);
            out = axpy(&out, &c, e);
        }
        out
    }

    pub fn nor_jet(&self, v: &[Jet]) -> Vec<Jet> {
        let t = self.tan_jet(v);
        v.iter().zip(&t).map(|(a, b)| a - b).collect()
    }

    /// `h(E_a, E_b)` for the tangent frame, by differentiating the frame fields.
    pub fn sff_frame(&self) -> Vec<Vec<Vec<f64>>> {
        let frame = self.tangent_frame();
        (0..self.m)
            .map(|a| (0..self.m).map(|b| self.nor(&self.derivative(&frame[a], &self.tangent[b]))).collect())
            .collect()
    }

    /// `h(E_a, E_b)` from `nor(d_i d_j chi + Gamma(d_i chi, d_j chi))`
    /// contracted with the frame coefficients; independent of frame derivatives.
    pub fn sff_frame_from_hessian(&self) -> Vec<Vec<Vec<f64>>> {
        let (m, n) = (self.m, self.n);
        let mut hij = Vec::with_capacity(m * m);
        for i in 0..m {
            for j in 0..m {
                let gam = self.conn.apply(&self.jac[i], &self.jac[j]);
                let v: Vec<f64> = (0..n).map(|k| self.chi_jets[k].dd(i, j) + gam[k]).collect();
                hij.push(self.nor(&v));
            }
        }
        let ed: Vec<Vec<f64>> = self.tangent_domain.iter().map(|e| values(e)).collect();
        (0..m)
            .map(|a| {
                (0..m)
                    .map(|b| {
                        let mut out = alloc::vec![0.0; n];
                        for i in 0..m {
                            for j in 0..m {
                                let c = ed[a][i] * ed[b][j];
                                for k in 0..n {
                                    out[k] += c * hij[i * m + j][k];
                                }
                            }
                        }
                        out
                    })
                    .collect()
            })
            .collect()
    }

    pub fn second_fundamental_form(&self) -> SecondFundamentalForm {
        let h = self.sff_frame();
        let mut mean = alloc::vec![0.0; self.n];
        for (a, row) in h.iter().enumerate() {
            for k in 0..self.n {
                mean[k] += row[a][k] / self.m as f64;
            }
        }
        SecondFundamentalForm { m: self.m, h, mean, g: self.g.clone() }
    }

    /// `h(x, y)` for tangent vectors, bilinear in the frame coefficients.
    pub fn h(&self, sff: &SecondFundamentalForm, x: &[f64], y: &[f64]) -> Vec<f64> {
        let (cx, cy) = (self.tangent_coeffs(x), self.tangent_coeffs(y));
        let mut out = alloc::vec![0.0; self.n];
        for a in 0..self.m {
            for b in 0..self.m {
                let c = cx[a] * cy[b];
                if c == 0.0 {
                    continue;
                }
                for k in 0..self.n {
                    out[k] += c * sff.h[a][b][k];
                }
            }
        }
        out
    }

    /// Shape operator `A_V x = -tan(D_x V)` for a normal jet field `V`.
    pub fn shape(&self, v: &[Jet], x: &[f64]) -> Vec<f64> {
        self.tan(&self.derivative(x, v)).iter().map(|c| -c).collect()
    }

    /// The normal field `sum_r c_r N_r`.
    pub fn normal_field(&self, coeffs: &[f64]) -> Vec<Jet> {
        let mut out = constant_jets(&alloc::vec![0.0; self.n]);
        for (c, nv) in coeffs.iter().zip(&self.normal) {
            out = axpy(&out, &Jet::constant(*c), nv);
        }
        out
    }

    /// Shape operator matrix against the tangent frame, with the duality
    /// residual `max |g(A_V E_a, E_b) - g(h(E_a,E_b), V)|`.
    pub fn shape_operator(&self, sff: &SecondFundamentalForm, v: &[f64]) -> Result<(Vec<f64>, f64)> {
        let scale = self.norm(v).max(1.0);
        if self.norm(&self.tan(v)) > 1e-8 * scale {
            return Err(Error::Contract("shape operator needs a normal vector".to_string()));
        }
        let field = self.normal_field(&self.normal_coeffs(v));
        let frame = self.tangent_frame();
        let mut mat = alloc::vec![0.0; self.m * self.m];
        let mut dual = 0.0f64;
        for a in 0..self.m {
            let av = self.shape(&field, &frame[a]);
            for b in 0..self.m {
                let lhs = self.g(&av, &frame[b]);
                mat[b * self.m + a] = lhs;
                dual = dual.max((lhs - self.g(&sff.h[a][b], v)).abs());
            }
        }
        Ok((mat, dual))
    }

    /// Induced Levi-Civita derivative `nabla_{E_a} E_b`, pushed forward,
    /// computed from the induced metric alone.
    pub fn induced_derivative(&self, a: usize, b: usize) -> Result<Vec<f64>> {
        let m = self.m;
        let jac_jets: Vec<Vec<Jet>> = (0..m)
            .map(|i| {
                self.chi_jets.iter().map(|c| Jet::first_order(c.d(i), (0..m).map(|j| c.dd(i, j)).collect())).collect()
            })
            .collect();
        let mut big_g = Vec::with_capacity(m * m);
        for i in 0..m {
            for j in 0..m {
                big_g.push(inner(&self.structure.g, &jac_jets[i], &jac_jets[j]));
            }
        }
        let gam = christoffel_symbols(&big_g, m)?;
        let w = values(&self.tangent_domain[a]);
        let y = &self.tangent_domain[b];
        let gy = gam.apply(&w, &values(y));
        let dom: Vec<f64> = (0..m).map(|c| gy[c] + (0..m).map(|i| w[i] * y[c].d(i)).sum::<f64>()).collect();
        Ok((0..self.n).map(|k| (0..m).map(|i| self.jac[i][k] * dom[i]).sum()).collect())
    }
}

#[derive(Debug, Clone)]
pub struct SecondFundamentalForm {
    pub m: usize,
    /// `h[a][b]` = `h(E_a, E_b)` as ambient vectors.
    pub h: Vec<Vec<Vec<f64>>>,
    /// Mean curvature vector `(1/m) trace h`.
    pub mean: Vec<f64>,
    g: Vec<f64>,
}

impl SecondFundamentalForm {
    fn gg(&self, v: &[f64], w: &[f64]) -> f64 {
        dense::inner(&self.g, v, w, v.len())
    }

    /// `sum_ab g(h(E_a,E_b), h(E_a,E_b))`.
    pub fn norm_squared(&self) -> f64 {
        let mut s = 0.0;
        for row in &self.h {
            for v in row {
                s += self.gg(v, v);
            }
        }
        s
    }

    /// `max_ab |h(E_a,E_b) - delta_ab H|`.
    pub fn umbilicity_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for (a, row) in self.h.iter().enumerate() {
            for (b, v) in row.iter().enumerate() {
                let d: Vec<f64> = v.iter().zip(&self.mean).map(|(x, hm)| if a == b { x - hm } else { *x }).collect();
                worst = worst.max(libm::sqrt(self.gg(&d, &d).max(0.0)));
            }
        }
        worst
    }

    pub fn symmetry_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for a in 0..self.m {
            for b in 0..self.m {
                let d: Vec<f64> = self.h[a][b].iter().zip(&self.h[b][a]).map(|(x, y)| x - y).collect();
                worst = worst.max(libm::sqrt(self.gg(&d, &d).max(0.0)));
            }
        }
        worst
    }
}

pub fn h_norm_squared(sff: &SecondFundamentalForm) -> f64 {
    sff.norm_squared()
}

pub fn umbilicity_defect(sff: &SecondFundamentalForm) -> f64 {
    sff.umbilicity_defect()
}

/// A Euclidean ambient with zero `phi` and no structure fields.
pub fn euclidean(n: usize) -> FramedStructure {
    let names: Vec<alloc::string::String> = (1..=n).map(|i| format!("x{i}")).collect();
    let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    let chart = Chart::new("euclidean", &refs, &alloc::vec![(-1.0, 1.0); n]).expect("valid chart");
    let metric = (0..n).map(|i| (0..n).map(|j| Expr::Const(if i == j { 1.0 } else { 0.0 })).collect()).collect();
    let phi = (0..n).map(|_| (0..n).map(|_| Expr::Const(0.0)).collect()).collect();
    FramedStructure::new(chart, metric, phi, Vec::new(), Vec::new()).expect("valid structure")
}
