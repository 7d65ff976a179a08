//! Pointwise structure checks on a [`FramedStructure`].
//!
//! Tensor arguments run over the coordinate frame: every identity checked
//! here is multilinear, so frame coverage is complete.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::connection::{christoffel, Connection, Curvature};
use super::dense::{basis, dot, inner, mat_mul, mat_vec};
use super::{FramedStructure, StructureAt};
use crate::check::{max_abs, CheckResult};
use crate::error::Result;
use crate::jet::Jet;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Derivative-free identities.
    pub algebraic: f64,
    /// Identities involving the connection or curvature.
    pub curvature: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { algebraic: 1e-9, curvature: 1e-7 }
    }
}

fn identity(n: usize) -> Vec<f64> {
    let mut m = vec![0.0; n * n];
    for i in 0..n {
        m[i * n + i] = 1.0;
    }
    m
}

fn sub_max(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0f64, |m, (x, y)| if m.is_nan() { m } else { m.max((x - y).abs()) })
}

/// Residuals of the f-structure axioms, metric compatibility and the
/// projector identities.
pub fn check_f_structure(f: &FramedStructure, points: &[Vec<f64>], tol: f64) -> Result<Vec<CheckResult>> {
    let n = f.dim();
    let s = f.rank();
    let mut cols: [Vec<f64>; 9] = Default::default();
    for p in points {
        let st = f.at(p)?;
        let g = st.g_values();
        let phi = st.phi_values();
        let xi = st.xi_values();
        let eta = st.eta_values();
        let phi2 = mat_mul(&phi, &phi, n);
        let phi3 = mat_mul(&phi2, &phi, n);
        cols[0].push(phi3.iter().zip(&phi).map(|(a, b)| (a + b).abs()).fold(0.0, f64::max));

        let mut dual = 0.0f64;
        for i in 0..s {
            for j in 0..s {
                let d = if i == j { 1.0 } else { 0.0 };
                dual = dual.max((dot(&eta[j], &xi[i]) - d).abs());
            }
        }
        cols[1].push(dual);

        let mut rhs = identity(n);
        for v in rhs.iter_mut() {
            *v = -*v;
        }
        for k in 0..s {
            for a in 0..n {
                for b in 0..n {
                    rhs[a * n + b] += xi[k][a] * eta[k][b];
                }
            }
        }
        cols[2].push(sub_max(&phi2, &rhs));

        cols[3].push(xi.iter().map(|x| max_abs(&mat_vec(&phi, x, n))).fold(0.0, f64::max));

        let mut eta_phi = 0.0f64;
        for e in &eta {
            for b in 0..n {
                eta_phi = eta_phi.max((0..n).map(|c| e[c] * phi[c * n + b]).sum::<f64>().abs());
            }
        }
        cols[4].push(eta_phi);

        let mut dual_metric = 0.0f64;
        for k in 0..s {
            let lowered = mat_vec(&g, &xi[k], n);
            dual_metric = dual_metric.max(sub_max(&eta[k], &lowered));
        }
        cols[5].push(dual_metric);

        // phi^T g phi - g + sum eta (x) eta
        let mut compat = 0.0f64;
        for a in 0..n {
            for b in 0..n {
                let pa: Vec<f64> = (0..n).map(|c| phi[c * n + a]).collect();
                let pb: Vec<f64> = (0..n).map(|c| phi[c * n + b]).collect();
                let ee: f64 = (0..s).map(|k| eta[k][a] * eta[k][b]).sum();
                compat = compat.max((inner(&g, &pa, &pb, n) - g[a * n + b] + ee).abs());
            }
        }
        cols[6].push(compat);

        let big_phi = mat_mul(&g, &phi, n);
        let mut anti = 0.0f64;
        for a in 0..n {
            for b in 0..n {
                anti = anti.max((big_phi[a * n + b] + big_phi[b * n + a]).abs());
            }
        }
        cols[7].push(anti);

        // P1 = -phi^2, P2 = phi^2 + I
        let p1: Vec<f64> = phi2.iter().map(|x| -x).collect();
        let p2: Vec<f64> = phi2.iter().zip(identity(n)).map(|(x, i)| x + i).collect();
        let sum: Vec<f64> = p1.iter().zip(&p2).map(|(a, b)| a + b).collect();
        let worst = [
            sub_max(&sum, &identity(n)),
            sub_max(&mat_mul(&p1, &p1, n), &p1),
            sub_max(&mat_mul(&p2, &p2, n), &p2),
            max_abs(&mat_mul(&p1, &p2, n)),
            sub_max(&mat_mul(&phi, &p1, n), &phi),
            sub_max(&mat_mul(&p1, &phi, n), &phi),
            max_abs(&mat_mul(&phi, &p2, n)),
            max_abs(&mat_mul(&p2, &phi, n)),
        ];
        cols[8].push(worst.iter().copied().fold(0.0, f64::max));
    }
    let [c0, c1, c2, c3, c4, c5, c6, c7, c8] = cols;
    Ok(vec![
        CheckResult::residual("f-structure", "phi^3 + phi = 0", c0, tol),
        CheckResult::residual("duality", "eta^j(xi_i) = delta_i^j", c1, tol),
        CheckResult::residual("phi squared", "phi^2 = -I + sum eta^i (x) xi_i", c2, tol),
        CheckResult::residual("phi kills xi", "phi xi_i = 0", c3, tol),
        CheckResult::residual("eta kills phi", "eta^i o phi = 0", c4, tol),
        CheckResult::residual("metric duality", "eta^i(X) = g(X, xi_i)", c5, tol),
        CheckResult::residual("compatibility", "g(phiX, phiY) = g(X,Y) - sum eta^i(X) eta^i(Y)", c6, tol),
        CheckResult::residual("fundamental form", "Phi(X,Y) = g(X, phiY) is skew", c7, tol),
        CheckResult::residual("projectors", "P1 = -phi^2, P2 = phi^2 + I complementary projectors", c8, tol),
    ])
}

fn apply_jet(phi: &[Jet], v: &[Jet], n: usize) -> Vec<Jet> {
    (0..n)
        .map(|k| {
            let mut acc = Jet::constant(0.0);
            for j in 0..n {
                acc = acc + &phi[k * n + j] * &v[j];
            }
            acc
        })
        .collect()
}

fn bracket(u: &[Jet], v: &[Jet], n: usize) -> Vec<f64> {
    (0..n).map(|k| (0..n).map(|i| u[i].value() * v[k].d(i) - v[i].value() * u[k].d(i)).sum()).collect()
}

fn constant_field(x: &[f64]) -> Vec<Jet> {
    x.iter().map(|&c| Jet::constant(c)).collect()
}

fn nijenhuis_at(st: &StructureAt, x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = st.n;
    let phi = st.phi_values();
    let (xf, yf) = (constant_field(x), constant_field(y));
    let (px, py) = (apply_jet(&st.phi, &xf, n), apply_jet(&st.phi, &yf, n));
    let xy = bracket(&xf, &yf, n);
    let t1 = mat_vec(&phi, &mat_vec(&phi, &xy, n), n);
    let t2 = bracket(&px, &py, n);
    let t3 = mat_vec(&phi, &bracket(&px, &yf, n), n);
    let t4 = mat_vec(&phi, &bracket(&xf, &py, n), n);
    (0..n).map(|k| t1[k] + t2[k] - t3[k] - t4[k]).collect()
}

/// `d eta(X, Y) = 1/2 (X eta(Y) - Y eta(X) - eta([X,Y]))` for constant `X`, `Y`.
fn d_eta(eta: &[Jet], x: &[f64], y: &[f64]) -> f64 {
    let n = x.len();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            s += x[i] * y[j] * (eta[j].d(i) - eta[i].d(j));
        }
    }
    0.5 * s
}

/// The Nijenhuis torsion of `phi` on constant-coefficient fields at `p`.
pub fn nijenhuis(f: &FramedStructure, x: &[f64], y: &[f64], p: &[f64]) -> Result<Vec<f64>> {
    Ok(nijenhuis_at(&f.at(p)?, x, y))
}

/// Normality: `N_phi + 2 sum d eta^i (x) xi_i = 0`.
pub fn check_normal(f: &FramedStructure, points: &[Vec<f64>], tol: f64) -> Result<CheckResult> {
    let n = f.dim();
    let mut col = Vec::with_capacity(points.len());
    for p in points {
        let st = f.at(p)?;
        let xi = st.xi_values();
        let mut worst = 0.0f64;
        for a in 0..n {
            for b in a + 1..n {
                let (x, y) = (basis(a, n), basis(b, n));
                let mut r = nijenhuis_at(&st, &x, &y);
                for (k, e) in st.eta.iter().enumerate() {
                    let c = 2.0 * d_eta(e, &x, &y);
                    for l in 0..n {
                        r[l] += c * xi[k][l];
                    }
                }
                worst = worst.max(max_abs(&r));
            }
        }
        col.push(worst);
    }
    Ok(CheckResult::residual("normality", "N_phi + 2 sum d eta^i (x) xi_i = 0", col, tol))
}

/// `dPhi = 2 (sum eta^k) ^ Phi`, with `dPhi_ijk = d_i Phi_jk - d_j Phi_ik + d_k Phi_ij`
/// and the matching alternation for the wedge product.
pub fn check_d_fundamental_form(f: &FramedStructure, points: &[Vec<f64>], tol: f64) -> Result<CheckResult> {
    let n = f.dim();
    let mut col = Vec::with_capacity(points.len());
    for p in points {
        let st = f.at(p)?;
        // Phi_ab = g_ac phi^c_b as jets
        let mut big = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                let mut acc = Jet::constant(0.0);
                for c in 0..n {
                    acc = acc + &st.g[a * n + c] * &st.phi[c * n + b];
                }
                big.push(acc);
            }
        }
        let sigma: Vec<f64> = (0..n).map(|a| st.eta.iter().map(|e| e[a].value()).sum()).collect();
        let ph = |a: usize, b: usize| big[a * n + b].value();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let d = big[j * n + k].d(i) - big[i * n + k].d(j) + big[i * n + j].d(k);
                    let w = sigma[i] * ph(j, k) - sigma[j] * ph(i, k) + sigma[k] * ph(i, j);
                    worst = worst.max((d - 2.0 * w).abs());
                }
            }
        }
        col.push(worst);
    }
    Ok(CheckResult::residual("d fundamental form", "dPhi = 2 (sum eta^k) ^ Phi", col, tol))
}

/// `(nabla_a phi)^k_b`, stored `[a][k][b]`.
pub(crate) fn nabla_phi(st: &StructureAt, conn: &Connection) -> Vec<f64> {
    let n = st.n;
    let phi = st.phi_values();
    let mut out = vec![0.0; n * n * n];
    for a in 0..n {
        for k in 0..n {
            for b in 0..n {
                let mut s = st.phi[k * n + b].d(a);
                for c in 0..n {
                    s += conn.get(k, a, c) * phi[c * n + b] - phi[k * n + c] * conn.get(c, a, b);
                }
                out[(a * n + k) * n + b] = s;
            }
        }
    }
    out
}

struct KenmotsuResiduals {
    kenmotsu: f64,
    nearly: f64,
}

fn kenmotsu_at(f: &FramedStructure, p: &[f64]) -> Result<KenmotsuResiduals> {
    let n = f.dim();
    let st = f.at(p)?;
    let conn = christoffel(&st.g, n)?;
    let np = nabla_phi(&st, &conn);
    let g = st.g_values();
    let phi = st.phi_values();
    let xi = st.xi_values();
    let eta = st.eta_values();
    let xi_sum: Vec<f64> = (0..n).map(|l| xi.iter().map(|x| x[l]).sum()).collect();
    let eta_sum: Vec<f64> = (0..n).map(|l| eta.iter().map(|e| e[l]).sum()).collect();
    let col = |m: &[f64], j: usize| -> Vec<f64> { (0..n).map(|k| m[k * n + j]).collect() };
    let mut out = KenmotsuResiduals { kenmotsu: 0.0, nearly: 0.0 };
    for a in 0..n {
        let phi_a = col(&phi, a);
        for b in 0..n {
            let phi_b = col(&phi, b);
            let g_phia_b: f64 = (0..n).map(|c| phi_a[c] * g[c * n + b]).sum();
            for k in 0..n {
                let lhs = np[(a * n + k) * n + b];
                let rhs = g_phia_b * xi_sum[k] - eta_sum[b] * phi_a[k];
                out.kenmotsu = out.kenmotsu.max((lhs - rhs).abs());
                let sym = lhs + np[(b * n + k) * n + a];
                let rhs11 = -(eta_sum[a] * phi_b[k] + eta_sum[b] * phi_a[k]);
                out.nearly = out.nearly.max((sym - rhs11).abs());
            }
        }
    }
    Ok(out)
}

const KENMOTSU_REF: &str = "(nabla_X phi)Y = sum_k { g(phiX,Y) xi_k - eta^k(Y) phiX }";
const NEARLY_REF: &str = "(nabla_X phi)Y + (nabla_Y phi)X = -sum_k { eta^k(X) phiY + eta^k(Y) phiX }";

/// Kenmotsu condition, its symmetrization, and whether the implication
/// Kenmotsu => nearly Kenmotsu is observed (informational, 1 = consistent).
pub fn check_kenmotsu(f: &FramedStructure, points: &[Vec<f64>], tol: f64) -> Result<Vec<CheckResult>> {
    let mut k = Vec::new();
    let mut nk = Vec::new();
    for p in points {
        let r = kenmotsu_at(f, p)?;
        k.push(r.kenmotsu);
        nk.push(r.nearly);
    }
    let kr = CheckResult::residual("kenmotsu", KENMOTSU_REF, k, tol);
    let nr = CheckResult::residual("nearly kenmotsu", NEARLY_REF, nk, tol);
    let consistent = !kr.passed() || nr.passed();
    let flag = CheckResult::info(
        "kenmotsu implies nearly kenmotsu",
        "Kenmotsu => nearly Kenmotsu",
        if consistent { 1.0 } else { 0.0 },
    );
    Ok(vec![kr, nr, flag])
}

pub fn check_nearly_kenmotsu(f: &FramedStructure, points: &[Vec<f64>], tol: f64) -> Result<CheckResult> {
    let mut nk = Vec::new();
    for p in points {
        nk.push(kenmotsu_at(f, p)?.nearly);
    }
    Ok(CheckResult::residual("nearly kenmotsu", NEARLY_REF, nk, tol))
}

/// The curvature and connection identities of nearly Kenmotsu f-manifolds,
/// plus curvature sanity (antisymmetry and first Bianchi).
pub fn check_identities(f: &FramedStructure, points: &[Vec<f64>], tol: f64) -> Result<Vec<CheckResult>> {
    let n = f.dim();
    let s = f.rank();
    let half = f.half_dim() as f64;
    let mut cols: [Vec<f64>; 8] = Default::default();
    for p in points {
        let st = f.at(p)?;
        let conn = christoffel(&st.g, n)?;
        let curv = conn.curvature();
        let g = st.g_values();
        let phi = st.phi_values();
        let phi2 = mat_mul(&phi, &phi, n);
        let xi = st.xi_values();
        let eta = st.eta_values();
        let eta_sum: Vec<f64> = (0..n).map(|l| eta.iter().map(|e| e[l]).sum()).collect();
        let xi_sum: Vec<f64> = (0..n).map(|l| xi.iter().map(|x| x[l]).sum()).collect();
        let ee = |a: usize, b: usize| -> f64 { eta.iter().map(|e| e[a] * e[b]).sum() };

        // nabla_X xi_i = -phi^2 X
        let mut r000 = 0.0f64;
        for i in 0..s {
            for a in 0..n {
                let lhs = conn.nabla(&basis(a, n), &st.xi[i]);
                for k in 0..n {
                    r000 = r000.max((lhs[k] + phi2[k * n + a]).abs());
                }
            }
        }
        cols[0].push(r000);

        // R(xi_i, X)Y = sum_k { -g(X,Y) xi_k + eta^k(Y) X }
        let mut r12 = 0.0f64;
        for i in 0..s {
            for a in 0..n {
                for b in 0..n {
                    let lhs = curv.apply(&xi[i], &basis(a, n), &basis(b, n));
                    for k in 0..n {
                        let ea = if k == a { 1.0 } else { 0.0 };
                        let rhs = -g[a * n + b] * xi_sum[k] + eta_sum[b] * ea;
                        r12 = r12.max((lhs[k] - rhs).abs());
                    }
                }
            }
        }
        cols[1].push(r12);

        // R(X,Y) xi_i = sum_k { eta^k(X) Y - eta^k(Y) X }
        let mut r13 = 0.0f64;
        for i in 0..s {
            for a in 0..n {
                for b in 0..n {
                    let lhs = curv.apply(&basis(a, n), &basis(b, n), &xi[i]);
                    for k in 0..n {
                        let (ya, yb) = (if k == b { 1.0 } else { 0.0 }, if k == a { 1.0 } else { 0.0 });
                        let rhs = eta_sum[a] * ya - eta_sum[b] * yb;
                        r13 = r13.max((lhs[k] - rhs).abs());
                    }
                }
            }
        }
        cols[2].push(r13);

        // S(phiX, phiY) = S(X,Y) + (2n+s-1) sum eta^k(X) eta^k(Y)
        let ric = curv.ricci();
        let phi_t_ric_phi = {
            let rp = mat_mul(&ric, &phi, n);
            let mut m = vec![0.0; n * n];
            for a in 0..n {
                for b in 0..n {
                    m[a * n + b] = (0..n).map(|c| phi[c * n + a] * rp[c * n + b]).sum();
                }
            }
            m
        };
        let c14 = 2.0 * half + s as f64 - 1.0;
        let mut r14 = 0.0f64;
        for a in 0..n {
            for b in 0..n {
                r14 = r14.max((phi_t_ric_phi[a * n + b] - ric[a * n + b] - c14 * ee(a, b)).abs());
            }
        }
        cols[3].push(r14);

        // (nabla_X eta^i)Y = g(X,Y) - sum eta^k(X) eta^k(Y)
        let mut r15 = 0.0f64;
        for e in &st.eta {
            for a in 0..n {
                for b in 0..n {
                    let ev: f64 = e[b].d(a) - (0..n).map(|c| conn.get(c, a, b) * e[c].value()).sum::<f64>();
                    r15 = r15.max((ev - g[a * n + b] + ee(a, b)).abs());
                }
            }
        }
        cols[4].push(r15);

        // sum eta^k(R(X,Y)Z) = sum { g(X,Z) eta^k(Y) - g(Y,Z) eta^k(X) }
        let mut r16 = 0.0f64;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let lhs: f64 = (0..n).map(|l| eta_sum[l] * curv.get(l, a, b, c)).sum();
                    let rhs = g[a * n + c] * eta_sum[b] - g[b * n + c] * eta_sum[a];
                    r16 = r16.max((lhs - rhs).abs());
                }
            }
        }
        cols[5].push(r16);

        cols[6].push(antisymmetry_defect(&curv));
        cols[7].push(curv.bianchi_defect());
    }
    let [c0, c1, c2, c3, c4, c5, c6, c7] = cols;
    let n14 = format!("S(phiX, phiY) = S(X,Y) + (2n+s-1) sum eta^k(X) eta^k(Y), n = {}", f.half_dim());
    Ok(vec![
        CheckResult::residual("structure field derivative", "nabla_X xi_i = -phi^2 X", c0, tol),
        CheckResult::residual("curvature xi-X-Y", "R(xi_i, X)Y = sum_k { -g(X,Y) xi_k + eta^k(Y) X }", c1, tol),
        CheckResult::residual("curvature X-Y-xi", "R(X,Y) xi_i = sum_k { eta^k(X) Y - eta^k(Y) X }", c2, tol),
        CheckResult::residual("ricci", &n14, c3, tol),
        CheckResult::residual(
            "structure form derivative",
            "(nabla_X eta^i)Y = g(X,Y) - sum eta^k(X) eta^k(Y)",
            c4,
            tol,
        ),
        CheckResult::residual(
            "curvature eta projection",
            "sum eta^k(R(X,Y)Z) = sum { g(X,Z) eta^k(Y) - g(Y,Z) eta^k(X) }",
            c5,
            tol,
        ),
        CheckResult::residual("curvature antisymmetry", "R(X,Y) = -R(Y,X)", c6, 1e-8),
        CheckResult::residual("first bianchi", "R(X,Y)Z + R(Y,Z)X + R(Z,X)Y = 0", c7, 1e-8),
    ])
}

fn antisymmetry_defect(c: &Curvature) -> f64 {
    let n = c.n;
    let mut worst = 0.0f64;
    for l in 0..n {
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    worst = worst.max((c.get(l, i, j, k) + c.get(l, j, i, k)).abs());
                }
            }
        }
    }
    worst
}
