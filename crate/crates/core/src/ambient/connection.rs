//! Levi-Civita connection and curvature from metric jets.
//!
//! Curvature convention: `R(X,Y) = [nabla_X, nabla_Y] - nabla_[X,Y]`, with
//! components `R(d_i, d_j) d_k = R^l_ijk d_l`, so that round spheres have
//! positive sectional curvature.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::linalg::BilinearForm;

/// Christoffel symbols `gamma[k][i][j] = Gamma^k_ij` at a point, optionally
/// (empty when not computed) with their first derivatives `dgamma[m][k][i][j] = d_m Gamma^k_ij`.
#[derive(Debug, Clone)]
pub struct Connection {
    pub n: usize,
    pub gamma: Vec<f64>,
    pub dgamma: Vec<f64>,
}

/// Christoffel symbols and their derivatives from the metric jets taken in
/// the chart coordinates (jet width equal to the dimension).
pub fn christoffel(g: &[Jet], n: usize) -> Result<Connection> {
    connection(g, n, true)
}

/// Christoffel symbols only; needs just first derivatives of the metric jets.
pub fn christoffel_symbols(g: &[Jet], n: usize) -> Result<Connection> {
    connection(g, n, false)
}

fn connection(g: &[Jet], n: usize, with_derivatives: bool) -> Result<Connection> {
    if g.len() != n * n {
        return Err(Error::Dimension { what: "metric components", expected: n * n, found: g.len() });
    }
    let gv: Vec<f64> = g.iter().map(Jet::value).collect();
    let ginv = BilinearForm::new(n, gv)?.inverse()?;
    let gi = ginv.as_slice();
    let dg = |a: usize, b: usize, m: usize| g[a * n + b].d(m);
    let ddg = |a: usize, b: usize, m: usize, p: usize| g[a * n + b].dd(m, p);

    // first-kind symbols B[i][j][l] = d_i g_jl + d_j g_il - d_l g_ij
    let mut b = vec![0.0; n * n * n];
    for i in 0..n {
        for j in 0..n {
            for l in 0..n {
                b[(i * n + j) * n + l] = dg(j, l, i) + dg(i, l, j) - dg(i, j, l);
            }
        }
    }
    let mut gamma = vec![0.0; n * n * n];
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let mut s = 0.0;
                for l in 0..n {
                    s += gi[k * n + l] * b[(i * n + j) * n + l];
                }
                gamma[(k * n + i) * n + j] = 0.5 * s;
            }
        }
    }

    if !with_derivatives {
        return Ok(Connection { n, gamma, dgamma: Vec::new() });
    }

    // d_m g^{kl} = -g^{ka} (d_m g_ab) g^{bl}
    let mut dginv = vec![0.0; n * n * n];
    for m in 0..n {
        let mut t = vec![0.0; n * n];
        for a in 0..n {
            for l in 0..n {
                let mut s = 0.0;
                for bb in 0..n {
                    s += dg(a, bb, m) * gi[bb * n + l];
                }
                t[a * n + l] = s;
            }
        }
        for k in 0..n {
            for l in 0..n {
                let mut s = 0.0;
                for a in 0..n {
                    s += gi[k * n + a] * t[a * n + l];
                }
                dginv[(m * n + k) * n + l] = -s;
            }
        }
    }

    let mut dgamma = vec![0.0; n * n * n * n];
    for m in 0..n {
        for i in 0..n {
            for j in 0..n {
                let db: Vec<f64> = (0..n).map(|l| ddg(j, l, i, m) + ddg(i, l, j, m) - ddg(i, j, l, m)).collect();
                for k in 0..n {
                    let mut s = 0.0;
                    for l in 0..n {
                        s += dginv[(m * n + k) * n + l] * b[(i * n + j) * n + l] + gi[k * n + l] * db[l];
                    }
                    dgamma[((m * n + k) * n + i) * n + j] = 0.5 * s;
                }
            }
        }
    }
    Ok(Connection { n, gamma, dgamma })
}

impl Connection {
    pub fn get(&self, k: usize, i: usize, j: usize) -> f64 {
        self.gamma[(k * self.n + i) * self.n + j]
    }

    pub fn d(&self, m: usize, k: usize, i: usize, j: usize) -> f64 {
        self.dgamma[((m * self.n + k) * self.n + i) * self.n + j]
    }

    /// `Gamma(u, v)^k = Gamma^k_ij u^i v^j`.
    pub fn apply(&self, u: &[f64], v: &[f64]) -> Vec<f64> {
        let n = self.n;
        (0..n)
            .map(|k| {
                let mut s = 0.0;
                for i in 0..n {
                    if u[i] == 0.0 {
                        continue;
                    }
                    for j in 0..n {
                        s += self.get(k, i, j) * u[i] * v[j];
                    }
                }
                s
            })
            .collect()
    }

    /// `nabla_u V` for a vector field whose components are jets in the chart
    /// coordinates.
    pub fn nabla(&self, u: &[f64], v: &[Jet]) -> Vec<f64> {
        let n = self.n;
        let vv: Vec<f64> = v.iter().map(Jet::value).collect();
        let g = self.apply(u, &vv);
        (0..n).map(|k| g[k] + (0..n).map(|i| u[i] * v[k].d(i)).sum::<f64>()).collect()
    }

    pub fn curvature(&self) -> Curvature {
        let n = self.n;
        let mut r = vec![0.0; n * n * n * n];
        for l in 0..n {
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        let mut s = self.d(i, l, j, k) - self.d(j, l, i, k);
                        for m in 0..n {
                            s += self.get(l, i, m) * self.get(m, j, k) - self.get(l, j, m) * self.get(m, i, k);
                        }
                        r[((l * n + i) * n + j) * n + k] = s;
                    }
                }
            }
        }
        Curvature { n, r }
    }
}

/// Riemann tensor components `r[l][i][j][k] = R^l_ijk` at a point.
#[derive(Debug, Clone)]
pub struct Curvature {
    pub n: usize,
    pub r: Vec<f64>,
}

impl Curvature {
    pub fn get(&self, l: usize, i: usize, j: usize, k: usize) -> f64 {
        self.r[((l * self.n + i) * self.n + j) * self.n + k]
    }

    /// `R(u, v) w`.
    pub fn apply(&self, u: &[f64], v: &[f64], w: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut out = vec![0.0; n];
        for i in 0..n {
            if u[i] == 0.0 {
                continue;
            }
            for j in 0..n {
                let uv = u[i] * v[j];
                if uv == 0.0 {
                    continue;
                }
                for k in 0..n {
                    let c = uv * w[k];
                    if c == 0.0 {
                        continue;
                    }
                    for (l, o) in out.iter_mut().enumerate() {
                        *o += self.get(l, i, j, k) * c;
                    }
                }
            }
        }
        out
    }

    /// `Ric_jk = R^i_ijk`, row-major.
    pub fn ricci(&self) -> Vec<f64> {
        let n = self.n;
        let mut out = vec![0.0; n * n];
        for j in 0..n {
            for k in 0..n {
                out[j * n + k] = (0..n).map(|i| self.get(i, i, j, k)).sum();
            }
        }
        out
    }

    /// Largest violation of the first Bianchi identity, relative to the
    /// largest component.
    pub fn bianchi_defect(&self) -> f64 {
        let n = self.n;
        let scale = self.r.iter().fold(1.0f64, |m, x| m.max(x.abs()));
        let mut worst = 0.0f64;
        for l in 0..n {
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        let s = self.get(l, i, j, k) + self.get(l, j, k, i) + self.get(l, k, i, j);
                        worst = worst.max(s.abs());
                    }
                }
            }
        }
        worst / scale
    }
}

/// Sectional curvature of the plane spanned by `u`, `v`.
pub fn sectional_curvature(curv: &Curvature, g: &[f64], u: &[f64], v: &[f64]) -> f64 {
    use super::dense::inner;
    let n = curv.n;
    let ruvv = curv.apply(u, v, v);
    let num = inner(g, &ruvv, u, n);
    let den = inner(g, u, u, n) * inner(g, v, v, n) - {
        let x = inner(g, u, v, n);
        x * x
    };
    num / den
}

/// `Gamma^k_ij` from central differences of the metric values with step `h`,
/// laid out like [`Connection::gamma`].
pub fn christoffel_central_difference(
    metric: impl Fn(&[f64]) -> Result<Vec<f64>>,
    p: &[f64],
    h: f64,
) -> Result<Vec<f64>> {
    let n = p.len();
    let mut dg = vec![0.0; n * n * n];
    for m in 0..n {
        let mut plus = p.to_vec();
        let mut minus = p.to_vec();
        plus[m] += h;
        minus[m] -= h;
        let (gp, gm) = (metric(&plus)?, metric(&minus)?);
        for ab in 0..n * n {
            dg[m * n * n + ab] = (gp[ab] - gm[ab]) / (2.0 * h);
        }
    }
    let ginv = BilinearForm::new(n, metric(p)?)?.inverse()?;
    let gi = ginv.as_slice();
    let d = |m: usize, a: usize, b: usize| dg[m * n * n + a * n + b];
    let mut gamma = vec![0.0; n * n * n];
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let mut s = 0.0;
                for l in 0..n {
                    s += gi[k * n + l] * (d(i, j, l) + d(j, i, l) - d(l, i, j));
                }
                gamma[(k * n + i) * n + j] = 0.5 * s;
            }
        }
    }
    Ok(gamma)
}

/// A seeded metric on `(x1, .., xn)` over the box `(-1, 1)^n`:
/// `2 I + A^T A` with `A` having affine and quadratic entries, plus a
/// bounded exponential bump on the diagonal. Returned row-major as expression sources.
pub fn random_metric(seed: u64, n: usize) -> Vec<String> {
    use rand::Rng;
    let mut r = crate::sample::rng(seed);
    let names: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    let mut a = Vec::with_capacity(n * n);
    for _ in 0..n * n {
        let mut terms = vec![format!("({:.6})", r.gen_range(-0.5..0.5))];
        for x in &names {
            terms.push(format!("({:.6})*{x}", r.gen_range(-0.5..0.5)));
        }
        let (i, j) = (r.gen_range(0..n), r.gen_range(0..n));
        terms.push(format!("({:.6})*{}*{}", r.gen_range(-0.5..0.5), names[i], names[j]));
        a.push(terms.join(" + "));
    }
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let mut sum: Vec<String> = (0..n).map(|k| format!("({})*({})", a[k * n + i], a[k * n + j])).collect();
            if i == j {
                let c: f64 = r.gen_range(-0.5..0.5);
                sum.push(format!("2 + 0.3*exp(({c:.6})*{})", names[i]));
            }
            out.push(sum.join(" + "));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ambient::{unit_sphere, Chart, FramedStructure};
    use crate::expr::parse;

    fn metric_only(coords: &[&str], entries: &[&[&str]]) -> FramedStructure {
        let n = coords.len();
        let chart = Chart::new("t", coords, &vec![(-1.0, 1.0); n]).unwrap();
        let m = entries.iter().map(|r| r.iter().map(|s| parse(s).unwrap()).collect()).collect();
        let z = (0..n).map(|_| (0..n).map(|_| parse("0").unwrap()).collect()).collect();
        FramedStructure::new(chart, m, z, vec![], vec![]).unwrap()
    }

    #[test]
    fn flat_metric_has_zero_symbols() {
        let s = metric_only(&["x", "y"], &[&["1", "0"], &["0", "1"]]);
        let c = christoffel(&s.at(&[0.3, 0.4]).unwrap().g, 2).unwrap();
        assert!(c.gamma.iter().chain(&c.dgamma).all(|x| *x == 0.0));
    }

    #[test]
    fn polar_symbols() {
        // dr^2 + r^2 dtheta^2
        let s = metric_only(&["r", "t"], &[&["1", "0"], &["0", "r^2"]]);
        let r = 2.0;
        let c = christoffel(&s.at(&[r, 0.2]).unwrap().g, 2).unwrap();
        assert!((c.get(0, 1, 1) + r).abs() < 1e-14);
        assert!((c.get(1, 0, 1) - 1.0 / r).abs() < 1e-14);
        assert!((c.get(1, 1, 0) - 1.0 / r).abs() < 1e-14);
        assert!(c.get(0, 0, 0).abs() < 1e-15);
        // d_r Gamma^t_rt = -1/r^2
        assert!((c.d(0, 1, 0, 1) + 1.0 / (r * r)).abs() < 1e-13);
    }

    #[test]
    fn exponential_warp_symbols() {
        // dz^2 + e^{2z} dx^2, coordinates (x, z)
        let s = metric_only(&["x", "z"], &[&["exp(2*z)", "0"], &["0", "1"]]);
        let z = 0.3;
        let c = christoffel(&s.at(&[0.1, z]).unwrap().g, 2).unwrap();
        assert!((c.get(0, 0, 1) - 1.0).abs() < 1e-14);
        assert!((c.get(1, 0, 0) + libm::exp(2.0 * z)).abs() < 1e-13);
        // this is hyperbolic space: K = -1
        let k = sectional_curvature(&c.curvature(), &s.at(&[0.1, z]).unwrap().g_values(), &[1.0, 0.0], &[0.0, 1.0]);
        assert!((k + 1.0).abs() < 1e-12);
    }

    #[test]
    fn sphere_has_unit_curvature() {
        let s = unit_sphere();
        let p = [0.9, 0.4];
        let c = christoffel(&s.at(&p).unwrap().g, 2).unwrap();
        let curv = c.curvature();
        let k = sectional_curvature(&curv, &s.at(&p).unwrap().g_values(), &[1.0, 0.0], &[0.0, 1.0]);
        assert!((k - 1.0).abs() < 1e-12);
        assert!(curv.bianchi_defect() < 1e-14);
        // Ric = g on the unit 2-sphere
        let ric = curv.ricci();
        assert!((ric[0] - 1.0).abs() < 1e-12);
        assert!((ric[3] - libm::sin(0.9).powi(2)).abs() < 1e-12);
    }
}
