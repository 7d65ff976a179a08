//! Ambient framed metric f-manifolds on a single coordinate chart.
//!
//! A [`FramedStructure`] holds expression-valued tensor components: the metric
//! `g_ij`, the endomorphism `phi` stored so that `phi[k][j]` is the `k`-th
//! component of `phi(d_j)`, the vector fields `xi_a` and the one-forms
//! `eta^a`. Everything is evaluated as jets, so first and second coordinate
//! derivatives come out exactly.

pub(crate) mod checks;
mod connection;
mod models;

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::expr::{coordinate_jets, parse, BoundExpr, Expr};
use crate::jet::Jet;

pub use checks::{
    check_d_fundamental_form, check_f_structure, check_identities, check_kenmotsu, check_nearly_kenmotsu, check_normal,
    nijenhuis, Tolerances,
};
pub use connection::{
    christoffel, christoffel_central_difference, christoffel_symbols, random_metric, sectional_curvature, Connection,
    Curvature,
};
pub use models::{example_1, flat_control, kenmotsu_f_model, sheared_complex_structure, unit_sphere};

#[derive(Debug, Clone, PartialEq)]
pub struct Chart {
    pub name: String,
    pub coords: Vec<String>,
    /// Open sampling interval per coordinate.
    pub bounds: Vec<(f64, f64)>,
}

impl Chart {
    pub fn new(name: &str, coords: &[&str], bounds: &[(f64, f64)]) -> Result<Chart> {
        if coords.len() != bounds.len() {
            return Err(Error::Dimension { what: "chart bounds", expected: coords.len(), found: bounds.len() });
        }
        for (i, c) in coords.iter().enumerate() {
            if coords[..i].contains(c) {
                return Err(Error::InvalidParameter(format!("duplicate coordinate `{c}`")));
            }
            let (lo, hi) = bounds[i];
            if !(lo < hi) {
                return Err(Error::InvalidParameter(format!("empty interval for coordinate `{c}`")));
            }
        }
        Ok(Chart {
            name: name.to_string(),
            coords: coords.iter().map(|s| s.to_string()).collect(),
            bounds: bounds.to_vec(),
        })
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn names(&self) -> Vec<&str> {
        self.coords.iter().map(|s| s.as_str()).collect()
    }

    pub fn contains(&self, p: &[f64]) -> bool {
        p.len() == self.dim() && p.iter().zip(&self.bounds).all(|(x, (lo, hi))| *lo < *x && *x < *hi)
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.coords.iter().position(|c| c == name)
    }
}

/// Textual component data, as it appears in scenario files.
#[derive(Debug, Clone, Default)]
pub struct StructureSource {
    pub metric: Vec<Vec<String>>,
    pub phi: Vec<Vec<String>>,
    pub xi: Vec<Vec<String>>,
    pub eta: Vec<Vec<String>>,
}

#[derive(Debug, Clone)]
pub struct FramedStructure {
    pub chart: Chart,
    pub(crate) metric: Vec<BoundExpr>,
    pub(crate) phi: Vec<BoundExpr>,
    pub(crate) xi: Vec<Vec<BoundExpr>>,
    pub(crate) eta: Vec<Vec<BoundExpr>>,
}

fn bind_matrix(
    rows: &[Vec<Expr>],
    n: usize,
    cols: usize,
    what: &'static str,
    names: &[&str],
) -> Result<Vec<BoundExpr>> {
    if rows.len() != n {
        return Err(Error::Dimension { what, expected: n, found: rows.len() });
    }
    let mut out = Vec::with_capacity(n * cols);
    for row in rows {
        if row.len() != cols {
            return Err(Error::Dimension { what, expected: cols, found: row.len() });
        }
        for e in row {
            out.push(e.bind(names)?);
        }
    }
    Ok(out)
}

impl FramedStructure {
    /// `phi[k][j]` is the `k`-th component of `phi(d_j)`; `xi[a]` and
    /// `eta[a]` are component lists of the `a`-th structure field and form.
    pub fn new(
        chart: Chart,
        metric: Vec<Vec<Expr>>,
        phi: Vec<Vec<Expr>>,
        xi: Vec<Vec<Expr>>,
        eta: Vec<Vec<Expr>>,
    ) -> Result<Self> {
        let n = chart.dim();
        let names = chart.names();
        for i in 0..n {
            for j in 0..i {
                if metric.get(i).and_then(|r| r.get(j)) != metric.get(j).and_then(|r| r.get(i)) {
                    return Err(Error::Contract(format!(
                        "metric is not symmetric: entries ({i},{j}) and ({j},{i}) differ"
                    )));
                }
            }
        }
        if xi.len() != eta.len() {
            return Err(Error::Dimension { what: "structure one-forms", expected: xi.len(), found: eta.len() });
        }
        let metric = bind_matrix(&metric, n, n, "metric", &names)?;
        let phi = bind_matrix(&phi, n, n, "phi", &names)?;
        let xi = xi
            .iter()
            .map(|v| bind_matrix(core::slice::from_ref(v), 1, n, "structure vector field", &names))
            .collect::<Result<Vec<_>>>()?;
        let eta = eta
            .iter()
            .map(|v| bind_matrix(core::slice::from_ref(v), 1, n, "structure one-form", &names))
            .collect::<Result<Vec<_>>>()?;
        Ok(FramedStructure { chart, metric, phi, xi, eta })
    }

    pub fn from_source(chart: Chart, src: &StructureSource) -> Result<Self> {
        let p = |rows: &[Vec<String>]| -> Result<Vec<Vec<Expr>>> {
            rows.iter().map(|r| r.iter().map(|s| parse(s)).collect()).collect()
        };
        FramedStructure::new(chart, p(&src.metric)?, p(&src.phi)?, p(&src.xi)?, p(&src.eta)?)
    }

    pub fn dim(&self) -> usize {
        self.chart.dim()
    }

    /// Number of structure vector fields.
    pub fn rank(&self) -> usize {
        self.xi.len()
    }

    /// Half the dimension of the complementary distribution.
    pub fn half_dim(&self) -> usize {
        (self.dim() - self.rank()) / 2
    }

    /// Evaluates all components as jets in the chart coordinates at `p`.
    pub fn at(&self, p: &[f64]) -> Result<StructureAt> {
        if p.len() != self.dim() {
            return Err(Error::Dimension { what: "point", expected: self.dim(), found: p.len() });
        }
        self.eval_with(&coordinate_jets(p))
    }

    /// Evaluates all components with the chart coordinates replaced by `vars`
    /// (for instance the jets of an immersion).
    pub fn eval_with(&self, vars: &[Jet]) -> Result<StructureAt> {
        let ev = |v: &[BoundExpr]| v.iter().map(|e| e.eval_jet(vars)).collect::<Result<Vec<_>>>();
        Ok(StructureAt {
            n: self.dim(),
            g: ev(&self.metric)?,
            phi: ev(&self.phi)?,
            xi: self.xi.iter().map(|v| ev(v)).collect::<Result<_>>()?,
            eta: self.eta.iter().map(|v| ev(v)).collect::<Result<_>>()?,
        })
    }

    pub fn metric_at(&self, vars: &[Jet]) -> Result<Vec<Jet>> {
        self.metric.iter().map(|e| e.eval_jet(vars)).collect()
    }
}

/// All structure components as jets at one point.
#[derive(Debug, Clone)]
pub struct StructureAt {
    pub n: usize,
    pub g: Vec<Jet>,
    pub phi: Vec<Jet>,
    pub xi: Vec<Vec<Jet>>,
    pub eta: Vec<Vec<Jet>>,
}

impl StructureAt {
    pub fn g_values(&self) -> Vec<f64> {
        self.g.iter().map(Jet::value).collect()
    }

    pub fn phi_values(&self) -> Vec<f64> {
        self.phi.iter().map(Jet::value).collect()
    }

    pub fn xi_values(&self) -> Vec<Vec<f64>> {
        self.xi.iter().map(|v| v.iter().map(Jet::value).collect()).collect()
    }

    pub fn eta_values(&self) -> Vec<Vec<f64>> {
        self.eta.iter().map(|v| v.iter().map(Jet::value).collect()).collect()
    }
}

/// Dense helpers on row-major `n x n` value matrices.
pub mod dense {
    use alloc::vec;
    use alloc::vec::Vec;

    pub fn mat_mul(a: &[f64], b: &[f64], n: usize) -> Vec<f64> {
        let mut c = vec![0.0; n * n];
        for i in 0..n {
            for k in 0..n {
                let aik = a[i * n + k];
                if aik == 0.0 {
                    continue;
                }
                for j in 0..n {
                    c[i * n + j] += aik * b[k * n + j];
                }
            }
        }
        c
    }

    pub fn mat_vec(a: &[f64], v: &[f64], n: usize) -> Vec<f64> {
        (0..n).map(|i| (0..n).map(|j| a[i * n + j] * v[j]).sum()).collect()
    }

    pub fn inner(g: &[f64], v: &[f64], w: &[f64], n: usize) -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                s += v[i] * g[i * n + j] * w[j];
            }
        }
        s
    }

    pub fn dot(a: &[f64], b: &[f64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| x * y).sum()
    }

    pub fn basis(i: usize, n: usize) -> Vec<f64> {
        let mut v = vec![0.0; n];
        v[i] = 1.0;
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn chart_validation() {
        assert!(Chart::new("c", &["x", "x"], &[(0.0, 1.0), (0.0, 1.0)]).is_err());
        assert!(Chart::new("c", &["x"], &[(1.0, 1.0)]).is_err());
        let c = Chart::new("c", &["x", "y"], &[(0.0, 1.0), (-1.0, 1.0)]).unwrap();
        assert!(c.contains(&[0.5, 0.0]) && !c.contains(&[1.0, 0.0]));
    }

    #[test]
    fn asymmetric_metric_rejected() {
        let c = Chart::new("c", &["x", "y"], &[(0.0, 1.0), (0.0, 1.0)]).unwrap();
        let src = StructureSource {
            metric: vec![vec!["1".into(), "x".into()], vec!["y".into(), "1".into()]],
            phi: vec![vec!["0".into(), "0".into()], vec!["0".into(), "0".into()]],
            ..Default::default()
        };
        assert!(matches!(FramedStructure::from_source(c, &src), Err(Error::Contract(_))));
    }
}
