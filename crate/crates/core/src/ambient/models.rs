//! Built-in ambient structures.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use super::{Chart, FramedStructure, StructureSource};
use crate::error::{Error, Result};

fn zeros(rows: usize, cols: usize) -> Vec<Vec<String>> {
    vec![vec!["0".to_string(); cols]; rows]
}

fn coordinate_names(n: usize, s: usize) -> Vec<String> {
    let mut names = Vec::with_capacity(2 * n + s);
    names.extend((1..=n).map(|i| format!("x{i}")));
    names.extend((1..=n).map(|i| format!("y{i}")));
    names.extend((1..=s).map(|k| format!("z{k}")));
    names
}

fn model(n: usize, s: usize, warped: bool, name: &str) -> Result<FramedStructure> {
    if n == 0 {
        return Err(Error::InvalidParameter("model needs at least one complex pair".into()));
    }
    let dim = 2 * n + s;
    let names = coordinate_names(n, s);
    let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    let mut bounds = vec![(-1.0, 1.0); 2 * n];
    bounds.extend(vec![(0.1, 1.0); s]);
    let chart = Chart::new(name, &refs, &bounds)?;

    let warp = if warped && s > 0 {
        let sum: Vec<String> = (1..=s).map(|k| format!("z{k}")).collect();
        format!("exp(2*({}))", sum.join(" + "))
    } else {
        "1".to_string()
    };
    let mut src = StructureSource { metric: zeros(dim, dim), phi: zeros(dim, dim), ..Default::default() };
    for i in 0..2 * n {
        src.metric[i][i] = warp.clone();
    }
    for k in 0..s {
        src.metric[2 * n + k][2 * n + k] = "1".into();
    }
    for i in 0..n {
        // phi d_xi = d_yi, phi d_yi = -d_xi
        src.phi[n + i][i] = "1".into();
        src.phi[i][n + i] = "-1".into();
    }
    for k in 0..s {
        let mut v = vec!["0".to_string(); dim];
        v[2 * n + k] = "1".into();
        src.xi.push(v.clone());
        src.eta.push(v);
    }
    FramedStructure::from_source(chart, &src)
}

/// Chart `(x_1..x_n, y_1..y_n, z_1..z_s)`, metric
/// `e^{2(z_1+..+z_s)} sum (dx_i^2 + dy_i^2) + sum dz_k^2`, `phi d_x = d_y`,
/// `phi d_y = -d_x`, `xi_k = d_z_k`, `eta^k = dz_k`.
pub fn kenmotsu_f_model(n: usize, s: usize) -> Result<FramedStructure> {
    model(n, s, true, "kenmotsu-f-model")
}

/// The fourteen-dimensional model with six complex pairs and two structure fields.
pub fn example_1() -> FramedStructure {
    model(6, 2, true, "example-1").expect("fixed parameters are valid")
}

/// The model's `phi`, `xi`, `eta` on the Euclidean metric.
pub fn flat_control(n: usize, s: usize) -> Result<FramedStructure> {
    model(n, s, false, "flat-control")
}

/// A complex structure on R^4 conjugated by the coordinate-dependent shear
/// `d_x2 -> d_x2 + y1 d_x1`; not integrable. Coordinates `(x1, x2, y1, y2)`.
pub fn sheared_complex_structure() -> FramedStructure {
    let chart = Chart::new("sheared", &["x1", "x2", "y1", "y2"], &[(-1.0, 1.0); 4]).expect("valid chart");
    let row = |r: [&str; 4]| r.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    let src = StructureSource {
        metric: (0..4).map(|i| (0..4).map(|j| if i == j { "1".into() } else { "0".into() }).collect()).collect(),
        phi: vec![
            row(["0", "0", "-1", "-y1"]),
            row(["0", "0", "0", "-1"]),
            row(["1", "-y1", "0", "0"]),
            row(["0", "1", "0", "0"]),
        ],
        ..Default::default()
    };
    FramedStructure::from_source(chart, &src).expect("valid structure")
}

/// The round unit 2-sphere `dth^2 + sin^2(th) dph^2` with zero `phi`; a
/// curvature-pipeline oracle only.
pub fn unit_sphere() -> FramedStructure {
    let chart = Chart::new("unit-sphere", &["th", "ph"], &[(0.3, 2.8), (-1.0, 1.0)]).expect("valid chart");
    let src = StructureSource {
        metric: vec![vec!["1".into(), "0".into()], vec!["0".into(), "sin(th)^2".into()]],
        phi: zeros(2, 2),
        ..Default::default()
    };
    FramedStructure::from_source(chart, &src).expect("valid structure")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parameters() {
        assert!(kenmotsu_f_model(0, 1).is_err());
        let f = kenmotsu_f_model(6, 2).unwrap();
        assert_eq!((f.dim(), f.rank(), f.half_dim()), (14, 2, 6));
        assert_eq!(f.chart.coords[12], "z1");
        let f = kenmotsu_f_model(2, 0).unwrap();
        assert_eq!(f.rank(), 0);
    }
}
