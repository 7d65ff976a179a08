//! The two published pseudo-slant submanifold examples, each encoded twice:
//! by its printed tangent frame and by its immersion. The two encodings do
//! not describe the same tangent spaces; both are kept so that each printed
//! number can be reproduced from the encoding it was computed from.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use super::{Distribution, Immersion, Role, Span};
use crate::ambient::{flat_control, Chart, FramedStructure, StructureSource};
use crate::error::Result;

#[derive(Debug, Clone)]
pub struct PaperExample {
    pub name: String,
    pub immersion: Immersion,
    /// Printed frame vectors, one single-field distribution each, in print order.
    pub printed: Vec<Distribution>,
    /// Slant and anti-invariant distributions spanned by printed vectors.
    pub d_theta: Distribution,
    pub d_perp: Distribution,
    /// The same roles taken from coordinate directions of the immersion.
    pub chi_d_theta: Distribution,
    pub chi_d_perp: Distribution,
    /// Printed cosine of the slant angle.
    pub printed_cos: f64,
    /// Printed induced metric, diagonal entries in domain order.
    pub printed_metric: Vec<String>,
    /// Induced metric diagonal as derived from the immersion, where it differs.
    pub derived_metric: Vec<String>,
}

fn strings(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

fn coordinate_field(i: usize, m: usize) -> Vec<&'static str> {
    (0..m).map(|j| if i == j { "1" } else { "0" }).collect()
}

/// Eight-dimensional flat model `(x1, y1, x2, y2, x3, y3, t1, t2)` with
/// `phi d_x = -d_y`, `phi d_y = d_x`, `xi_k = d_t_k`.
pub fn example_2_ambient() -> FramedStructure {
    let names = ["x1", "y1", "x2", "y2", "x3", "y3", "t1", "t2"];
    let chart = Chart::new("example-2-ambient", &names, &[(-2.0, 2.0); 8]).expect("valid chart");
    let n = 8;
    let z = || vec![vec!["0".to_string(); n]; n];
    let mut src = StructureSource { metric: z(), phi: z(), ..Default::default() };
    for i in 0..n {
        src.metric[i][i] = "1".into();
    }
    for i in 0..3 {
        let (x, y) = (2 * i, 2 * i + 1);
        src.phi[y][x] = "-1".into();
        src.phi[x][y] = "1".into();
    }
    for k in 0..2 {
        let mut v = vec!["0".to_string(); n];
        v[6 + k] = "1".into();
        src.xi.push(v.clone());
        src.eta.push(v);
    }
    FramedStructure::from_source(chart, &src).expect("valid structure")
}

pub fn example_2() -> Result<PaperExample> {
    let domain = Chart::new(
        "example-2",
        &["u1", "u2", "u3", "t1", "t2"],
        &[(-1.5, 1.5), (0.2, 1.0), (0.2, 1.0), (-1.0, 1.0), (-1.0, 1.0)],
    )?;
    let ambient = example_2_ambient();
    let n = ambient.dim();
    let imm = Immersion::from_strings(
        domain.clone(),
        ambient,
        &["u3*sin(u1)", "u2*sin(u1)", "u3 - u2", "u3 + u2", "u3*cos(u1)", "u2*cos(u1)", "t1", "t2"],
    )?;
    let w: [(&str, [&str; 8]); 5] = [
        ("W1", ["cos(u1)", "0", "1", "1", "sin(u1)", "0", "0", "0"]),
        ("W2", ["0", "cos(u1)", "1", "-1", "0", "sin(u1)", "0", "0"]),
        ("W3", ["-u3*sin(u1)", "-u2*sin(u1)", "0", "0", "u3*cos(u1)", "u2*cos(u1)", "0", "0"]),
        ("W4", ["0", "0", "0", "0", "0", "0", "1", "0"]),
        ("W5", ["0", "0", "0", "0", "0", "0", "0", "1"]),
    ];
    let roles = [Role::Slant, Role::Slant, Role::AntiInvariant, Role::Structure, Role::Structure];
    let printed = w
        .iter()
        .zip(roles)
        .map(|((name, f), role)| Distribution::from_strings(name, role, Span::Ambient, &[f.as_slice()], &domain, n))
        .collect::<Result<Vec<_>>>()?;
    let d_theta = Distribution::from_strings("D_theta", Role::Slant, Span::Ambient, &[&w[0].1, &w[1].1], &domain, n)?;
    let d_perp = Distribution::from_strings("D_perp", Role::AntiInvariant, Span::Ambient, &[&w[2].1], &domain, n)?;
    let m = domain.dim();
    let chi_d_theta = Distribution::from_strings(
        "chi D_theta",
        Role::Slant,
        Span::Domain,
        &[&coordinate_field(1, m), &coordinate_field(2, m)],
        &domain,
        n,
    )?;
    let chi_d_perp = Distribution::from_strings(
        "chi D_perp",
        Role::AntiInvariant,
        Span::Domain,
        &[&coordinate_field(0, m)],
        &domain,
        n,
    )?;
    Ok(PaperExample {
        name: "example-2".into(),
        immersion: imm,
        printed,
        d_theta,
        d_perp,
        chi_d_theta,
        chi_d_perp,
        printed_cos: 1.0 / 3.0,
        printed_metric: strings(&["u1^2 + u2^2", "3", "3", "1", "1"]),
        derived_metric: strings(&["u2^2 + u3^2", "3", "3", "1", "1"]),
    })
}

pub fn example_3() -> Result<PaperExample> {
    let domain = Chart::new(
        "example-3",
        &["u", "v", "w", "t1", "t2"],
        &[(-1.5, 1.5), (0.2, 1.0), (0.2, 1.0), (-1.0, 1.0), (-1.0, 1.0)],
    )?;
    let mut ambient = flat_control(6, 2)?;
    ambient.chart.name = "example-3-ambient".into();
    ambient.chart.bounds = vec![(-2.0, 2.0); 14];
    let n = ambient.dim();
    let imm = Immersion::from_strings(
        domain.clone(),
        ambient,
        &[
            "0",
            "w^2*sin(u)",
            "0",
            "v^2*sin(u)",
            "0",
            "0", // x1..x6
            "0",
            "w^2 + v^2",
            "0",
            "w^2*cos(u)",
            "v^2*cos(u)",
            "0", // y1..y6
            "t1",
            "t2",
        ],
    )?;
    let x = ["cos(u)", "1", "sin(u)", "1", "0", "2", "0", "1", "0", "0", "0", "0", "0", "0"];
    let y = ["0", "1", "0", "0", "1", "0", "cos(u)", "-1", "sin(u)", "0", "0", "1", "0", "0"];
    let z = ["-w*sin(u)", "0", "w*cos(u)", "0", "0", "0", "-v*sin(u)", "0", "v*cos(u)", "3", "2", "0", "0", "0"];
    let mut u1 = ["0"; 14];
    u1[12] = "1";
    let mut u2 = ["0"; 14];
    u2[13] = "1";
    let fields: [(&str, &[&str], Role); 5] = [
        ("X", &x, Role::Slant),
        ("Y", &y, Role::Slant),
        ("Z", &z, Role::AntiInvariant),
        ("U", &u1, Role::Structure),
        ("V", &u2, Role::Structure),
    ];
    let printed = fields
        .iter()
        .map(|(name, f, role)| Distribution::from_strings(name, *role, Span::Ambient, &[f], &domain, n))
        .collect::<Result<Vec<_>>>()?;
    let d_theta = Distribution::from_strings("D_theta", Role::Slant, Span::Ambient, &[&x, &y], &domain, n)?;
    let d_perp = Distribution::from_strings("D_perp", Role::AntiInvariant, Span::Ambient, &[&z], &domain, n)?;
    let m = domain.dim();
    let chi_d_theta = Distribution::from_strings(
        "chi D_theta",
        Role::Slant,
        Span::Domain,
        &[&coordinate_field(1, m), &coordinate_field(2, m)],
        &domain,
        n,
    )?;
    let chi_d_perp = Distribution::from_strings(
        "chi D_perp",
        Role::AntiInvariant,
        Span::Domain,
        &[&coordinate_field(0, m)],
        &domain,
        n,
    )?;
    Ok(PaperExample {
        name: "example-3".into(),
        immersion: imm,
        printed,
        d_theta,
        d_perp,
        chi_d_theta,
        chi_d_perp,
        printed_cos: libm::sqrt(10.0) / 20.0,
        printed_metric: strings(&["w^4 + v^4", "8*v^2", "8*w^2", "1", "1"]),
        derived_metric: strings(&["w^4 + v^4", "8*v^2", "8*w^2", "1", "1"]),
    })
}
