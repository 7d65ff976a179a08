//! Scenario files: TOML with exprlang strings for every mathematical field.
//! Loading resolves every name, parses every expression and checks every
//! dimension; nothing is evaluated until [`crate::runner::run_plan`].

use std::fmt;

use fgverify_core::ambient::{
    example_1, flat_control, kenmotsu_f_model, sheared_complex_structure, unit_sphere, Chart, FramedStructure,
};
use fgverify_core::expr::{parse, BoundExpr, Expr};
use fgverify_core::subgeom::{example_2, example_2_ambient, example_3, Distribution, Immersion, Role, Span};
use fgverify_core::warp::{product_config, rotation_config, InequalityConfig, Order, WarpedProduct};
use serde::Deserialize;

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioError {
    /// Where in the scenario the problem is, e.g. `submanifold[0].map[2]`.
    pub path: String,
    pub message: String,
}

impl fmt::Display for ScenarioError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.path.is_empty() {
            f.write_str(&self.message)
        } else {
            write!(f, "{}: {}", self.path, self.message)
        }
    }
}

impl std::error::Error for ScenarioError {}

fn err(path: impl Into<String>, message: impl fmt::Display) -> ScenarioError {
    ScenarioError { path: path.into(), message: message.to_string() }
}

type Res<T> = Result<T, ScenarioError>;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub name: String,
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub suites: Vec<String>,
    pub ambient: Option<AmbientSpec>,
    #[serde(default)]
    pub tolerances: TolSpec,
    #[serde(default, rename = "submanifold")]
    pub submanifolds: Vec<SubSpec>,
    #[serde(default)]
    pub warped: Vec<WarpSpec>,
    #[serde(default, rename = "config")]
    pub configs: Vec<ConfigSpec>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TolSpec {
    pub algebraic: Option<f64>,
    pub curvature: Option<f64>,
    pub derivative: Option<f64>,
    pub warped: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChartSpec {
    pub name: Option<String>,
    pub coords: Vec<String>,
    pub bounds: Vec<[f64; 2]>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AmbientSpec {
    pub builtin: Option<String>,
    pub n: Option<usize>,
    pub s: Option<usize>,
    pub chart: Option<ChartSpec>,
    pub metric: Option<Vec<Vec<String>>>,
    pub phi: Option<Vec<Vec<String>>>,
    #[serde(default)]
    pub xi: Vec<Vec<String>>,
    #[serde(default)]
    pub eta: Vec<Vec<String>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DistSpec {
    pub name: String,
    pub role: String,
    pub span: Option<String>,
    pub fields: Vec<Vec<String>>,
    pub theta: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubSpec {
    pub name: String,
    pub builtin: Option<String>,
    pub domain: Option<ChartSpec>,
    pub map: Option<Vec<String>>,
    #[serde(default, rename = "distribution")]
    pub distributions: Vec<DistSpec>,
    /// Names of the slant and anti-invariant distributions.
    pub pseudo_slant: Option<[String; 2]>,
    /// Expected induced metric over the domain coordinates.
    pub metric: Option<Vec<Vec<String>>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WarpSpec {
    pub name: String,
    pub base: ChartSpec,
    pub fiber: ChartSpec,
    pub base_metric: Vec<Vec<String>>,
    pub fiber_metric: Vec<Vec<String>>,
    pub warping: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigSpec {
    pub name: String,
    /// `rotation` or `product`: a synthesized configuration in the Kenmotsu f-model.
    pub builtin: Option<String>,
    pub s: Option<usize>,
    pub theta: f64,
    /// Radius of the rotation axis offset or of the circle factor.
    pub scale: Option<f64>,
    pub submanifold: Option<String>,
    pub order: Option<String>,
    pub d_theta: Option<String>,
    pub d_perp: Option<String>,
    pub warping: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Structure,
    Normality,
    FundamentalForm,
    Kenmotsu,
    Identities,
    Submanifold,
    InducedMetric,
    Slant,
    PseudoSlant,
    Lemma41,
    Lemmas,
    Theorems,
    PaperTheorems,
}

pub const SUITES: [(&str, Suite); 13] = [
    ("structure", Suite::Structure),
    ("normality", Suite::Normality),
    ("fundamental-form", Suite::FundamentalForm),
    ("kenmotsu", Suite::Kenmotsu),
    ("identities", Suite::Identities),
    ("submanifold", Suite::Submanifold),
    ("induced-metric", Suite::InducedMetric),
    ("slant", Suite::Slant),
    ("pseudo-slant", Suite::PseudoSlant),
    ("lemma41", Suite::Lemma41),
    ("lemmas", Suite::Lemmas),
    ("theorems", Suite::Theorems),
    ("paper-theorems", Suite::PaperTheorems),
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tol {
    pub algebraic: f64,
    pub curvature: f64,
    /// First-derivative identities of the structure: normality, `d Phi`, Kenmotsu.
    pub derivative: f64,
    /// Submanifold, lemma and warped identities.
    pub warped: f64,
}

impl Default for Tol {
    fn default() -> Self {
        Tol { algebraic: 1e-9, curvature: 1e-7, derivative: 1e-8, warped: 1e-6 }
    }
}

#[derive(Debug, Clone)]
pub struct SubPlan {
    pub name: String,
    pub immersion: Immersion,
    pub distributions: Vec<(Distribution, Option<f64>)>,
    /// Indices into `distributions`.
    pub pseudo_slant: Option<(usize, usize)>,
    pub metric: Option<Vec<BoundExpr>>,
}

#[derive(Debug, Clone)]
pub struct Plan {
    pub name: String,
    pub seed: u64,
    pub samples: usize,
    pub tol: Tol,
    pub suites: Vec<Suite>,
    pub ambient: Option<FramedStructure>,
    pub submanifolds: Vec<SubPlan>,
    pub warped: Vec<(String, WarpedProduct)>,
    pub configs: Vec<InequalityConfig>,
}

/// Command-line overrides; `None` keeps the scenario value or the default.
#[derive(Debug, Clone, Copy, Default)]
pub struct Overrides {
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub tol_alg: Option<f64>,
    pub tol_curv: Option<f64>,
}

pub const DEFAULT_SAMPLES: usize = 64;
pub const DEFAULT_SEED: u64 = 42;

fn expr(path: &str, src: &str) -> Res<Expr> {
    parse(src).map_err(|e| err(path, e))
}

fn chart(path: &str, c: &ChartSpec, default_name: &str) -> Res<Chart> {
    if c.coords.len() != c.bounds.len() {
        return Err(err(path, format!("{} coordinates but {} bounds", c.coords.len(), c.bounds.len())));
    }
    let names: Vec<&str> = c.coords.iter().map(String::as_str).collect();
    let bounds: Vec<(f64, f64)> = c.bounds.iter().map(|b| (b[0], b[1])).collect();
    Chart::new(c.name.as_deref().unwrap_or(default_name), &names, &bounds).map_err(|e| err(path, e))
}

fn matrix(path: &str, rows: &[Vec<String>]) -> Res<Vec<Vec<Expr>>> {
    rows.iter()
        .enumerate()
        .map(|(i, r)| r.iter().enumerate().map(|(j, s)| expr(&format!("{path}[{i}][{j}]"), s)).collect())
        .collect()
}

pub fn builtin_ambient(name: &str, n: Option<usize>, s: Option<usize>) -> Result<FramedStructure, String> {
    let core = |r: fgverify_core::Result<FramedStructure>| r.map_err(|e| e.to_string());
    match name {
        "kenmotsu-f-model" => core(kenmotsu_f_model(n.unwrap_or(2), s.unwrap_or(2))),
        "flat-control" => core(flat_control(n.unwrap_or(2), s.unwrap_or(2))),
        "example-1" => Ok(example_1()),
        "example-2" => Ok(example_2_ambient()),
        "example-3" => core(example_3().map(|e| e.immersion.ambient)),
        "unit-sphere" => Ok(unit_sphere()),
        "sheared-complex-structure" => Ok(sheared_complex_structure()),
        other => Err(format!("unknown built-in ambient `{other}`")),
    }
}

fn ambient(a: &AmbientSpec) -> Res<FramedStructure> {
    if let Some(b) = &a.builtin {
        if a.chart.is_some() || a.metric.is_some() || a.phi.is_some() {
            return Err(err("ambient", "a built-in ambient takes no inline chart or tensors"));
        }
        return builtin_ambient(b, a.n, a.s).map_err(|m| err("ambient.builtin", m));
    }
    let c = a.chart.as_ref().ok_or_else(|| err("ambient", "needs `builtin` or an inline `chart`"))?;
    let chart = chart("ambient.chart", c, "ambient")?;
    let metric = a.metric.as_ref().ok_or_else(|| err("ambient", "inline ambient needs `metric`"))?;
    let phi = a.phi.as_ref().ok_or_else(|| err("ambient", "inline ambient needs `phi`"))?;
    let n = chart.dim();
    for (what, rows) in [("metric", metric), ("phi", phi)] {
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(err(format!("ambient.{what}"), format!("expected a {n} x {n} matrix")));
        }
    }
    for (what, rows) in [("xi", &a.xi), ("eta", &a.eta)] {
        if rows.iter().any(|r| r.len() != n) {
            return Err(err(format!("ambient.{what}"), format!("every vector needs {n} components")));
        }
    }
    let m = matrix("ambient.metric", metric)?;
    let p = matrix("ambient.phi", phi)?;
    let x = matrix("ambient.xi", &a.xi)?;
    let e = matrix("ambient.eta", &a.eta)?;
    FramedStructure::new(chart, m, p, x, e).map_err(|e| err("ambient", e))
}

fn role(path: &str, s: &str) -> Res<Role> {
    match s {
        "slant" => Ok(Role::Slant),
        "anti-invariant" => Ok(Role::AntiInvariant),
        "structure" => Ok(Role::Structure),
        other => Err(err(path, format!("unknown role `{other}` (slant, anti-invariant, structure)"))),
    }
}

fn span(path: &str, s: Option<&str>) -> Res<Span> {
    match s.unwrap_or("domain") {
        "domain" => Ok(Span::Domain),
        "ambient" => Ok(Span::Ambient),
        other => Err(err(path, format!("unknown span `{other}` (domain, ambient)"))),
    }
}

fn builtin_submanifold(path: &str, name: &str, b: &str) -> Res<SubPlan> {
    let ex = match b {
        "example-2" => example_2(),
        "example-3" => example_3(),
        other => return Err(err(path, format!("unknown built-in submanifold `{other}`"))),
    }
    .map_err(|e| err(path, e))?;
    let mut distributions: Vec<(Distribution, Option<f64>)> = ex.printed.iter().map(|d| (d.clone(), None)).collect();
    let theta = Some(ex.printed_cos.acos());
    distributions.push((ex.d_theta.clone(), theta));
    distributions.push((ex.d_perp.clone(), None));
    let k = distributions.len();
    Ok(SubPlan {
        name: name.to_string(),
        immersion: ex.immersion,
        distributions,
        pseudo_slant: Some((k - 2, k - 1)),
        metric: None,
    })
}

fn submanifold(i: usize, s: &SubSpec, amb: Option<&FramedStructure>) -> Res<SubPlan> {
    let path = format!("submanifold[{i}]");
    let mut plan = if let Some(b) = &s.builtin {
        if s.domain.is_some() || s.map.is_some() {
            return Err(err(&path, "a built-in submanifold takes no inline domain or map"));
        }
        builtin_submanifold(&path, &s.name, b)?
    } else {
        let amb = amb.ok_or_else(|| err(&path, "an inline submanifold needs an `ambient` section"))?;
        let d = s.domain.as_ref().ok_or_else(|| err(&path, "needs `domain`"))?;
        let domain = chart(&format!("{path}.domain"), d, &s.name)?;
        let map = s.map.as_ref().ok_or_else(|| err(&path, "needs `map`"))?;
        if map.len() != amb.dim() {
            return Err(err(format!("{path}.map"), format!("expected {} components, found {}", amb.dim(), map.len())));
        }
        let exprs =
            map.iter().enumerate().map(|(k, m)| expr(&format!("{path}.map[{k}]"), m)).collect::<Res<Vec<_>>>()?;
        let immersion = Immersion::new(domain, amb.clone(), exprs).map_err(|e| err(format!("{path}.map"), e))?;
        SubPlan { name: s.name.clone(), immersion, distributions: Vec::new(), pseudo_slant: None, metric: None }
    };
    let n = plan.immersion.ambient.dim();
    for (k, d) in s.distributions.iter().enumerate() {
        let dp = format!("{path}.distribution[{k}]");
        let fields = matrix(&format!("{dp}.fields"), &d.fields)?;
        let dist = Distribution::new(
            &d.name,
            role(&format!("{dp}.role"), &d.role)?,
            span(&format!("{dp}.span"), d.span.as_deref())?,
            fields,
            &plan.immersion.domain,
            n,
        )
        .map_err(|e| err(&dp, e))?;
        plan.distributions.push((dist, d.theta));
    }
    if let Some([a, b]) = &s.pseudo_slant {
        let find = |x: &str| {
            plan.distributions
                .iter()
                .rposition(|(d, _)| d.name == x)
                .ok_or_else(|| err(format!("{path}.pseudo_slant"), format!("no distribution named `{x}`")))
        };
        plan.pseudo_slant = Some((find(a)?, find(b)?));
    }
    if let Some(rows) = &s.metric {
        let m = plan.immersion.dim();
        if rows.len() != m || rows.iter().any(|r| r.len() != m) {
            return Err(err(format!("{path}.metric"), format!("expected a {m} x {m} matrix")));
        }
        let names = plan.immersion.domain.names();
        let mut out = Vec::new();
        for (a, row) in matrix(&format!("{path}.metric"), rows)?.iter().enumerate() {
            for (b, e) in row.iter().enumerate() {
                out.push(e.bind(&names).map_err(|e| err(format!("{path}.metric[{a}][{b}]"), e))?);
            }
        }
        plan.metric = Some(out);
    }
    Ok(plan)
}

fn warped(i: usize, w: &WarpSpec) -> Res<(String, WarpedProduct)> {
    let path = format!("warped[{i}]");
    let base = chart(&format!("{path}.base"), &w.base, "base")?;
    let fiber = chart(&format!("{path}.fiber"), &w.fiber, "fiber")?;
    let gb = matrix(&format!("{path}.base_metric"), &w.base_metric)?;
    let gf = matrix(&format!("{path}.fiber_metric"), &w.fiber_metric)?;
    let f = expr(&format!("{path}.warping"), &w.warping)?;
    let wp = WarpedProduct::new(base, fiber, &gb, &gf, &f).map_err(|e| err(&path, e))?;
    Ok((w.name.clone(), wp))
}

fn config(i: usize, c: &ConfigSpec, subs: &[SubPlan]) -> Res<InequalityConfig> {
    let path = format!("config[{i}]");
    let mut cfg = if let Some(b) = &c.builtin {
        let s = c.s.unwrap_or(1);
        if s == 0 {
            return Err(err(format!("{path}.s"), "synthesized configurations need s >= 1"));
        }
        match b.as_str() {
            "rotation" => rotation_config(s, c.theta, c.scale.unwrap_or(1.5)),
            "product" => product_config(s, c.theta, c.scale.unwrap_or(1.2)),
            other => {
                return Err(err(
                    format!("{path}.builtin"),
                    format!("unknown configuration `{other}` (rotation, product)"),
                ))
            }
        }
        .map_err(|e| err(&path, e))?
    } else {
        let need = |v: &Option<String>, what: &str| v.clone().ok_or_else(|| err(&path, format!("needs `{what}`")));
        let sub_name = need(&c.submanifold, "submanifold")?;
        let sub = subs
            .iter()
            .find(|s| s.name == sub_name)
            .ok_or_else(|| err(format!("{path}.submanifold"), format!("no submanifold named `{sub_name}`")))?;
        let order = match need(&c.order, "order")?.as_str() {
            "perp-theta" => Order::PerpTheta,
            "theta-perp" => Order::ThetaPerp,
            other => {
                return Err(err(format!("{path}.order"), format!("unknown order `{other}` (perp-theta, theta-perp)")))
            }
        };
        let dist = |what: &str, v: &Option<String>| -> Res<Distribution> {
            let n = need(v, what)?;
            sub.distributions
                .iter()
                .rev()
                .find(|(d, _)| d.name == n)
                .map(|(d, _)| d.clone())
                .ok_or_else(|| err(format!("{path}.{what}"), format!("no distribution named `{n}`")))
        };
        let f = expr(&format!("{path}.warping"), &need(&c.warping, "warping")?)?;
        InequalityConfig::new(
            &c.name,
            order,
            sub.immersion.clone(),
            dist("d_theta", &c.d_theta)?,
            dist("d_perp", &c.d_perp)?,
            &f,
            c.theta,
        )
        .map_err(|e| err(&path, e))?
    };
    cfg.name = c.name.clone();
    Ok(cfg)
}

impl ScenarioFile {
    pub fn parse(text: &str) -> Res<ScenarioFile> {
        toml::from_str(text).map_err(|e| err("", format!("scenario does not parse: {e}")))
    }

    /// Resolves names, parses expressions and checks dimensions.
    pub fn plan(&self, o: Overrides) -> Res<Plan> {
        if self.suites.is_empty() {
            return Err(err("suites", "the suite list is empty"));
        }
        let mut suites = Vec::new();
        for (i, s) in self.suites.iter().enumerate() {
            let suite = SUITES
                .iter()
                .find(|(n, _)| n == s)
                .map(|(_, k)| *k)
                .ok_or_else(|| err(format!("suites[{i}]"), format!("unknown suite `{s}`")))?;
            if !suites.contains(&suite) {
                suites.push(suite);
            }
        }
        let samples = o.samples.or(self.samples).unwrap_or(DEFAULT_SAMPLES);
        if samples == 0 {
            return Err(err("samples", "must be positive"));
        }
        let seed = o.seed.or(self.seed).unwrap_or(DEFAULT_SEED);
        let d = Tol::default();
        let t = &self.tolerances;
        let tol = Tol {
            algebraic: o.tol_alg.or(t.algebraic).unwrap_or(d.algebraic),
            curvature: o.tol_curv.or(t.curvature).unwrap_or(d.curvature),
            derivative: t.derivative.unwrap_or(d.derivative),
            warped: t.warped.unwrap_or(d.warped),
        };
        for (k, v) in [
            ("algebraic", tol.algebraic),
            ("curvature", tol.curvature),
            ("derivative", tol.derivative),
            ("warped", tol.warped),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(err(format!("tolerances.{k}"), "must be positive and finite"));
            }
        }
        let ambient = self.ambient.as_ref().map(ambient).transpose()?;
        let needs_ambient =
            [Suite::Structure, Suite::Normality, Suite::FundamentalForm, Suite::Kenmotsu, Suite::Identities];
        if ambient.is_none() {
            if let Some(s) = suites.iter().find(|s| needs_ambient.contains(s)) {
                let name = SUITES.iter().find(|(_, k)| k == s).unwrap().0;
                return Err(err("ambient", format!("suite `{name}` needs an ambient section")));
            }
        }
        let submanifolds = self
            .submanifolds
            .iter()
            .enumerate()
            .map(|(i, s)| submanifold(i, s, ambient.as_ref()))
            .collect::<Res<Vec<_>>>()?;
        let warped = self.warped.iter().enumerate().map(|(i, w)| warped(i, w)).collect::<Res<Vec<_>>>()?;
        let configs =
            self.configs.iter().enumerate().map(|(i, c)| config(i, c, &submanifolds)).collect::<Res<Vec<_>>>()?;
        let requires = |suite: Suite, ok: bool, what: &str| -> Res<()> {
            if suites.contains(&suite) && !ok {
                let name = SUITES.iter().find(|(_, k)| *k == suite).unwrap().0;
                return Err(err("suites", format!("suite `{name}` has no {what} to run on")));
            }
            Ok(())
        };
        requires(Suite::Submanifold, !submanifolds.is_empty(), "submanifold")?;
        requires(Suite::InducedMetric, submanifolds.iter().any(|s| s.metric.is_some()), "submanifold with `metric`")?;
        requires(
            Suite::Slant,
            submanifolds.iter().any(|s| s.distributions.iter().any(|(d, t)| d.role == Role::Slant && t.is_some())),
            "slant distribution with `theta`",
        )?;
        requires(
            Suite::PseudoSlant,
            submanifolds.iter().any(|s| s.pseudo_slant.is_some()),
            "submanifold with `pseudo_slant`",
        )?;
        requires(Suite::Lemma41, !warped.is_empty(), "warped declaration")?;
        requires(Suite::Lemmas, !configs.is_empty(), "configuration")?;
        requires(Suite::Theorems, !configs.is_empty(), "configuration")?;
        Ok(Plan { name: self.name.clone(), seed, samples, tol, suites, ambient, submanifolds, warped, configs })
    }
}

/// Parses and validates a scenario document.
pub fn load(text: &str, o: Overrides) -> Res<Plan> {
    ScenarioFile::parse(text)?.plan(o)
}
