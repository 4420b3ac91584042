//! Experiment configuration: TOML (or a JSON mirror) plus `key=value` overrides.

use crate::error::{CliError, CliResult};
use dimincr_core::cubature::{LsqOptions, RuleOptions, DEFAULT_M_CAP};
use dimincr_core::detect::local_cap;
use dimincr_core::index::DEFAULT_ENUMERATION_LIMIT;
use dimincr_core::rng::{derive, stream};
use dimincr_core::testfuncs::{cheb_analytic, periodic10d, sparse_random_function, KnownCoefficients};
use dimincr_core::{AlgorithmParams, Method, ProductBasis, SearchSpace, SpaceKind, Strategy};
use serde::Deserialize;
use serde_json::{Map, Value};
use std::path::Path;
use std::sync::Arc;

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// `fourier` or `chebyshev`; inferred for the built-in functions.
    #[serde(default)]
    pub basis: Option<String>,
    pub function: FunctionConfig,
    pub space: SpaceConfig,
    #[serde(default = "defaults::method")]
    pub method: String,
    #[serde(default = "defaults::strategy")]
    pub strategy: String,
    /// Sparsity sweep. Defaults to `[s_star]` for sparse functions.
    #[serde(default)]
    pub s: Vec<usize>,
    #[serde(default = "defaults::s_local_factor")]
    pub s_local_factor: f64,
    #[serde(default = "defaults::r")]
    pub r: usize,
    #[serde(default = "defaults::delta_plus")]
    pub delta_plus: f64,
    #[serde(default = "defaults::runs")]
    pub runs: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub output: Option<String>,
    /// Per-step statistics CSV.
    #[serde(default)]
    pub steps_output: Option<String>,
    #[serde(default)]
    pub recompute_final: bool,
    /// Fill the `seconds` column. Off by default so output is reproducible.
    #[serde(default)]
    pub timings: bool,
    /// Coefficient tolerance for a recovery to count as successful.
    #[serde(default = "defaults::success_linf")]
    pub success_linf: f64,
    #[serde(default = "defaults::enumeration_limit")]
    pub enumeration_limit: u64,
    #[serde(default = "defaults::lattice_m_cap")]
    pub lattice_m_cap: u64,
    #[serde(default)]
    pub lsq_tol: Option<f64>,
    #[serde(default)]
    pub lsq_max_iter: Option<usize>,
}

mod defaults {
    pub fn method() -> String {
        "r1l".into()
    }
    pub fn strategy() -> String {
        "one-by-one".into()
    }
    pub fn s_local_factor() -> f64 {
        1.2
    }
    pub fn r() -> usize {
        5
    }
    pub fn delta_plus() -> f64 {
        1e-12
    }
    pub fn runs() -> usize {
        1
    }
    pub fn success_linf() -> f64 {
        1e-8
    }
    pub fn enumeration_limit() -> u64 {
        super::DEFAULT_ENUMERATION_LIMIT
    }
    pub fn lattice_m_cap() -> u64 {
        super::DEFAULT_M_CAP
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum FunctionConfig {
    Name(String),
    Table(FunctionTable),
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionTable {
    pub kind: String,
    #[serde(default)]
    pub s_star: Option<usize>,
    /// Seed of the random coefficients; defaults to the master seed.
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub magnitude: Option<[f64; 2]>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceConfig {
    pub kind: String,
    pub d: usize,
    #[serde(default)]
    pub n: Option<f64>,
    #[serde(default)]
    pub big_n: Option<u32>,
    #[serde(default)]
    pub gamma: Option<Gamma>,
    #[serde(default)]
    pub p: Option<Number>,
    #[serde(default)]
    pub dtilde: Option<usize>,
    #[serde(default)]
    pub signed: Option<bool>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum Gamma {
    Scalar(f64),
    List(Vec<f64>),
}

/// A float that may also be spelled `"inf"`.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum Number {
    Float(f64),
    Text(String),
}

impl Number {
    fn value(&self) -> CliResult<f64> {
        match self {
            Number::Float(x) => Ok(*x),
            Number::Text(s) => match s.trim().to_ascii_lowercase().as_str() {
                "inf" | "infinity" | "+inf" => Ok(f64::INFINITY),
                t => t.parse().map_err(|_| CliError::Config(format!("not a number: {s:?}"))),
            },
        }
    }
}

fn toml_to_json(v: toml::Value) -> Value {
    match v {
        toml::Value::String(s) => Value::String(s),
        toml::Value::Integer(i) => Value::from(i),
        toml::Value::Float(f) if f.is_finite() => Value::from(f),
        toml::Value::Float(f) => Value::String(if f.is_nan() {
            "nan".into()
        } else if f > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }),
        toml::Value::Boolean(b) => Value::Bool(b),
        toml::Value::Datetime(d) => Value::String(d.to_string()),
        toml::Value::Array(a) => Value::Array(a.into_iter().map(toml_to_json).collect()),
        toml::Value::Table(t) => Value::Object(t.into_iter().map(|(k, v)| (k, toml_to_json(v))).collect()),
    }
}

/// Parses configuration text; JSON when `json` is set, TOML otherwise.
pub fn parse_text(text: &str, json: bool) -> CliResult<Value> {
    if json {
        serde_json::from_str(text).map_err(|e| CliError::Config(format!("JSON: {e}")))
    } else {
        let table: toml::Table = toml::from_str(text).map_err(|e| CliError::Config(format!("TOML: {e}")))?;
        Ok(toml_to_json(toml::Value::Table(table)))
    }
}

/// Applies `path.to.key=value`; the value is read as a TOML literal, falling
/// back to a bare string.
pub fn apply_override(root: &mut Value, spec: &str) -> CliResult<()> {
    let (path, raw) = spec
        .split_once('=')
        .ok_or_else(|| CliError::Config(format!("override {spec:?} is not key=value")))?;
    let value = match toml::from_str::<toml::Table>(&format!("v = {raw}")) {
        Ok(mut t) => toml_to_json(t.remove("v").expect("parsed key")),
        Err(_) => Value::String(raw.to_string()),
    };
    let keys: Vec<&str> = path.trim().split('.').collect();
    let mut cur = root;
    for key in &keys[..keys.len() - 1] {
        let obj = cur
            .as_object_mut()
            .ok_or_else(|| CliError::Config(format!("cannot descend into {key:?}")))?;
        cur = obj.entry(key.to_string()).or_insert_with(|| Value::Object(Map::new()));
        // A string-valued function becomes a table when a field is overridden.
        if let Value::String(name) = cur {
            let mut m = Map::new();
            m.insert("kind".into(), Value::String(name.clone()));
            *cur = Value::Object(m);
        }
    }
    cur.as_object_mut()
        .ok_or_else(|| CliError::Config(format!("cannot set {path:?}")))?
        .insert(keys[keys.len() - 1].to_string(), value);
    Ok(())
}

impl ExperimentConfig {
    pub fn from_value(v: Value) -> CliResult<Self> {
        serde_json::from_value(v).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn from_text(text: &str, json: bool, overrides: &[String]) -> CliResult<Self> {
        let mut v = parse_text(text, json)?;
        for o in overrides {
            apply_override(&mut v, o)?;
        }
        Self::from_value(v)
    }

    pub fn load(path: &Path, overrides: &[String]) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        let json = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"));
        Self::from_text(&text, json, overrides)
    }
}

/// Which test function to draw per run.
#[derive(Clone, Debug)]
pub enum FunctionSpec {
    Periodic10d,
    ChebAnalytic,
    SparseRandom { s_star: usize, seed: u64, range: (f64, f64) },
}

/// A validated configuration with its constructed objects.
#[derive(Clone, Debug)]
pub struct Experiment {
    pub config: ExperimentConfig,
    pub basis: ProductBasis,
    pub space: SearchSpace,
    pub method: Method,
    pub strategy: Strategy,
    pub function: FunctionSpec,
    pub s_values: Vec<usize>,
}

fn config_err<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Config(msg.into()))
}

fn build_space(c: &SpaceConfig, fourier: bool) -> CliResult<SearchSpace> {
    let gamma = match &c.gamma {
        None => vec![],
        Some(Gamma::Scalar(g)) => vec![*g],
        Some(Gamma::List(v)) => v.clone(),
    };
    let signed = c.signed.unwrap_or(fourier);
    if signed && !fourier {
        return config_err("a signed search space needs the Fourier basis");
    }
    let need_n = || c.n.ok_or_else(|| CliError::Config(format!("space kind {:?} needs n", c.kind)));
    let kind = match c.kind.as_str() {
        "full-grid" => SpaceKind::FullGrid,
        "hyperbolic-cross" => SpaceKind::HyperbolicCross,
        "lp-ball" => SpaceKind::LpBall {
            p: c.p.as_ref().ok_or_else(|| CliError::Config("lp-ball needs p".into()))?.value()?,
        },
        "symmetric-hyperbolic-cross" => {
            if !fourier {
                return config_err("the symmetric hyperbolic cross needs the Fourier basis");
            }
            SpaceKind::SymmetricHyperbolicCross {
                big_n: c.big_n.ok_or_else(|| CliError::Config("symmetric-hyperbolic-cross needs big_n".into()))?,
            }
        }
        other => return config_err(format!("unknown space kind {other:?}")),
    };
    let n = match kind {
        SpaceKind::SymmetricHyperbolicCross { .. } => 0.0,
        _ => need_n()?,
    };
    SearchSpace::new(kind, c.d, n, gamma, c.dtilde, signed).map_err(|e| CliError::from_setup(&e))
}

impl ExperimentConfig {
    /// Validates every field and constructs the experiment objects.
    pub fn build(&self) -> CliResult<Experiment> {
        let (fkind, table) = match &self.function {
            FunctionConfig::Name(n) => (n.as_str(), None),
            FunctionConfig::Table(t) => (t.kind.as_str(), Some(t)),
        };
        let function = match fkind {
            "periodic10d" => FunctionSpec::Periodic10d,
            "cheb-analytic" => FunctionSpec::ChebAnalytic,
            "sparse-random" => {
                let t = table.ok_or_else(|| CliError::Config("sparse-random needs s_star".into()))?;
                let s_star = t.s_star.ok_or_else(|| CliError::Config("sparse-random needs s_star".into()))?;
                let [lo, hi] = t.magnitude.unwrap_or([1.0, 10.0]);
                if !(lo > 0.0 && hi >= lo) {
                    return config_err("magnitude must satisfy 0 < lo ≤ hi");
                }
                FunctionSpec::SparseRandom {
                    s_star,
                    seed: t.seed.unwrap_or(self.seed),
                    range: (lo, hi),
                }
            }
            other => return config_err(format!("unknown function {other:?}")),
        };
        let basis_name = match (&self.basis, &function) {
            (Some(b), _) => b.as_str(),
            (None, FunctionSpec::Periodic10d) => "fourier",
            (None, FunctionSpec::ChebAnalytic) => "chebyshev",
            (None, FunctionSpec::SparseRandom { .. }) => return config_err("sparse-random needs an explicit basis"),
        };
        let d = self.space.d;
        let fourier = match basis_name {
            "fourier" => true,
            "chebyshev" => false,
            other => return config_err(format!("unknown basis {other:?}")),
        };
        match (&function, fourier, d) {
            (FunctionSpec::Periodic10d, true, 10) | (FunctionSpec::ChebAnalytic, false, 9) => {}
            (FunctionSpec::Periodic10d, ..) => return config_err("periodic10d needs the Fourier basis and d = 10"),
            (FunctionSpec::ChebAnalytic, ..) => return config_err("cheb-analytic needs the Chebyshev basis and d = 9"),
            _ => {}
        }
        let basis = if fourier { ProductBasis::fourier(d) } else { ProductBasis::chebyshev(d) };
        let space = build_space(&self.space, fourier)?;
        let method = Method::parse(&self.method).map_err(|e| CliError::Config(e.to_string()))?;
        if matches!(method, Method::R1l) && !fourier {
            return config_err("method r1l needs the Fourier basis");
        }
        let strategy = Strategy::parse(&self.strategy).map_err(|e| CliError::Config(e.to_string()))?;
        let s_values = match (&function, self.s.is_empty()) {
            (FunctionSpec::SparseRandom { s_star, .. }, true) => vec![*s_star],
            (_, true) => return config_err("s must list at least one sparsity"),
            _ => self.s.clone(),
        };
        if s_values.contains(&0) {
            return config_err("every s must be positive");
        }
        if !(self.s_local_factor >= 1.0) {
            return config_err("s_local_factor must be at least 1");
        }
        if self.runs == 0 || self.r == 0 {
            return config_err("runs and r must be positive");
        }
        if !(self.delta_plus > 0.0) || !(self.success_linf >= 0.0) {
            return config_err("delta_plus must be positive and success_linf nonnegative");
        }
        Ok(Experiment {
            config: self.clone(),
            basis,
            space,
            method,
            strategy,
            function,
            s_values,
        })
    }
}

impl Experiment {
    /// Seed of repetition `run` at sparsity `s`, independent of the sweep layout.
    pub fn run_seed(&self, s: usize, run: usize) -> u64 {
        derive(self.config.seed, &[s as u64, run as u64])
    }

    /// The function of repetition `run`; sparse functions differ per run but
    /// not across the `s` sweep.
    pub fn function(&self, run: usize) -> CliResult<Arc<dyn KnownCoefficients>> {
        Ok(match &self.function {
            FunctionSpec::Periodic10d => Arc::new(periodic10d()),
            FunctionSpec::ChebAnalytic => Arc::new(cheb_analytic()),
            FunctionSpec::SparseRandom { s_star, seed, range } => {
                let mut rng = stream(*seed, &[run as u64]);
                let f = sparse_random_function(
                    &self.basis,
                    &self.space,
                    *s_star,
                    *range,
                    self.config.enumeration_limit,
                    &mut rng,
                )
                .map_err(|e| CliError::from_setup(&e))?;
                Arc::new(f)
            }
        })
    }

    pub fn params(&self, s: usize, run: usize) -> AlgorithmParams {
        let c = &self.config;
        let mut p = AlgorithmParams::new(s);
        p.s_local = local_cap(s, c.s_local_factor);
        p.delta_plus = c.delta_plus;
        p.r = c.r;
        p.strategy = self.strategy;
        p.method = self.method.clone();
        p.recompute_final = c.recompute_final;
        p.seed = self.run_seed(s, run);
        p.enumeration_limit = c.enumeration_limit;
        let mut lsq = LsqOptions::default();
        if let Some(t) = c.lsq_tol {
            lsq.tol = t;
        }
        if let Some(m) = c.lsq_max_iter {
            lsq.max_iter = m;
        }
        p.rule = RuleOptions {
            lattice_m_cap: c.lattice_m_cap,
            lsq,
        };
        p
    }
}
