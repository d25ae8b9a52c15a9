//! Scene files: one input object plus an optional assignment and options.

use logsod::invariants::Assignment;
use logsod::monoid::ToricMonoid;
use logsod::psod::OrderKind;
use logsod::strata::{NcComplex, SimplicialChart, SncComplex};
use serde::Deserialize;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    #[serde(default)]
    pub level: Option<LevelArg>,
    #[serde(default)]
    pub order: Option<OrderKind>,
    #[serde(default)]
    pub prime_to: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
#[serde(untagged)]
pub enum LevelArg {
    One(u64),
    Many(Vec<u64>),
}

impl std::str::FromStr for LevelArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Result<Vec<u64>, _> = s.split(',').map(|p| p.trim().parse::<u64>()).collect();
        match parts {
            Ok(v) if v.len() == 1 => Ok(LevelArg::One(v[0])),
            Ok(v) => Ok(LevelArg::Many(v)),
            Err(_) => Err(format!(
                "expected a level or a comma-separated list, got {s:?}"
            )),
        }
    }
}

impl LevelArg {
    /// One entry per component, broadcasting a single value.
    pub fn per_component(&self, n: usize) -> Vec<u64> {
        match self {
            LevelArg::One(r) => vec![*r; n],
            LevelArg::Many(v) => v.clone(),
        }
    }

    pub fn single(&self) -> Option<u64> {
        match self {
            LevelArg::One(r) => Some(*r),
            LevelArg::Many(v) if v.len() == 1 => Some(v[0]),
            LevelArg::Many(_) => None,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScene {
    #[serde(default)]
    monoid: Option<ToricMonoid>,
    #[serde(default)]
    snc: Option<SncComplex>,
    #[serde(default)]
    nc: Option<NcComplex>,
    #[serde(default)]
    simplicial: Option<SimplicialChart>,
    #[serde(default)]
    assignment: Option<Assignment>,
    #[serde(default)]
    options: Options,
}

#[derive(Debug)]
pub enum Input {
    Monoid(ToricMonoid),
    Snc(SncComplex),
    Nc(NcComplex),
    Simplicial(SimplicialChart),
}

impl Input {
    pub fn kind(&self) -> &'static str {
        match self {
            Input::Monoid(_) => "monoid",
            Input::Snc(_) => "snc",
            Input::Nc(_) => "nc",
            Input::Simplicial(_) => "simplicial",
        }
    }
}

#[derive(Debug)]
pub struct Scene {
    pub input: Input,
    pub assignment: Option<Assignment>,
    pub options: Options,
}

pub fn parse(text: &str) -> Result<Scene, String> {
    let raw: RawScene = serde_json::from_str(text).map_err(|e| e.to_string())?;
    let mut inputs = Vec::new();
    if let Some(m) = raw.monoid {
        inputs.push(Input::Monoid(m));
    }
    if let Some(c) = raw.snc {
        inputs.push(Input::Snc(c));
    }
    if let Some(c) = raw.nc {
        inputs.push(Input::Nc(c));
    }
    if let Some(c) = raw.simplicial {
        inputs.push(Input::Simplicial(c));
    }
    if inputs.len() != 1 {
        return Err(format!(
            "a scene needs exactly one of \"monoid\", \"snc\", \"nc\", \"simplicial\"; found {}",
            inputs.len()
        ));
    }
    Ok(Scene {
        input: inputs.pop().expect("one input"),
        assignment: raw.assignment,
        options: raw.options,
    })
}
