use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{builder::PossibleValuesParser, Arg, ArgAction, ArgMatches};
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Environment variable consulted for the default output directory.
pub const OUT_DIR_ENV: &str = "DFSQ_OUT_DIR";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ParamValue {
    Bool(bool),
    Int(i64),
    Float(f64),
    Text(String),
    FloatList(Vec<f64>),
}

#[derive(Debug, Clone, Copy)]
pub enum ParamKind {
    Flag,
    Int,
    Float,
    Text(&'static [&'static str]),
    /// Free text, e.g. a path.
    AnyText,
    FloatList,
}

/// One command-line parameter. Parameters without a default are required.
#[derive(Debug, Clone, Copy)]
pub struct ParamSpec {
    pub name: &'static str,
    pub kind: ParamKind,
    pub default: Option<&'static str>,
    pub help: &'static str,
}

impl ParamSpec {
    pub const fn new(name: &'static str, kind: ParamKind, default: Option<&'static str>, help: &'static str) -> Self {
        Self { name, kind, default, help }
    }

    pub(crate) fn to_arg(self) -> Arg {
        let mut arg = Arg::new(self.name).long(self.name).help(self.help);
        arg = match self.kind {
            ParamKind::Flag => return arg.action(ArgAction::SetTrue),
            ParamKind::Int => arg.value_parser(clap::value_parser!(i64)),
            ParamKind::Float => arg.value_parser(clap::value_parser!(f64)).allow_negative_numbers(true),
            ParamKind::Text(choices) => arg.value_parser(PossibleValuesParser::new(choices)),
            ParamKind::AnyText => arg,
            ParamKind::FloatList => arg
                .value_parser(clap::value_parser!(f64))
                .value_delimiter(',')
                .num_args(1..)
                .allow_negative_numbers(true),
        };
        match self.default {
            Some(d) => arg.default_value(d),
            None => arg.required(true),
        }
    }

    pub(crate) fn resolve(self, m: &ArgMatches) -> Option<ParamValue> {
        Some(match self.kind {
            ParamKind::Flag => ParamValue::Bool(m.get_flag(self.name)),
            ParamKind::Int => ParamValue::Int(*m.get_one::<i64>(self.name)?),
            ParamKind::Float => ParamValue::Float(*m.get_one::<f64>(self.name)?),
            ParamKind::Text(_) | ParamKind::AnyText => ParamValue::Text(m.get_one::<String>(self.name)?.clone()),
            ParamKind::FloatList => ParamValue::FloatList(m.get_many::<f64>(self.name)?.cloned().collect()),
        })
    }
}

/// Fully resolved run: every parameter with its effective value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: String,
    pub params: BTreeMap<String, ParamValue>,
    pub seed: u64,
    pub output_dir: PathBuf,
    pub format: Format,
}

impl RunConfig {
    fn get(&self, name: &str) -> Result<&ParamValue, CliError> {
        self.params.get(name).ok_or_else(|| CliError::Usage(format!("missing parameter --{name}")))
    }

    pub fn float(&self, name: &str) -> Result<f64, CliError> {
        match self.get(name)? {
            ParamValue::Float(x) => Ok(*x),
            ParamValue::Int(x) => Ok(*x as f64),
            other => Err(CliError::Usage(format!("--{name} is not a number: {other:?}"))),
        }
    }

    pub fn int(&self, name: &str) -> Result<i64, CliError> {
        match self.get(name)? {
            ParamValue::Int(x) => Ok(*x),
            other => Err(CliError::Usage(format!("--{name} is not an integer: {other:?}"))),
        }
    }

    /// Integer parameter that must be at least `min`.
    pub fn count(&self, name: &str, min: i64) -> Result<usize, CliError> {
        let v = self.int(name)?;
        if v < min {
            return Err(CliError::Usage(format!("--{name} must be at least {min}, got {v}")));
        }
        Ok(v as usize)
    }

    pub fn text(&self, name: &str) -> Result<&str, CliError> {
        match self.get(name)? {
            ParamValue::Text(s) => Ok(s),
            other => Err(CliError::Usage(format!("--{name} is not text: {other:?}"))),
        }
    }

    pub fn flag(&self, name: &str) -> Result<bool, CliError> {
        match self.get(name)? {
            ParamValue::Bool(b) => Ok(*b),
            other => Err(CliError::Usage(format!("--{name} is not a flag: {other:?}"))),
        }
    }

    pub fn floats(&self, name: &str) -> Result<Vec<f64>, CliError> {
        match self.get(name)? {
            ParamValue::FloatList(v) => Ok(v.clone()),
            ParamValue::Float(x) => Ok(vec![*x]),
            other => Err(CliError::Usage(format!("--{name} is not a list of numbers: {other:?}"))),
        }
    }
}

/// `points` evenly spaced values from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    match points {
        0 => vec![],
        1 => vec![lo],
        _ => (0..points).map(|i| lo + (hi - lo) * i as f64 / (points - 1) as f64).collect(),
    }
}
