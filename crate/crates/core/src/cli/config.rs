use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;

use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

use super::CliError;

/// Batch commands.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, clap::ValueEnum)]
pub enum Command {
    Spectrum,
    TwistedMomentum,
    Defect,
    Current,
    Evolve,
    Tail,
    Dichotomy,
    FockCheck,
    WeylResidual,
    Kernels,
    Lemma2,
    Lemma2Sweep,
    Converge,
    LiebLiniger,
    LlScaling,
}

impl Command {
    pub const ALL: [Command; 15] = [
        Command::Spectrum,
        Command::TwistedMomentum,
        Command::Defect,
        Command::Current,
        Command::Evolve,
        Command::Tail,
        Command::Dichotomy,
        Command::FockCheck,
        Command::WeylResidual,
        Command::Kernels,
        Command::Lemma2,
        Command::Lemma2Sweep,
        Command::Converge,
        Command::LiebLiniger,
        Command::LlScaling,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Spectrum => "spectrum",
            Command::TwistedMomentum => "twisted-momentum",
            Command::Defect => "defect",
            Command::Current => "current",
            Command::Evolve => "evolve",
            Command::Tail => "tail",
            Command::Dichotomy => "dichotomy",
            Command::FockCheck => "fock-check",
            Command::WeylResidual => "weyl-residual",
            Command::Kernels => "kernels",
            Command::Lemma2 => "lemma2",
            Command::Lemma2Sweep => "lemma2-sweep",
            Command::Converge => "converge",
            Command::LiebLiniger => "lieb-liniger",
            Command::LlScaling => "ll-scaling",
        }
    }

    pub fn from_name(name: &str) -> Option<Command> {
        Command::ALL.into_iter().find(|c| c.name() == name)
    }
}

/// Value type of a configuration key.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Kind {
    Number,
    /// Finite and strictly positive.
    Positive,
    /// Non-negative integer.
    Integer,
    Bool,
    Choice(&'static [&'static str]),
    /// Non-empty list of finite numbers.
    NumberList,
    /// Non-empty list of positive numbers.
    PositiveList,
    /// Non-empty list of non-negative integers.
    IntegerList,
}

impl Kind {
    fn describe(&self) -> String {
        match self {
            Kind::Number => "number".into(),
            Kind::Positive => "positive number".into(),
            Kind::Integer => "integer".into(),
            Kind::Bool => "boolean".into(),
            Kind::Choice(options) => format!("one of {}", options.join(", ")),
            Kind::NumberList => "list of numbers".into(),
            Kind::PositiveList => "list of positive numbers".into(),
            Kind::IntegerList => "list of integers".into(),
        }
    }

    fn check(&self, value: &Value) -> Result<(), String> {
        let finite = |v: &Value| v.as_f64().filter(|x| x.is_finite());
        let positive = |v: &Value| finite(v).filter(|x| *x > 0.0);
        let list = |v: &Value, ok: &dyn Fn(&Value) -> bool| match v.as_array() {
            Some(items) if !items.is_empty() => items.iter().all(ok),
            _ => false,
        };
        let ok = match self {
            Kind::Number => finite(value).is_some(),
            Kind::Positive => positive(value).is_some(),
            Kind::Integer => value.as_u64().is_some(),
            Kind::Bool => value.is_boolean(),
            Kind::Choice(options) => value.as_str().is_some_and(|s| options.contains(&s)),
            Kind::NumberList => list(value, &|v| finite(v).is_some()),
            Kind::PositiveList => list(value, &|v| positive(v).is_some()),
            Kind::IntegerList => list(value, &|v| v.as_u64().is_some()),
        };
        if ok {
            Ok(())
        } else {
            Err(format!("expected {}, got {value}", self.describe()))
        }
    }
}

/// One documented configuration key.
#[derive(Debug, Clone, Copy)]
pub struct Key {
    pub name: &'static str,
    pub kind: Kind,
    /// JSON literal, or `None` when the key is required.
    pub default: Option<&'static str>,
    pub doc: &'static str,
}

pub(crate) const fn key(name: &'static str, kind: Kind, default: &'static str, doc: &'static str) -> Key {
    Key {
        name,
        kind,
        default: Some(default),
        doc,
    }
}

pub(crate) const fn required(name: &'static str, kind: Kind, doc: &'static str) -> Key {
    Key {
        name,
        kind,
        default: None,
        doc,
    }
}

/// Parsed and validated parameters with defaults filled in.
#[derive(Debug, Clone, PartialEq)]
pub struct Params {
    values: BTreeMap<String, Value>,
}

impl Params {
    fn get(&self, name: &str) -> &Value {
        self.values
            .get(name)
            .unwrap_or_else(|| panic!("parameter {name} is not declared for this command"))
    }

    pub fn f64(&self, name: &str) -> f64 {
        self.get(name).as_f64().expect("validated number")
    }

    pub fn usize(&self, name: &str) -> usize {
        self.get(name).as_u64().expect("validated integer") as usize
    }

    pub fn bool(&self, name: &str) -> bool {
        self.get(name).as_bool().expect("validated boolean")
    }

    pub fn str(&self, name: &str) -> &str {
        self.get(name).as_str().expect("validated string")
    }

    pub fn f64_list(&self, name: &str) -> Vec<f64> {
        let items = self.get(name).as_array().expect("validated list");
        items.iter().map(|v| v.as_f64().expect("validated number")).collect()
    }

    pub fn usize_list(&self, name: &str) -> Vec<usize> {
        let items = self.get(name).as_array().expect("validated list");
        items.iter().map(|v| v.as_u64().expect("validated integer") as usize).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &Value)> {
        self.values.iter()
    }
}

/// A run: command, validated parameters, output directory and seed.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub parameters: Params,
    pub output_dir: Option<PathBuf>,
    pub seed: u64,
}

impl RunConfig {
    /// Parse a JSON document of flat keys. `command` may be repeated in the
    /// document but must then agree.
    pub fn from_json(command: Command, text: &str) -> Result<Self, CliError> {
        let doc: Value = serde_json::from_str(text).map_err(|e| CliError::config(format!("config is not JSON: {e}")))?;
        let Value::Object(map) = doc else {
            return Err(CliError::config("config must be a JSON object"));
        };
        Self::from_map(command, map)
    }

    pub fn from_map(command: Command, mut map: Map<String, Value>) -> Result<Self, CliError> {
        if let Some(named) = map.remove("command") {
            if named.as_str() != Some(command.name()) {
                return Err(CliError::config(format!(
                    "config is for command {named}, invoked as {}",
                    command.name()
                )));
            }
        }
        let seed = match map.remove("seed") {
            None => 0,
            Some(v) => v
                .as_u64()
                .ok_or_else(|| CliError::config(format!("seed must be a non-negative integer, got {v}")))?,
        };
        let output_dir = match map.remove("output_dir") {
            None => None,
            Some(Value::String(s)) => Some(PathBuf::from(s)),
            Some(v) => return Err(CliError::config(format!("output_dir must be a string, got {v}"))),
        };
        let keys = super::commands::keys(command);
        let mut values = BTreeMap::new();
        for (name, value) in map {
            let spec = keys.iter().find(|k| k.name == name).ok_or_else(|| {
                CliError::config(format!("unknown key {name:?} for command {}", command.name()))
            })?;
            spec.kind
                .check(&value)
                .map_err(|e| CliError::config(format!("key {name}: {e}")))?;
            values.insert(name, value);
        }
        for spec in keys {
            if values.contains_key(spec.name) {
                continue;
            }
            let default = spec
                .default
                .ok_or_else(|| CliError::config(format!("missing required key {}", spec.name)))?;
            values.insert(spec.name.to_string(), serde_json::from_str(default).expect("default is JSON"));
        }
        Ok(RunConfig {
            command,
            parameters: Params { values },
            output_dir,
            seed,
        })
    }

    /// Canonical JSON of command, seed and resolved parameters. The output
    /// directory is left out so the hash does not depend on where a run
    /// writes.
    pub fn canonical(&self) -> String {
        let mut map = Map::new();
        map.insert("command".into(), Value::from(self.command.name()));
        map.insert("seed".into(), Value::from(self.seed));
        let params: Map<String, Value> = self.parameters.iter().map(|(k, v)| (k.clone(), v.clone())).collect();
        map.insert("parameters".into(), Value::Object(params));
        serde_json::to_string(&Value::Object(map)).expect("serializable")
    }

    /// SHA-256 of [`canonical`](RunConfig::canonical), hex encoded.
    pub fn hash(&self) -> String {
        let digest = Sha256::digest(self.canonical().as_bytes());
        digest.iter().fold(String::new(), |mut s, b| {
            let _ = write!(s, "{b:02x}");
            s
        })
    }
}

/// Markdown reference of every command's keys, generated from the same
/// tables the parser validates against.
pub fn config_reference() -> String {
    let mut out = String::from("# Configuration reference\n\n");
    out.push_str(
        "Every run reads one JSON object of flat keys. Three keys are shared by all commands:\n\n\
         | key | type | default | meaning |\n|---|---|---|---|\n\
         | `seed` | integer | `0` | seed for randomized inputs |\n\
         | `output_dir` | string | `out` | directory for results; `--out` overrides it |\n\
         | `command` | string | | optional; must match the invoked command |\n\n\
         Unknown keys are rejected.\n",
    );
    for command in Command::ALL {
        let _ = write!(out, "\n## {}\n\n{}\n\n", command.name(), super::commands::summary(command));
        let _ = writeln!(out, "Columns: `{}`\n", super::commands::columns(command).join(","));
        out.push_str("| key | type | default | meaning |\n|---|---|---|---|\n");
        for k in super::commands::keys(command) {
            let default = match k.default {
                Some(d) => format!("`{d}`"),
                None => "required".into(),
            };
            let _ = writeln!(out, "| `{}` | {} | {} | {} |", k.name, k.kind.describe(), default, k.doc);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_parse_and_validate() {
        for command in Command::ALL {
            for k in super::super::commands::keys(command) {
                if let Some(d) = k.default {
                    let v: Value = serde_json::from_str(d).unwrap();
                    k.kind.check(&v).unwrap_or_else(|e| panic!("{} {}: {e}", command.name(), k.name));
                }
            }
        }
    }

    #[test]
    fn rejects_unknown_and_bad_keys() {
        assert!(RunConfig::from_json(Command::Spectrum, r#"{"length": 1, "bogus": 1}"#).is_err());
        assert!(RunConfig::from_json(Command::Spectrum, r#"{"length": -1}"#).is_err());
        assert!(RunConfig::from_json(Command::Spectrum, r#"{"length": 1, "bc": "soft"}"#).is_err());
        assert!(RunConfig::from_json(Command::Spectrum, r#"{"length": 1, "command": "tail"}"#).is_err());
        assert!(RunConfig::from_json(Command::Spectrum, r#"[1]"#).is_err());
        let ok = RunConfig::from_json(Command::Spectrum, r#"{"length": 1, "command": "spectrum", "seed": 4}"#).unwrap();
        assert_eq!(ok.seed, 4);
        assert_eq!(ok.parameters.str("bc"), "dirichlet");
    }

    #[test]
    fn hash_ignores_key_order_and_output_dir() {
        let a = RunConfig::from_json(Command::Kernels, r#"{"c": 3, "m0": 2, "output_dir": "a"}"#).unwrap();
        let b = RunConfig::from_json(Command::Kernels, r#"{"m0": 2, "c": 3}"#).unwrap();
        assert_eq!(a.hash(), b.hash());
        assert_eq!(a.hash().len(), 64);
        let c = RunConfig::from_json(Command::Kernels, r#"{"m0": 2, "c": 4}"#).unwrap();
        assert_ne!(a.hash(), c.hash());
    }
}
