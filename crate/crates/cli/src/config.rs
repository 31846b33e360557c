//! Flat `key = value` run configuration. `[section]` headers are accepted
//! for readability and ignored; `#` starts a comment.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::output::num;

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: unknown key `{key}` for workflow {workflow}")]
    UnknownKey { line: usize, key: String, workflow: String },
    #[error("line {line}: duplicate key `{key}`")]
    Duplicate { line: usize, key: String },
    #[error("line {line}: missing required key `{key}`")]
    Missing { line: usize, key: String },
    #[error("line {line}: invalid value for `{key}`: {reason}")]
    Invalid { line: usize, key: String, reason: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Workflow {
    ExpandPotential,
    EffectiveHamiltonian,
    Spectrum,
    KerrOscillations,
    CubicPhase,
    OptimizeG3,
}

impl Workflow {
    pub const ALL: [Workflow; 6] = [
        Workflow::ExpandPotential,
        Workflow::EffectiveHamiltonian,
        Workflow::Spectrum,
        Workflow::KerrOscillations,
        Workflow::CubicPhase,
        Workflow::OptimizeG3,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Workflow::ExpandPotential => "expand-potential",
            Workflow::EffectiveHamiltonian => "effective-hamiltonian",
            Workflow::Spectrum => "spectrum",
            Workflow::KerrOscillations => "kerr-oscillations",
            Workflow::CubicPhase => "cubic-phase",
            Workflow::OptimizeG3 => "optimize-g3",
        }
    }

    fn keys(self) -> &'static [Key] {
        match self {
            Workflow::ExpandPotential => EXPAND_POTENTIAL,
            Workflow::EffectiveHamiltonian => EFFECTIVE_HAMILTONIAN,
            Workflow::Spectrum => SPECTRUM,
            Workflow::KerrOscillations => KERR_OSCILLATIONS,
            Workflow::CubicPhase => CUBIC_PHASE,
            Workflow::OptimizeG3 => OPTIMIZE_G3,
        }
    }
}

impl fmt::Display for Workflow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Workflow {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Workflow::ALL
            .into_iter()
            .find(|w| w.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Workflow::ALL.iter().map(|w| w.name()).collect();
                format!("unknown workflow `{s}` (expected one of {})", names.join(", "))
            })
    }
}

/// Value kinds. Frequencies are written in Hz.
#[derive(Clone, Copy, Debug, PartialEq)]
enum Kind {
    /// Frequency in Hz that must be positive.
    PositiveFrequency,
    /// Coupling or detuning in Hz, any sign.
    Frequency,
    /// Coupling in Hz or `auto-kerr-free`.
    CouplingOrAuto,
    /// Comma-separated couplings in Hz, entries may be `auto-kerr-free`.
    CouplingList,
    Real { min: f64, max: f64 },
    Integer { min: i64, max: i64 },
    Choice(&'static [&'static str]),
    Text,
}

#[derive(Clone, Copy)]
struct Key {
    name: &'static str,
    kind: Kind,
    /// `None` marks a required key.
    default: Option<&'static str>,
}

/// Default of an optional key with no value.
const UNSET: &str = "";

const fn key(name: &'static str, kind: Kind, default: Option<&'static str>) -> Key {
    Key { name, kind, default }
}

const ORDER: Kind = Kind::Integer { min: 1, max: 6 };
const DIM: Kind = Kind::Integer { min: 16, max: 4096 };
const POSITIVE: Kind = Kind::Real {
    min: f64::MIN_POSITIVE,
    max: f64::INFINITY,
};
const ANY: Kind = Kind::Real {
    min: f64::NEG_INFINITY,
    max: f64::INFINITY,
};

const AVERAGING: [Key; 3] = [
    key("samples_per_period", Kind::Integer { min: 4, max: 4096 }, Some("32")),
    key("window_periods", POSITIVE, Some("4")),
    key("polyorder", Kind::Integer { min: 0, max: 12 }, Some("3")),
];

const EXPAND_POTENTIAL: &[Key] = &[
    key("device", Kind::Choice(&["snail", "ats"]), Some("snail")),
    key("alpha", Kind::Real { min: 0.0, max: 1.0 }, None),
    key("junctions", Kind::Integer { min: 1, max: 64 }, Some("3")),
    key("e_j", Kind::PositiveFrequency, None),
    key("phi_zpf", POSITIVE, None),
    key("phi_ext", ANY, Some("0")),
    key("phi_sigma", ANY, Some("0")),
    key("phi_delta", ANY, Some("0")),
    key("taylor_order", Kind::Integer { min: 6, max: 16 }, Some("6")),
    key("scan_axis", Kind::Choice(&["none", "external", "sigma", "delta"]), Some("none")),
    key("scan_min", ANY, Some("-3.141592653589793")),
    key("scan_max", ANY, Some("3.141592653589793")),
    key("scan_points", Kind::Integer { min: 2, max: 1_000_000 }, Some("201")),
    key("f_r", Kind::PositiveFrequency, None),
];

const EFFECTIVE_HAMILTONIAN: &[Key] = &[
    key("order", ORDER, Some("2")),
    key("v", Kind::Text, Some("g3*(a+ad)^3 + g4*(a+ad)^4")),
    key("f_r", Kind::PositiveFrequency, Some(UNSET)),
    key("g3", Kind::Frequency, Some(UNSET)),
    key("g4", Kind::Frequency, Some(UNSET)),
];

const SPECTRUM: &[Key] = &[
    key("f_r", Kind::PositiveFrequency, None),
    key("g4", Kind::Frequency, None),
    key("g3", Kind::CouplingOrAuto, Some("auto-kerr-free")),
    key("dim", DIM, Some("160")),
    key("order", ORDER, Some("4")),
];

const KERR_OSCILLATIONS: &[Key] = &[
    key("f_r", Kind::PositiveFrequency, None),
    key("g3", Kind::CouplingList, None),
    key("g4", Kind::CouplingList, None),
    key("revival_g4", Kind::PositiveFrequency, Some(UNSET)),
    key("alpha0", POSITIVE, Some("2")),
    key("dim", DIM, Some("60")),
    key("t_end_revivals", POSITIVE, Some("1")),
    AVERAGING[0],
    AVERAGING[1],
    AVERAGING[2],
];

const OPTIMIZE_G3: &[Key] = &[
    key("f_r", Kind::PositiveFrequency, None),
    key("g4", Kind::Frequency, None),
    key("g3_min", Kind::Frequency, None),
    key("g3_max", Kind::Frequency, None),
    key("g3_points", Kind::Integer { min: 3, max: 100_000 }, Some("13")),
    key("alpha0", POSITIVE, Some("2")),
    key("dim", DIM, Some("60")),
    key("t_revivals", POSITIVE, Some("1")),
    AVERAGING[0],
    AVERAGING[1],
    AVERAGING[2],
];

const CUBIC_PHASE: &[Key] = &[
    key("f_r", Kind::PositiveFrequency, None),
    key("g4_dc", Kind::Frequency, None),
    key("g3_ac", Kind::Frequency, None),
    key("gamma", ANY, None),
    key("r", ANY, None),
    key("dim", DIM, Some("60")),
    key("tol", Kind::Real { min: 1e-14, max: 1e-3 }, Some("1e-9")),
    key("delta_min", Kind::Frequency, None),
    key("delta_max", Kind::Frequency, None),
    key("delta_points", Kind::Integer { min: 1, max: 10_000 }, Some("9")),
    key("g3_dc_min", Kind::Frequency, None),
    key("g3_dc_max", Kind::Frequency, None),
    key("g3_dc_points", Kind::Integer { min: 1, max: 10_000 }, Some("9")),
    key("wigner_extent", POSITIVE, Some("5")),
    key("wigner_points", Kind::Integer { min: 2, max: 2001 }, Some("81")),
];

/// A parsed value.
#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Number(f64),
    Integer(i64),
    Text(String),
    List(Vec<Option<f64>>),
    /// `auto-kerr-free`, before resolution.
    Auto,
    /// An optional key left unset.
    Unset,
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Number(x) => f.write_str(&num(*x)),
            Value::Integer(i) => write!(f, "{i}"),
            Value::Text(s) => f.write_str(s),
            Value::List(v) => {
                let parts: Vec<String> = v
                    .iter()
                    .map(|x| x.map_or_else(|| AUTO.to_string(), num))
                    .collect();
                f.write_str(&parts.join(", "))
            }
            Value::Auto => f.write_str(AUTO),
            Value::Unset => f.write_str("none"),
        }
    }
}

pub const AUTO: &str = "auto-kerr-free";

#[derive(Clone, Debug, PartialEq)]
struct Entry {
    value: Value,
    /// Line in the input, or `None` for a default.
    line: Option<usize>,
    /// Human-readable note, e.g. how an automatic value was resolved.
    note: Option<String>,
}

/// A validated configuration with every default made explicit.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub workflow: Workflow,
    entries: BTreeMap<&'static str, Entry>,
}

/// Leading-order Kerr-free coupling `√(g₄ f_r/5)` in Hz.
pub fn kerr_free_g3(f_r: f64, g4: f64) -> f64 {
    (g4 * f_r / 5.0).abs().sqrt()
}

fn parse_number(s: &str) -> Option<f64> {
    s.parse::<f64>().ok().filter(|x| x.is_finite())
}

fn parse_value(kind: Kind, raw: &str) -> Result<Value, String> {
    let number = |s: &str| parse_number(s).ok_or_else(|| format!("`{s}` is not a finite number"));
    match kind {
        Kind::PositiveFrequency => {
            let x = number(raw)?;
            if x > 0.0 {
                Ok(Value::Number(x))
            } else {
                Err(format!("{raw} Hz must be positive"))
            }
        }
        Kind::Frequency => number(raw).map(Value::Number),
        Kind::CouplingOrAuto => {
            if raw == AUTO {
                Ok(Value::Auto)
            } else {
                number(raw).map(Value::Number)
            }
        }
        Kind::CouplingList => raw
            .split(',')
            .map(|s| {
                let s = s.trim();
                if s == AUTO {
                    Ok(None)
                } else {
                    number(s).map(Some)
                }
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Value::List),
        Kind::Real { min, max } => {
            let x = number(raw)?;
            if x >= min && x <= max {
                Ok(Value::Number(x))
            } else {
                Err(format!("{raw} outside [{min:e}, {max:e}]"))
            }
        }
        Kind::Integer { min, max } => {
            let i: i64 = raw.parse().map_err(|_| format!("`{raw}` is not an integer"))?;
            if (min..=max).contains(&i) {
                Ok(Value::Integer(i))
            } else {
                Err(format!("{i} outside {min}..={max}"))
            }
        }
        Kind::Choice(options) => {
            if options.contains(&raw) {
                Ok(Value::Text(raw.to_string()))
            } else {
                Err(format!("`{raw}` is not one of {}", options.join(", ")))
            }
        }
        Kind::Text => Ok(Value::Text(raw.to_string())),
    }
}

fn strip_quotes(s: &str) -> &str {
    s.strip_prefix('"').and_then(|t| t.strip_suffix('"')).unwrap_or(s)
}

/// Parses and validates a configuration.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let mut raw: Vec<(usize, String, String)> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let content = line.split('#').next().unwrap_or("").trim();
        if content.is_empty() || (content.starts_with('[') && content.ends_with(']')) {
            continue;
        }
        let Some((k, v)) = content.split_once('=') else {
            return Err(ConfigError::Syntax {
                line: line_no,
                message: format!("expected `key = value`, found `{content}`"),
            });
        };
        let (k, v) = (k.trim(), strip_quotes(v.trim()));
        if k.is_empty() {
            return Err(ConfigError::Syntax {
                line: line_no,
                message: "empty key".into(),
            });
        }
        if raw.iter().any(|(_, key, _)| key == k) {
            return Err(ConfigError::Duplicate {
                line: line_no,
                key: k.to_string(),
            });
        }
        raw.push((line_no, k.to_string(), v.to_string()));
    }
    let last_line = text.lines().count().max(1);
    let (workflow_line, workflow) = match raw.iter().find(|(_, k, _)| k == "workflow") {
        Some((line, _, v)) => (
            *line,
            v.parse::<Workflow>().map_err(|reason| ConfigError::Invalid {
                line: *line,
                key: "workflow".into(),
                reason,
            })?,
        ),
        None => {
            return Err(ConfigError::Missing {
                line: last_line,
                key: "workflow".into(),
            })
        }
    };
    let schema = workflow.keys();
    let mut entries = BTreeMap::new();
    for (line, k, v) in &raw {
        if k == "workflow" {
            continue;
        }
        let Some(spec) = schema.iter().find(|s| s.name == k) else {
            return Err(ConfigError::UnknownKey {
                line: *line,
                key: k.clone(),
                workflow: workflow.to_string(),
            });
        };
        let value = parse_value(spec.kind, v).map_err(|reason| ConfigError::Invalid {
            line: *line,
            key: k.clone(),
            reason,
        })?;
        entries.insert(
            spec.name,
            Entry {
                value,
                line: Some(*line),
                note: None,
            },
        );
    }
    for spec in schema {
        if entries.contains_key(spec.name) {
            continue;
        }
        let value = match spec.default {
            None => {
                return Err(ConfigError::Missing {
                    line: workflow_line,
                    key: spec.name.into(),
                })
            }
            Some(UNSET) => Value::Unset,
            Some(d) => parse_value(spec.kind, d).expect("valid default"),
        };
        entries.insert(spec.name, Entry { value, line: None, note: None });
    }
    let mut config = RunConfig { workflow, entries };
    config.resolve()?;
    Ok(config)
}

impl RunConfig {
    /// Resolves `auto-kerr-free` and checks cross-key constraints.
    fn resolve(&mut self) -> Result<(), ConfigError> {
        match self.workflow {
            Workflow::Spectrum => {
                if self.entries["g3"].value == Value::Auto {
                    let g3 = kerr_free_g3(self.hz("f_r"), self.hz("g4"));
                    let e = self.entries.get_mut("g3").expect("g3 has a default");
                    e.value = Value::Number(g3);
                    e.note = Some(format!("{AUTO}: sqrt(g4*f_r/5)"));
                }
            }
            Workflow::KerrOscillations => {
                let (Value::List(g3), Value::List(g4)) = (&self.entries["g3"].value, &self.entries["g4"].value) else {
                    unreachable!("list keys")
                };
                let line = self.entries["g4"].line.unwrap_or(0);
                if g3.len() != g4.len() {
                    return Err(ConfigError::Invalid {
                        line,
                        key: "g4".into(),
                        reason: format!("{} g4 values for {} g3 values", g4.len(), g3.len()),
                    });
                }
                let g4: Vec<f64> = g4
                    .iter()
                    .map(|x| {
                        x.ok_or_else(|| ConfigError::Invalid {
                            line,
                            key: "g4".into(),
                            reason: format!("{AUTO} only applies to g3"),
                        })
                    })
                    .collect::<Result<_, _>>()?;
                let f_r = self.hz("f_r");
                let resolved: Vec<Option<f64>> = g3
                    .iter()
                    .zip(&g4)
                    .map(|(g3, &g4)| Some(g3.unwrap_or_else(|| kerr_free_g3(f_r, g4))))
                    .collect();
                let any_auto = g3.iter().any(Option::is_none);
                let e = self.entries.get_mut("g3").expect("present");
                e.value = Value::List(resolved);
                if any_auto {
                    e.note = Some(format!("{AUTO} entries resolved to sqrt(g4*f_r/5)"));
                }
                self.entries.insert("g4", Entry {
                    value: Value::List(g4.iter().map(|&x| Some(x)).collect()),
                    ..self.entries["g4"].clone()
                });
                if self.entries["revival_g4"].value == Value::Unset {
                    let g4_ref = g4.iter().fold(0.0f64, |m, x| m.max(x.abs()));
                    if g4_ref == 0.0 {
                        return Err(ConfigError::Missing {
                            line,
                            key: "revival_g4 (all g4 are zero)".into(),
                        });
                    }
                    let e = self.entries.get_mut("revival_g4").expect("present");
                    e.value = Value::Number(g4_ref);
                    e.note = Some("largest |g4|".into());
                }
            }
            Workflow::OptimizeG3 => self.check_range("g3_min", "g3_max")?,
            Workflow::CubicPhase => {
                self.check_range("delta_min", "delta_max")?;
                self.check_range("g3_dc_min", "g3_dc_max")?;
                for k in ["g3_ac", "gamma"] {
                    if self.real(k) == 0.0 {
                        return Err(ConfigError::Invalid {
                            line: self.entries[k].line.unwrap_or(0),
                            key: k.into(),
                            reason: "must be nonzero".into(),
                        });
                    }
                }
            }
            Workflow::ExpandPotential | Workflow::EffectiveHamiltonian => {}
        }
        Ok(())
    }

    fn check_range(&self, lo: &str, hi: &str) -> Result<(), ConfigError> {
        if self.real(lo) > self.real(hi) {
            return Err(ConfigError::Invalid {
                line: self.entries[hi].line.unwrap_or(0),
                key: hi.into(),
                reason: format!("{hi} is below {lo}"),
            });
        }
        Ok(())
    }

    fn entry(&self, key: &str) -> &Entry {
        self.entries
            .get(key)
            .unwrap_or_else(|| panic!("key `{key}` is not part of workflow {}", self.workflow))
    }

    pub fn is_set(&self, key: &str) -> bool {
        self.entries.get(key).is_some_and(|e| e.value != Value::Unset)
    }

    pub fn real(&self, key: &str) -> f64 {
        match self.entry(key).value {
            Value::Number(x) => x,
            Value::Integer(i) => i as f64,
            ref v => panic!("key `{key}` holds {v:?}, not a number"),
        }
    }

    /// A frequency as written, in Hz.
    pub fn hz(&self, key: &str) -> f64 {
        self.real(key)
    }

    /// A frequency in rad/s.
    pub fn omega(&self, key: &str) -> f64 {
        2.0 * PI * self.hz(key)
    }

    pub fn integer(&self, key: &str) -> usize {
        match self.entry(key).value {
            Value::Integer(i) => i as usize,
            ref v => panic!("key `{key}` holds {v:?}, not an integer"),
        }
    }

    pub fn text(&self, key: &str) -> &str {
        match &self.entry(key).value {
            Value::Text(s) => s,
            v => panic!("key `{key}` holds {v:?}, not text"),
        }
    }

    /// A resolved list of frequencies in Hz.
    pub fn hz_list(&self, key: &str) -> Vec<f64> {
        match &self.entry(key).value {
            Value::List(v) => v.iter().map(|x| x.expect("resolved")).collect(),
            v => panic!("key `{key}` holds {v:?}, not a list"),
        }
    }

    /// `key = value` lines for every key, defaults included.
    pub fn describe(&self) -> Vec<String> {
        let mut lines = vec![format!("workflow = {}", self.workflow)];
        for (k, e) in &self.entries {
            let mut s = format!("{k} = {}", e.value);
            match (&e.note, e.line) {
                (Some(n), _) => s.push_str(&format!("  ({n})")),
                (None, None) => s.push_str("  (default)"),
                _ => {}
            }
            lines.push(s);
        }
        lines
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_spectrum_config() {
        let c = parse_config("workflow = spectrum\n[oscillator]\nf_r = 6e9\ng4 = 2e3\ng3 = auto-kerr-free\ndim = 160\n").unwrap();
        assert_eq!(c.workflow, Workflow::Spectrum);
        assert!((c.hz("g3") - (2e3 * 6e9 / 5.0f64).sqrt()).abs() < 1e-6);
        assert!((c.omega("f_r") - 2.0 * PI * 6e9).abs() < 1e-3);
        assert_eq!(c.integer("order"), 4);
        assert!(c.describe().iter().any(|l| l.starts_with("g3 = ") && l.contains(AUTO)));
    }

    #[test]
    fn errors_carry_line_numbers() {
        assert_eq!(
            parse_config("workflow = spectrum\nf_r = -1\ng4 = 2e3\n"),
            Err(ConfigError::Invalid {
                line: 2,
                key: "f_r".into(),
                reason: "-1 Hz must be positive".into()
            })
        );
        assert!(matches!(
            parse_config("workflow = spectrum\nf_r = 6e9\ng4 = 2e3\nbogus = 1\n"),
            Err(ConfigError::UnknownKey { line: 4, .. })
        ));
        assert!(matches!(
            parse_config("# comment\nworkflow = spectrum\nf_r = 6e9\n"),
            Err(ConfigError::Missing { line: 2, ref key }) if key == "g4"
        ));
        assert!(matches!(
            parse_config("workflow = spectrum\nf_r = 6e9\nf_r = 6e9\n"),
            Err(ConfigError::Duplicate { line: 3, .. })
        ));
        assert!(matches!(parse_config("f_r = 1\n"), Err(ConfigError::Missing { .. })));
        assert!(matches!(parse_config("workflow spectrum\n"), Err(ConfigError::Syntax { line: 1, .. })));
        assert!(matches!(
            parse_config("workflow = effective-hamiltonian\norder = 7\n"),
            Err(ConfigError::Invalid { line: 2, .. })
        ));
        assert!(matches!(
            parse_config("workflow = spectrum\nf_r = 6e9\ng4 = 2e3\ndim = 8\n"),
            Err(ConfigError::Invalid { line: 4, .. })
        ));
    }

    #[test]
    fn fourth_order_effective_hamiltonian() {
        let c = parse_config("workflow = effective-hamiltonian\norder = 4\n").unwrap();
        assert_eq!(c.integer("order"), 4);
        assert!(!c.is_set("f_r"));
        assert_eq!(c.text("v"), "g3*(a+ad)^3 + g4*(a+ad)^4");
    }

    #[test]
    fn kerr_lists_resolve_pairwise() {
        let c = parse_config("workflow = kerr-oscillations\nf_r = 4e9\ng3 = 0, auto-kerr-free, 20e6\ng4 = 0.5e6, 0.5e6, 0\n").unwrap();
        let g3 = c.hz_list("g3");
        assert_eq!(g3[0], 0.0);
        assert!((g3[1] - 20e6).abs() < 1e-6);
        assert_eq!(c.hz("revival_g4"), 0.5e6);
        assert!(parse_config("workflow = kerr-oscillations\nf_r = 4e9\ng3 = 0, 1\ng4 = 0.5e6\n").is_err());
    }

    #[test]
    fn cubic_phase_rejects_degenerate_drive() {
        let base = "workflow = cubic-phase\nf_r = 4e9\ng4_dc = 0.125e6\ngamma = 0.1\nr = 0.69\ndelta_min = -1e6\ndelta_max = 1e6\ng3_dc_min = 9e6\ng3_dc_max = 11e6\n";
        assert!(parse_config(&format!("{base}g3_ac = 0.25e6\n")).is_ok());
        assert!(matches!(
            parse_config(&format!("{base}g3_ac = 0\n")),
            Err(ConfigError::Invalid { line: 10, .. })
        ));
    }
}
