//! TOML spec files: geometry, interval, expressions, params and flags.

use riccati_core::catalog::Instance;
use riccati_core::riccati::{LSpec, RiccatiPairSpec, SignRequirement};
use riccati_core::{Comparison, ModelGeometry, ParamBinding, ScalarExpr};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

/// Problem with a config file, tied to the offending field when possible.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub field: String,
    pub msg: String,
}

impl ConfigError {
    fn at(field: impl Into<String>, msg: impl fmt::Display) -> Self {
        Self { field: field.into(), msg: msg.to_string() }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.field.is_empty() {
            write!(f, "config: {}", self.msg)
        } else {
            write!(f, "config field `{}`: {}", self.field, self.msg)
        }
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meta: Option<Meta>,
    pub geometry: Geometry,
    pub interval: Interval,
    pub expressions: Expressions,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
    #[serde(default)]
    pub flags: Flags,
}

/// Informational only; ignored when building the pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Meta {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub entry: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub citation: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sharp_constant: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Geometry {
    pub kappa: f64,
    pub n: u32,
    pub p: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Interval {
    pub lo: f64,
    pub hi: Bound,
}

/// Upper end: a number or the string "inf".
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Bound {
    Value(f64),
    Word(String),
}

impl Bound {
    fn of(x: f64) -> Self {
        if x == f64::INFINITY {
            Bound::Word("inf".into())
        } else {
            Bound::Value(x)
        }
    }

    fn value(&self) -> Result<f64, ConfigError> {
        match self {
            Bound::Value(v) => Ok(*v),
            Bound::Word(w) if w == "inf" => Ok(f64::INFINITY),
            Bound::Word(w) => Err(ConfigError::at("interval.hi", format!("expected a number or \"inf\", got \"{w}\""))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expressions {
    pub w: String,
    #[serde(rename = "L")]
    pub l: LEntry,
    #[serde(rename = "W")]
    pub big_w: String,
    #[serde(rename = "G")]
    pub g: String,
}

/// L as an expression, or a comparison kind.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LEntry {
    Expr(String),
    Kind(LKind),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LKind {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub psi: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Flags {
    /// "nonnegative", "nonpositive" or "free"; overrides `require_G_nonneg`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sign: Option<String>,
    #[serde(rename = "require_G_nonneg", default, skip_serializing_if = "Option::is_none")]
    pub require_g_nonneg: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub homogeneity_hint: Option<f64>,
}

fn sign_word(s: SignRequirement) -> &'static str {
    match s {
        SignRequirement::NonNegative => "nonnegative",
        SignRequirement::NonPositive => "nonpositive",
        SignRequirement::Free => "free",
    }
}

fn parse_expr(field: &str, src: &str) -> Result<ScalarExpr, ConfigError> {
    ScalarExpr::parse(src).map_err(|e| ConfigError::at(field, e))
}

impl SpecConfig {
    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        toml::from_str(text).map_err(|e| ConfigError::at("", e.to_string().trim_end()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// Fully expanded config of a catalog instance.
    pub fn from_instance(inst: &Instance, citation: &str) -> Self {
        let spec = &inst.spec;
        let l = match &spec.l {
            LSpec::Expr(e) => LEntry::Expr(e.to_string()),
            LSpec::Model(Comparison::Psi(psi)) => {
                LEntry::Kind(LKind { kind: "psi".into(), psi: Some(psi.to_string()) })
            }
            LSpec::Model(c) => LEntry::Kind(LKind { kind: c.tag().into(), psi: None }),
        };
        let params = spec
            .params
            .iter()
            .filter(|(k, _)| !matches!(*k, "kappa" | "n" | "p"))
            .map(|(k, v)| (k.to_string(), v))
            .collect();
        Self {
            meta: Some(Meta {
                entry: Some(inst.name.to_string()),
                citation: Some(citation.to_string()),
                sharp_constant: Some(inst.sharp_constant),
            }),
            geometry: Geometry { kappa: spec.geo.kappa(), n: spec.geo.n(), p: spec.geo.p() },
            interval: Interval { lo: spec.lo, hi: Bound::of(spec.hi) },
            expressions: Expressions {
                w: spec.w.to_string(),
                l,
                big_w: spec.big_w.to_string(),
                g: inst.g.to_string(),
            },
            params,
            flags: Flags {
                sign: Some(sign_word(spec.sign).into()),
                require_g_nonneg: None,
                homogeneity_hint: spec.homogeneity,
            },
        }
    }

    /// Validated spec and G.
    pub fn build(&self) -> Result<(RiccatiPairSpec, ScalarExpr), ConfigError> {
        let g = &self.geometry;
        let geo = ModelGeometry::new(g.kappa, g.n, g.p).map_err(|e| ConfigError::at("geometry", e))?;
        let hi = self.interval.hi.value()?;
        let ex = &self.expressions;
        let w = parse_expr("expressions.w", &ex.w)?;
        let big_w = parse_expr("expressions.W", &ex.big_w)?;
        let g_expr = parse_expr("expressions.G", &ex.g)?;
        let l = match &ex.l {
            LEntry::Expr(s) => LSpec::Expr(parse_expr("expressions.L", s)?),
            LEntry::Kind(k) => {
                let kind = match (k.kind.as_str(), &k.psi) {
                    ("constant_curvature", None) => Comparison::ConstantCurvature,
                    ("constant_floor", None) => Comparison::ConstantFloor,
                    ("psi", Some(src)) => Comparison::Psi(parse_expr("expressions.L.psi", src)?),
                    ("psi", None) => return Err(ConfigError::at("expressions.L.psi", "missing for kind \"psi\"")),
                    ("constant_curvature" | "constant_floor", Some(_)) => {
                        return Err(ConfigError::at("expressions.L.psi", "only allowed with kind \"psi\""))
                    }
                    (other, _) => {
                        return Err(ConfigError::at(
                            "expressions.L.kind",
                            format!("unknown kind \"{other}\", expected constant_curvature, constant_floor or psi"),
                        ))
                    }
                };
                LSpec::Model(kind)
            }
        };
        let mut params = ParamBinding::new();
        for (k, v) in &self.params {
            if matches!(k.as_str(), "kappa" | "n" | "p" | "t") {
                return Err(ConfigError::at(format!("params.{k}"), "reserved name; set it under [geometry]"));
            }
            params.set(k, *v);
        }
        let sign = match (self.flags.sign.as_deref(), self.flags.require_g_nonneg) {
            (Some(word), req) => {
                let s = match word {
                    "nonnegative" => SignRequirement::NonNegative,
                    "nonpositive" => SignRequirement::NonPositive,
                    "free" => SignRequirement::Free,
                    other => {
                        return Err(ConfigError::at(
                            "flags.sign",
                            format!("unknown sign \"{other}\", expected nonnegative, nonpositive or free"),
                        ))
                    }
                };
                if req == Some(true) && s != SignRequirement::NonNegative {
                    return Err(ConfigError::at("flags.require_G_nonneg", format!("conflicts with sign = \"{word}\"")));
                }
                s
            }
            (None, Some(false)) => SignRequirement::Free,
            (None, _) => SignRequirement::NonNegative,
        };
        let spec = RiccatiPairSpec::new(geo, self.interval.lo, hi, w, l, big_w)
            .map_err(|e| ConfigError::at("interval", e))?
            .with_params(params)
            .with_sign(sign)
            .with_homogeneity(self.flags.homogeneity_hint);
        let b = spec.binding();
        for (field, e) in [
            ("expressions.w", &spec.w),
            ("expressions.W", &spec.big_w),
            ("expressions.G", &g_expr),
        ] {
            if let Some(name) = e.params_required().iter().find(|k| b.get(k).is_none()) {
                return Err(ConfigError::at(field, format!("parameter `{name}` is not set in [params]")));
            }
        }
        Ok((spec, g_expr))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const HARDY: &str = r#"
[geometry]
kappa = 0.0
n = 3
p = 2.0

[interval]
lo = 0.0
hi = "inf"

[expressions]
w = "1"
L = { kind = "constant_curvature" }
W = "C^2/4 * t^(-2)"
G = "C/(2*t)"

[params]
C = 1.0

[flags]
homogeneity_hint = 2.0
"#;

    #[test]
    fn parses_and_builds() {
        let cfg = SpecConfig::from_toml(HARDY).unwrap();
        let (spec, g) = cfg.build().unwrap();
        assert_eq!(spec.hi, f64::INFINITY);
        assert_eq!(spec.sign, SignRequirement::NonNegative);
        assert_eq!(spec.homogeneity, Some(2.0));
        assert_eq!(g.eval(1.0, &spec.binding()).unwrap(), 0.5);
    }

    #[test]
    fn unknown_field_is_rejected() {
        let text = HARDY.replace("homogeneity_hint", "homogenity_hint");
        let err = SpecConfig::from_toml(&text).unwrap_err();
        assert!(err.msg.contains("homogenity_hint"), "{err}");
    }

    #[test]
    fn diagnostics_name_the_field() {
        let cfg = SpecConfig::from_toml(&HARDY.replace("C/(2*t)", "C/(2*t")).unwrap();
        assert_eq!(cfg.build().unwrap_err().field, "expressions.G");
        let cfg = SpecConfig::from_toml(&HARDY.replace("C = 1.0", "D = 1.0")).unwrap();
        assert_eq!(cfg.build().unwrap_err().field, "expressions.W");
        let cfg = SpecConfig::from_toml(&HARDY.replace("\"inf\"", "\"infinity\"")).unwrap();
        assert_eq!(cfg.build().unwrap_err().field, "interval.hi");
        let cfg = SpecConfig::from_toml(&HARDY.replace("constant_curvature", "flat")).unwrap();
        assert_eq!(cfg.build().unwrap_err().field, "expressions.L.kind");
    }

    #[test]
    fn sign_flags() {
        let free = HARDY.replace("[flags]", "[flags]\nrequire_G_nonneg = false");
        let (spec, _) = SpecConfig::from_toml(&free).unwrap().build().unwrap();
        assert_eq!(spec.sign, SignRequirement::Free);
        let clash = HARDY.replace("[flags]", "[flags]\nrequire_G_nonneg = true\nsign = \"free\"");
        assert_eq!(SpecConfig::from_toml(&clash).unwrap().build().unwrap_err().field, "flags.require_G_nonneg");
    }

    #[test]
    fn toml_round_trip() {
        let cfg = SpecConfig::from_toml(HARDY).unwrap();
        assert_eq!(SpecConfig::from_toml(&cfg.to_toml()).unwrap(), cfg);
    }
}
