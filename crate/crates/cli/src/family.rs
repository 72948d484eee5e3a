//! Test-function family specs: `kind:key=v1|v2,key=v`.
//!
//! Kinds and their keys (the family parameter is listed first):
//!
//! - `bump:width=..,center=..`
//! - `power_cutoff:eps=..,r0=..,R=..[,decay=..]` (parameter ε + 1/ln(R/r0))
//! - `gaussian:scale=..[,alpha=..]`
//! - `talenti:scale=..[,alpha=..,r=..]`
//! - `dsl:scale=..,hi=..,expr=<expression>` (`expr` must come last)

use riccati_core::verifier::{power_cutoff_family, FamilyMember, RadialTestFunction};
use riccati_core::{Error, ParamBinding, Result, ScalarExpr};
use std::collections::BTreeMap;

/// Values the family needs from the inequality under test.
#[derive(Debug, Clone)]
pub struct Context {
    pub n: f64,
    pub p: f64,
    pub alpha: f64,
    /// CKN exponent r, when relevant.
    pub r: f64,
    pub binding: ParamBinding,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FamilySpec {
    pub kind: String,
    pub values: BTreeMap<String, Vec<f64>>,
    pub expr: Option<String>,
}

const KINDS: [(&str, &[&str]); 5] = [
    ("bump", &["width", "center"]),
    ("power_cutoff", &["eps", "r0", "R", "decay"]),
    ("gaussian", &["scale", "alpha"]),
    ("talenti", &["scale", "alpha", "r"]),
    ("dsl", &["scale", "hi"]),
];

fn bad(msg: impl Into<String>) -> Error {
    Error::Parameter(format!("family: {}", msg.into()))
}

impl FamilySpec {
    pub fn parse(src: &str) -> Result<Self> {
        let (kind, rest) = src.split_once(':').unwrap_or((src, ""));
        let kind = kind.trim();
        let keys = KINDS
            .iter()
            .find(|(k, _)| *k == kind)
            .map(|(_, keys)| *keys)
            .ok_or_else(|| bad(format!("unknown kind `{kind}`")))?;
        let mut values = BTreeMap::new();
        let mut expr = None;
        let mut rest = rest.trim();
        while !rest.is_empty() {
            if kind == "dsl" {
                if let Some(e) = rest.strip_prefix("expr=") {
                    expr = Some(e.trim().to_string());
                    break;
                }
            }
            let (item, tail) = rest.split_once(',').unwrap_or((rest, ""));
            rest = tail.trim();
            let (key, vals) = item.split_once('=').ok_or_else(|| bad(format!("expected key=value, got `{item}`")))?;
            let key = key.trim();
            if !keys.contains(&key) {
                return Err(bad(format!("`{kind}` has no key `{key}` (expected one of {})", keys.join(", "))));
            }
            let parsed = vals
                .split('|')
                .map(|v| v.trim().parse::<f64>().map_err(|_| bad(format!("{key}: `{v}` is not a number"))))
                .collect::<Result<Vec<f64>>>()?;
            if values.insert(key.to_string(), parsed).is_some() {
                return Err(bad(format!("`{key}` given twice")));
            }
        }
        Ok(Self { kind: kind.to_string(), values, expr })
    }

    fn list(&self, key: &str, default: &[f64]) -> Vec<f64> {
        self.values.get(key).cloned().unwrap_or_else(|| default.to_vec())
    }

    fn one(&self, key: &str, default: Option<f64>) -> Result<f64> {
        match self.values.get(key).map(Vec::as_slice) {
            Some([v]) => Ok(*v),
            Some(_) => Err(bad(format!("`{key}` takes a single value"))),
            None => default.ok_or_else(|| bad(format!("`{}` needs `{key}`", self.kind))),
        }
    }

    /// Members in the order the values were listed.
    pub fn members(&self, ctx: &Context) -> Result<Vec<FamilyMember>> {
        match self.kind.as_str() {
            "bump" => {
                let mut out = Vec::new();
                for c in self.list("center", &[1.0]) {
                    for w in self.list("width", &[0.5]) {
                        out.push(FamilyMember { param: w, u: RadialTestFunction::compact_bump(c, w)? });
                    }
                }
                Ok(out)
            }
            "power_cutoff" => {
                let r = self.one("R", Some(1.0))?;
                let eps = self.list("eps", &[0.3, 0.1, 0.03, 0.01, 0.0]);
                let r0 = self.list("r0", &[1e-2, 1e-6, 1e-12, 1e-30, 1e-60]);
                match self.values.get("decay") {
                    None => power_cutoff_family(ctx.n, ctx.p, ctx.alpha, &eps, &r0, r),
                    Some(_) => {
                        let d = self.one("decay", None)?;
                        let mut out = Vec::new();
                        for &e in &eps {
                            for &a in &r0 {
                                out.push(FamilyMember {
                                    param: e + 1.0 / (r / a).ln(),
                                    u: RadialTestFunction::power_cutoff(d, e, a, r)?,
                                });
                            }
                        }
                        Ok(out)
                    }
                }
            }
            "gaussian" => {
                let base = RadialTestFunction::gaussian(self.one("alpha", Some(ctx.alpha))?, ctx.p)?;
                self.scaled(&base)
            }
            "talenti" => {
                let alpha = self.one("alpha", Some(ctx.alpha))?;
                let base = RadialTestFunction::talenti(alpha, ctx.p, self.one("r", Some(ctx.r))?)?;
                self.scaled(&base)
            }
            "dsl" => {
                let src = self.expr.as_deref().ok_or_else(|| bad("`dsl` needs expr=<expression> as its last key"))?;
                let expr = ScalarExpr::parse(src)?;
                let base = RadialTestFunction::dsl(expr, ctx.binding.clone(), self.one("hi", None)?)?;
                self.scaled(&base)
            }
            _ => unreachable!("kind validated by parse"),
        }
    }

    fn scaled(&self, base: &RadialTestFunction) -> Result<Vec<FamilyMember>> {
        self.list("scale", &[0.5, 1.0, 2.0, 4.0])
            .into_iter()
            .map(|l| Ok(FamilyMember { param: l, u: base.scaled(l)? }))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> Context {
        Context { n: 3.0, p: 2.0, alpha: 0.0, r: 3.0, binding: ParamBinding::new() }
    }

    #[test]
    fn parses_lists_and_expressions() {
        let f = FamilySpec::parse("bump:width=0.1|0.2,center=1").unwrap();
        assert_eq!(f.values["width"], vec![0.1, 0.2]);
        assert_eq!(f.members(&ctx()).unwrap().len(), 2);
        let f = FamilySpec::parse("dsl:hi=1,scale=1|2,expr=t^2*(1-t)^2, extra").unwrap();
        assert_eq!(f.expr.as_deref(), Some("t^2*(1-t)^2, extra"));
    }

    #[test]
    fn power_cutoff_parameter() {
        let f = FamilySpec::parse("power_cutoff:eps=0.1,r0=1e-2,R=1").unwrap();
        let m = f.members(&ctx()).unwrap();
        assert_eq!(m.len(), 1);
        assert!((m[0].param - (0.1 + 1.0 / 100f64.ln())).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(FamilySpec::parse("wavelet:scale=1").is_err());
        assert!(FamilySpec::parse("bump:radius=1").is_err());
        assert!(FamilySpec::parse("bump:width=x").is_err());
        assert!(FamilySpec::parse("bump:width=1,width=2").is_err());
        let f = FamilySpec::parse("power_cutoff:R=1|2").unwrap();
        assert!(f.members(&ctx()).is_err());
    }
}
