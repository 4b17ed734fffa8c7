//! `spap bounds`: parameter parsing and dispatch to the bound calculators.

use std::collections::BTreeMap;

use clap::ValueEnum;

use spap_core::bounds::{self, BoundParams, Constants, Smoothness};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BoundName {
    Jackson,
    Lipschitz,
    Derivative,
    Smooth,
    SampleCount,
    Rhs31,
    Rhs41,
    RhsWeighted,
    DegreeForBudget,
}

/// `key=value` pairs with lowercase keys; every key must be consumed.
struct Params {
    values: BTreeMap<String, String>,
}

impl Params {
    fn parse(text: &str) -> Result<Self, CliError> {
        let mut values = BTreeMap::new();
        for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("expected key=value, got '{item}'")))?;
            let key = k.trim().to_ascii_lowercase();
            if values.insert(key.clone(), v.trim().to_string()).is_some() {
                return Err(CliError::Usage(format!("parameter '{key}' given twice")));
            }
        }
        Ok(Self { values })
    }

    fn take_str(&mut self, names: &[&str]) -> Option<String> {
        names.iter().find_map(|n| self.values.remove(*n))
    }

    fn float(&mut self, names: &[&str]) -> Result<Option<f64>, CliError> {
        self.take_str(names)
            .map(|v| {
                v.parse::<f64>().map_err(|_| {
                    CliError::Usage(format!("parameter '{}' is not a number: '{v}'", names[0]))
                })
            })
            .transpose()
    }

    fn req(&mut self, names: &[&str]) -> Result<f64, CliError> {
        self.float(names)?
            .ok_or_else(|| CliError::Usage(format!("missing parameter '{}'", names[0])))
    }

    fn or(&mut self, names: &[&str], default: f64) -> Result<f64, CliError> {
        Ok(self.float(names)?.unwrap_or(default))
    }

    fn int(&mut self, names: &[&str], default: Option<u64>) -> Result<u64, CliError> {
        match self.take_str(names) {
            Some(v) => v.parse::<u64>().map_err(|_| {
                CliError::Usage(format!(
                    "parameter '{}' is not a nonnegative integer: '{v}'",
                    names[0]
                ))
            }),
            None => {
                default.ok_or_else(|| CliError::Usage(format!("missing parameter '{}'", names[0])))
            }
        }
    }

    fn finish(self) -> Result<(), CliError> {
        match self.values.keys().next() {
            Some(k) => Err(CliError::Usage(format!("unknown parameter '{k}'"))),
            None => Ok(()),
        }
    }

    fn bound_params(&mut self) -> Result<BoundParams, CliError> {
        let d = BoundParams::default();
        let c = Constants::default();
        Ok(BoundParams {
            a: self.or(&["a"], d.a)?,
            b: self.or(&["b"], d.b)?,
            k: self.or(&["k"], d.k)?,
            theta: self.or(&["theta"], d.theta)?,
            s: self.or(&["s"], d.s)?,
            n: self.int(&["n"], Some(d.n as u64))? as usize,
            q: self.or(&["q"], d.q)?,
            constants: Constants {
                c: self.or(&["c"], c.c)?,
                c1: self.or(&["c1"], c.c1)?,
                c2: self.or(&["c2"], c.c2)?,
                d1: self.or(&["d1"], c.d1)?,
                d2: self.or(&["d2"], c.d2)?,
                f2: self.or(&["f2"], c.f2)?,
                g2: self.or(&["g2"], c.g2)?,
                cp: self.or(&["cp"], c.cp)?,
            },
        })
    }
}

fn invalid(e: bounds::BoundsError) -> CliError {
    CliError::Usage(e.to_string())
}

/// Evaluates bound `name`; see the README for the parameter names of each bound.
pub fn evaluate(name: BoundName, text: &str) -> Result<f64, CliError> {
    let mut p = Params::parse(text)?;
    let value = match name {
        BoundName::Jackson => {
            let w = p.req(&["modulus", "omega"])?;
            p.finish()?;
            bounds::jackson_bound(w)
        }
        BoundName::Lipschitz => {
            let (m, alpha) = (p.req(&["m"])?, p.req(&["alpha"])?);
            let (a, b) = (p.or(&["a"], -1.0)?, p.or(&["b"], 1.0)?);
            let n = p.int(&["n"], None)? as usize;
            p.finish()?;
            bounds::lipschitz_jackson(m, alpha, a, b, n)
        }
        BoundName::Derivative => {
            let m1 = p.req(&["m1"])?;
            let (a, b) = (p.or(&["a"], -1.0)?, p.or(&["b"], 1.0)?);
            let n = p.int(&["n"], None)? as usize;
            p.finish()?;
            bounds::derivative_jackson(m1, a, b, n)
        }
        BoundName::Smooth => {
            let mp1 = p.req(&["mp1"])?;
            let order = u32::try_from(p.int(&["p"], None)?)
                .map_err(|_| CliError::Usage("parameter 'p' is too large".into()))?;
            let (a, b) = (p.or(&["a"], -1.0)?, p.or(&["b"], 1.0)?);
            let n = p.int(&["n"], None)? as usize;
            let cp = p.or(&["cp"], 1.0)?;
            p.finish()?;
            bounds::smooth_jackson(mp1, order, a, b, n, cp)
        }
        BoundName::SampleCount => {
            let s = p.int(&["s"], None)? as usize;
            let n = p.int(&["n"], None)? as usize;
            let k = p.or(&["k"], std::f64::consts::SQRT_2)?;
            let c = p.or(&["c"], 1.0)?;
            p.finish()?;
            bounds::sample_count_bound(s, n, k, c).map(|v| v as f64)
        }
        BoundName::Rhs31 => {
            let sigma = p.float(&["sigma"])?;
            let aq = p.float(&["aq"])?;
            let e_n = p.req(&["en", "e_n"])?;
            let bp = p.bound_params()?;
            p.finish()?;
            match (sigma, aq) {
                (Some(s), None) => bounds::uniform_recovery_bound(&bp, s, e_n),
                (None, Some(a)) => bounds::uniform_recovery_bound_aq(&bp, a, e_n),
                _ => {
                    return Err(CliError::Usage(
                        "give exactly one of 'sigma' and 'aq'".into(),
                    ))
                }
            }
        }
        BoundName::Rhs41 => {
            let sigma = p.float(&["sigma"])?;
            let aq = p.float(&["aq"])?;
            let t_inf = p.req(&["t_inf"])?;
            let t_l2 = p.req(&["t_l2"])?;
            let bp = p.bound_params()?;
            p.finish()?;
            match (sigma, aq) {
                (Some(s), None) => bounds::l2_recovery_bound(&bp, s, t_inf, t_l2),
                (None, Some(a)) => bounds::l2_recovery_bound_aq(&bp, a, t_inf, t_l2),
                _ => {
                    return Err(CliError::Usage(
                        "give exactly one of 'sigma' and 'aq'".into(),
                    ))
                }
            }
        }
        BoundName::RhsWeighted => {
            let sigma_w = p.req(&["sigma_w", "sigma"])?;
            let anchor = p.req(&["anchor"])?;
            let t = p.req(&["t"])?;
            let bp = p.bound_params()?;
            p.finish()?;
            bounds::weighted_recovery_bound(&bp, sigma_w, anchor, t)
        }
        BoundName::DegreeForBudget => {
            let s = p.req(&["s"])?;
            let q = p.req(&["q"])?;
            let kind = p
                .take_str(&["smoothness"])
                .ok_or_else(|| CliError::Usage("missing parameter 'smoothness'".into()))?;
            let smoothness = match kind.as_str() {
                "lipschitz" => Smoothness::Lipschitz(p.req(&["alpha"])?),
                "derivative" => Smoothness::Derivative,
                "order_p" | "order-p" => {
                    let order = u32::try_from(p.int(&["p"], None)?)
                        .map_err(|_| CliError::Usage("parameter 'p' is too large".into()))?;
                    Smoothness::OrderP(order)
                }
                other => return Err(CliError::Usage(format!("unknown smoothness '{other}'"))),
            };
            p.finish()?;
            bounds::degree_for_budget(s, q, smoothness).map(|v| v as f64)
        }
    };
    value.map_err(invalid)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(evaluate(BoundName::Jackson, "modulus=0.5").unwrap(), 6.0);
        assert_eq!(evaluate(BoundName::Derivative, "M1=1,n=12").unwrap(), 1.0);
        assert_eq!(
            evaluate(BoundName::SampleCount, "s=2,N=1").unwrap() as u64,
            1
        );
        assert_eq!(
            evaluate(
                BoundName::DegreeForBudget,
                "s=4,q=0.5,smoothness=derivative"
            )
            .unwrap(),
            8.0
        );
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            evaluate(BoundName::Jackson, ""),
            Err(CliError::Usage(_))
        ));
        assert!(matches!(
            evaluate(BoundName::Jackson, "modulus=1,zeta=2"),
            Err(CliError::Usage(_))
        ));
        assert!(matches!(
            evaluate(BoundName::Jackson, "modulus=-1"),
            Err(CliError::Usage(_))
        ));
        assert!(matches!(
            evaluate(BoundName::Rhs31, "en=1"),
            Err(CliError::Usage(_))
        ));
    }
}
