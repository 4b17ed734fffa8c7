//! Closed-form error bounds for polynomial approximation and sparse recovery.
//!
//! The universal constants in these estimates are not known numerically;
//! they are parameters defaulting to 1, so every value here is advisory.

use std::f64::consts::SQRT_2;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BoundsError {
    #[error("invalid parameter {name} = {value}: {reason}")]
    Invalid {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },
}

fn invalid(name: &'static str, value: f64, reason: &'static str) -> BoundsError {
    BoundsError::Invalid {
        name,
        value,
        reason,
    }
}

fn require(
    ok: bool,
    name: &'static str,
    value: f64,
    reason: &'static str,
) -> Result<(), BoundsError> {
    if ok {
        Ok(())
    } else {
        Err(invalid(name, value, reason))
    }
}

/// Universal constants of the recovery estimates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Constants {
    pub c: f64,
    pub c1: f64,
    pub c2: f64,
    pub d1: f64,
    pub d2: f64,
    pub f2: f64,
    pub g2: f64,
    pub cp: f64,
}

impl Default for Constants {
    fn default() -> Self {
        Self {
            c: 1.0,
            c1: 1.0,
            c2: 1.0,
            d1: 1.0,
            d2: 1.0,
            f2: 1.0,
            g2: 1.0,
            cp: 1.0,
        }
    }
}

/// Symbols shared by the recovery bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BoundParams {
    pub a: f64,
    pub b: f64,
    pub k: f64,
    pub theta: f64,
    pub s: f64,
    pub n: usize,
    pub q: f64,
    pub constants: Constants,
}

impl Default for BoundParams {
    fn default() -> Self {
        Self {
            a: -1.0,
            b: 1.0,
            k: SQRT_2,
            theta: 1.0,
            s: 1.0,
            n: 1,
            q: 0.5,
            constants: Constants::default(),
        }
    }
}

impl BoundParams {
    pub fn validate(&self) -> Result<(), BoundsError> {
        require(self.b > self.a, "b", self.b, "must exceed a")?;
        require(self.k > 0.0, "K", self.k, "must be positive")?;
        require(self.s >= 1.0, "s", self.s, "must be at least 1")?;
        require(
            self.q > 0.0 && self.q < 1.0,
            "q",
            self.q,
            "must lie in (0, 1)",
        )?;
        require(
            self.theta >= 0.0,
            "theta",
            self.theta,
            "must be nonnegative",
        )?;
        let c = &self.constants;
        for (name, v) in [
            ("C", c.c),
            ("C1", c.c1),
            ("C2", c.c2),
            ("D1", c.d1),
            ("D2", c.d2),
            ("F2", c.f2),
            ("G2", c.g2),
            ("Cp", c.cp),
        ] {
            require(
                v > 0.0 && v.is_finite(),
                name,
                v,
                "constants must be positive",
            )?;
        }
        Ok(())
    }
}

/// Jackson's estimate `E_n <= 12 w((b - a) / 2n)` from a modulus value.
pub fn jackson_bound(modulus_value: f64) -> Result<f64, BoundsError> {
    require(
        modulus_value >= 0.0,
        "modulus",
        modulus_value,
        "must be nonnegative",
    )?;
    Ok(12.0 * modulus_value)
}

/// `12 ((b - a) / 2)^alpha M / n^alpha` for an `alpha`-Hölder function with constant `M`.
pub fn lipschitz_jackson(m: f64, alpha: f64, a: f64, b: f64, n: usize) -> Result<f64, BoundsError> {
    require(
        alpha > 0.0 && alpha <= 1.0,
        "alpha",
        alpha,
        "must lie in (0, 1]",
    )?;
    require(m >= 0.0, "M", m, "must be nonnegative")?;
    require(b > a, "b", b, "must exceed a")?;
    require(n >= 1, "n", n as f64, "must be at least 1")?;
    Ok(12.0 * ((b - a) / 2.0).powf(alpha) * m / (n as f64).powf(alpha))
}

/// `6 (b - a) M1 / n` for a function with `|f'| <= M1`.
pub fn derivative_jackson(m1: f64, a: f64, b: f64, n: usize) -> Result<f64, BoundsError> {
    require(m1 >= 0.0, "M1", m1, "must be nonnegative")?;
    require(b > a, "b", b, "must exceed a")?;
    require(n >= 1, "n", n as f64, "must be at least 1")?;
    Ok(6.0 * (b - a) * m1 / n as f64)
}

/// `Cp (b - a)^(p+1) M_{p+1} / n^(p+1)` for a function with `|f^(p+1)| <= M_{p+1}`.
pub fn smooth_jackson(
    mp1: f64,
    p: u32,
    a: f64,
    b: f64,
    n: usize,
    cp: f64,
) -> Result<f64, BoundsError> {
    require(mp1 >= 0.0, "Mp1", mp1, "must be nonnegative")?;
    require(b > a, "b", b, "must exceed a")?;
    require(n >= 1, "n", n as f64, "must be at least 1")?;
    require(cp > 0.0, "Cp", cp, "must be positive")?;
    let e = p as i32 + 1;
    Ok(cp * (b - a).powi(e) * mp1 / (n as f64).powi(e))
}

/// Sufficient sample count `ceil(C K^2 s ln^3(s) ln(N + 1))`.
pub fn sample_count_bound(s: usize, n: usize, k: f64, c: f64) -> Result<u64, BoundsError> {
    require(s >= 2, "s", s as f64, "must be at least 2")?;
    require(n >= 1, "N", n as f64, "must be at least 1")?;
    require(k > 0.0, "K", k, "must be positive")?;
    require(c > 0.0, "C", c, "must be positive")?;
    let ls = (s as f64).ln();
    let v = c * k * k * s as f64 * ls * ls * ls * ((n + 1) as f64).ln();
    Ok(v.ceil() as u64)
}

/// Uniform-norm recovery estimate `K D1 sigma + (K D2 Theta sqrt(s) + 1) E_N`.
pub fn uniform_recovery_bound(p: &BoundParams, sigma: f64, e_n: f64) -> Result<f64, BoundsError> {
    p.validate()?;
    require(sigma >= 0.0, "sigma", sigma, "must be nonnegative")?;
    require(e_n >= 0.0, "E_N", e_n, "must be nonnegative")?;
    let c = &p.constants;
    Ok(p.k * c.d1 * sigma + (p.k * c.d2 * p.theta * p.s.sqrt() + 1.0) * e_n)
}

/// [`uniform_recovery_bound`] with `sigma` replaced by `||p||_{A_q} s^(1 - 1/q)`.
pub fn uniform_recovery_bound_aq(
    p: &BoundParams,
    aq_norm: f64,
    e_n: f64,
) -> Result<f64, BoundsError> {
    require(aq_norm >= 0.0, "A_q norm", aq_norm, "must be nonnegative")?;
    uniform_recovery_bound(p, aq_norm * p.s.powf(1.0 - 1.0 / p.q), e_n)
}

/// L2 recovery estimate `t_l2 + C1 sigma / sqrt(s) + C2 Theta t_inf`.
pub fn l2_recovery_bound(
    p: &BoundParams,
    sigma: f64,
    t_inf: f64,
    t_l2: f64,
) -> Result<f64, BoundsError> {
    p.validate()?;
    require(sigma >= 0.0, "sigma", sigma, "must be nonnegative")?;
    require(t_inf >= 0.0, "t_inf", t_inf, "must be nonnegative")?;
    require(t_l2 >= 0.0, "t_l2", t_l2, "must be nonnegative")?;
    let c = &p.constants;
    Ok(t_l2 + c.c1 * sigma / p.s.sqrt() + c.c2 * p.theta * t_inf)
}

/// [`l2_recovery_bound`] with `sigma / sqrt(s)` replaced by `||f||_{A_q} s^(1/2 - 1/q)`.
pub fn l2_recovery_bound_aq(
    p: &BoundParams,
    aq_norm: f64,
    t_inf: f64,
    t_l2: f64,
) -> Result<f64, BoundsError> {
    require(aq_norm >= 0.0, "A_q norm", aq_norm, "must be nonnegative")?;
    l2_recovery_bound(p, aq_norm * p.s.powf(1.0 - 1.0 / p.q), t_inf, t_l2)
}

/// Weighted recovery estimate `anchor + F2 sigma_w / sqrt(s) + Theta G2 t`.
pub fn weighted_recovery_bound(
    p: &BoundParams,
    sigma_w: f64,
    anchor: f64,
    t: f64,
) -> Result<f64, BoundsError> {
    p.validate()?;
    require(sigma_w >= 0.0, "sigma_w", sigma_w, "must be nonnegative")?;
    require(anchor >= 0.0, "anchor", anchor, "must be nonnegative")?;
    require(t >= 0.0, "t", t, "must be nonnegative")?;
    let c = &p.constants;
    Ok(anchor + c.f2 * sigma_w / p.s.sqrt() + p.theta * c.g2 * t)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Smoothness {
    /// Hölder continuous with exponent `alpha`.
    Lipschitz(f64),
    /// Bounded first derivative.
    Derivative,
    /// Bounded derivative of order `p + 1`.
    OrderP(u32),
}

fn tolerant_ceil(x: f64) -> f64 {
    let r = x.round();
    if (x - r).abs() <= 1e-9 * r.abs().max(1.0) {
        r
    } else {
        x.ceil()
    }
}

/// Degree `N` balancing the approximation and sparsity terms for budget `s`.
pub fn degree_for_budget(s: f64, q: f64, smoothness: Smoothness) -> Result<usize, BoundsError> {
    require(s >= 1.0 && s.is_finite(), "s", s, "must be at least 1")?;
    require(q > 0.0 && q < 1.0, "q", q, "must lie in (0, 1)")?;
    let order = match smoothness {
        Smoothness::Lipschitz(alpha) => {
            require(
                alpha > 0.0 && alpha <= 1.0,
                "alpha",
                alpha,
                "must lie in (0, 1]",
            )?;
            alpha
        }
        Smoothness::Derivative => 1.0,
        Smoothness::OrderP(p) => {
            require(p >= 1, "p", p as f64, "must be at least 1")?;
            p as f64
        }
    };
    let n = tolerant_ceil(s.powf((1.0 / q - 0.5) / order));
    Ok(n.max(1.0) as usize)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit() -> BoundParams {
        BoundParams {
            k: 1.0,
            theta: 1.0,
            s: 1.0,
            ..BoundParams::default()
        }
    }

    #[test]
    fn jackson_family() {
        assert_eq!(jackson_bound(0.0).unwrap(), 0.0);
        assert_eq!(jackson_bound(1.0).unwrap(), 12.0);
        assert_eq!(jackson_bound(0.25).unwrap(), 3.0);
        assert_eq!(lipschitz_jackson(1.0, 1.0, -1.0, 1.0, 12).unwrap(), 1.0);
        assert_eq!(lipschitz_jackson(0.0, 0.7, -1.0, 1.0, 5).unwrap(), 0.0);
        assert_eq!(lipschitz_jackson(2.0, 0.5, -1.0, 1.0, 4).unwrap(), 12.0);
        assert_eq!(derivative_jackson(1.0, -1.0, 1.0, 12).unwrap(), 1.0);
        assert_eq!(derivative_jackson(0.0, -1.0, 1.0, 3).unwrap(), 0.0);
        assert_eq!(derivative_jackson(3.0, 0.0, 1.0, 6).unwrap(), 3.0);
        assert_eq!(smooth_jackson(0.0, 2, -1.0, 1.0, 4, 1.0).unwrap(), 0.0);
        assert_eq!(smooth_jackson(1.0, 1, -1.0, 1.0, 2, 1.0).unwrap(), 1.0);
        assert!(lipschitz_jackson(1.0, 1.5, -1.0, 1.0, 2).is_err());
        assert!(derivative_jackson(1.0, 1.0, -1.0, 2).is_err());
    }

    #[test]
    fn sample_count() {
        assert_eq!(sample_count_bound(8, 200, SQRT_2, 1.0).unwrap(), 763);
        let ln2 = 2f64.ln();
        assert_eq!(
            sample_count_bound(2, 1, 1.0, 1.0).unwrap(),
            (2.0 * ln2.powi(3) * ln2).ceil() as u64
        );
        assert!(sample_count_bound(1, 10, 1.0, 1.0).is_err());
    }

    #[test]
    fn recovery_bounds() {
        let p = unit();
        assert_eq!(uniform_recovery_bound(&p, 0.0, 0.0).unwrap(), 0.0);
        assert_eq!(uniform_recovery_bound(&p, 1.0, 1.0).unwrap(), 3.0);
        assert_eq!(l2_recovery_bound(&p, 0.0, 0.0, 0.0).unwrap(), 0.0);
        let p0 = BoundParams { theta: 0.0, ..p };
        assert_eq!(l2_recovery_bound(&p0, 0.0, 5.0, 0.25).unwrap(), 0.25);
        assert_eq!(weighted_recovery_bound(&p, 0.0, 0.0, 0.0).unwrap(), 0.0);
        assert_eq!(weighted_recovery_bound(&p, 1.0, 1.0, 1.0).unwrap(), 3.0);
        assert!(uniform_recovery_bound(&BoundParams { q: 1.0, ..p }, 1.0, 1.0).is_err());
    }

    #[test]
    fn degree_budget_examples() {
        assert_eq!(
            degree_for_budget(4.0, 0.5, Smoothness::Derivative).unwrap(),
            8
        );
        assert_eq!(
            degree_for_budget(4.0, 0.5, Smoothness::OrderP(3)).unwrap(),
            2
        );
        for sm in [
            Smoothness::Lipschitz(0.3),
            Smoothness::Derivative,
            Smoothness::OrderP(4),
        ] {
            assert_eq!(degree_for_budget(1.0, 0.4, sm).unwrap(), 1);
        }
    }
}
