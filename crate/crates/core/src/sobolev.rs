//! Exponent data of three weighted Sobolev families, mapped onto [`ExponentParams`].
//!
//! Only the exponents enter; the domain and the set `Gamma` are not modelled.

use crate::engine::{width_exponent, remark1_applies, WidthExponentResult};
use crate::error::{Error, Result};
use crate::params::{Exponent, ExponentParams, ZERO_TOL};

/// Power weights `g = dist^{-beta}`, `w = dist^{-sigma}`, `v = dist^{-lambda}` near an
/// `h`-set with `h(t) = t^theta` on a John domain.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct JohnPowerWeightSpec {
    pub d: u32,
    pub r: u32,
    pub p0: Exponent,
    pub p1: Exponent,
    pub q: Exponent,
    pub beta: f64,
    pub sigma: f64,
    pub lambda_w: f64,
    pub theta_h: f64,
}

/// Power-times-log weights with `h(t) = (log t)_*^{-gamma}`. The power parts are pinned by
/// `beta + lambda = r + d/q - d/p1` and `sigma - lambda = d/p0 - d/q`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LogWeightSpec {
    pub d: u32,
    pub r: u32,
    pub p0: Exponent,
    pub p1: Exponent,
    pub q: Exponent,
    pub beta: f64,
    pub sigma: f64,
    pub lambda_w: f64,
    pub mu_log: f64,
    pub alpha_log: f64,
    pub nu_log: f64,
    pub gamma_log: f64,
}

/// Weights `(1 + |x|)^beta` etc. on an unbounded domain.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GrowingWeightSpec {
    pub d: u32,
    pub r: u32,
    pub p0: Exponent,
    pub p1: Exponent,
    pub q: Exponent,
    pub beta: f64,
    pub sigma: f64,
    pub lambda_w: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "example"))]
pub enum SobolevSpec {
    #[cfg_attr(feature = "serde", serde(rename = "john_power"))]
    JohnPower(JohnPowerWeightSpec),
    #[cfg_attr(feature = "serde", serde(rename = "log_weight"))]
    LogWeight(LogWeightSpec),
    #[cfg_attr(feature = "serde", serde(rename = "growing"))]
    Growing(GrowingWeightSpec),
}

fn check_common(d: u32, r: u32, p0: Exponent, p1: Exponent, q: Exponent, reals: &[f64]) -> Result<()> {
    if d == 0 || r == 0 {
        return Err(Error::InvalidSpec("d and r must be positive"));
    }
    if p0.value() <= 1.0 || p1.value() <= 1.0 || q.is_infinite() {
        return Err(Error::InvalidSpec("need p0, p1 > 1 and finite q"));
    }
    if reals.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidSpec("weight exponents must be finite"));
    }
    Ok(())
}

fn build(p0: Exponent, p1: Exponent, q: Exponent, s: f64, g: f64, mu: f64, al: f64) -> Result<ExponentParams> {
    ExponentParams::new(p0, p1, q, s, g, mu, al).map_err(|_| Error::InvalidSpec("mapped exponents are invalid"))
}

pub fn map_example1(spec: &JohnPowerWeightSpec) -> Result<ExponentParams> {
    let JohnPowerWeightSpec { d, r, p0, p1, q, beta, sigma, lambda_w, theta_h } = *spec;
    check_common(d, r, p0, p1, q, &[beta, sigma, lambda_w, theta_h])?;
    let df = d as f64;
    if !(0.0..df).contains(&theta_h) {
        return Err(Error::InvalidSpec("theta_h must lie in [0, d)"));
    }
    let rf = r as f64;
    let mu = beta + lambda_w - rf - df * q.recip() + df * p1.recip();
    let al = sigma - lambda_w + df * q.recip() - df * p0.recip();
    build(p0, p1, q, rf / df, theta_h, mu, al)
}

pub fn map_example2(spec: &LogWeightSpec) -> Result<ExponentParams> {
    let s = *spec;
    check_common(s.d, s.r, s.p0, s.p1, s.q, &[s.beta, s.sigma, s.lambda_w, s.mu_log, s.alpha_log, s.nu_log, s.gamma_log])?;
    if s.gamma_log < 0.0 {
        return Err(Error::InvalidSpec("gamma_log must be nonnegative"));
    }
    let (df, rf) = (s.d as f64, s.r as f64);
    let lhs1 = s.beta + s.lambda_w;
    let rhs1 = rf + df * s.q.recip() - df * s.p1.recip();
    if (lhs1 - rhs1).abs() > ZERO_TOL * rhs1.abs().max(1.0) {
        return Err(Error::ConstraintViolated("beta + lambda_w != r + d/q - d/p1"));
    }
    let lhs2 = s.sigma - s.lambda_w;
    let rhs2 = df * s.p0.recip() - df * s.q.recip();
    if (lhs2 - rhs2).abs() > ZERO_TOL * rhs2.abs().max(1.0) {
        return Err(Error::ConstraintViolated("sigma - lambda_w != d/p0 - d/q"));
    }
    build(s.p0, s.p1, s.q, rf / df, s.gamma_log + 1.0, s.mu_log + s.nu_log, s.alpha_log - s.nu_log)
}

pub fn map_example3(spec: &GrowingWeightSpec) -> Result<ExponentParams> {
    let GrowingWeightSpec { d, r, p0, p1, q, beta, sigma, lambda_w } = *spec;
    check_common(d, r, p0, p1, q, &[beta, sigma, lambda_w])?;
    let (df, rf) = (d as f64, r as f64);
    let mu = beta + lambda_w + rf + df * q.recip() - df * p1.recip();
    let al = sigma - lambda_w - df * q.recip() + df * p0.recip();
    build(p0, p1, q, rf / df, 0.0, mu, al)
}

/// The four strict inequalities of the previously treated regime.
pub fn classic_region_check(spec: &JohnPowerWeightSpec) -> bool {
    let (d, r, th) = (spec.d as f64, spec.r as f64, spec.theta_h);
    let (a0, a1, aq) = (spec.p0.recip(), spec.p1.recip(), spec.q.recip());
    let bs = spec.beta + spec.sigma;
    r + d * aq - d * a1 > 0.0
        && r + d * a0 - d * a1 > 0.0
        && bs - r - d * a0 + d * a1 > 0.0
        && bs - r - (d - th) * a0 + (d - th) * a1 > 0.0
}

/// Conditions under which the single-class upper bound pins the widths of the full class to
/// the same order. The cited upper bound itself is not evaluated.
pub fn same_order_via_single_class(p: &ExponentParams, lambda_w: f64, d: u32, theta: f64) -> bool {
    let g = p.gamma_star;
    p.mu_star + (g * p.aq() - g * p.a1()).max(0.0) < 0.0
        && p.sum1() <= 0.0
        && p.sum2() <= 0.0
        && p.smoothness_margin() > 0.0
        && lambda_w < (d as f64 - theta) * p.aq()
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SobolevReport {
    pub params: ExponentParams,
    pub result: WidthExponentResult,
    pub remark1: bool,
    /// Only for the power-weight family.
    pub classic_region: Option<bool>,
    /// Only for the two families near an `h`-set.
    pub same_order_via_single_class: Option<bool>,
}

pub fn map_spec(spec: &SobolevSpec) -> Result<ExponentParams> {
    match spec {
        SobolevSpec::JohnPower(s) => map_example1(s),
        SobolevSpec::LogWeight(s) => map_example2(s),
        SobolevSpec::Growing(s) => map_example3(s),
    }
}

pub fn sobolev_width_exponent(spec: &SobolevSpec) -> Result<SobolevReport> {
    let params = map_spec(spec)?;
    let (classic_region, same_order) = match spec {
        SobolevSpec::JohnPower(s) => (
            Some(classic_region_check(s)),
            Some(same_order_via_single_class(&params, s.lambda_w, s.d, s.theta_h)),
        ),
        SobolevSpec::LogWeight(s) => (None, Some(same_order_via_single_class(&params, s.lambda_w, s.d, 0.0))),
        SobolevSpec::Growing(_) => (None, None),
    };
    Ok(SobolevReport {
        params,
        result: width_exponent(&params)?,
        remark1: remark1_applies(&params)?,
        classic_region,
        same_order_via_single_class: same_order,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::WidthStatus;

    fn e(v: f64) -> Exponent {
        Exponent::new(v).unwrap()
    }

    fn john() -> JohnPowerWeightSpec {
        JohnPowerWeightSpec { d: 2, r: 1, p0: e(4.0), p1: e(2.0), q: e(3.0), beta: 1.0, sigma: 0.3, lambda_w: 0.2, theta_h: 1.0 }
    }

    #[test]
    fn example1_mapping() {
        let p = map_example1(&john()).unwrap();
        assert_eq!((p.s_star, p.gamma_star), (0.5, 1.0));
        assert!((p.mu_star - 0.53333333333).abs() < 1e-9);
        assert!((p.alpha_star - 0.26666666667).abs() < 1e-9);
        assert!(classic_region_check(&john()));
    }

    #[test]
    fn classic_region_boundary_is_not_strict() {
        // beta + sigma = r + d/p0 - d/p1 = 0.5
        let s = JohnPowerWeightSpec { beta: 0.2, sigma: 0.3, ..john() };
        assert!(!classic_region_check(&s));
        let s = JohnPowerWeightSpec { p1: e(1.01), q: e(100.0), ..john() };
        assert!(!classic_region_check(&s));
    }

    #[test]
    fn example2_mapping_and_constraints() {
        let s = LogWeightSpec {
            d: 2, r: 1, p0: e(4.0), p1: e(2.0), q: e(2.0),
            beta: 0.7, sigma: -0.2, lambda_w: 0.3,
            mu_log: 0.1, alpha_log: 0.4, nu_log: 0.2, gamma_log: 2.0,
        };
        let p = map_example2(&s).unwrap();
        assert_eq!(p.gamma_star, 3.0);
        assert!((p.mu_star - 0.3).abs() < 1e-15 && (p.alpha_star - 0.2).abs() < 1e-15);
        assert_eq!(p.s_star, 0.5);
        let bad = LogWeightSpec { sigma: -0.5, ..s };
        assert!(matches!(map_example2(&bad), Err(Error::ConstraintViolated(_))));
        let bad = LogWeightSpec { beta: 0.71, ..s };
        assert!(matches!(map_example2(&bad), Err(Error::ConstraintViolated(_))));
        let g0 = LogWeightSpec { gamma_log: 0.0, ..s };
        assert_eq!(map_example2(&g0).unwrap().gamma_star, 1.0);
    }

    #[test]
    fn example3_mapping() {
        let s = GrowingWeightSpec { d: 1, r: 2, p0: e(3.0), p1: e(2.0), q: e(2.0), beta: 0.5, sigma: 1.0, lambda_w: -0.5 };
        let p = map_example3(&s).unwrap();
        assert_eq!((p.s_star, p.gamma_star), (2.0, 0.0));
        assert!((p.mu_star - 2.0).abs() < 1e-12);
        assert!((p.alpha_star - 4.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn example1_reaches_not3_example() {
        // d = 2, r = 1, theta = 1 gives s* = 0.5, gamma* = 1; solve for mu* = -0.1, alpha* = 0.5.
        let s = JohnPowerWeightSpec {
            d: 2, r: 1, p0: e(4.0), p1: e(3.0), q: e(2.0),
            beta: -0.1 + 1.0 + 1.0 - 2.0 / 3.0 - 0.2, sigma: 0.2, lambda_w: 0.2, theta_h: 1.0,
        };
        let rep = sobolev_width_exponent(&SobolevSpec::JohnPower(s)).unwrap();
        assert!((rep.params.mu_star + 0.1).abs() < 1e-12);
        assert!((rep.params.alpha_star - 0.5).abs() < 1e-12);
        assert_eq!(rep.result.status, WidthStatus::Determined);
        assert!((rep.result.theta_star.unwrap() - 0.1531).abs() < 1e-4);
        assert!(rep.remark1);
    }

    #[test]
    fn rejects_bad_theta() {
        let s = JohnPowerWeightSpec { theta_h: 2.0, ..john() };
        assert!(matches!(map_example1(&s), Err(Error::InvalidSpec(_))));
    }
}
