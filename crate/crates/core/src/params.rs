//! Exponent tuples, interpolation weights and the shared `OrderValue` record.

use core::fmt;

use num_traits::Float;

use crate::error::{Error, Result};

/// Denominators and boundary tests closer than this to zero count as zero.
pub const ZERO_TOL: f64 = 1e-12;

/// Minimum gap between the two smallest menu entries for a width exponent to be determined.
pub const GAP_TOL: f64 = 1e-9;

/// A Lebesgue exponent in `[1, inf]`. Infinity is a real value here, with `1/inf = 0`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Exponent(f64);

impl Exponent {
    pub const INFINITY: Exponent = Exponent(f64::INFINITY);
    pub const ONE: Exponent = Exponent(1.0);
    pub const TWO: Exponent = Exponent(2.0);

    pub fn new(p: f64) -> Result<Exponent> {
        if p.is_nan() || p < 1.0 {
            return Err(Error::InvalidParams("exponent must lie in [1, inf]"));
        }
        Ok(Exponent(p))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// `1/p`, exactly zero at infinity.
    pub fn recip(self) -> f64 {
        if self.0.is_infinite() {
            0.0
        } else {
            1.0 / self.0
        }
    }

    pub fn is_infinite(self) -> bool {
        self.0.is_infinite()
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_infinite() {
            f.write_str("inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl core::str::FromStr for Exponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Exponent> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("inf") || t.eq_ignore_ascii_case("infinity") || t == "∞" {
            return Ok(Exponent::INFINITY);
        }
        let v: f64 = t.parse().map_err(|_| Error::InvalidParams("unparseable exponent"))?;
        Exponent::new(v)
    }
}

#[cfg(feature = "serde")]
mod exponent_serde {
    use super::Exponent;
    use serde::de::{self, Visitor};
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    impl Serialize for Exponent {
        fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
            if self.0.is_infinite() {
                s.serialize_str("inf")
            } else {
                s.serialize_f64(self.0)
            }
        }
    }

    struct ExpVisitor;

    impl<'de> Visitor<'de> for ExpVisitor {
        type Value = Exponent;

        fn expecting(&self, f: &mut core::fmt::Formatter) -> core::fmt::Result {
            f.write_str("a number >= 1 or the string \"inf\"")
        }

        fn visit_f64<E: de::Error>(self, v: f64) -> Result<Exponent, E> {
            Exponent::new(v).map_err(|_| E::custom("exponent must lie in [1, inf]"))
        }

        fn visit_u64<E: de::Error>(self, v: u64) -> Result<Exponent, E> {
            self.visit_f64(v as f64)
        }

        fn visit_i64<E: de::Error>(self, v: i64) -> Result<Exponent, E> {
            self.visit_f64(v as f64)
        }

        fn visit_str<E: de::Error>(self, v: &str) -> Result<Exponent, E> {
            v.parse().map_err(|_| E::custom("exponent must be a number >= 1 or \"inf\""))
        }
    }

    impl<'de> Deserialize<'de> for Exponent {
        fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Exponent, D::Error> {
            d.deserialize_any(ExpVisitor)
        }
    }
}

/// The exponent tuple `(p0, p1, q, s*, gamma*, mu*, alpha*)` plus the lattice scale `k*`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ExponentParams {
    pub p0: Exponent,
    pub p1: Exponent,
    pub q: Exponent,
    #[cfg_attr(feature = "serde", serde(alias = "s"))]
    pub s_star: f64,
    #[cfg_attr(feature = "serde", serde(alias = "gamma"))]
    pub gamma_star: f64,
    #[cfg_attr(feature = "serde", serde(alias = "mu"))]
    pub mu_star: f64,
    #[cfg_attr(feature = "serde", serde(alias = "alpha"))]
    pub alpha_star: f64,
    #[cfg_attr(feature = "serde", serde(default = "default_k", alias = "k"))]
    pub k_star: f64,
}

#[cfg(feature = "serde")]
fn default_k() -> f64 {
    1.0
}

impl ExponentParams {
    /// Builds a tuple with `k* = 1` and validates it.
    pub fn new(
        p0: Exponent,
        p1: Exponent,
        q: Exponent,
        s_star: f64,
        gamma_star: f64,
        mu_star: f64,
        alpha_star: f64,
    ) -> Result<ExponentParams> {
        let p = ExponentParams { p0, p1, q, s_star, gamma_star, mu_star, alpha_star, k_star: 1.0 };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.p0.value() > 1.0 && self.p1.value() > 1.0) {
            return Err(Error::InvalidParams("p0 and p1 must exceed 1"));
        }
        if self.q.is_infinite() || self.q.value() < 1.0 {
            return Err(Error::InvalidParams("q must be finite and at least 1"));
        }
        let reals = [self.s_star, self.gamma_star, self.mu_star, self.alpha_star, self.k_star];
        if reals.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParams("s*, gamma*, mu*, alpha*, k* must be finite"));
        }
        if self.s_star <= 0.0 {
            return Err(Error::InvalidParams("s* must be positive"));
        }
        if self.gamma_star < 0.0 {
            return Err(Error::InvalidParams("gamma* must be nonnegative"));
        }
        if self.k_star <= 0.0 {
            return Err(Error::InvalidParams("k* must be positive"));
        }
        Ok(())
    }

    pub fn a0(&self) -> f64 {
        self.p0.recip()
    }

    pub fn a1(&self) -> f64 {
        self.p1.recip()
    }

    pub fn aq(&self) -> f64 {
        self.q.recip()
    }

    /// `mu* + alpha*`.
    pub fn sum1(&self) -> f64 {
        self.mu_star + self.alpha_star
    }

    /// `mu* + alpha* + gamma*/p0 - gamma*/p1`.
    pub fn sum2(&self) -> f64 {
        self.sum1() + self.gamma_star * (self.a0() - self.a1())
    }

    /// `s* + 1/max(p0, q) - 1/p1`.
    pub fn smoothness_margin(&self) -> f64 {
        self.s_star + self.a0().min(self.aq()) - self.a1()
    }

    /// `s* + 1/q - 1/p1`.
    pub fn s_q1(&self) -> f64 {
        self.s_star + self.aq() - self.a1()
    }

    /// `s* + 1/p0 - 1/p1`.
    pub fn s_01(&self) -> f64 {
        self.s_star + self.a0() - self.a1()
    }
}

/// An order representative `value` of some width; `exact` marks values that are the width itself.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct OrderValue {
    pub value: f64,
    pub exact: bool,
}

/// `lambda` with `1/q = (1-lambda)/p1 + lambda/p0`, and `lambda_tilde` for the target `2`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct InterpWeights {
    pub lambda: f64,
    pub lambda_tilde: f64,
}

/// Weight `w` with `1/target = (1-w)/p1 + w/p0`. May fall outside `[0, 1]`.
pub(crate) fn weight_for(p0: Exponent, p1: Exponent, target: Exponent) -> Result<f64> {
    let (a0, a1) = (p0.recip(), p1.recip());
    let d = a0 - a1;
    if d.abs() <= ZERO_TOL {
        return Err(Error::DegenerateExponents);
    }
    Ok((target.recip() - a1) / d)
}

pub fn interp_weights(p0: Exponent, p1: Exponent, q: Exponent) -> Result<InterpWeights> {
    Ok(InterpWeights {
        lambda: weight_for(p0, p1, q)?,
        lambda_tilde: weight_for(p0, p1, Exponent::TWO)?,
    })
}

/// `(1-lambda)(s + 1/q - 1/p1) + lambda(1/q - 1/p0) - (1-lambda)s`; zero up to rounding.
pub fn s_lam_residual(params: &ExponentParams) -> Result<f64> {
    let lam = weight_for(params.p0, params.p1, params.q)?;
    // The `s*` terms cancel. Written out they are `lam * s*` in size, which swamps the
    // residual when `p0` and `p1` are close and `lam` is large.
    Ok((params.aq() - params.a1()) - lam * (params.a0() - params.a1()))
}

/// `x^y` with `0^0 = 1` and `x^inf`-free inputs assumed.
pub(crate) fn pow(x: f64, y: f64) -> f64 {
    Float::powf(x, y)
}

pub(crate) fn log2(x: f64) -> f64 {
    Float::log2(x)
}

pub(crate) fn exp2(x: f64) -> f64 {
    Float::exp2(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(v: f64) -> Exponent {
        Exponent::new(v).unwrap()
    }

    #[test]
    fn weights_with_infinite_p0() {
        let w = interp_weights(Exponent::INFINITY, e(2.0), e(4.0)).unwrap();
        assert!((w.lambda - 0.5).abs() < 1e-15);
        assert!(w.lambda_tilde.abs() < 1e-15);
    }

    #[test]
    fn weights_finite() {
        let w = interp_weights(e(4.0), e(2.0), e(3.0)).unwrap();
        assert!((w.lambda - 2.0 / 3.0).abs() < 1e-15);
        assert!(w.lambda_tilde.abs() < 1e-15);
    }

    #[test]
    fn equal_exponents_degenerate() {
        assert_eq!(interp_weights(e(3.0), e(3.0), e(2.0)), Err(Error::DegenerateExponents));
    }

    #[test]
    fn parse_inf() {
        assert!("inf".parse::<Exponent>().unwrap().is_infinite());
        assert_eq!("2.5".parse::<Exponent>().unwrap().value(), 2.5);
        assert!("0.5".parse::<Exponent>().is_err());
    }

    #[test]
    fn validation_rejects_bad_tuples() {
        let ok = ExponentParams::new(e(4.0), e(3.0), e(2.0), 0.5, 1.0, -0.1, 0.5);
        assert!(ok.is_ok());
        assert!(ExponentParams::new(e(1.0), e(3.0), e(2.0), 0.5, 1.0, 0.0, 0.0).is_err());
        assert!(ExponentParams::new(e(4.0), e(3.0), Exponent::INFINITY, 0.5, 1.0, 0.0, 0.0).is_err());
        assert!(ExponentParams::new(e(4.0), e(3.0), e(2.0), 0.0, 1.0, 0.0, 0.0).is_err());
        assert!(ExponentParams::new(e(4.0), e(3.0), e(2.0), 0.5, -1.0, 0.0, 0.0).is_err());
    }
}
