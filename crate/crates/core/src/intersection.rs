//! Widths of `nu0 B_p0 ∩ nu1 B_p1` in `l_q^N` for `n <= N/2`.
//!
//! The classifier first normalizes so that `p1 < p0` (swapping the two balls if needed), then
//! reduces to a single ball when one contains the other up to order, and otherwise dispatches
//! on the seven orderings of `p0, p1, q` relative to each other and to `2`.

use alloc::vec::Vec;

use num_traits::Float;

use crate::ball::{ball_width_asymptotic, ball_width_order, BallWidthQuery};
use crate::error::{Error, Result};
use crate::params::{pow, weight_for, Exponent, OrderValue, ZERO_TOL};

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TwoBallSpec {
    pub nu0: f64,
    pub nu1: f64,
    pub p0: Exponent,
    pub p1: Exponent,
    pub q: Exponent,
    #[cfg_attr(feature = "serde", serde(rename = "N"))]
    pub dim: f64,
    pub n: u64,
}

/// Which order formula applies. `P0`/`P1` name the balls after normalization to `p1 < p0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum RegimeTag {
    /// `nu1 <= nu0`: the `p1` ball sits inside the `p0` ball.
    ReduceToP1,
    /// `nu1/nu0 >= N^{1/p1-1/p0}`: the `p0` ball sits inside the `p1` ball.
    ReduceToP0,
    BranchP0,
    BranchP1,
    /// Interpolated radius times `d_n(B_2^N, l_q^N)`.
    Branch2,
    /// Interpolated radius times `d_n(B_q^N, l_q^N) = 1`.
    BranchQ,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Regime {
    pub tag: RegimeTag,
    /// Ordering case `1..=7` that fired; `0` for the two reductions.
    pub case: u8,
    /// Whether the input was swapped: `p0 < p1`, or `p0 = p1` with `nu0 < nu1`.
    pub swapped: bool,
    /// Every ordering case whose predicate matched (more than one only on boundaries).
    pub matched_cases: Vec<u8>,
    pub kappa: Option<f64>,
    pub threshold: Option<f64>,
}

/// The balls after normalization: index 0 carries the larger exponent.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Normalized {
    pub nu0: f64,
    pub nu1: f64,
    pub p0: Exponent,
    pub p1: Exponent,
    pub q: Exponent,
    pub dim: f64,
    pub n: f64,
    pub swapped: bool,
}

impl Normalized {
    pub(crate) fn new(nu0: f64, nu1: f64, p0: Exponent, p1: Exponent, q: Exponent, dim: f64, n: f64) -> Normalized {
        // With equal exponents the smaller ball takes the `p1` role, so swapping inputs keeps the tag.
        if p0 < p1 || (p0 == p1 && nu0 < nu1) {
            Normalized { nu0: nu1, nu1: nu0, p0: p1, p1: p0, q, dim, n, swapped: true }
        } else {
            Normalized { nu0, nu1, p0, p1, q, dim, n, swapped: false }
        }
    }

    pub(crate) fn classify(&self) -> Regime {
        let (a0, a1, aq) = (self.p0.recip(), self.p1.recip(), self.q.recip());
        let ratio = self.nu1 / self.nu0;
        let base = Regime {
            tag: RegimeTag::ReduceToP1,
            case: 0,
            swapped: self.swapped,
            matched_cases: Vec::new(),
            kappa: None,
            threshold: None,
        };
        if ratio <= 1.0 {
            return base;
        }
        if ratio >= pow(self.dim, a1 - a0) {
            return Regime { tag: RegimeTag::ReduceToP0, ..base };
        }
        let (p0, p1, q) = (self.p0.value(), self.p1.value(), self.q.value());
        let preds = [
            p0 <= q && q <= 2.0 || p0 <= 2.0 && 2.0 < q,
            p1 < 2.0 && 2.0 < p0 && p0 < q,
            2.0 <= p1 && p0 < q,
            2.0 <= p1 && p1 <= q && q <= p0,
            p1 < 2.0 && 2.0 < q && q <= p0,
            q <= 2.0 && p1 < q && q < p0,
            q <= p1,
        ];
        let matched: Vec<u8> = (1..=7u8).filter(|c| preds[*c as usize - 1]).collect();
        let case = matched.first().copied().unwrap_or(7);
        let kappa = pow(ratio, (0.5 - aq) / (a1 - a0));
        let threshold = pow(self.n, 0.5) * pow(self.dim, -aq);
        let low = threshold <= kappa;
        use RegimeTag::*;
        let tag = match case {
            1 => BranchP0,
            2 => if low { BranchP0 } else { Branch2 },
            3 => if low { BranchP0 } else { BranchP1 },
            4 => if low { BranchQ } else { BranchP1 },
            5 => if low { BranchQ } else { Branch2 },
            6 => BranchQ,
            _ => BranchP1,
        };
        let uses_kappa = (2..=5).contains(&case);
        Regime {
            tag,
            case,
            matched_cases: matched,
            kappa: uses_kappa.then_some(kappa),
            threshold: uses_kappa.then_some(threshold),
            ..base
        }
    }

    /// Evaluates the order formula of `tag` with single-ball widths supplied by `width`.
    pub(crate) fn branch_value(&self, tag: RegimeTag, width: impl Fn(Exponent) -> Result<f64>) -> Result<f64> {
        use RegimeTag::*;
        Ok(match tag {
            ReduceToP1 | BranchP1 => self.nu1 * width(self.p1)?,
            ReduceToP0 | BranchP0 => self.nu0 * width(self.p0)?,
            Branch2 => {
                let lt = weight_for(self.p0, self.p1, Exponent::TWO)?;
                pow(self.nu1, 1.0 - lt) * pow(self.nu0, lt) * width(Exponent::TWO)?
            }
            BranchQ => {
                let l = weight_for(self.p0, self.p1, self.q)?;
                pow(self.nu1, 1.0 - l) * pow(self.nu0, l)
            }
        })
    }

    /// Same formulas with the idealized real-dimension ball widths.
    pub(crate) fn branch_value_asymptotic(&self, tag: RegimeTag) -> f64 {
        let (q, dim, n) = (self.q, self.dim, self.n);
        self.branch_value(tag, |p| Ok(ball_width_asymptotic(p, q, dim, n)))
            .unwrap_or(f64::NAN)
    }
}

fn validate(spec: &TwoBallSpec) -> Result<Normalized> {
    if !(spec.nu0 > 0.0 && spec.nu1 > 0.0 && spec.nu0.is_finite() && spec.nu1.is_finite()) {
        return Err(Error::InvalidSpec("radii must be positive and finite"));
    }
    if !(spec.dim >= 1.0) || Float::fract(spec.dim) != 0.0 || !spec.dim.is_finite() {
        return Err(Error::InvalidSpec("N must be a positive integer"));
    }
    if spec.q.is_infinite() {
        return Err(Error::InvalidSpec("q must be finite"));
    }
    if 2.0 * spec.n as f64 > spec.dim {
        return Err(Error::InvalidSpec("n must not exceed N/2"));
    }
    Ok(Normalized::new(spec.nu0, spec.nu1, spec.p0, spec.p1, spec.q, spec.dim, spec.n as f64))
}

pub fn classify_regime(spec: &TwoBallSpec) -> Result<Regime> {
    Ok(validate(spec)?.classify())
}

/// Order value together with the regime that produced it.
pub fn intersection_width(spec: &TwoBallSpec) -> Result<(OrderValue, Regime)> {
    let norm = validate(spec)?;
    let regime = norm.classify();
    let width = |p| ball_width_order(&BallWidthQuery { p, q: spec.q, dim: spec.dim, n: spec.n }).map(|v| v.value);
    let mut value = norm.branch_value(regime.tag, width)?;
    // The case formulas can overshoot a single ball by a constant; cap at the in-regime balls.
    for (nu, p) in [(spec.nu0, spec.p0), (spec.nu1, spec.p1)] {
        if let Ok(w) = width(p) {
            value = value.min(nu * w);
        }
    }
    Ok((OrderValue { value, exact: false }, regime))
}

pub fn intersection_width_order(spec: &TwoBallSpec) -> Result<OrderValue> {
    intersection_width(spec).map(|(v, _)| v)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum InterpTarget {
    Q,
    Two,
}

/// `nu0^w nu1^{1-w}`, the radius of the target ball containing the intersection.
pub fn interpolation_bound(spec: &TwoBallSpec, target: InterpTarget) -> Result<f64> {
    let t = match target {
        InterpTarget::Q => spec.q,
        InterpTarget::Two => Exponent::TWO,
    };
    let w = weight_for(spec.p0, spec.p1, t)?;
    if !(-ZERO_TOL..=1.0 + ZERO_TOL).contains(&w) {
        return Err(Error::NotBetween);
    }
    let w = w.clamp(0.0, 1.0);
    Ok(pow(spec.nu0, w) * pow(spec.nu1, 1.0 - w))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(v: f64) -> Exponent {
        Exponent::new(v).unwrap()
    }

    fn spec(nu0: f64, nu1: f64, p0: f64, p1: f64, q: f64, dim: f64, n: u64) -> TwoBallSpec {
        TwoBallSpec { nu0, nu1, p0: e(p0), p1: e(p1), q: e(q), dim, n }
    }

    #[test]
    fn reduces_to_p1_when_it_is_inside() {
        let s = spec(2.0, 1.0, 4.0, 2.0, 3.0, 100.0, 10);
        let (v, r) = intersection_width(&s).unwrap();
        assert_eq!(r.tag, RegimeTag::ReduceToP1);
        assert!((v.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn reduces_to_p0_when_ratio_is_huge() {
        let s = spec(1.0, 1000.0, Exponent::INFINITY.value(), 1.0, 2.0, 64.0, 4);
        let (v, r) = intersection_width(&s).unwrap();
        assert_eq!(r.tag, RegimeTag::ReduceToP0);
        assert!((v.value - 60f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn interpolation_bound_example() {
        let s = spec(4.0, 9.0, 4.0, 2.0, 3.0, 10.0, 1);
        let b = interpolation_bound(&s, InterpTarget::Q).unwrap();
        let expected = 4f64.powf(2.0 / 3.0) * 9f64.powf(1.0 / 3.0);
        assert!((b - expected).abs() < 1e-12);
        assert!((b - 5.2415).abs() < 1e-3);
    }

    #[test]
    fn interpolation_outside_range() {
        let s = spec(4.0, 9.0, 4.0, 3.0, 2.0, 10.0, 1);
        assert_eq!(interpolation_bound(&s, InterpTarget::Q), Err(Error::NotBetween));
    }

    #[test]
    fn swap_recorded() {
        let s = spec(3.0, 1.0, 2.0, 4.0, 3.0, 100.0, 10);
        let r = classify_regime(&s).unwrap();
        assert!(r.swapped);
    }

    #[test]
    fn equal_exponents_reduce_to_smaller_ball() {
        let s = spec(3.0, 2.0, 4.0, 4.0, 2.0, 100.0, 10);
        let (v, r) = intersection_width(&s).unwrap();
        assert_eq!(r.tag, RegimeTag::ReduceToP1);
        assert!((v.value - 2.0 * 90f64.powf(0.25)).abs() < 1e-12);
        let s = spec(2.0, 3.0, 4.0, 4.0, 2.0, 100.0, 10);
        let r = classify_regime(&s).unwrap();
        assert_eq!(r.tag, RegimeTag::ReduceToP1);
        assert!(r.swapped);
        assert!((intersection_width(&s).unwrap().0.value - v.value).abs() < 1e-12);
    }

    #[test]
    fn rejects_large_n() {
        let s = spec(1.0, 2.0, 4.0, 2.0, 3.0, 10.0, 6);
        assert!(matches!(classify_regime(&s), Err(Error::InvalidSpec(_))));
    }

    #[test]
    fn case_three_threshold_split() {
        // 2 <= p1 < p0 < q; kappa = ratio^{(1/2-1/q)/(1/p1-1/p0)}
        let lo = spec(1.0, 2.0, 4.0, 2.0, 8.0, 1024.0, 4);
        let r = classify_regime(&lo).unwrap();
        assert_eq!(r.case, 3);
        let kappa = 2f64.powf((0.5 - 0.125) / 0.25);
        assert!((r.kappa.unwrap() - kappa).abs() < 1e-12);
        assert_eq!(r.tag, RegimeTag::BranchP0);
        let hi = spec(1.0, 2.0, 4.0, 2.0, 8.0, 1024.0, 512);
        assert_eq!(classify_regime(&hi).unwrap().tag, RegimeTag::BranchP1);
    }
}
