//! Order estimates for `d_n(B_p^N, l_q^N)`.

use num_traits::Float;

use crate::error::{Error, Result};
use crate::params::{pow, Exponent, OrderValue};

/// Ambient dimension `N` is an integral `f64` so lattice dimensions far beyond `u64` stay representable.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BallWidthQuery {
    pub p: Exponent,
    pub q: Exponent,
    #[cfg_attr(feature = "serde", serde(rename = "N"))]
    pub dim: f64,
    pub n: u64,
}

/// `min{1, (1/p - 1/q)/(1/2 - 1/q)}` for `p < q`, `q > 2`.
pub fn gluskin_power(p: Exponent, q: Exponent) -> f64 {
    let (ap, aq) = (p.recip(), q.recip());
    ((ap - aq) / (0.5 - aq)).min(1.0)
}

pub fn ball_width_order(query: &BallWidthQuery) -> Result<OrderValue> {
    let BallWidthQuery { p, q, dim, n } = *query;
    if !(dim >= 1.0) || Float::fract(dim) != 0.0 || !dim.is_finite() {
        return Err(Error::InvalidQuery("N must be a positive integer"));
    }
    if q.is_infinite() {
        return Err(Error::InvalidQuery("q must be finite"));
    }
    let nf = n as f64;
    if nf > dim {
        return Err(Error::InvalidQuery("n exceeds N"));
    }
    if nf == dim {
        return Ok(OrderValue { value: 0.0, exact: true });
    }
    let (ap, aq) = (p.recip(), q.recip());
    if n == 0 {
        // d_0 is the l_q-radius of B_p, attained at a vertex or at the all-ones vector.
        return Ok(OrderValue { value: pow(dim, (aq - ap).max(0.0)), exact: true });
    }
    if q <= p {
        return Ok(OrderValue { value: pow(dim - nf, aq - ap), exact: true });
    }
    if 2.0 * nf > dim {
        return Err(Error::OutOfRegime);
    }
    Ok(OrderValue { value: gluskin_value(p, q, dim, nf), exact: false })
}

/// Gluskin order for `p < q`, `1 <= n <= N/2`.
fn gluskin_value(p: Exponent, q: Exponent, dim: f64, n: f64) -> f64 {
    if q.value() <= 2.0 {
        return 1.0;
    }
    let base = (pow(n, -0.5) * pow(dim, q.recip())).min(1.0);
    pow(base, gluskin_power(p, q))
}

/// Real-dimension surrogate used by the continuous lattice model: `N^{1/q-1/p}` for `q <= p`,
/// the Gluskin order otherwise. No regime checks.
pub(crate) fn ball_width_asymptotic(p: Exponent, q: Exponent, dim: f64, n: f64) -> f64 {
    if q <= p {
        pow(dim, q.recip() - p.recip())
    } else {
        gluskin_value(p, q, dim, n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(v: f64) -> Exponent {
        Exponent::new(v).unwrap()
    }

    fn q(p: Exponent, qq: Exponent, dim: f64, n: u64) -> Result<OrderValue> {
        ball_width_order(&BallWidthQuery { p, q: qq, dim, n })
    }

    #[test]
    fn pietsch_stesin_values() {
        let v = q(e(4.0), e(2.0), 100.0, 36).unwrap();
        assert!((v.value - 64f64.powf(0.25)).abs() < 1e-12);
        assert!(v.exact);
        let v = q(Exponent::INFINITY, e(1.0), 10.0, 3).unwrap();
        assert!((v.value - 7.0).abs() < 1e-12);
    }

    #[test]
    fn gluskin_value_example() {
        let v = q(e(1.0), e(4.0), 4096.0, 1024).unwrap();
        assert!((v.value - 0.25).abs() < 1e-12);
        assert!(!v.exact);
    }

    #[test]
    fn small_q_gives_one() {
        let v = q(e(1.5), e(2.0), 50.0, 10).unwrap();
        assert_eq!(v.value, 1.0);
    }

    #[test]
    fn boundary_indices() {
        assert_eq!(q(e(3.0), e(5.0), 9.0, 9).unwrap(), OrderValue { value: 0.0, exact: true });
        let v = q(e(1.0), e(4.0), 16.0, 0).unwrap();
        assert_eq!(v, OrderValue { value: 1.0, exact: true });
        assert_eq!(q(e(3.0), e(3.0), 9.0, 4).unwrap(), OrderValue { value: 1.0, exact: true });
    }

    #[test]
    fn errors() {
        assert!(matches!(q(e(3.0), e(5.0), 9.0, 10), Err(Error::InvalidQuery(_))));
        assert!(matches!(q(e(3.0), e(5.0), 0.0, 0), Err(Error::InvalidQuery(_))));
        assert_eq!(q(e(1.0), e(4.0), 10.0, 6), Err(Error::OutOfRegime));
    }
}
