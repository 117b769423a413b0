//! The `(t, m)` lattice discretization: node sets, critical curves, the lattice sum `S(n)` and
//! its empirical decay exponent.

use alloc::vec::Vec;

use num_traits::Float;

use crate::engine::{exponent_menu, width_exponent, HorizonRule, WidthStatus};
use crate::error::{Error, Result};
use crate::intersection::{intersection_width, Normalized, Regime, RegimeTag, TwoBallSpec};
use crate::params::{exp2, log2, ExponentParams, OrderValue, ZERO_TOL};

/// Residual tolerance of the bisection solvers, in units of the base-2 exponent.
pub const ROOT_TOL: f64 = 1e-10;

/// Tail truncation threshold relative to the row's partial sum.
pub const TAIL_REL: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CriticalCurves {
    /// `2^{gamma k t + m_hat} = n`.
    pub m_hat: f64,
    /// `2^{gamma k t + m_bar} = n^{q/2}`; only for `q > 2`.
    pub m_bar: Option<f64>,
    /// `m_tilde s = (mu + alpha + gamma/p0 - gamma/p1) k t`.
    pub m_tilde: f64,
    /// `m (s + 1/p0 - 1/p1) = (mu + alpha) k t`; undefined when `s + 1/p0 - 1/p1 = 0`.
    pub m_star: Option<f64>,
    /// Where the Gluskin threshold meets `kappa`; only for `q > 2`, and absent when the
    /// defining equation has no root.
    pub m_prime: Option<f64>,
}

fn bisect(mut lo: f64, mut hi: f64, f: impl Fn(f64) -> f64) -> Result<f64> {
    let (mut flo, fhi) = (f(lo), f(hi));
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if !(flo.is_finite() && fhi.is_finite()) || flo.signum() == fhi.signum() {
        return Err(Error::NoRoot);
    }
    let mut mid = 0.5 * (lo + hi);
    for _ in 0..400 {
        mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm.abs() <= ROOT_TOL || hi - lo <= f64::EPSILON * hi.abs().max(1.0) {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(mid)
}

/// Left-hand side (in log2) of the `m'_t` equation; decreasing in `m` when a root exists.
fn prime_residual(p: &ExponentParams, log_n: f64, t: f64, m: f64) -> f64 {
    let kt = p.k_star * t;
    let e = (p.a1() - p.a0()) / (0.5 - p.aq());
    p.sum1() * kt - p.s_01() * m + e * (-0.5 * log_n + (p.gamma_star * kt + m) * p.aq())
}

/// `m'_t` by bisection, starting from `[-64, 64 (log2 n + t)]` and doubling the bracket until
/// the residual changes sign.
pub fn m_prime(p: &ExponentParams, n: u64, t: f64) -> Result<f64> {
    if p.q.value() <= 2.0 {
        return Err(Error::InvalidQuery("m' is only defined for q > 2"));
    }
    let log_n = log2(n as f64);
    let f = |m| prime_residual(p, log_n, t, m);
    let mut half = 64.0 * (log_n + t).max(1.0);
    for _ in 0..40 {
        if f(-half).signum() != f(half).signum() || f(half) == 0.0 {
            return bisect(-half, half, f);
        }
        half *= 2.0;
    }
    Err(Error::NoRoot)
}

pub fn critical_curves(p: &ExponentParams, n: u64, t: f64) -> Result<CriticalCurves> {
    p.validate()?;
    if n == 0 || !(t >= 0.0) {
        return Err(Error::InvalidQuery("need n >= 1 and t >= 0"));
    }
    let log_n = log2(n as f64);
    let kt = p.k_star * t;
    let q_big = p.q.value() > 2.0;
    Ok(CriticalCurves {
        m_hat: log_n - p.gamma_star * kt,
        m_bar: q_big.then(|| 0.5 * p.q.value() * log_n - p.gamma_star * kt),
        m_tilde: p.sum2() * kt / p.s_star,
        m_star: (p.s_01().abs() > ZERO_TOL).then(|| p.sum1() * kt / p.s_01()),
        m_prime: match m_prime(p, n, t) {
            Ok(m) => Some(m),
            Err(Error::NoRoot | Error::InvalidQuery(_)) => None,
            Err(err) => return Err(err),
        },
    })
}

/// Radii `(nu0, nu1)` and dimension at a real lattice point.
fn node_geometry(p: &ExponentParams, t: f64, m: f64) -> (f64, f64, f64) {
    let kt = p.k_star * t;
    let nu1 = exp2(p.mu_star * kt - m * p.s_q1());
    let nu0 = exp2(-p.alpha_star * kt - m * (p.aq() - p.a0()));
    (nu0, nu1, exp2(p.gamma_star * kt + m))
}

/// The two-ball intersection `W_{t,m}` in dimension `ceil(2 * 2^{gamma k t + m})`.
pub fn node_set(p: &ExponentParams, t: u64, m: u64, n: u64) -> Result<TwoBallSpec> {
    p.validate()?;
    let (nu0, nu1, d) = node_geometry(p, t as f64, m as f64);
    Ok(TwoBallSpec { nu0, nu1, p0: p.p0, p1: p.p1, q: p.q, dim: (2.0 * d).ceil(), n })
}

pub fn phi(p: &ExponentParams, t: u64, m: u64, n: u64) -> Result<(OrderValue, Regime)> {
    intersection_width(&node_set(p, t, m, n)?)
}

/// Continuous surrogate of `phi`: real dimension `2^{gamma k t + m}`, no ceiling, and ball
/// widths `N^{1/q-1/p}` in place of `(N-n)^{1/q-1/p}`.
pub fn phi_continuous(p: &ExponentParams, t: f64, m: f64, n: f64) -> (RegimeTag, f64) {
    let norm = continuous_node(p, t, m, n);
    let tag = norm.classify().tag;
    (tag, norm.branch_value_asymptotic(tag))
}

/// The order formula of `tag` evaluated at a real lattice point, regardless of which regime
/// the point classifies into.
pub fn branch_formula(p: &ExponentParams, tag: RegimeTag, t: f64, m: f64, n: f64) -> f64 {
    continuous_node(p, t, m, n).branch_value_asymptotic(tag)
}

fn continuous_node(p: &ExponentParams, t: f64, m: f64, n: f64) -> Normalized {
    let (nu0, nu1, d) = node_geometry(p, t, m);
    Normalized::new(nu0, nu1, p.p0, p.p1, p.q, d, n)
}

/// `t_hat(n)` for a horizon rule. Falls back to `8 log2(n) / k*` when the rule gives a
/// nonpositive or non-finite value.
pub fn t_hat(p: &ExponentParams, rule: HorizonRule, n: u64) -> f64 {
    let log_n = log2(n as f64);
    let (k, g, q) = (p.k_star, p.gamma_star, p.q.value());
    let star_slope = if p.s_01().abs() > ZERO_TOL { p.sum1() / p.s_01() } else { f64::NAN };
    let t = match rule {
        HorizonRule::HatZero => log_n / (g * k),
        HorizonRule::BarZero => 0.5 * q * log_n / (g * k),
        HorizonRule::HatMeetsTilde => log_n / (k * (g + p.sum2() / p.s_star)),
        HorizonRule::HatMeetsStar => log_n / (k * (g + star_slope)),
        HorizonRule::BarMeetsStar => 0.5 * q * log_n / (k * (g + star_slope)),
        HorizonRule::PrimeZero => t_prime_zero(p, n).unwrap_or(f64::NAN),
        HorizonRule::Degree => f64::NAN,
    };
    if t.is_finite() && t > 0.0 {
        t
    } else {
        8.0 * log_n / k
    }
}

/// The `t` at which `m'_t = 0`.
pub fn t_prime_zero(p: &ExponentParams, n: u64) -> Result<f64> {
    let log_n = log2(n as f64);
    let hi = 64.0 * log_n.max(1.0) / p.k_star;
    bisect(0.0, hi, |t| prime_residual(p, log_n, t, 0.0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LatticeSum {
    pub n: u64,
    pub sum: f64,
    pub nodes: u64,
    pub dominant_t: u64,
    pub dominant_m: u64,
    pub dominant_value: f64,
    pub t_hat: f64,
}

/// Any `phi`-like term function; [`phi`] is the production one.
pub type TermFn<'a> = &'a dyn Fn(u64, u64) -> Result<f64>;

/// `S(n) = sum over t in [0, t_hat], m >= (m_hat_t)_+` of `phi(t, m, n)`.
pub fn lattice_sum(p: &ExponentParams, n: u64) -> Result<LatticeSum> {
    let r = width_exponent(p)?;
    if r.status != WidthStatus::Determined {
        return Err(Error::NotDetermined);
    }
    let menu = exponent_menu(p)?;
    let th = t_hat(p, menu.horizon, n);
    lattice_sum_with(p, n, th, &|t, m| phi(p, t, m, n).map(|(v, _)| v.value))
}

/// Smallest `m` where `nu_{t,m} >= 2n`, starting from `ceil(m_hat_t)_+`.
fn first_m(p: &ExponentParams, t: u64, n: u64) -> u64 {
    let m_hat = log2(n as f64) - p.gamma_star * p.k_star * t as f64;
    let mut m = Float::ceil(m_hat - 1e-9).max(0.0) as u64;
    while let Ok(spec) = node_set(p, t, m, n) {
        if 2.0 * n as f64 <= spec.dim {
            break;
        }
        m += 1;
    }
    m
}

/// Largest critical curve at `t`; beyond it every row is a single geometric progression.
fn stable_from(p: &ExponentParams, n: u64, t: f64) -> f64 {
    let mut top = 0.0f64;
    if let Ok(c) = critical_curves(p, n, t) {
        for v in [Some(c.m_hat), c.m_bar, Some(c.m_tilde), c.m_star, c.m_prime].into_iter().flatten() {
            if v.is_finite() {
                top = top.max(v);
            }
        }
    }
    top
}

/// Lattice sum with an explicit horizon and term function.
pub fn lattice_sum_with(p: &ExponentParams, n: u64, t_hat: f64, term: TermFn) -> Result<LatticeSum> {
    if n == 0 {
        return Err(Error::InvalidQuery("n must be positive"));
    }
    let log_n = log2(n as f64);
    let t_max = Float::floor(t_hat).max(0.0) as u64;
    let mut out = LatticeSum { n, sum: 0.0, nodes: 0, dominant_t: 0, dominant_m: 0, dominant_value: 0.0, t_hat };
    for t in 0..=t_max {
        let m0 = first_m(p, t, n);
        let stable = Float::ceil(stable_from(p, n, t as f64)).max(0.0) as u64 + 2;
        let cap = (Float::ceil(64.0 * log_n) as u64).max(stable + 64);
        let mut row = 0.0;
        let mut prev = f64::NAN;
        let mut m = m0;
        loop {
            if m > cap {
                return Err(Error::TruncationFailure);
            }
            let v = term(t, m)?;
            row += v;
            out.nodes += 1;
            if v > out.dominant_value {
                out.dominant_value = v;
                out.dominant_t = t;
                out.dominant_m = m;
            }
            if m >= stable && prev > 0.0 {
                let r = v / prev;
                if r < 1.0 && v * r / (1.0 - r) < TAIL_REL * row {
                    break;
                }
            }
            if v == 0.0 && m >= stable {
                break;
            }
            prev = v;
            m += 1;
        }
        out.sum += row;
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EmpiricalFit {
    /// Least-squares slope of `log2 S` against `log2 n`; compare with `-theta*`.
    pub slope: f64,
    pub r_squared: f64,
    pub points: Vec<(u64, f64)>,
}

/// `n = 2^8, ..., 2^18`.
pub fn default_grid() -> Vec<u64> {
    (8..=18).map(|k| 1u64 << k).collect()
}

/// Ordinary least squares on `(log2 n, log2 S)`. A perfectly flat series has `r^2 = 1`.
pub fn fit_loglog(points: &[(u64, f64)]) -> Result<EmpiricalFit> {
    if points.len() < 2 || points.iter().any(|(n, s)| *n == 0 || !(*s > 0.0)) {
        return Err(Error::InvalidQuery("need at least two points with positive n and S"));
    }
    let k = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|(n, _)| log2(*n as f64)).collect();
    let ys: Vec<f64> = points.iter().map(|(_, s)| log2(*s)).collect();
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    if sxx <= 0.0 {
        return Err(Error::InvalidQuery("grid must contain distinct n"));
    }
    let slope = sxy / sxx;
    let ss_res: f64 = xs.iter().zip(&ys).map(|(x, y)| {
        let r = y - (my + slope * (x - mx));
        r * r
    }).sum();
    let r_squared = if syy <= f64::MIN_POSITIVE { 1.0 } else { 1.0 - ss_res / syy };
    Ok(EmpiricalFit { slope, r_squared, points: points.to_vec() })
}

/// Fits `S(n)` over `grid` with an arbitrary sum function.
pub fn empirical_exponent_with(grid: &[u64], sum: impl Fn(u64) -> Result<f64>) -> Result<EmpiricalFit> {
    let pts = grid.iter().map(|&n| sum(n).map(|s| (n, s))).collect::<Result<Vec<_>>>()?;
    fit_loglog(&pts)
}

pub fn empirical_exponent(p: &ExponentParams, grid: &[u64]) -> Result<EmpiricalFit> {
    empirical_exponent_with(grid, |n| lattice_sum(p, n).map(|s| s.sum))
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CurveOrder {
    /// `m_hat_{t1} = 0`.
    pub t1: f64,
    /// `m'_{t2} = 0`.
    pub t2: f64,
    /// `m_bar_{t3} = 0`.
    pub t3: f64,
}

impl CurveOrder {
    pub fn ordered(&self) -> bool {
        self.t1 < self.t2 && self.t2 < self.t3
    }
}

/// Whether the parameters satisfy the hypotheses under which `t1 < t2 < t3` is claimed.
pub fn curve_order_applies(p: &ExponentParams) -> bool {
    let (s1, s2) = (p.sum1(), p.sum2());
    p.q.value() > 2.0
        && ((p.p0 < p.p1 && s1 < 0.0 && 0.0 < s2) || (p.p0 > p.p1 && s2 < 0.0 && 0.0 < s1))
}

pub fn curve_order(p: &ExponentParams, n: u64) -> Result<CurveOrder> {
    p.validate()?;
    if !curve_order_applies(p) {
        return Err(Error::InvalidParams("curve ordering hypotheses do not hold"));
    }
    if n < 2 {
        return Err(Error::InvalidQuery("need n >= 2"));
    }
    let log_n = log2(n as f64);
    let gk = p.gamma_star * p.k_star;
    Ok(CurveOrder { t1: log_n / gk, t2: t_prime_zero(p, n)?, t3: 0.5 * p.q.value() * log_n / gk })
}
