//! Width exponents: derived quantities, the embedding exponent `nu*`, the notation menus
//! `theta_1..theta_j0` and the selection of the dominant exponent.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::params::{ExponentParams, GAP_TOL, ZERO_TOL};

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DerivedExponents {
    pub theta_tilde: Option<f64>,
    pub theta_hat: Option<f64>,
    pub nu_hat: Option<f64>,
    pub nu_tilde: Option<f64>,
    pub sigma_hat: Option<f64>,
}

fn ratio(num: f64, den: f64) -> Option<f64> {
    (den.abs() > ZERO_TOL).then(|| num / den)
}

pub fn derived_exponents(p: &ExponentParams) -> Result<DerivedExponents> {
    p.validate()?;
    let (a0, a1, aq) = (p.a0(), p.a1(), p.aq());
    let (s, g, mu, al) = (p.s_star, p.gamma_star, p.mu_star, p.alpha_star);
    let d = mu + al + g * (s + a0 - a1);
    Ok(DerivedExponents {
        theta_tilde: ratio(s * (al + g * a0 - g * aq), d),
        theta_hat: ratio(mu * (aq - a0) + al * (s + aq - a1), d),
        nu_hat: ratio(
            0.5 * (al * (a1 - aq) + mu * (a0 - aq)),
            (mu + al) * (0.5 - aq) + g * (a1 - a0) * aq,
        ),
        nu_tilde: ratio(mu * (a0 - 0.5) + al * (a1 - 0.5), g * (a1 - a0)).map(|v| v + 0.5 - aq),
        sigma_hat: ratio(s * (aq - a0), -s - a0 + a1 + 2.0 * s * aq),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum EmbeddingCase {
    N1,
    N2,
    N3,
    N4,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EmbeddingExponent {
    pub case: Option<EmbeddingCase>,
    /// Lettered sub-condition that matched, e.g. `'a'`.
    pub sub: Option<char>,
    pub nu_star: Option<f64>,
    pub applicable: bool,
}

/// First matching case among N1..N4 gives the embedding exponent `nu*`.
pub fn embedding_exponent(p: &ExponentParams) -> Result<EmbeddingExponent> {
    p.validate()?;
    let (a0, a1, aq) = (p.a0(), p.a1(), p.aq());
    let (g, mu, al) = (p.gamma_star, p.mu_star, p.alpha_star);
    let (p0, p1, q) = (p.p0.value(), p.p1.value(), p.q.value());
    let (s1, s2, sq1) = (p.sum1(), p.sum2(), p.s_q1());
    let hit = |case, sub, v: f64| EmbeddingExponent {
        case: Some(case),
        sub: Some(sub),
        nu_star: Some(v),
        applicable: true,
    };

    let n1 = -mu - (g * aq - g * a1).max(0.0);
    if s1 <= 0.0 && s2 <= 0.0 && sq1 > 0.0 {
        return Ok(hit(EmbeddingCase::N1, 'a', n1));
    }
    if p0 < p1 && p1 <= q && s1 <= 0.0 && sq1 > 0.0 {
        return Ok(hit(EmbeddingCase::N1, 'b', n1));
    }
    if p0 > p1 && p1 >= q && s2 <= 0.0 {
        return Ok(hit(EmbeddingCase::N1, 'c', n1));
    }

    let n2 = (al * (a1 - aq) + mu * (a0 - aq)) / (a1 - a0);
    if p1 < q && q < p0 && s2 <= 0.0 && 0.0 <= s1 {
        return Ok(hit(EmbeddingCase::N2, 'a', n2));
    }
    if p0 < q && q < p1 && s1 <= 0.0 && 0.0 <= s2 {
        return Ok(hit(EmbeddingCase::N2, 'b', n2));
    }

    if p0 >= q && s2 >= 0.0 {
        return Ok(hit(EmbeddingCase::N3, 'a', al + g * a0 - g * aq));
    }

    let n4 = ratio(al * sq1 + mu * (aq - a0), p.s_01());
    if let Some(v) = n4 {
        if s2 < 0.0 && 0.0 <= s1 && p1 <= p0 && p0 <= q && sq1 > 0.0 {
            return Ok(hit(EmbeddingCase::N4, 'a', v));
        }
        if s1 <= 0.0 && p1 < q && q < p0 && sq1 < 0.0 {
            return Ok(hit(EmbeddingCase::N4, 'b', v));
        }
    }
    Ok(EmbeddingExponent { case: None, sub: None, nu_star: None, applicable: false })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Notation {
    Not2,
    Not3,
    Not4,
    Not5,
    Not6,
}

impl Notation {
    pub fn id(self) -> &'static str {
        match self {
            Notation::Not2 => "Not2",
            Notation::Not3 => "Not3",
            Notation::Not4 => "Not4",
            Notation::Not5 => "Not5",
            Notation::Not6 => "Not6",
        }
    }
}

impl fmt::Display for Notation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

/// How the lattice horizon `t_hat(n)` is fixed for a sub-case.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum HorizonRule {
    /// `m_hat_t = 0`.
    HatZero,
    /// `m_bar_t = 0`.
    BarZero,
    /// `m_hat_t = m_tilde_t`.
    HatMeetsTilde,
    /// `m_hat_t = m_t`.
    HatMeetsStar,
    /// `m_bar_t = m_t`.
    BarMeetsStar,
    /// `m'_t = 0`.
    PrimeZero,
    /// `gamma* = 0`: no curve reaches zero; use `8 log2(n) / k*`.
    Degree,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ExponentMenu {
    pub notation: Notation,
    pub sub_case: String,
    /// `theta_1..theta_j0`; `+inf` where the `gamma* = 0` convention applies.
    pub thetas: Vec<f64>,
    pub horizon: HorizonRule,
    /// All notations whose preamble matched, in dispatch order.
    pub matched: Vec<Notation>,
}

impl ExponentMenu {
    pub fn j0(&self) -> usize {
        self.thetas.len()
    }

    pub fn boundary_overlap(&self) -> bool {
        self.matched.len() > 1
    }
}

struct Ctx<'a> {
    p: &'a ExponentParams,
    d: DerivedExponents,
    a0: f64,
    a1: f64,
    aq: f64,
    s: f64,
    g: f64,
    mu: f64,
    al: f64,
    p0: f64,
    p1: f64,
    q: f64,
}

impl Ctx<'_> {
    /// `-mu/gamma`, `+inf` under the `gamma = 0, mu < 0` convention.
    fn neg_mu_over_gamma(&self) -> Result<f64> {
        if self.g > ZERO_TOL {
            Ok(-self.mu / self.g)
        } else if self.mu < 0.0 {
            Ok(f64::INFINITY)
        } else {
            Err(Error::NoCaseApplies)
        }
    }

    fn gamma_zero_ok(&self) -> bool {
        self.g > ZERO_TOL || self.mu < 0.0
    }

    fn half_q_sq1(&self) -> f64 {
        0.5 * self.q * (self.s + self.aq - self.a1)
    }

    /// `(alpha(1/p1-1/q) + mu(1/p0-1/q)) / (gamma(1/p1-1/p0))`.
    fn lambda_rate(&self) -> Result<f64> {
        ratio(
            self.al * (self.a1 - self.aq) + self.mu * (self.a0 - self.aq),
            self.g * (self.a1 - self.a0),
        )
        .ok_or(Error::NoCaseApplies)
    }

    /// `s(1/q-1/p0)/(1/p1-1/p0)`.
    fn sigma_low(&self) -> Result<f64> {
        ratio(self.s * (self.aq - self.a0), self.a1 - self.a0).ok_or(Error::NoCaseApplies)
    }

    fn get(v: Option<f64>) -> Result<f64> {
        v.ok_or(Error::NoCaseApplies)
    }

    fn tt(&self) -> Result<f64> {
        Self::get(self.d.theta_tilde)
    }
    fn th(&self) -> Result<f64> {
        Self::get(self.d.theta_hat)
    }
    fn nh(&self) -> Result<f64> {
        Self::get(self.d.nu_hat)
    }
    fn nt(&self) -> Result<f64> {
        Self::get(self.d.nu_tilde)
    }
    fn sh(&self) -> Result<f64> {
        Self::get(self.d.sigma_hat)
    }

    fn preamble(&self, n: Notation) -> bool {
        let p = self.p;
        let (s1, s2) = (p.sum1(), p.sum2());
        let margin = p.smoothness_margin() > 0.0;
        match n {
            Notation::Not2 => margin && s1 <= 0.0 && s2 <= 0.0 && self.gamma_zero_ok(),
            Notation::Not3 => {
                self.p0 >= self.q && self.p1 >= self.q && (s2 > 0.0 || self.gamma_zero_ok())
            }
            Notation::Not4 => margin && s1 < 0.0 && s2 > 0.0,
            Notation::Not5 => margin && s1 > 0.0 && s2 < 0.0,
            Notation::Not6 => self.p0 > self.q && self.q > self.p1 && p.s_01() < 0.0,
        }
    }

    fn menu(&self, n: Notation) -> Result<(String, Vec<f64>, HorizonRule)> {
        use HorizonRule::*;
        let (s, q, p0, p1) = (self.s, self.q, self.p0, self.p1);
        let (a1, aq) = (self.a1, self.aq);
        let (s1, s2) = (self.p.sum1(), self.p.sum2());
        let gz = self.g <= ZERO_TOL;
        let out = |sub: &str, th: Vec<f64>, h: HorizonRule| Ok((String::from(sub), th, h));
        match n {
            Notation::Not2 => {
                let nmg = self.neg_mu_over_gamma()?;
                if p1 >= q || q <= 2.0 {
                    let th = alloc::vec![s - (a1 - aq).max(0.0), nmg - (aq - a1).max(0.0)];
                    out("Not2.p1>=q|q<=2", th, if gz { Degree } else { HatZero })
                } else {
                    let th = alloc::vec![
                        s + (0.5 - a1).min(0.0),
                        self.half_q_sq1(),
                        nmg + (0.5 - aq).min(a1 - aq),
                        0.5 * q * nmg,
                    ];
                    out("Not2.p1<q.q>2", th, if gz { Degree } else { BarZero })
                }
            }
            Notation::Not3 => {
                if s2 > 0.0 {
                    out("Not3.S2>0", alloc::vec![s, self.tt()?], HatMeetsTilde)
                } else {
                    let th = alloc::vec![s, self.neg_mu_over_gamma()? - aq + a1];
                    out("Not3.S2<=0", th, if gz { Degree } else { HatZero })
                }
            }
            Notation::Not4 => {
                let nmg = self.neg_mu_over_gamma()?;
                if p0 < p1 && p1 < q {
                    if q <= 2.0 {
                        out("Not4.case1.q<=2", alloc::vec![s + aq - a1, nmg], HatZero)
                    } else if p1 <= 2.0 {
                        let th = alloc::vec![s + 0.5 - a1, self.half_q_sq1(), nmg + 0.5 - aq, 0.5 * q * nmg];
                        out("Not4.case1.q>2.p1<=2", th, BarZero)
                    } else if p0 >= 2.0 {
                        let th = alloc::vec![s, self.half_q_sq1(), self.tt()?, 0.5 * q * nmg, self.nh()?];
                        out("Not4.case1.q>2.p0>=2", th, BarZero)
                    } else {
                        let th = alloc::vec![
                            s,
                            self.half_q_sq1(),
                            self.tt()?,
                            0.5 * q * nmg,
                            self.nh()?,
                            self.nt()?
                        ];
                        out("Not4.case1.q>2.p0<2<p1", th, BarZero)
                    }
                } else if p0 < q && q < p1 {
                    if q <= 2.0 {
                        out("Not4.case2.q<=2", alloc::vec![s, self.tt()?, self.lambda_rate()?], HatZero)
                    } else if p0 >= 2.0 {
                        out("Not4.case2.q>2.p0>=2", alloc::vec![s, self.tt()?, self.nh()?], PrimeZero)
                    } else {
                        let th = alloc::vec![s, self.tt()?, self.nh()?, self.nt()?];
                        out("Not4.case2.q>2.p0<2", th, PrimeZero)
                    }
                } else {
                    Err(Error::NoCaseApplies)
                }
            }
            Notation::Not5 => {
                if p1 < p0 && p0 < q {
                    if q <= 2.0 {
                        out("Not5.case1.q<=2", alloc::vec![s + aq - a1, self.th()?], HatMeetsStar)
                    } else if p0 <= 2.0 {
                        let th = self.th()?;
                        let v = alloc::vec![s + 0.5 - a1, self.half_q_sq1(), th + 0.5 - aq, 0.5 * q * th];
                        out("Not5.case1.q>2.p0<=2", v, BarMeetsStar)
                    } else if p1 >= 2.0 {
                        let th = self.th()?;
                        let v = alloc::vec![
                            s,
                            self.half_q_sq1(),
                            0.5 * q * th,
                            self.neg_mu_over_gamma()? - aq + a1,
                            self.nh()?
                        ];
                        out("Not5.case1.q>2.p1>=2", v, BarMeetsStar)
                    } else {
                        let th = self.th()?;
                        let v = alloc::vec![
                            s + 0.5 - a1,
                            self.half_q_sq1(),
                            th + 0.5 - aq,
                            0.5 * q * th,
                            self.nh()?,
                            self.nt()?
                        ];
                        out("Not5.case1.q>2.p1<2<p0", v, BarMeetsStar)
                    }
                } else if p1 < q && q < p0 {
                    if q <= 2.0 {
                        let v = alloc::vec![s + aq - a1, self.th()?, self.lambda_rate()?];
                        out("Not5.case2.q<=2", v, HatZero)
                    } else if p1 >= 2.0 {
                        let th = self.th()?;
                        let v = alloc::vec![
                            s,
                            self.half_q_sq1(),
                            0.5 * q * th,
                            self.neg_mu_over_gamma()? - aq + a1,
                            self.nh()?
                        ];
                        out("Not5.case2.q>2.p1>=2", v, PrimeZero)
                    } else {
                        let th = self.th()?;
                        let v = alloc::vec![
                            s + 0.5 - a1,
                            self.half_q_sq1(),
                            th + 0.5 - aq,
                            0.5 * q * th,
                            self.nh()?,
                            self.nt()?
                        ];
                        out("Not5.case2.q>2.p1<2", v, PrimeZero)
                    }
                } else {
                    Err(Error::NoCaseApplies)
                }
            }
            Notation::Not6 => {
                let sq1 = self.p.s_q1();
                if s2 >= 0.0 {
                    if q <= 2.0 {
                        out("Not6.case1.q<=2", alloc::vec![self.sigma_low()?, self.tt()?], HatMeetsTilde)
                    } else if p1 <= 2.0 {
                        out("Not6.case1.q>2.p1<=2", alloc::vec![self.sh()?, self.tt()?], HatMeetsTilde)
                    } else {
                        out("Not6.case1.q>2.p1>2", alloc::vec![s, self.sh()?, self.tt()?], HatMeetsTilde)
                    }
                } else if s1 > 0.0 {
                    if q <= 2.0 {
                        out("Not6.case2.q<=2", alloc::vec![self.sigma_low()?, self.lambda_rate()?], HatZero)
                    } else if p1 <= 2.0 {
                        out("Not6.case2.q>2.p1<=2", alloc::vec![self.sh()?, self.nh()?], PrimeZero)
                    } else {
                        let v = alloc::vec![s, self.sh()?, self.nh()?, self.neg_mu_over_gamma()? - aq + a1];
                        out("Not6.case2.q>2.p1>2", v, PrimeZero)
                    }
                } else if s1 < 0.0 && sq1 < 0.0 {
                    if q <= 2.0 {
                        out("Not6.case3.q<=2", alloc::vec![self.sigma_low()?, self.th()?], HatMeetsStar)
                    } else {
                        out("Not6.case3.q>2", alloc::vec![self.sh()?, 0.5 * q * self.th()?], BarMeetsStar)
                    }
                } else if s1 < 0.0 && sq1 > 0.0 {
                    let nmg = self.neg_mu_over_gamma()?;
                    if q <= 2.0 {
                        let v = alloc::vec![self.sigma_low()?, self.th()?, nmg];
                        out("Not6.case4.q<=2", v, if gz { Degree } else { HatZero })
                    } else if p1 <= 2.0 {
                        let v = alloc::vec![self.sh()?, 0.5 * q * nmg, 0.5 * q * self.th()?];
                        out("Not6.case4.q>2.p1<=2", v, if gz { Degree } else { BarZero })
                    } else {
                        let v = alloc::vec![
                            s,
                            self.sh()?,
                            0.5 * q * nmg,
                            0.5 * q * self.th()?,
                            nmg - aq + a1
                        ];
                        out("Not6.case4.q>2.p1>2", v, if gz { Degree } else { BarZero })
                    }
                } else {
                    Err(Error::NoCaseApplies)
                }
            }
        }
    }
}

const ALL_NOTATIONS: [Notation; 5] =
    [Notation::Not2, Notation::Not3, Notation::Not4, Notation::Not5, Notation::Not6];

fn ctx(p: &ExponentParams) -> Result<Ctx<'_>> {
    Ok(Ctx {
        p,
        d: derived_exponents(p)?,
        a0: p.a0(),
        a1: p.a1(),
        aq: p.aq(),
        s: p.s_star,
        g: p.gamma_star,
        mu: p.mu_star,
        al: p.alpha_star,
        p0: p.p0.value(),
        p1: p.p1.value(),
        q: p.q.value(),
    })
}

/// Menus of every notation whose preamble matches, in dispatch order. Entries whose sub-case
/// does not resolve are skipped.
pub fn all_menus(p: &ExponentParams) -> Result<Vec<ExponentMenu>> {
    let c = ctx(p)?;
    let matched: Vec<Notation> = ALL_NOTATIONS.iter().copied().filter(|n| c.preamble(*n)).collect();
    let mut menus = Vec::new();
    for n in &matched {
        if let Ok((sub_case, thetas, horizon)) = c.menu(*n) {
            menus.push(ExponentMenu { notation: *n, sub_case, thetas, horizon, matched: matched.clone() });
        }
    }
    Ok(menus)
}

/// The first notation (Not2 through Not6) whose preamble and sub-case both resolve.
pub fn exponent_menu(p: &ExponentParams) -> Result<ExponentMenu> {
    all_menus(p)?.into_iter().next().ok_or(Error::NoCaseApplies)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum WidthStatus {
    Determined,
    NoGap,
    NonPositive,
    NoCaseApplies,
}

impl WidthStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            WidthStatus::Determined => "Determined",
            WidthStatus::NoGap => "NoGap",
            WidthStatus::NonPositive => "NonPositive",
            WidthStatus::NoCaseApplies => "NoCaseApplies",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct WidthExponentResult {
    pub status: WidthStatus,
    /// Smallest menu entry (reported even when not determined).
    pub theta_star: Option<f64>,
    /// 1-based index of `theta_star` in the menu.
    pub j_star: Option<usize>,
    pub menu: Option<ExponentMenu>,
}

/// Picks the strict minimum of a menu. Ties within `GAP_TOL` give `NoGap`; a nonpositive
/// minimum gives `NonPositive`. `+inf` entries never win.
pub fn resolve_menu(menu: ExponentMenu) -> WidthExponentResult {
    let mut best: Option<(usize, f64)> = None;
    for (i, &t) in menu.thetas.iter().enumerate() {
        if t.is_finite() && best.is_none_or(|(_, b)| t < b) {
            best = Some((i, t));
        }
    }
    let Some((j, min)) = best else {
        return WidthExponentResult { status: WidthStatus::NoCaseApplies, theta_star: None, j_star: None, menu: Some(menu) };
    };
    let runner_up = menu
        .thetas
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != j)
        .map(|(_, t)| *t)
        .fold(f64::INFINITY, f64::min);
    let status = if runner_up - min <= GAP_TOL {
        WidthStatus::NoGap
    } else if min <= 0.0 {
        WidthStatus::NonPositive
    } else {
        WidthStatus::Determined
    };
    WidthExponentResult { status, theta_star: Some(min), j_star: Some(j + 1), menu: Some(menu) }
}

pub fn width_exponent(p: &ExponentParams) -> Result<WidthExponentResult> {
    match exponent_menu(p) {
        Ok(menu) => Ok(resolve_menu(menu)),
        Err(Error::NoCaseApplies) => Ok(WidthExponentResult {
            status: WidthStatus::NoCaseApplies,
            theta_star: None,
            j_star: None,
            menu: None,
        }),
        Err(e) => Err(e),
    }
}

/// Whether the widths of the full class already have the order of the embedding exponent's
/// single-class estimate (the set does not improve on it).
pub fn remark1_applies(p: &ExponentParams) -> Result<bool> {
    p.validate()?;
    let (p0, p1, q) = (p.p0.value(), p.p1.value(), p.q.value());
    Ok(p.sum2() >= 0.0 && ((p0 >= q && p1 >= q) || (p0 > q && q > p1 && p.s_01() < 0.0)))
}
