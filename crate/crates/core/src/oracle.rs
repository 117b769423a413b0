//! Exact and sampled numerical checks for small dimensions.
//!
//! Deviations `sup_{x in nu B_p} dist(x, L)_q` are computed exactly by enumerating the extreme
//! points of `B_1` (`±e_i`) or `B_inf` (sign vectors); distance is convex so the supremum sits
//! at a vertex.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::intersection::{interpolation_bound, InterpTarget, TwoBallSpec};
use crate::params::{pow, Exponent};

/// Largest dimension for which `B_inf` vertices are enumerated.
pub const MAX_SIGN_DIM: usize = 14;

/// Absolute slack for the exact comparisons.
pub const ORACLE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Subspace {
    /// Span of the listed standard basis vectors.
    Coordinate(Vec<usize>),
    /// Span of arbitrary vectors; supported only with `q = 2`.
    Spanned(Vec<Vec<f64>>),
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SubspaceSpec {
    pub dim: usize,
    pub subspace: Subspace,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DeviationReport {
    pub value: f64,
    pub witness: Vec<f64>,
    pub exact: bool,
}

pub fn norm(x: &[f64], p: Exponent) -> f64 {
    if p.is_infinite() {
        x.iter().fold(0.0, |m, v| m.max(v.abs()))
    } else if p.value() == 1.0 {
        x.iter().map(|v| v.abs()).sum()
    } else if p.value() == 2.0 {
        Float::sqrt(x.iter().map(|v| v * v).sum::<f64>())
    } else {
        let pv = p.value();
        pow(x.iter().map(|v| pow(v.abs(), pv)).sum::<f64>(), 1.0 / pv)
    }
}

/// Orthonormal basis of the span, dropping numerically dependent vectors.
fn orthonormalize(vs: &[Vec<f64>], dim: usize) -> Result<Vec<Vec<f64>>> {
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for v in vs {
        if v.len() != dim {
            return Err(Error::InvalidQuery("spanning vector has wrong length"));
        }
        let mut w = v.clone();
        // Two passes of modified Gram-Schmidt keep the basis orthogonal to rounding.
        for _ in 0..2 {
            for b in &basis {
                let c: f64 = w.iter().zip(b).map(|(x, y)| x * y).sum();
                w.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
            }
        }
        let n = norm(&w, Exponent::TWO);
        if n > 1e-10 * norm(v, Exponent::TWO).max(1.0) {
            w.iter_mut().for_each(|x| *x /= n);
            basis.push(w);
        }
    }
    Ok(basis)
}

enum Projector {
    Coordinate(Vec<bool>),
    Orthogonal(Vec<Vec<f64>>),
}

impl Projector {
    fn new(spec: &SubspaceSpec, q: Exponent) -> Result<Projector> {
        match &spec.subspace {
            Subspace::Coordinate(idx) => {
                let mut keep = vec![false; spec.dim];
                for &i in idx {
                    *keep.get_mut(i).ok_or(Error::InvalidQuery("coordinate index out of range"))? = true;
                }
                Ok(Projector::Coordinate(keep))
            }
            Subspace::Spanned(vs) => {
                if q.value() != 2.0 {
                    return Err(Error::UnsupportedCombination);
                }
                Ok(Projector::Orthogonal(orthonormalize(vs, spec.dim)?))
            }
        }
    }

    fn distance(&self, x: &[f64], q: Exponent, buf: &mut Vec<f64>) -> f64 {
        buf.clear();
        match self {
            Projector::Coordinate(keep) => {
                buf.extend(x.iter().zip(keep).map(|(v, k)| if *k { 0.0 } else { *v }));
            }
            Projector::Orthogonal(basis) => {
                buf.extend_from_slice(x);
                for b in basis {
                    let c: f64 = buf.iter().zip(b).map(|(u, v)| u * v).sum();
                    buf.iter_mut().zip(b).for_each(|(u, v)| *u -= c * v);
                }
            }
        }
        norm(buf, q)
    }
}

/// Calls `f` on every extreme point of `nu B_p` up to sign (`x` and `-x` have equal distance).
fn for_each_vertex(p: Exponent, nu: f64, dim: usize, mut f: impl FnMut(&[f64])) -> Result<()> {
    let mut x = vec![0.0; dim];
    if p.value() == 1.0 {
        for i in 0..dim {
            x[i] = nu;
            f(&x);
            x[i] = 0.0;
        }
        Ok(())
    } else if p.is_infinite() {
        if dim > MAX_SIGN_DIM {
            return Err(Error::DimensionTooLarge);
        }
        let half = if dim == 0 { 1u32 } else { 1u32 << (dim - 1) };
        for mask in 0..half {
            for (i, xi) in x.iter_mut().enumerate() {
                *xi = if mask >> i & 1 == 1 { -nu } else { nu };
            }
            f(&x);
        }
        Ok(())
    } else {
        Err(Error::UnsupportedCombination)
    }
}

/// `sup_{x in nu B_p} min_{y in L} ||x - y||_q` for `p in {1, inf}`.
pub fn deviation(p: Exponent, nu: f64, spec: &SubspaceSpec, q: Exponent) -> Result<DeviationReport> {
    if !(nu > 0.0) {
        return Err(Error::InvalidQuery("radius must be positive"));
    }
    let proj = Projector::new(spec, q)?;
    let mut best = DeviationReport { value: 0.0, witness: vec![0.0; spec.dim], exact: true };
    let mut buf = Vec::with_capacity(spec.dim);
    for_each_vertex(p, nu, spec.dim, |x| {
        let d = proj.distance(x, q, &mut buf);
        if d > best.value {
            best.value = d;
            best.witness.copy_from_slice(x);
        }
    })?;
    Ok(best)
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PietschStesinReport {
    /// Exact deviation of `B_p` from the first `n` coordinates.
    pub value: f64,
    /// `(N - n)^{1/q - 1/p}`.
    pub bound: f64,
    /// Largest `bound / deviation` over all tested subspaces; at most `1` when the bound holds.
    pub max_ratio: f64,
    pub trials: u32,
    pub seed: u64,
    pub exact: bool,
    pub min_random_deviation: Option<f64>,
    pub passed: bool,
}

fn ratio(bound: f64, dev: f64) -> f64 {
    if bound <= ORACLE_TOL && dev <= ORACLE_TOL {
        1.0
    } else {
        bound / dev
    }
}

/// Random `n`-dimensional subspace of `R^dim` with Gaussian spanning vectors.
pub fn random_subspace(dim: usize, n: usize, seed: u64) -> SubspaceSpec {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vs = (0..n)
        .map(|_| (0..dim).map(|_| rng.sample::<f64, _>(StandardNormal)).collect())
        .collect();
    SubspaceSpec { dim, subspace: Subspace::Spanned(vs) }
}

/// Checks `d_n(B_p^N, l_q^N) = (N-n)^{1/q-1/p}` for `p in {1, inf}`, `q <= p`: the coordinate
/// subspace attains it, and for `q = 2` no random subspace beats it. Trial `i` uses seed
/// `seed + i`.
pub fn pietsch_stesin_check(p: Exponent, q: Exponent, dim: usize, n: usize, trials: u32, seed: u64) -> Result<PietschStesinReport> {
    if q > p || q.is_infinite() {
        return Err(Error::UnsupportedCombination);
    }
    if dim == 0 || n > dim {
        return Err(Error::InvalidQuery("need 1 <= N and n <= N"));
    }
    let bound = if n == dim { 0.0 } else { pow((dim - n) as f64, q.recip() - p.recip()) };
    let coord = SubspaceSpec { dim, subspace: Subspace::Coordinate((0..n).collect()) };
    let value = deviation(p, 1.0, &coord, q)?.value;
    let tol = ORACLE_TOL * bound.max(1.0);
    let mut passed = (value - bound).abs() <= tol;
    let mut max_ratio = ratio(bound, value);
    let mut min_random = None;
    let mut run = 0;
    if q.value() == 2.0 {
        for i in 0..trials {
            let sub = random_subspace(dim, n, seed.wrapping_add(i as u64));
            let d = deviation(p, 1.0, &sub, q)?.value;
            min_random = Some(min_random.map_or(d, |m: f64| m.min(d)));
            max_ratio = max_ratio.max(ratio(bound, d));
            passed &= d >= bound - tol;
            run += 1;
        }
    }
    Ok(PietschStesinReport { value, bound, max_ratio, trials: run, seed, exact: true, min_random_deviation: min_random, passed })
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct InclusionReport {
    /// Largest target norm seen among boundary points of the intersection.
    pub value: f64,
    /// Interpolated radius `nu0^w nu1^{1-w}`.
    pub bound: f64,
    pub max_ratio: f64,
    pub trials: u64,
    pub accepted: u64,
    pub acceptance_rate: f64,
    pub seed: u64,
    pub exact: bool,
}

/// Largest dimension accepted by [`inclusion_check`].
pub const MAX_SAMPLE_DIM: f64 = 64.0;

/// Samples the intersection and checks it lies inside the interpolated target ball.
///
/// Points are drawn uniformly from `[-r, r]^N`, `r = min(nu0, nu1)`, kept if inside both balls,
/// then pushed radially onto the boundary of the intersection before measuring.
pub fn inclusion_check(spec: &TwoBallSpec, target: InterpTarget, samples: u64, seed: u64) -> Result<InclusionReport> {
    let bound = interpolation_bound(spec, target)?;
    if !(spec.dim >= 1.0 && spec.dim <= MAX_SAMPLE_DIM) {
        return Err(Error::DimensionTooLarge);
    }
    if samples == 0 {
        return Err(Error::InvalidQuery("need at least one sample"));
    }
    let t = match target {
        InterpTarget::Q => spec.q,
        InterpTarget::Two => Exponent::TWO,
    };
    let dim = spec.dim as usize;
    let r = spec.nu0.min(spec.nu1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x = vec![0.0; dim];
    let (mut accepted, mut best) = (0u64, 0.0f64);
    for _ in 0..samples {
        x.iter_mut().for_each(|v| *v = rng.gen_range(-r..=r));
        let (n0, n1) = (norm(&x, spec.p0), norm(&x, spec.p1));
        if n0 > spec.nu0 || n1 > spec.nu1 || n0 == 0.0 {
            continue;
        }
        accepted += 1;
        let c = (spec.nu0 / n0).min(spec.nu1 / n1);
        best = best.max(c * norm(&x, t));
    }
    let acceptance_rate = accepted as f64 / samples as f64;
    if acceptance_rate < 1e-4 {
        return Err(Error::SamplingStarved { acceptance_rate });
    }
    Ok(InclusionReport {
        value: best,
        bound,
        max_ratio: best / bound,
        trials: samples,
        accepted,
        acceptance_rate,
        seed,
        exact: false,
    })
}
