//! The largest lattice term sits within one lattice step of a vertex of the regime partition.
//! The discrete check runs on hand-built sets at `k* = 1`. On flat edges the ceiling in `m`
//! lets the discrete maximum drift, so random parameters are checked on the continuous model.

use proptest::prelude::*;
use widthlab_core::engine::{exponent_menu, width_exponent, WidthStatus};
use widthlab_core::lattice::{critical_curves, lattice_sum, phi_continuous, t_hat};
use widthlab_core::{Exponent, ExponentParams};

fn e(v: f64) -> Exponent {
    Exponent::new(v).unwrap()
}

/// Boundary lines of the partition at `t`: the curves and `m = 0`. The dimension floor
/// `nu_{t,m} >= 2n` is `m >= m_hat`.
fn lines(p: &ExponentParams, n: u64, t: f64) -> Vec<Option<f64>> {
    let c = critical_curves(p, n, t).unwrap();
    vec![Some(c.m_hat), c.m_bar, Some(c.m_tilde), c.m_star, c.m_prime, Some(0.0)]
}

/// Corners on `t = 0` and `t = t_hat`, plus pairwise crossings of boundary lines in between.
fn vertices(p: &ExponentParams, n: u64, t_hat: f64) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    for t in [0.0, t_hat] {
        for m in lines(p, n, t).into_iter().flatten() {
            out.push((t, m));
        }
    }
    let steps = 400;
    let grid: Vec<f64> = (0..=steps).map(|i| t_hat * i as f64 / steps as f64).collect();
    let k = lines(p, n, 0.0).len();
    for a in 0..k {
        for b in a + 1..k {
            let gap = |t: f64| {
                let l = lines(p, n, t);
                l[a].zip(l[b]).map(|(x, y)| x - y)
            };
            for w in grid.windows(2) {
                let (Some(g0), Some(g1)) = (gap(w[0]), gap(w[1])) else { continue };
                if g0 == 0.0 || g0.signum() != g1.signum() {
                    let (mut lo, mut hi) = (w[0], w[1]);
                    for _ in 0..100 {
                        let mid = 0.5 * (lo + hi);
                        if gap(mid).unwrap().signum() == g0.signum() {
                            lo = mid;
                        } else {
                            hi = mid;
                        }
                    }
                    out.push((lo, lines(p, n, lo)[a].unwrap()));
                }
            }
        }
    }
    out
}

fn near_vertex(p: &ExponentParams, n: u64) -> Result<(), String> {
    let s = lattice_sum(p, n).map_err(|err| err.to_string())?;
    let (t, m) = (s.dominant_t as f64, s.dominant_m as f64);
    let vs = vertices(p, n, s.t_hat);
    // Vertices are real points and the lowest admissible m is a ceiling. Along an edge
    // `m = c - gamma k t` one lattice step in t moves m by `gamma k`, and one step in m moves t
    // by `1 / (gamma k)`.
    let slope = p.gamma_star * p.k_star;
    let (t_tol, m_tol) = (1.0 + 1.0f64.max(1.0 / slope), 1.0 + 1.0f64.max(slope));
    if vs.iter().any(|&(vt, vm)| (vt - t).abs() < t_tol && (vm - m).abs() < m_tol) {
        Ok(())
    } else {
        Err(format!("dominant node ({t}, {m}) is not within one step of any of {vs:?}"))
    }
}

#[test]
fn dominant_node_sits_at_a_vertex() {
    let inf = f64::INFINITY;
    let sets = [
        (3.0, 3.0, 2.0, 1.0, 1.0, -0.5, 0.2),
        (4.0, 3.0, 2.0, 2.0, 1.0, -0.1, 0.9),
        (4.0, 3.0, 2.0, 0.5, 1.0, -0.1, 0.5),
        (1.2, 1.5, 2.0, 2.0, 2.0, -0.4, 0.2),
        (1.5, 1.2, 2.0, 2.0, 2.0, -0.5, 0.7),
        (inf, 1.05, 2.0, 0.9, 0.5, -0.5, 0.7),
    ];
    for (p0, p1, q, s, g, mu, al) in sets {
        let p = ExponentParams::new(e(p0), e(p1), e(q), s, g, mu, al).unwrap();
        for n in [1u64 << 10, 1 << 14, 1 << 18] {
            near_vertex(&p, n).unwrap_or_else(|msg| panic!("{p:?} n={n}: {msg}"));
        }
    }
}

/// Largest `log2 phi` of the continuous model over a grid of the domain
/// `0 <= t <= t_hat, m >= max(m_hat_t, 0)`.
fn grid_max(p: &ExponentParams, n: u64, t_hat: f64, m_top: f64) -> f64 {
    let mut best = f64::NEG_INFINITY;
    for i in 0..=120 {
        let t = t_hat * i as f64 / 120.0;
        let lo = critical_curves(p, n, t).unwrap().m_hat.max(0.0);
        for j in 0..=120 {
            let m = lo + (m_top - lo).max(0.0) * j as f64 / 120.0;
            best = best.max(phi_continuous(p, t, m, n as f64).1.log2());
        }
    }
    best
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    /// `phi` is log-linear on every cell of the partition, so its supremum over the domain is
    /// taken at a vertex.
    #[test]
    fn continuous_maximum_sits_at_a_vertex(
        p0 in 1.1f64..6.0, p1 in 1.1f64..6.0, q in 1.0f64..5.0, s in 0.3f64..2.5,
        g in 0.3f64..2.0, mu in -1.0f64..1.0, al in -1.0f64..1.0, log_n in 10u32..16,
    ) {
        let p = ExponentParams::new(e(p0), e(p1), e(q), s, g, mu, al).unwrap();
        prop_assume!(width_exponent(&p).unwrap().status == WidthStatus::Determined);
        let n = 1u64 << log_n;
        let menu = exponent_menu(&p).unwrap();
        let t_hat = t_hat(&p, menu.horizon, n);
        let vs = vertices(&p, n, t_hat);
        let at_vertex = vs
            .iter()
            .filter(|&&(t, m)| m >= critical_curves(&p, n, t).unwrap().m_hat.max(0.0) - 1e-9)
            .map(|&(t, m)| phi_continuous(&p, t, m.max(0.0), n as f64).1.log2())
            .fold(f64::NEG_INFINITY, f64::max);
        let m_top = vs.iter().map(|v| v.1).fold(0.0f64, f64::max) + 8.0;
        let on_grid = grid_max(&p, n, t_hat, m_top);
        prop_assert!(on_grid <= at_vertex + 1e-9, "{:?} n={}: grid {} > vertex {}", p, n, on_grid, at_vertex);
    }
}
