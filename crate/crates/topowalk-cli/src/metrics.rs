//! Per-snapshot observables and the ballistic-spread fit.

use serde::Serialize;
use topowalk::state::{position_mean, position_std, region_probability, WalkerState};

/// Observables recorded for every snapshot.
#[derive(Debug, Clone, Serialize)]
pub struct SnapshotMetrics {
    pub t: f64,
    pub norm: f64,
    /// Probability on the site x = 0.
    pub p_site0: f64,
    /// Probability on the near-seam block x in [-2, 1].
    pub p_boundary_region: f64,
    /// Probability strictly left of the seam (x < 0).
    pub p_left: f64,
    /// Probability on x >= 0.
    pub p_right: f64,
    /// Probability sitting on the two window edges; stays below 1e-8 in a
    /// well-sized experiment window.
    pub p_edge: f64,
    pub position_mean: f64,
    pub position_std: f64,
}

pub fn snapshot_metrics(t: f64, state: &WalkerState) -> SnapshotMetrics {
    let lat = state.lattice();
    let clip = |lo: i64, hi: i64| (lo.max(lat.x_min()), hi.min(lat.x_max()));
    let region = |lo: i64, hi: i64| {
        let (lo, hi) = clip(lo, hi);
        if lo > hi {
            0.0
        } else {
            region_probability(state, lo, hi).unwrap_or(0.0)
        }
    };
    SnapshotMetrics {
        t,
        norm: state.norm_squared(),
        p_site0: state.probability(0),
        p_boundary_region: region(-2, 1),
        p_left: region(lat.x_min(), -1),
        p_right: region(0, lat.x_max()),
        p_edge: state.probability(lat.x_min()) + state.probability(lat.x_max()),
        position_mean: position_mean(state),
        position_std: position_std(state),
    }
}

/// Least-squares line with coefficient of determination.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

pub fn linear_fit(points: &[(f64, f64)]) -> Option<LinearFit> {
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    for (x, y) in points {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
    }
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let mut ss_res = 0.0;
    let mut ss_tot = 0.0;
    for (x, y) in points {
        let f = intercept + slope * x;
        ss_res += (y - f) * (y - f);
        ss_tot += (y - my) * (y - my);
    }
    let r_squared = if ss_tot > 0.0 {
        1.0 - ss_res / ss_tot
    } else {
        1.0
    };
    Some(LinearFit {
        slope,
        intercept,
        r_squared,
    })
}

/// Fit of the packet width over the second half of a run.
pub fn sigma_fit(times: &[f64], widths: &[f64]) -> Option<LinearFit> {
    let t_mid = times.last()? / 2.0;
    let points: Vec<(f64, f64)> = times
        .iter()
        .zip(widths.iter())
        .filter(|(t, _)| **t >= t_mid)
        .map(|(&t, &w)| (t, w))
        .collect();
    linear_fit(&points)
}
