//! Byte-stable output formats.
//!
//! CSV numbers carry 17 significant digits with '.' separators and LF line
//! endings so that repeated runs of the same config compare byte-identical.

use topowalk::evolve::Trajectory;

use crate::runner::{Manifest, RunError};

/// 17 significant digits: enough to round-trip any f64 exactly.
pub fn sig17(x: f64) -> String {
    format!("{x:.16e}")
}

/// Snapshot table with columns `t,x,p0,p1`.
pub fn format_csv(traj: &Trajectory) -> String {
    let mut out = String::with_capacity(64 * traj.len());
    out.push_str("t,x,p0,p1\n");
    for (t, state) in traj.times.iter().zip(traj.states.iter()) {
        let t_str = sig17(*t);
        let lat = state.lattice();
        for x in lat.iter_x() {
            let idx = lat.index_of(x).expect("site in window");
            let p0 = state.psi0()[idx].norm_sqr();
            let p1 = state.psi1()[idx].norm_sqr();
            out.push_str(&t_str);
            out.push(',');
            out.push_str(&x.to_string());
            out.push(',');
            out.push_str(&sig17(p0));
            out.push(',');
            out.push_str(&sig17(p1));
            out.push('\n');
        }
    }
    out
}

pub fn format_manifest(manifest: &Manifest<'_>) -> Result<String, RunError> {
    serde_json::to_string_pretty(manifest)
        .map(|mut s| {
            s.push('\n');
            s
        })
        .map_err(|e| RunError::Config(format!("manifest serialization: {e}")))
}

/// Dispersion table with columns `k,omega_plus,omega_minus`.
pub fn format_dispersion_csv(points: &[topowalk::momentum::DispersionPoint]) -> String {
    let mut out = String::from("k,omega_plus,omega_minus\n");
    for p in points {
        out.push_str(&format!(
            "{},{},{}\n",
            sig17(p.k),
            sig17(p.omega_plus),
            sig17(p.omega_minus)
        ));
    }
    out
}

/// Phase-diagram table with columns `theta1,theta2,nu0,nu1,label`; boundary
/// points carry empty winding columns and the label `boundary`.
pub fn format_phase_diagram_csv(points: &[topowalk::invariants::PhaseDiagramPoint]) -> String {
    let mut out = String::from("theta1,theta2,nu0,nu1,label\n");
    for p in points {
        match p.label {
            Some(label) => out.push_str(&format!(
                "{},{},{},{},{}\n",
                sig17(p.theta1),
                sig17(p.theta2),
                label.nu0(),
                label.nu1(),
                label.name()
            )),
            None => out.push_str(&format!(
                "{},{},,,boundary\n",
                sig17(p.theta1),
                sig17(p.theta2)
            )),
        }
    }
    out
}
