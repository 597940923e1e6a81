use alloc::vec;
use alloc::vec::Vec;

use crate::model::{PhaseState, SystemSpec};
use crate::vector::PlanarVector;

use super::{ConfigSolution, ConfigTag};

/// Phase state at `t = 0` of the rotating configuration: charges on the
/// x-axis at radius `v_i/ω`, moving clockwise (counterclockwise for `:ccw`
/// branches).
pub fn build_initial_state(sol: &ConfigSolution, spec: &SystemSpec) -> PhaseState {
    let w = sol.omega.abs();
    let pv = PlanarVector::new;
    let (mut q, mut v): (Vec<PlanarVector>, Vec<PlanarVector>) = match sol.config {
        ConfigTag::II | ConfigTag::NbodyII => {
            (sol.v.iter().map(|s| pv(s / w, 0.0)).collect(), sol.v.iter().map(|s| pv(0.0, -s)).collect())
        }
        ConfigTag::IIIa => (
            vec![pv(sol.v[0] / w, 0.0), pv(sol.v[1] / w, 0.0), pv(-sol.v[2] / w, 0.0)],
            vec![pv(0.0, -sol.v[0]), pv(0.0, -sol.v[1]), pv(0.0, sol.v[2])],
        ),
        ConfigTag::IV3Zero | ConfigTag::IV3Nonzero => {
            let (c, vc) = match sol.omega3 {
                Some(w3) if sol.v[2] != 0.0 => (pv(sol.v[2] / w3.abs(), 0.0), pv(0.0, -sol.v[2])),
                _ => (PlanarVector::ZERO, PlanarVector::ZERO),
            };
            (
                vec![c + pv(sol.v[0] / w, 0.0), c - pv(sol.v[1] / w, 0.0), c],
                vec![vc + pv(0.0, -sol.v[0]), vc + pv(0.0, sol.v[1]), vc],
            )
        }
    };
    if sol.is_ccw() {
        for x in &mut v {
            x.y = -x.y;
        }
    }
    debug_assert_eq!(q.len(), spec.len());
    q.truncate(spec.len());
    PhaseState::new(0.0, q, v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solvers::solve_config_i_identical;
    use alloc::string::String;

    #[test]
    fn figure_state() {
        let spec = SystemSpec::from_slices(&[-1.0; 3], &[1.0; 3], -2.0).unwrap();
        let sol = &solve_config_i_identical(&spec, libm::cbrt(10.0), Some(1.0)).unwrap()[0];
        let st = build_initial_state(sol, &spec);
        let c = libm::cbrt(1.25);
        assert!((st.positions[2] - PlanarVector::new(0.5, 0.0)).norm() < 1e-12);
        assert!((st.positions[0] - PlanarVector::new(0.5 + c, 0.0)).norm() < 1e-10);
        assert!((st.positions[1] - PlanarVector::new(0.5 - c, 0.0)).norm() < 1e-10);
        assert!((st.velocities[0] - PlanarVector::new(0.0, -c - 1.0)).norm() < 1e-10);
        assert!((st.velocities[1] - PlanarVector::new(0.0, c - 1.0)).norm() < 1e-10);
    }

    #[test]
    fn collinear_state_on_axis() {
        let spec = SystemSpec::from_slices(&[1.0, 2.0, 3.0], &[1.0; 3], 1.0).unwrap();
        let sol = ConfigSolution {
            config: ConfigTag::II,
            branch: String::from("r1"),
            v: vec![0.5, 1.0, 2.0],
            omega: 2.0,
            omega3: None,
            b: 1.0,
            residual_norm: 0.0,
            kappa: None,
        };
        let st = build_initial_state(&sol, &spec);
        assert_eq!(st.positions, vec![PlanarVector::new(0.25, 0.0), PlanarVector::new(0.5, 0.0), PlanarVector::new(1.0, 0.0)]);
        assert_eq!(st.velocities[2], PlanarVector::new(0.0, -2.0));
        let mut iii = sol.clone();
        iii.config = ConfigTag::IIIa;
        iii.v = vec![2.0, 1.0, 0.5];
        let st = build_initial_state(&iii, &spec);
        assert_eq!(st.positions[2], PlanarVector::new(-0.25, 0.0));
        assert_eq!(st.velocities[2], PlanarVector::new(0.0, 0.5));
    }

    #[test]
    fn pair_separation_is_sum_of_radii() {
        let spec = SystemSpec::from_slices(&[1.0, 4.0, 1.0], &[1.0, 5.0, 2.0], 0.0).unwrap();
        let sol = crate::solvers::solve_config_i_v3zero(&spec, 1.0).unwrap();
        let st = build_initial_state(&sol, &spec);
        let d = (st.positions[0] - st.positions[1]).norm();
        assert!((d - (sol.v[0] + sol.v[1]) / sol.omega).abs() < 1e-12);
    }
}
