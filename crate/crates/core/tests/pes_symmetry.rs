//! Symmetries of the collinear H3 surface.

use proptest::prelude::*;
use qneb_core::groundstate::solve_ed;
use qneb_core::hamiltonian::{Geometry, HamiltonianBuilder, OrbitalBasis};

fn energy(geometry: &Geometry, basis: OrbitalBasis) -> f64 {
    let h = HamiltonianBuilder::new(basis).build(geometry).unwrap();
    solve_ed(&h, None).unwrap().energy
}

fn basis() -> impl Strategy<Value = OrbitalBasis> {
    prop_oneof![Just(OrbitalBasis::Lowdin), Just(OrbitalBasis::CoreHamiltonian)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn mirror_swaps_bonds(a in 0.4f64..3.5, b in 0.4f64..3.5, basis in basis()) {
        let e_ab = energy(&Geometry::h3(a, b).unwrap(), basis);
        let e_ba = energy(&Geometry::h3(b, a).unwrap(), basis);
        prop_assert!((e_ab - e_ba).abs() < 1e-10, "{e_ab} vs {e_ba}");
    }

    #[test]
    fn rigid_translation_leaves_energy(a in 0.4f64..3.5, b in 0.4f64..3.5, shift in -5.0f64..5.0, basis in basis()) {
        let g = Geometry::h3(a, b).unwrap();
        let e0 = energy(&g, basis);
        let e1 = energy(&g.translated(shift), basis);
        prop_assert!((e0 - e1).abs() < 1e-10, "{e0} vs {e1}");
    }
}

#[test]
fn orbital_choice_does_not_change_exact_energy() {
    for (a, b) in [(0.73, 4.0), (0.94, 0.94), (1.2, 0.8)] {
        let g = Geometry::h3(a, b).unwrap();
        let l = energy(&g, OrbitalBasis::Lowdin);
        let c = energy(&g, OrbitalBasis::CoreHamiltonian);
        assert!((l - c).abs() < 1e-9, "({a}, {b}): {l} vs {c}");
    }
}

#[test]
fn symmetric_point_has_equal_bond_derivatives() {
    let h = 1e-4;
    let r = 0.94;
    let e = |a: f64, b: f64| energy(&Geometry::h3(a, b).unwrap(), OrbitalBasis::Lowdin);
    let d_ab = (e(r + h, r) - e(r - h, r)) / (2.0 * h);
    let d_bc = (e(r, r + h) - e(r, r - h)) / (2.0 * h);
    assert!((d_ab - d_bc).abs() < 1e-8, "{d_ab} vs {d_bc}");
}
