use vqevo_core::exact::{dense_ground_energy, lanczos_ground_energy, mean_field_exact, LanczosConfig, SectorChoice};
use vqevo_core::hamiltonian::{build_heisenberg, build_mean_field, build_random_hamiltonian};
use vqevo_core::lattice::{build_lattice, Boundary};

#[test]
fn cube_3x3x2_ground_energy_per_spin() {
    let h = build_heisenberg(&build_lattice(&[3, 3, 2], Boundary::Open).unwrap(), 1.0);
    let r = lanczos_ground_energy(&h, 1, &LanczosConfig { sector: SectorChoice::Full, ..Default::default() }).unwrap();
    assert!((r.per_spin()[0] + 2.617).abs() < 1e-3, "{:?}", r.per_spin());
    assert!(r.residuals[0] < 1e-8);
}

#[test]
fn ring_dense_and_lanczos_agree() {
    let h = build_heisenberg(&build_lattice(&[10], Boundary::Periodic).unwrap(), 1.0);
    let d = dense_ground_energy(&h, 3).unwrap();
    let l = lanczos_ground_energy(&h, 3, &LanczosConfig::default()).unwrap();
    for (a, b) in d.eigenvalues.iter().zip(&l.eigenvalues) {
        assert!((a - b).abs() < 1e-9, "{a} vs {b}");
    }
    assert!(l.residuals.iter().all(|r| *r < 1e-8));
}

#[test]
fn mean_field_closed_form_matches_oracles() {
    for n in 2..=10 {
        let e = dense_ground_energy(&build_mean_field::<f64>(n).unwrap(), 1).unwrap().ground_energy();
        assert!((e - mean_field_exact(n)).abs() < 1e-9, "N={n}");
    }
    for n in 11..=13 {
        let h = build_mean_field::<f64>(n).unwrap();
        let e = lanczos_ground_energy(&h, 1, &LanczosConfig::default()).unwrap().ground_energy();
        assert!((e - mean_field_exact(n)).abs() < 1e-8, "N={n}");
    }
}

#[test]
fn mean_field_energy_is_shared_by_consecutive_sizes() {
    let cfg = LanczosConfig::default();
    for n in [2, 4, 6, 8, 10, 12] {
        let even = lanczos_ground_energy(&build_mean_field::<f64>(n).unwrap(), 1, &cfg).unwrap().ground_energy();
        let odd = lanczos_ground_energy(&build_mean_field::<f64>(n + 1).unwrap(), 1, &cfg).unwrap().ground_energy();
        assert!((even - odd).abs() < 1e-8, "N={n}: {even} vs {odd}");
    }
}

#[test]
fn random_hamiltonians_dense_and_lanczos_agree() {
    let cfg = LanczosConfig::default();
    for seed in 0..20 {
        let h = build_random_hamiltonian::<f64>(5 + (seed as usize % 4), seed).unwrap();
        let d = dense_ground_energy(&h, 2).unwrap();
        let l = lanczos_ground_energy(&h, 2, &cfg).unwrap();
        for (a, b) in d.eigenvalues.iter().zip(&l.eigenvalues) {
            assert!((a - b).abs() < 1e-8, "seed {seed}: {:?} vs {:?}", d.eigenvalues, l.eigenvalues);
        }
        assert!(l.residuals.iter().all(|&r| r < 1e-8));
    }
}
