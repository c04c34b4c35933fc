//! Acceptance suite: every numbered claim the workbench is expected to
//! reproduce, one test per criterion, each printing a PASS line with the
//! measured quantities. Run with `cargo test --test acceptance`.

use std::time::Instant;

use clusterlab::spectra::{
    self, cluster_eigenvalues, degeneracy_count, diagonalize_dense, ground_subspace,
    uniform_grid, SolverOptions,
};
use clusterlab::symmetry;
use clusterlab_core::matrix::phase_aligned_max_diff;
use clusterlab_core::model::{
    self, build, cluster_state, entangling_circuit, interpolated, ChainSpec, EdgeTerms, Model,
};
use clusterlab_core::pauli::{Letter, OperatorSum, PauliString};
use clusterlab_core::state::{circuit_to_matrix, fidelity, verify_decomposition, Gate};
use clusterlab_core::{Boundary, StateVector, C64};

fn spec(n: usize, boundary: Boundary, model: Model, edge: EdgeTerms) -> ChainSpec {
    ChainSpec::new(n, boundary, model, edge).unwrap()
}

fn splitmix(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e3779b97f4a7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

fn rand_angle(s: &mut u64) -> f64 {
    (splitmix(s) >> 11) as f64 / (1u64 << 53) as f64 * 2.0 * std::f64::consts::PI
        - std::f64::consts::PI
}

fn binomial(n: usize, k: usize) -> usize {
    let mut acc = 1usize;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// All model families instantiable at a given size, seeded angles.
fn model_zoo(n: usize, boundary: Boundary, seed: u64) -> Vec<Model> {
    let mut s = seed;
    let n_bonds = match boundary {
        Boundary::Open => n - 1,
        Boundary::Closed => n,
    };
    let angles = |s: &mut u64, len: usize| -> Vec<f64> { (0..len).map(|_| rand_angle(s)).collect() };
    let mut models = vec![
        Model::X,
        Model::Zxz,
        Model::Xzx,
        Model::ZzzXxx,
        Model::BitFlip { angles: angles(&mut s, n) },
        Model::PhaseFlip { angles: angles(&mut s, n) },
        Model::Cp { angles: angles(&mut s, n_bonds) },
        Model::IsingZz {
            z_angles: angles(&mut s, n),
            zz_angles: angles(&mut s, n_bonds),
        },
    ];
    if n >= 6 {
        models.push(Model::Ccz);
        models.push(Model::Cnz { order: 2 });
        let windows = match boundary {
            Boundary::Open => n - 2,
            Boundary::Closed => n,
        };
        models.push(Model::Cnp { order: 2, angles: angles(&mut s, windows) });
    }
    if n >= 8 {
        models.push(Model::Cnz { order: 3 });
    }
    models
}

#[test]
fn c01_zxz_closed_unique_ground_state_with_binomial_spectrum() {
    let t0 = Instant::now();
    let s = spec(6, Boundary::Closed, Model::Zxz, EdgeTerms::Drop);
    let h = build(&s).unwrap().hamiltonian;
    let r = diagonalize_dense(&h, &SolverOptions::default()).unwrap();
    assert_eq!(degeneracy_count(&r, 1e-8), 1);
    assert!((r.eigenvalues[0] + 6.0).abs() < 1e-10);
    assert_eq!(r.clusters.len(), 7);
    for (k, (value, mult)) in r.clusters.iter().enumerate() {
        assert!((value - (-6.0 + 2.0 * k as f64)).abs() < 1e-10);
        assert_eq!(*mult, binomial(6, k));
    }
    let dt = t0.elapsed();
    assert!(dt.as_secs_f64() < 1.0, "took {dt:?}");
    println!(
        "ACCEPTANCE 01 PASS: zxz closed 2L=6 unique ground state, E0 = {:.12}, binomial multiplicities, {dt:?}",
        r.eigenvalues[0]
    );
}

#[test]
fn c02_zxz_open_dropped_edges_fourfold_degenerate() {
    let t0 = Instant::now();
    let s = spec(6, Boundary::Open, Model::Zxz, EdgeTerms::Drop);
    let h = build(&s).unwrap().hamiltonian;
    let r = diagonalize_dense(&h, &SolverOptions::default()).unwrap();
    assert_eq!(degeneracy_count(&r, 1e-8), 4);
    assert!((r.gap - 2.0).abs() < 1e-10);
    let dt = t0.elapsed();
    assert!(dt.as_secs_f64() < 1.0, "took {dt:?}");
    println!(
        "ACCEPTANCE 02 PASS: zxz open 2L=6 ground degeneracy 4, gap {:.12}, {dt:?}",
        r.gap
    );
}

#[test]
fn c03_ccz_open_sixteenfold_degenerate_at_2l12() {
    let t0 = Instant::now();
    let s = spec(12, Boundary::Open, Model::Ccz, EdgeTerms::Drop);
    let h = build(&s).unwrap().hamiltonian;
    let r = diagonalize_dense(&h, &SolverOptions::default()).unwrap();
    assert_eq!(degeneracy_count(&r, 1e-8), 16);
    let dt = t0.elapsed();
    assert!(dt.as_secs_f64() < 30.0, "took {dt:?}");
    println!("ACCEPTANCE 03 PASS: ccz open 2L=12 ground degeneracy 16 (dense), {dt:?}");
}

#[test]
fn c04_cnz_order3_sixtyfourfold_degenerate_at_2l10() {
    let t0 = Instant::now();
    let s = spec(10, Boundary::Open, Model::Cnz { order: 3 }, EdgeTerms::Drop);
    let h = build(&s).unwrap().hamiltonian;
    let r = diagonalize_dense(&h, &SolverOptions::default()).unwrap();
    assert_eq!(degeneracy_count(&r, 1e-8), 64);
    let dt = t0.elapsed();
    assert!(dt.as_secs_f64() < 10.0, "took {dt:?}");
    println!("ACCEPTANCE 04 PASS: cnz N=3 open 2L=10 ground degeneracy 64 = 2^(2N) (dense), {dt:?}");
}

#[test]
fn c05_string_order_is_one_on_cluster_states_and_zero_on_trivial() {
    let n = 8;
    let mut checked = 0usize;
    for boundary in [Boundary::Open, Boundary::Closed] {
        for m in model_zoo(n, boundary, 11) {
            let s = spec(n, boundary, m, EdgeTerms::Drop);
            let bundle = build(&s).unwrap();
            let g = bundle.reference_state.clone().unwrap();
            let (i, j) = spectra::widest_string_range(&s).unwrap();
            let so = symmetry::string_order(&g, &bundle, i, j).unwrap();
            assert!(
                (so.value - 1.0).abs() < 1e-10 && so.imag.abs() < 1e-10,
                "{} {boundary:?}: O = {} + {}i",
                s.model.name(),
                so.value,
                so.imag
            );
            checked += 1;
        }
    }
    // the trivial product state scores zero against the Z X Z string
    let s = spec(n, Boundary::Closed, Model::Zxz, EdgeTerms::Drop);
    let bundle = build(&s).unwrap();
    let plus = StateVector::plus_state(n).unwrap();
    let so = symmetry::string_order(&plus, &bundle, 1, n - 1).unwrap();
    assert!(so.value.abs() < 1e-10);
    println!(
        "ACCEPTANCE 05 PASS: string order 1.0 on {checked} cluster ground states, 0.0 on |+...+> for the zxz string"
    );
}

#[test]
fn c06_entangling_layer_conjugation_swaps_alpha_with_one_minus_alpha() {
    let n = 8;
    for model in [Model::Zxz, Model::Ccz] {
        let s = spec(n, Boundary::Closed, model, EdgeTerms::Drop);
        let layer = circuit_to_matrix(&entangling_circuit(&s), n).unwrap();
        let mut worst = 0.0f64;
        for alpha in [0.0, 0.2, 0.5, 0.8, 1.0] {
            let ha = interpolated(&s, alpha).unwrap().to_matrix().unwrap();
            let hb = interpolated(&s, 1.0 - alpha).unwrap().to_matrix().unwrap();
            let conj = layer.mul(&ha).unwrap().mul(&layer.dagger()).unwrap();
            worst = worst.max(conj.max_diff(&hb).unwrap());
        }
        assert!(worst < 1e-12, "{}: {worst:.3e}", s.model.name());
        println!(
            "ACCEPTANCE 06 PASS: {} closed 2L=8 layer duality, max residual {worst:.3e}",
            s.model.name()
        );
    }
}

#[test]
fn c07_closed_chain_sweep_spectra_are_symmetric_about_one_half() {
    let n = 8;
    let grid = uniform_grid(41);
    for model in [Model::Zxz, Model::Ccz] {
        let s = spec(n, Boundary::Closed, model, EdgeTerms::Drop);
        let mut worst = 0.0f64;
        for (idx, &alpha) in grid.iter().enumerate() {
            let mirror = grid[grid.len() - 1 - idx];
            let ra = diagonalize_dense(&interpolated(&s, alpha).unwrap(), &SolverOptions::default())
                .unwrap();
            let rb = diagonalize_dense(&interpolated(&s, mirror).unwrap(), &SolverOptions::default())
                .unwrap();
            for (a, b) in ra.eigenvalues.iter().zip(rb.eigenvalues.iter()) {
                worst = worst.max((a - b).abs());
            }
        }
        assert!(worst < 1e-10, "{}: {worst:.3e}", s.model.name());
        println!(
            "ACCEPTANCE 07 PASS: {} closed 2L=8 sweep spectra symmetric, max pairwise diff {worst:.3e}",
            s.model.name()
        );
    }
}

fn ground_string_order(s: &ChainSpec, alpha: f64, seed: u64) -> f64 {
    let bundle = build(s).unwrap();
    let h = interpolated(s, alpha).unwrap();
    let mut opts = SolverOptions::default();
    opts.seed = seed;
    opts.tol = 1e-9;
    let gs = ground_subspace(&h, 1, &opts).unwrap();
    let (i, j) = spectra::widest_string_range(s).unwrap();
    symmetry::string_order(&gs.vectors[0], &bundle, i, j)
        .unwrap()
        .value
}

#[test]
fn c08_transition_signatures_at_2l12() {
    // Sharp drop across alpha = 1/2 for the CZ chain. Here
    // H(alpha) = alpha H_model + (1 - alpha) H_X, so the entangled phase
    // sits at large alpha; the 0.4 / 0.6 pair brackets the transition
    // with the ordered side at 0.6.
    let s = spec(12, Boundary::Closed, Model::Zxz, EdgeTerms::Drop);
    let o_trivial = ground_string_order(&s, 0.4, 41);
    let o_ordered = ground_string_order(&s, 0.6, 42);
    assert!(
        o_ordered - o_trivial > 0.5,
        "zxz string order drop too small: O(0.6)={o_ordered:.4}, O(0.4)={o_trivial:.4}"
    );

    // no jump for the CCZ chain: adjacent 41-grid differences near 1/2
    let s = spec(12, Boundary::Closed, Model::Ccz, EdgeTerms::Drop);
    let grid = uniform_grid(41);
    let window: Vec<f64> = grid
        .iter()
        .copied()
        .filter(|&a| (0.3..=0.7).contains(&a))
        .collect();
    let values: Vec<f64> = window
        .iter()
        .enumerate()
        .map(|(k, &a)| ground_string_order(&s, a, 100 + k as u64))
        .collect();
    let max_step = values
        .windows(2)
        .map(|w| (w[1] - w[0]).abs())
        .fold(0.0f64, f64::max);
    assert!(max_step < 0.2, "ccz adjacent step {max_step:.4}");
    println!(
        "ACCEPTANCE 08 PASS: zxz string order jump across 1/2 = {:.4} > 0.5; ccz max adjacent step near 1/2 = {max_step:.4} < 0.2",
        o_ordered - o_trivial
    );
}

#[test]
fn c09_zxz_gap_minimum_at_the_self_dual_point() {
    let s = spec(12, Boundary::Closed, Model::Zxz, EdgeTerms::Drop);
    let grid = uniform_grid(41);
    let mut opts = SolverOptions::default();
    opts.tol = 1e-9;
    let gap_at = |alpha: f64, seed: u64| -> f64 {
        let h = interpolated(&s, alpha).unwrap();
        let mut o = opts;
        o.seed = seed;
        let gs = ground_subspace(&h, 2, &o).unwrap();
        gs.values[1] - gs.values[0]
    };
    let g_half = gap_at(0.5, 7);
    for (k, &alpha) in grid.iter().enumerate() {
        if (alpha - 0.5).abs() >= 0.1 {
            let g = gap_at(alpha, 200 + k as u64);
            assert!(
                g_half < g,
                "gap({alpha}) = {g:.6} not above gap(0.5) = {g_half:.6}"
            );
        }
    }
    println!("ACCEPTANCE 09 PASS: zxz closed 2L=12 gap(0.5) = {g_half:.6} is the grid minimum away from 1/2");
}

#[test]
fn c10_ccz_stabilizer_expansion_quarters_and_dense_conjugation() {
    let n = 8;
    let s = spec(n, Boundary::Closed, Model::Ccz, EdgeTerms::Drop);
    let bundle = build(&s).unwrap();
    let layer = circuit_to_matrix(&entangling_circuit(&s), n).unwrap();
    let mut worst_coeff = 0.0f64;
    let mut worst_dense = 0.0f64;
    for (idx, &j) in bundle.sites.iter().enumerate() {
        let k = &bundle.stabilizers[idx];
        assert_eq!(k.num_terms(), 16);
        for (_, c) in k.terms() {
            worst_coeff = worst_coeff.max((c.norm() - 0.25).abs());
        }
        let xj = OperatorSum::from_term(
            &PauliString::single(n, j, Letter::X).unwrap(),
            C64::new(1.0, 0.0),
        )
        .to_matrix()
        .unwrap();
        let conj = layer.mul(&xj).unwrap().mul(&layer.dagger()).unwrap();
        worst_dense = worst_dense.max(k.to_matrix().unwrap().max_diff(&conj).unwrap());
    }
    assert!(worst_coeff < 1e-12);
    assert!(worst_dense < 1e-12);
    println!(
        "ACCEPTANCE 10 PASS: ccz stabilizers have |coeff| = 1/4 (dev {worst_coeff:.3e}) and match dense conjugation (dev {worst_dense:.3e})"
    );
}

#[test]
fn c11_cp_constant_angle_closed_forms_and_pi_limit() {
    let n = 8;
    let j = 4usize;
    let mut seed = 2718u64;
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let phi = rand_angle(&mut seed);
        let s = spec(n, Boundary::Closed, Model::Cp { angles: vec![phi; n] }, EdgeTerms::Drop);
        let k = &build(&s).unwrap().stabilizers[j - 1];
        let (c, sn) = (phi.cos(), phi.sin());
        let cos2h = (phi / 2.0).cos().powi(2);
        let sin2h = (phi / 2.0).sin().powi(2);
        let expect = [
            (vec![(j, Letter::X)], cos2h * c),
            (vec![(j - 1, Letter::Z), (j, Letter::X)], sn * sn / 2.0),
            (vec![(j, Letter::X), (j + 1, Letter::Z)], sn * sn / 2.0),
            (vec![(j - 1, Letter::Z), (j, Letter::X), (j + 1, Letter::Z)], -sin2h * c),
            (vec![(j, Letter::Y)], cos2h * sn),
            (vec![(j - 1, Letter::Z), (j, Letter::Y)], -(2.0 * phi).sin() / 4.0),
            (vec![(j, Letter::Y), (j + 1, Letter::Z)], -(2.0 * phi).sin() / 4.0),
            (vec![(j - 1, Letter::Z), (j, Letter::Y), (j + 1, Letter::Z)], -sin2h * sn),
        ];
        for (letters, want) in expect {
            let p = PauliString::from_sites(n, &letters).unwrap();
            worst = worst.max((k.coefficient(&p) - C64::new(want, 0.0)).norm());
        }
    }
    assert!(worst < 1e-10, "coefficient deviation {worst:.3e}");

    // phi = pi reproduces the CZ chain bundle term for term
    let cp = build(&spec(
        n,
        Boundary::Closed,
        Model::Cp { angles: vec![std::f64::consts::PI; n] },
        EdgeTerms::Drop,
    ))
    .unwrap();
    let zxz = build(&spec(n, Boundary::Closed, Model::Zxz, EdgeTerms::Drop)).unwrap();
    let mut pi_dev = 0.0f64;
    for (a, b) in cp.stabilizers.iter().zip(zxz.stabilizers.iter()) {
        pi_dev = pi_dev.max(a.max_coeff_diff(b).unwrap());
    }
    assert!(pi_dev < 1e-12);
    println!(
        "ACCEPTANCE 11 PASS: cp closed forms at 10 random angles (dev {worst:.3e}); cp(pi) = zxz termwise (dev {pi_dev:.3e})"
    );
}

#[test]
fn c12_noninvertible_symmetry_intertwines_and_is_singular() {
    for n in [4usize, 6] {
        let s = spec(n, Boundary::Closed, Model::Zxz, EdgeTerms::Drop);
        let report = symmetry::duality_check(&s).unwrap();
        assert!(report.hamiltonian_residual < 1e-10);
        assert!(report.map_residual < 1e-10);
        assert!(report.smallest_singular_value < 1e-10);
        println!(
            "ACCEPTANCE 12 PASS: zxz closed 2L={n} duality DH=HD ({:.3e}), X->ZZ ({:.3e}), min singular value {:.3e}",
            report.hamiltonian_residual, report.map_residual, report.smallest_singular_value
        );
    }
}

#[test]
fn c13_ising_map_relations_at_2l4() {
    let s = spec(4, Boundary::Closed, Model::Zxz, EdgeTerms::Drop);
    let report = symmetry::kt_check(&s).unwrap();
    assert!(report.x_residual < 1e-10);
    assert!(report.k_residual < 1e-10);
    println!(
        "ACCEPTANCE 13 PASS: zxz closed 2L=4 Ising map fixes X ({:.3e}) and sends stabilizers to bonds ({:.3e})",
        report.x_residual, report.k_residual
    );
}

#[test]
fn c14_projective_representation_signs() {
    let s = spec(6, Boundary::Open, Model::Zxz, EdgeTerms::Drop);
    let set = symmetry::edge_logicals(&s).unwrap();
    let xl = &set.left[0].x;
    let zl = &set.left[0].z;
    let xr = &set.right[0].x;
    let zr = &set.right[0].z;
    assert_eq!(symmetry::projective_phase(xl, zl).unwrap(), -1);
    assert_eq!(symmetry::projective_phase(xr, zr).unwrap(), -1);
    for (a, b) in [
        (xl, xl),
        (zl, zl),
        (xr, xr),
        (zr, zr),
        (xl, xr),
        (xl, zr),
        (zl, xr),
        (zl, zr),
    ] {
        assert_eq!(symmetry::projective_phase(a, b).unwrap(), 1);
    }

    // sign table of the symmetry action on the edge logicals
    let records = symmetry::edge_symmetry_action(&s).unwrap();
    let sign = |gen: &str, logical: &str| -> i8 {
        records
            .iter()
            .find(|r| r.generator == gen && r.logical == logical)
            .map(|r| r.sign)
            .unwrap()
    };
    let table = [
        ("eta_even", "X1_left", -1),
        ("eta_even", "Z1_left", 1),
        ("eta_odd", "X1_left", 1),
        ("eta_odd", "Z1_left", -1),
        ("eta_even", "X1_right", 1),
        ("eta_even", "Z1_right", -1),
        ("eta_odd", "X1_right", -1),
        ("eta_odd", "Z1_right", 1),
    ];
    for (gen, logical, want) in table {
        assert_eq!(sign(gen, logical), want, "{gen} on {logical}");
    }
    println!("ACCEPTANCE 14 PASS: projective phases -1 on both edges, +1 elsewhere; sign table reproduced entry for entry");
}

#[test]
fn c15_edge_degeneracy_robust_under_random_dressing() {
    let n = 8;
    let mut seed = 31415u64;
    for family in ["bitflip", "phaseflip"] {
        for trial in 0..20 {
            let angles: Vec<f64> = (0..n).map(|_| rand_angle(&mut seed)).collect();
            let model = match family {
                "bitflip" => Model::BitFlip { angles },
                _ => Model::PhaseFlip { angles },
            };
            let s = spec(n, Boundary::Open, model, EdgeTerms::Drop);
            let bundle = build(&s).unwrap();
            let r = diagonalize_dense(&bundle.hamiltonian, &SolverOptions::default()).unwrap();
            assert_eq!(
                degeneracy_count(&r, 1e-8),
                4,
                "{family} trial {trial}: degeneracy {:?}",
                r.clusters.first()
            );
            let g = bundle.reference_state.clone().unwrap();
            let (i, j) = spectra::widest_string_range(&s).unwrap();
            let so = symmetry::string_order(&g, &bundle, i, j).unwrap();
            assert!((so.value - 1.0).abs() < 1e-10, "{family} trial {trial}");
        }
    }
    println!("ACCEPTANCE 15 PASS: 20 random bitflip and 20 random phaseflip dressings keep degeneracy 4 and string order 1.0");
}

#[test]
fn c16_hardware_gate_decompositions() {
    let mut seed = 999u64;
    let mut worst_cp = 0.0f64;
    for _ in 0..10 {
        let phi = rand_angle(&mut seed);
        let circuit = vec![
            Gate::Zz { a: 1, b: 2, angle: -phi },
            Gate::Rz { site: 1, angle: -phi / 2.0 },
            Gate::Rz { site: 2, angle: -phi / 2.0 },
        ];
        worst_cp = worst_cp.max(
            verify_decomposition(&Gate::Cp { a: 1, b: 2, angle: phi }, &circuit, 2).unwrap(),
        );
    }
    assert!(worst_cp < 1e-12, "cp four-factor residual {worst_cp:.3e}");

    let phi = 0.3;
    let cr = verify_decomposition(
        &Gate::Zz { a: 1, b: 2, angle: 2.0 * phi },
        &[
            Gate::H { site: 2 },
            Gate::Cr { control: 1, target: 2, angle: phi },
            Gate::H { site: 2 },
        ],
        2,
    )
    .unwrap();
    let ms = verify_decomposition(
        &Gate::Zz { a: 1, b: 2, angle: 2.0 * phi },
        &[
            Gate::H { site: 1 },
            Gate::H { site: 2 },
            Gate::Ms { a: 1, b: 2, angle: phi },
            Gate::H { site: 1 },
            Gate::H { site: 2 },
        ],
        2,
    )
    .unwrap();
    assert!(cr < 1e-12 && ms < 1e-12, "cr {cr:.3e} ms {ms:.3e}");
    println!(
        "ACCEPTANCE 16 PASS: cp four-factor ({worst_cp:.3e}), Hadamard-conjugated cr ({cr:.3e}) and ms ({ms:.3e}) match the Ising gate"
    );
}

#[test]
fn c17_xzx_dual_construction_fidelity() {
    for n in [4usize, 6, 8] {
        let s = spec(n, Boundary::Open, Model::Xzx, EdgeTerms::Drop);
        let f = fidelity(
            &cluster_state(&s).unwrap(),
            &model::xzx_state_via_cx(&s).unwrap(),
        )
        .unwrap();
        assert!(f >= 1.0 - 1e-12, "2L={n}: fidelity {f}");
    }
    println!("ACCEPTANCE 17 PASS: xzx Hadamard-route and CX-route states agree at 2L = 4, 6, 8");
}

#[test]
fn c18_frustration_freeness_across_the_model_zoo() {
    let mut worst = 0.0f64;
    let mut checked = 0usize;
    for n in [4usize, 6, 8] {
        for boundary in [Boundary::Open, Boundary::Closed] {
            for m in model_zoo(n, boundary, 5) {
                let s = spec(n, boundary, m, EdgeTerms::Drop);
                let bundle = build(&s).unwrap();
                let report = model::frustration_check(&bundle).unwrap();
                assert!(report.max_residual < 1e-10, "{} {boundary:?} 2L={n}", s.model.name());
                worst = worst.max(report.max_residual);
                if !bundle.stabilizers.is_empty() {
                    let r = diagonalize_dense(&bundle.hamiltonian, &SolverOptions::default())
                        .unwrap();
                    assert!(
                        (r.eigenvalues[0] - report.ground_energy).abs() < 1e-10,
                        "{} {boundary:?} 2L={n}: E0 {} vs -{}",
                        s.model.name(),
                        r.eigenvalues[0],
                        report.n_stabilizers
                    );
                }
                checked += 1;
            }
        }
    }
    println!(
        "ACCEPTANCE 18 PASS: {checked} model/boundary/size combinations frustration-free (max residual {worst:.3e}) with E0 = -(#stabilizers)"
    );
}

/// Optional stretch goal (not gating): the iterative path resolves the
/// fourfold degeneracy at 2L = 18.
#[test]
#[ignore = "stretch goal: several minutes and ~1 GB"]
fn stretch_zxz_2l18_iterative_degeneracy() {
    let t0 = Instant::now();
    let s = spec(18, Boundary::Open, Model::Zxz, EdgeTerms::Drop);
    let h = build(&s).unwrap().hamiltonian;
    let mut opts = SolverOptions::default();
    opts.max_krylov = 160;
    let gs = ground_subspace(&h, 6, &opts).unwrap();
    let clusters = cluster_eigenvalues(&gs.values, 1e-6);
    assert_eq!(clusters[0].1, 4);
    assert!((clusters[0].0 + 16.0).abs() < 1e-6);
    let dt = t0.elapsed();
    assert!(dt.as_secs_f64() < 600.0);
    println!("ACCEPTANCE stretch PASS: zxz open 2L=18 iterative degeneracy 4, {dt:?}");
}
