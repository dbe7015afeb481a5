mod common;

use std::f64::consts::{PI, TAU};

use hybrid_teleport::hybrid_state::{apply_element, auxiliary_state, DensityMatrix};
use hybrid_teleport::metrics::{chsh_max, concurrence_pure_bipartition, concurrence_wootters, fidelity, Cut};
use hybrid_teleport::optics::{linear_phase, BirefringentElement};
use hybrid_teleport::protocol::SpectrumConfig;
use hybrid_teleport::spectra::JointSpectralAmplitude;
use hybrid_teleport::{Complex64, Photon, LAMBDA0};
use nalgebra::{DMatrix, Matrix3, Vector3};
use rand::Rng;

use common::{correlated_jsa, rng};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn random_ket(r: &mut impl Rng, dim: usize) -> Vec<Complex64> {
    let v: Vec<Complex64> = (0..dim).map(|_| c(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0))).collect();
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / n).collect()
}

/// ρ = G G† / tr, with rank `rank`.
fn random_density(r: &mut impl Rng, dim: usize, rank: usize) -> DensityMatrix {
    let g = DMatrix::from_fn(dim, rank, |_, _| c(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0)));
    let m = &g * g.adjoint();
    let tr = m.trace();
    DensityMatrix::new(m / tr).unwrap()
}

fn paulis() -> [DMatrix<Complex64>; 3] {
    let (o, z, i) = (c(1.0, 0.0), c(0.0, 0.0), c(0.0, 1.0));
    [
        DMatrix::from_row_slice(2, 2, &[z, o, o, z]),
        DMatrix::from_row_slice(2, 2, &[z, -i, i, z]),
        DMatrix::from_row_slice(2, 2, &[o, z, z, -o]),
    ]
}

fn unit(theta: f64, phi: f64) -> Vector3<f64> {
    Vector3::new(theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos())
}

/// Brute-force CHSH: Bob's best settings are explicit, Alice's two settings are
/// searched on a grid and then refined by shrinking coordinate steps.
fn chsh_search(rho: &DensityMatrix) -> f64 {
    let p = paulis();
    let t = Matrix3::from_fn(|k, l| (rho.matrix() * p[k].kronecker(&p[l])).trace().re);
    let value = |x: [f64; 4]| {
        let (a1, a2) = (unit(x[0], x[1]), unit(x[2], x[3]));
        (t.transpose() * (a1 + a2)).norm() + (t.transpose() * (a1 - a2)).norm()
    };
    let n = 8;
    let mut best = ([0.0; 4], f64::MIN);
    for i in 0..n {
        for j in 0..2 * n {
            for k in 0..n {
                for l in 0..2 * n {
                    let x = [PI * (i as f64 + 0.5) / n as f64, PI * j as f64 / n as f64, PI * (k as f64 + 0.5) / n as f64, PI * l as f64 / n as f64];
                    let v = value(x);
                    if v > best.1 {
                        best = (x, v);
                    }
                }
            }
        }
    }
    let mut step = PI / n as f64;
    while step > 1e-7 {
        let mut improved = false;
        for d in 0..4 {
            for sign in [-1.0, 1.0] {
                let mut x = best.0;
                x[d] += sign * step;
                let v = value(x);
                if v > best.1 {
                    best = (x, v);
                    improved = true;
                }
            }
        }
        if !improved {
            step /= 2.0;
        }
    }
    best.1
}

#[test]
fn chsh_matches_brute_force_search() {
    let mut r = rng(21);
    for i in 0..50 {
        let rho = random_density(&mut r, 4, 1 + i % 4);
        let (closed, search) = (chsh_max(&rho).unwrap(), chsh_search(&rho));
        assert!((closed - search).abs() < 1e-3, "state {i}: {closed} vs {search}");
    }
}

#[test]
fn separable_mixtures_satisfy_bell_bound() {
    let mut r = rng(22);
    for _ in 0..50 {
        let mut m = DMatrix::<Complex64>::zeros(4, 4);
        let terms = r.random_range(1..6);
        for _ in 0..terms {
            let (a, b) = (random_ket(&mut r, 2), random_ket(&mut r, 2));
            let ket: Vec<Complex64> = a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect();
            let v = DMatrix::from_column_slice(4, 1, &ket);
            m += &v * v.adjoint() * c(r.random_range(0.1..1.0), 0.0);
        }
        let tr = m.trace();
        let rho = DensityMatrix::new(m / tr).unwrap();
        assert!(chsh_max(&rho).unwrap() <= 2.0 + 1e-9);
        assert!(concurrence_wootters(&rho).unwrap() < 1e-6);
    }
}

#[test]
fn wootters_matches_pure_state_formula() {
    let mut r = rng(23);
    for _ in 0..50 {
        let psi = random_ket(&mut r, 4);
        let expected = 2.0 * (psi[0] * psi[3] - psi[1] * psi[2]).norm();
        let rho = DensityMatrix::from_pure(&psi).unwrap();
        assert!((concurrence_wootters(&rho).unwrap() - expected).abs() < 1e-6);
    }
}

#[test]
fn fidelity_is_symmetric_and_matches_qubit_formula() {
    let mut r = rng(24);
    for i in 0..50 {
        let (a, b) = (random_density(&mut r, 4, 1 + i % 4), random_density(&mut r, 4, 4));
        let (ab, ba) = (fidelity(&a, &b).unwrap(), fidelity(&b, &a).unwrap());
        assert!((ab - ba).abs() < 1e-10, "{ab} vs {ba}");
        assert!((fidelity(&a, &a).unwrap() - 1.0).abs() < 1e-7);

        let rank = 1 + i % 2;
        let (x, y) = (random_density(&mut r, 2, 2), random_density(&mut r, 2, rank));
        // a rank-one y has det 0 exactly; its computed det is only round-off
        let det_y = if rank == 1 { 0.0 } else { y.matrix().determinant().re };
        let expected = (x.matrix() * y.matrix()).trace().re + 2.0 * (x.matrix().determinant().re * det_y).sqrt();
        let got = fidelity(&x, &y).unwrap();
        assert!((got - expected).abs() < 1e-10, "{got} vs {expected}, rank {rank}");
    }
}

/// Σ s⁴ over the Schmidt coefficients of the weighted amplitude matrix.
fn schmidt_purity(jsa: &JointSpectralAmplitude) -> f64 {
    let (ga, gb) = (jsa.grid_a(), jsa.grid_b());
    let m = DMatrix::from_fn(ga.len(), gb.len(), |k, l| jsa.value(k, l) * (ga.weights()[k] * gb.weights()[l]).sqrt());
    let s2: Vec<f64> = m.singular_values().iter().map(|s| s * s).collect();
    let total: f64 = s2.iter().sum();
    s2.iter().map(|p| (p / total).powi(2)).sum()
}

#[test]
fn photon_cut_matches_schmidt_decomposition() {
    for corr in [0.0, 0.4, 0.8] {
        let jsa = correlated_jsa(40, corr);
        let zero_a = linear_phase(0.0, LAMBDA0, jsa.grid_a());
        let zero_b = linear_phase(0.0, LAMBDA0, jsa.grid_b());
        let aux = auxiliary_state(&jsa, &zero_a, &zero_b).unwrap();
        // polarization Ψ⁺ times the frequency state: purities multiply
        let expected = (2.0 * (1.0 - 0.5 * schmidt_purity(&jsa))).sqrt();
        let got = concurrence_pure_bipartition(&aux, &Cut::Photons(vec![Photon::Alice])).unwrap();
        assert!((got - expected).abs() < 1e-9, "corr {corr}: {got} vs {expected}");
        // identical envelopes on both branches: polarization factors out
        let pf = concurrence_pure_bipartition(&aux, &Cut::PolarizationFrequency).unwrap();
        assert!(pf < 1e-6, "corr {corr}: {pf}");
    }
}

#[test]
fn polarization_frequency_cut_reaches_one_for_orthogonal_envelopes() {
    let jsa = SpectrumConfig::filters_2nm_3nm().build().unwrap();
    let pa = linear_phase(5000.0, LAMBDA0, jsa.grid_a());
    let pb = linear_phase(0.0, LAMBDA0, jsa.grid_b());
    let aux = auxiliary_state(&jsa, &pa, &pb).unwrap();
    let cpf = concurrence_pure_bipartition(&aux, &Cut::PolarizationFrequency).unwrap();
    assert!((cpf - 1.0).abs() < 1e-6, "{cpf}");
}

#[test]
fn photon_cut_is_local_unitary_invariant_and_side_symmetric() {
    let mut r = rng(25);
    for corr in [0.0, 0.5, -0.7] {
        let jsa = correlated_jsa(32, corr);
        let pa = linear_phase(r.random_range(0.0..600.0), LAMBDA0, jsa.grid_a());
        let pb = linear_phase(r.random_range(0.0..600.0), LAMBDA0, jsa.grid_b());
        let aux = auxiliary_state(&jsa, &pa, &pb).unwrap();
        let alice = concurrence_pure_bipartition(&aux, &Cut::Photons(vec![Photon::Alice])).unwrap();
        let bob = concurrence_pure_bipartition(&aux, &Cut::Photons(vec![Photon::Bob])).unwrap();
        assert!((alice - bob).abs() < 1e-10);
        let elem = BirefringentElement::constant(r.random_range(0.0..600.0), LAMBDA0).unwrap();
        for side in [Photon::Alice, Photon::Bob] {
            let moved = apply_element(&aux, side, &elem).unwrap();
            let after = concurrence_pure_bipartition(&moved, &Cut::Photons(vec![Photon::Alice])).unwrap();
            assert!((after - alice).abs() < 1e-10);
        }
    }
}

#[test]
fn chsh_of_bell_state_with_phase() {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    for phi in [0.0, 0.3, TAU / 3.0] {
        let psi = [c(0.0, 0.0), c(s, 0.0), Complex64::from_polar(s, phi), c(0.0, 0.0)];
        let rho = DensityMatrix::from_pure(&psi).unwrap();
        assert!((chsh_max(&rho).unwrap() - 2.0 * 2f64.sqrt()).abs() < 1e-10);
    }
}
