//! Fidelity, entanglement and nonlocality diagnostics.

use nalgebra::{DMatrix, Matrix3};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hybrid_state::{hermitian_eigen, hermitian_sqrt, reduce_polarization, DensityMatrix, Envelope, HybridState};
use crate::Photon;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Pauli matrices `[σ_x, σ_y, σ_z]` in the `{H, V}` basis.
pub fn pauli() -> [DMatrix<Complex64>; 3] {
    let z = c(0.0, 0.0);
    [
        DMatrix::from_row_slice(2, 2, &[z, c(1.0, 0.0), c(1.0, 0.0), z]),
        DMatrix::from_row_slice(2, 2, &[z, c(0.0, -1.0), c(0.0, 1.0), z]),
        DMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), z, z, c(-1.0, 0.0)]),
    ]
}

/// Uhlmann fidelity `(tr √(√ρ σ √ρ))² = ‖√ρ √σ‖₁²`.
pub fn fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::domain(format!(
            "fidelity between {}- and {}-dimensional states",
            rho.dim(),
            sigma.dim()
        )));
    }
    // For a pure argument F = tr(ρσ). The square roots would otherwise amplify
    // round-off in the null space to ~1e-8.
    if (purity(rho) - 1.0).abs() < 1e-12 || (purity(sigma) - 1.0).abs() < 1e-12 {
        let overlap = (rho.matrix() * sigma.matrix()).trace().re;
        return Ok(overlap.clamp(0.0, 1.0));
    }
    // tr√(√ρ σ √ρ) is the trace norm of √ρ√σ, which treats both arguments alike
    let product = hermitian_sqrt(rho.matrix()) * hermitian_sqrt(sigma.matrix());
    let trace: f64 = product.singular_values().iter().sum();
    Ok((trace * trace).min(1.0))
}

/// `⟨ψ|ρ|ψ⟩` for a normalized pure target.
pub fn pure_fidelity(rho: &DensityMatrix, psi: &[Complex64]) -> Result<f64> {
    if psi.len() != rho.dim() {
        return Err(Error::domain("target state dimension does not match density matrix"));
    }
    let m = rho.matrix();
    let value: Complex64 = (0..psi.len())
        .flat_map(|r| (0..psi.len()).map(move |s| (r, s)))
        .map(|(r, s)| psi[r].conj() * m[(r, s)] * psi[s])
        .sum();
    Ok(value.re)
}

pub fn purity(rho: &DensityMatrix) -> f64 {
    let m = rho.matrix();
    (m * m).trace().re
}

fn require_two_qubit(rho: &DensityMatrix) -> Result<()> {
    if rho.dim() != 4 {
        return Err(Error::domain(format!("expected a two-qubit state, got dimension {}", rho.dim())));
    }
    Ok(())
}

/// Wootters concurrence `max{0, λ₁ − λ₂ − λ₃ − λ₄}` with `λ_i` the decreasing
/// eigenvalues of `√(√ρ ρ̃ √ρ)`, `ρ̃ = (σ_y⊗σ_y) ρ* (σ_y⊗σ_y)`.
pub fn concurrence_wootters(rho: &DensityMatrix) -> Result<f64> {
    require_two_qubit(rho)?;
    let [_, sy, _] = pauli();
    let yy = sy.kronecker(&sy);
    let flipped = &yy * rho.matrix().map(|z| z.conj()) * &yy;
    let root = hermitian_sqrt(rho.matrix());
    let m = &root * flipped * &root;
    let m = (&m + m.adjoint()).scale(0.5);
    let (values, _) = hermitian_eigen(&m);
    let mut lambdas: Vec<f64> = values.iter().map(|v| v.max(0.0).sqrt()).collect();
    lambdas.sort_by(|a, b| b.total_cmp(a));
    Ok((lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).max(0.0))
}

/// Correlation matrix `T_kl = tr[ρ σ_k ⊗ σ_l]`.
pub fn correlation_matrix(rho: &DensityMatrix) -> Result<Matrix3<f64>> {
    require_two_qubit(rho)?;
    let paulis = pauli();
    Ok(Matrix3::from_fn(|k, l| {
        (rho.matrix() * paulis[k].kronecker(&paulis[l])).trace().re
    }))
}

/// Maximal CHSH value over projective measurements, `2√(m₁ + m₂)` with
/// `m₁ ≥ m₂` the largest eigenvalues of `TᵀT`.
pub fn chsh_max(rho: &DensityMatrix) -> Result<f64> {
    let t = correlation_matrix(rho)?;
    let mut m: Vec<f64> = (t.transpose() * t).symmetric_eigen().eigenvalues.iter().copied().collect();
    m.sort_by(|a, b| b.total_cmp(a));
    Ok(2.0 * (m[0].max(0.0) + m[1].max(0.0)).sqrt())
}

/// How a pure state is split into two parties.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Cut {
    /// The listed photons (polarization and frequency together) against the rest.
    Photons(Vec<Photon>),
    /// All polarizations against all frequencies.
    PolarizationFrequency,
}

/// Concurrence `√(2(1 − tr σ_A²))` of a pure state across a bipartition.
pub fn concurrence_pure_bipartition(state: &HybridState, cut: &Cut) -> Result<f64> {
    let norm = state.norm_squared();
    if (norm - 1.0).abs() > crate::hybrid_state::STATE_NORM_TOLERANCE {
        return Err(Error::domain(format!("bipartition concurrence needs a normalized state, norm² = {norm}")));
    }
    let p = match cut {
        Cut::PolarizationFrequency => purity(&reduce_polarization(state, state.photons())?),
        Cut::Photons(side) => photon_cut_purity(state, side)?,
    };
    Ok((2.0 * (1.0 - p)).max(0.0).sqrt())
}

fn photon_cut_purity(state: &HybridState, side: &[Photon]) -> Result<f64> {
    let n = state.n_photons();
    let mut mask_a = 0u8;
    for p in side {
        if let Some(slot) = state.slot(*p) {
            mask_a |= 1 << (n - 1 - slot);
        } else if p.env_axis().is_none() {
            return Err(Error::domain(format!("photon {p:?} is not part of this state")));
        }
    }
    // axis 0 belongs to side A iff Alice is listed; axis 1 iff Bob is
    let axis_in_a = [side.contains(&Photon::Alice), side.contains(&Photon::Bob)];
    let branches: Vec<(&u8, &crate::hybrid_state::Branch)> = state.raw_branches().iter().collect();
    let split = axis_in_a[0] != axis_in_a[1];
    if split && branches.iter().any(|(_, b)| matches!(b.envelope, Envelope::Dense(_))) {
        return dense_cut_purity(state, mask_a, axis_in_a[0]);
    }

    let (ga, gb) = (state.grid_a(), state.grid_b());
    // ⟨env_i|env_j⟩ restricted to the axes on one side
    let env_inner = |ei: &Envelope, ej: &Envelope, on_a: [bool; 2]| -> Complex64 {
        match (ei, ej) {
            (Envelope::Product { a: a1, b: b1 }, Envelope::Product { a: a2, b: b2 }) => {
                let fa = if on_a[0] { ga.inner(a1, a2) } else { c(1.0, 0.0) };
                let fb = if on_a[1] { gb.inner(b1, b2) } else { c(1.0, 0.0) };
                fa * fb
            }
            // both axes on one side (split dense handled above)
            _ if on_a[0] && on_a[1] => ei.inner(ej, ga, gb),
            _ => c(1.0, 0.0),
        }
    };
    let on_b = [!axis_in_a[0], !axis_in_a[1]];
    let r = branches.len();
    let gram_a = DMatrix::from_fn(r, r, |i, j| {
        let (bi, bj) = (branches[i].0, branches[j].0);
        if bi & mask_a != bj & mask_a {
            c(0.0, 0.0)
        } else {
            env_inner(&branches[i].1.envelope, &branches[j].1.envelope, axis_in_a)
        }
    });
    // Q_ij = c_i c_j* ⟨y_j|y_i⟩
    let q = DMatrix::from_fn(r, r, |i, j| {
        let (bi, bj) = (branches[i].0, branches[j].0);
        if bi & !mask_a != bj & !mask_a {
            c(0.0, 0.0)
        } else {
            branches[i].1.coefficient
                * branches[j].1.coefficient.conj()
                * env_inner(&branches[j].1.envelope, &branches[i].1.envelope, on_b)
        }
    });
    let qg = &q * &gram_a;
    Ok((&qg * &qg).trace().re)
}

/// Purity from the explicit amplitude matrix when a correlated envelope is split by the cut.
fn dense_cut_purity(state: &HybridState, mask_a: u8, alice_axis_in_a: bool) -> Result<f64> {
    let n = state.n_photons();
    let (ga, gb) = (state.grid_a(), state.grid_b());
    let (na, nb) = (ga.len(), gb.len());
    // rows: (polarizations of the side holding axis 0, f_a); cols: (the others, f_b)
    let row_mask = if alice_axis_in_a { mask_a } else { !mask_a & ((1u8 << n) - 1) };
    let compress = |bits: u8, mask: u8| -> usize {
        (0..n)
            .filter(|s| mask >> (n - 1 - s) & 1 == 1)
            .fold(0usize, |acc, s| (acc << 1) | ((bits >> (n - 1 - s)) & 1) as usize)
    };
    let row_bits = row_mask.count_ones() as usize;
    let col_mask = !row_mask & ((1u8 << n) - 1);
    let col_bits = col_mask.count_ones() as usize;
    let mut m = DMatrix::<Complex64>::zeros((1 << row_bits) * na, (1 << col_bits) * nb);
    for (bits, branch) in state.raw_branches() {
        let (pr, pc) = (compress(*bits, row_mask), compress(*bits, col_mask));
        for k in 0..na {
            for l in 0..nb {
                let w = (ga.weights()[k] * gb.weights()[l]).sqrt();
                m[(pr * na + k, pc * nb + l)] += branch.coefficient * branch.envelope.value(k, l, nb) * w;
            }
        }
    }
    let gram = if m.nrows() <= m.ncols() { &m * m.adjoint() } else { m.adjoint() * &m };
    Ok((&gram * &gram).trace().re)
}

/// Fidelity, concurrence, maximal CHSH value and purity of a two-qubit state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub fidelity: f64,
    pub concurrence: f64,
    pub chsh_max: f64,
    pub purity: f64,
}

impl MetricReport {
    pub fn two_qubit(rho: &DensityMatrix, target: &DensityMatrix) -> Result<Self> {
        let report = Self {
            fidelity: fidelity(rho, target)?,
            concurrence: concurrence_wootters(rho)?,
            chsh_max: chsh_max(rho)?,
            purity: purity(rho),
        };
        let slack = 1e-9;
        let in_range = |v: f64, lo: f64, hi: f64| v >= lo - slack && v <= hi + slack;
        if !in_range(report.fidelity, 0.0, 1.0)
            || !in_range(report.concurrence, 0.0, 1.0)
            || !in_range(report.chsh_max, 0.0, 2.0 * 2f64.sqrt())
            || !in_range(report.purity, 0.25, 1.0)
        {
            return Err(Error::numerical(format!("metric out of range: {report:?}")));
        }
        Ok(report)
    }
}
