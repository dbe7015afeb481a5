use num_complex::Complex64;

use crate::spectra::FrequencyGrid;

/// Spectral envelope of one polarization branch over `(f_a, f_b)`.
#[derive(Debug, Clone, PartialEq)]
pub enum Envelope {
    /// `ψ(f_a, f_b) = a(f_a) · b(f_b)`.
    Product { a: Vec<Complex64>, b: Vec<Complex64> },
    /// Row-major `n_a × n_b` samples.
    Dense(Vec<Complex64>),
}

impl Envelope {
    pub fn value(&self, k: usize, l: usize, nb: usize) -> Complex64 {
        match self {
            Envelope::Product { a, b } => a[k] * b[l],
            Envelope::Dense(v) => v[k * nb + l],
        }
    }

    pub fn to_dense(&self, nb: usize) -> Vec<Complex64> {
        match self {
            Envelope::Product { a, b } => a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect(),
            Envelope::Dense(v) => {
                debug_assert_eq!(v.len() % nb, 0);
                v.clone()
            }
        }
    }

    /// `⟨self|other⟩` with quadrature weights on both axes.
    pub fn inner(&self, other: &Envelope, ga: &FrequencyGrid, gb: &FrequencyGrid) -> Complex64 {
        match (self, other) {
            (Envelope::Product { a: a1, b: b1 }, Envelope::Product { a: a2, b: b2 }) => ga.inner(a1, a2) * gb.inner(b1, b2),
            _ => {
                let nb = gb.len();
                ga.weights()
                    .iter()
                    .enumerate()
                    .map(|(k, wa)| {
                        let row: Complex64 = gb
                            .weights()
                            .iter()
                            .enumerate()
                            .map(|(l, wb)| self.value(k, l, nb).conj() * other.value(k, l, nb) * *wb)
                            .sum();
                        row * *wa
                    })
                    .sum()
            }
        }
    }

    pub fn norm_squared(&self, ga: &FrequencyGrid, gb: &FrequencyGrid) -> f64 {
        self.inner(self, ga, gb).re
    }

    /// Multiplies by `e^{i φ(f)}` along one frequency axis.
    pub fn apply_phase(&mut self, axis: usize, phase: &[f64]) {
        let factors: Vec<Complex64> = phase.iter().map(|p| Complex64::from_polar(1.0, *p)).collect();
        match (self, axis) {
            (Envelope::Product { a, .. }, 0) => a.iter_mut().zip(&factors).for_each(|(v, f)| *v *= f),
            (Envelope::Product { b, .. }, _) => b.iter_mut().zip(&factors).for_each(|(v, f)| *v *= f),
            (Envelope::Dense(v), 0) => {
                let nb = v.len() / factors.len();
                v.chunks_mut(nb).zip(&factors).for_each(|(row, f)| row.iter_mut().for_each(|x| *x *= f));
            }
            (Envelope::Dense(v), _) => {
                let nb = factors.len();
                v.chunks_mut(nb)
                    .for_each(|row| row.iter_mut().zip(&factors).for_each(|(x, f)| *x *= f));
            }
        }
    }

    /// `Σ_i c_i ψ_i`; stays factorized when every term carries the same envelope.
    pub fn combine(terms: &[(Complex64, &Envelope)], nb: usize) -> Envelope {
        if let Some((_, first)) = terms.first() {
            if terms.len() > 1 && terms[1..].iter().all(|(_, e)| e == first) {
                let total: Complex64 = terms.iter().map(|(c, _)| c).sum();
                return Envelope::combine(&[(total, *first)], nb);
            }
        }
        match terms {
            [] => panic!("cannot combine an empty set of envelopes"),
            [(c, Envelope::Product { a, b })] => Envelope::Product {
                a: a.iter().map(|x| x * c).collect(),
                b: b.clone(),
            },
            [(c, Envelope::Dense(v))] => Envelope::Dense(v.iter().map(|x| x * c).collect()),
            _ => {
                let mut out = terms[0].1.to_dense(nb);
                out.iter_mut().for_each(|x| *x *= terms[0].0);
                for (c, env) in &terms[1..] {
                    for (o, x) in out.iter_mut().zip(env.to_dense(nb)) {
                        *o += c * x;
                    }
                }
                Envelope::Dense(out)
            }
        }
    }
}
