//! Brute-force reference implementations and seeded instance generators.
//!
//! Nothing here calls into the closed forms of [`crate::bounds`]: `I_k` is a
//! literal triple loop over index pairs, the permutation maximum walks every
//! pair of `S_N × S_N`, and determinants use cofactor expansion. Agreement
//! between the two sides is the evidence the test suites rely on.
//!
//! Randomness comes from ChaCha8 seeded through `SeedableRng::seed_from_u64`,
//! which is specified independently of platform and word size.

use itertools::Itertools;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::bounds::PermutationPair;
use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::quantum::{DensityMatrix, PureState, State, UnitaryOperator};
use crate::tol;

/// Seed for a reproducible instance stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Seed(pub u64);

impl Seed {
    pub fn rng(self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.0)
    }

    /// The `index`-th seed of a suite derived from this one.
    pub fn derive(self, index: u64) -> Seed {
        Seed(
            self.0
                .wrapping_mul(0x9E37_79B9_7F4A_7C15)
                .wrapping_add(index),
        )
    }
}

/// Literal transcription of the defining sums: one loop for the diagonal,
/// one over pairs `i < j` with `j > k`, one over pairs `i < j ≤ k`.
/// `k` is 1-based.
pub fn i_k_reference(x: &[f64], y: &[f64], k: usize) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    let n = x.len();
    if k < 1 || k > n {
        return Err(Error::IndexOutOfRange { index: k, max: n });
    }
    let mut total = 0.0;
    for i in 1..=n {
        total += x[i - 1].powi(2) * y[i - 1].powi(2);
    }
    for i in 1..=n {
        for j in (i + 1)..=n {
            if k < j {
                total += x[i - 1].powi(2) * y[j - 1].powi(2) + x[j - 1].powi(2) * y[i - 1].powi(2);
            }
        }
    }
    for i in 1..=k {
        for j in (i + 1)..=k {
            total += 2.0 * x[i - 1] * y[i - 1] * x[j - 1] * y[j - 1];
        }
    }
    Ok(total)
}

pub const EXHAUSTIVE_ORACLE_LIMIT: usize = 6;

/// Walks all of `S_N × S_N` in lexicographic order of `(π₁, π₂)` and returns
/// the maximum together with the first pair within [`tol::PERM_TIE`] of it.
pub fn exhaustive_perm_max(x: &[f64], y: &[f64], k: usize) -> Result<(f64, PermutationPair)> {
    let n = x.len();
    if n > EXHAUSTIVE_ORACLE_LIMIT {
        return Err(Error::TooLarge {
            n,
            limit: EXHAUSTIVE_ORACLE_LIMIT,
        });
    }
    let mut scored = Vec::new();
    for p1 in (0..n).permutations(n) {
        let xp: Vec<f64> = p1.iter().map(|&i| x[i]).collect();
        for p2 in (0..n).permutations(n) {
            let yp: Vec<f64> = p2.iter().map(|&i| y[i]).collect();
            scored.push((i_k_reference(&xp, &yp, k)?, p1.clone(), p2));
        }
    }
    let max = scored.iter().map(|s| s.0).fold(f64::NEG_INFINITY, f64::max);
    let (_, p1, p2) = scored
        .into_iter()
        .find(|s| s.0 >= max - tol::PERM_TIE)
        .expect("maximum is attained");
    Ok((max, PermutationPair::new(p1, p2)?))
}

/// Cofactor expansion along the first row, for `n ≤ 5`.
pub fn laplace_det(m: &ComplexMatrix) -> Result<Complex64> {
    if !m.is_square() {
        return Err(Error::InvalidShape(
            "determinant of a non-square matrix".into(),
        ));
    }
    let n = m.rows();
    if n > 5 {
        return Err(Error::TooLarge { n, limit: 5 });
    }
    let rows: Vec<Vec<Complex64>> = (0..n)
        .map(|r| (0..n).map(|c| m[(r, c)]).collect())
        .collect();
    Ok(cofactor(&rows))
}

fn cofactor(rows: &[Vec<Complex64>]) -> Complex64 {
    match rows.len() {
        1 => rows[0][0],
        n => (0..n)
            .map(|c| {
                let minor: Vec<Vec<Complex64>> = rows[1..]
                    .iter()
                    .map(|r| {
                        r.iter()
                            .enumerate()
                            .filter(|(j, _)| *j != c)
                            .map(|(_, v)| *v)
                            .collect()
                    })
                    .collect();
                let sign = if c % 2 == 0 { 1.0 } else { -1.0 };
                rows[0][c] * sign * cofactor(&minor)
            })
            .sum(),
    }
}

/// `Tr(ρ δA† δA)` or `⟨ψ|δA† δA|ψ⟩` through explicit matrix products.
pub fn reference_variance(u: &UnitaryOperator, s: &State) -> Result<f64> {
    let rho = match s {
        State::Pure(psi) => psi.projector(),
        State::Mixed(r) => r.matrix().clone(),
    };
    let n = rho.rows();
    if u.dim() != n {
        return Err(Error::DimMismatch {
            expected: n,
            found: u.dim(),
        });
    }
    let mean = (&rho * u.matrix()).trace();
    let dev = u.matrix() - &ComplexMatrix::identity(n).scale(mean);
    Ok((&(&rho * &dev.adjoint()) * &dev).trace().re)
}

fn gaussian(rng: &mut ChaCha8Rng) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im)
}

pub fn gaussian_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> ComplexMatrix {
    let data = (0..rows * cols).map(|_| gaussian(rng)).collect();
    ComplexMatrix::new(rows, cols, data).expect("finite gaussian entries")
}

/// Orthonormalizes the columns of a complex Gaussian matrix (modified
/// Gram–Schmidt, applied twice for stability).
pub fn random_unitary(rng: &mut ChaCha8Rng, dim: usize) -> UnitaryOperator {
    let g = gaussian_matrix(rng, dim, dim);
    let mut cols: Vec<Vec<Complex64>> = (0..dim)
        .map(|c| (0..dim).map(|r| g[(r, c)]).collect())
        .collect();
    for j in 0..dim {
        for _ in 0..2 {
            for i in 0..j {
                let proj: Complex64 = cols[i]
                    .iter()
                    .zip(&cols[j])
                    .map(|(q, v)| q.conj() * v)
                    .sum();
                let qi = cols[i].clone();
                for (v, q) in cols[j].iter_mut().zip(&qi) {
                    *v -= proj * q;
                }
            }
        }
        let norm = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for v in &mut cols[j] {
            *v /= norm;
        }
    }
    let mut m = ComplexMatrix::zeros(dim, dim);
    for (c, col) in cols.iter().enumerate() {
        for (r, v) in col.iter().enumerate() {
            m[(r, c)] = *v;
        }
    }
    UnitaryOperator::new(m).expect("orthonormalized columns form a unitary")
}

pub fn random_pure(rng: &mut ChaCha8Rng, dim: usize) -> PureState {
    PureState::normalized((0..dim).map(|_| gaussian(rng)).collect())
        .expect("nonzero gaussian vector")
}

/// `G†G / Tr(G†G)` for a complex Gaussian `G`.
pub fn random_density(rng: &mut ChaCha8Rng, dim: usize) -> DensityMatrix {
    let g = gaussian_matrix(rng, dim, dim);
    let h = &g.adjoint() * &g;
    let t = h.trace().re;
    let rho = h.scale(Complex64::new(1.0 / t, 0.0)).hermitian_part();
    DensityMatrix::new(rho).expect("normalized Gram matrix is a state")
}

/// Random Hermitian matrix `(G + G†)/2`.
pub fn random_hermitian(rng: &mut ChaCha8Rng, dim: usize) -> ComplexMatrix {
    gaussian_matrix(rng, dim, dim).hermitian_part()
}

pub fn random_state(rng: &mut ChaCha8Rng, dim: usize, mixed: bool) -> State {
    if mixed {
        State::Mixed(random_density(rng, dim))
    } else {
        State::Pure(random_pure(rng, dim))
    }
}

/// A random state and two random unitaries of dimension `2..=6`.
pub fn random_instance(
    seed: Seed,
    dim: usize,
    mixed: bool,
) -> Result<(State, UnitaryOperator, UnitaryOperator)> {
    if !(2..=6).contains(&dim) {
        return Err(Error::InvalidShape(format!(
            "instance dimension {dim} outside 2..=6"
        )));
    }
    let mut rng = seed.rng();
    let state = random_state(&mut rng, dim, mixed);
    let a = random_unitary(&mut rng, dim);
    let b = random_unitary(&mut rng, dim);
    Ok((state, a, b))
}

/// Nonnegative vectors with entries uniform on `[0, 1)`; roughly one entry
/// in six is zeroed to exercise sparse supports.
pub fn random_moduli(seed: Seed, n: usize) -> (Vec<f64>, Vec<f64>) {
    use rand::Rng;
    let mut rng = seed.rng();
    let draw = |rng: &mut ChaCha8Rng| -> Vec<f64> {
        (0..n)
            .map(|_| {
                if rng.random_range(0..6) == 0 {
                    0.0
                } else {
                    rng.random::<f64>()
                }
            })
            .collect()
    };
    let x = draw(&mut rng);
    let y = draw(&mut rng);
    (x, y)
}
