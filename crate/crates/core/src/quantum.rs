//! Validated states and unitary operators, the operator and state families
//! used by the reproduction scenarios, and expectation / variance primitives.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{self, ComplexMatrix};
use crate::tol;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Normalized pure state `|ψ⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: Vec<Complex64>,
}

impl PureState {
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::InvalidShape("empty state vector".into()));
        }
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !norm.is_finite() || (norm - 1.0).abs() > tol::NORMALIZATION {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self { amplitudes })
    }

    /// Rescales an arbitrary nonzero vector to unit norm.
    pub fn normalized(mut amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::NotNormalized { norm });
        }
        for z in &mut amplitudes {
            *z /= norm;
        }
        Self::new(amplitudes)
    }

    pub fn from_real(amplitudes: &[f64]) -> Result<Self> {
        Self::new(amplitudes.iter().map(|&a| Complex64::new(a, 0.0)).collect())
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(Error::IndexOutOfRange {
                index,
                max: dim.saturating_sub(1),
            });
        }
        let mut v = vec![ZERO; dim];
        v[index] = ONE;
        Self::new(v)
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// `|ψ⟩⟨ψ|`.
    pub fn projector(&self) -> ComplexMatrix {
        let col = ComplexMatrix::column(&self.amplitudes);
        &col * &col.adjoint()
    }
}

/// Density matrix: Hermitian, unit trace, positive semidefinite.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::InvalidShape(format!(
                "density matrix must be square, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        let eig = matrix::hermitian_eig(&matrix)?;
        let trace = matrix.trace();
        if (trace - ONE).norm() > tol::NORMALIZATION {
            return Err(Error::BadTrace { trace: trace.re });
        }
        let min = eig.eigenvalues.last().copied().unwrap_or(0.0);
        if min < -tol::PSD {
            return Err(Error::NotPsd {
                min_eigenvalue: min,
            });
        }
        Ok(Self { matrix })
    }

    /// Explicit promotion of a pure state to the rank-one projector.
    pub fn from_pure(psi: &PureState) -> Self {
        Self {
            matrix: psi.projector(),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }
}

/// Square matrix with `U†U = I`.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryOperator {
    matrix: ComplexMatrix,
}

impl UnitaryOperator {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::InvalidShape(format!(
                "unitary must be square, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        let deviation = matrix.unitarity_defect();
        if deviation > tol::UNITARY {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(Self { matrix })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn adjoint(&self) -> Self {
        Self {
            matrix: self.matrix.adjoint(),
        }
    }

    /// `e^{i·angle} U`.
    pub fn with_phase(&self, angle: f64) -> Self {
        Self {
            matrix: self.matrix.scale(Complex64::from_polar(1.0, angle)),
        }
    }

    /// Product `self · rhs`.
    pub fn compose(&self, rhs: &Self) -> Result<Self> {
        check_dim(self.dim(), rhs.dim())?;
        Ok(Self {
            matrix: &self.matrix * &rhs.matrix,
        })
    }
}

/// A state is either kept as an amplitude vector or as a density matrix.
/// The two are never converted implicitly, since the bound chain length
/// depends on the representation.
#[derive(Debug, Clone, PartialEq)]
pub enum State {
    Pure(PureState),
    Mixed(DensityMatrix),
}

impl State {
    /// Hilbert-space dimension `n`.
    pub fn dim(&self) -> usize {
        match self {
            State::Pure(p) => p.dim(),
            State::Mixed(r) => r.dim(),
        }
    }

    /// Length `N` of the deviation coordinate vectors: `n` for pure states,
    /// `n²` for mixed ones.
    pub fn effective_dim(&self) -> usize {
        match self {
            State::Pure(p) => p.dim(),
            State::Mixed(r) => r.dim() * r.dim(),
        }
    }
}

impl From<PureState> for State {
    fn from(p: PureState) -> Self {
        State::Pure(p)
    }
}

impl From<DensityMatrix> for State {
    fn from(r: DensityMatrix) -> Self {
        State::Mixed(r)
    }
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimMismatch { expected, found })
    }
}

fn omega(d: usize) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI / d as f64)
}

/// Clock operator `diag(1, ω, …, ω^{d−1})`, `ω = e^{2πi/d}`.
pub fn clock(d: usize) -> Result<UnitaryOperator> {
    if d < 2 {
        return Err(Error::InvalidShape(format!("clock dimension {d} < 2")));
    }
    let diag: Vec<Complex64> = (0..d)
        .map(|j| Complex64::from_polar(1.0, 2.0 * PI * j as f64 / d as f64))
        .collect();
    UnitaryOperator::new(ComplexMatrix::from_diag(&diag))
}

/// Cyclic shift `|j⟩ ↦ |j+1 mod d⟩`.
pub fn shift(d: usize) -> Result<UnitaryOperator> {
    if d < 2 {
        return Err(Error::InvalidShape(format!("shift dimension {d} < 2")));
    }
    let mut m = ComplexMatrix::zeros(d, d);
    for j in 0..d {
        m[((j + 1) % d, j)] = ONE;
    }
    UnitaryOperator::new(m)
}

/// Root of unity used by [`clock`] and [`shift`]: `AB = ωBA`.
pub fn weyl_phase(d: usize) -> Complex64 {
    omega(d)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl std::str::FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "x" => Ok(Axis::X),
            "y" => Ok(Axis::Y),
            "z" => Ok(Axis::Z),
            other => Err(Error::scenario("axis", format!("unknown axis `{other}`"))),
        }
    }
}

pub fn pauli(axis: Axis) -> ComplexMatrix {
    let rows = match axis {
        Axis::X => [[ZERO, ONE], [ONE, ZERO]],
        Axis::Y => [[ZERO, -I], [I, ZERO]],
        Axis::Z => [[ONE, ZERO], [ZERO, -ONE]],
    };
    ComplexMatrix::from_rows(&rows).expect("static 2x2")
}

/// `e^{i·angle·σ} = cos(angle) I + i sin(angle) σ`.
pub fn pauli_exp(axis: Axis, angle: f64) -> UnitaryOperator {
    let m = &ComplexMatrix::identity(2).scale(Complex64::new(angle.cos(), 0.0))
        + &pauli(axis).scale(Complex64::new(0.0, angle.sin()));
    UnitaryOperator::new(m).expect("Pauli exponential is unitary")
}

/// Real 3×3 rotations about the coordinate axes, in the sign convention
/// `R_Z = [[c, s, 0], [−s, c, 0], [0, 0, 1]]`,
/// `R_Y = [[c, 0, s], [0, 1, 0], [−s, 0, c]]`,
/// `R_X = [[1, 0, 0], [0, c, −s], [0, s, c]]`.
pub fn rotation3(axis: Axis, angle: f64) -> UnitaryOperator {
    let (s, c) = angle.sin_cos();
    let rows = match axis {
        Axis::Z => [[c, s, 0.0], [-s, c, 0.0], [0.0, 0.0, 1.0]],
        Axis::Y => [[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]],
        Axis::X => [[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]],
    };
    UnitaryOperator::new(ComplexMatrix::from_real_rows(&rows).expect("static 3x3"))
        .expect("rotation is orthogonal")
}

/// `½(I + r·σ)`.
pub fn bloch_qubit(r: [f64; 3]) -> Result<DensityMatrix> {
    let norm = r.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 1.0 + tol::NORMALIZATION {
        return Err(Error::BlochOutOfBall { norm });
    }
    let mut m = ComplexMatrix::identity(2);
    for (axis, &coef) in [Axis::X, Axis::Y, Axis::Z].iter().zip(&r) {
        m = &m + &pauli(*axis).scale(Complex64::new(coef, 0.0));
    }
    DensityMatrix::new(m.scale(Complex64::new(0.5, 0.0)))
}

/// The eight Gell-Mann matrices `λ₁ … λ₈` in conventional order.
pub fn gell_mann() -> [ComplexMatrix; 8] {
    let mut out: [ComplexMatrix; 8] = std::array::from_fn(|_| ComplexMatrix::zeros(3, 3));
    // Off-diagonal pairs (0,1), (0,2), (1,2): symmetric then antisymmetric.
    for (slot, (a, b)) in [(0, (0, 1)), (3, (0, 2)), (5, (1, 2))] {
        out[slot][(a, b)] = ONE;
        out[slot][(b, a)] = ONE;
        out[slot + 1][(a, b)] = -I;
        out[slot + 1][(b, a)] = I;
    }
    out[2][(0, 0)] = ONE;
    out[2][(1, 1)] = -ONE;
    let s = 1.0 / 3f64.sqrt();
    out[7][(0, 0)] = Complex64::new(s, 0.0);
    out[7][(1, 1)] = Complex64::new(s, 0.0);
    out[7][(2, 2)] = Complex64::new(-2.0 * s, 0.0);
    out
}

/// `(1/3)(I + √3 n·λ)`.
pub fn gellmann_qutrit(n: [f64; 8]) -> Result<DensityMatrix> {
    let lambdas = gell_mann();
    let root3 = 3f64.sqrt();
    let mut m = ComplexMatrix::identity(3);
    for (lambda, &coef) in lambdas.iter().zip(&n) {
        if coef != 0.0 {
            m = &m + &lambda.scale(Complex64::new(root3 * coef, 0.0));
        }
    }
    DensityMatrix::new(m.scale(Complex64::new(1.0 / 3.0, 0.0)))
}

/// `⟨ψ|M|ψ⟩` or `Tr(ρM)` for an arbitrary square matrix.
pub fn expectation_of(m: &ComplexMatrix, s: &State) -> Result<Complex64> {
    if !m.is_square() {
        return Err(Error::InvalidShape("observable must be square".into()));
    }
    check_dim(s.dim(), m.rows())?;
    Ok(match s {
        State::Pure(psi) => {
            let a = psi.amplitudes();
            m.mul_vec(a)
                .iter()
                .zip(a)
                .map(|(mv, x)| x.conj() * mv)
                .sum()
        }
        State::Mixed(rho) => {
            let r = rho.matrix();
            let n = r.rows();
            let mut acc = ZERO;
            for i in 0..n {
                for k in 0..n {
                    acc += r[(i, k)] * m[(k, i)];
                }
            }
            acc
        }
    })
}

/// `⟨U⟩`.
pub fn expectation(u: &UnitaryOperator, s: &State) -> Result<Complex64> {
    expectation_of(u.matrix(), s)
}

/// `δÛ = U − ⟨U⟩ I`.
pub fn deviation(u: &UnitaryOperator, s: &State) -> Result<ComplexMatrix> {
    let mean = expectation(u, s)?;
    Ok(u.matrix() - &ComplexMatrix::identity(u.dim()).scale(mean))
}

/// `⟨δÛ†δÛ⟩` (pure) or `Tr(ρ δÛ†δÛ)` (mixed).
pub fn variance(u: &UnitaryOperator, s: &State) -> Result<f64> {
    let d = deviation(u, s)?;
    let v = expectation_of(&(&d.adjoint() * &d), s)?;
    Ok(v.re)
}

/// `|(I ⊗ δÛ)|√ρ⟩|²`, the variance computed on the purification.
pub fn variance_purified(u: &UnitaryOperator, rho: &DensityMatrix) -> Result<f64> {
    check_dim(rho.dim(), u.dim())?;
    let d = deviation(u, &State::Mixed(rho.clone()))?;
    let root = purify(rho)?;
    let lifted = matrix::kron(&ComplexMatrix::identity(rho.dim()), &d);
    Ok(lifted
        .mul_vec(root.amplitudes())
        .iter()
        .map(|z| z.norm_sqr())
        .sum())
}

/// `|√ρ⟩ = vec(√ρ)`, a unit vector of dimension `n²`.
pub fn purify(rho: &DensityMatrix) -> Result<PureState> {
    let root = matrix::psd_sqrt(rho.matrix())?;
    PureState::new(matrix::vec(&root))
}
