//! Product-form uncertainty bounds for unitary operators.
//!
//! For a pair of unitaries `A`, `B` and a state, the deviation vectors
//! `δÂ|ψ⟩` and `δB̂|ψ⟩` (or their lifts `(I ⊗ δÂ)|√ρ⟩` for mixed states) are
//! expanded in the computational basis. Their coordinate moduli `x`, `y`
//! feed the partial Cauchy–Schwarz hierarchy
//!
//! ```text
//! I_k = Σ_i x_i²y_i² + Σ_{i<j, j>k} (x_i²y_j² + x_j²y_i²) + Σ_{i<j≤k} 2 x_i y_i x_j y_j
//! ```
//!
//! which descends from `I_1 = ΔA²ΔB²` to `I_N = (Σ x_i y_i)²` and never drops
//! below the Gram bound `|⟨A†B⟩ − ⟨A†⟩⟨B⟩|²`.
//!
//! Indexing: the bound order `k` is 1-based (`1..=N`); coordinate indices,
//! pair sets and permutations are 0-based.

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::matrix::{self, ComplexMatrix};
use crate::quantum::{self, check_dim, State, UnitaryOperator};
use crate::tol;

/// The carrier vector `|ψ⟩` or `|√ρ⟩` against which deviation coordinates
/// are taken. Building it once avoids repeating the square root when several
/// operators share a state.
#[derive(Debug, Clone)]
pub struct CoordinateFrame {
    state: State,
    carrier: Vec<Complex64>,
}

impl CoordinateFrame {
    pub fn new(state: &State) -> Result<Self> {
        let carrier = match state {
            State::Pure(psi) => psi.amplitudes().to_vec(),
            State::Mixed(rho) => quantum::purify(rho)?.amplitudes().to_vec(),
        };
        Ok(Self {
            state: state.clone(),
            carrier,
        })
    }

    pub fn state(&self) -> &State {
        &self.state
    }

    /// `N`: `n` for pure states and `n²` for mixed ones.
    pub fn effective_dim(&self) -> usize {
        self.carrier.len()
    }

    /// Coordinates of `δÛ|ψ⟩`, or of `(I ⊗ δÛ)|√ρ⟩` for a mixed state.
    pub fn coordinates(&self, u: &UnitaryOperator) -> Result<Vec<Complex64>> {
        let dev = quantum::deviation(u, &self.state)?;
        Ok(match &self.state {
            State::Pure(_) => dev.mul_vec(&self.carrier),
            State::Mixed(rho) => {
                matrix::kron(&ComplexMatrix::identity(rho.dim()), &dev).mul_vec(&self.carrier)
            }
        })
    }

    pub fn pair(&self, a: &UnitaryOperator, b: &UnitaryOperator) -> Result<AmplitudePair> {
        AmplitudePair::new(self.coordinates(a)?, self.coordinates(b)?)
    }
}

/// Deviation coordinates `α`, `β` of two operators and their moduli `x`, `y`.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudePair {
    alpha: Vec<Complex64>,
    beta: Vec<Complex64>,
    x: Vec<f64>,
    y: Vec<f64>,
}

impl AmplitudePair {
    pub fn new(alpha: Vec<Complex64>, beta: Vec<Complex64>) -> Result<Self> {
        if alpha.len() != beta.len() {
            return Err(Error::LengthMismatch {
                left: alpha.len(),
                right: beta.len(),
            });
        }
        if alpha.is_empty() {
            return Err(Error::InvalidShape("empty coordinate vectors".into()));
        }
        let x = alpha.iter().map(|z| z.norm()).collect();
        let y = beta.iter().map(|z| z.norm()).collect();
        Ok(Self { alpha, beta, x, y })
    }

    /// Synthetic pair from nonnegative moduli (phases all zero).
    pub fn from_moduli(x: &[f64], y: &[f64]) -> Result<Self> {
        if let Some(bad) = x.iter().chain(y).find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::InvalidShape(format!(
                "modulus {bad} is not a finite nonnegative number"
            )));
        }
        Self::new(
            x.iter().map(|&v| Complex64::new(v, 0.0)).collect(),
            y.iter().map(|&v| Complex64::new(v, 0.0)).collect(),
        )
    }

    pub fn n_eff(&self) -> usize {
        self.x.len()
    }

    pub fn alpha(&self) -> &[Complex64] {
        &self.alpha
    }

    pub fn beta(&self) -> &[Complex64] {
        &self.beta
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    /// `⟨f|g⟩ = Σ ᾱ_i β_i`, which equals the covariance `⟨A†B⟩ − ⟨A†⟩⟨B⟩`.
    pub fn inner_product(&self) -> Complex64 {
        self.alpha
            .iter()
            .zip(&self.beta)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    fn check_order(&self, k: usize) -> Result<()> {
        check_order(k, self.n_eff())
    }
}

fn check_order(k: usize, n: usize) -> Result<()> {
    if (1..=n).contains(&k) {
        Ok(())
    } else {
        Err(Error::IndexOutOfRange { index: k, max: n })
    }
}

/// Deviation coordinates for `(a, b)` with respect to `s`.
pub fn amplitude_pair(
    a: &UnitaryOperator,
    b: &UnitaryOperator,
    s: &State,
) -> Result<AmplitudePair> {
    check_dim(s.dim(), a.dim())?;
    check_dim(s.dim(), b.dim())?;
    CoordinateFrame::new(s)?.pair(a, b)
}

// Term-by-term sums of the defining formula.
fn ik_defining_sums(x: &[f64], y: &[f64], k: usize) -> f64 {
    let n = x.len();
    let mut diagonal = 0.0;
    for i in 0..n {
        diagonal += x[i] * x[i] * y[i] * y[i];
    }
    let mut outside = 0.0;
    let mut inside = 0.0;
    for j in 0..n {
        for i in 0..j {
            if j >= k {
                outside += x[i] * x[i] * y[j] * y[j] + x[j] * x[j] * y[i] * y[i];
            } else {
                inside += 2.0 * x[i] * y[i] * x[j] * y[j];
            }
        }
    }
    diagonal + outside + inside
}

// (Σ_{i≤k} x_i y_i)² plus every lattice term outside the leading k×k square.
fn ik_square_sums(x: &[f64], y: &[f64], k: usize) -> f64 {
    let head: f64 = x[..k].iter().zip(&y[..k]).map(|(a, b)| a * b).sum();
    let mut outside = 0.0;
    for (i, xi) in x.iter().enumerate() {
        for (j, yj) in y.iter().enumerate() {
            if i >= k || j >= k {
                outside += xi * xi * yj * yj;
            }
        }
    }
    head * head + outside
}

// O(N) form used inside the permutation search:
// I_k = I_1 − [(Σ_{i≤k} x_i²)(Σ_{i≤k} y_i²) − (Σ_{i≤k} x_i y_i)²].
fn ik_fast(x: &[f64], y: &[f64], k: usize) -> f64 {
    let (mut xx, mut yy, mut xy, mut xt, mut yt) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for i in 0..x.len() {
        let (a, b) = (x[i], y[i]);
        xt += a * a;
        yt += b * b;
        if i < k {
            xx += a * a;
            yy += b * b;
            xy += a * b;
        }
    }
    xt * yt - (xx * yy - xy * xy)
}

/// `I_k` for `1 ≤ k ≤ N`, evaluated from its defining sums.
pub fn i_k(p: &AmplitudePair, k: usize) -> Result<f64> {
    p.check_order(k)?;
    Ok(ik_defining_sums(&p.x, &p.y, k))
}

/// `I_k` evaluated as `(Σ_{i≤k} x_i y_i)²` plus all lattice terms
/// `x_i²y_j²` lying outside the leading `k×k` square.
pub fn i_k_square_form(p: &AmplitudePair, k: usize) -> Result<f64> {
    p.check_order(k)?;
    Ok(ik_square_sums(&p.x, &p.y, k))
}

/// The full hierarchy `I_1 ≥ … ≥ I_N` together with the Gram endpoint.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundChain {
    /// `values[k - 1] = I_k`.
    pub values: Vec<f64>,
    /// `|⟨A†B⟩ − ⟨A†⟩⟨B⟩|²`.
    pub lb_gram2: f64,
}

impl BoundChain {
    /// `I_k` with 1-based `k`.
    pub fn get(&self, k: usize) -> Option<f64> {
        k.checked_sub(1).and_then(|i| self.values.get(i).copied())
    }

    /// Largest increase `I_{k+1} − I_k` along the chain (≤ 0 when descending).
    pub fn worst_ascent(&self) -> f64 {
        self.values
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn is_nonincreasing(&self, slack: f64) -> bool {
        self.values.len() < 2 || self.worst_ascent() <= slack
    }
}

pub fn chain(p: &AmplitudePair) -> BoundChain {
    let values = (1..=p.n_eff())
        .map(|k| ik_defining_sums(&p.x, &p.y, k))
        .collect();
    BoundChain {
        values,
        lb_gram2: p.inner_product().norm_sqr(),
    }
}

/// `σ_AB = ⟨A†B⟩ − ⟨A†⟩⟨B⟩`.
pub fn covariance(a: &UnitaryOperator, b: &UnitaryOperator, s: &State) -> Result<Complex64> {
    check_dim(a.dim(), b.dim())?;
    let ab = quantum::expectation_of(&(&a.matrix().adjoint() * b.matrix()), s)?;
    let ea = quantum::expectation(a, s)?;
    let eb = quantum::expectation(b, s)?;
    Ok(ab - ea.conj() * eb)
}

/// Two-operator Gram bound `|σ_AB|²`.
pub fn lb2(a: &UnitaryOperator, b: &UnitaryOperator, s: &State) -> Result<f64> {
    Ok(covariance(a, b, s)?.norm_sqr())
}

/// A pair of permutations of `0..N`; `first` relabels `x`, `second` relabels
/// `y`: `x'_i = x[first[i]]`, `y'_i = y[second[i]]`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PermutationPair {
    first: Vec<usize>,
    second: Vec<usize>,
}

fn validate_permutation(p: &[usize], name: &str) -> Result<()> {
    let mut seen = vec![false; p.len()];
    for &v in p {
        if v >= p.len() || std::mem::replace(&mut seen[v], true) {
            return Err(Error::InvalidPermutation(format!(
                "{name} = {p:?} is not a bijection"
            )));
        }
    }
    Ok(())
}

impl PermutationPair {
    pub fn new(first: Vec<usize>, second: Vec<usize>) -> Result<Self> {
        if first.len() != second.len() {
            return Err(Error::InvalidPermutation(format!(
                "lengths differ: {} vs {}",
                first.len(),
                second.len()
            )));
        }
        validate_permutation(&first, "first")?;
        validate_permutation(&second, "second")?;
        Ok(Self { first, second })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            first: (0..n).collect(),
            second: (0..n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.first.len()
    }

    pub fn is_empty(&self) -> bool {
        self.first.is_empty()
    }

    pub fn first(&self) -> &[usize] {
        &self.first
    }

    pub fn second(&self) -> &[usize] {
        &self.second
    }

    fn relabel(&self, x: &[f64], y: &[f64], xb: &mut [f64], yb: &mut [f64]) {
        for i in 0..self.first.len() {
            xb[i] = x[self.first[i]];
            yb[i] = y[self.second[i]];
        }
    }
}

/// `I_k` of the relabeled moduli `(x∘π₁, y∘π₂)`.
pub fn permuted_i_k(p: &AmplitudePair, perm: &PermutationPair, k: usize) -> Result<f64> {
    p.check_order(k)?;
    if perm.len() != p.n_eff() {
        return Err(Error::InvalidPermutation(format!(
            "permutation length {} does not match N = {}",
            perm.len(),
            p.n_eff()
        )));
    }
    let mut xb = vec![0.0; p.n_eff()];
    let mut yb = vec![0.0; p.n_eff()];
    perm.relabel(&p.x, &p.y, &mut xb, &mut yb);
    Ok(ik_defining_sums(&xb, &yb, k))
}

/// Largest `N` for which the exhaustive `S_N × S_N` search is allowed.
pub const EXHAUSTIVE_LIMIT: usize = 6;
/// Random permutation pairs drawn by the heuristic search.
pub const DEFAULT_RESTARTS: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchStrategy {
    /// Full enumeration of `S_N × S_N`; requires `N ≤ EXHAUSTIVE_LIMIT`.
    Exhaustive,
    /// Identity and sorted pairings, `restarts` seeded random pairs, then
    /// transposition hill climbing from the best candidate.
    Heuristic { seed: u64, restarts: usize },
    /// Exhaustive when `N ≤ EXHAUSTIVE_LIMIT`, heuristic otherwise.
    Auto { seed: u64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct PermutedMax {
    pub value: f64,
    pub perm: PermutationPair,
}

/// Lexicographic successor; `false` once `p` is the last permutation.
fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

fn exhaustive_max(x: &[f64], y: &[f64], k: usize) -> PermutationPair {
    let n = x.len();
    let mut xb = vec![0.0; n];
    let mut yb = vec![0.0; n];
    let mut values = Vec::new();
    let mut p1: Vec<usize> = (0..n).collect();
    loop {
        for i in 0..n {
            xb[i] = x[p1[i]];
        }
        let mut p2: Vec<usize> = (0..n).collect();
        loop {
            for i in 0..n {
                yb[i] = y[p2[i]];
            }
            values.push(ik_fast(&xb, &yb, k));
            if !next_permutation(&mut p2) {
                break;
            }
        }
        if !next_permutation(&mut p1) {
            break;
        }
    }
    let best = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let winner = values
        .iter()
        .position(|&v| v >= best - tol::PERM_TIE)
        .expect("at least the maximum qualifies");

    // Decode the winner's rank back into the lexicographic pair.
    let per_block = values.len() / factorial(n);
    let mut p1: Vec<usize> = (0..n).collect();
    for _ in 0..winner / per_block {
        next_permutation(&mut p1);
    }
    let mut p2: Vec<usize> = (0..n).collect();
    for _ in 0..winner % per_block {
        next_permutation(&mut p2);
    }
    PermutationPair {
        first: p1,
        second: p2,
    }
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

fn argsort_descending(v: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..v.len()).collect();
    idx.sort_by(|&a, &b| v[b].total_cmp(&v[a]).then(a.cmp(&b)));
    idx
}

fn heuristic_max(x: &[f64], y: &[f64], k: usize, seed: u64, restarts: usize) -> PermutationPair {
    let n = x.len();
    let mut xb = vec![0.0; n];
    let mut yb = vec![0.0; n];
    let mut eval = |perm: &PermutationPair| {
        perm.relabel(x, y, &mut xb, &mut yb);
        ik_fast(&xb, &yb, k)
    };

    let mut best = PermutationPair::identity(n);
    let mut best_value = eval(&best);
    let mut consider = |cand: PermutationPair, eval: &mut dyn FnMut(&PermutationPair) -> f64| {
        let v = eval(&cand);
        if v > best_value {
            best_value = v;
            best = cand;
        }
    };

    let sorted = argsort_descending(x);
    consider(
        PermutationPair {
            first: sorted.clone(),
            second: argsort_descending(y),
        },
        &mut eval,
    );
    consider(
        PermutationPair {
            first: sorted.clone(),
            second: sorted,
        },
        &mut eval,
    );

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..restarts {
        let mut first: Vec<usize> = (0..n).collect();
        let mut second: Vec<usize> = (0..n).collect();
        first.shuffle(&mut rng);
        second.shuffle(&mut rng);
        consider(PermutationPair { first, second }, &mut eval);
    }

    // First-improvement hill climbing over single transpositions.
    let mut current = best;
    let mut current_value = best_value;
    let max_rounds = 4 * n * n;
    for _ in 0..max_rounds {
        let mut improved = false;
        'scan: for side in 0..2 {
            for i in 0..n {
                for j in (i + 1)..n {
                    let mut cand = current.clone();
                    if side == 0 {
                        cand.first.swap(i, j);
                    } else {
                        cand.second.swap(i, j);
                    }
                    let v = eval(&cand);
                    if v > current_value + f64::EPSILON {
                        current = cand;
                        current_value = v;
                        improved = true;
                        break 'scan;
                    }
                }
            }
        }
        if !improved {
            break;
        }
    }
    current
}

/// `max_{π₁, π₂ ∈ S_N} (π₁, π₂) I_k`.
///
/// The exhaustive search reports the lexicographically smallest pair
/// `(π₁, π₂)` whose value is within [`tol::PERM_TIE`] of the maximum. The
/// heuristic is deterministic for a given seed; it always includes the
/// identity, so its result is never below `I_k`. The returned value is
/// `I_k` re-evaluated from its defining sums on the reported pair.
pub fn max_permuted_i_k(
    p: &AmplitudePair,
    k: usize,
    strategy: SearchStrategy,
) -> Result<PermutedMax> {
    p.check_order(k)?;
    let n = p.n_eff();
    let perm = match strategy {
        SearchStrategy::Exhaustive if n > EXHAUSTIVE_LIMIT => {
            return Err(Error::ExhaustiveTooLarge {
                n,
                limit: EXHAUSTIVE_LIMIT,
            })
        }
        SearchStrategy::Exhaustive => exhaustive_max(&p.x, &p.y, k),
        SearchStrategy::Auto { .. } if n <= EXHAUSTIVE_LIMIT => exhaustive_max(&p.x, &p.y, k),
        SearchStrategy::Auto { seed } => heuristic_max(&p.x, &p.y, k, seed, DEFAULT_RESTARTS),
        SearchStrategy::Heuristic { seed, restarts } => {
            heuristic_max(&p.x, &p.y, k, seed, restarts)
        }
    };
    let value = permuted_i_k(p, &perm, k)?;
    Ok(PermutedMax { value, perm })
}

/// Partial Cauchy–Schwarz on an arbitrary set of index pairs: start from
/// `I_1` and, for each selected `(i, j)` with `i < j`, replace the cross terms
/// `x_i²y_j² + x_j²y_i²` by `2 x_i y_i x_j y_j`.
pub fn pairset_bound(p: &AmplitudePair, pairs: &[(usize, usize)]) -> Result<f64> {
    let n = p.n_eff();
    let mut seen = std::collections::HashSet::new();
    for &(i, j) in pairs {
        if i >= j || j >= n {
            return Err(Error::InvalidPairSet(format!(
                "pair ({i}, {j}) is not of the form i < j < {n}"
            )));
        }
        if !seen.insert((i, j)) {
            return Err(Error::InvalidPairSet(format!(
                "pair ({i}, {j}) appears twice"
            )));
        }
    }
    let (x, y) = (&p.x, &p.y);
    let mut total = 0.0;
    for i in 0..n {
        total += x[i] * x[i] * y[i] * y[i];
        for j in (i + 1)..n {
            total += if seen.contains(&(i, j)) {
                2.0 * x[i] * y[i] * x[j] * y[j]
            } else {
                x[i] * x[i] * y[j] * y[j] + x[j] * x[j] * y[i] * y[i]
            };
        }
    }
    Ok(total)
}

/// The leading `k`-block `{(i, j) : i < j < k}` (0-based), which makes
/// [`pairset_bound`] reproduce `I_k`.
pub fn leading_block(k: usize) -> Vec<(usize, usize)> {
    (0..k).flat_map(|j| (0..j).map(move |i| (i, j))).collect()
}

/// Gram matrix `G_jk = ⟨U_j†U_k⟩` over `{I, U_1, …, U_d}`.
#[derive(Debug, Clone)]
pub struct GramReport {
    pub gram: ComplexMatrix,
    /// Real part of `det G`.
    pub determinant: f64,
    /// `|σ_AB|²` for two operators, [`lb3`] for three; `None` otherwise.
    pub lower_bound: Option<f64>,
}

pub const GRAM_MAX_OPERATORS: usize = 4;

pub fn gram(ops: &[&UnitaryOperator], s: &State) -> Result<GramReport> {
    if ops.is_empty() {
        return Err(Error::InvalidShape(
            "Gram matrix needs at least one operator".into(),
        ));
    }
    if ops.len() > GRAM_MAX_OPERATORS {
        return Err(Error::TooManyOperators {
            count: ops.len(),
            limit: GRAM_MAX_OPERATORS,
        });
    }
    for u in ops {
        check_dim(s.dim(), u.dim())?;
    }
    let identity = UnitaryOperator::identity(s.dim());
    let family: Vec<&UnitaryOperator> = std::iter::once(&identity)
        .chain(ops.iter().copied())
        .collect();
    let size = family.len();
    let mut g = ComplexMatrix::zeros(size, size);
    for j in 0..size {
        g[(j, j)] = Complex64::new(1.0, 0.0);
        for k in (j + 1)..size {
            let v =
                quantum::expectation_of(&(&family[j].matrix().adjoint() * family[k].matrix()), s)?;
            g[(j, k)] = v;
            g[(k, j)] = v.conj();
        }
    }
    let det = matrix::det(&g)?;
    debug_assert!(
        det.im.abs() <= tol::DET_IMAG,
        "Gram determinant has imaginary part {}",
        det.im
    );
    let lower_bound = match ops {
        [a, b] => Some(lb2(a, b, s)?),
        [a, b, c] => Some(lb3(a, b, c, s)?),
        _ => None,
    };
    Ok(GramReport {
        gram: g,
        determinant: det.re,
        lower_bound,
    })
}

/// Three-operator Gram bound:
/// `ΔA²|σ_BC|² + ΔB²|σ_AC|² + ΔC²|σ_AB|² − 2 Re{σ_AC σ_CB σ_BA}`.
pub fn lb3(
    a: &UnitaryOperator,
    b: &UnitaryOperator,
    c: &UnitaryOperator,
    s: &State,
) -> Result<f64> {
    let va = quantum::variance(a, s)?;
    let vb = quantum::variance(b, s)?;
    let vc = quantum::variance(c, s)?;
    let s_bc = covariance(b, c, s)?;
    let s_ac = covariance(a, c, s)?;
    let s_ab = covariance(a, b, s)?;
    let s_cb = covariance(c, b, s)?;
    let s_ba = covariance(b, a, s)?;
    Ok(
        va * s_bc.norm_sqr() + vb * s_ac.norm_sqr() + vc * s_ab.norm_sqr()
            - 2.0 * (s_ac * s_cb * s_ba).re,
    )
}

/// `Π ΔU_j²`.
pub fn variance_product(ops: &[&UnitaryOperator], s: &State) -> Result<f64> {
    ops.iter().map(|u| quantum::variance(u, s)).product()
}

/// Whether pair bounds use plain `I_k` or its permutation maximum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundMode {
    Plain,
    Strengthened(SearchStrategy),
}

fn pair_bound(p: &AmplitudePair, k: usize, mode: BoundMode) -> Result<f64> {
    match mode {
        BoundMode::Plain => i_k(p, k),
        BoundMode::Strengthened(strategy) => Ok(max_permuted_i_k(p, k, strategy)?.value),
    }
}

fn check_product_order(k: usize, n: usize) -> Result<()> {
    if k < 2 || k > n {
        Err(Error::IndexOutOfRange { index: k, max: n })
    } else {
        Ok(())
    }
}

/// `√(I_k J_k K_k)` with `I_k = I_k(A, B)`, `J_k = I_k(A, C)`,
/// `K_k = I_k(B, C)`; each factor is replaced by its permutation maximum
/// in strengthened mode.
pub fn product3_bound(
    ops: [&UnitaryOperator; 3],
    s: &State,
    k: usize,
    mode: BoundMode,
) -> Result<f64> {
    for u in ops {
        check_dim(s.dim(), u.dim())?;
    }
    let frame = CoordinateFrame::new(s)?;
    check_product_order(k, frame.effective_dim())?;
    let [a, b, c] = ops.map(|u| frame.coordinates(u));
    let (a, b, c) = (a?, b?, c?);
    let ab = AmplitudePair::new(a.clone(), b.clone())?;
    let ac = AmplitudePair::new(a, c.clone())?;
    let bc = AmplitudePair::new(b, c)?;
    let product = pair_bound(&ab, k, mode)? * pair_bound(&ac, k, mode)? * pair_bound(&bc, k, mode)?;
    Ok(product.max(0.0).sqrt())
}

/// `I_k(A, B) · I_k(C, D)` for the pairing `((A, B), (C, D))`.
pub fn product4_bound(pairing: [[&UnitaryOperator; 2]; 2], s: &State, k: usize) -> Result<f64> {
    for u in pairing.iter().flatten() {
        check_dim(s.dim(), u.dim())?;
    }
    let frame = CoordinateFrame::new(s)?;
    check_product_order(k, frame.effective_dim())?;
    let [[a, b], [c, d]] = pairing;
    Ok(i_k(&frame.pair(a, b)?, k)? * i_k(&frame.pair(c, d)?, k)?)
}

/// Maximum of [`product4_bound`] over the three perfect matchings of
/// `{A, B, C, D}`.
pub fn product4_best_matching(ops: [&UnitaryOperator; 4], s: &State, k: usize) -> Result<f64> {
    let [a, b, c, d] = ops;
    let matchings = [[[a, b], [c, d]], [[a, c], [b, d]], [[a, d], [b, c]]];
    matchings
        .into_iter()
        .map(|m| product4_bound(m, s, k))
        .try_fold(f64::NEG_INFINITY, |acc, v| Ok(acc.max(v?)))
}
