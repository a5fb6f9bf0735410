//! Explicit entanglement witnesses for the SWAP-test output state.
//!
//! With `rho1* = sum lambda_i |phi_i><phi_i|` and `rho2* = sum sigma_i |psi_i><psi_i|`
//! (eigenvalues decreasing), a vector of the form
//! `|x> = (-|psi_l>|phi_k>, |phi_k>|psi_l>) / sqrt(2)`, split over the two
//! auxiliary blocks, has
//! `<x| rho^T12 |x> = (<psi_l|rho1*|psi_l> <phi_k|rho2*|phi_k> - <phi_k|rho1*|phi_k> <psi_l|rho2*|psi_l>) / 2`.
//! Choosing `k, l` from the number `n` of leading eigenvectors the two states
//! share makes this negative whenever `rho1 != rho2`:
//!
//! | case | condition          | k, l (0-based) | value                         |
//! |------|--------------------|----------------|-------------------------------|
//! | i    | n < min(r1, r2)    | n, n           | < 0                           |
//! | ii   | n = r1 < r2        | n-1, n         | -lambda_{n-1} sigma_n / 2     |
//! | iii  | n = r2 < r1        | n, n-1         | -lambda_n sigma_{n-1} / 2     |
//! | iv   | n = r1 = r2        | argmax         | (lambda_l sigma_k - lambda_k sigma_l) / 2 |

use num_complex::Complex64;
use serde::{Serialize, Serializer};

use crate::linalg::{
    eig_hermitian, max_abs_diff, quadratic_form, CMatrix, CVector, DensityMatrix, EigDecomposition,
};
use crate::random;
use crate::swaptest::build_closed_form;
use crate::{tol, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum ProofCase {
    #[serde(rename = "i")]
    I,
    #[serde(rename = "ii")]
    II,
    #[serde(rename = "iii")]
    III,
    #[serde(rename = "iv")]
    IV,
}

impl std::fmt::Display for ProofCase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::I => "i",
            Self::II => "ii",
            Self::III => "iii",
            Self::IV => "iv",
        })
    }
}

/// Eigendecompositions of `rho1*` and `rho2*` after aligning degenerate blocks,
/// and the number of leading eigenvector pairs they share.
#[derive(Debug, Clone)]
pub struct EigenPairing {
    pub n: usize,
    pub first: EigDecomposition,
    pub second: EigDecomposition,
}

fn same_direction(a: &CVector, b: &CVector) -> bool {
    a.dotc(b).norm() >= 1.0 - tol::MATCH
}

/// End (exclusive) of the degenerate block that starts at `start`.
fn block_end(values: &[f64], start: usize) -> usize {
    let mut end = start + 1;
    while end < values.len() && (values[end] - values[start]).abs() <= tol::DEGENERATE {
        end += 1;
    }
    end
}

/// Replaces columns `start..end` of `vectors` by an orthonormal basis of the
/// same span whose first element is `lead` (assumed in that span).
fn rebase(vectors: &mut CMatrix, start: usize, end: usize, lead: &CVector) {
    let lead = lead.normalize();
    let old: Vec<CVector> = (start..end)
        .map(|j| vectors.column(j).into_owned())
        .collect();
    let dropped = (0..old.len())
        .max_by(|&a, &b| {
            let oa = old[a].dotc(&lead).norm();
            let ob = old[b].dotc(&lead).norm();
            oa.total_cmp(&ob)
        })
        .expect("nonempty block");
    let mut basis = vec![lead];
    for (j, v) in old.into_iter().enumerate() {
        if j == dropped {
            continue;
        }
        let mut w = v;
        for q in &basis {
            let proj = q.dotc(&w);
            w -= q * proj;
        }
        basis.push(w.normalize());
    }
    for (offset, q) in basis.into_iter().enumerate() {
        vectors.set_column(start + offset, &q);
    }
}

/// Counts the leading eigenvector pairs of `rho1*` and `rho2*` that coincide
/// up to phase, capped at `min(r1, r2)`.
///
/// Inside degenerate eigenvalue blocks the solver's basis is arbitrary, so
/// before declaring a mismatch the two blocks are checked for a shared
/// direction (top singular pair of their overlap matrix) and rotated to put it
/// first.
pub fn match_count(rho1: &DensityMatrix, rho2: &DensityMatrix) -> Result<EigenPairing> {
    if rho1.dim() != rho2.dim() {
        return Err(Error::DimensionMismatch(rho1.dim(), rho2.dim()));
    }
    let mut first = eig_hermitian(rho1.conj().matrix())?;
    let mut second = eig_hermitian(rho2.conj().matrix())?;
    let limit = first.rank.min(second.rank);

    let mut i = 0;
    while i < limit {
        if same_direction(&first.vector(i), &second.vector(i)) {
            i += 1;
            continue;
        }
        let end1 = block_end(&first.eigenvalues, i);
        let end2 = block_end(&second.eigenvalues, i);
        if end1 - i == 1 && end2 - i == 1 {
            break;
        }
        let phi = first.eigenvectors.columns(i, end1 - i).into_owned();
        let psi = second.eigenvectors.columns(i, end2 - i).into_owned();
        let overlap = phi.adjoint() * &psi;
        let svd = overlap.svd(true, true);
        let (k, &s) = svd
            .singular_values
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .expect("nonempty overlap");
        if s < 1.0 - tol::MATCH {
            break;
        }
        let u = svd.u.as_ref().expect("requested U").column(k).into_owned();
        let v = svd.v_t.as_ref().expect("requested V^H").row(k).adjoint();
        rebase(&mut first.eigenvectors, i, end1, &(&phi * u));
        rebase(&mut second.eigenvectors, i, end2, &(&psi * v));
        if !same_direction(&first.vector(i), &second.vector(i)) {
            break;
        }
        i += 1;
    }
    Ok(EigenPairing {
        n: i,
        first,
        second,
    })
}

/// `(-|psi>|phi>, |phi>|psi>) / sqrt(2)` laid out over the auxiliary blocks.
pub fn witness_vector(phi: &CVector, psi: &CVector) -> CVector {
    let top = -psi.kronecker(phi);
    let bottom = phi.kronecker(psi);
    let k = top.len();
    let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    CVector::from_fn(
        2 * k,
        |r, _| {
            if r < k {
                top[r] * h
            } else {
                bottom[r - k] * h
            }
        },
    )
}

fn serialize_vector<S: Serializer>(v: &CVector, s: S) -> std::result::Result<S::Ok, S::Error> {
    #[derive(Serialize)]
    struct Parts {
        re: Vec<f64>,
        im: Vec<f64>,
    }
    Parts {
        re: v.iter().map(|z| z.re).collect(),
        im: v.iter().map(|z| z.im).collect(),
    }
    .serialize(s)
}

/// A vector with negative expectation in the partial transpose of the output
/// state, together with the case of the construction that produced it.
#[derive(Debug, Clone, Serialize)]
pub struct WitnessCertificate {
    #[serde(rename = "case")]
    pub case_id: ProofCase,
    pub n_matched: usize,
    /// `(k, l)`: 0-based indices of `phi_k` (from `rho1*`) and `psi_l` (from `rho2*`).
    pub indices: (usize, usize),
    pub rank1: usize,
    pub rank2: usize,
    /// `<x| rho^T12 |x>` evaluated directly.
    pub value: f64,
    /// Value predicted from the spectra by the case formula.
    pub predicted_value: f64,
    #[serde(serialize_with = "serialize_vector")]
    pub vector: CVector,
}

/// Builds and checks the witness for a pair of distinct input states.
pub fn construct_witness(rho1: &DensityMatrix, rho2: &DensityMatrix) -> Result<WitnessCertificate> {
    if rho1.dim() != rho2.dim() {
        return Err(Error::DimensionMismatch(rho1.dim(), rho2.dim()));
    }
    let diff = max_abs_diff(rho1.matrix(), rho2.matrix());
    if diff <= tol::DISTINCT {
        return Err(Error::IndistinguishableInputs(diff));
    }

    let pairing = match_count(rho1, rho2)?;
    let (lam, sig) = (&pairing.first.eigenvalues, &pairing.second.eigenvalues);
    let (r1, r2, n) = (pairing.first.rank, pairing.second.rank, pairing.n);

    let (case_id, k, l) = if n < r1.min(r2) {
        (ProofCase::I, n, n)
    } else if n == r1 && r1 < r2 {
        (ProofCase::II, n - 1, n)
    } else if n == r2 && r2 < r1 {
        (ProofCase::III, n, n - 1)
    } else {
        let mut best: Option<(usize, usize, f64)> = None;
        for k in 0..n {
            for l in 0..n {
                let gap = lam[k] * sig[l] - lam[l] * sig[k];
                if gap > 0.0 && best.is_none_or(|b| gap > b.2) {
                    best = Some((k, l, gap));
                }
            }
        }
        let (k, l, _) = best.ok_or(Error::NoViolatingPair)?;
        (ProofCase::IV, k, l)
    };

    let phi = pairing.first.vector(k);
    let psi = pairing.second.vector(l);
    let predicted_value = match case_id {
        ProofCase::I => {
            let c1 = rho1.conj();
            let c2 = rho2.conj();
            0.5 * (quadratic_form(c1.matrix(), &psi) * quadratic_form(c2.matrix(), &phi)
                - lam[k] * sig[l])
        }
        ProofCase::II | ProofCase::III | ProofCase::IV => 0.5 * (lam[l] * sig[k] - lam[k] * sig[l]),
    };

    let vector = witness_vector(&phi, &psi);
    let pt = build_closed_form(rho1, rho2)?
        .density()
        .partial_transpose(&[1, 2])?;
    let value = quadratic_form(&pt, &vector);
    if value >= 0.0 {
        return Err(Error::NonNegativeWitness(value));
    }
    Ok(WitnessCertificate {
        case_id,
        n_matched: n,
        indices: (k, l),
        rank1: r1,
        rank2: r2,
        value,
        predicted_value,
        vector,
    })
}

/// `u` with its columns `keep..` rotated by a random unitary on their span.
fn rotate_tail<R: rand::Rng + ?Sized>(rng: &mut R, u: &CMatrix, keep: usize) -> CMatrix {
    let d = u.ncols();
    let w = random::random_unitary(rng, d - keep);
    let mut v = u.clone();
    let tail = u.columns(keep, d - keep) * w;
    v.columns_mut(keep, d - keep).copy_from(&tail);
    v
}

/// Random distinct pair of `d`-dimensional states whose witness falls under
/// `case`. Needs `d >= 2`.
pub fn random_pair<R: rand::Rng + ?Sized>(
    rng: &mut R,
    d: usize,
    case: ProofCase,
) -> Result<(DensityMatrix, DensityMatrix)> {
    if d < 2 {
        return Err(Error::InvalidParameter(format!("need d >= 2, got {d}")));
    }
    let u = random::random_unitary(rng, d);
    match case {
        ProofCase::I => {
            let r1 = rng.random_range(1..=d);
            let r2 = rng.random_range(1..=d);
            // A one-dimensional remainder would force the next vectors to match.
            let shared = rng.random_range(0..r1.min(r2).min(d - 1));
            let v = rotate_tail(rng, &u, shared);
            Ok((
                random::state_with_spectrum(&u, &random::random_spectrum(rng, d, r1))?,
                random::state_with_spectrum(&v, &random::random_spectrum(rng, d, r2))?,
            ))
        }
        ProofCase::II | ProofCase::III => {
            let low = rng.random_range(1..d);
            let high = rng.random_range(low + 1..=d);
            let v = rotate_tail(rng, &u, low);
            let a = random::state_with_spectrum(&u, &random::random_spectrum(rng, d, low))?;
            let b = random::state_with_spectrum(&v, &random::random_spectrum(rng, d, high))?;
            Ok(if case == ProofCase::II {
                (a, b)
            } else {
                (b, a)
            })
        }
        ProofCase::IV => {
            let r = rng.random_range(2..=d);
            Ok((
                random::state_with_spectrum(&u, &random::random_spectrum(rng, d, r))?,
                random::state_with_spectrum(&u, &random::random_spectrum(rng, d, r))?,
            ))
        }
    }
}
