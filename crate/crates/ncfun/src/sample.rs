//! Seeded random constructors for tuples, polynomials, similarities, and
//! realizations. Everything is driven by a caller-supplied RNG so CLI runs
//! and test suites are reproducible from a single seed.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::freealg::{NcPoly, PolyMatrix, Word};
use crate::linalg;
use crate::mattuple::MatrixTuple;
use crate::realization::Realization;
use crate::{CMat, C64};

/// Standard complex Gaussian: independent N(0,1) real and imaginary parts.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im)
}

pub fn gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMat {
    CMat::from_fn(rows, cols, |_, _| complex_gaussian(rng))
}

/// d-tuple of n-by-n matrices with independent standard complex Gaussian
/// entries.
pub fn gaussian_tuple<R: Rng + ?Sized>(rng: &mut R, d: usize, n: usize) -> MatrixTuple {
    let entries = (0..d).map(|_| gaussian_matrix(rng, n, n)).collect();
    MatrixTuple::new(entries).expect("square matrices of one size")
}

pub fn random_word<R: Rng + ?Sized>(rng: &mut R, d: usize, max_len: usize) -> Word {
    let len = rng.random_range(0..=max_len);
    Word::from_letters((0..len).map(|_| rng.random_range(1..=d)).collect())
}

/// Random polynomial with complex Gaussian coefficients.
pub fn random_poly<R: Rng + ?Sized>(
    rng: &mut R,
    d: usize,
    max_degree: usize,
    max_terms: usize,
) -> NcPoly {
    let terms = rng.random_range(1..=max_terms);
    let pairs = (0..terms)
        .map(|_| (random_word(rng, d, max_degree), complex_gaussian(rng)))
        .collect::<Vec<_>>();
    NcPoly::from_terms(d, pairs).expect("letters within range")
}

/// Random polynomial with small nonzero integer coefficients, so symbolic
/// ring-law checks are exact in floating point.
pub fn random_int_poly<R: Rng + ?Sized>(
    rng: &mut R,
    d: usize,
    max_degree: usize,
    max_terms: usize,
    coeff_bound: i32,
) -> NcPoly {
    let terms = rng.random_range(1..=max_terms);
    let pairs = (0..terms)
        .map(|_| {
            let mut coeff = 0;
            while coeff == 0 {
                coeff = rng.random_range(-coeff_bound..=coeff_bound);
            }
            (random_word(rng, d, max_degree), C64::new(coeff as f64, 0.0))
        })
        .collect::<Vec<_>>();
    NcPoly::from_terms(d, pairs).expect("letters within range")
}

/// Haar-distributed unitary via QR of a Gaussian matrix with the phase fix
/// that makes the diagonal of R positive.
pub fn haar_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMat {
    let g = gaussian_matrix(rng, n, n);
    let qr = g.qr();
    let q = qr.q();
    let r = qr.r();
    let mut phases = CMat::zeros(n, n);
    for i in 0..n {
        let rii = r[(i, i)];
        phases[(i, i)] = if rii.norm() == 0.0 {
            C64::new(1.0, 0.0)
        } else {
            rii / rii.norm()
        };
    }
    q * phases
}

/// Invertible similarity with condition number exactly `cond`: unitaries on
/// both sides of log-spaced singular values between 1 and `cond`.
pub fn similarity_with_cond<R: Rng + ?Sized>(rng: &mut R, n: usize, cond: f64) -> CMat {
    assert!(cond >= 1.0, "condition target must be at least 1");
    let u = haar_unitary(rng, n);
    let v = haar_unitary(rng, n);
    let mut sigma = CMat::zeros(n, n);
    for i in 0..n {
        let tt = if n == 1 {
            0.0
        } else {
            i as f64 / (n - 1) as f64
        };
        sigma[(i, i)] = C64::new(cond.powf(tt), 0.0);
    }
    u * sigma * v.adjoint()
}

/// Diagonalizable matrix with pairwise eigenvalue separation at least
/// `min_sep`, built as `V D V^{-1}` with a moderately conditioned `V`.
pub fn diagonalizable_with_sep<R: Rng + ?Sized>(rng: &mut R, n: usize, min_sep: f64) -> CMat {
    let eigs = loop {
        let candidate: Vec<C64> = (0..n)
            .map(|_| complex_gaussian(rng) * C64::new(2.0, 0.0))
            .collect();
        let mut ok = true;
        'outer: for i in 0..n {
            for j in (i + 1)..n {
                if (candidate[i] - candidate[j]).norm() < min_sep {
                    ok = false;
                    break 'outer;
                }
            }
        }
        if ok {
            break candidate;
        }
    };
    let v = similarity_with_cond(rng, n, 10.0);
    let mut d = CMat::zeros(n, n);
    for (i, &lambda) in eigs.iter().enumerate() {
        d[(i, i)] = lambda;
    }
    let v_inv = linalg::inverse(&v).expect("controlled condition number");
    v * d * v_inv
}

/// Random Hermitian matrix `(G + G*)/2`.
pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMat {
    let g = gaussian_matrix(rng, n, n);
    (&g + g.adjoint()) * C64::new(0.5, 0.0)
}

/// Isometry with the given column count: the first `cols` columns of a Haar
/// unitary.
pub fn random_isometry<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMat {
    assert!(cols <= rows, "an isometry cannot shrink the codomain");
    haar_unitary(rng, rows)
        .view((0, 0), (rows, cols))
        .into_owned()
}

/// Random polynomial matrix with constant-term-free entries (so small tuples
/// always lie inside the polyhedron), entry degrees between 1 and
/// `max_degree`.
pub fn random_delta<R: Rng + ?Sized>(
    rng: &mut R,
    d: usize,
    rows: usize,
    cols: usize,
    max_degree: usize,
) -> PolyMatrix {
    let entries = (0..rows * cols)
        .map(|_| {
            let terms = rng.random_range(1..=2);
            let pairs = (0..terms)
                .map(|_| {
                    let len = rng.random_range(1..=max_degree);
                    let word =
                        Word::from_letters((0..len).map(|_| rng.random_range(1..=d)).collect());
                    (word, complex_gaussian(rng) * C64::new(0.5, 0.0))
                })
                .collect::<Vec<_>>();
            NcPoly::from_terms(d, pairs).expect("letters within range")
        })
        .collect();
    PolyMatrix::new(rows, cols, entries).expect("consistent variable count")
}

/// Slice a random isometric colligation compatible with `delta` out of a
/// Haar unitary: the orthonormal-completion construction.
pub fn random_realization<R: Rng + ?Sized>(
    rng: &mut R,
    delta: PolyMatrix,
    aux_dim: usize,
) -> Realization {
    let mi = aux_dim * delta.rows();
    let mj = aux_dim * delta.cols();
    assert!(mi <= mj, "isometry needs I <= J");
    let v = random_isometry(rng, 1 + mj, 1 + mi);
    let alpha = v[(0, 0)];
    let b_row = v.view((0, 1), (1, mi)).into_owned();
    let c_col = v.view((1, 0), (mj, 1)).into_owned();
    let d_blk = v.view((1, 1), (mj, mi)).into_owned();
    Realization::new(delta, aux_dim, alpha, b_row, c_col, d_blk)
        .expect("blocks sliced to matching shapes")
}

/// Gaussian tuple rescaled until `‖t delta(x)‖` drops below `target` (< 1).
/// Works because the entries of `delta` have no constant term. Returns `None`
/// if the shrink loop fails to terminate within 200 halvings.
pub fn tuple_in_gdelta<R: Rng + ?Sized>(
    rng: &mut R,
    delta: &PolyMatrix,
    t: f64,
    n: usize,
    target: f64,
) -> Option<MatrixTuple> {
    use crate::evaluator::gdelta_norm;
    assert!(target > 0.0 && target < 1.0);
    let mut x = gaussian_tuple(rng, delta.num_vars(), n);
    for _ in 0..200 {
        let norm = gdelta_norm(delta, &x).ok()? * t;
        if norm < target {
            return Some(x);
        }
        let entries = x
            .matrices()
            .iter()
            .map(|m| m * C64::new(0.5, 0.0))
            .collect();
        x = MatrixTuple::new(entries).expect("shapes preserved");
    }
    None
}

/// Random permutation matrix (useful for exact similarity tests).
pub fn random_permutation_matrix<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMat {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut m = CMat::zeros(n, n);
    for (i, &j) in perm.iter().enumerate() {
        m[(j, i)] = C64::new(1.0, 0.0);
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn haar_unitary_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let u = haar_unitary(&mut rng, 5);
        let defect = (u.adjoint() * &u - CMat::identity(5, 5)).norm();
        assert!(defect < 1e-12);
    }

    #[test]
    fn similarity_hits_the_requested_condition_number() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let s = similarity_with_cond(&mut rng, 4, 100.0);
        let cond = linalg::condition_number(&s);
        assert!((cond - 100.0).abs() < 1e-6 * 100.0);
    }

    #[test]
    fn diagonalizable_sample_separates_eigenvalues() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let x = diagonalizable_with_sep(&mut rng, 4, 0.3);
        let eigs = linalg::eigenvalues(&x);
        for i in 0..eigs.len() {
            for j in (i + 1)..eigs.len() {
                assert!((eigs[i] - eigs[j]).norm() >= 0.25);
            }
        }
    }

    #[test]
    fn random_realization_is_an_isometry() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let delta = random_delta(&mut rng, 2, 2, 2, 2);
        let r = random_realization(&mut rng, delta, 2);
        assert!(r.validate_isometry() < 1e-12);
    }

    #[test]
    fn sampled_tuples_satisfy_scaled_membership() {
        use crate::evaluator::gdelta_contains;
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let delta = random_delta(&mut rng, 2, 1, 1, 2);
        let x = tuple_in_gdelta(&mut rng, &delta, 2.0, 3, 0.9).unwrap();
        assert!(gdelta_contains(&delta, &x, 2.0).unwrap());
    }

    #[test]
    fn sampling_is_reproducible_from_the_seed() {
        let mut a = ChaCha8Rng::seed_from_u64(9);
        let mut b = ChaCha8Rng::seed_from_u64(9);
        assert_eq!(gaussian_tuple(&mut a, 2, 3), gaussian_tuple(&mut b, 2, 3));
    }
}
