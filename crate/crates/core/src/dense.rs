//! Dense operator construction and linear algebra used by the verification
//! suites and the classical oracles.
//!
//! Convention: qubit 0 is the least-significant bit of the basis index, so a
//! tensor expression written `A ⊗ B` (A on the leftmost factor) places `A`
//! on the highest qubits: `kron(a, b)[i_a * dim_b + i_b]`.

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type CMat = DMatrix<Complex64>;
pub type CVec = nalgebra::DVector<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);

pub fn cx(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// e^{iθ}
pub fn phase(theta: f64) -> Complex64 {
    Complex64::new(theta.cos(), theta.sin())
}

pub fn identity(dim: usize) -> CMat {
    CMat::identity(dim, dim)
}

/// |0⟩⟨1| as a 2x2 block.
pub fn sigma01() -> CMat {
    CMat::from_row_slice(2, 2, &[ZERO, ONE, ZERO, ZERO])
}

/// |1⟩⟨0|
pub fn sigma10() -> CMat {
    CMat::from_row_slice(2, 2, &[ZERO, ZERO, ONE, ZERO])
}

/// |0⟩⟨0|
pub fn sigma00() -> CMat {
    CMat::from_row_slice(2, 2, &[ONE, ZERO, ZERO, ZERO])
}

/// |1⟩⟨1|
pub fn sigma11() -> CMat {
    CMat::from_row_slice(2, 2, &[ZERO, ZERO, ZERO, ONE])
}

pub fn pauli_x() -> CMat {
    CMat::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO])
}

pub fn pauli_z() -> CMat {
    CMat::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE])
}

/// Kronecker product with the left factor on the high qubits.
pub fn kron(a: &CMat, b: &CMat) -> CMat {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    let mut out = CMat::zeros(ar * br, ac * bc);
    for i in 0..ar {
        for j in 0..ac {
            let aij = a[(i, j)];
            if aij == ZERO {
                continue;
            }
            for k in 0..br {
                for l in 0..bc {
                    out[(i * br + k, j * bc + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    out
}

/// Kronecker product of a list of factors, leftmost factor on the highest
/// qubits.
pub fn kron_all(factors: &[CMat]) -> CMat {
    let mut out = identity(1);
    for f in factors {
        out = kron(&out, f);
    }
    out
}

/// n-fold tensor power.
pub fn kron_pow(a: &CMat, n: usize) -> CMat {
    let mut out = identity(1);
    for _ in 0..n {
        out = kron(&out, a);
    }
    out
}

/// Ladder term s_j^- = I^{⊗(n-j)} ⊗ σ01 ⊗ σ10^{⊗(j-1)}, 1 ≤ j ≤ n.
pub fn s_minus_term(n: usize, j: usize) -> CMat {
    assert!(1 <= j && j <= n);
    kron_all(&[identity(1 << (n - j)), sigma01(), kron_pow(&sigma10(), j - 1)])
}

/// Ladder term s_j^+ = I^{⊗(n-j)} ⊗ σ10 ⊗ σ01^{⊗(j-1)}.
pub fn s_plus_term(n: usize, j: usize) -> CMat {
    assert!(1 <= j && j <= n);
    kron_all(&[identity(1 << (n - j)), sigma10(), kron_pow(&sigma01(), j - 1)])
}

/// Superdiagonal shift S^- = Σ_j s_j^-.
pub fn shift_minus(n: usize) -> CMat {
    let mut m = CMat::zeros(1 << n, 1 << n);
    for j in 1..=n {
        m += s_minus_term(n, j);
    }
    m
}

/// Subdiagonal shift S^+ = Σ_j s_j^+.
pub fn shift_plus(n: usize) -> CMat {
    let mut m = CMat::zeros(1 << n, 1 << n);
    for j in 1..=n {
        m += s_plus_term(n, j);
    }
    m
}

/// Hopping component on the lowest bit: e^{iλ} s_1^- + e^{-iλ} s_1^+.
pub fn h1(n: usize, lambda: f64) -> CMat {
    s_minus_term(n, 1) * phase(lambda) + s_plus_term(n, 1) * phase(-lambda)
}

/// Hopping components on the carry chain: Σ_{j=2}^n e^{iλ} s_j^- + e^{-iλ} s_j^+.
pub fn h2(n: usize, lambda: f64) -> CMat {
    let mut m = CMat::zeros(1 << n, 1 << n);
    for j in 2..=n {
        m += s_minus_term(n, j) * phase(lambda) + s_plus_term(n, j) * phase(-lambda);
    }
    m
}

/// Wrap-around component: e^{iλ} σ10^{⊗n} + e^{-iλ} σ01^{⊗n}.
pub fn h3(n: usize, lambda: f64) -> CMat {
    kron_pow(&sigma10(), n) * phase(lambda) + kron_pow(&sigma01(), n) * phase(-lambda)
}

/// Corner projector σ00^{⊗n} (resp. σ11^{⊗n}).
pub fn corner00(n: usize) -> CMat {
    kron_pow(&sigma00(), n)
}

pub fn corner11(n: usize) -> CMat {
    kron_pow(&sigma11(), n)
}

pub fn commutator(a: &CMat, b: &CMat) -> CMat {
    a * b - b * a
}

pub fn adjoint(a: &CMat) -> CMat {
    a.adjoint()
}

/// Largest entrywise modulus.
pub fn max_abs(a: &CMat) -> f64 {
    a.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Spectral norm via the largest eigenvalue of Aᴴ A.
pub fn spectral_norm(a: &CMat) -> f64 {
    let gram = a.adjoint() * a;
    let eig = gram.symmetric_eigen();
    eig.eigenvalues
        .iter()
        .cloned()
        .fold(0.0_f64, f64::max)
        .max(0.0)
        .sqrt()
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(a: &CMat) -> Vec<f64> {
    let eig = a.clone().symmetric_eigen();
    let mut ev: Vec<f64> = eig.eigenvalues.iter().cloned().collect();
    ev.sort_by(|x, y| x.partial_cmp(y).unwrap());
    ev
}

/// exp(-i θ M) for Hermitian M, via eigendecomposition.
pub fn exp_i_hermitian(m: &CMat, theta: f64) -> CMat {
    let eig = m.clone().symmetric_eigen();
    let q = &eig.eigenvectors;
    let dim = m.nrows();
    let mut d = CMat::zeros(dim, dim);
    for k in 0..dim {
        d[(k, k)] = phase(-theta * eig.eigenvalues[k]);
    }
    q * d * q.adjoint()
}

/// exp(M) for a general complex matrix by scaling and squaring with a
/// degree-13 Padé approximant (Higham's coefficients).
pub fn expm(m: &CMat) -> CMat {
    let dim = m.nrows();
    let one_norm = (0..dim)
        .map(|j| (0..dim).map(|i| m[(i, j)].norm()).sum::<f64>())
        .fold(0.0, f64::max);
    const THETA13: f64 = 5.371_920_351_148_152;
    let squarings = if one_norm > THETA13 {
        (one_norm / THETA13).log2().ceil().max(0.0) as u32
    } else {
        0
    };
    let a = m / cx(2f64.powi(squarings as i32), 0.0);
    const B: [f64; 14] = [
        64764752532480000.0,
        32382376266240000.0,
        7771770303897600.0,
        1187353796428800.0,
        129060195264000.0,
        10559470521600.0,
        670442572800.0,
        33522128640.0,
        1323241920.0,
        40840800.0,
        960960.0,
        16380.0,
        182.0,
        1.0,
    ];
    let id = identity(dim);
    let a2 = &a * &a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let u_inner = &a6 * (&a6 * cx(B[13], 0.0) + &a4 * cx(B[11], 0.0) + &a2 * cx(B[9], 0.0))
        + &a6 * cx(B[7], 0.0)
        + &a4 * cx(B[5], 0.0)
        + &a2 * cx(B[3], 0.0)
        + &id * cx(B[1], 0.0);
    let u = &a * u_inner;
    let v = &a6 * (&a6 * cx(B[12], 0.0) + &a4 * cx(B[10], 0.0) + &a2 * cx(B[8], 0.0))
        + &a6 * cx(B[6], 0.0)
        + &a4 * cx(B[4], 0.0)
        + &a2 * cx(B[2], 0.0)
        + &id * cx(B[0], 0.0);
    let denom = &v - &u;
    let numer = &v + &u;
    let mut r = denom
        .lu()
        .solve(&numer)
        .expect("Pade denominator is singular");
    for _ in 0..squarings {
        r = &r * &r;
    }
    r
}

/// exp(M) by scaled Taylor summation; an independent route used to
/// cross-check `expm`.
pub fn expm_taylor(m: &CMat) -> CMat {
    let dim = m.nrows();
    let norm = max_abs(m) * dim as f64;
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let a = m / cx(2f64.powi(squarings as i32), 0.0);
    let mut term = identity(dim);
    let mut sum = identity(dim);
    for k in 1..=30 {
        term = &term * &a / cx(k as f64, 0.0);
        sum += &term;
        if max_abs(&term) < 1e-18 {
            break;
        }
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

/// Dense real matrix helpers reused by the FVM oracle path.
pub fn to_complex(a: &DMatrix<f64>) -> CMat {
    CMat::from_fn(a.nrows(), a.ncols(), |i, j| cx(a[(i, j)], 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shift_operators_have_expected_pattern() {
        let n = 3;
        let sm = shift_minus(n);
        for i in 0..8usize {
            for j in 0..8usize {
                let want = if j == i + 1 { 1.0 } else { 0.0 };
                assert!((sm[(i, j)].re - want).abs() < 1e-15, "S^-[{},{}]", i, j);
            }
        }
        let sp = shift_plus(n);
        assert!((&sm.adjoint() - &sp).iter().all(|z| z.norm() < 1e-15));
    }

    #[test]
    fn h_components_sum_to_shifts() {
        let n = 4;
        let total = h1(n, 0.0) + h2(n, 0.0);
        let want = shift_minus(n) + shift_plus(n);
        assert!(max_abs(&(total - want)) < 1e-14);
    }

    #[test]
    fn corner_projectors() {
        let c0 = corner00(3);
        let c1 = corner11(3);
        assert!((c0[(0, 0)].re - 1.0).abs() < 1e-15);
        assert!((c1[(7, 7)].re - 1.0).abs() < 1e-15);
        assert!(c0.iter().map(|z| z.norm()).sum::<f64>() - 1.0 < 1e-14);
        assert!(c1.iter().map(|z| z.norm()).sum::<f64>() - 1.0 < 1e-14);
    }

    #[test]
    fn expm_routes_agree() {
        // fixed pseudo-random matrix
        let dim = 6;
        let mut seed = 0x2545F4914F6CDD1Du64;
        let mut next = || {
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            (seed >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        let a = CMat::from_fn(dim, dim, |_, _| cx(next(), next()));
        let e1 = expm(&a);
        let e2 = expm_taylor(&a);
        assert!(max_abs(&(e1 - e2)) < 1e-11);
    }

    #[test]
    fn exp_i_hermitian_matches_expm() {
        let n = 2;
        let m = h1(n, 0.7) + h2(n, 0.7);
        let theta = 0.43;
        let e1 = exp_i_hermitian(&m, theta);
        let e2 = expm(&(&m * cx(0.0, -theta)));
        assert!(max_abs(&(e1 - e2)) < 1e-12);
    }

    #[test]
    fn spectral_norm_of_unitary_is_one() {
        let u = exp_i_hermitian(&h1(3, 0.3), 1.234);
        assert!((spectral_norm(&u) - 1.0).abs() < 1e-10);
    }
}
