//! Builders for the explicit circuit primitives: the bit-ladder coupling
//! evolution W_j, the corner-projector phases S_n^{(0)}/S_n^{(1)}, the
//! wrap-around coupling V_n, and the generic power-select construction.
//!
//! `sys` maps ladder positions to absolute qubit indices: `sys[0]` is
//! position 1 (the least-significant bit of the encoded cell index).

use crate::error::{Error, Result};
use crate::sim::{controlled, Circuit, Gate};

fn check_j(j: usize, n: usize) -> Result<()> {
    if j < 1 || j > n {
        return Err(Error::LadderIndex { j, n });
    }
    Ok(())
}

/// Q_j(λ) = (∏_{m=1}^{j-1} CNOT_m^j) P_j(λ) H_j, emitted in application
/// order (H first). CNOT_m^j targets position m, controlled by position j.
pub fn emit_qj(circ: &mut Circuit, sys: &[usize], j: usize, lambda: f64) {
    let t = sys[j - 1];
    circ.push(Gate::hadamard(t));
    circ.push(Gate::phase(t, lambda));
    for m in 1..j {
        circ.push(Gate::cnot(t, sys[m - 1]).expect("distinct qubits"));
    }
}

/// Q_j(λ)† in application order (CNOTs first).
pub fn emit_qj_dagger(circ: &mut Circuit, sys: &[usize], j: usize, lambda: f64) {
    let t = sys[j - 1];
    for m in 1..j {
        circ.push(Gate::cnot(t, sys[m - 1]).expect("distinct qubits"));
    }
    circ.push(Gate::phase(t, -lambda));
    circ.push(Gate::hadamard(t));
}

/// W_j(θ, λ) = Q_j(-λ) CRZ_j^{[1,j-1]}(2θ) Q_j(-λ)†, implementing
/// exp(-iθ (e^{iλ} s_j^- + e^{-iλ} s_j^+)).
pub fn emit_wj(circ: &mut Circuit, sys: &[usize], j: usize, theta: f64, lambda: f64) {
    let t = sys[j - 1];
    emit_qj_dagger(circ, sys, j, -lambda);
    let controls: Vec<usize> = sys[..j - 1].to_vec();
    circ.push(Gate::multi_controlled_rz(controls, t, 2.0 * theta).expect("distinct qubits"));
    emit_qj(circ, sys, j, -lambda);
}

/// S_n^{(1)}(θ) = CP_n^{[1,n-1]}(-θ), implementing exp(-iθ σ11^{⊗n}).
pub fn emit_sn1(circ: &mut Circuit, sys: &[usize], theta: f64) {
    let n = sys.len();
    let controls: Vec<usize> = sys[..n - 1].to_vec();
    circ.push(Gate::multi_controlled_phase(controls, sys[n - 1], -theta).expect("distinct"));
}

/// S_n^{(0)}(θ) = X^{⊗n} S_n^{(1)}(θ) X^{⊗n}, implementing exp(-iθ σ00^{⊗n}).
pub fn emit_sn0(circ: &mut Circuit, sys: &[usize], theta: f64) {
    for &q in sys {
        circ.push(Gate::pauli_x(q));
    }
    emit_sn1(circ, sys, theta);
    for &q in sys {
        circ.push(Gate::pauli_x(q));
    }
}

/// V_n(θ, λ) = Q_n(λ) (I ⊗ X^{⊗(n-1)}) CRZ_n^{[1,n-1]}(2θ) (I ⊗ X^{⊗(n-1)}) Q_n(λ)†,
/// implementing exp(-iθ (e^{iλ} σ10^{⊗n} + e^{-iλ} σ01^{⊗n})). Requires n ≥ 2.
pub fn emit_vn(circ: &mut Circuit, sys: &[usize], theta: f64, lambda: f64) {
    let n = sys.len();
    emit_qj_dagger(circ, sys, n, lambda);
    for &q in &sys[..n - 1] {
        circ.push(Gate::pauli_x(q));
    }
    let controls: Vec<usize> = sys[..n - 1].to_vec();
    circ.push(Gate::multi_controlled_rz(controls, sys[n - 1], 2.0 * theta).expect("distinct"));
    for &q in &sys[..n - 1] {
        circ.push(Gate::pauli_x(q));
    }
    emit_qj(circ, sys, n, lambda);
}

fn plain_sys(n: usize) -> Vec<usize> {
    (0..n).collect()
}

/// Q_j(λ) over a plain n-qubit register.
pub fn build_qj(n: usize, j: usize, lambda: f64) -> Result<Circuit> {
    check_j(j, n)?;
    let mut c = Circuit::new(n, format!("Q_{j}"));
    emit_qj(&mut c, &plain_sys(n), j, lambda);
    Ok(c)
}

pub fn build_wj(n: usize, j: usize, theta: f64, lambda: f64) -> Result<Circuit> {
    check_j(j, n)?;
    let mut c = Circuit::new(n, format!("W_{j}"));
    emit_wj(&mut c, &plain_sys(n), j, theta, lambda);
    Ok(c)
}

pub fn build_sn1(n: usize, theta: f64) -> Result<Circuit> {
    check_j(1, n)?;
    let mut c = Circuit::new(n, "S1");
    emit_sn1(&mut c, &plain_sys(n), theta);
    Ok(c)
}

pub fn build_sn0(n: usize, theta: f64) -> Result<Circuit> {
    check_j(1, n)?;
    let mut c = Circuit::new(n, "S0");
    emit_sn0(&mut c, &plain_sys(n), theta);
    Ok(c)
}

pub fn build_vn(n: usize, theta: f64, lambda: f64) -> Result<Circuit> {
    if n < 2 {
        return Err(Error::LadderIndex { j: n, n: 2 });
    }
    let mut c = Circuit::new(n, "V");
    emit_vn(&mut c, &plain_sys(n), theta, lambda);
    Ok(c)
}

/// Σ_j |j⟩⟨j| ⊗ U^j over the ancilla register, built by repetition:
/// ancilla bit k controls 2^k copies of `base`. The base must not touch the
/// ancillas.
pub fn power_select(base: &Circuit, ancillas: &[usize]) -> Result<Circuit> {
    let width = base
        .num_qubits
        .max(ancillas.iter().copied().max().map_or(0, |q| q + 1));
    let mut out = Circuit::new(width, format!("powsel({})", base.label));
    for (k, &anc) in ancillas.iter().enumerate() {
        let ctl = controlled(base, anc)?;
        for _ in 0..(1usize << k) {
            out.extend(&ctl);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dense::{self, max_abs, CMat};
    use crate::sim::{circuit_unitary, GateKind};

    #[test]
    fn q1_is_phase_after_hadamard() {
        let c = build_qj(1, 1, 0.9).unwrap();
        assert_eq!(c.gates.len(), 2);
        assert!(matches!(c.gates[0].kind, GateKind::Hadamard { target: 0 }));
        assert!(matches!(c.gates[1].kind, GateKind::Phase { target: 0, .. }));
    }

    #[test]
    fn qj_unitary_for_all_j() {
        for j in 1..=3 {
            let c = build_qj(3, j, std::f64::consts::FRAC_PI_4).unwrap();
            let u = circuit_unitary(&c).unwrap();
            let dev = max_abs(&(&u * u.adjoint() - dense::identity(8)));
            assert!(dev < 1e-12, "j={j} dev={dev}");
        }
    }

    #[test]
    fn w_zero_angle_is_identity() {
        for (n, j) in [(1, 1), (3, 2), (4, 4)] {
            let c = build_wj(n, j, 0.0, 0.3).unwrap();
            let u = circuit_unitary(&c).unwrap();
            assert!(max_abs(&(u - dense::identity(1 << n))) < 1e-12);
        }
    }

    #[test]
    fn w_single_qubit_closed_form() {
        // n=1, θ=0.3, λ=π/2: exp(-0.3 i (iσ01 - iσ10)) = rotation matrix
        let theta = 0.3;
        let c = build_wj(1, 1, theta, std::f64::consts::FRAC_PI_2).unwrap();
        let u = circuit_unitary(&c).unwrap();
        // exp(-iθ (iσ01 - iσ10)) = exp(θ(σ01 - σ10)) = [[cosθ, sinθ],[-sinθ, cosθ]]
        let want = CMat::from_row_slice(
            2,
            2,
            &[
                dense::cx(theta.cos(), 0.0),
                dense::cx(theta.sin(), 0.0),
                dense::cx(-theta.sin(), 0.0),
                dense::cx(theta.cos(), 0.0),
            ],
        );
        assert!(max_abs(&(u - want)) < 1e-12);
    }

    #[test]
    fn s_blocks_closed_form_n2_pi() {
        let u1 = circuit_unitary(&build_sn1(2, std::f64::consts::PI).unwrap()).unwrap();
        let u0 = circuit_unitary(&build_sn0(2, std::f64::consts::PI).unwrap()).unwrap();
        for i in 0..4 {
            let w1 = if i == 3 { -1.0 } else { 1.0 };
            let w0 = if i == 0 { -1.0 } else { 1.0 };
            assert!((u1[(i, i)].re - w1).abs() < 1e-12);
            assert!((u0[(i, i)].re - w0).abs() < 1e-12);
        }
    }

    #[test]
    fn ladder_index_checked() {
        assert!(build_wj(3, 0, 0.1, 0.0).is_err());
        assert!(build_wj(3, 4, 0.1, 0.0).is_err());
        assert!(build_vn(1, 0.1, 0.0).is_err());
    }

    #[test]
    fn power_select_trivial_cases() {
        // no ancillas -> identity
        let base = build_wj(2, 1, 0.37, 0.0).unwrap();
        let sel = power_select(&base, &[]).unwrap();
        assert!(sel.gates.is_empty());
        // one ancilla, U = P(θ): controlled phase
        let mut p = Circuit::new(1, "p");
        p.push(Gate::phase(0, 0.81));
        let sel = power_select(&p, &[1]).unwrap();
        let u = circuit_unitary(&sel).unwrap();
        for i in 0..4usize {
            let want = if i == 3 {
                dense::phase(0.81)
            } else {
                dense::ONE
            };
            assert!((u[(i, i)] - want).norm() < 1e-13);
        }
    }
}
