//! Prepare-select-unprepare pipeline: state preparation by unitary
//! completion, post-selection on the ancilla-zero branch, and rescaling to
//! physical units. Homogeneous and source-term paths.

use crate::circuits::{sel_global, sel_outer, SelectSpec};
use crate::dense::CMat;
use crate::error::{Error, Result};
use crate::fvm::{self, OperatorParams, PdeProblem};
use crate::lchs::{LchsPlan, OuterPlan};
use crate::sim::{run_circuit, tally, QuantumState, RegisterMap};
use num_complex::Complex64;
use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::Instant;

/// Unitary with a prescribed first column, realized as a phased Householder
/// reflection; applied as a rank-one update, O(dim) per register block.
#[derive(Clone, Debug)]
pub struct PrepUnitary {
    dim: usize,
    phase: Complex64,
    /// None when the target is e_0 up to phase.
    reflector: Option<Vec<Complex64>>,
    norm_sq: f64,
}

impl PrepUnitary {
    pub fn new(target: &[Complex64]) -> Result<Self> {
        let norm = target.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::ZeroVector);
        }
        let dim = target.len();
        assert!(dim.is_power_of_two());
        let unit: Vec<Complex64> = target.iter().map(|z| z / norm).collect();
        let phase = if unit[0].norm() > 1e-300 {
            unit[0] / unit[0].norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        let mut v: Vec<Complex64> = unit.iter().map(|z| z * phase.conj()).collect();
        v[0] -= 1.0;
        let norm_sq: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if norm_sq < 1e-28 {
            Ok(PrepUnitary {
                dim,
                phase,
                reflector: None,
                norm_sq: 0.0,
            })
        } else {
            Ok(PrepUnitary {
                dim,
                phase,
                reflector: Some(v),
                norm_sq,
            })
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// U |0⟩, for tests.
    pub fn column0(&self) -> Vec<Complex64> {
        let mut e0 = vec![Complex64::default(); self.dim];
        e0[0] = Complex64::new(1.0, 0.0);
        self.apply_slice(&mut e0, false);
        e0
    }

    pub fn to_matrix(&self) -> CMat {
        let mut m = CMat::zeros(self.dim, self.dim);
        for col in 0..self.dim {
            let mut e = vec![Complex64::default(); self.dim];
            e[col] = Complex64::new(1.0, 0.0);
            self.apply_slice(&mut e, false);
            for row in 0..self.dim {
                m[(row, col)] = e[row];
            }
        }
        m
    }

    fn apply_slice(&self, x: &mut [Complex64], adjoint: bool) {
        if adjoint {
            for z in x.iter_mut() {
                *z *= self.phase.conj();
            }
        }
        if let Some(v) = &self.reflector {
            let inner: Complex64 = v.iter().zip(x.iter()).map(|(a, b)| a.conj() * b).sum();
            let scale = inner * 2.0 / self.norm_sq;
            for (z, vi) in x.iter_mut().zip(v) {
                *z -= scale * vi;
            }
        }
        if !adjoint {
            for z in x.iter_mut() {
                *z *= self.phase;
            }
        }
    }

    /// Apply to the contiguous qubit range starting at `offset` of `state`;
    /// preparation oracles are not tracked in the gate tallies.
    pub fn apply(&self, state: &mut QuantumState, offset: usize, adjoint: bool) {
        let k = self.dim.trailing_zeros() as usize;
        let total = 1usize << state.num_qubits();
        let stride = 1usize << offset;
        let span = stride << k;
        let mut scratch = vec![Complex64::default(); self.dim];
        let amps = state_amplitudes_mut(state);
        let mut base = 0;
        while base < total {
            for lo in 0..stride {
                let start = base + lo;
                for (s, slot) in scratch.iter_mut().enumerate() {
                    *slot = amps[start + s * stride];
                }
                self.apply_slice(&mut scratch, adjoint);
                for (s, slot) in scratch.iter().enumerate() {
                    amps[start + s * stride] = *slot;
                }
            }
            base += span;
        }
    }
}

// Internal accessor: the solver mutates amplitudes directly for the dense
// preparation oracles.
fn state_amplitudes_mut(state: &mut QuantumState) -> &mut [Complex64] {
    // SAFETY-free const-correct accessor via QuantumState API
    state.amplitudes_mut()
}

/// Relative error norms.
#[derive(Clone, Copy, Debug, Default, serde::Serialize)]
pub struct ErrorNorms {
    pub l1: f64,
    pub l2: f64,
    pub linf: f64,
}

/// ‖u_sim - u_ref‖_p / ‖u_ref‖_p for p ∈ {1, 2, ∞}.
pub fn relative_errors(u_sim: &[Complex64], u_ref: &[f64]) -> Result<ErrorNorms> {
    if u_sim.len() != u_ref.len() {
        return Err(Error::LengthMismatch(u_sim.len(), u_ref.len()));
    }
    let ref_l1: f64 = u_ref.iter().map(|v| v.abs()).sum();
    let ref_l2: f64 = u_ref.iter().map(|v| v * v).sum::<f64>().sqrt();
    let ref_linf: f64 = u_ref.iter().map(|v| v.abs()).fold(0.0, f64::max);
    if ref_l2 == 0.0 {
        return Err(Error::ZeroReference);
    }
    let mut d1 = 0.0;
    let mut d2 = 0.0;
    let mut dinf: f64 = 0.0;
    for (s, r) in u_sim.iter().zip(u_ref) {
        let d = (s - r).norm();
        d1 += d;
        d2 += d * d;
        dinf = dinf.max(d);
    }
    Ok(ErrorNorms {
        l1: d1 / ref_l1,
        l2: d2.sqrt() / ref_l2,
        linf: dinf / ref_linf,
    })
}

/// Outcome of a solve.
#[derive(Clone, Debug)]
pub struct SolveReport {
    pub u_sim: Vec<Complex64>,
    pub p_success: f64,
    pub errors: ErrorNorms,
    pub gate_tally: BTreeMap<String, u64>,
    pub wall_seconds: f64,
    /// global phase removed before the error computation (should be ≈ 0)
    pub phase_rotation: f64,
}

fn rotate_phase(u_sim: &mut [Complex64], u_ref: &[f64]) -> f64 {
    let inner: Complex64 = u_sim
        .iter()
        .zip(u_ref)
        .map(|(s, r)| s * Complex64::new(*r, 0.0))
        .sum();
    if inner.norm() < 1e-300 {
        return 0.0;
    }
    let phi = inner.arg();
    let w = Complex64::new(0.0, -phi).exp();
    for z in u_sim.iter_mut() {
        *z *= w;
    }
    phi
}

fn coefficient_prep(plan: &LchsPlan) -> Result<(PrepUnitary, PrepUnitary)> {
    let mut right = Vec::with_capacity(plan.node_count());
    let mut left = Vec::with_capacity(plan.node_count());
    let scale = plan.c_l1.sqrt();
    for c in &plan.coeffs {
        let sq = c.sqrt();
        right.push(sq / scale);
        left.push(sq.conj() / scale);
    }
    Ok((PrepUnitary::new(&right)?, PrepUnitary::new(&left)?))
}

/// Total grid source at time t: external samples plus the boundary terms.
pub fn grid_source<'a>(
    problem: &'a PdeProblem,
    params: &[OperatorParams],
) -> impl Fn(f64) -> Vec<f64> + 'a {
    let boundary = fvm::global_boundary_source(problem, params);
    move |t: f64| {
        let mut f = problem.sample_source(t);
        for (fi, bi) in f.iter_mut().zip(&boundary) {
            *fi += bi;
        }
        f
    }
}

/// Homogeneous path: prepare, select, unprepare, post-select, rescale.
pub fn solve_homogeneous(
    problem: &PdeProblem,
    plan: &LchsPlan,
    r_steps: usize,
    total_time: f64,
    reference: &[f64],
) -> Result<SolveReport> {
    let start = Instant::now();
    let params: Vec<OperatorParams> = (0..problem.dim)
        .map(|p| fvm::assemble_1d(problem, p))
        .collect::<Result<_>>()?;
    let sys_qubits: usize = problem.qubits.iter().sum();
    let m = plan.ancillas;
    if sys_qubits + m > fvm::QUBIT_GUARD {
        return Err(Error::SizeGuard {
            qubits: sys_qubits + m,
            limit: fvm::QUBIT_GUARD,
        });
    }
    let map = RegisterMap::layered(sys_qubits, m, 0);
    let mut state = QuantumState::zero_layered(map);
    let u0 = problem.sample_u0();
    let u0_norm = u0.iter().map(|v| v * v).sum::<f64>().sqrt();
    let u0c: Vec<Complex64> = u0.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    state.load_system(&u0c)?;

    let (coef_r, coef_l) = coefficient_prep(plan)?;
    if m > 0 {
        coef_r.apply(&mut state, sys_qubits, false);
    }

    let spec = SelectSpec {
        op_params: &params,
        plan,
        tau: total_time,
        r_steps,
        c_global: problem.attenuation,
    };
    let oracle = sel_global(&spec)?;
    run_circuit(&mut state, &oracle.circuit)?;

    if m > 0 {
        coef_l.apply(&mut state, sys_qubits, true);
    }

    let (branch, p_success) = state.project_ancilla_zero();
    if p_success < 1e-12 {
        return Err(Error::DegeneratePostSelection(p_success));
    }
    let scale = plan.c_l1 * u0_norm;
    let mut u_sim: Vec<Complex64> = branch.iter().map(|z| z * scale).collect();
    let phase_rotation = rotate_phase(&mut u_sim, reference);
    let errors = relative_errors(&u_sim, reference)?;
    Ok(SolveReport {
        u_sim,
        p_success,
        errors,
        gate_tally: tally(&oracle.circuit),
        wall_seconds: start.elapsed().as_secs_f64(),
        phase_rotation,
    })
}

/// Source-term path: outer and inner coefficient preparation, selected state
/// preparation of the source snapshots, the outer select chain, adjoint
/// preparations, post-selection on every ancilla.
pub fn solve_inhomogeneous(
    problem: &PdeProblem,
    plan: &LchsPlan,
    outer: &OuterPlan,
    r_steps: usize,
    total_time: f64,
    reference: &[f64],
) -> Result<SolveReport> {
    let start = Instant::now();
    let params: Vec<OperatorParams> = (0..problem.dim)
        .map(|p| fvm::assemble_1d(problem, p))
        .collect::<Result<_>>()?;
    let sys_qubits: usize = problem.qubits.iter().sum();
    let m = plan.ancillas;
    let m_o = outer.ancillas;
    if sys_qubits + m + m_o > fvm::QUBIT_GUARD {
        return Err(Error::SizeGuard {
            qubits: sys_qubits + m + m_o,
            limit: fvm::QUBIT_GUARD,
        });
    }
    let map = RegisterMap::layered(sys_qubits, m, m_o);
    let mut state = QuantumState::zero_layered(map);

    // outer coefficient preparation: √d_k / √‖d‖₁
    let d_scale = outer.d_l1.sqrt();
    let outer_target: Vec<Complex64> = outer
        .weights
        .iter()
        .map(|&d| Complex64::new(d.sqrt() / d_scale, 0.0))
        .collect();
    let outer_prep = PrepUnitary::new(&outer_target)?;
    outer_prep.apply(&mut state, sys_qubits + m, false);

    let (coef_r, coef_l) = coefficient_prep(plan)?;
    if m > 0 {
        coef_r.apply(&mut state, sys_qubits, false);
    }

    // SEL-O_prep: load v_k on the system conditioned on the outer value k
    let preps: Vec<PrepUnitary> = outer
        .states
        .iter()
        .map(|v| {
            let vc: Vec<Complex64> = v.iter().map(|&x| Complex64::new(x, 0.0)).collect();
            PrepUnitary::new(&vc)
        })
        .collect::<Result<_>>()?;
    apply_selected_preps(&mut state, &preps, sys_qubits + m, m_o);

    let spec = SelectSpec {
        op_params: &params,
        plan,
        tau: total_time,
        r_steps,
        c_global: problem.attenuation,
    };
    let oracle = sel_outer(&spec, m_o, total_time)?;
    run_circuit(&mut state, &oracle.circuit)?;

    if m > 0 {
        coef_l.apply(&mut state, sys_qubits, true);
    }
    outer_prep.apply(&mut state, sys_qubits + m, true);

    let (branch, p_success) = state.project_ancilla_zero();
    if p_success < 1e-12 {
        return Err(Error::DegeneratePostSelection(p_success));
    }
    let scale = outer.d_l1 * plan.c_l1;
    let mut u_sim: Vec<Complex64> = branch.iter().map(|z| z * scale).collect();
    let phase_rotation = rotate_phase(&mut u_sim, reference);
    let errors = relative_errors(&u_sim, reference)?;
    Ok(SolveReport {
        u_sim,
        p_success,
        errors,
        gate_tally: tally(&oracle.circuit),
        wall_seconds: start.elapsed().as_secs_f64(),
        phase_rotation,
    })
}

fn apply_selected_preps(
    state: &mut QuantumState,
    preps: &[PrepUnitary],
    outer_offset: usize,
    outer_len: usize,
) {
    if outer_len == 0 {
        preps[0].apply(state, 0, false);
        return;
    }
    let sys_dim = preps[0].dim();
    let total = 1usize << state.num_qubits();
    let amps = state_amplitudes_mut(state);
    let mut scratch = vec![Complex64::default(); sys_dim];
    let mut base = 0usize;
    while base < total {
        let outer_value = base >> outer_offset;
        let prep = &preps[outer_value];
        // the system register is the lowest qubits: every contiguous chunk
        // of sys_dim amplitudes inside [base, base + 2^{outer_offset})
        let chunk_end = base + (1usize << outer_offset);
        let mut start = base;
        while start < chunk_end {
            scratch.copy_from_slice(&amps[start..start + sys_dim]);
            prep.apply_slice(&mut scratch, false);
            amps[start..start + sys_dim].copy_from_slice(&scratch);
            start += sys_dim;
        }
        base = chunk_end;
    }
}

/// Transform a problem with u(0) ≠ 0 into one with zero initial state and
/// source f - A u0; the caller adds u0 back to the solved vector.
pub fn shift_source(problem: &PdeProblem) -> Result<(PdeProblem, Vec<f64>)> {
    let params: Vec<OperatorParams> = (0..problem.dim)
        .map(|p| fvm::assemble_1d(problem, p))
        .collect::<Result<_>>()?;
    let u0 = problem.sample_u0();
    // A u0 via per-dimension dense application plus the attenuation shift
    let total = problem.total_cells();
    let mut au0 = vec![0.0; total];
    for (v, &u) in au0.iter_mut().zip(&u0) {
        *v += problem.attenuation * u;
    }
    for (p, op) in params.iter().enumerate() {
        let np = op.cells();
        let below: usize = problem.qubits[p + 1..].iter().map(|q| 1usize << q).product();
        let above = total / (np * below);
        for hi in 0..above {
            for lo in 0..below {
                for r in 0..np {
                    let mut acc = 0.0;
                    for c in 0..np {
                        let a = op.dense_a[(r, c)];
                        if a != 0.0 {
                            acc += a * u0[(hi * np + c) * below + lo];
                        }
                    }
                    au0[(hi * np + r) * below + lo] += acc;
                }
            }
        }
    }
    let orig_source = problem.source.clone();
    let qubits = problem.qubits.clone();
    let lengths = problem.lengths.clone();
    let shift = au0.clone();
    let lookup = move |x: &[f64]| -> usize {
        let mut idx = 0usize;
        for (p, &xp) in x.iter().enumerate() {
            let n = 1usize << qubits[p];
            let h = lengths[p] / n as f64;
            let i = ((xp / h - 0.5).round() as isize).clamp(0, n as isize - 1) as usize;
            idx = idx * n + i;
        }
        idx
    };
    let shifted: crate::fvm::SourceFn = Arc::new(move |t: f64, x: &[f64]| {
        let external = orig_source.as_ref().map_or(0.0, |f| f(t, x));
        external - shift[lookup(x)]
    });
    let mut transformed = problem.clone();
    transformed.u0 = Arc::new(|_| 0.0);
    transformed.source = Some(shifted);
    Ok((transformed, u0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn prep_identity_for_e0() {
        let p = PrepUnitary::new(&[c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        let col = p.column0();
        assert!((col[0] - c(1.0, 0.0)).norm() < 1e-15);
        assert!(col[1].norm() < 1e-15);
    }

    #[test]
    fn prep_hadamard_like_column() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let p = PrepUnitary::new(&[c(1.0, 0.0), c(1.0, 0.0)]).unwrap();
        let col = p.column0();
        assert!((col[0] - c(s, 0.0)).norm() < 1e-14);
        assert!((col[1] - c(s, 0.0)).norm() < 1e-14);
        // unitarity
        let m = p.to_matrix();
        let dev = crate::dense::max_abs(&(&m * m.adjoint() - crate::dense::identity(2)));
        assert!(dev < 1e-13);
    }

    #[test]
    fn prep_complex_target_and_adjoint_roundtrip() {
        let target = vec![c(0.3, 0.4), c(-0.5, 0.1), c(0.0, 0.6), c(0.2, -0.2)];
        let p = PrepUnitary::new(&target).unwrap();
        let norm = target.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let col = p.column0();
        for (got, want) in col.iter().zip(&target) {
            assert!((got - want / norm).norm() < 1e-14);
        }
        // U† U = I through apply_slice
        let mut x = col.clone();
        p.apply_slice(&mut x, true);
        assert!((x[0] - c(1.0, 0.0)).norm() < 1e-13);
        for z in &x[1..] {
            assert!(z.norm() < 1e-13);
        }
    }

    #[test]
    fn prep_rejects_zero() {
        assert!(matches!(
            PrepUnitary::new(&[c(0.0, 0.0); 4]),
            Err(Error::ZeroVector)
        ));
    }

    #[test]
    fn relative_error_trivials() {
        let u = vec![c(1.0, 0.0), c(2.0, 0.0)];
        let r = vec![1.0, 2.0];
        let e = relative_errors(&u, &r).unwrap();
        assert_eq!(e.l1, 0.0);
        assert_eq!(e.l2, 0.0);
        assert_eq!(e.linf, 0.0);
        let u2 = vec![c(2.0, 0.0), c(4.0, 0.0)];
        let e = relative_errors(&u2, &r).unwrap();
        assert!((e.l1 - 1.0).abs() < 1e-15);
        assert!((e.l2 - 1.0).abs() < 1e-15);
        assert!((e.linf - 1.0).abs() < 1e-15);
        assert!(matches!(
            relative_errors(&u, &[0.0, 0.0]),
            Err(Error::ZeroReference)
        ));
    }
}
