//! Synthesis of the select oracles: the Robin and periodic variants, their
//! α = 0 reductions, the d-dimensional global select with attenuation phase,
//! and the outer chain for the source-term quadrature.
//!
//! Every r_j-dependent exponential exp(-i σ r_j G τ) is emitted as an
//! uncontrolled block at angle -σ R̃ τ plus a ladder of blocks at angles
//! σ Δr τ 2^{k-1}, each controlled on inner-ancilla bit k (so block angles
//! add to σ r_j τ on the |j⟩ branch).

use crate::blocks;
use crate::error::{Error, Result};
use crate::fvm::{OperatorParams, UnifiedForm};
use crate::lchs::LchsPlan;
use crate::sim::{controlled, Circuit, Gate};
use std::collections::BTreeMap;

/// Circuit-primitive identities used for the analytic gate audit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum BlockId {
    /// W_j ladder coupling (argument is the ladder position j).
    W(usize),
    /// σ00 corner phase.
    S0,
    /// σ11 corner phase.
    S1,
    /// wrap-around coupling V_n.
    V,
    /// global phase.
    GPhase,
    /// phase gate on an inner ancilla.
    AncPhase,
}

/// Multiset of emitted blocks keyed by (block, number of extra controls).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BlockTally(pub BTreeMap<(BlockId, usize), u64>);

impl BlockTally {
    pub fn add(&mut self, id: BlockId, controls: usize, count: u64) {
        *self.0.entry((id, controls)).or_insert(0) += count;
    }

    pub fn merge(&mut self, other: &BlockTally) {
        for (&k, &v) in &other.0 {
            *self.0.entry(k).or_insert(0) += v;
        }
    }

    /// The tally of the same circuit under one additional control.
    pub fn controlled(&self) -> BlockTally {
        let mut out = BlockTally::default();
        for (&(id, c), &v) in &self.0 {
            out.add(id, c + 1, v);
        }
        out
    }

    pub fn repeated(&self, times: u64) -> BlockTally {
        let mut out = self.clone();
        for v in out.0.values_mut() {
            *v *= times;
        }
        out
    }
}

/// A synthesized select oracle: the executable circuit plus the block
/// multiset it was assembled from.
#[derive(Clone, Debug)]
pub struct SelectOracle {
    pub circuit: Circuit,
    pub blocks: BlockTally,
}

/// Arguments for the select-oracle builders.
pub struct SelectSpec<'a> {
    /// One operator per dimension; dimension 1 occupies the highest system
    /// qubits.
    pub op_params: &'a [OperatorParams],
    pub plan: &'a LchsPlan,
    /// Evolution time per select application.
    pub tau: f64,
    /// Trotter repetitions (the select is emitted as r steps of τ/r).
    pub r_steps: usize,
    /// Attenuation coefficient entering the global phase ladder.
    pub c_global: f64,
}

impl<'a> SelectSpec<'a> {
    pub fn single(params: &'a OperatorParams, plan: &'a LchsPlan, tau: f64, r_steps: usize) -> Self {
        SelectSpec {
            op_params: std::slice::from_ref(params),
            plan,
            tau,
            r_steps,
            c_global: 0.0,
        }
    }
}

/// Register bookkeeping: absolute qubit indices per dimension plus the inner
/// ancillas above the system block.
pub struct Layout {
    pub sys: Vec<Vec<usize>>,
    pub inner: Vec<usize>,
    pub width: usize,
}

impl Layout {
    pub fn new(op_params: &[OperatorParams], ancillas: usize) -> Self {
        // dimension d sits on the lowest qubits, dimension 1 on the highest
        let mut sys = vec![Vec::new(); op_params.len()];
        let mut offset = 0usize;
        for (p, op) in op_params.iter().enumerate().rev() {
            sys[p] = (offset..offset + op.n).collect();
            offset += op.n;
        }
        let inner: Vec<usize> = (offset..offset + ancillas).collect();
        Layout {
            sys,
            inner,
            width: offset + ancillas,
        }
    }
}

struct Emitter<'a> {
    circ: Circuit,
    tally: BlockTally,
    plan: &'a LchsPlan,
    inner: Vec<usize>,
}

impl<'a> Emitter<'a> {
    fn new(width: usize, label: &str, plan: &'a LchsPlan, inner: &[usize]) -> Self {
        Emitter {
            circ: Circuit::new(width, label),
            tally: BlockTally::default(),
            plan,
            inner: inner.to_vec(),
        }
    }

    fn w_fixed(&mut self, sys: &[usize], j: usize, theta: f64, lambda: f64) {
        blocks::emit_wj(&mut self.circ, sys, j, theta, lambda);
        self.tally.add(BlockId::W(j), 0, 1);
    }

    fn block_controlled(&mut self, build: impl Fn(&mut Circuit), anc: usize, id: BlockId) {
        let mut sub = Circuit::new(self.circ.num_qubits, "");
        build(&mut sub);
        let ctl = controlled(&sub, anc).expect("ancilla disjoint from block");
        self.circ.extend(&ctl);
        self.tally.add(id, 1, 1);
    }

    /// Select of exp(-i σ r_j G τ_eff) for a W-type generator.
    fn w_select(&mut self, sys: &[usize], j: usize, sigma: f64, tau_eff: f64, lambda: f64) {
        let base = -sigma * self.plan.r_tilde * tau_eff;
        for (k, &anc) in self.inner.clone().iter().enumerate() {
            let theta = sigma * self.plan.dr * tau_eff * (1u64 << k) as f64;
            let sys = sys.to_vec();
            self.block_controlled(
                move |c| blocks::emit_wj(c, &sys, j, theta, lambda),
                anc,
                BlockId::W(j),
            );
        }
        self.w_fixed(sys, j, base, lambda);
    }

    fn s_select(&mut self, sys: &[usize], which: u8, sigma: f64, tau_eff: f64) {
        let base = -sigma * self.plan.r_tilde * tau_eff;
        let id = if which == 0 { BlockId::S0 } else { BlockId::S1 };
        for (k, &anc) in self.inner.clone().iter().enumerate() {
            let theta = sigma * self.plan.dr * tau_eff * (1u64 << k) as f64;
            let sys = sys.to_vec();
            self.block_controlled(
                move |c| {
                    if which == 0 {
                        blocks::emit_sn0(c, &sys, theta)
                    } else {
                        blocks::emit_sn1(c, &sys, theta)
                    }
                },
                anc,
                id,
            );
        }
        if which == 0 {
            blocks::emit_sn0(&mut self.circ, sys, base);
        } else {
            blocks::emit_sn1(&mut self.circ, sys, base);
        }
        self.tally.add(id, 0, 1);
    }

    fn v_fixed(&mut self, sys: &[usize], theta: f64, lambda: f64) {
        blocks::emit_vn(&mut self.circ, sys, theta, lambda);
        self.tally.add(BlockId::V, 0, 1);
    }

    /// Select of the wrap-around term. The controlled ladder is emitted as
    /// two half-angle passes (the two sides of the symmetric splitting before
    /// the commuting middle is merged); the composed unitary is identical.
    fn v_select(&mut self, sys: &[usize], sigma: f64, tau_eff: f64, lambda: f64) {
        let base = -sigma * self.plan.r_tilde * tau_eff;
        for _pass in 0..2 {
            for (k, &anc) in self.inner.clone().iter().enumerate() {
                let theta = 0.5 * sigma * self.plan.dr * tau_eff * (1u64 << k) as f64;
                let sys = sys.to_vec();
                self.block_controlled(
                    move |c| blocks::emit_vn(c, &sys, theta, lambda),
                    anc,
                    BlockId::V,
                );
            }
        }
        self.v_fixed(sys, base, lambda);
    }

    /// Select of the scalar phase exp(-i σ r_j τ_eff): a global phase plus a
    /// phase ladder on the inner ancillas.
    fn phase_select(&mut self, sigma: f64, tau_eff: f64) {
        for (k, &anc) in self.inner.clone().iter().enumerate() {
            let theta = -sigma * self.plan.dr * tau_eff * (1u64 << k) as f64;
            self.circ.push(Gate::phase(anc, theta));
            self.tally.add(BlockId::AncPhase, 0, 1);
        }
        self.circ.push(Gate::global_phase(sigma * self.plan.r_tilde * tau_eff));
        self.tally.add(BlockId::GPhase, 0, 1);
    }
}

const HALF_PI: f64 = std::f64::consts::FRAC_PI_2;

fn robin_form(op: &OperatorParams) -> Result<(f64, f64, f64, f64)> {
    match op.form {
        UnifiedForm::Robin { alpha, beta, s0, s1 } => Ok((alpha, beta, s0, s1)),
        UnifiedForm::Periodic { .. } => Err(Error::VariantMismatch(
            "periodic operator passed to a Robin select builder",
        )),
    }
}

fn periodic_form(op: &OperatorParams) -> Result<(f64, f64)> {
    match op.form {
        UnifiedForm::Periodic { alpha, beta } => Ok((alpha, beta)),
        UnifiedForm::Robin { .. } => Err(Error::VariantMismatch(
            "Robin operator passed to a periodic select builder",
        )),
    }
}

/// One second-order step of the Robin select (α ≠ 0) on the given registers.
fn robin_step(em: &mut Emitter, sys: &[usize], op: &OperatorParams, tau: f64) -> Result<()> {
    let (alpha, beta, s0, s1) = robin_form(op)?;
    if alpha == 0.0 {
        return Err(Error::VariantMismatch(
            "α = 0 under Robin conditions: use the α = 0 variant",
        ));
    }
    let n = op.n;
    let h_half = |em: &mut Emitter| {
        em.w_fixed(sys, 1, beta * tau / 4.0, HALF_PI);
        for k in 2..=n {
            em.w_fixed(sys, k, beta * tau / 2.0, HALF_PI);
        }
        em.w_fixed(sys, 1, beta * tau / 4.0, HALF_PI);
    };
    h_half(em);
    em.w_select(sys, 1, -alpha, tau / 2.0, 0.0);
    em.s_select(sys, 1, -s1, tau);
    em.s_select(sys, 0, -s0, tau);
    for k in 2..=n {
        em.w_select(sys, k, -alpha, tau, 0.0);
    }
    em.w_select(sys, 1, -alpha, tau / 2.0, 0.0);
    em.phase_select(2.0 * alpha, tau);
    h_half(em);
    Ok(())
}

/// One step of the α = 0 Robin select: pure imaginary-part ladder plus the
/// corner phases.
fn robin_alpha0_step(em: &mut Emitter, sys: &[usize], op: &OperatorParams, tau: f64) -> Result<()> {
    let (alpha, beta, s0, s1) = robin_form(op)?;
    if alpha != 0.0 {
        return Err(Error::VariantMismatch("α ≠ 0: use the general Robin variant"));
    }
    em.w_fixed(sys, 1, beta * tau / 2.0, HALF_PI);
    em.s_select(sys, 1, -s1, tau);
    em.s_select(sys, 0, -s0, tau);
    for k in 2..=op.n {
        em.w_fixed(sys, k, beta * tau, HALF_PI);
    }
    em.w_fixed(sys, 1, beta * tau / 2.0, HALF_PI);
    Ok(())
}

/// One step of the periodic select (α ≠ 0).
fn periodic_step(em: &mut Emitter, sys: &[usize], op: &OperatorParams, tau: f64) -> Result<()> {
    let (alpha, beta) = periodic_form(op)?;
    if alpha == 0.0 {
        return Err(Error::VariantMismatch(
            "α = 0 under periodic conditions: the evolution is already unitary",
        ));
    }
    let n = op.n;
    // exp(-i r_j L τ) applied first (exact factorization U = e^{-iHτ} e^{-ir_jLτ})
    em.w_select(sys, 1, -alpha, tau / 2.0, 0.0);
    em.v_select(sys, -alpha, tau, 0.0);
    for k in 2..=n {
        em.w_select(sys, k, -alpha, tau, 0.0);
    }
    em.w_select(sys, 1, -alpha, tau / 2.0, 0.0);
    em.phase_select(2.0 * alpha, tau);
    // then e^{-iHτ}
    em.w_fixed(sys, 1, beta * tau / 2.0, HALF_PI);
    em.v_fixed(sys, beta * tau, HALF_PI);
    for k in 2..=n {
        em.w_fixed(sys, k, beta * tau, HALF_PI);
    }
    em.w_fixed(sys, 1, beta * tau / 2.0, HALF_PI);
    Ok(())
}

/// One step of the α = 0 periodic circuit (plain unitary evolution, ancillas
/// untouched).
fn periodic_alpha0_step(em: &mut Emitter, sys: &[usize], op: &OperatorParams, tau: f64) -> Result<()> {
    let (alpha, beta) = periodic_form(op)?;
    if alpha != 0.0 {
        return Err(Error::VariantMismatch("α ≠ 0: use the general periodic variant"));
    }
    let n = op.n;
    em.w_fixed(sys, 1, beta * tau / 2.0, HALF_PI);
    em.v_fixed(sys, beta * tau, HALF_PI);
    for k in 2..=n {
        em.w_fixed(sys, k, beta * tau, HALF_PI);
    }
    em.w_fixed(sys, 1, beta * tau / 2.0, HALF_PI);
    Ok(())
}

fn dimension_step(em: &mut Emitter, sys: &[usize], op: &OperatorParams, tau: f64) -> Result<()> {
    match op.form {
        UnifiedForm::Robin { alpha, .. } => {
            if alpha != 0.0 {
                robin_step(em, sys, op, tau)
            } else {
                robin_alpha0_step(em, sys, op, tau)
            }
        }
        UnifiedForm::Periodic { alpha, .. } => {
            if alpha != 0.0 {
                periodic_step(em, sys, op, tau)
            } else {
                periodic_alpha0_step(em, sys, op, tau)
            }
        }
    }
}

fn build_steps(
    spec: &SelectSpec,
    label: &str,
    step: impl Fn(&mut Emitter, &Layout) -> Result<()>,
) -> Result<SelectOracle> {
    assert!(spec.r_steps >= 1, "at least one Trotter step required");
    let layout = Layout::new(spec.op_params, spec.plan.ancillas);
    let mut em = Emitter::new(layout.width, label, spec.plan, &layout.inner);
    for _ in 0..spec.r_steps {
        step(&mut em, &layout)?;
    }
    Ok(SelectOracle {
        circuit: em.circ,
        blocks: em.tally,
    })
}

/// Select oracle under Robin conditions (α ≠ 0), r_steps Trotter steps.
pub fn sel_robin(spec: &SelectSpec) -> Result<SelectOracle> {
    let tau = spec.tau / spec.r_steps as f64;
    build_steps(spec, "SEL_R", |em, layout| {
        robin_step(em, &layout.sys[0], &spec.op_params[0], tau)
    })
}

/// Select oracle under Robin conditions with α = 0.
pub fn sel_robin_alpha0(spec: &SelectSpec) -> Result<SelectOracle> {
    let tau = spec.tau / spec.r_steps as f64;
    build_steps(spec, "SEL_R0", |em, layout| {
        robin_alpha0_step(em, &layout.sys[0], &spec.op_params[0], tau)
    })
}

/// Select oracle under periodic conditions (α ≠ 0).
pub fn sel_periodic(spec: &SelectSpec) -> Result<SelectOracle> {
    let tau = spec.tau / spec.r_steps as f64;
    build_steps(spec, "SEL_P", |em, layout| {
        periodic_step(em, &layout.sys[0], &spec.op_params[0], tau)
    })
}

/// Unitary evolution circuit for α = 0 periodic conditions (no ancillas).
pub fn sel_periodic_alpha0(spec: &SelectSpec) -> Result<SelectOracle> {
    let tau = spec.tau / spec.r_steps as f64;
    build_steps(spec, "SEL_P0", |em, layout| {
        periodic_alpha0_step(em, &layout.sys[0], &spec.op_params[0], tau)
    })
}

/// Global select for a d-dimensional operator: attenuation phase ladder plus
/// the per-dimension selects sharing the inner ancilla register.
pub fn sel_global(spec: &SelectSpec) -> Result<SelectOracle> {
    let tau = spec.tau / spec.r_steps as f64;
    build_steps(spec, "SEL", |em, layout| {
        for (p, op) in spec.op_params.iter().enumerate() {
            dimension_step(em, &layout.sys[p], op, tau)?;
        }
        if spec.c_global != 0.0 {
            em.phase_select(spec.c_global, tau);
        }
        Ok(())
    })
}

/// Outer select chain: SEL(Δt/2) followed by C-SEL(2^{k-1}Δt) controlled on
/// outer ancilla k, realizing Σ_{k,j} |k⟩⟨k| ⊗ |j⟩⟨j| ⊗ U_j(kΔt + Δt/2).
pub fn sel_outer(spec: &SelectSpec, outer_ancillas: usize, total_time: f64) -> Result<SelectOracle> {
    let m_o = 1usize << outer_ancillas;
    let dt = total_time / m_o as f64;
    let layout = Layout::new(spec.op_params, spec.plan.ancillas);
    let make = |time: f64| -> Result<SelectOracle> {
        let sub = SelectSpec {
            op_params: spec.op_params,
            plan: spec.plan,
            tau: time,
            r_steps: spec.r_steps,
            c_global: spec.c_global,
        };
        sel_global(&sub)
    };
    let half = make(dt / 2.0)?;
    let mut circuit = Circuit::new(layout.width + outer_ancillas, "SEL-U");
    circuit.extend(&half.circuit);
    let mut tally = half.blocks;
    for k in 0..outer_ancillas {
        let inner = make((1u64 << k) as f64 * dt)?;
        let ctl = controlled(&inner.circuit, layout.width + k)?;
        circuit.extend(&ctl);
        tally.merge(&inner.blocks.controlled());
    }
    Ok(SelectOracle { circuit, blocks: tally })
}
