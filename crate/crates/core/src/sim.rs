//! Exact dense state-vector simulation.
//!
//! Qubit 0 is the least-significant bit of the basis index. A tensor factor
//! written leftmost in operator notation therefore lives on the highest
//! qubit index. Registers are layered as
//! `outer LCU ancillas | inner LCHS ancillas | system qubits`, with the
//! system occupying the lowest indices.

use crate::dense::CMat;
use crate::error::{Error, Result};
use num_complex::Complex64;
use std::ops::Range;

pub type Mat2 = [[Complex64; 2]; 2];

fn cis(theta: f64) -> Complex64 {
    Complex64::new(theta.cos(), theta.sin())
}

/// Named contiguous qubit ranges of a layered register.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegisterMap {
    pub system: Range<usize>,
    pub inner: Range<usize>,
    pub outer: Range<usize>,
}

impl RegisterMap {
    /// system on the low qubits, then inner ancillas, then outer ancillas.
    pub fn layered(system: usize, inner: usize, outer: usize) -> Self {
        RegisterMap {
            system: 0..system,
            inner: system..system + inner,
            outer: system + inner..system + inner + outer,
        }
    }

    pub fn total(&self) -> usize {
        self.outer.end
    }
}

/// Dense vector of complex amplitudes over a layered qubit register.
#[derive(Clone, Debug)]
pub struct QuantumState {
    num_qubits: usize,
    amplitudes: Vec<Complex64>,
    register_map: RegisterMap,
}

impl QuantumState {
    /// |0...0⟩ over a plain register (all qubits counted as "system").
    pub fn zero(num_qubits: usize) -> Self {
        Self::zero_layered(RegisterMap::layered(num_qubits, 0, 0))
    }

    pub fn zero_layered(map: RegisterMap) -> Self {
        let num_qubits = map.total();
        let mut amplitudes = vec![Complex64::default(); 1 << num_qubits];
        amplitudes[0] = Complex64::new(1.0, 0.0);
        QuantumState {
            num_qubits,
            amplitudes,
            register_map: map,
        }
    }

    pub fn from_amplitudes(amplitudes: Vec<Complex64>, map: RegisterMap) -> Self {
        assert_eq!(amplitudes.len(), 1 << map.total());
        QuantumState {
            num_qubits: map.total(),
            amplitudes,
            register_map: map,
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amplitudes
    }

    pub fn register_map(&self) -> &RegisterMap {
        &self.register_map
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Load a normalized copy of `v` into the system register (the remaining
    /// registers must be in |0⟩, as after `zero_layered`).
    pub fn load_system(&mut self, v: &[Complex64]) -> Result<()> {
        let sys = self.register_map.system.clone();
        let dim = 1 << (sys.end - sys.start);
        if v.len() != dim {
            return Err(Error::LengthMismatch(v.len(), dim));
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::ZeroVector);
        }
        for a in self.amplitudes.iter_mut() {
            *a = Complex64::default();
        }
        for (i, z) in v.iter().enumerate() {
            self.amplitudes[i] = z / norm;
        }
        Ok(())
    }

    /// Amplitudes of the system register on the branch where every ancilla
    /// is |0⟩, together with the squared norm of that branch.
    pub fn project_ancilla_zero(&self) -> (Vec<Complex64>, f64) {
        let sys_bits = self.register_map.system.end - self.register_map.system.start;
        let dim = 1 << sys_bits;
        let branch: Vec<Complex64> = self.amplitudes[..dim].to_vec();
        let p = branch.iter().map(|z| z.norm_sqr()).sum::<f64>();
        (branch, p)
    }

    /// Apply a dense unitary to the contiguous qubit range starting at
    /// `offset` (used for state-preparation oracles; not tracked as gates).
    pub fn apply_dense(&mut self, u: &CMat, offset: usize) {
        let k = u.nrows().trailing_zeros() as usize;
        assert_eq!(1 << k, u.nrows());
        assert!(offset + k <= self.num_qubits);
        let dim = self.amplitudes.len();
        let stride = 1 << offset;
        let span = 1 << (offset + k);
        let mut scratch = vec![Complex64::default(); 1 << k];
        let mut base = 0;
        while base < dim {
            for low in 0..stride {
                let start = base + low;
                for (s, slot) in scratch.iter_mut().enumerate() {
                    *slot = self.amplitudes[start + s * stride];
                }
                for r in 0..(1 << k) {
                    let mut acc = Complex64::default();
                    for (s, v) in scratch.iter().enumerate() {
                        acc += u[(r, s)] * v;
                    }
                    self.amplitudes[start + r * stride] = acc;
                }
            }
            base += span;
        }
    }
}

/// Gate alphabet. `controls` holds additional control qubits (all must be
/// |1⟩ for the action to fire); an empty list is the plain gate.
#[derive(Clone, Debug, PartialEq)]
pub struct Gate {
    pub controls: Vec<usize>,
    pub kind: GateKind,
}

#[derive(Clone, Debug, PartialEq)]
pub enum GateKind {
    SingleQubit { target: usize, u: Mat2 },
    Hadamard { target: usize },
    PauliX { target: usize },
    /// diag(1, e^{iλ}) on the target.
    Phase { target: usize, lambda: f64 },
    Cnot { control: usize, target: usize },
    /// e^{-iθZ/2} on the target, conditioned on the controls.
    Rz { target: usize, theta: f64 },
    /// e^{iθ} multiplying every amplitude.
    GlobalPhase { theta: f64 },
}

impl Gate {
    pub fn single_qubit(target: usize, u: Mat2) -> Result<Self> {
        let dev = unitarity_deviation(&u);
        if dev > 1e-12 {
            return Err(Error::NonUnitary { deviation: dev });
        }
        Ok(Gate {
            controls: Vec::new(),
            kind: GateKind::SingleQubit { target, u },
        })
    }

    pub fn hadamard(target: usize) -> Self {
        Gate {
            controls: Vec::new(),
            kind: GateKind::Hadamard { target },
        }
    }

    pub fn pauli_x(target: usize) -> Self {
        Gate {
            controls: Vec::new(),
            kind: GateKind::PauliX { target },
        }
    }

    pub fn phase(target: usize, lambda: f64) -> Self {
        Gate {
            controls: Vec::new(),
            kind: GateKind::Phase { target, lambda },
        }
    }

    pub fn cnot(control: usize, target: usize) -> Result<Self> {
        if control == target {
            return Err(Error::OverlappingQubit(control));
        }
        Ok(Gate {
            controls: Vec::new(),
            kind: GateKind::Cnot { control, target },
        })
    }

    /// Multi-controlled RZ: e^{-iθZ/2} on `target` when all controls are 1.
    pub fn multi_controlled_rz(controls: Vec<usize>, target: usize, theta: f64) -> Result<Self> {
        if controls.contains(&target) {
            return Err(Error::OverlappingQubit(target));
        }
        Ok(Gate {
            controls,
            kind: GateKind::Rz { target, theta },
        })
    }

    /// Multi-controlled phase: multiplies e^{iθ} when all controls and the
    /// target are 1.
    pub fn multi_controlled_phase(controls: Vec<usize>, target: usize, theta: f64) -> Result<Self> {
        if controls.contains(&target) {
            return Err(Error::OverlappingQubit(target));
        }
        Ok(Gate {
            controls,
            kind: GateKind::Phase {
                target,
                lambda: theta,
            },
        })
    }

    pub fn global_phase(theta: f64) -> Self {
        Gate {
            controls: Vec::new(),
            kind: GateKind::GlobalPhase { theta },
        }
    }

    /// All qubits the gate touches.
    pub fn qubits(&self) -> Vec<usize> {
        let mut q = self.controls.clone();
        match &self.kind {
            GateKind::SingleQubit { target, .. }
            | GateKind::Hadamard { target }
            | GateKind::PauliX { target }
            | GateKind::Phase { target, .. }
            | GateKind::Rz { target, .. } => q.push(*target),
            GateKind::Cnot { control, target } => {
                q.push(*control);
                q.push(*target);
            }
            GateKind::GlobalPhase { .. } => {}
        }
        q
    }

    /// The same gate conditioned on one more control qubit. A global phase
    /// becomes a phase gate on the control.
    pub fn with_control(&self, control: usize) -> Result<Self> {
        if self.qubits().contains(&control) {
            return Err(Error::OverlappingQubit(control));
        }
        match &self.kind {
            GateKind::GlobalPhase { theta } => {
                let mut g = Gate::phase(control, *theta);
                g.controls = self.controls.clone();
                Ok(g)
            }
            kind => {
                let mut controls = self.controls.clone();
                controls.push(control);
                Ok(Gate {
                    controls,
                    kind: kind.clone(),
                })
            }
        }
    }

    fn control_mask(&self) -> u64 {
        let mut mask = 0u64;
        for &c in &self.controls {
            mask |= 1 << c;
        }
        mask
    }
}

fn unitarity_deviation(u: &Mat2) -> f64 {
    // | U U† - I | entrywise max
    let mut dev = 0.0f64;
    for (i, row) in u.iter().enumerate() {
        for (j, other) in u.iter().enumerate() {
            let acc: Complex64 = row.iter().zip(other).map(|(a, b)| a * b.conj()).sum();
            let want = if i == j { 1.0 } else { 0.0 };
            dev = dev.max((acc - want).norm());
        }
    }
    dev
}

/// Ordered gate list over a fixed register width.
#[derive(Clone, Debug, Default)]
pub struct Circuit {
    pub num_qubits: usize,
    pub gates: Vec<Gate>,
    pub label: String,
}

impl Circuit {
    pub fn new(num_qubits: usize, label: impl Into<String>) -> Self {
        Circuit {
            num_qubits,
            gates: Vec::new(),
            label: label.into(),
        }
    }

    pub fn push(&mut self, gate: Gate) {
        debug_assert!(gate.qubits().iter().all(|&q| q < self.num_qubits));
        self.gates.push(gate);
    }

    pub fn extend(&mut self, other: &Circuit) {
        debug_assert!(other.num_qubits <= self.num_qubits);
        self.gates.extend(other.gates.iter().cloned());
    }

    /// One gate per line: `KIND targets controls angle`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for g in &self.gates {
            let ctrl = if g.controls.is_empty() {
                "-".to_string()
            } else {
                g.controls
                    .iter()
                    .map(|c| c.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            };
            let line = match &g.kind {
                GateKind::SingleQubit { target, .. } => format!("U1Q {target} {ctrl} -"),
                GateKind::Hadamard { target } => format!("H {target} {ctrl} -"),
                GateKind::PauliX { target } => format!("X {target} {ctrl} -"),
                GateKind::Phase { target, lambda } => format!("P {target} {ctrl} {lambda:.17e}"),
                GateKind::Cnot { control, target } => {
                    if g.controls.is_empty() {
                        format!("CNOT {control},{target} - -")
                    } else {
                        format!("CNOT {control},{target} {ctrl} -")
                    }
                }
                GateKind::Rz { target, theta } => format!("RZ {target} {ctrl} {theta:.17e}"),
                GateKind::GlobalPhase { theta } => format!("GPHASE - {ctrl} {theta:.17e}"),
            };
            out.push_str(&line);
            out.push('\n');
        }
        out
    }
}

/// Every gate gains `control` as an additional control; global phases become
/// phase gates on the control.
pub fn controlled(circuit: &Circuit, control: usize) -> Result<Circuit> {
    for g in &circuit.gates {
        if g.qubits().contains(&control) {
            return Err(Error::OverlappingQubit(control));
        }
    }
    let mut out = Circuit::new(
        circuit.num_qubits.max(control + 1),
        format!("C[{}]({})", control, circuit.label),
    );
    for g in &circuit.gates {
        out.push(g.with_control(control)?);
    }
    Ok(out)
}

/// Apply a single gate in place.
pub fn apply_gate(state: &mut QuantumState, gate: &Gate) -> Result<()> {
    let n = state.num_qubits;
    for q in gate.qubits() {
        if q >= n {
            return Err(Error::QubitOutOfRange {
                index: q,
                num_qubits: n,
            });
        }
    }
    let cmask = gate.control_mask();
    let amps = &mut state.amplitudes;
    match &gate.kind {
        GateKind::SingleQubit { target, u } => {
            apply_1q(amps, n, *target, cmask, u);
        }
        GateKind::Hadamard { target } => {
            let s = std::f64::consts::FRAC_1_SQRT_2;
            let h = [
                [Complex64::new(s, 0.0), Complex64::new(s, 0.0)],
                [Complex64::new(s, 0.0), Complex64::new(-s, 0.0)],
            ];
            apply_1q(amps, n, *target, cmask, &h);
        }
        GateKind::PauliX { target } => {
            let tmask = 1u64 << target;
            for k in 0..(amps.len() as u64 >> 1) {
                let i0 = insert_zero(k, *target);
                if i0 & cmask == cmask {
                    amps.swap(i0 as usize, (i0 | tmask) as usize);
                }
            }
        }
        GateKind::Cnot { control, target } => {
            let tmask = 1u64 << target;
            let full = cmask | (1 << control);
            for k in 0..(amps.len() as u64 >> 1) {
                let i0 = insert_zero(k, *target);
                if i0 & full == full {
                    amps.swap(i0 as usize, (i0 | tmask) as usize);
                }
            }
        }
        GateKind::Phase { target, lambda } => {
            let w = cis(*lambda);
            let want = cmask | (1 << target);
            for (i, a) in amps.iter_mut().enumerate() {
                if i as u64 & want == want {
                    *a *= w;
                }
            }
        }
        GateKind::Rz { target, theta } => {
            let minus = cis(-theta / 2.0);
            let plus = cis(theta / 2.0);
            let tmask = 1u64 << target;
            for (i, a) in amps.iter_mut().enumerate() {
                if i as u64 & cmask == cmask {
                    *a *= if i as u64 & tmask != 0 { plus } else { minus };
                }
            }
        }
        GateKind::GlobalPhase { theta } => {
            let w = cis(*theta);
            if cmask == 0 {
                for a in amps.iter_mut() {
                    *a *= w;
                }
            } else {
                for (i, a) in amps.iter_mut().enumerate() {
                    if i as u64 & cmask == cmask {
                        *a *= w;
                    }
                }
            }
        }
    }
    Ok(())
}

#[inline]
fn insert_zero(k: u64, target: usize) -> u64 {
    ((k >> target) << (target + 1)) | (k & ((1u64 << target) - 1))
}

fn apply_1q(amps: &mut [Complex64], n: usize, target: usize, cmask: u64, u: &Mat2) {
    let tmask = 1u64 << target;
    let half = (1u64 << n) >> 1;
    for k in 0..half {
        let i0 = insert_zero(k, target);
        if i0 & cmask == cmask {
            let i1 = (i0 | tmask) as usize;
            let i0 = i0 as usize;
            let a = amps[i0];
            let b = amps[i1];
            amps[i0] = u[0][0] * a + u[0][1] * b;
            amps[i1] = u[1][0] * a + u[1][1] * b;
        }
    }
}

/// Apply every gate of the circuit in list order.
pub fn run_circuit(state: &mut QuantumState, circuit: &Circuit) -> Result<()> {
    if circuit.num_qubits > state.num_qubits {
        return Err(Error::RegisterMismatch {
            circuit: circuit.num_qubits,
            state: state.num_qubits,
        });
    }
    for g in &circuit.gates {
        apply_gate(state, g)?;
    }
    Ok(())
}

/// Dense matrix of the circuit: column i is the circuit applied to |i⟩.
pub fn circuit_unitary(circuit: &Circuit) -> Result<CMat> {
    let n = circuit.num_qubits;
    if n > 12 {
        return Err(Error::UnitarySizeGuard(n));
    }
    let dim = 1usize << n;
    let mut out = CMat::zeros(dim, dim);
    for col in 0..dim {
        let mut st = QuantumState::zero(n);
        st.amplitudes.fill(Complex64::default());
        st.amplitudes[col] = Complex64::new(1.0, 0.0);
        run_circuit(&mut st, circuit)?;
        for row in 0..dim {
            out[(row, col)] = st.amplitudes[row];
        }
    }
    Ok(out)
}

/// Count of applied gates by kind label, for solve reports.
pub fn tally(circuit: &Circuit) -> std::collections::BTreeMap<String, u64> {
    let mut map = std::collections::BTreeMap::new();
    for g in &circuit.gates {
        let name = match &g.kind {
            GateKind::SingleQubit { .. } => "single_qubit",
            GateKind::Hadamard { .. } => "hadamard",
            GateKind::PauliX { .. } => "pauli_x",
            GateKind::Phase { .. } => {
                if g.controls.is_empty() {
                    "phase"
                } else {
                    "multi_controlled_phase"
                }
            }
            GateKind::Cnot { .. } => "cnot",
            GateKind::Rz { .. } => {
                if g.controls.is_empty() {
                    "rz"
                } else {
                    "multi_controlled_rz"
                }
            }
            GateKind::GlobalPhase { .. } => "global_phase",
        };
        let name = if !g.controls.is_empty()
            && matches!(
                g.kind,
                GateKind::SingleQubit { .. }
                    | GateKind::Hadamard { .. }
                    | GateKind::PauliX { .. }
                    | GateKind::Cnot { .. }
            ) {
            format!("controlled_{name}")
        } else {
            name.to_string()
        };
        *map.entry(name).or_insert(0) += 1;
    }
    map
}
