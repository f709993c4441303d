//! Parameterized `R_y` + CNOT circuits.
//!
//! Two families are provided: the layered hardware-efficient circuit used by
//! the naive variational loop (starts from `|0⟩`), and a six-angle circuit
//! acting on the ancilla and the two highest data qubits (starts from `|χ₀⟩`
//! and compiles to the identity at zero angles).

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::grover::GroverOracle;
use crate::simulator::{QubitIndex, Statevector};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GateSlot {
    Ry { qubit: QubitIndex, param: usize },
    Cnot { control: QubitIndex, target: QubitIndex },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitState {
    /// `|0…0⟩`
    Zero,
    /// The problem state `|χ₀⟩` of the oracle in use.
    Chi0,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnsatzSpec {
    width: usize,
    gates: Vec<GateSlot>,
    num_params: usize,
    init: InitState,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParameterVector(pub Vec<f64>);

impl ParameterVector {
    pub fn zeros(len: usize) -> Self {
        Self(vec![0.0; len])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }
}

fn push_brick(gates: &mut Vec<GateSlot>, width: usize) {
    for start in [0, 1] {
        for c in (start..width - 1).step_by(2) {
            gates.push(GateSlot::Cnot {
                control: QubitIndex(c),
                target: QubitIndex(c + 1),
            });
        }
    }
}

/// Layered circuit of `depth` repetitions. Each layer is an `R_y` column,
/// a nearest-neighbour CNOT brick, a second `R_y` column, the same brick
/// again and `R_y` on the lower half of the register.
pub fn build_layered(width: usize, depth: usize) -> Result<AnsatzSpec> {
    if width < 2 {
        return Err(Error::InvalidWidth(width));
    }
    if depth == 0 {
        return Err(Error::InvalidConfig("layered ansatz depth must be at least 1".into()));
    }
    let mut gates = Vec::new();
    let mut next = 0;
    let mut column = |gates: &mut Vec<GateSlot>, count: usize| {
        for q in 0..count {
            gates.push(GateSlot::Ry {
                qubit: QubitIndex(q),
                param: next,
            });
            next += 1;
        }
    };
    for _ in 0..depth {
        column(&mut gates, width);
        push_brick(&mut gates, width);
        column(&mut gates, width);
        push_brick(&mut gates, width);
        column(&mut gates, width.div_ceil(2));
    }
    Ok(AnsatzSpec {
        width,
        num_params: next,
        gates,
        init: InitState::Zero,
    })
}

/// Six-angle circuit on the ancilla `A`, `b = A − 1` and `c = A − 2`.
pub fn build_minimal(width: usize) -> Result<AnsatzSpec> {
    if width < 3 {
        return Err(Error::InvalidWidth(width));
    }
    let a = QubitIndex(width - 1);
    let b = QubitIndex(width - 2);
    let c = QubitIndex(width - 3);
    let ry = |qubit, param| GateSlot::Ry { qubit, param };
    let cx = |control, target| GateSlot::Cnot { control, target };
    let gates = vec![
        ry(b, 0),
        ry(a, 1),
        cx(b, a),
        ry(a, 2),
        cx(b, a),
        cx(c, b),
        ry(b, 3),
        cx(c, b),
        ry(a, 4),
        ry(b, 5),
    ];
    Ok(AnsatzSpec {
        width,
        gates,
        num_params: 6,
        init: InitState::Chi0,
    })
}

fn apply_gate(state: &mut Statevector, gate: GateSlot, params: &[f64], inverse: bool) -> Result<()> {
    match gate {
        GateSlot::Ry { qubit, param } => {
            let angle = if inverse { -params[param] } else { params[param] };
            state.apply_ry(qubit, angle)
        }
        GateSlot::Cnot { control, target } => state.apply_cnot(control, target),
    }
}

/// `Re⟨bra| dR_y(angle)/d angle |ket⟩` on qubit `q`.
fn ry_derivative_overlap(bra: &Statevector, ket: &Statevector, q: QubitIndex, angle: f64) -> f64 {
    // dR_y(λ)/dλ = R_y(λ + π) / 2
    let (s, c) = (0.5 * (angle + PI)).sin_cos();
    let stride = 1usize << q.0;
    let mut acc = Complex64::new(0.0, 0.0);
    for (bb, kb) in bra
        .amplitudes()
        .chunks_exact(2 * stride)
        .zip(ket.amplitudes().chunks_exact(2 * stride))
    {
        for i in 0..stride {
            let (k0, k1) = (kb[i], kb[i + stride]);
            acc += bb[i].conj() * (k0 * c - k1 * s) + bb[i + stride].conj() * (k0 * s + k1 * c);
        }
    }
    0.5 * acc.re
}

impl AnsatzSpec {
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn gates(&self) -> &[GateSlot] {
        &self.gates
    }

    pub fn num_params(&self) -> usize {
        self.num_params
    }

    pub fn init(&self) -> InitState {
        self.init
    }

    pub fn rotation_count(&self) -> usize {
        self.gates.iter().filter(|g| matches!(g, GateSlot::Ry { .. })).count()
    }

    pub fn cnot_count(&self) -> usize {
        self.gates.len() - self.rotation_count()
    }

    /// The state the circuit acts on for the given oracle.
    pub fn init_state(&self, oracle: &GroverOracle) -> Result<Statevector> {
        if oracle.width() != self.width {
            return Err(Error::WidthMismatch {
                left: self.width,
                right: oracle.width(),
            });
        }
        match self.init {
            InitState::Zero => Statevector::basis_state(self.width, 0),
            InitState::Chi0 => Ok(oracle.chi0().clone()),
        }
    }

    fn check(&self, params: &ParameterVector, state: &Statevector) -> Result<()> {
        if params.len() != self.num_params {
            return Err(Error::ParameterCountMismatch {
                expected: self.num_params,
                got: params.len(),
            });
        }
        if state.width() != self.width {
            return Err(Error::WidthMismatch {
                left: self.width,
                right: state.width(),
            });
        }
        Ok(())
    }

    pub fn evaluate(&self, params: &ParameterVector, init: &Statevector) -> Result<Statevector> {
        self.check(params, init)?;
        let mut state = init.clone();
        for &gate in &self.gates {
            apply_gate(&mut state, gate, params.values(), false)?;
        }
        Ok(state)
    }

    /// `F = Re⟨φ(λ)|target⟩` and `∂F/∂λ_j` for every parameter, by a single
    /// reverse pass over the circuit.
    pub fn overlap_and_gradient(
        &self,
        params: &ParameterVector,
        init: &Statevector,
        target: &Statevector,
    ) -> Result<(f64, Vec<f64>)> {
        self.check(params, target)?;
        let mut ket = self.evaluate(params, init)?;
        let value = ket.inner_product(target)?.re;
        let mut bra = target.clone();
        let mut grad = vec![0.0; self.num_params];
        for &gate in self.gates.iter().rev() {
            apply_gate(&mut ket, gate, params.values(), true)?;
            if let GateSlot::Ry { qubit, param } = gate {
                grad[param] += ry_derivative_overlap(&bra, &ket, qubit, params.values()[param]);
            }
            apply_gate(&mut bra, gate, params.values(), true)?;
        }
        Ok((value, grad))
    }

    /// Angles drawn uniformly from `[0, 2π)`.
    pub fn random_init<R: Rng + ?Sized>(&self, rng: &mut R) -> ParameterVector {
        ParameterVector((0..self.num_params).map(|_| rng.random_range(0.0..TAU)).collect())
    }
}
