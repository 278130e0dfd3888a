//! Circuit representation and builders for linear-cluster chains and the two
//! block templates used by the chain cut.
//!
//! State preparation is a label resolved by the simulator rather than a gate
//! sequence. The order of [`StateLabel::ALL`] is a fixed convention of this crate.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::qstate::{gates, Gate1, Pauli};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Basis {
    X,
    Y,
    Z,
}

impl Basis {
    pub fn pauli(self) -> Pauli {
        match self {
            Basis::X => Pauli::X,
            Basis::Y => Pauli::Y,
            Basis::Z => Pauli::Z,
        }
    }

    fn from_char(c: char) -> Option<Self> {
        match c {
            'X' => Some(Basis::X),
            'Y' => Some(Basis::Y),
            'Z' => Some(Basis::Z),
            _ => None,
        }
    }

    fn as_char(self) -> char {
        match self {
            Basis::X => 'X',
            Basis::Y => 'Y',
            Basis::Z => 'Z',
        }
    }
}

/// Per-qubit terminal measurement basis.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MeasSetting(Vec<Basis>);

impl MeasSetting {
    pub fn new(bases: Vec<Basis>) -> Self {
        Self(bases)
    }

    pub fn all_z(n: usize) -> Self {
        Self(vec![Basis::Z; n])
    }

    /// `XZXZ...` when `start` is X, `ZXZX...` when it is Z.
    pub fn alternating(n: usize, start: Basis) -> Self {
        let other = if start == Basis::X { Basis::Z } else { Basis::X };
        Self((0..n).map(|q| if q % 2 == 0 { start } else { other }).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bases(&self) -> &[Basis] {
        &self.0
    }

    pub fn basis(&self, q: usize) -> Basis {
        self.0[q]
    }

    pub fn concat(&self, other: &MeasSetting) -> MeasSetting {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        MeasSetting(v)
    }
}

impl FromStr for MeasSetting {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| Basis::from_char(c).ok_or_else(|| Error::Parse(format!("bad basis {c:?}"))))
            .collect::<Result<Vec<_>>>()
            .map(MeasSetting)
    }
}

impl fmt::Display for MeasSetting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.0.iter().map(|b| b.as_char()).collect();
        f.write_str(&s)
    }
}

impl fmt::Debug for MeasSetting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MeasSetting({self})")
    }
}

/// The six single-qubit preparations `|0>, |1>, |+>, |->, |+i>, |-i>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum StateLabel {
    Z0,
    Z1,
    Xp,
    Xm,
    Yp,
    Ym,
}

impl StateLabel {
    pub const ALL: [StateLabel; 6] =
        [StateLabel::Z0, StateLabel::Z1, StateLabel::Xp, StateLabel::Xm, StateLabel::Yp, StateLabel::Ym];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn amplitudes(self) -> [Complex64; 2] {
        let s = core::f64::consts::FRAC_1_SQRT_2;
        let (a, b) = match self {
            StateLabel::Z0 => (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)),
            StateLabel::Z1 => (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)),
            StateLabel::Xp => (Complex64::new(s, 0.0), Complex64::new(s, 0.0)),
            StateLabel::Xm => (Complex64::new(s, 0.0), Complex64::new(-s, 0.0)),
            StateLabel::Yp => (Complex64::new(s, 0.0), Complex64::new(0.0, s)),
            StateLabel::Ym => (Complex64::new(s, 0.0), Complex64::new(0.0, -s)),
        };
        [a, b]
    }

    /// A unitary whose first column is this state, i.e. it maps `|0>` to the label.
    pub fn preparation_unitary(self) -> Gate1 {
        let [a, b] = self.amplitudes();
        [[a, -b.conj()], [b, a.conj()]]
    }

    /// `<label| P |label>` for a single-qubit Pauli.
    pub fn pauli_expectation(self, p: Pauli) -> f64 {
        use StateLabel::*;
        match (p, self) {
            (Pauli::I, _) => 1.0,
            (Pauli::Z, Z0) | (Pauli::X, Xp) | (Pauli::Y, Yp) => 1.0,
            (Pauli::Z, Z1) | (Pauli::X, Xm) | (Pauli::Y, Ym) => -1.0,
            _ => 0.0,
        }
    }
}

impl FromStr for StateLabel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "Z0" => StateLabel::Z0,
            "Z1" => StateLabel::Z1,
            "Xp" => StateLabel::Xp,
            "Xm" => StateLabel::Xm,
            "Yp" => StateLabel::Yp,
            "Ym" => StateLabel::Ym,
            _ => return Err(Error::Parse(format!("unknown state label {s:?}"))),
        })
    }
}

impl fmt::Display for StateLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawGate", into = "RawGate")]
pub enum Gate {
    Prep { qubit: usize, label: StateLabel },
    H(usize),
    S(usize),
    Sdg(usize),
    X(usize),
    /// Symmetric; the pair order carries no meaning.
    Cz(usize, usize),
}

impl Gate {
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::Prep { qubit, .. } | Gate::H(qubit) | Gate::S(qubit) | Gate::Sdg(qubit) | Gate::X(qubit) => {
                vec![qubit]
            }
            Gate::Cz(a, b) => vec![a, b],
        }
    }

    pub fn unitary_1q(&self) -> Option<(usize, Gate1)> {
        match *self {
            Gate::Prep { qubit, label } => Some((qubit, label.preparation_unitary())),
            Gate::H(q) => Some((q, gates::H)),
            Gate::S(q) => Some((q, gates::S)),
            Gate::Sdg(q) => Some((q, gates::SDG)),
            Gate::X(q) => Some((q, gates::X)),
            Gate::Cz(..) => None,
        }
    }

    pub fn is_prep(&self) -> bool {
        matches!(self, Gate::Prep { .. })
    }
}

/// Wire form: `{"kind": "CZ", "q": [0, 1]}`, `{"kind": "prep", "q": [0], "label": "Xp"}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct RawGate {
    kind: String,
    q: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    label: Option<String>,
}

impl TryFrom<RawGate> for Gate {
    type Error = Error;
    fn try_from(raw: RawGate) -> Result<Self> {
        let one = |q: &[usize]| -> Result<usize> {
            match q {
                [a] => Ok(*a),
                _ => Err(Error::InvalidCircuit(format!("{} takes exactly one qubit", raw.kind))),
            }
        };
        if raw.kind != "prep" && raw.label.is_some() {
            return Err(Error::InvalidCircuit(format!("{} does not take a label", raw.kind)));
        }
        Ok(match raw.kind.as_str() {
            "prep" => {
                let label = raw.label.as_deref().ok_or_else(|| Error::InvalidCircuit("prep needs a label".into()))?;
                Gate::Prep { qubit: one(&raw.q)?, label: label.parse()? }
            }
            "H" => Gate::H(one(&raw.q)?),
            "S" => Gate::S(one(&raw.q)?),
            "Sdg" => Gate::Sdg(one(&raw.q)?),
            "X" => Gate::X(one(&raw.q)?),
            "CZ" => match raw.q.as_slice() {
                [a, b] if a != b => Gate::Cz(*a, *b),
                _ => return Err(Error::InvalidCircuit("CZ takes two distinct qubits".into())),
            },
            k => return Err(Error::InvalidCircuit(format!("unknown gate kind {k:?}"))),
        })
    }
}

impl From<Gate> for RawGate {
    fn from(g: Gate) -> Self {
        let (kind, label) = match g {
            Gate::Prep { label, .. } => ("prep", Some(label.to_string())),
            Gate::H(_) => ("H", None),
            Gate::S(_) => ("S", None),
            Gate::Sdg(_) => ("Sdg", None),
            Gate::X(_) => ("X", None),
            Gate::Cz(..) => ("CZ", None),
        };
        RawGate { kind: kind.into(), q: g.qubits(), label }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawCircuit")]
pub struct Circuit {
    #[serde(rename = "n")]
    n_qubits: usize,
    ops: Vec<Gate>,
    meas: MeasSetting,
}

#[derive(Deserialize)]
struct RawCircuit {
    n: usize,
    ops: Vec<Gate>,
    meas: MeasSetting,
}

impl TryFrom<RawCircuit> for Circuit {
    type Error = Error;
    fn try_from(raw: RawCircuit) -> Result<Self> {
        Circuit::new(raw.n, raw.ops, raw.meas)
    }
}

impl Circuit {
    /// Validates qubit ranges, CZ distinctness, the measurement length, and that
    /// each qubit has at most one preparation which precedes every other op on it.
    pub fn new(n_qubits: usize, ops: Vec<Gate>, meas: MeasSetting) -> Result<Self> {
        if n_qubits == 0 {
            return Err(Error::InvalidCircuit("circuit needs at least one qubit".into()));
        }
        if meas.len() != n_qubits {
            return Err(Error::SizeMismatch { expected: n_qubits, found: meas.len() });
        }
        let mut touched = vec![false; n_qubits];
        for op in &ops {
            let qs = op.qubits();
            for &q in &qs {
                if q >= n_qubits {
                    return Err(Error::QubitOutOfRange { qubit: q, n: n_qubits });
                }
            }
            if let Gate::Cz(a, b) = op {
                if a == b {
                    return Err(Error::InvalidCircuit("CZ on a single qubit".into()));
                }
            }
            if op.is_prep() && touched[qs[0]] {
                return Err(Error::InvalidCircuit(format!(
                    "preparation on qubit {} after other operations",
                    qs[0]
                )));
            }
            for q in qs {
                touched[q] = true;
            }
        }
        Ok(Self { n_qubits, ops, meas })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn ops(&self) -> &[Gate] {
        &self.ops
    }

    pub fn meas(&self) -> &MeasSetting {
        &self.meas
    }

    pub fn with_meas(&self, meas: MeasSetting) -> Result<Self> {
        Self::new(self.n_qubits, self.ops.clone(), meas)
    }

    pub fn count(&self, pred: impl Fn(&Gate) -> bool) -> usize {
        self.ops.iter().filter(|g| pred(g)).count()
    }
}

/// `|LC_n>`: H on every qubit, then CZ on each neighbouring pair; measured all-Z.
pub fn build_linear_cluster(n: usize) -> Result<Circuit> {
    if n == 0 {
        return Err(Error::InvalidCircuit("linear cluster needs n >= 1".into()));
    }
    let mut ops: Vec<Gate> = (0..n).map(Gate::H).collect();
    ops.extend((0..n - 1).map(|i| Gate::Cz(i, i + 1)));
    Circuit::new(n, ops, MeasSetting::all_z(n))
}

/// Shape of a chain block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BlockForm {
    /// Three chain qubits plus the outgoing cut qubit.
    FourQubit,
    /// The terminal block: three chain qubits, no cut.
    ThreeQubit,
}

impl BlockForm {
    pub fn n_qubits(self) -> usize {
        match self {
            BlockForm::FourQubit => 4,
            BlockForm::ThreeQubit => 3,
        }
    }
}

/// A chain block: `input` prepared on qubit 0, H on the rest, CZ between neighbours.
/// With `input = Xp` this is the 4- or 3-qubit linear-cluster circuit.
pub fn build_block_subcircuit(form: BlockForm, input: StateLabel, meas: MeasSetting) -> Result<Circuit> {
    let n = form.n_qubits();
    if meas.len() != n {
        return Err(Error::SizeMismatch { expected: n, found: meas.len() });
    }
    let mut ops = vec![Gate::Prep { qubit: 0, label: input }];
    ops.extend((1..n).map(Gate::H));
    ops.extend((0..n - 1).map(|i| Gate::Cz(i, i + 1)));
    Circuit::new(n, ops, meas)
}

/// Rotations mapping each requested basis onto Z: X via H, Y via Sdg then H.
pub fn basis_change_ops(meas: &MeasSetting) -> Vec<Gate> {
    let mut ops = Vec::new();
    for (q, b) in meas.bases().iter().enumerate() {
        match b {
            Basis::X => ops.push(Gate::H(q)),
            Basis::Y => {
                ops.push(Gate::Sdg(q));
                ops.push(Gate::H(q));
            }
            Basis::Z => {}
        }
    }
    ops
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::StateVector;

    #[test]
    fn linear_cluster_gate_counts() {
        let c = build_linear_cluster(1).unwrap();
        assert_eq!((c.count(|g| matches!(g, Gate::H(_))), c.count(|g| matches!(g, Gate::Cz(..)))), (1, 0));
        let c = build_linear_cluster(12).unwrap();
        assert_eq!((c.count(|g| matches!(g, Gate::H(_))), c.count(|g| matches!(g, Gate::Cz(..)))), (12, 11));
        assert_eq!(c.meas().to_string(), "ZZZZZZZZZZZZ");
        assert!(build_linear_cluster(0).is_err());
    }

    #[test]
    fn validation_rejects_bad_circuits() {
        let m = MeasSetting::all_z(2);
        assert_eq!(Circuit::new(2, vec![Gate::H(2)], m.clone()).unwrap_err(), Error::QubitOutOfRange { qubit: 2, n: 2 });
        assert!(Circuit::new(2, vec![Gate::Cz(1, 1)], m.clone()).is_err());
        assert!(Circuit::new(2, vec![Gate::H(0), Gate::Prep { qubit: 0, label: StateLabel::Xp }], m.clone()).is_err());
        assert!(Circuit::new(
            2,
            vec![Gate::Prep { qubit: 0, label: StateLabel::Xp }, Gate::Prep { qubit: 0, label: StateLabel::Z0 }],
            m.clone()
        )
        .is_err());
        assert!(Circuit::new(3, vec![], m).is_err());
    }

    #[test]
    fn block_templates() {
        let c = build_block_subcircuit(BlockForm::ThreeQubit, StateLabel::Z0, "ZXZ".parse().unwrap()).unwrap();
        assert_eq!(c.n_qubits(), 3);
        assert_eq!(c.ops()[0], Gate::Prep { qubit: 0, label: StateLabel::Z0 });
        assert_eq!(c.count(|g| matches!(g, Gate::Cz(..))), 2);
        assert!(build_block_subcircuit(BlockForm::FourQubit, StateLabel::Z0, "ZXZ".parse().unwrap()).is_err());
    }

    #[test]
    fn basis_changes() {
        assert!(basis_change_ops(&MeasSetting::all_z(3)).is_empty());
        assert_eq!(basis_change_ops(&"XY".parse().unwrap()), vec![Gate::H(0), Gate::Sdg(1), Gate::H(1)]);
    }

    #[test]
    fn preparation_unitaries_prepare_labels() {
        for label in StateLabel::ALL {
            let mut s = StateVector::zero(1).unwrap();
            s.apply_1q(0, &label.preparation_unitary()).unwrap();
            let want = label.amplitudes();
            assert!((s.amplitudes()[0] - want[0]).norm() < 1e-15);
            assert!((s.amplitudes()[1] - want[1]).norm() < 1e-15);
            for p in [Pauli::X, Pauli::Y, Pauli::Z] {
                let e = s.expectation(&crate::qstate::PauliString::single(1, 0, p).unwrap()).unwrap();
                assert!((e - label.pauli_expectation(p)).abs() < 1e-15, "{label} {p:?}");
            }
        }
    }
}
