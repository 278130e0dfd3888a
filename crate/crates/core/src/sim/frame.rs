//! Heisenberg-picture evaluation of Pauli expectations for Clifford circuits
//! under the depolarising noise model.
//!
//! A depolarising channel on support `S` maps a Pauli `P` to `(1 - p) P` when
//! `P` acts non-trivially on `S` and leaves it unchanged otherwise, and Clifford
//! gates map Paulis to signed Paulis. Propagating the observable backwards
//! through the circuit therefore yields the exact noisy expectation as a single
//! product of damping factors, with no state stored. This makes noisy chains of
//! 12 and more qubits tractable.

use alloc::vec::Vec;

use crate::circuit::{Basis, Circuit, Gate, StateLabel};
use crate::qstate::{Distribution, Pauli, PauliString};
use crate::{Error, Result};

use super::NoiseModel;

/// Largest register whose full outcome distribution is assembled from parity
/// expectations.
pub const MAX_FRAME_DISTRIBUTION_QUBITS: usize = 24;

#[derive(Clone, Copy)]
enum Op {
    Prep(u64, StateLabel),
    H(u64),
    S(u64),
    Sdg(u64),
    X(u64),
    Cz(u64, u64),
}

/// Signed Pauli in symplectic form; `x & z` marks a `Y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Frame {
    x: u64,
    z: u64,
    neg: bool,
}

impl Frame {
    fn h(&mut self, b: u64) {
        let (xb, zb) = (self.x & b != 0, self.z & b != 0);
        self.neg ^= xb && zb;
        self.x = (self.x & !b) | if zb { b } else { 0 };
        self.z = (self.z & !b) | if xb { b } else { 0 };
    }

    /// Forward conjugation `S P S†`.
    fn s(&mut self, b: u64) {
        let (xb, zb) = (self.x & b != 0, self.z & b != 0);
        self.neg ^= xb && zb;
        if xb {
            self.z ^= b;
        }
    }

    fn sdg(&mut self, b: u64) {
        self.s(b);
        self.s(b);
        self.s(b);
    }

    fn xgate(&mut self, b: u64) {
        self.neg ^= self.z & b != 0;
    }

    fn cz(&mut self, a: u64, b: u64) {
        let (xa, xb) = (self.x & a != 0, self.x & b != 0);
        let (za, zb) = (self.z & a != 0, self.z & b != 0);
        self.neg ^= xa && xb && (za ^ zb);
        if xb {
            self.z ^= a;
        }
        if xa {
            self.z ^= b;
        }
    }

    fn letter(&self, b: u64) -> Pauli {
        match (self.x & b != 0, self.z & b != 0) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    fn touches(&self, mask: u64) -> bool {
        (self.x | self.z) & mask != 0
    }
}

struct Compiled {
    ops: Vec<Op>,
    p1: f64,
    p2: f64,
}

fn compile(c: &Circuit, noise: Option<&NoiseModel>) -> Result<Compiled> {
    let n = c.n_qubits();
    if n > 64 {
        return Err(Error::RegisterTooLarge { n, max: 64 });
    }
    if let Some(m) = noise {
        m.validate()?;
    }
    let bit = |q: usize| 1u64 << (n - 1 - q);
    let ops = c
        .ops()
        .iter()
        .map(|g| match *g {
            Gate::Prep { qubit, label } => Op::Prep(bit(qubit), label),
            Gate::H(q) => Op::H(bit(q)),
            Gate::S(q) => Op::S(bit(q)),
            Gate::Sdg(q) => Op::Sdg(bit(q)),
            Gate::X(q) => Op::X(bit(q)),
            Gate::Cz(a, b) => Op::Cz(bit(a), bit(b)),
        })
        .collect();
    let (p1, p2) = noise.map_or((0.0, 0.0), |m| (m.p1, m.p2));
    Ok(Compiled { ops, p1, p2 })
}

impl Compiled {
    fn expectation(&self, mut f: Frame) -> f64 {
        let mut amp = 1.0;
        for op in self.ops.iter().rev() {
            match *op {
                Op::Prep(b, label) => {
                    amp *= label.pauli_expectation(f.letter(b));
                    f.x &= !b;
                    f.z &= !b;
                }
                Op::H(b) | Op::S(b) | Op::Sdg(b) | Op::X(b) => {
                    if self.p1 > 0.0 && f.touches(b) {
                        amp *= 1.0 - self.p1;
                    }
                    match *op {
                        Op::H(_) => f.h(b),
                        // U† P U is the forward conjugation by the inverse gate.
                        Op::S(_) => f.sdg(b),
                        Op::Sdg(_) => f.s(b),
                        _ => f.xgate(b),
                    }
                }
                Op::Cz(a, b) => {
                    if self.p2 > 0.0 && f.touches(a | b) {
                        amp *= 1.0 - self.p2;
                    }
                    f.cz(a, b);
                }
            }
            if amp == 0.0 {
                return 0.0;
            }
        }
        // untouched qubits start in |0>
        if f.x != 0 {
            return 0.0;
        }
        if f.neg {
            -amp
        } else {
            amp
        }
    }
}

fn frame_of(p: &PauliString) -> Frame {
    let n = p.len();
    let mut f = Frame { x: 0, z: 0, neg: p.phase() < 0.0 };
    for (q, &l) in p.letters().iter().enumerate() {
        let b = 1u64 << (n - 1 - q);
        match l {
            Pauli::I => {}
            Pauli::X => f.x |= b,
            Pauli::Z => f.z |= b,
            Pauli::Y => {
                f.x |= b;
                f.z |= b;
            }
        }
    }
    f
}

/// Exact `Tr(rho P)` for the final state of a Clifford circuit under `noise`.
pub fn frame_expectation(c: &Circuit, noise: Option<&NoiseModel>, p: &PauliString) -> Result<f64> {
    if p.len() != c.n_qubits() {
        return Err(Error::SizeMismatch { expected: c.n_qubits(), found: p.len() });
    }
    Ok(compile(c, noise)?.expectation(frame_of(p)))
}

/// Exact outcome distribution of `c` in its measurement setting, assembled from all
/// `2^n` parity expectations by an inverse Walsh–Hadamard transform.
pub fn frame_distribution(c: &Circuit, noise: Option<&NoiseModel>) -> Result<Distribution> {
    let n = c.n_qubits();
    if n > MAX_FRAME_DISTRIBUTION_QUBITS {
        return Err(Error::RegisterTooLarge { n, max: MAX_FRAME_DISTRIBUTION_QUBITS });
    }
    let compiled = compile(c, noise)?;
    let (mut xs, mut zs) = (0u64, 0u64);
    for (q, b) in c.meas().bases().iter().enumerate() {
        let bit = 1u64 << (n - 1 - q);
        match b {
            Basis::X => xs |= bit,
            Basis::Z => zs |= bit,
            Basis::Y => {
                xs |= bit;
                zs |= bit;
            }
        }
    }
    let eval = |m: usize| compiled.expectation(Frame { x: xs & m as u64, z: zs & m as u64, neg: false });
    let len = 1usize << n;
    #[cfg(feature = "parallel")]
    let mut e: Vec<f64> = {
        use rayon::prelude::*;
        (0..len).into_par_iter().map(eval).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let mut e: Vec<f64> = (0..len).map(eval).collect();
    crate::qstate::dist_walsh_hadamard(&mut e);
    let scale = 1.0 / len as f64;
    e.iter_mut().for_each(|v| *v = (*v * scale).max(0.0));
    let sum: f64 = e.iter().sum();
    e.iter_mut().for_each(|v| *v /= sum);
    Distribution::new(e)
}

/// Fidelity `<psi|rho|psi>` with the stabilizer state fixed by `generators`, as the
/// average expectation over the whole stabilizer group (`2^n` elements).
pub fn stabilizer_fidelity(c: &Circuit, noise: Option<&NoiseModel>, generators: &[PauliString]) -> Result<f64> {
    let n = c.n_qubits();
    if generators.len() != n {
        return Err(Error::SizeMismatch { expected: n, found: generators.len() });
    }
    if n > MAX_FRAME_DISTRIBUTION_QUBITS {
        return Err(Error::RegisterTooLarge { n, max: MAX_FRAME_DISTRIBUTION_QUBITS });
    }
    let compiled = compile(c, noise)?;
    // Walk the group in Gray-code order so each element is one multiplication away
    // from the previous one.
    let mut cur = PauliString::identity(n)?;
    let mut total = compiled.expectation(frame_of(&cur));
    for i in 1..(1usize << n) {
        let flip = i.trailing_zeros() as usize;
        cur = cur.mul(&generators[flip])?;
        total += compiled.expectation(frame_of(&cur));
    }
    Ok(total / (1usize << n) as f64)
}
