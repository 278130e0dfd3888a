use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::matrix::{ComplexMatrix, Gate1};
use super::pauli::{Pauli, PauliString};
use super::{bit_of, qubits_for_dim};
use crate::{tol, Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Phase picked up by `|idx>` under `pauli` together with the flipped index:
/// `P |idx> = phase * |idx ^ flip>`.
fn pauli_action(p: &PauliString, n: usize, idx: usize) -> (usize, Complex64) {
    let mut flip = 0usize;
    let mut phase = Complex64::new(p.phase(), 0.0);
    for (q, &letter) in p.letters().iter().enumerate() {
        let bit = 1usize << bit_of(q, n);
        let one = idx & bit != 0;
        match letter {
            Pauli::I => {}
            Pauli::X => flip |= bit,
            Pauli::Y => {
                flip |= bit;
                // Y|0> = i|1>, Y|1> = -i|0>
                phase *= if one { Complex64::new(0.0, -1.0) } else { Complex64::new(0.0, 1.0) };
            }
            Pauli::Z => {
                if one {
                    phase = -phase;
                }
            }
        }
    }
    (idx ^ flip, phase)
}

/// Pure state of an `n`-qubit register.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// `|0...0>`.
    pub fn zero(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidRegister("zero-qubit register".into()));
        }
        if n > 30 {
            return Err(Error::RegisterTooLarge { n, max: 30 });
        }
        let mut amps = vec![ZERO; 1 << n];
        amps[0] = Complex64::new(1.0, 0.0);
        Ok(Self { n, amps })
    }

    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let n = qubits_for_dim(amps.len())?;
        if n == 0 {
            return Err(Error::InvalidRegister("zero-qubit register".into()));
        }
        let norm2: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (libm::sqrt(norm2) - 1.0).abs() > tol::EXACT {
            return Err(Error::NotPhysical(format!("state norm {} != 1", libm::sqrt(norm2))));
        }
        Ok(Self { n, amps })
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn apply_1q(&mut self, qubit: usize, u: &Gate1) -> Result<()> {
        self.check_qubit(qubit)?;
        let stride = 1usize << bit_of(qubit, self.n);
        for i in 0..self.amps.len() {
            if i & stride == 0 {
                let a0 = self.amps[i];
                let a1 = self.amps[i | stride];
                self.amps[i] = u[0][0] * a0 + u[0][1] * a1;
                self.amps[i | stride] = u[1][0] * a0 + u[1][1] * a1;
            }
        }
        Ok(())
    }

    pub fn apply_cz(&mut self, a: usize, b: usize) -> Result<()> {
        self.check_qubit(a)?;
        self.check_qubit(b)?;
        let mask = (1usize << bit_of(a, self.n)) | (1usize << bit_of(b, self.n));
        for (i, amp) in self.amps.iter_mut().enumerate() {
            if i & mask == mask {
                *amp = -*amp;
            }
        }
        Ok(())
    }

    /// `<psi|other>`.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        if self.n != other.n {
            return Err(Error::SizeMismatch { expected: self.n, found: other.n });
        }
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn expectation(&self, p: &PauliString) -> Result<f64> {
        if p.len() != self.n {
            return Err(Error::SizeMismatch { expected: self.n, found: p.len() });
        }
        let mut acc = ZERO;
        for (i, a) in self.amps.iter().enumerate() {
            let (j, phase) = pauli_action(p, self.n, i);
            acc += self.amps[j].conj() * phase * a;
        }
        check_real(acc)
    }

    pub fn to_density(&self) -> DensityOperator {
        let d = self.amps.len();
        let mut data = vec![ZERO; d * d];
        for r in 0..d {
            for c in 0..d {
                data[r * d + c] = self.amps[r] * self.amps[c].conj();
            }
        }
        DensityOperator { n: self.n, m: ComplexMatrix::from_row_major(d, data).expect("power-of-two dimension") }
    }

    fn check_qubit(&self, qubit: usize) -> Result<()> {
        if qubit >= self.n {
            return Err(Error::QubitOutOfRange { qubit, n: self.n });
        }
        Ok(())
    }
}

fn check_real(z: Complex64) -> Result<f64> {
    if z.im.abs() > tol::STRUCTURAL {
        return Err(Error::ImaginaryExpectation(z.im));
    }
    Ok(z.re)
}

/// Mixed state of an `n`-qubit register.
///
/// Every constructor that accepts external data validates Hermiticity, unit
/// trace and the eigenvalue floor. Operators produced by the crate's own
/// channels are re-checked in debug builds.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    n: usize,
    m: ComplexMatrix,
}

impl DensityOperator {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        let rho = Self { n: m.n_qubits(), m };
        if rho.n == 0 {
            return Err(Error::InvalidRegister("zero-qubit register".into()));
        }
        rho.validate()?;
        Ok(rho)
    }

    pub fn maximally_mixed(n: usize) -> Result<Self> {
        let d = 1usize << n;
        let m = ComplexMatrix::identity(d)?.scale(Complex64::new(1.0 / d as f64, 0.0));
        Ok(Self { n, m })
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.m
    }

    /// Hermitian to 1e-10, trace one to 1e-10, smallest eigenvalue above -1e-10.
    pub fn validate(&self) -> Result<()> {
        if !self.m.is_hermitian(tol::STRUCTURAL) {
            return Err(Error::NotPhysical("matrix is not Hermitian".into()));
        }
        let tr = self.m.trace();
        if (tr.re - 1.0).abs() > tol::STRUCTURAL || tr.im.abs() > tol::STRUCTURAL {
            return Err(Error::NotPhysical(format!("trace {tr} != 1")));
        }
        let min = self.m.hermitian_eigenvalues()[0];
        if min < -tol::STRUCTURAL {
            return Err(Error::NotPhysical(format!("negative eigenvalue {min:e}")));
        }
        Ok(())
    }

    #[inline]
    pub(crate) fn debug_validate(&self) {
        #[cfg(debug_assertions)]
        if self.n <= 8 {
            if let Err(e) = self.validate() {
                panic!("density operator invariant violated: {e}");
            }
        }
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.m.dim()).map(|i| self.m.get(i, i).re).collect()
    }

    /// `rho -> U rho U†` for a single-qubit `U`.
    pub fn apply_1q(&mut self, qubit: usize, u: &Gate1) -> Result<()> {
        self.check_qubit(qubit)?;
        let d = self.m.dim();
        let stride = 1usize << bit_of(qubit, self.n);
        let data = self.m.as_mut_slice();
        // rows
        for c in 0..d {
            for r in 0..d {
                if r & stride == 0 {
                    let a0 = data[r * d + c];
                    let a1 = data[(r | stride) * d + c];
                    data[r * d + c] = u[0][0] * a0 + u[0][1] * a1;
                    data[(r | stride) * d + c] = u[1][0] * a0 + u[1][1] * a1;
                }
            }
        }
        // columns, multiplying by U† on the right
        for r in 0..d {
            for c in 0..d {
                if c & stride == 0 {
                    let a0 = data[r * d + c];
                    let a1 = data[r * d + (c | stride)];
                    data[r * d + c] = a0 * u[0][0].conj() + a1 * u[0][1].conj();
                    data[r * d + (c | stride)] = a0 * u[1][0].conj() + a1 * u[1][1].conj();
                }
            }
        }
        Ok(())
    }

    pub fn apply_cz(&mut self, a: usize, b: usize) -> Result<()> {
        self.check_qubit(a)?;
        self.check_qubit(b)?;
        let mask = (1usize << bit_of(a, self.n)) | (1usize << bit_of(b, self.n));
        let d = self.m.dim();
        let sign = |i: usize| if i & mask == mask { -1.0 } else { 1.0 };
        let data = self.m.as_mut_slice();
        for r in 0..d {
            for c in 0..d {
                let s = sign(r) * sign(c);
                if s < 0.0 {
                    data[r * d + c] = -data[r * d + c];
                }
            }
        }
        Ok(())
    }

    /// Depolarising channel on `support`:
    /// `rho -> (1 - p) rho + p (I/2^k ⊗ Tr_support rho)`.
    pub fn depolarize(&mut self, support: &[usize], p: f64) -> Result<()> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidProbability(p));
        }
        for &q in support {
            self.check_qubit(q)?;
        }
        if p == 0.0 {
            return Ok(());
        }
        let smask: usize = support.iter().map(|&q| 1usize << bit_of(q, self.n)).fold(0, |a, b| a | b);
        let k = smask.count_ones();
        let d = self.m.dim();
        let norm = 1.0 / f64::from(1u32 << k);
        let old = self.m.clone();
        let subs: Vec<usize> = subsets_of(smask).collect();
        for r in 0..d {
            for c in 0..d {
                let mut v = old.get(r, c) * (1.0 - p);
                if (r ^ c) & smask == 0 {
                    let (r0, c0) = (r & !smask, c & !smask);
                    let traced: Complex64 = subs.iter().map(|&s| old.get(r0 | s, c0 | s)).sum();
                    v += traced * (p * norm);
                }
                self.m.set(r, c, v);
            }
        }
        Ok(())
    }

    /// Reduced state on `keep` (sorted and de-duplicated; kept qubits retain their relative order).
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityOperator> {
        let mut keep: Vec<usize> = keep.to_vec();
        keep.sort_unstable();
        keep.dedup();
        if keep.is_empty() {
            return Err(Error::InvalidRegister("partial trace must keep at least one qubit".into()));
        }
        for &q in &keep {
            self.check_qubit(q)?;
        }
        let n = self.n;
        let m = keep.len();
        let traced: Vec<usize> = (0..n).filter(|q| !keep.contains(q)).collect();
        let embed = |sub: usize, qubits: &[usize]| -> usize {
            let k = qubits.len();
            qubits
                .iter()
                .enumerate()
                .filter(|(j, _)| sub & (1 << (k - 1 - j)) != 0)
                .map(|(_, &q)| 1usize << bit_of(q, n))
                .fold(0, |a, b| a | b)
        };
        let dk = 1usize << m;
        let mut out = ComplexMatrix::zeros(dk)?;
        for r in 0..dk {
            let rf = embed(r, &keep);
            for c in 0..dk {
                let cf = embed(c, &keep);
                let mut acc = ZERO;
                for t in 0..(1usize << traced.len()) {
                    let tf = embed(t, &traced);
                    acc += self.m.get(rf | tf, cf | tf);
                }
                out.set(r, c, acc);
            }
        }
        let rho = DensityOperator { n: m, m: out };
        rho.debug_validate();
        Ok(rho)
    }

    /// `Tr(rho P)`; errors if the result carries an imaginary part above 1e-10.
    pub fn expectation(&self, p: &PauliString) -> Result<f64> {
        if p.len() != self.n {
            return Err(Error::SizeMismatch { expected: self.n, found: p.len() });
        }
        // Tr(rho P) = sum_j rho[j', j] * phase_j where P|j> = phase_j |j'>
        let mut acc = ZERO;
        for j in 0..self.m.dim() {
            let (jp, phase) = pauli_action(p, self.n, j);
            acc += self.m.get(j, jp) * phase;
        }
        check_real(acc)
    }

    /// `<psi| rho |psi>`.
    pub fn fidelity_with(&self, psi: &StateVector) -> Result<f64> {
        if psi.n_qubits() != self.n {
            return Err(Error::SizeMismatch { expected: self.n, found: psi.n_qubits() });
        }
        let a = psi.amplitudes();
        let d = self.m.dim();
        let mut acc = ZERO;
        for r in 0..d {
            for c in 0..d {
                acc += a[r].conj() * self.m.get(r, c) * a[c];
            }
        }
        check_real(acc)
    }

    fn check_qubit(&self, qubit: usize) -> Result<()> {
        if qubit >= self.n {
            return Err(Error::QubitOutOfRange { qubit, n: self.n });
        }
        Ok(())
    }
}

/// All sub-masks of `mask`, including 0 and `mask`.
fn subsets_of(mask: usize) -> impl Iterator<Item = usize> {
    let mut next = Some(0usize);
    core::iter::from_fn(move || {
        let cur = next?;
        next = if cur == mask { None } else { Some(((cur | !mask).wrapping_add(1)) & mask) };
        Some(cur)
    })
}
