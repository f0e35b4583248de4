//! Plain state-vector simulation for small circuits.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::real::Real;

pub const MAX_QUBITS: usize = 24;

#[derive(Debug, Clone, PartialEq)]
pub enum Gate<T> {
    /// `matrix[out][in]`.
    One {
        qubit: usize,
        matrix: [[Complex<T>; 2]; 2],
    },
    /// Basis order `|ab⟩ = 2a + b` for `(a, b) = qubits`.
    Two {
        qubits: (usize, usize),
        matrix: [[Complex<T>; 4]; 4],
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Circuit<T> {
    pub qubits: usize,
    pub gates: Vec<Gate<T>>,
}

impl<T: Real> Circuit<T> {
    /// Final state after applying every gate to `|0…0⟩`. Qubit `q` is bit `q`
    /// of the basis index.
    pub fn simulate(&self) -> Result<Vec<Complex<T>>> {
        if self.qubits > MAX_QUBITS {
            return Err(Error::TooLarge {
                what: "state-vector qubit count",
                size: self.qubits,
                limit: MAX_QUBITS,
            });
        }
        let dim = 1usize << self.qubits;
        let zero = Complex::new(T::zero(), T::zero());
        let mut psi = vec![zero; dim];
        psi[0] = Complex::new(T::one(), T::zero());
        for gate in &self.gates {
            match gate {
                Gate::One { qubit, matrix } => {
                    let bit = 1usize << qubit;
                    for base in (0..dim).filter(|s| s & bit == 0) {
                        let (x0, x1) = (psi[base], psi[base | bit]);
                        psi[base] = matrix[0][0] * x0 + matrix[0][1] * x1;
                        psi[base | bit] = matrix[1][0] * x0 + matrix[1][1] * x1;
                    }
                }
                Gate::Two {
                    qubits: (a, b),
                    matrix,
                } => {
                    let (ba, bb) = (1usize << a, 1usize << b);
                    for base in (0..dim).filter(|s| s & (ba | bb) == 0) {
                        let idx = [base, base | bb, base | ba, base | ba | bb];
                        let x = idx.map(|i| psi[i]);
                        for (row, &i) in idx.iter().enumerate() {
                            psi[i] = (0..4).fold(zero, |acc, col| acc + matrix[row][col] * x[col]);
                        }
                    }
                }
            }
        }
        Ok(psi)
    }

    /// `⟨0…0| U |0…0⟩`.
    pub fn zero_amplitude(&self) -> Result<Complex<T>> {
        Ok(self.simulate()?[0])
    }
}
