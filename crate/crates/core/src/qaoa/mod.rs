//! QAOA MaxCut ansatz networks on random regular graphs.
//!
//! The network is the closed amplitude `⟨0…0| U |0…0⟩` with
//! `U = Π_{l=p..1} [RX(β_l)^{⊗n} · Π_{uv} ZZ(γ_l)] · H^{⊗n}`.
//! Every wire segment between two consecutive operations on a qubit is one
//! size-2 index. Gate conventions: `ZZ(γ) = exp(−iγ Z⊗Z)`,
//! `RX(β) = cos(β/2) I − i sin(β/2) X`.

mod regular;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::network::{Endpoints, TensorNetwork};
use crate::oracle::{Circuit, DenseTensor, Gate};
use crate::real::Real;

pub use regular::random_regular_graph;

#[derive(Debug, Clone, PartialEq)]
pub struct QaoaSpec {
    pub qubits: usize,
    pub degree: usize,
    pub layers: usize,
    /// Radians, one per layer.
    pub gammas: Vec<f64>,
    pub betas: Vec<f64>,
    /// Seed of the random regular graph.
    pub seed: u64,
}

impl QaoaSpec {
    /// Default angles `γ_l = 0.4·l`, `β_l = 0.7/l`.
    pub fn new(qubits: usize, degree: usize, layers: usize, seed: u64) -> Self {
        Self {
            qubits,
            degree,
            layers,
            gammas: (1..=layers).map(|l| 0.4 * l as f64).collect(),
            betas: (1..=layers).map(|l| 0.7 / l as f64).collect(),
            seed,
        }
    }

    pub fn with_angles(mut self, gammas: Vec<f64>, betas: Vec<f64>) -> Self {
        self.gammas = gammas;
        self.betas = betas;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.layers == 0 {
            return Err(Error::Infeasible("at least one layer is required".into()));
        }
        if self.gammas.len() != self.layers || self.betas.len() != self.layers {
            return Err(Error::Infeasible(format!(
                "{} layers need {} gammas and betas, got {} and {}",
                self.layers,
                self.layers,
                self.gammas.len(),
                self.betas.len()
            )));
        }
        if self.degree >= self.qubits {
            return Err(Error::Infeasible(format!(
                "degree {} must be below qubit count {}",
                self.degree, self.qubits
            )));
        }
        if !(self.qubits * self.degree).is_multiple_of(2) {
            return Err(Error::Infeasible(format!(
                "qubits·degree = {} is odd",
                self.qubits * self.degree
            )));
        }
        Ok(())
    }

    pub fn graph(&self) -> Result<Vec<(usize, usize)>> {
        self.validate()?;
        random_regular_graph(self.qubits, self.degree, self.seed)
    }

    /// `3n + p(nd/2 + n)`.
    pub fn tensor_count(&self) -> usize {
        let n = self.qubits;
        3 * n + self.layers * (n * self.degree / 2 + n)
    }

    /// `n(2 + p(d + 1))`.
    pub fn index_count(&self) -> usize {
        self.qubits * (2 + self.layers * (self.degree + 1))
    }
}

fn c<T: Real>(re: f64, im: f64) -> Complex<T> {
    Complex::new(T::of(re), T::of(im))
}

pub fn hadamard<T: Real>() -> [[Complex<T>; 2]; 2] {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    [[c(h, 0.0), c(h, 0.0)], [c(h, 0.0), c(-h, 0.0)]]
}

pub fn rx<T: Real>(beta: f64) -> [[Complex<T>; 2]; 2] {
    let (s, co) = (beta / 2.0).sin_cos();
    [[c(co, 0.0), c(0.0, -s)], [c(0.0, -s), c(co, 0.0)]]
}

/// Diagonal in the `|ab⟩ = 2a + b` basis.
pub fn zz<T: Real>(gamma: f64) -> [[Complex<T>; 4]; 4] {
    let (s, co) = gamma.sin_cos();
    let same = c(co, -s);
    let diff = c(co, s);
    let o = c(0.0, 0.0);
    [
        [same, o, o, o],
        [o, diff, o, o],
        [o, o, diff, o],
        [o, o, o, same],
    ]
}

/// The ansatz as a gate list for the state-vector simulator.
pub fn circuit<T: Real>(spec: &QaoaSpec) -> Result<Circuit<T>> {
    let edges = spec.graph()?;
    let n = spec.qubits;
    let mut gates: Vec<Gate<T>> = (0..n)
        .map(|q| Gate::One {
            qubit: q,
            matrix: hadamard(),
        })
        .collect();
    for l in 0..spec.layers {
        for &(u, v) in &edges {
            gates.push(Gate::Two {
                qubits: (u, v),
                matrix: zz(spec.gammas[l]),
            });
        }
        for q in 0..n {
            gates.push(Gate::One {
                qubit: q,
                matrix: rx(spec.betas[l]),
            });
        }
    }
    Ok(Circuit { qubits: n, gates })
}

enum Op<T> {
    Ket(usize),
    Bra(usize),
    One(usize, [[Complex<T>; 2]; 2]),
    Two(usize, usize, [[Complex<T>; 4]; 4]),
}

/// Closed amplitude network with value blocks. Tensors are emitted in time
/// order: kets, Hadamards, each layer's ZZ then RX tensors, bras. Gate value
/// blocks list input indices before output indices.
pub fn build_network<T: Real>(spec: &QaoaSpec) -> Result<TensorNetwork<T>> {
    let edges = spec.graph()?;
    let n = spec.qubits;
    let mut ops: Vec<(String, Op<T>)> = Vec::with_capacity(spec.tensor_count());
    for q in 0..n {
        ops.push((format!("ket[q={q}]"), Op::Ket(q)));
    }
    for q in 0..n {
        ops.push((format!("H[q={q}]"), Op::One(q, hadamard())));
    }
    for l in 0..spec.layers {
        for &(u, v) in &edges {
            ops.push((
                format!("ZZ[l={},({u},{v})]", l + 1),
                Op::Two(u, v, zz(spec.gammas[l])),
            ));
        }
        for q in 0..n {
            ops.push((
                format!("RX[l={},q={q}]", l + 1),
                Op::One(q, rx(spec.betas[l])),
            ));
        }
    }
    for q in 0..n {
        ops.push((format!("bra[q={q}]"), Op::Bra(q)));
    }

    let mut net = TensorNetwork::with_tensors(ops.len());
    let mut ins: Vec<Vec<usize>> = vec![Vec::new(); ops.len()];
    let mut outs: Vec<Vec<usize>> = vec![Vec::new(); ops.len()];
    // (tensor, output slot) holding the open end of each wire
    let mut last = vec![(usize::MAX, 0); n];
    for (t, (label, op)) in ops.iter().enumerate() {
        net.set_label(t, label.clone());
        let (reads, writes) = match *op {
            Op::Ket(q) => (vec![], vec![q]),
            Op::Bra(q) => (vec![q], vec![]),
            Op::One(q, _) => (vec![q], vec![q]),
            Op::Two(u, v, _) => (vec![u, v], vec![u, v]),
        };
        for q in reads {
            let (pt, slot) = last[q];
            let i = net.add_index(T::one(), Endpoints::Pair(pt, t))?;
            outs[pt][slot] = i;
            ins[t].push(i);
        }
        for q in writes {
            last[q] = (t, outs[t].len());
            outs[t].push(usize::MAX);
        }
    }

    let one = c::<T>(1.0, 0.0);
    let zero = c::<T>(0.0, 0.0);
    for (t, (_, op)) in ops.iter().enumerate() {
        let block = match op {
            Op::Ket(_) => DenseTensor::new(outs[t].clone(), vec![1], vec![one, zero])?,
            Op::Bra(_) => DenseTensor::new(ins[t].clone(), vec![1], vec![one, zero])?,
            Op::One(_, m) => {
                let values = (0..4).map(|k| m[k & 1][k >> 1]).collect();
                DenseTensor::new(vec![ins[t][0], outs[t][0]], vec![1; 2], values)?
            }
            Op::Two(_, _, m) => {
                // flat entry = 4·(2·in_u + in_v) + (2·out_u + out_v)
                let values = (0..16).map(|k| m[k & 3][k >> 2]).collect();
                let idx = vec![ins[t][0], ins[t][1], outs[t][0], outs[t][1]];
                DenseTensor::new(idx, vec![1; 4], values)?
            }
        };
        net.set_value(t, block)?;
    }
    Ok(net)
}

fn bad_label(t: usize, label: &str) -> Error {
    Error::Schema(format!("tensor {t} has unrecognised QAOA label `{label}`"))
}

fn parse_qubit(field: &str) -> Option<usize> {
    field.strip_prefix("q=")?.parse().ok()
}

/// Rebuild the gate sequence of a network produced by [`build_network`],
/// reading gate kinds and qubits from labels and matrices from value blocks.
/// Caps must be `|0⟩`.
pub fn circuit_from_network<T: Real>(net: &TensorNetwork<T>) -> Result<Circuit<T>> {
    let label = |t: usize| net.tensor(t).label.as_deref().unwrap_or("");
    let qubits = (0..net.num_tensors())
        .filter(|&t| label(t).starts_with("ket["))
        .count();
    let mut gates = Vec::new();
    for t in 0..net.num_tensors() {
        let text = label(t);
        let (kind, rest) = text.split_once('[').ok_or_else(|| bad_label(t, text))?;
        let body = rest.strip_suffix(']').ok_or_else(|| bad_label(t, text))?;
        let value = net.tensor(t).value().ok_or(Error::MissingValue(t))?;
        let check_qubit = |q: usize| {
            if q < qubits {
                Ok(q)
            } else {
                Err(bad_label(t, text))
            }
        };
        match kind {
            "ket" | "bra" => {
                parse_qubit(body)
                    .map(check_qubit)
                    .ok_or_else(|| bad_label(t, text))??;
                let zero = Complex::new(T::zero(), T::zero());
                if value.rank() != 1 || value.values() != [Complex::new(T::one(), T::zero()), zero]
                {
                    return Err(Error::InvalidValue {
                        tensor: t,
                        reason: "boundary tensor is not |0⟩".into(),
                    });
                }
            }
            "H" | "RX" => {
                let field = if kind == "H" {
                    Some(body)
                } else {
                    body.split_once(',').map(|(_, q)| q)
                };
                let q = field
                    .and_then(parse_qubit)
                    .ok_or_else(|| bad_label(t, text))?;
                let q = check_qubit(q)?;
                if value.rank() != 2 {
                    return Err(Error::InvalidValue {
                        tensor: t,
                        reason: "one-qubit gate needs rank 2".into(),
                    });
                }
                let mut matrix = [[Complex::new(T::zero(), T::zero()); 2]; 2];
                for (o, row) in matrix.iter_mut().enumerate() {
                    for (i, m) in row.iter_mut().enumerate() {
                        *m = value.get(&[i, o]);
                    }
                }
                gates.push(Gate::One { qubit: q, matrix });
            }
            "ZZ" => {
                let pair = body
                    .split_once(",(")
                    .and_then(|(_, p)| p.strip_suffix(')'))
                    .and_then(|p| p.split_once(','))
                    .and_then(|(u, v)| Some((u.parse().ok()?, v.parse().ok()?)))
                    .ok_or_else(|| bad_label(t, text))?;
                let (u, v) = (check_qubit(pair.0)?, check_qubit(pair.1)?);
                if value.rank() != 4 || u == v {
                    return Err(Error::InvalidValue {
                        tensor: t,
                        reason: "two-qubit gate needs rank 4 on distinct qubits".into(),
                    });
                }
                let mut matrix = [[Complex::new(T::zero(), T::zero()); 4]; 4];
                for (o, row) in matrix.iter_mut().enumerate() {
                    for (i, m) in row.iter_mut().enumerate() {
                        *m = value.get(&[i >> 1, i & 1, o >> 1, o & 1]);
                    }
                }
                gates.push(Gate::Two {
                    qubits: (u, v),
                    matrix,
                });
            }
            _ => return Err(bad_label(t, text)),
        }
    }
    Ok(Circuit { qubits, gates })
}
