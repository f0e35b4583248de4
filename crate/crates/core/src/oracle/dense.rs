use num_complex::Complex;

use crate::error::{Error, Result};
use crate::real::Real;

/// Largest intermediate the executor will materialize, in log2 entries.
pub const MAX_DENSE_BITS: u32 = 26;

/// Dense complex tensor over power-of-two index dimensions.
///
/// Values are row-major over `indices`, index 0 slowest.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseTensor<T> {
    indices: Vec<usize>,
    bits: Vec<u32>,
    values: Vec<Complex<T>>,
}

impl<T: Real> DenseTensor<T> {
    /// `bits[k]` is log2 of the dimension of `indices[k]`.
    pub fn new(indices: Vec<usize>, bits: Vec<u32>, values: Vec<Complex<T>>) -> Result<Self> {
        if indices.len() != bits.len() {
            return Err(Error::Schema(format!(
                "{} indices but {} dimensions",
                indices.len(),
                bits.len()
            )));
        }
        for (a, &i) in indices.iter().enumerate() {
            if indices[..a].contains(&i) {
                return Err(Error::Schema(format!(
                    "index {i} listed twice in value block"
                )));
            }
        }
        let total: u32 = bits.iter().sum();
        if total > MAX_DENSE_BITS + 4 {
            return Err(Error::TooLarge {
                what: "dense tensor log2 size",
                size: total as usize,
                limit: (MAX_DENSE_BITS + 4) as usize,
            });
        }
        if values.len() != 1usize << total {
            return Err(Error::Schema(format!(
                "value block has {} entries, expected 2^{total}",
                values.len()
            )));
        }
        Ok(Self {
            indices,
            bits,
            values,
        })
    }

    pub fn scalar(value: Complex<T>) -> Self {
        Self {
            indices: Vec::new(),
            bits: Vec::new(),
            values: vec![value],
        }
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn bits(&self) -> &[u32] {
        &self.bits
    }

    pub fn values(&self) -> &[Complex<T>] {
        &self.values
    }

    pub fn rank(&self) -> usize {
        self.indices.len()
    }

    /// Entry at a multi-index given in the tensor's own index order.
    pub fn get(&self, coords: &[usize]) -> Complex<T> {
        let mut offset = 0usize;
        for (&c, &b) in coords.iter().zip(&self.bits) {
            offset = (offset << b) | c;
        }
        self.values[offset]
    }

    /// Pairwise contraction: sums over the shared indices and keeps the
    /// symmetric difference, `self`'s survivors first, then `other`'s.
    pub fn contract(&self, other: &Self) -> Result<Self> {
        let strides_a = strides(&self.bits);
        let strides_b = strides(&other.bits);

        let mut out_indices = Vec::new();
        let mut out_bits = Vec::new();
        // (bits, stride in self, stride in other) per output digit
        let mut out_axes = Vec::new();
        let mut shared_axes = Vec::new();

        for (p, &i) in self.indices.iter().enumerate() {
            match other.indices.iter().position(|&j| j == i) {
                Some(q) => {
                    if self.bits[p] != other.bits[q] {
                        return Err(Error::Schema(format!(
                            "index {i} has mismatched dimensions across tensors"
                        )));
                    }
                    shared_axes.push((self.bits[p], strides_a[p], strides_b[q]));
                }
                None => {
                    out_indices.push(i);
                    out_bits.push(self.bits[p]);
                    out_axes.push((self.bits[p], strides_a[p], 0));
                }
            }
        }
        for (q, &j) in other.indices.iter().enumerate() {
            if !self.indices.contains(&j) {
                out_indices.push(j);
                out_bits.push(other.bits[q]);
                out_axes.push((other.bits[q], 0, strides_b[q]));
            }
        }

        let out_total: u32 = out_bits.iter().sum();
        if out_total > MAX_DENSE_BITS {
            return Err(Error::TooLarge {
                what: "intermediate tensor log2 size",
                size: out_total as usize,
                limit: MAX_DENSE_BITS as usize,
            });
        }

        let shared_offsets = enumerate_offsets(&shared_axes);
        let out_len = 1usize << out_total;
        let mut values = Vec::with_capacity(out_len);
        let mut digits = vec![0usize; out_axes.len()];
        let (mut off_a, mut off_b) = (0usize, 0usize);
        for _ in 0..out_len {
            let mut acc = Complex::new(T::zero(), T::zero());
            for &(sa, sb) in &shared_offsets {
                acc = acc + self.values[off_a + sa] * other.values[off_b + sb];
            }
            values.push(acc);

            // odometer step, last axis fastest
            for ax in (0..out_axes.len()).rev() {
                let (b, sa, sb) = out_axes[ax];
                digits[ax] += 1;
                off_a += sa;
                off_b += sb;
                if digits[ax] < 1usize << b {
                    break;
                }
                off_a -= sa * digits[ax];
                off_b -= sb * digits[ax];
                digits[ax] = 0;
            }
        }

        Ok(Self {
            indices: out_indices,
            bits: out_bits,
            values,
        })
    }
}

fn strides(bits: &[u32]) -> Vec<usize> {
    let mut out = vec![0usize; bits.len()];
    let mut acc = 0u32;
    for k in (0..bits.len()).rev() {
        out[k] = 1usize << acc;
        acc += bits[k];
    }
    out
}

fn enumerate_offsets(axes: &[(u32, usize, usize)]) -> Vec<(usize, usize)> {
    let mut offsets = vec![(0usize, 0usize)];
    for &(b, sa, sb) in axes {
        let mut next = Vec::with_capacity(offsets.len() << b);
        for &(oa, ob) in &offsets {
            for d in 0..1usize << b {
                next.push((oa + d * sa, ob + d * sb));
            }
        }
        offsets = next;
    }
    offsets
}
