//! Scalar coefficient kernels.
//!
//! Everything here is a pure function of exact rationals. The central object
//! is the family `f_z^(k)(t)` of one-variable functions with
//! `d/dt f_z^(k) = f_z^(k-1)` and `f_z^(0) = t^z log^m t`; every such function
//! has the shape `t^(z+k) * P(log t)`, and [`f_coeffs`] returns `P`.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{int, to_i64, Rational};

/// Highest power of `log` supported by the closed forms in this crate.
pub const MAX_LOG_POWER: u32 = 2;

/// `[z]_k`: `1` for `k = 0`, `1/((z+1)...(z+k))` for `k > 0` and
/// `z(z-1)...(z+k+1)` for `k < 0`.
pub fn bracket(z: &Rational, k: i64) -> Result<Rational> {
    if k > 0 {
        if let Some(zi) = to_i64(z) {
            if zi < 0 && k >= -zi {
                return Err(Error::UndefinedBracket {
                    z: z.clone(),
                    k,
                    index: None,
                });
            }
        }
        let mut den = Rational::one();
        for j in 1..=k {
            den *= z + int(j);
        }
        Ok(den.recip())
    } else {
        let mut prod = Rational::one();
        for j in 0..(-k) {
            prod *= z - int(j);
        }
        Ok(prod)
    }
}

/// Coordinate-wise product of brackets.
pub fn bracket_vec(z: &[Rational], k: &[i64]) -> Result<Rational> {
    if z.len() != k.len() {
        return Err(Error::DimensionMismatch {
            expected: z.len(),
            found: k.len(),
        });
    }
    let mut acc = Rational::one();
    for (index, (zi, &ki)) in z.iter().zip(k).enumerate() {
        let b = bracket(zi, ki).map_err(|e| match e {
            Error::UndefinedBracket { z, k, .. } => Error::UndefinedBracket {
                z,
                k,
                index: Some(index),
            },
            other => other,
        })?;
        acc *= b;
    }
    Ok(acc)
}

/// `s_{i,j}(z)`: the degree-`j` elementary symmetric polynomial evaluated at
/// `z, z-1, ..., z-i+1`. Zero when `j > i`.
pub fn elem_sym_shifted(i: u64, j: u64, z: &Rational) -> Rational {
    if j > i {
        return Rational::zero();
    }
    let j = j as usize;
    let mut e = vec![Rational::zero(); j + 1];
    e[0] = Rational::one();
    for r in 0..i {
        let x = z - int(r as i64);
        for d in (1..=j).rev() {
            let t = &e[d - 1] * &x;
            e[d] += t;
        }
    }
    e.swap_remove(j)
}

/// `m_{k,i}(z)`: the complete homogeneous polynomial of degree `i` evaluated
/// at `1/(z+1), ..., 1/(z+k)`.
pub fn mono_sum_shifted(k: u64, i: u64, z: &Rational) -> Result<Rational> {
    let i = i as usize;
    let mut h = vec![Rational::zero(); i + 1];
    h[0] = Rational::one();
    for r in 1..=k {
        let s = z + int(r as i64);
        if s.is_zero() {
            return Err(Error::PoleAtShift {
                z: z.clone(),
                shift: r,
            });
        }
        let x = s.recip();
        for d in 1..=i {
            let t = &h[d - 1] * &x;
            h[d] += t;
        }
    }
    Ok(h.swap_remove(i))
}

/// A polynomial in `log t` with exact coefficients, lowest degree first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct UniLogPoly {
    coeffs: Vec<Rational>,
}

impl UniLogPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UniLogPoly { coeffs }
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coefficient of `log^d t`.
    pub fn coeff(&self, d: usize) -> Rational {
        self.coeffs.get(d).cloned().unwrap_or_else(Rational::zero)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

fn falling(m: u32, i: u32) -> Rational {
    (0..i).fold(Rational::one(), |acc, r| acc * int((m - r) as i64))
}

/// The polynomial `P` with `f_z^(k)(t) = t^(z+k) P(log t)` for
/// `f_z^(0) = t^z log^m t`.
///
/// Fails with [`Error::MinimalityViolation`] when `z` is a negative integer
/// and `k >= -z`: that branch of the family picks up an extra power of `log`
/// and never occurs on the support sets the builders sum over.
pub fn f_coeffs(z: &Rational, k: i64, m: u32) -> Result<UniLogPoly> {
    if m > MAX_LOG_POWER {
        return Err(Error::Invalid(format!(
            "log power {m} exceeds the supported maximum {MAX_LOG_POWER}"
        )));
    }
    if let Some(zi) = to_i64(z) {
        if k > 0 && zi < 0 && k >= -zi {
            return Err(Error::MinimalityViolation(format!(
                "f_z^(k) requested at z = {zi}, k = {k}"
            )));
        }
    }
    let m_us = m as usize;
    let mut coeffs = vec![Rational::zero(); m_us + 1];
    match k {
        0 => coeffs[m_us] = Rational::one(),
        k if k < 0 => {
            let n = (-k) as u64;
            for i in 0..=m.min(n as u32) {
                coeffs[m_us - i as usize] = elem_sym_shifted(n, n - i as u64, z) * falling(m, i);
            }
        }
        k => {
            let lead = bracket(z, k)?;
            let mut sign = Rational::one();
            for i in 0..=m {
                coeffs[m_us - i as usize] =
                    &lead * &sign * falling(m, i) * mono_sum_shifted(k as u64, i as u64, z)?;
                sign = -sign;
            }
        }
    }
    Ok(UniLogPoly::new(coeffs))
}
