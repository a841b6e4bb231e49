use alloc::vec;
use alloc::vec::Vec;

use super::ComplexMatrix;
use crate::{Error, Result, C64};

/// Kronecker product; entry `[(i,k),(j,l)] = a[i,j] * b[k,l]`.
pub fn tensor(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (br, bc) = (b.rows(), b.cols());
    ComplexMatrix::from_fn(a.rows() * br, a.cols() * bc, |r, c| {
        a[(r / br, c / bc)] * b[(r % br, c % bc)]
    })
}

fn check_dims(dims: &[usize], total: usize) -> Result<()> {
    let prod: usize = dims.iter().product();
    if dims.is_empty() || dims.contains(&0) || prod != total {
        return Err(Error::DimensionMismatch {
            expected: total,
            found: prod,
        });
    }
    Ok(())
}

/// Sorted, deduplicated keep-set or an error.
fn normalize_keep(dims: &[usize], keep: &[usize]) -> Result<Vec<usize>> {
    if keep.is_empty() {
        return Err(Error::EmptyKeepSet);
    }
    let mut k = keep.to_vec();
    k.sort_unstable();
    k.dedup();
    if let Some(&bad) = k.iter().find(|&&i| i >= dims.len()) {
        return Err(Error::InvalidSubsystem(bad));
    }
    Ok(k)
}

/// `table[rest][kept] = flat index`, splitting every flat index into the
/// multi-index of the kept parties and that of the traced parties.
fn split_table(dims: &[usize], keep: &[usize]) -> (usize, usize, Vec<usize>) {
    let total: usize = dims.iter().product();
    let kept_dim: usize = keep.iter().map(|&i| dims[i]).product();
    let rest_dim = total / kept_dim;
    let mut table = vec![0usize; total];
    let mut digits = vec![0usize; dims.len()];
    for flat in 0..total {
        let mut rem = flat;
        for p in (0..dims.len()).rev() {
            digits[p] = rem % dims[p];
            rem /= dims[p];
        }
        let (mut k, mut r) = (0usize, 0usize);
        for (p, &d) in dims.iter().enumerate() {
            if keep.binary_search(&p).is_ok() {
                k = k * d + digits[p];
            } else {
                r = r * d + digits[p];
            }
        }
        table[r * kept_dim + k] = flat;
    }
    (kept_dim, rest_dim, table)
}

/// Partial trace of a square operator over all parties not in `keep`.
///
/// Kept parties retain their original relative order.
pub fn partial_trace(m: &ComplexMatrix, dims: &[usize], keep: &[usize]) -> Result<ComplexMatrix> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch {
            expected: m.rows(),
            found: m.cols(),
        });
    }
    check_dims(dims, m.rows())?;
    let keep = normalize_keep(dims, keep)?;
    let (kd, rd, table) = split_table(dims, &keep);
    let mut out = ComplexMatrix::zeros(kd, kd);
    for r in 0..rd {
        let block = &table[r * kd..(r + 1) * kd];
        for (i, &fi) in block.iter().enumerate() {
            for (j, &fj) in block.iter().enumerate() {
                out[(i, j)] += m[(fi, fj)];
            }
        }
    }
    Ok(out)
}

/// Reduced operator `Tr_rest |psi><psi|` computed directly from amplitudes.
pub fn reduced_state(amps: &[C64], dims: &[usize], keep: &[usize]) -> Result<ComplexMatrix> {
    check_dims(dims, amps.len())?;
    let keep = normalize_keep(dims, keep)?;
    let (kd, rd, table) = split_table(dims, &keep);
    let mut out = ComplexMatrix::zeros(kd, kd);
    for r in 0..rd {
        let block = &table[r * kd..(r + 1) * kd];
        for (i, &fi) in block.iter().enumerate() {
            let a = amps[fi];
            if a.re == 0.0 && a.im == 0.0 {
                continue;
            }
            for (j, &fj) in block.iter().enumerate() {
                out[(i, j)] += a * amps[fj].conj();
            }
        }
    }
    Ok(out)
}

/// Reorders the tensor factors of a vector: party `order[0]` of the input
/// becomes the slowest-varying party of the output.
pub fn permute_subsystems(amps: &[C64], dims: &[usize], order: &[usize]) -> Result<Vec<C64>> {
    check_dims(dims, amps.len())?;
    let mut seen = vec![false; dims.len()];
    if order.len() != dims.len() {
        return Err(Error::DimensionMismatch {
            expected: dims.len(),
            found: order.len(),
        });
    }
    for &p in order {
        if p >= dims.len() || seen[p] {
            return Err(Error::InvalidSubsystem(p));
        }
        seen[p] = true;
    }
    let mut strides = vec![1usize; dims.len()];
    for p in (0..dims.len().saturating_sub(1)).rev() {
        strides[p] = strides[p + 1] * dims[p + 1];
    }
    let mut out = vec![C64::new(0.0, 0.0); amps.len()];
    let mut digits = vec![0usize; dims.len()];
    for (flat_out, slot) in out.iter_mut().enumerate() {
        let mut rem = flat_out;
        for q in (0..order.len()).rev() {
            let d = dims[order[q]];
            digits[order[q]] = rem % d;
            rem /= d;
        }
        let src: usize = digits.iter().zip(&strides).map(|(d, s)| d * s).sum();
        *slot = amps[src];
    }
    Ok(out)
}

/// Applies `op` (a `dims[party] x dims[party]` matrix) to one party of a
/// multipartite vector, identity elsewhere.
pub fn apply_local(amps: &[C64], dims: &[usize], party: usize, op: &ComplexMatrix) -> Result<Vec<C64>> {
    check_dims(dims, amps.len())?;
    if party >= dims.len() {
        return Err(Error::InvalidSubsystem(party));
    }
    let d = dims[party];
    if op.rows() != d || op.cols() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: op.rows().max(op.cols()),
        });
    }
    let inner: usize = dims[party + 1..].iter().product();
    let outer: usize = dims[..party].iter().product();
    let mut out = vec![C64::new(0.0, 0.0); amps.len()];
    for o in 0..outer {
        for i in 0..inner {
            let base = o * d * inner + i;
            for r in 0..d {
                let mut acc = C64::new(0.0, 0.0);
                for c in 0..d {
                    acc += op[(r, c)] * amps[base + c * inner];
                }
                out[base + r * inner] = acc;
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmath::StateVector;
    use alloc::vec;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn identity_tensor_identity() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(tensor(&i2, &i2), ComplexMatrix::identity(4));
    }

    #[test]
    fn bell_marginal_is_maximally_mixed() {
        let h = core::f64::consts::FRAC_1_SQRT_2;
        let bell = vec![c(h), c(0.0), c(0.0), c(h)];
        let rho = ComplexMatrix::outer(&bell, &bell);
        let red = partial_trace(&rho, &[2, 2], &[0]).unwrap();
        assert!(red.max_abs_diff(&ComplexMatrix::identity(2).scale_real(0.5)) < 1e-15);
        let red_v = reduced_state(&bell, &[2, 2], &[1]).unwrap();
        assert!(red_v.max_abs_diff(&red) < 1e-15);
    }

    #[test]
    fn partial_trace_errors() {
        let m = ComplexMatrix::identity(4);
        assert_eq!(partial_trace(&m, &[2, 2], &[]), Err(Error::EmptyKeepSet));
        assert!(matches!(
            partial_trace(&m, &[2, 3], &[0]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert_eq!(partial_trace(&m, &[2, 2], &[2]), Err(Error::InvalidSubsystem(2)));
    }

    #[test]
    fn permute_swaps_factors() {
        let a = StateVector::basis(2, 1).unwrap();
        let b = StateVector::basis(3, 2).unwrap();
        let ab = a.tensor(&b);
        let ba = permute_subsystems(ab.amplitudes(), &[2, 3], &[1, 0]).unwrap();
        assert_eq!(ba, b.tensor(&a).into_amplitudes());
    }

    #[test]
    fn apply_local_on_middle_party() {
        let x = ComplexMatrix::from_vec(2, 2, vec![c(0.0), c(1.0), c(1.0), c(0.0)]).unwrap();
        let psi = StateVector::basis(8, 0).unwrap();
        let out = apply_local(psi.amplitudes(), &[2, 2, 2], 1, &x).unwrap();
        assert_eq!(out, StateVector::basis(8, 2).unwrap().into_amplitudes());
    }
}
