//! Symmetric tridiagonal eigenproblems via implicit QL with Wilkinson shifts.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Real symmetric tridiagonal matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalMatrix<T> {
    diag: Vec<T>,
    offdiag: Vec<T>,
}

impl<T: Real> TridiagonalMatrix<T> {
    pub fn new(diag: Vec<T>, offdiag: Vec<T>) -> Result<Self> {
        if diag.is_empty() {
            return Err(Error::InvalidParameter {
                name: "diag",
                reason: "must have at least one entry".into(),
            });
        }
        if offdiag.len() + 1 != diag.len() {
            return Err(Error::DimensionMismatch {
                expected: diag.len() - 1,
                actual: offdiag.len(),
            });
        }
        Ok(Self { diag, offdiag })
    }

    pub fn diag(&self) -> &[T] {
        &self.diag
    }

    pub fn offdiag(&self) -> &[T] {
        &self.offdiag
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    /// Entry `(i, j)`.
    pub fn get(&self, i: usize, j: usize) -> T {
        if i == j {
            self.diag[i]
        } else if i + 1 == j {
            self.offdiag[i]
        } else if j + 1 == i {
            self.offdiag[j]
        } else {
            T::zero()
        }
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> T {
        self.diag
            .iter()
            .chain(&self.offdiag)
            .fold(T::zero(), |m, x| m.max(x.abs()))
    }
}

/// Eigenvalues ascending; `vectors[k]` is the unit eigenvector of `values[k]`.
#[derive(Debug, Clone)]
pub struct TridiagonalEigen<T> {
    pub values: Vec<T>,
    pub vectors: Vec<Vec<T>>,
}

pub fn tridiagonal_eigen<T: Real>(t: &TridiagonalMatrix<T>) -> Result<TridiagonalEigen<T>> {
    let n = t.dim();
    let mut d = t.diag.clone();
    let mut e = padded(&t.offdiag);
    let mut z = vec![T::zero(); n * n];
    for i in 0..n {
        z[i * n + i] = T::one();
    }
    implicit_ql(&mut d, &mut e, Some(&mut z))?;
    let order = ascending_order(&d);
    let values = order.iter().map(|&k| d[k]).collect();
    let vectors = order
        .iter()
        .map(|&k| (0..n).map(|i| z[i * n + k]).collect())
        .collect();
    Ok(TridiagonalEigen { values, vectors })
}

/// Eigenvalues only, ascending.
pub fn tridiagonal_eigenvalues<T: Real>(t: &TridiagonalMatrix<T>) -> Result<Vec<T>> {
    let mut d = t.diag.clone();
    let mut e = padded(&t.offdiag);
    implicit_ql(&mut d, &mut e, None)?;
    d.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
    Ok(d)
}

fn padded<T: Real>(offdiag: &[T]) -> Vec<T> {
    let mut e = offdiag.to_vec();
    e.push(T::zero());
    e
}

pub(crate) fn ascending_order<T: Real>(values: &[T]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| {
        values[a]
            .partial_cmp(&values[b])
            .expect("finite eigenvalues")
    });
    order
}

const MAX_QL_SWEEPS: usize = 60;

/// Diagonalizes the tridiagonal `(d, e)` in place.
///
/// `e[i]` couples `i` and `i + 1`; `e` has length `n` with `e[n-1]` unused.
/// When `z` is an `n × n` row-major matrix its columns are rotated along, so
/// passing the identity yields eigenvectors and passing a Householder `Q`
/// yields eigenvectors of the original dense matrix.
pub(crate) fn implicit_ql<T: Real>(
    d: &mut [T],
    e: &mut [T],
    mut z: Option<&mut [T]>,
) -> Result<()> {
    let n = d.len();
    debug_assert_eq!(e.len(), n);
    let zero = T::zero();
    let one = T::one();
    let two = T::lit(2.0);
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= T::epsilon() * dd || e[m] == zero {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > MAX_QL_SWEEPS {
                return Err(Error::NoConvergence {
                    method: "implicit QL",
                    iterations: iter,
                    last_energy: d[l].as_f64(),
                    residual: e[l].abs().as_f64(),
                    last_vector: Vec::new(),
                });
            }
            let mut g = (d[l + 1] - d[l]) / (two * e[l]);
            let mut r = g.hypot(one);
            let signed_r = if g >= zero { r.abs() } else { -r.abs() };
            g = d[m] - d[l] + e[l] / (g + signed_r);
            let (mut s, mut c, mut p) = (one, one, zero);
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == zero {
                    d[i + 1] -= p;
                    e[m] = zero;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + two * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if let Some(z) = z.as_deref_mut() {
                    for k in 0..n {
                        let row = k * n;
                        let f = z[row + i + 1];
                        z[row + i + 1] = s * z[row + i] + c * f;
                        z[row + i] = c * z[row + i] - s * f;
                    }
                }
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = zero;
        }
    }
    Ok(())
}
