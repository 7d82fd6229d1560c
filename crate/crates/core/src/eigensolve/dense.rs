//! Full spectral decomposition of small dense Hermitian matrices.
//!
//! Real symmetric input is reduced to tridiagonal form by Householder
//! reflections and finished with implicit QL. Complex Hermitian input is
//! diagonalized by cyclic two-sided Jacobi rotations. Both are sequences of
//! unitary similarity transforms `M → U†MU`.

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::scalar::{c, re, Real, C};

use super::tridiagonal::{ascending_order, implicit_ql};

/// Largest dimension [`dense_eigh`] accepts.
pub const DENSE_MAX_DIM: usize = 4096;

/// Eigenvalues ascending; column `k` of `vectors` belongs to `values[k]`.
#[derive(Debug, Clone)]
pub struct HermitianEigen<T> {
    pub values: Vec<T>,
    pub vectors: ComplexMatrix<T>,
}

impl<T: Real> HermitianEigen<T> {
    pub fn vector(&self, k: usize) -> Vec<C<T>> {
        self.vectors.column(k)
    }
}

fn check_input<T: Real>(m: &ComplexMatrix<T>) -> Result<()> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch {
            expected: m.rows(),
            actual: m.cols(),
        });
    }
    if m.rows() > DENSE_MAX_DIM {
        return Err(Error::SizeGuard {
            what: "matrix dimension",
            value: m.rows(),
            limit: DENSE_MAX_DIM,
        });
    }
    let defect = m.hermitian_defect();
    if defect > T::tol(1e-12) * m.max_abs().max(T::one()) {
        return Err(Error::NotHermitian {
            defect: defect.as_f64(),
        });
    }
    Ok(())
}

pub fn dense_eigh<T: Real>(m: &ComplexMatrix<T>) -> Result<HermitianEigen<T>> {
    check_input(m)?;
    let n = m.rows();
    if n == 0 {
        return Ok(HermitianEigen {
            values: Vec::new(),
            vectors: ComplexMatrix::zeros(0, 0),
        });
    }
    if m.is_real() {
        let mut a = m.real_parts();
        let (mut d, mut e, q) = householder_tridiagonalize(&mut a, n, true);
        let mut z = q.expect("accumulated reflector product");
        implicit_ql(&mut d, &mut e, Some(&mut z))?;
        let order = ascending_order(&d);
        let values = order.iter().map(|&k| d[k]).collect();
        let vectors = ComplexMatrix::from_fn(n, n, |i, j| re(z[i * n + order[j]]));
        Ok(HermitianEigen { values, vectors })
    } else {
        let (d, v) = jacobi_hermitian(m, true)?;
        let v = v.expect("accumulated rotations");
        let order = ascending_order(&d);
        let values = order.iter().map(|&k| d[k]).collect();
        let vectors = ComplexMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
        Ok(HermitianEigen { values, vectors })
    }
}

/// Eigenvalues only, ascending. Cheaper than [`dense_eigh`] by skipping vectors.
pub fn dense_eigvalsh<T: Real>(m: &ComplexMatrix<T>) -> Result<Vec<T>> {
    check_input(m)?;
    let n = m.rows();
    let mut d = if m.is_real() {
        let mut a = m.real_parts();
        let (mut d, mut e, _) = householder_tridiagonalize(&mut a, n, false);
        implicit_ql(&mut d, &mut e, None)?;
        d
    } else {
        jacobi_hermitian(m, false)?.0
    };
    d.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
    Ok(d)
}

/// `exp(−iHt)` built from the spectral decomposition of `h`.
pub fn unitary_evolution<T: Real>(h: &ComplexMatrix<T>, t: T) -> Result<ComplexMatrix<T>> {
    let eig = dense_eigh(h)?;
    let n = h.rows();
    let phases: Vec<C<T>> = eig
        .values
        .iter()
        .map(|&e| {
            let angle = -e * t;
            c(angle.cos(), angle.sin())
        })
        .collect();
    let v = &eig.vectors;
    Ok(ComplexMatrix::from_fn(n, n, |i, j| {
        (0..n).fold(re(T::zero()), |acc, k| {
            acc + v[(i, k)] * phases[k] * v[(j, k)].conj()
        })
    }))
}

/// Householder reduction of a real symmetric row-major matrix.
///
/// Returns the diagonal, the subdiagonal (padded to length `n`), and when
/// requested the orthogonal `Q` with `A = Q T Qᵀ`. `a` is overwritten.
pub(crate) fn householder_tridiagonalize<T: Real>(
    a: &mut [T],
    n: usize,
    want_q: bool,
) -> (Vec<T>, Vec<T>, Option<Vec<T>>) {
    let zero = T::zero();
    let two = T::lit(2.0);
    let mut e = vec![zero; n];
    let mut reflectors: Vec<(usize, Vec<T>, T)> = Vec::new();
    let mut p = vec![zero; n];
    for k in 0..n.saturating_sub(2) {
        let m = n - k - 1;
        let base = k + 1;
        let mut v: Vec<T> = (0..m).map(|i| a[(base + i) * n + k]).collect();
        let xnorm = v.iter().map(|x| *x * *x).sum::<T>().sqrt();
        if xnorm == zero {
            e[k] = zero;
            continue;
        }
        let alpha = if v[0] >= zero { -xnorm } else { xnorm };
        v[0] -= alpha;
        let vtv: T = v.iter().map(|x| *x * *x).sum();
        let beta = two / vtv;

        // p = β S v over the trailing block S = A[base.., base..].
        for i in 0..m {
            let row = &a[(base + i) * n + base..(base + i) * n + n];
            p[i] = beta * row.iter().zip(&v).map(|(s, x)| *s * *x).sum::<T>();
        }
        let kappa = beta / two * p[..m].iter().zip(&v).map(|(x, y)| *x * *y).sum::<T>();
        for i in 0..m {
            p[i] -= kappa * v[i];
        }
        // S ← S − v wᵀ − w vᵀ with w = p.
        for i in 0..m {
            let vi = v[i];
            let wi = p[i];
            let row = &mut a[(base + i) * n + base..(base + i) * n + n];
            for ((s, &vj), &wj) in row.iter_mut().zip(&v).zip(&p[..m]) {
                *s -= vi * wj + wi * vj;
            }
        }
        a[base * n + k] = alpha;
        a[k * n + base] = alpha;
        e[k] = alpha;
        if want_q {
            reflectors.push((base, v, beta));
        }
    }
    if n >= 2 {
        e[n - 2] = a[(n - 1) * n + n - 2];
    }
    let d: Vec<T> = (0..n).map(|i| a[i * n + i]).collect();

    let q = want_q.then(|| {
        let mut q = vec![zero; n * n];
        for i in 0..n {
            q[i * n + i] = T::one();
        }
        let mut u = vec![zero; n];
        for (base, v, beta) in reflectors.iter().rev() {
            let base = *base;
            // Q[base.., base..] ← (I − β v vᵀ) Q[base.., base..]
            for x in u[base..].iter_mut() {
                *x = zero;
            }
            for (i, &vi) in v.iter().enumerate() {
                let row = &q[(base + i) * n + base..(base + i) * n + n];
                for (uj, &qij) in u[base..].iter_mut().zip(row) {
                    *uj += vi * qij;
                }
            }
            for (i, &vi) in v.iter().enumerate() {
                let f = *beta * vi;
                let row = &mut q[(base + i) * n + base..(base + i) * n + n];
                for (qij, &uj) in row.iter_mut().zip(&u[base..]) {
                    *qij -= f * uj;
                }
            }
        }
        q
    });
    (d, e, q)
}

const MAX_JACOBI_SWEEPS: usize = 100;

/// Cyclic Jacobi for complex Hermitian matrices.
fn jacobi_hermitian<T: Real>(
    m: &ComplexMatrix<T>,
    want_vectors: bool,
) -> Result<(Vec<T>, Option<ComplexMatrix<T>>)> {
    let n = m.rows();
    let mut a = m.clone();
    let mut v = want_vectors.then(|| ComplexMatrix::identity(n));
    let scale = m.frobenius_norm();
    let threshold = T::tol(1e-14) * scale;
    let two = T::lit(2.0);
    let mut converged = scale == T::zero();
    for _ in 0..MAX_JACOBI_SWEEPS {
        if converged {
            break;
        }
        let mut off = T::zero();
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    off += a[(i, j)].norm_sqr();
                }
            }
        }
        if off.sqrt() <= threshold {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let r = apq.norm();
                if r == T::zero() {
                    continue;
                }
                // Phase-rotate the pair to a real symmetric 2×2, then a real rotation.
                let phase = (apq / r).conj();
                let tau = (a[(q, q)].re - a[(p, p)].re) / (two * r);
                let t = if tau >= T::zero() {
                    T::one() / (tau + (T::one() + tau * tau).sqrt())
                } else {
                    -T::one() / (-tau + (T::one() + tau * tau).sqrt())
                };
                let cs = T::one() / (T::one() + t * t).sqrt();
                let sn = t * cs;
                let u_pp = re(cs);
                let u_pq = re(sn);
                let u_qp = phase * (-sn);
                let u_qq = phase * cs;
                rotate_columns(&mut a, p, q, u_pp, u_pq, u_qp, u_qq);
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = u_pp.conj() * apk + u_qp.conj() * aqk;
                    a[(q, k)] = u_pq.conj() * apk + u_qq.conj() * aqk;
                }
                a[(p, q)] = re(T::zero());
                a[(q, p)] = re(T::zero());
                a[(p, p)].im = T::zero();
                a[(q, q)].im = T::zero();
                if let Some(v) = v.as_mut() {
                    rotate_columns(v, p, q, u_pp, u_pq, u_qp, u_qq);
                }
            }
        }
    }
    if !converged {
        return Err(Error::NoConvergence {
            method: "Jacobi",
            iterations: MAX_JACOBI_SWEEPS,
            last_energy: f64::NAN,
            residual: f64::NAN,
            last_vector: Vec::new(),
        });
    }
    Ok(((0..n).map(|i| a[(i, i)].re).collect(), v))
}

#[allow(clippy::too_many_arguments)]
fn rotate_columns<T: Real>(
    a: &mut ComplexMatrix<T>,
    p: usize,
    q: usize,
    u_pp: C<T>,
    u_pq: C<T>,
    u_qp: C<T>,
    u_qq: C<T>,
) {
    for k in 0..a.rows() {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * u_pp + akq * u_qp;
        a[(k, q)] = akp * u_pq + akq * u_qq;
    }
}
