//! Density matrices, reduced states, Schmidt decomposition and entanglement entropy.

use crate::eigensolve::{dense_eigh, dense_eigvalsh};
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::scalar::{re, Real, C};
use crate::spin::StateVector;

/// Validated mixed state.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix<T> {
    matrix: ComplexMatrix<T>,
}

impl<T: Real> DensityMatrix<T> {
    /// Checks hermiticity, unit trace and positivity.
    pub fn new(matrix: ComplexMatrix<T>) -> Result<Self> {
        if !matrix.is_square() || matrix.rows() == 0 {
            return Err(Error::InvalidDensityMatrix(format!(
                "shape {}x{} is not square and non-empty",
                matrix.rows(),
                matrix.cols()
            )));
        }
        let tol = T::tol(1e-12);
        let defect = matrix.hermitian_defect();
        if defect > tol {
            return Err(Error::InvalidDensityMatrix(format!(
                "hermiticity defect {defect}"
            )));
        }
        let tr = matrix.trace();
        if (tr.re - T::one()).abs() > tol || tr.im.abs() > tol {
            return Err(Error::InvalidDensityMatrix(format!("trace {tr}")));
        }
        let lowest = dense_eigvalsh(&matrix)?[0];
        if lowest < -tol {
            return Err(Error::InvalidDensityMatrix(format!(
                "negative eigenvalue {lowest}"
            )));
        }
        Ok(Self { matrix })
    }

    /// `|ψ⟩⟨ψ|`.
    pub fn pure(psi: &StateVector<T>) -> Result<Self> {
        psi.check_normalized()?;
        let a = psi.amplitudes();
        let n = a.len();
        Ok(Self {
            matrix: ComplexMatrix::from_fn(n, n, |i, j| a[i] * a[j].conj()),
        })
    }

    /// `Σ p_i |ψ_i⟩⟨ψ_i|`.
    pub fn mixture(states: &[(T, StateVector<T>)]) -> Result<Self> {
        let first = states
            .first()
            .ok_or_else(|| Error::InvalidDensityMatrix("empty mixture".into()))?;
        let n = first.1.dim();
        let mut m = ComplexMatrix::zeros(n, n);
        for (p, psi) in states {
            if psi.dim() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    actual: psi.dim(),
                });
            }
            if *p < T::zero() {
                return Err(Error::InvalidDensityMatrix(format!("negative weight {p}")));
            }
            psi.check_normalized()?;
            let a = psi.amplitudes();
            for i in 0..n {
                for j in 0..n {
                    m[(i, j)] += a[i] * a[j].conj() * *p;
                }
            }
        }
        Self::new(m)
    }

    /// `I/d`.
    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        Self::new(ComplexMatrix::identity(dim).scaled(re(T::one() / T::from_count(dim))))
    }

    pub fn dimension(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix<T> {
        self.matrix
    }

    /// Eigenvalues ascending.
    pub fn eigenvalues(&self) -> Result<Vec<T>> {
        dense_eigvalsh(&self.matrix)
    }

    /// `Tr ρ²`.
    pub fn purity(&self) -> T {
        self.matrix.as_slice().iter().map(|x| x.norm_sqr()).sum()
    }

    /// `U ρ U†`.
    pub fn conjugated(&self, u: &ComplexMatrix<T>) -> Result<Self> {
        if u.rows() != self.dimension() || !u.is_square() {
            return Err(Error::DimensionMismatch {
                expected: self.dimension(),
                actual: u.rows(),
            });
        }
        Self::new(&(u * &self.matrix) * &u.adjoint())
    }
}

/// Split of the sites `0..n` into two non-empty complementary sets.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Bipartition {
    n_sites: usize,
    sites_a: Vec<usize>,
    sites_b: Vec<usize>,
}

impl Bipartition {
    pub fn new(n_sites: usize, sites_a: &[usize]) -> Result<Self> {
        let mut a = sites_a.to_vec();
        a.sort_unstable();
        a.dedup();
        if a.len() != sites_a.len() {
            return Err(Error::InvalidBipartition("repeated site in A".into()));
        }
        if let Some(&bad) = a.iter().find(|&&s| s >= n_sites) {
            return Err(Error::InvalidBipartition(format!(
                "site {bad} outside 0..{n_sites}"
            )));
        }
        let b: Vec<usize> = (0..n_sites)
            .filter(|s| a.binary_search(s).is_err())
            .collect();
        if a.is_empty() || b.is_empty() {
            return Err(Error::InvalidBipartition(
                "both parts must be non-empty".into(),
            ));
        }
        if n_sites > 30 {
            return Err(Error::SizeGuard {
                what: "bipartition sites",
                value: n_sites,
                limit: 30,
            });
        }
        Ok(Self {
            n_sites,
            sites_a: a,
            sites_b: b,
        })
    }

    /// Sites `0..k` against `k..n`.
    pub fn contiguous(n_sites: usize, k: usize) -> Result<Self> {
        Self::new(n_sites, &(0..k).collect::<Vec<_>>())
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn sites_a(&self) -> &[usize] {
        &self.sites_a
    }

    pub fn sites_b(&self) -> &[usize] {
        &self.sites_b
    }

    pub fn dim_a(&self) -> usize {
        1 << self.sites_a.len()
    }

    pub fn dim_b(&self) -> usize {
        1 << self.sites_b.len()
    }

    /// Site `sites[k]` of the full index becomes bit `k`.
    fn gather(index: usize, sites: &[usize]) -> usize {
        sites
            .iter()
            .enumerate()
            .fold(0, |acc, (k, &s)| acc | (((index >> s) & 1) << k))
    }

    fn split(&self, index: usize) -> (usize, usize) {
        (
            Self::gather(index, &self.sites_a),
            Self::gather(index, &self.sites_b),
        )
    }

    /// Inverse of `split`.
    pub fn join(&self, a: usize, b: usize) -> usize {
        let scatter = |x: usize, sites: &[usize]| {
            sites
                .iter()
                .enumerate()
                .fold(0, |acc, (k, &s)| acc | (((x >> k) & 1) << s))
        };
        scatter(a, &self.sites_a) | scatter(b, &self.sites_b)
    }
}

/// Which side of a [`Bipartition`] to keep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Keep {
    A,
    B,
}

/// A pure or mixed state passed to [`partial_trace`].
#[derive(Debug, Clone, Copy)]
pub enum StateRef<'a, T> {
    Pure(&'a StateVector<T>),
    Mixed(&'a DensityMatrix<T>),
}

impl<'a, T> From<&'a StateVector<T>> for StateRef<'a, T> {
    fn from(v: &'a StateVector<T>) -> Self {
        StateRef::Pure(v)
    }
}

impl<'a, T> From<&'a DensityMatrix<T>> for StateRef<'a, T> {
    fn from(r: &'a DensityMatrix<T>) -> Self {
        StateRef::Mixed(r)
    }
}

/// Amplitudes rearranged as a `dim_a × dim_b` row-major matrix.
fn coefficient_matrix<T: Real>(psi: &StateVector<T>, cut: &Bipartition) -> Vec<C<T>> {
    let db = cut.dim_b();
    let mut m = vec![re(T::zero()); cut.dim_a() * db];
    for (s, amp) in psi.amplitudes().iter().enumerate() {
        let (a, b) = cut.split(s);
        m[a * db + b] = *amp;
    }
    m
}

fn check_cut_dim(dim: usize, cut: &Bipartition) -> Result<()> {
    let expected = 1usize << cut.n_sites;
    if dim != expected {
        return Err(Error::InvalidBipartition(format!(
            "state of dimension {dim} does not factorize over {} sites",
            cut.n_sites
        )));
    }
    Ok(())
}

/// Reduced state of a pure state stored as a `rows × cols` coefficient matrix.
pub fn reduced_from_coefficients<T: Real>(
    psi: &[C<T>],
    rows: usize,
    cols: usize,
    keep: Keep,
) -> ComplexMatrix<T> {
    assert_eq!(psi.len(), rows * cols, "coefficient matrix shape");
    match keep {
        Keep::A => ComplexMatrix::from_fn(rows, rows, |i, j| {
            let (ri, rj) = (
                &psi[i * cols..(i + 1) * cols],
                &psi[j * cols..(j + 1) * cols],
            );
            ri.iter()
                .zip(rj)
                .fold(re(T::zero()), |acc, (x, y)| acc + x * y.conj())
        }),
        Keep::B => {
            let mut out = ComplexMatrix::zeros(cols, cols);
            for r in 0..rows {
                let row = &psi[r * cols..(r + 1) * cols];
                for i in 0..cols {
                    if row[i].norm_sqr() == T::zero() {
                        continue;
                    }
                    for j in 0..cols {
                        out[(i, j)] += row[i] * row[j].conj();
                    }
                }
            }
            out
        }
    }
}

pub fn partial_trace<'a, T: Real + 'a>(
    state: impl Into<StateRef<'a, T>>,
    cut: &Bipartition,
    keep: Keep,
) -> Result<DensityMatrix<T>> {
    match state.into() {
        StateRef::Pure(psi) => {
            check_cut_dim(psi.dim(), cut)?;
            psi.check_normalized()?;
            let m = coefficient_matrix(psi, cut);
            Ok(DensityMatrix {
                matrix: reduced_from_coefficients(&m, cut.dim_a(), cut.dim_b(), keep),
            })
        }
        StateRef::Mixed(rho) => {
            check_cut_dim(rho.dimension(), cut)?;
            let (dk, dt) = match keep {
                Keep::A => (cut.dim_a(), cut.dim_b()),
                Keep::B => (cut.dim_b(), cut.dim_a()),
            };
            let full = |k: usize, t: usize| match keep {
                Keep::A => cut.join(k, t),
                Keep::B => cut.join(t, k),
            };
            let m = ComplexMatrix::from_fn(dk, dk, |i, j| {
                (0..dt).fold(re(T::zero()), |acc, t| {
                    acc + rho.matrix[(full(i, t), full(j, t))]
                })
            });
            Ok(DensityMatrix { matrix: m })
        }
    }
}

/// `−Σ λ ln λ` over a probability spectrum, clamping tiny negatives.
pub fn entropy_of_spectrum<T: Real>(values: &[T]) -> Result<T> {
    let tol = T::tol(1e-12);
    let mut s = T::zero();
    for &l in values {
        if l < -tol {
            return Err(Error::InvalidDensityMatrix(format!(
                "negative eigenvalue {l}"
            )));
        }
        if l > T::zero() {
            s -= l * l.ln();
        }
    }
    Ok(s)
}

/// `−Tr ρ ln ρ` in nats.
pub fn von_neumann_entropy<T: Real>(rho: &DensityMatrix<T>) -> Result<T> {
    entropy_of_spectrum(&rho.eigenvalues()?)
}

/// [`von_neumann_entropy`] in bits.
pub fn von_neumann_entropy_bits<T: Real>(rho: &DensityMatrix<T>) -> Result<T> {
    Ok(von_neumann_entropy(rho)? / T::LN_2())
}

/// Schmidt coefficients below this are dropped.
pub const SCHMIDT_CUTOFF: f64 = 1e-8;

/// `|ψ⟩ = Σ c_i |φ_i⟩|χ_i⟩`.
#[derive(Debug, Clone)]
pub struct SchmidtSpectrum<T> {
    /// Descending.
    pub coefficients: Vec<T>,
    /// On the `A` sites.
    pub left_vectors: Vec<Vec<C<T>>>,
    /// On the `B` sites.
    pub right_vectors: Vec<Vec<C<T>>>,
    cut: Bipartition,
}

impl<T: Real> SchmidtSpectrum<T> {
    pub fn rank(&self) -> usize {
        self.coefficients.len()
    }

    pub fn cut(&self) -> &Bipartition {
        &self.cut
    }

    /// Entanglement entropy in nats.
    pub fn entropy(&self) -> T {
        self.coefficients
            .iter()
            .map(|c| {
                let p = *c * *c;
                -p * p.ln()
            })
            .sum()
    }

    pub fn reconstruct(&self) -> StateVector<T> {
        let n = self.cut.n_sites;
        let mut amps = vec![re(T::zero()); 1 << n];
        for ((c, phi), chi) in self
            .coefficients
            .iter()
            .zip(&self.left_vectors)
            .zip(&self.right_vectors)
        {
            for (a, pa) in phi.iter().enumerate() {
                for (b, xb) in chi.iter().enumerate() {
                    amps[self.cut.join(a, b)] += pa * xb * *c;
                }
            }
        }
        StateVector::from_parts(n, amps)
    }
}

pub fn schmidt<T: Real>(psi: &StateVector<T>, cut: &Bipartition) -> Result<SchmidtSpectrum<T>> {
    check_cut_dim(psi.dim(), cut)?;
    psi.check_normalized()?;
    let (da, db) = (cut.dim_a(), cut.dim_b());
    let m = coefficient_matrix(psi, cut);
    let rho_a = reduced_from_coefficients(&m, da, db, Keep::A);
    let eig = dense_eigh(&rho_a)?;
    let mut coefficients = Vec::new();
    let mut left_vectors = Vec::new();
    let mut right_vectors = Vec::new();
    for k in (0..da).rev() {
        let phi = eig.vector(k);
        // χ ∝ ⟨φ|ψ⟩ = Σ_a conj(φ_a) M[a, ·].
        let mut chi = vec![re(T::zero()); db];
        for (a, pa) in phi.iter().enumerate() {
            let pa = pa.conj();
            for (x, mab) in chi.iter_mut().zip(&m[a * db..(a + 1) * db]) {
                *x += pa * mab;
            }
        }
        let c = chi.iter().map(|x| x.norm_sqr()).sum::<T>().sqrt();
        if c <= T::lit(SCHMIDT_CUTOFF) {
            continue;
        }
        for x in chi.iter_mut() {
            *x /= c;
        }
        coefficients.push(c);
        left_vectors.push(phi);
        right_vectors.push(chi);
    }
    // Recomputed norms may perturb the eigenvalue order slightly.
    let mut order: Vec<usize> = (0..coefficients.len()).collect();
    order.sort_by(|&i, &j| {
        coefficients[j]
            .partial_cmp(&coefficients[i])
            .expect("finite")
    });
    Ok(SchmidtSpectrum {
        coefficients: order.iter().map(|&i| coefficients[i]).collect(),
        left_vectors: order.iter().map(|&i| left_vectors[i].clone()).collect(),
        right_vectors: order.iter().map(|&i| right_vectors[i].clone()).collect(),
        cut: cut.clone(),
    })
}
