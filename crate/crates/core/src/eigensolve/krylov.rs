//! Power iteration and Lanczos for the lowest eigenpair of a Hermitian operator.

use crate::error::{Error, Result};
use crate::linalg::LinearOperator;
use crate::rng::random_amplitudes;
use crate::scalar::{axpy, inner, norm, re, scale, Real, C};

use super::tridiagonal::{tridiagonal_eigen, tridiagonal_eigenvalues, TridiagonalMatrix};

/// Settings shared by [`power_method`] and [`lanczos`].
#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig<T> {
    /// Bound on successive energy changes and on the final residual.
    pub tolerance: T,
    pub max_iterations: usize,
    pub seed: u64,
    /// Subtracted from the operator by the power method.
    pub shift: T,
    pub reorthogonalize: bool,
}

impl<T: Real> Default for SolverConfig<T> {
    fn default() -> Self {
        Self {
            tolerance: T::tol(1e-10),
            max_iterations: 10_000,
            seed: 0,
            shift: T::zero(),
            reorthogonalize: true,
        }
    }
}

impl<T: Real> SolverConfig<T> {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_tolerance(mut self, tolerance: T) -> Self {
        self.tolerance = tolerance;
        self
    }

    pub fn with_shift(mut self, shift: T) -> Self {
        self.shift = shift;
        self
    }

    pub fn with_max_iterations(mut self, max_iterations: usize) -> Self {
        self.max_iterations = max_iterations;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance > T::zero()) {
            return Err(Error::InvalidParameter {
                name: "tolerance",
                reason: "must be positive".into(),
            });
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidParameter {
                name: "max_iterations",
                reason: "must be at least 1".into(),
            });
        }
        if !self.shift.is_finite() {
            return Err(Error::InvalidParameter {
                name: "shift",
                reason: "must be finite".into(),
            });
        }
        Ok(())
    }
}

/// Converged eigenpair.
#[derive(Debug, Clone)]
pub struct EigenResult<T> {
    pub energy: T,
    /// Unit eigenvector.
    pub vector: Vec<C<T>>,
    pub iterations: usize,
    /// `‖Hv − Ev‖`.
    pub residual_norm: T,
}

/// Tridiagonal projection built by [`lanczos`].
#[derive(Debug, Clone, PartialEq)]
pub struct LanczosCoefficients<T> {
    pub a: Vec<T>,
    pub b: Vec<T>,
    pub iterations: usize,
    /// Lowest Ritz value after each iteration.
    pub ground_history: Vec<T>,
}

impl<T: Real> LanczosCoefficients<T> {
    pub fn tridiagonal(&self) -> Result<TridiagonalMatrix<T>> {
        TridiagonalMatrix::new(self.a.clone(), self.b.clone())
    }
}

/// Seeded pseudo-random unit vector.
pub fn random_start<T: Real>(dim: usize, seed: u64) -> Vec<C<T>> {
    let mut v = random_amplitudes(dim, seed);
    let n = norm(&v);
    scale(T::one() / n, &mut v);
    v
}

fn normalized_start<T: Real>(start: Vec<C<T>>, dim: usize) -> Result<Vec<C<T>>> {
    if start.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            actual: start.len(),
        });
    }
    let n = norm(&start);
    if !(n > T::zero()) || !n.is_finite() {
        return Err(Error::ZeroVector);
    }
    let mut v = start;
    scale(T::one() / n, &mut v);
    Ok(v)
}

fn residual<T: Real, O: LinearOperator<T> + ?Sized>(
    op: &O,
    v: &[C<T>],
    energy: T,
    work: &mut [C<T>],
) -> T {
    op.apply(v, work);
    axpy(re(-energy), v, work);
    norm(work)
}

fn no_convergence<T: Real>(
    method: &'static str,
    iterations: usize,
    energy: T,
    residual: T,
    v: &[C<T>],
) -> Error {
    Error::NoConvergence {
        method,
        iterations,
        last_energy: energy.as_f64(),
        residual: residual.as_f64(),
        last_vector: v.iter().map(|x| (x.re.as_f64(), x.im.as_f64())).collect(),
    }
}

/// Tracks the two-successive-changes rule.
struct EnergyWatch<T> {
    previous: Option<T>,
    quiet_steps: usize,
}

impl<T: Real> EnergyWatch<T> {
    fn new() -> Self {
        Self {
            previous: None,
            quiet_steps: 0,
        }
    }

    fn observe(&mut self, e: T, tol: T) -> bool {
        if let Some(p) = self.previous {
            if (e - p).abs() < tol {
                self.quiet_steps += 1;
            } else {
                self.quiet_steps = 0;
            }
        }
        self.previous = Some(e);
        self.quiet_steps >= 2
    }
}

pub fn power_method<T: Real, O: LinearOperator<T> + ?Sized>(
    op: &O,
    cfg: &SolverConfig<T>,
) -> Result<EigenResult<T>> {
    power_method_from(op, cfg, random_start(op.dim(), cfg.seed))
}

/// [`power_method`] from a caller-supplied start vector.
pub fn power_method_from<T: Real, O: LinearOperator<T> + ?Sized>(
    op: &O,
    cfg: &SolverConfig<T>,
    start: Vec<C<T>>,
) -> Result<EigenResult<T>> {
    cfg.validate()?;
    let dim = op.dim();
    let mut v = normalized_start(start, dim)?;
    let mut w = vec![re(T::zero()); dim];
    let mut watch = EnergyWatch::new();
    let mut energy = T::nan();
    let mut res = T::infinity();
    for it in 1..=cfg.max_iterations {
        op.apply(&v, &mut w);
        energy = inner(&v, &w).re;
        axpy(re(-energy), &v, &mut w);
        res = norm(&w);
        if watch.observe(energy, cfg.tolerance) && res <= cfg.tolerance {
            return Ok(EigenResult {
                energy,
                vector: v,
                iterations: it,
                residual_norm: res,
            });
        }
        // w = (H − E)v, so (H − shift)v = w + (E − shift)v.
        axpy(re(energy - cfg.shift), &v, &mut w);
        let n = norm(&w);
        if !(n > T::zero()) {
            return Err(Error::ZeroVector);
        }
        scale(T::one() / n, &mut w);
        std::mem::swap(&mut v, &mut w);
    }
    Err(no_convergence(
        "power method",
        cfg.max_iterations,
        energy,
        res,
        &v,
    ))
}

/// Orthonormal Krylov basis grown one vector at a time.
pub struct KrylovBasis<'a, T, O: ?Sized> {
    op: &'a O,
    reorthogonalize: bool,
    basis: Vec<Vec<C<T>>>,
    a: Vec<T>,
    b: Vec<T>,
    pending: Option<Vec<C<T>>>,
    pending_norm: T,
}

/// Breakdown threshold on `b²`.
const BREAKDOWN: f64 = 1e-28;

impl<'a, T: Real, O: LinearOperator<T> + ?Sized> KrylovBasis<'a, T, O> {
    pub fn new(op: &'a O, start: Vec<C<T>>, reorthogonalize: bool) -> Result<Self> {
        let v0 = normalized_start(start, op.dim())?;
        Ok(Self {
            op,
            reorthogonalize,
            basis: vec![v0],
            a: Vec::new(),
            b: Vec::new(),
            pending: None,
            pending_norm: T::zero(),
        })
    }

    /// Computes `a_n` for the newest basis vector and the unnormalized next vector.
    ///
    /// Returns `‖r‖`, the norm of the candidate next vector.
    pub fn step(&mut self) -> T {
        let n = self.basis.len() - 1;
        let dim = self.op.dim();
        let mut w = vec![re(T::zero()); dim];
        self.op.apply(&self.basis[n], &mut w);
        let an = inner(&self.basis[n], &w).re;
        axpy(re(-an), &self.basis[n], &mut w);
        if n > 0 {
            axpy(re(-self.b[n - 1]), &self.basis[n - 1], &mut w);
        }
        if self.reorthogonalize {
            for _pass in 0..2 {
                let before = norm(&w);
                for u in &self.basis {
                    let overlap = inner(u, &w);
                    axpy(-overlap, u, &mut w);
                }
                if norm(&w) > T::lit(0.7) * before {
                    break;
                }
            }
        }
        self.a.push(an);
        let bn = norm(&w);
        self.pending = Some(w);
        self.pending_norm = bn;
        bn
    }

    /// True when the candidate vector signals an invariant subspace.
    pub fn broke_down(&self) -> bool {
        let b = self.pending_norm;
        b * b < T::lit(BREAKDOWN) || self.basis.len() >= self.op.dim()
    }

    /// Accepts the candidate from the last [`step`](Self::step) as the next basis vector.
    pub fn extend(&mut self) {
        let mut w = self.pending.take().expect("step before extend");
        let bn = self.pending_norm;
        scale(T::one() / bn, &mut w);
        self.b.push(bn);
        self.basis.push(w);
    }

    pub fn basis(&self) -> &[Vec<C<T>>] {
        &self.basis
    }

    pub fn a(&self) -> &[T] {
        &self.a
    }

    pub fn b(&self) -> &[T] {
        &self.b
    }

    fn projected(&self) -> TridiagonalMatrix<T> {
        let m = self.a.len();
        TridiagonalMatrix::new(self.a.clone(), self.b[..m - 1].to_vec())
            .expect("consistent lengths")
    }

    fn combine(&self, y: &[T]) -> Vec<C<T>> {
        let mut x = vec![re(T::zero()); self.op.dim()];
        for (coef, v) in y.iter().zip(&self.basis) {
            axpy(re(*coef), v, &mut x);
        }
        let n = norm(&x);
        scale(T::one() / n, &mut x);
        x
    }
}

/// Orthonormal Krylov vectors, in order.
pub type Basis<T> = Vec<Vec<C<T>>>;

/// Runs `steps` Lanczos iterations without a convergence test.
///
/// Stops early on breakdown. Returns the coefficients and the orthonormal basis.
pub fn lanczos_tridiagonalize<T: Real, O: LinearOperator<T> + ?Sized>(
    op: &O,
    start: Vec<C<T>>,
    steps: usize,
    reorthogonalize: bool,
) -> Result<(LanczosCoefficients<T>, Basis<T>)> {
    let mut k = KrylovBasis::new(op, start, reorthogonalize)?;
    let mut history = Vec::new();
    for it in 0..steps.max(1) {
        k.step();
        history.push(tridiagonal_eigenvalues(&k.projected())?[0]);
        if k.broke_down() || it + 1 == steps {
            break;
        }
        k.extend();
    }
    let coeffs = LanczosCoefficients {
        a: k.a.clone(),
        b: k.b.clone(),
        iterations: k.a.len(),
        ground_history: history,
    };
    Ok((coeffs, k.basis))
}

pub fn lanczos<T: Real, O: LinearOperator<T> + ?Sized>(
    op: &O,
    cfg: &SolverConfig<T>,
) -> Result<(EigenResult<T>, LanczosCoefficients<T>)> {
    lanczos_from(op, cfg, random_start(op.dim(), cfg.seed))
}

/// [`lanczos`] from a caller-supplied start vector.
pub fn lanczos_from<T: Real, O: LinearOperator<T> + ?Sized>(
    op: &O,
    cfg: &SolverConfig<T>,
    start: Vec<C<T>>,
) -> Result<(EigenResult<T>, LanczosCoefficients<T>)> {
    cfg.validate()?;
    let dim = op.dim();
    let mut k = KrylovBasis::new(op, start, cfg.reorthogonalize)?;
    let mut watch = EnergyWatch::new();
    let mut history = Vec::new();
    let mut work = vec![re(T::zero()); dim];
    for it in 1..=cfg.max_iterations {
        let bn = k.step();
        let t = k.projected();
        let theta = tridiagonal_eigenvalues(&t)?[0];
        history.push(theta);
        let quiet = watch.observe(theta, cfg.tolerance);
        let exhausted = k.broke_down();
        if quiet || exhausted || it == cfg.max_iterations {
            let eig = tridiagonal_eigen(&t)?;
            let y = &eig.vectors[0];
            let estimate = bn * y[y.len() - 1].abs();
            if estimate <= cfg.tolerance || exhausted || it == cfg.max_iterations {
                let vector = k.combine(y);
                let energy = eig.values[0];
                let res = residual(op, &vector, energy, &mut work);
                if res <= cfg.tolerance {
                    let coeffs = LanczosCoefficients {
                        a: k.a.clone(),
                        b: k.b.clone(),
                        iterations: it,
                        ground_history: history,
                    };
                    return Ok((
                        EigenResult {
                            energy,
                            vector,
                            iterations: it,
                            residual_norm: res,
                        },
                        coeffs,
                    ));
                }
                if exhausted || it == cfg.max_iterations {
                    return Err(no_convergence("Lanczos", it, energy, res, &vector));
                }
            }
        }
        k.extend();
    }
    unreachable!("loop returns on its last iteration")
}
