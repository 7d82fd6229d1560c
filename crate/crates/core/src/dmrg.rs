//! Infinite- and finite-system DMRG for the open transverse-field Ising chain.
//!
//! A block basis is stored with its last-added site as the fast index. A
//! superblock state is a `rows × cols` row-major matrix `Ψ[s, e]` over the
//! grown system block and the grown environment block, so the physical order
//! reads system block, system site, environment site, environment block, with
//! the environment factor kept block-major internally.

use crate::density::{entropy_of_spectrum, reduced_from_coefficients, Keep};
use crate::eigensolve::{dense_eigh, lanczos_from, random_start, SolverConfig};
use crate::error::{Error, Result};
use crate::linalg::{pauli, ComplexMatrix, LinearOperator};
use crate::rng::mix_seed;
use crate::scalar::{norm, re, Real, C};

/// Relative eigenvalue gap below which two weights count as degenerate.
pub const MULTIPLET_TOLERANCE: f64 = 1e-9;
/// Extra states a degenerate multiplet may add beyond `d_max`.
pub const MULTIPLET_SLACK: usize = 4;
/// Warm-start guesses with smaller norm are replaced by a random start.
pub const GUESS_NORM_FLOOR: f64 = 1e-8;

/// Renormalized block of contiguous sites.
#[derive(Debug, Clone, PartialEq)]
pub struct DmrgBlock<T> {
    length: usize,
    hamiltonian: ComplexMatrix<T>,
    edge_sz: ComplexMatrix<T>,
    /// Columns span this basis inside the grown predecessor; `None` for a bare site.
    projector: Option<ComplexMatrix<T>>,
}

impl<T: Real> DmrgBlock<T> {
    /// One site with `H = g σ_x`.
    pub fn single_site(g: T) -> Self {
        Self {
            length: 1,
            hamiltonian: pauli::sigma_x::<T>().scaled(re(g)),
            edge_sz: pauli::sigma_z(),
            projector: None,
        }
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn basis_size(&self) -> usize {
        self.hamiltonian.rows()
    }

    pub fn hamiltonian(&self) -> &ComplexMatrix<T> {
        &self.hamiltonian
    }

    pub fn edge_sz(&self) -> &ComplexMatrix<T> {
        &self.edge_sz
    }

    pub fn projector(&self) -> Option<&ComplexMatrix<T>> {
        self.projector.as_ref()
    }

    /// Field terms are always folded into the block Hamiltonian.
    pub fn edge_sx_sum_absorbed(&self) -> bool {
        true
    }

    /// Re-expresses the block in the span of the columns of `p`.
    pub fn project(&self, p: &ComplexMatrix<T>) -> Result<Self> {
        if p.rows() != self.basis_size() {
            return Err(Error::DimensionMismatch {
                expected: self.basis_size(),
                actual: p.rows(),
            });
        }
        let pd = p.adjoint();
        Ok(Self {
            length: self.length,
            hamiltonian: hermitize(&(&(&pd * &self.hamiltonian) * p)),
            edge_sz: hermitize(&(&(&pd * &self.edge_sz) * p)),
            projector: Some(p.clone()),
        })
    }
}

fn hermitize<T: Real>(m: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    let half = re(T::lit(0.5));
    let n = m.rows();
    ComplexMatrix::from_fn(n, n, |i, j| (m[(i, j)] + m[(j, i)].conj()) * half)
}

/// Adds one site: `H ⊗ I + I ⊗ gσ_x − Z_edge ⊗ σ_z`.
pub fn grow_block<T: Real>(block: &DmrgBlock<T>, g: T) -> DmrgBlock<T> {
    let b = block.basis_size();
    let id_b = ComplexMatrix::identity(b);
    let id_2 = ComplexMatrix::identity(2);
    let sz = pauli::sigma_z::<T>();
    let sx = pauli::sigma_x::<T>().scaled(re(g));
    let h = &(&block.hamiltonian.kron(&id_2) + &id_b.kron(&sx)) - &block.edge_sz.kron(&sz);
    DmrgBlock {
        length: block.length + 1,
        hamiltonian: h,
        edge_sz: id_b.kron(&sz),
        projector: None,
    }
}

/// `H_s ⊗ I + I ⊗ H_e − Z_s ⊗ Z_e` applied to `Ψ` as a matrix.
pub struct SuperblockOperator<'a, T> {
    sys: &'a DmrgBlock<T>,
    env: &'a DmrgBlock<T>,
}

impl<'a, T: Real> SuperblockOperator<'a, T> {
    pub fn new(sys: &'a DmrgBlock<T>, env: &'a DmrgBlock<T>) -> Self {
        Self { sys, env }
    }
}

/// `out += α · A · X · Bᵀ`, with `X` `r × c` row-major and `B` possibly absent (identity).
fn sandwich<T: Real>(
    a: Option<&ComplexMatrix<T>>,
    x: &[C<T>],
    b: Option<&ComplexMatrix<T>>,
    rows: usize,
    cols: usize,
    alpha: T,
    out: &mut [C<T>],
) {
    let zero = re(T::zero());
    let left: Vec<C<T>> = match a {
        None => x.to_vec(),
        Some(a) => {
            let mut t = vec![zero; rows * cols];
            for i in 0..rows {
                let trow = &mut t[i * cols..(i + 1) * cols];
                for (k, aik) in a.row(i).iter().enumerate() {
                    if aik.re == T::zero() && aik.im == T::zero() {
                        continue;
                    }
                    for (tv, xv) in trow.iter_mut().zip(&x[k * cols..(k + 1) * cols]) {
                        *tv += aik * xv;
                    }
                }
            }
            t
        }
    };
    match b {
        None => {
            for (o, l) in out.iter_mut().zip(&left) {
                *o += l * alpha;
            }
        }
        Some(b) => {
            for i in 0..rows {
                let lrow = &left[i * cols..(i + 1) * cols];
                let orow = &mut out[i * cols..(i + 1) * cols];
                for (j, o) in orow.iter_mut().enumerate() {
                    let s = b
                        .row(j)
                        .iter()
                        .zip(lrow)
                        .fold(zero, |acc, (bj, l)| acc + bj * l);
                    *o += s * alpha;
                }
            }
        }
    }
}

impl<'a, T: Real> LinearOperator<T> for SuperblockOperator<'a, T> {
    fn dim(&self) -> usize {
        self.sys.basis_size() * self.env.basis_size()
    }

    fn apply(&self, input: &[C<T>], output: &mut [C<T>]) {
        let (r, c) = (self.sys.basis_size(), self.env.basis_size());
        for o in output.iter_mut() {
            *o = re(T::zero());
        }
        sandwich(
            Some(&self.sys.hamiltonian),
            input,
            None,
            r,
            c,
            T::one(),
            output,
        );
        sandwich(
            None,
            input,
            Some(&self.env.hamiltonian),
            r,
            c,
            T::one(),
            output,
        );
        sandwich(
            Some(&self.sys.edge_sz),
            input,
            Some(&self.env.edge_sz),
            r,
            c,
            -T::one(),
            output,
        );
    }
}

/// Ground state of a superblock, `Ψ[s, e]` row-major.
#[derive(Debug, Clone)]
pub struct SuperblockState<T> {
    pub energy: T,
    pub psi: Vec<C<T>>,
    pub rows: usize,
    pub cols: usize,
}

/// Lanczos ground state of `sys ⊗ env`; both blocks already include their free site.
pub fn superblock_ground<T: Real>(
    sys: &DmrgBlock<T>,
    env: &DmrgBlock<T>,
    guess: Option<&[C<T>]>,
    seed: u64,
) -> Result<SuperblockState<T>> {
    let op = SuperblockOperator::new(sys, env);
    let dim = op.dim();
    let start = match guess {
        Some(g) if g.len() == dim && norm(g) >= T::lit(GUESS_NORM_FLOOR) => g.to_vec(),
        _ => random_start(dim, seed),
    };
    let cfg = SolverConfig::default().with_seed(seed);
    let (r, _) = lanczos_from(&op, &cfg, start)?;
    Ok(SuperblockState {
        energy: r.energy,
        psi: r.vector,
        rows: sys.basis_size(),
        cols: env.basis_size(),
    })
}

/// How the cut interacted with degenerate weights.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MultipletDecision {
    /// No degeneracy straddled the cut.
    Clean,
    /// The cut was moved outward to keep a whole multiplet.
    Extended { extra: usize },
    /// The multiplet exceeded the slack; members were chosen by the tie rule.
    TieBroken { multiplet_size: usize },
}

/// Outcome of one reduced-density-matrix truncation.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncationReport<T> {
    pub kept: usize,
    /// Weight of the discarded states.
    pub discarded_weight: T,
    /// Kept eigenvalues, descending.
    pub spectrum: Vec<T>,
    pub multiplet: MultipletDecision,
}

/// Keeps the `d_max` dominant eigenvectors of `Tr_E |Ψ⟩⟨Ψ|` (or of `Tr_S` for [`Keep::B`]).
pub fn truncate<T: Real>(
    state: &SuperblockState<T>,
    d_max: usize,
    side: Keep,
) -> Result<(ComplexMatrix<T>, TruncationReport<T>)> {
    let rho = reduced_from_coefficients(&state.psi, state.rows, state.cols, side);
    truncate_density(&rho, d_max)
}

fn truncate_density<T: Real>(
    rho: &ComplexMatrix<T>,
    d_max: usize,
) -> Result<(ComplexMatrix<T>, TruncationReport<T>)> {
    if d_max == 0 {
        return Err(Error::InvalidParameter {
            name: "d_max",
            reason: "must keep at least one state".into(),
        });
    }
    let n = rho.rows();
    let eig = dense_eigh(rho)?;
    // Descending weights; clamp rounding negatives.
    let mut order: Vec<usize> = (0..n).rev().collect();
    let weight = |k: usize| eig.values[k].max(T::zero());
    let mut kept = d_max.min(n);
    let mut multiplet = MultipletDecision::Clean;
    let same = |a: T, b: T| (a - b).abs() <= T::lit(MULTIPLET_TOLERANCE) * a && b > T::lit(1e-14);
    if kept < n && same(weight(order[kept - 1]), weight(order[kept])) {
        let edge = weight(order[kept - 1]);
        let mut lo = kept - 1;
        while lo > 0 && same(weight(order[lo - 1]), edge) {
            lo -= 1;
        }
        let mut hi = kept;
        while hi < n && same(edge, weight(order[hi])) {
            hi += 1;
        }
        if hi <= d_max + MULTIPLET_SLACK {
            multiplet = MultipletDecision::Extended { extra: hi - kept };
            kept = hi;
        } else {
            let mut members: Vec<usize> = order[lo..hi].to_vec();
            members.sort_by(|&a, &b| lexicographic(&eig.vectors.column(a), &eig.vectors.column(b)));
            order[lo..hi].copy_from_slice(&members);
            multiplet = MultipletDecision::TieBroken {
                multiplet_size: hi - lo,
            };
        }
    }
    let spectrum: Vec<T> = order[..kept].iter().map(|&k| weight(k)).collect();
    let total: T = (0..n).map(weight).sum();
    let kept_sum: T = spectrum.iter().copied().sum();
    let discarded_weight = (total - kept_sum).max(T::zero()) / total;
    let spectrum = spectrum.into_iter().map(|w| w / total).collect();
    let p = ComplexMatrix::from_fn(n, kept, |i, j| eig.vectors[(i, order[j])]);
    Ok((
        p,
        TruncationReport {
            kept,
            discarded_weight,
            spectrum,
            multiplet,
        },
    ))
}

/// Orders vectors by descending magnitudes entry by entry.
fn lexicographic<T: Real>(a: &[C<T>], b: &[C<T>]) -> std::cmp::Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| y.norm().as_f64().total_cmp(&x.norm().as_f64()))
        .find(|o| o.is_ne())
        .unwrap_or(std::cmp::Ordering::Equal)
}

/// Entanglement entropy across the central cut of a superblock state.
pub fn superblock_entropy<T: Real>(state: &SuperblockState<T>) -> Result<T> {
    let (r, c) = (state.rows, state.cols);
    let (rho, _) = if r <= c {
        (reduced_from_coefficients(&state.psi, r, c, Keep::A), ())
    } else {
        (reduced_from_coefficients(&state.psi, r, c, Keep::B), ())
    };
    let values = crate::eigensolve::dense_eigvalsh(&rho)?;
    entropy_of_spectrum(&values)
}

/// Parameters of a DMRG run.
#[derive(Debug, Clone, PartialEq)]
pub struct DmrgConfig<T> {
    /// Kept states per block.
    pub d_max: usize,
    pub target_length: usize,
    pub g: T,
    pub energy_tolerance: T,
    pub sweep_count: usize,
    pub seed: u64,
}

impl<T: Real> DmrgConfig<T> {
    pub fn new(target_length: usize, d_max: usize, g: T) -> Self {
        Self {
            d_max,
            target_length,
            g,
            energy_tolerance: T::tol(1e-10),
            sweep_count: 3,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.d_max < 2 {
            return Err(Error::InvalidParameter {
                name: "d_max",
                reason: format!("must be at least 2, got {}", self.d_max),
            });
        }
        if self.target_length < 4 || !self.target_length.is_multiple_of(2) {
            return Err(Error::InvalidParameter {
                name: "target_length",
                reason: format!("must be even and at least 4, got {}", self.target_length),
            });
        }
        if !self.g.is_finite() {
            return Err(Error::InvalidParameter {
                name: "g",
                reason: "must be finite".into(),
            });
        }
        if !(self.energy_tolerance > T::zero()) {
            return Err(Error::InvalidParameter {
                name: "energy_tolerance",
                reason: "must be positive".into(),
            });
        }
        Ok(())
    }
}

/// Per-step record of a finite sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepStep<T> {
    pub sweep: usize,
    /// Sites in the grown system block.
    pub sys_length: usize,
    pub energy: T,
    pub entropy: T,
    pub discarded_weight: T,
}

#[derive(Debug, Clone)]
pub struct DmrgResult<T> {
    pub energy: T,
    pub energy_per_bond: T,
    pub length: usize,
    /// Truncation of the final central state to `d_max`.
    pub final_truncation: TruncationReport<T>,
    /// Entropy across the centre of the chain.
    pub entanglement_entropy_mid: T,
    /// Energy at the chain centre after each completed sweep.
    pub sweep_energies: Vec<T>,
    /// Energy reached by the infinite stage.
    pub infinite_energy: T,
    /// Every finite-sweep step, in order.
    pub steps: Vec<SweepStep<T>>,
    /// Largest discarded weight over all truncations.
    pub max_discarded_weight: T,
}

/// Blocks produced by the infinite stage, indexed by length.
#[derive(Debug, Clone)]
pub struct BlockChain<T> {
    pub left: Vec<Option<DmrgBlock<T>>>,
    pub right: Vec<Option<DmrgBlock<T>>>,
}

fn finish<T: Real>(
    cfg: &DmrgConfig<T>,
    state: &SuperblockState<T>,
    sweep_energies: Vec<T>,
    infinite_energy: T,
    steps: Vec<SweepStep<T>>,
    max_discarded_weight: T,
) -> Result<DmrgResult<T>> {
    let (_, final_truncation) = truncate(state, cfg.d_max, Keep::A)?;
    Ok(DmrgResult {
        energy: state.energy,
        energy_per_bond: state.energy / T::from_count(cfg.target_length - 1),
        length: cfg.target_length,
        final_truncation,
        entanglement_entropy_mid: superblock_entropy(state)?,
        sweep_energies,
        infinite_energy,
        steps,
        max_discarded_weight,
    })
}

/// Mirrored growth until the chain reaches `target_length`.
pub fn infinite_dmrg<T: Real>(cfg: &DmrgConfig<T>) -> Result<(DmrgResult<T>, BlockChain<T>)> {
    cfg.validate()?;
    let half = cfg.target_length / 2;
    let mut chain = BlockChain {
        left: vec![None; cfg.target_length],
        right: vec![None; cfg.target_length],
    };
    let mut block = DmrgBlock::single_site(cfg.g);
    chain.left[1] = Some(block.clone());
    chain.right[1] = Some(block.clone());
    let mut max_eps = T::zero();
    loop {
        let grown = grow_block(&block, cfg.g);
        let seed = mix_seed(cfg.seed ^ grown.length as u64);
        let state = superblock_ground(&grown, &grown, None, seed)?;
        if grown.length == half {
            let e = state.energy;
            let result = finish(cfg, &state, Vec::new(), e, Vec::new(), max_eps)?;
            return Ok((result, chain));
        }
        let (p, report) = truncate(&state, cfg.d_max, Keep::A)?;
        max_eps = max_eps.max(report.discarded_weight);
        block = grown.project(&p)?;
        chain.left[block.length] = Some(block.clone());
        chain.right[block.length] = Some(block.clone());
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Move {
    Right,
    Left,
}

fn block_at<T: Real>(store: &[Option<DmrgBlock<T>>], len: usize) -> Result<&DmrgBlock<T>> {
    store
        .get(len)
        .and_then(|b| b.as_ref())
        .ok_or_else(|| Error::InvalidParameter {
            name: "block",
            reason: format!("no stored block of length {len}"),
        })
}

/// `Ψ'[(α', s2), (β', s3)] = Σ conj(P[(α, s1), α']) Ψ[(α, s1), (β, s2)] R[(β', s3), β]`.
fn shift_right<T: Real>(
    state: &SuperblockState<T>,
    p: &ComplexMatrix<T>,
    r: Option<&ComplexMatrix<T>>,
) -> Option<Vec<C<T>>> {
    let r = r?;
    let zero = re(T::zero());
    let (rows, cols) = (state.rows, state.cols);
    let kept = p.cols();
    let b_env = cols / 2;
    // A[α', (β, s2)] = Σ_{(α,s1)} conj(P) Ψ
    let mut a = vec![zero; kept * cols];
    for ap in 0..kept {
        let arow = &mut a[ap * cols..(ap + 1) * cols];
        for i in 0..rows {
            let w = p[(i, ap)].conj();
            if w.norm_sqr() == T::zero() {
                continue;
            }
            for (x, y) in arow.iter_mut().zip(&state.psi[i * cols..(i + 1) * cols]) {
                *x += w * y;
            }
        }
    }
    let b_small = r.rows() / 2;
    let new_cols = r.rows();
    let mut out = vec![zero; kept * 2 * new_cols];
    for ap in 0..kept {
        for s2 in 0..2 {
            let row = (ap * 2 + s2) * new_cols;
            for beta in 0..b_env {
                let v = a[ap * cols + beta * 2 + s2];
                if v.norm_sqr() == T::zero() {
                    continue;
                }
                for bp in 0..b_small {
                    for s3 in 0..2 {
                        let idx = bp * 2 + s3;
                        out[row + idx] += v * r[(idx, beta)];
                    }
                }
            }
        }
    }
    Some(out)
}

/// `Ψ'[(α', s0), (β', s1)] = Σ L[(α', s0), α] Ψ[(α, s1), (β, s2)] conj(Q[(β, s2), β'])`.
fn shift_left<T: Real>(
    state: &SuperblockState<T>,
    l: Option<&ComplexMatrix<T>>,
    q: &ComplexMatrix<T>,
) -> Option<Vec<C<T>>> {
    let l = l?;
    let zero = re(T::zero());
    let (rows, cols) = (state.rows, state.cols);
    let kept = q.cols();
    let b_sys = rows / 2;
    // A[(α, s1), β'] = Σ_{(β,s2)} Ψ conj(Q)
    let mut a = vec![zero; rows * kept];
    for i in 0..rows {
        let prow = &state.psi[i * cols..(i + 1) * cols];
        for bp in 0..kept {
            a[i * kept + bp] = prow
                .iter()
                .enumerate()
                .fold(zero, |acc, (j, y)| acc + y * q[(j, bp)].conj());
        }
    }
    let new_rows = l.rows();
    let new_cols = kept * 2;
    let mut out = vec![zero; new_rows * new_cols];
    for row in 0..new_rows {
        for alpha in 0..b_sys {
            let w = l[(row, alpha)];
            if w.norm_sqr() == T::zero() {
                continue;
            }
            for s1 in 0..2 {
                for bp in 0..kept {
                    out[row * new_cols + bp * 2 + s1] += w * a[(alpha * 2 + s1) * kept + bp];
                }
            }
        }
    }
    Some(out)
}

/// Infinite stage followed by `sweep_count` left-right-left sweeps.
pub fn finite_dmrg<T: Real>(cfg: &DmrgConfig<T>) -> Result<DmrgResult<T>> {
    let (inf, mut chain) = infinite_dmrg(cfg)?;
    let n = cfg.target_length;
    let centre = n / 2 - 1;
    let (l_min, l_max) = (1, n - 3);
    if cfg.sweep_count == 0 || l_max <= l_min {
        return Ok(inf);
    }
    let mut schedule: Vec<(usize, Move)> = Vec::new();
    schedule.extend((centre..l_max).map(|l| (l, Move::Right)));
    schedule.extend((l_min + 1..=l_max).rev().map(|l| (l, Move::Left)));
    schedule.extend((l_min..centre).map(|l| (l, Move::Right)));

    let mut guess: Option<Vec<C<T>>> = None;
    let mut sweep_energies = Vec::new();
    let mut steps = Vec::new();
    let mut max_eps = inf.max_discarded_weight;
    let mut previous: Option<T> = None;
    let mut last_state = None;
    let mut counter = 0u64;
    for sweep in 0..cfg.sweep_count {
        for &(l, mv) in &schedule {
            let r = n - l - 2;
            let sys = grow_block(block_at(&chain.left, l)?, cfg.g);
            let env = grow_block(block_at(&chain.right, r)?, cfg.g);
            counter += 1;
            let state = superblock_ground(
                &sys,
                &env,
                guess.as_deref(),
                mix_seed(cfg.seed ^ (counter << 8)),
            )?;
            let entropy = superblock_entropy(&state)?;
            let (side, grown) = match mv {
                Move::Right => (Keep::A, &sys),
                Move::Left => (Keep::B, &env),
            };
            let (p, report) = truncate(&state, cfg.d_max, side)?;
            max_eps = max_eps.max(report.discarded_weight);
            steps.push(SweepStep {
                sweep,
                sys_length: l + 1,
                energy: state.energy,
                entropy,
                discarded_weight: report.discarded_weight,
            });
            let new_block = grown.project(&p)?;
            guess = match mv {
                Move::Right => {
                    chain.left[l + 1] = Some(new_block);
                    let r_proj = block_at(&chain.right, r)?.projector();
                    shift_right(&state, &p, r_proj)
                }
                Move::Left => {
                    chain.right[r + 1] = Some(new_block);
                    let l_proj = block_at(&chain.left, l)?.projector();
                    shift_left(&state, l_proj, &p)
                }
            };
        }
        // Close the sweep at the centre.
        let sys = grow_block(block_at(&chain.left, centre)?, cfg.g);
        let env = grow_block(block_at(&chain.right, n - centre - 2)?, cfg.g);
        counter += 1;
        let state = superblock_ground(
            &sys,
            &env,
            guess.as_deref(),
            mix_seed(cfg.seed ^ (counter << 8)),
        )?;
        steps.push(SweepStep {
            sweep,
            sys_length: centre + 1,
            energy: state.energy,
            entropy: superblock_entropy(&state)?,
            discarded_weight: T::zero(),
        });
        sweep_energies.push(state.energy);
        let settled = previous.is_some_and(|p| (p - state.energy).abs() < cfg.energy_tolerance);
        previous = Some(state.energy);
        guess = Some(state.psi.clone());
        last_state = Some(state);
        if settled {
            break;
        }
    }
    let state = last_state.expect("at least one sweep ran");
    finish(cfg, &state, sweep_energies, inf.energy, steps, max_eps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigensolve::{dense_eigvalsh, tfim_ground_state};
    use crate::spin::{dense_tfim, TfimHamiltonian};

    fn ed(n: usize, g: f64) -> f64 {
        let h = TfimHamiltonian::open(n, g).unwrap();
        tfim_ground_state(&h, &SolverConfig::default())
            .unwrap()
            .0
            .energy
    }

    #[test]
    fn grown_site_matches_two_site_chain() {
        for g in [0.0f64, 0.4, 1.0] {
            let b = grow_block(&DmrgBlock::single_site(g), g);
            let ours = dense_eigvalsh(b.hamiltonian()).unwrap();
            let reference =
                dense_eigvalsh(&dense_tfim(&TfimHamiltonian::open(2, g).unwrap()).unwrap())
                    .unwrap();
            for (a, r) in ours.iter().zip(&reference) {
                assert!((a - r).abs() < 1e-12);
            }
            assert_eq!(b.hamiltonian().hermitian_defect(), 0.0);
        }
        let b = grow_block(&DmrgBlock::single_site(0.0f64), 0.0);
        assert_eq!(
            dense_eigvalsh(b.hamiltonian()).unwrap(),
            vec![-1.0, -1.0, 1.0, 1.0]
        );
    }

    #[test]
    fn superblock_of_two_site_blocks() {
        let g = 1.0f64;
        let two = grow_block(&DmrgBlock::single_site(g), g);
        let s = superblock_ground(&two, &two, None, 1).unwrap();
        assert!((s.energy - ed(4, g)).abs() < 1e-9);
        let z = grow_block(&DmrgBlock::single_site(0.0f64), 0.0);
        let s = superblock_ground(&z, &z, None, 1).unwrap();
        assert!((s.energy + 3.0).abs() < 1e-10);
    }

    #[test]
    fn mirrored_blocks_share_spectra() {
        let g = 0.8f64;
        let b = grow_block(&grow_block(&DmrgBlock::single_site(g), g), g);
        let s = superblock_ground(&b, &b, None, 5).unwrap();
        let ra =
            dense_eigvalsh(&reduced_from_coefficients(&s.psi, s.rows, s.cols, Keep::A)).unwrap();
        let rb =
            dense_eigvalsh(&reduced_from_coefficients(&s.psi, s.rows, s.cols, Keep::B)).unwrap();
        for (a, b) in ra.iter().zip(&rb) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn truncation_weights() {
        // √0.9 |00⟩ + √0.1 |11⟩ on a 2×2 superblock.
        let state = SuperblockState {
            energy: 0.0,
            psi: vec![re(0.9f64.sqrt()), re(0.0), re(0.0), re(0.1f64.sqrt())],
            rows: 2,
            cols: 2,
        };
        let (p, rep) = truncate(&state, 1, Keep::A).unwrap();
        assert_eq!(rep.kept, 1);
        assert!((rep.discarded_weight - 0.1).abs() < 1e-12);
        assert_eq!(p.cols(), 1);
        let (_, full) = truncate(&state, 2, Keep::A).unwrap();
        assert!(full.discarded_weight.abs() < 1e-12);
        assert!((full.discarded_weight + full.spectrum.iter().sum::<f64>() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn degenerate_multiplet_is_kept_whole() {
        let rho = ComplexMatrix::diagonal(&[0.4f64, 0.2, 0.2, 0.2]);
        let (_, rep) = truncate_density(&rho, 2).unwrap();
        assert_eq!(rep.kept, 4);
        assert_eq!(rep.multiplet, MultipletDecision::Extended { extra: 2 });
        let w = 1.0 / 10.0;
        let rho = ComplexMatrix::diagonal(&[w; 10]);
        let (p, rep) = truncate_density(&rho, 2).unwrap();
        assert_eq!(rep.kept, 2);
        assert_eq!(
            rep.multiplet,
            MultipletDecision::TieBroken { multiplet_size: 10 }
        );
        assert_eq!(p.cols(), 2);
    }

    #[test]
    fn infinite_matches_ed_without_truncation() {
        let cfg = DmrgConfig::new(8, 16, 1.0);
        let (r, _) = infinite_dmrg(&cfg).unwrap();
        assert!((r.energy - ed(8, 1.0)).abs() < 1e-8);
    }

    #[test]
    fn classical_limit_energy_per_bond() {
        let cfg = DmrgConfig::new(10, 2, 0.0f64);
        let (r, _) = infinite_dmrg(&cfg).unwrap();
        assert!((r.energy_per_bond + 1.0).abs() < 1e-10);
    }

    #[test]
    fn finite_sweeps_improve_on_infinite_stage() {
        let mut cfg = DmrgConfig::new(12, 6, 1.0);
        cfg.sweep_count = 2;
        let r = finite_dmrg(&cfg).unwrap();
        assert!(r.energy <= r.infinite_energy + 1e-12);
        assert!(r.energy >= ed(12, 1.0) - 1e-10);
        assert!(r.sweep_energies.windows(2).all(|w| w[1] <= w[0] + 1e-9));
    }

    #[test]
    fn rejects_bad_config() {
        assert!(infinite_dmrg(&DmrgConfig::new(7, 4, 1.0)).is_err());
        assert!(infinite_dmrg(&DmrgConfig::new(2, 4, 1.0)).is_err());
        assert!(infinite_dmrg(&DmrgConfig::new(8, 1, 1.0)).is_err());
    }
}
