//! Dense and matrix-free eigensolvers, degeneracy analysis and parameter
//! sweeps.
//!
//! The dense path hands a full `2^n x 2^n` Hermitian matrix to faer; the
//! iterative path is a block Lanczos recursion with full
//! reorthogonalization that touches the Hamiltonian only through
//! [`OperatorSum::apply`], so it scales to chains well past the dense
//! limit. Degenerate ground clusters are resolved by running with a block
//! at least as wide as the requested count plus a safety margin.

use clusterlab_core::model::{self, ChainSpec};
use clusterlab_core::{Boundary, OperatorSum, StateVector, C64};
use faer::Mat;
use rayon::prelude::*;
use serde::Serialize;

use crate::dense::eigh_opsum;
use crate::error::{LabError, Result};
use crate::symmetry;

/// Default absolute tolerance for grouping eigenvalues into clusters;
/// far below the integer level spacing of stabilizer spectra, far above
/// solver noise.
pub const DEFAULT_CLUSTER_TOL: f64 = 1e-8;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Dense,
    Iterative,
}

/// Options for the iterative solver and clustering.
#[derive(Clone, Copy, Debug)]
pub struct SolverOptions {
    pub tol: f64,
    pub cluster_tol: f64,
    /// Maximum block-Lanczos steps.
    pub max_iter: usize,
    /// Cap on the total number of stored Krylov vectors.
    pub max_krylov: usize,
    pub seed: u64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            cluster_tol: DEFAULT_CLUSTER_TOL,
            max_iter: 5000,
            max_krylov: 384,
            seed: 7,
        }
    }
}

/// Sorted spectrum with degeneracy clusters; the evidence object for the
/// acceptance checks.
#[derive(Clone, Debug, Serialize)]
pub struct SpectrumResult {
    pub eigenvalues: Vec<f64>,
    /// `(lowest value in cluster, multiplicity)` pairs.
    pub clusters: Vec<(f64, usize)>,
    /// Distance from the lowest cluster to the next one.
    pub gap: f64,
    pub method: Method,
    /// `‖H v − λ v‖` for the checked eigenpairs.
    pub residuals: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

/// Group sorted eigenvalues: consecutive values belong to one cluster iff
/// their difference is below `tol`.
pub fn cluster_eigenvalues(eigs: &[f64], tol: f64) -> Vec<(f64, usize)> {
    let mut out: Vec<(f64, usize)> = Vec::new();
    let mut prev: Option<f64> = None;
    for &e in eigs {
        match (out.last_mut(), prev) {
            (Some((_, mult)), Some(p)) if e - p < tol => *mult += 1,
            _ => out.push((e, 1)),
        }
        prev = Some(e);
    }
    out
}

fn gap_of(clusters: &[(f64, usize)]) -> f64 {
    if clusters.len() >= 2 {
        clusters[1].0 - clusters[0].0
    } else {
        0.0
    }
}

/// Multiplicity of the lowest cluster under the given tolerance.
pub fn degeneracy_count(s: &SpectrumResult, cluster_tol: f64) -> usize {
    cluster_eigenvalues(&s.eigenvalues, cluster_tol)
        .first()
        .map(|c| c.1)
        .unwrap_or(0)
}

fn column_state(vecs: &Mat<faer::c64>, col: usize) -> StateVector {
    let amps: Vec<C64> = (0..vecs.nrows()).map(|i| vecs[(i, col)]).collect();
    StateVector::from_amplitudes(amps).expect("power-of-two dimension")
}

fn pair_residual(h: &OperatorSum, v: &StateVector, lambda: f64) -> Result<f64> {
    let hv = h.apply(v)?;
    let diff = hv.add_scaled(v, C64::new(-lambda, 0.0))?;
    Ok(diff.norm())
}

/// Full dense spectrum with residual evidence.
pub fn diagonalize_dense(h: &OperatorSum, opts: &SolverOptions) -> Result<SpectrumResult> {
    if !h.is_hermitian(1e-12) {
        return Err(LabError::NonHermitian);
    }
    let (eigenvalues, vecs) = eigh_opsum(h)?;
    let dim = eigenvalues.len();
    let checked = if dim <= 512 { dim } else { 128 };
    let mut residuals = Vec::with_capacity(checked);
    for col in 0..checked {
        let v = column_state(&vecs, col);
        residuals.push(pair_residual(h, &v, eigenvalues[col])?);
    }
    let clusters = cluster_eigenvalues(&eigenvalues, opts.cluster_tol);
    Ok(SpectrumResult {
        gap: gap_of(&clusters),
        clusters,
        method: Method::Dense,
        residuals,
        seed: None,
        eigenvalues,
    })
}

/// Lowest eigenpairs found by the iterative solver.
#[derive(Clone, Debug)]
pub struct GroundSubspace {
    pub values: Vec<f64>,
    pub vectors: Vec<StateVector>,
    pub residuals: Vec<f64>,
    pub seed: u64,
    pub krylov_dim: usize,
}

struct SplitMix(u64);

impl SplitMix {
    fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    fn unit(&mut self) -> f64 {
        (self.next() >> 11) as f64 / (1u64 << 53) as f64
    }

    fn vector(&mut self, dim: usize) -> Vec<C64> {
        (0..dim)
            .map(|_| C64::new(self.unit() - 0.5, self.unit() - 0.5))
            .collect()
    }
}

fn dot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &[C64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

fn axpy(y: &mut [C64], alpha: C64, x: &[C64]) {
    for (yi, xi) in y.iter_mut().zip(x.iter()) {
        *yi += alpha * xi;
    }
}

/// Lowest `k` eigenpairs via a banded Lanczos recursion with full
/// reorthogonalization, touching `H` only through matrix-free
/// application. The recursion is seeded with a random block of width
/// `k + 4`, so degenerate ground clusters up to multiplicity `k` resolve
/// reliably; the seed is recorded in the result.
pub fn ground_subspace(h: &OperatorSum, k: usize, opts: &SolverOptions) -> Result<GroundSubspace> {
    if k == 0 {
        return Err(LabError::InvalidArgument("k must be at least 1".into()));
    }
    if !h.is_hermitian(1e-12) {
        return Err(LabError::NonHermitian);
    }
    let n = h.n_sites();
    let dim = 1usize << n;
    let block = (k + 4).min(dim);
    let max_vecs = opts.max_krylov.max(2 * block).min(dim);
    let mut rng = SplitMix(opts.seed);

    // All Krylov vectors, kept for full reorthogonalization.
    let mut basis: Vec<Vec<C64>> = Vec::with_capacity(max_vecs);
    // Column j holds <q_i, H q_j> for every i present when j was
    // processed; missing entries are recovered by Hermitian symmetry.
    let mut t_cols: Vec<Vec<C64>> = Vec::new();

    // seed block
    for _ in 0..block {
        loop {
            let mut v = rng.vector(dim);
            for _ in 0..2 {
                for q in &basis {
                    let r = dot(q, &v);
                    axpy(&mut v, -r, q);
                }
            }
            let nrm = norm(&v);
            if nrm > 1e-12 {
                for x in v.iter_mut() {
                    *x /= nrm;
                }
                basis.push(v);
                break;
            }
        }
    }

    let mut best_residual = f64::INFINITY;
    let t_entry = |t_cols: &Vec<Vec<C64>>, i: usize, j: usize| -> C64 {
        if i < t_cols[j].len() {
            t_cols[j][i]
        } else {
            t_cols[i][j].conj()
        }
    };
    let ritz_check = |t_cols: &Vec<Vec<C64>>,
                      basis: &Vec<Vec<C64>>,
                      best: &mut f64|
     -> Result<(Vec<f64>, Vec<StateVector>, Vec<f64>)> {
        let m = t_cols.len();
        let t = Mat::from_fn(m, m, |i, j| t_entry(t_cols, i, j));
        let evd = t
            .self_adjoint_eigen(faer::Side::Lower)
            .map_err(|e| LabError::Eigensolver(format!("{e:?}")))?;
        let kk = k.min(m);
        let mut vals = Vec::with_capacity(kk);
        let mut vectors = Vec::with_capacity(kk);
        let mut residuals = Vec::with_capacity(kk);
        for j in 0..kk {
            let lambda = evd.S()[j].re;
            let mut x = vec![C64::new(0.0, 0.0); dim];
            for (qi, q) in basis.iter().take(m).enumerate() {
                axpy(&mut x, evd.U()[(qi, j)], q);
            }
            let nrm = norm(&x);
            for xi in x.iter_mut() {
                *xi /= nrm;
            }
            let xs = StateVector::from_amplitudes(x).expect("pow2");
            residuals.push(pair_residual(h, &xs, lambda)?);
            vals.push(lambda);
            vectors.push(xs);
        }
        let worst = residuals.iter().cloned().fold(0.0f64, f64::max);
        if worst < *best {
            *best = worst;
        }
        Ok((vals, vectors, residuals))
    };

    let mut next = 0usize;
    let mut steps = 0usize;
    let mut result: Option<(Vec<f64>, Vec<StateVector>, Vec<f64>)> = None;
    while next < basis.len() {
        let v = StateVector::from_amplitudes(basis[next].clone()).expect("pow2");
        let mut w = h.apply(&v)?.amplitudes().to_vec();
        let mut col = Vec::with_capacity(basis.len());
        for q in basis.iter() {
            let r = dot(q, &w);
            col.push(r);
            axpy(&mut w, -r, q);
        }
        // second orthogonalization pass
        for q in basis.iter() {
            let r = dot(q, &w);
            axpy(&mut w, -r, q);
        }
        t_cols.push(col);
        let nrm = norm(&w);
        if nrm > 1e-10 && basis.len() < max_vecs {
            for x in w.iter_mut() {
                *x /= nrm;
            }
            basis.push(w);
        }
        next += 1;
        steps += 1;

        let round_done = next % block == 0 || next == basis.len();
        if round_done && next >= block.min(dim) {
            let (vals, vectors, residuals) = ritz_check(&t_cols, &basis, &mut best_residual)?;
            let worst = residuals.iter().cloned().fold(0.0f64, f64::max);
            result = Some((vals, vectors, residuals));
            if worst < opts.tol {
                break;
            }
        }
        if steps >= opts.max_iter * block {
            break;
        }
    }

    match result {
        Some((values, vectors, residuals))
            if residuals.iter().cloned().fold(0.0f64, f64::max) < opts.tol =>
        {
            Ok(GroundSubspace {
                values,
                vectors,
                residuals,
                seed: opts.seed,
                krylov_dim: t_cols.len(),
            })
        }
        _ => Err(LabError::Convergence {
            best_residual,
            krylov_dim: t_cols.len(),
        }),
    }
}

/// Iterative-path spectrum result for the lowest `k` eigenvalues.
pub fn spectrum_iterative(h: &OperatorSum, k: usize, opts: &SolverOptions) -> Result<SpectrumResult> {
    let gs = ground_subspace(h, k, opts)?;
    let clusters = cluster_eigenvalues(&gs.values, opts.cluster_tol);
    Ok(SpectrumResult {
        gap: gap_of(&clusters),
        clusters,
        method: Method::Iterative,
        residuals: gs.residuals,
        seed: Some(gs.seed),
        eigenvalues: gs.values,
    })
}

/// One row of an interpolation sweep.
#[derive(Clone, Debug, Serialize)]
pub struct SweepRow {
    pub alpha: f64,
    pub energies: Vec<f64>,
    pub gap: f64,
    pub string_order: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug)]
pub struct SweepTable {
    pub spec: ChainSpec,
    pub m: usize,
    pub rows: Vec<SweepRow>,
}

/// Uniform grid of `points` values on `[0, 1]`.
pub fn uniform_grid(points: usize) -> Vec<f64> {
    if points == 1 {
        return vec![0.0];
    }
    (0..points)
        .map(|i| i as f64 / (points - 1) as f64)
        .collect()
}

/// Default stabilizer-index window for string-order evaluation.
///
/// Open chains use the full retained range. Closed chains use the
/// half-chain window: a near-full cyclic window telescopes against the
/// complementary stabilizers (the product of all retained `K_k` is the
/// global symmetry), collapsing the string into a quasi-local operator
/// that stays smooth across the transition.
pub fn widest_string_range(spec: &ChainSpec) -> Option<(usize, usize)> {
    let sites = spec.retained_sites();
    let (first, last) = (*sites.first()?, *sites.last()?);
    match spec.boundary {
        Boundary::Closed => Some((first, (spec.n_sites / 2).max(first))),
        Boundary::Open => Some((first, last)),
    }
}

/// Sweep the interpolated Hamiltonian over an `alpha` grid, recording the
/// lowest `m` energies, the gap and the ground-state string order per
/// row. Rows run in parallel; per-row solver errors are recorded in the
/// row rather than aborting the sweep.
pub fn sweep_alpha(
    spec: &ChainSpec,
    grid: &[f64],
    m: usize,
    opts: &SolverOptions,
) -> Result<SweepTable> {
    if grid.is_empty() {
        return Err(LabError::InvalidArgument("empty sweep grid".into()));
    }
    if m == 0 {
        return Err(LabError::InvalidArgument("need m >= 1 eigenvalues".into()));
    }
    // interpolation support is a precondition, not a per-row failure
    model::interpolated(spec, 0.0)?;
    let bundle = model::build(spec)?;
    let range = widest_string_range(spec)
        .ok_or_else(|| LabError::InvalidArgument("no retained stabilizers".into()))?;
    let dim = 1usize << spec.n_sites;
    let m = m.min(dim);

    let rows: Vec<SweepRow> = grid
        .par_iter()
        .enumerate()
        .map(|(row_idx, &alpha)| {
            let run = || -> Result<SweepRow> {
                let h = model::interpolated(spec, alpha)?;
                let (energies, ground) = if dim <= 1024 {
                    let (vals, vecs) = eigh_opsum(&h)?;
                    let ground = column_state(&vecs, 0);
                    (vals[..m.min(vals.len())].to_vec(), ground)
                } else {
                    let mut row_opts = *opts;
                    row_opts.seed = opts.seed.wrapping_add(row_idx as u64);
                    let gs = ground_subspace(&h, m, &row_opts)?;
                    let ground = gs.vectors[0].clone();
                    (gs.values, ground)
                };
                let so = symmetry::string_order(&ground, &bundle, range.0, range.1)?;
                let gap = if energies.len() >= 2 {
                    energies[1] - energies[0]
                } else {
                    0.0
                };
                Ok(SweepRow {
                    alpha,
                    energies,
                    gap,
                    string_order: so.value,
                    error: None,
                })
            };
            run().unwrap_or_else(|e| SweepRow {
                alpha,
                energies: vec![f64::NAN; m],
                gap: f64::NAN,
                string_order: f64::NAN,
                error: Some(e.to_string()),
            })
        })
        .collect();

    Ok(SweepTable {
        spec: spec.clone(),
        m,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use clusterlab_core::model::{ChainSpec, EdgeTerms, Model};
    use clusterlab_core::Boundary;

    fn spec(n: usize, boundary: Boundary, model: Model, edge: EdgeTerms) -> ChainSpec {
        ChainSpec::new(n, boundary, model, edge).unwrap()
    }

    #[test]
    fn free_model_spectrum_is_binomial() {
        let s = spec(4, Boundary::Closed, Model::X, EdgeTerms::Drop);
        let h = model::build(&s).unwrap().hamiltonian;
        let r = diagonalize_dense(&h, &SolverOptions::default()).unwrap();
        let want = [(-4.0, 1usize), (-2.0, 4), (0.0, 6), (2.0, 4), (4.0, 1)];
        assert_eq!(r.clusters.len(), want.len());
        for ((v, m), (wv, wm)) in r.clusters.iter().zip(want.iter()) {
            assert!((v - wv).abs() < 1e-10);
            assert_eq!(m, wm);
        }
        assert!(r.residuals.iter().all(|&x| x < 1e-10));
    }

    #[test]
    fn zxz_closed_has_unique_ground_state() {
        let s = spec(6, Boundary::Closed, Model::Zxz, EdgeTerms::Drop);
        let h = model::build(&s).unwrap().hamiltonian;
        let r = diagonalize_dense(&h, &SolverOptions::default()).unwrap();
        assert_eq!(degeneracy_count(&r, DEFAULT_CLUSTER_TOL), 1);
        assert!((r.eigenvalues[0] + 6.0).abs() < 1e-10);
    }

    #[test]
    fn zxz_open_drop_is_fourfold_degenerate() {
        let s = spec(6, Boundary::Open, Model::Zxz, EdgeTerms::Drop);
        let h = model::build(&s).unwrap().hamiltonian;
        let r = diagonalize_dense(&h, &SolverOptions::default()).unwrap();
        assert_eq!(degeneracy_count(&r, DEFAULT_CLUSTER_TOL), 4);
        assert!((r.gap - 2.0).abs() < 1e-10);
    }

    #[test]
    fn iterative_agrees_with_dense() {
        let mut opts = SolverOptions::default();
        opts.tol = 1e-9;
        for (model, n, k) in [
            (Model::Zxz, 8usize, 5usize),
            (Model::Ccz, 8, 4),
            (Model::Cp { angles: vec![0.8; 7] }, 8, 3),
        ] {
            let s = spec(n, Boundary::Open, model, EdgeTerms::Drop);
            let h = model::build(&s).unwrap().hamiltonian;
            let dense = diagonalize_dense(&h, &opts).unwrap();
            let gs = ground_subspace(&h, k, &opts).unwrap();
            for (a, b) in gs.values.iter().zip(dense.eigenvalues.iter()) {
                assert!((a - b).abs() < 1e-8, "iterative {a} vs dense {b}");
            }
            assert!(gs.residuals.iter().all(|&r| r < 1e-8));
        }
    }

    #[test]
    fn free_model_ground_found_quickly_at_small_size() {
        let s = spec(4, Boundary::Closed, Model::X, EdgeTerms::Drop);
        let h = model::build(&s).unwrap().hamiltonian;
        let mut opts = SolverOptions::default();
        opts.max_iter = 3;
        let gs = ground_subspace(&h, 1, &opts).unwrap();
        assert!((gs.values[0] + 4.0).abs() < 1e-8);
    }

    #[test]
    fn stabilizer_eigenvalues_have_fixed_parity() {
        // eigenvalues of -sum K_j are integers with the parity of the
        // stabilizer count
        let s = spec(6, Boundary::Open, Model::Ccz, EdgeTerms::Drop);
        let bundle = model::build(&s).unwrap();
        let r = diagonalize_dense(&bundle.hamiltonian, &SolverOptions::default()).unwrap();
        let parity = bundle.stabilizers.len() as i64 % 2;
        for &e in &r.eigenvalues {
            let rounded = e.round();
            assert!((e - rounded).abs() < 1e-9);
            assert_eq!((rounded as i64).rem_euclid(2), parity.rem_euclid(2));
        }
    }

    #[test]
    fn clustering_is_tolerance_driven() {
        let eigs = [0.0, 1e-10, 1e-10 + 2e-9, 1.0];
        let cl = cluster_eigenvalues(&eigs, 1e-8);
        assert_eq!(cl.len(), 2);
        assert_eq!(cl[0].1, 3);
        let cl = cluster_eigenvalues(&eigs, 1e-11);
        assert_eq!(cl.len(), 4);
    }

    #[test]
    fn sweep_rows_cover_grid_in_order() {
        let s = spec(6, Boundary::Closed, Model::Zxz, EdgeTerms::Drop);
        let grid = uniform_grid(5);
        let table = sweep_alpha(&s, &grid, 2, &SolverOptions::default()).unwrap();
        assert_eq!(table.rows.len(), 5);
        for (row, &alpha) in table.rows.iter().zip(grid.iter()) {
            assert_eq!(row.alpha, alpha);
            assert!(row.error.is_none());
            assert_eq!(row.energies.len(), 2);
        }
        // alpha = 0: free model, ground -6, string order ~ 0
        assert!((table.rows[0].energies[0] + 6.0).abs() < 1e-10);
        assert!(table.rows[0].string_order.abs() < 1e-10);
        // alpha = 1: stabilizer model, ground -6, string order 1
        assert!((table.rows[4].energies[0] + 6.0).abs() < 1e-10);
        assert!((table.rows[4].string_order - 1.0).abs() < 1e-10);
    }

    #[test]
    fn ground_energy_is_concave_in_alpha() {
        let s = spec(6, Boundary::Closed, Model::Zxz, EdgeTerms::Drop);
        let grid = uniform_grid(11);
        let table = sweep_alpha(&s, &grid, 1, &SolverOptions::default()).unwrap();
        let e: Vec<f64> = table.rows.iter().map(|r| r.energies[0]).collect();
        for i in 1..e.len() - 1 {
            assert!(e[i] >= (e[i - 1] + e[i + 1]) / 2.0 - 1e-9);
        }
    }
}

#[cfg(test)]
mod error_tests {
    use super::*;
    use clusterlab_core::pauli::{Letter, PauliString};

    #[test]
    fn non_hermitian_input_is_rejected() {
        let mut op = clusterlab_core::OperatorSum::zero(2).unwrap();
        op.accumulate(
            &PauliString::single(2, 1, Letter::Z).unwrap(),
            clusterlab_core::C64::new(0.0, 0.3),
        );
        assert!(matches!(
            diagonalize_dense(&op, &SolverOptions::default()),
            Err(crate::error::LabError::NonHermitian)
        ));
        assert!(matches!(
            ground_subspace(&op, 1, &SolverOptions::default()),
            Err(crate::error::LabError::NonHermitian)
        ));
    }

    #[test]
    fn empty_grid_and_zero_k_are_argument_errors() {
        let spec = ChainSpec::new(
            4,
            Boundary::Closed,
            clusterlab_core::model::Model::Zxz,
            clusterlab_core::model::EdgeTerms::Drop,
        )
        .unwrap();
        assert!(sweep_alpha(&spec, &[], 2, &SolverOptions::default()).is_err());
        let h = model::build(&spec).unwrap().hamiltonian;
        assert!(ground_subspace(&h, 0, &SolverOptions::default()).is_err());
    }
}
