//! Symmetry structure checks: even/odd generator pairs, the
//! non-invertible duality operator, the nonlocal transformation onto the
//! next-nearest-neighbour Ising chain, string order parameters, edge
//! logical operators and their projective phases.
//!
//! Everything dense lives here; the operators themselves come from the
//! core conjugation engine, so no symmetry is typed in by hand.

use clusterlab_core::matrix::phase_aligned_max_diff;
use clusterlab_core::model::{
    self, entangling_circuit, cz_layer, ChainSpec, ModelBundle, Model,
};
use clusterlab_core::pauli::{Letter, OperatorSum, PauliString};
use clusterlab_core::state::circuit_to_matrix;
use clusterlab_core::{Boundary, CMatrix, StateVector, C64};

use crate::dense::singular_values;
use crate::error::{LabError, Result};

/// Dense symmetry operators get expensive fast with naive matrix
/// products; the duality and Ising-map checks are desk-scale objects.
pub const DENSE_SYMMETRY_SITE_LIMIT: usize = 10;

fn check_dense_limit(n: usize) -> Result<()> {
    if n > DENSE_SYMMETRY_SITE_LIMIT {
        return Err(clusterlab_core::CoreError::CapacityExceeded {
            needed: n,
            limit: DENSE_SYMMETRY_SITE_LIMIT,
        }
        .into());
    }
    Ok(())
}

/// `‖AB − BA‖_max` on dense forms.
pub fn commutator_norm(a: &CMatrix, b: &CMatrix) -> Result<f64> {
    let ab = a.mul(b)?;
    let ba = b.mul(a)?;
    Ok(ab.sub(&ba)?.max_abs())
}

/// The model's even/odd symmetry generators as Pauli sums.
pub fn eta_generators(spec: &ChainSpec) -> Result<(OperatorSum, OperatorSum)> {
    Ok(model::eta_generators(spec)?)
}

/// `P = (1 + η_even η_odd) / 2` as a dense matrix.
pub fn symmetric_projector(spec: &ChainSpec) -> Result<CMatrix> {
    check_dense_limit(spec.n_sites)?;
    let (even, odd) = eta_generators(spec)?;
    let eta = even.mul(&odd)?.to_matrix()?;
    let dim = eta.dim();
    Ok(CMatrix::identity(dim).add_scaled(&eta, C64::new(1.0, 0.0))?.scale(C64::new(0.5, 0.0)))
}

/// `P H P` on dense forms.
pub fn project_hamiltonian(h: &OperatorSum, p: &CMatrix) -> Result<CMatrix> {
    Ok(p.mul(&h.to_matrix()?)?.mul(p)?)
}

/// Cyclic one-site translation: `T X_j T^{-1} = X_{j+1}`.
pub fn translation_matrix(n_sites: usize) -> CMatrix {
    let dim = 1usize << n_sites;
    let mask = (dim - 1) as u64;
    let mut t = CMatrix::zeros(dim);
    for x in 0..dim as u64 {
        let rotated = ((x << 1) | (x >> (n_sites - 1))) & mask;
        *t.at_mut(rotated as usize, x as usize) = C64::new(1.0, 0.0);
    }
    t
}

/// Gauging (Kramers–Wannier) operator on a cyclic sublattice, identity
/// on the complement. In the computational basis,
/// `<t|KW|s> = 2^{-M/2} (-1)^{Σ_k t_k (s_k + s_{k+1})}` over the
/// sublattice bits; it intertwines `X_k ⇝ Z_{k-1} Z_k` and
/// `Z_k Z_{k+1} ⇝ X_k` along the sublattice, kills the antisymmetric
/// sector, and absorbs the symmetric projector by construction.
fn sublattice_gauging(n_sites: usize, sites: &[usize]) -> CMatrix {
    let dim = 1usize << n_sites;
    let m = sites.len();
    let sub_mask: u64 = sites.iter().map(|&s| 1u64 << (s - 1)).sum();
    let scale = 1.0 / f64::sqrt((1usize << m) as f64);
    let mut out = CMatrix::zeros(dim);
    for s in 0..dim as u64 {
        for ts in 0..(1u64 << m) {
            let mut t = s & !sub_mask;
            let mut exponent = 0u32;
            for (k, &site) in sites.iter().enumerate() {
                if ts & (1 << k) != 0 {
                    t |= 1 << (site - 1);
                    let here = (s >> (site - 1)) & 1;
                    let next_site = sites[(k + 1) % m];
                    let next = (s >> (next_site - 1)) & 1;
                    exponent += (here + next) as u32;
                }
            }
            let sign = if exponent % 2 == 0 { 1.0 } else { -1.0 };
            *out.at_mut(t as usize, s as usize) += C64::new(sign * scale, 0.0);
        }
    }
    out
}

/// The two sublattice-gauging halves of the CZ chain's duality operator.
fn duality_parts_cz(spec: &ChainSpec) -> Result<(CMatrix, CMatrix)> {
    let n = spec.n_sites;
    let evens: Vec<usize> = (2..=n).step_by(2).collect();
    let odds: Vec<usize> = (1..n).step_by(2).collect();
    Ok((
        sublattice_gauging(n, &evens),
        sublattice_gauging(n, &odds),
    ))
}

/// Unitary that maps the CZ-entangled chain onto this model's circuit:
/// `V = U · CZ†` as a dense matrix.
fn circuit_map_matrix(spec: &ChainSpec) -> Result<CMatrix> {
    let n = spec.n_sites;
    let u = circuit_to_matrix(&entangling_circuit(spec), n)?;
    let cz = circuit_to_matrix(&cz_layer(spec), n)?;
    Ok(u.mul(&cz.dagger())?)
}

/// The model's non-invertible duality operator, dense. Closed chains
/// only (the assembly contains the translation).
pub fn noninvertible_d(spec: &ChainSpec) -> Result<CMatrix> {
    if spec.boundary != Boundary::Closed {
        return Err(LabError::InvalidArgument(
            "the duality operator needs a closed chain".into(),
        ));
    }
    check_dense_limit(spec.n_sites)?;
    let (d_even, d_odd) = duality_parts_cz(spec)?;
    let d_cz = translation_matrix(spec.n_sites).mul(&d_even.mul(&d_odd)?)?;
    if matches!(spec.model, Model::Zxz | Model::X) {
        return Ok(d_cz);
    }
    let v = circuit_map_matrix(spec)?;
    Ok(v.mul(&d_cz)?.mul(&v.dagger())?)
}

/// The mapped operator pair `(V X_j V†, V Z_{j-1} Z_{j+1} V†)` the
/// duality operator interchanges.
pub fn mapped_pair(spec: &ChainSpec, j: usize) -> Result<(OperatorSum, OperatorSum)> {
    let n = spec.n_sites;
    let wrap = |s: usize| (s + n - 1) % n + 1;
    let x = OperatorSum::from_term(
        &PauliString::single(n, j, Letter::X)?,
        C64::new(1.0, 0.0),
    );
    let zz = OperatorSum::from_term(
        &PauliString::from_sites(n, &[(wrap(j + n - 1), Letter::Z), (wrap(j + 1), Letter::Z)])?,
        C64::new(1.0, 0.0),
    );
    Ok((
        model::conjugate_by_circuit_map(spec, &x)?,
        model::conjugate_by_circuit_map(spec, &zz)?,
    ))
}

/// Phase-optimized residual of `D·A = B·D`.
pub fn intertwine_check(d: &CMatrix, a: &OperatorSum, b: &OperatorSum) -> Result<f64> {
    let lhs = d.mul(&a.to_matrix()?)?;
    let rhs = b.to_matrix()?.mul(d)?;
    Ok(phase_aligned_max_diff(&lhs, &rhs)?)
}

/// Smallest singular value of a dense operator.
pub fn smallest_singular_value(d: &CMatrix) -> Result<f64> {
    let sv = singular_values(d)?;
    Ok(sv.last().copied().unwrap_or(0.0))
}

/// Summary of the duality-operator checks for one spec.
#[derive(Clone, Debug)]
pub struct DualityReport {
    /// `max_j` phase-optimized residual of `D (V X_j V†) = (V Z Z V†) D`.
    pub map_residual: f64,
    /// Phase-optimized residual of `D H = H D`.
    pub hamiltonian_residual: f64,
    /// Smallest singular value (0 for a genuinely non-invertible D).
    pub smallest_singular_value: f64,
}

pub fn duality_check(spec: &ChainSpec) -> Result<DualityReport> {
    let d = noninvertible_d(spec)?;
    let bundle = model::build(spec)?;
    let mut map_residual = 0.0f64;
    for j in 1..=spec.n_sites {
        let (a, b) = mapped_pair(spec, j)?;
        map_residual = map_residual.max(intertwine_check(&d, &a, &b)?);
    }
    let h = &bundle.hamiltonian;
    let hd = h.to_matrix()?;
    let lhs = d.mul(&hd)?;
    let rhs = hd.mul(&d)?;
    let hamiltonian_residual = phase_aligned_max_diff(&lhs, &rhs)?;
    Ok(DualityReport {
        map_residual,
        hamiltonian_residual,
        smallest_singular_value: smallest_singular_value(&d)?,
    })
}

/// The nonlocal map sending the model onto the next-nearest-neighbour
/// Ising chain: `(D_even D_odd)† CZ (D_even D_odd)†`, conjugated onto
/// the model by the circuit map.
pub fn kt_operator(spec: &ChainSpec) -> Result<CMatrix> {
    if spec.boundary != Boundary::Closed {
        return Err(LabError::InvalidArgument(
            "the Ising-map operator needs a closed chain".into(),
        ));
    }
    check_dense_limit(spec.n_sites)?;
    let (d_even, d_odd) = duality_parts_cz(spec)?;
    let dd = d_even.mul(&d_odd)?;
    let cz = circuit_to_matrix(&cz_layer(spec), spec.n_sites)?;
    // Sandwiching the CZ layer between a gauging half and its adjoint
    // leaves every X_j invariant and maps each stabilizer onto its
    // next-nearest-neighbour Ising bond.
    let kt_cz = dd.mul(&cz)?.mul(&dd.dagger())?;
    if matches!(spec.model, Model::Zxz | Model::X) {
        return Ok(kt_cz);
    }
    let v = circuit_map_matrix(spec)?;
    Ok(v.mul(&kt_cz)?.mul(&v.dagger())?)
}

#[derive(Clone, Debug)]
pub struct KtReport {
    /// `max_j` residual of `KT (V X_j V†) = (V X_j V†) KT`.
    pub x_residual: f64,
    /// `max_j` residual of `KT K_j = (V Z_{j-1} Z_{j+1} V†) KT`.
    pub k_residual: f64,
}

pub fn kt_check(spec: &ChainSpec) -> Result<KtReport> {
    let kt = kt_operator(spec)?;
    let bundle = model::build(spec)?;
    let mut x_residual = 0.0f64;
    let mut k_residual = 0.0f64;
    for (idx, &j) in bundle.sites.iter().enumerate() {
        let (x, zz) = mapped_pair(spec, j)?;
        x_residual = x_residual.max(intertwine_check(&kt, &x, &x)?);
        k_residual = k_residual.max(intertwine_check(&kt, &bundle.stabilizers[idx], &zz)?);
    }
    Ok(KtReport { x_residual, k_residual })
}

/// String order value with its (ought-to-vanish) imaginary part.
#[derive(Clone, Copy, Debug)]
pub struct StringOrder {
    pub value: f64,
    pub imag: f64,
}

/// `<state| Π_{k=i..j} K_k |state>` over the retained stabilizers.
pub fn string_order(
    state: &StateVector,
    bundle: &ModelBundle,
    i: usize,
    j: usize,
) -> Result<StringOrder> {
    if i > j {
        return Err(LabError::InvalidArgument("need i <= j".into()));
    }
    let mut w = state.clone();
    for k in i..=j {
        let idx = bundle
            .sites
            .iter()
            .position(|&s| s == k)
            .ok_or_else(|| LabError::InvalidArgument(format!("site {k} has no retained stabilizer")))?;
        w = bundle.stabilizers[idx].apply(&w)?;
    }
    let val = state.inner(&w)?;
    Ok(StringOrder { value: val.re, imag: val.im })
}

/// One logical operator triple at a chain edge.
#[derive(Clone, Debug)]
pub struct LogicalTriple {
    /// Logical index `1..=N`.
    pub index: usize,
    /// Physical site the triple is anchored on.
    pub site: usize,
    pub x: OperatorSum,
    pub y: OperatorSum,
    pub z: OperatorSum,
}

#[derive(Clone, Debug)]
pub struct LogicalSet {
    pub left: Vec<LogicalTriple>,
    pub right: Vec<LogicalTriple>,
}

/// Edge logical operators of an open chain: the circuit images of the
/// bare edge Paulis, one triple per free spin and edge.
pub fn edge_logicals(spec: &ChainSpec) -> Result<LogicalSet> {
    if spec.boundary != Boundary::Open {
        return Err(LabError::InvalidArgument(
            "edge logicals are defined for open chains".into(),
        ));
    }
    let n = spec.n_sites;
    let w = spec.model.half_width();
    let triple = |site: usize, index: usize| -> Result<LogicalTriple> {
        Ok(LogicalTriple {
            index,
            site,
            x: model::conjugated_site_pauli(spec, site, Letter::X)?,
            y: model::conjugated_site_pauli(spec, site, Letter::Y)?,
            z: model::conjugated_site_pauli(spec, site, Letter::Z)?,
        })
    };
    let mut left = Vec::new();
    let mut right = Vec::new();
    for idx in 1..=w {
        left.push(triple(idx, idx)?);
        right.push(triple(n + 1 - idx, idx)?);
    }
    Ok(LogicalSet { left, right })
}

/// The scalar `ω` with `A·B = ω·B·A`, for operator pairs whose products
/// are proportional; `±1` exactly for the edge representations.
pub fn projective_phase(a: &OperatorSum, b: &OperatorSum) -> Result<i8> {
    let ab = a.mul(b)?;
    let ba = b.mul(a)?;
    let scale = ba.max_abs_coeff();
    if scale < 1e-14 {
        return Err(LabError::NotProportional);
    }
    // ratio on the largest term of ba, then verified globally
    let (pref, cref) = ba
        .terms()
        .max_by(|x, y| x.1.norm().partial_cmp(&y.1.norm()).expect("finite"))
        .expect("nonzero sum");
    let cab = ab.coefficient(&pref);
    let omega = cab / cref;
    let diff = OperatorSum::combine(&ab, &ba, C64::new(1.0, 0.0), -omega)?;
    if diff.max_abs_coeff() > 1e-10 * scale.max(1.0) {
        return Err(LabError::NotProportional);
    }
    if (omega - C64::new(1.0, 0.0)).norm() < 1e-10 {
        Ok(1)
    } else if (omega + C64::new(1.0, 0.0)).norm() < 1e-10 {
        Ok(-1)
    } else {
        Err(LabError::InvalidArgument(format!(
            "proportional pair with non-sign ratio {omega}"
        )))
    }
}

/// Sign of `η L η` relative to `L` for each symmetry generator and edge
/// logical.
#[derive(Clone, Debug)]
pub struct ActionRecord {
    pub generator: &'static str,
    pub logical: String,
    pub sign: i8,
}

pub fn edge_symmetry_action(spec: &ChainSpec) -> Result<Vec<ActionRecord>> {
    let logicals = edge_logicals(spec)?;
    let (even, odd) = eta_generators(spec)?;
    let mut records = Vec::new();
    for (gen_name, eta) in [("eta_even", &even), ("eta_odd", &odd)] {
        for (edge, triples) in [("left", &logicals.left), ("right", &logicals.right)] {
            for t in triples.iter() {
                for (letter, op) in [("X", &t.x), ("Y", &t.y), ("Z", &t.z)] {
                    let conj = eta.mul(op)?.mul(eta)?;
                    let plus = conj.max_coeff_diff(op)?;
                    let minus =
                        OperatorSum::combine(&conj, op, C64::new(1.0, 0.0), C64::new(1.0, 0.0))?
                            .max_abs_coeff();
                    let sign = if plus < 1e-10 {
                        1
                    } else if minus < 1e-10 {
                        -1
                    } else {
                        0
                    };
                    records.push(ActionRecord {
                        generator: gen_name,
                        logical: format!("{letter}{}_{edge}", t.index),
                        sign,
                    });
                }
            }
        }
    }
    Ok(records)
}

/// Commutator norms of the edge logicals against the symmetry
/// generators; nonzero values witness the symmetry breaking at the edge.
#[derive(Clone, Debug)]
pub struct AnomalyRecord {
    pub label: String,
    pub commutator_norm: f64,
}

pub fn anomaly_check(spec: &ChainSpec) -> Result<Vec<AnomalyRecord>> {
    check_dense_limit(spec.n_sites)?;
    let logicals = edge_logicals(spec)?;
    let (even, odd) = eta_generators(spec)?;
    let eta = even.mul(&odd)?;
    let mut records = Vec::new();
    let gens = [("eta", &eta), ("eta_even", &even), ("eta_odd", &odd)];
    for (edge, triples) in [("left", &logicals.left), ("right", &logicals.right)] {
        for t in triples.iter() {
            for (gname, g) in gens.iter() {
                let gd = g.to_matrix()?;
                let ld = t.x.to_matrix()?;
                records.push(AnomalyRecord {
                    label: format!("[X{}_{edge}, {gname}]", t.index),
                    commutator_norm: commutator_norm(&ld, &gd)?,
                });
            }
        }
    }
    Ok(records)
}

/// F2 rank of the span of Pauli strings in symplectic form; used to show
/// single-string logicals are independent of the stabilizer group.
pub fn symplectic_rank(strings: &[PauliString]) -> usize {
    let mut rows: Vec<u128> = strings
        .iter()
        .map(|p| ((p.x_mask() as u128) << 64) | p.z_mask() as u128)
        .collect();
    let mut rank = 0usize;
    for bit in (0..128).rev() {
        let mask = 1u128 << bit;
        if let Some(pivot) = (rank..rows.len()).find(|&r| rows[r] & mask != 0) {
            rows.swap(rank, pivot);
            for r in 0..rows.len() {
                if r != rank && rows[r] & mask != 0 {
                    rows[r] ^= rows[rank];
                }
            }
            rank += 1;
        }
    }
    rank
}
