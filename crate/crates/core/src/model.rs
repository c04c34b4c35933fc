//! Chain-model factory: a [`ChainSpec`] fixes the chain length, boundary,
//! model family and per-site angles; [`build`] derives the stabilizers,
//! Hamiltonian, generating circuit and reference cluster state from it.
//!
//! Every stabilizer is produced mechanically as `K_j = U X_j U^{-1}`:
//! diagonal layers go through the phase-polynomial engine, Hadamard and
//! rotation layers through Pauli conjugation. No model's stabilizers are
//! typed in by hand.

use alloc::vec::Vec;

use crate::error::{CoreError, Result};
use crate::pauli::{x_string_from_mask, Letter, OperatorSum, PauliString, RotationAxis};
use crate::phase::{circuit_polynomial, PhasePolynomial};
use crate::state::{apply_circuit, Gate, StateVector};
use crate::C64;

/// Chains longer than this skip the reference-state construction.
pub const REFERENCE_STATE_SITE_LIMIT: usize = 22;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Boundary {
    Open,
    Closed,
}

/// Which stabilizers an open chain keeps.
///
/// `Drop` keeps only those `j` whose conjugated support fits fully inside
/// the chain (the bulk window `[N+1, 2L-N]` for a half-width-`N` model),
/// exposing the edge degeneracy. `Include` keeps all `j` with the
/// edge-truncated conjugation, which leaves the spectrum unitarily
/// equivalent to the free model and the ground state unique.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum EdgeTerms {
    Include,
    Drop,
}

/// Model families. Angle vectors carry one entry per applicable site,
/// bond or gate window.
#[derive(Clone, PartialEq, Debug)]
pub enum Model {
    /// Free model `-Σ X_j`; the trivial reference point.
    X,
    /// CZ-entangled chain with `Z X Z` stabilizers.
    Zxz,
    /// Hadamard image of `Zxz` on every site: `X Z X` stabilizers.
    Xzx,
    /// Hadamard image on even sites only: alternating `ZZZ` / `XXX`.
    ZzzXxx,
    /// `Zxz` dressed by per-site X rotations (bit-flip errors).
    BitFlip { angles: Vec<f64> },
    /// `Zxz` dressed by per-site Z rotations (phase-flip errors).
    PhaseFlip { angles: Vec<f64> },
    /// Controlled-phase chain (weighted graph state), one angle per bond.
    Cp { angles: Vec<f64> },
    /// CCZ chain (hypergraph state), five-site stabilizers.
    Ccz,
    /// `C^N Z` chain, `(2N+1)`-site stabilizers.
    Cnz { order: usize },
    /// `C^N P(φ)` chain, one angle per gate window.
    Cnp { order: usize, angles: Vec<f64> },
    /// Independent single-Z and Ising-ZZ layers, the hardware-style
    /// generalization of the CP chain.
    IsingZz { z_angles: Vec<f64>, zz_angles: Vec<f64> },
}

impl Model {
    /// Half-width of the stabilizer support: `K_j` acts inside
    /// `[j - w, j + w]`.
    pub fn half_width(&self) -> usize {
        match self {
            Model::X => 0,
            Model::Zxz
            | Model::Xzx
            | Model::ZzzXxx
            | Model::BitFlip { .. }
            | Model::PhaseFlip { .. }
            | Model::Cp { .. }
            | Model::IsingZz { .. } => 1,
            Model::Ccz => 2,
            Model::Cnz { order } | Model::Cnp { order, .. } => *order,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Model::X => "x",
            Model::Zxz => "zxz",
            Model::Xzx => "xzx",
            Model::ZzzXxx => "zzz-xxx",
            Model::BitFlip { .. } => "bitflip",
            Model::PhaseFlip { .. } => "phaseflip",
            Model::Cp { .. } => "cp",
            Model::Ccz => "ccz",
            Model::Cnz { .. } => "cnz",
            Model::Cnp { .. } => "cnp",
            Model::IsingZz { .. } => "ising-zz",
        }
    }
}

/// The single source of truth for model construction.
#[derive(Clone, PartialEq, Debug)]
pub struct ChainSpec {
    pub n_sites: usize,
    pub boundary: Boundary,
    pub model: Model,
    pub edge_terms: EdgeTerms,
}

impl ChainSpec {
    pub fn new(n_sites: usize, boundary: Boundary, model: Model, edge_terms: EdgeTerms) -> Result<Self> {
        let spec = Self {
            n_sites,
            boundary,
            model,
            edge_terms,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_sites < 2 || self.n_sites % 2 != 0 {
            return Err(CoreError::InvalidSpec("n_sites must be an even integer >= 2"));
        }
        if self.n_sites > crate::MAX_SITES {
            return Err(CoreError::CapacityExceeded {
                needed: self.n_sites,
                limit: crate::MAX_SITES,
            });
        }
        let n = self.n_sites;
        match &self.model {
            Model::BitFlip { angles } | Model::PhaseFlip { angles } => {
                if angles.len() != n {
                    return Err(CoreError::InvalidSpec("need one angle per site"));
                }
            }
            Model::Cp { angles } => {
                if angles.len() != self.bonds().len() {
                    return Err(CoreError::InvalidSpec("need one angle per bond"));
                }
            }
            Model::Cnz { order } => {
                if *order < 1 || n < 2 * order + 2 {
                    return Err(CoreError::InvalidSpec("need order >= 1 and 2L >= 2N + 2"));
                }
            }
            Model::Cnp { order, angles } => {
                if *order < 1 || n < 2 * order + 2 {
                    return Err(CoreError::InvalidSpec("need order >= 1 and 2L >= 2N + 2"));
                }
                if angles.len() != self.windows(*order).len() {
                    return Err(CoreError::InvalidSpec("need one angle per gate window"));
                }
            }
            Model::IsingZz { z_angles, zz_angles } => {
                if z_angles.len() != n {
                    return Err(CoreError::InvalidSpec("need one Z angle per site"));
                }
                if zz_angles.len() != self.bonds().len() {
                    return Err(CoreError::InvalidSpec("need one ZZ angle per bond"));
                }
            }
            _ => {}
        }
        Ok(())
    }

    #[inline]
    fn wrap(&self, site: usize) -> usize {
        ((site - 1) % self.n_sites) + 1
    }

    /// Nearest-neighbour bonds `(j, j+1)`, wrapping on closed chains.
    pub fn bonds(&self) -> Vec<(usize, usize)> {
        let n = self.n_sites;
        match self.boundary {
            Boundary::Open => (1..n).map(|j| (j, j + 1)).collect(),
            Boundary::Closed => (1..=n).map(|j| (j, self.wrap(j + 1))).collect(),
        }
    }

    /// Gate windows `{j, ..., j+N}` for an `N+1`-site gate.
    pub fn windows(&self, order: usize) -> Vec<Vec<usize>> {
        let n = self.n_sites;
        let js: Vec<usize> = match self.boundary {
            Boundary::Open => {
                if n < order + 1 {
                    Vec::new()
                } else {
                    (1..=n - order).collect()
                }
            }
            Boundary::Closed => (1..=n).collect(),
        };
        js.into_iter()
            .map(|j| (0..=order).map(|k| self.wrap(j + k)).collect())
            .collect()
    }

    /// Sites whose stabilizers the Hamiltonian keeps.
    pub fn retained_sites(&self) -> Vec<usize> {
        let n = self.n_sites;
        match (self.boundary, self.edge_terms) {
            (Boundary::Closed, _) | (Boundary::Open, EdgeTerms::Include) => (1..=n).collect(),
            (Boundary::Open, EdgeTerms::Drop) => {
                let w = self.model.half_width();
                if n >= 2 * w {
                    (w + 1..=n - w).collect()
                } else {
                    Vec::new()
                }
            }
        }
    }

    /// Mask of even sites.
    pub fn even_mask(&self) -> u64 {
        (1..=self.n_sites)
            .filter(|s| s % 2 == 0)
            .fold(0u64, |m, s| m | (1u64 << (s - 1)))
    }

    /// Mask of odd sites.
    pub fn odd_mask(&self) -> u64 {
        (1..=self.n_sites)
            .filter(|s| s % 2 == 1)
            .fold(0u64, |m, s| m | (1u64 << (s - 1)))
    }
}

/// Everything derived from one spec.
#[derive(Clone, Debug)]
pub struct ModelBundle {
    pub spec: ChainSpec,
    /// Stabilizer site indices, ascending.
    pub sites: Vec<usize>,
    /// `K_j` for each retained site, same order as `sites`.
    pub stabilizers: Vec<OperatorSum>,
    /// `-Σ_j K_j` over the retained sites.
    pub hamiltonian: OperatorSum,
    /// Full circuit from `|0...0>`: Hadamard preparation plus the
    /// model's entangling layers.
    pub generating_circuit: Vec<Gate>,
    /// The cluster state, when the chain is small enough to hold it.
    pub reference_state: Option<StateVector>,
}

/// The CZ layer for this chain's bonds (used both by the ZXZ family and
/// as the reference layer of the circuit-mapping rule).
pub fn cz_layer(spec: &ChainSpec) -> Vec<Gate> {
    spec.bonds()
        .into_iter()
        .map(|(a, b)| Gate::Cz { a, b })
        .collect()
}

/// The model's entangling layers, applied after `H^{⊗n}`.
pub fn entangling_circuit(spec: &ChainSpec) -> Vec<Gate> {
    let n = spec.n_sites;
    let mut gates = Vec::new();
    match &spec.model {
        Model::X => {}
        Model::Zxz => gates.extend(cz_layer(spec)),
        Model::Xzx => {
            gates.extend(cz_layer(spec));
            gates.extend((1..=n).map(|site| Gate::H { site }));
        }
        Model::ZzzXxx => {
            gates.extend(cz_layer(spec));
            gates.extend((1..=n).filter(|s| s % 2 == 0).map(|site| Gate::H { site }));
        }
        Model::BitFlip { angles } => {
            gates.extend(cz_layer(spec));
            gates.extend(
                angles
                    .iter()
                    .enumerate()
                    .map(|(k, &angle)| Gate::Rx { site: k + 1, angle }),
            );
        }
        Model::PhaseFlip { angles } => {
            gates.extend(cz_layer(spec));
            gates.extend(
                angles
                    .iter()
                    .enumerate()
                    .map(|(k, &angle)| Gate::Rz { site: k + 1, angle }),
            );
        }
        Model::Cp { angles } => {
            gates.extend(
                spec.bonds()
                    .into_iter()
                    .zip(angles.iter())
                    .map(|((a, b), &angle)| Gate::Cp { a, b, angle }),
            );
        }
        Model::Ccz => {
            gates.extend(spec.windows(2).into_iter().map(|w| Gate::Ccz {
                a: w[0],
                b: w[1],
                c: w[2],
            }));
        }
        Model::Cnz { order } => {
            gates.extend(
                spec.windows(*order)
                    .into_iter()
                    .map(|sites| Gate::Cnz { sites }),
            );
        }
        Model::Cnp { order, angles } => {
            gates.extend(
                spec.windows(*order)
                    .into_iter()
                    .zip(angles.iter())
                    .map(|(sites, &angle)| Gate::Cnp { sites, angle }),
            );
        }
        Model::IsingZz { z_angles, zz_angles } => {
            // e^{i φ Z / 4} = Rz(φ / 2)
            gates.extend(
                z_angles
                    .iter()
                    .enumerate()
                    .map(|(k, &phi)| Gate::Rz { site: k + 1, angle: phi / 2.0 }),
            );
            gates.extend(
                spec.bonds()
                    .into_iter()
                    .zip(zz_angles.iter())
                    .map(|((a, b), &angle)| Gate::Zz { a, b, angle }),
            );
        }
    }
    gates
}

/// Is the model's whole entangling layer diagonal?
fn is_diagonal_model(model: &Model) -> bool {
    matches!(
        model,
        Model::X
            | Model::Zxz
            | Model::Cp { .. }
            | Model::Ccz
            | Model::Cnz { .. }
            | Model::Cnp { .. }
            | Model::IsingZz { .. }
    )
}

/// Phase polynomial of the model's diagonal layers. For the dressed
/// families this is the CZ layer only; the Hadamard or rotation layer is
/// handled separately.
pub fn layer_polynomial(spec: &ChainSpec) -> Result<PhasePolynomial> {
    let n = spec.n_sites;
    if is_diagonal_model(&spec.model) {
        circuit_polynomial(&entangling_circuit(spec), n)
    } else {
        circuit_polynomial(&cz_layer(spec), n)
    }
}

/// Conjugate an operator through the model's non-diagonal dressing layer.
fn conjugate_by_post_layer(spec: &ChainSpec, op: &OperatorSum) -> Result<OperatorSum> {
    let n = spec.n_sites;
    let mut out = op.clone();
    match &spec.model {
        Model::Xzx => {
            for site in 1..=n {
                out = out.conjugate_by_hadamard(site)?;
            }
        }
        Model::ZzzXxx => {
            for site in (2..=n).step_by(2) {
                out = out.conjugate_by_hadamard(site)?;
            }
        }
        Model::BitFlip { angles } => {
            for (k, &angle) in angles.iter().enumerate() {
                out = out.conjugate_by_rotation(RotationAxis::X, k + 1, angle)?;
            }
        }
        Model::PhaseFlip { angles } => {
            for (k, &angle) in angles.iter().enumerate() {
                out = out.conjugate_by_rotation(RotationAxis::Z, k + 1, angle)?;
            }
        }
        _ => {}
    }
    Ok(out)
}

/// `U op U†` for the model's entangling circuit `U` (everything after
/// the Hadamard preparation).
pub fn conjugate_by_entangler(spec: &ChainSpec, op: &OperatorSum) -> Result<OperatorSum> {
    let poly = layer_polynomial(spec)?;
    let conj = conjugate_opsum_by_poly(&poly, op)?;
    conjugate_by_post_layer(spec, &conj)
}

/// `V op V†` where `V` maps the CZ-entangled chain onto this model
/// (`V = U · CZ^{-1}`); the rule behind every mapped symmetry operator.
pub fn conjugate_by_circuit_map(spec: &ChainSpec, op: &OperatorSum) -> Result<OperatorSum> {
    if is_diagonal_model(&spec.model) {
        if matches!(spec.model, Model::X) {
            return Ok(op.clone());
        }
        let poly = layer_polynomial(spec)?
            .compose(&circuit_polynomial(&cz_layer(spec), spec.n_sites)?)?;
        conjugate_opsum_by_poly(&poly, op)
    } else {
        // U = post · CZ, so V = post
        conjugate_by_post_layer(spec, op)
    }
}

/// Conjugate an arbitrary Pauli sum by a diagonal circuit: each term
/// `P = X-part · Z-part` becomes `P · exp(i [θ(x ⊕ flips) − θ(x)])`.
pub fn conjugate_opsum_by_poly(poly: &PhasePolynomial, op: &OperatorSum) -> Result<OperatorSum> {
    let n = op.n_sites();
    if poly.n_sites() != n {
        return Err(CoreError::DimensionMismatch {
            left: poly.n_sites(),
            right: n,
        });
    }
    let mut out = OperatorSum::zero(n)?;
    let term_list: Vec<(PauliString, C64)> = op.terms().collect();
    for (p, c) in term_list {
        let x_mask = p.x_mask();
        let dressed = if x_mask == 0 {
            OperatorSum::from_term(&p, c)
        } else {
            let delta = poly.flipped(x_mask).compose(&poly.negated())?;
            let diag = delta.exp_to_opsum()?;
            OperatorSum::from_term(&p, c).mul(&diag)?
        };
        out = out.add(&dressed)?;
    }
    Ok(out)
}

fn stabilizer_at(spec: &ChainSpec, site: usize) -> Result<OperatorSum> {
    if matches!(spec.model, Model::X) {
        let x = PauliString::single(spec.n_sites, site, Letter::X)?;
        return Ok(OperatorSum::from_term(&x, C64::new(1.0, 0.0)));
    }
    let poly = layer_polynomial(spec)?;
    let k = poly.conjugate_x(site)?;
    conjugate_by_post_layer(spec, &k)
}

/// Derive the full bundle for a spec.
pub fn build(spec: &ChainSpec) -> Result<ModelBundle> {
    spec.validate()?;
    let sites = spec.retained_sites();
    let mut stabilizers = Vec::with_capacity(sites.len());
    for &j in &sites {
        stabilizers.push(stabilizer_at(spec, j)?);
    }
    let mut hamiltonian = OperatorSum::zero(spec.n_sites)?;
    for k in &stabilizers {
        hamiltonian = OperatorSum::combine(&hamiltonian, k, C64::new(1.0, 0.0), C64::new(-1.0, 0.0))?;
    }
    let mut generating_circuit: Vec<Gate> =
        (1..=spec.n_sites).map(|site| Gate::H { site }).collect();
    generating_circuit.extend(entangling_circuit(spec));
    let reference_state = if spec.n_sites <= REFERENCE_STATE_SITE_LIMIT {
        Some(cluster_state(spec)?)
    } else {
        None
    };
    Ok(ModelBundle {
        spec: spec.clone(),
        sites,
        stabilizers,
        hamiltonian,
        generating_circuit,
        reference_state,
    })
}

/// Build the model's cluster state from `|0...0>`.
pub fn cluster_state(spec: &ChainSpec) -> Result<StateVector> {
    spec.validate()?;
    let mut circuit: Vec<Gate> = (1..=spec.n_sites).map(|site| Gate::H { site }).collect();
    circuit.extend(entangling_circuit(spec));
    let v = apply_circuit(&StateVector::zero_state(spec.n_sites)?, &circuit)?;
    Ok(v.normalized())
}

/// The free Hamiltonian `-Σ X_j` over the spec's retained sites.
pub fn x_hamiltonian(spec: &ChainSpec) -> Result<OperatorSum> {
    let mut h = OperatorSum::zero(spec.n_sites)?;
    for j in spec.retained_sites() {
        let x = PauliString::single(spec.n_sites, j, Letter::X)?;
        h.accumulate(&x, C64::new(-1.0, 0.0));
    }
    h.prune();
    Ok(h)
}

/// `α·H_model + (1-α)·H_X` over the same retained sites.
pub fn interpolated(spec: &ChainSpec, alpha: f64) -> Result<OperatorSum> {
    if !matches!(spec.model, Model::Zxz | Model::Ccz | Model::Cnz { .. }) {
        return Err(CoreError::Unsupported(
            "interpolation is defined for the zxz, ccz and cnz models",
        ));
    }
    let bundle = build(spec)?;
    let hx = x_hamiltonian(spec)?;
    OperatorSum::combine(
        &bundle.hamiltonian,
        &hx,
        C64::new(alpha, 0.0),
        C64::new(1.0 - alpha, 0.0),
    )
}

/// Next-nearest-neighbour Ising sum `Σ_j Z_{j-1} Z_{j+1}` with the spec's
/// boundary convention; duplicate bonds on tiny closed chains merge by
/// coefficient addition.
pub fn ising_nnn(spec: &ChainSpec) -> Result<OperatorSum> {
    let n = spec.n_sites;
    let mut h = OperatorSum::zero(n)?;
    let centers: Vec<usize> = match spec.boundary {
        Boundary::Open => (2..n).collect(),
        Boundary::Closed => (1..=n).collect(),
    };
    for j in centers {
        let left = if j == 1 { n } else { j - 1 };
        let right = if j == n { 1 } else { j + 1 };
        let p = PauliString::from_sites(n, &[(left, Letter::Z), (right, Letter::Z)])?;
        h.accumulate(&p, C64::new(1.0, 0.0));
    }
    h.prune();
    Ok(h)
}

/// Frustration-freeness evidence for a bundle.
#[derive(Clone, Debug)]
pub struct FrustrationReport {
    /// `max_j ‖K_j |ψ> − |ψ>‖` on the reference state.
    pub max_residual: f64,
    /// `-(number of retained stabilizers)`; the frustration-free ground
    /// energy.
    pub ground_energy: f64,
    pub n_stabilizers: usize,
}

pub fn frustration_check(bundle: &ModelBundle) -> Result<FrustrationReport> {
    let state = bundle.reference_state.as_ref().ok_or(CoreError::CapacityExceeded {
        needed: bundle.spec.n_sites,
        limit: REFERENCE_STATE_SITE_LIMIT,
    })?;
    let mut max_residual = 0.0f64;
    for k in &bundle.stabilizers {
        let kv = k.apply(state)?;
        let diff = kv.add_scaled(state, C64::new(-1.0, 0.0))?;
        let r = diff.norm();
        if r > max_residual {
            max_residual = r;
        }
    }
    Ok(FrustrationReport {
        max_residual,
        ground_energy: -(bundle.stabilizers.len() as f64),
        n_stabilizers: bundle.stabilizers.len(),
    })
}

/// The CX-route construction of the Hadamard-mapped cluster state: every
/// bond contributes one CNOT from its even end to its odd end, the whole
/// layer sandwiched between Hadamards on the even sites.
pub fn xzx_state_via_cx(spec: &ChainSpec) -> Result<StateVector> {
    spec.validate()?;
    let n = spec.n_sites;
    let h_even: Vec<Gate> = (2..=n).step_by(2).map(|site| Gate::H { site }).collect();
    let mut circuit = h_even.clone();
    for (a, b) in spec.bonds() {
        let (control, target) = if a % 2 == 0 { (a, b) } else { (b, a) };
        circuit.push(Gate::Cx { control, target });
    }
    circuit.extend(h_even);
    let v = apply_circuit(&StateVector::zero_state(n)?, &circuit)?;
    Ok(v.normalized())
}

/// Symmetry generator pair `(η_even, η_odd)` as Pauli sums, produced by
/// the circuit-mapping rule: the bare even/odd X products conjugated by
/// `V = U · CZ^{-1}`.
pub fn eta_generators(spec: &ChainSpec) -> Result<(OperatorSum, OperatorSum)> {
    let n = spec.n_sites;
    let even = OperatorSum::from_term(
        &x_string_from_mask(n, spec.even_mask())?,
        C64::new(1.0, 0.0),
    );
    let odd = OperatorSum::from_term(
        &x_string_from_mask(n, spec.odd_mask())?,
        C64::new(1.0, 0.0),
    );
    Ok((
        conjugate_by_circuit_map(spec, &even)?,
        conjugate_by_circuit_map(spec, &odd)?,
    ))
}

/// `U P U†` for a single-site Pauli through the model's open-chain
/// circuit; the building block of the edge logical operators.
pub fn conjugated_site_pauli(spec: &ChainSpec, site: usize, letter: Letter) -> Result<OperatorSum> {
    let p = PauliString::single(spec.n_sites, site, letter)?;
    conjugate_by_entangler(spec, &OperatorSum::from_term(&p, C64::new(1.0, 0.0)))
}
