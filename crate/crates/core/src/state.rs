//! Statevector engine and gate catalog.
//!
//! Gates touch only the amplitude pairs or groups selected by their site
//! bits, so a layer of local gates runs in `O(2^n)` per gate. Two-qubit
//! hardware gates (`Cr`, `Ms`) and rotations follow the half-angle
//! exponential conventions listed in `docs/conventions.md` of the
//! workspace:
//!
//! - `Rx(φ) = exp(-i φ X / 2)`, so `Rx Z Rx† = Z cos φ - Y sin φ`.
//! - `Rz(φ) = exp(+i φ Z / 2)`, so `Rz X Rz† = X cos φ - Y sin φ`.
//! - `Zz(φ) = exp(-i φ Z⊗Z / 4)`.
//! - `Cr(φ) = exp(-i φ Z⊗X / 2)`, `Ms(φ) = exp(-i φ X⊗X / 2)`.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{CoreError, Result};
use crate::math;
use crate::matrix::CMatrix;
use crate::{C64, MAX_SITES};

/// Rotation axes exposed by the conjugation API.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Axis {
    X,
    Z,
}

/// A normalized state on `n_sites` qubits; site 1 is the least
/// significant bit of the amplitude index.
#[derive(Clone, PartialEq, Debug)]
pub struct StateVector {
    n_sites: u32,
    amps: Vec<C64>,
}

impl StateVector {
    /// `|0...0>`.
    pub fn zero_state(n_sites: usize) -> Result<Self> {
        if n_sites == 0 || n_sites > MAX_SITES {
            return Err(CoreError::CapacityExceeded {
                needed: n_sites,
                limit: MAX_SITES,
            });
        }
        // practical cap: amplitudes must fit in memory
        if n_sites > 30 {
            return Err(CoreError::CapacityExceeded {
                needed: n_sites,
                limit: 30,
            });
        }
        let mut amps = vec![C64::new(0.0, 0.0); 1usize << n_sites];
        amps[0] = C64::new(1.0, 0.0);
        Ok(Self {
            n_sites: n_sites as u32,
            amps,
        })
    }

    /// `|+...+>`.
    pub fn plus_state(n_sites: usize) -> Result<Self> {
        let mut v = Self::zero_state(n_sites)?;
        let dim = v.amps.len();
        let a = C64::new(1.0 / math::sqrt(dim as f64), 0.0);
        for amp in &mut v.amps {
            *amp = a;
        }
        Ok(v)
    }

    pub fn from_amplitudes(amps: Vec<C64>) -> Result<Self> {
        let dim = amps.len();
        if dim == 0 || !dim.is_power_of_two() {
            return Err(CoreError::InvalidSpec("amplitude length must be 2^n"));
        }
        Ok(Self {
            n_sites: dim.trailing_zeros(),
            amps,
        })
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites as usize
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        math::sqrt(self.amps.iter().map(|a| a.norm_sqr()).sum())
    }

    #[must_use]
    pub fn normalized(&self) -> Self {
        let n = self.norm();
        let mut out = self.clone();
        if n > 0.0 {
            for a in &mut out.amps {
                *a /= n;
            }
        }
        out
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &Self) -> Result<C64> {
        if self.n_sites != other.n_sites {
            return Err(CoreError::DimensionMismatch {
                left: self.n_sites(),
                right: other.n_sites(),
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(other.amps.iter())
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub fn add_scaled(&self, other: &Self, c: C64) -> Result<Self> {
        if self.n_sites != other.n_sites {
            return Err(CoreError::DimensionMismatch {
                left: self.n_sites(),
                right: other.n_sites(),
            });
        }
        let amps = self
            .amps
            .iter()
            .zip(other.amps.iter())
            .map(|(a, b)| a + c * b)
            .collect();
        Self::from_amplitudes(amps)
    }

    #[must_use]
    pub fn scale(&self, c: C64) -> Self {
        let mut out = self.clone();
        for a in &mut out.amps {
            *a *= c;
        }
        out
    }
}

/// `|<a|b>|`; 1 means equal up to a global phase.
pub fn fidelity(a: &StateVector, b: &StateVector) -> Result<f64> {
    Ok(a.inner(b)?.norm())
}

/// The gate catalog. Sites are 1-indexed and must be distinct.
#[derive(Clone, PartialEq, Debug)]
pub enum Gate {
    H { site: usize },
    X { site: usize },
    Y { site: usize },
    Z { site: usize },
    Cx { control: usize, target: usize },
    Cz { a: usize, b: usize },
    Cp { a: usize, b: usize, angle: f64 },
    Ccz { a: usize, b: usize, c: usize },
    /// `C^N Z` on the listed sites (N + 1 of them).
    Cnz { sites: Vec<usize> },
    /// `C^N P(φ)` on the listed sites.
    Cnp { sites: Vec<usize>, angle: f64 },
    Rx { site: usize, angle: f64 },
    Rz { site: usize, angle: f64 },
    /// Ising gate `exp(-i φ Z⊗Z / 4)`.
    Zz { a: usize, b: usize, angle: f64 },
    /// Cross-resonance gate `exp(-i φ Z⊗X / 2)`.
    Cr { control: usize, target: usize, angle: f64 },
    /// Mølmer–Sørensen gate `exp(-i φ X⊗X / 2)`.
    Ms { a: usize, b: usize, angle: f64 },
}

impl Gate {
    pub fn sites(&self) -> Vec<usize> {
        match self {
            Gate::H { site }
            | Gate::X { site }
            | Gate::Y { site }
            | Gate::Z { site }
            | Gate::Rx { site, .. }
            | Gate::Rz { site, .. } => vec![*site],
            Gate::Cx { control, target } => vec![*control, *target],
            Gate::Cz { a, b } => vec![*a, *b],
            Gate::Cp { a, b, .. } => vec![*a, *b],
            Gate::Zz { a, b, .. } => vec![*a, *b],
            Gate::Cr { control, target, .. } => vec![*control, *target],
            Gate::Ms { a, b, .. } => vec![*a, *b],
            Gate::Ccz { a, b, c } => vec![*a, *b, *c],
            Gate::Cnz { sites } => sites.clone(),
            Gate::Cnp { sites, .. } => sites.clone(),
        }
    }

    /// Diagonal gates commute and are representable as phase polynomials.
    pub fn is_diagonal(&self) -> bool {
        matches!(
            self,
            Gate::Z { .. }
                | Gate::Cz { .. }
                | Gate::Cp { .. }
                | Gate::Ccz { .. }
                | Gate::Cnz { .. }
                | Gate::Cnp { .. }
                | Gate::Rz { .. }
                | Gate::Zz { .. }
        )
    }

    fn validate(&self, n_sites: usize) -> Result<()> {
        let sites = self.sites();
        if sites.is_empty() {
            return Err(CoreError::BadGateSites("gate with no sites"));
        }
        for &s in &sites {
            if s == 0 || s > n_sites {
                return Err(CoreError::SiteOutOfRange { site: s, n_sites });
            }
        }
        let mut mask = 0u64;
        for &s in &sites {
            let bit = 1u64 << (s - 1);
            if mask & bit != 0 {
                return Err(CoreError::BadGateSites("repeated site"));
            }
            mask |= bit;
        }
        if let Gate::Cnz { sites } | Gate::Cnp { sites, .. } = self {
            if sites.len() < 2 {
                return Err(CoreError::BadGateSites("controlled gate needs >= 2 sites"));
            }
        }
        Ok(())
    }
}

#[inline]
fn bit_of(site: usize) -> u64 {
    1u64 << (site - 1)
}

fn mask_of(sites: &[usize]) -> u64 {
    sites.iter().fold(0u64, |m, &s| m | bit_of(s))
}

/// Apply one gate, returning the updated state.
pub fn apply_gate(v: &StateVector, gate: &Gate) -> Result<StateVector> {
    gate.validate(v.n_sites())?;
    let dim = v.dim();
    let mut amps = v.amplitudes().to_vec();
    match gate {
        Gate::H { site } => {
            let m = bit_of(*site);
            let s = 1.0 / math::sqrt(2.0);
            for b in 0..dim as u64 {
                if b & m == 0 {
                    let lo = amps[b as usize];
                    let hi = amps[(b | m) as usize];
                    amps[b as usize] = (lo + hi) * s;
                    amps[(b | m) as usize] = (lo - hi) * s;
                }
            }
        }
        Gate::X { site } => {
            let m = bit_of(*site);
            for b in 0..dim as u64 {
                if b & m == 0 {
                    amps.swap(b as usize, (b | m) as usize);
                }
            }
        }
        Gate::Y { site } => {
            let m = bit_of(*site);
            let i = C64::new(0.0, 1.0);
            for b in 0..dim as u64 {
                if b & m == 0 {
                    let lo = amps[b as usize];
                    let hi = amps[(b | m) as usize];
                    amps[b as usize] = -i * hi;
                    amps[(b | m) as usize] = i * lo;
                }
            }
        }
        Gate::Z { site } => {
            let m = bit_of(*site);
            for b in 0..dim as u64 {
                if b & m != 0 {
                    amps[b as usize] = -amps[b as usize];
                }
            }
        }
        Gate::Cx { control, target } => {
            let mc = bit_of(*control);
            let mt = bit_of(*target);
            for b in 0..dim as u64 {
                if b & mc != 0 && b & mt == 0 {
                    amps.swap(b as usize, (b | mt) as usize);
                }
            }
        }
        Gate::Cz { .. } | Gate::Ccz { .. } | Gate::Cnz { .. } => {
            let m = mask_of(&gate.sites());
            for b in 0..dim as u64 {
                if b & m == m {
                    amps[b as usize] = -amps[b as usize];
                }
            }
        }
        Gate::Cp { angle, .. } | Gate::Cnp { angle, .. } => {
            let m = mask_of(&gate.sites());
            let ph = C64::new(math::cos(*angle), math::sin(*angle));
            for b in 0..dim as u64 {
                if b & m == m {
                    amps[b as usize] *= ph;
                }
            }
        }
        Gate::Rz { site, angle } => {
            let m = bit_of(*site);
            let plus = C64::new(math::cos(angle / 2.0), math::sin(angle / 2.0));
            let minus = plus.conj();
            for b in 0..dim as u64 {
                amps[b as usize] *= if b & m == 0 { plus } else { minus };
            }
        }
        Gate::Zz { a, b: bb, angle } => {
            let (ma, mb) = (bit_of(*a), bit_of(*bb));
            let aligned = C64::new(math::cos(angle / 4.0), -math::sin(angle / 4.0));
            let anti = aligned.conj();
            for b in 0..dim as u64 {
                let parity = (b & ma != 0) ^ (b & mb != 0);
                amps[b as usize] *= if parity { anti } else { aligned };
            }
        }
        Gate::Rx { site, angle } => {
            let m = bit_of(*site);
            let c = C64::new(math::cos(angle / 2.0), 0.0);
            let ms = C64::new(0.0, -math::sin(angle / 2.0));
            for b in 0..dim as u64 {
                if b & m == 0 {
                    let lo = amps[b as usize];
                    let hi = amps[(b | m) as usize];
                    amps[b as usize] = c * lo + ms * hi;
                    amps[(b | m) as usize] = ms * lo + c * hi;
                }
            }
        }
        Gate::Cr { control, target, angle } => {
            let mc = bit_of(*control);
            let mt = bit_of(*target);
            let c = C64::new(math::cos(angle / 2.0), 0.0);
            let s = math::sin(angle / 2.0);
            for b in 0..dim as u64 {
                if b & mt == 0 {
                    // X-rotation sign set by the control's Z eigenvalue
                    let ms = if b & mc == 0 {
                        C64::new(0.0, -s)
                    } else {
                        C64::new(0.0, s)
                    };
                    let lo = amps[b as usize];
                    let hi = amps[(b | mt) as usize];
                    amps[b as usize] = c * lo + ms * hi;
                    amps[(b | mt) as usize] = ms * lo + c * hi;
                }
            }
        }
        Gate::Ms { a, b: bb, angle } => {
            let m = bit_of(*a) | bit_of(*bb);
            let c = C64::new(math::cos(angle / 2.0), 0.0);
            let ms = C64::new(0.0, -math::sin(angle / 2.0));
            let mut seen = vec![false; dim];
            for b in 0..dim as u64 {
                if seen[b as usize] {
                    continue;
                }
                let p = b ^ m;
                seen[b as usize] = true;
                seen[p as usize] = true;
                let lo = amps[b as usize];
                let hi = amps[p as usize];
                amps[b as usize] = c * lo + ms * hi;
                amps[p as usize] = ms * lo + c * hi;
            }
        }
    }
    StateVector::from_amplitudes(amps)
}

/// Apply a gate sequence left to right (first element acts first).
pub fn apply_circuit(v: &StateVector, circuit: &[Gate]) -> Result<StateVector> {
    let mut out = v.clone();
    for g in circuit {
        out = apply_gate(&out, g)?;
    }
    Ok(out)
}

/// Dense matrix of a gate embedded on an `n_sites` chain.
pub fn gate_to_matrix(gate: &Gate, n_sites: usize) -> Result<CMatrix> {
    if n_sites > crate::DENSE_SITE_LIMIT {
        return Err(CoreError::CapacityExceeded {
            needed: n_sites,
            limit: crate::DENSE_SITE_LIMIT,
        });
    }
    gate.validate(n_sites)?;
    let dim = 1usize << n_sites;
    let mut m = CMatrix::zeros(dim);
    for col in 0..dim {
        let mut e = StateVector::zero_state(n_sites)?;
        {
            let amps = e.amps.as_mut_slice();
            amps[0] = C64::new(0.0, 0.0);
            amps[col] = C64::new(1.0, 0.0);
        }
        let out = apply_gate(&e, gate)?;
        for row in 0..dim {
            let val = out.amplitudes()[row];
            if val.norm_sqr() != 0.0 {
                *m.at_mut(row, col) = val;
            }
        }
    }
    Ok(m)
}

/// Dense matrix of a whole circuit (first gate acts first).
pub fn circuit_to_matrix(circuit: &[Gate], n_sites: usize) -> Result<CMatrix> {
    if n_sites > crate::DENSE_SITE_LIMIT {
        return Err(CoreError::CapacityExceeded {
            needed: n_sites,
            limit: crate::DENSE_SITE_LIMIT,
        });
    }
    let dim = 1usize << n_sites;
    let mut m = CMatrix::zeros(dim);
    for col in 0..dim {
        let mut e = StateVector::zero_state(n_sites)?;
        {
            let amps = e.amps.as_mut_slice();
            amps[0] = C64::new(0.0, 0.0);
            amps[col] = C64::new(1.0, 0.0);
        }
        let out = apply_circuit(&e, circuit)?;
        for row in 0..dim {
            let val = out.amplitudes()[row];
            if val.norm_sqr() != 0.0 {
                *m.at_mut(row, col) = val;
            }
        }
    }
    Ok(m)
}

/// Max-norm distance between a target gate and a circuit claiming to
/// implement it, minimized over one global phase.
pub fn verify_decomposition(target: &Gate, circuit: &[Gate], n_sites: usize) -> Result<f64> {
    let t = gate_to_matrix(target, n_sites)?;
    let c = circuit_to_matrix(circuit, n_sites)?;
    crate::matrix::phase_aligned_max_diff(&t, &c)
}
