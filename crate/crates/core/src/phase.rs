//! Diagonal gates as multilinear Boolean phase polynomials.
//!
//! A diagonal circuit acts as `U|x> = e^{iθ(x)}|x>` with
//! `θ(x) = Σ_S c_S Π_{j∈S} x_j` over bits `x_j ∈ {0,1}`. Composition of
//! diagonal circuits is coefficient-wise addition, so a whole entangling
//! layer is one polynomial. Conjugating a bit flip through the layer,
//!
//! `U X_j U† |x> = e^{i[θ(x⊕e_j) − θ(x)]} |x ⊕ e_j>`,
//!
//! turns into operator algebra by expanding the diagonal phase factor in
//! `Z`-monomials. This is how every stabilizer in the model factory is
//! produced.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::error::{CoreError, Result};
use crate::math::{self, reduce_angle, TAU};
use crate::pauli::{x_string_from_mask, OperatorSum};
use crate::state::Gate;
use crate::{C64, EXPANSION_SITE_LIMIT, MAX_SITES};

/// Angles within this distance of `0` or `2π` are treated as absent.
const ANGLE_EPS: f64 = 1e-12;

/// A multilinear phase polynomial; keys are monomial site masks
/// (site `j` at bit `j-1`, the empty mask is a global phase), values are
/// angles reduced into `[0, 2π)`.
#[derive(Clone, PartialEq, Debug)]
pub struct PhasePolynomial {
    n_sites: u32,
    terms: BTreeMap<u64, f64>,
}

impl PhasePolynomial {
    /// The zero polynomial, i.e. the identity gate.
    pub fn identity(n_sites: usize) -> Result<Self> {
        if n_sites == 0 || n_sites > MAX_SITES {
            return Err(CoreError::CapacityExceeded {
                needed: n_sites,
                limit: MAX_SITES,
            });
        }
        Ok(Self {
            n_sites: n_sites as u32,
            terms: BTreeMap::new(),
        })
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites as usize
    }

    pub fn is_identity(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Monomials as `(site mask, angle)`, deterministic order.
    pub fn monomials(&self) -> impl Iterator<Item = (u64, f64)> + '_ {
        self.terms.iter().map(|(&m, &a)| (m, a))
    }

    /// Coefficient of the empty monomial.
    pub fn global_phase(&self) -> f64 {
        self.terms.get(&0).copied().unwrap_or(0.0)
    }

    /// Add `angle · Π_{j∈mask} x_j`, reducing mod 2π and pruning.
    pub fn add_monomial(&mut self, mask: u64, angle: f64) -> Result<()> {
        if mask >> self.n_sites != 0 {
            return Err(CoreError::SiteOutOfRange {
                site: 64 - mask.leading_zeros() as usize,
                n_sites: self.n_sites(),
            });
        }
        let entry = self.terms.entry(mask).or_insert(0.0);
        *entry = reduce_angle(*entry + angle);
        if *entry <= ANGLE_EPS || TAU - *entry <= ANGLE_EPS {
            self.terms.remove(&mask);
        }
        Ok(())
    }

    fn site_mask(sites: &[usize], n_sites: usize) -> Result<u64> {
        let mut mask = 0u64;
        for &s in sites {
            if s == 0 || s > n_sites {
                return Err(CoreError::SiteOutOfRange { site: s, n_sites });
            }
            let bit = 1u64 << (s - 1);
            if mask & bit != 0 {
                return Err(CoreError::BadGateSites("repeated site"));
            }
            mask |= bit;
        }
        Ok(mask)
    }

    /// Polynomial of a single diagonal gate.
    ///
    /// The affine pieces come from substituting `Z = 1 - 2x` into the
    /// defining exponentials: `Rz(φ) = e^{iφ/2} e^{-iφ x}` and
    /// `Zz(φ) = e^{-iφ/4} e^{i(φ/2)(x_a + x_b)} e^{-iφ x_a x_b}`.
    pub fn from_gate(gate: &Gate, n_sites: usize) -> Result<Self> {
        let mut p = Self::identity(n_sites)?;
        match gate {
            Gate::Z { site } => {
                let m = Self::site_mask(&[*site], n_sites)?;
                // Z = e^{iπ} on x=1
                p.add_monomial(m, core::f64::consts::PI)?;
            }
            Gate::Cz { a, b } => {
                let m = Self::site_mask(&[*a, *b], n_sites)?;
                p.add_monomial(m, core::f64::consts::PI)?;
            }
            Gate::Cp { a, b, angle } => {
                let m = Self::site_mask(&[*a, *b], n_sites)?;
                p.add_monomial(m, *angle)?;
            }
            Gate::Ccz { a, b, c } => {
                let m = Self::site_mask(&[*a, *b, *c], n_sites)?;
                p.add_monomial(m, core::f64::consts::PI)?;
            }
            Gate::Cnz { sites } => {
                let m = Self::site_mask(sites, n_sites)?;
                p.add_monomial(m, core::f64::consts::PI)?;
            }
            Gate::Cnp { sites, angle } => {
                let m = Self::site_mask(sites, n_sites)?;
                p.add_monomial(m, *angle)?;
            }
            Gate::Rz { site, angle } => {
                let m = Self::site_mask(&[*site], n_sites)?;
                p.add_monomial(0, angle / 2.0)?;
                p.add_monomial(m, -angle)?;
            }
            Gate::Zz { a, b, angle } => {
                let ma = Self::site_mask(&[*a], n_sites)?;
                let mb = Self::site_mask(&[*b], n_sites)?;
                p.add_monomial(0, -angle / 4.0)?;
                p.add_monomial(ma, angle / 2.0)?;
                p.add_monomial(mb, angle / 2.0)?;
                p.add_monomial(ma | mb, -angle)?;
            }
            _ => return Err(CoreError::Unsupported("gate is not diagonal")),
        }
        Ok(p)
    }

    /// Coefficient-wise sum: diagonal circuits compose by addition.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.n_sites != other.n_sites {
            return Err(CoreError::DimensionMismatch {
                left: self.n_sites(),
                right: other.n_sites(),
            });
        }
        let mut out = self.clone();
        for (&m, &a) in &other.terms {
            out.add_monomial(m, a)?;
        }
        Ok(out)
    }

    /// The inverse gate's polynomial.
    #[must_use]
    pub fn negated(&self) -> Self {
        let mut out = Self {
            n_sites: self.n_sites,
            terms: BTreeMap::new(),
        };
        for (&m, &a) in &self.terms {
            out.add_monomial(m, -a).expect("mask already validated");
        }
        out
    }

    /// Union of all monomial sites.
    pub fn support(&self) -> u64 {
        self.terms.keys().fold(0u64, |acc, &m| acc | m)
    }

    /// `θ(x)` for a basis index.
    pub fn eval(&self, x: u64) -> f64 {
        let mut acc = 0.0;
        for (&m, &a) in &self.terms {
            if x & m == m {
                acc += a;
            }
        }
        acc
    }

    /// Substitute `x_j -> 1 - x_j` for every site in `flip_mask` and
    /// re-expand into multilinear form.
    #[must_use]
    pub fn flipped(&self, flip_mask: u64) -> Self {
        let mut out = Self {
            n_sites: self.n_sites,
            terms: BTreeMap::new(),
        };
        for (&m, &a) in &self.terms {
            let f = m & flip_mask;
            let keep = m & !flip_mask;
            if f == 0 {
                out.add_monomial(m, a).expect("validated");
                continue;
            }
            // Π_{k∈f} (1 - x_k) = Σ_{t ⊆ f} (-1)^{|t|} Π_{k∈t} x_k
            let mut t = 0u64;
            loop {
                let sign = if t.count_ones() % 2 == 0 { a } else { -a };
                out.add_monomial(keep | t, sign).expect("validated");
                if t == f {
                    break;
                }
                t = (t.wrapping_sub(f)) & f; // next subset of f
            }
        }
        out
    }

    /// The site-`j` difference polynomial: monomials of `θ` containing
    /// `x_j`, with `x_j` removed. Writing `θ = x_j A + B`, this returns
    /// `A`, and `θ(x ⊕ e_j) − θ(x) = (1 − 2 x_j) A(x)`.
    pub fn delta(&self, site: usize) -> Result<Self> {
        if site == 0 || site > self.n_sites() {
            return Err(CoreError::SiteOutOfRange {
                site,
                n_sites: self.n_sites(),
            });
        }
        let bit = 1u64 << (site - 1);
        let mut out = Self {
            n_sites: self.n_sites,
            terms: BTreeMap::new(),
        };
        for (&m, &a) in &self.terms {
            if m & bit != 0 {
                out.add_monomial(m & !bit, a)?;
            }
        }
        Ok(out)
    }

    /// Exact `Z`-monomial expansion of the diagonal operator `e^{iθ(x)}`.
    ///
    /// The diagonal is evaluated over the polynomial's support and
    /// Walsh–Hadamard transformed; this is the distributive expansion of
    /// `e^{i c_S Π x} = I + (e^{i c_S} − 1) Π_{j∈S} (1−Z_j)/2` carried out
    /// in one pass. Errors when the support exceeds
    /// [`EXPANSION_SITE_LIMIT`].
    pub fn exp_to_opsum(&self) -> Result<OperatorSum> {
        exp_diagonal(self.n_sites(), self.support(), |x| self.eval(x))
    }

    /// The stabilizer `U X_j U†` for the diagonal circuit `U = e^{iθ}`.
    pub fn conjugate_x(&self, site: usize) -> Result<OperatorSum> {
        if site == 0 || site > self.n_sites() {
            return Err(CoreError::SiteOutOfRange {
                site,
                n_sites: self.n_sites(),
            });
        }
        self.conjugate_x_set(1u64 << (site - 1))
    }

    /// `U (Π_{j∈mask} X_j) U†` for the diagonal circuit `U`.
    ///
    /// The result is `Π X_j · exp(i δ)` with
    /// `δ(x) = θ(x ⊕ mask) − θ(x)`, expanded exactly.
    pub fn conjugate_x_set(&self, mask: u64) -> Result<OperatorSum> {
        if mask >> self.n_sites != 0 {
            return Err(CoreError::SiteOutOfRange {
                site: 64 - mask.leading_zeros() as usize,
                n_sites: self.n_sites(),
            });
        }
        let delta = self.flipped(mask).compose(&self.negated())?;
        let diag = delta.exp_to_opsum()?;
        let flips = OperatorSum::from_term(
            &x_string_from_mask(self.n_sites(), mask)?,
            C64::new(1.0, 0.0),
        );
        flips.mul(&diag)
    }
}

/// Expand a diagonal operator `x -> value(x)` supported on `support`
/// into `Z`-monomials via a Walsh–Hadamard transform.
fn exp_diagonal(
    n_sites: usize,
    support: u64,
    theta: impl Fn(u64) -> f64,
) -> Result<OperatorSum> {
    let m = support.count_ones() as usize;
    if m > EXPANSION_SITE_LIMIT {
        return Err(CoreError::CapacityExceeded {
            needed: m,
            limit: EXPANSION_SITE_LIMIT,
        });
    }
    let positions: Vec<u32> = (0..64).filter(|&b| support & (1u64 << b) != 0).collect();
    let size = 1usize << m;
    let mut values: Vec<C64> = Vec::with_capacity(size);
    for y in 0..size as u64 {
        let mut x = 0u64;
        for (k, &pos) in positions.iter().enumerate() {
            if y & (1u64 << k) != 0 {
                x |= 1u64 << pos;
            }
        }
        let t = theta(x);
        values.push(C64::new(math::cos(t), math::sin(t)));
    }
    // In-place Walsh–Hadamard transform; values[t] becomes the coefficient
    // of Π_{k∈t} Z_k after normalization.
    let mut h = 1usize;
    while h < size {
        for start in (0..size).step_by(h * 2) {
            for k in start..start + h {
                let a = values[k];
                let b = values[k + h];
                values[k] = a + b;
                values[k + h] = a - b;
            }
        }
        h *= 2;
    }
    let scale = 1.0 / size as f64;
    let mut out = OperatorSum::zero(n_sites)?;
    for (t, &v) in values.iter().enumerate() {
        let coeff = v * scale;
        if coeff.norm() <= crate::PRUNE_EPS {
            continue;
        }
        let mut z_mask = 0u64;
        for (k, &pos) in positions.iter().enumerate() {
            if t & (1usize << k) != 0 {
                z_mask |= 1u64 << pos;
            }
        }
        let p = crate::pauli::z_string_from_mask(n_sites, z_mask)?;
        out.accumulate(&p, coeff);
    }
    out.prune();
    Ok(out)
}

/// Polynomial of a whole diagonal circuit.
pub fn circuit_polynomial(circuit: &[Gate], n_sites: usize) -> Result<PhasePolynomial> {
    let mut p = PhasePolynomial::identity(n_sites)?;
    for g in circuit {
        p = p.compose(&PhasePolynomial::from_gate(g, n_sites)?)?;
    }
    Ok(p)
}
