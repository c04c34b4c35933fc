//! Phased Pauli strings and complex-weighted Pauli sums.
//!
//! A [`PauliString`] is `i^k · P_1 ⊗ P_2 ⊗ ... ⊗ P_n` with letters in
//! `{I, X, Y, Z}`. Internally the string is kept in symplectic form
//! (`X`/`Z` bit masks plus a power of `i`), which makes multiplication,
//! commutation and basis action pure bit arithmetic.
//!
//! An [`OperatorSum`] stores a complex coefficient per *canonical* string:
//! the phase-free, Hermitian letter product (`Y` literal). Any phase of a
//! string passed in is folded into its coefficient, so map keys are unique
//! and a sum is Hermitian exactly when every coefficient is real.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{CoreError, Result};
use crate::math::{self, i_power};
use crate::matrix::CMatrix;
use crate::state::StateVector;
use crate::{C64, DENSE_SITE_LIMIT, MAX_SITES, PRUNE_EPS};

/// Single-site Pauli letter.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Letter {
    I,
    X,
    Y,
    Z,
}

impl Letter {
    fn bits(self) -> (bool, bool) {
        match self {
            Letter::I => (false, false),
            Letter::X => (true, false),
            Letter::Y => (true, true),
            Letter::Z => (false, true),
        }
    }

    fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Letter::I,
            (true, false) => Letter::X,
            (true, true) => Letter::Y,
            (false, true) => Letter::Z,
        }
    }
}

/// A phased Pauli string on `n_sites` qubits.
///
/// The represented operator is `i^xz_phase · X^x Z^z` where `x`, `z` are
/// the bit masks (site `j` lives at bit `j-1`). The public
/// [`phase_exponent`](PauliString::phase_exponent) is reported in the
/// letter convention, i.e. relative to the Hermitian product with `Y`
/// taken literally.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct PauliString {
    n_sites: u32,
    xz_phase: u8,
    x_bits: u64,
    z_bits: u64,
}

fn check_site(site: usize, n_sites: usize) -> Result<()> {
    if site == 0 || site > n_sites {
        return Err(CoreError::SiteOutOfRange { site, n_sites });
    }
    Ok(())
}

fn check_n(n_sites: usize) -> Result<()> {
    if n_sites == 0 || n_sites > MAX_SITES {
        return Err(CoreError::CapacityExceeded {
            needed: n_sites,
            limit: MAX_SITES,
        });
    }
    Ok(())
}

impl PauliString {
    /// The identity string on `n_sites` qubits.
    pub fn identity(n_sites: usize) -> Result<Self> {
        check_n(n_sites)?;
        Ok(Self {
            n_sites: n_sites as u32,
            xz_phase: 0,
            x_bits: 0,
            z_bits: 0,
        })
    }

    /// A single letter at `site` (1-indexed), identity elsewhere.
    pub fn single(n_sites: usize, site: usize, letter: Letter) -> Result<Self> {
        check_n(n_sites)?;
        check_site(site, n_sites)?;
        let (x, z) = letter.bits();
        let bit = 1u64 << (site - 1);
        Ok(Self {
            n_sites: n_sites as u32,
            // Y = i·XZ, so the literal letter carries one power of i in
            // symplectic form.
            xz_phase: u8::from(x && z),
            x_bits: if x { bit } else { 0 },
            z_bits: if z { bit } else { 0 },
        })
    }

    /// Build from a full letter sequence, site 1 first. Phase exponent 0.
    pub fn from_letters(letters: &[Letter]) -> Result<Self> {
        check_n(letters.len())?;
        let mut p = Self::identity(letters.len())?;
        for (k, &l) in letters.iter().enumerate() {
            let (x, z) = l.bits();
            let bit = 1u64 << k;
            if x {
                p.x_bits |= bit;
            }
            if z {
                p.z_bits |= bit;
            }
        }
        p.xz_phase = (p.y_count() % 4) as u8;
        Ok(p)
    }

    /// Product of letters at the given sites, identity elsewhere.
    pub fn from_sites(n_sites: usize, letters: &[(usize, Letter)]) -> Result<Self> {
        let mut p = Self::identity(n_sites)?;
        for &(site, l) in letters {
            p = p.mul(&Self::single(n_sites, site, l)?)?;
        }
        Ok(p)
    }

    /// Multiply the phase by `i^k`.
    #[must_use]
    pub fn with_extra_phase(mut self, k: u8) -> Self {
        self.xz_phase = (self.xz_phase + k) % 4;
        self
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites as usize
    }

    fn y_count(&self) -> u32 {
        (self.x_bits & self.z_bits).count_ones()
    }

    /// Phase exponent `k` in the letter convention: the operator equals
    /// `i^k` times the Hermitian letter product.
    pub fn phase_exponent(&self) -> u8 {
        (self.xz_phase + 4 - (self.y_count() % 4) as u8) % 4
    }

    /// The letter at `site`, ignoring the phase.
    pub fn letter(&self, site: usize) -> Result<Letter> {
        check_site(site, self.n_sites())?;
        let bit = 1u64 << (site - 1);
        Ok(Letter::from_bits(
            self.x_bits & bit != 0,
            self.z_bits & bit != 0,
        ))
    }

    /// All letters, site 1 first.
    pub fn letters(&self) -> Vec<Letter> {
        (1..=self.n_sites())
            .map(|s| self.letter(s).expect("site in range"))
            .collect()
    }

    /// Number of non-identity sites.
    pub fn weight(&self) -> usize {
        (self.x_bits | self.z_bits).count_ones() as usize
    }

    /// Mask of non-identity sites.
    pub fn support_mask(&self) -> u64 {
        self.x_bits | self.z_bits
    }

    /// Mask of sites carrying an `X` component (`X` or `Y` letters).
    pub fn x_mask(&self) -> u64 {
        self.x_bits
    }

    /// Mask of sites carrying a `Z` component (`Z` or `Y` letters).
    pub fn z_mask(&self) -> u64 {
        self.z_bits
    }

    pub fn is_identity_letters(&self) -> bool {
        self.x_bits == 0 && self.z_bits == 0
    }

    /// True when the operator is Hermitian (letter phase `1` or `i^2`).
    pub fn is_hermitian(&self) -> bool {
        self.phase_exponent() % 2 == 0
    }

    /// Exact group product `self · other` with the phase tracked.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.n_sites != other.n_sites {
            return Err(CoreError::DimensionMismatch {
                left: self.n_sites(),
                right: other.n_sites(),
            });
        }
        // Z^z1 X^x2 = (-1)^{|z1 & x2|} X^x2 Z^z1
        let swaps = (self.z_bits & other.x_bits).count_ones();
        Ok(Self {
            n_sites: self.n_sites,
            xz_phase: ((self.xz_phase as u32 + other.xz_phase as u32 + 2 * swaps) % 4) as u8,
            x_bits: self.x_bits ^ other.x_bits,
            z_bits: self.z_bits ^ other.z_bits,
        })
    }

    /// Hermitian conjugate.
    #[must_use]
    pub fn dagger(&self) -> Self {
        // (i^k X^x Z^z)† = (-i)^k (-1)^{|x & z|} X^x Z^z
        let flips = 2 * (self.x_bits & self.z_bits).count_ones();
        Self {
            n_sites: self.n_sites,
            xz_phase: ((4 - self.xz_phase as u32 + flips) % 4) as u8,
            x_bits: self.x_bits,
            z_bits: self.z_bits,
        }
    }

    /// True iff the two strings commute: the number of sites where both
    /// letters are non-identity and different must be even.
    pub fn commutes(&self, other: &Self) -> Result<bool> {
        if self.n_sites != other.n_sites {
            return Err(CoreError::DimensionMismatch {
                left: self.n_sites(),
                right: other.n_sites(),
            });
        }
        let anti = (self.x_bits & other.z_bits).count_ones()
            + (self.z_bits & other.x_bits).count_ones();
        Ok(anti % 2 == 0)
    }

    /// Action on a computational basis index: `P|b> = i^k |b'>`.
    ///
    /// Returns `(b', k)` with `k` the power of `i`.
    #[inline]
    pub fn apply_to_basis(&self, b: u64) -> (u64, u8) {
        let sign_flips = (self.z_bits & b).count_ones();
        let k = ((self.xz_phase as u32 + 2 * sign_flips) % 4) as u8;
        (b ^ self.x_bits, k)
    }

    /// Coefficient `i^k` such that the operator equals `i^k` times the
    /// canonical Hermitian letter product on the same masks.
    pub(crate) fn canonical_phase(&self) -> C64 {
        i_power(self.phase_exponent())
    }

    pub(crate) fn masks(&self) -> (u64, u64) {
        (self.x_bits, self.z_bits)
    }

    pub(crate) fn from_masks(n_sites: usize, x_bits: u64, z_bits: u64) -> Self {
        // canonical letter phase: operator = literal letter product
        Self {
            n_sites: n_sites as u32,
            xz_phase: ((x_bits & z_bits).count_ones() % 4) as u8,
            x_bits,
            z_bits,
        }
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.phase_exponent() {
            0 => {}
            1 => write!(f, "i ")?,
            2 => write!(f, "- ")?,
            _ => write!(f, "-i ")?,
        }
        if self.is_identity_letters() {
            return write!(f, "I");
        }
        let mut first = true;
        for site in 1..=self.n_sites() {
            let l = self.letter(site).expect("site in range");
            if l == Letter::I {
                continue;
            }
            if !first {
                write!(f, " ")?;
            }
            first = false;
            let c = match l {
                Letter::X => 'X',
                Letter::Y => 'Y',
                Letter::Z => 'Z',
                Letter::I => unreachable!(),
            };
            write!(f, "{c}{site}")?;
        }
        Ok(())
    }
}

/// Canonical (phase-free, Hermitian) term key: `X`/`Z` masks only.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct TermKey {
    pub x_bits: u64,
    pub z_bits: u64,
}

impl TermKey {
    fn y_count(&self) -> u32 {
        (self.x_bits & self.z_bits).count_ones()
    }

    /// `i^y` prefactor turning `X^x Z^z` into the literal letter product.
    fn literal_phase(&self) -> C64 {
        i_power((self.y_count() % 4) as u8)
    }
}

/// Which single-qubit rotation axis a conjugation uses.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum RotationAxis {
    X,
    Z,
}

/// A complex-weighted sum of canonical Pauli strings.
#[derive(Clone, PartialEq, Debug)]
pub struct OperatorSum {
    n_sites: u32,
    terms: BTreeMap<TermKey, C64>,
}

impl OperatorSum {
    /// The zero operator.
    pub fn zero(n_sites: usize) -> Result<Self> {
        check_n(n_sites)?;
        Ok(Self {
            n_sites: n_sites as u32,
            terms: BTreeMap::new(),
        })
    }

    /// The identity operator.
    pub fn identity(n_sites: usize) -> Result<Self> {
        let mut s = Self::zero(n_sites)?;
        s.terms
            .insert(TermKey { x_bits: 0, z_bits: 0 }, C64::new(1.0, 0.0));
        Ok(s)
    }

    /// `coeff` times the given string.
    pub fn from_term(p: &PauliString, coeff: C64) -> Self {
        let mut s = Self {
            n_sites: p.n_sites,
            terms: BTreeMap::new(),
        };
        s.accumulate(p, coeff);
        s.prune();
        s
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites as usize
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Add `coeff · p`, folding the string's phase into the coefficient.
    pub fn accumulate(&mut self, p: &PauliString, coeff: C64) {
        debug_assert_eq!(p.n_sites, self.n_sites);
        let (x_bits, z_bits) = p.masks();
        let key = TermKey { x_bits, z_bits };
        let folded = coeff * p.canonical_phase();
        let entry = self.terms.entry(key).or_insert(C64::new(0.0, 0.0));
        *entry += folded;
    }

    /// Drop terms below the pruning threshold.
    pub fn prune(&mut self) {
        self.terms.retain(|_, c| c.norm_sqr() > PRUNE_EPS * PRUNE_EPS);
    }

    /// Terms as `(canonical string, coefficient)`, deterministic order.
    pub fn terms(&self) -> impl Iterator<Item = (PauliString, C64)> + '_ {
        let n = self.n_sites();
        self.terms
            .iter()
            .map(move |(k, &c)| (PauliString::from_masks(n, k.x_bits, k.z_bits), c))
    }

    /// Coefficient of the canonical string equal to `p` up to phase
    /// (the phase is divided out), zero if absent.
    pub fn coefficient(&self, p: &PauliString) -> C64 {
        let (x_bits, z_bits) = p.masks();
        let key = TermKey { x_bits, z_bits };
        match self.terms.get(&key) {
            Some(&c) => c / p.canonical_phase(),
            None => C64::new(0.0, 0.0),
        }
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.n_sites != other.n_sites {
            return Err(CoreError::DimensionMismatch {
                left: self.n_sites(),
                right: other.n_sites(),
            });
        }
        Ok(())
    }

    /// `ca·a + cb·b`, merged termwise and pruned.
    pub fn combine(a: &Self, b: &Self, ca: C64, cb: C64) -> Result<Self> {
        a.check_same(b)?;
        let mut out = Self::zero(a.n_sites())?;
        for (k, &c) in &a.terms {
            *out.terms.entry(*k).or_insert(C64::new(0.0, 0.0)) += ca * c;
        }
        for (k, &c) in &b.terms {
            *out.terms.entry(*k).or_insert(C64::new(0.0, 0.0)) += cb * c;
        }
        out.prune();
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        Self::combine(self, other, C64::new(1.0, 0.0), C64::new(1.0, 0.0))
    }

    #[must_use]
    pub fn scale(&self, c: C64) -> Self {
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v *= c;
        }
        out.prune();
        out
    }

    /// Distributive product with phase-exact string multiplication.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let n = self.n_sites();
        let mut out = Self::zero(n)?;
        for (ka, &ca) in &self.terms {
            let pa = PauliString::from_masks(n, ka.x_bits, ka.z_bits);
            for (kb, &cb) in &other.terms {
                let pb = PauliString::from_masks(n, kb.x_bits, kb.z_bits);
                let prod = pa.mul(&pb).expect("same size");
                out.accumulate(&prod, ca * cb);
            }
        }
        out.prune();
        Ok(out)
    }

    /// Hermitian conjugate. Keys are Hermitian, so this conjugates the
    /// coefficients.
    #[must_use]
    pub fn dagger(&self) -> Self {
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = v.conj();
        }
        out
    }

    /// True when every coefficient is real to within `tol`.
    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.terms.values().all(|c| math::fabs(c.im) <= tol)
    }

    /// Largest coefficient magnitude.
    pub fn max_abs_coeff(&self) -> f64 {
        self.terms
            .values()
            .map(|c| c.norm())
            .fold(0.0, |a, b| if b > a { b } else { a })
    }

    /// Sum of coefficient magnitudes.
    pub fn l1_norm(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).sum()
    }

    /// Largest termwise coefficient difference between two sums.
    pub fn max_coeff_diff(&self, other: &Self) -> Result<f64> {
        let diff = Self::combine(self, other, C64::new(1.0, 0.0), C64::new(-1.0, 0.0))?;
        Ok(diff.max_abs_coeff())
    }

    /// Conjugate by a Hadamard at `site`: swaps `X` and `Z` there and
    /// flips the sign of `Y`.
    pub fn conjugate_by_hadamard(&self, site: usize) -> Result<Self> {
        check_site(site, self.n_sites())?;
        let bit = 1u64 << (site - 1);
        let mut out = Self::zero(self.n_sites())?;
        for (k, &c) in &self.terms {
            let x = k.x_bits & bit != 0;
            let z = k.z_bits & bit != 0;
            let (nx, nz, sign) = match (x, z) {
                (true, true) => (true, true, -1.0),
                (x, z) => (z, x, 1.0),
            };
            let key = TermKey {
                x_bits: (k.x_bits & !bit) | if nx { bit } else { 0 },
                z_bits: (k.z_bits & !bit) | if nz { bit } else { 0 },
            };
            *out.terms.entry(key).or_insert(C64::new(0.0, 0.0)) += c * sign;
        }
        out.prune();
        Ok(out)
    }

    /// Conjugate by a single-qubit rotation at `site`.
    ///
    /// Axis `X` uses `exp(-i φ X/2)`, sending `Z -> Z cos φ - Y sin φ`
    /// and `Y -> Y cos φ + Z sin φ`. Axis `Z` uses `exp(+i φ Z/2)`,
    /// sending `X -> X cos φ - Y sin φ` and `Y -> Y cos φ + X sin φ`.
    /// Letters commuting with the axis are untouched.
    pub fn conjugate_by_rotation(&self, axis: RotationAxis, site: usize, angle: f64) -> Result<Self> {
        check_site(site, self.n_sites())?;
        let bit = 1u64 << (site - 1);
        let (c, s) = (math::cos(angle), math::sin(angle));
        let n = self.n_sites();
        let mut out = Self::zero(n)?;
        for (k, &coeff) in &self.terms {
            let letter = Letter::from_bits(k.x_bits & bit != 0, k.z_bits & bit != 0);
            let images: &[(Letter, f64)] = match (axis, letter) {
                (RotationAxis::X, Letter::Z) => &[(Letter::Z, 1.0), (Letter::Y, -1.0)],
                (RotationAxis::X, Letter::Y) => &[(Letter::Y, 1.0), (Letter::Z, 1.0)],
                (RotationAxis::Z, Letter::X) => &[(Letter::X, 1.0), (Letter::Y, -1.0)],
                (RotationAxis::Z, Letter::Y) => &[(Letter::Y, 1.0), (Letter::X, 1.0)],
                _ => {
                    *out.terms.entry(*k).or_insert(C64::new(0.0, 0.0)) += coeff;
                    continue;
                }
            };
            // images[0] carries cos, images[1] carries sin
            for (idx, &(l, sign)) in images.iter().enumerate() {
                let w = if idx == 0 { c } else { s } * sign;
                let (lx, lz) = l.bits();
                let key = TermKey {
                    x_bits: (k.x_bits & !bit) | if lx { bit } else { 0 },
                    z_bits: (k.z_bits & !bit) | if lz { bit } else { 0 },
                };
                *out.terms.entry(key).or_insert(C64::new(0.0, 0.0)) += coeff * w;
            }
        }
        out.prune();
        Ok(out)
    }

    /// Dense matrix under the global basis convention.
    pub fn to_matrix(&self) -> Result<CMatrix> {
        let n = self.n_sites();
        if n > DENSE_SITE_LIMIT {
            return Err(CoreError::CapacityExceeded {
                needed: n,
                limit: DENSE_SITE_LIMIT,
            });
        }
        let dim = 1usize << n;
        let mut m = CMatrix::zeros(dim);
        for (k, &c) in &self.terms {
            let folded = c * k.literal_phase();
            for b in 0..dim as u64 {
                let sign = if (k.z_bits & b).count_ones() % 2 == 0 {
                    1.0
                } else {
                    -1.0
                };
                let row = (b ^ k.x_bits) as usize;
                *m.at_mut(row, b as usize) += folded * sign;
            }
        }
        Ok(m)
    }

    /// Matrix-free application to a state vector.
    pub fn apply(&self, v: &StateVector) -> Result<StateVector> {
        if v.n_sites() != self.n_sites() {
            return Err(CoreError::DimensionMismatch {
                left: self.n_sites(),
                right: v.n_sites(),
            });
        }
        let dim = v.dim();
        let mut out = alloc::vec![C64::new(0.0, 0.0); dim];
        let amps = v.amplitudes();
        for (k, &c) in &self.terms {
            let folded = c * k.literal_phase();
            if k.x_bits == 0 && k.z_bits == 0 {
                for b in 0..dim {
                    out[b] += folded * amps[b];
                }
                continue;
            }
            for b in 0..dim as u64 {
                let sign = if (k.z_bits & b).count_ones() % 2 == 0 {
                    1.0
                } else {
                    -1.0
                };
                out[(b ^ k.x_bits) as usize] += folded * sign * amps[b as usize];
            }
        }
        StateVector::from_amplitudes(out)
    }

    /// `<v| self |v>`.
    pub fn expectation(&self, v: &StateVector) -> Result<C64> {
        let w = self.apply(v)?;
        v.inner(&w)
    }
}

impl fmt::Display for OperatorSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (p, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({:+.6}{:+.6}i) {}", c.re, c.im, p)?;
        }
        Ok(())
    }
}

/// `Π_{j in mask} X_j` as a string (helper for symmetry generators).
pub fn x_string_from_mask(n_sites: usize, mask: u64) -> Result<PauliString> {
    check_n(n_sites)?;
    if mask >> n_sites != 0 {
        return Err(CoreError::SiteOutOfRange {
            site: 64 - mask.leading_zeros() as usize,
            n_sites,
        });
    }
    Ok(PauliString::from_masks(n_sites, mask, 0))
}

/// `Π_{j in mask} Z_j` as a string.
pub fn z_string_from_mask(n_sites: usize, mask: u64) -> Result<PauliString> {
    check_n(n_sites)?;
    if mask >> n_sites != 0 {
        return Err(CoreError::SiteOutOfRange {
            site: 64 - mask.leading_zeros() as usize,
            n_sites,
        });
    }
    Ok(PauliString::from_masks(n_sites, 0, mask))
}

/// Parse a term like `"Z1 X2 Z3"` (also accepts `"I"` for the identity).
pub fn parse_pauli_term(text: &str, n_sites: usize) -> Result<PauliString> {
    let mut p = PauliString::identity(n_sites)?;
    let trimmed = text.trim();
    if trimmed.is_empty() || trimmed == "I" {
        return Ok(p);
    }
    for token in trimmed.split_whitespace() {
        let mut chars = token.chars();
        let letter = match chars.next() {
            Some('X') => Letter::X,
            Some('Y') => Letter::Y,
            Some('Z') => Letter::Z,
            Some('I') => Letter::I,
            _ => return Err(CoreError::BadGateSites("unknown Pauli letter")),
        };
        let site: usize = chars
            .as_str()
            .parse()
            .map_err(|_| CoreError::BadGateSites("bad site suffix"))?;
        if letter != Letter::I {
            p = p.mul(&PauliString::single(n_sites, site, letter)?)?;
        }
    }
    Ok(p)
}

/// Render the canonical letters of a string as `"Z1 X2 Z3"` (no phase).
pub fn format_pauli_letters(p: &PauliString) -> String {
    use fmt::Write;
    let mut out = String::new();
    let mut first = true;
    for site in 1..=p.n_sites() {
        let l = p.letter(site).expect("site in range");
        if l == Letter::I {
            continue;
        }
        if !first {
            out.push(' ');
        }
        first = false;
        let c = match l {
            Letter::X => 'X',
            Letter::Y => 'Y',
            Letter::Z => 'Z',
            Letter::I => unreachable!(),
        };
        let _ = write!(out, "{c}{site}");
    }
    if out.is_empty() {
        out.push('I');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{kron, pauli2, CMatrix};

    const LETTERS: [Letter; 4] = [Letter::I, Letter::X, Letter::Y, Letter::Z];

    fn splitmix(state: &mut u64) -> u64 {
        *state = state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = *state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    fn dense_of_string(p: &PauliString) -> CMatrix {
        // high site on the left so that site 1 is the least significant bit
        let mut m = CMatrix::identity(1);
        for site in (1..=p.n_sites()).rev() {
            m = kron(&m, &pauli2(p.letter(site).unwrap()));
        }
        m.scale(i_power(p.phase_exponent()))
    }

    #[test]
    fn single_site_multiplication_table_vs_dense() {
        for &a in &LETTERS {
            for &b in &LETTERS {
                let pa = PauliString::single(1, 1, a).unwrap();
                let pb = PauliString::single(1, 1, b).unwrap();
                let prod = pa.mul(&pb).unwrap();
                let dense = dense_of_string(&pa).mul(&dense_of_string(&pb)).unwrap();
                assert!(
                    dense.max_diff(&dense_of_string(&prod)).unwrap() < 1e-15,
                    "mismatch for {a:?}*{b:?}"
                );
            }
        }
    }

    #[test]
    fn x_times_z_is_minus_i_y() {
        let x = PauliString::single(1, 1, Letter::X).unwrap();
        let z = PauliString::single(1, 1, Letter::Z).unwrap();
        let p = x.mul(&z).unwrap();
        assert_eq!(p.letter(1).unwrap(), Letter::Y);
        assert_eq!(p.phase_exponent(), 3); // i^3 = -i
    }

    #[test]
    fn zz_squares_to_identity() {
        let zz = PauliString::from_sites(2, &[(1, Letter::Z), (2, Letter::Z)]).unwrap();
        let sq = zz.mul(&zz).unwrap();
        assert!(sq.is_identity_letters());
        assert_eq!(sq.phase_exponent(), 0);
    }

    #[test]
    fn crossed_two_site_product_phase_vs_dense() {
        // (X1 Z2) * (Z1 X2) checked against the dense 4x4 product
        let a = PauliString::from_sites(2, &[(1, Letter::X), (2, Letter::Z)]).unwrap();
        let b = PauliString::from_sites(2, &[(1, Letter::Z), (2, Letter::X)]).unwrap();
        let prod = a.mul(&b).unwrap();
        let dense = dense_of_string(&a).mul(&dense_of_string(&b)).unwrap();
        assert!(dense.max_diff(&dense_of_string(&prod)).unwrap() < 1e-15);
        assert_eq!(prod.letter(1).unwrap(), Letter::Y);
        assert_eq!(prod.letter(2).unwrap(), Letter::Y);
        assert_eq!(prod.phase_exponent(), 0);
    }

    #[test]
    fn mul_is_associative() {
        let mut s = 7u64;
        for _ in 0..200 {
            let n = 1 + (splitmix(&mut s) % 5) as usize;
            let rand_string = |s: &mut u64| {
                let mut p = PauliString::identity(n).unwrap();
                for site in 1..=n {
                    let l = LETTERS[(splitmix(s) % 4) as usize];
                    p = p.mul(&PauliString::single(n, site, l).unwrap()).unwrap();
                }
                p.with_extra_phase((splitmix(s) % 4) as u8)
            };
            let (a, b, c) = (rand_string(&mut s), rand_string(&mut s), rand_string(&mut s));
            let left = a.mul(&b).unwrap().mul(&c).unwrap();
            let right = a.mul(&b.mul(&c).unwrap()).unwrap();
            assert_eq!(left, right);
        }
    }

    #[test]
    fn commutes_matches_dense_commutator() {
        let mut s = 42u64;
        for _ in 0..200 {
            let n = 1 + (splitmix(&mut s) % 6) as usize;
            let rand_string = |s: &mut u64| {
                let letters: Vec<Letter> =
                    (0..n).map(|_| LETTERS[(splitmix(s) % 4) as usize]).collect();
                PauliString::from_letters(&letters).unwrap()
            };
            let (a, b) = (rand_string(&mut s), rand_string(&mut s));
            let da = dense_of_string(&a);
            let db = dense_of_string(&b);
            let comm = da.mul(&db).unwrap().sub(&db.mul(&da).unwrap()).unwrap();
            assert_eq!(a.commutes(&b).unwrap(), comm.max_abs() < 1e-14);
        }
    }

    #[test]
    fn commutes_examples() {
        let a = PauliString::from_sites(2, &[(1, Letter::X), (2, Letter::Z)]).unwrap();
        let b = PauliString::from_sites(2, &[(1, Letter::Z), (2, Letter::X)]).unwrap();
        assert!(a.commutes(&b).unwrap());
        let x = PauliString::single(1, 1, Letter::X).unwrap();
        let z = PauliString::single(1, 1, Letter::Z).unwrap();
        assert!(!x.commutes(&z).unwrap());
        let k2 = PauliString::from_sites(4, &[(1, Letter::Z), (2, Letter::X), (3, Letter::Z)]).unwrap();
        let k3 = PauliString::from_sites(4, &[(2, Letter::Z), (3, Letter::X), (4, Letter::Z)]).unwrap();
        assert!(k2.commutes(&k3).unwrap());
    }

    #[test]
    fn size_mismatch_is_an_error() {
        let a = PauliString::identity(2).unwrap();
        let b = PauliString::identity(3).unwrap();
        assert!(matches!(a.mul(&b), Err(CoreError::DimensionMismatch { .. })));
        assert!(matches!(a.commutes(&b), Err(CoreError::DimensionMismatch { .. })));
    }

    #[test]
    fn dagger_and_hermiticity() {
        let y = PauliString::single(1, 1, Letter::Y).unwrap();
        assert!(y.is_hermitian());
        assert_eq!(y.dagger(), y);
        let iy = y.with_extra_phase(1);
        assert!(!iy.is_hermitian());
        assert_eq!(iy.dagger(), iy.with_extra_phase(2));
    }

    #[test]
    fn combine_cancellation_gives_empty_sum() {
        let p = PauliString::from_sites(3, &[(1, Letter::X)]).unwrap();
        let a = OperatorSum::from_term(&p, C64::new(1.0, 0.0));
        let out = OperatorSum::combine(&a, &a, C64::new(1.0, 0.0), C64::new(-1.0, 0.0)).unwrap();
        assert!(out.is_zero());
    }

    #[test]
    fn combine_two_terms() {
        let x = OperatorSum::from_term(
            &PauliString::single(1, 1, Letter::X).unwrap(),
            C64::new(1.0, 0.0),
        );
        let z = OperatorSum::from_term(
            &PauliString::single(1, 1, Letter::Z).unwrap(),
            C64::new(1.0, 0.0),
        );
        let s = OperatorSum::combine(&x, &z, C64::new(1.0, 0.0), C64::new(1.0, 0.0)).unwrap();
        assert_eq!(s.num_terms(), 2);
    }

    fn cz_opsum() -> OperatorSum {
        // (I + Z1 + Z2 - Z1 Z2) / 2
        let n = 2;
        let mut s = OperatorSum::zero(n).unwrap();
        let half = C64::new(0.5, 0.0);
        s.accumulate(&PauliString::identity(n).unwrap(), half);
        s.accumulate(&PauliString::single(n, 1, Letter::Z).unwrap(), half);
        s.accumulate(&PauliString::single(n, 2, Letter::Z).unwrap(), half);
        s.accumulate(
            &PauliString::from_sites(n, &[(1, Letter::Z), (2, Letter::Z)]).unwrap(),
            -half,
        );
        s
    }

    #[test]
    fn cz_sum_halves_combine_to_itself() {
        let c = cz_opsum();
        let half = C64::new(0.5, 0.0);
        let combined = OperatorSum::combine(&c, &c, half, half).unwrap();
        assert!(combined.max_coeff_diff(&c).unwrap() < 1e-15);
        // dense cross-check: the sum is diag(1, 1, 1, -1)
        let m = c.to_matrix().unwrap();
        for (idx, want) in [(0usize, 1.0), (1, 1.0), (2, 1.0), (3, -1.0)] {
            assert!((m.at(idx, idx) - C64::new(want, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn opsum_mul_stabilizer_product_vs_dense() {
        // K2 * K3 on six sites, dense product as the oracle
        let n = 6;
        let k2 = OperatorSum::from_term(
            &PauliString::from_sites(n, &[(1, Letter::Z), (2, Letter::X), (3, Letter::Z)]).unwrap(),
            C64::new(1.0, 0.0),
        );
        let k3 = OperatorSum::from_term(
            &PauliString::from_sites(n, &[(2, Letter::Z), (3, Letter::X), (4, Letter::Z)]).unwrap(),
            C64::new(1.0, 0.0),
        );
        let prod = k2.mul(&k3).unwrap();
        let dense = k2.to_matrix().unwrap().mul(&k3.to_matrix().unwrap()).unwrap();
        assert!(prod.to_matrix().unwrap().max_diff(&dense).unwrap() < 1e-12);
        // single term Z1 Y2 Y3 Z4, and the dense product fixes its sign: +1
        assert_eq!(prod.num_terms(), 1);
        let zyyz =
            PauliString::from_sites(n, &[(1, Letter::Z), (2, Letter::Y), (3, Letter::Y), (4, Letter::Z)])
                .unwrap();
        assert!((prod.coefficient(&zyyz) - C64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn identity_is_neutral_and_strings_are_involutions() {
        let n = 3;
        let a = OperatorSum::from_term(
            &PauliString::from_sites(n, &[(1, Letter::Y), (3, Letter::Z)]).unwrap(),
            C64::new(0.7, -0.2),
        );
        let id = OperatorSum::identity(n).unwrap();
        assert!(id.mul(&a).unwrap().max_coeff_diff(&a).unwrap() < 1e-15);
        let h = OperatorSum::from_term(
            &PauliString::from_sites(n, &[(2, Letter::Y)]).unwrap(),
            C64::new(1.0, 0.0),
        );
        assert!(h.mul(&h).unwrap().max_coeff_diff(&id).unwrap() < 1e-15);
    }

    #[test]
    fn hadamard_conjugation_images() {
        let n = 3;
        let zxz = OperatorSum::from_term(
            &PauliString::from_sites(n, &[(1, Letter::Z), (2, Letter::X), (3, Letter::Z)]).unwrap(),
            C64::new(1.0, 0.0),
        );
        let mut conj = zxz;
        for site in 1..=n {
            conj = conj.conjugate_by_hadamard(site).unwrap();
        }
        let xzx = OperatorSum::from_term(
            &PauliString::from_sites(n, &[(1, Letter::X), (2, Letter::Z), (3, Letter::X)]).unwrap(),
            C64::new(1.0, 0.0),
        );
        assert!(conj.max_coeff_diff(&xzx).unwrap() < 1e-15);

        let x = OperatorSum::from_term(
            &PauliString::single(1, 1, Letter::X).unwrap(),
            C64::new(1.0, 0.0),
        );
        let z = OperatorSum::from_term(
            &PauliString::single(1, 1, Letter::Z).unwrap(),
            C64::new(1.0, 0.0),
        );
        assert!(x.conjugate_by_hadamard(1).unwrap().max_coeff_diff(&z).unwrap() < 1e-15);

        // H Y H = -Y, oracle: dense 2x2 conjugation
        let y = OperatorSum::from_term(
            &PauliString::single(1, 1, Letter::Y).unwrap(),
            C64::new(1.0, 0.0),
        );
        let hy = y.conjugate_by_hadamard(1).unwrap();
        let h = crate::matrix::hadamard2();
        let dense = h.mul(&y.to_matrix().unwrap()).unwrap().mul(&h).unwrap();
        assert!(hy.to_matrix().unwrap().max_diff(&dense).unwrap() < 1e-15);
        assert!(hy.max_coeff_diff(&y.scale(C64::new(-1.0, 0.0))).unwrap() < 1e-15);
    }

    #[test]
    fn rotation_images_match_stated_forms() {
        let n = 2;
        let z = OperatorSum::from_term(
            &PauliString::single(n, 1, Letter::Z).unwrap(),
            C64::new(1.0, 0.0),
        );
        let phi = 0.37;
        let img = z.conjugate_by_rotation(RotationAxis::X, 1, phi).unwrap();
        let mut want = OperatorSum::zero(n).unwrap();
        want.accumulate(
            &PauliString::single(n, 1, Letter::Z).unwrap(),
            C64::new(libm::cos(phi), 0.0),
        );
        want.accumulate(
            &PauliString::single(n, 1, Letter::Y).unwrap(),
            C64::new(-libm::sin(phi), 0.0),
        );
        assert!(img.max_coeff_diff(&want).unwrap() < 1e-15);

        let x = OperatorSum::from_term(
            &PauliString::single(n, 2, Letter::X).unwrap(),
            C64::new(1.0, 0.0),
        );
        let img = x.conjugate_by_rotation(RotationAxis::Z, 2, phi).unwrap();
        let mut want = OperatorSum::zero(n).unwrap();
        want.accumulate(
            &PauliString::single(n, 2, Letter::X).unwrap(),
            C64::new(libm::cos(phi), 0.0),
        );
        want.accumulate(
            &PauliString::single(n, 2, Letter::Y).unwrap(),
            C64::new(-libm::sin(phi), 0.0),
        );
        assert!(img.max_coeff_diff(&want).unwrap() < 1e-15);

        // zero angle is the identity map
        let haml = cz_opsum();
        let same = haml.conjugate_by_rotation(RotationAxis::X, 1, 0.0).unwrap();
        assert!(same.max_coeff_diff(&haml).unwrap() < 1e-15);
    }

    #[test]
    fn rotation_conjugation_vs_dense() {
        use crate::state::{gate_to_matrix, Gate};
        let n = 2;
        let mut s = 11u64;
        for _ in 0..20 {
            let phi = (splitmix(&mut s) % 1000) as f64 / 1000.0 * 6.0 - 3.0;
            let p = PauliString::from_sites(
                n,
                &[
                    (1, LETTERS[(splitmix(&mut s) % 4) as usize]),
                    (2, LETTERS[(splitmix(&mut s) % 4) as usize]),
                ],
            )
            .unwrap();
            let op = OperatorSum::from_term(&p, C64::new(1.0, 0.0));
            for (axis, gate) in [
                (RotationAxis::X, Gate::Rx { site: 1, angle: phi }),
                (RotationAxis::Z, Gate::Rz { site: 1, angle: phi }),
            ] {
                let engine = op.conjugate_by_rotation(axis, 1, phi).unwrap();
                let u = gate_to_matrix(&gate, n).unwrap();
                let dense = u.mul(&op.to_matrix().unwrap()).unwrap().mul(&u.dagger()).unwrap();
                assert!(
                    engine.to_matrix().unwrap().max_diff(&dense).unwrap() < 1e-12,
                    "axis {axis:?} phi {phi}"
                );
            }
        }
    }

    #[test]
    fn to_matrix_placement_and_apply() {
        use crate::state::StateVector;
        // Z1 on one site
        let z = OperatorSum::from_term(
            &PauliString::single(1, 1, Letter::Z).unwrap(),
            C64::new(1.0, 0.0),
        );
        let m = z.to_matrix().unwrap();
        assert!((m.at(0, 0) - C64::new(1.0, 0.0)).norm() < 1e-15);
        assert!((m.at(1, 1) + C64::new(1.0, 0.0)).norm() < 1e-15);

        // X1 on two sites: index arithmetic oracle, column b maps to row b^1
        let x1 = OperatorSum::from_term(
            &PauliString::single(2, 1, Letter::X).unwrap(),
            C64::new(1.0, 0.0),
        );
        let m = x1.to_matrix().unwrap();
        for col in 0..4usize {
            for row in 0..4usize {
                let want = if row == col ^ 1 { 1.0 } else { 0.0 };
                assert!((m.at(row, col) - C64::new(want, 0.0)).norm() < 1e-15);
            }
        }

        // X1 |00> = |01(binary)> i.e. basis index 1
        let v = StateVector::zero_state(2).unwrap();
        let out = x1.apply(&v).unwrap();
        assert!((out.amplitudes()[1] - C64::new(1.0, 0.0)).norm() < 1e-15);

        // identity application
        let id = OperatorSum::identity(2).unwrap();
        let w = id.apply(&out).unwrap();
        assert!((w.amplitudes()[1] - C64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn apply_matches_dense_matvec_on_random_sums() {
        use crate::state::StateVector;
        let mut s = 99u64;
        for n in [2usize, 4, 6] {
            let dim = 1usize << n;
            let mut op = OperatorSum::zero(n).unwrap();
            for _ in 0..8 {
                let letters: Vec<Letter> =
                    (0..n).map(|_| LETTERS[(splitmix(&mut s) % 4) as usize]).collect();
                let c = C64::new(
                    (splitmix(&mut s) % 2000) as f64 / 1000.0 - 1.0,
                    (splitmix(&mut s) % 2000) as f64 / 1000.0 - 1.0,
                );
                op.accumulate(&PauliString::from_letters(&letters).unwrap(), c);
            }
            op.prune();
            let amps: Vec<C64> = (0..dim)
                .map(|_| {
                    C64::new(
                        (splitmix(&mut s) % 2000) as f64 / 1000.0 - 1.0,
                        (splitmix(&mut s) % 2000) as f64 / 1000.0 - 1.0,
                    )
                })
                .collect();
            let v = StateVector::from_amplitudes(amps).unwrap();
            let fast = op.apply(&v).unwrap();
            let dense = op.to_matrix().unwrap().mul_vec(v.amplitudes());
            for (a, b) in fast.amplitudes().iter().zip(dense.iter()) {
                assert!((a - b).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn hermiticity_flag_checks_coefficients() {
        let mut op = OperatorSum::zero(2).unwrap();
        op.accumulate(
            &PauliString::from_sites(2, &[(1, Letter::Y), (2, Letter::X)]).unwrap(),
            C64::new(1.5, 0.0),
        );
        assert!(op.is_hermitian(1e-12));
        op.accumulate(
            &PauliString::single(2, 1, Letter::Z).unwrap(),
            C64::new(0.0, 0.25),
        );
        assert!(!op.is_hermitian(1e-12));
        // coefficient(P dagger) = conj(coefficient(P)) holds termwise for
        // the hermitian sum
        let h = op.add(&op.dagger()).unwrap();
        assert!(h.is_hermitian(1e-12));
    }

    #[test]
    fn parse_and_format_round_trip() {
        let p = parse_pauli_term("Z1 X2 Z3", 4).unwrap();
        assert_eq!(format_pauli_letters(&p), "Z1 X2 Z3");
        assert_eq!(format_pauli_letters(&PauliString::identity(3).unwrap()), "I");
        let q = parse_pauli_term("I", 2).unwrap();
        assert!(q.is_identity_letters());
        assert!(parse_pauli_term("Q1", 2).is_err());
        assert!(parse_pauli_term("X9", 2).is_err());
    }
}
