//! File formats: the chain-spec JSON config, Pauli-sum and
//! phase-polynomial serialization, spectrum/sweep outputs (JSON, CSV,
//! SVG) and the raw statevector dump. Every emitted document embeds the
//! effective config and the library version so runs are reproducible
//! from their outputs alone.

use clusterlab_core::model::{ChainSpec, EdgeTerms, Model};
use clusterlab_core::pauli::{format_pauli_letters, parse_pauli_term, OperatorSum};
use clusterlab_core::phase::PhasePolynomial;
use clusterlab_core::{Boundary, StateVector, C64};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::{LabError, Result};
use crate::spectra::{SpectrumResult, SweepTable};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// JSON-facing chain configuration; flags override file values upstream.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ChainConfig {
    pub sites: usize,
    pub boundary: String,
    pub model: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub angles: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub angles_zz: Option<Vec<f64>>,
    pub edge_terms: String,
}

fn broadcast(angles: &[f64], want: usize) -> Result<Vec<f64>> {
    if angles.len() == want {
        Ok(angles.to_vec())
    } else if angles.len() == 1 {
        Ok(vec![angles[0]; want])
    } else {
        Err(LabError::InvalidArgument(format!(
            "expected {want} angles (or a single broadcast value), got {}",
            angles.len()
        )))
    }
}

impl ChainConfig {
    pub fn to_spec(&self) -> Result<ChainSpec> {
        let boundary = match self.boundary.as_str() {
            "open" => Boundary::Open,
            "closed" => Boundary::Closed,
            other => {
                return Err(LabError::InvalidArgument(format!(
                    "unknown boundary '{other}' (open|closed)"
                )))
            }
        };
        let edge_terms = match self.edge_terms.as_str() {
            "include" => EdgeTerms::Include,
            "drop" => EdgeTerms::Drop,
            other => {
                return Err(LabError::InvalidArgument(format!(
                    "unknown edge_terms '{other}' (include|drop)"
                )))
            }
        };
        let n = self.sites;
        let n_bonds = match boundary {
            Boundary::Open => n.saturating_sub(1),
            Boundary::Closed => n,
        };
        let need_angles = |what: &str| -> Result<&Vec<f64>> {
            self.angles.as_ref().ok_or_else(|| {
                LabError::InvalidArgument(format!("model '{}' needs --angles ({what})", self.model))
            })
        };
        let order = || -> Result<usize> {
            self.order.ok_or_else(|| {
                LabError::InvalidArgument(format!("model '{}' needs --order", self.model))
            })
        };
        let model = match self.model.as_str() {
            "x" => Model::X,
            "zxz" => Model::Zxz,
            "xzx" => Model::Xzx,
            "zzz-xxx" => Model::ZzzXxx,
            "bitflip" => Model::BitFlip {
                angles: broadcast(need_angles("one per site")?, n)?,
            },
            "phaseflip" => Model::PhaseFlip {
                angles: broadcast(need_angles("one per site")?, n)?,
            },
            "cp" => Model::Cp {
                angles: broadcast(need_angles("one per bond")?, n_bonds)?,
            },
            "ccz" => Model::Ccz,
            "cnz" => Model::Cnz { order: order()? },
            "cnp" => {
                let ord = order()?;
                let windows = match boundary {
                    Boundary::Open => n.saturating_sub(ord),
                    Boundary::Closed => n,
                };
                Model::Cnp {
                    order: ord,
                    angles: broadcast(need_angles("one per gate window")?, windows)?,
                }
            }
            "ising-zz" => Model::IsingZz {
                z_angles: broadcast(need_angles("one per site")?, n)?,
                zz_angles: broadcast(
                    self.angles_zz.as_ref().ok_or_else(|| {
                        LabError::InvalidArgument("model 'ising-zz' needs --angles-zz".into())
                    })?,
                    n_bonds,
                )?,
            },
            other => {
                return Err(LabError::InvalidArgument(format!("unknown model '{other}'")))
            }
        };
        Ok(ChainSpec::new(n, boundary, model, edge_terms)?)
    }

    pub fn from_spec(spec: &ChainSpec) -> Self {
        let (order, angles, angles_zz) = match &spec.model {
            Model::Cnz { order } => (Some(*order), None, None),
            Model::Cnp { order, angles } => (Some(*order), Some(angles.clone()), None),
            Model::BitFlip { angles } | Model::PhaseFlip { angles } | Model::Cp { angles } => {
                (None, Some(angles.clone()), None)
            }
            Model::IsingZz { z_angles, zz_angles } => {
                (None, Some(z_angles.clone()), Some(zz_angles.clone()))
            }
            _ => (None, None, None),
        };
        Self {
            sites: spec.n_sites,
            boundary: match spec.boundary {
                Boundary::Open => "open".into(),
                Boundary::Closed => "closed".into(),
            },
            model: spec.model.name().to_string(),
            order,
            angles,
            angles_zz,
            edge_terms: match spec.edge_terms {
                EdgeTerms::Include => "include".into(),
                EdgeTerms::Drop => "drop".into(),
            },
        }
    }
}

/// One serialized Pauli term.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PauliTermRecord {
    pub pauli: String,
    pub re: f64,
    pub im: f64,
}

/// A Pauli sum as an array of `{"pauli": "Z1 X2", "re": .., "im": ..}`
/// records, deterministic order, lossless at double precision.
pub fn opsum_to_records(op: &OperatorSum) -> Vec<PauliTermRecord> {
    op.terms()
        .map(|(p, c)| PauliTermRecord {
            pauli: format_pauli_letters(&p),
            re: c.re,
            im: c.im,
        })
        .collect()
}

pub fn opsum_from_records(records: &[PauliTermRecord], n_sites: usize) -> Result<OperatorSum> {
    let mut op = OperatorSum::zero(n_sites)?;
    for r in records {
        let p = parse_pauli_term(&r.pauli, n_sites)?;
        op.accumulate(&p, C64::new(r.re, r.im));
    }
    op.prune();
    Ok(op)
}

/// Phase polynomial as a JSON map from comma-joined 1-indexed sites to
/// the angle in radians; the empty key holds the global phase.
pub fn poly_to_map(p: &PhasePolynomial) -> BTreeMap<String, f64> {
    let mut out = BTreeMap::new();
    for (mask, angle) in p.monomials() {
        let sites: Vec<String> = (0..64)
            .filter(|b| mask & (1u64 << b) != 0)
            .map(|b| (b + 1).to_string())
            .collect();
        out.insert(sites.join(","), angle);
    }
    out
}

pub fn poly_from_map(map: &BTreeMap<String, f64>, n_sites: usize) -> Result<PhasePolynomial> {
    let mut p = PhasePolynomial::identity(n_sites)?;
    for (key, &angle) in map {
        let mut mask = 0u64;
        let trimmed = key.trim();
        if !trimmed.is_empty() {
            for token in trimmed.split(',') {
                let site: usize = token.trim().parse().map_err(|_| {
                    LabError::InvalidArgument(format!("bad site index '{token}' in key '{key}'"))
                })?;
                if site == 0 || site > n_sites {
                    return Err(LabError::InvalidArgument(format!(
                        "site {site} out of range 1..={n_sites}"
                    )));
                }
                mask |= 1u64 << (site - 1);
            }
        }
        p.add_monomial(mask, angle)?;
    }
    Ok(p)
}

/// Spectrum output document.
#[derive(Serialize)]
pub struct SpectrumDocument<'a> {
    pub config: &'a ChainConfig,
    pub version: &'static str,
    pub method: crate::spectra::Method,
    pub eigenvalues: &'a [f64],
    pub clusters: &'a [(f64, usize)],
    pub gap: f64,
    pub residual_max: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

pub fn spectrum_to_json(result: &SpectrumResult, config: &ChainConfig) -> Result<String> {
    let doc = SpectrumDocument {
        config,
        version: VERSION,
        method: result.method,
        eigenvalues: &result.eigenvalues,
        clusters: &result.clusters,
        gap: result.gap,
        residual_max: result.residuals.iter().cloned().fold(0.0, f64::max),
        seed: result.seed,
    };
    Ok(serde_json::to_string_pretty(&doc)?)
}

/// Sweep table as CSV: `#`-prefixed config header, then
/// `alpha,e0,...,e{m-1},gap,string_order` rows with `.` decimals and
/// `\n` line endings.
pub fn sweep_to_csv(table: &SweepTable, config: &ChainConfig) -> Result<String> {
    let mut out = String::new();
    writeln!(out, "# clusterlab v{VERSION} sweep").expect("string write");
    writeln!(out, "# config: {}", serde_json::to_string(config)?).expect("string write");
    let mut header = String::from("alpha");
    for i in 0..table.m {
        write!(header, ",e{i}").expect("string write");
    }
    header.push_str(",gap,string_order");
    writeln!(out, "{header}").expect("string write");
    for row in &table.rows {
        let mut line = format!("{}", row.alpha);
        for e in &row.energies {
            write!(line, ",{e}").expect("string write");
        }
        write!(line, ",{},{}", row.gap, row.string_order).expect("string write");
        writeln!(out, "{line}").expect("string write");
    }
    Ok(out)
}

/// Minimal SVG line chart of the sweep's energy columns plus the string
/// order (dashed); a plotting convenience, not a UI.
pub fn sweep_to_svg(table: &SweepTable) -> String {
    let (w, h, pad) = (640.0f64, 420.0f64, 48.0f64);
    let rows: Vec<_> = table.rows.iter().filter(|r| r.error.is_none()).collect();
    let mut ymin = f64::INFINITY;
    let mut ymax = f64::NEG_INFINITY;
    for r in &rows {
        for &e in &r.energies {
            ymin = ymin.min(e);
            ymax = ymax.max(e);
        }
    }
    if !ymin.is_finite() || !ymax.is_finite() || ymin == ymax {
        ymin = -1.0;
        ymax = 1.0;
    }
    let xmap = |a: f64| pad + a * (w - 2.0 * pad);
    let ymap = |e: f64| h - pad - (e - ymin) / (ymax - ymin) * (h - 2.0 * pad);
    let mut svg = String::new();
    write!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">"
    )
    .expect("string write");
    write!(
        svg,
        "<rect width=\"{w}\" height=\"{h}\" fill=\"white\"/><text x=\"{pad}\" y=\"20\" font-size=\"12\">clusterlab v{VERSION} sweep ({} rows)</text>",
        rows.len()
    )
    .expect("string write");
    let palette = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b"];
    for col in 0..table.m {
        let mut path = String::new();
        for (k, r) in rows.iter().enumerate() {
            let cmd = if k == 0 { 'M' } else { 'L' };
            write!(path, "{cmd}{:.2},{:.2} ", xmap(r.alpha), ymap(r.energies[col]))
                .expect("string write");
        }
        write!(
            svg,
            "<path d=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\"/>",
            path.trim_end(),
            palette[col % palette.len()]
        )
        .expect("string write");
    }
    let mut path = String::new();
    for (k, r) in rows.iter().enumerate() {
        let cmd = if k == 0 { 'M' } else { 'L' };
        let y = h - pad - r.string_order.clamp(-0.5, 1.5) * (h - 2.0 * pad) / 2.0;
        write!(path, "{cmd}{:.2},{:.2} ", xmap(r.alpha), y).expect("string write");
    }
    write!(
        svg,
        "<path d=\"{}\" fill=\"none\" stroke=\"#444\" stroke-dasharray=\"4 3\"/>",
        path.trim_end()
    )
    .expect("string write");
    svg.push_str("</svg>");
    svg
}

/// One amplitude record: the basis bitstring is written most-significant
/// site first, i.e. `x_n ... x_2 x_1`.
#[derive(Serialize, Deserialize)]
pub struct AmplitudeRecord {
    pub basis: String,
    pub re: f64,
    pub im: f64,
}

#[derive(Serialize)]
pub struct StateDocument<'a> {
    pub config: &'a ChainConfig,
    pub version: &'static str,
    pub amplitudes: Vec<AmplitudeRecord>,
}

pub fn state_to_json(state: &StateVector, config: &ChainConfig) -> Result<String> {
    let n = state.n_sites();
    let amplitudes = state
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(idx, a)| AmplitudeRecord {
            basis: (0..n)
                .rev()
                .map(|b| if idx & (1 << b) != 0 { '1' } else { '0' })
                .collect(),
            re: a.re,
            im: a.im,
        })
        .collect();
    let doc = StateDocument {
        config,
        version: VERSION,
        amplitudes,
    };
    Ok(serde_json::to_string_pretty(&doc)?)
}

/// Raw little-endian doubles, `re, im` interleaved in basis order.
pub fn state_to_binary(state: &StateVector) -> Vec<u8> {
    let mut out = Vec::with_capacity(state.dim() * 16);
    for a in state.amplitudes() {
        out.extend_from_slice(&a.re.to_le_bytes());
        out.extend_from_slice(&a.im.to_le_bytes());
    }
    out
}
