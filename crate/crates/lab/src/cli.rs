//! Command-line front end: flag/config parsing and dispatch. All heavy
//! lifting happens in the library modules; this layer validates input,
//! routes to the right computation and writes artifacts.

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use clusterlab_core::model;
use clusterlab_core::phase::PhasePolynomial;
use clusterlab_core::Gate;
use serde::Serialize;

use crate::error::{LabError, Result};
use crate::io::{self, ChainConfig};
use crate::spectra::{self, SolverOptions};
use crate::symmetry;
use crate::verify;

#[derive(Parser, Debug)]
#[command(
    name = "clusterlab",
    version,
    about = "Exact construction and verification of cluster-state chain models"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// JSON config file; explicit flags override its values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Model family: x | zxz | xzx | zzz-xxx | bitflip | phaseflip | cp |
    /// ccz | cnz | cnp | ising-zz.
    #[arg(long, global = true)]
    pub model: Option<String>,

    /// Chain length (an even number of qubits).
    #[arg(long, global = true)]
    pub sites: Option<usize>,

    /// open | closed.
    #[arg(long, global = true)]
    pub boundary: Option<String>,

    /// include | drop (open chains; drop exposes the edge degeneracy).
    #[arg(long = "edge-terms", global = true)]
    pub edge_terms: Option<String>,

    /// Gate order N for the cnz / cnp families.
    #[arg(long, global = true)]
    pub order: Option<usize>,

    /// Comma-separated angle list, a single broadcast value, or @file.
    #[arg(long, global = true)]
    pub angles: Option<String>,

    /// Second angle list for ising-zz (the Ising bond angles).
    #[arg(long = "angles-zz", global = true)]
    pub angles_zz: Option<String>,

    /// Seed for the iterative eigensolver.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Worker threads; 1 guarantees bit-reproducible output. Falls back
    /// to CLUSTERLAB_JOBS, then to the available parallelism.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,

    /// Output path (stdout when omitted).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// json | csv | svg | bin (command-dependent subset).
    #[arg(long, global = true)]
    pub format: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build the cluster state and dump its amplitudes.
    State,
    /// Diagonalize the model Hamiltonian.
    Spectrum {
        /// Number of eigenvalues on the iterative path.
        #[arg(long, default_value_t = 8)]
        k: usize,
        /// dense | iterative (auto-selected by size when omitted).
        #[arg(long)]
        method: Option<String>,
    },
    /// Sweep the interpolated Hamiltonian over alpha in [0, 1].
    Sweep {
        /// Number of uniform grid points.
        #[arg(long, default_value_t = 101)]
        grid: usize,
        /// Number of recorded eigenvalues per row.
        #[arg(long, default_value_t = 4)]
        m: usize,
    },
    /// Evaluate the string order parameter on the cluster state (or on
    /// the interpolated ground state at --alpha).
    StringOrder {
        #[arg(long)]
        i: usize,
        #[arg(long)]
        j: usize,
        #[arg(long)]
        alpha: Option<f64>,
    },
    /// Run the symmetry/stabilizer check battery.
    Verify,
    /// Expand a diagonal phase polynomial into Pauli terms, optionally
    /// conjugating a bit flip through it.
    Expand {
        /// Inline JSON map {"1,2": angle, ...} or @file.
        #[arg(long)]
        poly: Option<String>,
        /// Named gate instead of a polynomial: cz | cp | ccz | cnz |
        /// cnp | zrot | zz.
        #[arg(long)]
        gate: Option<String>,
        /// Comma-separated gate sites.
        #[arg(long = "gate-sites")]
        gate_sites: Option<String>,
        /// Gate angle where applicable.
        #[arg(long)]
        angle: Option<f64>,
        /// Emit U X_j U† instead of the bare diagonal expansion.
        #[arg(long = "conjugate-site")]
        conjugate_site: Option<usize>,
    },
    /// Emit the open-chain edge logical operators.
    Logicals,
}

fn parse_angles(text: &str) -> Result<Vec<f64>> {
    let body = if let Some(path) = text.strip_prefix('@') {
        std::fs::read_to_string(path)?
    } else {
        text.to_string()
    };
    body.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<f64>()
                .map_err(|_| LabError::InvalidArgument(format!("bad angle '{t}'")))
        })
        .collect()
}

fn parse_sites(text: &str) -> Result<Vec<usize>> {
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<usize>()
                .map_err(|_| LabError::InvalidArgument(format!("bad site index '{t}'")))
        })
        .collect()
}

impl Cli {
    /// The effective chain config: file values overridden by flags.
    pub fn chain_config(&self) -> Result<ChainConfig> {
        let mut cfg: ChainConfig = match &self.config {
            Some(path) => serde_json::from_str(&std::fs::read_to_string(path)?)?,
            None => ChainConfig {
                sites: 0,
                boundary: "closed".into(),
                model: String::new(),
                order: None,
                angles: None,
                angles_zz: None,
                edge_terms: "drop".into(),
            },
        };
        if let Some(s) = self.sites {
            cfg.sites = s;
        }
        if let Some(m) = &self.model {
            cfg.model = m.clone();
        }
        if let Some(b) = &self.boundary {
            cfg.boundary = b.clone();
        }
        if let Some(e) = &self.edge_terms {
            cfg.edge_terms = e.clone();
        }
        if let Some(o) = self.order {
            cfg.order = Some(o);
        }
        if let Some(a) = &self.angles {
            cfg.angles = Some(parse_angles(a)?);
        }
        if let Some(a) = &self.angles_zz {
            cfg.angles_zz = Some(parse_angles(a)?);
        }
        if cfg.sites == 0 {
            return Err(LabError::InvalidArgument("--sites is required".into()));
        }
        if cfg.model.is_empty() {
            return Err(LabError::InvalidArgument("--model is required".into()));
        }
        Ok(cfg)
    }

    fn solver_options(&self) -> SolverOptions {
        let mut opts = SolverOptions::default();
        if let Some(seed) = self.seed {
            opts.seed = seed;
        }
        opts
    }

    fn write_text(&self, text: &str) -> Result<()> {
        match &self.out {
            Some(path) => std::fs::write(path, text)?,
            None => print!("{text}"),
        }
        Ok(())
    }

    fn write_bytes(&self, bytes: &[u8]) -> Result<()> {
        use std::io::Write;
        match &self.out {
            Some(path) => std::fs::write(path, bytes)?,
            None => std::io::stdout().write_all(bytes)?,
        }
        Ok(())
    }
}

#[derive(Serialize)]
struct StringOrderDocument<'a> {
    config: &'a ChainConfig,
    version: &'static str,
    i: usize,
    j: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    alpha: Option<f64>,
    value: f64,
    imag: f64,
}

#[derive(Serialize)]
struct LogicalRecord {
    index: usize,
    site: usize,
    x: Vec<io::PauliTermRecord>,
    y: Vec<io::PauliTermRecord>,
    z: Vec<io::PauliTermRecord>,
}

#[derive(Serialize)]
struct LogicalsDocument<'a> {
    config: &'a ChainConfig,
    version: &'static str,
    left: Vec<LogicalRecord>,
    right: Vec<LogicalRecord>,
}

#[derive(Serialize)]
struct ExpandDocument {
    version: &'static str,
    sites: usize,
    polynomial: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    conjugate_site: Option<usize>,
    terms: Vec<io::PauliTermRecord>,
}

/// Dispatch a parsed invocation. Returns the process exit code.
pub fn run(cli: &Cli) -> Result<i32> {
    match &cli.command {
        Command::State => {
            let cfg = cli.chain_config()?;
            let spec = cfg.to_spec()?;
            let state = model::cluster_state(&spec)?;
            match cli.format.as_deref().unwrap_or("json") {
                "json" => cli.write_text(&io::state_to_json(&state, &cfg)?)?,
                "bin" => cli.write_bytes(&io::state_to_binary(&state))?,
                other => {
                    return Err(LabError::InvalidArgument(format!(
                        "state supports --format json|bin, got '{other}'"
                    )))
                }
            }
            Ok(0)
        }
        Command::Spectrum { k, method } => {
            let cfg = cli.chain_config()?;
            let spec = cfg.to_spec()?;
            let bundle = model::build(&spec)?;
            let opts = cli.solver_options();
            let use_dense = match method.as_deref() {
                Some("dense") => true,
                Some("iterative") => false,
                Some(other) => {
                    return Err(LabError::InvalidArgument(format!(
                        "unknown method '{other}' (dense|iterative)"
                    )))
                }
                // full dense decomposition stays pleasant up to dim 4096
                None => spec.n_sites <= 12,
            };
            let result = if use_dense {
                spectra::diagonalize_dense(&bundle.hamiltonian, &opts)?
            } else {
                spectra::spectrum_iterative(&bundle.hamiltonian, *k, &opts)?
            };
            cli.write_text(&io::spectrum_to_json(&result, &cfg)?)?;
            Ok(0)
        }
        Command::Sweep { grid, m } => {
            let cfg = cli.chain_config()?;
            let spec = cfg.to_spec()?;
            if *grid == 0 {
                return Err(LabError::InvalidArgument("--grid must be positive".into()));
            }
            let table = spectra::sweep_alpha(&spec, &spectra::uniform_grid(*grid), *m, &cli.solver_options())?;
            let csv = io::sweep_to_csv(&table, &cfg)?;
            match cli.format.as_deref().unwrap_or("csv") {
                "csv" => cli.write_text(&csv)?,
                "svg" => {
                    let out = cli.out.as_ref().ok_or_else(|| {
                        LabError::InvalidArgument("--format svg needs --out".into())
                    })?;
                    std::fs::write(out, &csv)?;
                    std::fs::write(out.with_extension("svg"), io::sweep_to_svg(&table))?;
                }
                other => {
                    return Err(LabError::InvalidArgument(format!(
                        "sweep supports --format csv|svg, got '{other}'"
                    )))
                }
            }
            Ok(0)
        }
        Command::StringOrder { i, j, alpha } => {
            let cfg = cli.chain_config()?;
            let spec = cfg.to_spec()?;
            let bundle = model::build(&spec)?;
            let state = match alpha {
                None => bundle.reference_state.clone().ok_or_else(|| {
                    LabError::InvalidArgument("chain too long for a dense state".into())
                })?,
                Some(a) => {
                    let h = model::interpolated(&spec, *a)?;
                    let gs = spectra::ground_subspace(&h, 1, &cli.solver_options())?;
                    gs.vectors[0].clone()
                }
            };
            let so = symmetry::string_order(&state, &bundle, *i, *j)?;
            let doc = StringOrderDocument {
                config: &cfg,
                version: io::VERSION,
                i: *i,
                j: *j,
                alpha: *alpha,
                value: so.value,
                imag: so.imag,
            };
            cli.write_text(&serde_json::to_string_pretty(&doc)?)?;
            Ok(0)
        }
        Command::Verify => {
            let cfg = cli.chain_config()?;
            let spec = cfg.to_spec()?;
            let records = verify::run_battery(&spec)?;
            let all_pass = records.iter().all(|r| r.pass);
            cli.write_text(&serde_json::to_string_pretty(&records)?)?;
            Ok(if all_pass { 0 } else { 1 })
        }
        Command::Expand {
            poly,
            gate,
            gate_sites,
            angle,
            conjugate_site,
        } => {
            let sites = cli
                .sites
                .ok_or_else(|| LabError::InvalidArgument("--sites is required".into()))?;
            let mut p = PhasePolynomial::identity(sites)?;
            if let Some(text) = poly {
                let body = if let Some(path) = text.strip_prefix('@') {
                    std::fs::read_to_string(path)?
                } else {
                    text.clone()
                };
                let map: BTreeMap<String, f64> = serde_json::from_str(&body)?;
                p = p.compose(&io::poly_from_map(&map, sites)?)?;
            }
            if let Some(kind) = gate {
                let gsites = parse_sites(
                    gate_sites
                        .as_deref()
                        .ok_or_else(|| LabError::InvalidArgument("--gate needs --gate-sites".into()))?,
                )?;
                let need_angle = || {
                    angle.ok_or_else(|| LabError::InvalidArgument("gate needs --angle".into()))
                };
                let pair = |s: &[usize]| -> Result<(usize, usize)> {
                    if s.len() != 2 {
                        return Err(LabError::InvalidArgument("gate needs two sites".into()));
                    }
                    Ok((s[0], s[1]))
                };
                let g = match kind.as_str() {
                    "cz" => {
                        let (a, b) = pair(&gsites)?;
                        Gate::Cz { a, b }
                    }
                    "cp" => {
                        let (a, b) = pair(&gsites)?;
                        Gate::Cp { a, b, angle: need_angle()? }
                    }
                    "ccz" => {
                        if gsites.len() != 3 {
                            return Err(LabError::InvalidArgument("ccz needs three sites".into()));
                        }
                        Gate::Ccz { a: gsites[0], b: gsites[1], c: gsites[2] }
                    }
                    "cnz" => Gate::Cnz { sites: gsites },
                    "cnp" => Gate::Cnp { sites: gsites, angle: need_angle()? },
                    "zrot" => {
                        if gsites.len() != 1 {
                            return Err(LabError::InvalidArgument("zrot takes one site".into()));
                        }
                        Gate::Rz { site: gsites[0], angle: need_angle()? }
                    }
                    "zz" => {
                        let (a, b) = pair(&gsites)?;
                        Gate::Zz { a, b, angle: need_angle()? }
                    }
                    other => {
                        return Err(LabError::InvalidArgument(format!(
                            "unknown diagonal gate '{other}'"
                        )))
                    }
                };
                p = p.compose(&PhasePolynomial::from_gate(&g, sites)?)?;
            }
            let result = match conjugate_site {
                Some(j) => p.conjugate_x(*j)?,
                None => p.exp_to_opsum()?,
            };
            let doc = ExpandDocument {
                version: io::VERSION,
                sites,
                polynomial: io::poly_to_map(&p),
                conjugate_site: *conjugate_site,
                terms: io::opsum_to_records(&result),
            };
            cli.write_text(&serde_json::to_string_pretty(&doc)?)?;
            Ok(0)
        }
        Command::Logicals => {
            let cfg = cli.chain_config()?;
            let spec = cfg.to_spec()?;
            let set = symmetry::edge_logicals(&spec)?;
            let to_record = |t: &symmetry::LogicalTriple| LogicalRecord {
                index: t.index,
                site: t.site,
                x: io::opsum_to_records(&t.x),
                y: io::opsum_to_records(&t.y),
                z: io::opsum_to_records(&t.z),
            };
            let doc = LogicalsDocument {
                config: &cfg,
                version: io::VERSION,
                left: set.left.iter().map(to_record).collect(),
                right: set.right.iter().map(to_record).collect(),
            };
            cli.write_text(&serde_json::to_string_pretty(&doc)?)?;
            Ok(0)
        }
    }
}
