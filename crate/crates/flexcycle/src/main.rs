use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use flexcycle::butterfly::{
    analytic_limit_configuration, construct_realization, sample_flex, verify_flex, ButterflySpec,
};
use flexcycle::exact::{rat_from_str, Rat};
use flexcycle::jsonio;
use flexcycle::limit::run_pipeline;
use flexcycle::polyhedron::{Edge, SpineEdge, VertexId};
use flexcycle::zero_sum::{edge_obstruction_report, scan_all_edges};

#[derive(Parser)]
#[command(name = "flexcycle", version, about = "Zero-sum cycle obstructions to polyhedral flexibility")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the report here instead of stdout
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Off,
}

#[derive(Subcommand)]
enum Command {
    /// Check that a file describes a valid triangular polyhedron
    Validate { polyhedron: PathBuf },
    /// Compute exact edge lengths induced by a realization
    Lengths { polyhedron: PathBuf, realization: PathBuf },
    /// Scan edges for zero-sum cycle witnesses
    Obstruct {
        polyhedron: PathBuf,
        lengths: PathBuf,
        /// Restrict the scan to one edge, as "u,v"
        #[arg(long)]
        edge: Option<String>,
        /// Longest induced cycle to consider
        #[arg(long, default_value_t = 12)]
        max_len: usize,
    },
    /// Run the limit-coloring pipeline on a configuration file
    Color {
        polyhedron: PathBuf,
        lengths: PathBuf,
        configuration: PathBuf,
    },
    /// Build a butterfly flex, its analytic limit, and the certificate
    Butterfly {
        polyhedron: PathBuf,
        /// Separating cycle, as "v1,v2,..."
        #[arg(long)]
        cycle: String,
        /// One sign per cycle edge, as "+,+,-,-"
        #[arg(long)]
        signs: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Explicit x positions "v=q,..." (default: derived from signs)
        #[arg(long)]
        x: Option<String>,
        /// Rotating component (by minimum vertex id)
        #[arg(long)]
        component: Option<VertexId>,
        /// Rotation parameters for the flex samples
        #[arg(long, default_value = "0,1,2,1/2")]
        params: String,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Verify a sampled flex: exact lengths and a moving dihedral angle
    FlexVerify {
        samples: PathBuf,
        /// Override the spine, as "w1,w2,s,n"
        #[arg(long)]
        spine: Option<String>,
    },
}

/// Exit 1: the mathematics said no (invalid complex, no witness, flex
/// fails verification). Exit 2: the input could not be understood.
enum Failure {
    Negative(String),
    Input(String),
}

impl From<jsonio::FormatError> for Failure {
    fn from(e: jsonio::FormatError) -> Self {
        Failure::Input(e.to_string())
    }
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("FLEXCYCLE_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            if let Err(e) = emit(cli.output.as_deref(), &report) {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            ExitCode::SUCCESS
        }
        Err(Failure::Negative(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn emit(output: Option<&Path>, report: &str) -> std::io::Result<()> {
    match output {
        Some(path) => std::fs::write(path, report),
        None => {
            print!("{report}");
            Ok(())
        }
    }
}

fn read_json(path: &Path) -> Result<serde_json::Value, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    jsonio::parse_json(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn parse_ids(s: &str, what: &str) -> Result<Vec<VertexId>, Failure> {
    s.split(',')
        .map(|t| t.trim().parse().map_err(|_| Failure::Input(format!("bad {what}: \"{s}\""))))
        .collect()
}

fn parse_signs(s: &str) -> Result<Vec<i8>, Failure> {
    s.split(',')
        .map(|t| match t.trim() {
            "+" | "1" | "+1" => Ok(1),
            "-" | "-1" => Ok(-1),
            other => Err(Failure::Input(format!("bad sign \"{other}\""))),
        })
        .collect()
}

fn parse_rats(s: &str) -> Result<Vec<Rat>, Failure> {
    s.split(',')
        .map(|t| rat_from_str(t.trim()).map_err(|e| Failure::Input(e.to_string())))
        .collect()
}

fn parse_spine(s: &str) -> Result<SpineEdge, Failure> {
    match parse_ids(s, "spine")?[..] {
        [w1, w2, sv, n] => Ok(SpineEdge { w1, w2, s: sv, n }),
        _ => Err(Failure::Input(format!("spine must be \"w1,w2,s,n\", got \"{s}\""))),
    }
}

fn run(cli: &Cli) -> Result<String, Failure> {
    match &cli.command {
        Command::Validate { polyhedron } => {
            let value = read_json(polyhedron)?;
            match jsonio::polyhedron_from_value(&value) {
                Ok(p) => Ok(jsonio::to_pretty_string(&json!({
                    "valid": true,
                    "vertices": p.vertices().len(),
                    "edges": p.edge_count(),
                    "faces": p.faces().len(),
                }))),
                Err(jsonio::FormatError::Polyhedron(e)) => {
                    Err(Failure::Negative(format!("invalid polyhedron: {e}")))
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::Lengths { polyhedron, realization } => {
            let p = jsonio::polyhedron_from_value(&read_json(polyhedron)?)?;
            let rho = jsonio::realization_from_value(&read_json(realization)?)?;
            let lengths = rho
                .induced_lengths(&p)
                .map_err(|e| Failure::Negative(format!("invalid realization: {e}")))?;
            Ok(jsonio::to_pretty_string(&jsonio::edge_lengths_to_value(&lengths)))
        }
        Command::Obstruct { polyhedron, lengths, edge, max_len } => {
            let p = jsonio::polyhedron_from_value(&read_json(polyhedron)?)?;
            let lambda = jsonio::edge_lengths_from_value(&read_json(lengths)?)?;
            if *max_len < 3 {
                return Err(Failure::Input("--max-len must be at least 3".into()));
            }
            match edge {
                Some(spec) => {
                    let e = match parse_ids(spec, "edge")?[..] {
                        [u, v] => Edge::new(u, v),
                        _ => return Err(Failure::Input(format!("bad edge \"{spec}\""))),
                    };
                    let (s, n) = p
                        .opposite_vertices(e)
                        .map_err(|err| Failure::Input(err.to_string()))?;
                    let spine = SpineEdge { w1: e.0, w2: e.1, s, n };
                    let report = edge_obstruction_report(&p, &lambda, &spine, *max_len);
                    let found = report.witness.is_some();
                    let text =
                        jsonio::to_pretty_string(&jsonio::obstruction_report_to_value(&report));
                    if found {
                        Ok(text)
                    } else {
                        Err(Failure::Negative(text))
                    }
                }
                None => {
                    let reports = scan_all_edges(&p, &lambda, *max_len);
                    let found = reports.values().any(|r| r.witness.is_some());
                    let text = jsonio::to_pretty_string(&jsonio::scan_to_value(&reports));
                    if found {
                        Ok(text)
                    } else {
                        Err(Failure::Negative(text))
                    }
                }
            }
        }
        Command::Color { polyhedron, lengths, configuration } => {
            let p = jsonio::polyhedron_from_value(&read_json(polyhedron)?)?;
            let lambda = jsonio::edge_lengths_from_value(&read_json(lengths)?)?;
            let cfg = jsonio::limit_configuration_from_value(&read_json(configuration)?)?;
            let witness = run_pipeline(&p, &lambda, &cfg)
                .map_err(|e| Failure::Negative(format!("pipeline failed: {e}")))?;
            Ok(jsonio::to_pretty_string(&jsonio::signed_cycle_to_value(&witness)))
        }
        Command::Butterfly { polyhedron, cycle, signs, seed, x, component, params, format } => {
            let p = jsonio::polyhedron_from_value(&read_json(polyhedron)?)?;
            let cycle = parse_ids(cycle, "cycle")?;
            let signs = parse_signs(signs)?;
            let x_positions = match x {
                Some(spec) => {
                    let mut map = BTreeMap::new();
                    for entry in spec.split(',') {
                        let (v, q) = entry.split_once('=').ok_or_else(|| {
                            Failure::Input(format!("x positions are \"v=q,...\", got \"{entry}\""))
                        })?;
                        let v = v
                            .trim()
                            .parse()
                            .map_err(|_| Failure::Input(format!("bad vertex \"{v}\"")))?;
                        let q = rat_from_str(q.trim())
                            .map_err(|e| Failure::Input(e.to_string()))?;
                        map.insert(v, q);
                    }
                    Some(map)
                }
                None => None,
            };
            let spec = ButterflySpec { polyhedron: p, cycle, signs, seed: *seed, x_positions };
            let params = parse_rats(params)?;
            butterfly_bundle(&spec, *component, &params, *format)
        }
        Command::FlexVerify { samples, spine } => {
            let value = read_json(samples)?;
            let (p, file_spine, samples) = jsonio::sample_file_from_value(&value)?;
            let spine = match spine {
                Some(s) => parse_spine(s)?,
                None => file_spine,
            };
            spine.validate(&p).map_err(|e| Failure::Input(e.to_string()))?;
            let report = verify_flex(&p, &samples, &spine)
                .map_err(|e| Failure::Negative(format!("flex verification failed: {e}")))?;
            Ok(jsonio::to_pretty_string(&jsonio::flex_report_to_value(&report)))
        }
    }
}

fn butterfly_bundle(
    spec: &ButterflySpec,
    component: Option<VertexId>,
    params: &[Rat],
    format: Format,
) -> Result<String, Failure> {
    let negative = |e: &dyn std::fmt::Display| Failure::Negative(format!("butterfly failed: {e}"));
    let base = construct_realization(spec).map_err(|e| negative(&e))?;
    let lambda = base.induced_lengths(&spec.polyhedron).map_err(|e| negative(&e))?;
    let components = spec.components().map_err(|e| negative(&e))?;

    // pick the rotating component: the requested one, or the first whose
    // opposite vertex at some cycle edge gives a usable spine
    let candidates: Vec<VertexId> = match component {
        Some(c) => vec![c],
        None => components.keys().copied().collect(),
    };
    let mut chosen = None;
    let mut last_err = None;
    for c in candidates {
        match analytic_limit_configuration(spec, &base, c) {
            Ok(cfg) => {
                chosen = Some((c, cfg));
                break;
            }
            Err(e) => last_err = Some(e),
        }
    }
    let (rotating, cfg) = chosen.ok_or_else(|| {
        negative(&last_err.expect("at least one candidate component"))
    })?;

    let certificate =
        run_pipeline(&spec.polyhedron, &lambda, &cfg).map_err(|e| negative(&e))?;

    let mut samples = Vec::new();
    for t in params {
        let assignment: BTreeMap<VertexId, Rat> = components
            .keys()
            .map(|&c| (c, if c == rotating { t.clone() } else { Rat::from_integer(0.into()) }))
            .collect();
        samples.push(sample_flex(spec, &base, &assignment).map_err(|e| negative(&e))?);
    }
    let flex_report =
        verify_flex(&spec.polyhedron, &samples, &cfg.spine).map_err(|e| negative(&e))?;

    match format {
        Format::Off => jsonio::samples_to_off(&spec.polyhedron, &samples)
            .map_err(|e| Failure::Input(e.to_string())),
        Format::Json => Ok(jsonio::to_pretty_string(&json!({
            "spec": jsonio::butterfly_spec_to_value(spec),
            "polyhedron": jsonio::polyhedron_to_value(&spec.polyhedron),
            "base": jsonio::realization_to_value(&base),
            "lengths": jsonio::edge_lengths_to_value(&lambda),
            "rotating_component": rotating,
            "spine": jsonio::spine_to_value(&cfg.spine),
            "limit_configuration": jsonio::limit_configuration_to_value(&cfg),
            "certificate": jsonio::signed_cycle_to_value(&certificate),
            "samples": samples.iter().map(jsonio::flex_sample_to_value).collect::<Vec<_>>(),
            "flex_report": jsonio::flex_report_to_value(&flex_report),
        }))),
    }
}
