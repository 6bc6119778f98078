//! Command-line frontend: every subcommand reads/writes the JSON documents
//! of the library and accepts `-` for stdin/stdout. Exit code 1 signals a
//! validation failure, 2 malformed input, with error JSON on stderr.

use clap::{Parser, Subcommand};
use orbitgraph::circulation::{casimir_moments, compatibility_check, solve_circulation_space};
use orbitgraph::classify::{iso_circulation_graph, iso_measured_reeb};
use orbitgraph::fixtures;
use orbitgraph::homology::orbit_moduli_dimension;
use orbitgraph::io::{
    circulation_from_json, circulation_to_json, graph_from_json, graph_to_dot, graph_to_json,
    mesh_from_json, mesh_to_json,
};
use orbitgraph::mesh::{check_simple_morse_odd, perturb_to_simple, validate_surface};
use orbitgraph::rat::{fmt_rat, parse_rat};
use orbitgraph::realize::realize_graph;
use orbitgraph::reeb::measured_reeb_graph;
use std::io::{Read, Write};

#[derive(Parser)]
#[command(
    name = "orbitgraph",
    version,
    about = "Classification invariants of simple Morse pseudo-functions and \
             coadjoint orbits on non-orientable surfaces"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check the equivariant surface conditions on a mesh document.
    Validate {
        #[arg(default_value = "-")]
        mesh: String,
    },
    /// Sweep a mesh into its measured Reeb graph with involution.
    Reeb {
        #[arg(default_value = "-")]
        mesh: String,
        #[arg(short, long, default_value = "-")]
        output: String,
    },
    /// Dimension of the coadjoint-orbit moduli: d = (#Fix + b1 - 1)/2.
    OrbitDim {
        #[arg(default_value = "-")]
        graph: String,
    },
    /// Solve for an even circulation function; optionally print the
    /// homogeneous basis.
    Circulation {
        #[arg(default_value = "-")]
        graph: String,
        #[arg(long)]
        basis: bool,
        #[arg(short, long, default_value = "-")]
        output: String,
    },
    /// Decide isomorphism of two graphs (or circulation graphs).
    Classify {
        graph1: String,
        #[arg(default_value = "-")]
        graph2: String,
        /// Compare circulation graphs (documents must carry cref).
        #[arg(long)]
        circulation: bool,
        /// Tolerance on profile (and cref) comparison, e.g. 1/16.
        #[arg(long)]
        tol: Option<String>,
    },
    /// Casimir moments ∫ f^k dμ per edge, globally, and on the quotient.
    Casimirs {
        #[arg(default_value = "-")]
        graph: String,
        /// Comma-separated exponents.
        #[arg(long, default_value = "0,1,2")]
        k: String,
    },
    /// Check graph/mesh compatibility (Betti numbers, mass = area).
    Compat {
        graph: String,
        #[arg(default_value = "-")]
        mesh: String,
    },
    /// Break value ties by odd perturbation smaller than eps.
    Perturb {
        #[arg(default_value = "-")]
        mesh: String,
        #[arg(long)]
        eps: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long, default_value = "-")]
        output: String,
    },
    /// Build a mesh realizing a compatible graph.
    Realize {
        #[arg(default_value = "-")]
        graph: String,
        #[arg(long, default_value_t = 4)]
        refine: u32,
        #[arg(short, long, default_value = "-")]
        output: String,
    },
    /// Emit a named fixture mesh: vertical-torus, inclined-torus, sphere,
    /// or random.
    Fixtures {
        name: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        refine: u32,
        #[arg(short, long, default_value = "-")]
        output: String,
    },
    /// Render a graph document as Graphviz DOT.
    ExportDot {
        #[arg(default_value = "-")]
        graph: String,
        #[arg(short, long, default_value = "-")]
        output: String,
    },
}

struct Failure {
    code: i32,
    kind: &'static str,
    message: String,
}

impl Failure {
    fn invalid(message: impl Into<String>) -> Self {
        Failure { code: 1, kind: "validation", message: message.into() }
    }
    fn malformed(message: impl Into<String>) -> Self {
        Failure { code: 2, kind: "malformed", message: message.into() }
    }
}

/// Prints a line to stdout; a closed pipe (e.g. `| head`) ends the program
/// quietly instead of panicking.
fn emit(line: impl std::fmt::Display) {
    let mut out = std::io::stdout();
    if writeln!(out, "{line}").is_err() {
        std::process::exit(0);
    }
}

fn read_input(path: &str) -> Result<String, Failure> {
    if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| Failure::malformed(format!("stdin: {e}")))?;
        Ok(buf)
    } else {
        std::fs::read_to_string(path).map_err(|e| Failure::malformed(format!("{path}: {e}")))
    }
}

fn write_output(path: &str, content: &str) -> Result<(), Failure> {
    if path == "-" {
        std::io::stdout().write_all(content.as_bytes()).map_err(|e| {
            if e.kind() == std::io::ErrorKind::BrokenPipe {
                std::process::exit(0);
            }
            Failure::malformed(format!("stdout: {e}"))
        })
    } else {
        std::fs::write(path, content).map_err(|e| Failure::malformed(format!("{path}: {e}")))
    }
}

fn read_mesh(path: &str) -> Result<orbitgraph::mesh::SurfaceComplex, Failure> {
    mesh_from_json(&read_input(path)?).map_err(|e| Failure::malformed(e.to_string()))
}

fn read_graph(path: &str) -> Result<orbitgraph::reeb::MeasuredReebGraph, Failure> {
    graph_from_json(&read_input(path)?).map_err(|e| Failure::malformed(e.to_string()))
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.cmd {
        Cmd::Validate { mesh } => {
            let s = read_mesh(&mesh)?;
            let report = validate_surface(&s);
            let morse = if report.is_valid() { check_simple_morse_odd(&s) } else { Vec::new() };
            let body = serde_json::json!({
                "valid": report.is_valid() && morse.is_empty(),
                "violations": report.violations.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
                "morse": morse,
            });
            emit(serde_json::to_string_pretty(&body).unwrap());
            if !report.is_valid() || !morse.is_empty() {
                return Err(Failure::invalid("mesh failed validation"));
            }
            Ok(())
        }
        Cmd::Reeb { mesh, output } => {
            let s = read_mesh(&mesh)?;
            let g = measured_reeb_graph(&s).map_err(|e| Failure::invalid(e.to_string()))?;
            write_output(&output, &graph_to_json(&g))
        }
        Cmd::OrbitDim { graph } => {
            let g = read_graph(&graph)?;
            let d = orbit_moduli_dimension(&g, None)
                .map_err(|e| Failure::invalid(e.to_string()))?;
            emit(format!("d = {d}"));
            Ok(())
        }
        Cmd::Circulation { graph, basis, output } => {
            let g = read_graph(&graph)?;
            let (c, hom) =
                solve_circulation_space(&g).map_err(|e| Failure::invalid(e.to_string()))?;
            if basis {
                let doc: serde_json::Value =
                    serde_json::from_str(&circulation_to_json(&c)).unwrap();
                let basis_doc: Vec<Vec<String>> = hom
                    .iter()
                    .map(|v| v.iter().map(fmt_rat).collect())
                    .collect();
                let body = serde_json::json!({ "circulation": doc, "basis": basis_doc });
                write_output(&output, &serde_json::to_string_pretty(&body).unwrap())
            } else {
                write_output(&output, &circulation_to_json(&c))
            }
        }
        Cmd::Classify { graph1, graph2, circulation, tol } => {
            let tol = match &tol {
                None => None,
                Some(t) => Some(
                    parse_rat(t).map_err(|e| Failure::malformed(e.to_string()))?,
                ),
            };
            let iso = if circulation {
                let parse = |p: &str| {
                    circulation_from_json(&read_input(p)?)
                        .map_err(|e| Failure::malformed(e.to_string()))
                };
                iso_circulation_graph(&parse(&graph1)?, &parse(&graph2)?, tol.as_ref())
            } else {
                iso_measured_reeb(&read_graph(&graph1)?, &read_graph(&graph2)?, tol.as_ref())
            };
            match iso {
                Some(m) => {
                    let body = serde_json::json!({
                        "isomorphic": true, "nodes": m.nodes, "edges": m.edges,
                    });
                    emit(serde_json::to_string_pretty(&body).unwrap());
                    Ok(())
                }
                None => {
                    emit(serde_json::json!({ "isomorphic": false }));
                    Err(Failure::invalid("not isomorphic"))
                }
            }
        }
        Cmd::Casimirs { graph, k } => {
            let g = read_graph(&graph)?;
            let ks: Vec<u32> = k
                .split(',')
                .map(|x| x.trim().parse::<u32>())
                .collect::<Result<_, _>>()
                .map_err(|e| Failure::malformed(format!("--k: {e}")))?;
            let table = casimir_moments(&g, &ks).map_err(|e| Failure::invalid(e.to_string()))?;
            let body = serde_json::json!({
                "ks": table.ks,
                "per_edge": table.per_edge.iter()
                    .map(|row| row.iter().map(fmt_rat).collect::<Vec<_>>())
                    .collect::<Vec<_>>(),
                "global": table.global.iter().map(fmt_rat).collect::<Vec<_>>(),
                "quotient": table.quotient.iter()
                    .map(|q| q.as_ref().map(fmt_rat))
                    .collect::<Vec<_>>(),
            });
            emit(serde_json::to_string_pretty(&body).unwrap());
            Ok(())
        }
        Cmd::Compat { graph, mesh } => {
            let g = read_graph(&graph)?;
            let s = read_mesh(&mesh)?;
            let violations = compatibility_check(&g, &s);
            let body = serde_json::json!({
                "compatible": violations.is_empty(),
                "violations": violations,
            });
            emit(serde_json::to_string_pretty(&body).unwrap());
            if body["compatible"] == serde_json::json!(false) {
                return Err(Failure::invalid("graph and mesh are not compatible"));
            }
            Ok(())
        }
        Cmd::Perturb { mesh, eps, seed, output } => {
            let s = read_mesh(&mesh)?;
            let eps = parse_rat(&eps).map_err(|e| Failure::malformed(e.to_string()))?;
            let t = perturb_to_simple(&s, &eps, seed)
                .map_err(|e| Failure::invalid(e.to_string()))?;
            write_output(&output, &mesh_to_json(&t))
        }
        Cmd::Realize { graph, refine, output } => {
            let g = read_graph(&graph)?;
            let s = realize_graph(&g, refine).map_err(|e| Failure::invalid(e.to_string()))?;
            write_output(&output, &mesh_to_json(&s))
        }
        Cmd::Fixtures { name, seed, refine, output } => {
            let s = match name.as_str() {
                "vertical-torus" => fixtures::vertical_torus(8, 8),
                "inclined-torus" => fixtures::inclined_torus(8, 8),
                "sphere" => fixtures::perturbed_octahedron(),
                "random" => fixtures::random_mesh(seed, refine),
                other => {
                    return Err(Failure::malformed(format!(
                        "unknown fixture '{other}'; try vertical-torus, inclined-torus, \
                         sphere, random"
                    )))
                }
            };
            write_output(&output, &mesh_to_json(&s))
        }
        Cmd::ExportDot { graph, output } => {
            let text = read_input(&graph)?;
            // circulation documents carry cref; fall back to plain graphs
            let dot = match circulation_from_json(&text) {
                Ok(c) => graph_to_dot(&c.base, Some(&c.cref)),
                Err(_) => {
                    let g = graph_from_json(&text)
                        .map_err(|e| Failure::malformed(e.to_string()))?;
                    graph_to_dot(&g, None)
                }
            };
            write_output(&output, &dot)
        }
    }
}

fn main() {
    let cli = Cli::parse();
    if let Err(f) = run(cli) {
        let body = serde_json::json!({ "error": f.message, "kind": f.kind });
        eprintln!("{body}");
        std::process::exit(f.code);
    }
}
