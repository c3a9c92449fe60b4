//! Command-line interface: group construction, lattice and poset dumps,
//! coordinate computations, and the gluing pipeline. All outputs are
//! deterministic JSON.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use dadeglue::glue;
use dadeglue::group::GroupTable;
use dadeglue::json as fmt;
use dadeglue::lattice::SubgroupLattice;
use dadeglue::poset;
use dadeglue::syzygy;

#[derive(Parser)]
#[command(name = "dadeglue", version, about = "Gluing toolkit for endo-permutation coordinate data on finite p-groups")]
struct Cli {
    /// Cap on group order for constructions and loaded files.
    #[arg(long, global = true, default_value_t = dadeglue::group::DEFAULT_CAP)]
    cap: u32,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build or validate group tables.
    Group {
        #[command(subcommand)]
        cmd: GroupCmd,
    },
    /// Subgroup lattice queries.
    Lattice {
        #[command(subcommand)]
        cmd: LatticeCmd,
    },
    /// The poset of elementary abelian subgroups of rank >= 2.
    Poset {
        #[command(subcommand)]
        cmd: PosetCmd,
    },
    /// Coordinates on rank-2 sections and image membership.
    Dade {
        #[command(subcommand)]
        cmd: DadeCmd,
    },
    /// Gluing-data validation and the obstruction pipeline.
    Glue {
        #[command(subcommand)]
        cmd: GlueCmd,
    },
    /// Structured reports.
    Report {
        #[command(subcommand)]
        cmd: ReportCmd,
    },
}

#[derive(Args)]
struct OutArg {
    /// Output file; stdout when omitted.
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum GroupCmd {
    /// Construct a group from a builtin spec or re-validate a file.
    Build {
        /// Builtin spec: ea:<p>:<rank>, xp3:<p>, xp5:<p>, or
        /// prod:<spec>+<spec>.
        #[arg(long, conflicts_with = "from")]
        builtin: Option<String>,
        /// Load and validate an existing group file.
        #[arg(long)]
        from: Option<PathBuf>,
        #[command(flatten)]
        out: OutArg,
    },
}

#[derive(Subcommand)]
enum LatticeCmd {
    /// Enumerate all subgroups with inclusions, orbits and Möbius values.
    Enum {
        #[arg(long)]
        group: PathBuf,
        #[command(flatten)]
        out: OutArg,
    },
    /// Emit the Möbius table only.
    Moebius {
        #[arg(long)]
        group: PathBuf,
        #[command(flatten)]
        out: OutArg,
    },
}

#[derive(Subcommand)]
enum PosetCmd {
    /// Dump vertices, edges, orbits and components.
    Build {
        #[arg(long)]
        group: PathBuf,
        #[command(flatten)]
        out: OutArg,
    },
    /// First integer cohomology rank and torsion.
    H1 {
        #[arg(long)]
        group: PathBuf,
        /// Restrict to conjugation-invariant cochains.
        #[arg(long)]
        invariant: bool,
        #[command(flatten)]
        out: OutArg,
    },
}

#[derive(Subcommand)]
enum DadeCmd {
    /// Coordinates of an element on all rank-2 sections.
    Coords {
        #[arg(long)]
        group: PathBuf,
        #[arg(long)]
        element: PathBuf,
        #[command(flatten)]
        out: OutArg,
    },
    /// The generator coordinate matrix.
    Matrix {
        #[arg(long)]
        group: PathBuf,
        /// transitive | all
        #[arg(long, default_value = "transitive")]
        mode: String,
        #[command(flatten)]
        out: OutArg,
    },
    /// Check the image conditions for a section vector.
    Check {
        #[arg(long)]
        group: PathBuf,
        #[arg(long)]
        vector: PathBuf,
    },
    /// Solve for a preimage of a section vector.
    Solve {
        #[arg(long)]
        group: PathBuf,
        #[arg(long)]
        vector: PathBuf,
        #[command(flatten)]
        out: OutArg,
    },
    /// Generate a random element (for property-test data).
    Random {
        #[arg(long)]
        group: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 4)]
        terms: usize,
        #[arg(long, default_value_t = 3)]
        bound: i64,
        #[command(flatten)]
        out: OutArg,
    },
}

#[derive(Subcommand)]
enum GlueCmd {
    /// Check the compatibility conditions of gluing data.
    Validate {
        #[arg(long)]
        data: PathBuf,
    },
    /// Compute the obstruction cocycle of validated data.
    Cocycle {
        #[arg(long)]
        data: PathBuf,
        #[command(flatten)]
        out: OutArg,
    },
    /// Run the full pipeline: glueable with certificate, or obstructed.
    Solve {
        #[arg(long)]
        data: PathBuf,
        #[command(flatten)]
        out: OutArg,
    },
}

#[derive(Subcommand)]
enum ReportCmd {
    /// Report on the extraspecial group of order p^5 and exponent p.
    Xp5 {
        #[arg(long, default_value_t = 3)]
        p: u32,
        #[command(flatten)]
        out: OutArg,
    },
}

fn emit<T: serde::Serialize>(out: &OutArg, value: &T) -> anyhow::Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    match &out.out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn load_group(path: &Path, cap: u32) -> anyhow::Result<GroupTable> {
    let text = std::fs::read_to_string(path)?;
    let j: fmt::GroupJson = serde_json::from_str(&text)?;
    Ok(fmt::group_from_json(&j, cap)?)
}

fn load_lattice(path: &Path, cap: u32) -> anyhow::Result<SubgroupLattice> {
    Ok(SubgroupLattice::enumerate(load_group(path, cap)?)?)
}

fn parse_builtin(spec: &str, cap: u32) -> anyhow::Result<GroupTable> {
    if let Some(rest) = spec.strip_prefix("prod:") {
        let (a, b) = rest
            .split_once('+')
            .ok_or_else(|| anyhow::anyhow!("prod spec needs two '+'-separated parts"))?;
        let ga = parse_builtin(a, cap)?;
        let gb = parse_builtin(b, cap)?;
        return Ok(GroupTable::direct_product(&ga, &gb, cap)?);
    }
    let parts: Vec<&str> = spec.split(':').collect();
    match parts.as_slice() {
        ["ea", p, r] => Ok(GroupTable::elementary_abelian(p.parse()?, r.parse()?, cap)?),
        ["xp3", p] => Ok(GroupTable::extraspecial(p.parse()?, 3, cap)?),
        ["xp5", p] => Ok(GroupTable::extraspecial(p.parse()?, 5, cap)?),
        _ => anyhow::bail!("unknown builtin spec {spec:?}"),
    }
}

/// Domain outcomes: Ok(true) = success, Ok(false) = domain failure (exit 1).
fn run(cli: Cli) -> anyhow::Result<bool> {
    let cap = cli.cap;
    match cli.command {
        Command::Group { cmd } => match cmd {
            GroupCmd::Build { builtin, from, out } => {
                let g = match (builtin, from) {
                    (Some(spec), None) => parse_builtin(&spec, cap)?,
                    (None, Some(path)) => load_group(&path, cap)?,
                    _ => anyhow::bail!("group build needs exactly one of --builtin / --from"),
                };
                emit(&out, &fmt::group_to_json(&g))?;
                Ok(true)
            }
        },
        Command::Lattice { cmd } => match cmd {
            LatticeCmd::Enum { group, out } => {
                let lat = load_lattice(&group, cap)?;
                emit(&out, &fmt::lattice_to_json(&lat)?)?;
                Ok(true)
            }
            LatticeCmd::Moebius { group, out } => {
                let lat = load_lattice(&group, cap)?;
                emit(&out, &fmt::lattice_to_json(&lat)?.moebius)?;
                Ok(true)
            }
        },
        Command::Poset { cmd } => match cmd {
            PosetCmd::Build { group, out } => {
                let lat = load_lattice(&group, cap)?;
                let p = poset::build_ea_poset(&lat)?;
                emit(&out, &fmt::poset_to_json(&lat, &p))?;
                Ok(true)
            }
            PosetCmd::H1 {
                group,
                invariant,
                out,
            } => {
                let lat = load_lattice(&group, cap)?;
                let p = poset::build_ea_poset(&lat)?;
                let (rank, torsion) = poset::h1_rank(&p, invariant)?;
                let torsion: Vec<String> = torsion.iter().map(|t| t.to_string()).collect();
                println!("H1 rank = {rank}, torsion = {torsion:?}");
                emit(
                    &out,
                    &json!({ "invariant": invariant, "rank": rank, "torsion": torsion }),
                )?;
                Ok(true)
            }
        },
        Command::Dade { cmd } => match cmd {
            DadeCmd::Coords { group, element, out } => {
                let lat = load_lattice(&group, cap)?;
                let terms: fmt::SyzygyJson =
                    serde_json::from_str(&std::fs::read_to_string(element)?)?;
                let sec = (lat.full_id(), lat.trivial_id());
                let e = fmt::syzygy_from_json(&lat, sec, &terms)?;
                let v = syzygy::coordinates(&lat, &e)?;
                emit(&out, &fmt::section_vector_to_json(&lat, &v)?)?;
                Ok(true)
            }
            DadeCmd::Matrix { group, mode, out } => {
                let lat = load_lattice(&group, cap)?;
                let mode = match mode.as_str() {
                    "transitive" => syzygy::GeneratorMode::Transitive,
                    "all" => syzygy::GeneratorMode::AllPatterns,
                    other => anyhow::bail!("unknown mode {other:?} (use transitive | all)"),
                };
                let gm = syzygy::generator_matrix(&lat, mode, syzygy::DEFAULT_PATTERN_CAP)?;
                let rows: Vec<_> = gm
                    .row_sections
                    .iter()
                    .map(|&i| {
                        let r = &lat.e2().sections[i as usize];
                        json!({ "T": lat.elems(r.t), "S": lat.elems(r.s) })
                    })
                    .collect();
                let columns: Vec<_> = match &gm.col_bases {
                    Some(bases) => bases
                        .iter()
                        .map(|&b| json!({ "coset_base": lat.elems(b) }))
                        .collect(),
                    None => gm
                        .col_patterns
                        .iter()
                        .map(|p| {
                            let members: Vec<_> =
                                p.iter().map(|w| lat.elems(w as u32).to_vec()).collect();
                            json!({ "pattern": members })
                        })
                        .collect(),
                };
                let matrix: Vec<Vec<String>> = (0..gm.matrix.rows())
                    .map(|i| {
                        (0..gm.matrix.cols())
                            .map(|j| gm.matrix.at(i, j).to_string())
                            .collect()
                    })
                    .collect();
                emit(&out, &json!({ "rows": rows, "columns": columns, "matrix": matrix }))?;
                Ok(true)
            }
            DadeCmd::Check { group, vector } => {
                let lat = load_lattice(&group, cap)?;
                let items: Vec<fmt::SectionValueJson> =
                    serde_json::from_str(&std::fs::read_to_string(vector)?)?;
                let v = fmt::section_vector_from_json(&lat, &items)?;
                match syzygy::check_conditions(&lat, &v)? {
                    syzygy::Verdict::Pass => {
                        println!("{}", json!({ "verdict": "pass" }));
                        Ok(true)
                    }
                    syzygy::Verdict::Fail(f) => {
                        println!(
                            "{}",
                            json!({ "verdict": "fail", "condition": f.condition,
                                    "detail": f.to_string() })
                        );
                        Ok(false)
                    }
                }
            }
            DadeCmd::Solve { group, vector, out } => {
                let lat = load_lattice(&group, cap)?;
                let items: Vec<fmt::SectionValueJson> =
                    serde_json::from_str(&std::fs::read_to_string(vector)?)?;
                let v = fmt::section_vector_from_json(&lat, &items)?;
                match syzygy::image_membership(&lat, &v)? {
                    syzygy::Membership::Element(e) => {
                        emit(&out, &fmt::syzygy_to_json(&lat, &e)?)?;
                        Ok(true)
                    }
                    syzygy::Membership::NoSolution(c) => {
                        println!("{}", json!({ "no_solution": c.to_string() }));
                        Ok(false)
                    }
                }
            }
            DadeCmd::Random {
                group,
                seed,
                terms,
                bound,
                out,
            } => {
                let lat = load_lattice(&group, cap)?;
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let sec = (lat.full_id(), lat.trivial_id());
                let e = syzygy::random_element(&lat, sec, &mut rng, terms, bound)?;
                emit(&out, &fmt::syzygy_to_json(&lat, &e)?)?;
                Ok(true)
            }
        },
        Command::Glue { cmd } => match cmd {
            GlueCmd::Validate { data } => {
                let (lat, gd) = load_gluing(&data, cap)?;
                match glue::validate(&lat, &gd)? {
                    glue::GlueVerdict::Pass => {
                        println!("{}", json!({ "verdict": "pass" }));
                        Ok(true)
                    }
                    glue::GlueVerdict::Fail(f) => {
                        println!("{}", json!({ "verdict": "fail", "detail": f.to_string() }));
                        Ok(false)
                    }
                }
            }
            GlueCmd::Cocycle { data, out } => {
                let (lat, gd) = load_gluing(&data, cap)?;
                let p = poset::build_ea_poset(&lat)?;
                let w = glue::obstruction_cocycle(&lat, &p, &gd)?;
                let edges: Vec<_> = w
                    .values
                    .iter()
                    .enumerate()
                    .map(|(k, &wv)| {
                        let (i, j) = p.edges[k];
                        json!({
                            "E": lat.elems(p.vertices[i as usize]),
                            "F": lat.elems(p.vertices[j as usize]),
                            "w": wv,
                        })
                    })
                    .collect();
                emit(&out, &edges)?;
                Ok(true)
            }
            GlueCmd::Solve { data, out } => {
                let (lat, gd) = load_gluing(&data, cap)?;
                let p = poset::build_ea_poset(&lat)?;
                let outcome = glue::glue_solve(&lat, &p, &gd)?;
                emit(&out, &fmt::outcome_to_json(&lat, &p, &outcome)?)?;
                Ok(true)
            }
        },
        Command::Report { cmd } => match cmd {
            ReportCmd::Xp5 { p, out } => {
                let report = glue::xp5_report(p, cap)?;
                print_xp5_table(&report);
                emit(&out, &report)?;
                Ok(true)
            }
        },
    }
}

fn load_gluing(path: &Path, cap: u32) -> anyhow::Result<(SubgroupLattice, glue::GluingData)> {
    let j: fmt::GluingDataJson = serde_json::from_str(&std::fs::read_to_string(path)?)?;
    let g = fmt::group_from_json(&j.group, cap)?;
    let lat = SubgroupLattice::enumerate(g)?;
    let gd = fmt::gluing_from_json(&lat, &j)?;
    Ok((lat, gd))
}

fn print_xp5_table(r: &glue::Xp5Report) {
    println!("extraspecial group of order {}^5 = {}", r.p, r.group_order);
    println!("  center order                  {}", r.center_order);
    println!("  quotient-by-center rank       {}", r.quotient_by_center_rank);
    println!("  isotropic lines e             {}", r.e);
    println!("  rank-2 over center            {}", r.ea_over_center_rank2);
    println!("  rank-3 over center            {}", r.ea_over_center_rank3);
    println!("  rank-2 missing center         {}", r.rank2_not_containing_center);
    println!(
        "  poset                         {} vertices, {} edges, {} component(s)",
        r.poset_vertices, r.poset_edges, r.n_components
    );
    println!(
        "  invariant H1                  rank {}, torsion {:?}",
        r.h1_invariant_rank, r.h1_invariant_torsion
    );
    println!(
        "  rank identity                 1 - 2e + e(p+1) = {} = {}",
        r.rank_identity_lhs, r.rank_identity_rhs
    );
    println!(
        "  order-p classes meeting Z trivially    {} (all quotients extraspecial: {})",
        r.classes_order_p_trivial_center_meet, r.order_p_quotients_all_extraspecial
    );
    println!(
        "  order-p^2 classes meeting Z trivially  {} (all quotients cyclic of order p: {})",
        r.classes_order_p2_trivial_center_meet, r.order_p2_quotients_all_cyclic_of_order_p
    );
    println!("  cokernel of the obstruction map        {}", r.h_p_cokernel);
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            println!("{}", json!({ "error": e.to_string() }));
            ExitCode::from(1)
        }
    }
}
