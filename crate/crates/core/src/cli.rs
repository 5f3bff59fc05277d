//! Command-line front end. [`run`] is the whole program minus process exit.
//!
//! Exit codes: 0 pass, 1 semantic negative (not equal, not isomorphic, check
//! failed), 2 usage or I/O error.

use std::collections::BTreeSet;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::constructions::{glue, rotor_flip_pair, w0_flip_pair, whitney_twist, PairSet, TerminalList, W0Spec};
use crate::corpus::{corpus, corpus_entry};
use crate::format::{render_graph, GraphDoc};
use crate::iso::Iso;
use crate::multigraph::{EdgeId, Multigraph, VertexId};
use crate::phigen::{
    attach_rotors, build_psi_digraph, certify_phi_prime_indexed, check_dig1, directed_cycles, verify_new_member,
    CycleRotorAssignment, PhiWitness, RotorRecord, WitnessFile,
};
use crate::tutte::{t_equivalent, tutte_dc_with_stats, tutte_subset_expansion, EdgePickPolicy, EngineConfig, MemoCache};
use crate::verify::{
    check_expansion_identity, check_necessary, check_partition_condition, check_subset_condition, random_glue_probe,
};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

type Result<T, E = CliError> = std::result::Result<T, E>;

fn usage(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

#[derive(Debug, Parser)]
#[command(name = "tutte-forge", version, about = "Tutte polynomials, T-equivalent constructions and their checkers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the Tutte polynomial of a graph file.
    Compute {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Engine::Dc)]
        engine: Engine,
        /// Print engine counters after the polynomial.
        #[arg(long)]
        stats: bool,
        #[arg(long, default_value_t = 1)]
        parallel: usize,
        #[arg(long, default_value = "max-degree-sum")]
        policy: String,
        #[arg(long)]
        no_memo: bool,
    },
    /// Exit 0 when the two graphs have the same Tutte polynomial.
    Equal { a: PathBuf, b: PathBuf },
    /// Print an isomorphism as `i->j` pairs, or NOT-ISOMORPHIC.
    Iso {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, default_value_t = crate::iso::DEFAULT_MAX_VERTICES)]
        max_vertices: usize,
    },
    /// Glue two terminal graphs along their terminal lists.
    Glue {
        g: PathBuf,
        w: PathBuf,
        #[command(flatten)]
        lists: ListNames,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Twist one side of a 2-vertex cut.
    Twist {
        g: PathBuf,
        /// The cut as `u1,u2`.
        #[arg(long)]
        cut: String,
        /// Vertices of the twisted side, comma-separated.
        #[arg(long)]
        side: String,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Glue a rotor to an attachment in both terminal orders.
    RotorFlip {
        r: PathBuf,
        w: PathBuf,
        #[command(flatten)]
        lists: ListNames,
        /// Skip the cyclic-orbit hypothesis check.
        #[arg(long)]
        force: bool,
        #[command(flatten)]
        out: PairOut,
    },
    /// Build the six-terminal extension pair from a rotor, a gadget and a filler.
    #[command(alias = "theorem5")]
    W0Flip {
        r: PathBuf,
        /// Gadget file with terminal lists `w` and `x`.
        w0: PathBuf,
        y: PathBuf,
        #[arg(long = "order")]
        rotation: usize,
        #[arg(long = "step")]
        step: usize,
        #[arg(long)]
        force: bool,
        #[command(flatten)]
        out: PairOut,
    },
    /// Membership witnesses and rotor attachment.
    Phi {
        #[command(subcommand)]
        action: PhiAction,
    },
    /// Conditions for T-equivalence under every attachment.
    Check {
        #[command(subcommand)]
        action: CheckAction,
    },
    /// Built-in graph families.
    Corpus {
        #[command(subcommand)]
        action: CorpusAction,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Engine {
    Dc,
    Subset,
}

/// Which terminal list of each input file to use; the first list by default.
#[derive(Debug, Args)]
struct ListNames {
    #[arg(long)]
    list_a: Option<String>,
    #[arg(long)]
    list_b: Option<String>,
}

#[derive(Debug, Args)]
struct PairOut {
    #[arg(long)]
    out_first: PathBuf,
    #[arg(long)]
    out_second: PathBuf,
}

#[derive(Debug, Args)]
struct Seed {
    /// Witness file to replay instead of searching.
    #[arg(long, conflicts_with_all = ["g", "h"])]
    witness: Option<PathBuf>,
    #[arg(requires = "h")]
    g: Option<PathBuf>,
    h: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    e: u32,
    #[arg(long, default_value_t = 0)]
    f: u32,
    #[arg(long, default_value_t = 0)]
    phi_index: usize,
    #[arg(long, default_value_t = 0)]
    psi_index: usize,
}

#[derive(Debug, Subcommand)]
enum PhiAction {
    /// Find a membership witness (φ, ψ) or report NOT-IN-PHI-PRIME.
    Certify {
        #[command(flatten)]
        seed: Seed,
        #[arg(long)]
        witness_out: Option<PathBuf>,
    },
    /// Print the index digraph of a witness.
    Digraph {
        #[command(flatten)]
        seed: Seed,
    },
    /// List the directed cycles with their end-of-edge verdicts.
    Cycles {
        #[command(flatten)]
        seed: Seed,
    },
    /// Attach rotors along cycles and write the new pair.
    Generate {
        #[command(flatten)]
        seed: Seed,
        /// `<cycle>:<rotor file>:<orbit>`, e.g. `1,4,2:k3.g:1,2,3`. Repeatable.
        #[arg(long = "rotor")]
        rotors: Vec<String>,
        #[command(flatten)]
        out: PairOut,
        #[arg(long)]
        witness_out: Option<PathBuf>,
    },
    /// Replay a witness file and re-check the resulting pair.
    Verify {
        witness: PathBuf,
        #[arg(long, requires = "out_second")]
        out_first: Option<PathBuf>,
        #[arg(long)]
        out_second: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct PairInput {
    a: PathBuf,
    b: PathBuf,
    #[command(flatten)]
    lists: ListNames,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Subcommand)]
enum CheckAction {
    /// T(G_S) = T(H_S) for every pair set S.
    Subsets(PairInput),
    /// T(G(P)) = T(H(P)) for every partition P.
    Partitions(PairInput),
    /// The expansion of T(G_S) over partition quotients.
    Expansion {
        g: PathBuf,
        #[arg(long)]
        list: Option<String>,
        /// Pairs over terminal positions, e.g. `1-2,2-3`; empty for none.
        #[arg(long, default_value = "")]
        pairs: String,
    },
    /// Loop counts and terminal-pair multiplicities.
    Necessary(PairInput),
    /// Random attachments glued onto both sides.
    Probe {
        #[command(flatten)]
        input: PairInput,
        #[arg(long, default_value_t = 25)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Subcommand)]
enum CorpusAction {
    List,
    Show { name: String },
    /// Run one entry's assertions, or all of them.
    Run { name: Option<String> },
}

/// Parses `args` (program name first), writes to `out`/`err`, returns the exit code.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    return EXIT_PASS;
                }
                _ => EXIT_USAGE,
            };
            let _ = write!(err, "{e}");
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn load_doc(path: &Path) -> Result<GraphDoc> {
    GraphDoc::parse(&read(path)?).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn load_graph(path: &Path) -> Result<Multigraph> {
    Ok(load_doc(path)?.graph)
}

fn load_terminals(path: &Path, name: Option<&str>) -> Result<TerminalList> {
    let doc = load_doc(path)?;
    let list = match name {
        Some(n) => doc
            .terminal_list(n)
            .ok_or_else(|| usage(format!("{}: no terminal list `{n}`", path.display())))?
            .to_vec(),
        None => doc
            .terminals
            .first()
            .ok_or_else(|| usage(format!("{}: no terminal list", path.display())))?
            .1
            .clone(),
    };
    TerminalList::new(doc.graph, list).map_err(usage)
}

fn ids(text: &str) -> Result<Vec<u32>> {
    text.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| t.trim().parse::<u32>().map_err(|_| usage(format!("`{t}` is not a vertex id"))))
        .collect()
}

fn verdict(pass: bool) -> i32 {
    if pass {
        EXIT_PASS
    } else {
        EXIT_NEGATIVE
    }
}

fn out_line(out: &mut dyn Write, text: impl std::fmt::Display) -> Result<()> {
    writeln!(out, "{text}").map_err(|e| CliError::Io {
        path: "<stdout>".into(),
        message: e.to_string(),
    })
}

fn out_text(out: &mut dyn Write, text: impl std::fmt::Display) -> Result<()> {
    write!(out, "{text}").map_err(|e| CliError::Io {
        path: "<stdout>".into(),
        message: e.to_string(),
    })
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Result<i32> {
    match cmd {
        Command::Compute {
            file,
            engine,
            stats,
            parallel,
            policy,
            no_memo,
        } => {
            let g = load_graph(&file)?;
            match engine {
                Engine::Subset => {
                    out_line(out, tutte_subset_expansion(&g).map_err(usage)?)?;
                }
                Engine::Dc => {
                    let mut cfg = EngineConfig::from_env()
                        .map_err(usage)?
                        .with_policy(policy.parse::<EdgePickPolicy>().map_err(usage)?)
                        .with_parallel_tasks(parallel.max(1));
                    if no_memo {
                        cfg = cfg.without_memo();
                    }
                    let (t, s) = tutte_dc_with_stats(&g, &cfg, &MemoCache::new());
                    out_line(out, t)?;
                    if stats {
                        out_line(out, s)?;
                    }
                }
            }
            Ok(EXIT_PASS)
        }
        Command::Equal { a, b } => {
            let same = t_equivalent(&load_graph(&a)?, &load_graph(&b)?);
            out_line(out, if same { "T-EQUIVALENT" } else { "NOT-T-EQUIVALENT" })?;
            Ok(verdict(same))
        }
        Command::Iso { a, b, max_vertices } => {
            let found = Iso::new(max_vertices)
                .find_isomorphism(&load_graph(&a)?, &load_graph(&b)?)
                .map_err(usage)?;
            match found {
                Some(m) => {
                    out_line(out, m)?;
                    Ok(EXIT_PASS)
                }
                None => {
                    out_line(out, "NOT-ISOMORPHIC")?;
                    Ok(EXIT_NEGATIVE)
                }
            }
        }
        Command::Glue { g, w, lists, out: path } => {
            let gt = load_terminals(&g, lists.list_a.as_deref())?;
            let wt = load_terminals(&w, lists.list_b.as_deref())?;
            let glued = glue(&gt, &wt).map_err(usage)?;
            write_file(&path, &render_graph(&glued.graph))?;
            out_line(out, summary(&glued.graph))?;
            Ok(EXIT_PASS)
        }
        Command::Twist { g, cut, side, out: path } => {
            let graph = load_graph(&g)?;
            let cut = ids(&cut)?;
            let [u1, u2] = cut.as_slice() else {
                return Err(usage("--cut takes exactly two vertex ids"));
            };
            let side: BTreeSet<VertexId> = ids(&side)?.into_iter().map(VertexId).collect();
            let t = whitney_twist(&graph, (VertexId(*u1), VertexId(*u2)), &side).map_err(usage)?;
            write_file(&path, &render_graph(&t))?;
            out_line(out, summary(&t))?;
            Ok(EXIT_PASS)
        }
        Command::RotorFlip {
            r,
            w,
            lists,
            force,
            out: pair,
        } => {
            let rt = load_terminals(&r, lists.list_a.as_deref())?;
            let wt = load_terminals(&w, lists.list_b.as_deref())?;
            let (a, b) = rotor_flip_pair(&rt, &wt, force).map_err(usage)?;
            write_pair(&pair, &a, &b, out)
        }
        Command::W0Flip {
            r,
            w0,
            y,
            rotation,
            step,
            force,
            out: pair,
        } => {
            let rt = load_terminals(&r, None)?;
            let doc = load_doc(&w0)?;
            let list = |n: &str| {
                doc.terminal_list(n)
                    .map(<[VertexId]>::to_vec)
                    .ok_or_else(|| usage(format!("{}: no terminal list `{n}`", w0.display())))
            };
            let spec = W0Spec::new(doc.graph.clone(), list("w")?, list("x")?, rotation, step);
            let yt = load_terminals(&y, None)?;
            let built = w0_flip_pair(&rt, &spec, &yt, force).map_err(usage)?;
            write_pair(&pair, &built.first, &built.second, out)
        }
        Command::Phi { action } => phi(action, out),
        Command::Check { action } => check(action, out),
        Command::Corpus { action } => corpus_cmd(action, out),
    }
}

fn summary(g: &Multigraph) -> String {
    format!("{} vertices, {} edges", g.vertex_count(), g.edge_count())
}

fn write_pair(pair: &PairOut, a: &Multigraph, b: &Multigraph, out: &mut dyn Write) -> Result<i32> {
    write_file(&pair.out_first, &render_graph(a))?;
    write_file(&pair.out_second, &render_graph(b))?;
    out_line(out, format!("first: {}", summary(a)))?;
    out_line(out, format!("second: {}", summary(b)))?;
    out_line(out, format!("T-equivalent: {}", if t_equivalent(a, b) { "yes" } else { "no" }))?;
    Ok(EXIT_PASS)
}

/// A witness plus the file it came from (paths inside resolve against its directory).
struct Loaded {
    witness: PhiWitness,
    file: WitnessFile,
    base: PathBuf,
}

fn resolve(base: &Path, p: &str) -> PathBuf {
    let p = Path::new(p);
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base.join(p)
    }
}

fn load_witness_file(path: &Path) -> Result<Loaded> {
    let file = WitnessFile::parse(&read(path)?).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
    let g = load_graph(&resolve(&base, &file.g_path))?;
    let h = load_graph(&resolve(&base, &file.h_path))?;
    let witness = PhiWitness::new(g, file.e, h, file.f, file.phi.clone(), file.psi.clone()).map_err(usage)?;
    Ok(Loaded { witness, file, base })
}

/// `Ok(None)` when the graphs have no witness at the requested indices.
fn load_seed(seed: &Seed) -> Result<Option<Loaded>> {
    if let Some(path) = &seed.witness {
        return load_witness_file(path).map(Some);
    }
    let (Some(gp), Some(hp)) = (&seed.g, &seed.h) else {
        return Err(usage("give either --witness or the two graph files"));
    };
    let g = load_graph(gp)?;
    let h = load_graph(hp)?;
    let (e, f) = (EdgeId(seed.e), EdgeId(seed.f));
    let Some(witness) = certify_phi_prime_indexed(&g, e, &h, f, seed.phi_index, seed.psi_index).map_err(usage)? else {
        return Ok(None);
    };
    let file = WitnessFile {
        g_path: gp.display().to_string(),
        h_path: hp.display().to_string(),
        e,
        f,
        phi: witness.phi.clone(),
        psi: witness.psi.clone(),
        rotors: Vec::new(),
    };
    Ok(Some(Loaded {
        witness,
        file,
        base: PathBuf::new(),
    }))
}

fn parse_rotor_arg(arg: &str) -> Result<RotorRecord> {
    let parts: Vec<&str> = arg.split(':').collect();
    let [cycle, path, orbit] = parts.as_slice() else {
        return Err(usage(format!("--rotor `{arg}`: expected <cycle>:<file>:<orbit>")));
    };
    Ok(RotorRecord {
        cycle: ids(cycle)?.into_iter().map(|i| i as usize).collect(),
        path: path.to_string(),
        orbit: ids(orbit)?.into_iter().map(VertexId).collect(),
    })
}

fn assignments(records: &[RotorRecord], base: &Path) -> Result<Vec<CycleRotorAssignment>> {
    records
        .iter()
        .map(|r| {
            let g = load_graph(&resolve(base, &r.path))?;
            CycleRotorAssignment::new(r.cycle.clone(), g, r.orbit.clone()).map_err(usage)
        })
        .collect()
}

fn not_member(out: &mut dyn Write) -> Result<i32> {
    out_line(out, "NOT-IN-PHI-PRIME")?;
    Ok(EXIT_NEGATIVE)
}

fn phi(action: PhiAction, out: &mut dyn Write) -> Result<i32> {
    match action {
        PhiAction::Certify { seed, witness_out } => {
            let Some(l) = load_seed(&seed)? else {
                return not_member(out);
            };
            let w = &l.witness;
            out_line(out, format!("phi: {}", w.phi))?;
            out_line(out, format!("psi: {}", w.psi))?;
            out_line(out, format!("e ends: ({}, {})", w.s1, w.s2))?;
            out_line(out, format!("f ends: ({}, {})", w.t1, w.t2))?;
            if let Some(p) = witness_out {
                write_file(&p, &l.file.render())?;
            }
            Ok(EXIT_PASS)
        }
        PhiAction::Digraph { seed } => {
            let Some(l) = load_seed(&seed)? else {
                return not_member(out);
            };
            out_text(out, build_psi_digraph(&l.witness))?;
            Ok(EXIT_PASS)
        }
        PhiAction::Cycles { seed } => {
            let Some(l) = load_seed(&seed)? else {
                return not_member(out);
            };
            let d = build_psi_digraph(&l.witness);
            for c in directed_cycles(&d) {
                let v = check_dig1(&l.witness, &c).map_err(usage)?;
                let list = c.iter().map(ToString::to_string).collect::<Vec<_>>().join(",");
                out_line(out, format!("{list} e-ends-on-cycle={} f-ends-on-cycle={}", v.s_on_cycle, v.t_on_cycle))?;
            }
            Ok(EXIT_PASS)
        }
        PhiAction::Generate {
            seed,
            rotors,
            out: pair,
            witness_out,
        } => {
            let Some(mut l) = load_seed(&seed)? else {
                return not_member(out);
            };
            let mut records = l.file.rotors.clone();
            for r in &rotors {
                records.push(parse_rotor_arg(r)?);
            }
            // Command-line rotor paths are relative to the working directory.
            let mut assigned = assignments(&l.file.rotors, &l.base)?;
            assigned.extend(assignments(&records[l.file.rotors.len()..], Path::new(""))?);
            let outcome = attach_rotors(&l.witness, &assigned).map_err(usage)?;
            let member = verify_new_member(&outcome.g_r, &outcome.h_r, l.witness.e, l.witness.f).map_err(usage)?;
            write_file(&pair.out_first, &render_graph(&outcome.g_r))?;
            write_file(&pair.out_second, &render_graph(&outcome.h_r))?;
            if let Some(p) = witness_out {
                l.file.rotors = records;
                write_file(&p, &l.file.render())?;
            }
            out_line(out, &member)?;
            Ok(verdict(member.in_phi_prime() && member.t_equivalent))
        }
        PhiAction::Verify {
            witness,
            out_first,
            out_second,
        } => {
            let l = load_witness_file(&witness)?;
            let assigned = assignments(&l.file.rotors, &l.base)?;
            let outcome = attach_rotors(&l.witness, &assigned).map_err(usage)?;
            let member = verify_new_member(&outcome.g_r, &outcome.h_r, l.witness.e, l.witness.f).map_err(usage)?;
            if let (Some(a), Some(b)) = (out_first, out_second) {
                write_file(&a, &render_graph(&outcome.g_r))?;
                write_file(&b, &render_graph(&outcome.h_r))?;
            }
            out_line(out, format!("first: {}", summary(&outcome.g_r)))?;
            out_line(out, format!("second: {}", summary(&outcome.h_r)))?;
            out_line(out, &member)?;
            Ok(verdict(member.in_phi_prime() && member.t_equivalent))
        }
    }
}

fn pair_input(p: &PairInput) -> Result<(TerminalList, TerminalList)> {
    Ok((
        load_terminals(&p.a, p.lists.list_a.as_deref())?,
        load_terminals(&p.b, p.lists.list_b.as_deref())?,
    ))
}

fn parse_pairs(k: usize, text: &str) -> Result<PairSet> {
    let pairs = text
        .split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            let (a, b) = t.trim().split_once('-').ok_or_else(|| usage(format!("pair `{t}`: expected i-j")))?;
            let p = |s: &str| s.parse::<usize>().map_err(|_| usage(format!("pair `{t}`: bad index")));
            Ok((p(a)?, p(b)?))
        })
        .collect::<Result<Vec<_>>>()?;
    PairSet::new(k, pairs).map_err(usage)
}

fn check(action: CheckAction, out: &mut dyn Write) -> Result<i32> {
    match action {
        CheckAction::Subsets(p) => {
            let (gt, ht) = pair_input(&p)?;
            let r = check_subset_condition(&gt, &ht).map_err(usage)?;
            out_text(out, if p.json { format!("{}\n", r.to_json()) } else { r.to_string() })?;
            Ok(verdict(r.passed()))
        }
        CheckAction::Partitions(p) => {
            let (gt, ht) = pair_input(&p)?;
            let r = check_partition_condition(&gt, &ht).map_err(usage)?;
            out_text(out, if p.json { format!("{}\n", r.to_json()) } else { r.to_string() })?;
            Ok(verdict(r.passed()))
        }
        CheckAction::Expansion { g, list, pairs } => {
            let gt = load_terminals(&g, list.as_deref())?;
            let s = parse_pairs(gt.k(), &pairs)?;
            match check_expansion_identity(&gt, &s) {
                Ok(v) => {
                    out_text(out, v)?;
                    Ok(EXIT_PASS)
                }
                Err(e @ crate::verify::VerifyError::IdentityViolation { .. }) => {
                    out_line(out, format!("condition: expansion\nverdict: fail\n{e}"))?;
                    Ok(EXIT_NEGATIVE)
                }
                Err(e) => Err(usage(e)),
            }
        }
        CheckAction::Necessary(p) => {
            let (gt, ht) = pair_input(&p)?;
            let v = check_necessary(&gt, &ht).map_err(usage)?;
            if p.json {
                let mut j = serde_json::to_value(&v).expect("verdict serializes");
                j["verdict"] = serde_json::Value::from(if v.passed() { "pass" } else { "fail" });
                out_line(out, serde_json::to_string_pretty(&j).expect("verdict serializes"))?;
            } else {
                out_text(out, &v)?;
            }
            Ok(verdict(v.passed()))
        }
        CheckAction::Probe { input, trials, seed } => {
            let (gt, ht) = pair_input(&input)?;
            let r = random_glue_probe(&gt, &ht, trials, seed).map_err(usage)?;
            out_text(out, if input.json { format!("{}\n", r.to_json()) } else { r.to_string() })?;
            Ok(verdict(r.passed()))
        }
    }
}

fn corpus_cmd(action: CorpusAction, out: &mut dyn Write) -> Result<i32> {
    let find = |name: &str| corpus_entry(name).ok_or_else(|| usage(format!("no corpus entry `{name}`")));
    match action {
        CorpusAction::List => {
            for e in corpus() {
                out_line(out, format!("{}  {}", e.name, e.summary))?;
            }
            Ok(EXIT_PASS)
        }
        CorpusAction::Show { name } => {
            out_text(out, find(&name)?.show())?;
            Ok(EXIT_PASS)
        }
        CorpusAction::Run { name } => {
            let entries = match name {
                Some(n) => vec![find(&n)?],
                None => corpus(),
            };
            let mut all = true;
            for e in entries {
                let r = e.run();
                all &= r.passed();
                out_text(out, r)?;
            }
            Ok(verdict(all))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("tutte-forge").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn usage_errors_exit_two() {
        let (code, _, err) = run_args(&["compute"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(!err.is_empty());
        let (code, _, _) = run_args(&["frobnicate"]);
        assert_eq!(code, EXIT_USAGE);
        let (code, _, err) = run_args(&["compute", "/nonexistent/graph.g"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("/nonexistent/graph.g"));
    }

    #[test]
    fn help_exits_zero() {
        let (code, out, _) = run_args(&["--help"]);
        assert_eq!(code, EXIT_PASS);
        assert!(out.contains("compute"));
    }

    #[test]
    fn corpus_commands() {
        let (code, out, _) = run_args(&["corpus", "list"]);
        assert_eq!(code, EXIT_PASS);
        assert_eq!(out.lines().count(), 8);
        let (code, out, _) = run_args(&["corpus", "run", "gray-pair"]);
        assert_eq!(code, EXIT_PASS, "{out}");
        assert!(out.contains("✓ triangle-distinguisher"));
        let (code, _, _) = run_args(&["corpus", "show", "nope"]);
        assert_eq!(code, EXIT_USAGE);
    }

    #[test]
    fn rotor_args_parse() {
        let r = parse_rotor_arg("1,4,2:k3.g:1,2,3").unwrap();
        assert_eq!(r.cycle, vec![1, 4, 2]);
        assert_eq!(r.path, "k3.g");
        assert!(parse_rotor_arg("1,4,2:k3.g").is_err());
        assert_eq!(parse_pairs(3, "1-2, 2-3").unwrap().len(), 2);
        assert!(parse_pairs(2, "1-3").is_err());
    }
}
