use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use largeness::certificate::{verify_certificate, LargenessCertificate};
use largeness::coset::{low_index_subgroups, LowIndexOptions};
use largeness::corpus::{self, batch_run, betti_prefilter_mode, BatchMode, PrefilterAnswer};
use largeness::driver::{height1_mode, prove_large, LargenessReport, ProveOptions};
use largeness::laurent::ChiVector;
use largeness::lattice::abelian_invariants;
use largeness::rewrite::{subgroup_abelian_invariants, SimplifyBudget};
use largeness::vanish::{reduced_minors, vanish_test, verify_chi, AlexanderMatrix, Outcome, VanishBudget, Vanishing};
use largeness::GroupPresentation;

/// Searches for largeness certificates of finitely presented groups.
#[derive(Parser)]
#[command(name = "largeness", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Test subgroups up to an index for a vanishing Alexander polynomial.
    ProveLarge {
        file: String,
        #[arg(long, default_value_t = 6)]
        max_index: usize,
        /// Run the cyclic-cover rank pre-filter for every subgroup with first Betti number at least 2.
        #[arg(long)]
        prefilter: bool,
        /// Wall-clock budget in seconds.
        #[arg(long)]
        time_budget: Option<f64>,
        #[arg(long)]
        cert_out: Option<PathBuf>,
        #[arg(long)]
        report_out: Option<PathBuf>,
        /// Also search normal subgroups with index in LO..HI inside each class.
        #[arg(long)]
        normal_index: Option<String>,
    },
    /// Height-one criterion: a subgroup whose abelianisation needs three generators.
    Height1 {
        file: String,
        #[arg(long, default_value_t = 6)]
        max_index: usize,
        #[arg(long)]
        cert_out: Option<PathBuf>,
    },
    /// Alexander polynomial data for the whole group.
    Alexander {
        file: String,
        /// Homomorphism as coordinates on the free part of the abelianisation, e.g. `1,0`.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        chi: Option<Vec<i64>>,
        /// Report whether every minor vanishes modulo this (0 or a prime).
        #[arg(long = "mod")]
        modulus: Option<u64>,
    },
    /// List subgroup conjugacy classes.
    Subgroups {
        file: String,
        /// Index range `A..B` (inclusive) or a single index.
        #[arg(long)]
        index: String,
        #[arg(long)]
        abelian: bool,
        #[arg(long)]
        normal_only: bool,
    },
    /// Does some subgroup of small index surject onto Z?
    BettiPrefilter {
        file: String,
        #[arg(long, default_value_t = 5)]
        max_index: usize,
    },
    /// Replay a certificate (text or JSON).
    Verify { cert: PathBuf },
    /// Run one mode over every presentation file in a directory.
    Batch {
        dir: PathBuf,
        #[arg(long, default_value = "prove-large")]
        mode: String,
        #[arg(long, default_value_t = 6)]
        max_index: usize,
        #[arg(long)]
        time_budget: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the bundled presentations into a directory, one file per entry.
    ExportCorpus { dir: PathBuf },
}

/// Reads a presentation file, or a bundled entry given as `corpus:ID`.
fn load(file: &str) -> Result<GroupPresentation> {
    if let Some(id) = file.strip_prefix("corpus:") {
        return corpus::find(id).map(|e| e.presentation()).with_context(|| format!("no corpus entry `{id}`"));
    }
    let text = fs::read_to_string(file).with_context(|| format!("reading {file}"))?;
    Ok(GroupPresentation::parse(&text).with_context(|| format!("parsing {file}"))?)
}

fn parse_range(s: &str) -> Result<(usize, usize)> {
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (a.trim().parse()?, b.trim().trim_start_matches('=').parse()?),
        None => {
            let v = s.trim().parse()?;
            (v, v)
        }
    };
    if a == 0 || a > b {
        bail!("bad index range `{s}`");
    }
    Ok((a, b))
}

fn write_pair(path: &Path, text: &str, json: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
    let mut j = path.as_os_str().to_owned();
    j.push(".json");
    fs::write(&j, json).with_context(|| format!("writing {}", PathBuf::from(&j).display()))?;
    Ok(())
}

fn finish_report(r: &LargenessReport, cert_out: Option<&Path>, report_out: Option<&Path>) -> Result<ExitCode> {
    print!("{}", r.to_text());
    if let Some(p) = report_out {
        write_pair(p, &r.to_text(), &r.to_json())?;
    }
    if let (Some(p), Some(c)) = (cert_out, &r.certificate) {
        write_pair(p, &c.to_text(), &c.to_json())?;
    }
    Ok(if r.is_certified() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn budget(secs: Option<f64>) -> Result<Option<Duration>> {
    match secs {
        Some(s) if !(s > 0.0 && s.is_finite()) => bail!("time budget must be positive"),
        Some(s) => Ok(Some(Duration::from_secs_f64(s))),
        None => Ok(None),
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::ProveLarge { file, max_index, prefilter, time_budget, cert_out, report_out, normal_index } => {
            let g = load(&file)?;
            let mut opts = ProveOptions::new(max_index);
            if prefilter {
                opts.prefilter = Some(true);
            }
            opts.time_budget = budget(time_budget)?;
            opts.normal_range = normal_index.as_deref().map(parse_range).transpose()?;
            let r = prove_large(&g, &opts)?;
            finish_report(&r, cert_out.as_deref(), report_out.as_deref())
        }
        Command::Height1 { file, max_index, cert_out } => {
            let g = load(&file)?;
            let r = height1_mode(&g, max_index, SimplifyBudget::default())?;
            finish_report(&r, cert_out.as_deref(), None)
        }
        Command::Alexander { file, chi, modulus } => {
            let g = load(&file)?;
            let inv = abelian_invariants(&g);
            println!("abelianisation {} {}", inv.aq_list(), inv);
            let m = AlexanderMatrix::new(&g)?;
            for (j, a) in m.alpha.iter().enumerate() {
                println!("generator {} maps to {:?}", g.names()[j], a);
            }
            let vanishing = match chi {
                Some(c) => {
                    let chi = ChiVector::new(c)?;
                    for (spec, p) in reduced_minors(&m, &chi)? {
                        println!("minor rows {:?} column {}: {}", spec.rows, spec.deleted_column, p.to_string_with("t"));
                    }
                    let v = verify_chi(&m, &chi)?;
                    println!("chi {chi} vanishes modulo {}", describe(&v));
                    Some(v)
                }
                None => {
                    let r = vanish_test(&m, &VanishBudget::default());
                    for n in &r.notes {
                        println!("note {n}");
                    }
                    match r.outcome {
                        Outcome::Found { chi, moduli, .. } => {
                            println!("found chi {chi} modulo {}", describe(&moduli));
                            Some(moduli)
                        }
                        Outcome::NotFound => {
                            println!("not found");
                            None
                        }
                        Outcome::Inconclusive(why) => {
                            println!("inconclusive: {why}");
                            None
                        }
                    }
                }
            };
            let ok = match (modulus, &vanishing) {
                (Some(p), Some(v)) => v.contains(p),
                (Some(_), None) => false,
                (None, Some(v)) => !v.is_empty(),
                (None, None) => false,
            };
            Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Subgroups { file, index, abelian, normal_only } => {
            let g = load(&file)?;
            let (lo, hi) = parse_range(&index)?;
            let out = low_index_subgroups(&g, &LowIndexOptions::new(lo, hi).normal_only(normal_only))?;
            let mut number = 0;
            let mut last = 0;
            for r in &out.records {
                if r.index() != last {
                    last = r.index();
                    number = 0;
                }
                number += 1;
                let mut line = format!("index {} number {} normal {} conjugates {}", r.index(), number, r.is_normal(), r.table.conjugacy_class_size());
                if abelian {
                    line.push_str(&format!(" abelianisation {}", subgroup_abelian_invariants(&g, &r.table).aq_list()));
                }
                println!("{line}");
            }
            println!("total {} complete {}", out.records.len(), out.complete);
            Ok(ExitCode::SUCCESS)
        }
        Command::BettiPrefilter { file, max_index } => {
            let g = load(&file)?;
            Ok(match betti_prefilter_mode(&g, max_index, None)? {
                PrefilterAnswer::Yes { index } => {
                    println!("yes index {index}");
                    ExitCode::SUCCESS
                }
                PrefilterAnswer::No => {
                    println!("no");
                    ExitCode::from(1)
                }
                PrefilterAnswer::Inconclusive { reason } => {
                    println!("inconclusive {reason}");
                    ExitCode::from(1)
                }
            })
        }
        Command::Verify { cert } => {
            let text = fs::read_to_string(&cert).with_context(|| format!("reading {}", cert.display()))?;
            let c = if text.trim_start().starts_with('{') {
                LargenessCertificate::from_json(&text)?
            } else {
                LargenessCertificate::parse_text(&text)?
            };
            let r = verify_certificate(&c.group, &c);
            if r.ok {
                println!("verified index {} chain {:?}", c.total_index(), c.chain_indices());
                Ok(ExitCode::SUCCESS)
            } else {
                for f in &r.failures {
                    println!("failure {f}");
                }
                println!("not verified");
                Ok(ExitCode::from(1))
            }
        }
        Command::Batch { dir, mode, max_index, time_budget, out } => {
            let mode: BatchMode = mode.parse()?;
            let mut paths: Vec<PathBuf> = fs::read_dir(&dir)
                .with_context(|| format!("reading {}", dir.display()))?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.is_file() && p.extension().is_none_or(|x| x != "json"))
                .collect();
            paths.sort();
            let inputs: Vec<(String, String)> = paths
                .iter()
                .map(|p| {
                    let name = p.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
                    (name, fs::read_to_string(p).unwrap_or_default())
                })
                .collect();
            let r = batch_run(&inputs, mode, max_index, budget(time_budget)?);
            print!("{}", r.to_text());
            if let Some(p) = out {
                write_pair(&p, &r.to_text(), &r.to_json())?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::ExportCorpus { dir } => {
            fs::create_dir_all(&dir)?;
            for e in corpus::all() {
                let name = e.id.replace('#', "_");
                let text = format!("# {} expected {:?}\n{}", e.provenance, e.expected, e.presentation());
                fs::write(dir.join(format!("{name}.txt")), text)?;
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn describe(v: &Vanishing) -> String {
    match v {
        Vanishing::Zero => "0 (identically zero)".into(),
        Vanishing::Primes(ps) if ps.is_empty() => "nothing".into(),
        Vanishing::Primes(ps) => ps.iter().map(u64::to_string).collect::<Vec<_>>().join(", "),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
