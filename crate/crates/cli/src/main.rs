//! `subproj`: JSON report on stdout, one-line summary on stderr.
//! Exit 0 when every check passes, 1 on a negative verdict or any
//! non-passing report, 2 on usage or validation errors.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use subproj_core::corpus::{algebra_by_id, corpus_workspace, socle_workspace};
use subproj_core::gen::{gen_random_complex, gen_random_exact_complex, gen_random_module, random_free_complex, rng_from_seed};
use subproj_core::io::{
    chain_map_value, homotopy_value, module_map_value, module_value, to_canonical_string, Workspace,
};
use subproj_core::subproj::{is_subprojective_complex, ComplexFactorization};
use subproj_core::{
    is_subprojective, null_homotopic, run_verification, Budget, ChainMap, Error, ModuleMap, Status,
    THEOREM_IDS,
};

/// Seed override; takes precedence over `--seed`.
const SEED_ENV: &str = "SUBPROJ_SEED";

#[derive(Parser)]
#[command(name = "subproj", version, about = "Subprojectivity of modules and chain complexes over F_p-algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Load a workspace and check every object.
    Validate { file: PathBuf },
    /// Homology dimensions of a complex in every degree of its window.
    Homology { file: PathBuf, complex: String },
    /// Decide whether a chain map is null-homotopic.
    Homotopy { file: PathBuf, map: String },
    /// Decide whether N lies in the subprojectivity domain of M.
    Subproj {
        file: PathBuf,
        m: String,
        n: String,
        /// Treat the ids as modules.
        #[arg(long, conflicts_with = "complex")]
        module: bool,
        /// Treat the ids as complexes.
        #[arg(long)]
        complex: bool,
    },
    /// Run a seeded verifier.
    Verify {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(THEOREM_IDS))]
        theorem: String,
        #[arg(long, default_value = "f2x2")]
        algebra: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// `cases=N,dim=D,window=W`
        #[arg(long, default_value_t = Budget::default())]
        budget: Budget,
    },
    /// Generate a random object into a fresh workspace under the id `gen`.
    Gen {
        kind: GenKind,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "f2x2")]
        algebra: String,
        #[arg(long, default_value_t = 3)]
        dim: usize,
        #[arg(long, default_value_t = 3)]
        window: usize,
    },
    /// Write the bundled corpus files.
    Corpus {
        #[arg(long, default_value = "corpus")]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    Module,
    Complex,
    ExactComplex,
    FreeComplex,
}

/// Output plus whether every check passed.
struct Outcome {
    value: Value,
    summary: String,
    ok: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(o) => {
            print!("{}", to_canonical_string(&o.value));
            eprintln!("{}", o.summary);
            ExitCode::from(if o.ok { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn seed_with_env(seed: u64) -> Result<u64, Error> {
    match std::env::var(SEED_ENV) {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| Error::InvalidInput(format!("{SEED_ENV}=`{s}` is not a nonnegative integer"))),
        Err(_) => Ok(seed),
    }
}

fn run(cmd: Command) -> Result<Outcome, Error> {
    match cmd {
        Command::Validate { file } => {
            let w = Workspace::load(&file)?;
            let f = w.file();
            Ok(Outcome {
                value: json!({
                    "valid": true,
                    "algebras": f.algebras.len(),
                    "modules": f.modules.len(),
                    "maps": f.maps.len(),
                    "complexes": f.complexes.len(),
                    "chain_maps": f.chain_maps.len(),
                }),
                summary: format!("{}: valid", file.display()),
                ok: true,
            })
        }
        Command::Homology { file, complex } => {
            let w = Workspace::load(&file)?;
            let x = w.complex(&complex)?;
            let alg = w.complex_algebra_id(&complex)?;
            let degrees: Vec<Value> = x
                .degrees()
                .map(|n| json!({ "degree": n, "dim": x.homology_dim(n), "module": module_value(&x.homology(n), alg) }))
                .collect();
            let exact = x.is_exact();
            Ok(Outcome {
                value: json!({ "complex": complex, "exact": exact, "homology": degrees }),
                summary: format!("{complex}: {}", if exact { "exact" } else { "not exact" }),
                ok: true,
            })
        }
        Command::Homotopy { file, map } => {
            let w = Workspace::load(&file)?;
            let f = w.chain_map(&map)?;
            let s = null_homotopic(f);
            let found = s.is_some();
            Ok(Outcome {
                value: json!({
                    "map": map,
                    "null_homotopic": found,
                    "homotopy": s.as_ref().map(homotopy_value),
                }),
                summary: format!("{map}: {}", if found { "null-homotopic" } else { "not null-homotopic" }),
                ok: found,
            })
        }
        Command::Subproj { file, m, n, module, complex } => {
            let w = Workspace::load(&file)?;
            let as_module = if module || complex {
                module
            } else {
                w.module(&m).is_ok() && w.module(&n).is_ok()
            };
            if as_module {
                subproj_modules(&w, &m, &n)
            } else {
                subproj_complexes(&w, &m, &n)
            }
        }
        Command::Verify { theorem, algebra, seed, budget } => {
            let seed = seed_with_env(seed)?;
            let r = run_verification(&theorem, &algebra, seed, budget)?;
            Ok(Outcome {
                value: r.to_value(),
                summary: r.summary(),
                ok: r.status == Status::Pass,
            })
        }
        Command::Gen { kind, seed, algebra, dim, window } => {
            let seed = seed_with_env(seed)?;
            let alg = algebra_by_id(&algebra)?;
            let mut w = Workspace::new(seed);
            w.insert_algebra(&algebra, &alg);
            match kind {
                GenKind::Module => w.insert_module("gen", &gen_random_module(&alg, dim, seed)?)?,
                GenKind::Complex => w.insert_complex("gen", &gen_random_complex(&alg, window, dim, seed)?)?,
                GenKind::ExactComplex => w.insert_complex("gen", &gen_random_exact_complex(&alg, window, dim, seed)?)?,
                GenKind::FreeComplex => {
                    let rank = (dim / alg.dim()).max(1);
                    w.insert_complex("gen", &random_free_complex(&alg, 0, window, rank, &mut rng_from_seed(seed)))?
                }
            }
            let value: Value = serde_json::from_str(&w.to_json_string())?;
            Ok(Outcome {
                value,
                summary: format!("generated over {algebra} with seed {seed}"),
                ok: true,
            })
        }
        Command::Corpus { out } => {
            std::fs::create_dir_all(&out)?;
            let files = [("corpus.json", corpus_workspace()), ("exm_inv_main1.json", socle_workspace())];
            let mut written = Vec::new();
            for (name, w) in files {
                let path = out.join(name);
                w.save(&path)?;
                written.push(path.display().to_string());
            }
            Ok(Outcome {
                value: json!({ "written": written }),
                summary: format!("wrote {} files to {}", written.len(), out.display()),
                ok: true,
            })
        }
    }
}

/// Ids of workspace maps equal to `f`, so witnesses can be named.
fn matching_map_ids(w: &Workspace, f: &ModuleMap) -> Vec<String> {
    w.map_ids()
        .filter(|id| {
            w.map(id)
                .is_ok_and(|g| g.src() == f.src() && g.dst() == f.dst() && g.matrix() == f.matrix())
        })
        .cloned()
        .collect()
}

fn matching_chain_map_ids(w: &Workspace, f: &ChainMap) -> Vec<String> {
    w.chain_map_ids()
        .filter(|id| w.chain_map(id).is_ok_and(|g| g == f))
        .cloned()
        .collect()
}

fn subproj_modules(w: &Workspace, m: &str, n: &str) -> Result<Outcome, Error> {
    let (mm, nm) = (w.module(m)?, w.module(n)?);
    let alg = w.module_algebra_id(m)?;
    if w.module_algebra_id(n)? != alg {
        return Err(Error::AlgebraMismatch);
    }
    let v = is_subprojective(mm, nm)?;
    let holds = v.holds();
    let mut value = json!({ "kind": "module", "m": m, "n": n, "subprojective": holds });
    if let Some(facts) = v.positive() {
        value["factorizations"] = facts
            .iter()
            .map(|f| {
                json!({
                    "projective": module_value(&f.projective, alg),
                    "beta": module_map_value(&f.beta, alg),
                    "alpha": module_map_value(&f.alpha, alg),
                })
            })
            .collect();
    }
    if let Some(wt) = v.negative() {
        value["witness"] = json!({
            "map": module_map_value(&wt.map, alg),
            "ranks": serde_json::to_value(wt.ranks)?,
            "matches": matching_map_ids(w, &wt.map),
        });
    }
    Ok(Outcome {
        value,
        summary: format!("{n} {} the subprojectivity domain of {m}", if holds { "is in" } else { "is not in" }),
        ok: holds,
    })
}

fn factorization_value(c: &ComplexFactorization, alg: &str) -> Value {
    json!({
        "projective": subproj_core::io::complex_value(&c.projective, alg),
        "beta": chain_map_value(&c.beta, alg),
        "alpha": chain_map_value(&c.alpha, alg),
        "homotopy": homotopy_value(&c.homotopy),
    })
}

fn subproj_complexes(w: &Workspace, m: &str, n: &str) -> Result<Outcome, Error> {
    let (mx, nx) = (w.complex(m)?, w.complex(n)?);
    let alg = w.complex_algebra_id(m)?;
    if w.complex_algebra_id(n)? != alg {
        return Err(Error::AlgebraMismatch);
    }
    let v = is_subprojective_complex(mx, nx)?;
    let holds = v.holds();
    let mut value = json!({ "kind": "complex", "m": m, "n": n, "subprojective": holds });
    if let Some(facts) = v.positive() {
        value["factorizations"] = facts.iter().map(|c| factorization_value(c, alg)).collect();
    }
    if let Some(wt) = v.negative() {
        value["witness"] = json!({
            "map": chain_map_value(&wt.map, alg),
            "ranks": serde_json::to_value(wt.ranks)?,
            "matches": matching_chain_map_ids(w, &wt.map),
        });
    }
    Ok(Outcome {
        value,
        summary: format!("{n} {} the subprojectivity domain of {m}", if holds { "is in" } else { "is not in" }),
        ok: holds,
    })
}
