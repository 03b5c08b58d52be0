use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use shadowlab::chain::{chain_report, sim_classes};
use shadowlab::corpus::{circle_tower, moduli_csv, parse_corpus, tower_modulus_report, CircleMap, Tolerance};
use shadowlab::natsets::{densities, family_membership, Family, FamilyTag, SetOp};
use shadowlab::par::ExecMode;
use shadowlab::proximal::{proximal_report, quotient_system, spr};
use shadowlab::report::{json, kv_markdown, moduli_markdown, suite_markdown, Format};
use shadowlab::shadowing::{
    decide_finite_shadowing, decide_pair_shadowing, fg_shadowing_verify, has_topological_shadowing,
    shadowing_modulus, Caps, Verdict,
};
use shadowlab::suites::{run_suite, SuiteConfig, SuiteId};
use shadowlab::sysfile::{load_system, SystemSpec};
use shadowlab::{FiniteSystem, Relation, Result, ShadowError, UPSet};

/// Exact shadowing checks for finite uniform dynamical systems.
#[derive(Parser)]
#[command(name = "shadowlab", version)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Md, global = true)]
    format: Format,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct SystemArg {
    /// JSON system file.
    system: PathBuf,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse and validate a system file.
    Validate(SystemArg),
    /// Orbits, periodic, minimal and non-wandering points, transitivity.
    Orbits(SystemArg),
    /// Family memberships and densities of a UP set (`tail=..;cycle=..` or
    /// `mod p in {..}`).
    Families {
        set: String,
        /// Combine with a second set first.
        #[arg(long, requires = "op")]
        with: Option<String>,
        /// union | intersection | complement | shift=K
        #[arg(long)]
        op: Option<String>,
    },
    /// Decide whether every D-pseudo orbit is E-traced.
    Shadow {
        #[command(flatten)]
        sys: SystemArg,
        /// Perturbation relation (see RELATIONS in the README).
        #[arg(long, default_value = "W")]
        d: String,
        /// Tolerance relation.
        #[arg(long, default_value = "W")]
        e: String,
        /// Only finite chains.
        #[arg(long)]
        finite: bool,
        /// Ignore --d/--e and decide shadowing for every entourage.
        #[arg(long, conflicts_with = "finite")]
        topological: bool,
    },
    /// Coarsest ladder element at which E-tracing holds.
    Modulus {
        #[command(flatten)]
        sys: SystemArg,
        #[arg(long)]
        e: String,
        /// Comma-separated relations, coarse to fine.
        #[arg(long)]
        ladder: String,
    },
    /// Bounded verification of topological (F,G)-shadowing.
    Fg {
        #[command(flatten)]
        sys: SystemArg,
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
        #[arg(long)]
        tail_max: Option<usize>,
        #[arg(long)]
        period_max: Option<usize>,
    },
    /// Chain recurrent set, ~_D classes and their periods.
    Chain(SystemArg),
    /// Syndetically proximal pairs and agreement sets.
    Spr(SystemArg),
    /// Collapse the minimal set and print the quotient system.
    Quotient(SystemArg),
    /// Run a theorem suite over a corpus.
    Theorems {
        #[arg(long)]
        suite: String,
        /// Corpus spec, e.g. exhaustive-upto:4, random:8:100, circle:identity:12.
        #[arg(long, default_value = "exhaustive-upto:3", conflicts_with = "system")]
        corpus: String,
        /// Run on a single system file instead.
        #[arg(long)]
        system: Option<PathBuf>,
        #[command(flatten)]
        run: RunArgs,
    },
    /// List a corpus, or write it out as system files.
    Corpus {
        spec: String,
        #[arg(long)]
        seed: Option<u64>,
        /// Directory to write `<index>.json` files into.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Shadowing moduli across a circle discretization tower.
    Tower {
        /// identity | doubling | rotation=Q
        #[arg(long, default_value = "identity")]
        map: String,
        #[arg(long, default_value_t = 12)]
        cells: usize,
        #[arg(long, default_value_t = 2)]
        levels: usize,
        #[arg(long, default_value_t = 2)]
        depth: usize,
        /// Comma-separated tolerances: cell distances or `full`.
        #[arg(long, default_value = "1")]
        tolerance: String,
    },
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    sequential: bool,
    /// Include wall-clock time in the report.
    #[arg(long)]
    timing: bool,
    #[arg(long)]
    tail_max: Option<usize>,
    #[arg(long)]
    period_max: Option<usize>,
    #[arg(long, default_value_t = 10_000)]
    family_samples: usize,
}

/// `SHADOWLAB_SEED` wins over the command line.
fn effective_seed(seed: u64) -> Result<u64> {
    match std::env::var("SHADOWLAB_SEED") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| ShadowError::InvalidInput(format!("SHADOWLAB_SEED={v:?} is not a number"))),
        Err(_) => Ok(seed),
    }
}

fn caps_arg(s: &FiniteSystem, tail: Option<usize>, period: Option<usize>) -> Caps {
    let d = Caps::default_for(s.size());
    Caps {
        tail_max: tail.unwrap_or(d.tail_max),
        period_max: period.unwrap_or(d.period_max),
    }
}

/// `W`, `full`, `diag`, `base:I`, `cyclic:K`, `line:K`, or a JSON pair list.
fn parse_relation(s: &FiniteSystem, spec: &str) -> Result<Relation> {
    let n = s.size();
    let num = |v: &str| -> Result<usize> {
        v.parse().map_err(|_| ShadowError::InvalidInput(format!("bad number in relation {spec:?}")))
    };
    let spec = spec.trim();
    if spec.starts_with('[') {
        let pairs: Vec<(usize, usize)> =
            serde_json::from_str(spec).map_err(|e| ShadowError::InvalidInput(format!("relation {spec:?}: {e}")))?;
        return Relation::from_pairs(n, pairs);
    }
    match spec.split_once(':') {
        None => match spec {
            "W" => Ok(s.space().w().clone()),
            "full" => Ok(Relation::full(n)),
            "diag" => Ok(Relation::diagonal(n)),
            _ => Err(ShadowError::InvalidInput(format!("unknown relation {spec:?}"))),
        },
        Some(("base", i)) => s
            .space()
            .base()
            .get(num(i)?)
            .cloned()
            .ok_or_else(|| ShadowError::InvalidInput(format!("no base entourage {i}"))),
        Some(("cyclic", k)) => Ok(Relation::within_cyclic(n, num(k)?)),
        Some(("line", k)) => Ok(Relation::within_line(n, num(k)?)),
        _ => Err(ShadowError::InvalidInput(format!("unknown relation {spec:?}"))),
    }
}

/// Output plus whether the command found a counterexample.
struct Emit {
    text: String,
    failed: bool,
}

fn emit<T: Serialize>(format: Format, value: &T, md: impl FnOnce() -> String, failed: bool) -> Emit {
    let text = match format {
        Format::Json | Format::Csv => json(value),
        Format::Md => md(),
    };
    Emit { text, failed }
}

fn verdict_md(title: &str, v: &Verdict) -> String {
    let mut rows = vec![("status".to_string(), format!("{:?}", v.status))];
    if let Some(c) = &v.caps {
        rows.push(("caps".into(), format!("tail <= {}, period <= {}", c.tail_max, c.period_max)));
    }
    if let Some(cx) = &v.counterexample {
        rows.push(("counterexample".into(), serde_json::to_string(cx).expect("serializable")));
    }
    for n in &v.notes {
        rows.push(("note".into(), n.clone()));
    }
    kv_markdown(title, &rows)
}

fn run(cli: Cli) -> Result<Emit> {
    let format = cli.format;
    match cli.cmd {
        Cmd::Validate(a) => {
            let s = load_system(&a.system)?;
            let mut rows = vec![
                ("points".to_string(), s.size().to_string()),
                ("cells".into(), format!("{:?}", s.space().open_cells())),
                ("base size".into(), s.space().base().len().to_string()),
                ("hausdorff".into(), s.space().is_hausdorff().to_string()),
            ];
            for w in s.warnings() {
                rows.push(("warning".into(), w.clone()));
            }
            let spec = SystemSpec::from_system(&s);
            Ok(emit(format, &spec, || kv_markdown("valid system", &rows), false))
        }
        Cmd::Orbits(a) => {
            let s = load_system(&a.system)?;
            #[derive(Serialize)]
            struct Orbits {
                orbits: Vec<shadowlab::EPSeq>,
                periodic: Vec<usize>,
                cycle_lengths: Vec<usize>,
                minimal: Vec<usize>,
                nonwandering: Vec<usize>,
                transitivity: shadowlab::dynsys::TransitivityReport,
            }
            let o = Orbits {
                orbits: (0..s.size()).map(|x| s.orbit(x)).collect(),
                periodic: s.periodic_points().to_vec(),
                cycle_lengths: s.cycle_lengths(),
                minimal: s.minimal_points().to_vec(),
                nonwandering: s.nonwandering_points().to_vec(),
                transitivity: s.classify_transitivity(None),
            };
            let md = || {
                let mut rows: Vec<(String, String)> = o
                    .orbits
                    .iter()
                    .enumerate()
                    .map(|(x, l)| (format!("orbit of {}", s.label(x)), format!("{:?} then {:?} repeating", l.tail(), l.cycle())))
                    .collect();
                rows.push(("periodic".into(), format!("{:?}", o.periodic)));
                rows.push(("minimal".into(), format!("{:?}", o.minimal)));
                rows.push(("non-wandering".into(), format!("{:?}", o.nonwandering)));
                rows.push(("transitivity".into(), serde_json::to_string(&o.transitivity).expect("serializable")));
                kv_markdown("orbits", &rows)
            };
            Ok(emit(format, &o, md, false))
        }
        Cmd::Families { set, with, op } => {
            let mut a: UPSet = set.parse()?;
            if let Some(op) = op {
                let b: UPSet = match with {
                    Some(w) => w.parse()?,
                    None => UPSet::empty(),
                };
                let op = match op.as_str() {
                    "union" => SetOp::Union,
                    "intersection" => SetOp::Intersection,
                    "complement" => SetOp::Complement,
                    o => match o.strip_prefix("shift=") {
                        Some(k) => SetOp::Shift(k.parse().map_err(|_| ShadowError::InvalidInput(format!("bad shift {k:?}")))?),
                        None => return Err(ShadowError::InvalidInput(format!("unknown operation {o:?}"))),
                    },
                };
                a = a.apply(&b, op);
            }
            let mut rows = vec![("set".to_string(), a.to_string())];
            let (lo, hi) = densities(&a);
            rows.push(("densities".into(), format!("lower {lo}, upper {hi}")));
            for f in Family::ALL {
                rows.push((f.to_string(), family_membership(&a, f.into())?.to_string()));
                let dual = family_membership(&a, FamilyTag::dual_of(f)).map_or_else(|e| e.to_string(), |b| b.to_string());
                rows.push((format!("{f}*"), dual));
            }
            let map: std::collections::BTreeMap<String, String> = rows.iter().cloned().collect();
            Ok(emit(format, &map, || kv_markdown("families", &rows), false))
        }
        Cmd::Shadow { sys, d, e, finite, topological } => {
            let s = load_system(&sys.system)?;
            let (d, e) = (parse_relation(&s, &d)?, parse_relation(&s, &e)?);
            let v = if topological {
                has_topological_shadowing(&s)
            } else if finite {
                decide_finite_shadowing(&s, &d, &e)?
            } else {
                decide_pair_shadowing(&s, &d, &e)?
            };
            let failed = v.is_fail();
            Ok(emit(format, &v, || verdict_md("pair shadowing", &v), failed))
        }
        Cmd::Modulus { sys, e, ladder } => {
            let s = load_system(&sys.system)?;
            let e = parse_relation(&s, &e)?;
            let names: Vec<&str> = ladder.split(',').collect();
            let ladder = names.iter().map(|r| parse_relation(&s, r)).collect::<Result<Vec<_>>>()?;
            let m = shadowing_modulus(&s, &e, &ladder)?;
            let rows = vec![
                ("modulus".to_string(), m.coarsest.map_or("none".to_string(), |i| names[i].to_string())),
                ("profile".into(), format!("{:?}", m.profile)),
            ];
            Ok(emit(format, &m, || kv_markdown("shadowing modulus", &rows), false))
        }
        Cmd::Fg { sys, f, g, tail_max, period_max } => {
            let s = load_system(&sys.system)?;
            let caps = caps_arg(&s, tail_max, period_max);
            let v = fg_shadowing_verify(&s, f.parse()?, g.parse()?, caps)?;
            let failed = v.is_fail();
            Ok(emit(format, &v, || verdict_md("(F,G)-shadowing", &v), failed))
        }
        Cmd::Chain(a) => {
            let s = load_system(&a.system)?;
            #[derive(Serialize)]
            struct Chain {
                report: shadowlab::chain::ChainReport,
                per_entourage: Vec<shadowlab::chain::SimClasses>,
            }
            let c = Chain {
                report: chain_report(&s),
                per_entourage: s.space().base().iter().map(|d| sim_classes(&s, d)).collect::<Result<_>>()?,
            };
            let failed = c.per_entourage.iter().any(|x| !x.is_consistent());
            let md = || {
                let mut rows = vec![
                    ("CR(f)".to_string(), format!("{:?}", c.report.chain_recurrent)),
                    ("chain transitive".into(), c.report.chain_transitive.to_string()),
                    ("chain mixing".into(), c.report.chain_mixing.to_string()),
                ];
                for (i, sc) in c.per_entourage.iter().enumerate() {
                    rows.push((format!("~ classes, entourage {i}"), format!("{:?} periods {:?}", sc.classes, sc.periods)));
                    if !sc.is_consistent() {
                        rows.push((format!("inconsistent, entourage {i}"), format!("one-way {:?}, not clopen {:?}", sc.asymmetric, sc.not_clopen)));
                    }
                }
                kv_markdown("chain structure", &rows)
            };
            Ok(emit(format, &c, md, failed))
        }
        Cmd::Spr(a) => {
            let s = load_system(&a.system)?;
            let reports: Vec<_> = (0..s.size())
                .flat_map(|x| (0..s.size()).map(move |y| (x, y)))
                .map(|(x, y)| proximal_report(&s, x, y))
                .collect();
            let r = spr(&s);
            let md = || {
                let mut rows = vec![("SPR".to_string(), format!("{:?}", r.pairs()))];
                for p in &reports {
                    let sets: Vec<String> = p.agreement.iter().map(|a| a.to_string()).collect();
                    rows.push((format!("({}, {})", p.pair.0, p.pair.1), sets.join(" / ")));
                }
                kv_markdown("syndetically proximal pairs", &rows)
            };
            Ok(emit(format, &reports, md, false))
        }
        Cmd::Quotient(a) => {
            let s = load_system(&a.system)?;
            let q = quotient_system(&s)?;
            #[derive(Serialize)]
            struct Out {
                pi: Vec<usize>,
                p: usize,
                system: SystemSpec,
            }
            let out = Out {
                pi: q.pi.clone(),
                p: q.p,
                system: SystemSpec::from_system(&q.system),
            };
            let rows = vec![
                ("pi".to_string(), format!("{:?}", q.pi)),
                ("collapsed point".into(), q.p.to_string()),
                ("g".into(), format!("{:?}", q.system.map())),
                ("cells".into(), format!("{:?}", q.system.space().open_cells())),
            ];
            Ok(emit(format, &out, || kv_markdown("quotient by the minimal set", &rows), false))
        }
        Cmd::Theorems { suite, corpus, system, run: r } => {
            let id: SuiteId = suite.parse()?;
            let seed = effective_seed(r.seed)?;
            let items = match system {
                Some(p) => vec![shadowlab::corpus::CorpusItem {
                    name: p.display().to_string(),
                    system: load_system(&p)?,
                }],
                None if id.is_standalone() => Vec::new(),
                None => parse_corpus(&corpus, seed)?,
            };
            let config = SuiteConfig {
                seed,
                mode: if r.sequential { ExecMode::Sequential } else { ExecMode::Parallel },
                tail_max: r.tail_max,
                period_max: r.period_max,
                family_samples: r.family_samples,
                timing: r.timing,
            };
            let report = run_suite(id, &items, &config)?;
            let failed = !report.passed();
            Ok(emit(format, &report, || suite_markdown(&report), failed))
        }
        Cmd::Corpus { spec, seed, out } => {
            let seed = effective_seed(seed.unwrap_or(1))?;
            let items = parse_corpus(&spec, seed)?;
            if let Some(dir) = &out {
                std::fs::create_dir_all(dir).map_err(|e| ShadowError::InvalidInput(format!("{}: {e}", dir.display())))?;
                for (i, it) in items.iter().enumerate() {
                    let path = dir.join(format!("{i:05}.json"));
                    std::fs::write(&path, SystemSpec::from_system(&it.system).to_json())
                        .map_err(|e| ShadowError::InvalidInput(format!("{}: {e}", path.display())))?;
                }
            }
            let names: Vec<String> = items.iter().map(|i| i.name.clone()).collect();
            let md = || format!("{} systems\n\n{}\n", names.len(), names.iter().map(|n| format!("- {n}")).collect::<Vec<_>>().join("\n"));
            Ok(emit(format, &names, md, false))
        }
        Cmd::Tower { map, cells, levels, depth, tolerance } => {
            let tower = circle_tower(CircleMap::parse(&map)?, cells, levels, depth)?;
            let tolerances = tolerance.split(',').map(Tolerance::parse).collect::<Result<Vec<_>>>()?;
            let rows = tower_modulus_report(&tower, &tolerances)?;
            let text = match format {
                Format::Csv => moduli_csv(&rows)?,
                Format::Json => json(&rows),
                Format::Md => moduli_markdown(&rows),
            };
            Ok(Emit { text, failed: false })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(e) => {
            println!("{}", e.text.trim_end());
            if e.failed {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(err) => {
            eprintln!("error: {err}");
            match err {
                ShadowError::InternalInvariant(_) => ExitCode::from(1),
                _ => ExitCode::from(2),
            }
        }
    }
}
