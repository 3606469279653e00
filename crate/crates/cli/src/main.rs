use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use whitkit::exact_linear::{parse_scalar, Scalar};
use whitkit::homology_ext::{
    ce_ext1_borel, ext_quiver_assemble, ext_solvable2d_nonzero, ext_solvable2d_zero, kunneth_ext, quiver_relation_check, vk_module,
    ExtTable,
};
use whitkit::lie_presentations::{catalog, jacobi_check, parse_presentation, CatalogParams, CATALOG_NAMES};
use whitkit::output::{quasi_word, verdict_word, Node, ToNode};
use whitkit::pbw_engine::{MonomialOrder, Pbw};
use whitkit::structure_analysis::{lower_central_series, quasi_nilpotent_check, sim_relation_check, whittaker_pair_check, DEFAULT_DEPTH};
use whitkit::whittaker_modules::{
    annihilator_spot_check, borel_simple_module, character_validate, completion_whittaker_solve, simplicity_certificate,
    star_duality_check, whittaker_vectors_in_dual, Character, InducedModule, Ladder, Triangular,
};
use whitkit::{Error, LiePresentation, OverflowMode, Result};

const SUBCOMMANDS: &[(&str, &str)] = &[
    ("check-pair", "Whittaker pair verdict for (g, n)"),
    ("lcs", "lower central series of n inside the window"),
    ("pbw-normalize", "PBW normal form of a word expression"),
    ("blocks", "one step of the block relation between two characters"),
    ("whittaker-vectors", "Whittaker vectors of a standard module up to a degree"),
    ("dual-whittaker", "Whittaker functionals on U(n) up to a weight"),
    ("verma-dims", "Verma module dimensions by depth"),
    ("simple-dims", "simple highest weight quotient dimensions by depth"),
    ("star-check", "compare L+(mu) with L-(-mu) depth by depth"),
    ("completion-solve", "Whittaker vectors in a truncated completion"),
    ("simplicity", "simplicity certificate for a standard module"),
    ("ext", "Ext tables for the two-dimensional solvable algebra"),
    ("ce-ext", "Ext^1 between simple modules of a Borel of sl_n"),
    ("kunneth", "Kunneth combination of Ext tables"),
    ("vk", "dimension and endomorphisms of V_k(mu)"),
    ("quiver", "Ext quiver and its relations on a window of characters"),
    ("annihilator-check", "pointwise annihilation evidence on truncations"),
    ("borel-simple", "simple Borel module and its per-root factorization"),
];

#[derive(Debug, Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Format {
    Text,
    Tree,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Overflow {
    Reject,
    Mark,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Family {
    Zero,
    Nonzero,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum LadderArg {
    Verma,
    Simple,
}

#[derive(Parser, Debug)]
#[command(name = "whitkit", version, about = "Exact computations with Lie algebras and Whittaker modules")]
struct Cli {
    /// Catalog name with optional `:`-separated parameters, or a presentation file.
    #[arg(long, global = true)]
    alg: Option<String>,
    /// Degree window `lo:hi`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    window: Option<String>,
    #[arg(long, global = true)]
    depth: Option<u32>,
    /// Subalgebra: a part name or comma-separated tags.
    #[arg(long, global = true)]
    n: Option<String>,
    /// Character values `tag=q,...` (or a plain list where noted).
    #[arg(long, global = true, allow_hyphen_values = true)]
    lambda: Option<String>,
    /// Weight values `tag=q,...`, a plain list, or a single rational.
    #[arg(long, global = true, allow_hyphen_values = true)]
    mu: Option<String>,
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: Format,
    #[arg(long, global = true, value_enum)]
    overflow: Option<Overflow>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List subcommands and catalog algebras.
    Catalog,
    CheckPair,
    Lcs,
    PbwNormalize {
        #[arg(long, allow_hyphen_values = true)]
        expr: String,
    },
    Blocks {
        #[arg(long, allow_hyphen_values = true)]
        lambda2: String,
    },
    WhittakerVectors,
    DualWhittaker,
    VermaDims,
    SimpleDims,
    StarCheck,
    CompletionSolve {
        #[arg(long, value_enum, default_value = "verma")]
        ladder: LadderArg,
    },
    Simplicity {
        #[arg(long)]
        designated: Option<String>,
    },
    Ext {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long, allow_hyphen_values = true)]
        nu: Option<String>,
    },
    CeExt {
        #[arg(long, default_value_t = 2)]
        rank: usize,
        #[arg(long, allow_hyphen_values = true)]
        lambda2: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        mu2: Option<String>,
    },
    Kunneth {
        /// Factor table `i:dim,...`; repeat once per factor.
        #[arg(long, required = true)]
        table: Vec<String>,
        #[arg(long)]
        degree: usize,
    },
    Vk {
        #[arg(long)]
        k: u32,
    },
    Quiver {
        /// Comma-separated characters.
        #[arg(long, allow_hyphen_values = true, default_value = "")]
        vertices: String,
        #[arg(long, default_value_t = 2)]
        k: u32,
    },
    AnnihilatorCheck {
        /// Semicolon-separated word expressions.
        #[arg(long, allow_hyphen_values = true)]
        elements: String,
    },
    BorelSimple {
        #[arg(long, default_value_t = 2)]
        rank: usize,
    },
}

struct Report {
    headline: String,
    body: Node,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_) | Error::Usage(_) => 2,
        Error::Overflow(_) => 3,
        Error::Invariant(_) => 4,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(r) => {
            let text = match cli.format {
                Format::Text => format!("{}\n{}", r.headline, r.body.to_text()),
                Format::Tree => format!("{}\n", r.body.to_json()),
            };
            let _ = std::io::stdout().lock().write_all(text.as_bytes());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("whitkit: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn parse_window(s: &str) -> Result<(i64, i64)> {
    let (a, b) = s.split_once(':').ok_or_else(|| Error::parse(format!("window {s:?} is not lo:hi")))?;
    let lo = a.trim().parse().map_err(|_| Error::parse(format!("bad window bound {a:?}")))?;
    let hi = b.trim().parse().map_err(|_| Error::parse(format!("bad window bound {b:?}")))?;
    Ok((lo, hi))
}

fn load_alg(cli: &Cli) -> Result<LiePresentation> {
    let arg = cli.alg.as_deref().ok_or_else(|| Error::usage("--alg is required"))?;
    let window = cli.window.as_deref().map(parse_window).transpose()?;
    let p = if Path::new(arg).is_file() {
        let text = std::fs::read_to_string(arg).map_err(|e| Error::usage(format!("cannot read {arg}: {e}")))?;
        let name = Path::new(arg).file_stem().and_then(|s| s.to_str()).unwrap_or("file");
        parse_presentation(name, &text)?
    } else {
        let mut it = arg.split(':');
        let name = it.next().unwrap();
        let nums: Vec<i64> =
            it.map(|x| x.parse().map_err(|_| Error::parse(format!("bad catalog parameter {x:?}")))).collect::<Result<_>>()?;
        let mut params = CatalogParams { window, ..Default::default() };
        match name {
            "v_n" | "borel_sl" => params.n = nums.first().copied(),
            "v_quotient" => {
                params.n = nums.first().copied();
                params.k = nums.get(1).copied();
            }
            "witt_w" => {
                params.n = nums.first().copied();
                params.cap = nums.get(1).map(|&c| c as u32);
            }
            _ if !nums.is_empty() => return Err(Error::usage(format!("{name} takes no parameters"))),
            _ => {}
        }
        catalog(name, &params)?
    };
    let jr = jacobi_check(&p);
    if !jr.passed() {
        return Err(Error::usage(format!("presentation fails the Jacobi identity on {:?}", jr.failures[0])));
    }
    Ok(match cli.overflow {
        Some(Overflow::Mark) => p.with_mode(OverflowMode::Mark),
        Some(Overflow::Reject) => p.with_mode(OverflowMode::Reject),
        None => p,
    })
}

/// `k=v,...` or `v,...`.
fn parse_assign(s: &str) -> Result<Vec<(Option<String>, Scalar)>> {
    s.split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(|item| match item.split_once('=') {
            Some((k, v)) => Ok((Some(k.trim().to_string()), parse_scalar(v.trim())?)),
            None => Ok((None, parse_scalar(item)?)),
        })
        .collect()
}

fn part_of(p: &LiePresentation, arg: Option<&str>) -> Result<Vec<usize>> {
    match arg {
        Some(s) => p.resolve_part(s),
        None => ["n", "n_+"]
            .iter()
            .find_map(|n| p.part(n).map(<[usize]>::to_vec))
            .ok_or_else(|| Error::usage("--n is required for this algebra")),
    }
}

fn character(p: &LiePresentation, part: &[usize], arg: Option<&str>) -> Result<Character> {
    let mut a = BTreeMap::new();
    if let Some(s) = arg {
        for (k, v) in parse_assign(s)? {
            let k = k.ok_or_else(|| Error::usage("character values must be tag=q"))?;
            a.insert(p.lookup(&k)?, v);
        }
    }
    character_validate(p, part, &a)
}

fn values_on(p: &LiePresentation, syms: &[usize], arg: Option<&str>) -> Result<Vec<Scalar>> {
    let mut out = vec![Scalar::from_integer(0.into()); syms.len()];
    let Some(s) = arg else { return Ok(out) };
    let items = parse_assign(s)?;
    if items.iter().all(|(k, _)| k.is_none()) {
        if items.len() != syms.len() {
            return Err(Error::usage(format!("expected {} values", syms.len())));
        }
        return Ok(items.into_iter().map(|(_, v)| v).collect());
    }
    for (k, v) in items {
        let k = k.ok_or_else(|| Error::usage("mix of named and positional values"))?;
        let i = p.lookup(&k)?;
        let slot = syms.iter().position(|&s| s == i).ok_or_else(|| Error::usage(format!("{k} is not in the Cartan part")))?;
        out[slot] = v;
    }
    Ok(out)
}

fn single(arg: Option<&str>, flag: &str) -> Result<Scalar> {
    parse_scalar(arg.ok_or_else(|| Error::usage(format!("--{flag} is required")))?.trim())
}

fn plain_list(s: &str) -> Result<Vec<Scalar>> {
    parse_assign(s)?.into_iter().map(|(k, v)| if k.is_some() { Err(Error::usage("expected plain values")) } else { Ok(v) }).collect()
}

fn root_map(s: Option<&str>) -> Result<BTreeMap<usize, Scalar>> {
    let mut out = BTreeMap::new();
    if let Some(s) = s {
        for (k, v) in parse_assign(s)? {
            let k = k.ok_or_else(|| Error::usage("weights must be root=q"))?;
            let k = k.trim_start_matches('h').parse().map_err(|_| Error::parse(format!("bad root index {k:?}")))?;
            out.insert(k, v);
        }
    }
    Ok(out)
}

fn parse_table(s: &str) -> Result<ExtTable> {
    let mut dims = Vec::new();
    for item in s.split(',').map(str::trim).filter(|x| !x.is_empty()) {
        let (i, d) = item.split_once(':').ok_or_else(|| Error::parse(format!("table entry {item:?} is not i:dim")))?;
        let i = i.trim().parse().map_err(|_| Error::parse(format!("bad degree {i:?}")))?;
        let d = d.trim().parse().map_err(|_| Error::parse(format!("bad dimension {d:?}")))?;
        dims.push((i, d));
    }
    Ok(ExtTable::from_dims(dims))
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn run(cli: &Cli) -> Result<Report> {
    let depth = cli.depth;
    match &cli.command {
        Command::Catalog => {
            let subs = Node::List(SUBCOMMANDS.iter().map(|(n, d)| Node::text(format!("{n}: {d}"))).collect());
            let algs = Node::List(CATALOG_NAMES.iter().map(|n| Node::text(*n)).collect());
            Ok(Report {
                headline: format!("{} subcommands", SUBCOMMANDS.len()),
                body: Node::map([("subcommands", subs), ("algebras", algs)]),
            })
        }
        Command::CheckPair => {
            let p = load_alg(cli)?.with_mode(OverflowMode::Mark);
            let part = part_of(&p, cli.n.as_deref())?;
            let r = whittaker_pair_check(&p, &part, depth.map_or(DEFAULT_DEPTH, |d| d as usize))?;
            Ok(Report { headline: format!("Whittaker pair: {}", verdict_word(r.verdict)), body: r.to_node() })
        }
        Command::Lcs => {
            let p = load_alg(cli)?.with_mode(OverflowMode::Mark);
            let part = match &cli.n {
                Some(s) => p.resolve_part(s)?,
                None => (0..p.dim()).collect(),
            };
            let d = depth.unwrap_or(8) as usize;
            let s = lower_central_series(&p, &part, d)?;
            let qn = quasi_nilpotent_check(&p, &part, d.max(DEFAULT_DEPTH))?;
            let levels = (0..s.chain.len())
                .map(|i| {
                    let span = match s.level_tags(&p, i) {
                        Some(tags) => Node::List(tags.into_iter().map(Node::text).collect()),
                        None => Node::List(s.chain[i].basis().iter().map(|v| Node::text(p.format_combo(v))).collect()),
                    };
                    Node::map([
                        ("level", Node::int(i)),
                        ("dim", Node::int(s.chain[i].dim())),
                        ("span", span),
                        ("overflow", Node::Bool(s.overflow[i])),
                    ])
                })
                .collect();
            Ok(Report {
                headline: format!("quasi-nilpotent: {}", quasi_word(qn)),
                body: Node::map([("levels", Node::List(levels)), ("quasi_nilpotent", Node::text(quasi_word(qn)))]),
            })
        }
        Command::PbwNormalize { expr } => {
            let p = load_alg(cli)?;
            let order = match &cli.n {
                Some(s) => MonomialOrder::split(&p, &p.resolve_part(s)?),
                None => MonomialOrder::standard(&p),
            };
            let e = Pbw::new(&p, order);
            let u = e.normalize_expr(expr)?;
            let shown = e.format(&u);
            Ok(Report { headline: shown.clone(), body: Node::map([("input", Node::text(expr)), ("normal_form", Node::text(shown))]) })
        }
        Command::Blocks { lambda2 } => {
            let p = load_alg(cli)?.with_mode(OverflowMode::Mark);
            let part = part_of(&p, cli.n.as_deref())?;
            let a = character(&p, &part, cli.lambda.as_deref())?;
            let b = character(&p, &part, Some(lambda2))?;
            let la: Vec<Scalar> = part.iter().map(|&x| a.get(x)).collect();
            let lb: Vec<Scalar> = part.iter().map(|&x| b.get(x)).collect();
            let r = sim_relation_check(&p, &part, &la, &lb, depth.map_or(DEFAULT_DEPTH, |d| d as usize))?;
            Ok(Report {
                headline: format!("related: {}", yes(r.related)),
                body: Node::map([
                    ("related", Node::Bool(r.related)),
                    ("generators", Node::List(part.iter().map(|&x| Node::text(p.tag(x))).collect())),
                    ("shifts", Node::List(r.shifts.iter().map(|s| Node::rationals(s)).collect())),
                ]),
            })
        }
        Command::WhittakerVectors => {
            let p = load_alg(cli)?;
            let part = part_of(&p, cli.n.as_deref())?;
            let chi = character(&p, &part, cli.lambda.as_deref())?;
            let m = InducedModule::standard(&p, &part, chi)?;
            let d = depth.unwrap_or(6);
            let r = m.whittaker_vectors(d)?;
            Ok(Report { headline: format!("Whittaker vectors of degree <= {d}: {}", r.dim), body: r.to_node() })
        }
        Command::DualWhittaker => {
            let p = load_alg(cli)?;
            let part = part_of(&p, cli.n.as_deref())?;
            let chi = character(&p, &part, cli.lambda.as_deref())?;
            let d = depth.unwrap_or(6);
            let dims: Vec<usize> = (0..=d).map(|k| whittaker_vectors_in_dual(&p, &part, &chi, k)).collect::<Result<_>>()?;
            Ok(Report {
                headline: format!("Whittaker functionals up to weight {d}: {}", dims.last().unwrap()),
                body: Node::map([("dims_by_weight", Node::ints(&dims))]),
            })
        }
        Command::VermaDims | Command::SimpleDims | Command::StarCheck => {
            let p = load_alg(cli)?;
            let h = p.part("h").ok_or_else(|| Error::usage("algebra has no h part"))?.to_vec();
            let mu = values_on(&p, &h, cli.mu.as_deref())?;
            let d = depth.unwrap_or(5);
            let tri = Triangular::highest_weight(&p, &mu)?;
            match &cli.command {
                Command::VermaDims => {
                    let dims = tri.verma_dims(d)?;
                    Ok(Report { headline: format!("dims: {dims:?}"), body: Node::map([("dims_by_depth", Node::ints(&dims))]) })
                }
                Command::SimpleDims => {
                    let dims = tri.simple_dims(d)?;
                    Ok(Report {
                        headline: format!("dims: {dims:?}"),
                        body: Node::map([
                            ("dims_by_depth", Node::ints(&dims)),
                            ("note", Node::text("exact at each depth up to the truncation")),
                        ]),
                    })
                }
                _ => {
                    let r = star_duality_check(&p, &mu, d)?;
                    Ok(Report { headline: format!("equal ladders: {}", yes(r.equal())), body: r.to_node() })
                }
            }
        }
        Command::CompletionSolve { ladder } => {
            let p = load_alg(cli)?;
            let h = p.part("h").ok_or_else(|| Error::usage("algebra has no h part"))?.to_vec();
            let mu = values_on(&p, &h, cli.mu.as_deref())?;
            let tri = Triangular::highest_weight(&p, &mu)?;
            let chi = character(&p, tri.upper(), cli.lambda.as_deref())?;
            let ladder = match ladder {
                LadderArg::Verma => Ladder::Verma,
                LadderArg::Simple => Ladder::Simple,
            };
            let r = completion_whittaker_solve(&tri, &chi, depth.unwrap_or(6), ladder)?;
            Ok(Report { headline: format!("dims by truncation: {:?}", r.dims), body: r.to_node() })
        }
        Command::Simplicity { designated } => {
            let p = load_alg(cli)?;
            let part = part_of(&p, cli.n.as_deref())?;
            let chi = character(&p, &part, cli.lambda.as_deref())?;
            let m = InducedModule::standard(&p, &part, chi)?;
            let x = designated.as_deref().map(|t| p.lookup(t)).transpose()?;
            let c = simplicity_certificate(&m, depth.unwrap_or(5), x)?;
            Ok(Report { headline: format!("certificate: {}", if c.passed() { "passed" } else { "failed" }), body: c.to_node() })
        }
        Command::Ext { family, nu } => match family {
            Family::Zero => {
                let mu = single(cli.mu.as_deref(), "mu")?;
                let nu = single(nu.as_deref(), "nu")?;
                let t = ext_solvable2d_zero(&mu, &nu)?;
                Ok(Report {
                    headline: format!("Ext table: {t}"),
                    body: Node::map([
                        ("mu", Node::q(&mu)),
                        ("nu", Node::q(&nu)),
                        ("ext", t.to_node()),
                        ("table", Node::text(t.to_string())),
                    ]),
                })
            }
            Family::Nonzero => {
                let l = single(cli.lambda.as_deref(), "lambda")?;
                let r = ext_solvable2d_nonzero(&l, depth.unwrap_or(8))?;
                Ok(Report { headline: format!("Ext table: {}", r.table), body: r.to_node() })
            }
        },
        Command::CeExt { rank, lambda2, mu2 } => {
            let l = plain_list(cli.lambda.as_deref().ok_or_else(|| Error::usage("--lambda is required"))?)?;
            let l2 = match lambda2 {
                Some(s) => plain_list(s)?,
                None => l.clone(),
            };
            let m = root_map(cli.mu.as_deref())?;
            let m2 = match mu2 {
                Some(s) => root_map(Some(s))?,
                None => m.clone(),
            };
            let r = ce_ext1_borel(*rank, &l, &m, &l2, &m2, depth.unwrap_or(4))?;
            let sat = match r.saturated_at {
                Some(d) => format!("saturated at depth {d}"),
                None => "not saturated".into(),
            };
            Ok(Report { headline: format!("Ext^1 = {} ({sat})", r.total), body: r.to_node() })
        }
        Command::Kunneth { table, degree } => {
            let tables: Vec<ExtTable> = table.iter().map(|t| parse_table(t)).collect::<Result<_>>()?;
            let v = kunneth_ext(&tables, *degree);
            Ok(Report { headline: format!("Ext^{degree} = {v}"), body: Node::map([("degree", Node::int(*degree)), ("dim", Node::int(v))]) })
        }
        Command::Vk { k } => {
            let mu = match cli.mu.as_deref() {
                Some(s) => parse_scalar(s.trim())?,
                None => Scalar::from_integer(0.into()),
            };
            let v = vk_module(*k, &mu)?;
            Ok(Report { headline: format!("dim={} end={}", v.dim(), v.end_dim), body: v.to_node() })
        }
        Command::Quiver { vertices, k } => {
            let vs = plain_list(vertices)?;
            let qv = ext_quiver_assemble(&vs)?;
            let rel = quiver_relation_check(*k, &qv.vertices)?;
            Ok(Report {
                headline: format!("{} loops, {} steps", qv.loops.len(), qv.steps.len()),
                body: Node::map([("quiver", qv.to_node()), ("relation_check", rel.to_node())]),
            })
        }
        Command::AnnihilatorCheck { elements } => {
            let p = load_alg(cli)?;
            let h = p.part("h").ok_or_else(|| Error::usage("algebra has no h part"))?.to_vec();
            let mu = values_on(&p, &h, cli.mu.as_deref())?;
            let tri = Triangular::highest_weight(&p, &mu)?;
            let chi = character(&p, tri.upper(), cli.lambda.as_deref())?;
            let els = elements
                .split(';')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(|s| tri.engine().normalize_expr(s))
                .collect::<Result<Vec<_>>>()?;
            let r = annihilator_spot_check(&tri, &chi, &els, depth.unwrap_or(6))?;
            Ok(Report { headline: "desk evidence on truncations, not a proof".into(), body: r.to_node() })
        }
        Command::BorelSimple { rank } => {
            let l = plain_list(cli.lambda.as_deref().ok_or_else(|| Error::usage("--lambda is required"))?)?;
            let m = root_map(cli.mu.as_deref())?;
            let r = borel_simple_module(*rank, &l, &m, depth.unwrap_or(4))?;
            let mut body = vec![
                ("dims_by_degree", Node::ints(&r.dims)),
                ("factor_product_dims", Node::ints(&r.product_dims)),
                ("active_roots", Node::ints(&r.active)),
                ("factorization_ok", Node::Bool(r.factorization_ok)),
            ];
            if let Some(w) = &r.witness {
                body.push(("witness", Node::text(w)));
            }
            Ok(Report { headline: format!("factorization: {}", yes(r.factorization_ok)), body: Node::map(body) })
        }
    }
}
