use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use flagsoc::alcovekl::{KlModule, RestrictedSimples};
use flagsoc::charring::{hv_char_product, hv_char_sum, weyl_character};
use flagsoc::hverma::{epsilon_layer_check, q_one_check, socle_table, summary_json};
use flagsoc::modcat::{catalog, classes_separated, soc1_check, Catalog, Family};
use flagsoc::quadric::{multiplicities, quadric_catalog_check, QuadricParams};
use flagsoc::sheafcoh::ledger::{ledger_check, parse};
use flagsoc::sheafcoh::{euler_matrix, ext_table, poset_verify};
use flagsoc::{ParabolicSpec, RootDatum, RootType, Weight};
use serde_json::{json, Value};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "flagsoc", version, about = "Characters, socle tables and exceptional sheaves on flag varieties")]
struct Cli {
    /// Worker threads for the parallel stages.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct Group {
    /// A1, A2, B2 (= C2) or G2.
    #[arg(long = "type", default_value = "A2")]
    kind: String,
    /// `b`, `a1`, `a2`.
    #[arg(long, default_value = "b")]
    parabolic: String,
}

impl Group {
    fn resolve(&self) -> Result<(RootType, ParabolicSpec)> {
        let kind = RootType::parse(&self.kind)?;
        let par = ParabolicSpec::parse(&self.parabolic, kind.rank())?;
        Ok((kind, par))
    }
}

#[derive(Args)]
struct CatalogArgs {
    #[command(flatten)]
    group: Group,
    /// socle, kapranov (or kapranov-a2), quadric-N.
    #[arg(long, default_value = "socle")]
    family: String,
}

impl CatalogArgs {
    fn load(&self) -> Result<Catalog> {
        let fam = self.family.to_ascii_lowercase();
        if fam == "kapranov-a2" {
            return Ok(catalog(RootType::A2, &ParabolicSpec::borel(), Family::Kapranov)?);
        }
        if let Some(n) = fam.strip_prefix("quadric-") {
            let n: usize = n.parse().context("quadric dimension")?;
            return Ok(flagsoc::modcat::quadric_catalog(n)?);
        }
        let (kind, par) = self.group.resolve()?;
        Ok(catalog(kind, &par, Family::parse(&fam)?)?)
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Root datum: Cartan matrix, positive roots, rho.
    Roots {
        #[command(flatten)]
        group: Group,
    },
    /// Minimal coset representatives, or a Weyl character.
    Weyl {
        #[command(flatten)]
        group: Group,
        /// Highest weight `a,b` whose character is printed instead.
        #[arg(long, allow_hyphen_values = true)]
        character: Option<String>,
    },
    /// Humphreys-Verma characters by the product and by the sum formula.
    Hvchar {
        #[command(flatten)]
        group: Group,
        #[arg(long)]
        p: i64,
        #[arg(long, allow_hyphen_values = true)]
        nu: Option<String>,
        /// Compare both sides at 0 and at the generator of the character
        /// lattice of P.
        #[arg(long)]
        verify: bool,
    },
    /// Graded socle table of a baby Verma module.
    Socle {
        #[command(flatten)]
        group: Group,
        #[arg(long)]
        p: i64,
        /// Highest alcove weight; the origin by default.
        #[arg(long, allow_hyphen_values = true)]
        top: Option<String>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// KL table cache file; defaults to `$FLAGSOC_CACHE/kl_<type>_<p>.json`.
        #[arg(long)]
        cache: Option<PathBuf>,
    },
    /// Filtered module descriptions of the sheaves `E_w`.
    Catalog {
        #[command(flatten)]
        args: CatalogArgs,
        /// Also compare first socle layers against the socle table at `p`.
        #[arg(long)]
        p: Option<i64>,
    },
    /// Pairwise `Ext^*` in characteristic 0.
    Exts {
        #[command(flatten)]
        args: CatalogArgs,
    },
    /// Strong exceptionality and the Bruhat-order shape of `Hom`.
    PosetVerify {
        #[command(flatten)]
        args: CatalogArgs,
    },
    /// Euler form on the catalog and its determinant.
    K0Matrix {
        #[command(flatten)]
        args: CatalogArgs,
    },
    /// Generation certificates.
    Ledger {
        #[command(subcommand)]
        cmd: LedgerCmd,
    },
    /// Frobenius direct image on the quadric of dimension `n`.
    Quadric {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: u64,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
}

#[derive(Subcommand)]
enum LedgerCmd {
    /// Replay a script and report the first failing step.
    Check { file: PathBuf },
}

fn weight(s: &str, rank: usize) -> Result<Weight> {
    let c: Vec<i64> = s.split(',').map(|t| t.trim().parse::<i64>()).collect::<std::result::Result<_, _>>().context("weight")?;
    if c.len() != rank {
        bail!("weight `{s}` needs {rank} coordinates");
    }
    Ok(Weight::new(&c))
}

fn kl_table(kind: RootType, p: i64, cache: Option<PathBuf>) -> Result<KlModule> {
    let path = cache.or_else(|| {
        std::env::var_os("FLAGSOC_CACHE").map(|d| PathBuf::from(d).join(format!("kl_{}_{p}.json", kind.label())))
    });
    Ok(match path {
        Some(p0) => KlModule::load_or_compute(kind, p, &p0)?,
        None => KlModule::new(kind, p)?,
    })
}

/// `(report, all checks passed)`.
fn run(cmd: Cmd) -> Result<(String, bool)> {
    let js = |v: Value, ok: bool| Ok((serde_json::to_string_pretty(&v)?, ok));
    match cmd {
        Cmd::Roots { group } => {
            let (kind, par) = group.resolve()?;
            let d = RootDatum::new(kind)?;
            let mut v = d.to_json();
            v["parabolic"] = json!(par.name());
            v["levi_roots"] = json!(par.levi_roots(&d).iter().map(|r| r.weight.to_vec(d.rank)).collect::<Vec<_>>());
            js(v, true)
        }
        Cmd::Weyl { group, character } => {
            let (kind, par) = group.resolve()?;
            let d = RootDatum::new(kind)?;
            if let Some(c) = character {
                let lam = weight(&c, d.rank)?;
                let ch = weyl_character(&d, &lam)?;
                return js(json!({"highest": lam.to_vec(d.rank), "dim": ch.total(), "character": ch.to_json(d.rank)}), true);
            }
            let reps = d.min_coset_reps(&par)?;
            let w = d.enumerate_weyl()?;
            let list: Vec<Value> = reps.iter().map(|x| json!({"w": x.name(), "length": x.len()})).collect();
            js(json!({"type": kind.label(), "parabolic": par.name(), "order": w.len(), "min_coset_reps": list}), true)
        }
        Cmd::Hvchar { group, p, nu, verify } => {
            let (kind, par) = group.resolve()?;
            let d = RootDatum::new(kind)?;
            let nus = match nu {
                Some(s) => vec![weight(&s, d.rank)?],
                None => vec![Weight::ZERO, par.lambda_p_generator(&d)],
            };
            let mut rows = Vec::new();
            let mut ok = true;
            for nu in nus {
                let a = hv_char_product(&d, &nu, &par, p)?;
                let mut row = json!({"nu": nu.to_vec(d.rank), "dim": a.total(), "character": a.to_json(d.rank)});
                if verify {
                    let same = a == hv_char_sum(&d, &nu, &par, p)?;
                    ok &= same;
                    row["sum_formula_agrees"] = json!(same);
                }
                rows.push(row);
            }
            let mut v = json!({"type": kind.label(), "parabolic": par.name(), "p": p, "results": rows});
            if verify {
                v["identity"] = json!(if ok { "pass" } else { "fail" });
            }
            js(v, ok)
        }
        Cmd::Socle { group, p, top, format, cache } => {
            let (kind, par) = group.resolve()?;
            let kl = kl_table(kind, p, cache)?;
            let g = &kl.geometry;
            let top = match top {
                Some(s) => weight(&s, g.rank())?,
                None => Weight::ZERO,
            };
            let t = socle_table(&kl, &par, &top)?;
            if let Format::Csv = format {
                return Ok((t.to_csv(g)?, true));
            }
            let simples = RestrictedSimples::compute(&kl)?;
            let mut v = summary_json(&t, &kl, &simples)?;
            let q1 = q_one_check(&t, &kl, &simples)?;
            let cor: Vec<(String, bool)> = if top == Weight::ZERO { epsilon_layer_check(&kl, &par)? } else { Vec::new() };
            let expected_len = g.datum.longest_elements(&par)?.2.len() as i64 + 1;
            v["expected_loewy_length"] = json!(expected_len);
            v["q_one"] = json!(q1);
            v["epsilon_layers"] = json!(cor.iter().map(|(w, b)| json!({"w": w, "ok": b})).collect::<Vec<_>>());
            let ok = v["mass_ok"] == json!(true) && q1 && cor.iter().all(|c| c.1) && t.loewy_length() == expected_len;
            js(v, ok)
        }
        Cmd::Catalog { args, p } => {
            let cat = args.load()?;
            let mut v = cat.to_json();
            let mut ok = true;
            if let Some(p) = p {
                let kl = kl_table(cat.kind, p, None)?;
                if classes_separated(&kl.geometry, &cat.parabolic)? {
                    let res = soc1_check(&kl, &cat)?;
                    ok = res.iter().all(|r| r.1);
                    v["soc1"] = json!(res.iter().map(|(w, b)| json!({"w": w, "ok": b})).collect::<Vec<_>>());
                } else {
                    v["soc1"] = json!("epsilon classes coincide at this prime");
                }
            }
            js(v, ok)
        }
        Cmd::Exts { args } => {
            let cat = args.load()?;
            let d = cat.datum();
            let names: Vec<String> = cat.sheaves().iter().map(|(w, _)| w.name()).collect();
            let table = ext_table(&cat)?;
            let mut cells = Vec::new();
            let mut ok = true;
            for (x, row) in table.iter().enumerate() {
                for (y, h) in row.iter().enumerate() {
                    ok &= h.is_exact();
                    let mut c = h.to_json(&d);
                    c["from"] = json!(names[x]);
                    c["to"] = json!(names[y]);
                    cells.push(c);
                }
            }
            js(json!({"type": cat.kind.label(), "parabolic": cat.parabolic.name(), "family": cat.family.name(), "exts": cells}), ok)
        }
        Cmd::PosetVerify { args } => {
            let cat = args.load()?;
            let r = poset_verify(&cat)?;
            let mut v = r.to_json();
            v["type"] = json!(cat.kind.label());
            v["parabolic"] = json!(cat.parabolic.name());
            v["family"] = json!(cat.family.name());
            let n = r.elements.len();
            let into: Vec<Value> = (0..n)
                .map(|y| json!({"w": r.elements[y], "nonzero_homs_into": (0..n).filter(|&x| x != y && r.hom_nonzero[x][y]).count()}))
                .collect();
            v["nonzero_homs"] = json!((0..n).flat_map(|x| (0..n).map(move |y| (x, y))).filter(|&(x, y)| x != y && r.hom_nonzero[x][y]).count());
            v["homs_into"] = json!(into);
            let strongly_exceptional = r.exact && r.end_is_k.iter().all(|b| *b) && r.higher_zero.iter().flatten().all(|b| *b);
            let bruhat_shape = (0..n).all(|x| (0..n).all(|y| x == y || r.hom_nonzero[x][y] == r.greater[x][y]));
            v["strongly_exceptional"] = json!(strongly_exceptional);
            v["bruhat_shape"] = json!(bruhat_shape);
            // Kapranov's collection is not indexed by the Bruhat order
            let ok = if cat.family == Family::Kapranov { strongly_exceptional } else { r.pass };
            v["pass"] = json!(ok);
            js(v, ok)
        }
        Cmd::K0Matrix { args } => {
            let cat = args.load()?;
            let m = euler_matrix(&cat)?;
            let ok = m.unimodular();
            js(m.to_json(), ok)
        }
        Cmd::Ledger { cmd: LedgerCmd::Check { file } } => {
            let text = std::fs::read_to_string(&file).with_context(|| format!("reading {}", file.display()))?;
            let r = ledger_check(&parse(&text)?)?;
            let ok = r.pass();
            js(r.to_json(), ok)
        }
        Cmd::Quadric { n, p, format } => {
            let q = QuadricParams::new(n, p)?;
            let t = multiplicities(&q)?;
            let ok = t.conserved();
            if let Format::Csv = format {
                return Ok((t.to_csv(), ok));
            }
            let mut v = t.to_json();
            v["table"] = json!(t.rows.iter().map(|r| json!({"summand": r.label, "rank": r.rank, "multiplicity": r.mult})).collect::<Vec<_>>());
            if let Ok(c) = quadric_catalog_check(n) {
                v["catalog_size"] = json!(c.size);
                v["catalog_ok"] = json!(c.pass());
            }
            js(v, ok)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(j) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(j).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli.cmd) {
        Ok((out, ok)) => {
            let _ = writeln!(std::io::stdout(), "{}", out.trim_end());
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            println!("{}", serde_json::to_string_pretty(&json!({"error": format!("{e:#}")})).unwrap());
            ExitCode::from(2)
        }
    }
}
