//! `twoexact`: validators, searches and constructions over `.2cat.json`
//! files. Checks print one certificate per line; constructions print a
//! document. Exit status: 0 pass, 1 fail, 2 input error, 3 inconclusive.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use twoexact::cert::{Caps, Certificate, Status};
use twoexact::closure::{is_closed_ideal, is_weakly_closed};
use twoexact::core2::{validate_two_category, Mor, TwoCategory};
use twoexact::error::Error;
use twoexact::exact::{self, check_exact, check_grandis_i, fs_from_ideal, ideal_from_fs, three_pieces, Closedness};
use twoexact::factor::{check_weak_two_fibration, is_proper_11, validate_fs, validate_rofs, Direction, FactorizationSystem};
use twoexact::gen::{self, mutate};
use twoexact::ideal::{validate_two_ideal, zero_ideal, TwoIdeal};
use twoexact::idealeq::ideals_equivalent;
use twoexact::io::{self, BundleDoc, Document, FiniteCategoryDoc, FsDoc, FunctorDoc, IdealDoc, NaturalDoc, OneIdealDoc, TwoCategoryDoc};
use twoexact::limits::{biisoinserter, two_cokernels, two_kernels};
use twoexact::onecat::{grandis_exact_1cat, puppe_exact_1cat, underlying_1cat, FiniteCategory, OneIdeal};
use twoexact::pseudo::{validate_pseudofunctor, validate_pseudonatural, NaturalSetting, PseudoFunctor, PseudoNatural};

#[derive(Parser)]
#[command(name = "twoexact", version, about = "Exactness checks for finite strict 2-categories")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Search budget for both candidates and quantifier instances.
    #[arg(long, global = true)]
    cap: Option<usize>,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Grandis,
    Puppe,
    WeakGrandis,
    WeakPuppe,
}

impl From<ModeArg> for exact::Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Grandis => exact::Mode::Grandis,
            ModeArg::Puppe => exact::Mode::Puppe,
            ModeArg::WeakGrandis => exact::Mode::WeakGrandis,
            ModeArg::WeakPuppe => exact::Mode::WeakPuppe,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum DirectionArg {
    Dom,
    Cod,
}

#[derive(Subcommand)]
enum Cmd {
    /// Validate a document; further documents are checked against it.
    Validate {
        file: PathBuf,
        extra: Vec<PathBuf>,
        #[arg(long)]
        ideal: Option<PathBuf>,
        #[arg(long)]
        fs: Option<PathBuf>,
    },
    /// Emit a generated fixture: two-category, zero-ideal, maximal-ideal,
    /// finite-category, image-fs or trivial-fs.
    Gen {
        name: String,
        #[arg(default_value = "two-category")]
        what: String,
    },
    Kernel {
        file: PathBuf,
        one_cell: String,
        #[arg(long)]
        ideal: PathBuf,
    },
    Cokernel {
        file: PathBuf,
        one_cell: String,
        #[arg(long)]
        ideal: PathBuf,
    },
    Biisoinserter {
        file: PathBuf,
        f: String,
        g: String,
    },
    CheckIdeal {
        file: PathBuf,
        #[arg(long)]
        ideal: PathBuf,
    },
    /// Closedness; weak modes check weak closedness.
    CheckClosed {
        file: PathBuf,
        #[arg(long)]
        ideal: PathBuf,
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
    },
    EquivIdeals {
        file: PathBuf,
        other: PathBuf,
        #[arg(long)]
        ideal: PathBuf,
    },
    CheckFs {
        file: PathBuf,
        #[arg(long)]
        fs: PathBuf,
    },
    CheckFibration {
        file: PathBuf,
        #[arg(long)]
        fs: PathBuf,
        #[arg(long, value_enum)]
        direction: DirectionArg,
    },
    CheckRofs {
        file: PathBuf,
        #[arg(long)]
        ideal: PathBuf,
        #[arg(long)]
        fs: PathBuf,
    },
    /// The ideal conditions, or with a witness bundle as --fs the
    /// factorization-system side.
    CheckExact {
        file: PathBuf,
        #[arg(long, value_enum)]
        mode: ModeArg,
        #[arg(long)]
        ideal: Option<PathBuf>,
        #[arg(long)]
        fs: Option<PathBuf>,
    },
    FsFromIdeal {
        file: PathBuf,
        #[arg(long)]
        ideal: PathBuf,
    },
    IdealFromFs {
        file: PathBuf,
        #[arg(long)]
        fs: PathBuf,
    },
    ThreePieces {
        file: PathBuf,
        one_cell: String,
        #[arg(long)]
        ideal: PathBuf,
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
    },
    /// The 1-categorical oracle on a finite category or the underlying
    /// category of a 2-category.
    #[command(name = "oracle-1cat")]
    Oracle1Cat {
        file: PathBuf,
        #[arg(long)]
        ideal: Option<PathBuf>,
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
    },
    Mutate {
        file: PathBuf,
        #[arg(long)]
        op: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        ideal: Option<PathBuf>,
        #[arg(long)]
        fs: Option<PathBuf>,
    },
}

enum Output {
    Certs(Vec<Certificate>),
    Doc(Box<Document>),
}

type Result<T> = std::result::Result<T, Error>;

fn doc(d: Document) -> Output {
    Output::Doc(Box::new(d))
}

fn category(path: &Path) -> Result<TwoCategory> {
    io::two_category(io::read(path)?)
}

fn ideal(t: &TwoCategory, path: &Path) -> Result<TwoIdeal> {
    match io::read(path)? {
        Document::TwoIdeal(d) => d.resolve(t),
        d => Err(Error::Input(format!("{}: expected a two_ideal document, found {:?}", path.display(), d.kind()))),
    }
}

fn factorization(t: &TwoCategory, path: &Path) -> Result<FactorizationSystem> {
    match io::read(path)? {
        Document::FactorizationSystem(d) => d.resolve(t),
        Document::WitnessBundle(d) => Ok(d.resolve(t)?.fs),
        d => Err(Error::Input(format!("{}: expected a factorization_system document, found {:?}", path.display(), d.kind()))),
    }
}

fn one_cell(t: &TwoCategory, name: &str) -> Result<Mor> {
    t.mor_by_name(name).ok_or_else(|| Error::Input(format!("dangling references: 1-cell {name}")))
}

fn finite_category(doc: Document) -> Result<FiniteCategory> {
    match doc {
        Document::FiniteCategory(d) => d.build(),
        Document::TwoCategory(d) => Ok(underlying_1cat(&d.build()?)),
        d => Err(Error::Input(format!("expected a category document, found {:?}", d.kind()))),
    }
}

fn generated(name: &str) -> Result<TwoCategory> {
    let num = |s: &str| s.parse::<usize>().map_err(|_| Error::Input(format!("unknown generator {name}")));
    if let Ok(t) = gen::fixture(name) {
        return Ok(t);
    }
    if let Some(n) = name.strip_prefix("pb") {
        return Ok(gen::locally_discrete(&gen::partial_bijections(num(n)?)));
    }
    if let Some(n) = name.strip_prefix("ps") {
        return Ok(gen::locally_discrete(&gen::pointed_sets(num(n)?)));
    }
    if let Some(pk) = name.strip_prefix("ct").filter(|s| s.len() == 2) {
        return Ok(gen::locally_discrete(&gen::cyclic_tower(num(&pk[..1])?, num(&pk[1..])?)));
    }
    Err(Error::Input(format!("unknown generator {name}")))
}

fn validate_doc(t: Option<&TwoCategory>, c: Option<&FiniteCategory>, doc: Document, caps: &Caps) -> Result<Certificate> {
    let need = || t.ok_or_else(|| Error::Input("this document needs a two_category first".into()));
    match doc {
        Document::TwoCategory(d) => validate_two_category(&d.build()?),
        Document::FiniteCategory(d) => Ok(d.build()?.validate()),
        Document::TwoIdeal(d) => {
            let t = need()?;
            validate_two_ideal(t, &d.resolve(t)?, caps)
        }
        Document::FactorizationSystem(d) => {
            let t = need()?;
            validate_fs(t, &d.resolve(t)?, caps)
        }
        Document::Pseudofunctor(d) => {
            let t = need()?;
            validate_pseudofunctor(t, t, &d.resolve(t, t)?, caps)
        }
        Document::Pseudonatural(d) => {
            let t = need()?;
            let id = PseudoFunctor::identity(t);
            let setting = NaturalSetting { s: t, t, f: &id, g: &id };
            validate_pseudonatural(&setting, &d.resolve(t, t)?, true, caps)
        }
        Document::WitnessBundle(d) => {
            let t = need()?;
            check_grandis_i(t, &d.resolve(t)?, caps)
        }
        Document::OneIdeal(d) => {
            let c = c.ok_or_else(|| Error::Input("a one_ideal needs a category first".into()))?;
            Ok(d.resolve(c)?.validate(c))
        }
    }
}

fn limit_certificate(check: &str, t: &TwoCategory, f: Mor, found: Vec<twoexact::limits::KernelPresentation>) -> Certificate {
    if found.is_empty() {
        Certificate::fail(check, "none", vec![t.mor_name(f).into()])
    } else {
        Certificate::pass_with(check, Value::Array(found.iter().map(|p| p.to_json(t)).collect()))
    }
}

fn run(cmd: Cmd, caps: &Caps) -> Result<Output> {
    use Output::Certs;
    Ok(match cmd {
        Cmd::Validate { file, extra, ideal: ideal_path, fs } => {
            let doc = io::read(&file)?;
            let t = match &doc {
                Document::TwoCategory(d) => Some(d.build()?),
                _ => None,
            };
            let c = match &doc {
                Document::FiniteCategory(d) => Some(d.build()?),
                _ => None,
            };
            let mut out = vec![validate_doc(t.as_ref(), c.as_ref(), doc, caps)?];
            let paths = ideal_path.iter().chain(fs.iter()).chain(extra.iter());
            for p in paths {
                out.push(validate_doc(t.as_ref(), c.as_ref(), io::read(p)?, caps)?);
            }
            Certs(out)
        }
        Cmd::Gen { name, what } => {
            let t = generated(&name)?;
            doc(match what.as_str() {
                "two-category" => Document::TwoCategory(TwoCategoryDoc::from_category(&t)),
                "zero-ideal" => Document::TwoIdeal(IdealDoc::from_ideal(&t, &zero_ideal(&t)?)),
                "maximal-ideal" => Document::TwoIdeal(IdealDoc::from_ideal(&t, &TwoIdeal::maximal(&t))),
                "finite-category" => Document::FiniteCategory(FiniteCategoryDoc::from_category(&underlying_1cat(&t))),
                "image-fs" => Document::FactorizationSystem(FsDoc::from_fs(&t, &FactorizationSystem::image(&t)?)),
                "trivial-fs" => Document::FactorizationSystem(FsDoc::from_fs(&t, &FactorizationSystem::trivial(&t)?)),
                "zero-one-ideal" => {
                    let c = underlying_1cat(&t);
                    let z = *twoexact::onecat::zero_objects(&c).first().ok_or_else(|| Error::Precondition("no zero object".into()))?;
                    Document::OneIdeal(OneIdealDoc::from_ideal(&c, &OneIdeal::through(&c, z)))
                }
                other => return Err(Error::Input(format!("unknown generator output {other}"))),
            })
        }
        Cmd::Kernel { file, one_cell: f, ideal: i } => {
            let t = category(&file)?;
            let (n, f) = (ideal(&t, &i)?, one_cell(&t, &f)?);
            Certs(vec![limit_certificate("two_kernels", &t, f, two_kernels(&t, &n, f, caps)?)])
        }
        Cmd::Cokernel { file, one_cell: f, ideal: i } => {
            let t = category(&file)?;
            let (n, f) = (ideal(&t, &i)?, one_cell(&t, &f)?);
            Certs(vec![limit_certificate("two_cokernels", &t, f, two_cokernels(&t, &n, f, caps)?)])
        }
        Cmd::Biisoinserter { file, f, g } => {
            let t = category(&file)?;
            let (f, g) = (one_cell(&t, &f)?, one_cell(&t, &g)?);
            let found = biisoinserter(&t, f, g, caps)?;
            Certs(vec![if found.is_empty() {
                Certificate::fail("biisoinserter", "none", vec![t.mor_name(f).into(), t.mor_name(g).into()])
            } else {
                let w = found
                    .iter()
                    .map(|l| json!({"object": t.obj_name(l.obj), "leg": t.mor_name(l.leg), "lambda": t.cell_name(l.lambda)}))
                    .collect();
                Certificate::pass_with("biisoinserter", Value::Array(w))
            }])
        }
        Cmd::CheckIdeal { file, ideal: i } => {
            let t = category(&file)?;
            Certs(vec![validate_two_ideal(&t, &ideal(&t, &i)?, caps)?])
        }
        Cmd::CheckClosed { file, ideal: i, mode } => {
            let t = category(&file)?;
            let n = ideal(&t, &i)?;
            let weak = mode.is_some_and(|m| exact::Mode::from(m).is_weak());
            Certs(vec![if weak { is_weakly_closed(&t, &n, caps)? } else { is_closed_ideal(&t, &n, caps)? }])
        }
        Cmd::EquivIdeals { file, other, ideal: i } => {
            let t = category(&file)?;
            let (n, n2) = (ideal(&t, &i)?, ideal(&t, &other)?);
            let (mut c, w) = ideals_equivalent(&t, &n, &n2, caps)?;
            if let (Some(w), None) = (w, &c.witness) {
                c.witness = Some(w.to_json(&t));
            }
            Certs(vec![c])
        }
        Cmd::CheckFs { file, fs } => {
            let t = category(&file)?;
            let fs = factorization(&t, &fs)?;
            Certs(vec![validate_fs(&t, &fs, caps)?, is_proper_11(&t, &fs, caps)?])
        }
        Cmd::CheckFibration { file, fs, direction } => {
            let t = category(&file)?;
            let fs = factorization(&t, &fs)?;
            let c = match direction {
                DirectionArg::Dom => check_weak_two_fibration(&t, &fs, &fs.e, Direction::Dom, caps)?,
                DirectionArg::Cod => check_weak_two_fibration(&t, &fs, &fs.m, Direction::Cod, caps)?,
            };
            Certs(vec![c])
        }
        Cmd::CheckRofs { file, ideal: i, fs } => {
            let t = category(&file)?;
            let (n, fs) = (ideal(&t, &i)?, factorization(&t, &fs)?);
            Certs(vec![validate_rofs(&t, &n, &fs.e, &fs.m, caps)?])
        }
        Cmd::CheckExact { file, mode, ideal: i, fs } => {
            let t = category(&file)?;
            if let Some(fs) = fs {
                let bundle = match io::read(&fs)? {
                    Document::WitnessBundle(d) => d.resolve(&t)?,
                    d => return Err(Error::Input(format!("--fs for check-exact must be a witness-bundle, found {:?}", d.kind()))),
                };
                return Ok(Certs(vec![check_grandis_i(&t, &bundle, caps)?]));
            }
            let n = i.map(|i| ideal(&t, &i)).transpose()?;
            let r = check_exact(&t, n.as_ref(), mode.into(), caps)?;
            let mut out = r.conditions;
            out.push(r.overall);
            Certs(out)
        }
        Cmd::FsFromIdeal { file, ideal: i } => {
            let t = category(&file)?;
            let b = fs_from_ideal(&t, &ideal(&t, &i)?, caps)?;
            doc(Document::WitnessBundle(BundleDoc::from_bundle(&t, &b)))
        }
        Cmd::IdealFromFs { file, fs } => {
            let t = category(&file)?;
            let b = match io::read(&fs)? {
                Document::WitnessBundle(d) => d.resolve(&t)?,
                d => return Err(Error::Input(format!("--fs for ideal-from-fs must be a witness-bundle, found {:?}", d.kind()))),
            };
            doc(Document::TwoIdeal(IdealDoc::from_ideal(&t, &ideal_from_fs(&t, &b.quotients, &b.subobjects, &b.k)?)))
        }
        Cmd::ThreePieces { file, one_cell: f, ideal: i, mode } => {
            let t = category(&file)?;
            let (n, f) = (ideal(&t, &i)?, one_cell(&t, &f)?);
            let grade = if mode.is_some_and(|m| exact::Mode::from(m).is_weak()) { Closedness::Weak } else { Closedness::Closed };
            let p = three_pieces(&t, &n, f, grade, caps)?;
            Certs(vec![Certificate::pass_with("three_pieces", p.to_json(&t))])
        }
        Cmd::Oracle1Cat { file, ideal: i, mode } => {
            let c = finite_category(io::read(&file)?)?;
            let puppe = matches!(mode, Some(ModeArg::Puppe | ModeArg::WeakPuppe));
            Certs(vec![match (i, puppe) {
                (_, true) => puppe_exact_1cat(&c),
                (Some(i), false) => match io::read(&i)? {
                    Document::OneIdeal(d) => grandis_exact_1cat(&c, &d.resolve(&c)?),
                    d => return Err(Error::Input(format!("expected a one_ideal document, found {:?}", d.kind()))),
                },
                (None, false) => return Err(Error::Input("oracle-1cat needs --ideal or --mode puppe".into())),
            }])
        }
        Cmd::Mutate { file, op, seed, ideal: i, fs } => {
            let t = category(&file)?;
            let id = PseudoFunctor::identity(&t);
            let sigma = PseudoNatural::identity(&t, &id, &t);
            doc(match op.as_str() {
                "retarget-vcomp" => Document::TwoCategory(TwoCategoryDoc::from_category(&mutate::retarget_vcomp(&t, seed)?)),
                "drop-null-2cell" => {
                    let i = i.ok_or_else(|| Error::Input("drop-null-2cell needs --ideal".into()))?;
                    Document::TwoIdeal(IdealDoc::from_ideal(&t, &mutate::drop_null_2cell(&t, &ideal(&t, &i)?, seed)?))
                }
                "drop-M-translate" => {
                    let fs = fs.ok_or_else(|| Error::Input("drop-M-translate needs --fs".into()))?;
                    Document::FactorizationSystem(FsDoc::from_fs(&t, &mutate::drop_m_translate(&t, &factorization(&t, &fs)?, seed)?))
                }
                "break-compositor" => Document::Pseudofunctor(FunctorDoc::from_functor(&t, &t, &mutate::break_compositor(&t, &id, seed)?)),
                "swap-structure-cell" => {
                    Document::Pseudonatural(NaturalDoc::from_natural(&t, &t, &mutate::swap_structure_cell(&t, &sigma, seed)?))
                }
                "remove-eta-inverse" => {
                    let setting = NaturalSetting { s: &t, t: &t, f: &id, g: &id };
                    Document::Pseudonatural(NaturalDoc::from_natural(&t, &t, &mutate::remove_eta_inverse(&setting, &sigma, seed)?))
                }
                other => {
                    return Err(Error::Input(format!("unknown operator {other}; expected one of {}", mutate::OPERATORS.join(", "))))
                }
            })
        }
    })
}

fn line(c: &Certificate, caps: &Caps) -> String {
    let mut v = serde_json::to_value(c).expect("certificates serialize");
    v["caps"] = json!({ "candidates": caps.candidates, "instances": caps.instances });
    serde_json::to_string(&v).expect("values serialize")
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let caps = match cli.cap {
        Some(n) => Caps { candidates: n, instances: n },
        None => Caps::default(),
    };
    let (text, code) = match run(cli.cmd, &caps) {
        Ok(Output::Doc(d)) => (d.serialize(), 0),
        Ok(Output::Certs(certs)) => {
            let code = if certs.iter().any(Certificate::failed) {
                1
            } else if certs.iter().any(|c| c.status == Status::Inconclusive) {
                3
            } else {
                0
            };
            (certs.iter().map(|c| line(c, &caps) + "\n").collect(), code)
        }
        Err(Error::CapExceeded(why)) => (line(&Certificate::inconclusive("cap", &why), &caps) + "\n", 3),
        Err(Error::Precondition(why)) => (line(&Certificate::fail("precondition", "precondition", vec![why]), &caps) + "\n", 1),
        Err(e) => {
            eprintln!("twoexact: {e}");
            return ExitCode::from(2);
        }
    };
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("twoexact: {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::from(code)
}
