//! The `.2cat.json` interchange format: strict per-kind schemas, name
//! resolution against a 2-category, and a canonical serialization.
//!
//! Declaration lists (objects, 1-cells, 2-cells) keep their order because
//! every "first" choice follows it. Set-like id lists and table rows are
//! sorted on output, maps are emitted with sorted keys.

use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::core2::{Builder, Cell, Mor, Ob, TwoCategory};
use crate::error::{Error, Result};
use crate::exact::{cod_projection, dom_projection, ExactBundle};
use crate::factor::{arrow_subcat, ArrowTwoCategory, Factorization, FactorizationSystem};
use crate::ideal::TwoIdeal;
use crate::onecat::{FiniteCategory, OneIdeal};
use crate::pseudo::{PseudoFunctor, PseudoNatural};

pub const VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Kind {
    #[serde(rename = "two_category")]
    TwoCategory,
    #[serde(rename = "two_ideal")]
    TwoIdeal,
    #[serde(rename = "factorization_system")]
    FactorizationSystem,
    #[serde(rename = "pseudofunctor")]
    Pseudofunctor,
    #[serde(rename = "pseudonatural")]
    Pseudonatural,
    #[serde(rename = "witness-bundle")]
    WitnessBundle,
    #[serde(rename = "finite_category")]
    FiniteCategory,
    #[serde(rename = "one_ideal")]
    OneIdeal,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Decl {
    pub id: String,
    pub src: String,
    pub tgt: String,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Comp1 {
    pub g: String,
    pub f: String,
    pub gf: String,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VComp {
    pub b: String,
    pub a: String,
    pub ba: String,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LWhisker {
    pub h: String,
    pub a: String,
    pub ha: String,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RWhisker {
    pub a: String,
    pub e: String,
    pub ae: String,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Replacement {
    pub a: String,
    pub n: String,
    pub b: String,
    pub tilde: String,
    pub nu: String,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactRow {
    pub f: String,
    pub e: String,
    pub m: String,
    pub theta: String,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Compositor {
    pub g: String,
    pub f: String,
    pub phi: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwoCategoryDoc {
    pub objects: Vec<String>,
    pub one_cells: Vec<Decl>,
    pub comp1: Vec<Comp1>,
    pub id1: BTreeMap<String, String>,
    pub two_cells: Vec<Decl>,
    pub vcomp: Vec<VComp>,
    pub id2: BTreeMap<String, String>,
    pub lwhisker: Vec<LWhisker>,
    pub rwhisker: Vec<RWhisker>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdealDoc {
    pub null_one_cells: Vec<String>,
    pub null_two_cells: Vec<String>,
    pub replacement: Vec<Replacement>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FsDoc {
    #[serde(rename = "E")]
    pub e: Vec<String>,
    #[serde(rename = "M")]
    pub m: Vec<String>,
    pub fact: Vec<FactRow>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctorDoc {
    pub objects: BTreeMap<String, String>,
    pub one_cells: BTreeMap<String, String>,
    pub two_cells: BTreeMap<String, String>,
    pub compositors: Vec<Compositor>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NaturalDoc {
    pub components: BTreeMap<String, String>,
    pub structure: BTreeMap<String, String>,
}

/// A factorization system with K: 𝔈 → 𝔐, C: 𝔐 → 𝔈, η and ε. The arrow
/// 2-categories are not stored; they are rebuilt from the classes.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BundleDoc {
    #[serde(rename = "E")]
    pub e: Vec<String>,
    #[serde(rename = "M")]
    pub m: Vec<String>,
    pub fact: Vec<FactRow>,
    #[serde(rename = "K")]
    pub k: FunctorDoc,
    #[serde(rename = "C")]
    pub c: FunctorDoc,
    pub eta: NaturalDoc,
    pub epsilon: NaturalDoc,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiniteCategoryDoc {
    pub objects: Vec<String>,
    pub one_cells: Vec<Decl>,
    pub comp1: Vec<Comp1>,
    pub id1: BTreeMap<String, String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OneIdealDoc {
    pub null_one_cells: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Document {
    TwoCategory(TwoCategoryDoc),
    TwoIdeal(IdealDoc),
    FactorizationSystem(FsDoc),
    Pseudofunctor(FunctorDoc),
    Pseudonatural(NaturalDoc),
    WitnessBundle(BundleDoc),
    FiniteCategory(FiniteCategoryDoc),
    OneIdeal(OneIdealDoc),
}

#[derive(Deserialize)]
struct Envelope<T> {
    version: u32,
    #[allow(dead_code)]
    kind: Kind,
    #[serde(flatten)]
    body: T,
}

#[derive(Deserialize)]
struct Header {
    version: Option<Value>,
    kind: Option<Value>,
}

fn located(e: serde_json::Error) -> Error {
    Error::Input(format!("line {} column {}: {}", e.line(), e.column(), e))
}

/// Line and column (1-based) of the first occurrence of `"key"`.
fn position_of(text: &str, key: &str) -> (usize, usize) {
    let at = text.find(&format!("\"{key}\"")).unwrap_or(0);
    let line = text[..at].matches('\n').count() + 1;
    let col = at - text[..at].rfind('\n').map_or(0, |i| i + 1) + 1;
    (line, col)
}

fn body<T: DeserializeOwned + Serialize + Default>(text: &str) -> Result<T> {
    // flattened bodies ignore unknown keys, so the key set is checked here
    let keys: Value = serde_json::from_str(text).map_err(located)?;
    let known = serde_json::to_value(T::default()).expect("documents serialize");
    let known = known.as_object().expect("documents are objects");
    if let Some(obj) = keys.as_object() {
        if let Some(k) = obj.keys().find(|k| *k != "version" && *k != "kind" && !known.contains_key(*k)) {
            let (line, col) = position_of(text, k);
            let mut expected: Vec<&str> = known.keys().map(String::as_str).collect();
            expected.extend(["kind", "version"]);
            return Err(Error::Input(format!(
                "line {line} column {col}: unknown field `{k}`, expected one of {}",
                expected.join(", ")
            )));
        }
    }
    let env: Envelope<T> = serde_json::from_str(text).map_err(located)?;
    if env.version != VERSION {
        return Err(Error::Input(format!("version: unsupported version {}", env.version)));
    }
    Ok(env.body)
}

impl Document {
    pub fn kind(&self) -> Kind {
        match self {
            Document::TwoCategory(_) => Kind::TwoCategory,
            Document::TwoIdeal(_) => Kind::TwoIdeal,
            Document::FactorizationSystem(_) => Kind::FactorizationSystem,
            Document::Pseudofunctor(_) => Kind::Pseudofunctor,
            Document::Pseudonatural(_) => Kind::Pseudonatural,
            Document::WitnessBundle(_) => Kind::WitnessBundle,
            Document::FiniteCategory(_) => Kind::FiniteCategory,
            Document::OneIdeal(_) => Kind::OneIdeal,
        }
    }

    /// Parses and checks the schema of the given kind; self-contained
    /// kinds are also checked for dangling references.
    pub fn parse(text: &str) -> Result<Document> {
        let header: Header = serde_json::from_str(text).map_err(located)?;
        match header.version {
            Some(Value::Number(n)) if n.as_u64() == Some(VERSION as u64) => {}
            Some(v) => return Err(Error::Input(format!("version: unsupported version {v}"))),
            None => return Err(Error::Input("version: missing field `version`".into())),
        }
        let kind: Kind = match header.kind {
            Some(k) => serde_json::from_value(k).map_err(|e| Error::Input(format!("kind: {e}")))?,
            None => return Err(Error::Input("kind: missing field `kind`".into())),
        };
        let doc = match kind {
            Kind::TwoCategory => Document::TwoCategory(body(text)?),
            Kind::TwoIdeal => Document::TwoIdeal(body(text)?),
            Kind::FactorizationSystem => Document::FactorizationSystem(body(text)?),
            Kind::Pseudofunctor => Document::Pseudofunctor(body(text)?),
            Kind::Pseudonatural => Document::Pseudonatural(body(text)?),
            Kind::WitnessBundle => Document::WitnessBundle(body(text)?),
            Kind::FiniteCategory => Document::FiniteCategory(body(text)?),
            Kind::OneIdeal => Document::OneIdeal(body(text)?),
        };
        doc.check_references()?;
        Ok(doc)
    }

    fn check_references(&self) -> Result<()> {
        match self {
            Document::TwoCategory(d) => d.dangling(),
            Document::FiniteCategory(d) => d.dangling(),
            _ => Ok(()),
        }
    }

    /// Sorted keys, sorted set lists and table rows, two-space indent and a
    /// trailing newline.
    pub fn serialize(&self) -> String {
        let d = self.clone().normalized();
        let mut v = match &d {
            Document::TwoCategory(x) => serde_json::to_value(x),
            Document::TwoIdeal(x) => serde_json::to_value(x),
            Document::FactorizationSystem(x) => serde_json::to_value(x),
            Document::Pseudofunctor(x) => serde_json::to_value(x),
            Document::Pseudonatural(x) => serde_json::to_value(x),
            Document::WitnessBundle(x) => serde_json::to_value(x),
            Document::FiniteCategory(x) => serde_json::to_value(x),
            Document::OneIdeal(x) => serde_json::to_value(x),
        }
        .expect("documents serialize");
        let map = v.as_object_mut().expect("documents are objects");
        map.insert("version".into(), Value::from(VERSION));
        map.insert("kind".into(), serde_json::to_value(d.kind()).expect("kinds serialize"));
        let mut s = serde_json::to_string_pretty(&v).expect("values serialize");
        s.push('\n');
        s
    }

    fn normalized(self) -> Document {
        match self {
            Document::TwoCategory(mut d) => {
                d.comp1.sort();
                d.vcomp.sort();
                d.lwhisker.sort();
                d.rwhisker.sort();
                Document::TwoCategory(d)
            }
            Document::TwoIdeal(mut d) => {
                d.null_one_cells.sort();
                d.null_two_cells.sort();
                d.replacement.sort();
                Document::TwoIdeal(d)
            }
            Document::FactorizationSystem(mut d) => {
                normalize_fs(&mut d.e, &mut d.m, &mut d.fact);
                Document::FactorizationSystem(d)
            }
            Document::Pseudofunctor(mut d) => {
                d.compositors.sort();
                Document::Pseudofunctor(d)
            }
            Document::WitnessBundle(mut d) => {
                normalize_fs(&mut d.e, &mut d.m, &mut d.fact);
                d.k.compositors.sort();
                d.c.compositors.sort();
                Document::WitnessBundle(d)
            }
            Document::FiniteCategory(mut d) => {
                d.comp1.sort();
                Document::FiniteCategory(d)
            }
            Document::OneIdeal(mut d) => {
                d.null_one_cells.sort();
                Document::OneIdeal(d)
            }
            d @ Document::Pseudonatural(_) => d,
        }
    }

    /// Renames the ids of self-contained documents to o0, o1, …, f0, …,
    /// a0, … in declaration order, then normalizes. Documents that refer to
    /// a separate 2-category are only normalized.
    pub fn canonicalize(&self) -> Document {
        match self {
            Document::TwoCategory(d) => Document::TwoCategory(d.renamed()),
            Document::FiniteCategory(d) => Document::FiniteCategory(d.renamed()),
            d => d.clone(),
        }
        .normalized()
    }
}

fn normalize_fs(e: &mut [String], m: &mut [String], fact: &mut [FactRow]) {
    e.sort();
    m.sort();
    fact.sort();
}

/// Records every unknown name so that a document's dangling references are
/// reported together.
struct Lookup<'a> {
    t: &'a TwoCategory,
    missing: RefCell<BTreeSet<String>>,
}

impl<'a> Lookup<'a> {
    fn new(t: &'a TwoCategory) -> Self {
        Lookup { t, missing: RefCell::new(BTreeSet::new()) }
    }

    fn miss(&self, kind: &str, n: &str) {
        self.missing.borrow_mut().insert(format!("{kind} {n}"));
    }

    fn ob(&self, n: &str) -> Ob {
        self.t.obj_by_name(n).unwrap_or_else(|| {
            self.miss("object", n);
            Ob(0)
        })
    }

    fn mor(&self, n: &str) -> Mor {
        self.t.mor_by_name(n).unwrap_or_else(|| {
            self.miss("1-cell", n);
            Mor(0)
        })
    }

    fn cell(&self, n: &str) -> Cell {
        self.t.cell_by_name(n).unwrap_or_else(|| {
            self.miss("2-cell", n);
            Cell(0)
        })
    }

    fn finish<T>(self, x: T) -> Result<T> {
        dangling_error(self.missing.into_inner()).map(|_| x)
    }
}

fn dangling_error(missing: BTreeSet<String>) -> Result<()> {
    if missing.is_empty() {
        return Ok(());
    }
    Err(Error::Input(format!("dangling references: {}", missing.into_iter().collect::<Vec<_>>().join(", "))))
}

fn class_table(l: &Lookup, names: &[String]) -> Vec<bool> {
    let mut v = vec![false; l.t.n_mors()];
    for n in names {
        v[l.mor(n).ix()] = true;
    }
    v
}

fn class_names(t: &TwoCategory, class: &[bool]) -> Vec<String> {
    t.mors().filter(|f| class[f.ix()]).map(|f| t.mor_name(f).to_string()).collect()
}

impl TwoCategoryDoc {
    pub fn from_category(t: &TwoCategory) -> Self {
        let m = |f: Mor| t.mor_name(f).to_string();
        let c = |a: Cell| t.cell_name(a).to_string();
        TwoCategoryDoc {
            objects: t.objects().map(|o| t.obj_name(o).to_string()).collect(),
            one_cells: t
                .mors()
                .map(|f| Decl { id: m(f), src: t.obj_name(t.src(f)).into(), tgt: t.obj_name(t.tgt(f)).into() })
                .collect(),
            comp1: t.comp_entries().into_iter().map(|(g, f, gf)| Comp1 { g: m(g), f: m(f), gf: m(gf) }).collect(),
            id1: t.objects().map(|o| (t.obj_name(o).to_string(), m(t.id1(o)))).collect(),
            two_cells: t.cells_all().map(|a| Decl { id: c(a), src: m(t.dom(a)), tgt: m(t.cod(a)) }).collect(),
            vcomp: t.vcomp_entries().into_iter().map(|(b, a, ba)| VComp { b: c(b), a: c(a), ba: c(ba) }).collect(),
            id2: t.mors().map(|f| (m(f), c(t.id2(f)))).collect(),
            lwhisker: t.lwhisker_entries().into_iter().map(|(h, a, ha)| LWhisker { h: m(h), a: c(a), ha: c(ha) }).collect(),
            rwhisker: t.rwhisker_entries().into_iter().map(|(a, e, ae)| RWhisker { a: c(a), e: m(e), ae: c(ae) }).collect(),
        }
    }

    fn dangling(&self) -> Result<()> {
        let objects: BTreeSet<&str> = self.objects.iter().map(String::as_str).collect();
        let mors: BTreeSet<&str> = self.one_cells.iter().map(|d| d.id.as_str()).collect();
        let cells: BTreeSet<&str> = self.two_cells.iter().map(|d| d.id.as_str()).collect();
        let mut missing = BTreeSet::new();
        let mut need = |set: &BTreeSet<&str>, kind: &str, n: &str| {
            if !set.contains(n) {
                missing.insert(format!("{kind} {n}"));
            }
        };
        for d in &self.one_cells {
            need(&objects, "object", &d.src);
            need(&objects, "object", &d.tgt);
        }
        for d in &self.two_cells {
            need(&mors, "1-cell", &d.src);
            need(&mors, "1-cell", &d.tgt);
        }
        for r in &self.comp1 {
            for n in [&r.g, &r.f, &r.gf] {
                need(&mors, "1-cell", n);
            }
        }
        for (o, f) in &self.id1 {
            need(&objects, "object", o);
            need(&mors, "1-cell", f);
        }
        for r in &self.vcomp {
            for n in [&r.b, &r.a, &r.ba] {
                need(&cells, "2-cell", n);
            }
        }
        for (f, a) in &self.id2 {
            need(&mors, "1-cell", f);
            need(&cells, "2-cell", a);
        }
        for r in &self.lwhisker {
            need(&mors, "1-cell", &r.h);
            need(&cells, "2-cell", &r.a);
            need(&cells, "2-cell", &r.ha);
        }
        for r in &self.rwhisker {
            need(&cells, "2-cell", &r.a);
            need(&mors, "1-cell", &r.e);
            need(&cells, "2-cell", &r.ae);
        }
        dangling_error(missing)
    }

    /// Builds the 2-category; table totality and boundaries are checked by
    /// the builder, the axioms by the validator.
    pub fn build(&self) -> Result<TwoCategory> {
        self.dangling()?;
        let mut b = Builder::new();
        let mut obj = BTreeMap::new();
        for o in &self.objects {
            if obj.insert(o.as_str(), b.object(o)).is_some() {
                return Err(Error::Input(format!("duplicate object {o}")));
            }
        }
        let mut mor = BTreeMap::new();
        for d in &self.one_cells {
            if mor.insert(d.id.as_str(), b.mor(&d.id, obj[d.src.as_str()], obj[d.tgt.as_str()])).is_some() {
                return Err(Error::Input(format!("duplicate 1-cell {}", d.id)));
            }
        }
        let mut cell = BTreeMap::new();
        for d in &self.two_cells {
            if cell.insert(d.id.as_str(), b.cell(&d.id, mor[d.src.as_str()], mor[d.tgt.as_str()])).is_some() {
                return Err(Error::Input(format!("duplicate 2-cell {}", d.id)));
            }
        }
        for r in &self.comp1 {
            b.comp(mor[r.g.as_str()], mor[r.f.as_str()], mor[r.gf.as_str()]);
        }
        for (o, f) in &self.id1 {
            b.id1(obj[o.as_str()], mor[f.as_str()]);
        }
        for r in &self.vcomp {
            b.vcomp(cell[r.b.as_str()], cell[r.a.as_str()], cell[r.ba.as_str()]);
        }
        for (f, a) in &self.id2 {
            b.id2(mor[f.as_str()], cell[a.as_str()]);
        }
        for r in &self.lwhisker {
            b.lwhisker(mor[r.h.as_str()], cell[r.a.as_str()], cell[r.ha.as_str()]);
        }
        for r in &self.rwhisker {
            b.rwhisker(cell[r.a.as_str()], mor[r.e.as_str()], cell[r.ae.as_str()]);
        }
        b.build()
    }

    fn renamed(&self) -> Self {
        let ren = |names: Vec<&String>, p: &str| -> BTreeMap<String, String> {
            names.into_iter().enumerate().map(|(i, n)| (n.clone(), format!("{p}{i}"))).collect()
        };
        let o = ren(self.objects.iter().collect(), "o");
        let f = ren(self.one_cells.iter().map(|d| &d.id).collect(), "f");
        let a = ren(self.two_cells.iter().map(|d| &d.id).collect(), "a");
        let (o, f, a) = (|n: &String| o[n].clone(), |n: &String| f[n].clone(), |n: &String| a[n].clone());
        TwoCategoryDoc {
            objects: self.objects.iter().map(o).collect(),
            one_cells: self.one_cells.iter().map(|d| Decl { id: f(&d.id), src: o(&d.src), tgt: o(&d.tgt) }).collect(),
            comp1: self.comp1.iter().map(|r| Comp1 { g: f(&r.g), f: f(&r.f), gf: f(&r.gf) }).collect(),
            id1: self.id1.iter().map(|(x, y)| (o(x), f(y))).collect(),
            two_cells: self.two_cells.iter().map(|d| Decl { id: a(&d.id), src: f(&d.src), tgt: f(&d.tgt) }).collect(),
            vcomp: self.vcomp.iter().map(|r| VComp { b: a(&r.b), a: a(&r.a), ba: a(&r.ba) }).collect(),
            id2: self.id2.iter().map(|(x, y)| (f(x), a(y))).collect(),
            lwhisker: self.lwhisker.iter().map(|r| LWhisker { h: f(&r.h), a: a(&r.a), ha: a(&r.ha) }).collect(),
            rwhisker: self.rwhisker.iter().map(|r| RWhisker { a: a(&r.a), e: f(&r.e), ae: a(&r.ae) }).collect(),
        }
    }
}

impl IdealDoc {
    pub fn from_ideal(t: &TwoCategory, n: &TwoIdeal) -> Self {
        let m = |f: Mor| t.mor_name(f).to_string();
        IdealDoc {
            null_one_cells: n.null_mors(t).map(m).collect(),
            null_two_cells: n.null_cells(t).map(|a| t.cell_name(a).to_string()).collect(),
            replacement: n
                .replacement_entries()
                .into_iter()
                .map(|((a, x, b), (tilde, nu))| Replacement { a: m(a), n: m(x), b: m(b), tilde: m(tilde), nu: t.cell_name(nu).into() })
                .collect(),
        }
    }

    pub fn resolve(&self, t: &TwoCategory) -> Result<TwoIdeal> {
        let l = Lookup::new(t);
        let mors: Vec<Mor> = self.null_one_cells.iter().map(|n| l.mor(n)).collect();
        let cells: Vec<Cell> = self.null_two_cells.iter().map(|n| l.cell(n)).collect();
        let rep: Vec<_> =
            self.replacement.iter().map(|r| ((l.mor(&r.a), l.mor(&r.n), l.mor(&r.b)), (l.mor(&r.tilde), l.cell(&r.nu)))).collect();
        l.finish(())?;
        TwoIdeal::new(t, mors, cells, rep)
    }
}

fn fact_rows(t: &TwoCategory, fs: &FactorizationSystem) -> Vec<FactRow> {
    t.mors()
        .zip(&fs.fact)
        .map(|(f, x)| FactRow {
            f: t.mor_name(f).into(),
            e: t.mor_name(x.left).into(),
            m: t.mor_name(x.right).into(),
            theta: t.cell_name(x.theta).into(),
        })
        .collect()
}

fn resolve_fs(t: &TwoCategory, e: &[String], m: &[String], fact: &[FactRow]) -> Result<FactorizationSystem> {
    let l = Lookup::new(t);
    let (e, m) = (class_table(&l, e), class_table(&l, m));
    let mut table: Vec<Option<Factorization>> = vec![None; t.n_mors()];
    for r in fact {
        table[l.mor(&r.f).ix()] = Some(Factorization { left: l.mor(&r.e), right: l.mor(&r.m), theta: l.cell(&r.theta) });
    }
    l.finish(())?;
    let unfactored: Vec<&str> = t.mors().filter(|f| table[f.ix()].is_none()).map(|f| t.mor_name(f)).collect();
    if !unfactored.is_empty() {
        return Err(Error::Input(format!("fact: no entry for {}", unfactored.join(", "))));
    }
    Ok(FactorizationSystem { e, m, fact: table.into_iter().map(Option::unwrap).collect() })
}

impl FsDoc {
    pub fn from_fs(t: &TwoCategory, fs: &FactorizationSystem) -> Self {
        FsDoc { e: class_names(t, &fs.e), m: class_names(t, &fs.m), fact: fact_rows(t, fs) }
    }

    pub fn resolve(&self, t: &TwoCategory) -> Result<FactorizationSystem> {
        resolve_fs(t, &self.e, &self.m, &self.fact)
    }
}

impl FunctorDoc {
    pub fn from_functor(s: &TwoCategory, t: &TwoCategory, f: &PseudoFunctor) -> Self {
        let mut compositors: Vec<Compositor> = f
            .comp
            .iter()
            .map(|(&(g, h), &phi)| Compositor { g: s.mor_name(g).into(), f: s.mor_name(h).into(), phi: t.cell_name(phi).into() })
            .collect();
        compositors.sort();
        FunctorDoc {
            objects: s.objects().map(|x| (s.obj_name(x).to_string(), t.obj_name(f.ob(x)).to_string())).collect(),
            one_cells: s.mors().map(|x| (s.mor_name(x).to_string(), t.mor_name(f.m(x)).to_string())).collect(),
            two_cells: s.cells_all().map(|x| (s.cell_name(x).to_string(), t.cell_name(f.c(x)).to_string())).collect(),
            compositors,
        }
    }

    /// Tables must be total on `s`; every composable pair needs a compositor.
    pub fn resolve(&self, s: &TwoCategory, t: &TwoCategory) -> Result<PseudoFunctor> {
        let (ls, lt) = (Lookup::new(s), Lookup::new(t));
        let mut obj = vec![None; s.n_objects()];
        for (x, y) in &self.objects {
            obj[ls.ob(x).ix()] = Some(lt.ob(y));
        }
        let mut mor = vec![None; s.n_mors()];
        for (x, y) in &self.one_cells {
            mor[ls.mor(x).ix()] = Some(lt.mor(y));
        }
        let mut cell = vec![None; s.n_cells()];
        for (x, y) in &self.two_cells {
            cell[ls.cell(x).ix()] = Some(lt.cell(y));
        }
        let comp = self.compositors.iter().map(|r| ((ls.mor(&r.g), ls.mor(&r.f)), lt.cell(&r.phi))).collect();
        ls.finish(())?;
        lt.finish(())?;
        let total = |what: &str, n: usize, has: &dyn Fn(usize) -> bool, name: &dyn Fn(usize) -> String| -> Result<()> {
            let gaps: Vec<String> = (0..n).filter(|&i| !has(i)).map(name).collect();
            if gaps.is_empty() {
                Ok(())
            } else {
                Err(Error::Input(format!("{what}: no image for {}", gaps.join(", "))))
            }
        };
        total("objects", s.n_objects(), &|i| obj[i].is_some(), &|i| s.obj_name(Ob(i as u32)).into())?;
        total("one_cells", s.n_mors(), &|i| mor[i].is_some(), &|i| s.mor_name(Mor(i as u32)).into())?;
        total("two_cells", s.n_cells(), &|i| cell[i].is_some(), &|i| s.cell_name(Cell(i as u32)).into())?;
        let f = PseudoFunctor {
            obj: obj.into_iter().map(Option::unwrap).collect(),
            mor: mor.into_iter().map(Option::unwrap).collect(),
            cell: cell.into_iter().map(Option::unwrap).collect(),
            comp,
        };
        let gaps: Vec<String> = s
            .comp_entries()
            .into_iter()
            .filter(|(g, h, _)| !f.comp.contains_key(&(*g, *h)))
            .map(|(g, h, _)| format!("({}, {})", s.mor_name(g), s.mor_name(h)))
            .collect();
        if !gaps.is_empty() {
            return Err(Error::Input(format!("compositors: missing {}", gaps.join(", "))));
        }
        Ok(f)
    }
}

impl NaturalDoc {
    pub fn from_natural(s: &TwoCategory, t: &TwoCategory, sigma: &PseudoNatural) -> Self {
        NaturalDoc {
            components: s.objects().map(|x| (s.obj_name(x).to_string(), t.mor_name(sigma.component[x.ix()]).to_string())).collect(),
            structure: s.mors().map(|h| (s.mor_name(h).to_string(), t.cell_name(sigma.structure[h.ix()]).to_string())).collect(),
        }
    }

    pub fn resolve(&self, s: &TwoCategory, t: &TwoCategory) -> Result<PseudoNatural> {
        let (ls, lt) = (Lookup::new(s), Lookup::new(t));
        let mut component = vec![None; s.n_objects()];
        for (x, y) in &self.components {
            component[ls.ob(x).ix()] = Some(lt.mor(y));
        }
        let mut structure = vec![None; s.n_mors()];
        for (x, y) in &self.structure {
            structure[ls.mor(x).ix()] = Some(lt.cell(y));
        }
        ls.finish(())?;
        lt.finish(())?;
        if let Some(i) = component.iter().position(Option::is_none) {
            return Err(Error::Input(format!("components: no entry for {}", s.obj_name(Ob(i as u32)))));
        }
        if let Some(i) = structure.iter().position(Option::is_none) {
            return Err(Error::Input(format!("structure: no entry for {}", s.mor_name(Mor(i as u32)))));
        }
        Ok(PseudoNatural {
            component: component.into_iter().map(Option::unwrap).collect(),
            structure: structure.into_iter().map(Option::unwrap).collect(),
        })
    }
}

impl BundleDoc {
    pub fn from_bundle(t: &TwoCategory, b: &ExactBundle) -> Self {
        let (q, s) = (&b.quotients.cat, &b.subobjects.cat);
        BundleDoc {
            e: class_names(t, &b.fs.e),
            m: class_names(t, &b.fs.m),
            fact: fact_rows(t, &b.fs),
            k: FunctorDoc::from_functor(q, s, &b.k),
            c: FunctorDoc::from_functor(s, q, &b.c),
            eta: NaturalDoc::from_natural(s, s, &b.eta),
            epsilon: NaturalDoc::from_natural(q, q, &b.eps),
        }
    }

    pub fn resolve(&self, t: &TwoCategory) -> Result<ExactBundle> {
        let fs = resolve_fs(t, &self.e, &self.m, &self.fact)?;
        let quotients: ArrowTwoCategory = arrow_subcat(t, &fs.e)?;
        let subobjects = arrow_subcat(t, &fs.m)?;
        let (q, s) = (&quotients.cat, &subobjects.cat);
        Ok(ExactBundle {
            dom: dom_projection(t, &quotients)?,
            cod: cod_projection(t, &subobjects)?,
            k: self.k.resolve(q, s)?,
            c: self.c.resolve(s, q)?,
            eta: self.eta.resolve(s, s)?,
            eps: self.epsilon.resolve(q, q)?,
            fs,
            quotients,
            subobjects,
        })
    }
}

impl FiniteCategoryDoc {
    pub fn from_category(c: &FiniteCategory) -> Self {
        let n = c.n_mors();
        let m = |f: usize| c.mor_names[f].clone();
        let mut comp1 = Vec::new();
        for g in 0..n {
            for f in 0..n {
                if c.src[g] == c.tgt[f] {
                    comp1.push(Comp1 { g: m(g), f: m(f), gf: m(c.c(g, f)) });
                }
            }
        }
        FiniteCategoryDoc {
            objects: c.obj_names.clone(),
            one_cells: (0..n)
                .map(|f| Decl { id: m(f), src: c.obj_names[c.src[f]].clone(), tgt: c.obj_names[c.tgt[f]].clone() })
                .collect(),
            comp1,
            id1: c.obj_names.iter().zip(&c.id).map(|(o, &f)| (o.clone(), m(f))).collect(),
        }
    }

    fn dangling(&self) -> Result<()> {
        let objects: BTreeSet<&str> = self.objects.iter().map(String::as_str).collect();
        let mors: BTreeSet<&str> = self.one_cells.iter().map(|d| d.id.as_str()).collect();
        let mut missing = BTreeSet::new();
        for d in &self.one_cells {
            for o in [&d.src, &d.tgt] {
                if !objects.contains(o.as_str()) {
                    missing.insert(format!("object {o}"));
                }
            }
        }
        let named = self.comp1.iter().flat_map(|r| [&r.g, &r.f, &r.gf]).chain(self.id1.values());
        for f in named {
            if !mors.contains(f.as_str()) {
                missing.insert(format!("1-cell {f}"));
            }
        }
        for o in self.id1.keys() {
            if !objects.contains(o.as_str()) {
                missing.insert(format!("object {o}"));
            }
        }
        dangling_error(missing)
    }

    pub fn build(&self) -> Result<FiniteCategory> {
        self.dangling()?;
        let obj: BTreeMap<&str, usize> = self.objects.iter().enumerate().map(|(i, o)| (o.as_str(), i)).collect();
        let mor: BTreeMap<&str, usize> = self.one_cells.iter().enumerate().map(|(i, d)| (d.id.as_str(), i)).collect();
        let mors = self.one_cells.iter().map(|d| (d.id.clone(), obj[d.src.as_str()], obj[d.tgt.as_str()])).collect();
        let mut id = Vec::with_capacity(self.objects.len());
        for o in &self.objects {
            let f = self.id1.get(o).ok_or_else(|| Error::Input(format!("id1: no identity for {o}")))?;
            id.push(mor[f.as_str()]);
        }
        let table: BTreeMap<(usize, usize), usize> =
            self.comp1.iter().map(|r| ((mor[r.g.as_str()], mor[r.f.as_str()]), mor[r.gf.as_str()])).collect();
        let mut gap = None;
        let c = FiniteCategory::new(self.objects.clone(), mors, id, |g, f| {
            table.get(&(g, f)).copied().unwrap_or_else(|| {
                gap.get_or_insert((g, f));
                usize::MAX
            })
        });
        if let Some((g, f)) = gap {
            return Err(Error::Input(format!("comp1: no entry for ({}, {})", self.one_cells[g].id, self.one_cells[f].id)));
        }
        c
    }

    fn renamed(&self) -> Self {
        let o: BTreeMap<&String, String> = self.objects.iter().enumerate().map(|(i, n)| (n, format!("o{i}"))).collect();
        let f: BTreeMap<&String, String> = self.one_cells.iter().enumerate().map(|(i, d)| (&d.id, format!("f{i}"))).collect();
        FiniteCategoryDoc {
            objects: self.objects.iter().map(|n| o[n].clone()).collect(),
            one_cells: self.one_cells.iter().map(|d| Decl { id: f[&d.id].clone(), src: o[&d.src].clone(), tgt: o[&d.tgt].clone() }).collect(),
            comp1: self.comp1.iter().map(|r| Comp1 { g: f[&r.g].clone(), f: f[&r.f].clone(), gf: f[&r.gf].clone() }).collect(),
            id1: self.id1.iter().map(|(x, y)| (o[x].clone(), f[y].clone())).collect(),
        }
    }
}

impl OneIdealDoc {
    pub fn from_ideal(c: &FiniteCategory, i: &OneIdeal) -> Self {
        OneIdealDoc { null_one_cells: (0..c.n_mors()).filter(|&f| i.null[f]).map(|f| c.mor_names[f].clone()).collect() }
    }

    pub fn resolve(&self, c: &FiniteCategory) -> Result<OneIdeal> {
        let mut null = vec![false; c.n_mors()];
        let mut missing = BTreeSet::new();
        for n in &self.null_one_cells {
            match c.mor_by_name(n) {
                Some(f) => null[f] = true,
                None => {
                    missing.insert(format!("1-cell {n}"));
                }
            }
        }
        dangling_error(missing)?;
        Ok(OneIdeal { null })
    }
}

pub fn read(path: &std::path::Path) -> Result<Document> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
    Document::parse(&text).map_err(|e| match e {
        Error::Input(m) => Error::Input(format!("{}: {m}", path.display())),
        e => e,
    })
}

pub fn two_category(doc: Document) -> Result<TwoCategory> {
    match doc {
        Document::TwoCategory(d) => d.build(),
        d => Err(Error::Input(format!("expected a two_category document, found {:?}", d.kind()))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;

    #[test]
    fn round_trip_and_idempotence() {
        for name in gen::FIXTURES {
            let t = gen::fixture(name).unwrap();
            let doc = Document::TwoCategory(TwoCategoryDoc::from_category(&t));
            let text = doc.serialize();
            assert!(text.ends_with("}\n"));
            let back = Document::parse(&text).unwrap();
            assert_eq!(back.serialize(), text, "{name}");
            assert_eq!(two_category(back).unwrap(), t, "{name}");
            let c = doc.canonicalize();
            assert_eq!(c.canonicalize(), c, "{name}");
        }
    }

    #[test]
    fn dangling_names_are_all_listed() {
        let t = gen::fixture("pb1").unwrap();
        let mut d = TwoCategoryDoc::from_category(&t);
        d.comp1[0].gf = "f9".into();
        d.id2.insert("f8".into(), "a7".into());
        let text = Document::TwoCategory(d).serialize();
        let Err(Error::Input(msg)) = Document::parse(&text) else { panic!("expected an input error") };
        assert!(msg.contains("f9") && msg.contains("f8") && msg.contains("a7"), "{msg}");
    }

    #[test]
    fn schema_is_strict() {
        let bad = r#"{"version": 1, "kind": "one_ideal", "null_one_cells": [], "extra": 0}"#;
        let Err(Error::Input(msg)) = Document::parse(bad) else { panic!() };
        assert!(msg.contains("extra") && msg.contains("line"), "{msg}");
        assert!(Document::parse(r#"{"version": 2, "kind": "one_ideal", "null_one_cells": []}"#).is_err());
        assert!(Document::parse(r#"{"kind": "one_ideal", "null_one_cells": []}"#).is_err());
        let Err(Error::Input(msg)) = Document::parse("{\n  \"version\": 1,\n  oops\n}") else { panic!() };
        assert!(msg.starts_with("line 3"), "{msg}");
    }

    #[test]
    fn ideals_and_systems_resolve() {
        let t = gen::fixture("pb2").unwrap();
        let n = crate::ideal::zero_ideal(&t).unwrap();
        let d = Document::TwoIdeal(IdealDoc::from_ideal(&t, &n));
        let Document::TwoIdeal(back) = Document::parse(&d.serialize()).unwrap() else { panic!() };
        assert_eq!(back.resolve(&t).unwrap(), n);
        let fs = FactorizationSystem::image(&t).unwrap();
        let Document::FactorizationSystem(back) = Document::parse(&Document::FactorizationSystem(FsDoc::from_fs(&t, &fs)).serialize()).unwrap()
        else {
            panic!()
        };
        assert_eq!(back.resolve(&t).unwrap(), fs);
    }

    #[test]
    fn bundles_resolve() {
        let t = gen::fixture("pb1").unwrap();
        let n = crate::ideal::zero_ideal(&t).unwrap();
        let b = crate::exact::fs_from_ideal(&t, &n, &Default::default()).unwrap();
        let text = Document::WitnessBundle(BundleDoc::from_bundle(&t, &b)).serialize();
        let Document::WitnessBundle(d) = Document::parse(&text).unwrap() else { panic!() };
        let back = d.resolve(&t).unwrap();
        assert_eq!(back.k, b.k);
        assert_eq!(back.eps, b.eps);
    }

    #[test]
    fn finite_categories_round_trip() {
        let c = gen::partial_bijections(2);
        let d = Document::FiniteCategory(FiniteCategoryDoc::from_category(&c));
        let Document::FiniteCategory(back) = Document::parse(&d.serialize()).unwrap() else { panic!() };
        assert_eq!(back.build().unwrap(), c);
    }
}
