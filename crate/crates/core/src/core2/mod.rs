//! Finite strict 2-categories presented by explicit tables.
//!
//! Cells are addressed by dense indices ([`Ob`], [`Mor`], [`Cell`]) in
//! declaration order, which is also the iteration order of every search.

mod paste;
mod predicates;
mod validate;

pub use paste::Paste;
pub use predicates::{find_equivalence, is_cofaithful, is_equivalence, is_faithful, EquivalenceWitness};
pub use validate::{replay_two_category, validate_two_category};

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Ob(pub u32);

/// A 1-cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Mor(pub u32);

/// A 2-cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cell(pub u32);

impl Ob {
    pub fn ix(self) -> usize {
        self.0 as usize
    }
}
impl Mor {
    pub fn ix(self) -> usize {
        self.0 as usize
    }
}
impl Cell {
    pub fn ix(self) -> usize {
        self.0 as usize
    }
}

const NONE: u32 = u32::MAX;

/// A cell of any dimension, used in counterexample tuples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Id {
    O(Ob),
    M(Mor),
    C(Cell),
}

impl TwoCategory {
    pub fn id_name(&self, x: Id) -> String {
        match x {
            Id::O(o) => self.obj_name(o).to_string(),
            Id::M(f) => self.mor_name(f).to_string(),
            Id::C(a) => self.cell_name(a).to_string(),
        }
    }

    pub fn id_names(&self, xs: &[Id]) -> Vec<String> {
        xs.iter().map(|&x| self.id_name(x)).collect()
    }

    /// Resolves names against a kind signature such as `"MCM"`
    /// (O = object, M = 1-cell, C = 2-cell).
    pub fn resolve_ids(&self, sig: &str, names: &[String]) -> Result<Vec<Id>> {
        if sig.len() != names.len() {
            return Err(Error::Input(format!("tuple has {} entries, expected {}", names.len(), sig.len())));
        }
        sig.chars()
            .zip(names)
            .map(|(k, n)| {
                let r = match k {
                    'O' => self.obj_by_name(n).map(Id::O),
                    'M' => self.mor_by_name(n).map(Id::M),
                    _ => self.cell_by_name(n).map(Id::C),
                };
                r.ok_or_else(|| Error::Input(format!("unknown id {n}")))
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoCategory {
    obj_names: Vec<String>,
    mor_names: Vec<String>,
    mor_src: Vec<Ob>,
    mor_tgt: Vec<Ob>,
    cell_names: Vec<String>,
    cell_src: Vec<Mor>,
    cell_tgt: Vec<Mor>,
    comp: Vec<u32>,
    id1: Vec<Mor>,
    vcomp: FxHashMap<(Cell, Cell), Cell>,
    id2: Vec<Cell>,
    lwhisker: FxHashMap<(Mor, Cell), Cell>,
    rwhisker: FxHashMap<(Cell, Mor), Cell>,
    // derived indexes
    hom: Vec<Vec<Mor>>,
    between: FxHashMap<(Mor, Mor), Vec<Cell>>,
    isos: FxHashMap<(Mor, Mor), Vec<Cell>>,
    inverse: Vec<Option<Cell>>,
    out_mors: Vec<Vec<Mor>>,
    in_mors: Vec<Vec<Mor>>,
    out_cells: Vec<Vec<Cell>>,
    obj_ix: FxHashMap<String, Ob>,
    mor_ix: FxHashMap<String, Mor>,
    cell_ix: FxHashMap<String, Cell>,
}

/// Incremental construction of a [`TwoCategory`]; `build` checks
/// referential integrity, boundaries and totality of every table.
#[derive(Debug, Clone, Default)]
pub struct Builder {
    obj_names: Vec<String>,
    mors: Vec<(String, Ob, Ob)>,
    cells: Vec<(String, Mor, Mor)>,
    comp: Vec<(Mor, Mor, Mor)>,
    id1: Vec<(Ob, Mor)>,
    vcomp: Vec<(Cell, Cell, Cell)>,
    id2: Vec<(Mor, Cell)>,
    lwhisker: Vec<(Mor, Cell, Cell)>,
    rwhisker: Vec<(Cell, Mor, Cell)>,
}

impl Builder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn object(&mut self, name: impl Into<String>) -> Ob {
        self.obj_names.push(name.into());
        Ob(self.obj_names.len() as u32 - 1)
    }

    pub fn mor(&mut self, name: impl Into<String>, src: Ob, tgt: Ob) -> Mor {
        self.mors.push((name.into(), src, tgt));
        Mor(self.mors.len() as u32 - 1)
    }

    pub fn cell(&mut self, name: impl Into<String>, src: Mor, tgt: Mor) -> Cell {
        self.cells.push((name.into(), src, tgt));
        Cell(self.cells.len() as u32 - 1)
    }

    pub fn comp(&mut self, g: Mor, f: Mor, gf: Mor) {
        self.comp.push((g, f, gf));
    }

    pub fn id1(&mut self, a: Ob, f: Mor) {
        self.id1.push((a, f));
    }

    pub fn vcomp(&mut self, b: Cell, a: Cell, ba: Cell) {
        self.vcomp.push((b, a, ba));
    }

    /// Replaces any existing vcomp entry for (b, a).
    pub fn override_vcomp(&mut self, b: Cell, a: Cell, ba: Cell) {
        self.vcomp.retain(|e| (e.0, e.1) != (b, a));
        self.vcomp.push((b, a, ba));
    }

    pub fn id2(&mut self, f: Mor, a: Cell) {
        self.id2.push((f, a));
    }

    pub fn lwhisker(&mut self, h: Mor, a: Cell, ha: Cell) {
        self.lwhisker.push((h, a, ha));
    }

    pub fn rwhisker(&mut self, a: Cell, e: Mor, ae: Cell) {
        self.rwhisker.push((a, e, ae));
    }

    pub fn mor_src(&self, f: Mor) -> Ob {
        self.mors[f.ix()].1
    }

    pub fn mor_tgt(&self, f: Mor) -> Ob {
        self.mors[f.ix()].2
    }

    pub fn build(self) -> Result<TwoCategory> {
        let mut errs: Vec<String> = Vec::new();
        let n0 = self.obj_names.len();
        let n1 = self.mors.len();
        let n2 = self.cells.len();
        let ok_ob = |o: Ob| o.ix() < n0;
        let ok_mor = |m: Mor| m.ix() < n1;
        let ok_cell = |c: Cell| c.ix() < n2;

        let mut mor_src = Vec::with_capacity(n1);
        let mut mor_tgt = Vec::with_capacity(n1);
        for (name, s, t) in &self.mors {
            if !ok_ob(*s) || !ok_ob(*t) {
                errs.push(format!("1-cell {name}: dangling endpoint"));
            }
            mor_src.push(*s);
            mor_tgt.push(*t);
        }
        let mut cell_src = Vec::with_capacity(n2);
        let mut cell_tgt = Vec::with_capacity(n2);
        for (name, s, t) in &self.cells {
            if !ok_mor(*s) || !ok_mor(*t) {
                errs.push(format!("2-cell {name}: dangling boundary"));
            } else if mor_src[s.ix()] != mor_src[t.ix()] || mor_tgt[s.ix()] != mor_tgt[t.ix()] {
                errs.push(format!("2-cell {name}: boundary 1-cells not parallel"));
            }
            cell_src.push(*s);
            cell_tgt.push(*t);
        }
        if !errs.is_empty() {
            return Err(Error::Input(errs.join("; ")));
        }
        let mn = |m: Mor| self.mors[m.ix()].0.as_str();
        let cn = |c: Cell| self.cells[c.ix()].0.as_str();

        let mut comp = vec![NONE; n1 * n1];
        for &(g, f, gf) in &self.comp {
            if !ok_mor(g) || !ok_mor(f) || !ok_mor(gf) {
                errs.push("comp1 entry with dangling 1-cell".into());
                continue;
            }
            if mor_src[g.ix()] != mor_tgt[f.ix()] {
                errs.push(format!("comp1 ({}, {}): not composable", mn(g), mn(f)));
            } else if mor_src[gf.ix()] != mor_src[f.ix()] || mor_tgt[gf.ix()] != mor_tgt[g.ix()] {
                errs.push(format!("comp1 ({}, {}) -> {}: wrong boundary", mn(g), mn(f), mn(gf)));
            }
            let slot = &mut comp[g.ix() * n1 + f.ix()];
            if *slot != NONE && *slot != gf.0 {
                errs.push(format!("comp1 ({}, {}): conflicting entries", mn(g), mn(f)));
            }
            *slot = gf.0;
        }
        for g in 0..n1 {
            for f in 0..n1 {
                if mor_src[g] == mor_tgt[f] && comp[g * n1 + f] == NONE {
                    errs.push(format!("comp1 missing ({}, {})", mn(Mor(g as u32)), mn(Mor(f as u32))));
                }
            }
        }

        let mut id1 = vec![Mor(NONE); n0];
        for &(a, f) in &self.id1 {
            if !ok_ob(a) || !ok_mor(f) {
                errs.push("id1 entry with dangling id".into());
                continue;
            }
            if mor_src[f.ix()] != a || mor_tgt[f.ix()] != a {
                errs.push(format!("id1 of {}: {} is not an endo-1-cell", self.obj_names[a.ix()], mn(f)));
            }
            id1[a.ix()] = f;
        }
        for (a, f) in id1.iter().enumerate() {
            if f.0 == NONE {
                errs.push(format!("id1 missing for {}", self.obj_names[a]));
            }
        }

        let mut vcomp = FxHashMap::default();
        for &(b, a, ba) in &self.vcomp {
            if !ok_cell(b) || !ok_cell(a) || !ok_cell(ba) {
                errs.push("vcomp entry with dangling 2-cell".into());
                continue;
            }
            if cell_src[b.ix()] != cell_tgt[a.ix()] {
                errs.push(format!("vcomp ({}, {}): not composable", cn(b), cn(a)));
            } else if cell_src[ba.ix()] != cell_src[a.ix()] || cell_tgt[ba.ix()] != cell_tgt[b.ix()] {
                errs.push(format!("vcomp ({}, {}) -> {}: wrong boundary", cn(b), cn(a), cn(ba)));
            }
            if vcomp.insert((b, a), ba).is_some_and(|old| old != ba) {
                errs.push(format!("vcomp ({}, {}): conflicting entries", cn(b), cn(a)));
            }
        }
        let mut id2 = vec![Cell(NONE); n1];
        for &(f, a) in &self.id2 {
            if !ok_mor(f) || !ok_cell(a) {
                errs.push("id2 entry with dangling id".into());
                continue;
            }
            if cell_src[a.ix()] != f || cell_tgt[a.ix()] != f {
                errs.push(format!("id2 of {}: {} has wrong boundary", mn(f), cn(a)));
            }
            id2[f.ix()] = a;
        }
        for (f, a) in id2.iter().enumerate() {
            if a.0 == NONE {
                errs.push(format!("id2 missing for {}", mn(Mor(f as u32))));
            }
        }
        let compose = |g: Mor, f: Mor| -> Option<Mor> {
            let v = comp[g.ix() * n1 + f.ix()];
            (v != NONE).then_some(Mor(v))
        };
        let mut lwhisker = FxHashMap::default();
        for &(h, a, ha) in &self.lwhisker {
            if !ok_mor(h) || !ok_cell(a) || !ok_cell(ha) {
                errs.push("lwhisker entry with dangling id".into());
                continue;
            }
            match (compose(h, cell_src[a.ix()]), compose(h, cell_tgt[a.ix()])) {
                (Some(s), Some(t)) if cell_src[ha.ix()] == s && cell_tgt[ha.ix()] == t => {}
                (Some(_), Some(_)) => errs.push(format!("lwhisker ({}, {}) -> {}: wrong boundary", mn(h), cn(a), cn(ha))),
                _ => errs.push(format!("lwhisker ({}, {}): not composable", mn(h), cn(a))),
            }
            lwhisker.insert((h, a), ha);
        }
        let mut rwhisker = FxHashMap::default();
        for &(a, e, ae) in &self.rwhisker {
            if !ok_mor(e) || !ok_cell(a) || !ok_cell(ae) {
                errs.push("rwhisker entry with dangling id".into());
                continue;
            }
            match (compose(cell_src[a.ix()], e), compose(cell_tgt[a.ix()], e)) {
                (Some(s), Some(t)) if cell_src[ae.ix()] == s && cell_tgt[ae.ix()] == t => {}
                (Some(_), Some(_)) => errs.push(format!("rwhisker ({}, {}) -> {}: wrong boundary", cn(a), mn(e), cn(ae))),
                _ => errs.push(format!("rwhisker ({}, {}): not composable", cn(a), mn(e))),
            }
            rwhisker.insert((a, e), ae);
        }
        if !errs.is_empty() {
            return Err(Error::Input(errs.join("; ")));
        }
        // totality of the 2-cell tables
        let mut by_src: Vec<Vec<Cell>> = vec![Vec::new(); n1];
        let mut by_tgt: Vec<Vec<Cell>> = vec![Vec::new(); n1];
        for c in 0..n2 {
            by_src[cell_src[c].ix()].push(Cell(c as u32));
            by_tgt[cell_tgt[c].ix()].push(Cell(c as u32));
        }
        for f in 0..n1 {
            for &a in &by_tgt[f] {
                for &b in &by_src[f] {
                    if !vcomp.contains_key(&(b, a)) {
                        errs.push(format!("vcomp missing ({}, {})", cn(b), cn(a)));
                    }
                }
            }
        }
        for c in 0..n2 {
            let a = Cell(c as u32);
            let f = cell_src[c];
            for h in 0..n1 {
                let h = Mor(h as u32);
                if mor_src[h.ix()] == mor_tgt[f.ix()] && !lwhisker.contains_key(&(h, a)) {
                    errs.push(format!("lwhisker missing ({}, {})", mn(h), cn(a)));
                }
                if mor_tgt[h.ix()] == mor_src[f.ix()] && !rwhisker.contains_key(&(a, h)) {
                    errs.push(format!("rwhisker missing ({}, {})", cn(a), mn(h)));
                }
            }
        }
        if !errs.is_empty() {
            errs.truncate(50);
            return Err(Error::Input(errs.join("; ")));
        }

        let mut t = TwoCategory {
            obj_names: self.obj_names,
            mor_names: self.mors.into_iter().map(|m| m.0).collect(),
            mor_src,
            mor_tgt,
            cell_names: self.cells.into_iter().map(|c| c.0).collect(),
            cell_src,
            cell_tgt,
            comp,
            id1,
            vcomp,
            id2,
            lwhisker,
            rwhisker,
            hom: Vec::new(),
            between: FxHashMap::default(),
            isos: FxHashMap::default(),
            inverse: Vec::new(),
            out_mors: Vec::new(),
            in_mors: Vec::new(),
            out_cells: Vec::new(),
            obj_ix: FxHashMap::default(),
            mor_ix: FxHashMap::default(),
            cell_ix: FxHashMap::default(),
        };
        t.index()?;
        Ok(t)
    }
}

impl TwoCategory {
    fn index(&mut self) -> Result<()> {
        let n0 = self.obj_names.len();
        let mut errs = Vec::new();
        self.obj_ix.clear();
        for (i, n) in self.obj_names.iter().enumerate() {
            if self.obj_ix.insert(n.clone(), Ob(i as u32)).is_some() {
                errs.push(format!("duplicate object id {n}"));
            }
        }
        self.mor_ix.clear();
        for (i, n) in self.mor_names.iter().enumerate() {
            if self.mor_ix.insert(n.clone(), Mor(i as u32)).is_some() {
                errs.push(format!("duplicate 1-cell id {n}"));
            }
        }
        self.cell_ix.clear();
        for (i, n) in self.cell_names.iter().enumerate() {
            if self.cell_ix.insert(n.clone(), Cell(i as u32)).is_some() {
                errs.push(format!("duplicate 2-cell id {n}"));
            }
        }
        if !errs.is_empty() {
            return Err(Error::Input(errs.join("; ")));
        }
        self.hom = vec![Vec::new(); n0 * n0];
        for f in 0..self.mor_names.len() {
            let (s, t) = (self.mor_src[f], self.mor_tgt[f]);
            self.hom[s.ix() * n0 + t.ix()].push(Mor(f as u32));
        }
        self.out_mors = vec![Vec::new(); n0];
        self.in_mors = vec![Vec::new(); n0];
        for a in 0..n0 {
            for b in 0..n0 {
                self.out_mors[a].extend_from_slice(&self.hom[a * n0 + b]);
                self.in_mors[a].extend_from_slice(&self.hom[b * n0 + a]);
            }
        }
        self.out_cells = vec![Vec::new(); self.mor_names.len()];
        for c in 0..self.cell_names.len() {
            self.out_cells[self.cell_src[c].ix()].push(Cell(c as u32));
        }
        self.between.clear();
        for c in 0..self.cell_names.len() {
            self.between.entry((self.cell_src[c], self.cell_tgt[c])).or_default().push(Cell(c as u32));
        }
        self.inverse = (0..self.cell_names.len())
            .map(|c| {
                let a = Cell(c as u32);
                let (s, t) = (self.cell_src[c], self.cell_tgt[c]);
                self.between.get(&(t, s)).and_then(|cands| {
                    cands.iter().copied().find(|&b| {
                        self.vcomp.get(&(b, a)) == Some(&self.id2[s.ix()])
                            && self.vcomp.get(&(a, b)) == Some(&self.id2[t.ix()])
                    })
                })
            })
            .collect();
        self.isos.clear();
        for (k, v) in &self.between {
            let iv: Vec<Cell> = v.iter().copied().filter(|c| self.inverse[c.ix()].is_some()).collect();
            if !iv.is_empty() {
                self.isos.insert(*k, iv);
            }
        }
        Ok(())
    }

    // ---- sizes and names ----

    pub fn n_objects(&self) -> usize {
        self.obj_names.len()
    }
    pub fn n_mors(&self) -> usize {
        self.mor_names.len()
    }
    pub fn n_cells(&self) -> usize {
        self.cell_names.len()
    }
    pub fn objects(&self) -> impl Iterator<Item = Ob> + '_ {
        (0..self.obj_names.len() as u32).map(Ob)
    }
    pub fn mors(&self) -> impl Iterator<Item = Mor> + '_ {
        (0..self.mor_names.len() as u32).map(Mor)
    }
    pub fn cells_all(&self) -> impl Iterator<Item = Cell> + '_ {
        (0..self.cell_names.len() as u32).map(Cell)
    }
    pub fn obj_name(&self, o: Ob) -> &str {
        &self.obj_names[o.ix()]
    }
    pub fn mor_name(&self, f: Mor) -> &str {
        &self.mor_names[f.ix()]
    }
    pub fn cell_name(&self, a: Cell) -> &str {
        &self.cell_names[a.ix()]
    }
    pub fn obj_by_name(&self, n: &str) -> Option<Ob> {
        self.obj_ix.get(n).copied()
    }
    pub fn mor_by_name(&self, n: &str) -> Option<Mor> {
        self.mor_ix.get(n).copied()
    }
    pub fn cell_by_name(&self, n: &str) -> Option<Cell> {
        self.cell_ix.get(n).copied()
    }

    // ---- boundaries ----

    pub fn src(&self, f: Mor) -> Ob {
        self.mor_src[f.ix()]
    }
    pub fn tgt(&self, f: Mor) -> Ob {
        self.mor_tgt[f.ix()]
    }
    pub fn dom(&self, a: Cell) -> Mor {
        self.cell_src[a.ix()]
    }
    pub fn cod(&self, a: Cell) -> Mor {
        self.cell_tgt[a.ix()]
    }
    pub fn parallel(&self, f: Mor, g: Mor) -> bool {
        self.src(f) == self.src(g) && self.tgt(f) == self.tgt(g)
    }

    // ---- enumeration ----

    pub fn hom(&self, a: Ob, b: Ob) -> &[Mor] {
        &self.hom[a.ix() * self.n_objects() + b.ix()]
    }
    /// 1-cells with the given source, ordered by target then declaration.
    pub fn mors_from(&self, a: Ob) -> &[Mor] {
        &self.out_mors[a.ix()]
    }
    /// 1-cells with the given target.
    pub fn mors_into(&self, b: Ob) -> &[Mor] {
        &self.in_mors[b.ix()]
    }
    /// 2-cells whose source 1-cell is `f`.
    pub fn cells_from(&self, f: Mor) -> &[Cell] {
        &self.out_cells[f.ix()]
    }
    /// All 2-cells f ⇒ g.
    pub fn cells(&self, f: Mor, g: Mor) -> &[Cell] {
        self.between.get(&(f, g)).map(Vec::as_slice).unwrap_or(&[])
    }
    /// All invertible 2-cells f ⇒ g, in declaration order.
    pub fn isos(&self, f: Mor, g: Mor) -> &[Cell] {
        self.isos.get(&(f, g)).map(Vec::as_slice).unwrap_or(&[])
    }
    pub fn iso_two_cells(&self, f: Mor, g: Mor) -> Result<Vec<Cell>> {
        if !self.parallel(f, g) {
            return Err(Error::Input(format!("{} and {} are not parallel", self.mor_name(f), self.mor_name(g))));
        }
        Ok(self.isos(f, g).to_vec())
    }
    pub fn is_invertible(&self, a: Cell) -> bool {
        self.inverse[a.ix()].is_some()
    }
    pub fn is_identity_mor(&self, f: Mor) -> bool {
        self.id1[self.src(f).ix()] == f && self.src(f) == self.tgt(f)
    }
    pub fn is_identity_cell(&self, a: Cell) -> bool {
        self.id2[self.dom(a).ix()] == a
    }
    pub fn is_locally_discrete(&self) -> bool {
        self.cells_all().all(|a| self.is_identity_cell(a))
    }

    // ---- composition ----

    pub fn id1(&self, a: Ob) -> Mor {
        self.id1[a.ix()]
    }
    pub fn id2(&self, f: Mor) -> Cell {
        self.id2[f.ix()]
    }

    /// g∘f
    pub fn c(&self, g: Mor, f: Mor) -> Result<Mor> {
        let v = self.comp[g.ix() * self.n_mors() + f.ix()];
        if v == NONE {
            return Err(Error::Boundary(format!("{} ∘ {}", self.mor_name(g), self.mor_name(f))));
        }
        Ok(Mor(v))
    }

    /// Composite of a path written right to left: `cs(&[h, g, f])` is h∘g∘f.
    pub fn cs(&self, path: &[Mor]) -> Result<Mor> {
        let (last, rest) = path.split_last().ok_or_else(|| Error::Boundary("empty path".into()))?;
        rest.iter().rev().try_fold(*last, |acc, &g| self.c(g, acc))
    }

    /// β·α
    pub fn v(&self, b: Cell, a: Cell) -> Result<Cell> {
        self.vcomp
            .get(&(b, a))
            .copied()
            .ok_or_else(|| Error::Boundary(format!("{} · {}", self.cell_name(b), self.cell_name(a))))
    }

    /// Vertical composite in diagrammatic order: `seq(&[a, b, c])` is c·b·a.
    pub fn seq(&self, cells: &[Cell]) -> Result<Cell> {
        let (first, rest) = cells.split_first().ok_or_else(|| Error::Boundary("empty sequence".into()))?;
        rest.iter().try_fold(*first, |acc, &b| self.v(b, acc))
    }

    /// h⋆α
    pub fn lw(&self, h: Mor, a: Cell) -> Result<Cell> {
        self.lwhisker
            .get(&(h, a))
            .copied()
            .ok_or_else(|| Error::Boundary(format!("{} ⋆ {}", self.mor_name(h), self.cell_name(a))))
    }

    /// α⋆e
    pub fn rw(&self, a: Cell, e: Mor) -> Result<Cell> {
        self.rwhisker
            .get(&(a, e))
            .copied()
            .ok_or_else(|| Error::Boundary(format!("{} ⋆ {}", self.cell_name(a), self.mor_name(e))))
    }

    /// h⋆α⋆e
    pub fn wh(&self, h: Mor, a: Cell, e: Mor) -> Result<Cell> {
        self.lw(h, self.rw(a, e)?)
    }

    /// Horizontal composite of β: g⇒g' after α: f⇒f', read as (β⋆f')·(g⋆α).
    pub fn hcomp(&self, b: Cell, a: Cell) -> Result<Cell> {
        self.v(self.rw(b, self.cod(a))?, self.lw(self.dom(b), a)?)
    }

    pub fn inv(&self, a: Cell) -> Result<Cell> {
        self.inverse[a.ix()].ok_or_else(|| Error::NotInvertible(self.cell_name(a).to_string()))
    }

    pub fn paste(&self, e: &Paste) -> Result<Cell> {
        e.eval(self)
    }

    // ---- duality ----

    /// Formal reversal of 1-cells; 2-cells keep their direction.
    /// Names and indices are preserved, so `dual(dual(T)) == T`.
    pub fn dual(&self) -> TwoCategory {
        let n1 = self.n_mors();
        let mut comp = vec![NONE; n1 * n1];
        for g in 0..n1 {
            for f in 0..n1 {
                comp[f * n1 + g] = self.comp[g * n1 + f];
            }
        }
        let lwhisker = self.rwhisker.iter().map(|(&(a, e), &r)| ((e, a), r)).collect();
        let rwhisker = self.lwhisker.iter().map(|(&(h, a), &r)| ((a, h), r)).collect();
        let mut t = TwoCategory {
            obj_names: self.obj_names.clone(),
            mor_names: self.mor_names.clone(),
            mor_src: self.mor_tgt.clone(),
            mor_tgt: self.mor_src.clone(),
            cell_names: self.cell_names.clone(),
            cell_src: self.cell_src.clone(),
            cell_tgt: self.cell_tgt.clone(),
            comp,
            id1: self.id1.clone(),
            vcomp: self.vcomp.clone(),
            id2: self.id2.clone(),
            lwhisker,
            rwhisker,
            hom: Vec::new(),
            between: FxHashMap::default(),
            isos: FxHashMap::default(),
            inverse: Vec::new(),
            out_mors: Vec::new(),
            in_mors: Vec::new(),
            out_cells: Vec::new(),
            obj_ix: FxHashMap::default(),
            mor_ix: FxHashMap::default(),
            cell_ix: FxHashMap::default(),
        };
        t.index().expect("dual of a well-formed category is well-formed");
        t
    }

    /// Rebuilds a builder holding exactly this category's tables; used by
    /// mutation operators and serializers.
    pub fn to_builder(&self) -> Builder {
        let mut b = Builder::new();
        for o in self.objects() {
            b.object(self.obj_name(o));
        }
        for f in self.mors() {
            b.mor(self.mor_name(f), self.src(f), self.tgt(f));
        }
        for a in self.cells_all() {
            b.cell(self.cell_name(a), self.dom(a), self.cod(a));
        }
        for (g, f, gf) in self.comp_entries() {
            b.comp(g, f, gf);
        }
        for o in self.objects() {
            b.id1(o, self.id1(o));
        }
        for (x, y, z) in self.vcomp_entries() {
            b.vcomp(x, y, z);
        }
        for f in self.mors() {
            b.id2(f, self.id2(f));
        }
        for (h, a, r) in self.lwhisker_entries() {
            b.lwhisker(h, a, r);
        }
        for (a, e, r) in self.rwhisker_entries() {
            b.rwhisker(a, e, r);
        }
        b
    }

    /// Table entries in deterministic (index) order.
    pub fn comp_entries(&self) -> Vec<(Mor, Mor, Mor)> {
        let n1 = self.n_mors();
        let mut v = Vec::new();
        for g in 0..n1 {
            for f in 0..n1 {
                let x = self.comp[g * n1 + f];
                if x != NONE {
                    v.push((Mor(g as u32), Mor(f as u32), Mor(x)));
                }
            }
        }
        v
    }
    pub fn vcomp_entries(&self) -> Vec<(Cell, Cell, Cell)> {
        let mut v: Vec<_> = self.vcomp.iter().map(|(&(b, a), &r)| (b, a, r)).collect();
        v.sort();
        v
    }
    pub fn lwhisker_entries(&self) -> Vec<(Mor, Cell, Cell)> {
        let mut v: Vec<_> = self.lwhisker.iter().map(|(&(h, a), &r)| (h, a, r)).collect();
        v.sort();
        v
    }
    pub fn rwhisker_entries(&self) -> Vec<(Cell, Mor, Cell)> {
        let mut v: Vec<_> = self.rwhisker.iter().map(|(&(a, e), &r)| (a, e, r)).collect();
        v.sort();
        v
    }

    /// All 1-cells isomorphic (by an invertible 2-cell) to `f`.
    pub fn iso_class(&self, f: Mor) -> Vec<Mor> {
        self.hom(self.src(f), self.tgt(f)).iter().copied().filter(|&g| !self.isos(f, g).is_empty()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;

    #[test]
    fn builder_rejects_dangling() {
        let mut b = Builder::new();
        let a = b.object("A");
        let f = b.mor("f", a, Ob(7));
        b.id1(a, f);
        let err = b.build().unwrap_err();
        assert!(matches!(err, Error::Input(ref s) if s.contains("dangling")));
    }

    #[test]
    fn builder_rejects_missing_comp() {
        let mut b = Builder::new();
        let a = b.object("A");
        let f = b.mor("1A", a, a);
        b.id1(a, f);
        let c = b.cell("i", f, f);
        b.id2(f, c);
        b.vcomp(c, c, c);
        b.lwhisker(f, c, c);
        let err = b.build().unwrap_err();
        assert!(matches!(err, Error::Input(ref s) if s.contains("comp1 missing")));
    }

    #[test]
    fn dual_is_involution() {
        for t in [gen::fixture("pb2").unwrap(), gen::fixture("chaotic-pb1").unwrap()] {
            assert_eq!(t.dual().dual(), t);
        }
    }

    #[test]
    fn seq_and_cs_orders() {
        let t = gen::fixture("pb2").unwrap();
        for f in t.mors() {
            let i = t.id1(t.src(f));
            let j = t.id1(t.tgt(f));
            assert_eq!(t.cs(&[j, f, i]).unwrap(), f);
            let a = t.id2(f);
            assert_eq!(t.seq(&[a, a, a]).unwrap(), a);
        }
    }

    #[test]
    fn iso_two_cells_examples() {
        let t = gen::fixture("chaotic-pb1").unwrap();
        for f in t.mors() {
            assert!(t.iso_two_cells(f, f).unwrap().contains(&t.id2(f)));
            for &g in t.hom(t.src(f), t.tgt(f)) {
                assert_eq!(t.iso_two_cells(f, g).unwrap().len(), 1);
            }
        }
        let ld = gen::fixture("pb2").unwrap();
        for f in ld.mors() {
            for &g in ld.hom(ld.src(f), ld.tgt(f)) {
                assert_eq!(ld.isos(f, g).is_empty(), f != g);
            }
        }
        let (f, g) = (ld.mors().next().unwrap(), ld.mors().last().unwrap());
        if !ld.parallel(f, g) {
            assert!(ld.iso_two_cells(f, g).is_err());
        }
    }
}
