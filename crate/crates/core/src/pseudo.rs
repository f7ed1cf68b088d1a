//! Normal pseudofunctors, pseudonatural transformations and modifications
//! between finite 2-categories, and biequivalences lying over a base.
//!
//! The data types carry only the maps; the 2-categories they act between
//! are passed alongside, so a functor can be checked against any pair of
//! categories with matching indices.

use rustc_hash::FxHashMap;

use crate::cert::{Caps, Certificate};
use crate::core2::{is_equivalence, Cell, Id, Mor, Ob, TwoCategory};
use crate::error::{Error, Result};
use crate::sweep::{self, Clauses};

/// Structure cells φ_{g,f}: F(g)∘F(f) ⇒ F(g∘f), keyed by (g, f).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PseudoFunctor {
    pub obj: Vec<Ob>,
    pub mor: Vec<Mor>,
    pub cell: Vec<Cell>,
    pub comp: FxHashMap<(Mor, Mor), Cell>,
}

/// σ: F ⇒ G with σ_f: G(f)∘σ_X ⇒ σ_Y∘F(f) for f: X → Y.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PseudoNatural {
    pub component: Vec<Mor>,
    pub structure: Vec<Cell>,
}

/// m: σ ⇛ τ with m_X: σ_X ⇒ τ_X.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Modification {
    pub component: Vec<Cell>,
    pub invertible: bool,
}

impl PseudoFunctor {
    pub fn identity(t: &TwoCategory) -> Self {
        let mut comp = FxHashMap::default();
        for (g, f, _) in t.comp_entries() {
            comp.insert((g, f), t.id2(t.c(g, f).expect("composable")));
        }
        PseudoFunctor { obj: t.objects().collect(), mor: t.mors().collect(), cell: t.cells_all().collect(), comp }
    }

    /// A strict 2-functor from its cell maps; every compositor is an identity.
    pub fn strict(s: &TwoCategory, t: &TwoCategory, obj: Vec<Ob>, mor: Vec<Mor>, cell: Vec<Cell>) -> Result<Self> {
        let mut comp = FxHashMap::default();
        for (g, f, gf) in s.comp_entries() {
            let (fg, ff) = (mor[g.ix()], mor[f.ix()]);
            if t.c(fg, ff)? != mor[gf.ix()] {
                return Err(Error::Boundary(format!("not strict at {} ∘ {}", s.mor_name(g), s.mor_name(f))));
            }
            comp.insert((g, f), t.id2(mor[gf.ix()]));
        }
        Ok(PseudoFunctor { obj, mor, cell, comp })
    }

    pub fn phi(&self, g: Mor, f: Mor) -> Result<Cell> {
        self.comp.get(&(g, f)).copied().ok_or_else(|| Error::Input(format!("missing compositor ({}, {})", g.0, f.0)))
    }

    pub fn ob(&self, x: Ob) -> Ob {
        self.obj[x.ix()]
    }
    pub fn m(&self, f: Mor) -> Mor {
        self.mor[f.ix()]
    }
    pub fn c(&self, a: Cell) -> Cell {
        self.cell[a.ix()]
    }

    /// G∘F with compositor G(φ^F_{g,f})·φ^G_{Fg,Ff}.
    pub fn then(&self, g: &PseudoFunctor, t: &TwoCategory) -> Result<PseudoFunctor> {
        let mut comp = FxHashMap::default();
        for (&(b, a), &phi) in &self.comp {
            let cell = t.v(g.c(phi), g.phi(self.m(b), self.m(a))?)?;
            comp.insert((b, a), cell);
        }
        Ok(PseudoFunctor {
            obj: self.obj.iter().map(|&x| g.ob(x)).collect(),
            mor: self.mor.iter().map(|&f| g.m(f)).collect(),
            cell: self.cell.iter().map(|&a| g.c(a)).collect(),
            comp,
        })
    }
}

impl PseudoNatural {
    pub fn identity(s: &TwoCategory, f: &PseudoFunctor, t: &TwoCategory) -> Self {
        PseudoNatural {
            component: s.objects().map(|x| t.id1(f.ob(x))).collect(),
            structure: s.mors().map(|m| t.id2(f.m(m))).collect(),
        }
    }
}

impl Modification {
    pub fn identity(s: &TwoCategory, sigma: &PseudoNatural, t: &TwoCategory) -> Self {
        Modification { component: s.objects().map(|x| t.id2(sigma.component[x.ix()])).collect(), invertible: true }
    }
}

fn check_sizes(s: &TwoCategory, f: &PseudoFunctor) -> Result<()> {
    if f.obj.len() != s.n_objects() || f.mor.len() != s.n_mors() || f.cell.len() != s.n_cells() {
        return Err(Error::Input("pseudofunctor maps are not total".into()));
    }
    Ok(())
}

fn boundaries(s: &TwoCategory, t: &TwoCategory, f: &PseudoFunctor) -> Result<()> {
    check_sizes(s, f)?;
    for m in s.mors() {
        let fm = f.m(m);
        if t.src(fm) != f.ob(s.src(m)) || t.tgt(fm) != f.ob(s.tgt(m)) {
            return Err(Error::Boundary(format!("F({}) has the wrong ends", s.mor_name(m))));
        }
    }
    for a in s.cells_all() {
        let fa = f.c(a);
        if t.dom(fa) != f.m(s.dom(a)) || t.cod(fa) != f.m(s.cod(a)) {
            return Err(Error::Boundary(format!("F({}) has the wrong boundary", s.cell_name(a))));
        }
    }
    for (g, h, gh) in s.comp_entries() {
        let phi = f.phi(g, h)?;
        if t.dom(phi) != t.c(f.m(g), f.m(h))? || t.cod(phi) != f.m(gh) {
            return Err(Error::Boundary(format!("compositor at ({}, {})", s.mor_name(g), s.mor_name(h))));
        }
    }
    Ok(())
}

pub const FUNCTOR_CLAUSES: Clauses = &[
    ("normal-unit", "O"),
    ("normal-compositor", "M"),
    ("hom-id2", "M"),
    ("hom-vcomp", "CC"),
    ("compositor-invertible", "MM"),
    ("compositor-natural-left", "MC"),
    ("compositor-natural-right", "CM"),
    ("compositor-assoc", "MMM"),
];

fn functor_holds(s: &TwoCategory, t: &TwoCategory, f: &PseudoFunctor, clause: &str, x: &[Id]) -> Result<bool> {
    use Id::*;
    Ok(match (clause, x) {
        ("normal-unit", &[O(a)]) => f.m(s.id1(a)) == t.id1(f.ob(a)),
        ("normal-compositor", &[M(m)]) => {
            let (ia, ib) = (s.id1(s.src(m)), s.id1(s.tgt(m)));
            t.is_identity_cell(f.phi(m, ia)?) && t.is_identity_cell(f.phi(ib, m)?)
        }
        ("hom-id2", &[M(m)]) => f.c(s.id2(m)) == t.id2(f.m(m)),
        ("hom-vcomp", &[C(a), C(b)]) => f.c(s.v(b, a)?) == t.v(f.c(b), f.c(a))?,
        ("compositor-invertible", &[M(g), M(h)]) => t.is_invertible(f.phi(g, h)?),
        ("compositor-natural-left", &[M(g), C(a)]) => {
            // φ_{g,h'}·(Fg⋆Fα) = F(g⋆α)·φ_{g,h}
            let (h, h2) = (s.dom(a), s.cod(a));
            t.v(f.phi(g, h2)?, t.lw(f.m(g), f.c(a))?)? == t.v(f.c(s.lw(g, a)?), f.phi(g, h)?)?
        }
        ("compositor-natural-right", &[C(b), M(h)]) => {
            let (g, g2) = (s.dom(b), s.cod(b));
            t.v(f.phi(g2, h)?, t.rw(f.c(b), f.m(h))?)? == t.v(f.c(s.rw(b, h)?), f.phi(g, h)?)?
        }
        ("compositor-assoc", &[M(k), M(g), M(h)]) => {
            let left = t.v(f.phi(k, s.c(g, h)?)?, t.lw(f.m(k), f.phi(g, h)?)?)?;
            let right = t.v(f.phi(s.c(k, g)?, h)?, t.rw(f.phi(k, g)?, f.m(h))?)?;
            left == right
        }
        _ => return Err(Error::Input(format!("malformed tuple for {clause}"))),
    })
}

fn functor_instances(s: &TwoCategory, clause: &str) -> Vec<Vec<Id>> {
    use Id::*;
    let mut out = Vec::new();
    match clause {
        "normal-unit" => out.extend(s.objects().map(|a| vec![O(a)])),
        "normal-compositor" | "hom-id2" => out.extend(s.mors().map(|m| vec![M(m)])),
        "hom-vcomp" => {
            for (b, a, _) in s.vcomp_entries() {
                out.push(vec![C(a), C(b)]);
            }
        }
        "compositor-invertible" => out.extend(s.comp_entries().into_iter().map(|(g, h, _)| vec![M(g), M(h)])),
        "compositor-natural-left" => {
            for g in s.mors() {
                for &h in s.mors_into(s.src(g)) {
                    out.extend(s.cells_from(h).iter().map(|&a| vec![M(g), C(a)]));
                }
            }
        }
        "compositor-natural-right" => {
            for b in s.cells_all() {
                let g = s.dom(b);
                out.extend(s.mors_into(s.src(g)).iter().map(|&h| vec![C(b), M(h)]));
            }
        }
        "compositor-assoc" => {
            for (g, h, _) in s.comp_entries() {
                out.extend(s.mors_from(s.tgt(g)).iter().map(|&k| vec![M(k), M(g), M(h)]));
            }
        }
        _ => {}
    }
    out
}

pub fn validate_pseudofunctor(s: &TwoCategory, t: &TwoCategory, f: &PseudoFunctor, caps: &Caps) -> Result<Certificate> {
    boundaries(s, t, f)?;
    sweep::sweep(
        "validate_pseudofunctor",
        s,
        FUNCTOR_CLAUSES,
        caps,
        |c| Ok(functor_instances(s, c)),
        |c, x| functor_holds(s, t, f, c, x),
    )
}

pub fn replay_pseudofunctor(s: &TwoCategory, t: &TwoCategory, f: &PseudoFunctor, cert: &Certificate) -> Result<bool> {
    sweep::replay(s, FUNCTOR_CLAUSES, cert, |c, x| functor_holds(s, t, f, c, x))
}

pub const NATURAL_CLAUSES: Clauses = &[
    ("structure-invertible", "M"),
    ("naturality", "C"),
    ("unit-coherence", "O"),
    ("composition-coherence", "MM"),
    ("component-equivalence", "O"),
];

/// The source and target categories of F, G ⇒ and the transformation.
pub struct NaturalSetting<'a> {
    pub s: &'a TwoCategory,
    pub t: &'a TwoCategory,
    pub f: &'a PseudoFunctor,
    pub g: &'a PseudoFunctor,
}

impl NaturalSetting<'_> {
    fn boundaries(&self, sigma: &PseudoNatural) -> Result<()> {
        let (s, t, f, g) = (self.s, self.t, self.f, self.g);
        check_sizes(s, f)?;
        check_sizes(s, g)?;
        if sigma.component.len() != s.n_objects() || sigma.structure.len() != s.n_mors() {
            return Err(Error::Input("pseudonatural tables are not total".into()));
        }
        for x in s.objects() {
            let c = sigma.component[x.ix()];
            if t.src(c) != f.ob(x) || t.tgt(c) != g.ob(x) {
                return Err(Error::Boundary(format!("component at {}", s.obj_name(x))));
            }
        }
        for m in s.mors() {
            let (cx, cy) = (sigma.component[s.src(m).ix()], sigma.component[s.tgt(m).ix()]);
            let a = sigma.structure[m.ix()];
            if t.dom(a) != t.c(g.m(m), cx)? || t.cod(a) != t.c(cy, f.m(m))? {
                return Err(Error::Boundary(format!("structure cell at {}", s.mor_name(m))));
            }
        }
        Ok(())
    }

    fn holds(&self, sigma: &PseudoNatural, clause: &str, x: &[Id]) -> Result<bool> {
        use Id::*;
        let (s, t, f, g) = (self.s, self.t, self.f, self.g);
        let comp = |o: Ob| sigma.component[o.ix()];
        let st = |m: Mor| sigma.structure[m.ix()];
        Ok(match (clause, x) {
            ("structure-invertible", &[M(m)]) => t.is_invertible(st(m)),
            ("naturality", &[C(a)]) => {
                // (σ_Y⋆Fα)·σ_h = σ_k·(Gα⋆σ_X) for α: h ⇒ k
                let (h, k) = (s.dom(a), s.cod(a));
                let (cx, cy) = (comp(s.src(h)), comp(s.tgt(h)));
                t.v(t.lw(cy, f.c(a))?, st(h))? == t.v(st(k), t.rw(g.c(a), cx)?)?
            }
            ("unit-coherence", &[O(o)]) => t.is_identity_cell(st(s.id1(o))),
            ("composition-coherence", &[M(k), M(h)]) => {
                let (cx, cz) = (comp(s.src(h)), comp(s.tgt(k)));
                let left = t.seq(&[
                    t.lw(g.m(k), st(h))?,
                    t.rw(st(k), f.m(h))?,
                    t.lw(cz, f.phi(k, h)?)?,
                ])?;
                let right = t.v(st(s.c(k, h)?), t.rw(g.phi(k, h)?, cx)?)?;
                left == right
            }
            ("component-equivalence", &[O(o)]) => is_equivalence(t, comp(o))?.passed(),
            _ => return Err(Error::Input(format!("malformed tuple for {clause}"))),
        })
    }
}

pub fn validate_pseudonatural(
    setting: &NaturalSetting,
    sigma: &PseudoNatural,
    require_equivalence: bool,
    caps: &Caps,
) -> Result<Certificate> {
    setting.boundaries(sigma)?;
    let s = setting.s;
    let clauses: Clauses = if require_equivalence { NATURAL_CLAUSES } else { &NATURAL_CLAUSES[..4] };
    sweep::sweep(
        "validate_pseudonatural",
        s,
        clauses,
        caps,
        |c| {
            use Id::*;
            Ok(match c {
                "structure-invertible" => s.mors().map(|m| vec![M(m)]).collect(),
                "naturality" => s.cells_all().map(|a| vec![C(a)]).collect(),
                "unit-coherence" | "component-equivalence" => s.objects().map(|o| vec![O(o)]).collect(),
                "composition-coherence" => s.comp_entries().into_iter().map(|(k, h, _)| vec![M(k), M(h)]).collect(),
                _ => vec![],
            })
        },
        |c, x| setting.holds(sigma, c, x),
    )
}

pub fn replay_pseudonatural(setting: &NaturalSetting, sigma: &PseudoNatural, cert: &Certificate) -> Result<bool> {
    sweep::replay(setting.s, NATURAL_CLAUSES, cert, |c, x| setting.holds(sigma, c, x))
}

pub const MODIFICATION_CLAUSES: Clauses = &[("modification-axiom", "M"), ("component-invertible", "O")];

pub fn validate_modification(
    setting: &NaturalSetting,
    sigma: &PseudoNatural,
    tau: &PseudoNatural,
    m: &Modification,
    caps: &Caps,
) -> Result<Certificate> {
    let (s, t, f, g) = (setting.s, setting.t, setting.f, setting.g);
    if m.component.len() != s.n_objects() {
        return Err(Error::Input("modification table is not total".into()));
    }
    for x in s.objects() {
        let a = m.component[x.ix()];
        if t.dom(a) != sigma.component[x.ix()] || t.cod(a) != tau.component[x.ix()] {
            return Err(Error::Boundary(format!("modification component at {}", s.obj_name(x))));
        }
    }
    let holds = |c: &str, x: &[Id]| -> Result<bool> {
        Ok(match (c, x) {
            ("modification-axiom", &[Id::M(h)]) => {
                // τ_h·(Gh⋆m_X) = (m_Y⋆Fh)·σ_h
                let (mx, my) = (m.component[s.src(h).ix()], m.component[s.tgt(h).ix()]);
                t.v(tau.structure[h.ix()], t.lw(g.m(h), mx)?)? == t.v(t.rw(my, f.m(h))?, sigma.structure[h.ix()])?
            }
            ("component-invertible", &[Id::O(o)]) => t.is_invertible(m.component[o.ix()]),
            _ => return Err(Error::Input(format!("malformed tuple for {c}"))),
        })
    };
    let clauses: Clauses = if m.invertible { MODIFICATION_CLAUSES } else { &MODIFICATION_CLAUSES[..1] };
    sweep::sweep(
        "validate_modification",
        s,
        clauses,
        caps,
        |c| {
            Ok(match c {
                "modification-axiom" => s.mors().map(|h| vec![Id::M(h)]).collect(),
                _ => s.objects().map(|o| vec![Id::O(o)]).collect(),
            })
        },
        holds,
    )
}

/// P: T → L, Q: S → L, K: T → S, C: S → T, η: Id_S ⇒ K∘C, ε: C∘K ⇒ Id_T.
pub struct BiequivalenceData<'a> {
    pub l: &'a TwoCategory,
    pub t: &'a TwoCategory,
    pub s: &'a TwoCategory,
    pub p: &'a PseudoFunctor,
    pub q: &'a PseudoFunctor,
    pub k: &'a PseudoFunctor,
    pub c: &'a PseudoFunctor,
    pub eta: &'a PseudoNatural,
    pub eps: &'a PseudoNatural,
}

/// Strict over-ness first (clauses `over-*`), then each pseudonatural
/// transformation as an equivalence.
pub fn is_biequivalence_over_base(d: &BiequivalenceData, caps: &Caps) -> Result<Certificate> {
    const CHECK: &str = "is_biequivalence_over_base";
    let (l, t, s) = (d.l, d.t, d.s);
    let qk = d.k.then(d.q, l)?;
    let pc = d.c.then(d.p, l)?;
    if let Some(cells) = strict_mismatch(t, &qk, d.p) {
        return Ok(Certificate::fail(CHECK, "over-K", cells));
    }
    if let Some(cells) = strict_mismatch(s, &pc, d.q) {
        return Ok(Certificate::fail(CHECK, "over-C", cells));
    }
    let kc = d.c.then(d.k, s)?;
    let ck = d.k.then(d.c, t)?;
    let (id_s, id_t) = (PseudoFunctor::identity(s), PseudoFunctor::identity(t));
    for (name, src, sub, f) in [("functor-K", t, s, d.k), ("functor-C", s, t, d.c)] {
        let c = validate_pseudofunctor(src, sub, f, caps)?;
        if !c.passed() {
            return Ok(Certificate { check: name.into(), ..c }.nested(CHECK));
        }
    }
    let eta_setting = NaturalSetting { s, t: s, f: &id_s, g: &kc };
    let c = validate_pseudonatural(&eta_setting, d.eta, true, caps)?;
    if !c.passed() {
        return Ok(Certificate { check: "eta".into(), ..c }.nested(CHECK));
    }
    let eps_setting = NaturalSetting { s: t, t, f: &ck, g: &id_t };
    let c = validate_pseudonatural(&eps_setting, d.eps, true, caps)?;
    if !c.passed() {
        return Ok(Certificate { check: "epsilon".into(), ..c }.nested(CHECK));
    }
    // components project to identities, structure cells to identity 2-cells
    for x in s.objects() {
        if !l.is_identity_mor(d.q.m(d.eta.component[x.ix()])) {
            return Ok(Certificate::fail(CHECK, "over-eta", vec![s.obj_name(x).into()]));
        }
    }
    for m in s.mors() {
        if !l.is_identity_cell(d.q.c(d.eta.structure[m.ix()])) {
            return Ok(Certificate::fail(CHECK, "over-eta", vec![s.mor_name(m).into()]));
        }
    }
    for x in t.objects() {
        if !l.is_identity_mor(d.p.m(d.eps.component[x.ix()])) {
            return Ok(Certificate::fail(CHECK, "over-epsilon", vec![t.obj_name(x).into()]));
        }
    }
    for m in t.mors() {
        if !l.is_identity_cell(d.p.c(d.eps.structure[m.ix()])) {
            return Ok(Certificate::fail(CHECK, "over-epsilon", vec![t.mor_name(m).into()]));
        }
    }
    Ok(Certificate::pass(CHECK))
}

/// First entity where two functors out of `src` disagree.
fn strict_mismatch(src: &TwoCategory, a: &PseudoFunctor, b: &PseudoFunctor) -> Option<Vec<String>> {
    if let Some(x) = src.objects().find(|&x| a.ob(x) != b.ob(x)) {
        return Some(vec![src.obj_name(x).into()]);
    }
    if let Some(m) = src.mors().find(|&m| a.m(m) != b.m(m)) {
        return Some(vec![src.mor_name(m).into()]);
    }
    src.cells_all().find(|&c| a.c(c) != b.c(c)).map(|c| vec![src.cell_name(c).into()])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;

    fn caps() -> Caps {
        Caps::default()
    }

    #[test]
    fn identities_pass() {
        for name in gen::FIXTURES {
            let t = gen::fixture(name).unwrap();
            let id = PseudoFunctor::identity(&t);
            assert!(validate_pseudofunctor(&t, &t, &id, &caps()).unwrap().passed(), "{name}");
            let st = NaturalSetting { s: &t, t: &t, f: &id, g: &id };
            let sigma = PseudoNatural::identity(&t, &id, &t);
            assert!(validate_pseudonatural(&st, &sigma, true, &caps()).unwrap().passed(), "{name}");
            let m = Modification::identity(&t, &sigma, &t);
            assert!(validate_modification(&st, &sigma, &sigma, &m, &caps()).unwrap().passed());
            let d = BiequivalenceData { l: &t, t: &t, s: &t, p: &id, q: &id, k: &id, c: &id, eta: &sigma, eps: &sigma };
            assert!(is_biequivalence_over_base(&d, &caps()).unwrap().passed(), "{name}");
        }
    }

    #[test]
    fn composite_of_identities_is_valid() {
        let t = gen::fixture("chaotic-pb1").unwrap();
        let id = PseudoFunctor::identity(&t);
        let twice = id.then(&id, &t).unwrap();
        assert_eq!(twice, id);
        assert!(validate_pseudofunctor(&t, &t, &twice, &caps()).unwrap().passed());
    }

    #[test]
    fn dual_is_strict_functor_on_locally_discrete() {
        // the identity on objects and 1-cells of a locally discrete category
        // is strict, so its compositors are identities
        let t = gen::fixture("pb2").unwrap();
        let f = PseudoFunctor::strict(&t, &t, t.objects().collect(), t.mors().collect(), t.cells_all().collect()).unwrap();
        assert!(validate_pseudofunctor(&t, &t, &f, &caps()).unwrap().passed());
    }

    #[test]
    fn non_equivalence_component_fails() {
        let t = gen::fixture("pb1").unwrap();
        let id = PseudoFunctor::identity(&t);
        // the constant functor at 0 is not equivalent to the identity: a
        // null component 1 → 1 is rejected
        let one = t.obj_by_name("1").unwrap();
        let null = t.hom(one, one).iter().copied().find(|&m| !t.is_identity_mor(m));
        let Some(null) = null else { return };
        let mut sigma = PseudoNatural::identity(&t, &id, &t);
        sigma.component[one.ix()] = null;
        let st = NaturalSetting { s: &t, t: &t, f: &id, g: &id };
        let c = validate_pseudonatural(&st, &sigma, true, &caps());
        // either a boundary error at a structure cell or a failed clause
        assert!(c.map(|c| c.failed()).unwrap_or(true));
    }

    #[test]
    fn noncoherent_structure_cell_fails_and_replays() {
        let t = gen::fixture("loop-on-null").unwrap();
        let id = PseudoFunctor::identity(&t);
        let x = t.cell_by_name("x_pb1>1:_").unwrap();
        let m = t.dom(x);
        let mut sigma = PseudoNatural::identity(&t, &id, &t);
        sigma.structure[m.ix()] = x;
        let st = NaturalSetting { s: &t, t: &t, f: &id, g: &id };
        let c = validate_pseudonatural(&st, &sigma, false, &caps()).unwrap();
        assert!(c.failed());
        assert!(replay_pseudonatural(&st, &sigma, &c).unwrap());
    }

    #[test]
    fn broken_cell_map_fails_functoriality() {
        let t = gen::fixture("loop-on-null").unwrap();
        let mut f = PseudoFunctor::identity(&t);
        let x = t.cell_by_name("x_pb1>1:_").unwrap();
        f.cell[t.id2(t.dom(x)).ix()] = x;
        let c = validate_pseudofunctor(&t, &t, &f, &caps()).unwrap();
        assert_eq!(c.clause(), Some("hom-id2"));
        assert!(replay_pseudofunctor(&t, &t, &f, &c).unwrap());
    }
}
