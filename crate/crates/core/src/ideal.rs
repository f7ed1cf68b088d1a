//! 2-ideals given by null 1-cells, null 2-cells and replacement data:
//! for null n and 1-cells a, b around it, a null ñ with an invertible
//! ν: b∘n∘a ⇒ ñ.

use rustc_hash::FxHashMap;

use crate::cert::{Caps, Certificate};
use crate::core2::{Cell, Id, Mor, Ob, TwoCategory};
use crate::error::{Error, Result};
use crate::sweep::{self, Clauses};

/// ((a, n, b), (ñ, ν_{a,n,b})).
pub type Replacement = ((Mor, Mor, Mor), (Mor, Cell));

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoIdeal {
    null1: Vec<bool>,
    null2: Vec<bool>,
    replacement: FxHashMap<(Mor, Mor, Mor), (Mor, Cell)>,
}

impl TwoIdeal {
    /// Checks types and totality: null 2-cells have null boundaries, every
    /// (a, n, b) around a null n has an entry with ñ null and ν invertible
    /// from b∘n∘a to ñ.
    pub fn new(
        t: &TwoCategory,
        null_mors: impl IntoIterator<Item = Mor>,
        null_cells: impl IntoIterator<Item = Cell>,
        replacement: impl IntoIterator<Item = ((Mor, Mor, Mor), (Mor, Cell))>,
    ) -> Result<Self> {
        let mut null1 = vec![false; t.n_mors()];
        for f in null_mors {
            *null1.get_mut(f.ix()).ok_or_else(|| Error::Input("dangling null 1-cell".into()))? = true;
        }
        let mut null2 = vec![false; t.n_cells()];
        for a in null_cells {
            *null2.get_mut(a.ix()).ok_or_else(|| Error::Input("dangling null 2-cell".into()))? = true;
        }
        let replacement: FxHashMap<_, _> = replacement.into_iter().collect();
        let n = TwoIdeal { null1, null2, replacement };
        n.check_types(t)?;
        Ok(n)
    }

    fn check_types(&self, t: &TwoCategory) -> Result<()> {
        let mut errs = Vec::new();
        for a in t.cells_all().filter(|&a| self.null2[a.ix()]) {
            if !self.null1[t.dom(a).ix()] || !self.null1[t.cod(a).ix()] {
                errs.push(format!("null 2-cell {} has a non-null boundary", t.cell_name(a)));
            }
        }
        for n in t.mors().filter(|&n| self.null1[n.ix()]) {
            for &a in t.mors_into(t.src(n)) {
                for &b in t.mors_from(t.tgt(n)) {
                    let Some(&(tl, nu)) = self.replacement.get(&(a, n, b)) else {
                        errs.push(format!(
                            "replacement missing ({}, {}, {})",
                            t.mor_name(a),
                            t.mor_name(n),
                            t.mor_name(b)
                        ));
                        continue;
                    };
                    let bna = t.cs(&[b, n, a])?;
                    if !self.null1[tl.ix()] || t.dom(nu) != bna || t.cod(nu) != tl || !t.is_invertible(nu) {
                        errs.push(format!(
                            "replacement ({}, {}, {}) has wrong boundary",
                            t.mor_name(a),
                            t.mor_name(n),
                            t.mor_name(b)
                        ));
                    }
                }
            }
        }
        if self.replacement.keys().any(|k| !self.null1[k.1.ix()]) {
            errs.push("replacement entry at a non-null 1-cell".into());
        }
        if errs.is_empty() {
            Ok(())
        } else {
            errs.truncate(50);
            Err(Error::Input(errs.join("; ")))
        }
    }

    /// Every 1-cell and every 2-cell is null; ν is an identity.
    pub fn maximal(t: &TwoCategory) -> Self {
        Self::with_identity_replacement(t, vec![true; t.n_mors()], vec![true; t.n_cells()])
    }

    /// Null 1-cells given, null 2-cells the identities on them.
    pub fn discrete(t: &TwoCategory, null1: Vec<bool>) -> Self {
        let mut null2 = vec![false; t.n_cells()];
        for f in t.mors().filter(|f| null1[f.ix()]) {
            null2[t.id2(f).ix()] = true;
        }
        Self::with_identity_replacement(t, null1, null2)
    }

    /// Replacement (b∘n∘a, id); requires the null 1-cells to form an
    /// ideal under composition.
    pub fn with_identity_replacement(t: &TwoCategory, null1: Vec<bool>, null2: Vec<bool>) -> Self {
        let mut replacement = FxHashMap::default();
        for n in t.mors().filter(|n| null1[n.ix()]) {
            for &a in t.mors_into(t.src(n)) {
                for &b in t.mors_from(t.tgt(n)) {
                    let m = t.cs(&[b, n, a]).expect("composable");
                    replacement.insert((a, n, b), (m, t.id2(m)));
                }
            }
        }
        TwoIdeal { null1, null2, replacement }
    }

    /// The same ideal on the dual 2-category: replacement at (a, n, b)
    /// there is replacement at (b, n, a) here.
    pub fn dual(&self) -> TwoIdeal {
        TwoIdeal {
            null1: self.null1.clone(),
            null2: self.null2.clone(),
            replacement: self.replacement.iter().map(|(&(a, n, b), &v)| ((b, n, a), v)).collect(),
        }
    }

    pub fn is_null(&self, f: Mor) -> bool {
        self.null1[f.ix()]
    }
    pub fn is_null2(&self, a: Cell) -> bool {
        self.null2[a.ix()]
    }
    pub fn null_mors<'a>(&'a self, t: &'a TwoCategory) -> impl Iterator<Item = Mor> + 'a {
        t.mors().filter(|f| self.null1[f.ix()])
    }
    pub fn null_cells<'a>(&'a self, t: &'a TwoCategory) -> impl Iterator<Item = Cell> + 'a {
        t.cells_all().filter(|a| self.null2[a.ix()])
    }
    /// Null 1-cells A → B.
    pub fn nulls_in(&self, t: &TwoCategory, a: Ob, b: Ob) -> Vec<Mor> {
        t.hom(a, b).iter().copied().filter(|f| self.null1[f.ix()]).collect()
    }

    /// (ñ, ν) for b∘n∘a.
    pub fn rep(&self, a: Mor, n: Mor, b: Mor) -> Result<(Mor, Cell)> {
        self.replacement.get(&(a, n, b)).copied().ok_or_else(|| {
            Error::Boundary(format!("no replacement at ({}, {}, {})", a.0, n.0, b.0))
        })
    }
    pub fn tilde(&self, a: Mor, n: Mor, b: Mor) -> Result<Mor> {
        Ok(self.rep(a, n, b)?.0)
    }
    pub fn nu(&self, a: Mor, n: Mor, b: Mor) -> Result<Cell> {
        Ok(self.rep(a, n, b)?.1)
    }

    /// Entries sorted by key, for serialization.
    pub fn replacement_entries(&self) -> Vec<Replacement> {
        let mut v: Vec<_> = self.replacement.iter().map(|(&k, &v)| (k, v)).collect();
        v.sort();
        v
    }

    pub fn is_invertible_null(&self, t: &TwoCategory, a: Cell) -> bool {
        self.is_null2(a) && t.is_invertible(a)
    }

    /// Mutation support: unmark a 2-cell.
    pub fn without_null_cell(&self, a: Cell) -> TwoIdeal {
        let mut n = self.clone();
        n.null2[a.ix()] = false;
        n
    }
}

pub const IDEAL_CLAUSES: Clauses = &[
    ("closure-id2", "M"),
    ("closure-vcomp", "CC"),
    ("ax1", "M"),
    ("ax2", "CMM"),
    ("ax3", "MCC"),
    ("ax4", "MMMMM"),
];

fn ideal_holds(t: &TwoCategory, n: &TwoIdeal, clause: &str, x: &[Id]) -> Result<bool> {
    use Id::*;
    Ok(match (clause, x) {
        ("closure-id2", &[M(m)]) => !n.is_null(m) || n.is_null2(t.id2(m)),
        ("closure-vcomp", &[C(b), C(a)]) => !(n.is_null2(a) && n.is_null2(b)) || n.is_null2(t.v(b, a)?),
        ("ax1", &[M(m)]) => {
            let (i, j) = (t.id1(t.src(m)), t.id1(t.tgt(m)));
            n.rep(i, m, j)? == (m, t.id2(m))
        }
        ("ax2", &[C(mu), M(a), M(b)]) => {
            let (m, m2) = (t.dom(mu), t.cod(mu));
            let cell = t.seq(&[t.inv(n.nu(a, m, b)?)?, t.wh(b, mu, a)?, n.nu(a, m2, b)?])?;
            n.is_null2(cell)
        }
        ("ax3", &[M(m), C(al), C(be)]) => {
            let (a, a2, b, b2) = (t.dom(al), t.cod(al), t.dom(be), t.cod(be));
            let mid = t.hcomp(be, t.lw(m, al)?)?;
            let cell = t.seq(&[t.inv(n.nu(a, m, b)?)?, mid, n.nu(a2, m, b2)?])?;
            n.is_null2(cell)
        }
        ("ax4", &[M(m), M(a), M(b), M(a2), M(b2)]) => {
            // a2: A''→A', a: A'→A, b: B→B', b2: B'→B''
            let (tl, nu) = n.rep(a, m, b)?;
            let cell = t.seq(&[
                t.inv(n.nu(a2, tl, b2)?)?,
                t.wh(b2, t.inv(nu)?, a2)?,
                n.nu(t.c(a, a2)?, m, t.c(b2, b)?)?,
            ])?;
            n.is_invertible_null(t, cell)
        }
        _ => return Err(Error::Input(format!("malformed tuple for {clause}"))),
    })
}

fn ideal_instances(t: &TwoCategory, n: &TwoIdeal, clause: &str) -> Vec<Vec<Id>> {
    use Id::*;
    let mut out = Vec::new();
    match clause {
        "closure-id2" | "ax1" => out.extend(n.null_mors(t).map(|m| vec![M(m)])),
        "closure-vcomp" => {
            for a in n.null_cells(t) {
                for &b in t.cells_from(t.cod(a)) {
                    if n.is_null2(b) {
                        out.push(vec![C(b), C(a)]);
                    }
                }
            }
        }
        "ax2" => {
            for mu in n.null_cells(t) {
                let m = t.dom(mu);
                for &a in t.mors_into(t.src(m)) {
                    for &b in t.mors_from(t.tgt(m)) {
                        out.push(vec![C(mu), M(a), M(b)]);
                    }
                }
            }
        }
        "ax3" => {
            for m in n.null_mors(t) {
                for &a in t.mors_into(t.src(m)) {
                    for &b in t.mors_from(t.tgt(m)) {
                        for &al in t.cells_from(a) {
                            for &be in t.cells_from(b) {
                                out.push(vec![M(m), C(al), C(be)]);
                            }
                        }
                    }
                }
            }
        }
        "ax4" => {
            for m in n.null_mors(t) {
                for &a in t.mors_into(t.src(m)) {
                    for &b in t.mors_from(t.tgt(m)) {
                        for &a2 in t.mors_into(t.src(a)) {
                            for &b2 in t.mors_from(t.tgt(b)) {
                                out.push(vec![M(m), M(a), M(b), M(a2), M(b2)]);
                            }
                        }
                    }
                }
            }
        }
        _ => {}
    }
    out
}

pub fn validate_two_ideal(t: &TwoCategory, n: &TwoIdeal, caps: &Caps) -> Result<Certificate> {
    n.check_types(t)?;
    sweep::sweep(
        "validate_two_ideal",
        t,
        IDEAL_CLAUSES,
        caps,
        |c| Ok(ideal_instances(t, n, c)),
        |c, x| ideal_holds(t, n, c, x),
    )
}

pub fn replay_two_ideal(t: &TwoCategory, n: &TwoIdeal, cert: &Certificate) -> Result<bool> {
    sweep::replay(t, IDEAL_CLAUSES, cert, |c, x| ideal_holds(t, n, c, x))
}

/// An object whose hom-categories into and out of it are equivalent to the
/// terminal category, with chosen t_A: A → 0 and i_A: 0 → A.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BizeroWitness {
    pub zero: Ob,
    pub to_zero: Vec<Mor>,
    pub from_zero: Vec<Mor>,
}

fn contractible(t: &TwoCategory, homs: &[Mor]) -> bool {
    !homs.is_empty()
        && homs.iter().all(|&f| {
            homs.iter().all(|&g| {
                let c = t.cells(f, g);
                c.len() == 1 && t.is_invertible(c[0])
            })
        })
}

pub fn bizero_objects(t: &TwoCategory) -> Vec<BizeroWitness> {
    t.objects()
        .filter(|&z| t.objects().all(|a| contractible(t, t.hom(a, z)) && contractible(t, t.hom(z, a))))
        .map(|z| BizeroWitness {
            zero: z,
            to_zero: t.objects().map(|a| t.hom(a, z)[0]).collect(),
            from_zero: t.objects().map(|a| t.hom(z, a)[0]).collect(),
        })
        .collect()
}

fn check_bizero(t: &TwoCategory, z: &BizeroWitness) -> Result<()> {
    let ok = t.objects().all(|a| contractible(t, t.hom(a, z.zero)) && contractible(t, t.hom(z.zero, a)))
        && z.to_zero.len() == t.n_objects()
        && z.from_zero.len() == t.n_objects()
        && t.objects().all(|a| {
            t.hom(a, z.zero).contains(&z.to_zero[a.ix()]) && t.hom(z.zero, a).contains(&z.from_zero[a.ix()])
        });
    if ok {
        Ok(())
    } else {
        Err(Error::Input(format!("{} is not a bizero object", t.obj_name(z.zero))))
    }
}

/// The unique 2-cell between two parallel 1-cells into or out of 0.
fn unique(t: &TwoCategory, f: Mor, g: Mor) -> Cell {
    t.cells(f, g)[0]
}

/// Null 1-cells factor through 0 on the nose; null 2-cells are the pastings
/// (i'⋆τ)·(ι⋆t): i∘t ⇒ i'∘t' of the unique cells τ: t ⇒ t', ι: i ⇒ i',
/// closed under vertical composition; ν is an identity.
pub fn canonical_zero_ideal(t: &TwoCategory, z: &BizeroWitness) -> Result<TwoIdeal> {
    check_bizero(t, z)?;
    let o = z.zero;
    let mut null1 = vec![false; t.n_mors()];
    let mut null2 = vec![false; t.n_cells()];
    for a in t.objects() {
        for b in t.objects() {
            for &t1 in t.hom(a, o) {
                for &t2 in t.hom(a, o) {
                    for &i1 in t.hom(o, b) {
                        for &i2 in t.hom(o, b) {
                            null1[t.c(i1, t1)?.ix()] = true;
                            let tau = unique(t, t1, t2);
                            let iota = unique(t, i1, i2);
                            let p = t.v(t.lw(i2, tau)?, t.rw(iota, t1)?)?;
                            null2[p.ix()] = true;
                        }
                    }
                }
            }
        }
    }
    // vertical closure
    loop {
        let mut grew = false;
        for a in t.cells_all().filter(|a| null2[a.ix()]).collect::<Vec<_>>() {
            for &b in t.cells_from(t.cod(a)) {
                if null2[b.ix()] {
                    let ba = t.v(b, a)?;
                    if !null2[ba.ix()] {
                        null2[ba.ix()] = true;
                        grew = true;
                    }
                }
            }
        }
        if !grew {
            break;
        }
    }
    Ok(TwoIdeal::with_identity_replacement(t, null1, null2))
}

/// The canonical ideal at the first bizero object, if any.
pub fn zero_ideal(t: &TwoCategory) -> Result<TwoIdeal> {
    let z = bizero_objects(t).into_iter().next().ok_or_else(|| Error::Precondition("not 2-pointed".into()))?;
    canonical_zero_ideal(t, &z)
}

/// (Z, ξ̂, ξ) with ξ̂ a null endo-1-cell and ξ: id_Z ⇒ ξ̂ invertible.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NullObjectWitness {
    pub object: Ob,
    pub null_endo: Mor,
    pub iso: Cell,
}

pub fn null_objects(t: &TwoCategory, n: &TwoIdeal) -> Vec<NullObjectWitness> {
    let mut out = Vec::new();
    for z in t.objects() {
        for m in n.nulls_in(t, z, z) {
            for &xi in t.isos(t.id1(z), m) {
                out.push(NullObjectWitness { object: z, null_endo: m, iso: xi });
            }
        }
    }
    out
}

/// Exactly one 2-cell between any two null composites i∘t, i'∘t'.
pub fn is_strong_bizero(t: &TwoCategory, z: &BizeroWitness) -> Result<Certificate> {
    const CHECK: &str = "is_strong_bizero";
    check_bizero(t, z)?;
    let o = z.zero;
    for d in t.objects() {
        for k in t.objects() {
            let mut nulls: Vec<Mor> = Vec::new();
            for &tt in t.hom(d, o) {
                for &i in t.hom(o, k) {
                    let m = t.c(i, tt)?;
                    if !nulls.contains(&m) {
                        nulls.push(m);
                    }
                }
            }
            for &m1 in &nulls {
                for &m2 in &nulls {
                    if t.cells(m1, m2).len() != 1 {
                        return Ok(Certificate::fail(CHECK, "unique-2-cell", vec![t.mor_name(m1).into(), t.mor_name(m2).into()]));
                    }
                }
            }
        }
    }
    Ok(Certificate::pass(CHECK))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;

    fn caps() -> Caps {
        Caps::default()
    }

    #[test]
    fn maximal_ideal_validates() {
        for name in gen::FIXTURES {
            let t = gen::fixture(name).unwrap();
            let n = TwoIdeal::maximal(&t);
            assert!(validate_two_ideal(&t, &n, &caps()).unwrap().passed(), "{name}");
        }
    }

    #[test]
    fn zero_ideal_validates_on_two_pointed_fixtures() {
        for name in gen::FIXTURES {
            let t = gen::fixture(name).unwrap();
            let n = zero_ideal(&t).unwrap();
            let c = validate_two_ideal(&t, &n, &caps()).unwrap();
            assert!(c.passed(), "{name}: {c:?}");
        }
    }

    #[test]
    fn bizero_examples() {
        let pb = gen::fixture("pb2").unwrap();
        let z = bizero_objects(&pb);
        assert_eq!(z.len(), 1);
        assert_eq!(pb.obj_name(z[0].zero), "0");
        let ps = gen::fixture("ps2").unwrap();
        assert_eq!(ps.obj_name(bizero_objects(&ps)[0].zero), "S0");
        // faithless: two 1-cells Y → Y, nothing is bizero
        assert!(bizero_objects(&gen::faithless()).is_empty());
    }

    #[test]
    fn zero_ideal_null_cells_are_the_empty_maps() {
        let t = gen::fixture("pb2").unwrap();
        let n = zero_ideal(&t).unwrap();
        for f in t.mors() {
            let name = t.mor_name(f);
            let code = name.split(':').nth(1).unwrap();
            assert_eq!(n.is_null(f), code.chars().all(|c| c == '_'), "{name}");
        }
        let ps = gen::fixture("ps2").unwrap();
        let n = zero_ideal(&ps).unwrap();
        for f in ps.mors() {
            let code = ps.mor_name(f).split(':').nth(1).unwrap().to_string();
            assert_eq!(n.is_null(f), code.chars().all(|c| c == '0'));
        }
    }

    #[test]
    fn nulls_connected_by_invertible_null_cells() {
        for name in gen::FIXTURES {
            let t = gen::fixture(name).unwrap();
            let n = zero_ideal(&t).unwrap();
            for a in t.objects() {
                for b in t.objects() {
                    let ns = n.nulls_in(&t, a, b);
                    for &x in &ns {
                        for &y in &ns {
                            assert!(t.isos(x, y).iter().any(|&c| n.is_null2(c)), "{name}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn drop_identity_fails_closure_id2_and_replays() {
        let t = gen::fixture("pb2").unwrap();
        let n = TwoIdeal::maximal(&t);
        let m = n.without_null_cell(t.id2(t.mors().nth(3).unwrap()));
        let c = validate_two_ideal(&t, &m, &caps()).unwrap();
        assert_eq!(c.clause(), Some("closure-id2"));
        assert!(replay_two_ideal(&t, &m, &c).unwrap());
        assert!(!replay_two_ideal(&t, &n, &c).unwrap());
    }

    #[test]
    fn null_objects_examples() {
        let t = gen::fixture("pb2").unwrap();
        let z = null_objects(&t, &zero_ideal(&t).unwrap());
        assert_eq!(z.iter().map(|w| t.obj_name(w.object)).collect::<Vec<_>>(), ["0"]);
        let all = null_objects(&t, &TwoIdeal::maximal(&t));
        assert_eq!(all.len(), t.n_objects());
        // chaotic: every object is null since id ≅ the empty map
        let c = gen::fixture("chaotic-pb1").unwrap();
        assert_eq!(null_objects(&c, &zero_ideal(&c).unwrap()).len(), 2);
    }

    #[test]
    fn null_objects_match_oracle_on_locally_discrete() {
        for name in ["pb2", "ct22", "ps2"] {
            let t = gen::fixture(name).unwrap();
            let n = zero_ideal(&t).unwrap();
            let c = crate::onecat::underlying_1cat(&t);
            let i = crate::onecat::OneIdeal::through(&c, 0);
            let want = crate::onecat::null_objects(&c, &i);
            let got: Vec<usize> = null_objects(&t, &n).iter().map(|w| w.object.ix()).collect();
            assert_eq!(got, want);
        }
    }

    #[test]
    fn strong_bizero() {
        for name in ["terminal", "pb2", "ct22", "ps2", "chaotic-pb1"] {
            let t = gen::fixture(name).unwrap();
            let z = &bizero_objects(&t)[0];
            assert!(is_strong_bizero(&t, z).unwrap().passed(), "{name}");
        }
        let t = gen::fixture("loop-on-null").unwrap();
        let z = &bizero_objects(&t)[0];
        assert!(is_strong_bizero(&t, z).unwrap().failed());
    }

    #[test]
    fn dual_ideal_validates() {
        for name in gen::FIXTURES {
            let t = gen::fixture(name).unwrap();
            let n = zero_ideal(&t).unwrap();
            assert!(validate_two_ideal(&t.dual(), &n.dual(), &caps()).unwrap().passed(), "{name}");
        }
    }
}
