//! Single-fault mutation operators. Each picks its site deterministically
//! from the seed among all applicable sites in index order.

use crate::core2::{find_equivalence, Cell, Mor, TwoCategory};
use crate::error::{Error, Result};
use crate::factor::FactorizationSystem;
use crate::ideal::TwoIdeal;
use crate::pseudo::{NaturalSetting, PseudoFunctor, PseudoNatural};

pub const OPERATORS: &[&str] =
    &["drop-null-2cell", "retarget-vcomp", "break-compositor", "drop-M-translate", "swap-structure-cell", "remove-eta-inverse"];

fn pick<T: Clone>(sites: &[T], seed: u64, op: &str) -> Result<T> {
    if sites.is_empty() {
        return Err(Error::Precondition(format!("{op}: no applicable site")));
    }
    Ok(sites[(seed % sites.len() as u64) as usize].clone())
}

/// Invertible 2-cells parallel to `a` other than `a` itself.
fn other_isos(t: &TwoCategory, a: Cell) -> impl Iterator<Item = Cell> + '_ {
    t.isos(t.dom(a), t.cod(a)).iter().copied().filter(move |&x| x != a)
}

/// Redirects one vcomp entry with an identity factor to a different 2-cell
/// with the same boundary. Other entries can be retargeted into another
/// valid table (x·x = x on a Z/2 loop), so they are not sites.
pub fn retarget_vcomp(t: &TwoCategory, seed: u64) -> Result<TwoCategory> {
    let sites: Vec<_> = t
        .vcomp_entries()
        .into_iter()
        .filter(|&(b, a, _)| t.is_identity_cell(b) || t.is_identity_cell(a))
        .filter_map(|(b, a, r)| t.cells(t.dom(r), t.cod(r)).iter().copied().find(|&x| x != r).map(|x| (b, a, x)))
        .collect();
    let (b, a, x) = pick(&sites, seed, "retarget-vcomp")?;
    let mut bld = t.to_builder();
    bld.override_vcomp(b, a, x);
    bld.build()
}

/// Removes the identity 2-cell of one null 1-cell from the null 2-cells.
pub fn drop_null_2cell(t: &TwoCategory, n: &TwoIdeal, seed: u64) -> Result<TwoIdeal> {
    let sites: Vec<Cell> = n.null_mors(t).map(|f| t.id2(f)).filter(|&a| n.is_null2(a)).collect();
    Ok(n.without_null_cell(pick(&sites, seed, "drop-null-2cell")?))
}

/// Replaces one compositor by a different invertible 2-cell.
pub fn break_compositor(t: &TwoCategory, f: &PseudoFunctor, seed: u64) -> Result<PseudoFunctor> {
    let mut keys: Vec<(Mor, Mor)> = f.comp.keys().copied().collect();
    keys.sort();
    let sites: Vec<((Mor, Mor), Cell)> =
        keys.into_iter().flat_map(|k| other_isos(t, f.comp[&k]).map(move |x| (k, x))).collect();
    let (k, x) = pick(&sites, seed, "break-compositor")?;
    let mut out = f.clone();
    out.comp.insert(k, x);
    Ok(out)
}

/// Drops a 1-cell m from M while keeping an isomorphic m' ≅ m, rerouting
/// every factorization through m to m' along the iso.
pub fn drop_m_translate(t: &TwoCategory, fs: &FactorizationSystem, seed: u64) -> Result<FactorizationSystem> {
    let mut sites = Vec::new();
    for m in t.mors().filter(|m| fs.m[m.ix()]) {
        for &m2 in t.hom(t.src(m), t.tgt(m)) {
            if m2 != m && fs.m[m2.ix()] {
                if let Some(&w) = t.isos(m, m2).first() {
                    sites.push((m, m2, w));
                }
            }
        }
    }
    let (m, m2, w) = pick(&sites, seed, "drop-M-translate")?;
    let mut out = fs.clone();
    out.m[m.ix()] = false;
    for fact in out.fact.iter_mut().filter(|x| x.right == m) {
        fact.theta = t.v(t.rw(w, fact.left)?, fact.theta)?;
        fact.right = m2;
    }
    Ok(out)
}

/// Replaces one structure 2-cell by a different invertible 2-cell.
pub fn swap_structure_cell(t: &TwoCategory, sigma: &PseudoNatural, seed: u64) -> Result<PseudoNatural> {
    let sites: Vec<(usize, Cell)> =
        sigma.structure.iter().enumerate().flat_map(|(i, &a)| other_isos(t, a).map(move |x| (i, x))).collect();
    let (i, x) = pick(&sites, seed, "swap-structure-cell")?;
    let mut out = sigma.clone();
    out.structure[i] = x;
    Ok(out)
}

/// Replaces one component by a 1-cell with no inverse, choosing the first
/// invertible 2-cell for every structure cell it touches. Only sites where
/// all those structure cells exist are eligible.
pub fn remove_eta_inverse(setting: &NaturalSetting, sigma: &PseudoNatural, seed: u64) -> Result<PseudoNatural> {
    let (s, t, f, g) = (setting.s, setting.t, setting.f, setting.g);
    let restructure = |x: usize, h: Mor| -> Result<Option<PseudoNatural>> {
        let mut out = sigma.clone();
        out.component[x] = h;
        for k in s.mors().filter(|k| s.src(*k).ix() == x || s.tgt(*k).ix() == x) {
            let dom = t.c(g.m(k), out.component[s.src(k).ix()])?;
            let cod = t.c(out.component[s.tgt(k).ix()], f.m(k))?;
            match t.isos(dom, cod).first() {
                Some(&a) => out.structure[k.ix()] = a,
                None => return Ok(None),
            }
        }
        Ok(Some(out))
    };
    let mut sites = Vec::new();
    for x in s.objects() {
        for &h in t.hom(f.ob(x), g.ob(x)) {
            if h != sigma.component[x.ix()] && find_equivalence(t, h)?.is_none() {
                if let Some(m) = restructure(x.ix(), h)? {
                    sites.push(m);
                }
            }
        }
    }
    pick(&sites, seed, "remove-eta-inverse")
}
