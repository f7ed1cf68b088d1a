//! Finite 1-categories with an ideal of null morphisms, and a brute-force
//! exactness oracle used to cross-check the 2-dimensional checkers on
//! locally discrete inputs.

use std::collections::BTreeSet;

use crate::cert::Certificate;
use crate::core2::TwoCategory;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteCategory {
    pub obj_names: Vec<String>,
    pub mor_names: Vec<String>,
    pub src: Vec<usize>,
    pub tgt: Vec<usize>,
    /// `comp[g * n + f]` is g∘f, `usize::MAX` where undefined.
    comp: Vec<usize>,
    pub id: Vec<usize>,
    hom: Vec<Vec<usize>>,
}

impl FiniteCategory {
    /// Builds a category from morphism records and a composition function
    /// consulted on every composable pair.
    pub fn new(
        obj_names: Vec<String>,
        mors: Vec<(String, usize, usize)>,
        id: Vec<usize>,
        mut compose: impl FnMut(usize, usize) -> usize,
    ) -> Result<Self> {
        let n = mors.len();
        let n0 = obj_names.len();
        let src: Vec<usize> = mors.iter().map(|m| m.1).collect();
        let tgt: Vec<usize> = mors.iter().map(|m| m.2).collect();
        if src.iter().chain(&tgt).any(|&o| o >= n0) || id.len() != n0 || id.iter().any(|&i| i >= n) {
            return Err(Error::Input("dangling id in finite category".into()));
        }
        let mut comp = vec![usize::MAX; n * n];
        for g in 0..n {
            for f in 0..n {
                if src[g] == tgt[f] {
                    let gf = compose(g, f);
                    if gf >= n || src[gf] != src[f] || tgt[gf] != tgt[g] {
                        return Err(Error::Input(format!("composite {} ∘ {} has wrong boundary", mors[g].0, mors[f].0)));
                    }
                    comp[g * n + f] = gf;
                }
            }
        }
        let mut hom = vec![Vec::new(); n0 * n0];
        for f in 0..n {
            hom[src[f] * n0 + tgt[f]].push(f);
        }
        Ok(FiniteCategory { obj_names, mor_names: mors.into_iter().map(|m| m.0).collect(), src, tgt, comp, id, hom })
    }

    pub fn n_objects(&self) -> usize {
        self.obj_names.len()
    }
    pub fn n_mors(&self) -> usize {
        self.mor_names.len()
    }
    pub fn hom(&self, a: usize, b: usize) -> &[usize] {
        &self.hom[a * self.n_objects() + b]
    }
    pub fn c(&self, g: usize, f: usize) -> usize {
        let r = self.comp[g * self.n_mors() + f];
        assert!(r != usize::MAX, "not composable: {} ∘ {}", self.mor_names[g], self.mor_names[f]);
        r
    }
    pub fn mor_by_name(&self, n: &str) -> Option<usize> {
        self.mor_names.iter().position(|m| m == n)
    }

    pub fn dual(&self) -> FiniteCategory {
        let n = self.n_mors();
        let mut comp = vec![usize::MAX; n * n];
        for g in 0..n {
            for f in 0..n {
                comp[f * n + g] = self.comp[g * n + f];
            }
        }
        let mut hom = vec![Vec::new(); self.n_objects() * self.n_objects()];
        for f in 0..n {
            hom[self.tgt[f] * self.n_objects() + self.src[f]].push(f);
        }
        FiniteCategory {
            obj_names: self.obj_names.clone(),
            mor_names: self.mor_names.clone(),
            src: self.tgt.clone(),
            tgt: self.src.clone(),
            comp,
            id: self.id.clone(),
            hom,
        }
    }

    /// Category axioms, checked exhaustively.
    pub fn validate(&self) -> Certificate {
        const CHECK: &str = "validate_finite_category";
        let n = self.n_mors();
        for f in 0..n {
            if self.c(f, self.id[self.src[f]]) != f || self.c(self.id[self.tgt[f]], f) != f {
                return Certificate::fail(CHECK, "unit", vec![self.mor_names[f].clone()]);
            }
        }
        for f in 0..n {
            for g in (0..n).filter(|&g| self.src[g] == self.tgt[f]) {
                for h in (0..n).filter(|&h| self.src[h] == self.tgt[g]) {
                    if self.c(h, self.c(g, f)) != self.c(self.c(h, g), f) {
                        let names = [h, g, f].iter().map(|&x| self.mor_names[x].clone()).collect();
                        return Certificate::fail(CHECK, "assoc", names);
                    }
                }
            }
        }
        Certificate::pass(CHECK)
    }
}

/// A set of morphisms closed under composition with arbitrary morphisms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OneIdeal {
    pub null: Vec<bool>,
}

impl OneIdeal {
    pub fn is_null(&self, f: usize) -> bool {
        self.null[f]
    }

    pub fn validate(&self, c: &FiniteCategory) -> Certificate {
        const CHECK: &str = "validate_one_ideal";
        for f in (0..c.n_mors()).filter(|&f| self.null[f]) {
            for g in 0..c.n_mors() {
                if c.src[g] == c.tgt[f] && !self.null[c.c(g, f)] {
                    return Certificate::fail(CHECK, "post", vec![c.mor_names[g].clone(), c.mor_names[f].clone()]);
                }
                if c.tgt[g] == c.src[f] && !self.null[c.c(f, g)] {
                    return Certificate::fail(CHECK, "pre", vec![c.mor_names[f].clone(), c.mor_names[g].clone()]);
                }
            }
        }
        Certificate::pass(CHECK)
    }

    /// Morphisms factoring through object `z`.
    pub fn through(c: &FiniteCategory, z: usize) -> OneIdeal {
        let mut null = vec![false; c.n_mors()];
        for a in 0..c.n_objects() {
            for b in 0..c.n_objects() {
                for &x in c.hom(a, z) {
                    for &y in c.hom(z, b) {
                        null[c.c(y, x)] = true;
                    }
                }
            }
        }
        OneIdeal { null }
    }
}

/// Objects that are both initial and terminal.
pub fn zero_objects(c: &FiniteCategory) -> Vec<usize> {
    (0..c.n_objects())
        .filter(|&z| (0..c.n_objects()).all(|a| c.hom(a, z).len() == 1 && c.hom(z, a).len() == 1))
        .collect()
}

/// All (K, k) kernels of f relative to the ideal, as the leg k.
pub fn kernels(c: &FiniteCategory, i: &OneIdeal, f: usize) -> Vec<usize> {
    let a = c.src[f];
    let mut out = Vec::new();
    for kobj in 0..c.n_objects() {
        'cand: for &k in c.hom(kobj, a) {
            if !i.is_null(c.c(f, k)) {
                continue;
            }
            for z in 0..c.n_objects() {
                for &zz in c.hom(z, a) {
                    if !i.is_null(c.c(f, zz)) {
                        continue;
                    }
                    let n = c.hom(z, kobj).iter().filter(|&&u| c.c(k, u) == zz).count();
                    if n != 1 {
                        continue 'cand;
                    }
                }
            }
            out.push(k);
        }
    }
    out
}

pub fn cokernels(c: &FiniteCategory, i: &OneIdeal, f: usize) -> Vec<usize> {
    kernels(&c.dual(), i, f)
}

/// `k` (K→A) reflects null morphisms: k∘s null implies s null.
pub fn reflects_null(c: &FiniteCategory, i: &OneIdeal, k: usize) -> Option<usize> {
    let kobj = c.src[k];
    (0..c.n_objects())
        .flat_map(|d| c.hom(d, kobj).iter().copied())
        .find(|&s| i.is_null(c.c(k, s)) && !i.is_null(s))
}

/// Objects whose identity is null.
pub fn null_objects(c: &FiniteCategory, i: &OneIdeal) -> Vec<usize> {
    (0..c.n_objects()).filter(|&z| i.is_null(c.id[z])).collect()
}

fn factors_through_null_object(c: &FiniteCategory, i: &OneIdeal, n: usize) -> bool {
    null_objects(c, i).into_iter().any(|z| {
        c.hom(c.src[n], z).iter().any(|&x| c.hom(z, c.tgt[n]).iter().any(|&y| c.c(y, x) == n))
    })
}

pub fn grandis_exact_1cat(c: &FiniteCategory, i: &OneIdeal) -> Certificate {
    const CHECK: &str = "grandis_exact_1cat";
    let name = |f: usize| c.mor_names[f].clone();
    let n = c.n_mors();
    let kers: Vec<Vec<usize>> = (0..n).map(|f| kernels(c, i, f)).collect();
    if let Some(f) = (0..n).find(|&f| kers[f].is_empty()) {
        return Certificate::fail(CHECK, "kernels-exist", vec![name(f)]);
    }
    let cokers: Vec<Vec<usize>> = (0..n).map(|f| cokernels(c, i, f)).collect();
    if let Some(f) = (0..n).find(|&f| cokers[f].is_empty()) {
        return Certificate::fail(CHECK, "cokernels-exist", vec![name(f)]);
    }
    let ker_legs: BTreeSet<usize> = kers.iter().flatten().copied().collect();
    let coker_legs: BTreeSet<usize> = cokers.iter().flatten().copied().collect();

    let bad_null = (0..n).find(|&m| i.is_null(m) && !factors_through_null_object(c, i, m));
    let bad_ker = ker_legs.iter().copied().find_map(|k| reflects_null(c, i, k).map(|s| (k, s)));
    let d = c.dual();
    let bad_coker = coker_legs.iter().copied().find_map(|e| reflects_null(&d, i, e).map(|s| (e, s)));
    let verdicts = [bad_null.is_none(), bad_ker.is_none(), bad_coker.is_none()];
    if verdicts.iter().any(|&v| v != verdicts[0]) {
        return Certificate::fail(CHECK, "internal:closedness-divergence", vec![format!("{verdicts:?}")]);
    }
    if let Some(m) = bad_null {
        return Certificate::fail(CHECK, "closed", vec![name(m)]);
    }
    for &k in &ker_legs {
        let ck = cokers[k][0];
        if !kernels(c, i, ck).contains(&k) {
            return Certificate::fail(CHECK, "kernel-of-its-cokernel", vec![name(k), name(ck)]);
        }
    }
    for &e in &coker_legs {
        let ke = kers[e][0];
        if !cokernels(c, i, ke).contains(&e) {
            return Certificate::fail(CHECK, "cokernel-of-its-kernel", vec![name(e), name(ke)]);
        }
    }
    for f in 0..n {
        let found = coker_legs.iter().any(|&e| {
            c.src[e] == c.src[f]
                && ker_legs.iter().any(|&m| c.tgt[m] == c.tgt[f] && c.src[m] == c.tgt[e] && c.c(m, e) == f)
        });
        if !found {
            return Certificate::fail(CHECK, "factorization", vec![name(f)]);
        }
    }
    Certificate::pass(CHECK)
}

pub fn puppe_exact_1cat(c: &FiniteCategory) -> Certificate {
    match zero_objects(c).first() {
        None => Certificate::fail("puppe_exact_1cat", "zero-object", vec![]),
        Some(&z) => {
            let mut cert = grandis_exact_1cat(c, &OneIdeal::through(c, z));
            cert.check = "puppe_exact_1cat".into();
            cert
        }
    }
}

/// Objects and 1-cells of a 2-category under comp1.
pub fn underlying_1cat(t: &TwoCategory) -> FiniteCategory {
    let mors = t.mors().map(|f| (t.mor_name(f).to_string(), t.src(f).ix(), t.tgt(f).ix())).collect();
    let id = t.objects().map(|o| t.id1(o).ix()).collect();
    let names = t.objects().map(|o| t.obj_name(o).to_string()).collect();
    FiniteCategory::new(names, mors, id, |g, f| {
        t.c(crate::core2::Mor(g as u32), crate::core2::Mor(f as u32)).expect("composable").ix()
    })
    .expect("a validated 2-category has a well-formed underlying category")
}
