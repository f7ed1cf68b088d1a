//! 2-kernels, 2-cokernels and biisoinserters, by exhaustive search over
//! candidates and over the quantifier instances of the universal property.
//!
//! Cokernels are kernels in the dual 2-category with the dual ideal. The
//! dual keeps every index, so a cokernel presentation reads directly in the
//! original orientation: c: B → C, n: A → C null and α: c∘f ⇒ n.

use serde_json::{json, Value};

use crate::cert::{Caps, Certificate};
use crate::core2::{Cell, Id, Mor, Ob, TwoCategory};
use crate::error::{Error, Result};
use crate::ideal::TwoIdeal;
use crate::par;
use crate::sweep::{self, Clauses};

/// (f, K, k, n, α) with k: K → A, n: K → B null and α: f∘k ⇒ n invertible.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KernelPresentation {
    pub f: Mor,
    pub obj: Ob,
    pub k: Mor,
    pub n: Mor,
    pub alpha: Cell,
}

impl KernelPresentation {
    pub fn to_json(&self, t: &TwoCategory) -> Value {
        json!({
            "f": t.mor_name(self.f),
            "object": t.obj_name(self.obj),
            "leg": t.mor_name(self.k),
            "null": t.mor_name(self.n),
            "alpha": t.cell_name(self.alpha),
        })
    }
}

/// A pair of problems that share a 2-category and ideal, with the dual
/// computed once.
pub struct Setting<'a> {
    pub t: &'a TwoCategory,
    pub n: &'a TwoIdeal,
    pub dt: TwoCategory,
    pub dn: TwoIdeal,
}

impl<'a> Setting<'a> {
    pub fn new(t: &'a TwoCategory, n: &'a TwoIdeal) -> Self {
        Setting { t, n, dt: t.dual(), dn: n.dual() }
    }
}

pub fn check_presentation(t: &TwoCategory, n: &TwoIdeal, p: &KernelPresentation) -> Result<()> {
    let ok = t.tgt(p.k) == t.src(p.f)
        && t.src(p.k) == p.obj
        && t.src(p.n) == p.obj
        && t.tgt(p.n) == t.tgt(p.f)
        && n.is_null(p.n)
        && t.dom(p.alpha) == t.c(p.f, p.k)?
        && t.cod(p.alpha) == p.n
        && t.is_invertible(p.alpha);
    if ok {
        Ok(())
    } else {
        Err(Error::Input(format!(
            "presentation ({}, {}, {}) is not well-boundaried",
            t.mor_name(p.k),
            t.mor_name(p.n),
            t.cell_name(p.alpha)
        )))
    }
}

pub const KERNEL_CLAUSES: Clauses = &[("kernel-1", "MC"), ("kernel-2", "MMC")];

/// The 1-dimensional comparison ν_{u,id,n}·(α⋆u)·(f⋆γ)·β⁻¹ from cod β to ñ.
pub fn kernel_theta(t: &TwoCategory, n: &TwoIdeal, p: &KernelPresentation, beta: Cell, u: Mor, gamma: Cell) -> Result<Cell> {
    let idb = t.id1(t.tgt(p.f));
    t.seq(&[t.inv(beta)?, t.lw(p.f, gamma)?, t.rw(p.alpha, u)?, n.nu(u, p.n, idb)?])
}

/// Ξ^λ = ν_{v,id,n}·(α⋆v)·(f⋆λ)·(α⁻¹⋆u)·ν⁻¹_{u,id,n}.
pub fn kernel_xi(t: &TwoCategory, n: &TwoIdeal, p: &KernelPresentation, u: Mor, v: Mor, lambda: Cell) -> Result<Cell> {
    let idb = t.id1(t.tgt(p.f));
    t.seq(&[
        t.inv(n.nu(u, p.n, idb)?)?,
        t.rw(t.inv(p.alpha)?, u)?,
        t.lw(p.f, lambda)?,
        t.rw(p.alpha, v)?,
        n.nu(v, p.n, idb)?,
    ])
}

/// First (u, γ) witnessing the 1-dimensional property at (z, β).
pub fn kernel_factor(t: &TwoCategory, n: &TwoIdeal, p: &KernelPresentation, z: Mor, beta: Cell) -> Result<Option<(Mor, Cell)>> {
    for &u in t.hom(t.src(z), p.obj) {
        for &gamma in t.isos(z, t.c(p.k, u)?) {
            if n.is_invertible_null(t, kernel_theta(t, n, p, beta, u, gamma)?) {
                return Ok(Some((u, gamma)));
            }
        }
    }
    Ok(None)
}

/// All μ: u ⇒ v with k⋆μ = λ.
pub fn kernel_lifts(t: &TwoCategory, k: Mor, u: Mor, v: Mor, lambda: Cell) -> Result<Vec<Cell>> {
    let mut out = Vec::new();
    for &mu in t.cells(u, v) {
        if t.lw(k, mu)? == lambda {
            out.push(mu);
        }
    }
    Ok(out)
}

/// The unique μ of the 2-dimensional property, when Ξ^λ is null.
pub fn kernel_lift(t: &TwoCategory, n: &TwoIdeal, p: &KernelPresentation, u: Mor, v: Mor, lambda: Cell) -> Result<Cell> {
    if !n.is_null2(kernel_xi(t, n, p, u, v, lambda)?) {
        return Err(Error::Precondition(format!("Ξ at {} is not null", t.cell_name(lambda))));
    }
    match kernel_lifts(t, p.k, u, v, lambda)?.as_slice() {
        [mu] => Ok(*mu),
        _ => Err(Error::Precondition(format!("no unique lift of {}", t.cell_name(lambda)))),
    }
}

fn kernel_holds(t: &TwoCategory, n: &TwoIdeal, p: &KernelPresentation, clause: &str, x: &[Id]) -> Result<bool> {
    use Id::*;
    match (clause, x) {
        ("kernel-1", &[M(z), C(beta)]) => Ok(kernel_factor(t, n, p, z, beta)?.is_some()),
        ("kernel-2", &[M(u), M(v), C(lambda)]) => {
            if !n.is_null2(kernel_xi(t, n, p, u, v, lambda)?) {
                return Ok(true);
            }
            Ok(kernel_lifts(t, p.k, u, v, lambda)?.len() == 1)
        }
        _ => Err(Error::Input(format!("malformed tuple for {clause}"))),
    }
}

fn kernel_instances(t: &TwoCategory, n: &TwoIdeal, p: &KernelPresentation, clause: &str) -> Result<Vec<Vec<Id>>> {
    use Id::*;
    let (a, b) = (t.src(p.f), t.tgt(p.f));
    let mut out = Vec::new();
    for z_obj in t.objects() {
        match clause {
            "kernel-1" => {
                let nulls = n.nulls_in(t, z_obj, b);
                for &z in t.hom(z_obj, a) {
                    let fz = t.c(p.f, z)?;
                    for &m in &nulls {
                        out.extend(t.isos(fz, m).iter().map(|&beta| vec![M(z), C(beta)]));
                    }
                }
            }
            "kernel-2" => {
                let homs = t.hom(z_obj, p.obj);
                for &u in homs {
                    for &v in homs {
                        let (ku, kv) = (t.c(p.k, u)?, t.c(p.k, v)?);
                        out.extend(t.cells(ku, kv).iter().map(|&l| vec![M(u), M(v), C(l)]));
                    }
                }
            }
            _ => {}
        }
    }
    Ok(out)
}

pub fn is_two_kernel(t: &TwoCategory, n: &TwoIdeal, p: &KernelPresentation, caps: &Caps) -> Result<Certificate> {
    check_presentation(t, n, p)?;
    sweep::sweep(
        "is_two_kernel",
        t,
        KERNEL_CLAUSES,
        caps,
        |c| kernel_instances(t, n, p, c),
        |c, x| kernel_holds(t, n, p, c, x),
    )
}

pub fn replay_two_kernel(t: &TwoCategory, n: &TwoIdeal, p: &KernelPresentation, cert: &Certificate) -> Result<bool> {
    sweep::replay(t, KERNEL_CLAUSES, cert, |c, x| kernel_holds(t, n, p, c, x))
}

/// Every (K, k, n, α) of the right shape, in declaration order.
pub fn kernel_candidates(t: &TwoCategory, n: &TwoIdeal, f: Mor) -> Result<Vec<KernelPresentation>> {
    let (a, b) = (t.src(f), t.tgt(f));
    let mut out = Vec::new();
    for obj in t.objects() {
        let nulls = n.nulls_in(t, obj, b);
        for &k in t.hom(obj, a) {
            let fk = t.c(f, k)?;
            for &m in &nulls {
                for &alpha in t.isos(fk, m) {
                    out.push(KernelPresentation { f, obj, k, n: m, alpha });
                }
            }
        }
    }
    Ok(out)
}

pub fn two_kernels(t: &TwoCategory, n: &TwoIdeal, f: Mor, caps: &Caps) -> Result<Vec<KernelPresentation>> {
    let cands = kernel_candidates(t, n, f)?;
    caps.check_candidates("two_kernels", cands.len())?;
    par::filter_map(&cands, |p| Ok(is_two_kernel(t, n, p, caps)?.passed().then_some(*p)))
}

/// The chosen kernel: the first passing candidate in declaration order.
pub fn first_kernel(t: &TwoCategory, n: &TwoIdeal, f: Mor, caps: &Caps) -> Result<Option<KernelPresentation>> {
    let cands = kernel_candidates(t, n, f)?;
    caps.check_candidates("two_kernels", cands.len())?;
    par::find_first(&cands, |p| Ok(is_two_kernel(t, n, p, caps)?.passed().then_some(*p)))
}

fn as_cokernel(mut c: Certificate) -> Certificate {
    c.check = c.check.replace("kernel", "cokernel");
    if let Some(cx) = c.counterexample.as_mut() {
        cx.clause = cx.clause.replace("kernel", "cokernel");
    }
    c
}

pub fn is_two_cokernel(t: &TwoCategory, n: &TwoIdeal, p: &KernelPresentation, caps: &Caps) -> Result<Certificate> {
    Ok(as_cokernel(is_two_kernel(&t.dual(), &n.dual(), p, caps)?))
}

pub fn two_cokernels(t: &TwoCategory, n: &TwoIdeal, f: Mor, caps: &Caps) -> Result<Vec<KernelPresentation>> {
    two_kernels(&t.dual(), &n.dual(), f, caps)
}

impl Setting<'_> {
    pub fn kernels(&self, f: Mor, caps: &Caps) -> Result<Vec<KernelPresentation>> {
        two_kernels(self.t, self.n, f, caps)
    }
    pub fn cokernels(&self, f: Mor, caps: &Caps) -> Result<Vec<KernelPresentation>> {
        two_kernels(&self.dt, &self.dn, f, caps)
    }
    pub fn first_kernel(&self, f: Mor, caps: &Caps) -> Result<Option<KernelPresentation>> {
        first_kernel(self.t, self.n, f, caps)
    }
    pub fn first_cokernel(&self, f: Mor, caps: &Caps) -> Result<Option<KernelPresentation>> {
        first_kernel(&self.dt, &self.dn, f, caps)
    }
    pub fn is_cokernel(&self, p: &KernelPresentation, caps: &Caps) -> Result<Certificate> {
        check_presentation(&self.dt, &self.dn, p)?;
        Ok(as_cokernel(is_two_kernel(&self.dt, &self.dn, p, caps)?))
    }
}

/// (L, ℓ, λ) with λ: f∘ℓ ⇒ g∘ℓ invertible.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Isoinserter {
    pub obj: Ob,
    pub leg: Mor,
    pub lambda: Cell,
}

pub const ISOINSERTER_CLAUSES: Clauses = &[("isoinserter-1", "MC"), ("isoinserter-2", "MMC")];

fn isoinserter_holds(t: &TwoCategory, f: Mor, g: Mor, l: &Isoinserter, clause: &str, x: &[Id]) -> Result<bool> {
    use Id::*;
    match (clause, x) {
        ("isoinserter-1", &[M(m), C(mu)]) => {
            for &v in t.hom(t.src(m), l.obj) {
                for &d in t.isos(m, t.c(l.leg, v)?) {
                    let pasted = t.seq(&[t.lw(f, d)?, t.rw(l.lambda, v)?, t.lw(g, t.inv(d)?)?])?;
                    if pasted == mu {
                        return Ok(true);
                    }
                }
            }
            Ok(false)
        }
        ("isoinserter-2", &[M(v), M(w), C(tau)]) => {
            let lhs = t.v(t.rw(l.lambda, w)?, t.lw(f, tau)?)?;
            let rhs = t.v(t.lw(g, tau)?, t.rw(l.lambda, v)?)?;
            Ok(lhs != rhs || kernel_lifts(t, l.leg, v, w, tau)?.len() == 1)
        }
        _ => Err(Error::Input(format!("malformed tuple for {clause}"))),
    }
}

fn isoinserter_instances(t: &TwoCategory, f: Mor, g: Mor, l: &Isoinserter, clause: &str) -> Result<Vec<Vec<Id>>> {
    use Id::*;
    let mut out = Vec::new();
    for m_obj in t.objects() {
        if clause == "isoinserter-1" {
            for &m in t.hom(m_obj, t.src(f)) {
                out.extend(t.isos(t.c(f, m)?, t.c(g, m)?).iter().map(|&mu| vec![M(m), C(mu)]));
            }
        } else {
            let homs = t.hom(m_obj, l.obj);
            for &v in homs {
                for &w in homs {
                    let (lv, lw) = (t.c(l.leg, v)?, t.c(l.leg, w)?);
                    out.extend(t.cells(lv, lw).iter().map(|&tau| vec![M(v), M(w), C(tau)]));
                }
            }
        }
    }
    Ok(out)
}

pub fn is_biisoinserter(t: &TwoCategory, f: Mor, g: Mor, l: &Isoinserter, caps: &Caps) -> Result<Certificate> {
    sweep::sweep(
        "is_biisoinserter",
        t,
        ISOINSERTER_CLAUSES,
        caps,
        |c| isoinserter_instances(t, f, g, l, c),
        |c, x| isoinserter_holds(t, f, g, l, c, x),
    )
}

pub fn biisoinserter(t: &TwoCategory, f: Mor, g: Mor, caps: &Caps) -> Result<Vec<Isoinserter>> {
    if !t.parallel(f, g) {
        return Err(Error::Input(format!("{} and {} are not parallel", t.mor_name(f), t.mor_name(g))));
    }
    let mut cands = Vec::new();
    for obj in t.objects() {
        for &leg in t.hom(obj, t.src(f)) {
            for &lambda in t.isos(t.c(f, leg)?, t.c(g, leg)?) {
                cands.push(Isoinserter { obj, leg, lambda });
            }
        }
    }
    caps.check_candidates("biisoinserter", cands.len())?;
    par::filter_map(&cands, |l| Ok(is_biisoinserter(t, f, g, l, caps)?.passed().then_some(*l)))
}

/// An equivalence j: K → K' with an invertible γ: k ⇒ k'∘j, if any.
pub fn kernels_equivalent(t: &TwoCategory, k: Mor, k2: Mor) -> Result<Option<(Mor, Cell)>> {
    let (obj, obj2) = (t.src(k), t.src(k2));
    for &j in t.hom(obj, obj2) {
        if crate::core2::find_equivalence(t, j)?.is_none() {
            continue;
        }
        if let Some(&gamma) = t.isos(k, t.c(k2, j)?).first() {
            return Ok(Some((j, gamma)));
        }
    }
    Ok(None)
}
