//! Equivalence of two ideals on the same 2-category, witnessed by
//! counterpart isomorphisms Ξ_n: n' ⇒ n (n null in N, n' null in N') and
//! Ξ'_{n'}: m ⇒ n' (m null in N), and the transport of kernels along it.

use serde_json::{json, Value};

use crate::cert::{Caps, Certificate};
use crate::core2::{Cell, Id, Mor, TwoCategory};
use crate::error::{Error, Result};
use crate::ideal::TwoIdeal;
use crate::limits::KernelPresentation;
use crate::sweep::{self, Clauses};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdealEquivalenceWitness {
    /// Indexed by 1-cell: for n null in N, (n', Ξ_n: n' ⇒ n).
    pub xi: Vec<Option<(Mor, Cell)>>,
    /// Indexed by 1-cell: for n' null in N', (m, Ξ'_{n'}: m ⇒ n').
    pub xi_prime: Vec<Option<(Mor, Cell)>>,
}

impl IdealEquivalenceWitness {
    pub fn identity(t: &TwoCategory, n: &TwoIdeal) -> Self {
        let xi: Vec<_> = t.mors().map(|m| n.is_null(m).then(|| (m, t.id2(m)))).collect();
        IdealEquivalenceWitness { xi_prime: xi.clone(), xi }
    }

    /// The witness for (N', N).
    pub fn swapped(&self) -> Self {
        IdealEquivalenceWitness { xi: self.xi_prime.clone(), xi_prime: self.xi.clone() }
    }

    fn get(&self, m: Mor) -> Option<(Mor, Cell)> {
        self.xi.get(m.ix()).copied().flatten()
    }

    fn get_prime(&self, m: Mor) -> Option<(Mor, Cell)> {
        self.xi_prime.get(m.ix()).copied().flatten()
    }

    pub fn to_json(&self, t: &TwoCategory) -> Value {
        let side = |v: &[Option<(Mor, Cell)>]| -> Vec<Value> {
            v.iter()
                .enumerate()
                .filter_map(|(i, e)| {
                    e.map(|(m, c)| {
                        json!({"null": t.mor_name(Mor(i as u32)), "counterpart": t.mor_name(m), "iso": t.cell_name(c)})
                    })
                })
                .collect()
        };
        json!({"xi": side(&self.xi), "xi_prime": side(&self.xi_prime)})
    }
}

pub const EQUIV_CLAUSES: Clauses = &[
    ("eq-A", "M"),
    ("eq-B", "M"),
    ("eq-1", "C"),
    ("eq-2", "MMC"),
    ("eq-3", "MMM"),
    ("eq-4", "M"),
];

/// Consequences of the defining properties, checked on every witness found.
pub const DERIVED_CLAUSES: Clauses = &[("eq-1+2", "C"), ("eq-1'", "C"), ("eq-4'", "M")];

struct Pair<'a> {
    t: &'a TwoCategory,
    n: &'a TwoIdeal,
    n2: &'a TwoIdeal,
}

impl Pair<'_> {
    fn a_ok(&self, w: &IdealEquivalenceWitness, m: Mor) -> bool {
        matches!(w.get(m), Some((m2, xi)) if self.n2.is_null(m2) && self.t.dom(xi) == m2 && self.t.cod(xi) == m && self.t.is_invertible(xi))
    }

    fn b_ok(&self, w: &IdealEquivalenceWitness, m2: Mor) -> bool {
        matches!(w.get_prime(m2), Some((m, xi)) if self.n.is_null(m) && self.t.dom(xi) == m && self.t.cod(xi) == m2 && self.t.is_invertible(xi))
    }

    /// Ξ_n⁻¹·α·Ξ_m for α: m ⇒ n.
    fn transport(&self, w: &IdealEquivalenceWitness, alpha: Cell) -> Result<Option<Cell>> {
        let t = self.t;
        let (Some((_, xm)), Some((_, xn))) = (w.get(t.dom(alpha)), w.get(t.cod(alpha))) else { return Ok(None) };
        Ok(Some(t.seq(&[xm, alpha, t.inv(xn)?])?))
    }

    /// ν'-side to counterpart: Ξ⁻¹_{n̂}·ν_{a,b,n}·(b⋆Ξ_n⋆a)·ν'⁻¹_{a,b,n'}.
    fn prop3(&self, w: &IdealEquivalenceWitness, m: Mor, a: Mor, b: Mor) -> Result<Option<Cell>> {
        let t = self.t;
        let (hat, nu) = self.n.rep(a, m, b)?;
        let (Some((m2, xm)), Some((_, xhat))) = (w.get(m), w.get(hat)) else { return Ok(None) };
        let nu2 = self.n2.nu(a, m2, b)?;
        Ok(Some(t.seq(&[t.inv(nu2)?, t.wh(b, xm, a)?, nu, t.inv(xhat)?])?))
    }

    /// Ξ_m⁻¹·Ξ'_{n'}⁻¹: n' ⇒ m'.
    fn prop4(&self, w: &IdealEquivalenceWitness, m2: Mor) -> Result<Option<Cell>> {
        let t = self.t;
        let Some((m, xp)) = w.get_prime(m2) else { return Ok(None) };
        let Some((_, x)) = w.get(m) else { return Ok(None) };
        Ok(Some(t.v(t.inv(x)?, t.inv(xp)?)?))
    }

    /// `Ok(true)` also when the tuple involves a still-unassigned counterpart.
    fn holds(&self, w: &IdealEquivalenceWitness, clause: &str, x: &[Id]) -> Result<bool> {
        use Id::*;
        let (t, n, n2) = (self.t, self.n, self.n2);
        Ok(match (clause, x) {
            ("eq-A", &[M(m)]) => self.a_ok(w, m),
            ("eq-B", &[M(m2)]) => self.b_ok(w, m2),
            ("eq-1", &[C(alpha)]) => self.transport(w, alpha)?.is_none_or(|c| n2.is_null2(c)),
            ("eq-2", &[M(m), M(k), C(beta)]) => {
                let (Some((_, xm)), Some((_, xk))) = (w.get(m), w.get(k)) else { return Ok(true) };
                n.is_null2(t.seq(&[t.inv(xm)?, beta, xk])?)
            }
            ("eq-3", &[M(m), M(a), M(b)]) => self.prop3(w, m, a, b)?.is_none_or(|c| n2.is_invertible_null(t, c)),
            ("eq-4", &[M(m2)]) => self.prop4(w, m2)?.is_none_or(|c| n2.is_invertible_null(t, c)),
            ("eq-1+2", &[C(alpha)]) => match self.transport(w, alpha)? {
                Some(c) => n2.is_null2(c) == n.is_null2(alpha),
                None => true,
            },
            ("eq-1'", &[C(beta)]) => {
                let (Some((_, xa)), Some((_, xb))) = (w.get_prime(t.dom(beta)), w.get_prime(t.cod(beta))) else {
                    return Ok(true);
                };
                n.is_null2(t.seq(&[xa, beta, t.inv(xb)?])?)
            }
            ("eq-4'", &[M(m)]) => {
                let Some((m2, x)) = w.get(m) else { return Ok(true) };
                let Some((_, xp)) = w.get_prime(m2) else { return Ok(true) };
                n.is_invertible_null(t, t.v(t.inv(xp)?, t.inv(x)?)?)
            }
            _ => return Err(Error::Input(format!("malformed tuple for {clause}"))),
        })
    }

    fn instances(&self, clause: &str) -> Result<Vec<Vec<Id>>> {
        use Id::*;
        let (t, n, n2) = (self.t, self.n, self.n2);
        let mut out = Vec::new();
        match clause {
            "eq-A" | "eq-4'" => out.extend(n.null_mors(t).map(|m| vec![M(m)])),
            "eq-B" | "eq-4" => out.extend(n2.null_mors(t).map(|m| vec![M(m)])),
            "eq-1" => out.extend(n.null_cells(t).map(|c| vec![C(c)])),
            "eq-1'" => out.extend(n2.null_cells(t).map(|c| vec![C(c)])),
            "eq-1+2" => {
                for c in t.cells_all() {
                    if n.is_null(t.dom(c)) && n.is_null(t.cod(c)) {
                        out.push(vec![C(c)]);
                    }
                }
            }
            "eq-2" => {
                for a in t.objects() {
                    for b in t.objects() {
                        let nulls = n.nulls_in(t, a, b);
                        for &m in &nulls {
                            for &k in &nulls {
                                // β ranges over all N'-null cells between the counterparts;
                                // listed against every parallel pair of N'-nulls
                                for m2 in n2.nulls_in(t, a, b) {
                                    for k2 in n2.nulls_in(t, a, b) {
                                        for &beta in t.cells(m2, k2) {
                                            if n2.is_null2(beta) {
                                                out.push(vec![M(m), M(k), C(beta)]);
                                            }
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
            "eq-3" => {
                for m in n.null_mors(t) {
                    for &a in t.mors_into(t.src(m)) {
                        for &b in t.mors_from(t.tgt(m)) {
                            out.push(vec![M(m), M(a), M(b)]);
                        }
                    }
                }
            }
            _ => {}
        }
        Ok(out)
    }
}

/// eq-2 instances only count when β runs between the counterparts of m, k.
fn eq2_relevant(t: &TwoCategory, w: &IdealEquivalenceWitness, x: &[Id]) -> bool {
    match x {
        &[Id::M(m), Id::M(k), Id::C(beta)] => {
            matches!((w.get(m), w.get(k)), (Some((m2, _)), Some((k2, _))) if t.dom(beta) == m2 && t.cod(beta) == k2)
        }
        _ => true,
    }
}

fn run_clauses(p: &Pair, w: &IdealEquivalenceWitness, check: &str, clauses: Clauses, caps: &Caps) -> Result<Certificate> {
    sweep::sweep(
        check,
        p.t,
        clauses,
        caps,
        |c| {
            let mut v = p.instances(c)?;
            if c == "eq-2" {
                v.retain(|x| eq2_relevant(p.t, w, x));
            }
            Ok(v)
        },
        |c, x| p.holds(w, c, x),
    )
}

pub fn validate_witness(
    t: &TwoCategory,
    n: &TwoIdeal,
    n2: &TwoIdeal,
    w: &IdealEquivalenceWitness,
    caps: &Caps,
) -> Result<Certificate> {
    if w.xi.len() != t.n_mors() || w.xi_prime.len() != t.n_mors() {
        return Err(Error::Input("witness tables do not match the 1-cells".into()));
    }
    run_clauses(&Pair { t, n, n2 }, w, "validate_equivalence_witness", EQUIV_CLAUSES, caps)
}

pub fn check_derived(
    t: &TwoCategory,
    n: &TwoIdeal,
    n2: &TwoIdeal,
    w: &IdealEquivalenceWitness,
    caps: &Caps,
) -> Result<Certificate> {
    run_clauses(&Pair { t, n, n2 }, w, "equivalence_derived_properties", DERIVED_CLAUSES, caps)
}

pub fn replay_witness(t: &TwoCategory, n: &TwoIdeal, n2: &TwoIdeal, w: &IdealEquivalenceWitness, cert: &Certificate) -> Result<bool> {
    let p = Pair { t, n, n2 };
    let all: Vec<_> = EQUIV_CLAUSES.iter().chain(DERIVED_CLAUSES).copied().collect();
    let all: &'static [(&'static str, &'static str)] = Box::leak(all.into_boxed_slice());
    sweep::replay(t, all, cert, |c, x| p.holds(w, c, x))
}

/// Exhaustive search for a witness; first assignment in declaration order.
pub fn ideals_equivalent(t: &TwoCategory, n: &TwoIdeal, n2: &TwoIdeal, caps: &Caps) -> Result<(Certificate, Option<IdealEquivalenceWitness>)> {
    const CHECK: &str = "ideals_equivalent";
    let p = Pair { t, n, n2 };
    // counterpart c of m paired with an iso c ⇒ m
    let options = |side: &TwoIdeal, m: Mor| -> Vec<(Mor, Cell)> {
        let mut v = Vec::new();
        for c in side.nulls_in(t, t.src(m), t.tgt(m)) {
            v.extend(t.isos(c, m).iter().map(|&x| (c, x)));
        }
        v
    };
    let vars: Vec<Mor> = n.null_mors(t).collect();
    let domains: Vec<Vec<(Mor, Cell)>> = vars.iter().map(|&m| options(n2, m)).collect();
    if let Some(i) = domains.iter().position(|d| d.is_empty()) {
        return Ok((Certificate::fail(CHECK, "eq-A", vec![t.mor_name(vars[i]).into()]), None));
    }
    let mut w = IdealEquivalenceWitness { xi: vec![None; t.n_mors()], xi_prime: vec![None; t.n_mors()] };
    for m2 in n2.null_mors(t) {
        if options(n, m2).is_empty() {
            return Ok((Certificate::fail(CHECK, "eq-B", vec![t.mor_name(m2).into()]), None));
        }
    }
    let mut budget = caps.candidates;
    if !search(&p, &vars, &domains, 0, &mut w, &mut budget)? {
        return Ok((Certificate::fail(CHECK, "eq-123", vec![]), None));
    }
    // Ξ' is chosen independently per N'-null, subject to property (4)
    for m2 in n2.null_mors(t) {
        let mut found = false;
        for opt in options(n, m2) {
            w.xi_prime[m2.ix()] = Some(opt);
            if p.holds(&w, "eq-4", &[Id::M(m2)])? {
                found = true;
                break;
            }
        }
        if !found {
            return Ok((Certificate::fail(CHECK, "eq-4", vec![t.mor_name(m2).into()]), None));
        }
    }
    let cert = validate_witness(t, n, n2, &w, caps)?;
    if !cert.passed() {
        return Err(Error::Precondition(format!("search produced an invalid witness: {cert:?}")));
    }
    Ok((Certificate::pass_with(CHECK, w.to_json(t)), Some(w)))
}

fn search(
    p: &Pair,
    vars: &[Mor],
    domains: &[Vec<(Mor, Cell)>],
    i: usize,
    w: &mut IdealEquivalenceWitness,
    budget: &mut usize,
) -> Result<bool> {
    if i == vars.len() {
        return Ok(true);
    }
    let m = vars[i];
    for &opt in &domains[i] {
        if *budget == 0 {
            return Err(Error::CapExceeded("ideals_equivalent: search nodes".into()));
        }
        *budget -= 1;
        w.xi[m.ix()] = Some(opt);
        if consistent(p, w, m)? && search(p, vars, domains, i + 1, w, budget)? {
            return Ok(true);
        }
    }
    w.xi[m.ix()] = None;
    Ok(false)
}

/// Every property instance touching m whose counterparts are all assigned.
fn consistent(p: &Pair, w: &IdealEquivalenceWitness, m: Mor) -> Result<bool> {
    use Id::*;
    let (t, n, n2) = (p.t, p.n, p.n2);
    let (a, b) = (t.src(m), t.tgt(m));
    let (m2, _) = w.get(m).expect("assigned");
    for k in n.nulls_in(t, a, b) {
        let Some((k2, _)) = w.get(k) else { continue };
        for (x, y, x2, y2) in [(m, k, m2, k2), (k, m, k2, m2)] {
            for &alpha in t.cells(x, y) {
                if n.is_null2(alpha) && !p.holds(w, "eq-1", &[C(alpha)])? {
                    return Ok(false);
                }
            }
            for &beta in t.cells(x2, y2) {
                if n2.is_null2(beta) && !p.holds(w, "eq-2", &[M(x), M(y), C(beta)])? {
                    return Ok(false);
                }
            }
        }
    }
    // property (3) with m as the middle null or as the replacement
    for &ea in t.mors_into(a) {
        for &eb in t.mors_from(b) {
            if !p.holds(w, "eq-3", &[M(m), M(ea), M(eb)])? {
                return Ok(false);
            }
        }
    }
    for k in n.null_mors(t) {
        for &ea in t.mors_into(t.src(k)) {
            if t.src(ea) != a {
                continue;
            }
            for &eb in t.mors_from(t.tgt(k)) {
                if t.tgt(eb) == b && n.tilde(ea, k, eb)? == m && !p.holds(w, "eq-3", &[M(k), M(ea), M(eb)])? {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// (f, K, k, n', Ξ⁻¹_n·α): the same kernel leg presented for N'.
pub fn transfer_kernel(
    t: &TwoCategory,
    n: &TwoIdeal,
    n2: &TwoIdeal,
    w: &IdealEquivalenceWitness,
    p: &KernelPresentation,
    caps: &Caps,
) -> Result<KernelPresentation> {
    if !validate_witness(t, n, n2, w, caps)?.passed() {
        return Err(Error::Input("invalid equivalence witness".into()));
    }
    let (m2, xi) = w.get(p.n).ok_or_else(|| Error::Input(format!("{} has no counterpart", t.mor_name(p.n))))?;
    Ok(KernelPresentation { n: m2, alpha: t.v(t.inv(xi)?, p.alpha)?, ..*p })
}

/// Cokernel presentations transfer by the same formula in the dual.
pub fn transfer_cokernel(
    t: &TwoCategory,
    n: &TwoIdeal,
    n2: &TwoIdeal,
    w: &IdealEquivalenceWitness,
    p: &KernelPresentation,
    caps: &Caps,
) -> Result<KernelPresentation> {
    transfer_kernel(&t.dual(), &n.dual(), &n2.dual(), w, p, caps)
}
