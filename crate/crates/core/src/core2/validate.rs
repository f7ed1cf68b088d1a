//! Exhaustive check of the strict 2-category axioms.
//!
//! Each clause is a predicate on a tuple of cells; the validator walks the
//! tuples in index order and reports the first violation, and
//! [`replay_two_category`] re-evaluates a reported clause on its tuple.

use super::{Cell, Mor, TwoCategory};
use crate::cert::Certificate;
use crate::error::{Error, Result};

pub const CHECK: &str = "validate_two_category";

#[derive(Debug, Clone, Copy)]
#[allow(clippy::upper_case_acronyms)]
enum Tuple {
    M3(Mor, Mor, Mor),
    M1(Mor),
    C3(Cell, Cell, Cell),
    C1(Cell),
    MC(Mor, Cell),
    MCC(Mor, Cell, Cell),
    CM(Cell, Mor),
    CCM(Cell, Cell, Mor),
    MMC(Mor, Mor, Cell),
    CMM(Cell, Mor, Mor),
    MCM(Mor, Cell, Mor),
    CC(Cell, Cell),
}

/// Evaluates one clause; `Ok(true)` means the clause holds.
fn holds(t: &TwoCategory, clause: &str, x: Tuple) -> Result<bool> {
    use Tuple::*;
    Ok(match (clause, x) {
        ("comp1-assoc", M3(h, g, f)) => t.c(h, t.c(g, f)?)? == t.c(t.c(h, g)?, f)?,
        ("comp1-unit", M1(f)) => t.c(f, t.id1(t.src(f)))? == f && t.c(t.id1(t.tgt(f)), f)? == f,
        ("vcomp-assoc", C3(c, b, a)) => t.v(c, t.v(b, a)?)? == t.v(t.v(c, b)?, a)?,
        ("vcomp-unit", C1(a)) => t.v(a, t.id2(t.dom(a)))? == a && t.v(t.id2(t.cod(a)), a)? == a,
        ("lwhisker-id2", MC(h, a)) => t.lw(h, t.id2(t.dom(a)))? == t.id2(t.c(h, t.dom(a))?),
        ("lwhisker-vcomp", MCC(h, b, a)) => t.lw(h, t.v(b, a)?)? == t.v(t.lw(h, b)?, t.lw(h, a)?)?,
        ("rwhisker-id2", CM(a, e)) => t.rw(t.id2(t.dom(a)), e)? == t.id2(t.c(t.dom(a), e)?),
        ("rwhisker-vcomp", CCM(b, a, e)) => t.rw(t.v(b, a)?, e)? == t.v(t.rw(b, e)?, t.rw(a, e)?)?,
        ("lwhisker-comp1", MMC(h2, h, a)) => t.lw(t.c(h2, h)?, a)? == t.lw(h2, t.lw(h, a)?)?,
        ("lwhisker-unit", C1(a)) => t.lw(t.id1(t.tgt(t.dom(a))), a)? == a,
        ("rwhisker-comp1", CMM(a, e, e2)) => t.rw(a, t.c(e, e2)?)? == t.rw(t.rw(a, e)?, e2)?,
        ("rwhisker-unit", C1(a)) => t.rw(a, t.id1(t.src(t.dom(a))))? == a,
        ("whisker-bimodule", MCM(h, a, e)) => t.lw(h, t.rw(a, e)?)? == t.rw(t.lw(h, a)?, e)?,
        ("interchange", CC(b, a)) => {
            t.v(t.rw(b, t.cod(a))?, t.lw(t.dom(b), a)?)? == t.v(t.lw(t.cod(b), a)?, t.rw(b, t.dom(a))?)?
        }
        _ => return Err(Error::Input(format!("unknown clause {clause} for this tuple"))),
    })
}

fn names(t: &TwoCategory, x: Tuple) -> Vec<String> {
    use Tuple::*;
    let m = |f: Mor| t.mor_name(f).to_string();
    let c = |a: Cell| t.cell_name(a).to_string();
    match x {
        M3(a, b, d) => vec![m(a), m(b), m(d)],
        M1(a) => vec![m(a)],
        C3(a, b, d) => vec![c(a), c(b), c(d)],
        C1(a) => vec![c(a)],
        MC(a, b) => vec![m(a), c(b)],
        MCC(a, b, d) => vec![m(a), c(b), c(d)],
        CM(a, b) => vec![c(a), m(b)],
        CCM(a, b, d) => vec![c(a), c(b), m(d)],
        MMC(a, b, d) => vec![m(a), m(b), c(d)],
        CMM(a, b, d) => vec![c(a), m(b), m(d)],
        MCM(a, b, d) => vec![m(a), c(b), m(d)],
        CC(a, b) => vec![c(a), c(b)],
    }
}

/// Iterates all clause instances in a fixed order, stopping at the first
/// one for which `visit` returns `Some`.
fn walk<R>(t: &TwoCategory, mut visit: impl FnMut(&'static str, Tuple) -> Result<Option<R>>) -> Result<Option<R>> {
    use Tuple::*;
    macro_rules! go {
        ($c:expr, $x:expr) => {
            if let Some(r) = visit($c, $x)? {
                return Ok(Some(r));
            }
        };
    }
    let mors: Vec<Mor> = t.mors().collect();
    let cells: Vec<Cell> = t.cells_all().collect();
    for &f in &mors {
        go!("comp1-unit", M1(f));
    }
    for &f in &mors {
        for &g in t.mors_from(t.tgt(f)) {
            for &h in t.mors_from(t.tgt(g)) {
                go!("comp1-assoc", M3(h, g, f));
            }
        }
    }
    for &a in &cells {
        go!("vcomp-unit", C1(a));
    }
    for &a in &cells {
        for &b in t.cells_from(t.cod(a)) {
            for &c in t.cells_from(t.cod(b)) {
                go!("vcomp-assoc", C3(c, b, a));
            }
        }
    }
    for &a in &cells {
        go!("lwhisker-unit", C1(a));
        go!("rwhisker-unit", C1(a));
    }
    for &a in &cells {
        let f = t.dom(a);
        for &h in t.mors_from(t.tgt(f)) {
            go!("lwhisker-id2", MC(h, a));
        }
        for &e in t.mors_into(t.src(f)) {
            go!("rwhisker-id2", CM(a, e));
        }
    }
    for &a in &cells {
        for &b in t.cells_from(t.cod(a)) {
            for &h in t.mors_from(t.tgt(t.dom(a))) {
                go!("lwhisker-vcomp", MCC(h, b, a));
            }
            for &e in t.mors_into(t.src(t.dom(a))) {
                go!("rwhisker-vcomp", CCM(b, a, e));
            }
        }
    }
    for &a in &cells {
        let f = t.dom(a);
        for &h in t.mors_from(t.tgt(f)) {
            for &h2 in t.mors_from(t.tgt(h)) {
                go!("lwhisker-comp1", MMC(h2, h, a));
            }
        }
        for &e in t.mors_into(t.src(f)) {
            for &e2 in t.mors_into(t.src(e)) {
                go!("rwhisker-comp1", CMM(a, e, e2));
            }
        }
        for &h in t.mors_from(t.tgt(f)) {
            for &e in t.mors_into(t.src(f)) {
                go!("whisker-bimodule", MCM(h, a, e));
            }
        }
    }
    for &a in &cells {
        for &b in &cells {
            if t.src(t.dom(b)) == t.tgt(t.dom(a)) {
                go!("interchange", CC(b, a));
            }
        }
    }
    Ok(None)
}

pub fn validate_two_category(t: &TwoCategory) -> Result<Certificate> {
    let bad = walk(t, |clause, x| Ok((!holds(t, clause, x)?).then(|| (clause, names(t, x)))))?;
    Ok(match bad {
        None => Certificate::pass(CHECK),
        Some((clause, cells)) => Certificate::fail(CHECK, clause, cells),
    })
}

/// Re-evaluates the cited clause of a fail certificate; `Ok(true)` means the
/// violation is reproduced.
pub fn replay_two_category(t: &TwoCategory, cert: &Certificate) -> Result<bool> {
    let cx = cert.counterexample.as_ref().ok_or_else(|| Error::Input("no counterexample".into()))?;
    let tuple = resolve(t, &cx.clause, &cx.cells)?;
    Ok(!holds(t, &cx.clause, tuple)?)
}

fn resolve(t: &TwoCategory, clause: &str, cells: &[String]) -> Result<Tuple> {
    use Tuple::*;
    let m = |i: usize| -> Result<Mor> {
        cells.get(i).and_then(|n| t.mor_by_name(n)).ok_or_else(|| Error::Input(format!("bad 1-cell in tuple at {i}")))
    };
    let c = |i: usize| -> Result<Cell> {
        cells.get(i).and_then(|n| t.cell_by_name(n)).ok_or_else(|| Error::Input(format!("bad 2-cell in tuple at {i}")))
    };
    Ok(match clause {
        "comp1-assoc" => M3(m(0)?, m(1)?, m(2)?),
        "comp1-unit" => M1(m(0)?),
        "vcomp-assoc" => C3(c(0)?, c(1)?, c(2)?),
        "vcomp-unit" | "lwhisker-unit" | "rwhisker-unit" => C1(c(0)?),
        "lwhisker-id2" => MC(m(0)?, c(1)?),
        "lwhisker-vcomp" => MCC(m(0)?, c(1)?, c(2)?),
        "rwhisker-id2" => CM(c(0)?, m(1)?),
        "rwhisker-vcomp" => CCM(c(0)?, c(1)?, m(2)?),
        "lwhisker-comp1" => MMC(m(0)?, m(1)?, c(2)?),
        "rwhisker-comp1" => CMM(c(0)?, m(1)?, m(2)?),
        "whisker-bimodule" => MCM(m(0)?, c(1)?, m(2)?),
        "interchange" => CC(c(0)?, c(1)?),
        other => return Err(Error::Input(format!("unknown clause {other}"))),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;

    #[test]
    fn generators_validate() {
        for name in ["terminal", "pb2", "ct22", "ps2", "chaotic-pb1", "loop-on-null", "faithless"] {
            let t = gen::fixture(name).unwrap();
            let c = validate_two_category(&t).unwrap();
            assert!(c.passed(), "{name}: {c:?}");
        }
    }

    #[test]
    fn retargeted_vcomp_fails_and_replays() {
        let t = gen::fixture("loop-on-null").unwrap();
        let m = gen::mutate::retarget_vcomp(&t, 0).unwrap();
        let c = validate_two_category(&m).unwrap();
        assert!(c.failed());
        let clause = c.clause().unwrap();
        assert!(clause.starts_with("vcomp-"), "{clause}");
        assert!(replay_two_category(&m, &c).unwrap());
        // the same tuple holds in the unmutated category
        assert!(!replay_two_category(&t, &c).unwrap());
    }
}
