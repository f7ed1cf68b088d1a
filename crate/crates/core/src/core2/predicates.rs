use serde_json::json;

use super::{Cell, Mor, TwoCategory};
use crate::cert::Certificate;
use crate::error::Result;

/// Whiskering with `f` is injective on every hom-set of 2-cells.
pub fn is_faithful(t: &TwoCategory, f: Mor) -> Result<Certificate> {
    const CHECK: &str = "is_faithful";
    for &g in t.mors_into(t.src(f)) {
        for &g2 in t.hom(t.src(g), t.tgt(g)) {
            let cells = t.cells(g, g2);
            for (i, &a) in cells.iter().enumerate() {
                let fa = t.lw(f, a)?;
                for &b in &cells[i + 1..] {
                    if t.lw(f, b)? == fa {
                        return Ok(Certificate::fail(CHECK, "faithful", cell_names(t, f, a, b)));
                    }
                }
            }
        }
    }
    Ok(Certificate::pass(CHECK))
}

pub fn is_cofaithful(t: &TwoCategory, f: Mor) -> Result<Certificate> {
    let mut c = is_faithful(&t.dual(), f)?;
    c.check = "is_cofaithful".into();
    if let Some(cx) = c.counterexample.as_mut() {
        cx.clause = "cofaithful".into();
    }
    Ok(c)
}

fn cell_names(t: &TwoCategory, f: Mor, a: Cell, b: Cell) -> Vec<String> {
    vec![t.mor_name(f).into(), t.cell_name(a).into(), t.cell_name(b).into()]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EquivalenceWitness {
    pub inverse: Mor,
    /// id ⇒ g∘f
    pub unit: Cell,
    /// f∘g ⇒ id
    pub counit: Cell,
}

pub fn find_equivalence(t: &TwoCategory, f: Mor) -> Result<Option<EquivalenceWitness>> {
    let (a, b) = (t.src(f), t.tgt(f));
    if t.is_identity_mor(f) {
        let i = t.id2(f);
        return Ok(Some(EquivalenceWitness { inverse: f, unit: i, counit: i }));
    }
    for &g in t.hom(b, a) {
        let unit = t.isos(t.id1(a), t.c(g, f)?).first().copied();
        let counit = t.isos(t.c(f, g)?, t.id1(b)).first().copied();
        if let (Some(unit), Some(counit)) = (unit, counit) {
            return Ok(Some(EquivalenceWitness { inverse: g, unit, counit }));
        }
    }
    Ok(None)
}

pub fn is_equivalence(t: &TwoCategory, f: Mor) -> Result<Certificate> {
    const CHECK: &str = "is_equivalence";
    Ok(match find_equivalence(t, f)? {
        Some(w) => Certificate::pass_with(
            CHECK,
            json!({
                "inverse": t.mor_name(w.inverse),
                "unit": t.cell_name(w.unit),
                "counit": t.cell_name(w.counit),
            }),
        ),
        None => Certificate::fail(CHECK, "no-inverse", vec![t.mor_name(f).into()]),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;

    #[test]
    fn identities_are_faithful_and_equivalences() {
        for name in ["pb2", "chaotic-pb1", "loop-on-null", "faithless"] {
            let t = gen::fixture(name).unwrap();
            for o in t.objects() {
                let i = t.id1(o);
                assert!(is_faithful(&t, i).unwrap().passed());
                assert!(is_cofaithful(&t, i).unwrap().passed());
                let w = find_equivalence(&t, i).unwrap().unwrap();
                assert_eq!(w.inverse, i);
            }
        }
    }

    #[test]
    fn locally_discrete_is_faithful_and_equivalence_is_iso() {
        let t = gen::fixture("pb2").unwrap();
        for f in t.mors() {
            assert!(is_faithful(&t, f).unwrap().passed());
            let iso = t.hom(t.tgt(f), t.src(f)).iter().any(|&g| {
                t.c(g, f).unwrap() == t.id1(t.src(f)) && t.c(f, g).unwrap() == t.id1(t.tgt(f))
            });
            assert_eq!(is_equivalence(&t, f).unwrap().passed(), iso, "{}", t.mor_name(f));
        }
        let inj = t.mor_by_name("pb1>2:1").unwrap();
        assert!(is_equivalence(&t, inj).unwrap().failed());
    }

    #[test]
    fn faithless_fixture_counterexample() {
        let t = gen::fixture("faithless").unwrap();
        let f = t.mor_by_name("e").unwrap();
        let c = is_faithful(&t, f).unwrap();
        assert!(c.failed());
        let cells = &c.counterexample.as_ref().unwrap().cells;
        assert_eq!(cells[1..], ["1_g".to_string(), "x_g".to_string()]);
    }

    #[test]
    fn faithful_dualizes() {
        for name in ["chaotic-pb1", "loop-on-null", "faithless"] {
            let t = gen::fixture(name).unwrap();
            let d = t.dual();
            for f in t.mors() {
                assert_eq!(is_faithful(&t, f).unwrap().status, is_cofaithful(&d, f).unwrap().status);
            }
        }
    }

    #[test]
    fn chaotic_equivalence_iff_homs_both_ways() {
        let t = gen::fixture("chaotic-pb1").unwrap();
        for f in t.mors() {
            let back = !t.hom(t.tgt(f), t.src(f)).is_empty();
            assert_eq!(is_equivalence(&t, f).unwrap().passed(), back);
        }
    }
}
