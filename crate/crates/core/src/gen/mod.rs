//! Deterministic fixture generators.
//!
//! Categories are skeletal: one object per isomorphism class. Morphisms are
//! enumerated lexicographically with "undefined" (or the basepoint) first,
//! so the nowhere-defined and constant maps lead every hom-set.

pub mod mutate;

use crate::core2::{Builder, Mor, TwoCategory};
use crate::error::{Error, Result};
use crate::onecat::FiniteCategory;

fn images(len: usize, max: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..=max).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

fn code(v: &[usize], blank: char) -> String {
    v.iter().map(|&x| if x == 0 { blank } else { char::from_digit(x as u32, 36).unwrap() }).collect()
}

/// Category of maps between finite sets given as image vectors (0 means
/// undefined or basepoint), composing pointwise with 0 absorbing.
fn map_category(
    n: usize,
    prefix: &str,
    obj: impl Fn(usize) -> String,
    blank: char,
    keep: impl Fn(&[usize]) -> bool,
) -> FiniteCategory {
    let mut mors: Vec<(String, usize, usize)> = Vec::new();
    let mut maps: Vec<Vec<usize>> = Vec::new();
    for a in 0..=n {
        for b in 0..=n {
            for v in images(a, b).into_iter().filter(|v| keep(v)) {
                mors.push((format!("{prefix}{a}>{b}:{}", code(&v, blank)), a, b));
                maps.push(v);
            }
        }
    }
    let id = (0..=n)
        .map(|a| {
            let v: Vec<usize> = (1..=a).collect();
            maps.iter().zip(&mors).position(|(m, r)| r.1 == a && r.2 == a && *m == v).unwrap()
        })
        .collect();
    let index: std::collections::HashMap<(usize, usize, Vec<usize>), usize> =
        maps.iter().zip(&mors).enumerate().map(|(i, (m, r))| ((r.1, r.2, m.clone()), i)).collect();
    let ends: Vec<(usize, usize)> = mors.iter().map(|r| (r.1, r.2)).collect();
    FiniteCategory::new((0..=n).map(obj).collect(), mors, id, move |g, f| {
        let v: Vec<usize> = maps[f].iter().map(|&x| if x == 0 { 0 } else { maps[g][x - 1] }).collect();
        index[&(ends[f].0, ends[g].1, v)]
    })
    .expect("map category is well formed")
}

/// Partial injections {1..a} ⇀ {1..b}, 0 ≤ a, b ≤ n.
pub fn partial_bijections(n: usize) -> FiniteCategory {
    map_category(n, "pb", |a| a.to_string(), '_', |v| {
        let d: Vec<usize> = v.iter().copied().filter(|&x| x != 0).collect();
        let mut s = d.clone();
        s.sort_unstable();
        s.dedup();
        s.len() == d.len()
    })
}

/// Pointed sets {0, 1..a} with basepoint 0 and all pointed maps.
pub fn pointed_sets(n: usize) -> FiniteCategory {
    map_category(n, "ps", |a| format!("S{a}"), '0', |_| true)
}

/// Cyclic groups Z/p^0, …, Z/p^k with all homomorphisms x ↦ c·x.
pub fn cyclic_tower(p: usize, k: usize) -> FiniteCategory {
    let sizes: Vec<usize> = (0..=k).map(|i| p.pow(i as u32)).collect();
    let mut mors = Vec::new();
    let mut mult = Vec::new();
    for (a, &m) in sizes.iter().enumerate() {
        for (b, &n) in sizes.iter().enumerate() {
            for c in (0..n).filter(|c| (c * m) % n == 0) {
                mors.push((format!("z{m}>{n}:x{c}"), a, b));
                mult.push(c);
            }
        }
    }
    let find = |a: usize, b: usize, c: usize| {
        mors.iter().zip(&mult).position(|(r, &x)| r.1 == a && r.2 == b && x == c).unwrap()
    };
    let id = (0..=k).map(|a| find(a, a, 1 % sizes[a])).collect();
    let (mors2, mult2, sizes2) = (mors.clone(), mult.clone(), sizes.clone());
    FiniteCategory::new(sizes.iter().map(|s| format!("Z{s}")).collect(), mors, id, move |g, f| {
        let (a, b) = (mors2[f].1, mors2[g].2);
        let c = (mult2[g] * mult2[f]) % sizes2[b];
        mors2.iter().zip(&mult2).position(|(r, &x)| r.1 == a && r.2 == b && x == c).unwrap()
    })
    .expect("cyclic tower is well formed")
}

pub fn terminal_1cat() -> FiniteCategory {
    FiniteCategory::new(vec!["*".into()], vec![("1".into(), 0, 0)], vec![0], |_, _| 0).unwrap()
}

/// Objects and morphisms of `c` as 1-cells; only identity 2-cells.
pub fn locally_discrete(c: &FiniteCategory) -> TwoCategory {
    let mut b = Builder::new();
    one_skeleton(&mut b, c);
    for f in 0..c.n_mors() {
        let m = Mor(f as u32);
        let a = b.cell(format!("1_{}", c.mor_names[f]), m, m);
        b.id2(m, a);
        b.vcomp(a, a, a);
    }
    for g in 0..c.n_mors() {
        for f in 0..c.n_mors() {
            if c.src[g] == c.tgt[f] {
                let gf = crate::core2::Cell(c.c(g, f) as u32);
                b.lwhisker(Mor(g as u32), crate::core2::Cell(f as u32), gf);
                b.rwhisker(crate::core2::Cell(g as u32), Mor(f as u32), gf);
            }
        }
    }
    b.build().expect("locally discrete 2-category is well formed")
}

fn one_skeleton(b: &mut Builder, c: &FiniteCategory) {
    for o in &c.obj_names {
        b.object(o.clone());
    }
    for f in 0..c.n_mors() {
        b.mor(c.mor_names[f].clone(), crate::core2::Ob(c.src[f] as u32), crate::core2::Ob(c.tgt[f] as u32));
    }
    for g in 0..c.n_mors() {
        for f in 0..c.n_mors() {
            if c.src[g] == c.tgt[f] {
                b.comp(Mor(g as u32), Mor(f as u32), Mor(c.c(g, f) as u32));
            }
        }
    }
    for (o, &i) in c.id.iter().enumerate() {
        b.id1(crate::core2::Ob(o as u32), Mor(i as u32));
    }
}

/// Exactly one 2-cell between every parallel pair of 1-cells.
pub fn chaotic_enrichment(c: &FiniteCategory) -> TwoCategory {
    use crate::core2::Cell;
    let mut b = Builder::new();
    one_skeleton(&mut b, c);
    let n = c.n_mors();
    let mut ix = vec![u32::MAX; n * n];
    for f in 0..n {
        for &g in c.hom(c.src[f], c.tgt[f]) {
            let a = b.cell(format!("[{}|{}]", c.mor_names[f], c.mor_names[g]), Mor(f as u32), Mor(g as u32));
            ix[f * n + g] = a.0;
        }
    }
    let cell = |f: usize, g: usize| Cell(ix[f * n + g]);
    for f in 0..n {
        b.id2(Mor(f as u32), cell(f, f));
        for &g in c.hom(c.src[f], c.tgt[f]) {
            for &h in c.hom(c.src[f], c.tgt[f]) {
                b.vcomp(cell(g, h), cell(f, g), cell(f, h));
            }
            for k in (0..n).filter(|&k| c.src[k] == c.tgt[f]) {
                b.lwhisker(Mor(k as u32), cell(f, g), cell(c.c(k, f), c.c(k, g)));
            }
            for k in (0..n).filter(|&k| c.tgt[k] == c.src[f]) {
                b.rwhisker(cell(f, g), Mor(k as u32), cell(c.c(f, k), c.c(g, k)));
            }
        }
    }
    b.build().expect("chaotic enrichment is well formed")
}

/// Adds a self-inverse loop `x_f: f ⇒ f` on each listed 1-cell. Whiskering
/// by an identity keeps the loop; whiskering by anything else sends it to
/// an identity 2-cell.
pub fn with_z2_loops(c: &FiniteCategory, loops: &[&str]) -> Result<TwoCategory> {
    use crate::core2::Cell;
    let mut b = Builder::new();
    one_skeleton(&mut b, c);
    let n = c.n_mors();
    let ids: Vec<Cell> = (0..n).map(|f| b.cell(format!("1_{}", c.mor_names[f]), Mor(f as u32), Mor(f as u32))).collect();
    let mut loop_of = vec![None; n];
    for name in loops {
        let f = c.mor_by_name(name).ok_or_else(|| Error::Input(format!("no 1-cell {name}")))?;
        loop_of[f] = Some(b.cell(format!("x_{name}"), Mor(f as u32), Mor(f as u32)));
    }
    let is_id = |h: usize| c.id[c.src[h]] == h && c.src[h] == c.tgt[h];
    for f in 0..n {
        b.id2(Mor(f as u32), ids[f]);
        b.vcomp(ids[f], ids[f], ids[f]);
        if let Some(x) = loop_of[f] {
            b.vcomp(x, ids[f], x);
            b.vcomp(ids[f], x, x);
            b.vcomp(x, x, ids[f]);
        }
    }
    for f in 0..n {
        let cells: Vec<Cell> = std::iter::once(ids[f]).chain(loop_of[f]).collect();
        for (i, &a) in cells.iter().enumerate() {
            for h in (0..n).filter(|&h| c.src[h] == c.tgt[f]) {
                let hf = c.c(h, f);
                let r = if i == 1 && is_id(h) { a } else { ids[hf] };
                b.lwhisker(Mor(h as u32), a, r);
            }
            for e in (0..n).filter(|&e| c.tgt[e] == c.src[f]) {
                let fe = c.c(f, e);
                let r = if i == 1 && is_id(e) { a } else { ids[fe] };
                b.rwhisker(a, Mor(e as u32), r);
            }
        }
    }
    b.build()
}

/// Two objects X, Y; an idempotent e on Y absorbing g: X → Y, and a loop on
/// g killed by whiskering with e.
pub fn faithless() -> TwoCategory {
    let c = FiniteCategory::new(
        vec!["X".into(), "Y".into()],
        vec![("1X".into(), 0, 0), ("1Y".into(), 1, 1), ("g".into(), 0, 1), ("e".into(), 1, 1)],
        vec![0, 1],
        |g, f| match (g, f) {
            (0 | 1, f) => f,
            (g, 0 | 1) => g,
            (3, 2) => 2,
            (3, 3) => 3,
            _ => unreachable!(),
        },
    )
    .unwrap();
    with_z2_loops(&c, &["g"]).unwrap()
}

/// Named desk-scale fixtures shared by tests, benches and the CLI.
pub fn fixture(name: &str) -> Result<TwoCategory> {
    Ok(match name {
        "terminal" => locally_discrete(&terminal_1cat()),
        "pb1" => locally_discrete(&partial_bijections(1)),
        "pb2" => locally_discrete(&partial_bijections(2)),
        "pb3" => locally_discrete(&partial_bijections(3)),
        "ct22" => locally_discrete(&cyclic_tower(2, 2)),
        "ps2" => locally_discrete(&pointed_sets(2)),
        "chaotic-pb1" => chaotic_enrichment(&partial_bijections(1)),
        "loop-on-null" => with_z2_loops(&partial_bijections(1), &["pb1>1:_"])?,
        "faithless" => faithless(),
        other => return Err(Error::Input(format!("unknown fixture {other}"))),
    })
}

pub const FIXTURES: &[&str] = &["terminal", "pb1", "pb2", "ct22", "ps2", "chaotic-pb1", "loop-on-null"];
