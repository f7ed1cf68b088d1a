//! Clause-by-clause exhaustive checking with replayable counterexamples.
//!
//! A validator is a list of clause tags, each with a kind signature, an
//! instance generator and a predicate. The sweep reports the first
//! violating instance of the first violated clause; replay re-evaluates the
//! predicate on the tuple named in a certificate.

use crate::cert::{Caps, Certificate};
use crate::core2::{Id, TwoCategory};
use crate::error::{Error, Result};
use crate::par;

/// (tag, signature) pairs in evaluation order.
pub type Clauses = &'static [(&'static str, &'static str)];

pub fn sweep<I, H>(check: &str, t: &TwoCategory, clauses: Clauses, caps: &Caps, instances: I, holds: H) -> Result<Certificate>
where
    I: Fn(&str) -> Result<Vec<Vec<Id>>>,
    H: Fn(&str, &[Id]) -> Result<bool> + Sync + Send,
{
    for &(tag, _) in clauses {
        let inst = instances(tag)?;
        caps.check_instances(&format!("{check}/{tag}"), inst.len())?;
        let bad = par::find_first(&inst, |x| Ok((!holds(tag, x)?).then(|| x.clone())))?;
        if let Some(x) = bad {
            return Ok(Certificate::fail(check, tag, t.id_names(&x)));
        }
    }
    Ok(Certificate::pass(check))
}

/// `Ok(true)` when the certificate's violation is reproduced.
pub fn replay<H>(t: &TwoCategory, clauses: Clauses, cert: &Certificate, holds: H) -> Result<bool>
where
    H: Fn(&str, &[Id]) -> Result<bool>,
{
    let cx = cert.counterexample.as_ref().ok_or_else(|| Error::Input("certificate has no counterexample".into()))?;
    let sig = clauses
        .iter()
        .find(|c| c.0 == cx.clause)
        .map(|c| c.1)
        .ok_or_else(|| Error::Input(format!("unknown clause {}", cx.clause)))?;
    let ids = t.resolve_ids(sig, &cx.cells)?;
    Ok(!holds(&cx.clause, &ids)?)
}
