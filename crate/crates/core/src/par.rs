//! Order-preserving search helpers. With the `parallel` feature the work is
//! spread over rayon's pool; results never depend on the schedule because
//! every "first" is first in slice order.

use crate::error::Result;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// First item (in slice order) for which `f` yields `Some`, or the first error.
#[cfg(feature = "parallel")]
pub fn find_first<T, R, F>(items: &[T], f: F) -> Result<Option<R>>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> Result<Option<R>> + Sync + Send,
{
    items.par_iter().find_map_first(|x| f(x).transpose()).transpose()
}

#[cfg(not(feature = "parallel"))]
pub fn find_first<T, R, F>(items: &[T], f: F) -> Result<Option<R>>
where
    F: Fn(&T) -> Result<Option<R>>,
{
    for x in items {
        if let Some(r) = f(x)? {
            return Ok(Some(r));
        }
    }
    Ok(None)
}

/// Every item for which `f` yields `Some`, in slice order.
#[cfg(feature = "parallel")]
pub fn filter_map<T, R, F>(items: &[T], f: F) -> Result<Vec<R>>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> Result<Option<R>> + Sync + Send,
{
    let v: Result<Vec<Option<R>>> = items.par_iter().map(f).collect();
    Ok(v?.into_iter().flatten().collect())
}

#[cfg(not(feature = "parallel"))]
pub fn filter_map<T, R, F>(items: &[T], f: F) -> Result<Vec<R>>
where
    F: Fn(&T) -> Result<Option<R>>,
{
    let mut out = Vec::new();
    for x in items {
        if let Some(r) = f(x)? {
            out.push(r);
        }
    }
    Ok(out)
}

/// Sequential variant of [`find_first`], always available; used by benches
/// to compare both paths within a single build.
pub fn find_first_seq<T, R, F>(items: &[T], f: F) -> Result<Option<R>>
where
    F: Fn(&T) -> Result<Option<R>>,
{
    for x in items {
        if let Some(r) = f(x)? {
            return Ok(Some(r));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    #[test]
    fn first_is_by_position() {
        let xs: Vec<u32> = (0..1000).collect();
        let r = find_first(&xs, |&x| Ok((x % 7 == 3).then_some(x))).unwrap();
        assert_eq!(r, Some(3));
        assert_eq!(find_first_seq(&xs, |&x| Ok((x % 7 == 3).then_some(x))).unwrap(), Some(3));
    }

    #[test]
    fn errors_surface_in_order() {
        let xs: Vec<u32> = (0..100).collect();
        let r = find_first(&xs, |&x| {
            if x == 10 {
                Err(Error::Input("ten".into()))
            } else {
                Ok((x == 50).then_some(x))
            }
        });
        assert!(r.is_err());
    }

    #[test]
    fn filter_map_keeps_order() {
        let xs: Vec<u32> = (0..50).collect();
        let r = filter_map(&xs, |&x| Ok((x % 5 == 0).then_some(x))).unwrap();
        assert_eq!(r, vec![0, 5, 10, 15, 20, 25, 30, 35, 40, 45]);
    }
}
