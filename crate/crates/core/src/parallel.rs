//! Data-parallel helpers. With the `parallel` feature they run on rayon,
//! otherwise sequentially; results are always in input order, so callers
//! get identical output either way.

use crate::diagram::Axis;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Whether the rayon backend is compiled in.
pub const PARALLEL: bool = cfg!(feature = "parallel");

/// `items.map(f)` preserving order.
pub fn map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}

/// Concatenation of `f` over `items`, in input order.
pub fn flat_map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> Vec<U> + Sync + Send,
{
    map(items, f).into_iter().flatten().collect()
}

/// `f` on the three axes.
pub fn map3<U, F>(f: F) -> [U; 3]
where
    U: Send,
    F: Fn(Axis) -> U + Sync + Send,
{
    let [a, b, c] = Axis::ALL;
    #[cfg(feature = "parallel")]
    {
        let (x, (y, z)) = rayon::join(|| f(a), || rayon::join(|| f(b), || f(c)));
        [x, y, z]
    }
    #[cfg(not(feature = "parallel"))]
    {
        [f(a), f(b), f(c)]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved() {
        let v: Vec<u64> = (0..1000).collect();
        assert_eq!(
            map(&v, |x| x * 2),
            v.iter().map(|x| x * 2).collect::<Vec<_>>()
        );
        assert_eq!(flat_map(&v[..3], |&x| vec![x; x as usize]), vec![1, 2, 2]);
        assert_eq!(map3(|a| a.get()), [1, 2, 3]);
    }
}
