//! Data-parallel mapping with a sequential fallback.
//!
//! The expensive bulk operations (fixed point scans, chain batches) are
//! independent per item. With the `parallel` feature they fan out through
//! rayon; without it the same helpers degrade to plain iteration. The
//! `seq_map` variant stays available in both builds so benchmarks can
//! compare the two paths directly.

#[cfg(feature = "parallel")]
pub fn par_map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync,
{
    use rayon::prelude::*;
    items.par_iter().map(&f).collect()
}

pub fn seq_map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    F: Fn(&T) -> R,
{
    items.iter().map(&f).collect()
}

/// Parallel map when built with the `parallel` feature, sequential otherwise.
pub fn auto_map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync,
{
    #[cfg(feature = "parallel")]
    {
        par_map(items, f)
    }
    #[cfg(not(feature = "parallel"))]
    {
        seq_map(items, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn maps_agree() {
        let items: Vec<u64> = (0..100).collect();
        let f = |x: &u64| x * x + 1;
        let seq = seq_map(&items, f);
        let auto = auto_map(&items, f);
        assert_eq!(seq, auto);
        #[cfg(feature = "parallel")]
        assert_eq!(seq, par_map(&items, f));
    }

    #[test]
    fn empty_input() {
        let items: Vec<u64> = Vec::new();
        assert!(auto_map(&items, |x| *x).is_empty());
    }
}
