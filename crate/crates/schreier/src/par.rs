//! Ordered map with an optional data-parallel implementation.
//!
//! The `parallel` cargo feature compiles in rayon; a runtime flag then
//! picks the implementation per call. With the feature off the flag is
//! ignored and everything runs sequentially, so results never depend on
//! the build configuration.

/// Applies `f` to every item, returning outputs in input order.
pub fn map_ordered<T, U, F>(parallel: bool, items: Vec<T>, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if parallel {
        use rayon::prelude::*;
        return items.into_par_iter().map(f).collect();
    }
    #[cfg(not(feature = "parallel"))]
    let _ = parallel;
    items.into_iter().map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_paths_preserve_order() {
        let items: Vec<u64> = (0..500).collect();
        let seq = map_ordered(false, items.clone(), |x| x * x + 1);
        let par = map_ordered(true, items, |x| x * x + 1);
        assert_eq!(seq, par);
        assert_eq!(seq[3], 10);
        assert!(seq.windows(2).all(|w| w[0] < w[1]));
    }
}
