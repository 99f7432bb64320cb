//! Execution mode for the data-parallel kernels. Without the `parallel`
//! feature every mode runs sequentially.

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Exec {
    Sequential,
    #[default]
    Parallel,
}

impl Exec {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }

    /// `(0..n).map(f)` collected in order.
    pub fn map<T, F>(self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            use rayon::prelude::*;
            return (0..n).into_par_iter().map(f).collect();
        }
        (0..n).map(f).collect()
    }

    /// Calls `f(start, chunk)` on consecutive chunks of `out` of length `chunk`.
    pub fn for_chunks<T, F>(self, out: &mut [T], chunk: usize, f: F)
    where
        T: Send,
        F: Fn(usize, &mut [T]) + Sync + Send,
    {
        let chunk = chunk.max(1);
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            use rayon::prelude::*;
            out.par_chunks_mut(chunk).enumerate().for_each(|(c, s)| f(c * chunk, s));
            return;
        }
        for (c, s) in out.chunks_mut(chunk).enumerate() {
            f(c * chunk, s);
        }
    }
}

/// Sizes the global worker pool. Has no effect without the `parallel` feature
/// or once the pool is running.
pub fn configure_threads(threads: usize) -> bool {
    #[cfg(feature = "parallel")]
    {
        rayon::ThreadPoolBuilder::new().num_threads(threads).build_global().is_ok()
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = threads;
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modes_agree() {
        let a = Exec::Sequential.map(1000, |i| i * i);
        let b = Exec::Parallel.map(1000, |i| i * i);
        assert_eq!(a, b);
        let mut x = vec![0usize; 1003];
        let mut y = x.clone();
        Exec::Sequential.for_chunks(&mut x, 10, |s, c| c.iter_mut().enumerate().for_each(|(i, v)| *v = s + i));
        Exec::Parallel.for_chunks(&mut y, 10, |s, c| c.iter_mut().enumerate().for_each(|(i, v)| *v = s + i));
        assert_eq!(x, y);
        assert_eq!(x[1002], 1002);
    }
}
