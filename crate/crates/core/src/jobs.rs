use rayon::prelude::*;

/// Worker count for embarrassingly parallel sweeps. Results are collected in
/// input order, so output never depends on the worker count.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Jobs(usize);

impl Jobs {
    pub fn new(workers: usize) -> Self {
        Jobs(workers.max(1))
    }

    pub fn sequential() -> Self {
        Jobs(1)
    }

    pub fn workers(&self) -> usize {
        self.0
    }

    pub(crate) fn map<T, R, F>(&self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        if self.0 <= 1 {
            return items.iter().map(f).collect();
        }
        match rayon::ThreadPoolBuilder::new().num_threads(self.0).build() {
            Ok(pool) => pool.install(|| items.par_iter().map(f).collect()),
            Err(_) => items.iter().map(f).collect(),
        }
    }
}

impl Default for Jobs {
    fn default() -> Self {
        Jobs::sequential()
    }
}
