//! Data-parallel map over independent tasks. Without the `parallel` feature
//! every mode runs sequentially.

use serde::{Deserialize, Serialize};

/// How independent tasks are scheduled.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Execution {
    Sequential,
    /// Worker pool; `None` uses every available core.
    #[default]
    Parallel,
    Threads(usize),
}

impl Execution {
    pub fn from_threads(threads: Option<usize>) -> Self {
        match threads {
            Some(1) => Execution::Sequential,
            Some(n) => Execution::Threads(n),
            None => Execution::Parallel,
        }
    }

    /// True if this build can actually run tasks concurrently.
    pub fn is_concurrent(self) -> bool {
        cfg!(feature = "parallel") && self != Execution::Sequential
    }
}

/// `(0..len).map(task)` with results in index order regardless of scheduling.
pub fn map_indexed<T, F>(exec: Execution, len: usize, task: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    match exec {
        Execution::Sequential => (0..len).map(task).collect(),
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            (0..len).into_par_iter().map(task).collect()
        }
        #[cfg(feature = "parallel")]
        Execution::Threads(n) => {
            use rayon::prelude::*;
            match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
                Ok(pool) => pool.install(|| (0..len).into_par_iter().map(&task).collect()),
                Err(_) => (0..len).map(task).collect(),
            }
        }
        #[cfg(not(feature = "parallel"))]
        Execution::Parallel | Execution::Threads(_) => (0..len).map(task).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved() {
        for exec in [
            Execution::Sequential,
            Execution::Parallel,
            Execution::Threads(3),
        ] {
            let v = map_indexed(exec, 1000, |i| i * i);
            assert!(v.iter().enumerate().all(|(i, &x)| x == i * i));
        }
    }

    #[test]
    fn thread_count_mapping() {
        assert_eq!(Execution::from_threads(Some(1)), Execution::Sequential);
        assert_eq!(Execution::from_threads(Some(4)), Execution::Threads(4));
        assert_eq!(Execution::from_threads(None), Execution::Parallel);
        assert!(!Execution::Sequential.is_concurrent());
    }
}
