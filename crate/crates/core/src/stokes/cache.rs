use std::num::NonZeroUsize;
use std::sync::{Arc, Mutex};

use lru::LruCache;
use nalgebra::DMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BlockFunction {
    Exp,
    Phi1,
}

/// Parallel blocks depend only on `|xi|^2` and whether the coupling is
/// active, so modes on the same shell share entries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BlockKey {
    pub shell: u64,
    pub coupled: bool,
    pub time_bits: u64,
    pub function: BlockFunction,
}

/// Thread-safe LRU memo of parallel-block matrix functions.
///
/// Values are pure functions of the key (and the owning grid), so a racing
/// double computation stores bit-identical matrices.
pub struct SemigroupCache {
    inner: Mutex<LruCache<BlockKey, Arc<DMatrix<f64>>>>,
}

impl SemigroupCache {
    pub fn new(capacity: usize) -> Self {
        let cap = NonZeroUsize::new(capacity.max(1)).expect("nonzero");
        Self { inner: Mutex::new(LruCache::new(cap)) }
    }

    pub fn get_or_insert(&self, key: BlockKey, compute: impl FnOnce() -> DMatrix<f64>) -> Arc<DMatrix<f64>> {
        if let Some(v) = self.inner.lock().expect("cache poisoned").get(&key) {
            return v.clone();
        }
        let value = Arc::new(compute());
        self.inner.lock().expect("cache poisoned").put(key, value.clone());
        value
    }

    pub fn len(&self) -> usize {
        self.inner.lock().expect("cache poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn clear(&self) {
        self.inner.lock().expect("cache poisoned").clear();
    }
}

impl Default for SemigroupCache {
    fn default() -> Self {
        Self::new(4096)
    }
}
