//! A write-once concurrent map used for memo tables.

use std::collections::HashMap;
use std::hash::Hash;
use std::sync::{Arc, RwLock};

/// Values are inserted at most once and never mutated afterwards, so readers
/// can hold on to the returned `Arc` without further locking.
pub struct WriteOnceCache<K, V> {
    inner: RwLock<HashMap<K, Arc<V>>>,
}

impl<K: Eq + Hash + Clone, V> WriteOnceCache<K, V> {
    pub fn new() -> Self {
        Self {
            inner: RwLock::new(HashMap::new()),
        }
    }

    pub fn get(&self, key: &K) -> Option<Arc<V>> {
        self.inner.read().unwrap().get(key).cloned()
    }

    /// Returns the cached value for `key`, computing it with `f` on a miss.
    ///
    /// `f` runs without the lock held; if two threads race, the first insert
    /// wins and both observe the same value.
    pub fn get_or_insert_with(&self, key: K, f: impl FnOnce() -> V) -> Arc<V> {
        if let Some(v) = self.get(&key) {
            return v;
        }
        let value = Arc::new(f());
        let mut map = self.inner.write().unwrap();
        map.entry(key).or_insert(value).clone()
    }

    pub fn len(&self) -> usize {
        self.inner.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl<K: Eq + Hash + Clone, V> Default for WriteOnceCache<K, V> {
    fn default() -> Self {
        Self::new()
    }
}
