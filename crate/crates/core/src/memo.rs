//! Memo table whose entries are computed at most once, even when several
//! threads ask for the same key at the same time.

use std::collections::HashMap;
use std::hash::Hash;
use std::sync::{Arc, Mutex};

use crate::error::Result;

type Cell<V> = Arc<Mutex<Option<V>>>;

pub(crate) struct Memo<K, V> {
    cells: Mutex<HashMap<K, Cell<V>>>,
}

impl<K, V> Default for Memo<K, V> {
    fn default() -> Self {
        Memo {
            cells: Mutex::new(HashMap::new()),
        }
    }
}

impl<K: Eq + Hash + Clone, V: Clone> Memo<K, V> {
    /// The per-key lock is held while `f` runs; `f` may request other keys
    /// as long as the requests are well-founded.
    pub(crate) fn get_or_compute<F: FnOnce() -> Result<V>>(&self, key: &K, f: F) -> Result<V> {
        let cell = self
            .cells
            .lock()
            .unwrap()
            .entry(key.clone())
            .or_default()
            .clone();
        let mut slot = cell.lock().unwrap();
        if let Some(v) = slot.as_ref() {
            return Ok(v.clone());
        }
        let v = f()?;
        *slot = Some(v.clone());
        Ok(v)
    }
}
