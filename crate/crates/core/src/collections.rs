//! Hash containers with a fixed hasher, so iteration order depends only on
//! the insertion sequence and results are identical across runs.

pub type HashMap<K, V> = hashbrown::HashMap<K, V, foldhash::fast::FixedState>;
pub type HashSet<K> = hashbrown::HashSet<K, foldhash::fast::FixedState>;
