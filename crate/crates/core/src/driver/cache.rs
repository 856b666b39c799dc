use std::collections::HashMap;
use std::sync::RwLock;

/// Coordinate quantum for cache keys, Å.
pub const CACHE_QUANTUM: f64 = 1e-9;

/// Thread-safe energy memo keyed by quantized coordinates and a solver
/// fingerprint.
#[derive(Debug, Default)]
pub struct EnergyCache {
    map: RwLock<HashMap<(Vec<i64>, String), f64>>,
}

impl EnergyCache {
    pub fn new() -> Self {
        Self::default()
    }

    fn key(coords: &[f64], fingerprint: &str) -> (Vec<i64>, String) {
        (
            coords.iter().map(|x| (x / CACHE_QUANTUM).round() as i64).collect(),
            fingerprint.to_string(),
        )
    }

    pub fn get(&self, coords: &[f64], fingerprint: &str) -> Option<f64> {
        self.map
            .read()
            .expect("cache lock poisoned")
            .get(&Self::key(coords, fingerprint))
            .copied()
    }

    pub fn insert(&self, coords: &[f64], fingerprint: &str, energy: f64) {
        self.map
            .write()
            .expect("cache lock poisoned")
            .insert(Self::key(coords, fingerprint), energy);
    }

    pub fn len(&self) -> usize {
        self.map.read().expect("cache lock poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
