use std::collections::HashSet;
use std::hash::Hasher;

use fnv::FnvHasher;

use super::{DecodedConfig, Value};

/// Default retry budget per offspring slot.
pub const DEFAULT_N_TRIAL: usize = 50;

/// 64-bit FNV-1a hash of a configuration's canonical form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalKey(pub u64);

impl std::fmt::Display for CanonicalKey {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:016x}", self.0)
    }
}

/// Hashes the ordered `(dimension, value-id)` sequence of active dimensions.
///
/// Discrete dimensions contribute their candidate index. Continuous
/// dimensions contribute the bit pattern of their bin representative, which
/// identifies the bin uniquely even after the partition has been refined
/// (bin indices shift when earlier intervals split).
pub fn canonical_key(d: &DecodedConfig) -> CanonicalKey {
    let mut h = FnvHasher::default();
    for (j, value) in d.values().iter().enumerate() {
        let Some(value) = value else { continue };
        h.write(&(j as u32).to_le_bytes());
        match value {
            Value::Choice { index, .. } => {
                h.write(&[0u8]);
                h.write(&(*index as u64).to_le_bytes());
            }
            Value::Real { value, .. } => {
                h.write(&[1u8]);
                h.write(&value.to_bits().to_le_bytes());
            }
        }
    }
    CanonicalKey(h.finish())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Admission {
    Admitted,
    Duplicate,
}

/// Keys admitted to evaluation during one run. Keys are never removed.
#[derive(Clone, Debug)]
pub struct DedupRegistry {
    keys: HashSet<CanonicalKey>,
    /// Attempts per offspring slot before the slot is skipped.
    pub n_trial: usize,
}

impl Default for DedupRegistry {
    fn default() -> Self {
        Self::new(DEFAULT_N_TRIAL)
    }
}

impl DedupRegistry {
    pub fn new(n_trial: usize) -> Self {
        Self {
            keys: HashSet::new(),
            n_trial,
        }
    }

    pub fn admit(&mut self, key: CanonicalKey) -> Admission {
        if self.keys.insert(key) {
            Admission::Admitted
        } else {
            Admission::Duplicate
        }
    }

    pub fn contains(&self, key: CanonicalKey) -> bool {
        self.keys.contains(&key)
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{builtin_space, decode, sample_random, Genotype, RefinementState};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn registry_admits_once() {
        let mut reg = DedupRegistry::default();
        assert_eq!(reg.n_trial, 50);
        assert_eq!(reg.admit(CanonicalKey(7)), Admission::Admitted);
        assert_eq!(reg.len(), 1);
        assert_eq!(reg.admit(CanonicalKey(7)), Admission::Duplicate);
        assert_eq!(reg.len(), 1);
    }

    #[test]
    fn key_is_deterministic_and_sensitive_to_active_genes() {
        let space = builtin_space();
        let refine = RefinementState::with_defaults(&space);
        let g = Genotype::new(vec![0; 24]);
        let k1 = canonical_key(&decode(&g, &space, &refine));
        let k2 = canonical_key(&decode(&g, &space, &refine));
        assert_eq!(k1, k2);
        let mut genes = vec![0; 24];
        genes[2] = 1;
        assert_ne!(k1, canonical_key(&decode(&Genotype::new(genes), &space, &refine)));
    }

    proptest! {
        #[test]
        fn key_ignores_inactive_dimensions(seed in any::<u64>(), noise in proptest::collection::vec(0usize..10, 24)) {
            let space = builtin_space();
            let refine = RefinementState::with_defaults(&space);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let g = sample_random(&space, &refine, &mut rng);
            let d = decode(&g, &space, &refine);
            let mut h = g.clone();
            for j in 0..space.dims() {
                if !d.is_active(j) {
                    h.set_gene(j, noise[j] % refine.cardinality(j));
                }
            }
            prop_assert_eq!(canonical_key(&d), canonical_key(&decode(&h, &space, &refine)));
        }
    }
}
