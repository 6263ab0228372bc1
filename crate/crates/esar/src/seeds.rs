//! Stable seed derivation for reproducible substreams.
//!
//! The standard library hasher is allowed to change between releases, so
//! every seed here flows through a fixed FNV-1a / SplitMix pipeline instead.
//! The same `(base, label, index)` always produces the same stream seed, on
//! every platform and toolchain.

/// FNV-1a over the UTF-8 bytes of `text`.
pub fn stable_hash(text: &str) -> u64 {
    let mut h: u64 = 0xCBF2_9CE4_8422_2325;
    for b in text.as_bytes() {
        h ^= *b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01B3);
    }
    h
}

/// Finalizer with full avalanche; adjacent inputs land far apart.
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives an independent stream seed from a base seed, a role label, and an
/// index. Used to give each episode, policy, and sensor its own stream.
pub fn derive_seed(base: u64, label: &str, index: u64) -> u64 {
    mix64(
        base.wrapping_add(stable_hash(label))
            .wrapping_add(index.wrapping_mul(0x9E37_79B9_7F4A_7C15)),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hash_is_stable_across_calls() {
        assert_eq!(stable_hash("alpine-ridge"), stable_hash("alpine-ridge"));
        assert_ne!(stable_hash("alpine-ridge"), stable_hash("alpine-ridgf"));
        // Frozen value: guards against accidental algorithm changes, which
        // would silently re-seed every stream in existing suites.
        assert_eq!(stable_hash(""), 0xCBF2_9CE4_8422_2325);
        assert_eq!(stable_hash("a"), 0xAF63_DC4C_8601_EC8C);
    }

    #[test]
    fn derive_separates_labels_and_indices() {
        let base = 42;
        assert_ne!(derive_seed(base, "sense", 0), derive_seed(base, "policy", 0));
        assert_ne!(derive_seed(base, "sense", 0), derive_seed(base, "sense", 1));
        assert_eq!(derive_seed(base, "sense", 3), derive_seed(base, "sense", 3));
    }
}
