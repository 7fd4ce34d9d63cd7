//! Order-free derivation of per-trial random streams from one master seed.

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finalizer.
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Stable hash of `master` and a path of indices. Depends only on its
/// arguments, never on evaluation order.
pub fn child_seed(master: u64, path: &[u64]) -> u64 {
    path.iter().fold(mix64(master.wrapping_add(GOLDEN_GAMMA)), |h, &p| {
        mix64(h ^ mix64(p.wrapping_add(GOLDEN_GAMMA)))
    })
}
