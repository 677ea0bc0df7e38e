//! Seeded randomness.
//!
//! Every random draw in the crate goes through [`LabRng`], a ChaCha8 stream
//! cipher generator whose output is specified bit-for-bit and therefore
//! identical across platforms. Independent substreams are keyed by
//! `splitmix64(seed) ^ splitmix64(stream)` so that blocks, trials and
//! schedule windows never share state.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type LabRng = ChaCha8Rng;

/// Recorded in run manifests.
pub const RNG_ALGORITHM: &str =
    "ChaCha8Rng (rand_chacha 0.3); substream seed = splitmix64(seed) ^ splitmix64(stream + 1)";

pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    splitmix64(seed) ^ splitmix64(stream.wrapping_add(1))
}

pub fn substream(seed: u64, stream: u64) -> LabRng {
    LabRng::seed_from_u64(derive_seed(seed, stream))
}

/// Nested substream, e.g. `(block, trial)`.
pub fn substream2(seed: u64, a: u64, b: u64) -> LabRng {
    substream(derive_seed(seed, a), b)
}

/// Uniform draw from `0..n`; `n` must be positive.
pub fn below(rng: &mut LabRng, n: u64) -> u64 {
    rng.gen_range(0..n)
}

pub fn unit(rng: &mut LabRng) -> f64 {
    rng.gen::<f64>()
}

pub fn coin(rng: &mut LabRng, p: f64) -> bool {
    unit(rng) < p
}
