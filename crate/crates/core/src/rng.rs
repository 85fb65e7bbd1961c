//! Counter-based substream derivation.
//!
//! Every replica draws from a ChaCha8 keystream whose key depends only on
//! the master seed and whose 64-bit stream id is a mix of `(stream, index)`.
//! Replicas are therefore independent of scheduling and thread count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type ReplicaRng = ChaCha8Rng;

/// Index tag reserved for sequentially stepped processes (never a valid `n`).
const SEQUENTIAL_INDEX: u64 = 0;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn key_from_seed(master_seed: u64) -> [u8; 32] {
    let mut key = [0u8; 32];
    let mut state = master_seed;
    for chunk in key.chunks_exact_mut(8) {
        state = splitmix64(state);
        chunk.copy_from_slice(&state.to_le_bytes());
    }
    key
}

/// RNG for replica `(stream, index)` under `master_seed`.
pub fn substream(master_seed: u64, stream: u64, index: u64) -> ReplicaRng {
    let mut rng = ChaCha8Rng::from_seed(key_from_seed(master_seed));
    rng.set_stream(splitmix64(stream ^ splitmix64(index.wrapping_add(0xA5A5_A5A5))));
    rng
}

/// RNG for a process stepped sequentially from time 0.
pub fn sequential(master_seed: u64, stream: u64) -> ReplicaRng {
    substream(master_seed, stream, SEQUENTIAL_INDEX)
}
