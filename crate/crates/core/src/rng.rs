//! Seeded generators. Every random choice in the crate goes through
//! [`Xoshiro256StarStar`] so runs are reproducible from the recorded seed.

use rand::SeedableRng;
pub use rand_xoshiro::Xoshiro256StarStar;

/// Name of the generator, recorded next to seeds in reports.
pub const GENERATOR_NAME: &str = "xoshiro256**";

pub fn seeded(seed: u64) -> Xoshiro256StarStar {
    Xoshiro256StarStar::seed_from_u64(seed)
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Independent seed for sub-task `index` of a run seeded with `seed`.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    splitmix64(seed ^ splitmix64(index.wrapping_add(0x5EED)))
}
