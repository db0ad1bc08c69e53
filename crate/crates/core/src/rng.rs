//! Seeded random streams.
//!
//! Every session seed fans out into independent ChaCha streams, one per
//! component, so the teacher's draws never shift when a student changes how
//! many numbers it consumes (and vice versa).

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The generator used throughout the simulator.
pub type SimRng = ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stream {
    Teacher,
    Student,
}

impl Stream {
    fn id(self) -> u64 {
        match self {
            Stream::Teacher => 1,
            Stream::Student => 2,
        }
    }
}

/// Derive the generator for `stream` from a session seed.
pub fn stream(seed: u64, stream: Stream) -> SimRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream.id());
    rng
}
