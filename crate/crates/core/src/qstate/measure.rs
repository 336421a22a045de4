use std::collections::BTreeMap;

use rand::distributions::{Distribution, WeightedIndex};

use super::QState;
use crate::{rng, Error, Result};

/// Outcome counts keyed by basis index.
pub type Histogram = BTreeMap<usize, u64>;

/// Draws `shots` i.i.d. full-register measurements from `|amps|^2`.
///
/// Deterministic in `seed` (stream 0 of the root seed).
pub fn measure_all(state: &QState, seed: u64, shots: u64) -> Result<Histogram> {
    if shots == 0 {
        return Err(Error::InvalidInput("shots must be at least 1".into()));
    }
    let dist = WeightedIndex::new(state.probabilities())
        .map_err(|e| Error::InvalidInput(format!("cannot sample state: {e}")))?;
    let mut rng = rng::stream(seed, 0);
    let mut hist = Histogram::new();
    for _ in 0..shots {
        *hist.entry(dist.sample(&mut rng)).or_default() += 1;
    }
    Ok(hist)
}
