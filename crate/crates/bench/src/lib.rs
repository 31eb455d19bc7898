//! Fixtures shared by the benchmarks.

use stratcart::corpus::{synthesize, SynthSpec};
use stratcart::Dataset;

/// The default fixture at a given size: 17 reference classes, d = 6.
pub fn fixture(total: usize) -> Dataset {
    let spec = SynthSpec::reference(total, 6, 0.3).expect("valid fixture spec");
    synthesize(&spec, 1).expect("fixture synthesizes")
}
