//! Markov partitions, Perron data, scaling measures and entropy.

pub mod entropy;
pub mod incidence;
pub mod measure;
pub mod orbits;
pub mod padic;
pub mod perron;

pub use entropy::{cylinder_counts, entropy, EntropyEstimate, EntropyMethod};
pub use incidence::{detect_markov, primitivity_period, MarkovData, MarkovOutcome, Periodicity};
pub use measure::{markov_measure, root_candidates, scaling_measure, uniformize, MeasureSource, ScalingMeasure};
pub use orbits::{critical_orbits, orbit_of, Orbit, OrbitStatus, OrbitTable, Seed};
pub use padic::{padic_infinite_orbit, PadicCertificate};
pub use perron::{largest_root, perron_data, PerronData};
