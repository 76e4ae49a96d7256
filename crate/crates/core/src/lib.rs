//! Random stable looptrees at desk scale.
//!
//! The crate samples critical Galton–Watson trees with heavy-tailed offspring
//! laws conditioned on their size, turns them into discrete looptrees, and
//! evaluates looptree distances either on the graph or directly from the
//! Lukasiewicz path. Boltzmann dissections of polygons, finite-metric tools
//! (Gromov–Hausdorff upper bounds, volume growth fits) and the experiment
//! pipelines used by the `looptree` binary live here too.
//!
//! ```
//! use stable_looptrees::gw_tree::{stable_offspring, sample_conditioned_tree, Variant};
//! use stable_looptrees::looptree::{build_loop_prime, LoopPrimeMetric};
//! use stable_looptrees::rng::stream;
//!
//! let law = stable_offspring(1.5, Variant::Generic)?;
//! let mut rng = stream(7, 0);
//! let tree = sample_conditioned_tree(&law, 200, &mut rng)?;
//! let metric = LoopPrimeMetric::new(&tree.encode());
//! let graph = build_loop_prime(&tree);
//! assert_eq!(graph.vertex_count(), 200);
//! assert_eq!(metric.distance(0, 0), 0);
//! # Ok::<(), stable_looptrees::Error>(())
//! ```

pub mod dissection;
mod error;
pub mod excursion_metric;
pub mod experiments;
mod fft;
pub mod gw_tree;
pub mod header;
pub mod looptree;
pub mod metric_analysis;
pub mod rng;
mod rmq;
pub mod special;
pub mod stable_law;

pub use error::{Error, Result};

/// Version string written into every output header.
pub const ARTIFACT_VERSION: &str = concat!("stable-looptrees ", env!("CARGO_PKG_VERSION"));

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/trees.md")]
    mod trees {}
    #[doc = include_str!("../../../book/src/looptrees.md")]
    mod looptrees {}
    #[doc = include_str!("../../../book/src/excursions.md")]
    mod excursions {}
    #[doc = include_str!("../../../book/src/stable.md")]
    mod stable {}
    #[doc = include_str!("../../../book/src/dissections.md")]
    mod dissections {}
    #[doc = include_str!("../../../book/src/metrics.md")]
    mod metrics {}
    #[doc = include_str!("../../../book/src/experiments.md")]
    mod experiments {}
}
