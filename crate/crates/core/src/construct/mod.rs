//! The constructive core: parameter recursions, chordal partitions,
//! attached-model dichotomies, cut decompositions, the inductive
//! H-partition and the ordered partition behind the weak coloring bound.

mod attached;
mod certify;
mod chordal;
mod clique_sum;
mod cuts;
mod inductive;
mod ordered;
mod params;
mod pigeonhole;

pub use attached::{attached_or_separation, rooted_clique_separation, Dichotomy, RootedCliques};
pub use certify::{certify, CertKind, CertReport, Check, PartitionCertificate};
pub use chordal::chordal_partition;
pub use clique_sum::clique_sum;
pub use cuts::{cut_decomposition, CutDecomposition, Periphery};
pub use inductive::{main_partition, BaseStrategy, ConstructOptions, MainPartition};
pub use ordered::{wcol_order, wcol_partition, WcolOrderReport, WcolPartition};
pub use params::{c_param, eps_impl, singleton_tw_bound, t_size, tau};
pub use pigeonhole::pigeonhole_assemble;
