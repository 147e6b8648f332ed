//! Exact minor testing at desk scale: models, attached models, and
//! Menger-type linkages and separations.
//!
//! The search is exponential. It is exact within its node budget and
//! reports [`crate::Error::BudgetExceeded`] instead of guessing.

mod flow;
mod model;
mod search;

pub use flow::{menger, MengerOutcome};
pub use model::{AttachedModel, JoinPattern, Linkage, Model, Separation};
pub use search::{find_attached_model, find_attached_model_with, find_model, find_model_with, SearchConfig};

pub(crate) use flow::{vertex_cut, Cut};
pub(crate) use search::{find_attached_within, find_model_within};
