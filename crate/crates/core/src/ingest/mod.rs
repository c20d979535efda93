//! Loading recordings, session splitting and idle classification.

mod generator;
mod recording;
mod session;

pub use generator::*;
pub use recording::*;
pub use session::*;
