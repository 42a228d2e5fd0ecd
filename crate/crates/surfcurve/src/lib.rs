pub mod constructions;
pub mod curve;
pub mod cover;
pub mod cut;
pub mod error;
pub mod flags;
pub mod hardness;
pub mod loops;
pub mod map;
pub mod oracle;
pub mod overlay;
pub mod solver;
pub mod weight;
pub mod z2;

pub use error::{Error, Result};
pub use map::{load_surface, DualMap, Side, SurfaceMap};
pub use weight::Weight;
