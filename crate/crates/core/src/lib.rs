pub mod algebra;
pub mod compact;
pub mod corpus;
pub mod error;
pub mod fan;
pub mod flag;
pub mod gersten;
pub mod json;
pub mod tropical_k;
pub mod tropicalize;
pub mod valuation;

pub use error::{Error, Result};
