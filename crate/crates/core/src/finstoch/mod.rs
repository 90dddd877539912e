//! Dense finite stochastic matrices: `Mat(R+)`, its subcategory `Stoch`, the
//! copy/discard/uniform structure and the compact-closed caps and cups.

mod matrix;
mod space;
mod stoch;

pub use matrix::{cap, compose, cup, has_full_support, is_stochastic, min_entry, tensor, RMatrix};
pub use space::{Var, VarSpace};
pub use stoch::{
    copy, discard, marginalize, permutation, permute_state, swap, uniform, JointState, StochMap,
};
