//! Exact lattice computations on twist data.

mod snf;
mod twist;

pub use snf::{smith_normal_form, smith_normal_form_i64};
pub use twist::{
    ghost_group_order, ghost_order_by_cosets, prong_orbit_count, prong_orbits_by_search,
    twist_data, LatticeIndexResult, TwistData, TwistEdge,
};
