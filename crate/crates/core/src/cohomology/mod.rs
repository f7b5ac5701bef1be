//! Betti numbers: the moduli of pointed rational curves and the blowup tower.

mod m0n;
mod poly;
mod tower;

pub use m0n::{open_e_polynomial, picard_rank, poincare_m0bar, poincare_m0bar_bounded};
pub use poly::{PoincarePolynomial, Poly};
pub use tower::{
    build_blowup_plan, h2_crosscheck, h2_crosscheck_with, is_tower_supported, poincare_from_plan,
    poincare_multiscale, poincare_multiscale_with, BlowupPlan, BlowupStep, TieBreak, TowerOptions,
};
