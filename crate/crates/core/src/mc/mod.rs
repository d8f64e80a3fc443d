//! The Maurer–Cartan variety of a subalgebra of derivations, the group
//! actions on it, and orbit invariants.

mod actions;
mod orbits;
mod variety;

pub use actions::{aut_a_action, aut_a_automorphism, aut_action, aut_v_lift, conjugate_perturbation};
pub use orbits::{
    canonical_gauge_representative, classify, closure_poset, elliptic_certificate, gauge_is_trivial,
    gauge_shift, orbit_invariants, EllipticStatus, GaugeReduction, OrbitInvariantReport,
};
pub use variety::{build_variety, mc_points_check, MCVariety, Polynomial, QuadraticSystem};
