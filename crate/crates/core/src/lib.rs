//! Exact computations around surjective rational endomorphisms of del Pezzo
//! surfaces.
//!
//! * [`lattice`] models the Picard lattice of a blow-up of the plane at
//!   `r <= 8` general points: lines, conics, the line graph, blow-downs.
//! * [`cones`] does exact polyhedral cone arithmetic (double description)
//!   and extracts ray permutations induced by linear maps.
//! * [`endo`] validates candidate pullback actions and runs the reduction
//!   steps that rule out degree > 1 on surfaces of degree <= 5.
//! * [`planemaps`] analyzes explicit rational self-maps of the plane.

pub mod arith;
pub mod cones;
pub mod endo;
pub mod lattice;
pub mod planemaps;
