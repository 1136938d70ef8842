//! Knot and link diagram rewriting over cyclic Gauss codes.
//!
//! The crate keeps every diagram as a double-occurrence word with over/under
//! layers and optional handedness signs, rewrites it with crossing-monotonic
//! moves (kink and clasp removal, triangle slides, box shifts and twists),
//! and classifies diagrams by the canonical form of their rewrite orbit.

pub mod boxmoves;
pub mod code;
pub mod oracle;
pub mod orbit;
pub mod planarity;
pub mod rmoves;
pub mod tabulate;

pub use boxmoves::{
    apply_shift, box_moves, enumerate_boxes, flype, is_box_drawable, rotate_box, shift_sites,
    twist, End, Leg, ShiftSite, TangleBox,
};
pub use code::{CodeError, DiagramKey, Fragment, GaussCode, Layer, Pass, Sign, Signedness};
pub use oracle::{bracket, normalized_bracket, writhe, LaurentPoly};
pub use orbit::{
    canonical_form, connecting_moves, equivalent, explore, normalize, replay, representative,
    seed_code, state_key, successors, Orbit, OrbitError, OrbitOptions, OrbitState, Verdict,
};
pub use planarity::{interlacement_all_even, is_realizable, is_realizable_signed, witness_signed};
pub use rmoves::{apply_r, r_sites, reduce, MoveError, MoveKind, MoveRecord, RSite, Reduction};
pub use tabulate::{
    build_table, build_table_journaled, enumerate_shadows, is_prime_diagram, is_reduced,
    load_table, save_table, KnotClass, KnotTable, Shadow, TableError,
};
