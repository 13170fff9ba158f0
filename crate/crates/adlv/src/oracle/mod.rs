pub mod enumerate;
pub mod family;
pub mod field;
pub mod lattice;

pub use enumerate::{count_points, enumerate_window, padded_window, CountReport, EnumerateSpec};
pub use family::{
    apply_family, delta_index, family_endpoint, family_vec, reduce_to_j, shift_standard_lattice,
    DeltaIndex, ReduceOutcome, UPoly, WindowOp,
};
pub use field::{Field, K};
pub use lattice::{
    block_shift_vec, dominance_leq_gl, member, relative_position, shift_lattice, Echelon, FrobTwist,
    Lattice, Window, WinVec,
};
