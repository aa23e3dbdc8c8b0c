//! Derivatives, integrals and commutativity invariants on Zelevinsky
//! multisegments for general linear groups over a local field.

pub mod branching;
pub mod commutativity;
pub mod error;
pub mod invariants;
pub mod jacquet;
pub mod operators;
pub mod parse;
pub mod rep;
pub mod segment;
pub mod sweep;

pub use branching::{
    dualize_certificate, find_certificates, qa_example, rankin_selberg_example, trivial_example, verify_certificate,
    Certificate, ExampleCase, Search, SearchBound,
};
pub use commutativity::{comm_dual_rdli, comm_ldri, comm_rdli, strong_multi, Outcome, Reason, TripleVerdict, Witness};
pub use error::{Error, Result};
pub use invariants::{epsilon, eta, hd, level, mx, Cmp, EtaVector};
pub use operators::{derive, derive_multi, integrate, integrate_multi, Side};
pub use parse::{parse_expr, parse_half, parse_multisegment, parse_rep, parse_segment, parse_value, Expr, LineTable, TraceStep, Value};
pub use rep::RepParam;
pub use sweep::{run_sweep, universe, Property, PropertyReport, SweepConfig, SweepReport, Universe};
pub use segment::{fmt_half, CuspidalPoint, Line, Multisegment, Segment, SegmentRelation, STEP};
pub use jacquet::{compose_orbits, derivative_witness, factors, jacquet_layers, top_layer, JacquetLayer, LayerIndex, OrbitOrder, Piece, Tag};
