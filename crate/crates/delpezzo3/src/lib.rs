//! Exact lattice computations on blowups of P² and Hirzebruch surfaces, and a verifier
//! for the catalog of index-three log del Pezzo surface types.

pub mod blowup;
pub mod catalog;
pub mod dualgraph;
pub mod expr;
pub mod lattice;
pub mod verifier;

pub use blowup::{eliminate, ChainPoint, ClusterSpec, Level, Residual, Stage, Tower};
pub use catalog::{realize, Catalog, ConcreteType, Family, Realization, TypeSpec};
pub use dualgraph::{canonical_form, classify_component, classify_symbol_sum, Atom, SingSymbol, WeightedDualGraph};
pub use lattice::{BaseSurface, CurveKind, DivClass, Lattice, SymbolicCurve};
pub use verifier::{run_all, verify_type, Check, Report, Status, Summary};
