//! Symbolic generalized synchronization trees (GSTs), their surrogate Kripke
//! structures, generalized Hennessy-Milner logic, and bisimulation tooling.
//!
//! The main entry points:
//!
//! * [`exec_words`]: canonical execution words labelling modalities.
//! * [`gst`]: symbolic GSTs, cut classes and sub-trees.
//! * [`surrogate`]: the finite surrogate Kripke structure of a GST.
//! * [`bisim`]: minimization, bisimulation, simulation, stratified
//!   equivalence and distinguishing formulas.
//! * [`formula`]: formula syntax and model checking.
//! * [`hm_classes`]: image-finiteness, frame schemata, VHHM checks and lazy
//!   infinite-state generators.
//! * [`model_file`]: the text format for GSTs and Kripke structures.

pub mod bisim;
pub mod error;
pub mod exec_words;
pub mod formula;
pub mod gst;
pub mod hm_classes;
pub mod kripke;
pub mod model_file;
pub mod surrogate;

pub use bisim::{
    bisim, distinguishing_formula, minimize, simulate, stratified, stratified_between, strong_bisim_discrete,
    weak_bisim_gst, BisimVerdict, Partition,
};
pub use error::{Error, Result};
pub use exec_words::{
    concat, equivalent, format_word, normalize, parse_word, realize, splits, ExecWord, Label, Segment, SegmentShape,
};
pub use formula::{format_formula, mc_gst, mc_gst_direct, mc_kripke, parse_formula, to_hml, Formula};
pub use gst::{from_discrete_st, CutClass, CutKind, DiscreteTree, SymbolicGst};
pub use hm_classes::{
    gen_fig3, gen_gx, image_finite, image_finite_bounded, rank_certificate_check, schemata_check, stratified_lazy,
    truncate, vhhm_check, ImageFiniteBounded, LazyKripke, SchemataReport, VhhmReport,
};
pub use kripke::{KripkeStructure, StateId};
pub use model_file::{format_model, parse_model, ModelFile};
pub use surrogate::{build_surrogate, sampled_surrogate};
