//! Compiler from declarative spreadsheet models to structured workbooks.
//!
//! A model is an ordered list of variables (parameters, interface inputs,
//! intermediates and interface outputs). The pipeline parses it, checks
//! the structural rules, lays it out as an Interface / Model / Parameters
//! workbook where every intermediate lives in its own block, writes the
//! result as `.xlsx`, and proves the layout computes what the model says by
//! evaluating both and comparing.

pub mod formula;
pub mod names;
pub mod model;
pub mod fixtures;
pub mod eval;
pub mod layout;
pub mod xlsx;
pub mod diagram;
pub mod cli;
pub mod pipeline;
