//! Experiment harness: sweep configuration, the Monte-Carlo beta sweep
//! and Kullback report, and texture support maps.

pub mod config;
pub mod sweep;
pub mod texture;

pub use config::{BetaGrid, CriterionSpec, SweepConfig};
pub use sweep::{
    markers_for, run_beta_sweep, run_kullback_report, write_sweep_csv, Markers, SweepReport,
    SweepRow,
};
pub use texture::{ascii_map, run_texture, write_texture_csv, Method, TextureResult};
