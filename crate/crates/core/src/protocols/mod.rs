//! The three controlled-channel protocols, run by exact branch enumeration,
//! plus the fixed-configuration baseline and necessity sweeps.
//!
//! Parties: Alice holds `A` (and the copies made by cloning), Charlie holds
//! the control `C`, receivers hold `B(1)…B(N)`. A target that has crossed a
//! transmission line is relabeled from `A`/`Line(n)` to `B(n)`.

mod baseline;
mod distribution;
mod private_dit;
mod resource;
mod sweep;
mod transcript;
mod unitaries;

pub use baseline::{
    classical_flag_encodings, dfs_phase_encodings, fixed_configuration_baseline, identical_encodings,
    pretty_good_success, BaselineReport,
};
pub use distribution::{run_bipartite_establishment, run_ghz_distribution};
pub use private_dit::{
    privacy_report, run_private_dit, run_private_dit_all, run_private_dit_encoded, PairwisePrivacy,
    PrivacyReport,
};
pub use resource::{ResourceKind, ResourceState};
pub use sweep::{alpha_grid, necessity_sweep, sweep_metric, SweepCertificate, SweepRow, SweepTable, PERFECT_TOL};
pub use transcript::{Branch, Protocol, ProtocolParams, ProtocolTranscript, Stage};
pub use unitaries::{clone_extend_unitary, correction_unitary, phase_encoding_unitary};
