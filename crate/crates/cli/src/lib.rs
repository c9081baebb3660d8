//! Library surface of the `qwopt` binary: campaign configuration and
//! execution live here, split from `main` so integration tests can drive
//! campaigns in-process and assert on the artifacts they produce.

pub mod campaign;
pub mod config;
pub mod emit;

pub use campaign::{run_campaign, CampaignError, CampaignOutcome};
pub use config::{resolve, CampaignConfig, FileConfig, Overrides, TaskKind};
