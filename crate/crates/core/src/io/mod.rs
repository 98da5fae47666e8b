//! File formats: channel-spec input and region/curve output.

mod export;
mod spec_file;

pub use export::{round_sig, CurveExport, ExportMetadata, Format, RegionExport, Units, SIG_DIGITS};
pub use spec_file::{dm_spec_to_json, load_dm_spec, parse_dm_spec};
