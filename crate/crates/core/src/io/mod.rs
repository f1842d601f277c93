//! Configuration files, physical scales, the tensor cache and CSV output.

pub mod cache;
pub mod config;
pub mod scales;
pub mod snapshot;

pub use cache::{cache_header, cache_read, cache_read_matching, cache_write, CacheHeader};
pub use config::{load_config, parse_config, Driver, RunConfig};
pub use scales::{compute_knudsen, nondimensionalize, PhysicalScales, BOLTZMANN};
pub use snapshot::{emit_snapshot, write_grid_csv, write_series_csv, OutputUnits};
