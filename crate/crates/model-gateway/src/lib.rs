//! Executes sampling plans against pluggable HTTP model providers, with a
//! persistent append-only response store, bounded retries and a hermetic
//! replay mode for offline analysis.

pub mod provider;
pub mod runner;
pub mod store;

pub use provider::{CompleteOutcome, GatewayError, Provider, ProviderConfig};
pub use runner::{run_plan, ExecutionReport, StateCounts};
pub use store::{replay, ModelResponse, ResponseMeta, ResponseStatus, ResponseStore, StoreError};
