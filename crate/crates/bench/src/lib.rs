//! Fixtures shared by the benchmarks.

use ldkep_core::ld::parse_context;
use ldkep_core::protocol::{PublicParams, SecretBounds, HASH_SHA256};

/// Parameters for a preset with the default bounds and `m = n = 1`.
pub fn params(preset: &str) -> PublicParams {
    let ctx = parse_context(preset).expect("preset parses");
    let b = SecretBounds::for_context(&ctx);
    PublicParams::new(ctx, 1, 1, b, HASH_SHA256).expect("preset passes its self-check")
}
