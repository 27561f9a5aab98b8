//! Shared setup helpers for the criterion benches live here as they grow.
