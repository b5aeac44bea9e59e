//! Test-only crate. The acceptance gate lives in `tests/acceptance.rs` and
//! runs with `cargo test -p sip-validation`.
