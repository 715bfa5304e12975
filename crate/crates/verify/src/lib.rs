//! Test-only crate: `cargo test -p canonsys-verify --test acceptance` runs the
//! end-to-end acceptance checks against `canonsys-core`.
