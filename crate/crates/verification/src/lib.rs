//! Holds the `acceptance` test target, which runs the full acceptance grid
//! against the `hyperschwarz` library and prints one line per criterion.
//!
//! Run it with `cargo test -p hyperschwarz-verification --test acceptance`.
