//! Theorem-level experiments (to be filled in).
