//! Experiment runner (to be filled in).
