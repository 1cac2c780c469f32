//! Pieces of the `faqbot` binary that are worth testing without a process.

pub mod repl;
