//! Command-line front end for `goldbach-cesaro`: verification runs, N scans, S̃ envelope
//! scans, the convergence probe and Laplace kernel checks, with JSON/CSV reports.

pub mod commands;
pub mod report;
