#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod game;
pub mod characterize;
pub mod circuits;
pub mod coverage;
pub mod solver;
pub mod strategy;
