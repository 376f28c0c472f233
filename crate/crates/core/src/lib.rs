//! Exact state-vector simulation of a system qubit coupled to three meter
//! qubits by an Arthurs-Kelly type interaction.

pub mod cli;
pub mod density;
pub mod entanglement;
pub mod error;
pub mod interaction;
pub mod measure;
pub mod operator;
pub mod qubit;
pub mod random;
pub mod state;
pub mod swap;
pub mod teleport;
pub mod verify;
