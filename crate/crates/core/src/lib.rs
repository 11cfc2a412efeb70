pub mod bounds;
pub mod cli;
pub mod config;
pub mod dynamics;
pub mod error;
pub mod linalg;
pub mod measurement;
pub mod pauli;
pub mod stabilizer;
pub mod sweep;
pub mod verify;
