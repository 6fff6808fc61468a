pub mod bits;
pub mod clifford;
pub mod error;
pub mod pauli;
pub mod probe;
pub mod settings;
pub mod solver;
