//! The Lie algebra `sp(2, R)`: root basis, normal forms, quadruples and obstructions.

pub mod basis;
pub mod canonical;
pub mod classify;
pub mod embed;
pub mod obstruct;
pub mod poly;

pub use basis::{bracket, table_verify, SpVec, TableReport};
pub use canonical::{build_m_gamma, det_m_gamma, CanonicalForm};
pub use classify::{classify_hamiltonian, classify_hamiltonian_exact, Classification};
pub use embed::{check_relations, conjugate, embedding_search, phi_scale, standard_generators, EmbedReport, Quadruple};
pub use obstruct::{obstruction_solve, ObstructionReport};
