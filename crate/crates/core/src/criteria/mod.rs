//! Decision procedures: Fedder's criterion, the D1-D3 checks, the ideal
//! iterations behind the necessary conditions, witness search and `tau` tools.

pub mod conditions;
pub mod fedder;
pub mod necessary;
pub mod search;
pub mod tau;

pub use conditions::{certify, check_d1, check_d3, verify_d2_decomposition, Certification};
pub use fedder::fedder_fpure;
pub use necessary::{necessary_qf2_non_fpure, necessary_qfe, qfs_height, NecessaryOptions};
pub use search::{replay_certificate, sufficient_qfe, sufficient_qfr, SearchOptions};
pub use tau::{cartier_step, jacobian_seed, tau_closure};
