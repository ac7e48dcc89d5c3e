//! Concrete modules on which the operators act.
//!
//! * [`fock`]: the divided-power Fock module `Gamma[t, u^[*]]`.
//! * [`decompose`]: splitting a finite module as `M0[t, u^[*]]`.
//! * [`zerocycle`]: the truncated zero-cycle model with the Witt derivations,
//!   and the group algebra of a lattice.
//! * [`taut`]: the free tautological algebra and the differential operators
//!   realizing `P_{m,k}(a)`.

use thiserror::Error;

pub mod decompose;
pub mod fock;
pub mod taut;
pub mod zerocycle;

pub use decompose::{decompose_check, decompose_module, Decomposition, ModOp, ModuleTables};
pub use fock::{
    fock_apply, fock_apply_word, fock_sl2, fock_sl2_check, lefschetz_power, row_column_commute_check,
    FockOp, FockVector, Sl2,
};
pub use taut::{
    bookkeeping_check, homomorphism_check, realize_p, DiffOp, Sym, TautMono, TautPoly, TautSpace,
};
pub use zerocycle::{pontryagin_identity_check, witt_check, GroupAlgebraElem, ZeroCycleModel};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("e^(n-m) needs n >= m, got m = {m}, n = {n}")]
    LefschetzRange { m: u32, n: u32 },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("operator `{0}` is not locally nilpotent on the module")]
    NonNilpotent(String),
    #[error("the module table lacks operator `{0}`")]
    MissingOperator(String),
    #[error("formal symmetric-power factors need rational scalars")]
    NeedsRational,
    #[error("column towers have no realization on the tautological algebra")]
    ColumnTower,
    #[error(transparent)]
    Ring(#[from] crate::ring::RingError),
    #[error(transparent)]
    Env(#[from] crate::env::EnvError),
}
