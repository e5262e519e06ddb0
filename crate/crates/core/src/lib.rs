//! Exact quadratic-form calculus over a small lattice of base fields.
//!
//! The library provides:
//!
//! * exact arithmetic in Q, F_p (p odd) and one-variable rational function
//!   fields over these, together with their discrete valuations ([`fields`]);
//! * diagonal quadratic forms, Witt-ring operations, Pfister forms, the first
//!   and second residue homomorphisms and equivalence/isotropy deciders
//!   ([`witt`]);
//! * mod-2 symbol calculus: cup products, the invariants e_1, e_2, e_3, tame
//!   residues of symbols, triviality deciders backed by Hilbert symbols, and
//!   a table of certified unramified-cohomology orders ([`symbols`]);
//! * divisors, Picard groups and ideles over a declared valuation set
//!   ([`divisorial`]);
//! * good-reduction predicates for spinor, special-unitary and octonion
//!   automorphism groups ([`reduction`]);
//! * hermitian forms over quadratic extensions and the Jacobson transfer
//!   ([`hermitian`]);
//! * octonion algebras as symbol triples, residue quaternion algebras and the
//!   genus-obstruction map ([`g2`]);
//! * the classification sieve and local-global fiber bounds ([`sieve`]).
//!
//! All values are immutable and all operations are pure and deterministic.

pub mod catalog;
pub mod divisorial;
pub mod fields;
pub mod fppoly;
pub mod g2;
pub mod hermitian;
pub mod localq;
pub mod quadfield;
pub mod reduction;
pub mod sieve;
pub mod symbols;
pub mod table;
pub mod witt;

pub mod intfactor;

pub mod qpoly;

mod error;

pub use error::Error;

/// Outcome of a decider that is allowed to give up outside its certified
/// lattice. `Undecided` is a value, not a fault.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Decision {
    True,
    False,
    Undecided,
}

impl Decision {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Decision::True
        } else {
            Decision::False
        }
    }

    /// The decided value, or `None` for `Undecided`.
    pub fn known(self) -> Option<bool> {
        match self {
            Decision::True => Some(true),
            Decision::False => Some(false),
            Decision::Undecided => None,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
