//! Verifiable certificates for 3-divisibility of class numbers of real
//! quadratic fields.
//!
//! The crate is organised bottom-up:
//!
//! * [`number`]: big-integer utilities (squarefree kernels, Kronecker
//!   symbols, exact roots, valuations) and quadratic-field bookkeeping.
//! * [`forms`]: class numbers computed directly from reduced binary
//!   quadratic forms, plus the Scholz reflection cross-check.
//! * [`km`]: the Kishi–Miyake criterion for cubics `Z³ − uvZ − u²`.
//! * [`kishi`]: the criterion built from half-integral elements `(a + b√m)/2`
//!   with cube norm, including the 3-adic total-ramification test.
//! * [`families`]: the three parametric families of real quadratic fields,
//!   quadruple assembly and the kernel distinctness scan.
//! * [`elliptic`]: exact rational arithmetic on elliptic curves and a
//!   rational 3-torsion search with a Nagell–Lutz cross-check.
//! * [`report`]: configuration, machine-readable records and the
//!   command-line driver behind the `quadclass` binary.

pub mod elliptic;
pub mod error;
pub mod families;
pub mod forms;
pub mod kishi;
pub mod km;
pub mod number;
pub mod report;

pub use error::{Error, Result};

/// Toolkit version stamped into every emitted record.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
