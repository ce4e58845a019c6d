//! Star-product private information retrieval over coded distributed
//! storage.
//!
//! The crate is organised around the objects of the construction:
//!
//! * [`algebra`] — finite fields `F_{p^s}`, polynomials, dense linear algebra;
//! * [`codes`] — linear codes with duals, componentwise (star) products, and
//!   certified minimum-distance computation;
//! * [`families`] — concrete constructions: generalized Reed-Solomon,
//!   binary Reed-Muller, cyclic/BCH, repeated-root cyclic, and elliptic-curve
//!   algebraic-geometry codes;
//! * [`bounds`] — the Singleton-type audit of storage/collusion/retrieval
//!   rates plus the parametric rate calculators;
//! * [`pir`] — the retrieval protocol itself: storage encoding, padded
//!   queries, syndrome reconstruction, robustness to Byzantine and
//!   unresponsive servers, and privacy audits;
//! * [`netsim`] — an in-memory adversarial bus and a minimal binary wire
//!   protocol with standalone server/client endpoints.

pub mod algebra;
pub mod bounds;
pub mod codes;
pub mod families;
pub mod netsim;
pub mod pir;

pub use algebra::{Field, FieldElement, FieldRef, Matrix, Poly};
pub use codes::{DistanceCertificate, LinearCode, Provenance};
