pub mod arith;
pub mod catalog;
pub mod defect;
pub mod formmatch;
pub mod frobenius;
pub mod poly;
pub mod projq;
pub mod search;
pub mod ternary;

pub use catalog::{builtin_catalogue, BeauvilleLabel, CatalogError, Family, FibrationSpec, SingularFibre};
pub use defect::{analyze, DefectError, DefectReport, ProductSpec};
pub use formmatch::{FormError, MatchReport, NewformEntry, Verdict};
pub use frobenius::{extract_apu, FrobError, Ledger, TraceCache, TraceRecord};
pub use projq::{Moebius, Num, ProjPoint, Rational};
pub use search::{Candidate, SearchCase, SearchError};
