//! Space-time block codes: constructors, diversity analysis, a numerical
//! search for unitary codebooks, and ML / linear / PIC group decoders.
//!
//! Codes are represented through their real linear-dispersion expansion: a
//! codeword is `C = sum_i u_i A_i` where `u` stacks the real and imaginary
//! parts of the information symbols. Conjugations (as in the Alamouti and
//! orthogonal designs) are linear over the reals, so one decoder stack
//! serves every code.

pub mod decode;
pub mod dispersion;
pub mod diversity;
pub mod search;

pub use decode::{decode_linear, decode_ml, decode_pic, equivalent_real_channel, GroupPartition, LinearDecodeMode, RealMatrix};
pub use dispersion::{alamouti, diagonal_from_rotation, enumerate_codebook, ostbc34, ExplicitCodebook, LinearDispersionCode};
pub use diversity::{diversity_report, DiversityReport};
pub use search::{unitary_code_search, SearchResult};
