//! Structural and spectral analysis of Z-tensors and their absolute tensors.

pub mod error;
pub mod gf2;
pub mod harness;
pub mod index;
pub mod io;
pub mod scalar;
pub mod similarity;
pub mod spectra;
pub mod structure;
pub mod tensor;

pub use error::{FormatError, HarnessError, SimilarityError, SpectraError, StructureError, TensorError, ZFormError};
pub use index::{intersection_count, IndexSet, IndexTuple};
pub use scalar::{Real, Scalar};
pub use tensor::{compose, z_decompose, Sign, Tensor, ZDecomposition};

pub type Tensor64 = Tensor<f64>;
pub type Tensor32 = Tensor<f32>;
pub type ExactTensor = Tensor<num_rational::BigRational>;
