//! Gabor-transform magnitude sampling and phase retrieval for bandlimited
//! signals.
//!
//! The crate models signals through spectral profiles on a band [-B, B],
//! computes Gabor transforms with the normalized Gaussian window, samples
//! magnitudes on product sets X × Ω, checks the sampling-density and
//! dictionary-completeness conditions that make those samples determining,
//! and reconstructs the signal up to a global phase from the magnitudes
//! alone. A fractional Fourier transform layer rotates the whole picture in
//! the time-frequency plane.

pub mod error;
pub mod frft;
pub mod gabor;
pub mod grid;
pub mod io;
pub mod linalg;
pub mod recovery;
pub mod sampling;
pub mod signal;
pub mod zalik;

pub use error::{Error, Result};
pub use frft::{
    frft_apply, frft_signal, rotate_point, rotate_product_set, rotation_identity_residual,
    FrftParams, PadConfig, TfPoint,
};
pub use gabor::{
    autocorrelation_profile, band_energy_ratio, band_energy_ratio_squared, gabor_direct,
    gabor_transform, gaussian_window, magnitude_samples, slice_profile, young_exponent,
    ExponentPair, ProductSamples, SliceProfile,
};
pub use grid::{FrequencyGrid, LebesgueExponent};
pub use recovery::{
    gram_from_field, rank_one_extract, recover_autocorrelations, recover_correlation_field,
    recover_rotated, recover_signal, verify_uniqueness, CorrelationField, GramMatrix,
    RankOneExtraction, RecoveryConfig, RecoveryReport, RotatedSignal, UniquenessRecord,
    UniquenessVerdict,
};
pub use sampling::{
    beurling_count, check_sampling_condition, density_report, estimate_sampling_constant,
    invert_slice_samples, lower_uniform_density, resynthesis_misfit, resynthesize,
    uniform_discreteness, DensityConvention, DensityReport, LatticePattern, PointSet,
    SpectralEstimate,
};
pub use signal::{global_phase_distance, BandlimitedSignal, PhaseAlignment};
pub use zalik::{
    best_approximation, build_dictionary, dyadic_centers, muntz_partial_sums,
    nested_completeness_experiment, ApproximationResult, GaussianDictionary, MuntzDiagnostic,
    MuntzVerdict, TrendPoint,
};
