//! Hypergraph-product CSS codes over GF(2^r) and noisy-syndrome decoding by
//! reduction to the classical constituents.
//!
//! The crate is organised bottom-up:
//!
//! * [`gf`]: field arithmetic, polynomials, Toeplitz solving.
//! * [`matrix`]: dense matrices, row reduction, kernels, Kronecker products.
//! * [`codes`]: linear codes (Reed-Solomon, folded RS, expander codes),
//!   duals, the doubling construction, brute-force distance.
//! * [`syndec`]: classical syndrome decoders, both the key-equation decoder
//!   for polynomial codes and bit-flipping for expander codes, plus
//!   brute-force reference decoders.
//! * [`hgp`]: the hypergraph product of two parity-check matrices and the
//!   derived single-code products used by the reductions.
//! * [`qdecode`]: the quantum-side decoders that slice a (noisy) syndrome
//!   into classical sub-instances and stitch the answers back together.
//! * [`campaign`]: Monte-Carlo trial running, aggregation, and sweeps.
//! * [`descriptor`]: serialisable descriptions of codes and trial results.
//!
//! Everything is exact linear algebra over small fields; no floating point
//! enters except in reported statistics.

pub mod campaign;
pub mod codes;
pub mod descriptor;
pub mod gf;
pub mod hgp;
pub mod matrix;
pub mod qdecode;
pub mod syndec;

pub use campaign::{
    run_campaign, sweep, to_csv, Aggregates, Campaign, ConfigError, ErrorModel, Family,
    FieldParams, GraphParams, TrialConfig, TrialRecord, TrialReport,
};
pub use codes::{
    brute_force_block_distance, brute_force_distance, certify_expansion, expander_code, frs_code,
    rs_code, single_parity_code, BipartiteGraph, CodeError, CodeMeta, ExpanderCode,
    ExpansionCertificate, FoldedCode, LinearCode, DISTANCE_BUDGET, INF_DISTANCE,
};
pub use descriptor::{pack_vec, unpack_vec, CodeDescriptor, DescriptorError};
pub use gf::{Field, FieldRef, Gf, GfError, Poly, ToeplitzSystem};
pub use hgp::{
    build_hgp, build_hprime_nonnoisy, build_hprime_noisy, hgp_params, logical_distance,
    logical_equiv, min_weight_logical, HgpCode, HgpError, HgpParams, NoisyHprime, NonNoisyHprime,
    Side,
};
pub use matrix::{Mat, MatError, RowSpace};
pub use qdecode::{
    apply_h_kron_i, apply_i_kron_h, consistent, decode_noisy_version, decode_nonnoisy_version,
    noisy_in_promise, noisy_quantum_code, nonnoisy_in_promise, nonnoisy_quantum_code,
    observed_syndrome, slice_columns, slice_rows, stage_loads, stage_loads_split,
    transpose_layout, unslice_columns, unslice_rows, BruteDecoder, NoisyQuantumCode,
    NonNoisyQuantumCode, QDecodeError, QuantumDecodeResult, QuantumNoisyInstance,
    QuantumNonNoisyInstance, SliceDecoder, StageRecord, WhichCode,
};
pub use syndec::{
    brute_force_decode, complete_error, flip_decode_noisy, key_equation_decode, poly_decode,
    syndrome_adapter, ErrorLocator, NoisySyndromeInstance, PolyDecoder, SynDecError,
    SyndromeInstance,
};
