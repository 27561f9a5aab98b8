//! Two-stage decoding of HGP(H', H') codes with noisy syndrome bits.
//!
//! The measured syndrome of the product code factors as
//!
//! ```text
//!   s_obs = (H' (x) I) x  +  (I (x) H') y  +  e_syn
//! ```
//!
//! with x the first qubit block, y the second and e_syn the syndrome noise.
//! Stage 1 treats E := (H' (x) I) x + e_syn as opaque noise and solves each
//! consecutive chunk of s_obs as a one-factor instance s_i = H' y_i + E_i;
//! stage 2 reassembles E and repeats on the strided slices, where
//! (H' (x) I) x concentrates, recovering x and e_syn. Every result is exact
//! in the sense that the reconstructed (x, y, e_syn) reproduces s_obs
//! identically; decoding can fail per slice, never silently.
//!
//! The per-slice instances are solved through the structure of the chosen
//! assembly: the noisy H' = [[I, P], [P^T, I]] reduces to flip decoding of
//! the base expander code plus a small split search, and the non-noisy
//! H' = [[0, P], [P^T, 0]] splits each slice into one instance of the base
//! code and one of its dual, both handled by the polynomial decoder.
//!
//! Only one syndrome type is decoded directly. H' is symmetric, so the
//! mirrored type is the same problem after [`transpose_layout`]: transpose
//! the n x n syndrome layout, decode, and transpose the three outputs back.

use crate::codes::{ExpanderCode, LinearCode};
use crate::gf::Gf;
use crate::hgp::{
    build_hgp, build_hprime_noisy, build_hprime_nonnoisy, HgpCode, HgpError, NoisyHprime,
    NonNoisyHprime,
};
use crate::matrix::{add_vecs, gather_perm, scatter_perm, support, weight, Mat};
use crate::syndec::{
    brute_force_decode, flip_decode_noisy, NoisySyndromeInstance, PolyDecoder, SynDecError,
    SyndromeInstance,
};
use thiserror::Error;

/// Cap on the joint support size of the two residual blocks before the
/// split search falls back to the four extreme attributions.
const SPLIT_ENUM_CAP: usize = 12;

/// A syndrome decoder usable per slice by the split assembly: maps a
/// syndrome to a minimal-weight error of the constituent code.
pub trait SliceDecoder {
    fn decode_syndrome(&self, s: &[Gf]) -> Result<Vec<Gf>, SynDecError>;
}

impl SliceDecoder for PolyDecoder {
    fn decode_syndrome(&self, s: &[Gf]) -> Result<Vec<Gf>, SynDecError> {
        self.decode(s)
    }
}

/// Exhaustive-search fallback for constituent codes without polynomial
/// structure; only viable for short codes.
pub struct BruteDecoder {
    h: Mat,
    /// Largest error weight searched.
    pub t: usize,
}

impl BruteDecoder {
    pub fn new(code: &LinearCode, t: usize) -> BruteDecoder {
        BruteDecoder { h: code.parity_check().clone(), t }
    }
}

impl SliceDecoder for BruteDecoder {
    fn decode_syndrome(&self, s: &[Gf]) -> Result<Vec<Gf>, SynDecError> {
        brute_force_decode(&SyndromeInstance { h: self.h.clone(), s: s.to_vec(), t: self.t })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WhichCode {
    Base,
    Dual,
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum QDecodeError {
    #[error("syndrome has length {got}, expected {expected}")]
    BadLength { got: usize, expected: usize },
    #[error("stage {stage} failed on slice {slice}")]
    StageFailure {
        stage: u8,
        slice: usize,
        /// For the split (non-noisy) decoder, which constituent gave up.
        which_code: Option<WhichCode>,
    },
}

/// One per-slice record; only slices that did nontrivial work are logged.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StageRecord {
    pub stage: u8,
    pub slice: usize,
    /// Weight assigned by the slice solver (data plus noise).
    pub cost: usize,
}

#[derive(Debug, Clone)]
pub struct QuantumDecodeResult {
    pub x_hat: Vec<Gf>,
    pub y_hat: Vec<Gf>,
    pub e_syn_hat: Vec<Gf>,
    pub stage_log: Vec<StageRecord>,
    /// True when the total reconstructed weight fits the instance budget.
    pub success_flag: bool,
}

// ---------------------------------------------------------------------
// slicing

/// Consecutive chunks of a length n*n vector. Under this slicing,
/// (I (x) H) v has chunks H v_i.
pub fn slice_columns(s: &[Gf], n: usize) -> Result<Vec<Vec<Gf>>, QDecodeError> {
    if s.len() != n * n {
        return Err(QDecodeError::BadLength { got: s.len(), expected: n * n });
    }
    Ok(s.chunks(n).map(|c| c.to_vec()).collect())
}

/// The strided counterpart: slice i collects positions t*n + i, so that
/// (H (x) I) v has slices H v_i.
pub fn slice_rows(s: &[Gf], n: usize) -> Result<Vec<Vec<Gf>>, QDecodeError> {
    if s.len() != n * n {
        return Err(QDecodeError::BadLength { got: s.len(), expected: n * n });
    }
    Ok((0..n).map(|i| (0..n).map(|t| s[t * n + i]).collect()).collect())
}

pub fn unslice_columns(slices: &[Vec<Gf>]) -> Vec<Gf> {
    slices.concat()
}

pub fn unslice_rows(slices: &[Vec<Gf>]) -> Vec<Gf> {
    let n = slices.len();
    let mut out = vec![Gf::ZERO; n * n];
    for (i, sl) in slices.iter().enumerate() {
        assert_eq!(sl.len(), n, "row slices of an n x n layout have length n");
        for (t, &v) in sl.iter().enumerate() {
            out[t * n + i] = v;
        }
    }
    out
}

/// Transpose an n x n layout: entry (a, b) moves to (b, a). Conjugating by
/// this map swaps the two Kronecker factors, which is how the second
/// syndrome type reduces to the first for symmetric H'.
pub fn transpose_layout(s: &[Gf], n: usize) -> Result<Vec<Gf>, QDecodeError> {
    if s.len() != n * n {
        return Err(QDecodeError::BadLength { got: s.len(), expected: n * n });
    }
    let mut out = vec![Gf::ZERO; n * n];
    for a in 0..n {
        for b in 0..n {
            out[a * n + b] = s[b * n + a];
        }
    }
    Ok(out)
}

/// (H (x) I_w) v, computed from the support of v.
pub fn apply_h_kron_i(h: &Mat, v: &[Gf], w: usize) -> Vec<Gf> {
    assert_eq!(v.len(), h.cols() * w);
    let f = h.field().clone();
    let mut out = vec![Gf::ZERO; h.rows() * w];
    for (pos, &x) in v.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        let (j, t) = (pos / w, pos % w);
        for i in 0..h.rows() {
            let a = h.get(i, j);
            if !a.is_zero() {
                out[i * w + t] += f.mul(a, x);
            }
        }
    }
    out
}

/// (I_copies (x) H) v: H applied to each consecutive chunk.
pub fn apply_i_kron_h(h: &Mat, v: &[Gf], copies: usize) -> Vec<Gf> {
    assert_eq!(v.len(), h.cols() * copies);
    let mut out = Vec::with_capacity(h.rows() * copies);
    for chunk in v.chunks(h.cols()) {
        out.extend(h.mul_vec_sparse(chunk));
    }
    out
}

/// The syndrome a given error triple produces: (H' (x) I) x + (I (x) H') y
/// + e_syn. Used by tests and the trial harness to set up instances.
pub fn observed_syndrome(h_prime: &Mat, x: &[Gf], y: &[Gf], e_syn: &[Gf]) -> Vec<Gf> {
    let n = h_prime.rows();
    assert_eq!(h_prime.cols(), n, "H' is square");
    let mut s = apply_h_kron_i(h_prime, x, n);
    let sy = apply_i_kron_h(h_prime, y, n);
    assert_eq!(e_syn.len(), s.len());
    for ((a, &b), &c) in s.iter_mut().zip(&sy).zip(e_syn) {
        *a += b + c;
    }
    s
}

/// Exact consistency: the decode contract is that every returned result
/// reproduces the observed syndrome identically.
pub fn consistent(h_prime: &Mat, s_obs: &[Gf], res: &QuantumDecodeResult) -> bool {
    observed_syndrome(h_prime, &res.x_hat, &res.y_hat, &res.e_syn_hat) == s_obs
}

// ---------------------------------------------------------------------
// per-slice load accounting

/// Per-slice loads of an error triple: stage 1 sees, in chunk i, the data
/// weight of y_i plus the chunk weight of E = (H' (x) I) x + e_syn; stage 2
/// sees, in strided slice j, the data weight of x_j plus the noise weight
/// of e_syn there. A trial is within the decoder's promise when every load
/// stays within the per-slice radius.
pub fn stage_loads(h_prime: &Mat, x: &[Gf], y: &[Gf], e_syn: &[Gf]) -> (Vec<usize>, Vec<usize>) {
    let n = h_prime.rows();
    let e_mid = add_vecs(&apply_h_kron_i(h_prime, x, n), e_syn);
    let stage1 = (0..n)
        .map(|i| weight(&y[i * n..(i + 1) * n]) + weight(&e_mid[i * n..(i + 1) * n]))
        .collect();
    let stage2 = (0..n)
        .map(|j| {
            (0..n).filter(|&t| !x[t * n + j].is_zero()).count()
                + (0..n).filter(|&t| !e_syn[t * n + j].is_zero()).count()
        })
        .collect();
    (stage1, stage2)
}

/// Number of nonzero length-`fold` blocks; plain Hamming weight at fold 1.
fn block_weight(v: &[Gf], fold: usize) -> usize {
    v.chunks(fold).filter(|c| c.iter().any(|x| !x.is_zero())).count()
}

/// Split-load variant for the non-noisy assembly: per slice, the weights
/// of the two composites the constituent decoders actually see, in
/// original code coordinates and counted in blocks of the given folds
/// (base and dual respectively). Folds are 1 except for folded
/// Reed-Solomon constituents.
pub fn stage_loads_split(
    hp: &NonNoisyHprime,
    fold_base: usize,
    fold_dual: usize,
    x: &[Gf],
    y: &[Gf],
    e_syn: &[Gf],
) -> (Vec<(usize, usize)>, Vec<(usize, usize)>) {
    let n = hp.h_prime.rows();
    let n_top = hp.p.rows();
    let e_mid = add_vecs(&apply_h_kron_i(&hp.h_prime, x, n), e_syn);
    let loads = |data: &[Gf], noise: &[Gf]| {
        let mut base_comp = noise[..n_top].to_vec();
        base_comp.extend_from_slice(&data[n_top..]);
        let mut dual_comp = data[..n_top].to_vec();
        dual_comp.extend_from_slice(&noise[n_top..]);
        (
            block_weight(&scatter_perm(&base_comp, &hp.col_perm), fold_base),
            block_weight(&scatter_perm(&dual_comp, &hp.col_perm), fold_dual),
        )
    };
    let stage1 = (0..n)
        .map(|i| loads(&y[i * n..(i + 1) * n], &e_mid[i * n..(i + 1) * n]))
        .collect();
    let strided = |v: &[Gf], j: usize| -> Vec<Gf> { (0..n).map(|t| v[t * n + j]).collect() };
    let stage2 = (0..n).map(|j| loads(&strided(x, j), &strided(e_syn, j))).collect();
    (stage1, stage2)
}

/// Promise check for the noisy decoder: all stage loads within the radius.
pub fn noisy_in_promise(h_prime: &Mat, x: &[Gf], y: &[Gf], e_syn: &[Gf], radius: usize) -> bool {
    let (s1, s2) = stage_loads(h_prime, x, y, e_syn);
    s1.into_iter().all(|l| l <= radius) && s2.into_iter().all(|l| l <= radius)
}

/// Promise check for the non-noisy decoder, with separate radii (in
/// blocks) for the base code and its dual.
#[allow(clippy::too_many_arguments)]
pub fn nonnoisy_in_promise(
    hp: &NonNoisyHprime,
    fold_base: usize,
    fold_dual: usize,
    x: &[Gf],
    y: &[Gf],
    e_syn: &[Gf],
    r_base: usize,
    r_dual: usize,
) -> bool {
    let (s1, s2) = stage_loads_split(hp, fold_base, fold_dual, x, y, e_syn);
    s1.iter().chain(s2.iter()).all(|&(b, d)| b <= r_base && d <= r_dual)
}

// ---------------------------------------------------------------------
// the noisy-assembly code and decoder

/// An HGP(H', H') code over the noisy assembly of an expander base code,
/// bundled with the conversion data its slice solver needs.
pub struct NoisyQuantumCode {
    pub expander: ExpanderCode,
    pub hp: NoisyHprime,
    pub code: HgpCode,
    qt: Mat,
}

pub fn noisy_quantum_code(expander: ExpanderCode) -> Result<NoisyQuantumCode, HgpError> {
    assert_eq!(
        expander.code.field().r(),
        1,
        "the noisy reduction decodes through bit flipping, a binary routine"
    );
    let hp = build_hprime_noisy(&expander.code)?;
    let code = build_hgp(&hp.h_prime, &hp.h_prime);
    let qt = hp.q.transpose();
    Ok(NoisyQuantumCode { expander, hp, code, qt })
}

impl NoisyQuantumCode {
    /// Side length of the syndrome layout (= number of slices per stage).
    pub fn n_slices(&self) -> usize {
        self.hp.h_prime.rows()
    }
}

pub struct QuantumNoisyInstance<'a> {
    pub code: &'a NoisyQuantumCode,
    pub s_obs: Vec<Gf>,
    pub weight_budget: usize,
}

struct SliceSolution {
    data: Vec<Gf>,
    noise: Vec<Gf>,
    cost: usize,
}

/// Solve one slice equation s = H' u + E for the noisy assembly,
/// minimizing wt(u) + wt(E) over the solver's candidate set.
///
/// Writing the doubled coordinates as two copies (w1, w2) of the base
/// length and beta for the free part of w2, the slice system reduces to
/// residuals a = s1 + Q beta and c = s3 + Q beta whose coordinates are
/// attributed either to data bits or to noise bits, plus a per-coordinate
/// completion on the free block. Candidate betas come from flip decoding
/// the two converted base instances and from the all-zero fallback; the
/// minimum-cost attribution wins, first candidate on ties, so the search
/// order is deterministic.
fn solve_noisy_slice(qc: &NoisyQuantumCode, s: &[Gf], budget: usize) -> SliceSolution {
    let c = &qc.expander.code;
    let (nb, kb) = (c.n(), c.k());
    let r = nb - kb;
    let hp = &qc.hp;
    assert_eq!(s.len(), 2 * nb);

    let s_top = &s[..2 * nb - kb];
    let s1: Vec<Gf> = hp.jc.iter().map(|&j| s_top[j]).collect();
    let s2: Vec<Gf> = hp.fc.iter().map(|&j| s_top[j]).collect();
    let s3: Vec<Gf> = (0..r).map(|i| s_top[nb + i]).collect();
    let s4 = &s[2 * nb - kb..];

    let mut betas: Vec<Vec<Gf>> = vec![vec![Gf::ZERO; kb]];
    for blk in [&s1, &s3] {
        let sigma = hp.h_j.mul_vec(blk);
        let inst = NoisySyndromeInstance {
            h: qc.expander.graph_rows.clone(),
            s_obs: qc.expander.w.mul_vec(&sigma),
            budget,
        };
        if let Ok((u, _)) = flip_decode_noisy(&inst, &qc.expander.graph) {
            let beta: Vec<Gf> = hp.fc.iter().map(|&j| u[j]).collect();
            if !betas.contains(&beta) {
                betas.push(beta);
            }
        }
    }

    let score = |beta: &[Gf], alpha1: &[Gf], alpha3: &[Gf], a: &[Gf], cv: &[Gf], t2: &[Gf]| {
        let wv = {
            let mut sum13 = add_vecs(alpha1, alpha3);
            sum13 = qc.qt.mul_vec_sparse(&sum13);
            for (g, v) in sum13.iter_mut().enumerate() {
                *v += s4[g] + beta[g];
            }
            sum13
        };
        let completion = t2
            .iter()
            .zip(&wv)
            .filter(|&(&t, &w)| !t.is_zero() || !w.is_zero())
            .count();
        let cost = weight(beta) + weight(a) + weight(cv) + completion;
        (cost, wv)
    };

    let mut best: Option<(usize, Vec<Gf>, Vec<Gf>, Vec<Gf>)> = None;
    for beta in &betas {
        let qb = hp.q.mul_vec_sparse(beta);
        let a = add_vecs(&s1, &qb);
        let cv = add_vecs(&s3, &qb);
        let t2 = add_vecs(&s2, beta);
        let sa = support(&a);
        let sc = support(&cv);
        let pick = |src: &[Gf], sup: &[usize], mask: u32| {
            let mut v = vec![Gf::ZERO; r];
            for (t, &idx) in sup.iter().enumerate() {
                if mask >> t & 1 == 1 {
                    v[idx] = src[idx];
                }
            }
            v
        };
        let pairs: Vec<(Vec<Gf>, Vec<Gf>)> = if sa.len() + sc.len() <= SPLIT_ENUM_CAP {
            let mut out = Vec::with_capacity(1 << (sa.len() + sc.len()));
            for ma in 0..1u32 << sa.len() {
                for mc in 0..1u32 << sc.len() {
                    out.push((pick(&a, &sa, ma), pick(&cv, &sc, mc)));
                }
            }
            out
        } else {
            // too wide to enumerate; attribute each residual block wholly
            // to data or wholly to noise
            let zero = vec![Gf::ZERO; r];
            vec![
                (zero.clone(), zero.clone()),
                (a.clone(), zero.clone()),
                (zero, cv.clone()),
                (a.clone(), cv.clone()),
            ]
        };
        for (alpha1, alpha3) in pairs {
            let (cost, _) = score(beta, &alpha1, &alpha3, &a, &cv, &t2);
            if best.as_ref().is_none_or(|&(bc, ..)| cost < bc) {
                best = Some((cost, beta.clone(), alpha1, alpha3));
            }
        }
    }

    let (cost, beta, alpha1, alpha3) = best.expect("the zero beta is always scored");
    let qb = hp.q.mul_vec_sparse(&beta);
    let a = add_vecs(&s1, &qb);
    let cv = add_vecs(&s3, &qb);
    let t2 = add_vecs(&s2, &beta);
    let (_, wv) = score(&beta, &alpha1, &alpha3, &a, &cv, &t2);

    let mut w1 = vec![Gf::ZERO; nb];
    let mut w2 = vec![Gf::ZERO; nb];
    let mut noise = vec![Gf::ZERO; 2 * nb];
    for i in 0..r {
        w1[hp.jc[i]] = alpha1[i];
        w2[hp.jc[i]] = alpha3[i];
        noise[hp.jc[i]] = a[i] + alpha1[i];
        noise[nb + i] = cv[i] + alpha3[i];
    }
    for (fidx, &j) in hp.fc.iter().enumerate() {
        w2[j] = beta[fidx];
        match (!t2[fidx].is_zero(), !wv[fidx].is_zero()) {
            (true, true) => w1[j] = Gf::ONE,
            (true, false) => noise[j] = Gf::ONE,
            (false, true) => noise[2 * nb - kb + fidx] = Gf::ONE,
            (false, false) => {}
        }
    }
    let z: Vec<Gf> = w1.into_iter().chain(w2).collect();
    let data = gather_perm(&z, &hp.col_perm);
    debug_assert_eq!(
        add_vecs(&hp.h_prime.mul_vec_sparse(&data), &noise),
        s,
        "slice solutions are consistent by construction"
    );
    SliceSolution { data, noise, cost }
}

fn run_stage_noisy(
    qc: &NoisyQuantumCode,
    slices: &[Vec<Gf>],
    budget: usize,
    stage: u8,
    log: &mut Vec<StageRecord>,
) -> Result<(Vec<Vec<Gf>>, Vec<Vec<Gf>>), QDecodeError> {
    let mut data = Vec::with_capacity(slices.len());
    let mut noise = Vec::with_capacity(slices.len());
    for (i, s) in slices.iter().enumerate() {
        let sol = solve_noisy_slice(qc, s, budget);
        if sol.cost > budget {
            return Err(QDecodeError::StageFailure { stage, slice: i, which_code: None });
        }
        if sol.cost > 0 {
            log.push(StageRecord { stage, slice: i, cost: sol.cost });
        }
        data.push(sol.data);
        noise.push(sol.noise);
    }
    Ok((data, noise))
}

/// Two-stage decoding over the noisy assembly: chunk slices give the second
/// qubit block, then the reassembled residual is solved on strided slices
/// for the first block and the syndrome noise.
pub fn decode_noisy_version(inst: &QuantumNoisyInstance) -> Result<QuantumDecodeResult, QDecodeError> {
    let qc = inst.code;
    let n = qc.n_slices();
    let mut log = Vec::new();
    let cols = slice_columns(&inst.s_obs, n)?;
    let (y_sl, e_sl) = run_stage_noisy(qc, &cols, inst.weight_budget, 1, &mut log)?;
    let y_hat = unslice_columns(&y_sl);
    let e_mid = unslice_columns(&e_sl);
    let rows = slice_rows(&e_mid, n).expect("reassembled length is n*n");
    let (x_sl, eh_sl) = run_stage_noisy(qc, &rows, inst.weight_budget, 2, &mut log)?;
    let x_hat = unslice_rows(&x_sl);
    let e_syn_hat = unslice_rows(&eh_sl);
    let total = weight(&x_hat) + weight(&y_hat) + weight(&e_syn_hat);
    let res = QuantumDecodeResult {
        x_hat,
        y_hat,
        e_syn_hat,
        stage_log: log,
        success_flag: total <= inst.weight_budget,
    };
    debug_assert!(consistent(&qc.hp.h_prime, &inst.s_obs, &res));
    Ok(res)
}

// ---------------------------------------------------------------------
// the non-noisy assembly code and decoder

/// HGP(H', H') over the non-noisy assembly of a polynomial base code.
pub struct NonNoisyQuantumCode {
    pub base: LinearCode,
    pub hp: NonNoisyHprime,
    pub code: HgpCode,
}

pub fn nonnoisy_quantum_code(base: LinearCode) -> Result<NonNoisyQuantumCode, HgpError> {
    let hp = build_hprime_nonnoisy(&base)?;
    let code = build_hgp(&hp.h_prime, &hp.h_prime);
    Ok(NonNoisyQuantumCode { base, hp, code })
}

impl NonNoisyQuantumCode {
    pub fn n_slices(&self) -> usize {
        self.hp.h_prime.rows()
    }
}

pub struct QuantumNonNoisyInstance<'a> {
    pub code: &'a NonNoisyQuantumCode,
    pub s_obs: Vec<Gf>,
    pub weight_budget: usize,
}

/// One slice of the non-noisy assembly: the top rows form an instance of
/// the base code (noise on top coordinates, data on the bottom), the
/// bottom rows one of its dual, coupled through the recorded systematic
/// permutation and row transforms.
fn solve_nonnoisy_slice(
    qc: &NonNoisyQuantumCode,
    dec_c: &(impl SliceDecoder + ?Sized),
    dec_dual: &(impl SliceDecoder + ?Sized),
    s: &[Gf],
    stage: u8,
    slice: usize,
) -> Result<SliceSolution, QDecodeError> {
    let n = qc.base.n();
    let k = qc.base.k();
    let hp = &qc.hp;
    let sigma_c = hp.t_inv.mul_vec(&s[..n - k]);
    let e_c = dec_c.decode_syndrome(&sigma_c).map_err(|_| QDecodeError::StageFailure {
        stage,
        slice,
        which_code: Some(WhichCode::Base),
    })?;
    let comp = gather_perm(&e_c, &hp.col_perm);
    let sigma_p = hp.t2_inv.mul_vec(&s[n - k..]);
    let e_p = dec_dual.decode_syndrome(&sigma_p).map_err(|_| QDecodeError::StageFailure {
        stage,
        slice,
        which_code: Some(WhichCode::Dual),
    })?;
    let comp2 = gather_perm(&e_p, &hp.col_perm);
    let mut data = comp2[..n - k].to_vec();
    data.extend_from_slice(&comp[n - k..]);
    let mut noise = comp[..n - k].to_vec();
    noise.extend_from_slice(&comp2[n - k..]);
    let cost = weight(&e_c) + weight(&e_p);
    debug_assert_eq!(
        add_vecs(&hp.h_prime.mul_vec_sparse(&data), &noise),
        s,
        "slice solutions are consistent by construction"
    );
    Ok(SliceSolution { data, noise, cost })
}

fn run_stage_nonnoisy(
    qc: &NonNoisyQuantumCode,
    dec_c: &(impl SliceDecoder + ?Sized),
    dec_dual: &(impl SliceDecoder + ?Sized),
    slices: &[Vec<Gf>],
    stage: u8,
    log: &mut Vec<StageRecord>,
) -> Result<(Vec<Vec<Gf>>, Vec<Vec<Gf>>), QDecodeError> {
    let mut data = Vec::with_capacity(slices.len());
    let mut noise = Vec::with_capacity(slices.len());
    for (i, s) in slices.iter().enumerate() {
        let sol = solve_nonnoisy_slice(qc, dec_c, dec_dual, s, stage, i)?;
        if sol.cost > 0 {
            log.push(StageRecord { stage, slice: i, cost: sol.cost });
        }
        data.push(sol.data);
        noise.push(sol.noise);
    }
    Ok((data, noise))
}

/// Two-stage decoding over the non-noisy assembly, with per-slice work
/// delegated to syndrome decoders for the base code and for its dual
/// (polynomial decoders for the evaluation-domain families, exhaustive
/// search otherwise).
pub fn decode_nonnoisy_version(
    inst: &QuantumNonNoisyInstance,
    dec_c: &(impl SliceDecoder + ?Sized),
    dec_dual: &(impl SliceDecoder + ?Sized),
) -> Result<QuantumDecodeResult, QDecodeError> {
    let qc = inst.code;
    let n = qc.n_slices();
    let mut log = Vec::new();
    let cols = slice_columns(&inst.s_obs, n)?;
    let (y_sl, e_sl) = run_stage_nonnoisy(qc, dec_c, dec_dual, &cols, 1, &mut log)?;
    let y_hat = unslice_columns(&y_sl);
    let e_mid = unslice_columns(&e_sl);
    let rows = slice_rows(&e_mid, n).expect("reassembled length is n*n");
    let (x_sl, eh_sl) = run_stage_nonnoisy(qc, dec_c, dec_dual, &rows, 2, &mut log)?;
    let x_hat = unslice_rows(&x_sl);
    let e_syn_hat = unslice_rows(&eh_sl);
    let total = weight(&x_hat) + weight(&y_hat) + weight(&e_syn_hat);
    let res = QuantumDecodeResult {
        x_hat,
        y_hat,
        e_syn_hat,
        stage_log: log,
        success_flag: total <= inst.weight_budget,
    };
    debug_assert!(consistent(&qc.hp.h_prime, &inst.s_obs, &res));
    Ok(res)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{rs_code, single_parity_code, BipartiteGraph};
    use crate::gf::Field;
    use crate::hgp::{logical_equiv, Side};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ag_code() -> NoisyQuantumCode {
        let f = Field::canonical(1);
        let inner = single_parity_code(f, 4);
        let ex = ExpanderCode::new(BipartiteGraph::affine_plane(), &inner).unwrap();
        noisy_quantum_code(ex).unwrap()
    }

    fn rs_qcode() -> NonNoisyQuantumCode {
        let f = Field::canonical(3);
        let gamma = f.root_of_order(7).unwrap();
        nonnoisy_quantum_code(rs_code(f, gamma, 7, 3).unwrap()).unwrap()
    }

    fn decoders(qc: &NonNoisyQuantumCode) -> (PolyDecoder, PolyDecoder) {
        (
            PolyDecoder::new(&qc.base).unwrap(),
            PolyDecoder::new(&qc.base.dual()).unwrap(),
        )
    }

    fn bit(len: usize, pos: usize) -> Vec<Gf> {
        let mut v = vec![Gf::ZERO; len];
        v[pos] = Gf::ONE;
        v
    }

    #[test]
    fn slicing_round_trips_and_validates_length() {
        let f = Field::canonical(2);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let n = 5;
        let v: Vec<Gf> = (0..n * n).map(|_| f.sample(&mut rng)).collect();
        assert_eq!(unslice_columns(&slice_columns(&v, n).unwrap()), v);
        assert_eq!(unslice_rows(&slice_rows(&v, n).unwrap()), v);
        assert_eq!(
            slice_columns(&v[1..], n).unwrap_err(),
            QDecodeError::BadLength { got: 24, expected: 25 }
        );
        // double transpose is the identity
        let t = transpose_layout(&v, n).unwrap();
        assert_eq!(transpose_layout(&t, n).unwrap(), v);

        // the slicing contracts against a dense Kronecker product
        let h = Mat::from_fn(f.clone(), n, n, |_, _| f.sample(&mut rng));
        let big_left = h.kron(&Mat::identity(f.clone(), n));
        let big_right = Mat::identity(f.clone(), n).kron(&h);
        assert_eq!(apply_h_kron_i(&h, &v, n), big_left.mul_vec(&v));
        assert_eq!(apply_i_kron_h(&h, &v, n), big_right.mul_vec(&v));
        for (i, sl) in slice_columns(&big_right.mul_vec(&v), n).unwrap().iter().enumerate() {
            assert_eq!(*sl, h.mul_vec(&v[i * n..(i + 1) * n]));
        }
        let rows = slice_rows(&big_left.mul_vec(&v), n).unwrap();
        let vrows = slice_rows(&v, n).unwrap();
        for (sl, vr) in rows.iter().zip(&vrows) {
            assert_eq!(*sl, h.mul_vec(vr));
        }
    }

    #[test]
    fn zero_syndrome_decodes_to_zero_on_both_assemblies() {
        let qc = ag_code();
        let n = qc.n_slices();
        let inst = QuantumNoisyInstance {
            code: &qc,
            s_obs: vec![Gf::ZERO; n * n],
            weight_budget: 4,
        };
        let res = decode_noisy_version(&inst).unwrap();
        assert_eq!(weight(&res.x_hat) + weight(&res.y_hat) + weight(&res.e_syn_hat), 0);
        assert!(res.success_flag);
        assert!(res.stage_log.is_empty());

        let qc = rs_qcode();
        let (dc, dd) = decoders(&qc);
        let n = qc.n_slices();
        let inst = QuantumNonNoisyInstance {
            code: &qc,
            s_obs: vec![Gf::ZERO; n * n],
            weight_budget: 4,
        };
        let res = decode_nonnoisy_version(&inst, &dc, &dd).unwrap();
        assert_eq!(weight(&res.x_hat) + weight(&res.y_hat) + weight(&res.e_syn_hat), 0);
    }

    #[test]
    fn noisy_single_errors_of_every_kind_decode_exactly() {
        let qc = ag_code();
        let n = qc.n_slices();
        let nn = n * n;
        let zero = vec![Gf::ZERO; nn];
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut cases: Vec<(Vec<Gf>, Vec<Gf>, Vec<Gf>)> = Vec::new();
        for _ in 0..40 {
            let p = rng.random_range(0..nn);
            match rng.random_range(0..3) {
                0 => cases.push((bit(nn, p), zero.clone(), zero.clone())),
                1 => cases.push((zero.clone(), bit(nn, p), zero.clone())),
                _ => cases.push((zero.clone(), zero.clone(), bit(nn, p))),
            }
        }
        for (x, y, e) in cases {
            assert!(noisy_in_promise(&qc.hp.h_prime, &x, &y, &e, 1), "single errors are in promise");
            let s = observed_syndrome(&qc.hp.h_prime, &x, &y, &e);
            let inst = QuantumNoisyInstance { code: &qc, s_obs: s, weight_budget: 1 };
            let res = decode_noisy_version(&inst).unwrap();
            assert_eq!(res.x_hat, x);
            assert_eq!(res.y_hat, y);
            assert_eq!(res.e_syn_hat, e);
            assert!(res.success_flag);
        }
    }

    #[test]
    fn noisy_in_promise_mixtures_decode_exactly() {
        let qc = ag_code();
        let n = qc.n_slices();
        let nn = n * n;
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let mut accepted = 0;
        while accepted < 40 {
            let mut x = vec![Gf::ZERO; nn];
            let mut y = vec![Gf::ZERO; nn];
            let mut e = vec![Gf::ZERO; nn];
            for _ in 0..rng.random_range(0..3) {
                x[rng.random_range(0..nn)] = Gf::ONE;
            }
            for _ in 0..rng.random_range(0..3) {
                y[rng.random_range(0..nn)] = Gf::ONE;
            }
            for _ in 0..rng.random_range(0..3) {
                e[rng.random_range(0..nn)] = Gf::ONE;
            }
            if !noisy_in_promise(&qc.hp.h_prime, &x, &y, &e, 1) {
                continue;
            }
            accepted += 1;
            let w = weight(&x) + weight(&y) + weight(&e);
            let s = observed_syndrome(&qc.hp.h_prime, &x, &y, &e);
            let inst = QuantumNoisyInstance { code: &qc, s_obs: s, weight_budget: w.max(1) };
            let res = decode_noisy_version(&inst).unwrap();
            assert_eq!((res.x_hat, res.y_hat, res.e_syn_hat), (x, y, e));
        }
    }

    #[test]
    fn noisy_results_are_always_consistent() {
        let qc = ag_code();
        let n = qc.n_slices();
        let nn = n * n;
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        for _ in 0..30 {
            // heavy, mostly out-of-promise errors
            let x: Vec<Gf> = (0..nn)
                .map(|_| if rng.random_bool(0.02) { Gf::ONE } else { Gf::ZERO })
                .collect();
            let y: Vec<Gf> = (0..nn)
                .map(|_| if rng.random_bool(0.02) { Gf::ONE } else { Gf::ZERO })
                .collect();
            let e: Vec<Gf> = (0..nn)
                .map(|_| if rng.random_bool(0.02) { Gf::ONE } else { Gf::ZERO })
                .collect();
            let s = observed_syndrome(&qc.hp.h_prime, &x, &y, &e);
            let inst = QuantumNoisyInstance { code: &qc, s_obs: s.clone(), weight_budget: 200 };
            match decode_noisy_version(&inst) {
                Ok(res) => assert!(consistent(&qc.hp.h_prime, &s, &res)),
                Err(QDecodeError::StageFailure { .. }) => {}
                Err(e) => panic!("unexpected error {e:?}"),
            }
        }
    }

    #[test]
    fn noisy_slices_solve_independently_of_order() {
        let qc = ag_code();
        let n = qc.n_slices();
        let nn = n * n;
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let y: Vec<Gf> = (0..nn)
            .map(|_| if rng.random_bool(0.01) { Gf::ONE } else { Gf::ZERO })
            .collect();
        let e = bit(nn, 77);
        let s = observed_syndrome(&qc.hp.h_prime, &vec![Gf::ZERO; nn], &y, &e);
        let inst = QuantumNoisyInstance { code: &qc, s_obs: s.clone(), weight_budget: 30 };
        let res = decode_noisy_version(&inst).unwrap();
        // each chunk answer is a pure function of its slice, so visiting
        // the slices in any order reproduces the stage-1 output
        let slices = slice_columns(&s, n).unwrap();
        for i in (0..n).rev() {
            let sol = solve_noisy_slice(&qc, &slices[i], 30);
            assert_eq!(sol.data, res.y_hat[i * n..(i + 1) * n]);
        }
    }

    #[test]
    fn noisy_stage_two_recovers_a_synthetic_residual() {
        let qc = ag_code();
        let n = qc.n_slices();
        let nn = n * n;
        let x = bit(nn, 5 * n + 3);
        let e = bit(nn, 2 * n + 9);
        let e_mid = add_vecs(&apply_h_kron_i(&qc.hp.h_prime, &x, n), &e);
        let rows = slice_rows(&e_mid, n).unwrap();
        let mut log = Vec::new();
        let (x_sl, eh_sl) = run_stage_noisy(&qc, &rows, 2, 2, &mut log).unwrap();
        assert_eq!(unslice_rows(&x_sl), x);
        assert_eq!(unslice_rows(&eh_sl), e);
    }

    #[test]
    fn noisy_mirror_syndrome_decodes_after_transposition() {
        let qc = ag_code();
        let n = qc.n_slices();
        let nn = n * n;
        let x = bit(nn, 3 * n + 7);
        let y = bit(nn, 9 * n + 1);
        // the mirrored syndrome type: factors swapped relative to the
        // primary one
        let mut s = apply_i_kron_h(&qc.hp.h_prime, &x, n);
        let sy = apply_h_kron_i(&qc.hp.h_prime, &y, n);
        for (a, &b) in s.iter_mut().zip(&sy) {
            *a += b;
        }
        let st = transpose_layout(&s, n).unwrap();
        let inst = QuantumNoisyInstance { code: &qc, s_obs: st, weight_budget: 2 };
        let res = decode_noisy_version(&inst).unwrap();
        assert_eq!(transpose_layout(&res.x_hat, n).unwrap(), x);
        assert_eq!(transpose_layout(&res.y_hat, n).unwrap(), y);
        assert_eq!(weight(&res.e_syn_hat), 0);
    }

    #[test]
    fn noisy_in_promise_failures_never_pass_silently() {
        // within the promise the decoder is exact; outside it must either
        // return something consistent or raise a stage failure
        let qc = ag_code();
        let n = qc.n_slices();
        let nn = n * n;
        let mut rng = ChaCha8Rng::seed_from_u64(53);
        let e1 = qc.code.n_qubits();
        for _ in 0..60 {
            let wx = rng.random_range(0..3);
            let wy = rng.random_range(0..3);
            let we = rng.random_range(0..3);
            let mut x = vec![Gf::ZERO; nn];
            let mut y = vec![Gf::ZERO; nn];
            let mut e = vec![Gf::ZERO; nn];
            for _ in 0..wx {
                x[rng.random_range(0..nn)] = Gf::ONE;
            }
            for _ in 0..wy {
                y[rng.random_range(0..nn)] = Gf::ONE;
            }
            for _ in 0..we {
                e[rng.random_range(0..nn)] = Gf::ONE;
            }
            let in_promise = noisy_in_promise(&qc.hp.h_prime, &x, &y, &e, 1);
            let s = observed_syndrome(&qc.hp.h_prime, &x, &y, &e);
            let budget = (weight(&x) + weight(&y) + weight(&e)).max(1);
            let inst = QuantumNoisyInstance { code: &qc, s_obs: s.clone(), weight_budget: budget };
            match decode_noisy_version(&inst) {
                Ok(res) => {
                    assert!(consistent(&qc.hp.h_prime, &s, &res));
                    let truth: Vec<Gf> = x.iter().chain(&y).copied().collect();
                    let guess: Vec<Gf> = res.x_hat.iter().chain(&res.y_hat).copied().collect();
                    assert_eq!(truth.len(), e1);
                    if in_promise {
                        assert!(
                            logical_equiv(&qc.code, &guess, &truth, Side::One),
                            "in-promise trials decode to an equivalent error"
                        );
                    }
                }
                Err(QDecodeError::StageFailure { .. }) => {
                    assert!(!in_promise, "in-promise trials never fail");
                }
                Err(e) => panic!("unexpected error {e:?}"),
            }
        }
    }

    #[test]
    fn nonnoisy_single_qubit_errors_sweep_exactly() {
        let qc = rs_qcode();
        let (dc, dd) = decoders(&qc);
        let n = qc.n_slices();
        let nn = n * n;
        let zero = vec![Gf::ZERO; nn];
        let f = qc.base.field().clone();
        // all 2 * 49 qubit positions, one nonzero field value each
        for pos in 0..2 * nn {
            let (mut x, mut y) = (zero.clone(), zero.clone());
            let val = Gf(1 + (pos % (f.order() - 1)) as u16);
            if pos < nn {
                x[pos] = val;
            } else {
                y[pos - nn] = val;
            }
            let s = observed_syndrome(&qc.hp.h_prime, &x, &y, &zero);
            let inst = QuantumNonNoisyInstance { code: &qc, s_obs: s, weight_budget: 1 };
            let res = decode_nonnoisy_version(&inst, &dc, &dd)
                .unwrap_or_else(|e| panic!("position {pos}: {e:?}"));
            assert_eq!(res.x_hat, x, "position {pos}");
            assert_eq!(res.y_hat, y, "position {pos}");
            assert_eq!(weight(&res.e_syn_hat), 0, "position {pos}");
        }
    }

    #[test]
    fn nonnoisy_mixed_error_with_syndrome_noise_succeeds() {
        let qc = rs_qcode();
        let (dc, dd) = decoders(&qc);
        let n = qc.n_slices();
        let nn = n * n;
        // one qubit error in each block plus one syndrome error, spread so
        // that every slice keeps its load within the decoder radii: the x
        // bit leaks dual-side weight into the chunks of its H' column, so
        // the y bit goes to an untouched chunk on the base side
        let mut x = vec![Gf::ZERO; nn];
        let mut y = vec![Gf::ZERO; nn];
        let mut e = vec![Gf::ZERO; nn];
        x[2 * n + 6] = Gf(3);
        y[5] = Gf(5);
        e[4 * n] = Gf(7);
        assert!(nonnoisy_in_promise(
            &qc.hp,
            1,
            1,
            &x,
            &y,
            &e,
            dc.promise_radius(),
            dd.promise_radius()
        ));
        let s = observed_syndrome(&qc.hp.h_prime, &x, &y, &e);
        let inst = QuantumNonNoisyInstance { code: &qc, s_obs: s, weight_budget: 3 };
        let res = decode_nonnoisy_version(&inst, &dc, &dd).unwrap();
        let truth: Vec<Gf> = x.iter().chain(&y).copied().collect();
        let guess: Vec<Gf> = res.x_hat.iter().chain(&res.y_hat).copied().collect();
        assert!(logical_equiv(&qc.code, &guess, &truth, Side::One));
        assert!(res.success_flag);
    }

    #[test]
    fn nonnoisy_sampled_weight_two_errors_all_decode() {
        let qc = rs_qcode();
        let (dc, dd) = decoders(&qc);
        let n = qc.n_slices();
        let nn = n * n;
        let f = qc.base.field().clone();
        let zero = vec![Gf::ZERO; nn];
        let mut rng = ChaCha8Rng::seed_from_u64(67);
        let mut accepted = 0;
        while accepted < 200 {
            let mut x = vec![Gf::ZERO; nn];
            let mut y = vec![Gf::ZERO; nn];
            for _ in 0..2 {
                let v = Gf(rng.random_range(1..f.order()) as u16);
                if rng.random_bool(0.5) {
                    x[rng.random_range(0..nn)] = v;
                } else {
                    y[rng.random_range(0..nn)] = v;
                }
            }
            if !nonnoisy_in_promise(
                &qc.hp,
                1,
                1,
                &x,
                &y,
                &zero,
                dc.promise_radius(),
                dd.promise_radius(),
            ) {
                continue;
            }
            accepted += 1;
            let s = observed_syndrome(&qc.hp.h_prime, &x, &y, &zero);
            let inst = QuantumNonNoisyInstance { code: &qc, s_obs: s, weight_budget: 2 };
            let res = decode_nonnoisy_version(&inst, &dc, &dd).unwrap();
            assert_eq!(res.x_hat, x);
            assert_eq!(res.y_hat, y);
            assert_eq!(weight(&res.e_syn_hat), 0);
        }
    }

    #[test]
    fn nonnoisy_stage_two_recovers_a_synthetic_residual() {
        let qc = rs_qcode();
        let (dc, dd) = decoders(&qc);
        let n = qc.n_slices();
        let nn = n * n;
        let mut x = vec![Gf::ZERO; nn];
        let mut e = vec![Gf::ZERO; nn];
        x[3 * n + 2] = Gf(6);
        e[n + 5] = Gf(2);
        let e_mid = add_vecs(&apply_h_kron_i(&qc.hp.h_prime, &x, n), &e);
        let rows = slice_rows(&e_mid, n).unwrap();
        let mut log = Vec::new();
        let (x_sl, eh_sl) = run_stage_nonnoisy(&qc, &dc, &dd, &rows, 2, &mut log).unwrap();
        assert_eq!(unslice_rows(&x_sl), x);
        assert_eq!(unslice_rows(&eh_sl), e);
        assert_eq!(log.len(), 2);
    }

    #[test]
    fn nonnoisy_garbage_syndrome_raises_a_stage_failure() {
        let qc = rs_qcode();
        let (dc, dd) = decoders(&qc);
        let n = qc.n_slices();
        let f = qc.base.field().clone();
        let mut rng = ChaCha8Rng::seed_from_u64(71);
        let s: Vec<Gf> = (0..n * n).map(|_| f.sample(&mut rng)).collect();
        let inst = QuantumNonNoisyInstance { code: &qc, s_obs: s, weight_budget: 10 };
        match decode_nonnoisy_version(&inst, &dc, &dd) {
            Err(QDecodeError::StageFailure { stage: 1, which_code: Some(_), .. }) => {}
            other => panic!("expected a stage-1 failure, got {other:?}"),
        }
    }

    #[test]
    fn nonnoisy_results_are_always_consistent() {
        let qc = rs_qcode();
        let (dc, dd) = decoders(&qc);
        let n = qc.n_slices();
        let nn = n * n;
        let f = qc.base.field().clone();
        let mut rng = ChaCha8Rng::seed_from_u64(73);
        let mut returned = 0;
        for _ in 0..60 {
            let pick = |rng: &mut ChaCha8Rng| -> Vec<Gf> {
                (0..nn)
                    .map(|_| {
                        if rng.random_bool(0.03) {
                            Gf(rng.random_range(1..f.order()) as u16)
                        } else {
                            Gf::ZERO
                        }
                    })
                    .collect()
            };
            let (x, y, e) = (pick(&mut rng), pick(&mut rng), pick(&mut rng));
            let s = observed_syndrome(&qc.hp.h_prime, &x, &y, &e);
            let inst = QuantumNonNoisyInstance { code: &qc, s_obs: s.clone(), weight_budget: 50 };
            if let Ok(res) = decode_nonnoisy_version(&inst, &dc, &dd) {
                assert!(consistent(&qc.hp.h_prime, &s, &res));
                returned += 1;
            }
        }
        assert!(returned > 0, "some heavy instances still decode");
    }
}
