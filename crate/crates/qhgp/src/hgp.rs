//! Hypergraph-product CSS codes and the two square "H prime" assemblies
//! that feed them.
//!
//! [`build_hgp`] is the plain product construction: from classical parity
//! checks H1 (m1 x n1) and H2 (m2 x n2) it forms
//!
//! ```text
//!   H1p = [ H1 (x) I   |  I (x) H2^T ]
//!   H2p = [ I (x) H2   |  H1^T (x) I ]
//! ```
//!
//! acting on n1*n2 + m1*m2 qubits (the "vv" block of vertex-vertex
//! coordinates first, then the "cc" check-check block). H1p H2p^T = 0 holds
//! identically in characteristic 2 and is asserted at construction.
//!
//! The two assemblies turn one classical code C into a symmetric square
//! matrix suitable for HGP(H', H'):
//!
//! * [`build_hprime_noisy`]: H' = [[I, P], [P^T, I]] from the systematic
//!   form of the parity check of the doubled code {(c, c)}. H' is singular
//!   by design; its kernel is exactly the permuted doubled code.
//! * [`build_hprime_nonnoisy`]: H' = [[0, P], [P^T, 0]] from the systematic
//!   form of C's own parity check; rejected when k = n/2, where the
//!   distance guarantee collapses.
//!
//! Both return the conversion data (column permutation and row transforms)
//! that the quantum decoder needs to translate per-slice instances back
//! into instances for C and its dual.

use std::collections::HashMap;
use std::sync::OnceLock;

use crate::codes::{brute_force_distance, CodeError, LinearCode, INF_DISTANCE};
use crate::gf::{FieldRef, Gf};
use crate::matrix::{gather_perm, Mat, MatError, RowSpace};
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum HgpError {
    #[error(transparent)]
    Matrix(#[from] MatError),
    #[error("rate-1/2 input (k = n/2 = {k}) has no distance guarantee here")]
    HalfRateRejected { k: usize },
}

/// Which quantum parity-check matrix detects the error being judged.
/// `One` means syndromes are taken against H1p and corrections are
/// equivalent modulo the row space of H2p; `Two` is the mirror image.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    One,
    Two,
}

/// A hypergraph-product CSS code. Qubit coordinates are the vv block
/// (n1*n2 entries, index j1*n2 + j2) followed by the cc block (m1*m2).
#[derive(Debug)]
pub struct HgpCode {
    h1: Mat,
    h2: Mat,
    h1p: Mat,
    h2p: Mat,
    row_space_1: OnceLock<RowSpace>,
    row_space_2: OnceLock<RowSpace>,
}

impl HgpCode {
    pub fn h1(&self) -> &Mat {
        &self.h1
    }

    pub fn h2(&self) -> &Mat {
        &self.h2
    }

    pub fn h1p(&self) -> &Mat {
        &self.h1p
    }

    pub fn h2p(&self) -> &Mat {
        &self.h2p
    }

    pub fn field(&self) -> &FieldRef {
        self.h1.field()
    }

    pub fn n_qubits(&self) -> usize {
        self.h1p.cols()
    }

    /// Length of the vertex-vertex block (= n1 * n2); it occupies qubit
    /// coordinates [0, vv_len).
    pub fn vv_len(&self) -> usize {
        self.h1.cols() * self.h2.cols()
    }

    /// Length of the check-check block, occupying [vv_len, n_qubits).
    pub fn cc_len(&self) -> usize {
        self.h1.rows() * self.h2.rows()
    }

    pub fn parity(&self, side: Side) -> &Mat {
        match side {
            Side::One => &self.h1p,
            Side::Two => &self.h2p,
        }
    }

    fn stabilizers(&self, side: Side) -> &RowSpace {
        match side {
            Side::One => self.row_space_1.get_or_init(|| RowSpace::new(&self.h1p)),
            Side::Two => self.row_space_2.get_or_init(|| RowSpace::new(&self.h2p)),
        }
    }

    pub fn syndrome(&self, side: Side, e: &[Gf]) -> Vec<Gf> {
        self.parity(side).mul_vec_sparse(e)
    }
}

/// Exact check that a * b^T = 0, accumulating only over the nonzero
/// entries. The product matrices here are Kronecker products with identity
/// blocks, so they are very sparse and the dense product would be far too
/// slow at the sizes the harness builds.
fn product_with_transpose_is_zero(a: &Mat, b: &Mat) -> bool {
    assert_eq!(a.cols(), b.cols());
    let f = a.field();
    let mut col_a: Vec<Vec<(usize, Gf)>> = vec![Vec::new(); a.cols()];
    for i in 0..a.rows() {
        for (k, &v) in a.row(i).iter().enumerate() {
            if !v.is_zero() {
                col_a[k].push((i, v));
            }
        }
    }
    let mut col_b: Vec<Vec<(usize, Gf)>> = vec![Vec::new(); b.cols()];
    for j in 0..b.rows() {
        for (k, &v) in b.row(j).iter().enumerate() {
            if !v.is_zero() {
                col_b[k].push((j, v));
            }
        }
    }
    let mut acc: HashMap<(usize, usize), Gf> = HashMap::new();
    for k in 0..a.cols() {
        for &(i, av) in &col_a[k] {
            for &(j, bv) in &col_b[k] {
                *acc.entry((i, j)).or_insert(Gf::ZERO) += f.mul(av, bv);
            }
        }
    }
    acc.into_values().all(|v| v.is_zero())
}

/// The hypergraph product of two parity-check matrices. Total: any two
/// matrices over the same field are accepted, including rank-deficient
/// ones (the noisy H' is square and singular on purpose).
pub fn build_hgp(h1: &Mat, h2: &Mat) -> HgpCode {
    assert_eq!(h1.field(), h2.field(), "constituents must share a field");
    let f = h1.field().clone();
    let (m1, n1) = (h1.rows(), h1.cols());
    let (m2, n2) = (h2.rows(), h2.cols());
    let h1p = h1
        .kron(&Mat::identity(f.clone(), n2))
        .hstack(&Mat::identity(f.clone(), m1).kron(&h2.transpose()));
    let h2p = Mat::identity(f.clone(), n1)
        .kron(h2)
        .hstack(&h1.transpose().kron(&Mat::identity(f.clone(), m2)));
    debug_assert_eq!(h1p.cols(), n1 * n2 + m1 * m2);
    debug_assert_eq!(h2p.cols(), n1 * n2 + m1 * m2);
    assert!(
        product_with_transpose_is_zero(&h1p, &h2p),
        "H1p H2p^T must vanish identically"
    );
    HgpCode {
        h1: h1.clone(),
        h2: h2.clone(),
        h1p,
        h2p,
        row_space_1: OnceLock::new(),
        row_space_2: OnceLock::new(),
    }
}

/// Quantum code parameters. Distances use the same infinity sentinel as the
/// classical module for trivial (k = 0) constituents and are `None` when
/// the brute-force budget ruled them out.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HgpParams {
    pub n: usize,
    pub k: usize,
    pub d: Option<usize>,
    pub d_transpose_pair: (Option<usize>, Option<usize>),
}

fn row_basis(m: &Mat) -> Mat {
    let rr = m.rref();
    let rows: Vec<Vec<Gf>> = (0..rr.pivots.len()).map(|i| rr.r.row_vec(i)).collect();
    Mat::from_rows(m.field().clone(), rows)
}

fn constituent_distance(h: &Mat, budget: u128) -> Option<usize> {
    if h.cols() == 0 {
        return Some(INF_DISTANCE);
    }
    let basis = row_basis(h);
    let code = LinearCode::from_parity(basis, "hgp constituent")
        .expect("row basis has full row rank");
    match brute_force_distance(&code, budget) {
        Ok(d) => Some(d),
        Err(CodeError::TooLarge { .. }) => None,
        Err(e) => unreachable!("distance search only fails on budget: {e}"),
    }
}

/// n and k from the rank formula, and the distance as the minimum of the
/// four constituent distances (d1, d2 and the transpose pair), each found
/// by brute force when the budget allows. A `None` distance means the
/// search was too large, not that the distance is infinite.
pub fn hgp_params(code: &HgpCode, budget: u128) -> HgpParams {
    let (m1, n1) = (code.h1.rows(), code.h1.cols());
    let (m2, n2) = (code.h2.rows(), code.h2.cols());
    let r1 = code.h1.rank();
    let r2 = code.h2.rank();
    let (k1, k1t) = (n1 - r1, m1 - r1);
    let (k2, k2t) = (n2 - r2, m2 - r2);
    let d1 = constituent_distance(&code.h1, budget);
    let d2 = constituent_distance(&code.h2, budget);
    let d1t = constituent_distance(&code.h1.transpose(), budget);
    let d2t = constituent_distance(&code.h2.transpose(), budget);
    let d = [d1, d2, d1t, d2t]
        .into_iter()
        .collect::<Option<Vec<usize>>>()
        .map(|ds| ds.into_iter().min().expect("four entries"));
    HgpParams {
        n: code.n_qubits(),
        k: k1 * k2 + k1t * k2t,
        d,
        d_transpose_pair: (d1t, d2t),
    }
}

/// True iff e1 and e2 are the same correction up to a stabilizer: their
/// difference has zero syndrome on the given side and lies in the row
/// space of the opposite parity-check matrix. This is the success
/// criterion for every quantum decoding trial.
pub fn logical_equiv(code: &HgpCode, e1: &[Gf], e2: &[Gf], side: Side) -> bool {
    assert_eq!(e1.len(), code.n_qubits());
    assert_eq!(e2.len(), code.n_qubits());
    let diff: Vec<Gf> = e1.iter().zip(e2).map(|(&a, &b)| a + b).collect();
    if code.syndrome(side, &diff).iter().any(|v| !v.is_zero()) {
        return false;
    }
    let opposite = match side {
        Side::One => Side::Two,
        Side::Two => Side::One,
    };
    code.stabilizers(opposite).contains(&diff)
}

/// Minimum weight of a nontrivial logical operator on one side: a vector
/// with zero syndrome that is not a stabilizer of the opposite side.
/// Returns None when the side carries no logicals.
pub fn min_weight_logical(
    code: &HgpCode,
    side: Side,
    budget: u128,
) -> Result<Option<Vec<Gf>>, CodeError> {
    let f = code.field().clone();
    let q = f.order() as u128;
    let kernel = code.parity(side).kernel_basis();
    let dim = kernel.len();
    let mut total: u128 = 1;
    for _ in 0..dim {
        total = total.saturating_mul(q);
        if total > budget {
            return Err(CodeError::TooLarge { needed: total, budget });
        }
    }
    let opposite = match side {
        Side::One => Side::Two,
        Side::Two => Side::One,
    };
    let stab = code.stabilizers(opposite);
    let n = code.n_qubits();
    // odometer over kernel combinations, last slot fastest, with
    // incremental vector updates
    let mut digits = vec![0usize; dim];
    let mut v = vec![Gf::ZERO; n];
    let mut best: Option<(usize, Vec<Gf>)> = None;
    'outer: loop {
        let mut slot = dim;
        loop {
            if slot == 0 {
                break 'outer;
            }
            slot -= 1;
            let old = Gf(digits[slot] as u16);
            digits[slot] += 1;
            let new = if digits[slot] < f.order() {
                Gf(digits[slot] as u16)
            } else {
                digits[slot] = 0;
                Gf::ZERO
            };
            let delta = old + new;
            for (x, &kv) in v.iter_mut().zip(&kernel[slot]) {
                *x += f.mul(delta, kv);
            }
            if !new.is_zero() {
                break; // advanced without carrying
            }
        }
        let w = crate::matrix::weight(&v);
        if best.as_ref().is_none_or(|&(bw, _)| w < bw) && !stab.contains(&v) {
            best = Some((w, v.clone()));
        }
    }
    Ok(best.map(|(_, v)| v))
}

/// Minimum over both sides of [`min_weight_logical`], with the infinity
/// sentinel when there are no logicals at all (k = 0).
pub fn logical_distance(code: &HgpCode, budget: u128) -> Result<usize, CodeError> {
    let a = min_weight_logical(code, Side::One, budget)?;
    let b = min_weight_logical(code, Side::Two, budget)?;
    Ok([a, b]
        .into_iter()
        .flatten()
        .map(|v| crate::matrix::weight(&v))
        .min()
        .unwrap_or(INF_DISTANCE))
}

/// The noisy-reduction assembly H' = [[I, P], [P^T, I]] built from the
/// systematic form [I | P] of the parity check of the doubled code
/// {(c, c) : c in C}, together with everything the slice decoder needs to
/// convert H'-instances back to instances of C's parity check H:
///
/// * `col_perm`: the systematic column permutation of the doubled parity
///   check (all first-copy columns, then second-copy pivot columns of H,
///   then second-copy free columns);
/// * `jc` / `fc`: pivot and free columns of H itself;
/// * `q`: the (n-k) x k matrix with c_Jc = q c_Fc for codewords of C;
/// * `h_j`: the invertible pivot-column submatrix of H, so that a canonical
///   syndrome for H can be formed from values on pivot coordinates.
#[derive(Debug, Clone)]
pub struct NoisyHprime {
    pub h_prime: Mat,
    pub p: Mat,
    pub col_perm: Vec<usize>,
    pub jc: Vec<usize>,
    pub fc: Vec<usize>,
    pub q: Mat,
    pub h_j: Mat,
}

impl NoisyHprime {
    /// Membership test for the kernel of H': exactly the doubled codewords
    /// carried through the systematic permutation.
    pub fn doubled_codeword(&self, c: &[Gf]) -> Vec<Gf> {
        let mut cc = Vec::with_capacity(2 * c.len());
        cc.extend_from_slice(c);
        cc.extend_from_slice(c);
        gather_perm(&cc, &self.col_perm)
    }
}

pub fn build_hprime_noisy(c: &LinearCode) -> Result<NoisyHprime, HgpError> {
    let f = c.field().clone();
    let doubled = c.doubled();
    let sys = doubled.parity_check().systematic_form()?;
    let rows = sys.p.rows();
    let cols = sys.p.cols();
    let top = Mat::identity(f.clone(), rows).hstack(&sys.p);
    let bottom = sys.p.transpose().hstack(&Mat::identity(f.clone(), cols));
    let h_prime = top.vstack(&bottom);
    debug_assert_eq!(h_prime, h_prime.transpose(), "H' is symmetric by shape");

    let rr = c.parity_check().rref();
    let jc = rr.pivots.clone();
    let fc: Vec<usize> = (0..c.n()).filter(|j| !jc.contains(j)).collect();
    let q = Mat::from_fn(f.clone(), jc.len(), fc.len(), |i, t| rr.r.get(i, fc[t]));
    let h_j = c.parity_check().submatrix_cols(&jc);
    Ok(NoisyHprime {
        h_prime,
        p: sys.p,
        col_perm: sys.col_perm,
        jc,
        fc,
        q,
        h_j,
    })
}

/// The non-noisy assembly H' = [[0, P], [P^T, 0]] from the systematic form
/// [I | P] of C's parity check, with the two row transforms the slice
/// decoder applies: `t_inv` turns the top block of a slice syndrome into a
/// canonical syndrome for H, and `t2_inv` turns the bottom block into a
/// canonical syndrome for the dual code's parity check (C's generator).
#[derive(Debug, Clone)]
pub struct NonNoisyHprime {
    pub h_prime: Mat,
    pub p: Mat,
    pub col_perm: Vec<usize>,
    pub t_inv: Mat,
    pub t2_inv: Mat,
}

pub fn build_hprime_nonnoisy(c: &LinearCode) -> Result<NonNoisyHprime, HgpError> {
    if 2 * c.k() == c.n() {
        return Err(HgpError::HalfRateRejected { k: c.k() });
    }
    let f = c.field().clone();
    let sys = c.parity_check().systematic_form()?;
    let rows = sys.p.rows(); // n - k
    let cols = sys.p.cols(); // k
    let top = Mat::zeros(f.clone(), rows, rows).hstack(&sys.p);
    let bottom = sys.p.transpose().hstack(&Mat::zeros(f.clone(), cols, cols));
    let h_prime = top.vstack(&bottom);

    // t_inv: the systematic form is row_transform * H * perm = [I | P], so
    // canonical H-syndromes are recovered via the inverse row transform.
    let t_inv = sys
        .row_transform
        .solve_columns(&Mat::identity(f.clone(), rows))
        .expect("row transform is invertible");

    // The bottom rows [P^T | I] generate the permuted code C, i.e. they are
    // a parity check for the permuted dual code. Express them over the
    // stored dual parity check (C's generator) to get the syndrome
    // transform: unpermuted [P^T | I] = t2 * generator.
    let g_sys = sys.p.transpose().hstack(&Mat::identity(f.clone(), cols));
    let mut inv_perm = vec![0usize; c.n()];
    for (i, &p) in sys.col_perm.iter().enumerate() {
        inv_perm[p] = i;
    }
    let g_unperm = g_sys.permute_cols(&inv_perm);
    let t2 = c
        .generator()
        .transpose()
        .solve_columns(&g_unperm.transpose())
        .expect("both generate the same code")
        .transpose();
    let t2_inv = t2
        .solve_columns(&Mat::identity(f.clone(), cols))
        .expect("change of basis between two full-rank generators");
    Ok(NonNoisyHprime {
        h_prime,
        p: sys.p,
        col_perm: sys.col_perm,
        t_inv,
        t2_inv,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{rs_code, DISTANCE_BUDGET};
    use crate::gf::Field;
    use crate::matrix::{scatter_perm, weight};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn gf2(rows: Vec<Vec<u8>>) -> Mat {
        let f = Field::canonical(1);
        Mat::from_rows(
            f,
            rows.into_iter()
                .map(|r| r.into_iter().map(|b| Gf(b as u16)).collect())
                .collect(),
        )
    }

    fn repetition3() -> Mat {
        gf2(vec![vec![1, 1, 0], vec![0, 1, 1]])
    }

    fn hamming74() -> Mat {
        // columns are 1..7 in binary
        gf2(vec![
            vec![0, 0, 0, 1, 1, 1, 1],
            vec![0, 1, 1, 0, 0, 1, 1],
            vec![1, 0, 1, 0, 1, 0, 1],
        ])
    }

    #[test]
    fn five_qubit_layout_shapes() {
        let h = gf2(vec![vec![1, 1]]);
        let code = build_hgp(&h, &h);
        assert_eq!(code.n_qubits(), 5);
        assert_eq!((code.h1p().rows(), code.h1p().cols()), (2, 5));
        assert_eq!((code.h2p().rows(), code.h2p().cols()), (2, 5));
        assert_eq!(code.vv_len(), 4);
        assert_eq!(code.cc_len(), 1);
        let params = hgp_params(&code, DISTANCE_BUDGET);
        assert_eq!((params.n, params.k), (5, 1));
        assert_eq!(params.d, Some(2));
        assert_eq!(logical_distance(&code, DISTANCE_BUDGET).unwrap(), 2);
    }

    #[test]
    fn thirteen_qubit_repetition_instance() {
        let h = repetition3();
        let code = build_hgp(&h, &h);
        let params = hgp_params(&code, DISTANCE_BUDGET);
        assert_eq!((params.n, params.k), (13, 1));
        assert_eq!(params.d, Some(3));
        // transpose codes are trivial for full-rank H
        assert_eq!(params.d_transpose_pair, (Some(INF_DISTANCE), Some(INF_DISTANCE)));
        assert_eq!(logical_distance(&code, DISTANCE_BUDGET).unwrap(), 3);
    }

    #[test]
    fn validity_holds_for_random_pairs_over_gf2_and_gf4() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for r in [1u32, 2] {
            let f = Field::canonical(r);
            for _ in 0..25 {
                let (m1, n1) = (rng.random_range(1..4), rng.random_range(1..5));
                let (m2, n2) = (rng.random_range(1..4), rng.random_range(1..5));
                let h1 = Mat::from_fn(f.clone(), m1, n1, |_, _| f.sample(&mut rng));
                let h2 = Mat::from_fn(f.clone(), m2, n2, |_, _| f.sample(&mut rng));
                // construction asserts H1p H2p^T = 0 internally
                let code = build_hgp(&h1, &h2);
                assert_eq!(code.n_qubits(), n1 * n2 + m1 * m2);
            }
        }
    }

    #[test]
    fn square_invertible_constituent_gives_no_logicals() {
        let h = gf2(vec![vec![1, 1], vec![0, 1]]);
        let code = build_hgp(&h, &h);
        let params = hgp_params(&code, DISTANCE_BUDGET);
        assert_eq!(params.k, 0);
        assert_eq!(logical_distance(&code, DISTANCE_BUDGET).unwrap(), INF_DISTANCE);
    }

    #[test]
    fn params_match_logical_brute_force_on_small_instances() {
        // equality of the parameter formula with the actual logical
        // distance, on instances small enough to enumerate
        let instances = vec![
            (gf2(vec![vec![1, 1]]), gf2(vec![vec![1, 1]])),
            (repetition3(), repetition3()),
            (gf2(vec![vec![1, 1, 1]]), gf2(vec![vec![1, 1]])),
        ];
        for (h1, h2) in instances {
            let code = build_hgp(&h1, &h2);
            let params = hgp_params(&code, DISTANCE_BUDGET);
            assert!(params.n <= 40);
            assert_eq!(
                params.d,
                Some(logical_distance(&code, DISTANCE_BUDGET).unwrap()),
                "formula vs brute force"
            );
        }
    }

    #[test]
    fn logical_equiv_accepts_stabilizers_and_rejects_logicals() {
        let h = repetition3();
        let code = build_hgp(&h, &h);
        let n = code.n_qubits();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let e1: Vec<Gf> = (0..n)
            .map(|_| if rng.random_bool(0.3) { Gf::ONE } else { Gf::ZERO })
            .collect();
        // identical corrections
        assert!(logical_equiv(&code, &e1, &e1, Side::One));
        // adding a stabilizer row of the opposite side preserves equivalence
        let stab = code.h2p().row_vec(1);
        let e2: Vec<Gf> = e1.iter().zip(&stab).map(|(&a, &b)| a + b).collect();
        assert!(logical_equiv(&code, &e1, &e2, Side::One));
        // a minimum-weight logical is inequivalent to doing nothing
        let logical = min_weight_logical(&code, Side::One, DISTANCE_BUDGET)
            .unwrap()
            .expect("k = 1");
        assert_eq!(weight(&logical), 3);
        let zero = vec![Gf::ZERO; n];
        assert!(!logical_equiv(&code, &zero, &logical, Side::One));
    }

    #[test]
    fn noisy_hprime_is_symmetric_with_doubled_kernel() {
        let c = LinearCode::from_parity(repetition3(), "rep3").unwrap();
        let hp = build_hprime_noisy(&c).unwrap();
        assert_eq!((hp.h_prime.rows(), hp.h_prime.cols()), (6, 6));
        assert_eq!(hp.h_prime, hp.h_prime.transpose());
        // kernel = permuted {(c, c)}: both codewords of the repetition code
        for cw in [vec![Gf::ZERO; 3], vec![Gf::ONE; 3]] {
            let v = hp.doubled_codeword(&cw);
            assert_eq!(weight(&hp.h_prime.mul_vec(&v)), 0);
        }
        assert_eq!(hp.h_prime.rank(), 5); // 2n - k: singular by design
        // code of H' is {(c,c)} permuted, so distance doubles
        let basis = {
            let rr = hp.h_prime.rref();
            let rows: Vec<Vec<Gf>> = (0..rr.pivots.len()).map(|i| rr.r.row_vec(i)).collect();
            Mat::from_rows(c.field().clone(), rows)
        };
        let code = LinearCode::from_parity(basis, "hprime").unwrap();
        assert_eq!(brute_force_distance(&code, DISTANCE_BUDGET).unwrap(), 6);
    }

    #[test]
    fn noisy_hprime_blocks_interleave_q_and_unit_rows() {
        let f = Field::canonical(3);
        let gamma = f.root_of_order(7).unwrap();
        let c = rs_code(f.clone(), gamma, 7, 3).unwrap();
        let hp = build_hprime_noisy(&c).unwrap();
        let n = 7;
        let k = 3;
        // column permutation: copy 1 in order, then copy-2 pivots, then
        // copy-2 free columns
        let mut expected: Vec<usize> = (0..n).collect();
        expected.extend(hp.jc.iter().map(|&j| n + j));
        expected.extend(hp.fc.iter().map(|&j| n + j));
        assert_eq!(hp.col_perm, expected);
        // P rows: Q rows at pivot positions and unit rows at free positions
        // (first copy), then the Q rows again (second copy)
        assert_eq!((hp.p.rows(), hp.p.cols()), (2 * n - k, k));
        for (i, &j) in hp.jc.iter().enumerate() {
            assert_eq!(hp.p.row(j), hp.q.row(i), "copy-1 pivot column {j}");
            assert_eq!(hp.p.row(n + i), hp.q.row(i), "copy-2 pivot row {i}");
        }
        for (t, &j) in hp.fc.iter().enumerate() {
            let row = hp.p.row(j);
            for (u, &v) in row.iter().enumerate() {
                assert_eq!(v, if u == t { Gf::ONE } else { Gf::ZERO }, "unit row at free {j}");
            }
        }
        // kernel check with random codewords
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..20 {
            let cw = c.random_codeword(&mut rng);
            let v = hp.doubled_codeword(&cw);
            assert_eq!(weight(&hp.h_prime.mul_vec(&v)), 0);
        }
    }

    #[test]
    fn nonnoisy_hprime_examples_meet_distance_bound() {
        // Hamming [7,4]: d = 3, dual d = 4
        let ham = LinearCode::from_parity(hamming74(), "hamming").unwrap();
        let hp = build_hprime_nonnoisy(&ham).unwrap();
        assert_eq!((hp.h_prime.rows(), hp.h_prime.cols()), (7, 7));
        let dist = {
            let rr = hp.h_prime.rref();
            let rows: Vec<Vec<Gf>> = (0..rr.pivots.len()).map(|i| rr.r.row_vec(i)).collect();
            let code =
                LinearCode::from_parity(Mat::from_rows(ham.field().clone(), rows), "hp").unwrap();
            brute_force_distance(&code, DISTANCE_BUDGET).unwrap()
        };
        assert!(dist >= 3, "distance {dist} of the Hamming assembly");

        // RS[7,3]: d = 5, dual d = 4
        let f = Field::canonical(3);
        let gamma = f.root_of_order(7).unwrap();
        let rs = rs_code(f.clone(), gamma, 7, 3).unwrap();
        let hp = build_hprime_nonnoisy(&rs).unwrap();
        assert_eq!((hp.h_prime.rows(), hp.h_prime.cols()), (7, 7));
        let dist = {
            let rr = hp.h_prime.rref();
            let rows: Vec<Vec<Gf>> = (0..rr.pivots.len()).map(|i| rr.r.row_vec(i)).collect();
            let code = LinearCode::from_parity(Mat::from_rows(f.clone(), rows), "hp").unwrap();
            brute_force_distance(&code, DISTANCE_BUDGET).unwrap()
        };
        assert!(dist >= 4, "distance {dist} of the RS assembly");
    }

    #[test]
    fn nonnoisy_hprime_rejects_half_rate() {
        let c = LinearCode::from_parity(gf2(vec![vec![1, 1]]), "rep2").unwrap();
        assert_eq!(build_hprime_nonnoisy(&c).unwrap_err(), HgpError::HalfRateRejected { k: 1 });
    }

    #[test]
    fn nonnoisy_transforms_convert_slice_blocks_to_canonical_syndromes() {
        // the decisive property for the quantum decoder: an H'-slice
        // equation splits into a C-instance (top rows) and a dual-instance
        // (bottom rows) after the recorded transforms
        let f = Field::canonical(3);
        let gamma = f.root_of_order(7).unwrap();
        let c = rs_code(f.clone(), gamma, 7, 3).unwrap();
        let dual = c.dual();
        let hp = build_hprime_nonnoisy(&c).unwrap();
        let n = 7;
        let k = 3;
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..40 {
            let y: Vec<Gf> = (0..n).map(|_| f.sample(&mut rng)).collect();
            let e: Vec<Gf> = (0..n).map(|_| f.sample(&mut rng)).collect();
            let s: Vec<Gf> = hp
                .h_prime
                .mul_vec(&y)
                .iter()
                .zip(&e)
                .map(|(&a, &b)| a + b)
                .collect();
            // top block: sigma_C = t_inv s_top must be the H-syndrome of
            // the permuted composite (e_top, y_bottom)
            let s_top = &s[..n - k];
            let sigma_c = hp.t_inv.mul_vec(s_top);
            let mut composite = Vec::new();
            composite.extend_from_slice(&e[..n - k]);
            composite.extend_from_slice(&y[n - k..]);
            let e_c = scatter_perm(&composite, &hp.col_perm);
            assert_eq!(c.syndrome(&e_c), sigma_c);
            // bottom block: sigma_perp = t2_inv s_bot is the dual-parity
            // syndrome of the permuted composite (y_top, e_bottom)
            let s_bot = &s[n - k..];
            let sigma_perp = hp.t2_inv.mul_vec(s_bot);
            let mut composite = Vec::new();
            composite.extend_from_slice(&y[..n - k]);
            composite.extend_from_slice(&e[n - k..]);
            let e_perp = scatter_perm(&composite, &hp.col_perm);
            assert_eq!(dual.syndrome(&e_perp), sigma_perp);
        }
    }
}
