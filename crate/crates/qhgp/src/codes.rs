//! Classical linear codes: the generic abstraction plus the concrete
//! families the quantum constructions are instantiated with.
//!
//! A [`LinearCode`] is defined by a full-row-rank parity-check matrix; the
//! generator is derived lazily as a kernel basis. On top of that sit duals,
//! the doubling construction (pairs (c, c), self-orthogonal in
//! characteristic 2), Reed-Solomon and folded Reed-Solomon codes built from
//! roots of unity, and Sipser-Spielman expander codes with an exhaustive
//! expansion certifier for small graphs.

use crate::gf::{FieldRef, Gf};
use crate::matrix::{self, Mat};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::OnceLock;
use thiserror::Error;

/// Sentinel distance for dimension-zero codes: the minimum over an empty set.
pub const INF_DISTANCE: usize = usize::MAX;

/// Enumeration budget for exact distance computation, as a codeword count.
pub const DISTANCE_BUDGET: u128 = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodeError {
    /// The supplied parity-check matrix has linearly dependent rows.
    #[error("parity-check matrix is not full row rank")]
    NotFullRank,
    /// gamma does not have the multiplicative order the construction needs.
    #[error("gamma must have multiplicative order {expected}")]
    BadOrder { expected: usize },
    /// Dimension parameter out of range.
    #[error("dimension k={k} out of range for length {n}")]
    BadDimension { k: usize, n: usize },
    /// Inner code length does not match the right degree of the graph.
    #[error("inner code length {inner_n} != right degree {d_right}")]
    DimensionMismatch { inner_n: usize, d_right: usize },
    /// Exact distance enumeration would exceed the budget.
    #[error("distance enumeration needs {needed} codewords (budget {budget})")]
    TooLarge { needed: u128, budget: u128 },
    /// Adjacency list is not biregular.
    #[error("graph is not biregular: {0}")]
    NotBiregular(String),
    /// Configuration-model sampling failed to produce a simple graph.
    #[error("no simple biregular graph found in {0} attempts")]
    GraphSearchExhausted(usize),
    /// The exhaustive expansion check found delta >= 1/4.
    #[error("expansion defect {num}/{den} is not below 1/4")]
    InsufficientExpansion { num: u64, den: u64 },
}

/// Evaluation-domain metadata carried by polynomial (RS / folded RS) codes.
///
/// A codeword is the evaluation of some f supported on the cyclic exponent
/// window [window_start, window_start + window_len) at the points
/// gamma^0..gamma^(sn-1). Plain RS has fold = 1; dual codes keep the same
/// domain with the complementary window (and are decoded unfolded).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CodeMeta {
    pub gamma: Gf,
    /// Evaluation domain size (= code length of the unfolded presentation).
    pub sn: usize,
    pub window_start: usize,
    pub window_len: usize,
    /// Block size for folded decoding; 1 means symbol-by-symbol.
    pub fold: usize,
}

/// A linear [n, k] code over GF(2^r), defined by its parity check.
#[derive(Debug, Clone)]
pub struct LinearCode {
    field: FieldRef,
    n: usize,
    parity: Mat,
    label: String,
    meta: Option<CodeMeta>,
    generator: OnceLock<Mat>,
}

impl PartialEq for LinearCode {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.parity == other.parity
    }
}
impl Eq for LinearCode {}

impl LinearCode {
    /// Wraps an explicit parity-check matrix. The matrix must have full row
    /// rank; use [`Mat::rref`] beforehand if yours may not.
    pub fn from_parity(parity: Mat, label: impl Into<String>) -> Result<LinearCode, CodeError> {
        if parity.rank() < parity.rows() {
            return Err(CodeError::NotFullRank);
        }
        Ok(LinearCode {
            field: parity.field().clone(),
            n: parity.cols(),
            parity,
            label: label.into(),
            meta: None,
            generator: OnceLock::new(),
        })
    }

    pub(crate) fn with_meta(mut self, meta: CodeMeta) -> LinearCode {
        self.meta = Some(meta);
        self
    }

    /// A random [n, k] code: uniform parity checks resampled until full rank.
    pub fn random(field: FieldRef, n: usize, k: usize, seed: u64) -> LinearCode {
        assert!(k <= n);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        loop {
            let h = Mat::from_fn(field.clone(), n - k, n, |_, _| field.sample(&mut rng));
            if h.rank() == n - k {
                return LinearCode::from_parity(h, format!("random[{n},{k}]#{seed}"))
                    .expect("rank just checked");
            }
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.n - self.parity.rows()
    }

    pub fn field(&self) -> &FieldRef {
        &self.field
    }

    pub fn parity_check(&self) -> &Mat {
        &self.parity
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn meta(&self) -> Option<&CodeMeta> {
        self.meta.as_ref()
    }

    /// k x n generator, derived once as the kernel basis of the parity check.
    pub fn generator(&self) -> &Mat {
        self.generator.get_or_init(|| {
            let rows = self.parity.kernel_basis();
            if rows.is_empty() {
                Mat::zeros(self.field.clone(), 0, self.n)
            } else {
                Mat::from_rows(self.field.clone(), rows)
            }
        })
    }

    pub fn syndrome(&self, v: &[Gf]) -> Vec<Gf> {
        self.parity.mul_vec(v)
    }

    pub fn contains(&self, v: &[Gf]) -> bool {
        self.syndrome(v).iter().all(|x| x.is_zero())
    }

    pub fn encode(&self, msg: &[Gf]) -> Vec<Gf> {
        assert_eq!(msg.len(), self.k());
        let g = self.generator();
        let mut out = vec![Gf::ZERO; self.n];
        for (i, &m) in msg.iter().enumerate() {
            if m.is_zero() {
                continue;
            }
            for (o, &gij) in out.iter_mut().zip(g.row(i)) {
                *o += self.field.mul(m, gij);
            }
        }
        out
    }

    pub fn random_codeword<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<Gf> {
        let msg: Vec<Gf> = (0..self.k()).map(|_| self.field.sample(rng)).collect();
        self.encode(&msg)
    }

    /// The dual code: parity check of the result is this code's generator.
    ///
    /// For polynomial codes the exponent window maps to its orthogonal
    /// complement: [w, w+len) over domain sn dualizes to [(1-w) mod sn,
    /// sn-len); the dual is always tagged fold = 1 since folded block
    /// structure does not survive dualization.
    pub fn dual(&self) -> LinearCode {
        let gen = self.generator().clone();
        let mut out = LinearCode {
            field: self.field.clone(),
            n: self.n,
            parity: gen,
            label: format!("dual({})", self.label),
            meta: None,
            generator: OnceLock::new(),
        };
        if let Some(m) = &self.meta {
            out.meta = Some(CodeMeta {
                gamma: m.gamma,
                sn: m.sn,
                window_start: (1 + m.sn - m.window_start % m.sn) % m.sn,
                window_len: m.sn - m.window_len,
                fold: 1,
            });
        }
        out
    }

    /// The doubled code {(c, c) : c in C}, a [2n, k, 2d] code.
    ///
    /// Parity check: [[H, 0], [0, H]] extended by rows [U, U], where U has
    /// one unit row per free (non-pivot) column of H. The extra rows force
    /// the two halves to agree on free coordinates, which pins c1 = c2.
    pub fn doubled(&self) -> LinearCode {
        let f = self.field.clone();
        let m = self.parity.rows();
        let zero = Mat::zeros(f.clone(), m, self.n);
        let top = self.parity.hstack(&zero);
        let mid = zero.hstack(&self.parity);
        let pivots = self.parity.rref().pivots;
        let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
        let mut u_rows = Vec::new();
        for free in (0..self.n).filter(|c| !pivot_set.contains(c)) {
            let mut row = vec![Gf::ZERO; 2 * self.n];
            row[free] = Gf::ONE;
            row[self.n + free] = Gf::ONE;
            u_rows.push(row);
        }
        let parity = if u_rows.is_empty() {
            top.vstack(&mid)
        } else {
            top.vstack(&mid).vstack(&Mat::from_rows(f.clone(), u_rows))
        };
        debug_assert_eq!(parity.rank(), parity.rows());
        LinearCode {
            field: f,
            n: 2 * self.n,
            parity,
            label: format!("doubled({})", self.label),
            meta: None,
            generator: OnceLock::new(),
        }
    }
}

/// Reed-Solomon code: evaluations of polynomials of degree < k at the powers
/// gamma^0 .. gamma^(n-1), where gamma has multiplicative order exactly n.
///
/// Parity-check row b (for b in 0..n-k) is the evaluation vector of the
/// monomial X^(b+1); orthogonality to all monomials X^a with a < k follows
/// because a + b + 1 is never divisible by n.
pub fn rs_code(field: FieldRef, gamma: Gf, n: usize, k: usize) -> Result<LinearCode, CodeError> {
    windowed_code(field, gamma, 1, n, k)
}

/// A folded code: the base code's coordinates grouped into blocks of s.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoldedCode {
    pub base: LinearCode,
    /// Folding parameter: block b covers base coordinates [b*s, (b+1)*s).
    pub s: usize,
    /// Folded length (number of blocks).
    pub n: usize,
}

impl FoldedCode {
    /// Number of nonzero s-blocks of an unfolded vector.
    pub fn block_weight(&self, v: &[Gf]) -> usize {
        assert_eq!(v.len(), self.base.n());
        v.chunks(self.s).filter(|b| b.iter().any(|x| !x.is_zero())).count()
    }

    /// Indices of nonzero blocks, ascending.
    pub fn block_support(&self, v: &[Gf]) -> Vec<usize> {
        v.chunks(self.s)
            .enumerate()
            .filter(|(_, b)| b.iter().any(|x| !x.is_zero()))
            .map(|(i, _)| i)
            .collect()
    }

    /// The folded RS distance formula n - floor((k-1)/s).
    pub fn designed_distance(&self) -> usize {
        self.n - (self.base.k() - 1) / self.s
    }
}

/// Folded Reed-Solomon code over evaluation domain of size s*n: the same
/// parity-check and generator matrices as the unfolded RS code of length sn,
/// with block structure (and hence distance counted in blocks) on top.
pub fn frs_code(
    field: FieldRef,
    gamma: Gf,
    s: usize,
    n: usize,
    k: usize,
) -> Result<FoldedCode, CodeError> {
    let base = windowed_code(field, gamma, s, n, k)?;
    Ok(FoldedCode { base, s, n })
}

fn windowed_code(
    field: FieldRef,
    gamma: Gf,
    s: usize,
    n: usize,
    k: usize,
) -> Result<LinearCode, CodeError> {
    let sn = s * n;
    if k < 1 || k > sn {
        return Err(CodeError::BadDimension { k, n: sn });
    }
    if !order_is(&field, gamma, sn) {
        return Err(CodeError::BadOrder { expected: sn });
    }
    let parity = Mat::from_fn(field.clone(), sn - k, sn, |b, j| {
        field.pow(gamma, ((b + 1) * j) as u64)
    });
    debug_assert_eq!(parity.rank(), sn - k, "Vandermonde-type rows are independent");
    let label = if s == 1 {
        format!("rs[{n},{k}]/gf({})", field.order())
    } else {
        format!("frs[s={s},{n},{k}]/gf({})", field.order())
    };
    let code = LinearCode {
        field,
        n: sn,
        parity,
        label,
        meta: None,
        generator: OnceLock::new(),
    };
    Ok(code.with_meta(CodeMeta {
        gamma,
        sn,
        window_start: 0,
        window_len: k,
        fold: s,
    }))
}

fn order_is(field: &FieldRef, gamma: Gf, m: usize) -> bool {
    if gamma.is_zero() || m == 0 {
        return false;
    }
    let mut p = gamma;
    let mut k = 1;
    while p != Gf::ONE {
        p = field.mul(p, gamma);
        k += 1;
        if k > m {
            return false;
        }
    }
    k == m
}

/// Exact minimum distance by enumerating all q^k codewords.
///
/// Returns [`INF_DISTANCE`] for k = 0 (a convention the hypergraph-product
/// parameter formula relies on for trivial transpose codes) and
/// [`CodeError::TooLarge`] when q^k exceeds `budget`.
pub fn brute_force_distance(code: &LinearCode, budget: u128) -> Result<usize, CodeError> {
    min_weight_enumeration(code, budget, |v| matrix::weight(v))
}

/// Exact minimum block distance of a folded code, same budget contract.
pub fn brute_force_block_distance(code: &FoldedCode, budget: u128) -> Result<usize, CodeError> {
    min_weight_enumeration(&code.base, budget, |v| code.block_weight(v))
}

fn min_weight_enumeration(
    code: &LinearCode,
    budget: u128,
    weigh: impl Fn(&[Gf]) -> usize,
) -> Result<usize, CodeError> {
    let k = code.k();
    if k == 0 {
        return Ok(INF_DISTANCE);
    }
    let q = code.field().order() as u128;
    let needed = q.checked_pow(k as u32).ok_or(CodeError::TooLarge {
        needed: u128::MAX,
        budget,
    })?;
    if needed > budget {
        return Err(CodeError::TooLarge { needed, budget });
    }
    let g = code.generator();
    let f = code.field().clone();
    let qn = code.field().order() as u16;
    // Depth-first over messages; moving digit a -> b at level i adds
    // (a+b) * row_i, so each visited node costs one scaled row addition.
    let mut acc = vec![Gf::ZERO; code.n()];
    let mut best = INF_DISTANCE;
    let mut stack: Vec<u16> = vec![0; k];
    let mut level = 0usize;
    loop {
        if level == k {
            let w = weigh(&acc);
            if w > 0 && w < best {
                best = w;
            }
            // backtrack to the deepest level that can still advance
            loop {
                if level == 0 {
                    return Ok(best);
                }
                level -= 1;
                if stack[level] + 1 < qn {
                    break;
                }
                // reset this digit to zero before popping further
                let delta = Gf(stack[level]);
                add_scaled(&f, &mut acc, g.row(level), delta);
                stack[level] = 0;
            }
            let delta = Gf(stack[level] ^ (stack[level] + 1));
            add_scaled(&f, &mut acc, g.row(level), delta);
            stack[level] += 1;
            level += 1;
        } else {
            level += 1; // descend with digit 0, acc unchanged
        }
    }
}

fn add_scaled(f: &FieldRef, acc: &mut [Gf], row: &[Gf], c: Gf) {
    if c.is_zero() {
        return;
    }
    for (a, &r) in acc.iter_mut().zip(row) {
        *a += f.mul(c, r);
    }
}

/// Biregular bipartite graph; left vertices are code coordinates, right
/// vertices carry local constraints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteGraph {
    pub n_left: usize,
    pub n_right: usize,
    pub d_left: usize,
    pub d_right: usize,
    /// For each right vertex j, the ordered list of left neighbors.
    pub right_adj: Vec<Vec<usize>>,
    /// Derived: for each left vertex, the right vertices it touches.
    left_adj: Vec<Vec<usize>>,
}

impl BipartiteGraph {
    /// Validates biregularity and derives degrees from the adjacency lists.
    pub fn new(n_left: usize, right_adj: Vec<Vec<usize>>) -> Result<BipartiteGraph, CodeError> {
        let n_right = right_adj.len();
        if n_right == 0 || right_adj[0].is_empty() {
            return Err(CodeError::NotBiregular("empty graph".into()));
        }
        let d_right = right_adj[0].len();
        let mut left_adj = vec![Vec::new(); n_left];
        for (j, nbrs) in right_adj.iter().enumerate() {
            if nbrs.len() != d_right {
                return Err(CodeError::NotBiregular(format!(
                    "right vertex {j} has degree {} != {d_right}",
                    nbrs.len()
                )));
            }
            for &v in nbrs {
                if v >= n_left {
                    return Err(CodeError::NotBiregular(format!(
                        "right vertex {j} references left vertex {v} >= {n_left}"
                    )));
                }
                left_adj[v].push(j);
            }
        }
        let d_left = left_adj[0].len();
        for (v, checks) in left_adj.iter().enumerate() {
            if checks.len() != d_left {
                return Err(CodeError::NotBiregular(format!(
                    "left vertex {v} has degree {} != {d_left}",
                    checks.len()
                )));
            }
        }
        Ok(BipartiteGraph {
            n_left,
            n_right,
            d_left,
            d_right,
            right_adj,
            left_adj,
        })
    }

    /// Seeded configuration-model sample, resampled until the graph is
    /// simple (no repeated edge). Deterministic in the seed.
    pub fn random_biregular(
        n_left: usize,
        n_right: usize,
        d_left: usize,
        d_right: usize,
        seed: u64,
    ) -> Result<BipartiteGraph, CodeError> {
        if n_left * d_left != n_right * d_right {
            return Err(CodeError::NotBiregular(format!(
                "stub mismatch: {n_left}*{d_left} != {n_right}*{d_right}"
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        const ATTEMPTS: usize = 10_000;
        for _ in 0..ATTEMPTS {
            // left stubs in fixed order, right stubs shuffled against them
            let mut stubs: Vec<usize> = (0..n_left * d_left).map(|i| i / d_left).collect();
            for i in (1..stubs.len()).rev() {
                let j = rng.random_range(0..=i);
                stubs.swap(i, j);
            }
            let mut right_adj: Vec<Vec<usize>> = (0..n_right)
                .map(|j| stubs[j * d_right..(j + 1) * d_right].to_vec())
                .collect();
            let simple = right_adj.iter().all(|nbrs| {
                let mut s = nbrs.clone();
                s.sort_unstable();
                s.windows(2).all(|w| w[0] != w[1])
            });
            if simple {
                for nbrs in &mut right_adj {
                    nbrs.sort_unstable();
                }
                return BipartiteGraph::new(n_left, right_adj);
            }
        }
        Err(CodeError::GraphSearchExhausted(ATTEMPTS))
    }

    /// Point-line incidence graph of the affine plane of order 3: left
    /// vertices are the 12 lines of AG(2,3) (degree 3), right vertices the
    /// 9 points (degree 4). Two lines meet in at most one point, so the
    /// graph has girth 6 and certifies as an expander at smax = 2 with
    /// defect exactly 1/6 and flip radius 1. Random (3,4)-biregular graphs
    /// essentially never reach girth 6 at this size, so this is the
    /// deterministic certified instance used by tests and the harness.
    pub fn affine_plane() -> BipartiteGraph {
        let mut right_adj = vec![Vec::new(); 9];
        let mut line = 0;
        // lines y = m*x + b, then vertical lines x = b
        for m in 0..3usize {
            for b in 0..3usize {
                for x in 0..3usize {
                    right_adj[3 * x + (m * x + b) % 3].push(line);
                }
                line += 1;
            }
        }
        for b in 0..3usize {
            for y in 0..3usize {
                right_adj[3 * b + y].push(line);
            }
            line += 1;
        }
        BipartiteGraph::new(12, right_adj).expect("incidence structure is (3,4)-biregular")
    }

    /// Right vertices adjacent to the given left set (deduplicated).
    pub fn neighborhood_size(&self, lefts: &[usize]) -> usize {
        let mut seen = vec![false; self.n_right];
        let mut count = 0;
        for &v in lefts {
            for &j in &self.left_adj[v] {
                if !seen[j] {
                    seen[j] = true;
                    count += 1;
                }
            }
        }
        count
    }

    /// Checks incident to a left vertex.
    pub fn checks_of(&self, left: usize) -> &[usize] {
        &self.left_adj[left]
    }
}

/// Outcome of the exhaustive expansion check: every left subset S with
/// |S| <= smax has |Nbr(S)| >= (1 - delta) * d_left * |S|, delta < 1/4.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpansionCertificate {
    pub smax: usize,
    /// Worst expansion defect over all checked subsets, as an exact fraction.
    pub delta_num: u64,
    pub delta_den: u64,
    /// Certified decoding radius floor(smax * (1 - 2*delta)).
    pub radius: usize,
    /// A subset attaining the worst defect (empty when delta = 0).
    pub worst_set: Vec<usize>,
}

/// Steps a strictly increasing index tuple to its lexicographic successor
/// over 0..n. Returns false once the last tuple has been visited.
pub(crate) fn next_subset(subset: &mut [usize], n: usize) -> bool {
    let t = subset.len();
    for i in (0..t).rev() {
        if subset[i] < n - (t - i) {
            subset[i] += 1;
            for j in i + 1..t {
                subset[j] = subset[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Exhaustively checks vertex expansion of all left subsets of size <= smax.
///
/// All arithmetic is exact (cross-multiplied fractions); intended for
/// n_left <= 24 where the subset count stays tame.
pub fn certify_expansion(
    graph: &BipartiteGraph,
    smax: usize,
) -> Result<ExpansionCertificate, CodeError> {
    assert!(smax >= 1 && smax <= graph.n_left);
    let dl = graph.d_left as u64;
    // delta = max over subsets of (d_left*t - |Nbr|) / (d_left*t)
    let mut num = 0u64;
    let mut den = 1u64;
    let mut worst = Vec::new();
    for t in 1..=smax {
        // lexicographic enumeration of t-subsets of 0..n_left
        let mut subset: Vec<usize> = (0..t).collect();
        loop {
            let nbr = graph.neighborhood_size(&subset) as u64;
            let cand_num = dl * t as u64 - nbr;
            let cand_den = dl * t as u64;
            if cand_num * den > num * cand_den {
                num = cand_num;
                den = cand_den;
                worst = subset.clone();
            }
            if !next_subset(&mut subset, graph.n_left) {
                break;
            }
        }
    }
    if 4 * num >= den {
        return Err(CodeError::InsufficientExpansion { num, den });
    }
    // radius = floor(smax * (den - 2*num) / den), exactly
    let radius = (smax as u64 * (den - 2 * num) / den) as usize;
    Ok(ExpansionCertificate {
        smax,
        delta_num: num,
        delta_den: den,
        radius,
        worst_set: worst,
    })
}

/// Sipser-Spielman code data: the full stacked constraint rows (one block
/// per right vertex), a full-row-rank selection of them as the working
/// parity check, and the change-of-presentation matrix between the two.
#[derive(Debug, Clone)]
pub struct ExpanderCode {
    pub code: LinearCode,
    pub graph: BipartiteGraph,
    /// All constraint rows: for each right vertex, the inner parity rows
    /// placed on its neighborhood. May be row-dependent.
    pub graph_rows: Mat,
    /// graph_rows = w * code.parity_check(); converts working syndromes to
    /// graph-presentation syndromes.
    pub w: Mat,
}

impl ExpanderCode {
    pub fn new(graph: BipartiteGraph, inner: &LinearCode) -> Result<ExpanderCode, CodeError> {
        if inner.n() != graph.d_right {
            return Err(CodeError::DimensionMismatch {
                inner_n: inner.n(),
                d_right: graph.d_right,
            });
        }
        let f = inner.field().clone();
        let hi = inner.parity_check();
        let mut rows = Vec::with_capacity(graph.n_right * hi.rows());
        for nbrs in &graph.right_adj {
            for b in 0..hi.rows() {
                let mut row = vec![Gf::ZERO; graph.n_left];
                for (port, &v) in nbrs.iter().enumerate() {
                    row[v] += hi.get(b, port);
                }
                rows.push(row);
            }
        }
        let graph_rows = Mat::from_rows(f.clone(), rows);
        // Greedy-first maximal independent subset of rows: the pivot columns
        // of the transpose pick exactly that.
        let selected = graph_rows.transpose().rref().pivots;
        let sel_rows: Vec<Vec<Gf>> = selected.iter().map(|&i| graph_rows.row_vec(i)).collect();
        let parity = Mat::from_rows(f.clone(), sel_rows);
        let code = LinearCode {
            field: f.clone(),
            n: graph.n_left,
            parity,
            label: format!(
                "expander[{},{},{},{}]",
                graph.d_left, graph.d_right, graph.n_left, graph.n_right
            ),
            meta: None,
            generator: OnceLock::new(),
        };
        // graph_rows^T = parity^T w^T, solvable exactly since the selected
        // rows span the full constraint row space
        let wt = code
            .parity_check()
            .transpose()
            .solve_columns(&graph_rows.transpose())
            .expect("selected rows span all graph rows");
        Ok(ExpanderCode {
            code,
            graph,
            graph_rows,
            w: wt.transpose(),
        })
    }

    /// Converts a syndrome in the working (selected-row) presentation to the
    /// graph presentation the flip decoder consumes.
    pub fn graph_syndrome(&self, s: &[Gf]) -> Vec<Gf> {
        self.w.mul_vec(s)
    }
}

/// The code itself, when the graph machinery is not needed.
pub fn expander_code(graph: BipartiteGraph, inner: &LinearCode) -> Result<LinearCode, CodeError> {
    Ok(ExpanderCode::new(graph, inner)?.code)
}

/// The [d, d-1] single-parity-check code (all coordinates sum to zero), the
/// usual inner code for Sipser-Spielman constructions.
pub fn single_parity_code(field: FieldRef, d: usize) -> LinearCode {
    let parity = Mat::from_fn(field.clone(), 1, d, |_, _| Gf::ONE);
    LinearCode::from_parity(parity, format!("parity[{d},{}]", d - 1)).expect("one nonzero row")
}
