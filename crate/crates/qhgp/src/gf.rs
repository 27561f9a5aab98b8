//! Arithmetic in the binary fields GF(2^r), r <= 16.
//!
//! A [`Field`] owns log/antilog tables keyed by a fixed multiplicative
//! generator, so products cost two lookups. Elements are plain [`Gf`]
//! wrappers around their bit representation; addition is XOR and never needs
//! the field, everything else goes through `&Field`. The module also carries
//! dense polynomials ([`Poly`]) with evaluation/interpolation at the powers
//! of a root of unity, cyclic products, and a small dense Toeplitz solver -
//! the pieces the key-equation decoder in [`crate::syndec`] is built from.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

/// Errors from field construction and the small solvers in this module.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum GfError {
    /// The modulus is not an irreducible polynomial of the requested degree
    /// (or has zero constant term, so x would not be invertible).
    #[error("modulus is not an irreducible degree-r polynomial with nonzero constant term")]
    ReducibleModulus,
    /// The multiplicative group has no element of the requested order.
    #[error("no element of multiplicative order {0}")]
    NoSuchOrder(u64),
    /// The Toeplitz matrix is singular.
    #[error("singular toeplitz system")]
    SingularSystem,
}

/// An element of some GF(2^r), stored as its bit representation.
///
/// Which field it belongs to is tracked by the containers (matrices, codes)
/// rather than per element; mixing fields is a programming error that the
/// container layer asserts against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Gf(pub u16);

impl Gf {
    pub const ZERO: Gf = Gf(0);
    pub const ONE: Gf = Gf(1);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl std::ops::Add for Gf {
    type Output = Gf;
    #[inline]
    fn add(self, rhs: Gf) -> Gf {
        Gf(self.0 ^ rhs.0)
    }
}

impl std::ops::AddAssign for Gf {
    #[inline]
    fn add_assign(&mut self, rhs: Gf) {
        self.0 ^= rhs.0;
    }
}

// Characteristic two: subtraction is addition. Kept separate so formulas
// written with minus signs read naturally.
impl std::ops::Sub for Gf {
    type Output = Gf;
    #[inline]
    fn sub(self, rhs: Gf) -> Gf {
        Gf(self.0 ^ rhs.0)
    }
}

impl fmt::Display for Gf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:x}", self.0)
    }
}

/// Canonical modulus per extension degree: the lexicographically smallest
/// primitive polynomial of that degree over GF(2), encoded with bit i holding
/// the coefficient of x^i. Primitive means x itself generates the
/// multiplicative group, which keeps the antilog table aligned with powers
/// of x for the canonical fields.
pub const CANONICAL_MODULI: [u32; 16] = [
    0b11,      // x + 1
    0b111,     // x^2 + x + 1
    0b1011,    // x^3 + x + 1
    0b10011,   // x^4 + x + 1
    0b100101,  // x^5 + x^2 + 1
    0b1000011, // x^6 + x + 1
    0b10000011, // x^7 + x + 1
    0b100011101, // x^8 + x^4 + x^3 + x^2 + 1
    0b1000010001, // x^9 + x^4 + 1
    0b10000001001, // x^10 + x^3 + 1
    0b100000000101, // x^11 + x^2 + 1
    0b1000001010011, // x^12 + x^6 + x^4 + x + 1
    0b10000000011011, // x^13 + x^4 + x^3 + x + 1
    0b100000000101011, // x^14 + x^5 + x^3 + x + 1
    0b1000000000000011, // x^15 + x + 1
    0b10000000000101101, // x^16 + x^5 + x^3 + x^2 + 1
];

/// GF(2^r) with multiplication backed by log/antilog tables.
///
/// For r = 1 this degenerates to the prime field GF(2); the canonical
/// modulus is x + 1 and arithmetic is ordinary mod-2.
pub struct Field {
    r: u32,
    modulus: u32,
    generator: Gf,
    /// log[bits] for bits != 0; log[0] is unused filler.
    log: Vec<u16>,
    /// exp[i] = generator^i, doubled so a log-sum never needs reduction.
    exp: Vec<u16>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field")
            .field("r", &self.r)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.r == other.r && self.modulus == other.modulus
    }
}
impl Eq for Field {}

/// Shared handle to a field; matrices and codes clone this freely.
pub type FieldRef = Arc<Field>;

impl Field {
    /// Builds GF(2^r) from an explicit modulus (bit i = coefficient of x^i).
    ///
    /// The modulus must have degree exactly `r`, nonzero constant term and be
    /// irreducible over GF(2); anything else is [`GfError::ReducibleModulus`].
    pub fn new(r: u32, modulus: u32) -> Result<Field, GfError> {
        if r == 0 || r > 16 || modulus >> r != 1 || modulus & 1 == 0 {
            return Err(GfError::ReducibleModulus);
        }
        if !is_irreducible(modulus, r) {
            return Err(GfError::ReducibleModulus);
        }
        let q = 1usize << r;
        // Smallest element that generates the multiplicative group. For the
        // canonical (primitive) moduli this is x; the scan only goes further
        // for non-primitive irreducible moduli.
        let mut generator = Gf(1);
        for cand in 1..q as u32 {
            if mult_order(cand as u16, modulus, r) == (q - 1) as u64 {
                generator = Gf(cand as u16);
                break;
            }
        }
        let mut log = vec![0u16; q];
        let mut exp = vec![0u16; 2 * (q - 1)];
        let mut p = 1u16;
        for i in 0..q - 1 {
            exp[i] = p;
            exp[i + q - 1] = p;
            log[p as usize] = i as u16;
            p = clmul_reduce(p, generator.0, modulus, r);
        }
        debug_assert_eq!(p, 1, "generator order must divide table walk");
        Ok(Field {
            r,
            modulus,
            generator,
            log,
            exp,
        })
    }

    /// The canonical GF(2^r) from [`CANONICAL_MODULI`]. Panics if r is
    /// outside 1..=16.
    pub fn canonical(r: u32) -> FieldRef {
        let m = CANONICAL_MODULI[(r - 1) as usize];
        Arc::new(Field::new(r, m).expect("canonical moduli are irreducible"))
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    /// Number of field elements, q = 2^r.
    pub fn order(&self) -> usize {
        1 << self.r
    }

    /// The generator the tables are keyed by.
    pub fn generator(&self) -> Gf {
        self.generator
    }

    /// Checks an element is in range for this field (useful after I/O).
    pub fn contains(&self, a: Gf) -> bool {
        (a.0 as usize) < self.order()
    }

    #[inline]
    pub fn mul(&self, a: Gf, b: Gf) -> Gf {
        if a.is_zero() || b.is_zero() {
            return Gf::ZERO;
        }
        Gf(self.exp[self.log[a.0 as usize] as usize + self.log[b.0 as usize] as usize])
    }

    /// Multiplicative inverse; panics on zero.
    #[inline]
    pub fn inv(&self, a: Gf) -> Gf {
        assert!(!a.is_zero(), "inverse of zero");
        let qm1 = self.order() - 1;
        Gf(self.exp[qm1 - self.log[a.0 as usize] as usize])
    }

    #[inline]
    pub fn div(&self, a: Gf, b: Gf) -> Gf {
        self.mul(a, self.inv(b))
    }

    pub fn pow(&self, a: Gf, e: u64) -> Gf {
        if a.is_zero() {
            return if e == 0 { Gf::ONE } else { Gf::ZERO };
        }
        let qm1 = (self.order() - 1) as u64;
        let idx = (self.log[a.0 as usize] as u64 * (e % qm1)) % qm1;
        Gf(self.exp[idx as usize])
    }

    /// Carry-less multiply-and-reduce. Table-free reference route; the log
    /// tables are checked against it in tests.
    pub fn mul_slow(&self, a: Gf, b: Gf) -> Gf {
        Gf(clmul_reduce(a.0, b.0, self.modulus, self.r))
    }

    /// Deterministic element of multiplicative order exactly `m`.
    ///
    /// Returns generator^((q-1)/m) when m divides q - 1, otherwise
    /// [`GfError::NoSuchOrder`]. The choice is a pure function of the field.
    pub fn root_of_order(&self, m: u64) -> Result<Gf, GfError> {
        let qm1 = (self.order() - 1) as u64;
        if m == 0 || qm1 % m != 0 {
            return Err(GfError::NoSuchOrder(m));
        }
        let g = self.pow(self.generator, qm1 / m);
        debug_assert_eq!(mult_order(g.0, self.modulus, self.r), m);
        Ok(g)
    }

    /// Uniform element.
    pub fn sample<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> Gf {
        Gf(rng.random_range(0..self.order() as u32) as u16)
    }

    /// Uniform nonzero element.
    pub fn sample_nonzero<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> Gf {
        Gf(rng.random_range(1..self.order() as u32) as u16)
    }
}

fn clmul_reduce(a: u16, b: u16, modulus: u32, r: u32) -> u16 {
    let mut a = a as u32;
    let mut b = b as u32;
    let mut acc = 0u32;
    while b != 0 {
        if b & 1 != 0 {
            acc ^= a;
        }
        b >>= 1;
        a <<= 1;
        if a >> r != 0 {
            a ^= modulus;
        }
    }
    acc as u16
}

fn is_irreducible(m: u32, r: u32) -> bool {
    // Trial division by every monic polynomial of degree 1..=r/2; cheap at
    // these degrees and free of number-theoretic machinery.
    for d in 1..=(r / 2) {
        for low in 0..(1u32 << d) {
            let div = (1u32 << d) | low;
            if poly_rem(m, div) == 0 {
                return false;
            }
        }
    }
    true
}

fn poly_rem(mut a: u32, b: u32) -> u32 {
    let db = 31 - b.leading_zeros();
    while a != 0 {
        let da = 31 - a.leading_zeros();
        if da < db {
            break;
        }
        a ^= b << (da - db);
    }
    a
}

fn mult_order(a: u16, modulus: u32, r: u32) -> u64 {
    debug_assert!(a != 0);
    if a == 1 {
        return 1;
    }
    let mut p = a;
    let mut k = 1u64;
    loop {
        p = clmul_reduce(p, a, modulus, r);
        k += 1;
        if p == 1 {
            return k;
        }
    }
}

/// Dense polynomial over some GF(2^r), coefficients lowest degree first with
/// trailing zeros stripped; the empty vector is the zero polynomial.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Poly {
    coeffs: Vec<Gf>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Gf>) -> Poly {
        while coeffs.last() == Some(&Gf::ZERO) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Poly {
        Poly { coeffs: vec![] }
    }

    pub fn one() -> Poly {
        Poly { coeffs: vec![Gf::ONE] }
    }

    /// X^k.
    pub fn monomial(k: usize) -> Poly {
        let mut coeffs = vec![Gf::ZERO; k + 1];
        coeffs[k] = Gf::ONE;
        Poly { coeffs }
    }

    pub fn coeffs(&self) -> &[Gf] {
        &self.coeffs
    }

    /// Coefficient of X^i (zero past the end).
    pub fn coeff(&self, i: usize) -> Gf {
        self.coeffs.get(i).copied().unwrap_or(Gf::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![Gf::ZERO; n];
        for (i, c) in out.iter_mut().enumerate() {
            *c = self.coeff(i) + other.coeff(i);
        }
        Poly::new(out)
    }

    /// Schoolbook product.
    pub fn mul(&self, f: &Field, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Gf::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += f.mul(a, b);
            }
        }
        Poly::new(out)
    }

    pub fn scale(&self, f: &Field, c: Gf) -> Poly {
        Poly::new(self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    /// Remainder of long division by a nonzero divisor.
    pub fn rem(&self, f: &Field, divisor: &Poly) -> Poly {
        let d = divisor.degree().expect("division by the zero polynomial");
        let lead_inv = f.inv(divisor.coeff(d));
        let mut r = self.coeffs.clone();
        while r.len() > d {
            let top = r.len() - 1;
            let c = r[top];
            if !c.is_zero() {
                let q = f.mul(c, lead_inv);
                for i in 0..=d {
                    r[top - d + i] += f.mul(q, divisor.coeff(i));
                }
            }
            r.pop();
        }
        Poly::new(r)
    }

    /// Monic greatest common divisor (Euclid); zero when both inputs are.
    pub fn gcd(f: &Field, a: &Poly, b: &Poly) -> Poly {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_zero() {
            let r = a.rem(f, &b);
            a = std::mem::replace(&mut b, r);
        }
        match a.degree() {
            Some(d) => {
                let inv = f.inv(a.coeff(d));
                a.scale(f, inv)
            }
            None => a,
        }
    }

    /// Shortest linear recurrence generating `seq` (Berlekamp-Massey).
    /// Returns the connection polynomial c (with c_0 = 1) and the
    /// recurrence length L, so that sum_{j=0..L} c_j seq[i-j] = 0 for every
    /// i in L..seq.len(). The degree of c is at most L, with equality
    /// unless the recurrence ends in zero taps. When 2L <= seq.len() the
    /// recurrence of that length is unique.
    pub fn min_recurrence(f: &Field, seq: &[Gf]) -> (Poly, usize) {
        let mut c = vec![Gf::ONE]; // current connection polynomial
        let mut b = vec![Gf::ONE]; // copy from before the last length change
        let mut l = 0usize;
        let mut m = 1usize; // steps since the last length change
        let mut bd = Gf::ONE; // discrepancy at the last length change
        for i in 0..seq.len() {
            let mut d = seq[i];
            for j in 1..c.len().min(i + 1) {
                d += f.mul(c[j], seq[i - j]);
            }
            if d.is_zero() {
                m += 1;
                continue;
            }
            let coef = f.mul(d, f.inv(bd));
            let keep = c.clone();
            if c.len() < b.len() + m {
                c.resize(b.len() + m, Gf::ZERO);
            }
            for (j, &bj) in b.iter().enumerate() {
                c[j + m] += f.mul(coef, bj);
            }
            if 2 * l <= i {
                l = i + 1 - l;
                b = keep;
                bd = d;
                m = 1;
            } else {
                m += 1;
            }
        }
        (Poly::new(c), l)
    }

    /// Horner evaluation.
    pub fn eval(&self, f: &Field, x: Gf) -> Gf {
        let mut acc = Gf::ZERO;
        for &c in self.coeffs.iter().rev() {
            acc = f.mul(acc, x) + c;
        }
        acc
    }

    /// Evaluates at gamma^0, gamma^1, ..., gamma^(m-1).
    pub fn eval_at_powers(&self, f: &Field, gamma: Gf, m: usize) -> Vec<Gf> {
        let mut out = Vec::with_capacity(m);
        let mut x = Gf::ONE;
        for _ in 0..m {
            out.push(self.eval(f, x));
            x = f.mul(x, gamma);
        }
        out
    }

    /// The unique polynomial of degree < m through (gamma^j, values[j]).
    ///
    /// `gamma` must have multiplicative order exactly m = values.len(). Since
    /// m divides q - 1 it is odd, so the inverse evaluation transform
    /// collapses to f_t = sum_j values[j] gamma^(-jt) with no 1/m factor.
    pub fn interpolate_at_powers(f: &Field, values: &[Gf], gamma: Gf) -> Poly {
        let m = values.len();
        debug_assert!(m % 2 == 1, "order of a unit in char 2 is odd");
        debug_assert_eq!(f.pow(gamma, m as u64), Gf::ONE);
        let ginv = f.inv(gamma);
        let mut coeffs = vec![Gf::ZERO; m];
        for (t, c) in coeffs.iter_mut().enumerate() {
            // gamma^(-jt) walked incrementally over j
            let step = f.pow(ginv, t as u64);
            let mut w = Gf::ONE;
            let mut acc = Gf::ZERO;
            for &v in values {
                acc += f.mul(v, w);
                w = f.mul(w, step);
            }
            *c = acc;
        }
        Poly::new(coeffs)
    }

    /// Product modulo X^m - 1. Both inputs must have degree < m.
    pub fn cyclic_mul(&self, f: &Field, other: &Poly, m: usize) -> Poly {
        assert!(self.coeffs.len() <= m && other.coeffs.len() <= m);
        let mut out = vec![Gf::ZERO; m];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                let t = if i + j >= m { i + j - m } else { i + j };
                out[t] += f.mul(a, b);
            }
        }
        Poly::new(out)
    }
}

/// A square Toeplitz system: row i, column j holds `top_row[j-i]` when
/// j >= i and `left_col[i-j]` otherwise. `top_row[0]` and `left_col[0]`
/// must agree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToeplitzSystem {
    pub top_row: Vec<Gf>,
    pub left_col: Vec<Gf>,
    pub rhs: Vec<Gf>,
}

impl ToeplitzSystem {
    pub fn new(top_row: Vec<Gf>, left_col: Vec<Gf>, rhs: Vec<Gf>) -> ToeplitzSystem {
        assert_eq!(top_row.len(), rhs.len());
        assert_eq!(left_col.len(), rhs.len());
        assert!(rhs.is_empty() || top_row[0] == left_col[0]);
        ToeplitzSystem { top_row, left_col, rhs }
    }

    pub fn dim(&self) -> usize {
        self.rhs.len()
    }

    #[inline]
    pub fn entry(&self, i: usize, j: usize) -> Gf {
        if j >= i {
            self.top_row[j - i]
        } else {
            self.left_col[i - j]
        }
    }

    /// Unique solution of the system, or [`GfError::SingularSystem`].
    ///
    /// Plain O(d^3) Gaussian elimination on the materialised matrix; the
    /// systems the decoders build stay small enough that the structured
    /// solvers would be pure complication.
    pub fn solve(&self, f: &Field) -> Result<Vec<Gf>, GfError> {
        let d = self.dim();
        let mut rows: Vec<Vec<Gf>> = (0..d)
            .map(|i| {
                let mut row: Vec<Gf> = (0..d).map(|j| self.entry(i, j)).collect();
                row.push(self.rhs[i]);
                row
            })
            .collect();
        for col in 0..d {
            let pivot = (col..d).find(|&i| !rows[i][col].is_zero());
            let Some(pivot) = pivot else {
                return Err(GfError::SingularSystem);
            };
            rows.swap(col, pivot);
            let inv = f.inv(rows[col][col]);
            for x in rows[col].iter_mut() {
                *x = f.mul(*x, inv);
            }
            for i in 0..d {
                if i != col && !rows[i][col].is_zero() {
                    let factor = rows[i][col];
                    for j in col..=d {
                        let sub = f.mul(factor, rows[col][j]);
                        rows[i][j] += sub;
                    }
                }
            }
        }
        Ok(rows.into_iter().map(|r| r[d]).collect())
    }
}
