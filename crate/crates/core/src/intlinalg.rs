//! Exact integer linear algebra: Smith normal form with transforms, homology
//! of short integer chain complexes, and signatures of symmetric matrices.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::foxchain::{IntComplex, Modulus};
use crate::matrix::{IntMatrix, Matrix};

/// A finitely generated abelian group `Z^r ⊕ Z/d1 ⊕ … ⊕ Z/dm` with
/// `d1 | d2 | … | dm` and every `di >= 2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "AbelianGroupWire", into = "AbelianGroupWire")]
pub struct AbelianGroup {
    free_rank: usize,
    torsion: Vec<BigInt>,
}

impl AbelianGroup {
    pub fn trivial() -> Self {
        AbelianGroup { free_rank: 0, torsion: Vec::new() }
    }

    pub fn free(rank: usize) -> Self {
        AbelianGroup { free_rank: rank, torsion: Vec::new() }
    }

    /// `Z/n` read loosely: `n = 0` gives `Z`, `|n| = 1` the trivial group.
    pub fn cyclic(n: &BigInt) -> Self {
        Self::from_diagonal(0, std::slice::from_ref(n))
    }

    /// `(Z/2)^dim`.
    pub fn elementary_two(dim: usize) -> Self {
        AbelianGroup { free_rank: 0, torsion: vec![BigInt::from(2); dim] }
    }

    /// Canonical form of `Z^free ⊕ ⊕ Z/|d|` for arbitrary integers `d`;
    /// zeros contribute free summands and units vanish.
    pub fn from_diagonal(free: usize, diag: &[BigInt]) -> Self {
        let mut free_rank = free;
        let mut primes: Vec<(BigInt, u32)> = Vec::new();
        for d in diag {
            let d = d.abs();
            if d.is_zero() {
                free_rank += 1;
            } else if !d.is_one() {
                for (p, e) in factorize(&d) {
                    primes.push((p, e));
                }
            }
        }
        // Rebuild invariant factors from the elementary divisors.
        primes.sort();
        let mut by_prime: Vec<(BigInt, Vec<u32>)> = Vec::new();
        for (p, e) in primes {
            match by_prime.last_mut() {
                Some((q, v)) if *q == p => v.push(e),
                _ => by_prime.push((p, vec![e])),
            }
        }
        let len = by_prime.iter().map(|(_, v)| v.len()).max().unwrap_or(0);
        let mut torsion = vec![BigInt::one(); len];
        for (p, mut exps) in by_prime {
            exps.sort_unstable_by(|a, b| b.cmp(a));
            for (i, e) in exps.into_iter().enumerate() {
                let slot = len - 1 - i;
                torsion[slot] *= p.pow(e);
            }
        }
        AbelianGroup { free_rank, torsion }
    }

    /// Validating constructor for already-canonical data.
    pub fn new(free_rank: usize, torsion: Vec<BigInt>) -> Result<Self> {
        for (i, d) in torsion.iter().enumerate() {
            if d < &BigInt::from(2) {
                return Err(Error::Schema(format!("invariant factor {d} must be >= 2")));
            }
            if i > 0 && !(d % &torsion[i - 1]).is_zero() {
                return Err(Error::Schema(format!(
                    "invariant factors {} and {d} break the divisibility chain",
                    torsion[i - 1]
                )));
            }
        }
        Ok(AbelianGroup { free_rank, torsion })
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn direct_sum(&self, other: &AbelianGroup) -> AbelianGroup {
        let diag: Vec<BigInt> = self.torsion.iter().chain(other.torsion.iter()).cloned().collect();
        AbelianGroup::from_diagonal(self.free_rank + other.free_rank, &diag)
    }
}

impl fmt::Display for AbelianGroup {
    /// ASCII rendering such as `Z^2 + Z/2`, or `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return f.write_str("0");
        }
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for d in &self.torsion {
            parts.push(format!("Z/{d}"));
        }
        f.write_str(&parts.join(" + "))
    }
}

#[derive(Serialize, Deserialize)]
struct AbelianGroupWire {
    free_rank: usize,
    torsion: Vec<String>,
}

impl TryFrom<AbelianGroupWire> for AbelianGroup {
    type Error = Error;

    fn try_from(w: AbelianGroupWire) -> Result<Self> {
        let torsion = w
            .torsion
            .iter()
            .map(|s| s.parse::<BigInt>().map_err(|e| Error::Schema(format!("bad invariant factor {s:?}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        AbelianGroup::new(w.free_rank, torsion)
    }
}

impl From<AbelianGroup> for AbelianGroupWire {
    fn from(g: AbelianGroup) -> Self {
        AbelianGroupWire { free_rank: g.free_rank, torsion: g.torsion.iter().map(ToString::to_string).collect() }
    }
}

/// Trial-division factorization; the torsion orders seen here are small.
fn factorize(n: &BigInt) -> Vec<(BigInt, u32)> {
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut p = BigInt::from(2);
    while &p * &p <= n {
        let mut e = 0;
        while (&n % &p).is_zero() {
            n /= &p;
            e += 1;
        }
        if e > 0 {
            out.push((p.clone(), e));
        }
        p += 1;
    }
    if n > BigInt::one() {
        out.push((n, 1));
    }
    out
}

/// `U · A · V = D` with `U`, `V` unimodular and `D` diagonal with a
/// divisibility chain of non-negative entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SmithForm {
    /// The diagonal entries of `D`, including trailing zeros.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols())).map(|i| self.d[(i, i)].clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|d| !d.is_zero()).count()
    }
}

pub fn smith_normal_form(a: &IntMatrix) -> SmithForm {
    let (m, n) = (a.rows(), a.cols());
    let mut d = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);

    for t in 0..m.min(n) {
        loop {
            let Some((pi, pj)) = smallest_nonzero(&d, t) else {
                return SmithForm { u, d, v };
            };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let mut clean = true;
            for i in t + 1..m {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let q = d[(i, t)].div_floor(&d[(t, t)]);
                add_row_multiple(&mut d, i, t, &-&q);
                add_row_multiple(&mut u, i, t, &-&q);
                if !d[(i, t)].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..n {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let q = d[(t, j)].div_floor(&d[(t, t)]);
                add_col_multiple(&mut d, j, t, &-&q);
                add_col_multiple(&mut v, j, t, &-&q);
                if !d[(t, j)].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // Pivot must divide the remaining block; otherwise fold an
            // offending row into row t and retry.
            let pivot = d[(t, t)].clone();
            let offender = (t + 1..m).find(|&i| (t + 1..n).any(|j| !(&d[(i, j)] % &pivot).is_zero()));
            match offender {
                Some(i) => {
                    add_row_multiple(&mut d, t, i, &BigInt::one());
                    add_row_multiple(&mut u, t, i, &BigInt::one());
                }
                None => break,
            }
        }
        if d[(t, t)].is_negative() {
            for j in 0..n {
                d[(t, j)] = -&d[(t, j)];
            }
            for j in 0..m {
                u[(t, j)] = -&u[(t, j)];
            }
        }
    }
    SmithForm { u, d, v }
}

fn smallest_nonzero(d: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, BigInt)> = None;
    for i in t..d.rows() {
        for j in t..d.cols() {
            let a = d[(i, j)].abs();
            if a.is_zero() {
                continue;
            }
            if best.as_ref().is_none_or(|(_, _, b)| &a < b) {
                best = Some((i, j, a));
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

/// `row[dst] += c · row[src]`.
fn add_row_multiple(m: &mut IntMatrix, dst: usize, src: usize, c: &BigInt) {
    for j in 0..m.cols() {
        let delta = c * &m[(src, j)];
        m[(dst, j)] += delta;
    }
}

/// `col[dst] += c · col[src]`.
fn add_col_multiple(m: &mut IntMatrix, dst: usize, src: usize, c: &BigInt) {
    for i in 0..m.rows() {
        let delta = c * &m[(i, src)];
        m[(i, dst)] += delta;
    }
}

/// Homology `[H0, H1, H2]` of `Z^{n2} --d2--> Z^{n1} --d1--> Z^{n0}` in the
/// row-vector convention (`d2` is `n2 x n1`, `d1` is `n1 x n0`). With
/// `Modulus::Two` the entries are read mod 2 and each group is returned as
/// `(Z/2)^dim`.
pub fn homology_of_complex(cx: &IntComplex) -> Result<[AbelianGroup; 3]> {
    let (d2, d1) = (&cx.d2, &cx.d1);
    if d2.cols() != d1.rows() {
        return Err(Error::Precondition(format!(
            "boundary shapes {}x{} and {}x{} do not compose",
            d2.rows(),
            d2.cols(),
            d1.rows(),
            d1.cols()
        )));
    }
    let comp = d2.mul(d1)?.map(|v| cx.modulus.reduce(v));
    if !comp.is_zero() {
        return Err(Error::Precondition("d2 · d1 != 0: input is not a chain complex".into()));
    }
    let (n2, n1, n0) = (d2.rows(), d1.rows(), d1.cols());
    let s2 = smith_normal_form(d2);
    let s1 = smith_normal_form(d1);
    match cx.modulus {
        Modulus::Integers => {
            let (r2, r1) = (s2.rank(), s1.rank());
            let tors = |s: &SmithForm| s.diagonal().into_iter().filter(|d| !d.is_zero()).collect::<Vec<_>>();
            Ok([
                AbelianGroup::from_diagonal(n0 - r1, &tors(&s1)),
                AbelianGroup::from_diagonal(n1 - r1 - r2, &tors(&s2)),
                AbelianGroup::free(n2 - r2),
            ])
        }
        Modulus::Two => {
            let rank2 = |s: &SmithForm| s.diagonal().iter().filter(|d| d.is_odd()).count();
            let (r2, r1) = (rank2(&s2), rank2(&s1));
            Ok([
                AbelianGroup::elementary_two(n0 - r1),
                AbelianGroup::elementary_two(n1 - r1 - r2),
                AbelianGroup::elementary_two(n2 - r2),
            ])
        }
    }
}

/// Counts of positive, negative and zero eigenvalues.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Inertia {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

impl Inertia {
    pub fn signature(&self) -> i64 {
        self.positive as i64 - self.negative as i64
    }
}

/// Sylvester inertia via symmetric Gaussian elimination over `Q`.
///
/// A zero diagonal with a nonzero off-diagonal entry `b` at `(i, j)` is
/// eliminated as the `2x2` block `[[0, b], [b, 0]]`, contributing one
/// positive and one negative eigenvalue.
pub fn inertia(s: &IntMatrix) -> Result<Inertia> {
    if !s.is_symmetric() {
        return Err(Error::Precondition("signature needs a symmetric matrix".into()));
    }
    let mut a: Matrix<BigRational> = s.map(|v| BigRational::from_integer(v.clone()));
    let mut alive: Vec<usize> = (0..s.rows()).collect();
    let mut res = Inertia { positive: 0, negative: 0, zero: 0 };
    while !alive.is_empty() {
        if let Some(pos) = alive.iter().position(|&i| !a[(i, i)].is_zero()) {
            let p = alive.remove(pos);
            let piv = a[(p, p)].clone();
            if piv.is_positive() {
                res.positive += 1;
            } else {
                res.negative += 1;
            }
            for &r in &alive {
                if a[(r, p)].is_zero() {
                    continue;
                }
                let f = &a[(r, p)] / &piv;
                for &c in &alive {
                    let delta = &f * &a[(p, c)];
                    a[(r, c)] -= delta;
                }
            }
            continue;
        }
        let pair = alive
            .iter()
            .enumerate()
            .find_map(|(x, &i)| alive[x + 1..].iter().find(|&&j| !a[(i, j)].is_zero()).map(|&j| (i, j)));
        let Some((i, j)) = pair else {
            res.zero += alive.len();
            break;
        };
        alive.retain(|&x| x != i && x != j);
        let b = a[(i, j)].clone();
        res.positive += 1;
        res.negative += 1;
        // Schur complement of the block [[0, b], [b, 0]].
        let snapshot: Vec<(usize, BigRational, BigRational)> =
            alive.iter().map(|&r| (r, a[(r, i)].clone(), a[(r, j)].clone())).collect();
        for (r, ri, rj) in &snapshot {
            for (c, ci, cj) in &snapshot {
                let delta = (ri * cj + rj * ci) / &b;
                a[(*r, *c)] -= delta;
            }
        }
    }
    Ok(res)
}

pub fn signature(s: &IntMatrix) -> Result<i64> {
    Ok(inertia(s)?.signature())
}

/// Exact determinant by fraction-free (Bareiss) elimination.
pub fn determinant(m: &IntMatrix) -> Result<BigInt> {
    if !m.is_square() {
        return Err(Error::Dimension("determinant of a non-square matrix".into()));
    }
    let n = m.rows();
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut a = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for p in 0..n - 1 {
        if a[(p, p)].is_zero() {
            let Some(r) = (p + 1..n).find(|&r| !a[(r, p)].is_zero()) else {
                return Ok(BigInt::zero());
            };
            a.swap_rows(p, r);
            sign = -sign;
        }
        for i in p + 1..n {
            for j in p + 1..n {
                let v = (&a[(i, j)] * &a[(p, p)] - &a[(i, p)] * &a[(p, j)]) / &prev;
                a[(i, j)] = v;
            }
        }
        prev = a[(p, p)].clone();
    }
    Ok(sign * &a[(n - 1, n - 1)])
}

/// Inverse of an integer matrix with determinant `±1`, or `None`.
pub fn unimodular_inverse(m: &IntMatrix) -> Option<IntMatrix> {
    if !m.is_square() {
        return None;
    }
    let n = m.rows();
    let mut a: Matrix<BigRational> = m.map(|v| BigRational::from_integer(v.clone()));
    let mut inv: Matrix<BigRational> = IntMatrix::identity(n).map(|v| BigRational::from_integer(v.clone()));
    for c in 0..n {
        let r = (c..n).find(|&r| !a[(r, c)].is_zero())?;
        a.swap_rows(c, r);
        inv.swap_rows(c, r);
        let piv = a[(c, c)].clone();
        for j in 0..n {
            a[(c, j)] = &a[(c, j)] / &piv;
            inv[(c, j)] = &inv[(c, j)] / &piv;
        }
        for i in (0..n).filter(|&i| i != c) {
            let f = a[(i, c)].clone();
            if f.is_zero() {
                continue;
            }
            for j in 0..n {
                let da = &f * &a[(c, j)];
                let di = &f * &inv[(c, j)];
                a[(i, j)] -= da;
                inv[(i, j)] -= di;
            }
        }
    }
    if inv.entries().any(|v| !v.is_integer()) {
        return None;
    }
    Some(inv.map(|v| v.to_integer()))
}

/// The `E8` lattice as its Cartan matrix (diagonal 2, `-1` on the edges of
/// the `T(2,3,5)` Dynkin diagram): even, unimodular, positive definite.
pub fn e8_matrix() -> IntMatrix {
    let edges = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (4, 7)];
    let mut m = IntMatrix::zeros(8, 8);
    for i in 0..8 {
        m[(i, i)] = BigInt::from(2);
    }
    for (i, j) in edges {
        m[(i, j)] = BigInt::from(-1);
        m[(j, i)] = BigInt::from(-1);
    }
    m
}
