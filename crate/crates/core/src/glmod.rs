//! Finite-dimensional gl2-modules `U_m^alpha`.
//!
//! `U_m^alpha` is the simple module of sl2-highest weight m on which the
//! identity matrix acts by the scalar alpha, with basis `v_0, ..., v_m` and
//!
//! ```text
//! E11 v_i = (alpha + m - 2i)/2 v_i      E12 v_i = (m - i + 1) v_{i-1}
//! E21 v_i = (i + 1) v_{i+1}             E22 v_i = (alpha - m + 2i)/2 v_i
//! ```
//!
//! with `v_{-1} = v_{m+1} = 0`. Tensor products decompose as
//! `U_m ⊗ U_n = ⊕_k U_{m+n-2k}`; the projections are computed once per
//! `(m, n)` by exact linear algebra (highest-weight kernels plus lowering)
//! and cached.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::{One, Zero};

use crate::rational::{binomial, format_rat, rat, rat_i, Rat};
use crate::{Error, Result};

/// Weight data `(m, alpha)` of a simple gl2-module.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GLWeight {
    pub m: usize,
    pub alpha: Rat,
}

impl GLWeight {
    pub fn new(m: usize, alpha: Rat) -> Self {
        Self { m, alpha }
    }

    pub fn dim(&self) -> usize {
        self.m + 1
    }

    /// The dual module has the same highest weight and negated alpha.
    pub fn dual(&self) -> Self {
        Self {
            m: self.m,
            alpha: -self.alpha.clone(),
        }
    }

    /// Weight of the tensor product's summands: alphas add.
    pub fn tensor_summand(&self, other: &Self, k: usize) -> Result<Self> {
        if k > self.m.min(other.m) {
            return Err(Error::IndexOutOfRange {
                index: k,
                max: self.m.min(other.m),
            });
        }
        Ok(Self {
            m: self.m + other.m - 2 * k,
            alpha: &self.alpha + &other.alpha,
        })
    }
}

impl std::fmt::Display for GLWeight {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{},{}", self.m, format_rat(&self.alpha))
    }
}

/// An element of `U_m^alpha` as a coefficient vector over `v_0, ..., v_m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GLElement {
    pub weight: GLWeight,
    pub coeffs: Vec<Rat>,
}

impl GLElement {
    pub fn zero(weight: GLWeight) -> Self {
        let coeffs = vec![Rat::zero(); weight.dim()];
        Self { weight, coeffs }
    }

    pub fn basis(weight: GLWeight, i: usize) -> Self {
        let mut out = Self::zero(weight);
        out.coeffs[i] = Rat::one();
        out
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Rat::is_zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.weight, other.weight);
        Self {
            weight: self.weight.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&rat_i(-1)))
    }

    pub fn scale(&self, c: &Rat) -> Self {
        Self {
            weight: self.weight.clone(),
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }
}

impl std::fmt::Display for GLElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0 [{}]", self.weight);
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "{}*v{}", format_rat(c), i)?;
            first = false;
        }
        write!(f, " [{}]", self.weight)
    }
}

/// Sparse description of `E_pq` on `U_m^alpha`: entries `(to, from, coef)`.
///
/// Sharing this table between the plain and the function-coefficient
/// modules keeps the two action paths literally identical.
pub fn e_entries(p: usize, q: usize, w: &GLWeight) -> Vec<(usize, usize, Rat)> {
    assert!((1..=2).contains(&p) && (1..=2).contains(&q), "gl2 indices");
    let m = w.m;
    let mut out = Vec::with_capacity(m + 1);
    for i in 0..=m {
        match (p, q) {
            (1, 1) => {
                let c = (&w.alpha + rat_i(m as i64) - rat_i(2 * i as i64)) * rat(1, 2);
                if !c.is_zero() {
                    out.push((i, i, c));
                }
            }
            (2, 2) => {
                let c = (&w.alpha - rat_i(m as i64) + rat_i(2 * i as i64)) * rat(1, 2);
                if !c.is_zero() {
                    out.push((i, i, c));
                }
            }
            (1, 2) => {
                if i > 0 {
                    out.push((i - 1, i, rat_i((m - i + 1) as i64)));
                }
            }
            (2, 1) => {
                if i < m {
                    out.push((i + 1, i, rat_i((i + 1) as i64)));
                }
            }
            _ => unreachable!(),
        }
    }
    out
}

/// Action of `E_pq` on an element.
pub fn act_e(p: usize, q: usize, u: &GLElement) -> GLElement {
    let mut out = GLElement::zero(u.weight.clone());
    for (to, from, c) in e_entries(p, q, &u.weight) {
        out.coeffs[to] += &c * &u.coeffs[from];
    }
    out
}

/// Action of `E_pq` on the dual of `U_m^alpha` in the dual basis
/// `v_0*, ..., v_m*`: `(E phi)(v) = -phi(E v)`.
pub fn act_e_dual(p: usize, q: usize, primal: &GLWeight, phi: &[Rat]) -> Vec<Rat> {
    let mut out = vec![Rat::zero(); primal.dim()];
    for (to, from, c) in e_entries(p, q, primal) {
        // (E phi)_from = -c * phi_to
        out[from] -= &c * &phi[to];
    }
    out
}

/// The equivariant identification of `U_m^{-alpha}` with the dual of
/// `U_m^alpha`: `u_k -> (-1)^k C(m,k) v_{m-k}*`.
pub fn dual_iso(u: &GLElement) -> Vec<Rat> {
    let m = u.weight.m;
    let mut out = vec![Rat::zero(); m + 1];
    for (k, c) in u.coeffs.iter().enumerate() {
        let sign = if k % 2 == 0 { rat_i(1) } else { rat_i(-1) };
        out[m - k] = sign * binomial(m, k) * c;
    }
    out
}

/// An element of `U_m^alpha ⊗ U_n^beta` over the basis `v_i ⊗ v_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GLTensorElement {
    pub left: GLWeight,
    pub right: GLWeight,
    /// Row i, column j: coefficient of `v_i ⊗ v_j`.
    pub mat: Vec<Vec<Rat>>,
}

impl GLTensorElement {
    pub fn zero(left: GLWeight, right: GLWeight) -> Self {
        let mat = vec![vec![Rat::zero(); right.dim()]; left.dim()];
        Self { left, right, mat }
    }

    pub fn basis(left: GLWeight, right: GLWeight, i: usize, j: usize) -> Self {
        let mut out = Self::zero(left, right);
        out.mat[i][j] = Rat::one();
        out
    }

    pub fn pure(u: &GLElement, v: &GLElement) -> Self {
        let mut out = Self::zero(u.weight.clone(), v.weight.clone());
        for (i, a) in u.coeffs.iter().enumerate() {
            for (j, b) in v.coeffs.iter().enumerate() {
                out.mat[i][j] = a * b;
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.mat.iter().all(|row| row.iter().all(Rat::is_zero))
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!((&self.left, &self.right), (&other.left, &other.right));
        let mut out = self.clone();
        for (r, row) in other.mat.iter().enumerate() {
            for (c, v) in row.iter().enumerate() {
                out.mat[r][c] += v;
            }
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&rat_i(-1)))
    }

    pub fn scale(&self, c: &Rat) -> Self {
        let mut out = self.clone();
        for row in &mut out.mat {
            for v in row.iter_mut() {
                *v = &*v * c;
            }
        }
        out
    }

    fn flat(&self) -> Vec<Rat> {
        self.mat.iter().flatten().cloned().collect()
    }

    fn from_flat(left: GLWeight, right: GLWeight, v: &[Rat]) -> Self {
        let cols = right.dim();
        let mat = v.chunks(cols).map(|row| row.to_vec()).collect();
        Self { left, right, mat }
    }
}

/// Coproduct action of `E_pq` on a tensor element.
pub fn act_e_tensor(p: usize, q: usize, t: &GLTensorElement) -> GLTensorElement {
    let mut out = GLTensorElement::zero(t.left.clone(), t.right.clone());
    for (to, from, c) in e_entries(p, q, &t.left) {
        for j in 0..t.right.dim() {
            out.mat[to][j] += &c * &t.mat[from][j];
        }
    }
    for (to, from, c) in e_entries(p, q, &t.right) {
        for i in 0..t.left.dim() {
            out.mat[i][to] += &c * &t.mat[i][from];
        }
    }
    out
}

/// Multiplication map `U_m^alpha ⊗ U_n^beta -> U_{m+n}^{alpha+beta}`:
/// `v_i ⊗ v_j -> C(m,i) C(n,j) / C(m+n,i+j) · v_{i+j}` (the image of the
/// product of binary forms in the binomial basis). Surjective and
/// gl2-equivariant.
pub fn phi_multiply(t: &GLTensorElement) -> GLElement {
    let (m, n) = (t.left.m, t.right.m);
    let weight = GLWeight::new(m + n, &t.left.alpha + &t.right.alpha);
    let mut out = GLElement::zero(weight);
    for i in 0..=m {
        for j in 0..=n {
            if t.mat[i][j].is_zero() {
                continue;
            }
            let c = binomial(m, i) * binomial(n, j) / binomial(m + n, i + j);
            out.coeffs[i + j] += c * &t.mat[i][j];
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Clebsch–Gordan tables
// ---------------------------------------------------------------------------

/// Precomputed decomposition data for `U_m ⊗ U_n` (independent of the
/// alpha parameters, which only shift diagonal actions uniformly).
#[derive(Debug)]
pub struct CgTable {
    m: usize,
    n: usize,
    /// Per summand k: matrix taking flat tensor coordinates to the
    /// `v`-basis of `U_{m+n-2k}`.
    project: Vec<Vec<Vec<Rat>>>,
    /// Per summand k: columns embedding the `v`-basis back into the tensor.
    embed: Vec<Vec<Vec<Rat>>>,
}

type CgCache = Mutex<HashMap<(usize, usize), Arc<CgTable>>>;

static CG_CACHE: OnceLock<CgCache> = OnceLock::new();

/// Looks up (building on first use) the decomposition table for `(m, n)`.
pub fn cg_table(m: usize, n: usize) -> Arc<CgTable> {
    let cache = CG_CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("cg cache poisoned");
    guard
        .entry((m, n))
        .or_insert_with(|| Arc::new(CgTable::build(m, n)))
        .clone()
}

impl CgTable {
    fn build(m: usize, n: usize) -> Self {
        // alpha plays no role in E12/E21, so any placeholder works here
        let wl = GLWeight::new(m, Rat::zero());
        let wr = GLWeight::new(n, Rat::zero());
        let dim = (m + 1) * (n + 1);
        let kmax = m.min(n);

        // Basis adapted to the decomposition: for each k the highest-weight
        // vector u_k (kernel of E12 in the weight space i+j = k, normalized
        // to coefficient 1 on v_0 ⊗ v_k), then its lowering orbit
        // E21^r u_k. Identifying E21^r u_k with r! v_r makes the summand
        // isomorphism intertwine all four E's.
        let mut columns: Vec<Vec<Rat>> = Vec::with_capacity(dim);
        let mut col_owner: Vec<(usize, usize)> = Vec::with_capacity(dim);
        for k in 0..=kmax {
            let u_k = highest_weight_vector(&wl, &wr, k);
            let mut cur = u_k;
            let top = m + n - 2 * k;
            for r in 0..=top {
                columns.push(cur.flat());
                col_owner.push((k, r));
                if r < top {
                    cur = act_e_tensor(2, 1, &cur);
                }
            }
        }
        assert_eq!(
            columns.len(),
            dim,
            "adapted basis must fill the tensor space"
        );

        // Invert the basis matrix: rows of the inverse read off adapted
        // coordinates from flat tensor coordinates.
        let basis: Vec<Vec<Rat>> = (0..dim)
            .map(|r| (0..dim).map(|c| columns[c][r].clone()).collect())
            .collect();
        let inv = dense::invert(&basis).expect("adapted basis is invertible");

        let mut project = Vec::with_capacity(kmax + 1);
        let mut embed = Vec::with_capacity(kmax + 1);
        for k in 0..=kmax {
            let top = m + n - 2 * k;
            let mut proj_rows = Vec::with_capacity(top + 1);
            let mut embed_cols = Vec::with_capacity(top + 1);
            for r in 0..=top {
                let col_idx = col_owner
                    .iter()
                    .position(|&(kk, rr)| kk == k && rr == r)
                    .unwrap();
                // E21^r v_0 = r! v_r, so the v_r coordinate is r! times the
                // adapted coordinate, and the embedding divides it back out.
                let rfact = factorial(r);
                proj_rows.push(inv[col_idx].iter().map(|c| c * &rfact).collect::<Vec<_>>());
                let inv_rfact = Rat::one() / &rfact;
                embed_cols.push(
                    columns[col_idx]
                        .iter()
                        .map(|c| c * &inv_rfact)
                        .collect::<Vec<_>>(),
                );
            }
            project.push(proj_rows);
            embed.push(embed_cols);
        }
        Self {
            m,
            n,
            project,
            embed,
        }
    }

    pub fn summands(&self) -> usize {
        self.m.min(self.n) + 1
    }
}

fn factorial(r: usize) -> Rat {
    let mut acc = Rat::one();
    for i in 1..=r {
        acc *= rat_i(i as i64);
    }
    acc
}

/// The highest-weight vector of summand k: the one-dimensional kernel of
/// E12 on the weight space `{v_i ⊗ v_{k-i}}`, normalized to coefficient 1
/// on `v_0 ⊗ v_k`.
fn highest_weight_vector(wl: &GLWeight, wr: &GLWeight, k: usize) -> GLTensorElement {
    let (m, n) = (wl.m, wr.m);
    debug_assert!(k <= m.min(n));
    let space: Vec<(usize, usize)> = (0..=k.min(m))
        .filter(|&i| k - i <= n)
        .map(|i| (i, k - i))
        .collect();
    // rows: coefficients of E12(v_i ⊗ v_{k-i}) on the weight space k-1
    let target: Vec<(usize, usize)> = if k == 0 {
        Vec::new()
    } else {
        (0..=(k - 1).min(m))
            .filter(|&i| k - 1 - i <= n)
            .map(|i| (i, k - 1 - i))
            .collect()
    };
    let mut system = vec![vec![Rat::zero(); space.len()]; target.len()];
    for (col, &(i, j)) in space.iter().enumerate() {
        let basis = GLTensorElement::basis(wl.clone(), wr.clone(), i, j);
        let image = act_e_tensor(1, 2, &basis);
        for (row, &(ti, tj)) in target.iter().enumerate() {
            system[row][col] = image.mat[ti][tj].clone();
        }
    }
    let kernel = dense::nullspace(&system, space.len());
    assert_eq!(
        kernel.len(),
        1,
        "highest-weight space of summand {k} must be one-dimensional"
    );
    let mut vec = kernel.into_iter().next().unwrap();
    // normalize the v_0 ⊗ v_k coefficient to 1
    let pivot_pos = space
        .iter()
        .position(|&(i, _)| i == 0)
        .expect("v_0 ⊗ v_k in range");
    let pivot = vec[pivot_pos].clone();
    assert!(
        !pivot.is_zero(),
        "highest-weight vector has full support on v_0 ⊗ v_k"
    );
    for entry in &mut vec {
        *entry = &*entry / &pivot;
    }
    let mut out = GLTensorElement::zero(wl.clone(), wr.clone());
    for (&(i, j), c) in space.iter().zip(vec) {
        out.mat[i][j] = c;
    }
    out
}

/// Component of a tensor element in the k-th summand `U_{m+n-2k}^{a+b}`.
pub fn cg_project(k: usize, t: &GLTensorElement) -> Result<GLElement> {
    let kmax = t.left.m.min(t.right.m);
    if k > kmax {
        return Err(Error::IndexOutOfRange {
            index: k,
            max: kmax,
        });
    }
    let table = cg_table(t.left.m, t.right.m);
    let weight = t.left.tensor_summand(&t.right, k)?;
    let flat = t.flat();
    let coeffs = table.project[k]
        .iter()
        .map(|row| row.iter().zip(&flat).map(|(a, b)| a * b).sum())
        .collect();
    Ok(GLElement { weight, coeffs })
}

/// Inclusion of the k-th summand back into the tensor product.
pub fn cg_embed(
    k: usize,
    u: &GLElement,
    left: &GLWeight,
    right: &GLWeight,
) -> Result<GLTensorElement> {
    let kmax = left.m.min(right.m);
    if k > kmax {
        return Err(Error::IndexOutOfRange {
            index: k,
            max: kmax,
        });
    }
    let table = cg_table(left.m, right.m);
    let dim = (left.m + 1) * (right.m + 1);
    let mut flat = vec![Rat::zero(); dim];
    for (r, c) in u.coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        for (pos, e) in table.embed[k][r].iter().enumerate() {
            flat[pos] += e * c;
        }
    }
    Ok(GLTensorElement::from_flat(
        left.clone(),
        right.clone(),
        &flat,
    ))
}

/// The sl2 Casimir `ef + fe + h^2/2` with `e = E12`, `f = E21`,
/// `h = E11 - E22`; acts on `U_m` by the scalar `m^2/2 + m`.
pub fn casimir(u: &GLElement) -> GLElement {
    let h = |v: &GLElement| act_e(1, 1, v).sub(&act_e(2, 2, v));
    let ef = act_e(1, 2, &act_e(2, 1, u));
    let fe = act_e(2, 1, &act_e(1, 2, u));
    let hh = h(&h(u)).scale(&rat(1, 2));
    ef.add(&fe).add(&hh)
}

/// Casimir on a tensor element, through the coproduct action.
pub fn casimir_tensor(t: &GLTensorElement) -> GLTensorElement {
    let h = |v: &GLTensorElement| act_e_tensor(1, 1, v).sub(&act_e_tensor(2, 2, v));
    let ef = act_e_tensor(1, 2, &act_e_tensor(2, 1, t));
    let fe = act_e_tensor(2, 1, &act_e_tensor(1, 2, t));
    let hh = h(&h(t)).scale(&rat(1, 2));
    ef.add(&fe).add(&hh)
}

/// Spectral projector onto summand k built from the Casimir alone:
/// `Π_k = Π_{j≠k} (C - c_j) / (c_k - c_j)`. Independent route used to
/// cross-check the linear-algebra tables.
pub fn casimir_project(k: usize, t: &GLTensorElement) -> Result<GLTensorElement> {
    let kmax = t.left.m.min(t.right.m);
    if k > kmax {
        return Err(Error::IndexOutOfRange {
            index: k,
            max: kmax,
        });
    }
    let eigen = |j: usize| {
        let mj = (t.left.m + t.right.m - 2 * j) as i64;
        rat(mj * mj, 2) + rat_i(mj)
    };
    let mut acc = t.clone();
    for j in 0..=kmax {
        if j == k {
            continue;
        }
        let shifted = casimir_tensor(&acc).sub(&acc.scale(&eigen(j)));
        let denom = eigen(k) - eigen(j);
        acc = shifted.scale(&(Rat::one() / denom));
    }
    Ok(acc)
}

// ---------------------------------------------------------------------------
// Small dense exact solvers (used only for the CG tables)
// ---------------------------------------------------------------------------

mod dense {
    use super::Rat;
    use num_traits::{One, Zero};

    /// Gauss-Jordan inverse; `None` when singular.
    pub fn invert(a: &[Vec<Rat>]) -> Option<Vec<Vec<Rat>>> {
        let n = a.len();
        let mut work: Vec<Vec<Rat>> = a
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let mut r = row.clone();
                r.extend((0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }));
                r
            })
            .collect();
        for col in 0..n {
            let pivot = (col..n).find(|&r| !work[r][col].is_zero())?;
            work.swap(col, pivot);
            let inv = Rat::one() / work[col][col].clone();
            for v in &mut work[col] {
                *v = &*v * &inv;
            }
            for r in 0..n {
                if r != col && !work[r][col].is_zero() {
                    let factor = work[r][col].clone();
                    for c in 0..2 * n {
                        let delta = &factor * &work[col][c];
                        work[r][c] -= delta;
                    }
                }
            }
        }
        Some(work.into_iter().map(|row| row[n..].to_vec()).collect())
    }

    /// Basis of the nullspace of an r x c system.
    pub fn nullspace(a: &[Vec<Rat>], cols: usize) -> Vec<Vec<Rat>> {
        let mut work: Vec<Vec<Rat>> = a.to_vec();
        let rows = work.len();
        let mut pivot_cols = Vec::new();
        let mut rank = 0;
        for col in 0..cols {
            let Some(p) = (rank..rows).find(|&r| !work[r][col].is_zero()) else {
                continue;
            };
            work.swap(rank, p);
            let inv = Rat::one() / work[rank][col].clone();
            for v in &mut work[rank] {
                *v = &*v * &inv;
            }
            for r in 0..rows {
                if r != rank && !work[r][col].is_zero() {
                    let factor = work[r][col].clone();
                    for c in 0..cols {
                        let delta = &factor * &work[rank][c];
                        work[r][c] -= delta;
                    }
                }
            }
            pivot_cols.push(col);
            rank += 1;
        }
        let mut basis = Vec::new();
        for free in 0..cols {
            if pivot_cols.contains(&free) {
                continue;
            }
            let mut v = vec![Rat::zero(); cols];
            v[free] = Rat::one();
            for (r, &pc) in pivot_cols.iter().enumerate() {
                v[pc] = -work[r][free].clone();
            }
            basis.push(v);
        }
        basis
    }

    /// Rank of a rational matrix.
    pub fn rank(a: &[Vec<Rat>]) -> usize {
        if a.is_empty() {
            return 0;
        }
        let cols = a[0].len();
        let mut work = a.to_vec();
        let rows = work.len();
        let mut rank = 0;
        for col in 0..cols {
            let Some(p) = (rank..rows).find(|&r| !work[r][col].is_zero()) else {
                continue;
            };
            work.swap(rank, p);
            let inv = Rat::one() / work[rank][col].clone();
            for v in &mut work[rank] {
                *v = &*v * &inv;
            }
            for r in 0..rows {
                if r != rank && !work[r][col].is_zero() {
                    let factor = work[r][col].clone();
                    for c in 0..cols {
                        let delta = &factor * &work[rank][c];
                        work[r][c] -= delta;
                    }
                }
            }
            rank += 1;
        }
        rank
    }
}

pub use dense::rank as dense_rank;
