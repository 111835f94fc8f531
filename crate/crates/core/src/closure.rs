//! Finite certification engine.
//!
//! Computes the smallest subspace of a truncation of `A_(z) ⊗ U_m^alpha`
//! that contains given generators and is closed (inside the truncation)
//! under the six operators generating the combined ring and vector-field
//! action: multiplication by x, y, z and the three rotation fields. From
//! the resulting echelon basis it reports boundedness or density evidence.
//!
//! Operator images that leave the window are discarded (and counted), so
//! the computed space is a lower bound for the true submodule intersected
//! with the window. A closure is labeled bounded only when its minimum
//! degree survives two window enlargements; that stabilization policy is
//! evidence, not proof, and is reported as such.

use std::collections::{HashMap, HashSet};

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::avmod::TMElement;
use crate::glmod::GLWeight;
use crate::rational::{rat_i, Rat};
use crate::ring::{LocalizedFun, SphereFun};
use crate::vectorfields::VField;
use crate::{Error, Result};

/// Truncation parameters: z-degree at least `-k`, numerator total degree
/// (after clearing `z^{-k}`) at most `d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct Window {
    /// Lowest allowed z-degree is `-k`.
    #[serde(rename = "K")]
    pub k: i64,
    /// Maximum total degree of numerator monomials.
    #[serde(rename = "D")]
    pub d: u32,
}

impl Window {
    pub fn new(k: i64, d: u32) -> Self {
        Self { k, d }
    }

    pub fn enlarged(&self, dk: i64, dd: u32) -> Self {
        Self {
            k: self.k + dk,
            d: self.d + dd,
        }
    }
}

impl std::fmt::Display for Window {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(K={}, D={})", self.k, self.d)
    }
}

/// Sizes the global worker pool used by parallel closure runs. Call at
/// most once, before the first parallel run.
pub fn configure_worker_threads(n: usize) -> std::result::Result<(), String> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| e.to_string())
}

/// Engine knobs. The defaults match the documented policy.
#[derive(Debug, Clone, Copy)]
pub struct ClosureOptions {
    /// Hard cap on the basis dimension.
    pub dim_cap: usize,
    /// Evaluate operator applications to distinct rows in parallel.
    /// Insertion stays serialized, so results are identical either way.
    pub parallel: bool,
}

impl Default for ClosureOptions {
    fn default() -> Self {
        Self {
            dim_cap: 20_000,
            parallel: false,
        }
    }
}

/// Coordinate layout of a window truncation: canonical monomials ordered
/// by z-degree, then graded degree on x, y, with the module basis index
/// varying fastest.
#[derive(Debug, Clone)]
struct Layout {
    weight: GLWeight,
    window: Window,
    monomials: Vec<(u32, u32, u8)>,
    index: HashMap<(u32, u32, u8), usize>,
}

impl Layout {
    fn new(weight: GLWeight, window: Window) -> Self {
        let mut monomials = Vec::new();
        for e in 0..=1u8 {
            for total in e as u32..=window.d {
                let xy = total - e as u32;
                for a in (0..=xy).rev() {
                    monomials.push((a, xy - a, e));
                }
            }
        }
        let index = monomials.iter().enumerate().map(|(i, &m)| (m, i)).collect();
        Self {
            weight,
            window,
            monomials,
            index,
        }
    }

    fn coord(&self, mono: (u32, u32, u8), j: usize) -> Option<usize> {
        self.index.get(&mono).map(|&i| i * self.weight.dim() + j)
    }

    /// Coordinates of an element, or the reason it does not fit.
    fn to_coords(&self, v: &TMElement) -> Result<SparseVec> {
        let mut out: Vec<(usize, Rat)> = Vec::new();
        for (j, g) in v.coeffs().iter().enumerate() {
            if g.is_zero() {
                continue;
            }
            let shifted = g.z_shift(self.window.k);
            if !shifted.is_polynomial() {
                return Err(Error::OutsideWindow(format!(
                    "z-degree below {} in component {j}",
                    -self.window.k
                )));
            }
            for (c, a, b, e) in shifted.num().terms() {
                if a + b + e > self.window.d {
                    return Err(Error::OutsideWindow(format!(
                        "numerator degree {} above {}",
                        a + b + e,
                        self.window.d
                    )));
                }
                let idx = self
                    .coord((a, b, e as u8), j)
                    .expect("monomial within window");
                out.push((idx, c));
            }
        }
        out.sort_by_key(|&(i, _)| i);
        Ok(out)
    }

    fn element_of(&self, v: &SparseVec) -> TMElement {
        let dim = self.weight.dim();
        let mut nums = vec![Vec::new(); dim];
        for &(idx, ref c) in v {
            let (a, b, e) = self.monomials[idx / dim];
            nums[idx % dim].push((c.clone(), a, b, e as u32));
        }
        let coeffs = nums
            .into_iter()
            .map(|terms| {
                LocalizedFun::from_sphere(SphereFun::from_terms(terms)).z_shift(-self.window.k)
            })
            .collect();
        TMElement::new(self.weight.clone(), coeffs).expect("window coefficients are z-local")
    }
}

type SparseVec = Vec<(usize, Rat)>;

fn axpy(target: &SparseVec, source: &SparseVec, factor: &Rat) -> SparseVec {
    let mut out = Vec::with_capacity(target.len() + source.len());
    let (mut i, mut j) = (0, 0);
    while i < target.len() || j < source.len() {
        match (target.get(i), source.get(j)) {
            (Some(&(ti, ref tc)), Some(&(si, ref sc))) => {
                use std::cmp::Ordering::*;
                match ti.cmp(&si) {
                    Less => {
                        out.push((ti, tc.clone()));
                        i += 1;
                    }
                    Greater => {
                        out.push((si, sc * factor));
                        j += 1;
                    }
                    Equal => {
                        let c = tc + sc * factor;
                        if !c.is_zero() {
                            out.push((ti, c));
                        }
                        i += 1;
                        j += 1;
                    }
                }
            }
            (Some(&(ti, ref tc)), None) => {
                out.push((ti, tc.clone()));
                i += 1;
            }
            (None, Some(&(si, ref sc))) => {
                out.push((si, sc * factor));
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    out
}

/// Reduced echelon basis over ℚ with sparse rows keyed by pivot column.
#[derive(Debug, Clone, Default)]
struct Echelon {
    rows: std::collections::BTreeMap<usize, SparseVec>,
}

impl Echelon {
    fn len(&self) -> usize {
        self.rows.len()
    }

    /// Canonical normal form against the current rows.
    fn normal_form(&self, mut v: SparseVec) -> SparseVec {
        let mut i = 0;
        while i < v.len() {
            let (coord, c) = v[i].clone();
            if let Some(row) = self.rows.get(&coord) {
                let factor = -c;
                v = axpy(&v, row, &factor);
            } else {
                i += 1;
            }
        }
        v
    }

    /// Inserts a vector, returning whether the dimension grew.
    fn insert(&mut self, v: SparseVec) -> bool {
        let mut v = self.normal_form(v);
        let Some((pivot, lead)) = v.first().cloned() else {
            return false;
        };
        let inv = Rat::one() / lead;
        for (_, c) in v.iter_mut() {
            *c = &*c * &inv;
        }
        // keep the basis fully reduced
        let updates: Vec<(usize, Rat)> = self
            .rows
            .iter()
            .filter_map(|(&p, row)| {
                row.binary_search_by_key(&pivot, |&(i, _)| i)
                    .ok()
                    .map(|pos| (p, row[pos].1.clone()))
            })
            .collect();
        for (p, c) in updates {
            let row = self.rows.get_mut(&p).unwrap();
            *row = axpy(row, &v, &-c);
        }
        self.rows.insert(pivot, v);
        true
    }

    fn contains(&self, v: &SparseVec) -> bool {
        self.normal_form(v.clone()).is_empty()
    }

    fn canonical_rows(&self) -> Vec<SparseVec> {
        self.rows.values().cloned().collect()
    }
}

/// Echelon basis of a truncated subspace, with its window and weight.
#[derive(Debug, Clone)]
pub struct SubspaceBasis {
    layout: Layout,
    echelon: Echelon,
}

impl SubspaceBasis {
    pub fn window(&self) -> Window {
        self.layout.window
    }

    pub fn weight(&self) -> &GLWeight {
        &self.layout.weight
    }

    pub fn dimension(&self) -> usize {
        self.echelon.len()
    }

    /// The basis rows as module elements, in pivot order.
    pub fn rows(&self) -> Vec<TMElement> {
        self.echelon
            .canonical_rows()
            .iter()
            .map(|r| self.layout.element_of(r))
            .collect()
    }

    /// Minimum filtration degree over the basis rows; because degree is a
    /// filtration this equals the infimum over the spanned subspace.
    pub fn min_degree(&self) -> Result<i64> {
        let mut best: Option<i64> = None;
        for row in self.rows() {
            let d = row.deg()?;
            best = Some(best.map_or(d, |b| b.min(d)));
        }
        best.ok_or(Error::ZeroInput)
    }

    /// Membership by echelon reduction. Errors when the element does not
    /// fit in the window.
    pub fn membership(&self, v: &TMElement) -> Result<bool> {
        let coords = self.layout.to_coords(v)?;
        Ok(self.echelon.contains(&coords))
    }
}

impl PartialEq for SubspaceBasis {
    fn eq(&self, other: &Self) -> bool {
        self.layout.window == other.layout.window
            && self.layout.weight == other.layout.weight
            && self.echelon.rows == other.echelon.rows
    }
}
impl Eq for SubspaceBasis {}

/// Certification outcome for a closure run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClosureStatus {
    /// Minimum degree, stable under two window enlargements.
    Bounded(i64),
    /// The closure contains all of `z^N A ⊗ U` inside the window.
    DenseWitness(i64),
    Inconclusive,
}

impl std::fmt::Display for ClosureStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ClosureStatus::Bounded(d) => write!(f, "Bounded({d})"),
            ClosureStatus::DenseWitness(n) => write!(f, "DenseWitness({n})"),
            ClosureStatus::Inconclusive => write!(f, "Inconclusive"),
        }
    }
}

/// Result of [`generate`]: the basis at the requested window plus the
/// certification verdict and counters.
#[derive(Debug, Clone)]
pub struct ClosureReport {
    pub basis: SubspaceBasis,
    pub min_degree: i64,
    pub status: ClosureStatus,
    pub window: Window,
    /// Operator applications across the base and stabilization runs.
    pub ops_applied: usize,
    /// Images discarded for leaving a window.
    pub clipped: usize,
    /// Smallest N with a density witness at the base window, if any.
    pub density_witness: Option<i64>,
}

impl ClosureReport {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "status": self.status.to_string(),
            "min_degree": self.min_degree,
            "dimension": self.basis.dimension(),
            "window": self.window,
            "ops_applied": self.ops_applied,
            "clipped": self.clipped,
            "density_witness": self.density_witness,
        })
    }
}

/// The six operators: multiplication by each coordinate and the three
/// rotation fields, in a fixed order.
fn apply_ops(v: &TMElement) -> Vec<TMElement> {
    let [d12, d23, d31] = VField::deltas();
    vec![
        v.a_mult(&SphereFun::coordinate(crate::ring::Coord::X)),
        v.a_mult(&SphereFun::coordinate(crate::ring::Coord::Y)),
        v.a_mult(&SphereFun::coordinate(crate::ring::Coord::Z)),
        v.vf_act(&d12),
        v.vf_act(&d23),
        v.vf_act(&d31),
    ]
}

struct FixpointStats {
    ops_applied: usize,
    clipped: usize,
}

/// Core fixpoint: batch rounds over the canonical rows make the result a
/// function of the spanned subspace alone, so generator order and
/// scheduling cannot change it.
fn fixpoint(
    gens: &[TMElement],
    layout: &Layout,
    opts: &ClosureOptions,
) -> Result<(Echelon, FixpointStats)> {
    let mut echelon = Echelon::default();
    let mut stats = FixpointStats {
        ops_applied: 0,
        clipped: 0,
    };
    for g in gens {
        let coords = layout.to_coords(g)?;
        echelon.insert(coords);
    }
    let mut processed: HashSet<SparseVec> = HashSet::new();
    loop {
        let todo: Vec<SparseVec> = echelon
            .canonical_rows()
            .into_iter()
            .filter(|r| !processed.contains(r))
            .collect();
        if todo.is_empty() {
            break;
        }
        let images: Vec<Vec<TMElement>> = if opts.parallel {
            todo.par_iter()
                .map(|row| apply_ops(&layout.element_of(row)))
                .collect()
        } else {
            todo.iter()
                .map(|row| apply_ops(&layout.element_of(row)))
                .collect()
        };
        for row in &todo {
            processed.insert(row.clone());
        }
        for group in images {
            for im in group {
                stats.ops_applied += 1;
                if im.is_zero() {
                    continue;
                }
                match layout.to_coords(&im) {
                    Ok(coords) => {
                        echelon.insert(coords);
                        if echelon.len() > opts.dim_cap {
                            return Err(Error::WindowOverflow(opts.dim_cap));
                        }
                    }
                    Err(Error::OutsideWindow(_)) => stats.clipped += 1,
                    Err(e) => return Err(e),
                }
            }
        }
    }
    Ok((echelon, stats))
}

/// Echelon basis of the plain span of some elements, with no operator
/// closure. Useful as a baseline: multiplying every generator by z shifts
/// this basis's minimum degree by exactly one, while a closure may
/// regenerate lower degrees.
pub fn span_basis(gens: &[TMElement], window: Window) -> Result<SubspaceBasis> {
    let weight = check_generators(gens)?;
    let layout = Layout::new(weight, window);
    let mut echelon = Echelon::default();
    for g in gens {
        echelon.insert(layout.to_coords(g)?);
    }
    Ok(SubspaceBasis { layout, echelon })
}

/// Closure basis at a single window, without the stabilization policy.
pub fn closure_basis(
    gens: &[TMElement],
    window: Window,
    opts: &ClosureOptions,
) -> Result<(SubspaceBasis, usize, usize)> {
    let weight = check_generators(gens)?;
    let layout = Layout::new(weight, window);
    let (echelon, stats) = fixpoint(gens, &layout, opts)?;
    Ok((
        SubspaceBasis { layout, echelon },
        stats.ops_applied,
        stats.clipped,
    ))
}

fn check_generators(gens: &[TMElement]) -> Result<GLWeight> {
    let mut weight = None;
    for g in gens {
        if g.is_zero() {
            continue;
        }
        match &weight {
            None => weight = Some(g.weight().clone()),
            Some(w) if w == g.weight() => {}
            Some(w) => return Err(Error::WeightMismatch(w.to_string(), g.weight().to_string())),
        }
    }
    weight.ok_or(Error::EmptyGenerators)
}

/// Full closure run: fixpoint at the requested window, then the
/// stabilization and density checks that decide the status.
pub fn generate(
    gens: &[TMElement],
    window: Window,
    opts: &ClosureOptions,
) -> Result<ClosureReport> {
    let (basis, mut ops_applied, mut clipped) = closure_basis(gens, window, opts)?;
    let min_degree = basis.min_degree()?;

    let mut stable = true;
    for step in 1..=2i64 {
        let bigger = window.enlarged(2 * step, 2 * step as u32);
        let (b, ops, cl) = closure_basis(gens, bigger, opts)?;
        ops_applied += ops;
        clipped += cl;
        if b.min_degree()? != min_degree {
            stable = false;
            break;
        }
    }

    let density_witness = smallest_density_witness(&basis);
    let status = if stable {
        ClosureStatus::Bounded(min_degree)
    } else if let Some(n) = density_witness {
        ClosureStatus::DenseWitness(n)
    } else {
        ClosureStatus::Inconclusive
    };
    Ok(ClosureReport {
        basis,
        min_degree,
        status,
        window,
        ops_applied,
        clipped,
        density_witness,
    })
}

/// True when every `z^N μ ⊗ v_i` that fits in the window lies in the
/// span — a finite witness for containing `z^N A ⊗ U`.
///
/// The monomials checked are those with `deg μ <= D - N - K`: that is
/// exactly the set for which `z^N μ` fits the window, since clearing
/// `z^{-K}` costs `N + K` in numerator degree.
pub fn density_witness(basis: &SubspaceBasis, n: i64) -> bool {
    let window = basis.window();
    let margin = window.d as i64 - n - window.k;
    if margin < 0 || n < -window.k {
        return false;
    }
    for (mu, j) in witness_monomials(basis.weight(), margin as u32) {
        let elem = TMElement::single(
            basis.weight().clone(),
            j,
            LocalizedFun::z_power(n).mul_sphere(&mu),
        )
        .expect("witness element is well-formed");
        match basis.membership(&elem) {
            Ok(true) => {}
            _ => return false,
        }
    }
    true
}

fn witness_monomials(weight: &GLWeight, max_deg: u32) -> Vec<(SphereFun, usize)> {
    let mut out = Vec::new();
    for e in 0..=1u32 {
        for total in e..=max_deg {
            let xy = total - e;
            for a in 0..=xy {
                let mu = SphereFun::monomial(rat_i(1), a, xy - a, e);
                for j in 0..weight.dim() {
                    out.push((mu.clone(), j));
                }
            }
        }
    }
    out
}

fn smallest_density_witness(basis: &SubspaceBasis) -> Option<i64> {
    let window = basis.window();
    (-window.k..=window.d as i64 - window.k).find(|&n| density_witness(basis, n))
}

/// Desk-scale probe for the uniqueness of simple submodules: both closures
/// must agree on `z^N A ⊗ U` for the smallest N at which either certifies
/// a density witness.
pub fn uniqueness_probe(
    gens_a: &[TMElement],
    gens_b: &[TMElement],
    window: Window,
    opts: &ClosureOptions,
) -> Result<bool> {
    let wa = check_generators(gens_a)?;
    let wb = check_generators(gens_b)?;
    if wa != wb {
        return Err(Error::WeightMismatch(wa.to_string(), wb.to_string()));
    }
    let (basis_a, _, _) = closure_basis(gens_a, window, opts)?;
    let (basis_b, _, _) = closure_basis(gens_b, window, opts)?;
    for n in -window.k..=(window.d as i64 - window.k) {
        let in_a = density_witness(&basis_a, n);
        let in_b = density_witness(&basis_b, n);
        if in_a || in_b {
            return Ok(in_a && in_b);
        }
    }
    Err(Error::Inconclusive(
        "no density witness in either closure".into(),
    ))
}

/// Tests whether `z^j A ⊗ U` is invariant under all six operators inside
/// the window. Probe elements keep a 2-degree margin so that no operator
/// image can leave the window and hide a violation.
pub fn invariance_probe(weight: &GLWeight, j: i64, window: Window) -> Result<bool> {
    if window.k < -j + 1 || (window.d as i64) < j + window.k + 2 {
        return Err(Error::OutsideWindow(format!(
            "window {window} too small to probe z^{j} A"
        )));
    }
    let layout = Layout::new(weight.clone(), window);
    // span of everything in z^j A ⊗ U that fits the window
    let mut target = Echelon::default();
    let full_margin = (window.d as i64 - j - window.k) as u32;
    for (mu, idx) in witness_monomials(weight, full_margin) {
        let elem = TMElement::single(
            weight.clone(),
            idx,
            LocalizedFun::z_power(j).mul_sphere(&mu),
        )
        .expect("window element");
        target.insert(layout.to_coords(&elem)?);
    }
    let probe_margin = full_margin.saturating_sub(2);
    for (mu, idx) in witness_monomials(weight, probe_margin) {
        let elem = TMElement::single(
            weight.clone(),
            idx,
            LocalizedFun::z_power(j).mul_sphere(&mu),
        )
        .expect("window element");
        for im in apply_ops(&elem) {
            if im.is_zero() {
                continue;
            }
            let coords = layout.to_coords(&im)?;
            if !target.contains(&coords) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
