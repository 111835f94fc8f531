//! Sparse polynomials in the two free variables x, y over ℚ.
//!
//! These are the coefficient carriers for the canonical form of the sphere
//! ring: no quotient relation is visible at this level.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::rational::{format_rat, Rat};

/// `Σ c_{ab} x^a y^b` as a sparse exponent → coefficient map.
///
/// Invariant: no stored coefficient is zero.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PolyXY {
    terms: BTreeMap<(u32, u32), Rat>,
}

impl PolyXY {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rat::from_integer(1.into()))
    }

    pub fn constant(c: Rat) -> Self {
        Self::monomial(c, 0, 0)
    }

    pub fn monomial(c: Rat, a: u32, b: u32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((a, b), c);
        }
        Self { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True when the polynomial is a constant (possibly zero).
    pub fn as_constant(&self) -> Option<Rat> {
        match self.terms.len() {
            0 => Some(Rat::zero()),
            1 => self.terms.get(&(0, 0)).cloned(),
            _ => None,
        }
    }

    /// The single term `(c, a, b)` if there is exactly one.
    pub fn as_single_term(&self) -> Option<(Rat, u32, u32)> {
        if self.terms.len() == 1 {
            let ((a, b), c) = self.terms.iter().next().unwrap();
            Some((c.clone(), *a, *b))
        } else {
            None
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|&(a, b)| a + b).max()
    }

    pub fn add_term(&mut self, c: &Rat, a: u32, b: u32) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry((a, b)).or_insert_with(Rat::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&(a, b));
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for ((a, b), c) in &other.terms {
            out.add_term(c, *a, *b);
        }
        out
    }

    pub fn neg(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(k, c)| (*k, -c.clone())).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(k, v)| (*k, v * c)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for ((a1, b1), c1) in &self.terms {
            for ((a2, b2), c2) in &other.terms {
                out.add_term(&(c1 * c2), a1 + a2, b1 + b2);
            }
        }
        out
    }

    /// Multiplies by the monomial `x^a y^b`.
    pub fn shift(&self, a: u32, b: u32) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(&(i, j), c)| ((i + a, j + b), c.clone()))
                .collect(),
        }
    }

    /// Formal partial derivative in x.
    pub fn dx(&self) -> Self {
        let mut out = Self::zero();
        for (&(a, b), c) in &self.terms {
            if a > 0 {
                out.add_term(&(c * Rat::from_integer(a.into())), a - 1, b);
            }
        }
        out
    }

    /// Formal partial derivative in y.
    pub fn dy(&self) -> Self {
        let mut out = Self::zero();
        for (&(a, b), c) in &self.terms {
            if b > 0 {
                out.add_term(&(c * Rat::from_integer(b.into())), a, b - 1);
            }
        }
        out
    }

    /// True when every monomial has x-exponent >= 1 (resp. y for `by_x = false`).
    pub fn divisible_by_var(&self, by_x: bool) -> bool {
        self.terms
            .keys()
            .all(|&(a, b)| if by_x { a > 0 } else { b > 0 })
    }

    /// Divides every monomial by x (resp. y). Caller must check divisibility.
    pub fn divide_by_var(&self, by_x: bool) -> Self {
        debug_assert!(self.divisible_by_var(by_x));
        Self {
            terms: self
                .terms
                .iter()
                .map(|(&(a, b), c)| (if by_x { (a - 1, b) } else { (a, b - 1) }, c.clone()))
                .collect(),
        }
    }

    /// Leading term in graded lex order (total degree first, then x-exponent).
    fn leading_graded_lex(&self) -> Option<((u32, u32), Rat)> {
        self.terms
            .iter()
            .max_by_key(|(&(a, b), _)| (a + b, a))
            .map(|(k, c)| (*k, c.clone()))
    }

    /// Exact division by a fixed divisor, in graded lex order. Returns the
    /// quotient when the division is exact, `None` otherwise.
    ///
    /// A single polynomial is a Gröbner basis of the ideal it generates, so
    /// a nonzero remainder certifies non-membership.
    pub fn exact_div(&self, divisor: &Self) -> Option<Self> {
        let (lead_mono, lead_coef) = divisor.leading_graded_lex()?;
        let mut rem = self.clone();
        let mut quot = Self::zero();
        while let Some(((a, b), c)) = rem.leading_graded_lex() {
            if a < lead_mono.0 || b < lead_mono.1 {
                return None;
            }
            let (qa, qb) = (a - lead_mono.0, b - lead_mono.1);
            let qc = &c / &lead_coef;
            quot.add_term(&qc, qa, qb);
            rem = rem.sub(&divisor.mul(&Self::monomial(qc, qa, qb)));
        }
        Some(quot)
    }

    pub fn eval(&self, x: &Rat, y: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for (&(a, b), c) in &self.terms {
            acc += c * pow_rat(x, a) * pow_rat(y, b);
        }
        acc
    }
}

pub(crate) fn pow_rat(r: &Rat, e: u32) -> Rat {
    let mut acc = Rat::from_integer(1.into());
    for _ in 0..e {
        acc *= r;
    }
    acc
}

impl std::fmt::Display for PolyXY {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut keys: Vec<(u32, u32)> = self.terms.keys().copied().collect();
        keys.sort_by_key(|&(a, b)| (a + b, std::cmp::Reverse(a)));
        for (idx, (a, b)) in keys.iter().enumerate() {
            let c = &self.terms[&(*a, *b)];
            write_term(f, idx == 0, c, &monomial_string(*a, *b, false))?;
        }
        Ok(())
    }
}

/// Shared term rendering: sign handling plus `coef*monomial`.
pub(crate) fn write_term(
    f: &mut std::fmt::Formatter<'_>,
    first: bool,
    c: &Rat,
    mono: &str,
) -> std::fmt::Result {
    use num_traits::Signed;
    let neg = c.is_negative();
    if first {
        if neg {
            write!(f, "-")?;
        }
    } else if neg {
        write!(f, " - ")?;
    } else {
        write!(f, " + ")?;
    }
    let mag = c.abs();
    let coef_is_one = mag == Rat::from_integer(1.into());
    if mono.is_empty() {
        write!(f, "{}", format_rat(&mag))
    } else if coef_is_one {
        write!(f, "{mono}")
    } else {
        write!(f, "{}*{mono}", format_rat(&mag))
    }
}

/// `x^a*y^b` (optionally `*z`) with `^` only for exponents above 1.
pub(crate) fn monomial_string(a: u32, b: u32, with_z: bool) -> String {
    let mut parts = Vec::new();
    if a == 1 {
        parts.push("x".to_string());
    } else if a > 1 {
        parts.push(format!("x^{a}"));
    }
    if b == 1 {
        parts.push("y".to_string());
    } else if b > 1 {
        parts.push(format!("y^{b}"));
    }
    if with_z {
        parts.push("z".to_string());
    }
    parts.join("*")
}
