//! Formal generators `u_m, c, c', c''`, polynomials in them, and the canonical
//! rewriting of Chern monomials into those generators.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// An odd-index Chern symbol `c_{k,block}` (`k` odd, `block` 1-based), ordered
/// by block first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OddSlot {
    pub block: usize,
    pub k: usize,
}

/// A Chern symbol `c_{k,block}` of the polynomial ring `Z[c_{r,j}]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ChernSymbol {
    pub block: usize,
    pub k: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    U,
    C { k: usize, block: usize },
    CPrime(OddSlot),
    /// Stored with the smaller slot first.
    CDouble(OddSlot, OddSlot),
}

impl Generator {
    pub fn c_double(a: OddSlot, b: OddSlot) -> Generator {
        if a <= b {
            Generator::CDouble(a, b)
        } else {
            Generator::CDouble(b, a)
        }
    }

    /// Cohomological degree.
    pub fn degree(&self, m: usize) -> usize {
        match *self {
            Generator::U => m,
            Generator::C { k, .. } => 2 * k,
            Generator::CPrime(s) => m + 2 * s.k,
            Generator::CDouble(a, b) => 2 * (a.k + b.k),
        }
    }

    pub fn to_text(&self, m: usize) -> String {
        match self {
            Generator::U => format!("u_{m}"),
            g => g.to_string(),
        }
    }

    pub fn to_latex(&self, m: usize) -> String {
        match *self {
            Generator::U => format!("u_{{{m}}}"),
            Generator::C { k, block } => format!("c_{{{k},{block}}}"),
            Generator::CPrime(s) => format!("c'_{{{},{}}}", s.k, s.block),
            Generator::CDouble(a, b) => {
                format!("c''_{{{},{},{},{}}}", a.k, b.k, a.block, b.block)
            }
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Generator::U => write!(f, "u_m"),
            Generator::C { k, block } => write!(f, "c_{k},{block}"),
            Generator::CPrime(s) => write!(f, "c'_{},{}", s.k, s.block),
            Generator::CDouble(a, b) => write!(f, "c''_{},{},{},{}", a.k, b.k, a.block, b.block),
        }
    }
}

impl Serialize for Generator {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Generator → exponent, zero exponents omitted.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GenMonomial(pub BTreeMap<Generator, u32>);

impl GenMonomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn single(g: Generator) -> Self {
        GenMonomial([(g, 1)].into())
    }

    pub fn mul(&self, rhs: &GenMonomial) -> GenMonomial {
        let mut out = self.0.clone();
        for (g, e) in &rhs.0 {
            *out.entry(*g).or_insert(0) += e;
        }
        GenMonomial(out)
    }

    pub fn degree(&self, m: usize) -> usize {
        self.0.iter().map(|(g, &e)| g.degree(m) * e as usize).sum()
    }

    fn render(&self, f: &mut String, latex: bool, m: usize) {
        if self.0.is_empty() {
            f.push('1');
            return;
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(g, &e)| {
                let base = if latex { g.to_latex(m) } else { g.to_text(m) };
                match (e, latex) {
                    (1, _) => base,
                    (_, true) => format!("{{{base}}}^{{{e}}}"),
                    (_, false) => format!("({base})^{e}"),
                }
            })
            .collect();
        f.push_str(&parts.join(if latex { " " } else { "*" }));
    }
}

/// Integer combination of generator monomials.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GenPolynomial(pub BTreeMap<GenMonomial, BigInt>);

impl GenPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(m: GenMonomial, c: i64) -> Self {
        let mut p = Self::zero();
        p.add_term(m, BigInt::from(c));
        p
    }

    pub fn add_term(&mut self, m: GenMonomial, c: BigInt) {
        let entry = self.0.entry(m.clone()).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.0.remove(&m);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sub(&self, rhs: &GenPolynomial) -> GenPolynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.0 {
            out.add_term(m.clone(), -c);
        }
        out
    }

    /// The common degree of all terms, or `None` if the polynomial is zero or
    /// not homogeneous.
    pub fn homogeneous_degree(&self, m: usize) -> Option<usize> {
        let mut degrees = self.0.keys().map(|t| t.degree(m));
        let first = degrees.next()?;
        degrees.all(|d| d == first).then_some(first)
    }

    /// Overall sign normalization: leading coefficient positive.
    pub fn normalized(mut self) -> GenPolynomial {
        if self.0.values().next().is_some_and(Signed::is_negative) {
            for c in self.0.values_mut() {
                *c = -c.clone();
            }
        }
        self
    }

    pub fn render(&self, latex: bool, m: usize) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (idx, (mono, c)) in self.0.iter().enumerate() {
            let neg = c.is_negative();
            match (idx, neg) {
                (0, true) => s.push('-'),
                (0, false) => {}
                (_, true) => s.push_str(" - "),
                (_, false) => s.push_str(" + "),
            }
            let a = c.abs();
            if !a.is_one() {
                s.push_str(&a.to_string());
                s.push_str(if latex { " " } else { "*" });
            }
            mono.render(&mut s, latex, m);
        }
        s
    }
}

/// A monomial `prod c_{k,block}` in the Chern symbols, as a multiset.
pub type ChernMonomial = Vec<ChernSymbol>;

/// Canonical rewriting of a Chern monomial into the `c, c', c''` generators.
///
/// Odd factors are sorted by `(block, k)`; with `with_u` the least one is fused
/// with `u` into `c'`, and the rest are paired consecutively into `c''`. Even
/// factors pass through as `c`.
pub fn pair_odd_factors(monomial: &[ChernSymbol], with_u: bool) -> Result<GenMonomial> {
    let mut odd: Vec<OddSlot> = Vec::new();
    let mut out = GenMonomial::one();
    for s in monomial {
        if s.k % 2 == 1 {
            odd.push(OddSlot { block: s.block, k: s.k });
        } else {
            out = out.mul(&GenMonomial::single(Generator::C { k: s.k, block: s.block }));
        }
    }
    odd.sort();
    if (odd.len() + usize::from(with_u)) % 2 == 1 {
        return Err(Error::ParityViolation(format!(
            "{} odd factor(s){}",
            odd.len(),
            if with_u { " together with u" } else { "" }
        )));
    }
    let mut rest = odd.as_slice();
    if with_u {
        out = out.mul(&GenMonomial::single(Generator::CPrime(rest[0])));
        rest = &rest[1..];
    }
    for pair in rest.chunks(2) {
        out = out.mul(&GenMonomial::single(Generator::c_double(pair[0], pair[1])));
    }
    Ok(out)
}

/// The monomials of `f_r`: coefficient of `t^r` in
/// `prod_j (1 + c_{1,j} t + ... + c_{n_j,j} t^{n_j})`, all with coefficient one.
pub fn f_monomials(parts: &[usize], r: usize) -> Vec<ChernMonomial> {
    fn rec(parts: &[usize], j: usize, left: usize, cur: &mut ChernMonomial, out: &mut Vec<ChernMonomial>) {
        if j == parts.len() {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for k in 0..=parts[j].min(left) {
            if k > 0 {
                cur.push(ChernSymbol { block: j + 1, k });
            }
            rec(parts, j + 1, left - k, cur, out);
            if k > 0 {
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(parts, 0, r, &mut Vec::new(), &mut out);
    out
}

/// Rewrites `extra * f_r` monomial by monomial.
pub fn synthesize(parts: &[usize], r: usize, extra: &[ChernSymbol], with_u: bool) -> Result<GenPolynomial> {
    let mut p = GenPolynomial::zero();
    for mono in f_monomials(parts, r) {
        let mut full = mono;
        full.extend_from_slice(extra);
        p.add_term(pair_odd_factors(&full, with_u)?, BigInt::one());
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(k: usize, block: usize) -> ChernSymbol {
        ChernSymbol { block, k }
    }

    fn slot(k: usize, block: usize) -> OddSlot {
        OddSlot { block, k }
    }

    #[test]
    fn pairing_examples() {
        let p = pair_odd_factors(&[c(1, 1), c(1, 2)], false).unwrap();
        assert_eq!(p, GenMonomial::single(Generator::CDouble(slot(1, 1), slot(1, 2))));
        assert_eq!(p.0.keys().next().unwrap().to_string(), "c''_1,1,1,2");

        let p = pair_odd_factors(&[c(1, 1), c(2, 1), c(1, 1)], false).unwrap();
        let expected = GenMonomial::single(Generator::CDouble(slot(1, 1), slot(1, 1)))
            .mul(&GenMonomial::single(Generator::C { k: 2, block: 1 }));
        assert_eq!(p, expected);

        let p = pair_odd_factors(&[c(1, 2)], true).unwrap();
        assert_eq!(p, GenMonomial::single(Generator::CPrime(slot(1, 2))));

        assert!(matches!(pair_odd_factors(&[c(1, 1)], false), Err(Error::ParityViolation(_))));
        assert!(pair_odd_factors(&[c(1, 1), c(3, 1)], true).is_err());
    }

    #[test]
    fn f_monomial_expansion() {
        assert_eq!(f_monomials(&[1, 1], 2), vec![vec![c(1, 1), c(1, 2)]]);
        assert_eq!(f_monomials(&[1, 2], 1).len(), 2);
        assert_eq!(f_monomials(&[1, 2], 3), vec![vec![c(1, 1), c(2, 2)]]);
        assert!(f_monomials(&[1, 1], 3).is_empty());
    }

    #[test]
    fn degrees_and_rendering() {
        assert_eq!(Generator::U.degree(3), 3);
        assert_eq!(Generator::C { k: 2, block: 1 }.degree(3), 4);
        assert_eq!(Generator::CPrime(slot(3, 1)).degree(2), 8);
        assert_eq!(Generator::CDouble(slot(1, 1), slot(3, 2)).degree(5), 8);
        let mut p = GenPolynomial::monomial(GenMonomial::single(Generator::U).mul(&GenMonomial::single(Generator::U)), 1);
        assert_eq!(p.render(false, 3), "(u_3)^2");
        assert_eq!(p.render(true, 3), "{u_{3}}^{2}");
        p.add_term(GenMonomial::single(Generator::CPrime(slot(1, 2))), BigInt::from(-2));
        assert_eq!(p.homogeneous_degree(3), None);
    }
}
