//! The coinvariant algebra `Q[x_1..x_n]/<e_1..e_n>` in its staircase monomial
//! basis, truncated above polynomial degree `d = dim_C CG(nu)`.
//!
//! `H^*(CG(nu); Q)` is the `S_nu`-invariant part, which vanishes above degree
//! `d`, so the truncation is exact for every invariant class while keeping
//! intermediate non-invariant products small.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use super::linalg::{EchelonBasis, SparseVector};
use crate::error::{Error, Result};
use crate::flagcomb::FlagType;

pub type Monomial = Vec<u8>;

/// Rational combination of staircase monomials (`a_i <= n - i`).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NormalFormClass {
    terms: BTreeMap<Monomial, BigRational>,
}

fn monomial_degree(a: &[u8]) -> usize {
    a.iter().map(|&e| e as usize).sum()
}

impl NormalFormClass {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(n: usize, c: BigRational) -> Self {
        let mut t = BTreeMap::new();
        if !c.is_zero() {
            t.insert(vec![0; n], c);
        }
        NormalFormClass { terms: t }
    }

    pub fn one(n: usize) -> Self {
        Self::constant(n, BigRational::one())
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, BigRational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, a: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(a) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (a, c) in &rhs.terms {
            out.add_term(a.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-BigRational::one())
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        NormalFormClass { terms: self.terms.iter().map(|(a, x)| (a.clone(), x * c)).collect() }
    }

    pub fn scale_int(&self, c: i64) -> Self {
        self.scale(&BigRational::from_integer(BigInt::from(c)))
    }

    /// Homogeneous component of polynomial degree `k` (cohomological `2k`).
    pub fn component(&self, k: usize) -> Self {
        NormalFormClass {
            terms: self
                .terms
                .iter()
                .filter(|(a, _)| monomial_degree(a) == k)
                .map(|(a, c)| (a.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn max_degree(&self) -> Option<usize> {
        self.terms.keys().map(|a| monomial_degree(a)).max()
    }

    pub fn is_homogeneous_of(&self, k: usize) -> bool {
        self.terms.keys().all(|a| monomial_degree(a) == k)
    }

    /// Coefficient of the constant monomial.
    pub fn constant_term(&self) -> BigRational {
        self.terms
            .iter()
            .find(|(a, _)| a.iter().all(|&e| e == 0))
            .map_or_else(BigRational::zero, |(_, c)| c.clone())
    }

    /// Negates every component of odd polynomial degree.
    pub fn conjugate(&self) -> Self {
        NormalFormClass {
            terms: self
                .terms
                .iter()
                .map(|(a, c)| (a.clone(), if monomial_degree(a) % 2 == 1 { -c } else { c.clone() }))
                .collect(),
        }
    }

    pub fn to_sparse<K: Ord>(&self, key: impl Fn(&Monomial) -> K) -> SparseVector<K, BigRational> {
        self.terms.iter().map(|(a, c)| (key(a), c.clone())).collect()
    }
}

fn write_rational(f: &mut fmt::Formatter<'_>, c: &BigRational, leading: bool, is_unit_monomial: bool) -> fmt::Result {
    let sign = if c.is_negative() { "-" } else { "+" };
    if leading {
        if c.is_negative() {
            write!(f, "-")?;
        }
    } else {
        write!(f, " {sign} ")?;
    }
    let a = c.abs();
    if !a.is_one() || is_unit_monomial {
        write!(f, "{a}")?;
    }
    Ok(())
}

impl fmt::Display for NormalFormClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (idx, (a, c)) in self.terms.iter().enumerate() {
            let unit = a.iter().all(|&e| e == 0);
            write_rational(f, c, idx == 0, unit)?;
            let mut first = true;
            for (i, &e) in a.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if !first || !c.abs().is_one() {
                    write!(f, "*")?;
                }
                first = false;
                write!(f, "x{}", i + 1)?;
                if e > 1 {
                    write!(f, "^{e}")?;
                }
            }
        }
        Ok(())
    }
}

impl Serialize for NormalFormClass {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Ring context for a fixed flag type: dimensions, reduction memo, and the
/// arithmetic on [`NormalFormClass`].
#[derive(Debug)]
pub struct StaircaseRing {
    nu: FlagType,
    n: usize,
    d: usize,
    memo: RwLock<HashMap<Monomial, Arc<NormalFormClass>>>,
}

impl StaircaseRing {
    pub fn new(nu: &FlagType) -> Self {
        StaircaseRing { nu: nu.clone(), n: nu.n(), d: nu.dim_complex(), memo: RwLock::new(HashMap::new()) }
    }

    pub fn flag_type(&self) -> &FlagType {
        &self.nu
    }

    pub fn num_variables(&self) -> usize {
        self.n
    }

    /// Polynomial degree of the top class, `d`.
    pub fn top_degree(&self) -> usize {
        self.d
    }

    pub fn is_staircase(&self, a: &[u8]) -> bool {
        a.iter().enumerate().all(|(k, &e)| (e as usize) < self.n - k)
    }

    pub fn one(&self) -> NormalFormClass {
        NormalFormClass::one(self.n)
    }

    pub fn constant(&self, c: i64) -> NormalFormClass {
        NormalFormClass::constant(self.n, BigRational::from_integer(BigInt::from(c)))
    }

    /// `x_i`, 1-based.
    pub fn variable(&self, i: usize) -> Result<NormalFormClass> {
        if i == 0 || i > self.n {
            return Err(Error::IndexOutOfRange(format!("variable x{i} with n = {}", self.n)));
        }
        let mut a = vec![0; self.n];
        a[i - 1] = 1;
        Ok(self.reduce_monomial(&a).as_ref().clone())
    }

    /// Normal form of an arbitrary monomial, zero above degree `d`.
    ///
    /// Uses `h_{n-i+1}(x_1..x_i) = 0`, whose leading term is `x_i^{n-i+1}` in
    /// lex order with `x_n > ... > x_1`; the largest offending variable is
    /// lowered first.
    pub fn reduce_monomial(&self, a: &[u8]) -> Arc<NormalFormClass> {
        if monomial_degree(a) > self.d {
            return Arc::new(NormalFormClass::zero());
        }
        if let Some(hit) = self.memo.read().expect("memo lock").get(a) {
            return Arc::clone(hit);
        }
        let result = match (0..self.n).rev().find(|&k| (a[k] as usize) >= self.n - k) {
            None => {
                let mut t = BTreeMap::new();
                t.insert(a.to_vec(), BigRational::one());
                NormalFormClass { terms: t }
            }
            Some(k) => {
                let big_k = self.n - k;
                let mut rest = a.to_vec();
                rest[k] -= big_k as u8;
                let mut out = NormalFormClass::zero();
                for b in monomials_of_degree(k + 1, big_k) {
                    if b[k] as usize == big_k {
                        continue;
                    }
                    let mut c = rest.clone();
                    for (i, e) in b.iter().enumerate() {
                        c[i] += e;
                    }
                    for (m, x) in &self.reduce_monomial(&c).terms {
                        out.add_term(m.clone(), -x.clone());
                    }
                }
                out
            }
        };
        let result = Arc::new(result);
        self.memo.write().expect("memo lock").insert(a.to_vec(), Arc::clone(&result));
        result
    }

    /// Normal form of an arbitrary polynomial given as monomial → coefficient.
    pub fn normal_form(&self, poly: &BTreeMap<Monomial, BigRational>) -> NormalFormClass {
        let mut out = NormalFormClass::zero();
        for (a, c) in poly {
            for (m, x) in &self.reduce_monomial(a).terms {
                out.add_term(m.clone(), x * c);
            }
        }
        out
    }

    /// Product truncated above degree `d`.
    pub fn mul(&self, a: &NormalFormClass, b: &NormalFormClass) -> NormalFormClass {
        let mut out = NormalFormClass::zero();
        for (ma, ca) in &a.terms {
            let da = monomial_degree(ma);
            for (mb, cb) in &b.terms {
                if da + monomial_degree(mb) > self.d {
                    continue;
                }
                let m: Monomial = ma.iter().zip(mb).map(|(x, y)| x + y).collect();
                let c = ca * cb;
                for (r, x) in &self.reduce_monomial(&m).terms {
                    out.add_term(r.clone(), x * &c);
                }
            }
        }
        out
    }

    /// Product that fails if a non-zero component above degree `d` would be
    /// discarded.
    pub fn mul_checked(&self, a: &NormalFormClass, b: &NormalFormClass) -> Result<NormalFormClass> {
        let mut above: BTreeMap<usize, NormalFormClass> = BTreeMap::new();
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                let deg = monomial_degree(ma) + monomial_degree(mb);
                if deg > self.d {
                    let m: Monomial = ma.iter().zip(mb).map(|(x, y)| x + y).collect();
                    above.entry(deg).or_default().add_term(m, ca * cb);
                }
            }
        }
        // Degrees above n(n-1)/2 vanish in the coinvariant algebra anyway; the
        // remaining ones are checked through the untruncated reduction.
        let full = StaircaseRing {
            nu: self.nu.clone(),
            n: self.n,
            d: self.n * (self.n - 1) / 2,
            memo: RwLock::new(HashMap::new()),
        };
        for (deg, part) in above {
            if !full.normal_form(&part.terms).is_zero() {
                return Err(Error::TruncationOverflow { degree: 2 * deg, top: 2 * self.d });
            }
        }
        Ok(self.mul(a, b))
    }

    pub fn pow(&self, a: &NormalFormClass, e: usize) -> NormalFormClass {
        (0..e).fold(self.one(), |acc, _| self.mul(&acc, a))
    }

    /// `exp(x_i) = sum_k x_i^k / k!`, 1-based `i`.
    pub fn exp_variable(&self, i: usize) -> Result<NormalFormClass> {
        let x = self.variable(i)?;
        let mut term = self.one();
        let mut out = self.one();
        for k in 1..=self.d {
            term = self.mul(&term, &x).scale(&BigRational::new(BigInt::one(), BigInt::from(k)));
            out = out.add(&term);
        }
        Ok(out)
    }

    /// Applies a permutation of the variables: `x_i ↦ x_{perm[i]}` (0-based).
    pub fn permute(&self, a: &NormalFormClass, perm: &[usize]) -> NormalFormClass {
        let mut poly = BTreeMap::new();
        for (m, c) in &a.terms {
            let mut p = vec![0; self.n];
            for (i, &e) in m.iter().enumerate() {
                p[perm[i]] = e;
            }
            poly.insert(p, c.clone());
        }
        self.normal_form(&poly)
    }

    /// All staircase monomials of polynomial degree `k`.
    pub fn staircase_monomials(&self, k: usize) -> Vec<Monomial> {
        monomials_of_degree(self.n, k).into_iter().filter(|a| self.is_staircase(a)).collect()
    }

    /// Dimension of the `S_nu`-invariant subspace in polynomial degree `k`,
    /// computed with the Reynolds operator.
    pub fn invariant_dimension(&self, k: usize) -> usize {
        let group = young_subgroup(&self.nu);
        let mut basis: EchelonBasis<Monomial, BigRational> = EchelonBasis::new();
        for a in self.staircase_monomials(k) {
            let x = NormalFormClass { terms: [(a, BigRational::one())].into() };
            let mut sum = NormalFormClass::zero();
            for g in &group {
                sum = sum.add(&self.permute(&x, g));
            }
            basis.insert(sum.terms);
        }
        basis.rank()
    }

    /// `c_p(γ_j)`: the `p`-th elementary symmetric polynomial in the block-`j`
    /// variables (`j` 1-based).
    pub fn chern_class(&self, j: usize, p: usize) -> Result<NormalFormClass> {
        let vars = self.block_variables(j)?;
        if p > vars.len() {
            return Err(Error::IndexOutOfRange(format!("c_{p}(γ_{j}) with n_{j} = {}", vars.len())));
        }
        let x: Vec<NormalFormClass> = vars.iter().map(|&i| self.variable(i)).collect::<Result<_>>()?;
        Ok(self.elementary_symmetric(&x, p))
    }

    /// 1-based variable indices of block `j` (1-based).
    pub fn block_variables(&self, j: usize) -> Result<Vec<usize>> {
        if j == 0 || j > self.nu.num_blocks() {
            return Err(Error::IndexOutOfRange(format!("block {j} of {}", self.nu)));
        }
        Ok(self.nu.block_range(j - 1).map(|i| i + 1).collect())
    }

    /// `e_p(y_1, ..., y_k)` of arbitrary classes.
    pub fn elementary_symmetric(&self, y: &[NormalFormClass], p: usize) -> NormalFormClass {
        let mut e = vec![NormalFormClass::zero(); p + 1];
        e[0] = self.one();
        for yi in y {
            for r in (1..=p).rev() {
                let add = self.mul(&e[r - 1], yi);
                e[r] = e[r].add(&add);
            }
        }
        e.swap_remove(p)
    }
}

/// Exponent vectors of `vars` variables with total degree `k`.
pub fn monomials_of_degree(vars: usize, k: usize) -> Vec<Monomial> {
    fn rec(vars: usize, k: usize, cur: &mut Vec<u8>, out: &mut Vec<Monomial>) {
        if cur.len() + 1 == vars {
            cur.push(k as u8);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for e in (0..=k).rev() {
            cur.push(e as u8);
            rec(vars, k - e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if vars == 0 {
        if k == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(vars, k, &mut Vec::with_capacity(vars), &mut out);
    out
}

/// All permutations (0-based images) preserving the blocks of `nu`.
pub fn young_subgroup(nu: &FlagType) -> Vec<Vec<usize>> {
    let mut group = vec![(0..nu.n()).collect::<Vec<usize>>()];
    for j in 0..nu.num_blocks() {
        let range: Vec<usize> = nu.block_range(j).collect();
        let block_perms = permutations(&range);
        group = group
            .iter()
            .flat_map(|g| {
                let range = &range;
                block_perms.iter().map(move |p| {
                    let mut h = g.clone();
                    for (src, dst) in range.iter().zip(p) {
                        h[*src] = *dst;
                    }
                    h
                })
            })
            .collect();
    }
    group
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for (i, &x) in items.iter().enumerate() {
        let mut rest = items.to_vec();
        rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

/// `f_1, ..., f_n`: the coefficients of `t^r` in `prod_j c(γ_j, t)`, reduced.
pub fn f_polys(ring: &StaircaseRing) -> Vec<NormalFormClass> {
    let nu = ring.flag_type();
    let n = ring.num_variables();
    let mut total = vec![NormalFormClass::zero(); n + 1];
    total[0] = ring.one();
    for (j, &nj) in nu.parts().iter().enumerate() {
        let c: Vec<NormalFormClass> =
            (0..=nj).map(|p| ring.chern_class(j + 1, p).expect("block index in range")).collect();
        let mut next = vec![NormalFormClass::zero(); n + 1];
        for (r, t) in total.iter().enumerate() {
            if t.is_zero() {
                continue;
            }
            for (p, cp) in c.iter().enumerate() {
                if r + p <= n {
                    next[r + p] = next[r + p].add(&ring.mul(t, cp));
                }
            }
        }
        total = next;
    }
    total.split_off(1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(s: &str) -> StaircaseRing {
        StaircaseRing::new(&s.parse().unwrap())
    }

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn chern_classes_small() {
        let r = ring("1,1");
        let x1 = r.variable(1).unwrap();
        assert_eq!(r.chern_class(1, 1).unwrap(), x1);
        assert_eq!(r.chern_class(2, 1).unwrap(), x1.neg());

        let r = ring("1,2");
        let c = r.chern_class(2, 2).unwrap();
        // x2 x3 reduces to x1^2, matching c(γ_2) = (1 + x1)^{-1}.
        assert_eq!(c.terms().len(), 1);
        assert_eq!(c.terms()[&vec![2, 0, 0]], q(1));
        assert!(c.is_homogeneous_of(2));
        assert!(r.chern_class(2, 3).is_err());
        assert!(r.chern_class(3, 1).is_err());
    }

    #[test]
    fn f_polys_vanish() {
        for s in ["1,1", "1,2", "2,2", "1,1,1", "2,1,1"] {
            let r = ring(s);
            assert!(f_polys(&r).iter().all(NormalFormClass::is_zero), "{s}");
        }
    }

    #[test]
    fn staircase_basis_has_n_factorial_elements() {
        let r = ring("1,1,1,1");
        let total: usize = (0..=6).map(|k| r.staircase_monomials(k).len()).sum();
        assert_eq!(total, 24);
        // x1 + x2 + x3 + x4 = 0
        let s = (1..=4).map(|i| r.variable(i).unwrap()).fold(NormalFormClass::zero(), |a, b| a.add(&b));
        assert!(s.is_zero());
    }

    #[test]
    fn invariant_dimensions_match_schubert_counts() {
        for s in ["1,1", "1,2", "2,2", "1,1,1", "1,3", "2,1,1"] {
            let r = ring(s);
            let expected = crate::flagcomb::length_histogram(r.flag_type());
            let got: Vec<usize> = (0..=r.top_degree()).map(|k| r.invariant_dimension(k)).collect();
            assert_eq!(got, expected, "{s}");
        }
    }

    #[test]
    fn truncation_and_conjugation() {
        let r = ring("1,2");
        let x1 = r.variable(1).unwrap();
        let x2 = r.variable(2).unwrap();
        // x1 is invariant for (1,2); x1^3 vanishes in H^*(CP^2).
        assert!(r.mul_checked(&r.pow(&x1, 2), &x1).unwrap().is_zero());
        // x1 * x2^2 is a non-invariant class living above d = 2.
        let x2sq = r.mul(&x2, &x2);
        assert!(matches!(
            r.mul_checked(&x2sq, &x1),
            Err(Error::TruncationOverflow { degree: 6, top: 4 })
        ));
        assert_eq!(x1.conjugate(), x1.neg());
        let x12 = r.mul(&x1, &x2);
        assert_eq!(x12.conjugate(), x12);
        assert_eq!(r.one().conjugate(), r.one());
        assert_eq!(r.one().to_string(), "1");
        assert_eq!(x1.scale_int(-2).to_string(), "-2*x1");
    }
}
