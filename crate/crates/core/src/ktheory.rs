//! K-theory of `P(m, nu)`: ranks and torsion bounds, the classical Dold table,
//! the Adams ring `K^0(RP^m)`, the `K^0(CG(nu))` presentation, and a rational
//! Chern-character model of `K^0(S^m x CG(nu))` in which the product formulas
//! for the classes `ξ^0(ω)` are checked exactly.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};
use serde::Serialize;

use crate::closedform::betti_torsion_summary;
use crate::cohomring::linalg::{EchelonBasis, SparseVector};
use crate::cohomring::ring::{Monomial, NormalFormClass, StaircaseRing};
use crate::error::{Error, Result};
use crate::flagcomb::{binomial, FlagType};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KGroupSummary {
    pub m: usize,
    pub nu: FlagType,
    pub k0_rank: u64,
    pub k1_rank: u64,
    /// `K^0` contains a summand `Z_{2^e}` with this `e = floor(m/2)`.
    pub guaranteed_summand_exponent: u64,
    /// The torsion of `K^0` has order at most `2^{b'_e}`.
    pub k0_torsion_exponent_bound: u64,
    /// The torsion of `K^1` has order at most `2^{b'_o}`.
    pub k1_torsion_exponent_bound: u64,
}

impl KGroupSummary {
    /// Whether the torsion of `K^0` is forced to be exactly `Z_{2^{floor(m/2)}}`.
    pub fn k0_torsion_determined(&self) -> bool {
        self.guaranteed_summand_exponent == self.k0_torsion_exponent_bound
    }
}

pub fn k_summary(m: usize, nu: &FlagType) -> Result<KGroupSummary> {
    let b = betti_torsion_summary(m, nu)?;
    Ok(KGroupSummary {
        m,
        nu: nu.clone(),
        k0_rank: b.b_e,
        k1_rank: b.b_o,
        guaranteed_summand_exponent: (m / 2) as u64,
        k0_torsion_exponent_bound: b.bp_e,
        k1_torsion_exponent_bound: b.bp_o,
    })
}

/// One row of the classical Dold table for `nu = (1, n-1)`; a torsion order of
/// `1` is the trivial group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FujiiEntry {
    pub b_e: u64,
    pub order_a0: u64,
    pub b_o: u64,
    pub order_a1: u64,
}

pub fn fujii_table(m: usize, n_minus_1: usize) -> Result<FujiiEntry> {
    if m == 0 || n_minus_1 == 0 {
        return Err(Error::InvalidArgument(format!("need m >= 1 and n - 1 >= 1, got m = {m}, n - 1 = {n_minus_1}")));
    }
    let (r, t) = ((m / 2) as u32, (n_minus_1 / 2) as u64);
    let pow2 = |e: u32| 1u64 << e;
    Ok(match (m % 2, n_minus_1 % 2) {
        (0, 0) => FujiiEntry { b_e: 2 * t + 1, order_a0: pow2(r), b_o: 0, order_a1: 1 },
        (1, 0) => FujiiEntry { b_e: t + 1, order_a0: pow2(r), b_o: t + 1, order_a1: 1 },
        (0, _) => FujiiEntry { b_e: 2 * t + 2, order_a0: pow2(r), b_o: 0, order_a1: pow2(r) },
        _ => FujiiEntry { b_e: t + 1, order_a0: pow2(r), b_o: t + 1, order_a1: pow2(r + 1) },
    })
}

/// `a + b y` in `K^0(RP^m) = Z[y]/<y^2 + 2y, y^{f+1}>`, `f = floor(m/2)`, with
/// `b` reduced modulo `2^f`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AdamsElement {
    pub a: BigInt,
    pub b: BigInt,
    pub m: usize,
}

impl AdamsElement {
    fn modulus(m: usize) -> BigInt {
        BigInt::from(2).pow(m / 2)
    }

    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>, m: usize) -> Self {
        AdamsElement { a: a.into(), b: b.into().mod_floor(&Self::modulus(m)), m }
    }

    pub fn one(m: usize) -> Self {
        Self::new(1, 0, m)
    }

    pub fn y(m: usize) -> Self {
        Self::new(0, 1, m)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        Self::new(&self.a + &rhs.a, &self.b + &rhs.b, self.m)
    }

    pub fn scale(&self, k: impl Into<BigInt>) -> Self {
        let k = k.into();
        Self::new(&self.a * &k, &self.b * &k, self.m)
    }

    pub fn pow(&self, e: usize) -> Self {
        (0..e).fold(Self::one(self.m), |acc, _| adams_mul(&acc, self))
    }

    /// Additive order of `y`: the least `k >= 1` with `k y = 0`.
    pub fn order_of_y(m: usize) -> BigInt {
        Self::modulus(m)
    }
}

impl fmt::Display for AdamsElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}y (mod 2^{})", self.a, self.b, self.m / 2)
    }
}

/// `(a + b y)(a' + b' y) = a a' + (a b' + a' b - 2 b b') y`.
pub fn adams_mul(x: &AdamsElement, y: &AdamsElement) -> AdamsElement {
    assert_eq!(x.m, y.m, "elements of different rings");
    AdamsElement::new(&x.a * &y.a, &x.a * &y.b + &y.a * &x.b - BigInt::from(2) * &x.b * &y.b, x.m)
}

/// `λ_{p,j}` (`1 <= p <= n_j`, `j` 1-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Lambda {
    pub p: usize,
    pub j: usize,
}

impl fmt::Display for Lambda {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "λ_{},{}", self.p, self.j)
    }
}

/// Integer polynomial in the `λ_{p,j}`; monomials are sorted multisets.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LambdaPolynomial(pub BTreeMap<Vec<Lambda>, BigInt>);

impl LambdaPolynomial {
    fn add_term(&mut self, mono: Vec<Lambda>, c: BigInt) {
        let e = self.0.entry(mono.clone()).or_insert_with(BigInt::zero);
        *e += c;
        if e.is_zero() {
            self.0.remove(&mono);
        }
    }
}

impl fmt::Display for LambdaPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        // Constant term last.
        let mut terms: Vec<(&Vec<Lambda>, &BigInt)> = self.0.iter().filter(|(m, _)| !m.is_empty()).collect();
        terms.extend(self.0.iter().filter(|(m, _)| m.is_empty()));
        for (i, (mono, c)) in terms.into_iter().enumerate() {
            match (i, c.is_negative()) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let a = c.abs();
            if mono.is_empty() {
                write!(f, "{a}")?;
                continue;
            }
            if !a.is_one() {
                write!(f, "{a}")?;
            }
            let names: Vec<String> = mono.iter().map(ToString::to_string).collect();
            write!(f, "{}", names.join(""))?;
        }
        Ok(())
    }
}

impl Serialize for LambdaPolynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KFlagPresentation {
    pub nu: FlagType,
    pub generators: Vec<Lambda>,
    /// `h_p - C(n, p)` for `1 <= p <= n`.
    pub relations: Vec<LambdaPolynomial>,
}

/// `K^0(CG(nu)) = Z[λ_{p,j}] / <h_p - C(n, p)>` where `h_p` is the `t^p`
/// coefficient of `prod_j (sum_r λ_{r,j} t^r)`, `λ_{0,j} = 1`.
pub fn k_flag_presentation(nu: &FlagType) -> KFlagPresentation {
    let n = nu.n();
    let generators: Vec<Lambda> = nu
        .parts()
        .iter()
        .enumerate()
        .flat_map(|(j, &nj)| (1..=nj).map(move |p| Lambda { p, j: j + 1 }))
        .collect();
    let mut h: Vec<LambdaPolynomial> = vec![LambdaPolynomial::default(); n + 1];
    h[0].add_term(Vec::new(), BigInt::one());
    for (j, &nj) in nu.parts().iter().enumerate() {
        let mut next = vec![LambdaPolynomial::default(); n + 1];
        for (deg, poly) in h.iter().enumerate() {
            for (mono, c) in &poly.0 {
                for r in 0..=nj.min(n - deg) {
                    let mut m2 = mono.clone();
                    if r > 0 {
                        m2.push(Lambda { p: r, j: j + 1 });
                        m2.sort();
                    }
                    next[deg + r].add_term(m2, c.clone());
                }
            }
        }
        h = next;
    }
    let relations = h
        .into_iter()
        .enumerate()
        .skip(1)
        .map(|(p, mut poly)| {
            poly.add_term(Vec::new(), -BigInt::from(binomial(n as u64, p as u64)));
            poly
        })
        .collect();
    KFlagPresentation { nu: nu.clone(), generators, relations }
}

/// `ch(λ^p γ_j) = e_p(exp(x_i) : i in block j)`, truncated above degree `d`.
pub fn ch_lambda(ring: &StaircaseRing, j: usize, p: usize) -> Result<NormalFormClass> {
    let vars = ring.block_variables(j)?;
    if p > vars.len() {
        return Err(Error::IndexOutOfRange(format!("λ^{p} of γ_{j} with n_{j} = {}", vars.len())));
    }
    let exps: Vec<NormalFormClass> = vars.iter().map(|&i| ring.exp_variable(i)).collect::<Result<_>>()?;
    Ok(ring.elementary_symmetric(&exps, p))
}

pub fn conjugate(z: &NormalFormClass) -> NormalFormClass {
    z.conjugate()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KFlagReport {
    pub nu: FlagType,
    /// `(p, C(n, p))` checked.
    pub checked: Vec<(usize, u64)>,
    pub first_failing_p: Option<usize>,
    pub passed: bool,
}

/// Checks `ch(h_p) = C(n, p)` along two routes: the product of the block
/// λ-series, and `e_p` of all exponentials at once.
pub fn verify_k_flag_relations(nu: &FlagType) -> Result<KFlagReport> {
    let ring = StaircaseRing::new(nu);
    let n = nu.n();
    let mut series = vec![NormalFormClass::zero(); n + 1];
    series[0] = ring.one();
    for (j, &nj) in nu.parts().iter().enumerate() {
        let ch: Vec<NormalFormClass> = (0..=nj).map(|p| ch_lambda(&ring, j + 1, p)).collect::<Result<_>>()?;
        let mut next = vec![NormalFormClass::zero(); n + 1];
        for (deg, s) in series.iter().enumerate() {
            for (r, c) in ch.iter().enumerate().take(n - deg + 1) {
                next[deg + r] = next[deg + r].add(&ring.mul(s, c));
            }
        }
        series = next;
    }
    let exps: Vec<NormalFormClass> = (1..=n).map(|i| ring.exp_variable(i)).collect::<Result<_>>()?;
    let mut checked = Vec::new();
    let mut first_failing_p = None;
    for p in 1..=n {
        let expected = binomial(n as u64, p as u64);
        let target = ring.constant(expected as i64);
        let direct = ring.elementary_symmetric(&exps, p);
        if series[p] != target || direct != target {
            first_failing_p.get_or_insert(p);
        }
        checked.push((p, expected));
    }
    Ok(KFlagReport { nu: nu.clone(), checked, passed: first_failing_p.is_none(), first_failing_p })
}

/// `z0 + δ z1` in `K^0(S^{2r} x CG(nu)) ⊗ Q` via the Chern character, `δ^2 = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KTensorElement {
    pub z0: NormalFormClass,
    pub z1: NormalFormClass,
}

impl KTensorElement {
    pub fn flag(z0: NormalFormClass) -> Self {
        KTensorElement { z0, z1: NormalFormClass::zero() }
    }

    pub fn delta(ring: &StaircaseRing) -> Self {
        KTensorElement { z0: NormalFormClass::zero(), z1: ring.one() }
    }

    pub fn scalar(ring: &StaircaseRing, c: &BigRational) -> Self {
        Self::flag(ring.one().scale(c))
    }

    pub fn is_zero(&self) -> bool {
        self.z0.is_zero() && self.z1.is_zero()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        KTensorElement { z0: self.z0.add(&rhs.z0), z1: self.z1.add(&rhs.z1) }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        KTensorElement { z0: self.z0.sub(&rhs.z0), z1: self.z1.sub(&rhs.z1) }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        KTensorElement { z0: self.z0.scale(c), z1: self.z1.scale(c) }
    }

    /// `θ^!`: `(z0, z1) ↦ (conj z0, -conj z1)`.
    pub fn theta(&self) -> Self {
        KTensorElement { z0: self.z0.conjugate(), z1: self.z1.conjugate().neg() }
    }

    fn to_vector(&self) -> SparseVector<(u8, Monomial), BigRational> {
        let mut v = self.z0.to_sparse(|m| (0, m.clone()));
        v.extend(self.z1.to_sparse(|m| (1, m.clone())));
        v
    }
}

/// `(a0 + δ a1)(b0 + δ b1) = a0 b0 + δ (a0 b1 + a1 b0)`.
pub fn delta_mul(ring: &StaircaseRing, a: &KTensorElement, b: &KTensorElement) -> KTensorElement {
    KTensorElement {
        z0: ring.mul(&a.z0, &b.z0),
        z1: ring.mul(&a.z0, &b.z1).add(&ring.mul(&a.z1, &b.z0)),
    }
}

fn power_of_two(e: i64) -> BigRational {
    if e >= 0 {
        BigRational::from_integer(BigInt::from(2).pow(e as u32))
    } else {
        BigRational::new(BigInt::one(), BigInt::from(2).pow((-e) as u32))
    }
}

/// `[ξ^±] = 2^{r-1} ± δ`.
pub fn half_spin(ring: &StaircaseRing, r: usize, plus: bool) -> KTensorElement {
    let base = KTensorElement::scalar(ring, &power_of_two(r as i64 - 1));
    let d = KTensorElement::delta(ring);
    if plus {
        base.add(&d)
    } else {
        base.sub(&d)
    }
}

/// The model of `[ξ^0(ω)]`: `2^{r-1}(ω + conj ω) + δ (ω - conj ω)`.
pub fn xi0_class(omega: &KTensorElement, r: usize) -> Result<KTensorElement> {
    if !omega.z1.is_zero() {
        return Err(Error::InvalidArgument("ξ^0(ω) needs a class pulled back from CG(nu)".into()));
    }
    let w = &omega.z0;
    let wb = w.conjugate();
    Ok(KTensorElement { z0: w.add(&wb).scale(&power_of_two(r as i64 - 1)), z1: w.sub(&wb) })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KIdentityReport {
    pub m: usize,
    pub nu: FlagType,
    pub omegas_tested: usize,
    pub delta_relations: bool,
    pub identity_iii: bool,
    pub identity_iv: bool,
    pub theta_fixes_xi0: bool,
    pub sandwich: bool,
    pub fix_rank: usize,
    pub b_e: u64,
    pub first_failure: Option<String>,
    pub passed: bool,
}

/// Flag classes used as ω: the `ch(λ^p γ_j)` and their pairwise products.
fn omega_samples(ring: &StaircaseRing) -> Result<Vec<(String, NormalFormClass)>> {
    let nu = ring.flag_type();
    let mut base = Vec::new();
    for (j, &nj) in nu.parts().iter().enumerate() {
        for p in 1..=nj {
            base.push((format!("λ_{p},{}", j + 1), ch_lambda(ring, j + 1, p)?));
        }
    }
    let mut out = base.clone();
    for (i, (na, a)) in base.iter().enumerate() {
        for (nb, b) in &base[i..] {
            out.push((format!("{na}{nb}"), ring.mul(a, b)));
        }
    }
    Ok(out)
}

/// The subalgebra of `H^*(CG(nu); Q)` generated by the `ch(λ^p γ_j)`, as a
/// list of spanning elements in echelon form.
fn chern_character_span(ring: &StaircaseRing) -> Result<Vec<NormalFormClass>> {
    let nu = ring.flag_type();
    let mut gens = Vec::new();
    for (j, &nj) in nu.parts().iter().enumerate() {
        for p in 1..=nj {
            gens.push(ch_lambda(ring, j + 1, p)?);
        }
    }
    let mut basis: EchelonBasis<Monomial, BigRational> = EchelonBasis::new();
    let mut elems = vec![ring.one()];
    basis.insert(ring.one().terms().clone());
    let mut frontier = elems.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for x in &frontier {
            for g in &gens {
                let y = ring.mul(x, g);
                if basis.insert(y.terms().clone()) {
                    next.push(y);
                }
            }
        }
        elems.extend(next.iter().cloned());
        frontier = next;
    }
    Ok(elems)
}

/// Exact checks, in the rational model, of the `δ` relations, the sum and
/// product formulas for `ξ^0(ω)`, the inclusions `2 Fix ⊂ 𝒦 ⊂ Fix`, and
/// `rank Fix(θ^!) = b_e`.
pub fn verify_k_identities(m: usize, nu: &FlagType) -> Result<KIdentityReport> {
    if m < 2 || m % 2 == 1 {
        return Err(Error::InvalidArgument(format!("the δ model needs an even sphere dimension, got m = {m}")));
    }
    let r = m / 2;
    let ring = StaircaseRing::new(nu);
    let mut failures: Vec<String> = Vec::new();

    let xp = half_spin(&ring, r, true);
    let xm = half_spin(&ring, r, false);
    let d = KTensorElement::delta(&ring);
    let c = |e: i64| KTensorElement::scalar(&ring, &power_of_two(e));
    let sq = delta_mul(&ring, &xp, &xp);
    let expected_sq = delta_mul(&ring, &c(r as i64), &xp).sub(&c(2 * r as i64 - 2));
    let delta_relations = delta_mul(&ring, &d, &d).is_zero()
        && sq == expected_sq
        && delta_mul(&ring, &xp, &xm) == c(2 * r as i64 - 2);
    if !delta_relations {
        failures.push("half-spin relations".into());
    }

    let omegas = omega_samples(&ring)?;
    let two_r = power_of_two(r as i64);
    let mut identity_iii = true;
    let mut identity_iv = true;
    let mut theta_fixes_xi0 = true;
    for (name, w) in &omegas {
        let om = KTensorElement::flag(w.clone());
        let omb = KTensorElement::flag(w.conjugate());
        let x = xi0_class(&om, r)?;
        if x.theta() != x {
            theta_fixes_xi0 = false;
            failures.push(format!("θ^! moves ξ^0({name})"));
        }
        let lhs = x.add(&xi0_class(&omb, r)?);
        let rhs = KTensorElement::flag(w.add(&w.conjugate()).scale(&two_r));
        if lhs != rhs {
            identity_iii = false;
            failures.push(format!("sum formula at ω = {name}"));
        }
    }
    for (i, (na, a)) in omegas.iter().enumerate() {
        for (nb, b) in &omegas[i..] {
            let xa = xi0_class(&KTensorElement::flag(a.clone()), r)?;
            let xb = xi0_class(&KTensorElement::flag(b.clone()), r)?;
            let lhs = delta_mul(&ring, &xa, &xb);
            let ab = KTensorElement::flag(ring.mul(a, b));
            let anti = ring.mul(&a.sub(&a.conjugate()), &b.sub(&b.conjugate()));
            let rhs = xi0_class(&ab, r)?
                .scale(&two_r)
                .sub(&KTensorElement::flag(anti.scale(&power_of_two(2 * r as i64 - 2))));
            if lhs != rhs {
                identity_iv = false;
                failures.push(format!("product formula at ω1 = {na}, ω2 = {nb}"));
            }
        }
    }

    // Fix(θ^!) on A ⊕ δA, A the Chern-character image, and the subgroup 𝒦
    // spanned by x + conj x and δ(x - conj x).
    let span = chern_character_span(&ring)?;
    let mut fix: EchelonBasis<(u8, Monomial), BigRational> = EchelonBasis::new();
    let mut fix_elems = Vec::new();
    let mut sandwich = true;
    for a in &span {
        for z in [KTensorElement::flag(a.clone()), KTensorElement { z0: NormalFormClass::zero(), z1: a.clone() }] {
            let p = z.add(&z.theta());
            if fix.insert(p.to_vector()) {
                fix_elems.push(p);
            }
            let k0 = KTensorElement::flag(z.z0.add(&z.z0.conjugate()));
            let k1 = KTensorElement { z0: NormalFormClass::zero(), z1: z.z1.sub(&z.z1.conjugate()) };
            if k0.theta() != k0 || k1.theta() != k1 {
                sandwich = false;
                failures.push("𝒦 ⊄ Fix(θ^!)".into());
            }
        }
    }
    let two = BigRational::from_integer(BigInt::from(2));
    for z in &fix_elems {
        let decomposed = KTensorElement {
            z0: z.z0.add(&z.z0.conjugate()),
            z1: z.z1.sub(&z.z1.conjugate()),
        };
        if decomposed != z.scale(&two) {
            sandwich = false;
            failures.push("2 Fix(θ^!) ⊄ 𝒦".into());
            break;
        }
    }
    let fix_rank = fix.rank();
    let b_e = betti_torsion_summary(m, nu)?.b_e;
    if fix_rank as u64 != b_e {
        failures.push(format!("rank Fix(θ^!) = {fix_rank}, b_e = {b_e}"));
    }
    Ok(KIdentityReport {
        m,
        nu: nu.clone(),
        omegas_tested: omegas.len(),
        delta_relations,
        identity_iii,
        identity_iv,
        theta_fixes_xi0,
        sandwich,
        fix_rank,
        b_e,
        passed: failures.is_empty(),
        first_failure: failures.into_iter().next(),
    })
}
