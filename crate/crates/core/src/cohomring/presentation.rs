//! Generators and relations for `H^*(P(m, nu); R)`, `2` invertible in `R`, and
//! their verification in the model `Q[u]/<u^2> ⊗ H^*(CG(nu); Q)`.

use std::collections::{BTreeSet, HashMap};

use num_rational::BigRational;
use serde::Serialize;

use super::linalg::{EchelonBasis, ModP, SparseVector};
use super::ring::{Monomial, NormalFormClass, StaircaseRing};
use super::symbolic::{synthesize, ChernSymbol, GenMonomial, GenPolynomial, Generator, OddSlot};
use crate::closedform::basis_sets;
use crate::error::{Error, Result};
use crate::flagcomb::FlagType;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Relation {
    pub label: String,
    pub polynomial: GenPolynomial,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Presentation {
    pub m: usize,
    pub nu: FlagType,
    pub generators: Vec<Generator>,
    pub relations: Vec<Relation>,
}

impl Presentation {
    pub fn max_generator_degree(&self) -> usize {
        self.generators.iter().map(|g| g.degree(self.m)).max().unwrap_or(0)
    }
}

impl Serialize for GenPolynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = s.serialize_seq(Some(self.0.len()))?;
        for (mono, c) in &self.0 {
            let factors: Vec<(String, u32)> = mono.0.iter().map(|(g, &e)| (g.to_string(), e)).collect();
            seq.serialize_element(&(c.to_string(), factors))?;
        }
        seq.end()
    }
}

pub fn odd_slots(nu: &FlagType) -> Vec<OddSlot> {
    let mut out = Vec::new();
    for (j, &nj) in nu.parts().iter().enumerate() {
        for k in (1..=nj).step_by(2) {
            out.push(OddSlot { block: j + 1, k });
        }
    }
    out
}

fn even_generators(nu: &FlagType) -> Vec<Generator> {
    let mut out = Vec::new();
    for (j, &nj) in nu.parts().iter().enumerate() {
        for k in (2..=nj).step_by(2) {
            out.push(Generator::C { k, block: j + 1 });
        }
    }
    out
}

fn double_generators(slots: &[OddSlot]) -> Vec<Generator> {
    let mut out = Vec::new();
    for (i, &a) in slots.iter().enumerate() {
        for &b in &slots[i..] {
            out.push(Generator::CDouble(a, b));
        }
    }
    out
}

fn gm(gs: &[Generator]) -> GenMonomial {
    gs.iter().fold(GenMonomial::one(), |acc, g| acc.mul(&GenMonomial::single(*g)))
}

struct RelationSet {
    seen: BTreeSet<GenPolynomial>,
    list: Vec<Relation>,
}

impl RelationSet {
    fn push(&mut self, label: String, p: GenPolynomial) {
        if p.is_zero() {
            return;
        }
        let p = p.normalized();
        if self.seen.insert(p.clone()) {
            self.list.push(Relation { label, polynomial: p });
        }
    }
}

/// Synthesizes the presentation: case 1 for `m` even, case 2 for `m` odd.
pub fn presentation(m: usize, nu: &FlagType) -> Result<Presentation> {
    if m == 0 {
        return Err(Error::DegenerateSphere);
    }
    let parts = nu.parts();
    let n = nu.n();
    let slots = odd_slots(nu);
    let doubles = double_generators(&slots);
    let even = m.is_multiple_of(2);

    let mut generators = Vec::new();
    if !even {
        generators.push(Generator::U);
    }
    generators.extend(even_generators(nu));
    if even {
        generators.extend(slots.iter().map(|&s| Generator::CPrime(s)));
    }
    generators.extend(doubles.iter().copied());

    let mut rel = RelationSet { seen: BTreeSet::new(), list: Vec::new() };
    if even {
        for (i, &a) in slots.iter().enumerate() {
            for &b in &slots[i..] {
                rel.push(
                    format!("(i) c'_{},{} c'_{},{}", a.k, a.block, b.k, b.block),
                    GenPolynomial::monomial(gm(&[Generator::CPrime(a), Generator::CPrime(b)]), 1),
                );
            }
        }
        for &a in &slots {
            for &b in &slots {
                for &c in &slots {
                    let lhs = gm(&[Generator::CPrime(a), Generator::c_double(b, c)]);
                    let rhs = gm(&[Generator::CPrime(c), Generator::c_double(a, b)]);
                    rel.push(
                        "(i) c' c'' exchange".into(),
                        GenPolynomial::monomial(lhs, 1).sub(&GenPolynomial::monomial(rhs, 1)),
                    );
                }
            }
        }
    } else {
        rel.push("(i) u_m^2".into(), GenPolynomial::monomial(gm(&[Generator::U, Generator::U]), 1));
    }
    for &a in &slots {
        for &b in &slots {
            for &a2 in &slots {
                for &b2 in &slots {
                    let lhs = gm(&[Generator::c_double(a, b), Generator::c_double(a2, b2)]);
                    let rhs = gm(&[Generator::c_double(a, a2), Generator::c_double(b, b2)]);
                    rel.push(
                        "(ii) c'' c'' exchange".into(),
                        GenPolynomial::monomial(lhs, 1).sub(&GenPolynomial::monomial(rhs, 1)),
                    );
                }
            }
        }
    }
    for r in (2..=n).step_by(2) {
        rel.push(format!("F_{r}"), synthesize(parts, r, &[], false)?);
    }
    for r in (1..=n).step_by(2) {
        if even {
            rel.push(format!("F'_{r},{m}"), synthesize(parts, r, &[], true)?);
        }
        for &s in &slots {
            let extra = [ChernSymbol { block: s.block, k: s.k }];
            rel.push(format!("F_{r},{},{}", s.k, s.block), synthesize(parts, r, &extra, false)?);
        }
    }
    Ok(Presentation { m, nu: nu.clone(), generators, relations: rel.list })
}

/// `a + u * b` in `Q[u]/<u^2> ⊗ H^*(CG(nu); Q)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelElement {
    pub a: NormalFormClass,
    pub b: NormalFormClass,
}

impl ModelElement {
    pub fn scalar(ring: &StaircaseRing, c: i64) -> Self {
        ModelElement { a: ring.constant(c), b: NormalFormClass::zero() }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        ModelElement { a: self.a.add(&rhs.a), b: self.b.add(&rhs.b) }
    }

    pub fn mul(&self, rhs: &Self, ring: &StaircaseRing) -> Self {
        ModelElement {
            a: ring.mul(&self.a, &rhs.a),
            b: ring.mul(&self.a, &rhs.b).add(&ring.mul(&self.b, &rhs.a)),
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        ModelElement { a: self.a.scale(c), b: self.b.scale(c) }
    }

    fn to_vector(&self) -> SparseVector<(u8, Monomial), BigRational> {
        let mut v = self.a.to_sparse(|m| (0, m.clone()));
        v.extend(self.b.to_sparse(|m| (1, m.clone())));
        v
    }
}

/// The map `η` from generator polynomials into the model ring.
pub struct Eta<'a> {
    ring: &'a StaircaseRing,
    images: HashMap<Generator, ModelElement>,
}

impl<'a> Eta<'a> {
    pub fn new(ring: &'a StaircaseRing) -> Self {
        Eta { ring, images: HashMap::new() }
    }

    pub fn generator(&mut self, g: Generator) -> Result<ModelElement> {
        if let Some(x) = self.images.get(&g) {
            return Ok(x.clone());
        }
        let r = self.ring;
        let zero = NormalFormClass::zero;
        let x = match g {
            Generator::U => ModelElement { a: zero(), b: r.one() },
            Generator::C { k, block } => ModelElement { a: r.chern_class(block, k)?, b: zero() },
            Generator::CPrime(s) => ModelElement { a: zero(), b: r.chern_class(s.block, s.k)? },
            Generator::CDouble(s, t) => ModelElement {
                a: r.mul(&r.chern_class(s.block, s.k)?, &r.chern_class(t.block, t.k)?),
                b: zero(),
            },
        };
        self.images.insert(g, x.clone());
        Ok(x)
    }

    pub fn monomial(&mut self, mono: &GenMonomial) -> Result<ModelElement> {
        let mut acc = ModelElement::scalar(self.ring, 1);
        for (&g, &e) in &mono.0 {
            let x = self.generator(g)?;
            for _ in 0..e {
                acc = acc.mul(&x, self.ring);
            }
        }
        Ok(acc)
    }

    pub fn polynomial(&mut self, p: &GenPolynomial) -> Result<ModelElement> {
        let mut acc = ModelElement { a: NormalFormClass::zero(), b: NormalFormClass::zero() };
        for (mono, c) in &p.0 {
            let x = self.monomial(mono)?.scale(&BigRational::from_integer(c.clone()));
            acc = acc.add(&x);
        }
        Ok(acc)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PresentationReport {
    pub m: usize,
    pub nu: FlagType,
    pub generator_count: usize,
    pub relation_count: usize,
    pub first_nonvanishing_relation: Option<String>,
    /// Graded dimensions of the subring generated by the `η`-images.
    pub subring_dimensions: Vec<usize>,
    /// `dim Fix(θ^*)` in each degree, from invariant dimensions of the model.
    pub fixed_dimensions: Vec<usize>,
    /// Rational Betti numbers from the closed-form bases.
    pub betti: Vec<usize>,
    /// `dim (R/J)_D` for `D <= top + max generator degree`, if computed.
    pub quotient_dimensions: Option<Vec<usize>>,
    pub first_failing_degree: Option<usize>,
    pub passed: bool,
}

/// Checks that every relation maps to zero and that the image of `η` has the
/// graded dimension of `H^*(P(m, nu); Q)`.
pub fn verify_presentation(m: usize, nu: &FlagType) -> Result<PresentationReport> {
    verify_presentation_with(m, nu, false)
}

/// As [`verify_presentation`]; with `check_quotient` also computes
/// `dim (R/J)_D` modulo `2^61 - 1` and requires it to match, which (with the
/// other two checks) shows `η` induces an isomorphism `R/J ≅ Fix(θ^*)`.
pub fn verify_presentation_with(m: usize, nu: &FlagType, check_quotient: bool) -> Result<PresentationReport> {
    let pres = presentation(m, nu)?;
    let ring = StaircaseRing::new(nu);
    let mut eta = Eta::new(&ring);
    let top = m + 2 * nu.dim_complex();

    let mut first_nonvanishing_relation = None;
    for r in &pres.relations {
        if !eta.polynomial(&r.polynomial)?.is_zero() {
            first_nonvanishing_relation = Some(format!("{}: {}", r.label, r.polynomial.render(false, m)));
            break;
        }
    }

    let betti: Vec<usize> = basis_sets(m, nu)?.free.iter().map(Vec::len).collect();
    let subring_dimensions = subring_dimensions(&pres, &mut eta, top)?;
    let fixed_dimensions = fixed_dimensions(m, &ring, top);
    let quotient_dimensions = check_quotient.then(|| quotient_dimensions(&pres, top + pres.max_generator_degree()));

    let mut first_failing_degree = None;
    for d in 0..=top {
        if subring_dimensions[d] != betti[d] || fixed_dimensions[d] != betti[d] {
            first_failing_degree = Some(d);
            break;
        }
    }
    if first_failing_degree.is_none() {
        if let Some(q) = &quotient_dimensions {
            first_failing_degree =
                (0..q.len()).find(|&d| q[d] != betti.get(d).copied().unwrap_or(0));
        }
    }
    let passed = first_nonvanishing_relation.is_none() && first_failing_degree.is_none();
    Ok(PresentationReport {
        m,
        nu: nu.clone(),
        generator_count: pres.generators.len(),
        relation_count: pres.relations.len(),
        first_nonvanishing_relation,
        subring_dimensions,
        fixed_dimensions,
        betti,
        quotient_dimensions,
        first_failing_degree,
        passed,
    })
}

/// `S_D = sum_g η(g) S_{D - |g|}` with `S_0 = Q`.
fn subring_dimensions(pres: &Presentation, eta: &mut Eta<'_>, top: usize) -> Result<Vec<usize>> {
    let m = pres.m;
    let ring = eta.ring;
    let images: Vec<(usize, ModelElement)> = pres
        .generators
        .iter()
        .map(|&g| Ok((g.degree(m), eta.generator(g)?)))
        .collect::<Result<_>>()?;
    let mut spans: Vec<Vec<ModelElement>> = vec![Vec::new(); top + 1];
    spans[0].push(ModelElement::scalar(ring, 1));
    for d in 1..=top {
        let mut basis: EchelonBasis<(u8, Monomial), BigRational> = EchelonBasis::new();
        let mut elements = Vec::new();
        for (gd, x) in &images {
            if *gd > d || *gd == 0 {
                continue;
            }
            for y in &spans[d - gd] {
                let z = x.mul(y, ring);
                if basis.insert(z.to_vector()) {
                    elements.push(z);
                }
            }
        }
        spans[d] = elements;
    }
    Ok(spans.iter().map(Vec::len).collect())
}

/// `θ^*` fixes `H^{4k}(CG)` and `u_m H^{4k + 2}` (m even) or `u_m H^{4k}` (m odd).
fn fixed_dimensions(m: usize, ring: &StaircaseRing, top: usize) -> Vec<usize> {
    let inv: Vec<usize> = (0..=ring.top_degree()).map(|k| ring.invariant_dimension(k)).collect();
    let dim = |k: usize| inv.get(k).copied().unwrap_or(0);
    (0..=top)
        .map(|d| {
            let mut total = 0;
            if d % 4 == 0 {
                total += dim(d / 2);
            }
            if d >= m && (d - m).is_multiple_of(2) {
                let k = (d - m) / 2;
                if (m + 1 + k).is_multiple_of(2) {
                    total += dim(k);
                }
            }
            total
        })
        .collect()
}

/// Exponent vectors (indexed like `generators`) of each degree `0..=max_degree`.
fn monomials_by_degree(degrees: &[usize], max_degree: usize) -> Vec<Vec<Vec<u8>>> {
    fn rec(degrees: &[usize], start: usize, deg: usize, cur: &mut Vec<u8>, max: usize, out: &mut Vec<Vec<Vec<u8>>>) {
        out[deg].push(cur.clone());
        for i in start..degrees.len() {
            let gd = degrees[i];
            if gd == 0 || deg + gd > max {
                continue;
            }
            cur[i] += 1;
            rec(degrees, i, deg + gd, cur, max, out);
            cur[i] -= 1;
        }
    }
    let mut out = vec![Vec::new(); max_degree + 1];
    rec(degrees, 0, 0, &mut vec![0; degrees.len()], max_degree, &mut out);
    out
}

/// `dim (R/J)_D` over `F_p`, an upper bound for the rational dimension.
pub fn quotient_dimensions(pres: &Presentation, max_degree: usize) -> Vec<usize> {
    let m = pres.m;
    let index: HashMap<Generator, usize> = pres.generators.iter().enumerate().map(|(i, &g)| (g, i)).collect();
    let degrees: Vec<usize> = pres.generators.iter().map(|g| g.degree(m)).collect();
    let monos = monomials_by_degree(&degrees, max_degree);
    let positions: Vec<HashMap<&[u8], usize>> = monos
        .iter()
        .map(|ms| ms.iter().enumerate().map(|(i, a)| (a.as_slice(), i)).collect())
        .collect();
    let rels: Vec<(usize, Vec<(Vec<u8>, ModP)>)> = pres
        .relations
        .iter()
        .filter_map(|r| {
            let d = r.polynomial.homogeneous_degree(m)?;
            let terms = r
                .polynomial
                .0
                .iter()
                .map(|(t, c)| {
                    let mut a = vec![0u8; degrees.len()];
                    for (g, &e) in &t.0 {
                        a[index[g]] += e as u8;
                    }
                    (a, ModP::from_bigint(c))
                })
                .collect();
            Some((d, terms))
        })
        .collect();
    (0..=max_degree)
        .map(|d| {
            let mut basis: EchelonBasis<usize, ModP> = EchelonBasis::new();
            let target = monos[d].len();
            'outer: for (rd, terms) in &rels {
                if *rd > d {
                    continue;
                }
                for g in &monos[d - rd] {
                    if basis.rank() == target {
                        break 'outer;
                    }
                    let v: SparseVector<usize, ModP> = terms
                        .iter()
                        .map(|(t, c)| {
                            let prod: Vec<u8> = t.iter().zip(g).map(|(x, y)| x + y).collect();
                            (positions[d][prod.as_slice()], *c)
                        })
                        .collect();
                    basis.insert(v);
                }
            }
            target - basis.rank()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nu(s: &str) -> FlagType {
        s.parse().unwrap()
    }

    #[test]
    fn generator_lists() {
        let p = presentation(3, &nu("1,1")).unwrap();
        let names: Vec<String> = p.generators.iter().map(|g| g.to_text(3)).collect();
        assert_eq!(names, vec!["u_3", "c''_1,1,1,1", "c''_1,1,1,2", "c''_1,1,2,2"]);
        assert!(p.relations.iter().any(|r| r.label == "(i) u_m^2"));
        let f2 = p.relations.iter().find(|r| r.label == "F_2").unwrap();
        assert_eq!(f2.polynomial.render(false, 3), "c''_1,1,1,2");

        let p = presentation(2, &nu("1,1")).unwrap();
        let names: Vec<String> = p.generators.iter().map(|g| g.to_text(2)).collect();
        assert_eq!(names, vec!["c'_1,1", "c'_1,2", "c''_1,1,1,1", "c''_1,1,1,2", "c''_1,1,2,2"]);
        for r in &p.relations {
            assert!(r.polynomial.homogeneous_degree(2).is_some(), "{}", r.label);
        }
    }

    #[test]
    fn c_prime_products_vanish_in_model() {
        let t = nu("1,1");
        let ring = StaircaseRing::new(&t);
        let mut eta = Eta::new(&ring);
        let a = OddSlot { block: 1, k: 1 };
        let b = OddSlot { block: 2, k: 1 };
        let x = eta.monomial(&gm(&[Generator::CPrime(a), Generator::CPrime(b)])).unwrap();
        assert!(x.is_zero());
    }

    #[test]
    fn small_cases_verify_with_quotient() {
        for (m, s) in [(1, "1,1"), (2, "1,1"), (3, "1,1"), (2, "1,2"), (3, "1,2"), (4, "2,1"), (1, "1,1,1")] {
            let r = verify_presentation_with(m, &nu(s), true).unwrap();
            assert!(r.passed, "{r:?}");
        }
        let r = verify_presentation(3, &nu("1,1")).unwrap();
        assert_eq!(r.subring_dimensions, vec![1, 0, 0, 1, 0, 0]);
    }
}
