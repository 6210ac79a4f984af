//! Verification sweep over all `(m, nu)` with `m <= m_max`, `n <= n_max`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chains::{dold_chain_complex, fixed_subcomplex_ranks, product_complex_with_involution};
use crate::closedform::{
    basis_sets, betti_torsion_summary, h2, homology_from_bases, kunneth_rank, odd_torsion_variant, orientable,
    summary_from_bases,
};
use crate::cohomring::{f_polys, verify_presentation_with, StaircaseRing};
use crate::error::{Error, Result};
use crate::flagcomb::{
    enumerate_schubert, euler_char_complex, euler_char_real, length, length_by_merging, length_histogram,
    multinomial, poincare_polynomial, FlagType,
};
use crate::homalg::{cohomology_from_homology, homology_all, AbelianGroupInvariants};
use crate::ktheory::{
    adams_mul, fujii_table, k_summary, verify_k_flag_relations, verify_k_identities, AdamsElement,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Combinatorics,
    Homology,
    Presentation,
    Ktheory,
}

impl Suite {
    pub const ALL: [Suite; 4] = [Suite::Combinatorics, Suite::Homology, Suite::Presentation, Suite::Ktheory];
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            Suite::Combinatorics => "combinatorics",
            Suite::Homology => "homology",
            Suite::Presentation => "presentation",
            Suite::Ktheory => "ktheory",
        })
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.to_string() == s.trim())
            .ok_or_else(|| Error::InvalidArgument(format!("unknown suite '{s}' (expected one of homology, presentation, ktheory, combinatorics)")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub m_max: usize,
    pub n_max: usize,
    pub suites: BTreeSet<Suite>,
    /// Largest `n` for which the presentation suite also computes `dim (R/J)_D`.
    pub quotient_n_max: usize,
    /// Largest `n` for the K-theory identity and Chern-character checks.
    pub ktheory_n_max: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            m_max: 6,
            n_max: 5,
            suites: Suite::ALL.into_iter().collect(),
            quotient_n_max: 4,
            ktheory_n_max: 4,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.m_max < 1 {
            return Err(Error::InvalidArgument("m_max must be at least 1".into()));
        }
        if self.n_max < 2 {
            return Err(Error::InvalidArgument("n_max must be at least 2 (a flag type has at least two parts)".into()));
        }
        if self.suites.is_empty() {
            return Err(Error::InvalidArgument("no suites selected".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CaseReport {
    pub suite: Suite,
    /// `None` for checks that depend on `nu` only.
    pub m: Option<usize>,
    pub nu: FlagType,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub config: SweepConfig,
    pub cases: Vec<CaseReport>,
    /// Cases where the alternative odd-torsion count differs from the one the
    /// cellular computation confirms: `(m, nu, confirmed, alternative)`.
    pub torsion_discrepancies: Vec<(usize, FlagType, u64, u64)>,
}

impl SweepReport {
    pub fn passed(&self) -> bool {
        self.cases.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CaseReport> {
        self.cases.iter().filter(|c| !c.passed)
    }
}

fn case(suite: Suite, m: Option<usize>, nu: &FlagType, failures: Vec<String>, ok_detail: String) -> CaseReport {
    CaseReport {
        suite,
        m,
        nu: nu.clone(),
        passed: failures.is_empty(),
        detail: if failures.is_empty() { ok_detail } else { failures.join("; ") },
    }
}

/// Poincaré polynomial, Euler characteristics, length recursion, Chern
/// relations and invariant dimensions.
pub fn check_combinatorics(nu: &FlagType, with_ring: bool) -> CaseReport {
    let mut fail = Vec::new();
    let hist = length_histogram(nu);
    match poincare_polynomial(nu) {
        Err(e) => fail.push(e.to_string()),
        Ok(p) => {
            let coeffs: Vec<BigInt> = (0..hist.len()).map(|k| p.coefficient(k)).collect();
            if coeffs != hist.iter().map(|&c| BigInt::from(c)).collect::<Vec<_>>() || p.degree() != Some(hist.len() - 1) {
                fail.push(format!("Poincaré polynomial {p} differs from length histogram {hist:?}"));
            }
            if p.eval(&BigInt::from(1)) != BigInt::from(euler_char_complex(nu)) {
                fail.push("Q(1) differs from the multinomial".into());
            }
            if p.eval(&BigInt::from(-1)) != BigInt::from(euler_char_real(nu)) {
                fail.push("Q(-1) differs from the real Euler characteristic".into());
            }
            if !p.is_palindromic() {
                fail.push("Poincaré polynomial is not palindromic".into());
            }
        }
    }
    let groups = enumerate_schubert(nu);
    let total: usize = groups.iter().map(Vec::len).sum();
    if total as u64 != multinomial(nu.n(), nu.parts()) {
        fail.push(format!("|I(nu)| = {total}"));
    }
    if groups.iter().flatten().any(|i| length(i) != length_by_merging(i)) {
        fail.push("length recursion disagrees with the inversion count".into());
    }
    if with_ring {
        let ring = StaircaseRing::new(nu);
        if let Some(r) = f_polys(&ring).iter().position(|f| !f.is_zero()) {
            fail.push(format!("f_{} does not reduce to zero", r + 1));
        }
        let inv: Vec<usize> = (0..=nu.dim_complex()).map(|k| ring.invariant_dimension(k)).collect();
        if inv != hist {
            fail.push(format!("invariant dimensions {inv:?} differ from {hist:?}"));
        }
    }
    case(Suite::Combinatorics, None, nu, fail, format!("Betti {hist:?}"))
}

/// Closed forms against the Smith normal form oracle.
pub fn check_homology(m: usize, nu: &FlagType) -> CaseReport {
    let mut fail = Vec::new();
    let mut run = || -> Result<String> {
        let complex = dold_chain_complex(m, nu)?;
        let oracle = homology_all(&complex);
        let bases = basis_sets(m, nu)?;
        for (q, h) in oracle.iter().enumerate() {
            let closed = homology_from_bases(&bases, q);
            if *h != closed {
                fail.push(format!("H_{q}: oracle {h}, closed form {closed}"));
            }
            if h.torsion.iter().any(|d| *d != BigInt::from(2)) {
                fail.push(format!("H_{q} = {h} has torsion of order other than 2"));
            }
            if kunneth_rank(m, nu, q)? != h.rank {
                fail.push(format!("Künneth rank in degree {q}"));
            }
        }
        let summary = betti_torsion_summary(m, nu)?;
        if summary_from_bases(&bases) != summary {
            fail.push(format!("basis counts {:?} differ from {summary:?}", summary_from_bases(&bases)));
        }
        let h2_oracle = cohomology_from_homology(&oracle, 2);
        if h2(m, nu)? != h2_oracle {
            fail.push(format!("H^2 oracle {h2_oracle}"));
        }
        let top_free = oracle.last() == Some(&AbelianGroupInvariants::free(1));
        if orientable(m, nu)? != top_free {
            fail.push("orientability criterion disagrees with top homology".into());
        }
        let (c, theta) = product_complex_with_involution(m, nu)?;
        let fixed = fixed_subcomplex_ranks(&c, &theta);
        if fixed != oracle.iter().map(|h| h.rank).collect::<Vec<_>>() {
            fail.push(format!("θ-fixed ranks {fixed:?}"));
        }
        let text: Vec<String> = oracle.iter().map(ToString::to_string).collect();
        Ok(text.join(", "))
    };
    let detail = match run() {
        Ok(d) => d,
        Err(e) => {
            fail.push(e.to_string());
            String::new()
        }
    };
    case(Suite::Homology, Some(m), nu, fail, detail)
}

pub fn check_presentation(m: usize, nu: &FlagType, with_quotient: bool) -> CaseReport {
    let mut fail = Vec::new();
    let detail = match verify_presentation_with(m, nu, with_quotient) {
        Err(e) => {
            fail.push(e.to_string());
            String::new()
        }
        Ok(r) => {
            if let Some(rel) = &r.first_nonvanishing_relation {
                fail.push(format!("relation does not vanish: {rel}"));
            }
            if let Some(d) = r.first_failing_degree {
                fail.push(format!("graded dimension mismatch in degree {d}"));
            }
            format!(
                "{} generators, {} relations{}",
                r.generator_count,
                r.relation_count,
                if with_quotient { ", R/J dimensions match" } else { "" }
            )
        }
    };
    case(Suite::Presentation, Some(m), nu, fail, detail)
}

/// Summary consistency, the classical Dold table, Adams ring laws and, for
/// even `m`, the rational identities.
pub fn check_ktheory(m: usize, nu: &FlagType, with_identities: bool) -> CaseReport {
    let mut fail = Vec::new();
    let mut run = || -> Result<String> {
        let k = k_summary(m, nu)?;
        let b = betti_torsion_summary(m, nu)?;
        if (k.k0_rank, k.k1_rank) != (b.b_e, b.b_o) {
            fail.push("K ranks differ from Betti numbers".into());
        }
        if m >= 2 && k.guaranteed_summand_exponent > k.k0_torsion_exponent_bound {
            fail.push("guaranteed summand exceeds the torsion bound".into());
        }
        if m.is_multiple_of(2) && k.k1_rank != 0 {
            fail.push("K^1 has positive rank for even m".into());
        }
        if nu.num_blocks() == 2 && nu.parts()[0] == 1 {
            let f = fujii_table(m, nu.parts()[1])?;
            if (f.b_e, f.b_o) != (k.k0_rank, k.k1_rank) {
                fail.push(format!("classical table ranks ({}, {})", f.b_e, f.b_o));
            }
            let lo = 1u64 << k.guaranteed_summand_exponent;
            if f.order_a0 < lo || !fits(f.order_a0, k.k0_torsion_exponent_bound) || !fits(f.order_a1, k.k1_torsion_exponent_bound) {
                fail.push("classical torsion orders outside the bounds".into());
            }
        }
        if !adams_laws_hold(m) {
            fail.push("Adams ring laws".into());
        }
        if with_identities && m.is_multiple_of(2) {
            let r = verify_k_identities(m, nu)?;
            if let Some(e) = r.first_failure {
                fail.push(e);
            }
        }
        Ok(format!(
            "K^0 rank {}, K^1 rank {}, |A_0| in [2^{}, 2^{}], |A_1| <= 2^{}",
            k.k0_rank, k.k1_rank, k.guaranteed_summand_exponent, k.k0_torsion_exponent_bound, k.k1_torsion_exponent_bound
        ))
    };
    let detail = run().unwrap_or_else(|e| {
        fail.push(e.to_string());
        String::new()
    });
    case(Suite::Ktheory, Some(m), nu, fail, detail)
}

pub fn check_k_flag(nu: &FlagType) -> CaseReport {
    let (fail, detail) = match verify_k_flag_relations(nu) {
        Ok(r) if r.passed => (vec![], format!("ch(h_p) = C(n, p) for p = 1..{}", nu.n())),
        Ok(r) => (vec![format!("ch(h_{}) is not C(n, p)", r.first_failing_p.unwrap_or(0))], String::new()),
        Err(e) => (vec![e.to_string()], String::new()),
    };
    case(Suite::Ktheory, None, nu, fail, detail)
}

fn fits(order: u64, exponent_bound: u64) -> bool {
    exponent_bound >= 64 || order <= 1u64 << exponent_bound
}

/// `y^2 = -2y`, `y^f != 0`, `2^f y = 0` and `2^{f-1} y != 0` in `K^0(RP^m)`.
pub fn adams_laws_hold(m: usize) -> bool {
    let f = m / 2;
    let y = AdamsElement::y(m);
    let order = AdamsElement::order_of_y(m);
    let square = adams_mul(&y, &y) == y.scale(-2);
    let killed = y.scale(order.clone()).is_zero();
    let minimal = f == 0 || !y.scale(order / 2).is_zero();
    let nilpotent = f == 0 || (!y.pow(f).is_zero() && y.pow(f + 1).is_zero());
    square && killed && minimal && nilpotent
}

/// Runs every selected suite; independent cases are evaluated in parallel and
/// the result is sorted by `(m, nu, suite)`.
pub fn run_sweep(config: &SweepConfig) -> Result<SweepReport> {
    config.validate()?;
    let types = FlagType::all_up_to(config.n_max);
    let has = |s: Suite| config.suites.contains(&s);

    let mut jobs: Vec<(Suite, Option<usize>, FlagType)> = Vec::new();
    for nu in &types {
        if has(Suite::Combinatorics) {
            jobs.push((Suite::Combinatorics, None, nu.clone()));
        }
        if has(Suite::Ktheory) && nu.n() <= config.ktheory_n_max {
            jobs.push((Suite::Ktheory, None, nu.clone()));
        }
        for m in 1..=config.m_max {
            for s in [Suite::Homology, Suite::Presentation, Suite::Ktheory] {
                if has(s) {
                    jobs.push((s, Some(m), nu.clone()));
                }
            }
        }
    }
    let mut cases: Vec<CaseReport> = jobs
        .par_iter()
        .map(|(suite, m, nu)| match (suite, m) {
            (Suite::Combinatorics, _) => check_combinatorics(nu, nu.n() <= config.n_max.min(6)),
            (Suite::Ktheory, None) => check_k_flag(nu),
            (Suite::Homology, Some(m)) => check_homology(*m, nu),
            (Suite::Presentation, Some(m)) => check_presentation(*m, nu, nu.n() <= config.quotient_n_max),
            (Suite::Ktheory, Some(m)) => check_ktheory(*m, nu, nu.n() <= config.ktheory_n_max),
            _ => unreachable!("job list only pairs suites with their arity"),
        })
        .collect();
    cases.sort_by(|a, b| (a.m.unwrap_or(0), &a.nu, a.suite).cmp(&(b.m.unwrap_or(0), &b.nu, b.suite)));

    let mut torsion_discrepancies = Vec::new();
    if has(Suite::Homology) {
        for nu in &types {
            for m in 1..=config.m_max {
                let confirmed = betti_torsion_summary(m, nu)?.bp_o;
                let alternative = odd_torsion_variant(m, nu)?;
                if confirmed != alternative {
                    torsion_discrepancies.push((m, nu.clone(), confirmed, alternative));
                }
            }
        }
    }
    Ok(SweepReport { config: config.clone(), cases, torsion_discrepancies })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_validation() {
        assert!(SweepConfig::default().validate().is_ok());
        let bad = SweepConfig { n_max: 1, ..SweepConfig::default() };
        assert!(bad.validate().is_err());
        assert!("nonsense".parse::<Suite>().is_err());
        assert_eq!("ktheory".parse::<Suite>().unwrap(), Suite::Ktheory);
    }

    #[test]
    fn small_sweep_passes_and_is_sorted() {
        let config = SweepConfig { m_max: 2, n_max: 3, ..SweepConfig::default() };
        let report = run_sweep(&config).unwrap();
        assert!(report.passed(), "{:?}", report.failures().collect::<Vec<_>>());
        let keys: Vec<_> = report.cases.iter().map(|c| (c.m.unwrap_or(0), c.nu.clone(), c.suite)).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
        assert!(report.torsion_discrepancies.iter().any(|(m, nu, _, _)| *m == 2 && nu.to_string() == "(1,1)"));
    }

    #[test]
    fn suite_filtering() {
        let config = SweepConfig {
            m_max: 2,
            n_max: 2,
            suites: [Suite::Ktheory].into_iter().collect(),
            ..SweepConfig::default()
        };
        let report = run_sweep(&config).unwrap();
        assert!(report.cases.iter().all(|c| c.suite == Suite::Ktheory));
        assert!(report.passed());
    }
}
