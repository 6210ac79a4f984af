//! Closed-form integral homology of `P(m, nu)`: explicit cellular bases for the
//! free and 2-torsion parts, Betti/torsion counts, `H^2`, orientability and the
//! rational Künneth ranks.

use serde::{Deserialize, Serialize};

use crate::chains::CellLabel;
use crate::error::{Error, Result};
use crate::flagcomb::{all_schubert, ell_counts, enumerate_schubert, multinomial, binomial, FlagType};
use crate::homalg::AbelianGroupInvariants;

/// `free[q]` is `B_q`, `torsion[q]` is `B'_q`, for `0 <= q <= m + 2d`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyBases {
    pub free: Vec<Vec<CellLabel>>,
    pub torsion: Vec<Vec<CellLabel>>,
}

impl HomologyBases {
    pub fn top_degree(&self) -> usize {
        self.free.len() - 1
    }
}

/// Ranks and `Z_2` counts of integral cohomology, split by degree parity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BettiSummary {
    pub b_e: u64,
    pub b_o: u64,
    pub bp_e: u64,
    pub bp_o: u64,
}

fn check_args(m: usize, nu: &FlagType) -> Result<()> {
    if m == 0 {
        return Err(Error::DegenerateSphere);
    }
    if nu.n() < 2 {
        return Err(Error::InvalidFlagType(format!("{nu}: n must be at least 2")));
    }
    Ok(())
}

pub fn basis_sets(m: usize, nu: &FlagType) -> Result<HomologyBases> {
    check_args(m, nu)?;
    let top = m + 2 * nu.dim_complex();
    let mut free = vec![Vec::new(); top + 1];
    let mut torsion = vec![Vec::new(); top + 1];
    for i in all_schubert(nu) {
        let l = i.length();
        let cell = |j| CellLabel { sphere_index: j, schubert: i.clone(), sign: None };
        if l % 2 == 0 {
            free[2 * l].push(cell(0));
        }
        if (m + l) % 2 == 1 {
            free[m + 2 * l].push(cell(m));
        }
        for j in 0..m {
            if (j + l) % 2 == 1 {
                torsion[j + 2 * l].push(cell(j));
            }
        }
    }
    Ok(HomologyBases { free, torsion })
}

/// `Z^{|B_q|} ⊕ Z_2^{|B'_q|}`; zero outside `0..=m+2d`.
pub fn homology_closed(m: usize, nu: &FlagType, q: usize) -> Result<AbelianGroupInvariants> {
    let bases = basis_sets(m, nu)?;
    Ok(homology_from_bases(&bases, q))
}

pub fn homology_from_bases(bases: &HomologyBases, q: usize) -> AbelianGroupInvariants {
    match (bases.free.get(q), bases.torsion.get(q)) {
        (Some(f), Some(t)) => AbelianGroupInvariants::free_plus_z2(f.len(), t.len()),
        _ => AbelianGroupInvariants::zero(),
    }
}

pub fn homology_closed_all(m: usize, nu: &FlagType) -> Result<Vec<AbelianGroupInvariants>> {
    let bases = basis_sets(m, nu)?;
    Ok((0..=bases.top_degree()).map(|q| homology_from_bases(&bases, q)).collect())
}

pub fn betti_torsion_summary(m: usize, nu: &FlagType) -> Result<BettiSummary> {
    check_args(m, nu)?;
    let (le, lo) = ell_counts(nu);
    let m64 = m as u64;
    let (b_e, b_o) = if m.is_multiple_of(2) {
        (multinomial(nu.n(), nu.parts()), 0)
    } else {
        (le, le)
    };
    Ok(BettiSummary { b_e, b_o, bp_e: (m64 / 2) * le, bp_o: m64.div_ceil(2) * lo })
}

/// The summary obtained by counting basis elements (torsion in homology degree
/// `q` contributes to cohomology degree `q + 1`).
pub fn summary_from_bases(bases: &HomologyBases) -> BettiSummary {
    let mut s = BettiSummary { b_e: 0, b_o: 0, bp_e: 0, bp_o: 0 };
    for (q, (f, t)) in bases.free.iter().zip(&bases.torsion).enumerate() {
        if q % 2 == 0 {
            s.b_e += f.len() as u64;
            s.bp_o += t.len() as u64;
        } else {
            s.b_o += f.len() as u64;
            s.bp_e += t.len() as u64;
        }
    }
    s
}

/// The summary read off integral homology groups through the universal
/// coefficient theorem.
pub fn summary_from_homology(h: &[AbelianGroupInvariants]) -> BettiSummary {
    let mut s = BettiSummary { b_e: 0, b_o: 0, bp_e: 0, bp_o: 0 };
    for (q, g) in h.iter().enumerate() {
        let z2 = g.torsion.iter().filter(|d| **d == 2.into()).count() as u64;
        if q % 2 == 0 {
            s.b_e += g.rank as u64;
            s.bp_o += z2;
        } else {
            s.b_o += g.rank as u64;
            s.bp_e += z2;
        }
    }
    s
}

/// The alternative count `floor((m-1)/2) * l_e` for the odd-degree torsion,
/// kept for comparison with the count the cellular computation produces.
pub fn odd_torsion_variant(m: usize, nu: &FlagType) -> Result<u64> {
    check_args(m, nu)?;
    let (le, _) = ell_counts(nu);
    Ok((m as u64).saturating_sub(1) / 2 * le)
}

/// `H^2(P(m, nu); Z)`.
pub fn h2(m: usize, nu: &FlagType) -> Result<AbelianGroupInvariants> {
    check_args(m, nu)?;
    Ok(if m > 1 { AbelianGroupInvariants::free_plus_z2(0, 1) } else { AbelianGroupInvariants::zero() })
}

/// `P(m, nu)` is orientable iff `m + C(nu_o, 2)` is odd.
pub fn orientable(m: usize, nu: &FlagType) -> Result<bool> {
    check_args(m, nu)?;
    let nu_o = nu.nu_odd() as u64;
    Ok((m as u64 + binomial(nu_o, 2)) % 2 == 1)
}

/// Rank of `H_r(P(m, nu); Q)` as the θ-invariant part of
/// `H_*(S^m) ⊗ H_*(CG(nu))`: the fundamental class of the sphere is fixed when
/// `m` is odd and reversed when `m` is even, and conjugation acts by `(-1)^k` on
/// `H_{2k}(CG(nu))`.
pub fn kunneth_rank(m: usize, nu: &FlagType, r: usize) -> Result<usize> {
    check_args(m, nu)?;
    let by_length: Vec<usize> = enumerate_schubert(nu).iter().map(Vec::len).collect();
    let b = |k: usize| by_length.get(k).copied().unwrap_or(0);
    let mut rank = 0;
    if r.is_multiple_of(4) {
        rank += b(r / 2);
    }
    if r >= m {
        let rest = r - m;
        if m % 2 == 1 && rest.is_multiple_of(4) {
            rank += b(rest / 2);
        }
        if m.is_multiple_of(2) && rest % 4 == 2 {
            rank += b(rest / 2);
        }
    }
    Ok(rank)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nu(s: &str) -> FlagType {
        s.parse().unwrap()
    }

    fn counts(v: &[Vec<CellLabel>]) -> Vec<usize> {
        v.iter().map(Vec::len).collect()
    }

    #[test]
    fn bases_small_cases() {
        let b = basis_sets(1, &nu("1,1")).unwrap();
        assert_eq!(counts(&b.free), vec![1, 1, 0, 0]);
        assert_eq!(counts(&b.torsion), vec![0, 0, 1, 0]);
        assert_eq!(b.torsion[2][0].sphere_index, 0);

        let b = basis_sets(2, &nu("1,1")).unwrap();
        assert_eq!(counts(&b.free), vec![1, 0, 0, 0, 1]);
        assert_eq!(b.free[4][0].sphere_index, 2);
        assert!(b.free.iter().skip(1).step_by(2).all(Vec::is_empty));

        assert_eq!(homology_closed(2, &nu("1,2"), 1).unwrap(), AbelianGroupInvariants::free_plus_z2(0, 1));
        assert!(basis_sets(0, &nu("1,1")).is_err());
    }

    #[test]
    fn summaries() {
        let s = |m, t: &str| betti_torsion_summary(m, &nu(t)).unwrap();
        assert_eq!(s(1, "1,1"), BettiSummary { b_e: 1, b_o: 1, bp_e: 0, bp_o: 1 });
        assert_eq!(s(2, "1,1"), BettiSummary { b_e: 2, b_o: 0, bp_e: 1, bp_o: 1 });
        assert_eq!(s(3, "1,2"), BettiSummary { b_e: 2, b_o: 2, bp_e: 2, bp_o: 2 });
        assert_eq!(odd_torsion_variant(2, &nu("1,1")).unwrap(), 0);
        for m in 1..=5 {
            for t in ["1,1", "1,2", "2,2", "1,1,1", "1,3"] {
                let t = nu(t);
                assert_eq!(summary_from_bases(&basis_sets(m, &t).unwrap()), betti_torsion_summary(m, &t).unwrap());
            }
        }
    }

    #[test]
    fn h2_orientability_kunneth() {
        assert!(h2(1, &nu("1,2")).unwrap().is_zero());
        assert_eq!(h2(5, &nu("2,3")).unwrap().to_string(), "Z_2");
        assert!(!orientable(1, &nu("1,1")).unwrap());
        assert!(orientable(2, &nu("1,1")).unwrap());
        assert!(orientable(1, &nu("2,2")).unwrap());
        assert_eq!(kunneth_rank(1, &nu("1,1"), 1).unwrap(), 1);
        assert_eq!(kunneth_rank(2, &nu("1,1"), 4).unwrap(), 1);
        assert_eq!(kunneth_rank(3, &nu("2,2"), 0).unwrap(), 1);
    }
}
