use doldlab::chains::{dold_chain_complex, fixed_subcomplex_ranks, product_complex_with_involution};
use doldlab::closedform::{homology_closed_all, kunneth_rank, orientable};
use doldlab::flagcomb::FlagType;
use doldlab::homalg::{homology_all, AbelianGroupInvariants};
use num_bigint::BigInt;

#[test]
fn closed_form_matches_smith_normal_form() {
    for nu in FlagType::all_up_to(5) {
        for m in 1..=6 {
            let oracle = homology_all(&dold_chain_complex(m, &nu).unwrap());
            let closed = homology_closed_all(m, &nu).unwrap();
            assert_eq!(oracle, closed, "m={m} nu={nu}");
        }
    }
}

#[test]
fn torsion_is_elementary_two() {
    for nu in FlagType::all_up_to(4) {
        for m in 1..=5 {
            for h in homology_all(&dold_chain_complex(m, &nu).unwrap()) {
                assert!(h.torsion.iter().all(|d| *d == BigInt::from(2)), "m={m} nu={nu}");
            }
        }
    }
}

#[test]
fn fixed_ranks_and_kunneth_match_oracle_ranks() {
    for nu in FlagType::all_up_to(4) {
        for m in 1..=4 {
            let oracle: Vec<usize> =
                homology_all(&dold_chain_complex(m, &nu).unwrap()).iter().map(|h| h.rank).collect();
            let (c, theta) = product_complex_with_involution(m, &nu).unwrap();
            assert_eq!(fixed_subcomplex_ranks(&c, &theta), oracle, "m={m} nu={nu}");
            let kunneth: Vec<usize> = (0..oracle.len()).map(|r| kunneth_rank(m, &nu, r).unwrap()).collect();
            assert_eq!(kunneth, oracle, "m={m} nu={nu}");
        }
    }
}

#[test]
fn orientability_matches_top_homology() {
    for nu in FlagType::all_up_to(5) {
        for m in 1..=6 {
            let h = homology_all(&dold_chain_complex(m, &nu).unwrap());
            let top = h.last().unwrap();
            assert_eq!(orientable(m, &nu).unwrap(), *top == AbelianGroupInvariants::free(1), "m={m} nu={nu}");
        }
    }
}
