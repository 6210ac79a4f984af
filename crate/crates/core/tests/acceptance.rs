//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on failure.

use std::time::{Duration, Instant};

use doldlab::chains::dold_chain_complex;
use doldlab::closedform::{betti_torsion_summary, h2, homology_closed_all, odd_torsion_variant, orientable};
use doldlab::cohomring::{f_polys, verify_presentation, StaircaseRing};
use doldlab::flagcomb::{euler_char_complex, euler_char_real, length_histogram, multinomial, poincare_polynomial, FlagType};
use doldlab::homalg::{cohomology_from_homology, homology_all, AbelianGroupInvariants};
use doldlab::ktheory::{fujii_table, k_summary, verify_k_flag_relations, verify_k_identities};
use doldlab::sweep::adams_laws_hold;
use num_bigint::BigInt;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let took = start.elapsed();
    ensure(took < limit, || format!("took {took:.2?}, limit {limit:?}"))
}

fn oracle(m: usize, nu: &FlagType) -> Vec<AbelianGroupInvariants> {
    homology_all(&dold_chain_complex(m, nu).unwrap())
}

fn homology_oracle() -> Outcome {
    let start = Instant::now();
    let mut cases = 0;
    for nu in FlagType::all_up_to(5) {
        for m in 1..=6 {
            let closed = homology_closed_all(m, &nu).map_err(|e| e.to_string())?;
            let expected = oracle(m, &nu);
            ensure(closed == expected, || format!("m={m} nu={nu}: closed {closed:?} vs oracle {expected:?}"))?;
            cases += 1;
        }
    }
    within(start, Duration::from_secs(30))?;
    Ok(format!("{cases} cases in {:.2?}", start.elapsed()))
}

fn classical_table() -> Outcome {
    let mut cases = 0;
    for m in 1..=8 {
        for k in 1..=6 {
            let nu = FlagType::new(vec![1, k]).unwrap();
            let f = fujii_table(m, k).map_err(|e| e.to_string())?;
            let s = k_summary(m, &nu).map_err(|e| e.to_string())?;
            let tag = format!("m={m} n-1={k}");
            ensure((f.b_e, f.b_o) == (s.k0_rank, s.k1_rank), || format!("{tag}: ranks {f:?} vs {s:?}"))?;
            let pow = |e: u64| BigInt::from(2).pow(e as u32);
            ensure(BigInt::from(f.order_a0) >= pow((m / 2) as u64), || format!("{tag}: o(A0) below 2^floor(m/2)"))?;
            ensure(BigInt::from(f.order_a0) <= pow(s.k0_torsion_exponent_bound), || format!("{tag}: o(A0) = {} above 2^{}", f.order_a0, s.k0_torsion_exponent_bound))?;
            ensure(BigInt::from(f.order_a1) <= pow(s.k1_torsion_exponent_bound), || format!("{tag}: o(A1) = {} above 2^{}", f.order_a1, s.k1_torsion_exponent_bound))?;
            cases += 1;
        }
    }
    Ok(format!("{cases} rows"))
}

fn combinatorics() -> Outcome {
    let start = Instant::now();
    let types = FlagType::all_up_to(7);
    for nu in &types {
        let p = poincare_polynomial(nu).map_err(|e| e.to_string())?;
        let hist = length_histogram(nu);
        let coeffs: Vec<BigInt> = (0..=nu.dim_complex()).map(|k| p.coefficient(k)).collect();
        let expected: Vec<BigInt> = hist.iter().map(|&c| BigInt::from(c)).collect();
        ensure(coeffs == expected, || format!("{nu}: {p} vs histogram {hist:?}"))?;
        ensure(p.eval(&BigInt::from(1)) == BigInt::from(multinomial(nu.n(), nu.parts())), || format!("{nu}: Q(1)"))?;
        ensure(euler_char_complex(nu) == multinomial(nu.n(), nu.parts()), || format!("{nu}: complex Euler characteristic"))?;
        ensure(p.eval(&BigInt::from(-1)) == BigInt::from(euler_char_real(nu)), || format!("{nu}: Q(-1)"))?;
        ensure(p.is_palindromic(), || format!("{nu}: not palindromic"))?;
    }
    within(start, Duration::from_secs(5))?;
    Ok(format!("{} flag types in {:.2?}", types.len(), start.elapsed()))
}

fn relation_vanishing() -> Outcome {
    let start = Instant::now();
    let types = FlagType::all_up_to(6);
    for nu in &types {
        let ring = StaircaseRing::new(nu);
        if let Some(r) = f_polys(&ring).iter().position(|f| !f.is_zero()) {
            return Err(format!("{nu}: f_{} does not vanish", r + 1));
        }
    }
    let small = FlagType::all_up_to(5);
    for nu in &small {
        let r = verify_k_flag_relations(nu).map_err(|e| e.to_string())?;
        ensure(r.passed, || format!("{nu}: ch(h_{:?}) differs from C(n, p)", r.first_failing_p))?;
    }
    Ok(format!("{} rings, {} K-theory checks in {:.2?}", types.len(), small.len(), start.elapsed()))
}

fn presentations() -> Outcome {
    let start = Instant::now();
    let mut cases = 0;
    for nu in FlagType::all_up_to(4) {
        for m in 1..=4 {
            let r = verify_presentation(m, &nu).map_err(|e| e.to_string())?;
            ensure(r.passed, || format!("m={m} nu={nu}: relation {:?}, degree {:?}", r.first_nonvanishing_relation, r.first_failing_degree))?;
            cases += 1;
        }
    }
    within(start, Duration::from_secs(60))?;
    Ok(format!("{cases} cases in {:.2?}", start.elapsed()))
}

fn k_identities() -> Outcome {
    let mut cases = 0;
    for nu in FlagType::all_up_to(4) {
        for m in [2, 4] {
            let r = verify_k_identities(m, &nu).map_err(|e| e.to_string())?;
            ensure(r.passed && r.identity_iii && r.identity_iv && r.sandwich && r.delta_relations, || {
                format!("m={m} nu={nu}: {:?}", r.first_failure)
            })?;
            ensure(r.fix_rank as u64 == r.b_e, || format!("m={m} nu={nu}: Fix rank {} vs b_e {}", r.fix_rank, r.b_e))?;
            cases += 1;
        }
    }
    for m in 1..=12 {
        ensure(adams_laws_hold(m), || format!("Adams ring laws fail for m={m}"))?;
    }
    Ok(format!("{cases} identity cases, Adams ring m <= 12"))
}

fn spot_values() -> Outcome {
    let nu11 = FlagType::new(vec![1, 1]).unwrap();
    let expected = vec![
        AbelianGroupInvariants::free(1),
        AbelianGroupInvariants::free(1),
        AbelianGroupInvariants::free_plus_z2(0, 1),
        AbelianGroupInvariants::zero(),
    ];
    let got = oracle(1, &nu11);
    ensure(got == expected, || format!("H_*(P(1,(1,1))) = {got:?}"))?;
    let mut cases = 0;
    for nu in FlagType::all_up_to(5) {
        for m in 1..=6 {
            let h = oracle(m, &nu);
            let want = if m > 1 { AbelianGroupInvariants::free_plus_z2(0, 1) } else { AbelianGroupInvariants::zero() };
            let uct = cohomology_from_homology(&h, 2);
            let closed = h2(m, &nu).map_err(|e| e.to_string())?;
            ensure(uct == want && closed == want, || format!("m={m} nu={nu}: H^2 oracle {uct}, closed {closed}"))?;
            let top_free = h.last() == Some(&AbelianGroupInvariants::free(1));
            ensure(orientable(m, &nu).unwrap() == top_free, || format!("m={m} nu={nu}: orientability"))?;
            cases += 1;
        }
    }
    Ok(format!("{cases} cases"))
}

fn discrepancy() -> Outcome {
    let mut found = Vec::new();
    for nu in FlagType::all_up_to(5) {
        for m in 1..=6 {
            let h = oracle(m, &nu);
            let odd_torsion: usize = (1..=h.len()).step_by(2).map(|q| cohomology_from_homology(&h, q).torsion.len()).sum();
            let body = betti_torsion_summary(m, &nu).unwrap().bp_o;
            ensure(body == odd_torsion as u64, || format!("m={m} nu={nu}: b'_o {body} vs oracle {odd_torsion}"))?;
            let variant = odd_torsion_variant(m, &nu).unwrap();
            if variant != body {
                found.push(format!("m={m} nu={nu}: alternative {variant}, oracle {odd_torsion}"));
            }
        }
    }
    let witness = found.iter().find(|s| s.starts_with("m=2 nu=(1,1):")).ok_or("m=2, nu=(1,1) not flagged")?;
    Ok(format!("{} disagreements, including {witness}", found.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("homology closed form vs Smith normal form", homology_oracle),
        ("classical Dold K-theory table", classical_table),
        ("combinatorial identities", combinatorics),
        ("relation vanishing", relation_vanishing),
        ("presentation verification", presentations),
        ("K-theory identities", k_identities),
        ("spot values", spot_values),
        ("odd torsion discrepancy", discrepancy),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {} {name}: PASS ({detail})", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {} {name}: FAIL ({detail})", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
