use std::time::Instant;

use doldlab::cohomring::verify_presentation_with;
use doldlab::flagcomb::FlagType;

#[test]
fn presentations_verify_up_to_n4() {
    for nu in FlagType::all_up_to(4) {
        for m in 1..=4 {
            let t = Instant::now();
            let r = verify_presentation_with(m, &nu, true).unwrap();
            eprintln!("m={m} nu={nu} rels={} {:?}", r.relation_count, t.elapsed());
            assert!(r.passed, "{r:?}");
        }
    }
}
