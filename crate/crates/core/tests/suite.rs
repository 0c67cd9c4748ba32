use carpet_core::verify::{run_suite, Status, SuiteConfig};
use carpet_core::Base;

#[test]
fn suite_passes_and_is_byte_stable() {
    for p in [3, 5] {
        let cfg = SuiteConfig::new(Base::new(p).unwrap(), 0);
        let a = run_suite(&cfg);
        assert!(a.all_pass(), "{}", a.to_json());
        assert_eq!(a.claims.len(), 12);
        assert!(a.claims.iter().all(|c| c.status == Status::Pass && c.millis == 0 && c.witness.is_none()));
        if p == 3 {
            assert_eq!(a.to_json(), run_suite(&cfg).to_json());
        }
    }
}

#[test]
fn claim_ids_are_in_order() {
    let cfg = SuiteConfig::new(Base::new(3).unwrap(), 1);
    let report = run_suite(&cfg);
    let ids: Vec<&str> = report.claims.iter().map(|c| c.id.as_str()).collect();
    assert_eq!(ids[0], "tile-counts");
    assert_eq!(ids[11], "render-faithfulness");
    assert_eq!(report.seed, 1);
}
