use issuescope_testkit::{arb_snapshot, check_roundtrip};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn save_then_load_is_identity(s in arb_snapshot(20, 20)) {
        let tmp = tempfile::tempdir().unwrap();
        if let Err(e) = check_roundtrip(&s, &tmp.path().join("snap")) {
            prop_assert!(false, "{}", e);
        }
    }
}
