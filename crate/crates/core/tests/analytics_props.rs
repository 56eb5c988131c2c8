use issuescope_testkit::{arb_snapshot, check_analytics};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn analytics_invariants(s in arb_snapshot(25, 40)) {
        if let Err(e) = check_analytics(&s) {
            prop_assert!(false, "{}", e);
        }
    }

    #[test]
    fn analytics_are_pure(s in arb_snapshot(10, 15)) {
        use issuescope_core::analytics::*;
        use issuescope_core::theme::Theme;
        let theme = Theme::default();
        let opts = SummaryOptions::default();
        prop_assert_eq!(summarize_file_updates(&s, &opts), summarize_file_updates(&s.clone(), &opts));
        prop_assert_eq!(compute_histogram(&s, true), compute_histogram(&s.clone(), true));
        prop_assert_eq!(build_timeline(&s, TimelineMode::Labels, &theme), build_timeline(&s.clone(), TimelineMode::Labels, &theme));
    }
}
