mod common;

use periodica::{canonical_code, parse_diagram, serialize, shadow_code, validate_diagram};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn text_round_trip_preserves_the_code(seed in any::<u64>(), steps in 0usize..8) {
        let d = common::random_diagram(&mut common::rng(seed), steps);
        let back = parse_diagram(&serialize(&d)).unwrap();
        prop_assert_eq!(canonical_code(&back).unwrap(), canonical_code(&d).unwrap());
    }

    #[test]
    fn codes_ignore_labels(seed in any::<u64>(), steps in 0usize..8) {
        let mut rng = common::rng(seed);
        let d = common::random_diagram(&mut rng, steps);
        let n = d.nodes().len();
        let mut perm: Vec<u32> = (0..n as u32).collect();
        perm.shuffle(&mut rng);
        let rot: Vec<u8> = (0..n).map(|_| rng.random_range(0..4)).collect();
        let e = d.relabelled(&perm, &rot);
        prop_assert_eq!(canonical_code(&e).unwrap(), canonical_code(&d).unwrap());
        prop_assert_eq!(shadow_code(&e).unwrap(), shadow_code(&d).unwrap());
    }

    #[test]
    fn walks_stay_valid_and_changes_keep_the_shadow(seed in any::<u64>(), steps in 0usize..8) {
        let d = common::random_diagram(&mut common::rng(seed), steps);
        prop_assert!(validate_diagram(&d).is_valid());
        for x in d.crossings() {
            let once = d.crossing_change(x).unwrap();
            prop_assert!(validate_diagram(&once).is_valid());
            prop_assert_eq!(shadow_code(&once).unwrap(), shadow_code(&d).unwrap());
            prop_assert_eq!(&once.crossing_change(x).unwrap(), &d);
        }
    }
}
