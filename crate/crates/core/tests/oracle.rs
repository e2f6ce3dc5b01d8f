use pretzel_core::statesum::colored_jones;
use pretzel_core::tloracle::{bracket_eval, DEFAULT_BUDGET};
use pretzel_core::PretzelSpec;

fn spec(a: u32, b: u32, c: u32) -> PretzelSpec {
    PretzelSpec::new(a, b, c).unwrap()
}

#[test]
fn diagram_and_state_sum_agree_at_color_three() {
    for s in [spec(1, 1, 1), spec(2, 1, 1), spec(3, 3, 3), spec(4, 2, 1)] {
        assert_eq!(bracket_eval(&s, 3, DEFAULT_BUDGET).unwrap(), colored_jones(3, &s).unwrap(), "({s})");
    }
}

#[test]
fn twist_region_order_does_not_matter() {
    let base = colored_jones(3, &spec(3, 2, 1)).unwrap();
    for s in [spec(2, 1, 3), spec(1, 3, 2), spec(3, 1, 2)] {
        assert_eq!(colored_jones(3, &s).unwrap(), base);
        assert_eq!(bracket_eval(&s, 3, DEFAULT_BUDGET).unwrap(), base);
    }
}

#[test]
fn budget_is_a_hard_limit() {
    assert!(bracket_eval(&spec(2, 2, 2), 4, 1_000).is_err());
}
