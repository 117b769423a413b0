use proptest::prelude::*;
use widthlab::report::ExponentReport;
use widthlab_core::intersection::TwoBallSpec;
use widthlab_core::{Exponent, ExponentParams};

fn exponent() -> impl Strategy<Value = Exponent> {
    prop_oneof![1 => Just(Exponent::INFINITY), 9 => (1.0f64..50.0).prop_map(|v| Exponent::new(v).unwrap())]
}

proptest! {
    #[test]
    fn exponent_text_and_json_round_trip(p in exponent()) {
        let back: Exponent = p.to_string().parse().unwrap();
        prop_assert_eq!(back, p);
        let json = serde_json::to_string(&p).unwrap();
        prop_assert_eq!(serde_json::from_str::<Exponent>(&json).unwrap(), p);
    }

    #[test]
    fn two_ball_specs_round_trip(nu0 in 1e-6f64..1e6, nu1 in 1e-6f64..1e6, p0 in exponent(), p1 in exponent(),
                                 q in 1.0f64..20.0, dim in 1u32..1_000_000, n in 0u64..1000) {
        let spec = TwoBallSpec { nu0, nu1, p0, p1, q: Exponent::new(q).unwrap(), dim: dim as f64, n };
        let json = serde_json::to_string(&spec).unwrap();
        prop_assert_eq!(serde_json::from_str::<TwoBallSpec>(&json).unwrap(), spec);
    }

    #[test]
    fn exponent_reports_round_trip(p0 in exponent(), p1 in exponent(), q in 1.0f64..6.0, s in 0.05f64..3.0,
                                   g in prop_oneof![Just(0.0), 0.05f64..2.0], mu in -1.5f64..1.5, al in -1.5f64..1.5) {
        let p = ExponentParams::new(p0, p1, Exponent::new(q).unwrap(), s, g, mu, al).unwrap();
        let Ok(report) = ExponentReport::build(&p) else { return Ok(()) };
        let json = serde_json::to_string(&report).unwrap();
        prop_assert_eq!(serde_json::from_str::<ExponentReport>(&json).unwrap(), report);
    }
}
