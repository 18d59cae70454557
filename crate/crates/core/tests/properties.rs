use std::sync::OnceLock;

use ising_peel::algebra::{rat, Field, QuadSurd, Rational};
use ising_peel::experiments::{parse_csv, parse_json, to_csv, to_json, PassRule, Provenance, StatResult};
use ising_peel::laws::{displacement, sample_event, Regime};
use ising_peel::map::{sample_finite_map, validate_map, ColoredPlanarMap, Expected};
use ising_peel::sim::{barrier_f, LawProvider, RngStream};
use ising_peel::tutte::{build_evaluated_table, build_exact_table, CoeffTable, ExactTable};
use proptest::prelude::*;

fn surd() -> impl Strategy<Value = QuadSurd> {
    (-30i64..30, 1i64..12, -30i64..30, 1i64..12).prop_map(|(an, ad, bn, bd)| QuadSurd::from_ints(an, ad, bn, bd))
}

fn exact_table() -> &'static ExactTable {
    static T: OnceLock<ExactTable> = OnceLock::new();
    T.get_or_init(|| build_exact_table(9, 6).unwrap())
}

fn table_at_two() -> &'static CoeffTable<Rational> {
    static T: OnceLock<CoeffTable<Rational>> = OnceLock::new();
    T.get_or_init(|| build_evaluated_table(12, 8, rat(2, 1)).unwrap())
}

fn laws() -> &'static LawProvider {
    static L: OnceLock<LawProvider> = OnceLock::new();
    L.get_or_init(|| LawProvider::shared().unwrap())
}

proptest! {
    #[test]
    fn surd_field_axioms(x in surd(), y in surd(), z in surd()) {
        prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert_eq!(&(&x - &y) + &y, x.clone());
        if !x.is_zero() {
            prop_assert_eq!(&x * &x.inv(), QuadSurd::one());
            prop_assert_eq!(&(&y / &x) * &x, y.clone());
        }
    }

    #[test]
    fn surd_norm_and_sign(x in surd(), y in surd()) {
        prop_assert_eq!((&x * &y).norm(), x.norm() * y.norm());
        prop_assert_eq!(&x * &x.conj(), QuadSurd::from_rational(x.norm()));
        let f = x.to_f64();
        if f.abs() > 1e-9 {
            prop_assert_eq!(x.sign(), if f > 0.0 { 1 } else { -1 });
        }
        prop_assert_eq!(x.cmp_value(&y), x.to_f64().partial_cmp(&y.to_f64()).unwrap());
    }

    #[test]
    fn coefficients_are_spin_symmetric(p in 0usize..6, q in 0usize..6, n in 0usize..10) {
        prop_assume!(p + q <= 6);
        let t = exact_table();
        prop_assert_eq!(t.get(p, q, n), t.get(q, p, n));
    }

    #[test]
    fn coefficients_are_positive_on_their_support(p in 0usize..5, q in 0usize..5, n in 0usize..13) {
        prop_assume!(p + q >= 1 && p + q <= 8);
        let t = table_at_two();
        let prop_on = n % 2 == (p + q) % 2 && n + 2 >= p + q;
        let c = t.get(p, q, n);
        if prop_on {
            prop_assert!(c > Rational::from_int(0), "z[{},{},{}] = {}", p, q, n, c);
        } else {
            prop_assert_eq!(c, Rational::from_int(0));
        }
    }

    #[test]
    fn sampled_maps_round_trip_and_satisfy_euler(seed in any::<u64>(), p in 0usize..4, q in 1usize..4, extra in 0usize..4) {
        let base = if p + q >= 2 { p + q - 2 } else { p + q };
        let n = base + 2 * extra;
        prop_assume!(n >= 1);
        let mut rng = RngStream::new(seed, 0).rng();
        let m = sample_finite_map(p, q, n, table_at_two(), &mut rng).unwrap();
        let rep = validate_map(&m, 2.0, &Expected { p: Some(p), q: Some(q), faces: Some(n), weight: None });
        prop_assert!(rep.ok(), "{}", rep);
        prop_assert_eq!(rep.vertices + rep.faces, rep.edges + 2);
        prop_assert_eq!(3 * n + p + q, 2 * rep.edges);
        let back = ColoredPlanarMap::from_text(&m.to_text()).unwrap();
        prop_assert_eq!(&back, &m);
        let json: ColoredPlanarMap = serde_json::from_str(&serde_json::to_string(&m).unwrap()).unwrap();
        prop_assert_eq!(json.canonical_form(), m.canonical_form());
    }

    #[test]
    fn halfplane_events_keep_perimeters_valid(seed in any::<u64>(), p in 0u64..200) {
        let r = Regime::Halfplane { p };
        let law = laws().law(&r).unwrap();
        let mut rng = RngStream::new(seed, 1).rng();
        let e = sample_event(&law, &mut rng).unwrap().unwrap();
        prop_assert!(r.supports(&e));
        let d = displacement(&e, &r).unwrap();
        prop_assert!(p as i64 + d.dx >= 0);
    }

    #[test]
    fn barrier_is_increasing(eps in 0.01f64..2.0, n in 0u64..1_000_000) {
        prop_assert!(barrier_f(eps, n + 1).unwrap() > barrier_f(eps, n).unwrap());
    }

    #[test]
    fn reports_round_trip(est in -1e6f64..1e6, lo in -1e3f64..0.0, hi in 0.0f64..1e3, seed in proptest::option::of(any::<u64>())) {
        let r = StatResult::new("drift", "mean_x", est)
            .ci(est + lo, est + hi)
            .target(est, Provenance::Derived)
            .judge(PassRule::TargetInCi, None);
        let r = StatResult { seed, ..r };
        let v = vec![r];
        prop_assert_eq!(parse_json(&to_json(&v).unwrap()).unwrap(), v.clone());
        let rows = parse_csv(&to_csv(&v).unwrap()).unwrap();
        prop_assert_eq!(rows.len(), 1);
        prop_assert_eq!(rows[0].estimate, est);
        prop_assert_eq!(rows[0].seed, seed);
    }
}
