use num_rational::Rational64;
use proptest::prelude::*;

use fuzzint::capacity::{case_rng, random_capacity_with, random_function_with, random_rational, CapacityMode};
use fuzzint::laws::random_instance;
use fuzzint::schema;
use fuzzint::{
    coseminorm_of, eval_integral, eval_integral_grid, Capacity, FiniteSpace, LawId, Realization, Semicopula,
    SimpleFunction, Subset, Value,
};

fn r64(v: &Value) -> Rational64 {
    let q = v.as_rational().expect("exact");
    Rational64::new(q.numer().try_into().unwrap(), q.denom().try_into().unwrap())
}

fn s_ref(name: &str, x: Rational64, y: Rational64) -> Rational64 {
    let (zero, one) = (Rational64::from(0), Rational64::from(1));
    match name {
        "min" => x.min(y),
        "prod" => x * y,
        "lukasiewicz" => (x + y - one).max(zero),
        "drastic" if x == one || y == one => x.min(y),
        "drastic" => zero,
        other => panic!("no reference for {other}"),
    }
}

/// `sup_t S(t, μ({f ≥ t}))` with `t` running over every multiple of `1/L`,
/// `L` the lcm of the denominators of `f`.
fn integral_ref(s: &str, mu: &Capacity, f: &SimpleFunction) -> Rational64 {
    let fv: Vec<Rational64> = f.values().iter().map(r64).collect();
    let l = fv.iter().fold(1i64, |acc, v| lcm(acc, *v.denom()));
    let mut best = Rational64::from(0);
    for k in 0..=l {
        let t = Rational64::new(k, l);
        let mut mask = 0u32;
        for (i, v) in fv.iter().enumerate() {
            if *v >= t {
                mask |= 1 << i;
            }
        }
        best = best.max(s_ref(s, t, r64(mu.measure(Subset(mask)))));
    }
    best
}

fn lcm(a: i64, b: i64) -> i64 {
    fn gcd(a: i64, b: i64) -> i64 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    a / gcd(a, b) * b
}

fn space(n: usize) -> FiniteSpace {
    FiniteSpace::with_size(n).unwrap()
}

fn capacity(n: usize, seed: u64, mode: u8) -> Capacity {
    let mode = match mode % 3 {
        0 => CapacityMode::General,
        1 => CapacityMode::Additive,
        _ => CapacityMode::Possibility,
    };
    random_capacity_with(&space(n), mode, &mut case_rng(seed, 0))
}

fn function(n: usize, seed: u64, den: u32) -> SimpleFunction {
    random_function_with(&space(n), &mut case_rng(seed, 1), |r| random_rational(r, den))
}

fn pointwise_max(a: &Capacity, b: &Capacity) -> Capacity {
    let vals = a
        .values()
        .iter()
        .zip(b.values())
        .map(|(x, y)| x.join(y).unwrap())
        .collect();
    Capacity::from_table(a.space().clone(), vals).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn matches_reference_integral(n in 1usize..=5, seed: u64, mode: u8, den in 1u32..=12) {
        let mu = capacity(n, seed, mode);
        let f = function(n, seed, den);
        for s in Semicopula::builtins() {
            let got = eval_integral(&s, &mu, &f).unwrap();
            prop_assert_eq!(r64(&got.value), integral_ref(s.name(), &mu, &f), "{}", s.name());
            // the reported threshold attains the value
            let m = fuzzint::superlevel_measure(&mu, &f, &got.argmax_threshold).unwrap();
            prop_assert_eq!(s.eval(&got.argmax_threshold, m).unwrap(), got.value);
        }
    }

    #[test]
    fn grid_oracle_agrees(seed: u64, index in 0u64..1000, k in 2i64..=40) {
        let inst = random_instance(LawId::Maxitivity, seed, index, 6).unwrap();
        let step = Value::ratio(1, k).unwrap();
        for s in Semicopula::builtins() {
            let a = eval_integral(&s, &inst.capacity, &inst.f).unwrap();
            let b = eval_integral_grid(&s, &inst.capacity, &inst.f, &step).unwrap();
            prop_assert_eq!(a.value, b.value);
        }
    }

    #[test]
    fn monotone_in_function(n in 1usize..=5, seed: u64, mode: u8) {
        let mu = capacity(n, seed, mode);
        let f = function(n, seed, 64);
        let g = function(n, seed.wrapping_add(1), 64);
        let (lo, hi) = (f.meet(&g).unwrap(), f.join(&g).unwrap());
        for s in Semicopula::builtins() {
            let i = |h: &SimpleFunction| eval_integral(&s, &mu, h).unwrap().value;
            prop_assert!(i(&lo) <= i(&f));
            prop_assert!(i(&f) <= i(&hi));
        }
    }

    #[test]
    fn monotone_in_capacity(n in 1usize..=5, seed: u64, m1: u8, m2: u8) {
        let mu = capacity(n, seed, m1);
        let nu = pointwise_max(&mu, &capacity(n, seed ^ 0x5555, m2));
        prop_assert!(mu.le(&nu).unwrap());
        let f = function(n, seed, 64);
        for s in Semicopula::builtins() {
            prop_assert!(eval_integral(&s, &mu, &f).unwrap().value <= eval_integral(&s, &nu, &f).unwrap().value);
        }
    }

    #[test]
    fn ordered_by_semicopula(n in 1usize..=5, seed: u64, mode: u8) {
        let mu = capacity(n, seed, mode);
        let f = function(n, seed, 64);
        let i = |s: Semicopula| eval_integral(&s, &mu, &f).unwrap().value;
        let (d, l, p, m) = (i(Semicopula::drastic()), i(Semicopula::lukasiewicz()), i(Semicopula::product()), i(Semicopula::min()));
        prop_assert!(d <= l && l <= p && p <= m);
    }

    #[test]
    fn bounded_by_function_range(n in 1usize..=5, seed: u64, mode: u8) {
        let mu = capacity(n, seed, mode);
        let f = function(n, seed, 64);
        for s in Semicopula::builtins() {
            let v = eval_integral(&s, &mu, &f).unwrap().value;
            prop_assert!(f.min() <= v && v <= f.max());
        }
    }

    #[test]
    fn constants_and_indicators(n in 1usize..=5, seed: u64, mode: u8, p in 0i64..=64) {
        let mu = capacity(n, seed, mode);
        let c = Value::ratio(p, 64).unwrap();
        let a = Subset((seed % (1 << n)) as u32);
        for s in Semicopula::builtins() {
            let constant = SimpleFunction::constant(mu.space().clone(), c.clone());
            prop_assert_eq!(&eval_integral(&s, &mu, &constant).unwrap().value, &c);
            let ind = SimpleFunction::indicator(mu.space().clone(), a, Realization::Exact);
            prop_assert_eq!(&eval_integral(&s, &mu, &ind).unwrap().value, mu.measure(a));
        }
    }

    #[test]
    fn dual_is_an_involution(p in 0i64..=64, q in 0i64..=64) {
        let (x, y) = (Value::ratio(p, 64).unwrap(), Value::ratio(q, 64).unwrap());
        for s in Semicopula::builtins() {
            let dual = coseminorm_of(&s);
            let back = dual.eval(&x.complement(), &y.complement()).unwrap().complement();
            prop_assert_eq!(back, s.eval(&x, &y).unwrap());
        }
    }

    #[test]
    fn exact_render_parse(p in 0i64..=1000, q in 1i64..=1000) {
        prop_assume!(p <= q);
        let v = Value::ratio(p, q).unwrap();
        prop_assert_eq!(Value::parse(&v.render(), Realization::Exact).unwrap(), v);
    }

    #[test]
    fn float_render_parse(x in 0.0f64..=1.0) {
        let v = Value::float(x).unwrap();
        prop_assert_eq!(Value::parse(&v.render(), Realization::Float).unwrap(), v);
    }

    #[test]
    fn capacity_json_round_trip(n in 1usize..=6, seed: u64, mode: u8) {
        let mu = capacity(n, seed, mode);
        let text = schema::to_text(&schema::capacity_json(&mu));
        let back = schema::parse_capacity(&text, Realization::Exact).unwrap();
        prop_assert_eq!(&back, &mu);
        prop_assert_eq!(schema::to_text(&schema::capacity_json(&back)), text);
        let f = function(n, seed, 64);
        let ftext = schema::to_text(&schema::function_json(&f));
        prop_assert_eq!(schema::parse_function(&ftext, mu.space(), Realization::Exact).unwrap(), f);
    }
}
