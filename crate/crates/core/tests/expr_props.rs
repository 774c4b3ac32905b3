use galileo_core::corpus::random_expr;
use galileo_core::expr::{Expr, ParseError};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const TOKENS: &[&str] = &[
    "u", "v", "w", "1", "2.5", "1e-3", ".5", "3.", "+", "-", "*", "/", "^", "(", ")", "sin", "cos", "tan", "asin",
    "atan", "exp", "log", "sqrt", "sinh", "cosh", "pi", " ", ",", "$", "é", "1e", "foo",
];

fn source() -> impl Strategy<Value = String> {
    prop::collection::vec(prop::sample::select(TOKENS), 0..24).prop_map(|t| t.concat())
}

proptest! {
    #[test]
    fn parsing_is_total(src in source()) {
        match Expr::parse(&src, &["u", "v"]) {
            Ok(e) => {
                let again = Expr::parse(&e.to_string(), &["u", "v"]).unwrap();
                prop_assert_eq!(again.root(), e.root());
            }
            Err(err) => {
                let pos = err.position().expect("grammar errors carry a position");
                prop_assert!(pos <= src.len(), "{} for {:?}", err, src);
            }
        }
    }

    #[test]
    fn arbitrary_text_never_panics(src in ".{0,40}") {
        if let Err(e) = Expr::parse(&src, &["u"]) {
            prop_assert!(!matches!(e, ParseError::InvalidVariables(_)));
        }
    }

    #[test]
    fn printed_random_trees_reparse(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let e = random_expr(&mut rng, 6, &["u", "v"]);
        let again = Expr::parse(&e.to_string(), &["u", "v"]).unwrap();
        prop_assert_eq!(again.root(), e.root());
    }

    #[test]
    fn evaluation_is_deterministic(seed in any::<u64>(), u in -1.0f64..1.0, v in -1.0f64..1.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let e = random_expr(&mut rng, 6, &["u", "v"]);
        let a = e.eval_jet2(u, v).unwrap();
        let b = e.eval_jet2(u, v).unwrap();
        prop_assert_eq!(a.c00.to_bits(), b.c00.to_bits());
        prop_assert_eq!(a.c11.to_bits(), b.c11.to_bits());
        let x: f64 = e.eval_value(&[u, v]).unwrap();
        prop_assert_eq!(x.to_bits(), a.c00.to_bits());
    }
}
