use std::sync::Arc;

use flagcalc_cli::document::{eval, Value};
use flagcalc_cli::syntax::parse_expr;
use flagcalc_core::{Form, FrameBuilder, FrameSpace, Scalar};
use proptest::prelude::*;

const VARS: [&str; 3] = ["x", "y", "a"];

fn frame() -> Arc<FrameSpace> {
    FrameBuilder::new(&["theta", "Z1", "Z2"]).unwrap().build_unchecked()
}

type Term = (i64, i64, i64, [u32; 3]);

fn poly(terms: &[Term]) -> Scalar {
    let mut acc = Scalar::zero();
    for &(re, im, den, exps) in terms {
        let c = &Scalar::ratio(re, den) + &(&Scalar::ratio(im, den) * &Scalar::i());
        let mut t = c;
        for (v, e) in VARS.iter().zip(exps) {
            t = &t * &Scalar::var(v).pow(e as i32).unwrap();
        }
        acc = &acc + &t;
    }
    acc
}

fn terms() -> impl Strategy<Value = Vec<Term>> {
    prop::collection::vec((-9i64..10, -3i64..4, 1i64..6, [0u32..3, 0u32..3, 0u32..3]), 0..4)
}

fn reparse(s: &str, frame: &Arc<FrameSpace>) -> Value {
    eval(&parse_expr(s, 1, 1).unwrap_or_else(|e| panic!("{s}: {e}")), frame).unwrap_or_else(|e| panic!("{s}: {e}"))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn scalars_reparse_to_equal_values(num in terms(), den in terms(), shift in -2i32..3) {
        let d = poly(&den);
        prop_assume!(!d.is_trivially_zero());
        let s = &poly(&num).try_div(&d).unwrap() * &Scalar::var("a").pow(shift).unwrap();
        let printed = s.to_string();
        let Value::Scalar(back) = reparse(&printed, &frame()) else { panic!("{printed} is not a scalar") };
        prop_assert!((&back - &s).is_trivially_zero(), "{} vs {}", printed, back);
        prop_assert_eq!(back.to_string(), printed);
    }

    #[test]
    fn forms_reparse_to_equal_values(c0 in terms(), c1 in terms(), c2 in terms()) {
        let f = frame();
        let b = f.basis_forms();
        let form: Form = b[0].wedge(&b[1]).scale(&poly(&c0))
            .try_add(&b[0].wedge(&b[2]).scale(&poly(&c1))).unwrap()
            .try_add(&b[1].wedge(&b[2]).scale(&poly(&c2))).unwrap();
        let printed = form.to_string();
        let back = match reparse(&printed, &f) {
            Value::Form(g) => g,
            Value::Scalar(s) => {
                prop_assert!(s.is_trivially_zero());
                Form::zero(&f, 2)
            }
        };
        prop_assert!(form.try_sub(&back).unwrap().is_trivially_zero(), "{}", printed);
        prop_assert_eq!(back.to_string(), printed);
    }
}
