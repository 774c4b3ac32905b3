use super::{BinOp, EvalError, Node};
use crate::jets::{Elementary, JetError, Taylor};
use crate::scalar::Scalar;

pub(super) fn eval<T: Scalar, J: Taylor<T>>(node: &Node, args: &[J], vars: &[String]) -> Result<J, EvalError> {
    let at = |e: JetError| EvalError::Jet {
        source: e,
        subexpr: node.display(vars).to_string(),
    };
    match node {
        Node::Const(c) => Ok(J::constant(T::lit(*c))),
        Node::Var(i) => Ok(args[*i]),
        Node::Neg(a) => Ok(-eval(a, args, vars)?),
        Node::Binary(op, a, b) => {
            let lhs = eval(a, args, vars)?;
            match op {
                BinOp::Pow => power(lhs, b, args, vars).map_err(at),
                _ => {
                    let rhs = eval(b, args, vars)?;
                    let op = match op {
                        BinOp::Add => crate::jets::ArithOp::Add,
                        BinOp::Sub => crate::jets::ArithOp::Sub,
                        BinOp::Mul => crate::jets::ArithOp::Mul,
                        _ => crate::jets::ArithOp::Div,
                    };
                    lhs.arith(&rhs, op).map_err(at)
                }
            }
        }
        Node::Call(f, a) => eval(a, args, vars)?.apply(f.elementary()).map_err(at),
        Node::Sampled(table, a) => {
            let inner = eval(a, args, vars)?;
            let x = inner.value().to_f64_lossy();
            let d = table.derivatives(x).ok_or_else(|| {
                let (lo, hi) = table.range();
                EvalError::OutsideSampledRange {
                    name: table.name().to_string(),
                    at: x,
                    lo,
                    hi,
                }
            })?;
            let out = inner.chain(d.map(T::lit));
            if out.all_finite() {
                Ok(out)
            } else {
                Err(at(JetError::NonFinite))
            }
        }
    }
}

/// Integer constant exponents multiply in jet space; other constant
/// exponents need a positive base; variable exponents go through
/// `exp(b * ln a)`.
fn power<T: Scalar, J: Taylor<T>>(base: J, exp: &Node, args: &[J], vars: &[String]) -> Result<J, JetError> {
    if exp.is_constant() {
        let p = eval::<f64, f64>(exp, &[], vars).map_err(|e| match e {
            EvalError::Jet { source, .. } => source,
            _ => JetError::NonFinite,
        })?;
        if p.fract() == 0.0 && p.abs() <= i32::MAX as f64 {
            return base.powi(p as i64);
        }
        return base.apply(Elementary::Powf(p));
    }
    let e = eval(exp, args, vars).map_err(|e| match e {
        EvalError::Jet { source, .. } => source,
        _ => JetError::NonFinite,
    })?;
    let ln = base.apply(Elementary::Ln)?;
    (e * ln).apply(Elementary::Exp)
}

#[cfg(test)]
mod tests {
    use crate::expr::{EvalError, Expr};
    use crate::jets::{Jet1, Jet2, JetError};

    fn e1(src: &str) -> Expr {
        Expr::parse(src, &["u"]).unwrap()
    }

    #[test]
    fn monomial_jet() {
        let j = e1("u^3").eval_jet1(2.0_f64).unwrap();
        assert_eq!(j, Jet1::new(8.0, 12.0, 12.0, 6.0));
    }

    #[test]
    fn sine_maclaurin() {
        let j = e1("sin(u)").eval_jet1(0.0_f64).unwrap();
        assert_eq!(j, Jet1::new(0.0, 1.0, 0.0, -1.0));
    }

    #[test]
    fn bilinear_jet2() {
        let e = Expr::parse("u*v", &["u", "v"]).unwrap();
        assert_eq!(
            e.eval_jet2(1.0_f64, 2.0).unwrap(),
            Jet2::new(2.0, 2.0, 1.0, 0.0, 1.0, 0.0)
        );
        let e = Expr::parse("u^2+v^2", &["u", "v"]).unwrap();
        assert_eq!(
            e.eval_jet2(0.0_f64, 0.0).unwrap(),
            Jet2::new(0.0, 0.0, 0.0, 2.0, 0.0, 2.0)
        );
    }

    #[test]
    fn domain_errors_name_the_subexpression() {
        let err = e1("1 + sqrt(u - 2)").eval_jet1(1.0_f64).unwrap_err();
        match err {
            EvalError::Jet {
                source:
                    JetError::Domain {
                        function: "sqrt",
                        argument,
                    },
                subexpr,
            } => {
                assert_eq!(argument, -1.0);
                assert_eq!(subexpr, "sqrt(u - 2.0)");
            }
            other => panic!("unexpected {other:?}"),
        }
        let err = e1("1/(u-1)").eval_value(&[1.0_f64]).unwrap_err();
        assert!(matches!(
            err,
            EvalError::Jet {
                source: JetError::DivisionByZero,
                ..
            }
        ));
        assert!(e1("log(u)").eval_jet1(0.0_f64).is_err());
        assert!(e1("asin(u)").eval_jet1(1.5_f64).is_err());
        assert!(e1("exp(u)").eval_jet1(1000.0_f64).is_err());
    }

    #[test]
    fn powers() {
        // integer exponents work for negative bases
        assert_eq!(e1("u^3").eval_value(&[-2.0_f64]).unwrap(), -8.0);
        assert_eq!(e1("u^-2").eval_value(&[-2.0_f64]).unwrap(), 0.25);
        // fractional exponents need a positive base
        assert!((e1("u^0.5").eval_value(&[4.0_f64]).unwrap() - 2.0).abs() < 1e-15);
        assert!(e1("u^0.5").eval_value(&[-4.0_f64]).is_err());
        // variable exponent
        let j = e1("u^u").eval_jet1(1.0_f64).unwrap();
        assert!((j.c0 - 1.0).abs() < 1e-15);
        assert!((j.c1 - 1.0).abs() < 1e-15);
        assert!((j.c2 - 2.0).abs() < 1e-14);
        assert!((j.c3 - 3.0).abs() < 1e-14);
    }

    #[test]
    fn arity_checked_on_eval() {
        let e = Expr::parse("u*v", &["u", "v"]).unwrap();
        assert_eq!(e.eval_value(&[1.0_f64]), Err(EvalError::Arity { expected: 2, got: 1 }));
    }

    #[test]
    fn deterministic_bits() {
        let e = e1("exp(sin(u)^2) / (1 + u^2) - atan(3*u)");
        let a = e.eval_jet1(0.7312_f64).unwrap();
        let b = e.eval_jet1(0.7312_f64).unwrap();
        assert_eq!(a.to_array().map(f64::to_bits), b.to_array().map(f64::to_bits));
    }

    #[test]
    fn works_in_single_precision() {
        let j = e1("u^3").eval_jet1(2.0_f32).unwrap();
        assert_eq!(j, Jet1::new(8.0_f32, 12.0, 12.0, 6.0));
    }
}
