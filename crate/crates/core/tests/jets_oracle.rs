use galileo_core::corpus::random_expr;
use galileo_core::jets::fd::{bivariate, univariate, FdSteps};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn close(jet: f64, fd: f64) -> bool {
    (jet - fd).abs() <= (1e-5 * jet.abs()).max(1e-7)
}

#[test]
fn random_trees_match_finite_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x6a65_7473);
    let steps = FdSteps::default();
    for i in 0..1000 {
        let e = random_expr(&mut rng, 6, &["u", "v"]);
        let (u, v): (f64, f64) = (rng.gen_range(-0.9..0.9), rng.gen_range(-0.9..0.9));
        let jet = e.eval_jet2(u, v).unwrap();
        let fd = bivariate(|a, b| e.eval_value(&[a, b]), u, v, steps).unwrap();
        let pairs = [
            (jet.c00, fd.c00),
            (jet.c10, fd.c10),
            (jet.c01, fd.c01),
            (jet.c20, fd.c20),
            (jet.c11, fd.c11),
            (jet.c02, fd.c02),
        ];
        for (k, (a, b)) in pairs.into_iter().enumerate() {
            assert!(close(a, b), "#{i} slot {k}: {e} at ({u}, {v}): jet {a} fd {b}");
        }
    }
}

#[test]
fn random_univariate_trees_match_finite_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x6a31);
    let steps = FdSteps::default();
    for i in 0..1000 {
        let e = random_expr(&mut rng, 6, &["u"]);
        let u: f64 = rng.gen_range(-0.9..0.9);
        let jet = e.eval_jet1(u).unwrap();
        let fd = univariate(|a| e.eval_value(&[a]), u, steps).unwrap();
        for (k, (a, b)) in [(jet.c0, fd.c0), (jet.c1, fd.c1), (jet.c2, fd.c2)]
            .into_iter()
            .enumerate()
        {
            assert!(close(a, b), "#{i} order {k}: {e} at {u}: jet {a} fd {b}");
        }
    }
}
