//! Seeded random expressions, surfaces and motions for property checks.
//!
//! Generated trees stay within |value| ≤ 2 for |u|, |v| ≤ 1: every
//! operator maps inputs bounded by 2 to outputs bounded by 2, and every
//! restricted function only sees arguments well inside its domain.

use rand::Rng;

use crate::error::GeometryError;
use crate::expr::{Expr, Func, Node};
use crate::galilean::GalileanMotion;
use crate::surfaces::{Rect, Surface};

/// Smallest W accepted at a corpus sample point.
pub const MIN_W: f64 = 1e-2;

fn half(n: Node) -> Node {
    Node::c(0.5) * n
}

fn shift(k: f64, n: Node) -> Node {
    Node::c(k) + n
}

/// A random tree of depth at most `depth` in variables `0..nvars`.
pub fn random_node<R: Rng>(rng: &mut R, depth: usize, nvars: usize) -> Node {
    if depth == 0 || rng.gen_bool(0.2) {
        return match rng.gen_range(0..3) {
            0 => Node::c((rng.gen_range(-1.0..1.0f64) * 100.0).round() / 100.0),
            _ => Node::var(rng.gen_range(0..nvars)),
        };
    }
    let sub = |rng: &mut R| random_node(rng, depth - 1, nvars);
    match rng.gen_range(0..17) {
        0 => half(sub(rng) + sub(rng)),
        1 => half(sub(rng) - sub(rng)),
        2 => half(sub(rng) * sub(rng)),
        3 => sub(rng) / shift(3.0, sub(rng)),
        4 => half(sub(rng).pow(Node::c(2.0))),
        5 => Node::c(0.25) * sub(rng).pow(Node::c(3.0)),
        6 => shift(3.0, sub(rng)).pow(Node::c(0.5)) * Node::c(0.5),
        7 => Node::call(Func::Sin, sub(rng)),
        8 => Node::call(Func::Cos, sub(rng)),
        9 => Node::call(Func::Atan, sub(rng)),
        10 => half(Node::call(Func::Exp, half(sub(rng)))),
        11 => Node::call(Func::Log, shift(3.0, sub(rng))),
        12 => half(Node::call(Func::Sqrt, shift(3.0, sub(rng)))),
        13 => Node::call(Func::Asin, sub(rng) / Node::c(3.0)),
        14 => Node::call(Func::Tan, sub(rng) / Node::c(3.0)),
        15 => Node::call(Func::Sinh, half(sub(rng))),
        _ => Node::call(Func::Cosh, half(sub(rng))),
    }
}

pub fn random_expr<R: Rng>(rng: &mut R, depth: usize, vars: &[&str]) -> Expr {
    Expr::from_node(random_node(rng, depth, vars.len()), vars).expect("generated variables are declared")
}

/// `(a u + b v, p v + Y, Z)` on `[-1, 1]²` with random `Y`, `Z` of the given
/// depth. `a` and `p` are bounded away from zero, so `g1 = a` never vanishes
/// and W is usually of order one.
pub fn random_surface<R: Rng>(rng: &mut R, depth: usize) -> Result<Surface<f64>, GeometryError> {
    let a = rng.gen_range(0.5..1.5) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
    let b = rng.gen_range(-1.0..1.0);
    let x = Expr::from_node(Node::affine(&[a, b], 0.0), &["u", "v"])?;
    let p = rng.gen_range(1.0..2.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
    let y = Expr::from_node(Node::scaled(p, Node::var(1)) + random_node(rng, depth, 2), &["u", "v"])?;
    let z = random_expr(rng, depth, &["u", "v"]);
    Surface::new(x, y, z, Rect::new((-1.0, 1.0), (-1.0, 1.0))?)
}

/// A random point of the domain with `W ≥ MIN_W`, if one is found in 100 tries.
pub fn admissible_point<R: Rng>(rng: &mut R, s: &Surface<f64>) -> Option<(f64, f64)> {
    let d = s.domain();
    (0..100).find_map(|_| {
        let (u, v) = (rng.gen_range(d.u.0..d.u.1), rng.gen_range(d.v.0..d.v.1));
        match s.fundamental(u, v) {
            Ok(f) if f.w >= MIN_W => Some((u, v)),
            _ => None,
        }
    })
}

pub fn random_motion<R: Rng>(rng: &mut R) -> GalileanMotion<f64> {
    GalileanMotion::new(
        rng.gen_range(-5.0..5.0),
        rng.gen_range(-5.0..5.0),
        rng.gen_range(-2.0..2.0),
        rng.gen_range(-5.0..5.0),
        rng.gen_range(-2.0..2.0),
        rng.gen_range(0.0..std::f64::consts::TAU),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn trees_stay_bounded() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..300 {
            let e = random_expr(&mut rng, 6, &["u", "v"]);
            for (u, v) in [(-1.0, -1.0), (0.3, -0.7), (1.0, 1.0)] {
                let x: f64 = e.eval_value(&[u, v]).unwrap();
                assert!(x.abs() <= 2.0 + 1e-12, "{e} = {x}");
            }
        }
    }

    #[test]
    fn printed_trees_reparse() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..200 {
            let e = random_expr(&mut rng, 5, &["u", "v"]);
            let again = Expr::parse(&e.to_string(), &["u", "v"]).unwrap();
            assert_eq!(again.root(), e.root(), "{e}");
        }
    }
}
