use galileo_core::corpus::{admissible_point, random_motion, random_surface};
use galileo_core::galilean::{distance, Point3};
use galileo_core::Surface64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn corpus(seed: u64, n: usize) -> Vec<Surface64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| random_surface(&mut rng, 3).unwrap()).collect()
}

fn close(jet: f64, fd: f64) -> bool {
    (jet - fd).abs() <= (1e-5 * jet.abs()).max(1e-7)
}

#[test]
fn jets_match_finite_differences_on_random_surfaces() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut checked = 0;
    for s in corpus(10, 60) {
        for _ in 0..5 {
            let Some((u, v)) = admissible_point(&mut rng, &s) else {
                continue;
            };
            let a = s.curvatures(u, v).unwrap();
            let b = s.curvatures_fd(u, v, Default::default()).unwrap();
            for (x, y) in [(a.k, b.k), (a.h_canonical, b.h_canonical), (a.h_paper, b.h_paper)] {
                assert!(close(x, y), "{:?} at ({u}, {v}): jets {x} fd {y}", s.coords());
            }
            checked += 1;
        }
    }
    assert!(checked >= 200, "only {checked} admissible points");
}

#[test]
fn curvature_is_motion_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for s in corpus(20, 10) {
        let Some((u, v)) = admissible_point(&mut rng, &s) else {
            panic!("no admissible point")
        };
        let a = s.curvatures(u, v).unwrap();
        for _ in 0..100 {
            let t = s.transformed(&random_motion(&mut rng)).unwrap();
            let b = t.curvatures(u, v).unwrap();
            assert!((a.k - b.k).abs() < 1e-9, "{} vs {}", a.k, b.k);
            assert!((a.h_canonical - b.h_canonical).abs() < 1e-9);
            assert!((a.h_paper - b.h_paper).abs() < 1e-9);
        }
    }
}

#[test]
fn distance_is_motion_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let point = |rng: &mut ChaCha8Rng| {
        Point3::new(
            rng.gen_range(-3.0..3.0),
            rng.gen_range(-3.0..3.0),
            rng.gen_range(-3.0..3.0),
        )
    };
    for i in 0..1000 {
        let m = random_motion(&mut rng);
        let p = point(&mut rng);
        // every fourth pair shares its x coordinate, exercising the Euclidean branch
        let q = if i % 4 == 0 {
            Point3::new(p.x, rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0))
        } else {
            point(&mut rng)
        };
        let d = distance(p, q);
        let e = distance(m.apply(p), m.apply(q));
        assert!((d - e).abs() < 1e-12, "{p:?} {q:?}: {d} vs {e}");
    }
}
