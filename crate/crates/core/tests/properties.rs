use proptest::prelude::*;

use quermass_core::inequality::{reverse_triple, BodyContext};
use quermass_core::kubota::kubota_check;
use quermass_core::poly::triple_from_consecutive;
use quermass_core::quermass::{quermass_exact, quermass_mc_steiner};
use quermass_core::{ConvexBody, McOptions, QuermassVector, TolerancePolicy};

fn core_ball() -> impl Strategy<Value = ConvexBody> {
    (2usize..=3)
        .prop_flat_map(|d| {
            (
                Just(d),
                prop::collection::vec(prop::collection::vec(-2.0f64..2.0, d), 1..8),
                0.2f64..2.0,
            )
        })
        .prop_map(|(d, core, r)| ConvexBody::core_ball(d, &core, r).unwrap())
}

fn unit(dim: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0f64..1.0, dim)
        .prop_filter("nonzero", |v| v.iter().map(|x| x * x).sum::<f64>() > 1e-4)
        .prop_map(|v| {
            let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            v.into_iter().map(|x| x / n).collect()
        })
}

fn body_and_directions() -> impl Strategy<Value = (ConvexBody, Vec<Vec<f64>>)> {
    core_ball().prop_flat_map(|b| {
        let d = b.dim();
        (Just(b), prop::collection::vec(unit(d), 8))
    })
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn support_is_additive_under_dilation((body, dirs) in body_and_directions(), t in 0.0f64..3.0) {
        let big = body.dilate(t).unwrap();
        for u in &dirs {
            prop_assert!(close(big.support(u).unwrap(), body.support(u).unwrap() + t, 1e-12));
        }
    }

    #[test]
    fn opening_by_smaller_ball_is_identity((body, dirs) in body_and_directions(), frac in 0.0f64..1.0) {
        let t = frac * body.radius();
        let opened = body.erode(t).unwrap().unwrap().dilate(t).unwrap();
        for u in &dirs {
            prop_assert!(close(opened.support(u).unwrap(), body.support(u).unwrap(), 1e-12));
        }
    }

    #[test]
    fn opening_by_larger_ball_shrinks((body, dirs) in body_and_directions(), extra in 0.01f64..0.5) {
        let t = body.radius() + extra;
        if let Some(eroded) = body.erode(t).unwrap() {
            let opened = eroded.dilate(t).unwrap();
            for u in &dirs {
                prop_assert!(opened.support(u).unwrap() <= body.support(u).unwrap() + 1e-9);
            }
        }
    }

    #[test]
    fn quermassintegrals_are_homogeneous(body in core_ball(), c in prop::sample::select(vec![0.5, 2.0, 3.0])) {
        let w = quermass_exact(&body).unwrap();
        let wc = quermass_exact(&body.scaled(c).unwrap()).unwrap();
        let d = body.dim();
        for i in 0..=d {
            prop_assert!(close(wc.values[i], c.powi((d - i) as i32) * w.values[i], 1e-9));
        }
    }

    #[test]
    fn verdicts_are_scale_invariant(body in core_ball(), c in prop::sample::select(vec![0.5, 2.0, 3.0])) {
        let scaled = body.scaled(c).unwrap();
        let w = quermass_exact(&body).unwrap();
        let wc = quermass_exact(&scaled).unwrap();
        let policy = TolerancePolicy::default();
        let a = BodyContext::new(&body, &w, 1.0 / body.radius(), policy).unwrap().all().unwrap();
        let b = BodyContext::new(&scaled, &wc, 1.0 / scaled.radius(), policy).unwrap().all().unwrap();
        prop_assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            prop_assert_eq!(x.inequality, y.inequality);
            prop_assert_eq!(x.verdict, y.verdict, "{:?}: {} vs {}", x.inequality, x.lhs, y.lhs);
        }
    }

    #[test]
    fn quermassintegrals_grow_with_the_body(body in core_ball(), extra in prop::collection::vec(prop::collection::vec(-3.0f64..3.0, 3), 1..4), t in 0.0f64..1.0) {
        let d = body.dim();
        let mut core: Vec<Vec<f64>> = body.core_points().iter().map(|p| p.to_vec()).collect();
        core.extend(extra.into_iter().map(|p| p[..d].to_vec()));
        let bigger = ConvexBody::core_ball(d, &core, body.radius() + t).unwrap();
        let w = quermass_exact(&body).unwrap();
        let wb = quermass_exact(&bigger).unwrap();
        for i in 0..=d {
            prop_assert!(w.values[i] <= wb.values[i] + 1e-9 * wb.values[i].abs());
        }
    }

    #[test]
    fn triples_follow_from_consecutive_deficits(body in core_ball(), lambda_scale in 0.5f64..1.0) {
        // Any lambda up to 1/r is admissible for the numeric identity.
        let d = body.dim();
        let lambda = lambda_scale / body.radius();
        let w = quermass_exact(&body).unwrap();
        let scaled: Vec<f64> = (0..=d).map(|m| w.values[m] / lambda.powi(m as i32)).collect();
        for i in 0..=d {
            for j in i + 1..=d {
                for k in j + 1..=d {
                    let cert = triple_from_consecutive(i, j, k, d).unwrap();
                    let via: f64 = cert
                        .multipliers
                        .iter()
                        .map(|(l, mu)| {
                            let mu: f64 = mu.to_string().parse().unwrap();
                            mu * (scaled[*l] - 2.0 * scaled[l + 1] + scaled[l + 2])
                        })
                        .sum();
                    let direct = QuermassVector::exact(d, w.values.clone(), w.method);
                    let rep = reverse_triple(&direct, lambda, (i, j, k), &TolerancePolicy::default()).unwrap();
                    prop_assert!(close(rep.lhs, via, 1e-9), "({},{},{}): {} vs {}", i, j, k, rep.lhs, via);
                }
            }
        }
    }
}

#[test]
fn exact_and_monte_carlo_routes_agree() {
    let core = [
        vec![0.0, 0.0, 0.0],
        vec![1.5, 0.2, 0.0],
        vec![0.3, 1.1, 0.4],
        vec![0.2, 0.1, 1.3],
        vec![1.0, 1.0, 1.0],
    ];
    let body = ConvexBody::core_ball(3, &core, 0.7).unwrap();
    let exact = quermass_exact(&body).unwrap();
    let seeds = 20;
    let agree = (0..seeds)
        .filter(|&s| {
            let w = quermass_mc_steiner(&body, &McOptions::new(200_000, s)).unwrap();
            (0..=3).all(|i| (w.values[i] - exact.values[i]).abs() <= 3.0 * w.stderr[i])
        })
        .count();
    assert!(agree * 100 >= 95 * seeds as usize, "{agree}/{seeds}");
}

#[test]
fn kubota_identity_on_a_random_core() {
    let core = [
        vec![0.0, 0.0, 0.0],
        vec![1.2, 0.0, 0.3],
        vec![0.1, 0.9, 0.0],
        vec![0.4, 0.3, 1.1],
    ];
    let body = ConvexBody::core_ball(3, &core, 0.5).unwrap();
    let mc = McOptions::default();
    let mut pass = 0;
    let mut total = 0;
    for seed in 0..20 {
        for j in 0..=1 {
            total += 1;
            if kubota_check(&body, 1, j, 200, seed, &mc).unwrap().pass {
                pass += 1;
            }
        }
    }
    assert!(pass * 100 >= 95 * total, "{pass}/{total}");
}
