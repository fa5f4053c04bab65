mod common;

use common::{br, cdepth_oracle};
use qcdp::linfeas::{cdepth, cdepth_sup_gap, depth, CdepthLevels, Constraint, ConstraintSet, LfTarget};
use qcdp::optimizer::TargetFunction;
use qcdp::BoundedRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_constraints(rng: &mut impl Rng, n: usize, d: usize, x: i64) -> Vec<Constraint> {
    (0..n)
        .map(|_| Constraint {
            a: (0..d).map(|_| rng.gen_range(-x..=x)).collect(),
            w: rng.gen_range(-x..=x),
        })
        .collect()
}

#[test]
fn planar_cdepth_matches_truncated_hull_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..120 {
        let n = rng.gen_range(1..=6);
        let cs = random_constraints(&mut rng, n, 2, 2);
        let s = ConstraintSet::new(2, 2, cs.clone()).unwrap();
        for _ in 0..5 {
            let p = [br(rng.gen_range(-12..=12), 4), br(rng.gen_range(-12..=12), 4)];
            assert_eq!(cdepth(&s, &p).unwrap(), cdepth_oracle(&cs, 2, &p), "{cs:?} at {p:?}");
        }
        let p = [br(rng.gen_range(-3000..=3000), 1009), br(rng.gen_range(-3000..=3000), 1013)];
        assert_eq!(cdepth(&s, &p).unwrap(), cdepth_oracle(&cs, 2, &p), "{cs:?} at {p:?}");
    }
}

#[test]
fn line_cdepth_matches_breakpoint_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for _ in 0..200 {
        let n = rng.gen_range(1..=7);
        let cs = random_constraints(&mut rng, n, 1, 3);
        let s = ConstraintSet::new(1, 3, cs.clone()).unwrap();
        for xn in -10..=10 {
            let p = [br(xn, 3)];
            assert_eq!(cdepth(&s, &p).unwrap(), cdepth_oracle(&cs, 1, &p), "{cs:?} at {p:?}");
        }
    }
}

#[test]
fn cdepth_dominates_depth() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..100 {
        let n = rng.gen_range(1..=8);
        let s = ConstraintSet::new(2, 3, random_constraints(&mut rng, n, 2, 3)).unwrap();
        for _ in 0..5 {
            let p = [br(rng.gen_range(-9..=9), 3), br(rng.gen_range(-9..=9), 2)];
            let (dp, cd) = (depth(&s, &p).unwrap(), cdepth(&s, &p).unwrap());
            assert!(cd >= dp);
            // depth >= (d+1) cdepth - d |S|
            assert!(dp as i64 >= 3 * cd as i64 - 2 * n as i64, "{s:?} at {p:?}");
        }
    }
}

#[test]
fn exact_gap_bounds_every_probe() {
    let mut rng = ChaCha8Rng::seed_from_u64(24);
    for _ in 0..30 {
        let n = rng.gen_range(2..=6);
        let a = random_constraints(&mut rng, n, 2, 2);
        let mut b = a.clone();
        let k = rng.gen_range(0..n);
        b[k] = random_constraints(&mut rng, 1, 2, 2).remove(0);
        let (la, lb) = (CdepthLevels::new(&a, 2).unwrap(), CdepthLevels::new(&b, 2).unwrap());
        let gap = cdepth_sup_gap(&la, &lb);
        let mut probed: f64 = 0.0;
        for xn in -6..=6 {
            for yn in -6..=6 {
                let p = [br(xn, 2), br(yn, 2)];
                let g = (cdepth_oracle(&a, 2, &p) as f64 - cdepth_oracle(&b, 2, &p) as f64).abs() / n as f64;
                probed = probed.max(g);
            }
        }
        assert!(probed <= gap + 1e-12, "{a:?} vs {b:?}: probe {probed} > {gap}");
        assert!(gap <= 1.0 + 1e-12);
    }
}

fn brute_argmax(grid: impl Iterator<Item = BoundedRational>, f: impl Fn(&BoundedRational) -> usize) -> (BoundedRational, usize) {
    grid.map(|x| {
        let v = f(&x);
        (x, v)
    })
    .fold(None::<(BoundedRational, usize)>, |acc, (x, v)| match acc {
        Some((_, bv)) if bv >= v => acc,
        _ => Some((x, v)),
    })
    .unwrap()
}

#[test]
fn slice_argmax_chain_on_lf_domains() {
    let mut rng = ChaCha8Rng::seed_from_u64(25);
    let target = LfTarget::new(2, 1).unwrap();
    for _ in 0..15 {
        let n = rng.gen_range(2..=6);
        let cs = random_constraints(&mut rng, n, 2, 1);
        let g1 = target.domain(&[]).unwrap();
        let (x1, v1) = target.slice_argmax(&cs, &[], &g1).unwrap();
        assert_eq!(target.slice_eval(&cs, &[], &x1).unwrap(), v1);
        let g2 = target.domain(&[x1.clone()]).unwrap();
        let (y, v2) = target.slice_argmax(&cs, &[x1.clone()], &g2).unwrap();
        let (by, bv) = brute_argmax(g2.iter(), |y| cdepth_oracle(&cs, 2, &[x1.clone(), y.clone()]));
        assert_eq!((y.clone(), v2), (by, bv as f64 / n as f64), "{cs:?}");
        assert_eq!(v2, v1, "{cs:?}: the derived domains keep the slice maximum");
        let full = g1
            .iter()
            .flat_map(|x| {
                let g = target.domain(&[x.clone()]).unwrap();
                g.iter().map(move |y| (x.clone(), y)).collect::<Vec<_>>()
            })
            .map(|(x, y)| cdepth_oracle(&cs, 2, &[x, y]))
            .max()
            .unwrap();
        assert_eq!(full as f64 / n as f64, v1, "{cs:?}");
    }
}
