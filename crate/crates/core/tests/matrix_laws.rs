mod common;

use common::{matrix, path_suprema, rng, small_rational, Shape};
use energy_core::{ExtValue, FunctionMatrix};
use rand::Rng;

#[test]
fn floyd_warshall_matches_block_recursion() {
    let mut r = rng(21);
    for case in 0..200 {
        let n = r.gen_range(1..=6);
        let m = matrix(&mut r, n, Shape::SMALL);
        let fw = m.star();
        for split in 1..n.max(2) {
            assert_eq!(m.star_blocks(split).unwrap(), fw, "case {case}, split {split}");
        }
        let id = FunctionMatrix::identity(n);
        assert_eq!(fw, id.join(&m.mul(&fw).unwrap()).unwrap(), "case {case}: M* = Id ∨ M·M*");
        assert_eq!(fw.star(), fw, "case {case}: (M*)* = M*");
    }
}

#[test]
fn closure_entries_are_path_suprema() {
    let mut r = rng(22);
    for case in 0..200 {
        let n = r.gen_range(1..=6);
        let m = matrix(&mut r, n, Shape::SMALL);
        let s = m.star();
        for _ in 0..10 {
            let x = small_rational(&mut r, 12, 8);
            let j = r.gen_range(0..n);
            let sup = path_suprema(&m, j, &x);
            for i in 0..n {
                assert_eq!(s.get(i, j).eval(&ExtValue::Fin(x.clone())), sup[i], "case {case}: entry ({i}, {j}) at {x}");
            }
        }
    }
}

#[test]
fn omega_does_not_depend_on_the_split() {
    let mut r = rng(23);
    for case in 0..200 {
        let n = r.gen_range(2..=5);
        let m = matrix(&mut r, n, Shape::SMALL);
        let w = m.omega();
        for split in 2..n {
            assert_eq!(m.omega_split(split).unwrap(), w, "case {case}, split {split}");
        }
        assert_eq!(m.omega_k(n).unwrap(), w);
        assert_eq!(w.act(&m), w, "case {case}: omega is a fixed point of the action");
    }
}
