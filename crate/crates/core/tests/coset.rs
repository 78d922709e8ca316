use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use steinberg::coset::{coset_census, coset_label, is_in_parabolic, is_parabolic_token, omega, CosetLabel};
use steinberg::generators::all_tokens;
use steinberg::harness::{enumerate, random_member_with, random_nonzero, Method, DEFAULT_CAP};
use steinberg::{Family, Field, GroupDescriptor, Matrix, Word};

fn desc(fam: Family, l: usize, p: u64) -> GroupDescriptor {
    GroupDescriptor::new(fam, l, Field::prime(p).unwrap(), false).unwrap()
}

/// `l − dim(g E ∩ E)` for `E = ⟨e₁, …, e_l⟩`: the rank of the rows outside `E` on columns `1..l`.
fn rank_oracle(g: &Matrix, d: &GroupDescriptor) -> usize {
    let l = d.l as i32;
    let rows: Vec<usize> = d.labels().iter().filter(|&&r| r <= 0).map(|&r| d.pos(r)).collect();
    let cols: Vec<usize> = (1..=l).map(|c| d.pos(c)).collect();
    g.block(&rows, &cols).rank()
}

fn random_p(d: &GroupDescriptor, rng: &mut ChaCha8Rng, len: usize) -> Matrix {
    let w: Word = (0..len)
        .map(|_| {
            let t = random_nonzero(d.field, rng);
            let toks: Vec<_> = all_tokens(d, &t).into_iter().filter(|x| is_parabolic_token(x, d)).collect();
            toks.choose(rng).unwrap().clone()
        })
        .collect();
    let p = w.evaluate(d).unwrap();
    assert!(is_in_parabolic(&p, d).unwrap());
    p
}

fn check_witness(g: &Matrix, d: &GroupDescriptor, lab: &CosetLabel) {
    for t in lab.left_witness.tokens().iter().chain(lab.right_witness.tokens()) {
        assert!(is_parabolic_token(t, d), "{t}");
    }
    let l = lab.left_witness.evaluate(d).unwrap();
    let r = lab.right_witness.evaluate(d).unwrap();
    let h = &(&l * g) * &r;
    let p = &lab.omega.inverse().unwrap() * &h;
    assert!(is_in_parabolic(&p, d).unwrap(), "{d}\n{g}");
    assert_eq!(lab.omega, omega(lab.m, d).unwrap());
    assert_eq!(lab.m, rank_oracle(g, d));
}

#[test]
fn census_of_tiny_groups() {
    let cases = [
        (desc(Family::GSp, 1, 3), Method::BruteForce, vec![(0, 6), (1, 18)]),
        (desc(Family::GOEven, 1, 3), Method::BruteForce, vec![(0, 2), (1, 2)]),
        (desc(Family::GOOdd, 1, 3), Method::BruteForce, vec![]),
        (desc(Family::GOEven, 2, 3), Method::GeneratorClosure, vec![]),
    ];
    for (d, method, want) in cases {
        let e = enumerate(&d, method, DEFAULT_CAP).unwrap();
        let census = coset_census(&d, &e).unwrap();
        assert_eq!(census.len(), d.l + 1, "{d}: {census:?}");
        assert_eq!(census.values().sum::<usize>(), e.elements.len());
        if !want.is_empty() {
            assert_eq!(census.into_iter().collect::<Vec<_>>(), want, "{d}");
        }
        for g in &e.elements {
            check_witness(g, &d, &coset_label(g, &d).unwrap());
        }
    }
}

#[test]
fn labels_are_invariant_under_p() {
    let mut rng = ChaCha8Rng::seed_from_u64(53);
    for d in [desc(Family::GSp, 2, 3), desc(Family::GOOdd, 2, 3), desc(Family::GOEven, 3, 5)] {
        let mut seen = vec![false; d.l + 1];
        for _ in 0..10 {
            let g = random_member_with(&d, &mut rng, 4 * d.n(), true);
            let lab = coset_label(&g, &d).unwrap();
            check_witness(&g, &d, &lab);
            seen[lab.m] = true;
            for _ in 0..20 {
                let p = random_p(&d, &mut rng, 6);
                let q = random_p(&d, &mut rng, 6);
                let h = &(&p * &g) * &q;
                let lh = coset_label(&h, &d).unwrap();
                assert_eq!(lh.m, lab.m);
                check_witness(&h, &d, &lh);
            }
        }
        for m in 0..=d.l {
            let lab = coset_label(&omega(m, &d).unwrap(), &d).unwrap();
            assert_eq!(lab.m, m);
        }
        assert!(seen.iter().any(|&s| s));
    }
}

#[test]
fn rational_groups() {
    let mut rng = ChaCha8Rng::seed_from_u64(59);
    for fam in [Family::GSp, Family::GOEven, Family::GOOdd] {
        let d = GroupDescriptor::new(fam, 3, Field::Rationals, false).unwrap();
        for _ in 0..20 {
            let g = random_member_with(&d, &mut rng, 10, true);
            check_witness(&g, &d, &coset_label(&g, &d).unwrap());
        }
    }
}
