use nfu_core::ramsey::{
    basic_module, eta_uniqueness_check, length_construction, nu_measure, partition_candidates,
    partition_find, tail_constancy_holds, verify_partition, AssignmentTree, Coloring,
    ColoringFamily, EtaVerdict, LevelSequence, Nu, Thinning, Truncation,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn invariants_hold_after_every_insert() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for k in [8, 16] {
        for _ in 0..50 {
            let fam = ColoringFamily::random(&mut rng, k, 3);
            let mut tree = AssignmentTree::new(k);
            for b in 0..k {
                tree.insert(b, &fam).unwrap();
                assert!(tree.check_invariants().is_empty());
            }
            tree.choose_branch();
            assert!(tail_constancy_holds(&fam, &tree));
        }
    }
}

#[test]
fn basic_module_output_is_a_subset() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    for _ in 0..100 {
        let fam = ColoringFamily::random(&mut rng, 12, 4);
        let b: Vec<usize> = (0..12).filter(|_| rng.gen_bool(0.7)).collect();
        if b.is_empty() {
            continue;
        }
        let out = basic_module(&b, &fam).unwrap();
        assert!(out.b_prime.iter().all(|x| b.contains(x)));
        assert!(out.b_prime.windows(2).all(|w| w[0] < w[1]));
    }
}

#[test]
fn level_sequences_nest_and_repeat() {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    for _ in 0..30 {
        let fams: Vec<ColoringFamily> = (0..3)
            .map(|_| ColoringFamily::random(&mut rng, 10, 2))
            .collect();
        let a = length_construction(10, &fams, None).unwrap();
        let b = length_construction(10, &fams, None).unwrap();
        assert_eq!(a, b);
        a.validate().unwrap();
        let th = Thinning {
            functions: (0..3).map(|_| (0..10).map(|x| x + 1).collect()).collect(),
        };
        let t = length_construction(10, &fams, Some(&th)).unwrap();
        t.validate().unwrap();
    }
}

#[test]
fn certificates_verify_and_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(34);
    let levels = LevelSequence::trivial(8);
    for n in 0..200 {
        let arity = 1 + n % 2;
        let threshold = rng.gen_range(0..8);
        let noise = rng.gen_bool(0.5);
        let col = Coloring::from_fn(8, arity, 2, |t| {
            let last = *t.last().unwrap();
            usize::from(last >= threshold) ^ usize::from(noise && last % 3 == 0 && last < 4)
        })
        .unwrap();
        if let Some(c) = partition_find(&col, &levels, Truncation::default())
            .unwrap()
            .cert()
        {
            assert!(verify_partition(&col, c, &levels).unwrap().holds());
        }
        let cands: Vec<_> = partition_candidates(&col, &levels, Truncation::default())
            .unwrap()
            .into_iter()
            .filter(|c| verify_partition(&col, c, &levels).unwrap().holds())
            .collect();
        assert!(!matches!(
            eta_uniqueness_check(&col, &levels, &cands).unwrap(),
            EtaVerdict::Conflict { .. }
        ));
    }
}

#[test]
fn nu_is_never_both() {
    let mut rng = ChaCha8Rng::seed_from_u64(35);
    let levels = LevelSequence {
        k: 8,
        levels: vec![(0..8).collect(), vec![1, 3, 5, 6, 7], vec![3, 6, 7]],
    };
    for _ in 0..200 {
        let b: Vec<usize> = (0..8).filter(|_| rng.gen_bool(0.5)).collect();
        let complement: Vec<usize> = (0..8).filter(|x| !b.contains(x)).collect();
        let (p, q) = (
            nu_measure(&b, &levels, 2),
            nu_measure(&complement, &levels, 2),
        );
        assert!(!(p.value == Nu::One && q.value == Nu::One));
    }
}
