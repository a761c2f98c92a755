mod common;

use perfmatch::permanent::enumerate_generating_function;
use perfmatch::router::{fold_tight_cut, generating_function, RouterOptions};
use perfmatch::tightcut::{same_brace_multiset, tight_cut_decomposition_seeded};
use perfmatch::{EdgeLabeling, IntPolynomial};
use rand::Rng;

#[test]
fn folding_a_spliced_brace_preserves_the_generating_function() {
    let mut rng = common::rng(21);
    for i in 0..50 {
        let g1 = common::random_brace(&mut rng, 2 + i % 4);
        let g2 = common::random_brace(&mut rng, 2 + (i / 4) % 4);
        let (g, shore) = common::random_splice(&mut rng, &g1, &g2);
        let labels: EdgeLabeling = (0..g.num_edges())
            .map(|_| IntPolynomial::monomial(1, rng.gen_range(0..3)))
            .collect();
        let want = enumerate_generating_function(&g, &labels).unwrap();
        let (folded, _) = fold_tight_cut(&g, &labels, &shore, &RouterOptions::default()).unwrap();
        assert_eq!(
            generating_function(&folded.graph, &folded.labels).unwrap(),
            want
        );
        assert_eq!(generating_function(&g, &labels).unwrap(), want);
    }
}

#[test]
fn brace_multiset_does_not_depend_on_cut_order() {
    let mut rng = common::rng(22);
    for i in 0..100 {
        let g = common::random_matching_covered(&mut rng, 3 + i % 5);
        let a = tight_cut_decomposition_seeded(&g, Some(2 * i as u64)).unwrap();
        let b = tight_cut_decomposition_seeded(&g, Some(2 * i as u64 + 1)).unwrap();
        let a: Vec<_> = a.braces().cloned().collect();
        let b: Vec<_> = b.braces().cloned().collect();
        assert!(same_brace_multiset(&a, &b), "{:?}", g.edges());
    }
}
