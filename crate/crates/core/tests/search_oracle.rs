use qrdecomp::search::{
    count_by_size, naive_search, scaling_orbit, search, Mode, SearchConfig, SearchReport,
};
use qrdecomp::set::{is_decomposition, max_compatible_b};
use qrdecomp::{ElementSet, Field};

fn pairs(r: &SearchReport) -> Vec<(ElementSet, ElementSet)> {
    r.certificates
        .iter()
        .map(|c| (c.a.clone(), c.b.clone()))
        .collect()
}

#[test]
fn pruned_search_matches_oracle_for_every_flag_combination() {
    for q in [5u64, 7, 9, 11, 13] {
        let f = Field::from_order(q).unwrap();
        let oracle = naive_search(&f, Mode::CountAll).unwrap();
        let oracle_max = naive_search(&f, Mode::EnumerateMaximal).unwrap();
        assert_eq!(pairs(&oracle), pairs(&oracle_max));
        for config in SearchConfig::all_flag_combinations(Mode::CountAll) {
            let r = search(&f, config).unwrap();
            assert_eq!(r.n_q, oracle.n_q, "q={q} {config:?}");
            assert_eq!(pairs(&r), pairs(&oracle), "q={q} {config:?}");
            assert_eq!(r.counts_by_size, oracle.counts_by_size, "q={q} {config:?}");
            assert!(!r.partial);
        }
        for config in SearchConfig::all_flag_combinations(Mode::EnumerateMaximal) {
            let r = search(&f, config).unwrap();
            assert_eq!(pairs(&r), pairs(&oracle), "q={q} {config:?}");
        }
        for config in SearchConfig::all_flag_combinations(Mode::Decide) {
            let r = search(&f, config).unwrap();
            assert_eq!(r.none_found(), oracle.none_found());
            assert!(r.certificates.len() <= 1);
            for c in &r.certificates {
                assert!(pairs(&oracle).contains(&(c.a.clone(), c.b.clone())));
            }
        }
    }
}

#[test]
fn f9_counts_are_swap_symmetric_and_consistent() {
    let f = Field::from_order(9).unwrap();
    let r = search(&f, SearchConfig::with_mode(Mode::CountAll)).unwrap();
    let n_q = r.n_q.unwrap();
    assert!(n_q > 0);
    assert_eq!(r.counts_by_size.values().sum::<u64>(), n_q);
    for (&(k, m), &c) in &r.counts_by_size {
        assert_eq!(r.count_for(m, k), c);
        assert_eq!(count_by_size(&f, k, m).unwrap(), c);
    }
    // n_q is odd only if some decomposition has A = B
    let has_diagonal = r.certificates.iter().any(|c| c.a == c.b);
    if !has_diagonal {
        assert_eq!(n_q % 2, 0);
    }
    let all = pairs(&r);
    for (a, b) in &all {
        assert!(all.contains(&(b.clone(), a.clone())), "swap mate missing");
        assert_eq!(&max_compatible_b(&f, a).unwrap(), b);
        for c in f.quadratic_residues().iter() {
            let (ca, cb) = scaling_orbit(&f, a, b, c).unwrap();
            assert!(is_decomposition(&f, &ca, &cb).unwrap());
            assert!(all.contains(&(ca, cb)), "scaling image missing");
        }
    }
}

#[test]
fn reports_are_deterministic() {
    let f = Field::from_order(13).unwrap();
    for config in SearchConfig::all_flag_combinations(Mode::CountAll) {
        let mut a = search(&f, config).unwrap();
        let mut b = search(&f, config).unwrap();
        a.wall_ms = 0;
        b.wall_ms = 0;
        assert_eq!(a, b);
    }
}

#[test]
fn pruning_counters_fire() {
    let f = Field::from_order(13).unwrap();
    let all = search(
        &f,
        SearchConfig {
            use_sarkozy_window: true,
            ..SearchConfig::with_mode(Mode::CountAll)
        },
    )
    .unwrap();
    let bare = search(&f, SearchConfig::unpruned(Mode::CountAll)).unwrap();
    assert!(all.nodes_explored <= bare.nodes_explored);
    assert!(bare.pruned_by["bstar_lt_2"] > 0);
    assert!(all.pruned_by["coverage"] + all.pruned_by["filter"] > 0);
}
