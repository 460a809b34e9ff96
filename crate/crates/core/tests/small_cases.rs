use hsbar::f2core::{BitTable, SubsetIndex};
use hsbar::forms::{validate_rokhlin, CupForm, RokhlinMap};
use hsbar::hmbar::gysin_quota;
use hsbar::rmod::GradedModule;
use hsbar::solver::{solve, standard_answer, SolveOptions};

fn all_maps(n: usize) -> impl Iterator<Item = RokhlinMap> {
    (0..1u64 << (1 << n)).map(move |t| RokhlinMap::from_values(BitTable::from_truth_table(n, t)))
}

fn run(mu: &RokhlinMap, normalize: bool) -> hsbar::solver::SolveReport {
    let pair = validate_rokhlin(mu, &CupForm::zero(mu.n())).unwrap();
    let options = SolveOptions {
        normalize,
        ..SolveOptions::default()
    };
    solve(&pair, &options).unwrap()
}

#[test]
fn affine_maps_up_to_two_coordinates() {
    for n in 0..=2 {
        for mu in all_maps(n).filter(|m| m.degree() <= 1) {
            let r = run(&mu, true);
            let expected = if mu.degree() == 0 {
                standard_answer(n)
            } else if n == 1 {
                GradedModule::from_pairs(&[(2, 0), (2, 2)])
            } else {
                GradedModule::from_pairs(&[(2, 0), (2, 1), (2, 2), (2, 3)])
            };
            assert_eq!(r.unique.as_ref(), Some(&expected), "{}", mu.anf_string());
        }
    }
}

#[test]
fn every_final_meets_the_count_and_keeps_rank() {
    for n in 0..=2 {
        let quota = gysin_quota(&CupForm::zero(n)).unwrap();
        for mu in all_maps(n) {
            let r = run(&mu, true);
            for (m, einf) in r.finals.iter().map(|m| (m, &r.einfinity)) {
                assert_eq!(m.len(), quota);
                let ranks: Vec<usize> = einf
                    .iter()
                    .map(|e| e.iter().map(|s| s.length as usize).sum())
                    .collect();
                assert!(ranks.contains(&m.total_rank()), "{}", mu.anf_string());
            }
        }
    }
}

#[test]
fn quadratic_maps_on_two_coordinates() {
    // Three equal values and one different: the count quota alone leaves two
    // candidates of different total rank for some placements.
    let mut ambiguous = 0;
    for mu in all_maps(2).filter(|m| m.degree() == 2) {
        let r = run(&mu, true);
        assert!(!r.finals.is_empty());
        if r.unique.is_none() {
            ambiguous += 1;
            assert!(!r.rank_consistent);
        }
    }
    assert_eq!(ambiguous, 4);
}

#[test]
fn raw_tops_move_by_twice_the_constant() {
    for n in 0..=2 {
        for mu in all_maps(n) {
            let shift = 2 * mu.base_value() as i64;
            let normalized: Vec<GradedModule> = run(&mu, true)
                .finals
                .iter()
                .map(|m| m.shift(shift))
                .collect();
            let mut raw = run(&mu, false).finals;
            let mut normalized = normalized;
            raw.sort();
            normalized.sort();
            assert_eq!(raw, normalized, "{}", mu.anf_string());
        }
    }
}

#[test]
fn constant_map_on_three_coordinates() {
    let mu = RokhlinMap::constant(3, false);
    let r = run(&mu, true);
    assert!(r.finals.contains(&standard_answer(3)));
    let e1 = r.e1.module();
    assert_eq!(e1, standard_answer(3));
    assert!(SubsetIndex::all(3).all(|s| !mu.value(s)));
}
