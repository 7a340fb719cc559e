//! Each planted bug must surface as failures in its own suite and nowhere else.

use regsynth::oracle::{render, run_all, Mutation, Sizes};

#[test]
fn every_mutation_is_caught_by_its_suite() {
    let sizes = Sizes { prefixes: 200, lassos: 300, det_lassos: 200, games: 100, plays: 40 };
    for (name, m) in Mutation::ALL {
        let rs = run_all(7, sizes, Some(m));
        for r in &rs {
            assert_eq!(r.passed(), r.name != name, "mutation {name}:\n{}", render(&rs));
        }
    }
}

#[test]
fn reports_repeat_for_a_seed() {
    let sizes = Sizes::uniform(30);
    assert_eq!(render(&run_all(9, sizes, None)), render(&run_all(9, sizes, None)));
    assert_eq!("games".parse::<Mutation>(), Ok(Mutation::Games));
    assert!("nothing".parse::<Mutation>().is_err());
}
