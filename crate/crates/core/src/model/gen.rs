//! Random one-sided specifications for randomized suites.

use rand::Rng;

use super::basic::{num_tests, Assignment, Player, Registers};
use super::spec::{OneSidedSpec, State};

/// `adam` Adam states (the first is initial), `eve` Eve states, `labels` labels,
/// priorities in `1..=max_priority`.
pub fn random_spec<R: Rng>(
    rng: &mut R,
    k: usize,
    adam: usize,
    eve: usize,
    labels: usize,
    max_priority: u32,
) -> OneSidedSpec {
    assert!(adam > 0 && eve > 0 && labels > 0);
    let mut states = Vec::new();
    for i in 0..adam {
        states.push(State { name: format!("A{i}"), player: Player::Adam, priority: rng.gen_range(1..=max_priority) });
    }
    for i in 0..eve {
        states.push(State { name: format!("E{i}"), player: Player::Eve, priority: rng.gen_range(1..=max_priority) });
    }
    let nt = num_tests(k);
    let mut delta_a = Vec::new();
    let mut delta_e = Vec::new();
    for q in 0..adam + eve {
        if q < adam {
            delta_a.push(
                (0..nt)
                    .map(|_| {
                        let a = Assignment::from_regs((0..k).filter(|_| rng.gen_bool(0.4)));
                        (a, adam + rng.gen_range(0..eve))
                    })
                    .collect(),
            );
            delta_e.push(Vec::new());
        } else {
            delta_a.push(Vec::new());
            delta_e.push((0..labels).map(|_| rng.gen_range(0..adam)).collect());
        }
    }
    let spec = OneSidedSpec {
        registers: Registers::numbered(k),
        labels: (0..labels).map(|i| ((b'a' + i as u8) as char).to_string()).collect(),
        states,
        initial: 0,
        delta_a,
        delta_e,
    };
    debug_assert!(spec.check().is_ok());
    spec
}
