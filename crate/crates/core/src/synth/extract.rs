//! Eve's positional strategy as a register transducer.
//!
//! Transducer states are the Adam vertices reachable when Eve follows her
//! strategy. On a datum the transducer evaluates the test against its registers,
//! performs the specification's assignment and answers with the label her
//! strategy picks; the lowest such label wins ties.

use std::collections::HashMap;

use crate::game::{ArenaVertex, ProductGame, Solution};
use crate::model::{num_tests, OneSidedSpec, Player, RegisterTransducer, Step};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("Eve does not win from the initial vertex")]
pub struct NotRealizable;

pub fn extract_eve_transducer(pg: &ProductGame, sol: &Solution, spec: &OneSidedSpec) -> Result<RegisterTransducer, NotRealizable> {
    let g = &pg.game;
    if sol.winner[g.initial] != Player::Eve {
        return Err(NotRealizable);
    }
    let nt = num_tests(spec.registers.len());
    let mut index: HashMap<usize, usize> = HashMap::new();
    let mut order = vec![g.initial];
    index.insert(g.initial, 0);
    let mut steps = Vec::new();
    let mut i = 0;
    while i < order.len() {
        let u = order[i];
        let arena_u = pg.nodes[pg.info[u].0 as usize].arena;
        let mut row = Vec::with_capacity(nt);
        for t in 0..nt {
            let w = g.succ[u][t];
            let ArenaVertex::Eve { asgn, .. } = pg.arena.vertices[pg.arena.succ[arena_u][t]] else {
                unreachable!("Adam moves into Eve vertices")
            };
            if pg.is_broken(w) {
                // no datum has this test against registers ordered like here
                row.push(Step { asgn, label: 0, next: i });
                continue;
            }
            let v = sol.sigma_e.choice[w].expect("strategy defined on Eve's region");
            let label = g.succ[w].iter().position(|&x| x == v).expect("strategy follows an edge");
            let l = order.len();
            let next = *index.entry(v).or_insert_with(|| {
                order.push(v);
                l
            });
            row.push(Step { asgn, label, next });
        }
        steps.push(row);
        i += 1;
    }
    Ok(RegisterTransducer {
        registers: spec.registers.clone(),
        labels: spec.labels.clone(),
        names: order.iter().map(|&u| g.names[u].clone()).collect(),
        initial: 0,
        steps,
    })
}
