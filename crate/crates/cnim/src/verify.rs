//! Exhaustive checks of a closed-form losing set against a solved table.

use cnim_core::characterize::CharacterizedGame;
use cnim_core::game::{apply_move, GameSpec, Position};
use cnim_core::solver::{is_option, OutcomeTable, WindowTable};
use cnim_core::strategy::{winning_move_traced, Route};
use rayon::prelude::*;
use serde::Serialize;

/// Examples kept per failure kind.
const EXAMPLES: usize = 5;

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub n: usize,
    pub k: usize,
    pub max_height: u16,
    pub positions: usize,
    pub losses: usize,
    /// Positions where the closed form and the table disagree.
    pub disagreements: usize,
    /// Member pairs where one is an option of the other.
    pub condition_one_failures: usize,
    /// Non-members without a verified winning move.
    pub condition_two_failures: usize,
    /// Winning moves that needed the option search.
    pub fallbacks: usize,
    pub examples: Vec<String>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.disagreements == 0 && self.condition_one_failures == 0 && self.condition_two_failures == 0
    }
}

/// `None` when `spec` has no closed form.
pub fn verify_table(table: &OutcomeTable) -> Option<VerifyReport> {
    let spec = table.spec();
    let game = CharacterizedGame::for_spec(&spec)?;
    let count = table.position_count();

    let oracle: Vec<(u32, bool, bool)> = (0..count as u32)
        .into_par_iter()
        .map(|i| {
            let p = table.position_at(i);
            (i, game.contains(p.heights()), table.is_loss_index(i))
        })
        .collect();
    let mut examples = Vec::new();
    let disagreements: Vec<u32> = oracle.iter().filter(|(_, m, l)| m != l).map(|&(i, _, _)| i).collect();
    for &i in disagreements.iter().take(EXAMPLES) {
        examples.push(format!("disagreement at {}", table.position_at(i)));
    }

    let members: Vec<Vec<u16>> = oracle
        .iter()
        .filter(|(_, m, _)| *m)
        .map(|&(i, _, _)| table.position_at(i).heights().iter().map(|&h| h as u16).collect())
        .collect();
    let windows = WindowTable::new(spec);
    let one: Vec<(usize, usize)> = (0..members.len())
        .into_par_iter()
        .flat_map_iter(|a| {
            let members = &members;
            let windows = &windows;
            (0..members.len()).filter(move |&b| is_option(windows, &members[a], &members[b])).map(move |b| (a, b))
        })
        .collect();
    for &(a, b) in one.iter().take(EXAMPLES) {
        examples.push(format!("{} has member option {}", fmt_digits(&members[a]), fmt_digits(&members[b])));
    }

    let two: Vec<(Option<String>, bool)> = oracle
        .par_iter()
        .filter(|(_, m, _)| !*m)
        .map(|&(i, _, _)| check_winning_move(&spec, game, &table.position_at(i)))
        .collect();
    let fallbacks = two.iter().filter(|(_, fb)| *fb).count();
    let failures: Vec<&String> = two.iter().filter_map(|(e, _)| e.as_ref()).collect();
    examples.extend(failures.iter().take(EXAMPLES).map(|s| s.to_string()));

    Some(VerifyReport {
        n: spec.n(),
        k: spec.k(),
        max_height: table.max_height(),
        positions: count,
        losses: table.loss_count(),
        disagreements: disagreements.len(),
        condition_one_failures: one.len(),
        condition_two_failures: failures.len(),
        fallbacks,
        examples,
    })
}

fn check_winning_move(spec: &GameSpec, game: CharacterizedGame, p: &Position) -> (Option<String>, bool) {
    match winning_move_traced(spec, p) {
        Ok(w) => {
            let fallback = w.route == Route::Fallback;
            let landed = apply_move(spec, p, &w.mv).ok();
            match landed {
                Some(q) if game.contains(q.heights()) => (None, fallback),
                Some(q) => (Some(format!("move {} from {p} lands outside the set at {q}", w.mv)), fallback),
                None => (Some(format!("illegal move {} from {p}", w.mv)), fallback),
            }
        }
        Err(e) => (Some(format!("no winning move from {p}: {e}")), false),
    }
}

fn fmt_digits(d: &[u16]) -> String {
    let v: Vec<u32> = d.iter().map(|&x| x as u32).collect();
    Position::new(v).to_string()
}
