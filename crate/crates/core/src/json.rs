//! Serde file formats. Players and actions are 1-based in every format here.
//!
//! Payoffs are listed flat: the value for player `p` at flat profile index
//! `i` sits at `payoffs[p * m^n + i]`, and the flat index of `(a_1, .., a_n)`
//! is the mixed-radix number with `a_1` most significant.

use serde::{Deserialize, Serialize};

use crate::gamegen::X3CInstance;
use crate::solve::{EquilibriumKind, EquilibriumSolution};
use crate::sparsify::SparsifyOutcome;
use crate::verify::{Definition, VerifyReport, Witness};
use crate::{invalid, ActionProfile, Game, JointDistribution, KUniformMultiset, Result, SwitchingRule};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GameFile {
    pub label: String,
    pub num_players: usize,
    pub num_actions: usize,
    pub payoffs: Vec<f64>,
}

impl GameFile {
    pub fn from_game(game: &Game) -> Self {
        GameFile {
            label: game.label().to_string(),
            num_players: game.num_players(),
            num_actions: game.num_actions(),
            payoffs: game.payoffs().to_vec(),
        }
    }

    pub fn into_game(self) -> Result<Game> {
        Game::new(self.label, self.num_players, self.num_actions, self.payoffs)
    }
}

fn to_one_based(profile: ActionProfile) -> Vec<usize> {
    profile.into_vec().into_iter().map(|a| a + 1).collect()
}

fn from_one_based(game: &Game, profile: &[usize]) -> Result<usize> {
    if profile.contains(&0) {
        return invalid("actions are labelled from 1");
    }
    game.check_profile(&ActionProfile::new(profile.iter().map(|a| a - 1).collect()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistributionEntry {
    pub profile: Vec<usize>,
    pub prob: f64,
}

/// Support entries in increasing flat-index order.
pub fn distribution_to_entries(game: &Game, x: &JointDistribution) -> Vec<DistributionEntry> {
    x.entries()
        .map(|(idx, prob)| DistributionEntry {
            profile: to_one_based(game.profile_at(idx)),
            prob,
        })
        .collect()
}

pub fn distribution_from_entries(game: &Game, entries: &[DistributionEntry]) -> Result<JointDistribution> {
    let masses = entries
        .iter()
        .map(|e| Ok((from_one_based(game, &e.profile)?, e.prob)))
        .collect::<Result<Vec<_>>>()?;
    JointDistribution::from_masses(game, masses)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultisetFile {
    pub num_players: usize,
    pub num_actions: usize,
    pub samples: Vec<Vec<usize>>,
}

impl MultisetFile {
    pub fn from_multiset(game: &Game, s: &KUniformMultiset) -> Self {
        MultisetFile {
            num_players: game.num_players(),
            num_actions: game.num_actions(),
            samples: s.samples().iter().map(|&idx| to_one_based(game.profile_at(idx))).collect(),
        }
    }

    pub fn into_multiset(self, game: &Game) -> Result<KUniformMultiset> {
        if (self.num_players, self.num_actions) != (game.num_players(), game.num_actions()) {
            return invalid("multiset shape does not match the game");
        }
        let samples = self
            .samples
            .iter()
            .map(|p| from_one_based(game, p))
            .collect::<Result<Vec<_>>>()?;
        KUniformMultiset::new(game, samples)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum WitnessJson {
    Action { player: usize, action: usize },
    Rule { player: usize, map: Vec<usize> },
    SingleSwitch { player: usize, from: usize, to: usize },
}

impl WitnessJson {
    pub fn from_witness(w: &Witness) -> Self {
        match w {
            Witness::Action { player, action } => WitnessJson::Action {
                player: player + 1,
                action: action + 1,
            },
            Witness::Rule(SwitchingRule { player, map }) => WitnessJson::Rule {
                player: player + 1,
                map: map.iter().map(|a| a + 1).collect(),
            },
            Witness::SingleSwitch { player, from, to } => WitnessJson::SingleSwitch {
                player: player + 1,
                from: from + 1,
                to: to + 1,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportJson {
    pub definition: Definition,
    pub satisfied: bool,
    pub worst_value: f64,
    pub witness: Option<WitnessJson>,
}

impl ReportJson {
    pub fn from_report(r: &VerifyReport) -> Self {
        ReportJson {
            definition: r.definition,
            satisfied: r.satisfied,
            worst_value: r.worst_value,
            witness: r.witness.as_ref().map(WitnessJson::from_witness),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionJson {
    pub kind: EquilibriumKind,
    pub solver: String,
    pub support_size: usize,
    pub distribution: Vec<DistributionEntry>,
}

impl SolutionJson {
    pub fn from_solution(game: &Game, s: &EquilibriumSolution) -> Self {
        SolutionJson {
            kind: s.kind,
            solver: s.solver.clone(),
            support_size: s.support_size,
            distribution: distribution_to_entries(game, &s.distribution),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutcomeJson {
    pub k: usize,
    pub attempts: usize,
    pub verified: bool,
    pub worst_value: f64,
    pub support_size: usize,
    pub multiset: MultisetFile,
}

impl OutcomeJson {
    pub fn from_outcome(game: &Game, o: &SparsifyOutcome) -> Self {
        OutcomeJson {
            k: o.k,
            attempts: o.attempts,
            verified: o.verified,
            worst_value: o.worst_value,
            support_size: o.multiset.support_size(),
            multiset: MultisetFile::from_multiset(game, &o.multiset),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct X3CFile {
    pub universe: usize,
    pub sets: Vec<[usize; 3]>,
}

impl X3CFile {
    pub fn from_instance(inst: &X3CInstance) -> Self {
        X3CFile {
            universe: inst.universe_size(),
            sets: inst.sets().iter().map(|s| [s[0] + 1, s[1] + 1, s[2] + 1]).collect(),
        }
    }

    pub fn into_instance(self) -> Result<X3CInstance> {
        X3CInstance::from_one_based(self.universe, &self.sets)
    }
}
