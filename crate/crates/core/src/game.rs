use std::fmt;

use crate::{invalid, Budget, Error, Result};

/// One action per player, 0-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ActionProfile(Vec<usize>);

impl ActionProfile {
    pub fn new(actions: Vec<usize>) -> Self {
        ActionProfile(actions)
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn action(&self, player: usize) -> usize {
        self.0[player]
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }
}

impl From<Vec<usize>> for ActionProfile {
    fn from(v: Vec<usize>) -> Self {
        ActionProfile(v)
    }
}

impl fmt::Display for ActionProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", a + 1)?;
        }
        write!(f, ")")
    }
}

/// Dense normal-form game with `n` players, `m` actions each and utilities in `[0, 1]`.
///
/// Profiles are flattened in mixed radix with player 0 most significant, so
/// the flat index of `(a_0, .., a_{n-1})` is `Σ a_i · m^(n-1-i)`. The payoff
/// of player `i` at flat profile `p` is stored at `payoffs[p * n + i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Game {
    label: String,
    num_players: usize,
    num_actions: usize,
    num_profiles: usize,
    strides: Vec<usize>,
    payoffs: Vec<f64>,
}

fn profile_count(n: usize, m: usize) -> Option<usize> {
    m.checked_pow(u32::try_from(n).ok()?)
}

impl Game {
    pub fn new(label: impl Into<String>, num_players: usize, num_actions: usize, payoffs: Vec<f64>) -> Result<Self> {
        if num_players == 0 || num_actions == 0 {
            return invalid("a game needs at least one player and one action");
        }
        let num_profiles = profile_count(num_players, num_actions)
            .ok_or_else(|| Error::InvalidArgument("profile count overflows".into()))?;
        let expected = num_profiles
            .checked_mul(num_players)
            .ok_or_else(|| Error::InvalidArgument("payoff array size overflows".into()))?;
        if payoffs.len() != expected {
            return invalid(format!(
                "payoff array has {} entries, expected n·m^n = {}",
                payoffs.len(),
                expected
            ));
        }
        if let Some(pos) = payoffs.iter().position(|u| !(0.0..=1.0).contains(u)) {
            return invalid(format!("payoff {} at position {} is outside [0, 1]", payoffs[pos], pos));
        }
        let mut strides = vec![1; num_players];
        for i in (0..num_players.saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * num_actions;
        }
        Ok(Game {
            label: label.into(),
            num_players,
            num_actions,
            num_profiles,
            strides,
            payoffs,
        })
    }

    /// Builds a game by evaluating `utility(profile, player)` on every profile.
    pub fn from_fn<F>(
        label: impl Into<String>,
        num_players: usize,
        num_actions: usize,
        budget: &Budget,
        mut utility: F,
    ) -> Result<Self>
    where
        F: FnMut(&[usize], usize) -> f64,
    {
        let entries = profile_count(num_players, num_actions)
            .and_then(|p| p.checked_mul(num_players))
            .unwrap_or(usize::MAX);
        if entries > budget.payoff_entries {
            return Err(Error::BudgetExceeded {
                what: "dense payoff array",
                required: entries as u128,
                limit: budget.payoff_entries as u128,
            });
        }
        let mut payoffs = Vec::with_capacity(entries);
        let mut profile = vec![0usize; num_players];
        loop {
            for i in 0..num_players {
                payoffs.push(utility(&profile, i));
            }
            if !advance(&mut profile, num_actions) {
                break;
            }
        }
        Game::new(label, num_players, num_actions, payoffs)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn num_players(&self) -> usize {
        self.num_players
    }

    pub fn num_actions(&self) -> usize {
        self.num_actions
    }

    pub fn num_profiles(&self) -> usize {
        self.num_profiles
    }

    pub fn payoffs(&self) -> &[f64] {
        &self.payoffs
    }

    /// Flat index of a profile; the caller guarantees validity.
    pub fn index_of(&self, actions: &[usize]) -> usize {
        actions.iter().zip(&self.strides).map(|(a, s)| a * s).sum()
    }

    pub fn profile_at(&self, index: usize) -> ActionProfile {
        ActionProfile((0..self.num_players).map(|i| self.action_of(index, i)).collect())
    }

    #[inline]
    pub fn action_of(&self, index: usize, player: usize) -> usize {
        (index / self.strides[player]) % self.num_actions
    }

    /// Flat index of the profile where `player` switches to `action`.
    #[inline]
    pub fn deviate(&self, index: usize, player: usize, action: usize) -> usize {
        let current = self.action_of(index, player);
        index + action * self.strides[player] - current * self.strides[player]
    }

    #[inline]
    pub fn utility(&self, index: usize, player: usize) -> f64 {
        self.payoffs[index * self.num_players + player]
    }

    pub fn check_player(&self, player: usize) -> Result<()> {
        if player >= self.num_players {
            return invalid(format!("player {} out of range (n = {})", player, self.num_players));
        }
        Ok(())
    }

    pub fn check_action(&self, action: usize) -> Result<()> {
        if action >= self.num_actions {
            return invalid(format!("action {} out of range (m = {})", action, self.num_actions));
        }
        Ok(())
    }

    pub fn check_profile(&self, profile: &ActionProfile) -> Result<usize> {
        if profile.len() != self.num_players {
            return invalid(format!(
                "profile has {} entries, game has {} players",
                profile.len(),
                self.num_players
            ));
        }
        for &a in profile.as_slice() {
            self.check_action(a)?;
        }
        Ok(self.index_of(profile.as_slice()))
    }

    /// `u_i(a)`.
    pub fn payoff(&self, player: usize, profile: &ActionProfile) -> Result<f64> {
        self.check_player(player)?;
        let idx = self.check_profile(profile)?;
        Ok(self.utility(idx, player))
    }

    /// Iterates over all flat profile indices.
    pub fn profiles(&self) -> std::ops::Range<usize> {
        0..self.num_profiles
    }

    /// Applies `u -> scale * u + shift` to every payoff.
    pub fn affine(&self, scale: f64, shift: f64) -> Result<Game> {
        if scale <= 0.0 {
            return invalid("affine scale must be positive");
        }
        Game::new(
            self.label.clone(),
            self.num_players,
            self.num_actions,
            self.payoffs.iter().map(|u| scale * u + shift).collect(),
        )
    }

    /// For two-player games: the constant `c` with `u_1 + u_2 = c` everywhere, if any.
    pub fn constant_sum(&self) -> Option<f64> {
        if self.num_players != 2 {
            return None;
        }
        let c = self.utility(0, 0) + self.utility(0, 1);
        self.profiles()
            .all(|p| (self.utility(p, 0) + self.utility(p, 1) - c).abs() <= crate::PROB_TOL)
            .then_some(c)
    }
}

/// Odometer increment, last player fastest. Returns false after the last profile.
pub(crate) fn advance(profile: &mut [usize], m: usize) -> bool {
    for slot in profile.iter_mut().rev() {
        *slot += 1;
        if *slot < m {
            return true;
        }
        *slot = 0;
    }
    false
}
