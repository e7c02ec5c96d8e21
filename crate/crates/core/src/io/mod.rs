//! Text formats: game files, reward tables and rho tokens.
//!
//! Files name players by label (`"1"`, `"2"`, … unless the file declares its
//! own) and coalitions by comma-joined member labels, `""` for the empty
//! coalition. Internally players are 0-indexed bitmask positions.

mod game_file;
mod table;

pub use game_file::{parse_game_file, write_game_file, AnyGame, GameFile};
pub use table::{parse_reward_table, write_reward_table, TableFormat};

use std::fmt::Write as _;

use thiserror::Error;

use crate::axioms::Witness;
use crate::coalition::Coalition;
use crate::game::{GameError, MAX_PLAYERS};
use crate::scalar::{ParseScalarError, Rational, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IoError {
    #[error("malformed JSON: {0}")]
    Json(String),
    #[error("malformed CSV: {0}")]
    Csv(String),
    #[error("bad player list: {0}")]
    BadPlayers(String),
    #[error("unknown player {label:?} in coalition key {key:?}")]
    UnknownPlayer { label: String, key: String },
    #[error("coalition {0:?} appears more than once")]
    DuplicateCoalition(String),
    #[error("missing coalition value for {0:?}")]
    MissingValue(String),
    #[error("bad number for {key:?}: {source}")]
    BadNumber {
        key: String,
        source: ParseScalarError,
    },
    #[error("invalid game: {0}")]
    InvalidGame(String),
    #[error("bad reward table: {0}")]
    BadTable(String),
    #[error("bad rho {0:?}: expected a number in (0, 1] or a token like log2(3)-1")]
    BadRho(String),
}

/// Player labels in index order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Labels(Vec<String>);

impl Labels {
    /// `"1"`, …, `"n"`.
    pub fn numeric(n: usize) -> Self {
        Labels((1..=n).map(|i| i.to_string()).collect())
    }

    pub fn new(names: Vec<String>) -> Result<Self, IoError> {
        if names.is_empty() || names.len() > MAX_PLAYERS {
            return Err(IoError::BadPlayers(format!(
                "need between 1 and {MAX_PLAYERS} players, got {}",
                names.len()
            )));
        }
        for (k, name) in names.iter().enumerate() {
            if name.is_empty() || name.contains(',') || name.trim() != name {
                return Err(IoError::BadPlayers(format!(
                    "label {name:?} must be non-empty, comma-free and unpadded"
                )));
            }
            if names[..k].contains(name) {
                return Err(IoError::BadPlayers(format!("label {name:?} repeated")));
            }
        }
        Ok(Labels(names))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_numeric(&self) -> bool {
        *self == Labels::numeric(self.len())
    }

    pub fn label(&self, player: usize) -> &str {
        &self.0[player]
    }

    pub fn as_slice(&self) -> &[String] {
        &self.0
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.0.iter().position(|l| l == label)
    }

    /// Comma-joined member labels in player order.
    pub fn key(&self, c: Coalition) -> String {
        let mut out = String::new();
        for (k, i) in c.members().enumerate() {
            if k > 0 {
                out.push(',');
            }
            out.push_str(&self.0[i]);
        }
        out
    }

    /// Set notation for messages, e.g. `{a,b}`.
    pub fn describe(&self, c: Coalition) -> String {
        format!("{{{}}}", self.key(c))
    }

    /// Parses a coalition key; members may appear in any order but not twice.
    pub fn parse_key(&self, key: &str) -> Result<Coalition, IoError> {
        if key.trim().is_empty() {
            return Ok(Coalition::EMPTY);
        }
        let mut c = Coalition::EMPTY;
        for label in key.split(',').map(str::trim) {
            let i = self.index_of(label).ok_or_else(|| IoError::UnknownPlayer {
                label: label.to_string(),
                key: key.to_string(),
            })?;
            if c.contains(i) {
                return Err(IoError::DuplicateCoalition(key.to_string()));
            }
            c = c.with(i);
        }
        Ok(c)
    }

    /// Every coalition ordered by size, then lexicographically by member indices.
    pub fn canonical_order(&self) -> Vec<Coalition> {
        canonical_order(self.len())
    }

    /// Renders a game validation error with labels instead of indices.
    pub fn explain(&self, err: &GameError) -> String {
        match err {
            GameError::NotMonotone { subset, superset } => format!(
                "not monotone: value of {} exceeds value of {}",
                self.describe(*subset),
                self.describe(*superset)
            ),
            GameError::NegativeValue(c) => format!("coalition {} has a negative value", self.describe(*c)),
            GameError::NonFinite(c) => format!("coalition {} has a non-finite value", self.describe(*c)),
            other => other.to_string(),
        }
    }
}

/// One-line account of a witness using player labels.
pub fn describe_witness<S: Scalar>(w: &Witness<S>, labels: &Labels) -> String {
    let p = |i: &usize| labels.label(*i).to_string();
    let c = |c: &Coalition| labels.describe(*c);
    match w {
        Witness::Negative { coalition, player, reward } => {
            format!("player {} gets {} in {}", p(player), reward.render(), c(coalition))
        }
        Witness::ExceedsValue { coalition, player, reward, value } => format!(
            "player {} gets {} in {} whose value is {}",
            p(player),
            reward.render(),
            c(coalition),
            value.render()
        ),
        Witness::NoneEfficient { coalition, value, best } => format!(
            "no member of {} gets its value {} (best is {})",
            c(coalition),
            value.render(),
            best.render()
        ),
        Witness::BelowStandalone { coalition, player, reward, standalone } => format!(
            "player {} gets {} in {} but {} alone",
            p(player),
            reward.render(),
            c(coalition),
            standalone.render()
        ),
        Witness::OutsiderReward { coalition, player, reward, standalone } => format!(
            "non-member {} gets {} for {} instead of its standalone {}",
            p(player),
            reward.render(),
            c(coalition),
            standalone.render()
        ),
        Witness::UselessPaid { useless, coalition, reward } => format!(
            "useless player {} gets {} in {}",
            p(useless),
            reward.render(),
            c(coalition)
        ),
        Witness::UselessShifts { useless, coalition, player, without, with } => format!(
            "adding useless player {} to {} moves player {} from {} to {}",
            p(useless),
            c(coalition),
            p(player),
            without.render(),
            with.render()
        ),
        Witness::Asymmetric { i, j, coalition, reward_i, reward_j } => format!(
            "interchangeable players {} and {} get {} and {} in {}",
            p(i),
            p(j),
            reward_i.render(),
            reward_j.render(),
            c(coalition)
        ),
        Witness::NotStrictlyAhead { better, worse, coalition, evidence, reward_better, reward_worse } => format!(
            "player {} beats {} (strictly with {}) yet gets {} against {} in {}",
            p(better),
            p(worse),
            c(evidence),
            reward_better.render(),
            reward_worse.render(),
            c(coalition)
        ),
        Witness::NoStrictIncrease { player, coalition, before, after } => format!(
            "player {} in {} went from {} to {}",
            p(player),
            c(coalition),
            before.render(),
            after.render()
        ),
        Witness::Unbalanced { coalition, i, j, gain_i, gain_j } => format!(
            "in {} player {} gains {} from {} but {} gains {} from {}",
            c(coalition),
            p(i),
            gain_i.render(),
            p(j),
            p(j),
            gain_j.render(),
            p(i)
        ),
    }
}

pub fn canonical_order(n: usize) -> Vec<Coalition> {
    let mut all: Vec<Coalition> = Coalition::all(n).collect();
    all.sort_by(|a, b| {
        a.len()
            .cmp(&b.len())
            .then_with(|| a.members().cmp(b.members()))
    });
    all
}

/// A parsed rho: exact when it is a rational literal, float for symbolic tokens.
#[derive(Debug, Clone, PartialEq)]
pub enum Rho {
    Exact(Rational),
    Float(f64),
}

impl Rho {
    pub fn to_f64(&self) -> f64 {
        match self {
            Rho::Exact(r) => r.to_f64(),
            Rho::Float(x) => *x,
        }
    }

    pub fn render(&self) -> String {
        match self {
            Rho::Exact(r) => r.render(),
            Rho::Float(x) => x.render(),
        }
    }
}

/// Parses a rational literal (`1`, `1/2`, `0.25`) or `log2(a)` optionally
/// followed by `+b` / `-b`, e.g. `log2(3)-1`.
pub fn parse_rho(s: &str) -> Result<Rho, IoError> {
    let bad = || IoError::BadRho(s.to_string());
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if let Some(rest) = compact.strip_prefix("log2(") {
        let (arg, tail) = rest.split_once(')').ok_or_else(bad)?;
        let arg = f64::parse(arg).map_err(|_| bad())?;
        if arg <= 0.0 {
            return Err(bad());
        }
        let offset = match tail.as_bytes().first() {
            None => 0.0,
            Some(b'+') => f64::parse(&tail[1..]).map_err(|_| bad())?,
            Some(b'-') => -f64::parse(&tail[1..]).map_err(|_| bad())?,
            _ => return Err(bad()),
        };
        return Ok(Rho::Float(arg.log2() + offset));
    }
    Rational::parse(&compact).map(Rho::Exact).map_err(|_| bad())
}

/// Writes a JSON string literal.
pub(crate) fn json_str(out: &mut String, s: &str) {
    let _ = write!(out, "{}", serde_json::Value::String(s.to_string()));
}
