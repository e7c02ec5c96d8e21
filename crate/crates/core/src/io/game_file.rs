use std::fmt;

use serde::de::{MapAccess, Visitor};
use serde::{Deserialize, Deserializer};
use serde_json::Value;

use super::{json_str, IoError, Labels};
use crate::coalition::Coalition;
use crate::game::Game;
use crate::scalar::{NumberMode, Rational, Scalar};

/// A game in whichever number mode its file requested.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyGame {
    Rational(Game<Rational>),
    Float(Game<f64>),
}

impl AnyGame {
    pub fn mode(&self) -> NumberMode {
        match self {
            AnyGame::Rational(_) => NumberMode::Rational,
            AnyGame::Float(_) => NumberMode::Float,
        }
    }

    pub fn n_players(&self) -> usize {
        match self {
            AnyGame::Rational(g) => g.n_players(),
            AnyGame::Float(g) => g.n_players(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GameFile {
    pub labels: Labels,
    pub game: AnyGame,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGameFile {
    players: RawPlayers,
    values: Entries,
    #[serde(default)]
    number_mode: Option<String>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawPlayers {
    Count(usize),
    Labels(Vec<String>),
}

/// Object entries in document order, duplicates kept.
struct Entries(Vec<(String, Value)>);

impl<'de> Deserialize<'de> for Entries {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct EntriesVisitor;

        impl<'de> Visitor<'de> for EntriesVisitor {
            type Value = Entries;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an object mapping coalition keys to numbers")
            }

            fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> Result<Entries, A::Error> {
                let mut out = Vec::new();
                while let Some(entry) = map.next_entry::<String, Value>()? {
                    out.push(entry);
                }
                Ok(Entries(out))
            }
        }

        d.deserialize_map(EntriesVisitor)
    }
}

/// Parses and validates a game file.
pub fn parse_game_file(text: &str) -> Result<GameFile, IoError> {
    let raw: RawGameFile = serde_json::from_str(text).map_err(|e| IoError::Json(e.to_string()))?;
    let labels = match raw.players {
        RawPlayers::Count(n) => Labels::new(Labels::numeric(n).0)?,
        RawPlayers::Labels(names) => Labels::new(names)?,
    };
    let mode = match raw.number_mode.as_deref() {
        None => NumberMode::Rational,
        Some(m) => m
            .parse()
            .map_err(|e: crate::scalar::ParseScalarError| IoError::Json(e.to_string()))?,
    };
    let game = match mode {
        NumberMode::Rational => AnyGame::Rational(build_game(&labels, &raw.values.0)?),
        NumberMode::Float => AnyGame::Float(build_game(&labels, &raw.values.0)?),
    };
    Ok(GameFile { labels, game })
}

fn build_game<S: Scalar>(labels: &Labels, entries: &[(String, Value)]) -> Result<Game<S>, IoError> {
    let n = labels.len();
    let mut values: Vec<Option<S>> = vec![None; 1 << n];
    values[0] = Some(S::zero());
    let mut seen = vec![false; 1 << n];
    for (key, raw) in entries {
        let c = labels.parse_key(key)?;
        if std::mem::replace(&mut seen[c.index()], true) {
            return Err(IoError::DuplicateCoalition(key.clone()));
        }
        let text = match raw {
            Value::Number(num) => num.to_string(),
            Value::String(s) => s.clone(),
            other => {
                return Err(IoError::BadNumber {
                    key: key.clone(),
                    source: crate::scalar::ParseScalarError::Malformed(other.to_string()),
                })
            }
        };
        let value = S::parse(&text).map_err(|source| IoError::BadNumber {
            key: key.clone(),
            source,
        })?;
        values[c.index()] = Some(value);
    }
    let values = values
        .into_iter()
        .enumerate()
        .map(|(mask, v)| v.ok_or_else(|| IoError::MissingValue(labels.key(Coalition::from_mask(mask as u32)))))
        .collect::<Result<Vec<S>, _>>()?;
    Game::new(n, values).map_err(|e| IoError::InvalidGame(labels.explain(&e)))
}

/// Canonical game file: players, number mode, then every non-empty
/// coalition ordered by size and then lexicographically.
pub fn write_game_file<S: Scalar>(game: &Game<S>, labels: &Labels) -> String {
    let mut out = String::from("{\n  \"players\": ");
    if labels.is_numeric() {
        out.push_str(&labels.len().to_string());
    } else {
        out.push('[');
        for (k, l) in labels.as_slice().iter().enumerate() {
            if k > 0 {
                out.push_str(", ");
            }
            json_str(&mut out, l);
        }
        out.push(']');
    }
    out.push_str(",\n  \"number_mode\": ");
    json_str(&mut out, S::MODE.as_str());
    out.push_str(",\n  \"values\": {\n");
    let order: Vec<Coalition> = labels.canonical_order().into_iter().skip(1).collect();
    for (k, c) in order.iter().enumerate() {
        out.push_str("    ");
        json_str(&mut out, &labels.key(*c));
        out.push_str(": ");
        out.push_str(&json_number(game.value(*c)));
        if k + 1 < order.len() {
            out.push(',');
        }
        out.push('\n');
    }
    out.push_str("  }\n}\n");
    out
}

/// Integers and floats as bare JSON numbers, fractions as `"p/q"` strings.
fn json_number<S: Scalar>(x: &S) -> String {
    let text = x.render();
    if text.contains('/') {
        format!("\"{text}\"")
    } else {
        text
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{counterexample3, example1};

    #[test]
    fn parses_numeric_players() {
        let text = r#"{"players": 2, "values": {"1": 1, "2": "3/2", "2,1": 2.5}}"#;
        let f = parse_game_file(text).unwrap();
        let AnyGame::Rational(g) = f.game else {
            panic!("rational by default");
        };
        assert_eq!(g.value(Coalition::grand(2)), &Rational::from_ratio(5, 2));
        assert_eq!(g.standalone(1), &Rational::from_ratio(3, 2));
    }

    #[test]
    fn parses_labelled_float_game() {
        let text = r#"{"players": ["alice", "bob"], "number_mode": "float",
                      "values": {"": 0, "alice": 1, "bob": 2, "alice,bob": 4}}"#;
        let f = parse_game_file(text).unwrap();
        assert_eq!(f.labels.label(1), "bob");
        let AnyGame::Float(g) = f.game else {
            panic!("float requested");
        };
        assert_eq!(g.values(), &[0.0, 1.0, 2.0, 4.0]);
    }

    #[test]
    fn rejects_missing_and_duplicate_keys() {
        let missing = r#"{"players": 2, "values": {"1": 1, "2": 2}}"#;
        let err = parse_game_file(missing).unwrap_err();
        assert_eq!(err, IoError::MissingValue("1,2".into()));
        assert!(err.to_string().contains("missing coalition value"));

        let dup = r#"{"players": 2, "values": {"1": 1, "2": 2, "1,2": 3, "2,1": 3}}"#;
        assert_eq!(
            parse_game_file(dup).unwrap_err(),
            IoError::DuplicateCoalition("2,1".into())
        );
        let dup_literal = r#"{"players": 1, "values": {"1": 1, "1": 2}}"#;
        assert!(matches!(
            parse_game_file(dup_literal),
            Err(IoError::DuplicateCoalition(_))
        ));
    }

    #[test]
    fn reports_monotonicity_with_labels() {
        let text = r#"{"players": ["a", "b"], "values": {"a": 3, "b": 2, "a,b": 2}}"#;
        let err = parse_game_file(text).unwrap_err();
        assert_eq!(
            err.to_string(),
            "invalid game: not monotone: value of {a} exceeds value of {a,b}"
        );
    }

    #[test]
    fn rejects_malformed_documents() {
        for text in [
            "not json",
            r#"{"players": 2}"#,
            r#"{"players": 0, "values": {}}"#,
            r#"{"players": 1, "values": {"1": true}}"#,
            r#"{"players": 1, "values": {"1": "x"}}"#,
            r#"{"players": 1, "values": {"1": 1}, "number_mode": "complex"}"#,
            r#"{"players": 1, "values": {"1": 1}, "extra": 0}"#,
            r#"{"players": 1, "values": {"": 1, "1": 1}}"#,
        ] {
            assert!(parse_game_file(text).is_err(), "{text}");
        }
    }

    #[test]
    fn canonical_example1() {
        let text = write_game_file(&example1::<Rational>(), &Labels::numeric(4));
        assert!(text.starts_with("{\n  \"players\": 4,\n  \"number_mode\": \"rational\",\n  \"values\": {\n    \"1\": 1,\n"));
        assert!(text.ends_with("    \"1,2,3,4\": 9\n  }\n}\n"));
        let parsed = parse_game_file(&text).unwrap();
        assert_eq!(parsed.game, AnyGame::Rational(example1()));
        let again = match &parsed.game {
            AnyGame::Rational(g) => write_game_file(g, &parsed.labels),
            AnyGame::Float(_) => unreachable!(),
        };
        assert_eq!(again, text);
    }

    #[test]
    fn fractions_are_strings() {
        let g = counterexample3::<Rational>()
            .with_value(Coalition::grand(3), Rational::from_ratio(13, 2))
            .unwrap();
        let text = write_game_file(&g, &Labels::new(vec!["x".into(), "y".into(), "z".into()]).unwrap());
        assert!(text.contains("\"x,y,z\": \"13/2\""));
        assert!(text.contains("\"players\": [\"x\", \"y\", \"z\"]"));
        let back = parse_game_file(&text).unwrap();
        assert_eq!(back.game, AnyGame::Rational(g));
    }
}
