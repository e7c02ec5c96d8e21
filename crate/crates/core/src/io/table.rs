use std::str::FromStr;

use serde_json::Value;

use super::{json_str, IoError, Labels};
use crate::coalition::Coalition;
use crate::matrix::RewardMatrix;
use crate::mechanism::EfficientPlayerMap;
use crate::scalar::Scalar;

/// First cell of the table-format row listing efficient players.
const EFFICIENT_ROW: &str = "efficient";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableFormat {
    /// CSV, one row per player and one column per coalition.
    Table,
    /// CSV triples `player,coalition,reward` (plus `efficient` when known).
    Long,
    Json,
}

impl FromStr for TableFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "table" => Ok(TableFormat::Table),
            "long" => Ok(TableFormat::Long),
            "json" => Ok(TableFormat::Json),
            other => Err(format!("unknown format {other:?} (table, long or json)")),
        }
    }
}

/// Serializes a reward matrix. Rationals are written as `p/q`, floats with
/// 12 significant digits.
pub fn write_reward_table<S: Scalar>(
    matrix: &RewardMatrix<S>,
    labels: &Labels,
    efficient: Option<&EfficientPlayerMap>,
    format: TableFormat,
) -> String {
    let order = labels.canonical_order();
    match format {
        TableFormat::Table => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let header = std::iter::once("player".to_string()).chain(order.iter().map(|c| labels.key(*c)));
            w.write_record(header).expect("in-memory write");
            for i in 0..matrix.n_players() {
                let row = std::iter::once(labels.label(i).to_string())
                    .chain(order.iter().map(|c| matrix.get(i, *c).render()));
                w.write_record(row).expect("in-memory write");
            }
            if let Some(eff) = efficient {
                let row = std::iter::once(EFFICIENT_ROW.to_string()).chain(
                    order
                        .iter()
                        .map(|c| eff.get(*c).map(|k| labels.label(k).to_string()).unwrap_or_default()),
                );
                w.write_record(row).expect("in-memory write");
            }
            finish(w)
        }
        TableFormat::Long => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let mut header = vec!["player", "coalition", "reward"];
            if efficient.is_some() {
                header.push("efficient");
            }
            w.write_record(&header).expect("in-memory write");
            for c in &order {
                for i in 0..matrix.n_players() {
                    let mut row = vec![
                        labels.label(i).to_string(),
                        labels.key(*c),
                        matrix.get(i, *c).render(),
                    ];
                    if let Some(eff) = efficient {
                        row.push((eff.get(*c) == Some(i)).to_string());
                    }
                    w.write_record(&row).expect("in-memory write");
                }
            }
            finish(w)
        }
        TableFormat::Json => {
            let mut out = String::from("{\n  \"players\": [");
            for (k, l) in labels.as_slice().iter().enumerate() {
                if k > 0 {
                    out.push_str(", ");
                }
                json_str(&mut out, l);
            }
            out.push_str("],\n  \"number_mode\": ");
            json_str(&mut out, S::MODE.as_str());
            out.push_str(",\n  \"rewards\": {\n");
            for (k, c) in order.iter().enumerate() {
                out.push_str("    ");
                json_str(&mut out, &labels.key(*c));
                out.push_str(": {");
                for i in 0..matrix.n_players() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    json_str(&mut out, labels.label(i));
                    out.push_str(": ");
                    json_str(&mut out, &matrix.get(i, *c).render());
                }
                out.push('}');
                if k + 1 < order.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            out.push_str("  }");
            if let Some(eff) = efficient {
                out.push_str(",\n  \"efficient\": {");
                for (k, (c, p)) in order
                    .iter()
                    .filter_map(|c| eff.get(*c).map(|p| (c, p)))
                    .enumerate()
                {
                    if k > 0 {
                        out.push_str(", ");
                    }
                    json_str(&mut out, &labels.key(*c));
                    out.push_str(": ");
                    json_str(&mut out, labels.label(p));
                }
                out.push('}');
            }
            out.push_str("\n}\n");
            out
        }
    }
}

fn finish(w: csv::Writer<Vec<u8>>) -> String {
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input")
}

/// Reads a reward matrix written in any [`TableFormat`], detected from the
/// content. Every (player, coalition) entry must be present.
pub fn parse_reward_table<S: Scalar>(text: &str, labels: &Labels) -> Result<RewardMatrix<S>, IoError> {
    let n = labels.len();
    let mut cells: Vec<Option<S>> = vec![None; n << n];
    let mut put = |player: usize, c: Coalition, raw: &str, key: &str| -> Result<(), IoError> {
        let v = S::parse(raw).map_err(|source| IoError::BadNumber {
            key: format!("{}@{}", labels.label(player), key),
            source,
        })?;
        let slot = &mut cells[c.index() * n + player];
        if slot.replace(v).is_some() {
            return Err(IoError::BadTable(format!(
                "entry for player {} in {key:?} given twice",
                labels.label(player)
            )));
        }
        Ok(())
    };

    if text.trim_start().starts_with('{') {
        let doc: Value = serde_json::from_str(text).map_err(|e| IoError::Json(e.to_string()))?;
        let rewards = doc
            .get("rewards")
            .and_then(Value::as_object)
            .ok_or_else(|| IoError::BadTable("missing \"rewards\" object".into()))?;
        for (key, row) in rewards {
            let c = labels.parse_key(key)?;
            let row = row
                .as_object()
                .ok_or_else(|| IoError::BadTable(format!("rewards for {key:?} must be an object")))?;
            for (label, v) in row {
                let i = player_index(labels, label)?;
                put(i, c, &json_scalar_text(v), key)?;
            }
        }
    } else {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .from_reader(text.as_bytes());
        let records: Vec<csv::StringRecord> = reader
            .records()
            .collect::<Result<_, _>>()
            .map_err(|e| IoError::Csv(e.to_string()))?;
        let header = records
            .first()
            .ok_or_else(|| IoError::BadTable("empty table".into()))?;
        if header.get(0) != Some("player") {
            return Err(IoError::BadTable("first column must be \"player\"".into()));
        }
        if header.get(1) == Some("coalition") {
            for rec in &records[1..] {
                let (Some(label), Some(key), Some(value)) = (rec.get(0), rec.get(1), rec.get(2)) else {
                    return Err(IoError::BadTable(format!("short row {rec:?}")));
                };
                put(player_index(labels, label)?, labels.parse_key(key)?, value, key)?;
            }
        } else {
            let columns: Vec<(Coalition, &str)> = header
                .iter()
                .skip(1)
                .map(|key| labels.parse_key(key).map(|c| (c, key)))
                .collect::<Result<_, _>>()?;
            for rec in &records[1..] {
                let label = rec.get(0).unwrap_or_default();
                if label == EFFICIENT_ROW && labels.index_of(label).is_none() {
                    continue;
                }
                let i = player_index(labels, label)?;
                if rec.len() != columns.len() + 1 {
                    return Err(IoError::BadTable(format!("row for {label:?} has {} cells", rec.len())));
                }
                for ((c, key), value) in columns.iter().zip(rec.iter().skip(1)) {
                    put(i, *c, value, key)?;
                }
            }
        }
    }

    let entries = cells
        .into_iter()
        .enumerate()
        .map(|(idx, v)| {
            v.ok_or_else(|| {
                let c = Coalition::from_mask((idx / n) as u32);
                IoError::BadTable(format!(
                    "no reward for player {} in {:?}",
                    labels.label(idx % n),
                    labels.key(c)
                ))
            })
        })
        .collect::<Result<Vec<S>, _>>()?;
    Ok(RewardMatrix::from_entries(n, entries).expect("n * 2^n entries"))
}

fn player_index(labels: &Labels, label: &str) -> Result<usize, IoError> {
    labels
        .index_of(label.trim())
        .ok_or_else(|| IoError::BadTable(format!("unknown player {label:?}")))
}

fn json_scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}
