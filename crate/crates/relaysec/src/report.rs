//! Machine-readable and aligned-text renderings of analysis results.
//!
//! Every JSON document carries `"schema": "relaysec/v1"` and a `kind`.
//! Field order is fixed, so equal inputs give byte-identical output.

use serde_json::{json, Map, Value};

use relaysec_core::antilatin::{AntiLatinSquare, MutualSet, PairMode};
use relaysec_core::attack::{
    AttackStrategy, ClassificationTable, PerShotVerdict, Selector, TableRow, TABLE_COLUMNS,
};
use relaysec_core::attack::SecurityVerdict;

pub const SCHEMA: &str = "relaysec/v1";

/// `{schema, kind, ..fields}`.
pub fn envelope(kind: &str, fields: Value) -> Value {
    let mut map = Map::new();
    map.insert("schema".into(), SCHEMA.into());
    map.insert("kind".into(), kind.into());
    if let Value::Object(rest) = fields {
        map.extend(rest);
    }
    Value::Object(map)
}

pub fn strategy_json(s: &AttackStrategy) -> Value {
    let selector = match &s.second_edge_selector {
        Selector::Fixed(e) => json!(e.to_string()),
        Selector::Adaptive(map) => json!(map.iter().map(|e| e.to_string()).collect::<Vec<_>>()),
    };
    json!({
        "class": s.class.name(),
        "first_edge": s.first_edge.to_string(),
        "modification": s.modification,
        "second_edge_selector": selector,
        "description": s.describe(),
    })
}

pub fn verdict_json(code_id: &str, v: &SecurityVerdict) -> Value {
    json!({
        "code_id": code_id,
        "class": v.class.name(),
        "level": v.level.name(),
        "max_leakage_bits": v.max_leakage_bits,
        "witness": strategy_json(&v.witness),
        "strategies": v.strategies.map(|n| n.to_string()),
    })
}

pub fn verdict_text(code_id: &str, v: &SecurityVerdict) -> String {
    format!(
        "{code_id} {}: {} (max leakage {:.6} bits)\n  witness: {}\n",
        v.class,
        v.level,
        v.max_leakage_bits,
        v.witness.describe()
    )
}

pub fn per_shot_json(code_id: &str, v: &PerShotVerdict) -> Value {
    json!({
        "code_id": code_id,
        "class": v.class.name(),
        "mode": "per-shot",
        "level": v.level.name(),
        "max_leakage_bits": v.max_leakage_bits,
        "modification": v.modification,
    })
}

pub fn per_shot_text(code_id: &str, v: &PerShotVerdict) -> String {
    format!(
        "{code_id} {} (per-shot): {} (max leakage {:.6} bits)\n",
        v.class, v.level, v.max_leakage_bits
    )
}

fn row_label(row: TableRow, d: u32) -> String {
    match row {
        TableRow::ScalarLinear => format!("scalar-linear over Z_{d}"),
        TableRow::StandardNonlinear => format!("scalar-non-linear over Z_{d}"),
        TableRow::AntiLatin => format!("scalar-non-linear (anti-Latin) over Z_{d}"),
        TableRow::VectorLinear => format!("vector-linear over Z_{d}"),
    }
}

const COLUMN_HEADERS: [&str; 3] = ["deterministic and passive", "active", "adaptive"];

pub fn table_json(t: &ClassificationTable) -> Value {
    let cells: Vec<Value> = t
        .cells
        .iter()
        .map(|c| {
            json!({
                "d": c.d,
                "row": c.row.name(),
                "class": c.class.name(),
                "level": c.verdict.level.name(),
                "expected": c.expected.name(),
                "matches": c.matches(),
                "max_leakage_bits": c.verdict.max_leakage_bits,
                "code": c.code_label,
                "witness": strategy_json(&c.verdict.witness),
            })
        })
        .collect();
    envelope(
        "classification-table",
        json!({
            "columns": TABLE_COLUMNS.iter().map(|c| c.name()).collect::<Vec<_>>(),
            "matches_expected": t.matches_expected(),
            "cells": cells,
        }),
    )
}

pub fn table_csv(t: &ClassificationTable) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["d", "row", "class", "level", "expected", "matches", "max_leakage_bits", "code"])
        .expect("in-memory write");
    for c in &t.cells {
        w.write_record([
            c.d.to_string(),
            c.row.name().to_string(),
            c.class.name().to_string(),
            c.verdict.level.name().to_string(),
            c.expected.name().to_string(),
            c.matches().to_string(),
            format!("{:.12}", c.verdict.max_leakage_bits),
            c.code_label.clone(),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv output is UTF-8")
}

/// One line per (row, d) with the three attack columns. Cells that differ
/// from the expected level are marked with `!`.
pub fn table_text(t: &ClassificationTable) -> String {
    let mut lines: Vec<[String; 4]> = vec![[
        "code".to_string(),
        COLUMN_HEADERS[0].to_string(),
        COLUMN_HEADERS[1].to_string(),
        COLUMN_HEADERS[2].to_string(),
    ]];
    let mut keys: Vec<(TableRow, u32)> = t.cells.iter().map(|c| (c.row, c.d)).collect();
    keys.sort();
    keys.dedup();
    for (row, d) in keys {
        let mut line = [row_label(row, d), String::new(), String::new(), String::new()];
        for (i, class) in TABLE_COLUMNS.iter().enumerate() {
            if let Some(c) = t.cell(d, row, *class) {
                let mark = if c.matches() { "" } else { " !" };
                line[i + 1] = format!("{}{mark}", c.verdict.level);
            }
        }
        lines.push(line);
    }
    let widths: Vec<usize> = (0..4).map(|i| lines.iter().map(|l| l[i].len()).max().unwrap_or(0)).collect();
    let mut out = String::new();
    for (n, l) in lines.iter().enumerate() {
        let cells: Vec<String> = l.iter().zip(&widths).map(|(s, w)| format!("{s:<w$}")).collect();
        out += cells.join("  ").trim_end();
        out.push('\n');
        if n == 0 {
            out += &"-".repeat(widths.iter().sum::<usize>() + 6);
            out.push('\n');
        }
    }
    out
}

pub fn mode_name(mode: PairMode) -> &'static str {
    match mode {
        PairMode::Decodable => "decodable",
        PairMode::OneToOne => "one-to-one",
    }
}

pub fn square_json(s: &AntiLatinSquare) -> Value {
    json!(s.rows())
}

pub fn mutual_set_json(set: &MutualSet) -> Value {
    envelope(
        "antilatin-maxset",
        json!({
            "d": set.d,
            "mode": mode_name(set.mode),
            "size": set.size,
            "exact": set.exact,
            "budget_exhausted": set.budget_exhausted,
            "certificate": set.certificate.iter().map(square_json).collect::<Vec<_>>(),
        }),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use relaysec_core::attack::classification_table;

    #[test]
    fn table_renderings_agree() {
        let t = classification_table(&[2]).unwrap();
        let text = table_text(&t);
        assert!(text.contains("scalar-non-linear over Z_2  imperfectly-secret"));
        assert!(!text.contains('!'));
        let csv = table_csv(&t);
        assert_eq!(csv.lines().count(), 1 + t.cells.len());
        let json = table_json(&t);
        assert_eq!(json["schema"], SCHEMA);
        assert_eq!(json["matches_expected"], true);
    }
}
