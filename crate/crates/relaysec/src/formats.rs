//! Text and JSON file formats.
//!
//! - matrix: `rows cols modulus` then the entries, row-major, whitespace
//!   separated
//! - distribution: JSON `{variables: [{name, alphabet}], rows: [{values,
//!   numerator, denominator}]}`
//! - code: JSON with the table shape and the encoder/relay/decoder tables
//! - network: `node <id> <source|terminal|intermediate> [message] [random]`
//!   and `edge <from> <to>` lines
//! - layered network: JSON `{c, k, r, q}`
//! - square: `d` lines of `d` integers
//!
//! Text formats skip blank lines and anything after `#`.

use serde::{Deserialize, Serialize};

use relaysec_core::algebra::Matrix;
use relaysec_core::antilatin::AntiLatinSquare;
use relaysec_core::codes::{CodeShape, OneHopCode};
use relaysec_core::info::{JointDistribution, Variable};
use relaysec_core::network::{LayeredUnicastNetwork, Node, NodeRole, WiretapNetwork};

use crate::{Error, Result};

/// Non-empty lines with comments stripped, numbered from 1.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
}

fn parse_num<T: std::str::FromStr>(token: &str, line: usize) -> Result<T> {
    token.parse().map_err(|_| Error::Parse {
        line,
        message: format!("`{token}` is not a non-negative integer"),
    })
}

pub fn parse_matrix(text: &str) -> Result<Matrix> {
    let mut tokens = content_lines(text).flat_map(|(n, l)| l.split_whitespace().map(move |t| (n, t)));
    let mut header = [0usize; 3];
    for slot in header.iter_mut() {
        let (n, t) = tokens.next().ok_or(Error::Parse {
            line: 1,
            message: "expected header `rows cols modulus`".into(),
        })?;
        *slot = parse_num(t, n)?;
    }
    let entries = tokens.map(|(n, t)| parse_num(t, n)).collect::<Result<Vec<u64>>>()?;
    Ok(Matrix::new(header[0], header[1], header[2] as u64, entries)?)
}

pub fn write_matrix(m: &Matrix) -> String {
    let mut out = format!("{} {} {}\n", m.rows(), m.cols(), m.modulus());
    for row in m.entries().chunks(m.cols().max(1)) {
        let cells: Vec<String> = row.iter().map(u64::to_string).collect();
        out += &cells.join(" ");
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VariableSpec {
    pub name: String,
    pub alphabet: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowSpec {
    pub values: Vec<u32>,
    pub numerator: u64,
    pub denominator: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistributionFile {
    pub variables: Vec<VariableSpec>,
    pub rows: Vec<RowSpec>,
}

/// Probabilities must sum to exactly 1.
pub fn parse_distribution(text: &str) -> Result<JointDistribution> {
    let file: DistributionFile = serde_json::from_str(text)?;
    let vars = file
        .variables
        .into_iter()
        .map(|v| Variable::new(v.name, v.alphabet))
        .collect();
    let rows = file.rows.into_iter().map(|r| (r.values, r.numerator, r.denominator));
    Ok(JointDistribution::from_rationals(vars, rows)?)
}

pub fn distribution_file(dist: &JointDistribution) -> DistributionFile {
    DistributionFile {
        variables: dist
            .variables()
            .iter()
            .map(|v| VariableSpec {
                name: v.name.clone(),
                alphabet: v.alphabet,
            })
            .collect(),
        rows: dist
            .rational_rows()
            .map(|(values, numerator, denominator)| RowSpec {
                values: values.to_vec(),
                numerator,
                denominator,
            })
            .collect(),
    }
}

pub fn write_distribution(dist: &JointDistribution) -> String {
    serde_json::to_string_pretty(&distribution_file(dist)).expect("plain data")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeFile {
    pub d: u32,
    #[serde(default = "one")]
    pub shots: usize,
    #[serde(default = "one")]
    pub relay_shots: usize,
    #[serde(default = "one")]
    pub source_scrambles: usize,
    #[serde(default)]
    pub relay_scrambles: usize,
    pub encoder: Vec<u32>,
    pub relay: Vec<u32>,
    /// Read off the other tables when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decoder: Option<Vec<u32>>,
}

fn one() -> usize {
    1
}

pub fn parse_code(text: &str) -> Result<OneHopCode> {
    let f: CodeFile = serde_json::from_str(text)?;
    let shape = CodeShape {
        d: f.d,
        shots: f.shots,
        relay_shots: f.relay_shots,
        source_scrambles: f.source_scrambles,
        relay_scrambles: f.relay_scrambles,
    };
    match f.decoder {
        Some(dec) => Ok(OneHopCode::from_tables(shape, f.encoder, f.relay, dec)?),
        None => OneHopCode::with_derived_decoder(shape, f.encoder, f.relay)?
            .ok_or_else(|| Error::Invalid("relay output does not determine the message".into())),
    }
}

pub fn write_code(code: &OneHopCode) -> String {
    let s = code.shape();
    let file = CodeFile {
        d: s.d,
        shots: s.shots,
        relay_shots: s.relay_shots,
        source_scrambles: s.source_scrambles,
        relay_scrambles: s.relay_scrambles,
        encoder: code.encoder_table().to_vec(),
        relay: code.relay_table().to_vec(),
        decoder: Some(code.decoder_table().to_vec()),
    };
    serde_json::to_string_pretty(&file).expect("plain data")
}

pub fn parse_network(text: &str) -> Result<WiretapNetwork> {
    let mut nodes = Vec::new();
    let mut edges: Vec<(String, String)> = Vec::new();
    for (line, l) in content_lines(text) {
        let words: Vec<&str> = l.split_whitespace().collect();
        let bad = |message: String| Error::Parse { line, message };
        match words.as_slice() {
            ["node", id, role, flags @ ..] => {
                let role = match *role {
                    "source" => NodeRole::Source,
                    "terminal" => NodeRole::Terminal,
                    "intermediate" => NodeRole::Intermediate,
                    other => return Err(bad(format!("unknown role `{other}`"))),
                };
                let mut node = Node::new(*id, role);
                for flag in flags {
                    match *flag {
                        "message" => node.message = true,
                        "random" => node.random = true,
                        other => return Err(bad(format!("unknown node flag `{other}`"))),
                    }
                }
                nodes.push(node);
            }
            ["edge", from, to] => edges.push((from.to_string(), to.to_string())),
            _ => return Err(bad(format!("cannot parse `{l}`"))),
        }
    }
    let edge_refs: Vec<(&str, &str)> = edges.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    Ok(WiretapNetwork::new(nodes, &edge_refs)?)
}

pub fn write_network(net: &WiretapNetwork) -> String {
    let mut out = String::new();
    for n in net.nodes() {
        out += &format!("node {} {}", n.id, n.role.name());
        if n.message {
            out += " message";
        }
        if n.random {
            out += " random";
        }
        out.push('\n');
    }
    for &(u, v) in net.edges() {
        out += &format!("edge {} {}\n", net.nodes()[u].id, net.nodes()[v].id);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayeredFile {
    pub c: usize,
    pub k: Vec<u32>,
    pub r: Vec<u32>,
    pub q: u64,
}

pub fn parse_layered(text: &str) -> Result<LayeredUnicastNetwork> {
    let f: LayeredFile = serde_json::from_str(text)?;
    if f.c != f.k.len() {
        return Err(Error::Invalid(format!("c = {} but k lists {} layers", f.c, f.k.len())));
    }
    Ok(LayeredUnicastNetwork::new(f.k, f.r, f.q)?)
}

/// Rows of integers, one row per line; the shape is not checked.
pub fn parse_rows(text: &str) -> Result<Vec<Vec<u32>>> {
    content_lines(text)
        .map(|(n, l)| l.split_whitespace().map(|t| parse_num(t, n)).collect())
        .collect()
}

/// Inline rows separated by `;` with entries separated by `,` or spaces,
/// e.g. `0,1,0;1,1,2;0,2,2`.
pub fn parse_inline_rows(spec: &str) -> Result<Vec<Vec<u32>>> {
    parse_rows(&spec.replace(';', "\n").replace(',', " "))
}

pub fn parse_square(text: &str) -> Result<AntiLatinSquare> {
    Ok(AntiLatinSquare::from_rows(&parse_rows(text)?)?)
}

pub fn parse_inline_square(spec: &str) -> Result<AntiLatinSquare> {
    Ok(AntiLatinSquare::from_rows(&parse_inline_rows(spec)?)?)
}

pub fn write_square(s: &AntiLatinSquare) -> String {
    s.rows()
        .iter()
        .map(|r| r.iter().map(u32::to_string).collect::<Vec<_>>().join(" ") + "\n")
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_round_trip() {
        let m = parse_matrix("# generator\n2 3 5\n1 0 2\n0 1 4\n").unwrap();
        assert_eq!(m.get(1, 2), 4);
        assert_eq!(parse_matrix(&write_matrix(&m)).unwrap(), m);
        assert!(matches!(parse_matrix("2 2 5\n1 x 0 0"), Err(Error::Parse { line: 2, .. })));
        assert!(parse_matrix("2 2 5\n1 0 0").is_err());
    }

    #[test]
    fn network_round_trip() {
        let text = "node a source message\nnode p intermediate random\nnode b terminal\nedge a b\nedge p b\n";
        let net = parse_network(text).unwrap();
        assert_eq!(net.pseudo_sources(), vec![1]);
        assert_eq!(write_network(&net), text);
        assert!(matches!(parse_network("node a boss"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn square_formats() {
        let s = parse_inline_square("0,1,0;1,1,2;0,2,2").unwrap();
        assert_eq!(parse_square(&write_square(&s)).unwrap(), s);
        assert!(parse_inline_square("0,1;1,0").is_err());
    }

    #[test]
    fn layered_checks_layer_count() {
        assert!(parse_layered(r#"{"c":2,"k":[2,2],"r":[1,1],"q":2}"#).is_ok());
        assert!(matches!(
            parse_layered(r#"{"c":3,"k":[2,2],"r":[1,1],"q":2}"#),
            Err(Error::Invalid(_))
        ));
    }
}
