//! Cascade file formats.
//!
//! JSON lines, one cascade per line:
//!
//! ```text
//! {"id":"c1","edges":[[0,1],[0,2]],"coordinated":[0]}
//! ```
//!
//! The node count is one more than the largest id appearing in `edges`
//! (a cascade without edges is a single node `0`). Coordinated ids must lie
//! inside that range.
//!
//! CSV pair: an edges file with header `cascade_id,parent,child` and a labels
//! file with header `cascade_id,node` listing coordinated nodes. A row with an
//! empty `parent` declares a cascade consisting of the lone node `child`.
//! Cascades appear in order of first mention in the edges file.

use std::collections::{HashMap, HashSet};
use std::fs::File;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::CascadeRecord;
use crate::error::{Error, Result};
use crate::tree::{DirectedTree, Labelling};

#[derive(Debug, Serialize, Deserialize)]
struct JsonCascade {
    id: String,
    edges: Vec<[usize; 2]>,
    coordinated: Vec<usize>,
}

fn build_record(id: String, edges: &[(usize, usize)], coordinated: &[usize]) -> Result<CascadeRecord> {
    let node_count = edges.iter().map(|&(p, c)| p.max(c) + 1).max().unwrap_or(1);
    let tree = DirectedTree::from_edges(node_count, edges)?;
    let observed = Labelling::from_ones(node_count, coordinated.iter().copied())?;
    Ok(CascadeRecord { id, tree, observed })
}

fn wrap(line: usize, id: &str, err: Error) -> Error {
    Error::Record {
        line,
        id: id.to_owned(),
        source: Box::new(err),
    }
}

pub fn read_jsonl<R: BufRead>(reader: R) -> Result<Vec<CascadeRecord>> {
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let raw: JsonCascade = serde_json::from_str(&line).map_err(|e| Error::Parse {
            line: line_no,
            message: e.to_string(),
        })?;
        if raw.id.is_empty() {
            return Err(Error::Parse {
                line: line_no,
                message: "empty cascade id".into(),
            });
        }
        if !seen.insert(raw.id.clone()) {
            return Err(Error::DuplicateId {
                line: line_no,
                id: raw.id,
            });
        }
        let edges: Vec<(usize, usize)> = raw.edges.iter().map(|&[p, c]| (p, c)).collect();
        let record = build_record(raw.id.clone(), &edges, &raw.coordinated)
            .map_err(|e| wrap(line_no, &raw.id, e))?;
        out.push(record);
    }
    Ok(out)
}

pub fn write_jsonl<W: Write>(records: &[CascadeRecord], mut writer: W) -> Result<()> {
    for r in records {
        let raw = JsonCascade {
            id: r.id.clone(),
            edges: r.tree.edges().map(|(p, c)| [p, c]).collect(),
            coordinated: r.observed.one_nodes().collect(),
        };
        serde_json::to_writer(&mut writer, &raw)?;
        writer.write_all(b"\n")?;
    }
    Ok(())
}

#[derive(Debug, Deserialize)]
struct EdgeRow {
    cascade_id: String,
    parent: Option<usize>,
    child: usize,
}

#[derive(Debug, Deserialize)]
struct LabelRow {
    cascade_id: String,
    node: usize,
}

#[derive(Default)]
struct Pending {
    first_line: usize,
    edges: Vec<(usize, usize)>,
    lone: Option<usize>,
    coordinated: Vec<usize>,
}

/// Deserialises every row of `reader`, passing along its line number.
fn for_each_row<R, T, F>(reader: R, mut f: F) -> Result<()>
where
    R: Read,
    T: serde::de::DeserializeOwned,
    F: FnMut(usize, T) -> Result<()>,
{
    let mut r = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(reader);
    let headers = r.headers()?.clone();
    let mut rec = csv::StringRecord::new();
    while r.read_record(&mut rec)? {
        let line = rec.position().map_or(0, |p| p.line() as usize);
        let row = rec.deserialize(Some(&headers)).map_err(|e| Error::Parse {
            line,
            message: e.to_string(),
        })?;
        f(line, row)?;
    }
    Ok(())
}

pub fn read_csv_pair<E: Read, L: Read>(edges: E, labels: L) -> Result<Vec<CascadeRecord>> {
    let mut order: Vec<String> = Vec::new();
    let mut pending: HashMap<String, Pending> = HashMap::new();

    for_each_row(edges, |line, row: EdgeRow| {
        let entry = pending.entry(row.cascade_id.clone()).or_insert_with(|| {
            order.push(row.cascade_id.clone());
            Pending {
                first_line: line,
                ..Default::default()
            }
        });
        match row.parent {
            Some(p) => entry.edges.push((p, row.child)),
            None => entry.lone = Some(row.child),
        }
        Ok(())
    })?;

    for_each_row(labels, |line, row: LabelRow| {
        let entry = pending.get_mut(&row.cascade_id).ok_or_else(|| Error::Parse {
            line,
            message: format!("labels file: unknown cascade id '{}'", row.cascade_id),
        })?;
        entry.coordinated.push(row.node);
        Ok(())
    })?;

    order
        .into_iter()
        .map(|id| {
            let p = pending.remove(&id).expect("every ordered id is pending");
            if p.edges.is_empty() {
                if let Some(v) = p.lone.filter(|&v| v != 0) {
                    return Err(wrap(
                        p.first_line,
                        &id,
                        Error::Parse {
                            line: p.first_line,
                            message: format!("a single-node cascade must use node 0, got {v}"),
                        },
                    ));
                }
            }
            build_record(id.clone(), &p.edges, &p.coordinated).map_err(|e| wrap(p.first_line, &id, e))
        })
        .collect()
}

pub fn write_csv_pair<E: Write, L: Write>(records: &[CascadeRecord], edges: E, labels: L) -> Result<()> {
    let mut ew = csv::Writer::from_writer(edges);
    ew.write_record(["cascade_id", "parent", "child"])?;
    let mut lw = csv::Writer::from_writer(labels);
    lw.write_record(["cascade_id", "node"])?;
    for r in records {
        if r.tree.node_count() == 1 {
            ew.write_record([r.id.as_str(), "", "0"])?;
        }
        for (p, c) in r.tree.edges() {
            ew.write_record([r.id.clone(), p.to_string(), c.to_string()])?;
        }
        for v in r.observed.one_nodes() {
            lw.write_record([r.id.clone(), v.to_string()])?;
        }
    }
    ew.flush()?;
    lw.flush()?;
    Ok(())
}

/// On-disk layout of a cascade dataset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CascadeFormat {
    JsonLines,
    /// Edges file is the main path; labels live in the given file.
    CsvPair { labels: std::path::PathBuf },
}

pub fn load_cascades(path: &Path, format: &CascadeFormat) -> Result<Vec<CascadeRecord>> {
    match format {
        CascadeFormat::JsonLines => read_jsonl(BufReader::new(File::open(path)?)),
        CascadeFormat::CsvPair { labels } => {
            read_csv_pair(File::open(path)?, File::open(labels)?)
        }
    }
}
