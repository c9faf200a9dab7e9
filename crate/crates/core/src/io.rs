//! CSV and JSON files for trees, counts, releases and matrices.
//!
//! Tree files have the header `id,parent,node_weight,edge_weight`; `parent`
//! is empty for the root and empty weights mean 1. Counts files have the
//! header `leaf_id,count`. Releases are written as `id,true,noisy,consistent`
//! with a JSON sidecar of summary metrics next to them.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::generation::GenerationMatrix;
use crate::release::ReleaseReport;
use crate::tree::HierarchicalTree;

/// A tree together with node and edge weights, all in tree order.
/// `edge_weights[i - 1]` belongs to the edge from node `i` to its parent.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedTree {
    pub tree: HierarchicalTree,
    pub node_weights: Vec<f64>,
    pub edge_weights: Vec<f64>,
}

impl WeightedTree {
    pub fn unit(tree: HierarchicalTree) -> Self {
        let n = tree.len();
        Self {
            tree,
            node_weights: vec![1.0; n],
            edge_weights: vec![1.0; n - 1],
        }
    }

    pub fn generation_matrix(&self) -> Result<GenerationMatrix> {
        GenerationMatrix::new(
            Arc::new(self.tree.clone()),
            self.node_weights.clone(),
            self.edge_weights.clone(),
        )
    }
}

fn parse_error(line: u64, reason: impl Into<String>) -> Error {
    Error::Parse {
        line,
        reason: reason.into(),
    }
}

fn csv_error(e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line());
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => parse_error(line, format!("{other:?}")),
    }
}

fn reader<R: Read>(input: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input)
}

fn expect_header<R: Read>(rdr: &mut csv::Reader<R>, expected: &[&str]) -> Result<()> {
    let header = rdr.headers().map_err(csv_error)?;
    if header.iter().ne(expected.iter().copied()) {
        return Err(parse_error(
            1,
            format!("expected header `{}`, found `{}`", expected.join(","), header.iter().collect::<Vec<_>>().join(",")),
        ));
    }
    Ok(())
}

fn parse_weight(field: &str, line: u64, what: &str) -> Result<f64> {
    if field.is_empty() {
        return Ok(1.0);
    }
    field
        .parse::<f64>()
        .ok()
        .filter(|w| w.is_finite())
        .ok_or_else(|| parse_error(line, format!("{what} `{field}` is not a finite number")))
}

pub fn read_tree<R: Read>(input: R) -> Result<WeightedTree> {
    let mut rdr = reader(input);
    expect_header(&mut rdr, &["id", "parent", "node_weight", "edge_weight"])?;
    let mut links = Vec::new();
    let mut weights = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(csv_error)?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != 4 {
            return Err(parse_error(line, format!("expected 4 fields, found {}", record.len())));
        }
        let id = &record[0];
        if id.is_empty() {
            return Err(parse_error(line, "empty id"));
        }
        let parent = (!record[1].is_empty()).then(|| record[1].to_string());
        let node_w = parse_weight(&record[2], line, "node_weight")?;
        let edge_w = parse_weight(&record[3], line, "edge_weight")?;
        links.push((id.to_string(), parent));
        weights.push((node_w, edge_w));
    }
    let tree = HierarchicalTree::from_parent_links(links)?;
    let node_weights = (0..tree.len()).map(|i| weights[tree.input_position(i)].0).collect();
    let edge_weights = (1..tree.len()).map(|i| weights[tree.input_position(i)].1).collect();
    Ok(WeightedTree {
        tree,
        node_weights,
        edge_weights,
    })
}

pub fn load_tree(path: impl AsRef<Path>) -> Result<WeightedTree> {
    read_tree(File::open(path)?)
}

/// Writes rows in tree order. The root row leaves `edge_weight` empty.
pub fn write_tree<W: Write>(tree: &WeightedTree, out: W) -> Result<()> {
    let t = &tree.tree;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["id", "parent", "node_weight", "edge_weight"]).map_err(csv_error)?;
    for i in 0..t.len() {
        let parent = t.parent(i).map(|p| t.label(p).into_owned()).unwrap_or_default();
        let edge = match i {
            0 => String::new(),
            _ => tree.edge_weights[i - 1].to_string(),
        };
        w.write_record([t.label(i).as_ref(), &parent, &tree.node_weights[i].to_string(), &edge])
            .map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

pub fn save_tree(tree: &WeightedTree, path: impl AsRef<Path>) -> Result<()> {
    write_tree(tree, BufWriter::new(File::create(path)?))
}

/// Reads `leaf_id,count` rows and returns counts in leaf order. Every leaf
/// must appear exactly once and nothing else may.
pub fn read_counts<R: Read>(input: R, tree: &HierarchicalTree) -> Result<Vec<f64>> {
    let mut rdr = reader(input);
    expect_header(&mut rdr, &["leaf_id", "count"])?;
    let index = tree.label_index();
    let leaves = tree.leaves();
    let mut counts: Vec<Option<f64>> = vec![None; leaves.len()];
    for record in rdr.records() {
        let record = record.map_err(csv_error)?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != 2 {
            return Err(parse_error(line, format!("expected 2 fields, found {}", record.len())));
        }
        let label = &record[0];
        let count: u64 = record[1]
            .parse()
            .map_err(|_| parse_error(line, format!("count `{}` is not a non-negative integer", &record[1])))?;
        let Some(&i) = index.get(label) else {
            return Err(Error::InconsistentLeafSet(format!("line {line}: unknown node `{label}`")));
        };
        if !tree.is_leaf(i) {
            return Err(Error::InconsistentLeafSet(format!("line {line}: `{label}` is not a leaf")));
        }
        let slot = &mut counts[i - leaves.start];
        if slot.is_some() {
            return Err(Error::InconsistentLeafSet(format!("line {line}: leaf `{label}` listed twice")));
        }
        *slot = Some(count as f64);
    }
    counts
        .iter()
        .enumerate()
        .map(|(k, c)| {
            c.ok_or_else(|| {
                Error::InconsistentLeafSet(format!("no count for leaf `{}`", tree.label(leaves.start + k)))
            })
        })
        .collect()
}

pub fn load_counts(path: impl AsRef<Path>, tree: &HierarchicalTree) -> Result<Vec<f64>> {
    read_counts(File::open(path)?, tree)
}

pub fn write_counts<W: Write>(tree: &HierarchicalTree, counts: &[u64], out: W) -> Result<()> {
    if counts.len() != tree.leaf_count() {
        return Err(Error::DimensionMismatch {
            expected: tree.leaf_count(),
            actual: counts.len(),
        });
    }
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["leaf_id", "count"]).map_err(csv_error)?;
    for (i, c) in tree.leaves().zip(counts) {
        w.write_record([tree.label(i).as_ref(), &c.to_string()]).map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

pub fn save_counts(tree: &HierarchicalTree, counts: &[u64], path: impl AsRef<Path>) -> Result<()> {
    write_counts(tree, counts, BufWriter::new(File::create(path)?))
}

/// Summary written next to a release file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReleaseSummary {
    pub epsilon: f64,
    pub seed: u64,
    pub h: usize,
    pub n: usize,
    pub m: usize,
    pub rmse_nq: f64,
    pub bias: f64,
    pub mse_theory_noisy: f64,
    pub mse_theory_consistent: f64,
}

impl From<&ReleaseReport> for ReleaseSummary {
    fn from(r: &ReleaseReport) -> Self {
        Self {
            epsilon: r.epsilon,
            seed: r.seed,
            h: r.h,
            n: r.n,
            m: r.m,
            rmse_nq: r.rmse_nq,
            bias: r.bias,
            mse_theory_noisy: r.mse_theory_noisy,
            mse_theory_consistent: r.mse_theory_consistent,
        }
    }
}

/// Where [`save_release`] puts the summary for `path`.
pub fn summary_path(path: impl AsRef<Path>) -> PathBuf {
    path.as_ref().with_extension("json")
}

pub fn write_release<W: Write>(report: &ReleaseReport, tree: &HierarchicalTree, out: W) -> Result<()> {
    if report.n != tree.len() {
        return Err(Error::DimensionMismatch {
            expected: tree.len(),
            actual: report.n,
        });
    }
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["id", "true", "noisy", "consistent"]).map_err(csv_error)?;
    for i in 0..tree.len() {
        w.write_record([
            tree.label(i).into_owned(),
            report.v_true[i].to_string(),
            report.v_noisy[i].to_string(),
            report.v_consistent[i].to_string(),
        ])
        .map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

/// Writes the release CSV to `path` and its summary to [`summary_path`].
pub fn save_release(report: &ReleaseReport, tree: &HierarchicalTree, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    write_release(report, tree, BufWriter::new(File::create(path)?))?;
    let mut side = BufWriter::new(File::create(summary_path(path))?);
    serde_json::to_writer_pretty(&mut side, &ReleaseSummary::from(report))?;
    writeln!(side)?;
    side.flush()?;
    Ok(())
}

pub fn load_summary(path: impl AsRef<Path>) -> Result<ReleaseSummary> {
    Ok(serde_json::from_reader(File::open(summary_path(path))?)?)
}

/// Columns of a release file, in tree order.
#[derive(Clone, Debug, PartialEq)]
pub struct ReleaseColumns {
    pub v_true: Vec<f64>,
    pub v_noisy: Vec<f64>,
    pub v_consistent: Vec<f64>,
}

/// Reads a release file, matching rows to `tree` by label.
pub fn read_release<R: Read>(input: R, tree: &HierarchicalTree) -> Result<ReleaseColumns> {
    let mut rdr = reader(input);
    expect_header(&mut rdr, &["id", "true", "noisy", "consistent"])?;
    let index: HashMap<String, usize> = tree.label_index();
    let n = tree.len();
    let mut rows: Vec<Option<[f64; 3]>> = vec![None; n];
    for record in rdr.records() {
        let record = record.map_err(csv_error)?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != 4 {
            return Err(parse_error(line, format!("expected 4 fields, found {}", record.len())));
        }
        let &i = index
            .get(&record[0])
            .ok_or_else(|| parse_error(line, format!("unknown node `{}`", &record[0])))?;
        let mut vals = [0.0; 3];
        for (k, v) in vals.iter_mut().enumerate() {
            *v = record[k + 1]
                .parse()
                .map_err(|_| parse_error(line, format!("`{}` is not a number", &record[k + 1])))?;
        }
        if rows[i].replace(vals).is_some() {
            return Err(parse_error(line, format!("node `{}` listed twice", &record[0])));
        }
    }
    let mut out = ReleaseColumns {
        v_true: Vec::with_capacity(n),
        v_noisy: Vec::with_capacity(n),
        v_consistent: Vec::with_capacity(n),
    };
    for (i, row) in rows.into_iter().enumerate() {
        let [t, no, c] = row.ok_or_else(|| parse_error(0, format!("no row for node `{}`", tree.label(i))))?;
        out.v_true.push(t);
        out.v_noisy.push(no);
        out.v_consistent.push(c);
    }
    Ok(out)
}

pub fn load_release(path: impl AsRef<Path>, tree: &HierarchicalTree) -> Result<ReleaseColumns> {
    read_release(File::open(path)?, tree)
}

/// Dense matrix as CSV: header `id,<labels>`, each row led by its label.
pub fn write_matrix<W: Write>(matrix: &DenseMatrix, labels: &[String], out: W) -> Result<()> {
    if labels.len() != matrix.rows() || !matrix.is_square() {
        return Err(Error::DimensionMismatch {
            expected: matrix.rows(),
            actual: labels.len(),
        });
    }
    let mut w = csv::Writer::from_writer(out);
    w.write_record(std::iter::once("id").chain(labels.iter().map(String::as_str)))
        .map_err(csv_error)?;
    for (i, label) in labels.iter().enumerate() {
        let row = matrix.row(i).iter().map(|v| v.to_string());
        w.write_record(std::iter::once(label.clone()).chain(row)).map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

/// Per-node `id,child_count,subtree_size,depth`.
pub fn write_properties<W: Write>(
    tree: &HierarchicalTree,
    child_counts: &[usize],
    subtree_sizes: &[usize],
    depths: &[usize],
    out: W,
) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["id", "child_count", "subtree_size", "depth"]).map_err(csv_error)?;
    for i in 0..tree.len() {
        w.write_record([
            tree.label(i).into_owned(),
            child_counts[i].to_string(),
            subtree_sizes[i].to_string(),
            depths[i].to_string(),
        ])
        .map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::five_node;

    fn five_csv() -> &'static str {
        "id,parent,node_weight,edge_weight\n1,,2,\n2,1,1.5,0.25\n3,1,,\n4,2,1,1\n5,2,1,3\n"
    }

    #[test]
    fn tree_round_trip() {
        let wt = read_tree(five_csv().as_bytes()).unwrap();
        assert_eq!(wt.tree.len(), 5);
        assert_eq!(wt.node_weights, [2.0, 1.5, 1.0, 1.0, 1.0]);
        assert_eq!(wt.edge_weights, [0.25, 1.0, 1.0, 3.0]);
        let mut buf = Vec::new();
        write_tree(&wt, &mut buf).unwrap();
        let back = read_tree(buf.as_slice()).unwrap();
        assert_eq!(back, wt);
        assert_eq!(back.tree.labels().collect::<Vec<_>>(), wt.tree.labels().collect::<Vec<_>>());
    }

    #[test]
    fn tree_errors() {
        let bad_header = "id,parent\n1,\n";
        assert!(matches!(read_tree(bad_header.as_bytes()), Err(Error::Parse { line: 1, .. })));
        let bad_weight = "id,parent,node_weight,edge_weight\n1,,x,\n";
        assert!(matches!(read_tree(bad_weight.as_bytes()), Err(Error::Parse { line: 2, .. })));
        let orphan = "id,parent,node_weight,edge_weight\n1,,,\n2,9,,\n";
        assert!(matches!(read_tree(orphan.as_bytes()), Err(Error::OrphanNode { .. })));
        let short = "id,parent,node_weight,edge_weight\n1,,,\n2,1\n";
        assert!(matches!(read_tree(short.as_bytes()), Err(Error::Parse { line: 3, .. })));
    }

    #[test]
    fn counts_checks() {
        let t = five_node();
        let ok = "leaf_id,count\nE,3\nC,6\nD,4\n";
        assert_eq!(read_counts(ok.as_bytes(), &t).unwrap(), [6.0, 4.0, 3.0]);
        let internal = "leaf_id,count\nB,1\nC,6\nD,4\nE,3\n";
        assert!(matches!(read_counts(internal.as_bytes(), &t), Err(Error::InconsistentLeafSet(_))));
        let missing = "leaf_id,count\nC,6\nD,4\n";
        assert!(matches!(read_counts(missing.as_bytes(), &t), Err(Error::InconsistentLeafSet(_))));
        let twice = "leaf_id,count\nC,6\nC,6\nD,4\nE,3\n";
        assert!(matches!(read_counts(twice.as_bytes(), &t), Err(Error::InconsistentLeafSet(_))));
        let negative = "leaf_id,count\nC,-6\nD,4\nE,3\n";
        assert!(matches!(read_counts(negative.as_bytes(), &t), Err(Error::Parse { line: 2, .. })));

        let mut buf = Vec::new();
        write_counts(&t, &[6, 4, 3], &mut buf).unwrap();
        assert_eq!(read_counts(buf.as_slice(), &t).unwrap(), [6.0, 4.0, 3.0]);
    }

    #[test]
    fn matrix_csv_layout() {
        let m = DenseMatrix::from_rows(&[[0.0, 1.0], [1.0, 0.0]]);
        let mut buf = Vec::new();
        write_matrix(&m, &["a".into(), "b".into()], &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "id,a,b\na,0,1\nb,1,0\n");
    }
}
