//! JSON documents. Everything on disk is 1-based; conversion happens here.

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::counting::{Count, CountReport};
use crate::error::{Error, Result};
use crate::netbuild::{ModuleSpec, Network, NetworkSpec};
use crate::poset::Poset;
use crate::tournament::{Digraph, ReverseEdgeSet};

fn parse_json<'a, T: Deserialize<'a>>(text: &'a str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

fn to_zero_based(pairs: &[[usize; 2]], n: usize) -> Result<Vec<(usize, usize)>> {
    pairs
        .iter()
        .map(|&[a, b]| Ok((zero_based(a, n)?, zero_based(b, n)?)))
        .collect()
}

fn zero_based(x: usize, n: usize) -> Result<usize> {
    if x == 0 || x > n {
        return Err(Error::Range { element: x, n });
    }
    Ok(x - 1)
}

fn one_based_pairs(pairs: impl Iterator<Item = (usize, usize)>) -> Vec<[usize; 2]> {
    pairs.map(|(a, b)| [a + 1, b + 1]).collect()
}

pub fn one_based_blocks(blocks: &[Vec<usize>]) -> Vec<Vec<usize>> {
    blocks
        .iter()
        .map(|b| b.iter().map(|x| x + 1).collect())
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetDoc {
    pub n: usize,
    pub relations: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

/// A poset read from disk together with its optional element labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelledPoset {
    pub poset: Poset,
    pub labels: Option<Vec<String>>,
}

impl LabelledPoset {
    /// Label of element `x` (0-based), or its 1-based number.
    pub fn label(&self, x: usize) -> String {
        match &self.labels {
            Some(l) => l[x].clone(),
            None => (x + 1).to_string(),
        }
    }
}

pub fn parse_poset(text: &str) -> Result<LabelledPoset> {
    let doc: PosetDoc = parse_json(text)?;
    if let Some(labels) = &doc.labels {
        if labels.len() != doc.n {
            return Err(Error::Parse(format!(
                "{} labels for {} elements",
                labels.len(),
                doc.n
            )));
        }
    }
    let gens = to_zero_based(&doc.relations, doc.n)?;
    Ok(LabelledPoset {
        poset: Poset::from_relations(doc.n, &gens)?,
        labels: doc.labels,
    })
}

/// Writes the Hasse covers as generators.
pub fn poset_doc(p: &Poset) -> PosetDoc {
    PosetDoc {
        n: p.n(),
        relations: one_based_pairs(p.hasse_covers().into_iter()),
        labels: None,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionDoc {
    pub blocks: Vec<Vec<usize>>,
}

/// Blocks as 0-based element lists; coverage is checked by the consumers.
pub fn parse_partition(text: &str, n: usize) -> Result<Vec<Vec<usize>>> {
    let doc: PartitionDoc = parse_json(text)?;
    doc.blocks
        .iter()
        .map(|b| b.iter().map(|&x| zero_based(x, n)).collect())
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReverseSetDoc {
    pub n: usize,
    pub reverse: Vec<[usize; 2]>,
}

pub fn parse_reverse_set(text: &str) -> Result<ReverseEdgeSet> {
    let doc: ReverseSetDoc = parse_json(text)?;
    ReverseEdgeSet::new(doc.n, &to_zero_based(&doc.reverse, doc.n)?)
}

pub fn reverse_set_doc(r: &ReverseEdgeSet) -> ReverseSetDoc {
    ReverseSetDoc {
        n: r.n(),
        reverse: one_based_pairs(r.pairs()),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DigraphDoc {
    pub n: usize,
    pub arcs: Vec<[usize; 2]>,
}

pub fn digraph_from_doc(doc: &DigraphDoc) -> Result<Digraph> {
    Digraph::new(doc.n, &to_zero_based(&doc.arcs, doc.n)?)
}

pub fn parse_digraph(text: &str) -> Result<Digraph> {
    digraph_from_doc(&parse_json(text)?)
}

pub fn digraph_doc(g: &Digraph) -> DigraphDoc {
    DigraphDoc {
        n: g.n(),
        arcs: one_based_pairs(g.arcs()),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleDoc {
    pub size: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reverse: Option<Vec<[usize; 2]>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NetworkSpecDoc {
    pub skeleton: DigraphDoc,
    pub modules: Vec<ModuleDoc>,
}

pub fn parse_count(text: &str) -> Result<Count> {
    text.trim()
        .parse::<BigUint>()
        .map_err(|_| Error::Parse(format!("{text:?} is not a non-negative integer")))
}

pub fn parse_network_spec(text: &str) -> Result<NetworkSpec> {
    let doc: NetworkSpecDoc = parse_json(text)?;
    let skeleton = digraph_from_doc(&doc.skeleton)?;
    let modules = doc
        .modules
        .iter()
        .enumerate()
        .map(|(i, m)| match (&m.target, &m.reverse) {
            (Some(t), None) => Ok(ModuleSpec::Target {
                size: m.size,
                target: parse_count(t)?,
            }),
            (None, Some(r)) => Ok(ModuleSpec::Explicit(ReverseEdgeSet::new(
                m.size,
                &to_zero_based(r, m.size)?,
            )?)),
            _ => Err(Error::Parse(format!(
                "module {} needs exactly one of \"target\" and \"reverse\"",
                i + 1
            ))),
        })
        .collect::<Result<Vec<_>>>()?;
    NetworkSpec::new(skeleton, modules)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CountReportDoc {
    pub count: String,
    pub strategy: String,
    pub partition: Option<Vec<Vec<usize>>>,
    pub skeleton_shape: Option<String>,
}

impl From<&CountReport> for CountReportDoc {
    fn from(r: &CountReport) -> Self {
        CountReportDoc {
            count: r.count.to_string(),
            strategy: r.strategy.name().to_string(),
            partition: r.partition.as_deref().map(one_based_blocks),
            skeleton_shape: r.skeleton_shape.map(|s| s.name().to_string()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NetworkDoc {
    pub n: usize,
    pub arcs: Vec<[usize; 2]>,
    pub blocks: Vec<Vec<usize>>,
    pub reverse_sets: Vec<Vec<[usize; 2]>>,
    pub achieved: Vec<String>,
}

pub fn network_doc(net: &Network, achieved: &[Count]) -> NetworkDoc {
    let g = digraph_doc(&net.digraph);
    NetworkDoc {
        n: g.n,
        arcs: g.arcs,
        blocks: one_based_blocks(&net.blocks),
        reverse_sets: net
            .reverse_sets
            .iter()
            .map(|r| one_based_pairs(r.pairs()))
            .collect(),
        achieved: achieved.iter().map(ToString::to_string).collect(),
    }
}
