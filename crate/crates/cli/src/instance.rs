//! Line-oriented instance files.
//!
//! ```text
//! # comment
//! n=3
//! theta=table          # or cut | coverage | modular
//! set 001 1.5          # binary mask, rightmost digit is element 1
//! graph:               # optional decomposition graph
//! 1 2
//! system=cardinality 1 # or none | graph-independence | explicit
//! ```
//!
//! `theta=cut` and `system=graph-independence` are followed by edge lines,
//! `theta=coverage` by `item <weight> <elements...>` lines,
//! `theta=modular` by `weight <element> <value>` lines and
//! `system=explicit` by one binary mask per maximal set. Element indices
//! are 1-based.

use std::fmt::{self, Write as _};

use setmax_core::ground::{CoverageFunction, ModularFunction, TableFunction, TABLE_CAP};
use setmax_core::{Graph, SetFunction, Subset, SubsetSystem};
use setmax_core::constrained::SystemKind;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
#[error("line {line}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub msg: String,
}

fn err<T>(line: usize, msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { line, msg: msg.into() })
}

#[derive(Debug, Clone, PartialEq)]
pub enum Theta {
    Table(TableFunction),
    Cut(Graph),
    Coverage(CoverageFunction),
    Modular(ModularFunction),
}

impl Theta {
    pub fn kind(&self) -> &'static str {
        match self {
            Theta::Table(_) => "table",
            Theta::Cut(_) => "cut",
            Theta::Coverage(_) => "coverage",
            Theta::Modular(_) => "modular",
        }
    }
}

impl SetFunction for Theta {
    fn ground_size(&self) -> usize {
        match self {
            Theta::Table(t) => t.ground_size(),
            Theta::Cut(g) => g.vertex_count(),
            Theta::Coverage(c) => c.ground_size(),
            Theta::Modular(m) => m.ground_size(),
        }
    }
    fn value(&self, s: Subset) -> f64 {
        match self {
            Theta::Table(t) => t.value(s),
            Theta::Cut(g) => g.cut(s) as f64,
            Theta::Coverage(c) => c.value(s),
            Theta::Modular(m) => m.value(s),
        }
    }
    fn bound(&self) -> f64 {
        match self {
            Theta::Table(t) => t.bound(),
            Theta::Cut(g) => g.edge_count() as f64 + 1.0,
            Theta::Coverage(c) => c.bound(),
            Theta::Modular(m) => m.bound(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub theta: Theta,
    pub graph: Option<Graph>,
    pub system: Option<SubsetSystem>,
}

impl Instance {
    pub fn n(&self) -> usize {
        self.theta.ground_size()
    }
}

/// Sorted 1-based index list, e.g. `[1,3]`.
pub fn format_set(s: Subset) -> String {
    let items: Vec<String> = s.iter().map(|v| (v + 1).to_string()).collect();
    format!("[{}]", items.join(","))
}

fn mask_string(s: Subset, n: usize) -> String {
    (0..n).rev().map(|i| if s.contains(i) { '1' } else { '0' }).collect()
}

fn parse_mask(tok: &str, n: usize, line: usize) -> Result<Subset, ParseError> {
    if tok.len() != n || !tok.bytes().all(|b| b == b'0' || b == b'1') {
        return err(line, format!("expected a {n}-digit binary mask, got `{tok}`"));
    }
    Ok(tok.bytes().rev().enumerate().filter(|(_, b)| *b == b'1').map(|(i, _)| i).collect())
}

fn parse_index(tok: &str, n: usize, line: usize) -> Result<usize, ParseError> {
    match tok.parse::<usize>() {
        Ok(i) if (1..=n).contains(&i) => Ok(i - 1),
        _ => err(line, format!("element index `{tok}` is not in 1..={n}")),
    }
}

fn parse_real(tok: &str, line: usize) -> Result<f64, ParseError> {
    match tok.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => err(line, format!("`{tok}` is not a finite number")),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Section {
    None,
    Table,
    CutEdges,
    Coverage,
    Modular,
    Graph,
    SystemEdges,
    Explicit,
}

#[derive(Default)]
struct Builder {
    n: Option<usize>,
    kind: Option<&'static str>,
    table: Vec<Option<f64>>,
    cut: Vec<(usize, usize, usize)>,
    items: Vec<(f64, Subset)>,
    weights: Vec<Option<f64>>,
    graph: Option<Vec<(usize, usize, usize)>>,
    system: Option<(String, usize, Option<usize>)>,
    sys_edges: Vec<(usize, usize, usize)>,
    maximal: Vec<(usize, Subset)>,
}

fn edges_to_graph(n: usize, edges: &[(usize, usize, usize)]) -> Result<Graph, ParseError> {
    let mut g = Graph::empty(n).map_err(|e| ParseError { line: 0, msg: e.to_string() })?;
    for &(line, u, w) in edges {
        if u == w {
            return err(line, "self-loops are not allowed");
        }
        if g.has_edge(u, w) {
            return err(line, format!("duplicate edge {} {}", u + 1, w + 1));
        }
        g.add_edge(u, w).map_err(|e| ParseError { line, msg: e.to_string() })?;
    }
    Ok(g)
}

pub fn parse_instance(text: &str) -> Result<Instance, ParseError> {
    let mut b = Builder::default();
    let mut section = Section::None;
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(v) = content.strip_prefix("n=") {
            if b.n.is_some() {
                return err(line, "duplicate `n=` header");
            }
            let n: usize = v.trim().parse().map_err(|_| ParseError { line, msg: format!("bad ground set size `{v}`") })?;
            if !(1..=setmax_core::ground::MAX_ELEMENTS).contains(&n) {
                return err(line, "n must lie in 1..=64");
            }
            b.n = Some(n);
            continue;
        }
        let Some(n) = b.n else {
            return err(line, "`n=` must come first");
        };
        if let Some(kind) = content.strip_prefix("theta=") {
            if b.kind.is_some() {
                return err(line, "duplicate `theta=` header");
            }
            (b.kind, section) = match kind.trim() {
                "table" => {
                    if n > TABLE_CAP {
                        return err(line, format!("table functions support n <= {TABLE_CAP}"));
                    }
                    b.table = vec![None; 1 << n];
                    (Some("table"), Section::Table)
                }
                "cut" => (Some("cut"), Section::CutEdges),
                "coverage" => (Some("coverage"), Section::Coverage),
                "modular" => {
                    b.weights = vec![None; n];
                    (Some("modular"), Section::Modular)
                }
                other => return err(line, format!("unknown theta kind `{other}`")),
            };
            continue;
        }
        if content == "graph:" {
            if b.graph.is_some() {
                return err(line, "duplicate `graph:` section");
            }
            b.graph = Some(Vec::new());
            section = Section::Graph;
            continue;
        }
        if let Some(spec) = content.strip_prefix("system=") {
            if b.system.is_some() {
                return err(line, "duplicate `system=` header");
            }
            let mut toks = spec.split_whitespace();
            let name = toks.next().unwrap_or("").to_string();
            let k = match (name.as_str(), toks.next()) {
                ("cardinality", Some(k)) => Some(k.parse::<usize>().map_err(|_| ParseError { line, msg: format!("bad cardinality `{k}`") })?),
                ("cardinality", None) => return err(line, "cardinality needs a bound"),
                ("none" | "graph-independence" | "explicit", None) => None,
                _ => return err(line, format!("unknown system `{spec}`")),
            };
            if toks.next().is_some() {
                return err(line, "trailing tokens after system");
            }
            section = match name.as_str() {
                "graph-independence" => Section::SystemEdges,
                "explicit" => Section::Explicit,
                _ => Section::None,
            };
            b.system = Some((name, line, k));
            continue;
        }
        let toks: Vec<&str> = content.split_whitespace().collect();
        match section {
            Section::None => return err(line, format!("unexpected record `{content}`")),
            Section::Table => {
                let [kw, mask, val] = toks[..] else {
                    return err(line, "expected `set <mask> <value>`");
                };
                if kw != "set" {
                    return err(line, "expected `set <mask> <value>`");
                }
                let s = parse_mask(mask, n, line)?;
                let v = parse_real(val, line)?;
                let slot = &mut b.table[s.bits() as usize];
                if slot.is_some() {
                    return err(line, format!("duplicate record for subset {}", format_set(s)));
                }
                *slot = Some(v);
            }
            Section::CutEdges | Section::Graph | Section::SystemEdges => {
                let [u, w] = toks[..] else {
                    return err(line, "expected an edge `<i> <j>`");
                };
                let e = (line, parse_index(u, n, line)?, parse_index(w, n, line)?);
                match section {
                    Section::CutEdges => b.cut.push(e),
                    Section::Graph => b.graph.as_mut().expect("graph section open").push(e),
                    _ => b.sys_edges.push(e),
                }
            }
            Section::Coverage => {
                if toks.len() < 2 || toks[0] != "item" {
                    return err(line, "expected `item <weight> <elements...>`");
                }
                let w = parse_real(toks[1], line)?;
                if w < 0.0 {
                    return err(line, "coverage weights must be non-negative");
                }
                let mut cover = Subset::EMPTY;
                for t in &toks[2..] {
                    let i = parse_index(t, n, line)?;
                    if cover.contains(i) {
                        return err(line, format!("element {t} listed twice"));
                    }
                    cover.insert(i);
                }
                b.items.push((w, cover));
            }
            Section::Modular => {
                let [kw, i, w] = toks[..] else {
                    return err(line, "expected `weight <element> <value>`");
                };
                if kw != "weight" {
                    return err(line, "expected `weight <element> <value>`");
                }
                let i = parse_index(i, n, line)?;
                if b.weights[i].is_some() {
                    return err(line, format!("duplicate weight for element {}", i + 1));
                }
                b.weights[i] = Some(parse_real(w, line)?);
            }
            Section::Explicit => {
                let [mask] = toks[..] else {
                    return err(line, "expected one binary mask per maximal set");
                };
                b.maximal.push((line, parse_mask(mask, n, line)?));
            }
        }
    }
    let Some(n) = b.n else {
        return err(last_line.max(1), "missing `n=` header");
    };
    let theta = match b.kind {
        None => return err(last_line.max(1), "missing `theta=` header"),
        Some("table") => {
            if let Some(i) = b.table.iter().position(Option::is_none) {
                return err(last_line, format!("missing record for subset {}", format_set(Subset::from_bits(i as u64))));
            }
            let values = b.table.into_iter().map(|v| v.expect("checked")).collect();
            Theta::Table(TableFunction::new(n, values).map_err(|e| ParseError { line: last_line, msg: e.to_string() })?)
        }
        Some("cut") => Theta::Cut(edges_to_graph(n, &b.cut)?),
        Some("coverage") => Theta::Coverage(
            CoverageFunction::new(n, b.items).map_err(|e| ParseError { line: last_line, msg: e.to_string() })?,
        ),
        Some(_) => {
            if let Some(i) = b.weights.iter().position(Option::is_none) {
                return err(last_line, format!("missing weight for element {}", i + 1));
            }
            Theta::Modular(ModularFunction::new(b.weights.into_iter().map(|w| w.expect("checked")).collect()))
        }
    };
    let graph = b.graph.as_deref().map(|e| edges_to_graph(n, e)).transpose()?;
    let system = match b.system {
        None => None,
        Some((name, line, k)) => {
            let built = match name.as_str() {
                "none" => SubsetSystem::all(n),
                "cardinality" => SubsetSystem::cardinality(n, k.expect("parsed")),
                "graph-independence" => SubsetSystem::graph_independence(edges_to_graph(n, &b.sys_edges)?),
                _ => {
                    for (i, &(l, a)) in b.maximal.iter().enumerate() {
                        let mut others = b.maximal.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &(_, o))| o);
                        if let Some(other) = others.find(|&o| a.is_subset_of(o)) {
                            let msg = if a == other { "duplicate maximal set" } else { "listed set is contained in another; not maximal" };
                            return err(l, msg);
                        }
                    }
                    SubsetSystem::explicit(n, b.maximal.iter().map(|&(_, s)| s).collect())
                }
            };
            Some(built.map_err(|e| ParseError { line, msg: e.to_string() })?)
        }
    };
    Ok(Instance { theta, graph, system })
}

fn write_edges(out: &mut String, g: &Graph) {
    for (u, w) in g.edges() {
        let _ = writeln!(out, "{} {}", u + 1, w + 1);
    }
}

/// Canonical text; [`parse_instance`] inverts it exactly.
pub fn serialize_instance(inst: &Instance) -> String {
    let n = inst.n();
    let mut out = String::new();
    let _ = writeln!(out, "n={n}");
    let _ = writeln!(out, "theta={}", inst.theta.kind());
    match &inst.theta {
        Theta::Table(t) => {
            for s in Subset::full(n).submasks() {
                let _ = writeln!(out, "set {} {}", mask_string(s, n), t.value(s));
            }
        }
        Theta::Cut(g) => write_edges(&mut out, g),
        Theta::Coverage(c) => {
            for (w, cover) in c.items() {
                let _ = write!(out, "item {w}");
                for v in cover.iter() {
                    let _ = write!(out, " {}", v + 1);
                }
                out.push('\n');
            }
        }
        Theta::Modular(m) => {
            for (i, w) in m.weights().iter().enumerate() {
                let _ = writeln!(out, "weight {} {w}", i + 1);
            }
        }
    }
    if let Some(g) = &inst.graph {
        out.push_str("graph:\n");
        write_edges(&mut out, g);
    }
    if let Some(sys) = &inst.system {
        match sys.kind() {
            SystemKind::All => out.push_str("system=none\n"),
            SystemKind::Cardinality(k) => {
                let _ = writeln!(out, "system=cardinality {k}");
            }
            SystemKind::GraphIndependence(g) => {
                out.push_str("system=graph-independence\n");
                write_edges(&mut out, g);
            }
            SystemKind::ExplicitMaximal(sets) => {
                out.push_str("system=explicit\n");
                for &s in sets {
                    let _ = writeln!(out, "{}", mask_string(s, n));
                }
            }
        }
    }
    out
}

impl fmt::Display for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&serialize_instance(self))
    }
}
