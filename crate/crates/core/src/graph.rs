//! Vertex-colored graphs and color motifs, with their text formats.
//!
//! Graph file:
//!
//! ```text
//! # comment
//! 3 2            n m
//! a red          n lines: vertex_label color_label
//! b green
//! c blue
//! a b            m lines: u_label v_label
//! b c
//! ```
//!
//! Motif file: one `color_label multiplicity` line per color.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use crate::assignment::ColorId;
use crate::error::{Error, Result};

/// Simple undirected graph whose vertices carry color labels.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ColoredGraph {
    vertex_labels: Vec<String>,
    vertex_colors: Vec<ColorId>,
    color_labels: Vec<String>,
    adjacency: Vec<Vec<usize>>,
    vertex_index: HashMap<String, usize>,
    color_index: HashMap<String, ColorId>,
    num_edges: usize,
}

impl ColoredGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, label: &str, color: &str) -> Result<usize> {
        if self.vertex_index.contains_key(label) {
            return Err(Error::InvalidGraph(format!("duplicate vertex '{label}'")));
        }
        let color = self.intern_color(color);
        let id = self.vertex_labels.len();
        self.vertex_labels.push(label.to_string());
        self.vertex_colors.push(color);
        self.adjacency.push(Vec::new());
        self.vertex_index.insert(label.to_string(), id);
        Ok(id)
    }

    fn intern_color(&mut self, label: &str) -> ColorId {
        if let Some(&c) = self.color_index.get(label) {
            return c;
        }
        let c = ColorId(self.color_labels.len());
        self.color_labels.push(label.to_string());
        self.color_index.insert(label.to_string(), c);
        c
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        let n = self.len();
        if u >= n || v >= n {
            return Err(Error::InvalidGraph(format!("edge ({u}, {v}) refers to a missing vertex")));
        }
        if u == v {
            return Err(Error::InvalidGraph(format!(
                "self-loop at '{}'",
                self.vertex_labels[u]
            )));
        }
        if self.adjacency[u].contains(&v) {
            return Err(Error::InvalidGraph(format!(
                "duplicate edge '{}' '{}'",
                self.vertex_labels[u], self.vertex_labels[v]
            )));
        }
        insert_sorted(&mut self.adjacency[u], v);
        insert_sorted(&mut self.adjacency[v], u);
        self.num_edges += 1;
        Ok(())
    }

    /// Builds a graph from per-vertex color labels and an edge list; vertex
    /// labels are the indices.
    pub fn from_parts(colors: &[&str], edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = ColoredGraph::new();
        for (i, c) in colors.iter().enumerate() {
            g.add_vertex(&i.to_string(), c)?;
        }
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn len(&self) -> usize {
        self.vertex_labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertex_labels.is_empty()
    }

    pub fn num_edges(&self) -> usize {
        self.num_edges
    }

    pub fn num_colors(&self) -> usize {
        self.color_labels.len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].binary_search(&v).is_ok()
    }

    pub fn color(&self, v: usize) -> ColorId {
        self.vertex_colors[v]
    }

    pub fn color_label(&self, c: ColorId) -> &str {
        &self.color_labels[c.0]
    }

    pub fn color_id(&self, label: &str) -> Option<ColorId> {
        self.color_index.get(label).copied()
    }

    pub fn vertex_label(&self, v: usize) -> &str {
        &self.vertex_labels[v]
    }

    pub fn vertex_id(&self, label: &str) -> Option<usize> {
        self.vertex_index.get(label).copied()
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, ns)| ns.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn parse(text: &str, source: &str) -> Result<Self> {
        let mut lines = content_lines(text);
        let (header_no, header) = lines
            .next()
            .ok_or_else(|| Error::parse(source, 1, 1, "missing 'n m' header"))?;
        let [n, m] = parse_counts(&header, header_no, source)?;

        let mut g = ColoredGraph::new();
        for i in 0..n {
            let (no, fields) = lines.next().ok_or_else(|| {
                Error::parse(source, header_no, 1, format!("expected {n} vertex lines, found {i}"))
            })?;
            let [(_, label), (_, color)] = exact_fields(&fields, no, source, "vertex_label color_label")?;
            g.add_vertex(label, color)
                .map_err(|e| Error::parse(source, no, fields[0].0, e.to_string()))?;
        }
        for i in 0..m {
            let (no, fields) = lines.next().ok_or_else(|| {
                Error::parse(source, header_no, 1, format!("expected {m} edge lines, found {i}"))
            })?;
            let [(cu, u), (cv, v)] = exact_fields(&fields, no, source, "u_label v_label")?;
            let u = g
                .vertex_id(u)
                .ok_or_else(|| Error::parse(source, no, cu, format!("unknown vertex '{u}'")))?;
            let v = g
                .vertex_id(v)
                .ok_or_else(|| Error::parse(source, no, cv, format!("unknown vertex '{v}'")))?;
            g.add_edge(u, v)
                .map_err(|e| Error::parse(source, no, cu, e.to_string()))?;
        }
        if let Some((no, fields)) = lines.next() {
            return Err(Error::parse(source, no, fields[0].0, "unexpected trailing line"));
        }
        Ok(g)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{} {}", self.len(), self.num_edges);
        for v in 0..self.len() {
            let _ = writeln!(s, "{} {}", self.vertex_labels[v], self.color_label(self.color(v)));
        }
        for (u, v) in self.edges() {
            let _ = writeln!(s, "{} {}", self.vertex_labels[u], self.vertex_labels[v]);
        }
        s
    }
}

fn insert_sorted(list: &mut Vec<usize>, x: usize) {
    let pos = list.binary_search(&x).unwrap_or_else(|p| p);
    list.insert(pos, x);
}

type Fields<'a> = Vec<(usize, &'a str)>;

/// Non-empty lines with `#` comments removed, split into (column, token).
fn content_lines(text: &str) -> impl Iterator<Item = (usize, Fields<'_>)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let line = line.split('#').next().unwrap_or("");
        let mut fields = Vec::new();
        let mut start = None;
        for (pos, ch) in line.char_indices().chain(std::iter::once((line.len(), ' '))) {
            match (ch.is_whitespace(), start) {
                (false, None) => start = Some(pos),
                (true, Some(s)) => {
                    fields.push((line[..s].chars().count() + 1, &line[s..pos]));
                    start = None;
                }
                _ => {}
            }
        }
        (!fields.is_empty()).then_some((i + 1, fields))
    })
}

fn exact_fields<'a>(
    fields: &[(usize, &'a str)],
    line: usize,
    source: &str,
    expected: &str,
) -> Result<[(usize, &'a str); 2]> {
    match fields {
        [a, b] => Ok([*a, *b]),
        _ => Err(Error::parse(
            source,
            line,
            fields.first().map_or(1, |f| f.0),
            format!("expected '{expected}', found {} fields", fields.len()),
        )),
    }
}

fn parse_counts(fields: &[(usize, &str)], line: usize, source: &str) -> Result<[usize; 2]> {
    let [(ca, a), (cb, b)] = exact_fields(fields, line, source, "n m")?;
    let a = a
        .parse()
        .map_err(|_| Error::parse(source, line, ca, format!("invalid count '{a}'")))?;
    let b = b
        .parse()
        .map_err(|_| Error::parse(source, line, cb, format!("invalid count '{b}'")))?;
    Ok([a, b])
}

/// Multiset of colors, keyed by color label.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Motif {
    counts: BTreeMap<String, usize>,
}

impl Motif {
    pub fn new<S: AsRef<str>>(entries: &[(S, usize)]) -> Result<Self> {
        let mut counts = BTreeMap::new();
        for (color, mu) in entries {
            if *mu == 0 {
                return Err(Error::InvalidArgument(format!(
                    "multiplicity of '{}' must be positive",
                    color.as_ref()
                )));
            }
            if counts.insert(color.as_ref().to_string(), *mu).is_some() {
                return Err(Error::InvalidArgument(format!(
                    "color '{}' listed twice",
                    color.as_ref()
                )));
            }
        }
        if counts.is_empty() {
            return Err(Error::InvalidArgument("motif has no colors".into()));
        }
        Ok(Motif { counts })
    }

    /// Sum of the multiplicities.
    pub fn size(&self) -> usize {
        self.counts.values().sum()
    }

    pub fn multiplicity(&self, color: &str) -> usize {
        self.counts.get(color).copied().unwrap_or(0)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&str, usize)> {
        self.counts.iter().map(|(c, &m)| (c.as_str(), m))
    }

    /// Multiplicity of each color of `g`, indexed by [`ColorId`]; colors
    /// outside the motif get 0.
    pub fn multiplicities_in(&self, g: &ColoredGraph) -> Vec<usize> {
        (0..g.num_colors())
            .map(|c| self.multiplicity(g.color_label(ColorId(c))))
            .collect()
    }

    /// True if `g` has at least `mu(c)` vertices of every motif color.
    pub fn fits_in(&self, g: &ColoredGraph) -> bool {
        let mut available: HashMap<&str, usize> = HashMap::new();
        for v in 0..g.len() {
            *available.entry(g.color_label(g.color(v))).or_default() += 1;
        }
        self.entries()
            .all(|(c, mu)| available.get(c).copied().unwrap_or(0) >= mu)
    }

    pub fn parse(text: &str, source: &str) -> Result<Self> {
        let mut counts = BTreeMap::new();
        for (no, fields) in content_lines(text) {
            let [(_, color), (cm, mu)] = exact_fields(&fields, no, source, "color_label multiplicity")?;
            let mu: usize = mu
                .parse()
                .map_err(|_| Error::parse(source, no, cm, format!("invalid multiplicity '{mu}'")))?;
            if mu == 0 {
                return Err(Error::parse(source, no, cm, "multiplicity must be positive"));
            }
            if counts.insert(color.to_string(), mu).is_some() {
                return Err(Error::parse(source, no, fields[0].0, format!("color '{color}' listed twice")));
            }
        }
        if counts.is_empty() {
            return Err(Error::parse(source, 1, 1, "motif has no colors"));
        }
        Ok(Motif { counts })
    }

    pub fn to_text(&self) -> String {
        self.entries().map(|(c, m)| format!("{c} {m}\n")).collect()
    }
}
