//! Simple undirected graphs on at most 64 vertices.
//!
//! Vertices are 0-based in the API and 1-based in the text format:
//!
//! ```text
//! n 4
//! e 1 2
//! e 2 3
//! e 3 4
//! ```

use std::collections::VecDeque;
use std::fmt;

use crate::error::{parse_err, Error, Result};
use crate::pauli::{bits_of, MAX_QUBITS};

/// Symmetric adjacency bit matrix with zero diagonal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    adj: Vec<u64>,
}

impl Graph {
    pub fn new(n: usize) -> Result<Self> {
        if n > MAX_QUBITS {
            return Err(Error::TooLarge {
                requested: n,
                max: MAX_QUBITS,
            });
        }
        Ok(Graph { n, adj: vec![0; n] })
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::new(n)?;
        for &(a, b) in edges {
            g.add_edge(a, b)?;
        }
        Ok(g)
    }

    pub fn path(n: usize) -> Result<Self> {
        let edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
        Self::from_edges(n, &edges)
    }

    pub fn cycle(n: usize) -> Result<Self> {
        let mut g = Self::path(n)?;
        if n > 2 {
            g.add_edge(n - 1, 0)?;
        }
        Ok(g)
    }

    pub fn complete(n: usize) -> Result<Self> {
        let mut g = Graph::new(n)?;
        for a in 0..n {
            for b in a + 1..n {
                g.add_edge(a, b)?;
            }
        }
        Ok(g)
    }

    /// Disjoint union; vertices of `other` are shifted by `self.n()`.
    pub fn disjoint_union(&self, other: &Graph) -> Result<Graph> {
        let mut g = Graph::new(self.n + other.n)?;
        for (a, b) in self.edges().into_iter().chain(
            other
                .edges()
                .into_iter()
                .map(|(a, b)| (a + self.n, b + self.n)),
        ) {
            g.add_edge(a, b)?;
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn check(&self, v: usize) -> Result<()> {
        if v >= self.n {
            return Err(Error::IndexOutOfRange {
                index: v,
                size: self.n,
            });
        }
        Ok(())
    }

    /// Adds an undirected edge. Adding an existing edge is a no-op.
    pub fn add_edge(&mut self, a: usize, b: usize) -> Result<()> {
        self.check(a)?;
        self.check(b)?;
        if a == b {
            return Err(Error::InvalidArgument(format!(
                "self-loop on vertex {}",
                a + 1
            )));
        }
        self.adj[a] |= 1 << b;
        self.adj[b] |= 1 << a;
        Ok(())
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a < self.n && b < self.n && self.adj[a] >> b & 1 == 1
    }

    /// Neighbourhood of `v` as a bit mask.
    pub fn neighbor_mask(&self, v: usize) -> u64 {
        self.adj[v]
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        bits_of(self.adj[v])
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    /// Edges `(a, b)` with `a < b`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.n)
            .flat_map(|a| {
                bits_of(self.adj[a])
                    .into_iter()
                    .filter(move |&b| b > a)
                    .map(move |b| (a, b))
            })
            .collect()
    }

    /// Breadth-first distances from `src`; `None` for unreachable vertices.
    pub fn distances_from(&self, src: usize) -> Result<Vec<Option<usize>>> {
        self.check(src)?;
        let mut dist = vec![None; self.n];
        dist[src] = Some(0);
        let mut queue = VecDeque::from([src]);
        while let Some(v) = queue.pop_front() {
            let d = dist[v].unwrap_or(0);
            for w in self.neighbors(v) {
                if dist[w].is_none() {
                    dist[w] = Some(d + 1);
                    queue.push_back(w);
                }
            }
        }
        Ok(dist)
    }

    pub fn connected(&self, i: usize, j: usize) -> Result<bool> {
        self.check(j)?;
        Ok(self.distances_from(i)?[j].is_some())
    }

    /// Connected components, each ascending, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = 0u64;
        let mut out = Vec::new();
        for v in 0..self.n {
            if seen >> v & 1 == 1 {
                continue;
            }
            let mut comp = 1u64 << v;
            let mut frontier = 1u64 << v;
            while frontier != 0 {
                let mut next = 0;
                for w in bits_of(frontier) {
                    next |= self.adj[w];
                }
                frontier = next & !comp;
                comp |= next;
            }
            seen |= comp;
            out.push(bits_of(comp));
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// Shortest path from `i` to `j`, inclusive of both ends. Among all
    /// shortest paths the one that is lexicographically smallest from `i`
    /// is returned: each step moves to the lowest-indexed neighbour that is
    /// one step closer to `j`.
    pub fn shortest_path(&self, i: usize, j: usize) -> Result<Vec<usize>> {
        self.check(i)?;
        let dist = self.distances_from(j)?;
        let Some(mut d) = dist[i] else {
            return Err(Error::NoPath(i + 1, j + 1));
        };
        let mut path = vec![i];
        let mut v = i;
        while d > 0 {
            v = self
                .neighbors(v)
                .into_iter()
                .find(|&w| dist[w] == Some(d - 1))
                .expect("BFS layers are consistent");
            path.push(v);
            d -= 1;
        }
        Ok(path)
    }

    /// Parses the `n`/`e` line format.
    pub fn parse(text: &str) -> Result<Graph> {
        let mut graph: Option<Graph> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            match fields.as_slice() {
                ["n", count] => {
                    if graph.is_some() {
                        return Err(parse_err(line_no, "duplicate vertex-count line"));
                    }
                    let n: usize = count
                        .parse()
                        .map_err(|_| parse_err(line_no, format!("bad vertex count {count:?}")))?;
                    if n > MAX_QUBITS {
                        return Err(parse_err(
                            line_no,
                            format!("{n} vertices exceeds the limit of {MAX_QUBITS}"),
                        ));
                    }
                    graph = Some(Graph::new(n).map_err(|e| parse_err(line_no, e.to_string()))?);
                }
                ["e", a, b] => {
                    let g = graph
                        .as_mut()
                        .ok_or_else(|| parse_err(line_no, "edge before vertex-count line"))?;
                    let parse_v = |s: &str| -> Result<usize> {
                        let v: usize = s
                            .parse()
                            .map_err(|_| parse_err(line_no, format!("bad vertex {s:?}")))?;
                        if v == 0 || v > g.n {
                            return Err(parse_err(
                                line_no,
                                format!("vertex {v} outside 1..={}", g.n),
                            ));
                        }
                        Ok(v - 1)
                    };
                    let (a, b) = (parse_v(a)?, parse_v(b)?);
                    g.add_edge(a, b)
                        .map_err(|e| parse_err(line_no, e.to_string()))?;
                }
                _ => return Err(parse_err(line_no, format!("unrecognised line {line:?}"))),
            }
        }
        graph.ok_or_else(|| parse_err(0, "missing vertex-count line"))
    }
}

impl fmt::Display for Graph {
    /// Writes the same line format [`Graph::parse`] reads.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n {}", self.n)?;
        for (a, b) in self.edges() {
            writeln!(f, "e {} {}", a + 1, b + 1)?;
        }
        Ok(())
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let edges: Vec<String> = self
            .edges()
            .iter()
            .map(|(a, b)| format!("{}-{}", a + 1, b + 1))
            .collect();
        write!(f, "Graph(n={}, [{}])", self.n, edges.join(" "))
    }
}
