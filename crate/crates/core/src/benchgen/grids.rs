//! Graphs behind the graph families.

/// An undirected multigraph on vertices `0..vertices`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    pub vertices: usize,
    pub edges: Vec<(usize, usize)>,
    pub labels: Vec<String>,
}

impl Graph {
    pub fn degree(&self, v: usize) -> usize {
        self.edges
            .iter()
            .map(|&(a, b)| usize::from(a == v) + usize::from(b == v))
            .sum()
    }

    /// Indices of edges incident to `v`.
    pub fn incident(&self, v: usize) -> Vec<usize> {
        (0..self.edges.len())
            .filter(|&e| self.edges[e].0 == v || self.edges[e].1 == v)
            .collect()
    }

    /// `v` and its neighbours, sorted and without repetition.
    pub fn closed_neighbourhood(&self, v: usize) -> Vec<usize> {
        let mut out = vec![v];
        for &(a, b) in &self.edges {
            if a == v {
                out.push(b);
            } else if b == v {
                out.push(a);
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }
}

/// The `rows x cols` grid with wrap-around in both directions. Every
/// vertex has degree 4; for 2 rows or columns this includes parallel edges.
///
/// # Panics
///
/// Panics if `rows` or `cols` is below 2.
pub fn torus(rows: usize, cols: usize) -> Graph {
    assert!(rows >= 2 && cols >= 2, "torus needs at least 2x2");
    let id = |r: usize, c: usize| r * cols + c;
    let mut edges = Vec::with_capacity(2 * rows * cols);
    for r in 0..rows {
        for c in 0..cols {
            edges.push((id(r, c), id(r, (c + 1) % cols)));
            edges.push((id(r, c), id((r + 1) % rows, c)));
        }
    }
    let labels = (0..rows)
        .flat_map(|r| (0..cols).map(move |c| format!("{r},{c}")))
        .collect();
    Graph {
        vertices: rows * cols,
        edges,
        labels,
    }
}

/// Replaces edge `e` by a path of length two through a new vertex.
pub fn subdivide(graph: &Graph, e: usize, label: &str) -> Graph {
    let mut g = graph.clone();
    let (a, b) = g.edges[e];
    let mid = g.vertices;
    g.vertices += 1;
    g.labels.push(label.to_owned());
    g.edges[e] = (a, mid);
    g.edges.insert(e + 1, (mid, b));
    g
}

/// A chain of `length` hexagons, each sharing one edge with the next:
///
/// ```text
///   t0 - t1 - t2 - t3 - t4 - ... - t(2L)
///   |         |         |            |
///   b0 - b1 - b2 - b3 - b4 - ... - b(2L)
/// ```
///
/// Hexagon `k` is `t(2k) t(2k+1) t(2k+2) b(2k+2) b(2k+1) b(2k)`. There are
/// `4L + 2` vertices and `5L + 1` edges.
///
/// # Panics
///
/// Panics if `length` is 0.
pub fn hexagon_strip(length: usize) -> Graph {
    assert!(length >= 1, "strip needs at least one hexagon");
    let width = 2 * length + 1;
    let top = |i: usize| i;
    let bottom = |i: usize| width + i;
    let mut edges = Vec::with_capacity(5 * length + 1);
    for i in 0..width - 1 {
        edges.push((top(i), top(i + 1)));
        edges.push((bottom(i), bottom(i + 1)));
    }
    for k in 0..=length {
        edges.push((top(2 * k), bottom(2 * k)));
    }
    let labels = (0..width)
        .map(|i| format!("t{i}"))
        .chain((0..width).map(|i| format!("b{i}")))
        .collect();
    Graph {
        vertices: 2 * width,
        edges,
        labels,
    }
}
