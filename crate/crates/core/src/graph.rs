//! Problem graphs: edge-list ingestion, seeded Erdős–Rényi generation and the
//! exhaustive maximum-independent-set oracle.
//!
//! Bitstrings are `u64` masks with bit `i` set when vertex `i` is in the set.
//! Ket labels such as `|10100101>` are written vertex 0 first, so character
//! `j` of the label is bit `j` of the mask (see [`ket_to_mask`]).

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// Identifier of the PRNG behind [`generate_er`], recorded in run outputs.
pub const RNG_ALGORITHM: &str = "chacha8/seed_from_u64";

/// Default exhaustive-enumeration bound for [`brute_force_mis`].
pub const DEFAULT_ORACLE_LIMIT: usize = 24;

const CUBE_G3: &str = include_str!("../fixtures/cube_g3.edges");
const K33_PLUS: &str = include_str!("../fixtures/k33_plus.edges");
const SINGLE_EDGE: &str = include_str!("../fixtures/single_edge.edges");

/// Undirected simple graph with canonical edge storage (`i < j`, sorted, unique).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    /// Builds a canonical graph. Duplicate edges (in either orientation) are collapsed.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGraph("vertex count must be at least 1".into()));
        }
        let mut canon = Vec::new();
        for (a, b) in edges {
            if a == b {
                return Err(Error::InvalidGraph(format!("self-loop on vertex {a}")));
            }
            if a >= n || b >= n {
                return Err(Error::InvalidGraph(format!(
                    "endpoint out of range: ({a}, {b}) with n = {n}"
                )));
            }
            canon.push((a.min(b), a.max(b)));
        }
        canon.sort_unstable();
        canon.dedup();
        Ok(Self { n, edges: canon })
    }

    pub fn empty(n: usize) -> Result<Self> {
        Self::new(n, [])
    }

    pub fn complete(n: usize) -> Result<Self> {
        Self::new(n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))))
    }

    pub fn path(n: usize) -> Result<Self> {
        Self::new(n, (1..n).map(|i| (i - 1, i)))
    }

    /// The cube graph G3 in the vertex ordering of `fixtures/cube_g3.edges`.
    pub fn cube() -> Self {
        parse_graph(CUBE_G3).expect("bundled fixture")
    }

    /// The K3,3+ graph in the vertex ordering of `fixtures/k33_plus.edges`.
    pub fn k33_plus() -> Self {
        parse_graph(K33_PLUS).expect("bundled fixture")
    }

    pub fn single_edge() -> Self {
        parse_graph(SINGLE_EDGE).expect("bundled fixture")
    }

    /// Looks up a bundled fixture by name (`cube`, `g3`, `k33+`, `k33_plus`, `edge`).
    pub fn fixture(name: &str) -> Option<Self> {
        match name.to_ascii_lowercase().as_str() {
            "cube" | "g3" => Some(Self::cube()),
            "k33+" | "k33_plus" | "k33plus" => Some(Self::k33_plus()),
            "edge" | "single_edge" => Some(Self::single_edge()),
            _ => None,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Edge density |E| / (n(n-1)/2); zero for a single vertex.
    pub fn density(&self) -> f64 {
        let pairs = self.n * (self.n - 1) / 2;
        if pairs == 0 {
            0.0
        } else {
            self.edges.len() as f64 / pairs as f64
        }
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for &(i, j) in &self.edges {
            deg[i] += 1;
            deg[j] += 1;
        }
        deg
    }

    /// Neighbourhood bitmasks. Only defined for n ≤ 64.
    pub fn adjacency_masks(&self) -> Vec<u64> {
        assert!(self.n <= 64, "adjacency masks need n <= 64");
        let mut adj = vec![0u64; self.n];
        for &(i, j) in &self.edges {
            adj[i] |= 1 << j;
            adj[j] |= 1 << i;
        }
        adj
    }

    /// Independence test on an explicit bit vector.
    pub fn is_independent(&self, x: &[bool]) -> Result<bool> {
        if x.len() != self.n {
            return Err(Error::Dimension { expected: self.n, got: x.len() });
        }
        Ok(self.edges.iter().all(|&(i, j)| !(x[i] && x[j])))
    }

    /// Independence test on a bitmask (bit i = vertex i).
    pub fn is_independent_mask(&self, x: u64) -> bool {
        self.edges.iter().all(|&(i, j)| (x >> i) & 1 == 0 || (x >> j) & 1 == 0)
    }

    /// Canonical edge-list text; parsing it returns an equal graph.
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{}\n", self.n);
        for (i, j) in &self.edges {
            let _ = writeln!(out, "{i} {j}");
        }
        out
    }

    /// SHA-256 of the canonical edge list, hex encoded.
    pub fn fingerprint(&self) -> String {
        hex::encode(Sha256::digest(self.to_edge_list().as_bytes()))
    }
}

/// Parses the edge-list format: `#` comments, first data line `n`, then `i j` pairs.
pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut n: Option<usize> = None;
    let mut edges = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let parse = |s: &str| {
            s.parse::<usize>().map_err(|_| Error::Parse {
                line: line_no,
                msg: format!("expected a non-negative integer, found {s:?}"),
            })
        };
        match n {
            None => {
                if fields.len() != 1 {
                    return Err(Error::Parse {
                        line: line_no,
                        msg: "first data line must hold the vertex count".into(),
                    });
                }
                let count = parse(fields[0])?;
                if count == 0 {
                    return Err(Error::Parse { line: line_no, msg: "vertex count must be >= 1".into() });
                }
                n = Some(count);
            }
            Some(count) => {
                if fields.len() != 2 {
                    return Err(Error::Parse {
                        line: line_no,
                        msg: format!("expected an edge \"i j\", found {line:?}"),
                    });
                }
                let (a, b) = (parse(fields[0])?, parse(fields[1])?);
                if a == b {
                    return Err(Error::Parse { line: line_no, msg: format!("self-loop on vertex {a}") });
                }
                if a >= count || b >= count {
                    return Err(Error::Parse {
                        line: line_no,
                        msg: format!("endpoint out of range: ({a}, {b}) with n = {count}"),
                    });
                }
                edges.push((a, b));
            }
        }
    }
    let n = n.ok_or(Error::Parse { line: 0, msg: "missing vertex count".into() })?;
    Graph::new(n, edges)
}

/// Erdős–Rényi G(n, rho): every pair `(i, j)`, `i < j`, in lexicographic order is
/// kept when a uniform draw from the seeded ChaCha8 stream falls below `rho`.
pub fn generate_er(n: usize, rho: f64, seed: u64) -> Result<Graph> {
    if n == 0 {
        return Err(Error::InvalidArgument("ER graph needs n >= 1".into()));
    }
    if !(0.0..=1.0).contains(&rho) {
        return Err(Error::InvalidArgument(format!("edge probability {rho} outside [0, 1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.random::<f64>() < rho {
                edges.push((i, j));
            }
        }
    }
    Graph::new(n, edges)
}

/// Exact maximum independent sets found by exhaustive enumeration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MisOracle {
    pub size: usize,
    /// Bitmasks of every maximum independent set, ascending.
    pub solutions: Vec<u64>,
}

impl MisOracle {
    pub fn count(&self) -> usize {
        self.solutions.len()
    }

    /// Parity (-1)^size shared by every maximum independent set.
    pub fn parity(&self) -> f64 {
        if self.size % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    }
}

pub fn brute_force_mis(g: &Graph) -> Result<MisOracle> {
    brute_force_mis_bounded(g, DEFAULT_ORACLE_LIMIT)
}

/// Enumerates all 2^n subsets; refuses graphs above `limit` vertices.
pub fn brute_force_mis_bounded(g: &Graph, limit: usize) -> Result<MisOracle> {
    let limit = limit.min(63);
    if g.n() > limit {
        return Err(Error::TooLarge { what: "oracle vertex count", got: g.n(), limit });
    }
    let adj = g.adjacency_masks();
    let mut size = 0usize;
    let mut solutions = Vec::new();
    for x in 0u64..(1u64 << g.n()) {
        let pop = x.count_ones() as usize;
        if pop < size {
            continue;
        }
        let independent = (0..g.n()).all(|i| (x >> i) & 1 == 0 || adj[i] & x == 0);
        if !independent {
            continue;
        }
        if pop > size {
            size = pop;
            solutions.clear();
        }
        solutions.push(x);
    }
    Ok(MisOracle { size, solutions })
}

/// `"10100101"` → mask with bit j set when character j is `'1'`.
pub fn ket_to_mask(ket: &str) -> Result<u64> {
    let ket = ket.trim_matches(|c| c == '|' || c == '>' || c == '⟩');
    if ket.len() > 64 {
        return Err(Error::InvalidArgument("ket longer than 64 characters".into()));
    }
    ket.chars().enumerate().try_fold(0u64, |acc, (j, c)| match c {
        '0' => Ok(acc),
        '1' => Ok(acc | (1 << j)),
        other => Err(Error::InvalidArgument(format!("bad ket character {other:?}"))),
    })
}

/// Inverse of [`ket_to_mask`] for an `n`-vertex register.
pub fn mask_to_ket(x: u64, n: usize) -> String {
    (0..n).map(|j| if (x >> j) & 1 == 1 { '1' } else { '0' }).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_small_documents() {
        let g = parse_graph("3\n0 1\n1 2").unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.edges(), &[(0, 1), (1, 2)]);

        let g = parse_graph("2\n").unwrap();
        assert_eq!(g.num_edges(), 0);

        let g = parse_graph("# comment\n\n4\n2 1\n1 2\n 3   0 \n").unwrap();
        assert_eq!(g.edges(), &[(0, 3), (1, 2)]);
    }

    #[test]
    fn parse_errors_name_the_line() {
        let err = parse_graph("2\n0 2").unwrap_err().to_string();
        assert!(err.contains("line 2") && err.contains("endpoint out of range"), "{err}");
        let err = parse_graph("3\n1 1").unwrap_err().to_string();
        assert!(err.contains("self-loop"), "{err}");
        let err = parse_graph("3\n0 1\n0 x").unwrap_err().to_string();
        assert!(err.contains("line 3"), "{err}");
        let err = parse_graph("3\n0 1 2").unwrap_err().to_string();
        assert!(err.contains("line 2"), "{err}");
        assert!(parse_graph("# nothing\n").is_err());
    }

    #[test]
    fn edge_list_round_trip() {
        let g = Graph::k33_plus();
        assert_eq!(parse_graph(&g.to_edge_list()).unwrap(), g);
        assert_eq!(g.fingerprint().len(), 64);
    }

    #[test]
    fn er_extremes_and_determinism() {
        assert_eq!(generate_er(5, 0.0, 7).unwrap().num_edges(), 0);
        let full = generate_er(5, 1.0, 7).unwrap();
        assert_eq!(full, Graph::complete(5).unwrap());
        assert_eq!(full.num_edges(), 10);
        for s in [0, 1, 99] {
            assert_eq!(generate_er(10, 0.5, s).unwrap(), generate_er(10, 0.5, s).unwrap());
        }
        assert_ne!(generate_er(10, 0.5, 1).unwrap(), generate_er(10, 0.5, 2).unwrap());
        assert!(generate_er(4, 1.5, 0).is_err());
        assert!(generate_er(0, 0.5, 0).is_err());
    }

    #[test]
    fn er_average_density() {
        let mean = (0..1000).map(|s| generate_er(10, 0.5, s).unwrap().density()).sum::<f64>() / 1000.0;
        assert!((mean - 0.5).abs() < 0.02, "mean density {mean}");
    }

    #[test]
    fn independence_checks() {
        let k3 = Graph::complete(3).unwrap();
        assert!(!k3.is_independent(&[true, true, false]).unwrap());
        assert!(k3.is_independent(&[false; 3]).unwrap());
        let path = Graph::path(3).unwrap();
        assert!(path.is_independent(&[true, false, true]).unwrap());
        assert!(path.is_independent_mask(0b101));
        assert!(!path.is_independent_mask(0b011));
        assert!(matches!(path.is_independent(&[true]), Err(Error::Dimension { .. })));
    }

    #[test]
    fn oracle_on_named_graphs() {
        let cube = brute_force_mis(&Graph::cube()).unwrap();
        assert_eq!(cube.size, 4);
        let mut expected = vec![ket_to_mask("10100101").unwrap(), ket_to_mask("01011010").unwrap()];
        expected.sort();
        assert_eq!(cube.solutions, expected);

        let k33 = brute_force_mis(&Graph::k33_plus()).unwrap();
        assert_eq!(k33.size, 3);
        assert_eq!(k33.solutions, vec![ket_to_mask("|0111000>").unwrap()]);

        let k5 = brute_force_mis(&Graph::complete(5).unwrap()).unwrap();
        assert_eq!((k5.size, k5.count()), (1, 5));
    }

    #[test]
    fn k33_plus_defeats_min_degree_greedy() {
        let g = Graph::k33_plus();
        let adj = g.adjacency_masks();
        let mut alive: u64 = (1 << g.n()) - 1;
        let mut picked = 0;
        while alive != 0 {
            let v = (0..g.n())
                .filter(|&v| (alive >> v) & 1 == 1)
                .min_by_key(|&v| (adj[v] & alive).count_ones())
                .unwrap();
            picked += 1;
            alive &= !(adj[v] | (1 << v));
        }
        assert_eq!(picked, 2);
    }

    #[test]
    fn oracle_refuses_large_graphs() {
        let g = Graph::empty(30).unwrap();
        assert!(matches!(brute_force_mis(&g), Err(Error::TooLarge { .. })));
        assert!(brute_force_mis_bounded(&Graph::empty(5).unwrap(), 4).is_err());
    }

    #[test]
    fn ket_conversions() {
        assert_eq!(ket_to_mask("100").unwrap(), 1);
        assert_eq!(mask_to_ket(0b101, 4), "1010");
        assert!(ket_to_mask("12").is_err());
    }
}
