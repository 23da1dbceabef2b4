//! Text format for parametric graphs.
//!
//! ```text
//! # comment
//! p pgmc <n> <m> <d>
//! e <u> <v> <c0> <c1> ... <cd>
//! ```
//!
//! Vertices are 1-based. Repeated pairs are merged by summing costs.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::pgraph::ParamGraph;

fn parse_int<T: std::str::FromStr>(tok: &str, line: usize, what: &str) -> Result<T> {
    let normalized = tok.replace('\u{2212}', "-");
    normalized.parse::<T>().map_err(|_| Error::Parse {
        line,
        msg: format!("invalid {what} `{tok}`"),
    })
}

pub fn parse_graph(text: &str) -> Result<ParamGraph> {
    let mut graph: Option<(ParamGraph, usize)> = None;
    let mut seen = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let toks: Vec<&str> = content.split_whitespace().collect();
        match toks[0] {
            "p" => {
                if graph.is_some() {
                    return Err(Error::Parse {
                        line,
                        msg: "duplicate header".into(),
                    });
                }
                if toks.len() != 5 || toks[1] != "pgmc" {
                    return Err(Error::Parse {
                        line,
                        msg: "header must read `p pgmc <n> <m> <d>`".into(),
                    });
                }
                let n: usize = parse_int(toks[2], line, "vertex count")?;
                let m: usize = parse_int(toks[3], line, "edge count")?;
                let d: usize = parse_int(toks[4], line, "dimension")?;
                graph = Some((ParamGraph::new(n, d), m));
            }
            "e" => {
                let Some((g, _)) = graph.as_mut() else {
                    return Err(Error::Parse {
                        line,
                        msg: "edge before header".into(),
                    });
                };
                let want = g.dim() + 4;
                if toks.len() != want {
                    return Err(Error::Parse {
                        line,
                        msg: format!("edge needs {} fields after `e`, found {}", want - 1, toks.len() - 1),
                    });
                }
                let u: usize = parse_int(toks[1], line, "vertex")?;
                let v: usize = parse_int(toks[2], line, "vertex")?;
                let n = g.n_original();
                for x in [u, v] {
                    if x == 0 || x > n {
                        return Err(Error::VertexOutOfRange { vertex: x, n });
                    }
                }
                let cost = toks[3..].iter().map(|t| parse_int::<i64>(t, line, "cost")).collect::<Result<Vec<_>>>()?;
                g.add_edge(u - 1, v - 1, cost).map_err(|e| match e {
                    Error::SelfLoop(x) => Error::SelfLoop(x + 1),
                    other => other,
                })?;
                seen += 1;
            }
            other => {
                return Err(Error::Parse {
                    line,
                    msg: format!("unknown record `{other}`"),
                })
            }
        }
    }
    let Some((g, m)) = graph else {
        return Err(Error::Parse {
            line: 0,
            msg: "missing header".into(),
        });
    };
    if seen != m {
        return Err(Error::Parse {
            line: 0,
            msg: format!("header announces {m} edges, found {seen}"),
        });
    }
    Ok(g)
}

/// Canonical text form: one line per merged edge, in `(u, v)` order.
pub fn serialize_graph(g: &ParamGraph) -> String {
    let mut out = String::new();
    writeln!(out, "p pgmc {} {} {}", g.n_original(), g.num_edges(), g.dim()).unwrap();
    for (u, v, cost) in g.edges() {
        write!(out, "e {} {}", u + 1, v + 1).unwrap();
        for c in cost {
            write!(out, " {c}").unwrap();
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_running_example() {
        let g = parse_graph("# T1\np pgmc 3 3 1\ne 1 2 0 1\ne 2 3 1 0\ne 1 3 2 \u{2212}1\n").unwrap();
        let edges: Vec<_> = g.edges().map(|(u, v, c)| (u, v, c.to_vec())).collect();
        assert_eq!(edges, vec![(0, 1, vec![0, 1]), (0, 2, vec![2, -1]), (1, 2, vec![1, 0])]);
    }

    #[test]
    fn merges_duplicates() {
        let g = parse_graph("p pgmc 2 2 1\ne 1 2 0 1\ne 1 2 0 1\n").unwrap();
        let edges: Vec<_> = g.edges().map(|(u, v, c)| (u, v, c.to_vec())).collect();
        assert_eq!(edges, vec![(0, 1, vec![0, 2])]);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(parse_graph("p pgmc 2 1 1\ne 1 1 5 0\n"), Err(Error::SelfLoop(1))));
        assert!(matches!(parse_graph("p pgmc 2 1 1\ne 1 3 5 0\n"), Err(Error::VertexOutOfRange { vertex: 3, .. })));
        assert!(matches!(parse_graph("p pgmc 2 1 1\ne 1 2 5\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_graph("e 1 2 5 0\np pgmc 2 1 1\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_graph("p graph 2 1 1\n"), Err(Error::Parse { .. })));
        assert!(matches!(parse_graph("p pgmc 2 2 1\ne 1 2 5 0\n"), Err(Error::Parse { .. })));
        assert!(matches!(parse_graph("p pgmc 2 1 1\ne 1 2 x 0\n"), Err(Error::Parse { .. })));
        assert!(parse_graph("").is_err());
    }

    proptest! {
        #[test]
        fn roundtrip(n in 2usize..8, raw in prop::collection::vec((0usize..8, 0usize..8, -9i64..10, -9i64..10), 0..20)) {
            let mut g = ParamGraph::new(n, 1);
            for (u, v, a, b) in raw {
                let (u, v) = (u % n, v % n);
                if u != v {
                    g.add_edge(u, v, vec![a, b]).unwrap();
                }
            }
            let text = serialize_graph(&g);
            let back = parse_graph(&text).unwrap();
            prop_assert_eq!(serialize_graph(&back), text);
            let edges: Vec<_> = back.edges().map(|(u, v, c)| (u, v, c.to_vec())).collect();
            let orig: Vec<_> = g.edges().map(|(u, v, c)| (u, v, c.to_vec())).collect();
            prop_assert_eq!(edges, orig);
        }
    }
}
