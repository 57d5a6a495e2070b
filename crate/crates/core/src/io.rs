//! Edge-list text format and graph6 input.
//!
//! Edge list: first line `<n> <m>`, then `m` lines `<u> <v>` with 0-based
//! labels. A loop is written `u u`; parallel edges repeat the line. Blank
//! lines and lines starting with `#` are ignored.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Parses either the edge-list format or a single graph6 line.
pub fn parse_graph(text: &str) -> Result<Graph> {
    let first = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'));
    match first {
        Some(l) if looks_like_graph6(l) => parse_graph6(l),
        _ => parse_edge_list(text),
    }
}

fn looks_like_graph6(line: &str) -> bool {
    let line = line.strip_prefix(">>graph6<<").unwrap_or(line);
    !line.contains(char::is_whitespace)
        && line.parse::<i64>().is_err()
        && line.bytes().all(|b| (63..=126).contains(&b))
}

pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (hline, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        msg: "missing header".into(),
    })?;
    let nums = parse_ints(header, hline)?;
    if nums.len() != 2 {
        return Err(Error::Parse {
            line: hline,
            msg: format!("header must be `<n> <m>`, got {header:?}"),
        });
    }
    let (n, m) = (nums[0], nums[1]);
    if n < 0 || m < 0 {
        return Err(Error::Parse {
            line: hline,
            msg: "negative vertex or edge count".into(),
        });
    }
    let (n, m) = (n as usize, m as usize);

    let mut g = Graph::empty(n);
    let mut seen = 0;
    for (lno, line) in lines {
        let nums = parse_ints(line, lno)?;
        if nums.len() != 2 {
            return Err(Error::Parse {
                line: lno,
                msg: format!("edge line must be `<u> <v>`, got {line:?}"),
            });
        }
        if seen == m {
            return Err(Error::Parse {
                line: lno,
                msg: format!("more than the declared {m} edges"),
            });
        }
        for &x in &nums {
            if x < 0 || x as usize >= n {
                return Err(Error::EndpointOutOfRange {
                    line: lno,
                    vertex: x,
                    order: n,
                });
            }
        }
        g.add_edge(nums[0] as usize, nums[1] as usize)?;
        seen += 1;
    }
    if seen != m {
        return Err(Error::Parse {
            line: hline,
            msg: format!("declared {m} edges, found {seen}"),
        });
    }
    Ok(g)
}

fn parse_ints(line: &str, lno: usize) -> Result<Vec<i64>> {
    line.split_whitespace()
        .map(|t| {
            t.parse::<i64>().map_err(|_| Error::Parse {
                line: lno,
                msg: format!("not an integer: {t:?}"),
            })
        })
        .collect()
}

/// Edge-list serialization with sorted edges.
pub fn to_edge_list(g: &Graph) -> String {
    let mut out = String::new();
    writeln!(out, "{} {}", g.order(), g.size()).unwrap();
    for (u, v) in g.edges() {
        writeln!(out, "{u} {v}").unwrap();
    }
    out
}

/// Decodes a graph6 string (simple graphs only).
pub fn parse_graph6(line: &str) -> Result<Graph> {
    let line = line.trim();
    let line = line.strip_prefix(">>graph6<<").unwrap_or(line);
    let bytes: Vec<u8> = line.bytes().collect();
    let bad = |msg: &str| Error::Parse {
        line: 1,
        msg: format!("graph6: {msg}"),
    };
    if bytes.is_empty() || bytes.iter().any(|&b| !(63..=126).contains(&b)) {
        return Err(bad("invalid character"));
    }
    let (n, rest) = if bytes[0] != 126 {
        ((bytes[0] - 63) as usize, &bytes[1..])
    } else if bytes.len() >= 4 && bytes[1] != 126 {
        let n = bytes[1..4]
            .iter()
            .fold(0usize, |acc, &b| (acc << 6) | (b - 63) as usize);
        (n, &bytes[4..])
    } else {
        return Err(bad("orders above 258047 are not supported"));
    };
    let needed = n * n.saturating_sub(1) / 2;
    if rest.len() * 6 < needed {
        return Err(bad("truncated adjacency data"));
    }
    let mut g = Graph::empty(n);
    let mut k = 0;
    for v in 1..n {
        for u in 0..v {
            let byte = rest[k / 6] - 63;
            if byte & (1 << (5 - k % 6)) != 0 {
                g.add_edge(u, v)?;
            }
            k += 1;
        }
    }
    Ok(g)
}

/// Encodes a simple graph as graph6.
pub fn to_graph6(g: &Graph) -> Result<String> {
    if !g.is_simple() {
        return Err(Error::NotSimple);
    }
    let n = g.order();
    let mut out = Vec::new();
    if n < 63 {
        out.push(n as u8 + 63);
    } else {
        out.push(126);
        for shift in [12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
    }
    let mut acc = 0u8;
    let mut k = 0;
    for v in 1..n {
        for u in 0..v {
            acc = (acc << 1) | g.has_edge(u, v) as u8;
            k += 1;
            if k % 6 == 0 {
                out.push(acc + 63);
                acc = 0;
            }
        }
    }
    if k % 6 != 0 {
        acc <<= 6 - k % 6;
        out.push(acc + 63);
    }
    Ok(String::from_utf8(out).expect("ascii"))
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    fn arb_multigraph(max_n: usize, max_m: usize) -> impl Strategy<Value = Graph> {
        (1..=max_n).prop_flat_map(move |n| {
            proptest::collection::vec((0..n, 0..n), 0..=max_m)
                .prop_map(move |es| Graph::from_edges(n, &es).expect("in range"))
        })
    }

    proptest! {
        #[test]
        fn edge_list_round_trips(g in arb_multigraph(9, 24)) {
            prop_assert_eq!(parse_graph(&to_edge_list(&g)).unwrap(), g);
        }
    }
    use super::*;

    #[test]
    fn parses_k5() {
        let mut text = String::from("5 10\n");
        for u in 0..5 {
            for v in u + 1..5 {
                text.push_str(&format!("{u} {v}\n"));
            }
        }
        let g = parse_graph(&text).unwrap();
        assert_eq!((g.order(), g.size()), (5, 10));
        assert_eq!(g, Graph::complete(5));
    }

    #[test]
    fn parses_double_loop() {
        let g = parse_graph("1 2\n0 0\n0 0\n").unwrap();
        assert_eq!(g.order(), 1);
        assert_eq!(g.loops(0), 2);
    }

    #[test]
    fn endpoint_out_of_range() {
        let err = parse_graph("3 2\n0 1\n0 5\n").unwrap_err();
        assert!(matches!(err, Error::EndpointOutOfRange { vertex: 5, .. }));
    }

    #[test]
    fn negative_and_malformed() {
        assert!(matches!(
            parse_graph("3 1\n0 -1\n"),
            Err(Error::EndpointOutOfRange { .. })
        ));
        assert!(matches!(parse_graph("3 -1\n"), Err(Error::Parse { .. })));
        assert!(matches!(parse_graph("3\n"), Err(Error::Parse { .. })));
        assert!(matches!(parse_graph("3 2\n0 1\n"), Err(Error::Parse { .. })));
        assert!(matches!(parse_graph("3 1\n0 1\n1 2\n"), Err(Error::Parse { .. })));
        assert!(matches!(parse_graph("3 1\n0 x\n"), Err(Error::Parse { .. })));
    }

    #[test]
    fn graph6_known_strings() {
        // K5 is "D~{" in graph6.
        assert_eq!(parse_graph("D~{").unwrap(), Graph::complete(5));
        assert_eq!(to_graph6(&Graph::complete(5)).unwrap(), "D~{");
        let p = parse_graph(">>graph6<<Bw").unwrap();
        assert_eq!(p.edges(), vec![(0, 1), (0, 2), (1, 2)]);
    }

    #[test]
    fn serialization_sorted() {
        let g = Graph::from_edges(3, &[(2, 1), (0, 0), (1, 0)]).unwrap();
        assert_eq!(to_edge_list(&g), "3 3\n0 0\n0 1\n1 2\n");
    }
}
