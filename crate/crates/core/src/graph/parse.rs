use std::fs;
use std::io::BufRead;
use std::path::Path;

use super::{Graph, GraphError, NodeIdMap};

/// On-disk graph formats understood by [`read_graph_file`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphFormat {
    EdgeList,
    MatrixMarket,
}

/// Parses a whitespace-separated edge list.
///
/// Lines starting with `%` or `#` are comments and blank lines are skipped.
/// Every other line must hold two endpoint labels and optionally a weight,
/// which is ignored.
pub fn parse_edge_list<R: BufRead>(reader: R) -> Result<(Graph, NodeIdMap), GraphError> {
    let mut pairs = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('%') || trimmed.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        match tokens.len() {
            2 | 3 => pairs.push((tokens[0].to_owned(), tokens[1].to_owned())),
            n => {
                return Err(GraphError::Parse {
                    line: idx + 1,
                    message: format!("expected 2 or 3 tokens, found {n}"),
                })
            }
        }
    }
    Ok(Graph::from_edges(pairs))
}

/// Parses the coordinate subset of Matrix Market.
///
/// Node `i` (1-based in the file) becomes id `i - 1`, so isolated nodes
/// declared by the dimensions are kept. Values are discarded, `general`
/// matrices are symmetrized and diagonal entries are dropped.
pub fn parse_matrix_market<R: BufRead>(reader: R) -> Result<(Graph, NodeIdMap), GraphError> {
    let mut lines = reader.lines().enumerate();
    let mm_err = |msg: String| GraphError::MatrixMarket(msg);

    let header = match lines.next() {
        Some((_, line)) => line?,
        None => return Err(mm_err("empty input".into())),
    };
    let fields: Vec<String> = header
        .split_whitespace()
        .map(str::to_ascii_lowercase)
        .collect();
    if fields.len() != 5 || fields[0] != "%%matrixmarket" || fields[1] != "matrix" {
        return Err(mm_err(format!("bad header {header:?}")));
    }
    if fields[2] != "coordinate" {
        return Err(mm_err(format!(
            "unsupported format {:?}, expected coordinate",
            fields[2]
        )));
    }
    let value_tokens = match fields[3].as_str() {
        "pattern" => 0,
        "real" | "integer" => 1,
        other => return Err(mm_err(format!("unsupported field {other:?}"))),
    };
    match fields[4].as_str() {
        "general" | "symmetric" => {}
        other => return Err(mm_err(format!("unsupported symmetry {other:?}"))),
    }

    let mut size: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    let mut entries = 0usize;
    for (idx, line) in lines {
        let line = line?;
        let lineno = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('%') {
            continue;
        }
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        let parse_index = |tok: &str| {
            tok.parse::<usize>().map_err(|_| GraphError::Parse {
                line: lineno,
                message: format!("invalid integer {tok:?}"),
            })
        };
        let Some((n, nnz)) = size else {
            if tokens.len() != 3 {
                return Err(GraphError::Parse {
                    line: lineno,
                    message: "size line must hold rows, columns and entry count".into(),
                });
            }
            let (rows, cols) = (parse_index(tokens[0])?, parse_index(tokens[1])?);
            if rows != cols {
                return Err(mm_err(format!("non-square matrix {rows}x{cols}")));
            }
            size = Some((rows, parse_index(tokens[2])?));
            continue;
        };
        if tokens.len() != 2 + value_tokens {
            return Err(GraphError::Parse {
                line: lineno,
                message: format!(
                    "expected {} tokens, found {}",
                    2 + value_tokens,
                    tokens.len()
                ),
            });
        }
        let (i, j) = (parse_index(tokens[0])?, parse_index(tokens[1])?);
        for index in [i, j] {
            if index == 0 || index > n {
                return Err(GraphError::Parse {
                    line: lineno,
                    message: format!("index {index} outside 1..={n}"),
                });
            }
        }
        entries += 1;
        if entries > nnz {
            return Err(mm_err(format!("more than the declared {nnz} entries")));
        }
        edges.push((i - 1, j - 1));
    }
    let Some((n, nnz)) = size else {
        return Err(mm_err("missing size line".into()));
    };
    if entries != nnz {
        return Err(mm_err(format!("declared {nnz} entries, found {entries}")));
    }

    let mut map = NodeIdMap::default();
    for i in 1..=n {
        map.intern(i.to_string());
    }
    Ok((Graph::from_index_edges(n, edges), map))
}

/// Reads a graph file, choosing the parser from the `%%MatrixMarket` banner.
pub fn read_graph_file(path: &Path) -> Result<(Graph, NodeIdMap, GraphFormat), GraphError> {
    let text = fs::read_to_string(path)?;
    let is_mm = text
        .get(..14)
        .is_some_and(|head| head.eq_ignore_ascii_case("%%MatrixMarket"));
    if is_mm {
        let (g, map) = parse_matrix_market(text.as_bytes())?;
        Ok((g, map, GraphFormat::MatrixMarket))
    } else {
        let (g, map) = parse_edge_list(text.as_bytes())?;
        Ok((g, map, GraphFormat::EdgeList))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(text: &str) -> Result<(Graph, NodeIdMap), GraphError> {
        parse_edge_list(text.as_bytes())
    }

    fn mm(text: &str) -> Result<(Graph, NodeIdMap), GraphError> {
        parse_matrix_market(text.as_bytes())
    }

    #[test]
    fn edge_list_path() {
        let (g, _) = el("0 1\n1 2\n").unwrap();
        assert_eq!((g.node_count(), g.edge_count()), (3, 2));
    }

    #[test]
    fn edge_list_comment_and_weight() {
        let (g, map) = el("% hdr\n5 7 0.3\n").unwrap();
        assert_eq!((g.node_count(), g.edge_count()), (2, 1));
        assert_eq!(map.labels(), ["5", "7"]);
    }

    #[test]
    fn edge_list_hash_comments_and_blank_lines() {
        let (g, _) = el("# a\n\n  a b\n\tb c 1\n").unwrap();
        assert_eq!((g.node_count(), g.edge_count()), (3, 2));
    }

    #[test]
    fn edge_list_too_many_tokens() {
        match el("a b c d\n") {
            Err(GraphError::Parse { line, .. }) => assert_eq!(line, 1),
            other => panic!("expected parse error, got {other:?}"),
        }
        match el("0 1\n% c\n7\n") {
            Err(GraphError::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn mm_pattern_symmetric_path() {
        let text = "%%MatrixMarket matrix coordinate pattern symmetric\n% c\n3 3 2\n2 1\n3 2\n";
        let (g, _) = mm(text).unwrap();
        assert_eq!((g.node_count(), g.edge_count()), (3, 2));
        assert!(g.has_edge(0, 1) && g.has_edge(1, 2));
    }

    #[test]
    fn mm_real_general_is_symmetrized() {
        let text = "%%MatrixMarket matrix coordinate real general\n2 2 2\n1 2 0.5\n2 1 0.5\n";
        let (g, _) = mm(text).unwrap();
        assert_eq!((g.node_count(), g.edge_count()), (2, 1));
    }

    #[test]
    fn mm_keeps_isolated_nodes_and_drops_diagonal() {
        let text = "%%MatrixMarket matrix coordinate integer symmetric\n5 5 2\n1 1 4\n3 2 1\n";
        let (g, map) = mm(text).unwrap();
        assert_eq!((g.node_count(), g.edge_count()), (5, 1));
        assert_eq!(map.label(4), "5");
    }

    #[test]
    fn mm_rejects_non_square() {
        let err = mm("%%MatrixMarket matrix coordinate pattern general\n3 4 1\n1 2\n").unwrap_err();
        assert!(err.to_string().contains("non-square"), "{err}");
    }

    #[test]
    fn mm_rejects_array_format() {
        let err = mm("%%MatrixMarket matrix array real general\n2 2\n1\n0\n0\n1\n").unwrap_err();
        assert!(matches!(err, GraphError::MatrixMarket(_)));
    }

    #[test]
    fn mm_rejects_out_of_range_index() {
        let err =
            mm("%%MatrixMarket matrix coordinate pattern symmetric\n3 3 1\n4 1\n").unwrap_err();
        assert!(matches!(err, GraphError::Parse { line: 3, .. }), "{err}");
        let err =
            mm("%%MatrixMarket matrix coordinate pattern symmetric\n3 3 1\n0 1\n").unwrap_err();
        assert!(matches!(err, GraphError::Parse { .. }));
    }

    #[test]
    fn mm_entry_count_must_match() {
        let err =
            mm("%%MatrixMarket matrix coordinate pattern symmetric\n3 3 2\n2 1\n").unwrap_err();
        assert!(err.to_string().contains("declared 2"), "{err}");
    }
}
