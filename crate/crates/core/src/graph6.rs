//! The graph6 text format, bit-exact.
//!
//! Layout: a vertex-count header, then the upper triangle of the adjacency
//! matrix read column by column (for each column j, rows i < j), packed
//! big-endian into 6-bit groups, each group offset by 63 into printable
//! ASCII. Counts up to 62 use a single header byte `n + 63`; larger counts
//! use `~` followed by three bytes carrying an 18-bit count.

use crate::error::Graph6Error;
use crate::graph::{Graph, MAX_VERTICES};

/// Encode a graph in graph6. The output depends on the labelling; use
/// [`crate::canon::canonical_form`] for a label-invariant string.
pub fn to_graph6(g: &Graph) -> String {
    let n = g.vertex_count();
    let mut out = Vec::new();
    if n <= 62 {
        out.push(n as u8 + 63);
    } else {
        out.push(126);
        out.push(((n >> 12) & 0x3f) as u8 + 63);
        out.push(((n >> 6) & 0x3f) as u8 + 63);
        out.push((n & 0x3f) as u8 + 63);
    }
    let mut group = 0u8;
    let mut filled = 0u8;
    for j in 1..n {
        for i in 0..j {
            group <<= 1;
            if g.has_edge(i, j) {
                group |= 1;
            }
            filled += 1;
            if filled == 6 {
                out.push(group + 63);
                group = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        group <<= 6 - filled;
        out.push(group + 63);
    }
    String::from_utf8(out).expect("graph6 bytes are printable ASCII")
}

/// Parse a graph6 string produced by [`to_graph6`] or any standard tool.
pub fn parse_graph6(s: &str) -> Result<Graph, Graph6Error> {
    let bytes = s.trim_end_matches(['\n', '\r']).as_bytes();
    if bytes.is_empty() {
        return Err(Graph6Error::Empty);
    }
    for (pos, &b) in bytes.iter().enumerate() {
        if !(63..=126).contains(&b) {
            return Err(Graph6Error::BadByte { byte: b, pos });
        }
    }
    let (n, mut pos) = if bytes[0] == 126 {
        if bytes.len() < 4 {
            return Err(Graph6Error::Truncated {
                expected: 4,
                found: bytes.len(),
            });
        }
        if bytes[1] == 126 {
            // 8-byte counts exist in the wild but are far beyond our cap.
            return Err(Graph6Error::TooManyVertices { got: usize::MAX });
        }
        let n = (((bytes[1] - 63) as usize) << 12)
            | (((bytes[2] - 63) as usize) << 6)
            | ((bytes[3] - 63) as usize);
        (n, 4)
    } else {
        ((bytes[0] - 63) as usize, 1)
    };
    if n == 0 || n > MAX_VERTICES {
        return Err(Graph6Error::TooManyVertices { got: n });
    }
    let cells = n * (n - 1) / 2;
    let data_bytes = cells.div_ceil(6);
    if bytes.len() < pos + data_bytes {
        return Err(Graph6Error::Truncated {
            expected: data_bytes,
            found: bytes.len() - pos,
        });
    }
    if bytes.len() > pos + data_bytes {
        return Err(Graph6Error::TrailingData);
    }
    let mut edges = Vec::new();
    let mut group = 0u8;
    let mut left = 0u8;
    for j in 1..n {
        for i in 0..j {
            if left == 0 {
                group = bytes[pos] - 63;
                pos += 1;
                left = 6;
            }
            if group & 0b10_0000 != 0 {
                edges.push((i, j));
            }
            group <<= 1;
            left -= 1;
        }
    }
    Graph::from_edge_list(n, &edges).map_err(|_| Graph6Error::TooManyVertices { got: n })
}
