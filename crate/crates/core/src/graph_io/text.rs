use std::io::{BufWriter, ErrorKind, Read, Write};

use super::{AdjacencyGraph, GraphBuilder};
use crate::error::{Error, Result};

/// Read buffer used by [`parse_text_graph`].
pub const DEFAULT_READ_BUFFER: usize = 32 << 20;

pub fn parse_text_graph<R: Read>(source: R) -> Result<AdjacencyGraph> {
    parse_text_graph_with_buffer(source, DEFAULT_READ_BUFFER)
}

/// Parses the text format with a fixed read buffer of `buffer_size` bytes.
///
/// A successor is emitted on a space and also on a newline when digits are
/// pending, so lines without the trailing space are accepted. A final line
/// without a newline still counts as a node.
pub fn parse_text_graph_with_buffer<R: Read>(
    mut source: R,
    buffer_size: usize,
) -> Result<AdjacencyGraph> {
    let mut buf = vec![0u8; buffer_size.max(1)];
    let mut builder = GraphBuilder::new();
    let mut row = Vec::new();
    let mut pending: Option<u64> = None;
    let mut line_open = false;
    let mut line: u64 = 1;

    loop {
        let filled = match source.read(&mut buf) {
            Ok(0) => break,
            Ok(k) => k,
            Err(e) if e.kind() == ErrorKind::Interrupted => continue,
            Err(e) => return Err(e.into()),
        };
        for &byte in &buf[..filled] {
            match byte {
                b'0'..=b'9' => {
                    let v = pending.unwrap_or(0) * 10 + (byte - b'0') as u64;
                    if v > u32::MAX as u64 {
                        return Err(Error::Parse {
                            line,
                            message: "successor id does not fit in 32 bits".into(),
                        });
                    }
                    pending = Some(v);
                    line_open = true;
                }
                b' ' => {
                    if let Some(v) = pending.take() {
                        row.push(v as u32);
                    }
                    line_open = true;
                }
                b'\n' => {
                    if let Some(v) = pending.take() {
                        row.push(v as u32);
                    }
                    builder.push_row(&mut row);
                    row.clear();
                    line_open = false;
                    line += 1;
                }
                other => {
                    return Err(Error::Parse {
                        line,
                        message: format!("unexpected byte 0x{other:02X}"),
                    });
                }
            }
        }
    }
    if line_open {
        if let Some(v) = pending.take() {
            row.push(v as u32);
        }
        builder.push_row(&mut row);
    }
    builder.finish()
}

/// Writes the canonical text form: every successor followed by one space,
/// every line ended by `\n`.
pub fn write_text_graph<W: Write>(g: &AdjacencyGraph, sink: W) -> Result<()> {
    let mut w = BufWriter::with_capacity(1 << 16, sink);
    let mut digits = [0u8; 11];
    for row in g.rows() {
        for &v in row {
            let text = format_u32(v, &mut digits);
            w.write_all(text)?;
        }
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(())
}

/// Decimal digits of `v` followed by a space.
fn format_u32(mut v: u32, buf: &mut [u8; 11]) -> &[u8] {
    let mut i = buf.len() - 1;
    buf[i] = b' ';
    loop {
        i -= 1;
        buf[i] = b'0' + (v % 10) as u8;
        v /= 10;
        if v == 0 {
            return &buf[i..];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph_io::{g4, generate_graph};
    use proptest::prelude::*;

    fn parse(s: &str) -> Result<AdjacencyGraph> {
        parse_text_graph_with_buffer(s.as_bytes(), 3)
    }

    fn lists(g: &AdjacencyGraph) -> Vec<Vec<u32>> {
        g.rows().map(<[u32]>::to_vec).collect()
    }

    fn write(g: &AdjacencyGraph) -> String {
        let mut out = Vec::new();
        write_text_graph(g, &mut out).unwrap();
        String::from_utf8(out).unwrap()
    }

    #[test]
    fn parse_examples() {
        let g = parse("1 2 \n2 \n\n0 3 \n").unwrap();
        assert_eq!(lists(&g), vec![vec![1, 2], vec![2], vec![], vec![0, 3]]);
        assert_eq!(parse("").unwrap().num_nodes(), 0);
        // Pending digits are flushed at the newline.
        assert_eq!(
            lists(&parse("1 2\n\n\n").unwrap()),
            vec![vec![1, 2], vec![], vec![]]
        );
        assert!(matches!(
            parse("1 2\n"),
            Err(Error::Validation {
                successor: 2,
                n: 1,
                ..
            })
        ));
    }

    #[test]
    fn pending_token_without_newline() {
        let g = parse("1 0\n0").unwrap();
        assert_eq!(lists(&g), vec![vec![0, 1], vec![0]]);
    }

    #[test]
    fn duplicates_and_order_normalized() {
        let g = parse("1 1 0 \n0  0\n").unwrap();
        assert_eq!(lists(&g), vec![vec![0, 1], vec![0]]);
    }

    #[test]
    fn bad_byte_reports_line() {
        let err = parse("1 \n2\r\n\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
        assert!(matches!(parse("1 x"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn id_beyond_line_count() {
        let err = parse("3 \n\n").unwrap_err();
        assert!(
            matches!(
                err,
                Error::Validation {
                    node: 0,
                    successor: 3,
                    n: 2
                }
            ),
            "{err}"
        );
    }

    #[test]
    fn overflowing_id() {
        assert!(matches!(parse("99999999999\n"), Err(Error::Parse { .. })));
    }

    #[test]
    fn write_examples() {
        assert_eq!(write(&g4()), "1 2 \n2 \n\n0 3 \n");
        assert_eq!(
            write(&AdjacencyGraph::from_lists([Vec::<u32>::new()]).unwrap()),
            "\n"
        );
        assert_eq!(write(&AdjacencyGraph::default()), "");
    }

    #[test]
    fn large_ids_format() {
        let g =
            AdjacencyGraph::from_lists(
                (0..11).map(|i| if i == 10 { vec![0, 9, 10] } else { vec![] }),
            )
            .unwrap();
        assert!(write(&g).ends_with("0 9 10 \n"));
    }

    #[test]
    fn canonical_text_round_trip() {
        let g = generate_graph(2000, 9.0, 0.5, 11).unwrap();
        let text = write(&g);
        let back = parse_text_graph(text.as_bytes()).unwrap();
        assert_eq!(back, g);
        assert_eq!(write(&back), text);
    }

    proptest! {
        #[test]
        fn parse_inverts_write(rows in proptest::collection::vec(proptest::collection::vec(0u32..60, 0..12), 1..60)) {
            let n = rows.len() as u32;
            let g = AdjacencyGraph::from_lists(rows.into_iter().map(|r| r.into_iter().map(move |v| v % n))).unwrap();
            let text = write(&g);
            prop_assert_eq!(parse_text_graph_with_buffer(text.as_bytes(), 7).unwrap(), g);
        }
    }
}
