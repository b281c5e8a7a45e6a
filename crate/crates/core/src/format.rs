//! Text formats: update streams, event logs and document streams.
//!
//! Update line: `<seq> <a> <b> <delta>`.
//! Event line: `<seq> GAIN|LOSE <density, 9 decimals> <v1,v2,...>`.
//! Document line: `<timestamp>\t<entity>[,<entity>...]`.
//! Lines starting with `#` and blank lines are ignored on input.

use std::io::{BufRead, Write};

use crate::engine::{DensityEvent, EventKind};
use crate::error::{Error, Result};
use crate::graph::EdgeUpdate;
use crate::ingest::Document;
use crate::Vertex;

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

fn skip(line: &str) -> bool {
    let t = line.trim();
    t.is_empty() || t.starts_with('#')
}

fn field<T: std::str::FromStr>(line: usize, name: &str, raw: Option<&str>) -> Result<T> {
    let raw = raw.ok_or_else(|| parse_err(line, format!("missing {name}")))?;
    raw.parse().map_err(|_| parse_err(line, format!("invalid {name} {raw:?}")))
}

/// Parses one update line; `None` for comments and blank lines.
pub fn parse_update(line: usize, text: &str) -> Result<Option<EdgeUpdate>> {
    if skip(text) {
        return Ok(None);
    }
    let mut parts = text.split_ascii_whitespace();
    let seq = field(line, "sequence number", parts.next())?;
    let a: Vertex = field(line, "vertex", parts.next())?;
    let b: Vertex = field(line, "vertex", parts.next())?;
    let delta: f64 = field(line, "delta", parts.next())?;
    if let Some(extra) = parts.next() {
        return Err(parse_err(line, format!("unexpected trailing field {extra:?}")));
    }
    if a == 0 || b == 0 {
        return Err(parse_err(line, "vertex ids start at 1"));
    }
    if a == b {
        return Err(parse_err(line, format!("self-loop on vertex {a}")));
    }
    if !delta.is_finite() {
        return Err(parse_err(line, format!("non-finite delta {delta}")));
    }
    Ok(Some(EdgeUpdate::new(seq, a, b, delta)))
}

/// Streams `(line number, update)` pairs from a reader.
pub struct UpdateReader<R> {
    input: R,
    line: usize,
    buf: String,
}

impl<R: BufRead> UpdateReader<R> {
    pub fn new(input: R) -> Self {
        UpdateReader { input, line: 0, buf: String::new() }
    }
}

impl<R: BufRead> Iterator for UpdateReader<R> {
    type Item = Result<(usize, EdgeUpdate)>;

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            self.buf.clear();
            match self.input.read_line(&mut self.buf) {
                Ok(0) => return None,
                Ok(_) => {}
                Err(e) => return Some(Err(e.into())),
            }
            self.line += 1;
            match parse_update(self.line, &self.buf) {
                Ok(Some(u)) => return Some(Ok((self.line, u))),
                Ok(None) => continue,
                Err(e) => return Some(Err(e)),
            }
        }
    }
}

pub fn read_updates<R: BufRead>(input: R) -> Result<Vec<EdgeUpdate>> {
    UpdateReader::new(input).map(|r| r.map(|(_, u)| u)).collect()
}

pub fn format_update(u: &EdgeUpdate) -> String {
    format!("{} {} {} {}", u.seq, u.a, u.b, u.delta)
}

pub fn write_updates<W: Write>(mut out: W, updates: &[EdgeUpdate]) -> Result<()> {
    for u in updates {
        writeln!(out, "{}", format_update(u))?;
    }
    Ok(())
}

pub fn join_vertices(vs: &[Vertex]) -> String {
    let parts: Vec<String> = vs.iter().map(Vertex::to_string).collect();
    parts.join(",")
}

fn split_vertices(line: usize, raw: &str) -> Result<Vec<Vertex>> {
    raw.split(',').map(|v| field(line, "vertex", Some(v))).collect()
}

pub fn format_event(e: &DensityEvent) -> String {
    format!("{} {} {:.9} {}", e.seq, e.kind, e.density, join_vertices(&e.vertices))
}

pub fn parse_event(line: usize, text: &str) -> Result<Option<DensityEvent>> {
    if skip(text) {
        return Ok(None);
    }
    let mut parts = text.split_ascii_whitespace();
    let seq = field(line, "sequence number", parts.next())?;
    let kind = match parts.next() {
        Some("GAIN") => EventKind::Gain,
        Some("LOSE") => EventKind::Lose,
        other => return Err(parse_err(line, format!("invalid event kind {other:?}"))),
    };
    let density = field(line, "density", parts.next())?;
    let vertices = split_vertices(line, parts.next().ok_or_else(|| parse_err(line, "missing vertex set"))?)?;
    Ok(Some(DensityEvent { seq, kind, vertices, density }))
}

pub fn read_events<R: BufRead>(input: R) -> Result<Vec<DensityEvent>> {
    let mut out = Vec::new();
    for (i, line) in input.lines().enumerate() {
        if let Some(e) = parse_event(i + 1, &line?)? {
            out.push(e);
        }
    }
    Ok(out)
}

pub fn parse_document(line: usize, text: &str) -> Result<Option<Document>> {
    if skip(text) {
        return Ok(None);
    }
    let text = text.trim_end_matches(['\n', '\r']);
    let (ts, rest) = text.split_once('\t').unwrap_or((text, ""));
    let timestamp = field(line, "timestamp", Some(ts.trim()))?;
    let entities = rest.split(',').map(str::trim).filter(|e| !e.is_empty()).map(String::from).collect();
    Ok(Some(Document { timestamp, entities }))
}

pub fn read_documents<R: BufRead>(input: R) -> Result<Vec<Document>> {
    let mut out = Vec::new();
    for (i, line) in input.lines().enumerate() {
        if let Some(d) = parse_document(i + 1, &line?)? {
            out.push(d);
        }
    }
    Ok(out)
}

pub fn format_document(d: &Document) -> String {
    format!("{}\t{}", d.timestamp, d.entities.join(","))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn update_round_trip() {
        let u = EdgeUpdate::new(7, 3, 12, -0.1 + 0.2 - 0.3);
        let line = format_update(&u);
        assert_eq!(parse_update(1, &line).unwrap(), Some(u));
        assert_eq!(parse_update(1, "# header").unwrap(), None);
        assert_eq!(parse_update(1, "   ").unwrap(), None);
        assert_eq!(parse_update(1, "0 1 2 +0.15").unwrap().unwrap().delta, 0.15);
    }

    #[test]
    fn update_errors_cite_line() {
        let input = "# stream\n0 1 2 0.5\n3 7 7 0.5\n";
        let err = read_updates(input.as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
        assert!(err.to_string().starts_with("line 3:"));
        for bad in ["1 2 3", "1 2 3 x", "1 2 3 0.5 9", "a 2 3 0.5", "1 0 3 0.5", "1 2 3 inf"] {
            assert!(parse_update(5, bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn event_format_is_fixed() {
        let e = DensityEvent { seq: 12, kind: EventKind::Gain, vertices: vec![1, 2, 3], density: 1.0233333333333 };
        assert_eq!(format_event(&e), "12 GAIN 1.023333333 1,2,3");
        let back = parse_event(1, &format_event(&e)).unwrap().unwrap();
        assert_eq!((back.seq, back.kind, back.vertices), (12, EventKind::Gain, vec![1, 2, 3]));
        let lose = DensityEvent { seq: 0, kind: EventKind::Lose, vertices: vec![4, 9], density: 0.5 };
        assert_eq!(format_event(&lose), "0 LOSE 0.500000000 4,9");
    }

    #[test]
    fn documents() {
        let d = parse_document(1, "1700000000\tobama, nobel ,peace").unwrap().unwrap();
        assert_eq!(d.timestamp, 1_700_000_000);
        assert_eq!(d.entities, vec!["obama", "nobel", "peace"]);
        assert!(parse_document(1, "5\t").unwrap().unwrap().entities.is_empty());
        assert!(parse_document(1, "5").unwrap().unwrap().entities.is_empty());
        assert!(matches!(parse_document(4, "x\ta"), Err(Error::Parse { line: 4, .. })));
        assert_eq!(format_document(&d), "1700000000\tobama,nobel,peace");
    }
}
