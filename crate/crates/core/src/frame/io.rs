//! Text format for frames.
//!
//! ```text
//! # the two-pronged fork
//! points: u v w
//! rel: u u
//! rel: u v
//! ```
//!
//! * Lines starting with `#` (after optional whitespace) and blank lines are ignored;
//!   a `#` also ends a line early.
//! * Exactly one `points:` line precedes all `rel:` lines. It is either a single
//!   count `points: 3` (points are then named `0 1 2`) or a list of distinct names.
//!   Names may not contain whitespace or any of `, { } #`.
//! * Each `rel: a b` line adds the ordered pair `a R b`.
//!
//! Reflexive pairs must be listed explicitly unless the caller asks for the
//! reflexive-transitive closure on load.

use super::Frame;
use crate::error::{Error, Result};

/// Parses the text format. With `close`, the reflexive-transitive closure of
/// the listed relation is returned.
pub fn parse_frame(text: &str, close: bool) -> Result<Frame> {
    let mut labels: Option<Vec<String>> = None;
    let mut pairs = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line_no = lineno + 1;
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        let indent = content.len() - content.trim_start().len();
        let body = content.trim_start();
        let (key, rest) = match body.split_once(':') {
            Some(kv) => kv,
            None => return Err(Error::parse(line_no, indent + 1, "expected `points:` or `rel:`")),
        };
        let rest_offset = indent + key.len() + 1;
        let tokens = tokenize(rest, rest_offset);
        match key.trim() {
            "points" => {
                if labels.is_some() {
                    return Err(Error::parse(line_no, indent + 1, "duplicate `points:` line"));
                }
                labels = Some(parse_points(&tokens, line_no, rest_offset)?);
            }
            "rel" => {
                let names = labels.as_ref().ok_or_else(|| {
                    Error::parse(line_no, indent + 1, "`rel:` before `points:`")
                })?;
                if tokens.len() != 2 {
                    let col = tokens.get(2).map_or(rest_offset + 1, |t| t.0);
                    return Err(Error::parse(line_no, col, "`rel:` takes exactly two points"));
                }
                let mut ends = [0usize; 2];
                for (slot, (col, tok)) in ends.iter_mut().zip(&tokens) {
                    *slot = names.iter().position(|l| l == tok).ok_or_else(|| {
                        Error::parse(line_no, *col, format!("unknown point `{tok}`"))
                    })?;
                }
                pairs.push((ends[0], ends[1]));
            }
            other => {
                return Err(Error::parse(
                    line_no,
                    indent + 1,
                    format!("unknown key `{other}`"),
                ))
            }
        }
    }
    let labels = labels.ok_or_else(|| Error::parse(1, 1, "missing `points:` line"))?;
    let frame = Frame::new(labels.len(), pairs)?.with_labels(labels)?;
    Ok(if close {
        frame.reflexive_transitive_closure()
    } else {
        frame
    })
}

fn tokenize(s: &str, offset: usize) -> Vec<(usize, String)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in s.char_indices().chain(std::iter::once((s.len(), ' '))) {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(b)) => {
                out.push((offset + b + 1, s[b..i].to_string()));
                start = None;
            }
            _ => {}
        }
    }
    out
}

fn parse_points(tokens: &[(usize, String)], line: usize, offset: usize) -> Result<Vec<String>> {
    if tokens.is_empty() {
        return Err(Error::parse(line, offset + 1, "`points:` needs a count or names"));
    }
    if tokens.len() == 1 && tokens[0].1.chars().all(|c| c.is_ascii_digit()) {
        let n: usize = tokens[0]
            .1
            .parse()
            .map_err(|_| Error::parse(line, tokens[0].0, "point count out of range"))?;
        if n == 0 {
            return Err(Error::parse(line, tokens[0].0, "a frame needs at least one point"));
        }
        return Ok((0..n).map(|i| i.to_string()).collect());
    }
    let mut names: Vec<String> = Vec::with_capacity(tokens.len());
    for (col, tok) in tokens {
        if tok.contains([',', '{', '}']) {
            return Err(Error::parse(line, *col, format!("invalid point name `{tok}`")));
        }
        if names.contains(tok) {
            return Err(Error::parse(line, *col, format!("duplicate point `{tok}`")));
        }
        names.push(tok.clone());
    }
    Ok(names)
}

/// Serializes a frame; every pair of the relation is listed, so the output
/// re-parses to the same frame without closure.
pub fn write_frame(frame: &Frame) -> String {
    let default_names = frame
        .labels()
        .iter()
        .enumerate()
        .all(|(i, l)| *l == i.to_string());
    let mut out = if default_names {
        format!("points: {}\n", frame.len())
    } else {
        format!("points: {}\n", frame.labels().join(" "))
    };
    for x in frame.points() {
        for y in frame.succ(x).iter() {
            out.push_str(&format!("rel: {} {}\n", frame.label(x), frame.label(y)));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::{fork, w_frame};

    #[test]
    fn parses_named_points_with_closure() {
        let text = "# fork\npoints: u v w\nrel: u v\nrel: u w   # prongs\n";
        let f = parse_frame(text, true).unwrap();
        assert_eq!(f, fork());
        let raw = parse_frame(text, false).unwrap();
        assert!(!raw.is_reflexive());
    }

    #[test]
    fn parses_counts() {
        let f = parse_frame("points: 2\nrel: 0 1\n", true).unwrap();
        assert_eq!(f.labels(), ["0", "1"]);
        assert!(f.rel(0, 1) && !f.rel(1, 0));
    }

    #[test]
    fn writer_round_trips() {
        for f in [fork(), w_frame(), parse_frame("points: 3\nrel: 2 0", true).unwrap()] {
            assert_eq!(parse_frame(&write_frame(&f), false).unwrap(), f);
        }
    }

    #[test]
    fn errors_carry_positions() {
        let err = parse_frame("points: a b\nrel: a  c\n", false).unwrap_err();
        assert_eq!(
            err,
            Error::Parse {
                line: 2,
                column: 9,
                message: "unknown point `c`".into()
            }
        );
        assert!(matches!(
            parse_frame("rel: a b\n", false),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_frame("points: a a\n", false),
            Err(Error::Parse { line: 1, column: 11, .. })
        ));
        assert!(matches!(
            parse_frame("points: a\nfoo\n", false),
            Err(Error::Parse { line: 2, column: 1, .. })
        ));
        assert!(parse_frame("# nothing\n", false).is_err());
    }
}
