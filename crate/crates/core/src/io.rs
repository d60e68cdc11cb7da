//! Plain-text formats for point sets and weights.
//!
//! Point sets: a header line `d n`, then `n` lines of `d` whitespace-separated
//! coordinates. Weights: one `mask gamma` pair per line, the mask being a
//! comma-separated list of one-based coordinates (`()` for the empty set).
//! Blank lines and `#` comments are ignored in both.

use std::fmt::Write as _;
use std::path::Path;

use crate::{Error, PointSet, Result, SubsetId, Weights};

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

pub fn parse_pointset(text: &str) -> Result<PointSet> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or_else(|| parse_err(1, "missing header `d n`"))?;
    let nums: Vec<&str> = header.split_whitespace().collect();
    let [d, n] = nums[..] else {
        return Err(parse_err(hl, "header must be `d n`"));
    };
    let d: usize = d.parse().map_err(|_| parse_err(hl, format!("bad dimension `{d}`")))?;
    let n: usize = n.parse().map_err(|_| parse_err(hl, format!("bad point count `{n}`")))?;
    let mut flat = Vec::with_capacity(d * n);
    let mut rows = 0;
    for (ln, line) in lines {
        let before = flat.len();
        for tok in line.split_whitespace() {
            let x: f64 = tok
                .parse()
                .map_err(|_| parse_err(ln, format!("bad coordinate `{tok}`")))?;
            flat.push(x);
        }
        if flat.len() - before != d {
            return Err(parse_err(ln, format!("expected {d} coordinates, found {}", flat.len() - before)));
        }
        rows += 1;
    }
    if rows != n {
        return Err(parse_err(hl, format!("header declares {n} points, found {rows}")));
    }
    PointSet::from_flat(d, flat)
}

/// Shortest round-trip formatting, so reading back is lossless.
pub fn format_pointset(p: &PointSet) -> String {
    let mut s = format!("{} {}\n", p.dim(), p.len());
    for x in p.points() {
        let row: Vec<String> = x.iter().map(|v| v.to_string()).collect();
        s.push_str(&row.join(" "));
        s.push('\n');
    }
    s
}

pub fn read_pointset(path: impl AsRef<Path>) -> Result<PointSet> {
    parse_pointset(&std::fs::read_to_string(path)?)
}

pub fn write_pointset(path: impl AsRef<Path>, p: &PointSet) -> Result<()> {
    Ok(std::fs::write(path, format_pointset(p))?)
}

fn parse_mask(tok: &str, dim: usize, line: usize) -> Result<SubsetId> {
    let inner = tok
        .trim_start_matches(['(', '{'])
        .trim_end_matches([')', '}'])
        .trim();
    if inner.is_empty() {
        return Ok(SubsetId::EMPTY);
    }
    let mut coords = Vec::new();
    for c in inner.split(',') {
        let c = c.trim();
        let j: usize = c
            .parse()
            .map_err(|_| parse_err(line, format!("bad coordinate index `{c}`")))?;
        if j == 0 || j > dim {
            return Err(parse_err(line, format!("coordinate {j} outside 1..={dim}")));
        }
        coords.push(j);
    }
    Ok(SubsetId::from_coords(&coords))
}

/// Parses a weights file for dimension `dim`. Unlisted subsets get weight
/// 0, except `γ_∅` which defaults to 1.
pub fn parse_weights(text: &str, dim: usize) -> Result<Weights> {
    let mut w = Weights::zeros(dim)?;
    for (ln, line) in content_lines(text) {
        let (mask, gamma) = line
            .rsplit_once(char::is_whitespace)
            .ok_or_else(|| parse_err(ln, "expected `mask gamma`"))?;
        let u = parse_mask(mask.trim(), dim, ln)?;
        let g: f64 = gamma
            .parse()
            .map_err(|_| parse_err(ln, format!("bad weight `{gamma}`")))?;
        w.set(u, g).map_err(|e| parse_err(ln, e.to_string()))?;
    }
    Ok(w)
}

/// Writes `γ_∅` and every positive nonempty weight.
pub fn format_weights(w: &Weights) -> String {
    let mut s = format!("() {}\n", w.get(SubsetId::EMPTY));
    for (u, g) in w.positive_subsets() {
        let coords: Vec<String> = u.indices().map(|i| (i + 1).to_string()).collect();
        let _ = writeln!(s, "{} {g}", coords.join(","));
    }
    s
}

pub fn read_weights(path: impl AsRef<Path>, dim: usize) -> Result<Weights> {
    parse_weights(&std::fs::read_to_string(path)?, dim)
}
