//! Parsing for Caristi map files.
//!
//! A map file pairs every point of an instance with its image under the
//! map. Single-valued maps list one target per source; set-valued maps
//! list zero or more members per source:
//!
//! ```text
//! map single 3
//! a b
//! b c
//! c c
//! ```
//!
//! The count in the header must equal the instance's point count, every
//! point must appear as a source exactly once, and all names must resolve
//! against the instance (labels or bare indices). Order is free. Blank
//! lines and full-line `#` comments are skipped. Whether the map actually
//! satisfies the Caristi condition is the solver's judgement, not a parse
//! concern; an empty image is syntactically fine.

use quasivar::io::CompiledInstance;
use quasivar::{PointId, PointSet};

pub enum MapFile {
    Single(Vec<PointId>),
    Multi(Vec<PointSet>),
}

fn bad<T>(line: usize, reason: impl Into<String>) -> Result<T, String> {
    Err(format!("map file line {line}: {}", reason.into()))
}

pub fn parse_map(text: &str, compiled: &CompiledInstance) -> Result<MapFile, String> {
    let n = compiled.labels().len();
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (line, header) = lines
        .next()
        .ok_or_else(|| "map file is empty".to_string())?;
    let toks: Vec<&str> = header.split_whitespace().collect();
    if toks.len() != 3 || toks[0] != "map" || !matches!(toks[1], "single" | "multi") {
        return bad(line, "expected `map single <count>` or `map multi <count>`");
    }
    let count: usize = match toks[2].parse() {
        Ok(c) => c,
        Err(_) => return bad(line, format!("point count `{}` is not a number", toks[2])),
    };
    if count != n {
        return bad(
            line,
            format!("map declares {count} points but the instance has {n}"),
        );
    }

    let resolve = |tok: &str, line: usize| -> Result<PointId, String> {
        compiled
            .resolve(tok)
            .map_or_else(|| bad(line, format!("unknown point `{tok}`")), Ok)
    };

    let single = toks[1] == "single";
    let mut singles: Vec<Option<PointId>> = vec![None; n];
    let mut multis: Vec<Option<PointSet>> = vec![None; n];
    for _ in 0..n {
        let Some((line, l)) = lines.next() else {
            return Err("map file ends before every point has an image".to_string());
        };
        let toks: Vec<&str> = l.split_whitespace().collect();
        let src = resolve(toks[0], line)?;
        let taken = if single {
            singles[src.0].is_some()
        } else {
            multis[src.0].is_some()
        };
        if taken {
            return bad(line, format!("point `{}` appears twice", toks[0]));
        }
        if single {
            if toks.len() != 2 {
                return bad(line, "expected `<source> <target>`");
            }
            singles[src.0] = Some(resolve(toks[1], line)?);
        } else {
            let mut image = PointSet::empty();
            for t in &toks[1..] {
                image.insert(resolve(t, line)?);
            }
            multis[src.0] = Some(image);
        }
    }
    if let Some((line, _)) = lines.next() {
        return bad(line, "unexpected content after the last map entry");
    }

    Ok(if single {
        MapFile::Single(singles.into_iter().map(|t| t.unwrap()).collect())
    } else {
        MapFile::Multi(multis.into_iter().map(|t| t.unwrap()).collect())
    })
}
