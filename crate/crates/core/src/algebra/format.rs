use crate::error::{Error, ParseError, Result};

use super::FiniteAlgebra;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Table {
    Arrow,
    Squig,
}

/// Strips a trailing `#` comment and surrounding whitespace.
pub(crate) fn strip_comment(line: &str) -> &str {
    line.split('#').next().unwrap_or("").trim()
}

/// Reads the line-based algebra format.
pub fn parse_algebra(text: &str) -> Result<FiniteAlgebra> {
    let mut name: Option<String> = None;
    let mut carrier: Option<Vec<String>> = None;
    let mut unit: Option<(usize, String)> = None;
    let mut bottom: Option<(usize, String)> = None;
    let mut arrow: Option<Vec<Vec<String>>> = None;
    let mut squig: Option<Vec<Vec<String>>> = None;
    let mut current: Option<(Table, usize, Vec<Vec<String>>)> = None;
    let mut ended = false;
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        last_line = lineno;
        let line = strip_comment(raw);
        if line.is_empty() {
            continue;
        }
        if ended {
            return Err(ParseError::new(lineno, "content after `end`").into());
        }
        let toks: Vec<&str> = line.split_whitespace().collect();

        if let Some((table, _, rows)) = current.as_mut() {
            let n = carrier.as_ref().map_or(0, Vec::len);
            if toks.len() != n {
                return Err(ParseError::new(
                    lineno,
                    format!(
                        "row length mismatch: expected {n} entries, found {}",
                        toks.len()
                    ),
                )
                .into());
            }
            rows.push(toks.iter().map(|t| t.to_string()).collect());
            if rows.len() == n {
                let rows = std::mem::take(rows);
                match table {
                    Table::Arrow => arrow = Some(rows),
                    Table::Squig => squig = Some(rows),
                }
                current = None;
            }
            continue;
        }

        match toks[0] {
            "algebra" => {
                if toks.len() != 2 {
                    return Err(ParseError::new(lineno, "expected `algebra <name>`").into());
                }
                if name.is_some() {
                    return Err(ParseError::new(lineno, "duplicate `algebra` line").into());
                }
                name = Some(toks[1].to_string());
            }
            "elements" => {
                if carrier.is_some() {
                    return Err(ParseError::new(lineno, "duplicate `elements` line").into());
                }
                if toks.len() < 2 {
                    return Err(ParseError::new(lineno, "empty carrier").into());
                }
                let list: Vec<String> = toks[1..].iter().map(|t| t.to_string()).collect();
                for (i, tok) in list.iter().enumerate() {
                    if list[..i].contains(tok) {
                        return Err(ParseError::new(
                            lineno,
                            format!("duplicate element token `{tok}`"),
                        )
                        .into());
                    }
                }
                carrier = Some(list);
            }
            kw @ ("unit" | "bottom") => {
                if toks.len() != 2 {
                    return Err(ParseError::new(lineno, format!("expected `{kw} <token>`")).into());
                }
                let slot = if kw == "unit" { &mut unit } else { &mut bottom };
                if slot.is_some() {
                    return Err(ParseError::new(lineno, format!("duplicate `{kw}` line")).into());
                }
                *slot = Some((lineno, toks[1].to_string()));
            }
            "table" => {
                let table = match toks.get(1..) {
                    Some(["arrow"]) => Table::Arrow,
                    Some(["squig"]) => Table::Squig,
                    _ => {
                        return Err(ParseError::new(
                            lineno,
                            "expected `table arrow` or `table squig`",
                        )
                        .into())
                    }
                };
                if carrier.is_none() {
                    return Err(ParseError::new(lineno, "table before `elements`").into());
                }
                let done = match table {
                    Table::Arrow => arrow.is_some(),
                    Table::Squig => squig.is_some(),
                };
                if done {
                    return Err(ParseError::new(lineno, "duplicate table").into());
                }
                current = Some((table, lineno, Vec::new()));
            }
            "end" => {
                if toks.len() != 1 {
                    return Err(ParseError::new(lineno, "unexpected tokens after `end`").into());
                }
                ended = true;
            }
            other => {
                return Err(ParseError::new(lineno, format!("unexpected `{other}`")).into());
            }
        }
    }

    if let Some((_, start, rows)) = current {
        let n = carrier.as_ref().map_or(0, Vec::len);
        return Err(ParseError::new(
            start,
            format!(
                "row count mismatch: expected {n} rows, found {}",
                rows.len()
            ),
        )
        .into());
    }
    let missing = |what: &str| -> Error {
        ParseError::new(last_line, format!("missing required section `{what}`")).into()
    };
    let name = name.ok_or_else(|| missing("algebra"))?;
    let carrier = carrier.ok_or_else(|| missing("elements"))?;
    let (unit_line, unit_tok) = unit.ok_or_else(|| missing("unit"))?;
    let arrow = arrow.ok_or_else(|| missing("table arrow"))?;
    let squig = squig.ok_or_else(|| missing("table squig"))?;
    if !ended {
        return Err(missing("end"));
    }

    let lookup = |tok: &str, line: usize| -> Result<usize> {
        carrier
            .iter()
            .position(|t| t == tok)
            .ok_or_else(|| ParseError::new(line, format!("unknown token `{tok}`")).into())
    };
    let unit = lookup(&unit_tok, unit_line)?;
    let bottom = match &bottom {
        Some((line, tok)) => Some(lookup(tok, *line)?),
        None => None,
    };
    let resolve = |rows: Vec<Vec<String>>| -> Result<Vec<Vec<usize>>> {
        rows.iter()
            .map(|row| row.iter().map(|t| lookup(t, 0)).collect())
            .collect()
    };
    let arrow = resolve(arrow)?;
    let squig = resolve(squig)?;
    FiniteAlgebra::new(name, carrier, arrow, squig, unit, bottom)
}

/// Writes the canonical text form; `parse_algebra` reads it back unchanged.
pub fn serialize_algebra(a: &FiniteAlgebra) -> String {
    let mut out = String::new();
    out.push_str(&format!("algebra {}\n", a.name()));
    out.push_str(&format!("elements {}\n", a.carrier().join(" ")));
    out.push_str(&format!("unit {}\n", a.token(a.unit())));
    if let Some(b) = a.declared_bottom() {
        out.push_str(&format!("bottom {}\n", a.token(b)));
    }
    for (label, op) in [("arrow", Table::Arrow), ("squig", Table::Squig)] {
        out.push_str(&format!("table {label}\n"));
        for x in a.elements() {
            let row: Vec<&str> = a
                .elements()
                .map(|y| {
                    let v = match op {
                        Table::Arrow => a.arrow(x, y),
                        Table::Squig => a.squig(x, y),
                    };
                    a.token(v)
                })
                .collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
    }
    out.push_str("end\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const PBCK4: &str = include_str!("../../../../fixtures/algebras/pbck4.alg");

    #[test]
    fn parses_four_element_table() {
        let a = parse_algebra(PBCK4).unwrap();
        assert_eq!(a.size(), 4);
        assert_eq!(a.token(a.unit()), "1");
        let c = a.find("c").unwrap();
        let ea = a.find("a").unwrap();
        assert_eq!(a.token(a.arrow(c, ea)), "b");
        assert_eq!(a.token(a.squig(c, ea)), "c");
    }

    #[test]
    fn parses_singleton() {
        let a =
            parse_algebra("algebra t\nelements 1\nunit 1\ntable arrow\n1\ntable squig\n1\nend\n")
                .unwrap();
        assert_eq!(a.size(), 1);
    }

    #[test]
    fn rejects_short_row() {
        let text = PBCK4.replace("1 a 1 c\n", "1 a 1\n");
        let err = parse_algebra(&text).unwrap_err();
        assert!(err.to_string().contains("row length mismatch"), "{err}");
    }

    #[test]
    fn rejects_duplicate_tokens() {
        let text = PBCK4.replace("elements 1 a b c", "elements 1 a a c");
        let err = parse_algebra(&text).unwrap_err();
        assert!(err.to_string().contains("duplicate element"), "{err}");
    }

    #[test]
    fn rejects_unknown_tokens() {
        let text = PBCK4.replace("unit 1", "unit z");
        assert!(parse_algebra(&text)
            .unwrap_err()
            .to_string()
            .contains("unknown token"));
        let text = PBCK4.replace("1 b 1 1", "1 q 1 1");
        assert!(parse_algebra(&text)
            .unwrap_err()
            .to_string()
            .contains("unknown token"));
    }

    #[test]
    fn rejects_missing_sections() {
        let text = PBCK4.replace("unit 1\n", "");
        assert!(parse_algebra(&text)
            .unwrap_err()
            .to_string()
            .contains("`unit`"));
        let text = PBCK4.replace("end\n", "");
        assert!(parse_algebra(&text)
            .unwrap_err()
            .to_string()
            .contains("`end`"));
        let cut: String = PBCK4.lines().take(12).map(|l| format!("{l}\n")).collect();
        assert!(parse_algebra(&cut)
            .unwrap_err()
            .to_string()
            .contains("row count mismatch"));
    }

    #[test]
    fn serialize_round_trips() {
        let a = parse_algebra(PBCK4).unwrap();
        let text = serialize_algebra(&a);
        assert_eq!(parse_algebra(&text).unwrap(), a);
        assert_eq!(serialize_algebra(&parse_algebra(&text).unwrap()), text);
    }
}
