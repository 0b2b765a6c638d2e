//! AT&T-style text serialization.
//!
//! Arc lines are `src dst ilabel olabel [cost]`, final lines `state [cost]`.
//! The first line's source is the start state and an omitted cost means 0.
//! Output is canonical: the start state comes first, then the remaining
//! states in id order, each with its arcs sorted and its final line last.
//! Costs use the shortest decimal form that parses back to the same `f64`.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::fst::{Arc, Fst, Label, StateId};
use crate::semiring::Semiring;
use crate::symbols::SymbolTable;

fn fmt_cost(out: &mut String, cost: f64) {
    if cost == 0.0 {
        return;
    }
    if cost == f64::INFINITY {
        out.push_str("\tInfinity");
    } else {
        let _ = write!(out, "\t{cost}");
    }
}

fn write_with<W: Semiring>(
    fst: &Fst<W>,
    mut label: impl FnMut(Label) -> Result<String>,
) -> Result<String> {
    let mut out = String::new();
    let Some(start) = fst.start() else {
        return Ok(out);
    };
    let order = std::iter::once(start).chain(fst.states().filter(|&s| s != start));
    for s in order {
        let mut arcs = fst.arcs(s).to_vec();
        arcs.sort_by(|a, b| {
            (a.ilabel, a.olabel, a.nextstate)
                .cmp(&(b.ilabel, b.olabel, b.nextstate))
                .then(a.weight.value().total_cmp(&b.weight.value()))
        });
        for a in &arcs {
            let _ = write!(
                out,
                "{s}\t{}\t{}\t{}",
                a.nextstate,
                label(a.ilabel)?,
                label(a.olabel)?
            );
            fmt_cost(&mut out, a.weight.value());
            out.push('\n');
        }
        if fst.is_final(s) {
            let _ = write!(out, "{s}");
            fmt_cost(&mut out, fst.final_weight(s).value());
            out.push('\n');
        } else if s == start && arcs.is_empty() {
            // keeps the start state visible when it has nothing else to print
            let _ = writeln!(out, "{s}\tInfinity");
        }
    }
    Ok(out)
}

/// Serializes with numeric labels.
pub fn write_text<W: Semiring>(fst: &Fst<W>) -> String {
    write_with(fst, |l| Ok(l.to_string())).expect("numeric labels always format")
}

/// Serializes with labels spelled through `symbols`.
pub fn write_text_symbolic<W: Semiring>(fst: &Fst<W>, symbols: &SymbolTable) -> Result<String> {
    write_with(fst, |l| {
        symbols
            .find_symbol(l)
            .map(str::to_string)
            .ok_or(Error::UnknownLabel(l))
    })
}

fn parse_cost(field: &str, line: usize) -> Result<f64> {
    let v: f64 = field
        .parse()
        .map_err(|_| Error::parse(line, format!("bad cost {field:?}")))?;
    if v.is_nan() || v == f64::NEG_INFINITY {
        return Err(Error::parse(line, format!("bad cost {field:?}")));
    }
    Ok(v)
}

fn parse_state(field: &str, line: usize) -> Result<StateId> {
    field
        .parse()
        .map_err(|_| Error::parse(line, format!("bad state id {field:?}")))
}

/// Parses numbered lines; shared by the standalone reader and the archive
/// reader so errors carry file line numbers.
pub(crate) fn parse_lines<'a, W: Semiring>(
    lines: impl IntoIterator<Item = (usize, &'a str)>,
    mut label: impl FnMut(&str, usize) -> Result<Label>,
) -> Result<Fst<W>> {
    let mut fst = Fst::new();
    let ensure = |fst: &mut Fst<W>, s: StateId| {
        while fst.num_states() <= s {
            fst.add_state();
        }
    };
    for (lineno, line) in lines {
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.is_empty() {
            continue;
        }
        let src = parse_state(fields[0], lineno)?;
        ensure(&mut fst, src);
        if fst.start().is_none() {
            fst.set_start(src);
        }
        match fields.len() {
            1 | 2 => {
                let cost = match fields.get(1) {
                    Some(f) => parse_cost(f, lineno)?,
                    None => 0.0,
                };
                fst.set_final(src, W::new(cost));
            }
            4 | 5 => {
                let dst = parse_state(fields[1], lineno)?;
                ensure(&mut fst, dst);
                let il = label(fields[2], lineno)?;
                let ol = label(fields[3], lineno)?;
                let cost = match fields.get(4) {
                    Some(f) => parse_cost(f, lineno)?,
                    None => 0.0,
                };
                fst.add_arc(src, Arc::new(il, ol, W::new(cost), dst));
            }
            n => {
                return Err(Error::parse(
                    lineno,
                    format!("expected 1, 2, 4 or 5 fields, found {n}"),
                ))
            }
        }
    }
    Ok(fst)
}

pub(crate) fn numeric_label(field: &str, line: usize) -> Result<Label> {
    field
        .parse()
        .map_err(|_| Error::parse(line, format!("bad label {field:?}")))
}

/// Parses text with numeric labels.
pub fn read_text<W: Semiring>(text: &str) -> Result<Fst<W>> {
    parse_lines(text.lines().enumerate().map(|(i, l)| (i + 1, l)), numeric_label)
}

/// Parses text whose labels are symbols of `symbols`.
pub fn read_text_symbolic<W: Semiring>(text: &str, symbols: &SymbolTable) -> Result<Fst<W>> {
    parse_lines(text.lines().enumerate().map(|(i, l)| (i + 1, l)), |f, line| {
        symbols
            .find_id(f)
            .ok_or_else(|| Error::parse(line, format!("unknown symbol {f:?}")))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semiring::{Log, Tropical};
    use proptest::prelude::*;

    #[test]
    fn canonical_text_round_trips() {
        let text = "0\t1\t1\t1\t0.5\n0\t2\t2\t3\n1\t2\t0\t0\t-1\n2\n";
        let f: Fst<Tropical> = read_text(text).unwrap();
        assert_eq!(f.num_states(), 3);
        assert_eq!(f.num_arcs(), 3);
        assert_eq!(write_text(&f), text);
    }

    #[test]
    fn start_is_first_source() {
        let f: Fst<Tropical> = read_text("2\t0\t5\t5\n0\t1.25\n").unwrap();
        assert_eq!(f.start(), Some(2));
        assert_eq!(f.final_weight(0), Tropical(1.25));
        assert_eq!(write_text(&f), "2\t0\t5\t5\n0\t1.25\n");
    }

    #[test]
    fn lone_non_final_start_survives() {
        let mut f = Fst::<Tropical>::new();
        f.add_state();
        f.set_start(0);
        let text = write_text(&f);
        assert_eq!(text, "0\tInfinity\n");
        assert_eq!(read_text::<Tropical>(&text).unwrap(), f);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = read_text::<Tropical>("0 1 1 1\n0 1 x 1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
        let err = read_text::<Tropical>("0 1 1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
        let err = read_text::<Tropical>("0 nan\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
    }

    #[test]
    fn symbolic_labels() {
        let syms = SymbolTable::from_words(["the", "sea"]);
        let f: Fst<Log> = read_text_symbolic("0 1 the the\n1 2 sea <eps> 2\n2\n", &syms).unwrap();
        assert_eq!(f.arcs(1)[0].olabel, 0);
        assert_eq!(
            write_text_symbolic(&f, &syms).unwrap(),
            "0\t1\tthe\tthe\n1\t2\tsea\t<eps>\t2\n2\n"
        );
    }

    proptest! {
        #[test]
        fn costs_round_trip_bit_exact(costs in prop::collection::vec(-1e6f64..1e6, 1..8)) {
            let mut f = Fst::<Tropical>::new();
            f.add_states(costs.len() + 1);
            f.set_start(0);
            for (i, &c) in costs.iter().enumerate() {
                f.add_arc(i, Arc::new(i as Label + 1, 1, Tropical(c), i + 1));
            }
            f.set_final(costs.len(), Tropical(costs[0] / 3.0));
            let back: Fst<Tropical> = read_text(&write_text(&f)).unwrap();
            prop_assert_eq!(&back, &f);
            prop_assert_eq!(write_text(&back), write_text(&f));
        }
    }
}
