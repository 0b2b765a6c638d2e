//! ARPA back-off text format.
//!
//! Values are log10. A probability of 0 (only the `<s>` unigram) is written
//! as `-99`, and anything at or below `-99` reads back as 0.

use std::fmt::Write as _;
use std::sync::Arc as Shared;

use super::{NGramEntry, NGramModel, BOS, EOS, UNK};
use crate::error::{Error, Result};
use crate::fst::Label;
use crate::symbols::SymbolTable;

const LOG_ZERO: f64 = -99.0;

fn to_log10(p: f64) -> f64 {
    if p > 0.0 {
        p.log10()
    } else {
        LOG_ZERO
    }
}

fn from_log10(v: f64) -> f64 {
    if v <= LOG_ZERO {
        0.0
    } else {
        10f64.powf(v)
    }
}

pub fn write_arpa(m: &NGramModel) -> String {
    let entries = m.sorted_entries();
    let mut counts = vec![0usize; m.order() + 1];
    for (ngram, _) in &entries {
        counts[ngram.len()] += 1;
    }
    let vocab = m.vocab();
    let mut out = String::from("\\data\\\n");
    for (n, c) in counts.iter().enumerate().skip(1) {
        let _ = writeln!(out, "ngram {n}={c}");
    }
    let mut current = 0;
    for (ngram, e) in entries {
        if ngram.len() != current {
            current = ngram.len();
            let _ = write!(out, "\n\\{current}-grams:\n");
        }
        let words: Vec<&str> = ngram.iter().map(|&l| vocab.find_symbol(l).unwrap()).collect();
        let _ = write!(out, "{}\t{}", to_log10(e.prob), words.join(" "));
        if let Some(b) = e.backoff {
            let _ = write!(out, "\t{}", to_log10(b));
        }
        out.push('\n');
    }
    out.push_str("\n\\end\\\n");
    out
}

#[derive(PartialEq)]
enum Section {
    Preamble,
    Data,
    Grams(usize),
    End,
}

pub fn read_arpa(text: &str) -> Result<NGramModel> {
    let mut section = Section::Preamble;
    let mut declared: Vec<usize> = Vec::new();
    let mut seen: Vec<usize> = Vec::new();
    let mut rows: Vec<(usize, Vec<String>, f64, Option<f64>)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if line == "\\data\\" {
            if section != Section::Preamble {
                return Err(Error::parse(lineno, "duplicate \\data\\ header"));
            }
            section = Section::Data;
            continue;
        }
        if line == "\\end\\" {
            if !matches!(section, Section::Grams(_)) {
                return Err(Error::parse(lineno, "\\end\\ before any n-gram section"));
            }
            section = Section::End;
            continue;
        }
        if let Some(n) = line.strip_prefix('\\').and_then(|s| s.strip_suffix("-grams:")) {
            let n: usize = n
                .parse()
                .map_err(|_| Error::parse(lineno, format!("bad section header {line:?}")))?;
            let expected = match section {
                Section::Data => 1,
                Section::Grams(prev) => prev + 1,
                _ => return Err(Error::parse(lineno, "n-gram section outside the model body")),
            };
            if n != expected || n > declared.len() {
                return Err(Error::parse(lineno, format!("unexpected section {line:?}")));
            }
            seen.push(0);
            section = Section::Grams(n);
            continue;
        }
        match section {
            Section::Preamble => {} // free text before \data\ is allowed
            Section::Data => {
                let spec = line
                    .strip_prefix("ngram ")
                    .ok_or_else(|| Error::parse(lineno, format!("expected `ngram N=count`, got {line:?}")))?;
                let (n, c) = spec
                    .split_once('=')
                    .ok_or_else(|| Error::parse(lineno, "missing `=` in count line"))?;
                let n: usize = n.trim().parse().map_err(|_| Error::parse(lineno, "bad n-gram order"))?;
                let c: usize = c.trim().parse().map_err(|_| Error::parse(lineno, "bad n-gram count"))?;
                if n != declared.len() + 1 {
                    return Err(Error::parse(lineno, "n-gram counts must be listed in order"));
                }
                declared.push(c);
            }
            Section::Grams(n) => {
                let fields: Vec<&str> = line.split_whitespace().collect();
                let backoff = match fields.len() {
                    k if k == n + 1 => None,
                    k if k == n + 2 => Some(parse_value(fields[n + 1], lineno)?),
                    _ => return Err(Error::parse(lineno, format!("expected {n} words in {line:?}"))),
                };
                let prob = parse_value(fields[0], lineno)?;
                let words = fields[1..=n].iter().map(|s| s.to_string()).collect();
                rows.push((lineno, words, from_log10(prob), backoff.map(from_log10)));
                seen[n - 1] += 1;
            }
            Section::End => return Err(Error::parse(lineno, "content after \\end\\")),
        }
    }
    if section != Section::End {
        return Err(Error::parse(text.lines().count(), "missing \\end\\"));
    }
    if declared.is_empty() || seen.len() != declared.len() {
        return Err(Error::parse(text.lines().count(), "n-gram sections do not match the \\data\\ counts"));
    }
    for (n, (&d, &s)) in declared.iter().zip(&seen).enumerate() {
        if d != s {
            return Err(Error::parse(
                text.lines().count(),
                format!("{}-gram count declared as {d} but {s} entries found", n + 1),
            ));
        }
    }

    let mut table = SymbolTable::new();
    for special in [BOS, EOS, UNK] {
        table.add_symbol(special);
    }
    for (_, words, _, _) in rows.iter().filter(|r| r.1.len() == 1) {
        if table.find_id(&words[0]).is_none() {
            table.add_symbol(&words[0]);
        }
    }
    let vocab = Shared::new(table);
    let mut model = NGramModel::new(declared.len(), vocab.clone())?;
    for (lineno, words, prob, backoff) in rows {
        let ngram: Vec<Label> = words
            .iter()
            .map(|w| {
                vocab
                    .find_id(w)
                    .ok_or_else(|| Error::parse(lineno, format!("word {w:?} has no unigram entry")))
            })
            .collect::<Result<_>>()?;
        model.insert(ngram, NGramEntry { prob, backoff });
    }
    Ok(model)
}

fn parse_value(s: &str, lineno: usize) -> Result<f64> {
    let v: f64 = s
        .parse()
        .map_err(|_| Error::parse(lineno, format!("bad log10 value {s:?}")))?;
    if v.is_nan() || v > 0.0 && v.is_infinite() {
        return Err(Error::parse(lineno, format!("bad log10 value {s:?}")));
    }
    Ok(v)
}

impl std::str::FromStr for NGramModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        read_arpa(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lm::estimate;

    #[test]
    fn round_trip() {
        let corpus: Vec<Vec<&str>> = vec![vec!["a", "b", "c"], vec!["b", "b", "a"]];
        let m = estimate(&corpus, 3, 10).unwrap();
        let text = write_arpa(&m);
        let back = read_arpa(&text).unwrap();
        assert_eq!(back.vocab(), m.vocab());
        for (ngram, e) in m.sorted_entries() {
            let f = back.entry(ngram).unwrap();
            assert!((f.prob - e.prob).abs() <= 1e-12 * e.prob.max(1e-300));
            assert_eq!(f.backoff.is_some(), e.backoff.is_some());
        }
        assert_eq!(write_arpa(&back), text);
    }

    #[test]
    fn missing_backoff_defaults_to_one() {
        let text = "\\data\\\nngram 1=3\n\n\\1-grams:\n-0.3\ta\n-0.3\t</s>\n-99\t<s>\n\n\\end\\\n";
        let m = read_arpa(text).unwrap();
        let a = m.vocab().find_id("a").unwrap();
        assert_eq!(m.backoff(&[a]), 1.0);
        assert_eq!(m.entry(&[m.bos()]).unwrap().prob, 0.0);
    }

    #[test]
    fn count_mismatch_reports_line() {
        let text = "\\data\\\nngram 1=2\n\n\\1-grams:\n-0.3\ta\n\n\\end\\\n";
        match read_arpa(text) {
            Err(Error::Parse { msg, .. }) => assert!(msg.contains("declared as 2")),
            other => panic!("unexpected {other:?}"),
        }
        let bad_header = "\\data\\\nngram 1=1\n\n\\2-grams:\n-0.3\ta b\n\\end\\\n";
        assert!(matches!(read_arpa(bad_header), Err(Error::Parse { line: 4, .. })));
        let bad_value = "\\data\\\nngram 1=1\n\n\\1-grams:\nx\ta\n\\end\\\n";
        assert!(matches!(read_arpa(bad_value), Err(Error::Parse { line: 5, .. })));
    }
}
