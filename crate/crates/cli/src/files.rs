//! Reading and writing the on-disk formats, with the path in every error.

use std::fs;
use std::path::Path;
use std::sync::Arc as Shared;

use anyhow::Context;
use latcomb::lm::{read_arpa, NGramModel};
use latcomb::text::{read_text, write_text};
use latcomb::{read_transcripts, Fst, LatticeArchive, SymbolTable, Tropical};

pub type Transcripts = Vec<(String, Vec<String>)>;

pub fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

pub fn write(path: &Path, contents: &str) -> anyhow::Result<()> {
    fs::write(path, contents).with_context(|| format!("cannot write {}", path.display()))
}

pub fn symbols(path: &Path) -> anyhow::Result<Shared<SymbolTable>> {
    let table = SymbolTable::from_text(&read(path)?).with_context(|| format!("in {}", path.display()))?;
    Ok(Shared::new(table))
}

pub fn archive(path: &Path, syms: Option<&Shared<SymbolTable>>) -> anyhow::Result<LatticeArchive<Tropical>> {
    LatticeArchive::from_text(&read(path)?, syms).with_context(|| format!("in {}", path.display()))
}

pub fn transcripts(path: &Path) -> anyhow::Result<Transcripts> {
    read_transcripts(&read(path)?).with_context(|| format!("in {}", path.display()))
}

pub fn fst(path: &Path) -> anyhow::Result<Fst<Tropical>> {
    read_text(&read(path)?).with_context(|| format!("in {}", path.display()))
}

pub fn write_fst(path: &Path, fst: &Fst<Tropical>) -> anyhow::Result<()> {
    write(path, &write_text(fst))
}

pub fn arpa(path: &Path) -> anyhow::Result<NGramModel> {
    read_arpa(&read(path)?).with_context(|| format!("in {}", path.display()))
}
