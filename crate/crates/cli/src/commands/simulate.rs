use anyhow::Context;
use latcomb::{generate, write_transcripts, LatticeArchive, NoiseConfig};

use crate::args::SimulateArgs;
use crate::{files, Outcome};

pub fn simulate(a: &SimulateArgs) -> anyhow::Result<Outcome> {
    let cfg = NoiseConfig {
        p_delete: a.p_delete,
        p_substitute: a.p_substitute,
        p_insert: a.p_insert,
        k: a.k,
        q: a.q,
        d: a.d,
        vocab_size: a.vocab_size,
        min_len: a.min_len,
        max_len: a.max_len,
        seed: a.seed,
    };
    let corpus = generate(&cfg, a.count)?;
    std::fs::create_dir_all(&a.out_dir).with_context(|| format!("cannot create {}", a.out_dir.display()))?;

    let mut refs = Vec::with_capacity(a.count);
    let mut transcripts = Vec::with_capacity(a.count);
    let mut lattices = LatticeArchive::new();
    for u in corpus.utterances {
        refs.push((u.id.clone(), u.reference));
        transcripts.push((u.id.clone(), u.transcript));
        lattices.push(u.id, u.hypothesis)?;
    }
    files::write(&a.out_dir.join("words.txt"), &corpus.symbols.to_text())?;
    files::write(&a.out_dir.join("refs.txt"), &write_transcripts(&refs))?;
    files::write(&a.out_dir.join("transcripts.txt"), &write_transcripts(&transcripts))?;
    files::write(&a.out_dir.join("lattices.ark"), &lattices.to_text())?;
    Ok(Outcome::default())
}
