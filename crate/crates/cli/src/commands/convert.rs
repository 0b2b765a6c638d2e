use anyhow::{bail, Context};
use latcomb::algo::{determinize, minimize, project_output, remove_epsilons, scale_weights_to_one};
use latcomb::Tropical;
use latcomb::text::{read_text, read_text_symbolic, write_text, write_text_symbolic};

use crate::args::{FstConvertArgs, FstOp};
use crate::{files, Outcome};

pub fn convert(a: &FstConvertArgs) -> anyhow::Result<Outcome> {
    let syms = a.syms.as_deref().map(files::symbols).transpose()?;
    if (a.symbolic_in || a.symbolic_out) && syms.is_none() {
        bail!("--symbolic-in and --symbolic-out need --syms");
    }
    let text = files::read(&a.input)?;
    let mut fst: latcomb::Fst<Tropical> = match (&syms, a.symbolic_in) {
        (Some(t), true) => read_text_symbolic::<Tropical>(&text, t),
        _ => read_text::<Tropical>(&text),
    }
    .with_context(|| format!("in {}", a.input.display()))?;
    if let Some(t) = &syms {
        fst.set_symbols(Some(t.clone()));
        fst.validate()?;
    }
    for op in &a.ops {
        fst = match op {
            FstOp::Rmeps => remove_epsilons(&fst)?,
            FstOp::Det => determinize(&fst)?,
            FstOp::Min => minimize(&fst)?,
            FstOp::Proj => project_output(&fst),
            FstOp::Trim => fst.trim(),
            FstOp::Unweight => scale_weights_to_one(&fst),
        };
    }
    let out = match (&syms, a.symbolic_out) {
        (Some(t), true) => write_text_symbolic(&fst, t)?,
        _ => write_text(&fst),
    };
    files::write(&a.out, &out)?;
    Ok(Outcome::default())
}
