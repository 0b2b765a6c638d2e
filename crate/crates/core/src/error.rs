use crate::fst::Label;

/// Errors raised by machine construction, the algorithms and the file formats.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("the machines use different symbol tables")]
    SymbolTableMismatch,
    #[error("the machine contains an epsilon cycle")]
    EpsilonCycle,
    #[error("the machine is cyclic; an acyclic machine is required")]
    Cyclic,
    #[error("an acceptor is required (input and output labels must agree)")]
    NotAcceptor,
    #[error("a deterministic acceptor is required")]
    NotDeterministic,
    #[error("an epsilon-free machine is required")]
    NotEpsilonFree,
    #[error("the machine has more than {cap} paths; prune it first or raise the cap")]
    PathCapExceeded { cap: usize },
    #[error("unknown symbol {0:?}")]
    UnknownSymbol(String),
    #[error("label {0} is not in the symbol table")]
    UnknownLabel(Label),
    #[error("epsilon is not allowed in a word sequence")]
    UnexpectedEpsilon,
    #[error("the vocabulary is empty")]
    EmptyVocabulary,
    #[error("invalid edit costs: {0}")]
    InvalidEditCosts(String),
    #[error("the machine accepts no strings")]
    EmptyLanguage,
    #[error("utterance {utterance:?}: no path of the lattice is accepted by the grammar")]
    NoGrammarPath { utterance: String },
    #[error("utterance ids do not match; only in the first set: {only_first:?}; only in the second set: {only_second:?}")]
    IdMismatch {
        only_first: Vec<String>,
        only_second: Vec<String>,
    },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
