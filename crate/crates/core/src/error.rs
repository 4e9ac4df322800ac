use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("poset has no elements")]
    Empty,
    #[error("cover ({0}, {1}) references an element outside 0..{2}")]
    InvalidIndex(usize, usize, usize),
    #[error("element {0} covers itself")]
    SelfCover(usize),
    #[error("cover ({0}, {1}) listed twice")]
    DuplicateCover(usize, usize),
    #[error("cover relation contains a cycle")]
    CyclicCovers,
    #[error("poset is not bounded: {sources} minimal and {sinks} maximal elements")]
    NotBounded { sources: usize, sinks: usize },
    #[error("poset is not graded: cover ({0}, {1}) skips a rank level")]
    NotGraded(usize, usize),
    #[error("elements {0} and {1} are not comparable")]
    NotComparable(usize, usize),
    #[error("element index {0} out of range")]
    NoSuchElement(usize),
    #[error("consecutive chain elements {0} and {1} do not form a cover")]
    NotSaturated(usize, usize),
    #[error("words have different lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("rank {rank} is not a proper rank of a poset of rank {top}")]
    InvalidRankSelection { rank: usize, top: usize },
    #[error("label index {0} is not in the label poset")]
    NoSuchLabel(usize),
    #[error("label relation is not a strict partial order")]
    InvalidLabelOrder,
    #[error("cover ({0}, {1}) has no label")]
    UnlabeledCover(usize, usize),
    #[error("cover ({0}, {1}) labeled more than once")]
    RelabeledCover(usize, usize),
    #[error("({0}, {1}) is not a cover of the poset")]
    NotACover(usize, usize),
    #[error("{0} is out of bounds")]
    OutOfBounds(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("unknown bundled poset {0:?}")]
    UnknownName(String),
    #[error("labeling has not been verified to be an EL-labeling")]
    NotElVerified,
    #[error("enumeration needs {needed} chains, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },
    #[error("integer overflow while computing {0}")]
    Overflow(&'static str),
    #[error("malformed poset document: {0}")]
    Format(String),
}
