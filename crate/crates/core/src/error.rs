use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PtolemyError {
    #[error("malformed document: {0}")]
    Malformed(String),
    #[error("tet {tet} face {face}: gluing not involutive")]
    NotInvolutive { tet: usize, face: usize },
    #[error("tet {tet} face {face}: unglued face")]
    Unglued { tet: usize, face: usize },
    #[error("tet {tet} face {face}: permutation not a bijection")]
    BadPermutation { tet: usize, face: usize },
    #[error("tet {tet} face {face}: neighbor {neighbor} out of range")]
    BadNeighbor { tet: usize, face: usize, neighbor: usize },
    #[error("tet {tet} face {face}: face glued to itself")]
    SelfGlued { tet: usize, face: usize },
    #[error("edge class {0} is identified with its own reverse")]
    NonOrientableEdge(usize),
    #[error("triangulation is not consistently oriented")]
    NotOriented,
    #[error("tet {tet} face {face}: non-embedded face, move undefined")]
    NonEmbeddedFace { tet: usize, face: usize },
    #[error("cusp decoration: {0}")]
    Decoration(String),
    #[error("partition: {0}")]
    Partition(String),
    #[error("obstruction class index {0} out of range")]
    NoSuchClass(usize),
    #[error("representation: {0}")]
    Representation(String),
    #[error("path: {0}")]
    Path(String),
    #[error(transparent)]
    Algebra(#[from] calg::CalgError),
}

pub type Result<T> = std::result::Result<T, PtolemyError>;
