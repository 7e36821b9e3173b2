use thiserror::Error;

/// Errors produced by the lattice and poset machinery.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("graph is disconnected: components {components:?}")]
    Disconnected { components: Vec<Vec<usize>> },
    #[error("graph has no vertices")]
    Empty,
    #[error("vertex {0} out of range")]
    UnknownVertex(usize),
    #[error("edge {0} out of range")]
    UnknownEdge(usize),
    #[error("vectors live on different hosts ({0} vs {1} coordinates)")]
    HostMismatch(usize, usize),
    #[error("vector is not a flow")]
    NotAFlow,
    #[error("vector is not integral")]
    NotIntegral,
    #[error("designated circuit is not contained in the support")]
    CircuitNotInSupport,
    #[error("orientation is not strongly connected")]
    NotStronglyConnected,
    #[error("orientation must cover exactly the non-bridge edges: {0}")]
    NotFullOrientation(String),
    #[error("orientation contains a directed cycle")]
    NotAcyclic,
    #[error("orientation contains a loop")]
    LoopInOrientation,
    #[error("vertex subset must be proper and nonempty")]
    ImproperSubset,
    #[error("right-hand side does not sum to zero")]
    Infeasible,
    #[error("host graph is not two-edge-connected")]
    NotTwoEdgeConnected,
    #[error("polyhedron is unbounded")]
    Unbounded,
    #[error("resource cap exceeded: {what} needs {needed}, cap is {cap}")]
    Cap {
        what: &'static str,
        needed: u128,
        cap: u128,
    },
    #[error("invalid rational literal {0:?}")]
    BadRational(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_cap(what: &'static str, needed: u128, cap: u128) -> Result<()> {
    if needed > cap {
        Err(Error::Cap { what, needed, cap })
    } else {
        Ok(())
    }
}
