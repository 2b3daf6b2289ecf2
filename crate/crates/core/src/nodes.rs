//! Node sets generating Bernstein–Vandermonde matrices.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Strictly increasing nodes `0 < x_1 < … < x_{l+1} < 1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct NodeSet(Vec<f64>);

impl NodeSet {
    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Never true for a validated set; present for API symmetry with `len`.
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `l`, the index of the last node when counting from zero.
    pub fn l(&self) -> usize {
        self.0.len() - 1
    }

    /// Largest admissible basis degree for this node set.
    pub fn max_degree(&self) -> usize {
        self.l()
    }
}

impl TryFrom<Vec<f64>> for NodeSet {
    type Error = Error;

    fn try_from(raw: Vec<f64>) -> Result<Self> {
        check_ordered(&raw, |x| *x > 0.0 && *x < 1.0, |x| *x)?;
        Ok(NodeSet(raw))
    }
}

impl From<NodeSet> for Vec<f64> {
    fn from(n: NodeSet) -> Self {
        n.0
    }
}

/// Checks a raw node list. Values are passed through unchanged.
pub fn validate_nodes(raw: &[f64]) -> Result<NodeSet> {
    NodeSet::try_from(raw.to_vec())
}

/// Shared ordering check for double and exact node sets. Range violations
/// are reported before ordering violations at the same position.
pub(crate) fn check_ordered<T: PartialOrd>(
    raw: &[T],
    in_range: impl Fn(&T) -> bool,
    display: impl Fn(&T) -> f64,
) -> Result<()> {
    if raw.is_empty() {
        return Err(Error::Empty);
    }
    for (index, x) in raw.iter().enumerate() {
        // NaN fails the range test too.
        if !in_range(x) {
            return Err(Error::OutOfRange {
                index,
                value: display(x),
            });
        }
    }
    for (index, w) in raw.windows(2).enumerate() {
        if w[0] >= w[1] {
            return Err(Error::NonMonotonic { index });
        }
    }
    Ok(())
}

/// Degree `n` of the Bernstein basis `{C(n,i)(1-x)^(n-i) x^i}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisDegree(usize);

impl BasisDegree {
    /// Fails with [`Error::DegreeExceedsRows`] when `n > l`.
    pub fn new(n: usize, nodes: &NodeSet) -> Result<Self> {
        Self::for_len(n, nodes.len())
    }

    pub(crate) fn for_len(n: usize, node_count: usize) -> Result<Self> {
        if n + 1 > node_count {
            return Err(Error::DegreeExceedsRows {
                degree: n,
                max: node_count.saturating_sub(1),
            });
        }
        Ok(BasisDegree(n))
    }

    pub fn get(self) -> usize {
        self.0
    }
}

/// Directly evaluated Bernstein basis value `C(n,j) x^j (1-x)^(n-j)`.
pub fn bernstein(n: usize, j: usize, x: f64) -> f64 {
    let mut c = 1.0;
    for k in 0..j {
        c = c * (n - k) as f64 / (k + 1) as f64;
    }
    c * x.powi(j as i32) * (1.0 - x).powi((n - j) as i32)
}
