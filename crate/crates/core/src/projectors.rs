//! Swap operator and the symmetric / antisymmetric projectors on a qubit pair.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Matrix, Operator, QubitLayout, Subsystems, ONE, ZERO};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Symmetry {
    Symmetric,
    Antisymmetric,
}

/// The 4×4 permutation exchanging the two factors of a qubit pair: `S|ab⟩ = |ba⟩`.
pub fn swap_operator() -> Matrix {
    let mut s = Matrix::zeros(4);
    s[(0, 0)] = ONE;
    s[(1, 2)] = ONE;
    s[(2, 1)] = ONE;
    s[(3, 3)] = ONE;
    s
}

/// `(I ± S)/2` on a labeled qubit pair.
#[derive(Clone, Debug, PartialEq)]
pub struct PairProjector {
    kind: Symmetry,
    operator: Operator,
}

impl PairProjector {
    pub fn kind(&self) -> Symmetry {
        self.kind
    }

    pub fn pair(&self) -> (&str, &str) {
        let l = self.operator.layout().labels();
        (&l[0], &l[1])
    }

    pub fn operator(&self) -> &Operator {
        &self.operator
    }

    /// Subspace dimension: 3 for symmetric, 1 for antisymmetric.
    pub fn rank(&self) -> usize {
        match self.kind {
            Symmetry::Symmetric => 3,
            Symmetry::Antisymmetric => 1,
        }
    }
}

pub fn pair_projector(kind: Symmetry, pair: (&str, &str)) -> Result<PairProjector> {
    let layout = QubitLayout::new([pair.0, pair.1])?;
    let sign = match kind {
        Symmetry::Symmetric => 0.5,
        Symmetry::Antisymmetric => -0.5,
    };
    let id = Matrix::identity(4).scale_real(0.5);
    let m = &id + &swap_operator().scale_real(sign);
    // exact zeros keep P² = P bit-for-bit
    let m = Matrix::from_fn(4, |i, j| if m[(i, j)].norm() == 0.0 { ZERO } else { m[(i, j)] });
    Ok(PairProjector {
        kind,
        operator: Operator::new(layout, m)?,
    })
}

/// `P ⊗ I` on `layout`, with `P` acting on the pair's labels wherever they sit.
///
/// Built by composing with the identity on the remaining qubits in the
/// pair-first order and permuting back to `layout`'s order.
pub fn embed_pair_projector(p: &PairProjector, layout: &QubitLayout) -> Result<Operator> {
    let (a, b) = p.pair();
    for label in [a, b] {
        if !layout.contains(label) {
            return Err(Error::UnknownLabel(label.to_string()));
        }
    }
    let rest: Vec<&str> = layout
        .labels()
        .iter()
        .map(String::as_str)
        .filter(|l| *l != a && *l != b)
        .collect();
    let pair_first = if rest.is_empty() {
        p.operator.clone()
    } else {
        p.operator.tensor(&Operator::identity(QubitLayout::new(rest)?))?
    };
    pair_first.permute(layout.labels())
}
