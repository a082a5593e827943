//! On-disk state format: JSON files holding a pure amplitude vector, a
//! density matrix, or a bare Schmidt vector. Complex numbers are
//! two-element `[re, im]` arrays so any language can parse them.

use serde::{Deserialize, Serialize};

use quent_core::linalg::Complex64;
use quent_core::states::{
    from_schmidt, BipartiteDims, DensityMatrix, PureState, SchmidtForm, State,
};
use quent_core::{ComplexMatrix, Error, Result};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum StateFile {
    Pure {
        dims: [usize; 2],
        data: Vec<[f64; 2]>,
    },
    Mixed {
        dims: [usize; 2],
        data: Vec<Vec<[f64; 2]>>,
    },
    Schmidt {
        d: usize,
        k: Vec<f64>,
    },
}

impl StateFile {
    pub fn from_pure(psi: &PureState) -> Self {
        StateFile::Pure {
            dims: [psi.dims().m(), psi.dims().n()],
            data: psi.amplitudes().iter().map(|z| [z.re, z.im]).collect(),
        }
    }

    pub fn from_mixed(rho: &DensityMatrix) -> Self {
        let total = rho.dims().total();
        let data = (0..total)
            .map(|i| {
                (0..total)
                    .map(|j| {
                        let z = rho.matrix().get(i, j);
                        [z.re, z.im]
                    })
                    .collect()
            })
            .collect();
        StateFile::Mixed {
            dims: [rho.dims().m(), rho.dims().n()],
            data,
        }
    }

    pub fn from_schmidt_form(k: &SchmidtForm) -> Self {
        StateFile::Schmidt {
            d: k.d(),
            k: k.coefficients().to_vec(),
        }
    }

    /// Validate and convert into a core state. Schmidt vectors become the
    /// canonical d⊗d pure state Σ k_i|i,i⟩.
    pub fn into_state(self) -> Result<State> {
        match self {
            StateFile::Pure { dims, data } => {
                let d = BipartiteDims::new(dims[0], dims[1])?;
                let amplitudes = data
                    .iter()
                    .map(|[re, im]| Complex64::new(*re, *im))
                    .collect();
                Ok(State::Pure(PureState::new(d, amplitudes)?))
            }
            StateFile::Mixed { dims, data } => {
                let d = BipartiteDims::new(dims[0], dims[1])?;
                let total = d.total();
                if data.len() != total || data.iter().any(|row| row.len() != total) {
                    return Err(Error::Dimension(format!(
                        "mixed state for {}x{} needs a {total}x{total} matrix",
                        dims[0], dims[1]
                    )));
                }
                let entries = data
                    .iter()
                    .flat_map(|row| row.iter().map(|[re, im]| Complex64::new(*re, *im)))
                    .collect();
                let matrix = ComplexMatrix::new(total, total, entries)?;
                Ok(State::Mixed(DensityMatrix::new(d, matrix)?))
            }
            StateFile::Schmidt { d, k } => {
                let dims = BipartiteDims::new(d, d)?;
                let form = SchmidtForm::new(k)?;
                Ok(State::Pure(from_schmidt(&form, dims)?))
            }
        }
    }

    /// The state as a density matrix (pure states become projectors).
    pub fn into_density_matrix(self) -> Result<DensityMatrix> {
        match self.into_state()? {
            State::Pure(psi) => Ok(psi.projector()),
            State::Mixed(rho) => Ok(rho),
        }
    }
}

pub fn read_state_file(path: &std::path::Path) -> std::result::Result<StateFile, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("cannot parse {}: {e}", path.display()))
}
