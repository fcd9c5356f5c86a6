use crate::error::{Error, Result};

use super::grid::SampledWavefunction;

/// Which integral [`quadrature`] evaluates.
#[derive(Debug, Clone, Copy)]
pub enum Moment<'a> {
    /// `∫ |f|² dp`
    Norm,
    /// `∫ p |f|² dp / ∫ |f|² dp`
    Mean,
    /// `Re ∫ f* g dp`; both operands must share a grid.
    Overlap(&'a SampledWavefunction),
}

pub fn quadrature(moment: Moment<'_>, f: &SampledWavefunction) -> Result<f64> {
    let grid = f.grid();
    match moment {
        Moment::Norm => Ok(f.density().integral()),
        Moment::Mean => {
            let density = f.density();
            let norm = density.integral();
            if norm <= 0.0 {
                return Err(Error::ZeroProbability {
                    norm,
                    threshold: 0.0,
                });
            }
            Ok(density.mean())
        }
        Moment::Overlap(g) => {
            if g.grid() != grid {
                return Err(Error::GridMismatch(format!(
                    "overlap operands on {:?} and {:?}",
                    grid,
                    g.grid()
                )));
            }
            let products: Vec<f64> = f
                .values()
                .iter()
                .zip(g.values())
                .map(|(a, b)| (a.conj() * b).re)
                .collect();
            grid.integrate(&products)
        }
    }
}
