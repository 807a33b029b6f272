//! Jacobi matrices on finite graphs: exact assembly, trace moments via
//! closed-walk sums, and dense floating-point spectra.

mod matrix;
mod moments;
mod spectrum;

pub use matrix::{assemble_matrix, JacobiMatrix};
pub use moments::{per_vertex_moment, trace_power_moments, MomentVector};
pub use spectrum::{cdf_distance, eigenvalues, Spectrum, DEFAULT_EIGEN_CAP};

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::graph::{ColoredMultigraph, EdgeSet};
use crate::rational::{int, Rational};

/// Diagonal value per vertex and strictly positive coupling per edge.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct JacobiData {
    b: Vec<Rational>,
    a: Vec<Rational>,
}

impl JacobiData {
    pub fn new(b: Vec<Rational>, a: Vec<Rational>) -> Result<Self> {
        if let Some((e, x)) = a.iter().enumerate().find(|(_, x)| !x.is_positive()) {
            return Err(Error::JacobiMismatch(format!(
                "coupling on edge {e} is {x}, must be positive"
            )));
        }
        Ok(JacobiData { b, a })
    }

    /// `b ≡ 0`, `a ≡ 1`.
    pub fn unit<G: EdgeSet + ?Sized>(g: &G) -> Self {
        JacobiData {
            b: vec![Rational::zero(); g.vertex_count()],
            a: vec![int(1); g.edge_count()],
        }
    }

    /// Lifts period-one data to a colored cover: every vertex gets `b` and
    /// every color-`j` edge gets `a_j`.
    pub fn lift_rose(cover: &ColoredMultigraph, params: &RoseParams) -> Result<Self> {
        if cover.ell() != params.ell() {
            return Err(Error::JacobiMismatch(format!(
                "cover has ℓ={} but data has {} couplings",
                cover.ell(),
                params.ell()
            )));
        }
        Ok(JacobiData {
            b: vec![params.b.clone(); cover.vertex_count()],
            a: cover
                .colored_edges()
                .iter()
                .map(|e| params.a[e.color - 1].clone())
                .collect(),
        })
    }

    pub fn b(&self) -> &[Rational] {
        &self.b
    }

    pub fn a(&self) -> &[Rational] {
        &self.a
    }

    pub fn check_matches<G: EdgeSet + ?Sized>(&self, g: &G) -> Result<()> {
        if self.b.len() != g.vertex_count() || self.a.len() != g.edge_count() {
            return Err(Error::JacobiMismatch(format!(
                "data for {} vertices / {} edges, graph has {} / {}",
                self.b.len(),
                self.a.len(),
                g.vertex_count(),
                g.edge_count()
            )));
        }
        Ok(())
    }
}

/// Jacobi data on the rose with `ℓ` petals: one diagonal value and one
/// coupling per petal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RoseParams {
    b: Rational,
    a: Vec<Rational>,
}

impl RoseParams {
    pub fn new(b: Rational, a: Vec<Rational>) -> Result<Self> {
        if a.is_empty() {
            return Err(Error::InvalidArgument("need at least one coupling".into()));
        }
        if let Some(x) = a.iter().find(|x| !x.is_positive()) {
            return Err(Error::JacobiMismatch(format!("coupling {x} must be positive")));
        }
        Ok(RoseParams { b, a })
    }

    pub fn unit(ell: usize) -> Self {
        RoseParams {
            b: Rational::zero(),
            a: vec![int(1); ell],
        }
    }

    pub fn ell(&self) -> usize {
        self.a.len()
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    pub fn a(&self) -> &[Rational] {
        &self.a
    }

    /// Recovers period-one data from data on a colored cover, failing if it
    /// varies between vertices or between edges of one color.
    pub fn from_cover_data(cover: &ColoredMultigraph, data: &JacobiData) -> Result<Self> {
        data.check_matches(cover)?;
        let b = data.b.first().cloned().unwrap_or_else(Rational::zero);
        if let Some(v) = data.b.iter().position(|x| *x != b) {
            return Err(Error::NonConstantData(format!("b differs at vertex {v}")));
        }
        let mut a: Vec<Option<Rational>> = vec![None; cover.ell()];
        for (e, ce) in cover.colored_edges().iter().enumerate() {
            match &a[ce.color - 1] {
                None => a[ce.color - 1] = Some(data.a[e].clone()),
                Some(x) if *x != data.a[e] => {
                    return Err(Error::NonConstantData(format!(
                        "coupling of color {} differs at edge {e}",
                        ce.color
                    )))
                }
                Some(_) => {}
            }
        }
        let a = a
            .into_iter()
            .enumerate()
            .map(|(j, x)| {
                x.ok_or_else(|| Error::NonConstantData(format!("no edge of color {}", j + 1)))
            })
            .collect::<Result<Vec<_>>>()?;
        RoseParams::new(b, a)
    }
}

/// `Γ = |b| + 2 Σ a_s`; every cover's spectrum lies in `[-Γ, Γ]`.
pub fn norm_bound(params: &RoseParams) -> Rational {
    let sum: Rational = params.a.iter().sum();
    params.b.abs() + int(2) * sum
}

/// [`norm_bound`] for data given on a cover; rejects non-constant data.
pub fn norm_bound_on_cover(cover: &ColoredMultigraph, data: &JacobiData) -> Result<Rational> {
    Ok(norm_bound(&RoseParams::from_cover_data(cover, data)?))
}
