use super::{assemble_matrix, JacobiData, JacobiMatrix};
use crate::error::{Error, Result};
use crate::graph::EdgeSet;
use crate::rational::format_sig12;

pub const DEFAULT_EIGEN_CAP: usize = 20_000;

/// Eigenvalues with multiplicity, nondecreasing.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum(Vec<f64>);

impl Spectrum {
    /// Sorts the values; NaNs are rejected.
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if values.iter().any(|x| x.is_nan()) {
            return Err(Error::Eigen("NaN eigenvalue".into()));
        }
        values.sort_by(f64::total_cmp);
        Ok(Spectrum(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `Σ λ_i^k`.
    pub fn power_sum(&self, k: u32) -> f64 {
        self.0.iter().map(|x| x.powi(k as i32)).sum()
    }

    /// `Σ |λ_i|^k`, the natural scale for [`Self::power_sum`].
    pub fn abs_power_sum(&self, k: u32) -> f64 {
        self.0.iter().map(|x| x.abs().powi(k as i32)).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// One value per line, 12 significant digits.
    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(self.0.len() * 16);
        for x in &self.0 {
            out.push_str(&format_sig12(*x));
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let values = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty())
            .map(|(i, l)| {
                l.trim()
                    .parse::<f64>()
                    .map_err(|e| Error::parse(i + 1, e.to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        Spectrum::new(values)
    }
}

impl JacobiMatrix {
    /// Dense symmetric eigensolve, refused above `cap` rows.
    pub fn eigenvalues(&self, cap: usize) -> Result<Spectrum> {
        let n = self.dim();
        if n > cap {
            return Err(Error::CapExceeded {
                what: "eigensolve",
                requested: n as u128,
                cap,
            });
        }
        let values = self.to_dense_f64().symmetric_eigenvalues();
        Spectrum::new(values.iter().copied().collect())
    }
}

pub fn eigenvalues<G: EdgeSet + ?Sized>(g: &G, data: &JacobiData, cap: usize) -> Result<Spectrum> {
    assemble_matrix(g, data)?.eigenvalues(cap)
}

/// Kolmogorov distance between the empirical CDFs of two spectra.
pub fn cdf_distance(s1: &Spectrum, s2: &Spectrum) -> f64 {
    assert!(!s1.is_empty() && !s2.is_empty(), "spectra must be nonempty");
    let (a, b) = (s1.values(), s2.values());
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut best: f64 = 0.0;
    while i < a.len() || j < b.len() {
        // advance past every value equal to the next breakpoint
        let x = match (a.get(i), b.get(j)) {
            (Some(&p), Some(&q)) => p.min(q),
            (Some(&p), None) => p,
            (None, Some(&q)) => q,
            (None, None) => unreachable!(),
        };
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        best = best.max((i as f64 / na - j as f64 / nb).abs());
    }
    best
}
