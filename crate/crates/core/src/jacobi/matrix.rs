use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::JacobiData;
use crate::error::Result;
use crate::graph::EdgeSet;
use crate::rational::{common_denominator, to_f64, Rational};

/// The symmetric Jacobi matrix of a graph, stored sparsely with exact
/// entries.
///
/// Alongside the rational entries it keeps an integer form `H = M / D`
/// (with `D` the common denominator) on which the walk kernels run; a
/// machine-width copy of `M` is kept when every entry fits.
#[derive(Clone, Debug)]
pub struct JacobiMatrix {
    diag: Vec<Rational>,
    rows: Vec<Vec<(usize, Rational)>>,
    pub(crate) scale: BigInt,
    pub(crate) int_diag: Vec<BigInt>,
    pub(crate) int_rows: Vec<Vec<(usize, BigInt)>>,
    pub(crate) small: Option<SmallForm>,
}

#[derive(Clone, Debug)]
pub(crate) struct SmallForm {
    pub diag: Vec<i128>,
    pub rows: Vec<Vec<(usize, i128)>>,
}

/// Off-diagonal `(u, v)` is the sum of the couplings of all edges joining
/// `u` and `v`; diagonal `(v, v)` is `b_v` plus `2 a_e` for every loop `e`
/// at `v` (a loop can be walked in either direction).
pub fn assemble_matrix<G: EdgeSet + ?Sized>(g: &G, data: &JacobiData) -> Result<JacobiMatrix> {
    data.check_matches(g)?;
    let n = g.vertex_count();
    let mut diag: Vec<Rational> = data.b().to_vec();
    let mut off: Vec<BTreeMap<usize, Rational>> = vec![BTreeMap::new(); n];
    for (&(u, v), a) in g.edges().iter().zip(data.a()) {
        if u == v {
            diag[u] += a + a;
        } else {
            *off[u].entry(v).or_insert_with(Rational::zero) += a;
            *off[v].entry(u).or_insert_with(Rational::zero) += a;
        }
    }
    let rows: Vec<Vec<(usize, Rational)>> = off.into_iter().map(|m| m.into_iter().collect()).collect();
    Ok(JacobiMatrix::from_parts(diag, rows))
}

impl JacobiMatrix {
    fn from_parts(diag: Vec<Rational>, rows: Vec<Vec<(usize, Rational)>>) -> Self {
        let scale = common_denominator(diag.iter().chain(rows.iter().flatten().map(|(_, x)| x)));
        let to_int = |x: &Rational| (x * &scale).to_integer();
        let int_diag: Vec<BigInt> = diag.iter().map(to_int).collect();
        let int_rows: Vec<Vec<(usize, BigInt)>> = rows
            .iter()
            .map(|r| r.iter().map(|(c, x)| (*c, to_int(x))).collect())
            .collect();
        let small = (|| {
            Some(SmallForm {
                diag: int_diag.iter().map(|x| x.to_i128()).collect::<Option<_>>()?,
                rows: int_rows
                    .iter()
                    .map(|r| r.iter().map(|(c, x)| x.to_i128().map(|x| (*c, x))).collect())
                    .collect::<Option<_>>()?,
            })
        })();
        JacobiMatrix {
            diag,
            rows,
            scale,
            int_diag,
            int_rows,
            small,
        }
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn diagonal(&self) -> &[Rational] {
        &self.diag
    }

    /// Nonzero off-diagonal entries of row `u`, by column.
    pub fn row(&self, u: usize) -> &[(usize, Rational)] {
        &self.rows[u]
    }

    pub fn entry(&self, u: usize, v: usize) -> Rational {
        if u == v {
            return self.diag[u].clone();
        }
        self.rows[u]
            .binary_search_by_key(&v, |(c, _)| *c)
            .map(|i| self.rows[u][i].1.clone())
            .unwrap_or_else(|_| Rational::zero())
    }

    pub fn to_dense_f64(&self) -> DMatrix<f64> {
        let n = self.dim();
        let mut m = DMatrix::zeros(n, n);
        for u in 0..n {
            m[(u, u)] = to_f64(&self.diag[u]);
            for (v, x) in &self.rows[u] {
                m[(u, *v)] = to_f64(x);
            }
        }
        m
    }

    /// `n⁻¹ tr(H²)`: the sum of squared entries over the dimension, without
    /// forming any power.
    pub fn second_moment(&self) -> Rational {
        let mut total = BigInt::zero();
        for u in 0..self.dim() {
            total += &self.int_diag[u] * &self.int_diag[u];
            for (_, x) in &self.int_rows[u] {
                total += x * x;
            }
        }
        Rational::new(total, BigInt::from(self.dim()) * &self.scale * &self.scale)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{rose, Multigraph};
    use crate::rational::{int, ratio};

    #[test]
    fn rose_is_four() {
        let r = rose(2);
        let m = assemble_matrix(&*r, &JacobiData::unit(&*r)).unwrap();
        assert_eq!(m.dim(), 1);
        assert_eq!(m.entry(0, 0), int(4));
    }

    #[test]
    fn two_vertex_path() {
        let g = Multigraph::new(2, vec![(0, 1)]).unwrap();
        let data = JacobiData::new(vec![int(1), int(2)], vec![int(3)]).unwrap();
        let m = assemble_matrix(&g, &data).unwrap();
        assert_eq!(m.entry(0, 0), int(1));
        assert_eq!(m.entry(0, 1), int(3));
        assert_eq!(m.entry(1, 0), int(3));
        assert_eq!(m.entry(1, 1), int(2));
    }

    #[test]
    fn parallel_edges_add() {
        let g = Multigraph::new(2, vec![(0, 1), (1, 0), (0, 1)]).unwrap();
        let data =
            JacobiData::new(vec![int(0), int(0)], vec![ratio(1, 2), ratio(1, 3), int(1)]).unwrap();
        let m = assemble_matrix(&g, &data).unwrap();
        assert_eq!(m.entry(0, 1), ratio(11, 6));
        assert_eq!(m.scale, BigInt::from(6));
        assert_eq!(m.second_moment(), ratio(121, 36));
    }

    #[test]
    fn mismatched_data_rejected() {
        let g = Multigraph::cycle(3);
        let data = JacobiData::unit(&Multigraph::cycle(4));
        assert!(assemble_matrix(&g, &data).is_err());
    }
}
