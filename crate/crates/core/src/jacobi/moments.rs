use std::collections::HashMap;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_traits::{CheckedAdd, CheckedMul, One, Pow, Zero};
use rayon::prelude::*;

use super::{assemble_matrix, JacobiData, JacobiMatrix};
use crate::error::{Error, Result};
use crate::graph::EdgeSet;
use crate::rational::{parse_fraction, to_f64, to_fraction_string, Rational};

/// Exact moments `m_0..m_K` of a spectral measure.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MomentVector(Vec<Rational>);

impl MomentVector {
    pub fn new(moments: Vec<Rational>) -> Self {
        assert!(!moments.is_empty(), "a moment vector holds at least m_0");
        MomentVector(moments)
    }

    /// `K`, the highest order present.
    pub fn max_order(&self) -> usize {
        self.0.len() - 1
    }

    pub fn get(&self, k: usize) -> &Rational {
        &self.0[k]
    }

    pub fn as_slice(&self) -> &[Rational] {
        &self.0
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(to_f64).collect()
    }

    /// Smallest eigenvalue of the Hankel matrix `[m_{i+j}]`, `0 ≤ i, j ≤ ⌊K/2⌋`,
    /// after scaling to unit diagonal. Non-negative (up to rounding) for the
    /// moments of any measure.
    pub fn hankel_min_eigenvalue(&self) -> f64 {
        let size = self.max_order() / 2 + 1;
        let m = self.to_f64();
        let scale: Vec<f64> = (0..size)
            .map(|i| if m[2 * i] > 0.0 { m[2 * i].sqrt() } else { 1.0 })
            .collect();
        let h = DMatrix::from_fn(size, size, |i, j| m[i + j] / (scale[i] * scale[j]));
        h.symmetric_eigenvalues().min()
    }

    /// Two-column CSV `k,moment` with `p/q` fractions.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,moment\n");
        for (k, m) in self.0.iter().enumerate() {
            out.push_str(&format!("{k},{}\n", to_fraction_string(m)));
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        match lines.next() {
            Some((_, "k,moment")) => {}
            _ => return Err(Error::parse(1, "expected header `k,moment`")),
        }
        let mut moments = Vec::new();
        for (i, line) in lines {
            if line.is_empty() {
                continue;
            }
            let (k, m) = line
                .split_once(',')
                .ok_or_else(|| Error::parse(i + 1, "expected `k,moment`"))?;
            if k.parse::<usize>().ok() != Some(moments.len()) {
                return Err(Error::parse(i + 1, format!("expected k={}", moments.len())));
            }
            moments.push(parse_fraction(m).map_err(|e| Error::parse(i + 1, e.to_string()))?);
        }
        if moments.is_empty() {
            return Err(Error::parse(1, "no moments"));
        }
        Ok(MomentVector(moments))
    }
}

trait Exact: Clone + Zero + One + CheckedAdd + CheckedMul + Send + Sync {}
impl<T: Clone + Zero + One + CheckedAdd + CheckedMul + Send + Sync> Exact for T {}

/// `⟨δ_v, M^k δ_v⟩` for `k = 0..=max_k`, computed as
/// `⟨M^⌊k/2⌋ δ_v, M^⌈k/2⌉ δ_v⟩` on the ball of radius `⌈max_k/2⌉` around `v`.
/// `None` on overflow.
fn closed_walk_sums<T: Exact>(
    diag: &[T],
    rows: &[Vec<(usize, T)>],
    v: usize,
    max_k: usize,
) -> Option<Vec<T>> {
    let radius = max_k.div_ceil(2);
    let mut local: HashMap<usize, usize> = HashMap::from([(v, 0)]);
    let mut verts = vec![v];
    // layer_end[d] = number of ball vertices within distance d
    let mut layer_end = vec![1];
    for d in 0..radius {
        let start = if d == 0 { 0 } else { layer_end[d - 1] };
        for i in start..layer_end[d] {
            for (w, _) in &rows[verts[i]] {
                local.entry(*w).or_insert_with(|| {
                    verts.push(*w);
                    verts.len() - 1
                });
            }
        }
        layer_end.push(verts.len());
    }
    let local_rows: Vec<Vec<(usize, &T)>> = verts
        .iter()
        .map(|&u| {
            rows[u]
                .iter()
                .filter_map(|(w, x)| local.get(w).map(|&lw| (lw, x)))
                .collect()
        })
        .collect();

    let mut powers: Vec<Vec<T>> = Vec::with_capacity(radius + 1);
    let mut x = vec![T::zero(); verts.len()];
    x[0] = T::one();
    powers.push(x);
    for j in 0..radius {
        let prev = &powers[j];
        let mut next = vec![T::zero(); verts.len()];
        for u in 0..layer_end[j + 1] {
            let mut acc = if prev[u].is_zero() {
                T::zero()
            } else {
                diag[verts[u]].checked_mul(&prev[u])?
            };
            for &(w, a) in &local_rows[u] {
                if !prev[w].is_zero() {
                    acc = acc.checked_add(&a.checked_mul(&prev[w])?)?;
                }
            }
            next[u] = acc;
        }
        powers.push(next);
    }

    (0..=max_k)
        .map(|k| {
            let (lo, hi) = (&powers[k / 2], &powers[k - k / 2]);
            lo.iter().zip(hi).try_fold(T::zero(), |acc, (p, q)| {
                if p.is_zero() || q.is_zero() {
                    Some(acc)
                } else {
                    acc.checked_add(&p.checked_mul(q)?)
                }
            })
        })
        .collect()
}

impl JacobiMatrix {
    /// Scaled closed-walk sums at `v`: `D^k ⟨δ_v, H^k δ_v⟩`.
    fn scaled_walk_sums(&self, v: usize, max_k: usize) -> Vec<BigInt> {
        if let Some(small) = &self.small {
            if let Some(sums) = closed_walk_sums(&small.diag, &small.rows, v, max_k) {
                return sums.into_iter().map(BigInt::from).collect();
            }
        }
        closed_walk_sums(&self.int_diag, &self.int_rows, v, max_k).expect("bigint never overflows")
    }

    fn unscale(&self, sums: Vec<BigInt>, denominator: &BigInt) -> Vec<Rational> {
        let mut power = denominator.clone();
        sums.into_iter()
            .map(|s| {
                let m = Rational::new(s, power.clone());
                power *= &self.scale;
                m
            })
            .collect()
    }

    /// `⟨δ_v, H^k δ_v⟩` for `k = 0..=max_k`.
    pub fn vertex_moments(&self, v: usize, max_k: usize) -> Vec<Rational> {
        self.unscale(self.scaled_walk_sums(v, max_k), &BigInt::one())
    }

    /// [`Self::vertex_moments`] for every vertex, computed in parallel.
    pub fn all_vertex_moments(&self, max_k: usize) -> Vec<Vec<Rational>> {
        (0..self.dim())
            .into_par_iter()
            .map(|v| self.vertex_moments(v, max_k))
            .collect()
    }

    /// Moments `n⁻¹ tr(H^k)` of the normalized eigenvalue counting measure.
    pub fn trace_moments(&self, max_k: usize) -> MomentVector {
        let n = self.dim();
        let small_total = self.small.as_ref().and_then(|small| {
            (0..n)
                .into_par_iter()
                .map(|v| closed_walk_sums(&small.diag, &small.rows, v, max_k))
                .try_reduce(
                    || vec![0i128; max_k + 1],
                    |a, b| a.iter().zip(&b).map(|(x, y)| i128::checked_add(*x, *y)).collect(),
                )
        });
        let total: Vec<BigInt> = match small_total {
            Some(t) => t.into_iter().map(BigInt::from).collect(),
            None => (0..n)
                .into_par_iter()
                .map(|v| {
                    closed_walk_sums(&self.int_diag, &self.int_rows, v, max_k)
                        .expect("bigint never overflows")
                })
                .reduce(
                    || vec![BigInt::zero(); max_k + 1],
                    |a, b| a.into_iter().zip(b).map(|(x, y)| x + y).collect(),
                ),
        };
        MomentVector(self.unscale(total, &BigInt::from(n)))
    }

    /// `tr(H^k)` as an exact integer multiple check helper: `Σ_v ⟨δ_v, H^k δ_v⟩`.
    pub fn trace_power(&self, k: usize) -> Rational {
        self.trace_moments(k).get(k) * Rational::from_integer(BigInt::from(self.dim()))
    }

    /// Scale `D` with `D·H` integral.
    pub fn common_denominator(&self) -> &BigInt {
        &self.scale
    }

    #[allow(dead_code)]
    pub(crate) fn scale_power(&self, k: u32) -> BigInt {
        Pow::pow(&self.scale, k)
    }
}

/// Exact moments `m_k = n⁻¹ tr(H^k)`, `k = 0..=max_k`.
pub fn trace_power_moments<G: EdgeSet + ?Sized>(
    g: &G,
    data: &JacobiData,
    max_k: usize,
) -> Result<MomentVector> {
    Ok(assemble_matrix(g, data)?.trace_moments(max_k))
}

/// `⟨δ_v, H^k δ_v⟩`, the weighted count of closed walks of length `k` at `v`.
pub fn per_vertex_moment<G: EdgeSet + ?Sized>(
    g: &G,
    data: &JacobiData,
    v: usize,
    k: usize,
) -> Result<Rational> {
    if v >= g.vertex_count() {
        return Err(Error::InvalidArgument(format!("vertex {v} out of range")));
    }
    Ok(assemble_matrix(g, data)?.vertex_moments(v, k).swap_remove(k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Multigraph, RoseCover};
    use crate::rational::{int, ratio};

    fn dense_trace_power(m: &JacobiMatrix, k: usize) -> Rational {
        let n = m.dim();
        let h: Vec<Vec<Rational>> = (0..n).map(|u| (0..n).map(|v| m.entry(u, v)).collect()).collect();
        let mut p: Vec<Vec<Rational>> = (0..n)
            .map(|u| (0..n).map(|v| if u == v { int(1) } else { int(0) }).collect())
            .collect();
        for _ in 0..k {
            p = (0..n)
                .map(|u| {
                    (0..n)
                        .map(|v| (0..n).map(|w| &p[u][w] * &h[w][v]).sum())
                        .collect()
                })
                .collect();
        }
        (0..n).map(|u| p[u][u].clone()).sum()
    }

    #[test]
    fn traceless_without_diagonal() {
        let c = RoseCover::from_permutations(&[vec![1, 2, 0], vec![2, 0, 1]]).unwrap();
        let m = trace_power_moments(&*c, &JacobiData::unit(&*c), 5).unwrap();
        assert_eq!(m.get(0), &int(1));
        assert_eq!(m.get(1), &int(0));
    }

    #[test]
    fn cycle_second_moment_is_two() {
        for n in 3..8 {
            let g = Multigraph::cycle(n);
            let m = trace_power_moments(&g, &JacobiData::unit(&g), 2).unwrap();
            assert_eq!(m.get(2), &int(2));
        }
    }

    #[test]
    fn matches_dense_powers() {
        let g = Multigraph::new(3, vec![(0, 1), (1, 2), (2, 0), (1, 1), (0, 1)]).unwrap();
        let data = JacobiData::new(
            vec![ratio(1, 2), int(-1), ratio(2, 3)],
            vec![int(1), ratio(3, 2), ratio(1, 5), int(2), ratio(7, 4)],
        )
        .unwrap();
        let m = assemble_matrix(&g, &data).unwrap();
        let moments = m.trace_moments(7);
        for k in 0..=7 {
            assert_eq!(moments.get(k) * int(3), dense_trace_power(&m, k), "k = {k}");
        }
        assert_eq!(m.second_moment(), moments.get(2).clone());
    }

    #[test]
    fn bigint_fallback_agrees() {
        // entries ~2^40 overflow i128 by the fourth power
        let big = Rational::from_integer(BigInt::from(1u64 << 40));
        let g = Multigraph::cycle(4);
        let data = JacobiData::new(vec![big.clone(); 4], vec![big.clone(); 4]).unwrap();
        let m = assemble_matrix(&g, &data).unwrap();
        assert!(m.small.is_some());
        let moments = m.trace_moments(5);
        for k in 0..=5 {
            assert_eq!(moments.get(k) * int(4), dense_trace_power(&m, k), "k = {k}");
        }
    }

    #[test]
    fn vertex_moment_zero_is_one() {
        let g = Multigraph::cycle(5);
        assert_eq!(per_vertex_moment(&g, &JacobiData::unit(&g), 3, 0).unwrap(), int(1));
        assert!(per_vertex_moment(&g, &JacobiData::unit(&g), 5, 0).is_err());
    }

    #[test]
    fn csv_round_trip() {
        let m = MomentVector::new(vec![int(1), int(0), ratio(44, 5)]);
        let text = m.to_csv();
        assert_eq!(text, "k,moment\n0,1/1\n1,0/1\n2,44/5\n");
        assert_eq!(MomentVector::from_csv(&text).unwrap(), m);
        assert!(MomentVector::from_csv("k,moment\n1,1/1\n").is_err());
    }

    #[test]
    fn hankel_of_point_mass_is_psd() {
        // δ at 2: moments 2^k, Hankel rank one
        let m = MomentVector::new((0..7).map(|k| int(1 << k)).collect());
        assert!(m.hankel_min_eigenvalue() > -1e-12);
        // m_2 < m_1² is impossible for a probability measure
        let bad = MomentVector::new(vec![int(1), int(2), int(1)]);
        assert!(bad.hankel_min_eigenvalue() < -0.1);
    }
}
