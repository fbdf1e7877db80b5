//! Integer lattice vectors under the max norm: enumeration, primitive
//! decomposition, and parallelism tests.

use crate::error::{domain, Result};

/// Which lattice domain the sums range over.
///
/// `Orthant` restricts to the nonnegative orthant minus the origin, which
/// removes sign bookkeeping; `Full` ranges over all nonzero integer vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LatticeMode {
    Orthant,
    Full,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LatticeVector {
    coords: Vec<i64>,
    norm: u64,
}

impl LatticeVector {
    pub fn new(coords: Vec<i64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(domain("lattice vector needs at least one coordinate"));
        }
        let norm = coords.iter().map(|c| c.unsigned_abs()).max().unwrap();
        if norm == 0 {
            return Err(domain("lattice vector must be nonzero"));
        }
        Ok(LatticeVector { coords, norm })
    }

    pub fn from_slice(coords: &[i64]) -> Result<Self> {
        Self::new(coords.to_vec())
    }

    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// Max norm |v|_inf, always >= 1.
    pub fn norm(&self) -> u64 {
        self.norm
    }

    pub fn neg(&self) -> LatticeVector {
        LatticeVector {
            coords: self.coords.iter().map(|c| -c).collect(),
            norm: self.norm,
        }
    }

    pub fn dot(&self, other: &LatticeVector) -> Result<i128> {
        if self.dim() != other.dim() {
            return Err(crate::error::KgError::DimensionMismatch(format!(
                "dot of dimensions {} and {}",
                self.dim(),
                other.dim()
            )));
        }
        Ok(self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(&a, &b)| a as i128 * b as i128)
            .sum())
    }

    fn coord_gcd(&self) -> u64 {
        self.coords
            .iter()
            .fold(0u64, |g, &c| crate::arith::gcd_u(g, c.unsigned_abs()))
    }

    pub fn is_primitive(&self) -> bool {
        self.coord_gcd() == 1
    }

    /// Unique decomposition `v = k * e` with `k >= 1` and `e` the canonical
    /// primitive direction (first nonzero coordinate positive). Returns
    /// `(k, e, sign)` where `sign = +1` if `v` points along `e`, else `-1`,
    /// so that `v = sign * k * e` coordinatewise.
    pub fn primitive_decomposition(&self) -> (u64, LatticeVector, i8) {
        let g = self.coord_gcd();
        let mut e: Vec<i64> = self.coords.iter().map(|&c| c / g as i64).collect();
        let lead = *e.iter().find(|&&c| c != 0).unwrap();
        let sign = if lead > 0 { 1i8 } else { -1 };
        if sign < 0 {
            for c in &mut e {
                *c = -*c;
            }
        }
        (g, LatticeVector::new(e).unwrap(), sign)
    }

    /// The canonical primitive direction of this vector's line.
    pub fn direction(&self) -> LatticeVector {
        self.primitive_decomposition().1
    }

    pub fn is_parallel(&self, other: &LatticeVector) -> bool {
        self.dim() == other.dim() && self.direction() == other.direction()
    }

    /// sign(q1 . q2) for parallel vectors: +1 same direction, -1 opposite.
    pub fn parallel_sign(&self, other: &LatticeVector) -> Result<i8> {
        if !self.is_parallel(other) {
            return Err(domain("parallel_sign on nonparallel vectors"));
        }
        let (_, _, s1) = self.primitive_decomposition();
        let (_, _, s2) = other.primitive_decomposition();
        Ok(s1 * s2)
    }
}

/// All nonzero vectors in the chosen domain with `1 <= |v| <= q_max`.
pub fn vectors_up_to(n: u32, q_max: u64, mode: LatticeMode) -> Vec<LatticeVector> {
    let mut out = Vec::new();
    let range: Vec<i64> = match mode {
        LatticeMode::Full => (-(q_max as i64)..=q_max as i64).collect(),
        LatticeMode::Orthant => (0..=q_max as i64).collect(),
    };
    let mut cur = vec![0i64; n as usize];
    fill(&range, &mut cur, 0, &mut out);
    out
}

fn fill(range: &[i64], cur: &mut Vec<i64>, idx: usize, out: &mut Vec<LatticeVector>) {
    if idx == cur.len() {
        if cur.iter().any(|&c| c != 0) {
            out.push(LatticeVector::new(cur.clone()).unwrap());
        }
        return;
    }
    for &v in range {
        cur[idx] = v;
        fill(range, cur, idx + 1, out);
    }
}

/// Vectors with max norm exactly `q`.
pub fn shell_vectors(n: u32, q: u64, mode: LatticeMode) -> Vec<LatticeVector> {
    vectors_up_to(n, q, mode)
        .into_iter()
        .filter(|v| v.norm() == q)
        .collect()
}

/// Primitive vectors with `1 <= |v| <= q_max`: in full mode, exactly one
/// canonical representative per line through the origin (first nonzero
/// coordinate positive); in orthant mode, every primitive orthant vector.
pub fn primitive_vectors(n: u32, q_max: u64, mode: LatticeMode) -> Vec<LatticeVector> {
    vectors_up_to(n, q_max, mode)
        .into_iter()
        .filter(|v| {
            v.is_primitive()
                && (mode == LatticeMode::Orthant
                    || *v.coords.iter().find(|&&c| c != 0).unwrap() > 0)
        })
        .collect()
}
