//! GKZ configurations `A ⊂ Z^r` and rational parameter vectors.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::cone::Triangulation;
use crate::error::{GkzError, Result};
use crate::lattice::{
    self, dot_int_rat, elementary_divisors, left_kernel, solve_rational, IntMatrix, IntVector,
    RatVector,
};

/// A validated configuration: generators `a_1..a_N` spanning `Z^r`, lying on
/// the hyperplane `h = 1`, with the relation lattice `L` precomputed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AConfiguration {
    rank: usize,
    generators: Vec<IntVector>,
    grading: RatVector,
    relations: IntMatrix,
}

impl AConfiguration {
    pub fn new(vectors: Vec<IntVector>) -> Result<Self> {
        let Some(first) = vectors.first() else {
            return Err(GkzError::InvalidInput("empty configuration".into()));
        };
        let rank = first.len();
        if rank == 0 {
            return Err(GkzError::InvalidInput("generators of dimension 0".into()));
        }
        if let Some(i) = vectors.iter().position(|v| v.len() != rank) {
            return Err(GkzError::InvalidInput(format!(
                "generator {} has dimension {}, expected {rank}",
                i + 1,
                vectors[i].len()
            )));
        }
        // N x r, row i = a_i
        let m = IntMatrix::from_rows(vectors.clone(), rank);

        let divisors = elementary_divisors(&m);
        if divisors.len() < rank || divisors.iter().any(|d| !d.is_one()) {
            return Err(GkzError::SpanDeficient {
                rank,
                divisors: divisors.iter().map(ToString::to_string).collect(),
            });
        }

        let ones = vec![BigRational::one(); vectors.len()];
        let grading = solve_rational(&m, &ones).ok_or(GkzError::NoGradingForm)?;

        let relations = left_kernel(&m);
        Ok(AConfiguration {
            rank,
            generators: vectors,
            grading,
            relations,
        })
    }

    pub fn from_i64(vectors: &[&[i64]]) -> Result<Self> {
        Self::new(vectors.iter().map(|v| lattice::int_vec(v)).collect())
    }

    /// Ambient rank `r`.
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Number of generators `N`.
    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn generators(&self) -> &[IntVector] {
        &self.generators
    }

    pub fn generator(&self, i: usize) -> &IntVector {
        &self.generators[i]
    }

    pub fn grading(&self) -> &RatVector {
        &self.grading
    }

    /// Rows form a basis of `L = {l in Z^N : sum l_i a_i = 0}`.
    pub fn relations(&self) -> &IntMatrix {
        &self.relations
    }

    /// `N x r` matrix with rows `a_i`.
    pub fn generator_rows(&self) -> IntMatrix {
        IntMatrix::from_rows(self.generators.clone(), self.rank)
    }

    /// `r x N` matrix with columns `a_i`.
    pub fn generator_columns(&self) -> IntMatrix {
        IntMatrix::from_columns(&self.generators)
    }

    pub fn degree(&self, x: &[BigRational]) -> BigRational {
        x.iter()
            .zip(&self.grading)
            .fold(BigRational::zero(), |acc, (a, b)| acc + a * b)
    }

    /// `psi(m) = sum m_i a_i`.
    pub fn psi(&self, m: &[BigRational]) -> RatVector {
        assert_eq!(m.len(), self.len(), "psi expects a vector of length N");
        let mut out = vec![BigRational::zero(); self.rank];
        for (mi, a) in m.iter().zip(&self.generators) {
            if mi.is_zero() {
                continue;
            }
            for (o, x) in out.iter_mut().zip(a) {
                *o += mi * x;
            }
        }
        out
    }

    pub fn psi_int(&self, m: &[BigInt]) -> IntVector {
        assert_eq!(m.len(), self.len(), "psi expects a vector of length N");
        let mut out = vec![BigInt::zero(); self.rank];
        for (mi, a) in m.iter().zip(&self.generators) {
            for (o, x) in out.iter_mut().zip(a) {
                *o += mi * x;
            }
        }
        out
    }

    /// A preimage `gamma` of `alpha` under `psi`, with free coordinates zero.
    pub fn gamma_lift(&self, alpha: &ParameterVector) -> RatVector {
        solve_rational(&self.generator_columns(), alpha.values())
            .expect("psi is onto Q^r for a spanning configuration")
    }
}

/// Validates that `vectors` span `Z^r` and admit a grading form.
pub fn build_configuration(vectors: Vec<IntVector>) -> Result<AConfiguration> {
    AConfiguration::new(vectors)
}

/// A rational parameter vector together with its common denominator `D`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ParameterVector {
    alpha: RatVector,
    denominator: BigInt,
}

impl ParameterVector {
    pub fn new(alpha: RatVector) -> Self {
        let denominator = alpha.iter().fold(BigInt::one(), |d, x| d.lcm(x.denom()));
        ParameterVector { alpha, denominator }
    }

    pub fn from_fractions(parts: &[(i64, i64)]) -> Self {
        Self::new(
            parts
                .iter()
                .map(|&(n, d)| crate::scalar::rat(n, d))
                .collect(),
        )
    }

    pub fn values(&self) -> &RatVector {
        &self.alpha
    }

    pub fn len(&self) -> usize {
        self.alpha.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alpha.is_empty()
    }

    /// Least common denominator of the coordinates.
    pub fn denominator(&self) -> &BigInt {
        &self.denominator
    }

    pub fn is_integral(&self) -> bool {
        self.denominator.is_one()
    }

    /// `D * alpha`, an integer vector.
    pub fn scaled_numerators(&self) -> IntVector {
        self.alpha
            .iter()
            .map(|x| (x * &self.denominator).to_integer())
            .collect()
    }

    pub fn scale(&self, k: &BigInt) -> ParameterVector {
        let kq = BigRational::from_integer(k.clone());
        ParameterVector::new(self.alpha.iter().map(|x| x * &kq).collect())
    }

    pub fn shift(&self, z: &[BigInt]) -> ParameterVector {
        ParameterVector::new(
            self.alpha
                .iter()
                .zip(z)
                .map(|(x, k)| x + BigRational::from_integer(k.clone()))
                .collect(),
        )
    }
}

/// Whether `Z_{>=0} A = C(A) ∩ Z^r`.
///
/// Every lattice point of `C(A)` is a nonnegative integer combination of one
/// simplex's generators plus a point of that simplex's half-open
/// parallelepiped, so it suffices to test the parallelepiped points.
pub fn check_saturation(cfg: &AConfiguration, tri: &Triangulation) -> bool {
    let zero = ParameterVector::new(vec![BigRational::zero(); cfg.rank()]);
    let mut memo = HashMap::new();
    tri.simplices().iter().all(|s| {
        s.block_points(&zero)
            .iter()
            .all(|x| in_semigroup(cfg, x, &mut memo))
    })
}

/// Membership in `Z_{>=0} A` by exhaustive descent: since `h(a_i) = 1`, a
/// representation of `x` uses exactly `h(x)` generators.
pub fn in_semigroup(
    cfg: &AConfiguration,
    x: &[BigInt],
    memo: &mut HashMap<IntVector, bool>,
) -> bool {
    if let Some(&known) = memo.get(x) {
        return known;
    }
    let deg = dot_int_rat(x, cfg.grading());
    let result = if !deg.is_integer() || deg < BigRational::zero() {
        false
    } else if deg.is_zero() {
        x.iter().all(Zero::is_zero)
    } else {
        cfg.generators().iter().any(|a| {
            let y: IntVector = x.iter().zip(a).map(|(u, v)| u - v).collect();
            in_semigroup(cfg, &y, memo)
        })
    };
    memo.insert(x.to_vec(), result);
    result
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cone::triangulate;
    use crate::lattice::{hnf, int_vec};
    use crate::scalar::rat;

    pub(crate) fn gauss() -> AConfiguration {
        AConfiguration::from_i64(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[1, 1, -1]]).unwrap()
    }

    fn same_lattice(a: &IntMatrix, b: &IntMatrix) -> bool {
        hnf(a).h == hnf(b).h
    }

    #[test]
    fn gauss_configuration() {
        let cfg = gauss();
        assert_eq!(cfg.rank(), 3);
        assert_eq!(cfg.len(), 4);
        assert_eq!(cfg.grading(), &vec![rat(1, 1); 3]);
        let expect = IntMatrix::from_i64(&[&[-1, -1, 1, 1]]);
        assert!(same_lattice(cfg.relations(), &expect));
    }

    #[test]
    fn appell_f2_relations() {
        let cfg = AConfiguration::from_i64(&[
            &[1, 0, 0, 0, 0],
            &[0, 1, 0, 0, 0],
            &[0, 0, 1, 0, 0],
            &[0, 0, 0, 1, 0],
            &[0, 0, 0, 0, 1],
            &[1, 1, 0, -1, 0],
            &[1, 0, 1, 0, -1],
        ])
        .unwrap();
        let expect = IntMatrix::from_i64(&[&[-1, -1, 0, 1, 0, 1, 0], &[-1, 0, -1, 0, 1, 0, 1]]);
        assert!(same_lattice(cfg.relations(), &expect));
    }

    #[test]
    fn horn_g3_grading() {
        let cfg = AConfiguration::from_i64(&[&[-1, 2], &[0, 1], &[1, 0], &[2, -1]]).unwrap();
        assert_eq!(cfg.grading(), &vec![rat(1, 1), rat(1, 1)]);
        assert_eq!(cfg.relations().nrows(), 2);
    }

    #[test]
    fn rejects_span_deficient() {
        assert!(matches!(
            AConfiguration::from_i64(&[&[2]]),
            Err(GkzError::SpanDeficient { .. })
        ));
        assert!(matches!(
            AConfiguration::from_i64(&[&[1, 0], &[1, 2]]),
            Err(GkzError::SpanDeficient { .. })
        ));
    }

    #[test]
    fn rejects_confluent() {
        // (1,0),(0,1),(1,1) spans Z^2 but no h with h = 1 on all three
        assert_eq!(
            AConfiguration::from_i64(&[&[1, 0], &[0, 1], &[1, 1]]),
            Err(GkzError::NoGradingForm)
        );
    }

    #[test]
    fn rejects_ragged_and_empty() {
        assert!(AConfiguration::new(vec![]).is_err());
        assert!(AConfiguration::from_i64(&[&[1, 0], &[1]]).is_err());
    }

    #[test]
    fn psi_examples() {
        let cfg = gauss();
        let e1 = vec![rat(1, 1), rat(0, 1), rat(0, 1), rat(0, 1)];
        assert_eq!(cfg.psi(&e1), vec![rat(1, 1), rat(0, 1), rat(0, 1)]);
        assert_eq!(cfg.psi_int(&int_vec(&[-1, -1, 1, 1])), int_vec(&[0, 0, 0]));
        let (a, b, c) = (rat(1, 3), rat(2, 7), rat(5, 11));
        let gamma = vec![-a.clone(), -b.clone(), &c - rat(1, 1), rat(0, 1)];
        assert_eq!(cfg.psi(&gamma), vec![-a, -b, c - rat(1, 1)]);
    }

    #[test]
    fn gamma_lift_examples() {
        let cfg = gauss();
        let zero = ParameterVector::new(vec![rat(0, 1); 3]);
        assert_eq!(cfg.gamma_lift(&zero), vec![rat(0, 1); 4]);

        let alpha = ParameterVector::new(vec![rat(-1, 3), rat(-2, 7), rat(-6, 11)]);
        let gamma = cfg.gamma_lift(&alpha);
        assert_eq!(&cfg.psi(&gamma), alpha.values());
        assert_eq!(gamma[3], rat(0, 1));
    }

    #[test]
    fn parameter_denominator() {
        let p = ParameterVector::from_fractions(&[(1, 10), (7, 10), (9, 10), (3, 5), (1, 5)]);
        assert_eq!(p.denominator(), &BigInt::from(10));
        let q = ParameterVector::from_fractions(&[(2, 1), (-3, 1)]);
        assert!(q.is_integral());
        assert_eq!(p.scale(&BigInt::from(10)).denominator(), &BigInt::one());
    }

    #[test]
    fn saturation_examples() {
        let cfg = gauss();
        assert!(check_saturation(&cfg, &triangulate(&cfg)));
        let g3 = AConfiguration::from_i64(&[&[-1, 2], &[0, 1], &[1, 0], &[2, -1]]).unwrap();
        assert!(check_saturation(&g3, &triangulate(&g3)));
        // (1,2) lies in the cone of (1,0),(1,3) but is not a sum of generators
        let gap = AConfiguration::from_i64(&[&[1, 0], &[1, 1], &[1, 3]]).unwrap();
        assert!(!check_saturation(&gap, &triangulate(&gap)));
    }
}
