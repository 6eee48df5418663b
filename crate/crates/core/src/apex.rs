//! Apex points of `K_alpha = (alpha + Z^r) ∩ C(A)`, the signature
//! `sigma(A, alpha)`, and the conjugate sweep deciding algebraicity.
//!
//! A point `p ∈ K_alpha` is an apex point iff `p ∈ C(A)` and `p - a_i ∉ C(A)`
//! for every generator. Every apex point lies in the half-open fundamental
//! block of some simplex of a triangulation (otherwise subtracting a spanning
//! generator stays inside that simplicial cone), so the search enumerates
//! the `|det|` points of `alpha + Z^r` in each block and filters them.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::asystem::{AConfiguration, ParameterVector};
use crate::cone::{self, FacetSystem, Triangulation};
use crate::error::Result;
use crate::lattice::{dot_int, IntVector, RatVector};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ApexReport {
    pub alpha: ParameterVector,
    /// Sorted lexicographically, duplicate-free.
    pub apex_points: Vec<RatVector>,
    pub signature: usize,
    pub volume: BigInt,
    /// `signature == volume`.
    pub maximal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraicityVerdict {
    pub alpha: ParameterVector,
    pub irreducible: bool,
    /// Reports for `1 <= k < D` with `gcd(k, D) = 1` (`{1}` when `D = 1`);
    /// empty when the system is reducible.
    pub per_k: BTreeMap<BigInt, ApexReport>,
    pub algebraic: bool,
}

/// Apex points of `K_alpha` by fundamental-block search.
pub fn apex_points(
    cfg: &AConfiguration,
    fs: &FacetSystem,
    tri: &Triangulation,
    alpha: &ParameterVector,
) -> ApexReport {
    let numerators = apex_numerators(cfg, fs, tri, alpha);
    let d = BigRational::from_integer(alpha.denominator().clone());
    let apex_points: Vec<RatVector> = numerators
        .into_iter()
        .map(|x| {
            x.into_iter()
                .map(|xi| BigRational::from_integer(xi) / &d)
                .collect()
        })
        .collect();
    let volume = tri.total().clone();
    let signature = apex_points.len();
    ApexReport {
        alpha: alpha.clone(),
        maximal: BigInt::from(signature) == volume,
        apex_points,
        signature,
        volume,
    }
}

/// Apex points scaled by `alpha.denominator()`, in lexicographic order.
pub(crate) fn apex_numerators(
    cfg: &AConfiguration,
    fs: &FacetSystem,
    tri: &Triangulation,
    alpha: &ParameterVector,
) -> BTreeSet<IntVector> {
    let d = alpha.denominator();
    // shifts[i][j] = phi_j(d * a_i)
    let shifts: Vec<Vec<BigInt>> = cfg
        .generators()
        .iter()
        .map(|a| fs.normals().map(|n| dot_int(n, a) * d).collect())
        .collect();
    let mut found = BTreeSet::new();
    for simplex in tri.simplices() {
        for x in simplex.block_points(alpha) {
            let values: Vec<BigInt> = fs.normals().map(|n| dot_int(n, &x)).collect();
            if values.iter().any(Signed::is_negative) {
                continue;
            }
            let apex = shifts
                .iter()
                .all(|s| values.iter().zip(s).any(|(v, t)| v < t));
            if apex {
                found.insert(x);
            }
        }
    }
    found
}

/// `sigma(A, alpha)`: the number of apex points.
pub fn signature(cfg: &AConfiguration, alpha: &ParameterVector) -> Result<usize> {
    Ok(GkzSystem::new(cfg.clone())?.signature(alpha))
}

/// Irreducibility first, then `sigma(A, k alpha)` for every `k` coprime to
/// the common denominator.
pub fn decide_algebraic(
    cfg: &AConfiguration,
    alpha: &ParameterVector,
) -> Result<AlgebraicityVerdict> {
    Ok(GkzSystem::new(cfg.clone())?.decide_algebraic(alpha))
}

/// `1 <= k < D` with `gcd(k, D) = 1`, or `[1]` when `D = 1`.
pub fn conjugate_multipliers(denominator: &BigInt) -> Vec<BigInt> {
    if denominator.is_one() {
        return vec![BigInt::one()];
    }
    let mut ks = Vec::new();
    let mut k = BigInt::one();
    while &k < denominator {
        if k.gcd(denominator).is_one() {
            ks.push(k.clone());
        }
        k += 1;
    }
    ks
}

/// A configuration with its facets and triangulation computed once.
#[derive(Clone, Debug)]
pub struct GkzSystem {
    cfg: AConfiguration,
    facets: FacetSystem,
    triangulation: Triangulation,
}

const PARALLEL_SWEEP_MIN: usize = 32;

impl GkzSystem {
    pub fn new(cfg: AConfiguration) -> Result<Self> {
        let facets = cone::facets(&cfg)?;
        let triangulation = cone::triangulate(&cfg);
        Ok(GkzSystem {
            cfg,
            facets,
            triangulation,
        })
    }

    pub fn config(&self) -> &AConfiguration {
        &self.cfg
    }

    pub fn facets(&self) -> &FacetSystem {
        &self.facets
    }

    pub fn triangulation(&self) -> &Triangulation {
        &self.triangulation
    }

    pub fn volume(&self) -> &BigInt {
        self.triangulation.total()
    }

    pub fn is_irreducible(&self, alpha: &ParameterVector) -> bool {
        cone::is_irreducible(&self.facets, alpha)
    }

    pub fn is_saturated(&self) -> bool {
        crate::asystem::check_saturation(&self.cfg, &self.triangulation)
    }

    pub fn apex_points(&self, alpha: &ParameterVector) -> ApexReport {
        apex_points(&self.cfg, &self.facets, &self.triangulation, alpha)
    }

    pub fn signature(&self, alpha: &ParameterVector) -> usize {
        apex_numerators(&self.cfg, &self.facets, &self.triangulation, alpha).len()
    }

    pub fn decide_algebraic(&self, alpha: &ParameterVector) -> AlgebraicityVerdict {
        self.decide_algebraic_for(alpha, None)
    }

    /// As [`decide_algebraic`](Self::decide_algebraic), optionally restricted
    /// to the given multipliers. A restricted sweep only certifies the listed
    /// conjugates.
    pub fn decide_algebraic_for(
        &self,
        alpha: &ParameterVector,
        only: Option<&[BigInt]>,
    ) -> AlgebraicityVerdict {
        let irreducible = self.is_irreducible(alpha);
        if !irreducible {
            return AlgebraicityVerdict {
                alpha: alpha.clone(),
                irreducible,
                per_k: BTreeMap::new(),
                algebraic: false,
            };
        }
        // an integral alpha meets the origin face, so it is never irreducible
        assert!(
            !alpha.is_integral(),
            "irreducible system with integral parameters"
        );
        let ks = match only {
            Some(ks) => ks.to_vec(),
            None => conjugate_multipliers(alpha.denominator()),
        };
        let per_k = self.sweep(alpha, &ks);
        let algebraic = per_k.values().all(|r| r.maximal);
        AlgebraicityVerdict {
            alpha: alpha.clone(),
            irreducible,
            per_k,
            algebraic,
        }
    }

    fn sweep(&self, alpha: &ParameterVector, ks: &[BigInt]) -> BTreeMap<BigInt, ApexReport> {
        let run = |k: &BigInt| (k.clone(), self.apex_points(&alpha.scale(k)));
        if ks.len() < PARALLEL_SWEEP_MIN {
            return ks.iter().map(run).collect();
        }
        let workers = std::thread::available_parallelism()
            .map(|n| n.get())
            .unwrap_or(1)
            .min(ks.len());
        let chunk = ks.len().div_ceil(workers);
        std::thread::scope(|scope| {
            let handles: Vec<_> = ks
                .chunks(chunk)
                .map(|part| scope.spawn(move || part.iter().map(run).collect::<Vec<_>>()))
                .collect();
            handles
                .into_iter()
                .flat_map(|h| h.join().expect("sweep worker panicked"))
                .collect()
        })
    }
}

/// Parameters `k * alpha` reduced into `[0, 1)^r`; handy for display.
pub fn reduce_mod_one(alpha: &ParameterVector) -> ParameterVector {
    ParameterVector::new(alpha.values().iter().map(crate::scalar::frac).collect())
}
