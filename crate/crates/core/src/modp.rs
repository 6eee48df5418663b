//! Polynomial solutions of the system modulo a prime.
//!
//! For an integral parameter `k` and a prime `p`, each apex point `beta/p`
//! of `(k/p + Z^r) ∩ C(A)` yields the polynomial
//! `Psi = sum_{l in Gamma} v^l / l!` over `F_p`, where `Gamma` is the set of
//! `l` in the cube `[0, p)^N` with `psi(l) = beta`. The number of such
//! polynomials is compared against the signature over `Q`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::apex::{apex_numerators, GkzSystem};
use crate::asystem::{AConfiguration, ParameterVector};
use crate::cone::{FacetSystem, Triangulation};
use crate::error::{GkzError, Result};
use crate::lattice::{dot_int_rat, IntMatrix, IntVector};
use crate::poly::{Exponent, SparsePoly};
use crate::scalar::{format_rational, frac, is_prime, Field, Fp};
use crate::FpPoly;

/// A polynomial in `v_1..v_N` over `F_p`.
#[derive(Clone, Debug, PartialEq)]
pub struct PrimeFieldPoly {
    p: u64,
    poly: FpPoly,
}

impl PrimeFieldPoly {
    pub fn new(p: u64, poly: FpPoly) -> Self {
        PrimeFieldPoly { p, poly }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn poly(&self) -> &FpPoly {
        &self.poly
    }

    /// Multiplies by `v^{p * shift}`.
    pub fn frobenius_shift(&self, shift: &[u32]) -> Self {
        let e: Vec<u32> = shift.iter().map(|s| s * self.p as u32).collect();
        PrimeFieldPoly::new(self.p, self.poly.shift(&e))
    }

    /// Coefficients as `(exponent, residue)` in lexicographic exponent order.
    pub fn coefficients(&self) -> impl Iterator<Item = (&Exponent, u64)> {
        self.poly.terms().iter().map(|(e, c)| (e, c.value()))
    }
}

impl fmt::Display for PrimeFieldPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.poly, self.p)
    }
}

/// The fibre `{l in [0, p)^N : psi(l) = beta}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaSet {
    pub beta: IntVector,
    /// Sorted lexicographically.
    pub points: Vec<Vec<u32>>,
}

/// `beta_i = p * (apex points of (alpha/p + Z^r) ∩ C(A))`, sorted.
pub fn apexes_over_p(
    cfg: &AConfiguration,
    fs: &FacetSystem,
    tri: &Triangulation,
    alpha: &[BigInt],
    p: u64,
) -> Vec<IntVector> {
    let pq = BigInt::from(p);
    let shifted = ParameterVector::new(
        alpha
            .iter()
            .map(|a| BigRational::new(a.clone(), pq.clone()))
            .collect(),
    );
    // numerators over d, where d divides p
    let d = shifted.denominator().clone();
    let factor = &pq / &d;
    apex_numerators(cfg, fs, tri, &shifted)
        .into_iter()
        .map(|x| x.into_iter().map(|xi| xi * &factor).collect())
        .collect()
}

/// Enumerates the fibre of `beta` in the cube `[0, p)^N`.
///
/// The first `r` independent generators are solved for by the adjugate of
/// their matrix, the remaining `N - r` coordinates range over `[0, p)`.
pub fn gamma_set(cfg: &AConfiguration, beta: &[BigInt], p: u64) -> Result<GammaSet> {
    let n = cfg.len();
    let basis_idx = independent_columns(cfg);
    let free_idx: Vec<usize> = (0..n).filter(|i| !basis_idx.contains(i)).collect();
    let cols: Vec<IntVector> = basis_idx
        .iter()
        .map(|&i| cfg.generator(i).clone())
        .collect();
    let m = IntMatrix::from_columns(&cols);
    let det = m.det();
    let adj = m.adjugate();
    let pb = BigInt::from(p);

    let mut points = Vec::new();
    let mut free = vec![0u32; free_idx.len()];
    loop {
        let mut rhs = beta.to_vec();
        for (&j, &lj) in free_idx.iter().zip(&free) {
            for (x, a) in rhs.iter_mut().zip(cfg.generator(j)) {
                *x -= a * lj;
            }
        }
        let num = adj.mul_vec(&rhs);
        let solved: Option<Vec<u32>> = num
            .iter()
            .map(|v| {
                let (q, rem) = v.div_rem(&det);
                (rem.is_zero() && !q.is_negative() && q < pb).then(|| q.to_u32().unwrap())
            })
            .collect();
        if let Some(solved) = solved {
            let mut l = vec![0u32; n];
            for (&i, v) in basis_idx.iter().zip(solved) {
                l[i] = v;
            }
            for (&j, &v) in free_idx.iter().zip(&free) {
                l[j] = v;
            }
            points.push(l);
        }
        // odometer over [0, p)^{N-r}
        let mut k = 0;
        loop {
            if k == free.len() {
                points.sort();
                if points.is_empty() {
                    return Err(GkzError::EmptyFiber {
                        beta: format!("{beta:?}"),
                        p,
                    });
                }
                return Ok(GammaSet {
                    beta: beta.to_vec(),
                    points,
                });
            }
            free[k] += 1;
            if u64::from(free[k]) < p {
                break;
            }
            free[k] = 0;
            k += 1;
        }
    }
}

fn independent_columns(cfg: &AConfiguration) -> Vec<usize> {
    let mut chosen = Vec::new();
    for i in 0..cfg.len() {
        let mut trial = chosen.clone();
        trial.push(i);
        let rows: Vec<Vec<BigRational>> = trial
            .iter()
            .map(|&j| {
                cfg.generator(j)
                    .iter()
                    .map(|x| BigRational::from_integer(x.clone()))
                    .collect()
            })
            .collect();
        if crate::linalg::rank(&rows, cfg.rank()) == trial.len() {
            chosen = trial;
            if chosen.len() == cfg.rank() {
                break;
            }
        }
    }
    chosen
}

/// `Psi = sum_{l in Gamma} v^l / prod_j l_j!` over `F_p`.
pub fn psi_polynomial(gs: &GammaSet, p: u64) -> PrimeFieldPoly {
    let nvars = gs.points.first().map_or(0, Vec::len);
    let mut factorials = vec![Fp::new(1, p)];
    for k in 1..p.min(1 << 20) {
        let prev = *factorials.last().unwrap();
        factorials.push(prev * Fp::new(k as i64, p));
    }
    let poly = SparsePoly::from_terms(
        nvars,
        gs.points.iter().map(|l| {
            let denom = l
                .iter()
                .fold(Fp::new(1, p), |acc, &lj| acc * factorials[lj as usize]);
            let c = denom.inverse().expect("factorials below p are units");
            (l.clone(), c)
        }),
    );
    PrimeFieldPoly::new(p, poly)
}

/// Box and Euler residuals of a polynomial mod p.
#[derive(Clone, Debug, PartialEq)]
pub struct ModpResidual {
    /// One per row of the relation basis.
    pub box_residuals: Vec<FpPoly>,
    /// One per coordinate of `alpha`.
    pub euler_residuals: Vec<FpPoly>,
}

impl ModpResidual {
    pub fn is_zero(&self) -> bool {
        self.box_residuals
            .iter()
            .chain(&self.euler_residuals)
            .all(SparsePoly::is_zero)
    }
}

/// `d^{l+} f - d^{l-} f`.
pub fn box_residual<S: Field>(f: &SparsePoly<S>, l: &[BigInt]) -> SparsePoly<S> {
    let plus: Vec<u32> = l
        .iter()
        .map(|x| {
            if x.is_positive() {
                x.to_u32().unwrap()
            } else {
                0
            }
        })
        .collect();
    let minus: Vec<u32> = l
        .iter()
        .map(|x| {
            if x.is_negative() {
                (-x).to_u32().unwrap()
            } else {
                0
            }
        })
        .collect();
    f.derivative(&plus).sub(&f.derivative(&minus))
}

/// Applies every box operator (relation basis rows) and every Euler
/// operator `sum_k a_{k,i} v_k d_k - alpha_i` to `f` over `F_p`.
pub fn apply_operators_modp(
    cfg: &AConfiguration,
    alpha: &[BigInt],
    f: &PrimeFieldPoly,
) -> ModpResidual {
    let p = f.p;
    let relations = cfg.relations();
    let box_residuals = (0..relations.nrows())
        .map(|k| box_residual(&f.poly, relations.row(k)))
        .collect();
    let euler_residuals = (0..cfg.rank())
        .map(|i| {
            SparsePoly::from_terms(
                cfg.len(),
                f.poly.terms().iter().map(|(m, c)| {
                    let mut w = -alpha[i].clone();
                    for (mk, a) in m.iter().zip(cfg.generators()) {
                        w += &a[i] * *mk;
                    }
                    (m.clone(), *c * Fp::from_bigint(&w, p))
                }),
            )
        })
        .collect();
    ModpResidual {
        box_residuals,
        euler_residuals,
    }
}

/// Outcome of the mod-p rank computation.
#[derive(Clone, Debug, PartialEq)]
pub struct ModpRank {
    pub p: u64,
    /// Least positive residue of `-p^{-1}` modulo `D`.
    pub rho: BigInt,
    /// The integral lift `(1 + p rho) alpha`.
    pub lift: IntVector,
    pub betas: Vec<IntVector>,
    pub solutions: Vec<PrimeFieldPoly>,
    pub rank: usize,
    /// `sigma(A, rho alpha)`, equal to `rank`.
    pub signature: usize,
}

/// `rho = -p^{-1} mod D` in `[1, D]`; `1` when `D = 1`.
pub fn rho(p: u64, denominator: &BigInt) -> BigInt {
    if denominator.is_one() {
        return BigInt::one();
    }
    let egcd = BigInt::from(p).extended_gcd(denominator);
    debug_assert!(egcd.gcd.is_one());
    (-egcd.x).mod_floor(denominator)
}

/// Checks that shifting by `alpha / p` moves no point of `rho alpha + Z^r`
/// across a facet: `|phi(alpha)| < p * dist(phi(rho alpha), Z)` for every
/// facet normal. Then the apex points over `p` are exactly the apex points
/// of `rho alpha` shifted by `alpha / p`.
pub fn check_prime_margin(
    fs: &FacetSystem,
    alpha: &ParameterVector,
    rho: &BigInt,
    p: u64,
) -> Result<()> {
    let pq = BigRational::from_integer(BigInt::from(p));
    let rho_q = BigRational::from_integer(rho.clone());
    for n in fs.normals() {
        let phi = dot_int_rat(n, alpha.values());
        let f = frac(&(&phi * &rho_q));
        let dist = f.clone().min(BigRational::one() - f);
        if phi.abs() >= &pq * &dist {
            return Err(GkzError::PrimeTooSmall {
                p,
                reason: format!(
                    "|phi(alpha)| < p * dist(phi(rho alpha), Z) for phi = ({}), got {} >= {}",
                    n.iter()
                        .map(ToString::to_string)
                        .collect::<Vec<_>>()
                        .join(", "),
                    format_rational(&phi.abs()),
                    format_rational(&(&pq * &dist)),
                ),
            });
        }
    }
    Ok(())
}

/// Counts the canonical polynomial solutions modulo `p` for the integral
/// lift `(1 + p rho) alpha`, and checks the count against `sigma(A, rho alpha)`.
pub fn modp_rank(cfg: &AConfiguration, alpha: &ParameterVector, p: u64) -> Result<ModpRank> {
    if !is_prime(p) {
        return Err(GkzError::NotPrime(p));
    }
    if p > u64::from(u32::MAX) {
        return Err(GkzError::InvalidInput(format!("prime {p} exceeds 32 bits")));
    }
    let d = alpha.denominator();
    if (d % p).is_zero() {
        return Err(GkzError::PrimeDividesDenominator {
            p,
            denominator: d.to_string(),
        });
    }
    let sys = GkzSystem::new(cfg.clone())?;
    if !sys.is_saturated() {
        return Err(GkzError::NotSaturated);
    }
    if !sys.is_irreducible(alpha) {
        return Err(GkzError::Reducible);
    }
    let rho = rho(p, d);
    check_prime_margin(sys.facets(), alpha, &rho, p)?;

    let factor = BigRational::from_integer(BigInt::one() + BigInt::from(p) * &rho);
    let lift: IntVector = alpha
        .values()
        .iter()
        .map(|a| {
            let v = a * &factor;
            debug_assert!(v.is_integer());
            v.to_integer()
        })
        .collect();

    let betas = apexes_over_p(cfg, sys.facets(), sys.triangulation(), &lift, p);
    let solutions = betas
        .iter()
        .map(|beta| gamma_set(cfg, beta, p).map(|gs| psi_polynomial(&gs, p)))
        .collect::<Result<Vec<_>>>()?;
    let signature = sys.signature(&alpha.scale(&rho));
    let rank = solutions.len();
    if rank != signature {
        return Err(GkzError::Invariant(format!(
            "mod-{p} rank {rank} differs from signature {signature}"
        )));
    }
    Ok(ModpRank {
        p,
        rho,
        lift,
        betas,
        solutions,
        rank,
        signature,
    })
}

/// `[m]_{l+} p_m - [m - l]_{l-} p_{m - l}` at every exponent `m` of the
/// support of `f` or of `v^l f`; all must vanish for a box solution.
pub fn recursion_defects(f: &PrimeFieldPoly, l: &[BigInt]) -> Vec<Exponent> {
    let plus: Vec<u32> = l
        .iter()
        .map(|x| {
            if x.is_positive() {
                x.to_u32().unwrap()
            } else {
                0
            }
        })
        .collect();
    let minus: Vec<u32> = l
        .iter()
        .map(|x| {
            if x.is_negative() {
                (-x).to_u32().unwrap()
            } else {
                0
            }
        })
        .collect();
    let p = f.p;
    let mut candidates: Vec<Exponent> = f.poly.terms().keys().cloned().collect();
    // m - l in the support means m = e + l
    for e in f.poly.terms().keys() {
        let m: Option<Exponent> = e
            .iter()
            .zip(l)
            .map(|(ei, li)| (BigInt::from(*ei) + li).to_u32())
            .collect();
        candidates.extend(m);
    }
    candidates.sort();
    candidates.dedup();
    let ff =
        |m: &[u32], r: &[u32]| Fp::from_bigint(&crate::poly::falling_factorial_product(m, r), p);
    candidates
        .into_iter()
        .filter(|m| {
            let lhs = ff(m, &plus) * f.poly.coefficient(m);
            let shifted: Option<Exponent> = m
                .iter()
                .zip(l)
                .map(|(mi, li)| (BigInt::from(*mi) - li).to_u32())
                .collect();
            let rhs = match shifted {
                Some(s) => ff(&s, &minus) * f.poly.coefficient(&s),
                None => Fp::new(0, p),
            };
            !(lhs - rhs).is_zero()
        })
        .collect()
}
