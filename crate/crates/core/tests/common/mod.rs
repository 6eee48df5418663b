//! Shared fixtures and brute-force oracles. The oracles never call the
//! facet or triangulation code of the library.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use gkz_core::lattice::{int_vec, IntMatrix, IntVector};
use gkz_core::linalg;
use gkz_core::modp::{apply_operators_modp, modp_rank, recursion_defects, ModpRank};
use gkz_core::poly::SparsePoly;
use gkz_core::scalar::{rat, Fp};
use gkz_core::{AConfiguration, GkzSystem, ParameterVector, Rat};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::Rng;

pub fn gauss() -> AConfiguration {
    AConfiguration::from_i64(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[1, 1, -1]]).unwrap()
}

pub fn appell_f2() -> AConfiguration {
    AConfiguration::from_i64(&[
        &[1, 0, 0, 0, 0],
        &[0, 1, 0, 0, 0],
        &[0, 0, 1, 0, 0],
        &[0, 0, 0, 1, 0],
        &[0, 0, 0, 0, 1],
        &[1, 1, 0, -1, 0],
        &[1, 0, 1, 0, -1],
    ])
    .unwrap()
}

pub fn horn_g3() -> AConfiguration {
    AConfiguration::from_i64(&[&[-1, 2], &[0, 1], &[1, 0], &[2, -1]]).unwrap()
}

pub fn shipped() -> Vec<(&'static str, AConfiguration)> {
    vec![
        ("gauss", gauss()),
        ("appell-f2", appell_f2()),
        ("horn-g3", horn_g3()),
    ]
}

/// `(-a, -b, c - 1)`.
pub fn gauss_alpha(a: &Rat, b: &Rat, c: &Rat) -> ParameterVector {
    ParameterVector::new(vec![-a.clone(), -b.clone(), c - rat(1, 1)])
}

/// Rationals `n/d` in `[0, 1)` with `d <= max_den`, in lowest terms, sorted.
pub fn fractions(max_den: i64) -> Vec<Rat> {
    let mut out: Vec<Rat> = (1..=max_den)
        .flat_map(|d| (0..d).map(move |n| rat(n, d)))
        .collect();
    out.sort();
    out.dedup();
    out
}

pub fn frac(q: &Rat) -> Rat {
    q - q.floor()
}

pub fn random_alpha(rng: &mut impl Rng, r: usize, max_den: i64) -> ParameterVector {
    ParameterVector::new(
        (0..r)
            .map(|_| {
                let d = rng.gen_range(1..=max_den);
                rat(rng.gen_range(-3 * d..3 * d), d)
            })
            .collect(),
    )
}

fn solve_exact(cols: &[&IntVector], x: &[Rat]) -> Option<Vec<Rat>> {
    // Gauss-Jordan on the square system [cols | x]
    let r = x.len();
    let mut m: Vec<Vec<Rat>> = (0..r)
        .map(|i| {
            let mut row: Vec<Rat> = cols
                .iter()
                .map(|c| BigRational::from_integer(c[i].clone()))
                .collect();
            row.push(x[i].clone());
            row
        })
        .collect();
    for col in 0..r {
        let piv = (col..r).find(|&i| !m[i][col].is_zero())?;
        m.swap(col, piv);
        let p = m[col][col].clone();
        for v in m[col].iter_mut() {
            *v = &*v / &p;
        }
        for i in 0..r {
            if i != col && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                let pivot_row = m[col].clone();
                for (v, w) in m[i].iter_mut().zip(&pivot_row) {
                    *v -= &f * w;
                }
            }
        }
    }
    Some(m.into_iter().map(|row| row[r].clone()).collect())
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Cone membership by Caratheodory: `x` is a nonnegative combination of the
/// generators iff it is one of some `r` linearly independent generators.
pub struct CaratheodoryCone {
    bases: Vec<Vec<IntVector>>,
}

impl CaratheodoryCone {
    pub fn new(cfg: &AConfiguration) -> Self {
        Self::from_generators(cfg.generators())
    }

    pub fn from_generators(gens: &[IntVector]) -> Self {
        let r = gens[0].len();
        let bases = subsets(gens.len(), r)
            .into_iter()
            .map(|s| s.iter().map(|&i| gens[i].clone()).collect::<Vec<_>>())
            .filter(|b| {
                let cols: Vec<IntVector> = b.clone();
                !IntMatrix::from_columns(&cols).det().is_zero()
            })
            .collect();
        CaratheodoryCone { bases }
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        self.bases.iter().any(|b| {
            let cols: Vec<&IntVector> = b.iter().collect();
            solve_exact(&cols, x).is_some_and(|lam| lam.iter().all(|l| !l.is_negative()))
        })
    }
}

/// Apex points of `(alpha + Z^r) ∩ C(A)` by scanning a box that contains
/// every parallelepiped of the generators with a margin, using only
/// Caratheodory membership.
pub fn brute_force_apex(
    cfg: &AConfiguration,
    alpha: &ParameterVector,
    margin: i64,
) -> Vec<Vec<Rat>> {
    let cone = CaratheodoryCone::new(cfg);
    let r = cfg.rank();
    let mut lo = vec![-margin; r];
    let mut hi = vec![margin; r];
    for a in cfg.generators() {
        for c in 0..r {
            let v: i64 = a[c].clone().try_into().unwrap();
            if v < 0 {
                lo[c] += v;
            } else {
                hi[c] += v;
            }
        }
    }
    // alpha reduced into [0,1)^r, then shifted by integer offsets in the box
    let base: Vec<Rat> = alpha.values().iter().map(frac).collect();
    let mut found = Vec::new();
    let mut z = lo.clone();
    loop {
        let x: Vec<Rat> = base
            .iter()
            .zip(&z)
            .map(|(b, zi)| b + BigRational::from_integer(BigInt::from(*zi)))
            .collect();
        if cone.contains(&x)
            && cfg.generators().iter().all(|a| {
                let y: Vec<Rat> = x
                    .iter()
                    .zip(a)
                    .map(|(xi, ai)| xi - BigRational::from_integer(ai.clone()))
                    .collect();
                !cone.contains(&y)
            })
        {
            found.push(x);
        }
        let mut k = 0;
        loop {
            if k == r {
                found.sort();
                return found;
            }
            z[k] += 1;
            if z[k] <= hi[k] {
                break;
            }
            z[k] = lo[k];
            k += 1;
        }
    }
}

pub fn iv(xs: &[i64]) -> IntVector {
    int_vec(xs)
}

pub fn cube(n: usize, p: u64) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..p as u32).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

pub fn psi_of(cfg: &AConfiguration, l: &[u32]) -> IntVector {
    let m: Vec<BigInt> = l.iter().map(|&x| BigInt::from(x)).collect();
    cfg.psi_int(&m)
}

/// Dimension of the space of polynomials supported in `[0, p)^N` killed by
/// every box operator `l in L` with `|l|_inf < p` and by the Euler operators
/// for the integral parameter `k`. Built directly from the coefficient
/// relations, independent of the library's operator code.
pub fn cube_solution_space(
    cfg: &AConfiguration,
    k: &[BigInt],
    p: u64,
) -> (Vec<Vec<u32>>, Vec<Vec<Fp>>) {
    let pi = BigInt::from(p);
    let unknowns: Vec<Vec<u32>> = cube(cfg.len(), p)
        .into_iter()
        .filter(|m| {
            psi_of(cfg, m)
                .iter()
                .zip(k)
                .all(|(x, y)| ((x - y) % &pi).is_zero())
        })
        .collect();
    let basis = cfg.relations();
    let m = basis.nrows();
    let bound = 2 * p as i64;
    let mut lattice = Vec::new();
    let mut c = vec![-bound; m];
    loop {
        let l: Vec<i64> = (0..cfg.len())
            .map(|j| (0..m).map(|i| basis[(i, j)].to_i64().unwrap() * c[i]).sum())
            .collect();
        if l.iter().any(|&x| x != 0) && l.iter().all(|&x| x.unsigned_abs() < p) {
            lattice.push(l);
        }
        let mut t = 0;
        loop {
            if t == m {
                break;
            }
            c[t] += 1;
            if c[t] <= bound {
                break;
            }
            c[t] = -bound;
            t += 1;
        }
        if t == m {
            break;
        }
    }

    let falling = |x: u32, r: u32| -> Fp {
        (0..r).fold(Fp::new(1, p), |acc, j| {
            acc * Fp::new(i64::from(x) - i64::from(j), p)
        })
    };
    let mut rows: BTreeMap<(usize, Vec<i64>), Vec<Fp>> = BTreeMap::new();
    for (li, l) in lattice.iter().enumerate() {
        for (col, mono) in unknowns.iter().enumerate() {
            for (sign, part) in [(1i64, 1i64), (-1, -1)] {
                // part = 1: d^{l+}, part = -1: d^{l-}
                let r: Vec<u32> = l
                    .iter()
                    .map(|&x| if x * part > 0 { (x * part) as u32 } else { 0 })
                    .collect();
                if mono.iter().zip(&r).any(|(a, b)| a < b) {
                    continue;
                }
                let coeff = mono
                    .iter()
                    .zip(&r)
                    .fold(Fp::new(sign, p), |acc, (&a, &b)| acc * falling(a, b));
                if coeff.value() == 0 {
                    continue;
                }
                let pos: Vec<i64> = mono
                    .iter()
                    .zip(&r)
                    .map(|(&a, &b)| i64::from(a) - i64::from(b))
                    .collect();
                let row = rows
                    .entry((li, pos))
                    .or_insert_with(|| vec![Fp::new(0, p); unknowns.len()]);
                row[col] = row[col] + coeff;
            }
        }
    }
    (unknowns, rows.into_values().collect())
}

/// `{ka, kb}` and `{0, kc}` interlace modulo 1: exactly one of `ka, kb`
/// lies strictly between 0 and `kc` on the circle.
pub fn interlaces(a: &Rat, b: &Rat, c: &Rat, k: &BigInt) -> bool {
    let kq = Rat::from_integer(k.clone());
    let (fa, fb, fc) = (frac(&(a * &kq)), frac(&(b * &kq)), frac(&(c * &kq)));
    let inside = |x: &Rat| x > &Rat::zero() && x < &fc;
    inside(&fa) != inside(&fb)
}

pub fn gauss_irreducible(a: &Rat, b: &Rat, c: &Rat) -> bool {
    [a.clone(), b.clone(), c - a, c - b]
        .iter()
        .all(|x| !x.is_integer())
}

/// Runs the rank computation and checks every property of the witness:
/// vanishing residuals, the coefficient recursion, degrees below `p`,
/// disjoint supports, the lift congruence and the rank.
pub fn witness(cfg: &AConfiguration, alpha: &ParameterVector, p: u64) -> ModpRank {
    let r = modp_rank(cfg, alpha, p).unwrap();
    for psi in &r.solutions {
        assert!(apply_operators_modp(cfg, &r.lift, psi).is_zero());
        for k in 0..cfg.relations().nrows() {
            assert!(recursion_defects(psi, cfg.relations().row(k)).is_empty());
        }
        for (e, _) in psi.coefficients() {
            assert!(e.iter().all(|&x| u64::from(x) < p));
        }
    }
    // supports are disjoint, hence so are all p-shifts of them
    let mut seen = BTreeSet::new();
    for psi in &r.solutions {
        for (e, _) in psi.coefficients() {
            assert!(seen.insert(e.clone()));
        }
    }
    // k = (1 + p rho) alpha is integral and congruent to alpha at p
    let pq = Rat::from_integer(BigInt::from(p));
    let rho = Rat::from_integer(r.rho.clone());
    for (k, a) in r.lift.iter().zip(alpha.values()) {
        let diff = Rat::from_integer(k.clone()) - a;
        assert_eq!(&diff / &pq, a * &rho);
        assert!((diff.numer() % BigInt::from(p)).is_zero());
    }
    let sys = GkzSystem::new(cfg.clone()).unwrap();
    assert_eq!(r.rank, sys.signature(&alpha.scale(&r.rho)));
    r
}

/// Compares the nullspace of the cube system with the witness solutions;
/// returns `(nullspace dimension, number of solutions)`.
pub fn completeness(cfg: &AConfiguration, alpha: &ParameterVector, p: u64) -> (usize, usize) {
    let r = witness(cfg, alpha, p);
    let (unknowns, rows) = cube_solution_space(cfg, &r.lift, p);
    let rank = linalg::rank(&rows, unknowns.len());
    let dim = unknowns.len() - rank;
    for psi in &r.solutions {
        let v: Vec<Fp> = unknowns.iter().map(|m| psi.poly().coefficient(m)).collect();
        assert_eq!(
            psi.poly().len(),
            v.iter().filter(|c| c.value() != 0).count()
        );
        for row in &rows {
            let s = row
                .iter()
                .zip(&v)
                .fold(Fp::new(0, p), |acc, (a, b)| acc + *a * *b);
            assert_eq!(s.value(), 0);
        }
    }
    (dim, r.rank)
}

pub fn xy_poly(terms: &[((u32, u32), i64)]) -> SparsePoly<Rat> {
    SparsePoly::from_terms(2, terms.iter().map(|&((i, j), c)| (vec![i, j], rat(c, 1))))
}

/// Order-4 truncation of the algebraic function f in the G3 closed form.
pub fn expected_f_order4() -> SparsePoly<Rat> {
    xy_poly(&[
        ((0, 0), 1),
        ((0, 1), 1),
        ((1, 0), -1),
        ((2, 0), 2),
        ((1, 1), -1),
        ((0, 2), -1),
        ((3, 0), -5),
        ((2, 1), 3),
        ((0, 3), 2),
        ((4, 0), 14),
        ((3, 1), -10),
        ((1, 3), 1),
        ((0, 4), -5),
    ])
}

/// Order-4 truncation of g:
/// `1 + 2x - x(x + 2y) + 2x(x - y)^2 - x(x - y)^2 (5x + 4y)`, expanded.
pub fn expected_g_order4() -> SparsePoly<Rat> {
    xy_poly(&[
        ((0, 0), 1),
        ((1, 0), 2),
        ((2, 0), -1),
        ((1, 1), -2),
        ((3, 0), 2),
        ((2, 1), -4),
        ((1, 2), 2),
        ((4, 0), -5),
        ((3, 1), 6),
        ((2, 2), 3),
        ((1, 3), -4),
    ])
}
