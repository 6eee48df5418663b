//! Truncated multivariate power series, the formal solution of the system,
//! and the series identities of the Horn G3 closed form.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::asystem::{AConfiguration, ParameterVector};
use crate::error::{GkzError, Result};
use crate::lattice::{IntVector, RatVector};
use crate::poly::{Exponent, SparsePoly};
use crate::scalar::{is_integral, Field};

/// A power series in named variables, known up to total degree `order`.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedSeries<S> {
    names: Vec<String>,
    order: u32,
    poly: SparsePoly<S>,
}

fn degree(e: &[u32]) -> u32 {
    e.iter().sum()
}

impl<S: Field> TruncatedSeries<S> {
    /// Drops every term of total degree above `order`.
    pub fn new(names: Vec<String>, order: u32, poly: SparsePoly<S>) -> Self {
        assert_eq!(names.len(), poly.nvars(), "one name per variable");
        let poly = SparsePoly::from_terms(
            poly.nvars(),
            poly.terms()
                .iter()
                .filter(|(e, _)| degree(e) <= order)
                .map(|(e, c)| (e.clone(), c.clone())),
        );
        TruncatedSeries { names, order, poly }
    }

    pub fn zero(names: &[&str], order: u32) -> Self {
        Self::new(
            names.iter().map(|s| s.to_string()).collect(),
            order,
            SparsePoly::zero(names.len()),
        )
    }

    pub fn constant(names: &[&str], order: u32, c: S) -> Self {
        Self::new(
            names.iter().map(|s| s.to_string()).collect(),
            order,
            SparsePoly::constant(names.len(), c),
        )
    }

    /// The variable `names[i]` times `c` (a unit of the field, for context).
    pub fn variable(names: &[&str], order: u32, i: usize, c: S) -> Self {
        let mut e = vec![0; names.len()];
        e[i] = 1;
        Self::new(
            names.iter().map(|s| s.to_string()).collect(),
            order,
            SparsePoly::monomial(e, c),
        )
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn poly(&self) -> &SparsePoly<S> {
        &self.poly
    }

    pub fn coefficient(&self, e: &[u32]) -> S {
        self.poly.coefficient(e)
    }

    pub fn constant_term(&self) -> S {
        self.poly.coefficient(&vec![0; self.names.len()])
    }

    pub fn with_order(&self, order: u32) -> Self {
        Self::new(self.names.clone(), order.min(self.order), self.poly.clone())
    }

    /// Terms of exactly the given total degree.
    pub fn homogeneous_part(&self, d: u32) -> SparsePoly<S> {
        SparsePoly::from_terms(
            self.poly.nvars(),
            self.poly
                .terms()
                .iter()
                .filter(|(e, _)| degree(e) == d)
                .map(|(e, c)| (e.clone(), c.clone())),
        )
    }

    fn check_names(&self, other: &Self) {
        assert_eq!(self.names, other.names, "series in different variables");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_names(other);
        Self::new(
            self.names.clone(),
            self.order.min(other.order),
            self.poly.add(&other.poly),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self::new(self.names.clone(), self.order, self.poly.neg())
    }

    pub fn scale(&self, k: &S) -> Self {
        Self::new(self.names.clone(), self.order, self.poly.scale(k))
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_names(other);
        let order = self.order.min(other.order);
        let poly = self.poly.mul_filtered(&other.poly, |e| degree(e) <= order);
        TruncatedSeries {
            names: self.names.clone(),
            order,
            poly,
        }
    }

    /// Multiplicative inverse; the constant term must be nonzero.
    pub fn inverse(&self) -> Result<Self> {
        let c = self.constant_term();
        let cinv = c.inverse().ok_or(GkzError::NotUnitSeries)?;
        // s = c (1 + t), s^{-1} = c^{-1} sum (-t)^k
        let t = self.scale(&cinv).sub(&self.unit());
        let neg_t = t.neg();
        let mut acc = self.unit();
        let mut power = self.unit();
        for _ in 0..self.order {
            power = power.mul(&neg_t);
            acc = acc.add(&power);
        }
        Ok(acc.scale(&cinv))
    }

    fn unit(&self) -> Self {
        // a stored coefficient carries the field context (the modulus)
        let one = match self.poly.terms().values().next() {
            Some(c) => c.embed_int(&BigInt::one()),
            None => S::one(),
        };
        Self::new(
            self.names.clone(),
            self.order,
            SparsePoly::constant(self.names.len(), one),
        )
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inverse()?))
    }

    /// `s^u` for a series with constant term 1, by the binomial series.
    pub fn pow_rational(&self, u: &BigRational) -> Result<Self> {
        let one = self.unit();
        if self.constant_term() != one.constant_term() {
            return Err(GkzError::NotUnitSeries);
        }
        let t = self.sub(&one);
        let ctx = one.constant_term();
        let mut acc = one.clone();
        let mut power = one.clone();
        let mut binom = BigRational::one();
        for k in 0..self.order {
            power = power.mul(&t);
            binom = binom * (u - BigRational::from_integer(k.into()))
                / BigRational::from_integer((k + 1).into());
            let c = ctx.embed(&binom).ok_or_else(|| {
                GkzError::InvalidInput(format!("binomial coefficient {binom} has no image"))
            })?;
            acc = acc.add(&power.scale(&c));
        }
        Ok(acc)
    }

    pub fn sqrt(&self) -> Result<Self> {
        self.pow_rational(&BigRational::new(1.into(), 2.into()))
    }

    /// Maps `v^e` to `prod_i names_i^{e_i}`; the variables as series.
    pub fn variables(&self) -> Vec<Self> {
        let one = self.unit().constant_term();
        (0..self.names.len())
            .map(|i| {
                let mut e = vec![0; self.names.len()];
                e[i] = 1;
                Self::new(
                    self.names.clone(),
                    self.order,
                    SparsePoly::monomial(e, one.clone()),
                )
            })
            .collect()
    }
}

impl<S: Field> fmt::Display for TruncatedSeries<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (e, c) in self.poly.terms() {
            let mono: Vec<String> = e
                .iter()
                .zip(&self.names)
                .filter(|(&k, _)| k > 0)
                .map(|(&k, n)| {
                    if k == 1 {
                        n.clone()
                    } else {
                        format!("{n}^{k}")
                    }
                })
                .collect();
            parts.push(if mono.is_empty() {
                format!("{c}")
            } else {
                format!("({c})*{}", mono.join("*"))
            });
        }
        if parts.is_empty() {
            parts.push("0".into());
        }
        write!(f, "{} + O({})", parts.join(" + "), self.order + 1)
    }
}

/// `(x)_n = Gamma(x + n) / Gamma(x)`; for `n < 0` this is
/// `1 / ((x - 1)(x - 2) ... (x - |n|))`. `None` when that denominator is 0.
pub fn pochhammer(x: &BigRational, n: i64) -> Option<BigRational> {
    let mut acc = BigRational::one();
    if n >= 0 {
        for j in 0..n {
            acc *= x + BigRational::from_integer(j.into());
        }
        Some(acc)
    } else {
        for j in 1..=(-n) {
            acc *= x - BigRational::from_integer(j.into());
        }
        (!acc.is_zero()).then(|| acc.recip())
    }
}

fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// Data for the formal solution `sum_{l in L} v^{l + gamma} / Gamma(l + gamma + 1)`.
#[derive(Clone, Debug)]
pub struct FormalSolutionSpec {
    pub cfg: AConfiguration,
    pub alpha: ParameterVector,
    pub gamma: RatVector,
    pub order: u32,
}

impl FormalSolutionSpec {
    pub fn new(
        cfg: AConfiguration,
        alpha: ParameterVector,
        gamma: RatVector,
        order: u32,
    ) -> Result<Self> {
        if gamma.len() != cfg.len() || &cfg.psi(&gamma) != alpha.values() {
            return Err(GkzError::GammaMismatch);
        }
        Ok(FormalSolutionSpec {
            cfg,
            alpha,
            gamma,
            order,
        })
    }

    /// Uses the preimage with free coordinates zero.
    pub fn from_alpha(cfg: AConfiguration, alpha: ParameterVector, order: u32) -> Result<Self> {
        let gamma = cfg.gamma_lift(&alpha);
        Self::new(cfg, alpha, gamma, order)
    }
}

/// Coordinates `u` on the relation lattice: `l = sum_i (u_i - gamma_{I_i}) L^(i)`,
/// where `L^(i)` is the relation basis dual to the chart indices `I`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusChart {
    /// `N - r` coordinates with integral `gamma`, unimodular on the relations.
    pub indices: Vec<usize>,
    /// `L^(i)`, with `L^(i)_{I_j} = delta_ij`.
    pub directions: Vec<IntVector>,
}

/// `Phi = v^prefactor * S(v^{L^(1)}, ..., v^{L^(N-r)})`, up to the constant
/// `prod 1/Gamma(gamma_j + 1)` over the non-integral coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct PhiSeries {
    pub chart: TorusChart,
    pub prefactor: RatVector,
    pub series: TruncatedSeries<BigRational>,
}

impl PhiSeries {
    /// The `v`-exponent of the term with chart index `u`.
    pub fn exponent(&self, u: &[i64]) -> RatVector {
        let mut e = self.prefactor.clone();
        for (ui, dir) in u.iter().zip(&self.chart.directions) {
            for (ej, dj) in e.iter_mut().zip(dir) {
                *ej += BigRational::from_integer(dj * *ui);
            }
        }
        e
    }
}

fn choose_chart(cfg: &AConfiguration, gamma: &[BigRational]) -> Result<TorusChart> {
    let n = cfg.len();
    let m = n - cfg.rank();
    let relations = cfg.relations();
    if m == 0 {
        return Ok(TorusChart {
            indices: Vec::new(),
            directions: Vec::new(),
        });
    }
    let candidates: Vec<usize> = (0..n).filter(|&j| is_integral(&gamma[j])).collect();
    for subset in subsets(&candidates, m) {
        let sub = relations.select_columns(&subset);
        if !sub.det().abs().is_one() {
            continue;
        }
        // directions = sub^{-1} * relations, integral since sub is unimodular
        let inv = sub.adjugate();
        let det = sub.det();
        let mut directions = inv.mul(relations).row_vecs();
        for d in &mut directions {
            for x in d.iter_mut() {
                *x = &*x / &det;
            }
        }
        return Ok(TorusChart {
            indices: subset,
            directions,
        });
    }
    Err(GkzError::NonConvergentDirection(format!(
        "no {m} coordinates with integral gamma carry a unimodular minor of the relations"
    )))
}

fn subsets(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if items.len() < k {
        return Vec::new();
    }
    let mut out: Vec<Vec<usize>> = subsets(&items[1..], k - 1)
        .into_iter()
        .map(|mut s| {
            s.insert(0, items[0]);
            s
        })
        .collect();
    out.extend(subsets(&items[1..], k));
    out
}

/// All `u` in `Z_{>=0}^m` with `|u| <= order`.
fn simplex_points(m: usize, order: u32) -> Vec<Vec<u32>> {
    if m == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 0..=order {
        for mut rest in simplex_points(m - 1, order - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Coefficient of the formal solution at the relation `l`.
fn phi_coefficient(gamma: &[BigRational], l: &[BigInt]) -> BigRational {
    let mut acc = BigRational::one();
    for (g, lj) in gamma.iter().zip(l) {
        let li = lj.to_i64().expect("relation entry fits in i64");
        if is_integral(g) {
            let k = g.to_integer() + lj;
            if k.is_negative() {
                return BigRational::zero();
            }
            acc /= BigRational::from_integer(factorial(k.to_u64().unwrap()));
        } else {
            let poch = pochhammer(&(g + BigRational::one()), li)
                .expect("non-integral argument never hits a pole");
            acc /= poch;
        }
    }
    acc
}

/// The formal solution in a torus chart, truncated at `spec.order` in the
/// chart variables.
pub fn phi_series(spec: &FormalSolutionSpec) -> Result<PhiSeries> {
    let chart = choose_chart(&spec.cfg, &spec.gamma)?;
    let m = chart.indices.len();
    let gamma_i: Vec<BigInt> = chart
        .indices
        .iter()
        .map(|&j| spec.gamma[j].to_integer())
        .collect();

    let mut prefactor = spec.gamma.clone();
    for (gi, dir) in gamma_i.iter().zip(&chart.directions) {
        for (p, d) in prefactor.iter_mut().zip(dir) {
            *p -= BigRational::from_integer(gi * d);
        }
    }

    let names: Vec<String> = (1..=m).map(|i| format!("z{i}")).collect();
    let terms = simplex_points(m, spec.order).into_iter().map(|u| {
        let mut l = vec![BigInt::zero(); spec.cfg.len()];
        for ((ui, gi), dir) in u.iter().zip(&gamma_i).zip(&chart.directions) {
            let coeff = BigInt::from(*ui) - gi;
            for (lj, dj) in l.iter_mut().zip(dir) {
                *lj += &coeff * dj;
            }
        }
        let c = phi_coefficient(&spec.gamma, &l);
        (u, c)
    });
    let series = TruncatedSeries::new(names, spec.order, SparsePoly::from_terms(m, terms));
    Ok(PhiSeries {
        chart,
        prefactor,
        series,
    })
}

/// Residuals of the operators on a truncated formal solution, evaluated
/// only where every contributing term is known.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesResidual {
    pub order: u32,
    /// `order` minus the largest box-operator degree.
    pub verified_order: i64,
    /// Number of (operator, position) pairs evaluated.
    pub checked: usize,
    /// `(relation row, chart index u)` with a nonzero residual.
    pub box_failures: Vec<(usize, Vec<i64>)>,
    /// `(alpha coordinate, chart index u)` with a nonzero residual.
    pub euler_failures: Vec<(usize, Vec<i64>)>,
}

impl SeriesResidual {
    pub fn is_zero(&self) -> bool {
        self.box_failures.is_empty() && self.euler_failures.is_empty()
    }
}

fn falling(e: &BigRational, r: u64) -> BigRational {
    (0..r).fold(BigRational::one(), |acc, j| {
        acc * (e - BigRational::from_integer(j.into()))
    })
}

/// Applies every box operator of the relation basis and every Euler
/// operator to `phi`.
///
/// The box residual at the term `E = exponent(u)` compares
/// `[E]_{l+} c(u)` with `[E - l]_{l-} c(u - l_I)`. Terms with a negative
/// chart index vanish identically; a position is evaluated when both
/// contributors are either such a vanishing term or within the truncation.
pub fn apply_operators_series(spec: &FormalSolutionSpec, phi: &PhiSeries) -> SeriesResidual {
    let order = phi.series.order();
    let m = phi.chart.indices.len();
    let relations = spec.cfg.relations();
    let known = |u: &[i64]| -> Option<BigRational> {
        if u.iter().any(|&x| x < 0) {
            return Some(BigRational::zero());
        }
        let e: Exponent = u.iter().map(|&x| x as u32).collect();
        (degree(&e) <= order).then(|| phi.series.coefficient(&e))
    };

    let base: Vec<Vec<i64>> = simplex_points(m, order)
        .into_iter()
        .map(|u| u.into_iter().map(i64::from).collect())
        .collect();

    let mut checked = 0;
    let mut box_failures = Vec::new();
    let mut max_degree = 0i64;
    for k in 0..relations.nrows() {
        let l = relations.row(k);
        let l_chart: Vec<i64> = phi
            .chart
            .indices
            .iter()
            .map(|&j| l[j].to_i64().unwrap())
            .collect();
        let plus: Vec<u64> = l
            .iter()
            .map(|x| {
                if x.is_positive() {
                    x.to_u64().unwrap()
                } else {
                    0
                }
            })
            .collect();
        let minus: Vec<u64> = l
            .iter()
            .map(|x| {
                if x.is_negative() {
                    (-x).to_u64().unwrap()
                } else {
                    0
                }
            })
            .collect();
        max_degree = max_degree.max(plus.iter().sum::<u64>().max(minus.iter().sum()) as i64);

        let mut positions: BTreeSet<Vec<i64>> = base.iter().cloned().collect();
        positions.extend(base.iter().map(|u| {
            u.iter()
                .zip(&l_chart)
                .map(|(a, b)| a + b)
                .collect::<Vec<_>>()
        }));
        for u in positions {
            let shifted: Vec<i64> = u.iter().zip(&l_chart).map(|(a, b)| a - b).collect();
            let (Some(c_here), Some(c_back)) = (known(&u), known(&shifted)) else {
                continue;
            };
            checked += 1;
            let e = phi.exponent(&u);
            let lhs = e
                .iter()
                .zip(&plus)
                .fold(c_here, |acc, (ej, &r)| acc * falling(ej, r));
            let e_back = phi.exponent(&shifted);
            let rhs = e_back
                .iter()
                .zip(&minus)
                .fold(c_back, |acc, (ej, &r)| acc * falling(ej, r));
            if lhs != rhs {
                box_failures.push((k, u));
            }
        }
    }

    let mut euler_failures = Vec::new();
    for u in &base {
        let e: Exponent = u.iter().map(|&x| x as u32).collect();
        let c = phi.series.coefficient(&e);
        if c.is_zero() {
            continue;
        }
        let exponent = phi.exponent(u);
        let weight = spec.cfg.psi(&exponent);
        for (i, (w, a)) in weight.iter().zip(spec.alpha.values()).enumerate() {
            checked += 1;
            if w != a {
                euler_failures.push((i, u.clone()));
            }
        }
    }

    SeriesResidual {
        order,
        verified_order: i64::from(order) - max_degree,
        checked,
        box_failures,
        euler_failures,
    }
}

fn xy(order: u32) -> Vec<TruncatedSeries<BigRational>> {
    TruncatedSeries::constant(&["x", "y"], order, BigRational::one()).variables()
}

fn constant_xy(order: u32, c: i64) -> TruncatedSeries<BigRational> {
    TruncatedSeries::constant(&["x", "y"], order, BigRational::from_integer(c.into()))
}

/// Newton iteration `s <- s - F(s)/F'(s)` until the truncation is stable.
fn newton(
    start: TruncatedSeries<BigRational>,
    step: impl Fn(
        &TruncatedSeries<BigRational>,
    ) -> (TruncatedSeries<BigRational>, TruncatedSeries<BigRational>),
) -> TruncatedSeries<BigRational> {
    let mut s = start;
    for _ in 0..=s.order() + 1 {
        let (value, slope) = step(&s);
        if value.poly().is_zero() {
            break;
        }
        let correction = value.div(&slope).expect("Newton slope is a unit");
        s = s.sub(&correction);
    }
    s
}

/// `Delta = 1 + 4x + 4y + 18xy - 27x^2y^2`.
pub fn delta_series(order: u32) -> TruncatedSeries<BigRational> {
    let v = xy(order);
    let (x, y) = (&v[0], &v[1]);
    let xy = x.mul(y);
    constant_xy(order, 1)
        .add(&x.scale(&BigRational::from_integer(4.into())))
        .add(&y.scale(&BigRational::from_integer(4.into())))
        .add(&xy.scale(&BigRational::from_integer(18.into())))
        .sub(&xy.mul(&xy).scale(&BigRational::from_integer(27.into())))
}

/// The root of `x f^3 - y = f - f^2` with `f(0, 0) = 1`.
pub fn g3_f_series(order: u32) -> TruncatedSeries<BigRational> {
    let v = xy(order);
    let (x, y) = (v[0].clone(), v[1].clone());
    newton(constant_xy(order, 1), |f| {
        let f2 = f.mul(f);
        // F = x f^3 + f^2 - f - y, F' = 3 x f^2 + 2 f - 1
        let value = x.mul(&f2.mul(f)).add(&f2).sub(f).sub(&y);
        let slope = x
            .mul(&f2)
            .scale(&BigRational::from_integer(3.into()))
            .add(&f.scale(&BigRational::from_integer(2.into())))
            .sub(&constant_xy(order, 1));
        (value, slope)
    })
}

/// The root of `g (g - 1 - 3x)^2 = x^2 Delta` with `g(0, 0) = 1` and
/// `g = 1 + 2x + ...`.
///
/// The equation is singular at the origin, so write `g = 1 + 3x + x k`;
/// then `(1 + 3x + x k) k^2 = Delta` is regular with `k(0, 0) = -1`.
pub fn g3_g_series(order: u32) -> TruncatedSeries<BigRational> {
    let v = xy(order);
    let x = v[0].clone();
    let delta = delta_series(order);
    let base = constant_xy(order, 1).add(&x.scale(&BigRational::from_integer(3.into())));
    let k = newton(constant_xy(order, -1), |k| {
        let lin = base.add(&x.mul(k));
        let k2 = k.mul(k);
        let value = lin.mul(&k2).sub(&delta);
        let slope = lin
            .mul(k)
            .scale(&BigRational::from_integer(2.into()))
            .add(&x.mul(&k2));
        (value, slope)
    });
    base.add(&x.mul(&k))
}

/// `sum_{m,n} (a)_{2m-n} (b)_{2n-m} / (m! n!) x^m y^n` up to total degree `order`.
pub fn g3_series(
    a: &BigRational,
    b: &BigRational,
    order: u32,
) -> Result<TruncatedSeries<BigRational>> {
    let mut terms = Vec::new();
    for m in 0..=order {
        for n in 0..=(order - m) {
            let (mi, ni) = (i64::from(m), i64::from(n));
            let pa = pochhammer(a, 2 * mi - ni);
            let pb = pochhammer(b, 2 * ni - mi);
            let (Some(pa), Some(pb)) = (pa, pb) else {
                return Err(GkzError::InvalidInput(
                    "Pochhammer symbol with a pole: parameters must be non-integral".into(),
                ));
            };
            let c = pa * pb
                / BigRational::from_integer(factorial(u64::from(m)) * factorial(u64::from(n)));
            terms.push((vec![m, n], c));
        }
    }
    Ok(TruncatedSeries::new(
        vec!["x".into(), "y".into()],
        order,
        SparsePoly::from_terms(2, terms),
    ))
}

/// Compares `G_3(a, 1 - a, x, y)` with `f^a sqrt(g / Delta)` through `order`.
pub fn verify_g3_closed_form(a: &BigRational, order: u32) -> Result<bool> {
    if is_integral(a) {
        return Err(GkzError::InvalidInput(format!(
            "a = {a} must not be an integer"
        )));
    }
    let lhs = g3_series(a, &(BigRational::one() - a), order)?;
    let f = g3_f_series(order);
    let g = g3_g_series(order);
    let rhs = f
        .pow_rational(a)?
        .mul(&g.div(&delta_series(order))?.sqrt()?);
    Ok(lhs == rhs)
}
