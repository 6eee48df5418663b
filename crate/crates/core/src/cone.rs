//! The cone `C(A)`: facets, faces, irreducibility, and a placing
//! triangulation of the polytope `Q(A)` with its normalized volume.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::asystem::{AConfiguration, ParameterVector};
use crate::error::{GkzError, Result};
use crate::lattice::{dot_int, dot_int_rat, hnf, primitive, IntMatrix, IntVector, Lattice};
use crate::linalg;

/// A facet of `C(A)`: a primitive inward normal `phi` (so `phi >= 0` on the
/// cone) and the indices of the generators on which `phi` vanishes.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Facet {
    pub normal: IntVector,
    pub generators: Vec<usize>,
}

/// A proper face of `C(A)`, including the origin (empty generator set).
#[derive(Clone, Debug)]
pub struct Face {
    /// Generators lying in the face.
    pub generators: Vec<usize>,
    /// Facets containing the face.
    pub facets: Vec<usize>,
    // lattice phi_T(Z^r) for the facet normals phi_T containing the face
    image: Lattice,
}

impl Face {
    /// Whether `(alpha + Z^r)` meets the linear span of the face, which for
    /// a face full-dimensional in its span is the same as meeting the face.
    fn meets(&self, normals: &[&IntVector], alpha: &[BigRational]) -> bool {
        let image: Vec<BigRational> = normals.iter().map(|n| dot_int_rat(n, alpha)).collect();
        self.image.contains(&image)
    }
}

#[derive(Clone, Debug)]
pub struct FacetSystem {
    facets: Vec<Facet>,
    faces: Vec<Face>,
}

impl FacetSystem {
    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn normals(&self) -> impl Iterator<Item = &IntVector> {
        self.facets.iter().map(|f| &f.normal)
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn len(&self) -> usize {
        self.facets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.facets.is_empty()
    }

    pub fn contains(&self, p: &[BigRational]) -> bool {
        self.normals().all(|n| !dot_int_rat(n, p).is_negative())
    }

    /// Membership of `x / d` for an integer numerator vector `x`, `d > 0`.
    pub fn contains_scaled(&self, x: &[BigInt]) -> bool {
        self.normals().all(|n| !dot_int(n, x).is_negative())
    }
}

#[derive(Clone)]
struct Ray {
    v: IntVector,
    zeros: Vec<bool>,
}

fn independent_prefix(vectors: &[IntVector], want: usize) -> Vec<usize> {
    let mut chosen: Vec<usize> = Vec::new();
    let mut rows: Vec<Vec<BigRational>> = Vec::new();
    for (i, v) in vectors.iter().enumerate() {
        if chosen.len() == want {
            break;
        }
        let mut trial = rows.clone();
        trial.push(
            v.iter()
                .map(|x| BigRational::from_integer(x.clone()))
                .collect(),
        );
        if linalg::rank(&trial, v.len()) > rows.len() {
            rows = trial;
            chosen.push(i);
        }
    }
    chosen
}

/// Facets of `C(A)` by double description: the facet normals are the
/// extreme rays of the dual cone `{phi : phi(a_i) >= 0}`, built by adding one
/// generator constraint at a time to an initial simplicial cone.
pub fn facets(cfg: &AConfiguration) -> Result<FacetSystem> {
    let gens = cfg.generators();
    let r = cfg.rank();
    let n = gens.len();
    let basis = independent_prefix(gens, r);
    if basis.len() < r {
        return Err(GkzError::DegenerateCone);
    }

    let b_rows: Vec<Vec<BigRational>> = basis
        .iter()
        .map(|&i| {
            gens[i]
                .iter()
                .map(|x| BigRational::from_integer(x.clone()))
                .collect()
        })
        .collect();
    let inv = linalg::inverse(&b_rows).ok_or(GkzError::DegenerateCone)?;
    let mut rays: Vec<Ray> = (0..r)
        .map(|j| {
            let col: Vec<BigRational> = inv.iter().map(|row| row[j].clone()).collect();
            let den = col.iter().fold(BigInt::one(), |d, x| d.lcm(x.denom()));
            let ints: IntVector = col.iter().map(|x| (x * &den).to_integer()).collect();
            let mut zeros = vec![false; n];
            for (k, &i) in basis.iter().enumerate() {
                zeros[i] = k != j;
            }
            Ray {
                v: primitive(&ints),
                zeros,
            }
        })
        .collect();

    let mut processed: Vec<bool> = vec![false; n];
    for &i in &basis {
        processed[i] = true;
    }

    for i in 0..n {
        if processed[i] {
            continue;
        }
        let values: Vec<BigInt> = rays.iter().map(|ray| dot_int(&ray.v, &gens[i])).collect();
        let mut next: Vec<Ray> = Vec::new();
        let mut positive = Vec::new();
        let mut negative = Vec::new();
        for (k, val) in values.iter().enumerate() {
            if val.is_negative() {
                negative.push(k);
            } else {
                let mut ray = rays[k].clone();
                if val.is_zero() {
                    ray.zeros[i] = true;
                } else {
                    positive.push(k);
                }
                next.push(ray);
            }
        }
        for &p in &positive {
            for &q in &negative {
                let common: Vec<bool> = rays[p]
                    .zeros
                    .iter()
                    .zip(&rays[q].zeros)
                    .map(|(a, b)| *a && *b)
                    .collect();
                let size = common.iter().filter(|&&z| z).count();
                if size + 2 < r {
                    continue;
                }
                let blocked = rays.iter().enumerate().any(|(w, ray)| {
                    w != p && w != q && common.iter().zip(&ray.zeros).all(|(c, z)| !*c || *z)
                });
                if blocked {
                    continue;
                }
                // positive combination vanishing on a_i
                let sp = &values[p];
                let sq = -&values[q];
                let v: IntVector = rays[p]
                    .v
                    .iter()
                    .zip(&rays[q].v)
                    .map(|(x, y)| &sq * x + sp * y)
                    .collect();
                let mut zeros = common;
                zeros[i] = true;
                next.push(Ray {
                    v: primitive(&v),
                    zeros,
                });
            }
        }
        rays = next;
        processed[i] = true;
    }

    let mut facets: Vec<Facet> = rays
        .into_iter()
        .map(|ray| {
            let generators = (0..n)
                .filter(|&i| dot_int(&ray.v, &gens[i]).is_zero())
                .collect();
            Facet {
                normal: ray.v,
                generators,
            }
        })
        .collect();
    facets.sort();
    facets.dedup();
    let faces = enumerate_faces(r, &facets);
    Ok(FacetSystem { facets, faces })
}

fn enumerate_faces(r: usize, facets: &[Facet]) -> Vec<Face> {
    let mut seen: BTreeSet<Vec<usize>> = facets.iter().map(|f| f.generators.clone()).collect();
    let mut frontier: Vec<Vec<usize>> = seen.iter().cloned().collect();
    while let Some(g) = frontier.pop() {
        for f in facets {
            let meet: Vec<usize> = g
                .iter()
                .copied()
                .filter(|i| f.generators.binary_search(i).is_ok())
                .collect();
            if seen.insert(meet.clone()) {
                frontier.push(meet);
            }
        }
    }
    seen.insert(Vec::new());
    seen.into_iter()
        .map(|generators| face_from_generators(r, facets, generators))
        .collect()
}

fn face_from_generators(r: usize, facets: &[Facet], generators: Vec<usize>) -> Face {
    let tight: Vec<usize> = (0..facets.len())
        .filter(|&j| {
            generators
                .iter()
                .all(|i| facets[j].generators.binary_search(i).is_ok())
        })
        .collect();
    // phi_T as a |T| x r matrix; its column lattice is spanned by the rows of the transpose
    let phi = IntMatrix::from_rows(tight.iter().map(|&j| facets[j].normal.clone()).collect(), r);
    Face {
        generators,
        facets: tight,
        image: Lattice::from_rows(&phi.transpose()),
    }
}

/// `phi_j(p) >= 0` for every facet.
pub fn cone_contains(fs: &FacetSystem, p: &[BigRational]) -> bool {
    fs.contains(p)
}

/// Whether `(alpha + Z^r)` meets the face cut out by the given facets.
///
/// The face is full-dimensional in its span `S = ker phi_T`, so it meets the
/// shifted lattice iff `alpha ∈ S + Z^r`, i.e. iff `phi_T(alpha)` lies in the
/// lattice `phi_T(Z^r)`.
pub fn face_meets_shifted_lattice(
    cfg: &AConfiguration,
    fs: &FacetSystem,
    face: &[usize],
    alpha: &ParameterVector,
) -> bool {
    let all: Vec<usize> = (0..cfg.len()).collect();
    let generators = face.iter().fold(all, |acc, &j| {
        acc.into_iter()
            .filter(|i| fs.facets[j].generators.binary_search(i).is_ok())
            .collect()
    });
    let f = face_from_generators(cfg.rank(), &fs.facets, generators);
    let normals: Vec<&IntVector> = f.facets.iter().map(|&j| &fs.facets[j].normal).collect();
    f.meets(&normals, alpha.values())
}

/// Irreducibility: no face of `C(A)` (the origin included) meets `alpha + Z^r`.
pub fn is_irreducible(fs: &FacetSystem, alpha: &ParameterVector) -> bool {
    meeting_faces(fs, alpha).is_empty()
}

/// Indices into [`FacetSystem::faces`] of the faces met by `alpha + Z^r`.
pub fn meeting_faces(fs: &FacetSystem, alpha: &ParameterVector) -> Vec<usize> {
    fs.faces
        .iter()
        .enumerate()
        .filter(|(_, face)| {
            let normals: Vec<&IntVector> =
                face.facets.iter().map(|&j| &fs.facets[j].normal).collect();
            face.meets(&normals, alpha.values())
        })
        .map(|(k, _)| k)
        .collect()
}

/// A full-dimensional simplicial cone spanned by `r` generators, with the
/// data needed to enumerate its half-open fundamental block.
#[derive(Clone, Debug)]
pub struct Simplex {
    indices: Vec<usize>,
    // columns are the spanning generators
    basis: IntMatrix,
    det: BigInt,
    adjugate: IntMatrix,
    coset_reps: Vec<IntVector>,
}

impl Simplex {
    fn new(cfg: &AConfiguration, mut indices: Vec<usize>) -> Self {
        indices.sort_unstable();
        let cols: Vec<IntVector> = indices.iter().map(|&i| cfg.generator(i).clone()).collect();
        let basis = IntMatrix::from_columns(&cols);
        let det = basis.det();
        assert!(!det.is_zero(), "simplex generators must be independent");
        let adjugate = basis.adjugate();
        let coset_reps = coset_representatives(&basis.transpose());
        Simplex {
            indices,
            basis,
            det,
            adjugate,
            coset_reps,
        }
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    /// `|det|` of the spanning generators.
    pub fn volume(&self) -> BigInt {
        self.det.abs()
    }

    /// The points of `alpha + Z^r` in the half-open block
    /// `{sum lambda_j b_j : 0 <= lambda_j < 1}`, one per coset of `Z^r`
    /// modulo the simplex lattice. Returned as numerators over
    /// `alpha.denominator()`.
    pub fn block_points(&self, alpha: &ParameterVector) -> Vec<IntVector> {
        let d = alpha.denominator();
        let base = alpha.scaled_numerators();
        let scale = &self.det * d;
        self.coset_reps
            .iter()
            .map(|z| {
                let x: IntVector = base.iter().zip(z).map(|(b, zi)| b + d * zi).collect();
                let mu = self.adjugate.mul_vec(&x);
                let floors: IntVector = mu.iter().map(|m| m.div_floor(&scale)).collect();
                let shift = self.basis.mul_vec(&floors);
                x.iter().zip(&shift).map(|(xi, si)| xi - d * si).collect()
            })
            .collect()
    }
}

/// Representatives of `Z^r / rowspan(rows)` for a full-rank square matrix:
/// the box `0 <= z_i < H_ii` of its triangular Hermite form.
fn coset_representatives(rows: &IntMatrix) -> Vec<IntVector> {
    let h = hnf(rows).h;
    let r = rows.nrows();
    let bounds: Vec<BigInt> = (0..r).map(|i| h[(i, i)].clone()).collect();
    let mut reps = Vec::new();
    let mut z = vec![BigInt::zero(); r];
    loop {
        reps.push(z.clone());
        let mut k = 0;
        loop {
            if k == r {
                return reps;
            }
            z[k] += 1;
            if z[k] < bounds[k] {
                break;
            }
            z[k] = BigInt::zero();
            k += 1;
        }
    }
}

#[derive(Clone, Debug)]
pub struct Triangulation {
    simplices: Vec<Simplex>,
    total: BigInt,
}

impl Triangulation {
    pub fn simplices(&self) -> &[Simplex] {
        &self.simplices
    }

    /// Sum of `|det|` over the simplices: the normalized volume of `Q(A)`.
    pub fn total(&self) -> &BigInt {
        &self.total
    }
}

/// Placing triangulation of `Q(A)`: start from the first `r` independent
/// generators (input order) and cone each later generator over the boundary
/// facets it strictly sees. Generators that see no facet are not used.
pub fn triangulate(cfg: &AConfiguration) -> Triangulation {
    let gens = cfg.generators();
    let r = cfg.rank();
    let initial = independent_prefix(gens, r);
    assert_eq!(
        initial.len(),
        r,
        "validated configurations are full-dimensional"
    );
    let mut cells: Vec<Vec<usize>> = vec![initial.clone()];

    for i in 0..gens.len() {
        if initial.contains(&i) {
            continue;
        }
        // boundary facets appear in exactly one cell
        let mut ridges: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
        for cell in &cells {
            for (k, &opposite) in cell.iter().enumerate() {
                let mut ridge = cell.clone();
                ridge.remove(k);
                ridge.sort_unstable();
                ridges.entry(ridge).or_default().push(opposite);
            }
        }
        let mut added = Vec::new();
        for (ridge, opposite) in ridges {
            if opposite.len() != 1 {
                continue;
            }
            let normal = hyperplane_normal(r, &ridge, gens);
            let side = dot_int(&normal, &gens[opposite[0]]);
            let probe = dot_int(&normal, &gens[i]);
            if (side.is_positive() && probe.is_negative())
                || (side.is_negative() && probe.is_positive())
            {
                let mut cell = ridge;
                cell.push(i);
                cell.sort_unstable();
                added.push(cell);
            }
        }
        cells.extend(added);
    }

    let simplices: Vec<Simplex> = cells.into_iter().map(|c| Simplex::new(cfg, c)).collect();
    let total = simplices.iter().map(Simplex::volume).sum();
    Triangulation { simplices, total }
}

/// Normal of the hyperplane spanned by `r - 1` generators (generalized cross
/// product via cofactors).
fn hyperplane_normal(r: usize, ridge: &[usize], gens: &[IntVector]) -> IntVector {
    (0..r)
        .map(|k| {
            let mut rows: Vec<IntVector> = ridge.iter().map(|&i| gens[i].clone()).collect();
            let mut e = vec![BigInt::zero(); r];
            e[k] = BigInt::one();
            rows.push(e);
            IntMatrix::from_rows(rows, r).det()
        })
        .collect()
}

/// Normalized `(r-1)`-volume of `Q(A)`, the holonomic rank under saturation.
pub fn normalized_volume(cfg: &AConfiguration) -> BigInt {
    triangulate(cfg).total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::int_vec;
    use crate::scalar::rat;

    fn gauss() -> AConfiguration {
        AConfiguration::from_i64(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[1, 1, -1]]).unwrap()
    }

    fn normal_set(fs: &FacetSystem) -> BTreeSet<IntVector> {
        fs.normals().cloned().collect()
    }

    #[test]
    fn gauss_facets() {
        let fs = facets(&gauss()).unwrap();
        let expect: BTreeSet<IntVector> = [[1, 0, 0], [0, 1, 0], [1, 0, 1], [0, 1, 1]]
            .iter()
            .map(|v| int_vec(v))
            .collect();
        assert_eq!(normal_set(&fs), expect);
        for f in fs.facets() {
            assert_eq!(f.generators.len(), 2);
        }
    }

    #[test]
    fn standard_basis_facets() {
        let cfg = AConfiguration::from_i64(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]).unwrap();
        let fs = facets(&cfg).unwrap();
        let expect: BTreeSet<IntVector> = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
            .iter()
            .map(|v| int_vec(v))
            .collect();
        assert_eq!(normal_set(&fs), expect);
        assert_eq!(normalized_volume(&cfg), BigInt::one());
        assert_eq!(triangulate(&cfg).simplices().len(), 1);
    }

    #[test]
    fn containment_examples() {
        let cfg = gauss();
        let fs = facets(&cfg).unwrap();
        for a in cfg.generators() {
            let q: Vec<BigRational> = a
                .iter()
                .map(|x| BigRational::from_integer(x.clone()))
                .collect();
            assert!(cone_contains(&fs, &q));
        }
        assert!(!cone_contains(&fs, &[rat(-1, 1), rat(0, 1), rat(0, 1)]));
        // -1 < a < c < b < 0
        let (a, b, c) = (rat(-3, 4), rat(-1, 5), rat(-1, 2));
        let p = [-a, rat(1, 1) - b, c];
        assert!(cone_contains(&fs, &p));
    }

    #[test]
    fn gauss_volume_is_two() {
        let tri = triangulate(&gauss());
        assert_eq!(tri.total(), &BigInt::from(2));
        assert_eq!(tri.simplices().len(), 2);
    }

    #[test]
    fn gauss_faces_include_origin() {
        let fs = facets(&gauss()).unwrap();
        // 4 facets, 4 rays, origin
        assert_eq!(fs.faces().len(), 9);
        assert!(fs.faces().iter().any(|f| f.generators.is_empty()));
    }

    #[test]
    fn gauss_face_meets() {
        let cfg = gauss();
        let fs = facets(&cfg).unwrap();
        let x_eq_0 = fs
            .facets()
            .iter()
            .position(|f| f.normal == int_vec(&[1, 0, 0]))
            .unwrap();
        // a = 2 integral: alpha = (-2, -1/3, c - 1)
        let alpha = ParameterVector::new(vec![rat(-2, 1), rat(-1, 3), rat(-3, 5)]);
        assert!(face_meets_shifted_lattice(&cfg, &fs, &[x_eq_0], &alpha));
        assert!(!is_irreducible(&fs, &alpha));

        let generic = ParameterVector::new(vec![rat(-1, 3), rat(-1, 4), rat(-4, 5)]);
        for j in 0..fs.len() {
            assert!(!face_meets_shifted_lattice(&cfg, &fs, &[j], &generic));
        }
        assert!(is_irreducible(&fs, &generic));

        let integral = ParameterVector::from_fractions(&[(1, 1), (-2, 1), (0, 1)]);
        for j in 0..fs.len() {
            assert!(face_meets_shifted_lattice(&cfg, &fs, &[j], &integral));
        }
        assert!(!is_irreducible(&fs, &integral));
    }

    #[test]
    fn face_closure_of_non_adjacent_facets() {
        // x = 0 and y + z = 0 meet C(A) only at the origin
        let cfg = gauss();
        let fs = facets(&cfg).unwrap();
        let j1 = fs
            .facets()
            .iter()
            .position(|f| f.normal == int_vec(&[1, 0, 0]))
            .unwrap();
        let j2 = fs
            .facets()
            .iter()
            .position(|f| f.normal == int_vec(&[0, 1, 1]))
            .unwrap();
        // alpha on the line x = 0, y + z = 0 but not integral
        let alpha = ParameterVector::new(vec![rat(0, 1), rat(1, 2), rat(-1, 2)]);
        assert!(!face_meets_shifted_lattice(&cfg, &fs, &[j1, j2], &alpha));
    }

    #[test]
    fn block_points_count_equals_volume() {
        let cfg = AConfiguration::from_i64(&[&[-1, 2], &[0, 1], &[1, 0], &[2, -1]]).unwrap();
        let tri = triangulate(&cfg);
        assert_eq!(tri.total(), &BigInt::from(3));
        let alpha = ParameterVector::from_fractions(&[(-1, 2), (-1, 3)]);
        for s in tri.simplices() {
            let pts = s.block_points(&alpha);
            assert_eq!(BigInt::from(pts.len()), s.volume());
        }
    }
}
