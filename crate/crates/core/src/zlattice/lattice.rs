use crate::scalar::IntScalar;

use super::group::FinAbGroup;
use super::matrix::Matrix;
use super::normal_form::{hnf_with_transform, inverse_unimodular, snf};
use super::LatticeError;

/// A sublattice of `Z^ambient_rank`, stored by a basis in column Hermite normal form.
///
/// Two lattices are equal iff their HNF bases are equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Lattice<S> {
    ambient_rank: usize,
    basis: Matrix<S>,
}

impl<S: IntScalar> Lattice<S> {
    /// Lattice spanned by the columns of `generators` (need not be independent).
    pub fn span(generators: &Matrix<S>) -> Self {
        image_lattice(generators)
    }

    pub fn span_vectors(ambient_rank: usize, vectors: &[Vec<S>]) -> Self {
        image_lattice(&Matrix::from_columns(ambient_rank, vectors))
    }

    pub fn full(ambient_rank: usize) -> Self {
        Lattice { ambient_rank, basis: Matrix::identity(ambient_rank) }
    }

    pub fn zero(ambient_rank: usize) -> Self {
        Lattice { ambient_rank, basis: Matrix::zeros(ambient_rank, 0) }
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn rank(&self) -> usize {
        self.basis.cols()
    }

    /// Columns are the HNF basis vectors.
    pub fn basis(&self) -> &Matrix<S> {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vec<S>> {
        self.basis.columns()
    }

    pub fn contains(&self, x: &[S]) -> bool {
        matches!(coords_in_lattice(self, x), Ok(Some(_)))
    }

    pub fn contains_lattice(&self, other: &Self) -> bool {
        other.ambient_rank == self.ambient_rank && other.basis_vectors().iter().all(|b| self.contains(b))
    }

    /// `self + other`
    pub fn sum(&self, other: &Self) -> Result<Self, LatticeError> {
        same_ambient(self, other)?;
        Ok(image_lattice(&self.basis.hstack(&other.basis)))
    }

    /// `self ∩ other`
    pub fn intersection(&self, other: &Self) -> Result<Self, LatticeError> {
        same_ambient(self, other)?;
        preimage_lattice(self, &Matrix::identity(self.ambient_rank), other)
    }

    /// Image of the lattice under a linear map.
    pub fn map(&self, f: &Matrix<S>) -> Result<Self, LatticeError> {
        if f.cols() != self.ambient_rank {
            return Err(LatticeError::DimensionMismatch(format!(
                "map with {} columns applied to a lattice in Z^{}",
                f.cols(),
                self.ambient_rank
            )));
        }
        Ok(image_lattice(&(f * &self.basis)))
    }

    /// Smallest saturated lattice containing `self`: `(self ⊗ Q) ∩ Z^n`.
    pub fn saturation(&self) -> Self {
        // the saturation is the kernel of the left kernel
        let left = kernel_lattice(&self.basis.transpose());
        kernel_lattice(&left.basis.transpose())
    }
}

fn same_ambient<S: IntScalar>(a: &Lattice<S>, b: &Lattice<S>) -> Result<(), LatticeError> {
    if a.ambient_rank != b.ambient_rank {
        return Err(LatticeError::DimensionMismatch(format!(
            "lattices live in Z^{} and Z^{}",
            a.ambient_rank, b.ambient_rank
        )));
    }
    Ok(())
}

/// Column span of `a` over Z, in HNF.
pub fn image_lattice<S: IntScalar>(a: &Matrix<S>) -> Lattice<S> {
    let dec = hnf_with_transform(a);
    let idx: Vec<usize> = (0..dec.rank).collect();
    Lattice { ambient_rank: a.rows(), basis: dec.h.select_columns(&idx) }
}

/// `{x in Z^cols : a x = 0}`, in HNF.
pub fn kernel_lattice<S: IntScalar>(a: &Matrix<S>) -> Lattice<S> {
    let dec = hnf_with_transform(a);
    let idx: Vec<usize> = (dec.rank..a.cols()).collect();
    image_lattice(&dec.transform.select_columns(&idx))
}

/// Coordinates `c` with `basis * c = x`, or `Ok(None)` when `x` is not in the lattice.
pub fn coords_in_lattice<S: IntScalar>(l: &Lattice<S>, x: &[S]) -> Result<Option<Vec<S>>, LatticeError> {
    if x.len() != l.ambient_rank {
        return Err(LatticeError::DimensionMismatch(format!(
            "vector of length {} tested against a lattice in Z^{}",
            x.len(),
            l.ambient_rank
        )));
    }
    let b = &l.basis;
    let mut residual = x.to_vec();
    let mut coords = Vec::with_capacity(b.cols());
    let mut row = 0;
    for j in 0..b.cols() {
        // pivot row of column j: first nonzero entry
        while b[(row, j)].is_zero() {
            if !residual[row].is_zero() {
                return Ok(None);
            }
            row += 1;
        }
        let (q, r) = residual[row].div_rem(&b[(row, j)]);
        if !r.is_zero() {
            return Ok(None);
        }
        if !q.is_zero() {
            for i in row..b.rows() {
                residual[i] = residual[i].clone() - q.clone() * b[(i, j)].clone();
            }
        }
        coords.push(q);
        row += 1;
    }
    if residual.iter().all(|r| r.is_zero()) {
        Ok(Some(coords))
    } else {
        Ok(None)
    }
}

/// Matrix whose columns are the coordinates of the basis of `m` inside `l`.
pub fn coordinate_matrix<S: IntScalar>(l: &Lattice<S>, m: &Lattice<S>) -> Result<Matrix<S>, LatticeError> {
    same_ambient(l, m)?;
    let mut cols = Vec::with_capacity(m.rank());
    for v in m.basis_vectors() {
        match coords_in_lattice(l, &v)? {
            Some(c) => cols.push(c),
            None => return Err(LatticeError::NotSublattice),
        }
    }
    Ok(Matrix::from_columns(l.rank(), &cols))
}

/// The group `l / m` in invariant-factor form.
pub fn quotient_group<S: IntScalar>(l: &Lattice<S>, m: &Lattice<S>) -> Result<FinAbGroup<S>, LatticeError> {
    let c = coordinate_matrix(l, m)?;
    let dec = snf(&c);
    let diag = dec.diagonal();
    Ok(FinAbGroup::from_smith_diagonal(&diag, l.rank() - diag.len()))
}

/// `{x in l : f x in m}`.
pub fn preimage_lattice<S: IntScalar>(
    l: &Lattice<S>,
    f: &Matrix<S>,
    m: &Lattice<S>,
) -> Result<Lattice<S>, LatticeError> {
    if f.cols() != l.ambient_rank || f.rows() != m.ambient_rank {
        return Err(LatticeError::DimensionMismatch(format!(
            "map is {}x{}, source lattice in Z^{}, target lattice in Z^{}",
            f.rows(),
            f.cols(),
            l.ambient_rank,
            m.ambient_rank
        )));
    }
    // solutions (c, t) of (f B_l) c - B_m t = 0, projected to c
    let fb = f * &l.basis;
    let system = fb.hstack(&(-&m.basis));
    let ker = kernel_lattice(&system);
    let proj: Vec<usize> = (0..l.rank()).collect();
    let c = ker.basis.select_rows(&proj);
    Ok(image_lattice(&(&l.basis * &c)))
}

/// An explicit presentation of `l / m` by generators and coordinates.
///
/// Coordinates of a class are listed in the order of
/// [`FinAbGroup::generator_orders`]: torsion generators first, then free ones.
#[derive(Clone, Debug)]
pub struct QuotientPresentation<S> {
    lattice: Lattice<S>,
    sublattice: Lattice<S>,
    /// maps `l`-coordinates to diagonal coordinates
    u: Matrix<S>,
    keep: Vec<usize>,
    orders: Vec<S>,
    generators: Vec<Vec<S>>,
    group: FinAbGroup<S>,
}

impl<S: IntScalar> QuotientPresentation<S> {
    pub fn new(l: &Lattice<S>, m: &Lattice<S>) -> Result<Self, LatticeError> {
        let c = coordinate_matrix(l, m)?;
        let dec = snf(&c);
        let diag = dec.diagonal();
        let rank = l.rank();
        let mut factors: Vec<S> = diag.clone();
        factors.resize(rank, S::zero());
        // Smith order: units, then nontrivial torsion, then zeros
        let keep: Vec<usize> = (0..rank).filter(|&i| !factors[i].is_one()).collect();
        let orders: Vec<S> = keep.iter().map(|&i| factors[i].clone()).collect();
        let u_inv = inverse_unimodular(&dec.u).expect("Smith transform is unimodular");
        let gens_in_l = u_inv.select_columns(&keep);
        let generators = (&l.basis * &gens_in_l).columns();
        let group = FinAbGroup::from_smith_diagonal(&diag, rank - diag.len());
        debug_assert_eq!(group.generator_orders(), orders);
        Ok(QuotientPresentation {
            lattice: l.clone(),
            sublattice: m.clone(),
            u: dec.u,
            keep,
            orders,
            generators,
            group,
        })
    }

    pub fn group(&self) -> &FinAbGroup<S> {
        &self.group
    }

    pub fn lattice(&self) -> &Lattice<S> {
        &self.lattice
    }

    pub fn sublattice(&self) -> &Lattice<S> {
        &self.sublattice
    }

    /// Ambient representatives of the generators.
    pub fn generators(&self) -> &[Vec<S>] {
        &self.generators
    }

    /// Coordinates of the class of `x`, reduced modulo each generator order.
    pub fn classify(&self, x: &[S]) -> Result<Vec<S>, LatticeError> {
        let c = coords_in_lattice(&self.lattice, x)?.ok_or(LatticeError::NotMember)?;
        let y = self.u.mul_vec(&c);
        Ok(self.reduce(self.keep.iter().map(|&i| y[i].clone()).collect()))
    }

    /// Reduces a coordinate vector modulo the generator orders.
    pub fn reduce(&self, coords: Vec<S>) -> Vec<S> {
        coords.into_iter().zip(&self.orders).map(|(c, o)| if o.is_zero() { c } else { c.mod_floor(o) }).collect()
    }

    pub fn is_zero_class(&self, x: &[S]) -> Result<bool, LatticeError> {
        Ok(self.classify(x)?.iter().all(|c| c.is_zero()))
    }

    /// Subgroup generated by the given coordinate vectors (columns of `coords`).
    pub fn subgroup_generated(&self, coords: &Matrix<S>) -> FinAbGroup<S> {
        subgroup_of_orders(&self.orders, coords)
    }
}

/// Subgroup of `⊕ Z/o_i` generated by the columns of `coords`.
pub(crate) fn subgroup_of_orders<S: IntScalar>(orders: &[S], coords: &Matrix<S>) -> FinAbGroup<S> {
    let relations = Matrix::diagonal(orders);
    let rel = image_lattice(&relations);
    let gen = image_lattice(&coords.hstack(&relations));
    quotient_group(&gen, &rel).expect("relations lie in the generated lattice")
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    type M = Matrix<BigInt>;
    type L = Lattice<BigInt>;

    fn v(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn cyc(n: i64) -> FinAbGroup<BigInt> {
        FinAbGroup::cyclic(BigInt::from(n))
    }

    #[test]
    fn kernel_of_row_1_2_1() {
        // over Q the kernel is spanned by (1,0,-1), (0,1,-2); both are primitive
        let k = kernel_lattice(&M::from_i64_rows(&[[1, 2, 1]]));
        assert_eq!(k.rank(), 2);
        assert!(k.contains(&v(&[1, 0, -1])));
        assert!(k.contains(&v(&[0, 1, -2])));
        assert_eq!(k, L::span_vectors(3, &[v(&[1, 0, -1]), v(&[0, 1, -2])]));
    }

    #[test]
    fn kernel_trivial_cases() {
        assert_eq!(kernel_lattice(&M::identity(3)), L::zero(3));
        assert_eq!(kernel_lattice(&M::zeros(1, 3)), L::full(3));
        assert_eq!(kernel_lattice(&M::zeros(0, 2)), L::full(2));
        assert_eq!(kernel_lattice(&M::zeros(2, 0)), L::zero(0));
    }

    #[test]
    fn image_cases() {
        let l = image_lattice(&M::from_i64_rows(&[[2, 0], [0, 3]]));
        assert_eq!(l.basis(), &M::from_i64_rows(&[[2, 0], [0, 3]]));
        assert_eq!(image_lattice(&M::zeros(3, 2)), L::zero(3));
    }

    #[test]
    fn image_of_four_cycle_alpha_has_index_two_in_kernel() {
        let alpha = M::from_i64_rows(&[[-2, 2, 0], [1, -2, 1], [0, 2, -2]]);
        let im = image_lattice(&alpha);
        let ker = kernel_lattice(&M::from_i64_rows(&[[1, 2, 1]]));
        assert!(ker.contains_lattice(&im));
        assert_eq!(quotient_group(&ker, &im).unwrap(), cyc(2));
    }

    #[test]
    fn hnf_preserves_span_by_mutual_membership() {
        let a = M::from_i64_rows(&[[2, 4], [6, 8]]);
        let l = image_lattice(&a);
        for col in a.columns() {
            assert!(l.contains(&col));
        }
        for col in l.basis_vectors() {
            // solve a c = col over Z by brute force on a small box
            let found = (-6i64..=6).any(|x| (-6i64..=6).any(|y| a.mul_vec(&v(&[x, y])) == col));
            assert!(found, "{col:?} not in original span");
        }
    }

    #[test]
    fn coords_scalar_cases() {
        let l = L::span_vectors(1, &[v(&[2])]);
        assert_eq!(coords_in_lattice(&l, &v(&[4])).unwrap(), Some(v(&[2])));
        assert_eq!(coords_in_lattice(&l, &v(&[3])).unwrap(), None);
        assert!(coords_in_lattice(&l, &v(&[3, 1])).is_err());
    }

    #[test]
    fn coords_index_two_sublattice_of_kernel() {
        let l = L::span_vectors(3, &[v(&[2, -1, 0]), v(&[0, -1, 2])]);
        assert_eq!(coords_in_lattice(&l, &v(&[1, 0, -1])).unwrap(), None);
        let x = v(&[2, -2, 2]);
        let c = coords_in_lattice(&l, &x).unwrap().unwrap();
        assert_eq!(l.basis().mul_vec(&c), x);
    }

    #[test]
    fn quotient_cases() {
        let full = L::full(2);
        let m = image_lattice(&M::from_i64_rows(&[[2, 0], [0, 3]]));
        assert_eq!(quotient_group(&full, &m).unwrap(), cyc(6));
        assert_eq!(quotient_group(&m, &m).unwrap(), FinAbGroup::trivial());
        assert_eq!(quotient_group(&full, &L::zero(2)).unwrap(), FinAbGroup::free(2));
        assert!(matches!(quotient_group(&m, &full), Err(LatticeError::NotSublattice)));
    }

    #[test]
    fn preimage_cases() {
        let z = L::full(1);
        let four = L::span_vectors(1, &[v(&[4])]);
        let pre = preimage_lattice(&z, &M::from_i64_rows(&[[2]]), &four).unwrap();
        assert_eq!(pre, L::span_vectors(1, &[v(&[2])]));
        let pre = preimage_lattice(&z, &M::zeros(1, 1), &four).unwrap();
        assert_eq!(pre, z);
        assert!(matches!(preimage_lattice(&z, &M::zeros(2, 2), &four), Err(LatticeError::DimensionMismatch(_))));
    }

    #[test]
    fn saturation_and_intersection() {
        let l = L::span_vectors(2, &[v(&[2, 2])]);
        assert_eq!(l.saturation(), L::span_vectors(2, &[v(&[1, 1])]));
        let a = L::span_vectors(1, &[v(&[4])]);
        let b = L::span_vectors(1, &[v(&[6])]);
        assert_eq!(a.intersection(&b).unwrap(), L::span_vectors(1, &[v(&[12])]));
        assert_eq!(a.sum(&b).unwrap(), L::span_vectors(1, &[v(&[2])]));
    }

    #[test]
    fn presentation_classifies() {
        let full = L::full(2);
        let m = image_lattice(&M::from_i64_rows(&[[2, 0], [0, 4]]));
        let p = QuotientPresentation::new(&full, &m).unwrap();
        assert_eq!(p.group().to_string(), "Z/2 + Z/4");
        for g in p.generators() {
            assert!(!p.is_zero_class(g).unwrap());
        }
        assert!(p.is_zero_class(&v(&[2, 4])).unwrap());
        assert!(!p.is_zero_class(&v(&[0, 2])).unwrap());
        let c = p.classify(&v(&[1, 1])).unwrap();
        // (1,1) has order 4
        let four = p.reduce(c.iter().map(|x| x * BigInt::from(4)).collect());
        let two = p.reduce(c.iter().map(|x| x * BigInt::from(2)).collect());
        assert!(four.iter().all(|x| x == &BigInt::from(0)));
        assert!(two.iter().any(|x| x != &BigInt::from(0)));
    }
}
