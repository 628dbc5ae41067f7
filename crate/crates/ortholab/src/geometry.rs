//! Vectors in `F_q^d`, dot products, hyperplanes, lines through the origin,
//! and circles/spheres over the prime subfield.
//!
//! A vector's canonical integer encoding is `venc = sum_i enc(x_i) * q^i`,
//! a bijection onto `[0, q^d)`. Point sets keep their members sorted by venc
//! and answer membership in O(1) through a venc index.

use std::collections::HashSet;

use crate::ffield::{Field, FieldElement};
use crate::{Error, Result};

/// Ceiling on how many vectors a full-space enumeration may touch.
pub const ENUM_BUDGET: u64 = 100_000_000;

fn universe_size(field: &Field, dim: usize) -> Result<u64> {
    let d32 = u32::try_from(dim)
        .map_err(|_| Error::UniverseTooLarge { q: field.order(), d: dim })?;
    field
        .order()
        .checked_pow(d32)
        .filter(|&u| u <= 1 << 62)
        .ok_or(Error::UniverseTooLarge { q: field.order(), d: dim })
}

/// A vector in `F_q^d`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FVector {
    field: Field,
    coords: Vec<FieldElement>,
}

impl FVector {
    pub fn new(field: Field, coords: Vec<FieldElement>) -> Result<FVector> {
        if coords.iter().any(|c| c.field() != &field) {
            return Err(Error::MixedFields);
        }
        Ok(FVector { field, coords })
    }

    pub fn from_encs(field: Field, encs: &[u64]) -> Result<FVector> {
        let coords = encs
            .iter()
            .map(|&e| field.from_enc(e))
            .collect::<Result<Vec<_>>>()?;
        Ok(FVector { field, coords })
    }

    /// Decode `venc = sum enc(x_i) * q^i`.
    pub fn from_venc(field: Field, dim: usize, venc: u64) -> Result<FVector> {
        let universe = universe_size(&field, dim)?;
        if venc >= universe {
            return Err(Error::BadEncoding { enc: venc, q: universe });
        }
        let q = field.order();
        let mut rest = venc;
        let mut coords = Vec::with_capacity(dim);
        for _ in 0..dim {
            coords.push(field.from_enc(rest % q)?);
            rest /= q;
        }
        Ok(FVector { field, coords })
    }

    pub fn zero(field: Field, dim: usize) -> FVector {
        FVector { field, coords: vec![field.zero(); dim] }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[FieldElement] {
        &self.coords
    }

    pub fn venc(&self) -> u64 {
        let q = self.field.order();
        self.coords.iter().rev().fold(0u64, |acc, c| acc * q + c.enc())
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(FieldElement::is_zero)
    }

    fn check_compatible(&self, rhs: &FVector) -> Result<()> {
        if self.field != rhs.field {
            return Err(Error::MixedFields);
        }
        if self.dim() != rhs.dim() {
            return Err(Error::DimensionMismatch(self.dim(), rhs.dim()));
        }
        Ok(())
    }

    /// Standard dot product `sum_i u_i v_i`.
    pub fn dot(&self, rhs: &FVector) -> Result<FieldElement> {
        self.check_compatible(rhs)?;
        let mut acc = self.field.zero();
        for (u, v) in self.coords.iter().zip(&rhs.coords) {
            acc = acc.add(u.mul(*v)?)?;
        }
        Ok(acc)
    }

    pub fn add(&self, rhs: &FVector) -> Result<FVector> {
        self.check_compatible(rhs)?;
        let coords = self
            .coords
            .iter()
            .zip(&rhs.coords)
            .map(|(u, v)| u.add(*v))
            .collect::<Result<Vec<_>>>()?;
        Ok(FVector { field: self.field, coords })
    }

    pub fn scale(&self, t: FieldElement) -> Result<FVector> {
        let coords = self.coords.iter().map(|u| u.mul(t)).collect::<Result<Vec<_>>>()?;
        Ok(FVector { field: self.field, coords })
    }

    /// `x . x = 0`.
    pub fn is_isotropic(&self) -> bool {
        self.dot(self).expect("self-compatible").is_zero()
    }

    /// Concatenate coordinates (same field).
    pub fn concat(&self, rhs: &FVector) -> Result<FVector> {
        if self.field != rhs.field {
            return Err(Error::MixedFields);
        }
        let mut coords = self.coords.clone();
        coords.extend_from_slice(&rhs.coords);
        Ok(FVector { field: self.field, coords })
    }

    /// Append a zero coordinate; dot products are unchanged.
    pub fn append_zero(&self) -> FVector {
        let mut coords = self.coords.clone();
        coords.push(self.field.zero());
        FVector { field: self.field, coords }
    }
}

impl std::fmt::Display for FVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// A set `E` of distinct vectors in `F_q^d`, sorted by venc, with O(1)
/// membership.
#[derive(Debug, Clone)]
pub struct PointSet {
    field: Field,
    dim: usize,
    members: Vec<FVector>,
    vencs: Vec<u64>,
    index: HashSet<u64>,
}

impl PointSet {
    pub fn empty(field: Field, dim: usize) -> PointSet {
        PointSet { field, dim, members: Vec::new(), vencs: Vec::new(), index: HashSet::new() }
    }

    /// Build from vectors, silently deduplicating.
    pub fn from_vectors(field: Field, dim: usize, vectors: Vec<FVector>) -> Result<PointSet> {
        universe_size(&field, dim)?;
        let mut keyed: Vec<(u64, FVector)> = Vec::with_capacity(vectors.len());
        for v in vectors {
            if v.field() != &field {
                return Err(Error::MixedFields);
            }
            if v.dim() != dim {
                return Err(Error::DimensionMismatch(v.dim(), dim));
            }
            keyed.push((v.venc(), v));
        }
        keyed.sort_by_key(|(venc, _)| *venc);
        keyed.dedup_by_key(|(venc, _)| *venc);
        let index: HashSet<u64> = keyed.iter().map(|(venc, _)| *venc).collect();
        let (vencs, members) = keyed.into_iter().unzip();
        Ok(PointSet { field, dim, members, vencs, index })
    }

    pub fn from_vencs(field: Field, dim: usize, vencs: &[u64]) -> Result<PointSet> {
        let vectors = vencs
            .iter()
            .map(|&v| FVector::from_venc(field, dim, v))
            .collect::<Result<Vec<_>>>()?;
        PointSet::from_vectors(field, dim, vectors)
    }

    /// All of `F_q^d`, optionally without the zero vector.
    pub fn full_space(field: Field, dim: usize, include_zero: bool) -> Result<PointSet> {
        let universe = universe_size(&field, dim)?;
        if universe > ENUM_BUDGET {
            return Err(Error::BudgetExceeded {
                cost: universe as u128,
                budget: ENUM_BUDGET as u128,
                unit: "vectors",
                hint: "full-space enumeration is desk-scale only",
            });
        }
        let start = u64::from(!include_zero);
        let members: Vec<FVector> = (start..universe)
            .map(|venc| FVector::from_venc(field, dim, venc).expect("venc < universe"))
            .collect();
        let vencs: Vec<u64> = (start..universe).collect();
        let index = vencs.iter().copied().collect();
        Ok(PointSet { field, dim, members, vencs, index })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Members in venc order.
    pub fn iter(&self) -> impl Iterator<Item = &FVector> {
        self.members.iter()
    }

    pub fn vencs(&self) -> &[u64] {
        &self.vencs
    }

    pub fn contains(&self, v: &FVector) -> bool {
        self.contains_venc(v.venc())
    }

    pub fn contains_venc(&self, venc: u64) -> bool {
        self.index.contains(&venc)
    }

    pub fn contains_zero(&self) -> bool {
        self.contains_venc(0)
    }

    /// `|E intersect H_tuple|`, counted by scanning E.
    pub fn count_in_hyperplane(&self, tuple: &[FVector]) -> Result<u64> {
        let mut n = 0u64;
        for y in &self.members {
            let mut all_zero = true;
            for x in tuple {
                if !y.dot(x)?.is_zero() {
                    all_zero = false;
                    break;
                }
            }
            if all_zero {
                n += 1;
            }
        }
        Ok(n)
    }
}

/// Exact solution set `H = { y : y . x^i = 0 for all i }`, by enumeration of
/// the whole space. Size is a power of q; the empty tuple yields all of
/// `F_q^d`.
pub fn hyperplane_members(field: Field, dim: usize, tuple: &[FVector]) -> Result<PointSet> {
    let universe = universe_size(&field, dim)?;
    if universe > ENUM_BUDGET {
        return Err(Error::BudgetExceeded {
            cost: universe as u128,
            budget: ENUM_BUDGET as u128,
            unit: "vectors",
            hint: "hyperplane enumeration is desk-scale only",
        });
    }
    for x in tuple {
        if x.field() != &field {
            return Err(Error::MixedFields);
        }
        if x.dim() != dim {
            return Err(Error::DimensionMismatch(x.dim(), dim));
        }
    }
    let mut members = Vec::new();
    'outer: for venc in 0..universe {
        let y = FVector::from_venc(field, dim, venc)?;
        for x in tuple {
            if !y.dot(x)?.is_zero() {
                continue 'outer;
            }
        }
        members.push(y);
    }
    PointSet::from_vectors(field, dim, members)
}

/// A line through the origin in `F_q^2`, identified by the nonzero point on
/// it with the smallest venc.
#[derive(Debug, Clone)]
pub struct ProjectiveLine {
    rep: FVector,
    points: Vec<FVector>,
}

impl ProjectiveLine {
    /// The line `{ t*v : t in F_q }` through a nonzero direction.
    pub fn through(direction: &FVector) -> Result<ProjectiveLine> {
        if direction.is_zero() {
            return Err(Error::InvalidArgument(
                "a line through the origin needs a nonzero direction".into(),
            ));
        }
        let field = *direction.field();
        let mut points: Vec<FVector> = field
            .elements()
            .map(|t| direction.scale(t))
            .collect::<Result<Vec<_>>>()?;
        points.sort_by_key(FVector::venc);
        points.dedup_by_key(|v| v.venc());
        // points[0] is the origin; the canonical representative is the
        // smallest nonzero venc.
        let rep = points[1].clone();
        Ok(ProjectiveLine { rep, points })
    }

    pub fn representative(&self) -> &FVector {
        &self.rep
    }

    /// All q points, origin included, sorted by venc.
    pub fn points(&self) -> &[FVector] {
        &self.points
    }

    pub fn nonzero_points(&self) -> &[FVector] {
        &self.points[1..]
    }

    /// `v . v = 0` for the direction, equivalently the line equals its own
    /// perpendicular.
    pub fn is_isotropic(&self) -> bool {
        self.rep.is_isotropic()
    }

    /// The unique line whose direction w satisfies v . w = 0 (dimension 2).
    pub fn perp(&self) -> Result<ProjectiveLine> {
        if self.rep.dim() != 2 {
            return Err(Error::DimensionMismatch(self.rep.dim(), 2));
        }
        let [a, b] = self.rep.coords() else { unreachable!() };
        let dir = FVector::new(*self.rep.field(), vec![*b, a.neg()])?;
        ProjectiveLine::through(&dir)
    }
}

impl PartialEq for ProjectiveLine {
    fn eq(&self, other: &Self) -> bool {
        self.rep.venc() == other.rep.venc() && self.rep.field() == other.rep.field()
    }
}
impl Eq for ProjectiveLine {}

/// All q+1 lines through the origin in `F_q^2`, sorted by representative
/// venc. Pairwise intersections are exactly the origin and the union covers
/// the plane.
pub fn lines_through_origin(field: Field) -> Result<Vec<ProjectiveLine>> {
    let universe = universe_size(&field, 2)?;
    let mut covered = vec![false; universe as usize];
    let mut lines = Vec::with_capacity(field.order() as usize + 1);
    for venc in 1..universe {
        if covered[venc as usize] {
            continue;
        }
        let v = FVector::from_venc(field, 2, venc)?;
        let line = ProjectiveLine::through(&v)?;
        for pt in line.nonzero_points() {
            covered[pt.venc() as usize] = true;
        }
        debug_assert_eq!(line.representative().venc(), venc);
        lines.push(line);
    }
    Ok(lines)
}

/// Points of the unit circle `x1^2 + x2^2 = 1` over the prime subfield,
/// embedded in `F_q^2` via the subfield inclusion. Exact enumeration of all
/// p^2 candidate pairs.
pub fn subfield_circle(field: &Field) -> Result<PointSet> {
    subfield_sphere(field, 2)
}

/// Points of the unit sphere `x1^2 + ... + xm^2 = 1` over the prime subfield,
/// embedded in `F_q^m`.
pub fn subfield_sphere(field: &Field, m: usize) -> Result<PointSet> {
    if m == 0 {
        return Err(Error::InvalidArgument("sphere dimension must be >= 1".into()));
    }
    let p = field.p();
    let candidates = u32::try_from(m)
        .ok()
        .and_then(|e| p.checked_pow(e))
        .filter(|&n| n <= ENUM_BUDGET)
        .ok_or(Error::BudgetExceeded {
            cost: 0,
            budget: ENUM_BUDGET as u128,
            unit: "candidate tuples",
            hint: "sphere enumeration is desk-scale only",
        })?;
    let mut members = Vec::new();
    for code in 0..candidates {
        let mut rest = code;
        let mut sum = 0u64;
        let mut coords = Vec::with_capacity(m);
        for _ in 0..m {
            let x = rest % p;
            rest /= p;
            sum = (sum + x * x) % p;
            coords.push(x);
        }
        if sum == 1 % p {
            let vector = FVector::new(
                *field,
                coords
                    .iter()
                    .map(|&x| field.element(x, 0))
                    .collect::<Result<Vec<_>>>()?,
            )?;
            members.push(vector);
        }
    }
    PointSet::from_vectors(*field, m, members)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    fn f(p: u64, e: u32) -> Field {
        Field::new(p, e).unwrap()
    }

    fn vec_of(field: Field, encs: &[u64]) -> FVector {
        FVector::from_encs(field, encs).unwrap()
    }

    #[test]
    fn venc_bijection() {
        let field = f(3, 2);
        for venc in 0..81 {
            let v = FVector::from_venc(field, 2, venc).unwrap();
            assert_eq!(v.venc(), venc);
        }
        assert!(FVector::from_venc(field, 2, 81).is_err());
    }

    #[test]
    fn dot_examples() {
        let f3 = f(3, 1);
        assert!(vec_of(f3, &[1, 0]).dot(&vec_of(f3, &[0, 2])).unwrap().is_zero());
        assert!(vec_of(f3, &[1, 1]).dot(&vec_of(f3, &[1, 2])).unwrap().is_zero());
        // (t,1).(t,1) = t^2 + 1 = 0 in F_9: an isotropic vector.
        let f9 = f(3, 2);
        let t = f9.element(0, 1).unwrap();
        let one = f9.one();
        let v = FVector::new(f9, vec![t, one]).unwrap();
        assert!(v.is_isotropic());
        // Dimension mismatch is an error.
        assert!(vec_of(f3, &[1, 0]).dot(&vec_of(f3, &[1, 0, 0])).is_err());
    }

    #[test]
    fn dot_symmetric_and_bilinear() {
        let field = f(5, 1);
        let mut rng = SplitMix64::new(42);
        for _ in 0..200 {
            let u = FVector::from_venc(field, 3, rng.below(125)).unwrap();
            let v = FVector::from_venc(field, 3, rng.below(125)).unwrap();
            let w = FVector::from_venc(field, 3, rng.below(125)).unwrap();
            assert_eq!(u.dot(&v).unwrap(), v.dot(&u).unwrap());
            assert_eq!(
                u.add(&w).unwrap().dot(&v).unwrap(),
                u.dot(&v).unwrap().add(w.dot(&v).unwrap()).unwrap()
            );
        }
    }

    #[test]
    fn hyperplane_examples() {
        let f3 = f(3, 1);
        let h = hyperplane_members(f3, 2, &[vec_of(f3, &[1, 0])]).unwrap();
        assert_eq!(h.vencs(), &[0, 3, 6]); // (0,0),(0,1),(0,2)
        let h = hyperplane_members(f3, 2, &[vec_of(f3, &[0, 0])]).unwrap();
        assert_eq!(h.len(), 9);
        let h = hyperplane_members(f3, 2, &[]).unwrap();
        assert_eq!(h.len(), 9);
        // Derived by enumeration of all 27 vectors of F_3^3.
        let h = hyperplane_members(f3, 3, &[vec_of(f3, &[1, 0, 0]), vec_of(f3, &[0, 1, 0])]).unwrap();
        assert_eq!(h.len(), 3);
    }

    #[test]
    fn hyperplane_sizes_are_powers_of_q_and_members_check_out() {
        let field = f(3, 1);
        let mut rng = SplitMix64::new(7);
        for _ in 0..40 {
            let len = rng.below(3) as usize;
            let tuple: Vec<FVector> = (0..len)
                .map(|_| FVector::from_venc(field, 3, rng.below(27)).unwrap())
                .collect();
            let h = hyperplane_members(field, 3, &tuple).unwrap();
            let mut size = h.len() as u64;
            while size > 1 {
                assert_eq!(size % 3, 0, "|H| = {} not a power of 3", h.len());
                size /= 3;
            }
            for y in h.iter() {
                for x in &tuple {
                    assert!(y.dot(x).unwrap().is_zero());
                }
            }
        }
    }

    #[test]
    fn lines_count_and_partition() {
        for (q, lines_expected) in [(3u64, 4usize), (5, 6), (7, 8)] {
            let field = Field::from_order(q).unwrap();
            let lines = lines_through_origin(field).unwrap();
            assert_eq!(lines.len(), lines_expected);
            // Nonzero points partition the punctured plane.
            let mut seen = HashSet::new();
            for line in &lines {
                assert_eq!(line.points().len(), q as usize);
                assert!(line.points()[0].is_zero());
                for pt in line.nonzero_points() {
                    assert!(seen.insert(pt.venc()), "lines overlap off the origin");
                }
            }
            assert_eq!(seen.len() as u64, q * q - 1);
        }
    }

    #[test]
    fn perp_examples_and_involution() {
        let f3 = f(3, 1);
        let x_axis = ProjectiveLine::through(&vec_of(f3, &[1, 0])).unwrap();
        let y_axis = ProjectiveLine::through(&vec_of(f3, &[0, 1])).unwrap();
        assert_eq!(x_axis.perp().unwrap(), y_axis);

        // (1,2) in F_5^2 is isotropic: 1 + 4 = 0. Its line is its own perp.
        let f5 = f(5, 1);
        let l = ProjectiveLine::through(&vec_of(f5, &[1, 2])).unwrap();
        assert!(l.is_isotropic());
        assert_eq!(l.perp().unwrap(), l);

        for q in [3u64, 5, 7, 9, 13] {
            let field = Field::from_order(q).unwrap();
            let lines = lines_through_origin(field).unwrap();
            let isotropic = lines.iter().filter(|l| l.is_isotropic()).count();
            assert_eq!(isotropic, if q % 4 == 3 { 0 } else { 2 }, "q = {q}");
            for line in &lines {
                let perp = line.perp().unwrap();
                assert_eq!(perp.perp().unwrap(), *line);
                assert!(line
                    .representative()
                    .dot(perp.representative())
                    .unwrap()
                    .is_zero());
                assert_eq!(perp == *line, line.is_isotropic());
            }
        }
    }

    /// Oracle: direct enumeration of pairs over F_p, no embedding.
    fn circle_size_oracle(p: u64) -> u64 {
        let mut n = 0;
        for x in 0..p {
            for y in 0..p {
                if (x * x + y * y) % p == 1 % p {
                    n += 1;
                }
            }
        }
        n
    }

    #[test]
    fn circle_examples() {
        let c3 = subfield_circle(&f(3, 2)).unwrap();
        assert_eq!(c3.vencs(), &[1, 2, 9, 18]); // (1,0),(2,0),(0,1),(0,2) in F_9^2
        assert_eq!(c3.len() as u64, circle_size_oracle(3));

        for p in [3u64, 5, 7, 11, 19] {
            let field = f(p, if p == 5 { 1 } else { 2 });
            let c = subfield_circle(&field).unwrap();
            assert_eq!(c.len() as u64, circle_size_oracle(p), "p = {p}");
        }
        assert_eq!(circle_size_oracle(5), 4);
        assert_eq!(circle_size_oracle(7), 8);
    }

    #[test]
    fn sphere_examples() {
        let f9 = f(3, 2);
        assert_eq!(subfield_sphere(&f9, 3).unwrap().len(), 6);
        let s1 = subfield_sphere(&f9, 1).unwrap();
        assert_eq!(s1.vencs(), &[1, 2]); // {1, 2} = {1, -1}
        let f25 = f(5, 2);
        assert_eq!(subfield_sphere(&f25, 2).unwrap().len(), 4);
        assert!(subfield_sphere(&f9, 0).is_err());
    }

    #[test]
    fn circle_and_sphere_dots_stay_in_prime_subfield() {
        for (p, m) in [(3u64, 2usize), (7, 2), (11, 2), (3, 3), (5, 3)] {
            let field = f(p, 2);
            let s = subfield_sphere(&field, m).unwrap();
            for u in s.iter() {
                for v in s.iter() {
                    let (_, b) = u.dot(v).unwrap().coeffs();
                    assert_eq!(b, 0, "dot left the prime subfield at p={p}, m={m}");
                }
            }
        }
    }

    #[test]
    fn point_set_basics() {
        let f3 = f(3, 1);
        let e = PointSet::from_vencs(f3, 2, &[4, 1, 4, 7]).unwrap();
        assert_eq!(e.len(), 3); // dedup
        assert_eq!(e.vencs(), &[1, 4, 7]);
        assert!(e.contains_venc(4));
        assert!(!e.contains_venc(0));
        assert!(!e.contains_zero());

        let full = PointSet::full_space(f3, 2, true).unwrap();
        assert_eq!(full.len(), 9);
        let punctured = PointSet::full_space(f3, 2, false).unwrap();
        assert_eq!(punctured.len(), 8);
        assert!(!punctured.contains_zero());
    }

    #[test]
    fn count_in_hyperplane_matches_enumeration() {
        let f5 = f(5, 1);
        let mut rng = SplitMix64::new(99);
        for _ in 0..30 {
            let e = PointSet::from_vencs(
                f5,
                2,
                &(0..rng.below(20)).map(|_| rng.below(25)).collect::<Vec<_>>(),
            )
            .unwrap();
            let x = FVector::from_venc(f5, 2, rng.below(25)).unwrap();
            let h = hyperplane_members(f5, 2, std::slice::from_ref(&x)).unwrap();
            let by_scan = e.count_in_hyperplane(std::slice::from_ref(&x)).unwrap();
            let by_intersection =
                e.iter().filter(|v| h.contains_venc(v.venc())).count() as u64;
            assert_eq!(by_scan, by_intersection);
        }
    }

    #[test]
    fn concat_and_append_zero() {
        let f3 = f(3, 1);
        let u = vec_of(f3, &[1, 2]);
        let v = vec_of(f3, &[0, 1]);
        let w = u.concat(&v).unwrap();
        assert_eq!(w.dim(), 4);
        assert_eq!(
            w.dot(&w).unwrap(),
            u.dot(&u).unwrap().add(v.dot(&v).unwrap()).unwrap()
        );
        let z = u.append_zero();
        assert_eq!(z.dim(), 3);
        assert_eq!(z.dot(&z).unwrap(), u.dot(&u).unwrap());
    }
}
