//! Exact rational linear algebra at desk scale: canonical row reduction, affine
//! solution spaces, vertices of a box cut by an affine space, and extreme rays of
//! pointed polyhedral cones.

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, ParseError, Result};

pub type Rational = num_rational::BigRational;

/// Largest dimension handled by the combinatorial vertex and ray enumerators.
pub const MAX_ENUMERATION_DIMENSION: usize = 6;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `p`, `-p`, or `p/q`.
pub fn parse_rational(text: &str) -> Result<Rational, String> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (text, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| format!("bad rational `{text}`"))?;
    let den: BigInt = den.parse().map_err(|_| format!("bad rational `{text}`"))?;
    if den.is_zero() {
        return Err(format!("zero denominator in `{text}`"));
    }
    Ok(Rational::new(num, den))
}

pub(crate) fn parse_rational_at(line: usize, text: &str) -> Result<Rational> {
    parse_rational(text).map_err(|m| ParseError::new(line, m).into())
}

/// `p/q`, or `p` when `q = 1`.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn format_vector(v: &[Rational]) -> String {
    v.iter().map(format_rational).join(",")
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Reduced row echelon form with pivots taken left to right.
///
/// Returns the non-zero rows and their pivot columns.
pub fn rref(mut rows: Vec<Vec<Rational>>, ncols: usize) -> (Vec<Vec<Rational>>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for v in rows[r].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    *v -= &f * pv;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    (rows, pivots)
}

pub fn rank(rows: &[Vec<Rational>], ncols: usize) -> usize {
    rref(rows.to_vec(), ncols).1.len()
}

/// Basis of `{x : rows · x = 0}`, one vector per free column in increasing order.
pub fn null_space(rows: &[Vec<Rational>], ncols: usize) -> Vec<Vec<Rational>> {
    let (red, pivots) = rref(rows.to_vec(), ncols);
    (0..ncols)
        .filter(|c| !pivots.contains(c))
        .map(|f| {
            let mut v = vec![Rational::zero(); ncols];
            v[f] = Rational::one();
            for (row, &p) in red.iter().zip(&pivots) {
                v[p] = -row[f].clone();
            }
            v
        })
        .collect()
}

/// `coeffs · x = rhs`
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinearEquation {
    pub coeffs: Vec<Rational>,
    pub rhs: Rational,
}

impl LinearEquation {
    pub fn new(coeffs: Vec<Rational>, rhs: Rational) -> Self {
        Self { coeffs, rhs }
    }

    pub fn residual(&self, x: &[Rational]) -> Rational {
        dot(&self.coeffs, x) - &self.rhs
    }
}

/// `{ particular + Σ λ_i basis_i }`
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineSolutionSpace {
    pub num_vars: usize,
    pub particular: Vec<Rational>,
    pub basis: Vec<Vec<Rational>>,
    /// Canonical reduced equalities equivalent to the source system.
    pub equalities: Vec<LinearEquation>,
    pub pivots: Vec<usize>,
}

impl AffineSolutionSpace {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    /// Columns that are not pivots; the basis has one vector for each.
    pub fn free_variables(&self) -> Vec<usize> {
        (0..self.num_vars)
            .filter(|c| !self.pivots.contains(c))
            .collect()
    }

    pub fn point(&self, lambda: &[Rational]) -> Vec<Rational> {
        let mut x = self.particular.clone();
        for (l, b) in lambda.iter().zip(&self.basis) {
            for (xi, bi) in x.iter_mut().zip(b) {
                *xi += l * bi;
            }
        }
        x
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        x.len() == self.num_vars && self.equalities.iter().all(|e| e.residual(x).is_zero())
    }
}

/// Exact Gaussian elimination; `None` when the system is inconsistent.
pub fn solve_affine(num_vars: usize, equations: &[LinearEquation]) -> Option<AffineSolutionSpace> {
    let rows: Vec<Vec<Rational>> = equations
        .iter()
        .map(|e| {
            assert_eq!(e.coeffs.len(), num_vars, "equation width mismatch");
            let mut r = e.coeffs.clone();
            r.push(e.rhs.clone());
            r
        })
        .collect();
    let (red, pivots) = rref(rows, num_vars + 1);
    if pivots.last() == Some(&num_vars) {
        return None;
    }
    let mut particular = vec![Rational::zero(); num_vars];
    for (row, &p) in red.iter().zip(&pivots) {
        particular[p] = row[num_vars].clone();
    }
    let coeff_rows: Vec<Vec<Rational>> = red.iter().map(|r| r[..num_vars].to_vec()).collect();
    let basis = null_space(&coeff_rows, num_vars);
    let equalities = red
        .into_iter()
        .map(|mut r| {
            let rhs = r.pop().expect("augmented column");
            LinearEquation::new(r, rhs)
        })
        .collect();
    Some(AffineSolutionSpace {
        num_vars,
        particular,
        basis,
        equalities,
        pivots,
    })
}

/// Solves the square system `m · x = b`, if it has a unique solution.
fn solve_square(m: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let d = m.len();
    let rows: Vec<Vec<Rational>> = m
        .iter()
        .zip(b)
        .map(|(r, bi)| {
            let mut r = r.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let (red, pivots) = rref(rows, d + 1);
    if pivots.len() != d || pivots.last() == Some(&d) {
        return None;
    }
    Some(red.into_iter().map(|r| r[d].clone()).collect())
}

/// Vertices of `space ∩ [lower, upper]`, deduplicated and sorted.
pub fn box_vertices(
    space: &AffineSolutionSpace,
    lower: &[Rational],
    upper: &[Rational],
) -> Result<Vec<Vec<Rational>>> {
    let d = space.dimension();
    if d > MAX_ENUMERATION_DIMENSION {
        return Err(Error::DimensionTooLarge {
            dimension: d,
            limit: MAX_ENUMERATION_DIMENSION,
        });
    }
    let n = space.num_vars;
    let in_box = |x: &[Rational]| (0..n).all(|i| lower[i] <= x[i] && x[i] <= upper[i]);
    if d == 0 {
        let p = space.particular.clone();
        return Ok(if in_box(&p) { vec![p] } else { Vec::new() });
    }
    // Bound i as a function of λ: coordinate row B_i and the bound value minus p_i.
    let mut faces: Vec<(Vec<Rational>, Rational)> = Vec::new();
    for i in 0..n {
        let row: Vec<Rational> = space.basis.iter().map(|b| b[i].clone()).collect();
        if row.iter().all(Zero::is_zero) {
            continue;
        }
        for bound in [&lower[i], &upper[i]] {
            let face = (row.clone(), bound - &space.particular[i]);
            if !faces.contains(&face) {
                faces.push(face);
            }
        }
    }
    let mut vertices: Vec<Vec<Rational>> = faces
        .iter()
        .combinations(d)
        .filter_map(|active| {
            let m: Vec<Vec<Rational>> = active.iter().map(|f| f.0.clone()).collect();
            let b: Vec<Rational> = active.iter().map(|f| f.1.clone()).collect();
            let lambda = solve_square(&m, &b)?;
            let x = space.point(&lambda);
            in_box(&x).then_some(x)
        })
        .collect();
    vertices.sort();
    vertices.dedup();
    Ok(vertices)
}

/// `{x : equalities · x = 0, inequalities · x >= 0}`
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyhedralCone {
    pub num_vars: usize,
    pub equalities: Vec<Vec<Rational>>,
    pub inequalities: Vec<Vec<Rational>>,
}

impl PolyhedralCone {
    pub fn contains(&self, x: &[Rational]) -> bool {
        self.equalities.iter().all(|r| dot(r, x).is_zero())
            && self.inequalities.iter().all(|r| !dot(r, x).is_negative())
    }

    /// The nonnegative orthant cut by `equalities`.
    pub fn nonnegative(num_vars: usize, equalities: Vec<Vec<Rational>>) -> Self {
        let inequalities = (0..num_vars)
            .map(|i| {
                let mut r = vec![Rational::zero(); num_vars];
                r[i] = Rational::one();
                r
            })
            .collect();
        Self {
            num_vars,
            equalities,
            inequalities,
        }
    }
}

/// Scales a non-zero vector to coprime integers with the same direction.
pub fn primitive(v: &[Rational]) -> Vec<BigInt> {
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * &lcm).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}

pub fn to_rationals(v: &[BigInt]) -> Vec<Rational> {
    v.iter()
        .map(|x| Rational::from_integer(x.clone()))
        .collect()
}

/// Extreme rays of a pointed cone as primitive integer vectors, sorted.
pub fn cone_rays(cone: &PolyhedralCone) -> Result<Vec<Vec<BigInt>>> {
    let n = cone.num_vars;
    let basis = null_space(&cone.equalities, n);
    let d = basis.len();
    if d == 0 {
        return Ok(Vec::new());
    }
    if d > MAX_ENUMERATION_DIMENSION {
        return Err(Error::DimensionTooLarge {
            dimension: d,
            limit: MAX_ENUMERATION_DIMENSION,
        });
    }
    // Inequalities in the coordinates λ of x = Σ λ_j basis_j.
    let mut h: Vec<Vec<Rational>> = Vec::new();
    for row in &cone.inequalities {
        let projected: Vec<Rational> = basis.iter().map(|b| dot(row, b)).collect();
        if projected.iter().all(Zero::is_zero) {
            continue;
        }
        let p = to_rationals(&primitive(&projected));
        if !h.contains(&p) {
            h.push(p);
        }
    }
    let r = rank(&h, d);
    if r < d {
        return Err(Error::NotPointed(d - r));
    }
    let feasible = |lambda: &[Rational]| h.iter().all(|row| !dot(row, lambda).is_negative());
    let mut candidates: Vec<Vec<Rational>> = Vec::new();
    if d == 1 {
        candidates.push(vec![Rational::one()]);
        candidates.push(vec![-Rational::one()]);
    } else {
        for active in h.iter().cloned().combinations(d - 1) {
            let ns = null_space(&active, d);
            if ns.len() == 1 {
                let v = ns.into_iter().next().expect("one vector");
                let neg: Vec<Rational> = v.iter().map(|x| -x).collect();
                candidates.push(v);
                candidates.push(neg);
            }
        }
    }
    let mut rays: Vec<Vec<BigInt>> = candidates
        .into_iter()
        .filter(|l| feasible(l))
        .map(|l| {
            let x: Vec<Rational> = (0..n)
                .map(|i| basis.iter().zip(&l).map(|(b, li)| &b[i] * li).sum())
                .collect();
            primitive(&x)
        })
        .collect();
    rays.sort();
    rays.dedup();
    Ok(rays)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eq(c: &[i64], r: i64) -> LinearEquation {
        LinearEquation::new(c.iter().map(|&x| int(x)).collect(), int(r))
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn rational_text_round_trip() {
        for s in ["0", "1", "-3", "1/2", "-7/3"] {
            assert_eq!(format_rational(&parse_rational(s).unwrap()), s);
        }
        assert_eq!(format_rational(&parse_rational("4/6").unwrap()), "2/3");
        assert_eq!(format_rational(&parse_rational("3/-6").unwrap()), "-1/2");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("0.5").is_err());
    }

    #[test]
    fn single_equation_fixes_point() {
        let s = solve_affine(1, &[eq(&[1], 1)]).unwrap();
        assert_eq!(s.dimension(), 0);
        assert_eq!(s.particular, vec![int(1)]);
    }

    #[test]
    fn inconsistent_system() {
        assert!(solve_affine(2, &[eq(&[1, 1], 1), eq(&[1, 1], 2)]).is_none());
    }

    #[test]
    fn solution_space_residuals_vanish() {
        let eqs = [
            eq(&[1, 2, -1, 0], 3),
            eq(&[2, 4, 0, 1], 1),
            eq(&[3, 6, -1, 1], 4),
        ];
        let s = solve_affine(4, &eqs).unwrap();
        assert_eq!(s.dimension(), 2);
        for lambda in [[int(0), int(0)], [rat(1, 2), int(-3)], [int(7), rat(-2, 5)]] {
            let x = s.point(&lambda);
            for e in &eqs {
                assert!(e.residual(&x).is_zero());
            }
            assert!(s.contains(&x));
        }
    }

    #[test]
    fn square_box_vertices() {
        // x = y in [0,1]^2 has the vertices (0,0) and (1,1).
        let s = solve_affine(2, &[eq(&[1, -1], 0)]).unwrap();
        let v = box_vertices(&s, &[int(0), int(0)], &[int(1), int(1)]).unwrap();
        assert_eq!(v, vec![vec![int(0), int(0)], vec![int(1), int(1)]]);
    }

    #[test]
    fn box_vertices_of_point_and_empty_cut() {
        let s = solve_affine(1, &[eq(&[1], 1)]).unwrap();
        assert_eq!(box_vertices(&s, &[int(0)], &[int(1)]).unwrap().len(), 1);
        let far = solve_affine(2, &[eq(&[1, 1], 5)]).unwrap();
        assert!(box_vertices(&far, &[int(0), int(0)], &[int(1), int(1)])
            .unwrap()
            .is_empty());
    }

    #[test]
    fn dimension_guard() {
        let s = solve_affine(7, &[]).unwrap();
        let z = vec![int(0); 7];
        assert!(matches!(
            box_vertices(&s, &z, &z),
            Err(Error::DimensionTooLarge { dimension: 7, .. })
        ));
    }

    #[test]
    fn trivial_cones() {
        let zero = PolyhedralCone::nonnegative(1, vec![vec![int(1)]]);
        assert!(cone_rays(&zero).unwrap().is_empty());
        let free = PolyhedralCone::nonnegative(1, vec![]);
        assert_eq!(cone_rays(&free).unwrap(), vec![ints(&[1])]);
    }

    #[test]
    fn orthant_rays_are_unit_vectors() {
        let c = PolyhedralCone::nonnegative(3, vec![]);
        assert_eq!(
            cone_rays(&c).unwrap(),
            vec![ints(&[0, 0, 1]), ints(&[0, 1, 0]), ints(&[1, 0, 0])]
        );
    }

    #[test]
    fn plane_cut_of_orthant() {
        // x0 = x1 + x2 in the orthant: rays (1,1,0) and (1,0,1).
        let c = PolyhedralCone::nonnegative(3, vec![vec![int(1), int(-1), int(-1)]]);
        assert_eq!(
            cone_rays(&c).unwrap(),
            vec![ints(&[1, 0, 1]), ints(&[1, 1, 0])]
        );
    }

    #[test]
    fn half_plane_is_not_pointed() {
        let c = PolyhedralCone {
            num_vars: 2,
            equalities: vec![],
            inequalities: vec![vec![int(1), int(0)]],
        };
        assert!(matches!(cone_rays(&c), Err(Error::NotPointed(1))));
    }

    #[test]
    fn primitive_scaling() {
        assert_eq!(primitive(&[rat(1, 2), rat(3, 4), int(0)]), ints(&[2, 3, 0]));
        assert_eq!(primitive(&[int(4), int(6)]), ints(&[2, 3]));
    }
}
