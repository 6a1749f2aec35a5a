//! The matrix-level semi-free dg-algebra `(Q₃)_n` and the degree −1 part of
//! the Chevalley–Eilenberg differential at a polystable point, compared with
//! gradient ideals of the trace potential.
//!
//! Both sides only involve quadrics, and two ideals generated by homogeneous
//! quadrics agree iff their generators span the same space of quadrics, so
//! ideal equality is decided by exact rank comparison.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactalg::{poly_commutator, Matrix, Monomial, Poly, PolyMatrix, Scalar, Vars};

const SLOTS: [&str; 3] = ["X", "Y", "Z"];

/// Element of `(Q₃)_n` of the form `Σ f_g · g`, with `g` ranging over the
/// odd generators `X*_ij, Y*_ij, Z*_ij` and `f_g` polynomial in `X, Y, Z`.
/// This covers `δW`, the only place the differential meets odd generators.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct OddLinear {
    /// `(slot, i, j)` of the starred generator → coefficient.
    pub parts: BTreeMap<(usize, usize, usize), Poly>,
}

#[derive(Debug, Clone)]
pub struct MatrixDGA {
    n: usize,
    vars: Vars,
    /// Indeterminate matrices `X, Y, Z` (degree 0).
    xyz: [PolyMatrix; 3],
    /// `δX* = [Y,Z]`, `δY* = [Z,X]`, `δZ* = [X,Y]`.
    delta_star: [PolyMatrix; 3],
    /// `δW = [X,X*] + [Y,Y*] + [Z,Z*]`, entrywise.
    delta_w: Vec<OddLinear>,
}

pub fn build_q3n(n: usize) -> Result<MatrixDGA> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be at least 1".into()));
    }
    let names: Vec<String> = SLOTS
        .iter()
        .flat_map(|s| (0..n).flat_map(move |i| (0..n).map(move |j| format!("{s}_{}{}", i + 1, j + 1))))
        .collect();
    let vars = Vars::new(&names);
    let mat = |s: usize| PolyMatrix::from_fn(&vars, n, n, |i, j| Poly::var(&vars, s * n * n + i * n + j));
    let xyz = [mat(0), mat(1), mat(2)];
    let delta_star = [
        poly_commutator(&xyz[1], &xyz[2])?,
        poly_commutator(&xyz[2], &xyz[0])?,
        poly_commutator(&xyz[0], &xyz[1])?,
    ];
    // [M, M*]_ij = Σ_k M_ik M*_kj − M*_ik M_kj
    let mut delta_w = vec![OddLinear::default(); n * n];
    for i in 0..n {
        for j in 0..n {
            let e = &mut delta_w[i * n + j].parts;
            for (s, m) in xyz.iter().enumerate() {
                for k in 0..n {
                    let mut add = |key, p: Poly| {
                        let cur = e.remove(&key).unwrap_or_else(|| Poly::zero(&vars));
                        let sum = &cur + &p;
                        if !sum.is_zero() {
                            e.insert(key, sum);
                        }
                    };
                    add((s, k, j), m[(i, k)].clone());
                    add((s, i, k), -&m[(k, j)]);
                }
            }
        }
    }
    Ok(MatrixDGA { n, vars, xyz, delta_star, delta_w })
}

impl MatrixDGA {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn xyz(&self) -> &[PolyMatrix; 3] {
        &self.xyz
    }

    pub fn delta_star(&self) -> &[PolyMatrix; 3] {
        &self.delta_star
    }

    pub fn delta_w(&self) -> &[OddLinear] {
        &self.delta_w
    }

    /// `(name, degree, count)` for the seven generator matrices.
    pub fn generator_counts(&self) -> Vec<(String, i32, usize)> {
        let nn = self.n * self.n;
        let mut out: Vec<(String, i32, usize)> = SLOTS.iter().map(|s| (s.to_string(), 0, nn)).collect();
        out.extend(SLOTS.iter().map(|s| (format!("{s}*"), -1, nn)));
        out.push(("W".into(), -2, nn));
        out
    }

    /// `δ` on an odd-linear element: degree-0 coefficients are cocycles and
    /// pass through, each starred generator is replaced by its image.
    pub fn delta(&self, e: &OddLinear) -> Poly {
        e.parts.iter().fold(Poly::zero(&self.vars), |acc, (&(s, i, j), f)| {
            &acc + &(f * &self.delta_star[s][(i, j)])
        })
    }
}

/// `δ²` on the starred generators vanishes for degree reasons: their images
/// are polynomials in `X, Y, Z`, which are cocycles. Only `W` needs checking.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DeltaSquaredReport {
    pub n: usize,
    /// `δ(δW) = [X,[Y,Z]] + [Y,[Z,X]] + [Z,[X,Y]] = 0`.
    pub w: bool,
    /// The same Jacobi sum expanded independently from the matrices.
    pub jacobi_expansion_zero: bool,
}

impl DeltaSquaredReport {
    pub fn holds(&self) -> bool {
        self.w && self.jacobi_expansion_zero
    }
}

pub fn verify_delta_squared(n: usize) -> Result<DeltaSquaredReport> {
    let q = build_q3n(n)?;
    let w = q.delta_w.iter().all(|e| q.delta(e).is_zero());
    let [x, y, z] = &q.xyz;
    let jac = poly_commutator(x, &q.delta_star[0])?
        .try_add(&poly_commutator(y, &q.delta_star[1])?)?
        .try_add(&poly_commutator(z, &q.delta_star[2])?)?;
    Ok(DeltaSquaredReport { n, w, jacobi_expansion_zero: jac.is_zero() })
}

/// Whether two families of homogeneous polynomials span the same space.
pub fn same_span(a: &[Poly], b: &[Poly]) -> Result<bool> {
    let keys: BTreeSet<Monomial> = a.iter().chain(b).flat_map(|p| p.terms().map(|(m, _)| m.clone())).collect();
    let keys: Vec<Monomial> = keys.into_iter().collect();
    let rows = |ps: &[Poly]| -> Result<Matrix> {
        let data: Vec<Scalar> = ps.iter().flat_map(|p| keys.iter().map(|k| p.coeff(k))).collect();
        Matrix::from_vec(ps.len(), keys.len(), data)
    };
    let (ma, mb) = (rows(a)?, rows(b)?);
    let both: Vec<Poly> = a.iter().chain(b).cloned().collect();
    let r = rows(&both)?.rank();
    Ok(ma.rank() == r && mb.rank() == r)
}

/// Partial derivatives of `f` with respect to every variable.
fn gradient_generators(f: &Poly) -> Vec<Poly> {
    (0..f.vars().len()).map(|i| f.partial(i)).filter(|p| !p.is_zero()).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdealMatchReport {
    pub label: String,
    pub differential_generators: usize,
    pub gradient_generators: usize,
    /// Generator sets agree up to a scalar on each generator.
    pub generators_match_up_to_scalar: bool,
    pub ideals_equal: bool,
}

fn normalized(ps: &[Poly]) -> BTreeSet<String> {
    ps.iter().filter(|p| !p.is_zero()).map(|p| p.monic().to_string()).collect()
}

fn compare(label: String, diff: &[Poly], grad: &[Poly]) -> Result<IdealMatchReport> {
    let d: Vec<Poly> = diff.iter().filter(|p| !p.is_zero()).cloned().collect();
    Ok(IdealMatchReport {
        label,
        differential_generators: d.len(),
        gradient_generators: grad.len(),
        generators_match_up_to_scalar: normalized(&d) == normalized(grad),
        ideals_equal: same_span(&d, grad)?,
    })
}

/// Entries of `δX*, δY*, δZ*` against the partials of `Tr X[Y,Z]`.
pub fn h0_ideal_match(n: usize) -> Result<IdealMatchReport> {
    let q = build_q3n(n)?;
    let [x, y, z] = &q.xyz;
    let f = x.try_mul(&poly_commutator(y, z)?)?.trace();
    let diff: Vec<Poly> = q.delta_star.iter().flat_map(|m| m.entries().to_vec()).collect();
    compare(format!("n={n}"), &diff, &gradient_generators(&f))
}

/// Bracket relations `[x̂^∨⊗A, ŷ^∨⊗B] = ẑ^∨⊗[A,B]` and cyclic: for an ordered
/// slot pair, the target slot, or `None` when the bracket vanishes.
pub fn bracket_target(s: usize, t: usize) -> Option<usize> {
    match (s, t) {
        (0, 1) => Some(2),
        (1, 2) => Some(0),
        (2, 0) => Some(1),
        _ => None,
    }
}

/// A dual generator `(slot, row, col)` of the CE algebra.
pub type CEIndex = (usize, usize, usize);

/// Degree −1 Chevalley–Eilenberg data for the block of size `a` at vertex
/// `vertex`: wedge pairs of degree-1 dual generators and the quadrics `ε`
/// sends them to.
#[derive(Debug, Clone)]
pub struct CEPiece {
    pub vertex: usize,
    pub size: usize,
    /// `((s, a, b), (t, c, d))` with a nonzero bracket.
    pub wedge_basis: Vec<(CEIndex, CEIndex)>,
    /// One quadric per degree-2 dual generator `(u, k, l)`.
    pub images: BTreeMap<CEIndex, Poly>,
}

fn ce_vars(mults: &[usize]) -> Vars {
    let names: Vec<String> = mults
        .iter()
        .enumerate()
        .flat_map(|(v, &a)| {
            ["A", "B", "C"].into_iter().flat_map(move |s| {
                (0..a).flat_map(move |i| (0..a).map(move |j| format!("{s}{}_{}{}", v + 1, i + 1, j + 1)))
            })
        })
        .collect();
    Vars::new(&names)
}

fn block_offsets(mults: &[usize]) -> Vec<usize> {
    mults.iter().scan(0, |acc, &a| {
        let o = *acc;
        *acc += 3 * a * a;
        Some(o)
    })
    .collect()
}

/// `ε` on the block, assembled generator by generator from
/// `[E_ab, E_cd] = δ_bc E_ad − δ_da E_cb` and [`bracket_target`].
pub fn ce_piece(vars: &Vars, offset: usize, vertex: usize, a: usize) -> CEPiece {
    let var = |s: usize, i: usize, j: usize| Poly::var(vars, offset + s * a * a + i * a + j);
    let mut wedge_basis = Vec::new();
    let mut images: BTreeMap<(usize, usize, usize), Poly> = BTreeMap::new();
    for u in 0..3 {
        for k in 0..a {
            for l in 0..a {
                images.insert((u, k, l), Poly::zero(vars));
            }
        }
    }
    for s in 0..3 {
        for t in 0..3 {
            let Some(u) = bracket_target(s, t) else { continue };
            for (p, q) in (0..a).flat_map(|p| (0..a).map(move |q| (p, q))) {
                for (r, w) in (0..a).flat_map(|r| (0..a).map(move |w| (r, w))) {
                    wedge_basis.push(((s, p, q), (t, r, w)));
                    let mono = &var(s, p, q) * &var(t, r, w);
                    if q == r {
                        let e = images.get_mut(&(u, p, w)).expect("entry");
                        *e = &*e + &mono;
                    }
                    if w == p {
                        let e = images.get_mut(&(u, r, q)).expect("entry");
                        *e = &*e - &mono;
                    }
                }
            }
        }
    }
    CEPiece { vertex, size: a, wedge_basis, images }
}

/// `ε`-images over all blocks against the partials of `Σ Tr A_i[B_i,C_i]`.
pub fn ce_ideal_match(mults: &[usize]) -> Result<IdealMatchReport> {
    if mults.is_empty() || mults.contains(&0) {
        return Err(Error::InvalidInput("multiplicities must be positive".into()));
    }
    let vars = ce_vars(mults);
    let offsets = block_offsets(mults);
    let mut diff = Vec::new();
    let mut g = Poly::zero(&vars);
    for (v, (&a, &off)) in mults.iter().zip(&offsets).enumerate() {
        diff.extend(ce_piece(&vars, off, v, a).images.into_values());
        let m = |s: usize| PolyMatrix::from_fn(&vars, a, a, |i, j| Poly::var(&vars, off + s * a * a + i * a + j));
        let term = m(0).try_mul(&poly_commutator(&m(1), &m(2))?)?.trace();
        g = &g + &term;
    }
    let label = format!("a=({})", mults.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(","));
    compare(label, &diff, &gradient_generators(&g))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_case_is_trivial() {
        let q = build_q3n(1).unwrap();
        assert!(q.delta_star().iter().all(PolyMatrix::is_zero));
        assert!(q.delta_w().iter().all(|e| q.delta(e).is_zero()));
        assert!(q.delta_w()[0].parts.is_empty());
    }

    #[test]
    fn generator_counts() {
        let q = build_q3n(2).unwrap();
        let c = q.generator_counts();
        assert_eq!(c.len(), 7);
        assert!(c.iter().all(|(_, _, k)| *k == 4));
        assert_eq!(q.vars().len(), 12);
    }

    #[test]
    fn delta_w_for_n2() {
        let q = build_q3n(2).unwrap();
        // [X,X*]_12 = X_11 X*_12 + X_12 X*_22 − X*_11 X_12 − X*_12 X_22
        let e = &q.delta_w()[1].parts;
        let v = q.vars();
        let x = |i| Poly::var(v, i);
        assert_eq!(e[&(0, 0, 1)], &x(0) - &x(3));
        assert_eq!(e[&(0, 1, 1)], x(1));
        assert_eq!(e[&(0, 0, 0)], -&x(1));
        assert_eq!(e.len(), 9);
    }

    #[test]
    fn delta_squares_to_zero() {
        for n in 1..=3 {
            assert!(verify_delta_squared(n).unwrap().holds(), "n={n}");
        }
    }

    #[test]
    fn h0_ideals() {
        let r = h0_ideal_match(1).unwrap();
        assert_eq!((r.differential_generators, r.gradient_generators), (0, 0));
        assert!(r.ideals_equal);
        for n in 2..=3 {
            let r = h0_ideal_match(n).unwrap();
            assert!(r.ideals_equal && r.generators_match_up_to_scalar, "{r:?}");
        }
    }

    #[test]
    fn ce_ideals() {
        let r = ce_ideal_match(&[1]).unwrap();
        assert_eq!(r.differential_generators, 0);
        for a in [vec![2], vec![1, 1], vec![2, 1], vec![3]] {
            let r = ce_ideal_match(&a).unwrap();
            assert!(r.ideals_equal && r.generators_match_up_to_scalar, "{r:?}");
        }
    }

    #[test]
    fn span_comparison_detects_difference() {
        let v = Vars::new(&["a", "b"]);
        let a = Poly::var(&v, 0);
        let b = Poly::var(&v, 1);
        assert!(same_span(&[&a * &b, &a * &a], &[&(&a * &a) + &(&a * &b), &a * &b]).unwrap());
        assert!(!same_span(&[&a * &b], &[&a * &a]).unwrap());
    }

    #[test]
    fn ce_piece_for_a2_images_are_commutator_entries() {
        let vars = ce_vars(&[2]);
        let p = ce_piece(&vars, 0, 0, 2);
        assert_eq!(p.images.len(), 12);
        assert_eq!(p.wedge_basis.len(), 3 * 16);
        let m = |s: usize| PolyMatrix::from_fn(&vars, 2, 2, |i, j| Poly::var(&vars, s * 4 + i * 2 + j));
        let ab = poly_commutator(&m(0), &m(1)).unwrap();
        for k in 0..2 {
            for l in 0..2 {
                assert_eq!(p.images[&(2, k, l)], ab[(k, l)]);
            }
        }
    }
}
