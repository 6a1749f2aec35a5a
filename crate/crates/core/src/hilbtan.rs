//! Torus-fixed points of `Hilbⁿ(A³)` and a tangent-dimension comparison:
//! `dim Hom(I, O/I)` from a presentation of `I` against the kernel of the
//! Hessian of `Tr A[B,C]` at the matching framed point, modulo gauge.

use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactalg::{Matrix, Monomial, Poly, Scalar, Vars};
use crate::potential::{hessian, FramedRep};

pub type Exponent = [u32; 3];

/// Monomial ideal of colength `n`, given by its staircase: the monomials
/// outside `I`, which form a basis of `O/I`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct MonomialIdeal {
    staircase: Vec<Exponent>,
}

fn predecessors(e: &Exponent) -> impl Iterator<Item = Exponent> + '_ {
    (0..3).filter(|&i| e[i] > 0).map(move |i| {
        let mut p = *e;
        p[i] -= 1;
        p
    })
}

fn bump(e: &Exponent, i: usize) -> Exponent {
    let mut p = *e;
    p[i] += 1;
    p
}

impl MonomialIdeal {
    pub fn new(mut staircase: Vec<Exponent>) -> Result<Self> {
        staircase.sort();
        staircase.dedup();
        if staircase.is_empty() {
            return Err(Error::InvalidInput("empty staircase".into()));
        }
        let set: BTreeSet<Exponent> = staircase.iter().copied().collect();
        for e in &staircase {
            if let Some(p) = predecessors(e).find(|p| !set.contains(p)) {
                return Err(Error::InvalidInput(format!("staircase contains {e:?} but not {p:?}")));
            }
        }
        Ok(MonomialIdeal { staircase })
    }

    pub fn staircase(&self) -> &[Exponent] {
        &self.staircase
    }

    pub fn n(&self) -> usize {
        self.staircase.len()
    }

    pub fn index_of(&self, e: &Exponent) -> Option<usize> {
        self.staircase.binary_search(e).ok()
    }

    pub fn contains_monomial(&self, e: &Exponent) -> bool {
        self.index_of(e).is_none()
    }

    /// Minimal generators: monomials in `I` all of whose divisors by a single
    /// variable lie in the staircase. Sorted.
    pub fn generators(&self) -> Vec<Exponent> {
        let mut out: BTreeSet<Exponent> = BTreeSet::new();
        for e in &self.staircase {
            for i in 0..3 {
                let c = bump(e, i);
                if self.contains_monomial(&c) && predecessors(&c).all(|p| !self.contains_monomial(&p)) {
                    out.insert(c);
                }
            }
        }
        out.into_iter().collect()
    }
}

fn fmt_monomial(e: &Exponent) -> String {
    let parts: Vec<String> = ["x", "y", "z"]
        .iter()
        .zip(e)
        .filter(|(_, &k)| k > 0)
        .map(|(v, &k)| if k == 1 { v.to_string() } else { format!("{v}^{k}") })
        .collect();
    if parts.is_empty() { "1".into() } else { parts.join("*") }
}

impl fmt::Display for MonomialIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g: Vec<String> = self.generators().iter().map(fmt_monomial).collect();
        write!(f, "({})", g.join(", "))
    }
}

/// All monomial ideals of colength `n` (plane partitions of `n`), sorted.
pub fn enumerate_monomial_ideals(n: usize) -> Result<Vec<MonomialIdeal>> {
    if !(1..=8).contains(&n) {
        return Err(Error::InvalidInput(format!("n = {n} outside 1..=8")));
    }
    let mut layer: BTreeSet<Vec<Exponent>> = BTreeSet::from([vec![[0, 0, 0]]]);
    for _ in 1..n {
        let mut next = BTreeSet::new();
        for s in &layer {
            let set: BTreeSet<Exponent> = s.iter().copied().collect();
            for e in s {
                for i in 0..3 {
                    let c = bump(e, i);
                    if !set.contains(&c) && predecessors(&c).all(|p| set.contains(&p)) {
                        let mut grown = s.clone();
                        grown.push(c);
                        grown.sort();
                        next.insert(grown);
                    }
                }
            }
        }
        layer = next;
    }
    layer.into_iter().map(MonomialIdeal::new).collect()
}

/// Cyclic framed point of `O/I`: `A, B, C` multiply by `x, y, z` on the
/// staircase basis, `v` is the class of `1`.
pub fn ideal_to_rep(ideal: &MonomialIdeal) -> FramedRep {
    let n = ideal.n();
    let mult = |var: usize| {
        let mut m = Matrix::zeros(n, n);
        for (j, e) in ideal.staircase.iter().enumerate() {
            if let Some(i) = ideal.index_of(&bump(e, var)) {
                m[(i, j)] = Scalar::one();
            }
        }
        m
    };
    let mut v = Matrix::zeros(n, 1);
    v[(ideal.index_of(&[0, 0, 0]).expect("1 is in every staircase"), 0)] = Scalar::one();
    FramedRep::new(mult(0), mult(1), mult(2), v).expect("square n×n with n×1 framing")
}

/// `F₁ → F₀ → I → 0` with `F₀` on the minimal generators and every pairwise
/// lcm syzygy in `F₁`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Presentation {
    pub generators: Vec<Exponent>,
    /// Each relation: `(i, m_i, j, m_j)` meaning `m_i·g_i − m_j·g_j = 0`.
    pub relations: Vec<(usize, Exponent, usize, Exponent)>,
}

fn sub(a: &Exponent, b: &Exponent) -> Exponent {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

impl Presentation {
    pub fn of(ideal: &MonomialIdeal) -> Self {
        let generators = ideal.generators();
        let mut relations = Vec::new();
        for i in 0..generators.len() {
            for j in i + 1..generators.len() {
                let (gi, gj) = (&generators[i], &generators[j]);
                let l = [gi[0].max(gj[0]), gi[1].max(gj[1]), gi[2].max(gj[2])];
                relations.push((i, sub(&l, gi), j, sub(&l, gj)));
            }
        }
        Presentation { generators, relations }
    }

    /// Every relation annihilates the generator column in `C[x,y,z]`.
    pub fn verify(&self) -> bool {
        let vars = Vars::new(&["x", "y", "z"]);
        let mono = |e: &Exponent| Poly::term(&vars, Monomial::new(e.to_vec()), Scalar::one());
        self.relations.iter().all(|(i, mi, j, mj)| {
            let lhs = &mono(mi) * &mono(&self.generators[*i]);
            let rhs = &mono(mj) * &mono(&self.generators[*j]);
            (&lhs - &rhs).is_zero()
        })
    }
}

fn add(a: &Exponent, b: &Exponent) -> Exponent {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

/// `dim Hom(I, O/I)`: kernel of `Hom(F₀, O/I) → Hom(F₁, O/I)`.
pub fn hom_dim(ideal: &MonomialIdeal) -> usize {
    let p = Presentation::of(ideal);
    let n = ideal.n();
    let m = p.generators.len();
    // φ is the tuple (φ(g_1), …, φ(g_m)) ∈ (O/I)^m; relation k imposes
    // m_i·φ(g_i) − m_j·φ(g_j) = 0 in O/I, one row per staircase monomial.
    let mut map = Matrix::zeros(p.relations.len() * n, m * n);
    for (k, (i, mi, j, mj)) in p.relations.iter().enumerate() {
        for (col, e) in ideal.staircase.iter().enumerate() {
            if let Some(row) = ideal.index_of(&add(mi, e)) {
                map[(k * n + row, i * n + col)] += &Scalar::one();
            }
            if let Some(row) = ideal.index_of(&add(mj, e)) {
                map[(k * n + row, j * n + col)] -= &Scalar::one();
            }
        }
    }
    m * n - map.rank()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HessianTangent {
    pub kernel_dim: usize,
    pub gauge_rank: usize,
    pub tangent_dim: usize,
    /// Cokernel dimension of `Hess: T → Ω`, also modulo gauge; self-duality
    /// makes it equal to `tangent_dim`.
    pub obstruction_dim: usize,
}

/// Hessian kernel at `ideal_to_rep(I)` minus the `n²` gauge directions.
pub fn hessian_tangent(ideal: &MonomialIdeal) -> Result<HessianTangent> {
    let rep = ideal_to_rep(ideal);
    let h = hessian(&rep);
    let n = rep.n();
    let gauge = rep.gauge_directions();
    for g in &gauge {
        if !h.in_radical(g)? {
            return Err(Error::Invariant(format!("gauge direction outside the Hessian kernel at {ideal}")));
        }
    }
    let gauge_rank = crate::exactalg::vectors_rank(rep.dim(), &gauge)?;
    if gauge_rank != n * n {
        return Err(Error::Invariant(format!("gauge action has rank {gauge_rank} < {} at {ideal}", n * n)));
    }
    let kernel_dim = h.dim() - h.rank();
    let tangent_dim = kernel_dim - gauge_rank;
    let obstruction_dim = (h.dim() - h.gram().transpose().rank()) - gauge_rank;
    Ok(HessianTangent { kernel_dim, gauge_rank, tangent_dim, obstruction_dim })
}

pub fn hessian_tangent_dim(ideal: &MonomialIdeal) -> Result<usize> {
    Ok(hessian_tangent(ideal)?.tangent_dim)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TangentRow {
    pub ideal: String,
    pub staircase: Vec<Exponent>,
    pub hom_dim: usize,
    pub hess_dim: usize,
    pub equal: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TangentReport {
    pub n: usize,
    pub ideal_count: usize,
    pub rows: Vec<TangentRow>,
    pub all_equal: bool,
}

pub fn compare_tangents(n: usize) -> Result<TangentReport> {
    if n > 6 {
        return Err(Error::InvalidInput(format!("n = {n} exceeds 6")));
    }
    let ideals = enumerate_monomial_ideals(n)?;
    let rows: Vec<TangentRow> = ideals
        .par_iter()
        .map(|i| {
            let hom = hom_dim(i);
            let hess = hessian_tangent_dim(i)?;
            Ok(TangentRow { ideal: i.to_string(), staircase: i.staircase.clone(), hom_dim: hom, hess_dim: hess, equal: hom == hess })
        })
        .collect::<Result<_>>()?;
    let all_equal = rows.iter().all(|r| r.equal);
    Ok(TangentReport { n, ideal_count: rows.len(), rows, all_equal })
}

/// Staircase of `(x,y,z)^k`: all monomials of degree below `k`.
pub fn power_of_maximal(k: u32) -> MonomialIdeal {
    let mut s = Vec::new();
    for a in 0..k {
        for b in 0..k - a {
            for c in 0..k - a - b {
                s.push([a, b, c]);
            }
        }
    }
    MonomialIdeal::new(s).expect("downward closed")
}
