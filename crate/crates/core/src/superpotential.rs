//! The Ext-quiver superpotential of a polystable point sheaf and its trace.
//!
//! Only cubic words occur: higher Massey products vanish, and
//! `a_{ψ,e} = (1/3)(m₂(e₁^∨, e₂^∨), e₃^∨)`. The dual basis is matched to the
//! hats by `e_{i,1}^∨ ↦ x̂`, `e_{i,2}^∨ ↦ ŷ`, `e_{i,3}^∨ ↦ ẑ`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::cli::random::{random_matrix, rng};
use crate::error::{Error, Result};
use crate::exactalg::{commutator, Matrix, Scalar};
use crate::koszul::{koszul, ExtAlgebra};
use crate::quiver::{ext_loop_label, ext_quiver, PolystableData, Quiver};

/// A closed path `ψ(1) → … → ψ(n+1) = ψ(1)` with its loop letters, each
/// `(vertex, l)` for the loop `e_{vertex+1, l}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NCWord {
    pub path: Vec<usize>,
    pub letters: Vec<(usize, usize)>,
}

impl NCWord {
    pub fn new(path: Vec<usize>, letters: Vec<(usize, usize)>) -> Result<Self> {
        if path.len() != letters.len() + 1 || path.first() != path.last() {
            return Err(Error::InvalidInput("word must follow a closed path".into()));
        }
        Ok(NCWord { path, letters })
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn label(&self) -> String {
        self.letters.iter().map(|&(v, l)| ext_loop_label(v, l)).collect::<Vec<_>>().join(" ")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Superpotential {
    pub terms: BTreeMap<NCWord, Scalar>,
}

#[derive(Serialize)]
struct TermOut {
    word: String,
    coefficient: Scalar,
}

impl Serialize for Superpotential {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let out: Vec<TermOut> =
            self.terms.iter().map(|(w, c)| TermOut { word: w.label(), coefficient: c.clone() }).collect();
        out.serialize(s)
    }
}

impl Superpotential {
    pub fn coeff(&self, vertex: usize, loops: [usize; 3]) -> Scalar {
        let w = NCWord { path: vec![vertex; 4], letters: loops.iter().map(|&l| (vertex, l)).collect() };
        self.terms.get(&w).cloned().unwrap_or_else(Scalar::zero)
    }

    /// `Tr W` on matrices `mats[v][l-1]` attached to the loops.
    pub fn trace_eval(&self, mats: &[[Matrix; 3]]) -> Result<Scalar> {
        let mut total = Scalar::zero();
        for (w, c) in &self.terms {
            let mut prod: Option<Matrix> = None;
            for &(v, l) in &w.letters {
                let m = &mats[v][l - 1];
                prod = Some(match prod {
                    None => m.clone(),
                    Some(p) => p.try_mul(m)?,
                });
            }
            if let Some(p) = prod {
                total += &(c * &p.trace());
            }
        }
        Ok(total)
    }
}

/// Letters available on the arrow `source → target` of the Ext quiver.
fn letters_between(q: &Quiver, source: usize, target: usize) -> Vec<(usize, usize)> {
    let loops: Vec<&str> = q.loops_at(source).map(|e| e.label.as_str()).collect();
    q.edges_between(source, target)
        .map(|e| (source, loops.iter().position(|l| *l == e.label).map_or(0, |p| p + 1)))
        .collect()
}

pub fn vertex_algebras(data: &PolystableData) -> Result<Vec<ExtAlgebra>> {
    data.points.iter().map(|p| ExtAlgebra::new(&koszul(p))).collect()
}

pub fn extract_superpotential(data: &PolystableData) -> Result<Superpotential> {
    extract_with(data, &vertex_algebras(data)?)
}

/// Extraction from given per-vertex Ext algebras, over every closed path of
/// length three in the Ext quiver.
pub fn extract_with(data: &PolystableData, algs: &[ExtAlgebra]) -> Result<Superpotential> {
    let q = ext_quiver(data)?;
    let k = q.vertex_count();
    let third = Scalar::frac(1, 3);
    let mut terms = BTreeMap::new();
    for code in 0..k.pow(3) {
        let path = vec![code % k, (code / k) % k, code / (k * k), code % k];
        let choices: Vec<Vec<(usize, usize)>> = (0..3).map(|t| letters_between(&q, path[t], path[t + 1])).collect();
        for e1 in &choices[0] {
            for e2 in &choices[1] {
                for e3 in &choices[2] {
                    let v = path[0];
                    let c = &algs[v].cyclic_triple(e1.1 - 1, e2.1 - 1, e3.1 - 1)? * &third;
                    if !c.is_zero() {
                        terms.insert(NCWord::new(path.clone(), vec![*e1, *e2, *e3])?, c);
                    }
                }
            }
        }
    }
    Ok(Superpotential { terms })
}

/// `j_i` in its three cyclic forms and `l_i` in its three forms.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VertexConstants {
    pub j_forms: [Scalar; 3],
    pub l_forms: [Scalar; 3],
}

impl VertexConstants {
    pub fn of(alg: &ExtAlgebra) -> Result<Self> {
        let t = |a, b, c| alg.cyclic_triple(a, b, c);
        Ok(VertexConstants {
            j_forms: [t(0, 1, 2)?, t(1, 2, 0)?, t(2, 0, 1)?],
            l_forms: [t(0, 2, 1)?, t(2, 1, 0)?, t(1, 0, 2)?],
        })
    }

    pub fn j(&self) -> &Scalar {
        &self.j_forms[0]
    }

    pub fn consistent(&self) -> bool {
        let j = &self.j_forms[0];
        let l = &self.l_forms[0];
        self.j_forms.iter().all(|x| x == j) && self.l_forms.iter().all(|x| x == l) && !j.is_zero() && (j + l).is_zero()
    }
}

pub fn sanity_j_plus_l(data: &PolystableData) -> Result<bool> {
    sanity_j_plus_l_with(&vertex_algebras(data)?)
}

pub fn sanity_j_plus_l_with(algs: &[ExtAlgebra]) -> Result<bool> {
    for a in algs {
        if !VertexConstants::of(a)?.consistent() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceIdentityReport {
    pub mults: Vec<usize>,
    pub seed: u64,
    pub trials: usize,
    pub term_count: usize,
    pub j_per_vertex: Vec<Scalar>,
    /// Common `j`, if all vertices agree.
    pub j: Option<Scalar>,
    pub j_plus_l_zero: bool,
    pub failures: usize,
    pub identity_ok: bool,
}

pub const TRIAL_BOUND: i64 = 5;

/// `Tr W = j · Σ Tr A_i[B_i,C_i]` on seeded random matrix tuples.
pub fn verify_trace_identity(data: &PolystableData, trials: usize, seed: u64) -> Result<TraceIdentityReport> {
    if trials == 0 {
        return Err(Error::InvalidInput("trials must be at least 1".into()));
    }
    let algs = vertex_algebras(data)?;
    let w = extract_with(data, &algs)?;
    let consts: Vec<VertexConstants> = algs.iter().map(VertexConstants::of).collect::<Result<_>>()?;
    let j_per_vertex: Vec<Scalar> = consts.iter().map(|c| c.j().clone()).collect();
    let j = j_per_vertex.iter().all(|x| *x == j_per_vertex[0]).then(|| j_per_vertex[0].clone());
    let mut r = rng(seed);
    let mut failures = 0;
    for _ in 0..trials {
        let mats: Vec<[Matrix; 3]> = data
            .mults
            .iter()
            .map(|&a| std::array::from_fn(|_| random_matrix(&mut r, a, a, TRIAL_BOUND, true)))
            .collect();
        let lhs = w.trace_eval(&mats)?;
        let mut f = Scalar::zero();
        for [a, b, c] in &mats {
            f += &a.try_mul(&commutator(b, c)?)?.trace();
        }
        let ok = j.as_ref().is_some_and(|j| lhs == j * &f);
        if !ok {
            failures += 1;
        }
    }
    Ok(TraceIdentityReport {
        mults: data.mults.clone(),
        seed,
        trials,
        term_count: w.terms.len(),
        j_per_vertex,
        j_plus_l_zero: consts.iter().all(VertexConstants::consistent),
        j,
        failures,
        identity_ok: failures == 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn data(points: &[[i64; 3]], mults: &[usize]) -> PolystableData {
        PolystableData::new(points.iter().map(|p| p.map(Scalar::from_int)).collect(), mults.to_vec()).unwrap()
    }

    #[test]
    fn six_cubic_terms_per_vertex() {
        let d = data(&[[0, 0, 0], [1, 2, 3]], &[1, 2]);
        let w = extract_superpotential(&d).unwrap();
        assert_eq!(w.terms.len(), 12);
        assert!(w.terms.keys().all(|t| t.len() == 3 && t.path.iter().all(|&v| v == t.path[0])));
        for v in 0..2 {
            let j = w.coeff(v, [1, 2, 3]);
            assert_eq!(j, Scalar::frac(1, 3));
            assert_eq!(w.coeff(v, [2, 3, 1]), j);
            assert_eq!(w.coeff(v, [3, 1, 2]), j);
            assert_eq!(w.coeff(v, [1, 3, 2]), -j.clone());
            assert!(w.coeff(v, [1, 1, 2]).is_zero());
        }
    }

    #[test]
    fn trace_identity() {
        let r = verify_trace_identity(&data(&[[0, 0, 0]], &[1]), 10, 1).unwrap();
        assert!(r.identity_ok);
        let r = verify_trace_identity(&data(&[[0, 0, 0]], &[2]), 20, 2).unwrap();
        assert!(r.identity_ok && r.j == Some(Scalar::one()));
        let r = verify_trace_identity(&data(&[[0, 0, 0], [1, -1, 2]], &[1, 2]), 20, 3).unwrap();
        assert!(r.identity_ok && r.j_per_vertex.iter().all(|j| j.is_one()));
        assert!(verify_trace_identity(&data(&[[0, 0, 0]], &[1]), 0, 1).is_err());
    }

    #[test]
    fn j_plus_l() {
        assert!(sanity_j_plus_l(&data(&[[0, 0, 0]], &[1])).unwrap());
        let p = [Scalar::frac(2, 7), Scalar::frac(-1, 3), Scalar::from_int(4)];
        assert!(sanity_j_plus_l(&PolystableData::new(vec![p], vec![1]).unwrap()).unwrap());
    }

    #[test]
    fn corrupted_table_fails_sanity() {
        let d = data(&[[0, 0, 0]], &[1]);
        let mut algs = vertex_algebras(&d).unwrap();
        // ŷ·x̂ set equal to x̂·ŷ: graded commutativity broken
        let xy = algs[0].product_coords(1, 2).clone();
        algs[0].set_product(2, 1, xy);
        assert!(!sanity_j_plus_l_with(&algs).unwrap());
    }
}
