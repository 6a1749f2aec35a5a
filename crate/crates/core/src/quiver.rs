//! Quivers, dimension vectors, King-type slope pairings and the Ext quiver of
//! a polystable point sheaf.

use std::collections::BTreeSet;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::scalar::rational_str;
use crate::exactalg::{Rational, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub source: usize,
    pub target: usize,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Quiver {
    vertex_count: usize,
    edges: Vec<Edge>,
}

impl Quiver {
    pub fn new(vertex_count: usize, edges: Vec<Edge>) -> Result<Self> {
        let mut labels = BTreeSet::new();
        for e in &edges {
            if e.source >= vertex_count || e.target >= vertex_count {
                return Err(Error::InvalidInput(format!("edge {} leaves the vertex range", e.label)));
            }
            if !labels.insert(e.label.as_str()) {
                return Err(Error::InvalidInput(format!("duplicate edge label {}", e.label)));
            }
        }
        Ok(Quiver { vertex_count, edges })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edges_between(&self, source: usize, target: usize) -> impl Iterator<Item = &Edge> {
        self.edges.iter().filter(move |e| e.source == source && e.target == target)
    }

    pub fn loops_at(&self, v: usize) -> impl Iterator<Item = &Edge> {
        self.edges_between(v, v)
    }
}

/// Dimension vector; for framed quivers entry 0 is the framing vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimVector(pub Vec<u64>);

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilityParam(#[serde(with = "rational_str::vec")] pub Vec<Rational>);

impl StabilityParam {
    pub fn from_ints(v: &[i64]) -> Self {
        StabilityParam(v.iter().map(|&x| Rational::from_integer(x.into())).collect())
    }

    /// `(n, −1, …, −1)` with `k` trailing entries.
    pub fn framed_slope_zero(n: u64, k: usize) -> Self {
        let mut v = vec![Rational::from_integer(n.into())];
        v.extend(std::iter::repeat_n(Rational::from_integer((-1).into()), k));
        StabilityParam(v)
    }
}

/// `E = ⊕ C^{a_i} ⊗ O_{p_i}` with pairwise-distinct points `p_i ∈ C³`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolystableData {
    pub points: Vec<[Scalar; 3]>,
    pub mults: Vec<usize>,
}

impl PolystableData {
    pub fn new(points: Vec<[Scalar; 3]>, mults: Vec<usize>) -> Result<Self> {
        let d = PolystableData { points, mults };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<()> {
        if self.points.len() != self.mults.len() {
            return Err(Error::InvalidInput(format!(
                "{} points but {} multiplicities",
                self.points.len(),
                self.mults.len()
            )));
        }
        if self.points.is_empty() {
            return Err(Error::InvalidInput("no points".into()));
        }
        if self.mults.contains(&0) {
            return Err(Error::InvalidInput("multiplicities must be positive".into()));
        }
        for i in 0..self.points.len() {
            for j in i + 1..self.points.len() {
                if self.points[i] == self.points[j] {
                    return Err(Error::CoincidentPoints(i, j));
                }
            }
        }
        Ok(())
    }

    pub fn k(&self) -> usize {
        self.points.len()
    }

    pub fn n(&self) -> usize {
        self.mults.iter().sum()
    }

    /// Block offsets of the summands inside `C^n`.
    pub fn offsets(&self) -> Vec<usize> {
        self.mults
            .iter()
            .scan(0, |acc, &a| {
                let o = *acc;
                *acc += a;
                Some(o)
            })
            .collect()
    }
}

/// The r-framed 3-loop quiver: vertex 0 is `∞`, vertex 1 carries loops A, B, C.
pub fn framed_3loop(r: usize) -> Result<Quiver> {
    if r == 0 {
        return Err(Error::InvalidInput("framing rank must be at least 1".into()));
    }
    let mut edges: Vec<Edge> = ["A", "B", "C"]
        .iter()
        .map(|l| Edge { source: 1, target: 1, label: (*l).to_owned() })
        .collect();
    edges.extend((1..=r).map(|i| Edge { source: 0, target: 1, label: format!("v{i}") }));
    Quiver::new(2, edges)
}

/// Label of loop `l ∈ {1,2,3}` at (0-based) vertex `i`.
pub fn ext_loop_label(i: usize, l: usize) -> String {
    format!("e_{{{},{}}}", i + 1, l)
}

/// Disjoint union of `k` 3-loop quivers, one per point.
pub fn ext_quiver(data: &PolystableData) -> Result<Quiver> {
    data.validate()?;
    let edges = (0..data.k())
        .flat_map(|i| (1..=3).map(move |l| Edge { source: i, target: i, label: ext_loop_label(i, l) }))
        .collect();
    Quiver::new(data.k(), edges)
}

pub fn pairing(d: &DimVector, theta: &StabilityParam) -> Result<Rational> {
    if d.0.len() != theta.0.len() {
        return Err(Error::DimensionMismatch(format!(
            "dimension vector of length {} against parameter of length {}",
            d.0.len(),
            theta.0.len()
        )));
    }
    Ok(d.0.iter().zip(&theta.0).fold(Rational::zero(), |acc, (&x, t)| {
        acc + Rational::from_integer(x.into()) * t
    }))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScanEntry {
    pub subvector: Vec<u64>,
    #[serde(with = "rational_str")]
    pub pairing: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScanReport {
    pub mults: Vec<u64>,
    #[serde(with = "rational_str::vec")]
    pub theta: Vec<Rational>,
    pub subvectors_scanned: usize,
    /// Subvectors with nonnegative pairing.
    pub nonnegative: Vec<ScanEntry>,
    /// Proper subvectors with `d_∞ = 1` whose pairing was confirmed positive.
    pub confirmed: usize,
    /// Proper subvectors with `d_∞ = 1` and pairing ≤ 0 (always empty when the
    /// implication holds).
    pub counterexamples: Vec<ScanEntry>,
    #[serde(with = "rational_str")]
    pub full_pairing: Rational,
}

impl ScanReport {
    pub fn holds(&self) -> bool {
        self.counterexamples.is_empty() && self.full_pairing.is_zero()
    }
}

/// Enumerates every sub-dimension vector `(d_∞, d_1, …, d_k)` of
/// `(1, a_1, …, a_k)` and checks it against `θ = (n, −1, …, −1)`.
pub fn destabilizing_subvector_scan(a: &[u64]) -> Result<ScanReport> {
    if a.is_empty() || a.contains(&0) {
        return Err(Error::InvalidInput("multiplicities must be positive".into()));
    }
    let n: u64 = a.iter().sum();
    let theta = StabilityParam::framed_slope_zero(n, a.len());
    let mut full = vec![1];
    full.extend_from_slice(a);

    let mut report = ScanReport {
        mults: a.to_vec(),
        theta: theta.0.clone(),
        subvectors_scanned: 0,
        nonnegative: Vec::new(),
        confirmed: 0,
        counterexamples: Vec::new(),
        full_pairing: pairing(&DimVector(full.clone()), &theta)?,
    };

    let mut d = vec![0u64; full.len()];
    loop {
        report.subvectors_scanned += 1;
        let p = pairing(&DimVector(d.clone()), &theta)?;
        if !p.is_negative() {
            report.nonnegative.push(ScanEntry { subvector: d.clone(), pairing: p.clone() });
        }
        let proper = d.iter().zip(&full).skip(1).any(|(x, y)| x < y);
        if d[0] == 1 && proper {
            if p.is_positive() {
                report.confirmed += 1;
            } else {
                report.counterexamples.push(ScanEntry { subvector: d.clone(), pairing: p });
            }
        }
        // odometer increment
        let mut i = 0;
        loop {
            if i == d.len() {
                return Ok(report);
            }
            if d[i] < full[i] {
                d[i] += 1;
                break;
            }
            d[i] = 0;
            i += 1;
        }
    }
}
