//! Sparse multivariate polynomials over [`Scalar`] and matrices of them.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use super::matrix::Matrix;
use super::scalar::Scalar;
use crate::error::{Error, Result};

/// Ordered list of variable names shared by all polynomials of a ring.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Vars(Arc<[String]>);

impl Vars {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Self {
        Vars(names.iter().map(|s| s.as_ref().to_owned()).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|n| n == name)
    }

    fn same(&self, other: &Vars) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

/// Exponent vector ordered by degree-reverse-lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn new(exps: Vec<u32>) -> Self {
        Monomial(exps)
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, when `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Option<Monomial> {
        self.divides(other)
            .then(|| Monomial(other.0.iter().zip(&self.0).map(|(a, b)| a - b).collect()))
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            // reverse lex: the last differing variable decides, smaller exponent wins
            for (a, b) in self.0.iter().zip(&other.0).rev() {
                if a != b {
                    return b.cmp(a);
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    vars: Vars,
    terms: BTreeMap<Monomial, Scalar>,
}

impl Poly {
    pub fn zero(vars: &Vars) -> Self {
        Poly { vars: vars.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(vars: &Vars, c: Scalar) -> Self {
        Poly::term(vars, Monomial::one(vars.len()), c)
    }

    pub fn one(vars: &Vars) -> Self {
        Poly::constant(vars, Scalar::one())
    }

    pub fn var(vars: &Vars, i: usize) -> Self {
        Poly::term(vars, Monomial::var(vars.len(), i), Scalar::one())
    }

    pub fn term(vars: &Vars, m: Monomial, c: Scalar) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { vars: vars.clone(), terms }
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    /// Constant term.
    pub fn constant_term(&self) -> Scalar {
        self.coeff(&Monomial::one(self.vars.len()))
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.degree() == 0)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// Leading term in degrevlex order.
    pub fn leading(&self) -> Option<(&Monomial, &Scalar)> {
        self.terms.iter().next_back()
    }

    fn check(&self, other: &Poly) {
        assert!(self.vars.same(&other.vars), "polynomials over different variable sets");
    }

    fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += &c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.vars);
        }
        Poly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, mono: &Monomial) -> Poly {
        Poly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, v)| (m.mul(mono), v.clone())).collect(),
        }
    }

    pub fn eval(&self, point: &[Scalar]) -> Result<Scalar> {
        if point.len() != self.vars.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} values for {} variables",
                point.len(),
                self.vars.len()
            )));
        }
        Ok(self
            .terms
            .iter()
            .map(|(m, c)| {
                m.exponents()
                    .iter()
                    .zip(point)
                    .fold(c.clone(), |acc, (&e, x)| if e == 0 { acc } else { &acc * &x.pow(e) })
            })
            .sum())
    }

    /// Substitutes `images[i]` for variable `i`. All images share one ring.
    pub fn substitute(&self, images: &[Poly]) -> Result<Poly> {
        if images.len() != self.vars.len() {
            return Err(Error::DimensionMismatch("substitution arity".into()));
        }
        let target = images
            .first()
            .map(|p| p.vars.clone())
            .ok_or_else(|| Error::InvalidInput("substitution into a ring without variables".into()))?;
        let mut out = Poly::zero(&target);
        for (m, c) in &self.terms {
            let mut t = Poly::constant(&target, c.clone());
            for (i, &e) in m.exponents().iter().enumerate() {
                for _ in 0..e {
                    t = &t * &images[i];
                }
            }
            out = &out + &t;
        }
        Ok(out)
    }

    pub fn partial(&self, var: usize) -> Poly {
        let mut out = Poly::zero(&self.vars);
        for (m, c) in &self.terms {
            let e = m.exponents()[var];
            if e == 0 {
                continue;
            }
            let mut exps = m.exponents().to_vec();
            exps[var] -= 1;
            out.add_term(Monomial(exps), c * &Scalar::from_int(e as i64));
        }
        out
    }

    /// Rescales so the leading coefficient is 1; zero stays zero.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => self.clone(),
            Some((_, c)) => self.scale(&c.inv().expect("nonzero leading coefficient")),
        }
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &'a Poly) -> Poly {
        self.check(rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &'a Poly) -> Poly {
        self.check(rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &'a Poly) -> Poly {
        self.check(rhs);
        let mut out = Poly::zero(&self.vars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&Scalar::from_int(-1))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mono: Vec<String> = m
                .exponents()
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| {
                    let name = &self.vars.names()[i];
                    if e == 1 { name.clone() } else { format!("{name}^{e}") }
                })
                .collect();
            match (mono.is_empty(), c.is_one()) {
                (true, _) => write!(f, "({c})")?,
                (false, true) => write!(f, "{}", mono.join("*"))?,
                (false, false) => write!(f, "({c})*{}", mono.join("*"))?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Matrix with polynomial entries.
#[derive(Clone, PartialEq, Eq)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    vars: Vars,
    data: Vec<Poly>,
}

impl PolyMatrix {
    pub fn zeros(vars: &Vars, rows: usize, cols: usize) -> Self {
        PolyMatrix { rows, cols, vars: vars.clone(), data: vec![Poly::zero(vars); rows * cols] }
    }

    pub fn identity(vars: &Vars, n: usize) -> Self {
        let mut m = PolyMatrix::zeros(vars, n, n);
        for i in 0..n {
            m[(i, i)] = Poly::one(vars);
        }
        m
    }

    pub fn from_fn(vars: &Vars, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Poly) -> Self {
        let data = (0..rows * cols).map(|k| f(k / cols, k % cols)).collect();
        PolyMatrix { rows, cols, vars: vars.clone(), data }
    }

    /// Constant matrix from integer rows.
    pub fn from_int_rows(vars: &Vars, rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        PolyMatrix::from_fn(vars, r, c, |i, j| Poly::constant(vars, Scalar::from_int(rows[i][j])))
    }

    pub fn from_matrix(vars: &Vars, m: &Matrix) -> Self {
        PolyMatrix::from_fn(vars, m.rows(), m.cols(), |i, j| Poly::constant(vars, m[(i, j)].clone()))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn entries(&self) -> &[Poly] {
        &self.data
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Poly::is_zero)
    }

    pub fn is_constant(&self) -> bool {
        self.data.iter().all(Poly::is_constant)
    }

    pub fn try_add(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        self.check_shape(other)?;
        Ok(PolyMatrix {
            rows: self.rows,
            cols: self.cols,
            vars: self.vars.clone(),
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn try_sub(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        self.check_shape(other)?;
        Ok(PolyMatrix {
            rows: self.rows,
            cols: self.cols,
            vars: self.vars.clone(),
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn try_mul(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = PolyMatrix::zeros(&self.vars, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        let idx = i * other.cols + j;
                        out.data[idx] = &out.data[idx] + &(a * b);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Scalar) -> PolyMatrix {
        PolyMatrix {
            rows: self.rows,
            cols: self.cols,
            vars: self.vars.clone(),
            data: self.data.iter().map(|p| p.scale(c)).collect(),
        }
    }

    pub fn trace(&self) -> Poly {
        (0..self.rows.min(self.cols)).fold(Poly::zero(&self.vars), |acc, i| &acc + &self[(i, i)])
    }

    pub fn eval(&self, point: &[Scalar]) -> Result<Matrix> {
        let data = self.data.iter().map(|p| p.eval(point)).collect::<Result<Vec<_>>>()?;
        Matrix::from_vec(self.rows, self.cols, data)
    }

    pub fn map(&self, f: impl Fn(&Poly) -> Result<Poly>) -> Result<PolyMatrix> {
        let data = self.data.iter().map(f).collect::<Result<Vec<_>>>()?;
        let vars = data.first().map_or_else(|| self.vars.clone(), |p| p.vars().clone());
        Ok(PolyMatrix { rows: self.rows, cols: self.cols, vars, data })
    }

    fn check_shape(&self, other: &PolyMatrix) -> Result<()> {
        if self.shape() != other.shape() {
            return Err(Error::DimensionMismatch(format!(
                "{:?} vs {:?}",
                self.shape(),
                other.shape()
            )));
        }
        Ok(())
    }
}

/// `AB − BA` for square polynomial matrices.
pub fn poly_commutator(a: &PolyMatrix, b: &PolyMatrix) -> Result<PolyMatrix> {
    a.try_mul(b)?.try_sub(&b.try_mul(a)?)
}

impl std::ops::Index<(usize, usize)> for PolyMatrix {
    type Output = Poly;
    fn index(&self, (i, j): (usize, usize)) -> &Poly {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for PolyMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Poly {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> = (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)].to_string()).collect())
            .collect();
        f.debug_list().entries(rows).finish()
    }
}
