//! The Koszul resolution of a point of `A³`, its endomorphism dg-algebra
//! `g_p`, the hat-element subalgebra and the Ext algebra it computes.
//!
//! Graded pieces are indexed by `i ∈ {−3,…,0}` with ranks `[1,3,3,1]`; a
//! degree-`p` element has one slot `Hom(Q^i, Q^{i+p})` for each
//! `i = −3,…,−p`, stored at position `i + 3`. Products compose slotwise,
//! `(u·v)_i = u_{i+q} ∘ v_i` for `deg v = q`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactalg::{Matrix, Monomial, Poly, PolyMatrix, Scalar, Vars, Vector};

/// Ranks of `Q^{-3}, …, Q^0`.
pub const RANKS: [usize; 4] = [1, 3, 3, 1];

/// Shifted coordinates `x = x₀ − a₀`, `y = y₀ − b₀`, `z = z₀ − c₀`.
pub fn shifted_vars() -> Vars {
    Vars::new(&["x", "y", "z"])
}

pub fn ambient_vars() -> Vars {
    Vars::new(&["x0", "y0", "z0"])
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KoszulComplex {
    point: [Scalar; 3],
    vars: Vars,
    /// `d_{-3} = A`, `d_{-2} = B`, `d_{-1} = C`.
    diffs: [PolyMatrix; 3],
}

pub fn koszul(point: &[Scalar; 3]) -> KoszulComplex {
    let vars = shifted_vars();
    let v = |i| Poly::var(&vars, i);
    let zero = Poly::zero(&vars);
    let (x, y, z) = (v(0), v(1), v(2));
    let a = PolyMatrix::from_fn(&vars, 3, 1, |i, _| v(i));
    let b_entries = [
        [zero.clone(), -&z, y.clone()],
        [z.clone(), zero.clone(), -&x],
        [-&y, x.clone(), zero],
    ];
    let b = PolyMatrix::from_fn(&vars, 3, 3, |i, j| b_entries[i][j].clone());
    let c = PolyMatrix::from_fn(&vars, 1, 3, |_, j| v(j));
    KoszulComplex { point: point.clone(), vars, diffs: [a, b, c] }
}

impl KoszulComplex {
    pub fn point(&self) -> &[Scalar; 3] {
        &self.point
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn diffs(&self) -> &[PolyMatrix; 3] {
        &self.diffs
    }

    /// `d_i : Q^i → Q^{i+1}` for `i ∈ {−3,−2,−1}`.
    pub fn d(&self, i: i32) -> &PolyMatrix {
        &self.diffs[(i + 3) as usize]
    }

    /// Differentials rewritten in the ambient coordinates `x₀, y₀, z₀`.
    pub fn ambient_diffs(&self) -> Result<[PolyMatrix; 3]> {
        let amb = ambient_vars();
        let images: Vec<Poly> = (0..3)
            .map(|i| &Poly::var(&amb, i) - &Poly::constant(&amb, self.point[i].clone()))
            .collect();
        let sub = |m: &PolyMatrix| m.map(|p| p.substitute(&images));
        Ok([sub(&self.diffs[0])?, sub(&self.diffs[1])?, sub(&self.diffs[2])?])
    }

    /// Consecutive differentials compose to zero.
    pub fn is_complex(&self) -> bool {
        let ba = self.diffs[1].try_mul(&self.diffs[0]).expect("3×3 · 3×1");
        let cb = self.diffs[2].try_mul(&self.diffs[1]).expect("1×3 · 3×3");
        ba.is_zero() && cb.is_zero()
    }
}

/// Homogeneous element of `g_p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DGElement {
    degree: usize,
    slots: Vec<PolyMatrix>,
}

fn slot_shape(degree: usize, s: usize) -> (usize, usize) {
    (RANKS[s + degree], RANKS[s])
}

impl DGElement {
    pub fn new(degree: usize, slots: Vec<PolyMatrix>) -> Result<Self> {
        if degree > 3 {
            return Err(Error::DegreeOverflow(degree));
        }
        if slots.len() != 4 - degree {
            return Err(Error::DimensionMismatch(format!(
                "degree {degree} needs {} slots, got {}",
                4 - degree,
                slots.len()
            )));
        }
        for (s, m) in slots.iter().enumerate() {
            if m.shape() != slot_shape(degree, s) {
                return Err(Error::DimensionMismatch(format!(
                    "slot {} of a degree-{degree} element has shape {:?}, expected {:?}",
                    s as i32 - 3,
                    m.shape(),
                    slot_shape(degree, s)
                )));
            }
        }
        Ok(DGElement { degree, slots })
    }

    pub fn zero(vars: &Vars, degree: usize) -> Result<Self> {
        if degree > 3 {
            return Err(Error::DegreeOverflow(degree));
        }
        let slots = (0..4 - degree)
            .map(|s| {
                let (r, c) = slot_shape(degree, s);
                PolyMatrix::zeros(vars, r, c)
            })
            .collect();
        Ok(DGElement { degree, slots })
    }

    fn from_int(vars: &Vars, degree: usize, slots: &[&[&[i64]]]) -> Self {
        let slots = slots.iter().map(|rows| PolyMatrix::from_int_rows(vars, rows)).collect();
        DGElement::new(degree, slots).expect("well-shaped constant element")
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn slots(&self) -> &[PolyMatrix] {
        &self.slots
    }

    /// Slot `Hom(Q^i, Q^{i+deg})`.
    pub fn slot(&self, i: i32) -> &PolyMatrix {
        &self.slots[(i + 3) as usize]
    }

    pub fn is_zero(&self) -> bool {
        self.slots.iter().all(PolyMatrix::is_zero)
    }

    pub fn is_constant(&self) -> bool {
        self.slots.iter().all(PolyMatrix::is_constant)
    }

    pub fn scale(&self, c: &Scalar) -> DGElement {
        DGElement { degree: self.degree, slots: self.slots.iter().map(|m| m.scale(c)).collect() }
    }

    pub fn neg(&self) -> DGElement {
        self.scale(&Scalar::from_int(-1))
    }

    pub fn try_add(&self, other: &DGElement) -> Result<DGElement> {
        if self.degree != other.degree {
            return Err(Error::DimensionMismatch(format!("degrees {} and {}", self.degree, other.degree)));
        }
        let slots = self.slots.iter().zip(&other.slots).map(|(a, b)| a.try_add(b)).collect::<Result<_>>()?;
        Ok(DGElement { degree: self.degree, slots })
    }

    pub fn try_sub(&self, other: &DGElement) -> Result<DGElement> {
        self.try_add(&other.neg())
    }

    /// Entries as `(slot, row, col, monomial) → coefficient`, for linear algebra
    /// over the ground field.
    fn flatten(&self) -> BTreeMap<(usize, usize, usize, Monomial), Scalar> {
        let mut out = BTreeMap::new();
        for (s, m) in self.slots.iter().enumerate() {
            for i in 0..m.rows() {
                for j in 0..m.cols() {
                    for (mono, c) in m[(i, j)].terms() {
                        out.insert((s, i, j, mono.clone()), c.clone());
                    }
                }
            }
        }
        out
    }
}

impl Serialize for DGElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let slots: Vec<Vec<Vec<String>>> = self
            .slots
            .iter()
            .map(|m| (0..m.rows()).map(|i| (0..m.cols()).map(|j| m[(i, j)].to_string()).collect()).collect())
            .collect();
        let mut st = s.serialize_struct("DGElement", 2)?;
        st.serialize_field("degree", &self.degree)?;
        st.serialize_field("slots", &slots)?;
        st.end()
    }
}

/// `δu = d∘u − (−1)^{deg u} u∘d`, slot by slot.
pub fn dg_differential(u: &DGElement, k: &KoszulComplex) -> Result<DGElement> {
    let p = u.degree as i32;
    let q = p + 1;
    if q > 3 {
        return Err(Error::DegreeOverflow(q as usize));
    }
    let sign = if p % 2 == 0 { Scalar::from_int(-1) } else { Scalar::one() };
    let mut slots = Vec::new();
    for i in -3..=-q {
        let (r, c) = slot_shape(q as usize, (i + 3) as usize);
        let mut acc = PolyMatrix::zeros(&k.vars, r, c);
        // d_{i+p} ∘ u_i, present when Q^{i+p} is not the last term
        if i + p <= -1 {
            acc = acc.try_add(&k.d(i + p).try_mul(u.slot(i))?)?;
        }
        // u_{i+1} ∘ d_i
        acc = acc.try_add(&u.slot(i + 1).try_mul(k.d(i))?.scale(&sign))?;
        slots.push(acc);
    }
    DGElement::new(q as usize, slots)
}

pub fn dg_product(u: &DGElement, v: &DGElement) -> Result<DGElement> {
    let (p, q) = (u.degree, v.degree);
    let d = p + q;
    if d > 3 {
        return Err(Error::DegreeOverflow(d));
    }
    let mut slots = Vec::with_capacity(4 - d);
    for s in 0..4 - d {
        slots.push(u.slots[s + q].try_mul(&v.slots[s])?);
    }
    DGElement::new(d, slots)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Hats {
    pub one: DGElement,
    pub x: DGElement,
    pub y: DGElement,
    pub z: DGElement,
}

/// `1̂, x̂, ŷ, ẑ` with constant entries, as displayed in the construction.
pub fn hat_elements(k: &KoszulComplex) -> Hats {
    let v = &k.vars;
    let id: &[&[i64]] = &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]];
    Hats {
        one: DGElement::from_int(v, 0, &[&[&[1]], id, id, &[&[1]]]),
        x: DGElement::from_int(
            v,
            1,
            &[&[&[1], &[0], &[0]], &[&[0, 0, 0], &[0, 0, -1], &[0, 1, 0]], &[&[1, 0, 0]]],
        ),
        y: DGElement::from_int(
            v,
            1,
            &[&[&[0], &[1], &[0]], &[&[0, 0, 1], &[0, 0, 0], &[-1, 0, 0]], &[&[0, 1, 0]]],
        ),
        z: DGElement::from_int(
            v,
            1,
            &[&[&[0], &[0], &[1]], &[&[0, -1, 0], &[1, 0, 0], &[0, 0, 0]], &[&[0, 0, 1]]],
        ),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Relation {
    pub name: String,
    pub holds: bool,
    pub computed: DGElement,
    pub expected: DGElement,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProductTableReport {
    pub point: [Scalar; 3],
    pub relations: Vec<Relation>,
    pub all_hold: bool,
}

impl ProductTableReport {
    pub fn failing(&self) -> Vec<&str> {
        self.relations.iter().filter(|r| !r.holds).map(|r| r.name.as_str()).collect()
    }
}

pub fn verify_product_table(k: &KoszulComplex) -> Result<ProductTableReport> {
    verify_product_table_with(k, &hat_elements(k))
}

/// Checks each displayed relation literally against the given hats.
pub fn verify_product_table_with(k: &KoszulComplex, h: &Hats) -> Result<ProductTableReport> {
    let v = &k.vars;
    let mul = dg_product;
    let mut relations = Vec::new();
    let mut check = |name: &str, computed: DGElement, expected: DGElement| {
        relations.push(Relation { name: name.into(), holds: computed == expected, computed, expected });
    };
    let gens = [("x̂", &h.x), ("ŷ", &h.y), ("ẑ", &h.z)];
    for (n, g) in gens {
        check(&format!("1̂·{n} = {n}"), mul(&h.one, g)?, g.clone());
    }
    for (n, g) in gens {
        check(&format!("{n}·{n} = 0"), mul(g, g)?, DGElement::zero(v, 2)?);
    }
    let displayed = |c: [i64; 3], r: [i64; 3]| {
        DGElement::from_int(v, 2, &[&[&[c[0]], &[c[1]], &[c[2]]], &[&r]])
    };
    let pairs = [
        ("x̂", &h.x, "ŷ", &h.y, displayed([0, 0, 1], [1, 0, 0])),
        ("ŷ", &h.y, "ẑ", &h.z, displayed([1, 0, 0], [1, 0, 0])),
        ("ẑ", &h.z, "x̂", &h.x, displayed([0, 1, 0], [0, 1, 0])),
    ];
    for (na, a, nb, b, shown) in pairs {
        let ab = mul(a, b)?;
        let ba = mul(b, a)?;
        check(&format!("{na}·{nb} = −{nb}·{na}"), ab.clone(), ba.neg());
        check(&format!("{na}·{nb} = displayed"), ab, shown.clone());
        check(&format!("−{nb}·{na} = displayed"), ba.neg(), shown);
    }
    let xyz = mul(&mul(&h.x, &h.y)?, &h.z)?;
    check("x̂·ŷ·ẑ = 2", xyz, DGElement::from_int(v, 3, &[&[&[2]]]));
    let all_hold = relations.iter().all(|r| r.holds);
    Ok(ProductTableReport { point: k.point.clone(), relations, all_hold })
}

/// Cohomology dimensions of `Hom(Q^•, O_p)`, degrees 0..3.
pub fn ext_dims(k: &KoszulComplex) -> Result<[usize; 4]> {
    let amb = k.ambient_diffs()?;
    // Precomposition with d_i, evaluated at p, maps Hom(Q^{i+1}, C) → Hom(Q^i, C).
    let ranks: Vec<usize> = amb.iter().map(|m| m.eval(&k.point).map(|e| e.rank())).collect::<Result<_>>()?;
    let mut out = [0; 4];
    for (j, slot) in out.iter_mut().enumerate() {
        // Ext^j = cohomology at Hom(Q^{-j}, C); outgoing map is d_{-j-1}^*, incoming d_{-j}^*.
        let s = 3 - j;
        let outgoing = if s >= 1 { ranks[s - 1] } else { 0 };
        let incoming = if s <= 2 { ranks[s] } else { 0 };
        *slot = RANKS[s] - outgoing - incoming;
    }
    Ok(out)
}

/// Hat-product basis of `H^•`: `1̂ | x̂, ŷ, ẑ | x̂ŷ, x̂ẑ, ŷẑ | x̂ŷẑ`.
pub const BASIS_LABELS: [&str; 8] = ["1", "x", "y", "z", "xy", "xz", "yz", "xyz"];

pub fn basis_range(degree: usize) -> std::ops::Range<usize> {
    match degree {
        0 => 0..1,
        1 => 1..4,
        2 => 4..7,
        3 => 7..8,
        _ => 8..8,
    }
}

fn binom3(i: usize) -> usize {
    [1, 3, 3, 1].get(i).copied().unwrap_or(0)
}

pub fn basis_representatives(h: &Hats) -> Result<Vec<DGElement>> {
    let m = dg_product;
    Ok(vec![
        h.one.clone(),
        h.x.clone(),
        h.y.clone(),
        h.z.clone(),
        m(&h.x, &h.y)?,
        m(&h.x, &h.z)?,
        m(&h.y, &h.z)?,
        m(&m(&h.x, &h.y)?, &h.z)?,
    ])
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtClass {
    pub degree: usize,
    pub coords: Vector,
}

impl ExtClass {
    pub fn new(degree: usize, coords: Vector) -> Result<Self> {
        if degree > 3 {
            return Err(Error::DegreeOverflow(degree));
        }
        if coords.len() != binom3(degree) {
            return Err(Error::DimensionMismatch(format!(
                "degree-{degree} class needs {} coordinates, got {}",
                binom3(degree),
                coords.len()
            )));
        }
        Ok(ExtClass { degree, coords })
    }

    /// The `k`-th basis class of the given degree.
    pub fn basis(degree: usize, k: usize) -> Self {
        let mut coords = vec![Scalar::zero(); binom3(degree)];
        coords[k] = Scalar::one();
        ExtClass { degree, coords }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Scalar::is_zero)
    }
}

/// Coordinates of `target` in the span of `basis`, if it lies there.
fn express_in(basis: &[DGElement], target: &DGElement) -> Result<Option<Vector>> {
    let flats: Vec<_> = basis.iter().map(DGElement::flatten).collect();
    let t = target.flatten();
    let mut keys: Vec<_> = flats.iter().flat_map(|f| f.keys().cloned()).chain(t.keys().cloned()).collect();
    keys.sort();
    keys.dedup();
    if keys.is_empty() {
        return Ok(Some(vec![Scalar::zero(); basis.len()]));
    }
    let cols: Vec<Vector> =
        flats.iter().map(|f| keys.iter().map(|k| f.get(k).cloned().unwrap_or_else(Scalar::zero)).collect()).collect();
    let rhs: Vector = keys.iter().map(|k| t.get(k).cloned().unwrap_or_else(Scalar::zero)).collect();
    let m = if cols.is_empty() { Matrix::zeros(keys.len(), 0) } else { Matrix::from_columns(keys.len(), &cols)? };
    if m.cols() == 0 {
        return Ok(rhs.iter().all(Scalar::is_zero).then(Vec::new));
    }
    m.solve(&rhs)
}

/// `Ext^•(O_p, O_p)` with its Yoneda product, as structure constants in the
/// hat basis. The table can be overridden to build negative controls.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtAlgebra {
    pub point: [Scalar; 3],
    /// `table[i][j]` = coordinates (in the 8-dim global basis) of `e_i · e_j`.
    table: Vec<Vec<Vector>>,
    /// Trace of the top basis class: its degree-3 slot evaluated at `p`.
    trace_top: Scalar,
}

impl ExtAlgebra {
    pub fn new(k: &KoszulComplex) -> Result<Self> {
        ExtAlgebra::from_hats(k, &hat_elements(k))
    }

    pub fn from_hats(k: &KoszulComplex, h: &Hats) -> Result<Self> {
        let reps = basis_representatives(h)?;
        let mut table = vec![vec![vec![Scalar::zero(); 8]; 8]; 8];
        for (i, a) in reps.iter().enumerate() {
            for (j, b) in reps.iter().enumerate() {
                let d = a.degree + b.degree;
                if d > 3 {
                    continue;
                }
                let prod = dg_product(a, b)?;
                let range = basis_range(d);
                let c = express_in(&reps[range.clone()], &prod)?.ok_or_else(|| {
                    Error::Invariant(format!("{}·{} leaves the hat span", BASIS_LABELS[i], BASIS_LABELS[j]))
                })?;
                for (off, x) in c.into_iter().enumerate() {
                    table[i][j][range.start + off] = x;
                }
            }
        }
        let trace_top = reps[7].slot(-3)[(0, 0)].eval(&[Scalar::zero(), Scalar::zero(), Scalar::zero()])?;
        Ok(ExtAlgebra { point: k.point.clone(), table, trace_top })
    }

    pub fn trace_top(&self) -> &Scalar {
        &self.trace_top
    }

    pub fn product_coords(&self, i: usize, j: usize) -> &Vector {
        &self.table[i][j]
    }

    pub fn set_product(&mut self, i: usize, j: usize, coords: Vector) {
        self.table[i][j] = coords;
    }

    pub fn m2(&self, a: &ExtClass, b: &ExtClass) -> Result<ExtClass> {
        let d = a.degree + b.degree;
        if d > 3 {
            return Err(Error::DegreeOverflow(d));
        }
        let (ra, rb, rd) = (basis_range(a.degree), basis_range(b.degree), basis_range(d));
        let mut out = vec![Scalar::zero(); rd.len()];
        for (ka, ca) in a.coords.iter().enumerate() {
            for (kb, cb) in b.coords.iter().enumerate() {
                if ca.is_zero() || cb.is_zero() {
                    continue;
                }
                let coef = ca * cb;
                let row = &self.table[ra.start + ka][rb.start + kb];
                for (o, x) in out.iter_mut().enumerate() {
                    *x += &(&coef * &row[rd.start + o]);
                }
            }
        }
        ExtClass::new(d, out)
    }

    /// `(a, b) = tr(m2(a, b))` for `deg a + deg b = 3`.
    pub fn pairing(&self, a: &ExtClass, b: &ExtClass) -> Result<Scalar> {
        if a.degree + b.degree != 3 {
            return Err(Error::InvalidInput(format!("pairing of degrees {} and {}", a.degree, b.degree)));
        }
        Ok(&self.m2(a, b)?.coords[0] * &self.trace_top)
    }

    /// `(m2(a, b), c)` on degree-1 basis classes.
    pub fn cyclic_triple(&self, a: usize, b: usize, c: usize) -> Result<Scalar> {
        let e = |k| ExtClass::basis(1, k);
        self.pairing(&self.m2(&e(a), &e(b))?, &e(c))
    }
}

pub fn m2(a: &ExtClass, b: &ExtClass, k: &KoszulComplex) -> Result<ExtClass> {
    ExtAlgebra::new(k)?.m2(a, b)
}

pub fn cyclic_pairing(a: &ExtClass, b: &ExtClass, k: &KoszulComplex) -> Result<Scalar> {
    ExtAlgebra::new(k)?.pairing(a, b)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MasseyReport {
    pub point: [Scalar; 3],
    pub closed_under_product: bool,
    pub all_cocycles: bool,
    pub identity_on_homology: bool,
    pub ext_dims: [usize; 4],
    /// Value of the trace on the top class `[x̂ŷẑ]`.
    pub trace_top: Option<Scalar>,
    pub higher_products_vanish: bool,
}

pub fn massey_vanishing_report(k: &KoszulComplex) -> Result<MasseyReport> {
    massey_vanishing_report_with(k, &hat_elements(k))
}

pub fn massey_vanishing_report_with(k: &KoszulComplex, h: &Hats) -> Result<MasseyReport> {
    let reps = basis_representatives(h)?;
    let mut closed = true;
    for a in &reps {
        for b in &reps {
            let d = a.degree + b.degree;
            if d > 3 {
                continue;
            }
            if express_in(&reps[basis_range(d)], &dg_product(a, b)?)?.is_none() {
                closed = false;
            }
        }
    }
    let mut cocycles = true;
    for r in &reps {
        if r.degree < 3 && !dg_differential(r, k)?.is_zero() {
            cocycles = false;
        }
    }
    let dims = ext_dims(k)?;
    // Compose with the augmentation Q^0 → O_p: the slot landing in Q^0,
    // evaluated at p, is the class in Hom(Q^{-i}, C) = Ext^i.
    let origin = [Scalar::zero(), Scalar::zero(), Scalar::zero()];
    let mut identity = true;
    for (deg, &dim) in dims.iter().enumerate() {
        let classes: Vec<Vector> = reps[basis_range(deg)]
            .iter()
            .map(|r| r.slot(-(deg as i32)).eval(&origin).map(|m| m.row(0).to_vec()))
            .collect::<Result<_>>()?;
        if classes.len() != dim || crate::exactalg::vectors_rank(RANKS[3 - deg], &classes)? != dim {
            identity = false;
        }
    }
    let trace_top = reps[7].slot(-3)[(0, 0)].eval(&origin).ok();
    Ok(MasseyReport {
        point: k.point.clone(),
        closed_under_product: closed,
        all_cocycles: cocycles,
        identity_on_homology: identity,
        ext_dims: dims,
        trace_top,
        higher_products_vanish: closed && cocycles && identity,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::random::rng;
    use rand::Rng;

    fn pt(a: i64, b: i64, c: i64) -> [Scalar; 3] {
        [Scalar::from_int(a), Scalar::from_int(b), Scalar::from_int(c)]
    }

    fn origin() -> KoszulComplex {
        koszul(&pt(0, 0, 0))
    }

    #[test]
    fn displayed_differentials_at_origin() {
        let k = origin();
        let amb = k.ambient_diffs().unwrap();
        let v = ambient_vars();
        let x = |i| Poly::var(&v, i);
        let z = Poly::zero(&v);
        assert_eq!(amb[0], PolyMatrix::from_fn(&v, 3, 1, |i, _| x(i)));
        let b = [[z.clone(), -&x(2), x(1)], [x(2), z.clone(), -&x(0)], [-&x(1), x(0), z]];
        assert_eq!(amb[1], PolyMatrix::from_fn(&v, 3, 3, |i, j| b[i][j].clone()));
        assert_eq!(amb[2], PolyMatrix::from_fn(&v, 1, 3, |_, j| x(j)));
        assert!(k.is_complex());
    }

    #[test]
    fn differentials_vanish_at_their_point() {
        let k = koszul(&pt(1, 2, 3));
        assert!(k.is_complex());
        for m in k.ambient_diffs().unwrap() {
            assert!(m.eval(k.point()).unwrap().is_zero());
        }
        let elsewhere = k.ambient_diffs().unwrap()[0].eval(&pt(0, 0, 0)).unwrap();
        assert_eq!(elsewhere, Matrix::from_int_rows(&[&[-1], &[-2], &[-3]]));
    }

    #[test]
    fn hats_are_cocycles() {
        let k = origin();
        let h = hat_elements(&k);
        for g in [&h.one, &h.x, &h.y, &h.z] {
            assert!(dg_differential(g, &k).unwrap().is_zero());
            assert!(g.is_constant());
        }
        for r in basis_representatives(&h).unwrap() {
            if r.degree() < 3 {
                assert!(dg_differential(&r, &k).unwrap().is_zero());
            }
        }
        assert_eq!(h.x.slot(-3), &PolyMatrix::from_int_rows(k.vars(), &[&[1], &[0], &[0]]));
    }

    fn random_element<R: Rng>(r: &mut R, vars: &Vars, degree: usize) -> DGElement {
        let slots = (0..4 - degree)
            .map(|s| {
                let (rows, cols) = slot_shape(degree, s);
                PolyMatrix::from_fn(vars, rows, cols, |_, _| {
                    let mut p = Poly::zero(vars);
                    for _ in 0..2 {
                        let m = Monomial::new((0..3).map(|_| r.gen_range(0..2)).collect());
                        p = &p + &Poly::term(vars, m, Scalar::from_int(r.gen_range(-3..=3)));
                    }
                    p
                })
            })
            .collect();
        DGElement::new(degree, slots).unwrap()
    }

    #[test]
    fn differential_squares_to_zero() {
        let k = koszul(&pt(1, -1, 2));
        let mut r = rng(7);
        for _ in 0..10 {
            for deg in 0..2 {
                let u = random_element(&mut r, k.vars(), deg);
                let du = dg_differential(&u, &k).unwrap();
                assert!(dg_differential(&du, &k).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn differential_is_a_derivation() {
        let k = origin();
        let mut r = rng(8);
        for _ in 0..10 {
            let u = random_element(&mut r, k.vars(), 1);
            let v = random_element(&mut r, k.vars(), 1);
            let lhs = dg_differential(&dg_product(&u, &v).unwrap(), &k).unwrap();
            // δ(uv) = δu·v − u·δv for deg u = 1
            let rhs = dg_product(&dg_differential(&u, &k).unwrap(), &v)
                .unwrap()
                .try_sub(&dg_product(&u, &dg_differential(&v, &k).unwrap()).unwrap())
                .unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn computed_hat_products() {
        let k = origin();
        let h = hat_elements(&k);
        let v = k.vars();
        let two = |c: [i64; 3], r: [i64; 3]| DGElement::from_int(v, 2, &[&[&[c[0]], &[c[1]], &[c[2]]], &[&r]]);
        assert_eq!(dg_product(&h.one, &h.x).unwrap(), h.x);
        assert!(dg_product(&h.x, &h.x).unwrap().is_zero());
        assert_eq!(dg_product(&h.x, &h.y).unwrap(), two([0, 0, 1], [0, 0, 1]));
        assert_eq!(dg_product(&h.y, &h.z).unwrap(), two([1, 0, 0], [1, 0, 0]));
        assert_eq!(dg_product(&h.z, &h.x).unwrap(), two([0, 1, 0], [0, 1, 0]));
        let xyz = dg_product(&dg_product(&h.x, &h.y).unwrap(), &h.z).unwrap();
        assert_eq!(xyz, DGElement::from_int(v, 3, &[&[&[1]]]));
        assert_eq!(dg_product(&xyz, &h.x), Err(Error::DegreeOverflow(4)));
    }

    // x̂ = (A,B,C) at e₁ etc., so x̂·ŷ·ẑ is det[e₁ e₂ e₃] = 1; the displayed
    // row of x̂·ŷ and the value 2 are not what composition produces.
    #[test]
    fn product_table_flags_the_displayed_mismatches() {
        let rep = verify_product_table(&origin()).unwrap();
        assert!(!rep.all_hold);
        assert_eq!(rep.failing(), vec!["x̂·ŷ = displayed", "−ŷ·x̂ = displayed", "x̂·ŷ·ẑ = 2"]);
        let shifted = verify_product_table(&koszul(&pt(1, 2, 3))).unwrap();
        assert_eq!(shifted.failing(), rep.failing());
    }

    #[test]
    fn corrupted_hat_is_reported() {
        let k = origin();
        let mut h = hat_elements(&k);
        h.y = h.y.scale(&Scalar::from_int(2));
        let rep = verify_product_table_with(&k, &h).unwrap();
        assert!(rep.failing().contains(&"ŷ·ẑ = displayed"));
        let mut h = hat_elements(&k);
        h.y = h.x.clone();
        assert!(!massey_vanishing_report_with(&k, &h).unwrap().higher_products_vanish);
    }

    #[test]
    fn ext_dimensions() {
        for p in [pt(0, 0, 0), pt(1, 2, 3), [Scalar::frac(1, 2), Scalar::i(), Scalar::from_int(-4)]] {
            let d = ext_dims(&koszul(&p)).unwrap();
            assert_eq!(d, [1, 3, 3, 1]);
            assert_eq!(d.iter().sum::<usize>(), 8);
            assert_eq!(d[0] as i64 - d[1] as i64 + d[2] as i64 - d[3] as i64, 0);
        }
    }

    #[test]
    fn yoneda_products() {
        let k = origin();
        let alg = ExtAlgebra::new(&k).unwrap();
        let e = |i| ExtClass::basis(1, i);
        assert_eq!(alg.m2(&e(0), &e(1)).unwrap(), ExtClass::basis(2, 0));
        let mut r = rng(3);
        for _ in 0..20 {
            let a = ExtClass::new(1, (0..3).map(|_| Scalar::gaussian(r.gen_range(-4..5), r.gen_range(-4..5))).collect()).unwrap();
            let b = ExtClass::new(1, (0..3).map(|_| Scalar::from_int(r.gen_range(-4..5))).collect()).unwrap();
            assert!(alg.m2(&a, &a).unwrap().is_zero());
            let ab = alg.m2(&a, &b).unwrap();
            let ba = alg.m2(&b, &a).unwrap();
            assert!(ab.coords.iter().zip(&ba.coords).all(|(x, y)| (x + y).is_zero()));
        }
        assert_eq!(alg.m2(&ExtClass::basis(2, 0), &e(0)), Ok(ExtClass::new(3, vec![Scalar::zero()]).unwrap()));
        assert!(matches!(alg.m2(&ExtClass::basis(2, 0), &ExtClass::basis(2, 1)), Err(Error::DegreeOverflow(4))));
    }

    #[test]
    fn pairing_values() {
        let k = origin();
        let alg = ExtAlgebra::new(&k).unwrap();
        assert_eq!(alg.trace_top(), &Scalar::one());
        let x = ExtClass::basis(1, 0);
        assert_eq!(cyclic_pairing(&x, &ExtClass::basis(2, 2), &k).unwrap(), Scalar::one());
        assert!(cyclic_pairing(&x, &ExtClass::basis(2, 0), &k).unwrap().is_zero());
        assert!(cyclic_pairing(&x, &x, &k).is_err());
        let gram = Matrix::from_rows(
            (0..3).map(|i| (0..3).map(|j| alg.pairing(&ExtClass::basis(1, i), &ExtClass::basis(2, j)).unwrap()).collect()).collect(),
        )
        .unwrap();
        assert_eq!(gram.rank(), 3);
    }

    #[test]
    fn pairing_is_cyclic() {
        let alg = ExtAlgebra::new(&origin()).unwrap();
        for a in 0..3 {
            for b in 0..3 {
                for c in 0..3 {
                    let lhs = alg.cyclic_triple(a, b, c).unwrap();
                    let rhs = alg.cyclic_triple(b, c, a).unwrap();
                    assert_eq!(lhs, rhs, "({a},{b},{c})");
                }
            }
        }
    }

    #[test]
    fn massey_report_affirms() {
        for p in [pt(0, 0, 0), pt(-2, 5, 1)] {
            let r = massey_vanishing_report(&koszul(&p)).unwrap();
            assert!(r.closed_under_product && r.all_cocycles && r.identity_on_homology);
            assert!(r.higher_products_vanish);
            assert_eq!(r.trace_top, Some(Scalar::one()));
        }
    }
}
