//! Exact bivariate polynomial arithmetic on the space of total degree <= n,
//! plus the fraction-free linear algebra behind correctness determinants and
//! Lagrange solves.
//!
//! Coefficients are stored densely in the fixed graded-lexicographic monomial
//! order (ascending total degree, then ascending x-exponent). Every routine
//! that feeds a determinant or a solve iterates in this order so results are
//! reproducible bit for bit.

mod bareiss;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::gcset::NodeSet;
use crate::geom::{Line, Point, Rat};
use crate::Error;

/// dim of the polynomial space of total degree <= n.
pub fn dim(n: usize) -> usize {
    (n + 1) * (n + 2) / 2
}

fn tri(d: usize) -> usize {
    d * (d + 1) / 2
}

/// Position of x^i y^j in the canonical monomial order.
fn idx(i: usize, j: usize) -> usize {
    tri(i + j) + i
}

/// Monomial exponents in canonical order: by total degree, then by i.
pub fn monomials(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..=n).flat_map(|d| (0..=d).map(move |i| (i, d - i)))
}

/// Dense bivariate polynomial with an explicit degree bound, so that
/// elements with vanishing leading forms remain representable.
#[derive(Clone, PartialEq, Eq)]
pub struct BivarPoly {
    degree_bound: usize,
    coeffs: Vec<Rat>,
}

impl BivarPoly {
    pub fn zero(degree_bound: usize) -> BivarPoly {
        BivarPoly {
            degree_bound,
            coeffs: vec![Rat::zero(); dim(degree_bound)],
        }
    }

    pub fn constant(degree_bound: usize, value: Rat) -> BivarPoly {
        let mut p = BivarPoly::zero(degree_bound);
        p.coeffs[0] = value;
        p
    }

    pub fn from_terms(degree_bound: usize, terms: &[(usize, usize, Rat)]) -> BivarPoly {
        let mut p = BivarPoly::zero(degree_bound);
        for (i, j, c) in terms {
            assert!(i + j <= degree_bound, "term exceeds degree bound");
            p.coeffs[idx(*i, *j)] = c.clone();
        }
        p
    }

    pub fn degree_bound(&self) -> usize {
        self.degree_bound
    }

    pub fn coeff(&self, i: usize, j: usize) -> &Rat {
        &self.coeffs[idx(i, j)]
    }

    pub fn set_coeff(&mut self, i: usize, j: usize, value: Rat) {
        self.coeffs[idx(i, j)] = value;
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Rat::is_zero)
    }

    /// Largest total degree with a nonzero coefficient; 0 for the zero poly.
    pub fn effective_degree(&self) -> usize {
        for d in (0..=self.degree_bound).rev() {
            for i in 0..=d {
                if !self.coeffs[idx(i, d - i)].is_zero() {
                    return d;
                }
            }
        }
        0
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, usize, &Rat)> {
        monomials(self.degree_bound)
            .enumerate()
            .map(move |(k, (i, j))| (i, j, &self.coeffs[k]))
    }

    /// Exact value at a point.
    pub fn eval(&self, pt: &Point) -> Rat {
        let n = self.degree_bound;
        let mut xp = Vec::with_capacity(n + 1);
        let mut yp = Vec::with_capacity(n + 1);
        xp.push(Rat::one());
        yp.push(Rat::one());
        for k in 1..=n {
            xp.push(&xp[k - 1] * &pt.x);
            yp.push(&yp[k - 1] * &pt.y);
        }
        let mut acc = Rat::zero();
        for (k, (i, j)) in monomials(n).enumerate() {
            if !self.coeffs[k].is_zero() {
                acc += &(&(&self.coeffs[k] * &xp[i]) * &yp[j]);
            }
        }
        acc
    }

    pub fn add(&self, other: &BivarPoly) -> BivarPoly {
        assert_eq!(self.degree_bound, other.degree_bound);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        BivarPoly {
            degree_bound: self.degree_bound,
            coeffs,
        }
    }

    pub fn scale(&self, factor: &Rat) -> BivarPoly {
        BivarPoly {
            degree_bound: self.degree_bound,
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    /// Product with the degree-1 form of a line; the bound grows by one.
    pub fn mul_line(&self, l: &Line) -> BivarPoly {
        let n = self.degree_bound;
        let a = Rat::from_bigint(l.a().clone());
        let b = Rat::from_bigint(l.b().clone());
        let c = Rat::from_bigint(l.c().clone());
        let mut out = BivarPoly::zero(n + 1);
        for (k, (i, j)) in monomials(n).enumerate() {
            let coeff = &self.coeffs[k];
            if coeff.is_zero() {
                continue;
            }
            if !a.is_zero() {
                out.coeffs[idx(i + 1, j)] += &(coeff * &a);
            }
            if !b.is_zero() {
                out.coeffs[idx(i, j + 1)] += &(coeff * &b);
            }
            if !c.is_zero() {
                out.coeffs[idx(i, j)] += &(coeff * &c);
            }
        }
        out
    }

    /// Coefficients of t -> p(gamma(t)) for the canonical parametrization of
    /// the line: gamma(t) = (t, -(a t + c)/b) when b != 0, else
    /// gamma(t) = (-c/a, t). The list is identically zero exactly when the
    /// line divides the polynomial.
    pub fn restrict_to_line(&self, l: &Line) -> Vec<Rat> {
        let n = self.degree_bound;
        if !l.b().is_zero() {
            let b = Rat::from_bigint(l.b().clone());
            let alpha = &(-&Rat::from_bigint(l.c().clone())) / &b;
            let beta = &(-&Rat::from_bigint(l.a().clone())) / &b;
            // Horner in y over polynomials in t, substituting y = alpha + beta t.
            let slice = |j: usize| -> Vec<Rat> {
                (0..=(n - j))
                    .map(|i| self.coeffs[idx(i, j)].clone())
                    .collect()
            };
            let mut acc = slice(n);
            for j in (0..n).rev() {
                // acc = acc * (alpha + beta t) + q_j(t)
                let mut next = vec![Rat::zero(); n + 1];
                for (d, c) in acc.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    next[d] += &(c * &alpha);
                    next[d + 1] += &(c * &beta);
                }
                for (d, c) in slice(j).into_iter().enumerate() {
                    next[d] += &c;
                }
                acc = next;
            }
            acc.resize(n + 1, Rat::zero());
            acc
        } else {
            let x0 = &(-&Rat::from_bigint(l.c().clone())) / &Rat::from_bigint(l.a().clone());
            let mut xp = vec![Rat::one()];
            for k in 1..=n {
                xp.push(&xp[k - 1] * &x0);
            }
            let mut out = vec![Rat::zero(); n + 1];
            for (k, (i, j)) in monomials(n).enumerate() {
                if !self.coeffs[k].is_zero() {
                    out[j] += &(&self.coeffs[k] * &xp[i]);
                }
            }
            out
        }
    }

    /// Exact quotient by a line form. Errors when the restriction to the
    /// line is nonzero.
    pub fn divide_by_line(&self, l: &Line) -> Result<BivarPoly, Error> {
        let restriction = self.restrict_to_line(l);
        if restriction.iter().any(|c| !c.is_zero()) {
            return Err(Error::NotDivisible);
        }
        let n = self.degree_bound;
        assert!(n >= 1, "cannot divide a constant by a line");
        let mut w: Vec<Rat> = self.coeffs.clone();
        let mut q = BivarPoly::zero(n - 1);
        let a = Rat::from_bigint(l.a().clone());
        let b = Rat::from_bigint(l.b().clone());
        let c = Rat::from_bigint(l.c().clone());
        if !l.b().is_zero() {
            for j in (1..=n).rev() {
                for i in 0..=(n - j) {
                    let quo = &w[idx(i, j)] / &b;
                    if quo.is_zero() {
                        continue;
                    }
                    w[idx(i, j)] = Rat::zero();
                    w[idx(i + 1, j - 1)] -= &(&quo * &a);
                    w[idx(i, j - 1)] -= &(&quo * &c);
                    q.coeffs[idx(i, j - 1)] = quo;
                }
            }
            debug_assert!((0..=n).all(|i| w[idx(i, 0)].is_zero()));
        } else {
            for i in (1..=n).rev() {
                for j in 0..=(n - i) {
                    let quo = &w[idx(i, j)] / &a;
                    if quo.is_zero() {
                        continue;
                    }
                    w[idx(i, j)] = Rat::zero();
                    w[idx(i - 1, j)] -= &(&quo * &c);
                    q.coeffs[idx(i - 1, j)] = quo;
                }
            }
            debug_assert!((0..=n).all(|j| w[idx(0, j)].is_zero()));
        }
        Ok(q)
    }

    /// Clears denominators and content: the primitive integer coefficient
    /// vector, equal to this polynomial up to a nonzero rational factor.
    pub(crate) fn primitive_int_coeffs(&self) -> Vec<BigInt> {
        let mut lcm = BigInt::one();
        for c in &self.coeffs {
            lcm = lcm.lcm(c.denom());
        }
        let mut out: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&lcm / c.denom()))
            .collect();
        reduce_content(&mut out);
        out
    }

    pub(crate) fn from_int_coeffs(degree_bound: usize, coeffs: &[BigInt]) -> BivarPoly {
        assert_eq!(coeffs.len(), dim(degree_bound));
        BivarPoly {
            degree_bound,
            coeffs: coeffs.iter().map(|c| Rat::from_bigint(c.clone())).collect(),
        }
    }
}

impl std::fmt::Debug for BivarPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut first = true;
        for (i, j, c) in self.terms() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})x^{i}y^{j}")?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Serializes as {"degree_bound": n, "terms": [[i, j, "num/den"], ...]} with
/// zero terms omitted and terms in the canonical monomial order.
impl Serialize for BivarPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("BivarPoly", 2)?;
        st.serialize_field("degree_bound", &self.degree_bound)?;
        struct Terms<'a>(&'a BivarPoly);
        impl Serialize for Terms<'_> {
            fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
                let mut seq = serializer.serialize_seq(None)?;
                for (i, j, c) in self.0.terms() {
                    if !c.is_zero() {
                        seq.serialize_element(&(i, j, c))?;
                    }
                }
                seq.end()
            }
        }
        st.serialize_field("terms", &Terms(self))?;
        st.end()
    }
}

/// A node's fundamental polynomial expressed as scalar times a product of
/// line forms, the shape that defines the GC property.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FundamentalFactorization {
    pub node: Point,
    pub scalar: Rat,
    pub lines: Vec<Line>,
}

impl FundamentalFactorization {
    /// Expands scalar * product of lines back into a polynomial of the given
    /// degree bound.
    pub fn expand(&self, degree_bound: usize) -> BivarPoly {
        let mut p = BivarPoly::constant(0, self.scalar.clone());
        for l in &self.lines {
            p = p.mul_line(l);
        }
        // pad up to the requested bound
        let mut out = BivarPoly::zero(degree_bound);
        for (i, j, c) in p.terms() {
            out.set_coeff(i, j, c.clone());
        }
        out
    }
}

fn reduce_content(v: &mut [BigInt]) {
    let mut g = BigInt::zero();
    for c in v.iter() {
        g = g.gcd(c);
        if g.is_one() {
            break;
        }
    }
    if g.is_zero() || g.is_one() {
        return;
    }
    for c in v.iter_mut() {
        *c = &*c / &g;
    }
}

/// Integer-form restriction test: true iff the line divides the polynomial
/// given by primitive integer coefficients. Equivalent to checking that
/// `restrict_to_line` vanishes, but runs entirely over the integers.
pub(crate) fn int_restriction_is_zero(coeffs: &[BigInt], n: usize, l: &Line) -> bool {
    let (a, b, c) = (l.a(), l.b(), l.c());
    if !b.is_zero() {
        // p(t, -(a t + c)/b) * b^n via Horner in y.
        let mut bp = vec![BigInt::one()];
        for k in 1..=n {
            bp.push(&bp[k - 1] * b);
        }
        let slice = |j: usize| -> Vec<BigInt> {
            (0..=(n - j)).map(|i| coeffs[idx(i, j)].clone()).collect()
        };
        let mut acc = slice(n);
        for j in (0..n).rev() {
            let mut next = vec![BigInt::zero(); n + 1];
            for (d, co) in acc.iter().enumerate() {
                if co.is_zero() {
                    continue;
                }
                next[d] -= co * c;
                next[d + 1] -= co * a;
            }
            for (d, co) in slice(j).into_iter().enumerate() {
                next[d] += co * &bp[n - j];
            }
            acc = next;
        }
        acc.iter().all(Zero::is_zero)
    } else {
        // x fixed at -c/a: p(-c/a, t) * a^n.
        let mut ap = vec![BigInt::one()];
        let mut cp = vec![BigInt::one()];
        for k in 1..=n {
            ap.push(&ap[k - 1] * a);
            cp.push(&cp[k - 1] * &(-c.clone()));
        }
        let mut out = vec![BigInt::zero(); n + 1];
        for (k, (i, j)) in monomials(n).enumerate() {
            if !coeffs[k].is_zero() {
                out[j] += &coeffs[k] * &cp[i] * &ap[n - i];
            }
        }
        out.iter().all(Zero::is_zero)
    }
}

/// Integer-form exact division: primitive quotient coefficients when the
/// line divides the polynomial, `None` otherwise.
pub(crate) fn int_try_divide(coeffs: &[BigInt], n: usize, l: &Line) -> Option<Vec<BigInt>> {
    if n == 0 {
        return None;
    }
    let (a, b, c) = (l.a(), l.b(), l.c());
    let lead = if !b.is_zero() { b } else { a };
    // Scale by lead^n so every interior division is exact.
    let mut scale = BigInt::one();
    for _ in 0..n {
        scale *= lead;
    }
    let mut w: Vec<BigInt> = coeffs.iter().map(|v| v * &scale).collect();
    let mut q = vec![BigInt::zero(); dim(n - 1)];
    if !b.is_zero() {
        for j in (1..=n).rev() {
            for i in 0..=(n - j) {
                let quo = &w[idx(i, j)] / b;
                if quo.is_zero() {
                    continue;
                }
                w[idx(i, j)] = BigInt::zero();
                w[idx(i + 1, j - 1)] -= &quo * a;
                w[idx(i, j - 1)] -= &quo * c;
                q[idx(i, j - 1)] = quo;
            }
        }
        if (0..=n).any(|i| !w[idx(i, 0)].is_zero()) {
            return None;
        }
    } else {
        for i in (1..=n).rev() {
            for j in 0..=(n - i) {
                let quo = &w[idx(i, j)] / a;
                if quo.is_zero() {
                    continue;
                }
                w[idx(i, j)] = BigInt::zero();
                w[idx(i - 1, j)] -= &quo * c;
                q[idx(i - 1, j)] = quo;
            }
        }
        if (0..=n).any(|j| !w[idx(0, j)].is_zero()) {
            return None;
        }
    }
    reduce_content(&mut q);
    Some(q)
}

pub(crate) fn int_eval(coeffs: &[BigInt], n: usize, pt: &Point) -> Rat {
    let mut xp = vec![Rat::one()];
    let mut yp = vec![Rat::one()];
    for k in 1..=n {
        xp.push(&xp[k - 1] * &pt.x);
        yp.push(&yp[k - 1] * &pt.y);
    }
    let mut acc = Rat::zero();
    for (k, (i, j)) in monomials(n).enumerate() {
        if !coeffs[k].is_zero() {
            acc += &(&(&Rat::from_bigint(coeffs[k].clone()) * &xp[i]) * &yp[j]);
        }
    }
    acc
}

/// Collocation rows for the node set, cleared to integers. Returns the
/// matrix and the per-row multiplier that was applied.
fn integer_collocation(set: &NodeSet) -> (Vec<Vec<BigInt>>, Vec<BigInt>) {
    let n = set.degree();
    let size = dim(n);
    let mut matrix = Vec::with_capacity(size);
    let mut multipliers = Vec::with_capacity(size);
    for node in set.nodes() {
        let mut xp = vec![Rat::one()];
        let mut yp = vec![Rat::one()];
        for k in 1..=n {
            xp.push(&xp[k - 1] * &node.x);
            yp.push(&yp[k - 1] * &node.y);
        }
        let values: Vec<Rat> = monomials(n).map(|(i, j)| &xp[i] * &yp[j]).collect();
        let mut lcm = BigInt::one();
        for v in &values {
            lcm = lcm.lcm(v.denom());
        }
        let row: Vec<BigInt> = values
            .iter()
            .map(|v| v.numer() * (&lcm / v.denom()))
            .collect();
        matrix.push(row);
        multipliers.push(lcm);
    }
    (matrix, multipliers)
}

/// Determinant of the collocation matrix in the canonical node and monomial
/// orders; nonzero exactly when the set is correct for its degree.
pub fn correctness_determinant(set: &NodeSet) -> Result<Rat, Error> {
    let expected = dim(set.degree());
    if set.len() != expected {
        return Err(Error::SizeMismatch {
            expected,
            got: set.len(),
        });
    }
    let (matrix, multipliers) = integer_collocation(set);
    let det = bareiss::determinant(matrix);
    let mut denom = BigInt::one();
    for m in &multipliers {
        denom *= m;
    }
    Ok(Rat::new(det, denom))
}

/// All fundamental polynomials of the set, solved through one fraction-free
/// elimination of the collocation matrix. Entry k interpolates the
/// Kronecker delta at node k.
pub fn fundamental_all(set: &NodeSet) -> Result<Vec<BivarPoly>, Error> {
    let expected = dim(set.degree());
    if set.len() != expected {
        return Err(Error::SizeMismatch {
            expected,
            got: set.len(),
        });
    }
    let (matrix, multipliers) = integer_collocation(set);
    let inverse = bareiss::invert(&matrix).ok_or(Error::NotCorrect)?;
    let size = set.len();
    let mut out = Vec::with_capacity(size);
    for a in 0..size {
        let mult = Rat::from_bigint(multipliers[a].clone());
        let coeffs: Vec<Rat> = (0..size).map(|i| &inverse[i][a] * &mult).collect();
        out.push(BivarPoly {
            degree_bound: set.degree(),
            coeffs,
        });
    }
    Ok(out)
}

/// The unique polynomial of the set's degree equal to 1 at `a` and 0 at
/// every other node.
pub fn fundamental_polynomial(set: &NodeSet, a: &Point) -> Result<BivarPoly, Error> {
    let index = set
        .index_of(a)
        .ok_or_else(|| Error::NodeAbsent { node: a.clone() })?;
    let mut all = fundamental_all(set)?;
    Ok(all.swap_remove(index))
}
