//! Sparse complex polynomials in n variables and polynomial one-forms.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::scalar::{complex_from_json, complex_to_json, Scalar};

pub type Exponent = Vec<u32>;

/// Σ c_a z^a with no zero coefficients stored.
#[derive(Clone, Debug, PartialEq)]
pub struct CPolynomial<S: Scalar> {
    nvars: usize,
    terms: BTreeMap<Exponent, Complex<S>>,
}

impl<S: Scalar> CPolynomial<S> {
    pub fn zero(nvars: usize) -> Self {
        CPolynomial {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Complex<S>) -> Self {
        Self::from_terms(nvars, [(vec![0; nvars], c)]).expect("valid constant")
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Complex::one())
    }

    /// z_j (zero-based `j`).
    pub fn variable(nvars: usize, j: usize) -> Self {
        let mut e = vec![0; nvars];
        e[j] = 1;
        Self::monomial(e)
    }

    pub fn monomial(exp: Exponent) -> Self {
        let nvars = exp.len();
        Self::from_terms(nvars, [(exp, Complex::one())]).expect("valid monomial")
    }

    /// Sums duplicate exponents and drops zero coefficients.
    pub fn from_terms(
        nvars: usize,
        terms: impl IntoIterator<Item = (Exponent, Complex<S>)>,
    ) -> Result<Self> {
        if nvars == 0 {
            return Err(Error::Malformed("polynomial needs at least one variable".into()));
        }
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(Error::DimensionMismatch(format!(
                    "exponent of length {} in a polynomial of {nvars} variables",
                    e.len()
                )));
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, e: Exponent, c: Complex<S>) {
        let sum = match self.terms.remove(&e) {
            Some(old) => old + c,
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(e, sum);
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &Complex<S>)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; 0 for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    /// Largest exponent of each variable.
    pub fn max_exponents(&self) -> Vec<u32> {
        let mut out = vec![0; self.nvars];
        for e in self.terms.keys() {
            for (o, &x) in out.iter_mut().zip(e) {
                *o = (*o).max(x);
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut p = self.clone();
        for (e, c) in &other.terms {
            p.add_term(e.clone(), c.clone());
        }
        p
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&Complex::new(-S::one(), S::zero())))
    }

    pub fn scale(&self, c: &Complex<S>) -> Self {
        let mut p = Self::zero(self.nvars);
        for (e, x) in &self.terms {
            p.add_term(e.clone(), x.clone() * c.clone());
        }
        p
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut p = Self::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                p.add_term(e, c1.clone() * c2.clone());
            }
        }
        p
    }

    /// ∂/∂z_j.
    pub fn derivative(&self, j: usize) -> Self {
        let mut p = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[j] > 0 {
                let mut d = e.clone();
                d[j] -= 1;
                let k = S::from_i64(e[j] as i64);
                p.add_term(d, Complex::new(c.re.clone() * k.clone(), c.im.clone() * k));
            }
        }
        p
    }

    pub fn eval(&self, z: &[Complex<S>]) -> Complex<S> {
        let mut acc = Complex::zero();
        for (e, c) in &self.terms {
            let mut m = c.clone();
            for (zk, &ek) in z.iter().zip(e) {
                for _ in 0..ek {
                    m = m * zk.clone();
                }
            }
            acc = acc + m;
        }
        acc
    }

    pub fn map_scalar<T: Scalar>(&self, f: impl Fn(&S) -> T) -> CPolynomial<T> {
        CPolynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), Complex::new(f(&c.re), f(&c.im))))
                .filter(|(_, c)| !c.is_zero())
                .collect(),
        }
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(e, c)| json!({ "exp": e, "coef": complex_to_json(c) }))
            .collect();
        json!({ "nvars": self.nvars, "terms": terms })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let nvars = v
            .get("nvars")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Malformed("polynomial: missing `nvars`".into()))?
            as usize;
        let items = v
            .get("terms")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Malformed("polynomial: missing `terms`".into()))?;
        let mut terms = Vec::with_capacity(items.len());
        let mut seen = std::collections::BTreeSet::new();
        for (i, t) in items.iter().enumerate() {
            let exp: Exponent = t
                .get("exp")
                .and_then(|e| serde_json::from_value(e.clone()).ok())
                .ok_or_else(|| Error::Malformed(format!("terms[{i}]: bad `exp`")))?;
            if !seen.insert(exp.clone()) {
                return Err(Error::Malformed(format!("terms[{i}]: duplicate exponent {exp:?}")));
            }
            let coef = t
                .get("coef")
                .ok_or_else(|| Error::Malformed(format!("terms[{i}]: missing `coef`")))
                .and_then(|c| {
                    complex_from_json(c).map_err(|e| Error::Malformed(format!("terms[{i}].coef: {e}")))
                })?;
            terms.push((exp, coef));
        }
        Self::from_terms(nvars, terms)
    }
}

fn fmt_monomial(f: &mut fmt::Formatter<'_>, e: &[u32]) -> fmt::Result {
    let mut first = true;
    for (k, &x) in e.iter().enumerate() {
        if x == 0 {
            continue;
        }
        if !first {
            write!(f, "·")?;
        }
        first = false;
        write!(f, "z{}", k + 1)?;
        if x > 1 {
            write!(f, "^{x}")?;
        }
    }
    if first {
        write!(f, "1")?;
    }
    Ok(())
}

impl<S: Scalar> fmt::Display for CPolynomial<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if !c.is_one() {
                write!(f, "({}{:+}i)·", c.re.to_f64(), c.im.to_f64())?;
            }
            fmt_monomial(f, e)?;
        }
        Ok(())
    }
}

/// α = Σ_j P_j(z) dz_j.
#[derive(Clone, Debug, PartialEq)]
pub struct OneForm<S: Scalar> {
    components: Vec<CPolynomial<S>>,
}

impl<S: Scalar> OneForm<S> {
    pub fn new(components: Vec<CPolynomial<S>>) -> Result<Self> {
        let n = components.len();
        if n == 0 {
            return Err(Error::Malformed("one-form needs at least one component".into()));
        }
        if let Some(p) = components.iter().find(|p| p.nvars() != n) {
            return Err(Error::DimensionMismatch(format!(
                "component in {} variables for a form on C^{n}",
                p.nvars()
            )));
        }
        Ok(OneForm { components })
    }

    /// z^exp dz_j.
    pub fn monomial(exp: Exponent, j: usize) -> Self {
        let n = exp.len();
        let mut components = vec![CPolynomial::zero(n); n];
        components[j] = CPolynomial::monomial(exp);
        OneForm { components }
    }

    /// dP = Σ_j ∂P/∂z_j dz_j.
    pub fn exact(p: &CPolynomial<S>) -> Self {
        OneForm {
            components: (0..p.nvars()).map(|j| p.derivative(j)).collect(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[CPolynomial<S>] {
        &self.components
    }

    pub fn degree(&self) -> u32 {
        self.components.iter().map(CPolynomial::degree).max().unwrap_or(0)
    }

    pub fn add(&self, other: &Self) -> Self {
        OneForm {
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Complex<S>) -> Self {
        OneForm {
            components: self.components.iter().map(|p| p.scale(c)).collect(),
        }
    }

    pub fn map_scalar<T: Scalar>(&self, f: impl Fn(&S) -> T + Copy) -> OneForm<T> {
        OneForm {
            components: self.components.iter().map(|p| p.map_scalar(f)).collect(),
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "nvars": self.nvars(),
            "components": self.components.iter().map(CPolynomial::to_json).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let items = v
            .get("components")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Malformed("one-form: missing `components`".into()))?;
        let components = items
            .iter()
            .enumerate()
            .map(|(j, p)| {
                CPolynomial::from_json(p).map_err(|e| Error::Malformed(format!("components[{j}]: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        if let Some(n) = v.get("nvars").and_then(Value::as_u64) {
            if n as usize != components.len() {
                return Err(Error::Malformed(format!(
                    "one-form: nvars = {n} but {} components",
                    components.len()
                )));
            }
        }
        Self::new(components)
    }
}

impl<S: Scalar> fmt::Display for OneForm<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (j, p) in self.components.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if p.term_count() > 1 {
                write!(f, "({p}) dz{}", j + 1)?;
            } else {
                write!(f, "{p} dz{}", j + 1)?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// All exponents of total degree `d` in `n` variables, descending lexicographic.
pub fn exponents_of_degree(n: usize, d: u32) -> Vec<Exponent> {
    fn rec(n: usize, d: u32, prefix: &mut Exponent, out: &mut Vec<Exponent>) {
        if n == 1 {
            prefix.push(d);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for first in (0..=d).rev() {
            prefix.push(first);
            rec(n - 1, d - first, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, d, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Q;

    fn c(re: i64, im: i64) -> Complex<Q> {
        Complex::new(Q::from_i64(re), Q::from_i64(im))
    }

    #[test]
    fn arithmetic_and_derivative() {
        let z1 = CPolynomial::<Q>::variable(2, 0);
        let z2 = CPolynomial::<Q>::variable(2, 1);
        let p = z1.mul(&z1).mul(&z2).add(&z2.scale(&c(0, 3)));
        assert_eq!(p.degree(), 3);
        assert_eq!(p.derivative(0), z1.mul(&z2).scale(&c(2, 0)));
        assert_eq!(p.derivative(1), z1.mul(&z1).add(&CPolynomial::constant(2, c(0, 3))));
        assert!(p.sub(&p).is_zero());
        assert_eq!(p.eval(&[c(1, 1), c(2, 0)]), c(0, 4) + c(0, 6));
    }

    #[test]
    fn json_round_trip_and_duplicates() {
        let p = CPolynomial::from_terms(2, [(vec![1, 0], c(1, -2)), (vec![0, 3], c(0, 5))]).unwrap();
        assert_eq!(CPolynomial::<Q>::from_json(&p.to_json()).unwrap(), p);
        let dup = json!({"nvars": 1, "terms": [{"exp": [1], "coef": ["1","0"]}, {"exp": [1], "coef": ["2","0"]}]});
        assert!(CPolynomial::<Q>::from_json(&dup).is_err());
        let form = OneForm::exact(&p);
        assert_eq!(OneForm::<Q>::from_json(&form.to_json()).unwrap(), form);
    }

    #[test]
    fn zero_coefficients_are_dropped() {
        let p = CPolynomial::from_terms(1, [(vec![2], c(1, 0)), (vec![2], c(-1, 0))]).unwrap();
        assert!(p.is_zero());
    }

    #[test]
    fn exponent_order() {
        assert_eq!(exponents_of_degree(2, 1), vec![vec![1, 0], vec![0, 1]]);
        assert_eq!(
            exponents_of_degree(3, 2),
            vec![
                vec![2, 0, 0],
                vec![1, 1, 0],
                vec![1, 0, 1],
                vec![0, 2, 0],
                vec![0, 1, 1],
                vec![0, 0, 2]
            ]
        );
        assert_eq!(exponents_of_degree(2, 0), vec![vec![0, 0]]);
    }

    #[test]
    fn display() {
        let form = OneForm::<Q>::monomial(vec![0, 1], 0);
        assert_eq!(form.to_string(), "z2 dz1");
    }
}
