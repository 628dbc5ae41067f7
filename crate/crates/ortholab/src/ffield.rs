//! Exact arithmetic in prime fields `F_p` and quadratic extensions `F_{p^2}`,
//! plus multiplicative-group structure: generators, cyclic subgroups,
//! square roots of -1.
//!
//! Elements of `F_{p^2}` are coefficient pairs `a + b*t` with `t^2 = r` for a
//! fixed non-residue `r`. The modulus is chosen deterministically so element
//! encodings are reproducible everywhere: `r = -1` when `p = 3 (mod 4)`,
//! otherwise the smallest quadratic non-residue mod p. The canonical integer
//! encoding is `enc = a + b*p`, a bijection onto `[0, q)`.

use crate::{Error, Result};

/// A finite field `F_q` with `q = p^e`, `e` in {1, 2}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Field {
    p: u64,
    degree: u32,
    /// The residue r with t^2 = r when degree = 2; unused (0) for degree 1.
    ext_residue: u64,
    q: u64,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Smallest quadratic non-residue mod an odd prime p.
fn smallest_nonresidue(p: u64) -> u64 {
    let squares: std::collections::HashSet<u64> = (0..p).map(|x| x * x % p).collect();
    (2..p).find(|x| !squares.contains(x)).expect("odd prime has a non-residue")
}

impl Field {
    /// Build `F_p` (degree 1) or `F_{p^2}` (degree 2).
    pub fn new(p: u64, degree: u32) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        match degree {
            1 => Ok(Field { p, degree: 1, ext_residue: 0, q: p }),
            2 => {
                if p == 2 {
                    return Err(Error::CharTwoExtension);
                }
                let r = if p % 4 == 3 { p - 1 } else { smallest_nonresidue(p) };
                Ok(Field { p, degree: 2, ext_residue: r, q: p * p })
            }
            e => Err(Error::BadDegree(e)),
        }
    }

    /// Reconstruct a field from its order: q prime, or the square of a prime.
    pub fn from_order(q: u64) -> Result<Field> {
        if is_prime(q) {
            return Field::new(q, 1);
        }
        let s = (q as f64).sqrt().round() as u64;
        for p in s.saturating_sub(1)..=s + 1 {
            if p * p == q && is_prime(p) {
                return Field::new(p, 2);
            }
        }
        Err(Error::BadFieldOrder(q))
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Field order q = p^degree.
    pub fn order(&self) -> u64 {
        self.q
    }

    /// For degree 2, the residue r with t^2 = r.
    pub fn ext_residue(&self) -> Option<u64> {
        (self.degree == 2).then_some(self.ext_residue)
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement { field: *self, a: 0, b: 0 }
    }

    pub fn one(&self) -> FieldElement {
        FieldElement { field: *self, a: 1, b: 0 }
    }

    /// Element from coefficients, reduced mod p. For degree 1 the `b`
    /// coefficient must reduce to zero.
    pub fn element(&self, a: u64, b: u64) -> Result<FieldElement> {
        let (a, b) = (a % self.p, b % self.p);
        if self.degree == 1 && b != 0 {
            return Err(Error::BadEncoding { enc: a + b * self.p, q: self.q });
        }
        Ok(FieldElement { field: *self, a, b })
    }

    /// Decode the canonical integer encoding `enc = a + b*p`.
    pub fn from_enc(&self, enc: u64) -> Result<FieldElement> {
        if enc >= self.q {
            return Err(Error::BadEncoding { enc, q: self.q });
        }
        Ok(FieldElement { field: *self, a: enc % self.p, b: enc / self.p })
    }

    /// All q elements in encoding order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.q).map(|enc| self.from_enc(enc).expect("enc < q"))
    }

    /// The generator of `F_q^*` with the smallest encoding.
    pub fn find_generator(&self) -> FieldElement {
        let factors = prime_factors(self.q - 1);
        self.elements()
            .skip(1)
            .find(|x| {
                factors.iter().all(|&ell| !x.pow((self.q - 1) / ell).is_one())
            })
            .expect("multiplicative group of a finite field is cyclic")
    }

    /// The unique cyclic subgroup of `F_q^*` of order m, for m dividing q-1.
    /// Generated by g^((q-1)/m) where g is the canonical generator.
    pub fn cyclic_subgroup(&self, m: u64) -> Result<MultiplicativeSubgroup> {
        let group_order = self.q - 1;
        if m == 0 || group_order % m != 0 {
            return Err(Error::OrderDoesNotDivide { m, group_order });
        }
        let g = self.find_generator();
        let h = g.pow(group_order / m);
        let mut elements = Vec::with_capacity(m as usize);
        let mut x = self.one();
        for _ in 0..m {
            elements.push(x);
            x = x.mul(h)?;
        }
        debug_assert!(x.is_one());
        elements.sort_by_key(FieldElement::enc);
        Ok(MultiplicativeSubgroup { field: *self, generator: h, order: m, elements })
    }

    /// An element i with i^2 = -1, present exactly when q = 1 (mod 4);
    /// of the two candidates the one with smaller encoding is returned.
    pub fn sqrt_minus_one(&self) -> Option<FieldElement> {
        if self.q % 4 != 1 {
            return None;
        }
        let minus_one = self.one().neg();
        self.elements().find(|x| x.mul(*x).expect("same field") == minus_one)
    }
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// An element `a + b*t` of a [`Field`], in canonical reduced form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElement {
    field: Field,
    a: u64,
    b: u64,
}

impl FieldElement {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> (u64, u64) {
        (self.a, self.b)
    }

    /// Canonical integer encoding `a + b*p`, a bijection onto `[0, q)`.
    pub fn enc(&self) -> u64 {
        self.a + self.b * self.field.p
    }

    pub fn is_zero(&self) -> bool {
        self.a == 0 && self.b == 0
    }

    pub fn is_one(&self) -> bool {
        self.a == 1 && self.b == 0
    }

    fn check_same_field(&self, rhs: &FieldElement) -> Result<()> {
        if self.field != rhs.field {
            return Err(Error::MixedFields);
        }
        Ok(())
    }

    pub fn add(self, rhs: FieldElement) -> Result<FieldElement> {
        self.check_same_field(&rhs)?;
        let p = self.field.p;
        Ok(FieldElement { field: self.field, a: (self.a + rhs.a) % p, b: (self.b + rhs.b) % p })
    }

    pub fn sub(self, rhs: FieldElement) -> Result<FieldElement> {
        self.add(rhs.neg())
    }

    pub fn neg(self) -> FieldElement {
        let p = self.field.p;
        FieldElement { field: self.field, a: (p - self.a) % p, b: (p - self.b) % p }
    }

    /// Product; for degree 2 reduces via t^2 = r.
    pub fn mul(self, rhs: FieldElement) -> Result<FieldElement> {
        self.check_same_field(&rhs)?;
        let p = self.field.p;
        let (a, b, c, d) = (self.a, self.b, rhs.a, rhs.b);
        let r = self.field.ext_residue;
        // (a + bt)(c + dt) = ac + r*bd + (ad + bc) t
        let re = (a * c % p + b * d % p * r % p) % p;
        let im = (a * d % p + b * c % p) % p;
        Ok(FieldElement { field: self.field, a: re, b: im })
    }

    pub fn pow(self, mut n: u64) -> FieldElement {
        let mut base = self;
        let mut acc = self.field.one();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(base).expect("same field");
            }
            base = base.mul(base).expect("same field");
            n >>= 1;
        }
        acc
    }

    pub fn inv(self) -> Result<FieldElement> {
        if self.is_zero() {
            return Err(Error::ZeroInverse);
        }
        // x^(q-2) = x^(-1) in F_q^*.
        Ok(self.pow(self.field.q - 2))
    }

    /// Multiplicative order; errors on zero.
    pub fn multiplicative_order(&self) -> Result<u64> {
        if self.is_zero() {
            return Err(Error::ZeroInverse);
        }
        let group_order = self.field.q - 1;
        let mut order = group_order;
        for ell in prime_factors(group_order) {
            while order % ell == 0 && self.pow(order / ell).is_one() {
                order /= ell;
            }
        }
        Ok(order)
    }
}

impl std::fmt::Display for FieldElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.field.degree == 1 || self.b == 0 {
            write!(f, "{}", self.a)
        } else if self.a == 0 {
            write!(f, "{}t", self.b)
        } else {
            write!(f, "{}+{}t", self.a, self.b)
        }
    }
}

/// A cyclic subgroup of `F_q^*`: generator, order, and the full element list
/// sorted by encoding.
#[derive(Debug, Clone)]
pub struct MultiplicativeSubgroup {
    field: Field,
    generator: FieldElement,
    order: u64,
    elements: Vec<FieldElement>,
}

impl MultiplicativeSubgroup {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn generator(&self) -> FieldElement {
        self.generator
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// Elements sorted by encoding.
    pub fn elements(&self) -> &[FieldElement] {
        &self.elements
    }

    pub fn contains(&self, x: &FieldElement) -> bool {
        self.elements.binary_search_by_key(&x.enc(), FieldElement::enc).is_ok()
    }

    /// True iff 4 divides the subgroup order, i.e. the subgroup has an
    /// element of multiplicative order 4.
    pub fn has_element_of_order_4(&self) -> bool {
        self.order % 4 == 0
    }
}
