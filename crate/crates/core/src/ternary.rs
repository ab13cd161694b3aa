//! Sparse ternary forms over Q, enough for cubics, their Hessians and
//! the invariants derived from them.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::projq::{rat_int, Rational};

/// Exponent triple `(i, j, k)` for `x^i y^j z^k`.
pub type Mono = [u32; 3];

/// Cubic monomials in the fixed order used for coefficient vectors.
pub const CUBIC_MONOS: [Mono; 10] = [
    [3, 0, 0],
    [2, 1, 0],
    [2, 0, 1],
    [1, 2, 0],
    [1, 1, 1],
    [1, 0, 2],
    [0, 3, 0],
    [0, 2, 1],
    [0, 1, 2],
    [0, 0, 3],
];

/// Quadratic monomials `x^2, y^2, z^2, xy, yz, zx`.
pub const QUAD_MONOS: [Mono; 6] = [[2, 0, 0], [0, 2, 0], [0, 0, 2], [1, 1, 0], [0, 1, 1], [1, 0, 1]];

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct TPoly {
    terms: BTreeMap<Mono, Rational>,
}

impl TPoly {
    pub fn zero() -> TPoly {
        TPoly::default()
    }
    pub fn var(i: usize) -> TPoly {
        let mut e = [0; 3];
        e[i] = 1;
        TPoly::mono(e, Rational::one())
    }
    pub fn mono(e: Mono, c: Rational) -> TPoly {
        let mut t = TPoly::zero();
        t.add_term(e, c);
        t
    }
    pub fn constant(c: Rational) -> TPoly {
        TPoly::mono([0, 0, 0], c)
    }
    /// Cubic from a coefficient vector in [`CUBIC_MONOS`] order.
    pub fn from_cubic(c: &[Rational; 10]) -> TPoly {
        let mut t = TPoly::zero();
        for (e, a) in CUBIC_MONOS.iter().zip(c) {
            t.add_term(*e, a.clone());
        }
        t
    }
    fn add_term(&mut self, e: Mono, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn coeff(&self, e: &Mono) -> Rational {
        self.terms.get(e).cloned().unwrap_or_else(Rational::zero)
    }
    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &Rational)> {
        self.terms.iter()
    }
    pub fn cubic_coeffs(&self) -> [Rational; 10] {
        CUBIC_MONOS.map(|e| self.coeff(&e))
    }
    pub fn quad_coeffs(&self) -> [Rational; 6] {
        QUAD_MONOS.map(|e| self.coeff(&e))
    }
    pub fn add(&self, o: &TPoly) -> TPoly {
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(*e, c.clone());
        }
        r
    }
    pub fn sub(&self, o: &TPoly) -> TPoly {
        self.add(&o.scale(&-Rational::one()))
    }
    pub fn scale(&self, a: &Rational) -> TPoly {
        let mut r = TPoly::zero();
        for (e, c) in &self.terms {
            r.add_term(*e, c * a);
        }
        r
    }
    pub fn mul(&self, o: &TPoly) -> TPoly {
        let mut r = TPoly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                r.add_term([e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2]], c1 * c2);
            }
        }
        r
    }
    pub fn deriv(&self, i: usize) -> TPoly {
        let mut r = TPoly::zero();
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut f = *e;
                f[i] -= 1;
                r.add_term(f, c * rat_int(e[i]));
            }
        }
        r
    }
    pub fn eval(&self, p: &[Rational; 3]) -> Rational {
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for i in 0..3 {
                for _ in 0..e[i] {
                    term *= &p[i];
                }
            }
            acc += term;
        }
        acc
    }
    /// Determinant of the matrix of second partials.
    pub fn hessian(&self) -> TPoly {
        let d: Vec<TPoly> = (0..3).map(|i| self.deriv(i)).collect();
        let h: Vec<Vec<TPoly>> = (0..3).map(|i| (0..3).map(|j| d[i].deriv(j)).collect()).collect();
        let minor = |a: usize, b: usize, c: usize, e: usize| h[1][a].mul(&h[2][b]).sub(&h[1][c].mul(&h[2][e]));
        h[0][0]
            .mul(&minor(1, 2, 2, 1))
            .sub(&h[0][1].mul(&minor(0, 2, 2, 0)))
            .add(&h[0][2].mul(&minor(0, 1, 1, 0)))
    }
}

/// Determinant of a square rational matrix by fraction-exact elimination.
pub fn det(mut m: Vec<Vec<Rational>>) -> Rational {
    let n = m.len();
    let mut acc = Rational::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Rational::zero();
        };
        if piv != col {
            m.swap(piv, col);
            acc = -acc;
        }
        let pv = m[col][col].clone();
        acc *= &pv;
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let f = &m[r][col] / &pv;
            for c in col..n {
                let delta = &f * &m[col][c];
                m[r][c] -= delta;
            }
        }
    }
    acc
}
