//! Dense univariate polynomials over Q: Euclidean arithmetic, interpolation,
//! square-free decomposition and exact rational-root extraction.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith;
use crate::projq::{rat_int, Num, ProjqError, Rational};

/// Coefficients stored low degree first, without trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QPoly {
    c: Vec<Rational>,
}

impl QPoly {
    pub fn new(mut c: Vec<Rational>) -> QPoly {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        QPoly { c }
    }
    pub fn from_ints(c: &[i64]) -> QPoly {
        QPoly::new(c.iter().map(|&x| rat_int(x)).collect())
    }
    pub fn zero() -> QPoly {
        QPoly { c: Vec::new() }
    }
    pub fn constant(a: Rational) -> QPoly {
        QPoly::new(vec![a])
    }
    pub fn one() -> QPoly {
        QPoly::constant(Rational::one())
    }
    /// The monomial `x`.
    pub fn x() -> QPoly {
        QPoly::from_ints(&[0, 1])
    }
    /// `x - a`.
    pub fn linear_root(a: &Rational) -> QPoly {
        QPoly::new(vec![-a.clone(), Rational::one()])
    }
    pub fn coeffs(&self) -> &[Rational] {
        &self.c
    }
    pub fn coeff(&self, i: usize) -> Rational {
        self.c.get(i).cloned().unwrap_or_else(Rational::zero)
    }
    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }
    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }
    pub fn lc(&self) -> Rational {
        self.c.last().cloned().unwrap_or_else(Rational::zero)
    }
    pub fn add(&self, o: &QPoly) -> QPoly {
        let n = self.c.len().max(o.c.len());
        QPoly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }
    pub fn sub(&self, o: &QPoly) -> QPoly {
        let n = self.c.len().max(o.c.len());
        QPoly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }
    pub fn scale(&self, a: &Rational) -> QPoly {
        QPoly::new(self.c.iter().map(|x| x * a).collect())
    }
    pub fn mul(&self, o: &QPoly) -> QPoly {
        if self.is_zero() || o.is_zero() {
            return QPoly::zero();
        }
        let mut r = vec![Rational::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                r[i + j] += a * b;
            }
        }
        QPoly::new(r)
    }
    pub fn pow(&self, e: u32) -> QPoly {
        (0..e).fold(QPoly::one(), |acc, _| acc.mul(self))
    }
    /// Quotient and remainder; panics on division by zero.
    pub fn div_rem(&self, d: &QPoly) -> (QPoly, QPoly) {
        let dd = d.degree().expect("polynomial division by zero");
        let mut r = self.c.clone();
        let lc = d.lc();
        if r.len() <= dd {
            return (QPoly::zero(), self.clone());
        }
        let mut q = vec![Rational::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let f = &r[k + dd] / &lc;
            if !f.is_zero() {
                for (j, b) in d.c.iter().enumerate() {
                    r[k + j] -= &f * b;
                }
            }
            q[k] = f;
        }
        r.truncate(dd);
        (QPoly::new(q), QPoly::new(r))
    }
    pub fn monic(&self) -> QPoly {
        if self.is_zero() {
            return QPoly::zero();
        }
        self.scale(&self.lc().recip())
    }
    /// Monic greatest common divisor.
    pub fn gcd(&self, o: &QPoly) -> QPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }
    pub fn derivative(&self) -> QPoly {
        QPoly::new(self.c.iter().enumerate().skip(1).map(|(i, a)| a * rat_int(i as i64)).collect())
    }
    pub fn eval(&self, x: &Rational) -> Rational {
        self.c.iter().rev().fold(Rational::zero(), |acc, a| acc * x + a)
    }
    pub fn eval_num(&self, x: &Num) -> Result<Num, ProjqError> {
        let mut acc = Num::zero();
        for a in self.c.iter().rev() {
            acc = acc.try_mul(x)?.try_add(&Num::Rat(a.clone()))?;
        }
        Ok(acc)
    }
    /// Value of the degree-`n` homogenization at `(u : v)`.
    pub fn eval_hom(&self, n: usize, u: &Num, v: &Num) -> Result<Num, ProjqError> {
        let mut acc = Num::zero();
        for i in 0..=n {
            let a = self.coeff(i);
            if a.is_zero() {
                continue;
            }
            let term = u.pow(i as u32).try_mul(&v.pow((n - i) as u32))?.try_mul(&Num::Rat(a))?;
            acc = acc.try_add(&term)?;
        }
        Ok(acc)
    }
    /// Lagrange interpolation through `(x_i, y_i)` with distinct `x_i`.
    pub fn interpolate(pts: &[(Rational, Rational)]) -> QPoly {
        let mut out = QPoly::zero();
        for (i, (xi, yi)) in pts.iter().enumerate() {
            let mut basis = QPoly::one();
            let mut den = Rational::one();
            for (j, (xj, _)) in pts.iter().enumerate() {
                if i != j {
                    basis = basis.mul(&QPoly::linear_root(xj));
                    den *= xi - xj;
                }
            }
            out = out.add(&basis.scale(&(yi / den)));
        }
        out
    }
    /// Integer coefficients of a primitive multiple with positive leading coefficient.
    pub fn primitive_integer(&self) -> Vec<BigInt> {
        if self.is_zero() {
            return Vec::new();
        }
        let l = self.c.iter().fold(BigInt::one(), |l, q| l.lcm(q.denom()));
        let ints: Vec<BigInt> = self.c.iter().map(|q| (q * rat_int(l.clone())).to_integer()).collect();
        let g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
        let g = if ints.last().unwrap().is_negative() { -g } else { g };
        ints.into_iter().map(|x| x / &g).collect()
    }
    /// Yun's square-free decomposition: pairs `(f_i, i)` with `self = c * Π f_i^i`.
    pub fn squarefree_decomposition(&self) -> Vec<(QPoly, usize)> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let f = self.monic();
        let d = f.derivative();
        let a0 = f.gcd(&d);
        let mut b = f.div_rem(&a0).0;
        let mut c = d.div_rem(&a0).0;
        let mut dd = c.sub(&b.derivative());
        let mut i = 1;
        while b.degree().unwrap_or(0) > 0 {
            let a = b.gcd(&dd);
            if a.degree().unwrap_or(0) > 0 {
                out.push((a.clone(), i));
            }
            b = b.div_rem(&a).0;
            c = dd.div_rem(&a).0;
            dd = c.sub(&b.derivative());
            i += 1;
        }
        out
    }
    /// Distinct rational roots, ascending, by divisor enumeration on the
    /// primitive integer form of the square-free part.
    pub fn rational_roots(&self) -> Vec<Rational> {
        let mut roots = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return roots;
        }
        let mut f = self.div_rem(&self.gcd(&self.derivative())).0;
        if f.coeff(0).is_zero() {
            roots.push(Rational::zero());
            f = f.div_rem(&QPoly::x()).0;
        }
        if f.degree().unwrap_or(0) > 0 {
            let ints = f.primitive_integer();
            let lead = arith::divisors(ints.last().unwrap());
            let trail = arith::divisors(&ints[0]);
            let mut cands: Vec<Rational> = Vec::new();
            for p in &trail {
                for q in &lead {
                    let r = Rational::new(p.clone(), q.clone());
                    cands.push(r.clone());
                    cands.push(-r);
                }
            }
            cands.sort();
            cands.dedup();
            for r in cands {
                if f.eval(&r).is_zero() {
                    roots.push(r);
                }
            }
        }
        roots.sort();
        roots
    }
    /// Both roots of a quadratic, in Q or Q(sqrt d).
    pub fn quadratic_roots(&self) -> Result<[Num; 2], ProjqError> {
        assert_eq!(self.degree(), Some(2), "quadratic_roots needs degree 2");
        let (a, b, c) = (self.coeff(2), self.coeff(1), self.coeff(0));
        let disc = &b * &b - rat_int(4) * &a * &c;
        let s = Num::sqrt_rational(&disc)?;
        let two_a = Num::Rat(&a * rat_int(2));
        let mb = Num::Rat(-b);
        Ok([(&mb + &s).try_div(&two_a)?, (&mb - &s).try_div(&two_a)?])
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, a) in self.c.iter().enumerate().rev() {
            if a.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{a}")?,
                1 => write!(f, "({a})*t")?,
                _ => write!(f, "({a})*t^{i}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projq::rat;

    #[test]
    fn division_and_gcd() {
        let a = QPoly::from_ints(&[-1, 0, 1]);
        let b = QPoly::from_ints(&[1, 1]);
        let (q, r) = a.div_rem(&b);
        assert_eq!(q, QPoly::from_ints(&[-1, 1]));
        assert!(r.is_zero());
        assert_eq!(a.gcd(&QPoly::from_ints(&[-1, 1]).mul(&QPoly::from_ints(&[2, 1]))), QPoly::from_ints(&[-1, 1]));
    }

    #[test]
    fn roots() {
        // 6 (t - 1/2)(t + 3)^2 (t^2 + 1)
        let f = QPoly::from_ints(&[-1, 2])
            .mul(&QPoly::from_ints(&[3, 1]).pow(2))
            .mul(&QPoly::from_ints(&[1, 0, 1]))
            .scale(&rat(3, 1));
        assert_eq!(f.rational_roots(), vec![rat(-3, 1), rat(1, 2)]);
        let sq = f.squarefree_decomposition();
        assert_eq!(sq.len(), 2);
        assert_eq!(sq[1], (QPoly::from_ints(&[3, 1]), 2));
        let g = QPoly::from_ints(&[0, 0, 5, 1]);
        assert_eq!(g.rational_roots(), vec![rat(-5, 1), rat(0, 1)]);
    }

    #[test]
    fn interpolation_recovers_polynomial() {
        let f = QPoly::from_ints(&[3, 0, -2, 7]);
        let pts: Vec<_> = (0..4).map(|i| (rat(i, 1), f.eval(&rat(i, 1)))).collect();
        assert_eq!(QPoly::interpolate(&pts), f);
    }

    #[test]
    fn quadratic() {
        let f = QPoly::from_ints(&[-1, 11, 1]);
        let [r1, r2] = f.quadratic_roots().unwrap();
        assert_eq!(r1.to_string(), "(-11/2+5/2*sqrt(5))");
        assert_eq!(f.eval_num(&r2).unwrap(), Num::zero());
    }
}
