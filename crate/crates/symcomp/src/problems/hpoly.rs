//! Truncated polynomials in the step size `h` with complex coefficients,
//! and 2×2 matrices of them: the exact algebraic probe for composition
//! methods on the harmonic oscillator.
//!
//! Every polynomial carries a fixed truncation degree `D`; products keep
//! coefficients below `D` exact and drop the rest. One leapfrog stage with
//! fraction `α` is the exact degree-3 matrix
//! `M_T(αh/2) M_V(αh) M_T(αh/2)`, so a full `s`-stage composition is an
//! exact polynomial of degree `3s` whenever `D >= 3s`.

use crate::coefficients::CoefficientSet;
use num_complex::Complex64;

/// Polynomial in `h`, truncated at a fixed degree: `coeffs[d]` multiplies
/// `h^d` and `coeffs.len() == D + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncPoly {
    pub coeffs: Vec<Complex64>,
}

impl TruncPoly {
    pub fn zero(degree: usize) -> TruncPoly {
        TruncPoly {
            coeffs: vec![Complex64::new(0.0, 0.0); degree + 1],
        }
    }

    pub fn constant(value: Complex64, degree: usize) -> TruncPoly {
        let mut p = TruncPoly::zero(degree);
        p.coeffs[0] = value;
        p
    }

    /// Truncation degree `D`.
    pub fn degree_cap(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, d: usize) -> Complex64 {
        self.coeffs[d]
    }

    pub fn add(&self, other: &TruncPoly) -> TruncPoly {
        debug_assert_eq!(self.coeffs.len(), other.coeffs.len());
        TruncPoly {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &TruncPoly) -> TruncPoly {
        debug_assert_eq!(self.coeffs.len(), other.coeffs.len());
        TruncPoly {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    /// Truncated product: coefficients above the cap are dropped.
    pub fn mul(&self, other: &TruncPoly) -> TruncPoly {
        debug_assert_eq!(self.coeffs.len(), other.coeffs.len());
        let cap = self.degree_cap();
        let mut out = TruncPoly::zero(cap);
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == Complex64::new(0.0, 0.0) {
                continue;
            }
            for (j, &b) in other.coeffs.iter().take(cap + 1 - i).enumerate() {
                out.coeffs[i + j] += a * b;
            }
        }
        out
    }

    /// Substitution `h -> -h`: negates odd-degree coefficients.
    pub fn alternated(&self) -> TruncPoly {
        TruncPoly {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(d, c)| if d % 2 == 1 { -c } else { *c })
                .collect(),
        }
    }

    /// Real parts of all coefficients.
    pub fn re(&self) -> TruncPoly {
        TruncPoly {
            coeffs: self
                .coeffs
                .iter()
                .map(|c| Complex64::new(c.re, 0.0))
                .collect(),
        }
    }

    /// Horner evaluation at a real step size.
    pub fn eval(&self, h: f64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            acc = acc * h + c;
        }
        acc
    }
}

/// 2×2 matrix with truncated-polynomial entries, row-major `[[a, b], [c, d]]`.
#[derive(Debug, Clone, PartialEq)]
pub struct HPolynomialMatrix {
    pub a: TruncPoly,
    pub b: TruncPoly,
    pub c: TruncPoly,
    pub d: TruncPoly,
}

impl HPolynomialMatrix {
    pub fn identity(degree: usize) -> HPolynomialMatrix {
        HPolynomialMatrix {
            a: TruncPoly::constant(Complex64::new(1.0, 0.0), degree),
            b: TruncPoly::zero(degree),
            c: TruncPoly::zero(degree),
            d: TruncPoly::constant(Complex64::new(1.0, 0.0), degree),
        }
    }

    pub fn degree_cap(&self) -> usize {
        self.a.degree_cap()
    }

    pub fn mul(&self, rhs: &HPolynomialMatrix) -> HPolynomialMatrix {
        HPolynomialMatrix {
            a: self.a.mul(&rhs.a).add(&self.b.mul(&rhs.c)),
            b: self.a.mul(&rhs.b).add(&self.b.mul(&rhs.d)),
            c: self.c.mul(&rhs.a).add(&self.d.mul(&rhs.c)),
            d: self.c.mul(&rhs.b).add(&self.d.mul(&rhs.d)),
        }
    }

    pub fn sub(&self, rhs: &HPolynomialMatrix) -> HPolynomialMatrix {
        HPolynomialMatrix {
            a: self.a.sub(&rhs.a),
            b: self.b.sub(&rhs.b),
            c: self.c.sub(&rhs.c),
            d: self.d.sub(&rhs.d),
        }
    }

    pub fn alternated(&self) -> HPolynomialMatrix {
        HPolynomialMatrix {
            a: self.a.alternated(),
            b: self.b.alternated(),
            c: self.c.alternated(),
            d: self.d.alternated(),
        }
    }

    /// Projects every coefficient on the real axis.
    pub fn re(&self) -> HPolynomialMatrix {
        HPolynomialMatrix {
            a: self.a.re(),
            b: self.b.re(),
            c: self.c.re(),
            d: self.d.re(),
        }
    }

    /// Determinant as a truncated polynomial.
    pub fn det(&self) -> TruncPoly {
        self.a.mul(&self.d).sub(&self.b.mul(&self.c))
    }

    /// Numeric 2×2 matrix at a real step size.
    pub fn eval(&self, h: f64) -> [[Complex64; 2]; 2] {
        [
            [self.a.eval(h), self.b.eval(h)],
            [self.c.eval(h), self.d.eval(h)],
        ]
    }

    /// Largest coefficient magnitude at one degree, over all entries.
    pub fn coeff_max_norm(&self, d: usize) -> f64 {
        [&self.a, &self.b, &self.c, &self.d]
            .iter()
            .map(|p| p.coeff(d).norm())
            .fold(0.0, f64::max)
    }
}

/// One leapfrog stage with fraction `alpha` as an exact degree-3 matrix
/// polynomial, built from the three elementary factors.
pub fn stage_matrix_poly(alpha: Complex64, degree: usize) -> HPolynomialMatrix {
    assert!(degree >= 3, "stage polynomials need degree cap >= 3");
    let zero = TruncPoly::zero(degree);
    let one = TruncPoly::constant(Complex64::new(1.0, 0.0), degree);
    let lin = |c: Complex64| {
        let mut p = TruncPoly::zero(degree);
        p.coeffs[1] = c;
        p
    };
    let m_t_half = HPolynomialMatrix {
        a: one.clone(),
        b: lin(alpha * 0.5),
        c: zero.clone(),
        d: one.clone(),
    };
    let m_v = HPolynomialMatrix {
        a: one.clone(),
        b: zero,
        c: lin(-alpha),
        d: one,
    };
    m_t_half.mul(&m_v).mul(&m_t_half)
}

/// Full composition as a truncated matrix polynomial: the stage product in
/// application order (first stage rightmost).
pub fn method_matrix_poly(coeffs: &[Complex64], degree: usize) -> HPolynomialMatrix {
    let mut m = HPolynomialMatrix::identity(degree);
    for &alpha in coeffs {
        m = stage_matrix_poly(alpha, degree).mul(&m);
    }
    m
}

/// Harmonic-oscillator step matrix of one composition step as a truncated
/// polynomial in `h`, returned as `(complex, real-projected)`.
pub fn ho_step_polynomial(
    set: &CoefficientSet,
    degree: usize,
) -> (HPolynomialMatrix, HPolynomialMatrix) {
    assert!(degree <= 40, "degree cap limited to 40");
    let m = method_matrix_poly(&set.coeffs, degree);
    let projected = m.re();
    (m, projected)
}

/// Taylor expansion of the exact rotation `[[cos h, sin h], [-sin h, cos h]]`.
pub fn rotation_taylor(degree: usize) -> HPolynomialMatrix {
    let mut m = HPolynomialMatrix::identity(degree);
    let mut inv_fact = 1.0f64;
    for d in 1..=degree {
        inv_fact /= d as f64;
        // cos series on the diagonal, sin off it
        let sign = if (d / 2) % 2 == 0 { 1.0 } else { -1.0 };
        let c = Complex64::new(sign * inv_fact, 0.0);
        if d % 2 == 0 {
            m.a.coeffs[d] = c;
            m.d.coeffs[d] = c;
        } else {
            m.b.coeffs[d] = c;
            m.c.coeffs[d] = -c;
        }
    }
    m
}
