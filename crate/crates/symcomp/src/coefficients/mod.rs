//! Coefficient sequences for compositions of a time-symmetric second-order
//! base scheme, together with the polynomial order conditions that decide
//! their accuracy.
//!
//! A composition is written as the ordered sequence `(α_1, …, α_s)` of
//! complex step fractions, `α_1` applied first. Two structural families are
//! distinguished: *palindromic* sequences (`α_{s+1-j} = α_j`) and
//! *symmetric-conjugate* sequences (`α_{s+1-j} = conj(α_j)`). The bundled
//! [`catalog`] collects the named methods used throughout the crate.

use num_complex::Complex64;
use thiserror::Error;

pub mod catalog;
pub mod file;

pub use catalog::{catalog, catalog_lookup};
pub use file::{read_coefficient_file, write_coefficient_file};

/// Tolerance for the `Σ Re α = 1`, `Σ Im α = 0` consistency check.
pub const CONSISTENCY_TOL: f64 = 1e-13;
/// Component-wise tolerance for structural symmetry classification.
pub const CLASSIFY_TOL: f64 = 1e-14;
/// Residual bound every bundled set must meet on its declared order conditions.
pub const CATALOG_RESIDUE_TOL: f64 = 5e-13;

/// Errors raised by coefficient handling.
#[derive(Debug, Error)]
pub enum CoefficientError {
    #[error("coefficient sequence is empty")]
    EmptySequence,
    #[error("coefficient sequence contains a non-finite entry")]
    NonFinite,
    #[error("triple-jump branch index must be 0, 1 or 2 (got {0})")]
    TripleJumpIndex(u32),
    #[error("unknown method `{name}`; bundled methods: {available}")]
    UnknownMethod { name: String, available: String },
    #[error("effective-error model needs an even projected order >= 4 (got {0})")]
    UnsupportedErrorModelOrder(u32),
    #[error("no tabulated condition count for order {order} in the {family:?} family")]
    OutOfTable { order: u32, family: Symmetry },
    #[error("{path}:{line}: {msg}")]
    Parse {
        path: String,
        line: usize,
        msg: String,
    },
    #[error("invalid coefficient set `{name}`: {msg}")]
    Validation { name: String, msg: String },
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// Declared structural symmetry of a coefficient sequence.
///
/// `None` doubles as the "general composition" family selector for
/// [`order_condition_counts`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Symmetry {
    None,
    Palindromic,
    SymmetricConjugate,
}

impl Symmetry {
    /// Token used by the coefficient file format.
    pub fn token(self) -> &'static str {
        match self {
            Symmetry::None => "none",
            Symmetry::Palindromic => "palindromic",
            Symmetry::SymmetricConjugate => "symmetric-conjugate",
        }
    }
}

/// Result of structural classification: a real palindromic sequence
/// satisfies both patterns at once.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymmetryPattern {
    None,
    Palindromic,
    SymmetricConjugate,
    Both,
}

impl SymmetryPattern {
    /// Whether a declared tag is consistent with this classification.
    /// A declared tag is a claim; `Symmetry::None` claims nothing.
    pub fn admits(self, declared: Symmetry) -> bool {
        match declared {
            Symmetry::None => true,
            Symmetry::Palindromic => {
                matches!(self, SymmetryPattern::Palindromic | SymmetryPattern::Both)
            }
            Symmetry::SymmetricConjugate => matches!(
                self,
                SymmetryPattern::SymmetricConjugate | SymmetryPattern::Both
            ),
        }
    }
}

/// A named, ordered sequence of complex step fractions plus declared
/// order/symmetry metadata. The sequence is stored in application order:
/// `coeffs[0]` scales the first base step of the composition.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientSet {
    pub name: String,
    /// Order of the complex composition itself.
    pub composition_order: u32,
    /// Order after per-step projection on the real axis.
    pub projected_order: u32,
    /// Declared pseudo-symmetry order of the projected scheme; `None` for
    /// exactly time-symmetric methods (real palindromic) or when undeclared.
    pub pseudo_symmetry_order: Option<u32>,
    pub symmetry: Symmetry,
    pub coeffs: Vec<Complex64>,
    pub provenance: String,
}

impl CoefficientSet {
    /// Number of base-scheme stages.
    pub fn stages(&self) -> usize {
        self.coeffs.len()
    }

    /// The conjugate family member (imaginary parts negated).
    pub fn conjugated(&self) -> CoefficientSet {
        CoefficientSet {
            name: format!("{}*", self.name),
            coeffs: self.coeffs.iter().map(Complex64::conj).collect(),
            provenance: format!("conjugate of {}", self.name),
            ..self.clone()
        }
    }

    /// One-norm `Σ |α_j|` of the coefficient vector.
    pub fn one_norm(&self) -> f64 {
        self.coeffs.iter().map(|a| a.norm()).sum()
    }

    /// Largest residual among the order conditions implied by
    /// `composition_order` (the closed-form conditions through order 5).
    pub fn max_order_condition_residual(&self) -> Result<f64, CoefficientError> {
        let w = eval_order_conditions(&self.coeffs)?;
        Ok(w.max_residual_through(self.composition_order))
    }

    /// Structural and consistency validation: finite entries, `w_1 = 1`
    /// within [`CONSISTENCY_TOL`], declared symmetry admitted by
    /// [`classify_symmetry`] at [`CLASSIFY_TOL`].
    pub fn validate(&self) -> Result<(), CoefficientError> {
        let fail = |msg: String| {
            Err(CoefficientError::Validation {
                name: self.name.clone(),
                msg,
            })
        };
        if self.coeffs.is_empty() {
            return fail("empty coefficient sequence".into());
        }
        if self
            .coeffs
            .iter()
            .any(|a| !a.re.is_finite() || !a.im.is_finite())
        {
            return fail("non-finite coefficient".into());
        }
        let sum: Complex64 = self.coeffs.iter().sum();
        if (sum.re - 1.0).abs() > CONSISTENCY_TOL {
            return fail(format!("sum of real parts is {:.17e}, expected 1", sum.re));
        }
        if sum.im.abs() > CONSISTENCY_TOL {
            return fail(format!("sum of imaginary parts is {:.17e}, expected 0", sum.im));
        }
        let pattern = classify_symmetry(&self.coeffs, CLASSIFY_TOL);
        if !pattern.admits(self.symmetry) {
            return fail(format!(
                "declared symmetry `{}` not satisfied (classified {:?})",
                self.symmetry.token(),
                pattern
            ));
        }
        Ok(())
    }
}

/// The five order-condition polynomials through `h^5`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrderConditionResidues {
    pub w1: Complex64,
    pub w31: Complex64,
    pub w41: Complex64,
    pub w51: Complex64,
    pub w52: Complex64,
}

impl OrderConditionResidues {
    /// Max magnitude of the conditions a composition of the given order
    /// must satisfy: `|w1 - 1|` always, `|w31|` from order 3, `|w41|` from
    /// order 4, `|w51|` and `|w52|` from order 5.
    pub fn max_residual_through(&self, order: u32) -> f64 {
        let mut m = (self.w1 - 1.0).norm();
        if order >= 3 {
            m = m.max(self.w31.norm());
        }
        if order >= 4 {
            m = m.max(self.w41.norm());
        }
        if order >= 5 {
            m = m.max(self.w51.norm()).max(self.w52.norm());
        }
        m
    }
}

/// Evaluates the order-condition polynomials
///
/// ```text
/// w1  = Σ α_j            w31 = Σ α_j³           w51 = Σ α_j⁵
/// w41 = ½ Σ_{j<s} ( α_j³ Σ_{k>j} α_k  -  α_j Σ_{k>j} α_k³ )
/// w52 = 1/12 Σ_j α_j³ ( P_j² + S_j² - 4 P_j S_j )  -  1/12 Σ_j α_j⁴ ( P_j + S_j )
/// ```
///
/// where `P_j`/`S_j` are the prefix/suffix sums of the sequence and an
/// empty sum is zero.
pub fn eval_order_conditions(
    coeffs: &[Complex64],
) -> Result<OrderConditionResidues, CoefficientError> {
    if coeffs.is_empty() {
        return Err(CoefficientError::EmptySequence);
    }
    if coeffs
        .iter()
        .any(|a| !a.re.is_finite() || !a.im.is_finite())
    {
        return Err(CoefficientError::NonFinite);
    }
    let s = coeffs.len();
    let zero = Complex64::new(0.0, 0.0);

    let cubes: Vec<Complex64> = coeffs.iter().map(|a| a * a * a).collect();
    let w1: Complex64 = coeffs.iter().sum();
    let w31: Complex64 = cubes.iter().sum();
    let w51: Complex64 = coeffs.iter().zip(&cubes).map(|(a, a3)| a3 * a * a).sum();

    // prefix[j] = Σ_{k<j} α_k, suffix[j] = Σ_{k>=j} α_k (suffix3 with cubes)
    let mut prefix = vec![zero; s + 1];
    for j in 0..s {
        prefix[j + 1] = prefix[j] + coeffs[j];
    }
    let mut suffix = vec![zero; s + 1];
    let mut suffix3 = vec![zero; s + 1];
    for j in (0..s).rev() {
        suffix[j] = suffix[j + 1] + coeffs[j];
        suffix3[j] = suffix3[j + 1] + cubes[j];
    }

    let mut w41 = zero;
    for j in 0..s.saturating_sub(1) {
        w41 += cubes[j] * suffix[j + 1] - coeffs[j] * suffix3[j + 1];
    }
    w41 *= 0.5;

    let mut bracket = zero;
    let mut quartic = zero;
    for j in 0..s {
        let p = prefix[j];
        let q = suffix[j + 1];
        bracket += cubes[j] * (p * p + q * q - 4.0 * p * q);
        quartic += cubes[j] * coeffs[j] * (p + q);
    }
    let w52 = (bracket - quartic) / 12.0;

    Ok(OrderConditionResidues {
        w1,
        w31,
        w41,
        w51,
        w52,
    })
}

/// Classifies the structural pattern of a sequence component-wise within
/// `tol`. A real palindromic sequence satisfies both patterns.
pub fn classify_symmetry(coeffs: &[Complex64], tol: f64) -> SymmetryPattern {
    let s = coeffs.len();
    let mut palindromic = true;
    let mut conjugate = true;
    for j in 0..s {
        let a = coeffs[j];
        let b = coeffs[s - 1 - j];
        if (b.re - a.re).abs() > tol || (b.im - a.im).abs() > tol {
            palindromic = false;
        }
        if (b.re - a.re).abs() > tol || (b.im + a.im).abs() > tol {
            conjugate = false;
        }
    }
    match (palindromic, conjugate) {
        (true, true) => SymmetryPattern::Both,
        (true, false) => SymmetryPattern::Palindromic,
        (false, true) => SymmetryPattern::SymmetricConjugate,
        (false, false) => SymmetryPattern::None,
    }
}

/// The basic scheme itself as a single-stage composition (`α_1 = 1`):
/// time-symmetric, order 2, the cost and accuracy reference point.
pub fn basic_scheme() -> CoefficientSet {
    CoefficientSet {
        name: "S1".into(),
        composition_order: 2,
        projected_order: 2,
        pseudo_symmetry_order: None,
        symmetry: Symmetry::Palindromic,
        coeffs: vec![Complex64::new(1.0, 0.0)],
        provenance: "single base step".into(),
    }
}

/// Builds the three-stage palindromic set `(α_1, 1 - 2α_1, α_1)` with
/// `α_1 = 1 / (2 - 2^{1/3} e^{2ikπ/3})`. Branch `k = 0` is the classical
/// real solution; `k = 1, 2` are the complex-conjugate pair.
pub fn construct_triple_jump(k: u32) -> Result<CoefficientSet, CoefficientError> {
    if k > 2 {
        return Err(CoefficientError::TripleJumpIndex(k));
    }
    let phase = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * f64::from(k) / 3.0);
    let a1 = Complex64::new(1.0, 0.0) / (2.0 - 2f64.cbrt() * phase);
    let a2 = 1.0 - 2.0 * a1;
    let real = k == 0;
    Ok(CoefficientSet {
        name: format!("TJ{k}"),
        composition_order: 4,
        projected_order: 4,
        pseudo_symmetry_order: if real { None } else { Some(9) },
        symmetry: Symmetry::Palindromic,
        coeffs: vec![a1, a2, a1],
        provenance: format!("triple jump (Yoshida 1990), branch k={k}"),
    })
}

/// Number of order conditions to solve for a composition of second-order
/// symmetric schemes reaching the given order, per family. For the
/// symmetric-conjugate family the count refers to the per-step projected
/// scheme, where even-power conditions are pure imaginary and drop out; at
/// order 8 nine conditions suffice although eleven appear formally.
pub fn order_condition_counts(order: u32, family: Symmetry) -> Result<u32, CoefficientError> {
    let out_of_table = || CoefficientError::OutOfTable { order, family };
    match family {
        Symmetry::None => match order {
            1..=8 => Ok([1, 0, 2, 3, 5, 7, 11, 16][order as usize - 1]),
            _ => Err(out_of_table()),
        },
        Symmetry::Palindromic => match order {
            2 => Ok(1),
            4 => Ok(2),
            6 => Ok(4),
            8 => Ok(8),
            _ => Err(out_of_table()),
        },
        Symmetry::SymmetricConjugate => match order {
            2 => Ok(1),
            4 => Ok(2),
            6 => Ok(5),
            8 => Ok(9),
            _ => Err(out_of_table()),
        },
    }
}

/// Two-term effective-error model of a projected method of even order `r`:
/// scaled coefficients `e_{r+1}`, `e_{r+3}` and the elbow step size where
/// both terms balance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorModel {
    pub projected_order: u32,
    /// `e_{r+1}`
    pub e_lo: f64,
    /// `e_{r+3}`
    pub e_hi: f64,
    /// `h* = sqrt(e_{r+1} / e_{r+3})`
    pub elbow: f64,
    /// Confirms the stage-count scaling `s^{j-1}` was applied.
    pub scaled: bool,
}

impl ErrorModel {
    /// The effective error `E(h) = h^r e_{r+1} + h^{r+2} e_{r+3}`.
    pub fn evaluate(&self, h: f64) -> f64 {
        let r = self.projected_order as i32;
        h.powi(r) * self.e_lo + h.powi(r + 2) * self.e_hi
    }
}

/// Scaled error coefficients `e_j = s^{j-1} |Σ_k α_k^j|` at `j = r+1` and
/// `j = r+3`, with `r` the projected order; normalized so the basic scheme
/// scores 1. Requires an even projected order `r >= 4`.
pub fn effective_error_terms(set: &CoefficientSet) -> Result<ErrorModel, CoefficientError> {
    let r = set.projected_order;
    if r < 4 || r % 2 != 0 {
        return Err(CoefficientError::UnsupportedErrorModelOrder(r));
    }
    let s = set.stages() as f64;
    let e_at = |j: u32| -> f64 {
        let sum: Complex64 = set.coeffs.iter().map(|a| a.powi(j as i32)).sum();
        s.powi(j as i32 - 1) * sum.norm()
    };
    let e_lo = e_at(r + 1);
    let e_hi = e_at(r + 3);
    let elbow = if e_hi > 0.0 {
        (e_lo / e_hi).sqrt()
    } else {
        f64::INFINITY
    };
    Ok(ErrorModel {
        projected_order: r,
        e_lo,
        e_hi,
        elbow,
        scaled: true,
    })
}

/// Free-function form of [`ErrorModel::evaluate`].
pub fn effective_error_curve(model: &ErrorModel, h: f64) -> f64 {
    model.evaluate(h)
}
