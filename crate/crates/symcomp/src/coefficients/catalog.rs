//! Bundled coefficient sets.
//!
//! Naming convention `XXn`: family tag (`SC` symmetric-conjugate, `PR`/`PC`
//! palindromic with real/complex coefficients) followed by the stage count.
//! Printed decimal values are stored as strings at full source precision and
//! parsed to the nearest binary double on first access; conjugate partners
//! are reconstructed rather than transcribed twice.

use super::{construct_triple_jump, CoefficientError, CoefficientSet, Symmetry};
use num_complex::Complex64;
use std::sync::OnceLock;

fn c(re: &str, im: &str) -> Complex64 {
    Complex64::new(re.parse().unwrap(), im.parse().unwrap())
}

fn mirror_conjugate(head: &[Complex64], middle: Option<Complex64>) -> Vec<Complex64> {
    let mut coeffs = head.to_vec();
    coeffs.extend(middle);
    coeffs.extend(head.iter().rev().map(Complex64::conj));
    coeffs
}

fn build() -> Vec<CoefficientSet> {
    let mut sets = Vec::new();

    // Two stages (conj(a), a), a = 1/2 + i sqrt(3)/6: composition of order 3
    // whose real projection is of order 4.
    let a = Complex64::new(0.5, 3f64.sqrt() / 6.0);
    sets.push(CoefficientSet {
        name: "SC2".into(),
        composition_order: 3,
        projected_order: 4,
        pseudo_symmetry_order: Some(7),
        symmetry: Symmetry::SymmetricConjugate,
        coeffs: vec![a.conj(), a],
        provenance: "two-stage symmetric-conjugate pair, alpha = 1/2 + i sqrt(3)/6".into(),
    });

    // Three stages (a1, 1/2, conj(a1)), a1 = 1/4 + i/4 sqrt(5/3): order 4.
    let a1 = Complex64::new(0.25, 0.25 * (5.0f64 / 3.0).sqrt());
    sets.push(CoefficientSet {
        name: "SC3".into(),
        composition_order: 4,
        projected_order: 4,
        pseudo_symmetry_order: Some(11),
        symmetry: Symmetry::SymmetricConjugate,
        coeffs: vec![a1, Complex64::new(0.5, 0.0), a1.conj()],
        provenance: "three-stage symmetric-conjugate set, alpha1 = 1/4 + i/4 sqrt(5/3)".into(),
    });

    // Five stages, order-5 composition, order 6 after projection.
    sets.push(CoefficientSet {
        name: "SC5".into(),
        composition_order: 5,
        projected_order: 6,
        pseudo_symmetry_order: Some(11),
        symmetry: Symmetry::SymmetricConjugate,
        coeffs: mirror_conjugate(
            &[
                c("0.1752684090720741140583563", "0.05761474413053870201304364"),
                c("0.1848736801929841604288898", "-0.1941219227572495885067758"),
            ],
            Some(c("0.2797158214698834510255077", "0")),
        ),
        provenance: "five-stage symmetric-conjugate solution of the order-5 conditions".into(),
    });

    // Nine stages, order-5 composition solving also the order-7 conditions:
    // order 8 after projection.
    sets.push(CoefficientSet {
        name: "SC9".into(),
        composition_order: 5,
        projected_order: 8,
        pseudo_symmetry_order: Some(11),
        symmetry: Symmetry::SymmetricConjugate,
        coeffs: mirror_conjugate(
            &[
                c("0.08848457824129988495666830", "-0.07427185309152124718276000"),
                c("0.15956870501880174198291033", "0.02322565281009720913454462"),
                c("0.09359461460849451904251162", "0.13796356924496549819619086"),
                c("0.15769224955121857774144315", "-0.07166960107892295549940996"),
            ],
            Some(c("0.00131970516037055255293318", "0")),
        ),
        provenance: "nine-stage symmetric-conjugate scheme of projected order 8".into(),
    });

    // Eleven stages, order-7 composition: order 8 after projection with
    // pseudo-symmetry order 15.
    sets.push(CoefficientSet {
        name: "SC11".into(),
        composition_order: 7,
        projected_order: 8,
        pseudo_symmetry_order: Some(15),
        symmetry: Symmetry::SymmetricConjugate,
        coeffs: mirror_conjugate(
            &[
                c("0.07683292597738736205503", "-0.05965805084613860757735"),
                c("0.12844482070368650612973", "0.02479812697572531668668"),
                c("0.06855723904168450389158", "0.11276129325339482617990"),
                c("0.11879414810128891257046", "-0.04055765731534572031090"),
                c("0.10279469076169306832515", "0.06735917341353737963638"),
            ],
            Some(c("0.009152350828519294056116", "0")),
        ),
        provenance: "eleven-stage symmetric-conjugate scheme of projected order 8".into(),
    });

    // Real and complex triple jumps as the palindromic reference methods.
    let mut pr3 = construct_triple_jump(0).expect("k=0 in range");
    pr3.name = "PR3".into();
    sets.push(pr3);
    let mut pc3 = construct_triple_jump(1).expect("k=1 in range");
    pc3.name = "PC3".into();
    sets.push(pc3);

    sets
}

/// All bundled sets, in catalog order.
pub fn catalog() -> &'static [CoefficientSet] {
    static CATALOG: OnceLock<Vec<CoefficientSet>> = OnceLock::new();
    CATALOG.get_or_init(build)
}

/// Looks a bundled set up by name.
pub fn catalog_lookup(name: &str) -> Result<&'static CoefficientSet, CoefficientError> {
    catalog()
        .iter()
        .find(|set| set.name == name)
        .ok_or_else(|| CoefficientError::UnknownMethod {
            name: name.into(),
            available: catalog()
                .iter()
                .map(|set| set.name.as_str())
                .collect::<Vec<_>>()
                .join(", "),
        })
}
