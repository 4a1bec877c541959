//! Weyl gaps of the real-spectrum cases shrink from n = 100 to n = 800.

use glt_core::analysis::{case_default_suite, gap_decayed, weyl_compare, Mode, DEFAULT_QUAD_RES};
use glt_core::builders::{case_from_spec, Symmetry};

const SPECS: &[&str] = &[
    "fd_t1:a=exp",
    "fd_t2:a=1+x,c=one",
    "fd_t3:a=exp,c=x",
    "fd_t4:a=1+x,c=x",
    "fd_t6:a=exp",
    "fe_t1:a=xexp",
    "fe_mass:c=1+x",
    "schur:a=exp,rho=2",
    "Ln:a=exp,c=1+x",
];

#[test]
fn gaps_do_not_grow() {
    for spec in SPECS {
        let case = case_from_spec(spec).unwrap();
        assert_ne!(case.symmetry(), Symmetry::Nonsymmetric, "{spec}");
        let suite = case_default_suite(&case, Mode::Lambda).unwrap();
        let coarse = weyl_compare(&case, 100, &suite, Mode::Lambda, DEFAULT_QUAD_RES).unwrap();
        let fine = weyl_compare(&case, 800, &suite, Mode::Lambda, DEFAULT_QUAD_RES).unwrap();
        for (c, f) in coarse.functionals.iter().zip(&fine.functionals) {
            assert!(gap_decayed(c.gap, f.gap, 1.0), "{spec} {}: {} -> {}", c.label, c.gap, f.gap);
        }
        assert_eq!(fine.outliers.count, 0, "{spec}: {:?}", fine.outliers.values);
    }
}

#[test]
fn singular_values_converge_for_nonsymmetric_scheme() {
    let case = case_from_spec("fd_t5:a=1+x,b=one,c=one").unwrap();
    let suite = case_default_suite(&case, Mode::Sigma).unwrap();
    let coarse = weyl_compare(&case, 100, &suite, Mode::Sigma, DEFAULT_QUAD_RES).unwrap();
    let fine = weyl_compare(&case, 400, &suite, Mode::Sigma, DEFAULT_QUAD_RES).unwrap();
    assert!(fine.max_gap() < coarse.max_gap(), "{} -> {}", coarse.max_gap(), fine.max_gap());
}
