//! Invariants over randomized inputs.

mod common;

use common::*;
use proptest::prelude::*;
use spectral_chart::exact::{eta_gcd_degree, hermitian_signature, BiPoly, GaussianRational, MatGR, PolyGR};
use spectral_chart::exact::discriminant_eta;
use spectral_chart::linebundle::petri_matrix;
use spectral_chart::polymat::{MatrixPoly, Point};
use spectral_chart::spectral::{curve_from_datum, strongly_regular};
use spectral_chart::triplecover::{algebra_from_binary_cubic, CurveAlgebra};
use spectral_chart::ChartError;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gaussian_display_parses_back(a in -50i64..50, b in 1i64..20, c in -50i64..50, d in 1i64..20) {
        let x = GaussianRational::from_ratios(a, b, c, d);
        prop_assert_eq!(x.to_string().parse::<GaussianRational>().unwrap(), x.clone());
        let json = serde_json::to_string(&x).unwrap();
        prop_assert_eq!(serde_json::from_str::<GaussianRational>(&json).unwrap(), x);
    }

    #[test]
    fn squarefree_part_is_squarefree_divisor(seed in any::<u64>()) {
        let mut r = rng(seed);
        let f = poly(&mut r, 2);
        let g = poly(&mut r, 1);
        prop_assume!(!f.is_zero() && !g.is_zero());
        let h = &(&f * &f) * &g;
        let s = h.squarefree_part().unwrap();
        prop_assert!(s.is_squarefree());
        prop_assert!(h.rem(&s).unwrap().is_zero());
        prop_assert!(s.rem(&f.squarefree_part().unwrap()).unwrap().is_zero());
    }

    #[test]
    fn discriminant_vanishes_iff_repeated_factor(seed in any::<u64>(), k in 2usize..=3) {
        let mut r = rng(seed);
        let p = curve_from_datum(&quadratic(&mut r, k)).unwrap().to_bipoly();
        let disc = discriminant_eta(&p).unwrap();
        let g = eta_gcd_degree(&p, &p.derivative_eta()).unwrap();
        prop_assert_eq!(disc.is_zero(), g > 0);
    }

    #[test]
    fn petri_and_strong_regularity_are_conjugation_invariant(seed in any::<u64>(), k in 2usize..=3) {
        let mut r = rng(seed);
        let a = quadratic(&mut r, k);
        let g = invertible(&mut r, k);
        let b = a.conjugate_by(&g).unwrap();
        prop_assert_eq!(petri_matrix(&a).unwrap().rank, petri_matrix(&b).unwrap().rank);
        prop_assert_eq!(strongly_regular(&a).definition_rank, strongly_regular(&b).definition_rank);
    }

    #[test]
    fn sylvester_law_of_inertia(seed in any::<u64>(), k in 1usize..=4) {
        let mut r = rng(seed);
        let h = hermitian(&mut r, k);
        let g = invertible(&mut r, k);
        let moved = g.mul(&h).mul(&g.adjoint());
        prop_assert_eq!(hermitian_signature(&h).unwrap(), hermitian_signature(&moved).unwrap());
    }

    #[test]
    fn antipodal_squares_to_sign(seed in any::<u64>(), w in 0usize..6) {
        let mut r = rng(seed);
        let f = poly(&mut r, w);
        let twice = f.antipodal(w).antipodal(w);
        let expected = if w % 2 == 0 { f.clone() } else { -&f };
        prop_assert_eq!(twice, expected);
    }

    #[test]
    fn binary_cubics_are_associative(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (a, b, c, d) = (poly(&mut r, 3), poly(&mut r, 3), poly(&mut r, 3), poly(&mut r, 3));
        match algebra_from_binary_cubic(&a, &b, &c, &d) {
            Ok(alg) => prop_assert!(alg.is_associative()),
            Err(e) => prop_assert!(matches!(e, ChartError::DegenerateForm)),
        }
    }

    #[test]
    fn serde_round_trips(seed in any::<u64>(), k in 2usize..=4) {
        let mut r = rng(seed);
        let a = quadratic(&mut r, k);
        let s = serde_json::to_string(&a).unwrap();
        prop_assert_eq!(&serde_json::from_str::<MatrixPoly>(&s).unwrap(), &a);
        let p: BiPoly = curve_from_datum(&a).unwrap().to_bipoly();
        let s = serde_json::to_string(&p).unwrap();
        prop_assert_eq!(serde_json::from_str::<BiPoly>(&s).unwrap(), p);
        let m: MatGR = a.coeff(1).clone();
        let s = serde_json::to_string(&m).unwrap();
        prop_assert_eq!(serde_json::from_str::<MatGR>(&s).unwrap(), m);
        let f: PolyGR = poly(&mut r, 3);
        if f.degree() > Some(0) {
            let pt = Point::RootOf(f.squarefree_part().unwrap().monic());
            let s = serde_json::to_string(&pt).unwrap();
            prop_assert_eq!(serde_json::from_str::<Point>(&s).unwrap(), pt);
        }
        let (a3, b3) = (poly(&mut r, 3), poly(&mut r, 3));
        if let Ok(alg) = algebra_from_binary_cubic(&a3, &b3, &poly(&mut r, 2), &poly(&mut r, 3)) {
            let s = serde_json::to_string(&alg).unwrap();
            prop_assert_eq!(serde_json::from_str::<CurveAlgebra>(&s).unwrap(), alg);
        }
    }
}

#[test]
fn malformed_inputs_are_rejected() {
    for bad in ["1+*i", "", "1/0", "i*2", "--1"] {
        assert!(bad.parse::<GaussianRational>().is_err(), "{bad}");
    }
    assert!(serde_json::from_str::<MatrixPoly>(r#"{"k":2,"d":0,"coeffs":[[["1","0"],["0","1"]]],"extra":1}"#).is_err());
    assert!(serde_json::from_str::<MatrixPoly>(r#"{"k":2,"d":1,"coeffs":[[["1","0"],["0","1"]]]}"#).is_err());
    assert!(serde_json::from_str::<PolyGR>(r#"["1","0"]"#).is_err());
}
