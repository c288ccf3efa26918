use folner_core::averaging::{average_trace, folner_average, Space, Vector, VectorSequence};
use folner_core::group::{floor_rational_power, FolnerFamily, FolnerRule, GroupDescriptor, GroupElement, GroupSelfMap};
use folner_core::rational::{int, ratio};
use folner_core::spectral::{fejer_density, Correlations, EstimateVariant};
use folner_core::{Angle, Coefficient, CyclotomicValue, IrrationalTag, Scalar};
use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;

fn cyclotomic(p: u32) -> impl Strategy<Value = CyclotomicValue> {
    prop::collection::vec(-5i64..6, p as usize).prop_map(move |c| CyclotomicValue::from_coeffs(p, c))
}

fn angle() -> impl Strategy<Value = Angle> {
    (-20i64..20, 1i64..30, -3i64..4, -3i64..4).prop_map(|(n, d, a, b)| {
        Angle::rational(n, d) + Angle::tag(IrrationalTag::Sqrt2Minus1).scale(a) + Angle::tag(IrrationalTag::GoldenFraction).scale(b)
    })
}

proptest! {
    #[test]
    fn cyclotomic_ring_laws(a in cyclotomic(5), b in cyclotomic(5), c in cyclotomic(5)) {
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
        prop_assert_eq!(&(&a - &b) + &b, a.clone());
        let z = (a.to_complex() * b.to_complex() - (&a * &b).to_complex()).norm();
        prop_assert!(z < 1e-9, "{}", z);
    }

    #[test]
    fn roots_of_unity_sum_to_zero(p in prop::sample::select(vec![3u32, 5, 7, 11]), shift in -50i64..50) {
        let mut s = CyclotomicValue::zero(p);
        for k in 0..p as i64 {
            s.add_root(k + shift);
        }
        prop_assert!(s.is_zero());
        let want = if shift.rem_euclid(p as i64) == 0 { Some(p as i64) } else { None };
        prop_assert_eq!(CyclotomicValue::root(p, shift).scale(p as i64).as_integer(), want);
    }

    #[test]
    fn phases_multiply_exactly(a in angle(), b in angle()) {
        let (pa, pb) = (Scalar::phase(&a), Scalar::phase(&b));
        prop_assert_eq!(pa.mul(&pb), Scalar::phase(&(a + b)));
        prop_assert_eq!(pa.conj(), Scalar::phase(&(-a)));
        prop_assert!(pa.mul(&pa.conj()).sub(&Scalar::one()).is_zero());
        prop_assert!((pa.to_complex() - a.phasor()).norm() < 1e-12);
    }

    #[test]
    fn angle_scaling_is_linear(a in angle(), j in -40i64..40, k in -40i64..40) {
        prop_assert_eq!(a.scale(j + k), a.scale(j) + a.scale(k));
        prop_assert!(a.scale(j).to_f64() >= 0.0 && a.scale(j).to_f64() < 1.0);
    }

    #[test]
    fn three_halves_power_is_integer_root(n in 0i64..2_000_000) {
        // ⌊n^{3/2}⌋ = ⌊√(n³)⌋, checked against the integer square root.
        let v = floor_rational_power(n, 3, 2).unwrap() as i128;
        let cube = (n as i128).pow(3);
        prop_assert!(v * v <= cube && (v + 1) * (v + 1) > cube);
    }

    #[test]
    fn interval_defect_formula(n in 1u64..500, h in -600i64..600) {
        let f = FolnerFamily::new(FolnerRule::Interval);
        let d = f.defect(&GroupDescriptor::IntegerLine, n, &GroupElement::Int(h)).unwrap();
        let s = (h.unsigned_abs()).min(n) as i64;
        prop_assert_eq!(d, int(2 * s) / int(n as i64));
    }

    #[test]
    fn level_subgroups_are_invariant(level in 1u64..5, coords in prop::collection::vec(0i64..3, 0..4)) {
        let desc = GroupDescriptor::prime_sum(3).unwrap();
        let f = FolnerFamily::new(FolnerRule::LevelSubgroup);
        let c: Vec<(u32, i64)> = coords.iter().enumerate().map(|(i, &x)| (i as u32 + 1, x)).collect();
        let g = desc.from_coords(&c).unwrap();
        let d = f.defect(&desc, level, &g).unwrap();
        if g.max_support() as u64 <= level {
            prop_assert_eq!(d, int(0));
        } else {
            prop_assert_eq!(d, int(2));
        }
    }

    /// Correlations of positive atoms plus a multiple of Lebesgue measure
    /// give a nonnegative Fejér density of mean γ(0).
    #[test]
    fn fejer_density_of_positive_measure(
        atoms in prop::collection::vec((0.0f64..1.0, 0.01f64..1.0), 1..5),
        flat in 0.0f64..1.0,
        n in 8u64..128,
    ) {
        let corr = Correlations::from_fn(1, n, |k| {
            let mut g = Complex64::new(if k[0] == 0 { flat } else { 0.0 }, 0.0);
            for &(t, w) in &atoms {
                g += Complex64::from_polar(w, std::f64::consts::TAU * t * k[0] as f64);
            }
            g
        }).unwrap();
        let est = fejer_density(&corr, n, 4 * n as usize).unwrap();
        let EstimateVariant::FejerDensity { samples, .. } = &est.variant else { unreachable!() };
        let mean = samples.iter().sum::<f64>() / samples.len() as f64;
        prop_assert!((mean - corr.gamma0()).abs() < 1e-9);
        prop_assert!(samples.iter().all(|&s| s > -1e-9));

        // Toeplitz sections are positive semidefinite.
        let m = 10.min(n as usize);
        let toeplitz = DMatrix::from_fn(m, m, |i, j| corr.get(&[i as i64 - j as i64]).unwrap());
        let min = toeplitz.symmetric_eigen().eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
        prop_assert!(min > -1e-9, "{}", min);
    }

    /// An exact phase sequence at a rational angle p/q averages to the exact
    /// zero over every interval whose length is a multiple of q.
    #[test]
    fn rational_phase_averages(num in 1i64..7, q in prop::sample::select(vec![3i64, 5, 7]), blocks in 1u64..20) {
        prop_assume!(num % q != 0);
        let u: VectorSequence<Scalar> =
            VectorSequence::phase(GroupDescriptor::IntegerLine, vec![Angle::rational(num, q)], GroupSelfMap::Identity);
        let family = FolnerFamily::new(FolnerRule::Interval);
        let n = blocks * q as u64;
        let avg = folner_average(&u, &family, n).unwrap();
        prop_assert!(avg.is_zero(), "{:?}", avg);
        let trace = average_trace(&u, &family, &[n, n + 1]).unwrap();
        let Vector::Scalar(last) = &trace[1] else { unreachable!() };
        // One extra term: the average is e((n+1)·num/q)/(n+1).
        let want = Scalar::phase(&Angle::rational(num, q).scale(n as i64 + 1)).mul(&Scalar::rational(ratio(1, n as i64 + 1)));
        prop_assert_eq!(last, &want);
    }

    #[test]
    fn constant_sequences_average_to_themselves(c in -9i64..10, n in 1u64..50) {
        let v = Vector::Scalar(Scalar::integer(c));
        let u = VectorSequence::constant(GroupDescriptor::IntegerLine, Space::Scalars, v.clone()).unwrap();
        prop_assert_eq!(folner_average(&u, &FolnerFamily::new(FolnerRule::Interval), n).unwrap(), v);
    }
}
