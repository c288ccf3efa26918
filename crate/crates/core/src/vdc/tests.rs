use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::*;
use crate::angle::{Angle, IrrationalTag};
use crate::group::{FolnerRule, GroupDescriptor, GroupSelfMap};
use crate::rational::ratio;
use crate::systems::{centered_coordinate, BernoulliShift, Cylinder};

fn z() -> GroupDescriptor {
    GroupDescriptor::IntegerLine
}

fn interval() -> FolnerFamily {
    FolnerFamily::new(FolnerRule::Interval)
}

fn small() -> VdcParams {
    VdcParams { shift_radius: 5, checkpoints: vec![500, 1000, 2000, 4000, 8000], ..VdcParams::default() }
}

fn phase(theta: Angle, map: GroupSelfMap) -> VectorSequence<Complex64> {
    VectorSequence::phase(z(), vec![theta], map)
}

#[test]
fn quadratic_weyl_is_supported() {
    let u = phase(Angle::tag(IrrationalTag::Sqrt2Minus1), GroupSelfMap::power(2, 1).unwrap());
    for mode in [VdcMode::PerShift, VdcMode::Strong, VdcMode::Cesaro] {
        let v = check_vdc(&u, &interval(), mode, &small()).unwrap();
        assert_eq!(v.shifts.len(), 10);
        assert_eq!(v.hypothesis, Tag::Supported, "{mode}");
        assert_eq!(v.conclusion, Tag::Supported, "{mode}");
        assert_eq!(v.retag(), (v.hypothesis, v.conclusion));
    }
}

#[test]
fn quadratic_weyl_summable_at_full_radius() {
    let u = phase(Angle::tag(IrrationalTag::Sqrt2Minus1), GroupSelfMap::power(2, 1).unwrap());
    let p = VdcParams { checkpoints: vec![10_000, 20_000, 50_000, 100_000], ..VdcParams::default() };
    let v = check_vdc(&u, &interval(), VdcMode::Summable, &p).unwrap();
    assert_eq!(v.shifts.len(), 40);
    assert!(v.per_shift <= 0.05);
    assert!(v.last_block_share < 0.1, "{}", v.last_block_share);
    assert!(v.conclusion_trace.last().unwrap().1 <= 0.02);
    assert_eq!((v.hypothesis, v.conclusion), (Tag::Supported, Tag::Supported));
    assert!(v.cesaro <= v.per_shift);
}

#[test]
fn linear_phase_fails_hypothesis_but_averages_vanish() {
    let u = phase(Angle::rational(1, 3), GroupSelfMap::Identity);
    let v = check_vdc(&u, &interval(), VdcMode::PerShift, &small()).unwrap();
    assert!((v.per_shift - 1.0).abs() < 1e-12);
    assert_eq!(v.hypothesis, Tag::Refuted);
    assert_eq!(v.conclusion, Tag::Supported);
}

#[test]
fn constant_sequence_is_refuted_twice() {
    let u = VectorSequence::constant(z(), Space::Scalars, Vector::Scalar(Complex64::new(1.0, 0.0))).unwrap();
    let v = check_vdc(&u, &interval(), VdcMode::Cesaro, &small()).unwrap();
    assert_eq!((v.hypothesis, v.conclusion), (Tag::Refuted, Tag::Refuted));
    assert!(v.decay_exponent.unwrap().abs() < 1e-12);
}

#[test]
fn zero_sequence_is_supported() {
    let u: VectorSequence<Scalar> = VectorSequence::constant(z(), Space::Scalars, Vector::Scalar(Scalar::zero())).unwrap();
    let v = check_vdc(&u, &interval(), VdcMode::Summable, &small()).unwrap();
    assert_eq!((v.hypothesis, v.conclusion), (Tag::Supported, Tag::Supported));
    assert_eq!(v.exact_vanishing, Some(true));
}

#[test]
fn window_must_be_a_checkpoint() {
    let u = phase(Angle::rational(1, 3), GroupSelfMap::Identity);
    let p = VdcParams { window: Some(777), ..small() };
    assert!(check_vdc(&u, &interval(), VdcMode::PerShift, &p).is_err());
}

#[test]
fn retag_follows_diagnostics() {
    let u = phase(Angle::tag(IrrationalTag::GoldenFraction), GroupSelfMap::power(2, 1).unwrap());
    let mut v = check_vdc(&u, &interval(), VdcMode::Strong, &small()).unwrap();
    v.strong = 0.3;
    assert_eq!(v.retag().0, Tag::Inconclusive);
    v.strong = 0.9;
    assert_eq!(v.retag().0, Tag::Refuted);
    v.conclusion_trace.last_mut().unwrap().1 = 0.2;
    assert_eq!(v.retag().1, Tag::Inconclusive);
}

#[test]
fn decay_fit() {
    let trace: Vec<(u64, f64)> = [10u64, 100, 1000].iter().map(|&n| (n, 3.0 / libm::sqrt(n as f64))).collect();
    assert!((fit_decay(&trace).unwrap() + 0.5).abs() < 1e-12);
    assert_eq!(fit_decay(&[(10, 0.0), (20, 1.0)]), None);
    assert_eq!("summable".parse::<VdcMode>().unwrap(), VdcMode::Summable);
    assert!("weak".parse::<VdcMode>().is_err());
}

fn bernoulli() -> Arc<System> {
    let b = BernoulliShift::new(vec![ratio(1, 2), ratio(1, 2)]).unwrap();
    Arc::new(System::new(z(), SystemKind::BernoulliShift(b)).unwrap())
}

#[test]
fn weighted_norm_single_coordinate_exact() {
    let sys = bernoulli();
    let f: Observable<Scalar> = centered_coordinate(&sys, GroupElement::Int(0), 0).unwrap();
    let w: VectorSequence<Scalar> = VectorSequence::phase(z(), vec![Angle::tag(IrrationalTag::Sqrt2Minus1)], GroupSelfMap::Identity);
    for n in [1u64, 7, 64] {
        let exact = bernoulli_weighted_norm_sq(&sys, &f, &w, &interval(), n).unwrap();
        assert_eq!(exact.as_rational(), Some(ratio(1, 4 * n as i64)));
    }
    let fc = f.to_complex();
    let u = VectorSequence::orbit(sys.clone(), fc, GroupSelfMap::Identity).unwrap();
    let wc = phase(Angle::tag(IrrationalTag::Sqrt2Minus1), GroupSelfMap::Identity);
    let t = weighted_average_trace(&u, &wc, &interval(), &[16, 64]).unwrap();
    assert!((t.trace[1].1 - libm::sqrt(1.0 / 256.0)).abs() < 1e-12);
    assert!((t.exponent.unwrap() + 0.5).abs() < 1e-9);
}

#[test]
fn weighted_norm_two_coordinates_matches_float() {
    let sys = bernoulli();
    let a = Cylinder::new(vec![(GroupElement::Int(0), 0), (GroupElement::Int(1), 1)]).unwrap();
    let mut f: Observable<Scalar> = Observable::cylinder(a, Scalar::one());
    f = f.sub(&sys.constant(Scalar::rational(ratio(1, 4)))).unwrap();
    let w: VectorSequence<Scalar> = VectorSequence::phase(z(), vec![Angle::rational(1, 3)], GroupSelfMap::Identity);
    let u = VectorSequence::orbit(sys.clone(), f.to_complex(), GroupSelfMap::Identity).unwrap();
    let wc = phase(Angle::rational(1, 3), GroupSelfMap::Identity);
    let gamma0 = sys.inner(&f, &f).unwrap().as_rational().unwrap();
    for n in [5u64, 30] {
        let exact = bernoulli_weighted_norm_sq(&sys, &f, &w, &interval(), n).unwrap();
        let r = exact.as_rational().unwrap();
        assert!(r <= &gamma0 * ratio(2, n as i64));
        let float = weighted_average_trace(&u, &wc, &interval(), &[n]).unwrap().trace[0].1;
        assert!((float * float - crate::rational::to_f64(&r)).abs() < 1e-12);
    }
}
