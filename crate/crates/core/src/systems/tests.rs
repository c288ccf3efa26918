use alloc::collections::BTreeMap;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::*;
use crate::angle::{Angle, IrrationalTag};
use crate::rational::{int, ratio};
use crate::scalar::Scalar;

fn zeta3(k: i64) -> Scalar {
    Scalar::phase(&Angle::rational(k, 3))
}

fn z() -> GroupDescriptor {
    GroupDescriptor::IntegerLine
}

#[test]
fn act_examples() {
    // σ(i) = i − 1, so T_1 moves the mass of atom 0 to atom 1.
    let sys = System::new(z(), SystemKind::FinitePermutation(FinitePermutation::cyclic(3, 2).unwrap())).unwrap();
    let f: Observable<Scalar> = Observable::indicator(3, &[0]);
    assert_eq!(sys.act(&GroupElement::Int(1), &f).unwrap(), Observable::indicator(3, &[1]));
    assert_eq!(sys.act(&GroupElement::Int(0), &f).unwrap(), f);

    let theta = Angle::tag(IrrationalTag::Sqrt2Minus1);
    let rot = System::new(z(), SystemKind::TorusRotation(TorusRotation::circle(theta))).unwrap();
    let e1: Observable<Scalar> = Observable::mode(vec![1], Scalar::one());
    let moved = rot.act(&GroupElement::Int(5), &e1).unwrap();
    assert_eq!(moved, Observable::mode(vec![1], Scalar::phase(&theta.scale(5))));
}

#[test]
fn inner_examples() {
    let rot = System::new(z(), SystemKind::TorusRotation(TorusRotation::circle(Angle::rational(1, 5)))).unwrap();
    let one: Observable<Scalar> = rot.one();
    assert_eq!(rot.inner(&one, &one).unwrap(), Scalar::one());
    let e1 = Observable::mode(vec![1], Scalar::one());
    let e2 = Observable::mode(vec![2], Scalar::one());
    assert!(rot.inner(&e1, &e2).unwrap().is_zero());

    let b = System::new(z(), SystemKind::BernoulliShift(BernoulliShift::new(vec![ratio(1, 2), ratio(1, 2)]).unwrap())).unwrap();
    let f: Observable<Scalar> = centered_coordinate(&b, GroupElement::Int(0), 1).unwrap();
    assert_eq!(rot.inner(&one, &one).unwrap(), Scalar::one());
    assert_eq!(b.inner(&f, &f).unwrap(), Scalar::rational(ratio(1, 4)));
    assert!(b.integral(&f).unwrap().is_zero());
}

#[test]
fn correlation_examples() {
    let b = System::new(z(), SystemKind::BernoulliShift(BernoulliShift::new(vec![ratio(1, 3), ratio(2, 3)]).unwrap())).unwrap();
    let f: Observable<Scalar> = centered_coordinate(&b, GroupElement::Int(0), 0).unwrap();
    assert_eq!(b.correlation(&f, &GroupElement::Int(0)).unwrap(), b.inner(&f, &f).unwrap());
    for n in 1..6 {
        assert!(b.correlation(&f, &GroupElement::Int(n)).unwrap().is_zero());
        assert!(b.correlation(&f, &GroupElement::Int(-n)).unwrap().is_zero());
    }

    // σ(i) = i + 1: T_n f = ω^n f for f = (1, ω, ω²).
    let sys = System::new(z(), SystemKind::FinitePermutation(FinitePermutation::cyclic(3, 1).unwrap())).unwrap();
    let f = Observable::Finite(vec![zeta3(0), zeta3(1), zeta3(2)]);
    let norm = sys.inner(&f, &f).unwrap();
    assert_eq!(norm, Scalar::one());
    for n in -4..5 {
        let c = sys.correlation(&f, &GroupElement::Int(n)).unwrap();
        // brute-force 3x3 evaluation with explicit matrices
        let mut brute = Complex64::new(0.0, 0.0);
        for i in 0..3usize {
            let j = (i as i64 + n).rem_euclid(3) as usize;
            brute += Angle::rational(j as i64, 3).phasor() * Angle::rational(i as i64, 3).phasor().conj() / 3.0;
        }
        assert!((c.to_complex() - brute).norm() < 1e-12);
        assert_eq!(c, zeta3(n).mul(&norm));
    }
}

#[test]
fn projection_examples() {
    let sys = System::new(z(), SystemKind::FinitePermutation(FinitePermutation::cyclic(4, 1).unwrap())).unwrap();
    let f = Observable::Finite(vec![Scalar::integer(1), Scalar::integer(2), Scalar::integer(3), Scalar::integer(6)]);
    assert_eq!(sys.invariant_projection(&f).unwrap(), Observable::Finite(vec![Scalar::integer(3); 4]));

    let w = vec![ratio(1, 3); 3];
    let trivial = FinitePermutation::new(w.clone(), vec![], vec![], BTreeMap::new()).unwrap();
    let sys = System::new(z(), SystemKind::FinitePermutation(trivial)).unwrap();
    assert_eq!(sys.invariant_projection(&f_of(&[1, 0, 4])).unwrap(), f_of(&[1, 0, 4]));

    // orbits {0,1}, {2}
    let mut images = BTreeMap::new();
    images.insert(1, vec![1]);
    let swap = FinitePermutation::new(w, vec![2], vec![vec![1, 0, 2]], images).unwrap();
    let sys = System::new(z(), SystemKind::FinitePermutation(swap)).unwrap();
    let f = f_of(&[1, 0, 4]);
    let p = sys.invariant_projection(&f).unwrap();
    let half = Scalar::rational(ratio(1, 2));
    assert_eq!(p, Observable::Finite(vec![half.clone(), half, Scalar::integer(4)]));
    assert_eq!(sys.invariant_projection(&p).unwrap(), p);
    let resid = f.sub(&p).unwrap();
    assert!(sys.inner(&resid, &p).unwrap().is_zero());
    assert!(!sys.is_ergodic().unwrap());
}

fn f_of(v: &[i64]) -> Observable<Scalar> {
    Observable::Finite(v.iter().map(|&x| Scalar::integer(x)).collect())
}

#[test]
fn ergodicity_examples() {
    let sys = System::new(z(), SystemKind::FinitePermutation(FinitePermutation::cyclic(6, 1).unwrap())).unwrap();
    assert!(sys.is_ergodic().unwrap());
    assert!(sys.is_totally_ergodic(1).unwrap());
    assert!(!sys.is_totally_ergodic(2).unwrap());
    let sys7 = System::new(z(), SystemKind::FinitePermutation(FinitePermutation::cyclic(7, 1).unwrap())).unwrap();
    assert!(sys7.is_totally_ergodic(6).unwrap());
    assert!(!sys7.is_totally_ergodic(7).unwrap());
    let fixed = FinitePermutation::new(vec![ratio(1, 2); 2], vec![], vec![], BTreeMap::new()).unwrap();
    let sys = System::new(z(), SystemKind::FinitePermutation(fixed)).unwrap();
    assert!(!sys.is_ergodic().unwrap());
    let rot = System::new(z(), SystemKind::TorusRotation(TorusRotation::circle(Angle::rational(1, 5)))).unwrap();
    assert!(rot.is_ergodic().is_err());
}

#[test]
fn multiply_examples() {
    let rot = System::new(z(), SystemKind::TorusRotation(TorusRotation::circle(Angle::rational(1, 5)))).unwrap();
    let e1 = Observable::mode(vec![1], Scalar::one());
    let e2 = Observable::mode(vec![2], Scalar::one());
    assert_eq!(rot.multiply(&e1, &e2).unwrap(), Observable::mode(vec![3], Scalar::one()));
    assert_eq!(rot.multiply(&e1, &rot.one()).unwrap(), e1);

    let sys = System::new(z(), SystemKind::FinitePermutation(FinitePermutation::cyclic(4, 1).unwrap())).unwrap();
    let a: Observable<Scalar> = Observable::indicator(4, &[0, 1, 2]);
    let b = Observable::indicator(4, &[1, 2, 3]);
    assert_eq!(sys.multiply(&a, &b).unwrap(), Observable::indicator(4, &[1, 2]));

    let b = System::new(z(), SystemKind::BernoulliShift(BernoulliShift::new(vec![ratio(1, 2), ratio(1, 2)]).unwrap())).unwrap();
    let f: Observable<Scalar> = centered_coordinate(&b, GroupElement::Int(0), 1).unwrap();
    let sq = b.multiply(&f, &f).unwrap();
    // (1[x0=1] − 1/2)² = 1/4 identically
    assert_eq!(b.inner(&sq, &b.one()).unwrap(), Scalar::rational(ratio(1, 4)));
    assert!(sq.sub(&b.constant(Scalar::rational(ratio(1, 4)))).unwrap().sub(&Observable::Bernoulli(BTreeMap::new())).is_ok());
}

#[test]
fn relation_checks() {
    let w = vec![ratio(1, 3); 3];
    let mut images = BTreeMap::new();
    images.insert(1, vec![1]);
    // a 3-cycle does not have order 2
    assert!(FinitePermutation::new(w.clone(), vec![2], vec![vec![1, 2, 0]], images.clone()).is_err());
    // weights must be preserved
    assert!(FinitePermutation::new(vec![ratio(1, 2), ratio(1, 4), ratio(1, 4)], vec![3], vec![vec![1, 2, 0]], images.clone()).is_err());
    // a 3-cycle cannot be the image of a generator of ⊕Z/5
    let c3 = FinitePermutation::new(w, vec![3], vec![vec![1, 2, 0]], images).unwrap();
    let g5 = GroupDescriptor::prime_sum(5).unwrap();
    assert!(System::new(g5, SystemKind::FinitePermutation(c3.clone())).is_err());
    let g3 = GroupDescriptor::prime_sum(3).unwrap();
    assert!(System::new(g3, SystemKind::FinitePermutation(c3)).is_ok());
    assert!(BernoulliShift::new(vec![ratio(1, 2), ratio(1, 3)]).is_err());
    let t = TorusRotation::circle(Angle::rational(1, 2));
    assert!(System::new(GroupDescriptor::prime_sum(3).unwrap(), SystemKind::TorusRotation(t)).is_err());
}

#[test]
fn text_round_trip() {
    let cases = [
        (z(), "finite weights=[1/3,1/3,1/3] orders=[3] perms=[[1,2,0]] map=[1:[1]]"),
        (z(), "torus d=1 alpha=sqrt2m1"),
        (GroupDescriptor::lattice(2).unwrap(), "torus d=2 alpha=1/3,0;0,1/7+sqrt2m1"),
        (z(), "bernoulli p=[1/2,1/2]"),
    ];
    for (g, s) in cases {
        let sys = System::parse(&g, s).unwrap();
        assert_eq!(sys.to_string(), s);
        assert_eq!(System::parse(&g, &sys.to_string()).unwrap(), sys);
    }
    assert!(System::parse(&z(), "bernoulli p=[1/2,1/2] q=1").is_err());
    assert!(System::parse(&z(), "circle").is_err());
}

#[test]
fn invariant_part_analytic() {
    let g = GroupDescriptor::lattice(2).unwrap();
    let t = TorusRotation::new(2, vec![vec![Angle::rational(1, 3), Angle::ZERO], vec![Angle::ZERO, Angle::ZERO]]).unwrap();
    let sys = System::new(g, SystemKind::TorusRotation(t)).unwrap();
    let mut m = BTreeMap::new();
    m.insert(vec![0, 1], Scalar::one());
    m.insert(vec![3, 2], Scalar::integer(2));
    m.insert(vec![1, 0], Scalar::integer(5));
    let f = Observable::Torus(m);
    let p = sys.invariant_part(&f).unwrap();
    let Observable::Torus(pm) = p else { panic!() };
    let keys: Vec<_> = pm.keys().cloned().collect();
    assert_eq!(keys, vec![vec![0, 1], vec![3, 2]]);
    let b = System::new(z(), SystemKind::BernoulliShift(BernoulliShift::new(vec![int(1)]).unwrap())).unwrap();
    let c = b.invariant_part(&b.constant(Scalar::integer(3))).unwrap();
    assert_eq!(c, b.constant(Scalar::integer(3)));
}
