use torus_models::functors::*;
use torus_models::modules::{CompModule, Window};

fn model() -> Rank1 {
    Rank1::new(Window::default()).unwrap()
}

/// dim of `degrees`-generated free ℚ[c]-module in degree `d`, counted by hand.
fn free_dim(degrees: &[i64], d: i64) -> usize {
    degrees
        .iter()
        .filter(|&&g| d >= g && (d - g) % 2 == 0)
        .count()
}

fn dims(m: &CompModule, w: Window) -> Vec<usize> {
    w.degrees().map(|d| m.dim(w, d).unwrap()).collect()
}

#[test]
fn unit_object_recovers_the_ring() {
    let r = model();
    let w = r.window;
    let a = ToralObject::new(&r, vec![0], AeFamily::uniform(r.standard_stalk(&[0]))).unwrap();
    let g = rank1_gamma_qd(&r, &a).unwrap().object;
    let expect: Vec<usize> = w.degrees().map(|d| free_dim(&[0], d)).collect();
    assert_eq!(dims(&g.stalks.tail().module, w), expect);
    assert_eq!(dims(&g.germ, w), expect);
    assert!(g.stalks.exceptional().is_empty());
    assert_eq!(
        connected_round_trip(&r, &ConnectedObject::unit(&r).unwrap()).unwrap(),
        None
    );
}

#[test]
fn raised_lattice_keeps_its_stalk() {
    let r = model();
    let w = r.window;
    let objs = hand_built_objects(&r).unwrap();
    let (_, a) = objs
        .iter()
        .find(|(n, _)| n == "raised lattice at C_2")
        .unwrap();
    let g = rank1_gamma_qd(&r, a).unwrap().object;
    let expect: Vec<usize> = w.degrees().map(|d| free_dim(&[2], d)).collect();
    assert_eq!(dims(&g.stalks.get(2).module, w), expect);
    assert_eq!(
        dims(&g.stalks.get(3).module, w),
        w.degrees().map(|d| free_dim(&[0], d)).collect::<Vec<_>>()
    );
}

#[test]
fn round_trips_on_hand_built_objects() {
    let r = model();
    let objs = hand_built_objects(&r).unwrap();
    assert_eq!(objs.len(), 10);
    for (name, a) in &objs {
        assert_eq!(toral_round_trip(&r, a).unwrap(), None, "{name}");
        let c = rank1_gamma_qd(&r, a).unwrap().object;
        assert_eq!(connected_round_trip(&r, &c).unwrap(), None, "{name}");
    }
}

#[test]
fn zero_object_goes_to_zero() {
    let r = model();
    let a = ToralObject::new(&r, vec![], AeFamily::uniform(r.standard_stalk(&[]))).unwrap();
    let g = rank1_gamma_qd(&r, &a).unwrap().object;
    assert!(g.germ.is_zero() && g.stalks.tail().module.is_zero());
}

#[test]
fn bad_objects_are_rejected() {
    let r = model();
    for (name, res) in rejected_objects(&r) {
        assert!(res.is_err(), "{name}");
    }
}

#[test]
fn localized_product_is_smaller() {
    let r = model();
    let x = strictness_witness(&r);
    assert!(x.in_product_of_localizations());
    assert!(!x.in_localized_product());
    assert!(x.clearing_euler_family(&r).is_none());
    // (c_1⁻¹, c_2⁻², 1, 1, …) is cleared by (c_1, c_2², 1, …)
    let y = AeFamily::uniform(r.laurent.one())
        .with(1, r.c_pow(-1))
        .with(2, r.c_pow(-2));
    assert!(y.in_localized_product());
    let e = y.clearing_euler_family(&r).unwrap();
    assert!(y.mul(&e, &r).is_integral());
    assert_eq!(e.get(2), &r.c_pow(2));
    assert_eq!(e.tail(), &r.laurent.one());
}
