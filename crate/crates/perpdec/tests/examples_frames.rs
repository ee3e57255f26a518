use perpdec::address::{
    address_multiset, count_addresses, discriminant, invariants, many_orbits_frames, many_orbits_map, pseudo_orbit_classes, readdress,
    relative_address, semirefine, verify_many_orbits, Address, Reference, RelativeAddress,
};
use perpdec::adjoint::is_isometry;
use perpdec::bilinear::{central_power, dot_form, exchange_map, exterior_square, standard_alternating};
use perpdec::frames::{
    find_proper_idempotent, frame, frame_decomposition, involution_from_nil, lift_idempotent, lift_involution, peirce_split,
    primary_idempotents, transport_frames, Frame, TransportOutcome,
};
use perpdec::linalg::{Fp, Matrix, SquareClass};
use perpdec::structure::StarStructure;

fn gf(p: u64) -> Fp {
    Fp::new(p).unwrap()
}

fn structure(b: perpdec::bilinear::BilinearMap) -> StarStructure {
    StarStructure::new(&b).unwrap()
}

fn extraspecial() -> StarStructure {
    structure(central_power(&standard_alternating(5).unwrap(), 2).unwrap())
}

fn diagonal_units(f: Fp, n: usize) -> Vec<Matrix> {
    (0..n).map(|i| Matrix::unit(f, n, i, i)).collect()
}

fn addr(ideal: usize, square: usize, nonsquare: usize) -> Address {
    Address { ideal, square, nonsquare }
}

#[test]
fn peirce_splits() {
    let f = gf(5);
    let b = dot_form(2, 5, SquareClass::Square).unwrap();
    let split = peirce_split(&b, &Matrix::unit(f, 2, 0, 0)).unwrap();
    assert_eq!(split.image.restriction.map, dot_form(1, 5, SquareClass::Square).unwrap());
    assert_eq!(split.kernel.restriction.map, dot_form(1, 5, SquareClass::Square).unwrap());

    let b = central_power(&standard_alternating(5).unwrap(), 2).unwrap();
    let split = peirce_split(&b, &Matrix::diagonal(f, &[1, 1, 0, 0])).unwrap();
    assert_eq!(split.image.restriction.map, standard_alternating(5).unwrap());
    assert_eq!(split.kernel.restriction.map, standard_alternating(5).unwrap());

    assert!(peirce_split(&b, &Matrix::identity(f, 4)).is_err());
}

#[test]
fn proper_idempotents() {
    let f = gf(5);
    let parts = primary_idempotents(&Matrix::diagonal(f, &[1, 2]), 0).unwrap();
    assert!(parts.contains(&Matrix::unit(f, 2, 0, 0)));
    assert!(parts.contains(&Matrix::unit(f, 2, 1, 1)));

    let e = find_proper_idempotent(&structure(dot_form(2, 5, SquareClass::Square).unwrap()), 0).unwrap().unwrap();
    assert_eq!(e.mul(&e), e);
    assert_eq!(e.trace(), 1);

    assert!(find_proper_idempotent(&structure(exterior_square(3, 5).unwrap()), 0).unwrap().is_none());
    assert!(find_proper_idempotent(&structure(exchange_map(2, 5).unwrap()), 0).unwrap().is_none());
}

#[test]
fn idempotent_lifting() {
    let f = gf(5);
    let e = Matrix::diagonal(f, &[1, 0]).add(&Matrix::unit(f, 2, 0, 1));
    assert_eq!(lift_idempotent(&e).unwrap(), e);
    assert_eq!(lift_idempotent(&Matrix::identity(f, 2)).unwrap(), Matrix::identity(f, 2));
    // 1 + E12 is idempotent modulo span(E12) and lifts to 1
    let u = Matrix::identity(f, 2).add(&Matrix::unit(f, 2, 0, 1));
    assert_eq!(lift_idempotent(&u).unwrap(), Matrix::identity(f, 2));
    assert!(lift_idempotent(&Matrix::scalar(f, 2, 2)).is_err());
}

#[test]
fn involution_lifting() {
    let f = gf(5);
    let one = Matrix::identity(f, 2);
    assert_eq!(lift_involution(&one.neg()).unwrap(), one.neg());
    assert_eq!(lift_involution(&one.add(&Matrix::unit(f, 2, 0, 1))).unwrap(), one);
    let swap = Matrix::from_rows(f, &[vec![0, 1], vec![1, 0]]).unwrap();
    assert_eq!(lift_involution(&swap).unwrap(), swap);
}

#[test]
fn nil_involutions() {
    let f = gf(5);
    let e = Matrix::unit(f, 2, 0, 0);
    assert_eq!(involution_from_nil(&e, &Matrix::zeros(f, 2, 2)).unwrap(), Matrix::diagonal(f, &[4, 1]));
    let z = Matrix::unit(f, 2, 0, 1).scale(3);
    let v = involution_from_nil(&e, &z).unwrap();
    assert_eq!(v, Matrix::identity(f, 2).sub(&e.scale(2)).sub(&z));
    assert_eq!(v.mul(&e).mul(&v), e.add(&z));
    let zero = Matrix::zeros(f, 2, 2);
    assert_eq!(involution_from_nil(&zero, &zero).unwrap(), Matrix::identity(f, 2));
}

#[test]
fn frame_sizes() {
    assert_eq!(frame(&extraspecial(), 0).unwrap().len(), 2);
    let s = structure(exterior_square(3, 5).unwrap());
    let fr = frame(&s, 0).unwrap();
    assert_eq!(fr.idempotents, vec![Matrix::identity(gf(5), 3)]);
    let s = structure(central_power(&exterior_square(3, 5).unwrap(), 4).unwrap());
    assert_eq!(frame(&s, 0).unwrap().len(), 4);
}

#[test]
fn frame_decompositions() {
    let f = gf(5);
    let s = structure(dot_form(2, 5, SquareClass::Square).unwrap());
    let fr = Frame::from_idempotents(&s, diagonal_units(f, 2), 0).unwrap();
    let parts: Vec<Vec<Vec<u64>>> = frame_decomposition(&fr).iter().map(|x| x.vectors()).collect();
    assert_eq!(parts, vec![vec![vec![1, 0]], vec![vec![0, 1]]]);

    let s = structure(exterior_square(3, 5).unwrap());
    let parts = frame_decomposition(&frame(&s, 0).unwrap());
    assert_eq!(parts.len(), 1);
    assert_eq!(parts[0].dim(), 3);

    let s = extraspecial();
    for x in frame_decomposition(&frame(&s, 7).unwrap()) {
        let r = s.map().restrict(&x).unwrap();
        assert_eq!((x.dim(), r.map.dim_w()), (2, 1));
        assert!(!r.degenerate);
    }
}

#[test]
fn transports() {
    let s = extraspecial();
    let fr = frame(&s, 0).unwrap();
    match transport_frames(&s, &fr, &fr, 0).unwrap() {
        TransportOutcome::Isometry(t) => assert_eq!(t.matching, vec![0, 1]),
        other => panic!("{other:?}"),
    }
    for seed in 1..6 {
        let other = frame(&s, seed).unwrap();
        match transport_frames(&s, &fr, &other, seed).unwrap() {
            TransportOutcome::Isometry(t) => assert!(is_isometry(s.adjoint(), &t.isometry).unwrap()),
            other => panic!("{other:?}"),
        }
    }

    let s = structure(many_orbits_map(2, 5).unwrap());
    let (family, _) = many_orbits_frames(&s, 2, 0).unwrap();
    assert!(matches!(transport_frames(&s, &family[0], &family[1], 0).unwrap(), TransportOutcome::AddressObstruction { .. }));
}

#[test]
fn relative_addresses() {
    let f = gf(5);
    let (e, g) = (Matrix::unit(f, 2, 0, 0), Matrix::unit(f, 2, 1, 1));
    let s = structure(dot_form(2, 5, SquareClass::Square).unwrap());
    assert_eq!(relative_address(&s, &e, &g, 0).unwrap(), RelativeAddress::Equal);
    let s = structure(dot_form(2, 5, SquareClass::Nonsquare).unwrap());
    assert_eq!(relative_address(&s, &e, &g, 0).unwrap(), RelativeAddress::Unequal);
    assert_eq!(relative_address(&s, &e, &e, 0).unwrap(), RelativeAddress::Equal);

    let b = dot_form(1, 5, SquareClass::Square).unwrap().direct_sum(&dot_form(1, 5, SquareClass::Square).unwrap()).unwrap();
    let s = structure(b);
    assert_eq!(relative_address(&s, &e, &g, 0).unwrap(), RelativeAddress::Incomparable);
}

#[test]
fn address_multisets() {
    let s = structure(many_orbits_map(2, 5).unwrap());
    let (family, reference) = many_orbits_frames(&s, 2, 0).unwrap();
    assert_eq!(address_multiset(&s, &family[0], &reference, 0).unwrap(), vec![addr(0, 4, 0)]);
    assert_eq!(address_multiset(&s, &family[1], &reference, 0).unwrap(), vec![addr(0, 2, 2)]);

    let s = extraspecial();
    let fr = frame(&s, 3).unwrap();
    assert!(address_multiset(&s, &fr, &Reference::from_frame(&s, &fr), 0).unwrap().is_empty());
}

#[test]
fn discriminants_and_counts() {
    assert_eq!(discriminant(&addr(0, 4, 0)), SquareClass::Square);
    assert_eq!(discriminant(&addr(0, 2, 1)), SquareClass::Nonsquare);
    assert_eq!(count_addresses(4, SquareClass::Square), 3);
    assert_eq!(count_addresses(1, SquareClass::Nonsquare), 1);
    assert_eq!(count_addresses(5, SquareClass::Nonsquare), 3);
}

#[test]
fn pseudo_orbits() {
    assert_eq!(pseudo_orbit_classes(4, &[0, 2, 4]), vec![vec![0, 4], vec![2]]);
    assert_eq!(pseudo_orbit_classes(3, &[0, 2]), vec![vec![0], vec![2]]);
    assert_eq!(pseudo_orbit_classes(2, &[0, 2]), vec![vec![0, 2]]);
}

#[test]
fn readdressing() {
    let s = structure(central_power(&exterior_square(3, 5).unwrap(), 4).unwrap());
    let (family, reference) = many_orbits_frames(&s, 2, 0).unwrap();
    let h0 = &family[0];
    let ideal = h0.ideals[0];

    let r = readdress(&s, h0, ideal, 2, &reference, 0).unwrap();
    assert_eq!(address_multiset(&s, &r.frame, &reference, 0).unwrap(), vec![addr(0, 2, 2)]);

    let same = readdress(&s, h0, ideal, 0, &reference, 0).unwrap();
    assert_eq!(&same.frame, h0);

    assert!(readdress(&s, h0, ideal, 1, &reference, 0).is_err());
    assert!(readdress(&s, h0, ideal, 5, &reference, 0).is_err());
}

#[test]
fn semirefinements() {
    let f = gf(5);
    let s = structure(many_orbits_map(2, 5).unwrap());
    let (family, reference) = many_orbits_frames(&s, 2, 0).unwrap();
    let r = semirefine(&s, &family[1], &reference, 0).unwrap();
    assert_eq!(r.members.len(), 2);
    assert!(r.fixed.is_empty());

    let s = structure(dot_form(3, 5, SquareClass::Nonsquare).unwrap());
    let fr = Frame::from_idempotents(&s, diagonal_units(f, 3), 0).unwrap();
    let reference = Reference::from_frame(&s, &fr);
    let r = semirefine(&s, &fr, &reference, 0).unwrap();
    assert_eq!(r.members.len(), 2);
    assert_eq!(r.fixed.len(), 1);
    assert_eq!(r.fixed_classes, vec![Some(SquareClass::Nonsquare)]);

    let s = extraspecial();
    let fr = frame(&s, 0).unwrap();
    let r = semirefine(&s, &fr, &Reference::from_frame(&s, &fr), 0).unwrap();
    assert_eq!(r.members, frame_decomposition(&fr));
    assert!(r.rho.is_identity());
}

#[test]
fn invariant_reports() {
    let s = extraspecial();
    let r = invariants(&s, &frame(&s, 0).unwrap(), 0).unwrap();
    assert_eq!((r.member_count, r.member_orders.clone(), r.center_orders.clone()), (2, vec![3, 3], vec![1, 1]));

    let s = structure(central_power(&exterior_square(3, 5).unwrap(), 4).unwrap());
    let r = invariants(&s, &frame(&s, 0).unwrap(), 0).unwrap();
    assert_eq!((r.member_count, r.member_orders), (4, vec![6; 4]));

    let s = structure(exterior_square(3, 5).unwrap());
    assert_eq!(invariants(&s, &frame(&s, 0).unwrap(), 0).unwrap().member_count, 1);
}

#[test]
fn many_orbit_counts() {
    for (n, p, iso, aut) in [(1, 5, 2, 1), (2, 5, 3, 2), (2, 7, 3, 2)] {
        let r = verify_many_orbits(n, p, 0).unwrap();
        assert_eq!((r.isometry_orbits, r.aut_orbit_classes), (iso, aut), "n={n} p={p}");
        assert!(r.ok());
    }
}
