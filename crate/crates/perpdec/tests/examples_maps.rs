use perpdec::bilinear::{
    central_power, check_pseudo_isometry, dot_form, exchange_map, exterior_square, standard_alternating, validate, BilinearMap, Sign,
};
use perpdec::linalg::{factor_poly, min_poly, solve_linear, square_class, Fp, Matrix, Poly, SquareClass, Subspace};
use perpdec::Error;

fn gf(p: u64) -> Fp {
    Fp::new(p).unwrap()
}

fn m(p: u64, rows: &[&[i64]]) -> Matrix {
    Matrix::from_rows(gf(p), &rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
}

#[test]
fn solve_identity_zero_and_inconsistent() {
    let s = solve_linear(&Matrix::identity(gf(5), 2), &[1, 2]).unwrap();
    assert_eq!(s.solution, Some(vec![1, 2]));
    assert!(s.kernel.is_empty());

    let s = solve_linear(&Matrix::zeros(gf(5), 2, 2), &[0, 0]).unwrap();
    assert_eq!(s.solution, Some(vec![0, 0]));
    assert_eq!(s.kernel.len(), 2);

    let s = solve_linear(&m(5, &[&[1, 1], &[2, 2]]), &[1, 3]).unwrap();
    assert!(s.solution.is_none());
}

#[test]
fn minimal_polynomials() {
    let f = gf(5);
    assert_eq!(min_poly(&Matrix::identity(f, 3)).unwrap(), Poly::new(f, vec![4, 1]));
    assert_eq!(min_poly(&m(5, &[&[0, 1], &[0, 0]])).unwrap(), Poly::new(f, vec![0, 0, 1]));
    // companion matrix of t^2 + 1
    let c = m(3, &[&[0, 1], &[-1, 0]]);
    assert_eq!(min_poly(&c).unwrap(), Poly::new(gf(3), vec![1, 0, 1]));
}

#[test]
fn factoring() {
    let f = gf(5);
    let mut got = factor_poly(&Poly::new(f, vec![1, 0, 1]), 0).unwrap();
    got.sort_by(|a, b| a.0.coeffs().cmp(b.0.coeffs()));
    assert_eq!(got, vec![(Poly::new(f, vec![2, 1]), 1), (Poly::new(f, vec![3, 1]), 1)]);

    let g = Poly::new(gf(3), vec![1, 0, 1]);
    assert_eq!(factor_poly(&g, 0).unwrap(), vec![(g.clone(), 1)]);

    assert_eq!(factor_poly(&Poly::new(f, vec![0, 0, 1]), 0).unwrap(), vec![(Poly::x(f), 2)]);
}

#[test]
fn square_classes_mod_5() {
    let f = gf(5);
    assert_eq!(square_class(f, 1).unwrap(), SquareClass::Square);
    assert_eq!(square_class(f, 2).unwrap(), SquareClass::Nonsquare);
    assert_eq!(square_class(f, 4).unwrap(), SquareClass::Square);
    assert!(square_class(f, 0).is_err());
}

#[test]
fn validation_reports() {
    let r = validate(&exterior_square(3, 5).unwrap().to_file());
    assert!(r.ok);
    assert_eq!((r.sign, r.full, r.radical_dim), (-1, true, Some(0)));

    let mut file = standard_alternating(5).unwrap().to_file();
    let g = file.grams[0].clone();
    file.grams.push(g.iter().map(|row| row.iter().map(|x| 2 * x).collect()).collect());
    file.dim_w = 2;
    let r = validate(&file);
    assert!(!r.ok && !r.full);

    let mut file = standard_alternating(5).unwrap().to_file();
    file.sign = 1;
    let r = validate(&file);
    assert!(!r.ok);
    assert!(r.violations.iter().any(|v| v.contains("Hermitian") || v.contains("symmetric")), "{:?}", r.violations);
}

#[test]
fn radicals() {
    let f = gf(5);
    let hyperbolic_plus_null = BilinearMap::new(f, Sign::Alternating, 3, vec![m(5, &[&[0, 1, 0], &[-1, 0, 0], &[0, 0, 0]])]).unwrap();
    assert_eq!(hyperbolic_plus_null.radical().dim(), 1);
    assert_eq!(standard_alternating(5).unwrap().radical().dim(), 0);
    assert_eq!(exchange_map(2, 5).unwrap().radical().dim(), 0);
}

#[test]
fn restrictions() {
    let f = gf(5);
    let b = exterior_square(3, 5).unwrap();
    let all = b.restrict(&Subspace::full(f, 3)).unwrap();
    assert_eq!(all.map, b);
    assert!(all.w_change.is_identity());

    let b4 = central_power(&standard_alternating(5).unwrap(), 2).unwrap();
    let first = Subspace::span(f, 4, &[vec![1, 0, 0, 0], vec![0, 1, 0, 0]]);
    assert_eq!(b4.restrict(&first).unwrap().map, standard_alternating(5).unwrap());

    let line = Subspace::span(f, 2, &[vec![1, 0]]);
    let r = standard_alternating(5).unwrap().restrict(&line).unwrap();
    assert_eq!(r.map.dim_w(), 0);
    assert!(r.degenerate);
}

#[test]
fn direct_sums() {
    let h = standard_alternating(3).unwrap();
    let s = h.direct_sum(&h).unwrap();
    assert_eq!((s.dim_v(), s.dim_w()), (4, 2));
    let s = exterior_square(3, 5).unwrap().direct_sum(&standard_alternating(5).unwrap()).unwrap();
    assert_eq!((s.dim_v(), s.dim_w()), (5, 4));
    let d = dot_form(2, 5, SquareClass::Square).unwrap();
    assert!(d.direct_sum(&standard_alternating(5).unwrap()).is_err());
}

#[test]
fn tensors() {
    let b = exterior_square(3, 5).unwrap();
    assert_eq!(BilinearMap::tensor(&dot_form(1, 5, SquareClass::Square).unwrap(), &b).unwrap(), b);
    for n in 1..4 {
        let t = BilinearMap::tensor(&dot_form(n, 5, SquareClass::Square).unwrap(), &standard_alternating(5).unwrap()).unwrap();
        assert_eq!((t.dim_v(), t.dim_w()), (2 * n, 1));
        assert!(t.is_nondegenerate());
        assert_eq!(t.sign(), Sign::Alternating);
    }
    let t = BilinearMap::tensor(&dot_form(2, 5, SquareClass::Square).unwrap(), &b).unwrap();
    assert_eq!((t.dim_v(), t.dim_w()), (6, 3));
}

#[test]
fn constructors() {
    let b = exterior_square(3, 5).unwrap();
    assert_eq!(b.grams().len(), 3);
    assert!(b.grams().iter().all(|g| g.rows() == 3 && g.cols() == 3));
    assert_eq!(exterior_square(2, 5).unwrap(), standard_alternating(5).unwrap());
    assert!(exterior_square(1, 5).is_err());

    let h = standard_alternating(3).unwrap();
    assert_eq!(h.grams()[0], m(3, &[&[0, 1], &[2, 0]]));
    assert!(h.is_nondegenerate());

    let x = exchange_map(2, 5).unwrap();
    assert_eq!((x.dim_v(), x.dim_w()), (3, 2));
    match exchange_map(1, 5) {
        Err(Error::Invalid(msg)) => assert!(msg.contains("alternating")),
        other => panic!("unexpected {other:?}"),
    }

    assert_eq!(dot_form(2, 5, SquareClass::Square).unwrap().grams()[0], Matrix::identity(gf(5), 2));
    assert_eq!(dot_form(2, 5, SquareClass::Nonsquare).unwrap().grams()[0], Matrix::diagonal(gf(5), &[1, 2]));
    assert_eq!(dot_form(1, 5, SquareClass::Square).unwrap().grams()[0], Matrix::identity(gf(5), 1));
}

#[test]
fn central_powers() {
    let h = standard_alternating(5).unwrap();
    assert_eq!(central_power(&h, 1).unwrap(), h);
    let b = central_power(&h, 2).unwrap();
    assert_eq!((b.dim_v(), b.dim_w()), (4, 1));
    let b = central_power(&exterior_square(3, 5).unwrap(), 4).unwrap();
    assert_eq!((b.dim_v(), b.dim_w()), (12, 3));
}

#[test]
fn pseudo_isometries() {
    let f = gf(5);
    let b = exterior_square(3, 5).unwrap();
    let one3 = Matrix::identity(f, 3);
    assert!(check_pseudo_isometry(&b, &b, &one3, &one3).unwrap());

    // the line similitude [[a, c], [c, -a]] scales the dot product by a^2 + c^2
    let d = dot_form(2, 5, SquareClass::Square).unwrap();
    for (a, c) in [(1i64, 1i64), (2, 2), (2, 0), (0, 1)] {
        let alpha = m(5, &[&[a, c], &[c, -a]]);
        let omega = f.reduce(a * a + c * c);
        assert!(check_pseudo_isometry(&d, &d, &alpha, &Matrix::scalar(f, 1, omega)).unwrap());
    }

    let d = dot_form(2, 5, SquareClass::Nonsquare).unwrap();
    let swap = m(5, &[&[0, 1], &[1, 0]]);
    assert!(!check_pseudo_isometry(&d, &d, &swap, &Matrix::identity(f, 1)).unwrap());
    assert!(check_pseudo_isometry(&d, &d, &Matrix::zeros(f, 2, 2), &Matrix::identity(f, 1)).is_err());
}
