//! Addresses of frame members in orthogonal *-ideals.
//!
//! For primitive `e`, `f` in one orthogonal ideal with residue field `K`,
//! pick `a` in `eAf` with `lambda = a a*` invertible; the residue of
//! `lambda` lies in `K^x` and its square class does not depend on `a`. The
//! pair is *equal* when that class is a square. Against a fixed reference
//! idempotent, a frame of an ideal of degree `n` has an address `(n - s : s)`
//! where `s` members are unequal to the reference. Frames with different
//! addresses are not isometric.

use serde::{Deserialize, Serialize};

use crate::adjoint::is_isometry;
use crate::bilinear::{central_power, check_pseudo_isometry, exterior_square, BilinearMap};
use crate::error::{Error, Result};
use crate::frames::{
    conjugate_frame, fill_addresses, frame, norm_one_element, relative_class, transport_frames, validate_frame, Frame, TransportOutcome,
};
use crate::linalg::{Fp, Matrix, SquareClass, Subspace};
use crate::rng;
use crate::structure::{FactorType, StarStructure};

/// Outcome of comparing two primitive idempotents.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RelativeAddress {
    Equal,
    Unequal,
    Incomparable,
}

pub fn relative_address(s: &StarStructure, e: &Matrix, f: &Matrix, seed: u64) -> Result<RelativeAddress> {
    Ok(match relative_class(s, e, f, seed)? {
        None => RelativeAddress::Incomparable,
        Some(SquareClass::Square) => RelativeAddress::Equal,
        Some(SquareClass::Nonsquare) => RelativeAddress::Unequal,
    })
}

/// One reference idempotent per orthogonal ideal.
#[derive(Clone, Debug)]
pub struct Reference {
    by_ideal: Vec<Option<Matrix>>,
}

impl Reference {
    /// The first member of each orthogonal ideal of `fr`.
    pub fn from_frame(s: &StarStructure, fr: &Frame) -> Reference {
        let by_ideal = s
            .factors()
            .iter()
            .enumerate()
            .map(|(i, factor)| (factor.kind == FactorType::Orthogonal).then(|| fr.idempotents[fr.members_of(i)[0]].clone()))
            .collect();
        Reference { by_ideal }
    }

    /// References taken from the frame computed with seed 0, so addresses
    /// against it are comparable across frames of the same map.
    pub fn canonical(s: &StarStructure) -> Result<Reference> {
        Ok(Reference::from_frame(s, &frame(s, 0)?))
    }

    pub fn get(&self, ideal: usize) -> Option<&Matrix> {
        self.by_ideal.get(ideal).and_then(|r| r.as_ref())
    }
}

/// Address `(n - s : s)` of the members of one orthogonal ideal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Address {
    pub ideal: usize,
    pub square: usize,
    pub nonsquare: usize,
}

impl Address {
    pub fn n(&self) -> usize {
        self.square + self.nonsquare
    }

    /// `(n - s : s)` and `(s : n - s)` identified, larger part first.
    pub fn normalized(&self) -> (usize, usize) {
        (self.square.max(self.nonsquare), self.square.min(self.nonsquare))
    }
}

/// Square classes of all members of orthogonal ideals against `reference`.
pub fn member_classes(s: &StarStructure, fr: &Frame, reference: &Reference, seed: u64) -> Result<Vec<Option<SquareClass>>> {
    (0..fr.len())
        .map(|k| match reference.get(fr.ideals[k]) {
            None => Ok(None),
            Some(r) => relative_class(s, r, &fr.idempotents[k], rng::child(seed, k as u64)),
        })
        .collect()
}

pub fn address_multiset(s: &StarStructure, fr: &Frame, reference: &Reference, seed: u64) -> Result<Vec<Address>> {
    let classes = member_classes(s, fr, reference, seed)?;
    Ok(s.factors()
        .iter()
        .enumerate()
        .filter(|(_, f)| f.kind == FactorType::Orthogonal)
        .map(|(i, _)| {
            let members = fr.members_of(i);
            let nonsquare = members.iter().filter(|&&k| classes[k] == Some(SquareClass::Nonsquare)).count();
            Address { ideal: i, square: members.len() - nonsquare, nonsquare }
        })
        .collect())
}

/// Product of the member addresses: a nonsquare iff `s` is odd.
pub fn discriminant(a: &Address) -> SquareClass {
    if a.nonsquare % 2 == 1 {
        SquareClass::Nonsquare
    } else {
        SquareClass::Square
    }
}

/// Number of addresses `(n - s : s)`, `0 <= s <= n`, with the given
/// discriminant.
pub fn count_addresses(n: usize, disc: SquareClass) -> usize {
    let c = usize::from(disc == SquareClass::Nonsquare);
    if n < c {
        0
    } else {
        1 + (n - c) / 2
    }
}

/// Groups the values `s` into classes under pseudo-isometry: `s` and `n - s`
/// merge when `n` is even, otherwise every class is a singleton.
pub fn pseudo_orbit_classes(n: usize, values: &[usize]) -> Vec<Vec<usize>> {
    let mut sorted: Vec<usize> = values.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let mut out: Vec<Vec<usize>> = Vec::new();
    for s in sorted {
        let partner = n.checked_sub(s);
        if let Some(class) = out.iter_mut().find(|c| n.is_multiple_of(2) && partner.is_some_and(|t| c.contains(&t))) {
            class.push(s);
        } else {
            out.push(vec![s]);
        }
    }
    out
}

/// `(alpha, beta)` with `alpha^2 + beta^2` a nonsquare, least in lexicographic
/// order.
pub fn nonsquare_sum_of_squares(f: Fp) -> (u64, u64, u64) {
    for alpha in 0..f.p() {
        for beta in 1..f.p() {
            let w = f.add(f.mul(alpha, alpha), f.mul(beta, beta));
            if w != 0 && !f.is_square(w) {
                return (alpha, beta, w);
            }
        }
    }
    unreachable!("every odd prime field has a nonsquare sum of two squares")
}

/// A frame with changed address, and the scalar `omega` of the plane
/// similitudes used.
#[derive(Clone, Debug)]
pub struct Readdressed {
    pub frame: Frame,
    pub multiplier: u64,
}

/// Changes the address of ideal `ideal` to `(n - target : target)` against
/// `reference` by replacing pairs `e, e'` of equal address with
/// `omega^-1 psi e psi`, `omega^-1 psi e' psi`, where
/// `psi = alpha e + beta (a + a*) - alpha e'` for a norm-one `a` in `eAe'`
/// satisfies `psi^2 = omega (e + e')`. Both members change class. The target must have the same parity.
pub fn readdress(s: &StarStructure, fr: &Frame, ideal: usize, target: usize, reference: &Reference, seed: u64) -> Result<Readdressed> {
    let factor = s.factors().get(ideal).ok_or_else(|| Error::invalid("no such ideal"))?;
    if factor.kind != FactorType::Orthogonal {
        return Err(Error::invalid("only orthogonal ideals carry addresses"));
    }
    let f = s.field();
    let degree = (factor.q as f64).log(f.p() as f64).round() as u32;
    if degree.is_multiple_of(2) {
        return Err(Error::invalid("residue field of even degree: scalars from GF(p) cannot change the address"));
    }
    let members = fr.members_of(ideal);
    let n = members.len();
    let mut classes = member_classes(s, fr, reference, seed)?;
    let current = members.iter().filter(|&&k| classes[k] == Some(SquareClass::Nonsquare)).count();
    if target > n || !(target + current).is_multiple_of(2) {
        return Err(Error::invalid(format!("address ({}:{target}) has the wrong parity or size for n = {n}", n.saturating_sub(target))));
    }
    let (alpha, beta, omega) = nonsquare_sum_of_squares(f);
    let inv_omega = f.inv_nz(omega);
    let adj = s.adjoint();
    let mut out = fr.clone();
    let mut cur = current;
    let mut step = 0u64;
    while cur != target {
        let from = if target > cur { SquareClass::Square } else { SquareClass::Nonsquare };
        let pool: Vec<usize> = members.iter().copied().filter(|&k| classes[k] == Some(from)).take(2).collect();
        let [k, l] = pool[..] else {
            return Err(Error::internal("not enough members to flip"));
        };
        let (e, e2) = (out.idempotents[k].clone(), out.idempotents[l].clone());
        let a = norm_one_element(s, &e, &e2, rng::child(seed, 1000 + step))?
            .ok_or_else(|| Error::internal("equal-address pair has no norm-one element"))?;
        let psi = e.scale(alpha).add(&a.add(&adj.star(&a)?).scale(beta)).sub(&e2.scale(alpha));
        if psi.mul(&psi) != e.add(&e2).scale(omega) {
            return Err(Error::internal("plane similitude check failed"));
        }
        out.idempotents[k] = psi.mul(&e).mul(&psi).scale(inv_omega);
        out.idempotents[l] = psi.mul(&e2).mul(&psi).scale(inv_omega);
        let flipped = from.times(SquareClass::Nonsquare);
        classes[k] = Some(flipped);
        classes[l] = Some(flipped);
        cur = if target > cur { cur + 2 } else { cur - 2 };
        step += 1;
    }
    fill_addresses(s, &mut out, seed)?;
    validate_frame(s, &out)?;
    let check = member_classes(s, &out, reference, rng::child(seed, 7))?;
    let got = members.iter().filter(|&&k| check[k] == Some(SquareClass::Nonsquare)).count();
    if got != target {
        return Err(Error::Verification(format!("readdressed frame has {got} unequal members, expected {target}")));
    }
    Ok(Readdressed { frame: out, multiplier: omega })
}

/// Coarsening of a frame by an isometric involution `rho` that swaps paired
/// members and fixes the rest.
#[derive(Clone, Debug)]
pub struct SemiRefinement {
    pub members: Vec<Subspace>,
    /// Frame positions merged into each member (one or two).
    pub parts: Vec<Vec<usize>>,
    /// Frame positions fixed by `rho`.
    pub fixed: Vec<usize>,
    /// Classes of the fixed members against the reference.
    pub fixed_classes: Vec<Option<SquareClass>>,
    pub rho: Matrix,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SemiRefinementFile {
    pub members: Vec<Vec<Vec<u64>>>,
    pub parts: Vec<Vec<usize>>,
    pub fixed: Vec<usize>,
    pub fixed_address: Vec<Option<SquareClass>>,
    pub rho: Vec<Vec<u64>>,
}

impl SemiRefinement {
    pub fn to_file(&self) -> SemiRefinementFile {
        SemiRefinementFile {
            members: self.members.iter().map(|x| x.vectors()).collect(),
            parts: self.parts.clone(),
            fixed: self.fixed.clone(),
            fixed_address: self.fixed_classes.clone(),
            rho: self.rho.to_rows(),
        }
    }
}

/// Pairs equal-address members of each orthogonal ideal; leftovers (at most
/// one per class) and members of other ideals stay fixed.
pub fn semirefine(s: &StarStructure, fr: &Frame, reference: &Reference, seed: u64) -> Result<SemiRefinement> {
    let f = s.field();
    let m = s.map().dim_v();
    let adj = s.adjoint();
    let classes = member_classes(s, fr, reference, seed)?;
    let mut parts: Vec<Vec<usize>> = Vec::new();
    let mut fixed = Vec::new();
    let mut rho = Matrix::zeros(f, m, m);
    for (i, factor) in s.factors().iter().enumerate() {
        let members = fr.members_of(i);
        if factor.kind != FactorType::Orthogonal {
            for k in members {
                fixed.push(k);
                parts.push(vec![k]);
                rho = rho.add(&fr.idempotents[k]);
            }
            continue;
        }
        for class in [SquareClass::Square, SquareClass::Nonsquare] {
            let pool: Vec<usize> = members.iter().copied().filter(|&k| classes[k] == Some(class)).collect();
            for pair in pool.chunks(2) {
                match *pair {
                    [k, l] => {
                        let a = norm_one_element(s, &fr.idempotents[k], &fr.idempotents[l], rng::child(seed, (k * 131 + l) as u64))?
                            .ok_or_else(|| Error::internal("equal-address pair has no norm-one element"))?;
                        rho = rho.add(&a).add(&adj.star(&a)?);
                        parts.push(vec![k, l]);
                    }
                    [k] => {
                        fixed.push(k);
                        parts.push(vec![k]);
                        rho = rho.add(&fr.idempotents[k]);
                    }
                    _ => unreachable!(),
                }
            }
        }
    }
    if !rho.mul(&rho).is_identity() || !is_isometry(adj, &rho)? {
        return Err(Error::Verification("pairing map is not an isometric involution".into()));
    }
    for part in &parts {
        if let [k, l] = part[..] {
            if rho.mul(&fr.idempotents[k]).mul(&rho) != fr.idempotents[l] {
                return Err(Error::Verification("pairing map does not swap a pair".into()));
            }
        }
    }
    let members = parts
        .iter()
        .map(|ks| Subspace::row_space(&ks.iter().fold(Matrix::zeros(f, m, m), |acc, &k| acc.add(&fr.idempotents[k]))))
        .collect();
    fixed.sort_unstable();
    let fixed_classes = fixed.iter().map(|&k| classes[k]).collect();
    Ok(SemiRefinement { members, parts, fixed, fixed_classes, rho })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AddressEntry {
    pub ideal: usize,
    pub square: usize,
    pub nonsquare: usize,
    pub discriminant: SquareClass,
}

/// Isomorphism invariants of the central decomposition read off a frame.
/// Orders are exponents of `p`; multisets are sorted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantsReport {
    pub p: u64,
    pub member_count: usize,
    pub ideal_counts: Vec<usize>,
    pub member_orders: Vec<usize>,
    pub center_orders: Vec<usize>,
    pub addresses: Vec<AddressEntry>,
}

impl InvariantsReport {
    /// The part that is the same for every frame: everything except which
    /// address each orthogonal ideal realises (discriminants are kept).
    pub fn frame_independent(&self) -> InvariantsReport {
        let mut out = self.clone();
        for a in &mut out.addresses {
            a.square += a.nonsquare;
            a.nonsquare = 0;
        }
        out
    }
}

/// Invariants of `fr`, with addresses against the canonical reference.
pub fn invariants(s: &StarStructure, fr: &Frame, seed: u64) -> Result<InvariantsReport> {
    let reference = Reference::canonical(s)?;
    let b = s.map();
    let mut member_orders = Vec::new();
    let mut center_orders = Vec::new();
    for x in crate::frames::frame_decomposition(fr) {
        let r = b.restrict(&x)?;
        member_orders.push(x.dim() + r.map.dim_w());
        center_orders.push(r.map.radical().dim() + r.map.dim_w());
    }
    member_orders.sort_unstable();
    center_orders.sort_unstable();
    let ideal_counts = (0..s.factors().len()).map(|i| fr.members_of(i).len()).collect();
    let addresses = address_multiset(s, fr, &reference, seed)?
        .into_iter()
        .map(|a| AddressEntry { ideal: a.ideal, square: a.square, nonsquare: a.nonsquare, discriminant: discriminant(&a) })
        .collect();
    Ok(InvariantsReport { p: b.p(), member_count: fr.len(), ideal_counts, member_orders, center_orders, addresses })
}

/// Outcome of checking the many-orbits family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManyOrbitsReport {
    pub n: usize,
    pub p: u64,
    pub isometry_orbits: usize,
    pub aut_orbit_classes: usize,
    /// `s` for each frame `H_m`: address `(2n - s : s)`.
    pub addresses: Vec<usize>,
    pub expected_isometry_orbits: usize,
    pub expected_aut_orbit_classes: usize,
}

impl ManyOrbitsReport {
    pub fn ok(&self) -> bool {
        self.isometry_orbits == self.expected_isometry_orbits && self.aut_orbit_classes == self.expected_aut_orbit_classes
    }
}

/// The map `2n` copies of the exterior square of `GF(p)^3` over a common
/// codomain.
pub fn many_orbits_map(n: usize, p: u64) -> Result<BilinearMap> {
    central_power(&exterior_square(3, p)?, 2 * n)
}

/// The block frame `H_0` of [`many_orbits_map`] and its readdressings
/// `H_m` with address `(2n - 2m : 2m)` against the first block, which is
/// returned as the reference.
pub fn many_orbits_frames(s: &StarStructure, n: usize, seed: u64) -> Result<(Vec<Frame>, Reference)> {
    let f = s.field();
    let m = s.map().dim_v();
    let blocks: Vec<Matrix> = (0..m / 3)
        .map(|i| {
            let mut e = Matrix::zeros(f, m, m);
            for j in 0..3 {
                e.set(3 * i + j, 3 * i + j, 1);
            }
            e
        })
        .collect();
    let h0 = Frame::from_idempotents(s, blocks, seed)?;
    let reference = Reference::from_frame(s, &h0);
    let ideal = h0.ideals[0];
    let mut family = vec![h0.clone()];
    for k in 1..=n {
        family.push(readdress(s, &h0, ideal, 2 * k, &reference, rng::child(seed, k as u64))?.frame);
    }
    Ok((family, reference))
}

/// Builds the frames `H_0, ..., H_n` (`H_m` with address `(2n - 2m : 2m)`),
/// checks that no two are isometric, that each is isometric to a
/// readdressed random frame of the same address, and that the
/// pseudo-isometry made of plane similitudes on consecutive copies carries
/// `H_m` to a frame isometric to `H_(n-m)`.
pub fn verify_many_orbits(n: usize, p: u64, seed: u64) -> Result<ManyOrbitsReport> {
    if n == 0 {
        return Err(Error::invalid("n must be positive"));
    }
    let b = many_orbits_map(n, p)?;
    let s = StarStructure::new(&b)?;
    let f = s.field();
    let m = b.dim_v();
    let (family, reference) = many_orbits_frames(&s, n, seed)?;
    let ideal = family[0].ideals[0];
    let mut addresses = Vec::new();
    for h in &family {
        let a = address_multiset(&s, h, &reference, seed)?;
        addresses.push(a[0].nonsquare);
    }
    for (i, x) in family.iter().enumerate() {
        for y in &family[i + 1..] {
            if let TransportOutcome::Isometry(_) = transport_frames(&s, x, y, seed)? {
                return Err(Error::Verification("frames of different address are isometric".into()));
            }
        }
    }
    for (k, h) in family.iter().enumerate() {
        let random = frame(&s, rng::child(seed, 500 + k as u64))?;
        let target = readdress(&s, &random, ideal, 2 * k, &reference, rng::child(seed, 600 + k as u64))?.frame;
        match transport_frames(&s, h, &target, seed)? {
            TransportOutcome::Isometry(_) => {}
            TransportOutcome::AddressObstruction { .. } => {
                return Err(Error::Verification(format!("frames with address index {k} are not isometric")));
            }
        }
    }
    let isometry_orbits = {
        let mut a = addresses.clone();
        a.sort_unstable();
        a.dedup();
        a.len()
    };

    // plane similitude [[alpha, beta], [beta, -alpha]] (x) 1 on each pair of copies
    let (alpha, beta, omega) = nonsquare_sum_of_squares(f);
    let mut phi = Matrix::zeros(f, m, m);
    for j in 0..n {
        let (x, y) = (6 * j, 6 * j + 3);
        for t in 0..3 {
            phi.set(x + t, x + t, alpha);
            phi.set(x + t, y + t, beta);
            phi.set(y + t, x + t, beta);
            phi.set(y + t, y + t, f.neg(alpha));
        }
    }
    let scale = Matrix::scalar(f, b.dim_w(), omega);
    if !check_pseudo_isometry(&b, &b, &phi, &scale)? {
        return Err(Error::Verification("plane similitudes do not form a pseudo-isometry".into()));
    }
    let mut parent: Vec<usize> = (0..=n).collect();
    for (k, h) in family.iter().enumerate() {
        let moved = conjugate_frame(&s, h, &phi, seed)?;
        let a = address_multiset(&s, &moved, &reference, seed)?[0].nonsquare;
        let Some(j) = addresses.iter().position(|&x| x == a) else {
            return Err(Error::Verification("pseudo-isometric image has an unexpected address".into()));
        };
        if let TransportOutcome::AddressObstruction { .. } = transport_frames(&s, &moved, &family[j], seed)? {
            return Err(Error::Verification("pseudo-isometric image is not isometric to its address class".into()));
        }
        let (rk, rj) = (find(&mut parent, k), find(&mut parent, j));
        parent[rk] = rj;
    }
    let aut_orbit_classes = (0..=n).filter(|&k| find(&mut parent, k) == k).count();
    Ok(ManyOrbitsReport {
        n,
        p,
        isometry_orbits,
        aut_orbit_classes,
        addresses,
        expected_isometry_orbits: n + 1,
        expected_aut_orbit_classes: 1 + n / 2,
    })
}

fn find(parent: &mut [usize], k: usize) -> usize {
    let mut r = k;
    while parent[r] != r {
        r = parent[r];
    }
    parent[k] = r;
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bilinear::{dot_form, BilinearMap};

    #[test]
    fn counts_and_discriminants() {
        assert_eq!(count_addresses(4, SquareClass::Square), 3);
        assert_eq!(count_addresses(4, SquareClass::Nonsquare), 2);
        assert_eq!(count_addresses(3, SquareClass::Nonsquare), 2);
        let a = Address { ideal: 0, square: 2, nonsquare: 1 };
        assert_eq!(discriminant(&a), SquareClass::Nonsquare);
    }

    #[test]
    fn pseudo_orbits_merge_complements() {
        assert_eq!(pseudo_orbit_classes(4, &[0, 2, 4]), vec![vec![0, 4], vec![2]]);
        assert_eq!(pseudo_orbit_classes(3, &[1, 3]), vec![vec![1], vec![3]]);
    }

    #[test]
    fn parity_is_enforced() {
        let b = dot_form(3, 5, SquareClass::Square).unwrap();
        let s = StarStructure::new(&b).unwrap();
        let fr = frame(&s, 0).unwrap();
        let r = Reference::from_frame(&s, &fr);
        let cur = address_multiset(&s, &fr, &r, 0).unwrap()[0].nonsquare;
        assert!(readdress(&s, &fr, 0, cur + 1, &r, 0).is_err());
        let target = if cur >= 2 { cur - 2 } else { cur + 2 };
        let moved = readdress(&s, &fr, 0, target, &r, 0).unwrap();
        assert_eq!(address_multiset(&s, &moved.frame, &r, 0).unwrap()[0].nonsquare, target);
    }

    #[test]
    fn semirefine_three_members() {
        let d = dot_form(3, 5, SquareClass::Nonsquare).unwrap();
        let b = BilinearMap::tensor(&d, &exterior_square(3, 5).unwrap()).unwrap();
        let s = StarStructure::new(&b).unwrap();
        let fr = frame(&s, 4).unwrap();
        let r = Reference::from_frame(&s, &fr);
        let disc = discriminant(&address_multiset(&s, &fr, &r, 0).unwrap()[0]);
        let sr = semirefine(&s, &fr, &r, 0).unwrap();
        assert_eq!(sr.fixed.len(), 1);
        assert_eq!(sr.fixed_classes, vec![Some(disc)]);
        assert_eq!(sr.members.len(), 2);
    }

    #[test]
    fn many_orbits_small() {
        let r = verify_many_orbits(1, 5, 0).unwrap();
        assert!(r.ok(), "{r:?}");
        assert_eq!(r.addresses, vec![0, 2]);
    }
}
