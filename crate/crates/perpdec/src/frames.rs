//! Frames of `Sym(b)`: maximal sets of pairwise orthogonal primitive
//! self-adjoint idempotents summing to 1. A frame `{e_1, ..., e_s}` gives the
//! fully refined orthogonal decomposition `V = V e_1 ⊥ ... ⊥ V e_s`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::adjoint::{adjoint_algebra, is_isometry, SymBasis};
use crate::bilinear::{BilinearMap, Restriction};
use crate::error::{Error, Result};
use crate::linalg::{
    crt_idempotents, factor_poly, min_poly, min_poly_by_powers, square_class_in, Matrix, Poly, SpanSolver, SquareClass, Subspace,
};
use crate::rng;
use crate::structure::{FactorType, StarStructure};

/// A frame, each idempotent tagged with its *-ideal and, for orthogonal
/// ideals, its address relative to the first idempotent of that ideal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frame {
    pub idempotents: Vec<Matrix>,
    pub ideals: Vec<usize>,
    pub addresses: Vec<Option<SquareClass>>,
}

/// Wire format: idempotents as flattened row-major matrices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrameFile {
    pub idempotents: Vec<Vec<u64>>,
    pub ideal: Vec<usize>,
    pub address: Vec<Option<SquareClass>>,
}

impl Frame {
    pub fn len(&self) -> usize {
        self.idempotents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.idempotents.is_empty()
    }

    /// Positions of the members in ideal `i`.
    pub fn members_of(&self, i: usize) -> Vec<usize> {
        (0..self.len()).filter(|&k| self.ideals[k] == i).collect()
    }

    pub fn to_file(&self) -> FrameFile {
        FrameFile {
            idempotents: self.idempotents.iter().map(|e| e.as_flat().to_vec()).collect(),
            ideal: self.ideals.clone(),
            address: self.addresses.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("frame serialises")
    }

    /// Parses and fully validates a frame of `s`.
    pub fn from_file(s: &StarStructure, file: &FrameFile) -> Result<Frame> {
        let f = s.field();
        let m = s.map().dim_v();
        if file.ideal.len() != file.idempotents.len() || file.address.len() != file.idempotents.len() {
            return Err(Error::dim("frame fields have different lengths"));
        }
        let idempotents = file
            .idempotents
            .iter()
            .map(|v| {
                if v.len() != m * m || v.iter().any(|&x| x >= f.p()) {
                    return Err(Error::dim(format!("idempotent must have {} entries in [0, p)", m * m)));
                }
                Ok(Matrix::from_flat(f, m, m, v.clone()))
            })
            .collect::<Result<Vec<_>>>()?;
        let frame = Frame { idempotents, ideals: file.ideal.clone(), addresses: file.address.clone() };
        validate_frame(s, &frame)?;
        Ok(frame)
    }

    pub fn from_json(s: &StarStructure, text: &str) -> Result<Frame> {
        Frame::from_file(s, &serde_json::from_str(text)?)
    }

    /// Frame with the given members, in the given order: ideal tags and
    /// addresses are computed, then the frame is validated.
    pub fn from_idempotents(s: &StarStructure, idempotents: Vec<Matrix>, seed: u64) -> Result<Frame> {
        let ideals = idempotents.iter().map(|e| s.ideal_of(e)).collect::<Result<Vec<_>>>()?;
        let mut fr = Frame { addresses: vec![None; idempotents.len()], idempotents, ideals };
        validate_frame(s, &fr)?;
        fill_addresses(s, &mut fr, seed)?;
        Ok(fr)
    }
}

/// Checks that `frame` is a frame of `Sym(b)` with correct ideal tags.
pub fn validate_frame(s: &StarStructure, frame: &Frame) -> Result<()> {
    let f = s.field();
    let m = s.map().dim_v();
    let a = s.adjoint();
    let mut total = Matrix::zeros(f, m, m);
    for (k, e) in frame.idempotents.iter().enumerate() {
        if a.star(e).ok().as_ref() != Some(e) {
            return Err(Error::invalid(format!("member {k} is not self-adjoint")));
        }
        if e.mul(e) != *e || e.is_zero() {
            return Err(Error::invalid(format!("member {k} is not a nonzero idempotent")));
        }
        for (l, g) in frame.idempotents.iter().enumerate().skip(k + 1) {
            if !e.mul(g).is_zero() {
                return Err(Error::invalid(format!("members {k} and {l} are not orthogonal")));
            }
        }
        if s.ideal_of(e)? != frame.ideals[k] {
            return Err(Error::invalid(format!("member {k} has the wrong ideal tag")));
        }
        let part = b_restricted(s.map(), e)?;
        if !StarStructure::new(&part.map)?.is_indecomposable() {
            return Err(Error::invalid(format!("member {k} is not primitive")));
        }
        total = total.add(e);
    }
    if !total.is_identity() {
        return Err(Error::invalid("frame members do not sum to 1"));
    }
    Ok(())
}

fn b_restricted(b: &BilinearMap, e: &Matrix) -> Result<Restriction> {
    b.restrict(&Subspace::row_space(e))
}

/// Idempotents `e_i(x)` of the primary decomposition of the minimal polynomial
/// of `x`, one per distinct irreducible factor.
pub fn primary_idempotents(x: &Matrix, seed: u64) -> Result<Vec<Matrix>> {
    let mp = min_poly(x)?;
    let fac = factor_poly(&mp, seed)?;
    let parts: Vec<Poly> = fac.iter().map(|(g, k)| (1..*k).fold(g.clone(), |acc, _| acc.mul(g))).collect();
    Ok(crt_idempotents(&mp, &parts).iter().map(|e| e.eval_matrix(x)).collect())
}

/// A proper self-adjoint idempotent of `Sym(b)` from the minimal polynomial of
/// random elements. `None` only when the structure certificate confirms that
/// no proper idempotent exists.
pub fn find_proper_idempotent(s: &StarStructure, seed: u64) -> Result<Option<Matrix>> {
    let sym = s.sym();
    let budget = 8 * sym.dim().max(1);
    let mut rng = rng::stream(seed, 1);
    for round in 0..32 {
        for attempt in 0..budget {
            let x = sym.random_element(&mut rng);
            let parts = primary_idempotents(&x, rng::child(seed, (round * budget + attempt) as u64))?;
            if parts.len() >= 2 {
                return Ok(Some(parts.into_iter().next().expect("two parts")));
            }
        }
        if s.is_indecomposable() {
            return Ok(None);
        }
    }
    Err(Error::Budget("no proper idempotent found in a decomposable algebra".into()))
}

/// `e <- 3e^2 - 2e^3` until idempotent. Requires `e^2 - e` nilpotent.
pub fn lift_idempotent(e_hat: &Matrix) -> Result<Matrix> {
    if !e_hat.is_square() {
        return Err(Error::dim("idempotent lift of a non-square matrix"));
    }
    if !e_hat.mul(e_hat).sub(e_hat).is_nilpotent() {
        return Err(Error::invalid("element is not idempotent modulo a nil ideal"));
    }
    let mut e = e_hat.clone();
    for _ in 0..64 {
        let e2 = e.mul(&e);
        if e2 == e {
            return Ok(e);
        }
        let e3 = e2.mul(&e);
        e = e2.scale(3).sub(&e3.scale(2));
    }
    Err(Error::internal("idempotent lifting did not converge"))
}

/// Lifts `u` with `u^2 - 1` nilpotent to an involution `v`, a polynomial in
/// `u` congruent to it modulo the nil ideal generated by `u^2 - 1`.
pub fn lift_involution(u_hat: &Matrix) -> Result<Matrix> {
    let f = u_hat.field();
    let n = u_hat.rows();
    let one = Matrix::identity(f, n);
    let e = one.add(u_hat).scale(f.half());
    let e = lift_idempotent(&e)?;
    Ok(e.scale(2).sub(&one))
}

/// For self-adjoint idempotents `e` and `e + z` with `z^2 = 0`, the involution
/// `v = 1 - 2e - z` with `v e v = e + z`.
pub fn involution_from_nil(e: &Matrix, z: &Matrix) -> Result<Matrix> {
    let f = e.field();
    let one = Matrix::identity(f, e.rows());
    let g = e.add(z);
    if e.mul(e) != *e || g.mul(&g) != g {
        return Err(Error::invalid("e and e + z must be idempotent"));
    }
    if !z.mul(z).is_zero() {
        return Err(Error::invalid("z must square to zero"));
    }
    let v = one.sub(&e.scale(2)).sub(z);
    if !v.mul(&v).is_identity() || v.mul(e).mul(&v) != g {
        return Err(Error::internal("nil involution check failed"));
    }
    Ok(v)
}

/// One side of a Peirce splitting.
#[derive(Clone, Debug)]
pub struct PeircePart {
    pub space: Subspace,
    pub restriction: Restriction,
    pub jordan: SymBasis,
    /// `idempotent = coord * space.basis()`.
    coord: Matrix,
}

impl PeircePart {
    /// Extends an operator on the part by zero on the complement.
    pub fn lift(&self, x: &Matrix) -> Matrix {
        self.coord.mul(x).mul(self.space.basis())
    }
}

#[derive(Clone, Debug)]
pub struct PeirceSplit {
    pub image: PeircePart,
    pub kernel: PeircePart,
}

/// `V = V e ⊥ V(1 - e)` for a self-adjoint idempotent `e`.
pub fn peirce_split(b: &BilinearMap, e: &Matrix) -> Result<PeirceSplit> {
    let a = adjoint_algebra(b)?;
    if a.star(e)? != *e || e.mul(e) != *e {
        return Err(Error::invalid("not a self-adjoint idempotent"));
    }
    let f = b.field();
    let one = Matrix::identity(f, b.dim_v());
    if e.is_zero() || *e == one {
        return Err(Error::invalid("Peirce splitting needs a proper idempotent"));
    }
    let part = |g: &Matrix| -> Result<PeircePart> {
        let space = Subspace::row_space(g);
        let restriction = b.restrict(&space)?;
        if restriction.degenerate {
            return Err(Error::internal("Peirce part is degenerate"));
        }
        let jordan = adjoint_algebra(&restriction.map)?.sym_basis();
        let solver = SpanSolver::new(f, b.dim_v(), &space.vectors())?;
        let rows: Vec<Vec<u64>> = (0..g.rows()).map(|i| solver.coords(g.row(i)).expect("row in image")).collect();
        let coord = Matrix::from_vecs(f, space.dim(), &rows);
        Ok(PeircePart { space, restriction, jordan, coord })
    };
    let image = part(e)?;
    let kernel = part(&one.sub(e))?;
    for u in image.space.vectors() {
        for v in kernel.space.vectors() {
            if b.eval(&u, &v).iter().any(|&x| x != 0) {
                return Err(Error::internal("Peirce parts are not perpendicular"));
            }
        }
    }
    Ok(PeirceSplit { image, kernel })
}

/// A frame of `Sym(b)`, found by splitting off idempotents and recursing on
/// the Peirce parts. Members are sorted by ideal, then by the RREF basis of
/// `V e`.
pub fn frame(s: &StarStructure, seed: u64) -> Result<Frame> {
    let raw = refine(s, seed)?;
    let mut tagged = raw
        .into_iter()
        .map(|e| Ok((s.ideal_of(&e)?, Subspace::row_space(&e).basis().as_flat().to_vec(), e)))
        .collect::<Result<Vec<_>>>()?;
    tagged.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
    let ideals: Vec<usize> = tagged.iter().map(|t| t.0).collect();
    let idempotents: Vec<Matrix> = tagged.into_iter().map(|t| t.2).collect();
    let mut fr = Frame { addresses: vec![None; idempotents.len()], idempotents, ideals };
    fill_addresses(s, &mut fr, seed)?;
    Ok(fr)
}

fn refine(s: &StarStructure, seed: u64) -> Result<Vec<Matrix>> {
    let m = s.map().dim_v();
    let Some(e) = find_proper_idempotent(s, seed)? else {
        return Ok(vec![Matrix::identity(s.field(), m)]);
    };
    let split = peirce_split(s.map(), &e)?;
    let mut out = Vec::new();
    for (k, part) in [&split.image, &split.kernel].into_iter().enumerate() {
        let sub = StarStructure::new(&part.restriction.map)?;
        for g in refine(&sub, rng::child(seed, k as u64 + 1))? {
            out.push(part.lift(&g));
        }
    }
    Ok(out)
}

/// Addresses relative to the first member of each orthogonal ideal.
pub(crate) fn fill_addresses(s: &StarStructure, fr: &mut Frame, seed: u64) -> Result<()> {
    for (i, factor) in s.factors().iter().enumerate() {
        let members = fr.members_of(i);
        if factor.kind != FactorType::Orthogonal {
            for k in members {
                fr.addresses[k] = None;
            }
            continue;
        }
        let reference = fr.idempotents[members[0]].clone();
        for k in members {
            fr.addresses[k] = relative_class(s, &reference, &fr.idempotents[k], rng::child(seed, k as u64))?;
        }
    }
    Ok(())
}

/// The subspaces `V e` of a frame.
pub fn frame_decomposition(fr: &Frame) -> Vec<Subspace> {
    fr.idempotents.iter().map(Subspace::row_space).collect()
}

/// `e x f` for a random `x` in `Adj(b)`.
fn random_corner(s: &StarStructure, e: &Matrix, f: &Matrix, rng: &mut impl Rng) -> Matrix {
    e.mul(&s.adjoint().random_element(rng)).mul(f)
}

/// An element `lambda = a a*` of `eJe` with `a` in `eAf` and `lambda`
/// invertible in `eAe`. For primitive `e`, `f` in one ideal it exists.
fn corner_norm(s: &StarStructure, e: &Matrix, f: &Matrix, rng: &mut impl Rng) -> Result<(Matrix, Matrix)> {
    let budget = 64 + 8 * s.adjoint().dim();
    for _ in 0..budget {
        let a = random_corner(s, e, f, rng);
        let lam = a.mul(&s.adjoint().star(&a)?);
        if !lam.is_nilpotent() {
            return Ok((a, lam));
        }
    }
    Err(Error::Budget("no invertible corner norm found".into()))
}

/// Square class of `lambda` in the residue field `K` of `e`'s ideal, where
/// `a a* = lambda` for some `a` in `eAf`. `None` when `e`, `f` lie in
/// different ideals. Non-orthogonal ideals have a surjective norm, so every
/// pair is equal there.
pub fn relative_class(s: &StarStructure, e: &Matrix, f: &Matrix, seed: u64) -> Result<Option<SquareClass>> {
    let (ie, jf) = (s.ideal_of(e)?, s.ideal_of(f)?);
    if ie != jf {
        return Ok(None);
    }
    let factor = &s.factors()[ie];
    if factor.kind != FactorType::Orthogonal {
        return Ok(Some(SquareClass::Square));
    }
    let mut rng = rng::stream(seed, 2);
    let (_, lam) = corner_norm(s, e, f, &mut rng)?;
    Ok(Some(square_class_in(&lam, e, factor.q)?))
}

/// Minimal polynomial of `y` in the corner with identity `e`.
fn corner_min_poly(y: &Matrix, e: &Matrix) -> Poly {
    let f = y.field();
    let n = y.rows();
    min_poly_by_powers(f, e.as_flat().to_vec(), y.as_flat().to_vec(), |a, b| {
        Matrix::from_flat(f, n, n, a.to_vec()).mul(&Matrix::from_flat(f, n, n, b.to_vec())).into_flat()
    })
}

/// For `y` invertible in a local commutative algebra `k[y]` with identity
/// `e`, an element `u` of `k[y]` with `u^2 y = e`, or `None` when the residue
/// of `y` is a nonsquare in the residue field of `k[y]`.
pub fn inverse_square_root(y: &Matrix, e: &Matrix, seed: u64) -> Result<Option<Matrix>> {
    let f = y.field();
    let mp = corner_min_poly(y, e);
    let fac = factor_poly(&mp, seed)?;
    if fac.len() != 1 {
        return Err(Error::invalid("element does not generate a local algebra"));
    }
    let (g, mult) = &fac[0];
    if g.coeffs() == [0, 1] {
        return Err(Error::Singular);
    }
    let r = g.degree().expect("irreducible factor");
    let q = f.p().pow(r as u32);
    // semisimple part: y^(q^k) with q^k >= multiplicity
    let mut qk = q;
    while (qk as usize) < *mult {
        qk *= q;
    }
    let ys = y.pow(qk);
    let Some(root) = field_sqrt(&ys, e, q, r, seed)? else {
        return Ok(None);
    };
    // Newton iteration u <- u (3 - y u^2) / 2 from u = 1/sqrt(y_s)
    let mut u = root.pow(q - 2);
    for _ in 0..64 {
        let err = y.mul(&u).mul(&u);
        if err == *e {
            return Ok(Some(u));
        }
        u = u.mul(&e.scale(3).sub(&err)).scale(f.half());
    }
    Err(Error::internal("inverse square root did not converge"))
}

/// Tonelli-Shanks in the field `GF(q) = GF(p)[a]` with identity `e`.
fn field_sqrt(a: &Matrix, e: &Matrix, q: u64, r: usize, seed: u64) -> Result<Option<Matrix>> {
    let f = a.field();
    let neg_e = e.neg();
    if a.pow((q - 1) / 2) != *e {
        return Ok(None);
    }
    let mut qq = q - 1;
    let mut s = 0;
    while qq.is_multiple_of(2) {
        qq /= 2;
        s += 1;
    }
    // a nonresidue among polynomials in a of degree < r
    let mut rng = rng::stream(seed, 3);
    let powers: Vec<Matrix> = (0..r)
        .scan(e.clone(), |acc, _| {
            let cur = acc.clone();
            *acc = acc.mul(a);
            Some(cur)
        })
        .collect();
    let mut z = None;
    for _ in 0..(64 + 4 * q) {
        let cand = powers.iter().fold(Matrix::zeros(f, e.rows(), e.cols()), |acc, x| acc.add_scaled(x, f.random(&mut rng)));
        if !cand.is_zero() && cand.pow((q - 1) / 2) == neg_e {
            z = Some(cand);
            break;
        }
    }
    let z = z.ok_or_else(|| Error::Budget("no nonresidue found".into()))?;
    let mut m = s;
    let mut c = z.pow(qq);
    let mut t = a.pow(qq);
    let mut root = a.pow(qq.div_ceil(2));
    while t != *e {
        let mut i = 0;
        let mut tt = t.clone();
        while tt != *e {
            tt = tt.mul(&tt);
            i += 1;
            if i >= m {
                return Err(Error::internal("Tonelli-Shanks failed"));
            }
        }
        let b = c.pow(1 << (m - i - 1));
        m = i;
        c = b.mul(&b);
        t = t.mul(&c);
        root = root.mul(&b);
    }
    Ok(Some(root))
}

/// An element `a` of `eAf` with `a a* = e` (hence `a* a = f`), or `None` when
/// the relative address of `e` and `f` is a nonsquare.
pub fn norm_one_element(s: &StarStructure, e: &Matrix, f: &Matrix, seed: u64) -> Result<Option<Matrix>> {
    let (ie, jf) = (s.ideal_of(e)?, s.ideal_of(f)?);
    if ie != jf {
        return Ok(None);
    }
    let factor = s.factors()[ie].clone();
    let adj = s.adjoint();
    let mut rng = rng::stream(seed, 4);
    let (a0, lam) = corner_norm(s, e, f, &mut rng)?;
    let orthogonal = factor.kind == FactorType::Orthogonal;
    if orthogonal && square_class_in(&lam, e, factor.q)? == SquareClass::Nonsquare {
        return Ok(None);
    }
    let budget = 64 + 8 * adj.dim();
    for attempt in 0..budget {
        // s lambda s* lies in eJe; choose s so that it is a square in k[y]
        let sc = if attempt == 0 && orthogonal { e.clone() } else { random_corner(s, e, e, &mut rng) };
        let y = sc.mul(&lam).mul(&adj.star(&sc)?);
        if y.is_nilpotent() {
            continue;
        }
        if let Some(u) = inverse_square_root(&y, e, rng::child(seed, attempt as u64))? {
            let a = u.mul(&sc).mul(&a0);
            if a.mul(&adj.star(&a)?) != *e {
                return Err(Error::internal("norm-one element check failed"));
            }
            return Ok(Some(a));
        }
    }
    Err(Error::Budget("no norm-one element found".into()))
}

/// Isometry carrying one frame onto another.
#[derive(Clone, Debug)]
pub struct Transport {
    pub isometry: Matrix,
    /// `matching[k]` is the member of the target frame matched with member
    /// `k` of the source.
    pub matching: Vec<usize>,
}

/// Result of attempting to transport frames.
#[derive(Clone, Debug)]
pub enum TransportOutcome {
    Isometry(Transport),
    /// Some orthogonal ideal has different address multisets.
    AddressObstruction {
        ideal: usize,
    },
}

/// Finds `phi` with `phi phi* = 1` and `phi^-1 e_k phi = f_matching[k]`.
///
/// Members are matched within each ideal; in orthogonal ideals only members
/// of equal address relative to a common reference may be matched. For each
/// matched pair a norm-one `a_k` in `e_k A f_k` is built and
/// `phi = sum a_k`, which is an isometry because the cross terms vanish.
pub fn transport_frames(s: &StarStructure, src: &Frame, dst: &Frame, seed: u64) -> Result<TransportOutcome> {
    if src.len() != dst.len() {
        return Err(Error::Verification("frames of one map must have the same size".into()));
    }
    let mut matching = vec![usize::MAX; src.len()];
    for (i, factor) in s.factors().iter().enumerate() {
        let (xs, ys) = (src.members_of(i), dst.members_of(i));
        if xs.len() != ys.len() {
            return Err(Error::Verification(format!("ideal {i} has different member counts")));
        }
        if xs.is_empty() {
            continue;
        }
        if factor.kind != FactorType::Orthogonal {
            for (&x, &y) in xs.iter().zip(&ys) {
                matching[x] = y;
            }
            continue;
        }
        let reference = src.idempotents[xs[0]].clone();
        let class = |fr: &Frame, k: usize| {
            relative_class(s, &reference, &fr.idempotents[k], rng::child(seed, 100 + k as u64)).map(|c| c.expect("same ideal"))
        };
        let mut pools: [Vec<usize>; 2] = [vec![], vec![]];
        for &y in &ys {
            pools[(class(dst, y)? == SquareClass::Nonsquare) as usize].push(y);
        }
        let mut used = [0usize; 2];
        for &x in &xs {
            let c = (class(src, x)? == SquareClass::Nonsquare) as usize;
            let Some(&y) = pools[c].get(used[c]) else {
                return Ok(TransportOutcome::AddressObstruction { ideal: i });
            };
            used[c] += 1;
            matching[x] = y;
        }
    }
    let f = s.field();
    let m = s.map().dim_v();
    let mut phi = Matrix::zeros(f, m, m);
    for (k, &l) in matching.iter().enumerate() {
        let a = norm_one_element(s, &src.idempotents[k], &dst.idempotents[l], rng::child(seed, k as u64))?
            .ok_or_else(|| Error::internal("matched pair has unequal address"))?;
        phi = phi.add(&a);
    }
    if !is_isometry(s.adjoint(), &phi)? {
        return Err(Error::Verification("transport is not an isometry".into()));
    }
    let inv = phi.inverse()?;
    for (k, &l) in matching.iter().enumerate() {
        if inv.mul(&src.idempotents[k]).mul(&phi) != dst.idempotents[l] {
            return Err(Error::Verification("transport does not conjugate the frames".into()));
        }
    }
    Ok(TransportOutcome::Isometry(Transport { isometry: phi, matching }))
}

/// Conjugates every member by an invertible `g` (an isometry or a
/// pseudo-isometry of `b` with itself): `e -> g^-1 e g`.
pub fn conjugate_frame(s: &StarStructure, fr: &Frame, g: &Matrix, seed: u64) -> Result<Frame> {
    let inv = g.inverse()?;
    let idempotents: Vec<Matrix> = fr.idempotents.iter().map(|e| inv.mul(e).mul(g)).collect();
    let ideals = idempotents.iter().map(|e| s.ideal_of(e)).collect::<Result<Vec<_>>>()?;
    let mut out = Frame { addresses: vec![None; idempotents.len()], idempotents, ideals };
    fill_addresses(s, &mut out, seed)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bilinear::{central_power, dot_form, exterior_square, standard_alternating};
    use crate::linalg::Fp;

    #[test]
    fn extraspecial_frame_is_two_planes() {
        let b = central_power(&standard_alternating(5).unwrap(), 2).unwrap();
        let s = StarStructure::new(&b).unwrap();
        let fr = frame(&s, 0).unwrap();
        assert_eq!(fr.len(), 2);
        validate_frame(&s, &fr).unwrap();
        for x in frame_decomposition(&fr) {
            let r = b.restrict(&x).unwrap();
            assert_eq!(r.map.dim_v(), 2);
            assert!(!r.degenerate);
        }
    }

    #[test]
    fn indecomposable_has_trivial_frame() {
        let b = exterior_square(3, 5).unwrap();
        let s = StarStructure::new(&b).unwrap();
        assert!(find_proper_idempotent(&s, 0).unwrap().is_none());
        let fr = frame(&s, 0).unwrap();
        assert_eq!(fr.len(), 1);
        assert!(fr.idempotents[0].is_identity());
    }

    #[test]
    fn lifting_an_involution() {
        let f = Fp::new(5).unwrap();
        let z = Matrix::unit(f, 3, 0, 2);
        let u = Matrix::identity(f, 3).add(&z);
        assert!(lift_involution(&u).unwrap().is_identity());
    }

    #[test]
    fn nil_involution() {
        let f = Fp::new(7).unwrap();
        let e = Matrix::unit(f, 2, 0, 0);
        let z = Matrix::unit(f, 2, 0, 1);
        let v = involution_from_nil(&e, &z).unwrap();
        assert_eq!(v, Matrix::from_rows(f, &[vec![-1, -1], vec![0, 1]]).unwrap());
    }

    #[test]
    fn relative_address_of_nonsquare_plane() {
        let b = dot_form(2, 5, SquareClass::Nonsquare).unwrap();
        let s = StarStructure::new(&b).unwrap();
        let f = s.field();
        let (e1, e2) = (Matrix::unit(f, 2, 0, 0), Matrix::unit(f, 2, 1, 1));
        assert_eq!(relative_class(&s, &e1, &e2, 0).unwrap(), Some(SquareClass::Nonsquare));
        assert_eq!(relative_class(&s, &e1, &e1, 0).unwrap(), Some(SquareClass::Square));
        assert!(norm_one_element(&s, &e1, &e2, 0).unwrap().is_none());
    }

    #[test]
    fn transport_between_seeds() {
        let b = central_power(&standard_alternating(3).unwrap(), 3).unwrap();
        let s = StarStructure::new(&b).unwrap();
        let (x, y) = (frame(&s, 1).unwrap(), frame(&s, 2).unwrap());
        match transport_frames(&s, &x, &y, 0).unwrap() {
            TransportOutcome::Isometry(t) => assert!(is_isometry(s.adjoint(), &t.isometry).unwrap()),
            other => panic!("{other:?}"),
        }
    }
}
