//! Groups of class two and exponent `p` as pairs `(v, w)`.
//!
//! An alternating map `b: V x V -> W` gives the group on `V x W` with
//! `(u, w)(v, x) = (u + v, w + x + b(u, v)/2)`; conversely the commutator map
//! of a presented group is an alternating map. Nothing here enumerates group
//! elements: subgroups are tracked by their image in `V` and their
//! intersection with `W`.

use serde::{Deserialize, Serialize};

use crate::address::{invariants, InvariantsReport};
use crate::bilinear::{BilinearMap, Sign};
use crate::error::{Error, Result};
use crate::frames::{frame, frame_decomposition, FrameFile};
use crate::linalg::{EchelonBasis, Fp, Matrix, Subspace};
use crate::structure::{indecomposability_certificate, FactorType, StarStructure};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupElement {
    pub v: Vec<u64>,
    pub w: Vec<u64>,
}

impl GroupElement {
    pub fn identity(b: &BilinearMap) -> Self {
        GroupElement { v: vec![0; b.dim_v()], w: vec![0; b.dim_w()] }
    }

    pub fn is_identity(&self) -> bool {
        self.v.iter().chain(&self.w).all(|&x| x == 0)
    }

    /// Inverse `(-v, -w)`, valid because `b(v, v) = 0`.
    pub fn inverse(&self, f: Fp) -> Self {
        GroupElement { v: self.v.iter().map(|&x| f.neg(x)).collect(), w: self.w.iter().map(|&x| f.neg(x)).collect() }
    }
}

/// Product in the group of the alternating map `b`. Panics on vectors of the
/// wrong length.
pub fn grp_multiply(b: &BilinearMap, x: &GroupElement, y: &GroupElement) -> GroupElement {
    let f = b.field();
    assert!(x.v.len() == b.dim_v() && y.v.len() == b.dim_v(), "v-part length");
    assert!(x.w.len() == b.dim_w() && y.w.len() == b.dim_w(), "w-part length");
    let half = f.half();
    let buv = b.eval(&x.v, &y.v);
    GroupElement {
        v: x.v.iter().zip(&y.v).map(|(&a, &c)| f.add(a, c)).collect(),
        w: (0..b.dim_w()).map(|k| f.add(f.add(x.w[k], y.w[k]), f.mul(half, buv[k]))).collect(),
    }
}

/// `x^-1 y^-1 x y`, computed with the group law.
pub fn grp_commutator(b: &BilinearMap, x: &GroupElement, y: &GroupElement) -> GroupElement {
    let f = b.field();
    let xi = x.inverse(f);
    let yi = y.inverse(f);
    grp_multiply(b, &grp_multiply(b, &grp_multiply(b, &xi, &yi), x), y)
}

pub fn grp_power(b: &BilinearMap, x: &GroupElement, n: u64) -> GroupElement {
    let mut acc = GroupElement::identity(b);
    for _ in 0..n {
        acc = grp_multiply(b, &acc, x);
    }
    acc
}

/// One commutator relation `[g_i, g_j] = prod z_k^coeffs[k]`, 1-based, `i < j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Commutator {
    pub i: usize,
    pub j: usize,
    pub coeffs: Vec<u64>,
}

/// Presentation of a group of class two and exponent `p` on generators
/// `g_1..g_r` and central `z_1..z_s`. Unlisted pairs commute.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupPresentation {
    pub p: u64,
    pub ngens: usize,
    pub ncentral: usize,
    pub commutators: Vec<Commutator>,
}

impl GroupPresentation {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("presentation serialises")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// The commutator map on `GF(p)^r`, possibly degenerate.
    pub fn commutator_map(&self) -> Result<BilinearMap> {
        let f = Fp::new(self.p)?;
        let r = self.ngens;
        let mut grams = vec![Matrix::zeros(f, r, r); self.ncentral];
        let mut seen = std::collections::HashSet::new();
        for c in &self.commutators {
            if c.i == 0 || c.i >= c.j || c.j > r {
                return Err(Error::invalid(format!("commutator ({}, {}) needs 1 <= i < j <= {r}", c.i, c.j)));
            }
            if !seen.insert((c.i, c.j)) {
                return Err(Error::invalid(format!("commutator ({}, {}) given twice", c.i, c.j)));
            }
            if c.coeffs.len() != self.ncentral {
                return Err(Error::dim(format!(
                    "commutator ({}, {}) has {} coefficients, expected {}",
                    c.i,
                    c.j,
                    c.coeffs.len(),
                    self.ncentral
                )));
            }
            for (k, &x) in c.coeffs.iter().enumerate() {
                let x = f.reduce(x as i64);
                grams[k].set(c.i - 1, c.j - 1, x);
                grams[k].set(c.j - 1, c.i - 1, f.neg(x));
            }
        }
        BilinearMap::new(f, Sign::Alternating, r, grams).map_err(|e| match e {
            Error::NotFull => Error::invalid(
                "commutator vectors do not span the central generators; present the group with z_1..z_s a basis of the derived subgroup",
            ),
            e => e,
        })
    }
}

/// Presentation of the group of an alternating map on the standard bases.
pub fn presentation_of(b: &BilinearMap) -> Result<GroupPresentation> {
    require_alternating(b)?;
    let m = b.dim_v();
    let mut commutators = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            let coeffs: Vec<u64> = b.grams().iter().map(|g| g.get(i, j)).collect();
            if coeffs.iter().any(|&x| x != 0) {
                commutators.push(Commutator { i: i + 1, j: j + 1, coeffs });
            }
        }
    }
    Ok(GroupPresentation { p: b.p(), ngens: m, ncentral: b.dim_w(), commutators })
}

fn require_alternating(b: &BilinearMap) -> Result<()> {
    if b.sign() != Sign::Alternating {
        return Err(Error::invalid("groups need an alternating map"));
    }
    Ok(())
}

/// The commutator map split as (radical) + (non-degenerate part on the
/// standard complement of the radical).
#[derive(Clone, Debug)]
pub struct BiMap {
    pub full: BilinearMap,
    pub map: BilinearMap,
    pub radical: Subspace,
    pub complement: Subspace,
    pub abelian_rank: usize,
}

pub fn bi_from_presentation(pres: &GroupPresentation) -> Result<BiMap> {
    let full = pres.commutator_map()?;
    let radical = full.radical();
    let complement = radical.standard_complement();
    let r = full.restrict(&complement)?;
    if r.degenerate || r.map.dim_w() != full.dim_w() || !r.w_change.is_identity() {
        return Err(Error::internal("restriction to the radical complement changed the codomain"));
    }
    Ok(BiMap { abelian_rank: radical.dim(), full, map: r.map, radical, complement })
}

/// A subgroup tracked by `U`, its image in `V`, and `Z`, its intersection
/// with `W`. Its order is `p^(dim U + dim Z)`.
#[derive(Clone, Debug)]
pub struct SubgroupShape {
    pub image: Subspace,
    pub central: Subspace,
}

impl SubgroupShape {
    pub fn order_exponent(&self) -> usize {
        self.image.dim() + self.central.dim()
    }
}

/// Shape of the subgroup generated by `gens`: `Z` is spanned by `b(U, U)`
/// and the `w`-parts of words whose `v`-parts cancel.
pub fn generated_subgroup(b: &BilinearMap, gens: &[GroupElement]) -> SubgroupShape {
    let f = b.field();
    let (m, w) = (b.dim_v(), b.dim_w());
    let image = Subspace::span(f, m, &gens.iter().map(|g| g.v.clone()).collect::<Vec<_>>());
    let mut central = EchelonBasis::new(f);
    let u = image.vectors();
    for (i, x) in u.iter().enumerate() {
        for y in &u[i + 1..] {
            central.insert(&b.eval(x, y));
        }
    }
    if !gens.is_empty() {
        let vs = Matrix::from_vecs(f, m, &gens.iter().map(|g| g.v.clone()).collect::<Vec<_>>());
        for c in vs.left_kernel() {
            let mut z = vec![0; w];
            for (k, g) in gens.iter().enumerate() {
                crate::linalg::axpy(f, &mut z, c[k], &g.w);
            }
            central.insert(&z);
        }
    }
    SubgroupShape { image, central: Subspace::span(f, w, &central.basis()) }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Member {
    pub generators: Vec<GroupElement>,
    /// `log_p` of the member's order.
    pub order_exponent: usize,
    pub abelian: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CentralDecomposition {
    pub p: u64,
    pub members: Vec<Member>,
    /// Frame of the non-degenerate part the members came from.
    pub frame: Option<FrameFile>,
}

impl CentralDecomposition {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("decomposition serialises")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

#[derive(Clone, Debug)]
pub struct GroupDecomposition {
    pub decomposition: CentralDecomposition,
    pub invariants: Option<InvariantsReport>,
}

/// Central decomposition from a frame of the non-degenerate part, with one
/// order-`p` member per basis vector of the radical. Verified before return.
pub fn central_decomposition(pres: &GroupPresentation, seed: u64) -> Result<GroupDecomposition> {
    let bi = bi_from_presentation(pres)?;
    let f = bi.full.field();
    let zero_w = vec![0; bi.full.dim_w()];
    let mut members = Vec::new();
    let mut frame_file = None;
    let mut report = None;
    if bi.complement.dim() > 0 {
        let s = StarStructure::new(&bi.map)?;
        let fr = frame(&s, seed)?;
        for x in frame_decomposition(&fr) {
            let lifted = x.basis().mul(bi.complement.basis());
            let mut generators: Vec<GroupElement> = lifted.to_rows().into_iter().map(|v| GroupElement { v, w: zero_w.clone() }).collect();
            let shape = generated_subgroup(&bi.full, &generators);
            generators.extend(shape.central.vectors().into_iter().map(|w| GroupElement { v: vec![0; bi.full.dim_v()], w }));
            members.push(Member { generators, order_exponent: shape.order_exponent(), abelian: false });
        }
        report = Some(invariants(&s, &fr, seed)?);
        frame_file = Some(fr.to_file());
    }
    for v in bi.radical.vectors() {
        members.push(Member { generators: vec![GroupElement { v, w: zero_w.clone() }], order_exponent: 1, abelian: true });
    }
    let d = CentralDecomposition { p: f.p(), members, frame: frame_file };
    let check = verify_central_decomposition(pres, &d)?;
    if !check.ok() {
        return Err(Error::Verification(check.violations.join("; ")));
    }
    Ok(GroupDecomposition { decomposition: d, invariants: report })
}

/// Result of checking a proposed central decomposition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionCheck {
    pub commute: bool,
    pub generates: bool,
    pub irredundant: bool,
    pub fully_refined: bool,
    pub violations: Vec<String>,
}

impl DecompositionCheck {
    /// A central decomposition; `fully_refined` is reported separately.
    pub fn is_central_decomposition(&self) -> bool {
        self.commute && self.generates && self.irredundant
    }

    pub fn ok(&self) -> bool {
        self.is_central_decomposition() && self.fully_refined
    }
}

pub fn verify_central_decomposition(pres: &GroupPresentation, d: &CentralDecomposition) -> Result<DecompositionCheck> {
    let b = pres.commutator_map()?;
    if d.p != b.p() {
        return Err(Error::invalid("decomposition and presentation use different primes"));
    }
    for g in d.members.iter().flat_map(|m| &m.generators) {
        if g.v.len() != b.dim_v() || g.w.len() != b.dim_w() || g.v.iter().chain(&g.w).any(|&x| x >= b.p()) {
            return Err(Error::dim("generator does not belong to the presented group"));
        }
    }
    let mut violations = Vec::new();

    let mut commute = true;
    'outer: for (i, a) in d.members.iter().enumerate() {
        for c in &d.members[i + 1..] {
            for x in &a.generators {
                for y in &c.generators {
                    if !grp_commutator(&b, x, y).is_identity() {
                        commute = false;
                        violations.push(format!("member {i} does not commute with a later member"));
                        break 'outer;
                    }
                }
            }
        }
    }

    let all: Vec<GroupElement> = d.members.iter().flat_map(|m| m.generators.clone()).collect();
    let total = generated_subgroup(&b, &all).order_exponent();
    let generates = total == b.dim_v() + b.dim_w();
    if !generates {
        violations.push(format!("members generate a subgroup of order p^{total}, not p^{}", b.dim_v() + b.dim_w()));
    }

    let mut irredundant = true;
    for k in 0..d.members.len() {
        let rest: Vec<GroupElement> =
            d.members.iter().enumerate().filter(|&(i, _)| i != k).flat_map(|(_, m)| m.generators.clone()).collect();
        if generated_subgroup(&b, &rest).order_exponent() == total {
            irredundant = false;
            violations.push(format!("member {k} is redundant"));
        }
    }

    let mut fully_refined = true;
    for (k, m) in d.members.iter().enumerate() {
        let shape = generated_subgroup(&b, &m.generators);
        if shape.order_exponent() == 0 {
            fully_refined = false;
            violations.push(format!("member {k} is trivial"));
            continue;
        }
        if !member_indecomposable(&b, &shape)? {
            fully_refined = false;
            violations.push(format!("member {k} is centrally decomposable"));
        }
    }

    Ok(DecompositionCheck { commute, generates, irredundant, fully_refined, violations })
}

/// A subgroup is centrally indecomposable iff it has order `p`, or it has no
/// abelian direct factor (`Z = b(U, U)` and `b` non-degenerate on `U`) and
/// its commutator map is indecomposable.
fn member_indecomposable(b: &BilinearMap, shape: &SubgroupShape) -> Result<bool> {
    if shape.order_exponent() == 1 {
        return Ok(true);
    }
    let r = b.restrict(&shape.image)?;
    if r.degenerate || r.map.dim_w() != shape.central.dim() {
        return Ok(false);
    }
    Ok(indecomposability_certificate(&r.map)?.indecomposable)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GroupClass {
    Abelian,
    Orthogonal,
    Unitary,
    Exchange,
    Symplectic,
    Decomposable,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupClassification {
    pub class: GroupClass,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub caveats: Vec<String>,
}

/// Verdict on central indecomposability, with the type of the adjoint
/// algebra for indecomposable non-abelian groups.
pub fn classify_group(pres: &GroupPresentation) -> Result<GroupClassification> {
    let bi = bi_from_presentation(pres)?;
    let order = pres.ngens + pres.ncentral;
    let plain = |class| Ok(GroupClassification { class, caveats: Vec::new() });
    if bi.complement.dim() == 0 {
        return plain(if order == 1 { GroupClass::Abelian } else { GroupClass::Decomposable });
    }
    if bi.abelian_rank > 0 {
        return plain(GroupClass::Decomposable);
    }
    let report = indecomposability_certificate(&bi.map)?;
    if !report.indecomposable {
        return plain(GroupClass::Decomposable);
    }
    let class = match report.factors[0].kind {
        FactorType::Orthogonal => GroupClass::Orthogonal,
        FactorType::Unitary => GroupClass::Unitary,
        FactorType::Exchange => GroupClass::Exchange,
        FactorType::Symplectic => GroupClass::Symplectic,
    };
    Ok(GroupClassification { class, caveats: report.caveats })
}
