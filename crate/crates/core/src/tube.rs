//! Tube algebra of a generalized Haagerup category, its graded extensions and
//! its de-equivariantizations.
//!
//! Every simple object is an endomorphism `alpha_u rho^r` with `r` in `{0, 1}`
//! and `u` in an *automorphism group*: `G` itself (plain), the semidirect
//! product `Z/m x| G` (graded) or `G` acting on the crossed product by `alpha_z`
//! (de-equivariantized, only coset representatives are simple objects).
//! Intertwiner spaces reduce to a short table of base spaces
//! `Hom(alpha_w rho^r, rho^s)` through
//! `Hom(alpha_u rho^r, alpha_v rho^s) = alpha_v(Hom(alpha_{v^-1 u} rho^r, rho^s))`,
//! and every basis vector is a single Cuntz monomial. Products, the involution
//! and `S_0` are evaluated directly from their defining formulas in the Cuntz
//! engine and projected back onto the basis.

use crate::cuntz::{
    letter_t, CuntzAlgebra, CuntzTerm, Decoration, LetterMap, Monomial, MonomialAuto, Word,
    LETTER_S,
};
use crate::ghdata::{Extension, GHData};
use crate::groups::{AbelianGroup, DeequivFrame, GroupAutomorphism, GroupElement};
use crate::numerics::{CScalar, CHOP_TOL, DECOMPOSITION_TOL};
use rustc_hash::FxHashMap;
use std::cell::RefCell;
use std::collections::BTreeMap;
use std::fmt;
use std::rc::Rc;
use thiserror::Error;

mod closed_forms;
mod closed_forms_deequiv;
mod closed_forms_graded;

pub use closed_forms::{check_closed_forms, FamilyReport};

#[derive(Debug, Error)]
pub enum TubeError {
    #[error("projection residual {residual:.3e} in {operation} of {left} and {right}")]
    ProjectionResidual {
        operation: &'static str,
        left: String,
        right: String,
        residual: f64,
    },
    #[error("element is not supported on the diagonal corners")]
    OffDiagonal,
    #[error("invalid configuration: {0}")]
    Config(String),
}

/// Which tube algebra is built.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Flavor {
    Plain,
    Graded,
    Deequiv,
}

/// The group of automorphisms labelling objects, with its action on the
/// Cuntz letters and the conjugation `rho alpha_u = alpha_{kappa(u)} rho`.
struct AutGroup {
    order: usize,
    mul: Vec<usize>,
    inv: Vec<usize>,
    kappa: Vec<usize>,
    autos: Vec<MonomialAuto>,
    /// The element of `G` an automorphism equals, if it lies in `G`.
    inner: Vec<Option<GroupElement>>,
    names: Vec<String>,
}

impl AutGroup {
    fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b]
    }

    fn from_g(data: &GHData, lambda_phase: impl Fn(GroupElement) -> CScalar) -> Self {
        let g = &data.group;
        let n = g.order();
        let letters = crate::cuntz::group_action(data);
        let mut mul = vec![0; n * n];
        for a in g.elements() {
            for b in g.elements() {
                mul[a.0 * n + b.0] = g.add(a, b).0;
            }
        }
        AutGroup {
            order: n,
            mul,
            inv: g.elements().map(|x| g.neg(x).0).collect(),
            kappa: g.elements().map(|x| g.neg(x).0).collect(),
            autos: letters
                .into_iter()
                .enumerate()
                .map(|(i, l)| MonomialAuto {
                    letters: l,
                    lambda_phase: lambda_phase(GroupElement(i)),
                })
                .collect(),
            inner: g.elements().map(Some).collect(),
            names: g.elements().map(|x| g.format(x)).collect(),
        }
    }

    /// `Z/m x| G` with `(i,g)(j,k) = (i+j, theta^{-j}(g) + k)` acting as `gamma^i alpha_g`.
    fn graded(data: &GHData, theta: &crate::groups::GroupAutomorphism, m: usize) -> Self {
        let g = &data.group;
        let n = g.order();
        let order = m * n;
        let base = crate::cuntz::group_action(data);
        let nl = n + 1;
        let mut gamma = LetterMap::identity(nl);
        for x in g.elements() {
            gamma.image[letter_t(x) as usize] = letter_t(theta.apply(x));
        }
        let mut gamma_pows = vec![LetterMap::identity(nl)];
        for i in 1..m {
            gamma_pows.push(gamma.compose(&gamma_pows[i - 1]));
        }
        let theta_inv_pows: Vec<_> = (0..m).map(|j| theta.pow(-(j as i64))).collect();
        let idx = |i: usize, x: GroupElement| i * n + x.0;
        let mut mul = vec![0; order * order];
        let mut inv = vec![0; order];
        let mut kappa = vec![0; order];
        let mut autos = Vec::with_capacity(order);
        let mut inner = Vec::with_capacity(order);
        let mut names = Vec::with_capacity(order);
        for i in 0..m {
            for x in g.elements() {
                let a = idx(i, x);
                for j in 0..m {
                    for y in g.elements() {
                        let prod = idx((i + j) % m, g.add(theta_inv_pows[j].apply(x), y));
                        mul[a * order + idx(j, y)] = prod;
                    }
                }
                kappa[a] = idx(i, g.neg(x));
                autos.push(MonomialAuto {
                    letters: gamma_pows[i].compose(&base[x.0]),
                    lambda_phase: CScalar::new(1.0, 0.0),
                });
                inner.push(if i == 0 { Some(x) } else { None });
                names.push(format!("({},{})", i, g.format(x)));
            }
        }
        for a in 0..order {
            inv[a] = (0..order)
                .find(|&b| mul[a * order + b] == 0)
                .expect("group inverse");
        }
        AutGroup {
            order,
            mul,
            inv,
            kappa,
            autos,
            inner,
            names,
        }
    }
}

/// A simple object `alpha_u rho^r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Object {
    pub u: usize,
    pub rho: bool,
}

/// An endomorphism `alpha_u rho^r` with `r <= 2`, as arises from composing two objects.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
struct Endo {
    u: usize,
    r: u8,
}

/// The printed families of basis elements.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize, serde::Deserialize,
)]
pub enum LabelKind {
    /// `(g k|1|k g)`.
    GroupGroup,
    /// `(g k rho|1|k rho g')`.
    GroupRhoCorner,
    /// `(g k rho|T|k rho h rho)`.
    GroupToRho,
    /// `(h rho k rho|T^*|k rho g)`.
    RhoToGroup,
    /// `(h1 rho k rho|T T^*|k rho h2 rho)`.
    RhoRhoTT,
    /// `(h rho k rho|S S^*|k rho h' rho)`.
    RhoRhoSS,
    /// `(h rho k|1|k h' rho)`.
    RhoGroupUnit,
}

/// A basis element `(source middle|hom|middle target)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BasisLabel {
    pub kind: LabelKind,
    pub source: u16,
    pub middle: u16,
    pub target: u16,
    pub hom: Monomial,
}

/// One canonical isometry `Hom(nu, zeta zeta')`.
#[derive(Debug, Clone, Copy)]
struct Channel {
    nu: u16,
    iso: Monomial,
}

/// Sparse linear combination of basis labels.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TubeElement {
    pub terms: BTreeMap<usize, CScalar>,
}

impl TubeElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(label: usize) -> Self {
        let mut t = Self::zero();
        t.terms.insert(label, CScalar::new(1.0, 0.0));
        t
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, CScalar)>) -> Self {
        let mut t = Self::zero();
        for (l, c) in pairs {
            t.add(l, c);
        }
        t
    }

    pub fn add(&mut self, label: usize, c: CScalar) {
        *self.terms.entry(label).or_default() += c;
    }

    pub fn add_scaled(&mut self, other: &TubeElement, c: CScalar) {
        for (&l, &x) in &other.terms {
            self.add(l, x * c);
        }
    }

    pub fn scaled(&self, c: CScalar) -> TubeElement {
        TubeElement {
            terms: self.terms.iter().map(|(&l, &x)| (l, x * c)).collect(),
        }
    }

    pub fn coefficient(&self, label: usize) -> CScalar {
        self.terms.get(&label).copied().unwrap_or_default()
    }

    /// Remove coefficients below the chop tolerance.
    pub fn chop(&mut self) {
        self.terms.retain(|_, c| c.norm() >= CHOP_TOL);
    }

    pub fn max_abs(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// `max |self - other|` over labels.
    pub fn distance(&self, other: &TubeElement) -> f64 {
        let mut d = self.clone();
        d.add_scaled(other, CScalar::new(-1.0, 0.0));
        d.max_abs()
    }
}

type Sparse = Rc<Vec<(usize, CScalar)>>;

/// The tube algebra with its basis and lazily computed structure constants.
pub struct Tube {
    flavor: Flavor,
    data: GHData,
    alg: CuntzAlgebra,
    auts: AutGroup,
    /// Order-two element for the de-equivariantized flavor.
    z: Option<GroupElement>,
    /// Grading automorphism for the graded flavor.
    theta: Option<GroupAutomorphism>,
    frame: Option<DeequivFrame>,
    objects: Vec<Object>,
    identity: usize,
    dims: Vec<f64>,
    duals: Vec<usize>,
    r_iso: Vec<CuntzTerm>,
    rbar_iso: Vec<CuntzTerm>,
    labels: Vec<BasisLabel>,
    /// Labels of each `(source, middle, target)` triple.
    triples: Vec<Vec<usize>>,
    corners: Vec<Vec<usize>>,
    by_source: Vec<Vec<usize>>,
    channels: Vec<Vec<Channel>>,
    global_dimension: f64,
    rho_cache: RefCell<FxHashMap<(u16, Monomial), Rc<CuntzTerm>>>,
    product_cache: RefCell<FxHashMap<(u32, u32), Sparse>>,
    adjoint_cache: RefCell<FxHashMap<usize, Sparse>>,
    s0_cache: RefCell<FxHashMap<usize, Sparse>>,
}

fn word(ls: &[u8]) -> Word {
    Word::from_letters(ls)
}

impl Tube {
    /// Build the tube algebra for the given data and extension.
    pub fn new(data: &GHData, extension: &Extension) -> Result<Self, TubeError> {
        let g = &data.group;
        let (flavor, auts, decoration, z, object_us) = match extension {
            Extension::Plain => {
                let auts = AutGroup::from_g(data, |_| CScalar::new(1.0, 0.0));
                let us: Vec<usize> = (0..g.order()).collect();
                (Flavor::Plain, auts, None, None, us)
            }
            Extension::Graded(cfg) => {
                let viol = cfg.invariance_violation(data);
                if viol > 1e-9 {
                    return Err(TubeError::Config(format!(
                        "theta does not preserve the data (violation {viol:.3e})"
                    )));
                }
                let auts = AutGroup::graded(data, &cfg.theta, cfg.m);
                let us: Vec<usize> = (0..auts.order).collect();
                (Flavor::Graded, auts, None, None, us)
            }
            Extension::Deequiv(cfg) => {
                if cfg.character_violation(data) > 0.0 {
                    return Err(TubeError::Config(
                        "eps_z is not a character with eps_z(z) = 1".into(),
                    ));
                }
                let zz = cfg.frame.z;
                let auts = AutGroup::from_g(data, |x| CScalar::new(data.eps(zz, x) as f64, 0.0));
                let beta = auts.autos[zz.0].letters.clone();
                let us: Vec<usize> = cfg.frame.reps.iter().map(|r| r.0).collect();
                (
                    Flavor::Deequiv,
                    auts,
                    Some(Decoration::new(2, beta)),
                    Some(zz),
                    us,
                )
            }
        };
        let alg = CuntzAlgebra::new(data, decoration);
        let mut objects: Vec<Object> = object_us
            .iter()
            .map(|&u| Object { u, rho: false })
            .collect();
        objects.extend(object_us.iter().map(|&u| Object { u, rho: true }));
        let dims = objects
            .iter()
            .map(|o| if o.rho { data.d } else { 1.0 })
            .collect::<Vec<_>>();
        let global_dimension = dims.iter().map(|d| d * d).sum();
        let mut tube = Tube {
            flavor,
            data: data.clone(),
            alg,
            auts,
            z,
            theta: match extension {
                Extension::Graded(cfg) => Some(cfg.theta.clone()),
                _ => None,
            },
            frame: match extension {
                Extension::Deequiv(cfg) => Some(cfg.frame.clone()),
                _ => None,
            },
            identity: 0,
            dims,
            duals: Vec::new(),
            r_iso: Vec::new(),
            rbar_iso: Vec::new(),
            labels: Vec::new(),
            triples: Vec::new(),
            corners: Vec::new(),
            by_source: Vec::new(),
            channels: Vec::new(),
            global_dimension,
            objects,
            rho_cache: RefCell::new(FxHashMap::default()),
            product_cache: RefCell::new(FxHashMap::default()),
            adjoint_cache: RefCell::new(FxHashMap::default()),
            s0_cache: RefCell::new(FxHashMap::default()),
        };
        tube.identity = tube
            .objects
            .iter()
            .position(|o| o.u == 0 && !o.rho)
            .expect("identity object");
        tube.build_duals()?;
        tube.build_labels();
        tube.build_channels();
        Ok(tube)
    }

    // ---- objects and intertwiner spaces ----

    fn endo(&self, o: usize) -> Endo {
        let ob = self.objects[o];
        Endo {
            u: ob.u,
            r: ob.rho as u8,
        }
    }

    /// `rho_a rho_b` as `alpha_u rho^r`.
    fn compose(&self, a: Endo, b: Endo) -> Endo {
        let mut v = b.u;
        for _ in 0..a.r {
            v = self.auts.kappa[v];
        }
        Endo {
            u: self.auts.mul(a.u, v),
            r: a.r + b.r,
        }
    }

    /// Base intertwiners `Hom(alpha_g rho^r, rho^s)` in the undecorated algebra.
    fn base_hom_m(&self, x: GroupElement, r: u8, s: u8) -> Vec<Monomial> {
        let g = &self.data.group;
        let zero = x == g.zero();
        let e = Word::EMPTY;
        let t = |y: GroupElement| letter_t(y);
        match (r, s) {
            (0, 0) | (1, 1) if zero => vec![Monomial::ONE],
            (0, 2) if zero => vec![Monomial::new(word(&[LETTER_S]), e, 0)],
            (2, 0) if zero => vec![Monomial::new(e, word(&[LETTER_S]), 0)],
            (1, 2) => vec![Monomial::new(word(&[t(x)]), e, 0)],
            (2, 1) => vec![Monomial::new(e, word(&[t(x)]), 0)],
            (2, 2) => {
                let mut out = Vec::new();
                if zero {
                    out.push(Monomial::new(word(&[LETTER_S]), word(&[LETTER_S]), 0));
                }
                for y in g.elements() {
                    out.push(Monomial::new(word(&[t(y)]), word(&[t(g.add(y, x))]), 0));
                }
                out
            }
            _ => Vec::new(),
        }
    }

    /// `Hom(alpha_w rho^r, rho^s)` including `lambda` components.
    fn base_hom(&self, w: usize, r: u8, s: u8) -> Vec<Monomial> {
        let Some(x) = self.auts.inner[w] else {
            return Vec::new();
        };
        let mut out = self.base_hom_m(x, r, s);
        if let Some(z) = self.z {
            let xz = self.data.group.add(x, z);
            out.extend(
                self.base_hom_m(xz, r, s)
                    .into_iter()
                    .map(|m| Monomial { dec: 1, ..m }),
            );
        }
        out
    }

    /// Monomial basis of `Hom(src, dst)`.
    fn hom_basis(&self, src: Endo, dst: Endo) -> Vec<Monomial> {
        let w = self.auts.mul(self.auts.inv[dst.u], src.u);
        let alpha = &self.auts.autos[dst.u];
        self.base_hom(w, src.r, dst.r)
            .into_iter()
            .map(|m| alpha.apply_monomial(&m).0)
            .collect()
    }

    fn build_duals(&mut self) -> Result<(), TubeError> {
        let id = self.endo(self.identity);
        let n = self.objects.len();
        let mut duals = vec![usize::MAX; n];
        let mut r_iso = vec![CuntzTerm::zero(); n];
        for z in 0..n {
            for nu in 0..n {
                let basis = self.hom_basis(id, self.compose(self.endo(nu), self.endo(z)));
                if !basis.is_empty() {
                    if basis.len() != 1 || duals[z] != usize::MAX {
                        return Err(TubeError::Config(
                            "duality space is not one-dimensional".into(),
                        ));
                    }
                    duals[z] = nu;
                    r_iso[z] = CuntzTerm::monomial(basis[0], CScalar::new(1.0, 0.0));
                }
            }
            if duals[z] == usize::MAX {
                return Err(TubeError::Config(format!(
                    "object {} has no dual in the list",
                    self.object_name(z)
                )));
            }
        }
        // Rbar_z is R_{zbar} rescaled by a phase so that Rbar_z^* rho_z(R_z) = 1/d(z).
        let mut rbar_iso = vec![CuntzTerm::zero(); n];
        for z in 0..n {
            let candidate = &r_iso[duals[z]];
            let pairing = self.alg.mul(
                &self.alg.adjoint(candidate),
                &self.rho_obj_term(z, &r_iso[z]),
            );
            let c = scalar_part(&pairing, self.alg.n_letters());
            let phase = (CScalar::new(1.0 / self.dims[z], 0.0) / c).conj();
            if (phase.norm() - 1.0).abs() > 1e-9 {
                return Err(TubeError::Config(format!(
                    "duality pairing for {} has modulus {}",
                    self.object_name(z),
                    c.norm()
                )));
            }
            rbar_iso[z] = candidate.scaled(phase);
        }
        self.duals = duals;
        self.r_iso = r_iso;
        self.rbar_iso = rbar_iso;
        Ok(())
    }

    fn triple_index(&self, s: usize, m: usize, t: usize) -> usize {
        let n = self.objects.len();
        (s * n + m) * n + t
    }

    fn build_labels(&mut self) {
        let n = self.objects.len();
        let mut labels = Vec::new();
        for s in 0..n {
            for m in 0..n {
                for t in 0..n {
                    let src = self.compose(self.endo(s), self.endo(m));
                    let dst = self.compose(self.endo(m), self.endo(t));
                    for hom in self.hom_basis(src, dst) {
                        let kind = self.kind_of(s, m, t, &hom);
                        labels.push(BasisLabel {
                            kind,
                            source: s as u16,
                            middle: m as u16,
                            target: t as u16,
                            hom,
                        });
                    }
                }
            }
        }
        labels.sort_by_key(|l| (l.kind, l.source, l.middle, l.target, l.hom));
        let mut triples = vec![Vec::new(); n * n * n];
        let mut corners = vec![Vec::new(); n];
        let mut by_source = vec![Vec::new(); n];
        for (i, l) in labels.iter().enumerate() {
            let (s, m, t) = (l.source as usize, l.middle as usize, l.target as usize);
            triples[self.triple_index(s, m, t)].push(i);
            by_source[s].push(i);
            if s == t {
                corners[s].push(i);
            }
        }
        self.labels = labels;
        self.triples = triples;
        self.corners = corners;
        self.by_source = by_source;
    }

    fn kind_of(&self, s: usize, m: usize, t: usize, hom: &Monomial) -> LabelKind {
        let (rs, rm, rt) = (
            self.objects[s].rho,
            self.objects[m].rho,
            self.objects[t].rho,
        );
        match (rs, rm, rt) {
            (false, false, _) => LabelKind::GroupGroup,
            (false, true, false) => LabelKind::GroupRhoCorner,
            (false, true, true) => LabelKind::GroupToRho,
            (true, true, false) => LabelKind::RhoToGroup,
            (true, true, true) => {
                if hom.w.len() == 1 && hom.w.get(0) == LETTER_S {
                    LabelKind::RhoRhoSS
                } else {
                    LabelKind::RhoRhoTT
                }
            }
            (true, false, _) => LabelKind::RhoGroupUnit,
        }
    }

    fn build_channels(&mut self) {
        let n = self.objects.len();
        let mut channels = vec![Vec::new(); n * n];
        for a in 0..n {
            for b in 0..n {
                let prod = self.compose(self.endo(a), self.endo(b));
                for nu in 0..n {
                    for iso in self.hom_basis(self.endo(nu), prod) {
                        channels[a * n + b].push(Channel { nu: nu as u16, iso });
                    }
                }
            }
        }
        self.channels = channels;
    }

    // ---- accessors ----

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn data(&self) -> &GHData {
        &self.data
    }

    pub fn algebra(&self) -> &CuntzAlgebra {
        &self.alg
    }

    pub fn objects(&self) -> &[Object] {
        &self.objects
    }

    pub fn identity_object(&self) -> usize {
        self.identity
    }

    pub fn dim(&self, object: usize) -> f64 {
        self.dims[object]
    }

    pub fn dual(&self, object: usize) -> usize {
        self.duals[object]
    }

    pub fn global_dimension(&self) -> f64 {
        self.global_dimension
    }

    pub fn labels(&self) -> &[BasisLabel] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &BasisLabel {
        &self.labels[i]
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Labels of the corner `A_xi`.
    pub fn corner(&self, object: usize) -> &[usize] {
        &self.corners[object]
    }

    /// Labels whose source object is `object`.
    pub fn labels_from(&self, object: usize) -> &[usize] {
        &self.by_source[object]
    }

    /// Labels `(s m|.|m t)`.
    pub fn labels_of(&self, s: usize, m: usize, t: usize) -> &[usize] {
        &self.triples[self.triple_index(s, m, t)]
    }

    /// Look up a label by its objects and monomial.
    pub fn find_label(&self, s: usize, m: usize, t: usize, hom: &Monomial) -> Option<usize> {
        self.labels_of(s, m, t)
            .iter()
            .copied()
            .find(|&i| self.labels[i].hom == *hom)
    }

    /// Index of the object `alpha_u rho^r`.
    pub fn object_index(&self, u: usize, rho: bool) -> Option<usize> {
        self.objects.iter().position(|o| o.u == u && o.rho == rho)
    }

    /// Automorphism-group element `(i, g)` in the graded flavor, `g` otherwise.
    pub fn aut_element(&self, grade: usize, g: GroupElement) -> usize {
        grade * self.data.n() + g.0
    }

    /// Grade of an object in the graded flavor, `0` otherwise.
    pub fn grade(&self, object: usize) -> usize {
        match self.flavor {
            Flavor::Graded => self.objects[object].u / self.data.n(),
            _ => 0,
        }
    }

    pub fn grading_automorphism(&self) -> Option<&GroupAutomorphism> {
        self.theta.as_ref()
    }

    /// Coset representatives for the de-equivariantized flavor.
    pub fn deequiv_frame(&self) -> Option<&DeequivFrame> {
        self.frame.as_ref()
    }

    pub fn group(&self) -> &AbelianGroup {
        &self.data.group
    }

    pub fn object_name(&self, o: usize) -> String {
        let ob = self.objects[o];
        let name = &self.auts.names[ob.u];
        if ob.rho {
            format!("{name}rho")
        } else {
            name.clone()
        }
    }

    pub fn label_name(&self, i: usize) -> String {
        let l = &self.labels[i];
        format!(
            "({} {}|{:?}|{} {})",
            self.object_name(l.source as usize),
            self.object_name(l.middle as usize),
            l.hom,
            self.object_name(l.middle as usize),
            self.object_name(l.target as usize)
        )
    }

    /// The duality isometry `R_xi` in `Hom(id, rho_xibar rho_xi)`.
    pub fn duality_isometry(&self, object: usize) -> &CuntzTerm {
        &self.r_iso[object]
    }

    /// `rho_object(x)` for an operator of the Cuntz algebra.
    pub fn apply_object(&self, object: usize, x: &CuntzTerm) -> CuntzTerm {
        self.rho_obj_term(object, x)
    }

    /// Operator `sum_l c_l X_l` assembled from the terms of `x` lying in the
    /// triple `(s m|.|m t)`.
    pub fn component(&self, x: &TubeElement, s: usize, m: usize, t: usize) -> CuntzTerm {
        let mut out = CuntzTerm::zero();
        for &l in self.labels_of(s, m, t) {
            let c = x.coefficient(l);
            if c.norm() > 0.0 {
                out.add_term(self.labels[l].hom, c);
            }
        }
        out
    }

    /// Read `x` as a multiple of the identity, returning the scalar and the
    /// size of whatever is left over.
    pub fn as_scalar(&self, x: &CuntzTerm) -> (CScalar, f64) {
        let (coeffs, residual) = project_onto(&self.alg, x, [(0usize, Monomial::ONE)].into_iter());
        (coeffs.first().map(|c| c.1).unwrap_or_default(), residual)
    }

    // ---- Cuntz-level helpers ----

    /// `rho_obj(x)` for a general term.
    fn rho_obj_term(&self, o: usize, t: &CuntzTerm) -> CuntzTerm {
        let e = self.endo(o);
        self.alg.apply_endo(&self.auts.autos[e.u], e.r, t)
    }

    /// `rho_obj(m)` for a monomial, memoised.
    fn rho_obj(&self, o: usize, m: &Monomial) -> Rc<CuntzTerm> {
        let key = (o as u16, *m);
        if let Some(t) = self.rho_cache.borrow().get(&key) {
            return t.clone();
        }
        let t = Rc::new(self.rho_obj_term(o, &CuntzTerm::monomial(*m, CScalar::new(1.0, 0.0))));
        self.rho_cache.borrow_mut().insert(key, t.clone());
        t
    }

    /// Express `z` in the basis of the triple, returning coefficients and the
    /// residual of the fit.
    fn project(&self, z: &CuntzTerm, s: usize, m: usize, t: usize) -> (Vec<(usize, CScalar)>, f64) {
        let basis = self.labels_of(s, m, t);
        project_onto(&self.alg, z, basis.iter().map(|&i| (i, self.labels[i].hom)))
    }

    // ---- structure constants ----

    /// Product of two basis labels, uncached.
    pub fn compute_product(&self, a: usize, b: usize) -> Result<Vec<(usize, CScalar)>, TubeError> {
        let la = self.labels[a];
        let lb = self.labels[b];
        if la.target != lb.source {
            return Ok(Vec::new());
        }
        let (xi, zeta, zeta2, eta2) = (
            la.source as usize,
            la.middle as usize,
            lb.middle as usize,
            lb.target as usize,
        );
        let ry = self.rho_obj(zeta, &lb.hom);
        let n = self.objects.len();
        let mut out: Vec<(usize, CScalar)> = Vec::new();
        for ch in &self.channels[zeta * n + zeta2] {
            let (iso_adj, ph) = self.alg.adjoint_monomial(&ch.iso);
            let mut t1 = self.alg.mul_monomial_left(&iso_adj, &ry);
            if t1.is_empty() {
                continue;
            }
            t1 = self.alg.mul_monomial_right(&t1, &la.hom);
            let rt = self.rho_obj(xi, &ch.iso);
            let mut zt = self.alg.mul(&t1, &rt);
            zt = zt.scaled(ph);
            zt.prune(CHOP_TOL * 1e-3);
            let (coeffs, residual) = self.project(&zt, xi, ch.nu as usize, eta2);
            let scale = coeffs.iter().map(|c| c.1.norm()).fold(1.0, f64::max);
            if residual > DECOMPOSITION_TOL * scale {
                return Err(TubeError::ProjectionResidual {
                    operation: "product",
                    left: self.label_name(a),
                    right: self.label_name(b),
                    residual,
                });
            }
            out.extend(coeffs);
        }
        Ok(merge_sparse(out))
    }

    /// Product of two basis labels, memoised.
    pub fn product_labels(&self, a: usize, b: usize) -> Result<Sparse, TubeError> {
        let key = (a as u32, b as u32);
        if let Some(v) = self.product_cache.borrow().get(&key) {
            return Ok(v.clone());
        }
        let v = Rc::new(self.compute_product(a, b)?);
        self.product_cache.borrow_mut().insert(key, v.clone());
        Ok(v)
    }

    /// Bilinear product of tube elements.
    pub fn product(&self, x: &TubeElement, y: &TubeElement) -> Result<TubeElement, TubeError> {
        let mut out = TubeElement::zero();
        // Group y by source object to skip mismatched corners quickly.
        let mut y_by_source: FxHashMap<u16, Vec<(usize, CScalar)>> = FxHashMap::default();
        for (&l, &c) in &y.terms {
            y_by_source
                .entry(self.labels[l].source)
                .or_default()
                .push((l, c));
        }
        for (&a, &ca) in &x.terms {
            let Some(ys) = y_by_source.get(&self.labels[a].target) else {
                continue;
            };
            for &(b, cb) in ys {
                for &(l, c) in self.product_labels(a, b)?.iter() {
                    out.add(l, ca * cb * c);
                }
            }
        }
        out.chop();
        Ok(out)
    }

    /// Involution of a basis label.
    pub fn compute_adjoint(&self, a: usize) -> Result<Vec<(usize, CScalar)>, TubeError> {
        let l = self.labels[a];
        let (xi, zeta, eta) = (l.source as usize, l.middle as usize, l.target as usize);
        let zbar = self.duals[zeta];
        let rbar_adj = self.alg.adjoint(&self.rbar_iso[zeta]);
        let inner = self.rho_obj_term(xi, &rbar_adj);
        let (xadj, ph) = self.alg.adjoint_monomial(&l.hom);
        let inner = self.alg.mul_monomial_right(&inner, &xadj).scaled(ph);
        let outer = self.rho_obj_term(zbar, &inner);
        let z = self
            .alg
            .mul(&outer, &self.r_iso[zeta])
            .scaled(CScalar::new(self.dims[zeta], 0.0));
        let (coeffs, residual) = self.project(&z, eta, zbar, xi);
        if residual > DECOMPOSITION_TOL * coeffs.iter().map(|c| c.1.norm()).fold(1.0, f64::max) {
            return Err(TubeError::ProjectionResidual {
                operation: "adjoint",
                left: self.label_name(a),
                right: String::new(),
                residual,
            });
        }
        Ok(coeffs)
    }

    pub fn adjoint_label(&self, a: usize) -> Result<Sparse, TubeError> {
        if let Some(v) = self.adjoint_cache.borrow().get(&a) {
            return Ok(v.clone());
        }
        let v = Rc::new(self.compute_adjoint(a)?);
        self.adjoint_cache.borrow_mut().insert(a, v.clone());
        Ok(v)
    }

    /// Antilinear involution of an element.
    pub fn adjoint(&self, x: &TubeElement) -> Result<TubeElement, TubeError> {
        let mut out = TubeElement::zero();
        for (&a, &c) in &x.terms {
            for &(l, v) in self.adjoint_label(a)?.iter() {
                out.add(l, c.conj() * v);
            }
        }
        out.chop();
        Ok(out)
    }

    /// `S_0` of a diagonal label `(xi eta|X|eta xi)`:
    /// `d(xi) (etabar xi|R_eta^* rho_etabar(X rho_xi(Rbar_eta))|xi etabar)`.
    pub fn compute_s0(&self, a: usize) -> Result<Vec<(usize, CScalar)>, TubeError> {
        let l = self.labels[a];
        if l.source != l.target {
            return Err(TubeError::OffDiagonal);
        }
        let (xi, eta) = (l.source as usize, l.middle as usize);
        let ebar = self.duals[eta];
        let inner = self
            .alg
            .mul_monomial_left(&l.hom, &self.rho_obj_term(xi, &self.rbar_iso[eta]));
        let mid = self.rho_obj_term(ebar, &inner);
        let z = self
            .alg
            .mul(&self.alg.adjoint(&self.r_iso[eta]), &mid)
            .scaled(CScalar::new(self.dims[xi], 0.0));
        let (coeffs, residual) = self.project(&z, ebar, xi, ebar);
        if residual > DECOMPOSITION_TOL * coeffs.iter().map(|c| c.1.norm()).fold(1.0, f64::max) {
            return Err(TubeError::ProjectionResidual {
                operation: "S_0",
                left: self.label_name(a),
                right: String::new(),
                residual,
            });
        }
        Ok(coeffs)
    }

    pub fn s0_label(&self, a: usize) -> Result<Sparse, TubeError> {
        if let Some(v) = self.s0_cache.borrow().get(&a) {
            return Ok(v.clone());
        }
        let v = Rc::new(self.compute_s0(a)?);
        self.s0_cache.borrow_mut().insert(a, v.clone());
        Ok(v)
    }

    /// Linear map `S_0` on the diagonal part.
    pub fn s0(&self, x: &TubeElement) -> Result<TubeElement, TubeError> {
        let mut out = TubeElement::zero();
        for (&a, &c) in &x.terms {
            for &(l, v) in self.s0_label(a)?.iter() {
                out.add(l, c * v);
            }
        }
        out.chop();
        Ok(out)
    }

    /// `1_xi = (xi 0|1|0 xi)`.
    pub fn unit_of(&self, object: usize) -> usize {
        self.find_label(object, self.identity, object, &Monomial::ONE)
            .expect("corner unit")
    }

    /// The unit `sum_xi 1_xi`.
    pub fn one(&self) -> TubeElement {
        TubeElement::from_pairs(
            (0..self.objects.len()).map(|o| (self.unit_of(o), CScalar::new(1.0, 0.0))),
        )
    }

    /// Component of `t` in the corner `A_xi`: `d(xi) (xi xibar|R Rbar^*|xibar xi)`.
    pub fn t_component(&self, xi: usize) -> Result<TubeElement, TubeError> {
        let xbar = self.duals[xi];
        let z = self
            .alg
            .mul(&self.r_iso[xi], &self.alg.adjoint(&self.rbar_iso[xi]))
            .scaled(CScalar::new(self.dims[xi], 0.0));
        let (coeffs, residual) = self.project(&z, xi, xbar, xi);
        if residual > DECOMPOSITION_TOL {
            return Err(TubeError::ProjectionResidual {
                operation: "t",
                left: self.object_name(xi),
                right: String::new(),
                residual,
            });
        }
        Ok(TubeElement::from_pairs(coeffs))
    }

    /// The element `t` whose left multiplication is the T-operator.
    pub fn t_element(&self) -> Result<TubeElement, TubeError> {
        let mut t = TubeElement::zero();
        for xi in 0..self.objects.len() {
            t.add_scaled(&self.t_component(xi)?, CScalar::new(1.0, 0.0));
        }
        Ok(t)
    }

    /// Weight `phi(label)`: `d(xi)^2` on corner units, zero elsewhere.
    pub fn phi_label(&self, a: usize) -> f64 {
        let l = &self.labels[a];
        if l.source == l.target && l.middle as usize == self.identity && l.hom == Monomial::ONE {
            let d = self.dims[l.source as usize];
            d * d
        } else {
            0.0
        }
    }

    pub fn phi(&self, x: &TubeElement) -> CScalar {
        x.terms.iter().map(|(&a, &c)| c * self.phi_label(a)).sum()
    }

    /// Number of cached label products.
    pub fn cached_products(&self) -> usize {
        self.product_cache.borrow().len()
    }

    /// Snapshot of all cached structure constants.
    pub fn export_structure(&self) -> StructureTable {
        let conv = |v: &Sparse| {
            v.iter()
                .map(|&(l, c)| (l as u32, c.re, c.im))
                .collect::<Vec<_>>()
        };
        let mut products: Vec<_> = self
            .product_cache
            .borrow()
            .iter()
            .map(|(&(a, b), v)| (a, b, conv(v)))
            .collect();
        products.sort_by_key(|p| (p.0, p.1));
        let mut adjoints: Vec<_> = self
            .adjoint_cache
            .borrow()
            .iter()
            .map(|(&a, v)| (a as u32, conv(v)))
            .collect();
        adjoints.sort_by_key(|p| p.0);
        let mut s0: Vec<_> = self
            .s0_cache
            .borrow()
            .iter()
            .map(|(&a, v)| (a as u32, conv(v)))
            .collect();
        s0.sort_by_key(|p| p.0);
        StructureTable {
            labels: self.labels.len(),
            products,
            adjoints,
            s0,
        }
    }

    /// Load previously computed structure constants into the caches.
    pub fn import_structure(&self, table: &StructureTable) -> Result<(), TubeError> {
        if table.labels != self.labels.len() {
            return Err(TubeError::Config(
                "structure table does not match the basis".into(),
            ));
        }
        let conv = |v: &[(u32, f64, f64)]| {
            Rc::new(
                v.iter()
                    .map(|&(l, re, im)| (l as usize, CScalar::new(re, im)))
                    .collect::<Vec<_>>(),
            )
        };
        let mut pc = self.product_cache.borrow_mut();
        for (a, b, v) in &table.products {
            pc.insert((*a, *b), conv(v));
        }
        let mut ac = self.adjoint_cache.borrow_mut();
        for (a, v) in &table.adjoints {
            ac.insert(*a as usize, conv(v));
        }
        let mut sc = self.s0_cache.borrow_mut();
        for (a, v) in &table.s0 {
            sc.insert(*a as usize, conv(v));
        }
        Ok(())
    }
}

/// Sparse structure constants: products, adjoints and `S_0` images of labels,
/// each as `(label, re, im)` triples.
#[derive(Debug, Clone, Default, serde::Serialize, serde::Deserialize)]
pub struct StructureTable {
    pub labels: usize,
    pub products: Vec<(u32, u32, Vec<(u32, f64, f64)>)>,
    pub adjoints: Vec<(u32, Vec<(u32, f64, f64)>)>,
    pub s0: Vec<(u32, Vec<(u32, f64, f64)>)>,
}

fn merge_sparse(mut v: Vec<(usize, CScalar)>) -> Vec<(usize, CScalar)> {
    v.sort_by_key(|p| p.0);
    let mut out: Vec<(usize, CScalar)> = Vec::with_capacity(v.len());
    for (l, c) in v {
        match out.last_mut() {
            Some(last) if last.0 == l => last.1 += c,
            _ => out.push((l, c)),
        }
    }
    out.retain(|p| p.1.norm() >= CHOP_TOL);
    out
}

/// Scalar `c` with `t = c 1`, read from the canonical form.
fn scalar_part(t: &CuntzTerm, n_letters: usize) -> CScalar {
    let (coeffs, _) = project_onto_n(n_letters, t, [(0usize, Monomial::ONE)].into_iter());
    coeffs.first().map(|c| c.1).unwrap_or_default()
}

fn project_onto(
    alg: &CuntzAlgebra,
    z: &CuntzTerm,
    basis: impl Iterator<Item = (usize, Monomial)>,
) -> (Vec<(usize, CScalar)>, f64) {
    project_onto_n(alg.n_letters(), z, basis)
}

/// Coefficients of `z` against monomials of a common shape `(|W|, |V|)`.
///
/// Monomials of `z` in the same degree class are expanded by completeness to
/// a common length; a basis monomial `W V^*` then contributes the coefficient
/// of `(W x)(V x)^*` for every word `x`. The residual is the largest
/// coefficient left after subtracting the fit.
fn project_onto_n(
    n_letters: usize,
    z: &CuntzTerm,
    basis: impl Iterator<Item = (usize, Monomial)>,
) -> (Vec<(usize, CScalar)>, f64) {
    let basis: Vec<(usize, Monomial)> = basis.collect();
    if basis.is_empty() {
        return (Vec::new(), z.max_abs(n_letters));
    }
    let (a, b) = (basis[0].1.w.len(), basis[0].1.v.len());
    let deg = a as i32 - b as i32;
    let mut other = CuntzTerm::zero();
    let mut lens: FxHashMap<u8, usize> = FxHashMap::default();
    for (m, _) in z.iter() {
        if m.degree() == deg {
            let e = lens.entry(m.dec).or_insert(a);
            *e = (*e).max(m.w.len());
        }
    }
    let mut canon: FxHashMap<Monomial, CScalar> = FxHashMap::default();
    for (m, c) in z.iter() {
        if m.degree() != deg {
            other.add_term(*m, *c);
            continue;
        }
        let extra = lens[&m.dec] - m.w.len();
        crate::cuntz::for_each_word(n_letters, extra, |x| {
            *canon
                .entry(Monomial::new(m.w.concat(x), m.v.concat(x), m.dec))
                .or_default() += *c;
        });
    }
    let mut residual = if other.is_empty() {
        0.0
    } else {
        other.max_abs(n_letters)
    };
    let lookup: FxHashMap<(crate::cuntz::Word, crate::cuntz::Word, u8), usize> = basis
        .iter()
        .enumerate()
        .map(|(j, (_, m))| ((m.w, m.v, m.dec), j))
        .collect();
    let mut coeffs = vec![CScalar::new(0.0, 0.0); basis.len()];
    for (j, (_, m)) in basis.iter().enumerate() {
        if let Some(&len) = lens.get(&m.dec) {
            let mut x0 = Word::EMPTY;
            for _ in 0..(len - a) {
                x0 = x0.push(LETTER_S);
            }
            coeffs[j] = canon
                .get(&Monomial::new(m.w.concat(x0), m.v.concat(x0), m.dec))
                .copied()
                .unwrap_or_default();
        }
    }
    let mut hits = vec![0usize; basis.len()];
    for (m, c) in &canon {
        let expected = if m.w.suffix(a) == m.v.suffix(b) {
            match lookup.get(&(m.w.prefix(a), m.v.prefix(b), m.dec)) {
                Some(&j) => {
                    hits[j] += 1;
                    coeffs[j]
                }
                None => CScalar::new(0.0, 0.0),
            }
        } else {
            CScalar::new(0.0, 0.0)
        };
        residual = residual.max((c - expected).norm());
    }
    for (j, (_, m)) in basis.iter().enumerate() {
        if coeffs[j].norm() > 0.0 {
            let len = lens.get(&m.dec).copied().unwrap_or(a);
            let full = n_letters.pow((len - a) as u32);
            if hits[j] < full {
                residual = residual.max(coeffs[j].norm());
            }
        }
    }
    let out = basis
        .iter()
        .zip(coeffs)
        .filter(|(_, c)| c.norm() >= CHOP_TOL)
        .map(|((i, _), c)| (*i, c))
        .collect();
    (out, residual)
}

impl fmt::Display for LabelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            LabelKind::GroupGroup => "group-group",
            LabelKind::GroupRhoCorner => "group-rho-corner",
            LabelKind::GroupToRho => "group-to-rho",
            LabelKind::RhoToGroup => "rho-to-group",
            LabelKind::RhoRhoTT => "rho-rho-TT*",
            LabelKind::RhoRhoSS => "rho-rho-SS*",
            LabelKind::RhoGroupUnit => "rho-group-unit",
        };
        f.write_str(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ghdata::preset;

    fn tube(name: &str) -> Tube {
        let p = preset(name).unwrap();
        Tube::new(&p.data, &p.extension).unwrap()
    }

    #[test]
    fn z4_census() {
        let t = tube("z4");
        assert_eq!(t.len(), 448);
        let h = t.object_index(1, true).unwrap();
        assert_eq!(t.corner(h).len(), 20);
    }

    #[test]
    fn ah_rho_corner_has_68_labels() {
        let t = tube("ah");
        let rho = t.object_index(0, true).unwrap();
        assert_eq!(t.corner(rho).len(), 68);
    }

    #[test]
    fn group_products_add_indices() {
        let t = tube("z4");
        let g = t.group().clone();
        let e0 = t.object_index(0, false).unwrap();
        for k1 in g.elements() {
            for k2 in g.elements() {
                let a = t
                    .find_label(e0, t.object_index(k1.0, false).unwrap(), e0, &Monomial::ONE)
                    .unwrap();
                let b = t
                    .find_label(e0, t.object_index(k2.0, false).unwrap(), e0, &Monomial::ONE)
                    .unwrap();
                let p = t.compute_product(a, b).unwrap();
                let c = t
                    .find_label(
                        e0,
                        t.object_index(g.add(k1, k2).0, false).unwrap(),
                        e0,
                        &Monomial::ONE,
                    )
                    .unwrap();
                assert_eq!(p.len(), 1);
                assert_eq!(p[0].0, c);
                assert!((p[0].1 - CScalar::new(1.0, 0.0)).norm() < 1e-12);
            }
        }
    }
}
