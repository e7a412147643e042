//! Structure constants of generalized Haagerup categories and the orbifold
//! configurations built on top of them.
//!
//! A category is fixed by an abelian group `G`, complex numbers `A_g(h,k)`,
//! signs `eps_g(h)` and cube roots of unity `eta_g`. The scalar `d` is the
//! positive root of `d^2 = n d + 1` with `n = |G|`.

use crate::groups::{AbelianGroup, DeequivFrame, GroupAutomorphism, GroupElement, GroupError};
use crate::numerics::CScalar;
use serde_json::Value;
use std::collections::VecDeque;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DataError {
    #[error("unknown preset '{0}' (expected one of: z4, z2xz2, fourfourfourtwo, ah, twod2)")]
    UnknownPreset(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("malformed category data: {0}")]
    Malformed(String),
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("A_g(h,k) is undetermined for g = {0}: supply it or a generator that reaches it")]
    MissingA(String),
    #[error("epsilon is undetermined for g = {0}")]
    MissingEpsilon(String),
}

/// The defining data of a generalized Haagerup category.
#[derive(Debug, Clone)]
pub struct GHData {
    pub group: AbelianGroup,
    /// `A_g(h,k)` stored at `(g * n + h) * n + k`.
    a: Vec<CScalar>,
    /// `eps_g(h)` stored at `g * n + h`.
    eps: Vec<i8>,
    /// `eta_g`.
    eta: Vec<CScalar>,
    pub d: f64,
}

impl GHData {
    /// Assemble data from full tables. `a` is indexed `(g*n+h)*n+k`, `eps` by `g*n+h`.
    pub fn from_tables(
        group: AbelianGroup,
        a: Vec<CScalar>,
        eps: Vec<i8>,
        eta: Vec<CScalar>,
    ) -> Result<Self, DataError> {
        let n = group.order();
        if a.len() != n * n * n || eps.len() != n * n || eta.len() != n {
            return Err(DataError::Malformed(
                "table sizes do not match the group order".into(),
            ));
        }
        if eps.iter().any(|&e| e != 1 && e != -1) {
            return Err(DataError::Malformed(
                "epsilon entries must be +1 or -1".into(),
            ));
        }
        Ok(GHData {
            d: dimension_for_order(n),
            group,
            a,
            eps,
            eta,
        })
    }

    pub fn n(&self) -> usize {
        self.group.order()
    }

    #[inline]
    pub fn a(&self, g: GroupElement, h: GroupElement, k: GroupElement) -> CScalar {
        let n = self.n();
        self.a[(g.0 * n + h.0) * n + k.0]
    }

    /// `eps_g(h)`.
    #[inline]
    pub fn eps(&self, g: GroupElement, h: GroupElement) -> i8 {
        self.eps[g.0 * self.n() + h.0]
    }

    #[inline]
    pub fn eta(&self, g: GroupElement) -> CScalar {
        self.eta[g.0]
    }

    /// Global dimension `n (1 + d^2)` of the category itself.
    pub fn global_dimension(&self) -> f64 {
        self.n() as f64 * (1.0 + self.d * self.d)
    }

    /// `Lambda / (Lambda - 4)` for the base category.
    pub fn mu(&self) -> f64 {
        let l = self.global_dimension();
        l / (l - 4.0)
    }

    /// Pointwise check of the cocycle and A-shift relations.
    pub fn validate(&self) -> ValidationReport {
        let g = &self.group;
        let mut cocycle = 0.0f64;
        for h in g.elements() {
            for k in g.elements() {
                for x in g.elements() {
                    let lhs = self.eps(g.add(h, k), x);
                    let rhs = self.eps(h, x) * self.eps(k, g.add(x, g.double(h)));
                    if lhs != rhs {
                        cocycle = cocycle.max(2.0);
                    }
                }
            }
        }
        let mut shift = 0.0f64;
        for x in g.elements() {
            for h in g.elements() {
                let target = g.add(x, g.double(h));
                for p in g.elements() {
                    for q in g.elements() {
                        let sign = self.eps(h, x)
                            * self.eps(h, g.add(x, p))
                            * self.eps(h, g.add(x, q))
                            * self.eps(h, g.add(g.add(x, p), q));
                        let diff = self.a(target, p, q) - self.a(x, p, q) * sign as f64;
                        shift = shift.max(diff.norm());
                    }
                }
            }
        }
        ValidationReport {
            cocycle_violation: cocycle,
            shift_violation: shift,
        }
    }

    /// Overwrite one structure constant (used to inject faults in tests).
    pub fn set_a(&mut self, g: GroupElement, h: GroupElement, k: GroupElement, value: CScalar) {
        let n = self.n();
        self.a[(g.0 * n + h.0) * n + k.0] = value;
    }

    /// Parse the JSON input format described in the README.
    pub fn from_json(text: &str) -> Result<(GHData, Extension), DataError> {
        let v: Value = serde_json::from_str(text)?;
        let group_name = v
            .get("group")
            .and_then(Value::as_str)
            .ok_or_else(|| DataError::Malformed("missing string field 'group'".into()))?;
        let group = AbelianGroup::parse(group_name)?;
        let n = group.order();

        let eps_obj = v
            .get("epsilon")
            .and_then(Value::as_object)
            .ok_or_else(|| DataError::Malformed("missing object field 'epsilon'".into()))?;
        let mut eps_rows: Vec<Option<Vec<i8>>> = vec![None; n];
        for (key, val) in eps_obj {
            let idx = parse_indices(key, 2, &group)?;
            let s = val
                .as_i64()
                .ok_or_else(|| DataError::Malformed(format!("epsilon[{key}] must be +1 or -1")))?;
            if s != 1 && s != -1 {
                return Err(DataError::Malformed(format!(
                    "epsilon[{key}] must be +1 or -1"
                )));
            }
            eps_rows[idx[0]].get_or_insert_with(|| vec![0; n])[idx[1]] = s as i8;
        }
        let mut seeds = Vec::new();
        for (gi, row) in eps_rows.into_iter().enumerate() {
            if let Some(row) = row {
                if row.contains(&0) {
                    return Err(DataError::Malformed(format!(
                        "epsilon row {gi} is incomplete"
                    )));
                }
                seeds.push((GroupElement(gi), row));
            }
        }
        let eps = extend_cocycle(&group, &seeds)?;

        let a_obj = v
            .get("A")
            .and_then(Value::as_object)
            .ok_or_else(|| DataError::Malformed("missing object field 'A'".into()))?;
        let mut a_seed: Vec<Option<Vec<CScalar>>> = vec![None; n];
        for (key, val) in a_obj {
            let idx = parse_indices(key, 3, &group)?;
            let pair = val
                .as_array()
                .filter(|a| a.len() == 2)
                .ok_or_else(|| DataError::Malformed(format!("A[{key}] must be a [re, im] pair")))?;
            let re = pair[0]
                .as_f64()
                .ok_or_else(|| DataError::Malformed(format!("A[{key}] re")))?;
            let im = pair[1]
                .as_f64()
                .ok_or_else(|| DataError::Malformed(format!("A[{key}] im")))?;
            a_seed[idx[0]].get_or_insert_with(|| vec![CScalar::new(f64::NAN, 0.0); n * n])
                [idx[1] * n + idx[2]] = CScalar::new(re, im);
        }
        let seeds: Vec<(GroupElement, Vec<CScalar>)> = a_seed
            .into_iter()
            .enumerate()
            .filter_map(|(g, m)| m.map(|m| (GroupElement(g), m)))
            .collect();
        for (g, m) in &seeds {
            if m.iter().any(|z| z.re.is_nan()) {
                return Err(DataError::Malformed(format!(
                    "A_{} is incomplete",
                    group.format(*g)
                )));
            }
        }
        let a = extend_shift(&group, &eps, &seeds)?;

        let eta = match v.get("eta") {
            None | Some(Value::Null) => vec![CScalar::new(1.0, 0.0); n],
            Some(Value::Array(items)) if items.len() == n => items
                .iter()
                .map(|it| {
                    let p = it.as_array().filter(|a| a.len() == 2).ok_or_else(|| {
                        DataError::Malformed("eta entries must be [re, im] pairs".into())
                    })?;
                    Ok(CScalar::new(
                        p[0].as_f64().unwrap_or(f64::NAN),
                        p[1].as_f64().unwrap_or(f64::NAN),
                    ))
                })
                .collect::<Result<Vec<_>, DataError>>()?,
            Some(_) => {
                return Err(DataError::Malformed(format!(
                    "eta must be an array of {n} pairs"
                )))
            }
        };
        let data = GHData::from_tables(group, a, eps, eta)?;

        let extension = match (v.get("theta"), v.get("z")) {
            (Some(_), Some(_)) => {
                return Err(DataError::Malformed(
                    "'theta' and 'z' are mutually exclusive".into(),
                ))
            }
            (Some(t), None) => {
                let images = t
                    .as_array()
                    .ok_or_else(|| DataError::Malformed("theta must be an array of images".into()))?
                    .iter()
                    .map(|x| x.as_u64().map(|x| x as usize))
                    .collect::<Option<Vec<_>>>()
                    .ok_or_else(|| {
                        DataError::Malformed("theta images must be element indices".into())
                    })?;
                let theta = GroupAutomorphism::new(&data.group, images)?;
                Extension::Graded(EquivariantizationConfig::new(theta))
            }
            (None, Some(z)) => {
                let z = z
                    .as_u64()
                    .ok_or_else(|| DataError::Malformed("z must be an element index".into()))?;
                let z = data.group.check(z as usize)?;
                let frame = match v.get("reps") {
                    Some(r) => {
                        let reps = r
                            .as_array()
                            .ok_or_else(|| DataError::Malformed("reps must be an array".into()))?
                            .iter()
                            .map(|x| x.as_u64().map(|x| GroupElement(x as usize)))
                            .collect::<Option<Vec<_>>>()
                            .ok_or_else(|| {
                                DataError::Malformed("reps must be element indices".into())
                            })?;
                        DeequivFrame::with_reps(&data.group, z, reps)?
                    }
                    None => DeequivFrame::new(&data.group, z)?,
                };
                Extension::Deequiv(DeequivariantizationConfig { frame })
            }
            (None, None) => Extension::Plain,
        };
        Ok((data, extension))
    }
}

fn parse_indices(key: &str, count: usize, group: &AbelianGroup) -> Result<Vec<usize>, DataError> {
    let parts: Vec<&str> = key.split(',').map(str::trim).collect();
    if parts.len() != count {
        return Err(DataError::Malformed(format!(
            "key '{key}' should have {count} comma-separated indices"
        )));
    }
    parts
        .iter()
        .map(|p| {
            let i: usize = p
                .parse()
                .map_err(|_| DataError::Malformed(format!("bad index '{p}' in '{key}'")))?;
            Ok(group.check(i)?.0)
        })
        .collect()
}

/// Result of [`GHData::validate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidationReport {
    /// Largest `|eps_{h+k}(g) - eps_h(g) eps_k(g+2h)|`.
    pub cocycle_violation: f64,
    /// Largest deviation in the A-shift relation.
    pub shift_violation: f64,
}

impl ValidationReport {
    pub fn max_violation(&self) -> f64 {
        self.cocycle_violation.max(self.shift_violation)
    }
}

/// Positive root of `d^2 = n d + 1`.
pub fn dimension_for_order(n: usize) -> f64 {
    let n = n as f64;
    (n + (n * n + 4.0).sqrt()) / 2.0
}

/// Extend given rows `eps_g(.)` to all of `G` through the cocycle relation
/// `eps_{h+k}(x) = eps_h(x) eps_k(x + 2h)`.
pub fn extend_cocycle(
    group: &AbelianGroup,
    seeds: &[(GroupElement, Vec<i8>)],
) -> Result<Vec<i8>, DataError> {
    let n = group.order();
    let mut rows: Vec<Option<Vec<i8>>> = vec![None; n];
    rows[0] = Some(vec![1; n]);
    for (g, row) in seeds {
        rows[g.0] = Some(row.clone());
    }
    let gens: Vec<GroupElement> = seeds.iter().map(|(g, _)| *g).collect();
    let mut queue: VecDeque<usize> = (0..n).filter(|&i| rows[i].is_some()).collect();
    while let Some(h) = queue.pop_front() {
        let hrow = rows[h].clone().unwrap();
        for &k in &gens {
            let krow = rows[k.0].clone().unwrap();
            let sum = group.add(GroupElement(h), k).0;
            if rows[sum].is_none() {
                let row = group
                    .elements()
                    .map(|x| hrow[x.0] * krow[group.add(x, group.double(GroupElement(h))).0])
                    .collect();
                rows[sum] = Some(row);
                queue.push_back(sum);
            }
        }
    }
    let mut out = Vec::with_capacity(n * n);
    for (i, r) in rows.into_iter().enumerate() {
        out.extend(r.ok_or_else(|| DataError::MissingEpsilon(group.format(GroupElement(i))))?);
    }
    Ok(out)
}

/// Generate the remaining `A_g` from seeds through the A-shift relation.
pub fn extend_shift(
    group: &AbelianGroup,
    eps: &[i8],
    seeds: &[(GroupElement, Vec<CScalar>)],
) -> Result<Vec<CScalar>, DataError> {
    let n = group.order();
    let e = |g: GroupElement, h: GroupElement| eps[g.0 * n + h.0];
    let mut mats: Vec<Option<Vec<CScalar>>> = vec![None; n];
    for (g, m) in seeds {
        mats[g.0] = Some(m.clone());
    }
    let mut queue: VecDeque<usize> = (0..n).filter(|&i| mats[i].is_some()).collect();
    while let Some(x) = queue.pop_front() {
        let xg = GroupElement(x);
        let src = mats[x].clone().unwrap();
        for h in group.elements() {
            let target = group.add(xg, group.double(h)).0;
            if mats[target].is_some() {
                continue;
            }
            let mut m = vec![CScalar::new(0.0, 0.0); n * n];
            for p in group.elements() {
                for q in group.elements() {
                    let s = e(h, xg)
                        * e(h, group.add(xg, p))
                        * e(h, group.add(xg, q))
                        * e(h, group.add(group.add(xg, p), q));
                    m[p.0 * n + q.0] = src[p.0 * n + q.0] * s as f64;
                }
            }
            mats[target] = Some(m);
            queue.push_back(target);
        }
    }
    let mut out = Vec::with_capacity(n * n * n);
    for (i, m) in mats.into_iter().enumerate() {
        out.extend(m.ok_or_else(|| DataError::MissingA(group.format(GroupElement(i))))?);
    }
    Ok(out)
}

/// Graded extension by an automorphism `theta` of `G` preserving the data.
#[derive(Debug, Clone)]
pub struct EquivariantizationConfig {
    pub theta: GroupAutomorphism,
    /// Order of `theta`.
    pub m: usize,
}

impl EquivariantizationConfig {
    pub fn new(theta: GroupAutomorphism) -> Self {
        let m = theta.order();
        EquivariantizationConfig { theta, m }
    }

    /// Largest violation of `theta`-invariance of `eps` and `A`.
    pub fn invariance_violation(&self, data: &GHData) -> f64 {
        let g = &data.group;
        let t = |x| self.theta.apply(x);
        let mut worst = 0.0f64;
        for a in g.elements() {
            for b in g.elements() {
                if data.eps(t(a), t(b)) != data.eps(a, b) {
                    worst = worst.max(2.0);
                }
                for c in g.elements() {
                    worst = worst.max((data.a(t(a), t(b), t(c)) - data.a(a, b, c)).norm());
                }
            }
        }
        worst
    }
}

/// De-equivariantization by an order-two element `z` with `eps_z` a character.
#[derive(Debug, Clone)]
pub struct DeequivariantizationConfig {
    pub frame: DeequivFrame,
}

impl DeequivariantizationConfig {
    /// Checks that `eps_z` is a character with `eps_z(z) = 1`.
    pub fn character_violation(&self, data: &GHData) -> f64 {
        let g = &data.group;
        let z = self.frame.z;
        let mut worst = 0.0f64;
        if data.eps(z, z) != 1 {
            worst = 2.0;
        }
        for a in g.elements() {
            for b in g.elements() {
                if data.eps(z, g.add(a, b)) != data.eps(z, a) * data.eps(z, b) {
                    worst = 2.0;
                }
            }
        }
        worst
    }
}

/// Which category is built from the base data.
#[derive(Debug, Clone)]
pub enum Extension {
    /// The generalized Haagerup category itself.
    Plain,
    /// Its `Z/m`-graded extension by `theta`.
    Graded(EquivariantizationConfig),
    /// The de-equivariantization by `z`.
    Deequiv(DeequivariantizationConfig),
}

impl Extension {
    pub fn kind(&self) -> &'static str {
        match self {
            Extension::Plain => "plain",
            Extension::Graded(_) => "graded",
            Extension::Deequiv(_) => "deequivariantized",
        }
    }
}

/// A named, fully populated configuration.
#[derive(Debug, Clone)]
pub struct Preset {
    pub name: String,
    pub data: GHData,
    pub extension: Extension,
}

impl Preset {
    /// Global dimension of the category whose double is computed.
    pub fn global_dimension(&self) -> f64 {
        let base = 1.0 + self.data.d * self.data.d;
        let n = self.data.n() as f64;
        match &self.extension {
            Extension::Plain => n * base,
            Extension::Graded(c) => c.m as f64 * n * base,
            Extension::Deequiv(_) => n / 2.0 * base,
        }
    }

    /// `Lambda / (Lambda - 4)` with `Lambda` the global dimension above.
    pub fn mu(&self) -> f64 {
        let l = self.global_dimension();
        l / (l - 4.0)
    }
}

/// Names accepted by [`preset`].
pub const PRESET_NAMES: [&str; 5] = ["z4", "z2xz2", "fourfourfourtwo", "ah", "twod2"];

fn c(re: f64, im: f64) -> CScalar {
    CScalar::new(re, im)
}

fn r(x: f64) -> CScalar {
    CScalar::new(x, 0.0)
}

/// Build one of the built-in configurations.
pub fn preset(name: &str) -> Result<Preset, DataError> {
    let (data, extension) = match name {
        "z4" => (z4_data(), Extension::Plain),
        "z2xz2" => (z2xz2_data(), Extension::Plain),
        "fourfourfourtwo" => {
            let data = z2xz2_data();
            let theta = GroupAutomorphism::new(&data.group, vec![0, 2, 3, 1])?;
            (
                data,
                Extension::Graded(EquivariantizationConfig::new(theta)),
            )
        }
        "ah" => {
            let data = ah_data();
            let z = data.group.element(&[0, 1]);
            let frame = DeequivFrame::new(&data.group, z)?;
            (
                data,
                Extension::Deequiv(DeequivariantizationConfig { frame }),
            )
        }
        "twod2" => {
            let data = z4_data();
            let frame = DeequivFrame::new(&data.group, GroupElement(2))?;
            (
                data,
                Extension::Deequiv(DeequivariantizationConfig { frame }),
            )
        }
        other => return Err(DataError::UnknownPreset(other.to_string())),
    };
    Ok(Preset {
        name: name.to_string(),
        data,
        extension,
    })
}

fn matrix_from_rows(rows: &[[CScalar; 4]]) -> Vec<CScalar> {
    rows.iter().flat_map(|r| r.iter().copied()).collect()
}

fn hadamard(a: &[CScalar], signs: &[i8]) -> Vec<CScalar> {
    a.iter().zip(signs).map(|(x, &s)| x * s as f64).collect()
}

fn z4_data() -> GHData {
    let group = AbelianGroup::cyclic(4);
    let d = dimension_for_order(4);
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let a = c(-phi, phi.sqrt());
    let s = 1.0 / (d - 1.0);
    let m1 = r(-1.0);
    let base = matrix_from_rows(&[
        [r(d - 2.0), m1, m1, m1],
        [m1, m1, a, -a],
        [m1, a.conj(), m1, a],
        [m1, -a.conj(), a.conj(), m1],
    ])
    .into_iter()
    .map(|x| x * s)
    .collect::<Vec<_>>();
    // Sign pattern for A_1. Entries (2,2) and (3,3) are -1: this is the only
    // pattern compatible with eps and A for which rho is an endomorphism with
    // S and T_g intertwining into rho^2.
    let b1: [i8; 16] = [1, 1, 1, 1, 1, 1, 1, -1, 1, 1, -1, -1, 1, -1, -1, -1];
    let mut eps = vec![1i8; 16];
    eps[4 + 3] = -1; // eps_1(3)
    eps[3 * 4 + 1] = -1; // eps_3(1)
    for x in 0..4 {
        eps[2 * 4 + x] = if x % 2 == 0 { 1 } else { -1 };
    }
    let seeds = vec![
        (GroupElement(0), base.clone()),
        (GroupElement(1), hadamard(&base, &b1)),
    ];
    let a_full = extend_shift(&group, &eps, &seeds).expect("z4 seeds reach every element");
    GHData::from_tables(group, a_full, eps, vec![r(1.0); 4]).expect("consistent z4 tables")
}

fn z2xz2_data() -> GHData {
    let group = AbelianGroup::parse("Z2xZ2").unwrap();
    let d = dimension_for_order(4);
    let sd = r(d.sqrt());
    let m1 = r(-1.0);
    let s = 1.0 / (d - 1.0);
    let base = matrix_from_rows(&[
        [r(d - 2.0), m1, m1, m1],
        [m1, m1, sd, sd],
        [m1, sd, m1, sd],
        [m1, sd, sd, m1],
    ])
    .into_iter()
    .map(|x| x * s)
    .collect::<Vec<_>>();
    let ba: [i8; 16] = [1, 1, 1, 1, 1, -1, 1, -1, 1, 1, -1, -1, 1, -1, -1, 1];
    let bb: [i8; 16] = [1, 1, 1, 1, 1, 1, -1, -1, 1, -1, -1, 1, 1, -1, 1, -1];
    let bc: [i8; 16] = [1, 1, 1, 1, 1, -1, -1, 1, 1, -1, 1, -1, 1, 1, -1, -1];
    // Elements 0, a, b, c have indices 0..4; eps_g(h) = -1 exactly on the listed pairs.
    let mut eps = vec![1i8; 16];
    for (g, h) in [(1, 1), (2, 2), (3, 3), (1, 3), (2, 1), (3, 2)] {
        eps[g * 4 + h] = -1;
    }
    let mut a = Vec::with_capacity(64);
    a.extend(base.iter().copied());
    a.extend(hadamard(&base, &ba));
    a.extend(hadamard(&base, &bb));
    a.extend(hadamard(&base, &bc));
    GHData::from_tables(group, a, eps, vec![r(1.0); 4]).expect("consistent z2xz2 tables")
}

/// The four scalars entering the `Z4xZ2` matrix.
#[derive(Debug, Clone, Copy)]
pub struct AhScalars {
    pub c_f: CScalar,
    pub c_g: CScalar,
    pub c_h: CScalar,
    pub c_c: CScalar,
}

/// Scalars for `d = 4 + sqrt(17)`; square roots take the principal branch.
pub fn ah_scalars(d: f64) -> AhScalars {
    let c_c = c(1.0 - d, (10.0 * d - 2.0).sqrt()) / 4.0;
    let c_f = (c(d - 1.0, -(26.0 * d + 2.0).sqrt()) / 2.0).sqrt();
    let c_g = c(-3.0 * d - 1.0, (50.0 * d + 6.0).sqrt()).sqrt() / 2.0;
    let c_h = c(d + 3.0, -(2.0 * d - 10.0).sqrt()) / 4.0;
    AhScalars { c_f, c_g, c_h, c_c }
}

fn ah_data() -> GHData {
    let group = AbelianGroup::parse("Z4xZ2").unwrap();
    let n = 8;
    let d = dimension_for_order(n);
    let AhScalars {
        c_f: f,
        c_g: g,
        c_h: h,
        c_c: cc,
    } = ah_scalars(d);
    let i = c(0.0, 1.0);
    let isd = i * d.sqrt();
    let m1 = r(-1.0);
    let (fb, gb, hb, cb) = (f.conj(), g.conj(), h.conj(), cc.conj());
    let rows: [[CScalar; 8]; 8] = [
        [r(d - 2.0), m1, m1, m1, m1, m1, m1, m1],
        [m1, m1, cc, cc, -f, f, -g, -g],
        [m1, cb, m1, cc, isd, h, -isd, hb],
        [m1, cb, cb, m1, -fb, -gb, gb, -fb],
        [m1, -fb, -isd, -f, m1, -f, isd, -fb],
        [m1, fb, hb, -g, -fb, m1, g, -hb],
        [m1, -gb, isd, g, -isd, gb, m1, -g],
        [m1, -gb, h, -f, -f, -h, -gb, m1],
    ];
    let base: Vec<CScalar> = rows
        .iter()
        .flat_map(|r| r.iter().map(|x| x / (d - 1.0)))
        .collect();
    let b10: [[i8; 8]; 8] = [
        [1, 1, 1, 1, 1, 1, 1, 1],
        [1, 1, 1, 1, 1, 1, -1, -1],
        [1, 1, 1, 1, 1, -1, 1, -1],
        [1, 1, 1, 1, -1, 1, 1, -1],
        [1, 1, 1, -1, 1, 1, 1, -1],
        [1, 1, -1, 1, 1, 1, 1, -1],
        [1, -1, 1, 1, 1, 1, 1, -1],
        [1, -1, -1, -1, -1, -1, -1, 1],
    ];
    let b01: [[i8; 8]; 8] = [
        [1, 1, 1, 1, 1, 1, 1, 1],
        [1, 1, 1, -1, 1, 1, 1, -1],
        [1, 1, -1, -1, 1, 1, -1, -1],
        [1, -1, -1, -1, 1, -1, -1, -1],
        [1, 1, 1, 1, 1, 1, 1, 1],
        [1, 1, 1, -1, 1, 1, 1, -1],
        [1, 1, -1, -1, 1, 1, -1, -1],
        [1, -1, -1, -1, 1, -1, -1, -1],
    ];
    let b11: [[i8; 8]; 8] = [
        [1, 1, 1, 1, 1, 1, 1, 1],
        [1, 1, -1, 1, 1, 1, 1, -1],
        [1, -1, -1, 1, 1, 1, -1, -1],
        [1, 1, 1, -1, -1, 1, 1, 1],
        [1, 1, 1, -1, 1, 1, 1, -1],
        [1, 1, 1, 1, 1, 1, -1, -1],
        [1, 1, -1, 1, 1, -1, -1, -1],
        [1, -1, -1, 1, -1, -1, -1, -1],
    ];
    let flat = |m: &[[i8; 8]; 8]| {
        m.iter()
            .flat_map(|r| r.iter().copied())
            .collect::<Vec<i8>>()
    };
    let e10 = group.element(&[1, 0]);
    let e01 = group.element(&[0, 1]);
    let e11 = group.element(&[1, 1]);
    let mut row10 = vec![1i8; n];
    row10[group.element(&[2, 1]).0] = -1;
    row10[group.element(&[3, 1]).0] = -1;
    let eps =
        extend_cocycle(&group, &[(e10, row10), (e01, vec![1; n])]).expect("generators span Z4xZ2");
    let seeds = vec![
        (group.zero(), base.clone()),
        (e10, hadamard(&base, &flat(&b10))),
        (e01, hadamard(&base, &flat(&b01))),
        (e11, hadamard(&base, &flat(&b11))),
    ];
    let a = extend_shift(&group, &eps, &seeds).expect("seeds reach every element");
    GHData::from_tables(group, a, eps, vec![r(1.0); n]).expect("consistent Z4xZ2 tables")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn z4_constants() {
        let p = preset("z4").unwrap();
        assert!((p.data.d - (2.0 + 5f64.sqrt())).abs() < 1e-12);
        let a00 = p.data.a(GroupElement(0), GroupElement(0), GroupElement(0));
        assert!((a00.re - 0.690_983_005_625_052_6).abs() < 1e-12);
        assert_eq!(p.data.eps(GroupElement(1), GroupElement(3)), -1);
        assert_eq!(p.data.eps(GroupElement(3), GroupElement(1)), -1);
        assert_eq!(p.data.eps(GroupElement(2), GroupElement(1)), -1);
        assert_eq!(p.data.eps(GroupElement(1), GroupElement(1)), 1);
        assert!(p.data.validate().max_violation() < 1e-12);
    }

    #[test]
    fn ah_eps_generators() {
        let p = preset("ah").unwrap();
        let g = &p.data.group;
        assert!((p.data.d - (4.0 + 17f64.sqrt())).abs() < 1e-12);
        assert_eq!(p.data.eps(g.element(&[1, 0]), g.element(&[2, 1])), -1);
        assert_eq!(p.data.eps(g.element(&[1, 0]), g.element(&[3, 1])), -1);
        for x in g.elements() {
            assert_eq!(p.data.eps(g.element(&[0, 1]), x), 1);
        }
        assert!(p.data.validate().max_violation() < 1e-12);
    }

    #[test]
    fn perturbation_is_reported() {
        let mut data = preset("z4").unwrap().data;
        let e = GroupElement;
        let old = data.a(e(0), e(1), e(2));
        data.set_a(e(0), e(1), e(2), old + 0.1);
        let rep = data.validate();
        assert!((rep.shift_violation - 0.1).abs() < 1e-9, "{rep:?}");
    }

    #[test]
    fn unknown_preset_rejected() {
        assert!(matches!(preset("z8"), Err(DataError::UnknownPreset(_))));
    }

    #[test]
    fn global_dimensions() {
        let d = 2.0 + 5f64.sqrt();
        assert!((preset("z4").unwrap().global_dimension() - 4.0 * (1.0 + d * d)).abs() < 1e-9);
        assert!(
            (preset("fourfourfourtwo").unwrap().global_dimension() - 12.0 * (1.0 + d * d)).abs()
                < 1e-9
        );
        assert!((preset("twod2").unwrap().global_dimension() - 2.0 * (1.0 + d * d)).abs() < 1e-9);
    }
}
