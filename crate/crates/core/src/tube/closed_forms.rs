//! Closed-form multiplication, involution and `S_0` rules on the tube basis,
//! replayed against the generic Cuntz-engine evaluation.
//!
//! Each family enumerates every assignment of its free group parameters for
//! which the input labels exist, evaluates the printed right-hand side and
//! records the largest coefficient deviation. Where a printed rule needs a
//! correction to hold, the family carries a note describing the reading used.

use super::{Flavor, Tube, TubeError};
use crate::cuntz::{letter_t, Monomial, Word, LETTER_S};
use crate::groups::{AbelianGroup, GroupElement};
use crate::numerics::CScalar;
use std::collections::BTreeMap;

/// Outcome of one rule family.
#[derive(Debug, Clone)]
pub struct FamilyReport {
    pub family: &'static str,
    pub cases: usize,
    pub max_deviation: f64,
    pub worst_case: Option<String>,
    /// Reading applied where the printed rule has a typo.
    pub correction: Option<&'static str>,
}

impl FamilyReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.cases > 0 && self.max_deviation < tol
    }
}

/// Run every closed-form family that applies to the tube's flavor.
pub fn check_closed_forms(tube: &Tube) -> Result<Vec<FamilyReport>, TubeError> {
    match tube.flavor() {
        Flavor::Plain => plain_families(tube),
        Flavor::Graded => super::closed_forms_graded::graded_families(tube),
        Flavor::Deequiv => super::closed_forms_deequiv::deequiv_families(tube),
    }
}

/// Printed right-hand side: labels (or a description of a label that does not
/// exist in the basis) with coefficients.
#[derive(Default)]
pub(super) struct Expected {
    terms: Vec<(Result<usize, String>, CScalar)>,
}

impl Expected {
    pub(super) fn add(&mut self, label: Result<usize, String>, c: impl Into<CScalar>) -> &mut Self {
        self.terms.push((label, c.into()));
        self
    }

    pub(super) fn add_real(&mut self, label: Result<usize, String>, c: f64) -> &mut Self {
        self.add(label, CScalar::new(c, 0.0))
    }

    fn deviation(&self, actual: &[(usize, CScalar)]) -> f64 {
        let mut diff: BTreeMap<usize, CScalar> = BTreeMap::new();
        for &(l, c) in actual {
            *diff.entry(l).or_default() += c;
        }
        let mut missing = 0.0f64;
        let mut unresolved: BTreeMap<String, CScalar> = BTreeMap::new();
        for (l, c) in &self.terms {
            match l {
                Ok(l) => *diff.entry(*l).or_default() -= *c,
                Err(name) => *unresolved.entry(name.clone()).or_default() += *c,
            }
        }
        for c in unresolved.values() {
            missing = missing.max(c.norm());
        }
        diff.values().map(|c| c.norm()).fold(missing, f64::max)
    }
}

/// Accumulates the cases of one family.
pub(super) struct Family {
    report: FamilyReport,
}

impl Family {
    pub(super) fn new(family: &'static str) -> Self {
        Family {
            report: FamilyReport {
                family,
                cases: 0,
                max_deviation: 0.0,
                worst_case: None,
                correction: None,
            },
        }
    }

    pub(super) fn corrected(family: &'static str, note: &'static str) -> Self {
        let mut f = Self::new(family);
        f.report.correction = Some(note);
        f
    }

    pub(super) fn record(
        &mut self,
        actual: &[(usize, CScalar)],
        expected: &Expected,
        case: impl FnOnce() -> String,
    ) {
        let dev = expected.deviation(actual);
        self.report.cases += 1;
        if dev > self.report.max_deviation || (dev.is_nan() && !self.report.max_deviation.is_nan())
        {
            self.report.max_deviation = dev;
            self.report.worst_case = Some(case());
        }
    }

    pub(super) fn finish(self) -> FamilyReport {
        self.report
    }
}

/// Monomials used in printed labels.
pub(super) mod hom {
    use super::*;

    pub fn one() -> Monomial {
        Monomial::ONE
    }

    pub fn t(x: GroupElement) -> Monomial {
        Monomial::new(Word::single(letter_t(x)), Word::EMPTY, 0)
    }

    pub fn t_star(x: GroupElement) -> Monomial {
        Monomial::new(Word::EMPTY, Word::single(letter_t(x)), 0)
    }

    pub fn ss() -> Monomial {
        Monomial::new(Word::single(LETTER_S), Word::single(LETTER_S), 0)
    }

    pub fn tt(a: GroupElement, b: GroupElement) -> Monomial {
        Monomial::new(Word::single(letter_t(a)), Word::single(letter_t(b)), 0)
    }

    /// Attach the `lambda` decoration.
    pub fn lam(m: Monomial) -> Monomial {
        Monomial { dec: 1, ..m }
    }
}

/// Iterate over all `k`-tuples of group elements.
pub(super) fn for_tuples(
    group: &AbelianGroup,
    k: usize,
    mut f: impl FnMut(&[GroupElement]) -> Result<(), TubeError>,
) -> Result<(), TubeError> {
    let n = group.order();
    let mut idx = vec![0usize; k];
    loop {
        let xs: Vec<GroupElement> = idx.iter().map(|&i| GroupElement(i)).collect();
        f(&xs)?;
        let mut p = 0;
        loop {
            if p == k {
                return Ok(());
            }
            idx[p] += 1;
            if idx[p] < n {
                break;
            }
            idx[p] = 0;
            p += 1;
        }
    }
}

/// Shorthand for the plain flavor: objects, constants and labels indexed by
/// group elements.
pub(super) struct Plain<'a> {
    pub tube: &'a Tube,
    pub g: &'a AbelianGroup,
    pub d: f64,
}

impl<'a> Plain<'a> {
    pub(super) fn new(tube: &'a Tube) -> Self {
        Plain {
            tube,
            g: tube.group(),
            d: tube.data().d,
        }
    }

    /// Integer combination `sum c_i x_i`.
    pub(super) fn lc(&self, terms: &[(i64, GroupElement)]) -> GroupElement {
        let g = self.g;
        let mut acc = g.zero();
        for &(c, x) in terms {
            let y = if c < 0 { g.neg(x) } else { x };
            for _ in 0..c.unsigned_abs() {
                acc = g.add(acc, y);
            }
        }
        acc
    }

    pub(super) fn eps(&self, a: GroupElement, b: GroupElement) -> f64 {
        self.tube.data().eps(a, b) as f64
    }

    pub(super) fn a(&self, x: GroupElement, h: GroupElement, k: GroupElement) -> CScalar {
        self.tube.data().a(x, h, k)
    }

    pub(super) fn inv(&self, x: GroupElement) -> Obj {
        Obj {
            index: self.tube.object_index(x.0, false),
            name: self.g.format(x),
        }
    }

    pub(super) fn rho(&self, x: GroupElement) -> Obj {
        Obj {
            index: self.tube.object_index(x.0, true),
            name: format!("{}rho", self.g.format(x)),
        }
    }

    /// The label `(s m|hom|m t)`, or a description if it is not in the basis.
    pub(super) fn label(&self, s: &Obj, m: &Obj, t: &Obj, hom: Monomial) -> Result<usize, String> {
        let describe = || format!("({} {}|{:?}|{} {})", s.name, m.name, hom, m.name, t.name);
        match (s.index, m.index, t.index) {
            (Some(a), Some(b), Some(c)) => self.tube.find_label(a, b, c, &hom).ok_or_else(describe),
            _ => Err(describe()),
        }
    }

    pub(super) fn product(&self, a: usize, b: usize) -> Result<Vec<(usize, CScalar)>, TubeError> {
        Ok(self.tube.product_labels(a, b)?.to_vec())
    }

    pub(super) fn names(&self, xs: &[(&str, GroupElement)]) -> String {
        xs.iter()
            .map(|(n, x)| format!("{n}={}", self.g.format(*x)))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// An object of the tube, possibly absent from the object list.
pub(super) struct Obj {
    pub index: Option<usize>,
    pub name: String,
}

/// Run a product family: `inputs` returns the two printed input labels (or
/// `None` if the parameters do not define basis elements) and the printed
/// right-hand side.
pub(super) fn product_family(
    p: &Plain,
    mut fam: Family,
    arity: usize,
    names: &[&str],
    mut rule: impl FnMut(&[GroupElement]) -> Option<(usize, usize, Expected)>,
) -> Result<FamilyReport, TubeError> {
    for_tuples(p.g, arity, |xs| {
        if let Some((a, b, exp)) = rule(xs) {
            let actual = p.product(a, b)?;
            fam.record(&actual, &exp, || {
                let vals: Vec<(&str, GroupElement)> =
                    names.iter().copied().zip(xs.iter().copied()).collect();
                format!(
                    "{} * {} [{}]",
                    p.tube.label_name(a),
                    p.tube.label_name(b),
                    p.names(&vals)
                )
            });
        }
        Ok(())
    })?;
    Ok(fam.finish())
}

/// Run a unary family (adjoint or `S_0`).
pub(super) fn unary_family(
    p: &Plain,
    mut fam: Family,
    arity: usize,
    names: &[&str],
    op: fn(&Tube, usize) -> Result<Vec<(usize, CScalar)>, TubeError>,
    mut rule: impl FnMut(&[GroupElement]) -> Option<(usize, Expected)>,
) -> Result<FamilyReport, TubeError> {
    for_tuples(p.g, arity, |xs| {
        if let Some((a, exp)) = rule(xs) {
            let actual = op(p.tube, a)?;
            fam.record(&actual, &exp, || {
                let vals: Vec<(&str, GroupElement)> =
                    names.iter().copied().zip(xs.iter().copied()).collect();
                format!("{} [{}]", p.tube.label_name(a), p.names(&vals))
            });
        }
        Ok(())
    })?;
    Ok(fam.finish())
}

pub(super) fn adjoint_op(t: &Tube, a: usize) -> Result<Vec<(usize, CScalar)>, TubeError> {
    Ok(t.adjoint_label(a)?.to_vec())
}

pub(super) fn s0_op(t: &Tube, a: usize) -> Result<Vec<(usize, CScalar)>, TubeError> {
    Ok(t.s0_label(a)?.to_vec())
}

fn plain_families(tube: &Tube) -> Result<Vec<FamilyReport>, TubeError> {
    let p = Plain::new(tube);
    let mut out = Vec::new();
    out.extend(plain_adjoints(&p)?);
    out.extend(plain_group_products(&p)?);
    out.extend(plain_mixed_products(&p)?);
    out.extend(plain_rho_products(&p)?);
    out.extend(plain_s0(&p)?);
    Ok(out)
}

fn plain_adjoints(p: &Plain) -> Result<Vec<FamilyReport>, TubeError> {
    use hom::*;
    let mut out = Vec::new();
    out.push(unary_family(
        p,
        Family::new("adjoint (g k|1|k g)"),
        2,
        &["g", "k"],
        adjoint_op,
        |x| {
            let (g, k) = (x[0], x[1]);
            let a = p.label(&p.inv(g), &p.inv(k), &p.inv(g), one()).ok()?;
            let mut e = Expected::default();
            e.add_real(
                p.label(&p.inv(g), &p.inv(p.g.neg(k)), &p.inv(g), one()),
                1.0,
            );
            Some((a, e))
        },
    )?);
    out.push(unary_family(
        p,
        Family::new("adjoint (g krho|1|krho -g)"),
        2,
        &["g", "k"],
        adjoint_op,
        |x| {
            let (g, k) = (x[0], x[1]);
            let mg = p.g.neg(g);
            let a = p.label(&p.inv(g), &p.rho(k), &p.inv(mg), one()).ok()?;
            let mut e = Expected::default();
            e.add_real(p.label(&p.inv(mg), &p.rho(k), &p.inv(g), one()), 1.0);
            Some((a, e))
        },
    )?);
    out.push(unary_family(
        p,
        Family::new("adjoint (g krho|T|krho hrho)"),
        3,
        &["g", "k", "h"],
        adjoint_op,
        |x| {
            let (g, k, h) = (x[0], x[1], x[2]);
            let a = p
                .label(
                    &p.inv(g),
                    &p.rho(k),
                    &p.rho(h),
                    t(p.lc(&[(2, k), (1, g), (-1, h)])),
                )
                .ok()?;
            let mut e = Expected::default();
            let c = p.eps(
                p.lc(&[(-1, k), (-1, g), (1, h)]),
                p.lc(&[(1, g), (-1, h), (2, k)]),
            );
            e.add_real(
                p.label(
                    &p.rho(h),
                    &p.rho(k),
                    &p.inv(g),
                    t_star(p.lc(&[(1, h), (-1, g)])),
                ),
                c,
            );
            Some((a, e))
        },
    )?);
    Ok(out)
}

fn plain_group_products(p: &Plain) -> Result<Vec<FamilyReport>, TubeError> {
    use hom::*;
    let g_ = p.g;
    let mut out = Vec::new();
    out.push(product_family(
        p,
        Family::new("(g k1|1|k1 g)(g k2|1|k2 g)"),
        3,
        &["g", "k1", "k2"],
        |x| {
            let (g, k1, k2) = (x[0], x[1], x[2]);
            let a = p.label(&p.inv(g), &p.inv(k1), &p.inv(g), one()).ok()?;
            let b = p.label(&p.inv(g), &p.inv(k2), &p.inv(g), one()).ok()?;
            let mut e = Expected::default();
            e.add_real(
                p.label(&p.inv(g), &p.inv(g_.add(k1, k2)), &p.inv(g), one()),
                1.0,
            );
            Some((a, b, e))
        },
    )?);
    out.push(product_family(
        p,
        Family::new("(g k1|1|k1 g)(g k2rho|1|k2rho -g)"),
        3,
        &["g", "k1", "k2"],
        |x| {
            let (g, k1, k2) = (x[0], x[1], x[2]);
            let mg = g_.neg(g);
            let a = p.label(&p.inv(g), &p.inv(k1), &p.inv(g), one()).ok()?;
            let b = p.label(&p.inv(g), &p.rho(k2), &p.inv(mg), one()).ok()?;
            let mut e = Expected::default();
            e.add_real(
                p.label(&p.inv(g), &p.rho(g_.add(k1, k2)), &p.inv(mg), one()),
                1.0,
            );
            Some((a, b, e))
        },
    )?);
    out.push(product_family(
        p,
        Family::new("(g k1rho|1|k1rho -g)(-g k2|1|k2 -g)"),
        3,
        &["g", "k1", "k2"],
        |x| {
            let (g, k1, k2) = (x[0], x[1], x[2]);
            let mg = g_.neg(g);
            let a = p.label(&p.inv(g), &p.rho(k1), &p.inv(mg), one()).ok()?;
            let b = p.label(&p.inv(mg), &p.inv(k2), &p.inv(mg), one()).ok()?;
            let mut e = Expected::default();
            e.add_real(
                p.label(&p.inv(g), &p.rho(g_.sub(k1, k2)), &p.inv(mg), one()),
                1.0,
            );
            Some((a, b, e))
        },
    )?);
    out.push(product_family(
        p,
        Family::new("(g k1rho|1|k1rho -g)(-g k2rho|1|k2rho g)"),
        3,
        &["g", "k1", "k2"],
        |x| {
            let (g, k1, k2) = (x[0], x[1], x[2]);
            let mg = g_.neg(g);
            let a = p.label(&p.inv(g), &p.rho(k1), &p.inv(mg), one()).ok()?;
            let b = p.label(&p.inv(mg), &p.rho(k2), &p.inv(g), one()).ok()?;
            let mut e = Expected::default();
            e.add_real(
                p.label(&p.inv(g), &p.inv(g_.sub(k1, k2)), &p.inv(g), one()),
                1.0,
            );
            if g_.double(g) == g_.zero() {
                for r in g_.elements() {
                    let c = p.eps(g, p.lc(&[(1, r), (1, k1), (-1, k2)]));
                    e.add_real(p.label(&p.inv(g), &p.rho(r), &p.inv(g), one()), c);
                }
            }
            Some((a, b, e))
        },
    )?);
    Ok(out)
}

fn plain_mixed_products(p: &Plain) -> Result<Vec<FamilyReport>, TubeError> {
    use hom::*;
    let g_ = p.g;
    let mut out = Vec::new();
    out.push(product_family(
        p,
        Family::new("(g k1|1|k1 g)(g k2rho|T|k2rho hrho)"),
        4,
        &["g", "k1", "k2", "h"],
        |x| {
            let (g, k1, k2, h) = (x[0], x[1], x[2], x[3]);
            let a = p.label(&p.inv(g), &p.inv(k1), &p.inv(g), one()).ok()?;
            let b = p
                .label(
                    &p.inv(g),
                    &p.rho(k2),
                    &p.rho(h),
                    t(p.lc(&[(1, g), (2, k2), (-1, h)])),
                )
                .ok()?;
            let mut e = Expected::default();
            let c = p.eps(k1, p.lc(&[(1, g), (-1, h), (2, k2)]));
            e.add_real(
                p.label(
                    &p.inv(g),
                    &p.rho(g_.add(k1, k2)),
                    &p.rho(h),
                    t(p.lc(&[(1, g), (2, k1), (2, k2), (-1, h)])),
                ),
                c,
            );
            Some((a, b, e))
        },
    )?);
    out.push(product_family(
        p,
        Family::corrected(
            "(g1 k1rho|1|k1rho g2)(g2 k2rho|T|k2rho hrho)",
            "the target of the second factor and of the result is read as hrho",
        ),
        4,
        &["g1", "k1", "k2", "h"],
        |x| {
            let (g1, k1, k2, h) = (x[0], x[1], x[2], x[3]);
            let g2 = g_.neg(g1);
            let a = p.label(&p.inv(g1), &p.rho(k1), &p.inv(g2), one()).ok()?;
            let b = p
                .label(
                    &p.inv(g2),
                    &p.rho(k2),
                    &p.rho(h),
                    t(p.lc(&[(1, g2), (2, k2), (-1, h)])),
                )
                .ok()?;
            let mut e = Expected::default();
            let pre = p.eps(
                p.lc(&[(1, k1), (-1, g2), (-2, k2), (1, h)]),
                p.lc(&[(1, g2), (2, k2), (-1, h)]),
            );
            for r in g_.elements() {
                let u = p.lc(&[(1, r), (-1, k1), (1, k2), (1, g2), (-1, h)]);
                let c = p.a(
                    p.lc(&[(2, k1), (-1, g2), (-2, k2), (1, h)]),
                    u,
                    p.lc(&[(1, u), (2, g1)]),
                ) * (pre * p.eps(g1, p.lc(&[(1, r), (1, k1), (-1, k2)])));
                e.add(
                    p.label(
                        &p.inv(g1),
                        &p.rho(r),
                        &p.rho(h),
                        t(p.lc(&[(2, r), (2, g1), (1, g2), (-1, h)])),
                    ),
                    c,
                );
            }
            Some((a, b, e))
        },
    )?);
    out.push(product_family(
        p,
        Family::corrected(
            "(g1 k1rho|T|k1rho hrho)(hrho k2rho|T*|k2rho g2)",
            "the undefined index h_2 in the leading sign is read as h",
        ),
        5,
        &["g1", "k1", "h", "k2", "g2"],
        |x| {
            let (g1, k1, h, k2, g2) = (x[0], x[1], x[2], x[3], x[4]);
            let a = p
                .label(
                    &p.inv(g1),
                    &p.rho(k1),
                    &p.rho(h),
                    t(p.lc(&[(2, k1), (1, g1), (-1, h)])),
                )
                .ok()?;
            let b = p
                .label(&p.rho(h), &p.rho(k2), &p.inv(g2), t_star(g_.sub(h, g2)))
                .ok()?;
            let mut e = Expected::default();
            let pre = p.eps(p.lc(&[(1, k1), (-1, h), (1, g2)]), g_.sub(h, g2));
            if g1 == g2 {
                e.add_real(
                    p.label(&p.inv(g1), &p.inv(g_.sub(k1, k2)), &p.inv(g2), one()),
                    pre,
                );
            }
            if g_.add(g1, g2) == g_.zero() {
                for r in g_.elements() {
                    let c = p.a(
                        p.lc(&[(2, k1), (-1, h), (1, g2)]),
                        p.lc(&[(1, r), (-1, k1), (-1, k2), (1, h), (-1, g2)]),
                        g_.sub(g1, g2),
                    ) * (pre * p.eps(g1, p.lc(&[(1, r), (1, k1), (-1, k2)])));
                    e.add(p.label(&p.inv(g1), &p.rho(r), &p.inv(g2), one()), c);
                }
            }
            Some((a, b, e))
        },
    )?);
    out.push(product_family(
        p,
        Family::corrected(
            "(h1rho k1rho|T*|k1rho g)(g k2rho|T|k2rho h2rho)",
            "the SS* term carries delta(2k1-2k2-2g-h1+h2), the condition for its label to exist, in place of delta(2k1-2k2-2g+h1+h2)",
        ),
        5,
        &["h1", "k1", "g", "k2", "h2"],
        |x| {
        let (h1, k1, g, k2, h2) = (x[0], x[1], x[2], x[3], x[4]);
        let a = p.label(&p.rho(h1), &p.rho(k1), &p.inv(g), t_star(g_.sub(h1, g))).ok()?;
        let b = p.label(&p.inv(g), &p.rho(k2), &p.rho(h2), t(p.lc(&[(2, k2), (1, g), (-1, h2)]))).ok()?;
        let mut e = Expected::default();
        let pre = p.eps(p.lc(&[(1, k1), (-2, k2), (-1, g), (1, h2)]), p.lc(&[(2, k2), (1, g), (-1, h2)]));
        if p.lc(&[(2, k2), (-2, k1), (1, h1), (-1, h2)]) == g_.zero() {
            e.add_real(p.label(&p.rho(h1), &p.inv(g_.sub(k1, k2)), &p.rho(h2), one()), pre / p.d);
        }
        if p.lc(&[(2, k1), (-2, k2), (-2, g), (-1, h1), (1, h2)]) == g_.zero() {
            let c = pre * p.eps(g_.neg(g), g_.add(g, h1));
            e.add_real(p.label(&p.rho(h1), &p.rho(p.lc(&[(1, g), (1, h1), (1, k2), (-1, k1)])), &p.rho(h2), ss()), c);
        }
        for r in g_.elements() {
            for j in g_.elements() {
                let c = p.a(
                    p.lc(&[(2, k1), (-2, k2), (-1, g), (1, h2)]),
                    p.lc(&[(1, r), (-1, k1), (1, k2), (1, g), (-1, h2)]),
                    p.lc(&[(2, k2), (-2, k1), (1, h1), (-1, h2), (1, j)]),
                ) * p.a(p.lc(&[(2, h1), (-1, r), (-1, k1), (1, k2)]), p.lc(&[(-1, h1), (-1, g), (1, r), (1, k1), (-1, k2)]), j)
                    * (pre * p.eps(p.lc(&[(1, h1), (-1, r), (-1, k1), (1, k2)]), p.lc(&[(1, r), (1, k1), (-1, k2)])));
                let m = tt(p.lc(&[(1, j), (1, r), (-1, k1), (1, k2), (1, h1), (-1, h2)]), p.lc(&[(1, j), (2, h1), (-1, r), (-1, k1), (1, k2)]));
                e.add(p.label(&p.rho(h1), &p.rho(r), &p.rho(h2), m), c);
            }
        }
        Some((a, b, e))
        },
    )?);
    Ok(out)
}

fn plain_rho_products(p: &Plain) -> Result<Vec<FamilyReport>, TubeError> {
    use hom::*;
    let g_ = p.g;
    let d = p.d;
    let mut out = Vec::new();
    // (h1rho k|1|k h2rho) exists iff h2 = h1 - 2k.
    out.push(product_family(
        p,
        Family::new("(h1rho k1|1|k1 h2rho)(h2rho k2|1|k2 h3rho)"),
        3,
        &["h1", "k1", "k2"],
        |x| {
            let (h1, k1, k2) = (x[0], x[1], x[2]);
            let h2 = p.lc(&[(1, h1), (-2, k1)]);
            let h3 = p.lc(&[(1, h2), (-2, k2)]);
            let a = p.label(&p.rho(h1), &p.inv(k1), &p.rho(h2), one()).ok()?;
            let b = p.label(&p.rho(h2), &p.inv(k2), &p.rho(h3), one()).ok()?;
            let mut e = Expected::default();
            e.add_real(
                p.label(&p.rho(h1), &p.inv(g_.add(k1, k2)), &p.rho(h3), one()),
                1.0,
            );
            Some((a, b, e))
        },
    )?);
    out.push(product_family(
        p,
        Family::new("(h1rho k1rho|SS*|k1rho h2rho)(h2rho k2|1|k2 h3rho)"),
        3,
        &["h1", "k1", "k2"],
        |x| {
            let (h1, k1, k2) = (x[0], x[1], x[2]);
            let h2 = p.lc(&[(2, k1), (-1, h1)]);
            let h3 = p.lc(&[(1, h2), (-2, k2)]);
            let a = p.label(&p.rho(h1), &p.rho(k1), &p.rho(h2), ss()).ok()?;
            let b = p.label(&p.rho(h2), &p.inv(k2), &p.rho(h3), one()).ok()?;
            let mut e = Expected::default();
            e.add_real(
                p.label(&p.rho(h1), &p.rho(g_.sub(k1, k2)), &p.rho(h3), ss()),
                1.0,
            );
            Some((a, b, e))
        },
    )?);
    out.push(product_family(
        p,
        Family::new("(h1rho k1|1|k1 h2rho)(h2rho k2rho|SS*|k2rho h3rho)"),
        3,
        &["h1", "k1", "k2"],
        |x| {
            let (h1, k1, k2) = (x[0], x[1], x[2]);
            let h2 = p.lc(&[(1, h1), (-2, k1)]);
            let h3 = p.lc(&[(2, k2), (-1, h2)]);
            let a = p.label(&p.rho(h1), &p.inv(k1), &p.rho(h2), one()).ok()?;
            let b = p.label(&p.rho(h2), &p.rho(k2), &p.rho(h3), ss()).ok()?;
            let mut e = Expected::default();
            e.add_real(
                p.label(&p.rho(h1), &p.rho(g_.add(k1, k2)), &p.rho(h3), ss()),
                1.0,
            );
            Some((a, b, e))
        },
    )?);
    out.push(product_family(
        p,
        Family::new("(h1rho k1|1|k1 h2rho)(h2rho k2rho|TT*|k2rho h3rho)"),
        5,
        &["h1", "k1", "k2", "h3", "g2"],
        |x| {
            let (h1, k1, k2, h3, g2) = (x[0], x[1], x[2], x[3], x[4]);
            let h2 = p.lc(&[(1, h1), (-2, k1)]);
            let a = p.label(&p.rho(h1), &p.inv(k1), &p.rho(h2), one()).ok()?;
            let b = p
                .label(
                    &p.rho(h2),
                    &p.rho(k2),
                    &p.rho(h3),
                    tt(
                        p.lc(&[(1, k2), (-1, h3), (1, g2)]),
                        p.lc(&[(1, h2), (-1, k2), (1, g2)]),
                    ),
                )
                .ok()?;
            let mut e = Expected::default();
            let c = p.eps(k1, p.lc(&[(1, k2), (-1, h3), (1, g2)]))
                * p.eps(k1, p.lc(&[(1, h2), (-1, k2), (1, g2)]));
            let m = tt(
                p.lc(&[(2, k1), (1, k2), (-1, h3), (1, g2)]),
                p.lc(&[(2, k1), (1, h2), (-1, k2), (1, g2)]),
            );
            e.add_real(
                p.label(&p.rho(h1), &p.rho(g_.add(k1, k2)), &p.rho(h3), m),
                c,
            );
            Some((a, b, e))
        },
    )?);
    out.push(product_family(
        p,
        Family::new("(h1rho k1rho|TT*|k1rho h2rho)(h2rho k2|1|k2 h3rho)"),
        5,
        &["h1", "k1", "h2", "g1", "k2"],
        |x| {
            let (h1, k1, h2, g1, k2) = (x[0], x[1], x[2], x[3], x[4]);
            let h3 = p.lc(&[(1, h2), (-2, k2)]);
            let m = tt(
                p.lc(&[(1, k1), (-1, h2), (1, g1)]),
                p.lc(&[(1, h1), (-1, k1), (1, g1)]),
            );
            let a = p.label(&p.rho(h1), &p.rho(k1), &p.rho(h2), m).ok()?;
            let b = p.label(&p.rho(h2), &p.inv(k2), &p.rho(h3), one()).ok()?;
            let mut e = Expected::default();
            e.add_real(
                p.label(&p.rho(h1), &p.rho(g_.sub(k1, k2)), &p.rho(h3), m),
                1.0,
            );
            Some((a, b, e))
        },
    )?);
    out.push(product_family(
        p,
        Family::new("(h1rho k1rho|SS*|k1rho h2rho)(h2rho k2rho|SS*|k2rho h3rho)"),
        3,
        &["h1", "k1", "k2"],
        |x| {
            let (h1, k1, k2) = (x[0], x[1], x[2]);
            let h2 = p.lc(&[(2, k1), (-1, h1)]);
            let h3 = p.lc(&[(2, k2), (-1, h2)]);
            let a = p.label(&p.rho(h1), &p.rho(k1), &p.rho(h2), ss()).ok()?;
            let b = p.label(&p.rho(h2), &p.rho(k2), &p.rho(h3), ss()).ok()?;
            let mut e = Expected::default();
            e.add_real(
                p.label(&p.rho(h1), &p.inv(g_.sub(k1, k2)), &p.rho(h3), one()),
                1.0 / (d * d * d),
            );
            for r in g_.elements() {
                let c = p.eps(
                    p.lc(&[(1, h1), (-1, r), (-1, k1), (1, k2)]),
                    p.lc(&[(1, r), (1, k1), (-1, k2)]),
                ) / (d * d);
                let m = tt(
                    p.lc(&[(1, r), (1, k1), (-1, k2)]),
                    p.lc(&[(2, h1), (-1, r), (-1, k1), (1, k2)]),
                );
                e.add_real(p.label(&p.rho(h1), &p.rho(r), &p.rho(h3), m), c);
            }
            Some((a, b, e))
        },
    )?);
    out.push(product_family(
        p,
        Family::corrected(
            "(h1rho k1rho|TT*|k1rho h2rho)(h2rho k2rho|SS*|k2rho h3rho)",
            "the second factor is read as (h2rho k2rho|SS*|k2rho h3rho) with h3 = 2k2 - h2, and the result target as h3rho",
        ),
        5,
        &["h1", "k1", "h2", "g1", "k2"],
        |x| {
            let (h1, k1, h2, g1, k2) = (x[0], x[1], x[2], x[3], x[4]);
            let h3 = p.lc(&[(2, k2), (-1, h2)]);
            let m = tt(p.lc(&[(1, k1), (-1, h2), (1, g1)]), p.lc(&[(1, h1), (-1, k1), (1, g1)]));
            let a = p.label(&p.rho(h1), &p.rho(k1), &p.rho(h2), m).ok()?;
            let b = p.label(&p.rho(h2), &p.rho(k2), &p.rho(h3), ss()).ok()?;
            let mut e = Expected::default();
            if p.lc(&[(2, k1), (-1, h1), (-1, h2)]) == g_.zero() {
                e.add_real(p.label(&p.rho(h1), &p.inv(g_.sub(k1, k2)), &p.rho(h3), one()), 1.0 / (d * d));
            }
            for r in g_.elements() {
                let c = p.a(p.lc(&[(2, h1), (-1, r), (-1, k1), (1, k2)]), p.lc(&[(1, g1), (-1, h1), (1, r), (-1, k2)]), p.lc(&[(2, k1), (-1, h1), (-1, h2)]))
                    * (p.eps(p.lc(&[(1, h1), (-1, r), (-1, k1), (1, k2)]), p.lc(&[(1, r), (1, k1), (-1, k2)])) / d);
                let m = tt(p.lc(&[(1, r), (1, k1), (-1, k2)]), p.lc(&[(-1, r), (1, k1), (1, k2), (1, h1), (-1, h2)]));
                e.add(p.label(&p.rho(h1), &p.rho(r), &p.rho(h3), m), c);
            }
            Some((a, b, e))
        },
    )?);
    out.push(product_family(
        p,
        Family::corrected(
            "(h1rho k1rho|SS*|k1rho h2rho)(h2rho k2rho|TT*|k2rho h3rho)",
            "the stray z_2 in the first A argument is dropped and the unit term reads (h1rho k1-k2|1|k1-k2 h3rho)",
        ),
        5,
        &["h1", "k1", "k2", "h3", "g1"],
        |x| {
            let (h1, k1, k2, h3, g1) = (x[0], x[1], x[2], x[3], x[4]);
            let h2 = p.lc(&[(2, k1), (-1, h1)]);
            let m = tt(p.lc(&[(1, k2), (-1, h3), (1, g1)]), p.lc(&[(1, h2), (-1, k2), (1, g1)]));
            let a = p.label(&p.rho(h1), &p.rho(k1), &p.rho(h2), ss()).ok()?;
            let b = p.label(&p.rho(h2), &p.rho(k2), &p.rho(h3), m).ok()?;
            let pre = p.eps(p.lc(&[(1, k1), (-1, k2), (1, h3), (-1, g1)]), p.lc(&[(1, k2), (-1, h3), (1, g1)]))
                * p.eps(p.lc(&[(1, k1), (-1, h2), (1, k2), (-1, g1)]), p.lc(&[(1, h2), (-1, k2), (1, g1)]));
            let mut e = Expected::default();
            if p.lc(&[(2, k2), (-1, h2), (-1, h3)]) == g_.zero() {
                e.add_real(p.label(&p.rho(h1), &p.inv(g_.sub(k1, k2)), &p.rho(h3), one()), pre / (d * d));
            }
            for r in g_.elements() {
                let c = p.a(p.lc(&[(2, k1), (-1, k2), (1, h3), (-1, g1)]), p.lc(&[(1, r), (-1, k1), (-1, h3), (1, g1)]), p.lc(&[(2, k2), (-1, h3), (-1, h2)]))
                    * (pre * p.eps(p.lc(&[(1, h1), (-1, r), (-1, k1), (1, k2)]), p.lc(&[(1, r), (1, k1), (-1, k2)])) / d);
                let m = tt(p.lc(&[(1, r), (1, k1), (1, k2), (-1, h2), (-1, h3)]), p.lc(&[(-1, r), (2, h1), (-1, k1), (1, k2)]));
                e.add(p.label(&p.rho(h1), &p.rho(r), &p.rho(h3), m), c);
            }
            Some((a, b, e))
        },
    )?);
    out.push(product_family(
        p,
        Family::new("(h1rho k1rho|TT*|k1rho h2rho)(h2rho k2rho|TT*|k2rho h3rho)"),
        7,
        &["h1", "k1", "h2", "g1", "k2", "h3", "g2"],
        |x| {
            let (h1, k1, h2, g1, k2, h3, g2) = (x[0], x[1], x[2], x[3], x[4], x[5], x[6]);
            let ma = tt(
                p.lc(&[(1, k1), (-1, h2), (1, g1)]),
                p.lc(&[(1, h1), (-1, k1), (1, g1)]),
            );
            let a = p.label(&p.rho(h1), &p.rho(k1), &p.rho(h2), ma).ok()?;
            let mb = tt(
                p.lc(&[(1, k2), (-1, h3), (1, g2)]),
                p.lc(&[(1, h2), (-1, k2), (1, g2)]),
            );
            let b = p.label(&p.rho(h2), &p.rho(k2), &p.rho(h3), mb).ok()?;
            {
                let pre = p.eps(
                    p.lc(&[(1, k1), (-1, h2), (1, k2), (-1, g2)]),
                    p.lc(&[(1, h2), (-1, k2), (1, g2)]),
                ) * p.eps(
                    p.lc(&[(1, k1), (-1, k2), (1, h3), (-1, g2)]),
                    p.lc(&[(1, k2), (-1, h3), (1, g2)]),
                );
                let mut e = Expected::default();
                if p.lc(&[(2, k1), (-2, k2), (1, h3), (-1, h1)]) == g_.zero() {
                    let c = p.a(
                        p.lc(&[(2, k1), (-1, h2), (1, k2), (-1, g2)]),
                        p.lc(&[(1, h2), (1, h3), (-2, k2)]),
                        p.lc(&[(1, g1), (1, g2), (-1, k1), (-1, k2)]),
                    ) * (pre / d);
                    e.add(
                        p.label(&p.rho(h1), &p.inv(g_.sub(k1, k2)), &p.rho(h3), one()),
                        c,
                    );
                }
                if p.lc(&[(1, k1), (1, k2), (-1, g1), (-1, g2)]) == g_.zero()
                    && p.lc(&[(1, k1), (-1, k2), (1, g1), (-1, g2), (1, h3), (-1, h1)]) == g_.zero()
                {
                    let c = pre * p.eps(g_.sub(g1, k1), p.lc(&[(1, h1), (1, k1), (-1, g1)]));
                    e.add_real(
                        p.label(
                            &p.rho(h1),
                            &p.rho(p.lc(&[(1, k2), (1, h1), (-1, g1)])),
                            &p.rho(h3),
                            ss(),
                        ),
                        c,
                    );
                }
                for j in g_.elements() {
                    for r in g_.elements() {
                        let c = p.a(
                            p.lc(&[(2, k1), (-1, k2), (1, h3), (-1, g2)]),
                            p.lc(&[(1, r), (-1, k1), (-1, h3), (1, g2)]),
                            p.lc(&[(1, j), (2, k2), (-1, h3), (-1, h2)]),
                        ) * p.a(
                            p.lc(&[(2, h1), (-1, r), (-1, k1), (1, k2)]),
                            p.lc(&[(1, g1), (-1, h1), (-1, k2), (1, r)]),
                            p.lc(&[(1, j), (2, k1), (-1, h1), (-1, h2)]),
                        ) * p.a(
                            p.lc(&[(2, k1), (-1, h2), (1, k2), (-1, g2)]),
                            j,
                            p.lc(&[(-1, k1), (-1, k2), (1, g1), (1, g2)]),
                        ) * (pre
                            * p.eps(
                                p.lc(&[(1, h1), (-1, r), (-1, k1), (1, k2)]),
                                p.lc(&[(1, r), (1, k1), (-1, k2)]),
                            ));
                        let m = tt(
                            p.lc(&[(1, j), (1, k1), (1, k2), (-1, h3), (-1, h2), (1, r)]),
                            p.lc(&[(1, j), (-1, r), (1, k1), (1, k2), (-1, h2), (1, h1)]),
                        );
                        e.add(p.label(&p.rho(h1), &p.rho(r), &p.rho(h3), m), c);
                    }
                }
                Some((a, b, e))
            }
        },
    )?);
    Ok(out)
}

fn plain_s0(p: &Plain) -> Result<Vec<FamilyReport>, TubeError> {
    use hom::*;
    let g_ = p.g;
    let d = p.d;
    let mut out = Vec::new();
    out.push(unary_family(
        p,
        Family::new("S0 (g k|1|k g)"),
        2,
        &["g", "k"],
        s0_op,
        |x| {
            let (g, k) = (x[0], x[1]);
            let a = p.label(&p.inv(g), &p.inv(k), &p.inv(g), one()).ok()?;
            let mut e = Expected::default();
            e.add_real(
                p.label(&p.inv(g_.neg(k)), &p.inv(g), &p.inv(g_.neg(k)), one()),
                1.0,
            );
            Some((a, e))
        },
    )?);
    out.push(unary_family(
        p,
        Family::new("S0 (g krho|1|krho g)"),
        2,
        &["g", "k"],
        s0_op,
        |x| {
            let (g, k) = (x[0], x[1]);
            let a = p.label(&p.inv(g), &p.rho(k), &p.inv(g), one()).ok()?;
            let mut e = Expected::default();
            e.add_real(p.label(&p.rho(k), &p.inv(g), &p.rho(k), one()), 1.0 / d);
            Some((a, e))
        },
    )?);
    out.push(unary_family(
        p,
        Family::new("S0 (hrho k|1|k hrho)"),
        2,
        &["h", "k"],
        s0_op,
        |x| {
            let (h, k) = (x[0], x[1]);
            let a = p.label(&p.rho(h), &p.inv(k), &p.rho(h), one()).ok()?;
            let mut e = Expected::default();
            e.add_real(
                p.label(&p.inv(g_.neg(k)), &p.rho(h), &p.inv(g_.neg(k)), one()),
                d,
            );
            Some((a, e))
        },
    )?);
    out.push(unary_family(
        p,
        Family::new("S0 (hrho krho|SS*|krho hrho)"),
        2,
        &["h", "k"],
        s0_op,
        |x| {
            let (h, k) = (x[0], x[1]);
            let a = p.label(&p.rho(h), &p.rho(k), &p.rho(h), ss()).ok()?;
            let mut e = Expected::default();
            e.add_real(p.label(&p.rho(k), &p.rho(h), &p.rho(k), ss()), 1.0 / d);
            for j in g_.elements() {
                e.add_real(p.label(&p.rho(k), &p.rho(h), &p.rho(k), tt(j, j)), 1.0 / d);
            }
            Some((a, e))
        },
    )?);
    out.push(unary_family(
        p,
        Family::new("S0 (hrho krho|TT*|krho hrho)"),
        3,
        &["h", "k", "g"],
        s0_op,
        |x| {
            let (h, k, g) = (x[0], x[1], x[2]);
            let m = tt(
                p.lc(&[(1, k), (-1, h), (1, g)]),
                p.lc(&[(1, h), (-1, k), (1, g)]),
            );
            let a = p.label(&p.rho(h), &p.rho(k), &p.rho(h), m).ok()?;
            let mk = g_.neg(k);
            let pre = p.eps(mk, p.lc(&[(1, k), (-1, h), (1, g)]))
                * p.eps(mk, p.lc(&[(1, h), (-1, k), (1, g)]))
                * p.eps(
                    p.lc(&[(-1, k), (-1, h), (1, g)]),
                    p.lc(&[(1, k), (1, h), (-1, g)]),
                )
                * p.eps(
                    p.lc(&[(1, h), (-3, k), (1, g)]),
                    p.lc(&[(-1, h), (3, k), (-1, g)]),
                );
            let mut e = Expected::default();
            if p.lc(&[(2, k), (-2, h)]) == g_.zero() {
                e.add_real(p.label(&p.rho(k), &p.rho(h), &p.rho(k), ss()), pre);
            }
            for j in g_.elements() {
                let c = p.a(
                    p.lc(&[(-1, h), (3, k), (-1, g)]),
                    p.lc(&[(2, h), (-2, k)]),
                    j,
                ) * pre;
                let m = tt(
                    p.lc(&[(1, j), (1, k), (1, h), (-1, g)]),
                    p.lc(&[(1, j), (-1, h), (3, k), (-1, g)]),
                );
                e.add(p.label(&p.rho(k), &p.rho(h), &p.rho(k), m), c);
            }
            Some((a, e))
        },
    )?);
    Ok(out)
}
