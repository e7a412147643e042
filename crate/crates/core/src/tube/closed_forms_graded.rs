//! Closed-form rules for the `Z/m`-graded extension. Objects are written
//! `(i,g)` for `gamma^i alpha_g` and `(i,g)rho` for `gamma^i alpha_g rho`.

use super::closed_forms::{hom, Expected, Family, FamilyReport, Obj};
use super::{Tube, TubeError};
use crate::cuntz::Monomial;
use crate::groups::{AbelianGroup, GroupAutomorphism, GroupElement};
use crate::numerics::CScalar;

struct Graded<'a> {
    tube: &'a Tube,
    g: &'a AbelianGroup,
    theta_pows: Vec<GroupAutomorphism>,
    m: usize,
    d: f64,
}

impl<'a> Graded<'a> {
    /// `sum c theta^e(x)` over `(e, c, x)`.
    fn s(&self, terms: &[(i64, i64, GroupElement)]) -> GroupElement {
        let g = self.g;
        let mut acc = g.zero();
        for &(e, c, x) in terms {
            let y = self.theta_pows[e.rem_euclid(self.m as i64) as usize].apply(x);
            let y = if c < 0 { g.neg(y) } else { y };
            for _ in 0..c.unsigned_abs() {
                acc = g.add(acc, y);
            }
        }
        acc
    }

    fn eps(&self, a: GroupElement, b: GroupElement) -> f64 {
        self.tube.data().eps(a, b) as f64
    }

    fn a(&self, x: GroupElement, h: GroupElement, k: GroupElement) -> CScalar {
        self.tube.data().a(x, h, k)
    }

    fn obj(&self, i: i64, x: GroupElement, rho: bool) -> Obj {
        let i = i.rem_euclid(self.m as i64) as usize;
        let name = format!("({i},{}){}", self.g.format(x), if rho { "rho" } else { "" });
        Obj {
            index: self.tube.object_index(self.tube.aut_element(i, x), rho),
            name,
        }
    }

    fn inv(&self, i: i64, x: GroupElement) -> Obj {
        self.obj(i, x, false)
    }

    fn rho(&self, i: i64, x: GroupElement) -> Obj {
        self.obj(i, x, true)
    }

    fn label(&self, s: &Obj, m: &Obj, t: &Obj, h: Monomial) -> Result<usize, String> {
        let describe = || format!("({} {}|{:?}|{} {})", s.name, m.name, h, m.name, t.name);
        match (s.index, m.index, t.index) {
            (Some(a), Some(b), Some(c)) => self.tube.find_label(a, b, c, &h).ok_or_else(describe),
            _ => Err(describe()),
        }
    }

    /// Enumerate `grades` indices in `Z/m` and `elems` group elements.
    fn family(
        &self,
        mut fam: Family,
        grades: usize,
        elems: usize,
        mut rule: impl FnMut(&[i64], &[GroupElement]) -> Option<(usize, usize, Expected)>,
    ) -> Result<FamilyReport, TubeError> {
        let m = self.m;
        let total_grades = m.pow(grades as u32);
        for gi in 0..total_grades {
            let mut rem = gi;
            let gs: Vec<i64> = (0..grades)
                .map(|_| {
                    let v = rem % m;
                    rem /= m;
                    v as i64
                })
                .collect();
            super::closed_forms::for_tuples(self.g, elems, |xs| {
                if let Some((a, b, e)) = rule(&gs, xs) {
                    let actual = self.tube.product_labels(a, b)?;
                    fam.record(&actual, &e, || {
                        let names: Vec<String> = xs.iter().map(|x| self.g.format(*x)).collect();
                        format!(
                            "{} * {} [grades {:?}, elements {:?}]",
                            self.tube.label_name(a),
                            self.tube.label_name(b),
                            gs,
                            names
                        )
                    });
                }
                Ok(())
            })?;
        }
        Ok(fam.finish())
    }
}

pub(super) fn graded_families(tube: &Tube) -> Result<Vec<FamilyReport>, TubeError> {
    let Some(theta) = tube.grading_automorphism() else {
        return Ok(Vec::new());
    };
    let m = theta.order();
    let gr = Graded {
        tube,
        g: tube.group(),
        theta_pows: (0..m).map(|e| theta.pow(e as i64)).collect(),
        m,
        d: tube.data().d,
    };
    let mut out = Vec::new();
    out.extend(group_corner(&gr)?);
    out.extend(group_to_rho(&gr)?);
    out.extend(rho_corner(&gr)?);
    Ok(out)
}

fn group_corner(gr: &Graded) -> Result<Vec<FamilyReport>, TubeError> {
    use hom::*;
    let mut out = Vec::new();
    out.push(gr.family(
        Family::new("graded ((i,g) (j,h)|1|(j,h) (i,l))((i,l) (k,m)|1|(k,m) (i,n))"),
        3,
        5,
        |q, x| {
            let (i, j, k) = (q[0], q[1], q[2]);
            let (g, h, l, mm, n) = (x[0], x[1], x[2], x[3], x[4]);
            let a = gr
                .label(&gr.inv(i, g), &gr.inv(j, h), &gr.inv(i, l), one())
                .ok()?;
            let b = gr
                .label(&gr.inv(i, l), &gr.inv(k, mm), &gr.inv(i, n), one())
                .ok()?;
            let mut e = Expected::default();
            let mid = gr.s(&[(-k, 1, h), (0, 1, mm)]);
            e.add_real(
                gr.label(&gr.inv(i, g), &gr.inv(j + k, mid), &gr.inv(i, n), one()),
                1.0,
            );
            Some((a, b, e))
        },
    )?);
    out.push(gr.family(
        Family::new("graded ((i,g) (j,h)|1|(j,h) (i,l))((i,l) (k,m)rho|1|(k,m)rho (i,n))"),
        3,
        5,
        |q, x| {
            let (i, j, k) = (q[0], q[1], q[2]);
            let (g, h, l, mm, n) = (x[0], x[1], x[2], x[3], x[4]);
            let a = gr
                .label(&gr.inv(i, g), &gr.inv(j, h), &gr.inv(i, l), one())
                .ok()?;
            let b = gr
                .label(&gr.inv(i, l), &gr.rho(k, mm), &gr.inv(i, n), one())
                .ok()?;
            let mut e = Expected::default();
            let mid = gr.s(&[(-k, 1, h), (0, 1, mm)]);
            e.add_real(
                gr.label(&gr.inv(i, g), &gr.rho(j + k, mid), &gr.inv(i, n), one()),
                1.0,
            );
            Some((a, b, e))
        },
    )?);
    out.push(gr.family(
        Family::new("graded ((i,g) (j,h)rho|1|(j,h)rho (i,l))((i,l) (k,m)|1|(k,m) (i,n))"),
        3,
        5,
        |q, x| {
            let (i, j, k) = (q[0], q[1], q[2]);
            let (g, h, l, mm, n) = (x[0], x[1], x[2], x[3], x[4]);
            let a = gr
                .label(&gr.inv(i, g), &gr.rho(j, h), &gr.inv(i, l), one())
                .ok()?;
            let b = gr
                .label(&gr.inv(i, l), &gr.inv(k, mm), &gr.inv(i, n), one())
                .ok()?;
            let mut e = Expected::default();
            let mid = gr.s(&[(-k, 1, h), (0, -1, mm)]);
            e.add_real(
                gr.label(&gr.inv(i, g), &gr.rho(j + k, mid), &gr.inv(i, n), one()),
                1.0,
            );
            Some((a, b, e))
        },
    )?);
    Ok(out)
}

fn group_to_rho(gr: &Graded) -> Result<Vec<FamilyReport>, TubeError> {
    use hom::*;
    let d = gr.d;
    let mut out = Vec::new();
    out.push(gr.family(
        Family::new("graded ((i,g) (j,h)|1|(j,h) (i,g))((i,g) (k,l)rho|T|(k,l)rho (i,m)rho)"),
        3,
        4,
        |q, x| {
            let (i, j, k) = (q[0], q[1], q[2]);
            let (g, h, l, mm) = (x[0], x[1], x[2], x[3]);
            let a = gr
                .label(&gr.inv(i, g), &gr.inv(j, h), &gr.inv(i, g), one())
                .ok()?;
            let tx = gr.s(&[(i, 1, g), (k, 1, l), (i + k, 1, l), (i + k, -1, mm)]);
            let b = gr
                .label(&gr.inv(i, g), &gr.rho(k, l), &gr.rho(i, mm), t(tx))
                .ok()?;
            let mut e = Expected::default();
            let mid = gr.s(&[(-k, 1, h), (0, 1, l)]);
            let ty = gr.s(&[
                (j, 2, h),
                (i + j, 1, g),
                (j + k, 1, l),
                (i + j + k, 1, l),
                (i + j + k, -1, mm),
            ]);
            e.add_real(
                gr.label(&gr.inv(i, g), &gr.rho(j + k, mid), &gr.rho(i, mm), t(ty)),
                gr.eps(h, tx),
            );
            Some((a, b, e))
        },
    )?);
    out.push(gr.family(
        Family::new("graded ((i,g) (j,h)rho|1|(j,h)rho (i,g))((i,g) (k,l)rho|T|(k,l)rho (i,m)rho)"),
        3,
        4,
        |q, x| {
            let (i, j, k) = (q[0], q[1], q[2]);
            let (g, h, l, mm) = (x[0], x[1], x[2], x[3]);
            let a = gr
                .label(&gr.inv(i, g), &gr.rho(j, h), &gr.inv(i, g), one())
                .ok()?;
            let tx = gr.s(&[(i, 1, g), (k, 1, l), (i + k, 1, l), (i + k, -1, mm)]);
            let b = gr
                .label(&gr.inv(i, g), &gr.rho(k, l), &gr.rho(i, mm), t(tx))
                .ok()?;
            let y = gr.s(&[
                (j, -2, h),
                (j + i, 1, g),
                (j + k, 1, l),
                (i + j + k, 1, l),
                (i + j + k, -1, mm),
            ]);
            let my = gr.g.neg(y);
            let pre = gr.eps(gr.g.neg(h), tx) * gr.eps(y, my);
            let mut e = Expected::default();
            for c in gr.g.elements() {
                let u = gr.s(&[
                    (j, -1, h),
                    (j + k, 1, c),
                    (i + j, 1, g),
                    (i + j + k, 1, l),
                    (i + j + k, -1, mm),
                ]);
                let v = gr.s(&[
                    (i + j, 1, g),
                    (i + j, 1, h),
                    (i + j + k, 1, c),
                    (i + j + k, -1, mm),
                    (j + k, 1, l),
                    (i, 2, g),
                    (j, -2, h),
                ]);
                let coef = gr.a(my, u, v)
                    * (pre * gr.eps(g, gr.s(&[(j + k, 1, c), (j + k, -1, l), (j, 1, h)])));
                let w = gr.s(&[
                    (i, 2, g),
                    (j + k, 1, c),
                    (i + j + k, 1, c),
                    (i + j + k, -1, mm),
                    (j, -1, h),
                    (i + j, 1, g),
                    (i + j, 1, h),
                ]);
                e.add(
                    gr.label(&gr.inv(i, g), &gr.rho(j + k, c), &gr.rho(i, mm), t(w)),
                    coef,
                );
            }
            Some((a, b, e))
        },
    )?);
    out.push(gr.family(
        Family::new(
            "graded ((i,g) (k,l)rho|T|(k,l)rho (i,m)rho)((i,m)rho (p,q)rho|T*|(p,q)rho (i,g))",
        ),
        3,
        4,
        |q, x| {
            let (i, k, p) = (q[0], q[1], q[2]);
            let (g, l, mm, qq) = (x[0], x[1], x[2], x[3]);
            let tx = gr.s(&[(i, 1, g), (k, 1, l), (i + k, 1, l), (i + k, -1, mm)]);
            let a = gr
                .label(&gr.inv(i, g), &gr.rho(k, l), &gr.rho(i, mm), t(tx))
                .ok()?;
            let ty = gr.s(&[(i, 1, mm), (p, 1, qq), (i + p, 1, qq), (i + p, -1, g)]);
            let b = gr
                .label(&gr.rho(i, mm), &gr.rho(p, qq), &gr.inv(i, g), t_star(ty))
                .ok()?;
            let z = gr.s(&[
                (k, -2, l),
                (k + i, 1, mm),
                (k + p, 1, qq),
                (k + i + p, 1, g),
                (k + i + p, -1, qq),
            ]);
            let mz = gr.g.neg(z);
            let pre = gr.eps(
                l,
                gr.s(&[(i, 1, mm), (p, 1, qq), (i + p, 1, g), (i + p, -1, qq)]),
            ) * gr.eps(z, mz);
            let mut e = Expected::default();
            if mz == tx {
                let mid = gr.s(&[(-p, 1, l), (0, -1, qq)]);
                e.add_real(
                    gr.label(&gr.inv(i, g), &gr.inv(k + p, mid), &gr.inv(i, g), one()),
                    pre,
                );
            }
            for c in gr.g.elements() {
                if gr.s(&[
                    (k + p, 1, c),
                    (i + k + p, 1, g),
                    (i + k + p, -1, c),
                    (i, -1, g),
                ]) != gr.g.zero()
                {
                    continue;
                }
                let u = gr.s(&[
                    (k + p, 1, c),
                    (k, -1, l),
                    (i + k, 1, mm),
                    (i + k + p, 1, g),
                    (i + k + p, -1, qq),
                ]);
                let v = gr.s(&[
                    (i, 1, g),
                    (k, -1, l),
                    (i + k, 1, l),
                    (k + p, 1, qq),
                    (k + i + p, 1, g),
                    (k + i + p, -1, qq),
                ]);
                let coef = gr.a(mz, u, v)
                    * (pre * gr.eps(g, gr.s(&[(k + p, 1, c), (k + p, -1, qq), (k, 1, l)])));
                e.add(
                    gr.label(&gr.inv(i, g), &gr.rho(k + p, c), &gr.inv(i, g), one()),
                    coef,
                );
            }
            Some((a, b, e))
        },
    )?);
    out.push(gr.family(
        Family::new(
            "graded ((i,m)rho (p,q)rho|T*|(p,q)rho (i,g))((i,g) (k,l)rho|T|(k,l)rho (i,m)rho)",
        ),
        3,
        4,
        |q, x| {
            let (i, p, k) = (q[0], q[1], q[2]);
            let (mm, qq, g, l) = (x[0], x[1], x[2], x[3]);
            let ty = gr.s(&[(i, 1, mm), (p, 1, qq), (i + p, 1, qq), (i + p, -1, g)]);
            let a = gr
                .label(&gr.rho(i, mm), &gr.rho(p, qq), &gr.inv(i, g), t_star(ty))
                .ok()?;
            let tx = gr.s(&[(i, 1, g), (k, 1, l), (i + k, 1, l), (i + k, -1, mm)]);
            let b = gr
                .label(&gr.inv(i, g), &gr.rho(k, l), &gr.rho(i, mm), t(tx))
                .ok()?;
            let qv = gr.s(&[
                (p, -2, qq),
                (i + p, 1, g),
                (k + p, 1, l),
                (i + k + p, 1, l),
                (i + k + p, -1, mm),
            ]);
            let mq = gr.g.neg(qv);
            let pre = gr.eps(gr.g.neg(qq), tx) * gr.eps(qv, mq);
            let mut e = Expected::default();
            let lhs = gr.s(&[(k + p, -1, l), (i + k + p, 1, mm), (i + k + p, -1, l)]);
            let rhs = gr.s(&[(i, 1, mm), (p, -1, qq), (i + p, 1, qq)]);
            if lhs == rhs {
                let mid = gr.s(&[(-k, 1, qq), (0, -1, l)]);
                e.add_real(
                    gr.label(&gr.rho(i, mm), &gr.inv(p + k, mid), &gr.rho(i, mm), one()),
                    pre / d,
                );
            }
            for c in gr.g.elements() {
                let r_ = gr.s(&[
                    (i, -2, mm),
                    (i + p + k, 1, c),
                    (i + p + k, -1, l),
                    (i + p, 1, qq),
                ]);
                let mr = gr.g.neg(r_);
                let inner =
                    pre * gr.eps(
                        gr.g.neg(mm),
                        gr.s(&[(p + k, 1, c), (p + k, -1, l), (p, 1, qq)]),
                    ) * gr.eps(r_, mr);
                let d1 = gr.s(&[(p + k, 1, c), (p, -1, qq)])
                    == gr.s(&[(i + p, -1, g), (i + k + p, 1, mm), (i + k + p, -1, l)]);
                let d2 = gr.s(&[(i, -1, mm), (p, 1, qq), (i + p, 2, qq), (i + p, -1, g)])
                    == gr.s(&[(i + p + k, -1, c), (i + p + k, 1, l)]);
                if d1 && d2 {
                    e.add_real(
                        gr.label(&gr.rho(i, mm), &gr.rho(p + k, c), &gr.rho(i, mm), ss()),
                        inner,
                    );
                }
                for r in gr.g.elements() {
                    let alpha = gr.s(&[
                        (p + k, 1, c),
                        (p, -1, qq),
                        (i + p, 1, g),
                        (i + k + p, 1, l),
                        (i + k + p, -1, mm),
                    ]);
                    let beta = gr.s(&[
                        (k + p, 1, l),
                        (i + k + p, 1, l),
                        (i + k + p, -1, mm),
                        (i, 1, mm),
                        (p, -1, qq),
                        (i + p, 1, qq),
                        (0, 1, r),
                    ]);
                    let gamma = gr.s(&[
                        (i, -1, mm),
                        (p, 1, qq),
                        (i + p, 2, qq),
                        (i + p, -1, g),
                        (i + p + k, 1, c),
                        (i + p + k, -1, l),
                    ]);
                    let coef = gr.a(mq, alpha, beta) * gr.a(mr, gamma, r) * inner;
                    let w = gr.s(&[
                        (0, 1, r),
                        (i, 1, mm),
                        (p + k, 1, c),
                        (i + p, 1, qq),
                        (i + p + k, 1, l),
                        (i + p + k, -1, mm),
                    ]);
                    let v = gr.s(&[
                        (0, 1, r),
                        (i, 2, mm),
                        (i + p + k, 1, l),
                        (i + p + k, -1, c),
                        (i + p, 1, qq),
                    ]);
                    e.add(
                        gr.label(&gr.rho(i, mm), &gr.rho(p + k, c), &gr.rho(i, mm), tt(w, v)),
                        coef,
                    );
                }
            }
            Some((a, b, e))
        },
    )?);
    Ok(out)
}

fn rho_corner(gr: &Graded) -> Result<Vec<FamilyReport>, TubeError> {
    use hom::*;
    let d = gr.d;
    let g_ = gr.g;
    let mut out = Vec::new();
    // Labels of the corner A_{(i,g)rho}.
    let tt_mid = |i: i64, j: i64, g: GroupElement, h: GroupElement, m: GroupElement| {
        tt(
            gr.s(&[(0, 1, m), (j, 1, h), (i + j, -1, g)]),
            gr.s(&[(0, 1, m), (i, 1, g), (i + j, -1, h)]),
        )
    };
    out.push(gr.family(
        Family::new("graded ((i,g)rho (j,h)|1|(j,h) (i,g)rho)((i,g)rho (k,l)|1|(k,l) (i,g)rho)"),
        3,
        3,
        |q, x| {
            let (i, j, k) = (q[0], q[1], q[2]);
            let (g, h, l) = (x[0], x[1], x[2]);
            let a = gr
                .label(&gr.rho(i, g), &gr.inv(j, h), &gr.rho(i, g), one())
                .ok()?;
            let b = gr
                .label(&gr.rho(i, g), &gr.inv(k, l), &gr.rho(i, g), one())
                .ok()?;
            let mut e = Expected::default();
            e.add_real(
                gr.label(
                    &gr.rho(i, g),
                    &gr.inv(j + k, gr.s(&[(-k, 1, h), (0, 1, l)])),
                    &gr.rho(i, g),
                    one(),
                ),
                1.0,
            );
            Some((a, b, e))
        },
    )?);
    out.push(gr.family(
        Family::new("graded ((i,g)rho (j,h)rho|SS*|..)((i,g)rho (k,l)|1|..)"),
        3,
        3,
        |q, x| {
            let (i, j, k) = (q[0], q[1], q[2]);
            let (g, h, l) = (x[0], x[1], x[2]);
            let a = gr
                .label(&gr.rho(i, g), &gr.rho(j, h), &gr.rho(i, g), ss())
                .ok()?;
            let b = gr
                .label(&gr.rho(i, g), &gr.inv(k, l), &gr.rho(i, g), one())
                .ok()?;
            let mut e = Expected::default();
            e.add_real(
                gr.label(
                    &gr.rho(i, g),
                    &gr.rho(j + k, gr.s(&[(-k, 1, h), (0, -1, l)])),
                    &gr.rho(i, g),
                    ss(),
                ),
                1.0,
            );
            Some((a, b, e))
        },
    )?);
    out.push(gr.family(
        Family::new("graded ((i,g)rho (j,h)|1|..)((i,g)rho (k,l)rho|SS*|..)"),
        3,
        3,
        |q, x| {
            let (i, j, k) = (q[0], q[1], q[2]);
            let (g, h, l) = (x[0], x[1], x[2]);
            let a = gr
                .label(&gr.rho(i, g), &gr.inv(j, h), &gr.rho(i, g), one())
                .ok()?;
            let b = gr
                .label(&gr.rho(i, g), &gr.rho(k, l), &gr.rho(i, g), ss())
                .ok()?;
            let mut e = Expected::default();
            e.add_real(
                gr.label(
                    &gr.rho(i, g),
                    &gr.rho(j + k, gr.s(&[(-k, 1, h), (0, 1, l)])),
                    &gr.rho(i, g),
                    ss(),
                ),
                1.0,
            );
            Some((a, b, e))
        },
    )?);
    out.push(gr.family(
        Family::new("graded ((i,g)rho (j,h)rho|TT*|..)((i,g)rho (k,l)|1|..)"),
        3,
        4,
        |q, x| {
            let (i, j, k) = (q[0], q[1], q[2]);
            let (g, h, mm, l) = (x[0], x[1], x[2], x[3]);
            let a = gr
                .label(
                    &gr.rho(i, g),
                    &gr.rho(j, h),
                    &gr.rho(i, g),
                    tt_mid(i, j, g, h, mm),
                )
                .ok()?;
            let b = gr
                .label(&gr.rho(i, g), &gr.inv(k, l), &gr.rho(i, g), one())
                .ok()?;
            let mut e = Expected::default();
            e.add_real(
                gr.label(
                    &gr.rho(i, g),
                    &gr.rho(j + k, gr.s(&[(-k, 1, h), (0, -1, l)])),
                    &gr.rho(i, g),
                    tt_mid(i, j, g, h, mm),
                ),
                1.0,
            );
            Some((a, b, e))
        },
    )?);
    out.push(gr.family(
        Family::new("graded ((i,g)rho (j,h)|1|..)((i,g)rho (k,l)rho|TT*|..)"),
        3,
        4,
        |q, x| {
            let (i, j, k) = (q[0], q[1], q[2]);
            let (g, h, l, n) = (x[0], x[1], x[2], x[3]);
            let a = gr
                .label(&gr.rho(i, g), &gr.inv(j, h), &gr.rho(i, g), one())
                .ok()?;
            let b = gr
                .label(
                    &gr.rho(i, g),
                    &gr.rho(k, l),
                    &gr.rho(i, g),
                    tt_mid(i, k, g, l, n),
                )
                .ok()?;
            let c = gr.eps(h, gr.s(&[(0, 1, n), (k, 1, l), (i + k, -1, g)]))
                * gr.eps(h, gr.s(&[(0, 1, n), (i, 1, g), (i + k, -1, l)]));
            let w = gr.s(&[(j, 1, n), (j, 2, h), (j + k, 1, l), (i + j + k, -1, g)]);
            let v = gr.s(&[(j, 1, n), (j, 2, h), (i + j, 1, g), (i + j + k, -1, l)]);
            let mut e = Expected::default();
            e.add_real(
                gr.label(
                    &gr.rho(i, g),
                    &gr.rho(j + k, gr.s(&[(-k, 1, h), (0, 1, l)])),
                    &gr.rho(i, g),
                    tt(w, v),
                ),
                c,
            );
            Some((a, b, e))
        },
    )?);
    out.push(gr.family(
        Family::new("graded ((i,g)rho (j,h)rho|SS*|..)((i,g)rho (k,l)rho|SS*|..)"),
        3,
        3,
        |q, x| {
            let (i, j, k) = (q[0], q[1], q[2]);
            let (g, h, l) = (x[0], x[1], x[2]);
            let a = gr
                .label(&gr.rho(i, g), &gr.rho(j, h), &gr.rho(i, g), ss())
                .ok()?;
            let b = gr
                .label(&gr.rho(i, g), &gr.rho(k, l), &gr.rho(i, g), ss())
                .ok()?;
            let mut e = Expected::default();
            let unit_mid = gr.s(&[(-k, 1, h), (0, -1, l)]);
            e.add_real(
                gr.label(
                    &gr.rho(i, g),
                    &gr.inv(j + k, unit_mid),
                    &gr.rho(i, g),
                    one(),
                ),
                1.0 / (d * d * d),
            );
            for c in g_.elements() {
                let u = gr.s(&[(j + k, 1, c), (j, 1, h), (j + k, -1, l)]);
                let y = gr.s(&[
                    (i, -2, g),
                    (i + j + k, 1, c),
                    (i + j, 1, h),
                    (i + j + k, -1, l),
                ]);
                let coef = gr.eps(g_.neg(g), u) * gr.eps(y, g_.neg(y)) / (d * d);
                let v = gr.s(&[
                    (i, 2, g),
                    (i + j + k, -1, c),
                    (i + j, -1, h),
                    (i + j + k, 1, l),
                ]);
                e.add_real(
                    gr.label(&gr.rho(i, g), &gr.rho(j + k, c), &gr.rho(i, g), tt(u, v)),
                    coef,
                );
            }
            Some((a, b, e))
        },
    )?);
    out.push(gr.family(
        Family::new("graded ((i,g)rho (j,h)rho|TT*|..)((i,g)rho (k,l)rho|SS*|..)"),
        3,
        4,
        |q, x| {
            let (i, j, k) = (q[0], q[1], q[2]);
            let (g, h, mm, l) = (x[0], x[1], x[2], x[3]);
            let a = gr
                .label(
                    &gr.rho(i, g),
                    &gr.rho(j, h),
                    &gr.rho(i, g),
                    tt_mid(i, j, g, h, mm),
                )
                .ok()?;
            let b = gr
                .label(&gr.rho(i, g), &gr.rho(k, l), &gr.rho(i, g), ss())
                .ok()?;
            let mut e = Expected::default();
            if gr.s(&[(i, 1, g), (j, -1, h), (i + j, 1, g), (i + j, -1, h)]) == g_.zero() {
                let unit_mid = gr.s(&[(-k, 1, h), (0, -1, l)]);
                e.add_real(
                    gr.label(
                        &gr.rho(i, g),
                        &gr.inv(j + k, unit_mid),
                        &gr.rho(i, g),
                        one(),
                    ),
                    1.0 / (d * d),
                );
            }
            for c in g_.elements() {
                let u = gr.s(&[(j + k, 1, c), (j, 1, h), (j + k, -1, l)]);
                let y = gr.s(&[
                    (i, -2, g),
                    (i + j + k, 1, c),
                    (i + j, 1, h),
                    (i + j + k, -1, l),
                ]);
                let idx = gr.s(&[
                    (i, 2, g),
                    (i + j + k, 1, l),
                    (i + j + k, -1, c),
                    (i + j, -1, h),
                ]);
                let a1 = gr.s(&[
                    (0, 1, mm),
                    (i, -1, g),
                    (i + j + k, 1, c),
                    (i + j + k, -1, l),
                ]);
                let a2 = gr.s(&[(i, -1, g), (j, 1, h), (i + j, 1, h), (i + j, -1, g)]);
                let coef = gr.a(idx, a1, a2) * (gr.eps(g_.neg(g), u) * gr.eps(y, g_.neg(y)) / d);
                let v = gr.s(&[
                    (i, 1, g),
                    (j, 1, h),
                    (i + j, -1, g),
                    (i + j + k, 1, l),
                    (i + j + k, -1, c),
                ]);
                e.add(
                    gr.label(&gr.rho(i, g), &gr.rho(j + k, c), &gr.rho(i, g), tt(u, v)),
                    coef,
                );
            }
            Some((a, b, e))
        },
    )?);
    out.push(gr.family(
        Family::new("graded ((i,g)rho (j,h)rho|SS*|..)((i,g)rho (k,l)rho|TT*|..)"),
        3,
        4,
        |q, x| {
            let (i, j, k) = (q[0], q[1], q[2]);
            let (g, h, l, n) = (x[0], x[1], x[2], x[3]);
            let a = gr
                .label(&gr.rho(i, g), &gr.rho(j, h), &gr.rho(i, g), ss())
                .ok()?;
            let b = gr
                .label(
                    &gr.rho(i, g),
                    &gr.rho(k, l),
                    &gr.rho(i, g),
                    tt_mid(i, k, g, l, n),
                )
                .ok()?;
            let p1 = gr.s(&[(j, 1, n), (j, -2, h), (j + k, 1, l), (i + j + k, -1, g)]);
            let p2 = gr.s(&[(j, 1, n), (j, -2, h), (i + j, 1, g), (i + j + k, -1, l)]);
            let mh = g_.neg(h);
            let pre = gr.eps(mh, gr.s(&[(0, 1, n), (k, 1, l), (i + k, -1, g)]))
                * gr.eps(mh, gr.s(&[(0, 1, n), (i, 1, g), (i + k, -1, l)]))
                * gr.eps(p1, g_.neg(p1))
                * gr.eps(p2, g_.neg(p2));
            let mut e = Expected::default();
            if gr.s(&[(i, -1, g), (k, 1, l), (i + k, 1, l), (i + k, -1, g)]) == g_.zero() {
                let unit_mid = gr.s(&[(-k, 1, h), (0, -1, l)]);
                e.add_real(
                    gr.label(
                        &gr.rho(i, g),
                        &gr.inv(j + k, unit_mid),
                        &gr.rho(i, g),
                        one(),
                    ),
                    pre / (d * d),
                );
            }
            for c in g_.elements() {
                let u = gr.s(&[(j + k, 1, c), (j, 1, h), (j + k, -1, l)]);
                let y = gr.s(&[
                    (i, -2, g),
                    (i + j + k, 1, c),
                    (i + j, 1, h),
                    (i + j + k, -1, l),
                ]);
                let idx = gr.g.neg(p1);
                let a1 = gr.s(&[(j + k, 1, c), (j, 1, n), (j, -1, h), (i + j + k, -1, g)]);
                let a2 = gr.s(&[
                    (j + k, 1, l),
                    (i + j, -1, g),
                    (i + j + k, 1, l),
                    (i + j + k, -1, g),
                ]);
                let coef =
                    gr.a(idx, a1, a2) * (pre * gr.eps(g_.neg(g), u) * gr.eps(y, g_.neg(y)) / d);
                let w = gr.s(&[
                    (j + k, 1, c),
                    (j, 1, h),
                    (i + j, -1, g),
                    (i + j + k, 1, l),
                    (i + j + k, -1, g),
                ]);
                let v = gr.s(&[
                    (i, 2, g),
                    (i + j + k, 1, l),
                    (i + j + k, -1, c),
                    (i + j, -1, h),
                ]);
                e.add(
                    gr.label(&gr.rho(i, g), &gr.rho(j + k, c), &gr.rho(i, g), tt(w, v)),
                    coef,
                );
            }
            Some((a, b, e))
        },
    )?);
    out.push(gr.family(
        Family::new("graded ((i,g)rho (j,h)rho|TT*|..)((i,g)rho (k,l)rho|TT*|..)"),
        3,
        5,
        |q, x| {
            let (i, j, k) = (q[0], q[1], q[2]);
            let (g, h, mm, l, n) = (x[0], x[1], x[2], x[3], x[4]);
            let a = gr
                .label(
                    &gr.rho(i, g),
                    &gr.rho(j, h),
                    &gr.rho(i, g),
                    tt_mid(i, j, g, h, mm),
                )
                .ok()?;
            let b = gr
                .label(
                    &gr.rho(i, g),
                    &gr.rho(k, l),
                    &gr.rho(i, g),
                    tt_mid(i, k, g, l, n),
                )
                .ok()?;
            let p1 = gr.s(&[(j, 1, n), (j, -2, h), (j + k, 1, l), (i + j + k, -1, g)]);
            let p2 = gr.s(&[(j, 1, n), (j, -2, h), (i + j, 1, g), (i + j + k, -1, l)]);
            let mh = g_.neg(h);
            let pre = gr.eps(mh, gr.s(&[(0, 1, n), (k, 1, l), (i + k, -1, g)]))
                * gr.eps(mh, gr.s(&[(0, 1, n), (i, 1, g), (i + k, -1, l)]))
                * gr.eps(p1, g_.neg(p1))
                * gr.eps(p2, g_.neg(p2));
            let mut e = Expected::default();
            let b_idx = gr.s(&[(j, 2, h), (j, -1, n), (i + j, -1, g), (i + j + k, 1, l)]);
            let b2 = gr.s(&[(0, 1, mm), (j, 1, n), (j, -1, h), (i + j + k, -1, l)]);
            if gr.s(&[
                (i, 1, g),
                (j, -1, h),
                (i + j, -1, h),
                (j + k, 1, l),
                (i + j + k, 1, l),
                (i + j + k, -1, g),
            ]) == g_.zero()
            {
                let a1 = gr.s(&[
                    (j + k, -1, l),
                    (i + j, 1, g),
                    (i + j + k, 1, g),
                    (i + j + k, -1, l),
                ]);
                let coef = gr.a(b_idx, a1, b2) * (pre / d);
                let unit_mid = gr.s(&[(-k, 1, h), (0, -1, l)]);
                e.add(
                    gr.label(
                        &gr.rho(i, g),
                        &gr.inv(j + k, unit_mid),
                        &gr.rho(i, g),
                        one(),
                    ),
                    coef,
                );
            }
            for c in g_.elements() {
                let r9 = gr.s(&[
                    (i, -2, g),
                    (i + j + k, 1, c),
                    (i + j + k, -1, l),
                    (i + j, 1, h),
                ]);
                let inner = pre
                    * gr.eps(g_.neg(g), gr.s(&[(j + k, 1, c), (j + k, -1, l), (j, 1, h)]))
                    * gr.eps(r9, g_.neg(r9));
                let d1 =
                    gr.s(&[(j + k, 1, c), (j, 1, n), (j, -1, h), (i + j + k, -1, g)]) == g_.zero();
                let d2 = b2 == g_.zero();
                let d3 = gr.s(&[
                    (0, 1, mm),
                    (i, -1, g),
                    (i + j + k, 1, c),
                    (i + j + k, -1, l),
                ]) == g_.zero();
                if d1 && d2 && d3 {
                    e.add_real(
                        gr.label(&gr.rho(i, g), &gr.rho(j + k, c), &gr.rho(i, g), ss()),
                        inner,
                    );
                }
                for r in g_.elements() {
                    let f1 = gr.a(
                        g_.neg(p1),
                        gr.s(&[(j + k, 1, c), (j, 1, n), (j, -1, h), (i + j + k, -1, g)]),
                        gr.s(&[
                            (j + k, 1, l),
                            (i + j, -1, g),
                            (i + j + k, 1, l),
                            (i + j + k, -1, g),
                            (0, 1, r),
                        ]),
                    );
                    let f2 = gr.a(
                        gr.s(&[
                            (i, 2, g),
                            (i + j + k, -1, c),
                            (i + j, -1, h),
                            (i + j + k, 1, l),
                        ]),
                        gr.s(&[
                            (0, 1, mm),
                            (i, -1, g),
                            (i + j + k, 1, c),
                            (i + j + k, -1, l),
                        ]),
                        gr.s(&[
                            (i, -1, g),
                            (j, 1, h),
                            (i + j, 1, h),
                            (i + j, -1, g),
                            (0, 1, r),
                        ]),
                    );
                    let f3 = gr.a(b_idx, r, b2);
                    let w = gr.s(&[
                        (0, 1, r),
                        (j + k, 1, c),
                        (j, 1, h),
                        (i + j, -1, g),
                        (i + j + k, 1, l),
                        (i + j + k, -1, g),
                    ]);
                    let v = gr.s(&[
                        (0, 1, r),
                        (i, 1, g),
                        (i + j, -1, g),
                        (j, 1, h),
                        (i + j + k, 1, l),
                        (i + j + k, -1, c),
                    ]);
                    e.add(
                        gr.label(&gr.rho(i, g), &gr.rho(j + k, c), &gr.rho(i, g), tt(w, v)),
                        f1 * f2 * f3 * inner,
                    );
                }
            }
            Some((a, b, e))
        },
    )?);
    Ok(out)
}
