//! Closed-form rules for the `Z/2` de-equivariantization. Objects are indexed
//! by coset representatives `G_0`; `pi` projects onto them, `w` records whether
//! an element is its own representative and `lambda` implements `alpha_z`.

use super::closed_forms::{hom, Expected, Family, FamilyReport, Plain};
use super::{Tube, TubeError};
use crate::cuntz::Monomial;
use crate::groups::{DeequivFrame, GroupElement};

type GE = GroupElement;

enum Input {
    Product(usize, usize),
    Adjoint(usize),
    S0(usize),
}

struct Deq<'a> {
    p: Plain<'a>,
    frame: &'a DeequivFrame,
}

impl<'a> Deq<'a> {
    fn pi(&self, x: GE) -> GE {
        self.frame.project(x)
    }

    fn w(&self, x: GE) -> u32 {
        self.frame.winding(x) as u32
    }

    /// Element of `{0, z}` selected by a bit.
    fn zb(&self, bit: u32) -> GE {
        if bit % 2 == 1 {
            self.frame.z
        } else {
            self.p.g.zero()
        }
    }

    /// `eps_z(x)^power`.
    fn ez(&self, x: GE, power: u32) -> f64 {
        if power % 2 == 1 {
            self.p.eps(self.frame.z, x)
        } else {
            1.0
        }
    }

    fn lam(m: Monomial, e: u32) -> Monomial {
        if e % 2 == 1 {
            hom::lam(m)
        } else {
            m
        }
    }

    /// Enumerate `elems` representatives and `bits` elements of `{0, z}`.
    fn family(
        &self,
        mut fam: Family,
        elems: usize,
        bits: usize,
        mut rule: impl FnMut(&[GE], &[u32]) -> Option<(Input, Expected)>,
    ) -> Result<FamilyReport, TubeError> {
        let reps = &self.frame.reps;
        let tube = self.p.tube;
        let mut idx = vec![0usize; elems];
        'outer: loop {
            let xs: Vec<GE> = idx.iter().map(|&i| reps[i]).collect();
            for mask in 0..(1u32 << bits) {
                let zs: Vec<u32> = (0..bits).map(|b| (mask >> b) & 1).collect();
                if let Some((input, e)) = rule(&xs, &zs) {
                    let (actual, what) = match input {
                        Input::Product(a, b) => (
                            tube.product_labels(a, b)?.to_vec(),
                            format!("{} * {}", tube.label_name(a), tube.label_name(b)),
                        ),
                        Input::Adjoint(a) => (
                            tube.adjoint_label(a)?.to_vec(),
                            format!("adjoint {}", tube.label_name(a)),
                        ),
                        Input::S0(a) => (
                            tube.s0_label(a)?.to_vec(),
                            format!("S0 {}", tube.label_name(a)),
                        ),
                    };
                    fam.record(&actual, &e, || {
                        let names: Vec<String> = xs.iter().map(|x| self.p.g.format(*x)).collect();
                        format!("{what} [elements {names:?}, z bits {zs:?}]")
                    });
                }
            }
            let mut q = 0;
            loop {
                if q == elems {
                    break 'outer;
                }
                idx[q] += 1;
                if idx[q] < reps.len() {
                    break;
                }
                idx[q] = 0;
                q += 1;
            }
        }
        Ok(fam.finish())
    }
}

pub(super) fn deequiv_families(tube: &Tube) -> Result<Vec<FamilyReport>, TubeError> {
    let Some(frame) = tube.deequiv_frame() else {
        return Ok(Vec::new());
    };
    let dq = Deq {
        p: Plain::new(tube),
        frame,
    };
    let mut out = Vec::new();
    out.extend(adjoints(&dq)?);
    out.extend(group_products(&dq)?);
    out.extend(mixed_products(&dq)?);
    out.extend(rho_products(&dq)?);
    out.extend(s0(&dq)?);
    Ok(out)
}

fn adjoints(dq: &Deq) -> Result<Vec<FamilyReport>, TubeError> {
    use hom::*;
    let p = &dq.p;
    let g_ = p.g;
    let mut out = Vec::new();
    out.push(
        dq.family(Family::new("deequiv adjoint (g k|1|k g)"), 2, 0, |x, _| {
            let (g, k) = (x[0], x[1]);
            let a = p.label(&p.inv(g), &p.inv(k), &p.inv(g), one()).ok()?;
            let mk = dq.pi(g_.neg(k));
            let mut e = Expected::default();
            e.add_real(
                p.label(&p.inv(g), &p.inv(mk), &p.inv(g), one()),
                dq.ez(g, dq.w(g_.neg(k))),
            );
            Some((Input::Adjoint(a), e))
        })?,
    );
    out.push(dq.family(
        Family::new("deequiv adjoint (g krho|lambda^w(-g)|krho pi(-g))"),
        2,
        0,
        |x, _| {
            let (g, k) = (x[0], x[1]);
            let wg = dq.w(g_.neg(g));
            let a = p
                .label(
                    &p.inv(g),
                    &p.rho(k),
                    &p.inv(dq.pi(g_.neg(g))),
                    Deq::lam(one(), wg),
                )
                .ok()?;
            let mut e = Expected::default();
            e.add_real(
                p.label(
                    &p.inv(dq.pi(g_.neg(g))),
                    &p.rho(k),
                    &p.inv(g),
                    Deq::lam(one(), wg),
                ),
                dq.ez(k, wg),
            );
            Some((Input::Adjoint(a), e))
        },
    )?);
    out.push(dq.family(
        Family::new("deequiv adjoint (g krho|T lambda|krho hrho)"),
        3,
        1,
        |x, zb| {
            let (g, k, h) = (x[0], x[1], x[2]);
            let (z1, b1) = (dq.zb(zb[0]), zb[0]);
            let tx = p.lc(&[(2, k), (1, g), (-1, h), (1, z1)]);
            let a = p
                .label(&p.inv(g), &p.rho(k), &p.rho(h), Deq::lam(t(tx), b1))
                .ok()?;
            let ty = p.lc(&[(1, h), (-1, g), (1, z1)]);
            // lambda^b T*_y = eps_z(y)^b T*_y lambda^b
            let c = dq.ez(k, b1)
                * p.eps(
                    p.lc(&[(-1, k), (-1, g), (1, h), (1, z1)]),
                    p.lc(&[(1, g), (-1, h), (2, k), (1, z1)]),
                )
                * dq.ez(ty, b1);
            let mut e = Expected::default();
            e.add_real(
                p.label(&p.rho(h), &p.rho(k), &p.inv(g), Deq::lam(t_star(ty), b1)),
                c,
            );
            Some((Input::Adjoint(a), e))
        },
    )?);
    Ok(out)
}

fn group_products(dq: &Deq) -> Result<Vec<FamilyReport>, TubeError> {
    use hom::*;
    let p = &dq.p;
    let g_ = p.g;
    let mut out = Vec::new();
    out.push(dq.family(
        Family::new("deequiv (g k1|1|k1 g)(g k2|1|k2 g)"),
        3,
        0,
        |x, _| {
            let (g, k1, k2) = (x[0], x[1], x[2]);
            let a = p.label(&p.inv(g), &p.inv(k1), &p.inv(g), one()).ok()?;
            let b = p.label(&p.inv(g), &p.inv(k2), &p.inv(g), one()).ok()?;
            let s = g_.add(k1, k2);
            let mut e = Expected::default();
            e.add_real(
                p.label(&p.inv(g), &p.inv(dq.pi(s)), &p.inv(g), one()),
                dq.ez(g, dq.w(s)),
            );
            Some((Input::Product(a, b), e))
        },
    )?);
    out.push(dq.family(
        Family::new("deequiv (g k1|1|k1 g)(g k2rho|lambda|k2rho pi(-g))"),
        3,
        0,
        |x, _| {
            let (g, k1, k2) = (x[0], x[1], x[2]);
            let wg = dq.w(g_.neg(g));
            let tg = p.inv(dq.pi(g_.neg(g)));
            let a = p.label(&p.inv(g), &p.inv(k1), &p.inv(g), one()).ok()?;
            let b = p
                .label(&p.inv(g), &p.rho(k2), &tg, Deq::lam(one(), wg))
                .ok()?;
            let s = g_.add(k1, k2);
            let mut e = Expected::default();
            e.add_real(
                p.label(&p.inv(g), &p.rho(dq.pi(s)), &tg, Deq::lam(one(), wg)),
                dq.ez(g, dq.w(s)) * dq.ez(k1, wg),
            );
            Some((Input::Product(a, b), e))
        },
    )?);
    out.push(dq.family(
        Family::new("deequiv (g k1rho|lambda|k1rho pi(-g))(pi(-g) k2|1|k2 pi(-g))"),
        3,
        0,
        |x, _| {
            let (g, k1, k2) = (x[0], x[1], x[2]);
            let wg = dq.w(g_.neg(g));
            let tg = p.inv(dq.pi(g_.neg(g)));
            let a = p
                .label(&p.inv(g), &p.rho(k1), &tg, Deq::lam(one(), wg))
                .ok()?;
            let b = p.label(&tg, &p.inv(k2), &tg, one()).ok()?;
            let s = g_.sub(k1, k2);
            let mut e = Expected::default();
            e.add_real(
                p.label(&p.inv(g), &p.rho(dq.pi(s)), &tg, Deq::lam(one(), wg)),
                dq.ez(g, dq.w(s)),
            );
            Some((Input::Product(a, b), e))
        },
    )?);
    out.push(dq.family(
        Family::new("deequiv (g k1rho|lambda|k1rho pi(-g))(pi(-g) k2rho|lambda|k2rho g)"),
        3,
        0,
        |x, _| {
            let (g, k1, k2) = (x[0], x[1], x[2]);
            let wg = dq.w(g_.neg(g));
            let tg = p.inv(dq.pi(g_.neg(g)));
            let a = p
                .label(&p.inv(g), &p.rho(k1), &tg, Deq::lam(one(), wg))
                .ok()?;
            let b = p
                .label(&tg, &p.rho(k2), &p.inv(g), Deq::lam(one(), wg))
                .ok()?;
            let pre = dq.ez(k1, wg);
            let s = g_.sub(k1, k2);
            let mut e = Expected::default();
            e.add_real(
                p.label(&p.inv(g), &p.inv(dq.pi(s)), &p.inv(g), one()),
                pre * dq.ez(g, dq.w(s)),
            );
            if g == g_.zero() {
                for r in g_.elements() {
                    let c = pre * dq.ez(g, dq.w(r)) * p.eps(g, p.lc(&[(1, r), (1, k1), (-1, k2)]));
                    e.add_real(p.label(&p.inv(g), &p.rho(dq.pi(r)), &tg, one()), c);
                }
            }
            Some((Input::Product(a, b), e))
        },
    )?);
    Ok(out)
}

fn mixed_products(dq: &Deq) -> Result<Vec<FamilyReport>, TubeError> {
    use hom::*;
    let p = &dq.p;
    let g_ = p.g;
    let d = p.d;
    let mut out = Vec::new();
    out.push(dq.family(
        Family::new("deequiv (g k1|1|k1 g)(g k2rho|T lambda|k2rho hrho)"),
        4,
        1,
        |x, zb| {
            let (g, k1, k2, h) = (x[0], x[1], x[2], x[3]);
            let (z1, b1) = (dq.zb(zb[0]), zb[0]);
            let a = p.label(&p.inv(g), &p.inv(k1), &p.inv(g), one()).ok()?;
            let tx = p.lc(&[(1, g), (2, k2), (-1, h), (1, z1)]);
            let b = p
                .label(&p.inv(g), &p.rho(k2), &p.rho(h), Deq::lam(t(tx), b1))
                .ok()?;
            let s = g_.add(k1, k2);
            let c = dq.ez(h, dq.w(s)) * dq.ez(k1, b1) * p.eps(k1, tx);
            let ty = p.lc(&[(1, g), (2, k1), (2, k2), (-1, h), (1, z1)]);
            let mut e = Expected::default();
            e.add_real(
                p.label(&p.inv(g), &p.rho(dq.pi(s)), &p.rho(h), Deq::lam(t(ty), b1)),
                c,
            );
            Some((Input::Product(a, b), e))
        },
    )?);
    out.push(dq.family(
        Family::corrected(
            "deequiv (g1 k1rho|lambda|k1rho g2)(g2 k2rho|T lambda|k2rho hrho)",
            "the sign depending on r is moved inside the sum over r",
        ),
        4,
        1,
        |x, zb| {
            let (g1, k1, k2, h) = (x[0], x[1], x[2], x[3]);
            let (z1, b1) = (dq.zb(zb[0]), zb[0]);
            let w1 = dq.w(g_.neg(g1));
            let g2 = dq.pi(g_.neg(g1));
            let a = p
                .label(&p.inv(g1), &p.rho(k1), &p.inv(g2), Deq::lam(one(), w1))
                .ok()?;
            let tx = p.lc(&[(1, g2), (2, k2), (-1, h), (1, z1)]);
            let b = p
                .label(&p.inv(g2), &p.rho(k2), &p.rho(h), Deq::lam(t(tx), b1))
                .ok()?;
            let ax = p.lc(&[(2, k1), (-1, g2), (-2, k2), (1, h), (-1, z1)]);
            let pre =
                p.eps(p.lc(&[(1, k1), (-1, g2), (-2, k2), (1, h), (-1, z1)]), tx) * dq.ez(k1, b1);
            let mut e = Expected::default();
            for r in g_.elements() {
                let u = p.lc(&[(1, r), (-1, k1), (1, k2), (1, g2), (-1, h), (1, z1)]);
                let v = p.lc(&[
                    (1, r),
                    (-1, k1),
                    (1, k2),
                    (1, g2),
                    (-1, h),
                    (2, g1),
                    (1, z1),
                ]);
                let c = p.a(ax, u, v)
                    * (pre
                        * dq.ez(p.lc(&[(1, r), (1, k1), (1, k2)]), b1 + w1)
                        * dq.ez(p.lc(&[(1, g1), (1, g2), (1, h)]), dq.w(r))
                        * p.eps(g1, p.lc(&[(1, r), (1, k1), (-1, k2)])));
                let ty = p.lc(&[(2, r), (2, g1), (1, g2), (-1, h), (1, z1)]);
                e.add(
                    p.label(
                        &p.inv(g1),
                        &p.rho(dq.pi(r)),
                        &p.rho(h),
                        Deq::lam(t(ty), b1 + w1),
                    ),
                    c,
                );
            }
            Some((Input::Product(a, b), e))
        },
    )?);
    out.push(dq.family(
        Family::corrected(
            "deequiv (g1 k1rho|T lambda|k1rho hrho)(hrho k2rho|lambda T*|k2rho g2)",
            "h_2 in the sign prefactor is read as h",
        ),
        5,
        2,
        |x, zb| {
            let (g1, k1, h, k2, g2) = (x[0], x[1], x[2], x[3], x[4]);
            let (z1, z2, b1, b2) = (dq.zb(zb[0]), dq.zb(zb[1]), zb[0], zb[1]);
            let tx = p.lc(&[(2, k1), (1, g1), (-1, h), (1, z1)]);
            let a = p
                .label(&p.inv(g1), &p.rho(k1), &p.rho(h), Deq::lam(t(tx), b1))
                .ok()?;
            let ty = p.lc(&[(1, h), (-1, g2), (1, z2)]);
            let b = p
                .label(&p.rho(h), &p.rho(k2), &p.inv(g2), Deq::lam(t_star(ty), b2))
                .ok()?;
            // The printed factor is lambda^b2 T*_y = eps_z(y)^b2 times the basis label.
            let pre = dq.ez(ty, b2)
                * dq.ez(k1, b2)
                * p.eps(p.lc(&[(1, k1), (-1, h), (1, g2), (-1, z2)]), ty);
            let zz = g_.add(z1, z2);
            let mut e = Expected::default();
            if g_.sub(g1, g2) == zz {
                let s = g_.sub(k1, k2);
                e.add_real(
                    p.label(
                        &p.inv(g1),
                        &p.inv(dq.pi(s)),
                        &p.inv(g2),
                        Deq::lam(one(), b1 + b2),
                    ),
                    pre * dq.ez(g1, dq.w(s)),
                );
            }
            if g_.add(g1, g2) == zz {
                for r in g_.elements() {
                    let c = p.a(
                        p.lc(&[(2, k1), (-1, h), (1, g2), (-1, z2)]),
                        p.lc(&[(1, r), (-1, k1), (-1, k2), (1, h), (-1, g2), (1, z2)]),
                        p.lc(&[(1, g1), (-1, g2), (1, z1), (1, z2)]),
                    ) * (pre
                        * dq.ez(p.lc(&[(1, r), (1, k1), (1, k2)]), b1 + b2)
                        * dq.ez(g1, dq.w(r))
                        * p.eps(g1, p.lc(&[(1, r), (1, k1), (-1, k2)])));
                    e.add(
                        p.label(
                            &p.inv(g1),
                            &p.rho(dq.pi(r)),
                            &p.inv(g2),
                            Deq::lam(one(), b1 + b2),
                        ),
                        c,
                    );
                }
            }
            Some((Input::Product(a, b), e))
        },
    )?);
    out.push(dq.family(
        Family::corrected(
            "deequiv (h1rho k1rho|lambda T*|k1rho g)(g k2rho|T lambda|k2rho h2rho)",
            "the SS* term carries delta(2k1-2k2-2g-h1+h2 = z1+z2), the condition for its label to exist, in place of delta(2k1-2k2-2g+h1+h2 = z1+z2), and an extra sign eps_z(h1 z1')",
        ),
        5,
        2,
        |x, zb| {
        let (h1, k1, g, k2, h2) = (x[0], x[1], x[2], x[3], x[4]);
        let (z1, z2, b1, b2) = (dq.zb(zb[0]), dq.zb(zb[1]), zb[0], zb[1]);
        let ty = p.lc(&[(1, h1), (-1, g), (1, z1)]);
        let a = p.label(&p.rho(h1), &p.rho(k1), &p.inv(g), Deq::lam(t_star(ty), b1)).ok()?;
        let tx = p.lc(&[(2, k2), (1, g), (-1, h2), (1, z2)]);
        let b = p.label(&p.inv(g), &p.rho(k2), &p.rho(h2), Deq::lam(t(tx), b2)).ok()?;
        let bb = b1 + b2;
        let pre = dq.ez(ty, b1) * dq.ez(k1, b2) * dq.ez(g_.add(g, h1), bb) * p.eps(p.lc(&[(1, k1), (-2, k2), (-1, g), (1, h2), (-1, z2)]), tx);
        let zz = g_.add(z1, z2);
        let mut e = Expected::default();
        if p.lc(&[(2, k2), (-2, k1), (1, h1), (-1, h2)]) == zz {
            let s = g_.sub(k1, k2);
            e.add_real(p.label(&p.rho(h1), &p.inv(dq.pi(s)), &p.rho(h2), Deq::lam(one(), bb)), pre * dq.ez(h2, dq.w(s)) / d);
        }
        if p.lc(&[(2, k1), (-2, k2), (-2, g), (-1, h1), (1, h2)]) == zz {
            let r = p.lc(&[(1, g), (1, h1), (1, k2), (-1, k1)]);
            let c = pre * dq.ez(g_.add(g, h1), bb) * dq.ez(h1, b1) * dq.ez(h2, dq.w(r)) * p.eps(g_.add(g_.neg(g), z1), p.lc(&[(1, g), (1, h1), (1, z1)]));
            e.add_real(p.label(&p.rho(h1), &p.rho(dq.pi(r)), &p.rho(h2), Deq::lam(ss(), bb)), c);
        }
        for r in g_.elements() {
            for j in g_.elements() {
                let c = p.a(p.lc(&[(2, k1), (-2, k2), (-1, g), (1, h2), (1, z2)]), p.lc(&[(1, r), (-1, k1), (1, k2), (1, g), (-1, h2), (1, z2)]), p.lc(&[(2, k2), (-2, k1), (1, h1), (-1, h2), (1, z1), (1, z2), (1, j)]))
                    * p.a(p.lc(&[(2, h1), (-1, r), (-1, k1), (1, k2)]), p.lc(&[(-1, h1), (-1, g), (1, r), (1, k1), (-1, k2), (1, z1)]), j)
                    * (pre * dq.ez(p.lc(&[(1, r), (1, k1), (1, k2)]), bb) * dq.ez(h2, dq.w(r)) * p.eps(p.lc(&[(1, h1), (-1, r), (-1, k1), (1, k2)]), p.lc(&[(1, r), (1, k1), (-1, k2)])));
                let m = tt(p.lc(&[(1, j), (1, r), (-1, k1), (1, k2), (1, h1), (-1, h2), (1, z1), (1, z2)]), p.lc(&[(1, j), (2, h1), (-1, r), (-1, k1), (1, k2)]));
                e.add(p.label(&p.rho(h1), &p.rho(dq.pi(r)), &p.rho(h2), Deq::lam(m, bb)), c);
            }
        }
        Some((Input::Product(a, b), e))
        },
    )?);
    Ok(out)
}

fn rho_products(dq: &Deq) -> Result<Vec<FamilyReport>, TubeError> {
    use hom::*;
    let p = &dq.p;
    let g_ = p.g;
    let d = p.d;
    // (h1rho krho|T_{k-h2+g+z2} T*_{h1-k+g+z1} lambda^{z1'+z2'}|krho h2rho)
    let tt_label = |h1: GE, k: GE, h2: GE, g: GE, b1: u32, b2: u32| {
        let m = tt(
            p.lc(&[(1, k), (-1, h2), (1, g), (1, dq.zb(b2))]),
            p.lc(&[(1, h1), (-1, k), (1, g), (1, dq.zb(b1))]),
        );
        p.label(&p.rho(h1), &p.rho(k), &p.rho(h2), Deq::lam(m, b1 + b2))
    };
    // (hrho k|lambda^{w(h-2k)}|k pi(h-2k)rho) and its target
    let unit_label = |h: GE, k: GE| {
        let x = p.lc(&[(1, h), (-2, k)]);
        (
            p.label(
                &p.rho(h),
                &p.inv(k),
                &p.rho(dq.pi(x)),
                Deq::lam(one(), dq.w(x)),
            ),
            dq.pi(x),
            dq.w(x),
        )
    };
    // (hrho krho|SS* lambda^{w(2k-h)}|krho pi(2k-h)rho) and its target
    let ss_label = |h: GE, k: GE| {
        let x = p.lc(&[(2, k), (-1, h)]);
        (
            p.label(
                &p.rho(h),
                &p.rho(k),
                &p.rho(dq.pi(x)),
                Deq::lam(ss(), dq.w(x)),
            ),
            dq.pi(x),
            dq.w(x),
        )
    };
    let mut out = Vec::new();
    out.push(dq.family(
        Family::new("deequiv (h1rho k1|lambda|k1 h2rho)(h2rho k2|lambda|k2 h3rho)"),
        3,
        0,
        |x, _| {
            let (h1, k1, k2) = (x[0], x[1], x[2]);
            let (a, h2, w1) = unit_label(h1, k1);
            let (b, h3, w2) = unit_label(h2, k2);
            let s = g_.add(k1, k2);
            let mut e = Expected::default();
            e.add_real(
                p.label(
                    &p.rho(h1),
                    &p.inv(dq.pi(s)),
                    &p.rho(h3),
                    Deq::lam(one(), w1 + w2),
                ),
                dq.ez(h1, dq.w(s)) * dq.ez(k1, w2),
            );
            Some((Input::Product(a.ok()?, b.ok()?), e))
        },
    )?);
    out.push(dq.family(
        Family::new("deequiv (h1rho k1rho|SS* lambda|k1rho h2rho)(h2rho k2|lambda|k2 h3rho)"),
        3,
        0,
        |x, _| {
            let (h1, k1, k2) = (x[0], x[1], x[2]);
            let (a, h2, w1) = ss_label(h1, k1);
            let (b, h3, w2) = unit_label(h2, k2);
            let s = g_.sub(k1, k2);
            let mut e = Expected::default();
            e.add_real(
                p.label(
                    &p.rho(h1),
                    &p.rho(dq.pi(s)),
                    &p.rho(h3),
                    Deq::lam(ss(), w1 + w2),
                ),
                dq.ez(k1, w2) * dq.ez(h1, dq.w(s)),
            );
            Some((Input::Product(a.ok()?, b.ok()?), e))
        },
    )?);
    out.push(dq.family(
        Family::new("deequiv (h1rho k1|lambda|k1 h2rho)(h2rho k2rho|SS* lambda|k2rho h3rho)"),
        3,
        0,
        |x, _| {
            let (h1, k1, k2) = (x[0], x[1], x[2]);
            let (a, h2, w1) = unit_label(h1, k1);
            let (b, h3, w2) = ss_label(h2, k2);
            let s = g_.add(k1, k2);
            let mut e = Expected::default();
            e.add_real(
                p.label(
                    &p.rho(h1),
                    &p.rho(dq.pi(s)),
                    &p.rho(h3),
                    Deq::lam(ss(), w1 + w2),
                ),
                dq.ez(k1, w2) * dq.ez(h1, dq.w(s)),
            );
            Some((Input::Product(a.ok()?, b.ok()?), e))
        },
    )?);
    out.push(dq.family(
        Family::new("deequiv (h1rho k1|lambda|k1 h2rho)(h2rho k2rho|TT* lambda|k2rho h3rho)"),
        5,
        2,
        |x, zb| {
            let (h1, k1, k2, h3, g2) = (x[0], x[1], x[2], x[3], x[4]);
            let (b1, b2) = (zb[0], zb[1]);
            let (z1, z2) = (dq.zb(b1), dq.zb(b2));
            let (a, h2, w1) = unit_label(h1, k1);
            let b = tt_label(h2, k2, h3, g2, b1, b2).ok()?;
            let s = g_.add(k1, k2);
            let c = dq.ez(p.lc(&[(1, h1), (1, h2), (1, h3)]), dq.w(s))
                * dq.ez(k1, b1 + b2)
                * p.eps(k1, p.lc(&[(1, k2), (-1, h3), (1, g2), (1, z2)]))
                * p.eps(k1, p.lc(&[(1, h2), (-1, k2), (1, g2), (1, z1)]));
            let m = tt(
                p.lc(&[(2, k1), (1, k2), (-1, h3), (1, g2), (1, z2)]),
                p.lc(&[(2, k1), (1, h2), (-1, k2), (1, g2), (1, z1)]),
            );
            let mut e = Expected::default();
            e.add_real(
                p.label(
                    &p.rho(h1),
                    &p.rho(dq.pi(s)),
                    &p.rho(h3),
                    Deq::lam(m, b1 + b2 + w1),
                ),
                c,
            );
            Some((Input::Product(a.ok()?, b), e))
        },
    )?);
    out.push(dq.family(
        Family::new("deequiv (h1rho k1rho|TT* lambda|k1rho h2rho)(h2rho k2|lambda|k2 h3rho)"),
        5,
        2,
        |x, zb| {
            let (h1, k1, h2, g1, k2) = (x[0], x[1], x[2], x[3], x[4]);
            let (b1, b2) = (zb[0], zb[1]);
            let (z1, z2) = (dq.zb(b1), dq.zb(b2));
            let a = tt_label(h1, k1, h2, g1, b1, b2).ok()?;
            let (b, h3, w2) = unit_label(h2, k2);
            let s = g_.sub(k1, k2);
            let c = dq.ez(p.lc(&[(1, k1), (1, h1), (1, h2)]), w2) * dq.ez(h2, dq.w(s));
            let m = tt(
                p.lc(&[(1, k1), (-1, h2), (1, g1), (1, z2)]),
                p.lc(&[(1, h1), (-1, k1), (1, g1), (1, z1)]),
            );
            let mut e = Expected::default();
            e.add_real(
                p.label(
                    &p.rho(h1),
                    &p.rho(dq.pi(s)),
                    &p.rho(h3),
                    Deq::lam(m, b1 + b2 + w2),
                ),
                c,
            );
            Some((Input::Product(a, b.ok()?), e))
        },
    )?);
    out.push(dq.family(
        Family::new(
            "deequiv (h1rho k1rho|SS* lambda|k1rho h2rho)(h2rho k2rho|SS* lambda|k2rho h3rho)",
        ),
        3,
        0,
        |x, _| {
            let (h1, k1, k2) = (x[0], x[1], x[2]);
            let (a, h2, w1) = ss_label(h1, k1);
            let (b, h3, w2) = ss_label(h2, k2);
            let ww = w1 + w2;
            let pre = dq.ez(k1, w2);
            let s = g_.sub(k1, k2);
            let mut e = Expected::default();
            e.add_real(
                p.label(
                    &p.rho(h1),
                    &p.inv(dq.pi(s)),
                    &p.rho(h3),
                    Deq::lam(one(), ww),
                ),
                pre * dq.ez(h1, dq.w(s)) / (d * d * d),
            );
            for r in g_.elements() {
                let c = pre
                    * dq.ez(p.lc(&[(1, r), (1, k1), (-1, k2)]), ww)
                    * dq.ez(h1, dq.w(r))
                    * p.eps(
                        p.lc(&[(1, h1), (-1, r), (-1, k1), (1, k2)]),
                        p.lc(&[(1, r), (1, k1), (-1, k2)]),
                    )
                    / (d * d);
                let m = tt(
                    p.lc(&[(1, r), (1, k1), (-1, k2)]),
                    p.lc(&[(2, h1), (-1, r), (-1, k1), (1, k2)]),
                );
                e.add_real(
                    p.label(&p.rho(h1), &p.rho(dq.pi(r)), &p.rho(h3), Deq::lam(m, ww)),
                    c,
                );
            }
            Some((Input::Product(a.ok()?, b.ok()?), e))
        },
    )?);
    out.push(dq.family(
        Family::corrected("deequiv (h1rho k1rho|TT* lambda|k1rho h2rho)(h2rho k2rho|SS* lambda|k2rho h3rho)", "the result target is read as h3rho with h3 = pi(2k2 - h2), and the sign eps_z(h1 w(r)) in the sum as eps_z(h3 w(r))"),
        5,
        2,
        |x, zb| {
            let (h1, k1, h2, g1, k2) = (x[0], x[1], x[2], x[3], x[4]);
            let (b1, b2) = (zb[0], zb[1]);
            let (z1, z2) = (dq.zb(b1), dq.zb(b2));
            let a = tt_label(h1, k1, h2, g1, b1, b2).ok()?;
            let (b, h3, w2) = ss_label(h2, k2);
            let ww = w2 + b1 + b2;
            let pre = dq.ez(p.lc(&[(1, k1), (1, h1), (1, h2)]), w2);
            let mut e = Expected::default();
            if p.lc(&[(2, k1), (-1, h1), (-1, h2)]) == g_.add(z1, z2) {
                let s = g_.sub(k1, k2);
                e.add_real(p.label(&p.rho(h1), &p.inv(dq.pi(s)), &p.rho(h3), Deq::lam(one(), ww)), pre * dq.ez(h1, dq.w(s)) / (d * d));
            }
            for r in g_.elements() {
                let c = p.a(p.lc(&[(2, h1), (-1, r), (-1, k1), (1, k2)]), p.lc(&[(1, g1), (-1, h1), (1, r), (-1, k2), (1, z1)]), p.lc(&[(2, k1), (-1, h1), (-1, h2), (1, z2), (-1, z1)]))
                    * (pre
                        * dq.ez(p.lc(&[(1, r), (1, k1), (1, k2)]), ww)
                        * dq.ez(h3, dq.w(r))
                        * p.eps(p.lc(&[(1, h1), (-1, r), (-1, k1), (1, k2)]), p.lc(&[(1, r), (1, k1), (-1, k2)]))
                        / d);
                let m = tt(p.lc(&[(1, r), (1, k1), (-1, k2)]), p.lc(&[(-1, r), (1, k1), (1, k2), (1, h1), (-1, h2), (1, z2), (-1, z1)]));
                e.add(p.label(&p.rho(h1), &p.rho(dq.pi(r)), &p.rho(h3), Deq::lam(m, ww)), c);
            }
            Some((Input::Product(a, b.ok()?), e))
        },
    )?);
    out.push(dq.family(
        Family::new(
            "deequiv (h1rho k1rho|SS* lambda|k1rho h2rho)(h2rho k2rho|TT* lambda|k2rho h3rho)",
        ),
        5,
        2,
        |x, zb| {
            let (h1, k1, k2, h3, g1) = (x[0], x[1], x[2], x[3], x[4]);
            let (b1, b2) = (zb[0], zb[1]);
            let (z1, z2) = (dq.zb(b1), dq.zb(b2));
            let (a, h2, w1) = ss_label(h1, k1);
            let b = tt_label(h2, k2, h3, g1, b1, b2).ok()?;
            let ww = w1 + b1 + b2;
            let hs = p.lc(&[(1, h1), (1, h2), (1, h3)]);
            let pre = dq.ez(k1, b1 + b2)
                * p.eps(
                    p.lc(&[(1, k1), (-1, k2), (1, h3), (-1, g1), (-1, z2)]),
                    p.lc(&[(1, k2), (-1, h3), (1, g1), (1, z2)]),
                )
                * p.eps(
                    p.lc(&[(1, k1), (-1, h2), (1, k2), (-1, g1), (-1, z1)]),
                    p.lc(&[(1, h2), (-1, k2), (1, g1), (1, z1)]),
                );
            let mut e = Expected::default();
            if p.lc(&[(2, k2), (-1, h2), (-1, h3)]) == g_.add(z1, z2) {
                let s = g_.sub(k1, k2);
                e.add_real(
                    p.label(
                        &p.rho(h1),
                        &p.inv(dq.pi(s)),
                        &p.rho(h3),
                        Deq::lam(one(), ww),
                    ),
                    pre * dq.ez(hs, dq.w(s)) / (d * d),
                );
            }
            for r in g_.elements() {
                let c = p.a(
                    p.lc(&[(2, k1), (-1, k2), (1, h3), (-1, g1), (-1, z2)]),
                    p.lc(&[(1, r), (-1, k1), (-1, h3), (1, g1), (1, z2)]),
                    p.lc(&[(2, k2), (-1, h3), (-1, h2), (1, z2), (-1, z1)]),
                ) * (pre
                    * dq.ez(p.lc(&[(1, r), (1, k1), (-1, k2)]), ww)
                    * dq.ez(hs, dq.w(r))
                    * p.eps(
                        p.lc(&[(1, h1), (-1, r), (-1, k1), (1, k2)]),
                        p.lc(&[(1, r), (1, k1), (-1, k2)]),
                    )
                    / d);
                let m = tt(
                    p.lc(&[
                        (1, r),
                        (1, k1),
                        (1, k2),
                        (-1, h2),
                        (-1, h3),
                        (1, z2),
                        (-1, z1),
                    ]),
                    p.lc(&[(-1, r), (2, h1), (-1, k1), (1, k2)]),
                );
                e.add(
                    p.label(&p.rho(h1), &p.rho(dq.pi(r)), &p.rho(h3), Deq::lam(m, ww)),
                    c,
                );
            }
            Some((Input::Product(a.ok()?, b), e))
        },
    )?);
    out.push(dq.family(
        Family::corrected(
            "deequiv (h1rho k1rho|TT* lambda|k1rho h2rho)(h2rho k2rho|TT* lambda|k2rho h3rho)",
            "the SS* term also carries eps_z((r+k1+k2)(z1'+z2'+z3'+z4')), as the sum does",
        ),
        7,
        4,
        |x, zb| {
            let (h1, k1, h2, g1, k2, h3, g2) = (x[0], x[1], x[2], x[3], x[4], x[5], x[6]);
            let (z1, z2, z3, z4) = (dq.zb(zb[0]), dq.zb(zb[1]), dq.zb(zb[2]), dq.zb(zb[3]));
            let a = tt_label(h1, k1, h2, g1, zb[0], zb[1]).ok()?;
            let b = tt_label(h2, k2, h3, g2, zb[2], zb[3]).ok()?;
            let bb: u32 = zb.iter().sum();
            let pre = dq.ez(p.lc(&[(1, k1), (1, h1), (1, h2)]), zb[2] + zb[3])
                * p.eps(
                    p.lc(&[(1, k1), (-1, h2), (1, k2), (-1, g2), (-1, z3)]),
                    p.lc(&[(1, h2), (-1, k2), (1, g2), (1, z3)]),
                )
                * p.eps(
                    p.lc(&[(1, k1), (-1, k2), (1, h3), (-1, g2), (-1, z4)]),
                    p.lc(&[(1, k2), (-1, h3), (1, g2), (1, z4)]),
                );
            let mut e = Expected::default();
            if p.lc(&[(2, k1), (-2, k2), (1, h3), (-1, h1)])
                == p.lc(&[(1, z1), (1, z2), (1, z3), (1, z4)])
            {
                let s = g_.sub(k1, k2);
                let c = p.a(
                    p.lc(&[(2, k1), (-1, h2), (1, k2), (-1, g2), (-1, z3)]),
                    p.lc(&[(1, h2), (1, h3), (-2, k2), (1, z3), (-1, z4)]),
                    p.lc(&[(1, g1), (1, g2), (-1, k1), (-1, k2), (1, z3), (1, z2)]),
                ) * (pre * dq.ez(h1, dq.w(s)) / d);
                e.add(
                    p.label(
                        &p.rho(h1),
                        &p.inv(dq.pi(s)),
                        &p.rho(h3),
                        Deq::lam(one(), bb),
                    ),
                    c,
                );
            }
            if p.lc(&[(1, k1), (1, k2), (-1, g1), (-1, g2)]) == g_.add(z2, z3)
                && p.lc(&[(1, k1), (-1, k2), (1, g1), (-1, g2), (1, h3), (-1, h1)])
                    == g_.add(z1, z4)
            {
                let r = p.lc(&[(1, k2), (1, h1), (-1, g1)]);
                let c = pre
                    * dq.ez(p.lc(&[(1, r), (1, k1), (1, k2)]), bb)
                    * dq.ez(h1, dq.w(p.lc(&[(1, r), (1, z1)])))
                    * p.eps(
                        p.lc(&[(-1, k1), (1, g1), (-1, z1)]),
                        p.lc(&[(1, h1), (1, k1), (-1, g1), (1, z1)]),
                    );
                e.add_real(
                    p.label(&p.rho(h1), &p.rho(dq.pi(r)), &p.rho(h3), Deq::lam(ss(), bb)),
                    c,
                );
            }
            for j in g_.elements() {
                for r in g_.elements() {
                    let c = p.a(
                        p.lc(&[(2, k1), (-1, k2), (1, h3), (-1, g2), (1, z4)]),
                        p.lc(&[(1, r), (-1, k1), (-1, h3), (1, g2), (1, z4)]),
                        p.lc(&[(1, j), (2, k2), (-1, h3), (-1, h2), (1, z4), (-1, z3)]),
                    ) * p.a(
                        p.lc(&[(2, h1), (-1, r), (-1, k1), (1, k2)]),
                        p.lc(&[(1, g1), (-1, h1), (-1, k2), (1, r), (1, z1)]),
                        p.lc(&[(1, j), (2, k1), (-1, h1), (-1, h2), (1, z1), (-1, z2)]),
                    ) * p.a(
                        p.lc(&[(2, k1), (-1, h2), (1, k2), (-1, g2), (1, z3)]),
                        j,
                        p.lc(&[(-1, k1), (-1, k2), (1, g1), (1, g2), (1, z2), (1, z3)]),
                    ) * (pre
                        * dq.ez(p.lc(&[(1, r), (1, k1), (1, k2)]), bb)
                        * dq.ez(h3, dq.w(r))
                        * p.eps(
                            p.lc(&[(1, h1), (-1, r), (-1, k1), (1, k2)]),
                            p.lc(&[(1, r), (1, k1), (-1, k2)]),
                        ));
                    let m = tt(
                        p.lc(&[
                            (1, j),
                            (1, k1),
                            (1, k2),
                            (-1, h3),
                            (-1, h2),
                            (1, z4),
                            (-1, z3),
                            (1, r),
                        ]),
                        p.lc(&[
                            (1, j),
                            (-1, r),
                            (1, k1),
                            (1, k2),
                            (-1, h2),
                            (1, h1),
                            (1, z2),
                            (-1, z1),
                        ]),
                    );
                    e.add(
                        p.label(&p.rho(h1), &p.rho(dq.pi(r)), &p.rho(h3), Deq::lam(m, bb)),
                        c,
                    );
                }
            }
            Some((Input::Product(a, b), e))
        },
    )?);
    Ok(out)
}

fn s0(dq: &Deq) -> Result<Vec<FamilyReport>, TubeError> {
    use hom::*;
    let p = &dq.p;
    let g_ = p.g;
    let d = p.d;
    let mut out = Vec::new();
    out.push(
        dq.family(Family::new("deequiv S0 (g k|1|k g)"), 2, 0, |x, _| {
            let (g, k) = (x[0], x[1]);
            let a = p.label(&p.inv(g), &p.inv(k), &p.inv(g), one()).ok()?;
            let mk = g_.neg(k);
            let mut e = Expected::default();
            e.add_real(
                p.label(&p.inv(dq.pi(mk)), &p.inv(g), &p.inv(dq.pi(mk)), one()),
                dq.ez(k, 1) * dq.ez(g_.add(g, k), dq.w(mk)),
            );
            Some((Input::S0(a), e))
        })?,
    );
    out.push(dq.family(
        Family::new("deequiv S0 (g krho|lambda|krho g)"),
        2,
        0,
        |x, _| {
            let (g, k) = (x[0], x[1]);
            let wg = dq.w(g_.neg(g));
            let a = p
                .label(&p.inv(g), &p.rho(k), &p.inv(g), Deq::lam(one(), wg))
                .ok()?;
            let mut e = Expected::default();
            e.add_real(
                p.label(&p.rho(k), &p.inv(g), &p.rho(k), Deq::lam(one(), wg)),
                dq.ez(k, wg) / d,
            );
            Some((Input::S0(a), e))
        },
    )?);
    out.push(dq.family(
        Family::new("deequiv S0 (hrho k|lambda|k hrho)"),
        2,
        0,
        |x, _| {
            let (h, k) = (x[0], x[1]);
            let wx = dq.w(p.lc(&[(1, h), (-2, k)]));
            let a = p
                .label(&p.rho(h), &p.inv(k), &p.rho(h), Deq::lam(one(), wx))
                .ok()?;
            let mk = g_.neg(k);
            let c = d * dq.ez(k, 1) * dq.ez(h, dq.w(mk)) * dq.ez(k, wx + dq.w(mk));
            let mut e = Expected::default();
            e.add_real(
                p.label(
                    &p.inv(dq.pi(mk)),
                    &p.rho(h),
                    &p.inv(dq.pi(mk)),
                    Deq::lam(one(), wx),
                ),
                c,
            );
            Some((Input::S0(a), e))
        },
    )?);
    out.push(dq.family(
        Family::new("deequiv S0 (hrho krho|SS* lambda|krho hrho)"),
        2,
        0,
        |x, _| {
            let (h, k) = (x[0], x[1]);
            let wx = dq.w(p.lc(&[(2, k), (-1, h)]));
            let a = p
                .label(&p.rho(h), &p.rho(k), &p.rho(h), Deq::lam(ss(), wx))
                .ok()?;
            let c = dq.ez(k, wx) / d;
            let mut e = Expected::default();
            e.add_real(
                p.label(&p.rho(k), &p.rho(h), &p.rho(k), Deq::lam(ss(), wx)),
                c,
            );
            for j in g_.elements() {
                e.add_real(
                    p.label(&p.rho(k), &p.rho(h), &p.rho(k), Deq::lam(tt(j, j), wx)),
                    c,
                );
            }
            Some((Input::S0(a), e))
        },
    )?);
    out.push(dq.family(
        Family::new("deequiv S0 (hrho krho|TT* lambda|krho hrho)"),
        3,
        2,
        |x, zb| {
            let (h, k, g) = (x[0], x[1], x[2]);
            let (b1, b2) = (zb[0], zb[1]);
            let (z1, z2) = (dq.zb(b1), dq.zb(b2));
            let m = tt(
                p.lc(&[(1, k), (-1, h), (1, g), (1, z2)]),
                p.lc(&[(1, h), (-1, k), (1, g), (1, z1)]),
            );
            let a = p
                .label(&p.rho(h), &p.rho(k), &p.rho(h), Deq::lam(m, b1 + b2))
                .ok()?;
            let mk = g_.neg(k);
            let pre = dq.ez(k, b1 + b2)
                * p.eps(mk, p.lc(&[(1, k), (-1, h), (1, g), (1, z2)]))
                * p.eps(mk, p.lc(&[(1, h), (-1, k), (1, g), (1, z1)]))
                * p.eps(
                    p.lc(&[(-1, k), (-1, h), (1, g), (1, z2)]),
                    p.lc(&[(1, k), (1, h), (-1, g), (1, z2)]),
                )
                * p.eps(
                    p.lc(&[(1, h), (-3, k), (1, g), (1, z1)]),
                    p.lc(&[(-1, h), (3, k), (-1, g), (1, z1)]),
                );
            let mut e = Expected::default();
            if p.lc(&[(2, k), (-2, h)]) == g_.add(z1, z2) {
                e.add_real(
                    p.label(&p.rho(k), &p.rho(h), &p.rho(k), Deq::lam(ss(), b1 + b2)),
                    pre,
                );
            }
            let y = p.lc(&[(1, h), (-3, k), (1, g), (1, z1)]);
            for j in g_.elements() {
                let c = p.a(g_.neg(y), p.lc(&[(2, h), (-2, k), (1, z1), (-1, z2)]), j) * pre;
                let m = tt(
                    p.lc(&[(1, j), (1, k), (1, h), (-1, g), (-1, z2)]),
                    g_.sub(j, y),
                );
                e.add(
                    p.label(&p.rho(k), &p.rho(h), &p.rho(k), Deq::lam(m, b1 + b2)),
                    c,
                );
            }
            Some((Input::S0(a), e))
        },
    )?);
    Ok(out)
}
