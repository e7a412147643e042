//! The printed tables of each preset, replayed through the generic tube.

use super::*;
use crate::numerics::root_of_unity;
use std::collections::HashMap;

/// `e^{pi i num / den}`.
fn epi(num: i64, den: u64) -> CScalar {
    root_of_unity(num, 2 * den)
}

fn i_unit() -> CScalar {
    CScalar::new(0.0, 1.0)
}

/// Run every structured cross-check known for a preset. `dec` enables the
/// comparisons with the generic decomposition.
pub fn run_structured(
    preset: &str,
    tube: &Tube,
    dec: Option<&Decomposition>,
) -> Result<Vec<StructuredCheck>> {
    match preset {
        "z4" => z4(tube, dec),
        "z2xz2" => z2xz2(tube, dec),
        "fourfourfourtwo" => fourfourfourtwo(tube, dec),
        "ah" => ah(tube, dec),
        "twod2" => twod2(tube, dec),
        other => Err(StructuredError::Unsupported(format!(
            "no structured tables for {other}"
        ))),
    }
}

/// Assembled central projections: match each against the generic list and,
/// when printed, compare the `t`-eigenvalue of the match.
fn match_all(
    family: &str,
    dec: Option<&Decomposition>,
    assembled: &[(String, TubeElement)],
    twists: Option<&[CScalar]>,
) -> Vec<StructuredCheck> {
    let Some(dec) = dec else {
        return Vec::new();
    };
    let mut out = Vec::new();
    let mut used = Vec::new();
    for (i, (name, x)) in assembled.iter().enumerate() {
        let (check, idx) = match_check(family, name, dec, x);
        out.push(check);
        used.push(idx);
        if let (Some(tw), Some(p)) = (twists, dec.projections.get(idx)) {
            out.push(StructuredCheck::at_most(
                family,
                format!("{name} t-eigenvalue"),
                (p.t_eigenvalue - tw[i]).norm(),
                1e-8,
            ));
        }
    }
    used.sort_unstable();
    used.dedup();
    out.push(StructuredCheck::at_most(
        family,
        format!("{} assembled projections match distinct generic ones", assembled.len()),
        (assembled.len() - used.len()) as f64,
        0.0,
    ));
    out
}

fn tmin_family(
    tube: &Tube,
    dec: Option<&Decomposition>,
    family: &str,
    objects: &[usize],
    roots: &[CScalar],
) -> Result<Vec<StructuredCheck>> {
    let mut out = Vec::new();
    for &o in objects {
        out.extend(tmin_checks(tube, dec, family, o, roots)?);
    }
    Ok(out)
}

// ---- Z/4 ----

/// `J` as `p(g,tau) X_0`, plus whether that differs from the printed sum.
fn jkl_eps(
    fam: &GProjectionFamily,
    tau: usize,
    g: GroupElement,
    h: GroupElement,
) -> Result<(Jkl, bool)> {
    let jkl = build_jkl_projected(fam, tau, g, h, false)?;
    let printed = build_jkl(fam, tau, g, h, false)?;
    let differs = jkl.j.distance(&printed.j) > 1e-12;
    Ok((jkl, differs))
}

const EPS_NOTE: &str = "J read as p(g,tau) X_0, carrying the eps_k sign";

fn z4(tube: &Tube, dec: Option<&Decomposition>) -> Result<Vec<StructuredCheck>> {
    let fam = build_gproj(tube)?;
    let mut out = fam.verify("z4 G-projections", dec)?;
    let lambda = tube.global_dimension();
    let mu = lambda / (lambda - 4.0);
    let el = |i: usize| fam.elems[i];
    let ch = |n: &str| fam.character(n);
    let p = |g: usize, t: &str| fam.p(g, ch(t));
    let split = |g: usize, t: &str, s: f64| fam.split(g, ch(t), s);
    let names = ["1", "-1", "i", "-i"];

    let fam_k = "z4 K tables";
    let mut ls: HashMap<(&str, usize, usize), TubeElement> = HashMap::new();
    for h in 0..2 {
        for g in 0..3 {
            for t in names {
                let (jkl, differs) = jkl_eps(&fam, ch(t), el(g), el(h))?;
                let expected = match (h, g, t) {
                    (_, 0, "1") => fam.p1(0)?.scaled(c(mu)),
                    (0, 0, "-1") => split(0, "-1", 1.0)?.scaled(c(2.0)),
                    (1, 0, "-1") => split(0, "-1", -1.0)?.scaled(c(2.0)),
                    (0, 2, "1") => split(2, "1", 1.0)?.scaled(c(2.0)),
                    (1, 2, "1") => split(2, "1", -1.0)?.scaled(c(2.0)),
                    (_, 2, "-1") => fam.p1(2)?.scaled(c(mu)),
                    (_, g, _) => p(g, t)?,
                };
                let mut check = StructuredCheck::at_most(
                    fam_k,
                    format!("K({t},{g},{h})"),
                    jkl.k.distance(&expected),
                    1e-8,
                );
                if differs {
                    check = check.corrected(EPS_NOTE);
                } else if matches!(t, "i" | "-i") {
                    check = check.corrected("printed p(g,conj tau) read as p(g,tau)");
                }
                out.push(check);
                ls.insert((t, g, h), jkl.l);
            }
        }
    }

    let us = [
        corner_unitary(tube, el(0), el(1))?,
        corner_unitary(tube, el(1), el(1))?,
    ];
    let l = |t: &str, g: usize, h: usize| ls[&(t, g, h)].clone();
    let tr = |x: TubeElement| with_transport(tube, &x, &us);
    let both = |t: &str, g: usize| sum([&l(t, g, 0), &l(t, g, 1)]);
    let inv_mu = c(1.0 / mu);
    let half = c(0.5);
    let one = c(1.0);
    let assembled = vec![
        ("P1".to_string(), fam.p0(0)?),
        ("P2".to_string(), fam.p0(2)?),
        ("P3".into(), combo(&[(one, &fam.p1(0)?), (inv_mu, &tr(both("1", 0))?)])),
        ("P4".into(), combo(&[(one, &fam.p1(2)?), (inv_mu, &tr(both("-1", 2))?)])),
        ("P5".into(), combo(&[(one, &split(0, "-1", 1.0)?), (half, &tr(l("-1", 0, 0))?)])),
        ("P6".into(), combo(&[(one, &split(2, "1", 1.0)?), (half, &tr(l("1", 2, 0))?)])),
        ("P7".into(), combo(&[(one, &split(0, "-1", -1.0)?), (half, &tr(l("-1", 0, 1))?)])),
        ("P8".into(), combo(&[(one, &split(2, "1", -1.0)?), (half, &tr(l("1", 2, 1))?)])),
        ("P9".into(), sum([&p(0, "i")?, &p(0, "-i")?, &tr(both("i", 0))?])),
        ("P10".into(), sum([&p(2, "i")?, &p(2, "-i")?, &tr(both("i", 2))?])),
        ("P11".into(), sum([&p(1, "1")?, &p(3, "1")?, &tr(both("1", 1))?])),
        ("P12".into(), sum([&p(1, "-1")?, &p(3, "-1")?, &tr(both("-1", 1))?])),
        ("P13".into(), sum([&p(1, "i")?, &p(3, "-i")?, &tr(both("i", 1))?])),
        ("P14".into(), sum([&p(1, "-i")?, &p(3, "i")?, &tr(both("-i", 1))?])),
    ];
    let i = i_unit();
    let twists: Vec<CScalar> = [1., 1., 1., 1., 1., 1., 1., 1., 1., -1., 1., -1.]
        .iter()
        .map(|&x| c(x))
        .chain([i, -i])
        .collect();
    let fam_p = "z4 assembled P1-P14";
    for (name, x) in &assembled {
        out.push(StructuredCheck::at_most(
            fam_p,
            format!("{name} is a projection"),
            projection_defect(tube, x)?,
            1e-8,
        ));
    }
    out.extend(
        match_all(fam_p, dec, &assembled, Some(&twists))
            .into_iter()
            .map(|ch| {
                if ch.name.starts_with("P13 ") || ch.name.starts_with("P14 ") {
                    ch.corrected("L(tau,1) paired with p(1,tau), matching the K relabeling")
                } else {
                    ch
                }
            }),
    );

    let e3 = epi(3, 10);
    let roots = [
        c(1.0),
        c(-1.0),
        i,
        -i,
        e3,
        -e3,
        e3.conj(),
        -e3.conj(),
        epi(4, 5),
        epi(-4, 5),
    ];
    let rhos: Vec<usize> = (0..4).map(|h| object(tube, el(h), true)).collect::<Result<_>>()?;
    out.extend(tmin_family(tube, dec, "z4 t_h minimal polynomial", &rhos, &roots)?);
    Ok(out)
}

// ---- Z/2 x Z/2 ----

/// `sigma(k,g,h)`: rows `h = 0,a,b,c`; columns the `k != g` in increasing order.
const SIGMA: [[&str; 4]; 4] = [
    ["+++", "--+", "+--", "-+-"],
    ["-+-", "+++", "--+", "+--"],
    ["--+", "+--", "+++", "-+-"],
    ["-+-", "--+", "+--", "+++"],
];

fn sigma(k: usize, g: usize, h: usize) -> f64 {
    let col = if k < g { k } else { k - 1 };
    match SIGMA[g][h].as_bytes()[col] {
        b'+' => 1.0,
        _ => -1.0,
    }
}

fn z2xz2(tube: &Tube, dec: Option<&Decomposition>) -> Result<Vec<StructuredCheck>> {
    let fam = build_gproj(tube)?;
    let mut out = fam.verify("z2xz2 G-projections", dec)?;
    let data = tube.data();
    let lambda = tube.global_dimension();
    let mu = lambda / (lambda - 4.0);
    let el = |i: usize| fam.elems[i];
    // hat(g) is the character eps_g.
    let hat = |g: usize| -> usize {
        let vals: Vec<CScalar> = fam
            .elems
            .iter()
            .map(|&h| c(data.eps(el(g), h) as f64))
            .collect();
        fam.characters
            .iter()
            .position(|ch| ch.same(&vals))
            .expect("eps is a bicharacter")
    };
    let fam_k = "z2xz2 sigma tables";
    let mut ls: HashMap<(usize, usize, usize), TubeElement> = HashMap::new();
    for g in 0..4 {
        for h in 0..4 {
            for k in 0..4 {
                let (jkl, differs) = jkl_eps(&fam, hat(k), el(g), el(h))?;
                let expected = if k == g {
                    fam.p1(g)?.scaled(c(mu))
                } else {
                    combo(&[
                        (c(1.0), &fam.p(g, hat(k))?),
                        (c(sigma(k, g, h)), &fam.e(g, hat(k))?),
                    ])
                };
                let mut check = StructuredCheck::at_most(
                    fam_k,
                    format!("K(hat {k},{g},{h})"),
                    jkl.k.distance(&expected),
                    1e-8,
                );
                if g == 2 && h == 1 && k == 3 {
                    check = check.corrected("printed entry -1 read as the sign -");
                } else if differs {
                    check = check.corrected(EPS_NOTE);
                }
                out.push(check);
                ls.insert((k, g, h), jkl.l);
            }
        }
    }
    let mut assembled = Vec::new();
    for g in 0..4 {
        assembled.push((format!("p({g})^0"), fam.p0(g)?));
        let mut x = fam.p1(g)?;
        for h in 0..4 {
            x.add_scaled(&ls[&(g, g, h)], c(1.0 / mu));
        }
        assembled.push((format!("p({g})^1 + L/mu"), x));
        for k in (0..4).filter(|&k| k != g) {
            for s in [1.0, -1.0] {
                let mut x = fam.split(g, hat(k), s)?;
                for h in (0..4).filter(|&h| sigma(k, g, h) == s) {
                    x.add_scaled(&ls[&(k, g, h)], c(0.5));
                }
                let sign = if s > 0.0 { '+' } else { '-' };
                assembled.push((format!("p({g},hat {k})^{sign} + L/2"), x));
            }
        }
    }
    let fam_p = "z2xz2 assembled projections";
    for (name, x) in &assembled {
        out.push(StructuredCheck::at_most(
            fam_p,
            format!("{name} is a projection"),
            projection_defect(tube, x)?,
            1e-8,
        ));
    }
    out.extend(match_all(fam_p, dec, &assembled, None));
    let e2 = epi(2, 5);
    let roots = [c(1.0), c(-1.0), e2, -e2, e2.conj(), -e2.conj()];
    let rhos: Vec<usize> = (0..4).map(|h| object(tube, el(h), true)).collect::<Result<_>>()?;
    out.extend(tmin_family(tube, dec, "z2xz2 t_h minimal polynomial", &rhos, &roots)?);
    Ok(out)
}

// ---- 4442 ----

fn fourfourfourtwo(tube: &Tube, dec: Option<&Decomposition>) -> Result<Vec<StructuredCheck>> {
    let group = tube.group();
    let mut out = Vec::new();
    let rhos: Vec<usize> = group
        .elements()
        .map(|h| object(tube, h, true))
        .collect::<Result<_>>()?;
    let (e2, e3) = (epi(2, 5), epi(3, 5));
    let roots = [c(1.0), c(-1.0), e2, -e2, e3, -e3];
    out.extend(tmin_family(
        tube,
        dec,
        "fourfourfourtwo grade-0 t_h minimal polynomial",
        &rhos,
        &roots,
    )?);
    let grade_one = tube
        .object_index(tube.aut_element(1, group.zero()), true)
        .ok_or_else(|| StructuredError::MissingLabel("object (1,0)rho".into()))?;
    // The cubic factor is read as x^3 - 1: the twists 1, omega, omega^2 are
    // what the grade-1 half-braidings carry.
    let roots = [
        c(1.0),
        epi(2, 3),
        epi(-2, 3),
        e2,
        e2.conj(),
        epi(4, 15),
        epi(-4, 15),
        epi(14, 15),
        epi(-14, 15),
    ];
    out.extend(
        tmin_family(
            tube,
            dec,
            "fourfourfourtwo grade-1 t minimal polynomial",
            &[grade_one],
            &roots,
        )?
        .into_iter()
        .map(|ch| ch.corrected("printed factor x^3+1 read as x^3-1")),
    );
    Ok(out)
}

// ---- Asaeda-Haagerup frame ----

fn ah(tube: &Tube, dec: Option<&Decomposition>) -> Result<Vec<StructuredCheck>> {
    let fam = build_gproj(tube)?;
    let mut out = fam.verify("ah G-projections", dec)?;
    let lambda = tube.global_dimension();
    let mu = lambda / (lambda - 4.0);
    let m = fam.elems.len() as f64;
    let el = |i: usize| fam.elems[i];
    let ch = |n: &str| fam.character(n);
    let p = |g: usize, t: &str| fam.p(g, ch(t));
    let e = |g: usize, t: &str| fam.e(g, ch(t));
    let split = |g: usize, t: &str, s: f64| fam.split(g, ch(t), s);
    let i = i_unit();
    let one = c(1.0);
    let half = c(0.5);

    let e01 = e(0, "1")?;
    let lhs = tube.product(&e01, &tube.adjoint(&e01)?)?;
    let rhs = combo(&[(one, &p(0, "1")?), (c(2.0 * m), &e01)]);
    out.push(StructuredCheck::at_most(
        "ah G-projections",
        "E(0,1)E(0,1)* = p(0,1) + 2m E(0,1)",
        lhs.distance(&rhs),
        1e-10,
    ));

    let names = ["1", "-1", "i", "-i"];
    let fam_k = "ah K tables";
    let mut ls: HashMap<(&str, usize, usize, bool), TubeElement> = HashMap::new();
    for h in 0..2 {
        for z0 in [false, true] {
            for g in 0..3 {
                for t in names {
                    let jkl = build_jkl(&fam, ch(t), el(g), el(h), z0)?;
                    // The printed E coefficients are negated: our lambda decoration
                    // on the z_0 labels carries the opposite sign.
                    let pair = |g: usize, a: CScalar, b: CScalar| -> Result<TubeElement> {
                        Ok(combo(&[
                            (half, &p(g, "i")?),
                            (half, &p(g, "-i")?),
                            (-half * a, &e(g, "i")?),
                            (-half * b, &e(g, "-i")?),
                        ]))
                    };
                    let expected = match (h, z0, g, t) {
                        (_, false, 0, "1") => fam.p1(0)?.scaled(c(mu)),
                        (0, false, 0, "-1") => split(0, "-1", 1.0)?.scaled(c(2.0)),
                        (1, false, 0, "-1") => split(0, "-1", -1.0)?.scaled(c(2.0)),
                        (_, false, 2, "1") => split(2, "1", 1.0)?.scaled(c(2.0)),
                        (0, false, 2, "-1") => split(2, "-1", 1.0)?.scaled(c(2.0)),
                        (1, false, 2, "-1") => split(2, "-1", -1.0)?.scaled(c(2.0)),
                        (_, false, g, t) => p(g, t)?,
                        (_, true, 1, "1" | "-1") => pair(1, c(0.0), c(0.0))?,
                        (_, true, 1, _) => combo(&[(half, &p(1, "1")?), (half, &p(1, "-1")?)]),
                        (0, true, 0, "1") => pair(0, i, -i)?,
                        (0, true, 0, "-1") => pair(0, -i, i)?,
                        (0, true, 2, "1") => pair(2, -i, i)?,
                        (0, true, 2, "-1") => pair(2, i, -i)?,
                        (1, true, 0, "1") => pair(0, one, one)?,
                        (1, true, 0, "-1") => pair(0, -one, -one)?,
                        (1, true, 2, "1") => pair(2, -one, -one)?,
                        (1, true, 2, "-1") => pair(2, one, one)?,
                        (0, true, 0, _) => {
                            combo(&[(one, &split(0, "-1", 1.0)?), (c(mu / 2.0), &fam.p1(0)?)])
                        }
                        (1, true, 0, _) => {
                            combo(&[(one, &split(0, "-1", -1.0)?), (c(mu / 2.0), &fam.p1(0)?)])
                        }
                        (0, true, 2, _) => sum([&split(2, "1", -1.0)?, &split(2, "-1", -1.0)?]),
                        (_, true, _, _) => sum([&split(2, "1", -1.0)?, &split(2, "-1", 1.0)?]),
                    };
                    let zn = if z0 { "z" } else { "0" };
                    let mut check = StructuredCheck::at_most(
                        fam_k,
                        format!("K({t},{g},{h},{zn})"),
                        jkl.k.distance(&expected),
                        1e-8,
                    );
                    if (h, z0, g, t) == (0, false, 2, "-1") {
                        check = check.corrected("printed p(2,1)^- read as p(2,-1)^+");
                    } else if z0 && g != 1 && matches!(t, "1" | "-1") {
                        check = check.corrected("E coefficients negated for the lambda sign convention");
                    }
                    out.push(check);
                    ls.insert((t, g, h, z0), jkl.l);
                }
            }
        }
    }

    // J_h = p(2,1)^- J(i,2,h,z) splits the rank-two K(i,2,h,z).
    let p21m = split(2, "1", -1.0)?;
    let mut lh = Vec::new();
    for h in 0..2 {
        let j = build_jkl(&fam, ch("i"), el(2), el(h), true)?.j;
        let jh = Jkl::from_j(tube, tube.product(&p21m, &j)?)?;
        out.push(StructuredCheck::at_most(
            fam_k,
            format!("J_{h} J_{h}* = p(2,1)^-"),
            jh.k.distance(&p21m),
            1e-8,
        ));
        lh.push(jh.l);
    }

    let us = [
        corner_unitary(tube, el(0), el(1))?,
        corner_unitary(tube, el(1), el(1))?,
    ];
    let t_el = tube.t_element()?;
    let l = |t: &str, g: usize, h: usize, z0: bool| ls[&(t, g, h, z0)].clone();
    let tr = |x: TubeElement| with_transport(tube, &x, &us);
    let sq = |x: &TubeElement| tube.product(x, x);
    let tm = |x: &TubeElement| tube.product(&t_el, x);
    let lz = |t: &str, g: usize| sum([&l(t, g, 0, true), &l(t, g, 1, true)]);
    let l0 = |t: &str, g: usize| sum([&l(t, g, 0, false), &l(t, g, 1, false)]);

    let p2_inner = {
        let a = l0("1", 0);
        let b = lz("i", 0);
        let sqs = sum([&sq(&l("i", 0, 0, true))?, &sq(&l("i", 0, 1, true))?]);
        let k = 4.0 / (2.0 * mu - mu * mu);
        combo(&[(c(1.0 / mu), &a), (c(k), &b), (c(-k), &sqs)])
    };
    let p9_inner = |h: usize| -> Result<TubeElement> {
        let x = l("i", 0, h, true);
        let k = 2.0 / (mu - 2.0);
        Ok(combo(&[
            (half, &l("-1", 0, h, false)),
            (c(k * mu / 2.0), &x),
            (c(-k), &sq(&x)?),
        ]))
    };
    let lzi1 = lz("i", 1);
    let lz11 = lz("1", 1);
    let assembled = vec![
        ("P1".to_string(), fam.p0(0)?),
        ("P2".into(), sum([&fam.p1(0)?, &tr(p2_inner)?])),
        (
            "P3".into(),
            sum([&p(0, "i")?, &p(0, "-i")?, &tr(sum([&l0("i", 0), &lz("1", 0)]))?]),
        ),
        (
            "P4".into(),
            sum([&p(2, "i")?, &p(2, "-i")?, &tr(sum([&l0("i", 2), &lz("1", 2)]))?]),
        ),
        (
            "P5".into(),
            sum([
                &p(1, "1")?,
                &p(3, "1")?,
                &tr(sum([&l0("1", 1), &lzi1, &tm(&lzi1)?]))?,
            ]),
        ),
        (
            "P6".into(),
            sum([
                &p(1, "-1")?,
                &p(3, "-1")?,
                &tr(combo(&[(one, &l0("-1", 1)), (one, &lzi1), (-one, &tm(&lzi1)?)]))?,
            ]),
        ),
        (
            "P7".into(),
            sum([
                &p(1, "i")?,
                &p(3, "-i")?,
                &tr(combo(&[(one, &l0("i", 1)), (one, &lz11), (-i, &tm(&lz11)?)]))?,
            ]),
        ),
        (
            "P8".into(),
            sum([
                &p(1, "-i")?,
                &p(3, "i")?,
                &tr(combo(&[(one, &l0("-i", 1)), (one, &lz11), (i, &tm(&lz11)?)]))?,
            ]),
        ),
        ("P9".into(), sum([&split(0, "-1", 1.0)?, &tr(p9_inner(0)?)?])),
        ("P10".into(), sum([&split(0, "-1", -1.0)?, &tr(p9_inner(1)?)?])),
        (
            "P11".into(),
            combo(&[(one, &split(2, "1", 1.0)?), (half, &tr(l0("1", 2))?)]),
        ),
        ("P12".into(), sum([&p21m, &tr(sum([&lh[0], &lh[1]]))?])),
        (
            "P13".into(),
            sum([
                &split(2, "-1", 1.0)?,
                &tr(combo(&[
                    (half, &l("-1", 2, 0, false)),
                    (one, &l("i", 2, 1, true)),
                    (-one, &lh[1]),
                ]))?,
            ]),
        ),
        (
            "P14".into(),
            sum([
                &split(2, "-1", -1.0)?,
                &tr(combo(&[
                    (one, &l("i", 2, 0, true)),
                    (-one, &lh[0]),
                    (half, &l("-1", 2, 1, false)),
                ]))?,
            ]),
        ),
    ];
    let fam_p = "ah assembled P1-P14";
    for (name, x) in &assembled {
        out.push(StructuredCheck::at_most(
            fam_p,
            format!("{name} is a projection"),
            projection_defect(tube, x)?,
            1e-8,
        ));
    }
    out.extend(match_all(fam_p, dec, &assembled, None));
    Ok(out)
}

// ---- 2D2 ----

/// Ordered basis of `A_g`: `(g k|1|k g)` then `(g k rho|lambda^{w(-g)}|k rho pi(-g))`, `k = 0, 1`.
fn twod2_basis_g(tube: &Tube, reps: &[GroupElement], g: GroupElement) -> Result<Vec<usize>> {
    let group = tube.group();
    let og = object(tube, g, false)?;
    let (mg, w) = reduce(tube, group.neg(g));
    let omg = object(tube, mg, false)?;
    let mut out = Vec::new();
    for &k in reps {
        out.push(label(tube, og, object(tube, k, false)?, og, Monomial::ONE)?);
    }
    for &k in reps {
        out.push(label(tube, og, object(tube, k, true)?, omg, with_lambda(Monomial::ONE, w))?);
    }
    Ok(out)
}

/// Ordered basis of `A_{g, h rho}`: `z_0 = 0` first, `k = 0` first within.
fn twod2_basis_gh(
    tube: &Tube,
    reps: &[GroupElement],
    g: GroupElement,
    h: GroupElement,
) -> Result<Vec<usize>> {
    let group = tube.group();
    let z = tube.deequiv_frame().expect("frame").z;
    let mut out = Vec::new();
    for (bit, z0) in [(0u32, group.zero()), (1, z)] {
        for &k in reps {
            let x = group.add(group.add(group.double(k), group.sub(g, h)), z0);
            out.push(label(
                tube,
                object(tube, g, false)?,
                object(tube, k, true)?,
                object(tube, h, true)?,
                with_lambda(mono_t(x), bit),
            )?);
        }
    }
    Ok(out)
}

fn coords(basis: &[usize], scale: f64, v: [CScalar; 4]) -> TubeElement {
    TubeElement::from_pairs(basis.iter().zip(v).map(|(&l, x)| (l, x * scale)))
}

fn twod2(tube: &Tube, dec: Option<&Decomposition>) -> Result<Vec<StructuredCheck>> {
    let frame = tube
        .deequiv_frame()
        .ok_or_else(|| StructuredError::Unsupported("2D2 needs a frame".into()))?;
    let reps = frame.reps.clone();
    let lambda = tube.global_dimension();
    let d = tube.data().d;
    let (o, i) = (c(1.0), i_unit());
    let b0 = twod2_basis_g(tube, &reps, reps[0])?;
    let b1 = twod2_basis_g(tube, &reps, reps[1])?;
    let p0 = [
        coords(&b0, 1.0 / lambda, [o, o, c(d), c(d)]),
        coords(
            &b0,
            1.0 / lambda,
            [c((lambda - 2.0) / 2.0), c((lambda - 2.0) / 2.0), c(-d), c(-d)],
        ),
        coords(&b0, 0.25, [o, -o, o, -o]),
        coords(&b0, 0.25, [o, -o, -o, o]),
    ];
    let p1 = [
        coords(&b1, 0.25, [o, i, o, -i]),
        coords(&b1, 0.25, [o, i, -o, i]),
        coords(&b1, 0.25, [o, -i, o, i]),
        coords(&b1, 0.25, [o, -i, -o, -i]),
    ];
    let fam_a = "twod2 A_G projections";
    let mut out = Vec::new();
    let objects: BTreeSet<usize> = reps
        .iter()
        .map(|&g| object(tube, g, false))
        .collect::<Result<_>>()?;
    let mut total = TubeElement::zero();
    for (gi, ps) in [(0, &p0), (1, &p1)] {
        for (j, x) in ps.iter().enumerate() {
            let name = format!("p({gi})_{}", j + 1);
            out.push(StructuredCheck::at_most(
                fam_a,
                format!("{name} is a projection"),
                projection_defect(tube, x)?,
                1e-10,
            ));
            if let Some(dec) = dec {
                out.push(StructuredCheck::at_most(
                    fam_a,
                    format!("{name} is a sum of generic components"),
                    dominance_defect(tube, dec, x, &objects)?,
                    1e-8,
                ));
            }
            total.add_scaled(x, o);
        }
    }
    let mut unit = TubeElement::zero();
    for &g in &objects {
        unit.add(tube.unit_of(g), o);
    }
    out.push(StructuredCheck::at_most(
        fam_a,
        "p(i)_j sum to the unit of A_G",
        total.distance(&unit),
        1e-10,
    ));

    // J(i,j)_k in A_{i, j rho}.
    let a = ((lambda - 2.0) / (4.0 * lambda)).sqrt();
    let b = 1.0 / (2.0 * 2f64.sqrt());
    let z = c(0.0);
    let bgh = |g: usize, h: usize| twod2_basis_gh(tube, &reps, reps[g], reps[h]);
    let (b00, b01, b10, b11) = (bgh(0, 0)?, bgh(0, 1)?, bgh(1, 0)?, bgh(1, 1)?);
    let js: Vec<((usize, usize, usize), TubeElement)> = vec![
        ((0, 0, 1), coords(&b00, a, [o, o, z, z])),
        ((0, 0, 2), coords(&b00, a, [z, z, o, -o])),
        ((0, 0, 3), coords(&b00, b, [o, -o, z, z])),
        ((0, 0, 4), coords(&b00, b, [z, z, o, o])),
        ((0, 1, 1), coords(&b01, a, [o, -o, z, z])),
        ((0, 1, 2), coords(&b01, a, [z, z, o, -o])),
        ((0, 1, 3), coords(&b01, b, [o, o, z, z])),
        ((0, 1, 4), coords(&b01, b, [z, z, o, o])),
        ((1, 0, 1), coords(&b10, 0.25, [o, i, o, i])),
        ((1, 0, 2), coords(&b10, 0.25, [o, i, -o, -i])),
        ((1, 0, 3), coords(&b10, 0.25, [o, -i, o, -i])),
        ((1, 0, 4), coords(&b10, 0.25, [o, -i, -o, i])),
        ((1, 1, 1), coords(&b11, 0.25, [o, i, -i, -o])),
        ((1, 1, 2), coords(&b11, 0.25, [o, i, i, o])),
        ((1, 1, 3), coords(&b11, 0.25, [o, -i, i, -o])),
        ((1, 1, 4), coords(&b11, 0.25, [o, -i, -i, o])),
    ];
    let fam_k = "twod2 J K L identities";
    let mut ls = HashMap::new();
    for ((gi, h, k), j) in &js {
        let jkl = Jkl::from_j(tube, j.clone())?;
        let expected = match (gi, k) {
            (0, 1 | 2) => &p0[1],
            (0, _) if *h == 0 => &p0[2],
            (0, _) => &p0[3],
            (_, k) => &p1[k - 1],
        };
        out.push(StructuredCheck::at_most(
            fam_k,
            format!("K({gi},{h})_{k}"),
            jkl.k.distance(expected),
            1e-8,
        ));
        ls.insert((*gi, *h, *k), jkl.l);
    }
    let mut cross = 0.0f64;
    for (ka, ja) in &js {
        for (kb, jb) in &js {
            if ka != kb {
                cross = cross.max(tube.product(ja, &tube.adjoint(jb)?)?.max_abs());
            }
        }
    }
    out.push(StructuredCheck::at_most(
        fam_k,
        "J(i,j)_k J(i',j')_k'* = 0 for distinct indices",
        cross,
        1e-8,
    ));

    let l = |g: usize, h: usize, k: usize| ls[&(g, h, k)].clone();
    let assembled = vec![
        ("P1".to_string(), p0[0].clone()),
        (
            "P2".into(),
            sum([&p0[1], &l(0, 0, 1), &l(0, 0, 2), &l(0, 1, 1), &l(0, 1, 2)]),
        ),
        ("P3".into(), sum([&p0[2], &l(0, 0, 3), &l(0, 0, 4)])),
        ("P4".into(), sum([&p0[3], &l(0, 1, 3), &l(0, 1, 4)])),
        ("P5".into(), sum([&p1[0], &l(1, 0, 1), &l(1, 1, 1)])),
        ("P6".into(), sum([&p1[1], &l(1, 0, 2), &l(1, 1, 2)])),
        ("P7".into(), sum([&p1[2], &l(1, 0, 3), &l(1, 1, 3)])),
        ("P8".into(), sum([&p1[3], &l(1, 0, 4), &l(1, 1, 4)])),
    ];
    let twists = [o, o, o, o, i, i, -i, -i];
    let fam_p = "twod2 assembled P1-P8";
    for (name, x) in &assembled {
        out.push(StructuredCheck::at_most(
            fam_p,
            format!("{name} is a projection"),
            projection_defect(tube, x)?,
            1e-8,
        ));
    }
    out.extend(match_all(fam_p, dec, &assembled, Some(&twists)));
    Ok(out)
}
