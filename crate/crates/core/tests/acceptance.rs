//! Acceptance criteria, one line per criterion. Run with
//! `cargo test -p flatfront --test acceptance`.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use flatfront::algebra::{GaussianRational, Polynomial, RationalMap, Value, DEFAULT_ROOT_TOL};
use flatfront::catalog::{self, CatalogFront};
use flatfront::elliptic::{integrate_path, SquareTorus};
use flatfront::expr::{bindings, parse_rational, Bindings};
use flatfront::front::{
    apply_motion, apply_motion_to_point, classify_ends, front_condition, front_from_frame, inversion_motion,
    motion_matrix, period_check, FrontGeometry, FrontSpec, PreparedFront,
};
use flatfront::report::Report;
use flatfront::sphere::{critical_divisor, ExtendedPoint, RationalOneForm};
use flatfront::valuedist::{corollary_feasibility, totally_ramified, verify_main_theorem, Feasibility};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn q(n: i64, d: i64) -> GaussianRational {
    GaussianRational::from_ratio(n, d)
}

fn ex(n: i64, d: i64) -> ExtendedPoint {
    ExtendedPoint::exact(q(n, d))
}

fn map(text: &str, b: &Bindings) -> RationalMap {
    parse_rational(text, b).expect("parses")
}

fn k1_spec(a: GaussianRational) -> FrontSpec {
    let b = bindings([("a", a)]);
    FrontSpec::new(map("z^2", &b), map("z*(z+a)/(a*z+1)", &b), 1.0, &[]).expect("valid front")
}

fn k2_spec() -> FrontSpec {
    let b = Bindings::new();
    FrontSpec::new(map("z^3", &b), map("z*(z+6)/(2*z+5)", &b), 1.0, &[]).expect("valid front")
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn residue_table(spec: &FrontSpec, expected: &[(ExtendedPoint, GaussianRational)]) -> Result<(), String> {
    let report = period_check(&spec.g, &spec.g_star).map_err(|e| e.to_string())?;
    ensure(report.poles.len() == expected.len(), || format!("{} poles", report.poles.len()))?;
    for (p, want) in expected {
        let got = report.residue_at(p).ok_or_else(|| format!("no pole at {p}"))?;
        ensure(*got == Value::Exact(want.clone()), || format!("residue at {p}: {got:?} != {want}"))?;
    }
    Ok(())
}

fn c1_residues_four_ends() -> Outcome {
    for a in [q(2, 1), q(-3, 1), q(1, 2)] {
        let one = GaussianRational::one();
        let inv = a.inv().expect("nonzero");
        let expected = [
            (ex(1, 1), &(&one + &a) * &inv),
            (ex(-1, 1), &(&a - &one) * &inv),
            (ExtendedPoint::Infinity, q(-2, 1)),
        ];
        residue_table(&k1_spec(a.clone()), &expected).map_err(|e| format!("a = {a}: {e}"))?;
    }
    Ok("residues (1+a)/a, (a-1)/a, -2 for a in {2, -3, 1/2}".into())
}

fn c2_residues_five_ends() -> Outcome {
    let expected = [
        (ex(1, 1), q(7, 5)),
        (ex(-2, 1), q(-2, 1)),
        (ex(-3, 2), q(18, 5)),
        (ExtendedPoint::Infinity, q(-3, 1)),
    ];
    residue_table(&k2_spec(), &expected)?;
    Ok("residues 7/5, -2, 18/5, -3".into())
}

fn c3_hopf_orders() -> Outcome {
    let spec = k1_spec(q(2, 1));
    let (ends, _) = classify_ends(&spec).map_err(|e| e.to_string())?;
    let want = [(ex(0, 1), -1), (ex(1, 1), -2), (ex(-1, 1), -2), (ExtendedPoint::Infinity, -1)];
    for (p, o) in &want {
        let e = ends.iter().find(|e| e.point == *p).ok_or_else(|| format!("{p} is not an end"))?;
        ensure(e.ord_q == Some(*o), || format!("ord Q at {p} = {:?}", e.ord_q))?;
        ensure(e.regular && e.complete(), || format!("end {p} not regular and complete"))?;
    }
    ensure(ends.len() == 4, || format!("{} ends", ends.len()))?;
    Ok("ord Q = (-1, -2, -2, -1), all ends regular and complete".into())
}

fn run_entry(name: &str) -> Result<Report, String> {
    catalog::find(name)
        .and_then(|e| e.run(&Bindings::new(), 1.0))
        .map_err(|e| format!("{name}: {e}"))
}

fn c4_osserman() -> Outcome {
    let mut parts = Vec::new();
    for (name, d, ds, k, embedded) in [
        ("k1-four-ends", 2, 2, 4, true),
        ("k2-five-ends", 3, 2, 5, true),
        ("k3-torus", 2, 4, 5, false),
    ] {
        let s = run_entry(name)?.summary();
        let got = (
            s["d"].parse::<usize>().unwrap(),
            s["dstar"].parse::<usize>().unwrap(),
            s["k"].parse::<usize>().unwrap(),
        );
        ensure(got == (d, ds, k), || format!("{name}: (d, d*, k) = {got:?}"))?;
        ensure(s["osserman_holds"] == "true", || format!("{name}: inequality fails"))?;
        ensure(s["embedded"] == embedded.to_string(), || format!("{name}: embedded = {}", s["embedded"]))?;
        ensure(s["equality"] == embedded.to_string(), || format!("{name}: equality = {}", s["equality"]))?;
        parts.push(format!("{name} {d}+{ds} {} {k}", if d + ds == k { "=" } else { ">" }));
    }
    Ok(parts.join("; "))
}

fn c5_totally_ramified() -> Outcome {
    let s1 = run_entry("k1-four-ends")?.summary();
    ensure(s1["nu_G"] == "3" && s1["nu_G*"] == "2", || format!("k1: nu = ({}, {})", s1["nu_G"], s1["nu_G*"]))?;
    let s2 = run_entry("k2-five-ends")?.summary();
    ensure(s2["nu_G*"] == "1", || format!("k2: nu_G* = {}", s2["nu_G*"]))?;
    ensure(s2["D_G*"] == "0" && s2["nu_i_G*"] == "2,2", || {
        format!("k2: G* ramified values {} with exceptional count {}", s2["nu_i_G*"], s2["D_G*"])
    })?;
    let spec = k2_spec();
    let oracle = common::oracle_of(&spec.g);
    let pts: Vec<common::Pt> = spec.ends.iter().map(common::to_pt).collect();
    let (_, _, nu_oracle) = oracle.nu(&pts);
    let nu_engine = totally_ramified(&spec.g, &spec.ends).map_err(|e| e.to_string())?.nu;
    ensure(nu_engine == nu_oracle, || format!("k2: engine nu_G {nu_engine} vs oracle {nu_oracle}"))?;
    ensure(s2["nu_G"] == nu_oracle.to_string(), || format!("k2: report nu_G {}", s2["nu_G"]))?;
    Ok(format!(
        "k1 (3, 2); k2 nu_G* = 1 from two values of multiplicity 2; k2 nu_G = {nu_oracle} (oracle; statement says 3)"
    ))
}

fn poly_from(coeffs: &[i64]) -> Polynomial {
    Polynomial::from_integers(coeffs)
}

fn from_roots(roots: &[(i64, u32)], lead: i64) -> Polynomial {
    roots.iter().fold(poly_from(&[lead]), |acc, &(r, m)| &acc * &poly_from(&[-r, 1]).pow(m))
}

fn random_rational(rng: &mut ChaCha8Rng, max_degree: usize) -> Option<RationalMap> {
    let (num, den) = if rng.gen_bool(0.3) {
        let coeffs = |rng: &mut ChaCha8Rng| {
            let n = rng.gen_range(1..=max_degree + 1);
            (0..n).map(|_| rng.gen_range(-3i64..=3)).collect::<Vec<_>>()
        };
        (poly_from(&coeffs(rng)), poly_from(&coeffs(rng)))
    } else {
        let roots = |rng: &mut ChaCha8Rng| {
            let n = rng.gen_range(0..=2);
            (0..n).map(|_| (rng.gen_range(-3i64..=3), rng.gen_range(1u32..=3))).collect::<Vec<_>>()
        };
        let lead = [-3i64, -2, -1, 1, 2, 3][rng.gen_range(0..6)];
        (from_roots(&roots(rng), lead), from_roots(&roots(rng), 1))
    };
    let g = RationalMap::new(num, den).ok()?;
    (!g.is_constant() && g.degree() <= max_degree).then_some(g)
}

fn c6_theorem_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0006);
    let (mut tuples, mut applicable, mut attempts) = (0usize, 0usize, 0usize);
    while tuples < 500 {
        attempts += 1;
        if attempts > 200_000 {
            return Err(format!("only {tuples} valid fronts generated"));
        }
        let (Some(g), Some(gs)) = (random_rational(&mut rng, 4), random_rational(&mut rng, 4)) else {
            continue;
        };
        let Ok(spec) = FrontSpec::new(g, gs, 1.0, &[]) else {
            continue;
        };
        let k = spec.k();
        if k < 3 {
            continue;
        }
        let Ok(period) = period_check(&spec.g, &spec.g_star) else {
            continue;
        };
        if !period.verdict || !front_condition(&spec.g, &spec.g_star).is_ok_and(|c| c.holds) {
            continue;
        }
        let a = totally_ramified(&spec.g, &spec.ends).map_err(|e| e.to_string())?;
        let b = totally_ramified(&spec.g_star, &spec.ends).map_err(|e| e.to_string())?;
        let v = verify_main_theorem(&a.nu, &b.nu, 0, k, Some((a.d, b.d))).map_err(|e| e.to_string())?;
        tuples += 1;
        ensure(a.d + b.d >= k, || format!("d + d* < k for G = {}, G* = {}", spec.g, spec.g_star))?;
        ensure(v.bound_g == Some(true) && v.bound_g_star == Some(true), || {
            format!("per-map bound fails for G = {}, G* = {}", spec.g, spec.g_star)
        })?;
        if v.applicable {
            applicable += 1;
            ensure(v.holds == Some(true), || {
                format!("inequality fails for G = {}, G* = {} (nu = {}, {})", spec.g, spec.g_star, a.nu, b.nu)
            })?;
        }
    }
    Ok(format!(
        "{tuples} fronts: per-map bound and d + d* >= k on all; {applicable} with both nu > 2, inequality on each"
    ))
}

enum Sampled {
    Rational { spec: FrontSpec, front: Box<PreparedFront> },
    Torus(Box<flatfront::elliptic::EllipticFront>),
}

impl Sampled {
    fn geometry(&self) -> &dyn FrontGeometry {
        match self {
            Sampled::Rational { front, .. } => front.as_ref(),
            Sampled::Torus(t) => t.as_ref(),
        }
    }
}

fn bits(x: &flatfront::front::HermitianPoint) -> [u64; 4] {
    x.coords().map(f64::to_bits)
}

fn c7_geometry_suite() -> Outcome {
    let mut fronts: Vec<(String, Sampled)> = Vec::new();
    for entry in catalog::entries() {
        let (front, _) = entry.front(&Bindings::new(), 1.0).map_err(|e| e.to_string())?;
        let sampled = match front {
            CatalogFront::Rational(f) => Sampled::Rational {
                spec: f.spec().clone(),
                front: f,
            },
            CatalogFront::Torus(t) => Sampled::Torus(t),
        };
        fronts.push((entry.name.to_string(), sampled));
    }
    let motions = [
        inversion_motion(),
        [[q(2, 1), q(1, 1)], [q(1, 1), q(1, 1)]],
        [[GaussianRational::one(), GaussianRational::i()], [GaussianRational::zero(), GaussianRational::one()]],
    ];
    let mut moved: Vec<Vec<Option<PreparedFront>>> = Vec::new();
    for (_, f) in &fronts {
        moved.push(match f {
            Sampled::Rational { spec, .. } => motions
                .iter()
                .map(|a| apply_motion(a, spec).ok().and_then(|s| PreparedFront::new(&s).ok()))
                .collect(),
            Sampled::Torus(_) => Vec::new(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0007);
    let (mut samples, mut skipped, mut tangent_checks) = (0usize, 0usize, 0usize);
    let (mut det_err, mut det_nu_err, mut tangent_err, mut motion_err) = (0f64, 0f64, 0f64, 0f64);
    while samples < 1000 {
        if skipped > 100_000 {
            return Err("too many rejected samples".into());
        }
        let idx = rng.gen_range(0..fronts.len());
        let (name, f) = &fronts[idx];
        let t: f64 = rng.gen_range(-1.0..1.0);
        let z = match f {
            Sampled::Rational { .. } => Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)),
            Sampled::Torus(_) => Complex64::new(rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0)),
        };
        let geometry = |z: Complex64| f.geometry().local_frame(z);
        let exclusions = f.geometry().exclusion_points();
        if exclusions.iter().any(|e| (e - z).norm() < 0.05) {
            skipped += 1;
            continue;
        }
        let Ok(frame) = geometry(z) else {
            skipped += 1;
            continue;
        };
        let Ok(p) = front_from_frame(&frame, t) else {
            skipped += 1;
            continue;
        };
        samples += 1;
        let x0 = p.f.coords()[0];
        let conditioning = (x0 * x0).max(1.0);
        det_err = det_err.max((p.f.det() - 1.0).abs() / conditioning);
        det_nu_err = det_nu_err.max((p.nu.det() + 1.0).abs() / conditioning);
        ensure(p.f.coords()[0] > 0.0, || format!("{name}: x0 <= 0 at {z}"))?;
        if frame.log_rho_sq().abs() > 0.1 {
            let h = 1e-5;
            for dir in [Complex64::new(1.0, 0.0), Complex64::i()] {
                let plus = geometry(z + dir * h).and_then(|fr| front_from_frame(&fr, t));
                let minus = geometry(z - dir * h).and_then(|fr| front_from_frame(&fr, t));
                if let (Ok(a), Ok(b)) = (plus, minus) {
                    let df = a.f.sub(&b.f).scale(0.5 / h);
                    let size = df.coords().iter().fold(1.0f64, |m, x| m.max(x.abs())) * x0;
                    tangent_err = tangent_err.max(df.inner(&p.nu).abs() / size);
                    tangent_checks += 1;
                }
            }
        }
        if let Sampled::Rational { spec, .. } = f {
            let which = rng.gen_range(0..motions.len());
            if let Some(m_front) = &moved[idx][which] {
                if let Ok(qp) = m_front.evaluate(z, t) {
                    let want = apply_motion_to_point(&motion_matrix(&motions[which]), &p.f).map_err(|e| e.to_string())?;
                    let scale = want.h11.abs().max(want.h22.abs()).max(1.0);
                    motion_err = motion_err.max(qp.f.max_abs_diff(&want) / scale);
                }
            }
            let c = Complex64::from_polar(spec.scale * rng.gen_range(0.5..2.0), rng.gen_range(0.0..std::f64::consts::TAU));
            let rotations = [c, Complex64::new(-c.im, c.re), -c, Complex64::new(c.im, -c.re), c.conj()];
            let mut reference = None;
            for r in rotations {
                let s = FrontSpec::with_complex_scale(spec.g.clone(), spec.g_star.clone(), r, &[]).map_err(|e| e.to_string())?;
                let pt = PreparedFront::new(&s).and_then(|pf| pf.evaluate(z, t)).map_err(|e| e.to_string())?;
                let key = (bits(&pt.f), bits(&pt.nu));
                match &reference {
                    None => reference = Some(key),
                    Some(k) => ensure(*k == key, || format!("{name}: phase of c changes the front at {z}"))?,
                }
            }
        }
    }
    ensure(det_err < 1e-9, || format!("|det f - 1| up to {det_err:e}"))?;
    ensure(det_nu_err < 1e-9, || format!("|det nu + 1| up to {det_nu_err:e}"))?;
    ensure(tangent_err < 1e-6, || format!("<df, nu> up to {tangent_err:e}"))?;
    ensure(motion_err < 1e-9, || format!("motion error up to {motion_err:e}"))?;
    Ok(format!(
        "{samples} samples: det f {det_err:.1e}, det nu {det_nu_err:.1e}, <df,nu> {tangent_err:.1e} ({tangent_checks} checks), motion {motion_err:.1e}, phase bit-exact"
    ))
}

fn gaussian_integer(rng: &mut ChaCha8Rng) -> GaussianRational {
    let re = BigRational::from_integer(BigInt::from(rng.gen_range(-3i64..=3)));
    let im = BigRational::from_integer(BigInt::from(rng.gen_range(-2i64..=2)));
    GaussianRational::new(re, im)
}

fn c8_riemann_hurwitz_and_residues() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0008);
    let mut maps = 0;
    while maps < 200 {
        let Some(g) = random_rational(&mut rng, 6) else { continue };
        maps += 1;
        let branching = critical_divisor(&g).map_err(|e| e.to_string())?.degree();
        ensure(branching == 2 * g.degree() as i64 - 2, || format!("total branching {branching} for {g}"))?;
    }
    let mut forms = 0;
    let mut numeric_sum: f64 = 0.0;
    while forms < 200 {
        let exact_poles = forms % 2 == 0;
        let num: Vec<GaussianRational> = (0..rng.gen_range(1..=7)).map(|_| gaussian_integer(&mut rng)).collect();
        let den = if exact_poles {
            let mut d = Polynomial::new(vec![GaussianRational::one()]);
            for _ in 0..rng.gen_range(1..=3) {
                let root = gaussian_integer(&mut rng);
                d = &d * &Polynomial::linear(&root).pow(rng.gen_range(1u32..=2));
            }
            d
        } else {
            let mut c: Vec<GaussianRational> = (0..rng.gen_range(2..=7)).map(|_| gaussian_integer(&mut rng)).collect();
            if c.last().is_some_and(Zero::is_zero) {
                *c.last_mut().unwrap() = GaussianRational::one();
            }
            Polynomial::new(c)
        };
        let Ok(coef) = RationalMap::new(Polynomial::new(num), den) else { continue };
        if coef.is_zero() || coef.degree() > 6 {
            continue;
        }
        forms += 1;
        let residues = RationalOneForm::new(coef.clone()).residues(DEFAULT_ROOT_TOL).map_err(|e| e.to_string())?;
        let all_exact = residues.iter().all(|(_, _, r)| r.is_exact());
        if all_exact {
            let sum = residues
                .iter()
                .fold(GaussianRational::zero(), |acc, (_, _, r)| &acc + r.as_exact().unwrap());
            ensure(sum.is_zero(), || format!("residues of {coef} dz sum to {sum}"))?;
        } else {
            let sum: Complex64 = residues.iter().map(|(_, _, r)| r.to_complex()).sum();
            numeric_sum = numeric_sum.max(sum.norm());
            ensure(sum.norm() < 1e-8, || format!("residues of {coef} dz sum to {sum}"))?;
        }
        ensure(!exact_poles || all_exact, || format!("residues of {coef} dz not exact"))?;
    }
    Ok(format!("200 maps with n_G = 2d - 2; 200 forms with zero residue sum (numeric poles within {numeric_sum:.1e})"))
}

fn c9_elliptic_kernel() -> Outcome {
    let torus = SquareTorus::new();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0009);
    let mut worst: f64 = 0.0;
    let mut count = 0;
    while count < 100 {
        let z = Complex64::new(rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5));
        if z.norm() < 1e-3 {
            continue;
        }
        worst = worst.max(torus.ode_residual(z).map_err(|e| e.to_string())?);
        count += 1;
    }
    ensure(worst < 1e-8, || format!("ODE residual {worst:e}"))?;

    let log_derivative = |z: Complex64| -> Option<Complex64> {
        let (p, dp) = torus.wp(z).ok()?;
        Some(dp / p)
    };
    let base = Complex64::new(0.137, 0.291);
    let mut windings = Vec::new();
    for dir in [Complex64::new(1.0, 0.0), Complex64::i()] {
        let path: Vec<Complex64> = (0..=8).map(|k| base + dir * (k as f64 / 8.0)).collect();
        let v = integrate_path(&log_derivative, &path, 1e-10).map_err(|e| e.to_string())?;
        let w = v.im / std::f64::consts::TAU;
        ensure(v.re.abs() < 1e-6 && (w - w.round()).abs() * std::f64::consts::TAU < 1e-6, || {
            format!("cycle integral {v} not in 2 pi i Z")
        })?;
        windings.push(w.round() as i64);
    }

    let report = run_entry("k3-torus")?;
    let Report::Torus(t) = &report else {
        return Err("k3-torus did not produce a torus report".into());
    };
    ensure(t.period.cycles.iter().all(|c| c.in_2pi_i_z) && t.period.verdict, || "front cycles".into())?;
    ensure((t.degrees.d, t.degrees.dstar) == (2, 4), || format!("degrees {:?}", t.degrees))?;
    ensure(t.ends.len() == 5, || format!("{} ends", t.ends.len()))?;
    Ok(format!(
        "ODE residual {worst:.1e} at 100 points; d log wp windings {windings:?}; degrees (2, 4); 5 ends"
    ))
}

fn c10_corollaries() -> Outcome {
    let verdict = |g, p, q| corollary_feasibility(g, p, q, None).map(|r| r.verdict).map_err(|e| e.to_string());
    ensure(verdict(0, 4, 4)? == Feasibility::Infeasible, || "(0,4,4)".into())?;
    ensure(verdict(1, 5, 5)? == Feasibility::Infeasible, || "(1,5,5)".into())?;
    ensure(verdict(0, 3, 3)? == Feasibility::RequiresMinEnds { k_min: 4 }, || "(0,3,3)".into())?;
    ensure(verdict(1, 4, 4)? == Feasibility::RequiresEmbeddedEnds, || "(1,4,4)".into())?;
    Ok("(0,4,4) and (1,5,5) infeasible; (0,3,3) needs k >= 4; (1,4,4) forces embedded ends".into())
}

struct Criterion {
    id: u32,
    name: &'static str,
    limit: Duration,
    run: fn() -> Outcome,
}

fn main() -> ExitCode {
    let criteria = [
        Criterion { id: 1, name: "residue table, four ends", limit: Duration::from_secs(1), run: c1_residues_four_ends },
        Criterion { id: 2, name: "residue table, five ends", limit: Duration::from_secs(1), run: c2_residues_five_ends },
        Criterion { id: 3, name: "Hopf pole orders", limit: Duration::from_secs(1), run: c3_hopf_orders },
        Criterion { id: 4, name: "Osserman verdicts", limit: Duration::from_secs(10), run: c4_osserman },
        Criterion { id: 5, name: "totally ramified numbers", limit: Duration::from_secs(5), run: c5_totally_ramified },
        Criterion { id: 6, name: "ramification estimate suite", limit: Duration::from_secs(60), run: c6_theorem_suite },
        Criterion { id: 7, name: "geometry invariant suite", limit: Duration::from_secs(30), run: c7_geometry_suite },
        Criterion {
            id: 8,
            name: "Riemann-Hurwitz and residue theorem",
            limit: Duration::from_secs(10),
            run: c8_riemann_hurwitz_and_residues,
        },
        Criterion { id: 9, name: "elliptic kernel", limit: Duration::from_secs(60), run: c9_elliptic_kernel },
        Criterion { id: 10, name: "corollary logic", limit: Duration::from_secs(1), run: c10_corollaries },
    ];
    let mut failures = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > c.limit => Err(format!("{detail}; took longer than {:?}", c.limit)),
            other => other,
        };
        let (tag, detail) = match &outcome {
            Ok(d) => ("PASS", d.as_str()),
            Err(d) => ("FAIL", d.as_str()),
        };
        if outcome.is_err() {
            failures += 1;
        }
        println!("{tag} {:>2} {} [{:.2} s] {detail}", c.id, c.name, elapsed.as_secs_f64());
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
