//! Acceptance gate: one PASS/FAIL line per criterion, exact comparisons only.
//! Exits non-zero when any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use torspan::{
    alpha, circular_span, class_report, correction_term, correction_term_with, k_residue, knot_surgery_lower_bound,
    knot_surgery_torsion, knot_surgery_upper_bound, lens_torsion, quadratic_function, ratio, theta_lower_bound,
    fibred_equality_check, beta_expansion, AbelianGroup, GroupElement, GroupRingElement, LaurentPoly1, LaurentPoly2,
    LinkSurgery, Parity, QhsData, QmodZ, Rational, Verdict,
};
use torspan_cli::{run, OutputDocument};

type Check = Result<(), String>;
type Criterion = (&'static str, fn() -> Check);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

macro_rules! ensure_eq {
    ($a:expr, $b:expr, $what:expr) => {{
        let (a, b) = (&$a, &$b);
        if a != b {
            return Err(format!("{}: got {:?}, expected {:?}", $what, a, b));
        }
    }};
}

fn elem(group: &Arc<AbelianGroup>, coeffs: &[(i64, i64)], den: i64) -> GroupRingElement {
    let t = group.generator(0);
    GroupRingElement::from_terms(group.clone(), coeffs.iter().map(|&(e, c)| (group.pow(&t, e), ratio(c, den))))
}

fn t(data: &QhsData, k: i64) -> GroupElement {
    data.group().pow(&data.group().generator(0), k)
}

fn q(n: i64, d: i64) -> QmodZ {
    QmodZ::new(ratio(n, d))
}

fn criterion_1() -> Check {
    let start = Instant::now();
    let l = lens_torsion(5, 1).map_err(|e| e.to_string())?;
    let g = l.group();
    let u = t(&l, 2);
    ensure_eq!(*l.torsion_rep(), elem(g, &[(1, 1), (2, 1), (4, -2)], 5), "tau");
    ensure_eq!(l.linking_form().pair(&t(&l, 1), &t(&l, 1)), q(1, 5), "L(t,t)");
    ensure_eq!(quadratic_function(&l, &u), q(0, 1), "q_e(t^2)");
    let k = k_residue(&l, &u).unwrap();
    ensure_eq!(k.to_string(), "5 mod 10", "K(e,t^2)");
    ensure_eq!(k.parity(), Parity::Odd, "parity");
    ensure_eq!(correction_term(&l, &u).unwrap(), elem(g, &[(4, 1), (1, -1)], 1), "a_e(t^2)");
    ensure_eq!(theta_lower_bound(&l, &u).unwrap(), ratio(1, 5), "bound");
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    Ok(())
}

fn criterion_2() -> Check {
    let l = lens_torsion(6, 1).map_err(|e| e.to_string())?;
    let g = l.group();
    ensure_eq!(
        alpha(g, &t(&l, 1)).unwrap(),
        elem(g, &[(0, -5), (1, -3), (2, -1), (3, 1), (4, 3), (5, 5)], 12),
        "alpha_t"
    );
    ensure_eq!(
        *l.torsion_rep(),
        elem(g, &[(0, -5), (1, 13), (2, 19), (3, 13), (4, -5), (5, -35)], 72),
        "tau"
    );
    ensure_eq!(theta_lower_bound(&l, &t(&l, 2)).unwrap(), ratio(1, 3), "bound t^2");
    let u = t(&l, 3);
    ensure_eq!(theta_lower_bound(&l, &u).unwrap(), ratio(1, 2), "bound t^3");
    ensure_eq!(quadratic_function(&l, &u), q(3, 4), "q_e(t^3)");
    ensure_eq!(k_residue(&l, &u).unwrap().to_string(), "1 mod 4", "K(e,t^3)");
    ensure_eq!(l.linking_form().annihilator_subgroup(&u).unwrap(), vec![t(&l, 0), t(&l, 2), t(&l, 4)], "G_t^3");
    ensure_eq!(correction_term(&l, &u).unwrap(), elem(g, &[(5, 1), (2, -1)], 1), "a_e(t^3)");
    Ok(())
}

fn criterion_3() -> Check {
    for (p, qq) in [(2, 1), (3, 1), (5, 2)] {
        let l = lens_torsion(p, qq).map_err(|e| e.to_string())?;
        for k in 0..p {
            ensure_eq!(theta_lower_bound(&l, &t(&l, k)).unwrap(), Rational::zero(), format!("L({p},{qq}) t^{k}"));
        }
    }
    Ok(())
}

fn trefoil() -> LaurentPoly1 {
    LaurentPoly1::from_terms([(-1, 1), (0, -1), (1, 1)])
}

fn criterion_4() -> Check {
    for p in 2..=12 {
        let lower = knot_surgery_lower_bound(p, &trefoil()).map_err(|e| e.to_string())?.lower;
        let upper = knot_surgery_upper_bound(p, 1).unwrap();
        ensure_eq!(lower, ratio(1, p), format!("lower p={p}"));
        ensure_eq!(upper, ratio(1, p), format!("upper p={p}"));
        ensure_eq!(fibred_equality_check(p, &trefoil(), 1).unwrap(), Verdict::Equality(ratio(1, p)), "verdict");
    }
    Ok(())
}

fn criterion_5() -> Check {
    for p in 1..=50u64 {
        // Z/1 is the trivial group, which has no cyclic factors
        let g = if p == 1 { AbelianGroup::new(vec![], 0) } else { AbelianGroup::cyclic(p, "t") };
        let g = Arc::new(g.map_err(|e| e.to_string())?);
        let u = if p == 1 { g.identity() } else { g.generator(0) };
        let a = alpha(&g, &u).unwrap();
        let sigma = GroupRingElement::from_terms(g.clone(), (0..p as i64).map(|i| (g.pow(&u, i), ratio(1, 1))));
        let one = GroupRingElement::one(g.clone());
        let lhs = one.sub(&GroupRingElement::monomial(g.clone(), u.clone(), ratio(1, 1))).unwrap().mul(&a).unwrap();
        let rhs = sigma.scale(&ratio(1, p as i64)).sub(&one).unwrap();
        ensure_eq!(lhs, rhs, format!("(1-u) alpha, p={p}"));
        ensure!(sigma.mul(&a).unwrap().is_zero(), "sigma alpha != 0 at p={p}");
    }
    let deltas = [
        trefoil(),
        LaurentPoly1::from_terms([(-1, -1), (0, 3), (1, -1)]),
        LaurentPoly1::from_terms([(-2, 1), (-1, -1), (0, 1), (1, -1), (2, 1)]),
    ];
    for delta in &deltas {
        let beta = beta_expansion(delta).unwrap();
        for p in 2..=12 {
            let data = knot_surgery_torsion(p, delta).map_err(|e| e.to_string())?;
            let u = data.group().generator(0);
            ensure_eq!(
                correction_term(&data, &u).unwrap(),
                beta.evaluate(data.group(), &u),
                format!("a_e = beta(u), delta={delta}, p={p}")
            );
        }
    }
    Ok(())
}

fn criterion_6() -> Check {
    for p in 2..=12i64 {
        for qq in (1..p).filter(|&qq| num_integer::gcd(p, qq) == 1) {
            let l = lens_torsion(p, qq).map_err(|e| e.to_string())?;
            let classes = l.group().enumerate_torsion(1000).unwrap();
            for u in &classes {
                let base = class_report(&l, u).unwrap();
                let duals = l.linking_form().dual_elements(u).unwrap();
                for v in &duals {
                    ensure_eq!(
                        correction_term_with(&l, u, v).unwrap(),
                        base.correction,
                        format!("L({p},{qq}) u={u:?} v={v:?}")
                    );
                }
                for h in &classes {
                    let moved = l.translate(h);
                    let r = class_report(&moved, u).unwrap();
                    ensure_eq!(r.lower_bound, base.lower_bound, format!("L({p},{qq}) bound, h={h:?}"));
                    ensure_eq!(r.parity(), base.parity(), format!("L({p},{qq}) parity, h={h:?}"));
                }
            }
        }
    }
    Ok(())
}

/// Shortest arc covering points of (1/m)Z/Z, by trying every start point.
fn all_arcs(points: &[i64], m: i64) -> Rational {
    let best = points
        .iter()
        .map(|a| points.iter().map(|p| (p - a).rem_euclid(m)).max().unwrap())
        .min()
        .unwrap_or(0);
    ratio(best, m)
}

fn criterion_7() -> Check {
    const M: i64 = 60;
    const SAMPLES: usize = 100_000;
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed60);
    let residues = |pts: &[i64]| pts.iter().map(|&n| q(n, M)).collect::<Vec<_>>();
    for i in 0..SAMPLES {
        let size = rng.gen_range(1..=8);
        let pts: Vec<i64> = (0..size).map(|_| rng.gen_range(0..M)).collect();
        let span = circular_span(&residues(&pts));
        ensure_eq!(span, all_arcs(&pts, M), format!("sample {i}: {pts:?}"));
        let shift = rng.gen_range(0..M);
        let rotated: Vec<i64> = pts.iter().map(|n| n + shift).collect();
        let reflected: Vec<i64> = pts.iter().map(|n| -n).collect();
        ensure_eq!(circular_span(&residues(&rotated)), span, format!("rotation of {pts:?}"));
        ensure_eq!(circular_span(&residues(&reflected)), span, format!("reflection of {pts:?}"));
    }
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(60), "took {elapsed:?}");
    Ok(())
}

fn criterion_8() -> Check {
    let link = LinkSurgery::new(10).map_err(|e| e.to_string())?;
    let f = LaurentPoly2::one();
    for (k, want) in [(0, ratio(0, 1)), (1, ratio(1, 10)), (2, ratio(4, 10)), (3, ratio(1, 10))] {
        ensure_eq!(link.lower_bound(&f, &link.class(k)).unwrap(), want, format!("k={k}"));
    }
    let nine = ratio(9, 10);
    ensure_eq!(ratio(1, 1) - &nine, ratio(1, 10), "min(k^2/10, 1 - k^2/10) at k=3");
    Ok(())
}

/// Dense mod-`p` convolution with an explicit double loop.
fn convolve(p: usize, a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); p];
    for i in 0..p {
        for j in 0..p {
            out[(i + j) % p] += &a[i] * &b[j];
        }
    }
    out
}

fn dense_alpha(p: usize, step: usize) -> Vec<Rational> {
    // alpha of t^step, whose order is m = p / gcd(p, step)
    let m = p / num_integer::gcd(p, step);
    let mut out = vec![Rational::zero(); p];
    for i in 0..m {
        out[(i * step) % p] += ratio(i as i64 + 1, m as i64) - ratio(m as i64 + 1, 2 * m as i64);
    }
    out
}

fn monomial(p: usize, e: usize, c: Rational) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); p];
    out[e % p] = c;
    out
}

fn criterion_9() -> Check {
    let p = 4usize;
    let tau = convolve(p, &dense_alpha(p, 1), &dense_alpha(p, 1));
    let one_minus = |e: usize| {
        let mut x = monomial(p, 0, ratio(1, 1));
        x[e % p] -= ratio(1, 1);
        x
    };
    let mod1 = QmodZ::new;
    let link = |a: usize, b: usize| mod1(-convolve(p, &convolve(p, &one_minus(a), &one_minus(b)), &tau)[0].clone());
    let u = 2usize;
    let n = 2i64;
    let q_u = mod1(convolve(p, &one_minus(u), &tau)[0].clone());
    // q = K/2n + 1/2  =>  K = 2n (q - 1/2) mod 2n
    let k_val = (QmodZ::new(q_u.value() - ratio(1, 2)).value() * ratio(2 * n, 1)).to_integer().to_i64().unwrap();
    ensure_eq!(k_val, 2, "K oracle");
    let g: Vec<usize> = (0..p).filter(|&h| link(u, h).is_zero()).collect();
    ensure_eq!(g, vec![0, 2], "G oracle");
    let v = (0..p).find(|&h| link(u, h) == q(1, n)).unwrap();
    let mut sigma_g = vec![Rational::zero(); p];
    for &h in &g {
        sigma_g[h] += ratio(1, 1);
    }
    let mut v_plus_one_half = monomial(p, 0, ratio(1, 2));
    v_plus_one_half[v] += ratio(1, 2);
    let shift = monomial(p, v * (k_val as usize / 2), ratio(1, 1));
    let second = convolve(p, &convolve(p, &convolve(p, &shift, &v_plus_one_half), &dense_alpha(p, v)), &sigma_g);
    let first = convolve(p, &monomial(p, u, ratio(1, 1)), &tau);
    let expected: Vec<Rational> = (0..p).map(|i| &first[i] - &tau[i] - &second[i]).collect();

    let l = lens_torsion(4, 1).map_err(|e| e.to_string())?;
    let tu = t(&l, 2);
    let kr = k_residue(&l, &tu).unwrap();
    ensure_eq!(kr.to_string(), "2 mod 4", "K(e,t^2)");
    ensure_eq!(kr.parity(), Parity::Even, "branch");
    let a = correction_term(&l, &tu).unwrap();
    let dense_a: Vec<Rational> = (0..p as i64).map(|i| a.coefficient(&t(&l, i))).collect();
    ensure_eq!(dense_a, expected, "a_e vs dense oracle");
    ensure_eq!(a, elem(l.group(), &[(3, 1), (1, -1)], 2), "a_e = (t^3 - t)/2");
    ensure_eq!(theta_lower_bound(&l, &tu).unwrap(), Rational::zero(), "bound");
    Ok(())
}

fn golden(name: &str) -> String {
    std::fs::read_to_string(format!("{}/tests/golden/{name}", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

fn criterion_10() -> Check {
    for (p, name) in [("5", "lens_5_1"), ("6", "lens_6_1")] {
        let mut json_rows = None;
        for fmt in ["text", "json", "csv"] {
            let args = ["torspan", "lens", p, "1", "--all", "--format", fmt];
            let a = run(args);
            let b = run(args);
            ensure_eq!(a.code, 0, format!("{name}.{fmt} exit"));
            ensure_eq!(a.stdout, b.stdout, format!("{name}.{fmt} stable"));
            ensure_eq!(a.stdout, golden(&format!("{name}.{fmt}")), format!("{name}.{fmt} golden"));
            if fmt == "json" {
                let doc: OutputDocument = serde_json::from_str(&a.stdout).map_err(|e| e.to_string())?;
                json_rows = Some(doc.classes.iter().map(|c| (c.class.clone(), c.lower_bound.clone())).collect::<Vec<_>>());
            }
        }
        let json_rows = json_rows.unwrap();
        let csv_out = run(["torspan", "lens", p, "1", "--format", "csv"]).stdout;
        let mut reader = csv::Reader::from_reader(csv_out.as_bytes());
        let csv_rows: Vec<(String, String)> =
            reader.records().map(|r| r.unwrap()).map(|r| (r[1].to_string(), r[8].to_string())).collect();
        ensure_eq!(csv_rows, json_rows, format!("{name} csv vs json"));
        let text_out = run(["torspan", "lens", p, "1"]).stdout;
        let field = |key: &str| -> Vec<String> {
            text_out
                .lines()
                .filter(|l| l.starts_with(key) && l[..12].trim_end() == key)
                .map(|l| l[12..].to_string())
                .collect()
        };
        let text_rows: Vec<(String, String)> = field("class").into_iter().zip(field("lower")).collect();
        ensure_eq!(text_rows, json_rows, format!("{name} text vs json"));
    }
    for bad in [
        vec!["torspan", "lens", "4", "2"],
        vec!["torspan", "lens", "5"],
        vec!["torspan", "knot", "5", "--alexander", "0:2"],
        vec!["torspan", "link", "10", "--f", "garbage"],
        vec!["torspan", "span", "1/0"],
    ] {
        let out = run(bad.clone());
        ensure_eq!(out.code, 1, format!("{bad:?} exit"));
        ensure!(!out.stderr.trim().is_empty(), "{bad:?} gave no diagnostic");
    }
    Ok(())
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("L(5,1) golden run", criterion_1),
        ("L(6,1) golden run", criterion_2),
        ("zero cases L(2,1), L(3,1), L(5,2)", criterion_3),
        ("trefoil surgery equality, p = 2..12", criterion_4),
        ("group ring identities and a_e = beta(u)", criterion_5),
        ("Euler structure and dual element invariance", criterion_6),
        ("circular span vs all-arcs oracle", criterion_7),
        ("link surgery bounds, p = 10", criterion_8),
        ("even branch on L(4,1)", criterion_9),
        ("CLI golden outputs and exit codes", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let ms = start.elapsed().as_millis();
        match result {
            Ok(()) => println!("PASS criterion {}: {name} ({ms} ms)", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {}: {name}: {why}", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
