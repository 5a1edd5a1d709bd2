//! Acceptance criteria 1-10. Prints one line per criterion with its
//! tolerance, runtime and limit, then fails if any criterion failed.

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::{Duration, Instant};

use closefields::gf::CoeffField;
use closefields::hecke::{sigma_orbit_sum, HeckeAlgebra, HeckeElement};
use closefields::kazhdan::{
    check_galois_equivariance, check_kaz_hom, check_lemma_conv, check_main_diagram, random_label, CaseKind, Diagram,
    PairMode, Report, RunConfig,
};
use closefields::lattice::{
    cartan_by_minors, depth, enumerate_labels, smith_cartan, CosetLabel, DoubleKey, GroupMatrix, Side, Window,
    DEFAULT_BUDGET,
};
use closefields::ring::{RingFamily, RingSpec};
use closefields::tate::{
    linkage_instances, norm_operator, tate_cohomology, CyclicModule, Mat, DEFAULT_DIM_BOUND,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

type Verdict = Result<String, String>;

struct Line {
    id: u8,
    title: &'static str,
    verdict: Verdict,
    elapsed: Duration,
    limit: Duration,
}

impl Line {
    fn pass(&self) -> bool {
        self.verdict.is_ok() && self.elapsed <= self.limit
    }
}

fn criterion(id: u8, title: &'static str, limit_secs: u64, f: impl FnOnce() -> Verdict) -> Line {
    let start = Instant::now();
    let verdict = f();
    let line = Line { id, title, verdict, elapsed: start.elapsed(), limit: Duration::from_secs(limit_secs) };
    println!(
        "criterion {:>2} {} | {} | tolerance: exact | {:.2} s (limit {} s) | {}",
        line.id,
        if line.pass() { "PASS" } else { "FAIL" },
        line.title,
        line.elapsed.as_secs_f64(),
        limit_secs,
        match &line.verdict {
            Ok(s) => s.clone(),
            Err(s) => format!("failed: {s}"),
        }
    );
    line
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|x| x.to_string())
}

fn report_pass(r: &Report) -> Result<usize, String> {
    let bad: Vec<_> = r.failures().map(|s| s.input.to_string()).collect();
    ensure(bad.is_empty(), || format!("{} failing samples in {}, first {}", bad.len(), r.command, bad[0]))?;
    Ok(r.samples.len())
}

fn cartan_oracle() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut checked = 0;
    for p in [2u32, 3] {
        for spec in [RingSpec::mixed(p, 6), RingSpec::equal(p, 6)] {
            let fam = e(RingFamily::new(&spec))?;
            for n in [2usize, 3] {
                let mut done = 0;
                while done < 70 {
                    let prec = rng.gen_range(1..=6);
                    let ring = e(fam.at(prec))?;
                    let data: Vec<u32> = (0..n * n).map(|_| rng.gen_range(0..ring.size())).collect();
                    let g = GroupMatrix::integral(ring.clone(), n, data);
                    // the invariant is only determined when det is nonzero at this precision
                    let Ok(oracle) = cartan_by_minors(&g) else {
                        // a minor vanishing mod p^prec leaves the oracle without a value
                        continue;
                    };
                    if oracle.iter().sum::<i64>() >= prec as i64 {
                        continue;
                    }
                    let c = e(smith_cartan(&g))?;
                    ensure(c.mu == oracle, || format!("mu {:?} against minors {:?}", c.mu, oracle))?;
                    let back = c.x.mul(&GroupMatrix::diag_pi(ring.clone(), &c.mu)).mul(&e(c.y.inverse_integral())?);
                    // compare modulo pi^prec, the absolute precision of g
                    let lift = back.shift();
                    let agrees = lift >= 0
                        && back.data().iter().zip(g.data()).all(|(&b, &a)| {
                            ring.reduce(ring.mul(ring.pi_pow(lift as u32), b), prec as i64) == a
                        });
                    ensure(agrees, || format!("x varpi_mu y^-1 differs from {:?} at precision {prec}", g.data()))?;
                    done += 1;
                    checked += 1;
                }
            }
        }
    }
    ensure(checked >= 500, || format!("only {checked} matrices"))?;
    Ok(format!("{checked} random 2x2 and 3x3 matrices, p in {{2,3}}, precision <= 6"))
}

fn lemma_conv() -> Verdict {
    let mut total = 0;
    for (p, l) in [(2, 3), (3, 2)] {
        let c = RunConfig::new(p, l, 1, CaseKind::Unramified);
        total += report_pass(&e(check_lemma_conv(&c))?)?;
    }
    Ok(format!("{total} identities, spread <= 2, 20 level elements, p in {{2,3}}, m = 1"))
}

/// `(t_a * t_b)(z) = #{x K in K a K : x^{-1} z in K b K}`.
fn double_sum(side: &Side, a: &CosetLabel, b: &CosetLabel, window: &Window) -> Result<BTreeMap<DoubleKey, u64>, String> {
    let prec = side.level() + 2 * depth(&a.mu) + (window.max - window.min) as u32 + 1;
    let reps = e(side.left_reps(a, prec))?;
    let target = e(side.double_key(b))?;
    let mut out = BTreeMap::new();
    for z in e(enumerate_labels(side, &window.cochars(side.n()), DEFAULT_BUDGET))? {
        let zg = e(side.label_element(&z, prec))?;
        let mut count = 0;
        for x in &reps {
            if e(side.double_key_of(&e(x.inverse())?.mul(&zg)))? == target {
                count += 1;
            }
        }
        if count > 0 {
            out.insert(e(side.double_key(&z))?, count);
        }
    }
    Ok(out)
}

fn hecke_axioms() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut units, mut triples, mut pairs) = (0, 0, 0);
    for (p, l) in [(2u32, 3u32), (3, 2)] {
        let fam = Arc::new(e(RingFamily::new(&RingSpec::mixed(p, 1)))?);
        let side = Arc::new(e(Side::new("F", fam, 1, 2))?);
        let alg = e(HeckeAlgebra::new(side.clone(), Arc::new(e(CoeffField::prime(l))?)))?;
        let window = Window::spread(2);
        let labels = e(enumerate_labels(&side, &window.cochars(2), DEFAULT_BUDGET))?;
        let one = e(HeckeElement::unit(&alg))?;
        for lab in &labels {
            let t = e(HeckeElement::basis(&alg, lab))?;
            ensure(e(one.convolve(&t))? == t && e(t.convolve(&one))? == t, || format!("t_1 is not neutral on {lab:?}"))?;
            units += 1;
        }
        let sample: Vec<[CosetLabel; 3]> = (0..50)
            .map(|_| [0, 1, 2].map(|_| labels[rng.gen_range(0..labels.len())].clone()))
            .collect();
        for [a, b, c] in &sample {
            let (a, b, c) = (e(HeckeElement::basis(&alg, a))?, e(HeckeElement::basis(&alg, b))?, e(HeckeElement::basis(&alg, c))?);
            let left = e(e(a.convolve(&b))?.convolve(&c))?;
            let right = e(a.convolve(&e(b.convolve(&c))?))?;
            ensure(left == right, || "associativity fails".into())?;
            triples += 1;
        }
        let small = Window::spread(1).cochars(2);
        for _ in 0..25 {
            let a = random_label(&side, &small, &mut rng);
            let b = random_label(&side, &small, &mut rng);
            let fast: BTreeMap<DoubleKey, u64> =
                e(alg.basis_product(&e(side.double_key(&a))?, &e(side.double_key(&b))?))?.iter().cloned().collect();
            ensure(fast == double_sum(&side, &a, &b, &window)?, || format!("structure constants differ for {a:?} * {b:?}"))?;
            pairs += 1;
        }
    }
    ensure(triples >= 100 && pairs >= 50, || "too few samples".into())?;
    Ok(format!("unit on {units} basis elements, {triples} associativity triples, {pairs} pairs against the double sum"))
}

/// `Kaz(t_a * t_b) = Kaz(t_a) * Kaz(t_b)` for each pair of labels.
fn kaz_pairs(d: &Diagram, pairs: &[(CosetLabel, CosetLabel)]) -> Result<usize, String> {
    let bad = pairs
        .par_iter()
        .map(|(a, b)| -> Result<bool, String> {
            let ta = e(HeckeElement::basis(&d.f, a))?;
            let tb = e(HeckeElement::basis(&d.f, b))?;
            let lhs = e(d.kaz_f.apply(&e(ta.convolve(&tb))?))?;
            let rhs = e(e(d.kaz_f.apply(&ta))?.convolve(&e(d.kaz_f.apply(&tb))?))?;
            Ok(lhs != rhs)
        })
        .collect::<Result<Vec<bool>, String>>()?
        .into_iter()
        .filter(|&x| x)
        .count();
    ensure(bad == 0, || format!("{bad} of {} pairs fail", pairs.len()))?;
    Ok(pairs.len())
}

fn kaz_hom() -> Verdict {
    let mut parts = Vec::new();
    for (p, l, m) in [(2u32, 3u32, 1u32), (3, 2, 1), (2, 3, 2), (3, 2, 2)] {
        let c = RunConfig::new(p, l, m, CaseKind::Unramified);
        let d = e(c.diagram())?;
        let mode = if c.pair_mode == PairMode::MixedEqual { "mixed-equal" } else { "equal-equal" };
        if m == 2 {
            let lam = &d.pair.base.lambda;
            let nontrivial = lam.domain().elements().any(|x| lam.apply(x) != x);
            ensure(nontrivial || p == 2, || "Λ is the identity".into())?;
        }
        let window = Window::spread(2).cochars(2);
        let labels = e(enumerate_labels(d.f.side(), &window, DEFAULT_BUDGET))?;
        let normalized: Vec<CosetLabel> = labels.iter().filter(|x| x.mu[0] == 0).cloned().collect();
        let (pairs, how) = if labels.len() * labels.len() <= 4096 {
            (labels.iter().flat_map(|a| labels.iter().map(move |b| (a.clone(), b.clone()))).collect::<Vec<_>>(), "all pairs")
        } else if normalized.len() * normalized.len() <= 200_000 {
            let v = normalized.iter().flat_map(|a| normalized.iter().map(move |b| (a.clone(), b.clone()))).collect();
            (v, "all pairs up to the centre")
        } else {
            // t_{x a y} = t_x t_a t_y for x, y in GL_n(o/p^m), so pairs
            // (varpi_lambda, z varpi_mu) over every z reach every product
            let mus: Vec<&Vec<i64>> = window.iter().filter(|mu| mu[0] == 0).collect();
            let mut v = Vec::new();
            for lam in &mus {
                for mu in &mus {
                    for z in d.f.side().level_group() {
                        v.push((CosetLabel::diagonal(lam), CosetLabel::translate(mu, z)));
                    }
                }
            }
            (v, "(varpi_lambda, z varpi_mu) over all z")
        };
        let n = kaz_pairs(&d, &pairs)?;
        parts.push(format!("p={p} m={m} {mode}: {n} ({how})"));
    }
    Ok(parts.join("; "))
}

fn galois() -> Verdict {
    let mut parts = Vec::new();
    for (p, l, case) in [(2, 3, CaseKind::Unramified), (3, 2, CaseKind::Ramified)] {
        let mut c = RunConfig::new(p, l, 1, case);
        c.samples = 50;
        parts.push(format!("{case:?}: {}", report_pass(&e(check_galois_equivariance(&c))?)?));
    }
    Ok(format!("samples (structured + 50 random) {}", parts.join(", ")))
}

fn main_diagram() -> Verdict {
    let mut parts = Vec::new();
    for (p, l, case, window) in [(2, 3, CaseKind::Unramified, 1), (3, 2, CaseKind::Ramified, 2)] {
        let mut c = RunConfig::new(p, l, 1, case);
        c.window = window;
        c.samples = 25;
        parts.push(format!("{case:?} spread {window}: {}", report_pass(&e(check_main_diagram(&c))?)?));
    }
    Ok(format!("orbit sums {}", parts.join(", ")))
}

fn brauer_mult() -> Verdict {
    let mut parts = Vec::new();
    for (p, l, case) in [(2, 3, CaseKind::Unramified), (3, 2, CaseKind::Ramified)] {
        let d = e(RunConfig::new(p, l, 1, case).diagram())?;
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let f_window = Window::spread(1).cochars(2);
        let e_window = Window::spread(d.pair.e).cochars(2);
        let mut elems = Vec::new();
        for i in 0..12 {
            let h = if i % 2 == 0 {
                HeckeElement::from_key(&d.e, e(d.br.embed_key(&random_label(d.f.side(), &f_window, &mut rng)))?, 1)
            } else {
                e(sigma_orbit_sum(&d.pair.sigma, &d.e, &random_label(d.e.side(), &e_window, &mut rng)))?
            };
            elems.push(h);
        }
        let (mut count, mut nonzero) = (0, 0);
        for a in &elems {
            for b in &elems {
                let lhs = e(d.br.restrict(&e(a.convolve(b))?, None))?;
                let rhs = e(e(d.br.restrict(a, None))?.convolve(&e(d.br.restrict(b, None))?))?;
                ensure(lhs == rhs, || "Br(f * g) differs from Br(f) * Br(g)".into())?;
                count += 1;
                nonzero += usize::from(!lhs.is_zero());
            }
        }
        ensure(nonzero >= 25, || format!("only {nonzero} pairs with a nonzero image"))?;
        parts.push(format!("{case:?}: {count} pairs ({nonzero} nonzero)"));
    }
    Ok(parts.join(", "))
}

/// Conjugate of a sum of unipotent Jordan blocks of the given sizes (each
/// at most `l`, so `T^l = 1`).
fn jordan_module(f: &Arc<CoeffField>, sizes: &[usize], rng: &mut ChaCha8Rng) -> Result<CyclicModule, String> {
    let d: usize = sizes.iter().sum();
    let mut t = Mat::identity(d);
    let mut at = 0;
    for &s in sizes {
        for i in at..at + s - 1 {
            t.set(i, i + 1, 1);
        }
        at += s;
    }
    let p = loop {
        let m = Mat { rows: d, cols: d, data: (0..d * d).map(|_| rng.gen_range(0..f.size())).collect() };
        if m.rank(f) == d {
            break m;
        }
    };
    let t = p.mul(f, &t).mul(f, &e(p.inverse(f))?);
    e(CyclicModule::new(f.clone(), t, None))
}

fn tate_dims(m: &CyclicModule) -> Result<(usize, usize), String> {
    Ok((e(tate_cohomology(m, 0))?.dim, e(tate_cohomology(m, 1))?.dim))
}

fn tate_suite() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut modules = 0;
    for l in [2u32, 3] {
        let f = Arc::new(e(CoeffField::prime(l))?);
        let trivial = e(CyclicModule::new(f.clone(), Mat::identity(1), None))?;
        ensure(tate_dims(&trivial)? == (1, 1), || "trivial module".into())?;
        let regular = jordan_module(&f, &[l as usize], &mut rng)?;
        ensure(tate_dims(&regular)? == (0, 0), || "regular module".into())?;
        let mut shift = Mat::zero(l as usize, l as usize);
        for i in 0..l as usize {
            shift.set((i + 1) % l as usize, i, 1);
        }
        ensure(tate_dims(&e(CyclicModule::new(f.clone(), shift, None))?)? == (0, 0), || "cyclic shift".into())?;
    }
    for (l, k) in [(2u32, 1u32), (3, 1), (2, 2), (3, 2)] {
        let f = Arc::new(e(CoeffField::new(l, k))?);
        for _ in 0..13 {
            let sizes = |rng: &mut ChaCha8Rng| -> Vec<usize> {
                (0..rng.gen_range(1..=3)).map(|_| rng.gen_range(1..=l as usize)).collect()
            };
            let (sa, sb) = (sizes(&mut rng), sizes(&mut rng));
            let (a, b) = (jordan_module(&f, &sa, &mut rng)?, jordan_module(&f, &sb, &mut rng)?);
            let sum = e(a.direct_sum(&b))?;
            let (da, db, ds) = (tate_dims(&a)?, tate_dims(&b)?, tate_dims(&sum)?);
            ensure(ds == (da.0 + db.0, da.1 + db.1), || "Tate dims are not additive".into())?;
            // blocks shorter than l contribute a line to each group
            let short = sa.iter().filter(|&&s| s < l as usize).count();
            ensure(da == (short, short), || format!("Jordan sizes {sa:?} give {da:?}"))?;
            for m in [&a, &b, &sum] {
                let d = m.dim;
                let one_minus_t = Mat::identity(d).sub(&f, &m.t);
                let n = norm_operator(m);
                for op in [&one_minus_t, &n] {
                    ensure(op.kernel(&f).rows + op.image(&f).rows == d, || "rank-nullity".into())?;
                }
                let tw = m.frobenius_twist();
                for i in 0..2 {
                    let plain = e(tate_cohomology(m, i))?;
                    let twisted = e(tate_cohomology(&tw, i))?;
                    ensure(twisted.basis == plain.basis.map(|x| f.inverse_frobenius(x)), || "twist does not commute".into())?;
                }
            }
            modules += 1;
        }
    }
    ensure(modules >= 50, || "too few modules".into())?;
    Ok(format!("trivial (1,1) and regular (0,0) for l in {{2,3}}; {modules} seeded direct sums; rank-nullity; twist"))
}

fn linkage_transport() -> Verdict {
    let mut parts = Vec::new();
    for (p, l, case, k) in [(2, 3, CaseKind::Unramified, 2), (3, 2, CaseKind::Ramified, 2)] {
        let mut c = RunConfig::new(p, l, 1, case);
        c.k = k;
        let d = e(c.diagram())?;
        let inst = e(linkage_instances(&d, 10, 5))?;
        let mut linked = 0;
        for (idx, x) in inst.iter().enumerate() {
            ensure(x.source.xi.dim <= 8 && x.source.rho.dim <= 8, || "instance too large".into())?;
            let a = e(x.source.check(DEFAULT_DIM_BOUND))?;
            let b = e(x.transported.check(DEFAULT_DIM_BOUND))?;
            ensure(a == b, || format!("instance {idx} changes verdict under transport"))?;
            linked += a.iter().filter(|v| v.linked).count();
        }
        parts.push(format!("{case:?} k={k}: {} instances, {linked} linked verdicts", inst.len()));
    }
    Ok(parts.join(", "))
}

fn determinism() -> Verdict {
    let render = |r: Report| serde_json::to_string(&r).unwrap();
    let runs: Vec<(&str, Box<dyn Fn() -> Result<String, String>>)> = vec![
        ("kaz-hom", Box::new(|| Ok(render(e(check_kaz_hom(&RunConfig::new(2, 3, 1, CaseKind::Unramified)))?)))),
        (
            "galois-equivariance",
            Box::new(|| Ok(render(e(check_galois_equivariance(&RunConfig::new(3, 2, 1, CaseKind::Ramified)))?))),
        ),
        (
            "main-diagram",
            Box::new(|| {
                let mut c = RunConfig::new(2, 3, 1, CaseKind::Unramified);
                c.window = 1;
                c.seed = 7;
                Ok(render(e(check_main_diagram(&c))?))
            }),
        ),
        ("lemma-conv", Box::new(|| Ok(render(e(check_lemma_conv(&RunConfig::new(2, 3, 1, CaseKind::Unramified)))?)))),
        (
            "linkage",
            Box::new(|| {
                let d = e(RunConfig::new(3, 2, 1, CaseKind::Ramified).diagram())?;
                let mut out = String::new();
                for x in e(linkage_instances(&d, 4, 11))? {
                    out += &serde_json::to_string(&x.source.to_json()).unwrap();
                    out += &serde_json::to_string(&e(x.source.check(DEFAULT_DIM_BOUND))?).unwrap();
                }
                Ok(out)
            }),
        ),
    ];
    for (name, run) in &runs {
        ensure(run()? == run()?, || format!("{name} report differs between runs"))?;
    }
    Ok(format!("{} suites re-run with identical bytes", runs.len()))
}

fn main() {
    let lines = vec![
        criterion(1, "Cartan decomposition against minor valuations", 10, cartan_oracle),
        criterion(2, "convolution identities for level translates", 60, lemma_conv),
        criterion(3, "Hecke algebra unit, associativity, double-sum oracle", 120, hecke_axioms),
        criterion(4, "Kazhdan transfer is multiplicative", 120, kaz_hom),
        criterion(5, "Kazhdan transfer is Galois equivariant", 120, galois),
        criterion(6, "Kaz o Br = Br' o Kaz on orbit sums", 600, main_diagram),
        criterion(7, "Brauer restriction is multiplicative", 120, brauer_mult),
        criterion(8, "Tate cohomology suite", 10, tate_suite),
        criterion(9, "linkage verdicts survive transport", 60, linkage_transport),
        criterion(10, "reports are byte-identical across runs", 600, determinism),
    ];
    let failed: Vec<u8> = lines.iter().filter(|l| !l.pass()).map(|l| l.id).collect();
    if !failed.is_empty() {
        eprintln!("failing criteria: {failed:?}");
        std::process::exit(1);
    }
    println!("all {} criteria pass", lines.len());
}
