//! Acceptance suite: every criterion runs in one test and reports a single
//! PASS/FAIL line. Run with `cargo test -p obembed-core --test acceptance -- --nocapture`.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::Zero;
use obembed::embedder::{build_openbook_embedding, build_s5_plan, validate_certificate, DiskBundleModel};
use obembed::intlinalg::{smith_normal_form, IntMatrix};
use obembed::mcg::relation_report;
use obembed::surface::{lickorish_system, Surface};
use obembed::{
    identify_known, reduce_to_one_boundary, stabilize_positive, word_action, AbelianGroup, AbstractOpenBook,
    Attachment, TwistLetter, TwistWord,
};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Option<Duration>, Box<dyn FnOnce(&mut StdRng) -> Outcome + 'a>);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn random_word(rng: &mut StdRng, s: Surface, max_len: usize) -> TwistWord {
    let (cfg, _) = lickorish_system(&s).unwrap();
    if cfg.curves.is_empty() {
        return TwistWord::empty();
    }
    let len = rng.gen_range(0..=max_len);
    let letters = (0..len)
        .map(|_| {
            let c = &cfg.curves[rng.gen_range(0..cfg.curves.len())];
            let e = loop {
                let e = rng.gen_range(-3i64..=3);
                if e != 0 {
                    break e;
                }
            };
            TwistLetter::new(c.name.clone(), e)
        })
        .collect();
    TwistWord::new(letters)
}

fn random_surface(rng: &mut StdRng) -> Surface {
    Surface::new(rng.gen_range(0..=3), rng.gen_range(1..=3))
}

fn random_openbook(rng: &mut StdRng) -> AbstractOpenBook {
    let s = random_surface(rng);
    let w = random_word(rng, s, 10);
    AbstractOpenBook::new(s, w).unwrap()
}

fn cyclic(k: i64) -> AbelianGroup {
    AbelianGroup::from_cyclic_factors(0, &[BigInt::from(k)])
}

fn lens_family() -> Outcome {
    for k in 0..=20i64 {
        let w = if k == 0 { TwistWord::empty() } else { TwistWord::letter("t1", k) };
        let h = AbstractOpenBook::new(Surface::annulus(), w).unwrap().closed_h1();
        let expected = match k {
            0 => AbelianGroup::free(1),
            1 => AbelianGroup::trivial(),
            _ => cyclic(k),
        };
        ensure(h == expected, || format!("k = {k}: got {h}, expected {expected}"))?;
    }
    Ok("k = 0..20 exact".into())
}

fn trivial_openbook() -> Outcome {
    let ob = AbstractOpenBook::new(Surface::disk(), TwistWord::empty()).unwrap();
    let h = ob.closed_h1();
    ensure(h.is_trivial(), || format!("H1 = {h}"))?;
    let name = identify_known(&ob);
    ensure(name.as_deref() == Some("S3"), || format!("identified as {name:?}"))?;
    Ok("H1 = 0, identified S3".into())
}

fn connected_sums() -> Outcome {
    for m in 1..=5 {
        let h = AbstractOpenBook::new(Surface::new(0, m + 1), TwistWord::empty()).unwrap().closed_h1();
        ensure(h == AbelianGroup::free(m), || format!("m = {m}: got {h}"))?;
    }
    Ok("Z^m for m = 1..5".into())
}

fn trefoil() -> Outcome {
    // 2×2 oracle: T_a = [[1,-1],[0,1]], T_b = [[1,0],[1,1]], Φ = T_a T_b.
    let oracle = IntMatrix::from_rows(&[vec![0, -1], vec![1, 1]]);
    let ob = AbstractOpenBook::new(Surface::new(1, 1), "t(a1) t(b1)".parse().unwrap()).unwrap();
    let phi = word_action(&ob.monodromy, ob.curves()).unwrap();
    ensure(phi == oracle, || format!("Φ = {phi:?}"))?;
    let h = ob.closed_h1();
    ensure(h.is_trivial(), || format!("H1 = {h}"))?;
    let sixth: TwistWord = "t(a1) t(b1) t(a1) t(b1) t(a1) t(b1) t(a1) t(b1) t(a1) t(b1) t(a1) t(b1)"
        .parse()
        .unwrap();
    let p = word_action(&sixth, ob.curves()).unwrap();
    ensure(p.is_identity(), || "(T_a T_b)^6 is not the identity".into())?;
    Ok("H1 = 0, Φ matches oracle, Φ^6 = I".into())
}

fn relation_suite() -> Outcome {
    let mut checks = 0;
    for g in 0..=4 {
        for n in 1..=4 {
            let (cfg, _) = lickorish_system(&Surface::new(g, n)).unwrap();
            let report = relation_report(&cfg);
            if let Some(f) = report.failures().next() {
                return Err(format!("Σ_{{{g},{n}}}: {f}"));
            }
            checks += report.checks.len();
        }
    }
    Ok(format!("{checks} identities"))
}

fn stabilization_invariance(rng: &mut StdRng) -> Outcome {
    for i in 0..100 {
        let ob = random_openbook(rng);
        let before = ob.closed_h1();
        let n = ob.page().boundary_count;
        let att = if n >= 2 && rng.gen_bool(0.5) {
            let j = rng.gen_range(1..=n);
            let k = loop {
                let k = rng.gen_range(1..=n);
                if k != j {
                    break k;
                }
            };
            Attachment::JoinBoundaries(j, k)
        } else {
            Attachment::SameBoundary(rng.gen_range(1..=n))
        };
        let st = stabilize_positive(&ob, att).map_err(|e| format!("case {i}: {e}"))?;
        let after = st.closed_h1();
        ensure(after == before, || format!("case {i} {ob} {att:?}: {before} -> {after}"))?;
        let red = reduce_to_one_boundary(&ob).map_err(|e| format!("case {i}: {e}"))?;
        ensure(red.page().boundary_count == 1 && red.closed_h1() == before, || {
            format!("case {i} {ob}: reduce changed H1")
        })?;
    }
    Ok("100 open books".into())
}

fn conjugation_invariance(rng: &mut StdRng) -> Outcome {
    for i in 0..100 {
        let ob = random_openbook(rng);
        let psi = random_word(rng, ob.page(), 6);
        let conj = AbstractOpenBook::new(ob.page(), ob.monodromy.conjugate_by(&psi)).unwrap();
        ensure(conj.closed_h1() == ob.closed_h1(), || format!("case {i}: {ob} conjugated by {psi}"))?;
    }
    Ok("100 pairs".into())
}

fn sweep(rng: &mut StdRng) -> Vec<AbstractOpenBook> {
    let mut out = Vec::new();
    for g in 0..=3 {
        for n in 1..=3 {
            for _ in 0..5 {
                let s = Surface::new(g, n);
                out.push(AbstractOpenBook::new(s, random_word(rng, s, 10)).unwrap());
            }
        }
    }
    out
}

fn embedding_certificates(inputs: &[AbstractOpenBook]) -> Outcome {
    let mut count = 0;
    for ob in inputs {
        for m in -2..=2i64 {
            let w = build_openbook_embedding(ob, m).map_err(|e| format!("{ob}, m = {m}: {e}"))?;
            let expected = if m % 2 == 0 { "S3xS2" } else { "twisted" };
            ensure(w.scene.target == expected, || format!("{ob}, m = {m}: target {}", w.scene.target))?;
            let report = validate_certificate(&w.into());
            ensure(report.is_clean(), || format!("{ob}, m = {m}: {:?}", report.violations))?;
            count += 1;
        }
    }
    Ok(format!("{count} witnesses validator-clean"))
}

fn s5_plans(inputs: &[AbstractOpenBook]) -> Outcome {
    for ob in inputs {
        let p = build_s5_plan(ob).map_err(|e| format!("{ob}: {e}"))?;
        let expected = p.scene.surface_pieces.len() * DiskBundleModel::ZERO_SECTION.len();
        ensure(p.checks.avoidance.len() == expected, || format!("{ob}: checklist has {} entries", p.checks.avoidance.len()))?;
        ensure(p.checks.avoidance.iter().all(|e| e.disjoint && e.reason.is_some()), || {
            format!("{ob}: unresolved avoidance entry")
        })?;
        ensure(p.input.normalized.page.boundary_count == 1, || format!("{ob}: not normalized"))?;
        let h = ob.closed_h1();
        ensure(p.checks.h1_before == h && p.checks.h1_after == h, || format!("{ob}: H1 record differs from {h}"))?;
        let report = validate_certificate(&p.into());
        ensure(report.is_clean(), || format!("{ob}: {:?}", report.violations))?;
    }
    Ok(format!("{} plans validator-clean", inputs.len()))
}

fn snf_correctness(rng: &mut StdRng) -> Outcome {
    for i in 0..500 {
        let (r, c) = (rng.gen_range(1..=8), rng.gen_range(1..=8));
        let rows: Vec<Vec<i64>> = (0..r).map(|_| (0..c).map(|_| rng.gen_range(-20..=20)).collect()).collect();
        let m = IntMatrix::from_rows(&rows);
        let s = smith_normal_form(&m);
        ensure(&(&s.u * &m) * &s.v == s.d, || format!("case {i}: U·M·V != D"))?;
        ensure(s.u.is_unimodular() && s.v.is_unimodular(), || format!("case {i}: not unimodular"))?;
        ensure(s.d.is_diagonal(), || format!("case {i}: D not diagonal"))?;
        let diag = s.d.diagonal();
        for w in diag.windows(2) {
            let ok = w[1].is_zero() || (!w[0].is_zero() && (&w[1] % &w[0]).is_zero());
            ensure(ok, || format!("case {i}: {} does not divide {}", w[0], w[1]))?;
        }
        ensure(diag.iter().all(|d| *d >= BigInt::zero()), || format!("case {i}: negative invariant factor"))?;
    }
    Ok("500 matrices up to 8x8".into())
}

#[test]
fn acceptance() {
    let mut rng = StdRng::seed_from_u64(0x0b0b_5eed);
    let sweep_inputs = sweep(&mut rng);
    let mut criteria: Vec<Criterion> = vec![
        ("lens-space family", Some(Duration::from_secs(1)), Box::new(|_| lens_family())),
        ("trivial open book", None, Box::new(|_| trivial_openbook())),
        ("connected sums", None, Box::new(|_| connected_sums())),
        ("fibered trefoil page", None, Box::new(|_| trefoil())),
        ("relation suite", Some(Duration::from_secs(5)), Box::new(|_| relation_suite())),
        ("stabilization invariance", Some(Duration::from_secs(10)), Box::new(stabilization_invariance)),
        ("conjugation invariance", None, Box::new(conjugation_invariance)),
        (
            "embedding certificates",
            Some(Duration::from_secs(30)),
            Box::new(|_| embedding_certificates(&sweep_inputs)),
        ),
        ("S5 plans", Some(Duration::from_secs(30)), Box::new(|_| s5_plans(&sweep_inputs))),
        ("SNF correctness", None, Box::new(snf_correctness)),
    ];

    let mut failed = Vec::new();
    for (i, (name, limit, run)) in criteria.drain(..).enumerate() {
        let start = Instant::now();
        let outcome = run(&mut rng);
        let elapsed = start.elapsed();
        let outcome = match (outcome, limit) {
            (Ok(_), Some(l)) if elapsed > l => Err(format!("took {elapsed:?}, limit {l:?}")),
            (o, _) => o,
        };
        match &outcome {
            Ok(detail) => println!("PASS [{:>2}] {name}: {detail} ({elapsed:.2?})", i + 1),
            Err(why) => {
                println!("FAIL [{:>2}] {name}: {why} ({elapsed:.2?})", i + 1);
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
