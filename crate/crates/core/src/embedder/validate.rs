use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;
use serde_json::Value;

use super::build::{extension_branches, s5_surface_pieces};
use super::*;
use crate::surface::CurveKind;

/// One failed certificate invariant.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct Violation(pub String);

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub kind: String,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Re-checks a certificate through its serialized form.
pub fn validate_certificate(cert: &Certificate) -> ValidationReport {
    validate_json(&cert.to_value()).expect("builder kinds are known")
}

/// Checks every certificate invariant using nothing but `value`.
pub fn validate_json(value: &Value) -> Result<ValidationReport, ValidateError> {
    let kind = value
        .as_object()
        .and_then(|o| o.get("kind"))
        .and_then(Value::as_str)
        .ok_or(ValidateError::NotACertificate)?;
    if !Certificate::KINDS.contains(&kind) {
        return Err(ValidateError::UnknownKind(kind.to_string()));
    }
    let mut v = Sink::default();
    if value.get("version").and_then(Value::as_u64) != Some(CERTIFICATE_VERSION as u64) {
        v.push(format!("unsupported version {}", value.get("version").unwrap_or(&Value::Null)));
    } else {
        match serde_json::from_value::<Certificate>(value.clone()) {
            Err(e) => v.push(format!("malformed certificate: {e}")),
            Ok(Certificate::FlexibleEmbedding(c)) => check_flexible(&c, &mut v),
            Ok(Certificate::OpenbookEmbedding(c)) => check_witness(&c, &mut v),
            Ok(Certificate::AnnulusS5(c)) => check_annulus(&c, &mut v),
            Ok(Certificate::S5Plan(c)) => check_s5(&c, &mut v),
        }
    }
    Ok(ValidationReport {
        kind: kind.to_string(),
        violations: v.out,
    })
}

#[derive(Default)]
struct Sink {
    prefix: String,
    out: Vec<Violation>,
}

impl Sink {
    fn push(&mut self, msg: impl Into<String>) {
        self.out.push(Violation(format!("{}{}", self.prefix, msg.into())));
    }

    fn expect(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        if !ok {
            self.push(msg());
        }
    }

    fn nested(&mut self, prefix: &str, f: impl FnOnce(&mut Sink)) {
        let inner = format!("{}{prefix}: ", self.prefix);
        let saved = std::mem::replace(&mut self.prefix, inner);
        f(self);
        self.prefix = saved;
    }
}

fn names(prefix: &str, range: std::ops::RangeInclusive<usize>) -> Vec<String> {
    range.map(|i| format!("{prefix}{i}")).collect()
}

fn open_half(x: f64) -> bool {
    x > 0.0 && x < PAGE_LEVEL
}

fn check_bundle(b: &DiskBundleModel, m: i64, v: &mut Sink) {
    v.expect(b.framing == m, || format!("bundle framing {} differs from input framing {m}", b.framing));
    v.expect(b.total_space == total_space_label(b.framing), || {
        format!("total space `{}` inconsistent with framing {}", b.total_space, b.framing)
    });
    v.expect(b.regions == DiskBundleModel::REGIONS, || format!("scene regions {:?} incomplete", b.regions));
    v.expect(b.collar_levels == COLLAR_LEVELS, || format!("collar levels {:?}", b.collar_levels));

    let reference = DiskBundleModel::new(b.framing).zero_section;
    let found: BTreeSet<&str> = b.zero_section.iter().map(|z| z.piece.name.as_str()).collect();
    for name in DiskBundleModel::ZERO_SECTION {
        v.expect(found.contains(name), || format!("zero section lacks `{name}`"));
    }
    v.expect(b.zero_section.len() == found.len(), || "zero section repeats a piece".into());
    let by_name: BTreeMap<&str, &ZeroSectionPiece> =
        b.zero_section.iter().map(|z| (z.piece.name.as_str(), z)).collect();
    for z in &b.zero_section {
        match reference.iter().find(|r| r.piece.name == z.piece.name) {
            None => v.push(format!("unexpected zero-section piece `{}`", z.piece.name)),
            Some(r) => v.expect(r.piece == z.piece, || {
                format!("zero-section piece `{}` is misplaced", z.piece.name)
            }),
        }
        for glue in &z.glued_to {
            let back = by_name
                .get(glue.piece.as_str())
                .is_some_and(|o| o.glued_to.iter().any(|g| g.piece == z.piece.name && g.along == glue.along));
            v.expect(back, || {
                format!("gluing `{}` -> `{}` along {} is not reciprocated", z.piece.name, glue.piece, glue.along)
            });
        }
    }
    // The three pieces must form one connected union.
    if let Some(first) = b.zero_section.first() {
        let mut seen = BTreeSet::from([first.piece.name.as_str()]);
        let mut stack = vec![first];
        while let Some(z) = stack.pop() {
            for g in &z.glued_to {
                if let Some(next) = by_name.get(g.piece.as_str()) {
                    if seen.insert(next.piece.name.as_str()) {
                        stack.push(next);
                    }
                }
            }
        }
        v.expect(seen.len() == found.len(), || "zero section is not connected".into());
    }
}

fn check_flexible(c: &FlexibleEmbeddingCertificate, v: &mut Sink) {
    v.expect(c.version == CERTIFICATE_VERSION, || format!("unsupported version {}", c.version));
    let page = c.input.page;
    let (g, n) = (page.genus as i64, page.boundary_count);
    if n == 0 {
        v.push("closed page has no proper embedding");
        return;
    }
    check_bundle(&c.scene.bundle, c.input.framing, v);

    let mut seen = BTreeSet::new();
    for curve in &c.input.curves {
        v.expect(seen.insert(curve.name.as_str()), || format!("duplicate curve `{}`", curve.name));
        v.expect(curve.class.len() == page.h1_rank(), || {
            format!("curve `{}` class has {} entries, page needs {}", curve.name, curve.class.len(), page.h1_rank())
        });
    }

    let s = &c.scene;
    v.expect(s.removed_disks == names("D", 1..=n), || format!("removed disks {:?}, expected D1..D{n}", s.removed_disks));
    v.expect(s.band.disk == "D1" && s.band.full_twists == 1, || {
        format!("band must carry one full twist on D1, got {} on {}", s.band.full_twists, s.band.disk)
    });
    v.expect(s.hopf_pair == ["H1", "H2"], || format!("Hopf pair {:?}", s.hopf_pair));
    v.expect(s.capping_disk.bounds == s.hopf_pair[0], || {
        format!("capping disk bounds `{}`, not `{}`", s.capping_disk.bounds, s.hopf_pair[0])
    });
    v.expect(s.capping_disk.side == Region::Handle, || "capping disk must lie on the handle side".into());
    let cylinders: Vec<&str> = s.boundary_cylinders.iter().map(|b| b.disk.as_str()).collect();
    v.expect(cylinders == names("dD", 1..=n), || format!("boundary cylinders {cylinders:?}, expected dD1..dD{n}"));
    for b in &s.boundary_cylinders {
        v.expect(b.levels == [PAGE_LEVEL, 1.0], || format!("cylinder on {} spans {:?}, not [1/2, 1]", b.disk, b.levels));
    }

    let chi_s = 1 - 2 * g - n as i64;
    let chi_capped = 2 - 2 * g - n as i64;
    let inter = &s.intermediate;
    v.expect(inter.boundary.len() == n + 1, || {
        format!("intermediate surface has {} boundary components, expected {}", inter.boundary.len(), n + 1)
    });
    v.expect(s.hopf_pair.iter().all(|h| inter.boundary.contains(h)), || {
        "intermediate boundary lacks the Hopf pair".into()
    });
    v.expect(inter.euler_characteristic == chi_s, || {
        format!("intermediate Euler characteristic {}, expected {chi_s}", inter.euler_characteristic)
    });
    v.expect(s.capped.boundary.len() == n, || format!("capped surface has {} boundary components", s.capped.boundary.len()));
    v.expect(s.capped.euler_characteristic == chi_capped && chi_capped == page.euler_characteristic(), || {
        format!("capped Euler characteristic {}, expected {chi_capped}", s.capped.euler_characteristic)
    });
    v.expect(s.capped.euler_characteristic == inter.euler_characteristic + 1, || {
        "capping with a disk must raise the Euler characteristic by one".into()
    });
    let ch = &c.checks;
    v.expect(
        *ch == FlexibleChecks {
            generator_count: c.input.curves.len(),
            euler_page: page.euler_characteristic(),
            euler_intermediate: chi_s,
            euler_capped: chi_capped,
        },
        || format!("recorded checks {ch:?} disagree with the page"),
    );

    let mut entries: BTreeMap<&str, usize> = BTreeMap::new();
    for st in &c.schedule {
        *entries.entry(st.curve.as_str()).or_default() += 1;
        if !seen.contains(st.curve.as_str()) {
            v.push(format!("schedule step {} twists unknown curve `{}`", st.step, st.curve));
        }
    }
    for curve in &c.input.curves {
        match entries.get(curve.name.as_str()).copied().unwrap_or(0) {
            1 => {}
            0 => v.push(format!("generator `{}` has no schedule entry", curve.name)),
            k => v.push(format!("generator `{}` has {k} schedule entries", curve.name)),
        }
    }
    let mut prev_level = 0.0;
    for (i, st) in c.schedule.iter().enumerate() {
        let tag = format!("schedule step {} (`{}`)", st.step, st.curve);
        v.expect(st.step == i + 1, || format!("{tag}: out of sequence, expected step {}", i + 1));
        if !open_half(st.level) {
            v.push(format!("{tag}: level outside (0, 1/2): {}", st.level));
        } else {
            v.expect(st.level > prev_level, || format!("{tag}: level {} not above the previous step", st.level));
            prev_level = st.level;
        }
        let [lo, hi] = st.support;
        v.expect(lo < st.level && st.level < hi, || format!("{tag}: support {:?} misses its level", st.support));
        v.expect(lo > 0.0 && hi < PAGE_LEVEL, || format!("{tag}: support {:?} leaves (0, 1/2)", st.support));
        v.expect(st.window == [i, i + 1], || format!("{tag}: time window {:?} overlaps another step", st.window));
        v.expect(st.isotopy == ISOTOPY_PHASES, || format!("{tag}: isotopy must be push, twist, return"));
        v.expect(st.band_sum_curve == band_sum_name(&st.curve), || {
            format!("{tag}: band-sum curve `{}`", st.band_sum_curve)
        });
    }
}

/// Letter-for-letter coverage of `word` by `(action_step, letter_index, curve, exponent)` entries.
fn check_coverage(word: &TwistWord, entries: &[(usize, usize, &str, i64)], v: &mut Sink) {
    let letters = word.letters();
    let mut covered = vec![0usize; letters.len()];
    for &(step, index, curve, exponent) in entries {
        match letters.get(index) {
            None => v.push(format!("realization step {step} names letter {index}, word has {}", letters.len())),
            Some(l) => {
                covered[index] += 1;
                v.expect(l.curve == curve && l.exponent == exponent, || {
                    format!("realization step {step} records t({curve})^{exponent} for letter {index} = {l}")
                });
            }
        }
    }
    for (index, count) in covered.iter().enumerate() {
        match count {
            1 => {}
            0 => v.push(format!("uncovered letter {index} ({})", letters[index])),
            k => v.push(format!("letter {index} ({}) realized {k} times", letters[index])),
        }
    }
    if entries.len() == letters.len() {
        for (expected, (i, _)) in word.action_order().enumerate() {
            let (step, index, ..) = entries[expected];
            v.expect(step == expected + 1 && index == i, || {
                format!("realization entry {} is out of action order", expected + 1)
            });
        }
    }
}

fn rebuild(rec: &OpenBookRecord, what: &str, v: &mut Sink) -> Option<AbstractOpenBook> {
    match rec.rebuild() {
        Ok(ob) => Some(ob),
        Err(e) => {
            v.push(format!("{what} open book is invalid: {e}"));
            None
        }
    }
}

fn check_page_certificate(
    pc: &FlexibleEmbeddingCertificate,
    rec: &OpenBookRecord,
    m: i64,
    realization: &[Realization],
    v: &mut Sink,
) {
    v.nested("page_certificate", |v| check_flexible(pc, v));
    v.expect(pc.input.page == rec.page, || format!("page certificate is for {}, open book page is {}", pc.input.page, rec.page));
    v.expect(pc.input.framing == m, || format!("page certificate framing {} differs from {m}", pc.input.framing));
    v.expect(pc.input.curves == rec.system.curves, || "page certificate curves differ from the open book's".into());
    for r in realization {
        match pc.schedule.iter().find(|s| s.step == r.schedule_step) {
            None => v.push(format!("realization step {} uses missing schedule step {}", r.action_step, r.schedule_step)),
            Some(s) => v.expect(s.curve == r.curve, || {
                format!("realization step {} twists `{}` but schedule step {} twists `{}`", r.action_step, r.curve, s.step, s.curve)
            }),
        }
    }
    let entries: Vec<_> = realization
        .iter()
        .map(|r| (r.action_step, r.letter_index, r.curve.as_str(), r.exponent))
        .collect();
    check_coverage(&rec.word, &entries, v);
}

fn check_witness(c: &OpenBookEmbeddingWitness, v: &mut Sink) {
    let m = c.input.framing;
    let rec = &c.input.openbook;
    rebuild(rec, "source", v);
    check_page_certificate(&c.scene.page_certificate, rec, m, &c.schedule, v);
    v.expect(c.scene.target == target_label(m), || format!("target `{}` contradicts framing {m}", c.scene.target));
    v.expect(c.scene.target_manifold == target_manifold(m), || {
        format!("target manifold `{}` contradicts framing {m}", c.scene.target_manifold)
    });
    v.expect(c.scene.compatibility == compatibility_stamp(m), || {
        format!("compatibility stamp `{}`", c.scene.compatibility)
    });
    v.expect(c.checks.letters == rec.word.len(), || format!("recorded {} letters, word has {}", c.checks.letters, rec.word.len()));
    v.expect(c.checks.framing_parity == parity_name(m), || format!("recorded parity `{}`", c.checks.framing_parity));
}

fn check_annulus(c: &AnnulusD4Certificate, v: &mut Sink) {
    let rec = &c.input;
    v.expect(rec.page == Surface::annulus(), || format!("page {} is not the annulus", rec.page));
    rebuild(rec, "source", v);
    for (i, l) in rec.word.letters().iter().enumerate() {
        let core = rec
            .system
            .curves
            .iter()
            .any(|x| x.name == l.curve && x.kind == CurveKind::BoundaryParallel);
        v.expect(core, || format!("letter {i} ({l}) is not a core twist"));
    }
    let entries: Vec<_> = c
        .schedule
        .iter()
        .map(|s| (s.action_step, s.letter_index, s.curve.as_str(), s.exponent))
        .collect();
    check_coverage(&rec.word, &entries, v);
    let power = rec.word.exponent_sum();
    v.expect(c.checks.realized_power == power, || {
        format!("realized power {} differs from the exponent sum {power}", c.checks.realized_power)
    });

    let s = &c.scene;
    v.expect(s.hopf_band.ambient == "S3" && s.hopf_band.core_to_center, || {
        "annulus must sit as a Hopf band in S3 with core on the center circle".into()
    });
    v.expect(s.collar_push.proper_in == "D4" && s.collar_push.boundary_cylinder == [0.0, 1.0], || {
        "collar push must end on the boundary of D4".into()
    });
    let ext = &s.isotopy_extension;
    v.expect(ext.outside_collar == "identity", || "extension must be the identity outside the collar".into());
    let psi = |b: &ExtensionBranch, t: f64| b.psi_slope as f64 * t + b.psi_offset as f64;
    let mut sorted = ext.branches.clone();
    sorted.sort_by(|a, b| a.t_range[0].total_cmp(&b.t_range[0]));
    let contiguous = sorted.first().is_some_and(|b| b.t_range[0] == -1.0)
        && sorted.last().is_some_and(|b| b.t_range[1] == 1.0)
        && sorted.windows(2).all(|w| w[0].t_range[1] == w[1].t_range[0]);
    v.expect(contiguous, || "extension branches must tile [-1, 1]".into());
    for b in &sorted {
        let [lo, hi] = b.t_range;
        if lo <= 0.0 && 0.0 <= hi {
            v.expect(psi(b, 0.0) == 1.0, || format!("branch on {:?} is not Psi_1 on the middle level", b.t_range));
        }
        for end in [-1.0, 1.0] {
            if lo <= end && end <= hi {
                v.expect(psi(b, end) == 0.0, || format!("branch on {:?} is not the identity at t = {end}", b.t_range));
            }
        }
        v.expect(b.psi_slope.abs() == 1, || format!("branch on {:?} has slope {}", b.t_range, b.psi_slope));
    }
    v.expect(sorted == extension_branches(), || "extension differs from the piecewise rule".into());
    v.expect(s.target == "S5", || format!("target `{}`", s.target));
}

fn check_s5(c: &S5Plan, v: &mut Sink) {
    let s = &c.scene;
    let original = rebuild(&c.input.original, "original", v);
    let normalized = rebuild(&c.input.normalized, "normalized", v);
    let (op, np) = (c.input.original.page, c.input.normalized.page);
    v.expect(np.boundary_count == 1, || format!("normalized page has {} boundary components", np.boundary_count));
    v.expect(op.boundary_count >= 1 && np.genus + 1 == op.genus + op.boundary_count, || {
        format!("normalized page {np} is not reached from {op} by joining boundary components")
    });
    if let (Some(o), Some(n)) = (original, normalized) {
        let (before, after) = (o.closed_h1(), n.closed_h1());
        v.expect(before == c.checks.h1_before, || format!("recorded H1 before {} but input gives {before}", c.checks.h1_before));
        v.expect(after == c.checks.h1_after, || format!("recorded H1 after {} but input gives {after}", c.checks.h1_after));
        v.expect(before == after, || format!("normalization changed H1 from {before} to {after}"));
    }
    v.expect(c.checks.h1_preserved == (c.checks.h1_before == c.checks.h1_after), || "h1_preserved flag is wrong".into());

    check_bundle(&s.bundle, 1, v);
    for (name, framing) in [("K", Some(1)), ("K'", None), ("U", None)] {
        match s.knots.iter().find(|k| k.name == name) {
            None => v.push(format!("scene lacks knot `{name}`")),
            Some(k) => v.expect(k.framing == framing, || format!("knot `{name}` has framing {:?}", k.framing)),
        }
    }
    v.expect(s.hopf_annulus.boundary == ["U", "K'"] && s.hopf_annulus.level == PAGE_LEVEL, || {
        "Hopf annulus must join U and K' at level 1/2".into()
    });
    v.expect(s.handlebody == SolidTorus::Complement, || "handlebody must sit in the complement solid torus".into());
    let sum = &s.connected_sum;
    let expected_chi = np.euler_characteristic() + Surface::annulus().euler_characteristic() - 1;
    v.expect(sum.result == Surface::new(np.genus, 2), || format!("boundary sum yields {}, expected Σ_{{{},2}}", sum.result, np.genus));
    v.expect(sum.euler_characteristic == expected_chi && expected_chi == sum.result.euler_characteristic(), || {
        format!("boundary sum Euler characteristic {}, expected {expected_chi}", sum.euler_characteristic)
    });
    let a = &s.assembly;
    v.expect(a.complement == "S3x(0,1]" && a.capping == "S3xD2", || "assembly must cap S3x(0,1] with S3xD2".into());
    v.expect(a.target == "S3xR2" && a.ambient == "S5", || format!("target `{}` in `{}`, expected S3xR2 in S5", a.target, a.ambient));

    check_page_certificate(&s.page_certificate, &c.input.normalized, 1, &c.schedule, v);

    let required: BTreeSet<String> = s5_surface_pieces().into_iter().map(|p| p.name).collect();
    let present: BTreeSet<String> = s.surface_pieces.iter().map(|p| p.name.clone()).collect();
    for missing in required.difference(&present) {
        v.push(format!("surface piece `{missing}` is missing"));
    }
    let mut listed: BTreeMap<(&str, &str), &AvoidanceEntry> = BTreeMap::new();
    for e in &c.checks.avoidance {
        if listed.insert((&e.surface_piece, &e.zero_section_piece), e).is_some() {
            v.push(format!("avoidance pair ({}, {}) listed twice", e.surface_piece, e.zero_section_piece));
        }
    }
    v.expect(c.checks.avoidance.len() == s.surface_pieces.len() * s.bundle.zero_section.len(), || {
        format!("avoidance checklist has {} entries, expected {}", c.checks.avoidance.len(), s.surface_pieces.len() * s.bundle.zero_section.len())
    });
    for sp in &s.surface_pieces {
        for z in &s.bundle.zero_section {
            let pair = format!("({}, {})", sp.name, z.piece.name);
            let Some(e) = listed.get(&(sp.name.as_str(), z.piece.name.as_str())) else {
                v.push(format!("avoidance checklist misses {pair}"));
                continue;
            };
            let derived = disjointness_reason(sp, &z.piece);
            v.expect(e.disjoint && e.reason.is_some(), || format!("{pair} not certified disjoint"));
            v.expect(derived.is_some(), || format!("{pair}: placement does not force disjointness"));
            if derived.is_some() && e.reason.is_some() {
                v.expect(e.reason == derived, || format!("{pair}: reason {:?} does not follow from placement", e.reason));
            }
        }
    }
}
