use super::*;
use crate::openbook::reduce_to_one_boundary;
use crate::surface::{CurveConfig, CurveKind};

fn boundary_names(prefix: &str, range: std::ops::RangeInclusive<usize>) -> Vec<String> {
    range.map(|i| format!("{prefix}{i}")).collect()
}

/// Level `s_0` of generator `k` (1-based) among `count`: `k / (2(count + 1))`.
fn schedule_level(k: usize, count: usize) -> (f64, [f64; 2]) {
    let denom = 2.0 * (count as f64 + 1.0);
    let level = k as f64 / denom;
    let eps = 1.0 / (2.0 * denom);
    (level, [level - eps, level + eps])
}

/// Properly embeds `page` in `DE(m)` and schedules one twist isotopy per
/// curve of `cfg`, in configuration order.
pub fn build_flexible_embedding(
    page: Surface,
    m: i64,
    cfg: &CurveConfig,
) -> Result<FlexibleEmbeddingCertificate, EmbedError> {
    if !page.has_boundary() {
        return Err(SurfaceError::ClosedPage.into());
    }
    let (g, n) = (page.genus as i64, page.boundary_count);
    let count = cfg.curves.len();

    let schedule = cfg
        .curves
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let step = i + 1;
            let (level, support) = schedule_level(step, count);
            TwistStep {
                step,
                curve: c.name.clone(),
                band_sum_curve: band_sum_name(&c.name),
                level,
                support,
                window: [step - 1, step],
                isotopy: ISOTOPY_PHASES.to_vec(),
            }
        })
        .collect();

    let mut intermediate_boundary = boundary_names("dD", 2..=n);
    intermediate_boundary.extend(["H1".to_string(), "H2".to_string()]);
    let euler_intermediate = 1 - 2 * g - n as i64;
    let euler_capped = 2 - 2 * g - n as i64;

    Ok(FlexibleEmbeddingCertificate {
        version: CERTIFICATE_VERSION,
        input: FlexibleInput {
            page,
            framing: m,
            curves: cfg.curves.clone(),
        },
        scene: FlexibleScene {
            bundle: DiskBundleModel::new(m),
            removed_disks: boundary_names("D", 1..=n),
            band: BandRecord {
                disk: "D1".into(),
                full_twists: 1,
            },
            hopf_pair: ["H1".into(), "H2".into()],
            capping_disk: CappingDisk {
                name: "D".into(),
                bounds: "H1".into(),
                side: Region::Handle,
            },
            boundary_cylinders: boundary_names("dD", 1..=n)
                .into_iter()
                .map(|disk| BoundaryCylinder {
                    disk,
                    levels: [PAGE_LEVEL, 1.0],
                })
                .collect(),
            intermediate: SurfaceCensus {
                boundary: intermediate_boundary,
                euler_characteristic: euler_intermediate,
            },
            capped: SurfaceCensus {
                boundary: boundary_names("dD", 1..=n),
                euler_characteristic: euler_capped,
            },
        },
        schedule,
        checks: FlexibleChecks {
            generator_count: count,
            euler_page: page.euler_characteristic(),
            euler_intermediate,
            euler_capped,
        },
    })
}

fn realize(word: &TwistWord, page_cert: &FlexibleEmbeddingCertificate) -> Vec<Realization> {
    word.action_order()
        .enumerate()
        .map(|(i, (index, letter))| Realization {
            action_step: i + 1,
            letter_index: index,
            curve: letter.curve.clone(),
            exponent: letter.exponent,
            schedule_step: page_cert
                .step_for(&letter.curve)
                .expect("word letters are configured curves")
                .step,
        })
        .collect()
}

/// Embeds `ob` in `Aob(DE(m), Id)`, realizing the monodromy letter by letter.
pub fn build_openbook_embedding(ob: &AbstractOpenBook, m: i64) -> Result<OpenBookEmbeddingWitness, EmbedError> {
    let page_certificate = build_flexible_embedding(ob.page(), m, ob.curves())?;
    let schedule = realize(&ob.monodromy, &page_certificate);
    Ok(OpenBookEmbeddingWitness {
        version: CERTIFICATE_VERSION,
        input: WitnessInput {
            openbook: OpenBookRecord::of(ob),
            framing: m,
        },
        scene: WitnessScene {
            target: target_label(m).into(),
            target_manifold: target_manifold(m).into(),
            compatibility: compatibility_stamp(m),
            page_certificate,
        },
        checks: WitnessChecks {
            letters: schedule.len(),
            framing_parity: parity_name(m).into(),
        },
        schedule,
    })
}

/// The branches of `Γ_1(x, t)`: `Ψ_{1-t}` for `t ≥ 0` and `Ψ_{t+1}` for `t ≤ 0`.
pub(crate) fn extension_branches() -> Vec<ExtensionBranch> {
    vec![
        ExtensionBranch {
            t_range: [-1.0, 0.0],
            psi_slope: 1,
            psi_offset: 1,
        },
        ExtensionBranch {
            t_range: [0.0, 1.0],
            psi_slope: -1,
            psi_offset: 1,
        },
    ]
}

/// Annulus-paged open book in the trivial open book of `S^5`.
pub fn build_annulus_s5(ob: &AbstractOpenBook) -> Result<AnnulusD4Certificate, EmbedError> {
    if ob.page() != Surface::annulus() {
        return Err(EmbedError::NotAnnulus(ob.page()));
    }
    for (index, letter) in ob.monodromy.letters().iter().enumerate() {
        let core = ob
            .curves()
            .get(&letter.curve)
            .is_some_and(|c| c.kind == CurveKind::BoundaryParallel);
        if !core {
            return Err(EmbedError::NonCoreLetter {
                index,
                curve: letter.curve.clone(),
            });
        }
    }
    let schedule = ob
        .monodromy
        .action_order()
        .enumerate()
        .map(|(i, (index, letter))| CoreTwistStep {
            action_step: i + 1,
            letter_index: index,
            curve: letter.curve.clone(),
            exponent: letter.exponent,
        })
        .collect();
    Ok(AnnulusD4Certificate {
        version: CERTIFICATE_VERSION,
        input: OpenBookRecord::of(ob),
        scene: AnnulusScene {
            hopf_band: HopfBandPlacement {
                ambient: "S3".into(),
                boundary: "Hopf link".into(),
                core_to_center: true,
            },
            collar_push: CollarPush {
                collar: "S3x[0,1]".into(),
                band_level: 0.0,
                boundary_cylinder: [0.0, 1.0],
                proper_in: "D4".into(),
            },
            isotopy_extension: IsotopyExtension {
                collar: "S3x[-1,1]".into(),
                branches: extension_branches(),
                outside_collar: "identity".into(),
            },
            target: "S5".into(),
        },
        schedule,
        checks: AnnulusChecks {
            realized_power: ob.monodromy.exponent_sum(),
        },
    })
}

fn collar_piece(name: &str, levels: [f64; 2]) -> Piece {
    Piece {
        name: name.into(),
        region: Region::Collar,
        solid_torus: Some(SolidTorus::Complement),
        levels: Some(levels),
        cocore_point: None,
    }
}

/// Surface pieces of the `S^3 × R^2` construction inside `DE(1)`.
pub(crate) fn s5_surface_pieces() -> Vec<Piece> {
    let page = [PAGE_LEVEL, PAGE_LEVEL];
    vec![
        collar_piece("handlebody_surface", page),
        collar_piece("connected_sum_band", page),
        collar_piece("hopf_annulus", page),
        collar_piece("K'_cylinder", [PAGE_LEVEL, 1.0]),
        collar_piece("U_cylinder", [PAGE_LEVEL, 1.0]),
        Piece {
            name: "K'_disk".into(),
            region: Region::Handle,
            solid_torus: None,
            levels: None,
            cocore_point: Some("p".into()),
        },
    ]
}

/// Embeds any open book in `S^3 × R^2 ⊂ S^5` after normalizing to one
/// boundary component.
pub fn build_s5_plan(ob: &AbstractOpenBook) -> Result<S5Plan, EmbedError> {
    let normalized = reduce_to_one_boundary(ob)?;
    let h1_before = ob.closed_h1();
    let h1_after = normalized.closed_h1();
    let h1_preserved = h1_before == h1_after;
    debug_assert!(h1_preserved, "stabilization changed H1");

    let bundle = DiskBundleModel::new(1);
    let surface_pieces = s5_surface_pieces();
    let avoidance = surface_pieces
        .iter()
        .flat_map(|s| {
            bundle.zero_section.iter().map(move |z| {
                let reason = disjointness_reason(s, &z.piece);
                AvoidanceEntry {
                    surface_piece: s.name.clone(),
                    zero_section_piece: z.piece.name.clone(),
                    disjoint: reason.is_some(),
                    reason,
                }
            })
        })
        .collect();

    let page = normalized.page();
    let page_certificate = build_flexible_embedding(page, 1, normalized.curves())?;
    let schedule = realize(&normalized.monodromy, &page_certificate);
    let knot = |name: &str, framing: Option<i64>, role: &str| KnotRecord {
        name: name.into(),
        framing,
        role: role.into(),
    };

    Ok(S5Plan {
        version: CERTIFICATE_VERSION,
        input: S5Input {
            original: OpenBookRecord::of(ob),
            normalized: OpenBookRecord::of(&normalized),
        },
        scene: S5Scene {
            bundle,
            knots: vec![
                knot("K", Some(1), "attaching circle"),
                knot("K'", None, "boundary of a pushed copy of the core disk"),
                knot("U", None, "meridian linking the attaching region"),
            ],
            hopf_annulus: HopfAnnulus {
                boundary: ["U".into(), "K'".into()],
                level: PAGE_LEVEL,
            },
            handlebody: SolidTorus::Complement,
            connected_sum: ConnectedSum {
                summands: ["page".into(), "hopf_annulus".into()],
                result: Surface::new(page.genus, 2),
                euler_characteristic: page.euler_characteristic() + Surface::annulus().euler_characteristic() - 1,
            },
            surface_pieces,
            page_certificate,
            assembly: Assembly {
                complement: "S3x(0,1]".into(),
                capping: "S3xD2".into(),
                target: "S3xR2".into(),
                ambient: "S5".into(),
            },
        },
        schedule,
        checks: S5Checks {
            h1_before,
            h1_after,
            h1_preserved,
            avoidance,
        },
    })
}
