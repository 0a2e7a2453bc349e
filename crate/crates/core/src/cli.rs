//! Batch front-end: problem files, pipeline orchestration, reports.

use crate::arith::{parse_rat, render_rat, Int, Rat};
use crate::batyrev::{
    batyrev_rank_generic, build_ideals, cohomology_ring, initial_ideal_check, leading_term_suite,
    max_cone_count, q_zero_specializes_to_sr, residual_rank, volume_rank, BatyrevAlgebras,
    CohRing,
};
use crate::curveclasses::{
    mori_generators, mori_sign_suite, resolve_h2_basis, CurveClass, H2Basis, PrimitiveClassSet,
    SuiteReport,
};
use crate::gkz::{
    box_weight_homogeneous, bridge_data, bridge_operator, build_system, candidate_colon_generators,
    box_operator, box_ray_shadow, symbol, render_symbol, BoxSystem, ColonBounds, OpMono,
};
use crate::mirror::{
    annihilation_identity, extract_fg, extraction_roundtrip, i_truncate, mirror_map,
    weight_homogeneous, MirrorContext, QSeries,
};
use crate::polyalg::groebner::normal_form;
use crate::polyalg::{buchberger, MonOrder};
use crate::toricfan::{build_delta, find_support_function, validate_fan, BundleData, DeltaFan, Fan};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use thiserror::Error;

fn default_schema() -> u32 {
    1
}

/// One problem: a fan, bundle coefficients and optional curve-class data.
/// Integers only; rationals appear as "p/q" strings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemFile {
    #[serde(default = "default_schema")]
    pub schema_version: u32,
    #[serde(default)]
    pub name: String,
    pub lattice_rank: usize,
    pub rays: Vec<Vec<i64>>,
    pub max_cones: Vec<Vec<usize>>,
    #[serde(default)]
    pub bundles: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h2_basis: Option<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ample_weights: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation_order: Option<u32>,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{0}")]
    Invalid(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

/// Parses a problem file, or a report wrapper containing one under "problem".
pub fn parse_problem(text: &str) -> Result<ProblemFile, CliError> {
    match serde_json::from_str::<ProblemFile>(text) {
        Ok(p) => Ok(p),
        Err(first) => {
            #[derive(Deserialize)]
            struct Wrapper {
                problem: ProblemFile,
            }
            match serde_json::from_str::<Wrapper>(text) {
                Ok(w) => Ok(w.problem),
                Err(_) => Err(CliError::Parse {
                    line: first.line(),
                    column: first.column(),
                    message: first.to_string(),
                }),
            }
        }
    }
}

pub fn emit_problem(p: &ProblemFile) -> String {
    serde_json::to_string_pretty(p).expect("serializable") + "\n"
}

/// Validated conversion into the exact input types.
pub fn problem_to_inputs(
    p: &ProblemFile,
) -> Result<(Fan, BundleData, Option<Vec<Rat>>), CliError> {
    let rays: Vec<Vec<Int>> = p
        .rays
        .iter()
        .map(|r| r.iter().map(|&x| Int::from(x)).collect())
        .collect();
    let fan = Fan::new(p.lattice_rank, rays, p.max_cones.clone());
    let bundles = BundleData {
        coeffs: p
            .bundles
            .iter()
            .map(|c| c.iter().map(|&x| Int::from(x)).collect())
            .collect(),
    };
    let weights = match &p.ample_weights {
        None => None,
        Some(ws) => {
            let parsed: Result<Vec<Rat>, String> = ws.iter().map(|w| parse_rat(w)).collect();
            Some(parsed.map_err(CliError::Invalid)?)
        }
    };
    Ok((fan, bundles, weights))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Validate,
    Primitive,
    Batyrev,
    Residual,
    Gkz,
    Colon,
    IFunction,
    All,
}

impl Command {
    pub fn parse(s: &str) -> Option<Command> {
        Some(match s {
            "validate" => Command::Validate,
            "primitive" => Command::Primitive,
            "batyrev" => Command::Batyrev,
            "residual" => Command::Residual,
            "gkz" => Command::Gkz,
            "colon" => Command::Colon,
            "ifunction" => Command::IFunction,
            "all" => Command::All,
            _ => return None,
        })
    }

    fn wants(&self, stage: Stage) -> bool {
        use Command::*;
        use Stage::*;
        match stage {
            Primitives => !matches!(self, Validate),
            Ranks => matches!(self, Batyrev | Residual | All),
            ResidualRank => matches!(self, Residual | All),
            Operators => matches!(self, Gkz | Colon | All),
            Quotient => matches!(self, Colon | All),
            ISeries => matches!(self, IFunction | All),
            Suites => matches!(self, All),
        }
    }
}

#[derive(Clone, Copy)]
enum Stage {
    Primitives,
    Ranks,
    ResidualRank,
    Operators,
    Quotient,
    ISeries,
    Suites,
}

#[derive(Debug, Clone)]
pub struct RunOptions {
    pub order: Option<u32>,
    pub q_support_level: u32,
    pub seed: u64,
    pub mori_suite_size: usize,
    pub leading_suite_size: usize,
    pub annihilation_level: u32,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            order: None,
            q_support_level: 2,
            seed: 17,
            mori_suite_size: 200,
            leading_suite_size: 100,
            annihilation_level: 3,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct FanSection {
    pub valid: bool,
    pub violations: Vec<String>,
    pub delta_rays: Vec<Vec<i64>>,
    pub ray_kinds: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct PrimitiveSection {
    pub collections: Vec<Vec<usize>>,
    pub classes: Vec<Vec<i64>>,
    pub h2_basis: Vec<Vec<i64>>,
    pub dual_divisors: Vec<Vec<i64>>,
    pub dual_nef: Vec<bool>,
}

#[derive(Debug, Serialize)]
pub struct RankSection {
    pub cohomology_dim: usize,
    pub max_cones: usize,
    pub volume: usize,
    pub triple_agrees: bool,
    pub batyrev_rank: usize,
    pub batyrev_matches_cohomology: bool,
    pub discriminant: Vec<String>,
    pub q_zero_is_stanley_reisner: bool,
    pub bundles_nef: Vec<bool>,
    pub bundles_ample: Vec<bool>,
    /// The dual of omega_X tensored with every bundle is nef; equivalently
    /// the extended fan has nef anticanonical class.
    pub anticanonical_twist_nef: bool,
    pub residual: Option<ResidualSection>,
}

#[derive(Debug, Serialize)]
pub struct ResidualSection {
    pub residual_rank: usize,
    pub kernel_dim: usize,
    pub rank_identity: bool,
    pub exact_sequence: bool,
    /// Reduced basis presenting the residual algebra over Q(q).
    pub presentation: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct InitialSection {
    pub ok: bool,
    pub mismatch: Option<String>,
    pub support_weights: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct GkzSection {
    pub boxes: Vec<String>,
    pub boxes_factored: Vec<String>,
    pub symbols: Vec<String>,
    pub ctop_hat: String,
    pub euler: String,
    pub weight_homogeneous: bool,
    pub ray_shadows_match_relations: bool,
}

#[derive(Debug, Serialize)]
pub struct ColonGeneratorReport {
    pub label: String,
    pub operator: String,
    pub certified: bool,
    pub scalar: Option<String>,
    pub bridge_identity: bool,
}

#[derive(Debug, Serialize)]
pub struct ColonSection {
    pub generators: Vec<ColonGeneratorReport>,
    pub completeness: String,
}

#[derive(Debug, Serialize)]
pub struct IFunctionSection {
    pub order: u32,
    pub f_series: Vec<(Vec<u32>, String)>,
    pub g0_series: Vec<(Vec<u32>, String)>,
    pub g_series: Vec<Vec<(Vec<u32>, String)>>,
    pub mirror_t0: Vec<(Vec<u32>, String)>,
    pub mirror_corrections: Vec<Vec<(Vec<u32>, String)>>,
    pub mirror_normalized: bool,
    pub annihilation_checked: usize,
    pub annihilation_ok: bool,
    pub weights_ok: bool,
    pub extraction_roundtrip: bool,
}

#[derive(Debug, Serialize)]
pub struct ReportBundle {
    pub schema_version: u32,
    pub command: String,
    pub seed: u64,
    pub truncation_order: u32,
    pub problem: ProblemFile,
    pub fan: Option<FanSection>,
    pub primitive: Option<PrimitiveSection>,
    pub ranks: Option<RankSection>,
    pub initial_ideal: Option<InitialSection>,
    pub gkz: Option<GkzSection>,
    pub colon: Option<ColonSection>,
    pub ifunction: Option<IFunctionSection>,
    pub suites: Vec<SuiteReport>,
    pub failures: Vec<String>,
    pub undetermined: Vec<String>,
}

impl ReportBundle {
    pub fn exit_code(&self) -> i32 {
        if !self.failures.is_empty() {
            1
        } else if !self.undetermined.is_empty() {
            3
        } else {
            0
        }
    }
}

fn ints_to_i64(v: &[Int]) -> Vec<i64> {
    v.iter().map(|x| i64::try_from(x).expect("desk scale")).collect()
}

fn command_name(c: Command) -> &'static str {
    match c {
        Command::Validate => "validate",
        Command::Primitive => "primitive",
        Command::Batyrev => "batyrev",
        Command::Residual => "residual",
        Command::Gkz => "gkz",
        Command::Colon => "colon",
        Command::IFunction => "ifunction",
        Command::All => "all",
    }
}

struct StageData {
    delta: DeltaFan,
    gens: PrimitiveClassSet,
    basis: H2Basis,
    coh: CohRing,
    alg: BatyrevAlgebras,
    sys: BoxSystem,
}

/// Runs the requested pipeline stages and collects every verification
/// outcome. All computations are exact; reports are deterministic for a
/// fixed input and seed.
pub fn run(problem: &ProblemFile, command: Command, opts: &RunOptions) -> ReportBundle {
    let order = opts
        .order
        .or(problem.truncation_order)
        .unwrap_or(3);
    let mut report = ReportBundle {
        schema_version: 1,
        command: command_name(command).to_string(),
        seed: opts.seed,
        truncation_order: order,
        problem: problem.clone(),
        fan: None,
        primitive: None,
        ranks: None,
        initial_ideal: None,
        gkz: None,
        colon: None,
        ifunction: None,
        suites: Vec::new(),
        failures: Vec::new(),
        undetermined: Vec::new(),
    };
    let (fan, bundles, ample_weights) = match problem_to_inputs(problem) {
        Ok(x) => x,
        Err(e) => {
            report.failures.push(e.to_string());
            return report;
        }
    };
    let violations = validate_fan(&fan);
    if !violations.is_empty() {
        report.fan = Some(FanSection {
            valid: false,
            violations: violations.clone(),
            delta_rays: Vec::new(),
            ray_kinds: Vec::new(),
        });
        for v in violations {
            report.failures.push(format!("fan: {v}"));
        }
        return report;
    }
    let delta = match build_delta(&fan, &bundles) {
        Ok(d) => d,
        Err(e) => {
            report.failures.push(format!("fan: {e}"));
            return report;
        }
    };
    report.fan = Some(FanSection {
        valid: true,
        violations: Vec::new(),
        delta_rays: delta.rays.iter().map(|r| ints_to_i64(r)).collect(),
        ray_kinds: delta
            .ray_kind
            .iter()
            .map(|k| format!("{k:?}").to_lowercase())
            .collect(),
    });
    if !command.wants(Stage::Primitives) {
        return report;
    }

    let data = match prepare(&delta, problem, &mut report) {
        Some(d) => d,
        None => return report,
    };
    report.primitive = Some(PrimitiveSection {
        collections: data.gens.collections.clone(),
        classes: data
            .gens
            .classes
            .iter()
            .map(|c| ints_to_i64(&c.components))
            .collect(),
        h2_basis: data
            .basis
            .basis
            .iter()
            .map(|c| ints_to_i64(&c.components))
            .collect(),
        dual_divisors: data.basis.dual_divisors().iter().map(|d| ints_to_i64(d)).collect(),
        dual_nef: data.basis.dual_nef.clone(),
    });

    if command.wants(Stage::Ranks) {
        // Support function: verify the hint or search.
        let sf = match find_support_function(&data.delta, ample_weights.as_deref()) {
            Ok(sf) => sf,
            Err(e) => {
                report.failures.push(format!("support function: {e}"));
                return report;
            }
        };
        let coh_dim = data.coh.dim;
        let cones = max_cone_count(&data.delta);
        let volume = volume_rank(&data.delta);
        let triple = coh_dim == cones && cones == volume;
        if !triple {
            report.failures.push(format!(
                "rank triple disagrees: dim {coh_dim}, cones {cones}, volume {volume}"
            ));
        }
        let (batyrev, certificate) = match batyrev_rank_generic(&data.alg) {
            Ok(x) => x,
            Err(e) => {
                report.failures.push(format!("batyrev rank: {e}"));
                return report;
            }
        };
        if batyrev != coh_dim {
            report
                .failures
                .push(format!("batyrev rank {batyrev} != cohomology dim {coh_dim}"));
        }
        let q_zero_ok = q_zero_specializes_to_sr(&data.alg);
        if !q_zero_ok {
            report
                .failures
                .push("q = 0 specialization does not recover the Stanley-Reisner ideal".into());
        }
        let mut discriminant: BTreeSet<String> = certificate;
        let residual = if command.wants(Stage::ResidualRank) {
            match residual_rank(&data.alg, &data.coh) {
                Ok(rep) => {
                    if !rep.rank_identity_holds() {
                        report.failures.push(format!(
                            "residual rank {} != dim {} - kernel {}",
                            rep.residual_rank, rep.coh_dim, rep.ker_dim
                        ));
                    }
                    if !rep.exact_sequence_holds() {
                        report.failures.push(format!(
                            "dimension of B/x_top·B {} != kernel dim {}",
                            rep.quotient_mod_xtop_dim, rep.ker_dim
                        ));
                    }
                    discriminant.extend(rep.certificate.clone());
                    Some(ResidualSection {
                        residual_rank: rep.residual_rank,
                        kernel_dim: rep.ker_dim,
                        rank_identity: rep.rank_identity_holds(),
                        exact_sequence: rep.exact_sequence_holds(),
                        presentation: rep
                            .residual_gb
                            .gens
                            .iter()
                            .map(|g| data.alg.q_ring.render(g))
                            .collect(),
                    })
                }
                Err(e) => {
                    report.failures.push(format!("residual: {e}"));
                    None
                }
            }
        } else {
            None
        };
        report.ranks = Some(RankSection {
            cohomology_dim: coh_dim,
            max_cones: cones,
            volume,
            triple_agrees: triple,
            batyrev_rank: batyrev,
            batyrev_matches_cohomology: batyrev == coh_dim,
            discriminant: discriminant.into_iter().collect(),
            q_zero_is_stanley_reisner: q_zero_ok,
            bundles_nef: data.alg.nef_bundles.clone(),
            bundles_ample: data.alg.ample_bundles.clone(),
            anticanonical_twist_nef: data.alg.minus_k_nef,
            residual,
        });

        let initial = initial_ideal_check(&data.delta, &data.gens, &data.alg, &sf);
        if !initial.ok() {
            report.failures.push(format!(
                "initial ideal check failed: {}",
                initial.mismatch.clone().unwrap_or_default()
            ));
        }
        report.initial_ideal = Some(InitialSection {
            ok: initial.ok(),
            mismatch: initial.mismatch,
            support_weights: crate::toricfan::normalized_weights(&data.delta, &sf)
                .iter()
                .map(render_rat)
                .collect(),
        });
        let suite = leading_term_suite(
            &data.delta,
            &data.gens,
            &data.basis,
            &data.alg,
            &sf,
            opts.seed,
            opts.leading_suite_size,
        );
        if !suite.failures.is_empty() {
            report
                .failures
                .push(format!("leading-term suite: {} failures", suite.failures.len()));
        }
        report.suites.push(suite);
    }

    if command.wants(Stage::Operators) {
        let alg = &data.sys.algebra;
        let mut weight_ok = true;
        for b in &data.sys.boxes {
            weight_ok &= box_weight_homogeneous(&data.sys, b);
        }
        for i in 0..data.sys.boxes.len() {
            for j in 0..data.sys.boxes.len() {
                let comp: Vec<i64> = data.sys.class_components[i]
                    .iter()
                    .zip(&data.sys.class_components[j])
                    .map(|(x, y)| x + y)
                    .collect();
                let coords: Vec<i64> = data.sys.class_coords[i]
                    .iter()
                    .zip(&data.sys.class_coords[j])
                    .map(|(x, y)| x + y)
                    .collect();
                weight_ok &=
                    box_weight_homogeneous(&data.sys, &box_operator(&data.sys, &comp, &coords));
            }
        }
        if !weight_ok {
            report.failures.push("box operator weight homogeneity failed".into());
        }
        // Ray-presentation shadows must equal the quantum relations exactly.
        let mut shadows_ok = true;
        for ci in 0..data.sys.boxes.len() {
            let shadow = box_ray_shadow(&data.delta, &data.sys, ci, &data.alg.q_ring);
            if shadow != data.alg.ideals.qsr[ci] {
                shadows_ok = false;
                report
                    .failures
                    .push(format!("ray shadow of box {ci} differs from its quantum relation"));
            }
        }
        let symbols: Vec<String> = data
            .sys
            .boxes
            .iter()
            .map(|b| match symbol(b) {
                Ok(s) => render_symbol(&data.sys, &s),
                Err(e) => format!("error: {e}"),
            })
            .collect();
        report.gkz = Some(GkzSection {
            boxes: data.sys.boxes.iter().map(|b| alg.render(b)).collect(),
            boxes_factored: (0..data.sys.boxes.len())
                .map(|ci| crate::gkz::describe_box(&data.sys, ci))
                .collect(),
            symbols,
            ctop_hat: alg.render(&data.sys.ctop_hat),
            euler: alg.render(&data.sys.euler),
            weight_homogeneous: weight_ok,
            ray_shadows_match_relations: shadows_ok,
        });
    }

    if command.wants(Stage::Quotient) {
        let bounds = ColonBounds {
            z_degree: 8,
            q_support_level: opts.q_support_level,
        };
        match candidate_colon_generators(&data.sys, &bounds) {
            Ok(cands) => {
                let bridge = bridge_data(&data.delta, &data.basis, &data.alg.q_ring);
                let ord = MonOrder::grevlex(data.alg.q_ring.nvars());
                let mut ideal = data.alg.ideals.qsr.clone();
                ideal.extend(data.alg.ideals.lin.clone());
                let gb = buchberger(&data.alg.q_ring, &ideal, &ord);
                let mut generators = Vec::new();
                for c in cands {
                    let certified = c.certificate.as_ref().map(|x| x.verified).unwrap_or(false);
                    if !certified {
                        report.undetermined.push(format!(
                            "membership of {} not certified at the current bounds",
                            c.label
                        ));
                    }
                    // Scalar display: a single-constant-cofactor certificate.
                    let scalar = c.certificate.as_ref().and_then(|cert| {
                        let nonzero: Vec<&crate::gkz::DiffOp> =
                            cert.cofactors.iter().filter(|b| !b.is_zero()).collect();
                        match nonzero.as_slice() {
                            [only] if only.terms.len() == 1 => {
                                let (m, coeff) = only.terms.iter().next().unwrap();
                                let unit = OpMono {
                                    q: vec![0; data.sys.algebra.r],
                                    z: 0,
                                    dq: vec![0; data.sys.algebra.r],
                                    dz: 0,
                                };
                                (*m == unit).then(|| render_rat(coeff))
                            }
                            _ => None,
                        }
                    });
                    // Commutative shadow of the certificate.
                    let image = bridge_operator(&bridge, &c.operator);
                    let prod = data.alg.q_ring.mul(&data.alg.ctop.x_top, &image);
                    let bridge_identity =
                        normal_form(&data.alg.q_ring, &prod, &gb.gens, &ord).is_zero();
                    if !bridge_identity {
                        report.failures.push(format!(
                            "bridge identity x_top·image ∈ QSR+Lin failed for {}",
                            c.label
                        ));
                    }
                    generators.push(ColonGeneratorReport {
                        label: c.label,
                        operator: data.sys.algebra.render(&c.operator),
                        certified,
                        scalar,
                        bridge_identity,
                    });
                }
                report.colon = Some(ColonSection {
                    generators,
                    completeness: "CONJECTURAL-COMPLETE: membership certified, generation open"
                        .to_string(),
                });
            }
            Err(e) => report.failures.push(format!("colon: {e}")),
        }
    }

    if command.wants(Stage::ISeries) {
        let ctx = MirrorContext::new(&data.delta, &data.gens, &data.basis, &data.coh);
        match i_truncate(&ctx, order) {
            Ok(it) => {
                let mut weights_ok = true;
                for (_, comp, a) in &it.entries {
                    weights_ok &= weight_homogeneous(&ctx, comp, a);
                }
                if !weights_ok {
                    report.failures.push("A-coefficient weight homogeneity failed".into());
                }
                let mut checked = 0usize;
                let mut annihilation_ok = true;
                let level = opts.annihilation_level;
                let pts = crate::curveclasses::ne_points_up_to(&data.gens, &data.basis, level);
                for (_, d) in &pts {
                    for c in &data.gens.classes {
                        checked += 1;
                        match annihilation_identity(&ctx, d, &c.components) {
                            Ok(true) => {}
                            Ok(false) => {
                                annihilation_ok = false;
                                report.failures.push(format!(
                                    "annihilation identity failed at d = {:?}, d' = {:?}",
                                    ints_to_i64(d),
                                    ints_to_i64(&c.components)
                                ));
                            }
                            Err(e) => {
                                annihilation_ok = false;
                                report.failures.push(format!("annihilation identity: {e}"));
                            }
                        }
                    }
                }
                let ms = extract_fg(&ctx, &it);
                let roundtrip = extraction_roundtrip(&ctx, &it, &ms);
                if !roundtrip {
                    report.failures.push("F/G extraction roundtrip failed".into());
                }
                let series_strings = |s: &QSeries| -> Vec<(Vec<u32>, String)> {
                    s.iter().map(|(m, c)| (m.clone(), render_rat(c))).collect()
                };
                match mirror_map(&ms) {
                    Ok(mm) => {
                        let normalized = mm.leading_terms_normalized(data.basis.rank());
                        if !normalized {
                            report
                                .failures
                                .push("mirror map leading terms are not normalized".into());
                        }
                        report.ifunction = Some(IFunctionSection {
                            order,
                            f_series: series_strings(&ms.f),
                            g0_series: series_strings(&ms.g0),
                            g_series: ms.ga.iter().map(series_strings).collect(),
                            mirror_t0: series_strings(&mm.t0),
                            mirror_corrections: mm
                                .q_corrections
                                .iter()
                                .map(series_strings)
                                .collect(),
                            mirror_normalized: normalized,
                            annihilation_checked: checked,
                            annihilation_ok,
                            weights_ok,
                            extraction_roundtrip: roundtrip,
                        });
                    }
                    Err(e) => report.failures.push(format!("mirror map: {e}")),
                }
            }
            Err(e) => report.failures.push(format!("I-series: {e}")),
        }
    }

    if command.wants(Stage::Suites) {
        let suite = mori_sign_suite(&data.delta, &data.gens, opts.seed, opts.mori_suite_size);
        if !suite.failures.is_empty() {
            report
                .failures
                .push(format!("mori sign suite: {} failures", suite.failures.len()));
        }
        report.suites.push(suite);
    }
    report
}

fn prepare(delta: &DeltaFan, problem: &ProblemFile, report: &mut ReportBundle) -> Option<StageData> {
    let gens = match mori_generators(delta) {
        Ok(g) => g,
        Err(e) => {
            report.failures.push(format!("primitive classes: {e}"));
            return None;
        }
    };
    let supplied = problem.h2_basis.as_ref().map(|rows| {
        rows.iter()
            .map(|r| CurveClass {
                components: r.iter().map(|&x| Int::from(x)).collect(),
            })
            .collect::<Vec<_>>()
    });
    let basis = match resolve_h2_basis(delta, &gens, supplied) {
        Ok(b) => b,
        Err(e) => {
            report.failures.push(format!("curve-class basis: {e}"));
            return None;
        }
    };
    let coh = cohomology_ring(delta, &gens);
    let alg = match build_ideals(delta, &basis, &gens, &coh) {
        Ok(a) => a,
        Err(e) => {
            report.failures.push(format!("ideal family: {e}"));
            return None;
        }
    };
    let sys = build_system(delta, &gens, &basis);
    Some(StageData {
        delta: delta.clone(),
        gens,
        basis,
        coh,
        alg,
        sys,
    })
}

/// Machine format: schema-versioned JSON with deterministic key order.
pub fn emit_machine(report: &ReportBundle) -> String {
    serde_json::to_string_pretty(report).expect("serializable") + "\n"
}

pub fn emit_human(report: &ReportBundle) -> String {
    let mut out = String::new();
    let push = |out: &mut String, s: String| {
        out.push_str(&s);
        out.push('\n');
    };
    push(&mut out, format!("problem: {}", report.problem.name));
    push(&mut out, format!("command: {}", report.command));
    if let Some(fan) = &report.fan {
        push(&mut out, format!("fan valid: {}", fan.valid));
        for v in &fan.violations {
            push(&mut out, format!("  violation: {v}"));
        }
    }
    if let Some(p) = &report.primitive {
        push(&mut out, format!("primitive collections: {:?}", p.collections));
        for c in &p.classes {
            push(&mut out, format!("  class: {c:?}"));
        }
        push(&mut out, format!("curve basis: {:?}", p.h2_basis));
        push(&mut out, format!("dual divisors: {:?}", p.dual_divisors));
    }
    if let Some(r) = &report.ranks {
        push(
            &mut out,
            format!(
                "ranks: cohomology {}, max cones {}, volume {}, batyrev {}",
                r.cohomology_dim, r.max_cones, r.volume, r.batyrev_rank
            ),
        );
        if let Some(res) = &r.residual {
            push(
                &mut out,
                format!(
                    "residual rank {}, kernel {}, identities {} {}",
                    res.residual_rank, res.kernel_dim, res.rank_identity, res.exact_sequence
                ),
            );
        }
        push(&mut out, format!("discriminant: {:?}", r.discriminant));
    }
    if let Some(i) = &report.initial_ideal {
        push(&mut out, format!("initial ideal check: {}", i.ok));
    }
    if let Some(g) = &report.gkz {
        for (b, f) in g.boxes.iter().zip(&g.boxes_factored) {
            push(&mut out, format!("box: {f}"));
            push(&mut out, format!("   = {b}"));
        }
        push(&mut out, format!("ctop_hat: {}", g.ctop_hat));
        push(&mut out, format!("euler: {}", g.euler));
        for s in &g.symbols {
            push(&mut out, format!("symbol: {s}"));
        }
        push(&mut out, format!("weight homogeneous: {}", g.weight_homogeneous));
    }
    if let Some(c) = &report.colon {
        push(&mut out, format!("colon candidates ({}):", c.completeness));
        for g in &c.generators {
            let scalar = g
                .scalar
                .as_ref()
                .map(|s| format!(", scalar {s}"))
                .unwrap_or_default();
            push(
                &mut out,
                format!(
                    "  {} [certified {}{}, bridge {}]: {}",
                    g.label, g.certified, scalar, g.bridge_identity, g.operator
                ),
            );
        }
    }
    if let Some(i) = &report.ifunction {
        push(&mut out, format!("I-series to order {}:", i.order));
        for (m, c) in &i.f_series {
            push(&mut out, format!("  F{m:?} = {c}"));
        }
        for (a, s) in i.g_series.iter().enumerate() {
            for (m, c) in s {
                push(&mut out, format!("  g{}{m:?} = {c}", a + 1));
            }
        }
        push(
            &mut out,
            format!(
                "annihilation identities: {} checked, ok {}",
                i.annihilation_checked, i.annihilation_ok
            ),
        );
        push(&mut out, format!("mirror normalized: {}", i.mirror_normalized));
    }
    for s in &report.suites {
        push(
            &mut out,
            format!(
                "suite {} (seed {}): {} checked, {} failures",
                s.name,
                s.seed,
                s.checked,
                s.failures.len()
            ),
        );
    }
    for f in &report.failures {
        push(&mut out, format!("FAIL: {f}"));
    }
    for u in &report.undetermined {
        push(&mut out, format!("UNDETERMINED: {u}"));
    }
    push(
        &mut out,
        format!(
            "status: {}",
            match report.exit_code() {
                0 => "pass",
                1 => "verification failure",
                _ => "undetermined",
            }
        ),
    );
    out
}
