mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use fhlie_core::bounds::{BoundParams, FSource};
use fhlie_core::bridge::{ATowerCaps, GroupBridge};
use fhlie_core::freelie::{Caps, GeneratorSet};
use fhlie_core::frobenius::{check_grading_laws, check_projection_laws, FixedBy, FrobeniusAction, FrobeniusShape};
use fhlie_core::group::{elementary_abelian_action, unitriangular_action, GroupAction, GroupViolation};
use fhlie_core::instance::{generate, scramble, Family, GeneratorInfo, GroupInstanceFile, LieInstanceFile};
use fhlie_core::kms::{multiplicities_preserved, scan, KmsEngine};
use fhlie_core::tower::{CentralizerTower, TowerCaps};
use fhlie_core::universal::{FreeQuotient, QuotientParams};
use fhlie_core::Exec;

use report::{Report, Status};

/// Exact verification of Lie rings and finite groups with a metacyclic
/// Frobenius group of automorphisms.
///
/// Exit codes: 0 when no check failed, 1 when a check failed, 2 for usage,
/// input or infrastructure errors.
#[derive(Debug, Parser)]
#[command(name = "fhlie", version)]
struct Cli {
    /// Truncation weight for free Lie quotients.
    #[arg(long, global = true, default_value_t = 10)]
    maxweight: usize,
    /// Highest centralizer level.
    #[arg(long, global = true, default_value_t = 1)]
    levels: usize,
    /// Pattern weight and tuple length cap (stands in for U and N).
    #[arg(long, global = true, default_value_t = 2)]
    weightcap: usize,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Enumeration budget for representative tables.
    #[arg(long, global = true, default_value_t = 200_000)]
    budget: usize,
    /// Run single-threaded.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, Args)]
struct ShapeArgs {
    #[arg(long, default_value_t = 3)]
    n: u64,
    #[arg(long, default_value_t = 2)]
    q: u64,
    #[arg(long, default_value_t = 2)]
    r: u64,
}

impl ShapeArgs {
    fn shape(self) -> Result<FrobeniusShape> {
        Ok(FrobeniusShape::new(self.n, self.q, self.r)?)
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Lie axioms and action laws of a Lie instance file.
    Validate { file: PathBuf },
    /// Eigen-decomposition, projection and grading laws, fixed-point subrings.
    Decompose { file: PathBuf },
    /// Universal quotient K / (J + I) and its empirical class.
    Universal {
        #[command(flatten)]
        shape: ShapeArgs,
        #[arg(long, default_value_t = 1)]
        c: usize,
        #[arg(long, default_value_t = 1)]
        orbits: usize,
        #[arg(long)]
        p: Option<u32>,
    },
    /// KMS transformation on a given word or on seeded random words.
    Kms {
        #[command(flatten)]
        shape: ShapeArgs,
        #[arg(long, default_value_t = 1)]
        c: usize,
        #[arg(long, default_value_t = 1)]
        orbits: usize,
        #[arg(long)]
        p: Option<u32>,
        /// Comma-separated generator ids.
        #[arg(long)]
        word: Option<String>,
        #[arg(long, default_value_t = 5)]
        samples: usize,
        /// Length of sampled words.
        #[arg(long, default_value_t = 4)]
        length: usize,
    },
    /// Graded centralizer tower of a Lie instance file.
    Tower { file: PathBuf },
    /// Group instance: validation, Fitting subgroup and the Lie bridge.
    Group { file: PathBuf },
    /// Emit an instance file.
    Generate {
        /// Apply a seeded random change of basis.
        #[arg(long)]
        scramble: bool,
        #[command(subcommand)]
        family: GenerateCmd,
    },
}

#[derive(Debug, Subcommand)]
enum GenerateCmd {
    Heisenberg {
        #[command(flatten)]
        shape: ShapeArgs,
        #[arg(long, default_value_t = 7)]
        p: u32,
        #[arg(long, default_value_t = 1)]
        shift: u64,
    },
    FreeNilpotent {
        #[command(flatten)]
        shape: ShapeArgs,
        #[arg(long, default_value_t = 1)]
        orbits: usize,
        #[arg(long, default_value_t = 3)]
        class_cap: usize,
        /// Impose class c on the H-fixed points.
        #[arg(long)]
        c: Option<usize>,
        /// Divide by the ideal generated by the index-0 component.
        #[arg(long)]
        kill_zero: bool,
        #[arg(long)]
        p: Option<u32>,
    },
    /// Heisenberg copies with seeded shifts, or one copy padded with
    /// universal quotients when --pad-class is given.
    DirectSum {
        #[command(flatten)]
        shape: ShapeArgs,
        #[arg(long, default_value_t = 2)]
        copies: usize,
        #[arg(long)]
        pad_class: Option<usize>,
        #[arg(long, default_value_t = 3)]
        class_cap: usize,
    },
    /// Group instance UT(3, p).
    Unitriangular {
        #[command(flatten)]
        shape: ShapeArgs,
        #[arg(long, default_value_t = 7)]
        p: usize,
    },
    /// Group instance C_p x C_p.
    ElementaryAbelian {
        #[command(flatten)]
        shape: ShapeArgs,
        #[arg(long, default_value_t = 7)]
        p: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            print!("{}", out.text);
            if out.failed {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

struct Output {
    text: String,
    failed: bool,
}

impl From<Report> for Output {
    fn from(r: Report) -> Self {
        Output {
            failed: r.failed(),
            text: r.finish(),
        }
    }
}

fn exec(cli: &Cli) -> Exec {
    if cli.sequential {
        Exec::Sequential
    } else {
        Exec::Parallel
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn inputs(cli: &Cli, extra: Value) -> Value {
    let mut v = json!({
        "budget": cli.budget,
        "levels": cli.levels,
        "maxweight": cli.maxweight,
        "seed": cli.seed,
        "weightcap": cli.weightcap,
    });
    if let (Value::Object(m), Value::Object(e)) = (&mut v, extra) {
        m.extend(e);
    }
    v
}

fn run(cli: &Cli) -> Result<Output> {
    match &cli.command {
        Command::Validate { file } => {
            let mut report = Report::new("validate", inputs(cli, json!({ "file": file })));
            validate_lie(&read(file)?, &mut report)?;
            Ok(report.into())
        }
        Command::Decompose { file } => {
            let mut report = Report::new("decompose", inputs(cli, json!({ "file": file })));
            if let Some(action) = validate_lie(&read(file)?, &mut report)? {
                decompose(&action, &mut report);
            }
            Ok(report.into())
        }
        Command::Universal { shape, c, orbits, p } => {
            let shape = shape.shape()?;
            let mut report = Report::new(
                "universal",
                inputs(cli, json!({ "c": c, "orbits": orbits, "p": p, "shape": shape })),
            );
            universal(cli, shape, *c, *orbits, *p, &mut report)?;
            Ok(report.into())
        }
        Command::Kms {
            shape,
            c,
            orbits,
            p,
            word,
            samples,
            length,
        } => {
            let shape = shape.shape()?;
            let mut report = Report::new(
                "kms",
                inputs(
                    cli,
                    json!({ "c": c, "length": length, "orbits": orbits, "p": p, "samples": samples, "shape": shape, "word": word }),
                ),
            );
            kms(cli, shape, *c, *orbits, *p, word.as_deref(), *samples, *length, &mut report)?;
            Ok(report.into())
        }
        Command::Tower { file } => {
            let mut report = Report::new("tower", inputs(cli, json!({ "file": file })));
            if let Some(action) = validate_lie(&read(file)?, &mut report)? {
                tower(cli, &action, &mut report)?;
            }
            Ok(report.into())
        }
        Command::Group { file } => {
            let mut report = Report::new("group", inputs(cli, json!({ "file": file })));
            group(cli, &read(file)?, &mut report)?;
            Ok(report.into())
        }
        Command::Generate { scramble: mix, family } => generate_cmd(cli, *mix, family),
    }
}

/// Records `lie.axioms` and `action.laws`; returns the action when both pass.
fn validate_lie(text: &str, report: &mut Report) -> Result<Option<FrobeniusAction>> {
    let file = LieInstanceFile::parse(text)?;
    let loaded = file.load()?;
    let violations = loaded.table.validate()?;
    report.check(
        "lie.axioms",
        violations.is_empty(),
        json!({ "dim": file.dim, "violations": violations.len(), "first": violations.iter().take(5).collect::<Vec<_>>() }),
    );
    if !violations.is_empty() {
        return Ok(None);
    }
    let ring = std::sync::Arc::new(loaded.table.into_lie_ring()?);
    let action = FrobeniusAction::from_parts(ring, loaded.shape, loaded.omega, loaded.phi, loaded.h)?;
    let av = action.validate();
    report.check(
        "action.laws",
        av.is_empty(),
        json!({ "shape": action.shape(), "violations": av }),
    );
    Ok(av.is_empty().then_some(action))
}

fn class_json(n: fhlie_core::Nilpotency) -> Value {
    match n.class() {
        Some(c) => json!(c),
        None => Value::Null,
    }
}

fn decompose(action: &FrobeniusAction, report: &mut Report) {
    let d = action.eigen_decompose();
    let pv = check_projection_laws(&d, action);
    report.check("decompose.projections", pv.is_empty(), json!({ "violations": pv }));
    let gv = check_grading_laws(&d, action);
    report.check(
        "decompose.grading",
        gv.is_empty(),
        json!({ "component_dims": d.dims(), "violations": gv }),
    );
    let cf = action.fixed_subring(FixedBy::F);
    let ch = action.fixed_subring(FixedBy::H);
    report.check(
        "decompose.fixed_points",
        cf.space.dim() == d.component(0).dim(),
        json!({
            "c_f_dim": cf.space.dim(),
            "c_h_class": class_json(ch.nilpotency),
            "c_h_dim": ch.space.dim(),
            "ring_class": class_json(action.ring().nilpotency()),
        }),
    );
}

fn universal(cli: &Cli, shape: FrobeniusShape, c: usize, orbits: usize, p: Option<u32>, report: &mut Report) -> Result<()> {
    let mut params = QuotientParams::universal(shape, orbits, c, cli.maxweight);
    if let Some(p) = p {
        params.p = p;
    }
    let q = FreeQuotient::build(params, exec(cli))?;
    let checks = q.checks(exec(cli));
    let caps = json!({ "maxweight": cli.maxweight });
    report
        .check("universal.quotient", checks.all_pass(), serde_json::to_value(&checks)?)
        .caps(caps.clone());
    let est = q.class_estimate();
    let status = if est.stabilized { Status::Pass } else { Status::Inconclusive };
    report
        .push(
            "universal.empirical_f",
            status,
            json!({ "class": est.class, "dims_by_weight": est.dims_by_weight, "empirical_f": est.class, "stabilized": est.stabilized }),
        )
        .caps(caps.clone());
    let b = BoundParams::new(
        c as u64,
        shape.q,
        shape.n,
        est.class as u64,
        FSource::Empirical { stabilized: est.stabilized },
        cli.weightcap,
        cli.levels,
    );
    report
        .push("universal.bounds", status, json!({ "f": b.f, "f_source": b.f_source }))
        .caps(json!({ "t_used": b.t_used, "u_used": b.u_used }))
        .bound(json!({ "N": b.n_bound.to_string(), "T": b.t, "U": b.u.to_string() }));
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn kms(
    cli: &Cli,
    shape: FrobeniusShape,
    c: usize,
    orbits: usize,
    p: Option<u32>,
    word: Option<&str>,
    samples: usize,
    length: usize,
    report: &mut Report,
) -> Result<()> {
    let gens = GeneratorSet::with_orbits(shape, orbits);
    let words: Vec<Vec<usize>> = match word {
        Some(w) => vec![w
            .split(',')
            .map(|s| s.trim().parse::<usize>())
            .collect::<Result<_, _>>()
            .context("--word expects comma-separated generator ids")?],
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
            (0..samples)
                .map(|_| (0..length).map(|_| rng.gen_range(0..gens.len())).collect())
                .collect()
        }
    };
    let weight = words.iter().map(Vec::len).max().unwrap_or(2);
    if weight > cli.maxweight {
        bail!("word length {weight} exceeds --maxweight {}", cli.maxweight);
    }
    let engine = KmsEngine::new(gens.clone(), c, weight, None, p, Caps::default(), exec(cli))?;
    let mut congruent = true;
    let mut scanned = true;
    let mut multiplicities = true;
    let mut runs = Vec::new();
    for w in &words {
        let out = engine.kms_transform(w, None)?;
        let input = fhlie_core::freelie::Tree::left_normed(w);
        let ok_c = engine.congruent_mod_i(&input, &out)?;
        let ok_s = out.terms.iter().all(|(_, t)| scan(t, &gens, 1, 1).is_some_and(|x| x.is_strict()));
        let ok_m = multiplicities_preserved(&input, &out, &gens);
        congruent &= ok_c;
        scanned &= ok_s;
        multiplicities &= ok_m;
        runs.push(json!({ "terms": out.terms.len(), "word": w }));
    }
    let caps = json!({ "maxweight": weight });
    report
        .check("kms.congruence", congruent, json!({ "runs": runs }))
        .caps(caps.clone());
    report.check("kms.multiplicities", multiplicities, json!({ "words": words.len() })).caps(caps.clone());
    report.check("kms.scan", scanned, json!({ "words": words.len() })).caps(caps);
    Ok(())
}

fn tower(cli: &Cli, action: &FrobeniusAction, report: &mut Report) -> Result<()> {
    let caps = TowerCaps {
        u_used: cli.weightcap,
        t_used: cli.levels,
        budget: cli.budget,
    };
    let caps_json = json!({ "budget": caps.budget, "t_used": caps.t_used, "u_used": caps.u_used });
    let t = CentralizerTower::build(action, caps, exec(cli))?;
    let checks = t.checks();
    report
        .check("tower.nesting", checks.nesting, json!({ "dims": checks.dims }))
        .caps(caps_json.clone());
    report
        .check(
            "tower.h_stability",
            checks.h_stable_levels && checks.h_stable_representatives,
            json!({ "levels": checks.h_stable_levels, "representatives": checks.h_stable_representatives, "representative_counts": checks.representatives, "table_sizes": checks.table_sizes }),
        )
        .caps(caps_json.clone());
    let l0 = t.decomposition().component(0).dim();
    report
        .check(
            "tower.codim_bound",
            checks.codim_bound,
            json!({ "dim_l0": l0, "tuples": checks.tuples }),
        )
        .caps(caps_json.clone())
        .bound(json!("codim L_j(t) <= (#tuples) * dim L_0"));
    let cp = t.verify_centralizer_property(cli.weightcap);
    let status = match (cp.is_clean(), cp.exhaustive) {
        (false, _) => Status::Fail,
        (true, true) => Status::Pass,
        (true, false) => Status::Inconclusive,
    };
    report
        .push("tower.centralizer_property", status, serde_json::to_value(&cp)?)
        .caps(caps_json.clone());
    let z = t.z_report();
    let ring_class = action.ring().nilpotency().class();
    let z_class = z.nilpotency.class();
    let ok = match (z_class, ring_class) {
        (Some(a), Some(b)) => a <= b,
        (Some(_), None) => true,
        _ => false,
    };
    report
        .check(
            "tower.z_class",
            ok && z.phi_invariant && z.h_invariant,
            json!({ "codim": z.codim, "dim": z.dim, "ring_class": ring_class, "z_class": z_class, "phi_invariant": z.phi_invariant, "h_invariant": z.h_invariant }),
        )
        .caps(caps_json);
    Ok(())
}

fn group(cli: &Cli, text: &str, report: &mut Report) -> Result<()> {
    let file = GroupInstanceFile::parse(text)?;
    let action = file.load()?;
    let ex = exec(cli);
    let table = action.group.validate();
    report.check("group.table", table.is_empty(), json!({ "order": action.group.order(), "violations": table }));
    if !table.is_empty() {
        return Ok(());
    }
    let all = action.validate();
    let (coprime, autos): (Vec<GroupViolation>, Vec<GroupViolation>) =
        all.into_iter().partition(|v| matches!(v, GroupViolation::NotCoprime { .. }));
    report.check("group.automorphisms", autos.is_empty(), json!({ "shape": action.shape, "violations": autos }));
    report.check(
        "group.coprime",
        coprime.is_empty(),
        json!({ "nq": action.shape.n * action.shape.q, "order": action.group.order() }),
    );
    let g = &action.group;
    let fit = g.fitting(ex);
    let m = action.fixed_phi(&g.whole()).order();
    let ch = action.fixed_h(&g.whole());
    report.check(
        "group.fitting",
        fit.verified(),
        json!({
            "c_g_h_class": g.class_of(&ch),
            "index": fit.index,
            "lattice_size": fit.lattice_size,
            "m": m,
            "n": action.shape.n,
            "order": fit.order,
            "p_cores": fit.cores,
        }),
    );
    if !autos.is_empty() || !coprime.is_empty() {
        return Ok(());
    }
    bridge(cli, &action, report)
}

fn bridge(cli: &Cli, action: &GroupAction, report: &mut Report) -> Result<()> {
    let ex = exec(cli);
    let b = match GroupBridge::new(action, cli.weightcap, ex) {
        Ok(b) => b,
        Err(e) => {
            report.push("bridge.lie_ring", Status::Inconclusive, json!({ "unsupported": e.to_string() }));
            return Ok(());
        }
    };
    let g = &action.group;
    let lie = b.lie();
    let axioms = lie.ring().to_table().validate()?;
    let lie_class = lie.ring().nilpotency().class();
    report.check(
        "bridge.lie_ring",
        lie.well_defined() && axioms.is_empty() && lie_class == Some(lie.group_class()) && lie.action().is_ok(),
        json!({
            "factor_dims": lie.factor_dims(),
            "group_class": lie.group_class(),
            "lie_class": lie_class,
            "prime": lie.prime(),
            "well_defined": lie.well_defined(),
        }),
    );
    let m = action.fixed_phi(&g.whole()).order();
    let ml = lie.fixed_phi_order();
    report.check(
        "bridge.fixed_points",
        ml == m.into(),
        json!({ "c_g_phi": m, "c_l_phi": ml.to_string() }),
    );
    let ch = action.fixed_h(&g.whole());
    let gh = g.class_of(&ch);
    let lh = lie.fixed_h_space().map(|s| lie.ring().nilpotency_of(&s).class());
    let ok = matches!((lh, gh), (Some(Some(a)), Some(b)) if a <= b);
    report.check("bridge.h_centralizer_class", ok, json!({ "c_g_h": gh, "c_l_h": lh.flatten() }));
    report.check("bridge.covering", b.covering_holds(), json!({ "terms": lie.series().len() }));
    let gens = g.generators();
    let mut tuples: Vec<Vec<usize>> = gens.iter().map(|&x| vec![x]).collect();
    if cli.weightcap >= 2 {
        for &x in &gens {
            for &y in &gens {
                tuples.push(vec![x, y]);
            }
        }
    }
    let mut k_ok = true;
    let mut ks = Vec::new();
    for v in &tuples {
        let r = b.k_report(v, ex)?;
        k_ok &= r.all_pass();
        ks.push(json!({ "bound": r.bound.to_string(), "index": r.index, "tuple": v }));
    }
    report
        .check("bridge.k_subgroups", k_ok, json!({ "kernels": ks }))
        .caps(json!({ "tuple_length": cli.weightcap }))
        .bound(json!("|G : K(v)| <= m^(n^k)"));
    let caps = ATowerCaps {
        weight_cap: cli.weightcap,
        levels: cli.levels,
        budget: cli.budget,
    };
    let caps_json = serde_json::to_value(caps)?;
    let tower = match b.a_tower(caps, ex) {
        Ok(t) => t,
        Err(e) => {
            report
                .push("bridge.a_tower", Status::Inconclusive, json!({ "unsupported": e.to_string() }))
                .caps(caps_json);
            return Ok(());
        }
    };
    let checks = b.tower_checks(&tower, ex)?;
    report
        .check(
            "bridge.a_tower",
            checks.nesting && checks.phi_invariant && checks.h_invariant && checks.reps_h_closed,
            json!({ "orders": checks.orders, "representatives": checks.representatives }),
        )
        .caps(caps_json.clone());
    report
        .check(
            "bridge.induction_parameter",
            checks.nerav,
            json!({ "parameters": checks.parameters }),
        )
        .caps(caps_json);
    Ok(())
}

fn generate_cmd(cli: &Cli, mix: bool, cmd: &GenerateCmd) -> Result<Output> {
    let family = match cmd {
        GenerateCmd::Heisenberg { shape, p, shift } => Family::Heisenberg {
            frobenius: shape.shape()?.into(),
            p: *p,
            shift: *shift,
        },
        GenerateCmd::FreeNilpotent {
            shape,
            orbits,
            class_cap,
            c,
            kill_zero,
            p,
        } => Family::FreeNilpotent {
            c: *c,
            class_cap: *class_cap,
            frobenius: shape.shape()?.into(),
            kill_zero_component: *kill_zero,
            orbits: *orbits,
            p: *p,
        },
        GenerateCmd::DirectSum {
            shape,
            copies,
            pad_class,
            class_cap,
        } => match pad_class {
            Some(c) => Family::padded_sum(shape.shape()?, *c, *copies, *class_cap),
            None => Family::heisenberg_sum(shape.shape()?, *copies, cli.seed),
        },
        GenerateCmd::Unitriangular { shape, p } => {
            let a = unitriangular_action(*p, shape.shape()?)?;
            return Ok(Output {
                text: GroupInstanceFile::from_action(&a).to_json(),
                failed: false,
            });
        }
        GenerateCmd::ElementaryAbelian { shape, p } => {
            let a = elementary_abelian_action(*p, shape.shape()?)?;
            return Ok(Output {
                text: GroupInstanceFile::from_action(&a).to_json(),
                failed: false,
            });
        }
    };
    let mut g = generate(&family, exec(cli))?;
    if mix {
        g = scramble(&g, cli.seed);
    }
    let info = GeneratorInfo {
        family,
        scramble: mix,
        seed: cli.seed,
    };
    Ok(Output {
        text: g.to_file(Some(info)).to_json(),
        failed: false,
    })
}
