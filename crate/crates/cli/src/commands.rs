use std::fmt::Write as _;
use std::time::Instant;

use acm_core::arrangement::{arrangement_dims, cm_check_arrangement, CertifyPolicy, CmCheckOptions};
use acm_core::certify::{
    freeness_certificate, verify_certificate, verify_certificate_with, CertifyOptions, FreenessCertificate,
    GeneratorChoice,
};
use acm_core::classify::{classify, classify_with_conjectures, Classification, Target};
use acm_core::cm::cm_verdict_subalgebra;
use acm_core::report::Report;
use acm_core::rng::{self, random_rational_avoiding};
use acm_core::scalar::{format_rational, parse_rational};
use acm_core::series::{closed_form_hrs, expand};
use acm_core::subalgebra::{module_dims, subalgebra_dims, GeneratorFamily};
use acm_core::sweep::{bset_report, default_grid, format_set, line_report, parameter_sweep, SweepFamily, SweepOptions};
use acm_core::verdict::{Certainty, RuleRef, Status, Verdict};
use acm_core::{AcmError, Field, Partition, Weights};
use anyhow::{bail, Context, Result};
use num_rational::BigRational;
use num_traits::One;
use serde_json::{json, Value};

use crate::output::{denominator, emit, list, series};
use crate::{
    BsetArgs, ClassifyArgs, CmCheckArgs, Command, Common, FamilyArgs, FreenessArgs, HilbertCmd, ModuleArgs,
    SweepArgs, VerifyArgs,
};

const SAMPLED_NOTE: &str = "evidence at sampled rational parameter values, not a proof for generic parameters";

pub fn run(cmd: Command) -> Result<()> {
    match cmd {
        Command::Hilbert(h) => hilbert(h),
        Command::CmCheck(a) => cm_check(a),
        Command::Classify(a) => classify_cmd(a),
        Command::Sweep(a) => sweep(a),
        Command::Freeness(a) => freeness(a),
        Command::VerifyCertificate(a) => verify(a),
        Command::ModuleHilbert(a) => module_hilbert(a),
        Command::BsetReport(a) => bset(a),
    }
}

fn field_of(common: &Common) -> Result<Field> {
    Ok(match &common.field {
        Some(s) => s.parse()?,
        None => Field::prime(rng::default_prime()?)?,
    })
}

fn seed_of(seed: Option<u64>) -> Result<u64> {
    let s = match seed {
        Some(s) => s,
        None => rng::seed_or(rng::DEFAULT_SEED)?,
    };
    log::info!("seed {s}");
    Ok(s)
}

fn partition(s: &str) -> Result<Partition> {
    s.parse::<Partition>().with_context(|| format!("bad partition `{s}`"))
}

fn rational(name: &str, v: &Option<String>) -> Result<BigRational> {
    let s = v.as_ref().ok_or_else(|| AcmError::InvalidInput(format!("--{name} is required")))?;
    Ok(parse_rational(s)?)
}

fn count(name: &str, v: Option<usize>) -> Result<usize> {
    Ok(v.ok_or_else(|| AcmError::InvalidInput(format!("--{name} is required")))?)
}

fn policy(s: &str) -> Result<CertifyPolicy> {
    Ok(s.parse()?)
}

/// Build the Newton family described on the command line, with a display name.
fn family(args: &FamilyArgs) -> Result<(GeneratorFamily, String)> {
    let one = BigRational::one();
    let fr = format_rational;
    Ok(match args.family.as_str() {
        "slice-newton" => {
            let (a, b) = (rational("a", &args.a)?, rational("b", &args.b)?);
            (GeneratorFamily::slice_newton(&a, &b)?, format!("R_{{{},{}}}", fr(&a), fr(&b)))
        }
        "bplus1" => {
            let b = rational("b", &args.b)?;
            (GeneratorFamily::slice_newton(&(&b + &one), &b)?, format!("R_{{b+1,b}}[b={}]", fr(&b)))
        }
        "bplus1-1" => {
            let b = rational("b", &args.b)?;
            let w = Weights::new(vec![&b + &one, b.clone(), one.clone(), one.clone()]);
            (GeneratorFamily::newton(w, true)?, format!("Y_{{b+1,b,1,1}}[b={}]", fr(&b)))
        }
        "equal" => {
            let a = rational("a", &args.a)?;
            (GeneratorFamily::slice_newton(&a, &a)?, format!("R_{{a,a}}[a={}]", fr(&a)))
        }
        "deformed" => {
            let (r, s, a) = (count("r", args.r)?, count("s", args.s)?, rational("a", &args.a)?);
            (GeneratorFamily::deformed(r, s, &a)?, format!("Lambda_{{{r},{s},{}}}", fr(&a)))
        }
        "newton" => {
            let w: Weights = args
                .weights
                .as_deref()
                .ok_or_else(|| AcmError::InvalidInput("--weights is required".into()))?
                .parse()?;
            let name = format!("newton{}{}", if args.slice { "-slice" } else { "" }, w);
            (GeneratorFamily::newton(w, args.slice)?, name)
        }
        other => bail!(AcmError::InvalidInput(format!(
            "unknown family `{other}` (slice-newton, bplus1, bplus1-1, equal, deformed, newton)"
        ))),
    })
}

fn hilbert_text(target: &str, h: &acm_core::series::HilbertData) -> String {
    let mut t = String::new();
    let _ = writeln!(t, "target: {target}");
    let _ = writeln!(t, "field: {}", h.field);
    let _ = writeln!(t, "dims: {}", list(&h.dims));
    let _ = writeln!(
        t,
        "hilbert series: ({}) / {} + O(t^{})",
        series(&h.trimmed_numerator()),
        denominator(&h.denominator_degrees),
        h.dims.len()
    );
    let _ = writeln!(t, "numerator: {}", list(&h.trimmed_numerator()));
    t
}

fn hilbert(cmd: HilbertCmd) -> Result<()> {
    match cmd {
        HilbertCmd::Arrangement { lambda, max_deg, common } => {
            let lambda = partition(&lambda)?;
            let field = field_of(&common)?;
            let t = Instant::now();
            let h = arrangement_dims(&lambda, max_deg, field)?;
            log::info!("computed in {:.2?}", t.elapsed());
            let target = format!("X_{lambda}");
            let report = Report::new(&target).with_lambda(&lambda).with_hilbert(&h);
            emit(common.json.as_deref(), &report.to_json(), &hilbert_text(&target, &h))
        }
        HilbertCmd::Invariants {
            lambda,
            slice,
            max_deg,
            common,
        } => {
            let lambda = partition(&lambda)?;
            let field = field_of(&common)?;
            let fam = GeneratorFamily::invariants(&lambda, slice)?;
            let h = subalgebra_dims(&fam, max_deg, field)?;
            let target = format!("X_{lambda}/S_n{}", if slice { " (P_1=0)" } else { "" });
            let report = Report::new(&target).with_lambda(&lambda).with_hilbert(&h);
            emit(common.json.as_deref(), &report.to_json(), &hilbert_text(&target, &h))
        }
        HilbertCmd::Subalgebra { family: fa, max_deg, common } => {
            let field = field_of(&common)?;
            let (fam, target) = family(&fa)?;
            let h = subalgebra_dims(&fam, max_deg, field)?;
            let report = Report::new(&target).with_hilbert(&h);
            emit(common.json.as_deref(), &report.to_json(), &hilbert_text(&target, &h))
        }
        HilbertCmd::Deformed {
            r,
            s,
            a,
            max_deg,
            compare_closed_form,
            seed,
            common,
        } => {
            let field = field_of(&common)?;
            let sf = SweepFamily::Deformed { r, s };
            let (a, seed) = match a {
                Some(a) => (parse_rational(&a)?, None),
                None => {
                    let seed = seed_of(seed)?;
                    let mut g = rng::rng(seed);
                    (random_rational_avoiding(&mut g, |x| sf.is_degenerate(x)), Some(seed))
                }
            };
            let fam = sf.family(&a)?;
            let h = subalgebra_dims(&fam, max_deg, field)?;
            let target = format!("Lambda_{{{r},{s},{}}}", format_rational(&a));
            let mut text = hilbert_text(&target, &h);
            let mut report = Report::new(&target).with_hilbert(&h);
            if let Some(seed) = seed {
                let _ = writeln!(text, "seed: {seed}");
                report = report.with_seed(seed).with_note(SAMPLED_NOTE);
            }
            if compare_closed_form {
                let closed = closed_form_hrs(r, s, max_deg as usize);
                let agree = closed.iter().zip(&h.dims).all(|(&c, &d)| c == d as i64);
                let _ = writeln!(text, "closed form: {}", list(&closed));
                let _ = writeln!(text, "agrees with closed form: {agree}");
                report = report.with_certificate(json!({"closed_form": closed, "agrees": agree}));
            }
            emit(common.json.as_deref(), &report.to_json(), &text)
        }
    }
}

fn verdict_line(v: &Verdict) -> String {
    let mut s = format!("{} ({})", v.status, v.certainty);
    if let Some(r) = v.rules.first() {
        let _ = write!(s, "\n  rule {}: {}", r.id, r.citation);
    }
    s
}

fn cm_check(a: CmCheckArgs) -> Result<()> {
    let field = field_of(&a.common)?;
    let pol = policy(&a.certify)?;
    if let Some(l) = &a.lambda {
        let lambda = partition(l)?;
        let seed = seed_of(a.seed)?;
        let mut opts = CmCheckOptions::new(&lambda);
        opts.trials = a.trials;
        if let Some(d) = a.max_deg {
            opts.max_deg = d;
        }
        opts.field = field;
        opts.policy = pol;
        opts.seed = seed;
        let t = Instant::now();
        let rep = cm_check_arrangement(&lambda, &opts)?;
        log::info!("decided in {:.2?}", t.elapsed());
        let target = format!("X_{lambda}");
        let mut text = format!("target: {target}\nsubspaces: {}\n", rep.subspaces);
        for run in &rep.runs {
            let _ = writeln!(
                text,
                "[{}] numerator over {}: {}",
                run.field,
                denominator(&run.hilbert.denominator_degrees),
                list(&run.hilbert.trimmed_numerator())
            );
            for q in &run.quotient_trials {
                let _ = writeln!(text, "[{}] quotient by random linear forms: {}", run.field, list(q));
            }
        }
        let _ = writeln!(text, "verdict: {}", verdict_line(&rep.verdict));
        let _ = writeln!(text, "seed: {seed}");
        let report = Report::new(&target)
            .with_lambda(&lambda)
            .with_hilbert(&rep.runs[0].hilbert)
            .with_verdict(rep.verdict.clone())
            .with_seed(seed)
            .with_certificate(json!({"subspaces": rep.subspaces, "runs": rep.runs}));
        return emit(a.common.json.as_deref(), &report.to_json(), &text);
    }
    let fa = FamilyArgs {
        family: a
            .family
            .clone()
            .ok_or_else(|| AcmError::InvalidInput("give --lambda or --family".into()))?,
        a: a.a.clone(),
        b: a.b.clone(),
        r: a.r,
        s: a.s,
        weights: a.weights.clone(),
        slice: a.slice,
    };
    let (fam, target) = family(&fa)?;
    let v = cm_verdict_subalgebra(&fam, a.max_deg, pol, field)?;
    let mut text = hilbert_text(&target, &v.hilbert);
    let _ = writeln!(text, "generic rank: {}", v.bezout_rank);
    let _ = writeln!(text, "verdict: {}", verdict_line(&v.verdict));
    let mut report = Report::new(&target).with_hilbert(&v.hilbert).with_verdict(v.verdict.clone());
    if let Some(c) = v.certificates.first() {
        report = report.with_certificate(c.to_json());
    }
    emit(a.common.json.as_deref(), &report.to_json(), &text)
}

fn classification_reports(c: &Classification) -> Value {
    let one = |t: Target| {
        let trace: Vec<_> = c.trace.iter().filter(|e| e.target == t).collect();
        let mut r = Report::new(format!("{}{}", "X_", c.lambda) + if t == Target::Quotient { "/S_n" } else { "" })
            .with_lambda(&c.lambda)
            .with_verdict(c.verdict(t).clone());
        r.trace = Some(serde_json::to_value(trace).expect("trace serializes"));
        r.notes = c.conjectures.clone();
        r.to_json()
    };
    Value::Array(vec![one(Target::Arrangement), one(Target::Quotient)])
}

fn classify_cmd(a: ClassifyArgs) -> Result<()> {
    let lambda = partition(&a.lambda)?;
    let c = if a.conjectures {
        classify_with_conjectures(&lambda)?
    } else {
        classify(&lambda)?
    };
    let mut text = format!("lambda: {lambda}\n");
    for t in [Target::Arrangement, Target::Quotient] {
        let v = c.verdict(t);
        let _ = writeln!(text, "{t}: {}", verdict_line(v));
    }
    let _ = writeln!(text, "trace:");
    for e in &c.trace {
        let _ = writeln!(text, "  {:<22} {:<6} {:<14} {}", e.rule, e.target.to_string(), e.input.to_string(), e.outcome);
    }
    for n in &c.conjectures {
        let _ = writeln!(text, "{n}");
    }
    emit(a.json.as_deref(), &classification_reports(&c), &text)
}

fn sweep(a: SweepArgs) -> Result<()> {
    let field = field_of(&a.common)?;
    let seed = seed_of(a.seed)?;
    match a.family.as_str() {
        "deformed" => {
            let (r, s) = (count("r", a.r)?, count("s", a.s)?);
            let fam = SweepFamily::Deformed { r, s };
            let candidates = if a.candidates == "auto" {
                default_grid(r, s)
            } else {
                a.candidates
                    .split(',')
                    .map(parse_rational)
                    .collect::<std::result::Result<Vec<_>, _>>()?
            };
            let opts = SweepOptions {
                max_deg: a.max_deg,
                seed,
                samples: a.samples,
                policy: policy(&a.certify)?,
                field,
            };
            let rep = parameter_sweep(fam, &candidates, &opts)?;
            let drops: Vec<BigRational> = rep.drop_set().into_iter().collect();
            let mut text = format!("family: {fam}\nfields: {}\n", list(&rep.fields));
            let _ = writeln!(text, "generic dims: {}", list(&rep.generic_dims));
            for c in rep.candidates.iter().filter(|c| c.drop_degree.is_some()) {
                let _ = writeln!(
                    text,
                    "drop at a={} from degree {}: {}",
                    format_rational(&c.value),
                    c.drop_degree.unwrap(),
                    list(&c.dims)
                );
            }
            let _ = writeln!(text, "drop set: {}", format_set(&drops));
            if rep.unstable {
                let _ = writeln!(text, "warning: random samples disagreed; generic dims are the coordinatewise maximum");
            }
            let _ = writeln!(text, "note: {SAMPLED_NOTE}");
            let _ = writeln!(text, "seed: {seed}");
            emit(a.common.json.as_deref(), &serde_json::to_value(&rep)?, &text)
        }
        "slice-newton-line" => {
            if a.line.replace(' ', "") != "a=b+1" {
                bail!(AcmError::InvalidInput(format!("unsupported line `{}`; only a=b+1", a.line)));
            }
            let rep = line_report(a.points, a.max_deg, seed, field)?;
            let (gen_top, line_top) = rep.top_coefficients();
            let d = a.max_deg;
            let mut text = String::new();
            for ((p, q), n) in rep.generic_points.iter().zip(&rep.generic_numerators) {
                let _ = writeln!(text, "generic (a,b)=({},{}): numerator {}", format_rational(p), format_rational(q), list(n));
            }
            for (b, n) in rep.line_points.iter().zip(&rep.line_numerators) {
                let _ = writeln!(text, "line b={}: numerator {}", format_rational(b), list(n));
            }
            let _ = writeln!(text, "coefficient of t^{d}: generic {} ; on a=b+1 {}", list(&gen_top), list(&line_top));
            let _ = writeln!(text, "note: {SAMPLED_NOTE}");
            let _ = writeln!(text, "seed: {seed}");
            emit(a.common.json.as_deref(), &serde_json::to_value(&rep)?, &text)
        }
        other => bail!(AcmError::InvalidInput(format!(
            "unknown sweep family `{other}` (deformed, slice-newton-line)"
        ))),
    }
}

fn certificate_text(target: &str, cert: &FreenessCertificate) -> String {
    let mut t = format!("target: {target}\nfield: {}\n", cert.field);
    let gens: Vec<String> = cert.generators.iter().map(|g| g.to_string()).collect();
    let params: Vec<String> = cert.parameters.iter().map(|i| format!("P{i}")).collect();
    let _ = writeln!(t, "parameters: {}", params.join(", "));
    let _ = writeln!(t, "generators: {}", gens.join(", "));
    let _ = writeln!(t, "rank: {} (generic rank {})", cert.rank(), cert.bezout_rank);
    let degs: Vec<u32> = cert.parameters.clone();
    let _ = writeln!(t, "hilbert series: ({}) / {}", series(&cert.numerator()), denominator(&degs));
    for (v, d) in cert.annihilator_degrees() {
        let _ = writeln!(t, "annihilator of {v}: degree {d}");
    }
    let _ = writeln!(t, "recursion degree: {}", cert.recursion_degree);
    let _ = writeln!(
        t,
        "witnesses: {} memberships, {} products",
        cert.memberships.len(),
        cert.closure.len()
    );
    t
}

fn freeness(a: FreenessArgs) -> Result<()> {
    let field = field_of(&a.common)?;
    let (fam, target) = family(&a.family)?;
    let opts = CertifyOptions {
        generators: a.gens.parse::<GeneratorChoice>()?,
        ..CertifyOptions::default()
    };
    let t = Instant::now();
    let cert = freeness_certificate(&fam, field, &opts)?;
    log::info!("certificate built in {:.2?}", t.elapsed());
    let t = Instant::now();
    let check = verify_certificate(&cert, a.check_up_to)?;
    log::info!("certificate verified in {:.2?}", t.elapsed());
    let certainty = if field == Field::Rational {
        Certainty::ComputedCertified
    } else {
        Certainty::ComputedProbable
    };
    let verdict = Verdict::new(
        Status::Cm,
        certainty,
        vec![RuleRef::new(
            "freeness-certificate",
            format!("free of rank {} over the parameter subalgebra; certificate verified", cert.rank()),
        )],
    );
    let mut text = certificate_text(&target, &cert);
    let _ = writeln!(
        text,
        "verified: {} annihilators, recursion at {} indices, {} witnesses",
        check.annihilators,
        check.recursion_checked.len(),
        check.witnesses
    );
    let _ = writeln!(text, "verdict: {}", verdict_line(&verdict));
    let mut report = Report::new(&target)
        .with_verdict(verdict)
        .with_certificate(cert.to_json());
    report.field = Some(field);
    report.numerator = Some(cert.numerator());
    report.denominator_degrees = Some(cert.parameters.clone());
    emit(a.common.json.as_deref(), &report.to_json(), &text)
}

fn verify(a: VerifyArgs) -> Result<()> {
    let raw = std::fs::read_to_string(&a.input).with_context(|| format!("reading {}", a.input.display()))?;
    let v: Value = serde_json::from_str(&raw).map_err(|e| AcmError::Parse(e.to_string()))?;
    let body = if v.get("certificate").is_some() { &v["certificate"] } else { &v };
    let cert = FreenessCertificate::from_json(body)?;
    let check = verify_certificate_with(&cert, a.check_up_to, &a.spot)?;
    let text = format!(
        "{}verified: {} annihilators, recursion at n in {}, {} witnesses\n",
        certificate_text(&cert.family.to_string(), &cert),
        check.annihilators,
        list(&check.recursion_checked),
        check.witnesses
    );
    emit(None, &Value::Null, &text)
}

fn module_hilbert(a: ModuleArgs) -> Result<()> {
    let field = field_of(&a.common)?;
    let beta = parse_rational(&a.beta)?;
    let h = module_dims(&beta, a.max_deg, field)?;
    let target = format!("M[beta={}]", format_rational(&beta));
    let mut text = hilbert_text(&target, &h);
    let q1: i64 = h.numerator.iter().sum();
    let rank = 12;
    let _ = writeln!(text, "q(1) through degree {}: {q1}", a.max_deg);
    if q1 > rank {
        let _ = writeln!(text, "q(1) = {q1} > {rank} = rank of the module, so it is not free over P2,P3");
    }
    let check = expand(&h.numerator, &h.denominator_degrees, a.max_deg as usize);
    debug_assert!(check.iter().zip(&h.dims).all(|(&c, &d)| c == d as i64));
    let report = Report::new(&target)
        .with_hilbert(&h)
        .with_certificate(json!({"q1": q1, "rank": rank}));
    emit(a.common.json.as_deref(), &report.to_json(), &text)
}

fn bset(a: BsetArgs) -> Result<()> {
    let field = field_of(&a.common)?;
    let seed = seed_of(a.seed)?;
    let opts = SweepOptions {
        max_deg: a.max_deg,
        seed,
        samples: a.samples,
        policy: policy(&a.certify)?,
        field,
    };
    let rep = bset_report(a.r, a.s, &opts)?;
    let mut text = format!("(r,s) = ({},{})\n", a.r, a.s);
    let _ = writeln!(text, "predicted bad set: {}", format_set(&rep.predicted));
    let _ = writeln!(text, "observed drops: {}", format_set(&rep.observed));
    let _ = writeln!(text, "drops at values known to be CM: {}", format_set(&rep.cm_drops));
    let _ = writeln!(text, "agrees: {}", rep.agrees);
    let _ = writeln!(text, "note: {SAMPLED_NOTE}");
    let _ = writeln!(text, "seed: {seed}");
    emit(a.common.json.as_deref(), &serde_json::to_value(&rep)?, &text)
}
