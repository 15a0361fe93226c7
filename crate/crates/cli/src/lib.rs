//! Job runner behind the `tiltweights` binary.
//!
//! A [`JobSpec`] names a Coxeter system, a finite truncation and a task; [`run`]
//! computes the requested table and renders it. Rendering is a pure function
//! of the computed objects, so a cached table and a fresh one print the same
//! bytes.

pub mod cache;

use std::path::PathBuf;
use std::sync::Arc;

use serde_json::{json, Map, Value};
use tilting_core::coxeter::CoxeterSystem;
use tilting_core::tilting::{self, system_json, PushforwardResult};
use tilting_core::{
    CoxeterDescriptor, Element, Hecke, LaurentPoly, OrderIdeal, ParabolicData, WeightMatrix, WeightVector,
};

use cache::{CacheKey, Lookup, TableCache};

/// Uniqueness mutations are only run on ideals of at most this size.
pub const MUTATION_IDEAL_LIMIT: usize = 30;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] tilting_core::Error),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Core(tilting_core::Error::InfiniteTruncation(_)) => "infinite_truncation",
            CliError::Core(tilting_core::Error::GeneratorOutOfRange { .. }) => "generator_out_of_range",
            CliError::Core(tilting_core::Error::InvalidWord(_)) => "invalid_word",
            CliError::Core(_) => "computation",
            CliError::Usage(_) => "usage",
            CliError::Io(_) => "io",
        }
    }

    /// Machine-readable record written to stderr.
    pub fn record(&self) -> Value {
        json!({ "error": self.kind(), "message": self.to_string() })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Task {
    Kl,
    Tilting,
    Ic,
    Invert,
    Push,
    Verify,
}

impl Task {
    pub fn name(self) -> &'static str {
        match self {
            Task::Kl => "kl",
            Task::Tilting => "tilting",
            Task::Ic => "ic",
            Task::Invert => "invert",
            Task::Push => "push",
            Task::Verify => "verify",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Truncation {
    /// All elements of length at most the bound.
    MaxLength(usize),
    /// The Bruhat interval below a word.
    Ideal(String),
    /// The whole group; finite types only.
    Full,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Parabolic {
    /// Every subset (every proper subset for affine types).
    All,
    /// Generator labels.
    Labels(Vec<usize>),
}

#[derive(Debug, Clone)]
pub struct JobSpec {
    pub system: CoxeterDescriptor,
    pub truncation: Truncation,
    pub task: Task,
    pub pair: Option<(String, String)>,
    pub top: Option<String>,
    pub parabolic: Option<Parabolic>,
    pub format: Format,
    pub cache_dir: Option<PathBuf>,
}

impl JobSpec {
    pub fn new(system: CoxeterDescriptor, truncation: Truncation, task: Task) -> Self {
        JobSpec {
            system,
            truncation,
            task,
            pair: None,
            top: None,
            parabolic: None,
            format: Format::Json,
            cache_dir: None,
        }
    }
}

/// What a job produced: bytes for stdout, notes for stderr and the exit code
/// (0 success, 1 verification failure).
#[derive(Debug, Clone)]
pub struct Outcome {
    pub exit_code: i32,
    pub stdout: String,
    pub notes: Vec<String>,
}

/// Parses `2,-1;-1,2` (rows separated by `;`).
pub fn parse_cartan(s: &str) -> Result<Vec<Vec<i64>>, CliError> {
    s.split(';')
        .map(|row| {
            row.split(',')
                .map(|x| x.trim().parse::<i64>().map_err(|_| CliError::Usage(format!("bad Cartan entry {x:?}"))))
                .collect()
        })
        .collect()
}

/// Parses `all`, `none` or a comma-separated list of generator labels.
pub fn parse_parabolic(s: &str) -> Result<Parabolic, CliError> {
    match s.trim() {
        "all" => Ok(Parabolic::All),
        "" | "none" => Ok(Parabolic::Labels(Vec::new())),
        list => list
            .split(',')
            .map(|x| x.trim().parse().map_err(|_| CliError::Usage(format!("bad generator label {x:?}"))))
            .collect::<Result<_, _>>()
            .map(Parabolic::Labels),
    }
}

/// Accepts two words, or one argument of the form `x;y`.
pub fn parse_pair(values: &[String]) -> Result<(String, String), CliError> {
    match values {
        [x, y] => Ok((x.clone(), y.clone())),
        [one] => match one.split_once(';') {
            Some((x, y)) => Ok((x.to_owned(), y.to_owned())),
            None => Err(CliError::Usage(format!("--pair expects two words or \"x;y\", got {one:?}"))),
        },
        _ => Err(CliError::Usage("--pair expects two words".into())),
    }
}

struct Context {
    hecke: Hecke,
    ideal: OrderIdeal,
    truncation_key: Value,
}

impl Context {
    fn sys(&self) -> &CoxeterSystem {
        self.hecke.system()
    }
}

fn resolve(job: &JobSpec) -> Result<Context, CliError> {
    let sys = Arc::new(CoxeterSystem::new(job.system.clone())?);
    let (ideal, truncation_key) = match &job.truncation {
        Truncation::MaxLength(n) => (sys.enumerate_ball(*n), json!({ "max_length": n })),
        Truncation::Ideal(word) => {
            let w = sys.parse_word(word)?;
            (sys.enumerate_ideal(w), json!({ "ideal": sys.format_word(w) }))
        }
        Truncation::Full => (sys.enumerate_all()?, json!("full")),
    };
    Ok(Context { hecke: Hecke::new(sys), ideal, truncation_key })
}

fn element_in(ctx: &Context, word: &str) -> Result<Element, CliError> {
    let w = ctx.sys().parse_word(word)?;
    if !ctx.ideal.contains(w) {
        return Err(CliError::Usage(format!("{} is outside the truncation", ctx.sys().format_word(w))));
    }
    Ok(w)
}

fn subsets(ctx: &Context, p: &Parabolic) -> Result<Vec<Vec<usize>>, CliError> {
    let sys = ctx.sys();
    match p {
        Parabolic::All => Ok(tilting::all_parabolic_subsets(sys)),
        Parabolic::Labels(labels) => {
            let mut out = Vec::with_capacity(labels.len());
            for &l in labels {
                let i = l.checked_sub(sys.first_generator()).filter(|&i| i < sys.rank());
                out.push(i.ok_or(tilting_core::Error::GeneratorOutOfRange { index: l as i64, rank: sys.rank() })?);
            }
            out.sort_unstable();
            out.dedup();
            if !sys.is_finite() && out.len() == sys.rank() {
                return Err(CliError::Usage(
                    "the full generating set of an affine group has no finite parabolic".into(),
                ));
            }
            Ok(vec![out])
        }
    }
}

fn reject(cond: bool, msg: &str) -> Result<(), CliError> {
    if cond {
        Err(CliError::Usage(msg.into()))
    } else {
        Ok(())
    }
}

pub fn run(job: &JobSpec) -> Result<Outcome, CliError> {
    reject(job.pair.is_some() && job.task != Task::Kl, "--pair only applies to kl")?;
    reject(
        job.parabolic.is_some() && !matches!(job.task, Task::Push | Task::Verify),
        "--parabolic only applies to push and verify",
    )?;
    reject(job.top.is_some() && matches!(job.task, Task::Kl | Task::Verify), "--top does not apply to this task")?;
    let ctx = resolve(job)?;
    let mut notes = Vec::new();
    let (exit_code, stdout) = match job.task {
        Task::Kl if job.pair.is_some() => (0, kl_pair(&ctx, job)?),
        Task::Push => (0, push(&ctx, job)?),
        Task::Verify => verify(&ctx, job)?,
        _ if job.top.is_some() => (0, single_column(&ctx, job)?),
        _ => {
            let table = table(&ctx, job, &mut notes)?;
            (0, render_table(ctx.sys(), &table, job.format))
        }
    };
    Ok(Outcome { exit_code, stdout, notes })
}

fn compute_table(ctx: &Context, task: Task) -> Result<WeightMatrix, CliError> {
    let (h, ideal) = (&ctx.hecke, &ctx.ideal);
    Ok(match task {
        Task::Kl => {
            let columns = ideal.iter().map(|y| (*h.kl_column(y)).clone()).collect();
            WeightMatrix::from_columns(ideal.clone(), columns)
        }
        Task::Tilting => tilting::tilting_matrix(h, ideal)?,
        Task::Ic => tilting::ic_matrix(h, ideal)?,
        Task::Invert => tilting::tilting_matrix_by_inversion(h, ideal)?,
        Task::Push | Task::Verify => unreachable!("not a table task"),
    })
}

/// Computes a table, going through the cache when one is configured.
fn table(ctx: &Context, job: &JobSpec, notes: &mut Vec<String>) -> Result<WeightMatrix, CliError> {
    let Some(dir) = &job.cache_dir else {
        return compute_table(ctx, job.task);
    };
    let cache = TableCache::new(dir);
    let key = CacheKey::new(ctx.sys(), ctx.truncation_key.clone(), job.task.name());
    match cache.load(ctx.sys(), &key) {
        Lookup::Hit(m) => {
            notes.push(format!("cache hit: {}", key.digest()));
            return Ok(m);
        }
        Lookup::Miss => {}
        Lookup::Corrupt(reason) => {
            notes.push(format!("warning: cache entry {} rejected ({reason}); recomputing", key.digest()));
        }
    }
    let m = compute_table(ctx, job.task)?;
    cache.store(ctx.sys(), &key, &m)?;
    notes.push(format!("cache store: {}", key.digest()));
    Ok(m)
}

pub fn render_table(sys: &CoxeterSystem, m: &WeightMatrix, format: Format) -> String {
    match format {
        Format::Json => pretty(&m.to_json(sys)),
        Format::Csv => m.to_csv(sys),
        Format::Text => m.to_text(sys),
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn poly_json(p: &LaurentPoly) -> Value {
    serde_json::to_value(p).expect("serializable")
}

/// Renders a polynomial in `q` lowest degree first, as `1 + q`.
fn display_ascending(p: &LaurentPoly, var: char) -> String {
    let mut parts = Vec::new();
    for (e, c) in p.terms() {
        let mono = match e {
            0 => String::new(),
            1 => var.to_string(),
            e => format!("{var}^{e}"),
        };
        let one = *c == 1.into() || *c == (-1).into();
        let body = if mono.is_empty() || !one { format!("{}{mono}", c.magnitude()) } else { mono };
        let neg = *c < 0.into();
        parts.push((neg, body));
    }
    let mut out = String::new();
    for (i, (neg, body)) in parts.into_iter().enumerate() {
        match (i, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        out.push_str(&body);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

fn kl_pair(ctx: &Context, job: &JobSpec) -> Result<String, CliError> {
    let (xs, ys) = job.pair.as_ref().expect("checked by caller");
    let sys = ctx.sys();
    let (x, y) = (sys.parse_word(xs)?, sys.parse_word(ys)?);
    let h = ctx.hecke.kl_h(x, y);
    let p = ctx.hecke.kl_p(x, y)?;
    let mu = ctx.hecke.mu(x, y);
    Ok(match job.format {
        Format::Json => pretty(&json!({
            "system": system_json(sys),
            "x": sys.format_word(x),
            "y": sys.format_word(y),
            "h": poly_json(&h),
            "P": poly_json(&p),
            "mu": mu.to_string(),
        })),
        Format::Csv => format!(
            "x,y,h,P,mu\n\"{}\",\"{}\",\"{}\",\"{}\",\"{}\"\n",
            sys.format_word(x),
            sys.format_word(y),
            h,
            display_ascending(&p, 'q'),
            mu
        ),
        Format::Text => format!(
            "x = {}\ny = {}\nh = {}\nP = {}\nmu = {}\n",
            sys.display(x),
            sys.display(y),
            h,
            display_ascending(&p, 'q'),
            mu
        ),
    })
}

fn render_vector(sys: &CoxeterSystem, top: Element, v: &WeightVector, format: Format) -> String {
    let mut keys = v.support();
    sys.sort_elements(&mut keys);
    match format {
        Format::Json => {
            pretty(&json!({ "system": system_json(sys), "top": sys.format_word(top), "vector": v.to_json(sys) }))
        }
        Format::Csv => {
            let mut out = String::from("gamma,polynomial\n");
            for g in keys {
                out.push_str(&format!("\"{}\",\"{}\"\n", sys.format_word(g), v.get(g)));
            }
            out
        }
        Format::Text => {
            let mut out = format!("[{}]\n", sys.display(top));
            for g in keys {
                out.push_str(&format!("  {}: {}\n", sys.display(g), v.get(g)));
            }
            out
        }
    }
}

fn single_column(ctx: &Context, job: &JobSpec) -> Result<String, CliError> {
    let top = element_in(ctx, job.top.as_deref().expect("checked by caller"))?;
    let (h, ideal) = (&ctx.hecke, &ctx.ideal);
    let v = match job.task {
        Task::Tilting => tilting::tilting_vector(h, top, ideal)?,
        Task::Ic => h.ic_weight_vector(top, ideal),
        Task::Invert => tilting::tilting_matrix_by_inversion(h, ideal)?.column(top).cloned().unwrap_or_default(),
        _ => unreachable!("single columns exist for table tasks only"),
    };
    Ok(render_vector(ctx.sys(), top, &v, job.format))
}

fn push(ctx: &Context, job: &JobSpec) -> Result<String, CliError> {
    let sys = ctx.sys();
    let parabolic = job.parabolic.as_ref().ok_or_else(|| CliError::Usage("push needs --parabolic".into()))?;
    let tops: Vec<Element> = match &job.top {
        Some(w) => vec![element_in(ctx, w)?],
        None => ctx.ideal.elements().to_vec(),
    };
    let mut blocks = Vec::new();
    let mut text = String::new();
    let mut csv = String::from("subset,alpha,coset,polynomial\n");
    for subset in subsets(ctx, parabolic)? {
        let label = tilting::format_subset(sys, &subset);
        let data = ParabolicData::partition(sys, &ctx.ideal, &subset)?;
        let mut cols = Map::new();
        text.push_str(&format!("J = {label}\n"));
        for &a in &tops {
            let r = tilting::pushforward_tilting(&ctx.hecke, a, &data, &ctx.ideal)?;
            match &r {
                PushforwardResult::Zero => {
                    cols.insert(sys.format_word(a), Value::String("zero".into()));
                    text.push_str(&format!("  [{}] zero\n", sys.display(a)));
                }
                PushforwardResult::Tilting(v) => {
                    cols.insert(sys.format_word(a), v.to_json(sys));
                    text.push_str(&format!("  [{}]\n", sys.display(a)));
                    let mut keys = v.support();
                    sys.sort_elements(&mut keys);
                    for g in keys {
                        text.push_str(&format!("    {}: {}\n", sys.display(g), v.get(g)));
                        csv.push_str(&format!(
                            "\"{label}\",\"{}\",\"{}\",\"{}\"\n",
                            sys.format_word(a),
                            sys.format_word(g),
                            v.get(g)
                        ));
                    }
                }
            }
        }
        blocks.push(json!({
            "subset": subset.iter().map(|i| i + sys.first_generator()).collect::<Vec<_>>(),
            "representatives": data.representatives().iter().map(|&w| sys.format_word(w)).collect::<Vec<_>>(),
            "columns": Value::Object(cols),
        }));
    }
    Ok(match job.format {
        Format::Json => pretty(&json!({ "system": system_json(sys), "pushforwards": blocks })),
        Format::Csv => csv,
        Format::Text => text,
    })
}

fn verify(ctx: &Context, job: &JobSpec) -> Result<(i32, String), CliError> {
    let sys = ctx.sys();
    let (h, ideal) = (&ctx.hecke, &ctx.ideal);
    let subsets = subsets(ctx, job.parabolic.as_ref().unwrap_or(&Parabolic::All))?;
    let cv = tilting::cross_validate(h, ideal, &subsets)?;
    let ringel = tilting::ringel_verify(h, ideal)?;
    let mut discrepancies = cv.discrepancies.clone();
    discrepancies.extend(ringel.discrepancies.iter().cloned());
    let mut mutated = 0;
    for a in ideal.iter() {
        let below = sys.enumerate_ideal(a);
        if below.len() <= MUTATION_IDEAL_LIMIT {
            discrepancies.extend(tilting::uniqueness_mutations(h, a, &below)?);
            mutated += 1;
        }
    }
    let passed = discrepancies.is_empty() && ringel.passed();
    let out = match job.format {
        Format::Json => pretty(&json!({
            "system": system_json(sys),
            "ideal_size": ideal.len(),
            "checked_columns": cv.checked_columns,
            "checked_subsets": cv.checked_subsets,
            "mutation_columns": mutated,
            "ringel": {
                "inversion_holds": ringel.inversion_holds,
                "w0_form_holds": ringel.w0_form_holds,
                "diagnostics": {
                    "flag_ic_inverts": ringel.flag_ic_inverts,
                    "sign_pattern_holds": ringel.sign_pattern_holds,
                },
            },
            "passed": passed,
            "discrepancies": discrepancies,
        })),
        Format::Csv => {
            let mut s = String::from("check,alpha,gamma,detail\n");
            for d in &discrepancies {
                s.push_str(&format!(
                    "\"{}\",\"{}\",\"{}\",\"{}\"\n",
                    d.check,
                    d.alpha,
                    d.gamma.as_deref().unwrap_or(""),
                    d.detail.replace('"', "\"\"")
                ));
            }
            s
        }
        Format::Text => {
            let yn = |b: bool| if b { "yes" } else { "no" };
            let mut s = format!(
                "system: {}\nideal size: {}\ncolumns checked: {}\nparabolic subsets checked: {}\nmutation columns: {}\n",
                sys.descriptor().label(),
                ideal.len(),
                cv.checked_columns,
                cv.checked_subsets,
                mutated
            );
            s.push_str(&format!("inversion: {}\n", yn(ringel.inversion_holds)));
            if let Some(w0) = ringel.w0_form_holds {
                s.push_str(&format!("w0 form: {}\n", yn(w0)));
            }
            s.push_str(&format!("diagnostic, flag-side IC inverts: {}\n", yn(ringel.flag_ic_inverts)));
            s.push_str(&format!("diagnostic, sign pattern: {}\n", yn(ringel.sign_pattern_holds)));
            for d in &discrepancies {
                s.push_str(&format!(
                    "discrepancy {} at {} {}: {}\n",
                    d.check,
                    d.alpha,
                    d.gamma.as_deref().unwrap_or("-"),
                    d.detail
                ));
            }
            s.push_str(if passed { "PASS\n" } else { "FAIL\n" });
            s
        }
    };
    Ok((if passed { 0 } else { 1 }, out))
}
