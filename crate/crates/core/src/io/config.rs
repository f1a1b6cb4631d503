use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dynamics::{DampingParams, NlsParams, Splitting, StepScheme, SubstepPolicy, DEFAULT_ATOL, DEFAULT_RTOL};
use crate::error::{Error, Result};
use crate::experiments::{CheckId, EnsembleSpec, GridSpec, InitialData, Scenario, ScenarioKind};

/// Where and how loudly results are written.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OutputSettings {
    pub dir: PathBuf,
    /// 0 prints only the summary, 1 adds one line per check, 2 adds details.
    pub verbosity: u8,
    /// Worker thread limit; `None` uses every core.
    pub threads: Option<usize>,
}

impl Default for OutputSettings {
    fn default() -> Self {
        Self {
            dir: PathBuf::from("out"),
            verbosity: 0,
            threads: None,
        }
    }
}

/// A parsed configuration file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub scenarios: Vec<Scenario>,
    pub output: OutputSettings,
}

const SECTIONS: &[(&str, &[&str])] = &[
    (
        "scenario",
        &[
            "name",
            "kind",
            "t_max",
            "record_every",
            "checks",
            "seeds",
            "deltas",
            "gammas",
            "exploratory",
        ],
    ),
    ("grid", &["dim", "points", "lengths"]),
    ("damping", &["gamma", "alpha", "delta"]),
    ("nls", &["lambda", "sigma", "enabled"]),
    ("scheme", &["dt", "splitting", "substeps", "rtol", "atol"]),
    (
        "initial",
        &["kind", "re", "im", "modes", "amplitude", "seed", "decay", "path"],
    ),
    ("ensemble", &["count", "seed", "alphas", "orders", "dims", "points"]),
    ("output", &["dir", "verbosity", "threads"]),
];

#[derive(Debug)]
struct Entry {
    line: usize,
    value: String,
}

#[derive(Debug, Default)]
struct Section {
    line: usize,
    entries: HashMap<String, Entry>,
}

#[derive(Debug)]
struct Block {
    /// Line of the `[scenario]` header; 0 for the implicit block.
    line: usize,
    sections: HashMap<String, Section>,
}

fn perr(line: usize, key: &str, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        key: key.to_string(),
        message: message.into(),
    }
}

/// Parses the INI-style configuration format.
///
/// Each `[scenario]` header opens a scenario; the `[grid]`, `[damping]`,
/// `[nls]`, `[scheme]`, `[initial]` and `[ensemble]` sections that follow
/// belong to it. Sections that appear before any `[scenario]` header form
/// a single scenario named `main` of kind `run`. `[output]` is global and
/// may appear anywhere, once. Comments start with `#` or `;`.
///
/// ```
/// let cfg = nlsdamp::io::parse_config("[grid]\npoints = 64\n[damping]\ngamma = 1\nalpha = 0.5\n").unwrap();
/// let s = &cfg.scenarios[0];
/// assert_eq!(s.name, "main");
/// assert_eq!(s.damping.delta, 0.0);
/// assert_eq!(s.scheme.dt, 1e-3);
/// ```
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let mut blocks: Vec<Block> = Vec::new();
    let mut output: Option<Section> = None;
    // (block index or None for [output], section name)
    let mut current: Option<(Option<usize>, String)> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split(['#', ';']).next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(rest) = content.strip_prefix('[') {
            let name = rest
                .strip_suffix(']')
                .ok_or_else(|| perr(line, content, "unterminated section header"))?
                .trim()
                .to_ascii_lowercase();
            if !SECTIONS.iter().any(|(s, _)| *s == name) {
                return Err(perr(line, &name, "unknown section"));
            }
            current = Some(match name.as_str() {
                "output" => {
                    if output.is_some() {
                        return Err(perr(line, "output", "section given twice"));
                    }
                    output = Some(Section {
                        line,
                        ..Section::default()
                    });
                    (None, name)
                }
                "scenario" => {
                    blocks.push(Block {
                        line,
                        sections: HashMap::new(),
                    });
                    let b = blocks.len() - 1;
                    blocks[b].sections.insert(
                        name.clone(),
                        Section {
                            line,
                            ..Section::default()
                        },
                    );
                    (Some(b), name)
                }
                _ => {
                    if blocks.is_empty() {
                        blocks.push(Block {
                            line: 0,
                            sections: HashMap::new(),
                        });
                    }
                    let b = blocks.len() - 1;
                    if blocks[b].sections.contains_key(&name) {
                        return Err(perr(line, &name, "section given twice in one scenario"));
                    }
                    blocks[b].sections.insert(
                        name.clone(),
                        Section {
                            line,
                            ..Section::default()
                        },
                    );
                    (Some(b), name)
                }
            });
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| perr(line, content, "expected `key = value`"))?;
        let key = key.trim().to_ascii_lowercase();
        let value = value.trim().to_string();
        let Some((block, section)) = &current else {
            return Err(perr(line, &key, "entry outside of any section"));
        };
        let known = SECTIONS.iter().find(|(s, _)| s == section).map_or(&[][..], |(_, k)| *k);
        if !known.contains(&key.as_str()) {
            return Err(perr(line, &key, format!("unknown key in [{section}]")));
        }
        let target = match block {
            Some(b) => blocks[*b].sections.get_mut(section).expect("section was opened"),
            None => output.as_mut().expect("section was opened"),
        };
        if target.entries.contains_key(&key) {
            return Err(perr(line, &key, "key given twice"));
        }
        target.entries.insert(key, Entry { line, value });
    }

    if blocks.is_empty() {
        return Err(perr(1, "scenario", "configuration defines no scenario"));
    }
    if blocks.len() > 1 && blocks[0].line == 0 {
        return Err(perr(
            blocks[1].line,
            "scenario",
            "sections before the first [scenario] header are only allowed in single-scenario files",
        ));
    }
    let scenarios = blocks.iter().map(build_scenario).collect::<Result<Vec<_>>>()?;
    let output = match &output {
        Some(sec) => build_output(sec)?,
        None => OutputSettings::default(),
    };
    Ok(RunConfig { scenarios, output })
}

/// Reads and parses a configuration file. Relative initial-data paths are
/// resolved against the file's directory.
pub fn load_config(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut cfg = parse_config(&text)?;
    let base = path.parent().unwrap_or(Path::new(""));
    for s in &mut cfg.scenarios {
        if let InitialData::File { path: p } = &mut s.initial {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
    }
    Ok(cfg)
}

/// Typed access to one section's entries.
struct View<'a> {
    section: Option<&'a Section>,
}

impl<'a> View<'a> {
    fn entry(&self, key: &str) -> Option<&'a Entry> {
        self.section.and_then(|s| s.entries.get(key))
    }

    fn line(&self, key: &str) -> usize {
        self.entry(key)
            .map(|e| e.line)
            .or(self.section.map(|s| s.line))
            .unwrap_or(0)
    }

    fn parse<T: FromStr>(&self, key: &str, what: &str) -> Result<Option<T>> {
        match self.entry(key) {
            None => Ok(None),
            Some(e) => e
                .value
                .parse()
                .map(Some)
                .map_err(|_| perr(e.line, key, format!("expected {what}, got `{}`", e.value))),
        }
    }

    fn float(&self, key: &str) -> Result<Option<f64>> {
        let v: Option<f64> = self.parse(key, "a number")?;
        match v {
            Some(x) if !x.is_finite() => Err(perr(self.line(key), key, "value must be finite")),
            _ => Ok(v),
        }
    }

    fn list<T: FromStr>(&self, key: &str, what: &str) -> Result<Option<Vec<T>>> {
        let Some(e) = self.entry(key) else {
            return Ok(None);
        };
        e.value
            .split(',')
            .map(|item| {
                let item = item.trim();
                item.parse()
                    .map_err(|_| perr(e.line, key, format!("expected a list of {what}, bad item `{item}`")))
            })
            .collect::<Result<Vec<T>>>()
            .map(Some)
    }

    fn float_list(&self, key: &str) -> Result<Option<Vec<f64>>> {
        let v: Option<Vec<f64>> = self.list(key, "numbers")?;
        if let Some(xs) = &v {
            if xs.iter().any(|x| !x.is_finite()) {
                return Err(perr(self.line(key), key, "values must be finite"));
            }
        }
        Ok(v)
    }

    fn boolean(&self, key: &str) -> Result<Option<bool>> {
        self.parse(key, "`true` or `false`")
    }

    fn string(&self, key: &str) -> Option<&'a str> {
        self.entry(key).map(|e| e.value.as_str())
    }
}

fn build_scenario(block: &Block) -> Result<Scenario> {
    let view = |name: &str| View {
        section: block.sections.get(name),
    };
    let header = view("scenario");
    let grid = view("grid");
    let damping = view("damping");
    let nls = view("nls");
    let scheme = view("scheme");
    let initial = view("initial");
    let ensemble = view("ensemble");

    let name = match header.string("name") {
        Some(n) => n.to_string(),
        None if block.line == 0 => "main".to_string(),
        None => return Err(perr(block.line, "name", "every [scenario] needs a name")),
    };
    let kind = match header.string("kind") {
        Some(k) => k.parse::<ScenarioKind>().map_err(|m| perr(header.line("kind"), "kind", m))?,
        None => ScenarioKind::Run,
    };

    // grid
    if grid.section.is_none() && kind != ScenarioKind::NashEnsemble {
        return Err(perr(block.line.max(1), "grid", format!("scenario `{name}` has no [grid] section")));
    }
    let points: Vec<usize> = match grid.list("points", "integers")? {
        Some(p) => p,
        None if kind == ScenarioKind::NashEnsemble => vec![8],
        None => return Err(perr(grid.line("points"), "points", "missing; give one count per axis")),
    };
    let dim = match grid.parse::<usize>("dim", "an integer")? {
        Some(d) => d,
        None => points.len(),
    };
    if !(1..=3).contains(&dim) {
        return Err(perr(grid.line("dim"), "dim", format!("dimension must be 1, 2 or 3, got {dim}")));
    }
    let points = broadcast(points, dim, grid.line("points"), "points")?;
    let lengths = broadcast(
        grid.float_list("lengths")?.unwrap_or_else(|| vec![std::f64::consts::TAU]),
        dim,
        grid.line("lengths"),
        "lengths",
    )?;
    let grid_spec = GridSpec { points, lengths };
    grid_spec.build().map_err(|e| perr(grid.line("points"), "points", strip(&e)))?;

    // damping
    let gamma = required_or(&damping, "gamma", kind == ScenarioKind::NashEnsemble, 1.0)?;
    let alpha = required_or(&damping, "alpha", kind == ScenarioKind::NashEnsemble, 1.0)?;
    let delta = damping.float("delta")?.unwrap_or(0.0);
    if gamma < 0.0 {
        return Err(perr(damping.line("gamma"), "gamma", format!("gamma must be >= 0, got {gamma}")));
    }
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(perr(damping.line("alpha"), "alpha", format!("alpha must lie in (0, 1], got {alpha}")));
    }
    if delta < 0.0 {
        return Err(perr(damping.line("delta"), "delta", format!("delta must be >= 0, got {delta}")));
    }
    let damping_params = DampingParams::new(gamma, alpha, delta)?;

    // nonlinearity
    let nls_params = if nls.section.is_some() && nls.boolean("enabled")?.unwrap_or(true) {
        let lambda = nls.float("lambda")?.unwrap_or(0.0);
        let sigma = nls.float("sigma")?.unwrap_or(1.0);
        if sigma <= 0.0 {
            return Err(perr(nls.line("sigma"), "sigma", format!("sigma must be > 0, got {sigma}")));
        }
        if lambda < 0.0 && sigma >= 2.0 {
            let key = if nls.entry("sigma").is_some() { "sigma" } else { "lambda" };
            return Err(perr(
                nls.line(key),
                key,
                format!(
                    "focusing coupling (lambda = {lambda} < 0) is only supported for sigma < 2, got sigma = {sigma}"
                ),
            ));
        }
        NlsParams::new(lambda, sigma)?
    } else {
        NlsParams::disabled()
    };

    // scheme
    let dt = scheme.float("dt")?.unwrap_or(1e-3);
    if dt <= 0.0 {
        return Err(perr(scheme.line("dt"), "dt", format!("dt must be > 0, got {dt}")));
    }
    let splitting = match scheme.string("splitting").map(str::to_ascii_lowercase).as_deref() {
        None | Some("strang") => Splitting::Strang,
        Some("lie") => Splitting::Lie,
        Some(other) => {
            return Err(perr(
                scheme.line("splitting"),
                "splitting",
                format!("expected `strang` or `lie`, got `{other}`"),
            ))
        }
    };
    let rtol = scheme.float("rtol")?;
    let atol = scheme.float("atol")?;
    let substeps = match scheme.string("substeps") {
        None | Some("adaptive") => SubstepPolicy::AdaptiveRk {
            rtol: rtol.unwrap_or(DEFAULT_RTOL),
            atol: atol.unwrap_or(DEFAULT_ATOL),
        },
        Some(_) => {
            let n: usize = scheme.parse("substeps", "`adaptive` or a positive integer")?.unwrap_or(0);
            if n == 0 {
                return Err(perr(scheme.line("substeps"), "substeps", "substep count must be >= 1"));
            }
            if rtol.is_some() || atol.is_some() {
                let key = if rtol.is_some() { "rtol" } else { "atol" };
                return Err(perr(scheme.line(key), key, "tolerances only apply to adaptive substeps"));
            }
            SubstepPolicy::FixedSubsteps(n)
        }
    };
    let step = StepScheme::new(dt, splitting, substeps).map_err(|e| perr(scheme.line("rtol"), "rtol", strip(&e)))?;

    // H²-type data where the kind asks for it
    let order = if kind == ScenarioKind::Extinction23d { 2.0 } else { 1.0 };
    let initial_data = build_initial(&initial, dim, order)?;

    let mut s = Scenario::new(&name, kind, dim, damping_params);
    s.grid = grid_spec;
    s.nls = nls_params;
    s.scheme = step;
    s.initial = initial_data;
    s.t_max = header.float("t_max")?;
    if let Some(n) = header.parse::<usize>("record_every", "a positive integer")? {
        s.record_every = n;
    }
    if let Some(ids) = header.list::<String>("checks", "check names")? {
        s.checks = ids
            .iter()
            .map(|c| c.parse::<CheckId>().map_err(|m| perr(header.line("checks"), "checks", m)))
            .collect::<Result<_>>()?;
    }
    s.seeds = header.list("seeds", "non-negative integers")?.unwrap_or_default();
    s.deltas = header.float_list("deltas")?.unwrap_or_default();
    s.gammas = header.float_list("gammas")?.unwrap_or_default();
    s.exploratory = header.boolean("exploratory")?.unwrap_or(false);

    let defaults = EnsembleSpec::default();
    s.ensemble = EnsembleSpec {
        count: ensemble.parse("count", "an integer")?.unwrap_or(defaults.count),
        seed: ensemble.parse("seed", "an integer")?.unwrap_or(defaults.seed),
        alphas: ensemble.float_list("alphas")?.unwrap_or(defaults.alphas),
        orders: ensemble.float_list("orders")?.unwrap_or(defaults.orders),
        dims: ensemble.list("dims", "integers")?.unwrap_or(defaults.dims),
        points: ensemble.parse("points", "an integer")?.unwrap_or(defaults.points),
    };

    s.validate().map_err(|e| {
        let key = scenario_key_for(&e);
        let line = if header.entry(key).is_some() {
            header.line(key)
        } else {
            block.line.max(1)
        };
        perr(line, key, strip(&e))
    })?;
    Ok(s)
}

fn build_initial(initial: &View<'_>, dim: usize, order: f64) -> Result<InitialData> {
    let allowed: &[&str] = match initial.string("kind").unwrap_or("constant") {
        "constant" => &["kind", "re", "im"],
        "mode" => &["kind", "modes", "amplitude"],
        "random" => &["kind", "seed", "decay", "amplitude"],
        "file" => &["kind", "path"],
        other => {
            return Err(perr(
                initial.line("kind"),
                "kind",
                format!("expected constant, mode, random or file, got `{other}`"),
            ))
        }
    };
    if let Some(sec) = initial.section {
        let mut keys: Vec<(&String, &Entry)> = sec.entries.iter().collect();
        keys.sort_by_key(|(_, e)| e.line);
        if let Some((k, e)) = keys.into_iter().find(|(k, _)| !allowed.contains(&k.as_str())) {
            return Err(perr(e.line, k, "not used by this kind of initial data"));
        }
    }
    let amplitude = initial.float("amplitude")?.unwrap_or(1.0);
    if amplitude <= 0.0 {
        return Err(perr(initial.line("amplitude"), "amplitude", "amplitude must be > 0"));
    }
    Ok(match initial.string("kind").unwrap_or("constant") {
        "constant" => InitialData::Constant {
            re: initial.float("re")?.unwrap_or(1.0),
            im: initial.float("im")?.unwrap_or(0.0),
        },
        "mode" => {
            let modes: Vec<i64> = initial
                .list("modes", "integers")?
                .ok_or_else(|| perr(initial.line("modes"), "modes", "mode data needs `modes`"))?;
            let modes = broadcast(modes, dim, initial.line("modes"), "modes")?;
            InitialData::Mode { modes, amplitude }
        }
        "random" => {
            let decay = initial.float("decay")?.unwrap_or(InitialData::default_decay(dim, order));
            InitialData::Random {
                seed: initial.parse("seed", "a non-negative integer")?.unwrap_or(1),
                decay,
                amplitude,
            }
        }
        _ => InitialData::File {
            path: PathBuf::from(
                initial
                    .string("path")
                    .ok_or_else(|| perr(initial.line("path"), "path", "file data needs `path`"))?,
            ),
        },
    })
}

fn build_output(sec: &Section) -> Result<OutputSettings> {
    let view = View { section: Some(sec) };
    let mut out = OutputSettings::default();
    if let Some(d) = view.string("dir") {
        out.dir = PathBuf::from(d);
    }
    if let Some(v) = view.parse::<u8>("verbosity", "an integer 0-2")? {
        if v > 2 {
            return Err(perr(view.line("verbosity"), "verbosity", "expected an integer 0-2"));
        }
        out.verbosity = v;
    }
    if let Some(t) = view.parse::<usize>("threads", "a positive integer")? {
        if t == 0 {
            return Err(perr(view.line("threads"), "threads", "thread limit must be >= 1"));
        }
        out.threads = Some(t);
    }
    Ok(out)
}

/// A missing required key, unless a default applies.
fn required_or(view: &View<'_>, key: &str, optional: bool, default: f64) -> Result<f64> {
    match view.float(key)? {
        Some(v) => Ok(v),
        None if optional => Ok(default),
        None => Err(perr(view.line(key), key, "missing required key")),
    }
}

/// One value stands for every axis.
fn broadcast<T: Clone>(values: Vec<T>, dim: usize, line: usize, key: &str) -> Result<Vec<T>> {
    match values.len() {
        1 => Ok(vec![values[0].clone(); dim]),
        n if n == dim => Ok(values),
        n => Err(perr(line, key, format!("expected 1 or {dim} values, got {n}"))),
    }
}

/// Message of a configuration error without its prefix.
fn strip(e: &Error) -> String {
    match e {
        Error::Config(m) => m.clone(),
        other => other.to_string(),
    }
}

/// The `[scenario]` key a validation message is about.
fn scenario_key_for(e: &Error) -> &'static str {
    let msg = e.to_string();
    for key in ["t_max", "record_every", "deltas", "gammas", "seeds", "name", "gn_ratio", "checks"] {
        if msg.contains(key) {
            return if key == "gn_ratio" { "checks" } else { key };
        }
    }
    if msg.contains("exploratory") {
        "exploratory"
    } else if msg.contains("fixed set of checks") {
        "checks"
    } else if msg.contains("ensemble") {
        "ensemble"
    } else if msg.contains("gamma = 0") {
        "t_max"
    } else {
        "kind"
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse_err(text: &str) -> (usize, String, String) {
        match parse_config(text) {
            Err(Error::Parse { line, key, message }) => (line, key, message),
            other => panic!("expected a parse error, got {other:?}"),
        }
    }

    #[test]
    fn minimal_config_gets_defaults() {
        let cfg = parse_config("[grid]\npoints = 128\n[damping]\ngamma = 2\nalpha = 1\n").unwrap();
        assert_eq!(cfg.scenarios.len(), 1);
        let s = &cfg.scenarios[0];
        assert_eq!(s.kind, ScenarioKind::Run);
        assert_eq!(s.grid, GridSpec::cube(1, 128));
        assert_eq!(s.damping, DampingParams::exact(2.0, 1.0).unwrap());
        assert_eq!(s.scheme, StepScheme::strang(1e-3).unwrap());
        assert!(!s.nls.enabled);
        assert_eq!(s.initial, InitialData::Constant { re: 1.0, im: 0.0 });
        assert_eq!(cfg.output, OutputSettings::default());
    }

    #[test]
    fn alpha_out_of_range_names_its_line() {
        let (line, key, msg) = parse_err("[grid]\npoints = 64\n[damping]\ngamma = 1\nalpha = 1.5\n");
        assert_eq!((line, key.as_str()), (5, "alpha"));
        assert!(msg.contains("(0, 1]"));
    }

    #[test]
    fn focusing_supercritical_is_rejected() {
        let text = "[grid]\npoints = 64\n[damping]\ngamma = 1\nalpha = 1\n[nls]\nlambda = -1\nsigma = 3\n";
        let (line, key, msg) = parse_err(text);
        assert_eq!((line, key.as_str()), (8, "sigma"));
        assert!(msg.contains("sigma < 2"));
    }

    #[test]
    fn unknown_keys_and_sections() {
        let (line, key, _) = parse_err("[grid]\npoints = 64\nspacing = 2\n");
        assert_eq!((line, key.as_str()), (3, "spacing"));
        let (line, key, _) = parse_err("[physics]\n");
        assert_eq!((line, key.as_str()), (1, "physics"));
        let (line, key, _) = parse_err("[grid]\npoints = 64\npoints = 32\n");
        assert_eq!((line, key.as_str()), (3, "points"));
    }

    #[test]
    fn bad_values_name_key() {
        let (line, key, _) = parse_err("[grid]\npoints = 64\n[damping]\ngamma = fast\nalpha = 1\n");
        assert_eq!((line, key.as_str()), (4, "gamma"));
        let (_, key, _) = parse_err("[grid]\npoints = 64\n[damping]\nalpha = 1\n");
        assert_eq!(key, "gamma");
        let (_, key, _) = parse_err("[grid]\npoints = 63\n[damping]\ngamma = 1\nalpha = 1\n");
        assert_eq!(key, "points");
    }

    #[test]
    fn multiple_scenarios_and_output() {
        let text = "\
# a two-scenario suite
[output]
dir = results
verbosity = 1
threads = 2

[scenario]
name = const1d
kind = extinction_1d
[grid]
points = 256
[damping]
gamma = 1
alpha = 1

[scenario]
name = sweep
kind = regularized_sweep
deltas = 1e-1, 1e-2
t_max = 5
[grid]
points = 32, 32
lengths = 6.283185307179586
[damping]
gamma = 1
alpha = 0.5
[initial]
kind = random
seed = 7
[scheme]
substeps = 8
splitting = lie
";
        let cfg = parse_config(text).unwrap();
        assert_eq!(cfg.output.dir, PathBuf::from("results"));
        assert_eq!(cfg.output.threads, Some(2));
        assert_eq!(cfg.scenarios[0].kind, ScenarioKind::Extinction1d);
        let sweep = &cfg.scenarios[1];
        assert_eq!(sweep.grid, GridSpec::cube(2, 32));
        assert_eq!(sweep.deltas, vec![1e-1, 1e-2]);
        assert_eq!(sweep.scheme.substeps, SubstepPolicy::FixedSubsteps(8));
        assert_eq!(sweep.scheme.splitting, Splitting::Lie);
        assert_eq!(
            sweep.initial,
            InitialData::Random {
                seed: 7,
                decay: 2.0,
                amplitude: 1.0
            }
        );
    }

    #[test]
    fn scenario_validation_is_reported_as_parse_error() {
        let text = "[scenario]\nname = s\nkind = regularized_sweep\ndeltas = 1e-2, 1e-1\n[grid]\npoints = 32\n[damping]\ngamma = 1\nalpha = 1\n";
        let (line, key, msg) = parse_err(text);
        assert_eq!((line, key.as_str()), (4, "deltas"));
        assert!(msg.contains("decreasing"));
    }

    #[test]
    fn initial_keys_must_match_kind() {
        let text = "[grid]\npoints = 32\n[damping]\ngamma = 1\nalpha = 1\n[initial]\nkind = constant\nseed = 3\n";
        let (line, key, _) = parse_err(text);
        assert_eq!((line, key.as_str()), (8, "seed"));
    }

    #[test]
    fn zero_threads_rejected() {
        let (_, key, _) = parse_err("[output]\nthreads = 0\n[grid]\npoints = 32\n[damping]\ngamma = 1\nalpha = 1\n");
        assert_eq!(key, "threads");
    }
}
