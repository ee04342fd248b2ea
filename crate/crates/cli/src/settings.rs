//! Resolution of a config file plus overrides into a checked [`RunConfig`].

use entscale_core::spin::{PauliTerm, Preset, MAX_DENSE_SPINS, MAX_SPINS};
use entscale_core::{LocalHamiltonian, PiecewiseSymbol};

use crate::config::{ConfigError, ConfigFile};
use crate::grid::{parse_int_list, parse_real_grid};
use crate::Experiment;

/// Largest |t| accepted on a time grid.
pub const MAX_TIME: f64 = 1000.0;
/// Largest fermionic block size (pivoted factorization is O(m³)).
pub const MAX_BLOCK: usize = 1024;
pub const MAX_RING: usize = 1 << 16;
pub const MAX_SUITE_DIM: usize = 256;
pub const MAX_TRIALS: usize = 100_000;

/// Command-line values that replace config settings. Values use config syntax.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub preset: Option<String>,
    pub n: Option<String>,
    pub t_grid: Option<String>,
    pub m_list: Option<String>,
    pub seed: Option<String>,
}

#[derive(Clone, Debug)]
pub enum Model {
    Spin(LocalHamiltonian),
    Symbol(PiecewiseSymbol),
    None,
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub experiment: Experiment,
    pub model: Model,
    pub n: usize,
    pub t_grid: Vec<f64>,
    pub m_list: Vec<usize>,
    pub k_list: Vec<usize>,
    pub n_list: Vec<usize>,
    pub dims: Vec<usize>,
    pub cut: usize,
    pub l_max: usize,
    pub site: usize,
    pub seed: u64,
    pub trials: usize,
    file: ConfigFile,
}

fn allowed_keys(e: Experiment) -> &'static [&'static str] {
    match e {
        Experiment::Quench => &["preset", "n", "boundary", "t_grid", "m_list"],
        Experiment::WHierarchy => &["preset", "n", "boundary", "t_grid", "cut", "l_max"],
        Experiment::Lightcone => &["preset", "n", "boundary", "t_grid", "site"],
        Experiment::KCheck => &["preset", "n", "boundary", "t_grid"],
        Experiment::Quasilocal => &["preset", "n", "boundary", "t_grid", "site", "k_list"],
        Experiment::FermionScaling => &["preset", "m_list"],
        Experiment::RingCheck => &["preset", "m_list", "n_list"],
        Experiment::PropertySuite => &["n", "dims", "trials"],
    }
}

impl RunConfig {
    pub fn from_text(experiment: Experiment, text: &str) -> Result<Self, ConfigError> {
        Self::resolve(experiment, ConfigFile::parse(text)?, &Overrides::default())
    }

    /// Applies `overrides`, fills defaults and range-checks everything.
    pub fn resolve(experiment: Experiment, mut file: ConfigFile, overrides: &Overrides) -> Result<Self, ConfigError> {
        if let Some((_, named)) = file.setting("experiment") {
            if named != experiment.name() {
                return Err(ConfigError::invalid(
                    "experiment",
                    format!("config is for `{named}` but `{experiment}` was requested"),
                ));
            }
        }
        let flags = [
            ("preset", "--preset", &overrides.preset),
            ("n", "--n", &overrides.n),
            ("t_grid", "--t-grid", &overrides.t_grid),
            ("m_list", "--m-list", &overrides.m_list),
            ("seed", "--seed", &overrides.seed),
        ];
        for (key, flag, value) in flags {
            if let Some(v) = value {
                let v: String = v.chars().filter(|c| !c.is_whitespace()).collect();
                file.set(key, &v).map_err(|e| match e {
                    ConfigError::Syntax { message, .. } => ConfigError::invalid(flag, message),
                    other => other,
                })?;
            }
        }
        file.set("experiment", experiment.name())?;

        let allowed = allowed_keys(experiment);
        for entry in file.entries() {
            if let crate::config::Entry::Setting { key, .. } = entry {
                if key != "experiment" && key != "seed" && !allowed.contains(&key.as_str()) {
                    return Err(ConfigError::invalid(key, format!("not used by {experiment}")));
                }
            }
        }
        if !experiment.is_spin() && !file.terms().is_empty() {
            return Err(ConfigError::invalid("model", format!("{experiment} takes no hamiltonian term lines")));
        }
        if !experiment.is_fermion() && !file.symbol_lines().is_empty() {
            return Err(ConfigError::invalid("model", format!("{experiment} takes no symbol lines")));
        }

        fill_defaults(experiment, &mut file)?;
        let get = |key: &str| file.setting(key).map(|(_, v)| v.to_string());
        let int = |key: &str| get(key).map(|v| v.parse::<usize>().expect("checked at parse"));
        let ints = |key: &str| get(key).map(|v| parse_int_list(&v).expect("checked at parse")).unwrap_or_default();

        let n = int("n").unwrap_or(0);
        let mut cfg = RunConfig {
            experiment,
            model: Model::None,
            n,
            t_grid: get("t_grid").map(|v| parse_real_grid(&v).expect("checked at parse")).unwrap_or_default(),
            m_list: ints("m_list"),
            k_list: ints("k_list"),
            n_list: ints("n_list"),
            dims: ints("dims"),
            cut: int("cut").unwrap_or(0),
            l_max: int("l_max").unwrap_or(0),
            site: int("site").unwrap_or(0),
            seed: get("seed").map(|v| v.parse().expect("checked at parse")).unwrap_or(0),
            trials: int("trials").unwrap_or(0),
            file: ConfigFile::default(),
        };
        cfg.check_ranges()?;
        cfg.model = build_model(experiment, &file, n)?;
        cfg.file = file;
        Ok(cfg)
    }

    /// The effective config, defaults included, as config-file text.
    pub fn echo(&self) -> String {
        self.file.serialize()
    }

    pub fn hamiltonian(&self) -> Option<&LocalHamiltonian> {
        match &self.model {
            Model::Spin(h) => Some(h),
            _ => None,
        }
    }

    pub fn symbol(&self) -> Option<&PiecewiseSymbol> {
        match &self.model {
            Model::Symbol(s) => Some(s),
            _ => None,
        }
    }

    fn check_ranges(&self) -> Result<(), ConfigError> {
        let e = self.experiment;
        let n = self.n;
        let within = |name: &str, values: &[usize], lo: usize, hi: usize| -> Result<(), ConfigError> {
            match values.iter().find(|&&v| v < lo || v > hi) {
                Some(v) => Err(ConfigError::invalid(name, format!("{v} outside {lo}..={hi}"))),
                None => Ok(()),
            }
        };
        if e.is_spin() {
            let max = if e == Experiment::Quench { MAX_SPINS } else { MAX_DENSE_SPINS };
            within("n", &[n], 2, max)?;
            if let Some(t) = self.t_grid.iter().find(|t| t.abs() > MAX_TIME) {
                return Err(ConfigError::invalid("t_grid", format!("time {t} outside [-{MAX_TIME}, {MAX_TIME}]")));
            }
        }
        match e {
            Experiment::Quench => within("m_list", &self.m_list, 1, n - 1)?,
            Experiment::WHierarchy => {
                if self.t_grid.len() != 1 {
                    return Err(ConfigError::invalid("t_grid", "w-hierarchy takes a single time"));
                }
                within("cut", &[self.cut], 1, n - 1)?;
                within("l_max", &[self.l_max], 1, n - self.cut)?;
            }
            Experiment::Lightcone => within("site", &[self.site], 0, n - 1)?,
            Experiment::Quasilocal => {
                if n < 3 {
                    return Err(ConfigError::invalid("n", "quasilocal needs an interior site (n >= 3)"));
                }
                within("site", &[self.site], 1, n - 2)?;
                within("k_list", &self.k_list, 0, n)?;
            }
            Experiment::FermionScaling => {
                within("m_list", &self.m_list, 1, MAX_BLOCK)?;
                let mut distinct = self.m_list.clone();
                distinct.sort_unstable();
                distinct.dedup();
                if distinct.len() < 3 {
                    return Err(ConfigError::invalid("m_list", "scaling fit needs at least 3 distinct block sizes"));
                }
            }
            Experiment::RingCheck => {
                within("m_list", &self.m_list, 1, MAX_BLOCK)?;
                let m_max = *self.m_list.iter().max().expect("nonempty");
                within("n_list", &self.n_list, 4 * m_max, MAX_RING)?;
            }
            Experiment::PropertySuite => {
                within("n", &[n], 2, MAX_DENSE_SPINS)?;
                within("dims", &self.dims, 2, MAX_SUITE_DIM)?;
                within("trials", &[self.trials], 1, MAX_TRIALS)?;
            }
            Experiment::KCheck => {}
        }
        Ok(())
    }
}

fn fill_defaults(e: Experiment, file: &mut ConfigFile) -> Result<(), ConfigError> {
    let default = |file: &mut ConfigFile, key: &str, value: String| {
        if file.setting(key).is_none() {
            file.set(key, &value)
        } else {
            Ok(())
        }
    };
    if e.is_spin() {
        default(file, "n", "10".into())?;
        default(file, "boundary", "open".into())?;
    }
    let n = file.setting("n").and_then(|(_, v)| v.parse::<usize>().ok()).unwrap_or(0);
    match e {
        Experiment::Quench => {
            default(file, "t_grid", "0:2:21".into())?;
            default(file, "m_list", format!("1..{}", n.saturating_sub(1).max(1)))?;
        }
        Experiment::WHierarchy => {
            default(file, "t_grid", "0.25".into())?;
            default(file, "cut", (n / 2).to_string())?;
            let cut = file.setting("cut").and_then(|(_, v)| v.parse::<usize>().ok()).unwrap_or(0);
            default(file, "l_max", n.saturating_sub(cut).max(1).to_string())?;
        }
        Experiment::Lightcone => {
            default(file, "t_grid", "0:1:11".into())?;
            default(file, "site", (n / 2).to_string())?;
        }
        Experiment::KCheck => default(file, "t_grid", "0,0.25,0.5,1".into())?,
        Experiment::Quasilocal => {
            default(file, "t_grid", "0.5".into())?;
            default(file, "site", (n / 2).to_string())?;
            default(file, "k_list", "1..4".into())?;
        }
        Experiment::FermionScaling => default(file, "m_list", "8..512*2".into())?,
        Experiment::RingCheck => {
            default(file, "m_list", "16".into())?;
            default(file, "n_list", "256,1024,4096".into())?;
        }
        Experiment::PropertySuite => {
            default(file, "n", "8".into())?;
            default(file, "dims", "16,64".into())?;
            default(file, "trials", "100".into())?;
        }
    }
    default(file, "seed", "0".into())
}

fn build_model(e: Experiment, file: &ConfigFile, n: usize) -> Result<Model, ConfigError> {
    let preset = file.setting("preset").map(|(_, v)| v);
    if let Some((_, b)) = file.setting("boundary") {
        if b != "open" {
            return Err(ConfigError::invalid("boundary", format!("`{b}` is not supported (only `open`)")));
        }
    }
    if e.is_spin() {
        let terms = file.terms();
        let h = match (preset, terms.is_empty()) {
            (Some(_), false) => return Err(ConfigError::invalid("model", "give either a preset or term lines, not both")),
            (None, true) => return Err(ConfigError::invalid("model", "no hamiltonian: set `preset` or add term lines")),
            (Some(name), true) => {
                let p: Preset = name.parse().map_err(|_| {
                    ConfigError::invalid("preset", format!("`{name}` is not a spin preset (xy_cross, xx, zfield)"))
                })?;
                LocalHamiltonian::preset(p, n)
            }
            (None, false) => {
                let mut list = Vec::with_capacity(terms.len());
                for (line, t) in terms {
                    if t.site + 1 >= n {
                        return Err(ConfigError::Syntax {
                            line,
                            column: 1,
                            message: format!("bond {} needs sites {} and {} but n = {n}", t.site, t.site, t.site + 1),
                        });
                    }
                    list.push(PauliTerm { coeff: t.coeff.value, left: t.left, right: t.right, bond: t.site });
                }
                LocalHamiltonian::from_pauli_terms(n, &list)
            }
        };
        return h.map(Model::Spin).map_err(|err| ConfigError::invalid("hamiltonian", err.to_string()));
    }
    if e.is_fermion() {
        let lines = file.symbol_lines();
        let symbol = match (preset, lines.is_empty()) {
            (Some(_), false) => return Err(ConfigError::invalid("model", "give either a preset or symbol lines, not both")),
            (None, true) => return Err(ConfigError::invalid("model", "no symbol: set `preset` or add symbol lines")),
            (Some("paper"), true) => PiecewiseSymbol::paper(),
            (Some("half_filling"), true) => PiecewiseSymbol::half_filling(),
            (Some(name), true) => {
                return Err(ConfigError::invalid("preset", format!("`{name}` is not a symbol preset (paper, half_filling)")))
            }
            (None, false) => {
                let mut breakpoints = vec![0.0];
                let mut values = Vec::with_capacity(lines.len());
                for (_, s) in lines {
                    breakpoints.push(s.breakpoint.value);
                    values.push(s.value.value);
                }
                PiecewiseSymbol::new(breakpoints, values).map_err(|err| ConfigError::invalid("symbol", err.to_string()))?
            }
        };
        if e == Experiment::RingCheck && !symbol.is_even() {
            return Err(ConfigError::invalid("symbol", "ring-check needs an even symbol (real couplings)"));
        }
        return Ok(Model::Symbol(symbol));
    }
    Ok(Model::None)
}
