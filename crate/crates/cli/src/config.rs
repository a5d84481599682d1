//! Flat `key = value` settings, merged from a config file and the command
//! line, and validated into a [`SimConfig`].

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_complex::Complex64;
use rpsdm::channel::ProductPair;
use rpsdm::detection::DetectorKind;
use rpsdm::metrics::{MmseDecision, SnrConvention};
use rpsdm::transforms::SchemeKind;
use serde::Serialize;

/// A message for the user; maps to exit code 2.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

fn err<T>(msg: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError(msg.into()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Spectrum,
    Decompose,
    PaprCcdf,
    PaprWorst,
    Ber,
    Complexity,
    DumpBasis,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Spectrum => "spectrum",
            Command::Decompose => "decompose",
            Command::PaprCcdf => "papr-ccdf",
            Command::PaprWorst => "papr-worst",
            Command::Ber => "ber",
            Command::Complexity => "complexity",
            Command::DumpBasis => "dump-basis",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        [
            Command::Spectrum,
            Command::Decompose,
            Command::PaprCcdf,
            Command::PaprWorst,
            Command::Ber,
            Command::Complexity,
            Command::DumpBasis,
        ]
        .into_iter()
        .find(|c| c.name() == name)
    }

    /// Keys this command reads, besides `out` and `format`.
    fn keys(self) -> &'static [&'static str] {
        match self {
            Command::Spectrum | Command::DumpBasis | Command::Complexity => &["n"],
            Command::PaprWorst => &["n", "m"],
            Command::Decompose => &["n", "l", "seed", "pair", "taps"],
            Command::PaprCcdf => &["n", "m", "scheme", "thresholds", "trials", "seed"],
            Command::Ber => &[
                "n",
                "l",
                "m",
                "scheme",
                "detector",
                "snr",
                "trials",
                "seed",
                "decision",
                "snr_convention",
            ],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Table,
}

impl FromStr for Format {
    type Err = ConfigError;
    fn from_str(s: &str) -> Result<Self, ConfigError> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            "table" => Ok(Format::Table),
            other => err(format!(
                "format: expected csv, json or table, got `{other}`"
            )),
        }
    }
}

/// Ordered key/value settings. Keys use underscores; dashes are accepted
/// and normalised.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings(BTreeMap<String, String>);

impl Settings {
    pub fn normalize_key(key: &str) -> String {
        key.trim().replace('-', "_")
    }

    pub fn insert(&mut self, key: &str, value: impl Into<String>) {
        self.0.insert(Self::normalize_key(key), value.into());
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.0.get(key).map(String::as_str)
    }

    /// Values from `other` win.
    pub fn merge(&mut self, other: Settings) {
        self.0.extend(other.0);
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &String)> {
        self.0.iter()
    }

    /// `key = value` lines; `#` starts a comment; blank lines are skipped.
    pub fn parse(text: &str, origin: &str) -> Result<Self, ConfigError> {
        let mut out = Settings::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return err(format!(
                    "{origin}:{}: expected `key = value`, got `{line}`",
                    i + 1
                ));
            };
            let key = Self::normalize_key(k);
            if key.is_empty() {
                return err(format!("{origin}:{}: empty key", i + 1));
            }
            if out.0.contains_key(&key) {
                return err(format!("{origin}:{}: duplicate key `{key}`", i + 1));
            }
            out.0.insert(key, v.trim().to_string());
        }
        Ok(out)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError(format!("cannot read config file {}: {e}", path.display())))?;
        Self::parse(&text, &path.display().to_string())
    }
}

/// Validated parameters for one run.
#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub command: Command,
    pub n: Vec<usize>,
    pub l: Option<usize>,
    pub m: usize,
    pub schemes: Vec<SchemeKind>,
    pub detectors: Vec<DetectorKind>,
    pub grid: Vec<f64>,
    pub trials: Option<u64>,
    pub seed: Option<u64>,
    pub pair: ProductPair,
    pub taps: Option<Vec<Complex64>>,
    pub decision: MmseDecision,
    pub snr_convention: SnrConvention,
    pub out: Option<PathBuf>,
    pub format: Format,
    /// Fully resolved settings, defaults included, for the JSON echo.
    pub echo: Settings,
}

fn parse_scalar<T: FromStr>(key: &str, v: &str, what: &str) -> Result<T, ConfigError> {
    v.trim()
        .parse()
        .map_err(|_| ConfigError(format!("{key}: expected {what}, got `{v}`")))
}

fn parse_list<T: FromStr>(key: &str, v: &str, what: &str) -> Result<Vec<T>, ConfigError> {
    let items: Vec<&str> = v
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .collect();
    if items.is_empty() {
        return err(format!("{key}: expected a comma-separated list of {what}"));
    }
    items
        .into_iter()
        .map(|s| parse_scalar(key, s, what))
        .collect()
}

/// `start:step:stop` (inclusive) or a comma-separated list.
pub fn parse_grid(key: &str, v: &str) -> Result<Vec<f64>, ConfigError> {
    let parts: Vec<&str> = v.split(':').collect();
    let grid = match parts.as_slice() {
        [start, step, stop] => {
            let start: f64 = parse_scalar(key, start, "a number")?;
            let step: f64 = parse_scalar(key, step, "a number")?;
            let stop: f64 = parse_scalar(key, stop, "a number")?;
            if !(step > 0.0) || !(stop >= start) {
                return err(format!("{key}: `{v}` needs step > 0 and stop >= start"));
            }
            let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
            if count > 100_000 {
                return err(format!("{key}: `{v}` has more than 100000 points"));
            }
            (0..count).map(|i| start + i as f64 * step).collect()
        }
        [_] => parse_list(key, v, "numbers")?,
        _ => {
            return err(format!(
                "{key}: expected `start:step:stop` or a list, got `{v}`"
            ))
        }
    };
    if grid.iter().any(|g: &f64| g.is_nan()) {
        return err(format!("{key}: NaN in grid"));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return err(format!("{key}: grid must be strictly increasing"));
    }
    Ok(grid)
}

/// Complex numbers written `a`, `bi`, `a+bi` or `a-bi` (`j` also accepted).
pub fn parse_complex(key: &str, v: &str) -> Result<Complex64, ConfigError> {
    let s: String = v.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || ConfigError(format!("{key}: cannot parse `{v}` as a complex number"));
    let Some(body) = s.strip_suffix(['i', 'j']) else {
        return s
            .parse::<f64>()
            .map(|re| Complex64::new(re, 0.0))
            .map_err(|_| bad());
    };
    let split = body
        .char_indices()
        .skip(1)
        .filter(|&(i, c)| (c == '+' || c == '-') && !matches!(body.as_bytes()[i - 1], b'e' | b'E'))
        .map(|(i, _)| i)
        .last();
    let (re, im) = match split {
        Some(i) => (&body[..i], &body[i..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => "1",
        "-" => "-1",
        other => other,
    };
    let re: f64 = re.parse().map_err(|_| bad())?;
    let im: f64 = im.trim_start_matches('+').parse().map_err(|_| bad())?;
    Ok(Complex64::new(re, im))
}

impl SimConfig {
    pub fn from_settings(command: Command, mut s: Settings) -> Result<Self, ConfigError> {
        for (k, _) in s.iter() {
            if k != "out" && k != "format" && !command.keys().contains(&k.as_str()) {
                return err(format!(
                    "`{k}` is not a setting of `{}` (accepted: {}, out, format)",
                    command.name(),
                    command.keys().join(", ")
                ));
            }
        }
        let defaults: &[(&str, &str)] = match command {
            Command::PaprWorst => &[("m", "16")],
            Command::Decompose => &[("pair", "production")],
            Command::PaprCcdf => &[
                ("m", "16"),
                ("scheme", "ofdm,rpsdm"),
                ("thresholds", "0:0.25:14"),
                ("trials", "100000"),
            ],
            Command::Ber => &[
                ("m", "16"),
                ("scheme", "ofdm,rpsdm"),
                ("detector", "zf,mmse"),
                ("snr", "0:5:30"),
                ("decision", "unbiased"),
                ("snr_convention", "es"),
            ],
            _ => &[],
        };
        for (k, v) in defaults {
            if s.get(k).is_none() {
                s.insert(k, *v);
            }
        }
        if s.get("format").is_none() {
            s.insert("format", "csv");
        }
        let get = |k: &str| s.get(k);
        let need = |k: &str| {
            get(k).ok_or_else(|| {
                ConfigError(format!(
                    "`{}` needs `{k}` (flag --{} or config key)",
                    command.name(),
                    k.replace('_', "-")
                ))
            })
        };

        let n: Vec<usize> = match get("n") {
            Some(v) => parse_list("n", v, "block lengths")?,
            None if command == Command::Decompose && get("taps").is_some() => Vec::new(),
            None => return Err(need("n").unwrap_err()),
        };
        if n.contains(&0) {
            return err("n: block length must be at least 1");
        }
        if n.iter().any(|&v| v > 4096) {
            return err("n: block lengths above 4096 are not supported");
        }
        let single_n = matches!(command, Command::Decompose | Command::Ber);
        if single_n && n.len() > 1 {
            return err(format!(
                "n: `{}` takes a single block length",
                command.name()
            ));
        }

        let taps = match get("taps") {
            Some(v) => Some(
                v.split(',')
                    .map(|t| parse_complex("taps", t))
                    .collect::<Result<Vec<_>, _>>()?,
            ),
            None => None,
        };
        let mut n = n;
        if let Some(t) = &taps {
            if t.is_empty() || t.iter().all(|c| c.norm() == 0.0) {
                return err("taps: need at least one nonzero tap");
            }
            if n.is_empty() {
                n.push(t.len());
            }
        }

        let l = match (command, get("l")) {
            (_, Some(v)) => Some(parse_scalar::<usize>("l", v, "a channel length")?),
            (Command::Ber, None) => return Err(need("l").unwrap_err()),
            (Command::Decompose, None) if taps.is_none() => return Err(need("l").unwrap_err()),
            _ => None,
        };
        if let Some(l) = l {
            if l == 0 {
                return err("l: channel length must be at least 1");
            }
            if let Some(&nmin) = n.iter().min() {
                if l > nmin {
                    return err(format!("l: channel length {l} exceeds block length {nmin}"));
                }
            }
        }
        if let Some(t) = &taps {
            if l.is_some() {
                return err("give either `taps` or `l`, not both");
            }
            if t.len() > n[0] {
                return err(format!(
                    "taps: {} taps exceed block length {}",
                    t.len(),
                    n[0]
                ));
            }
        }

        let m = match get("m") {
            Some(v) => parse_scalar::<usize>("m", v, "a QAM order")?,
            None => 16,
        };
        if ![4, 16, 64].contains(&m) {
            return err(format!("m: QAM order must be 4, 16 or 64, got {m}"));
        }

        let schemes = match get("scheme") {
            Some(v) => v
                .split(',')
                .map(|x| {
                    x.trim()
                        .parse::<SchemeKind>()
                        .map_err(|e| ConfigError(format!("scheme: {e}")))
                })
                .collect::<Result<Vec<_>, _>>()?,
            None => SchemeKind::ALL.to_vec(),
        };
        let detectors = match get("detector") {
            Some(v) => v
                .split(',')
                .map(|x| {
                    x.trim()
                        .parse::<DetectorKind>()
                        .map_err(|e| ConfigError(format!("detector: {e}")))
                })
                .collect::<Result<Vec<_>, _>>()?,
            None => DetectorKind::ALL.to_vec(),
        };
        for (key, dup) in [
            ("scheme", has_duplicates(&schemes)),
            ("detector", has_duplicates(&detectors)),
            ("n", has_duplicates(&n)),
        ] {
            if dup {
                return err(format!("{key}: duplicate entries"));
            }
        }

        let grid = match command {
            Command::PaprCcdf => parse_grid("thresholds", need("thresholds")?)?,
            Command::Ber => parse_grid("snr", need("snr")?)?,
            _ => Vec::new(),
        };

        let trials = match get("trials") {
            Some(v) => {
                let t: u64 = parse_scalar("trials", v, "a positive integer")?;
                if t == 0 {
                    return err("trials: must be at least 1");
                }
                Some(t)
            }
            None if command == Command::Ber => {
                // At least 10^5 symbols per SNR point.
                Some(100_000u64.div_ceil(n[0] as u64))
            }
            None => None,
        };

        let seed = match get("seed") {
            Some(v) => Some(parse_scalar::<u64>("seed", v, "an unsigned integer")?),
            None => None,
        };
        let needs_seed = match command {
            Command::PaprCcdf | Command::Ber => true,
            Command::Decompose => taps.is_none(),
            _ => false,
        };
        if needs_seed && seed.is_none() {
            return Err(need("seed").unwrap_err());
        }

        let pair = match get("pair") {
            Some(v) => v.parse().map_err(|e| ConfigError(format!("pair: {e}")))?,
            None => ProductPair::Production,
        };
        let decision = match get("decision") {
            None | Some("unbiased") => MmseDecision::Unbiased,
            Some("biased") => MmseDecision::Biased,
            Some(other) => {
                return err(format!(
                    "decision: expected biased or unbiased, got `{other}`"
                ))
            }
        };
        let snr_convention = match get("snr_convention") {
            None | Some("es") => SnrConvention::Es,
            Some("eb") => SnrConvention::Eb,
            Some(other) => return err(format!("snr_convention: expected es or eb, got `{other}`")),
        };
        let format: Format = need("format")?.parse()?;
        if format == Format::Table && !matches!(command, Command::PaprWorst | Command::Complexity) {
            return err(
                "format: `table` is only available for papr-worst and complexity".to_string(),
            );
        }
        let out = get("out").map(PathBuf::from);
        if let (Some(t), None) = (trials, s.get("trials")) {
            s.insert("trials", t.to_string());
        }

        Ok(SimConfig {
            command,
            n,
            l,
            m,
            schemes,
            detectors,
            grid,
            trials,
            seed,
            pair,
            taps,
            decision,
            snr_convention,
            out,
            format,
            echo: s,
        })
    }
}

fn has_duplicates<T: PartialEq>(v: &[T]) -> bool {
    v.iter().enumerate().any(|(i, a)| v[..i].contains(a))
}
