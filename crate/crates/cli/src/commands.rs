//! One function per subcommand, each returning its rendered artifacts.
//! Nothing is written to disk here.

use std::fmt::Write as _;

use rpsdm::channel::{
    circulant_matrix, draw_channel, rpsdm_decomposition, structure_report, ChannelRealization,
};
use rpsdm::detection::qam::QamConstellation;
use rpsdm::fft::{dft_unitary, Direction};
use rpsdm::metrics::{self, BerSetup, CurveResult};
use rpsdm::ramanujan::{dft_support, PeriodicTransform};
use rpsdm::transforms::SchemeKind;
use rpsdm::{Error, C64};
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{Command, ConfigError, Format, SimConfig};

#[derive(Debug)]
pub enum RunError {
    Config(ConfigError),
    Numerical(String),
}

impl From<ConfigError> for RunError {
    fn from(e: ConfigError) -> Self {
        RunError::Config(e)
    }
}

impl From<Error> for RunError {
    fn from(e: Error) -> Self {
        match e {
            Error::Numerical(_) | Error::Singular { .. } => RunError::Numerical(e.to_string()),
            other => RunError::Config(ConfigError(other.to_string())),
        }
    }
}

impl From<serde_json::Error> for RunError {
    fn from(e: serde_json::Error) -> Self {
        RunError::Numerical(format!("serialisation failed: {e}"))
    }
}

/// One output document. `label` names it among siblings when a run
/// produces several CSV files.
#[derive(Debug, Clone, PartialEq)]
pub struct Artifact {
    pub label: Option<String>,
    pub contents: String,
}

fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn complex_json(c: C64) -> Value {
    json!([c.re, c.im])
}

fn envelope(cfg: &SimConfig, results: impl Serialize) -> Result<Artifact, RunError> {
    let config: serde_json::Map<String, Value> = cfg
        .echo
        .iter()
        .filter(|(k, _)| k.as_str() != "out")
        .map(|(k, v)| (k.clone(), Value::String(v.clone())))
        .collect();
    let doc = json!({
        "command": cfg.command.name(),
        "config": config,
        "results": results,
    });
    let mut text = serde_json::to_string_pretty(&doc)?;
    text.push('\n');
    Ok(Artifact {
        label: None,
        contents: text,
    })
}

pub fn run(cfg: &SimConfig) -> Result<Vec<Artifact>, RunError> {
    match cfg.command {
        Command::Spectrum => spectrum(cfg),
        Command::Decompose => decompose(cfg),
        Command::PaprCcdf => papr_ccdf(cfg),
        Command::PaprWorst => papr_worst(cfg),
        Command::Ber => ber(cfg),
        Command::Complexity => complexity(cfg),
        Command::DumpBasis => dump_basis(cfg),
    }
}

#[derive(Serialize)]
struct SubspaceSpectrum {
    q: u64,
    phi: usize,
    support: Vec<usize>,
    magnitude: Vec<f64>,
}

fn spectrum(cfg: &SimConfig) -> Result<Vec<Artifact>, RunError> {
    let mut all = Vec::new();
    for &n in &cfg.n {
        let t = PeriodicTransform::<f64>::new(n)?;
        let mut subspaces = Vec::new();
        for span in t.layout().spans() {
            let col: Vec<C64> = t
                .e_t()
                .column(span.offset)
                .iter()
                .map(|&v| C64::new(v as f64, 0.0))
                .collect();
            let magnitude = dft_unitary(&col, Direction::Forward)
                .iter()
                .map(|v| v.norm())
                .collect();
            subspaces.push(SubspaceSpectrum {
                q: span.q,
                phi: span.width,
                support: dft_support(span.q, n)?,
                magnitude,
            });
        }
        all.push((n, subspaces));
    }
    if cfg.format == Format::Json {
        let results: Vec<Value> = all
            .iter()
            .map(|(n, s)| json!({ "n": n, "subspaces": s }))
            .collect();
        return Ok(vec![envelope(cfg, results)?]);
    }
    let mut csv = String::from("n,q,bin,magnitude,in_support\n");
    for (n, subspaces) in &all {
        for s in subspaces {
            for (k, m) in s.magnitude.iter().enumerate() {
                let inside = s.support.contains(&k) as u8;
                writeln!(csv, "{n},{},{k},{},{inside}", s.q, num(*m)).unwrap();
            }
        }
    }
    Ok(vec![Artifact {
        label: None,
        contents: csv,
    }])
}

fn decompose(cfg: &SimConfig) -> Result<Vec<Artifact>, RunError> {
    let n = cfg.n[0];
    let ch = match (&cfg.taps, cfg.l, cfg.seed) {
        (Some(taps), _, _) => ChannelRealization::new(taps.clone(), n)?,
        (None, Some(l), Some(seed)) => draw_channel(seed, l, n)?,
        _ => unreachable!("validated"),
    };
    let t = PeriodicTransform::<f64>::new(n)?;
    let h = circulant_matrix(&ch);
    let sbd = rpsdm_decomposition(&t, &h, cfg.pair)?;
    let spans: Vec<_> = t.layout().spans().collect();
    let report = structure_report(&sbd, &spans);
    if cfg.format == Format::Json {
        let matrix: Vec<Vec<Value>> = (0..n)
            .map(|r| sbd.row(r).iter().map(|&c| complex_json(c)).collect())
            .collect();
        let taps: Vec<Value> = ch.taps().iter().map(|&c| complex_json(c)).collect();
        return Ok(vec![envelope(
            cfg,
            json!({ "pair": cfg.pair, "taps": taps, "report": report, "matrix": matrix }),
        )?]);
    }
    let mut csv =
        String::from("q,offset,width,stair_residual,toeplitz_residual,skew_circulant_residual\n");
    for b in &report.blocks {
        writeln!(
            csv,
            "{},{},{},{},{},{}",
            b.q,
            b.offset,
            b.width,
            num(report.stair_block_diagonal.residual),
            num(b.toeplitz.residual),
            num(b.skew_circulant.residual)
        )
        .unwrap();
    }
    Ok(vec![Artifact {
        label: None,
        contents: csv,
    }])
}

fn curve_label(c: &CurveResult, many_n: bool) -> String {
    let mut label = c.scheme.to_string();
    if let Some(d) = c.detector {
        write!(label, "_{d}").unwrap();
    }
    if many_n {
        write!(label, "_n{}", c.n).unwrap();
    }
    label
}

fn curve_artifacts(cfg: &SimConfig, curves: Vec<CurveResult>) -> Result<Vec<Artifact>, RunError> {
    if cfg.format == Format::Json {
        let results: Vec<Value> = curves
            .iter()
            .map(|c| {
                let mut v = serde_json::to_value(c)?;
                if c.metric == metrics::Metric::Ccdf {
                    v["crossing_1e-3_db"] = json!(c.crossing(1e-3));
                }
                Ok(v)
            })
            .collect::<Result<_, serde_json::Error>>()?;
        return Ok(vec![envelope(cfg, results)?]);
    }
    let many_n = cfg.n.len() > 1;
    let single = curves.len() == 1;
    Ok(curves
        .iter()
        .map(|c| Artifact {
            label: (!single).then(|| curve_label(c, many_n)),
            contents: c.to_csv(),
        })
        .collect())
}

fn papr_ccdf(cfg: &SimConfig) -> Result<Vec<Artifact>, RunError> {
    let qam = QamConstellation::<f64>::new(cfg.m)?;
    let (trials, seed) = (cfg.trials.expect("validated"), cfg.seed.expect("validated"));
    let mut curves = Vec::new();
    for &scheme in &cfg.schemes {
        for &n in &cfg.n {
            curves.push(metrics::papr_ccdf(
                scheme, n, &qam, &cfg.grid, trials, seed,
            )?);
        }
    }
    curve_artifacts(cfg, curves)
}

fn ber(cfg: &SimConfig) -> Result<Vec<Artifact>, RunError> {
    let mut curves = Vec::new();
    for &scheme in &cfg.schemes {
        let setup = BerSetup {
            scheme,
            n: cfg.n[0],
            l: cfg.l.expect("validated"),
            m: cfg.m,
            snr_grid_db: cfg.grid.clone(),
            trials: cfg.trials.expect("validated"),
            seed: cfg.seed.expect("validated"),
            decision: cfg.decision,
            snr: cfg.snr_convention,
        };
        curves.extend(metrics::ber_curves(&setup, &cfg.detectors)?);
    }
    curve_artifacts(cfg, curves)
}

#[derive(Serialize)]
struct WorstRow {
    n: usize,
    ofdm_db: f64,
    rpsdm_db: f64,
}

fn papr_worst(cfg: &SimConfig) -> Result<Vec<Artifact>, RunError> {
    let qam = QamConstellation::<f64>::new(cfg.m)?;
    let rows = cfg
        .n
        .iter()
        .map(|&n| {
            Ok(WorstRow {
                n,
                ofdm_db: metrics::worst_case_papr(SchemeKind::Ofdm, n as u64, &qam)?,
                rpsdm_db: metrics::worst_case_papr(SchemeKind::Rpsdm, n as u64, &qam)?,
            })
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let contents = match cfg.format {
        Format::Json => return Ok(vec![envelope(cfg, rows)?]),
        Format::Csv => {
            let mut s = String::from("n,ofdm_db,rpsdm_db\n");
            for r in &rows {
                writeln!(s, "{},{},{}", r.n, num(r.ofdm_db), num(r.rpsdm_db)).unwrap();
            }
            s
        }
        Format::Table => {
            let mut s = format!("{:>6} {:>10} {:>10}\n", "N", "OFDM dB", "RPSDM dB");
            for r in &rows {
                writeln!(s, "{:>6} {:>10.2} {:>10.2}", r.n, r.ofdm_db, r.rpsdm_db).unwrap();
            }
            s
        }
    };
    Ok(vec![Artifact {
        label: None,
        contents,
    }])
}

fn complexity(cfg: &SimConfig) -> Result<Vec<Artifact>, RunError> {
    let rows = cfg
        .n
        .iter()
        .map(|&n| metrics::complexity_report(n as u64))
        .collect::<Result<Vec<_>, Error>>()?;
    let opt = |o: Option<rpsdm::transforms::OpCount>, f: fn(&rpsdm::transforms::OpCount) -> u64| {
        o.map(|o| f(&o).to_string()).unwrap_or_default()
    };
    let contents = match cfg.format {
        Format::Json => return Ok(vec![envelope(cfg, rows)?]),
        Format::Csv => {
            let mut s = String::from(
                "n,direct_ofdm_mul,direct_ofdm_add,direct_rpsdm_mul,direct_rpsdm_add,fft_mul,fft_add,\
                 sparse_irpt_mul,sparse_irpt_add,receiver_ofdm_mul,receiver_ofdm_add,receiver_rpsdm_mul,receiver_rpsdm_add\n",
            );
            for r in &rows {
                writeln!(
                    s,
                    "{},{},{},{},{},{},{},{},{},{},{},{},{}",
                    r.n,
                    r.direct_ofdm.real_mul,
                    r.direct_ofdm.real_add,
                    r.direct_rpsdm.real_mul,
                    r.direct_rpsdm.real_add,
                    opt(r.fft, |o| o.real_mul),
                    opt(r.fft, |o| o.real_add),
                    opt(r.sparse_irpt, |o| o.real_mul),
                    opt(r.sparse_irpt, |o| o.real_add),
                    r.receiver_ofdm.real_mul,
                    r.receiver_ofdm.real_add,
                    r.receiver_rpsdm.real_mul,
                    r.receiver_rpsdm.real_add,
                )
                .unwrap();
            }
            s
        }
        Format::Table => {
            let mut s = format!(
                "{:>6} {:>12} {:>12} {:>12} {:>12}\n",
                "N", "FFT mul", "FFT add", "IRPT mul", "IRPT add"
            );
            for r in &rows {
                let cell = |o: Option<rpsdm::transforms::OpCount>,
                            f: fn(&rpsdm::transforms::OpCount) -> u64| {
                    o.map(|o| f(&o).to_string()).unwrap_or_else(|| "-".into())
                };
                writeln!(
                    s,
                    "{:>6} {:>12} {:>12} {:>12} {:>12}",
                    r.n,
                    cell(r.fft, |o| o.real_mul),
                    cell(r.fft, |o| o.real_add),
                    cell(r.sparse_irpt, |o| o.real_mul),
                    cell(r.sparse_irpt, |o| o.real_add)
                )
                .unwrap();
            }
            s
        }
    };
    Ok(vec![Artifact {
        label: None,
        contents,
    }])
}

fn dump_basis(cfg: &SimConfig) -> Result<Vec<Artifact>, RunError> {
    let transforms = cfg
        .n
        .iter()
        .map(|&n| PeriodicTransform::<f64>::new(n))
        .collect::<Result<Vec<_>, Error>>()?;
    if cfg.format == Format::Json {
        let results: Vec<Value> = transforms
            .iter()
            .map(|t| {
                let e_t: Vec<&[i64]> = (0..t.n()).map(|r| t.e_t().row(r)).collect();
                json!({
                    "n": t.n(),
                    "layout": t.layout(),
                    "e_t": e_t,
                    "q_norm": t.q_norm(),
                    "residual": t.residual(),
                })
            })
            .collect();
        return Ok(vec![envelope(cfg, results)?]);
    }
    let mut csv = String::from("n,row,col,q,e_t,q_norm\n");
    for t in &transforms {
        let col_q: Vec<u64> = t
            .layout()
            .spans()
            .flat_map(|s| std::iter::repeat_n(s.q, s.width))
            .collect();
        for r in 0..t.n() {
            for (c, q) in col_q.iter().enumerate() {
                writeln!(
                    csv,
                    "{},{r},{c},{q},{},{}",
                    t.n(),
                    t.e_t().get(r, c),
                    num(t.q_norm()[c])
                )
                .unwrap();
            }
        }
    }
    Ok(vec![Artifact {
        label: None,
        contents: csv,
    }])
}
