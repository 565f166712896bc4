//! Full per-document analysis: tokenize -> series -> zipf + weibull + mfdfa,
//! aggregated into a deterministic report bundle with CSV sidecars and
//! static plots.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::corpus::{self, Document, ScriptClass};
use crate::mfdfa::{self, MfdfaOptions, MfdfaResult};
use crate::plot::{Figure, SeriesStyle};
use crate::series::{self, DistributionTable, OutlierPolicy, Scope, Unit};
use crate::tokenizer::{self, Lexicon, PunctPolicy, TokenSequence};
use crate::weibull::{self, PointKind, WeibullFit};
use crate::zipf::{self, CrossoverFit, FitRange, PowerLawFit, RankTable};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("validation: {0}")]
    Validation(String),
    #[error("analysis: {0}")]
    Analysis(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DocumentSpec {
    pub path: String,
    #[serde(default)]
    pub id: Option<String>,
    #[serde(default)]
    pub script: Option<ScriptClass>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZipfOptions {
    #[serde(default = "default_true")]
    pub include_punct: bool,
    #[serde(default = "default_true")]
    pub case_fold: bool,
    #[serde(default = "default_fit_range")]
    pub fit_range: FitRange,
    #[serde(default = "default_true")]
    pub crossover: bool,
    #[serde(default = "default_min_segment")]
    pub min_segment: usize,
}

impl Default for ZipfOptions {
    fn default() -> Self {
        ZipfOptions {
            include_punct: true,
            case_fold: true,
            fit_range: FitRange::Auto,
            crossover: true,
            min_segment: 10,
        }
    }
}

fn default_true() -> bool {
    true
}
fn default_fit_range() -> FitRange {
    FitRange::Auto
}
fn default_min_segment() -> usize {
    10
}
fn default_cjk_threshold() -> f64 {
    corpus::DEFAULT_CJK_THRESHOLD
}
fn default_units() -> Vec<Unit> {
    vec![Unit::Words]
}
fn default_scopes() -> Vec<Scope> {
    vec![Scope::AllPunct, Scope::TerminalOnly]
}
fn default_weibull_floor() -> usize {
    weibull::DEFAULT_FIT_FLOOR
}
fn default_outlier_policy() -> OutlierPolicy {
    OutlierPolicy::None
}
fn default_output_dir() -> String {
    "out".to_string()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisConfig {
    pub documents: Vec<DocumentSpec>,
    #[serde(default)]
    pub lexicon: Option<String>,
    #[serde(default = "default_cjk_threshold")]
    pub cjk_threshold: f64,
    /// Overrides for the per-script punctuation policies; defaults recorded
    /// in the provenance block when absent.
    #[serde(default)]
    pub cjk_policy: Option<PunctPolicy>,
    #[serde(default)]
    pub latin_policy: Option<PunctPolicy>,
    #[serde(default = "default_units")]
    pub units: Vec<Unit>,
    #[serde(default = "default_scopes")]
    pub scopes: Vec<Scope>,
    #[serde(default)]
    pub zipf: ZipfOptions,
    #[serde(default = "default_weibull_floor")]
    pub weibull_floor: usize,
    #[serde(default)]
    pub mfdfa: MfdfaOptions,
    #[serde(default = "default_outlier_policy")]
    pub outlier_policy: OutlierPolicy,
    #[serde(default = "default_output_dir")]
    pub output_dir: String,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig {
            documents: Vec::new(),
            lexicon: None,
            cjk_threshold: default_cjk_threshold(),
            cjk_policy: None,
            latin_policy: None,
            units: default_units(),
            scopes: default_scopes(),
            zipf: ZipfOptions::default(),
            weibull_floor: default_weibull_floor(),
            mfdfa: MfdfaOptions::default(),
            outlier_policy: default_outlier_policy(),
            output_dir: default_output_dir(),
        }
    }
}

/// Per-stage result that keeps one failing series from aborting the rest.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Outcome<T> {
    Ok { value: T },
    Error { message: String },
}

impl<T> Outcome<T> {
    pub fn from_result<E: std::fmt::Display>(r: Result<T, E>) -> Self {
        match r {
            Ok(value) => Outcome::Ok { value },
            Err(e) => Outcome::Error {
                message: e.to_string(),
            },
        }
    }

    pub fn ok(&self) -> Option<&T> {
        match self {
            Outcome::Ok { value } => Some(value),
            Outcome::Error { .. } => None,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ZipfReport {
    pub vocabulary: usize,
    pub total_tokens: u64,
    pub table: RankTable,
    pub fit: Outcome<PowerLawFit>,
    pub crossover: Option<Outcome<CrossoverFit>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SeriesReport {
    pub unit: Unit,
    pub scope: Scope,
    pub n_raw: usize,
    pub n_used: usize,
    pub outliers_removed: Vec<(usize, u64)>,
    pub values: Vec<u64>,
    pub distribution: Outcome<DistributionTable>,
    pub weibull: Outcome<WeibullFit>,
    pub mfdfa: Outcome<MfdfaResult>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DocumentReport {
    pub id: String,
    pub script: ScriptClass,
    pub char_count: usize,
    pub token_count: usize,
    pub word_count: usize,
    pub zipf: Outcome<ZipfReport>,
    pub series: Vec<SeriesReport>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Provenance {
    pub toolkit_version: String,
    pub config_sha256: String,
    pub cjk_policy: PunctPolicy,
    pub latin_policy: PunctPolicy,
    pub cjk_threshold: f64,
    pub detrend_order: usize,
    pub scaling_mode: mfdfa::ScalingMode,
    pub outlier_policy: OutlierPolicy,
    pub weibull_floor: usize,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReportBundle {
    pub provenance: Provenance,
    pub documents: Vec<DocumentReport>,
}

fn decision_notes() -> Vec<String> {
    [
        "prefix text before the first boundary counts as one gap",
        "text after the last boundary is dropped",
        "zero-length gaps between adjacent marks are skipped",
        "newline terminates only symbol runs not already terminated",
        "auto zipf fit range excludes the hapax plateau",
        "profile is mean-centered before cumulation",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect()
}

fn config_hash(config: &AnalysisConfig) -> String {
    let canonical = serde_json::to_string(config).expect("config serializes");
    let mut hasher = Sha256::new();
    hasher.update(canonical.as_bytes());
    let digest = hasher.finalize();
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

fn analyze_document(
    doc: &Document,
    tokens: &TokenSequence,
    config: &AnalysisConfig,
) -> DocumentReport {
    let zipf_report = match zipf::rank_frequency(
        tokens,
        config.zipf.include_punct,
        config.zipf.case_fold,
    ) {
        Ok(table) => {
            let fit = Outcome::from_result(zipf::fit_power_law(&table, config.zipf.fit_range));
            let crossover = if config.zipf.crossover {
                Some(Outcome::from_result(zipf::detect_crossover(
                    &table,
                    config.zipf.min_segment,
                )))
            } else {
                None
            };
            Outcome::Ok {
                value: ZipfReport {
                    vocabulary: table.entries.len(),
                    total_tokens: table.total_tokens,
                    table,
                    fit,
                    crossover,
                },
            }
        }
        Err(e) => Outcome::Error {
            message: e.to_string(),
        },
    };

    let mut series_reports = Vec::new();
    for &unit in &config.units {
        for &scope in &config.scopes {
            series_reports.push(analyze_series(tokens, unit, scope, config));
        }
    }

    DocumentReport {
        id: doc.id.clone(),
        script: doc.script,
        char_count: doc.char_count,
        token_count: tokens.tokens.len(),
        word_count: tokens.word_count(),
        zipf: zipf_report,
        series: series_reports,
    }
}

fn analyze_series(
    tokens: &TokenSequence,
    unit: Unit,
    scope: Scope,
    config: &AnalysisConfig,
) -> SeriesReport {
    let extracted = series::extract_distances(tokens, unit, scope);
    let raw = match extracted {
        Ok(s) => s,
        Err(e) => {
            return SeriesReport {
                unit,
                scope,
                n_raw: 0,
                n_used: 0,
                outliers_removed: Vec::new(),
                values: Vec::new(),
                distribution: Outcome::Error {
                    message: e.to_string(),
                },
                weibull: Outcome::Error {
                    message: "no series".to_string(),
                },
                mfdfa: Outcome::Error {
                    message: "no series".to_string(),
                },
            }
        }
    };
    let n_raw = raw.len();
    let trimmed = match series::trim_outliers(&raw, config.outlier_policy) {
        Ok(s) => s,
        Err(_) => raw.clone(),
    };
    let distribution = Outcome::from_result(series::empirical_distribution(&trimmed));
    let weibull_fit = Outcome::from_result(weibull::fit_discrete_weibull_with_floor(
        &trimmed,
        config.weibull_floor,
    ));
    let mfdfa_result = Outcome::from_result(mfdfa::run_mfdfa(&trimmed, &config.mfdfa));
    SeriesReport {
        unit,
        scope,
        n_raw,
        n_used: trimmed.len(),
        outliers_removed: trimmed.outliers_removed.clone(),
        values: trimmed.values,
        distribution,
        weibull: weibull_fit,
        mfdfa: mfdfa_result,
    }
}

/// Validate the config, load every input, and run all requested analyses.
/// Per-series failures are recorded in the bundle; only validation problems
/// abort the run.
pub fn run_pipeline(config: &AnalysisConfig) -> Result<ReportBundle, PipelineError> {
    if config.documents.is_empty() {
        return Err(PipelineError::Validation("no documents in config".into()));
    }
    if let Some(p) = &config.cjk_policy {
        p.validate().map_err(PipelineError::Validation)?;
    }
    if let Some(p) = &config.latin_policy {
        p.validate().map_err(PipelineError::Validation)?;
    }
    let lexicon: Option<Lexicon> = match &config.lexicon {
        Some(path) => Some(
            tokenizer::load_lexicon(Path::new(path))
                .map_err(|e| PipelineError::Validation(e.to_string()))?,
        ),
        None => None,
    };
    // Load everything before analyzing anything.
    let mut docs = Vec::new();
    for spec in &config.documents {
        let mut doc = corpus::load_document_with_threshold(
            Path::new(&spec.path),
            spec.script,
            config.cjk_threshold,
        )
        .map_err(|e| PipelineError::Validation(e.to_string()))?;
        if let Some(id) = &spec.id {
            doc.id = id.clone();
        }
        if doc.script == ScriptClass::Cjk && lexicon.is_none() {
            return Err(PipelineError::Validation(format!(
                "document {} is CJK but no lexicon was configured",
                doc.id
            )));
        }
        docs.push(doc);
    }

    let cjk_policy = config
        .cjk_policy
        .clone()
        .unwrap_or_else(PunctPolicy::cjk_default);
    let latin_policy = config
        .latin_policy
        .clone()
        .unwrap_or_else(PunctPolicy::latin_default);

    let mut reports = Vec::new();
    for doc in &docs {
        let tokens = match doc.script {
            ScriptClass::Cjk => tokenizer::segment_cjk(
                doc,
                lexicon.as_ref().expect("checked during validation"),
                &cjk_policy,
            ),
            ScriptClass::Latin => tokenizer::tokenize_latin(doc, &latin_policy),
        }
        .map_err(|e| PipelineError::Analysis(e.to_string()))?;
        reports.push(analyze_document(doc, &tokens, config));
    }

    Ok(ReportBundle {
        provenance: Provenance {
            toolkit_version: env!("CARGO_PKG_VERSION").to_string(),
            config_sha256: config_hash(config),
            cjk_policy,
            latin_policy,
            cjk_threshold: config.cjk_threshold,
            detrend_order: config.mfdfa.detrend_order,
            scaling_mode: config.mfdfa.scaling_mode,
            outlier_policy: config.outlier_policy,
            weibull_floor: config.weibull_floor,
            notes: decision_notes(),
        },
        documents: reports,
    })
}

/// Serialize the bundle as the canonical report JSON.
pub fn report_json(bundle: &ReportBundle) -> String {
    serde_json::to_string_pretty(bundle).expect("bundle serializes")
}

/// Write report.json plus CSV sidecars under `dir`.
pub fn write_report(bundle: &ReportBundle, dir: &Path) -> Result<Vec<PathBuf>, PipelineError> {
    fs::create_dir_all(dir)?;
    let mut files = Vec::new();
    let report = dir.join("report.json");
    fs::write(&report, report_json(bundle))?;
    files.push(report);
    for doc in &bundle.documents {
        if let Some(z) = doc.zipf.ok() {
            let path = dir.join(format!("{}__rank_table.csv", doc.id));
            fs::write(&path, z.table.to_csv())?;
            files.push(path);
        }
        for sr in &doc.series {
            let base = format!("{}__{}_{}", doc.id, sr.unit, sr.scope);
            let csv = dir.join(format!("{base}__series.csv"));
            let mut body = String::from("index,value\n");
            for (i, v) in sr.values.iter().enumerate() {
                body.push_str(&format!("{i},{v}\n"));
            }
            fs::write(&csv, body)?;
            files.push(csv);
            let meta = dir.join(format!("{base}__series.json"));
            fs::write(
                &meta,
                serde_json::to_string_pretty(&serde_json::json!({
                    "unit": sr.unit,
                    "scope": sr.scope,
                    "n_raw": sr.n_raw,
                    "n_used": sr.n_used,
                    "outliers_removed": sr.outliers_removed,
                }))
                .expect("meta serializes"),
            )?;
            files.push(meta);
            if let Some(m) = sr.mfdfa.ok() {
                let path = dir.join(format!("{base}__fq.csv"));
                fs::write(&path, m.matrix.to_csv())?;
                files.push(path);
                for (i, rr) in m.ranges.iter().enumerate() {
                    let hq = dir.join(format!("{base}__hq_{i}.csv"));
                    fs::write(&hq, rr.hurst.to_csv())?;
                    files.push(hq);
                    let spec = dir.join(format!("{base}__spectrum_{i}.csv"));
                    fs::write(&spec, rr.spectrum.to_csv())?;
                    files.push(spec);
                }
            }
        }
    }
    Ok(files)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotFormat {
    Svg,
    Csv,
}

fn figure_files(
    fig: &Figure,
    dir: &Path,
    base: &str,
    format: PlotFormat,
    files: &mut Vec<PathBuf>,
) -> Result<(), PipelineError> {
    let (ext, body) = match format {
        PlotFormat::Svg => ("svg", fig.to_svg()),
        PlotFormat::Csv => ("csv", fig.to_csv()),
    };
    let path = dir.join(format!("{base}.{ext}"));
    fs::write(&path, body)?;
    files.push(path);
    Ok(())
}

/// Render one file per figure family per document.
pub fn emit_plots(
    bundle: &ReportBundle,
    format: PlotFormat,
    dir: &Path,
) -> Result<Vec<PathBuf>, PipelineError> {
    if bundle.documents.is_empty() {
        return Err(PipelineError::Analysis("empty bundle, nothing to plot".into()));
    }
    fs::create_dir_all(dir)?;
    let mut files = Vec::new();
    for doc in &bundle.documents {
        if let Some(z) = doc.zipf.ok() {
            let pts: Vec<(f64, f64)> = z
                .table
                .entries
                .iter()
                .map(|e| (e.rank as f64, e.prob))
                .collect();
            let mut fig = Figure::new(
                &format!("{} rank-frequency", doc.id),
                "rank",
                "probability",
            )
            .log_log()
            .with_series("empirical", pts, SeriesStyle::Points);
            if let Some(fit) = z.fit.ok() {
                let line: Vec<(f64, f64)> = [fit.fit_range.0, fit.fit_range.1]
                    .iter()
                    .map(|&r| {
                        let lr = (r as f64).ln();
                        ((r as f64), (fit.intercept - fit.gamma * lr).exp())
                    })
                    .collect();
                fig = fig.with_series("power law", line, SeriesStyle::Line);
            }
            figure_files(
                &fig,
                dir,
                &format!("{}__rank_frequency", doc.id),
                format,
                &mut files,
            )?;
        }
        for sr in &doc.series {
            let base = format!("{}__{}_{}", doc.id, sr.unit, sr.scope);
            if let (Some(table), fitted) = (sr.distribution.ok(), sr.weibull.ok()) {
                let emp: Vec<(f64, f64)> = table
                    .support
                    .iter()
                    .zip(&table.pmf)
                    .map(|(&k, &p)| (k as f64, p))
                    .collect();
                let mut pmf_fig = Figure::new(
                    &format!("{} PMF ({} / {})", doc.id, sr.unit, sr.scope),
                    "k",
                    "P(k)",
                )
                .with_series("empirical", emp, SeriesStyle::Bars);
                if let Some(fit) = fitted {
                    let kmax = *table.support.last().unwrap_or(&1);
                    let curve: Vec<(f64, f64)> = (1..=kmax)
                        .filter_map(|k| {
                            crate::weibull::dweibull_eval(k, fit.params)
                                .ok()
                                .map(|e| (k as f64, e.pmf))
                        })
                        .collect();
                    pmf_fig = pmf_fig.with_series("fitted", curve, SeriesStyle::Line);

                    let hazard: Vec<(f64, f64)> = (1..=kmax)
                        .filter_map(|k| {
                            crate::weibull::dweibull_eval(k, fit.params)
                                .ok()
                                .map(|e| (k as f64, e.hazard))
                        })
                        .collect();
                    let hz_fig = Figure::new(
                        &format!("{} hazard ({} / {})", doc.id, sr.unit, sr.scope),
                        "k",
                        "h(k)",
                    )
                    .with_series("fitted", hazard, SeriesStyle::Line);
                    figure_files(&hz_fig, dir, &format!("{base}__hazard"), format, &mut files)?;

                    if let Ok(plot) =
                        weibull::weibull_plot(table, Some(fit.params), true)
                    {
                        let emp_pts: Vec<(f64, f64)> = plot
                            .points
                            .iter()
                            .filter(|p| p.kind == PointKind::Empirical)
                            .map(|p| (p.x, p.y))
                            .collect();
                        let fit_pts: Vec<(f64, f64)> = plot
                            .points
                            .iter()
                            .filter(|p| p.kind == PointKind::Fitted)
                            .map(|p| (p.x, p.y))
                            .collect();
                        let wp_fig = Figure::new(
                            &format!("{} rescaled Weibull plot ({} / {})", doc.id, sr.unit, sr.scope),
                            "x'",
                            "y'",
                        )
                        .with_series("empirical", emp_pts, SeriesStyle::Points)
                        .with_series("fitted", fit_pts, SeriesStyle::Line);
                        figure_files(
                            &wp_fig,
                            dir,
                            &format!("{base}__weibull_plot"),
                            format,
                            &mut files,
                        )?;
                    }
                }
                figure_files(&pmf_fig, dir, &format!("{base}__weibull_pmf"), format, &mut files)?;
            }
            if let Some(m) = sr.mfdfa.ok() {
                let mut fq_fig = Figure::new(
                    &format!("{} Fq(s) ({} / {})", doc.id, sr.unit, sr.scope),
                    "s",
                    "Fq(s)",
                )
                .log_log();
                for &q in &[-4.0, -2.0, 0.0, 2.0, 4.0] {
                    if let Some(j) = m.matrix.qs.iter().position(|&v| (v - q).abs() < 1e-9) {
                        let pts: Vec<(f64, f64)> = m
                            .matrix
                            .scales
                            .iter()
                            .enumerate()
                            .map(|(i, &s)| (s as f64, m.matrix.values[i][j]))
                            .collect();
                        fq_fig = fq_fig.with_series(&format!("q={q}"), pts, SeriesStyle::Line);
                    }
                }
                figure_files(&fq_fig, dir, &format!("{base}__fq_family"), format, &mut files)?;

                let mut sp_fig = Figure::new(
                    &format!("{} f(alpha) ({} / {})", doc.id, sr.unit, sr.scope),
                    "alpha",
                    "f(alpha)",
                );
                for (i, rr) in m.ranges.iter().enumerate() {
                    let pts: Vec<(f64, f64)> = rr
                        .spectrum
                        .alpha
                        .iter()
                        .zip(&rr.spectrum.f)
                        .map(|(&a, &f)| (a, f))
                        .collect();
                    sp_fig = sp_fig.with_series(
                        &format!("range {}..{}", rr.range.0, rr.range.1),
                        pts,
                        SeriesStyle::Line,
                    );
                    let _ = i;
                }
                figure_files(&sp_fig, dir, &format!("{base}__spectrum"), format, &mut files)?;
            }
        }
    }
    Ok(files)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_round_trips() {
        let config = AnalysisConfig {
            documents: vec![DocumentSpec {
                path: "a.txt".into(),
                id: Some("a".into()),
                script: Some(ScriptClass::Latin),
            }],
            ..AnalysisConfig::default()
        };
        let json = serde_json::to_string(&config).unwrap();
        let back: AnalysisConfig = serde_json::from_str(&json).unwrap();
        assert_eq!(config, back);
        assert_eq!(json, serde_json::to_string(&back).unwrap());
    }

    #[test]
    fn empty_config_is_validation_error() {
        let err = run_pipeline(&AnalysisConfig::default()).unwrap_err();
        assert!(matches!(err, PipelineError::Validation(_)));
    }

    #[test]
    fn missing_document_is_validation_error() {
        let config = AnalysisConfig {
            documents: vec![DocumentSpec {
                path: "/nonexistent/file.txt".into(),
                id: None,
                script: None,
            }],
            ..AnalysisConfig::default()
        };
        assert!(matches!(
            run_pipeline(&config).unwrap_err(),
            PipelineError::Validation(_)
        ));
    }

    #[test]
    fn config_hash_is_stable() {
        let config = AnalysisConfig::default();
        assert_eq!(config_hash(&config), config_hash(&config.clone()));
        assert_eq!(config_hash(&config).len(), 64);
    }
}
