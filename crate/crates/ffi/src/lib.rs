//! C ABI over the debtscope analyzer.
//!
//! Every fallible call returns a [`DsStatus`]; on anything other than
//! `DS_STATUS_OK` a description is available from [`ds_last_error`] on the same
//! thread until the next failing call. Handles are opaque and must be released
//! with their `_free` function. Strings returned through out-parameters are
//! owned by the caller and released with [`ds_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::ptr;

use debtscope::analysis::analyze_with_config;
use debtscope::config::Config;
use debtscope::coverage::load_coverage;
use debtscope::debt::{format_effort, parse_effort, td_ratio, CostModel};
use debtscope::monitor::{
    evaluate_gate, load_gate_config, render_trend, trend_series, GateStatus, HistoryStore, PlotFormat, Snapshot,
};
use debtscope::report::{render_report, ReportFormat};
use debtscope::Error;

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DsStatus {
    Ok = 0,
    /// A required pointer was null, a string was not UTF-8, or an effort
    /// string did not parse.
    InvalidArgument = 1,
    /// The project root or a named file does not exist.
    NotFound = 2,
    Io = 3,
    /// Bad config, rule manifest, gate config or coverage report.
    Config = 4,
    /// The history store is held by another writer.
    Locked = 5,
    /// The history store contains a record that does not parse.
    Corrupt = 6,
    UnknownRun = 7,
    UnknownMetric = 8,
    /// The metric exists but has no value for this run (e.g. coverage without
    /// a coverage report).
    NoValue = 9,
    /// A bug inside the library; the call had no effect.
    Internal = 10,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DsReportFormat {
    Text = 0,
    Csv = 1,
    Html = 2,
    Json = 3,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DsPlotFormat {
    Csv = 0,
    Svg = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DsGateStatus {
    Pass = 0,
    Warn = 1,
    Fail = 2,
}

/// One analysis run: a fresh analysis or a run loaded from history.
pub struct DsAnalysis {
    snapshot: Snapshot,
}

/// A project's run history.
pub struct DsStore {
    store: HistoryStore,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: &str) {
    let text = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(text));
}

struct Failure(DsStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::RootNotFound(_) => DsStatus::NotFound,
            Error::Io { source, .. } if source.kind() == std::io::ErrorKind::NotFound => DsStatus::NotFound,
            Error::Io { .. } => DsStatus::Io,
            Error::Config(_) | Error::Rules(_) | Error::Coverage { .. } => DsStatus::Config,
            Error::StoreLocked(_) => DsStatus::Locked,
            Error::CorruptRecord { .. } => DsStatus::Corrupt,
            Error::UnknownRun { .. } => DsStatus::UnknownRun,
            Error::UnknownMetric { .. } => DsStatus::UnknownMetric,
            Error::Invalid(_) => DsStatus::Internal,
        };
        Failure(status, e.to_string())
    }
}

fn invalid(message: impl Into<String>) -> Failure {
    Failure(DsStatus::InvalidArgument, message.into())
}

/// Run `body`, turning errors and panics into a status plus last-error text.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> DsStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => DsStatus::Ok,
        Ok(Err(Failure(status, message))) => {
            set_last_error(&message);
            status
        }
        Err(_) => {
            set_last_error("internal panic");
            DsStatus::Internal
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, name: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(invalid(format!("{name} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| invalid(format!("{name} is not valid UTF-8")))
}

unsafe fn opt_path_arg(p: *const c_char, name: &str) -> Result<Option<PathBuf>, Failure> {
    if p.is_null() {
        Ok(None)
    } else {
        str_arg(p, name).map(|s| Some(PathBuf::from(s)))
    }
}

unsafe fn out_arg<'a, T>(p: *mut T, name: &str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| invalid(format!("{name} is null")))
}

unsafe fn handle<'a, T>(p: *const T, name: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| invalid(format!("{name} is null")))
}

fn into_c_string(text: String) -> Result<*mut c_char, Failure> {
    CString::new(text).map(CString::into_raw).map_err(|_| Failure(DsStatus::Internal, "output contains NUL".into()))
}

/// Description of the last failure on this thread, or null if none. The
/// pointer stays valid until the next failing call on this thread.
#[no_mangle]
pub extern "C" fn ds_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ds_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Release a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed already.
#[no_mangle]
pub unsafe extern "C" fn ds_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Analyze the project at `root`.
///
/// `config` names a `debtscope.conf`; null uses the one in `root` if present.
/// `coverage` names an LCOV or Cobertura report, or null. When `record` is
/// true the run is appended to the project's history and gets a run id.
///
/// # Safety
/// String arguments must be null or NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ds_analyze(
    root: *const c_char,
    config: *const c_char,
    coverage: *const c_char,
    record: bool,
    out: *mut *mut DsAnalysis,
) -> DsStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        *out = ptr::null_mut();
        let root = Path::new(str_arg(root, "root")?);
        let config = Config::load(root, opt_path_arg(config, "config")?.as_deref())?;
        let coverage = match opt_path_arg(coverage, "coverage")? {
            Some(p) if !p.is_file() => {
                return Err(Failure(DsStatus::NotFound, format!("coverage report {} not found", p.display())))
            }
            Some(p) => Some(load_coverage(&p)?),
            None => None,
        };
        let mut snapshot = analyze_with_config(root, &config, coverage.as_ref())?.snapshot;
        if record {
            snapshot.run_id = HistoryStore::for_project(root).record(&snapshot)?;
        }
        *out = Box::into_raw(Box::new(DsAnalysis { snapshot }));
        Ok(())
    })
}

/// Release an analysis. Null is ignored.
///
/// # Safety
/// `a` must come from this library and not have been freed already.
#[no_mangle]
pub unsafe extern "C" fn ds_analysis_free(a: *mut DsAnalysis) {
    if !a.is_null() {
        drop(Box::from_raw(a));
    }
}

/// Run id of the analysis; 0 when it was not recorded.
///
/// # Safety
/// `a` must be a live analysis handle or null (which yields 0).
#[no_mangle]
pub unsafe extern "C" fn ds_analysis_run_id(a: *const DsAnalysis) -> u64 {
    a.as_ref().map_or(0, |a| a.snapshot.run_id)
}

/// Look up a metric by key (e.g. `"td_ratio"`, `"blocker_issues"`).
///
/// # Safety
/// `a` must be a live handle, `key` NUL-terminated, `value` writable.
#[no_mangle]
pub unsafe extern "C" fn ds_analysis_metric(a: *const DsAnalysis, key: *const c_char, value: *mut f64) -> DsStatus {
    guard(|| {
        let a = handle(a, "analysis")?;
        let key = str_arg(key, "key")?;
        let value = out_arg(value, "value")?;
        match a.snapshot.metric(key)? {
            Some(v) => {
                *value = v;
                Ok(())
            }
            None => Err(Failure(DsStatus::NoValue, format!("metric `{key}` has no value for this run"))),
        }
    })
}

/// Render the report for an analysis into a newly allocated string.
///
/// # Safety
/// `a` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ds_analysis_report(
    a: *const DsAnalysis,
    format: DsReportFormat,
    out: *mut *mut c_char,
) -> DsStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        *out = ptr::null_mut();
        let a = handle(a, "analysis")?;
        let format = match format {
            DsReportFormat::Text => ReportFormat::Text,
            DsReportFormat::Csv => ReportFormat::Csv,
            DsReportFormat::Html => ReportFormat::Html,
            DsReportFormat::Json => ReportFormat::Json,
        };
        *out = into_c_string(render_report(&a.snapshot, format)?)?;
        Ok(())
    })
}

/// Evaluate the gate config at `gate_path` against an analysis.
///
/// # Safety
/// `a` must be a live handle, `gate_path` NUL-terminated, `status` writable.
#[no_mangle]
pub unsafe extern "C" fn ds_gate_evaluate(
    a: *const DsAnalysis,
    gate_path: *const c_char,
    status: *mut DsGateStatus,
) -> DsStatus {
    guard(|| {
        let a = handle(a, "analysis")?;
        let path = Path::new(str_arg(gate_path, "gate_path")?);
        let status = out_arg(status, "status")?;
        if !path.is_file() {
            return Err(Failure(DsStatus::NotFound, format!("gate config {} not found", path.display())));
        }
        let result = evaluate_gate(&a.snapshot, &load_gate_config(path)?)?;
        *status = match result.status {
            GateStatus::Pass => DsGateStatus::Pass,
            GateStatus::Warn => DsGateStatus::Warn,
            GateStatus::Fail => DsGateStatus::Fail,
        };
        Ok(())
    })
}

/// Open the run history of the project at `root`. The history need not exist
/// yet.
///
/// # Safety
/// `root` must be NUL-terminated and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ds_store_open(root: *const c_char, out: *mut *mut DsStore) -> DsStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        *out = ptr::null_mut();
        let root = Path::new(str_arg(root, "root")?);
        if !root.is_dir() {
            return Err(Failure(DsStatus::NotFound, format!("project root {} not found", root.display())));
        }
        *out = Box::into_raw(Box::new(DsStore { store: HistoryStore::for_project(root) }));
        Ok(())
    })
}

/// Release a store handle. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed already.
#[no_mangle]
pub unsafe extern "C" fn ds_store_free(s: *mut DsStore) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Number of recorded runs.
///
/// # Safety
/// `s` must be a live handle and `count` writable.
#[no_mangle]
pub unsafe extern "C" fn ds_store_run_count(s: *const DsStore, count: *mut u64) -> DsStatus {
    guard(|| {
        let s = handle(s, "store")?;
        let count = out_arg(count, "count")?;
        *count = s.store.snapshots()?.len() as u64;
        Ok(())
    })
}

/// Load a recorded run; `run_id` 0 means the latest.
///
/// # Safety
/// `s` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ds_store_load(s: *const DsStore, run_id: u64, out: *mut *mut DsAnalysis) -> DsStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        *out = ptr::null_mut();
        let s = handle(s, "store")?;
        let snapshot = if run_id == 0 {
            s.store.latest()?.ok_or_else(|| Failure(DsStatus::UnknownRun, "no runs recorded".into()))?
        } else {
            s.store.get(run_id)?
        };
        *out = Box::into_raw(Box::new(DsAnalysis { snapshot }));
        Ok(())
    })
}

/// Render the history of one metric as CSV or SVG into a newly allocated
/// string.
///
/// # Safety
/// `s` must be a live handle, `key` NUL-terminated, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ds_store_trend(
    s: *const DsStore,
    key: *const c_char,
    format: DsPlotFormat,
    out: *mut *mut c_char,
) -> DsStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        *out = ptr::null_mut();
        let s = handle(s, "store")?;
        let key = str_arg(key, "key")?;
        let format = match format {
            DsPlotFormat::Csv => PlotFormat::Csv,
            DsPlotFormat::Svg => PlotFormat::Svg,
        };
        let series = trend_series(&s.store.snapshots()?, key, None)?;
        *out = into_c_string(render_trend(&series, key, format)?)?;
        Ok(())
    })
}

/// Technical-debt ratio in percent under the default cost model; 0 when
/// `loc` is 0.
#[no_mangle]
pub extern "C" fn ds_td_ratio(remediation_minutes: u64, loc: u64) -> f64 {
    td_ratio(remediation_minutes, loc, &CostModel::default())
}

/// Format minutes as an effort string such as `"2d 6h"` (8-hour days). Returns
/// null only on allocation failure; release with [`ds_string_free`].
#[no_mangle]
pub extern "C" fn ds_format_effort(minutes: u64) -> *mut c_char {
    CString::new(format_effort(minutes)).map_or(ptr::null_mut(), CString::into_raw)
}

/// Parse an effort string produced by [`ds_format_effort`] back to minutes.
///
/// # Safety
/// `text` must be NUL-terminated and `minutes` writable.
#[no_mangle]
pub unsafe extern "C" fn ds_parse_effort(text: *const c_char, minutes: *mut u64) -> DsStatus {
    guard(|| {
        let text = str_arg(text, "text")?;
        let minutes = out_arg(minutes, "minutes")?;
        *minutes = parse_effort(text).ok_or_else(|| invalid(format!("`{text}` is not an effort string")))?;
        Ok(())
    })
}
