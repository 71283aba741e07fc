//! Batch front end: parse input documents, run the matching pipeline and
//! produce a report with a deterministic exit code.

pub mod input;
pub mod report;

use neron_core::jacobian::{theorem_pipeline_with, JacobianError, PipelineOptions};
use neron_core::semistable::{semistable_report, SemistableError};
use neron_core::torus::torus_report;
use neron_core::{Characters, Datum, Fibre};

pub use input::{parse_input, DocOptions, Format, InputDocument, InputError, Kind, Payload};
pub use report::{Diagnostic, Report, Summary};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RunOptions {
    /// Treat warnings as errors.
    pub strict: bool,
    /// Compute the invariants oracle alongside the exact-sequence pipeline.
    pub oracle: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { strict: false, oracle: true }
    }
}

/// Flags given on the command line; unset ones fall back to the document's options.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Overrides {
    pub format: Option<Format>,
    pub strict: bool,
    pub no_oracle: bool,
}

impl Overrides {
    pub fn resolve(&self, doc: &DocOptions) -> (Format, RunOptions) {
        let format = self.format.or(doc.format).unwrap_or_default();
        let strict = self.strict || doc.strict.unwrap_or(false);
        let oracle = !self.no_oracle && doc.oracle.unwrap_or(true);
        (format, RunOptions { strict, oracle })
    }
}

fn escalate(report: &mut Report, strict: bool) {
    if strict {
        for w in report.warnings.drain(..) {
            report.errors.push(Diagnostic { message: format!("{} (strict mode)", w.message), ..w });
        }
    }
}

fn run_jacobian(f: &Fibre, opts: &RunOptions) -> Report {
    let mut report = Report::new(Kind::Jacobian);
    let validation = f.validate();
    report.warnings = validation.warnings.iter().map(|w| Diagnostic::new(w.code(), w)).collect();
    report.errors = validation.violations.iter().map(|v| Diagnostic::new(v.code(), v)).collect();
    escalate(&mut report, opts.strict);
    if !report.errors.is_empty() {
        return report;
    }
    let pipeline = PipelineOptions { oracle: opts.oracle, bases: None };
    match theorem_pipeline_with(f, &pipeline) {
        Ok(r) => report.result = Some(Summary::Jacobian((&r).into())),
        Err(JacobianError::Inconsistent(r)) => {
            let e = JacobianError::Inconsistent(r.clone());
            report.result = Some(Summary::Jacobian(r.as_ref().into()));
            report.errors.push(Diagnostic::new(e.code(), &e));
        }
        Err(e) => report.errors.push(Diagnostic::new(e.code(), &e)),
    }
    report
}

fn run_torus(x: &Characters) -> Report {
    let mut report = Report::new(Kind::Torus);
    let r = torus_report(x);
    if !r.lemma_holds || !r.ranks_agree {
        report
            .errors
            .push(Diagnostic::new("INCONSISTENT", "invariant covectors and torsion-free coinvariants disagree"));
    }
    report.result = Some(Summary::Torus((&r).into()));
    report
}

fn run_semistable(u: &Datum, opts: &RunOptions) -> Report {
    let mut report = Report::new(Kind::Semistable);
    report.errors = u.validate().iter().map(|v| Diagnostic::new(v.code(), v)).collect();
    escalate(&mut report, opts.strict);
    if !report.errors.is_empty() {
        return report;
    }
    match semistable_report(u) {
        Ok(r) => report.result = Some(Summary::Semistable((&r).into())),
        Err(SemistableError::Inconsistent(r)) => {
            let e = SemistableError::Inconsistent(r.clone());
            report.result = Some(Summary::Semistable(r.as_ref().into()));
            report.errors.push(Diagnostic::new(e.code(), &e));
        }
        Err(e) => report.errors.push(Diagnostic::new(e.code(), &e)),
    }
    report
}

pub fn run(doc: &InputDocument, opts: &RunOptions) -> Report {
    match &doc.payload {
        Payload::Jacobian(f) => run_jacobian(f, opts),
        Payload::Torus(x) => run_torus(x),
        Payload::Semistable(u) => run_semistable(u, opts),
    }
}

/// Parse and run one document, turning input errors into a report.
pub fn process(text: &str, kind: Kind, flags: &Overrides) -> (Report, Format) {
    match parse_input(text, Some(kind)) {
        Ok(doc) => {
            let (format, opts) = flags.resolve(&doc.options);
            (run(&doc, &opts), format)
        }
        Err(e) => {
            let mut report = Report::new(kind);
            report.errors.push(Diagnostic { code: e.code.to_string(), path: Some(e.path), message: e.message });
            (report, flags.format.unwrap_or_default())
        }
    }
}
