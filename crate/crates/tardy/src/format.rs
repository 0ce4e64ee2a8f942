//! Instance files: one job per line as `p d`, `#` starts a comment, blank
//! lines are skipped. LF and CRLF are accepted; rendering emits LF.

use tardy_core::model::{InstanceError, Job, JobInstance};

/// A malformed instance file.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    /// A line that is not two non-negative integers.
    #[error("line {line}: {message}")]
    Syntax {
        /// 1-based line number.
        line: usize,
        /// What is wrong with it.
        message: String,
    },
    /// Well-formed lines that do not make a valid instance.
    #[error("line {line}: {source}")]
    Invalid {
        /// 1-based line of the offending job.
        line: usize,
        /// The rejection.
        source: InstanceError,
    },
    /// No jobs at all.
    #[error("no jobs in instance file")]
    Empty,
}

/// Parses an instance file.
pub fn parse_instance(text: &str) -> Result<JobInstance, ParseError> {
    let mut jobs = Vec::new();
    let mut lines = Vec::new();
    for (idx, raw) in text.split('\n').enumerate() {
        let line = idx + 1;
        let content = raw.strip_suffix('\r').unwrap_or(raw);
        let content = content.split('#').next().unwrap_or("");
        let mut fields = content.split_ascii_whitespace();
        let Some(first) = fields.next() else { continue };
        let syntax = |message: String| ParseError::Syntax { line, message };
        let second = fields
            .next()
            .ok_or_else(|| syntax("expected two integers `p d`".into()))?;
        if let Some(extra) = fields.next() {
            return Err(syntax(format!("unexpected trailing field `{extra}`")));
        }
        let number = |field: &str, name: &str| {
            field
                .parse::<u64>()
                .map_err(|_| syntax(format!("{name} `{field}` is not a non-negative integer")))
        };
        jobs.push(Job::new(number(first, "processing time")?, number(second, "due date")?));
        lines.push(line);
    }
    if jobs.is_empty() {
        return Err(ParseError::Empty);
    }
    JobInstance::new(jobs).map_err(|source| {
        let line = match source {
            InstanceError::ZeroProcessingTime { job } | InstanceError::DueDateTooLarge { job, .. } => lines[job],
            _ => *lines.last().expect("non-empty"),
        };
        ParseError::Invalid { line, source }
    })
}

/// Renders an instance, one `p d` line per job in index order.
pub fn render_instance(instance: &JobInstance) -> String {
    let mut out = String::with_capacity(instance.len() * 8);
    for job in instance.jobs() {
        out.push_str(&format!("{} {}\n", job.p, job.d));
    }
    out
}
