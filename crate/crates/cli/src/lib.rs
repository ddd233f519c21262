//! Command-line front end of the exploration flow.

pub mod config;
pub mod pipeline;

/// Process exit status of a failed command: 1 when the input or the
/// invocation is at fault, 2 otherwise.
pub fn exit_code(err: &anyhow::Error) -> i32 {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<axdse::Error>() {
            use axdse::Error as E;
            return match e {
                E::InvalidNetlist(_) => 2,
                _ => 1,
            };
        }
        if cause.is::<UsageError>() || cause.is::<std::io::Error>() || cause.is::<toml::de::Error>() || cause.is::<csv::Error>() || cause.is::<serde_json::Error>() {
            return 1;
        }
    }
    2
}

/// Invalid invocation or configuration.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}
