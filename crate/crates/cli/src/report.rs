//! Report envelopes, failures and exit codes.

use serde::Serialize;
use serde_json::Value;

use koszulkit::{Certificate, Error};

pub const EXIT_OK: u8 = 0;
pub const EXIT_MATH: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

/// What a numeric claim in a payload depends on.
#[derive(Clone, Debug, Default, Serialize)]
pub struct Scope {
    /// Word-length window of tensor-algebra computations.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window: Option<usize>,
    /// Largest test-module dimension searched.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<usize>,
    /// Largest number of free coordinates an enumeration may search.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_coordinates: Option<usize>,
    /// Largest word length of a resolution component.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_length: Option<usize>,
    pub notes: Vec<String>,
}

impl Scope {
    pub fn exact() -> Self {
        Scope { notes: vec!["exact arithmetic; no truncation or search bound involved".into()], ..Default::default() }
    }

    pub fn window(window: usize) -> Self {
        Scope {
            window: Some(window),
            notes: vec![format!("identities certified on words up to the window of length {window}")],
            ..Default::default()
        }
    }

    pub fn enumeration(max_coordinates: usize) -> Self {
        Scope {
            max_coordinates: Some(max_coordinates),
            notes: vec![format!("exhaustive enumeration; refuses searches over more than {max_coordinates} coordinates")],
            ..Default::default()
        }
    }

    pub fn oracle(bound: usize, max_coordinates: usize) -> Self {
        let mut s = Scope::enumeration(max_coordinates);
        s.bound = Some(bound);
        s.notes.push(format!(
            "test modules of dimension <= {bound}; a refutation is definitive, a confirmation holds up to the bound only"
        ));
        s
    }
}

pub struct Report {
    pub ok: bool,
    pub scope: Scope,
    pub result: Value,
    pub text: String,
}

impl Report {
    pub fn new(ok: bool, scope: Scope, result: impl Serialize, text: String) -> Self {
        Report { ok, scope, result: serde_json::to_value(result).expect("serializable"), text }
    }
}

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Math { message: String, certificate: Option<Certificate> },
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Failure::Usage(message.into())
    }

    pub fn math(message: impl Into<String>, certificate: Option<Certificate>) -> Self {
        Failure::Math { message: message.into(), certificate }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Math { .. } => EXIT_MATH,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Math { message: m, .. } => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Axiom(_) | Error::Internal(_) => Failure::math(e.to_string(), None),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

#[derive(Serialize)]
pub struct Defaults {
    pub field: String,
    pub window: usize,
    pub bound: usize,
}

#[derive(Serialize)]
pub struct Envelope<'a> {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'a [String],
    pub field: Option<String>,
    pub defaults: Defaults,
    pub ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scope: Option<&'a Scope>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub result: Option<&'a Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorPayload<'a>>,
}

#[derive(Serialize)]
pub struct ErrorPayload<'a> {
    pub kind: &'static str,
    pub message: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<&'a Certificate>,
}

impl<'a> ErrorPayload<'a> {
    pub fn of(f: &'a Failure) -> Self {
        match f {
            Failure::Usage(m) => ErrorPayload { kind: "usage", message: m, certificate: None },
            Failure::Math { message, certificate } => {
                ErrorPayload { kind: "mathematical", message, certificate: certificate.as_ref() }
            }
        }
    }
}
