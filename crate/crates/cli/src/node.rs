//! Pointer-tracking access to a JSON document.

use std::fmt;

use lincolim::exactalg::{Matrix, Scalar};
use serde_json::Value;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BundleError {
    Io { path: String, message: String },
    Syntax(String),
    Schema { pointer: String, message: String },
    Dangling { pointer: String, kind: &'static str, name: String },
    Modulus { pointer: String, p: u64 },
    /// A construction in the bundle was refused, e.g. for exceeding a bound.
    Construction { pointer: String, message: String },
}

impl fmt::Display for BundleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BundleError::Io { path, message } => write!(f, "cannot read {path}: {message}"),
            BundleError::Syntax(m) => write!(f, "malformed JSON: {m}"),
            BundleError::Schema { pointer, message } => write!(f, "schema violation at {pointer}: {message}"),
            BundleError::Dangling { pointer, kind, name } => {
                write!(f, "dangling reference at {pointer}: no {kind} named `{name}`")
            }
            BundleError::Modulus { pointer, p } => write!(f, "schema violation at {pointer}: {p} is not prime"),
            BundleError::Construction { pointer, message } => write!(f, "cannot build {pointer}: {message}"),
        }
    }
}

impl std::error::Error for BundleError {}

pub type Parse<T> = Result<T, BundleError>;

fn escape(key: &str) -> String {
    key.replace('~', "~0").replace('/', "~1")
}

fn kind(v: &Value) -> &'static str {
    match v {
        Value::Null => "null",
        Value::Bool(_) => "a boolean",
        Value::Number(_) => "a number",
        Value::String(_) => "a string",
        Value::Array(_) => "an array",
        Value::Object(_) => "an object",
    }
}

/// A JSON value together with its pointer from the document root.
#[derive(Clone, Debug)]
pub struct Node<'a> {
    pub value: &'a Value,
    pub pointer: String,
}

impl<'a> Node<'a> {
    pub fn root(value: &'a Value) -> Self {
        Node {
            value,
            pointer: String::new(),
        }
    }

    pub fn pointer(&self) -> &str {
        if self.pointer.is_empty() {
            "/"
        } else {
            &self.pointer
        }
    }

    pub fn error(&self, message: impl Into<String>) -> BundleError {
        BundleError::Schema {
            pointer: self.pointer().to_string(),
            message: message.into(),
        }
    }

    pub fn dangling(&self, kind: &'static str, name: &str) -> BundleError {
        BundleError::Dangling {
            pointer: self.pointer().to_string(),
            kind,
            name: name.to_string(),
        }
    }

    fn child(&self, seg: &str, value: &'a Value) -> Node<'a> {
        Node {
            value,
            pointer: format!("{}/{}", self.pointer, escape(seg)),
        }
    }

    fn object(&self) -> Parse<&'a serde_json::Map<String, Value>> {
        self.value
            .as_object()
            .ok_or_else(|| self.error(format!("expected an object, found {}", kind(self.value))))
    }

    pub fn get(&self, key: &str) -> Parse<Node<'a>> {
        let obj = self.object()?;
        obj.get(key)
            .map(|v| self.child(key, v))
            .ok_or_else(|| self.error(format!("missing required key \"{key}\"")))
    }

    pub fn opt(&self, key: &str) -> Parse<Option<Node<'a>>> {
        Ok(self.object()?.get(key).map(|v| self.child(key, v)))
    }

    /// Rejects keys outside `allowed`.
    pub fn only_keys(&self, allowed: &[&str]) -> Parse<()> {
        for k in self.object()?.keys() {
            if !allowed.contains(&k.as_str()) {
                return Err(self.child(k, &Value::Null).error(format!("unexpected key \"{k}\"")));
            }
        }
        Ok(())
    }

    /// Object entries in key order.
    pub fn entries(&self) -> Parse<Vec<(&'a str, Node<'a>)>> {
        let obj = self.object()?;
        let mut out: Vec<(&str, Node)> = obj.iter().map(|(k, v)| (k.as_str(), self.child(k, v))).collect();
        out.sort_by(|a, b| a.0.cmp(b.0));
        Ok(out)
    }

    pub fn items(&self) -> Parse<Vec<Node<'a>>> {
        let arr = self
            .value
            .as_array()
            .ok_or_else(|| self.error(format!("expected an array, found {}", kind(self.value))))?;
        Ok(arr.iter().enumerate().map(|(i, v)| self.child(&i.to_string(), v)).collect())
    }

    pub fn str(&self) -> Parse<&'a str> {
        self.value
            .as_str()
            .ok_or_else(|| self.error(format!("expected a string, found {}", kind(self.value))))
    }

    pub fn strings(&self) -> Parse<Vec<&'a str>> {
        self.items()?.iter().map(|n| n.str()).collect()
    }

    pub fn usize(&self) -> Parse<usize> {
        self.value
            .as_u64()
            .and_then(|v| usize::try_from(v).ok())
            .ok_or_else(|| self.error(format!("expected a non-negative integer, found {}", self.value)))
    }

    pub fn bool(&self) -> Parse<bool> {
        self.value
            .as_bool()
            .ok_or_else(|| self.error(format!("expected a boolean, found {}", kind(self.value))))
    }

    /// An integer or a string such as `"-3"` or `"1/2"`, read in `K`.
    pub fn scalar<K: Scalar>(&self) -> Parse<K> {
        let text = match self.value {
            Value::Number(n) if n.is_i64() || n.is_u64() => n.to_string(),
            Value::String(s) => s.clone(),
            other => return Err(self.error(format!("expected a scalar, found {}", kind(other)))),
        };
        K::parse_scalar(&text).ok_or_else(|| self.error(format!("`{text}` is not an element of {}", K::field_name())))
    }

    pub fn vector<K: Scalar>(&self, len: usize) -> Parse<Vec<K>> {
        let items = self.items()?;
        if items.len() != len {
            return Err(self.error(format!("expected {len} coordinates, found {}", items.len())));
        }
        items.iter().map(|n| n.scalar()).collect()
    }

    /// A list of rows, each of length `cols`.
    pub fn rows<K: Scalar>(&self, cols: usize) -> Parse<Vec<Vec<K>>> {
        self.items()?.iter().map(|r| r.vector(cols)).collect()
    }

    pub fn matrix<K: Scalar>(&self, rows: usize, cols: usize) -> Parse<Matrix<K>> {
        let r = self.rows(cols)?;
        if r.len() != rows {
            return Err(self.error(format!("expected a {rows}x{cols} matrix, found {} rows", r.len())));
        }
        Ok(Matrix::from_rows(cols, &r))
    }
}
