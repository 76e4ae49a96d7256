//! Provenance block written at the top of every output file.

use serde::Serialize;

use crate::rng::RNG_NAME;
use crate::ARTIFACT_VERSION;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Header {
    pub command: String,
    pub version: String,
    pub rng: String,
    pub seed: u64,
    pub config: serde_json::Value,
}

impl Header {
    pub fn new(command: impl Into<String>, seed: u64, config: serde_json::Value) -> Self {
        Header { command: command.into(), version: ARTIFACT_VERSION.into(), rng: RNG_NAME.into(), seed, config }
    }

    /// `# key: value` lines for CSV and edge-list files.
    pub fn comment_block(&self) -> String {
        format!(
            "# command: {}\n# version: {}\n# rng: {}\n# seed: {}\n# config: {}\n",
            self.command, self.version, self.rng, self.seed, self.config
        )
    }

    /// An XML comment for SVG files.
    pub fn svg_comment(&self) -> String {
        let body = self.comment_block().replace("--", "- -");
        format!("<!--\n{body}-->\n")
    }

    /// `body` with the header inserted as its first field.
    pub fn wrap_json(&self, body: serde_json::Value) -> serde_json::Value {
        let mut map = serde_json::Map::new();
        map.insert("header".into(), serde_json::to_value(self).expect("header serializes"));
        match body {
            serde_json::Value::Object(fields) => map.extend(fields),
            other => {
                map.insert("data".into(), other);
            }
        }
        serde_json::Value::Object(map)
    }
}

/// `text` without its leading `#` comment lines.
pub fn strip_comments(text: &str) -> String {
    text.lines().filter(|l| !l.starts_with('#')).map(|l| format!("{l}\n")).collect()
}
