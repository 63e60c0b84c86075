//! Element files: `{group: GroupSpec, terms: [{word, re, im}]}` as JSON or TOML.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::element::AlgElement;
use crate::error::{Error, Result};
use crate::groups::GroupSpec;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermRecord {
    pub word: String,
    #[serde(default)]
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ElementFile {
    pub group: GroupSpec,
    pub terms: Vec<TermRecord>,
}

impl ElementFile {
    pub fn from_element(a: &AlgElement) -> Self {
        ElementFile {
            group: a.spec().clone(),
            terms: a
                .terms()
                .iter()
                .map(|(g, c)| TermRecord { word: a.spec().format_element(g), re: c.re, im: c.im })
                .collect(),
        }
    }

    pub fn to_element(&self) -> Result<AlgElement> {
        self.group.validate()?;
        let mut terms = Vec::with_capacity(self.terms.len());
        for (i, t) in self.terms.iter().enumerate() {
            let g = self.group.parse_element(&t.word).map_err(|e| Error::Parse(format!("terms[{i}].word: {e}")))?;
            if !t.re.is_finite() || !t.im.is_finite() {
                return Err(Error::Parse(format!("terms[{i}]: non-finite coefficient")));
            }
            terms.push((g, Complex64::new(t.re, t.im)));
        }
        AlgElement::from_terms(self.group.clone(), terms)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("element file: {e}")))
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Parse(format!("element file: {e}")))
    }

    /// JSON unless the text looks like TOML (first significant character is not `{`).
    pub fn parse(text: &str) -> Result<Self> {
        if text.trim_start().starts_with('{') {
            Self::from_json(text)
        } else {
            Self::from_toml(text)
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("element file serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_and_toml() {
        let json = r#"{"group":{"kind":"free","rank":2},
            "terms":[{"word":"y x","re":1.0,"im":0.0},{"word":"y x^2","re":0.0,"im":1.0},{"word":"y","re":0.0,"im":1.0}]}"#;
        let a = ElementFile::parse(json).unwrap().to_element().unwrap();
        assert_eq!(a.len(), 3);
        assert_eq!(a.l1(), 3.0);
        let toml_text = r#"
group = { kind = "lattice", dim = 1 }
[[terms]]
word = "x"
re = 1.0
[[terms]]
word = "x^-1"
re = 1.0
"#;
        let b = ElementFile::parse(toml_text).unwrap().to_element().unwrap();
        assert_eq!(b.l1(), 2.0);
        let back = ElementFile::parse(&ElementFile::from_element(&a).to_json()).unwrap().to_element().unwrap();
        assert_eq!(back, a);
    }

    #[test]
    fn diagnostics_name_the_field() {
        let bad = r#"{"group":{"kind":"free","rank":2},"terms":[{"word":"x","re":1},{"word":"q","re":1}]}"#;
        let err = ElementFile::parse(bad).unwrap().to_element().unwrap_err();
        assert!(err.to_string().contains("terms[1].word"), "{err}");
        let malformed = "{\"group\": {\"kind\":\"free\"}, \"terms\": []}";
        let err = ElementFile::parse(malformed).unwrap_err();
        assert!(err.to_string().contains("line"), "{err}");
    }
}
