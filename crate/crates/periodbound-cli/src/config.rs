//! Flat key-value scenario configs with `[section]` headers. One
//! scenario per file; every key must be consumed by the scenario that
//! loads it, so typos fail loudly instead of silently defaulting.

use anyhow::{anyhow, bail, Result};
use std::cell::RefCell;
use std::collections::HashSet;

#[derive(Debug, Clone)]
struct Entry {
    key: String,
    value: String,
    line: usize,
}

#[derive(Debug, Clone)]
struct Section {
    name: String,
    line: usize,
    entries: Vec<Entry>,
}

/// A parsed config file. Sections keep declaration order; duplicate
/// sections and duplicate keys within a section are rejected.
#[derive(Debug, Clone)]
pub struct ConfigFile {
    sections: Vec<Section>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut sections: Vec<Section> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            if let Some(name) = trimmed.strip_prefix('[') {
                let name = name
                    .strip_suffix(']')
                    .ok_or_else(|| anyhow!("line {line}: unterminated section header `{trimmed}`"))?
                    .trim();
                if name.is_empty() {
                    bail!("line {line}: empty section name");
                }
                if sections.iter().any(|s| s.name == name) {
                    bail!("line {line}: duplicate section [{name}]");
                }
                sections.push(Section {
                    name: name.to_string(),
                    line,
                    entries: Vec::new(),
                });
                continue;
            }
            let (key, value) = trimmed.split_once('=').ok_or_else(|| {
                anyhow!("line {line}: expected `key = value` or `[section]`, got `{trimmed}`")
            })?;
            let key = key.trim();
            let value = value.trim();
            if key.is_empty() {
                bail!("line {line}: empty key");
            }
            let section = sections
                .last_mut()
                .ok_or_else(|| anyhow!("line {line}: key `{key}` appears before any [section]"))?;
            if section.entries.iter().any(|e| e.key == key) {
                bail!("line {line}: duplicate key `{key}` in [{}]", section.name);
            }
            section.entries.push(Entry {
                key: key.to_string(),
                value: value.to_string(),
                line,
            });
        }
        Ok(Self { sections })
    }

    /// Borrows a section for typed reads. Every key in the section must
    /// be read before [`SectionReader::finish`], which rejects leftovers.
    pub fn section(&self, name: &str) -> Option<SectionReader<'_>> {
        self.sections
            .iter()
            .find(|s| s.name == name)
            .map(|section| SectionReader {
                section,
                consumed: RefCell::new(HashSet::new()),
            })
    }

    /// Names of sections other than the given ones; used to reject
    /// sections no scenario consumes.
    pub fn extra_sections(&self, known: &[&str]) -> Vec<String> {
        self.sections
            .iter()
            .filter(|s| !known.contains(&s.name.as_str()))
            .map(|s| format!("[{}] (line {})", s.name, s.line))
            .collect()
    }
}

/// Typed accessor over one section with consumption tracking.
pub struct SectionReader<'a> {
    section: &'a Section,
    consumed: RefCell<HashSet<String>>,
}

impl<'a> SectionReader<'a> {
    fn raw(&self, key: &str) -> Option<&'a Entry> {
        let entry = self.section.entries.iter().find(|e| e.key == key)?;
        self.consumed.borrow_mut().insert(key.to_string());
        Some(entry)
    }

    pub fn get_str(&self, key: &str) -> Option<&'a str> {
        self.raw(key).map(|e| e.value.as_str())
    }

    pub fn get_f64(&self, key: &str) -> Result<Option<f64>> {
        match self.raw(key) {
            None => Ok(None),
            Some(e) => e
                .value
                .parse()
                .map(Some)
                .map_err(|_| anyhow!("line {}: key `{key}`: malformed number `{}`", e.line, e.value)),
        }
    }

    pub fn require_f64(&self, key: &str) -> Result<f64> {
        self.get_f64(key)?.ok_or_else(|| {
            anyhow!("section [{}] is missing required key `{key}`", self.section.name)
        })
    }

    pub fn get_usize(&self, key: &str) -> Result<Option<usize>> {
        match self.raw(key) {
            None => Ok(None),
            Some(e) => e.value.parse().map(Some).map_err(|_| {
                anyhow!(
                    "line {}: key `{key}`: expected a nonnegative integer, got `{}`",
                    e.line,
                    e.value
                )
            }),
        }
    }

    pub fn get_u32(&self, key: &str) -> Result<Option<u32>> {
        match self.raw(key) {
            None => Ok(None),
            Some(e) => e.value.parse().map(Some).map_err(|_| {
                anyhow!(
                    "line {}: key `{key}`: expected a nonnegative integer, got `{}`",
                    e.line,
                    e.value
                )
            }),
        }
    }

    pub fn get_bool(&self, key: &str) -> Result<Option<bool>> {
        match self.raw(key) {
            None => Ok(None),
            Some(e) => match e.value.as_str() {
                "true" | "yes" | "1" => Ok(Some(true)),
                "false" | "no" | "0" => Ok(Some(false)),
                other => Err(anyhow!(
                    "line {}: key `{key}`: expected a boolean, got `{other}`",
                    e.line
                )),
            },
        }
    }

    /// Comma-separated list of numbers.
    pub fn get_f64_list(&self, key: &str) -> Result<Option<Vec<f64>>> {
        match self.raw(key) {
            None => Ok(None),
            Some(e) => e
                .value
                .split(',')
                .map(|s| {
                    s.trim().parse().map_err(|_| {
                        anyhow!(
                            "line {}: key `{key}`: malformed number `{}` in list",
                            e.line,
                            s.trim()
                        )
                    })
                })
                .collect::<Result<Vec<f64>>>()
                .map(Some),
        }
    }

    pub fn require_f64_list(&self, key: &str) -> Result<Vec<f64>> {
        self.get_f64_list(key)?.ok_or_else(|| {
            anyhow!("section [{}] is missing required key `{key}`", self.section.name)
        })
    }

    /// Comma-separated list of field names.
    pub fn get_str_list(&self, key: &str) -> Option<Vec<String>> {
        self.raw(key).map(|e| {
            e.value
                .split(',')
                .map(|s| s.trim().to_string())
                .filter(|s| !s.is_empty())
                .collect()
        })
    }

    /// Fails if the section holds keys the scenario never read.
    pub fn finish(&self) -> Result<()> {
        let consumed = self.consumed.borrow();
        for entry in &self.section.entries {
            if !consumed.contains(&entry.key) {
                bail!(
                    "unknown key `{}` in [{}] (line {})",
                    entry.key,
                    self.section.name,
                    entry.line
                );
            }
        }
        Ok(())
    }
}
