//! Bundled diagrams. Each file in `corpus/` holds `# key: value` metadata
//! lines followed by a single Gauss code.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gauss::GaussCode;

const FILES: &[&str] = &[
    include_str!("../corpus/unknot.gauss"),
    include_str!("../corpus/trefoil.gauss"),
    include_str!("../corpus/figure-eight.gauss"),
    include_str!("../corpus/cinquefoil.gauss"),
    include_str!("../corpus/virtual-trefoil.gauss"),
    include_str!("../corpus/long-flat-F.gauss"),
    include_str!("../corpus/long-flat-G.gauss"),
    include_str!("../corpus/long-L.gauss"),
    include_str!("../corpus/long-L-prime.gauss"),
    include_str!("../corpus/kishino.gauss"),
    include_str!("../corpus/ks.gauss"),
    include_str!("../corpus/virtualized-trefoil.gauss"),
    include_str!("../corpus/vk5-129.gauss"),
    include_str!("../corpus/vk5-267.gauss"),
    include_str!("../corpus/twist-2-virtualized.gauss"),
    include_str!("../corpus/twist-4-virtualized.gauss"),
    include_str!("../corpus/twist-cancel-virtualized.gauss"),
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    /// The code or the diagram's defining data is given in words.
    PaperStated,
    /// Read off a drawing, or chosen to match the properties claimed for it.
    DerivedFromFigure,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::PaperStated => "paper-stated",
            Provenance::DerivedFromFigure => "derived-from-figure",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Entry {
    pub name: String,
    pub provenance: Provenance,
    pub description: String,
    pub code: GaussCode,
}

fn parse_entry(text: &str) -> Entry {
    let mut name = None;
    let mut provenance = None;
    let mut description = String::new();
    for line in text.lines() {
        let Some(meta) = line.strip_prefix('#') else { continue };
        let Some((key, value)) = meta.split_once(':') else { continue };
        let value = value.trim();
        match key.trim() {
            "name" => name = Some(value.to_string()),
            "provenance" => {
                provenance = Some(match value {
                    "paper-stated" => Provenance::PaperStated,
                    "derived-from-figure" => Provenance::DerivedFromFigure,
                    other => panic!("bad provenance `{other}`"),
                })
            }
            "description" => description = value.to_string(),
            _ => {}
        }
    }
    let codes = GaussCode::parse_many(text).expect("corpus codes parse");
    assert_eq!(codes.len(), 1, "one code per corpus file");
    Entry {
        name: name.expect("corpus entry has a name"),
        provenance: provenance.expect("corpus entry has a provenance"),
        description,
        code: codes.into_iter().next().unwrap(),
    }
}

/// All bundled entries in a fixed order.
pub fn entries() -> Vec<Entry> {
    FILES.iter().map(|t| parse_entry(t)).collect()
}

pub fn get(name: &str) -> Result<Entry> {
    entries().into_iter().find(|e| e.name == name).ok_or_else(|| Error::UnknownEntry(name.to_string()))
}

/// Shorthand for the code of a bundled entry.
pub fn code(name: &str) -> Result<GaussCode> {
    Ok(get(name)?.code)
}
