//! Fixture tables for `verify`, bundled into the binary.
//!
//! Each data line is `row<TAB>product<TAB>h12<TAB>level<TAB>p:a_p ...`.

use std::collections::BTreeMap;

use cymod_core::ProductSpec;

pub const PRESETS: [(&str, &str); 5] = [
    ("1", include_str!("../presets/table1.txt")),
    ("2", include_str!("../presets/table2.txt")),
    ("3", include_str!("../presets/table3.txt")),
    ("4", include_str!("../presets/table4.txt")),
    ("iso", include_str!("../presets/iso.txt")),
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresetRow {
    pub row: String,
    pub product: ProductSpec,
    pub h12: i64,
    /// Level tag such as `32` or `90a`; empty when no expansion is quoted.
    pub level: String,
    pub quoted: BTreeMap<u64, i64>,
}

pub fn names() -> Vec<&'static str> {
    PRESETS.iter().map(|(n, _)| *n).collect()
}

pub fn preset(name: &str) -> Result<Vec<PresetRow>, String> {
    let (_, text) = PRESETS.iter().find(|(n, _)| *n == name).ok_or_else(|| {
        format!("unknown table '{name}' (known: {})", names().join(", "))
    })?;
    parse_preset(text)
}

pub fn parse_preset(text: &str) -> Result<Vec<PresetRow>, String> {
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |m: String| format!("preset line {}: {m}", i + 1);
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() < 4 {
            return Err(err(format!("expected at least 4 tab-separated columns, got {}", cols.len())));
        }
        let product: ProductSpec = cols[1].parse().map_err(|e| err(format!("{e}")))?;
        let h12 = cols[2].trim().parse().map_err(|_| err(format!("bad h12 '{}'", cols[2])))?;
        let mut quoted = BTreeMap::new();
        for q in cols.get(4).copied().unwrap_or("").split_whitespace() {
            let (p, a) = q.split_once(':').ok_or_else(|| err(format!("bad coefficient '{q}'")))?;
            let p: u64 = p.parse().map_err(|_| err(format!("bad prime in '{q}'")))?;
            let a: i64 = a.parse().map_err(|_| err(format!("bad value in '{q}'")))?;
            quoted.insert(p, a);
        }
        rows.push(PresetRow { row: cols[0].to_string(), product, h12, level: cols[3].trim().to_string(), quoted });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_presets_parse() {
        let sizes: Vec<usize> = names().iter().map(|n| preset(n).unwrap().len()).collect();
        assert_eq!(sizes, vec![5, 4, 5, 16, 1]);
    }
}
