//! Newform coefficient tables and trace matching.
//!
//! A `consistent` verdict is evidence, not proof: it only says that every
//! compared good prime agrees and that enough of them were compared.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;

use thiserror::Error;

use crate::arith;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("duplicate entry {level}{label}")]
    DuplicateEntry { level: u64, label: String },
    #[error("cannot read {0}: {1}")]
    Io(String, String),
    #[error("fewer than {0} comparable primes for every entry")]
    InsufficientData(usize),
}

pub type Result<T> = std::result::Result<T, FormError>;

/// The bundled table of quoted expansions.
pub const SEED_DB: &str = include_str!("../data/forms.txt");

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewformEntry {
    pub level: u64,
    pub weight: u32,
    pub label: String,
    pub coeffs: BTreeMap<u64, i64>,
}

impl NewformEntry {
    /// `90a`, `32a`, ...
    pub fn name(&self) -> String {
        format!("{}{}", self.level, self.label)
    }
    pub fn a(&self, n: u64) -> Option<i64> {
        self.coeffs.get(&n).copied()
    }
    pub fn render(&self) -> String {
        let max = self.coeffs.keys().max().copied().unwrap_or(0);
        let cs: Vec<String> =
            (1..=max).map(|n| self.a(n).map_or_else(|| "?".to_string(), |a| a.to_string())).collect();
        format!("{} {} {} : {}", self.level, self.weight, self.label, cs.join(" "))
    }
}

fn parse_line(line: &str, no: usize) -> Result<NewformEntry> {
    let err = |msg: String| FormError::Parse { line: no, msg };
    let (head, body) = line.split_once(':').ok_or_else(|| err("expected 'level weight label : a1 a2 ...'".into()))?;
    let h: Vec<&str> = head.split_whitespace().collect();
    if h.len() != 3 {
        return Err(err(format!("header '{}' needs level, weight and label", head.trim())));
    }
    let level: u64 = h[0].parse().map_err(|_| err(format!("bad level '{}'", h[0])))?;
    let weight: u32 = h[1].parse().map_err(|_| err(format!("bad weight '{}'", h[1])))?;
    if level == 0 || !(weight == 2 || weight == 4) {
        return Err(err(format!("unsupported level/weight {level}/{weight}")));
    }
    let mut coeffs = BTreeMap::new();
    for (i, tok) in body.split_whitespace().enumerate() {
        if tok == "?" {
            continue;
        }
        let a: i64 = tok.parse().map_err(|_| err(format!("bad coefficient '{tok}'")))?;
        coeffs.insert(i as u64 + 1, a);
    }
    if coeffs.get(&1).is_some_and(|&a| a != 1) {
        return Err(err("a1 must be 1".into()));
    }
    Ok(NewformEntry { level, weight, label: h[2].to_string(), coeffs })
}

/// Parses a database; `#` starts a comment line.
pub fn parse_db(text: &str) -> Result<Vec<NewformEntry>> {
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let e = parse_line(line, i + 1)?;
        if !seen.insert((e.level, e.label.clone())) {
            return Err(FormError::DuplicateEntry { level: e.level, label: e.label });
        }
        out.push(e);
    }
    Ok(out)
}

pub fn load_db(path: &Path) -> Result<Vec<NewformEntry>> {
    let text = std::fs::read_to_string(path).map_err(|e| FormError::Io(path.display().to_string(), e.to_string()))?;
    parse_db(&text)
}

pub fn seed_db() -> Vec<NewformEntry> {
    parse_db(SEED_DB).expect("bundled database parses")
}

/// A failed Hecke relation in an entry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeckeViolation {
    pub index: u64,
    pub expected: i64,
    pub found: i64,
}

impl fmt::Display for HeckeViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a_{} = {} but the Hecke relations give {}", self.index, self.found, self.expected)
    }
}

/// Checks `a_mn = a_m a_n` for coprime `m, n` and the prime-power recursion
/// `a_{p^{k+1}} = a_p a_{p^k} − p^{w−1} a_{p^{k−1}}` (just `a_p^{k+1}` when
/// `p | level`), wherever all values involved are present.
pub fn multiplicativity_check(e: &NewformEntry) -> std::result::Result<(), HeckeViolation> {
    for (&n, &found) in &e.coeffs {
        if n < 4 {
            continue;
        }
        let f = arith::prime_factors(&num_bigint::BigInt::from(n));
        let expected = if f.len() == 1 {
            let p = u64::try_from(&f[0]).expect("small index");
            let k = n.ilog(p);
            if k < 2 {
                continue;
            }
            let (Some(ap), Some(a1), Some(a2)) = (e.a(p), e.a(p.pow(k - 1)), e.a(p.pow(k.saturating_sub(2)))) else {
                continue;
            };
            if e.level % p == 0 {
                ap * a1
            } else {
                ap * a1 - (p as i64).pow(e.weight - 1) * a2
            }
        } else {
            let p = u64::try_from(&f[0]).expect("small index");
            let mut q = 1;
            while n % (q * p) == 0 {
                q *= p;
            }
            let (Some(x), Some(y)) = (e.a(q), e.a(n / q)) else { continue };
            x * y
        };
        if expected != found {
            return Err(HeckeViolation { index: n, expected, found });
        }
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Verdict {
    Consistent,
    Refuted,
    Insufficient,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Consistent => "consistent",
            Verdict::Refuted => "refuted",
            Verdict::Insufficient => "insufficient",
        })
    }
}

/// Comparison of one trace sequence with one entry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EntryMatch {
    pub entry: String,
    pub level: u64,
    pub label: String,
    pub agreeing: Vec<u64>,
    /// `(p, trace, a_p)` for every disagreement.
    pub disagreeing: Vec<(u64, i64, i64)>,
    pub skipped: Vec<(u64, String)>,
    pub verdict: Verdict,
}

impl EntryMatch {
    pub fn compared(&self) -> usize {
        self.agreeing.len() + self.disagreeing.len()
    }
    pub fn render(&self) -> String {
        let mut s = format!(
            "{}\t{}\tagree={}/{}",
            self.entry,
            self.verdict,
            self.agreeing.len(),
            self.compared()
        );
        for (p, t, a) in &self.disagreeing {
            s += &format!("\tp={p}:trace={t}:a_p={a}");
        }
        s
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatchReport {
    pub min_primes: usize,
    /// Ranked by agreeing primes, ties by `(level, label)`.
    pub entries: Vec<EntryMatch>,
}

impl MatchReport {
    pub fn best(&self) -> Option<&EntryMatch> {
        self.entries.iter().find(|e| e.verdict == Verdict::Consistent)
    }
    pub fn render_text(&self) -> String {
        let mut s = String::new();
        for e in &self.entries {
            s += &e.render();
            s.push('\n');
        }
        s
    }
}

pub const DEFAULT_MIN_PRIMES: usize = 3;

/// Compares `traces` (prime → a_p) with one entry, skipping primes that
/// divide the level, are in `bad`, or are missing from the entry.
pub fn match_entry(traces: &BTreeMap<u64, i64>, e: &NewformEntry, bad: &BTreeSet<u64>, min_primes: usize) -> EntryMatch {
    let mut m = EntryMatch {
        entry: e.name(),
        level: e.level,
        label: e.label.clone(),
        agreeing: vec![],
        disagreeing: vec![],
        skipped: vec![],
        verdict: Verdict::Insufficient,
    };
    for (&p, &t) in traces {
        let why = if !arith::is_prime(p) {
            Some("not prime")
        } else if e.level % p == 0 {
            Some("divides the level")
        } else if bad.contains(&p) {
            Some("bad prime")
        } else {
            None
        };
        if let Some(w) = why {
            m.skipped.push((p, w.into()));
            continue;
        }
        match e.a(p) {
            None => m.skipped.push((p, "not in table".into())),
            Some(a) if a == t => m.agreeing.push(p),
            Some(a) => m.disagreeing.push((p, t, a)),
        }
    }
    m.verdict = if !m.disagreeing.is_empty() {
        Verdict::Refuted
    } else if m.agreeing.len() >= min_primes {
        Verdict::Consistent
    } else {
        Verdict::Insufficient
    };
    m
}

/// Matches a trace sequence against every entry of `db` of the given weight.
pub fn match_traces(
    traces: &BTreeMap<u64, i64>,
    db: &[NewformEntry],
    weight: u32,
    bad: &BTreeSet<u64>,
    min_primes: usize,
) -> Result<MatchReport> {
    let mut entries: Vec<EntryMatch> =
        db.iter().filter(|e| e.weight == weight).map(|e| match_entry(traces, e, bad, min_primes)).collect();
    if entries.iter().all(|e| e.compared() < min_primes) {
        return Err(FormError::InsufficientData(min_primes));
    }
    entries.sort_by(|a, b| {
        let rank = |e: &EntryMatch| (e.verdict == Verdict::Refuted, std::cmp::Reverse(e.agreeing.len()));
        rank(a).cmp(&rank(b)).then((a.level, &a.label).cmp(&(b.level, &b.label)))
    });
    Ok(MatchReport { min_primes, entries })
}

/// Splits a level tag such as `90a` into `(90, "a")`; a bare level means `a`.
pub fn parse_level_tag(tag: &str) -> Option<(u64, String)> {
    let digits: String = tag.chars().take_while(|c| c.is_ascii_digit()).collect();
    let level = digits.parse().ok()?;
    let label = &tag[digits.len()..];
    Some((level, if label.is_empty() { "a".to_string() } else { label.to_string() }))
}

pub fn find<'a>(db: &'a [NewformEntry], level: u64, label: &str) -> Option<&'a NewformEntry> {
    db.iter().find(|e| e.level == level && e.label == label)
}
