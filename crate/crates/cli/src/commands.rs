use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use rayon::prelude::*;

use cymod_core::arith;
use cymod_core::catalog::{self, parse_catalogue, singular_locus};
use cymod_core::defect::{self, heuristic_bad_primes, lseries_shape, modularity_gate};
use cymod_core::formmatch::{self, match_entry, match_traces, Verdict};
use cymod_core::search::{self, case_a_search, case_b_search, case_c_search, isogenous_search};
use cymod_core::{
    analyze, extract_apu, BeauvilleLabel, Candidate, FibrationSpec, FrobError, Ledger, NewformEntry, ProductSpec,
    SearchCase, TraceCache, TraceRecord,
};

use crate::presets::{self, PresetRow};
use crate::{CliError, Format, Outcome};

fn usage(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

/// `gamma1_6`, `beauville(gamma1_6)` or `abg(a,b,g)`, optionally `@[[..]]`.
pub fn parse_fibration(s: &str) -> Result<FibrationSpec, CliError> {
    let (head, tail) = s.split_once('@').map_or((s, None), |(h, t)| (h, Some(t)));
    let text = match BeauvilleLabel::from_label(head.trim()) {
        Some(l) => format!("beauville({})", l.label()),
        None => head.trim().to_string(),
    };
    let text = match tail {
        Some(t) => format!("{text}@{t}"),
        None => text,
    };
    text.parse().map_err(usage)
}

pub fn parse_product(s: &str) -> Result<ProductSpec, CliError> {
    s.parse().map_err(usage)
}

/// `B` means every prime `≤ B`; `a,b,c` is an explicit list.
pub fn parse_primes(s: &str) -> Result<Vec<u64>, CliError> {
    let s = s.trim();
    if s.contains(',') {
        let mut v = s
            .split(',')
            .map(|x| x.trim().parse::<u64>().map_err(|_| usage(format!("bad prime '{x}'"))))
            .collect::<Result<Vec<_>, _>>()?;
        if let Some(p) = v.iter().find(|&&p| !arith::is_prime(p)) {
            return Err(usage(format!("{p} is not prime")));
        }
        v.sort_unstable();
        v.dedup();
        Ok(v)
    } else {
        let b: u64 = s.parse().map_err(|_| usage(format!("bad prime bound '{s}'")))?;
        Ok(arith::primes_up_to(b))
    }
}

// ---------------------------------------------------------------------------

pub fn analyze_cmd(product: &str, fmt: Format) -> Result<Outcome, CliError> {
    let spec = parse_product(product)?;
    let report = analyze(&spec).map_err(usage)?;
    if fmt == Format::Records {
        return Ok(Outcome::ok(report.to_record() + "\n"));
    }
    let mut out = report.render_text();
    if !out.ends_with('\n') {
        out.push('\n');
    }
    let bad = heuristic_bad_primes(&spec).map_err(usage)?;
    let list: Vec<String> = bad.set().iter().map(|p| p.to_string()).collect();
    out += &format!("heuristic bad primes: {}\n", if list.is_empty() { "none".into() } else { list.join(" ") });
    if report.delta != 0 {
        out += "no L-series factorization: δ ≠ 0\n";
        return Ok(Outcome::ok(out));
    }
    out += &format!("L-series: {}\n", lseries_shape(&report).map_err(usage)?);
    let trace = |p: u64| extract_apu(&spec, p).map(|r| r.apu).map_err(|e| e.to_string());
    match modularity_gate(&report, &bad, &trace) {
        Ok(v) => out += &format!("{v}\n"),
        Err(e) => out += &format!("modularity gate: {e}\n"),
    }
    Ok(Outcome::ok(out))
}

// ---------------------------------------------------------------------------

fn render_candidates(cs: &[Candidate], fmt: Format) -> String {
    let mut out = String::new();
    for c in cs {
        out += &match fmt {
            Format::Records => c.to_record(),
            Format::Text => c.to_string(),
        };
        out.push('\n');
    }
    out
}

/// Table layout: twist, the right factor's types over the left locus (then
/// its extra points), δ and h12.
pub fn render_table(cs: &[Candidate]) -> String {
    let mut out = String::from("left\tright\tMt\ttypes over S\textra\tdelta\th12\n");
    for c in cs {
        let r = &c.report;
        let over: Vec<String> = r
            .s
            .iter()
            .map(|(t, _)| {
                r.s_prime.iter().find(|(u, _)| u == t).map_or_else(|| "-".to_string(), |(_, m)| format!("I{m}"))
            })
            .collect();
        let extra: Vec<String> =
            r.s_prime.iter().filter(|(u, _)| !r.s.iter().any(|(t, _)| t == u)).map(|(u, m)| format!("I{m}@{u}")).collect();
        out += &format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}",
            c.product.left.family,
            c.product.right.family,
            c.twist().formula(),
            over.join(" "),
            if extra.is_empty() { "-".to_string() } else { extra.join(" ") },
            r.delta,
            r.h12
        );
        for n in &c.notes {
            out += &format!("\t{n}");
        }
        out.push('\n');
    }
    out
}

pub fn search_cmd(
    case: &str,
    left: Option<&str>,
    right: Option<&str>,
    table: bool,
    fmt: Format,
) -> Result<Outcome, CliError> {
    let case: SearchCase = case.parse().map_err(usage)?;
    let mut header = String::new();
    let cands = match case {
        SearchCase::A => {
            let o = case_a_search().map_err(model)?;
            header += &format!(
                "# {} choices, {} identically zero, {} raw solutions\n",
                o.choices,
                o.identically_zero.len(),
                o.raw.len()
            );
            o.candidates
        }
        SearchCase::B => {
            let o = case_b_search().map_err(model)?;
            for eq in &o.equations {
                let roots: Vec<String> = eq.roots.iter().map(|r| r.to_string()).collect();
                header += &format!(
                    "# {} (omit {}): degree {}, rational roots: {}\n",
                    eq.name,
                    eq.omitted,
                    eq.poly.degree().unwrap_or(0),
                    if roots.is_empty() { "none".into() } else { roots.join(" ") }
                );
                for (a, why) in &eq.rejected {
                    header += &format!("#   rejected α = {a}: {why}\n");
                }
            }
            o.candidates
        }
        SearchCase::C => {
            let l = parse_fibration(left.unwrap_or("gamma1_6"))?;
            let r = parse_fibration(right.unwrap_or_else(|| left.unwrap_or("gamma1_6")))?;
            let o = case_c_search(&l, &r).map_err(model)?;
            header += &format!(
                "# {} candidates, {} excluded, {} classes, {} rigid\n",
                o.candidates.len(),
                o.excluded.len(),
                o.classes.len(),
                o.rigid_classes.len()
            );
            o.candidates
        }
        SearchCase::Iso => isogenous_search().map_err(model)?,
    };
    let body = if table && fmt == Format::Text { render_table(&cands) } else { render_candidates(&cands, fmt) };
    Ok(Outcome::ok(if fmt == Format::Text { header + &body } else { body }))
}

fn model(e: search::SearchError) -> CliError {
    match e {
        search::SearchError::Parse(m) => CliError::Usage(m),
        e => CliError::Model(e.to_string()),
    }
}

// ---------------------------------------------------------------------------

/// Computes the ledger in parallel over primes; records stay in ascending
/// prime order. Cached records are reused and fresh ones added to `cache`.
pub fn compute_ledger(
    spec: &ProductSpec,
    primes: &[u64],
    cache: Option<&mut TraceCache>,
) -> Result<Ledger, CliError> {
    let report = analyze(spec).map_err(usage)?;
    if report.delta != 0 {
        return Err(usage(defect::DefectError::DefectNonzero(report.delta)));
    }
    let cached: Vec<Option<TraceRecord>> =
        primes.iter().map(|&p| cache.as_ref().and_then(|c| c.get(spec, p).cloned())).collect();
    let results: Vec<(u64, Result<TraceRecord, FrobError>)> = primes
        .par_iter()
        .zip(cached.into_par_iter())
        .map(|(&p, hit)| (p, hit.map_or_else(|| extract_apu(spec, p), Ok)))
        .collect();
    let mut ledger = Ledger { product: spec.to_string(), h12: report.h12, records: vec![], skipped: vec![] };
    let mut fresh = Vec::new();
    for (p, r) in results {
        match r {
            Ok(rec) => {
                fresh.push(rec.clone());
                ledger.records.push(rec);
            }
            Err(e) if e.is_bad_prime() => ledger.skipped.push((p, e.to_string())),
            Err(e) => return Err(CliError::Model(e.to_string())),
        }
    }
    if let Some(c) = cache {
        for r in fresh {
            c.insert(spec, r);
        }
    }
    Ok(ledger)
}

pub fn count_cmd(product: &str, primes: &str, cache: Option<&Path>, _fmt: Format) -> Result<Outcome, CliError> {
    let spec = parse_product(product)?;
    let primes = parse_primes(primes)?;
    let mut c = match cache {
        Some(p) => Some(TraceCache::load(p).map_err(|e| CliError::Io(e.to_string()))?),
        None => None,
    };
    let ledger = compute_ledger(&spec, &primes, c.as_mut())?;
    if let (Some(c), Some(p)) = (c, cache) {
        c.save(p).map_err(|e| CliError::Io(e.to_string()))?;
    }
    // The ledger format is already tab-separated and parseable.
    Ok(Outcome::ok(ledger.render()))
}

// ---------------------------------------------------------------------------

fn load_db(db: Option<&Path>) -> Result<Vec<NewformEntry>, CliError> {
    match db {
        Some(p) => formmatch::load_db(p).map_err(usage),
        None => Ok(formmatch::seed_db()),
    }
}

pub fn match_cmd(
    traces: &Path,
    db: Option<&Path>,
    level: Option<&str>,
    weight: u32,
    min_primes: usize,
    fmt: Format,
) -> Result<Outcome, CliError> {
    let text = std::fs::read_to_string(traces).map_err(|e| CliError::Io(format!("{}: {e}", traces.display())))?;
    let ledger = Ledger::parse(&text).map_err(usage)?;
    let db = load_db(db)?;
    let bad: BTreeSet<u64> = ledger.skipped.iter().map(|(p, _)| *p).collect();
    let t = ledger.traces();
    if let Some(tag) = level {
        let (lv, label) = formmatch::parse_level_tag(tag).ok_or_else(|| usage(format!("bad level '{tag}'")))?;
        let e = formmatch::find(&db, lv, &label).ok_or_else(|| usage(format!("no entry {lv}{label} in the table")))?;
        let m = match_entry(&t, e, &bad, min_primes);
        let code = if m.verdict == Verdict::Refuted { 1 } else { 0 };
        return Ok(Outcome { out: m.render() + "\n", code });
    }
    match match_traces(&t, &db, weight, &bad, min_primes) {
        Ok(rep) => {
            let code = if rep.best().is_some() || rep.entries.iter().any(|e| e.verdict != Verdict::Refuted) {
                0
            } else {
                1
            };
            let mut out = String::new();
            if fmt == Format::Text {
                out += &match rep.best() {
                    Some(b) => format!("# best: {}\n", b.entry),
                    None => "# no consistent entry\n".into(),
                };
            }
            Ok(Outcome { out: out + &rep.render_text(), code })
        }
        Err(formmatch::FormError::InsufficientData(n)) => {
            Ok(Outcome::ok(format!("insufficient: fewer than {n} comparable primes for every entry\n")))
        }
        Err(e) => Err(usage(e)),
    }
}

// ---------------------------------------------------------------------------

/// Outcome of checking one preset row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowCheck {
    pub row: String,
    pub level: String,
    pub delta: i64,
    pub h12: i64,
    pub h12_expected: i64,
    /// Quoted coefficients that could be compared, and those that agree.
    pub quoted_compared: usize,
    pub quoted_agree: usize,
    /// Comparison against the table entry over all computed good primes.
    pub entry: Option<formmatch::EntryMatch>,
    pub disagreements: Vec<(u64, i64, i64)>,
}

impl RowCheck {
    pub fn refuted(&self) -> bool {
        self.delta != 0 || self.h12 != self.h12_expected || !self.disagreements.is_empty()
    }
    pub fn verdict(&self) -> &'static str {
        if self.refuted() {
            "refuted"
        } else if self.quoted_compared + self.entry.as_ref().map_or(0, |e| e.compared()) == 0 {
            "insufficient"
        } else {
            "consistent"
        }
    }
    pub fn render(&self) -> String {
        let mut s = format!(
            "{}\tlevel={}\tdelta={}\th12={}/{}\tquoted={}/{}",
            self.row,
            if self.level.is_empty() { "-" } else { &self.level },
            self.delta,
            self.h12,
            self.h12_expected,
            self.quoted_agree,
            self.quoted_compared
        );
        if let Some(e) = &self.entry {
            s += &format!("\ttable={}/{}", e.agreeing.len(), e.compared());
        }
        for (p, t, a) in &self.disagreements {
            s += &format!("\tp={p}:trace={t}:a_p={a}");
        }
        s + "\t" + self.verdict()
    }
}

/// Checks one preset row: δ, h12, quoted coefficients and the table entry.
/// Only primes that are good and coprime to the level are compared.
pub fn check_row(
    row: &PresetRow,
    db: &[NewformEntry],
    primes: &[u64],
    cache: Option<&mut TraceCache>,
) -> Result<RowCheck, CliError> {
    let report = analyze(&row.product).map_err(usage)?;
    let mut check = RowCheck {
        row: row.row.clone(),
        level: row.level.clone(),
        delta: report.delta,
        h12: report.h12,
        h12_expected: row.h12,
        quoted_compared: 0,
        quoted_agree: 0,
        entry: None,
        disagreements: vec![],
    };
    if report.delta != 0 {
        return Ok(check);
    }
    let mut ps: BTreeSet<u64> = primes.iter().copied().collect();
    ps.extend(row.quoted.keys().copied());
    let ps: Vec<u64> = ps.into_iter().collect();
    let ledger = compute_ledger(&row.product, &ps, cache)?;
    let traces = ledger.traces();
    let level = formmatch::parse_level_tag(&row.level);
    let lv = level.as_ref().map_or(1, |(l, _)| *l);
    for (&p, &a) in &row.quoted {
        if lv % p == 0 {
            continue;
        }
        if let Some(&t) = traces.get(&p) {
            check.quoted_compared += 1;
            if t == a {
                check.quoted_agree += 1;
            } else {
                check.disagreements.push((p, t, a));
            }
        }
    }
    if let Some((l, label)) = level {
        if let Some(e) = formmatch::find(db, l, &label) {
            let bad: BTreeSet<u64> = ledger.skipped.iter().map(|(p, _)| *p).collect();
            let m = match_entry(&traces, e, &bad, 1);
            for d in &m.disagreeing {
                if !check.disagreements.iter().any(|x| x.0 == d.0) {
                    check.disagreements.push(*d);
                }
            }
            check.entry = Some(m);
        }
    }
    Ok(check)
}

pub fn verify_cmd(
    table: &str,
    primes: &str,
    db: Option<&Path>,
    cache: Option<&Path>,
    _fmt: Format,
) -> Result<Outcome, CliError> {
    let rows = presets::preset(table).map_err(CliError::Usage)?;
    let primes = parse_primes(primes)?;
    let db = load_db(db)?;
    let mut c = match cache {
        Some(p) => Some(TraceCache::load(p).map_err(|e| CliError::Io(e.to_string()))?),
        None => None,
    };
    let mut out = String::new();
    let mut tally: BTreeMap<&str, usize> = BTreeMap::new();
    for row in &rows {
        let chk = check_row(row, &db, &primes, c.as_mut())?;
        *tally.entry(chk.verdict()).or_default() += 1;
        out += &chk.render();
        out.push('\n');
    }
    if let (Some(c), Some(p)) = (c, cache) {
        c.save(p).map_err(|e| CliError::Io(e.to_string()))?;
    }
    let n = |k| tally.get(k).copied().unwrap_or(0);
    out += &format!(
        "# {} rows: {} consistent, {} insufficient, {} refuted\n",
        rows.len(),
        n("consistent"),
        n("insufficient"),
        n("refuted")
    );
    Ok(Outcome { out, code: if n("refuted") > 0 { 1 } else { 0 } })
}

// ---------------------------------------------------------------------------

pub fn catalog_cmd(file: Option<&Path>, _fmt: Format) -> Result<Outcome, CliError> {
    let mut cat = catalog::builtin_catalogue();
    if let Some(p) = file {
        let text = std::fs::read_to_string(p).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?;
        cat.extend(parse_catalogue(&text).map_err(usage)?);
    }
    let mut out = String::new();
    for (name, spec) in &cat {
        let locus = singular_locus(spec).map_err(usage)?;
        let fibres: Vec<String> = locus.iter().map(|f| format!("I{}@{}", f.m, f.location)).collect();
        let total: u32 = locus.iter().map(|f| f.m).sum();
        out += &format!("{name}\t{spec}\t{}\tsum={total}\n", fibres.join(" "));
    }
    Ok(Outcome::ok(out))
}
