//! Plain-text file formats.
//!
//! Transformation:
//! ```text
//! transform n=2 q=2
//! 1 0
//! ...
//! ```
//! followed by `q^n` lines, line `j` holding the image of state `j`
//! (register 0 first). A file may hold several transformations in a row.
//!
//! Program: `program n=<n> q=<q>` then one line per instruction,
//! `<target> : <coordinate table>`; lines starting with `#` are comments.
//!
//! Machine descriptor: `machine kind=<kind> q=<q> n=<n> m=<m>`, then
//! `name=value` parameter lines, `layout <group> <start>..<end>` lines and,
//! for catalog machines, `catalog=<path>` naming a transformation file.
//!
//! Schedule: one step per line, `u <register>`, `P` (all registers but the
//! last in parallel) or `L` (the last register), with `# boundary <target>`
//! lines after the step that completes a target.

use std::fmt::Write as _;
use std::path::Path;

use crate::algebra::{checked_pow, digits_into, lex_index, Instruction, Program, Symbol, Transformation};
use crate::error::{Error, Result};
use crate::machines::{
    complete_compact, complete_max_time, complete_min_time, compact_universal,
    elementary_universal, fast_universal, quasi_parallel, simple_compact_universal, Boundary,
    Group, MachineKind, Schedule, Step, UniversalMachine,
};

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

/// Parses `key=value` fields after a fixed keyword.
fn header_fields<'a>(line: &'a str, keyword: &str, lineno: usize) -> Result<Vec<(&'a str, &'a str)>> {
    let mut words = line.split_whitespace();
    if words.next() != Some(keyword) {
        return Err(parse_err(lineno, format!("expected `{keyword}` header")));
    }
    words
        .map(|w| {
            w.split_once('=')
                .ok_or_else(|| parse_err(lineno, format!("malformed field {w:?}")))
        })
        .collect()
}

fn field<T: std::str::FromStr>(fields: &[(&str, &str)], key: &str, lineno: usize) -> Result<T> {
    let (_, v) = fields
        .iter()
        .find(|(k, _)| *k == key)
        .ok_or_else(|| parse_err(lineno, format!("missing {key}=")))?;
    v.parse()
        .map_err(|_| parse_err(lineno, format!("bad value for {key}: {v:?}")))
}

fn digits_line(text: &str, q: u32, lineno: usize) -> Result<Vec<Symbol>> {
    text.split_whitespace()
        .map(|w| match w.parse::<Symbol>() {
            Ok(d) if d < q => Ok(d),
            _ => Err(parse_err(lineno, format!("{w:?} is not a symbol below {q}"))),
        })
        .collect()
}

fn join(digits: &[Symbol]) -> String {
    digits
        .iter()
        .map(|d| d.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

/// Non-empty lines with their 1-based numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty())
}

pub fn print_transformation(g: &Transformation) -> String {
    let (n, q) = (g.n(), g.q());
    let mut out = format!("transform n={n} q={q}\n");
    let mut y = vec![0; n];
    for j in 0..g.size() {
        digits_into(g.image(j), q, &mut y);
        out.push_str(&join(&y));
        out.push('\n');
    }
    out
}

/// Parses every transformation in `text`.
pub fn parse_transformations(text: &str) -> Result<Vec<Transformation>> {
    let lines: Vec<(usize, &str)> = content_lines(text).collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < lines.len() {
        let (lineno, header) = lines[i];
        let fields = header_fields(header, "transform", lineno)?;
        let n: usize = field(&fields, "n", lineno)?;
        let q: u32 = field(&fields, "q", lineno)?;
        if q < 2 {
            return Err(parse_err(lineno, "q must be at least 2"));
        }
        let size = checked_pow(q, n)
            .filter(|&s| s <= 1 << 24)
            .ok_or_else(|| parse_err(lineno, "q^n too large"))?;
        let body: Vec<(usize, &str)> = lines[i + 1..]
            .iter()
            .take_while(|(_, l)| !l.starts_with("transform"))
            .copied()
            .collect();
        if body.len() != size {
            return Err(parse_err(
                lineno,
                format!("{} table lines, expected q^n = {size}", body.len()),
            ));
        }
        let images = body
            .iter()
            .map(|&(ln, l)| {
                let d = digits_line(l, q, ln)?;
                if d.len() != n {
                    return Err(parse_err(ln, format!("{} digits, expected n = {n}", d.len())));
                }
                Ok(lex_index(&d, q))
            })
            .collect::<Result<Vec<_>>>()?;
        out.push(Transformation::from_images(n, q, images)?);
        i += 1 + size;
    }
    Ok(out)
}

/// Parses a file holding exactly one transformation.
pub fn parse_transformation(text: &str) -> Result<Transformation> {
    let mut all = parse_transformations(text)?;
    match all.len() {
        1 => Ok(all.pop().expect("one")),
        k => Err(parse_err(1, format!("{k} transformations, expected 1"))),
    }
}

pub fn print_program(p: &Program) -> String {
    let mut out = format!("program n={} q={}\n", p.n(), p.q());
    for ins in p.steps() {
        let _ = writeln!(out, "{} : {}", ins.target(), join(ins.coord()));
    }
    out
}

pub fn parse_program(text: &str) -> Result<Program> {
    let mut lines = content_lines(text);
    let (lineno, header) = lines.next().ok_or_else(|| parse_err(1, "empty program file"))?;
    let fields = header_fields(header, "program", lineno)?;
    let n: usize = field(&fields, "n", lineno)?;
    let q: u32 = field(&fields, "q", lineno)?;
    if q < 2 || checked_pow(q, n).is_none() {
        return Err(parse_err(lineno, "invalid shape"));
    }
    let mut program = Program::new(n, q);
    for (ln, l) in lines.filter(|(_, l)| !l.starts_with('#')) {
        let (target, table) = l
            .split_once(':')
            .ok_or_else(|| parse_err(ln, "expected `<target> : <table>`"))?;
        let target: usize = target
            .trim()
            .parse()
            .map_err(|_| parse_err(ln, format!("bad target {target:?}")))?;
        let coord = digits_line(table, q, ln)?;
        let ins = Instruction::new(n, q, target, coord).map_err(|e| parse_err(ln, e.to_string()))?;
        program.push(ins)?;
    }
    Ok(program)
}

pub fn print_schedule(s: &Schedule) -> String {
    let mut out = String::new();
    let mut b = s.boundaries().iter().peekable();
    for k in 0..=s.len() {
        while let Some(bd) = b.next_if(|bd| bd.step == k) {
            let _ = writeln!(out, "# boundary {}", bd.target);
        }
        match s.steps().get(k) {
            Some(Step::Update(i)) => {
                let _ = writeln!(out, "u {i}");
            }
            Some(Step::Parallel) => out.push_str("P\n"),
            Some(Step::Last) => out.push_str("L\n"),
            None => {}
        }
    }
    out
}

pub fn parse_schedule(text: &str) -> Result<Schedule> {
    let mut steps = Vec::new();
    let mut boundaries = Vec::new();
    for (ln, l) in content_lines(text) {
        if let Some(rest) = l.strip_prefix('#') {
            let rest = rest.trim();
            if let Some(t) = rest.strip_prefix("boundary") {
                let target = t
                    .trim()
                    .parse()
                    .map_err(|_| parse_err(ln, format!("bad boundary target {t:?}")))?;
                boundaries.push(Boundary {
                    step: steps.len(),
                    target,
                });
            }
            continue;
        }
        let step = match l {
            "P" => Step::Parallel,
            "L" => Step::Last,
            _ => match l.strip_prefix("u ") {
                Some(r) => Step::Update(
                    r.trim()
                        .parse()
                        .map_err(|_| parse_err(ln, format!("bad register {r:?}")))?,
                ),
                None => return Err(parse_err(ln, format!("unknown step {l:?}"))),
            },
        };
        steps.push(step);
    }
    Ok(Schedule::from_parts(steps, boundaries))
}

/// The textual description of a machine: enough to rebuild it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MachineDescriptor {
    pub kind: MachineKind,
    pub q: u32,
    pub n: usize,
    pub m: usize,
    pub params: Vec<(String, String)>,
    pub layout: Vec<Group>,
    /// Transformation file holding the catalog, for catalog machines.
    pub catalog: Option<String>,
}

impl MachineDescriptor {
    pub fn of(machine: &UniversalMachine, catalog: Option<&str>) -> Self {
        MachineDescriptor {
            kind: machine.kind(),
            q: machine.q(),
            n: machine.n(),
            m: machine.m(),
            params: machine.params().to_vec(),
            layout: machine.layout().to_vec(),
            catalog: catalog.map(str::to_string),
        }
    }

    /// Rebuilds the machine, resolving the catalog path against `dir`, and
    /// checks that it matches the description.
    pub fn build(&self, dir: &Path) -> Result<UniversalMachine> {
        let catalog = match (&self.catalog, self.kind.has_catalog()) {
            (Some(path), true) => {
                let text = std::fs::read_to_string(dir.join(path))?;
                parse_transformations(&text)?
            }
            (None, true) => {
                return Err(Error::Precondition(format!(
                    "{} machine needs a catalog",
                    self.kind
                )))
            }
            _ => Vec::new(),
        };
        let machine = build_machine(self.kind, self.q, self.n, catalog)?;
        let rebuilt = MachineDescriptor::of(&machine, self.catalog.as_deref());
        if &rebuilt != self {
            return Err(Error::Precondition(
                "descriptor does not match the rebuilt machine".into(),
            ));
        }
        Ok(machine)
    }
}

/// Constructs a machine of the given kind. Max-time catalogs are given
/// flattened and cut into sequences of length `Q`.
pub fn build_machine(
    kind: MachineKind,
    q: u32,
    n: usize,
    catalog: Vec<Transformation>,
) -> Result<UniversalMachine> {
    match kind {
        MachineKind::Elementary => elementary_universal(q, n),
        MachineKind::Compact => compact_universal(q, n),
        MachineKind::Simple => simple_compact_universal(q, n),
        MachineKind::Fast => fast_universal(q, n),
        MachineKind::Complete => complete_compact(q, n),
        MachineKind::MinTime => complete_min_time(q, n),
        MachineKind::MaxTime => {
            let count = crate::machines::pow128(q, checked_pow(q, n).unwrap_or(usize::MAX))
                .filter(|&c| c <= 1 << 16)
                .ok_or_else(|| Error::Precondition("Q too large".into()))? as usize;
            if catalog.is_empty() || catalog.len() % count != 0 {
                return Err(Error::Shape(format!(
                    "{} catalog entries, expected a positive multiple of Q = {count}",
                    catalog.len()
                )));
            }
            complete_max_time(q, n, catalog.chunks(count).map(<[_]>::to_vec).collect())
        }
        MachineKind::QuasiParallel => quasi_parallel(q, n, catalog),
    }
}

pub fn print_descriptor(d: &MachineDescriptor) -> String {
    let mut out = format!("machine kind={} q={} n={} m={}\n", d.kind, d.q, d.n, d.m);
    for (k, v) in &d.params {
        let _ = writeln!(out, "{k}={v}");
    }
    for g in &d.layout {
        let _ = writeln!(out, "layout {} {}..{}", g.name, g.registers.start, g.registers.end);
    }
    if let Some(c) = &d.catalog {
        let _ = writeln!(out, "catalog={c}");
    }
    out
}

pub fn parse_descriptor(text: &str) -> Result<MachineDescriptor> {
    let mut lines = content_lines(text);
    let (lineno, header) = lines.next().ok_or_else(|| parse_err(1, "empty descriptor"))?;
    let fields = header_fields(header, "machine", lineno)?;
    let kind: String = field(&fields, "kind", lineno)?;
    let mut d = MachineDescriptor {
        kind: kind.parse().map_err(|e: Error| parse_err(lineno, e.to_string()))?,
        q: field(&fields, "q", lineno)?,
        n: field(&fields, "n", lineno)?,
        m: field(&fields, "m", lineno)?,
        params: Vec::new(),
        layout: Vec::new(),
        catalog: None,
    };
    for (ln, l) in lines {
        if let Some(rest) = l.strip_prefix("layout ") {
            let (name, range) = rest
                .trim()
                .split_once(' ')
                .ok_or_else(|| parse_err(ln, "expected `layout <name> <a>..<b>`"))?;
            let (a, b) = range
                .trim()
                .split_once("..")
                .ok_or_else(|| parse_err(ln, format!("bad range {range:?}")))?;
            let parse = |s: &str| {
                s.parse::<usize>()
                    .map_err(|_| parse_err(ln, format!("bad register {s:?}")))
            };
            d.layout.push(Group {
                name: name.to_string(),
                registers: parse(a)?..parse(b)?,
            });
        } else if let Some(path) = l.strip_prefix("catalog=") {
            d.catalog = Some(path.to_string());
        } else if let Some((k, v)) = l.split_once('=') {
            d.params.push((k.to_string(), v.to_string()));
        } else {
            return Err(parse_err(ln, format!("unrecognized line {l:?}")));
        }
    }
    Ok(d)
}
