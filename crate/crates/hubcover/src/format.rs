//! Line-oriented text formats for instances, solutions, set cover and
//! queens problems, plus the reduction mapping sidecar.
//!
//! Canonical form: sections in declaration order (header, scalars,
//! vertices, geometry, tasks), entry lines within a section sorted
//! lexicographically, rationals in lowest terms. `parse` then `serialize`
//! reproduces the canonical form bit-exactly.

use crate::model::{
    AdjacencyGraph, Allocation, Geometry, HcpInstance, MetricMatrix, ModelError, QueensInstance,
    RawInstance, SetCoverInstance, Solution, Tour, Variant, Witness,
};
use crate::rational::{format_rational, parse_rational, Rational};
use crate::reductions::{
    queens_to_sa2, reduce_v2_to_v1, reduce_v3_to_v2, setcover_to_v3, v3_to_setcover, Problem,
    ReductionKind, ReductionRecord,
};
use sha2::{Digest, Sha256};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("{0}")]
    Semantic(#[from] ModelError),
    #[error("mapping: {0}")]
    Mapping(String),
}

fn syntax(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Syntax {
        line,
        msg: msg.into(),
    }
}

/// Numbered, comment-stripped, nonempty lines.
fn content_lines(text: &str) -> Vec<(usize, Vec<String>)> {
    text.lines()
        .enumerate()
        .filter_map(|(i, raw)| {
            let stripped = raw.split('#').next().unwrap_or("").trim();
            if stripped.is_empty() {
                None
            } else {
                Some((
                    i + 1,
                    stripped.split_whitespace().map(str::to_string).collect(),
                ))
            }
        })
        .collect()
}

fn expect_header(
    lines: &[(usize, Vec<String>)],
    magic: &str,
) -> Result<(), FormatError> {
    match lines.first() {
        Some((_, tokens)) if tokens.len() == 2 && tokens[0] == magic && tokens[1] == "1" => Ok(()),
        Some((line, _)) => Err(syntax(*line, format!("expected header `{magic} 1`"))),
        None => Err(syntax(0, format!("empty file, expected header `{magic} 1`"))),
    }
}

fn parse_rat_at(line: usize, s: &str) -> Result<Rational, FormatError> {
    parse_rational(s).ok_or_else(|| syntax(line, format!("malformed rational {s:?}")))
}

// ---------------------------------------------------------------------------
// HCPI instances
// ---------------------------------------------------------------------------

pub fn serialize_instance(instance: &HcpInstance) -> String {
    let mut out = String::from("hcpi 1\n");
    out.push_str(&format!("variant {}\n", instance.variant().as_str()));
    out.push_str(&format!("allocation {}\n", instance.allocation().as_str()));
    out.push_str(&format!("alpha {}\n", format_rational(instance.alpha())));
    if instance.variant() == Variant::V1 {
        out.push_str(&format!("phi {}\n", format_rational(instance.phi())));
    }
    if let Some(p) = instance.capacity() {
        out.push_str(&format!("capacity {p}\n"));
    }
    for b in instance.branches() {
        out.push_str(&format!("branch {b}\n"));
    }
    for (h, name) in instance.hubs().iter().enumerate() {
        out.push_str(&format!(
            "hub {name} cost {}\n",
            format_rational(instance.opening_cost(h))
        ));
    }

    let vertex_name = |v: usize| -> &str {
        if v < instance.num_branches() {
            &instance.branches()[v]
        } else {
            &instance.hubs()[v - instance.num_branches()]
        }
    };

    let mut entry_lines: Vec<String> = Vec::new();
    match instance.geometry() {
        Geometry::Metric(m) => {
            for i in 0..m.size() {
                for j in i + 1..m.size() {
                    let (a, b) = order_names(vertex_name(i), vertex_name(j));
                    entry_lines.push(format!("dist {a} {b} {}", format_rational(m.get(i, j))));
                }
            }
        }
        Geometry::Graph(g) => {
            for (b, h) in g.branch_hub_edges() {
                let (a, b) = order_names(&instance.branches()[b], &instance.hubs()[h]);
                entry_lines.push(format!("edge {a} {b}"));
            }
            for (h, h2) in g.hub_hub_edges() {
                let (a, b) = order_names(&instance.hubs()[h], &instance.hubs()[h2]);
                entry_lines.push(format!("edge {a} {b}"));
            }
        }
    }
    entry_lines.sort();
    for line in &entry_lines {
        out.push_str(line);
        out.push('\n');
    }

    let mut task_lines: Vec<String> = instance
        .tasks()
        .iter()
        .map(|&(b, b2)| format!("task {} {}", instance.branches()[b], instance.branches()[b2]))
        .collect();
    task_lines.sort();
    for line in &task_lines {
        out.push_str(line);
        out.push('\n');
    }
    out
}

fn order_names<'a>(a: &'a str, b: &'a str) -> (&'a str, &'a str) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

pub fn parse_instance(text: &str) -> Result<HcpInstance, FormatError> {
    let lines = content_lines(text);
    expect_header(&lines, "hcpi")?;

    let mut variant: Option<(usize, Variant)> = None;
    let mut allocation: Option<Allocation> = None;
    let mut alpha: Option<Rational> = None;
    let mut phi: Option<(usize, Rational)> = None;
    let mut capacity: Option<usize> = None;
    let mut branches: Vec<String> = Vec::new();
    let mut hubs: Vec<String> = Vec::new();
    let mut costs: Vec<Rational> = Vec::new();
    let mut dists: Vec<(usize, String, String, Rational)> = Vec::new();
    let mut edges: Vec<(usize, String, String)> = Vec::new();
    let mut tasks: Vec<(usize, String, String)> = Vec::new();

    for (line, tokens) in lines.iter().skip(1) {
        let line = *line;
        match (tokens[0].as_str(), tokens.len()) {
            ("variant", 2) => {
                let v = match tokens[1].as_str() {
                    "v1" => Variant::V1,
                    "v2" => Variant::V2,
                    "v3" => Variant::V3,
                    other => return Err(syntax(line, format!("unknown variant {other:?}"))),
                };
                variant = Some((line, v));
            }
            ("allocation", 2) => {
                allocation = Some(match tokens[1].as_str() {
                    "single" => Allocation::Single,
                    "multi" => Allocation::Multi,
                    other => return Err(syntax(line, format!("unknown allocation {other:?}"))),
                });
            }
            ("alpha", 2) => alpha = Some(parse_rat_at(line, &tokens[1])?),
            ("phi", 2) => phi = Some((line, parse_rat_at(line, &tokens[1])?)),
            ("capacity", 2) => {
                capacity = Some(tokens[1].parse().map_err(|_| {
                    syntax(line, format!("malformed capacity {:?}", tokens[1]))
                })?);
            }
            ("branch", 2) => branches.push(tokens[1].clone()),
            ("hub", 4) if tokens[2] == "cost" => {
                hubs.push(tokens[1].clone());
                costs.push(parse_rat_at(line, &tokens[3])?);
            }
            ("dist", 4) => dists.push((
                line,
                tokens[1].clone(),
                tokens[2].clone(),
                parse_rat_at(line, &tokens[3])?,
            )),
            ("edge", 3) => edges.push((line, tokens[1].clone(), tokens[2].clone())),
            ("task", 3) => tasks.push((line, tokens[1].clone(), tokens[2].clone())),
            (key, _) => return Err(syntax(line, format!("unrecognized line starting {key:?}"))),
        }
    }

    let (_, variant) = variant.ok_or_else(|| syntax(0, "missing key `variant`"))?;
    let allocation = allocation.ok_or_else(|| syntax(0, "missing key `allocation`"))?;
    let alpha = alpha.ok_or_else(|| syntax(0, "missing key `alpha`"))?;
    let phi = match (variant, phi) {
        (Variant::V1, Some((_, p))) => p,
        (Variant::V1, None) => return Err(syntax(0, "missing key `phi` (required for v1)")),
        (_, Some((line, _))) => {
            return Err(syntax(line, "`phi` only applies to variant v1"))
        }
        (_, None) => Rational::from_integer(0.into()),
    };

    let mut index: BTreeMap<&str, (bool, usize)> = BTreeMap::new();
    for (b, name) in branches.iter().enumerate() {
        index.insert(name, (true, b));
    }
    for (h, name) in hubs.iter().enumerate() {
        if index.insert(name, (false, h)).is_some() {
            return Err(FormatError::Semantic(ModelError::DuplicateName(
                name.clone(),
            )));
        }
    }
    let lookup = |line: usize, name: &str| -> Result<(bool, usize), FormatError> {
        index
            .get(name)
            .copied()
            .ok_or_else(|| syntax(line, format!("unknown vertex {name:?}")))
    };

    let geometry = match variant {
        Variant::V1 => {
            if let Some((line, a, b)) = edges.first() {
                return Err(syntax(*line, format!("`edge {a} {b}` in a v1 instance")));
            }
            let nb = branches.len();
            let n = nb + hubs.len();
            let vertex = |is_branch: bool, i: usize| if is_branch { i } else { nb + i };
            let mut matrix: Vec<Vec<Option<Rational>>> = vec![vec![None; n]; n];
            for (i, row) in matrix.iter_mut().enumerate() {
                row[i] = Some(Rational::from_integer(0.into()));
            }
            for (line, a, b, value) in &dists {
                let i = {
                    let (is_b, idx) = lookup(*line, a)?;
                    vertex(is_b, idx)
                };
                let j = {
                    let (is_b, idx) = lookup(*line, b)?;
                    vertex(is_b, idx)
                };
                if i == j {
                    return Err(syntax(*line, format!("distance from {a} to itself")));
                }
                if matrix[i][j].is_some() {
                    return Err(syntax(*line, format!("duplicate distance {a} {b}")));
                }
                matrix[i][j] = Some(value.clone());
                matrix[j][i] = Some(value.clone());
            }
            let mut rows = Vec::with_capacity(n);
            for (i, row) in matrix.into_iter().enumerate() {
                let mut out_row = Vec::with_capacity(n);
                for (j, cell) in row.into_iter().enumerate() {
                    match cell {
                        Some(v) => out_row.push(v),
                        None => {
                            return Err(syntax(
                                0,
                                format!("missing distance between vertices {i} and {j}"),
                            ))
                        }
                    }
                }
                rows.push(out_row);
            }
            Geometry::Metric(MetricMatrix::from_rows(rows)?)
        }
        Variant::V2 | Variant::V3 => {
            if let Some((line, a, b, _)) = dists.first() {
                return Err(syntax(*line, format!("`dist {a} {b} ...` in a graph instance")));
            }
            let mut branch_hub = Vec::new();
            let mut hub_hub = Vec::new();
            for (line, a, b) in &edges {
                match (lookup(*line, a)?, lookup(*line, b)?) {
                    ((true, bi), (false, hi)) | ((false, hi), (true, bi)) => {
                        branch_hub.push((bi, hi))
                    }
                    ((false, h1), (false, h2)) => hub_hub.push((h1, h2)),
                    ((true, _), (true, _)) => {
                        return Err(syntax(*line, format!("branch-branch edge {a} {b}")))
                    }
                }
            }
            Geometry::Graph(AdjacencyGraph::new(branch_hub, hub_hub))
        }
    };

    let mut task_pairs = Vec::with_capacity(tasks.len());
    for (line, a, b) in &tasks {
        match (lookup(*line, a)?, lookup(*line, b)?) {
            ((true, ba), (true, bb)) => task_pairs.push((ba, bb)),
            _ => return Err(syntax(*line, format!("task endpoints {a} {b} must be branches"))),
        }
    }

    RawInstance {
        branches,
        hubs,
        opening_cost: costs,
        geometry,
        tasks: task_pairs,
        alpha,
        phi,
        variant,
        allocation,
        capacity,
    }
    .build()
    .map_err(FormatError::Semantic)
}

// ---------------------------------------------------------------------------
// HCPS solutions
// ---------------------------------------------------------------------------

pub fn serialize_solution(instance: &HcpInstance, solution: &Solution) -> String {
    let mut open_lines: Vec<String> = solution
        .open_hubs()
        .iter()
        .map(|&h| format!("open {}", instance.hubs()[h]))
        .collect();
    open_lines.sort();

    let mut witness_lines: Vec<String> = match solution.witness() {
        Witness::Multi(tours) => tours
            .values()
            .map(|t| {
                format!(
                    "tour {} {} {} {}",
                    instance.branches()[t.b],
                    instance.hubs()[t.h],
                    instance.hubs()[t.h2],
                    instance.branches()[t.b2]
                )
            })
            .collect(),
        Witness::Single(assign) | Witness::Cover(assign) => assign
            .iter()
            .map(|(&b, &h)| format!("assign {} {}", instance.branches()[b], instance.hubs()[h]))
            .collect(),
    };
    witness_lines.sort();

    let mut out = String::new();
    for line in open_lines.iter().chain(witness_lines.iter()) {
        out.push_str(line);
        out.push('\n');
    }
    out
}

pub fn parse_solution(instance: &HcpInstance, text: &str) -> Result<Solution, FormatError> {
    let mut open = BTreeSet::new();
    let mut tours: BTreeMap<(usize, usize), Tour> = BTreeMap::new();
    let mut assign: BTreeMap<usize, usize> = BTreeMap::new();

    let expects_tours =
        instance.allocation() == Allocation::Multi && instance.variant() != Variant::V3;

    for (line, tokens) in content_lines(text) {
        match (tokens[0].as_str(), tokens.len()) {
            ("open", 2) => {
                let h = instance
                    .hub_index(&tokens[1])
                    .ok_or_else(|| syntax(line, format!("unknown hub {:?}", tokens[1])))?;
                open.insert(h);
            }
            ("tour", 5) => {
                if !expects_tours {
                    return Err(syntax(line, "tour line in a non-multi-allocation solution"));
                }
                let b = instance
                    .branch_index(&tokens[1])
                    .ok_or_else(|| syntax(line, format!("unknown branch {:?}", tokens[1])))?;
                let h = instance
                    .hub_index(&tokens[2])
                    .ok_or_else(|| syntax(line, format!("unknown hub {:?}", tokens[2])))?;
                let h2 = instance
                    .hub_index(&tokens[3])
                    .ok_or_else(|| syntax(line, format!("unknown hub {:?}", tokens[3])))?;
                let b2 = instance
                    .branch_index(&tokens[4])
                    .ok_or_else(|| syntax(line, format!("unknown branch {:?}", tokens[4])))?;
                if tours.insert((b, b2), Tour::new(b, h, h2, b2)).is_some() {
                    return Err(syntax(line, "duplicate tour for one task"));
                }
            }
            ("assign", 3) => {
                if expects_tours {
                    return Err(syntax(line, "assign line in a multi-allocation solution"));
                }
                let b = instance
                    .branch_index(&tokens[1])
                    .ok_or_else(|| syntax(line, format!("unknown branch {:?}", tokens[1])))?;
                let h = instance
                    .hub_index(&tokens[2])
                    .ok_or_else(|| syntax(line, format!("unknown hub {:?}", tokens[2])))?;
                if assign.insert(b, h).is_some() {
                    return Err(syntax(line, format!("duplicate assignment for {:?}", tokens[1])));
                }
            }
            (key, _) => return Err(syntax(line, format!("unrecognized line starting {key:?}"))),
        }
    }

    let witness = if expects_tours {
        Witness::Multi(tours)
    } else if instance.variant() == Variant::V3 {
        Witness::Cover(assign)
    } else {
        Witness::Single(assign)
    };
    Ok(Solution::new(instance, open, witness))
}

// ---------------------------------------------------------------------------
// HCPC set cover
// ---------------------------------------------------------------------------

pub fn serialize_setcover(sc: &SetCoverInstance) -> String {
    let mut out = String::from("hcpc 1\n");
    for e in sc.elements() {
        out.push_str(&format!("element {e}\n"));
    }
    for (name, weight, members) in sc.sets() {
        out.push_str(&format!("set {name} cost {}", format_rational(weight)));
        for &e in members {
            out.push(' ');
            out.push_str(&sc.elements()[e]);
        }
        out.push('\n');
    }
    out
}

pub fn parse_setcover(text: &str) -> Result<SetCoverInstance, FormatError> {
    let lines = content_lines(text);
    expect_header(&lines, "hcpc")?;

    let mut elements: Vec<String> = Vec::new();
    let mut raw_sets: Vec<(usize, String, Rational, Vec<String>)> = Vec::new();
    for (line, tokens) in lines.iter().skip(1) {
        match (tokens[0].as_str(), tokens.len()) {
            ("element", 2) => elements.push(tokens[1].clone()),
            ("set", n) if n >= 4 && tokens[2] == "cost" => raw_sets.push((
                *line,
                tokens[1].clone(),
                parse_rat_at(*line, &tokens[3])?,
                tokens[4..].to_vec(),
            )),
            (key, _) => return Err(syntax(*line, format!("unrecognized line starting {key:?}"))),
        }
    }

    let index: BTreeMap<&str, usize> = elements
        .iter()
        .enumerate()
        .map(|(i, n)| (n.as_str(), i))
        .collect();
    let mut sets = Vec::with_capacity(raw_sets.len());
    for (line, name, weight, members) in raw_sets {
        let mut member_ids = BTreeSet::new();
        for m in &members {
            let &e = index
                .get(m.as_str())
                .ok_or_else(|| syntax(line, format!("unknown element {m:?}")))?;
            member_ids.insert(e);
        }
        sets.push((name, weight, member_ids));
    }
    SetCoverInstance::new(elements, sets).map_err(FormatError::Semantic)
}

pub fn serialize_picks(sc: &SetCoverInstance, picks: &[usize]) -> String {
    let mut lines: Vec<String> = picks
        .iter()
        .map(|&s| format!("pick {}", sc.sets()[s].0))
        .collect();
    lines.sort();
    lines.dedup();
    let mut out = String::new();
    for line in lines {
        out.push_str(&line);
        out.push('\n');
    }
    out
}

pub fn parse_picks(sc: &SetCoverInstance, text: &str) -> Result<Vec<usize>, FormatError> {
    let mut picks = Vec::new();
    for (line, tokens) in content_lines(text) {
        match (tokens[0].as_str(), tokens.len()) {
            ("pick", 2) => {
                let s = sc
                    .set_index(&tokens[1])
                    .ok_or_else(|| syntax(line, format!("unknown set {:?}", tokens[1])))?;
                picks.push(s);
            }
            (key, _) => return Err(syntax(line, format!("unrecognized line starting {key:?}"))),
        }
    }
    picks.sort_unstable();
    picks.dedup();
    Ok(picks)
}

// ---------------------------------------------------------------------------
// HCPQ queens boards
// ---------------------------------------------------------------------------

pub fn serialize_queens(q: &QueensInstance) -> String {
    let mut out = format!("hcpq 1\nn {}\n", q.n());
    for &(r, c) in q.placed() {
        out.push_str(&format!("queen {r} {c}\n"));
    }
    out
}

pub fn parse_queens(text: &str) -> Result<QueensInstance, FormatError> {
    let lines = content_lines(text);
    expect_header(&lines, "hcpq")?;

    let mut n: Option<usize> = None;
    let mut placed = Vec::new();
    for (line, tokens) in lines.iter().skip(1) {
        match (tokens[0].as_str(), tokens.len()) {
            ("n", 2) => {
                n = Some(tokens[1].parse().map_err(|_| {
                    syntax(*line, format!("malformed board size {:?}", tokens[1]))
                })?)
            }
            ("queen", 3) => {
                let r = tokens[1]
                    .parse()
                    .map_err(|_| syntax(*line, format!("malformed row {:?}", tokens[1])))?;
                let c = tokens[2]
                    .parse()
                    .map_err(|_| syntax(*line, format!("malformed column {:?}", tokens[2])))?;
                placed.push((r, c));
            }
            (key, _) => return Err(syntax(*line, format!("unrecognized line starting {key:?}"))),
        }
    }
    let n = n.ok_or_else(|| syntax(0, "missing key `n`"))?;
    QueensInstance::new(n, placed).map_err(FormatError::Semantic)
}

// ---------------------------------------------------------------------------
// Digests and the mapping sidecar
// ---------------------------------------------------------------------------

/// Lowercase hex SHA-256 of a canonical serialization.
pub fn digest(text: &str) -> String {
    let mut hasher = Sha256::new();
    hasher.update(text.as_bytes());
    hasher
        .finalize()
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

fn problem_text(p: &Problem) -> (&'static str, String) {
    match p {
        Problem::Hcp(i) => ("hcpi", serialize_instance(i)),
        Problem::SetCover(sc) => ("hcpc", serialize_setcover(sc)),
        Problem::Queens(q) => ("hcpq", serialize_queens(q)),
    }
}

pub fn problem_digest(p: &Problem) -> String {
    digest(&problem_text(p).1)
}

/// The sidecar embeds the canonical source problem and the reduction
/// parameters; reading it re-runs the reduction and cross-checks the
/// recorded target digest.
pub fn serialize_mapping(record: &ReductionRecord) -> String {
    let mut out = String::from("hcpm 1\n");
    out.push_str(&format!("kind {}\n", record.kind.as_str()));
    if let ReductionKind::V3ToV2 { b0, allocation } = &record.kind {
        let source = record.source.as_hcp().expect("hcp source");
        out.push_str(&format!("b0 {}\n", source.branches()[*b0]));
        out.push_str(&format!("allocation {}\n", allocation.as_str()));
    }
    out.push_str(&format!("source-digest {}\n", problem_digest(&record.source)));
    out.push_str(&format!("target-digest {}\n", problem_digest(&record.target)));
    let (tag, text) = problem_text(&record.source);
    out.push_str(&format!("begin-source {tag}\n"));
    out.push_str(&text);
    out.push_str("end-source\n");
    out
}

pub fn parse_mapping(text: &str) -> Result<ReductionRecord, FormatError> {
    let mut kind: Option<String> = None;
    let mut b0_name: Option<String> = None;
    let mut allocation = Allocation::Single;
    let mut target_digest: Option<String> = None;
    let mut source_tag: Option<String> = None;
    let mut source_text = String::new();
    let mut in_source = false;
    let mut seen_header = false;

    for (lineno, raw) in text.lines().enumerate() {
        let lineno = lineno + 1;
        if in_source {
            if raw.trim() == "end-source" {
                in_source = false;
            } else {
                source_text.push_str(raw);
                source_text.push('\n');
            }
            continue;
        }
        let stripped = raw.split('#').next().unwrap_or("").trim();
        if stripped.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = stripped.split_whitespace().collect();
        if !seen_header {
            if tokens != ["hcpm", "1"] {
                return Err(syntax(lineno, "expected header `hcpm 1`"));
            }
            seen_header = true;
            continue;
        }
        match (tokens[0], tokens.len()) {
            ("kind", 2) => kind = Some(tokens[1].to_string()),
            ("b0", 2) => b0_name = Some(tokens[1].to_string()),
            ("allocation", 2) => {
                allocation = match tokens[1] {
                    "single" => Allocation::Single,
                    "multi" => Allocation::Multi,
                    other => return Err(syntax(lineno, format!("unknown allocation {other:?}"))),
                }
            }
            ("source-digest", 2) => {}
            ("target-digest", 2) => target_digest = Some(tokens[1].to_string()),
            ("begin-source", 2) => {
                source_tag = Some(tokens[1].to_string());
                in_source = true;
            }
            (key, _) => {
                return Err(syntax(lineno, format!("unrecognized line starting {key:?}")))
            }
        }
    }
    if !seen_header {
        return Err(syntax(0, "empty file, expected header `hcpm 1`"));
    }

    let kind = kind.ok_or_else(|| syntax(0, "missing key `kind`"))?;
    let source_tag = source_tag.ok_or_else(|| syntax(0, "missing `begin-source` block"))?;
    let expected_target = target_digest.ok_or_else(|| syntax(0, "missing key `target-digest`"))?;

    let record = match (kind.as_str(), source_tag.as_str()) {
        ("v2-to-v1", "hcpi") => {
            let source = parse_instance(&source_text)?;
            reduce_v2_to_v1(&source).map_err(|e| FormatError::Mapping(e.to_string()))?
        }
        ("v3-to-v2", "hcpi") => {
            let source = parse_instance(&source_text)?;
            let b0 = match &b0_name {
                Some(name) => Some(source.branch_index(name).ok_or_else(|| {
                    FormatError::Mapping(format!("unknown b0 branch {name:?}"))
                })?),
                None => None,
            };
            reduce_v3_to_v2(&source, b0, allocation)
                .map_err(|e| FormatError::Mapping(e.to_string()))?
        }
        ("setcover-to-v3", "hcpc") => {
            let source = parse_setcover(&source_text)?;
            setcover_to_v3(&source).map_err(|e| FormatError::Mapping(e.to_string()))?
        }
        ("v3-to-setcover", "hcpi") => {
            let source = parse_instance(&source_text)?;
            v3_to_setcover(&source).map_err(|e| FormatError::Mapping(e.to_string()))?
        }
        ("queens-sa2", "hcpq") => {
            let source = parse_queens(&source_text)?;
            queens_to_sa2(&source).map_err(|e| FormatError::Mapping(e.to_string()))?
        }
        (k, tag) => {
            return Err(FormatError::Mapping(format!(
                "kind {k:?} does not accept a {tag:?} source"
            )))
        }
    };

    let actual = problem_digest(&record.target);
    if actual != expected_target {
        return Err(FormatError::Mapping(format!(
            "target digest mismatch: recorded {expected_target}, reconstructed {actual}"
        )));
    }
    Ok(record)
}
