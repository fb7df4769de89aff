//! Instance text format.
//!
//! ```text
//! # comment
//! #tree
//! ((a:4,b:2)u:1,c:7)r;
//! #web
//! a b
//! #params k=2 D=8
//! ```
//!
//! The tree is Newick with integer branch lengths; every leaf must be named.
//! Each web line is an arc `prey predator`. Lines starting with `#` that are
//! not one of the three section tags are comments.

use crate::error::{PddError, Result};
use crate::model::{FoodWeb, Instance, PhyloTree};
use std::collections::HashMap;
use std::fmt::Write;

fn perr<T>(line: usize, msg: impl Into<String>) -> Result<T> {
    Err(PddError::Parse { line, msg: msg.into() })
}

struct RawVertex {
    name: String,
    parent: Option<usize>,
    weight: Option<u64>,
    children: usize,
}

/// Parses a Newick string; `line` is used for diagnostics.
pub fn parse_newick(text: &str, line: usize) -> Result<PhyloTree> {
    let chars: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
    let mut verts: Vec<RawVertex> = Vec::new();
    let mut stack: Vec<usize> = Vec::new();
    let mut i = 0;
    let new_vertex = |verts: &mut Vec<RawVertex>, parent: Option<usize>| {
        verts.push(RawVertex { name: String::new(), parent, weight: None, children: 0 });
        if let Some(p) = parent {
            verts[p].children += 1;
        }
        verts.len() - 1
    };
    let mut current = new_vertex(&mut verts, None);
    let read_label = |i: &mut usize| {
        let start = *i;
        while *i < chars.len() && !"(),:;".contains(chars[*i]) {
            *i += 1;
        }
        chars[start..*i].iter().collect::<String>()
    };
    loop {
        if i >= chars.len() {
            return perr(line, "Newick string must end with ';'");
        }
        match chars[i] {
            '(' => {
                stack.push(current);
                current = new_vertex(&mut verts, Some(current));
                i += 1;
            }
            ',' => {
                let Some(&p) = stack.last() else {
                    return perr(line, format!("unexpected ',' at column {}", i + 1));
                };
                current = new_vertex(&mut verts, Some(p));
                i += 1;
            }
            ')' => {
                let Some(p) = stack.pop() else {
                    return perr(line, format!("unbalanced ')' at column {}", i + 1));
                };
                current = p;
                i += 1;
            }
            ':' => {
                i += 1;
                let start = i;
                while i < chars.len() && !"(),:;".contains(chars[i]) {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                let w: i64 = s
                    .parse()
                    .or_else(|_| perr(line, format!("branch length '{s}' is not an integer")))?;
                if w <= 0 {
                    return Err(PddError::Domain(format!(
                        "line {line}: branch length {w} is not positive"
                    )));
                }
                verts[current].weight = Some(w as u64);
            }
            ';' => {
                if !stack.is_empty() {
                    return perr(line, "unbalanced '(' in Newick string");
                }
                if i + 1 != chars.len() {
                    return perr(line, "trailing text after ';'");
                }
                break;
            }
            _ => {
                let name = read_label(&mut i);
                verts[current].name = name;
            }
        }
    }
    let nv = verts.len();
    let mut taxon_of = vec![None; nv];
    let mut next = 0;
    let mut seen: HashMap<String, usize> = HashMap::new();
    for (v, rv) in verts.iter().enumerate() {
        if rv.children == 0 && v != 0 {
            if rv.name.is_empty() {
                return perr(line, "every leaf must be named");
            }
            taxon_of[v] = Some(next);
            next += 1;
        }
        if !rv.name.is_empty() {
            if let Some(_) = seen.insert(rv.name.clone(), v) {
                return perr(line, format!("duplicate label '{}'", rv.name));
            }
        }
        if v != 0 && rv.weight.is_none() {
            return perr(line, format!("edge into '{}' has no branch length", rv.name));
        }
    }
    let tree = PhyloTree::from_parts(
        verts.iter().map(|r| r.parent).collect(),
        verts.iter().map(|r| r.weight.unwrap_or(0)).collect(),
        verts.iter().map(|r| r.name.clone()).collect(),
        taxon_of,
    )?;
    if tree.num_taxa() > 1 && !tree.is_phylogenetic() {
        return perr(line, "every internal vertex needs at least two children");
    }
    Ok(tree)
}

/// Parses an arc list `prey predator` per line against the tree's taxa.
pub fn parse_web(tree: &PhyloTree, text: &str, first_line: usize) -> Result<FoodWeb> {
    let ids: HashMap<&str, usize> =
        (0..tree.num_taxa()).map(|t| (tree.taxon_name(t), t)).collect();
    let mut arcs = Vec::new();
    for (off, raw) in text.lines().enumerate() {
        let line = first_line + off;
        let l = raw.trim();
        if l.is_empty() || l.starts_with('#') {
            continue;
        }
        let parts: Vec<&str> = l.split_whitespace().collect();
        if parts.len() != 2 {
            return perr(line, format!("expected 'prey predator', found '{l}'"));
        }
        let get = |nm: &str| {
            ids.get(nm).copied().ok_or_else(|| PddError::Parse {
                line,
                msg: format!("unknown taxon '{nm}' in food-web"),
            })
        };
        let x = get(parts[0])?;
        let y = get(parts[1])?;
        arcs.push((x, y));
    }
    FoodWeb::new(tree.num_taxa(), &arcs).map_err(|e| PddError::Parse {
        line: first_line,
        msg: match e {
            PddError::Precondition(m) => {
                // Replace taxon ids with names in cycle diagnostics.
                let mut m = m;
                if let Some(pos) = m.rfind("taxon ") {
                    if let Ok(id) = m[pos + 6..].parse::<usize>() {
                        m = format!("{}taxon '{}'", &m[..pos], tree.taxon_name(id));
                    }
                }
                m
            }
            other => other.to_string(),
        },
    })
}

/// Builds an instance from separate tree and web texts.
pub fn parse_instance(tree_text: &str, web_text: &str, k: usize, d: u64) -> Result<Instance> {
    let tree = parse_newick(tree_text, 1)?;
    let web = parse_web(&tree, web_text, 1)?;
    Instance::new(tree, web, k, d)
}

/// Parses a full section-tagged instance document.
pub fn parse_document(text: &str) -> Result<Instance> {
    #[derive(PartialEq)]
    enum Sec {
        None,
        Tree,
        Web,
    }
    let mut sec = Sec::None;
    let mut tree_text = String::new();
    let mut tree_line = 0;
    let mut web_lines: Vec<(usize, String)> = Vec::new();
    let mut k: Option<usize> = None;
    let mut d: Option<u64> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let l = raw.trim();
        if l.is_empty() {
            continue;
        }
        if let Some(rest) = l.strip_prefix("#tree") {
            sec = Sec::Tree;
            tree_line = line;
            tree_text.push_str(rest);
            continue;
        }
        if let Some(rest) = l.strip_prefix("#web") {
            sec = Sec::Web;
            if !rest.trim().is_empty() {
                web_lines.push((line, rest.to_string()));
            }
            continue;
        }
        if let Some(rest) = l.strip_prefix("#params") {
            sec = Sec::None;
            for tok in rest.split_whitespace() {
                let Some((key, val)) = tok.split_once('=') else {
                    return perr(line, format!("malformed parameter '{tok}'"));
                };
                match key {
                    "k" => k = Some(val.parse().or_else(|_| perr(line, format!("bad k '{val}'")))?),
                    "D" | "d" => {
                        d = Some(val.parse().or_else(|_| perr(line, format!("bad D '{val}'")))?)
                    }
                    _ => return perr(line, format!("unknown parameter '{key}'")),
                }
            }
            continue;
        }
        if l.starts_with('#') {
            continue;
        }
        match sec {
            Sec::Tree => tree_text.push_str(l),
            Sec::Web => web_lines.push((line, l.to_string())),
            Sec::None => return perr(line, format!("text outside any section: '{l}'")),
        }
    }
    if tree_text.trim().is_empty() {
        return perr(1, "missing #tree section");
    }
    let tree = parse_newick(&tree_text, tree_line)?;
    let ids: HashMap<&str, usize> =
        (0..tree.num_taxa()).map(|t| (tree.taxon_name(t), t)).collect();
    let mut arcs = Vec::new();
    for (line, l) in &web_lines {
        let parts: Vec<&str> = l.split_whitespace().collect();
        if parts.len() != 2 {
            return perr(*line, format!("expected 'prey predator', found '{l}'"));
        }
        let mut pair = [0usize; 2];
        for (slot, nm) in pair.iter_mut().zip(&parts) {
            *slot = *ids.get(nm).ok_or_else(|| PddError::Parse {
                line: *line,
                msg: format!("unknown taxon '{nm}' in food-web"),
            })?;
        }
        arcs.push((pair[0], pair[1]));
    }
    let web_line = web_lines.first().map_or(1, |(l, _)| *l);
    let web = FoodWeb::new(tree.num_taxa(), &arcs).map_err(|e| PddError::Parse {
        line: web_line,
        msg: e.to_string(),
    })?;
    let k = k.ok_or(PddError::Parse { line: 1, msg: "missing parameter k".into() })?;
    let d = d.ok_or(PddError::Parse { line: 1, msg: "missing parameter D".into() })?;
    Instance::new(tree, web, k, d)
}

/// Newick text of a tree. Unnamed internal vertices stay unnamed.
pub fn write_newick(tree: &PhyloTree) -> String {
    fn rec(t: &PhyloTree, v: usize, out: &mut String) {
        let ch = t.children(v);
        if !ch.is_empty() {
            out.push('(');
            for (i, &c) in ch.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                rec(t, c, out);
            }
            out.push(')');
        }
        out.push_str(t.name(v));
        if v != t.root() {
            write!(out, ":{}", t.weight(v)).unwrap();
        }
    }
    let mut out = String::new();
    rec(tree, tree.root(), &mut out);
    out.push(';');
    out
}

/// Serializes an instance into the document format accepted by [`parse_document`].
pub fn write_document(inst: &Instance) -> String {
    let mut out = String::new();
    writeln!(out, "#tree").unwrap();
    writeln!(out, "{}", write_newick(&inst.tree)).unwrap();
    writeln!(out, "#web").unwrap();
    for (x, y) in inst.web.arcs() {
        writeln!(out, "{} {}", inst.tree.taxon_name(x), inst.tree.taxon_name(y)).unwrap();
    }
    writeln!(out, "#params k={} D={}", inst.k, inst.d).unwrap();
    out
}
