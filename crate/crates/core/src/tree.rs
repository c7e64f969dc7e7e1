//! Constituency trees recovered from CoNLL parse-bit columns.

use std::collections::HashMap;

use crate::error::{Error, Result};

pub type NodeId = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Node {
    pub label: String,
    pub children: Vec<NodeId>,
    pub parent: Option<NodeId>,
    /// First token covered (inclusive).
    pub start: usize,
    /// Last token covered (inclusive).
    pub end: usize,
    /// Set on preterminals; the label is then the POS tag.
    pub token: Option<usize>,
}

impl Node {
    pub fn is_leaf(&self) -> bool {
        self.token.is_some()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseTree {
    nodes: Vec<Node>,
    root: NodeId,
}

impl ParseTree {
    /// Rebuilds a tree from `(pos, parse_bit)` pairs, one per token.
    ///
    /// Returns `Ok(None)` when the sentence carries no parse (every bit is
    /// `-` or a bare `*`). Errors carry the offending token index.
    pub fn from_bits<'a, I>(bits: I) -> std::result::Result<Option<ParseTree>, (usize, String)>
    where
        I: IntoIterator<Item = (&'a str, &'a str)>,
    {
        let bits: Vec<(&str, &str)> = bits.into_iter().collect();
        if bits.iter().all(|(_, b)| *b == "-" || *b == "*" || *b == "_") {
            return Ok(None);
        }
        let mut nodes: Vec<Node> = Vec::new();
        let mut stack: Vec<NodeId> = Vec::new();
        let mut top_level: Vec<NodeId> = Vec::new();

        for (i, (pos, bit)) in bits.iter().enumerate() {
            let star = bit
                .find('*')
                .ok_or_else(|| (i, format!("parse bit {bit:?} has no '*'")))?;
            let (prefix, suffix) = (&bit[..star], &bit[star + 1..]);
            for label in prefix.split('(') {
                if label.is_empty() {
                    continue;
                }
                if label.contains(')') {
                    return Err((i, format!("unexpected ')' before '*' in {bit:?}")));
                }
                let id = nodes.len();
                let parent = stack.last().copied();
                nodes.push(Node {
                    label: label.to_string(),
                    children: Vec::new(),
                    parent,
                    start: i,
                    end: i,
                    token: None,
                });
                match parent {
                    Some(p) => nodes[p].children.push(id),
                    None => top_level.push(id),
                }
                stack.push(id);
            }
            let leaf = nodes.len();
            let parent = stack.last().copied();
            nodes.push(Node {
                label: pos.to_string(),
                children: Vec::new(),
                parent,
                start: i,
                end: i,
                token: Some(i),
            });
            match parent {
                Some(p) => nodes[p].children.push(leaf),
                None => top_level.push(leaf),
            }
            for c in suffix.chars() {
                if c != ')' {
                    return Err((i, format!("unexpected {c:?} after '*' in {bit:?}")));
                }
                let id = stack
                    .pop()
                    .ok_or_else(|| (i, format!("unbalanced ')' in {bit:?}")))?;
                nodes[id].end = i;
            }
        }
        if let Some(&open) = stack.last() {
            return Err((
                bits.len().saturating_sub(1),
                format!("constituent {:?} is never closed", nodes[open].label),
            ));
        }

        let root = if top_level.len() == 1 {
            top_level[0]
        } else {
            let id = nodes.len();
            for &t in &top_level {
                nodes[t].parent = Some(id);
            }
            nodes.push(Node {
                label: "TOP".to_string(),
                children: top_level,
                parent: None,
                start: 0,
                end: bits.len().saturating_sub(1),
                token: None,
            });
            id
        };
        Ok(Some(ParseTree { nodes, root }))
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id]
    }

    pub fn nodes(&self) -> impl Iterator<Item = (NodeId, &Node)> {
        self.nodes.iter().enumerate()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Preterminal node of a token.
    pub fn leaf(&self, token: usize) -> Option<NodeId> {
        self.nodes.iter().position(|n| n.token == Some(token))
    }

    pub fn depth(&self, mut id: NodeId) -> usize {
        let mut d = 0;
        while let Some(p) = self.nodes[id].parent {
            d += 1;
            id = p;
        }
        d
    }

    /// Topmost node covering exactly `start..=end`.
    pub fn node_for_span(&self, start: usize, end: usize) -> Option<NodeId> {
        self.nodes
            .iter()
            .enumerate()
            .filter(|(_, n)| n.start == start && n.end == end)
            .min_by_key(|(id, _)| self.depth(*id))
            .map(|(id, _)| id)
    }

    /// Nodes in pre-order (parents before children, left to right).
    pub fn preorder(&self) -> Vec<NodeId> {
        let mut out = Vec::with_capacity(self.nodes.len());
        let mut stack = vec![self.root];
        while let Some(id) = stack.pop() {
            out.push(id);
            for &c in self.nodes[id].children.iter().rev() {
                stack.push(c);
            }
        }
        out
    }

    /// Renders the tree as a bracketed string, for debugging and tests.
    pub fn to_bracketed(&self, forms: &[&str]) -> String {
        fn go(t: &ParseTree, id: NodeId, forms: &[&str], out: &mut String) {
            let n = t.node(id);
            out.push('(');
            out.push_str(&n.label);
            if let Some(tok) = n.token {
                out.push(' ');
                out.push_str(forms.get(tok).copied().unwrap_or("?"));
            }
            for &c in &n.children {
                out.push(' ');
                go(t, c, forms, out);
            }
            out.push(')');
        }
        let mut out = String::new();
        go(self, self.root, forms, &mut out);
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LabelCategory {
    NounPhrase,
    PrepPhrase,
    RelativeClause,
    Clause,
    Coordination,
    Other,
}

impl LabelCategory {
    fn parse(s: &str) -> Option<LabelCategory> {
        Some(match s {
            "np" => LabelCategory::NounPhrase,
            "pp" => LabelCategory::PrepPhrase,
            "rel" => LabelCategory::RelativeClause,
            "clause" => LabelCategory::Clause,
            "coord" => LabelCategory::Coordination,
            "other" => LabelCategory::Other,
            _ => return None,
        })
    }
}

/// Maps raw constituent labels of a treebank onto the categories used by
/// mention detection and error analysis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelMap {
    map: HashMap<String, LabelCategory>,
}

pub const DEFAULT_LABELS: &str = include_str!("../data/labels.txt");

impl Default for LabelMap {
    fn default() -> Self {
        LabelMap::parse(DEFAULT_LABELS).expect("shipped label map is valid")
    }
}

impl LabelMap {
    pub fn parse(text: &str) -> Result<LabelMap> {
        let mut map = HashMap::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut parts = line.split_whitespace();
            let (Some(label), Some(cat), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(Error::Config(format!(
                    "label map line {}: expected '<label> <category>'",
                    lineno + 1
                )));
            };
            let cat = LabelCategory::parse(&cat.to_ascii_lowercase()).ok_or_else(|| {
                Error::Config(format!("label map line {}: unknown category {cat:?}", lineno + 1))
            })?;
            map.insert(label.to_ascii_lowercase(), cat);
        }
        Ok(LabelMap { map })
    }

    pub fn category(&self, label: &str) -> LabelCategory {
        self.map
            .get(&base_label(label))
            .copied()
            .unwrap_or(LabelCategory::Other)
    }
}

/// Label with function tags and indices stripped, lowercased.
pub fn base_label(label: &str) -> String {
    let trimmed = if label.starts_with('-') {
        label
    } else {
        label.split(['-', '=']).next().unwrap_or(label)
    };
    trimmed.to_ascii_lowercase()
}

/// Function tags attached to a label (`NP-SBJ-1` → `["SBJ", "1"]`).
pub fn function_tags(label: &str) -> Vec<&str> {
    if label.starts_with('-') {
        return Vec::new();
    }
    label.split(['-', '=']).skip(1).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tree(bits: &[(&str, &str)]) -> ParseTree {
        ParseTree::from_bits(bits.iter().copied()).unwrap().unwrap()
    }

    #[test]
    fn rebuilds_brackets() {
        let t = tree(&[
            ("DET", "(TOP(S(NP*"),
            ("NOUN", "*)"),
            ("VERB", "(VP*"),
            ("PUNCT", "*)))"),
        ]);
        assert_eq!(
            t.to_bracketed(&["de", "man", "lacht", "."]),
            "(TOP (S (NP (DET de) (NOUN man)) (VP (VERB lacht) (PUNCT .))))"
        );
        let np = t.node_for_span(0, 1).unwrap();
        assert_eq!(t.node(np).label, "NP");
    }

    #[test]
    fn no_parse_and_errors() {
        assert!(ParseTree::from_bits([("N", "-"), ("N", "-")]).unwrap().is_none());
        assert!(ParseTree::from_bits([("N", "(S*"), ("N", "*")]).is_err());
        assert!(ParseTree::from_bits([("N", "(S*))")]).is_err());
        assert!(ParseTree::from_bits([("N", "(S")]).is_err());
    }

    #[test]
    fn multiple_roots_get_synthetic_top() {
        let t = tree(&[("N", "(NP*)"), ("N", "(NP*)")]);
        assert_eq!(t.node(t.root()).label, "TOP");
        assert_eq!(t.node(t.root()).children.len(), 2);
    }

    #[test]
    fn label_map() {
        let m = LabelMap::default();
        assert_eq!(m.category("NP-SBJ-1"), LabelCategory::NounPhrase);
        assert_eq!(m.category("np"), LabelCategory::NounPhrase);
        assert_eq!(m.category("rel"), LabelCategory::RelativeClause);
        assert_eq!(m.category("SBAR"), LabelCategory::RelativeClause);
        assert_eq!(m.category("-NONE-"), LabelCategory::Other);
        assert_eq!(function_tags("NP-SBJ"), vec!["SBJ"]);
        assert!(LabelMap::parse("np bogus").is_err());
    }
}
