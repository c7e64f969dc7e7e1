//! Brute-force reference implementations of the coreference metrics, written
//! directly from their definitions: explicit links, per-mention cluster
//! overlap, and exhaustive entity alignment.

#![allow(dead_code)]

use std::collections::HashSet;

use sievecoref::{EntitySet, Span};

pub type Partition = Vec<Vec<usize>>;

/// All set partitions of `0..n`, in restricted-growth-string order.
pub fn partitions(n: usize) -> Vec<Partition> {
    fn go(i: usize, n: usize, rgs: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if i == n {
            let blocks = rgs.iter().copied().max().map_or(0, |m| m + 1);
            let mut p = vec![Vec::new(); blocks];
            for (item, &b) in rgs.iter().enumerate() {
                p[b].push(item);
            }
            out.push(p);
            return;
        }
        let limit = rgs.iter().copied().max().map_or(0, |m| m + 1);
        for b in 0..=limit {
            rgs.push(b);
            go(i + 1, n, rgs, out);
            rgs.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, &mut Vec::new(), &mut out);
    out
}

pub fn span(i: usize) -> Span {
    Span::new(i / 10, i % 10, i % 10)
}

pub fn to_set(p: &[Vec<usize>]) -> EntitySet {
    EntitySet::from_spans(p.iter().map(|c| c.iter().map(|&i| span(i)).collect::<Vec<_>>()))
}

fn cluster_of(p: &[Vec<usize>], m: usize) -> Option<&Vec<usize>> {
    p.iter().find(|c| c.contains(&m))
}

fn same_cluster(p: &[Vec<usize>], a: usize, b: usize) -> bool {
    cluster_of(p, a).is_some_and(|c| c.contains(&b))
}

fn ratio(n: f64, d: f64) -> f64 {
    if d == 0.0 {
        0.0
    } else {
        n / d
    }
}

/// (recall, precision)
pub type RP = (f64, f64);

fn muc_recall(key: &[Vec<usize>], resp: &[Vec<usize>]) -> f64 {
    let mut num = 0.0;
    let mut den = 0.0;
    for k in key {
        // components of k when only links kept by the response remain
        let mut comp: Vec<usize> = (0..k.len()).collect();
        for i in 0..k.len() {
            for j in 0..k.len() {
                if i < j && same_cluster(resp, k[i], k[j]) {
                    let (ci, cj) = (comp[i], comp[j]);
                    for c in comp.iter_mut() {
                        if *c == cj {
                            *c = ci;
                        }
                    }
                }
            }
        }
        let parts = comp.iter().collect::<HashSet<_>>().len();
        num += (k.len() - parts) as f64;
        den += (k.len() - 1) as f64;
    }
    ratio(num, den)
}

pub fn muc(gold: &[Vec<usize>], sys: &[Vec<usize>]) -> RP {
    (muc_recall(gold, sys), muc_recall(sys, gold))
}

fn b3_recall(key: &[Vec<usize>], resp: &[Vec<usize>]) -> f64 {
    let mentions: Vec<usize> = key.iter().flatten().copied().collect();
    let mut total = 0.0;
    for &m in &mentions {
        let k = cluster_of(key, m).unwrap();
        let common = match cluster_of(resp, m) {
            Some(r) => k.iter().filter(|x| r.contains(x)).count(),
            None => 0,
        };
        total += common as f64 / k.len() as f64;
    }
    ratio(total, mentions.len() as f64)
}

pub fn b_cubed(gold: &[Vec<usize>], sys: &[Vec<usize>]) -> RP {
    (b3_recall(gold, sys), b3_recall(sys, gold))
}

fn phi4(a: &[usize], b: &[usize]) -> f64 {
    let common = a.iter().filter(|x| b.contains(x)).count();
    2.0 * common as f64 / (a.len() + b.len()) as f64
}

/// Best total similarity over every injective partial map from gold
/// entities to system entities.
fn best_alignment(gold: &[Vec<usize>], sys: &[Vec<usize>], i: usize, used: &mut Vec<bool>) -> f64 {
    if i == gold.len() {
        return 0.0;
    }
    let mut best = best_alignment(gold, sys, i + 1, used);
    for j in 0..sys.len() {
        if !used[j] {
            used[j] = true;
            best = best.max(phi4(&gold[i], &sys[j]) + best_alignment(gold, sys, i + 1, used));
            used[j] = false;
        }
    }
    best
}

pub fn ceaf_e(gold: &[Vec<usize>], sys: &[Vec<usize>]) -> RP {
    let total = best_alignment(gold, sys, 0, &mut vec![false; sys.len()]);
    (ratio(total, gold.len() as f64), ratio(total, sys.len() as f64))
}

fn lea_recall(key: &[Vec<usize>], resp: &[Vec<usize>]) -> f64 {
    let mut num = 0.0;
    let mut den = 0.0;
    for k in key {
        let (total, resolved) = if k.len() == 1 {
            let m = k[0];
            let kept = cluster_of(resp, m).is_some_and(|r| r.len() == 1);
            (1usize, usize::from(kept))
        } else {
            let mut total = 0;
            let mut resolved = 0;
            for i in 0..k.len() {
                for j in i + 1..k.len() {
                    total += 1;
                    if same_cluster(resp, k[i], k[j]) {
                        resolved += 1;
                    }
                }
            }
            (total, resolved)
        };
        num += k.len() as f64 * resolved as f64 / total as f64;
        den += k.len() as f64;
    }
    ratio(num, den)
}

pub fn lea(gold: &[Vec<usize>], sys: &[Vec<usize>]) -> RP {
    (lea_recall(gold, sys), lea_recall(sys, gold))
}
