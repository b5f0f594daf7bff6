//! Basic graph pattern evaluation by hash join.
//!
//! Terms are interned once per evaluation so joins compare integers. The
//! default planner starts from the pattern with the fewest candidates and
//! keeps picking the smallest pattern connected to what is already bound.

use std::collections::HashMap;

use super::{display_term, GraphTerm, PatternTerm, Query};
use crate::model::{Dataset, Iri, Literal, PrefixMap, Term};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BindingTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Term>>,
}

impl BindingTable {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Header of `?var` names, then one line per row with compact terms.
    pub fn to_tsv(&self, prefixes: &PrefixMap) -> String {
        let mut out = self
            .columns
            .iter()
            .map(|c| format!("?{c}"))
            .collect::<Vec<_>>()
            .join("\t");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|t| display_term(t, prefixes)).collect();
            out.push_str(&cells.join("\t"));
            out.push('\n');
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum TermRef<'a> {
    I(&'a Iri),
    L(&'a Literal),
}

impl TermRef<'_> {
    fn to_term(self) -> Term {
        match self {
            TermRef::I(i) => Term::Iri(i.clone()),
            TermRef::L(l) => Term::Literal(l.clone()),
        }
    }
}

impl<'a> From<&'a Term> for TermRef<'a> {
    fn from(t: &'a Term) -> Self {
        match t {
            Term::Iri(i) => TermRef::I(i),
            Term::Literal(l) => TermRef::L(l),
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum Slot {
    Const(u32),
    /// A constant that occurs nowhere in the data.
    Absent,
    Var(usize),
}

struct Candidates {
    vars: Vec<usize>,
    rows: Vec<Vec<u32>>,
}

struct Interner<'a> {
    ids: HashMap<TermRef<'a>, u32>,
    terms: Vec<TermRef<'a>>,
}

impl<'a> Interner<'a> {
    fn intern(&mut self, t: TermRef<'a>) -> u32 {
        let next = self.terms.len() as u32;
        *self.ids.entry(t).or_insert_with(|| {
            self.terms.push(t);
            next
        })
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Plan {
    Greedy,
    AsWritten,
}

/// Evaluates with the greedy join order.
pub fn evaluate(q: &Query, d: &Dataset) -> BindingTable {
    run(q, d, Plan::Greedy)
}

/// Evaluates joining patterns strictly in the order they are written.
pub fn evaluate_in_order(q: &Query, d: &Dataset) -> BindingTable {
    run(q, d, Plan::AsWritten)
}

fn run(q: &Query, d: &Dataset, plan: Plan) -> BindingTable {
    let mut interner = Interner {
        ids: HashMap::new(),
        terms: Vec::new(),
    };
    let encoded: Vec<[u32; 4]> = d
        .iter()
        .map(|quad| {
            [
                interner.intern(TermRef::I(&quad.subject)),
                interner.intern(TermRef::I(&quad.predicate)),
                interner.intern(TermRef::from(&quad.object)),
                interner.intern(TermRef::I(&quad.graph)),
            ]
        })
        .collect();

    let mut var_names: Vec<&str> = Vec::new();
    let mut patterns: Vec<[Slot; 4]> = Vec::new();
    let constant = |t: TermRef<'_>| match interner.ids.get(&t) {
        Some(id) => Slot::Const(*id),
        None => Slot::Absent,
    };
    for block in &q.blocks {
        let g = match &block.graph {
            GraphTerm::Var(v) => Slot::Var(var_slot(v, &mut var_names)),
            GraphTerm::Iri(i) => constant(TermRef::I(i)),
        };
        for tp in &block.patterns {
            let mut slots = [g; 4];
            for (k, t) in [&tp.s, &tp.p, &tp.o].into_iter().enumerate() {
                slots[k] = match t {
                    PatternTerm::Var(v) => Slot::Var(var_slot(v, &mut var_names)),
                    PatternTerm::Iri(i) => constant(TermRef::I(i)),
                    PatternTerm::Literal(l) => constant(TermRef::L(l)),
                };
            }
            patterns.push(slots);
        }
    }

    let candidates: Vec<Candidates> = patterns.iter().map(|p| scan(p, &encoded)).collect();
    let order = match plan {
        Plan::AsWritten => (0..candidates.len()).collect(),
        Plan::Greedy => greedy_order(&candidates),
    };

    let mut bound: Vec<usize> = Vec::new();
    let mut rows: Vec<Vec<u32>> = vec![Vec::new()];
    for idx in order {
        if rows.is_empty() {
            break;
        }
        let c = &candidates[idx];
        (bound, rows) = join(&bound, &rows, c);
    }

    let project: Vec<usize> = q
        .select_vars
        .iter()
        .map(|v| {
            let global = var_names.iter().position(|n| n == v).expect("parser checks selected vars");
            bound.iter().position(|b| *b == global).unwrap_or(usize::MAX)
        })
        .collect();
    let mut out: Vec<(Vec<String>, Vec<Term>)> = Vec::with_capacity(rows.len());
    if project.iter().all(|p| *p != usize::MAX) {
        for row in &rows {
            let terms: Vec<Term> = project.iter().map(|p| interner.terms[row[*p] as usize].to_term()).collect();
            let keys = terms.iter().map(Term::to_string).collect();
            out.push((keys, terms));
        }
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    if q.distinct {
        out.dedup_by(|a, b| a.0 == b.0);
    }
    BindingTable {
        columns: q.select_vars.clone(),
        rows: out.into_iter().map(|(_, t)| t).collect(),
    }
}

fn var_slot<'q>(name: &'q str, var_names: &mut Vec<&'q str>) -> usize {
    match var_names.iter().position(|v| *v == name) {
        Some(i) => i,
        None => {
            var_names.push(name);
            var_names.len() - 1
        }
    }
}

fn scan(pattern: &[Slot; 4], quads: &[[u32; 4]]) -> Candidates {
    if pattern.iter().any(|s| matches!(s, Slot::Absent)) {
        return Candidates {
            vars: Vec::new(),
            rows: Vec::new(),
        };
    }
    let mut vars: Vec<usize> = Vec::new();
    // For each position, the column it fills (or must agree with).
    let mut column: [Option<usize>; 4] = [None; 4];
    for (i, s) in pattern.iter().enumerate() {
        if let Slot::Var(v) = s {
            column[i] = Some(match vars.iter().position(|x| x == v) {
                Some(c) => c,
                None => {
                    vars.push(*v);
                    vars.len() - 1
                }
            });
        }
    }
    let mut rows = Vec::new();
    'quads: for quad in quads {
        let mut row = vec![u32::MAX; vars.len()];
        for i in 0..4 {
            match (pattern[i], column[i]) {
                (Slot::Const(c), _) if quad[i] != c => continue 'quads,
                (Slot::Var(_), Some(col)) => {
                    if row[col] == u32::MAX {
                        row[col] = quad[i];
                    } else if row[col] != quad[i] {
                        continue 'quads;
                    }
                }
                _ => {}
            }
        }
        rows.push(row);
        if vars.is_empty() {
            // A fully constant pattern holds or not; one row is enough.
            break;
        }
    }
    Candidates { vars, rows }
}

fn greedy_order(c: &[Candidates]) -> Vec<usize> {
    let mut remaining: Vec<usize> = (0..c.len()).collect();
    let mut bound: Vec<usize> = Vec::new();
    let mut order = Vec::with_capacity(c.len());
    while !remaining.is_empty() {
        let connected = |i: &usize| c[*i].vars.iter().any(|v| bound.contains(v));
        let pick = remaining
            .iter()
            .copied()
            .filter(|i| order.is_empty() || connected(i))
            .min_by_key(|i| (c[*i].rows.len(), *i))
            .or_else(|| remaining.iter().copied().min_by_key(|i| (c[*i].rows.len(), *i)))
            .expect("remaining is not empty");
        remaining.retain(|i| *i != pick);
        for v in &c[pick].vars {
            if !bound.contains(v) {
                bound.push(*v);
            }
        }
        order.push(pick);
    }
    order
}

fn join(bound: &[usize], rows: &[Vec<u32>], c: &Candidates) -> (Vec<usize>, Vec<Vec<u32>>) {
    let shared: Vec<(usize, usize)> = c
        .vars
        .iter()
        .enumerate()
        .filter_map(|(ci, v)| bound.iter().position(|b| b == v).map(|bi| (bi, ci)))
        .collect();
    let fresh: Vec<usize> = (0..c.vars.len())
        .filter(|ci| !shared.iter().any(|(_, s)| s == ci))
        .collect();
    let mut vars = bound.to_vec();
    vars.extend(fresh.iter().map(|ci| c.vars[*ci]));

    let mut table: HashMap<Vec<u32>, Vec<usize>> = HashMap::new();
    for (i, r) in c.rows.iter().enumerate() {
        let key = shared.iter().map(|(_, ci)| r[*ci]).collect();
        table.entry(key).or_default().push(i);
    }
    let mut out = Vec::new();
    for row in rows {
        let key: Vec<u32> = shared.iter().map(|(bi, _)| row[*bi]).collect();
        if let Some(matches) = table.get(&key) {
            for m in matches {
                let mut joined = row.clone();
                joined.extend(fresh.iter().map(|ci| c.rows[*m][*ci]));
                out.push(joined);
            }
        }
    }
    (vars, out)
}
