//! Random query instances over a tiny vocabulary and an exhaustive
//! assignment oracle for them. Shared with the acceptance suite.

#![allow(dead_code)]

pub mod collection;
pub mod exports;

use std::collections::BTreeSet;

use mythforge_core::query::BindingTable;
use mythforge_core::{Dataset, Iri, Literal, Quad, Term};
use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;

pub const NS: &str = "http://o.org/";
const ENTITIES: [&str; 3] = ["e0", "e1", "e2"];
const PREDICATES: [&str; 2] = ["p0", "p1"];
const GRAPHS: [&str; 2] = ["g0", "g1"];
const VARS: [&str; 3] = ["a", "b", "c"];
const GRAPH_VARS: [&str; 1] = ["g"];
const TOP: &str = "#top";

#[derive(Debug, Clone)]
pub enum Slot {
    Var(String),
    Const(usize),
}

#[derive(Debug, Clone)]
pub struct Block {
    /// `None` marks the top-level group.
    pub graph: Option<Slot>,
    pub patterns: Vec<[Slot; 3]>,
}

#[derive(Debug, Clone)]
pub struct Instance {
    pub universe: Vec<Term>,
    pub quads: Vec<[usize; 4]>,
    pub blocks: Vec<Block>,
    pub select: Vec<String>,
    pub distinct: bool,
}

fn iri(local: &str) -> Iri {
    Iri::new(format!("{NS}{local}")).unwrap()
}

fn universe() -> Vec<Term> {
    let mut u: Vec<Term> = ENTITIES.iter().chain(&PREDICATES).chain(&GRAPHS).map(|l| Term::Iri(iri(l))).collect();
    u.push(Term::Literal(Literal::string("x")));
    u.push(Term::Literal(Literal::lang("x", "en").unwrap()));
    u
}

fn idx(u: &[Term], local: &str) -> usize {
    u.iter().position(|t| *t == Term::Iri(iri(local))).unwrap()
}

fn slot(rng: &mut impl Rng, pool: &[usize]) -> Slot {
    if rng.random_bool(0.5) {
        Slot::Var(VARS.choose(rng).unwrap().to_string())
    } else {
        Slot::Const(*pool.choose(rng).unwrap())
    }
}

pub fn random_instance(rng: &mut impl Rng) -> Instance {
    let u = universe();
    let ents: Vec<usize> = ENTITIES.iter().map(|e| idx(&u, e)).collect();
    let preds: Vec<usize> = PREDICATES.iter().map(|e| idx(&u, e)).collect();
    let graphs: Vec<usize> = GRAPHS.iter().map(|e| idx(&u, e)).collect();
    let objects: Vec<usize> = ents.iter().copied().chain([u.len() - 2, u.len() - 1]).collect();

    let n_quads = rng.random_range(0..=30);
    let quads: Vec<[usize; 4]> = (0..n_quads)
        .map(|_| {
            [
                *ents.choose(rng).unwrap(),
                *preds.choose(rng).unwrap(),
                *objects.choose(rng).unwrap(),
                *graphs.choose(rng).unwrap(),
            ]
        })
        .collect();

    let n_patterns = rng.random_range(1..=4);
    let n_graph_blocks = rng.random_range(0..=2usize.min(n_patterns));
    let with_top = n_graph_blocks == 0 || rng.random_bool(0.4);
    let mut blocks: Vec<Block> = (0..n_graph_blocks)
        .map(|_| Block {
            graph: Some(if rng.random_bool(0.6) {
                Slot::Var(GRAPH_VARS[0].to_string())
            } else {
                Slot::Const(*graphs.choose(rng).unwrap())
            }),
            patterns: Vec::new(),
        })
        .collect();
    if with_top {
        blocks.push(Block {
            graph: None,
            patterns: Vec::new(),
        });
    }
    for k in 0..n_patterns {
        let b = if k < blocks.len() { k } else { rng.random_range(0..blocks.len()) };
        let pattern = [slot(rng, &ents), slot(rng, &preds), slot(rng, &objects)];
        blocks[b].patterns.push(pattern);
    }
    blocks.retain(|b| !b.patterns.is_empty());

    let mut used: Vec<String> = Vec::new();
    for b in &blocks {
        let slots = b.graph.iter().chain(b.patterns.iter().flatten());
        for s in slots {
            if let Slot::Var(v) = s {
                if !used.contains(v) {
                    used.push(v.clone());
                }
            }
        }
    }
    // Keep at least one variable so the query has something to select.
    if used.is_empty() {
        blocks[0].patterns[0][0] = Slot::Var("a".into());
        used.push("a".into());
    }
    used.shuffle(rng);
    let n_select = rng.random_range(1..=used.len());
    used.truncate(n_select);

    Instance {
        universe: u,
        quads,
        blocks,
        select: used,
        distinct: rng.random_bool(0.5),
    }
}

impl Instance {
    pub fn dataset(&self) -> Dataset {
        self.quads
            .iter()
            .map(|[s, p, o, g]| {
                let i = |k: usize| self.universe[k].as_iri().unwrap().clone();
                Quad::new(i(*s), i(*p), self.universe[*o].clone(), i(*g))
            })
            .collect()
    }

    fn render_slot(&self, s: &Slot) -> String {
        match s {
            Slot::Var(v) => format!("?{v}"),
            Slot::Const(k) => match &self.universe[*k] {
                Term::Iri(i) => format!("o:{}", &i.as_str()[NS.len()..]),
                t => t.to_string(),
            },
        }
    }

    pub fn query_text(&self) -> String {
        let mut out = format!("PREFIX o: <{NS}>\nSELECT ");
        if self.distinct {
            out.push_str("DISTINCT ");
        }
        for v in &self.select {
            out.push_str(&format!("?{v} "));
        }
        out.push_str("WHERE {\n");
        for b in &self.blocks {
            let body: Vec<String> = b
                .patterns
                .iter()
                .map(|p| p.iter().map(|s| self.render_slot(s)).collect::<Vec<_>>().join(" "))
                .collect();
            match &b.graph {
                Some(g) => out.push_str(&format!("  GRAPH {} {{ {} }}\n", self.render_slot(g), body.join(" . "))),
                None => out.push_str(&format!("  {} .\n", body.join(" . "))),
            }
        }
        out.push('}');
        out
    }

    /// Every assignment of every variable to every universe term, kept when
    /// all instantiated patterns are quads of the dataset.
    pub fn oracle(&self) -> Vec<Vec<String>> {
        let n = self.universe.len();
        let mut present = vec![false; n * n * n * n];
        for [s, p, o, g] in &self.quads {
            present[((s * n + p) * n + o) * n + g] = true;
        }
        let mut vars: Vec<String> = Vec::new();
        for b in &self.blocks {
            let g = match &b.graph {
                Some(s) => s.clone(),
                None => Slot::Var(TOP.into()),
            };
            for s in std::iter::once(&g).chain(b.patterns.iter().flatten()) {
                if let Slot::Var(v) = s {
                    if !vars.contains(v) {
                        vars.push(v.clone());
                    }
                }
            }
        }
        let mut assignment = vec![0usize; vars.len()];
        let value = |s: &Slot, a: &[usize]| match s {
            Slot::Var(v) => a[vars.iter().position(|x| x == v).unwrap()],
            Slot::Const(k) => *k,
        };
        let mut rows: Vec<Vec<String>> = Vec::new();
        loop {
            let ok = self.blocks.iter().all(|b| {
                let g = match &b.graph {
                    Some(s) => value(s, &assignment),
                    None => value(&Slot::Var(TOP.into()), &assignment),
                };
                b.patterns.iter().all(|[s, p, o]| {
                    let (s, p, o) = (value(s, &assignment), value(p, &assignment), value(o, &assignment));
                    present[((s * n + p) * n + o) * n + g]
                })
            });
            if ok {
                rows.push(
                    self.select
                        .iter()
                        .map(|v| self.universe[value(&Slot::Var(v.clone()), &assignment)].to_string())
                        .collect(),
                );
            }
            // Odometer increment.
            let mut k = 0;
            loop {
                if k == assignment.len() {
                    rows.sort();
                    if self.distinct {
                        rows = rows.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
                    }
                    return rows;
                }
                assignment[k] += 1;
                if assignment[k] < n {
                    break;
                }
                assignment[k] = 0;
                k += 1;
            }
        }
    }
}

pub fn table_rows(t: &BindingTable) -> Vec<Vec<String>> {
    let mut rows: Vec<Vec<String>> = t.rows.iter().map(|r| r.iter().map(Term::to_string).collect()).collect();
    rows.sort();
    rows
}
