//! Corpus sweeps: a config names graphs and checks, and the report has one
//! row per (graph, check) in config order.
//!
//! Everything except `millis` is a function of the config alone. CSV
//! columns are fixed: `graph,n,m,check,pass,measured,bound,detail,millis`.

use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::construct::{
    certify, chordal_partition, main_partition, wcol_order, wcol_partition, BaseStrategy, CertKind, ConstructOptions,
    PartitionCertificate,
};
use crate::decomp::{exact_treedepth_with, exact_treewidth_with};
use crate::error::Result;
use crate::generators::{family, random_graph, random_tree, random_treedepth_graph, rng, u_graph, Family};
use crate::graph::Graph;
use crate::minors::{find_model_with, JoinPattern, SearchConfig};
use crate::partitions::{bounded_set_partitions, random_bounded_partition, uhd_clique_witness, HPartition};

/// Graph sources. Random sources draw one seed per graph from the config
/// seed, in config order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GraphSpec {
    Family {
        family: Family,
        params: Vec<usize>,
    },
    RandomGraph {
        n: usize,
        p: f64,
        count: usize,
    },
    RandomTree {
        n: usize,
        count: usize,
    },
    /// Random graphs of treedepth at most `h`.
    Treedepth {
        n: usize,
        h: usize,
        p: f64,
        count: usize,
    },
    UGraph {
        h: usize,
        d: usize,
    },
    Graph {
        graph: Graph,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckSpec {
    /// Exact treewidth, with the decomposition validated.
    Treewidth,
    /// Exact treedepth.
    Treedepth,
    /// `K_k ⊕ U_{h,d}` is not a minor.
    MinorFree { h: usize, d: usize, k: usize },
    /// Ordered partition, certificate and weak coloring bound at radius `r`.
    WcolBound { h: usize, d: usize, r: usize },
    /// Inductive partition with `k = 0` and `t = tw + 1`, certified.
    MainPartition { h: usize, d: usize, strategy: BaseStrategy },
    /// Chordal partition, certified.
    Chordal { t: usize },
    /// `U_{h,d}`-partitions of width at most `d` yield a `K_h` in the
    /// quotient: all of them when `samples` is absent, otherwise seeded
    /// samples. Rows for other graphs are marked not applicable.
    UhdWitness { h: usize, d: usize, samples: Option<usize> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub graphs: Vec<GraphSpec>,
    #[serde(default)]
    pub checks: Vec<CheckSpec>,
    #[serde(default)]
    pub parallel: bool,
    #[serde(default)]
    pub search: SearchConfig,
    #[serde(default = "default_exact_n")]
    pub exact_n: usize,
}

fn default_exact_n() -> usize {
    crate::decomp::DEFAULT_EXACT_BUDGET
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepRow {
    pub graph: String,
    pub n: usize,
    pub m: usize,
    pub check: String,
    pub pass: bool,
    pub measured: Option<u64>,
    pub bound: Option<u64>,
    pub detail: String,
    pub millis: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepReport {
    pub seed: u64,
    pub version: String,
    pub node_budget: u64,
    pub exact_n: usize,
    pub rows: Vec<SweepRow>,
}

impl SweepReport {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("graph,n,m,check,pass,measured,bound,detail,millis\n");
        let opt = |x: Option<u64>| x.map(|v| v.to_string()).unwrap_or_default();
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{}\n",
                csv_field(&r.graph),
                r.n,
                r.m,
                csv_field(&r.check),
                r.pass,
                opt(r.measured),
                opt(r.bound),
                csv_field(&r.detail),
                r.millis
            ));
        }
        out
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Expands the graph specs into labelled graphs.
pub fn corpus(cfg: &SweepConfig) -> Result<Vec<(String, Graph)>> {
    let mut seeds = rng(cfg.seed);
    let mut out = Vec::new();
    for spec in &cfg.graphs {
        match spec {
            GraphSpec::Family { family: f, params } => {
                let label = format!(
                    "{f}({})",
                    params.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(",")
                );
                out.push((label, family(*f, params)?));
            }
            GraphSpec::RandomGraph { n, p, count } => {
                for i in 0..*count {
                    let s: u64 = seeds.gen();
                    out.push((format!("random_graph(n={n},p={p},#{i})"), random_graph(*n, *p, s)?));
                }
            }
            GraphSpec::RandomTree { n, count } => {
                for i in 0..*count {
                    let s: u64 = seeds.gen();
                    out.push((format!("random_tree(n={n},#{i})"), random_tree(*n, s)?));
                }
            }
            GraphSpec::Treedepth { n, h, p, count } => {
                for i in 0..*count {
                    let s: u64 = seeds.gen();
                    out.push((
                        format!("treedepth(n={n},h={h},p={p},#{i})"),
                        random_treedepth_graph(*n, *h, *p, s)?,
                    ));
                }
            }
            GraphSpec::UGraph { h, d } => out.push((format!("u_graph({h},{d})"), u_graph(*h, *d)?)),
            GraphSpec::Graph { graph } => out.push((format!("graph#{}", out.len()), graph.clone())),
        }
    }
    Ok(out)
}

/// Runs the sweep. Row order is config order whether or not rows run in
/// parallel.
pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepReport> {
    let graphs = corpus(cfg)?;
    let jobs: Vec<(usize, usize)> = (0..graphs.len())
        .flat_map(|g| (0..cfg.checks.len()).map(move |c| (g, c)))
        .collect();
    let run = |&(gi, ci): &(usize, usize)| {
        let (label, g) = &graphs[gi];
        let check = &cfg.checks[ci];
        let start = Instant::now();
        let seed = cfg.seed ^ ((gi as u64) << 32) ^ ci as u64;
        let (pass, measured, bound, detail) = match run_check(cfg, g, check, seed) {
            Ok(v) => v,
            Err(e) => (false, None, None, e.to_string()),
        };
        SweepRow {
            graph: label.clone(),
            n: g.n(),
            m: g.edge_count(),
            check: check_label(check),
            pass,
            measured,
            bound,
            detail,
            millis: start.elapsed().as_millis() as u64,
        }
    };
    let rows = if cfg.parallel {
        jobs.par_iter().map(run).collect()
    } else {
        jobs.iter().map(run).collect()
    };
    Ok(SweepReport {
        seed: cfg.seed,
        version: env!("CARGO_PKG_VERSION").to_string(),
        node_budget: cfg.search.node_budget,
        exact_n: cfg.exact_n,
        rows,
    })
}

fn check_label(c: &CheckSpec) -> String {
    match c {
        CheckSpec::Treewidth => "treewidth".into(),
        CheckSpec::Treedepth => "treedepth".into(),
        CheckSpec::MinorFree { h, d, k } => format!("minor_free(h={h},d={d},k={k})"),
        CheckSpec::WcolBound { h, d, r } => format!("wcol_bound(h={h},d={d},r={r})"),
        CheckSpec::MainPartition { h, d, strategy } => format!("main_partition(h={h},d={d},{})", strategy.name()),
        CheckSpec::Chordal { t } => format!("chordal(t={t})"),
        CheckSpec::UhdWitness { h, d, samples } => match samples {
            Some(s) => format!("uhd_witness(h={h},d={d},samples={s})"),
            None => format!("uhd_witness(h={h},d={d},exhaustive)"),
        },
    }
}

type Outcome = (bool, Option<u64>, Option<u64>, String);

fn failed_checks(rep: &crate::construct::CertReport) -> String {
    rep.checks
        .iter()
        .filter(|c| !c.pass)
        .map(|c| format!("{}: {}", c.name, c.detail))
        .collect::<Vec<_>>()
        .join("; ")
}

fn run_check(cfg: &SweepConfig, g: &Graph, check: &CheckSpec, seed: u64) -> Result<Outcome> {
    let opts = ConstructOptions {
        search: cfg.search,
        exact_n: cfg.exact_n,
        ..Default::default()
    };
    let tw = || -> Result<i64> { Ok(exact_treewidth_with(g, cfg.exact_n)?.0) };
    Ok(match *check {
        CheckSpec::Treewidth => {
            let (w, td) = exact_treewidth_with(g, cfg.exact_n)?;
            let ok = td.validate(g).is_ok() && td.width() == w;
            (ok, Some(w.max(0) as u64), None, String::new())
        }
        CheckSpec::Treedepth => {
            let (depth, forest) = exact_treedepth_with(g, cfg.exact_n)?;
            let ok = g.is_subgraph_of(&Graph::closure_of_rooted_forest(&forest)?) && forest.vertex_height() == depth;
            (ok, Some(depth as u64), None, String::new())
        }
        CheckSpec::MinorFree { h, d, k } => {
            let pattern = JoinPattern::new(k, u_graph(h, d)?).graph()?;
            let found = find_model_with(g, &pattern, &cfg.search)?;
            (
                found.is_none(),
                None,
                None,
                if found.is_some() {
                    "model found".into()
                } else {
                    String::new()
                },
            )
        }
        CheckSpec::WcolBound { h, d, r } => {
            let wp = wcol_partition(h, d, 0, g, &[], &opts)?;
            let cert = PartitionCertificate {
                kind: CertKind::Wcol { h, d, k: 0, t: wp.t },
                graph: g.clone(),
                roots: Vec::new(),
                partition: wp.partition.clone(),
            };
            let rep = certify(&cert);
            let order = wcol_order(g, &wp.partition, h, d, wp.t, r)?;
            let bound = u64::try_from(order.bound).unwrap_or(u64::MAX);
            (
                rep.ok() && order.holds,
                Some(order.measured as u64),
                Some(bound),
                failed_checks(&rep),
            )
        }
        CheckSpec::MainPartition { h, d, strategy } => {
            let t = (tw()? + 1).max(1) as usize;
            let opts = ConstructOptions { strategy, ..opts };
            let mp = main_partition(h, d, 0, t, g, &[], &opts)?;
            let cert = PartitionCertificate {
                kind: CertKind::Main {
                    h,
                    d,
                    k: 0,
                    t,
                    strategy,
                },
                graph: g.clone(),
                roots: Vec::new(),
                partition: mp.partition.clone(),
            };
            let rep = certify(&cert);
            (rep.ok(), Some(mp.partition.width() as u64), None, failed_checks(&rep))
        }
        CheckSpec::Chordal { t } => {
            let hp = chordal_partition(g, t)?;
            let rep = certify(&PartitionCertificate {
                kind: CertKind::Chordal { t },
                graph: g.clone(),
                roots: Vec::new(),
                partition: hp,
            });
            (rep.ok(), None, None, failed_checks(&rep))
        }
        CheckSpec::UhdWitness { h, d, samples } => {
            let u = u_graph(h, d)?;
            if u != *g {
                return Ok((true, None, None, "not applicable: the graph is not u_graph(h,d)".into()));
            }
            let parts_list = match samples {
                None => bounded_set_partitions(u.n(), d)?,
                Some(s) => (0..s as u64)
                    .map(|i| random_bounded_partition(u.n(), d, seed.wrapping_add(i)))
                    .collect::<Result<_>>()?,
            };
            let total = parts_list.len();
            let mut good = 0;
            for parts in parts_list {
                let hp = HPartition::quotient_of(&u, parts)?;
                if let Ok(clique) = uhd_clique_witness(h, d, &hp) {
                    let tw_h = exact_treewidth_with(&hp.h, cfg.exact_n.max(hp.h.n()))
                        .map(|x| x.0)
                        .unwrap_or(i64::MAX);
                    if clique.len() == h && tw_h >= h as i64 - 1 {
                        good += 1;
                    }
                }
            }
            (good == total, Some(good as u64), Some(total as u64), String::new())
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_corpus_gives_an_empty_report() {
        let cfg: SweepConfig = serde_json::from_str("{}").unwrap();
        let rep = run_sweep(&cfg).unwrap();
        assert!(rep.rows.is_empty() && rep.all_pass());
        assert_eq!(rep.to_csv().lines().count(), 1);
    }

    #[test]
    fn rows_follow_config_order_in_parallel() {
        let cfg = SweepConfig {
            seed: 3,
            graphs: vec![
                GraphSpec::Family {
                    family: Family::Star,
                    params: vec![4],
                },
                GraphSpec::RandomTree { n: 7, count: 3 },
            ],
            checks: vec![CheckSpec::Treewidth, CheckSpec::WcolBound { h: 3, d: 2, r: 2 }],
            parallel: false,
            search: SearchConfig::default(),
            exact_n: 18,
        };
        let seq = run_sweep(&cfg).unwrap();
        let par = run_sweep(&SweepConfig { parallel: true, ..cfg }).unwrap();
        let strip = |r: &SweepReport| {
            r.rows
                .iter()
                .map(|x| (x.graph.clone(), x.check.clone(), x.pass, x.measured))
                .collect::<Vec<_>>()
        };
        assert_eq!(strip(&seq), strip(&par));
        assert_eq!(seq.rows.len(), 8);
        assert_eq!(seq.rows[0].graph, "star(4)");
        assert_eq!(seq.rows[1].check, "wcol_bound(h=3,d=2,r=2)");
    }

    #[test]
    fn exhaustive_uhd_sweep_succeeds() {
        let cfg = SweepConfig {
            seed: 0,
            graphs: vec![GraphSpec::UGraph { h: 2, d: 2 }],
            checks: vec![CheckSpec::UhdWitness {
                h: 2,
                d: 2,
                samples: None,
            }],
            parallel: false,
            search: SearchConfig::default(),
            exact_n: 18,
        };
        let rep = run_sweep(&cfg).unwrap();
        assert!(rep.all_pass(), "{:?}", rep.rows);
        assert_eq!(rep.rows[0].bound, Some(76));
    }
}
