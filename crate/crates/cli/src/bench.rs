use std::fs;
use std::path::Path;

use anyhow::{bail, Context};
use rayon::prelude::*;
use serde::Serialize;

use house_elicit::{competitive_ratio, Algorithm, Error, PreferenceProfile};

use crate::format::{self, Instance, TraceFile};
use crate::run::{generate, optimum, run_instance, show_ratio, verify_trace};
use crate::{usage, AlgArg, BenchArgs, FamilyArg, Failure};

/// One CSV/JSON row. Column order is fixed by field order.
#[derive(Clone, Debug, Serialize)]
pub struct BenchRow {
    pub instance_id: String,
    pub family: String,
    pub n: usize,
    pub model: String,
    pub criterion: String,
    pub algorithm: String,
    pub queries: usize,
    pub opt_queries: Option<usize>,
    pub ratio: Option<String>,
    pub ratio_decimal: Option<String>,
    pub certified: bool,
    pub seed: u64,
}

fn instances(a: &BenchArgs) -> anyhow::Result<Vec<(String, Instance, u64)>> {
    let seeds = a.seed..a.seed + a.count;
    let mut out = Vec::new();
    match a.family {
        FamilyArg::BlockCycle => {
            let ks = a.k.clone().ok_or_else(|| usage("block-cycle bench needs --k"))?.0;
            for k in ks {
                out.push((format!("block-cycle-k{k:02}"), generate(a.family, None, Some(k), None, 0)?, 0));
            }
        }
        FamilyArg::Random | FamilyArg::SpecialHouse => {
            let ns = a.n.clone().ok_or_else(|| usage("this family needs --n"))?.0;
            for n in ns {
                for s in seeds.clone() {
                    let id = format!("{}-n{n:02}-s{s:04}", a.family.name());
                    out.push((id, generate(a.family, Some(n), None, None, s)?, s));
                }
            }
        }
    }
    Ok(out)
}

fn algorithms(a: &BenchArgs) -> Vec<Algorithm> {
    let mut algs = if a.alg.is_empty() {
        vec![AlgArg::PoSetcompare, AlgArg::PoSetcompareK, AlgArg::PoHybrid, AlgArg::RmNextbest, AlgArg::RmHybrid]
    } else {
        a.alg.clone()
    };
    algs.sort();
    algs.dedup();
    algs.into_iter().map(|x| x.resolve(a.opts.set_size)).collect()
}

fn supported(family: FamilyArg, alg: Algorithm) -> bool {
    !(family == FamilyArg::SpecialHouse && alg.model() == house_elicit::Model::SetCompare)
}

fn cell(a: &BenchArgs, id: &str, inst: &Instance, seed: u64, alg: Algorithm, traces: &Path) -> anyhow::Result<BenchRow> {
    let trace = run_instance(inst, alg, &a.opts)?;
    let answered = PreferenceProfile::new(trace.profile.clone())?;
    let opt = if a.no_opt || alg.model() == house_elicit::Model::SetCompare {
        None
    } else {
        match optimum(&answered, alg.model(), alg.criterion(), a.opts.state_limit) {
            Ok(r) => Some(r),
            Err(e) if matches!(e.downcast_ref::<Error>(), Some(Error::BoundExceeded { .. })) => None,
            Err(e) => return Err(e),
        }
    };
    let (ratio, ratio_decimal) = match &opt {
        Some(o) => match competitive_ratio(trace.queries, o) {
            Ok(r) => {
                let (x, d) = show_ratio(r);
                (Some(x), Some(d))
            }
            Err(_) => (None, None),
        },
        None => (None, None),
    };
    // certify from disk
    let path = traces.join(format!("{id}__{}.json", alg.name()));
    format::write_json(&trace, Some(&path))?;
    let back: TraceFile = format::read_json(&path)?;
    let certified = back == trace && verify_trace(&back, false)?.certified;
    Ok(BenchRow {
        instance_id: id.to_string(),
        family: inst.family.clone(),
        n: inst.n,
        model: trace.model.clone(),
        criterion: trace.criterion.clone(),
        algorithm: trace.algorithm.clone(),
        queries: trace.queries,
        opt_queries: opt.as_ref().map(|o| o.queries),
        ratio: ratio_decimal.as_ref().and(ratio),
        ratio_decimal,
        certified,
        seed,
    })
}

pub fn bench(a: &BenchArgs) -> anyhow::Result<()> {
    let insts = instances(a)?;
    let algs = algorithms(a);
    let traces = a.out.join("traces");
    fs::create_dir_all(&traces).with_context(|| format!("creating {}", traces.display()))?;
    let cells: Vec<_> = insts
        .iter()
        .flat_map(|(id, inst, seed)| algs.iter().map(move |&alg| (id, inst, *seed, alg)))
        .filter(|(_, _, _, alg)| supported(a.family, *alg))
        .collect();
    if cells.is_empty() {
        bail!(usage("no algorithm applies to this family"));
    }
    let mut rows = cells
        .par_iter()
        .map(|(id, inst, seed, alg)| cell(a, id, inst, *seed, *alg, &traces))
        .collect::<anyhow::Result<Vec<_>>>()?;
    rows.sort_by(|x, y| (&x.instance_id, &x.algorithm).cmp(&(&y.instance_id, &y.algorithm)));

    let mut w = csv::Writer::from_path(a.out.join("bench.csv"))?;
    for r in &rows {
        w.serialize(r)?;
    }
    w.flush()?;
    format::write_json(&rows, Some(&a.out.join("bench.json")))?;

    for r in &rows {
        println!(
            "{:<26} {:<16} q={:<5} opt={:<5} ratio={:<9} {:<10} {}",
            r.instance_id,
            r.algorithm,
            r.queries,
            r.opt_queries.map_or("-".into(), |o| o.to_string()),
            r.ratio.clone().unwrap_or_else(|| "-".into()),
            r.ratio_decimal.clone().unwrap_or_default(),
            if r.certified { "certified" } else { "NOT CERTIFIED" }
        );
    }
    let bad = rows.iter().filter(|r| !r.certified).count();
    if bad > 0 {
        bail!(Failure::Certification(format!("{bad} of {} rows", rows.len())));
    }
    Ok(())
}
