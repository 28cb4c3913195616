use anyhow::{bail, Result};
use serde::Serialize;
use serde_json::{json, Value};

use suzuki_core::cohomology::{h1o_basis_fn, verify_cartier_table, Cohomology};
use suzuki_core::dieudonne::Analysis;
use suzuki_core::{known_results, rep_theory, Curve, Decomposition, EModule, SemilinearOp};

use crate::cache::Cache;
use crate::render::{csv_rows, table, Output};

pub struct Ctx {
    pub m: u32,
    pub cache: Cache,
    pub order: Option<i64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Operator {
    F,
    V,
    Tau,
    All,
}

impl Ctx {
    pub fn cohomology(&self) -> Result<Cohomology> {
        if self.m > 3 {
            bail!("m = {} is beyond the curve computations (m <= 3)", self.m);
        }
        Ok(Cohomology::new(self.m)?)
    }

    pub fn operator(&self, coh: &Cohomology, op: Operator) -> Result<SemilinearOp> {
        Ok(match op {
            Operator::F => self.cache.get_or_compute(coh, "F", || coh.frobenius_matrix())?.0,
            Operator::V => self.cache.get_or_compute(coh, "V", || coh.verschiebung_matrix())?.0,
            Operator::Tau => coh.tau_matrix(),
            Operator::All => bail!("a single operator is required"),
        })
    }

    pub fn module(&self, coh: &Cohomology) -> Result<EModule> {
        let field = coh.params().field.clone();
        let f = self.operator(coh, Operator::F)?;
        let v = self.operator(coh, Operator::V)?;
        Ok(EModule::new(field, f, v, Some(coh.tau_matrix()))?)
    }

    pub fn analysis(&self, trivial: bool) -> Result<Analysis> {
        let coh = self.cohomology()?;
        let module = self.module(&coh)?;
        if trivial {
            let t = module.tau_split()?.trivial;
            let mut d = t.decompose()?;
            d.m = Some(self.m);
            return Ok(Analysis {
                dim: t.dim(),
                a_number: t.a_number(),
                p_rank: t.p_rank(),
                decomposition: d,
            });
        }
        let mut a = module.analyze()?;
        a.decomposition.m = Some(self.m);
        Ok(a)
    }
}

fn tuple_str(t: [i64; 4]) -> String {
    format!("({},{},{},{})", t[0], t[1], t[2], t[3])
}

pub fn basis(ctx: &Ctx) -> Result<Output> {
    let coh = ctx.cohomology()?;
    let p = coh.params();
    #[derive(Serialize)]
    struct Row {
        index: usize,
        tuple: [i64; 4],
        pole_order: i64,
        h1o_function: String,
        differential: String,
    }
    let rows: Vec<Row> = coh
        .index
        .iter()
        .enumerate()
        .map(|(i, t)| {
            let f = h1o_basis_fn(t, p).expect("index set member");
            Row {
                index: i,
                tuple: [t.a, t.b as i64, t.c as i64, t.d as i64],
                pole_order: t.pole_order(p),
                h1o_function: f.to_string(),
                differential: format!("{t} dy"),
            }
        })
        .collect();
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.index.to_string(),
                tuple_str(r.tuple),
                r.pole_order.to_string(),
                r.h1o_function.clone(),
                r.differential.clone(),
            ]
        })
        .collect();
    let header = ["index", "tuple", "pole_order", "f_t", "g_t"];
    Ok(Output {
        json: json!({ "m": ctx.m, "genus": coh.genus(), "tuples": rows }),
        table: format!("m = {}, genus {}\n{}", ctx.m, coh.genus(), table(&header, &cells)),
        csv: csv_rows(&header, &cells),
    })
}

fn envelope(m: u32, name: &str, op: &SemilinearOp) -> Value {
    let entries: Vec<Vec<u32>> = (0..op.matrix.rows)
        .map(|i| op.matrix.row(i).iter().map(|x| x.bits()).collect())
        .collect();
    json!({ "m": m, "operator": name, "twist": op.twist, "dim": op.matrix.rows, "entries": entries })
}

fn images(name: &str, op: &SemilinearOp, labels: &[String]) -> String {
    let mut out = String::new();
    for (j, lab) in labels.iter().enumerate() {
        let terms: Vec<String> = (0..op.matrix.rows)
            .filter(|&i| !op.matrix.get(i, j).is_zero())
            .map(|i| {
                let c = op.matrix.get(i, j);
                if c.bits() == 1 {
                    labels[i].clone()
                } else {
                    format!("[{c}]{}", labels[i])
                }
            })
            .collect();
        let rhs = if terms.is_empty() { "0".to_string() } else { terms.join(" + ") };
        out.push_str(&format!("{name}({lab}) = {rhs}\n"));
    }
    out
}

pub fn matrices(ctx: &Ctx, which: Operator) -> Result<Output> {
    let coh = ctx.cohomology()?;
    let labels = coh.basis_labels();
    let ops: Vec<(&str, Operator)> = match which {
        Operator::All => vec![("F", Operator::F), ("V", Operator::V), ("tau", Operator::Tau)],
        Operator::F => vec![("F", Operator::F)],
        Operator::V => vec![("V", Operator::V)],
        Operator::Tau => vec![("tau", Operator::Tau)],
    };
    let mut jsons = Vec::new();
    let mut tables = String::new();
    let mut csv = String::new();
    for (name, op) in ops {
        let mat = ctx.operator(&coh, op)?;
        jsons.push(envelope(ctx.m, name, &mat));
        tables.push_str(&format!("# {name} (twist {})\n", mat.twist));
        tables.push_str(&images(name, &mat, &labels));
        if which == Operator::All {
            csv.push_str(&format!("# {name}\n"));
        }
        for i in 0..mat.matrix.rows {
            let row: Vec<String> = mat.matrix.row(i).iter().map(|x| x.bits().to_string()).collect();
            csv.push_str(&row.join(","));
            csv.push('\n');
        }
    }
    let json = if jsons.len() == 1 { jsons.pop().expect("one") } else { Value::Array(jsons) };
    Ok(Output { json, table: tables, csv })
}

pub fn cartier_table(ctx: &Ctx) -> Result<Output> {
    if ctx.m > 3 {
        bail!("the Cartier table is checked for m <= 3");
    }
    let curve = Curve::new(ctx.m)?;
    let rows = verify_cartier_table(&curve);
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.label.clone(),
                if r.matches { "ok" } else { "MISMATCH" }.to_string(),
                r.printed.clone(),
                r.computed.to_string(),
                r.expected.to_string(),
            ]
        })
        .collect();
    let header = ["row", "status", "printed", "computed", "printed_instantiated"];
    let bad = rows.iter().filter(|r| !r.matches).count();
    Ok(Output {
        json: json!({ "m": ctx.m, "rows": rows, "mismatches": bad }),
        table: format!("{}{} of {} rows differ from the printed table\n", table(&header, &cells), bad, rows.len()),
        csv: csv_rows(&header, &cells),
    })
}

fn decomposition_cells(d: &Decomposition) -> Vec<Vec<String>> {
    d.summands
        .iter()
        .map(|s| {
            vec![
                s.presentation.clone(),
                s.word.to_string(),
                s.rank.to_string(),
                s.multiplicity.to_string(),
                s.a_number.to_string(),
            ]
        })
        .collect()
}

pub fn decompose(ctx: &Ctx, trivial: bool) -> Result<Output> {
    let a = ctx.analysis(trivial)?;
    let d = &a.decomposition;
    let header = ["presentation", "word", "rank", "multiplicity", "a_number"];
    let cells = decomposition_cells(d);
    Ok(Output {
        json: serde_json::to_value(d)?,
        table: format!("{d}\n\n{}eo_type {}\n", table(&header, &cells), d.eo_type),
        csv: csv_rows(&header, &cells),
    })
}

pub fn eo(ctx: &Ctx, trivial: bool) -> Result<Output> {
    let a = ctx.analysis(trivial)?;
    let eo = &a.decomposition.eo_type;
    Ok(Output {
        json: json!({ "m": ctx.m, "trivial": trivial, "eo_type": eo, "display": eo.to_string() }),
        table: eo.to_string(),
        csv: csv_rows(&["m", "trivial", "eo_type"], &[vec![ctx.m.to_string(), trivial.to_string(), eo.to_string()]]),
    })
}

pub fn anumber(ctx: &Ctx, trivial: bool) -> Result<Output> {
    let a = ctx.analysis(trivial)?;
    let exp = known_results::expected(ctx.m)?;
    let expected = if trivial { exp.trivial_a_number } else { exp.a_number };
    let cells = vec![vec![
        ctx.m.to_string(),
        trivial.to_string(),
        a.dim.to_string(),
        a.a_number.to_string(),
        a.p_rank.to_string(),
        expected.to_string(),
    ]];
    let header = ["m", "trivial", "dim", "a_number", "p_rank", "expected_a_number"];
    Ok(Output {
        json: json!({
            "m": ctx.m, "trivial": trivial, "dim": a.dim, "a_number": a.a_number,
            "p_rank": a.p_rank, "expected_a_number": expected,
        }),
        table: table(&header, &cells),
        csv: csv_rows(&header, &cells),
    })
}

pub fn trivial(ctx: &Ctx) -> Result<Output> {
    let model = known_results::TrivialEigenModel::new(ctx.m)?;
    let rels: Vec<String> = model
        .relations()
        .iter()
        .map(|&(j, a, k, b)| format!("F^{a} X_{j} + V^{b} X_{k}"))
        .collect();
    let predicted = known_results::predicted_trivial_decomposition(ctx.m)?;
    let pred_str: Vec<String> = predicted
        .iter()
        .map(|(w, k)| if *k == 1 { w.presentation() } else { format!("{k}·{}", w.presentation()) })
        .collect();
    let module = known_results::d_m0_action(ctx.m)?;
    let mut d = module.decompose()?;
    d.m = Some(ctx.m);
    let exp = known_results::expected(ctx.m)?;
    let header = ["j", "ell", "e", "s", "m(j)", "epsilon", "t", "iota"];
    let cells: Vec<Vec<String>> = model
        .generators
        .iter()
        .map(|g| [g.j, g.ell, g.e as u64, g.s, g.m, g.epsilon as u64, g.t, g.iota].map(|x| x.to_string()).to_vec())
        .collect();
    let table_text = format!(
        "{}relations: {}\npredicted: {}\nmodel:     {}\neo_type {} (expected {}), a-number {}\n",
        table(&header, &cells),
        rels.join("; "),
        pred_str.join(" + "),
        d,
        d.eo_type,
        exp.eo_trivial,
        module.a_number(),
    );
    Ok(Output {
        json: json!({
            "m": ctx.m, "model": model, "relations": rels, "predicted": pred_str,
            "decomposition": d, "expected_eo_type": exp.eo_trivial, "a_number": module.a_number(),
        }),
        table: table_text,
        csv: csv_rows(&header, &cells),
    })
}

pub fn good_subsets(ctx: &Ctx) -> Result<Output> {
    let subsets = rep_theory::good_subsets(ctx.m)?;
    let total = rep_theory::good_dimension_total(&subsets);
    let cells: Vec<Vec<String>> = subsets
        .iter()
        .map(|s| {
            let e: Vec<String> = s.elements.iter().map(|x| x.to_string()).collect();
            vec![format!("{{{}}}", e.join(",")), s.multiplicity.to_string(), s.dimension.to_string()]
        })
        .collect();
    let header = ["subset", "multiplicity", "dimension"];
    Ok(Output {
        json: json!({ "m": ctx.m, "subsets": subsets, "count": subsets.len(), "total_dimension": total }),
        table: format!("{}{} subsets, total dimension {}\n", table(&header, &cells), subsets.len(), total),
        csv: csv_rows(&header, &cells),
    })
}

pub fn conjecture(ctx: &Ctx) -> Result<Output> {
    let a = ctx.analysis(false)?;
    let r = rep_theory::conjecture_report(ctx.m, &a.decomposition);
    let status = match r.matches_known {
        Some(true) => "agrees with the stated value",
        Some(false) => "DISAGREES with the stated value",
        None => "new evidence",
    };
    let text = format!(
        "multiplicity of {} = {} (predicted 4^{} = {}; dim W_m = {}): {}\n",
        r.word, r.multiplicity, ctx.m, r.predicted, r.w_m_dimension, status
    );
    let header = ["m", "word", "multiplicity", "predicted", "holds"];
    let cells = vec![vec![
        ctx.m.to_string(),
        r.word.clone(),
        r.multiplicity.to_string(),
        r.predicted.to_string(),
        r.holds.to_string(),
    ]];
    Ok(Output {
        json: serde_json::to_value(&r)?,
        table: text,
        csv: csv_rows(&header, &cells),
    })
}
