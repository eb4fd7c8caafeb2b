use std::error::Error;
use std::fmt::Write as _;
use std::path::Path;

use k3kummer_core::arith::fmt_rat;
use k3kummer_core::classifier::{classify as run_classify, TableCatalog};
use k3kummer_core::discform::{discriminant_form, nikulin_embedding_exists, EmbeddingVerdict};
use k3kummer_core::f2space::{enumerate_subspaces, orbits as run_orbits, orthogonal_group, F2Subspace};
use k3kummer_core::fibration::{audit, parse_fibers, FiberConfiguration};
use k3kummer_core::golden;
use k3kummer_core::io::{discform_report, to_json, FormJson, LatticeFile};
use k3kummer_core::kummer::{build_sy, printed_half_sum, DivisorClass, EvenEightVerdict};
use k3kummer_core::lattice::{signature, Signature};
use k3kummer_core::report::Discrepancy;
use serde::Serialize;

use crate::{Format, EXIT_DISCREPANCY, EXIT_OK};

type CmdResult = Result<u8, Box<dyn Error>>;

fn no_csv(format: Format, command: &str) -> Result<(), Box<dyn Error>> {
    if format == Format::Csv {
        return Err(format!("{command} has no csv output").into());
    }
    Ok(())
}

fn read(path: &Path) -> Result<String, Box<dyn Error>> {
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()).into())
}

/// Discrepancies go to stdout in text mode and to stderr otherwise, so that
/// JSON and CSV output stay machine-readable.
fn report(format: Format, discrepancies: &[Discrepancy]) -> u8 {
    for d in discrepancies {
        if format == Format::Text {
            println!("{d}");
        } else {
            eprintln!("{d}");
        }
    }
    if discrepancies.is_empty() {
        EXIT_OK
    } else {
        EXIT_DISCREPANCY
    }
}

#[derive(Serialize)]
struct ClassifyRow {
    row: usize,
    name: String,
    size: usize,
    alpha: usize,
    disc_orders: Vec<u64>,
    condition3: String,
}

pub fn classify(format: Format) -> CmdResult {
    let catalog = TableCatalog::load()?;
    let c = run_classify(&catalog)?;
    let rows: Vec<ClassifyRow> = c
        .rows
        .iter()
        .map(|r| ClassifyRow {
            row: r.matched_row.unwrap_or(0),
            name: r.matched_row.map_or_else(|| "unmatched".to_string(), |k| catalog.row(k).name.clone()),
            size: r.size(),
            alpha: r.alpha(),
            disc_orders: r.disc.invariant_factors(),
            condition3: r.condition3.status.to_string(),
        })
        .collect();
    match format {
        Format::Json => print!("{}", to_json(&rows)),
        Format::Csv => {
            println!("row,name,size,alpha,disc_orders,condition3");
            for r in &rows {
                let orders: Vec<String> = r.disc_orders.iter().map(u64::to_string).collect();
                println!("{},{},{},{},{},{}", r.row, r.name, r.size, r.alpha, orders.join(" "), r.condition3);
            }
            println!("total={}", c.total);
        }
        Format::Text => {
            let forms: Vec<String> = c.rows.iter().map(|r| r.disc.describe()).collect();
            let w = forms.iter().map(String::len).max().unwrap_or(0).max(12);
            println!("{:>3}  {:<24} {:>4}  {:>5}  {:<w$}  {:<44} condition (3)", "row", "lattice", "size", "alpha", "discriminant", "q as printed");
            for ((r, cr), form) in rows.iter().zip(&c.rows).zip(&forms) {
                let printed = cr.matched_row.map_or("", |k| catalog.row(k).printed.text);
                println!(
                    "{:>3}  {:<24} {:>4}  {:>5}  {:<w$}  {:<44} {}",
                    r.row, r.name, r.size, r.alpha, form, printed, r.condition3
                );
            }
            println!("total={}", c.total);
        }
    }
    Ok(report(format, &c.discrepancies))
}

#[derive(Serialize)]
struct OrbitRow<'a> {
    rep: &'a F2Subspace,
    dim: usize,
    size: usize,
    alpha: usize,
}

pub fn orbits(format: Format) -> CmdResult {
    let orb = run_orbits(&enumerate_subspaces(), &orthogonal_group());
    let rows: Vec<OrbitRow> =
        orb.iter().map(|o| OrbitRow { rep: &o.rep, dim: o.dim(), size: o.size, alpha: o.alpha() }).collect();
    match format {
        Format::Json => print!("{}", to_json(&rows)),
        Format::Csv => {
            println!("rep,dim,size,alpha");
            for r in &rows {
                let basis: Vec<String> = r.rep.basis().iter().map(|v| v.to_string()).collect();
                println!("{},{},{},{}", basis.join(" "), r.dim, r.size, r.alpha);
            }
        }
        Format::Text => {
            for r in &rows {
                println!("{:<34} dim {} size {:>2} alpha {}", r.rep.to_string(), r.dim, r.size, r.alpha);
            }
            println!("orbits={} total={}", rows.len(), rows.iter().map(|r| r.size).sum::<usize>());
        }
    }
    Ok(EXIT_OK)
}

pub fn discform(path: &Path, format: Format) -> CmdResult {
    no_csv(format, "discform")?;
    let file = LatticeFile::parse(&read(path)?)?;
    let r = discform_report(&file)?;
    match format {
        Format::Json => print!("{}", to_json(&r)),
        _ => {
            let l = &r.lattice;
            println!("rank {}", l.rank);
            println!("det {}", l.det);
            println!("signature ({},{})", l.signature[0], l.signature[1]);
            println!("orders {:?}", r.form.orders);
            println!("q [{}]", r.form.q.join(", "));
            for row in &r.form.b {
                println!("b [{}]", row.join(", "));
            }
            println!("form {}", r.describe);
        }
    }
    Ok(EXIT_OK)
}

pub fn embed_check(
    path: Option<&Path>,
    form: Option<&Path>,
    sig: Option<(usize, usize)>,
    target: (usize, usize),
    format: Format,
) -> CmdResult {
    no_csv(format, "embed-check")?;
    let (s, q) = match (path, form) {
        (Some(p), None) => {
            let l = LatticeFile::parse(&read(p)?)?.lattice()?;
            (signature(&l), discriminant_form(&l)?)
        }
        (None, Some(f)) => {
            let (p, m) = sig.ok_or("--form needs --signature")?;
            (Signature::new(p, m), FormJson::parse(&read(f)?)?.to_form()?)
        }
        _ => return Err("give a lattice file or --form".into()),
    };
    let v: EmbeddingVerdict = nikulin_embedding_exists(s, &q, Signature::new(target.0, target.1))?;
    match format {
        Format::Json => print!("{}", to_json(&v)),
        _ => {
            println!("signature {s} into ({},{}), form {}", target.0, target.1, q.describe());
            for c in &v.conditions {
                println!("condition ({}) triggered {} holds {}", c.id, c.triggered, c.holds);
            }
            for n in &v.notes {
                println!("note {n}");
            }
            println!("embeds {}", v.embeds);
        }
    }
    Ok(if v.embeds { EXIT_OK } else { EXIT_DISCREPANCY })
}

#[derive(Serialize)]
struct EvenEightOutput {
    family: String,
    classes: Vec<NamedClass>,
    verdict: EvenEightVerdict,
    displayed_witness: Option<String>,
    witness_matches: Option<bool>,
}

#[derive(Serialize)]
struct NamedClass {
    name: String,
    class: String,
}

/// Record ids shared with the selftest.
fn witness_id(family: &str) -> &'static str {
    match family {
        "a" => "san2-witness",
        "b" => "san7-witness",
        _ => "e-witness",
    }
}

pub fn even_eight(family: &str, format: Format) -> CmdResult {
    no_csv(format, "even-eight")?;
    let ns = build_sy()?;
    let classes = ns.even_eight(family)?;
    let verdict = ns.is_even_eight(&classes)?;
    let displayed = printed_half_sum(&ns, family);
    let matches = displayed.as_ref().map(|d| d == &verdict.half_sum);
    let mut discrepancies = Vec::new();
    if let (Some(d), Some(false)) = (&displayed, matches) {
        discrepancies.push(
            Discrepancy::new(witness_id(family), d.to_string(), verdict.half_sum.to_string())
                .resolved(format!("difference {}", &verdict.half_sum - d)),
        );
    }
    let out = EvenEightOutput {
        family: family.to_string(),
        classes: classes
            .iter()
            .enumerate()
            .map(|(i, c)| NamedClass { name: format!("{family}{}", i + 1), class: c.to_string() })
            .collect(),
        displayed_witness: displayed.as_ref().map(DivisorClass::to_string),
        witness_matches: matches,
        verdict,
    };
    match format {
        Format::Json => print!("{}", to_json(&out)),
        _ => {
            let v = &out.verdict;
            for c in &out.classes {
                println!("{} = {}", c.name, c.class);
            }
            println!("self-products -2: {}", v.self_products_ok);
            println!("pairwise disjoint: {}", v.disjoint);
            println!("half-sum: {}", v.half_sum);
            match &v.witness {
                Some(w) => println!("witness (S_Y coordinates): [{}]", w.join(", ")),
                None => println!("witness: half-sum not in S_Y"),
            }
            if let (Some(d), Some(m)) = (&out.displayed_witness, out.witness_matches) {
                println!("displayed witness: {d} (equal: {m})");
            }
            println!("pairing matrix:");
            for row in &v.pairing_matrix {
                let cells: Vec<String> = row.iter().map(|x| format!("{x:>3}")).collect();
                println!("  {}", cells.join(" "));
            }
            println!("verdict: {}", if v.is_even_eight { "even eight" } else { "not an even eight" });
        }
    }
    let code = report(format, &discrepancies);
    Ok(if out.verdict.is_even_eight { code } else { EXIT_DISCREPANCY })
}

#[derive(Serialize)]
struct DivisorOutput {
    expression: String,
    class: String,
    coordinates: DivisorClass,
    self_product: String,
    in_sy: bool,
    lattice_coordinates: Option<Vec<String>>,
}

pub fn divisor_eval(expr: &str, format: Format) -> CmdResult {
    no_csv(format, "divisor eval")?;
    let ns = build_sy()?;
    let v = ns.eval(expr)?;
    let out = DivisorOutput {
        expression: expr.to_string(),
        class: v.to_string(),
        self_product: fmt_rat(&ns.square(&v)),
        in_sy: ns.contains(&v),
        lattice_coordinates: ns.lattice_coordinates(&v).map(|c| c.iter().map(|x| x.to_string()).collect()),
        coordinates: v,
    };
    match format {
        Format::Json => print!("{}", to_json(&out)),
        _ => {
            let mut s = String::new();
            writeln!(s, "class {}", out.class)?;
            let coords: Vec<String> = out.coordinates.coords().iter().map(fmt_rat).collect();
            writeln!(s, "coordinates (L, E0, E12..E56) [{}]", coords.join(", "))?;
            writeln!(s, "self-product {}", out.self_product)?;
            writeln!(s, "in S_Y {}", out.in_sy)?;
            if let Some(c) = &out.lattice_coordinates {
                writeln!(s, "S_Y coordinates [{}]", c.join(", "))?;
            }
            print!("{s}");
        }
    }
    Ok(EXIT_OK)
}

pub fn fibration_audit(
    fibers: &str,
    rho: u32,
    section: bool,
    mw_order: Option<u64>,
    mw_rank: Option<i64>,
    disc: Option<u64>,
    format: Format,
) -> CmdResult {
    no_csv(format, "fibration audit")?;
    let mut config = FiberConfiguration::new(parse_fibers(fibers)?, rho);
    if section {
        config = config.with_section(mw_order);
        config.mw_rank_expected = mw_rank;
    }
    let a = audit(&config, disc);
    match format {
        Format::Json => print!("{}", to_json(&a)),
        _ => println!("{a}"),
    }
    Ok(if a.pass { EXIT_OK } else { EXIT_DISCREPANCY })
}

pub fn selftest(format: Format) -> CmdResult {
    no_csv(format, "selftest")?;
    let r = golden::selftest()?;
    match format {
        Format::Json => print!("{}", to_json(&r)),
        _ => {
            for c in &r.checks {
                let verdict = if c.pass { "PASS" } else { "FAIL" };
                println!("{verdict} {}: expected {}, got {} [{}]", c.id, c.expected, c.actual, c.provenance);
            }
            for d in &r.discrepancies {
                println!("{d}");
            }
            let failed = r.failures().count();
            println!(
                "selftest: {} checks, {failed} failed; {} discrepancies, pinned set {}",
                r.checks.len(),
                r.discrepancies.len(),
                if r.discrepancy_ids() == golden::PINNED_DISCREPANCIES { "matched" } else { "NOT matched" }
            );
        }
    }
    Ok(if r.is_clean() { EXIT_OK } else { EXIT_DISCREPANCY })
}
