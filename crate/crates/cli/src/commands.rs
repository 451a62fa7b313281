use std::fmt;
use std::io::Read;

use bsclass_core::bsgroup::{BsElement, FreeWord, Generator, GroupParam};
use bsclass_core::foxchain::{build_complex, fox_derivative, relator_derivatives, tensor_trivial, Modulus};
use bsclass_core::groupring::{geometric_series, FreeRingElt, GroupRingElt};
use bsclass_core::hermform::{try_invert, HermitianForm, Inversion};
use bsclass_core::intlinalg::AbelianGroup;
use bsclass_core::invariants::{
    assembly_status, classify as classify_pair, cohomology_two_mod2, homology_closed_form, homology_from_complex,
    lgroup_table, radical_description, realize as realize_form, stable_bordism_group, InvariantSummary, W2Type,
};
use bsclass_core::wire::{
    int_matrix_to_json, ring_matrix_to_rows, DescriptorJson, ElementJson, FormJson, RingEltJson, RingMatrixJson,
};
use bsclass_core::Error;
use serde_json::{json, Value};

use crate::table;

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Input(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(Error::Inconsistent(_)) => 3,
            CliError::Core(Error::Internal(_)) => 70,
            _ => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Input(s) => f.write_str(s),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

pub struct Output {
    pub json: Value,
    pub table: String,
}

type CmdResult = Result<Output, CliError>;

fn read_input(path: &str) -> Result<String, CliError> {
    if path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| CliError::Input(format!("stdin: {e}")))?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{path}: {e}")))
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &str) -> Result<T, CliError> {
    let text = read_input(path)?;
    serde_json::from_str(&text).map_err(|e| CliError::Core(Error::Schema(format!("{path}: {e}"))))
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("document types serialize")
}

fn group_json(g: &AbelianGroup) -> Value {
    let mut v = to_value(g);
    v["text"] = Value::String(g.to_string());
    v
}

fn groups_json(gs: &[AbelianGroup]) -> Value {
    Value::Array(gs.iter().map(group_json).collect())
}

fn groups_text(gs: &[AbelianGroup]) -> String {
    gs.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

fn element_json(g: &BsElement, k: GroupParam) -> Value {
    json!({ "normal_form": to_value(&ElementJson::from_element(g)), "human": g.to_human(k) })
}

pub fn group(k: i64, words: &[String]) -> CmdResult {
    let kk = GroupParam::new(k);
    let mut product = BsElement::identity();
    let mut items = Vec::new();
    let mut rows = Vec::new();
    for w in words {
        let word: FreeWord = w.parse()?;
        let g = word.eval(kk);
        let gi = g.invert(kk);
        rows.push(vec![w.clone(), g.to_human(kk), gi.to_human(kk)]);
        items.push(json!({ "word": w, "element": element_json(&g, kk), "inverse": element_json(&gi, kk) }));
        product = product.multiply(&g, kk);
    }
    rows.push(vec!["(product)".into(), product.to_human(kk), product.invert(kk).to_human(kk)]);
    Ok(Output {
        json: json!({ "k": k, "words": items, "product": element_json(&product, kk) }),
        table: table::render(&["word", "normal form", "inverse"], &rows),
    })
}

fn ring_json(x: &GroupRingElt) -> Value {
    json!({ "value": to_value(&RingEltJson::from_elt(x)), "human": x.to_human() })
}

pub fn ring(k: i64, exprs: &[String]) -> CmdResult {
    let kk = GroupParam::new(k);
    let mut product = GroupRingElt::one(kk);
    let mut items = Vec::new();
    let mut rows = Vec::new();
    for e in exprs {
        let x = GroupRingElt::parse(e, kk)?;
        let inv = x.involute();
        rows.push(vec![
            e.clone(),
            x.to_human(),
            inv.to_human(),
            x.augment().to_string(),
            x.identity_coefficient().to_string(),
        ]);
        items.push(json!({
            "input": e,
            "element": ring_json(&x),
            "involute": ring_json(&inv),
            "augmentation": x.augment().to_string(),
            "identity_coefficient": x.identity_coefficient().to_string(),
        }));
        product = product.mul(&x)?;
    }
    rows.push(vec![
        "(product)".into(),
        product.to_human(),
        product.involute().to_human(),
        product.augment().to_string(),
        product.identity_coefficient().to_string(),
    ]);
    Ok(Output {
        json: json!({ "k": k, "inputs": items, "product": ring_json(&product) }),
        table: table::render(&["input", "normal form", "involute", "augmentation", "identity coeff"], &rows),
    })
}

fn derivative_json(d: &FreeRingElt, k: GroupParam) -> Value {
    let p = d.project(k);
    json!({ "free": d.to_human(), "projected": ring_json(&p) })
}

pub fn fox(k: i64, word: Option<&str>) -> CmdResult {
    let kk = GroupParam::new(k);
    if let Some(w) = word {
        let w: FreeWord = w.parse()?;
        let da = fox_derivative(&w, Generator::A);
        let db = fox_derivative(&w, Generator::B);
        return Ok(Output {
            table: table::fields(&[
                ("word", w.to_string()),
                ("d/da", da.to_human()),
                ("d/db", db.to_human()),
                ("d/da in Z[B(k)]", da.project(kk).to_human()),
                ("d/db in Z[B(k)]", db.project(kk).to_human()),
            ]),
            json: json!({
                "k": k,
                "word": w.to_string(),
                "d_a": derivative_json(&da, kk),
                "d_b": derivative_json(&db, kk),
            }),
        });
    }
    let cx = build_complex(kk)?;
    let int = tensor_trivial(&cx, Modulus::Integers);
    let mut doc = json!({
        "k": k,
        "d2": to_value(&ring_matrix_to_rows(cx.d2())),
        "d1": to_value(&ring_matrix_to_rows(cx.d1())),
        "d2_human": cx.d2().to_human_rows(),
        "d1_human": cx.d1().to_human_rows(),
        "augmented_d2": int_matrix_to_json(&int.d2),
        "augmented_d1": int_matrix_to_json(&int.d1),
        "composition_is_zero": cx.composition()?.entries().all(GroupRingElt::is_zero),
    });
    let mut pairs = vec![
        ("d2", format!("{:?}", cx.d2().to_human_rows())),
        ("d1", format!("{:?}", cx.d1().to_human_rows())),
        ("augmented d2", format!("{:?}", int_matrix_to_json(&int.d2))),
    ];
    if cx.is_circle() {
        doc["presentation"] = json!("<a | >");
    } else {
        let [da, db] = relator_derivatives(kk);
        let b_neg_k = FreeWord::generator_power(Generator::B, -k);
        let series = geometric_series(Generator::B, k);
        let conj = FreeRingElt::from_word("abA".parse()?).to_human();
        let da_closed = format!("1 - {conj}");
        let db_closed = format!("a - {conj}*{}*({})", FreeRingElt::from_word(b_neg_k).to_human(), series.to_human());
        pairs.insert(0, ("d/da", format!("{}  =  {da_closed}", da.to_human())));
        pairs.insert(1, ("d/db", format!("{}  =  {db_closed}", db.to_human())));
        doc["presentation"] = json!(format!("<a, b | {}>", FreeWord::bs_relator(kk)));
        doc["d_a"] = derivative_json(&da, kk);
        doc["d_a"]["closed_form"] = json!(da_closed);
        doc["d_b"] = derivative_json(&db, kk);
        doc["d_b"]["closed_form"] = json!(db_closed);
        doc["d_b"]["series"] = json!(series.to_human());
    }
    Ok(Output { json: doc, table: table::fields(&pairs) })
}

fn closed_forms(k: GroupParam, modulus: Modulus) -> Result<Vec<AbelianGroup>, CliError> {
    (0..3).map(|d| homology_closed_form(k, modulus, d).map_err(CliError::from)).collect()
}

pub fn homology(k: i64) -> CmdResult {
    let kk = GroupParam::new(k);
    let closed = closed_forms(kk, Modulus::Integers)?;
    let chain = homology_from_complex(kk, Modulus::Integers)?.to_vec();
    let closed2 = closed_forms(kk, Modulus::Two)?;
    let chain2 = homology_from_complex(kk, Modulus::Two)?.to_vec();
    let h3 = homology_closed_form(kk, Modulus::Integers, 3)?;
    let h2_co = cohomology_two_mod2(kk);
    let agree = closed == chain && closed2 == chain2;
    Ok(Output {
        json: json!({
            "k": k,
            "closed_form": groups_json(&closed),
            "chain_complex": groups_json(&chain),
            "mod2": { "closed_form": groups_json(&closed2), "chain_complex": groups_json(&chain2) },
            "h3": group_json(&h3),
            "cohomology_h2_mod2": group_json(&h2_co),
            "agree": agree,
        }),
        table: table::render(
            &["coefficients", "source", "H0, H1, H2"],
            &[
                vec!["Z".into(), "closed form".into(), groups_text(&closed)],
                vec!["Z".into(), "chain complex".into(), groups_text(&chain)],
                vec!["Z/2".into(), "closed form".into(), groups_text(&closed2)],
                vec!["Z/2".into(), "chain complex".into(), groups_text(&chain2)],
            ],
        ) + &format!("\nH3 = {h3}, H^2(Z/2) = {h2_co}, agree = {agree}"),
    })
}

pub fn lgroups(k: i64) -> CmdResult {
    let kk = GroupParam::new(k);
    let t = lgroup_table(kk);
    let a = assembly_status(kk)?;
    let radical = radical_description(kk);
    Ok(Output {
        json: json!({
            "k": k,
            "L4": group_json(&t.l4),
            "L5": group_json(&t.l5),
            "L0_symmetric": group_json(&t.l0_symmetric),
            "Wh": group_json(&t.whitehead),
            "assembly": {
                "a4_domain": group_json(&a.a4_domain),
                "a4_isomorphic": a.a4_isomorphic,
                "a5_domain": group_json(&a.a5_domain),
                "a5_isomorphic": a.a5_isomorphic,
                "chain_complex_agrees": a.chain_complex_agrees,
                "whitehead_trivial": a.whitehead_trivial,
                "waa_holds": a.waa_holds,
            },
            "radical": to_value(&radical),
        }),
        table: table::fields(&[
            ("L4", t.l4.to_string()),
            ("L5", t.l5.to_string()),
            ("L^0", t.l0_symmetric.to_string()),
            ("Wh", t.whitehead.to_string()),
            ("H0 + H2(Z/2) vs L4", format!("{} vs {}: {}", a.a4_domain, a.l4, a.a4_isomorphic)),
            ("H1 vs L5", format!("{} vs {}: {}", a.a5_domain, a.l5, a.a5_isomorphic)),
            ("H^2(pi; Z[pi])", radical.text),
        ]),
    })
}

pub fn bordism(k: i64, w2: &str) -> CmdResult {
    let kk = GroupParam::new(k);
    let w = W2Type::parse(w2)?;
    let b = stable_bordism_group(kk, w)?;
    Ok(Output {
        json: json!({
            "k": k,
            "w2": w.as_str(),
            "signature_lattice": format!("{}Z", b.signature_multiple),
            "h2_mod2": group_json(&b.h2_mod2),
            "group": b.to_string(),
        }),
        table: table::fields(&[("w2-type", w.to_string()), ("Omega_4", b.to_string())]),
    })
}

fn certify(form: HermitianForm) -> Result<(HermitianForm, &'static str), CliError> {
    if form.inverse().is_some() {
        return Ok((form, "supplied"));
    }
    match try_invert(&form) {
        Inversion::Inverse(c) => Ok((form.with_certificate(c)?, "found")),
        Inversion::Unknown(_) => Ok((form, "unknown")),
    }
}

pub fn form(path: &str) -> CmdResult {
    let doc: FormJson = read_json(path)?;
    let (f, status) = certify(doc.to_form()?)?;
    let arf = f.arf().map(|a| a.value());
    Ok(Output {
        json: json!({
            "k": f.param().k(),
            "rank": f.rank(),
            "parity": to_value(&f.parity()),
            "signature": f.signature(),
            "augmented": int_matrix_to_json(&f.augmented()),
            "certificate": status,
            "form": to_value(&FormJson::from_form(&f)),
        }),
        table: table::fields(&[
            ("rank", f.rank().to_string()),
            ("parity", format!("{:?}", f.parity()).to_lowercase()),
            ("signature", f.signature().to_string()),
            ("certificate", status.into()),
            ("arf", arf.map_or("unknown".into(), |a| a.to_string())),
            ("matrix", format!("{:?}", f.matrix().to_human_rows())),
        ]),
    })
}

fn summary_json(s: &InvariantSummary) -> Value {
    json!({
        "rank": s.rank,
        "parity": to_value(&s.parity),
        "signature": s.signature,
        "w2": s.w2.as_str(),
        "ks": to_value(&bsclass_core::wire::KsJson::from(s.ks)),
        "arf": s.arf,
    })
}

pub fn classify(left: &str, right: &str, isometry: Option<&str>) -> CmdResult {
    let d1 = read_json::<DescriptorJson>(left)?.to_descriptor()?;
    let d2 = read_json::<DescriptorJson>(right)?.to_descriptor()?;
    let u = match isometry {
        Some(p) => {
            let doc: RingMatrixJson = read_json(p)?;
            if doc.k != d1.param().k() {
                return Err(Error::ParamMismatch { left: d1.param().k(), right: doc.k }.into());
            }
            Some(doc.to_matrix()?)
        }
        None => None,
    };
    let out = classify_pair(&d1, &d2, u.as_ref())?;
    let [s1, s2] = &out.invariants;
    let reasons = out.verdict.reasons();
    let mut rows = vec![("verdict", out.verdict.label().to_string())];
    rows.extend(reasons.iter().map(|r| ("reason", r.clone())));
    rows.push(("left", format!("rank {} {:?} sign {} type {} KS {}", s1.rank, s1.parity, s1.signature, s1.w2, s1.ks)));
    rows.push(("right", format!("rank {} {:?} sign {} type {} KS {}", s2.rank, s2.parity, s2.signature, s2.w2, s2.ks)));
    Ok(Output {
        json: json!({
            "verdict": out.verdict.label(),
            "reasons": reasons,
            "invariants": { "left": summary_json(s1), "right": summary_json(s2) },
        }),
        table: table::fields(&rows),
    })
}

pub fn realize(path: &str) -> CmdResult {
    let doc: FormJson = read_json(path)?;
    let (f, _) = certify(doc.to_form()?)?;
    let ds = realize_form(&f)?;
    let rows: Vec<Vec<String>> =
        ds.iter().enumerate().map(|(i, d)| vec![(i + 1).to_string(), d.w2().to_string(), d.ks().to_string()]).collect();
    Ok(Output {
        json: json!({
            "k": f.param().k(),
            "parity": to_value(&f.parity()),
            "signature": f.signature(),
            "count": ds.len(),
            "descriptors": ds.iter().map(|d| to_value(&DescriptorJson::from_descriptor(d))).collect::<Vec<_>>(),
        }),
        table: table::render(&["#", "w2-type", "KS"], &rows),
    })
}

fn parse_range(s: &str) -> Result<(i64, i64), CliError> {
    let bad = || CliError::Core(Error::Parse(format!("k-range must look like a..b, got {s:?}")));
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

struct ReportRow {
    k: i64,
    h: Vec<AbelianGroup>,
    h2_co: AbelianGroup,
    wh: AbelianGroup,
    l4: AbelianGroup,
    l5: AbelianGroup,
    omega: String,
    oracle_ok: bool,
}

fn report_row(k: i64) -> Result<ReportRow, Error> {
    let kk = GroupParam::new(k);
    let closed: Vec<AbelianGroup> =
        (0..3).map(|d| homology_closed_form(kk, Modulus::Integers, d)).collect::<Result<_, _>>()?;
    let closed2: Vec<AbelianGroup> =
        (0..3).map(|d| homology_closed_form(kk, Modulus::Two, d)).collect::<Result<_, _>>()?;
    let chain = homology_from_complex(kk, Modulus::Integers)?;
    let chain2 = homology_from_complex(kk, Modulus::Two)?;
    let assembly = assembly_status(kk)?;
    let t = lgroup_table(kk);
    let omega = stable_bordism_group(kk, W2Type::II)?.to_string();
    Ok(ReportRow {
        k,
        oracle_ok: closed == chain && closed2 == chain2 && assembly.waa_holds && assembly.chain_complex_agrees,
        h: closed,
        h2_co: cohomology_two_mod2(kk),
        wh: t.whitehead,
        l4: t.l4,
        l5: t.l5,
        omega,
    })
}

pub fn report(range: &str) -> CmdResult {
    let (a, b) = parse_range(range)?;
    let ks: Vec<i64> = if a <= b { (a..=b).collect() } else { Vec::new() };
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).max(1);
    let chunk = ks.len().div_ceil(workers).max(1);
    let results: Vec<Result<ReportRow, Error>> = std::thread::scope(|s| {
        let handles: Vec<_> =
            ks.chunks(chunk).map(|c| s.spawn(move || c.iter().map(|&k| report_row(k)).collect::<Vec<_>>())).collect();
        handles.into_iter().flat_map(|h| h.join().expect("report worker panicked")).collect()
    });
    let rows = results.into_iter().collect::<Result<Vec<_>, _>>()?;
    let table_rows: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.k.to_string(),
                r.h[0].to_string(),
                r.h[1].to_string(),
                r.h[2].to_string(),
                r.h2_co.to_string(),
                r.wh.to_string(),
                r.l4.to_string(),
                r.l5.to_string(),
                r.omega.clone(),
                if r.oracle_ok { "ok" } else { "MISMATCH" }.to_string(),
            ]
        })
        .collect();
    let json_rows: Vec<Value> = rows
        .iter()
        .map(|r| {
            json!({
                "k": r.k,
                "H0": group_json(&r.h[0]),
                "H1": group_json(&r.h[1]),
                "H2": group_json(&r.h[2]),
                "H2_mod2_cohomology": group_json(&r.h2_co),
                "Wh": group_json(&r.wh),
                "L4": group_json(&r.l4),
                "L5": group_json(&r.l5),
                "omega4": r.omega,
                "oracle_check": r.oracle_ok,
            })
        })
        .collect();
    Ok(Output {
        json: json!({ "range": [a, b], "rows": json_rows }),
        table: table::render(&["k", "H0", "H1", "H2", "H^2(Z/2)", "Wh", "L4", "L5", "Omega4", "oracle"], &table_rows),
    })
}
