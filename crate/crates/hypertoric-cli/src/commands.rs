//! Subcommand payloads. Indices are 1-based in every output.

use std::fmt::Write as _;

use hypertoric::arrangement::{chambers, core, StackyArrangement};
use hypertoric::crring::{CRClass, CrRing, Poly, RingPresentation};
use hypertoric::lawrence::lawrence_fan;
use hypertoric::localize::{
    composition_differs_from_identity, is_injective, orbifold_degrees, steinberg_apply,
    steinberg_operator, table, Direction, FixedPointTable, TableConvention, WeightedModel,
};
use hypertoric::multifan::{box_elements, box_index, box_inverse, circuits};
use hypertoric::parallel::Strategy;
use hypertoric::quantum::{
    eliminated_relation, qsr_circuit_degrees, qsr_presentation, Divisor, NovikovSeries,
    QuantumEngine, QuantumRelation, RelationReport,
};
use hypertoric::{Error, Int, Rat};
use num_traits::{Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::document::{catalog_entry, ArrangementDocument, CATALOG};
use crate::envelope::Payload;
use crate::{Cli, CliError, Command, TableChoice};

fn int(x: &Int) -> Value {
    x.to_i64()
        .map_or_else(|| Value::String(x.to_string()), Value::from)
}

fn ints(v: &[Int]) -> Value {
    Value::Array(v.iter().map(int).collect())
}

fn rats(v: &[Rat]) -> Value {
    Value::Array(v.iter().map(|x| Value::String(x.to_string())).collect())
}

fn one_based(v: &[usize]) -> Vec<usize> {
    v.iter().map(|i| i + 1).collect()
}

fn tuple<T: ToString>(v: &[T]) -> String {
    let parts: Vec<String> = v.iter().map(T::to_string).collect();
    format!("({})", parts.join(", "))
}

fn set(v: &[usize]) -> String {
    let parts: Vec<String> = v.iter().map(|i| (i + 1).to_string()).collect();
    format!("{{{}}}", parts.join(","))
}

/// Library failures on validated input: size limits are the input's fault,
/// everything else is internal.
fn library(e: Error) -> CliError {
    match e {
        Error::DimensionTooLarge { .. } => CliError::Validation {
            path: "$.beta".into(),
            message: e.to_string(),
        },
        Error::TruncationTooSmall => CliError::Validation {
            path: "--max-q-order".into(),
            message: e.to_string(),
        },
        other => CliError::Internal {
            path: "$".into(),
            message: other.to_string(),
        },
    }
}

pub fn examples(list: bool, show: Option<&str>) -> Result<Payload, CliError> {
    if let Some(name) = show {
        let text = catalog_entry(name).ok_or_else(|| CliError::Validation {
            path: "--show".into(),
            message: format!("unknown example {name:?}"),
        })?;
        let doc = ArrangementDocument::parse(text)?;
        return Ok(Payload {
            json: serde_json::to_value(&doc).expect("documents serialize"),
            text: text.to_string(),
        });
    }
    if !list {
        return Err(CliError::Validation {
            path: "argv".into(),
            message: "examples needs --list or --show NAME".into(),
        });
    }
    let names: Vec<&str> = CATALOG.iter().map(|(n, _)| *n).collect();
    Ok(Payload {
        json: json!({ "examples": names }),
        text: names.join("\n"),
    })
}

pub fn run(cli: &Cli, arr: &StackyArrangement) -> Result<Payload, CliError> {
    match &cli.command {
        Command::Gale => Ok(gale(arr)),
        Command::Circuits => circuit_list(arr),
        Command::Box => Ok(boxes(arr)),
        Command::Core => core_chambers(arr),
        Command::Fan => fan(arr),
        Command::Cohomology => cohomology(arr),
        Command::Localize => localize(cli, arr),
        Command::Steinberg => steinberg(cli, arr),
        Command::QuantumDivisor {
            divisor,
            differential,
        } => quantum_divisor(cli, arr, *divisor, *differential),
        Command::Qsr => qsr(cli, arr),
        Command::Examples { .. } => unreachable!("handled before loading an arrangement"),
    }
}

fn group_json(rank: usize, torsion: &[Int]) -> Value {
    json!({ "rank": rank, "torsion": ints(torsion) })
}

fn gale(arr: &StackyArrangement) -> Payload {
    let m = arr.m();
    let beta: Vec<Value> = (0..m).map(|i| ints(&arr.b(i))).collect();
    let dual: Vec<Value> = (0..m).map(|i| ints(&arr.gale.dual.column(i))).collect();
    let kernel: Vec<Value> = arr.kernel_basis().iter().map(|v| ints(v)).collect();
    let target = &arr.gale.dual.target;
    let json = json!({
        "n": group_json(arr.group_n.rank, &arr.group_n.torsion),
        "beta": beta,
        "dual": { "target": group_json(target.rank, &target.torsion), "columns": dual },
        "kernel_basis": kernel,
        "theta": ints(&arr.theta),
        "psi": ints(&arr.psi),
        "psi_supplied": arr.psi_supplied,
    });
    let mut text = String::new();
    let _ = writeln!(text, "m = {m}, d = {}", arr.d());
    for i in 0..m {
        let _ = writeln!(
            text,
            "b{} = {}    b{}^dual = {}",
            i + 1,
            tuple(&arr.b(i)),
            i + 1,
            tuple(&arr.gale.dual.column(i))
        );
    }
    if arr.dual_rank() == 1 {
        let row: Vec<Int> = (0..m).map(|i| arr.gale.dual.column(i)[0].clone()).collect();
        let _ = writeln!(text, "beta^dual = {}", tuple(&row));
    }
    for (k, v) in arr.kernel_basis().iter().enumerate() {
        let _ = writeln!(text, "kernel basis {}: {}", k + 1, tuple(v));
    }
    let _ = writeln!(text, "theta = {}", tuple(&arr.theta));
    let origin = if arr.psi_supplied {
        "supplied"
    } else {
        "computed"
    };
    let _ = writeln!(text, "psi = {} ({origin})", tuple(&arr.psi));
    Payload { json, text }
}

fn circuit_list(arr: &StackyArrangement) -> Result<Payload, CliError> {
    let cs = circuits(arr).map_err(library)?;
    let mut text = String::new();
    let list: Vec<Value> = cs
        .iter()
        .enumerate()
        .map(|(k, c)| {
            let _ = writeln!(
                text,
                "circuit {}: S = {}  S+ = {}  S- = {}  weights = {}  beta_S = {}  class = {}",
                k + 1,
                set(&c.support),
                set(&c.positive),
                set(&c.negative),
                tuple(&c.weights),
                tuple(&c.beta_s),
                tuple(&c.h2_class)
            );
            json!({
                "index": k + 1,
                "support": one_based(&c.support),
                "positive": one_based(&c.positive),
                "negative": one_based(&c.negative),
                "weights": ints(&c.weights),
                "beta_s": ints(&c.beta_s),
                "curve_class": ints(&c.h2_class),
                "lcm": int(&c.lcm_w),
                "root_hyperplane": one_based(&c.root_hyperplane),
            })
        })
        .collect();
    Ok(Payload {
        json: json!({ "count": cs.len(), "circuits": list }),
        text,
    })
}

fn boxes(arr: &StackyArrangement) -> Payload {
    let bs = box_elements(arr);
    let mut text = String::new();
    let list: Vec<Value> = bs
        .iter()
        .enumerate()
        .map(|(k, b)| {
            let inv = box_inverse(b, arr);
            let inverse = box_index(&bs, &inv.sigma, &inv.v).map(|j| j + 1);
            let _ = writeln!(
                text,
                "box {}: v = {}  sigma = {}  alphas = {}  age = {}  inverse = {}",
                k + 1,
                tuple(&b.v),
                set(&b.sigma),
                tuple(&b.alphas),
                b.age,
                inverse.map_or("-".into(), |j| j.to_string())
            );
            json!({
                "index": k + 1,
                "v": ints(&b.v),
                "sigma": one_based(&b.sigma),
                "alphas": rats(&b.alphas),
                "age": b.age,
                "trivial": b.is_trivial(),
                "inverse": inverse,
            })
        })
        .collect();
    Payload {
        json: json!({ "count": bs.len(), "boxes": list }),
        text,
    }
}

fn core_chambers(arr: &StackyArrangement) -> Result<Payload, CliError> {
    let all = chambers(arr, Strategy::default()).map_err(library)?;
    let parts = core(arr).map_err(library)?;
    let mut text = format!("{} chambers, {} bounded\n", all.len(), parts.len());
    let list: Vec<Value> = parts
        .iter()
        .enumerate()
        .map(|(k, (c, f))| {
            let vertices: Vec<Value> = f.vertices.iter().map(|v| rats(v)).collect();
            let rays: Vec<Value> = f
                .rays
                .iter()
                .map(|(i, r)| json!({ "hyperplane": i + 1, "ray": ints(r) }))
                .collect();
            let cones: Vec<Vec<usize>> = f.cones.iter().map(|c| one_based(c)).collect();
            let _ = writeln!(text, "chamber {}: U = {}", k + 1, set(&c.flips));
            for v in &f.vertices {
                let _ = writeln!(text, "  vertex {}", tuple(v));
            }
            for (i, r) in &f.rays {
                let _ = writeln!(text, "  ray {}: {}", i + 1, tuple(r));
            }
            json!({
                "flips": one_based(&c.flips),
                "signs": c.signs,
                "vertices": vertices,
                "normal_fan": { "rays": rays, "cones": cones },
            })
        })
        .collect();
    if parts.is_empty() {
        text += "no bounded chambers\n";
    }
    Ok(Payload {
        json: json!({ "chambers": all.len(), "bounded": list }),
        text,
    })
}

fn fan(arr: &StackyArrangement) -> Result<Payload, CliError> {
    let f = lawrence_fan(arr).map_err(library)?;
    let m = f.m;
    let ray_name = |j: usize| {
        if j < m {
            format!("bL{}", j + 1)
        } else {
            format!("bL'{}", j - m + 1)
        }
    };
    let var_name = |j: usize| {
        if j < m {
            format!("z{}", j + 1)
        } else {
            format!("w{}", j - m + 1)
        }
    };
    let mut text = String::new();
    let rays: Vec<Value> = f
        .rays
        .iter()
        .enumerate()
        .map(|(j, r)| {
            let _ = writeln!(text, "{} = {}", ray_name(j), tuple(r));
            json!({ "name": ray_name(j), "ray": ints(r) })
        })
        .collect();
    let cones: Vec<Vec<usize>> = f.max_cones.iter().map(|c| one_based(c)).collect();
    let irrelevant: Vec<Value> = f
        .irrelevant
        .iter()
        .map(|vars| {
            let monomial: Vec<String> = vars.iter().map(|&j| var_name(j)).collect();
            json!({ "variables": one_based(vars), "monomial": monomial.join("*") })
        })
        .collect();
    let _ = writeln!(text, "{} maximal cones", cones.len());
    for (c, vars) in f.max_cones.iter().zip(&f.irrelevant) {
        let names: Vec<String> = c.iter().map(|&j| ray_name(j)).collect();
        let monomial: Vec<String> = vars.iter().map(|&j| var_name(j)).collect();
        let _ = writeln!(
            text,
            "  cone {{{}}}  irrelevant {}",
            names.join(","),
            monomial.join("*")
        );
    }
    Ok(Payload {
        json: json!({ "rays": rays, "max_cones": cones, "irrelevant": irrelevant }),
        text,
    })
}

fn presentation_json(ring: &CrRing, p: &RingPresentation) -> Value {
    json!({
        "generators": p.generators,
        "linear": p.linear.iter().map(|l| format!("{l} = 0")).collect::<Vec<_>>(),
        "relations": p.relations.iter().map(|r| ring.format_relation(r)).collect::<Vec<_>>(),
    })
}

fn presentation_text(ring: &CrRing, title: &str, p: &RingPresentation) -> String {
    let mut out = format!("{title}\n  generators: {}\n", p.generators.join(", "));
    for l in &p.linear {
        let _ = writeln!(out, "  {l} = 0");
    }
    for r in &p.relations {
        let _ = writeln!(out, "  {}", ring.format_relation(r));
    }
    out
}

fn cohomology(arr: &StackyArrangement) -> Result<Payload, CliError> {
    let ring = CrRing::new(arr).map_err(library)?;
    let sections = [
        ("equivariant", ring.ht_presentation()),
        ("equivariant with torus weights", ring.htt_presentation()),
        ("chen-ruan", ring.cr_presentation()),
    ];
    let sectors: Vec<String> = (0..ring.boxes.len())
        .map(|s| ring.sector_label(s))
        .collect();
    let mut json = json!({ "sectors": sectors });
    let mut text = String::new();
    for (name, p) in &sections {
        json[*name] = presentation_json(&ring, p);
        text += &presentation_text(&ring, name, p);
    }
    Ok(Payload { json, text })
}

/// `T*P^n_w` from a rank `n` arrangement with one circuit through every hyperplane.
fn weighted_model(arr: &StackyArrangement) -> Result<WeightedModel, CliError> {
    let unsupported = |message: &str| CliError::Validation {
        path: "$.beta".into(),
        message: message.into(),
    };
    if !arr.group_n.is_free() || arr.dual_rank() != 1 {
        return Err(unsupported(
            "localization needs a free N and m = d + 1 (the cotangent bundle of a weighted projective space)",
        ));
    }
    let row: Vec<Int> = (0..arr.m())
        .map(|i| arr.gale.dual.column(i)[0].clone())
        .collect();
    let positive = row.iter().all(Signed::is_positive);
    let negative = row.iter().all(Signed::is_negative);
    if !(positive || negative) {
        return Err(unsupported(
            "the Gale dual must have entries of one sign (the weights of P^n_w)",
        ));
    }
    let weights: Option<Vec<u32>> = row.iter().map(|w| w.abs().to_u32()).collect();
    let weights = weights.ok_or_else(|| unsupported("weights are too large"))?;
    WeightedModel::new(weights).map_err(library)
}

fn fixed_point_table(cli: &Cli, model: &WeightedModel) -> Result<FixedPointTable, CliError> {
    let convention = match cli.convention {
        TableChoice::Standard => TableConvention::Standard,
        TableChoice::Paper => TableConvention::Paper,
    };
    table(model, convention).map_err(|e| CliError::Validation {
        path: "--convention".into(),
        message: e.to_string(),
    })
}

fn localize(cli: &Cli, arr: &StackyArrangement) -> Result<Payload, CliError> {
    let model = weighted_model(arr)?;
    let t = fixed_point_table(cli, &model)?;
    let mut text = format!("weights {}\n", tuple(model.weights()));
    let sectors: Vec<Value> = t
        .sectors
        .iter()
        .map(|s| {
            let _ = writeln!(
                text,
                "sector {}: order {}  support {}  age {}  dim {}",
                s.label(),
                s.order,
                set(&s.support),
                s.age,
                s.dim()
            );
            json!({
                "label": s.label(),
                "fraction": s.fraction.to_string(),
                "order": s.order,
                "support": one_based(&s.support),
                "age": s.age,
                "dim": s.dim(),
            })
        })
        .collect();
    let strings = |v: &[Poly]| v.iter().map(|p| p.to_string()).collect::<Vec<_>>();
    let points: Vec<Value> = t
        .points
        .iter()
        .map(|p| {
            let label = t.sectors[p.sector].label();
            let _ = writeln!(
                text,
                "fixed point {} in {label}: multiplicity {}  tangent [{}]  fiber [{}]",
                p.point + 1,
                p.multiplicity,
                strings(&p.tangent).join(", "),
                strings(&p.fiber).join(", ")
            );
            json!({
                "sector": label,
                "point": p.point + 1,
                "multiplicity": p.multiplicity.to_string(),
                "tangent": strings(&p.tangent),
                "fiber": strings(&p.fiber),
            })
        })
        .collect();
    let n = model.n();
    let degrees = orbifold_degrees(&model);
    let all_middle = degrees.iter().all(|c| c.degree == 2 * n);
    let _ = writeln!(
        text,
        "orbifold degrees: {} components, all equal to 2n = {}: {all_middle}",
        degrees.len(),
        2 * n
    );
    let components: Vec<Value> = degrees
        .iter()
        .map(|c| {
            json!({
                "first": t.sectors[c.first].label(),
                "second": t.sectors[c.second].label(),
                "diagonal": c.diagonal,
                "degree": c.degree,
            })
        })
        .collect();
    Ok(Payload {
        json: json!({
            "weights": model.weights(),
            "sectors": sectors,
            "fixed_points": points,
            "orbifold_degrees": components,
            "all_degrees_equal_2n": all_middle,
        }),
        text,
    })
}

fn steinberg(cli: &Cli, arr: &StackyArrangement) -> Result<Payload, CliError> {
    let model = weighted_model(arr)?;
    let t = fixed_point_table(cli, &model)?;
    let untwisted = t
        .sectors
        .iter()
        .position(|s| s.fraction.is_zero())
        .expect("the untwisted sector");
    let mut inputs: Vec<(String, usize, Poly)> = (0..model.weights().len())
        .map(|j| (format!("u{}", j + 1), untwisted, Poly::u(j)))
        .collect();
    for (s, sector) in t.sectors.iter().enumerate() {
        if !sector.fraction.is_zero() {
            inputs.push((sector.label(), s, Poly::one()));
        }
    }
    let mut text = String::new();
    let mut images = Vec::new();
    for (direction, name) in [(Direction::Forward, "L"), (Direction::Inverse, "L^-1")] {
        for (label, sector, class) in &inputs {
            let value = match steinberg_apply(&t, direction, *sector, class) {
                Ok(image) => {
                    let s = image.format(&t.sectors);
                    let _ = writeln!(text, "{name}({label}) = {s}");
                    json!({ "image": s })
                }
                Err(e) => {
                    let _ = writeln!(text, "{name}({label}): {e}");
                    json!({ "unsupported": e.to_string() })
                }
            };
            images.push(json!({ "operator": name, "input": label, "result": value }));
        }
    }
    let forward = steinberg_operator(&t, Direction::Forward, true).map_err(library)?;
    let inverse = steinberg_operator(&t, Direction::Inverse, true).map_err(library)?;
    let injective = is_injective(&forward);
    let not_inverse = composition_differs_from_identity(&inverse, &forward);
    let _ = writeln!(text, "L injective: {injective}");
    let _ = writeln!(text, "L^-1 L differs from the identity: {not_inverse}");
    Ok(Payload {
        json: json!({
            "images": images,
            "forward_injective": injective,
            "composition_differs_from_identity": not_inverse,
        }),
        text,
    })
}

fn class_json(ring: &CrRing, x: &CRClass) -> Value {
    let parts: Vec<Value> = x
        .components()
        .map(|(s, p)| {
            let terms: Vec<Value> = p
                .terms()
                .map(|(m, c)| json!({ "coefficient": c.to_string(), "monomial": m.to_string() }))
                .collect();
            json!({ "sector": ring.sector_label(s), "polynomial": p.to_string(), "terms": terms })
        })
        .collect();
    Value::Array(parts)
}

fn series_json(ring: &CrRing, s: &NovikovSeries) -> Value {
    let terms: Vec<Value> = s
        .terms()
        .filter(|(_, x)| !x.is_zero())
        .map(|(d, x)| json!({ "degree": d, "class": class_json(ring, x) }))
        .collect();
    json!({ "truncation_order": s.truncation_order(), "terms": terms, "text": s.format(ring) })
}

fn engine(cli: &Cli, arr: &StackyArrangement) -> Result<QuantumEngine, CliError> {
    QuantumEngine::with_convention(arr, cli.sign_convention.convention()).map_err(|e| match e {
        Error::Unsupported(message) => CliError::Validation {
            path: "$.torsion".into(),
            message,
        },
        other => library(other),
    })
}

fn quantum_divisor(
    cli: &Cli,
    arr: &StackyArrangement,
    divisor: usize,
    differential: bool,
) -> Result<Payload, CliError> {
    if divisor == 0 || divisor > arr.m() {
        return Err(CliError::Validation {
            path: "--divisor".into(),
            message: format!("divisor must be between 1 and {}", arr.m()),
        });
    }
    let i = divisor - 1;
    let order = cli.max_q_order;
    let engine = engine(cli, arr)?;
    let ring = &engine.ring;
    let mut targets: Vec<(String, CRClass)> = (0..arr.m())
        .map(|j| (format!("u{}", j + 1), CRClass::from_poly(Poly::u(j))))
        .collect();
    for s in 1..ring.boxes.len() {
        targets.push((ring.sector_label(s), CRClass::generator(s)));
    }
    let mut text = String::new();
    let mut products = Vec::new();
    for (label, x) in &targets {
        let series = engine.multiply_u(i, x, order).map_err(library)?;
        let _ = writeln!(text, "u{divisor} * {label} = {}", series.format(ring));
        let mut entry = json!({ "target": label, "series": series_json(ring, &series) });
        if differential {
            let report = engine
                .differential_report(&Divisor::u(i), x, order)
                .map_err(library)?;
            let product: Vec<Value> = report
                .product_divergence
                .iter()
                .map(|(c, d)| json!({ "convention": c.name(), "first_difference": d }))
                .collect();
            for (c, d) in &report.product_divergence {
                let at = d.as_ref().map_or("none".into(), |d| format!("{d:?}"));
                let _ = writeln!(text, "  {c}: first difference at {at}");
            }
            let pairs: Vec<Value> = report
                .pairs
                .iter()
                .map(|p| {
                    json!({
                        "circuit": p.circuit + 1,
                        "first": p.first.to_string(),
                        "target": p.target.to_string(),
                        "convention": p.convention.name(),
                        "first_difference": p.degree,
                    })
                })
                .collect();
            for p in &report.pairs {
                let _ = writeln!(text, "  {p}");
            }
            entry["differential"] = json!({ "product": product, "pairs": pairs });
        }
        products.push(entry);
    }
    Ok(Payload {
        json: json!({
            "divisor": format!("u{divisor}"),
            "circuits": engine.circuit_count(),
            "products": products,
        }),
        text,
    })
}

fn relation_text(r: &QuantumRelation) -> String {
    let terms: Vec<String> = r
        .terms
        .iter()
        .map(|t| {
            let word: Vec<String> = t
                .word
                .iter()
                .map(|d| format!("({})", d.as_poly()))
                .collect();
            let q: Vec<String> = t
                .shift
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(k, e)| format!("Q{}^{e}", k + 1))
                .collect();
            let mut factors = vec![format!("({})", t.coefficient)];
            factors.extend(q);
            factors.push(word.join(" * "));
            factors.join(" ")
        })
        .collect();
    terms.join(" + ")
}

fn report_json(r: &RelationReport) -> Value {
    json!({ "holds": r.holds, "first_failure": r.first_failure, "order": r.order })
}

fn qsr(cli: &Cli, arr: &StackyArrangement) -> Result<Payload, CliError> {
    let fan = lawrence_fan(arr).map_err(library)?;
    let presentation = qsr_presentation(arr, &fan);
    let engine = engine(cli, arr)?;
    let order = cli.max_q_order;
    let mut text = presentation.to_string();
    let generators: Vec<Value> = presentation.generators.iter().map(|g| ints(g)).collect();
    let relations: Vec<String> = (0..arr.m())
        .map(|i| format!("y^bL{0} + y^bL'{0} - hbar", i + 1))
        .collect();
    let mut per_circuit = Vec::new();
    for c in 0..engine.circuit_count() {
        let (lhs, rhs) = qsr_circuit_degrees(arr, &fan, c).map_err(library)?;
        let _ = writeln!(
            text,
            "circuit {}: degrees {} and {}",
            c + 1,
            tuple(&lhs),
            tuple(&rhs)
        );
        let eliminated = match eliminated_relation(&engine, &fan, c) {
            Ok(rel) => {
                let report = engine.verify_relation(&rel, order).map_err(library)?;
                let _ = writeln!(
                    text,
                    "  eliminated: {} == 0 through order {order}: {}",
                    relation_text(&rel),
                    verdict(&report)
                );
                json!({ "relation": relation_text(&rel), "check": report_json(&report) })
            }
            Err(e) => {
                let _ = writeln!(text, "  eliminated: {e}");
                json!({ "unsupported": e.to_string() })
            }
        };
        let signed = engine.circuit_relation(c).map_err(library)?;
        let report = engine.verify_relation(&signed, order).map_err(library)?;
        let _ = writeln!(
            text,
            "  weight-parity: {} == 0 through order {order}: {}",
            relation_text(&signed),
            verdict(&report)
        );
        per_circuit.push(json!({
            "circuit": c + 1,
            "degrees": [rats(&lhs), rats(&rhs)],
            "eliminated": eliminated,
            "weight_parity": { "relation": relation_text(&signed), "check": report_json(&report) },
        }));
    }
    Ok(Payload {
        json: json!({
            "generators": generators,
            "relations": relations,
            "circuits": per_circuit,
        }),
        text,
    })
}

fn verdict(r: &RelationReport) -> String {
    match &r.first_failure {
        None => "holds".into(),
        Some(d) => format!("fails at degree {d:?}"),
    }
}
