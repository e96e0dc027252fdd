use serde_json::{json, Value};

use layerfield::bipotent::{exps_from_i64, Degree};
use layerfield::json::{
    parse_layered_poly, DescriptorJson, GeneratorJson, LayerJson, PolyJson, PresentationJson, ScalarJson, TermJson,
};
use layerfield::uniform::{is_layerset_semiring, pure_layer_ext, pure_value_ext};
use layerfield::{
    eval_layered_poly, fmt_rat, is_uniform_semifield, kernel_contains, parse_rat, uniform_closure, BipotentPresentation, ExtScalar,
    Generator, SortElem,
};

use crate::error::CliError;
use crate::input::Inputs;
use crate::report::Note;
use crate::session::Kind;

pub type Outcome = Result<(Value, Vec<Note>), CliError>;

fn int<T: ToString>(x: &T) -> Value {
    let s = x.to_string();
    match s.parse::<i64>() {
        Ok(n) => json!(n),
        Err(_) => json!(s),
    }
}

fn ints<T: ToString>(xs: &[T]) -> Value {
    Value::Array(xs.iter().map(int).collect())
}

fn presentation(inputs: &Inputs, arg: &str) -> Result<BipotentPresentation, CliError> {
    Ok(inputs.load::<PresentationJson>(arg, Kind::Presentation)?.parse()?)
}

pub fn parse_list<T: std::str::FromStr>(text: &str, what: &'static str) -> Result<Vec<T>, CliError> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|s| s.trim().parse().map_err(|_| CliError::Argument { what, reason: format!("{s:?} in {text:?}") }))
        .collect()
}

pub fn decompose(inputs: &Inputs, arg: &str) -> Outcome {
    let p = presentation(inputs, arg)?;
    let d = p.decompose();
    let free: Vec<Value> = d.free.iter().map(|m| json!({"exps": ints(&m.exps), "value": m.value.to_string()})).collect();
    let torsion: Vec<Value> = d
        .torsion
        .iter()
        .map(|t| {
            json!({
                "exps": ints(&t.monomial.exps),
                "value": t.monomial.value.to_string(),
                "order": int(&t.order),
                "representative": fmt_rat(&t.representative),
            })
        })
        .collect();
    let regeneration: Vec<Value> = p
        .generators()
        .iter()
        .zip(&d.regeneration)
        .map(|(g, r)| {
            json!({
                "generator": g.to_string(),
                "beta": fmt_rat(&r.beta),
                "free": ints(&r.free),
                "torsion": ints(&r.torsion),
            })
        })
        .collect();
    let result = json!({
        "t": d.free_rank(),
        "orders": ints(&d.torsion_orders()),
        "invariant_factors": ints(&d.invariant_factors),
        "free": free,
        "torsion": torsion,
        "regeneration": regeneration,
        "rank": d.rank.to_string(),
        "semifield": p.is_bipotent_semifield(),
    });
    let notes = vec![
        Note::new("invariant_factors", "Smith normal form of the lattice of exponent vectors whose monomial lands in the base"),
        Note::new("t", "number of zero invariant factors; the free monomials are divisibly independent"),
        Note::new("orders", "invariant factors greater than 1; each torsion monomial has that order modulo the base"),
        Note::new("regeneration", "each generator as base element plus free and torsion monomials"),
        Note::new("rank", "product of the invariant factors, infinite when t > 0"),
        Note::new("semifield", "semifield iff every generator is torsion over the base, i.e. t = 0"),
    ];
    Ok((result, notes))
}

pub fn eval(inputs: &Inputs, poly: &str, scalar: &str, descriptor: Option<&str>) -> Outcome {
    let terms: Vec<TermJson> = inputs.load(poly, Kind::Poly)?;
    let f = parse_layered_poly(&terms)?;
    let a = inputs.load::<ScalarJson>(scalar, Kind::Scalar)?.parse()?;
    if let Some(d) = descriptor {
        let h = inputs.load::<DescriptorJson>(d, Kind::Descriptor)?.parse()?;
        if !h.contains(&a) {
            return Err(CliError::DescriptorMismatch(format!("scalar {a} is not in {h}")));
        }
        for (c, _) in f.terms() {
            if let Some(v) = c.ghost_map().finite() {
                if !h.value_contains(&Generator::Numeric(v.clone())) {
                    return Err(CliError::DescriptorMismatch(format!("coefficient {c} is not in {h}")));
                }
            }
        }
    }
    let ev = eval_layered_poly(&f, &a)?;
    let result = json!({
        "layer": LayerJson::from(&ev.layer),
        "value": fmt_rat(&ev.value),
        "essential": ev.essential,
        "layer_poly": ev.layer_poly.to_string(),
    });
    let notes = vec![
        Note::new("value", "maximum of the term values at the scalar's value"),
        Note::new("essential", "exponents of the terms attaining that maximum"),
        Note::new("layer", "sum of coefficient layers times powers of the scalar's layer over the essential terms"),
        Note::new("layer_poly", "the layer as a positive polynomial in the scalar's layer"),
    ];
    Ok((result, notes))
}

pub fn closure(inputs: &Inputs, descriptor: &str, scalar: &str, bound: u32) -> Outcome {
    let h = inputs.load::<DescriptorJson>(descriptor, Kind::Descriptor)?.parse()?;
    let a = inputs.load::<ScalarJson>(scalar, Kind::Scalar)?.parse()?;
    let c = uniform_closure(&h, &a)?;
    let value_part = ExtScalar::new(SortElem::one(), a.value().clone())?;
    let layer_part = ExtScalar::new(a.layer().clone(), Generator::Numeric(parse_rat("0").expect("zero parses")))?;
    let value_step = pure_value_ext(&h, &value_part)?;
    let layers = is_layerset_semiring(&h, &a, bound);
    let witness = match &layers.witness {
        Some((x, y)) => json!([LayerJson::from(x), LayerJson::from(y)]),
        None => Value::Null,
    };
    let tie_pairs: Vec<Value> = layers.tie_pairs.iter().map(|(i, j)| json!([i, j])).collect();
    let result = json!({
        "descriptor": DescriptorJson::from(&c),
        "text": c.to_string(),
        "value_extension": value_step.to_string(),
        "layer_extension": match pure_layer_ext(&h, &layer_part) {
            Ok(d) => Value::String(d.to_string()),
            Err(_) => Value::Null,
        },
        "semifield": is_uniform_semifield(&c),
        "layerset": {
            "semiring": layers.is_semiring,
            "layer_in_base": layers.layer_in_base,
            "witness": witness,
            "tie_pairs": tie_pairs,
        },
    });
    let notes = vec![
        Note::new("value_extension", "adjoin only the value, keeping the sort part"),
        Note::new("layer_extension", "adjoin only the layer, keeping the value group"),
        Note::new("descriptor", "smallest uniform layered domain containing the base and the scalar: value step, then layer step"),
        Note::new("semifield", "uniform semifield iff both the sort part and the value group are semifields"),
        Note::new("layerset.semiring", "the layer set of the generated domain is a semiring iff the value lies in the base value group"),
        Note::new("layerset.tie_pairs", "degree pairs up to the bound whose terms can tie in value"),
    ];
    Ok((result, notes))
}

pub fn kernel(inputs: &Inputs, a: &str, b: &str, generator: &str) -> Outcome {
    let a = inputs.load::<PolyJson>(a, Kind::Poly)?.parse_positive()?;
    let b = inputs.load::<PolyJson>(b, Kind::Poly)?.parse_positive()?;
    let g = inputs.load::<GeneratorJson>(generator, Kind::Generator)?.parse()?;
    let diff = a.as_signed() - b.as_signed();
    let result = json!({
        "in_kernel": kernel_contains(&a, &b, &g),
        "difference": diff.to_string(),
        "remainder": diff.rem(g.minimal_poly()).to_string(),
        "generator": g.to_string(),
    });
    let notes = vec![
        Note::new("in_kernel", "a/b is in the kernel of evaluation at the root iff the minimal polynomial divides a - b"),
        Note::new("remainder", "a - b modulo the minimal polynomial"),
    ];
    Ok((result, notes))
}

pub fn semifield(inputs: &Inputs, descriptor: &str) -> Outcome {
    let h = inputs.load::<DescriptorJson>(descriptor, Kind::Descriptor)?.parse()?;
    let result = json!({
        "semifield": is_uniform_semifield(&h),
        "sort_semifield": h.sort.is_semifield(),
        "value_semifield": h.value.is_bipotent_semifield(),
        "text": h.to_string(),
    });
    let notes = vec![
        Note::new("semifield", "both the sort part and the value group must be semifields"),
        Note::new("value_semifield", "semifield iff every value generator is torsion over the base lattice"),
    ];
    Ok((result, notes))
}

pub fn torsion_degree(inputs: &Inputs, arg: &str, exps: &[i64]) -> Outcome {
    let p = presentation(inputs, arg)?;
    let b = exps_from_i64(exps);
    let degree = p.torsion_degree(&b)?;
    let witness = p.divisible_dependence_witness(&b, &[])?;
    let result = json!({
        "degree": degree.to_string(),
        "value": p.monomial_value(&b)?.to_string(),
        "in_torsion_subdomain": p.torsion_subdomain_contains(&b)?,
        "base_element": witness.map(|w| fmt_rat(&w.beta)),
    });
    let notes = vec![
        Note::new("degree", "order of the monomial's class in the quotient by the base, read off the Smith form"),
        Note::new("base_element", "the base element equal to degree times the monomial"),
    ];
    Ok((result, notes))
}

pub fn rank(inputs: &Inputs, arg: &str, over: Option<&str>, sub: Option<&[usize]>) -> Outcome {
    let p = presentation(inputs, arg)?;
    let (rank, over_text): (Degree, String) = match (over, sub) {
        (Some(o), _) => {
            let q = presentation(inputs, o)?;
            let names: Vec<String> = q.generators().iter().map(|g| g.to_string()).collect();
            (p.extension_rank_over(&q)?, format!("[{}]", names.join(", ")))
        }
        (None, Some(s)) => {
            let names: Vec<String> = s.iter().filter_map(|&i| p.generators().get(i)).map(|g| g.to_string()).collect();
            (p.extension_rank(s)?, format!("[{}]", names.join(", ")))
        }
        (None, None) => (p.extension_rank(&[])?, "[]".to_string()),
    };
    let result = json!({"rank": rank.to_string(), "over": over_text});
    let notes = vec![Note::new(
        "rank",
        "index of the smaller exponent lattice: product of invariant factors of the relative Smith form, infinite when a free part remains",
    )];
    Ok((result, notes))
}
