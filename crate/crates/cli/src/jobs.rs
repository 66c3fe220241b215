use std::fmt;
use std::path::PathBuf;

use serde_json::{json, Map, Value};
use zhu_core::context::AlgebraContext;
use num_traits::Zero;
use zhu_core::liealg::automorphism::{eigenspace_decomposition, named_permutation, Automorphism};
use zhu_core::liealg::{build_lie_algebra, parse_type_label, LieAlgebraData};
use zhu_core::linalg::SparseVec;
use zhu_core::rational::{grade_string, parse_grade, parse_q, q_to_i64, to_fraction_string, Grade, Q};
use zhu_core::report::IdentityReport;
use zhu_core::twisted::{
    self, verify_commutator, verify_power_field, verify_twisted_jacobi, verify_weak_associativity, TwistedModule,
};
use zhu_core::voa::{InducedModule, Shapovalov};
use zhu_core::zhu::{default_depth, power_formula, ZhuAlgebra, ZhuClass};

use crate::{Common, Format, Identity, Output};

#[derive(Debug)]
pub enum Failure {
    Validation(String),
    Truncation(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Validation(_) => 1,
            Failure::Truncation(_) => 2,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Validation(s) | Failure::Truncation(s) => f.write_str(s),
        }
    }
}

impl From<zhu_core::Error> for Failure {
    fn from(e: zhu_core::Error) -> Self {
        match e {
            zhu_core::Error::Truncation { .. } | zhu_core::Error::DegreeCap { .. } => Failure::Truncation(e.to_string()),
            other => Failure::Validation(other.to_string()),
        }
    }
}

fn invalid(s: impl Into<String>) -> Failure {
    Failure::Validation(s.into())
}

/// A parsed and validated command line.
pub struct JobSpec {
    pub command: &'static str,
    pub algebra: String,
    pub mu: String,
    pub g: LieAlgebraData,
    pub aut: Automorphism,
    /// The adapted basis needs `T <= 2`; commands on `g` alone work without it.
    context: Result<AlgebraContext, String>,
    pub level: Q,
    pub lambda: Vec<i64>,
    pub depth: Option<String>,
    pub format: Format,
    pub out: Option<PathBuf>,
}

impl JobSpec {
    pub fn new(command: &'static str, c: Common) -> Result<Self, Failure> {
        let (t, r) = parse_type_label(&c.algebra)?;
        let g = build_lie_algebra(t, r)?;
        let perm = named_permutation(&g, &c.mu)?;
        let mut aut = Automorphism::diagram(&g, &perm)?;
        if let Some(e) = &c.e {
            let x = g.parse_element(e)?;
            aut = aut.with_nilpotent(&g, x)?;
        }
        let level = parse_q(&c.level)?;
        if (&level + Q::from_integer(g.roots.dual_coxeter().into())).is_zero() {
            return Err(zhu_core::Error::CriticalLevel.into());
        }
        let context = AlgebraContext::from_parts(g.clone(), aut.clone()).map_err(|e| e.to_string());
        if let Some(d) = &c.depth {
            parse_grade(d)?;
        }
        if c.lambda.iter().any(|&x| x < 0) {
            return Err(invalid(format!("lambda {:?} is not dominant", c.lambda)));
        }
        Ok(Self {
            command,
            algebra: c.algebra,
            mu: c.mu,
            g,
            aut,
            context,
            level,
            lambda: c.lambda,
            depth: c.depth,
            format: c.format,
            out: c.out,
        })
    }

    pub fn cx(&self) -> Result<&AlgebraContext, Failure> {
        self.context.as_ref().map_err(|e| invalid(e.clone()))
    }

    fn header(&self) -> Map<String, Value> {
        let mut m = Map::new();
        m.insert("command".into(), json!(self.command));
        m.insert("algebra".into(), json!(self.algebra));
        m.insert("mu".into(), json!(self.mu));
        m.insert("e".into(), json!(self.g.element_string(&self.aut.e)));
        m.insert("level".into(), json!(to_fraction_string(&self.level)));
        m
    }

    fn json(&self, body: Value) -> Output {
        let mut m = self.header();
        if let Value::Object(b) = body {
            m.extend(b);
        }
        Output::Json(Value::Object(m))
    }

    fn json_only(&self) -> Result<(), Failure> {
        match self.format {
            Format::Json => Ok(()),
            Format::Csv => Err(invalid(format!("{} has no CSV form", self.command))),
        }
    }

    fn int_depth(&self, default: i64) -> Result<i64, Failure> {
        match &self.depth {
            None => Ok(default),
            Some(d) => {
                let g = parse_grade(d)?;
                if !g.is_integer() || g < Grade::from_integer(0) {
                    return Err(invalid(format!("depth {d} must be a non-negative integer here")));
                }
                Ok(g.to_integer())
            }
        }
    }

    fn grade_depth(&self, default: Grade) -> Result<Grade, Failure> {
        let g = match &self.depth {
            None => default,
            Some(d) => parse_grade(d)?,
        };
        if g < Grade::from_integer(0) {
            return Err(invalid("depth must be non-negative"));
        }
        Ok(g)
    }

    /// `λ` with `rank` coordinates; empty means zero.
    fn lambda_of_rank(&self, rank: usize) -> Result<Vec<i64>, Failure> {
        if self.lambda.is_empty() {
            return Ok(vec![0; rank]);
        }
        if self.lambda.len() != rank {
            return Err(invalid(format!("lambda needs {rank} coordinates, got {}", self.lambda.len())));
        }
        Ok(self.lambda.clone())
    }

    fn twisted_lambda(&self) -> Result<Vec<i64>, Failure> {
        self.lambda_of_rank(self.cx()?.ab.simple.len())
    }

    fn integral_level(&self) -> Result<i64, Failure> {
        q_to_i64(&self.level)
            .filter(|l| *l >= 0)
            .ok_or_else(|| invalid("this command needs a non-negative integral level"))
    }
}

fn csv_table(header: &[&str], rows: Vec<Vec<String>>) -> Result<Output, Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let err = |e: csv::Error| invalid(e.to_string());
    w.write_record(header).map_err(err)?;
    for r in rows {
        w.write_record(&r).map_err(err)?;
    }
    let bytes = w.into_inner().map_err(|e| invalid(e.to_string()))?;
    Ok(Output::Csv(String::from_utf8(bytes).map_err(|e| invalid(e.to_string()))?))
}

fn terms_json(m: &InducedModule, v: &SparseVec) -> Value {
    json!(v.iter().map(|(i, c)| json!([m.state_label(i), to_fraction_string(c)])).collect::<Vec<_>>())
}

fn class_json(z: &ZhuAlgebra, c: &ZhuClass) -> Value {
    json!({
        "class": z.class_string(c),
        "reduced": terms_json(z.v(), &c.reduced),
    })
}

pub fn build_algebra(spec: &JobSpec) -> Result<Output, Failure> {
    spec.json_only()?;
    let mut body = json!({
        "lie_algebra": spec.g.to_json(),
        "automorphism": spec.aut.to_json(&spec.g),
    });
    if let Ok(cx) = spec.cx() {
        let ab = &cx.ab;
        let adapted: Vec<Value> = (0..ab.dim())
            .map(|a| {
                json!({
                    "label": ab.label(a),
                    "class": ab.class(a),
                    "chevalley": cx.g.element_string(&ab.to_chevalley(&SparseVec::unit(a))),
                })
            })
            .collect();
        body["adapted_basis"] = json!(adapted);
        body["fixed_dim"] = json!(ab.fixed.len());
    }
    Ok(spec.json(body))
}

pub fn eigen_decomp(spec: &JobSpec) -> Result<Output, Failure> {
    spec.json_only()?;
    let d = eigenspace_decomposition(&spec.g, &spec.aut);
    Ok(spec.json(json!({ "decomposition": d.to_json() })))
}

fn zhu_algebra(spec: &JobSpec) -> Result<ZhuAlgebra, Failure> {
    let depth = spec.int_depth(default_depth(&spec.level))?;
    Ok(ZhuAlgebra::new(spec.cx()?.ab.clone(), spec.level.clone(), Some(depth))?)
}

pub fn zhu_product(spec: &JobSpec, u: &str, v: &str) -> Result<Output, Failure> {
    spec.json_only()?;
    let z = zhu_algebra(spec)?;
    let (x, y) = (spec.cx()?.parse_state(z.v(), u)?, spec.cx()?.parse_state(z.v(), v)?);
    let p = z.reduce(&z.star(&x, &y)?)?;
    Ok(spec.json(json!({
        "depth": z.depth,
        "u": z.v().vector_string(&x),
        "v": z.v().vector_string(&y),
        "product": class_json(&z, &p),
    })))
}

pub fn zhu_power(spec: &JobSpec, k: usize, x: Option<&str>) -> Result<Output, Failure> {
    spec.json_only()?;
    let cx = spec.cx()?;
    let depth = spec.int_depth(default_depth(&spec.level).max(k as i64 + 1))?;
    let z = ZhuAlgebra::new(cx.ab.clone(), spec.level.clone(), Some(depth))?;
    let g = match x {
        Some(s) => cx.adapted(s)?,
        None => cx.theta_zero_vector(),
    };
    let ig = z.reduce(&z.i_vector(&g)?)?;
    // the closed formula applies to e_θ with e = f_θ in sl_2
    let formula = cx.g.type_label() == "A1" && cx.aut.e == cx.g.lowest_root_vector() && g == cx.theta_vector();
    let mut powers = Vec::new();
    let mut all = true;
    for j in 1..=k {
        let p = z.power(&ig, j)?;
        let mut entry = Map::new();
        entry.insert("k".into(), json!(j));
        if let Value::Object(c) = class_json(&z, &p) {
            entry.extend(c);
        }
        if formula {
            let coeffs = power_formula(&spec.level, j);
            let mut rhs = SparseVec::new();
            for (i, c) in coeffs.iter().enumerate() {
                rhs.add_scaled(&z.current_power(g.indices().next().unwrap_or(0), i)?, c);
            }
            let ok = z.reduce(&rhs)?.reduced == p.reduced;
            all &= ok;
            entry.insert(
                "formula_coefficients".into(),
                json!(coeffs.iter().map(to_fraction_string).collect::<Vec<_>>()),
            );
            entry.insert("matches_formula".into(), json!(ok));
        }
        powers.push(Value::Object(entry));
    }
    let mut body = json!({
        "depth": depth,
        "x": cx.g.element_string(&cx.ab.to_chevalley(&g)),
        "i_x": class_json(&z, &ig),
        "powers": powers,
    });
    if formula {
        body["matches_formula"] = json!(all);
    }
    Ok(spec.json(body))
}

pub fn zhu_dims(spec: &JobSpec) -> Result<Output, Failure> {
    let z = zhu_algebra(spec)?;
    let dims = z.quotient_dims()?;
    match spec.format {
        Format::Csv => csv_table(
            &["max_weight", "dim"],
            dims.iter().enumerate().map(|(n, d)| vec![n.to_string(), d.to_string()]).collect(),
        ),
        Format::Json => Ok(spec.json(json!({
            "depth": z.depth,
            "o_span_dim": z.o_span_dim()?,
            "quotient_dims": dims,
        }))),
    }
}

pub fn map_i_check(spec: &JobSpec, k: usize) -> Result<(Output, bool), Failure> {
    let z = zhu_algebra(spec)?;
    let rows = z.map_i_span_dims(k)?;
    let ok = rows.iter().all(|(_, got, want)| got == want);
    let out = match spec.format {
        Format::Csv => csv_table(
            &["degree", "span_dim", "pbw_dim"],
            rows.iter().map(|(d, g, w)| vec![d.to_string(), g.to_string(), w.to_string()]).collect(),
        )?,
        Format::Json => spec.json(json!({
            "depth": z.depth,
            "degrees": rows.iter().map(|(d, g, w)| json!({"degree": d, "span_dim": g, "pbw_dim": w})).collect::<Vec<_>>(),
            "injective": ok,
        })),
    };
    Ok((out, ok))
}

fn dims_output(spec: &JobSpec, dims: &[(Grade, usize)], extra: Value) -> Result<Output, Failure> {
    let t = spec.cx()?.order() as i64;
    match spec.format {
        Format::Csv => csv_table(
            &["weight_numerator", "T", "dim"],
            dims.iter()
                .map(|(d, n)| vec![(*d * Grade::from_integer(t)).to_integer().to_string(), t.to_string(), n.to_string()])
                .collect(),
        ),
        Format::Json => {
            let mut body = json!({
                "lambda": spec.lambda,
                "graded_dims": dims.iter().map(|(d, n)| json!([grade_string(*d), n])).collect::<Vec<_>>(),
            });
            if let (Value::Object(b), Value::Object(e)) = (&mut body, extra) {
                b.extend(e);
            }
            Ok(spec.json(body))
        }
    }
}

pub fn graded_dims(spec: &JobSpec, simple: bool) -> Result<Output, Failure> {
    let cx = spec.cx()?;
    let lambda = spec.lambda_of_rank(cx.g.rank())?;
    let depth = spec.int_depth(2)?;
    let m = if lambda.iter().all(|&x| x == 0) {
        cx.vacuum_module(&spec.level, depth)?
    } else {
        cx.verma(&lambda, &spec.level, Grade::from_integer(depth))?
    };
    let dims = if simple {
        Shapovalov::new(&m).radical()?.quotient_dims()
    } else {
        m.graded_dims()
    };
    dims_output(spec, &dims, json!({ "depth": depth, "simple": simple }))
}

pub fn twisted_graded_dims(spec: &JobSpec, simple: bool) -> Result<Output, Failure> {
    let cx = spec.cx()?;
    let lambda = spec.twisted_lambda()?;
    let depth = spec.grade_depth(Grade::from_integer(2))?;
    let m = cx.twisted_verma(&lambda, &spec.level, depth)?;
    let dims = if simple {
        Shapovalov::new(&m).radical()?.quotient_dims()
    } else {
        m.graded_dims()
    };
    dims_output(
        spec,
        &dims,
        json!({ "depth": grade_string(depth), "simple": simple, "order_T": cx.order() }),
    )
}

pub fn classify(spec: &JobSpec, bound: i64) -> Result<Output, Failure> {
    if bound < 0 {
        return Err(invalid("the weight bound must be non-negative"));
    }
    let depth = spec.grade_depth(Grade::from_integer(1))?;
    let list = twisted::classify(spec.cx()?, &spec.level, depth, bound)?;
    let adm = twisted::admissible_weights(&list);
    match spec.format {
        Format::Csv => csv_table(
            &["lambda", "omega_dim", "singular_vanishes", "theta_power_vanishes", "admissible"],
            list.iter()
                .map(|a| {
                    vec![
                        a.lambda.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "),
                        a.omega_dim.to_string(),
                        a.singular_vanishes.to_string(),
                        a.theta_power_vanishes.to_string(),
                        a.admissible.to_string(),
                    ]
                })
                .collect(),
        ),
        Format::Json => Ok(spec.json(json!({
            "depth": grade_string(depth),
            "bound": bound,
            "certificates": serde_json::to_value(&list).map_err(|e| invalid(e.to_string()))?,
            "admissible": adm,
        }))),
    }
}

pub struct VerifyRequest {
    pub identity: Identity,
    pub u: Option<String>,
    pub v: Option<String>,
    pub w: Option<String>,
    pub power: Option<usize>,
    pub window: i64,
}

fn identity_name(i: Identity) -> &'static str {
    match i {
        Identity::Jacobi => "jacobi",
        Identity::TwistedJacobi => "twisted-jacobi",
        Identity::WeakAssoc => "weak-assoc",
        Identity::Commutator => "commutator",
        Identity::LieRelation => "lie-relation",
        Identity::PowerField => "power-field",
        Identity::Ideal => "ideal",
        Identity::Associativity => "associativity",
    }
}

/// `u` given on the command line, otherwise every current `a(-1)1`.
fn operands(spec: &JobSpec, m: &InducedModule, given: &Option<String>) -> Result<Vec<SparseVec>, Failure> {
    match given {
        Some(s) => Ok(vec![spec.cx()?.parse_state(m, s)?]),
        None => (0..spec.cx()?.ab.dim())
            .map(|a| Ok(m.act(a, Grade::from_integer(-1), &m.vacuum())?))
            .collect(),
    }
}

/// States of weight at most one, the default triples for Zhu identities.
fn low_states(spec: &JobSpec, m: &InducedModule, given: &Option<String>) -> Result<Vec<SparseVec>, Failure> {
    match given {
        Some(s) => Ok(vec![spec.cx()?.parse_state(m, s)?]),
        None => Ok(m.graded_piece(Grade::from_integer(0))
            .into_iter()
            .chain(m.graded_piece(Grade::from_integer(1)))
            .map(SparseVec::unit)
            .collect()),
    }
}

pub fn verify(spec: &JobSpec, req: &VerifyRequest) -> Result<(Output, bool), Failure> {
    spec.json_only()?;
    if req.window < 1 {
        return Err(invalid("window must be at least 1"));
    }
    let mut reports: Vec<IdentityReport> = Vec::new();
    let mut meta = Map::new();
    match req.identity {
        Identity::Jacobi => {
            let depth = spec.int_depth(2)?;
            let tm = TwistedModule::vacuum(spec.cx()?, &spec.level, depth.max(2))?;
            let ws = tm.basis_states(Grade::from_integer((depth - 1).max(0)));
            let us = operands(spec, tm.v(), &req.u)?;
            let vs = operands(spec, tm.v(), &req.v)?;
            for u in &us {
                for v in &vs {
                    reports.push(verify_twisted_jacobi(&tm, u, v, &ws, req.window)?);
                }
            }
            meta.insert("depth".into(), json!(depth.to_string()));
        }
        Identity::TwistedJacobi | Identity::Commutator | Identity::WeakAssoc | Identity::PowerField => {
            let depth = spec.grade_depth(Grade::from_integer(2))?;
            let lambda = spec.twisted_lambda()?;
            let source = (depth - Grade::from_integer(1)).max(Grade::from_integer(0));
            if req.identity == Identity::PowerField {
                let l = spec.integral_level()?;
                let p = req.power.unwrap_or(l as usize + 1);
                let tm = TwistedModule::verma(spec.cx()?, &lambda, &spec.level, depth, p.max(3) as i64)?;
                let f = match &req.u {
                    Some(s) => spec.cx()?.adapted_index(s)?,
                    None => {
                        let t = spec.cx()?.theta_vector();
                        let mut it = t.indices();
                        match (it.next(), it.next()) {
                            (Some(i), None) => i,
                            _ => return Err(invalid("e_theta is not an adapted basis vector; pass --u")),
                        }
                    }
                };
                meta.insert("power".into(), json!(p));
                reports.push(verify_power_field(&tm, f, p, &tm.basis_states(source), req.window)?);
            } else {
                let tm = TwistedModule::verma(spec.cx()?, &lambda, &spec.level, depth, 3)?;
                let ws = tm.basis_states(source);
                let us = operands(spec, tm.v(), &req.u)?;
                let vs = operands(spec, tm.v(), &req.v)?;
                for u in &us {
                    for v in &vs {
                        let r = match req.identity {
                            Identity::TwistedJacobi => verify_twisted_jacobi(&tm, u, v, &ws, req.window)?,
                            Identity::Commutator => verify_commutator(&tm, u, v, &ws, req.window)?,
                            _ => verify_weak_associativity(&tm, u, v, &ws, req.window)?,
                        };
                        reports.push(r);
                    }
                }
            }
            meta.insert("depth".into(), json!(grade_string(depth)));
            meta.insert("lambda".into(), json!(lambda));
        }
        Identity::LieRelation | Identity::Ideal | Identity::Associativity => {
            let z = zhu_algebra(spec)?;
            if req.identity == Identity::LieRelation {
                let us = operands(spec, z.v(), &req.u)?;
                let vs = operands(spec, z.v(), &req.v)?;
                for u in &us {
                    for v in &vs {
                        reports.push(z.verify_lie_relation(u, v)?);
                    }
                }
            } else {
                let xs = low_states(spec, z.v(), &req.u)?;
                let ys = low_states(spec, z.v(), &req.v)?;
                let ws = low_states(spec, z.v(), &req.w)?;
                for x in &xs {
                    for y in &ys {
                        for w in &ws {
                            reports.push(if req.identity == Identity::Ideal {
                                z.verify_ideal(x, y, w)?
                            } else {
                                z.verify_associativity(x, y, w)?
                            });
                        }
                    }
                }
            }
            meta.insert("depth".into(), json!(z.depth.to_string()));
        }
    }
    let equal = reports.iter().all(|r| r.equal);
    let checked: usize = reports.iter().map(|r| r.checked).sum();
    let excluded: usize = reports.iter().map(|r| r.excluded).sum();
    let failures: Vec<Value> = reports.iter().filter(|r| !r.equal).map(|r| r.to_json()).collect();
    meta.insert("identity".into(), json!(identity_name(req.identity)));
    meta.insert("window".into(), json!(req.window));
    meta.insert("instances".into(), json!(reports.len()));
    meta.insert("checked".into(), json!(checked));
    meta.insert("excluded".into(), json!(excluded));
    meta.insert("equal".into(), json!(equal));
    meta.insert("failures".into(), json!(failures));
    if reports.len() == 1 {
        meta.insert("report".into(), reports[0].to_json());
    }
    Ok((spec.json(Value::Object(meta)), equal))
}
