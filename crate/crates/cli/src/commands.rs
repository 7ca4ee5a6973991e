//! The workbench checks. Each returns a [`CheckReport`]; an `Err` means the
//! request itself cannot be evaluated (exit code 3).

use std::fmt;
use std::str::FromStr;

use degen_core::complex::{build_c, build_k, check_quasi_iso, Bounds, ComplexError};
use degen_core::deligne::{
    conjecture_a_check, deligne_group, integral_orders, z_map, DeligneError, RegulatorDatum,
    Verdict,
};
use degen_core::lfun::{leading_laurent, local_factor, ord_at, strip_s};
use degen_core::linalg::{rank, Matrix};
use degen_core::strata::validate;
use degen_core::{DeligneGroup, GroupOrder, PlaceDatum, RatMatrix, Q};
use num_traits::Signed;
use thiserror::Error;

use crate::bundle::{Fibre, Instance, Params};
use crate::report::{fmt_leading, CheckReport, ReportRow};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CommandError {
    #[error("{0}")]
    Input(String),
}

/// The named conjecture checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Conjecture {
    A1,
    A2,
    B1FF,
    B2FF,
    CFF,
}

impl Conjecture {
    pub const ALL: [Conjecture; 5] = [
        Conjecture::A1,
        Conjecture::A2,
        Conjecture::B1FF,
        Conjecture::B2FF,
        Conjecture::CFF,
    ];
}

impl fmt::Display for Conjecture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Conjecture::A1 => "A1",
            Conjecture::A2 => "A2",
            Conjecture::B1FF => "B1FF",
            Conjecture::B2FF => "B2FF",
            Conjecture::CFF => "CFF",
        })
    }
}

impl FromStr for Conjecture {
    type Err = CommandError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Conjecture::ALL
            .into_iter()
            .find(|c| c.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| {
                CommandError::Input(format!(
                    "unknown check {s:?}; expected one of A1, A2, B1FF, B2FF, CFF"
                ))
            })
    }
}

/// Runs `job` on every fibre on its own thread and returns the results in
/// name order.
fn per_fibre<T: Send>(inst: &Instance, job: impl Fn(&str, &Fibre) -> T + Sync) -> Vec<T> {
    let job = &job;
    std::thread::scope(|s| {
        let handles: Vec<_> = inst
            .fibres
            .iter()
            .map(|(n, f)| s.spawn(move || job(n, f)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("check worker panicked"))
            .collect()
    })
}

fn params(inst: &Instance) -> Result<Params, CommandError> {
    inst.params
        .ok_or_else(|| CommandError::Input("the bundle has no params".into()))
}

pub fn cmd_validate(inst: &Instance) -> CheckReport {
    let mut report = CheckReport::new(
        "validate: gamma^2 = 0, rho^2 = 0, gamma rho + rho gamma = 0 on every fibre",
    );
    for row in per_fibre(inst, |name, f| {
        let v = validate(&f.descriptor);
        let verdict = if v.passes() {
            Verdict::Pass
        } else {
            Verdict::Fail
        };
        ReportRow::new(
            "validate",
            name,
            verdict,
            format!(
                "{} identities checked, {} failures",
                v.checks(),
                v.failures().len()
            ),
        )
        .with_witnesses(v.failures().iter().map(ToString::to_string))
    }) {
        report.push(row);
    }
    report
}

/// `d_v = -ord_{s=a} L_v(s)`.
pub fn local_pole_order(place: &PlaceDatum, field_q: u64, a: i64) -> i64 {
    -ord_at(&local_factor(place), field_q, a).expect("local factors are nonzero")
}

/// The Deligne group of a fibre, or the row explaining why it is unavailable.
fn group_or_row(
    check: &str,
    name: &str,
    f: &Fibre,
    q: i64,
    a: i64,
) -> Result<Result<DeligneGroup, ReportRow>, CommandError> {
    match deligne_group(&f.descriptor, q, a, f.higher_chow_dim) {
        Ok(g) => Ok(Ok(g)),
        Err(DeligneError::BadDegree { .. } | DeligneError::NegativeCodim { .. }) => {
            Err(CommandError::Input(format!(
                "Deligne cohomology is undefined for (q, a) = ({q}, {a})"
            )))
        }
        Err(e @ DeligneError::MissingHigherChow { .. }) => Ok(Err(ReportRow::new(
            check,
            name,
            Verdict::Inconclusive,
            format!("{e}; set fibres.{name}.higher_chow_dim"),
        ))),
        Err(e) => Ok(Err(ReportRow::new(
            check,
            name,
            Verdict::Fail,
            "the fibre data do not define the group",
        )
        .with_witness(e.to_string()))),
    }
}

pub fn cmd_dim_theorem(
    inst: &Instance,
    q: Option<i64>,
    a: Option<i64>,
) -> Result<CheckReport, CommandError> {
    let p = inst.params;
    let q = q
        .or(p.map(|p| p.q_cohomological))
        .ok_or_else(|| CommandError::Input("no --q and no params".into()))?;
    let a = a
        .or(p.map(|p| p.a))
        .ok_or_else(|| CommandError::Input("no --a and no params".into()))?;
    let field_q = params(inst)?.field_q;
    let mut report = CheckReport::new(format!(
        "dim-theorem: dim H^{q}_D(X_v, Q({})) = -ord_(s={a}) L_v(s)",
        q - a
    ));
    for row in per_fibre(inst, |name, f| {
        let g = match group_or_row("dim-theorem", name, f, q, a)? {
            Ok(g) => g,
            Err(row) => return Ok(row),
        };
        let Some(place) = inst.places.get(name) else {
            return Ok(ReportRow::new(
                "dim-theorem",
                name,
                Verdict::Inconclusive,
                format!("dim = {}; no place datum", g.dim()),
            ));
        };
        let d = local_pole_order(place, field_q, a);
        let verdict = if d == g.dim() as i64 {
            Verdict::Pass
        } else {
            Verdict::Fail
        };
        let value = format!(
            "dim = {}, d_v = {d}, L_v = {}",
            g.dim(),
            local_factor(place)
        );
        let row = ReportRow::new("dim-theorem", name, verdict, value);
        Ok(if verdict == Verdict::Fail {
            row.with_witness(format!("{} ≠ {d}", g.dim()))
        } else {
            row
        })
    }) {
        report.push(row?);
    }
    Ok(report)
}

fn regulator_at(inst: &Instance, name: &str, ambient: usize) -> Option<RegulatorDatum<Q>> {
    let m = inst.motivic.as_ref()?;
    match m.regulators.get(name) {
        Some(r) => Some(r.clone()),
        None if m.rank == 0 => {
            Some(RegulatorDatum::new(0, Matrix::zeros(ambient, 0)).expect("empty regulator"))
        }
        None => None,
    }
}

/// `z^a_v` in ambient coordinates; `Ok(None)` when there is nothing to add.
fn z_at(inst: &Instance, name: &str, f: &Fibre, a: i64) -> Result<Option<RatMatrix>, String> {
    let Some(m) = inst.motivic.as_ref() else {
        return Ok(None);
    };
    if m.b_rank == 0 {
        return Ok(None);
    }
    let Some(cyc) = m.cycle_class.get(name) else {
        return Err(format!("b_rank = {} but no cycle-class datum", m.b_rank));
    };
    z_map(&f.descriptor, a, cyc)
        .map(Some)
        .map_err(|e| format!("z-map: {e}"))
}

fn conjecture_a(inst: &Instance, which: Conjecture) -> Result<CheckReport, CommandError> {
    let p = params(inst)?;
    let (q, a) = (p.q_cohomological, p.a);
    let check = which.to_string();
    let mut report = CheckReport::new(format!(
        "{which}: the regulator image is a full sublattice of H^{q}_D(X_v, Q({}))",
        q - a
    ));
    let boundary = q - 2 * a == 1;
    if boundary != (which == Conjecture::A2) {
        report.push(ReportRow::new(
            &check,
            "-",
            Verdict::Inconclusive,
            format!(
                "{which} concerns q - 2a {}; the bundle has q - 2a = {}",
                if boundary { "> 1" } else { "= 1" },
                q - 2 * a
            ),
        ));
        return Ok(report);
    }
    if inst.motivic.is_none() {
        report.push(ReportRow::new(
            &check,
            "-",
            Verdict::Inconclusive,
            "no motivic data",
        ));
        return Ok(report);
    }
    for row in per_fibre(inst, |name, f| {
        let g = match group_or_row(&check, name, f, q, a)? {
            Ok(g) => g,
            Err(row) => return Ok(row),
        };
        let Some(reg) = regulator_at(inst, name, g.ambient_dim()) else {
            return Ok(ReportRow::new(
                &check,
                name,
                Verdict::Inconclusive,
                "no regulator at this place",
            ));
        };
        let z = if boundary {
            match z_at(inst, name, f, a) {
                Ok(z) => z,
                Err(e) if e.starts_with("z-map") => {
                    return Ok(ReportRow::new(
                        &check,
                        name,
                        Verdict::Fail,
                        "cycle-class data rejected",
                    )
                    .with_witness(e))
                }
                Err(e) => return Ok(ReportRow::new(&check, name, Verdict::Inconclusive, e)),
            }
        } else {
            None
        };
        let r = match conjecture_a_check(&g, &reg, z.as_ref()) {
            Ok(r) => r,
            Err(e) => {
                return Ok(
                    ReportRow::new(&check, name, Verdict::Fail, "regulator data rejected")
                        .with_witness(e.to_string()),
                )
            }
        };
        let mut value = format!("image rank {} of dim {}", r.rank, r.dim);
        if z.is_some() {
            value.push_str(" (regulator and z-map)");
        }
        let mut row = ReportRow::new(&check, name, r.verdict, value);
        for (label, c, rr, v) in &r.outside_kernel {
            row = row.with_witness(format!(
                "{label} column {c} is not in ker i*i_*: entry {rr} of i*i_* v is {v}"
            ));
        }
        if r.verdict == Verdict::Fail && r.outside_kernel.is_empty() {
            let basis: Vec<String> = r
                .image_basis
                .iter()
                .map(|b| format!("({})", b.join(", ")))
                .collect();
            row = row.with_witness(format!(
                "image in quotient coordinates spans {} < {}: basis [{}]",
                r.rank,
                r.dim,
                basis.join(", ")
            ));
        }
        Ok(row)
    }) {
        report.push(row?);
    }
    Ok(report)
}

/// Per-place data shared by the global checks.
struct Local {
    name: String,
    group: DeligneGroup,
    d_v: i64,
}

/// Collects the Deligne groups and pole orders over `S`, or rows explaining
/// what is missing.
fn locals(
    inst: &Instance,
    check: &str,
    p: Params,
) -> Result<Result<Vec<Local>, Vec<ReportRow>>, CommandError> {
    let (q, a) = (p.q_cohomological, p.a);
    let mut out = Vec::new();
    let mut missing = Vec::new();
    for (name, f) in &inst.fibres {
        match group_or_row(check, name, f, q, a)? {
            Err(row) => missing.push(row),
            Ok(group) => match inst.places.get(name) {
                None => missing.push(ReportRow::new(
                    check,
                    name.as_str(),
                    Verdict::Inconclusive,
                    "no place datum",
                )),
                Some(pl) => out.push(Local {
                    name: name.clone(),
                    group,
                    d_v: local_pole_order(pl, p.field_q, a),
                }),
            },
        }
    }
    Ok(if missing.is_empty() {
        Ok(out)
    } else {
        Err(missing)
    })
}

fn eq_row(check: &str, verdict_if: bool, value: String, witness: String) -> ReportRow {
    let row = ReportRow::new(
        check,
        "-",
        if verdict_if {
            Verdict::Pass
        } else {
            Verdict::Fail
        },
        value,
    );
    if verdict_if {
        row
    } else {
        row.with_witness(witness)
    }
}

/// Checks that `⊕_v r_v` (with `z_S` in the boundary case) is a bijection
/// onto `⊕_v H_D`.
fn bijection_row(
    inst: &Instance,
    check: &str,
    locals: &[Local],
    a: i64,
    with_z: bool,
) -> ReportRow {
    let m = inst.motivic.as_ref().expect("checked by caller");
    let total: usize = locals.iter().map(|l| l.group.dim()).sum();
    let cols = m.rank + if with_z { m.b_rank } else { 0 };
    let mut stacked = RatMatrix::zeros(0, cols);
    for l in locals {
        let Some(reg) = regulator_at(inst, &l.name, l.group.ambient_dim()) else {
            return ReportRow::new(
                check,
                "-",
                Verdict::Inconclusive,
                format!("no regulator at {}", l.name),
            );
        };
        let mut block = reg.matrix().clone();
        if with_z {
            let f = &inst.fibres[&l.name];
            let z = match z_at(inst, &l.name, f, a) {
                Ok(Some(z)) => z,
                Ok(None) => RatMatrix::zeros(l.group.ambient_dim(), 0),
                Err(e) if e.starts_with("z-map") => {
                    return ReportRow::new(check, "-", Verdict::Fail, "cycle-class data rejected")
                        .with_witness(format!("{}: {e}", l.name))
                }
                Err(e) => {
                    return ReportRow::new(
                        check,
                        "-",
                        Verdict::Inconclusive,
                        format!("{}: {e}", l.name),
                    )
                }
            };
            block = match block.hstack(&z) {
                Ok(b) => b,
                Err(e) => {
                    return ReportRow::new(check, "-", Verdict::Fail, "shape mismatch")
                        .with_witness(format!("{}: {e}", l.name))
                }
            };
        }
        let coords = match l.group.quotient_coords(&block) {
            Ok(c) => c,
            Err(e) => {
                return ReportRow::new(
                    check,
                    "-",
                    Verdict::Fail,
                    "map does not land in the Deligne group",
                )
                .with_witness(format!("{}: {e}", l.name))
            }
        };
        stacked = stacked.vstack(&coords).expect("column counts agree");
    }
    let r = rank(&stacked);
    let value = format!("map {} -> {}, rank {}", cols, total, r);
    let ok = cols == total && r == total;
    let witness = if cols != total {
        format!("source has dimension {cols} but the target has dimension {total}")
    } else {
        format!("rank {r} < {total}")
    };
    eq_row(check, ok, value, witness)
}

fn conjecture_b(inst: &Instance, which: Conjecture) -> Result<CheckReport, CommandError> {
    let p = params(inst)?;
    let (q, a) = (p.q_cohomological, p.a);
    let boundary = which == Conjecture::B2FF;
    let check = which.to_string();
    let mut report = CheckReport::new(format!(
        "{which}: S-integral order, regulator and leading value, S = {{{}}}",
        names(inst)
    ));
    report.note("verdicts are conditional on the declared motivic ranks, which are not verified against a model over O_S");
    if (q - 2 * a == 1) != boundary {
        report.push(ReportRow::new(
            &check,
            "-",
            Verdict::Inconclusive,
            format!(
                "{which} concerns q - 2a {}; the bundle has q - 2a = {}",
                if boundary { "= 1" } else { "> 1" },
                q - 2 * a
            ),
        ));
        return Ok(report);
    }
    let Some(global) = inst.global.as_ref() else {
        report.push(ReportRow::new(
            &check,
            "-",
            Verdict::Inconclusive,
            "no global L-function",
        ));
        return Ok(report);
    };
    let Some(m) = inst.motivic.as_ref() else {
        report.push(ReportRow::new(
            &check,
            "-",
            Verdict::Inconclusive,
            "no motivic data",
        ));
        return Ok(report);
    };
    let locals = match locals(inst, &check, p)? {
        Ok(l) => l,
        Err(rows) => {
            rows.into_iter().for_each(|r| report.push(r));
            return Ok(report);
        }
    };
    let places: Vec<PlaceDatum> = locals
        .iter()
        .map(|l| inst.places[&l.name].clone())
        .collect();
    let l_s = strip_s(global, &places);
    let sum_d: i64 = locals.iter().map(|l| l.d_v).sum();
    report.details.push(format!("L_S = {l_s}"));
    for l in &locals {
        report.details.push(format!(
            "  {}: dim H_D = {}, d_v = {}",
            l.name,
            l.group.dim(),
            l.d_v
        ));
    }
    let ord = ord_at(&l_s, p.field_q, a).map_err(|e| CommandError::Input(format!("L_S: {e}")))?;
    let rank_name = if boundary {
        format!("dim CH^{}(X_S, 1)", a + 1)
    } else {
        format!("dim CH^{}(X_S, {})", q - a, q - 2 * a)
    };
    report.push(eq_row(
        &format!("{check}.ord"),
        ord == m.rank as i64,
        format!("ord_(s={a}) L_S = {ord}, declared {rank_name} = {}", m.rank),
        format!("{ord} ≠ {}", m.rank),
    ));
    if boundary {
        let ord1 =
            ord_at(&l_s, p.field_q, a + 1).map_err(|e| CommandError::Input(format!("L_S: {e}")))?;
        report.push(eq_row(
            &format!("{check}.tate"),
            ord1 == -(m.b_rank as i64),
            format!("ord_(s={}) L_S = {ord1}, -dim B^{a} = -{}", a + 1, m.b_rank),
            format!("{ord1} ≠ -{}", m.b_rank),
        ));
    }
    let mut row = bijection_row(inst, &format!("{check}.regulator"), &locals, a, boundary);
    row.check = format!("{check}.regulator");
    report.push(row);
    let lv = leading_laurent(&l_s, p.field_q, a)
        .map_err(|e| CommandError::Input(format!("L_S: {e}")))?;
    let expected = if boundary { m.rank as i64 } else { sum_d };
    let what = if boundary {
        format!("{rank_name} = {expected}")
    } else {
        format!("sum d_v = {expected}")
    };
    report.push(eq_row(
        &format!("{check}.leading"),
        lv.logpow == expected,
        format!(
            "L_S*({a}) = {}, log exponent expected {what}",
            fmt_leading(&lv)
        ),
        format!("exponent {} ≠ {expected}", lv.logpow),
    ));
    Ok(report)
}

fn names(inst: &Instance) -> String {
    inst.fibres.keys().cloned().collect::<Vec<_>>().join(", ")
}

fn conjecture_c(inst: &Instance) -> Result<CheckReport, CommandError> {
    let p = params(inst)?;
    let (q, a) = (p.q_cohomological, p.a);
    let mut report = CheckReport::new(format!(
        "CFF: Λ*({a}) = ±(c/b) log(q)^ord for (q, a) = ({q}, {a})"
    ));
    let Some(global) = inst.global.as_ref() else {
        report.push(ReportRow::new(
            "CFF",
            "-",
            Verdict::Inconclusive,
            "no global L-function",
        ));
        return Ok(report);
    };
    let lv = global
        .leading_value(a)
        .map_err(|e| CommandError::Input(format!("global: {e}")))?;
    report.details.push(format!("Λ = {}", global.twisted()));
    match inst.motivic.as_ref() {
        None => report.push(ReportRow::new(
            "CFF.ord",
            "-",
            Verdict::Inconclusive,
            "no motivic data",
        )),
        Some(m) => {
            let (expected, what) = if q - 2 * a > 1 {
                (
                    m.rank as i64,
                    format!("dim CH^{}(X, {}) = {}", q - a, q - 2 * a, m.rank),
                )
            } else {
                (-(m.b_rank as i64), format!("-dim B^{a} = -{}", m.b_rank))
            };
            report.push(eq_row(
                "CFF.ord",
                lv.order == expected,
                format!("ord_(s={a}) Λ = {}, {what}", lv.order),
                format!("{} ≠ {expected}", lv.order),
            ));
        }
    }
    let Some(map) = inst.integral.as_ref() else {
        report.push(ReportRow::new(
            "CFF.value",
            "-",
            Verdict::Inconclusive,
            format!("Λ*({a}) = {}; no integral data", fmt_leading(&lv)),
        ));
        return Ok(report);
    };
    let (b, c) = integral_orders(map).map_err(|e| CommandError::Input(format!("integral: {e}")))?;
    let (GroupOrder::Finite(b), GroupOrder::Finite(c)) = (&b, &c) else {
        let row = ReportRow::new(
            "CFF.value",
            "-",
            Verdict::Fail,
            format!("Λ*({a}) = {}", fmt_leading(&lv)),
        )
        .with_witness(format!(
            "kernel order {}, cokernel order {}: both must be finite",
            order(&b),
            order(&c)
        ));
        report.push(row);
        return Ok(report);
    };
    let ratio = Q::new(c.clone(), b.clone());
    let ok = lv.coeff.abs() == ratio && lv.logpow == lv.order;
    report.push(eq_row(
        "CFF.value",
        ok,
        format!(
            "Λ*({a}) = {}, b = {b}, c = {c}, c/b = {ratio}",
            fmt_leading(&lv)
        ),
        format!(
            "|{}| ≠ {ratio} or exponent {} ≠ {}",
            lv.coeff, lv.logpow, lv.order
        ),
    ));
    Ok(report)
}

fn order(o: &GroupOrder) -> String {
    match o {
        GroupOrder::Finite(n) => n.to_string(),
        GroupOrder::Infinite => "infinite".into(),
    }
}

pub fn cmd_conjecture(inst: &Instance, which: Conjecture) -> Result<CheckReport, CommandError> {
    match which {
        Conjecture::A1 | Conjecture::A2 => conjecture_a(inst, which),
        Conjecture::B1FF | Conjecture::B2FF => conjecture_b(inst, which),
        Conjecture::CFF => conjecture_c(inst),
    }
}

fn show(start: i64, dims: &[usize]) -> String {
    let parts: Vec<String> = dims
        .iter()
        .enumerate()
        .map(|(t, d)| format!("{}:{d}", start + t as i64))
        .collect();
    format!("[{}]", parts.join(" "))
}

fn complex_error(check: &str, name: &str, e: ComplexError) -> Result<ReportRow, CommandError> {
    match e {
        e @ (ComplexError::DataNotAComplex { .. }
        | ComplexError::NotAComplex { .. }
        | ComplexError::NotChainMap { .. }) => Ok(ReportRow::new(
            check,
            name,
            Verdict::Fail,
            "the fibre data do not give a complex",
        )
        .with_witness(e.to_string())),
        e @ ComplexError::Strata(_) => {
            Ok(
                ReportRow::new(check, name, Verdict::Fail, "level maps unavailable")
                    .with_witness(e.to_string()),
            )
        }
        e => Err(CommandError::Input(format!("{name}: {e}"))),
    }
}

/// Builds `K`, the rows `A^q`, `B^q`, `Cone(N)` and `C(*)` of every fibre.
pub fn cmd_complex(inst: &Instance, q: i64, star: i64) -> Result<CheckReport, CommandError> {
    let mut report = CheckReport::new(format!(
        "complex: K, Cone(N) and C(*) at q = {q}, * = {star}"
    ));
    for (row, details) in per_fibre(inst, |name, f| {
        let d = &f.descriptor;
        let n = d.dim_y() as i64;
        let build = || -> Result<Vec<String>, ComplexError> {
            let kc = build_k(d, Bounds::default_for(d.dim_y()))?;
            let cone = kc.monodromy_cone(star)?;
            let c = build_c(d, star)?;
            let (ai, aj) = (q - 2 * star, q - n);
            Ok(vec![
                format!(
                    "{name}: {} nonzero pieces K^(i,j,k)",
                    kc.nonzero_pieces().len()
                ),
                format!(
                    "  A^{q} = K^({ai}, {aj}) dim {}, B^{q} = K^({}, {aj}) dim {}",
                    kc.bigraded_dim(ai, aj),
                    ai + 2,
                    kc.bigraded_dim(ai + 2, aj)
                ),
                format!(
                    "  A spaces    {}",
                    show(cone.source().start(), cone.source().dims())
                ),
                format!(
                    "  B spaces    {}",
                    show(cone.target().start(), cone.target().dims())
                ),
                format!(
                    "  cone spaces {}",
                    show(cone.complex().start(), cone.complex().dims())
                ),
                format!("  C spaces    {}", show(c.start(), c.dims())),
            ])
        };
        match build() {
            Ok(lines) => Ok((
                ReportRow::new(
                    "complex",
                    name,
                    Verdict::Pass,
                    "d^2 = 0, [d, N] = 0, D^2 = 0",
                ),
                lines,
            )),
            Err(e) => complex_error("complex", name, e).map(|r| (r, Vec::new())),
        }
    })
    .into_iter()
    .collect::<Result<Vec<_>, _>>()?
    {
        report.details.extend(details);
        report.push(row);
    }
    Ok(report)
}

/// Compares `H^*(Cone(N))` with `H^*(C(*))`, at `q` and on the whole window.
pub fn cmd_quasi_iso(inst: &Instance, q: i64, star: i64) -> Result<CheckReport, CommandError> {
    let mut report = CheckReport::new(format!(
        "quasi-iso: H(Cone(N)) against H(C(*)) at q = {q}, * = {star}"
    ));
    let results = per_fibre(inst, |name, f| {
        let d = &f.descriptor;
        match check_quasi_iso(d, Bounds::default_for(d.dim_y()), star) {
            Err(e) => complex_error("quasi-iso", name, e).map(|r| (vec![r], Vec::new())),
            Ok(r) => {
                let at = r.rows.iter().find(|x| x.c_degree == q);
                let (cd, kd) = at.map_or((0, 0), |x| (x.c_dim, x.cone_dim));
                let v = |ok: bool| if ok { Verdict::Pass } else { Verdict::Fail };
                let here = ReportRow::new(
                    format!("quasi-iso[{q}]"),
                    name,
                    v(r.equal_at(q)),
                    format!("dim H^{q}(C) = {cd}, dim H^{}(cone) = {kd}", q + r.shift),
                );
                let here = if r.equal_at(q) {
                    here
                } else {
                    here.with_witness(format!("{cd} ≠ {kd}"))
                };
                let mismatches: Vec<String> = r
                    .rows
                    .iter()
                    .filter(|x| !x.equal)
                    .map(|x| format!("degree {}: C {} cone {}", x.c_degree, x.c_dim, x.cone_dim))
                    .collect();
                let all = ReportRow::new(
                    "quasi-iso[all]",
                    name,
                    v(r.all_equal()),
                    format!(
                        "{} degrees compared, shift {} (canonical {}: {})",
                        r.rows.len(),
                        r.shift,
                        star,
                        if r.canonical_agrees {
                            "agrees"
                        } else {
                            "differs"
                        }
                    ),
                )
                .with_witnesses(mismatches);
                let lines = r
                    .to_string()
                    .lines()
                    .map(|l| format!("{name}: {l}"))
                    .collect();
                Ok((vec![here, all], lines))
            }
        }
    });
    for res in results {
        let (rows, lines) = res?;
        report.details.extend(lines);
        rows.into_iter().for_each(|r| report.push(r));
    }
    Ok(report)
}
