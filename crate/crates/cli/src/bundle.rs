//! Instance files: the JSON wire format and its conversion to core types.
//!
//! Matrices are row-major arrays of rational strings such as `"-3/4"`. A
//! matrix with no rows takes its column count from context.

use std::collections::{BTreeMap, BTreeSet};

use degen_core::deligne::{CycleClassDatum, RegulatorDatum};
use degen_core::lfun::{Conductor, LfunError, Poly};
use degen_core::linalg::{LinalgError, Matrix};
use degen_core::strata::{ChowTable, FibreData, MapKind, StrataError, StratumIndex};
use degen_core::{
    AbMap, CompletedL, FPAbelianGroup, FibreDescriptor, PlaceDatum, RatFunc, RatMatrix, Q, Z,
};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BundleError {
    #[error("{path}: {message} (line {line}, column {column})")]
    Json {
        path: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unknown field(s): {}", .0.join(", "))]
    UnknownFields(Vec<String>),
    #[error("{path}: {value:?} is not a rational number")]
    Rational { path: String, value: String },
    #[error("{path}: row {row} has {found} entries, expected {expected}")]
    Ragged {
        path: String,
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("{path}: shape {found:?}, expected {expected:?}")]
    Shape {
        path: String,
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("{what} refers to {name:?}, which is not a declared fibre")]
    UnknownName { what: String, name: String },
    #[error("fibre {fibre}: {reason}")]
    FieldMismatch { fibre: String, reason: String },
    #[error("fibres.{fibre}: {source}")]
    Fibre { fibre: String, source: StrataError },
    #[error("{path}: {source}")]
    Lfun { path: String, source: LfunError },
    #[error("{path}: {message}")]
    Invalid { path: String, message: String },
    #[error("{path}: {source}")]
    Linalg { path: String, source: LinalgError },
}

pub type JsonMatrix = Vec<Vec<String>>;

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct BundleFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<ParamsJson>,
    #[serde(default)]
    pub fibres: BTreeMap<String, FibreJson>,
    #[serde(default)]
    pub places: BTreeMap<String, PlaceJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub motivic: Option<MotivicJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub global: Option<GlobalJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub integral: Option<IntegralJson>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamsJson {
    pub q_cohomological: i64,
    pub a: i64,
    pub field_q: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FibreJson {
    pub components: usize,
    pub dim_y: usize,
    pub q_v: u64,
    pub strata: Vec<Vec<usize>>,
    #[serde(default)]
    pub chow: Vec<ChowJson>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub presentations: Vec<PresentationJson>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub pushforward: Vec<BlockJson>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub pullback: Vec<BlockJson>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub ii: Vec<IiJson>,
    /// `dim CH^{q-a-1}(Y, q-2a-1) ⊗ ℚ`, needed when `q - 2a > 1`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub higher_chow_dim: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChowJson {
    pub stratum: Vec<usize>,
    pub p: usize,
    pub j: usize,
    pub dim: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PresentationJson {
    pub stratum: Vec<usize>,
    pub p: usize,
    pub j: usize,
    pub group: GroupJson,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockJson {
    pub stratum: Vec<usize>,
    pub u: usize,
    pub p: usize,
    pub j: usize,
    pub matrix: JsonMatrix,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IiJson {
    pub p: usize,
    pub j: usize,
    pub matrix: JsonMatrix,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlaceJson {
    pub degree: u32,
    pub frob: JsonMatrix,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MotivicJson {
    pub rank: usize,
    #[serde(default)]
    pub regulators: BTreeMap<String, JsonMatrix>,
    #[serde(default)]
    pub b_rank: usize,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub cycle_class: BTreeMap<String, CycleClassJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CycleClassJson {
    pub xi: JsonMatrix,
    pub tau: JsonMatrix,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GlobalJson {
    pub z: RatFuncJson,
    pub weight: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conductor: Option<ConductorJson>,
}

/// Coefficients from the constant term up.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatFuncJson {
    pub numerator: Vec<String>,
    pub denominator: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConductorJson {
    pub q_exp: i64,
    pub t_exp: i64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntegralJson {
    pub source: GroupJson,
    pub target: GroupJson,
    pub map: JsonMatrix,
}

/// `ℤ^generators` modulo the columns of `relations`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupJson {
    pub generators: usize,
    #[serde(default)]
    pub relations: JsonMatrix,
}

/// Parses an instance file. In strict mode unknown keys are an error;
/// otherwise their paths are returned as warnings.
pub fn parse_bundle(text: &str, strict: bool) -> Result<(BundleFile, Vec<String>), BundleError> {
    let mut unknown = Vec::new();
    let mut de = serde_json::Deserializer::from_str(text);
    let mut record = |path: serde_ignored::Path<'_>| unknown.push(path.to_string());
    let ignored = serde_ignored::Deserializer::new(&mut de, &mut record);
    let file: BundleFile = serde_path_to_error::deserialize(ignored).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        BundleError::Json {
            path,
            line: inner.line(),
            column: inner.column(),
            message: inner.to_string(),
        }
    })?;
    de.end().map_err(|e| BundleError::Json {
        path: ".".into(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    if strict && !unknown.is_empty() {
        return Err(BundleError::UnknownFields(unknown));
    }
    Ok((file, unknown))
}

pub fn to_json_string(file: &BundleFile) -> String {
    let mut s = serde_json::to_string_pretty(file).expect("bundle serialisation cannot fail");
    s.push('\n');
    s
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Params {
    pub q_cohomological: i64,
    pub a: i64,
    pub field_q: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Fibre {
    pub descriptor: FibreDescriptor,
    pub higher_chow_dim: Option<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Motivic {
    pub rank: usize,
    pub regulators: BTreeMap<String, RegulatorDatum<Q>>,
    pub b_rank: usize,
    pub cycle_class: BTreeMap<String, CycleClassDatum<Q>>,
}

/// A checked instance: every name resolves and every residue field is a
/// power of `field_q` matching its place degree.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Instance {
    pub params: Option<Params>,
    pub fibres: BTreeMap<String, Fibre>,
    pub places: BTreeMap<String, PlaceDatum>,
    pub motivic: Option<Motivic>,
    pub global: Option<CompletedL>,
    pub integral: Option<AbMap>,
}

impl Instance {
    /// The set `S`: places that carry both a fibre and Frobenius data.
    pub fn s_places(&self) -> Vec<PlaceDatum> {
        self.places.values().cloned().collect()
    }
}

fn parse_scalar<T: std::str::FromStr>(s: &str, path: &str) -> Result<T, BundleError> {
    s.trim().parse().map_err(|_| BundleError::Rational {
        path: path.to_string(),
        value: s.to_string(),
    })
}

fn parse_matrix_of<T>(
    m: &JsonMatrix,
    cols_if_empty: usize,
    path: &str,
) -> Result<Matrix<T>, BundleError>
where
    T: std::str::FromStr + Clone + num_traits::Zero,
{
    let cols = m.first().map_or(cols_if_empty, Vec::len);
    let mut rows = Vec::with_capacity(m.len());
    for (r, row) in m.iter().enumerate() {
        if row.len() != cols {
            return Err(BundleError::Ragged {
                path: path.to_string(),
                row: r,
                expected: cols,
                found: row.len(),
            });
        }
        let parsed = row
            .iter()
            .enumerate()
            .map(|(c, x)| parse_scalar(x, &format!("{path}[{r}][{c}]")))
            .collect::<Result<Vec<T>, _>>()?;
        rows.push(parsed);
    }
    Matrix::from_rows(rows, cols).map_err(|source| BundleError::Linalg {
        path: path.to_string(),
        source,
    })
}

fn rat_matrix(m: &JsonMatrix, cols_if_empty: usize, path: &str) -> Result<RatMatrix, BundleError> {
    parse_matrix_of(m, cols_if_empty, path)
}

fn int_matrix(m: &JsonMatrix, cols_if_empty: usize, path: &str) -> Result<Matrix<Z>, BundleError> {
    parse_matrix_of(m, cols_if_empty, path)
}

fn expect_shape<T>(m: &Matrix<T>, expected: (usize, usize), path: &str) -> Result<(), BundleError> {
    if m.shape() != expected {
        return Err(BundleError::Shape {
            path: path.to_string(),
            expected,
            found: m.shape(),
        });
    }
    Ok(())
}

fn matrix_json<T: std::fmt::Display + Clone>(m: &Matrix<T>) -> JsonMatrix {
    m.to_rows()
        .iter()
        .map(|r| r.iter().map(ToString::to_string).collect())
        .collect()
}

fn poly_json(p: &Poly<Q>) -> Vec<String> {
    p.coeffs().iter().map(ToString::to_string).collect()
}

fn stratum(v: &[usize], fibre: &str) -> Result<StratumIndex, BundleError> {
    StratumIndex::new(v.to_vec()).map_err(|source| BundleError::Fibre {
        fibre: fibre.to_string(),
        source,
    })
}

fn group(g: &GroupJson, path: &str) -> Result<FPAbelianGroup, BundleError> {
    let rel = int_matrix(&g.relations, 0, &format!("{path}.relations"))?;
    let rel = if g.relations.is_empty() {
        Matrix::zeros(g.generators, 0)
    } else {
        rel
    };
    FPAbelianGroup::new(g.generators, rel).map_err(|source| BundleError::Linalg {
        path: path.to_string(),
        source,
    })
}

fn group_json(g: &FPAbelianGroup) -> GroupJson {
    GroupJson {
        generators: g.generators(),
        relations: matrix_json(g.relations()),
    }
}

fn fibre(name: &str, fj: &FibreJson) -> Result<Fibre, BundleError> {
    let err = |source| BundleError::Fibre {
        fibre: name.to_string(),
        source,
    };
    let mut strata = BTreeSet::new();
    for s in &fj.strata {
        strata.insert(stratum(s, name)?);
    }
    let mut chow = ChowTable::new();
    for c in &fj.chow {
        chow.set(stratum(&c.stratum, name)?, c.p, c.j, c.dim);
    }
    for (t, pj) in fj.presentations.iter().enumerate() {
        let g = group(
            &pj.group,
            &format!("fibres.{name}.presentations[{t}].group"),
        )?;
        chow.set_presentation(stratum(&pj.stratum, name)?, pj.p, pj.j, g)
            .map_err(err)?;
    }
    let blocks = |kind: MapKind, list: &[BlockJson]| {
        let mut out = BTreeMap::new();
        for (t, b) in list.iter().enumerate() {
            let s = stratum(&b.stratum, name)?;
            let cols = match (kind, s.remove_position(b.u)) {
                (_, None) => 0,
                (MapKind::Pushforward, Some(_)) => chow.dim(&s, b.p, b.j),
                (MapKind::Pullback, Some(face)) => chow.dim(&face, b.p, b.j),
            };
            let path = format!("fibres.{name}.{kind}[{t}].matrix");
            out.insert((s, b.u, b.p, b.j), rat_matrix(&b.matrix, cols, &path)?);
        }
        Ok::<_, BundleError>(out)
    };
    let pushforward = blocks(MapKind::Pushforward, &fj.pushforward)?;
    let pullback = blocks(MapKind::Pullback, &fj.pullback)?;
    let mut ii = BTreeMap::new();
    for (t, m) in fj.ii.iter().enumerate() {
        let cols: usize = strata
            .iter()
            .filter(|s| s.level() == 1)
            .map(|s| chow.dim(s, m.p, m.j))
            .sum();
        ii.insert(
            (m.p, m.j),
            rat_matrix(&m.matrix, cols, &format!("fibres.{name}.ii[{t}].matrix"))?,
        );
    }
    let data = FibreData {
        components: fj.components,
        dim_y: fj.dim_y,
        q_v: fj.q_v,
        strata,
        chow,
        pushforward,
        pullback,
        ii,
    };
    let descriptor = FibreDescriptor::new(data).map_err(err)?;
    Ok(Fibre {
        descriptor,
        higher_chow_dim: fj.higher_chow_dim,
    })
}

fn fibre_json(f: &Fibre) -> FibreJson {
    let d = &f.descriptor;
    let blocks = |m: &BTreeMap<(StratumIndex, usize, usize, usize), RatMatrix>| {
        m.iter()
            .map(|((s, u, p, j), x)| BlockJson {
                stratum: s.indices().to_vec(),
                u: *u,
                p: *p,
                j: *j,
                matrix: matrix_json(x),
            })
            .collect()
    };
    FibreJson {
        components: d.components(),
        dim_y: d.dim_y(),
        q_v: d.q_v(),
        strata: d.strata().iter().map(|s| s.indices().to_vec()).collect(),
        chow: d
            .chow()
            .entries()
            .map(|((s, p, j), dim)| ChowJson {
                stratum: s.indices().to_vec(),
                p: *p,
                j: *j,
                dim: *dim,
            })
            .collect(),
        presentations: d
            .chow()
            .presentations()
            .map(|((s, p, j), g)| PresentationJson {
                stratum: s.indices().to_vec(),
                p: *p,
                j: *j,
                group: group_json(g),
            })
            .collect(),
        pushforward: blocks(d.pushforward_blocks()),
        pullback: blocks(d.pullback_blocks()),
        ii: d
            .ii_matrices()
            .iter()
            .map(|(&(p, j), m)| IiJson {
                p,
                j,
                matrix: matrix_json(m),
            })
            .collect(),
        higher_chow_dim: f.higher_chow_dim,
    }
}

fn poly(v: &[String], path: &str) -> Result<Poly<Q>, BundleError> {
    let c = v
        .iter()
        .enumerate()
        .map(|(t, x)| parse_scalar(x, &format!("{path}[{t}]")))
        .collect::<Result<Vec<Q>, _>>()?;
    Ok(Poly::new(c))
}

/// `k` with `q^k = x`, if any.
fn log_int(x: u64, q: u64) -> Option<u32> {
    let (mut y, mut k) = (1u64, 0u32);
    while y < x {
        y = y.checked_mul(q)?;
        k += 1;
    }
    (y == x).then_some(k)
}

impl BundleFile {
    /// Checks the file and builds the core objects.
    pub fn to_instance(&self) -> Result<Instance, BundleError> {
        let params = self.params.map(|p| Params {
            q_cohomological: p.q_cohomological,
            a: p.a,
            field_q: p.field_q,
        });
        if let Some(p) = params {
            if !degen_core::lfun::is_prime_power(p.field_q) {
                return Err(BundleError::Invalid {
                    path: "params.field_q".into(),
                    message: format!("{} is not a prime power", p.field_q),
                });
            }
        }
        let mut fibres = BTreeMap::new();
        for (name, fj) in &self.fibres {
            fibres.insert(name.clone(), fibre(name, fj)?);
        }
        let resolve = |what: String, name: &str| {
            if fibres.contains_key(name) {
                Ok(())
            } else {
                Err(BundleError::UnknownName {
                    what,
                    name: name.to_string(),
                })
            }
        };
        let mut places = BTreeMap::new();
        for (name, pj) in &self.places {
            resolve("places".into(), name)?;
            let path = format!("places.{name}.frob");
            let frob = rat_matrix(&pj.frob, 0, &path)?;
            let pd = PlaceDatum::new(name.clone(), pj.degree, frob).map_err(|source| {
                BundleError::Lfun {
                    path: format!("places.{name}"),
                    source,
                }
            })?;
            places.insert(name.clone(), pd);
        }
        if let Some(p) = params {
            for (name, f) in &fibres {
                let q_v = f.descriptor.q_v();
                let Some(k) = log_int(q_v, p.field_q) else {
                    return Err(BundleError::FieldMismatch {
                        fibre: name.clone(),
                        reason: format!("q_v = {q_v} is not a power of field_q = {}", p.field_q),
                    });
                };
                if let Some(pd) = places.get(name) {
                    if pd.degree() != k {
                        return Err(BundleError::FieldMismatch {
                            fibre: name.clone(),
                            reason: format!(
                                "q_v = {}^{k} but the place has degree {}",
                                p.field_q,
                                pd.degree()
                            ),
                        });
                    }
                }
            }
        }
        let motivic = match &self.motivic {
            None => None,
            Some(m) => {
                let mut regulators = BTreeMap::new();
                for (name, mat) in &m.regulators {
                    resolve("motivic.regulators".into(), name)?;
                    let path = format!("motivic.regulators.{name}");
                    let x = rat_matrix(mat, m.rank, &path)?;
                    let reg = RegulatorDatum::new(m.rank, x).map_err(|e| BundleError::Invalid {
                        path: path.clone(),
                        message: e.to_string(),
                    })?;
                    regulators.insert(name.clone(), reg);
                }
                let mut cycle_class = BTreeMap::new();
                for (name, c) in &m.cycle_class {
                    resolve("motivic.cycle_class".into(), name)?;
                    let path = format!("motivic.cycle_class.{name}");
                    let xi = rat_matrix(&c.xi, m.b_rank, &format!("{path}.xi"))?;
                    let tau = rat_matrix(&c.tau, xi.rows(), &format!("{path}.tau"))?;
                    let cyc = CycleClassDatum::new(m.b_rank, xi, tau).map_err(|e| {
                        BundleError::Invalid {
                            path: path.clone(),
                            message: e.to_string(),
                        }
                    })?;
                    cycle_class.insert(name.clone(), cyc);
                }
                Some(Motivic {
                    rank: m.rank,
                    regulators,
                    b_rank: m.b_rank,
                    cycle_class,
                })
            }
        };
        let global = match &self.global {
            None => None,
            Some(g) => {
                let Some(p) = params else {
                    return Err(BundleError::Invalid {
                        path: "global".into(),
                        message: "a global L-function needs params.field_q".into(),
                    });
                };
                let num = poly(&g.z.numerator, "global.z.numerator")?;
                let den = poly(&g.z.denominator, "global.z.denominator")?;
                let lfun = |source| BundleError::Lfun {
                    path: "global.z".into(),
                    source,
                };
                let z = RatFunc::new(num, den).map_err(lfun)?;
                let conductor = g.conductor.map(|c| Conductor {
                    q_exp: c.q_exp,
                    t_exp: c.t_exp,
                });
                Some(CompletedL::new(z, p.field_q, g.weight, conductor).map_err(lfun)?)
            }
        };
        let integral = match &self.integral {
            None => None,
            Some(ij) => {
                let source = group(&ij.source, "integral.source")?;
                let target = group(&ij.target, "integral.target")?;
                let map = int_matrix(&ij.map, source.generators(), "integral.map")?;
                expect_shape(
                    &map,
                    (target.generators(), source.generators()),
                    "integral.map",
                )?;
                Some(
                    AbMap::new(source, target, map).map_err(|source| BundleError::Linalg {
                        path: "integral.map".into(),
                        source,
                    })?,
                )
            }
        };
        Ok(Instance {
            params,
            fibres,
            places,
            motivic,
            global,
            integral,
        })
    }

    /// The file describing `inst`.
    pub fn from_instance(inst: &Instance) -> BundleFile {
        BundleFile {
            params: inst.params.map(|p| ParamsJson {
                q_cohomological: p.q_cohomological,
                a: p.a,
                field_q: p.field_q,
            }),
            fibres: inst
                .fibres
                .iter()
                .map(|(n, f)| (n.clone(), fibre_json(f)))
                .collect(),
            places: inst
                .places
                .iter()
                .map(|(n, p)| {
                    (
                        n.clone(),
                        PlaceJson {
                            degree: p.degree(),
                            frob: matrix_json(p.frob()),
                        },
                    )
                })
                .collect(),
            motivic: inst.motivic.as_ref().map(|m| MotivicJson {
                rank: m.rank,
                regulators: m
                    .regulators
                    .iter()
                    .map(|(n, r)| (n.clone(), matrix_json(r.matrix())))
                    .collect(),
                b_rank: m.b_rank,
                cycle_class: m
                    .cycle_class
                    .iter()
                    .map(|(n, c)| {
                        (
                            n.clone(),
                            CycleClassJson {
                                xi: matrix_json(c.xi()),
                                tau: matrix_json(c.tau()),
                            },
                        )
                    })
                    .collect(),
            }),
            global: inst.global.as_ref().map(|g| GlobalJson {
                z: RatFuncJson {
                    numerator: poly_json(g.z().numerator()),
                    denominator: poly_json(g.z().denominator()),
                },
                weight: g.weight(),
                conductor: g.conductor().map(|c| ConductorJson {
                    q_exp: c.q_exp,
                    t_exp: c.t_exp,
                }),
            }),
            integral: inst.integral.as_ref().map(|m| IntegralJson {
                source: group_json(m.source()),
                target: group_json(m.target()),
                map: matrix_json(m.matrix()),
            }),
        }
    }
}

/// Reads, parses and checks an instance file.
pub fn load_instance(text: &str, strict: bool) -> Result<(Instance, Vec<String>), BundleError> {
    let (file, warnings) = parse_bundle(text, strict)?;
    Ok((file.to_instance()?, warnings))
}
