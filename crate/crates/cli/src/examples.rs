//! Built-in instance bundles for the worked examples.

use std::collections::BTreeMap;

use degen_core::deligne::{CycleClassDatum, RegulatorDatum};
use degen_core::lfun::{is_prime_power, zeta_rational_function_field};
use degen_core::linalg::Matrix;
use degen_core::strata::{generator_ngon, generator_smooth};
use degen_core::{AbMap, FPAbelianGroup, PlaceDatum, RatMatrix, Q, Z};

use crate::bundle::{Fibre, Instance, Motivic, Params};
use crate::commands::CommandError;

fn q(n: i64) -> Q {
    Q::from_integer(n.into())
}

fn input<E: std::fmt::Display>(e: E) -> CommandError {
    CommandError::Input(e.to_string())
}

fn prime_power(field_q: u64) -> Result<(), CommandError> {
    if is_prime_power(field_q) {
        Ok(())
    } else {
        Err(CommandError::Input(format!(
            "q = {field_q} is not a prime power"
        )))
    }
}

/// A Tate curve over `𝔽_q(T)` at a place of split multiplicative reduction
/// with an `n`-gon fibre, in degree `(q, a) = (3, 1)`.
///
/// `H^2` inertia invariants carry Frobenius `q`, the motivic rank is 0 and
/// `B^1` is spanned by the class of a component.
pub fn ngon(n: usize, field_q: u64) -> Result<Instance, CommandError> {
    prime_power(field_q)?;
    let f = generator_ngon(n, field_q).map_err(input)?;
    let v = "v".to_string();
    let place = PlaceDatum::new(
        v.clone(),
        1,
        Matrix::from_fn(1, 1, |_, _| q(field_q as i64)),
    )
    .map_err(input)?;
    let xi = RatMatrix::from_fn(n, 1, |r, _| q(i64::from(r == 0)));
    let cyc = CycleClassDatum::new(1, xi, Matrix::identity(n)).map_err(input)?;
    let reg = RegulatorDatum::new(0, Matrix::zeros(n, 0)).map_err(input)?;
    Ok(Instance {
        params: Some(Params {
            q_cohomological: 3,
            a: 1,
            field_q,
        }),
        fibres: BTreeMap::from([(
            v.clone(),
            Fibre {
                descriptor: f,
                higher_chow_dim: None,
            },
        )]),
        places: BTreeMap::from([(v.clone(), place)]),
        motivic: Some(Motivic {
            rank: 0,
            regulators: BTreeMap::from([(v.clone(), reg)]),
            b_rank: 1,
            cycle_class: BTreeMap::from([(v, cyc)]),
        }),
        global: None,
        integral: None,
    })
}

/// An elliptic curve with good reduction at a degree-one place: the
/// Frobenius on `H^1` is the companion matrix of `T² - a_v T + q`, and
/// `(q, a) = (2, 0)` lands in the higher case with `CH^1(Y, 1) ⊗ ℚ = 0`.
pub fn smooth_ec(a_v: i64, field_q: u64) -> Result<Instance, CommandError> {
    prime_power(field_q)?;
    if a_v * a_v > 4 * field_q as i64 {
        return Err(CommandError::Input(format!(
            "a_v = {a_v} violates a_v^2 <= 4q for q = {field_q}"
        )));
    }
    let f = generator_smooth(1, &[(0, 0, 1), (1, 0, 1)], field_q).map_err(input)?;
    let v = "v".to_string();
    let frob = RatMatrix::from_rows(vec![vec![q(0), -q(field_q as i64)], vec![q(1), q(a_v)]], 2)
        .map_err(input)?;
    let place = PlaceDatum::new(v.clone(), 1, frob).map_err(input)?;
    let reg = RegulatorDatum::new(0, Matrix::zeros(0, 0)).map_err(input)?;
    Ok(Instance {
        params: Some(Params {
            q_cohomological: 2,
            a: 0,
            field_q,
        }),
        fibres: BTreeMap::from([(
            v.clone(),
            Fibre {
                descriptor: f,
                higher_chow_dim: Some(0),
            },
        )]),
        places: BTreeMap::from([(v.clone(), place)]),
        motivic: Some(Motivic {
            rank: 0,
            regulators: BTreeMap::from([(v, reg)]),
            b_rank: 0,
            cycle_class: BTreeMap::new(),
        }),
        global: None,
        integral: None,
    })
}

/// `K₁` of `K = 𝔽_q(T)` with `S = {∞}`: `Λ = ζ_K`, `(q, a) = (1, 0)`.
///
/// The fibre at `∞` is a point, `B^0 = ℤ`, and `CH^1(X, 1) = 𝔽_q^*` maps to
/// zero. The integral map `ℤ/(q-1) ⊕ ℤ → ℤ` has kernel of order `q - 1`
/// and trivial cokernel.
pub fn zeta_fqt(field_q: u64) -> Result<Instance, CommandError> {
    prime_power(field_q)?;
    let f = generator_smooth(0, &[(0, 0, 1)], field_q).map_err(input)?;
    let inf = "inf".to_string();
    let place = PlaceDatum::new(inf.clone(), 1, Matrix::identity(1)).map_err(input)?;
    let reg = RegulatorDatum::new(0, Matrix::zeros(1, 0)).map_err(input)?;
    let cyc = CycleClassDatum::new(1, Matrix::identity(1), Matrix::identity(1)).map_err(input)?;
    let global = zeta_rational_function_field(field_q).map_err(input)?;
    let units = Z::from(field_q - 1);
    let source = FPAbelianGroup::new(
        2,
        Matrix::from_fn(2, 1, |r, _| if r == 0 { units.clone() } else { Z::from(0) }),
    )
    .map_err(input)?;
    let map = Matrix::from_fn(1, 2, |_, c| Z::from(c as i64));
    let integral = AbMap::new(source, FPAbelianGroup::free(1), map).map_err(input)?;
    Ok(Instance {
        params: Some(Params {
            q_cohomological: 1,
            a: 0,
            field_q,
        }),
        fibres: BTreeMap::from([(
            inf.clone(),
            Fibre {
                descriptor: f,
                higher_chow_dim: None,
            },
        )]),
        places: BTreeMap::from([(inf.clone(), place)]),
        motivic: Some(Motivic {
            rank: 0,
            regulators: BTreeMap::from([(inf.clone(), reg)]),
            b_rank: 1,
            cycle_class: BTreeMap::from([(inf, cyc)]),
        }),
        global: Some(global),
        integral: Some(integral),
    })
}

/// Builds a named example from `key=value` parameters.
pub fn build_example(name: &str, params: &[(String, String)]) -> Result<Instance, CommandError> {
    let allowed: &[&str] = match name {
        "ngon" => &["n", "q"],
        "smooth-ec" => &["a_v", "q"],
        "zeta-fqt" => &["q"],
        _ => {
            return Err(CommandError::Input(format!(
                "unknown example {name:?}; expected ngon, smooth-ec or zeta-fqt"
            )))
        }
    };
    let mut values: BTreeMap<&str, i64> = BTreeMap::new();
    for (k, v) in params {
        let Some(key) = allowed.iter().find(|a| **a == k.as_str()) else {
            return Err(CommandError::Input(format!(
                "{name} takes {}; got {k:?}",
                allowed.join(", ")
            )));
        };
        let x: i64 = v
            .parse()
            .map_err(|_| CommandError::Input(format!("{k}={v}: expected an integer")))?;
        values.insert(key, x);
    }
    let get = |k: &str, default: i64| values.get(k).copied().unwrap_or(default);
    let field_q = |default: i64| -> Result<u64, CommandError> {
        u64::try_from(get("q", default))
            .map_err(|_| CommandError::Input("q must be positive".into()))
    };
    match name {
        "ngon" => {
            let n = usize::try_from(get("n", 3))
                .map_err(|_| CommandError::Input("n must be positive".into()))?;
            ngon(n, field_q(5)?)
        }
        "smooth-ec" => smooth_ec(get("a_v", 1), field_q(5)?),
        _ => zeta_fqt(field_q(4)?),
    }
}

/// Splits `key=value` arguments.
pub fn parse_kv(args: &[String]) -> Result<Vec<(String, String)>, CommandError> {
    args.iter()
        .map(|a| {
            a.split_once('=')
                .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
                .ok_or_else(|| CommandError::Input(format!("expected key=value, got {a:?}")))
        })
        .collect()
}
