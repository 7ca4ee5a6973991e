use std::fmt;

use super::{FibreDescriptor, StrataError};
use crate::linalg::Matrix;
use crate::scalar::Field;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CheckKind {
    /// `γ ∘ γ = 0`
    GammaSquared,
    /// `ρ ∘ ρ = 0`
    RhoSquared,
    /// `γρ + ργ = 0`; on level 1 the missing level-0 term is `i^*i_*`.
    Anticommute,
    /// A level map could not be assembled.
    Assembly,
}

impl fmt::Display for CheckKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CheckKind::GammaSquared => "gamma^2 = 0",
            CheckKind::RhoSquared => "rho^2 = 0",
            CheckKind::Anticommute => "gamma rho + rho gamma = 0",
            CheckKind::Assembly => "assembly",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationFailure {
    pub check: CheckKind,
    pub r: usize,
    pub p: usize,
    pub j: usize,
    /// First nonzero entry `(row, col, value)` of the offending composite.
    pub witness: Option<(usize, usize, String)>,
    pub detail: String,
}

impl fmt::Display for ValidationFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} fails at level {}, codim {}, index {}",
            self.check, self.r, self.p, self.j
        )?;
        if let Some((row, col, v)) = &self.witness {
            write!(f, ": entry ({row}, {col}) = {v}")?;
        }
        if !self.detail.is_empty() {
            write!(f, ": {}", self.detail)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    checks: usize,
    failures: Vec<ValidationFailure>,
}

impl ValidationReport {
    pub fn passes(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn checks(&self) -> usize {
        self.checks
    }

    pub fn failures(&self) -> &[ValidationFailure] {
        &self.failures
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{} identity checks, {} failures",
            self.checks,
            self.failures.len()
        )?;
        for x in &self.failures {
            writeln!(f, "  {x}")?;
        }
        Ok(())
    }
}

/// Checks `γ² = 0`, `ρ² = 0` and `γρ + ργ = 0` on every level, codimension
/// and higher index, plus `i^*i_* + γρ = 0` on level 1 where `i^*i_*` is
/// supplied explicitly.
pub fn validate<F: Field>(f: &FibreDescriptor<F>) -> ValidationReport {
    let mut report = ValidationReport::default();
    let top = f.dim_y() + 1;
    let max_p = f.chow().max_codim().max(f.dim_y()) + 1;
    for j in f.chow().higher_indices() {
        for p in 0..=max_p {
            for r in 1..=top {
                if r >= 3 {
                    run(&mut report, CheckKind::GammaSquared, r, p, j, || {
                        Ok(&f.gamma(r - 1, p + 1, j)? * &f.gamma(r, p, j)?)
                    });
                }
                run(&mut report, CheckKind::RhoSquared, r, p, j, || {
                    Ok(&f.rho(r + 1, p, j)? * &f.rho(r, p, j)?)
                });
                if r >= 2 {
                    run(&mut report, CheckKind::Anticommute, r, p, j, || {
                        let a = &f.gamma(r + 1, p, j)? * &f.rho(r, p, j)?;
                        let b = &f.rho(r - 1, p + 1, j)? * &f.gamma(r, p, j)?;
                        Ok(&a + &b)
                    });
                } else if f.has_explicit_ii(p, j) {
                    run(&mut report, CheckKind::Anticommute, r, p, j, || {
                        Ok(&f.ii(p, j)? + &f.gamma_rho(p, j)?)
                    });
                }
            }
        }
    }
    report
}

fn run<F: Field>(
    report: &mut ValidationReport,
    check: CheckKind,
    r: usize,
    p: usize,
    j: usize,
    composite: impl FnOnce() -> Result<Matrix<F>, StrataError>,
) {
    report.checks += 1;
    match composite() {
        Ok(m) => {
            if let Some((row, col, v)) = m.first_nonzero() {
                report.failures.push(ValidationFailure {
                    check,
                    r,
                    p,
                    j,
                    witness: Some((row, col, v.to_string())),
                    detail: String::new(),
                });
            }
        }
        Err(e) => {
            let detail = e.to_string();
            if !report
                .failures
                .iter()
                .any(|x| x.check == CheckKind::Assembly && x.detail == detail)
            {
                report.failures.push(ValidationFailure {
                    check: CheckKind::Assembly,
                    r,
                    p,
                    j,
                    witness: None,
                    detail,
                });
            }
        }
    }
}
