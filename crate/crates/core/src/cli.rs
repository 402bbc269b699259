//! Shared plumbing for the command-line front end: state families addressed by
//! name, parameter sweeps, key=value sweep configs and CSV output.
//!
//! Everything here routes through the same library calls the tests use.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::reduction::{reduce_gaussian, reduce_mixture, DensityKernel};
use crate::spectra::{converge, ConvergeOptions, EntanglementResult};
use crate::states::{cat_amplitudes, make_bell, make_cat, make_squeezed, Subsystem};
use crate::swap::{swap_bell, swap_cat, SwapOutcome};

/// Header of every sweep CSV.
pub const CSV_HEADER: &str = "axis1,axis2,entropy_bits,converged,trace_rel_err";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Bell,
    Cat,
    Squeezed,
    SwapBell,
    SwapCat,
}

impl Family {
    pub const ALL: [Family; 5] = [
        Family::Bell,
        Family::Cat,
        Family::Squeezed,
        Family::SwapBell,
        Family::SwapCat,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Bell => "bell",
            Family::Cat => "cat",
            Family::Squeezed => "squeezed",
            Family::SwapBell => "swap-bell",
            Family::SwapCat => "swap-cat",
        }
    }

    /// Parameter names and their defaults.
    pub fn defaults(self) -> &'static [(&'static str, f64)] {
        match self {
            Family::Bell => &[
                ("alpha", 1.0),
                ("beta", 1.0),
                ("sigma", 1.0),
                ("x1", 0.0),
                ("x2", 0.0),
            ],
            Family::Cat => &[("a0_sq", 0.5), ("d", 1.0)],
            Family::Squeezed => &[("r", 1.0)],
            Family::SwapBell => &[
                ("alpha", 1.0),
                ("beta", 1.0),
                ("sigma", 1.0),
                ("c", 0.0),
                ("a", 0.0),
                ("b", 0.0),
                ("mu", 0.0),
            ],
            Family::SwapCat => &[
                ("a0_sq", 0.3),
                ("d", 1.0),
                ("a", 0.0),
                ("b", 0.0),
                ("mu", 0.0),
            ],
        }
    }

    pub fn accepts(self, name: &str) -> bool {
        self.defaults().iter().any(|(n, _)| *n == name)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().replace('_', "-");
        Family::ALL
            .into_iter()
            .find(|f| f.name() == key)
            .ok_or_else(|| Error::Domain {
                name: "family",
                reason: format!(
                    "unknown family '{s}' (expected bell, cat, squeezed, swap-bell or swap-cat)"
                ),
            })
    }
}

/// Parameter names are matched with `-` and `_` treated alike.
pub fn normalize_name(name: &str) -> String {
    name.trim().replace('-', "_")
}

/// Family defaults overridden by `overrides`. Unknown names are rejected.
pub fn resolve_params(
    family: Family,
    overrides: &BTreeMap<String, f64>,
) -> Result<BTreeMap<String, f64>> {
    let mut params: BTreeMap<String, f64> = family
        .defaults()
        .iter()
        .map(|(n, v)| (n.to_string(), *v))
        .collect();
    for (name, value) in overrides {
        let key = normalize_name(name);
        if !family.accepts(&key) {
            return Err(unknown_param(family, &key));
        }
        params.insert(key, *value);
    }
    Ok(params)
}

fn unknown_param(family: Family, name: &str) -> Error {
    let known: Vec<&str> = family.defaults().iter().map(|(n, _)| *n).collect();
    Error::Domain {
        name: "parameter",
        reason: format!(
            "'{name}' is not a {family} parameter (expected one of {})",
            known.join(", ")
        ),
    }
}

fn param(params: &BTreeMap<String, f64>, name: &str) -> f64 {
    params[name]
}

/// Reduced density kernel of the first particle for a family member.
pub fn family_kernel(family: Family, params: &BTreeMap<String, f64>) -> Result<DensityKernel> {
    let p = |n| param(params, n);
    match family {
        Family::Bell => {
            let s = make_bell(p("alpha"), p("beta"), p("x1"), p("x2"), p("sigma"))?;
            Ok(reduce_gaussian(&s, Subsystem::First))
        }
        Family::Squeezed => Ok(reduce_gaussian(&make_squeezed(p("r"))?, Subsystem::First)),
        Family::Cat => {
            let (a0, a1) = cat_amplitudes(p("a0_sq"))?;
            reduce_mixture(&make_cat(a0, a1, p("d"))?, Subsystem::First)
        }
        Family::SwapBell => {
            let outcome = SwapOutcome::new(p("a"), p("b"), p("mu"))?;
            let s = swap_bell(p("alpha"), p("beta"), p("c"), outcome, p("sigma"))?;
            Ok(reduce_gaussian(&s, Subsystem::First))
        }
        Family::SwapCat => {
            let (a0, a1) = cat_amplitudes(p("a0_sq"))?;
            let outcome = SwapOutcome::new(p("a"), p("b"), p("mu"))?;
            reduce_mixture(&swap_cat(a0, a1, p("d"), outcome)?, Subsystem::First)
        }
    }
}

/// Entropy of entanglement of one family member; `overrides` may be partial.
pub fn evaluate(
    family: Family,
    overrides: &BTreeMap<String, f64>,
    opts: &ConvergeOptions,
) -> Result<EntanglementResult> {
    let params = resolve_params(family, overrides)?;
    converge(&family_kernel(family, &params)?, opts)
}

/// Single-line report of an evaluation.
pub fn format_report(r: &EntanglementResult) -> String {
    format!(
        "entropy_bits={:.9e} converged={} side={} delta={:.9e} trace_rel_err={}",
        r.entropy_bits,
        r.converged,
        r.grid.side(),
        r.grid.delta,
        fmt_opt(r.spectrum.trace_relative_error),
    )
}

/// Fixed 10-significant-digit scientific notation; NaN for missing values.
pub fn fmt_num(v: f64) -> String {
    format!("{v:.9e}")
}

fn fmt_opt(v: Option<f64>) -> String {
    fmt_num(v.unwrap_or(f64::NAN))
}

/// One swept parameter.
#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub name: String,
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl Axis {
    pub fn new(name: &str, min: f64, max: f64, steps: usize) -> Self {
        Self {
            name: normalize_name(name),
            min,
            max,
            steps,
        }
    }

    /// Evenly spaced values from `min` to `max` inclusive; one step gives `min`.
    pub fn values(&self) -> Vec<f64> {
        if self.steps <= 1 {
            return vec![self.min];
        }
        let h = (self.max - self.min) / (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| {
                if i + 1 == self.steps {
                    self.max
                } else {
                    self.min + h * i as f64
                }
            })
            .collect()
    }
}

impl FromStr for Axis {
    type Err = Error;

    /// `name:min:max:steps`
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').map(str::trim).collect();
        let bad = |why: &str| Error::Domain {
            name: "axis",
            reason: format!("'{s}': {why} (expected name:min:max:steps)"),
        };
        let [name, min, max, steps] = parts[..] else {
            return Err(bad("wrong number of fields"));
        };
        let num = |v: &str| v.parse::<f64>().map_err(|_| bad("bad number"));
        let steps = steps.parse::<usize>().map_err(|_| bad("bad step count"))?;
        Ok(Axis::new(name, num(min)?, num(max)?, steps))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub family: Family,
    pub axis1: Axis,
    pub axis2: Axis,
    pub fixed: BTreeMap<String, f64>,
    pub tolerance_sigfigs: u32,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        for axis in [&self.axis1, &self.axis2] {
            if !self.family.accepts(&axis.name) {
                return Err(unknown_param(self.family, &axis.name));
            }
            if axis.steps == 0 {
                return Err(Error::Domain {
                    name: "axis",
                    reason: format!("'{}' needs at least one step", axis.name),
                });
            }
            if !(axis.min.is_finite() && axis.max.is_finite() && axis.min <= axis.max) {
                return Err(Error::Domain {
                    name: "axis",
                    reason: format!("'{}' needs finite min <= max", axis.name),
                });
            }
        }
        if self.axis1.name == self.axis2.name {
            return Err(Error::Domain {
                name: "axis",
                reason: "the two axes must sweep different parameters".into(),
            });
        }
        resolve_params(self.family, &self.fixed)?;
        if self.tolerance_sigfigs == 0 || self.tolerance_sigfigs > 12 {
            return Err(Error::Domain {
                name: "tolerance_sigfigs",
                reason: format!("expected 1..=12, got {}", self.tolerance_sigfigs),
            });
        }
        Ok(())
    }

    pub fn converge_options(&self) -> ConvergeOptions {
        ConvergeOptions {
            tol_sigfigs: self.tolerance_sigfigs,
            ..ConvergeOptions::default()
        }
    }
}

/// Parse a sweep config of `key=value` lines. Blank lines and `#` comments
/// are skipped. Recognised keys are `family`, `axis1`, `axis2`,
/// `tolerance_sigfigs` and any parameter name of the family, which fixes it.
pub fn parse_sweep_config(text: &str) -> Result<SweepSpec> {
    let mut entries: Vec<(usize, String, String)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| Error::Domain {
            name: "config",
            reason: format!("line {}: expected key=value", i + 1),
        })?;
        entries.push((i + 1, normalize_name(key), value.trim().to_string()));
    }
    let lookup = |k: &str| {
        entries
            .iter()
            .find(|(_, key, _)| key == k)
            .map(|(_, _, v)| v.as_str())
    };
    let missing = |k: &str| Error::Domain {
        name: "config",
        reason: format!("missing '{k}'"),
    };
    let family: Family = lookup("family").ok_or_else(|| missing("family"))?.parse()?;
    let axis1: Axis = lookup("axis1").ok_or_else(|| missing("axis1"))?.parse()?;
    let axis2: Axis = lookup("axis2").ok_or_else(|| missing("axis2"))?.parse()?;
    let tolerance_sigfigs = match lookup("tolerance_sigfigs") {
        Some(v) => v.parse().map_err(|_| Error::Domain {
            name: "config",
            reason: format!("bad tolerance_sigfigs '{v}'"),
        })?,
        None => ConvergeOptions::default().tol_sigfigs,
    };
    let mut fixed = BTreeMap::new();
    for (line, key, value) in &entries {
        if matches!(
            key.as_str(),
            "family" | "axis1" | "axis2" | "tolerance_sigfigs"
        ) {
            continue;
        }
        let v: f64 = value.parse().map_err(|_| Error::Domain {
            name: "config",
            reason: format!("line {line}: '{value}' is not a number"),
        })?;
        fixed.insert(key.clone(), v);
    }
    let spec = SweepSpec {
        family,
        axis1,
        axis2,
        fixed,
        tolerance_sigfigs,
    };
    spec.validate()?;
    Ok(spec)
}

/// One sweep cell. A cell whose pipeline failed has NaN entropy and error.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub axis1: f64,
    pub axis2: f64,
    pub entropy_bits: f64,
    pub converged: bool,
    pub trace_rel_err: f64,
}

/// Evaluate every cell of the sweep, row-major over `axis1` then `axis2`.
/// Cells run on the current rayon pool; the output order is fixed.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    let opts = spec.converge_options();
    let cells: Vec<(f64, f64)> = spec
        .axis1
        .values()
        .into_iter()
        .flat_map(|u| spec.axis2.values().into_iter().map(move |v| (u, v)))
        .collect();
    Ok(cells
        .into_par_iter()
        .map(|(u, v)| {
            let mut params = spec.fixed.clone();
            params.insert(spec.axis1.name.clone(), u);
            params.insert(spec.axis2.name.clone(), v);
            match evaluate(spec.family, &params, &opts) {
                Ok(r) => SweepRow {
                    axis1: u,
                    axis2: v,
                    entropy_bits: r.entropy_bits,
                    converged: r.converged,
                    trace_rel_err: r.spectrum.trace_relative_error.unwrap_or(f64::NAN),
                },
                Err(_) => SweepRow {
                    axis1: u,
                    axis2: v,
                    entropy_bits: f64::NAN,
                    converged: false,
                    trace_rel_err: f64::NAN,
                },
            }
        })
        .collect())
}

pub fn write_csv<W: Write>(rows: &[SweepRow], mut out: W) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{}",
            fmt_num(r.axis1),
            fmt_num(r.axis2),
            fmt_num(r.entropy_bits),
            r.converged,
            fmt_num(r.trace_rel_err)
        )?;
    }
    out.flush()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_names_round_trip() {
        for f in Family::ALL {
            assert_eq!(f.name().parse::<Family>().unwrap(), f);
        }
        assert_eq!("swap_cat".parse::<Family>().unwrap(), Family::SwapCat);
        assert!("qubit".parse::<Family>().is_err());
    }

    #[test]
    fn axis_values_are_inclusive() {
        let a: Axis = "a0-sq:0:1:5".parse().unwrap();
        assert_eq!(a.name, "a0_sq");
        assert_eq!(a.values(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(Axis::new("d", 2.0, 3.0, 1).values(), vec![2.0]);
        assert!("d:0:1".parse::<Axis>().is_err());
        assert!("d:0:x:3".parse::<Axis>().is_err());
    }

    #[test]
    fn unknown_parameters_are_rejected() {
        let mut o = BTreeMap::new();
        o.insert("gamma".to_string(), 1.0);
        assert!(resolve_params(Family::Bell, &o).is_err());
        o.clear();
        o.insert("a0-sq".to_string(), 0.2);
        assert_eq!(resolve_params(Family::Cat, &o).unwrap()["a0_sq"], 0.2);
    }

    #[test]
    fn config_parsing() {
        let text = "# cat surface\nfamily = cat\naxis1 = d:0.2:2.5:3\naxis2 = a0-sq:0:1:3\n\ntolerance_sigfigs=6\n";
        let spec = parse_sweep_config(text).unwrap();
        assert_eq!(spec.family, Family::Cat);
        assert_eq!(spec.axis2.name, "a0_sq");
        assert_eq!(spec.tolerance_sigfigs, 6);

        let fixed = "family=swap-cat\naxis1=a:-2:2:3\naxis2=b:-2:2:3\nmu=0.5\n";
        assert_eq!(parse_sweep_config(fixed).unwrap().fixed["mu"], 0.5);

        assert!(parse_sweep_config("family=cat\naxis1=d:0:1:2\n").is_err());
        assert!(parse_sweep_config("family=cat\naxis1=r:0:1:2\naxis2=d:0:1:2\n").is_err());
        assert!(parse_sweep_config("family=cat\naxis1=d:1:0:2\naxis2=a0_sq:0:1:2\n").is_err());
        assert!(parse_sweep_config("family=cat\naxis1=d:0:1:2\naxis2=d:0:1:2\n").is_err());
        assert!(parse_sweep_config("family cat\n").is_err());
    }

    #[test]
    fn csv_is_fixed_format() {
        let rows = vec![
            SweepRow {
                axis1: 0.5,
                axis2: 1.0,
                entropy_bits: 0.25,
                converged: true,
                trace_rel_err: 1e-9,
            },
            SweepRow {
                axis1: 0.5,
                axis2: 2.0,
                entropy_bits: f64::NAN,
                converged: false,
                trace_rel_err: f64::NAN,
            },
        ];
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(
            lines[1],
            "5.000000000e-1,1.000000000e0,2.500000000e-1,true,1.000000000e-9"
        );
        assert_eq!(lines[2], "5.000000000e-1,2.000000000e0,NaN,false,NaN");
    }

    #[test]
    fn failed_cells_do_not_abort_sweep() {
        let spec = SweepSpec {
            family: Family::Bell,
            axis1: Axis::new("alpha", 0.0, 1.0, 2),
            axis2: Axis::new("beta", 1.0, 1.0, 1),
            fixed: BTreeMap::new(),
            tolerance_sigfigs: 5,
        };
        let rows = run_sweep(&spec).unwrap();
        assert_eq!(rows.len(), 2);
        assert!(!rows[0].converged && rows[0].entropy_bits.is_nan());
        assert!(rows[1].converged);
    }
}
